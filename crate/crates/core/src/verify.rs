//! The verification suite behind `hyperc verify`.
//!
//! Every check is a named property with a pinned threshold. Results carry
//! no timing information so that reports are reproducible byte for byte.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{builtin, Circuit, Gate, OrderedCircuit};
use crate::corpus::{random_complex_circuit, random_quaternion_circuit, with_random_order};
use crate::demos::{
    commitment_report, commutative_twin, order_witness, ordering_spread, CommitmentGates,
    WITNESS_FIXTURES,
};
use crate::embed::{
    compile, verify_circularity, verify_homomorphism, verify_statistics, CompileOptions,
    CompiledCircuit, ComplexToReal, Embedding, EmbeddingKind, QuaternionToComplex,
    QuaternionToReal, TopInit,
};
use crate::error::Result;
use crate::linalg::StateVector;
use crate::scalar::Quaternion;

pub const HOMOMORPHISM_TOL: f64 = 1e-11;
pub const END_TO_END_TOL: f64 = 1e-10;
pub const INIT_AGREEMENT_TOL: f64 = 1e-12;
pub const ORDER_GAP_MIN: f64 = 0.05;
pub const HOMOMORPHISM_DIMS: [usize; 3] = [2, 4, 8];
pub const CORPUS_SIZE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random pairs per (embedding, dimension); also caps the corpus size.
    pub trials: usize,
    /// Threshold for compiled end-to-end checks.
    pub tol: f64,
    /// Swap `h` for a broken grid in the homomorphism checks.
    pub corrupt: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 2024,
            trials: 100,
            tol: END_TO_END_TOL,
            corrupt: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// What the check certifies.
    pub property: &'static str,
    pub value: f64,
    pub threshold: f64,
    /// `value <= threshold`, or `>=` for lower bounds.
    pub lower_bound: bool,
    pub passed: bool,
}

impl Check {
    fn at_most(
        suite: &'static str,
        name: impl Into<String>,
        property: &'static str,
        value: f64,
        threshold: f64,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            property,
            value,
            threshold,
            lower_bound: false,
            passed: value <= threshold,
        }
    }

    fn at_least(
        suite: &'static str,
        name: impl Into<String>,
        property: &'static str,
        value: f64,
        threshold: f64,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            property,
            value,
            threshold,
            lower_bound: true,
            passed: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `[[re, im], [im, re]]`: not a homomorphism.
struct BrokenComplexToReal;

impl Embedding for BrokenComplexToReal {
    type Upper = Complex64;
    type Lower = f64;
    const KIND: EmbeddingKind = EmbeddingKind::H;

    fn functional(row: usize, col: usize, z: Complex64) -> f64 {
        if row == col {
            z.re
        } else {
            z.im
        }
    }
}

/// Random circuits shared by the circularity, statistics and resource checks.
pub struct Corpus {
    pub complex: Vec<(OrderedCircuit<Complex64>, StateVector<Complex64>)>,
    pub quaternion: Vec<(OrderedCircuit<Quaternion>, StateVector<Quaternion>)>,
}

impl Corpus {
    /// `size` complex circuits (n ≤ 5, s ≤ 15) and `size` quaternionic
    /// circuits (n ≤ 3, s ≤ 10), each with a random σ and random input.
    pub fn generate(seed: u64, size: usize) -> Result<Self> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut complex = Vec::with_capacity(size);
        for _ in 0..size {
            let n = rng.random_range(1..=5);
            let s = rng.random_range(1..=15);
            let oc = with_random_order(random_complex_circuit(n, s, &mut rng)?, &mut rng)?;
            complex.push((oc, StateVector::random(n, &mut rng)));
        }
        let mut quaternion = Vec::with_capacity(size);
        for _ in 0..size {
            let n = rng.random_range(1..=3);
            let s = rng.random_range(1..=10);
            let oc = with_random_order(random_quaternion_circuit(n, s, &mut rng)?, &mut rng)?;
            quaternion.push((oc, StateVector::random(n, &mut rng)));
        }
        Ok(Corpus {
            complex,
            quaternion,
        })
    }
}

fn homomorphism_checks<E: Embedding>(
    label: &str,
    trials: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Check>,
) -> Result<()> {
    for dim in HOMOMORPHISM_DIMS {
        let r = verify_homomorphism::<E, _>(trials, dim, rng)?;
        let name = format!("{label} dim {dim}");
        out.push(Check::at_most(
            "homomorphism",
            format!("{name} product"),
            "embed(AB) = embed(A) embed(B)",
            r.product,
            HOMOMORPHISM_TOL,
        ));
        out.push(Check::at_most(
            "homomorphism",
            format!("{name} adjoint"),
            "embed(A') = embed(A)'",
            r.adjoint,
            HOMOMORPHISM_TOL,
        ));
        out.push(Check::at_most(
            "homomorphism",
            format!("{name} group"),
            "embed(A) is in the target group",
            r.group,
            HOMOMORPHISM_TOL,
        ));
    }
    Ok(())
}

struct CompiledCase<'a, E: Embedding> {
    source: &'a OrderedCircuit<E::Upper>,
    input: &'a StateVector<E::Upper>,
    compiled: CompiledCircuit<E::Lower>,
}

fn compile_case<'a, E: Embedding>(
    source: &'a OrderedCircuit<E::Upper>,
    input: &'a StateVector<E::Upper>,
) -> Result<CompiledCase<'a, E>> {
    Ok(CompiledCase {
        source,
        input,
        compiled: compile::<E>(source, CompileOptions::default())?,
    })
}

#[derive(Default)]
struct Worst {
    circularity: f64,
    distance: [f64; 3],
    init_spread: f64,
    state: f64,
    resources: f64,
}

fn check_case<E: Embedding>(case: &CompiledCase<'_, E>, worst: &mut Worst) -> Result<()> {
    worst.circularity = worst
        .circularity
        .max(verify_circularity::<E>(case.source, &case.compiled)?);
    let mut distances = [0.0; 3];
    for (k, init) in TopInit::ALL.into_iter().enumerate() {
        let r = verify_statistics::<E>(case.source, &case.compiled, case.input, init)?;
        distances[k] = r.distance;
        worst.distance[k] = worst.distance[k].max(r.distance);
        worst.state = worst.state.max(r.state_deviation);
    }
    let spread = distances.iter().fold(0.0_f64, |m, a| {
        distances.iter().fold(m, |m, b| m.max((a - b).abs()))
    });
    worst.init_spread = worst.init_spread.max(spread);

    let t = E::KIND.top_wires();
    let src = case.source.circuit();
    let cc = case.compiled.circuit.circuit();
    let arity_ok = cc.gates().iter().all(|g| g.arity() <= src.max_arity() + t);
    let ok = cc.width() == src.width() + t && cc.len() == src.len() && arity_ok;
    if !ok {
        worst.resources = 1.0;
    }
    Ok(())
}

fn push_compiled_checks(label: &str, worst: &Worst, tol: f64, out: &mut Vec<Check>) {
    out.push(Check::at_most(
        "circularity",
        label,
        "compiled operator equals embed(source operator)",
        worst.circularity,
        tol,
    ));
    for (k, init) in TopInit::ALL.into_iter().enumerate() {
        out.push(Check::at_most(
            "statistics",
            format!("{label} top={}", init.name()),
            "bottom-wire marginal equals source distribution",
            worst.distance[k],
            tol,
        ));
    }
    out.push(Check::at_most(
        "statistics",
        format!("{label} init agreement"),
        "distances agree across top inits",
        worst.init_spread,
        INIT_AGREEMENT_TOL,
    ));
    out.push(Check::at_most(
        "statistics",
        format!("{label} state images"),
        "run(cc, embed_c v) = embed_c run(c, v)",
        worst.state,
        tol,
    ));
    out.push(Check::at_most(
        "resources",
        label,
        "width n+t, s gates, arity <= d+t",
        worst.resources,
        0.0,
    ));
}

fn real_gate_check(out: &mut Vec<Check>) -> Result<()> {
    let names = ["H", "X", "Z", "CNOT", "SWAP", "TOFFOLI"];
    let gates: Vec<Gate<Complex64>> = names
        .iter()
        .enumerate()
        .map(|(id, name)| {
            let arity = builtin::<f64>(name)
                .expect("builtin")
                .rows()
                .trailing_zeros() as usize;
            let wires = (id % (4 - arity + 1)..).take(arity).collect();
            Gate::new(id as u64, wires, builtin(name).expect("builtin"))
        })
        .collect();
    let oc = OrderedCircuit::with_default_order(Circuit::new(4, gates)?)?;
    let cc = compile::<ComplexToReal>(&oc, CompileOptions::default())?;
    let mut mismatches = 0usize;
    for (src, out) in oc.ordered_gates().zip(cc.circuit.ordered_gates()) {
        let same = src
            .matrix
            .entries()
            .iter()
            .zip(out.matrix.entries())
            .all(|(a, b)| a.re.to_bits() == b.to_bits());
        let shifted: Vec<usize> = src.wires.iter().map(|w| w + 1).collect();
        if !same || out.wires != shifted || out.wires.contains(&0) {
            mismatches += 1;
        }
    }
    if cc.provenance.iter().any(|p| p.top_wire_used) {
        mismatches += 1;
    }
    out.push(Check::at_most(
        "real-gates",
        "real-only circuit under h",
        "gates copied bit for bit, top wire unused",
        mismatches as f64,
        0.0,
    ));
    Ok(())
}

fn ordering_checks(tol: f64, out: &mut Vec<Check>) -> Result<()> {
    let input = StateVector::basis(2, 0);
    let report = ordering_spread(&order_witness(), &input, 100)?;
    let mut fixture_dev: f64 = if report.sorts.len() == WITNESS_FIXTURES.len() {
        0.0
    } else {
        1.0
    };
    for ((sigma, expect), (got_sigma, got)) in WITNESS_FIXTURES
        .iter()
        .zip(report.sorts.iter().zip(&report.distributions))
    {
        if sigma.as_slice() != got_sigma.as_slice() {
            fixture_dev = 1.0;
        }
        for (p, q) in expect.iter().zip(got.probs()) {
            fixture_dev = fixture_dev.max((p - q).abs());
        }
    }
    out.push(Check::at_most(
        "ordering",
        "witness fixtures",
        "distributions match pinned values",
        fixture_dev,
        tol,
    ));
    out.push(Check::at_least(
        "ordering",
        "witness spread",
        "two orders differ observably",
        report.max_distance,
        ORDER_GAP_MIN,
    ));
    let twin = ordering_spread(&commutative_twin(&order_witness())?, &input, 100)?;
    out.push(Check::at_most(
        "ordering",
        "commutative twin spread",
        "complex gates are order independent",
        twin.max_distance,
        tol,
    ));
    Ok(())
}

fn commitment_checks(tol: f64, out: &mut Vec<Check>) -> Result<()> {
    let q = commitment_report(&CommitmentGates::quaternionic())?;
    out.push(Check::at_least(
        "commitment",
        "opening gap",
        "commit 0 and 1 open differently",
        q.gap,
        ORDER_GAP_MIN,
    ));
    out.push(Check::at_most(
        "commitment",
        "pre-opening marginals",
        "Alice's wire looks the same before opening",
        q.concealment_gap,
        tol,
    ));
    let c = commitment_report(&CommitmentGates::commuting())?;
    out.push(Check::at_most(
        "commitment",
        "commuting gates gap",
        "commuting gates cannot commit",
        c.gap,
        tol,
    ));
    Ok(())
}

/// Runs every check. Errors only on internal failures; failed properties
/// are reported in the result.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if config.corrupt {
        homomorphism_checks::<BrokenComplexToReal>("h", config.trials, &mut rng, &mut checks)?;
    } else {
        homomorphism_checks::<ComplexToReal>("h", config.trials, &mut rng, &mut checks)?;
    }
    homomorphism_checks::<QuaternionToComplex>("hhat", config.trials, &mut rng, &mut checks)?;
    homomorphism_checks::<QuaternionToReal>("shat", config.trials, &mut rng, &mut checks)?;

    let corpus = Corpus::generate(
        config.seed.wrapping_add(1),
        config.trials.clamp(1, CORPUS_SIZE),
    )?;
    let mut worst = Worst::default();
    for (oc, v) in corpus.complex.iter() {
        check_case(&compile_case::<ComplexToReal>(oc, v)?, &mut worst)?;
    }
    push_compiled_checks("h on complex corpus", &worst, config.tol, &mut checks);
    for (label, shat) in [
        ("hhat on quaternion corpus", false),
        ("shat on quaternion corpus", true),
    ] {
        let mut worst = Worst::default();
        for (oc, v) in corpus.quaternion.iter() {
            if shat {
                check_case(&compile_case::<QuaternionToReal>(oc, v)?, &mut worst)?;
            } else {
                check_case(&compile_case::<QuaternionToComplex>(oc, v)?, &mut worst)?;
            }
        }
        push_compiled_checks(label, &worst, config.tol, &mut checks);
    }

    real_gate_check(&mut checks)?;
    ordering_checks(config.tol, &mut checks)?;
    commitment_checks(config.tol, &mut checks)?;

    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        config: *config,
        checks,
        passed,
    })
}
