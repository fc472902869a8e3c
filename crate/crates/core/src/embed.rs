//! Block embeddings between domains, and the circuit compiler built on them.
//!
//! Each embedding is a small grid of real-linear functionals. An upper
//! matrix `M` maps to the block matrix whose `(r, c)` block applies grid
//! entry `(r, c)` to every entry of `M`:
//!
//! * `h`: complex → real, grid `[[re, im], [−im, re]]`
//! * `ĥ`: quaternion → complex, grid `[[co, we], [−we*, co*]]`
//! * `Ŝ`: quaternion → real, a 4×4 grid of `re, im, jm, km` with signs
//!
//! All three are injective group homomorphisms, so an `n`-wire circuit
//! becomes an `(n + t)`-wire circuit whose extra top wires (indices `0..t`)
//! carry the block index. Column `c` of the grid maps states into the
//! lower domain with the top wires set to `|c⟩`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::circuit::{ordered_operator, Circuit, Gate, GateId, OrderedCircuit};
use crate::error::{Error, Result};
use crate::linalg::{random_group_element, Matrix, StateVector};
use crate::scalar::{Domain, Quaternion, Scalar};
use crate::sim::{marginal, measure_all, run, MeasurementDistribution};

/// Threshold under which an imaginary part counts as zero for the
/// real-gate shortcut.
pub const REAL_GATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    /// complex → real
    H,
    /// quaternion → complex
    #[serde(rename = "hhat")]
    HHat,
    /// quaternion → real
    #[serde(rename = "shat")]
    SHat,
}

impl EmbeddingKind {
    pub fn name(self) -> &'static str {
        match self {
            EmbeddingKind::H => "h",
            EmbeddingKind::HHat => "hhat",
            EmbeddingKind::SHat => "shat",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "h" => Some(EmbeddingKind::H),
            "hhat" => Some(EmbeddingKind::HHat),
            "shat" => Some(EmbeddingKind::SHat),
            _ => None,
        }
    }

    pub fn source(self) -> Domain {
        match self {
            EmbeddingKind::H => Domain::Complex,
            EmbeddingKind::HHat | EmbeddingKind::SHat => Domain::Quaternion,
        }
    }

    pub fn target(self) -> Domain {
        match self {
            EmbeddingKind::H | EmbeddingKind::SHat => Domain::Real,
            EmbeddingKind::HHat => Domain::Complex,
        }
    }

    /// Extra wires added on top of the circuit.
    pub fn top_wires(self) -> usize {
        match self {
            EmbeddingKind::H | EmbeddingKind::HHat => 1,
            EmbeddingKind::SHat => 2,
        }
    }
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A functional grid mapping `Upper` entries to `Lower` blocks.
pub trait Embedding {
    type Upper: Scalar;
    type Lower: Scalar;
    const KIND: EmbeddingKind;

    /// Grid entry `(row, col)` applied to one scalar.
    fn functional(row: usize, col: usize, x: Self::Upper) -> Self::Lower;

    /// `Some(v)` when the whole grid acts on `x` as `v·I`, which lets the
    /// compiler leave the top wires out. Only `h` of a real scalar does.
    fn as_untouched(_x: Self::Upper) -> Option<Self::Lower> {
        None
    }

    fn grid_size() -> usize {
        1 << Self::KIND.top_wires()
    }
}

/// `h`: SU(N) → SO(2N).
#[derive(Debug, Clone, Copy)]
pub struct ComplexToReal;

impl Embedding for ComplexToReal {
    type Upper = Complex64;
    type Lower = f64;
    const KIND: EmbeddingKind = EmbeddingKind::H;

    fn functional(row: usize, col: usize, z: Complex64) -> f64 {
        match (row, col) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => z.im,
            (1, 0) => -z.im,
            _ => unreachable!("h grid is 2x2"),
        }
    }

    fn as_untouched(z: Complex64) -> Option<f64> {
        (z.im.abs() <= REAL_GATE_TOL).then_some(z.re)
    }
}

/// `ĥ`: Sp(N) → SU(2N).
#[derive(Debug, Clone, Copy)]
pub struct QuaternionToComplex;

impl Embedding for QuaternionToComplex {
    type Upper = Quaternion;
    type Lower = Complex64;
    const KIND: EmbeddingKind = EmbeddingKind::HHat;

    fn functional(row: usize, col: usize, q: Quaternion) -> Complex64 {
        match (row, col) {
            (0, 0) => q.co(),
            (0, 1) => q.we(),
            (1, 0) => -q.we().conj(),
            (1, 1) => q.co().conj(),
            _ => unreachable!("hhat grid is 2x2"),
        }
    }
}

/// `Ŝ`: Sp(N) → SO(4N), from the 4×4 real representation of quaternions.
#[derive(Debug, Clone, Copy)]
pub struct QuaternionToReal;

impl QuaternionToReal {
    // (component, sign) per grid cell; components are re, i, j, k
    const GRID: [[(usize, f64); 4]; 4] = [
        [(0, 1.0), (1, 1.0), (3, -1.0), (2, -1.0)],
        [(1, -1.0), (0, 1.0), (2, -1.0), (3, 1.0)],
        [(3, 1.0), (2, 1.0), (0, 1.0), (1, 1.0)],
        [(2, 1.0), (3, -1.0), (1, -1.0), (0, 1.0)],
    ];
}

impl Embedding for QuaternionToReal {
    type Upper = Quaternion;
    type Lower = f64;
    const KIND: EmbeddingKind = EmbeddingKind::SHat;

    fn functional(row: usize, col: usize, q: Quaternion) -> f64 {
        let (component, sign) = Self::GRID[row][col];
        sign * q.components()[component]
    }
}

/// Block image of any matrix (square or not).
pub fn embed_block<E: Embedding>(m: &Matrix<E::Upper>) -> Matrix<E::Lower> {
    let (r, c) = (m.rows(), m.cols());
    let g = E::grid_size();
    Matrix::from_fn(g * r, g * c, |i, j| {
        E::functional(i / r, j / c, m[(i % r, j % c)])
    })
}

/// Image of a square matrix under the embedding.
pub fn embed_matrix<E: Embedding>(m: &Matrix<E::Upper>) -> Result<Matrix<E::Lower>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(embed_block::<E>(m))
}

/// Column `column` of the grid tensored with `v`: the lower-domain state
/// with top wires in basis state `|column⟩`.
pub fn embed_vector<E: Embedding>(
    column: usize,
    v: &StateVector<E::Upper>,
) -> Result<StateVector<E::Lower>> {
    let g = E::grid_size();
    if column >= g {
        return Err(Error::InvalidColumn {
            column,
            available: g,
        });
    }
    v.check_normalized()?;
    let n = v.dim();
    let amps = (0..g * n)
        .map(|i| E::functional(i / n, column, v.amplitudes()[i % n]))
        .collect();
    StateVector::new(amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Emit real gates under `h` without the top wire, as the plain real
    /// matrix on the shifted wires.
    pub real_gate_shortcut: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            real_gate_shortcut: true,
        }
    }
}

/// Where an emitted gate came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub source_gate: GateId,
    pub embedding: EmbeddingKind,
    pub top_wire_used: bool,
}

/// A lower-domain circuit produced by [`compile`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCircuit<L> {
    pub circuit: OrderedCircuit<L>,
    pub embedding: EmbeddingKind,
    pub source_width: usize,
    /// One entry per emitted gate, in evaluation order.
    pub provenance: Vec<Provenance>,
}

impl<L: Scalar> CompiledCircuit<L> {
    pub fn top_wires(&self) -> usize {
        self.embedding.top_wires()
    }

    /// Lower-domain wires that carry the original circuit's wires.
    pub fn bottom_wires(&self) -> Vec<usize> {
        (self.top_wires()..self.top_wires() + self.source_width).collect()
    }
}

/// Replaces each gate, in σ order, by its image acting on the top wires
/// plus its own wires shifted down. Gate ids and σ are preserved.
pub fn compile<E: Embedding>(
    oc: &OrderedCircuit<E::Upper>,
    options: CompileOptions,
) -> Result<CompiledCircuit<E::Lower>> {
    let t = E::KIND.top_wires();
    let mut gates = Vec::with_capacity(oc.circuit().len());
    let mut provenance = Vec::with_capacity(oc.circuit().len());
    for g in oc.ordered_gates() {
        let shifted = g.wires.iter().map(|w| w + t);
        let untouched = if options.real_gate_shortcut {
            let entries: Option<Vec<E::Lower>> = g
                .matrix
                .entries()
                .iter()
                .map(|&x| E::as_untouched(x))
                .collect();
            entries.map(|e| Matrix::from_vec(g.matrix.rows(), g.matrix.cols(), e))
        } else {
            None
        };
        let (wires, matrix, top_wire_used) = match untouched {
            Some(m) => (shifted.collect(), m?, false),
            None => (
                (0..t).chain(shifted).collect(),
                embed_matrix::<E>(&g.matrix)?,
                true,
            ),
        };
        gates.push(Gate::new(g.id, wires, matrix));
        provenance.push(Provenance {
            source_gate: g.id,
            embedding: E::KIND,
            top_wire_used,
        });
    }
    let circuit = Circuit::new(oc.width() + t, gates)?;
    let circuit = OrderedCircuit::new(circuit, oc.sigma().to_vec())?;
    Ok(CompiledCircuit {
        circuit,
        embedding: E::KIND,
        source_width: oc.width(),
        provenance,
    })
}

/// `‖O_compiled − embed(O_source)‖_max` over the full operators.
pub fn verify_circularity<E: Embedding>(
    oc: &OrderedCircuit<E::Upper>,
    cc: &CompiledCircuit<E::Lower>,
) -> Result<f64> {
    let source = ordered_operator(oc)?;
    let compiled = ordered_operator(&cc.circuit)?;
    Ok(compiled.max_dist(&embed_matrix::<E>(&source)?))
}

/// Worst deviations seen by [`verify_homomorphism`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct HomomorphismReport {
    /// `embed(AB) − embed(A)·embed(B)`
    pub product: f64,
    /// `embed(A‡) − embed(A)†`
    pub adjoint: f64,
    /// `embed(A)†·embed(A) − I`
    pub group: f64,
}

impl HomomorphismReport {
    pub fn worst(&self) -> f64 {
        self.product.max(self.adjoint).max(self.group)
    }

    fn absorb(&mut self, other: HomomorphismReport) {
        self.product = self.product.max(other.product);
        self.adjoint = self.adjoint.max(other.adjoint);
        self.group = self.group.max(other.group);
    }
}

/// Homomorphism, adjoint and group-membership deviations for one pair.
pub fn homomorphism_deviation<E: Embedding>(
    a: &Matrix<E::Upper>,
    b: &Matrix<E::Upper>,
) -> Result<HomomorphismReport> {
    let ea = embed_matrix::<E>(a)?;
    let eb = embed_matrix::<E>(b)?;
    let product = embed_matrix::<E>(&a.matmul(b)?)?.max_dist(&ea.matmul(&eb)?);
    let adjoint = embed_matrix::<E>(&a.adjoint())?.max_dist(&ea.adjoint());
    let group = ea.group_deviation()?;
    Ok(HomomorphismReport {
        product,
        adjoint,
        group,
    })
}

/// Checks the embedding on `trials` random pairs of `dim × dim` group elements.
pub fn verify_homomorphism<E: Embedding, R: Rng + ?Sized>(
    trials: usize,
    dim: usize,
    rng: &mut R,
) -> Result<HomomorphismReport> {
    let mut report = HomomorphismReport::default();
    for _ in 0..trials {
        let a = random_group_element::<E::Upper, _>(dim, rng)?;
        let b = random_group_element::<E::Upper, _>(dim, rng)?;
        report.absorb(homomorphism_deviation::<E>(&a, &b)?);
    }
    Ok(report)
}

/// Initial state of the top wire(s) of a compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopInit {
    /// Grid column 0.
    Zero,
    /// Grid column 1.
    One,
    /// Equal-weight ensemble over every grid column.
    Mixed,
}

impl TopInit {
    pub const ALL: [TopInit; 3] = [TopInit::Zero, TopInit::One, TopInit::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            TopInit::Zero => "zero",
            TopInit::One => "one",
            TopInit::Mixed => "mixed",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "zero" => Some(TopInit::Zero),
            "one" => Some(TopInit::One),
            "mixed" => Some(TopInit::Mixed),
            _ => None,
        }
    }

    fn columns(self, grid: usize) -> Vec<usize> {
        match self {
            TopInit::Zero => vec![0],
            TopInit::One => vec![1],
            TopInit::Mixed => (0..grid).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatisticsReport {
    /// L∞ distance between the compiled circuit's bottom-wire marginal and
    /// the source circuit's output distribution.
    pub distance: f64,
    /// Max deviation of `run(cc, embed_c(v))` from `embed_c(run(c, v))`.
    pub state_deviation: f64,
}

/// Bottom-wire statistics of the compiled circuit for a given top init.
pub fn compiled_statistics<E: Embedding>(
    cc: &CompiledCircuit<E::Lower>,
    input: &StateVector<E::Upper>,
    top_init: TopInit,
) -> Result<MeasurementDistribution> {
    let bottom = cc.bottom_wires();
    let dists = top_init
        .columns(E::grid_size())
        .into_iter()
        .map(|col| {
            let out = run(&cc.circuit, &embed_vector::<E>(col, input)?)?;
            Ok(marginal(&measure_all(&out)?, &bottom)?.into_distribution())
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementDistribution::average(&dists)
}

/// Compares compiled and source statistics, and checks that the compiled
/// circuit maps each embedded input to the embedding of the source output.
pub fn verify_statistics<E: Embedding>(
    oc: &OrderedCircuit<E::Upper>,
    cc: &CompiledCircuit<E::Lower>,
    input: &StateVector<E::Upper>,
    top_init: TopInit,
) -> Result<StatisticsReport> {
    let source_out = run(oc, input)?;
    let expected = measure_all(&source_out)?;
    let distance = compiled_statistics::<E>(cc, input, top_init)?.distance(&expected);
    let mut state_deviation: f64 = 0.0;
    for col in top_init.columns(E::grid_size()) {
        let compiled = run(&cc.circuit, &embed_vector::<E>(col, input)?)?;
        let image = embed_vector::<E>(col, &source_out)?;
        state_deviation = state_deviation.max(compiled.max_dist(&image));
    }
    Ok(StatisticsReport {
        distance,
        state_deviation,
    })
}
