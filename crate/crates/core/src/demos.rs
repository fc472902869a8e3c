//! Order dependence of quaternionic circuits, and a toy bit commitment that
//! uses it.
//!
//! The shipped witness is a 2-quaterbit circuit
//!
//! ```text
//! wire 0: ─ROTQ_I(0)────────ROTQ_I(2)─
//! wire 1: ──────────ROTQ_J(1)─────────
//! ```
//!
//! Gate 1 is unordered with respect to both gates on wire 0. Evaluating it
//! before or after gate 0 flips the sign of the `k` component of the
//! `|11⟩` amplitude (`ij = k`, `ji = −k`). A real closing layer cannot
//! see that sign, since `1, i, j, k` stay mutually orthogonal under real
//! combinations; gate 2 mixes the `|01⟩` and `|11⟩` amplitudes with an
//! `i` coefficient and turns the sign into a 0.5 probability shift.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{builtin, Circuit, Gate, GateId, OrderedCircuit};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, StateVector};
use crate::scalar::{Quaternion, Scalar};
use crate::sim::{marginal, measure_all, run, DistributionJson, MeasurementDistribution};

/// Output distributions of one circuit under several evaluation orders.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    pub sorts: Vec<Vec<GateId>>,
    pub distributions: Vec<MeasurementDistribution>,
    /// Pairwise L∞ distances, symmetric with a zero diagonal.
    pub distances: Vec<Vec<f64>>,
    pub max_distance: f64,
}

#[derive(Serialize)]
struct OrderingRow<'a> {
    sigma: &'a [GateId],
    distribution: DistributionJson,
}

#[derive(Serialize)]
struct OrderingJson<'a> {
    demo: &'static str,
    orders: Vec<OrderingRow<'a>>,
    distances: &'a [Vec<f64>],
    max_distance: f64,
}

impl OrderingReport {
    pub fn to_json(&self) -> serde_json::Value {
        let orders = self
            .sorts
            .iter()
            .zip(&self.distributions)
            .map(|(sigma, d)| OrderingRow {
                sigma,
                distribution: d.to_json(),
            })
            .collect();
        serde_json::to_value(OrderingJson {
            demo: "ordering",
            orders,
            distances: &self.distances,
            max_distance: self.max_distance,
        })
        .expect("report serializes")
    }
}

/// Runs `input` through every topological sort of `circuit` (at most `cap`)
/// and compares the measured distributions.
pub fn ordering_spread<D: Scalar>(
    circuit: &Circuit<D>,
    input: &StateVector<D>,
    cap: usize,
) -> Result<OrderingReport> {
    let sorts = circuit.all_orders(cap)?;
    let distributions = sorts
        .iter()
        .map(|sigma| {
            let oc = OrderedCircuit::new(circuit.clone(), sigma.clone())?;
            measure_all(&run(&oc, input)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<Vec<f64>> = distributions
        .iter()
        .map(|a| distributions.iter().map(|b| a.distance(b)).collect())
        .collect();
    let max_distance = distances.iter().flatten().copied().fold(0.0, f64::max);
    Ok(OrderingReport {
        sorts,
        distributions,
        distances,
        max_distance,
    })
}

fn named(name: &str) -> Matrix<Quaternion> {
    builtin(name).expect("builtin gate")
}

/// The order-dependence witness drawn above.
pub fn order_witness() -> Circuit<Quaternion> {
    Circuit::new(
        2,
        vec![
            Gate::new(0, vec![0], named("ROTQ_I")),
            Gate::new(1, vec![1], named("ROTQ_J")),
            Gate::new(2, vec![0], named("ROTQ_I")),
        ],
    )
    .expect("witness circuit is valid")
}

/// Pinned output distributions of [`order_witness`] on `|00⟩`, one per
/// topological sort, worked out by hand from the quaternion products.
pub const WITNESS_FIXTURES: [([GateId; 3], [f64; 4]); 3] = [
    ([0, 1, 2], [0.0, 0.5, 0.5, 0.0]),
    ([0, 2, 1], [0.0, 0.0, 0.5, 0.5]),
    ([1, 0, 2], [0.0, 0.0, 0.5, 0.5]),
];

/// Maps a gate into the complex numbers when all of its entries lie in one
/// complex plane `span{1, u}`; `x + y·u ↦ x + y·i` is an algebra
/// isomorphism there, so the image stays unitary. `None` otherwise.
pub fn complex_image(m: &Matrix<Quaternion>) -> Option<Matrix<Complex64>> {
    const EPS: f64 = 1e-12;
    let vector = |q: Quaternion| [q.i, q.j, q.k];
    let axis = m
        .entries()
        .iter()
        .map(|&q| vector(q))
        .find(|v| v.iter().any(|x| x.abs() > EPS));
    let axis = match axis {
        None => return Some(m.map(|q| Complex64::new(q.re, 0.0))),
        Some(v) => {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        }
    };
    let mut out = Vec::with_capacity(m.entries().len());
    for &q in m.entries() {
        let v = vector(q);
        let along: f64 = v.iter().zip(&axis).map(|(a, b)| a * b).sum();
        let off = v
            .iter()
            .zip(&axis)
            .map(|(a, b)| (a - along * b).abs())
            .fold(0.0, f64::max);
        if off > EPS {
            return None;
        }
        out.push(Complex64::new(q.re, along));
    }
    Matrix::from_vec(m.rows(), m.cols(), out).ok()
}

/// The circuit with every gate replaced by its [`complex_image`], lifted
/// back to quaternions. Its output no longer depends on σ.
pub fn commutative_twin(circuit: &Circuit<Quaternion>) -> Result<Circuit<Quaternion>> {
    let gates = circuit
        .gates()
        .iter()
        .map(|g| {
            let m = complex_image(&g.matrix).ok_or_else(|| Error::InvalidGate {
                id: g.id,
                reason: "entries do not share one complex plane".into(),
            })?;
            Ok(Gate::new(
                g.id,
                g.wires.clone(),
                m.map(Quaternion::from_complex),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(circuit.width(), gates)
}

/// Gates of the commitment toy: Alice acts on wire 0, Bob on wire 1, and
/// the opening gate acts on wire 0 after both.
#[derive(Debug, Clone)]
pub struct CommitmentGates {
    pub alice: Matrix<Quaternion>,
    pub bob: Matrix<Quaternion>,
    pub opening: Matrix<Quaternion>,
}

impl CommitmentGates {
    /// Non-commuting entries; the committed bit is visible after opening.
    pub fn quaternionic() -> Self {
        CommitmentGates {
            alice: named("ROTQ_I"),
            bob: named("ROTQ_J"),
            opening: named("ROTQ_I"),
        }
    }

    /// All entries in the complex plane; both commitments look the same.
    pub fn commuting() -> Self {
        CommitmentGates {
            alice: named("ROTQ_I"),
            bob: named("ROTQ_I"),
            opening: named("ROTQ_I"),
        }
    }
}

const ALICE: GateId = 0;
const BOB: GateId = 1;
const OPENING: GateId = 2;

/// Record of one commitment run from `|00⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitmentTranscript {
    pub commit_bit: u8,
    pub sigma: Vec<GateId>,
    /// Full distribution after Alice's and Bob's gates, before opening.
    pub committed: MeasurementDistribution,
    /// Distribution of Alice's wire alone, before opening.
    pub alice_marginal: MeasurementDistribution,
    pub opened: MeasurementDistribution,
}

/// Alice commits to 0 by acting before Bob, to 1 by acting after him.
pub fn bit_commitment_demo(
    gates: &CommitmentGates,
    commit_bit: u8,
) -> Result<CommitmentTranscript> {
    let sigma = match commit_bit {
        0 => vec![ALICE, BOB, OPENING],
        1 => vec![BOB, ALICE, OPENING],
        b => {
            return Err(Error::InvalidOrder(format!(
                "commit bit must be 0 or 1, got {b}"
            )))
        }
    };
    let input = StateVector::basis(2, 0);
    let committed_circuit = Circuit::new(
        2,
        vec![
            Gate::new(ALICE, vec![0], gates.alice.clone()),
            Gate::new(BOB, vec![1], gates.bob.clone()),
        ],
    )?;
    let committed = OrderedCircuit::new(committed_circuit, sigma[..2].to_vec())?;
    let committed = measure_all(&run(&committed, &input)?)?;
    let alice_marginal = marginal(&committed, &[0])?.into_distribution();

    let full = Circuit::new(
        2,
        vec![
            Gate::new(ALICE, vec![0], gates.alice.clone()),
            Gate::new(BOB, vec![1], gates.bob.clone()),
            Gate::new(OPENING, vec![0], gates.opening.clone()),
        ],
    )?;
    let full = OrderedCircuit::new(full, sigma.clone())?;
    let opened = measure_all(&run(&full, &input)?)?;
    Ok(CommitmentTranscript {
        commit_bit,
        sigma,
        committed,
        alice_marginal,
        opened,
    })
}

/// Both commitments side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitmentReport {
    pub transcripts: [CommitmentTranscript; 2],
    /// L∞ distance between the two opened distributions.
    pub gap: f64,
    /// L∞ distance between Alice's pre-opening marginals.
    pub concealment_gap: f64,
}

pub fn commitment_report(gates: &CommitmentGates) -> Result<CommitmentReport> {
    let zero = bit_commitment_demo(gates, 0)?;
    let one = bit_commitment_demo(gates, 1)?;
    let gap = zero.opened.distance(&one.opened);
    let concealment_gap = zero.alice_marginal.distance(&one.alice_marginal);
    Ok(CommitmentReport {
        transcripts: [zero, one],
        gap,
        concealment_gap,
    })
}

#[derive(Serialize)]
struct TranscriptJson<'a> {
    commit_bit: u8,
    sigma: &'a [GateId],
    committed: DistributionJson,
    alice_marginal: DistributionJson,
    opened: DistributionJson,
}

#[derive(Serialize)]
struct CommitmentJson<'a> {
    demo: &'static str,
    transcripts: Vec<TranscriptJson<'a>>,
    gap: f64,
    concealment_gap: f64,
}

impl CommitmentReport {
    pub fn to_json(&self) -> serde_json::Value {
        let transcripts = self
            .transcripts
            .iter()
            .map(|t| TranscriptJson {
                commit_bit: t.commit_bit,
                sigma: &t.sigma,
                committed: t.committed.to_json(),
                alice_marginal: t.alice_marginal.to_json(),
                opened: t.opened.to_json(),
            })
            .collect();
        serde_json::to_value(CommitmentJson {
            demo: "commitment",
            transcripts,
            gap: self.gap,
            concealment_gap: self.concealment_gap,
        })
        .expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::corpus::random_complex_circuit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn witness_matches_fixtures() {
        let report = ordering_spread(&order_witness(), &StateVector::basis(2, 0), 10).unwrap();
        assert_eq!(report.sorts.len(), WITNESS_FIXTURES.len());
        for ((sigma, expect), (got_sigma, got)) in WITNESS_FIXTURES
            .iter()
            .zip(report.sorts.iter().zip(&report.distributions))
        {
            assert_eq!(sigma.as_slice(), got_sigma.as_slice());
            for (p, q) in expect.iter().zip(got.probs()) {
                assert!((p - q).abs() <= 1e-10);
            }
        }
        assert!((report.max_distance - 0.5).abs() < 1e-12);
        for i in 0..3 {
            assert_eq!(report.distances[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(report.distances[i][j], report.distances[j][i]);
            }
        }
    }

    #[test]
    fn twin_is_order_independent() {
        let twin = commutative_twin(&order_witness()).unwrap();
        let report = ordering_spread(&twin, &StateVector::basis(2, 0), 10).unwrap();
        assert_eq!(report.sorts.len(), 3);
        assert!(report.max_distance <= 1e-10);
    }

    #[test]
    fn complex_image_of_rotations() {
        let j = named("ROTQ_J");
        assert_eq!(
            complex_image(&j).unwrap(),
            builtin::<Complex64>("ROTQ_I").unwrap()
        );
        let h = named("H");
        assert_eq!(
            complex_image(&h).unwrap(),
            builtin::<Complex64>("H").unwrap()
        );
        let mixed = Matrix::diagonal(&[Quaternion::I, Quaternion::J]);
        assert!(complex_image(&mixed).is_none());
    }

    #[test]
    fn chain_has_a_single_row() {
        let c = Circuit::new(
            1,
            vec![
                Gate::new(0, vec![0], named("ROTQ_I")),
                Gate::new(1, vec![0], named("PHASE_J")),
            ],
        )
        .unwrap();
        let r = ordering_spread(&c, &StateVector::basis(1, 0), 10).unwrap();
        assert_eq!(r.sorts.len(), 1);
        assert_eq!(r.max_distance, 0.0);
    }

    #[test]
    fn cast_complex_circuits_do_not_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let c = random_complex_circuit(3, 6, &mut rng).unwrap();
            let q = c.map_domain(Quaternion::from_complex).unwrap();
            let v = StateVector::<Complex64>::random(3, &mut rng).map(Quaternion::from_complex);
            assert!(ordering_spread(&q, &v, 1000).unwrap().max_distance <= 1e-10);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            ordering_spread(&order_witness(), &StateVector::basis(2, 0), 2),
            Err(Error::CapExceeded(2))
        ));
    }

    #[test]
    fn commitment_distinguishes_bits() {
        let r = commitment_report(&CommitmentGates::quaternionic()).unwrap();
        assert!(r.gap >= 0.05);
        assert!(r.concealment_gap <= 1e-10);
        assert_eq!(r.transcripts[0].sigma, vec![0, 1, 2]);
        assert_eq!(r.transcripts[1].sigma, vec![1, 0, 2]);
        // same pins as the ordering witness
        for (t, (_, expect)) in r
            .transcripts
            .iter()
            .zip([WITNESS_FIXTURES[0], WITNESS_FIXTURES[2]])
        {
            for (p, q) in expect.iter().zip(t.opened.probs()) {
                assert!((p - q).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn commuting_commitment_collapses() {
        let r = commitment_report(&CommitmentGates::commuting()).unwrap();
        assert!(r.gap <= 1e-10);
    }

    #[test]
    fn commit_bit_is_validated() {
        assert!(bit_commitment_demo(&CommitmentGates::quaternionic(), 2).is_err());
    }
}
