//! State-vector evolution and the measurement rule.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::{local_index, wire_mask, Gate, OrderedCircuit};
use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, StateVector};
use crate::scalar::{Domain, Scalar};

/// Distributions must sum to one within this.
pub const DIST_TOL: f64 = 1e-10;

/// Largest width `run` accepts for the given domain.
pub fn max_run_width(domain: Domain) -> usize {
    match domain {
        Domain::Quaternion => 18,
        Domain::Real | Domain::Complex => 20,
    }
}

/// Applies the gates of `oc` in σ order. Amplitudes update as
/// `new_i = Σ_k U_ik · old_k`, gate entries on the left.
pub fn run<D: Scalar>(oc: &OrderedCircuit<D>, input: &StateVector<D>) -> Result<StateVector<D>> {
    let width = oc.width();
    let limit = max_run_width(D::DOMAIN);
    if width > limit {
        return Err(Error::WidthLimit { width, limit });
    }
    if input.dim() != 1 << width {
        return Err(Error::Dimension(format!(
            "state of length {} for a {width}-wire circuit",
            input.dim()
        )));
    }
    input.check_normalized()?;
    let mut amps = input.amplitudes().to_vec();
    for g in oc.ordered_gates() {
        apply_gate(&mut amps, g, width);
    }
    Ok(StateVector::from_amplitudes_unchecked(amps))
}

fn apply_gate<D: Scalar>(amps: &mut [D], gate: &Gate<D>, width: usize) {
    let d = gate.arity();
    let mask = wire_mask(&gate.wires, width);
    // global offset of each local basis index
    let offsets: Vec<usize> = (0..1usize << d)
        .map(|loc| {
            gate.wires.iter().enumerate().fold(0, |acc, (t, &w)| {
                let bit = (loc >> (d - 1 - t)) & 1;
                acc | (bit << (width - 1 - w))
            })
        })
        .collect();
    debug_assert!(offsets
        .iter()
        .all(|&o| local_index(o, &gate.wires, width) < 1 << d));
    let mut old = vec![D::zero(); offsets.len()];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (slot, &o) in old.iter_mut().zip(&offsets) {
            *slot = amps[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let mut acc = D::zero();
            for (c, &a) in old.iter().enumerate() {
                acc += gate.matrix[(r, c)] * a;
            }
            amps[base | o] = acc;
        }
    }
}

/// Outcome probabilities over `2^wires` basis strings.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    wires: usize,
    probs: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || !probs.len().is_power_of_two() {
            return Err(Error::Dimension(format!(
                "{} outcomes is not a power of two",
                probs.len()
            )));
        }
        check_probabilities(&probs)?;
        Ok(MeasurementDistribution {
            wires: probs.len().trailing_zeros() as usize,
            probs,
        })
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// L∞ distance; infinite if the outcome spaces differ.
    pub fn distance(&self, other: &MeasurementDistribution) -> f64 {
        linf(&self.probs, &other.probs)
    }

    /// Pointwise average of equally sized distributions.
    pub fn average(dists: &[MeasurementDistribution]) -> Result<MeasurementDistribution> {
        let first = dists
            .first()
            .ok_or_else(|| Error::Dimension("nothing to average".into()))?;
        let mut acc = vec![0.0; first.probs.len()];
        for d in dists {
            if d.probs.len() != acc.len() {
                return Err(Error::Dimension(
                    "averaging distributions of different size".into(),
                ));
            }
            for (a, p) in acc.iter_mut().zip(&d.probs) {
                *a += p;
            }
        }
        let n = dists.len() as f64;
        MeasurementDistribution::new(acc.into_iter().map(|p| p / n).collect())
    }

    /// `{"n": m, "probs": {"bitstring": p}}`, dropping entries below 1e-15.
    pub fn to_json(&self) -> DistributionJson {
        DistributionJson::new(self.wires, &self.probs)
    }
}

fn check_probabilities(probs: &[f64]) -> Result<()> {
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p < -DIST_TOL) || (sum - 1.0).abs() > DIST_TOL {
        return Err(Error::NotNormalized(sum));
    }
    Ok(())
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Serialized form of a distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionJson {
    pub n: usize,
    pub probs: BTreeMap<String, f64>,
}

impl DistributionJson {
    fn new(wires: usize, probs: &[f64]) -> Self {
        let probs = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= 1e-15)
            .map(|(b, &p)| (bitstring(b, wires), p))
            .collect();
        DistributionJson { n: wires, probs }
    }
}

/// `index` as `wires` binary digits, wire 0 first.
pub fn bitstring(index: usize, wires: usize) -> String {
    (0..wires)
        .map(|w| {
            if (index >> (wires - 1 - w)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// `P(b) = |amp_b|²`, using the domain's modulus.
pub fn measure_all<D: Scalar>(state: &StateVector<D>) -> Result<MeasurementDistribution> {
    state.check_normalized()?;
    MeasurementDistribution::new(state.amplitudes().iter().map(|a| a.norm_sqr()).collect())
}

/// Distribution over a subset of wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    kept: Vec<usize>,
    probs: Vec<f64>,
}

impl Marginal {
    /// Kept wires, ascending; `kept[0]` is the most significant outcome bit.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn distance(&self, other: &Marginal) -> f64 {
        if self.kept.len() != other.kept.len() {
            return f64::INFINITY;
        }
        linf(&self.probs, &other.probs)
    }

    pub fn distance_to(&self, dist: &MeasurementDistribution) -> f64 {
        linf(&self.probs, dist.probs())
    }

    pub fn into_distribution(self) -> MeasurementDistribution {
        MeasurementDistribution {
            wires: self.kept.len(),
            probs: self.probs,
        }
    }

    pub fn to_json(&self) -> DistributionJson {
        DistributionJson::new(self.kept.len(), &self.probs)
    }
}

/// Sums out every wire not in `keep`.
pub fn marginal(dist: &MeasurementDistribution, keep: &[usize]) -> Result<Marginal> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let width = dist.wires;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&w) = kept.iter().find(|&&w| w >= width) {
        return Err(Error::WireOutOfRange { wire: w, width });
    }
    let mut probs = vec![0.0; 1 << kept.len()];
    for (b, &p) in dist.probs.iter().enumerate() {
        probs[local_index(b, &kept, width)] += p;
    }
    check_probabilities(&probs)?;
    Ok(Marginal { kept, probs })
}

/// `|v⟩⟨v|` for a unit state.
pub fn density<D: Scalar>(state: &StateVector<D>) -> Result<DensityOperator<D>> {
    state.check_normalized()?;
    Ok(state.density())
}
