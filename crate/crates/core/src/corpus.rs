//! Random circuits for property checks.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::circuit::{builtin, Circuit, Gate, GateId, OrderedCircuit};
use crate::error::Result;
use crate::linalg::{random_group_element, Matrix};
use crate::scalar::{Quaternion, Scalar};

fn random_wires<R: Rng + ?Sized>(width: usize, arity: usize, rng: &mut R) -> Vec<usize> {
    let mut wires = sample(rng, width, arity).into_vec();
    wires.sort_unstable();
    wires
}

/// `size` gates drawn from H, S, T, CNOT and Haar-like random U(2).
pub fn random_complex_circuit<R: Rng + ?Sized>(
    width: usize,
    size: usize,
    rng: &mut R,
) -> Result<Circuit<Complex64>> {
    let mut gates = Vec::with_capacity(size);
    for id in 0..size as GateId {
        let choice = rng.random_range(0..if width >= 2 { 5 } else { 4 });
        let (arity, matrix): (usize, Matrix<Complex64>) = match choice {
            0 => (1, builtin("H").expect("builtin")),
            1 => (1, builtin("S").expect("builtin")),
            2 => (1, builtin("T").expect("builtin")),
            3 => (1, random_group_element(2, rng)?),
            _ => (2, builtin("CNOT").expect("builtin")),
        };
        gates.push(Gate::new(id, random_wires(width, arity, rng), matrix));
    }
    Circuit::new(width, gates)
}

/// `size` random 2×2 symplectic gates, each on a random wire.
pub fn random_quaternion_circuit<R: Rng + ?Sized>(
    width: usize,
    size: usize,
    rng: &mut R,
) -> Result<Circuit<Quaternion>> {
    let gates = (0..size as GateId)
        .map(|id| {
            Ok(Gate::new(
                id,
                random_wires(width, 1, rng),
                random_group_element(2, rng)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(width, gates)
}

/// Pairs a circuit with a uniformly chosen ready-gate order.
pub fn with_random_order<D: Scalar, R: Rng + ?Sized>(
    circuit: Circuit<D>,
    rng: &mut R,
) -> Result<OrderedCircuit<D>> {
    let sigma = circuit.random_order(rng);
    OrderedCircuit::new(circuit, sigma)
}
