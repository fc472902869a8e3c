use hypercircuit::circuit::ordered_operator;
use hypercircuit::corpus::{random_complex_circuit, random_quaternion_circuit, with_random_order};
use hypercircuit::embed::{homomorphism_deviation, verify_circularity, verify_statistics};
use hypercircuit::io::{compiled_to_json, parse_circuit_default, AnyCircuit};
use hypercircuit::linalg::random_group_element;
use hypercircuit::{
    compile, embed_vector, marginal, measure_all, run, Circuit, CompileOptions, Complex64,
    ComplexToReal, Embedding, Gate, Matrix, OrderedCircuit, Quaternion, QuaternionToComplex,
    QuaternionToReal, Scalar, StateVector, TopInit,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn group_members<D: Scalar>(seed: u64, dim: usize) -> bool {
    let m: Matrix<D> = random_group_element(dim, &mut rng(seed)).unwrap();
    m.is_group_member(1e-12)
}

fn homomorphism_holds<E: Embedding>(seed: u64, dim: usize) -> bool {
    let mut r = rng(seed);
    let a = random_group_element(dim, &mut r).unwrap();
    let b = random_group_element(dim, &mut r).unwrap();
    homomorphism_deviation::<E>(&a, &b).unwrap().worst() <= 1e-11
}

fn compiled_matches<E: Embedding>(
    oc: &OrderedCircuit<E::Upper>,
    v: &StateVector<E::Upper>,
) -> Result<(), TestCaseError> {
    let cc = compile::<E>(oc, CompileOptions::default()).unwrap();
    prop_assert_eq!(cc.circuit.sigma(), oc.sigma());
    prop_assert!(verify_circularity::<E>(oc, &cc).unwrap() <= 1e-10);
    for init in TopInit::ALL {
        let r = verify_statistics::<E>(oc, &cc, v, init).unwrap();
        prop_assert!(r.distance <= 1e-10, "{init:?}: {}", r.distance);
        prop_assert!(r.state_deviation <= 1e-10);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_draws_are_group_members(seed in any::<u64>(), dim in 1usize..7) {
        prop_assert!(group_members::<f64>(seed, dim));
        prop_assert!(group_members::<Complex64>(seed, dim));
        prop_assert!(group_members::<Quaternion>(seed, dim));
    }

    #[test]
    fn embeddings_are_homomorphisms(seed in any::<u64>(), dim in 1usize..5) {
        prop_assert!(homomorphism_holds::<ComplexToReal>(seed, dim));
        prop_assert!(homomorphism_holds::<QuaternionToComplex>(seed, dim));
        prop_assert!(homomorphism_holds::<QuaternionToReal>(seed, dim));
    }

    #[test]
    fn every_sort_respects_precedence(seed in any::<u64>(), width in 1usize..4, size in 1usize..7) {
        let c = random_quaternion_circuit(width, size, &mut rng(seed)).unwrap();
        let sorts = c.all_orders(10_000).unwrap();
        prop_assert!(sorts.contains(&c.default_order().unwrap()));
        for sigma in &sorts {
            let steps = c.validate_order(sigma).unwrap();
            for (&k, id) in steps.iter().zip(sigma) {
                prop_assert_eq!(c.gates()[k].id, *id);
            }
            let rank = |id| sigma.iter().position(|&x| x == id).unwrap();
            for (a, b) in c.precedence() {
                prop_assert!(rank(a) < rank(b));
            }
        }
        let mut dedup = sorts.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), sorts.len());
    }

    #[test]
    fn run_agrees_with_operator(seed in any::<u64>(), width in 1usize..4, size in 1usize..8) {
        let mut r = rng(seed);
        let oc = with_random_order(random_quaternion_circuit(width, size, &mut r).unwrap(), &mut r).unwrap();
        let v = StateVector::random(width, &mut r);
        let direct = run(&oc, &v).unwrap();
        let via_matrix = ordered_operator(&oc).unwrap().apply(&v).unwrap();
        prop_assert!(direct.max_dist(&via_matrix) <= 1e-12);
        prop_assert!((direct.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn complex_circuits_ignore_order(seed in any::<u64>(), width in 1usize..5, size in 1usize..10) {
        let mut r = rng(seed);
        let c = random_complex_circuit(width, size, &mut r).unwrap();
        let v = StateVector::random(width, &mut r);
        let reference = run(&OrderedCircuit::with_default_order(c.clone()).unwrap(), &v).unwrap();
        for _ in 0..4 {
            let oc = with_random_order(c.clone(), &mut r).unwrap();
            prop_assert!(run(&oc, &v).unwrap().max_dist(&reference) <= 1e-12);
        }
    }

    #[test]
    fn right_phases_commute_with_circuits(seed in any::<u64>(), width in 1usize..4, size in 1usize..6) {
        let mut r = rng(seed);
        let oc = with_random_order(random_quaternion_circuit(width, size, &mut r).unwrap(), &mut r).unwrap();
        let v = StateVector::random(width, &mut r);
        let p = Quaternion::sample_normal(&mut r);
        let p = p.scale(1.0 / p.modulus());
        let lhs = run(&oc, &v.map(|a| a * p)).unwrap();
        let rhs = run(&oc, &v).unwrap().map(|a| a * p);
        prop_assert!(lhs.max_dist(&rhs) <= 1e-12);
        let shifted = measure_all(&v.left_phase(p)).unwrap();
        prop_assert!(shifted.distance(&measure_all(&v).unwrap()) <= 1e-12);
    }

    #[test]
    fn compiled_complex_circuits(seed in any::<u64>(), width in 1usize..5, size in 1usize..12) {
        let mut r = rng(seed);
        let oc = with_random_order(random_complex_circuit(width, size, &mut r).unwrap(), &mut r).unwrap();
        let v = StateVector::random(width, &mut r);
        compiled_matches::<ComplexToReal>(&oc, &v)?;
    }

    #[test]
    fn compiled_quaternionic_circuits(seed in any::<u64>(), width in 1usize..4, size in 1usize..8) {
        let mut r = rng(seed);
        let oc = with_random_order(random_quaternion_circuit(width, size, &mut r).unwrap(), &mut r).unwrap();
        let v = StateVector::random(width, &mut r);
        compiled_matches::<QuaternionToComplex>(&oc, &v)?;
        compiled_matches::<QuaternionToReal>(&oc, &v)?;
    }

    #[test]
    fn embedded_columns_are_orthonormal(seed in any::<u64>(), width in 1usize..4) {
        let v: StateVector<Quaternion> = StateVector::random(width, &mut rng(seed));
        let cols: Vec<StateVector<f64>> = (0..4).map(|c| embed_vector::<QuaternionToReal>(c, &v).unwrap()).collect();
        for (a, x) in cols.iter().enumerate() {
            for (b, y) in cols.iter().enumerate() {
                let dot: f64 = x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| p * q).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn marginals_are_distributions(seed in any::<u64>(), width in 2usize..6) {
        let mut r = rng(seed);
        let v: StateVector<Complex64> = StateVector::random(width, &mut r);
        let dist = measure_all(&v).unwrap();
        let keep: Vec<usize> = (0..width).filter(|_| r.random_bool(0.5)).collect();
        prop_assume!(!keep.is_empty());
        let m = marginal(&dist, &keep).unwrap();
        prop_assert!((m.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(m.probs().len(), 1 << keep.len());
    }

    #[test]
    fn real_gates_pass_through_h(seed in any::<u64>(), width in 1usize..4, size in 1usize..6) {
        let mut r = rng(seed);
        let gates = (0..size as u64)
            .map(|id| Gate::new(id, vec![r.random_range(0..width)], random_group_element::<f64, _>(2, &mut r).unwrap()))
            .collect();
        let real = Circuit::new(width, gates).unwrap();
        let oc = OrderedCircuit::with_default_order(real.lift::<Complex64>().unwrap()).unwrap();
        let cc = compile::<ComplexToReal>(&oc, CompileOptions::default()).unwrap();
        for (g, out) in real.gates().iter().zip(cc.circuit.circuit().gates()) {
            prop_assert!(g.matrix.entries().iter().zip(out.matrix.entries()).all(|(a, b)| a.to_bits() == b.to_bits()));
            prop_assert!(!out.wires.contains(&0));
        }
    }

    #[test]
    fn compiled_json_parses_back(seed in any::<u64>(), width in 1usize..3, size in 1usize..5) {
        let mut r = rng(seed);
        let oc = with_random_order(random_quaternion_circuit(width, size, &mut r).unwrap(), &mut r).unwrap();
        let cc = compile::<QuaternionToComplex>(&oc, CompileOptions::default()).unwrap();
        let text = serde_json::to_string(&compiled_to_json(&cc)).unwrap();
        match parse_circuit_default(&text).unwrap() {
            AnyCircuit::Complex(f) => {
                prop_assert_eq!(&f.circuit, cc.circuit.circuit());
                prop_assert_eq!(f.sigma.as_deref(), Some(cc.circuit.sigma()));
            }
            other => prop_assert!(false, "wrong domain {:?}", other.domain()),
        }
    }
}
