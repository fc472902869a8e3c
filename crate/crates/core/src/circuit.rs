//! Circuits as gate DAGs, their evaluation orders, and full-width operators.
//!
//! Wires are 0-based here, wire 0 being the most significant bit of a basis
//! index. Two gates are ordered iff they share a wire, in program order.
//! Over quaternions the circuit operator depends on which linear extension
//! of that order is used, so an [`OrderedCircuit`] carries one explicitly.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Quaternion, Scalar};

/// Group-membership tolerance applied to gate matrices on construction.
pub const GATE_TOL: f64 = 1e-9;

/// Widest circuit whose full `2^n × 2^n` operator we will materialize.
pub const MAX_OPERATOR_WIDTH: usize = 10;

pub type GateId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate<D> {
    pub id: GateId,
    /// Strictly increasing; `wires[0]` is the gate's most significant bit.
    pub wires: Vec<usize>,
    pub matrix: Matrix<D>,
}

impl<D: Scalar> Gate<D> {
    pub fn new(id: GateId, wires: Vec<usize>, matrix: Matrix<D>) -> Self {
        Gate { id, wires, matrix }
    }

    pub fn arity(&self) -> usize {
        self.wires.len()
    }

    fn validate(&self, width: usize, tol: f64) -> Result<()> {
        let invalid = |reason: String| Error::InvalidGate {
            id: self.id,
            reason,
        };
        if self.wires.is_empty() {
            return Err(invalid("gate acts on no wires".into()));
        }
        if self.wires.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!(
                "wires {:?} must be distinct and increasing",
                self.wires
            )));
        }
        if let Some(&w) = self.wires.iter().find(|&&w| w >= width) {
            return Err(Error::WireOutOfRange { wire: w, width });
        }
        let dim = 1usize << self.arity();
        if self.matrix.rows() != dim || self.matrix.cols() != dim {
            return Err(invalid(format!(
                "{} wires need a {dim}x{dim} matrix, got {}x{}",
                self.arity(),
                self.matrix.rows(),
                self.matrix.cols()
            )));
        }
        let deviation = self.matrix.group_deviation()?;
        if deviation > tol {
            return Err(Error::NotUnitary {
                id: self.id,
                deviation,
            });
        }
        Ok(())
    }
}

/// Gates over `width` wires with the precedence DAG implied by program order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<D> {
    width: usize,
    gates: Vec<Gate<D>>,
    /// Immediate successors of each gate (by position).
    succ: Vec<Vec<usize>>,
    index: HashMap<GateId, usize>,
}

impl<D: Scalar> Circuit<D> {
    pub fn new(width: usize, gates: Vec<Gate<D>>) -> Result<Self> {
        Self::with_tolerance(width, gates, GATE_TOL)
    }

    pub fn with_tolerance(width: usize, gates: Vec<Gate<D>>, tol: f64) -> Result<Self> {
        let mut index = HashMap::with_capacity(gates.len());
        for (pos, g) in gates.iter().enumerate() {
            if index.insert(g.id, pos).is_some() {
                return Err(Error::InvalidGate {
                    id: g.id,
                    reason: "duplicate gate id".into(),
                });
            }
            g.validate(width, tol)?;
        }
        let mut succ = vec![Vec::new(); gates.len()];
        let mut last_on_wire: Vec<Option<usize>> = vec![None; width];
        for (pos, g) in gates.iter().enumerate() {
            for &w in &g.wires {
                if let Some(prev) = last_on_wire[w] {
                    if !succ[prev].contains(&pos) {
                        succ[prev].push(pos);
                    }
                }
                last_on_wire[w] = Some(pos);
            }
        }
        Ok(Circuit {
            width,
            gates,
            succ,
            index,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate<D>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, id: GateId) -> Option<&Gate<D>> {
        self.index.get(&id).map(|&p| &self.gates[p])
    }

    pub fn max_arity(&self) -> usize {
        self.gates.iter().map(Gate::arity).max().unwrap_or(0)
    }

    /// Immediate precedence edges as `(before, after)` gate id pairs.
    pub fn precedence(&self) -> Vec<(GateId, GateId)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(p, s)| s.iter().map(move |&q| (p, q)))
            .map(|(p, q)| (self.gates[p].id, self.gates[q].id))
            .collect()
    }

    fn indegrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.gates.len()];
        for s in &self.succ {
            for &q in s {
                indeg[q] += 1;
            }
        }
        indeg
    }

    fn ids(&self, positions: &[usize]) -> Vec<GateId> {
        positions.iter().map(|&p| self.gates[p].id).collect()
    }

    /// Kahn's algorithm, always taking the ready gate with the smallest id.
    pub fn default_order(&self) -> Result<Vec<GateId>> {
        let mut indeg = self.indegrees();
        let mut ready: BinaryHeap<Reverse<(GateId, usize)>> = indeg
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(p, _)| Reverse((self.gates[p].id, p)))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(Reverse((_, p))) = ready.pop() {
            order.push(p);
            for &q in &self.succ[p] {
                indeg[q] -= 1;
                if indeg[q] == 0 {
                    ready.push(Reverse((self.gates[q].id, q)));
                }
            }
        }
        if order.len() != self.gates.len() {
            return Err(Error::Cyclic);
        }
        Ok(self.ids(&order))
    }

    /// Every linear extension of the precedence order, in lexicographic
    /// order of gate ids. Fails once more than `cap` have been found.
    pub fn all_orders(&self, cap: usize) -> Result<Vec<Vec<GateId>>> {
        let mut indeg = self.indegrees();
        let mut ready: Vec<usize> = (0..self.gates.len()).filter(|&p| indeg[p] == 0).collect();
        let mut prefix = Vec::with_capacity(self.gates.len());
        let mut out = Vec::new();
        self.extend_orders(&mut indeg, &mut ready, &mut prefix, &mut out, cap)?;
        if self.gates.is_empty() {
            out.push(Vec::new());
        }
        Ok(out)
    }

    fn extend_orders(
        &self,
        indeg: &mut [usize],
        ready: &mut Vec<usize>,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<GateId>>,
        cap: usize,
    ) -> Result<()> {
        if prefix.len() == self.gates.len() {
            if !prefix.is_empty() {
                if out.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(self.ids(prefix));
            }
            return Ok(());
        }
        if ready.is_empty() {
            return Err(Error::Cyclic);
        }
        let mut choices = ready.clone();
        choices.sort_by_key(|&p| self.gates[p].id);
        for p in choices {
            ready.retain(|&x| x != p);
            prefix.push(p);
            for &q in &self.succ[p] {
                indeg[q] -= 1;
                if indeg[q] == 0 {
                    ready.push(q);
                }
            }
            self.extend_orders(indeg, ready, prefix, out, cap)?;
            for &q in &self.succ[p] {
                if indeg[q] == 0 {
                    ready.retain(|&x| x != q);
                }
                indeg[q] += 1;
            }
            prefix.pop();
            ready.push(p);
        }
        Ok(())
    }

    /// Uniformly random ready gate at every step of Kahn's algorithm.
    pub fn random_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<GateId> {
        let mut indeg = self.indegrees();
        let mut ready: Vec<usize> = (0..self.gates.len()).filter(|&p| indeg[p] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while !ready.is_empty() {
            let p = ready.swap_remove(rng.random_range(0..ready.len()));
            order.push(p);
            for &q in &self.succ[p] {
                indeg[q] -= 1;
                if indeg[q] == 0 {
                    ready.push(q);
                }
            }
        }
        self.ids(&order)
    }

    /// Checks `sigma` is a permutation of the gate ids respecting precedence.
    /// Returns the gate index of each step.
    pub fn validate_order(&self, sigma: &[GateId]) -> Result<Vec<usize>> {
        if sigma.len() != self.gates.len() {
            return Err(Error::InvalidOrder(format!(
                "{} ids given for {} gates",
                sigma.len(),
                self.gates.len()
            )));
        }
        let mut rank = vec![usize::MAX; self.gates.len()];
        let mut positions = Vec::with_capacity(sigma.len());
        for (r, id) in sigma.iter().enumerate() {
            let &p = self
                .index
                .get(id)
                .ok_or_else(|| Error::InvalidOrder(format!("unknown gate id {id}")))?;
            if rank[p] != usize::MAX {
                return Err(Error::InvalidOrder(format!("gate {id} listed twice")));
            }
            rank[p] = r;
            positions.push(p);
        }
        for (p, s) in self.succ.iter().enumerate() {
            for &q in s {
                if rank[p] > rank[q] {
                    return Err(Error::InvalidOrder(format!(
                        "gate {} must come before gate {}",
                        self.gates[p].id, self.gates[q].id
                    )));
                }
            }
        }
        Ok(positions)
    }

    pub fn topological_sorts(&self, mode: &SortMode) -> Result<Vec<Vec<GateId>>> {
        match mode {
            SortMode::Default => Ok(vec![self.default_order()?]),
            SortMode::All { cap } => self.all_orders(*cap),
            SortMode::Explicit(sigma) => {
                self.validate_order(sigma)?;
                Ok(vec![sigma.clone()])
            }
        }
    }

    /// Same circuit over a wider domain.
    pub fn lift<E: Scalar>(&self) -> Result<Circuit<E>> {
        if E::DOMAIN < D::DOMAIN {
            return Err(Error::Dimension(format!(
                "cannot narrow a {} circuit to {}",
                D::DOMAIN.name(),
                E::DOMAIN.name()
            )));
        }
        self.map_domain(|x| E::try_from_quaternion(x.to_quaternion()).expect("wider domain"))
    }

    /// Same circuit with every entry pushed through `f`.
    pub fn map_domain<E: Scalar>(&self, f: impl Fn(D) -> E) -> Result<Circuit<E>> {
        let gates = self
            .gates
            .iter()
            .map(|g| Gate::new(g.id, g.wires.clone(), g.matrix.map(&f)))
            .collect();
        Circuit::new(self.width, gates)
    }
}

/// How to choose evaluation orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortMode {
    /// Min-id Kahn order.
    Default,
    /// Every linear extension, up to `cap` of them.
    All { cap: usize },
    /// A caller-supplied order, validated.
    Explicit(Vec<GateId>),
}

/// A circuit together with one evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedCircuit<D> {
    circuit: Circuit<D>,
    sigma: Vec<GateId>,
    positions: Vec<usize>,
}

impl<D: Scalar> OrderedCircuit<D> {
    pub fn new(circuit: Circuit<D>, sigma: Vec<GateId>) -> Result<Self> {
        let positions = circuit.validate_order(&sigma)?;
        Ok(OrderedCircuit {
            circuit,
            sigma,
            positions,
        })
    }

    pub fn with_default_order(circuit: Circuit<D>) -> Result<Self> {
        let sigma = circuit.default_order()?;
        Self::new(circuit, sigma)
    }

    pub fn circuit(&self) -> &Circuit<D> {
        &self.circuit
    }

    pub fn sigma(&self) -> &[GateId] {
        &self.sigma
    }

    pub fn width(&self) -> usize {
        self.circuit.width
    }

    /// Gates in evaluation order.
    pub fn ordered_gates(&self) -> impl Iterator<Item = &Gate<D>> {
        self.positions.iter().map(|&p| &self.circuit.gates[p])
    }
}

/// Local basis index of the gate's wires inside a global basis index.
pub(crate) fn local_index(global: usize, wires: &[usize], width: usize) -> usize {
    wires
        .iter()
        .fold(0, |acc, &w| (acc << 1) | ((global >> (width - 1 - w)) & 1))
}

pub(crate) fn wire_mask(wires: &[usize], width: usize) -> usize {
    wires.iter().fold(0, |m, &w| m | (1 << (width - 1 - w)))
}

/// Full-width operator of a gate: the gate matrix padded with identities and
/// conjugated by the wire permutation. Swaps are 0-1 matrices, so this is
/// well defined over quaternions too; it is computed by index mapping.
pub fn in_context_operator<D: Scalar>(gate: &Gate<D>, width: usize) -> Result<Matrix<D>> {
    if let Some(&w) = gate.wires.iter().find(|&&w| w >= width) {
        return Err(Error::WireOutOfRange { wire: w, width });
    }
    if width > MAX_OPERATOR_WIDTH {
        return Err(Error::WidthLimit {
            width,
            limit: MAX_OPERATOR_WIDTH,
        });
    }
    let mask = wire_mask(&gate.wires, width);
    let n = 1usize << width;
    Ok(Matrix::from_fn(n, n, |x, y| {
        if x & !mask != y & !mask {
            D::zero()
        } else {
            gate.matrix[(
                local_index(x, &gate.wires, width),
                local_index(y, &gate.wires, width),
            )]
        }
    }))
}

/// `Q_σ = Q⁽ˢ⁾ ⋯ Q⁽²⁾ Q⁽¹⁾`, the first gate of σ applied first.
pub fn ordered_operator<D: Scalar>(oc: &OrderedCircuit<D>) -> Result<Matrix<D>> {
    let width = oc.width();
    if width > MAX_OPERATOR_WIDTH {
        return Err(Error::WidthLimit {
            width,
            limit: MAX_OPERATOR_WIDTH,
        });
    }
    let mut acc = Matrix::identity(1 << width);
    for g in oc.ordered_gates() {
        acc = in_context_operator(g, width)?.matmul(&acc)?;
    }
    Ok(acc)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 12] = [
    "H", "X", "Y", "Z", "S", "T", "CNOT", "SWAP", "TOFFOLI", "PHASE_J", "ROTQ_I", "ROTQ_J",
];

/// Standard gates, written over quaternions. [`builtin`] narrows to a domain.
pub fn builtin_quaternion(name: &str) -> Option<Matrix<Quaternion>> {
    use std::f64::consts::FRAC_1_SQRT_2 as R;
    let q = Quaternion::from_real;
    let (zero, one) = (Quaternion::ZERO, Quaternion::ONE);
    let perm = |n: usize, f: &dyn Fn(usize) -> usize| {
        Matrix::from_fn(n, n, |r, c| if f(c) == r { one } else { zero })
    };
    let m = match name {
        "H" => Matrix::from_vec(2, 2, vec![q(R), q(R), q(R), q(-R)]).ok()?,
        "X" => perm(2, &|c| c ^ 1),
        "Y" => Matrix::from_vec(2, 2, vec![zero, -Quaternion::I, Quaternion::I, zero]).ok()?,
        "Z" => Matrix::diagonal(&[one, q(-1.0)]),
        "S" => Matrix::diagonal(&[one, Quaternion::I]),
        "T" => Matrix::diagonal(&[one, Quaternion::new(R, R, 0.0, 0.0)]),
        "CNOT" => perm(4, &|c| if c & 2 != 0 { c ^ 1 } else { c }),
        "SWAP" => perm(4, &|c| ((c & 1) << 1) | (c >> 1)),
        "TOFFOLI" => perm(8, &|c| if c & 6 == 6 { c ^ 1 } else { c }),
        "PHASE_J" => Matrix::diagonal(&[one, Quaternion::J]),
        "ROTQ_I" => {
            let i = Quaternion::new(0.0, R, 0.0, 0.0);
            Matrix::from_vec(2, 2, vec![q(R), i, i, q(R)]).ok()?
        }
        "ROTQ_J" => {
            let j = Quaternion::new(0.0, 0.0, R, 0.0);
            Matrix::from_vec(2, 2, vec![q(R), j, j, q(R)]).ok()?
        }
        _ => return None,
    };
    Some(m)
}

/// A named gate in domain `D`, or `None` if the name is unknown or the gate
/// has components `D` cannot hold.
pub fn builtin<D: Scalar>(name: &str) -> Option<Matrix<D>> {
    let m = builtin_quaternion(name)?;
    let entries: Option<Vec<D>> = m
        .entries()
        .iter()
        .map(|&x| D::try_from_quaternion(x))
        .collect();
    Matrix::from_vec(m.rows(), m.cols(), entries?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h<D: Scalar>() -> Matrix<D> {
        builtin("H").unwrap()
    }

    fn chain() -> Circuit<f64> {
        Circuit::new(1, (0..3).map(|i| Gate::new(i, vec![0], h())).collect()).unwrap()
    }

    #[test]
    fn chain_has_one_order() {
        let c = chain();
        assert_eq!(c.all_orders(10).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn disjoint_gates_have_two_orders() {
        let c = Circuit::new(
            2,
            vec![
                Gate::new(7, vec![0], h::<f64>()),
                Gate::new(3, vec![1], h()),
            ],
        )
        .unwrap();
        assert_eq!(c.all_orders(10).unwrap(), vec![vec![3, 7], vec![7, 3]]);
        assert_eq!(c.default_order().unwrap(), vec![3, 7]);
        assert!(matches!(c.all_orders(1), Err(Error::CapExceeded(1))));
    }

    #[test]
    fn empty_circuit_has_the_empty_order() {
        let c = Circuit::<f64>::new(2, vec![]).unwrap();
        assert_eq!(c.all_orders(1).unwrap(), vec![Vec::<GateId>::new()]);
        let oc = OrderedCircuit::with_default_order(c).unwrap();
        assert_eq!(ordered_operator(&oc).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn order_violating_precedence_is_rejected() {
        let c = chain();
        assert!(matches!(
            c.validate_order(&[1, 0, 2]),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            c.validate_order(&[0, 1]),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            c.validate_order(&[0, 1, 9]),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            c.validate_order(&[0, 0, 2]),
            Err(Error::InvalidOrder(_))
        ));
        assert!(c.validate_order(&[0, 1, 2]).is_ok());
    }

    #[test]
    fn sort_count_matches_interleavings() {
        // two independent chains of lengths 2 and 3: C(5,2) = 10 interleavings
        let mut gates = Vec::new();
        for i in 0..2 {
            gates.push(Gate::new(i, vec![0], h::<f64>()));
        }
        for i in 2..5 {
            gates.push(Gate::new(i, vec![1], h::<f64>()));
        }
        let c = Circuit::new(2, gates).unwrap();
        let all = c.all_orders(100).unwrap();
        assert_eq!(all.len(), 10);
        for s in &all {
            assert!(c.validate_order(s).is_ok());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(all.contains(&c.random_order(&mut rng)));
        }
    }

    #[test]
    fn gate_validation() {
        let bad = Matrix::diagonal(&[1.0, 2.0]);
        assert!(matches!(
            Circuit::new(1, vec![Gate::new(0, vec![0], bad)]),
            Err(Error::NotUnitary { id: 0, .. })
        ));
        assert!(matches!(
            Circuit::new(1, vec![Gate::new(0, vec![1], h::<f64>())]),
            Err(Error::WireOutOfRange { wire: 1, width: 1 })
        ));
        let cnot = builtin::<f64>("CNOT").unwrap();
        assert!(matches!(
            Circuit::new(2, vec![Gate::new(0, vec![1, 0], cnot.clone())]),
            Err(Error::InvalidGate { .. })
        ));
        assert!(matches!(
            Circuit::new(2, vec![Gate::new(0, vec![0], cnot)]),
            Err(Error::InvalidGate { .. })
        ));
        assert!(matches!(
            Circuit::new(
                1,
                vec![
                    Gate::new(0, vec![0], h::<f64>()),
                    Gate::new(0, vec![0], h())
                ]
            ),
            Err(Error::InvalidGate { .. })
        ));
    }

    #[test]
    fn builtins_are_group_members() {
        for name in BUILTIN_NAMES {
            let m = builtin_quaternion(name).unwrap();
            assert!(m.is_group_member(1e-15), "{name}");
        }
        assert!(builtin::<f64>("S").is_none());
        assert!(builtin::<Complex64>("PHASE_J").is_none());
        assert!(builtin::<Complex64>("T").is_some());
        assert!(builtin::<f64>("NOPE").is_none());
    }

    #[test]
    fn in_context_full_width_gate_is_itself() {
        let cnot = builtin::<Complex64>("CNOT").unwrap();
        let g = Gate::new(0, vec![0, 1], cnot.clone());
        assert_eq!(in_context_operator(&g, 2).unwrap(), cnot);
    }

    #[test]
    fn in_context_low_wire_is_kron() {
        let u = builtin::<Complex64>("T").unwrap();
        let g = Gate::new(0, vec![1], u.clone());
        assert_eq!(
            in_context_operator(&g, 2).unwrap(),
            Matrix::identity(2).kron(&u)
        );
        let g = Gate::new(0, vec![0], u.clone());
        assert_eq!(
            in_context_operator(&g, 3).unwrap(),
            u.kron(&Matrix::identity(4))
        );
    }

    #[test]
    fn in_context_cnot_on_outer_wires() {
        // CNOT with control wire 0, target wire 2, on 3 wires: flips bit 0
        // of the index whenever bit 2 is set.
        let g = Gate::new(0, vec![0, 2], builtin::<f64>("CNOT").unwrap());
        let m = in_context_operator(&g, 3).unwrap();
        let mut oracle = Matrix::<f64>::zeros(8, 8);
        for b in 0..8usize {
            let image = if b & 0b100 != 0 { b ^ 0b001 } else { b };
            oracle[(image, b)] = 1.0;
        }
        assert_eq!(m, oracle);
    }

    #[test]
    fn in_context_rejects_bad_wires() {
        let g = Gate::new(0, vec![3], h::<f64>());
        assert!(matches!(
            in_context_operator(&g, 2),
            Err(Error::WireOutOfRange { .. })
        ));
    }

    #[test]
    fn quaternion_order_changes_the_operator() {
        let a = builtin::<Quaternion>("ROTQ_I").unwrap();
        let b = builtin::<Quaternion>("ROTQ_J").unwrap();
        let c = Circuit::new(2, vec![Gate::new(0, vec![0], a), Gate::new(1, vec![1], b)]).unwrap();
        let ab = ordered_operator(&OrderedCircuit::new(c.clone(), vec![0, 1]).unwrap()).unwrap();
        let ba = ordered_operator(&OrderedCircuit::new(c, vec![1, 0]).unwrap()).unwrap();
        assert!(ab.max_dist(&ba) > 0.5);
        assert!(ab.is_group_member(1e-12) && ba.is_group_member(1e-12));
    }

    #[test]
    fn operator_width_cap() {
        let c = Circuit::<f64>::new(MAX_OPERATOR_WIDTH + 1, vec![]).unwrap();
        let oc = OrderedCircuit::with_default_order(c).unwrap();
        assert!(matches!(
            ordered_operator(&oc),
            Err(Error::WidthLimit { .. })
        ));
    }

    #[test]
    fn lift_widens_and_refuses_to_narrow() {
        let q = chain().lift::<Quaternion>().unwrap();
        assert_eq!(q.gates()[0].matrix, builtin::<Quaternion>("H").unwrap());
        assert!(matches!(q.lift::<f64>(), Err(Error::Dimension(_))));
    }
}
