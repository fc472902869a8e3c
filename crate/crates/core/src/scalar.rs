//! Scalar domains: real, complex and quaternionic amplitudes.
//!
//! Everything above this module is generic over [`Scalar`]. Quaternion
//! multiplication does not commute, so callers must keep operand order
//! exactly as written; the matrix and simulator code never reorders a
//! product.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

/// The three amplitude domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Real,
    Complex,
    Quaternion,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Real => "real",
            Domain::Complex => "complex",
            Domain::Quaternion => "quaternion",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "real" => Some(Domain::Real),
            "complex" => Some(Domain::Complex),
            "quaternion" => Some(Domain::Quaternion),
            _ => None,
        }
    }

    /// Number of real components per scalar.
    pub fn real_dim(self) -> usize {
        match self {
            Domain::Real => 1,
            Domain::Complex => 2,
            Domain::Quaternion => 4,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A quaternion `re + i·i + j·j + k·k` with Hamilton's product.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Quaternion { re, i, j, k }
    }

    pub const fn from_real(re: f64) -> Self {
        Quaternion::new(re, 0.0, 0.0, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Quaternion::new(z.re, z.im, 0.0, 0.0)
    }

    pub fn components(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    /// `re − i·i − j·j − k·k`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    /// Splits into the complex part and the weird part, `q = co + we·j`.
    pub fn split(self) -> ComplexPair {
        ComplexPair {
            co: Complex64::new(self.re, self.i),
            we: Complex64::new(self.j, self.k),
        }
    }

    /// Complex part `re + i·i`.
    pub fn co(self) -> Complex64 {
        Complex64::new(self.re, self.i)
    }

    /// Weird part `j + k·i`.
    pub fn we(self) -> Complex64 {
        Complex64::new(self.j, self.k)
    }

    /// True when the j and k components vanish exactly.
    pub fn is_complex(self) -> bool {
        self.j == 0.0 && self.k == 0.0
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.re, self.i, self.j, self.k)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product, with `i² = j² = k² = ijk = −1`.
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.re * b.re - a.i * b.i - a.j * b.j - a.k * b.k,
            a.re * b.i + a.i * b.re + a.j * b.k - a.k * b.j,
            a.re * b.j - a.i * b.k + a.j * b.re + a.k * b.i,
            a.re * b.k + a.i * b.j - a.j * b.i + a.k * b.re,
        )
    }
}

/// A quaternion written as two complex numbers, `co + we·j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub co: Complex64,
    pub we: Complex64,
}

impl ComplexPair {
    pub fn join(self) -> Quaternion {
        Quaternion::new(self.co.re, self.co.im, self.we.re, self.we.im)
    }

    /// Product of `a·b` computed purely in complex arithmetic:
    /// `co(ab) = co(a)co(b) − we(a)we*(b)`, `we(ab) = co(a)we(b) + we(a)co*(b)`.
    pub fn mul_rule(a: ComplexPair, b: ComplexPair) -> ComplexPair {
        ComplexPair {
            co: a.co * b.co - a.we * b.we.conj(),
            we: a.co * b.we + a.we * b.co.conj(),
        }
    }
}

/// Complex/weird split of a product, via the complex multiplication rule.
pub fn split_mul_rule(a: Quaternion, b: Quaternion) -> ComplexPair {
    ComplexPair::mul_rule(a.split(), b.split())
}

/// `(co(a*), we(a*))`, which always equals `(co(a)*, −we(a))`.
pub fn cowe_identities(a: Quaternion) -> (Complex64, Complex64) {
    let c = a.conj();
    (c.co(), c.we())
}

/// An amplitude domain. Matrices, states and circuits are generic over it.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const DOMAIN: Domain;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }
    /// Multiplication by a real, which commutes with every domain.
    fn scale(self, s: f64) -> Self;
    /// Independent standard normal in every real component.
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_quaternion(self) -> Quaternion;
    /// Exact narrowing; `None` if a component outside this domain is nonzero.
    fn try_from_quaternion(q: Quaternion) -> Option<Self>;

    /// Real number, `[re, im]`, or `[re, i, j, k]`.
    fn to_json(self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

fn json_components(v: &Value, n: usize) -> Option<Vec<f64>> {
    let arr = v.as_array()?;
    if arr.len() != n {
        return None;
    }
    arr.iter().map(Value::as_f64).collect()
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

impl Scalar for f64 {
    const DOMAIN: Domain = Domain::Real;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn to_quaternion(self) -> Quaternion {
        Quaternion::from_real(self)
    }
    fn try_from_quaternion(q: Quaternion) -> Option<Self> {
        (q.i == 0.0 && q.j == 0.0 && q.k == 0.0).then_some(q.re)
    }
    fn to_json(self) -> Value {
        json_number(self)
    }
    fn from_json(v: &Value) -> Option<Self> {
        v.as_f64()
    }
}

impl Scalar for Complex64 {
    const DOMAIN: Domain = Domain::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
    fn to_quaternion(self) -> Quaternion {
        Quaternion::from_complex(self)
    }
    fn try_from_quaternion(q: Quaternion) -> Option<Self> {
        q.is_complex().then(|| q.co())
    }
    fn to_json(self) -> Value {
        Value::Array(vec![json_number(self.re), json_number(self.im)])
    }
    fn from_json(v: &Value) -> Option<Self> {
        if let Some(x) = v.as_f64() {
            return Some(Complex64::new(x, 0.0));
        }
        let c = json_components(v, 2)?;
        Some(Complex64::new(c[0], c[1]))
    }
}

impl Scalar for Quaternion {
    const DOMAIN: Domain = Domain::Quaternion;

    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn one() -> Self {
        Quaternion::ONE
    }
    fn from_real(x: f64) -> Self {
        Quaternion::from_real(x)
    }
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    fn norm_sqr(self) -> f64 {
        Quaternion::norm_sqr(self)
    }
    fn scale(self, s: f64) -> Self {
        Quaternion::scale(self, s)
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
    fn to_quaternion(self) -> Quaternion {
        self
    }
    fn try_from_quaternion(q: Quaternion) -> Option<Self> {
        Some(q)
    }
    fn to_json(self) -> Value {
        Value::Array(self.components().into_iter().map(json_number).collect())
    }
    fn from_json(v: &Value) -> Option<Self> {
        if let Some(x) = v.as_f64() {
            return Some(Quaternion::from_real(x));
        }
        let c = json_components(v, 4)?;
        Some(Quaternion::new(c[0], c[1], c[2], c[3]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    /// Left-multiplication matrix of `a` acting on `(re, i, j, k)`, built
    /// from the unit-root table rather than from the product formula.
    fn left_mul_matrix(a: Quaternion) -> [[f64; 4]; 4] {
        // basis products e_r * e_c = sign * e_idx
        const TABLE: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let ac = a.components();
        let mut m = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let (s, idx) = TABLE[r][c];
                m[idx][c] += s * ac[r];
            }
        }
        m
    }

    fn oracle_mul(a: Quaternion, b: Quaternion) -> Quaternion {
        let m = left_mul_matrix(a);
        let bc = b.components();
        let mut out = [0.0; 4];
        for (r, row) in m.iter().enumerate() {
            out[r] = row.iter().zip(bc).map(|(x, y)| x * y).sum();
        }
        Quaternion::new(out[0], out[1], out[2], out[3])
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).modulus() <= tol
    }

    fn units() -> [Quaternion; 8] {
        let u = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
        [u[0], u[1], u[2], u[3], -u[0], -u[1], -u[2], -u[3]]
    }

    #[test]
    fn unit_roots() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        for u in [Quaternion::I, Quaternion::J, Quaternion::K] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
        assert_eq!(
            Quaternion::I * Quaternion::J * Quaternion::K,
            -Quaternion::ONE
        );
    }

    #[test]
    fn product_matches_table_oracle() {
        let a = Quaternion::ONE + Quaternion::I;
        let b = Quaternion::ONE + Quaternion::J;
        assert_eq!(oracle_mul(a, b), Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        for x in units() {
            for y in units() {
                assert_eq!(x * y, oracle_mul(x, y));
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(
            Quaternion::from_real(5.0).conj(),
            Quaternion::from_real(5.0)
        );
        assert_eq!((Quaternion::I * Quaternion::J).conj(), -Quaternion::K);
        for x in units() {
            for y in units() {
                assert_eq!((x * y).conj(), y.conj() * x.conj());
            }
        }
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).modulus(), 2.0);
        assert_eq!(Quaternion::ZERO.modulus(), 0.0);
        assert!((Quaternion::new(0.6, 0.0, 0.0, 0.8).modulus() - 1.0).abs() < TOL);
    }

    #[test]
    fn split_examples() {
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0).split();
        assert_eq!(p.co, Complex64::new(1.0, 2.0));
        assert_eq!(p.we, Complex64::new(3.0, 4.0));
        let p = Quaternion::new(2.0, -1.0, 0.0, 0.0).split();
        assert_eq!(
            (p.co, p.we),
            (Complex64::new(2.0, -1.0), Complex64::new(0.0, 0.0))
        );
        let p = Quaternion::J.split();
        assert_eq!(
            (p.co, p.we),
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        );
    }

    #[test]
    fn split_mul_rule_examples() {
        let p = split_mul_rule(Quaternion::I, Quaternion::J);
        assert_eq!(p.co, Complex64::new(0.0, 0.0));
        assert_eq!(p.we, Complex64::new(0.0, 1.0));
        assert_eq!(p.join(), Quaternion::K);

        let b = Quaternion::new(0.3, -1.2, 2.5, 0.7);
        assert_eq!(split_mul_rule(Quaternion::ONE, b), b.split());

        let p = split_mul_rule(Quaternion::J, Quaternion::J);
        assert_eq!(
            (p.co, p.we),
            (Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0))
        );
    }

    #[test]
    fn cowe_examples() {
        let (co, we) = cowe_identities(Quaternion::new(1.0, 2.0, 3.0, 4.0));
        assert_eq!(co, Complex64::new(1.0, -2.0));
        assert_eq!(we, -Complex64::new(3.0, 4.0));
        let (co, we) = cowe_identities(Quaternion::from_real(-2.5));
        assert_eq!(
            (co, we),
            (Complex64::new(-2.5, 0.0), Complex64::new(0.0, 0.0))
        );
    }

    #[test]
    fn parts_are_not_self_conjugate_in_general() {
        let a = Quaternion::new(0.5, 1.5, -2.0, 0.25);
        assert_ne!(a.co(), a.co().conj());
        assert_ne!(a.we(), a.we().conj());
        // and the witness makes the multiplication rule asymmetric
        assert!(!close(a * Quaternion::J, Quaternion::J * a, 1e-3));
    }

    #[test]
    fn domain_conjugation() {
        assert_eq!(Scalar::conj(-3.0_f64), -3.0);
        assert_eq!(
            Scalar::conj(Complex64::new(1.0, 2.0)),
            Complex64::new(1.0, -2.0)
        );
        assert_eq!(Scalar::conj(Quaternion::J), -Quaternion::J);
    }

    #[test]
    fn json_shapes() {
        assert_eq!(2.5_f64.to_json(), serde_json::json!(2.5));
        assert_eq!(
            Complex64::new(1.0, -1.0).to_json(),
            serde_json::json!([1.0, -1.0])
        );
        assert_eq!(
            Quaternion::K.to_json(),
            serde_json::json!([0.0, 0.0, 0.0, 1.0])
        );
        assert_eq!(
            Quaternion::from_json(&serde_json::json!([1, 2, 3, 4])),
            Some(Quaternion::new(1.0, 2.0, 3.0, 4.0))
        );
        assert_eq!(Complex64::from_json(&serde_json::json!([1, 2, 3])), None);
        assert_eq!(Complex64::try_from_quaternion(Quaternion::J), None);
        assert_eq!(
            f64::try_from_quaternion(Quaternion::from_real(2.0)),
            Some(2.0)
        );
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn modulus_is_multiplicative(a in quat(), b in quat()) {
            prop_assert!(((a * b).modulus() - a.modulus() * b.modulus()).abs() <= TOL * (1.0 + a.modulus() * b.modulus()));
        }

        #[test]
        fn product_matches_oracle(a in quat(), b in quat()) {
            prop_assert!(close(a * b, oracle_mul(a, b), TOL));
        }

        #[test]
        fn associative(a in quat(), b in quat(), c in quat()) {
            prop_assert!(close((a * b) * c, a * (b * c), 1e-11));
        }

        #[test]
        fn split_rule_matches_product(a in quat(), b in quat()) {
            let lhs = split_mul_rule(a, b);
            let rhs = (a * b).split();
            prop_assert!((lhs.co - rhs.co).norm() <= TOL);
            prop_assert!((lhs.we - rhs.we).norm() <= TOL);
        }

        #[test]
        fn split_round_trips(a in quat()) {
            prop_assert_eq!(a.split().join(), a);
        }

        #[test]
        fn modulus_from_parts(a in quat()) {
            let p = a.split();
            prop_assert!((a.modulus() - (p.co.norm_sqr() + p.we.norm_sqr()).sqrt()).abs() <= TOL);
        }

        #[test]
        fn conj_identities(a in quat(), b in quat()) {
            let (co, we) = cowe_identities(a);
            prop_assert_eq!(co, a.co().conj());
            prop_assert_eq!(we, -a.we());
            prop_assert_eq!(a.conj().conj(), a);
            prop_assert!(close((a * b).conj(), b.conj() * a.conj(), TOL));
            let n = a * a.conj();
            prop_assert!(close(n, Quaternion::from_real(a.norm_sqr()), TOL));
        }

        #[test]
        fn complex_subalgebra_commutes(a in quat(), b in quat()) {
            let a = Quaternion::from_complex(a.co());
            let b = Quaternion::from_complex(b.co());
            prop_assert!(close(a * b, b * a, TOL));
        }

        #[test]
        fn complex_modulus_multiplicative(a in quat(), b in quat()) {
            let (x, y) = (a.co(), b.we());
            prop_assert!((Scalar::modulus(x * y) - Scalar::modulus(x) * Scalar::modulus(y)).abs() <= TOL * 10.0);
        }
    }
}
