//! Circulant determinants of order 16 and their factorization into integer
//! norms over the divisors of 16.
//!
//! Nothing here evaluates a root of unity numerically. Evaluations at
//! `ζ₁₆^l` are either closed-form polynomials in the folded coefficients or
//! products in `ℤ[x]/(x⁸+1)` (see [`crate::ring`]).

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Zero};

use crate::error::CoreError;
use crate::gaussian::GaussianInteger;
use crate::ring::NegacyclicPoly;

/// Exact integer scalar usable by the closed-form norm formulas.
///
/// Implemented for `BigInt` (the reference path) and `i128` (the
/// enumeration path, where callers bound the inputs so no product overflows).
pub trait Scalar: Clone + Num + Neg<Output = Self> + From<i32> {}

impl<T: Clone + Num + Neg<Output = T> + From<i32>> Scalar for T {}

/// Coefficients `a₀ … a_{n−1}` of `f(x) = Σ a_k x^k`. Column `k` of the
/// associated circulant matrix is this vector rotated down by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffVector(Vec<BigInt>);

impl CoeffVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, CoreError> {
        if entries.is_empty() {
            return Err(CoreError::WrongLength { expected: 1, got: 0 });
        }
        Ok(Self(entries))
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        assert!(!entries.is_empty(), "coefficient vector must be non-empty");
        Self(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self(vec![BigInt::zero(); n])
    }

    /// `(1, 0, …, 0)`: the identity for cyclic convolution.
    pub fn unit(n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[0] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<(), CoreError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(CoreError::WrongLength { expected: n, got: self.len() })
        }
    }

    /// The circulant matrix, row-major: `M[i][j] = a_{(i − j) mod n}`.
    pub fn circulant_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i + n - j) % n].clone()).collect())
            .collect()
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination with row pivoting. Every division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let num = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact circulant determinant of any order via [`bareiss_determinant`].
pub fn det_bareiss(v: &CoeffVector) -> BigInt {
    bareiss_determinant(v.circulant_matrix())
}

/// Cyclic convolution: coefficients of `u(x)·w(x) mod (xⁿ − 1)`.
/// The circulant of the result is the product of the two circulants.
pub fn cyclic_convolve(u: &CoeffVector, w: &CoeffVector) -> Result<CoeffVector, CoreError> {
    let n = u.len();
    w.expect_len(n)?;
    let mut out = vec![BigInt::zero(); n];
    for (i, ui) in u.entries().iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.entries().iter().enumerate() {
            out[(i + j) % n] += ui * wj;
        }
    }
    Ok(CoeffVector(out))
}

/// The linear recombinations of `a₀ … a₁₅` through which every norm factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transforms {
    /// `(a_k + a_{k+8}) + (a_{k+4} + a_{k+12})`
    pub b: [BigInt; 4],
    /// `(a_k + a_{k+8}) − (a_{k+4} + a_{k+12})`
    pub c: [BigInt; 4],
    /// `e_k + i·e_{k+4}`
    pub d: [GaussianInteger; 4],
    /// `a_k − a_{k+8}`
    pub e: [BigInt; 8],
}

pub fn transforms(v: &CoeffVector) -> Result<Transforms, CoreError> {
    v.expect_len(16)?;
    let a = v.entries();
    let sum8: Vec<BigInt> = (0..8).map(|k| &a[k] + &a[k + 8]).collect();
    let e: [BigInt; 8] = std::array::from_fn(|k| &a[k] - &a[k + 8]);
    let b = std::array::from_fn(|k| &sum8[k] + &sum8[k + 4]);
    let c = std::array::from_fn(|k| &sum8[k] - &sum8[k + 4]);
    let d = std::array::from_fn(|k| GaussianInteger::new(e[k].clone(), e[k + 4].clone()));
    Ok(Transforms { b, c, d, e })
}

/// `(Re α₁, Im α₁)` as explicit quartics in `e₀ … e₇`, where
/// `α₁ = f(ζ)f(ζ⁵)f(ζ⁹)f(ζ¹³)` for a primitive 16th root `ζ`.
pub fn alpha1_parts<T: Scalar>(e: &[T; 8]) -> (T, T) {
    let [e0, e1, e2, e3, e4, e5, e6, e7] = e.clone();
    let k = |n: i32| T::from(n);
    let sq = |x: &T| x.clone() * x.clone();
    let p4 = |x: &T| sq(x) * sq(x);
    let m4 = |a: &T, b: &T, c: &T, d: &T| a.clone() * b.clone() * c.clone() * d.clone();
    let d04 = sq(&e0) - sq(&e4);
    let d15 = sq(&e1) - sq(&e5);
    let d26 = sq(&e2) - sq(&e6);
    let d37 = sq(&e3) - sq(&e7);

    let re = p4(&e0) + p4(&e4) - p4(&e2) - p4(&e6) - k(6) * sq(&e0) * sq(&e4)
        + k(6) * sq(&e2) * sq(&e6)
        - k(2) * d15.clone() * d37.clone()
        + k(4) * (e2.clone() * e6.clone() + e1.clone() * e7.clone() + e3.clone() * e5.clone()) * d04.clone()
        - k(4) * (e0.clone() * e6.clone() + e2.clone() * e4.clone() - e1.clone() * e5.clone()) * d15.clone()
        + k(4) * (e0.clone() * e4.clone() + e1.clone() * e3.clone() - e5.clone() * e7.clone()) * d26.clone()
        - k(4) * (e0.clone() * e2.clone() - e4.clone() * e6.clone() + e3.clone() * e7.clone()) * d37.clone()
        - k(8) * m4(&e0, &e2, &e1, &e5)
        + k(8) * m4(&e0, &e4, &e1, &e3)
        - k(8) * m4(&e0, &e4, &e5, &e7)
        + k(8) * m4(&e0, &e6, &e3, &e7)
        + k(8) * m4(&e2, &e4, &e3, &e7)
        - k(8) * m4(&e2, &e6, &e1, &e7)
        - k(8) * m4(&e2, &e6, &e3, &e5)
        + k(8) * m4(&e4, &e6, &e1, &e5)
        + k(8) * m4(&e1, &e3, &e5, &e7);

    let im = p4(&e3) + p4(&e7) - p4(&e1) - p4(&e5) - k(6) * sq(&e3) * sq(&e7)
        + k(6) * sq(&e1) * sq(&e5)
        - k(2) * d04.clone() * d26.clone()
        + k(4) * (e0.clone() * e4.clone() - e1.clone() * e3.clone() + e5.clone() * e7.clone()) * d04
        + k(4) * (e0.clone() * e2.clone() - e4.clone() * e6.clone() - e3.clone() * e7.clone()) * d15
        - k(4) * (e2.clone() * e6.clone() - e1.clone() * e7.clone() - e3.clone() * e5.clone()) * d26
        - k(4) * (e0.clone() * e6.clone() + e2.clone() * e4.clone() + e1.clone() * e5.clone()) * d37
        + k(8) * m4(&e0, &e2, &e4, &e6)
        - k(8) * m4(&e0, &e2, &e3, &e7)
        + k(8) * m4(&e0, &e4, &e1, &e7)
        + k(8) * m4(&e0, &e4, &e3, &e5)
        - k(8) * m4(&e0, &e6, &e1, &e5)
        - k(8) * m4(&e2, &e4, &e1, &e5)
        + k(8) * m4(&e2, &e6, &e1, &e3)
        - k(8) * m4(&e2, &e6, &e5, &e7)
        + k(8) * m4(&e4, &e6, &e3, &e7);

    (re, im)
}

/// `(Re α₂, Im α₂)` where `α₂ = f(ζ₈)f(ζ₈⁵)`.
pub fn alpha2_parts<T: Scalar>(c: &[T; 4]) -> (T, T) {
    let [c0, c1, c2, c3] = c.clone();
    let re = c0.clone() * c0.clone() - c2.clone() * c2.clone() + T::from(2) * c1.clone() * c3.clone();
    let im = c3.clone() * c3 - c1.clone() * c1 + T::from(2) * c0 * c2;
    (re, im)
}

pub fn alpha1_formula(e: &[BigInt; 8]) -> GaussianInteger {
    let (re, im) = alpha1_parts(e);
    GaussianInteger { re, im }
}

pub fn alpha2_formula(c: &[BigInt; 4]) -> GaussianInteger {
    let (re, im) = alpha2_parts(c);
    GaussianInteger { re, im }
}

/// `α₁` computed as the product `f(x)·f(x⁵)·f(x⁹)·f(x¹³)` in `ℤ[x]/(x⁸+1)`.
/// The result must lie in `ℤ[x⁴] = ℤ[i]`; anything else is a bug.
pub fn alpha1_exact(v: &CoeffVector) -> Result<GaussianInteger, CoreError> {
    v.expect_len(16)?;
    let product = [1usize, 5, 9, 13]
        .iter()
        .map(|&j| NegacyclicPoly::<8>::from_substitution(v.entries(), j))
        .fold(NegacyclicPoly::<8>::one(), |acc, p| &acc * &p);
    product.as_gaussian(4).ok_or_else(|| {
        CoreError::InternalInvariantViolation(format!(
            "alpha1 product left Z[i]: coefficients {:?}",
            product.coeffs()
        ))
    })
}

/// `α₂` computed as `f(x)·f(x⁵)` in `ℤ[x]/(x⁴+1)`.
pub fn alpha2_exact(v: &CoeffVector) -> Result<GaussianInteger, CoreError> {
    v.expect_len(16)?;
    let product = [1usize, 5]
        .iter()
        .map(|&j| NegacyclicPoly::<4>::from_substitution(v.entries(), j))
        .fold(NegacyclicPoly::<4>::one(), |acc, p| &acc * &p);
    product.as_gaussian(2).ok_or_else(|| {
        CoreError::InternalInvariantViolation(format!(
            "alpha2 product left Z[i]: coefficients {:?}",
            product.coeffs()
        ))
    })
}

/// The five norms `N₁, N₂, N₄, N₈, N₁₆` together with `α₁, α₂` and the
/// transforms that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormFactorization {
    pub n1: BigInt,
    pub n2: BigInt,
    pub n4: BigInt,
    pub n8: BigInt,
    pub n16: BigInt,
    pub alpha1: GaussianInteger,
    pub alpha2: GaussianInteger,
    pub transforms: Transforms,
}

impl NormFactorization {
    pub fn product(&self) -> BigInt {
        &self.n1 * &self.n2 * &self.n4 * &self.n8 * &self.n16
    }

    /// `N₄·N₈·N₁₆`, the order-4 circulant determinant of `b`.
    pub fn order4_part(&self) -> BigInt {
        &self.n4 * &self.n8 * &self.n16
    }
}

pub fn norms(v: &CoeffVector) -> Result<NormFactorization, CoreError> {
    let t = transforms(v)?;
    let a = v.entries();
    let n16: BigInt = a.iter().sum();
    let n8: BigInt = a
        .iter()
        .enumerate()
        .map(|(k, x)| if k % 2 == 0 { x.clone() } else { -x })
        .sum();
    let n4 = {
        let x = &t.b[0] - &t.b[2];
        let y = &t.b[1] - &t.b[3];
        &x * &x + &y * &y
    };
    let alpha2 = alpha2_formula(&t.c);
    let alpha1 = alpha1_formula(&t.e);
    Ok(NormFactorization {
        n1: alpha1.norm(),
        n2: alpha2.norm(),
        n4,
        n8,
        n16,
        alpha1,
        alpha2,
        transforms: t,
    })
}

pub fn det_via_norms(v: &CoeffVector) -> Result<BigInt, CoreError> {
    Ok(norms(v)?.product())
}

/// Circulant determinant of order 2, 4, 8 or 16 by repeated folding
/// `f ↦ (f mod x^{n/2} − 1, f mod x^{n/2} + 1)` and the closed-form norms.
///
/// Panics on other lengths. With `T = i128` the caller must bound the
/// entries so that `(Σ|a_k|)ⁿ` fits; see [`crate::search::SearchBox`].
pub fn det_folded<T: Scalar>(a: &[T]) -> T {
    match a.len() {
        1 => a[0].clone(),
        2 => a[0].clone() * a[0].clone() - a[1].clone() * a[1].clone(),
        4 => {
            let s = a[0].clone() + a[1].clone() + a[2].clone() + a[3].clone();
            let t = a[0].clone() - a[1].clone() + a[2].clone() - a[3].clone();
            let x = a[0].clone() - a[2].clone();
            let y = a[1].clone() - a[3].clone();
            s * t * (x.clone() * x + y.clone() * y)
        }
        8 => {
            let plus: [T; 4] = std::array::from_fn(|k| a[k].clone() + a[k + 4].clone());
            let minus: [T; 4] = std::array::from_fn(|k| a[k].clone() - a[k + 4].clone());
            let (re, im) = alpha2_parts(&minus);
            det_folded(&plus) * (re.clone() * re + im.clone() * im)
        }
        16 => {
            let plus: [T; 8] = std::array::from_fn(|k| a[k].clone() + a[k + 8].clone());
            let minus: [T; 8] = std::array::from_fn(|k| a[k].clone() - a[k + 8].clone());
            let (re, im) = alpha1_parts(&minus);
            det_folded(&plus) * (re.clone() * re + im.clone() * im)
        }
        n => panic!("det_folded supports orders 1, 2, 4, 8, 16; got {n}"),
    }
}

/// `x ∈ 2^k·ℤ_odd`.
pub fn is_pow2_times_odd(x: &BigInt, k: u64) -> bool {
    x.trailing_zeros() == Some(k)
}

/// Parity profile of a factorization with respect to `D ∈ 64ℤ_odd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityGate {
    pub all_odd_norms: bool,
    /// `D ∈ 64ℤ_odd`.
    pub det_in_64_odd: bool,
    /// `N₁, N₂ ∈ 2ℤ_odd` and `N₄N₈N₁₆ ∈ 16ℤ_odd`.
    pub split_two_two_sixteen: bool,
    /// `N₁, N₂, N₄ ∈ 2ℤ_odd` and `N₈N₁₆ ∈ 8ℤ_odd`.
    pub split_two_two_two_eight: bool,
}

impl ParityGate {
    /// The three conditions describe the same set of vectors.
    pub fn conditions_agree(&self) -> bool {
        self.det_in_64_odd == self.split_two_two_sixteen
            && self.det_in_64_odd == self.split_two_two_two_eight
    }
}

pub fn parity_profile(nf: &NormFactorization) -> ParityGate {
    let twice_odd = |x: &BigInt| is_pow2_times_odd(x, 1);
    let n8n16 = &nf.n8 * &nf.n16;
    let det = nf.product();
    ParityGate {
        all_odd_norms: [&nf.n1, &nf.n2, &nf.n4, &nf.n8, &nf.n16].iter().all(|x| x.is_odd()),
        det_in_64_odd: is_pow2_times_odd(&det, 6),
        split_two_two_sixteen: twice_odd(&nf.n1)
            && twice_odd(&nf.n2)
            && is_pow2_times_odd(&(&nf.n4 * &n8n16), 4),
        split_two_two_two_eight: twice_odd(&nf.n1)
            && twice_odd(&nf.n2)
            && twice_odd(&nf.n4)
            && is_pow2_times_odd(&n8n16, 3),
    }
}

/// Parity profile of `v`; errors if the three `64ℤ_odd` conditions disagree.
pub fn parity_gate(v: &CoeffVector) -> Result<ParityGate, CoreError> {
    let gate = parity_profile(&norms(v)?);
    if !gate.conditions_agree() {
        return Err(CoreError::InternalInvariantViolation(format!(
            "64Z_odd conditions disagree for {v}: {gate:?}"
        )));
    }
    Ok(gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v16(a: [i64; 16]) -> CoeffVector {
        CoeffVector::from_i64s(&a)
    }

    const FAMILY_320: [i64; 16] = [0, 0, 0, 0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, -1, -1];
    const FAMILY_576: [i64; 16] = [0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0];

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(det_bareiss(&CoeffVector::unit(16)), BigInt::from(1));
        assert_eq!(det_bareiss(&CoeffVector::zeros(16)), BigInt::from(0));
        assert_eq!(det_bareiss(&v16(FAMILY_320)), BigInt::from(320));
        for (x, y) in [(3i64, 5i64), (-2, 7), (0, 4), (9, 0)] {
            assert_eq!(det_bareiss(&CoeffVector::from_i64s(&[x, y])), BigInt::from(x * x - y * y));
        }
        assert_eq!(det_bareiss(&CoeffVector::from_i64s(&[-7])), BigInt::from(-7));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        // leading zero forces a row swap; circ(0,1,0) is a 3-cycle permutation
        assert_eq!(det_bareiss(&CoeffVector::from_i64s(&[0, 1, 0])), BigInt::from(1));
        // circ(0,1) = [[0,1],[1,0]]
        assert_eq!(det_bareiss(&CoeffVector::from_i64s(&[0, 1])), BigInt::from(-1));
    }

    #[test]
    fn circulant_orientation() {
        let m = CoeffVector::from_i64s(&[1, 2, 3]).circulant_matrix();
        let as_i64: Vec<Vec<i64>> = m
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        assert_eq!(as_i64, vec![vec![1, 3, 2], vec![2, 1, 3], vec![3, 2, 1]]);
    }

    #[test]
    fn norm_route_matches_known_values() {
        assert_eq!(det_via_norms(&CoeffVector::unit(16)).unwrap(), BigInt::from(1));
        assert_eq!(det_via_norms(&v16(FAMILY_576)).unwrap(), BigInt::from(576));
        assert!(det_via_norms(&CoeffVector::unit(8)).is_err());
    }

    #[test]
    fn transforms_examples() {
        let t = transforms(&CoeffVector::zeros(16)).unwrap();
        assert!(t.b.iter().chain(t.c.iter()).chain(t.e.iter()).all(Zero::is_zero));
        assert!(t.d.iter().all(GaussianInteger::is_zero));

        let t = transforms(&CoeffVector::unit(16)).unwrap();
        let ints = |xs: &[BigInt]| xs.iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(&t.b), vec![1, 0, 0, 0]);
        assert_eq!(ints(&t.c), vec![1, 0, 0, 0]);
        assert_eq!(ints(&t.e), vec![1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(t.d[0], GaussianInteger::one());

        let ramp: Vec<i64> = (0..16).collect();
        let t = transforms(&CoeffVector::from_i64s(&ramp)).unwrap();
        assert_eq!(t.b[0], BigInt::from(24));
        assert_eq!(t.e[0], BigInt::from(-8));
    }

    #[test]
    fn alpha_formula_unit_inputs() {
        let mut e = std::array::from_fn(|_| BigInt::zero());
        e[0] = BigInt::one();
        assert_eq!(alpha1_formula(&e), GaussianInteger::new(1, 0));
        let mut e: [BigInt; 8] = std::array::from_fn(|_| BigInt::zero());
        e[3] = BigInt::one();
        assert_eq!(alpha1_formula(&e), GaussianInteger::new(0, 1));

        let c = |xs: [i64; 4]| xs.map(BigInt::from);
        assert_eq!(alpha2_formula(&c([1, 0, 0, 0])), GaussianInteger::new(1, 0));
        assert_eq!(alpha2_formula(&c([0, 1, 0, 0])), GaussianInteger::new(0, -1));
    }

    #[test]
    fn alpha_exact_unit_inputs() {
        assert_eq!(alpha1_exact(&CoeffVector::unit(16)).unwrap(), GaussianInteger::one());
        let mut x = [0i64; 16];
        x[1] = 1;
        assert_eq!(alpha1_exact(&v16(x)).unwrap(), GaussianInteger::new(0, -1));
    }

    #[test]
    fn norms_of_identity_are_one() {
        let nf = norms(&CoeffVector::unit(16)).unwrap();
        for n in [&nf.n1, &nf.n2, &nf.n4, &nf.n8, &nf.n16] {
            assert!(n.is_one());
        }
    }

    #[test]
    fn family_320_splits_as_64_odd() {
        let nf = norms(&v16(FAMILY_320)).unwrap();
        assert_eq!(nf.product(), BigInt::from(320));
        for n in [&nf.n1, &nf.n2, &nf.n4] {
            assert!(is_pow2_times_odd(n, 1), "{n}");
        }
        assert!(is_pow2_times_odd(&(&nf.n8 * &nf.n16), 3));
        let gate = parity_gate(&v16(FAMILY_320)).unwrap();
        assert!(gate.det_in_64_odd && gate.split_two_two_two_eight && gate.split_two_two_sixteen);
        assert!(!gate.all_odd_norms);
    }

    #[test]
    fn parity_gate_identity_and_576() {
        let gate = parity_gate(&CoeffVector::unit(16)).unwrap();
        assert!(gate.all_odd_norms);
        assert!(!gate.det_in_64_odd);
        let gate = parity_gate(&v16(FAMILY_576)).unwrap();
        assert!(gate.det_in_64_odd && gate.split_two_two_two_eight);
    }

    #[test]
    fn convolve_identity() {
        let u = v16(FAMILY_320);
        assert_eq!(cyclic_convolve(&u, &CoeffVector::unit(16)).unwrap(), u);
        assert!(cyclic_convolve(&u, &CoeffVector::unit(8)).is_err());
    }

    fn small_vec(n: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-bound..=bound, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn folded_det_matches_bareiss(n in prop::sample::select(vec![2usize, 4, 8, 16]), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
            let fast = det_folded(&a.iter().map(|&x| x as i128).collect::<Vec<_>>());
            prop_assert_eq!(BigInt::from(fast), det_bareiss(&CoeffVector::from_i64s(&a)));
        }

        #[test]
        fn transforms_b_plus_c_even(a in small_vec(16, 50)) {
            let t = transforms(&CoeffVector::from_i64s(&a)).unwrap();
            for k in 0..4 {
                prop_assert!((&t.b[k] + &t.c[k]).is_even());
                prop_assert_eq!(&t.d[k].re, &t.e[k]);
                prop_assert_eq!(&t.d[k].im, &t.e[k + 4]);
            }
        }

        #[test]
        fn convolution_is_multiplicative(u in small_vec(16, 3), w in small_vec(16, 3)) {
            let (u, w) = (CoeffVector::from_i64s(&u), CoeffVector::from_i64s(&w));
            let uw = cyclic_convolve(&u, &w).unwrap();
            prop_assert_eq!(det_bareiss(&uw), det_bareiss(&u) * det_bareiss(&w));
        }
    }
}
