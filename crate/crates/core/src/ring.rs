//! Arithmetic in `ℤ[x]/(x^N + 1)` for `N` a power of two, i.e. in
//! `ℤ[ζ_{2N}]`. Used as an exact substitute for evaluating a polynomial at
//! primitive roots of unity.

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::gaussian::GaussianInteger;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegacyclicPoly<const N: usize>([BigInt; N]);

impl<const N: usize> NegacyclicPoly<N> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| BigInt::zero()))
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.0[0] = BigInt::one();
        p
    }

    pub fn coeffs(&self) -> &[BigInt; N] {
        &self.0
    }

    /// Adds `c·x^e`, reducing with `x^N = −1` (so `x^{2N} = 1`).
    fn add_monomial(&mut self, c: &BigInt, e: usize) {
        let e = e % (2 * N);
        if e < N {
            self.0[e] += c;
        } else {
            self.0[e - N] -= c;
        }
    }

    /// Image of `f(x^j)` where `f(x) = Σ a_k x^k`.
    pub fn from_substitution(a: &[BigInt], j: usize) -> Self {
        let mut p = Self::zero();
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                p.add_monomial(c, j * k);
            }
        }
        p
    }

    /// If the element lies in `ℤ[x^{i_index}]` with `x^{i_index} = √−1`,
    /// returns it as a Gaussian integer.
    pub fn as_gaussian(&self, i_index: usize) -> Option<GaussianInteger> {
        debug_assert_eq!(2 * i_index, N);
        let stray = self
            .0
            .iter()
            .enumerate()
            .any(|(k, c)| k != 0 && k != i_index && !c.is_zero());
        if stray {
            None
        } else {
            Some(GaussianInteger::new(self.0[0].clone(), self.0[i_index].clone()))
        }
    }
}

impl<const N: usize> Mul for &NegacyclicPoly<N> {
    type Output = NegacyclicPoly<N>;

    fn mul(self, rhs: &NegacyclicPoly<N>) -> NegacyclicPoly<N> {
        let mut out = NegacyclicPoly::zero();
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.0.iter().enumerate() {
                out.add_monomial(&(x * y), i + j);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<const N: usize>(xs: [i64; N]) -> NegacyclicPoly<N> {
        NegacyclicPoly(xs.map(BigInt::from))
    }

    #[test]
    fn x_to_the_n_is_minus_one() {
        let x = poly([0, 1, 0, 0]);
        let x2 = &x * &x;
        let x4 = &x2 * &x2;
        assert_eq!(x4, poly([-1, 0, 0, 0]));
        assert_eq!(x2.as_gaussian(2), Some(GaussianInteger::new(0, 1)));
        assert_eq!(x.as_gaussian(2), None);
    }

    #[test]
    fn substitution_wraps_exponents() {
        // f = x, f(x^5) in Z[x]/(x^4+1): x^5 = -x
        let a: Vec<BigInt> = [0, 1].map(BigInt::from).to_vec();
        assert_eq!(NegacyclicPoly::<4>::from_substitution(&a, 5), poly([0, -1, 0, 0]));
        // x^13 in Z[x]/(x^8+1) is -x^5
        assert_eq!(
            NegacyclicPoly::<8>::from_substitution(&a, 13),
            poly([0, 0, 0, 0, 0, -1, 0, 0])
        );
    }
}
