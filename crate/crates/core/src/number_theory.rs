//! Primality, factorization, and representations of primes by `a² + b²` and
//! `a² + 2b²`.

use std::sync::OnceLock;

use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::NumberTheoryError;

/// Trial division covers every prime below this bound.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Strong-probable-prime rounds used above `2⁶⁴`.
pub const RANDOM_MR_ROUNDS: usize = 40;

pub const DEFAULT_SEED: u64 = 0x5eed_c1c1_0016;

/// Deterministic Miller-Rabin bases for every `n < 2⁶⁴`.
const U64_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::new();
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in U64_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in U64_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn is_sprp_big(n: &BigInt, a: &BigInt, d: &BigInt, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality with an explicit seed for the random rounds used above `2⁶⁴`.
pub fn is_prime_seeded(n: &BigInt, seed: u64) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..64] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let two = BigInt::from(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    U64_BASES.iter().all(|&a| is_sprp_big(n, &BigInt::from(a), &d, s))
        && (0..RANDOM_MR_ROUNDS).all(|_| {
            let a = rng.gen_bigint_range(&two, &n_minus_1);
            is_sprp_big(n, &a, &d, s)
        })
}

/// Deterministic for `n < 2⁶⁴`; strong-probable-prime test above.
pub fn is_prime(n: &BigInt) -> bool {
    is_prime_seeded(n, DEFAULT_SEED)
}

/// Effort controls for [`factorize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub seed: u64,
    /// Total Pollard-rho iterations allowed across all cofactors.
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, rho_budget: 1 << 24 }
    }
}

impl FactorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `1` or `-1`.
    pub sign: i8,
    /// `(prime, exponent)` with strictly increasing primes.
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let mag: BigInt = self
            .factors
            .iter()
            .map(|(p, e)| num_traits::pow(p.clone(), *e as usize))
            .product();
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

struct Rho {
    rng: ChaCha8Rng,
    remaining: u64,
}

impl Rho {
    fn spend(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }

    /// Brent's variant on word-sized input; returns a proper divisor.
    fn split_u64(&mut self, n: u64) -> Option<u64> {
        if n.is_multiple_of(2) {
            return Some(2);
        }
        const BATCH: u64 = 128;
        loop {
            let c = self.rng.gen_range(1..n);
            let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
            let mut y = self.rng.gen_range(0..n);
            let (mut x, mut ys) = (y, y);
            let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
            while g == 1 {
                x = y;
                if !self.spend(r) {
                    return None;
                }
                for _ in 0..r {
                    y = f(y);
                }
                let mut k = 0;
                while k < r && g == 1 {
                    ys = y;
                    let steps = BATCH.min(r - k);
                    if !self.spend(steps) {
                        return None;
                    }
                    for _ in 0..steps {
                        y = f(y);
                        q = mul_mod(q, x.abs_diff(y), n);
                    }
                    g = q.gcd(&n);
                    k += BATCH;
                }
                r *= 2;
            }
            if g == n {
                loop {
                    ys = f(ys);
                    g = x.abs_diff(ys).gcd(&n);
                    if g > 1 {
                        break;
                    }
                }
            }
            if g != n {
                return Some(g);
            }
        }
    }

    fn split_big(&mut self, n: &BigInt) -> Option<BigInt> {
        if n.is_even() {
            return Some(BigInt::from(2));
        }
        if let Some(small) = n.to_u64() {
            return self.split_u64(small).map(BigInt::from);
        }
        const BATCH: u64 = 128;
        let one = BigInt::one();
        loop {
            let c = self.rng.gen_bigint_range(&one, n);
            let f = |x: &BigInt| (x * x + &c) % n;
            let mut y = self.rng.gen_bigint_range(&BigInt::zero(), n);
            let mut x = y.clone();
            let mut ys = y.clone();
            let mut g = BigInt::one();
            let mut q = BigInt::one();
            let mut r = 1u64;
            while g.is_one() {
                x = y.clone();
                if !self.spend(r) {
                    return None;
                }
                for _ in 0..r {
                    y = f(&y);
                }
                let mut k = 0;
                while k < r && g.is_one() {
                    ys = y.clone();
                    let steps = BATCH.min(r - k);
                    if !self.spend(steps) {
                        return None;
                    }
                    for _ in 0..steps {
                        y = f(&y);
                        q = (q * (&x - &y).abs()) % n;
                    }
                    g = q.gcd(n);
                    k += BATCH;
                }
                r *= 2;
            }
            if &g == n {
                loop {
                    ys = f(&ys);
                    g = (&x - &ys).abs().gcd(n);
                    if !g.is_one() {
                        break;
                    }
                }
            }
            if &g != n {
                return Some(g);
            }
        }
    }
}

fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Complete factorization of a nonzero integer: trial division by primes
/// below [`TRIAL_DIVISION_LIMIT`], then Pollard rho on what remains.
pub fn factorize(n: &BigInt, cfg: &FactorConfig) -> Result<Factorization, NumberTheoryError> {
    if n.is_zero() {
        return Err(NumberTheoryError::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut found: Vec<BigInt> = Vec::new();

    for &p in small_primes() {
        let p = BigInt::from(p);
        if &p * &p > rest {
            break;
        }
        while (&rest % &p).is_zero() {
            rest /= &p;
            found.push(p.clone());
        }
    }

    let mut rho = Rho { rng: ChaCha8Rng::seed_from_u64(cfg.seed), remaining: cfg.rho_budget };
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_seeded(&m, cfg.seed) {
            found.push(m);
            continue;
        }
        if let Some(r) = perfect_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = rho
            .split_big(&m)
            .ok_or_else(|| NumberTheoryError::FactorizationTimeout(m.clone()))?;
        stack.push(&m / &d);
        stack.push(d);
    }

    found.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let out = Factorization { sign, factors };
    assert_eq!(&out.value(), n, "factorization does not reproduce its input");
    Ok(out)
}

fn invalid(p: &BigInt, residue: u32, modulus: u32) -> NumberTheoryError {
    NumberTheoryError::InvalidResidue { value: p.clone(), residue, modulus }
}

fn check_prime_residue(p: &BigInt, residue: u32, modulus: u32) -> Result<(), NumberTheoryError> {
    if p.mod_floor(&BigInt::from(modulus)) != BigInt::from(residue) || !is_prime(p) {
        return Err(invalid(p, residue, modulus));
    }
    Ok(())
}

/// Euclidean descent on `(p, root)`: the first remainder below `√p`.
fn descend(p: &BigInt, root: BigInt) -> BigInt {
    let limit = p.sqrt();
    let (mut a, mut b) = (p.clone(), root);
    while b > limit {
        let r = &a % &b;
        a = b;
        b = r;
    }
    b
}

/// `p = a² + b²` with `a` odd, `b` even, both positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSquares {
    pub a: BigInt,
    pub b: BigInt,
}

pub fn two_squares(p: &BigInt) -> Result<TwoSquares, NumberTheoryError> {
    check_prime_residue(p, 1, 4)?;
    let p_minus_1 = p - 1u32;
    let half = &p_minus_1 >> 1;
    let quarter = &p_minus_1 >> 2;
    let mut c = BigInt::from(2);
    let root = loop {
        if c.modpow(&half, p) == p_minus_1 {
            break c.modpow(&quarter, p);
        }
        c += 1u32;
    };
    let x = descend(p, root);
    let y = perfect_square_root(&(p - &x * &x)).expect("descent yields a two-square representation");
    let (a, b) = if x.is_odd() { (x, y) } else { (y, x) };
    debug_assert_eq!(&a * &a + &b * &b, *p);
    Ok(TwoSquares { a, b })
}

/// `p = a² + 2b²` with `a, b` odd and positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePlusTwoSquares {
    pub a: BigInt,
    pub b: BigInt,
}

pub fn one_plus_two_squares(p: &BigInt) -> Result<OnePlusTwoSquares, NumberTheoryError> {
    check_prime_residue(p, 3, 8)?;
    // p ≡ 3 (mod 4), so a square root of the residue −2 is (−2)^((p+1)/4).
    let root = (p - 2u32).modpow(&((p + 1u32) >> 2), p);
    let a = descend(p, root);
    let rest = p - &a * &a;
    let b = perfect_square_root(&(&rest / 2u32))
        .filter(|_| rest.is_even())
        .expect("Cornacchia descent yields a² + 2b²");
    debug_assert!(a.is_odd() && b.is_odd());
    Ok(OnePlusTwoSquares { a, b })
}

/// Class of a prime `p ≡ 1 (mod 8)` by `a ± b (mod 8)` for `p = a² + b²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mod8Class {
    /// `a ± b ≡ ±1 (mod 8)`.
    Pm1,
    /// `a ± b ≡ ±3 (mod 8)`.
    Pm3,
}

pub fn mod8_class_of(rep: &TwoSquares) -> Mod8Class {
    match (&rep.a + &rep.b).mod_floor(&BigInt::from(8)).to_u8() {
        Some(3 | 5) => Mod8Class::Pm3,
        _ => Mod8Class::Pm1,
    }
}

pub fn mod8_class(p: &BigInt) -> Result<Mod8Class, NumberTheoryError> {
    check_prime_residue(p, 1, 8)?;
    Ok(mod8_class_of(&two_squares(p)?))
}
