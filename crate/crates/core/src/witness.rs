//! Explicit coefficient vectors for members of the order-16 value set.
//!
//! A witness is described by a [`WitnessPlan`]: a tree of parametric
//! families joined by cyclic convolution, which multiplies determinants.
//! Every public constructor checks the Bareiss determinant of its output
//! before returning it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::circulant::{cyclic_convolve, det_bareiss, CoeffVector};
use crate::classifier::{MembershipVerdict, Reason};
use crate::error::{CoreError, NumberTheoryError, WitnessError};
use crate::number_theory::{is_prime, mod8_class, one_plus_two_squares, two_squares, Mod8Class};

pub const ORDER: usize = 16;

/// A vector with determinant exactly 128: the first hit, in enumeration
/// order, of a search over entries in `[-2, 2]` (index 63 089 836 of the box).
pub const BASE128: [i64; ORDER] = [-1, 0, 1, 1, 1, 1, 0, 0, -1, 0, -1, -1, -2, -2, -2, -2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanNode {
    /// The zero vector.
    Zero,
    /// `a_j = [j < r] + c` with `r` odd in `1..=15`; determinant `r + 16c`.
    OddFamily { r: u8, c: BigInt },
    /// `a₀ = c − 1`, `a₁ = c + 1`, `a_j = c` otherwise; determinant `−256c`.
    Mult256Family { c: BigInt },
    /// The embedded determinant-128 vector.
    Base128Constant,
    /// Determinant `32((8k+3)² + (8l+1)²)`.
    SumOfSquaresFamily { k: BigInt, l: BigInt },
    /// Determinant `64((4k−1)² + 2(4l−1)²)²`.
    SquaredFormFamily { k: BigInt, l: BigInt },
    /// Determinant `32X² + 32Y²`, see [`twin_brace_value`].
    TwinBraceFamily { k: BigInt, l: BigInt, m: BigInt, n: BigInt },
    Convolve(Box<WitnessPlan>, Box<WitnessPlan>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPlan {
    pub node: PlanNode,
    pub claimed_value: BigInt,
}

impl WitnessPlan {
    pub fn zero() -> Self {
        Self { node: PlanNode::Zero, claimed_value: BigInt::zero() }
    }

    pub fn odd(m: &BigInt) -> Result<Self, WitnessError> {
        if m.is_even() {
            return Err(WitnessError::NotOdd(m.clone()));
        }
        let r = m.mod_floor(&BigInt::from(ORDER));
        let c = (m - &r) / ORDER;
        let r = r.to_u8().expect("residue below 16");
        Ok(Self { node: PlanNode::OddFamily { r, c }, claimed_value: m.clone() })
    }

    pub fn mult256(k: &BigInt) -> Self {
        Self { node: PlanNode::Mult256Family { c: -k }, claimed_value: k * 256 }
    }

    pub fn base128() -> Self {
        Self { node: PlanNode::Base128Constant, claimed_value: BigInt::from(128) }
    }

    pub fn sum_of_squares(k: BigInt, l: BigInt) -> Self {
        let claimed_value = sum_of_squares_value(&k, &l);
        Self { node: PlanNode::SumOfSquaresFamily { k, l }, claimed_value }
    }

    pub fn squared_form(k: BigInt, l: BigInt) -> Self {
        let claimed_value = squared_form_value(&k, &l);
        Self { node: PlanNode::SquaredFormFamily { k, l }, claimed_value }
    }

    pub fn twin_brace(k: BigInt, l: BigInt, m: BigInt, n: BigInt) -> Self {
        let claimed_value = twin_brace_value(&k, &l, &m, &n);
        Self { node: PlanNode::TwinBraceFamily { k, l, m, n }, claimed_value }
    }

    pub fn convolve(left: WitnessPlan, right: WitnessPlan) -> Self {
        let claimed_value = &left.claimed_value * &right.claimed_value;
        Self { node: PlanNode::Convolve(Box::new(left), Box::new(right)), claimed_value }
    }

    /// The value each node's own formula gives, recomputed bottom-up. Equal
    /// to `claimed_value` for every plan built by this module.
    pub fn formula_value(&self) -> BigInt {
        match &self.node {
            PlanNode::Zero => BigInt::zero(),
            PlanNode::OddFamily { r, c } => BigInt::from(*r) + c * ORDER,
            PlanNode::Mult256Family { c } => -(c * BigInt::from(256)),
            PlanNode::Base128Constant => BigInt::from(128),
            PlanNode::SumOfSquaresFamily { k, l } => sum_of_squares_value(k, l),
            PlanNode::SquaredFormFamily { k, l } => squared_form_value(k, l),
            PlanNode::TwinBraceFamily { k, l, m, n } => twin_brace_value(k, l, m, n),
            PlanNode::Convolve(a, b) => a.formula_value() * b.formula_value(),
        }
    }

    /// Claimed values are consistent: every node's formula matches its claim
    /// and convolutions claim the product of their children.
    pub fn is_consistent(&self) -> bool {
        if self.formula_value() != self.claimed_value {
            return false;
        }
        match &self.node {
            PlanNode::OddFamily { r, .. } => r % 2 == 1 && *r < ORDER as u8,
            PlanNode::Convolve(a, b) => a.is_consistent() && b.is_consistent(),
            _ => true,
        }
    }

    pub fn realize(&self) -> CoeffVector {
        self.realize_with(&CoeffVector::from_i64s(&BASE128))
    }

    /// [`Self::realize`] with a caller-supplied determinant-128 vector.
    pub fn realize_with(&self, base128: &CoeffVector) -> CoeffVector {
        match &self.node {
            PlanNode::Zero => CoeffVector::zeros(ORDER),
            PlanNode::OddFamily { r, c } => odd_family_vector(*r, c),
            PlanNode::Mult256Family { c } => mult256_vector(c),
            PlanNode::Base128Constant => base128.clone(),
            PlanNode::SumOfSquaresFamily { k, l } => sum_of_squares_vector(k, l),
            PlanNode::SquaredFormFamily { k, l } => squared_form_vector(k, l),
            PlanNode::TwinBraceFamily { k, l, m, n } => twin_brace_vector(k, l, m, n),
            PlanNode::Convolve(a, b) => cyclic_convolve(&a.realize_with(base128), &b.realize_with(base128))
                .expect("realized plans have order 16"),
        }
    }

    /// Realizes the plan and checks the determinant against the claim.
    pub fn verify(&self) -> Result<CoeffVector, WitnessError> {
        let v = self.realize();
        check(&v, &self.claimed_value)?;
        Ok(v)
    }
}

impl fmt::Display for WitnessPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            PlanNode::Zero => write!(f, "zero"),
            PlanNode::OddFamily { r, c } => write!(f, "odd(r={r}, c={c})"),
            PlanNode::Mult256Family { c } => write!(f, "mult256(c={c})"),
            PlanNode::Base128Constant => write!(f, "base128"),
            PlanNode::SumOfSquaresFamily { k, l } => write!(f, "sum_of_squares(k={k}, l={l})"),
            PlanNode::SquaredFormFamily { k, l } => write!(f, "squared_form(k={k}, l={l})"),
            PlanNode::TwinBraceFamily { k, l, m, n } => write!(f, "twin_brace(k={k}, l={l}, m={m}, n={n})"),
            PlanNode::Convolve(a, b) => write!(f, "convolve({a}, {b})"),
        }
    }
}

fn check(v: &CoeffVector, expected: &BigInt) -> Result<(), WitnessError> {
    let actual = det_bareiss(v);
    if &actual != expected {
        return Err(WitnessError::VerificationFailed { expected: expected.clone(), actual });
    }
    Ok(())
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn odd_family_vector(r: u8, c: &BigInt) -> CoeffVector {
    let entries = (0..ORDER).map(|j| c + u8::from(j < usize::from(r))).collect();
    CoeffVector::new(entries).expect("non-empty")
}

fn mult256_vector(c: &BigInt) -> CoeffVector {
    let mut entries = vec![c.clone(); ORDER];
    entries[0] = c - 1;
    entries[1] = c + 1;
    CoeffVector::new(entries).expect("non-empty")
}

pub fn sum_of_squares_value(k: &BigInt, l: &BigInt) -> BigInt {
    let x: BigInt = k * 8 + 3;
    let y: BigInt = l * 8 + 1;
    (&x * &x + &y * &y) * 32
}

pub fn squared_form_value(k: &BigInt, l: &BigInt) -> BigInt {
    let x: BigInt = k * 4 - 1;
    let y: BigInt = l * 4 - 1;
    let q = &x * &x + &y * &y * 2;
    &q * &q * 64
}

/// `32X² + 32Y²` with `X = (4k−1)² − (4m−2)² + 8n(2l−1)` and
/// `Y = (2l−1)² − (4n)² − 2(4k−1)(4m−2)`.
pub fn twin_brace_value(k: &BigInt, l: &BigInt, m: &BigInt, n: &BigInt) -> BigInt {
    let (x, y) = twin_brace_braces(k, l, m, n);
    (&x * &x + &y * &y) * 32
}

fn twin_brace_braces(k: &BigInt, l: &BigInt, m: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
    let p: BigInt = k * 4 - 1;
    let q: BigInt = m * 4 - 2;
    let s: BigInt = l * 2 - 1;
    let t: BigInt = n * 4;
    let x = &p * &p - &q * &q + &s * n * 8;
    let y = &s * &s - &t * &t - &p * &q * 2;
    (x, y)
}

fn sum_of_squares_vector(k: &BigInt, l: &BigInt) -> CoeffVector {
    let (k1, l1): (BigInt, BigInt) = (-k - 1, -l - 1);
    let entries = vec![
        k.clone(), l.clone(), -k, -l,
        k.clone(), l.clone(), k1.clone(), -l,
        k.clone(), l.clone(), k1.clone(), -l,
        k.clone(), l.clone(), k1, l1,
    ];
    CoeffVector::new(entries).expect("non-empty")
}

fn squared_form_vector(k: &BigInt, l: &BigInt) -> CoeffVector {
    let one = BigInt::one();
    let entries = vec![
        k + l, k - l, &one - l, &one - l,
        &one - k - l, l - k, l.clone(), l.clone(),
        k + l, k - l, -l, -l,
        &one - k - l, l - k, l.clone(), l.clone(),
    ];
    CoeffVector::new(entries).expect("non-empty")
}

fn twin_brace_vector(k: &BigInt, l: &BigInt, m: &BigInt, n: &BigInt) -> CoeffVector {
    let one = BigInt::one();
    let lh = l.div_floor(&big(2));
    let sign = if l.is_even() { big(1) } else { big(-1) };
    let entries = vec![
        k.clone(), lh.clone(), m.clone(), n.clone(),
        -k, -&lh, &one - m, -n,
        k.clone(), lh.clone(), m.clone(), n.clone(),
        &one - k, sign - &lh, &one - m, -n,
    ];
    CoeffVector::new(entries).expect("non-empty")
}

fn verified(plan: &WitnessPlan) -> Result<CoeffVector, WitnessError> {
    plan.verify()
}

/// Vector with determinant `m`, for odd `m`.
pub fn odd_witness(m: &BigInt) -> Result<CoeffVector, WitnessError> {
    verified(&WitnessPlan::odd(m)?)
}

/// Vector with determinant `256k`.
pub fn mult256_witness(k: &BigInt) -> Result<CoeffVector, WitnessError> {
    verified(&WitnessPlan::mult256(k))
}

/// The embedded vector with determinant 128.
pub fn base128_witness() -> CoeffVector {
    CoeffVector::from_i64s(&BASE128)
}

pub fn sum_of_squares_family(k: &BigInt, l: &BigInt) -> Result<CoeffVector, WitnessError> {
    verified(&WitnessPlan::sum_of_squares(k.clone(), l.clone()))
}

pub fn squared_form_family(k: &BigInt, l: &BigInt) -> Result<CoeffVector, WitnessError> {
    verified(&WitnessPlan::squared_form(k.clone(), l.clone()))
}

pub fn twin_brace_family(k: &BigInt, l: &BigInt, m: &BigInt, n: &BigInt) -> Result<CoeffVector, WitnessError> {
    verified(&WitnessPlan::twin_brace(k.clone(), l.clone(), m.clone(), n.clone()))
}

fn require_prime_residue(p: &BigInt, residue: u32) -> Result<(), WitnessError> {
    if !p.is_positive() || p.mod_floor(&big(8)) != BigInt::from(residue) || !is_prime(p) {
        return Err(NumberTheoryError::InvalidResidue { value: p.clone(), residue, modulus: 8 }.into());
    }
    Ok(())
}

/// Plan with value `64p` for a prime `p ≡ 5 (mod 8)`.
pub fn witness_64p_5mod8(p: &BigInt) -> Result<WitnessPlan, WitnessError> {
    require_prime_residue(p, 5)?;
    let rep = two_squares(p)?;
    let (mut a, b) = (rep.a, rep.b);
    // p ≡ 5 (mod 8) forces the even part to be 2 mod 4
    if b.mod_floor(&big(4)) != big(2) {
        return Err(CoreError::InternalInvariantViolation(format!("{p} = {a}² + {b}² with {b} ≢ 2 (mod 4)")).into());
    }
    if a.mod_floor(&big(4)) == big(3) {
        a = -a;
    }
    let mut r: BigInt = (b - 2) / 4;
    let s: BigInt = (a - 1) / 4;
    if r.is_odd() != s.is_odd() {
        r = -r - 1;
    }
    let k = (&r + &s) / 2;
    let l = (&r - &s) / 2;
    let plan = WitnessPlan::sum_of_squares(k, l);
    debug_assert_eq!(plan.claimed_value, p * 64);
    plan.verify()?;
    Ok(plan)
}

/// Plan with value `64p²` for a prime `p ≡ 3 (mod 8)`.
pub fn witness_64p2_3mod8(p: &BigInt) -> Result<WitnessPlan, WitnessError> {
    require_prime_residue(p, 3)?;
    let rep = one_plus_two_squares(p)?;
    let toward_3 = |x: BigInt| if x.mod_floor(&big(4)) == big(3) { x } else { -x };
    let (a, b) = (toward_3(rep.a), toward_3(rep.b));
    let plan = WitnessPlan::squared_form((a + 1) / 4, (b + 1) / 4);
    debug_assert_eq!(plan.claimed_value, p * p * 64);
    plan.verify()?;
    Ok(plan)
}

/// `v = (r, s, t, u)`, standing for `h(x) = r + sx + tx² + ux³` whose norm
/// down from the eighth cyclotomic field is [`QuadTuple::norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadTuple {
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub u: i64,
}

impl QuadTuple {
    pub fn new(r: i64, s: i64, t: i64, u: i64) -> Self {
        Self { r, s, t, u }
    }

    /// `(r² − t² + 2su, s² − u² − 2rt)`.
    pub fn parts(&self) -> (i128, i128) {
        let (r, s, t, u) = (self.r as i128, self.s as i128, self.t as i128, self.u as i128);
        (r * r - t * t + 2 * s * u, s * s - u * u - 2 * r * t)
    }

    pub fn norm(&self) -> i128 {
        let (x, y) = self.parts();
        x * x + y * y
    }

    /// `r + t ≢ s + u (mod 2)`.
    pub fn has_mixed_parity(&self) -> bool {
        (self.r + self.t - self.s - self.u).rem_euclid(2) == 1
    }

    pub fn max_abs(&self) -> i64 {
        self.r.abs().max(self.s.abs()).max(self.t.abs()).max(self.u.abs())
    }

    /// `(r − u, r + s, t + s, t + u)`.
    pub fn brace_coords(&self) -> [i64; 4] {
        [self.r - self.u, self.r + self.s, self.t + self.s, self.t + self.u]
    }
}

/// A tuple moved so that `r` alone has odd-one-out parity and
/// `(t + s, t + u) ≡ (2, 0) (mod 4)`, with its brace coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedQuad {
    pub v: QuadTuple,
    pub c: [i64; 4],
}

impl NormalizedQuad {
    /// `(k, l, m, n)` for the twin-brace family.
    pub fn family_params(&self) -> [i64; 4] {
        let [c0, c1, c2, c3] = self.c;
        let (k, m) = if c0.rem_euclid(4) == 1 { ((1 - c0) / 4, (2 - c2) / 4) } else { ((c0 + 1) / 4, (c2 + 2) / 4) };
        [k, (c1 + 1) / 2, m, c3 / 4]
    }
}

/// Moves a mixed-parity tuple into normal position. `None` when the final
/// congruences on the brace coordinates fail.
pub fn normalize_quadruple(q: QuadTuple) -> Option<NormalizedQuad> {
    if !q.has_mixed_parity() {
        return None;
    }
    let QuadTuple { r, s, t, u } = q;
    let par = [r, s, t, u].map(|x| x.rem_euclid(2));
    // exactly one coordinate disagrees with the other three
    let odd_one = (0..4).find(|&i| (0..4).filter(|&j| par[j] == par[i]).count() == 1)?;
    let mut v = match odd_one {
        0 => q,
        1 => QuadTuple::new(s, t, u, -r),
        2 => QuadTuple::new(t, u, -r, -s),
        _ => QuadTuple::new(u, r, -s, t),
    };
    if ((v.t + v.s).rem_euclid(4), (v.t + v.u).rem_euclid(4)) != (2, 0) {
        v = QuadTuple::new(-v.r, v.u, v.t, v.s);
    }
    let c = v.brace_coords();
    let ok = c[0].rem_euclid(2) == 1 && c[1].rem_euclid(2) == 1 && c[2].rem_euclid(4) == 2 && c[3].rem_euclid(4) == 0;
    ok.then_some(NormalizedQuad { v, c })
}

/// All `(A, B)` with `A² + B² = p`, for a prime `p ≡ 1 (mod 4)`.
fn norm_targets(p: &BigInt) -> Result<Vec<(i128, i128)>, WitnessError> {
    let rep = two_squares(p)?;
    let a = rep.a.to_i128().expect("fits");
    let b = rep.b.to_i128().expect("fits");
    let mut out = Vec::with_capacity(8);
    for (x, y) in [(a, b), (b, a)] {
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.push((sx * x, sy * y));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Mixed-parity tuples of norm `p` whose first three coordinates are `(r, s, t)`
/// and with `|u| ≤ bound`, in increasing `u`.
fn completions(r: i64, s: i64, t: i64, bound: i64, targets: &[(i128, i128)]) -> Vec<QuadTuple> {
    let (r2, s2, t2) = (r as i128, s as i128, t as i128);
    let mut us = Vec::new();
    for &(a, b) in targets {
        if s != 0 {
            // r² − t² + 2su = A fixes u; then check the second part
            let num = a - r2 * r2 + t2 * t2;
            let den = 2 * s2;
            if num % den == 0 {
                us.push(num / den);
            }
        } else if r2 * r2 - t2 * t2 == a {
            // s = 0: −u² − 2rt = B
            let w = -b - 2 * r2 * t2;
            if w >= 0 {
                let root = w.sqrt();
                if root * root == w {
                    us.push(root);
                    us.push(-root);
                }
            }
        }
    }
    us.sort_unstable();
    us.dedup();
    us.into_iter()
        .filter(|u| u.abs() <= bound as i128)
        .map(|u| QuadTuple::new(r, s, t, u as i64))
        .filter(|q| targets.contains(&q.parts()) && q.has_mixed_parity())
        .collect()
}

/// First mixed-parity tuple of norm `p` ordered by `max |coord|`, then
/// lexicographically, among levels `from..=to`.
fn search_levels(targets: &[(i128, i128)], from: i64, to: i64) -> Option<QuadTuple> {
    for level in from..=to {
        for r in -level..=level {
            for s in -level..=level {
                for t in -level..=level {
                    let found = completions(r, s, t, level, targets).into_iter().find(|q| q.max_abs() == level);
                    if found.is_some() {
                        return found;
                    }
                }
            }
        }
    }
    None
}

fn quad_prime(p: &BigInt) -> Result<(), WitnessError> {
    // tuple coordinates are near p^(1/4); keep the i128 arithmetic exact
    if p.bits() > 62 {
        return Err(WitnessError::SearchExhausted { prime: p.clone(), bound: 0 });
    }
    Ok(())
}

/// First mixed-parity tuple of norm `p` with all coordinates in `[-bound, bound]`.
pub fn find_quadruple(p: &BigInt, bound: i64) -> Result<Option<QuadTuple>, WitnessError> {
    quad_prime(p)?;
    let targets = norm_targets(p)?;
    Ok(search_levels(&targets, 0, bound))
}

/// Every mixed-parity tuple of norm `p` with coordinates in `[-bound, bound]`,
/// in search order.
pub fn all_quadruples(p: &BigInt, bound: i64) -> Result<Vec<QuadTuple>, WitnessError> {
    quad_prime(p)?;
    let targets = norm_targets(p)?;
    let mut out = Vec::new();
    for level in 0..=bound {
        for r in -level..=level {
            for s in -level..=level {
                for t in -level..=level {
                    out.extend(completions(r, s, t, level, &targets).into_iter().filter(|q| q.max_abs() == level));
                }
            }
        }
    }
    Ok(out)
}

/// `⌈√p⌉`, the default tuple search bound.
pub fn quad_bound(p: &BigInt) -> i64 {
    let root = p.sqrt();
    let ceil = if &root * &root == *p { root } else { root + 1 };
    ceil.to_i64().unwrap_or(i64::MAX)
}

/// Plan with value `64p` for a prime `p ≡ 1 (mod 8)` of class PM3.
pub fn witness_64p_1mod8(p: &BigInt) -> Result<WitnessPlan, WitnessError> {
    require_prime_residue(p, 1)?;
    if mod8_class(p)? == Mod8Class::Pm1 {
        return Err(WitnessError::NotClassPm3(p.clone()));
    }
    quad_prime(p)?;
    let targets = norm_targets(p)?;
    let bound = quad_bound(p);
    let q = match search_levels(&targets, 0, bound) {
        Some(q) => q,
        None => {
            log::warn!("no tuple of norm {p} within {bound}; doubling the bound");
            search_levels(&targets, bound + 1, 2 * bound)
                .ok_or(WitnessError::SearchExhausted { prime: p.clone(), bound: 2 * bound })?
        }
    };
    let nq = normalize_quadruple(q).ok_or_else(|| {
        CoreError::InternalInvariantViolation(format!("tuple {q:?} of norm {p} does not normalize"))
    })?;
    let [k, l, m, n] = nq.family_params().map(BigInt::from);
    let plan = WitnessPlan::twin_brace(k, l, m, n);
    if plan.claimed_value != p * 64 {
        return Err(CoreError::InternalInvariantViolation(format!(
            "twin-brace parameters from {q:?} give {} instead of 64·{p}",
            plan.claimed_value
        ))
        .into());
    }
    plan.verify()?;
    Ok(plan)
}

/// A plan together with its realized and verified vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub plan: WitnessPlan,
    pub vector: CoeffVector,
}

/// Plan for a member verdict, not yet realized.
pub fn plan_for(verdict: &MembershipVerdict) -> Result<WitnessPlan, WitnessError> {
    let v = &verdict.value;
    if !verdict.member {
        return Err(WitnessError::NotMember(v.clone()));
    }
    let with_cofactor = |prime_plan: WitnessPlan| -> Result<WitnessPlan, WitnessError> {
        let cof = v / &prime_plan.claimed_value;
        if &(&cof * &prime_plan.claimed_value) != v {
            return Err(CoreError::InternalInvariantViolation(format!("{} does not divide {v}", prime_plan.claimed_value)).into());
        }
        if cof.is_one() {
            Ok(prime_plan)
        } else {
            Ok(WitnessPlan::convolve(prime_plan, WitnessPlan::odd(&cof)?))
        }
    };
    match &verdict.reason {
        Reason::Odd => WitnessPlan::odd(v),
        Reason::DivisibleBy128 if v.is_zero() => Ok(WitnessPlan::zero()),
        Reason::DivisibleBy128 => {
            let (q, rem) = v.div_rem(&big(256));
            if rem.is_zero() {
                Ok(WitnessPlan::mult256(&q))
            } else {
                Ok(WitnessPlan::convolve(WitnessPlan::base128(), WitnessPlan::odd(&(v / 128))?))
            }
        }
        Reason::Prime5Mod8(p) => with_cofactor(witness_64p_5mod8(p)?),
        Reason::Prime3Mod8Squared(p) => with_cofactor(witness_64p2_3mod8(p)?),
        Reason::Prime1Mod8ClassPm3(p) => with_cofactor(witness_64p_1mod8(p)?),
        Reason::EvenNotDivisibleBy64 | Reason::Obstructed(_) => Err(WitnessError::NotMember(v.clone())),
    }
}

/// Witness for a member verdict; the determinant is re-checked against the
/// verdict's value.
pub fn build_witness(verdict: &MembershipVerdict) -> Result<Witness, WitnessError> {
    let plan = plan_for(verdict)?;
    if plan.claimed_value != verdict.value {
        return Err(CoreError::InternalInvariantViolation(format!(
            "plan claims {} for {}",
            plan.claimed_value, verdict.value
        ))
        .into());
    }
    let vector = plan.verify()?;
    Ok(Witness { plan, vector })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::number_theory::FactorConfig;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn det(v: &CoeffVector) -> BigInt {
        det_bareiss(v)
    }

    fn witness(v: i64) -> Witness {
        let verdict = classify(&b(v), &FactorConfig::default()).unwrap();
        build_witness(&verdict).unwrap()
    }

    #[test]
    fn odd_family_examples() {
        assert_eq!(odd_witness(&b(1)).unwrap(), CoeffVector::unit(16));
        let three = odd_witness(&b(3)).unwrap();
        assert_eq!(three, CoeffVector::from_i64s(&[1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
        let mut minus_one = [0; 16];
        minus_one[15] = -1;
        assert_eq!(odd_witness(&b(-1)).unwrap(), CoeffVector::from_i64s(&minus_one));
        assert_eq!(
            odd_witness(&b(35)).unwrap(),
            CoeffVector::from_i64s(&[3, 3, 3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2])
        );
        assert_eq!(odd_witness(&b(4)), Err(WitnessError::NotOdd(b(4))));
    }

    #[test]
    fn odd_family_range() {
        for m in (-999..=999).step_by(2) {
            assert_eq!(det(&odd_witness(&b(m)).unwrap()), b(m));
        }
    }

    #[test]
    fn mult256_examples() {
        assert_eq!(det(&mult256_witness(&b(0)).unwrap()), b(0));
        let one = mult256_witness(&b(1)).unwrap();
        assert_eq!(one, CoeffVector::from_i64s(&[-2, 0, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]));
        assert_eq!(det(&mult256_witness(&b(-3)).unwrap()), b(-768));
    }

    #[test]
    fn base128_constant() {
        let v = base128_witness();
        assert_eq!(det(&v), b(128));
        assert!(BASE128.iter().all(|x| (-2..=2).contains(x)));
        let c3 = cyclic_convolve(&v, &odd_witness(&b(3)).unwrap()).unwrap();
        assert_eq!(det(&c3), b(384));
        let cm1 = cyclic_convolve(&v, &odd_witness(&b(-1)).unwrap()).unwrap();
        assert_eq!(det(&cm1), b(-128));
    }

    #[test]
    fn family_examples() {
        assert_eq!(det(&sum_of_squares_family(&b(0), &b(0)).unwrap()), b(320));
        assert_eq!(det(&sum_of_squares_family(&b(-1), &b(0)).unwrap()), b(832));
        assert_eq!(det(&sum_of_squares_family(&b(0), &b(-1)).unwrap()), b(1856));
        assert_eq!(det(&squared_form_family(&b(0), &b(0)).unwrap()), b(576));
        assert_eq!(det(&squared_form_family(&b(1), &b(1)).unwrap()), b(46656));
        assert_eq!(det(&squared_form_family(&b(0), &b(1)).unwrap()), b(64 * 361));
        assert_eq!(det(&twin_brace_family(&b(0), &b(0), &b(0), &b(0)).unwrap()), b(576));
        assert_eq!(twin_brace_value(&b(0), &b(1), &b(0), &b(0)), b(576));
        assert_eq!(det(&twin_brace_family(&b(0), &b(1), &b(0), &b(0)).unwrap()), b(576));
    }

    #[test]
    fn family_formulas_on_grids() {
        for k in -4..=4 {
            for l in -4..=4 {
                assert_eq!(det(&sum_of_squares_vector(&b(k), &b(l))), sum_of_squares_value(&b(k), &b(l)));
            }
        }
        for k in -3..=3 {
            for l in -3..=3 {
                assert_eq!(det(&squared_form_vector(&b(k), &b(l))), squared_form_value(&b(k), &b(l)));
                for m in -3..=3 {
                    for n in -3..=3 {
                        let (k, l, m, n) = (b(k), b(l), b(m), b(n));
                        assert_eq!(det(&twin_brace_vector(&k, &l, &m, &n)), twin_brace_value(&k, &l, &m, &n));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_witnesses() {
        let p5 = witness_64p_5mod8(&b(5)).unwrap();
        assert_eq!(p5.node, PlanNode::SumOfSquaresFamily { k: b(0), l: b(0) });
        for (p, v) in [(13, 832), (29, 1856)] {
            assert_eq!(det(&witness_64p_5mod8(&b(p)).unwrap().realize()), b(v));
        }
        let p3 = witness_64p2_3mod8(&b(3)).unwrap();
        assert_eq!(p3.node, PlanNode::SquaredFormFamily { k: b(0), l: b(0) });
        for (p, v) in [(11, 7744), (19, 64 * 361)] {
            assert_eq!(det(&witness_64p2_3mod8(&b(p)).unwrap().realize()), b(v));
        }
        for (p, v) in [(17, 1088), (73, 4672), (97, 6208)] {
            assert_eq!(det(&witness_64p_1mod8(&b(p)).unwrap().realize()), b(v));
        }
        assert!(find_quadruple(&b(17), 5).unwrap().is_some());
    }

    #[test]
    fn prime_witness_errors() {
        assert!(matches!(witness_64p_5mod8(&b(13 * 5)), Err(WitnessError::NumberTheory(_))));
        assert!(matches!(witness_64p2_3mod8(&b(5)), Err(WitnessError::NumberTheory(_))));
        // 41 = 5² + 4², 5 + 4 = 9 ≡ 1 (mod 8)
        assert_eq!(witness_64p_1mod8(&b(41)), Err(WitnessError::NotClassPm3(b(41))));
    }

    #[test]
    fn quadruple_search_is_first_in_order() {
        let p = b(73);
        let first = find_quadruple(&p, quad_bound(&p)).unwrap().unwrap();
        let all = all_quadruples(&p, 4).unwrap();
        assert_eq!(all[0], first);
        // brute force over the smallest level that holds a hit
        let level = first.max_abs();
        let mut brute = Vec::new();
        for r in -level..=level {
            for s in -level..=level {
                for t in -level..=level {
                    for u in -level..=level {
                        let q = QuadTuple::new(r, s, t, u);
                        if q.norm() == 73 && q.has_mixed_parity() {
                            brute.push(q);
                        }
                    }
                }
            }
        }
        brute.sort_by_key(|q| (q.max_abs(), *q));
        assert_eq!(brute[0], first);
    }

    #[test]
    fn routing_examples() {
        assert_eq!(det(&witness(35).vector), b(35));
        let w = witness(-384);
        assert_eq!(w.plan, WitnessPlan::convolve(WitnessPlan::base128(), WitnessPlan::odd(&b(-3)).unwrap()));
        let w = witness(2880);
        assert_eq!(w.plan, WitnessPlan::convolve(witness_64p_5mod8(&b(5)).unwrap(), WitnessPlan::odd(&b(9)).unwrap()));
        assert_eq!(witness(512).plan, WitnessPlan::mult256(&b(2)));
        assert_eq!(witness(0).vector, CoeffVector::zeros(16));
        assert_eq!(witness(-320).plan, WitnessPlan::convolve(witness_64p_5mod8(&b(5)).unwrap(), WitnessPlan::odd(&b(-1)).unwrap()));
        for v in [64 * 9, 64 * 17, -64 * 17 * 3, 64 * 49 * 5] {
            let w = witness(v);
            assert_eq!(det(&w.vector), b(v));
            assert!(w.plan.is_consistent());
        }
    }

    #[test]
    fn non_members_are_refused() {
        for v in [2, 64, 192, 448, 7232] {
            let verdict = classify(&b(v), &FactorConfig::default()).unwrap();
            assert_eq!(build_witness(&verdict), Err(WitnessError::NotMember(b(v))));
        }
    }

    #[test]
    fn convolution_with_families() {
        let u = sum_of_squares_family(&b(0), &b(0)).unwrap();
        let w = cyclic_convolve(&u, &odd_witness(&b(-1)).unwrap()).unwrap();
        assert_eq!(det(&w), b(-320));
        let w = cyclic_convolve(&odd_witness(&b(3)).unwrap(), &odd_witness(&b(5)).unwrap()).unwrap();
        assert_eq!(det(&w), b(15));
    }

    #[test]
    fn tampered_plan_fails_verification() {
        let mut plan = WitnessPlan::odd(&b(7)).unwrap();
        plan.claimed_value = b(9);
        assert!(!plan.is_consistent());
        assert!(matches!(plan.verify(), Err(WitnessError::VerificationFailed { .. })));
    }

    proptest! {
        #[test]
        fn odd_plans_are_consistent(m in -10_000i64..10_000) {
            let m = 2 * m + 1;
            let plan = WitnessPlan::odd(&b(m)).unwrap();
            prop_assert!(plan.is_consistent());
            prop_assert_eq!(det(&plan.realize()), b(m));
        }
    }
}
