//! Membership of an integer in the set of order-16 integer circulant
//! determinants.
//!
//! The set is
//!
//! ```text
//! ℤ_odd ∪ 128ℤ ∪ {64pm : p ≡ 5 (mod 8)} ∪ {64p²m : p ≡ 3 (mod 8)}
//!       ∪ {64pm : p ≡ 1 (mod 8) of class PM3}
//! ```
//!
//! with `p` prime and `m ∈ ℤ`. Everything else is either an even number not
//! divisible by 64, or `64k` with `k` odd built only from PM1 primes, primes
//! `≡ 7 (mod 8)`, and distinct primes `≡ 3 (mod 8)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::ClassifyError;
use crate::number_theory::{factorize, is_prime, mod8_class, two_squares, FactorConfig, Mod8Class};

/// Residue role of a prime in an obstructed `64k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObstructedKind {
    /// `p ≡ 1 (mod 8)` of class PM1, any exponent.
    OneMod8Pm1,
    /// `p ≡ 7 (mod 8)`, any exponent.
    SevenMod8,
    /// `p ≡ 3 (mod 8)`, exponent exactly one.
    ThreeMod8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructedFactor {
    pub prime: BigInt,
    pub exponent: u32,
    pub kind: ObstructedKind,
}

/// `value / 64 = sign · ∏ prime^exponent`, every factor of an obstructed kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub sign: i8,
    pub factors: Vec<ObstructedFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Odd,
    DivisibleBy128,
    Prime5Mod8(BigInt),
    Prime1Mod8ClassPm3(BigInt),
    Prime3Mod8Squared(BigInt),
    EvenNotDivisibleBy64,
    Obstructed(Obstruction),
}

impl Reason {
    pub fn kind(&self) -> &'static str {
        match self {
            Reason::Odd => "odd",
            Reason::DivisibleBy128 => "divisible_by_128",
            Reason::Prime5Mod8(_) => "prime_5_mod_8",
            Reason::Prime1Mod8ClassPm3(_) => "prime_1_mod_8_class_pm3",
            Reason::Prime3Mod8Squared(_) => "prime_3_mod_8_squared",
            Reason::EvenNotDivisibleBy64 => "even_not_divisible_by_64",
            Reason::Obstructed(_) => "obstructed_shape",
        }
    }

    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            Reason::Prime5Mod8(p) | Reason::Prime1Mod8ClassPm3(p) | Reason::Prime3Mod8Squared(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_member_reason(&self) -> bool {
        !matches!(self, Reason::EvenNotDivisibleBy64 | Reason::Obstructed(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub value: BigInt,
    pub member: bool,
    pub reason: Reason,
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.member { "member" } else { "non-member" };
        write!(f, "{}: {status} ({}", self.value, self.reason.kind())?;
        if let Some(p) = self.reason.prime() {
            write!(f, ", p = {p}")?;
        }
        write!(f, ")")
    }
}

fn residue(x: &BigInt, m: u32) -> u32 {
    x.mod_floor(&BigInt::from(m)).to_u32().expect("residue fits")
}

pub fn classify(v: &BigInt, cfg: &FactorConfig) -> Result<MembershipVerdict, ClassifyError> {
    let verdict = |member, reason| MembershipVerdict { value: v.clone(), member, reason };
    if v.is_odd() {
        return Ok(verdict(true, Reason::Odd));
    }
    if residue(v, 128) == 0 {
        return Ok(verdict(true, Reason::DivisibleBy128));
    }
    if residue(v, 64) != 0 {
        return Ok(verdict(false, Reason::EvenNotDivisibleBy64));
    }

    let k: BigInt = v / 64;
    let fac = factorize(&k, cfg).map_err(ClassifyError::IndeterminateFactorization)?;

    if let Some((p, _)) = fac.factors.iter().find(|(p, _)| residue(p, 8) == 5) {
        return Ok(verdict(true, Reason::Prime5Mod8(p.clone())));
    }
    if let Some((q, _)) = fac.factors.iter().find(|(q, e)| residue(q, 8) == 3 && *e >= 2) {
        return Ok(verdict(true, Reason::Prime3Mod8Squared(q.clone())));
    }
    let mut obstructed = Vec::with_capacity(fac.factors.len());
    for (p, e) in &fac.factors {
        let kind = match residue(p, 8) {
            1 => match mod8_class(p).map_err(ClassifyError::IndeterminateFactorization)? {
                Mod8Class::Pm3 => return Ok(verdict(true, Reason::Prime1Mod8ClassPm3(p.clone()))),
                Mod8Class::Pm1 => ObstructedKind::OneMod8Pm1,
            },
            7 => ObstructedKind::SevenMod8,
            3 => ObstructedKind::ThreeMod8,
            r => unreachable!("odd k has only odd prime factors, residue {r} handled above"),
        };
        obstructed.push(ObstructedFactor { prime: p.clone(), exponent: *e, kind });
    }
    Ok(verdict(false, Reason::Obstructed(Obstruction { sign: fac.sign, factors: obstructed })))
}

/// Re-checks the arithmetic claim behind a verdict from scratch. Returns a
/// description of the first failed claim.
pub fn verify_verdict(verdict: &MembershipVerdict) -> Result<(), String> {
    let v = &verdict.value;
    let fail = |msg: String| Err(format!("{v}: {msg}"));
    if verdict.member != verdict.reason.is_member_reason() {
        return fail("member flag disagrees with reason".into());
    }
    let divides = |d: &BigInt| !d.is_zero() && (v % d).is_zero();
    match &verdict.reason {
        Reason::Odd => {
            if !v.is_odd() {
                return fail("not odd".into());
            }
        }
        Reason::DivisibleBy128 => {
            if !divides(&BigInt::from(128)) {
                return fail("not divisible by 128".into());
            }
        }
        Reason::Prime5Mod8(p) => {
            if !is_prime(p) || residue(p, 8) != 5 || !divides(&(p * 64)) {
                return fail(format!("{p} is not a 5 mod 8 prime with 64p | value"));
            }
        }
        Reason::Prime3Mod8Squared(q) => {
            if !is_prime(q) || residue(q, 8) != 3 || !divides(&(q * q * 64)) {
                return fail(format!("{q} is not a 3 mod 8 prime with 64q² | value"));
            }
        }
        Reason::Prime1Mod8ClassPm3(p) => {
            if !is_prime(p) || residue(p, 8) != 1 || !divides(&(p * 64)) {
                return fail(format!("{p} is not a 1 mod 8 prime with 64p | value"));
            }
            let rep = two_squares(p).map_err(|e| e.to_string())?;
            if &rep.a * &rep.a + &rep.b * &rep.b != *p {
                return fail(format!("bad two-square representation of {p}"));
            }
            if !matches!(residue(&(&rep.a + &rep.b), 8), 3 | 5) || !matches!(residue(&(&rep.a - &rep.b), 8), 3 | 5) {
                return fail(format!("{p} is not of class PM3"));
            }
        }
        Reason::EvenNotDivisibleBy64 => {
            if v.is_odd() || residue(v, 64) == 0 {
                return fail("not an even non-multiple of 64".into());
            }
        }
        Reason::Obstructed(shape) => verify_obstruction(v, shape).or_else(fail)?,
    }
    Ok(())
}

fn verify_obstruction(v: &BigInt, shape: &Obstruction) -> Result<(), String> {
    if residue(v, 64) != 0 || residue(v, 128) == 0 {
        return Err("value is not 64 times an odd number".into());
    }
    let mut product = BigInt::from(shape.sign);
    if shape.sign.abs() != 1 {
        return Err("sign must be ±1".into());
    }
    for w in shape.factors.windows(2) {
        if w[0].prime >= w[1].prime {
            return Err("primes not strictly increasing".into());
        }
    }
    for f in &shape.factors {
        if f.exponent == 0 || !is_prime(&f.prime) {
            return Err(format!("{}^{} is not a prime power", f.prime, f.exponent));
        }
        let ok = match f.kind {
            ObstructedKind::OneMod8Pm1 => {
                residue(&f.prime, 8) == 1 && mod8_class(&f.prime) == Ok(Mod8Class::Pm1)
            }
            ObstructedKind::SevenMod8 => residue(&f.prime, 8) == 7,
            ObstructedKind::ThreeMod8 => residue(&f.prime, 8) == 3 && f.exponent == 1,
        };
        if !ok {
            return Err(format!("{} does not fit kind {:?}", f.prime, f.kind));
        }
        product *= num_traits::pow(f.prime.clone(), f.exponent as usize);
    }
    if product * 64 != *v {
        return Err("decomposition does not reproduce value / 64".into());
    }
    Ok(())
}

/// Convenience for callers that only need the boolean.
pub fn is_member(v: &BigInt, cfg: &FactorConfig) -> Result<bool, ClassifyError> {
    classify(v, cfg).map(|verdict| verdict.member)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: i64) -> MembershipVerdict {
        let verdict = classify(&BigInt::from(v), &FactorConfig::default()).unwrap();
        verify_verdict(&verdict).unwrap();
        verdict
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn examples() {
        assert_eq!(cls(320).reason, Reason::Prime5Mod8(big(5)));
        assert!(cls(320).member);
        let v = cls(64);
        assert!(!v.member);
        assert_eq!(v.reason, Reason::Obstructed(Obstruction { sign: 1, factors: vec![] }));
        let v = cls(192);
        assert!(!v.member);
        assert_eq!(
            v.reason,
            Reason::Obstructed(Obstruction {
                sign: 1,
                factors: vec![ObstructedFactor { prime: big(3), exponent: 1, kind: ObstructedKind::ThreeMod8 }]
            })
        );
        assert_eq!(cls(576).reason, Reason::Prime3Mod8Squared(big(3)));
        assert_eq!(cls(1088).reason, Reason::Prime1Mod8ClassPm3(big(17)));
        assert!(!cls(7232).member);
        assert_eq!(cls(-1).reason, Reason::Odd);
        assert_eq!(cls(0).reason, Reason::DivisibleBy128);
        assert_eq!(cls(96).reason, Reason::EvenNotDivisibleBy64);
    }

    #[test]
    fn negative_values_mirror_positive() {
        for v in [64i64, 192, 320, 576, 1088, 7232, 448] {
            let (pos, neg) = (cls(v), cls(-v));
            assert_eq!(pos.member, neg.member, "{v}");
            assert_eq!(pos.reason.kind(), neg.reason.kind());
        }
        match cls(-64 * 7).reason {
            Reason::Obstructed(o) => assert_eq!(o.sign, -1),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn priority_prefers_five_then_three_squared() {
        // 64 · 5 · 9 · 17: all three qualify
        assert_eq!(cls(64 * 5 * 9 * 17).reason, Reason::Prime5Mod8(big(5)));
        assert_eq!(cls(64 * 9 * 17).reason, Reason::Prime3Mod8Squared(big(3)));
        assert_eq!(cls(64 * 3 * 17).reason, Reason::Prime1Mod8ClassPm3(big(17)));
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut v = cls(320);
        v.reason = Reason::Prime5Mod8(big(13));
        assert!(verify_verdict(&v).is_err());
        let mut v = cls(7232);
        v.member = true;
        assert!(verify_verdict(&v).is_err());
        let mut v = cls(64 * 113);
        if let Reason::Obstructed(o) = &mut v.reason {
            o.factors[0].kind = ObstructedKind::SevenMod8;
        }
        assert!(verify_verdict(&v).is_err());
    }

    #[test]
    fn indeterminate_when_budget_exhausted() {
        let cfg = FactorConfig { seed: 7, rho_budget: 4 };
        let k = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let r = classify(&(k * 64), &cfg);
        assert!(matches!(r, Err(ClassifyError::IndeterminateFactorization(_))));
    }
}
