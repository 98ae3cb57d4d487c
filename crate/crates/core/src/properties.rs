//! Executable checks of the norm-factorization identities and the parity and
//! congruence facts about `N₁ … N₁₆`, `α₁`, `α₂`, run over seeded random
//! vectors.
//!
//! Conditional checks count how often their hypothesis held so that a run
//! where it almost never held can be told apart from a real pass.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circulant::{alpha1_exact, alpha2_exact, det_bareiss, norms, parity_profile, CoeffVector};

/// Required fraction of vectors meeting a conditional check's hypothesis.
pub const MIN_HIT_RATE: f64 = 0.10;

/// Primes `≡ 3 (mod 4)` below this bound must divide `N₁, N₂, N₄` to even powers.
pub const SMALL_PRIME_BOUND: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    /// `det = N₁N₂N₄N₈N₁₆`, `N₁ = |α₁|²`, `N₂ = |α₂|²`.
    Factorization,
    /// The five norms share parity.
    NormParity,
    /// The parity conditions on `b`, `c`, `e` are equivalent.
    ParityConditions,
    /// `N₄N₈N₁₆ ∈ ℤ_odd ∪ 16ℤ`.
    Order4Block,
    /// `N₂ ∈ 2ℤ_odd ⇔ N₄ ∈ 2ℤ_odd`.
    TwiceOddPair,
    /// The three descriptions of `D ∈ 64ℤ_odd` agree.
    SixtyFourOdd,
    /// Under the `b` parity condition, `N₄ ≡ N₈N₁₆ − 4(b₀b₂+b₁b₃) + 2 (mod 16)`.
    Order4Congruence,
    /// Under the `c` parity condition, `α₂` parts mod 8.
    Alpha2Congruence,
    /// Under the `e` parity condition, `2Σe_ke_{k+4} ≡ b₀b₂+b₁b₃+c₀c₂+c₁c₃ (mod 4)`.
    CrossProducts,
    /// Under the `e` parity condition, `α₁` parts mod 8.
    Alpha1Congruence,
    /// If all `α` parts are `≡ ±1 (mod 8)` then `N₄ ≡ N₈N₁₆ + 2 (mod 16)`.
    UnitPartsShift,
    /// Primes `≡ 3 (mod 4)` below 1000 divide `N₁, N₂, N₄` to even powers.
    SumOfTwoSquares,
    /// The three two- and four-variable identities on a small grid.
    SmallIdentities,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::Factorization,
        Property::NormParity,
        Property::ParityConditions,
        Property::Order4Block,
        Property::TwiceOddPair,
        Property::SixtyFourOdd,
        Property::Order4Congruence,
        Property::Alpha2Congruence,
        Property::CrossProducts,
        Property::Alpha1Congruence,
        Property::UnitPartsShift,
        Property::SumOfTwoSquares,
        Property::SmallIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Factorization => "factorization",
            Property::NormParity => "norm_parity",
            Property::ParityConditions => "parity_conditions",
            Property::Order4Block => "order4_block",
            Property::TwiceOddPair => "twice_odd_pair",
            Property::SixtyFourOdd => "sixty_four_odd",
            Property::Order4Congruence => "order4_congruence",
            Property::Alpha2Congruence => "alpha2_congruence",
            Property::CrossProducts => "cross_products",
            Property::Alpha1Congruence => "alpha1_congruence",
            Property::UnitPartsShift => "unit_parts_shift",
            Property::SumOfTwoSquares => "sum_of_two_squares",
            Property::SmallIdentities => "small_identities",
        }
    }

    /// Whether the check only applies under a hypothesis subject to
    /// [`MIN_HIT_RATE`].
    pub fn is_conditional(self) -> bool {
        matches!(
            self,
            Property::Order4Congruence
                | Property::Alpha2Congruence
                | Property::CrossProducts
                | Property::Alpha1Congruence
                | Property::UnitPartsShift
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub property: Property,
    pub tested: u64,
    /// Cases where the hypothesis held (equal to `tested` when unconditional).
    pub hits: u64,
    pub violations: u64,
    pub first_violation: Option<Vec<i64>>,
}

impl Outcome {
    fn new(property: Property) -> Self {
        Self { property, tested: 0, hits: 0, violations: 0, first_violation: None }
    }

    fn record(&mut self, hypothesis: bool, holds: bool, case: &[i64]) {
        self.tested += 1;
        if !hypothesis {
            return;
        }
        self.hits += 1;
        if !holds {
            self.violations += 1;
            self.first_violation.get_or_insert_with(|| case.to_vec());
        }
    }

    pub fn hit_rate(&self) -> f64 {
        if self.tested == 0 {
            0.0
        } else {
            self.hits as f64 / self.tested as f64
        }
    }

    pub fn hit_rate_ok(&self) -> bool {
        !self.property.is_conditional() || self.hit_rate() >= MIN_HIT_RATE
    }

    pub fn passed(&self) -> bool {
        self.tested > 0 && self.violations == 0 && self.hit_rate_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn get(&self, p: Property) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.property == p)
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }
}

/// `count` vectors of order 16 with entries uniform in `[lo, hi]`.
pub fn random_vectors(seed: u64, count: usize, lo: i64, hi: i64) -> Vec<[i64; 16]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| std::array::from_fn(|_| rng.gen_range(lo..=hi))).collect()
}

fn md(x: &BigInt, m: i64) -> i64 {
    x.mod_floor(&BigInt::from(m)).to_i64().expect("small residue")
}

fn neg_one_pow(x: &BigInt) -> i64 {
    if x.is_even() {
        1
    } else {
        -1
    }
}

fn is_unit_mod8(x: &BigInt) -> bool {
    matches!(md(x, 8), 1 | 7)
}

fn differ_mod2(x: &BigInt, y: &BigInt) -> bool {
    x.is_odd() != y.is_odd()
}

fn small_primes_3mod4() -> Vec<u32> {
    (3..SMALL_PRIME_BOUND)
        .filter(|&n| n % 4 == 3 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

fn even_multiplicity(n: &BigInt, p: u32) -> bool {
    if n.is_zero() {
        return true;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0u32;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        n = q;
        e += 1;
    }
    e.is_multiple_of(2)
}

#[derive(Default)]
struct Tally {
    outcomes: Vec<Outcome>,
}

impl Tally {
    fn new(props: &[Property]) -> Self {
        Self { outcomes: props.iter().map(|&p| Outcome::new(p)).collect() }
    }

    fn record(&mut self, p: Property, hypothesis: bool, holds: bool, case: &[i64]) {
        let o = self.outcomes.iter_mut().find(|o| o.property == p).expect("tracked property");
        o.record(hypothesis, holds, case);
    }
}

fn check_vector(a: &[i64; 16], primes: &[u32], with_bareiss: bool, tally: &mut Tally) {
    let v = CoeffVector::from_i64s(a);
    let nf = norms(&v).expect("order 16");
    let t = &nf.transforms;
    let (b, c, e) = (&t.b, &t.c, &t.e);

    let factor_ok = nf.n1 == nf.alpha1.norm()
        && nf.n2 == nf.alpha2.norm()
        && (!with_bareiss || det_bareiss(&v) == nf.product());
    tally.record(Property::Factorization, true, factor_ok, a);

    let parities = [&nf.n1, &nf.n2, &nf.n4, &nf.n8, &nf.n16].map(|x| x.is_odd());
    tally.record(Property::NormParity, true, parities.iter().all(|&p| p == parities[0]), a);

    let hb = differ_mod2(&b[0], &b[2]) && differ_mod2(&b[1], &b[3]);
    let hc = differ_mod2(&c[0], &c[2]) && differ_mod2(&c[1], &c[3]);
    let he = differ_mod2(&(&e[0] + &e[4]), &(&e[2] + &e[6])) && differ_mod2(&(&e[1] + &e[5]), &(&e[3] + &e[7]));
    tally.record(Property::ParityConditions, true, hb == hc && hc == he, a);

    let block = nf.order4_part();
    tally.record(Property::Order4Block, true, block.is_odd() || md(&block, 16) == 0, a);

    let twice_odd = |x: &BigInt| md(x, 4) == 2;
    tally.record(Property::TwiceOddPair, true, twice_odd(&nf.n2) == twice_odd(&nf.n4), a);

    tally.record(Property::SixtyFourOdd, true, parity_profile(&nf).conditions_agree(), a);

    let n8n16 = &nf.n8 * &nf.n16;
    let bb = &b[0] * &b[2] + &b[1] * &b[3];
    let cc = &c[0] * &c[2] + &c[1] * &c[3];
    let s: BigInt = &bb + &cc;

    let lhs = md(&nf.n4, 16);
    let rhs = md(&(&n8n16 - &bb * 4 + 2), 16);
    tally.record(Property::Order4Congruence, hb, lhs == rhs, a);

    let re2 = md(&nf.alpha2.re, 8) == (neg_one_pow(&c[2]) + 2 * md(&cc, 8)).rem_euclid(8);
    let im2 = md(&nf.alpha2.im, 8) == (neg_one_pow(&c[1]) + 2 * md(&cc, 8)).rem_euclid(8);
    tally.record(Property::Alpha2Congruence, hc, re2 && im2, a);

    let cross: BigInt = (&e[0] * &e[4] + &e[2] * &e[6] + &e[1] * &e[5] + &e[3] * &e[7]) * 2;
    tally.record(Property::CrossProducts, he, md(&cross, 4) == md(&s, 4), a);

    let re1 = md(&nf.alpha1.re, 8) == (neg_one_pow(&b[2]) + 2 * md(&s, 8)).rem_euclid(8);
    let im1 = md(&nf.alpha1.im, 8) == (neg_one_pow(&b[1]) + 2 * md(&s, 8)).rem_euclid(8);
    tally.record(Property::Alpha1Congruence, he, re1 && im1, a);

    let units = [&nf.alpha1.re, &nf.alpha1.im, &nf.alpha2.re, &nf.alpha2.im].iter().all(|x| is_unit_mod8(x));
    tally.record(Property::UnitPartsShift, units, lhs == md(&(&n8n16 + 2), 16), a);

    let squares_ok = [&nf.n1, &nf.n2, &nf.n4].iter().all(|n| primes.iter().all(|&p| even_multiplicity(n, p)));
    tally.record(Property::SumOfTwoSquares, true, squares_ok, a);
}

/// Runs every vector-level check over `vectors`. With `with_bareiss` the
/// factorization check also compares against elimination.
pub fn check_vectors(vectors: &[[i64; 16]], with_bareiss: bool) -> Report {
    let props: Vec<Property> = Property::ALL.iter().copied().filter(|p| *p != Property::SmallIdentities).collect();
    let mut tally = Tally::new(&props);
    let primes = small_primes_3mod4();
    for a in vectors {
        check_vector(a, &primes, with_bareiss, &mut tally);
    }
    Report { outcomes: tally.outcomes }
}

/// The three small identities for every `(a, b, c, d) ∈ [−r, r]⁴`:
/// `ab + cd ≡ ac + bd (mod 2)` when `a + b ≢ c + d (mod 2)`;
/// `4ab(a² + b²) ≡ 0 (mod 8)`; `a⁴ + b⁴ + 2a²b² + 4ab ≡ (1 − (−1)^{a+b})/2 (mod 8)`.
pub fn small_identities(r: i64) -> Outcome {
    let mut o = Outcome::new(Property::SmallIdentities);
    for a in -r..=r {
        for b in -r..=r {
            let two = (4 * a * b * (a * a + b * b)).rem_euclid(8) == 0;
            let quartic = a.pow(4) + b.pow(4) + 2 * a * a * b * b + 4 * a * b;
            let three = quartic.rem_euclid(8) == (a + b).rem_euclid(2);
            for c in -r..=r {
                for d in -r..=r {
                    let one = (a + b - c - d).rem_euclid(2) == 0 || (a * b + c * d - a * c - b * d).rem_euclid(2) == 0;
                    o.record(true, one && two && three, &[a, b, c, d]);
                }
            }
        }
    }
    o
}

/// The full suite: `count` seeded vectors with entries in `[−bound, bound]`
/// plus the small identities on `[−8, 8]⁴`.
pub fn run_suite(seed: u64, count: usize, bound: i64) -> Report {
    let vectors = random_vectors(seed, count, -bound, bound);
    let mut report = check_vectors(&vectors, true);
    report.outcomes.push(small_identities(8));
    report
}

/// `α₁`, `α₂` by the closed forms against the cyclotomic products, and the
/// norm route against elimination. Returns the first disagreeing vector.
pub fn cross_oracle(vectors: &[[i64; 16]]) -> Result<(), Vec<i64>> {
    for a in vectors {
        let v = CoeffVector::from_i64s(a);
        let nf = norms(&v).expect("order 16");
        let ok = alpha1_exact(&v).is_ok_and(|x| x == nf.alpha1)
            && alpha2_exact(&v).is_ok_and(|x| x.norm() == nf.n2)
            && det_bareiss(&v) == nf.product();
        if !ok {
            return Err(a.to_vec());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_run() {
        let report = run_suite(7, 500, 50);
        for o in &report.outcomes {
            assert_eq!(o.violations, 0, "{:?}", o);
        }
    }

    #[test]
    fn small_identities_cover_the_grid() {
        let o = small_identities(3);
        assert_eq!(o.tested, 7u64.pow(4));
        assert!(o.passed());
    }

    #[test]
    fn outcome_flags_violations_and_low_hit_rates() {
        let mut o = Outcome::new(Property::Order4Congruence);
        o.record(true, true, &[]);
        for _ in 0..20 {
            o.record(false, false, &[]);
        }
        assert_eq!(o.violations, 0);
        assert!(!o.hit_rate_ok());
        assert!(!o.passed());
        o.record(true, false, &[1, 2]);
        assert_eq!(o.first_violation, Some(vec![1, 2]));
    }

    #[test]
    fn even_multiplicity_examples() {
        assert!(even_multiplicity(&BigInt::from(9 * 5), 3));
        assert!(!even_multiplicity(&BigInt::from(27), 3));
        assert!(even_multiplicity(&BigInt::from(0), 7));
        assert_eq!(&small_primes_3mod4()[..4], &[3, 7, 11, 19]);
    }

    #[test]
    fn random_vectors_are_seeded() {
        assert_eq!(random_vectors(1, 3, -5, 5), random_vectors(1, 3, -5, 5));
        assert_ne!(random_vectors(1, 3, -5, 5), random_vectors(2, 3, -5, 5));
        assert!(random_vectors(3, 50, -2, 2).iter().flatten().all(|x| (-2..=2).contains(x)));
    }

    #[test]
    fn cross_oracle_agrees() {
        assert_eq!(cross_oracle(&random_vectors(11, 200, -20, 20)), Ok(()));
    }
}
