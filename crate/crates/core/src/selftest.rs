//! Self-test levels run by the CLI. `Quick` finishes in seconds; `Full` adds
//! the `[−1, 1]¹⁶` enumeration and a larger property run.

use num_bigint::BigInt;

use crate::circulant::{det_bareiss, CoeffVector};
use crate::classifier::{classify, verify_verdict};
use crate::number_theory::{is_prime, mod8_class, FactorConfig, Mod8Class};
use crate::properties::{check_vectors, random_vectors, small_identities, Property};
use crate::search::{in_known_set, spectrum, SearchBox, SearchConfig};
use crate::witness::{
    plan_for, squared_form_family, squared_form_value, sum_of_squares_family, sum_of_squares_value,
    twin_brace_family, twin_brace_value, witness_64p2_3mod8, witness_64p_1mod8, witness_64p_5mod8,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Values that must classify as members.
pub const MEMBER_TABLE: [i64; 11] = [0, 128, -128, 256, 320, 576, 1088, 2880, 64 * 73, 64 * 89, 64 * 97];

/// Values that must classify as non-members.
pub const NON_MEMBER_TABLE: [i64; 11] = [2, 4, 96, 64, -64, 192, 448, 64 * 49, 7232, 64 * 3 * 7, 64 * 7 * 23];

/// Values the `[−1, 1]¹⁶` box must not attain.
pub const ABSENT_FROM_UNIT_BOX: [i128; 4] = [64, 192, 448, 7232];

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn base128_determinant(base128: &CoeffVector) -> Result<String, String> {
    let det = det_bareiss(base128);
    if det == big(128) {
        Ok("det = 128".into())
    } else {
        Err(format!("embedded base vector has determinant {det}, expected 128"))
    }
}

fn classifier_table(cfg: &FactorConfig) -> Result<String, String> {
    let members = (-99..=99).step_by(2).chain(MEMBER_TABLE);
    for (v, want) in members.map(|v| (v, true)).chain(NON_MEMBER_TABLE.map(|v| (v, false))) {
        let verdict = classify(&big(v), cfg).map_err(|e| e.to_string())?;
        if verdict.member != want {
            return Err(format!("{v} classified as {}", if verdict.member { "member" } else { "non-member" }));
        }
        verify_verdict(&verdict)?;
    }
    Ok(format!("{} values", 100 + MEMBER_TABLE.len() + NON_MEMBER_TABLE.len()))
}

fn round_trip(base128: &CoeffVector, cfg: &FactorConfig, bound: i64) -> Result<String, String> {
    let mut n = 0;
    for v in (-bound..=bound).chain(MEMBER_TABLE) {
        let verdict = classify(&big(v), cfg).map_err(|e| e.to_string())?;
        if !verdict.member {
            continue;
        }
        let plan = plan_for(&verdict).map_err(|e| format!("{v}: {e}"))?;
        let det = det_bareiss(&plan.realize_with(base128));
        if det != verdict.value {
            return Err(format!("witness for {v} has determinant {det}"));
        }
        n += 1;
    }
    Ok(format!("{n} members"))
}

fn family_formulas() -> Result<String, String> {
    for k in -3..=3 {
        for l in -3..=3 {
            let (k, l) = (big(k), big(l));
            let ok = sum_of_squares_family(&k, &l).is_ok_and(|v| det_bareiss(&v) == sum_of_squares_value(&k, &l))
                && squared_form_family(&k, &l).is_ok_and(|v| det_bareiss(&v) == squared_form_value(&k, &l));
            if !ok {
                return Err(format!("two-parameter family fails at k = {k}, l = {l}"));
            }
            for m in -1..=1 {
                for n in -1..=1 {
                    let (m, n) = (big(m), big(n));
                    if !twin_brace_family(&k, &l, &m, &n).is_ok_and(|v| det_bareiss(&v) == twin_brace_value(&k, &l, &m, &n)) {
                        return Err(format!("twin-brace family fails at ({k}, {l}, {m}, {n})"));
                    }
                }
            }
        }
    }
    Ok("grids agree".into())
}

fn prime_witnesses(limit: i64) -> Result<String, String> {
    let mut n = 0;
    for p in (3..limit).step_by(2).map(big).filter(is_prime) {
        let r: u32 = (&p % 8u32).try_into().expect("residue");
        let plan = match r {
            5 => witness_64p_5mod8(&p),
            3 => witness_64p2_3mod8(&p),
            1 if mod8_class(&p) == Ok(Mod8Class::Pm3) => witness_64p_1mod8(&p),
            _ => continue,
        };
        plan.map_err(|e| format!("{p}: {e}"))?;
        n += 1;
    }
    Ok(format!("{n} primes below {limit}"))
}

fn properties(seed: u64, count: usize) -> Result<String, String> {
    let mut report = check_vectors(&random_vectors(seed, count, -50, 50), true);
    report.outcomes.push(small_identities(8));
    for o in &report.outcomes {
        if o.violations > 0 {
            return Err(format!("{} violated at {:?}", o.property.name(), o.first_violation));
        }
        if o.hits == 0 {
            return Err(format!("{}: hypothesis never held", o.property.name()));
        }
    }
    let rate = report.get(Property::UnitPartsShift).map_or(0.0, |o| o.hit_rate());
    Ok(format!("{count} vectors, {} properties, rarest hypothesis rate {rate:.3}", report.outcomes.len()))
}

fn small_spectra() -> Result<String, String> {
    for (n, lo, hi) in [(2, -3, 3), (4, -2, 2), (8, -1, 1)] {
        let bx = SearchBox::new(n, lo, hi).map_err(|e| e.to_string())?;
        let report = spectrum(&bx, &SearchConfig::default()).map_err(|e| e.to_string())?;
        let outside = report.values().find(|&v| in_known_set(n, v) != Some(true));
        if let Some(v) = outside {
            return Err(format!("order {n} attains {v}, outside the known set"));
        }
    }
    Ok("orders 2, 4, 8".into())
}

fn box_soundness(lo: i64, hi: i64, absent: &[i128], cfg: &FactorConfig) -> Result<String, String> {
    let bx = SearchBox::new(16, lo, hi).map_err(|e| e.to_string())?;
    let report = spectrum(&bx, &SearchConfig::default()).map_err(|e| e.to_string())?;
    for v in report.values() {
        let verdict = classify(&BigInt::from(v), cfg).map_err(|e| e.to_string())?;
        if !verdict.member {
            return Err(format!("{v} is attained but classified non-member"));
        }
    }
    if let Some(v) = absent.iter().find(|v| report.contains(**v)) {
        return Err(format!("{v} is attained in [{lo}, {hi}]^16"));
    }
    Ok(format!("{} vectors, {} values", report.vectors, report.witnesses.len()))
}

/// Runs the self-test with `base128` standing in for the embedded constant.
pub fn run(level: Level, seed: u64, base128: &CoeffVector) -> SelftestReport {
    let cfg = FactorConfig::with_seed(seed);
    let mut checks = vec![
        check("base128_determinant", base128_determinant(base128)),
        check("classifier_table", classifier_table(&cfg)),
        check("witness_round_trip", round_trip(base128, &cfg, if level == Level::Full { 5000 } else { 600 })),
        check("family_formulas", family_formulas()),
        check("prime_witnesses", prime_witnesses(if level == Level::Full { 1000 } else { 200 })),
        check("norm_properties", properties(seed, if level == Level::Full { 10_000 } else { 1_000 })),
        check("small_spectra", small_spectra()),
        check("zero_one_box", box_soundness(0, 1, &[], &cfg)),
    ];
    if level == Level::Full {
        checks.push(check("unit_box_negative_evidence", box_soundness(-1, 1, &ABSENT_FROM_UNIT_BOX, &cfg)));
    }
    SelftestReport { level, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::base128_witness;

    #[test]
    fn quick_passes() {
        let report = run(Level::Quick, 1, &base128_witness());
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn corrupted_base_vector_is_caught() {
        let mut entries = base128_witness().into_entries();
        entries[0] += 1;
        let report = run(Level::Quick, 1, &CoeffVector::new(entries).unwrap());
        assert!(!report.passed());
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert!(failed.contains(&"base128_determinant"));
        assert!(failed.contains(&"witness_round_trip"));
    }
}
