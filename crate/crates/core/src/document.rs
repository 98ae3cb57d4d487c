//! JSON output documents. Every integer is written as a decimal string so
//! values of any size round-trip exactly.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::circulant::{det_bareiss, CoeffVector, NormFactorization};
use crate::classifier::{verify_verdict, MembershipVerdict, ObstructedFactor, ObstructedKind, Obstruction, Reason};
use crate::error::DocumentError;
use crate::gaussian::GaussianInteger;
use crate::search::SpectrumReport;
use crate::witness::{PlanNode, Witness, WitnessPlan, ORDER};

pub const SCHEMA_VERSION: &str = "1";

pub fn envelope(command: &str, inputs: Value, result: Value, verified: Option<bool>) -> Value {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("inputs".into(), inputs);
    doc.insert("result".into(), result);
    if let Some(v) = verified {
        doc.insert("verified".into(), json!(v));
    }
    Value::Object(doc)
}

fn s(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn gaussian(z: &GaussianInteger) -> Value {
    json!({ "re": s(&z.re), "im": s(&z.im) })
}

fn ints<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

fn kind_name(k: ObstructedKind) -> &'static str {
    match k {
        ObstructedKind::OneMod8Pm1 => "one_mod_8_pm1",
        ObstructedKind::SevenMod8 => "seven_mod_8",
        ObstructedKind::ThreeMod8 => "three_mod_8",
    }
}

fn kind_from_name(name: &str) -> Option<ObstructedKind> {
    [ObstructedKind::OneMod8Pm1, ObstructedKind::SevenMod8, ObstructedKind::ThreeMod8]
        .into_iter()
        .find(|k| kind_name(*k) == name)
}

pub fn verdict_json(v: &MembershipVerdict) -> Value {
    let decomposition = match &v.reason {
        Reason::Obstructed(o) => json!({
            "sign": o.sign.to_string(),
            "factors": o.factors.iter().map(|f| json!({
                "prime": s(&f.prime),
                "exponent": f.exponent.to_string(),
                "kind": kind_name(f.kind),
            })).collect::<Vec<_>>(),
        }),
        _ => Value::Null,
    };
    json!({
        "value": s(&v.value),
        "member": v.member,
        "reason_kind": v.reason.kind(),
        "reason_prime": v.reason.prime().map_or(Value::Null, s),
        "decomposition": decomposition,
    })
}

pub fn plan_json(plan: &WitnessPlan) -> Value {
    let (kind, params) = match &plan.node {
        PlanNode::Zero => ("zero", json!({})),
        PlanNode::OddFamily { r, c } => ("odd_family", json!({ "r": r.to_string(), "c": s(c) })),
        PlanNode::Mult256Family { c } => ("mult256_family", json!({ "c": s(c) })),
        PlanNode::Base128Constant => ("base128_constant", json!({})),
        PlanNode::SumOfSquaresFamily { k, l } => ("sum_of_squares_family", json!({ "k": s(k), "l": s(l) })),
        PlanNode::SquaredFormFamily { k, l } => ("squared_form_family", json!({ "k": s(k), "l": s(l) })),
        PlanNode::TwinBraceFamily { k, l, m, n } => {
            ("twin_brace_family", json!({ "k": s(k), "l": s(l), "m": s(m), "n": s(n) }))
        }
        PlanNode::Convolve(a, b) => ("convolve", json!({ "left": plan_json(a), "right": plan_json(b) })),
    };
    json!({ "kind": kind, "claimed_value": s(&plan.claimed_value), "params": params })
}

pub fn certificate_json(w: &Witness) -> Value {
    json!({
        "value": s(&w.plan.claimed_value),
        "vector": ints(w.vector.entries()),
        "plan": plan_json(&w.plan),
        "verified": true,
    })
}

pub fn norms_json(nf: &NormFactorization) -> Value {
    let t = &nf.transforms;
    json!({
        "n1": s(&nf.n1),
        "n2": s(&nf.n2),
        "n4": s(&nf.n4),
        "n8": s(&nf.n8),
        "n16": s(&nf.n16),
        "alpha1": gaussian(&nf.alpha1),
        "alpha2": gaussian(&nf.alpha2),
        "b": ints(&t.b),
        "c": ints(&t.c),
        "d": t.d.iter().map(gaussian).collect::<Vec<_>>(),
        "e": ints(&t.e),
    })
}

pub fn spectrum_json(r: &SpectrumReport) -> Value {
    let witnesses: Map<String, Value> = r
        .witnesses
        .iter()
        .map(|(v, w)| (v.to_string(), Value::Array(w.iter().map(|x| json!(x.to_string())).collect())))
        .collect();
    json!({
        "n": r.bx.n.to_string(),
        "lo": r.bx.lo.to_string(),
        "hi": r.bx.hi.to_string(),
        "vectors": r.vectors.to_string(),
        "values": r.values().map(|v| json!(v.to_string())).collect::<Vec<_>>(),
        "witnesses": witnesses,
    })
}

fn malformed(msg: impl Into<String>) -> DocumentError {
    DocumentError::Malformed(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, DocumentError> {
    obj.get(key).ok_or_else(|| malformed(format!("missing field `{key}`")))
}

fn int_of(v: &Value, what: &str) -> Result<BigInt, DocumentError> {
    v.as_str()
        .and_then(|x| BigInt::from_str(x).ok())
        .ok_or_else(|| malformed(format!("`{what}` is not a decimal integer string")))
}

fn int_field(obj: &Value, key: &str) -> Result<BigInt, DocumentError> {
    int_of(field(obj, key)?, key)
}

fn small_field<T: FromStr>(obj: &Value, key: &str) -> Result<T, DocumentError> {
    field(obj, key)?
        .as_str()
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| malformed(format!("`{key}` is out of range")))
}

pub fn parse_plan(v: &Value) -> Result<WitnessPlan, DocumentError> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| malformed("plan kind is not a string"))?;
    let claimed_value = int_field(v, "claimed_value")?;
    let p = field(v, "params")?;
    let node = match kind {
        "zero" => PlanNode::Zero,
        "odd_family" => PlanNode::OddFamily { r: small_field(p, "r")?, c: int_field(p, "c")? },
        "mult256_family" => PlanNode::Mult256Family { c: int_field(p, "c")? },
        "base128_constant" => PlanNode::Base128Constant,
        "sum_of_squares_family" => PlanNode::SumOfSquaresFamily { k: int_field(p, "k")?, l: int_field(p, "l")? },
        "squared_form_family" => PlanNode::SquaredFormFamily { k: int_field(p, "k")?, l: int_field(p, "l")? },
        "twin_brace_family" => PlanNode::TwinBraceFamily {
            k: int_field(p, "k")?,
            l: int_field(p, "l")?,
            m: int_field(p, "m")?,
            n: int_field(p, "n")?,
        },
        "convolve" => PlanNode::Convolve(Box::new(parse_plan(field(p, "left")?)?), Box::new(parse_plan(field(p, "right")?)?)),
        other => return Err(malformed(format!("unknown plan kind `{other}`"))),
    };
    Ok(WitnessPlan { node, claimed_value })
}

pub fn parse_verdict(v: &Value) -> Result<MembershipVerdict, DocumentError> {
    let value = int_field(v, "value")?;
    let member = field(v, "member")?.as_bool().ok_or_else(|| malformed("`member` is not a boolean"))?;
    let kind = field(v, "reason_kind")?.as_str().ok_or_else(|| malformed("`reason_kind` is not a string"))?;
    let prime = || int_field(v, "reason_prime");
    let reason = match kind {
        "odd" => Reason::Odd,
        "divisible_by_128" => Reason::DivisibleBy128,
        "prime_5_mod_8" => Reason::Prime5Mod8(prime()?),
        "prime_1_mod_8_class_pm3" => Reason::Prime1Mod8ClassPm3(prime()?),
        "prime_3_mod_8_squared" => Reason::Prime3Mod8Squared(prime()?),
        "even_not_divisible_by_64" => Reason::EvenNotDivisibleBy64,
        "obstructed_shape" => {
            let d = field(v, "decomposition")?;
            let sign: i8 = small_field(d, "sign")?;
            let factors = field(d, "factors")?
                .as_array()
                .ok_or_else(|| malformed("`factors` is not an array"))?
                .iter()
                .map(|f| {
                    let kind = field(f, "kind")?.as_str().and_then(kind_from_name).ok_or_else(|| malformed("unknown factor kind"))?;
                    Ok(ObstructedFactor { prime: int_field(f, "prime")?, exponent: small_field(f, "exponent")?, kind })
                })
                .collect::<Result<Vec<_>, DocumentError>>()?;
            Reason::Obstructed(Obstruction { sign, factors })
        }
        other => return Err(malformed(format!("unknown reason kind `{other}`"))),
    };
    Ok(MembershipVerdict { value, member, reason })
}

/// A parsed witness certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub value: BigInt,
    pub vector: CoeffVector,
    pub plan: WitnessPlan,
}

pub fn parse_certificate(v: &Value) -> Result<Certificate, DocumentError> {
    let value = int_field(v, "value")?;
    let entries = field(v, "vector")?
        .as_array()
        .ok_or_else(|| malformed("`vector` is not an array"))?
        .iter()
        .map(|x| int_of(x, "vector entry"))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != ORDER {
        return Err(malformed(format!("vector has {} entries, expected {ORDER}", entries.len())));
    }
    let vector = CoeffVector::new(entries).map_err(|e| malformed(e.to_string()))?;
    let plan = parse_plan(field(v, "plan")?)?;
    Ok(Certificate { value, vector, plan })
}

/// Re-checks a certificate from scratch: the vector's determinant, the
/// plan's internal consistency, and that the plan realizes the vector.
pub fn verify_certificate(c: &Certificate) -> Result<(), DocumentError> {
    let det = det_bareiss(&c.vector);
    if det != c.value {
        return Err(DocumentError::Rejected(format!("vector has determinant {det}, certificate claims {}", c.value)));
    }
    if c.plan.claimed_value != c.value || !c.plan.is_consistent() {
        return Err(DocumentError::Rejected("plan values are inconsistent".into()));
    }
    if c.plan.realize() != c.vector {
        return Err(DocumentError::Rejected("plan does not realize the vector".into()));
    }
    Ok(())
}

/// Verifies a `classify` or `witness` document, or a bare certificate.
/// Returns a short description of what was checked.
pub fn verify_document(doc: &Value) -> Result<String, DocumentError> {
    if doc.get("vector").is_some() {
        let c = parse_certificate(doc)?;
        verify_certificate(&c)?;
        return Ok(format!("certificate for {} verified", c.value));
    }
    let version = field(doc, "schema_version")?.as_str().unwrap_or_default();
    if version != SCHEMA_VERSION {
        return Err(malformed(format!("unsupported schema_version `{version}`")));
    }
    let command = field(doc, "command")?.as_str().unwrap_or_default();
    let result = field(doc, "result")?;
    match command {
        "classify" => {
            let verdict = parse_verdict(result)?;
            verify_verdict(&verdict).map_err(DocumentError::Rejected)?;
            Ok(format!("verdict for {} verified", verdict.value))
        }
        "witness" => {
            let cert = field(result, "certificate")?;
            let c = parse_certificate(cert)?;
            verify_certificate(&c)?;
            if let Some(verdict) = result.get("verdict") {
                let verdict = parse_verdict(verdict)?;
                verify_verdict(&verdict).map_err(DocumentError::Rejected)?;
                if verdict.value != c.value {
                    return Err(DocumentError::Rejected("verdict and certificate disagree on the value".into()));
                }
            }
            Ok(format!("certificate for {} verified", c.value))
        }
        other => Err(malformed(format!("command `{other}` has nothing to verify"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::number_theory::FactorConfig;
    use crate::witness::build_witness;

    fn verdict(v: i64) -> MembershipVerdict {
        classify(&BigInt::from(v), &FactorConfig::default()).unwrap()
    }

    #[test]
    fn verdicts_round_trip() {
        for v in [1, 0, 320, 576, 1088, 64, 192, 7232, 96, -64 * 7 * 23] {
            let original = verdict(v);
            let doc = verdict_json(&original);
            assert_eq!(parse_verdict(&doc).unwrap(), original);
        }
        let doc = verdict_json(&verdict(320));
        assert_eq!(doc["reason_prime"], json!("5"));
        assert_eq!(doc["value"], json!("320"));
    }

    #[test]
    fn certificates_round_trip_and_verify() {
        for v in [35, -384, 2880, 512, 0, 1088 * 3] {
            let w = build_witness(&verdict(v)).unwrap();
            let doc = certificate_json(&w);
            let c = parse_certificate(&doc).unwrap();
            assert_eq!(c.plan, w.plan);
            assert_eq!(c.vector, w.vector);
            verify_certificate(&c).unwrap();
            let wrapped = envelope("witness", json!({"value": v.to_string()}), json!({"certificate": doc}), Some(true));
            verify_document(&wrapped).unwrap();
        }
    }

    #[test]
    fn tampering_is_rejected() {
        let w = build_witness(&verdict(320)).unwrap();
        let mut doc = certificate_json(&w);
        doc["vector"][0] = json!("7");
        assert!(matches!(verify_document(&doc), Err(DocumentError::Rejected(_))));
        let mut doc = certificate_json(&w);
        doc["value"] = json!("321");
        assert!(verify_document(&doc).is_err());
        let mut doc = certificate_json(&w);
        doc["vector"][0] = json!(7);
        assert!(matches!(verify_document(&doc), Err(DocumentError::Malformed(_))));

        let mut v = verdict_json(&verdict(7232));
        v["decomposition"]["factors"][0]["prime"] = json!("17");
        let doc = envelope("classify", json!({}), v, None);
        assert!(matches!(verify_document(&doc), Err(DocumentError::Rejected(_))));
    }

    #[test]
    fn huge_values_stay_exact() {
        let big = BigInt::from_str("340282366920938463463374607431768211457").unwrap() * 2 + 1;
        let v = classify(&big, &FactorConfig::default()).unwrap();
        let doc = verdict_json(&v);
        assert_eq!(doc["value"].as_str().unwrap(), big.to_string());
    }
}
