use serde_json::{json, Value};

use ringlab::fields::{self, FieldsVerdict};
use ringlab::lift::{self, LiftProblem, TraceVerdict, TruncatedRing};
use ringlab::selfcheck::{self, SelfCheckOptions};
use ringlab::spectrum::{self, FactorRing};
use ringlab::{ideal, parse, Element, Error, Ring, SearchBudget};

use crate::{exit, MethodArg};

/// A finished command: the ring it ran on, its payload and the exit code.
pub struct Outcome {
    pub ring: Option<String>,
    pub result: Value,
    pub code: u8,
}

impl Outcome {
    fn ok(ring: &Ring, result: Value) -> Self {
        Self {
            ring: Some(ring.to_string()),
            result,
            code: exit::OK,
        }
    }
}

type Result<T> = std::result::Result<T, Error>;

fn strings<'a>(xs: impl IntoIterator<Item = &'a Element>) -> Vec<String> {
    xs.into_iter().map(Element::to_string).collect()
}

pub fn describe(spec: &str, budget: &SearchBudget) -> Result<Outcome> {
    let ring = Ring::parse(spec, budget)?;
    let mut units = 0u64;
    for x in ring.enumerate(budget)? {
        if ideal::is_unit(&ring, &x, budget)?.is_some() {
            units += 1;
        }
    }
    let idempotents = spectrum::idempotents(&ring, budget)?;
    let nilpotents = fields::nilpotents(&ring, budget)?;
    let result = json!({
        "order": ring.order(),
        "units": units,
        "idempotents": idempotents.len(),
        "nilpotents": nilpotents.len(),
        "connected": idempotents.len() <= 2,
    });
    Ok(Outcome::ok(&ring, result))
}

fn factor_json(factor: &FactorRing) -> Value {
    json!({
        "order": factor.order(),
        "unit": factor.unit().to_string(),
        "is_field": fields::factor_is_field(factor),
    })
}

pub fn decompose(spec: &str, budget: &SearchBudget, seed: u64) -> Result<Outcome> {
    let ring = Ring::parse(spec, budget)?;
    let decomposition = spectrum::decompose(&ring, budget)?;
    let check = decomposition
        .verify(selfcheck::CRT_EXHAUSTIVE_ORDER, 1000, seed)
        .map_err(|e| Error::InvalidProblem(format!("decomposition failed verification: {e}")))?;
    let result = json!({
        "factor_orders": decomposition.orders(),
        "factors": decomposition.factors().iter().map(factor_json).collect::<Vec<_>>(),
        "isomorphism": {
            "verified": true,
            "exhaustive": check.exhaustive,
            "elements_checked": check.elements_checked,
        },
    });
    Ok(Outcome::ok(&ring, result))
}

fn verdict_json(v: &FieldsVerdict) -> Value {
    json!({
        "method": v.method.to_string(),
        "is_product_of_fields": v.is_product_of_fields,
        "witness": v.witness.as_ref().map(Element::to_string),
        "factors": v.factors.as_ref().map(|fs| fs.iter().map(factor_json).collect::<Vec<_>>()),
    })
}

pub fn fields_check(spec: &str, method: MethodArg, budget: &SearchBudget) -> Result<Outcome> {
    let ring = Ring::parse(spec, budget)?;
    let mut verdicts = Vec::new();
    if method != MethodArg::Oracle {
        verdicts.push(fields::square_ideal_holds(&ring, budget)?);
    }
    if method != MethodArg::Criterion {
        verdicts.push(fields::product_of_fields_oracle(&ring, budget)?);
    }
    let answer = verdicts[0].is_product_of_fields;
    let agree = verdicts.iter().all(|v| v.is_product_of_fields == answer);
    let result = json!({
        "method": match method {
            MethodArg::Criterion => "criterion",
            MethodArg::Oracle => "oracle",
            MethodArg::Both => "both",
        },
        "is_product_of_fields": agree.then_some(answer),
        "agree": agree,
        "verdicts": verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    });
    let code = match (agree, answer) {
        (false, _) => exit::ERROR,
        (true, true) => exit::OK,
        (true, false) => exit::NEGATIVE,
    };
    Ok(Outcome {
        ring: Some(ring.to_string()),
        result,
        code,
    })
}

pub fn lift(
    spec: &str,
    pairs: &str,
    target: &str,
    stages: Option<usize>,
    budget: &SearchBudget,
) -> Result<Outcome> {
    let ring = Ring::parse(spec, budget)?;
    let truncated = TruncatedRing::from_ring(&ring)?;
    let pairs = parse::parse_pairs(&ring, pairs)?;
    let target = ring.parse_element(target)?;
    let stages = stages.unwrap_or(truncated.truncation() - 1);
    let problem = LiftProblem::new(truncated, pairs, target, stages)?;
    let head = json!({
        "truncation": problem.ring().truncation(),
        "stages": stages,
        "pairs": problem.pairs().iter().map(|(f, r)| json!({ "f": f.to_string(), "r": r.to_string() })).collect::<Vec<_>>(),
        "generators": strings(problem.generators()),
        "target": problem.target().to_string(),
    });
    let trace = match lift::adic_lift(&problem, budget) {
        Ok(trace) => trace,
        Err(Error::StageUnsolvable { stage }) => {
            let mut result = head;
            result["status"] = json!("unsolvable");
            result["unsolvable_stage"] = json!(stage);
            return Ok(Outcome {
                ring: Some(ring.to_string()),
                result,
                code: exit::UNSOLVABLE,
            });
        }
        Err(e) => return Err(e),
    };
    let verdict = lift::verify_trace(&trace);
    let mut result = head;
    result["status"] = json!(if verdict.is_valid() { "verified" } else { "invalid" });
    result["verification"] = json!(verdict.to_string());
    result["residual_orders"] = json!(trace.residual_orders());
    result["lifted"] = json!(strings(trace.lifted()));
    result["trace"] = trace
        .stages
        .iter()
        .enumerate()
        .map(|(t, s)| {
            json!({
                "stage": t,
                "remainder": s.remainder.to_string(),
                "coefficients": strings(&s.coefficients),
                "next": s.next.to_string(),
                "partial": strings(&s.partial),
                "residual": s.residual.to_string(),
                "residual_order": s.residual_order,
            })
        })
        .collect();
    let code = match verdict {
        TraceVerdict::Valid => exit::OK,
        TraceVerdict::Invalid { .. } => exit::ERROR,
    };
    Ok(Outcome {
        ring: Some(ring.to_string()),
        result,
        code,
    })
}

/// Failures listed per suite in the report.
const SHOWN_FAILURES: usize = 10;

pub fn selfcheck(max_order: u64, seed: u64, budget: &SearchBudget, timing: bool) -> Result<Outcome> {
    let options = SelfCheckOptions {
        max_order,
        seed,
        ..SelfCheckOptions::default()
    };
    let report = selfcheck::run(&options, budget)?;
    let suites: Vec<Value> = report
        .suites
        .iter()
        .map(|s| {
            json!({
                "suite": s.suite.name(),
                "passed": s.passed(),
                "rings": s.rings,
                "checks": s.checks,
                "failures": s.failures.len(),
                "first_failures": s.failures.iter().take(SHOWN_FAILURES).collect::<Vec<_>>(),
                "elapsed_ms": timing.then_some(s.elapsed.as_millis() as u64),
            })
        })
        .collect();
    let result = json!({
        "max_order": max_order,
        "seed": seed,
        "rings": report.rings,
        "products_of_fields": report.product_of_fields,
        "passed": report.passed(),
        "suites": suites,
    });
    Ok(Outcome {
        ring: None,
        result,
        code: if report.passed() { exit::OK } else { exit::NEGATIVE },
    })
}
