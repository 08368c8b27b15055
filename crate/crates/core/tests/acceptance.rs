//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringlab::fields::{first_nonzero_nilpotent, product_of_fields_oracle, square_ideal_holds};
use ringlab::lift::{self, LiftProblem, TruncatedRing};
use ringlab::selfcheck::{self, axioms_exhaustive, axioms_sampled};
use ringlab::spectrum::{decompose, idempotents};
use ringlab::{Element, Error, Ring, RingDescriptor, SearchBudget};

const EQUIVALENCE_TIME_LIMIT: Duration = Duration::from_secs(60);
const LIFT_PROBLEMS: usize = 100;
const COHERENCE_PROBLEMS: usize = 20;
const AXIOM_SAMPLES: usize = 1000;

struct Line {
    criterion: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn main() {
    let budget = SearchBudget::default();
    let descriptors = selfcheck::catalog(selfcheck::MAX_PRODUCT_ORDER);
    let rings: Vec<Ring> = descriptors.iter().map(|d| Ring::new(d.clone()).unwrap()).collect();

    let lines = vec![
        equivalence(&descriptors, &budget),
        witness_soundness(&rings, &budget),
        decomposition_soundness(&rings, &budget),
        reduced_cross_oracle(&rings, &budget),
        lifting_invariant(),
        truncation_coherence(),
        ring_axioms(&rings),
    ];
    let mut failed = 0;
    for l in &lines {
        println!(
            "criterion {} [{}] {}: {}",
            l.criterion,
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn catalog_shape(descriptors: &[RingDescriptor]) -> (usize, usize, usize) {
    let zmod = descriptors.iter().filter(|d| matches!(d, RingDescriptor::Zmod(_))).count();
    let quot = descriptors.iter().filter(|d| matches!(d, RingDescriptor::Quot { .. })).count();
    let prod = descriptors.iter().filter(|d| matches!(d, RingDescriptor::Prod(_))).count();
    (zmod, quot, prod)
}

/// Criterion and oracle agree on every catalog ring, within the time limit.
fn equivalence(descriptors: &[RingDescriptor], budget: &SearchBudget) -> Line {
    let start = Instant::now();
    let mut discrepancies = Vec::new();
    for d in descriptors {
        let ring = Ring::new(d.clone()).unwrap();
        let a = square_ideal_holds(&ring, budget).unwrap().is_product_of_fields;
        let b = product_of_fields_oracle(&ring, budget).unwrap().is_product_of_fields;
        if a != b {
            discrepancies.push(ring.to_string());
        }
    }
    let elapsed = start.elapsed();
    let (zmod, quot, prod) = catalog_shape(descriptors);
    // Z/2..Z/100, then 2+4+8 + 3+9+27 + 5+25+125 monic moduli.
    let complete = zmod == 99 && quot == 208 && prod > 0;
    Line {
        criterion: 1,
        name: "criterion/oracle equivalence",
        pass: discrepancies.is_empty() && complete && elapsed <= EQUIVALENCE_TIME_LIMIT,
        detail: format!(
            "{} rings ({zmod} Z/n, {quot} quotients, {prod} products), {} discrepancies {:?}, {:.1} s (limit {} s)",
            descriptors.len(),
            discrepancies.len(),
            discrepancies.iter().take(5).collect::<Vec<_>>(),
            elapsed.as_secs_f64(),
            EQUIVALENCE_TIME_LIMIT.as_secs()
        ),
    }
}

/// Independent scan: no `c` with `c·f² = f`.
fn not_in_square_ideal(f: &Element) -> bool {
    let sq = f.square();
    f.ring().elements().all(|c| &c * &sq != *f)
}

fn witness_soundness(rings: &[Ring], budget: &SearchBudget) -> Line {
    let mut checked = 0;
    let mut failures = Vec::new();
    for ring in rings {
        let criterion = square_ideal_holds(ring, budget).unwrap();
        if criterion.is_product_of_fields {
            continue;
        }
        let oracle = product_of_fields_oracle(ring, budget).unwrap();
        for w in [criterion.witness, oracle.witness] {
            checked += 1;
            match w {
                Some(w) if not_in_square_ideal(&w) => {}
                other => failures.push(format!("{ring}: {other:?}")),
            }
        }
    }
    Line {
        criterion: 2,
        name: "witness soundness",
        pass: failures.is_empty() && checked > 0,
        detail: format!("{checked} witnesses checked exhaustively, {} failures {:?}", failures.len(), failures.iter().take(5).collect::<Vec<_>>()),
    }
}

fn decomposition_soundness(rings: &[Ring], budget: &SearchBudget) -> Line {
    let mut elements = 0u64;
    let mut failures = Vec::new();
    for ring in rings.iter().filter(|r| r.order() <= selfcheck::CRT_EXHAUSTIVE_ORDER) {
        let d = decompose(ring, budget).unwrap();
        match d.verify(selfcheck::CRT_EXHAUSTIVE_ORDER, 0, 0) {
            Ok(check) if check.exhaustive => elements += check.elements_checked,
            Ok(_) => failures.push(format!("{ring}: not checked exhaustively")),
            Err(e) => failures.push(format!("{ring}: {e}")),
        }
        let count = idempotents(ring, budget).unwrap().len() as u64;
        if count != 1 << d.factors().len() {
            failures.push(format!("{ring}: {count} idempotents, {} factors", d.factors().len()));
        }
    }
    Line {
        criterion: 3,
        name: "splitting isomorphism",
        pass: failures.is_empty(),
        detail: format!(
            "{elements} elements verified across {} rings, {} failures {:?}",
            rings.len(),
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    }
}

fn reduced_cross_oracle(rings: &[Ring], budget: &SearchBudget) -> Line {
    let mut discrepancies = Vec::new();
    for ring in rings {
        let criterion = square_ideal_holds(ring, budget).unwrap().is_product_of_fields;
        let reduced = first_nonzero_nilpotent(ring, budget).unwrap().is_none();
        if criterion != reduced {
            discrepancies.push(ring.to_string());
        }
    }
    Line {
        criterion: 4,
        name: "reduced-ring cross-oracle",
        pass: discrepancies.is_empty(),
        detail: format!("{} rings, {} discrepancies {:?}", rings.len(), discrepancies.len(), discrepancies.iter().take(5).collect::<Vec<_>>()),
    }
}

fn coefficient_rings() -> Vec<RingDescriptor> {
    let z2 = RingDescriptor::Zmod(2);
    vec![z2.clone(), RingDescriptor::Zmod(3), RingDescriptor::truncated(z2, 2)]
}

/// Order of `S(F2[u]/(u²), 10)`.
fn lift_budget() -> SearchBudget {
    SearchBudget::new(1 << 20, SearchBudget::DEFAULT_MEMBERSHIP_TUPLES)
}

fn random_element(ring: &Ring, rng: &mut ChaCha8Rng) -> Element {
    ring.element_at(rng.gen_range(0..ring.order()))
}

/// A random problem; about half the time the first generator has a unit constant term.
fn random_problem(rng: &mut ChaCha8Rng, n: usize, truncation: usize, stages: usize) -> LiftProblem {
    let coeffs = coefficient_rings();
    let a = coeffs[rng.gen_range(0..coeffs.len())].clone();
    let s = TruncatedRing::new(a.clone(), truncation).unwrap();
    let r = s.ring();
    let mut pairs: Vec<(Element, Element)> = (0..n)
        .map(|_| (random_element(r, rng), random_element(r, rng)))
        .collect();
    if rng.gen_bool(0.5) {
        pairs[0].0 = unit_constant(&s, rng);
    }
    LiftProblem::new(s.clone(), pairs, random_element(r, rng), stages).unwrap()
}

/// A unit of `A` plus random higher terms.
fn unit_constant(s: &TruncatedRing, rng: &mut ChaCha8Rng) -> Element {
    let a = Ring::new(s.coeff().clone()).unwrap();
    let units: Vec<Element> = a
        .elements()
        .filter(|x| ringlab::ideal::is_unit(&a, x, &SearchBudget::default()).unwrap().is_some())
        .collect();
    let u = &units[rng.gen_range(0..units.len())];
    let mut coeffs = s.coefficients(&random_element(s.ring(), rng));
    coeffs[0] = u.value();
    s.ring().element(&ringlab::Value::Coeffs(coeffs)).unwrap()
}

/// Independent residual check: `f − Σ H_{t,i}·f_i` recomputed from the stage
/// coefficients, coefficients below `z^(t+1)` all zero.
fn residual_bound_holds(trace: &lift::LiftTrace) -> bool {
    let p = &trace.problem;
    let s = p.ring();
    let r = s.ring();
    let zero = s.coeff().zero_value();
    let mut h = vec![r.zero(); p.pairs().len()];
    for (t, stage) in trace.stages.iter().enumerate() {
        let zt = s.z().pow(t as u64);
        for (hi, g) in h.iter_mut().zip(&stage.coefficients) {
            *hi = &*hi + &(&zt * g);
        }
        let mut rho = p.target().clone();
        for (hi, (fi, _)) in h.iter().zip(p.pairs()) {
            rho = &rho - &(hi * fi);
        }
        if s.coefficients(&rho)[..t + 1].iter().any(|c| *c != zero) {
            return false;
        }
    }
    true
}

fn lifting_invariant() -> Line {
    let budget = lift_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let mut solved = 0;
    let mut attempts = 0;
    let mut violations = Vec::new();
    while solved < LIFT_PROBLEMS {
        attempts += 1;
        let truncation = rng.gen_range(2..=10);
        let stages = rng.gen_range(0..truncation);
        let n = rng.gen_range(1..=2);
        let problem = random_problem(&mut rng, n, truncation, stages);
        match lift::adic_lift(&problem, &budget) {
            Ok(trace) => {
                solved += 1;
                let verdict = lift::verify_trace(&trace);
                let orders_ok = trace.residual_orders().iter().enumerate().all(|(t, &o)| o > t);
                if !verdict.is_valid() || !orders_ok || !residual_bound_holds(&trace) {
                    violations.push(format!("{} over {}: {verdict}", attempts, problem.ring().ring()));
                }
            }
            Err(Error::StageUnsolvable { .. }) => {}
            Err(e) => panic!("lift failed: {e}"),
        }
    }
    let worked = {
        let s = TruncatedRing::new(RingDescriptor::Zmod(2), 8).unwrap();
        let one = s.ring().one();
        let p = LiftProblem::new(s, vec![(one.clone(), one.clone())], one, 3).unwrap();
        lift::adic_lift(&p, &budget).unwrap().residual_orders()
    };
    Line {
        criterion: 5,
        name: "lifting invariant",
        pass: violations.is_empty() && worked == [1, 2, 3, 4],
        detail: format!(
            "{solved} solvable problems ({attempts} drawn), {} violations {:?}; worked example residual orders {worked:?}",
            violations.len(),
            violations.iter().take(5).collect::<Vec<_>>()
        ),
    }
}

/// Problems with one generator whose constant term is a unit: each stage has
/// a unique solution, so truncations must agree.
fn truncation_coherence() -> Line {
    let budget = lift_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let mut violations = Vec::new();
    let mut stages_compared = 0;
    for k in 0..COHERENCE_PROBLEMS {
        let truncation = rng.gen_range(2..=7);
        let mut problem = random_problem(&mut rng, 1, truncation, truncation - 1);
        let mut pairs = problem.pairs().to_vec();
        pairs[0].0 = unit_constant(problem.ring(), &mut rng);
        problem = LiftProblem::new(problem.ring().clone(), pairs, problem.target().clone(), truncation - 1).unwrap();
        let high = problem.retruncate(truncation + 3).unwrap();
        let a = lift::adic_lift(&problem, &budget).unwrap();
        let b = lift::adic_lift(&high, &budget).unwrap();
        stages_compared += a.stages.len();
        if let Some((t, i)) = lift::coherence_violation(&a, &b).unwrap() {
            violations.push(format!("problem {k}: stage {t}, generator {i}"));
        }
    }
    Line {
        criterion: 6,
        name: "truncation coherence",
        pass: violations.is_empty(),
        detail: format!(
            "{COHERENCE_PROBLEMS} problems at N and N+3, {stages_compared} stages compared, {} violations {:?}",
            violations.len(),
            violations
        ),
    }
}

fn ring_axioms(rings: &[Ring]) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut exhaustive, mut sampled, mut triples) = (0, 0, 0u64);
    let mut failures = Vec::new();
    for ring in rings {
        let (checked, failure) = if ring.order() <= selfcheck::AXIOM_EXHAUSTIVE_ORDER {
            exhaustive += 1;
            let (c, f) = axioms_exhaustive(ring);
            if f.is_none() && c != ring.order().pow(3) {
                failures.push(format!("{ring}: {c} triples"));
            }
            (c, f)
        } else {
            sampled += 1;
            axioms_sampled(ring, AXIOM_SAMPLES, &mut rng)
        };
        triples += checked;
        if let Some(f) = failure {
            failures.push(format!("{ring}: {f}"));
        }
    }
    Line {
        criterion: 7,
        name: "ring axioms",
        pass: failures.is_empty(),
        detail: format!(
            "{exhaustive} rings exhaustive, {sampled} rings with {AXIOM_SAMPLES} sampled triples, {triples} triples, {} violations {:?}",
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    }
}
