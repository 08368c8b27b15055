//! The fixed ring catalog and the invariant suites run over it.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::SearchBudget;
use crate::descriptor::{RingDescriptor, Value};
use crate::error::Result;
use crate::fields;
use crate::ring::{Element, Ring};
use crate::spectrum;

/// Largest product order in the catalog.
pub const MAX_PRODUCT_ORDER: u64 = 4096;

/// Base rings: `Z/n` for `2 <= n <= 100`, then `Z/p[x]/(g)` for `p ∈ {2,3,5}`
/// and every monic `g` of degree 1 to 3.
pub fn base_rings() -> Vec<RingDescriptor> {
    let mut out: Vec<RingDescriptor> = (2..=100).map(RingDescriptor::Zmod).collect();
    for p in [2u64, 3, 5] {
        for degree in 1..=3u32 {
            for code in 0..p.pow(degree) {
                let mut modulus: Vec<Value> = (0..degree)
                    .map(|j| Value::Residue((code / p.pow(j)) % p))
                    .collect();
                modulus.push(Value::Residue(1));
                out.push(RingDescriptor::quot(RingDescriptor::Zmod(p), modulus));
            }
        }
    }
    out
}

/// Base rings followed by every product `P(A,B)` of base rings (A before or
/// equal to B in base order) with `|A|·|B| <= 4096`, restricted to orders up
/// to `max_order`.
pub fn catalog(max_order: u64) -> Vec<RingDescriptor> {
    let base = base_rings();
    let orders: Vec<u64> = base.iter().map(|d| d.order().expect("small")).collect();
    let mut out: Vec<RingDescriptor> = base
        .iter()
        .zip(&orders)
        .filter(|(_, &o)| o <= max_order)
        .map(|(d, _)| d.clone())
        .collect();
    for i in 0..base.len() {
        for j in i..base.len() {
            let order = orders[i] * orders[j];
            if order <= MAX_PRODUCT_ORDER && order <= max_order {
                out.push(RingDescriptor::prod(vec![base[i].clone(), base[j].clone()]));
            }
        }
    }
    out
}

/// Rings up to this order get the exhaustive axiom check.
pub const AXIOM_EXHAUSTIVE_ORDER: u64 = 64;

/// Rings up to this order get the exhaustive splitting-isomorphism check.
pub const CRT_EXHAUSTIVE_ORDER: u64 = 4096;

#[derive(Debug, Clone)]
pub struct SelfCheckOptions {
    pub max_order: u64,
    /// Drives the sampled axiom triples only; verdicts never depend on it.
    pub seed: u64,
    pub axiom_samples: usize,
}

impl Default for SelfCheckOptions {
    fn default() -> Self {
        Self {
            max_order: MAX_PRODUCT_ORDER,
            seed: 0,
            axiom_samples: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Criterion and oracle verdicts agree.
    Equivalence,
    /// Every returned witness `f` has `f ∉ (f²)` by exhaustive scan.
    Witness,
    /// The splitting isomorphism verifies and `|idempotents| = 2^s`.
    Decomposition,
    /// Criterion verdict equals absence of nonzero nilpotents.
    Reduced,
    /// Commutative ring axioms.
    Axioms,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Equivalence,
        Suite::Witness,
        Suite::Decomposition,
        Suite::Reduced,
        Suite::Axioms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equivalence => "equivalence",
            Suite::Witness => "witness",
            Suite::Decomposition => "decomposition",
            Suite::Reduced => "reduced",
            Suite::Axioms => "axioms",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: Suite,
    /// Rings the suite ran on.
    pub rings: u64,
    /// Individual checks: rings, witnesses, elements or triples.
    pub checks: u64,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SelfCheckReport {
    pub rings: usize,
    pub product_of_fields: usize,
    pub suites: Vec<SuiteOutcome>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::passed)
    }

    pub fn suite(&self, suite: Suite) -> &SuiteOutcome {
        self.suites.iter().find(|s| s.suite == suite).expect("every suite is run")
    }
}

/// Runs every suite over the catalog restricted to `options.max_order`.
pub fn run(options: &SelfCheckOptions, budget: &SearchBudget) -> Result<SelfCheckReport> {
    run_on(&catalog(options.max_order), options, budget)
}

/// Runs every suite over the given rings, in order.
pub fn run_on(
    rings: &[RingDescriptor],
    options: &SelfCheckOptions,
    budget: &SearchBudget,
) -> Result<SelfCheckReport> {
    let mut suites: Vec<SuiteOutcome> = Suite::ALL
        .iter()
        .map(|&suite| SuiteOutcome {
            suite,
            rings: 0,
            checks: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        })
        .collect();
    let mut product_of_fields = 0;
    for (position, descriptor) in rings.iter().enumerate() {
        let ring = Ring::new(descriptor.clone())?;
        budget.check_order("selfcheck", ring.order())?;
        let name = ring.to_string();

        let start = Instant::now();
        let report = fields::theorem_equivalence_check(&ring, budget)?;
        record(&mut suites[0], start, 1, report.discrepancy.as_ref().map(|d| {
            format!("{name}: criterion {} oracle {}", d.criterion, d.oracle)
        }));
        if report.criterion.is_product_of_fields {
            product_of_fields += 1;
        }

        let start = Instant::now();
        let mut witnesses = 0;
        let mut failure = None;
        for (label, w) in [("criterion", &report.criterion.witness), ("oracle", &report.oracle.witness)] {
            if let Some(w) = w {
                witnesses += 1;
                if !fields::witness_is_valid(w) {
                    failure = Some(format!("{name}: {label} witness {w} lies in its square ideal"));
                }
            }
        }
        let expected = if report.criterion.is_product_of_fields { 0 } else { 2 };
        if witnesses != expected && failure.is_none() {
            failure = Some(format!("{name}: {witnesses} witnesses, expected {expected}"));
        }
        record(&mut suites[1], start, witnesses, failure);

        let start = Instant::now();
        let failure = check_decomposition(&ring, budget, options.seed)?.map(|e| format!("{name}: {e}"));
        record(&mut suites[2], start, ring.order(), failure);

        let start = Instant::now();
        let nilpotent = fields::first_nonzero_nilpotent(&ring, budget)?;
        let failure = (nilpotent.is_none() != report.criterion.is_product_of_fields).then(|| {
            format!(
                "{name}: criterion {} but first nonzero nilpotent {:?}",
                report.criterion.is_product_of_fields,
                nilpotent.map(|x| x.to_string())
            )
        });
        record(&mut suites[3], start, 1, failure);

        let start = Instant::now();
        let (checks, failure) = if ring.order() <= AXIOM_EXHAUSTIVE_ORDER {
            axioms_exhaustive(&ring)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(position as u64);
            axioms_sampled(&ring, options.axiom_samples, &mut rng)
        };
        record(&mut suites[4], start, checks, failure.map(|e| format!("{name}: {e}")));
    }
    Ok(SelfCheckReport {
        rings: rings.len(),
        product_of_fields,
        suites,
    })
}

fn record(outcome: &mut SuiteOutcome, start: Instant, checks: u64, failure: Option<String>) {
    outcome.elapsed += start.elapsed();
    outcome.rings += 1;
    outcome.checks += checks;
    outcome.failures.extend(failure);
}

fn check_decomposition(ring: &Ring, budget: &SearchBudget, seed: u64) -> Result<Option<String>> {
    let idempotents = spectrum::idempotents(ring, budget)?;
    let decomposition = spectrum::decompose_along(ring, &idempotents)?;
    if let Err(e) = decomposition.verify(CRT_EXHAUSTIVE_ORDER, 1000, seed) {
        return Ok(Some(e));
    }
    let s = decomposition.factors().len();
    let count = idempotents.len();
    if s >= 64 || count as u64 != 1u64 << s {
        return Ok(Some(format!("{count} idempotents but {s} factors")));
    }
    if let Some(f) = decomposition.factors().iter().find(|f| !f.is_connected()) {
        return Ok(Some(format!("factor with unit {} is not connected", f.unit())));
    }
    Ok(None)
}

/// All triples via addition and multiplication tables built from the ring's
/// own operations. Returns the number of triples and the first violation.
pub fn axioms_exhaustive(ring: &Ring) -> (u64, Option<String>) {
    let n = ring.order() as usize;
    let elems: Vec<Element> = ring.elements().collect();
    let mut add = vec![0u32; n * n];
    let mut mul = vec![0u32; n * n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            add[i * n + j] = (a + b).index() as u32;
            mul[i * n + j] = (a * b).index() as u32;
        }
    }
    let neg: Vec<usize> = elems.iter().map(|a| (-a).index() as usize).collect();
    let (zero, one) = (ring.zero().index() as usize, ring.one().index() as usize);
    let add = |a: usize, b: usize| add[a * n + b] as usize;
    let mul = |a: usize, b: usize| mul[a * n + b] as usize;
    let show = |i: usize| elems[i].to_string();
    for (a, &minus_a) in neg.iter().enumerate() {
        if add(a, zero) != a {
            return (0, Some(format!("{} + 0 ≠ {}", show(a), show(a))));
        }
        if mul(a, one) != a {
            return (0, Some(format!("{} · 1 ≠ {}", show(a), show(a))));
        }
        if add(a, minus_a) != zero {
            return (0, Some(format!("{} + (−{}) ≠ 0", show(a), show(a))));
        }
        for b in 0..n {
            if add(a, b) != add(b, a) {
                return (0, Some(format!("addition not commutative at {}, {}", show(a), show(b))));
            }
            if mul(a, b) != mul(b, a) {
                return (0, Some(format!("multiplication not commutative at {}, {}", show(a), show(b))));
            }
            let (ab_sum, ab) = (add(a, b), mul(a, b));
            for c in 0..n {
                if add(ab_sum, c) != add(a, add(b, c)) {
                    return (0, Some(format!("addition not associative at {}, {}, {}", show(a), show(b), show(c))));
                }
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return (0, Some(format!("multiplication not associative at {}, {}, {}", show(a), show(b), show(c))));
                }
                if mul(a, add(b, c)) != add(ab, mul(a, c)) {
                    return (0, Some(format!("distributivity fails at {}, {}, {}", show(a), show(b), show(c))));
                }
            }
        }
    }
    ((n * n * n) as u64, None)
}

/// The same axioms on `samples` uniformly drawn triples.
pub fn axioms_sampled(ring: &Ring, samples: usize, rng: &mut impl Rng) -> (u64, Option<String>) {
    let w = ring.width();
    let moduli = ring.moduli().to_vec();
    let zero = vec![0u32; w];
    let one = ring.one().digits().to_vec();
    let mut t = [(); 3].map(|_| vec![0u32; w]);
    let mut u = [(); 3].map(|_| vec![0u32; w]);
    for _ in 0..samples {
        let [a, b, c] = [(); 3].map(|_| {
            moduli.iter().map(|&m| rng.gen_range(0..m)).collect::<Vec<u32>>()
        });
        let [t0, t1, t2] = &mut t;
        let [u0, u1, u2] = &mut u;
        let mut violation = None;
        let mut fail = |ok: bool, what: &'static str| {
            if !ok && violation.is_none() {
                violation = Some(what);
            }
        };
        ring.raw_add(&a, &zero, t0);
        ring.raw_mul(&a, &one, t1);
        fail(*t0 == a && *t1 == a, "identity");
        ring.raw_sub(&zero, &a, t0);
        ring.raw_add(&a, t0, t1);
        fail(*t1 == zero, "additive inverse");
        ring.raw_add(&a, &b, t0);
        ring.raw_add(&b, &a, t1);
        fail(t0 == t1, "addition not commutative");
        ring.raw_mul(&a, &b, t0);
        ring.raw_mul(&b, &a, t1);
        fail(t0 == t1, "multiplication not commutative");
        ring.raw_add(&a, &b, t0);
        ring.raw_add(t0, &c, t1);
        ring.raw_add(&b, &c, u0);
        ring.raw_add(&a, u0, u1);
        fail(t1 == u1, "addition not associative");
        ring.raw_mul(&a, &b, t0);
        ring.raw_mul(t0, &c, t1);
        ring.raw_mul(&b, &c, u1);
        ring.raw_mul(&a, u1, u2);
        fail(t1 == u2, "multiplication not associative");
        ring.raw_mul(&a, u0, t1);
        ring.raw_mul(&a, &c, t2);
        ring.raw_add(t0, t2, u1);
        fail(*t1 == *u1, "distributivity");
        if let Some(v) = violation {
            let [a, b, c] = [a, b, c].map(|x| ring.wrap(x));
            return (0, Some(format!("{v} at {a}, {b}, {c}")));
        }
    }
    (samples as u64, None)
}
