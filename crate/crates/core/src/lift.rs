//! Stagewise lifting over truncated power series `A[z]/(z^N)`.
//!
//! Given generators `a_i = f_i + r_i·z` and a target `f`, stage `t` writes the
//! remainder `f^(t) = Σ g_i^(t)·a_i` and passes `f^(t+1) = Σ g_i^(t)·r_i` on.
//! Summing the stages gives
//!
//! ```text
//! f = Σ (g_i^(0) + z·g_i^(1) + ... + z^t·g_i^(t))·f_i + z^(t+1)·f^(t+1)
//! ```
//!
//! so the residual `f − Σ H_{t,i}·f_i` lies in `(z^(t+1))`.

use std::fmt;

use crate::budget::SearchBudget;
use crate::descriptor::{RingDescriptor, Value};
use crate::error::{Error, Result};
use crate::ideal;
use crate::ring::{Element, Ring};

/// `S(A,N) = A[z]/(z^N)` with its coefficient ring and truncation kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedRing {
    coeff: RingDescriptor,
    truncation: usize,
    ring: Ring,
}

impl TruncatedRing {
    pub fn new(coeff: RingDescriptor, truncation: usize) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::InvalidProblem(format!("truncation {truncation} is below 2")));
        }
        let ring = Ring::new(RingDescriptor::truncated(coeff.clone(), truncation))?;
        Ok(Self {
            coeff,
            truncation,
            ring,
        })
    }

    /// Recognises a quotient by `z^N` (as produced by `S(A,N)`).
    pub fn from_ring(ring: &Ring) -> Result<Self> {
        let not_truncated = || Error::InvalidProblem(format!("{ring} is not of the form S(A,N)"));
        let RingDescriptor::Quot { base, modulus } = ring.descriptor() else {
            return Err(not_truncated());
        };
        let zero = base.zero_value();
        let (lead, low) = modulus.split_last().ok_or_else(not_truncated)?;
        if *lead != base.one_value() || low.iter().any(|c| *c != zero) {
            return Err(not_truncated());
        }
        Self::new((**base).clone(), low.len())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeff(&self) -> &RingDescriptor {
        &self.coeff
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn z(&self) -> Element {
        self.ring.variable().expect("truncated rings are quotients")
    }

    pub fn z_pow(&self, t: usize) -> Element {
        self.z().pow(t as u64)
    }

    /// Coefficients of `1, z, ..., z^(N−1)`.
    pub fn coefficients(&self, x: &Element) -> Vec<Value> {
        match x.value() {
            Value::Coeffs(c) => c,
            other => unreachable!("truncated ring value {other}"),
        }
    }

    /// Least `t` with a nonzero coefficient at `z^t`; `N` for zero.
    pub fn z_order(&self, x: &Element) -> usize {
        let zero = self.coeff.zero_value();
        self.coefficients(x)
            .iter()
            .position(|c| *c != zero)
            .unwrap_or(self.truncation)
    }

    /// The element of `to` with the same low coefficients: drops powers at or
    /// above its truncation, pads with zeros below it.
    pub fn transfer(&self, x: &Element, to: &TruncatedRing) -> Result<Element> {
        if self.coeff != to.coeff {
            return Err(Error::RingMismatch(to.ring.to_string()));
        }
        if !self.ring.contains(x) {
            return Err(Error::RingMismatch(self.ring.to_string()));
        }
        let mut coeffs = self.coefficients(x);
        coeffs.resize(to.truncation, self.coeff.zero_value());
        to.ring.element(&Value::Coeffs(coeffs))
    }
}

/// Generators `a_i = f_i + r_i·z`, a target `f` and a number of stages `T`
/// (stages `0..=T`).
#[derive(Clone, Debug)]
pub struct LiftProblem {
    ring: TruncatedRing,
    pairs: Vec<(Element, Element)>,
    target: Element,
    stages: usize,
    generators: Vec<Element>,
}

impl LiftProblem {
    pub fn new(
        ring: TruncatedRing,
        pairs: Vec<(Element, Element)>,
        target: Element,
        stages: usize,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidProblem("at least one pair (f_i, r_i) is required".into()));
        }
        if stages + 1 > ring.truncation {
            return Err(Error::InvalidProblem(format!(
                "{stages} stages need truncation above {}, have {}",
                stages + 1,
                ring.truncation
            )));
        }
        let r = &ring.ring;
        if !r.contains(&target) || pairs.iter().any(|(f, g)| !r.contains(f) || !r.contains(g)) {
            return Err(Error::RingMismatch(r.to_string()));
        }
        let z = ring.z();
        let generators = pairs.iter().map(|(f, g)| f + &(g * &z)).collect();
        Ok(Self {
            ring,
            pairs,
            target,
            stages,
            generators,
        })
    }

    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    /// `a_i = f_i + r_i·z`.
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// The same data read in `S(A,N')`.
    pub fn retruncate(&self, truncation: usize) -> Result<Self> {
        let to = TruncatedRing::new(self.ring.coeff.clone(), truncation)?;
        let pairs = self
            .pairs
            .iter()
            .map(|(f, r)| Ok((self.ring.transfer(f, &to)?, self.ring.transfer(r, &to)?)))
            .collect::<Result<Vec<_>>>()?;
        let target = self.ring.transfer(&self.target, &to)?;
        Self::new(to, pairs, target, self.stages)
    }
}

/// One stage `t` of the lift.
#[derive(Clone, Debug)]
pub struct Stage {
    /// `g^(t)`, one coefficient per generator.
    pub coefficients: Vec<Element>,
    /// `f^(t)`.
    pub remainder: Element,
    /// `f^(t+1) = Σ g_i^(t)·r_i`.
    pub next: Element,
    /// `H_{t,i} = Σ_{s<=t} z^s·g_i^(s)`.
    pub partial: Vec<Element>,
    /// `ρ_t = f − Σ H_{t,i}·f_i`.
    pub residual: Element,
    pub residual_order: usize,
}

#[derive(Clone, Debug)]
pub struct LiftTrace {
    pub problem: LiftProblem,
    pub stages: Vec<Stage>,
}

impl LiftTrace {
    /// `h_i = H_{T,i}`.
    pub fn lifted(&self) -> &[Element] {
        &self.stages.last().expect("a trace has stage 0").partial
    }

    pub fn residual_orders(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.residual_order).collect()
    }
}

/// `u = Σ g_i·a_i` with the least coefficient tuple in enumeration order.
pub fn one_step_express(
    ring: &TruncatedRing,
    u: &Element,
    gens: &[Element],
    budget: &SearchBudget,
) -> Result<Option<Vec<Element>>> {
    ideal::in_ideal(&ring.ring, u, gens, budget)
}

/// Exhaustive reference for `one_step_express`.
pub fn one_step_express_exhaustive(
    ring: &TruncatedRing,
    u: &Element,
    gens: &[Element],
    budget: &SearchBudget,
) -> Result<Option<Vec<Element>>> {
    ideal::in_ideal_exhaustive(&ring.ring, u, gens, budget)
}

/// Runs stages `0..=T`; fails with the first stage whose remainder is not in
/// the ideal of the generators.
pub fn adic_lift(problem: &LiftProblem, budget: &SearchBudget) -> Result<LiftTrace> {
    let ring = &problem.ring;
    let r = ring.ring();
    let n = problem.pairs.len();
    let mut stages: Vec<Stage> = Vec::with_capacity(problem.stages + 1);
    let mut remainder = problem.target.clone();
    let mut partial = vec![r.zero(); n];
    let mut z_t = r.one();
    for t in 0..=problem.stages {
        let coefficients = one_step_express(ring, &remainder, &problem.generators, budget)?
            .ok_or(Error::StageUnsolvable { stage: t })?;
        let next = coefficients
            .iter()
            .zip(&problem.pairs)
            .fold(r.zero(), |acc, (g, (_, ri))| &acc + &(g * ri));
        for (h, g) in partial.iter_mut().zip(&coefficients) {
            *h = &*h + &(&z_t * g);
        }
        let residual = residual(problem, &partial);
        stages.push(Stage {
            residual_order: ring.z_order(&residual),
            coefficients,
            remainder,
            next: next.clone(),
            partial: partial.clone(),
            residual,
        });
        remainder = next;
        z_t = &z_t * &ring.z();
    }
    Ok(LiftTrace {
        problem: problem.clone(),
        stages,
    })
}

fn residual(problem: &LiftProblem, partial: &[Element]) -> Element {
    partial
        .iter()
        .zip(&problem.pairs)
        .fold(problem.target.clone(), |acc, (h, (fi, _))| &acc - &(h * fi))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceVerdict {
    Valid,
    /// First violation found.
    Invalid { stage: usize, reason: String },
}

impl TraceVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TraceVerdict::Valid)
    }
}

impl fmt::Display for TraceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceVerdict::Valid => f.write_str("valid"),
            TraceVerdict::Invalid { stage, reason } => write!(f, "invalid at stage {stage}: {reason}"),
        }
    }
}

/// Recomputes every stage from the problem data and the stored coefficients.
pub fn verify_trace(trace: &LiftTrace) -> TraceVerdict {
    let problem = &trace.problem;
    let ring = &problem.ring;
    let r = ring.ring();
    let n = problem.pairs.len();
    let invalid = |stage: usize, reason: String| TraceVerdict::Invalid { stage, reason };
    if trace.stages.len() != problem.stages + 1 {
        let stage = trace.stages.len().min(problem.stages + 1);
        return invalid(stage, format!("{} stages recorded, {} expected", trace.stages.len(), problem.stages + 1));
    }
    let mut expected_remainder = problem.target.clone();
    let mut partial = vec![r.zero(); n];
    for (t, stage) in trace.stages.iter().enumerate() {
        let elems = stage
            .coefficients
            .iter()
            .chain(&stage.partial)
            .chain([&stage.remainder, &stage.next, &stage.residual]);
        if stage.coefficients.len() != n || stage.partial.len() != n || elems.clone().any(|x| !r.contains(x)) {
            return invalid(t, "stage data does not match the problem shape".into());
        }
        if stage.remainder != expected_remainder {
            return invalid(t, format!("remainder {} should be {expected_remainder}", stage.remainder));
        }
        let combination = stage
            .coefficients
            .iter()
            .zip(&problem.generators)
            .fold(r.zero(), |acc, (g, a)| &acc + &(g * a));
        if combination != stage.remainder {
            return invalid(t, format!("Σ g·a = {combination}, remainder is {}", stage.remainder));
        }
        let next = stage
            .coefficients
            .iter()
            .zip(&problem.pairs)
            .fold(r.zero(), |acc, (g, (_, ri))| &acc + &(g * ri));
        if next != stage.next {
            return invalid(t, format!("Σ g·r = {next}, recorded {}", stage.next));
        }
        let z_t = ring.z_pow(t);
        for (h, g) in partial.iter_mut().zip(&stage.coefficients) {
            *h = &*h + &(&z_t * g);
        }
        if partial != stage.partial {
            return invalid(t, "partial sums disagree with the coefficients".into());
        }
        let rho = residual(problem, &partial);
        if rho != stage.residual {
            return invalid(t, format!("residual {rho}, recorded {}", stage.residual));
        }
        let closed = &ring.z_pow(t + 1) * &stage.next;
        if rho != closed {
            return invalid(t, format!("residual {rho} differs from z^{}·f^({}) = {closed}", t + 1, t + 1));
        }
        let order = ring.z_order(&rho);
        if order != stage.residual_order {
            return invalid(t, format!("residual order {order}, recorded {}", stage.residual_order));
        }
        if order < t + 1 {
            return invalid(t, format!("residual order {order} below {}", t + 1));
        }
        expected_remainder = stage.next.clone();
    }
    TraceVerdict::Valid
}

/// Where two traces of one problem at truncations `N < N'` first disagree
/// modulo `z^N`: `(stage, generator)`.
pub fn coherence_violation(low: &LiftTrace, high: &LiftTrace) -> Result<Option<(usize, usize)>> {
    let (from, to) = (&high.problem.ring, &low.problem.ring);
    for (t, (a, b)) in low.stages.iter().zip(&high.stages).enumerate() {
        for (i, (ga, gb)) in a.coefficients.iter().zip(&b.coefficients).enumerate() {
            if from.transfer(gb, to)? != *ga {
                return Ok(Some((t, i)));
            }
        }
    }
    Ok(None)
}
