//! Deciding whether a finite ring is a direct product of fields.
//!
//! Two independent engines: the membership criterion (`f ∈ (f²)` for every
//! `f`) and the splitting oracle (decompose into connected factors, then test
//! each factor for invertibility of its nonzero elements). A third
//! construction extracts the witness the way the equivalence proof does.

use std::fmt;

use crate::budget::SearchBudget;
use crate::descriptor::{RingDescriptor, Value};
use crate::error::{Error, Result};
use crate::ideal::{self, PrincipalTester};
use crate::ring::{Element, Ring};
use crate::spectrum::{self, FactorRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Criterion,
    Oracle,
    ProofWitness,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Criterion => "criterion",
            Method::Oracle => "oracle",
            Method::ProofWitness => "proof_witness",
        })
    }
}

/// Verdict with its certificate: a witness `f ∉ (f²)` when false, the field
/// factors when true (oracle only).
#[derive(Debug, Clone)]
pub struct FieldsVerdict {
    pub ring: Ring,
    pub is_product_of_fields: bool,
    pub witness: Option<Element>,
    pub factors: Option<Vec<FactorRing>>,
    pub method: Method,
}

/// Scans every `f` for a `c` with `f = c·f²`; the first failure (enumeration
/// order) is the witness. Over a product descriptor membership holds
/// componentwise, so each factor is scanned on its own.
pub fn square_ideal_holds(ring: &Ring, budget: &SearchBudget) -> Result<FieldsVerdict> {
    budget.check_order("criterion scan", ring.order())?;
    let witness = first_square_failure(ring)?;
    Ok(FieldsVerdict {
        ring: ring.clone(),
        is_product_of_fields: witness.is_none(),
        witness,
        factors: None,
        method: Method::Criterion,
    })
}

fn first_square_failure(ring: &Ring) -> Result<Option<Element>> {
    let RingDescriptor::Prod(parts) = ring.descriptor() else {
        return Ok(scan_square_failure(ring));
    };
    // Later factors are less significant: the failure embedded from the last
    // bad factor, zero elsewhere, comes first.
    for (i, part) in parts.iter().enumerate().rev() {
        let factor = Ring::new(part.clone())?;
        if let Some(w) = first_square_failure(&factor)? {
            let mut value: Vec<Value> = parts.iter().map(RingDescriptor::zero_value).collect();
            value[i] = w.value();
            return ring.element(&Value::Tuple(value)).map(Some);
        }
    }
    Ok(None)
}

/// Direct scan over all elements of `ring`.
pub fn scan_square_failure(ring: &Ring) -> Option<Element> {
    let mut tester = PrincipalTester::new(ring);
    let mut f = vec![0u32; ring.width()];
    let mut sq = vec![0u32; ring.width()];
    loop {
        ring.raw_mul(&f, &f, &mut sq);
        if !tester.contains_digits(&f, &sq) {
            return Some(ring.wrap(f));
        }
        if !ring.advance(&mut f) {
            return None;
        }
    }
}

/// Every nonzero element is invertible.
pub fn is_field(ring: &Ring, budget: &SearchBudget) -> Result<bool> {
    budget.check_order("field check", ring.order())?;
    let whole = FactorRing::new(ring, ring.one())?;
    Ok(factor_is_field(&whole))
}

/// Every nonzero `a` in the carrier has `b` with `a·b = e`; decided as `e ∈ (a)` in the parent.
pub fn factor_is_field(factor: &FactorRing) -> bool {
    factor.order() >= 2 && first_nonunit(factor, false).is_none()
}

/// `a` is invertible in the factor iff `e ∈ (a)` in the parent ring.
pub fn is_factor_unit(factor: &FactorRing, a: &Element) -> bool {
    let mut tester = PrincipalTester::new(factor.parent());
    tester.contains(factor.unit(), a)
}

/// First carrier element (enumeration order) that is not a unit of the factor;
/// when `skip_idempotents`, idempotents are passed over as well.
fn first_nonunit(factor: &FactorRing, skip_idempotents: bool) -> Option<Element> {
    let parent = factor.parent();
    let mut tester = PrincipalTester::new(parent);
    let e = factor.unit().digits().to_vec();
    let mut x = vec![0u32; parent.width()];
    let mut sq = vec![0u32; parent.width()];
    for &i in factor.indices() {
        parent.decode_index(i, &mut x);
        if x.iter().all(|&d| d == 0) {
            continue;
        }
        if skip_idempotents {
            parent.raw_mul(&x, &x, &mut sq);
            if sq == x {
                continue;
            }
        }
        if !tester.contains_digits(&e, &x) {
            return Some(parent.wrap(x));
        }
    }
    None
}

/// Decomposes into connected factors and checks each is a field.
pub fn product_of_fields_oracle(ring: &Ring, budget: &SearchBudget) -> Result<FieldsVerdict> {
    let decomposition = spectrum::decompose(ring, budget)?;
    let factors = decomposition.factors();
    let bad = factors.iter().position(|f| !factor_is_field(f));
    Ok(match bad {
        None => FieldsVerdict {
            ring: ring.clone(),
            is_product_of_fields: true,
            witness: None,
            factors: Some(factors.to_vec()),
            method: Method::Oracle,
        },
        Some(i) => FieldsVerdict {
            ring: ring.clone(),
            is_product_of_fields: false,
            witness: Some(witness_in_factor(&factors[i])),
            factors: None,
            method: Method::Oracle,
        },
    })
}

/// In a connected non-field factor, the first element that is neither a unit
/// nor idempotent. Embedded with zeros in the other factors it is the same
/// element of the parent.
fn witness_in_factor(factor: &FactorRing) -> Element {
    let f = first_nonunit(factor, true)
        .expect("a connected factor that is not a field has a non-unit, non-idempotent element");
    let f = factor.include(&f).expect("carrier element");
    let sq = f.square();
    assert!(
        ideal::solve_combination(factor.parent(), &f, &[sq]).is_none(),
        "witness {f} lies in the ideal of its square"
    );
    f
}

/// The witness constructed by the equivalence proof: decompose, take the first
/// non-field factor, pick an element that is neither unit nor idempotent there.
pub fn proof_witness(ring: &Ring, budget: &SearchBudget) -> Result<Element> {
    let decomposition = spectrum::decompose(ring, budget)?;
    decomposition
        .factors()
        .iter()
        .find(|f| !factor_is_field(f))
        .map(witness_in_factor)
        .ok_or_else(|| Error::ProductOfFields(ring.to_string()))
}

/// Both engines disagreeing on one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub ring: String,
    pub criterion: bool,
    pub oracle: bool,
    pub criterion_witness: Option<String>,
    pub oracle_witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub criterion: FieldsVerdict,
    pub oracle: FieldsVerdict,
    pub discrepancy: Option<Discrepancy>,
}

impl EquivalenceReport {
    pub fn agree(&self) -> bool {
        self.discrepancy.is_none()
    }
}

/// Runs both engines independently and compares their verdicts.
pub fn theorem_equivalence_check(ring: &Ring, budget: &SearchBudget) -> Result<EquivalenceReport> {
    let criterion = square_ideal_holds(ring, budget)?;
    let oracle = product_of_fields_oracle(ring, budget)?;
    let discrepancy = (criterion.is_product_of_fields != oracle.is_product_of_fields).then(|| Discrepancy {
        ring: ring.to_string(),
        criterion: criterion.is_product_of_fields,
        oracle: oracle.is_product_of_fields,
        criterion_witness: criterion.witness.as_ref().map(|w| w.to_string()),
        oracle_witness: oracle.witness.as_ref().map(|w| w.to_string()),
    });
    Ok(EquivalenceReport {
        criterion,
        oracle,
        discrepancy,
    })
}

/// Exhaustive check that no `c` satisfies `f = c·f²`.
pub fn witness_is_valid(f: &Element) -> bool {
    let ring = f.ring();
    let sq = f.square();
    let mut c = vec![0u32; ring.width()];
    let mut prod = vec![0u32; ring.width()];
    loop {
        ring.raw_mul(&c, sq.digits(), &mut prod);
        if prod == f.digits() {
            return false;
        }
        if !ring.advance(&mut c) {
            return true;
        }
    }
}

/// Squarings after which every nilpotent of a ring of this order is zero. A
/// nilpotent `x` with `x^k ≠ 0` gives a strict chain `(x) ⊋ (x²) ⊋ ... ⊋ (x^k) ⊋ 0`
/// of subgroups, so `k < log2 |R|`.
fn squarings(order: u64) -> u32 {
    let log = 64 - order.saturating_sub(1).leading_zeros();
    32 - log.saturating_sub(1).leading_zeros()
}

fn is_nilpotent_digits(ring: &Ring, x: &[u32], y: &mut Vec<u32>, sq: &mut Vec<u32>) -> bool {
    y.copy_from_slice(x);
    for _ in 0..squarings(ring.order()) {
        if y.iter().all(|&d| d == 0) {
            return true;
        }
        ring.raw_mul(y, y, sq);
        std::mem::swap(y, sq);
    }
    y.iter().all(|&d| d == 0)
}

/// Whether `x` is nilpotent, by repeated squaring.
pub fn is_nilpotent(x: &Element) -> bool {
    let ring = x.ring();
    let (mut y, mut sq) = (vec![0u32; ring.width()], vec![0u32; ring.width()]);
    is_nilpotent_digits(ring, x.digits(), &mut y, &mut sq)
}

/// Nilpotent elements in enumeration order (always includes `0`).
pub fn nilpotents(ring: &Ring, budget: &SearchBudget) -> Result<Vec<Element>> {
    Ok(ring.enumerate(budget)?.filter(is_nilpotent).collect())
}

/// First nonzero nilpotent, the reduced-ring cross-oracle.
pub fn first_nonzero_nilpotent(ring: &Ring, budget: &SearchBudget) -> Result<Option<Element>> {
    budget.check_order("nilpotent scan", ring.order())?;
    let w = ring.width();
    let (mut x, mut y, mut sq) = (vec![0u32; w], vec![0u32; w], vec![0u32; w]);
    while ring.advance(&mut x) {
        if is_nilpotent_digits(ring, &x, &mut y, &mut sq) {
            return Ok(Some(ring.wrap(x)));
        }
    }
    Ok(None)
}
