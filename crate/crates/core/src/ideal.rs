//! Units and ideal membership with explicit coefficient witnesses.
//!
//! Membership is decided by linear algebra over the additive group: the ideal
//! `(g_1, ..., g_n)` is the subgroup spanned by `e_i · g_j` where `e_i` runs
//! over the digit unit vectors. The solver returns the same coefficient tuple
//! an exhaustive search in enumeration order would find first; the exhaustive
//! search is kept as an oracle.

use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::linear::{self, Echelon};
use crate::ring::{Element, Ring};

fn check_members(ring: &Ring, elems: &[&Element]) -> Result<()> {
    for e in elems {
        if !ring.contains(e) {
            return Err(Error::RingMismatch(ring.to_string()));
        }
    }
    Ok(())
}

/// Reusable membership tester for principal ideals of one ring.
pub struct PrincipalTester {
    ring: Ring,
    echelon: Echelon,
    product: Vec<u32>,
    unit: Vec<u32>,
    target: Vec<u64>,
}

impl PrincipalTester {
    pub fn new(ring: &Ring) -> Self {
        let moduli: Vec<u64> = ring.moduli().iter().map(|&m| u64::from(m)).collect();
        Self {
            ring: ring.clone(),
            echelon: Echelon::new(&moduli, &[]),
            product: vec![0; ring.width()],
            unit: vec![0; ring.width()],
            target: vec![0; ring.width()],
        }
    }

    /// Whether `f ∈ (g)`, both given as digit vectors.
    pub fn contains_digits(&mut self, f: &[u32], g: &[u32]) -> bool {
        if f.iter().all(|&d| d == 0) {
            return true;
        }
        if g.iter().all(|&d| d == 0) {
            return false;
        }
        self.echelon_for(g);
        for (t, &d) in self.target.iter_mut().zip(f) {
            *t = u64::from(d);
        }
        self.echelon.contains(&mut self.target)
    }

    pub fn contains(&mut self, f: &Element, g: &Element) -> bool {
        self.contains_digits(f.digits(), g.digits())
    }

    /// Size of the principal ideal `(g)`.
    pub fn ideal_size(&mut self, g: &Element) -> u64 {
        self.echelon_for(g.digits());
        self.echelon.span_size() as u64
    }

    fn echelon_for(&mut self, g: &[u32]) {
        self.echelon.clear();
        for i in 0..self.ring.width() {
            self.unit.fill(0);
            self.unit[i] = 1;
            self.ring.raw_mul(&self.unit, g, &mut self.product);
            self.echelon.push_generator(self.product.iter().map(|&d| u64::from(d)));
        }
        self.echelon.reduce();
    }
}

/// Coefficients `c` with `f = Σ c_j · gens[j]`, least in enumeration order of
/// tuples (first coefficient most significant), or `None`.
///
/// The empty generator list spans the zero ideal.
pub fn in_ideal(
    ring: &Ring,
    f: &Element,
    gens: &[Element],
    budget: &SearchBudget,
) -> Result<Option<Vec<Element>>> {
    check_members(ring, &[f])?;
    check_members(ring, &gens.iter().collect::<Vec<_>>())?;
    budget.check_order("ideal membership", ring.order())?;
    Ok(solve_combination(ring, f, gens))
}

pub(crate) fn solve_combination(ring: &Ring, f: &Element, gens: &[Element]) -> Option<Vec<Element>> {
    if gens.is_empty() {
        return f.is_zero().then(Vec::new);
    }
    let k = ring.width();
    let moduli: Vec<u64> = ring.moduli().iter().map(|&m| u64::from(m)).collect();
    let units = ring.unit_vectors();
    let mut columns = Vec::with_capacity(k * gens.len());
    let mut column_moduli = Vec::with_capacity(k * gens.len());
    for g in gens {
        for (i, e) in units.iter().enumerate() {
            let p = e * g;
            columns.push(p.digits().iter().map(|&d| u64::from(d)).collect());
            column_moduli.push(moduli[i]);
        }
    }
    let significance: Vec<usize> = (0..gens.len())
        .flat_map(|j| ring.significance().iter().map(move |&i| j * k + i))
        .collect();
    let target: Vec<u64> = f.digits().iter().map(|&d| u64::from(d)).collect();
    let x = linear::solve_least(&moduli, &columns, &column_moduli, &significance, &target)?;
    let coeffs: Vec<Element> = x
        .chunks(k)
        .map(|c| ring.wrap(c.iter().map(|&d| d as u32).collect()))
        .collect();
    debug_assert!(verify_combination(f, gens, &coeffs));
    Some(coeffs)
}

/// Re-multiplies a coefficient witness.
pub fn verify_combination(f: &Element, gens: &[Element], coeffs: &[Element]) -> bool {
    if gens.len() != coeffs.len() {
        return false;
    }
    let sum = gens
        .iter()
        .zip(coeffs)
        .fold(f.ring().zero(), |acc, (g, c)| &acc + &(c * g));
    sum == *f
}

/// Exhaustive search over all coefficient tuples in enumeration order.
pub fn in_ideal_exhaustive(
    ring: &Ring,
    f: &Element,
    gens: &[Element],
    budget: &SearchBudget,
) -> Result<Option<Vec<Element>>> {
    check_members(ring, &[f])?;
    check_members(ring, &gens.iter().collect::<Vec<_>>())?;
    budget.check_order("ideal membership", ring.order())?;
    budget.check_tuples("exhaustive membership", ring.order(), gens.len())?;
    if gens.is_empty() {
        return Ok(f.is_zero().then(Vec::new));
    }
    let k = ring.width();
    let n = gens.len();
    let mut coeffs = vec![vec![0u32; k]; n];
    let mut acc = vec![0u32; k];
    let mut prod = vec![0u32; k];
    loop {
        acc.fill(0);
        for (c, g) in coeffs.iter().zip(gens) {
            ring.raw_mul(c, g.digits(), &mut prod);
            ring.raw_add_assign(&mut acc, &prod);
        }
        if acc == f.digits() {
            return Ok(Some(coeffs.into_iter().map(|c| ring.wrap(c)).collect()));
        }
        // odometer with the last coefficient least significant
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(None);
            }
            j -= 1;
            if ring.advance(&mut coeffs[j]) {
                break;
            }
        }
    }
}

fn zmod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(n as i128) as u64)
}

/// The multiplicative inverse of `a`, if it has one.
pub fn is_unit(ring: &Ring, a: &Element, budget: &SearchBudget) -> Result<Option<Element>> {
    check_members(ring, &[a])?;
    budget.check_order("unit test", ring.order())?;
    Ok(inverse(ring, a))
}

pub(crate) fn inverse(ring: &Ring, a: &Element) -> Option<Element> {
    if let crate::descriptor::RingDescriptor::Zmod(n) = ring.descriptor() {
        return zmod_inverse(u64::from(a.digits()[0]), *n).map(|inv| ring.from_nat(inv));
    }
    solve_combination(ring, &ring.one(), std::slice::from_ref(a)).map(|mut c| c.remove(0))
}

/// Scan-based inverse search, the oracle for `is_unit`.
pub fn is_unit_scan(ring: &Ring, a: &Element, budget: &SearchBudget) -> Result<Option<Element>> {
    check_members(ring, &[a])?;
    Ok(ring.enumerate(budget)?.find(|b| (a * b).is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(text: &str) -> Ring {
        Ring::parse(text, &SearchBudget::default()).unwrap()
    }

    fn el(r: &Ring, text: &str) -> Element {
        r.parse_element(text).unwrap()
    }

    #[test]
    fn units_in_z6() {
        let r = ring("Z/6");
        let b = SearchBudget::default();
        assert_eq!(is_unit(&r, &el(&r, "5"), &b).unwrap(), Some(el(&r, "5")));
        assert_eq!(is_unit(&r, &el(&r, "2"), &b).unwrap(), None);
    }

    #[test]
    fn dual_number_unit() {
        let r = ring("Q(Z/2,[0,0,1])");
        let b = SearchBudget::default();
        let a = el(&r, "[1,1]");
        assert_eq!(is_unit(&r, &a, &b).unwrap(), Some(a.clone()));
        assert_eq!(is_unit_scan(&r, &a, &b).unwrap(), Some(a));
        assert_eq!(is_unit(&r, &el(&r, "x"), &b).unwrap(), None);
    }

    #[test]
    fn membership_examples() {
        let b = SearchBudget::default();
        let z6 = ring("Z/6");
        let c = in_ideal(&z6, &el(&z6, "2"), &[el(&z6, "4")], &b).unwrap().unwrap();
        assert_eq!(c, vec![el(&z6, "2")]);
        assert_eq!(in_ideal_exhaustive(&z6, &el(&z6, "2"), &[el(&z6, "4")], &b).unwrap(), Some(c));

        let z4 = ring("Z/4");
        assert_eq!(in_ideal(&z4, &el(&z4, "2"), &[z4.zero()], &b).unwrap(), None);

        let dual = ring("Q(Z/2,[0,0,1])");
        let x = el(&dual, "x");
        assert_eq!(in_ideal(&dual, &x, &[x.square()], &b).unwrap(), None);
        assert_eq!(in_ideal_exhaustive(&dual, &x, &[x.square()], &b).unwrap(), None);
    }

    #[test]
    fn empty_generators_span_zero() {
        let b = SearchBudget::default();
        let z5 = ring("Z/5");
        assert_eq!(in_ideal(&z5, &z5.zero(), &[], &b).unwrap(), Some(vec![]));
        assert_eq!(in_ideal(&z5, &z5.one(), &[], &b).unwrap(), None);
        assert_eq!(in_ideal_exhaustive(&z5, &z5.one(), &[], &b).unwrap(), None);
    }

    #[test]
    fn tuple_budget_applies_to_exhaustive_search() {
        let r = ring("Z/100");
        let b = SearchBudget::new(65_536, 1_000);
        let gens = [el(&r, "3"), el(&r, "7")];
        assert!(matches!(
            in_ideal_exhaustive(&r, &r.one(), &gens, &b),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(in_ideal(&r, &r.one(), &gens, &b).unwrap().is_some());
    }

    #[test]
    fn principal_tester_matches_solver() {
        for text in ["Z/12", "P(Z/4,Z/6)", "Q(Z/2,[1,1,0,1])", "S(Z/3,3)"] {
            let r = ring(text);
            let mut t = PrincipalTester::new(&r);
            let all: Vec<Element> = r.elements().collect();
            for f in &all {
                for g in &all {
                    let want = solve_combination(&r, f, std::slice::from_ref(g)).is_some();
                    assert_eq!(t.contains(f, g), want, "{f:?} in ({g:?})");
                }
            }
        }
    }
}
