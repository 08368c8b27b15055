//! Idempotents, connectedness and the splitting `R ≅ Re × R(1−e)`.
//!
//! A factor is kept as its carrier `Re = {x : e·x = x}` inside the parent ring,
//! with `e` acting as its identity. `decompose` splits along the first
//! nontrivial idempotent (enumeration order) until every factor is connected,
//! then lists the factors by increasing order, ties broken by the index of the
//! unit idempotent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

/// A direct factor `Re` of a parent ring.
#[derive(Clone, Debug)]
pub struct FactorRing {
    parent: Ring,
    unit: Element,
    /// Enumeration indices of the carrier, ascending.
    carrier: Vec<u64>,
}

impl FactorRing {
    /// The factor cut out by an idempotent of `parent`. The whole ring is `unit = 1`.
    pub fn new(parent: &Ring, unit: Element) -> Result<Self> {
        if !parent.contains(&unit) {
            return Err(Error::RingMismatch(parent.to_string()));
        }
        if !unit.is_idempotent() {
            return Err(Error::NotIdempotent(unit.to_string()));
        }
        let carrier = if unit.is_one() {
            (0..parent.order()).collect()
        } else {
            fixed_indices(parent, &unit)
        };
        Ok(Self {
            parent: parent.clone(),
            unit,
            carrier,
        })
    }

    pub fn parent(&self) -> &Ring {
        &self.parent
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn order(&self) -> u64 {
        self.carrier.len() as u64
    }

    pub fn indices(&self) -> &[u64] {
        &self.carrier
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.carrier.iter().map(|&i| self.parent.element_at(i))
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.parent.contains(x) && self.carrier.binary_search(&x.index()).is_ok()
    }

    /// `x ↦ e·x`.
    pub fn project(&self, x: &Element) -> Element {
        &self.unit * x
    }

    /// Inclusion into the parent (identity on the carrier).
    pub fn include(&self, y: &Element) -> Result<Element> {
        if self.contains(y) {
            Ok(y.clone())
        } else {
            Err(Error::RingMismatch(format!("factor with unit {}", self.unit)))
        }
    }

    /// Idempotents of the factor in enumeration order, `0` and `e` included.
    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|x| x.is_idempotent()).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.first_nontrivial_idempotent().is_none()
    }

    fn first_nontrivial_idempotent(&self) -> Option<Element> {
        self.elements()
            .find(|x| !x.is_zero() && *x != self.unit && x.is_idempotent())
    }

    /// Splits along an idempotent `f` of this factor with `f ∉ {0, e}`.
    pub fn split(&self, f: &Element) -> Result<(FactorRing, FactorRing)> {
        if !self.contains(f) {
            return Err(Error::RingMismatch(format!("factor with unit {}", self.unit)));
        }
        if !f.is_idempotent() {
            return Err(Error::NotIdempotent(f.to_string()));
        }
        if f.is_zero() || *f == self.unit {
            return Err(Error::TrivialIdempotent(f.to_string()));
        }
        // Rf and R(e−f) lie inside Re: x = f·x on the first, f·x = 0 on the second.
        let parent = &self.parent;
        let mut x = vec![0u32; parent.width()];
        let mut fx = vec![0u32; parent.width()];
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for &i in &self.carrier {
            parent.decode_index(i, &mut x);
            parent.raw_mul(f.digits(), &x, &mut fx);
            if fx == x {
                first.push(i);
            }
            if fx.iter().all(|&d| d == 0) {
                second.push(i);
            }
        }
        let first = FactorRing {
            parent: parent.clone(),
            carrier: first,
            unit: f.clone(),
        };
        let second = FactorRing {
            parent: parent.clone(),
            carrier: second,
            unit: &self.unit - f,
        };
        Ok((first, second))
    }

    /// Checks `e² = e`, that the carrier is exactly the fixed set of `x ↦ e·x`,
    /// and closure under addition and multiplication against the additive
    /// generators `e·b_i` of `Re`.
    pub fn verify(&self) -> std::result::Result<(), String> {
        if !self.unit.is_idempotent() {
            return Err(format!("unit {} is not idempotent", self.unit));
        }
        let fixed = self
            .parent
            .elements()
            .filter(|x| self.project(x) == *x)
            .count() as u64;
        if fixed != self.order() {
            return Err(format!("carrier has {} elements, fixed set has {fixed}", self.order()));
        }
        let gens: Vec<Element> = self
            .parent
            .unit_vectors()
            .iter()
            .map(|b| self.project(b))
            .collect();
        for x in self.elements() {
            if self.project(&x) != x {
                return Err(format!("unit does not act as one on {x}"));
            }
            for g in &gens {
                if !self.contains(&(&x + g)) || !self.contains(&(&x * g)) {
                    return Err(format!("carrier not closed at {x} and {g}"));
                }
            }
        }
        Ok(())
    }
}

/// Indices of `{x : e·x = x} = eR`.
fn fixed_indices(ring: &Ring, e: &Element) -> Vec<u64> {
    let mut x = vec![0u32; ring.width()];
    let mut ex = vec![0u32; ring.width()];
    let mut out = Vec::new();
    let mut index = 0u64;
    loop {
        ring.raw_mul(e.digits(), &x, &mut ex);
        if ex == x {
            out.push(index);
        }
        if !ring.advance(&mut x) {
            return out;
        }
        index += 1;
    }
}

/// All `e` with `e² = e`, in enumeration order.
pub fn idempotents(ring: &Ring, budget: &SearchBudget) -> Result<Vec<Element>> {
    budget.check_order("idempotent scan", ring.order())?;
    let mut x = vec![0u32; ring.width()];
    let mut sq = vec![0u32; ring.width()];
    let mut out = Vec::new();
    loop {
        ring.raw_mul(&x, &x, &mut sq);
        if sq == x {
            out.push(ring.wrap(x.clone()));
        }
        if !ring.advance(&mut x) {
            break;
        }
    }
    Ok(out)
}

/// True iff the only idempotents are `0` and `1`.
pub fn is_connected(ring: &Ring, budget: &SearchBudget) -> Result<bool> {
    Ok(idempotents(ring, budget)?.len() <= 2)
}

/// The factors `Re` and `R(1−e)` for a nontrivial idempotent `e`.
pub fn split(ring: &Ring, e: &Element, budget: &SearchBudget) -> Result<(FactorRing, FactorRing)> {
    budget.check_order("split", ring.order())?;
    FactorRing::new(ring, ring.one())?.split(e)
}

/// `R ≅ F_1 × ... × F_s` with connected factors, as carriers in `R`.
#[derive(Clone, Debug)]
pub struct FactorDecomposition {
    parent: Ring,
    factors: Vec<FactorRing>,
}

/// Outcome of checking the splitting isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismCheck {
    pub exhaustive: bool,
    pub elements_checked: u64,
}

impl FactorDecomposition {
    pub fn parent(&self) -> &Ring {
        &self.parent
    }

    pub fn factors(&self) -> &[FactorRing] {
        &self.factors
    }

    pub fn orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order()).collect()
    }

    /// `x ↦ (e_1·x, ..., e_s·x)`.
    pub fn forward(&self, x: &Element) -> Vec<Element> {
        self.factors.iter().map(|f| f.project(x)).collect()
    }

    /// `(y_1, ..., y_s) ↦ y_1 + ... + y_s`, each `y_i` taken from factor `i`.
    pub fn backward(&self, parts: &[Element]) -> Result<Element> {
        if parts.len() != self.factors.len() {
            return Err(Error::InvalidValue {
                ring: self.parent.to_string(),
                message: format!("expected {} components, got {}", self.factors.len(), parts.len()),
            });
        }
        let mut sum = self.parent.zero();
        for (f, y) in self.factors.iter().zip(parts) {
            sum = &sum + &f.include(y)?;
        }
        Ok(sum)
    }

    /// Checks that `forward` is a bijective unital ring homomorphism with
    /// inverse `backward`.
    ///
    /// Up to `exhaustive_limit` elements every `x` is checked: its components
    /// lie in their factors, they sum back to `x`, and `forward(x)` equals the
    /// expansion `Σ x_j·forward(b_j)` over the additive generators `b_j`. With
    /// `m_j·forward(b_j) = 0` this makes `forward` additive, and
    /// `forward(b_j·b_k) = forward(b_j)·forward(b_k)` extends to all pairs by
    /// bilinearity. Bijectivity follows from `backward ∘ forward = id` and
    /// `|R| = Π |F_i|`. Larger rings are checked on `samples` random pairs.
    pub fn verify(
        &self,
        exhaustive_limit: u64,
        samples: usize,
        seed: u64,
    ) -> std::result::Result<IsomorphismCheck, String> {
        let product: u128 = self.factors.iter().map(|f| f.order() as u128).product();
        if product != self.parent.order() as u128 {
            return Err(format!("factor orders multiply to {product}, ring has {}", self.parent.order()));
        }
        let zero = self.parent.zero();
        if self.forward(&zero).iter().any(|y| !y.is_zero()) {
            return Err("forward(0) is not zero".into());
        }
        let one_image = self.forward(&self.parent.one());
        for (f, y) in self.factors.iter().zip(&one_image) {
            if y != f.unit() {
                return Err(format!("forward(1) has component {y}, expected {}", f.unit()));
            }
        }
        if self.parent.order() <= exhaustive_limit {
            self.verify_generators()?;
            self.verify_every_element()?;
            return Ok(IsomorphismCheck {
                exhaustive: true,
                elements_checked: self.parent.order(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = self.parent.order();
        for _ in 0..samples {
            let x = self.parent.element_at(rng.gen_range(0..order));
            let y = self.parent.element_at(rng.gen_range(0..order));
            self.check_pair(&x, &y)?;
        }
        Ok(IsomorphismCheck {
            exhaustive: false,
            elements_checked: samples as u64,
        })
    }

    fn check_pair(&self, x: &Element, y: &Element) -> std::result::Result<(), String> {
        let fx = self.forward(x);
        let fy = self.forward(y);
        for (f, c) in self.factors.iter().zip(&fx) {
            if !f.contains(c) {
                return Err(format!("forward({x}) leaves factor with unit {}", f.unit()));
            }
        }
        let back = self.backward(&fx).map_err(|e| e.to_string())?;
        if back != *x {
            return Err(format!("backward(forward({x})) = {back}"));
        }
        let sum = self.forward(&(x + y));
        let prod = self.forward(&(x * y));
        for i in 0..fx.len() {
            if sum[i] != &fx[i] + &fy[i] {
                return Err(format!("forward not additive at {x}, {y}"));
            }
            if prod[i] != &fx[i] * &fy[i] {
                return Err(format!("forward not multiplicative at {x}, {y}"));
            }
        }
        Ok(())
    }

    /// `m_j·forward(b_j) = 0` and multiplicativity on pairs of generators.
    fn verify_generators(&self) -> std::result::Result<(), String> {
        let gens = self.parent.unit_vectors();
        let images: Vec<Vec<Element>> = gens.iter().map(|b| self.forward(b)).collect();
        for ((b, img), &m) in gens.iter().zip(&images).zip(self.parent.moduli()) {
            let scalar = self.parent.from_nat(m as u64);
            if img.iter().any(|c| !(&scalar * c).is_zero()) {
                return Err(format!("forward({b}) does not have additive order dividing {m}"));
            }
        }
        for (b, fb) in gens.iter().zip(&images) {
            for (c, fc) in gens.iter().zip(&images) {
                let prod = self.forward(&(b * c));
                if prod.iter().zip(fb.iter().zip(fc)).any(|(p, (u, v))| *p != u * v) {
                    return Err(format!("forward not multiplicative at {b}, {c}"));
                }
            }
        }
        Ok(())
    }

    /// Walks every `x` in enumeration order, keeping `Σ x_j·forward(b_j)`
    /// incrementally: each odometer step adds the image of every changed digit.
    fn verify_every_element(&self) -> std::result::Result<(), String> {
        let ring = &self.parent;
        let w = ring.width();
        let s = self.factors.len();
        let images: Vec<Vec<Vec<u32>>> = ring
            .unit_vectors()
            .iter()
            .map(|b| self.forward(b).iter().map(|c| c.digits().to_vec()).collect())
            .collect();
        let mut x = vec![0u32; w];
        let mut prev = vec![0u32; w];
        let mut expansion = vec![vec![0u32; w]; s];
        let mut fx = vec![0u32; w];
        let mut again = vec![0u32; w];
        let mut sum = vec![0u32; w];
        loop {
            sum.fill(0);
            for (i, factor) in self.factors.iter().enumerate() {
                let e = factor.unit().digits();
                ring.raw_mul(e, &x, &mut fx);
                ring.raw_mul(e, &fx, &mut again);
                if again != fx {
                    return Err(format!("forward({}) leaves factor with unit {e:?}", ring.wrap(x)));
                }
                if fx != expansion[i] {
                    return Err(format!("forward not additive at {}", ring.wrap(x)));
                }
                ring.raw_add_assign(&mut sum, &fx);
            }
            if sum != x {
                return Err(format!("backward(forward({})) = {}", ring.wrap(x.clone()), ring.wrap(sum)));
            }
            prev.copy_from_slice(&x);
            if !ring.advance(&mut x) {
                return Ok(());
            }
            for j in (0..w).filter(|&j| x[j] != prev[j]) {
                for (acc, img) in expansion.iter_mut().zip(&images[j]) {
                    ring.raw_add_assign(acc, img);
                }
            }
        }
    }
}

/// Splits along idempotents until every factor is connected.
pub fn decompose(ring: &Ring, budget: &SearchBudget) -> Result<FactorDecomposition> {
    decompose_along(ring, &idempotents(ring, budget)?)
}

/// `decompose` given the full idempotent list of `ring` in enumeration order.
pub(crate) fn decompose_along(ring: &Ring, idem: &[Element]) -> Result<FactorDecomposition> {
    let mut pending = vec![FactorRing::new(ring, ring.one())?];
    let mut done = Vec::new();
    while let Some(factor) = pending.pop() {
        let next = idem
            .iter()
            .find(|i| !i.is_zero() && **i != factor.unit && (&factor.unit * *i) == **i);
        match next {
            None => done.push(factor),
            Some(i) => {
                let (a, b) = factor.split(i)?;
                pending.push(b);
                pending.push(a);
            }
        }
    }
    done.sort_by_key(|f| (f.order(), f.unit.index()));
    Ok(FactorDecomposition {
        parent: ring.clone(),
        factors: done,
    })
}
