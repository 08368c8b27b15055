//! Compiled finite rings and their elements.
//!
//! Every element is stored as a flat vector of digits, one per cyclic summand
//! of the additive group: `Zmod` contributes one digit, `Quot` concatenates the
//! digit blocks of its `d` coefficients (constant term first) and `Prod`
//! concatenates its factors. Addition is digitwise; multiplication walks the
//! descriptor tree.
//!
//! Enumeration order is lexicographic in the normal form with the highest
//! coefficient of a quotient and the first factor of a product most
//! significant, so `F2[x]/(x^2)` enumerates as `0, 1, x, 1+x`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::budget::SearchBudget;
use crate::descriptor::{RingDescriptor, Value};
use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::parse::{self, syntax, Literal};

#[derive(Debug)]
enum Node {
    Zmod(Modulus),
    Quot(Box<QuotNode>),
    Prod(Vec<Part>),
}

#[derive(Debug)]
struct QuotNode {
    base: Node,
    base_moduli: Vec<u32>,
    base_one: Vec<u32>,
    base_width: usize,
    degree: usize,
    /// `-g_0, ..., -g_{d-1}` as consecutive digit blocks.
    neg_low: Vec<u32>,
    /// Products may be accumulated unreduced (`2d·n² < 2^64` over a `Zmod` base).
    lazy: bool,
}

#[derive(Debug)]
struct Part {
    offset: usize,
    width: usize,
    node: Node,
}

struct Compiled {
    node: Node,
    moduli: Vec<u32>,
    weights: Vec<u64>,
    order: u64,
}

fn compile(desc: &RingDescriptor) -> Result<Compiled> {
    match desc {
        RingDescriptor::Zmod(n) => {
            if *n < 2 {
                return Err(Error::ModulusTooSmall(*n));
            }
            let m = u32::try_from(*n).map_err(|_| Error::ModulusTooLarge(*n))?;
            Ok(Compiled {
                node: Node::Zmod(Modulus::new(u64::from(m))),
                moduli: vec![m],
                weights: vec![1],
                order: *n,
            })
        }
        RingDescriptor::Quot { base, modulus } => {
            let b = compile(base)?;
            if modulus.len() < 2 {
                return Err(Error::DegreeTooSmall);
            }
            let degree = modulus.len() - 1;
            let base_width = b.moduli.len();
            let base_one = one_digits(&b.node, base_width);
            let mut coeffs = Vec::with_capacity(modulus.len());
            for v in modulus {
                coeffs.push(value_to_digits(&b.node, &b.moduli, v, base)?);
            }
            if coeffs[degree] != base_one {
                return Err(Error::NonMonic);
            }
            let mut neg_low = Vec::with_capacity(degree * base_width);
            for c in &coeffs[..degree] {
                for (digit, &m) in c.iter().zip(&b.moduli) {
                    neg_low.push(if *digit == 0 { 0 } else { m - digit });
                }
            }
            let order = b
                .order
                .checked_pow(degree as u32)
                .ok_or(Error::OrderOverflow)?;
            let mut moduli = Vec::with_capacity(degree * base_width);
            let mut weights = Vec::with_capacity(degree * base_width);
            let mut place = 1u64;
            for j in 0..degree {
                moduli.extend_from_slice(&b.moduli);
                weights.extend(b.weights.iter().map(|w| w * place));
                if j + 1 < degree {
                    place *= b.order;
                }
            }
            let lazy = match b.node {
                Node::Zmod(n) => {
                    let n = n.get() as u128;
                    2 * degree as u128 * n * n < 1u128 << 64
                }
                _ => false,
            };
            Ok(Compiled {
                node: Node::Quot(Box::new(QuotNode {
                    base: b.node,
                    base_moduli: b.moduli,
                    base_one,
                    base_width,
                    degree,
                    neg_low,
                    lazy,
                })),
                moduli,
                weights,
                order,
            })
        }
        RingDescriptor::Prod(factors) => {
            if factors.is_empty() {
                return Err(Error::EmptyProduct);
            }
            let compiled = factors.iter().map(compile).collect::<Result<Vec<_>>>()?;
            let order = compiled.iter().try_fold(1u64, |acc, c| {
                acc.checked_mul(c.order).ok_or(Error::OrderOverflow)
            })?;
            let mut parts = Vec::with_capacity(compiled.len());
            let mut moduli = Vec::new();
            let mut weights = Vec::new();
            let mut place = order;
            for c in compiled {
                place /= c.order;
                let offset = moduli.len();
                moduli.extend_from_slice(&c.moduli);
                weights.extend(c.weights.iter().map(|w| w * place));
                parts.push(Part {
                    offset,
                    width: c.moduli.len(),
                    node: c.node,
                });
            }
            Ok(Compiled {
                node: Node::Prod(parts),
                moduli,
                weights,
                order,
            })
        }
    }
}

fn one_digits(node: &Node, width: usize) -> Vec<u32> {
    let mut out = vec![0; width];
    write_nat(node, 1, &mut out);
    out
}

/// Writes the image of `k` under `Z -> R`.
fn write_nat(node: &Node, k: u64, out: &mut [u32]) {
    match node {
        Node::Zmod(n) => out[0] = n.reduce(k) as u32,
        Node::Quot(q) => {
            out.fill(0);
            write_nat(&q.base, k, &mut out[..q.base_width]);
        }
        Node::Prod(parts) => {
            for p in parts {
                write_nat(&p.node, k, &mut out[p.offset..p.offset + p.width]);
            }
        }
    }
}

fn add_digits(moduli: &[u32], a: &[u32], b: &[u32], out: &mut [u32]) {
    for i in 0..out.len() {
        let s = u64::from(a[i]) + u64::from(b[i]);
        let m = u64::from(moduli[i]);
        out[i] = if s >= m { (s - m) as u32 } else { s as u32 };
    }
}

fn add_assign_digits(moduli: &[u32], acc: &mut [u32], b: &[u32]) {
    for i in 0..acc.len() {
        let s = u64::from(acc[i]) + u64::from(b[i]);
        let m = u64::from(moduli[i]);
        acc[i] = if s >= m { (s - m) as u32 } else { s as u32 };
    }
}

fn sub_digits(moduli: &[u32], a: &[u32], b: &[u32], out: &mut [u32]) {
    for i in 0..out.len() {
        out[i] = if a[i] >= b[i] {
            a[i] - b[i]
        } else {
            ((u64::from(a[i]) + u64::from(moduli[i])) - u64::from(b[i])) as u32
        };
    }
}

fn mul_node(node: &Node, a: &[u32], b: &[u32], out: &mut [u32]) {
    match node {
        Node::Zmod(n) => {
            out[0] = n.mul(u64::from(a[0]), u64::from(b[0])) as u32;
        }
        Node::Prod(parts) => {
            for p in parts {
                let r = p.offset..p.offset + p.width;
                if a[r.clone()].iter().all(|&d| d == 0) || b[r.clone()].iter().all(|&d| d == 0) {
                    out[r].fill(0);
                } else {
                    mul_node(&p.node, &a[r.clone()], &b[r.clone()], &mut out[r]);
                }
            }
        }
        Node::Quot(q) => match q.base {
            Node::Zmod(n) if q.lazy => mul_quot_zmod_lazy(q, n, a, b, out),
            Node::Zmod(n) => mul_quot_zmod(q, n, a, b, out),
            _ => mul_quot_generic(q, a, b, out),
        },
    }
}

/// Schoolbook product with one reduction per coefficient.
fn mul_quot_zmod_lazy(q: &QuotNode, n: Modulus, a: &[u32], b: &[u32], out: &mut [u32]) {
    match q.degree {
        0..=4 => lazy_product::<7>(q, n, a, b, out),
        5..=8 => lazy_product::<15>(q, n, a, b, out),
        9..=16 => lazy_product::<31>(q, n, a, b, out),
        _ => {
            let mut tmp = vec![0u64; 2 * q.degree - 1];
            lazy_product_into(q, n, a, b, out, &mut tmp);
        }
    }
}

#[inline(always)]
fn lazy_product<const L: usize>(q: &QuotNode, n: Modulus, a: &[u32], b: &[u32], out: &mut [u32]) {
    let mut tmp = [0u64; L];
    lazy_product_into(q, n, a, b, out, &mut tmp[..2 * q.degree - 1]);
}

#[inline(always)]
fn lazy_product_into(q: &QuotNode, n: Modulus, a: &[u32], b: &[u32], out: &mut [u32], tmp: &mut [u64]) {
    let d = q.degree;
    let b = &b[..d];
    for (i, &ai) in a[..d].iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = u64::from(ai);
        for (t, &bj) in tmp[i..i + d].iter_mut().zip(b) {
            *t += ai * u64::from(bj);
        }
    }
    let neg = &q.neg_low[..d];
    for k in (d..2 * d - 1).rev() {
        let c = n.reduce(tmp[k]);
        if c == 0 {
            continue;
        }
        for (t, &g) in tmp[k - d..k].iter_mut().zip(neg) {
            *t += c * u64::from(g);
        }
    }
    for (o, t) in out[..d].iter_mut().zip(tmp.iter()) {
        *o = n.reduce(*t) as u32;
    }
}

fn mul_quot_zmod(q: &QuotNode, n: Modulus, a: &[u32], b: &[u32], out: &mut [u32]) {
    let d = q.degree;
    let mut tmp: SmallVec<[u64; 32]> = SmallVec::from_elem(0, 2 * d - 1);
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = u64::from(ai);
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                tmp[i + j] = n.reduce(tmp[i + j] + n.mul(ai, u64::from(bj)));
            }
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = tmp[k];
        if c == 0 {
            continue;
        }
        for j in 0..d {
            let g = u64::from(q.neg_low[j]);
            if g != 0 {
                tmp[k - d + j] = n.reduce(tmp[k - d + j] + n.mul(c, g));
            }
        }
    }
    for (o, t) in out.iter_mut().zip(tmp.iter()) {
        *o = *t as u32;
    }
}

fn mul_quot_generic(q: &QuotNode, a: &[u32], b: &[u32], out: &mut [u32]) {
    let d = q.degree;
    let w = q.base_width;
    let mut tmp = vec![0u32; (2 * d - 1) * w];
    let mut scratch = vec![0u32; w];
    for i in 0..d {
        let ai = &a[i * w..(i + 1) * w];
        if ai.iter().all(|&x| x == 0) {
            continue;
        }
        for j in 0..d {
            let bj = &b[j * w..(j + 1) * w];
            mul_node(&q.base, ai, bj, &mut scratch);
            add_assign_digits(&q.base_moduli, &mut tmp[(i + j) * w..(i + j + 1) * w], &scratch);
        }
    }
    reduce_generic(q, &mut tmp, &mut scratch);
    out.copy_from_slice(&tmp[..d * w]);
}

/// Reduces a polynomial of any length (digit blocks) in place modulo the monic modulus.
fn reduce_generic(q: &QuotNode, tmp: &mut [u32], scratch: &mut [u32]) {
    let d = q.degree;
    let w = q.base_width;
    let len = tmp.len() / w;
    for k in (d..len).rev() {
        let c: SmallVec<[u32; 16]> = SmallVec::from_slice(&tmp[k * w..(k + 1) * w]);
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        for j in 0..d {
            mul_node(&q.base, &c, &q.neg_low[j * w..(j + 1) * w], scratch);
            let at = k - d + j;
            add_assign_digits(&q.base_moduli, &mut tmp[at * w..(at + 1) * w], scratch);
        }
        tmp[k * w..(k + 1) * w].fill(0);
    }
}

fn value_to_digits(node: &Node, moduli: &[u32], value: &Value, desc: &RingDescriptor) -> Result<Vec<u32>> {
    let mut out = vec![0; moduli.len()];
    write_value(node, value, desc, &mut out)?;
    Ok(out)
}

fn write_value(node: &Node, value: &Value, desc: &RingDescriptor, out: &mut [u32]) -> Result<()> {
    let bad = |message: String| Error::InvalidValue {
        ring: desc.to_string(),
        message,
    };
    match (node, value, desc) {
        (Node::Zmod(n), Value::Residue(k), _) => {
            if *k >= n.get() {
                return Err(bad(format!("residue {k} is not reduced modulo {}", n.get())));
            }
            out[0] = *k as u32;
            Ok(())
        }
        (Node::Quot(q), Value::Coeffs(cs), RingDescriptor::Quot { base, .. }) => {
            if cs.len() != q.degree {
                return Err(bad(format!(
                    "expected {} coefficients, got {}",
                    q.degree,
                    cs.len()
                )));
            }
            let w = q.base_width;
            for (j, c) in cs.iter().enumerate() {
                write_value(&q.base, c, base, &mut out[j * w..(j + 1) * w])?;
            }
            Ok(())
        }
        (Node::Prod(parts), Value::Tuple(vs), RingDescriptor::Prod(factors)) => {
            if vs.len() != parts.len() {
                return Err(bad(format!(
                    "expected {} components, got {}",
                    parts.len(),
                    vs.len()
                )));
            }
            for ((p, v), f) in parts.iter().zip(vs).zip(factors) {
                write_value(&p.node, v, f, &mut out[p.offset..p.offset + p.width])?;
            }
            Ok(())
        }
        _ => Err(bad(format!("value {value} has the wrong shape"))),
    }
}

fn read_value(node: &Node, digits: &[u32]) -> Value {
    match node {
        Node::Zmod(_) => Value::Residue(u64::from(digits[0])),
        Node::Quot(q) => Value::Coeffs(
            digits
                .chunks(q.base_width)
                .map(|c| read_value(&q.base, c))
                .collect(),
        ),
        Node::Prod(parts) => Value::Tuple(
            parts
                .iter()
                .map(|p| read_value(&p.node, &digits[p.offset..p.offset + p.width]))
                .collect(),
        ),
    }
}

fn write_literal(node: &Node, moduli: &[u32], lit: &Literal, out: &mut [u32]) -> Result<()> {
    match (node, lit) {
        (_, Literal::Nat { value, .. }) => {
            write_nat(node, *value, out);
            Ok(())
        }
        (Node::Quot(q), Literal::Var { .. }) => {
            let w = q.base_width;
            let mut poly = vec![0u32; q.degree.max(2) * w];
            poly[w..2 * w].copy_from_slice(&q.base_one);
            let mut scratch = vec![0u32; w];
            reduce_generic(q, &mut poly, &mut scratch);
            out.copy_from_slice(&poly[..q.degree * w]);
            Ok(())
        }
        (Node::Quot(q), Literal::List { items, .. }) => {
            let w = q.base_width;
            let len = items.len().max(q.degree);
            let mut poly = vec![0u32; len * w];
            for (j, item) in items.iter().enumerate() {
                write_literal(&q.base, &q.base_moduli, item, &mut poly[j * w..(j + 1) * w])?;
            }
            let mut scratch = vec![0u32; w];
            reduce_generic(q, &mut poly, &mut scratch);
            out.copy_from_slice(&poly[..q.degree * w]);
            Ok(())
        }
        (Node::Prod(parts), Literal::Tuple { items, pos }) => {
            if items.len() != parts.len() {
                return Err(syntax(
                    *pos,
                    format!("expected {} components, got {}", parts.len(), items.len()),
                ));
            }
            for (p, item) in parts.iter().zip(items) {
                let r = p.offset..p.offset + p.width;
                write_literal(&p.node, &moduli[r.clone()], item, &mut out[r])?;
            }
            Ok(())
        }
        (Node::Zmod(_), other) => Err(syntax(other.pos(), "expected a natural number")),
        (Node::Quot(_), other) => Err(syntax(other.pos(), "expected a coefficient list")),
        (Node::Prod(_), other) => Err(syntax(other.pos(), "expected a tuple")),
    }
}

struct RingInner {
    descriptor: RingDescriptor,
    canonical: String,
    node: Node,
    moduli: Vec<u32>,
    weights: Vec<u64>,
    /// Digit positions from most to least significant.
    significance: Vec<usize>,
    order: u64,
    one: Vec<u32>,
}

/// A compiled finite ring. Cheap to clone; all clones share one arena.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl Ring {
    /// Validates a descriptor and compiles its arithmetic.
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        let c = compile(&descriptor)?;
        let mut significance: Vec<usize> = (0..c.moduli.len()).collect();
        significance.sort_by(|&a, &b| c.weights[b].cmp(&c.weights[a]));
        let one = one_digits(&c.node, c.moduli.len());
        Ok(Self {
            inner: Arc::new(RingInner {
                canonical: descriptor.to_string(),
                descriptor,
                node: c.node,
                moduli: c.moduli,
                weights: c.weights,
                significance,
                order: c.order,
                one,
            }),
        })
    }

    pub fn parse(text: &str, budget: &SearchBudget) -> Result<Self> {
        Self::new(parse::parse_ring_spec(text, budget)?)
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.inner.descriptor
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// Number of cyclic digits in the additive group decomposition.
    pub fn width(&self) -> usize {
        self.inner.moduli.len()
    }

    pub fn moduli(&self) -> &[u32] {
        &self.inner.moduli
    }

    pub(crate) fn significance(&self) -> &[usize] {
        &self.inner.significance
    }

    pub fn same_ring(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.descriptor == other.inner.descriptor
    }

    pub(crate) fn wrap(&self, digits: Vec<u32>) -> Element {
        debug_assert_eq!(digits.len(), self.width());
        Element {
            ring: self.clone(),
            digits: digits.into_boxed_slice(),
        }
    }

    pub fn zero(&self) -> Element {
        self.wrap(vec![0; self.width()])
    }

    pub fn one(&self) -> Element {
        self.wrap(self.inner.one.clone())
    }

    /// Image of `k` under the canonical map `Z -> R`.
    pub fn from_nat(&self, k: u64) -> Element {
        let mut out = vec![0; self.width()];
        write_nat(&self.inner.node, k, &mut out);
        self.wrap(out)
    }

    /// The adjoined variable when the outermost layer is a quotient.
    pub fn variable(&self) -> Option<Element> {
        match self.inner.node {
            Node::Quot(_) => Some(
                self.element_from_literal(&Literal::Var { pos: 0 })
                    .expect("variable of a quotient ring"),
            ),
            _ => None,
        }
    }

    pub fn element(&self, value: &Value) -> Result<Element> {
        let digits = value_to_digits(&self.inner.node, &self.inner.moduli, value, &self.inner.descriptor)?;
        Ok(self.wrap(digits))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        self.element_from_literal(&parse::parse_literal(text)?)
    }

    pub(crate) fn element_from_literal(&self, lit: &Literal) -> Result<Element> {
        let mut out = vec![0; self.width()];
        write_literal(&self.inner.node, &self.inner.moduli, lit, &mut out)?;
        Ok(self.wrap(out))
    }

    /// Element at position `index` of the enumeration order.
    pub fn element_at(&self, index: u64) -> Element {
        assert!(index < self.order(), "index {index} out of range");
        let mut digits = vec![0; self.width()];
        self.decode_index(index, &mut digits);
        self.wrap(digits)
    }

    pub fn index_of(&self, e: &Element) -> u64 {
        self.encode_index(&e.digits)
    }

    pub(crate) fn decode_index(&self, index: u64, out: &mut [u32]) {
        for ((o, &w), &m) in out.iter_mut().zip(&self.inner.weights).zip(&self.inner.moduli) {
            *o = ((index / w) % u64::from(m)) as u32;
        }
    }

    pub(crate) fn encode_index(&self, digits: &[u32]) -> u64 {
        digits
            .iter()
            .zip(&self.inner.weights)
            .map(|(&d, &w)| u64::from(d) * w)
            .sum()
    }

    /// Steps `digits` to the next element in enumeration order; false after the last.
    pub(crate) fn advance(&self, digits: &mut [u32]) -> bool {
        for &i in self.inner.significance.iter().rev() {
            digits[i] += 1;
            if digits[i] < self.inner.moduli[i] {
                return true;
            }
            digits[i] = 0;
        }
        false
    }

    /// All elements in enumeration order. Callers check budgets.
    pub fn elements(&self) -> Elements {
        Elements {
            ring: self.clone(),
            next: Some(vec![0; self.width()]),
        }
    }

    /// Like `elements`, after checking the order against the budget.
    pub fn enumerate(&self, budget: &SearchBudget) -> Result<Elements> {
        budget.check_order("enumeration", self.order())?;
        Ok(self.elements())
    }

    /// The elements with a single digit equal to one; they generate `(R, +)`.
    pub fn unit_vectors(&self) -> Vec<Element> {
        (0..self.width())
            .map(|i| {
                let mut d = vec![0; self.width()];
                d[i] = 1;
                self.wrap(d)
            })
            .collect()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.same_ring(&e.ring)
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.inner.canonical.clone()))
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let mut out = vec![0; self.width()];
        self.raw_add(&a.digits, &b.digits, &mut out);
        Ok(self.wrap(out))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let mut out = vec![0; self.width()];
        self.raw_sub(&a.digits, &b.digits, &mut out);
        Ok(self.wrap(out))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let mut out = vec![0; self.width()];
        self.raw_mul(&a.digits, &b.digits, &mut out);
        Ok(self.wrap(out))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        let zero = vec![0; self.width()];
        let mut out = vec![0; self.width()];
        self.raw_sub(&zero, &a.digits, &mut out);
        Ok(self.wrap(out))
    }

    pub(crate) fn raw_add(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        add_digits(&self.inner.moduli, a, b, out);
    }

    pub(crate) fn raw_add_assign(&self, acc: &mut [u32], b: &[u32]) {
        add_assign_digits(&self.inner.moduli, acc, b);
    }

    pub(crate) fn raw_sub(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        sub_digits(&self.inner.moduli, a, b, out);
    }

    pub(crate) fn raw_mul(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        mul_node(&self.inner.node, a, b, out);
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.inner.canonical)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner.canonical)
    }
}

/// Iterator over a ring in enumeration order.
pub struct Elements {
    ring: Ring,
    next: Option<Vec<u32>>,
}

impl Iterator for Elements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if self.ring.advance(&mut following) {
            self.next = Some(following);
        }
        Some(self.ring.wrap(current))
    }
}

/// A value of a specific ring in canonical (fully reduced) form.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    digits: Box<[u32]>,
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn value(&self) -> Value {
        read_value(&self.ring.inner.node, &self.digits)
    }

    pub fn index(&self) -> u64 {
        self.ring.encode_index(&self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        *self.digits == *self.ring.inner.one
    }

    pub fn square(&self) -> Element {
        self * self
    }

    pub fn pow(&self, mut exp: u64) -> Element {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    pub fn is_idempotent(&self) -> bool {
        self.square() == *self
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.digits == other.digits && self.ring.same_ring(&other.ring)
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.digits.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumeration order; elements of different rings compare by digits only.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.value(), self.ring)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $ring_method:ident) => {
        impl ops::$trait<&Element> for &Element {
            type Output = Element;

            /// Panics when the operands live in different rings.
            fn $method(self, rhs: &Element) -> Element {
                match self.ring.$ring_method(self, rhs) {
                    Ok(e) => e,
                    Err(err) => panic!("{err}"),
                }
            }
        }

        impl ops::$trait<Element> for Element {
            type Output = Element;

            fn $method(self, rhs: Element) -> Element {
                ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl ops::Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.ring.neg(self).expect("element of its own ring")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic in `ring`.
pub fn arith(ring: &Ring, op: ArithOp, a: &Element, b: &Element) -> Result<Element> {
    match op {
        ArithOp::Add => ring.add(a, b),
        ArithOp::Sub => ring.sub(a, b),
        ArithOp::Mul => ring.mul(a, b),
    }
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
    fn zmod_product_vanishes() {
        let r = ring("Z/6");
        let p = arith(&r, ArithOp::Mul, &el(&r, "3"), &el(&r, "4")).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn dual_number_squares_to_zero() {
        let r = ring("Q(Z/2,[0,0,1])");
        let x = r.variable().unwrap();
        assert_eq!(x.to_string(), "[0,1]");
        assert!((&x * &x).is_zero());
        // independent table: (a + bx)(c + dx) = ac + (ad + bc)x over F2
        for a in 0..2u64 {
            for b in 0..2u64 {
                for c in 0..2u64 {
                    for d in 0..2u64 {
                        let lhs = &el(&r, &format!("[{a},{b}]")) * &el(&r, &format!("[{c},{d}]"));
                        let want = format!("[{},{}]", (a * c) % 2, (a * d + b * c) % 2);
                        assert_eq!(lhs.to_string(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn gf9_variable_squares_to_minus_one() {
        let r = ring("Q(Z/3,[1,0,1])");
        let x = el(&r, "x");
        assert_eq!(&x * &x, el(&r, "2"));
        // (a + bx)(c + dx) = (ac - bd) + (ad + bc)x when x^2 = -1
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    for d in 0..3i64 {
                        let lhs = &el(&r, &format!("[{a},{b}]")) * &el(&r, &format!("[{c},{d}]"));
                        let want = format!(
                            "[{},{}]",
                            (a * c - b * d).rem_euclid(3),
                            (a * d + b * c).rem_euclid(3)
                        );
                        assert_eq!(lhs.to_string(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_orders() {
        let z4: Vec<String> = ring("Z/4").elements().map(|e| e.to_string()).collect();
        assert_eq!(z4, ["0", "1", "2", "3"]);
        let dual: Vec<String> = ring("Q(Z/2,[0,0,1])").elements().map(|e| e.to_string()).collect();
        assert_eq!(dual, ["[0,0]", "[1,0]", "[0,1]", "[1,1]"]);
        let p: Vec<String> = ring("P(Z/2,Z/3)").elements().map(|e| e.to_string()).collect();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], "(0,0)");
        assert_eq!(p[1], "(0,1)");
        assert_eq!(p[3], "(1,0)");
    }

    #[test]
    fn index_round_trip_matches_enumeration() {
        for text in ["Z/7", "P(Z/4,Q(Z/3,[1,0,1]))", "S(Q(Z/2,[0,0,1]),3)", "Q(P(Z/2,Z/3),[(1,2),(0,0),(1,1)])"] {
            let r = ring(text);
            let all: Vec<Element> = r.elements().collect();
            assert_eq!(all.len() as u64, r.order());
            for (i, e) in all.iter().enumerate() {
                assert_eq!(e.index(), i as u64);
                assert_eq!(&r.element_at(i as u64), e);
                assert_eq!(r.element(&e.value()).unwrap(), *e);
            }
        }
    }

    #[test]
    fn literals_reduce() {
        let r = ring("Q(Z/3,[1,0,1])");
        assert_eq!(el(&r, "[0,0,1]"), el(&r, "2"));
        assert_eq!(el(&r, "7"), el(&r, "1"));
        let linear = ring("Q(Z/5,[2,1])");
        assert_eq!(el(&linear, "x"), el(&linear, "3"));
        let nested = ring("S(Q(Z/2,[0,0,1]),3)");
        assert_eq!(el(&nested, "[x,1]").to_string(), "[[0,1],[1,0],[0,0]]");
        assert!(matches!(r.parse_element("(1,2)"), Err(Error::Syntax { .. })));
        assert!(matches!(ring("P(Z/2,Z/3)").parse_element("(1)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn strict_values_are_validated() {
        let r = ring("P(Z/2,Z/3)");
        assert!(r.element(&Value::Tuple(vec![Value::Residue(1), Value::Residue(3)])).is_err());
        assert!(r.element(&Value::Residue(1)).is_err());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring("Z/6");
        let b = ring("Z/7");
        assert!(matches!(
            arith(&a, ArithOp::Add, &a.one(), &b.one()),
            Err(Error::RingMismatch(_))
        ));
        // structurally equal descriptors are the same ring
        let a2 = ring("Z/6");
        assert_eq!(arith(&a, ArithOp::Add, &a.one(), &a2.one()).unwrap(), a.from_nat(2));
    }

    #[test]
    fn generic_quotient_path_agrees_with_flat_product() {
        // Q(P(Z/2,Z/3), x^2 + 1) is isomorphic to P(Z/2[x]/(x^2+1), Z/3[x]/(x^2+1)) componentwise
        let r = ring("Q(P(Z/2,Z/3),[(1,1),(0,0),(1,1)])");
        let a = ring("Q(Z/2,[1,0,1])");
        let b = ring("Q(Z/3,[1,0,1])");
        let split = |e: &Element| match e.value() {
            Value::Coeffs(cs) => {
                let comp = |k: usize| {
                    Value::Coeffs(
                        cs.iter()
                            .map(|c| match c {
                                Value::Tuple(t) => t[k].clone(),
                                _ => unreachable!(),
                            })
                            .collect(),
                    )
                };
                (a.element(&comp(0)).unwrap(), b.element(&comp(1)).unwrap())
            }
            _ => unreachable!(),
        };
        let all: Vec<Element> = r.elements().collect();
        for x in &all {
            for y in &all {
                let (x0, x1) = split(x);
                let (y0, y1) = split(y);
                let (p0, p1) = split(&(x * y));
                assert_eq!(p0, &x0 * &y0);
                assert_eq!(p1, &x1 * &y1);
            }
        }
    }
}
