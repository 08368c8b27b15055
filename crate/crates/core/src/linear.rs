//! Echelon forms for subgroups of finite abelian groups `Z/m_0 ⊕ ... ⊕ Z/m_{k-1}`.
//!
//! A subgroup is handled as the integer lattice spanned by its generators plus
//! the relations `m_p e_p`. Elimination uses unimodular 2x2 steps built from the
//! extended gcd, so after `reduce` every coordinate `p` owns one pivot row with
//! an entry `d_p | m_p` at `p` and zeros before it. Rows may carry a tracking
//! block recording which combination of the generators produced them; tracking
//! entries live in their own cyclic groups.

use crate::modulus::Modulus;

pub(crate) struct Echelon {
    /// Moduli of the target coordinates followed by the tracking coordinates.
    moduli: Vec<Modulus>,
    k: usize,
    stride: usize,
    rows: Vec<u64>,
    n_rows: usize,
    n_generators: usize,
    pivot_of: Vec<usize>,
    is_pivot: Vec<bool>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

#[inline]
fn to_mod(x: i64, m: Modulus) -> u64 {
    if x >= 0 {
        m.reduce(x as u64)
    } else {
        let r = m.reduce(x.unsigned_abs());
        if r == 0 { 0 } else { m.get() - r }
    }
}


impl Echelon {
    pub(crate) fn new(target_moduli: &[u64], track_moduli: &[u64]) -> Self {
        let moduli: Vec<Modulus> = target_moduli
            .iter()
            .chain(track_moduli)
            .map(|&m| Modulus::new(m))
            .collect();
        let k = target_moduli.len();
        Self {
            stride: moduli.len(),
            moduli,
            k,
            rows: Vec::new(),
            n_rows: 0,
            n_generators: 0,
            pivot_of: vec![usize::MAX; k],
            is_pivot: Vec::new(),
        }
    }

    fn tracking(&self) -> usize {
        self.stride - self.k
    }

    pub(crate) fn clear(&mut self) {
        self.rows.clear();
        self.n_rows = 0;
        self.n_generators = 0;
    }

    /// Adds a generator given by its target coordinates (already reduced).
    pub(crate) fn push_generator<I: IntoIterator<Item = u64>>(&mut self, target: I) {
        let start = self.rows.len();
        self.rows.extend(target);
        debug_assert_eq!(self.rows.len() - start, self.k);
        self.rows.resize(start + self.stride, 0);
        if self.tracking() > 0 {
            assert!(self.n_generators < self.tracking(), "more generators than tracking slots");
            self.rows[start + self.k + self.n_generators] = 1;
        }
        self.n_generators += 1;
        self.n_rows += 1;
    }

    pub(crate) fn reduce(&mut self) {
        for p in 0..self.k {
            let start = self.rows.len();
            self.rows.resize(start + self.stride, 0);
            self.rows[start + p] = self.moduli[p].get();
            self.n_rows += 1;
        }
        self.is_pivot.clear();
        self.is_pivot.resize(self.n_rows, false);
        for p in 0..self.k {
            let mut pivot = usize::MAX;
            for r in 0..self.n_rows {
                if self.is_pivot[r] || self.rows[r * self.stride + p] == 0 {
                    continue;
                }
                if pivot == usize::MAX {
                    pivot = r;
                } else {
                    self.combine(pivot, r, p);
                }
            }
            debug_assert!(pivot != usize::MAX, "relation row guarantees a pivot");
            self.is_pivot[pivot] = true;
            self.pivot_of[p] = pivot;
        }
    }

    /// Unimodular step on rows `u < v` zeroing column `p` of `v`.
    fn combine(&mut self, u: usize, v: usize, p: usize) {
        let stride = self.stride;
        let (head, tail) = self.rows.split_at_mut(v * stride);
        let ru = &mut head[u * stride..(u + 1) * stride];
        let rv = &mut tail[..stride];
        let x = ru[p] as i64;
        let y = rv[p] as i64;
        if y % x == 0 {
            // v -= (y/x) u
            let q = (y / x) as u64;
            rv[p] = 0;
            for c in p + 1..stride {
                if ru[c] != 0 {
                    let m = self.moduli[c];
                    let sub = m.mul(m.reduce(q), ru[c]);
                    rv[c] = if rv[c] >= sub { rv[c] - sub } else { rv[c] + m.get() - sub };
                }
            }
            return;
        }
        let (g, s, t) = ext_gcd(x, y);
        let a = y / g;
        let b = x / g;
        ru[p] = g as u64;
        rv[p] = 0;
        for c in p + 1..stride {
            let (uc, vc) = (ru[c], rv[c]);
            if uc == 0 && vc == 0 {
                continue;
            }
            let m = self.moduli[c];
            let nu = m.reduce(m.mul(to_mod(s, m), uc) + m.mul(to_mod(t, m), vc));
            let nv = m.reduce(m.mul(to_mod(a, m), uc) + m.mul(to_mod(-b, m), vc));
            ru[c] = nu;
            rv[c] = nv;
        }
    }

    /// Reduces `target` by the pivots; returns the tracking combination when it lies in the span.
    pub(crate) fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let mut residue = target.to_vec();
        let mut comb = vec![0u64; self.tracking()];
        if self.sweep(&mut residue, Some(&mut comb)) {
            Some(comb)
        } else {
            None
        }
    }

    pub(crate) fn contains(&self, target: &mut [u64]) -> bool {
        self.sweep(target, None)
    }

    fn sweep(&self, residue: &mut [u64], mut comb: Option<&mut Vec<u64>>) -> bool {
        for p in 0..self.k {
            let fp = residue[p];
            if fp == 0 {
                continue;
            }
            let row = &self.rows[self.pivot_of[p] * self.stride..][..self.stride];
            let d = row[p];
            if !fp.is_multiple_of(d) {
                return false;
            }
            let q = fp / d;
            residue[p] = 0;
            for c in p + 1..self.k {
                if row[c] != 0 {
                    let m = self.moduli[c];
                    let sub = m.mul(m.reduce(q), row[c]);
                    residue[c] = if residue[c] >= sub { residue[c] - sub } else { residue[c] + m.get() - sub };
                }
            }
            if let Some(comb) = comb.as_deref_mut() {
                for (i, slot) in comb.iter_mut().enumerate() {
                    let c = self.k + i;
                    if row[c] != 0 {
                        let m = self.moduli[c];
                        *slot = m.reduce(*slot + m.mul(m.reduce(q), row[c]));
                    }
                }
            }
        }
        true
    }

    /// Tracking blocks of rows whose target part vanished: generators of the
    /// relation module among the generators.
    pub(crate) fn kernel(&self) -> Vec<Vec<u64>> {
        (0..self.n_rows)
            .filter(|&r| !self.is_pivot[r])
            .map(|r| self.rows[r * self.stride + self.k..(r + 1) * self.stride].to_vec())
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect()
    }

    /// Replaces `x` by the least element of `x + span` in lexicographic order of
    /// coordinates (first coordinate most significant). Requires no tracking.
    pub(crate) fn minimize(&self, x: &mut [u64]) {
        for p in 0..self.k {
            let row = &self.rows[self.pivot_of[p] * self.stride..][..self.stride];
            let d = row[p];
            let q = x[p] / d;
            if q == 0 {
                continue;
            }
            x[p] %= d;
            for c in p + 1..self.k {
                if row[c] != 0 {
                    let m = self.moduli[c];
                    let sub = m.mul(m.reduce(q), row[c]);
                    x[c] = if x[c] >= sub { x[c] - sub } else { x[c] + m.get() - sub };
                }
            }
        }
    }

    /// Number of elements of the spanned subgroup.
    pub(crate) fn span_size(&self) -> u128 {
        (0..self.k)
            .map(|p| {
                let d = self.rows[self.pivot_of[p] * self.stride + p];
                (self.moduli[p].get() / d) as u128
            })
            .product()
    }
}

/// Solves `Σ x_l · columns[l] = target` in `⊕ Z/target_moduli` with `x_l ∈ Z/column_moduli[l]`.
///
/// Returns the lexicographically least solution when the coordinates of `x` are
/// read in the order `significance` (most significant first).
pub(crate) fn solve_least(
    target_moduli: &[u64],
    columns: &[Vec<u64>],
    column_moduli: &[u64],
    significance: &[usize],
    target: &[u64],
) -> Option<Vec<u64>> {
    debug_assert_eq!(columns.len(), column_moduli.len());
    let mut echelon = Echelon::new(target_moduli, column_moduli);
    for col in columns {
        echelon.push_generator(col.iter().copied());
    }
    echelon.reduce();
    let particular = echelon.solve(target)?;
    let kernel = echelon.kernel();

    let permuted_moduli: Vec<u64> = significance.iter().map(|&l| column_moduli[l]).collect();
    let mut ker = Echelon::new(&permuted_moduli, &[]);
    for v in &kernel {
        ker.push_generator(significance.iter().map(|&l| v[l]));
    }
    ker.reduce();
    let mut x: Vec<u64> = significance.iter().map(|&l| particular[l]).collect();
    ker.minimize(&mut x);
    let mut out = vec![0u64; columns.len()];
    for (pos, &l) in significance.iter().enumerate() {
        out[l] = x[pos];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates all x in ⊕ Z/column_moduli in significance order; first hit wins.
    fn brute_least(
        target_moduli: &[u64],
        columns: &[Vec<u64>],
        column_moduli: &[u64],
        significance: &[usize],
        target: &[u64],
    ) -> Option<Vec<u64>> {
        let n = columns.len();
        let mut x = vec![0u64; n];
        loop {
            let mut acc = vec![0u64; target_moduli.len()];
            for l in 0..n {
                for (i, a) in acc.iter_mut().enumerate() {
                    *a = (*a + x[l] * columns[l][i]) % target_moduli[i];
                }
            }
            if acc == target {
                return Some(x);
            }
            let mut carry = true;
            for &l in significance.iter().rev() {
                x[l] += 1;
                if x[l] < column_moduli[l] {
                    carry = false;
                    break;
                }
                x[l] = 0;
            }
            if carry {
                return None;
            }
        }
    }

    #[test]
    fn ext_gcd_identity() {
        for a in 1..40i64 {
            for b in 1..40i64 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(a % g, 0);
                assert_eq!(b % g, 0);
            }
        }
    }

    #[test]
    fn span_in_z6() {
        let mut e = Echelon::new(&[6], &[]);
        e.push_generator([4]);
        e.reduce();
        assert_eq!(e.span_size(), 3);
        assert!(e.contains(&mut [2]));
        assert!(!e.contains(&mut [3]));
    }

    #[test]
    fn least_solution_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let k = rng.gen_range(1..=3);
            let target_moduli: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=9)).collect();
            let n = rng.gen_range(1..=4);
            let column_moduli: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=6)).collect();
            // columns must be homomorphic images: column_moduli[l] * col ≡ 0
            let columns: Vec<Vec<u64>> = (0..n)
                .map(|l| {
                    target_moduli
                        .iter()
                        .map(|&m| {
                            let v: u64 = rng.gen_range(0..m);
                            if (v * column_moduli[l]).is_multiple_of(m) { v } else { 0 }
                        })
                        .collect()
                })
                .collect();
            let target: Vec<u64> = target_moduli.iter().map(|&m| rng.gen_range(0..m)).collect();
            let mut significance: Vec<usize> = (0..n).collect();
            if rng.gen_bool(0.5) {
                significance.reverse();
            }
            let fast = solve_least(&target_moduli, &columns, &column_moduli, &significance, &target);
            let slow = brute_least(&target_moduli, &columns, &column_moduli, &significance, &target);
            assert_eq!(fast, slow, "moduli {target_moduli:?} cols {columns:?} cm {column_moduli:?} t {target:?}");
        }
    }
}
