//! Exact definable sets of a finite model.
//!
//! Every atom `t(x̄) = 0` defines a linear subspace of `V^k`, so a definable
//! set is a boolean combination of subspaces. It is stored as an
//! intersection-closed family `F` (containing the whole space) with one truth
//! value per cell `cell(Z) = Z \ ∪{W ∈ F : W ⊊ Z}`; a point lies in the cell
//! of the smallest member containing it. Projection counts fibre points of
//! every true cell by Möbius inversion over `F`, which is exact.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::gf::{Lin, Row, Sub};

#[derive(Clone, Debug)]
pub struct DefSet {
    pub lin: Lin,
    pub fam: Vec<Sub>,
    pub label: Vec<bool>,
}

/// Upper limit on family sizes before evaluation gives up.
pub const FAMILY_CAP: usize = 4096;

#[derive(Debug)]
pub struct FamilyTooLarge;

type Res<T> = std::result::Result<T, FamilyTooLarge>;

fn closure(lin: &Lin, base: Vec<Sub>) -> Res<Vec<Sub>> {
    let mut seen: HashSet<Sub> = HashSet::new();
    let mut out: Vec<Sub> = Vec::new();
    let mut work: Vec<Sub> = vec![Sub::whole()];
    work.extend(base);
    while let Some(s) = work.pop() {
        if seen.contains(&s) {
            continue;
        }
        for t in &out {
            let i = s.intersect(lin, t);
            if !seen.contains(&i) {
                work.push(i);
            }
        }
        seen.insert(s.clone());
        out.push(s);
        if out.len() > FAMILY_CAP {
            return Err(FamilyTooLarge);
        }
    }
    out.sort_by_key(|s| s.codim());
    Ok(out)
}

impl DefSet {
    pub fn constant(lin: Lin, b: bool) -> DefSet {
        DefSet { lin, fam: vec![Sub::whole()], label: vec![b] }
    }

    /// `inside` on `s`, `!inside` elsewhere.
    pub fn atom(lin: Lin, s: Sub, inside: bool) -> DefSet {
        if s.codim() == 0 {
            return DefSet::constant(lin, inside);
        }
        DefSet { lin, fam: vec![Sub::whole(), s], label: vec![!inside, inside] }
    }

    pub fn as_constant(&self) -> Option<bool> {
        let first = self.label[0];
        self.label.iter().all(|&b| b == first).then_some(first)
    }

    pub fn negate(mut self) -> DefSet {
        for b in self.label.iter_mut() {
            *b = !*b;
        }
        self
    }

    /// Index of the smallest member containing `z`.
    fn locate(&self, z: &Sub) -> usize {
        let mut best = 0;
        for (i, s) in self.fam.iter().enumerate() {
            if z.is_subset(&self.lin, s) && s.codim() > self.fam[best].codim() {
                best = i;
            }
        }
        best
    }

    pub fn combine(&self, other: &DefSet, op: impl Fn(bool, bool) -> bool) -> Res<DefSet> {
        if let Some(b) = other.as_constant() {
            let mut out = self.clone();
            for l in out.label.iter_mut() {
                *l = op(*l, b);
            }
            return Ok(out.pruned());
        }
        if let Some(a) = self.as_constant() {
            let mut out = other.clone();
            for l in out.label.iter_mut() {
                *l = op(a, *l);
            }
            return Ok(out.pruned());
        }
        let lin = self.lin;
        let fam = closure(&lin, self.fam.iter().chain(&other.fam).cloned().collect())?;
        let label = fam
            .iter()
            .map(|z| op(self.label[self.locate(z)], other.label[other.locate(z)]))
            .collect();
        Ok(DefSet { lin, fam, label }.pruned())
    }

    /// `incl[j][i]` iff `fam[j] ⊆ fam[i]`.
    fn inclusions(&self) -> Vec<Vec<bool>> {
        let m = self.fam.len();
        (0..m)
            .map(|j| (0..m).map(|i| self.fam[j].is_subset(&self.lin, &self.fam[i])).collect())
            .collect()
    }

    /// `mu[i]` holds `(j, μ(fam[j], fam[i]))` for nonzero values.
    fn mobius(&self, incl: &[Vec<bool>]) -> Vec<Vec<(usize, i64)>> {
        let m = self.fam.len();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut below: Vec<usize> = (0..m).filter(|&j| incl[j][i]).collect();
            // Larger members first: μ(j, i) = -Σ_{j ⊊ u ⊆ i} μ(u, i).
            below.sort_by_key(|&j| self.fam[j].codim());
            let mut mu = vec![0i64; m];
            for (pos, &j) in below.iter().enumerate() {
                if j == i {
                    mu[j] = 1;
                    continue;
                }
                let s: i64 = below[..pos].iter().filter(|&&u| u != j && incl[j][u]).map(|&u| mu[u]).sum();
                mu[j] = -s;
            }
            out.push(below.iter().filter(|&&j| mu[j] != 0).map(|&j| (j, mu[j])).collect());
        }
        out
    }

    fn cell_sizes(&self, incl: &[Vec<bool>]) -> Vec<BigInt> {
        let p = BigInt::from(self.lin.p);
        let mu = self.mobius(incl);
        mu.iter()
            .map(|row| {
                row.iter().fold(BigInt::zero(), |acc, &(j, v)| {
                    acc + BigInt::from(v) * p.pow(self.fam[j].dim(&self.lin) as u32)
                })
            })
            .collect()
    }

    /// Removes members whose cell is empty or labelled like their unique cover.
    pub fn pruned(mut self) -> DefSet {
        loop {
            let incl = self.inclusions();
            let sizes = self.cell_sizes(&incl);
            let m = self.fam.len();
            let mut victim = None;
            for z in 1..m {
                let uppers: Vec<usize> = (0..m).filter(|&u| u != z && incl[z][u]).collect();
                let covers: Vec<usize> = uppers
                    .iter()
                    .copied()
                    .filter(|&u| !uppers.iter().any(|&w| w != u && incl[w][u]))
                    .collect();
                if covers.len() == 1 && (sizes[z].is_zero() || self.label[z] == self.label[covers[0]]) {
                    victim = Some(z);
                    break;
                }
            }
            match victim {
                Some(z) => {
                    self.fam.remove(z);
                    self.label.remove(z);
                }
                None => {
                    // Empty cells with several covers carry arbitrary labels.
                    let mut live = self.label.iter().zip(&sizes).filter(|(_, s)| !s.is_zero()).map(|(&l, _)| l);
                    let first = live.next().unwrap_or(false);
                    if live.all(|l| l == first) {
                        return DefSet::constant(self.lin, first);
                    }
                    return self;
                }
            }
        }
    }

    /// Projection dropping the first `k` coordinates (`∃` over them).
    pub fn exists(&self, k: usize) -> Res<DefSet> {
        let to = Lin::new(self.lin.p, self.lin.len - k);
        if let Some(b) = self.as_constant() {
            return Ok(DefSet::constant(to, b));
        }
        let incl = self.inclusions();
        let mu = self.mobius(&incl);
        let mut coeff = vec![0i64; self.fam.len()];
        for (i, row) in mu.iter().enumerate() {
            if self.label[i] {
                for &(j, v) in row {
                    coeff[j] += v;
                }
            }
        }
        let p = BigInt::from(self.lin.p);
        let mut terms: Vec<(Sub, BigInt)> = Vec::new();
        for (j, &c) in coeff.iter().enumerate() {
            if c != 0 {
                let (proj, fibre) = self.fam[j].project(&self.lin, k);
                terms.push((proj, BigInt::from(c) * p.pow(fibre as u32)));
            }
        }
        let fam = closure(&to, terms.iter().map(|(s, _)| s.clone()).collect())?;
        let label = fam
            .iter()
            .map(|z| {
                let v = terms
                    .iter()
                    .filter(|(s, _)| z.is_subset(&to, s))
                    .fold(BigInt::zero(), |acc, (_, w)| acc + w);
                v.is_positive()
            })
            .collect();
        Ok(DefSet { lin: to, fam, label }.pruned())
    }

    /// Whether some point of the set lies in `dom` (a subspace of the same space).
    pub fn meets(&self, dom: &Sub) -> Res<bool> {
        let d = DefSet::atom(self.lin, dom.clone(), true);
        let both = self.combine(&d, |a, b| a && b)?;
        let incl = both.inclusions();
        let sizes = both.cell_sizes(&incl);
        Ok(both.label.iter().zip(&sizes).any(|(&l, s)| l && !s.is_zero()))
    }

    /// Truth at a point.
    pub fn contains(&self, v: &Row) -> bool {
        let mut best = 0;
        for (i, s) in self.fam.iter().enumerate() {
            let inside = s.rows.iter().all(|r| dot(&self.lin, r, v) == 0);
            if inside && s.codim() > self.fam[best].codim() {
                best = i;
            }
        }
        self.label[best]
    }
}

fn dot(lin: &Lin, a: &[u64], b: &[u64]) -> u64 {
    if lin.p == 2 {
        (a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() % 2) as u64
    } else {
        let p = lin.p as u128;
        (a.iter().zip(b).fold(0u128, |acc, (&x, &y)| (acc + x as u128 * y as u128) % p)) as u64
    }
}
