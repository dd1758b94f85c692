//! Row-vector linear algebra over `F_p` with bit packing for `p = 2`, and
//! subspaces stored as canonical reduced constraint rows.

use super::matrix::inv_mod;

/// Coordinates of length `len` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lin {
    pub p: u64,
    pub len: usize,
}

pub type Row = Vec<u64>;

impl Lin {
    pub fn new(p: u64, len: usize) -> Lin {
        Lin { p, len }
    }

    fn packed(&self) -> bool {
        self.p == 2
    }

    pub fn zero(&self) -> Row {
        if self.packed() {
            vec![0; self.len.div_ceil(64)]
        } else {
            vec![0; self.len]
        }
    }

    pub fn get(&self, r: &[u64], i: usize) -> u64 {
        if self.packed() {
            (r[i / 64] >> (i % 64)) & 1
        } else {
            r[i]
        }
    }

    pub fn set(&self, r: &mut [u64], i: usize, v: u64) {
        if self.packed() {
            let bit = 1u64 << (i % 64);
            if v % 2 == 1 {
                r[i / 64] |= bit;
            } else {
                r[i / 64] &= !bit;
            }
        } else {
            r[i] = v % self.p;
        }
    }

    /// `dst += c·src`.
    pub fn axpy(&self, dst: &mut [u64], src: &[u64], c: u64) {
        if c == 0 {
            return;
        }
        if self.packed() {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        } else {
            let p = self.p as u128;
            for (d, s) in dst.iter_mut().zip(src) {
                *d = ((*d as u128 + c as u128 * *s as u128) % p) as u64;
            }
        }
    }

    pub fn scale(&self, r: &mut [u64], c: u64) {
        if self.packed() {
            if c % 2 == 0 {
                r.fill(0);
            }
        } else {
            let p = self.p as u128;
            for x in r.iter_mut() {
                *x = ((*x as u128 * c as u128) % p) as u64;
            }
        }
    }

    pub fn is_zero(&self, r: &[u64]) -> bool {
        r.iter().all(|&x| x == 0)
    }

    pub fn leading(&self, r: &[u64]) -> Option<usize> {
        if self.packed() {
            r.iter()
                .enumerate()
                .find(|(_, &w)| w != 0)
                .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
        } else {
            r.iter().position(|&x| x != 0)
        }
    }

    pub fn from_values(&self, vals: &[u64]) -> Row {
        let mut r = self.zero();
        for (i, &v) in vals.iter().enumerate() {
            if v % self.p != 0 {
                self.set(&mut r, i, v);
            }
        }
        r
    }

    pub fn to_values(&self, r: &[u64]) -> Vec<u64> {
        (0..self.len).map(|i| self.get(r, i)).collect()
    }

    /// Drops the first `k` coordinates.
    pub fn shift_down(&self, r: &[u64], k: usize) -> Row {
        let to = Lin::new(self.p, self.len - k);
        let mut out = to.zero();
        for i in k..self.len {
            let v = self.get(r, i);
            if v != 0 {
                to.set(&mut out, i - k, v);
            }
        }
        out
    }

    /// Prepends `k` zero coordinates.
    pub fn shift_up(&self, r: &[u64], k: usize) -> Row {
        let to = Lin::new(self.p, self.len + k);
        let mut out = to.zero();
        for i in 0..self.len {
            let v = self.get(r, i);
            if v != 0 {
                to.set(&mut out, i + k, v);
            }
        }
        out
    }
}

/// The subspace `{v : r·v = 0 for every constraint row r}`; rows are kept in
/// reduced echelon form, so equal subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sub {
    pub rows: Vec<Row>,
    pub pivots: Vec<usize>,
}

impl Sub {
    pub fn whole() -> Sub {
        Sub { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(lin: &Lin, rows: impl IntoIterator<Item = Row>) -> Sub {
        let mut s = Sub::whole();
        for r in rows {
            s.insert(lin, r);
        }
        s
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self, lin: &Lin) -> usize {
        lin.len - self.rows.len()
    }

    pub fn reduce(&self, lin: &Lin, mut r: Row) -> Row {
        for (row, &pv) in self.rows.iter().zip(&self.pivots) {
            let c = lin.get(&r, pv);
            if c != 0 {
                lin.axpy(&mut r, row, lin.p - c);
            }
        }
        r
    }

    /// Adds a constraint; returns whether the subspace shrank.
    pub fn insert(&mut self, lin: &Lin, r: Row) -> bool {
        let mut r = self.reduce(lin, r);
        let Some(pv) = lin.leading(&r) else { return false };
        let c = lin.get(&r, pv);
        if c != 1 {
            lin.scale(&mut r, inv_mod(c, lin.p));
        }
        for row in self.rows.iter_mut() {
            let c = lin.get(row, pv);
            if c != 0 {
                lin.axpy(row, &r, lin.p - c);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pv);
        self.rows.insert(at, r);
        self.pivots.insert(at, pv);
        true
    }

    pub fn intersect(&self, lin: &Lin, other: &Sub) -> Sub {
        let (mut big, small) = if self.codim() >= other.codim() { (self.clone(), other) } else { (other.clone(), self) };
        for r in &small.rows {
            big.insert(lin, r.clone());
        }
        big
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, lin: &Lin, other: &Sub) -> bool {
        other.codim() <= self.codim()
            && other.rows.iter().all(|r| lin.is_zero(&self.reduce(lin, r.clone())))
    }

    /// Image under dropping the first `k` coordinates, and the fibre dimension.
    pub fn project(&self, lin: &Lin, k: usize) -> (Sub, usize) {
        let to = Lin::new(lin.p, lin.len - k);
        let rows: Vec<Row> = self
            .rows
            .iter()
            .zip(&self.pivots)
            .filter(|(_, &pv)| pv >= k)
            .map(|(r, _)| lin.shift_down(r, k))
            .collect();
        let proj = Sub { pivots: rows.iter().map(|r| to.leading(r).expect("nonzero")).collect(), rows };
        let fibre = self.dim(lin) - proj.dim(&to);
        (proj, fibre)
    }

    /// Preimage under dropping the first `k` coordinates.
    pub fn lift(&self, lin: &Lin, k: usize) -> Sub {
        Sub {
            rows: self.rows.iter().map(|r| lin.shift_up(r, k)).collect(),
            pivots: self.pivots.iter().map(|&p| p + k).collect(),
        }
    }
}
