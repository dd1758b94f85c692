use crate::poly::Poly;

/// Dense matrix over `F_p`, row-major, entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod p");
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

impl Mat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(p: u64, n: usize, cols: &[Vec<u64>]) -> Mat {
        let mut m = Mat::zeros(p, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).take(self.rows).collect()
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.p, self.rows)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let p = self.p;
        let mut out = Mat::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + mulmod(a, other.get(k, j), p)) % p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Mat {
        let p = self.p;
        let data = self.data.iter().map(|&a| mulmod(a, c % p, p)).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(self.p - 1))
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| (acc + mulmod(self.get(i, j), v[j], self.p)) % self.p)
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..m.cols {
                    let t = m.get(r, j);
                    m.set(r, j, m.get(piv, j));
                    m.set(piv, j, t);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                m.set(r, j, mulmod(m.get(r, j), inv, p));
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    for j in 0..m.cols {
                        let v = (m.get(i, j) + p - mulmod(f, m.get(r, j), p)) % p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, fc)) % p;
                }
                v
            })
            .collect()
    }

    /// Basis of the column space (a subset of the columns).
    pub fn image(&self) -> Vec<Vec<u64>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Mat::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Some `x` with `self·x = b`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let mut aug = Mat::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % self.p);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    /// `poly[self]` by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly) -> Mat {
        let n = self.rows;
        let field = poly.field();
        let mut acc = Mat::zeros(self.p, n, n);
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Mat::identity(self.p, n).scale(field.to_u64(c)));
        }
        acc
    }

    /// Companion matrix of a monic polynomial (θ e_i = e_{i+1}).
    pub fn companion(p: u64, g: &Poly) -> Mat {
        assert!(g.is_monic() && g.deg0() > 0, "companion of a non-monic polynomial");
        let n = g.deg0();
        let field = g.field();
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n - 1 {
            m.set(i + 1, i, 1);
        }
        for i in 0..n {
            let c = field.to_u64(&g.coeff(i));
            m.set(i, n - 1, (p - c) % p);
        }
        m
    }

    pub fn block_diag(p: u64, blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Mat::zeros(p, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FieldSpec;

    #[test]
    fn companion_satisfies_its_polynomial() {
        let f2 = FieldSpec::Prime { p: 2 };
        let g = Poly::parse(f2, "X^3+X+1").unwrap();
        let c = Mat::companion(2, &g);
        assert!(c.eval_poly(&g).is_zero());
        assert!(!c.eval_poly(&Poly::parse(f2, "X^2+1").unwrap()).is_zero());
    }

    #[test]
    fn kernel_inverse_solve() {
        let m = Mat::from_rows(3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().len(), 2);
        for v in m.kernel() {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
        let a = Mat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let x = a.solve(&[1, 1]).unwrap();
        assert_eq!(a.apply(&x), vec![1, 1]);
        assert!(m.solve(&[0, 0, 1]).is_none());
    }
}
