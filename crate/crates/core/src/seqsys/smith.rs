use crate::poly::{FieldSpec, Poly};

pub type PolyMat = Vec<Vec<Poly>>;

/// `U·A·V = D` with `U`, `V` unimodular over `K[X]` and `D` diagonal with
/// monic nonzero entries `d_0, …, d_{r-1}` followed by zeros.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub u: PolyMat,
    pub v: PolyMat,
    pub v_inv: PolyMat,
    pub diag: Vec<Poly>,
}

pub fn identity(field: FieldSpec, n: usize) -> PolyMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
        .collect()
}

pub fn mat_mul(field: FieldSpec, a: &PolyMat, b: &PolyMat, inner: usize) -> PolyMat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Poly::zero(field), |acc, k| &acc + &(&row[k] * &b[k][j]))
                })
                .collect()
        })
        .collect()
}

/// Diagonalizes an `r × c` polynomial matrix by elementary operations.
pub fn diagonalize(field: FieldSpec, a: &PolyMat, cols: usize) -> Diagonalization {
    let rows = a.len();
    let mut a = a.clone();
    let mut u = identity(field, rows);
    let mut v = identity(field, cols);
    let mut v_inv = identity(field, cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t) else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        v_inv.swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]).expect("nonzero pivot");
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !r.is_zero() {
                    a.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]).expect("nonzero pivot");
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                let neg = -&q;
                row_axpy(&mut v_inv, t, j, &neg);
                if !r.is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    v_inv.swap(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        let lead = field.inv(&a[t][t].lead());
        for x in a[t].iter_mut().chain(u[t].iter_mut()) {
            *x = x.scale(&lead);
        }
        diag.push(a[t][t].clone());
    }
    Diagonalization { u, v, v_inv, diag }
}

fn min_entry(a: &PolyMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if let Some(d) = x.degree() {
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `row_dst -= q · row_src`.
fn row_axpy(m: &mut PolyMat, dst: usize, src: usize, q: &Poly) {
    for j in 0..m[dst].len() {
        let d = &m[dst][j] - &(q * &m[src][j]);
        m[dst][j] = d;
    }
}

/// `col_dst -= q · col_src`.
fn col_axpy(m: &mut PolyMat, dst: usize, src: usize, q: &Poly) {
    for row in m.iter_mut() {
        let d = &row[dst] - &(q * &row[src]);
        row[dst] = d;
    }
}

fn swap_cols(m: &mut PolyMat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}
