use serde::{Deserialize, Serialize};

use super::matrix::Mat;
use crate::error::{Error, Result};
use crate::kernel::{ExtNat, KernelConfig};
use crate::poly::{irreducible_factors, is_irreducible, FieldSpec, Poly, Scalar};

/// A companion block of `f^j`, repeated `mult` times; fillers are blocks of
/// irreducibles kept outside the model's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub f: Poly,
    pub j: u32,
    pub mult: usize,
    pub filler: bool,
}

impl BlockSpec {
    pub fn new(f: Poly, j: u32, mult: usize) -> Self {
        BlockSpec { f, j, mult, filler: false }
    }

    pub fn filler(f: Poly, mult: usize) -> Self {
        BlockSpec { f, j: 1, mult, filler: true }
    }

    pub fn dim(&self) -> usize {
        self.f.deg0() * self.j as usize * self.mult
    }
}

/// A finite-dimensional model `(F_p^dim, θ)`.
#[derive(Clone, Debug)]
pub struct FinModel {
    pub field: FieldSpec,
    pub dim: usize,
    pub theta: Mat,
    pub cfg: KernelConfig,
    pub blocks: Vec<BlockSpec>,
    /// Irreducibles on which the configuration is enforced; `None` means all.
    pub support: Option<Vec<Poly>>,
}

fn check_block(cfg: &KernelConfig, b: &BlockSpec, support: &[Poly]) -> Result<()> {
    if b.f.field() != cfg.field() {
        return Err(Error::Model(format!("block {}: wrong field", b.f)));
    }
    if !b.f.is_monic() || !is_irreducible(&b.f)? {
        return Err(Error::Model(format!("block {}: not monic irreducible", b.f)));
    }
    if b.j == 0 {
        return Err(Error::Model(format!("block {}: exponent must be positive", b.f)));
    }
    if b.filler {
        if cfg.is_algebraic() {
            return Err(Error::Model("filler blocks are not allowed for algebraic C".into()));
        }
        if support.contains(&b.f) {
            return Err(Error::Model(format!("filler {} lies in the support", b.f)));
        }
        return Ok(());
    }
    match cfg.value(&b.f) {
        ExtNat::Fin(0) => Err(Error::Model(format!("block {}: C(f) = 0", b.f))),
        ExtNat::Fin(c) if b.j > c => {
            Err(Error::Model(format!("block ({}, {}): exponent exceeds C(f) = {c}", b.f, b.j)))
        }
        _ => Ok(()),
    }
}

/// Builds the block-diagonal companion model.
pub fn fm_build(cfg: &KernelConfig, blocks: &[BlockSpec], support: &[Poly]) -> Result<FinModel> {
    let FieldSpec::Prime { p } = cfg.field() else {
        return Err(Error::Model("finite models need a prime field".into()));
    };
    for b in blocks {
        check_block(cfg, b, support)?;
    }
    let mut mats = Vec::new();
    for b in blocks {
        let c = Mat::companion(p, &b.f.pow(b.j));
        for _ in 0..b.mult {
            mats.push(c.clone());
        }
    }
    let theta = Mat::block_diag(p, &mats);
    let dim = theta.rows();
    Ok(FinModel {
        field: cfg.field(),
        dim,
        theta,
        cfg: cfg.clone(),
        blocks: blocks.to_vec(),
        support: if cfg.is_algebraic() { None } else { Some(support.to_vec()) },
    })
}

impl FinModel {
    /// A model from an explicit matrix (no block metadata, full support).
    pub fn from_matrix(cfg: &KernelConfig, theta: Mat) -> Result<FinModel> {
        let FieldSpec::Prime { p } = cfg.field() else {
            return Err(Error::Model("finite models need a prime field".into()));
        };
        if theta.p() != p || theta.rows() != theta.cols() {
            return Err(Error::Model("theta must be square over the configured field".into()));
        }
        Ok(FinModel {
            field: cfg.field(),
            dim: theta.rows(),
            theta,
            cfg: cfg.clone(),
            blocks: Vec::new(),
            support: None,
        })
    }

    pub fn p(&self) -> u64 {
        self.theta.p()
    }

    pub fn eval_poly(&self, f: &Poly) -> Mat {
        self.theta.eval_poly(f)
    }

    /// Minimal polynomial of θ (lcm of the Krylov minimal polynomials of the basis).
    pub fn min_poly(&self) -> Poly {
        min_poly(&self.theta, self.field)
    }

    /// Irreducibles whose configuration this model is checked against.
    pub fn checked_factors(&self) -> Vec<Poly> {
        let mut fs: Vec<Poly> = match &self.support {
            Some(s) => s.clone(),
            None => {
                let mut v: Vec<Poly> = self.cfg.entries().keys().cloned().collect();
                v.extend(irreducible_factors(&self.min_poly()).unwrap_or_default());
                v
            }
        };
        fs.sort();
        fs.dedup();
        fs
    }
}

/// Minimal polynomial of a square matrix over `F_p`.
pub fn min_poly(theta: &Mat, field: FieldSpec) -> Poly {
    let n = theta.rows();
    let mut acc = Poly::one(field);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        acc = acc.lcm(&vector_min_poly(theta, &e, field));
    }
    acc
}

/// Monic polynomial of least degree annihilating `v` under `theta`.
pub fn vector_min_poly(theta: &Mat, v: &[u64], field: FieldSpec) -> Poly {
    let p = theta.p();
    let n = theta.rows();
    let mut krylov: Vec<Vec<u64>> = vec![v.to_vec()];
    loop {
        let k = krylov.len();
        let m = Mat::from_cols(p, n, &krylov);
        let kern = m.kernel();
        if let Some(rel) = kern.into_iter().find(|r| r[k - 1] != 0) {
            let coeffs = rel.iter().map(|&c| Scalar::from_integer((c as i64).into())).collect();
            return Poly::new(field, coeffs).monic();
        }
        let next = theta.apply(&krylov[k - 1]);
        krylov.push(next);
    }
}

/// Per-factor outcome of [`fm_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub f: String,
    pub c: String,
    pub ker_c: usize,
    pub ker_c1: usize,
    pub endo_ok: bool,
    pub image_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub is_c_endo: bool,
    pub is_image_complete: bool,
    pub support_relative: bool,
    pub per_factor: Vec<FactorReport>,
}

/// Checks the C-endomorphism and C-image-completeness conditions exactly.
pub fn fm_check(m: &FinModel) -> CheckReport {
    let mut per_factor = Vec::new();
    let mut endo = true;
    let mut image = true;
    for f in m.checked_factors() {
        let ExtNat::Fin(c) = m.cfg.value(&f) else { continue };
        let fc = m.eval_poly(&f.pow(c));
        let fc1 = fc.mul(&m.eval_poly(&f));
        let (r0, r1) = (fc.rank(), fc1.rank());
        let ok = r0 == r1;
        image &= ok;
        let endo_ok = if m.cfg.is_algebraic() { true } else { ok };
        endo &= endo_ok;
        per_factor.push(FactorReport {
            f: f.to_string(),
            c: c.to_string(),
            ker_c: m.dim - r0,
            ker_c1: m.dim - r1,
            endo_ok,
            image_ok: ok,
        });
    }
    if let Ok(mp) = m.cfg.mipo() {
        endo = m.eval_poly(&mp.poly).is_zero();
    }
    CheckReport {
        is_c_endo: endo,
        is_image_complete: image,
        support_relative: m.support.is_some(),
        per_factor,
    }
}

/// Adds block summands after the existing ones.
pub fn fm_extend(m: &FinModel, extra: &[BlockSpec]) -> Result<FinModel> {
    let support = m.support.clone().unwrap_or_default();
    for b in extra {
        check_block(&m.cfg, b, &support)?;
    }
    let p = m.p();
    let mut mats = vec![m.theta.clone()];
    for b in extra {
        let c = Mat::companion(p, &b.f.pow(b.j));
        for _ in 0..b.mult {
            mats.push(c.clone());
        }
    }
    let theta = Mat::block_diag(p, &mats);
    let mut blocks = m.blocks.clone();
    blocks.extend(extra.iter().cloned());
    Ok(FinModel { dim: theta.rows(), theta, blocks, ..m.clone() })
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    f: String,
    j: u32,
    mult: usize,
    filler: bool,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    p: u64,
    dim: usize,
    theta: Vec<Vec<u64>>,
    blocks: Vec<BlockJson>,
}

impl FinModel {
    /// `{p, dim, theta, blocks}` with a row-major matrix.
    pub fn to_json(&self) -> String {
        let raw = ModelJson {
            p: self.p(),
            dim: self.dim,
            theta: self.theta.to_rows(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockJson { f: b.f.to_string(), j: b.j, mult: b.mult, filler: b.filler })
                .collect(),
        };
        serde_json::to_string(&raw).expect("model json")
    }

    pub fn from_json(cfg: &KernelConfig, src: &str) -> Result<FinModel> {
        let raw: ModelJson = serde_json::from_str(src)?;
        if cfg.field() != (FieldSpec::Prime { p: raw.p }) {
            return Err(Error::Model("model field differs from the configuration".into()));
        }
        if raw.theta.len() != raw.dim || raw.theta.iter().any(|r| r.len() != raw.dim) {
            return Err(Error::Model("theta must be dim x dim".into()));
        }
        let mut m = FinModel::from_matrix(cfg, Mat::from_rows(raw.p, &raw.theta))?;
        m.blocks = raw
            .blocks
            .iter()
            .map(|b| {
                Ok(BlockSpec {
                    f: Poly::parse(cfg.field(), &b.f)?,
                    j: b.j,
                    mult: b.mult,
                    filler: b.filler,
                })
            })
            .collect::<Result<_>>()?;
        let support: Vec<Poly> =
            m.blocks.iter().filter(|b| !b.filler).map(|b| b.f.clone()).collect();
        if m.blocks.iter().any(|b| b.filler) {
            m.support = Some(support);
        }
        Ok(m)
    }
}
