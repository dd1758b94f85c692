use std::fmt;

use serde::{Deserialize, Serialize};

use super::system::{SeqRow, SeqSystem};
use crate::error::{Error, Result};
use crate::kernel::KernelConfig;
use crate::poly::Poly;

impl fmt::Display for SeqSystem {
    /// `S: (f)^q [x] = y; ...; li: a, b`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.rows.iter().map(|r| format!("({})^{} [{}] = {}", r.f, r.q, r.var, r.param)).collect();
        if !self.li.is_empty() {
            parts.push(format!("li: {}", self.li.join(", ")));
        }
        if parts.is_empty() {
            write!(out, "S:")
        } else {
            write!(out, "S: {}", parts.join("; "))
        }
    }
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

fn ident(s: &str, offset: usize) -> Result<String> {
    let t = s.trim();
    let ok = t.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(t.to_string())
    } else {
        Err(perr(offset, format!("invalid variable name '{t}'")))
    }
}

impl SeqSystem {
    pub fn parse(cfg: &KernelConfig, src: &str) -> Result<SeqSystem> {
        let body = src
            .trim_start()
            .strip_prefix("S:")
            .ok_or_else(|| perr(0, "expected 'S:'"))?;
        let mut offset = src.len() - body.len();
        let mut li = Vec::new();
        let mut rows = Vec::new();
        for part in body.split(';') {
            let here = offset;
            offset += part.len() + 1;
            let p = part.trim();
            if p.is_empty() {
                continue;
            }
            if let Some(rest) = p.strip_prefix("li:") {
                for v in rest.split(',').filter(|v| !v.trim().is_empty()) {
                    li.push(ident(v, here)?);
                }
                continue;
            }
            rows.push(parse_row(cfg, p, here)?);
        }
        SeqSystem::new(cfg.clone(), li, rows)
    }
}

fn parse_row(cfg: &KernelConfig, p: &str, at: usize) -> Result<SeqRow> {
    let inner = p.strip_prefix('(').ok_or_else(|| perr(at, "expected '(' starting a row"))?;
    let close = inner.find(')').ok_or_else(|| perr(at, "missing ')'"))?;
    let f = Poly::parse(cfg.field(), inner[..close].trim())?;
    let rest = inner[close + 1..].trim_start();
    let rest = rest.strip_prefix('^').ok_or_else(|| perr(at, "expected '^q'"))?;
    let open = rest.find('[').ok_or_else(|| perr(at, "expected '[var]'"))?;
    let q: u32 = rest[..open].trim().parse().map_err(|_| perr(at, "invalid exponent"))?;
    let rest = &rest[open + 1..];
    let close = rest.find(']').ok_or_else(|| perr(at, "missing ']'"))?;
    let var = ident(&rest[..close], at)?;
    let param = rest[close + 1..]
        .trim()
        .strip_prefix('=')
        .ok_or_else(|| perr(at, "expected '= param'"))?;
    Ok(SeqRow { var, f, q, param: ident(param, at)? })
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    var: String,
    f: String,
    q: u32,
    param: String,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    li: Vec<String>,
    rows: Vec<RowJson>,
}

impl SeqSystem {
    /// `{"li": [...], "rows": [{"var","f","q","param"}]}`.
    pub fn to_json(&self) -> String {
        let raw = SystemJson {
            li: self.li.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| RowJson { var: r.var.clone(), f: r.f.to_string(), q: r.q, param: r.param.clone() })
                .collect(),
        };
        serde_json::to_string(&raw).expect("system json")
    }

    pub fn from_json(cfg: &KernelConfig, src: &str) -> Result<SeqSystem> {
        let raw: SystemJson = serde_json::from_str(src)?;
        let rows = raw
            .rows
            .into_iter()
            .map(|r| Ok(SeqRow { var: r.var, f: Poly::parse(cfg.field(), &r.f)?, q: r.q, param: r.param }))
            .collect::<Result<_>>()?;
        SeqSystem::new(cfg.clone(), raw.li, rows)
    }
}
