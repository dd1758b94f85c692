use std::collections::BTreeMap;
use std::fmt;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use endo_core::finmodel::enumerate::fm_eval;
use endo_core::finmodel::oracle::{fm_stabilized_truth, OracleOptions, Truth};
use endo_core::finmodel::{fm_build, fm_check, fm_decompose, BlockSpec, FinModel};
use endo_core::formula::{endo_to_mod, parse_formula, print_formula, EndoLang, ModFormula, ModLang};
use endo_core::kernel::{constraints_from_json, constraints_reduce, Reduced};
use endo_core::qe::{check_witness, closure_cl_theta, exchange_diagnose, fuzz_campaign, qe_decide_sentence, qe_full, ExchangeVerdict, FuzzCase, FuzzParams};
use endo_core::rc::{rc_kernel_descriptor, RcElem, RcRing};
use endo_core::{Error, FieldSpec, KernelConfig, Poly};
use serde_json::{json, Value};

use crate::{Cli, Cmd, Lang, ModelCmd, Output, RingOp};

/// Misuse of the command line (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage: {}", self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn module_of(e: &Error) -> &'static str {
    match e {
        Error::FieldMismatch(..)
        | Error::DivisionByZero
        | Error::GcdOfZeros
        | Error::NotPrime(_)
        | Error::NotIrreducible(_)
        | Error::UnsupportedFactorization(_) => "polyring",
        Error::Parse { .. } | Error::Formula(_) => "formula",
        Error::Config(_) | Error::ConfigMismatch => "kernelconfig",
        Error::Generator(_) => "rcring",
        Error::Model(_) | Error::CapExceeded(_) => "finmodel",
        Error::SeqSystem(_) => "seqsys",
        Error::Scope(_) => "qe",
        Error::Json(_) => "input",
    }
}

/// The message printed on stderr, prefixed by the module that raised it.
pub fn diagnostic(e: &anyhow::Error) -> String {
    match e.downcast_ref::<Error>() {
        Some(inner) => format!("[{}] {e:#}", module_of(inner)),
        None => format!("{e:#}"),
    }
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Inline text, or the contents of `file` for `@file`.
fn source(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => read(path.as_ref()),
        None => Ok(s.to_string()),
    }
}

fn config(cli: &Cli) -> Result<KernelConfig> {
    let Some(path) = &cli.config else { return usage("this command needs --config") };
    let cfg = KernelConfig::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    Ok(cfg)
}

/// A field from a field spec, a kernel configuration or any object with `field`.
fn field(cli: &Cli) -> Result<FieldSpec> {
    let Some(path) = &cli.config else { return usage("this command needs --config") };
    let v: Value = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    let spec = v.get("field").cloned().unwrap_or(v);
    let f: FieldSpec = serde_json::from_value(spec).map_err(Error::from).context("expected a field spec")?;
    if let FieldSpec::Prime { p } = f {
        FieldSpec::prime(p)?;
    }
    Ok(f)
}

fn options(cli: &Cli) -> OracleOptions {
    let d = OracleOptions::default();
    OracleOptions {
        n_cap: cli.max_n.map_or(d.n_cap, |n| n as usize),
        dim_cap: cli.max_dim.map_or(d.dim_cap, |n| n as usize),
    }
}

fn formula(ring: &Arc<RcRing>, src: &str, lang: Lang) -> Result<ModFormula> {
    let src = source(src)?;
    Ok(match lang {
        Lang::Endo => endo_to_mod(ring, &parse_formula(&EndoLang { field: ring.field() }, &src)?),
        Lang::Module => parse_formula(&ModLang { ring: ring.clone() }, &src)?,
    })
}

fn model(cfg: &KernelConfig, path: &std::path::Path) -> Result<FinModel> {
    Ok(FinModel::from_json(cfg, &read(path)?).with_context(|| format!("in {}", path.display()))?)
}

fn vector(src: &str, p: u64) -> Result<Vec<u64>> {
    src.split(',')
        .map(|c| {
            let c = c.trim();
            c.parse::<i64>().map(|v| v.rem_euclid(p as i64) as u64).or_else(|_| usage(format!("bad coordinate {c:?}")))
        })
        .collect()
}

fn emit(cli: &Cli, text: impl fmt::Display, value: Value) {
    match cli.output {
        Output::Text => println!("{text}"),
        Output::Json => println!("{value}"),
    }
}

fn truth_name(t: Truth) -> &'static str {
    match t {
        Truth::True => "true",
        Truth::False => "false",
        Truth::Unknown => "unknown",
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Reduce { constraints } => reduce(cli, constraints),
        Cmd::Ring { op, exprs } => ring(cli, *op, exprs),
        Cmd::Qe { formula, lang } => qe(cli, formula, *lang),
        Cmd::Decide { formula, lang, oracle } => decide(cli, formula, *lang, *oracle),
        Cmd::Model { action } => model_cmd(cli, action),
        Cmd::Closure { model, vectors } => closure(cli, model, vectors),
        Cmd::Exchange => exchange(cli),
        Cmd::Fuzz { count } => fuzz(cli, *count),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|e| match e.downcast::<Disagreement>() {
        Ok(_) => Ok(ExitCode::from(1)),
        Err(e) => Err(e),
    })
}

fn reduce(cli: &Cli, path: &std::path::Path) -> Result<()> {
    let f = field(cli)?;
    let cs = constraints_from_json(f, &read(path)?)?;
    match constraints_reduce(f, &cs)? {
        Reduced::Inconsistent => emit(cli, "inconsistent", json!({ "result": "inconsistent" })),
        Reduced::Config(cfg) => {
            let v: Value = serde_json::from_str(&cfg.to_json())?;
            emit(cli, &cfg, json!({ "result": "config", "config": v, "text": cfg.to_string() }));
        }
    }
    Ok(())
}

fn ring(cli: &Cli, op: Option<RingOp>, exprs: &[String]) -> Result<()> {
    let cfg = config(cli)?;
    let ring = RcRing::new(cfg.clone());
    let elems: Vec<RcElem> = exprs.iter().map(|s| RcElem::parse(&ring, s)).collect::<endo_core::Result<_>>()?;
    if let Some(op) = op {
        let [a, b] = elems.as_slice() else { return usage("--op takes exactly two elements") };
        let (text, value) = match op {
            RingOp::Add => ((a + b).to_string(), json!((a + b).to_string())),
            RingOp::Sub => ((a - b).to_string(), json!((a - b).to_string())),
            RingOp::Mul => ((a * b).to_string(), json!((a * b).to_string())),
            RingOp::Eq => ((a == b).to_string(), json!(a == b)),
        };
        emit(cli, text, json!({ "result": value }));
        return Ok(());
    }
    if elems.is_empty() {
        let locals: Vec<Value> =
            ring.locals().iter().map(|l| json!({ "f": l.f.to_string(), "c": l.c })).collect();
        let mut text = format!("{cfg}\nfield: {}", ring.is_field());
        for l in ring.locals() {
            text.push_str(&format!("\nlocal factor K[X]/({})^{}", l.f, l.c));
        }
        emit(
            cli,
            text,
            json!({ "config": cfg.to_string(), "is_field": ring.is_field(), "locals": locals, "mipo": ring.mipo().map(|m| m.to_string()) }),
        );
        return Ok(());
    }
    let mut lines = Vec::new();
    let mut values = Vec::new();
    for e in &elems {
        let d = rc_kernel_descriptor(e);
        lines.push(format!("{e}  unit: {}  injective: {}", e.is_unit(), d.injective_on_ec));
        values.push(json!({ "normal_form": e.to_string(), "unit": e.is_unit(), "descriptor": d }));
    }
    emit(cli, lines.join("\n"), Value::Array(values));
    Ok(())
}

fn qe(cli: &Cli, src: &str, lang: Lang) -> Result<()> {
    let ring = RcRing::new(config(cli)?);
    let phi = formula(&ring, src, lang)?;
    let r = qe_full(&phi, &ring)?;
    let out = print_formula(&ModLang { ring }, &r.formula);
    let trace: Value = serde_json::from_str(&r.trace_json())?;
    let text = if cli.trace { format!("{out}\n{}", serde_json::to_string_pretty(&trace)?) } else { out.clone() };
    emit(cli, text, json!({ "formula": out, "trace": trace }));
    Ok(())
}

fn decide(cli: &Cli, src: &str, lang: Lang, oracle: bool) -> Result<()> {
    let cfg = config(cli)?;
    let ring = RcRing::new(cfg.clone());
    let phi = formula(&ring, src, lang)?;
    if !phi.is_sentence() {
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        return Err(Error::Formula(format!("decide needs a sentence; free variables: {}", free.join(", "))).into());
    }
    if oracle {
        let st = fm_stabilized_truth(&phi, &cfg, &options(cli))?;
        let t = truth_name(st.truth);
        emit(cli, t, json!({ "truth": t, "method": "oracle", "stabilized_at": st.n, "note": st.note }));
    } else {
        let t = qe_decide_sentence(&phi, &ring)?;
        emit(cli, t, json!({ "truth": t.to_string(), "method": "qe" }));
    }
    Ok(())
}

fn block(f: FieldSpec, src: &str) -> Result<BlockSpec> {
    let parts: Vec<&str> = src.split(':').collect();
    let num = |s: &str| s.parse::<usize>().or_else(|_| usage(format!("bad number {s:?} in block {src:?}")));
    match parts.as_slice() {
        ["filler", g] => Ok(BlockSpec::filler(Poly::parse(f, g)?, 1)),
        ["filler", g, m] => Ok(BlockSpec::filler(Poly::parse(f, g)?, num(m)?)),
        [g, j] => Ok(BlockSpec::new(Poly::parse(f, g)?, num(j)? as u32, 1)),
        [g, j, m] => Ok(BlockSpec::new(Poly::parse(f, g)?, num(j)? as u32, num(m)?)),
        _ => usage(format!("block {src:?}: expected f:j[:mult] or filler:f[:mult]")),
    }
}

fn rows(v: &[Vec<u64>]) -> Value {
    json!(v)
}

fn model_cmd(cli: &Cli, action: &ModelCmd) -> Result<()> {
    let cfg = config(cli)?;
    match action {
        ModelCmd::Build { blocks, support } => {
            let bs: Vec<BlockSpec> = blocks.iter().map(|b| block(cfg.field(), b)).collect::<Result<_>>()?;
            let sup: Vec<Poly> = support.iter().map(|s| Poly::parse(cfg.field(), s)).collect::<endo_core::Result<_>>()?;
            let m = fm_build(&cfg, &bs, &sup)?;
            let dump = m.to_json();
            emit(cli, &dump, serde_json::from_str(&dump)?);
        }
        ModelCmd::Check { model: path } => {
            let rep = fm_check(&model(&cfg, path)?);
            let mut text = format!("C-endomorphism: {}\nimage-complete: {}", rep.is_c_endo, rep.is_image_complete);
            for f in &rep.per_factor {
                text.push_str(&format!(
                    "\n  {}: C = {}, dim Ker f^C = {}, dim Ker f^(C+1) = {}",
                    f.f, f.c, f.ker_c, f.ker_c1
                ));
            }
            emit(cli, text, serde_json::to_value(&rep)?);
        }
        ModelCmd::Decompose { model: path, fs } => {
            let m = model(&cfg, path)?;
            let fs: Vec<Poly> = fs.iter().map(|s| Poly::parse(cfg.field(), s)).collect::<endo_core::Result<_>>()?;
            let d = fm_decompose(&m, &fs)?;
            let mut text = format!("Im: dim {}", d.im_basis.len());
            let mut ker = BTreeMap::new();
            for (f, b) in &d.ker_bases {
                text.push_str(&format!("\nKer({f}^C): dim {}", b.len()));
                ker.insert(f.to_string(), rows(b));
            }
            let pk: BTreeMap<String, Value> =
                d.proj_ker.iter().map(|(f, p)| (f.to_string(), rows(&p.to_rows()))).collect();
            emit(
                cli,
                text,
                json!({ "im_basis": rows(&d.im_basis), "ker_bases": ker, "proj_im": rows(&d.proj_im.to_rows()), "proj_ker": pk }),
            );
        }
        ModelCmd::Eval { model: path, formula: src, lang, assign } => {
            let m = model(&cfg, path)?;
            let ring = RcRing::new(cfg.clone());
            let phi = formula(&ring, src, *lang)?;
            let mut env = BTreeMap::new();
            for a in assign {
                let Some((x, v)) = a.split_once('=') else { return usage(format!("--assign {a:?}: expected x=v1,v2,..")) };
                env.insert(x.trim().to_string(), vector(v, m.p())?);
            }
            if let Some(x) = phi.free_vars().into_iter().find(|x| !env.contains_key(x)) {
                return usage(format!("free variable {x} has no --assign"));
            }
            let t = fm_eval(&phi, &m, &env)?;
            emit(cli, t, json!({ "truth": t }));
        }
    }
    Ok(())
}

fn closure(cli: &Cli, path: &std::path::Path, vectors: &[String]) -> Result<()> {
    let cfg = config(cli)?;
    let m = model(&cfg, path)?;
    let gens: Vec<Vec<u64>> = vectors.iter().map(|v| vector(v, m.p())).collect::<Result<_>>()?;
    let cl = closure_cl_theta(&m, &gens)?;
    let mut text = format!("dim {}", cl.dim());
    for b in &cl.basis {
        text.push_str(&format!("\n  {}", b.iter().map(u64::to_string).collect::<Vec<_>>().join(",")));
    }
    text.push_str(&format!("\nannihilators: {}", cl.annihilators.join(", ")));
    emit(cli, text, serde_json::to_value(&cl)?);
    Ok(())
}

fn exchange(cli: &Cli) -> Result<()> {
    let cfg = config(cli)?;
    match exchange_diagnose(&cfg)? {
        ExchangeVerdict::HasExchange => {
            emit(cli, "exchange holds (R_C is a field)", json!({ "verdict": "has_exchange" }));
        }
        ExchangeVerdict::FailsExchange(w) => {
            let ok = check_witness(&w)?;
            let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            let text = format!(
                "exchange fails: u = {}, v = {} in a model of dimension {} (witness verified: {ok})",
                show(&w.u),
                show(&w.v),
                w.model.dim
            );
            let m: Value = serde_json::from_str(&w.model.to_json())?;
            emit(cli, text, json!({ "verdict": "fails_exchange", "witness": { "model": m, "u": w.u, "v": w.v, "verified": ok } }));
        }
    }
    Ok(())
}

/// The campaign found disagreements (exit code 1, report already printed).
#[derive(Debug)]
struct Disagreement;

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "disagreements found")
    }
}

impl std::error::Error for Disagreement {}

fn fuzz(cli: &Cli, count: usize) -> Result<()> {
    if count == 0 {
        return usage("--count must be positive");
    }
    let cfg = config(cli)?;
    let r = fuzz_campaign(&cfg, count, cli.seed, &FuzzParams::default(), &options(cli))?;
    let case = |c: &FuzzCase| json!({ "index": c.index, "formula": c.formula, "result": c.result, "note": c.note });
    let mut text = format!("{}/{} agree, {} disagree, {} unknown", r.agree, r.total, r.disagree.len(), r.unknown.len());
    for c in &r.disagree {
        text.push_str(&format!("\n  disagree #{}: {}  ~>  {}", c.index, c.formula, c.result));
    }
    for c in &r.unknown {
        text.push_str(&format!("\n  unknown #{}: {}", c.index, c.formula));
    }
    emit(
        cli,
        text,
        json!({
            "total": r.total,
            "agree": r.agree,
            "disagree": r.disagree.iter().map(case).collect::<Vec<_>>(),
            "unknown": r.unknown.iter().map(case).collect::<Vec<_>>(),
        }),
    );
    eprintln!("({:.1}s)", r.seconds);
    if r.disagree.is_empty() {
        Ok(())
    } else {
        Err(Disagreement.into())
    }
}
