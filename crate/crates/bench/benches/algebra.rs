use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use endo_bench::{cinf_model, configs, f2, formulas, poly};
use endo_core::finmodel::oracle::{fm_stabilized_truth, OracleOptions};
use endo_core::formula::{endo_to_mod, parse_formula, EndoLang};
use endo_core::poly::poly_factor;
use endo_core::qe::{closure_cl_theta, qe_full};
use endo_core::seqsys::{ss_transform, SeqSystem};
use endo_core::{FieldSpec, KernelConfig, Poly, RcElem, RcRing};

fn polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly");
    let a = poly("X^12+X^11+X^7+X^5+X^2+1");
    g.bench_function("factor_f2_deg12", |b| b.iter(|| poly_factor(black_box(&a)).unwrap()));
    let f5 = FieldSpec::prime(5).unwrap();
    let q = Poly::from_ints(f5, &[3, 0, 1, 4, 0, 2, 1, 0, 1]);
    g.bench_function("factor_f5_deg8", |b| b.iter(|| poly_factor(black_box(&q)).unwrap()));
    let (x, y) = (poly("X^20+X^9+X^3+1"), poly("X^15+X^8+X^2+X"));
    g.bench_function("gcd_bezout_deg20", |b| b.iter(|| black_box(&x).gcd_bezout(black_box(&y)).unwrap()));
    g.finish();
}

fn ring(c: &mut Criterion) {
    let mut g = c.benchmark_group("ring");
    for (name, cfg) in configs() {
        let r = RcRing::new(cfg);
        let a = &RcElem::rho(&r, &poly("X^5+X^2+1")) + &RcElem::one(&r);
        let b = RcElem::rho(&r, &poly("X^4+X^3+X"));
        g.bench_with_input(BenchmarkId::new("mul", name), &(a, b), |bch, (a, b)| bch.iter(|| a * b));
    }
    g.finish();
}

fn elimination(c: &mut Criterion) {
    let mut g = c.benchmark_group("qe");
    g.sample_size(20);
    for (name, cfg) in configs() {
        let r = RcRing::new(cfg);
        let batch = formulas(&r, 50);
        g.bench_with_input(BenchmarkId::new("qe_full_50", name), &batch, |b, batch| {
            b.iter(|| batch.iter().map(|f| qe_full(f, &r).unwrap().formula).count())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let lang = EndoLang { field: f2() };
    let phi = parse_formula(&lang, "A y. E x. T(x) + x = y | T(y) = 0").unwrap();
    for (name, cfg) in configs() {
        let r = RcRing::new(cfg.clone());
        let m = endo_to_mod(&r, &phi);
        g.bench_function(BenchmarkId::new("stabilized_truth", name), |b| {
            b.iter(|| fm_stabilized_truth(&m, &cfg, &OracleOptions::default()).unwrap().truth)
        });
    }
    g.finish();
}

fn structures(c: &mut Criterion) {
    let mut g = c.benchmark_group("structures");
    let m = cinf_model();
    let gens = vec![vec![1, 0, 0, 1, 0, 0, 1, 0]];
    g.bench_function("closure_dim8", |b| b.iter(|| closure_cl_theta(&m, black_box(&gens)).unwrap().dim()));
    let cinf = KernelConfig::c_infinity(f2());
    let s = SeqSystem::parse(&cinf, "S: (X)^2 [a] = y1; (X^2+X+1)^1 [b] = y2; li: c, d").unwrap();
    let r = RcRing::new(cinf);
    let e = vec![endo_core::formula::LinEq {
        coeffs: [("c", "X^3+X"), ("d", "X^2"), ("a", "X")]
            .iter()
            .map(|(v, p)| (v.to_string(), RcElem::rho(&r, &poly(p))))
            .collect(),
        rhs: endo_core::formula::ModTerm::single("y1".to_string(), RcElem::one(&r)),
    }];
    g.bench_function("ss_transform", |b| b.iter(|| ss_transform(&s, black_box(&e)).unwrap().measure()));
    g.finish();
}

criterion_group!(benches, polynomials, ring, elimination, oracle, structures);
criterion_main!(benches);
