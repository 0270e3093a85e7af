//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::time::{Duration, Instant};

use grasstrans::cherednik::{apply_m, eigenvalue_of_m, verify_bs_cos, verify_bs_sin, verify_factor_identities};
use grasstrans::grassgeo::knapp_stein_kernel_check;
use grasstrans::jacobi::{jacobi_polynomial, value_at_half_pi, value_at_half_pi_by_construction};
use grasstrans::param::{q, qi, Param, Q};
use grasstrans::rootsystem::{grassmannian_preset, grassmannian_preset_with, Field, Literal, RootSystemBC, RootType, Weight};
use grasstrans::spectra::{
    cosine_symbol, image_membership, knapp_stein_nu, knapp_stein_symbol, norm_const_cos, norm_const_sin,
    quadrature_symbols, relative_error, sine_symbol, stein_positivity_scan, SpectralSymbol, TransformKind,
};
use grasstrans::verify::{generic_points, mc_adjudicate, mc_cells, MC_SIGMAS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const QUAD_TOL: f64 = 1e-6;
const BS_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-9;
const MC_SAMPLES: usize = 1_000_000;
const KS_SAMPLES: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn presets() -> Vec<(Field, usize)> {
    vec![(Field::R, 4), (Field::R, 5), (Field::R, 6), (Field::C, 4), (Field::C, 5), (Field::H, 4)]
}

fn nus() -> Vec<Param> {
    [q(1, 2), qi(1), qi(2), q(7, 2)].into_iter().map(Param::Exact).collect()
}

fn closed(rs: &RootSystemBC, nu: &Param, kind: TransformKind, m: &Weight) -> SpectralSymbol {
    match kind {
        TransformKind::Cosine => cosine_symbol(rs, nu, m),
        _ => sine_symbol(rs, nu, m),
    }
    .unwrap()
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    let mut bad = Vec::new();
    for (field, n) in presets() {
        let rs = grassmannian_preset(field, n, 2).unwrap();
        let ws = Weight::even_dominant(2, 8);
        for nu in nus() {
            for kind in [TransformKind::Cosine, TransformKind::Sine] {
                let qs = quadrature_symbols(&rs, &nu, kind, &ws, 64).unwrap();
                for (m, v) in ws.iter().zip(&qs) {
                    let e = relative_error(&closed(&rs, &nu, kind, m), v);
                    worst = worst.max(e);
                    cells += 1;
                    if !(e <= QUAD_TOL && v.converged) {
                        bad.push(format!("G({n},2)({field}) {kind} nu={nu} m={m}: {e:e}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cells} cells, max rel err {worst:.2e} (tol {QUAD_TOL:e}) {bad:?}"))
}

fn criterion_2() -> Outcome {
    let systems = [
        grassmannian_preset(Field::R, 3, 1).unwrap(),
        grassmannian_preset(Field::H, 5, 2).unwrap(),
        grassmannian_preset(Field::C, 6, 3).unwrap(),
        RootSystemBC::new(3, q(1, 2), qi(1), q(2, 3)).unwrap(),
    ];
    let mut checks = 0;
    let mut bad = Vec::new();
    for rs in &systems {
        for m in Weight::even_dominant(rs.rank(), 8) {
            let phi = jacobi_polynomial(rs, &m).unwrap().to_laurent();
            for nu in [qi(0), qi(1), q(3, 2)] {
                let delta = &nu * qi(2) + qi(2);
                let lhs = apply_m(rs, &delta, &phi).unwrap();
                checks += 1;
                if lhs != phi.scale(&eigenvalue_of_m(rs, &nu, &m)) {
                    bad.push(format!("{rs} {m} nu={nu}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} exact checks, nonzero residuals {bad:?}"))
}

fn criterion_3() -> Outcome {
    let configs = [
        RootSystemBC::from_ints(2, 1, 0, 0).unwrap(),
        RootSystemBC::from_ints(2, 2, 2, 1).unwrap(),
        RootSystemBC::from_ints(2, 4, 0, 3).unwrap(),
        RootSystemBC::from_ints(3, 1, 1, 0).unwrap(),
        RootSystemBC::from_ints(3, 4, 8, 3).unwrap(),
        RootSystemBC::new(2, q(1, 2), q(3, 2), q(2, 5)).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for (i, rs) in configs.iter().enumerate() {
        for delta in [2.0, 3.5, 5.0] {
            for t in generic_points(rs.rank(), 20, 100 + i as u64) {
                for res in [verify_bs_cos(rs, delta, &t).unwrap(), verify_bs_sin(rs, delta, &t).unwrap()] {
                    worst = worst.max(res.relative).max(res.worst_step);
                    checks += 1;
                }
                for j in 1..=rs.rank() {
                    worst = worst.max(verify_factor_identities(rs, delta, j, &t).unwrap().max());
                    checks += 1;
                }
            }
        }
    }
    outcome(worst <= BS_TOL, format!("{checks} residual checks, max rel {worst:.2e} (tol {BS_TOL:e})"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut cd = 0;
    while cd < 30 {
        let r = rng.gen_range(1..=3);
        let a = [q(1, 2), qi(1), qi(2), qi(4)][rng.gen_range(0..4)].clone();
        let iota = [qi(0), qi(0), qi(1), qi(3), q(1, 3)][rng.gen_range(0..5)].clone();
        let rs = RootSystemBC::new(r, a, qi(0), iota).unwrap();
        let all = Weight::even_dominant(r, 8);
        let m = all[rng.gen_range(0..all.len())].clone();
        let expect: Q = m.parts().iter().map(|&p| if (p / 2) % 2 == 0 { qi(1) } else { qi(-1) }).product();
        let v = value_at_half_pi(&rs, &m).unwrap();
        if v != expect || v != value_at_half_pi_by_construction(&rs, &m).unwrap() {
            bad.push(format!("{rs} {m}: {v}"));
        }
        assert!(matches!(rs.root_type(), RootType::C | RootType::D));
        cd += 1;
    }
    let mut grass = 0;
    for (field, n, r) in [(Field::R, 5, 2), (Field::C, 5, 2), (Field::H, 5, 2), (Field::R, 7, 3)] {
        let all = Weight::even_dominant(r, 8);
        for k in 0..5 {
            let m = &all[(3 * k + 1) % all.len()];
            let rs = grassmannian_preset(field, n, r).unwrap();
            let v = value_at_half_pi(&rs, m).unwrap();
            if v == qi(0) || v != value_at_half_pi_by_construction(&rs, m).unwrap() {
                bad.push(format!("{rs} {m}: {v}"));
            }
            grass += 1;
        }
    }
    outcome(bad.is_empty(), format!("{cd} type C/D and {grass} type B/BC cases, mismatches {bad:?}"))
}

fn criterion_5() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for (field, n, r) in [(Field::R, 5, 2), (Field::C, 5, 2), (Field::H, 6, 2), (Field::R, 4, 2), (Field::C, 7, 3)] {
        let rs = grassmannian_preset(field, n, r).unwrap();
        for nu in [q(1, 2), qi(1), q(3, 2), qi(2)] {
            let nu = Param::Exact(nu);
            for m in Weight::even_dominant(r, 12) {
                let s = cosine_symbol(&rs, &nu, &m).unwrap();
                let mem = image_membership(field, n, r, r, &nu, &m).unwrap();
                checks += 1;
                if s.is_exact_zero == mem.in_l_nu {
                    bad.push(format!("G({n},{r})({field}) nu={nu} m={m}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} weights, exceptions {bad:?}"))
}

fn criterion_6() -> Outcome {
    let grid = [(Field::R, 4), (Field::R, 5), (Field::C, 4), (Field::C, 5), (Field::H, 4)];
    let nus = [Param::from(1), Param::from(2)];
    let mut cells = 0;
    let mut worst: f64 = 0.0;
    let mut reruns = 0;
    let mut bad = Vec::new();
    for (i, (field, n)) in grid.into_iter().enumerate() {
        let rs = grassmannian_preset(field, n, 2).unwrap();
        let cs = mc_cells(2, &nus, 4);
        let adj = mc_adjudicate(field, n, &rs, &cs, MC_SAMPLES, 600 + i as u64).unwrap();
        cells += cs.len();
        reruns += adj.reruns.len();
        worst = worst.max(adj.first.iter().map(|e| e.z.abs()).fold(0.0, f64::max));
        for &k in &adj.persistent {
            let e = &adj.first[k];
            bad.push(format!("G({n},2)({field}) {} nu={} m={}: z={:.2}", e.cell.kind, e.cell.nu, e.cell.m, e.z));
        }
    }
    // the alternative multiplicity reading on real projective space
    let lit = grassmannian_preset_with(&Literal, Field::R, 3, 1).unwrap();
    let adj = mc_adjudicate(Field::R, 3, &lit, &mc_cells(1, &nus, 4), MC_SAMPLES, 699).unwrap();
    let literal_rejected = !adj.persistent.is_empty();
    outcome(
        bad.is_empty() && literal_rejected,
        format!(
            "{cells} cells at {MC_SAMPLES} samples, max |z| {worst:.2} (bound {MC_SIGMAS}), {reruns} re-runs, \
             persistent {bad:?}; literal multiplicities rejected on G(3,1)(R): {literal_rejected}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut witnesses = Vec::new();
    for field in Field::ALL {
        for r in [1, 2] {
            for k in 1..10 {
                let t = Param::Exact(q(k, 20));
                let s = stein_positivity_scan(field, r, &t, 12).unwrap();
                if s.pass != Some(true) {
                    bad.push(format!("{field} r={r} t={t}: witness {:?}", s.witness));
                }
            }
            for t in [q(11, 20), q(3, 4)] {
                let s = stein_positivity_scan(field, r, &Param::Exact(t.clone()), 12).unwrap();
                match &s.witness {
                    Some(w) => witnesses.push(format!("{field} r={r} t={t}: {w}")),
                    None => bad.push(format!("{field} r={r} t={t}: no sign change")),
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("failures {bad:?}; witnesses {witnesses:?}"))
}

fn recursion_factor(rs: &RootSystemBC, nu: &Q, m: &Weight) -> Q {
    let r = rs.rank() as i64;
    let half_a = rs.a() / qi(2);
    m.parts()
        .iter()
        .enumerate()
        .map(|(j, &mj)| {
            let k = q(mj as i64, 2);
            let j = qi(j as i64);
            let lo = nu + qi(1) + &half_a * &j;
            let hi = nu + qi(1) + rs.b() + rs.iota() + rs.a() * qi(r - 1) - &half_a * &j;
            (qi(1) - &k / lo) * (qi(1) + &k / hi)
        })
        .product()
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (field, n) in presets() {
        let rs = grassmannian_preset(field, n, 2).unwrap();
        for nu in nus() {
            for kind in [TransformKind::Cosine, TransformKind::Sine] {
                let v = &quadrature_symbols(&rs, &nu, kind, &[Weight::zero(2)], 64).unwrap()[0];
                let exact = match kind {
                    TransformKind::Cosine => norm_const_cos(&rs, &nu),
                    _ => norm_const_sin(&rs, &nu),
                }
                .unwrap()
                .value();
                let e = (v.value - exact).abs() / exact.abs();
                worst = worst.max(e);
                if !(e <= QUAD_TOL) {
                    bad.push(format!("G({n},2)({field}) {kind} nu={nu}: {e:e}"));
                }
            }
        }
        for m in Weight::even_dominant(2, 8) {
            for nu in [qi(0), qi(1), qi(2)] {
                let f = recursion_factor(&rs, &nu, &m);
                for kind in [TransformKind::Cosine, TransformKind::Sine] {
                    let now = closed(&rs, &Param::Exact(nu.clone()), kind, &m).ratio().unwrap();
                    let next = closed(&rs, &Param::Exact(&nu + qi(1)), kind, &m).ratio().unwrap();
                    if now != &f * next {
                        bad.push(format!("recursion G({n},2)({field}) {kind} nu={nu} m={m}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("max rel err {worst:.2e} (tol {QUAD_TOL:e}); exact recursion; failures {bad:?}"))
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (i, field) in Field::ALL.into_iter().enumerate() {
        for r in [1, 2] {
            let rep = knapp_stein_kernel_check(field, r, &Param::Exact(q(1, 3)), KS_SAMPLES, 90 + i as u64).unwrap();
            worst = worst.max(rep.max_kernel_rel).max(rep.max_jacobian_rel);
            if !(rep.max_kernel_rel <= KERNEL_TOL && rep.max_jacobian_rel <= KERNEL_TOL) {
                bad.push(format!("{field} r={r}: {rep:?}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10 {
        let field = Field::ALL[i % 3];
        let r = 1 + i % 2;
        // sine_symbol needs ν ≥ 0, i.e. t ≥ r/2
        let t = Param::Exact(q(r as i64, 2) + q(rng.gen_range(0..40), 40));
        let all = Weight::even_dominant(r, 10);
        let m = all[rng.gen_range(0..all.len())].clone();
        let ks = knapp_stein_symbol(field, r, &t, &m).unwrap();
        let rs = grassmannian_preset(field, 2 * r, r).unwrap();
        let s = sine_symbol(&rs, &knapp_stein_nu(field, r, &t), &m).unwrap();
        if ks.ratio() != s.ratio() || ks.norm_factors != s.norm_factors || ks.value.to_bits() != s.value.to_bits() {
            bad.push(format!("{field} r={r} t={t} m={m}"));
        }
    }
    outcome(bad.is_empty(), format!("kernel/Jacobian max rel {worst:.2e} (tol {KERNEL_TOL:e}); failures {bad:?}"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("quadrature agrees with closed-form symbols", Duration::from_secs(300), criterion_1),
        ("exact eigen-relation of the Cherednik operator", Duration::from_secs(120), criterion_2),
        ("Bernstein-Sato identities pointwise", Duration::from_secs(60), criterion_3),
        ("Jacobi polynomial values at pi/2", Duration::from_secs(120), criterion_4),
        ("exact zeros match the image predicate", Duration::from_secs(120), criterion_5),
        ("Monte-Carlo geometric oracle", Duration::from_secs(600), criterion_6),
        ("Stein positivity and sign changes", Duration::from_secs(120), criterion_7),
        ("normalization constants and nu-recursion", Duration::from_secs(300), criterion_8),
        ("Knapp-Stein kernel identity", Duration::from_secs(120), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} [{:.1}s of {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
