use grasstrans::cherednik::{apply_m, eigenvalue_of_m};
use grasstrans::jacobi::{
    gram_check, jacobi_polynomial, jacobi_polynomial_with, value_at_half_pi,
    value_at_half_pi_by_construction, CherednikEigenSolve, GramSchmidtQuadrature, SymTrigPoly,
};
use grasstrans::param::{q, q_to_f64, qi};
use grasstrans::rootsystem::{grassmannian_preset, Field, RootSystemBC, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Classical Jacobi polynomial by the three-term recurrence.
fn jacobi_p(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + alpha + beta;
        let a1 = 2.0 * (k + 1.0) * (k + alpha + beta + 1.0) * s;
        let a2 = (s + 1.0) * (alpha * alpha - beta * beta);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (k + alpha) * (k + beta) * (s + 2.0);
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn rank_one_matches_classical_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (b2, iota) in [(qi(1), qi(0)), (qi(3), qi(0)), (qi(0), qi(1)), (qi(2), qi(1)), (q(5, 3), q(1, 2))] {
        let rs = RootSystemBC::new(1, qi(0), b2.clone(), iota.clone()).unwrap();
        let b = q_to_f64(&b2) / 2.0;
        let io = q_to_f64(&iota);
        let (alpha, beta) = (b + (io - 1.0) / 2.0, (io - 1.0) / 2.0);
        for m in (0..=12).step_by(2) {
            let phi = jacobi_polynomial(&rs, &Weight::new(vec![m]).unwrap()).unwrap();
            let k = (m / 2) as usize;
            let norm = jacobi_p(k, alpha, beta, 1.0);
            for _ in 0..50 {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                let expect = jacobi_p(k, alpha, beta, (2.0 * t).cos()) / norm;
                let got = phi.evaluate(&[t]);
                assert!(
                    (got - expect).abs() <= 1e-10 * expect.abs().max(1e-3),
                    "b2={b2} iota={iota} m={m} t={t}: {got} vs {expect}"
                );
            }
        }
    }
}

#[test]
fn rank_one_value_at_half_pi_example() {
    // ι = 0, 2b = n − 2: φ_(2)(π/2) = P_1(−1)/P_1(1) with α = b − 1/2, β = −1/2
    for n in 3..7 {
        let rs = RootSystemBC::from_ints(1, 1, n - 2, 0).unwrap();
        let phi = jacobi_polynomial(&rs, &Weight::new(vec![2]).unwrap()).unwrap();
        let b = (n - 2) as f64 / 2.0;
        let expect = jacobi_p(1, b - 0.5, -0.5, -1.0) / jacobi_p(1, b - 0.5, -0.5, 1.0);
        assert!((phi.evaluate(&[std::f64::consts::FRAC_PI_2]) - expect).abs() < 1e-12);
    }
}

#[test]
fn triangular_with_unit_leading_coefficient() {
    let rs = RootSystemBC::new(3, q(3, 2), qi(1), q(1, 3)).unwrap();
    for m in Weight::even_dominant(3, 8) {
        let phi = jacobi_polynomial(&rs, &m).unwrap();
        for (w, _) in phi.terms() {
            assert!(w.dominated_by(&m), "{w} not below {m}");
        }
        let lead = phi.coeff(&m);
        let monic = phi.scale(&(qi(1) / lead));
        assert_eq!(monic.coeff(&m), qi(1));
        assert_eq!(phi.value_at_origin(), qi(1));
    }
}

#[test]
fn rank_two_first_nontrivial_polynomial_is_two_term() {
    for rs in [
        RootSystemBC::from_ints(2, 1, 2, 0).unwrap(),
        RootSystemBC::new(2, q(7, 3), q(1, 2), qi(3)).unwrap(),
    ] {
        let m = Weight::new(vec![2, 0]).unwrap();
        let phi = jacobi_polynomial(&rs, &m).unwrap();
        assert_eq!(phi.len(), 2);
        let gs = jacobi_polynomial_with(&GramSchmidtQuadrature::default(), &rs, &m).unwrap();
        let c = q_to_f64(&phi.coeff(&Weight::zero(2)));
        let g = q_to_f64(&gs.coeff(&Weight::zero(2)));
        assert!((c - g).abs() < 1e-10 * c.abs());
    }
}

fn max_rel_coeff_gap(a: &SymTrigPoly, b: &SymTrigPoly) -> f64 {
    let scale = a.terms().map(|(_, c)| q_to_f64(c).abs()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (w, c) in a.terms().chain(b.terms()) {
        let _ = c;
        let x = q_to_f64(&a.coeff(w));
        let y = q_to_f64(&b.coeff(w));
        worst = worst.max((x - y).abs() / x.abs().max(1e-6 * scale));
    }
    worst
}

#[test]
fn exact_and_quadrature_constructions_agree() {
    let systems = [
        grassmannian_preset(Field::R, 5, 2).unwrap(),
        grassmannian_preset(Field::C, 4, 2).unwrap(),
        RootSystemBC::new(3, qi(1), qi(2), q(1, 2)).unwrap(),
        grassmannian_preset(Field::H, 7, 3).unwrap(),
    ];
    let gs = GramSchmidtQuadrature {
        budget: 8,
        order: 64,
    };
    for rs in &systems {
        for m in Weight::even_dominant(rs.rank(), 8) {
            let exact = jacobi_polynomial(rs, &m).unwrap();
            let approx = jacobi_polynomial_with(&gs, rs, &m).unwrap();
            let gap = max_rel_coeff_gap(&exact, &approx);
            assert!(gap <= 1e-8, "{rs} {m}: {gap:e}");
        }
    }
}

#[test]
fn exact_eigen_relation_for_operator_m() {
    let systems = [
        grassmannian_preset(Field::C, 5, 2).unwrap(),
        RootSystemBC::new(3, q(1, 2), qi(1), qi(2)).unwrap(),
    ];
    for rs in &systems {
        for m in Weight::even_dominant(rs.rank(), 6) {
            let phi = jacobi_polynomial(rs, &m).unwrap().to_laurent();
            for nu in [qi(0), qi(1), q(3, 2)] {
                let delta = &nu * qi(2) + qi(2);
                let lhs = apply_m(rs, &delta, &phi).unwrap();
                let rhs = phi.scale(&eigenvalue_of_m(rs, &nu, &m));
                assert_eq!(lhs, rhs, "{rs} {m} nu={nu}");
            }
        }
    }
}

#[test]
fn orthogonality_reports() {
    let rs = RootSystemBC::from_ints(1, 0, 3, 1).unwrap();
    let rep = gram_check(&rs, 12, 64).unwrap();
    assert!(rep.max_off_diagonal < 1e-10, "{rep:?}");
    let rs = grassmannian_preset(Field::R, 5, 2).unwrap();
    let rep = gram_check(&rs, 6, 40).unwrap();
    assert!(rep.max_off_diagonal < 1e-8, "{rep:?}");
    let rep = gram_check(&rs, 0, 8).unwrap();
    assert_eq!(rep.weights, 1);
    assert_eq!(rep.max_off_diagonal, 0.0);
}

#[test]
fn half_pi_values() {
    let c = grassmannian_preset(Field::H, 4, 2).unwrap();
    assert_eq!(value_at_half_pi(&c, &Weight::new(vec![4, 2]).unwrap()).unwrap(), qi(-1));
    let d = grassmannian_preset(Field::R, 4, 2).unwrap();
    assert_eq!(value_at_half_pi(&d, &Weight::new(vec![2, 0]).unwrap()).unwrap(), qi(-1));
    for m in Weight::even_dominant(2, 8) {
        for rs in [&c, &d] {
            assert_eq!(
                value_at_half_pi(rs, &m).unwrap(),
                value_at_half_pi_by_construction(rs, &m).unwrap(),
                "{rs} {m}"
            );
        }
    }
    let b = grassmannian_preset(Field::R, 5, 2).unwrap();
    let v = value_at_half_pi(&b, &Weight::new(vec![2, 0]).unwrap()).unwrap();
    assert_ne!(v, qi(0));
}

#[test]
fn json_round_trip() {
    let rs = RootSystemBC::new(2, q(1, 2), qi(3), q(2, 5)).unwrap();
    let phi = jacobi_polynomial(&rs, &Weight::new(vec![4, 2]).unwrap()).unwrap();
    let text = serde_json::to_string(&phi.to_json()).unwrap();
    let back: grasstrans::jacobi::SymTrigPolyJson = serde_json::from_str(&text).unwrap();
    assert_eq!(&SymTrigPoly::from_json(&back).unwrap(), phi.as_ref());
    assert!(text.starts_with("{\"rank\":2,\"mult\":[\"1/2\",\"3\",\"2/5\"],\"terms\":["));
}

#[test]
fn builder_trait_objects_agree() {
    let rs = grassmannian_preset(Field::C, 6, 2).unwrap();
    let m = Weight::new(vec![4, 2]).unwrap();
    let a = jacobi_polynomial_with(&CherednikEigenSolve::default(), &rs, &m).unwrap();
    assert_eq!(&a, jacobi_polynomial(&rs, &m).unwrap().as_ref());
}
