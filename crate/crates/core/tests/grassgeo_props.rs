use grasstrans::grassgeo::{
    cos_angle, det_real, haar_frame, knapp_stein_kernel_check, mc_symbol, principal_angles, sin_angle, CMatrix,
    StiefelFrame,
};
use grasstrans::param::{q, Param};
use grasstrans::rootsystem::{Field, Weight};
use grasstrans::spectra::TransformKind;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn haar_columns_have_uniform_first_coordinate() {
    for field in Field::ALL {
        let n = 5;
        let samples = 100_000;
        let mut s = 0.0;
        let mut s2 = 0.0;
        for i in 0..samples {
            let x = haar_frame(field, n, 2, 1000 + i).unwrap();
            let e = x.entries();
            // |⟨column 1, e_1⟩|² over 𝕂
            let v = match field {
                Field::H => e[(0, 0)].norm_sqr() + e[(n, 0)].norm_sqr(),
                _ => e[(0, 0)].norm_sqr(),
            };
            s += v;
            s2 += v * v;
        }
        let mean = s / samples as f64;
        let sd = ((s2 / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - 1.0 / n as f64).abs() < 3.0 * sd, "{field}: {mean} ± {sd}");
    }
}

#[test]
fn square_frames_are_unitary() {
    for field in [Field::R, Field::C] {
        let g = haar_frame(field, 4, 4, 2).unwrap();
        assert!((g.entries().clone().determinant().norm() - 1.0).abs() < 1e-12);
    }
    let g = haar_frame(Field::H, 3, 3, 2).unwrap();
    assert!((det_real(Field::H, g.entries()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn angle_identities_on_random_pairs() {
    for field in Field::ALL {
        for seed in 0..20 {
            let n = 7;
            let x = haar_frame(field, n, 3, seed).unwrap();
            let y = haar_frame(field, n, 3, 500 + seed).unwrap();
            let t = principal_angles(&x, &y).unwrap();
            assert!(t.angles().iter().all(|&a| (0.0..=std::f64::consts::FRAC_PI_2).contains(&a)));
            assert!(t.angles().windows(2).all(|w| w[0] <= w[1]));
            let pc: f64 = t.angles().iter().map(|a| a.cos()).product();
            let ps: f64 = t.angles().iter().map(|a| a.sin()).product();
            assert!((cos_angle(&x, &y).unwrap() - pc).abs() < 1e-10, "{field}");
            assert!((sin_angle(&x, &y).unwrap() - ps).abs() < 1e-10, "{field}");
            assert!((cos_angle(&y, &x).unwrap() - pc).abs() < 1e-10);
            assert!((sin_angle(&y, &x).unwrap() - ps).abs() < 1e-10);
            let g = haar_frame(field, n, n, 900 + seed).unwrap();
            let (gx, gy) = (x.left_mul(&g).unwrap(), y.left_mul(&g).unwrap());
            assert!((cos_angle(&gx, &gy).unwrap() - pc).abs() < 1e-10);
            assert!((sin_angle(&gx, &gy).unwrap() - ps).abs() < 1e-10);
            // unequal ranks
            let z = haar_frame(field, n, 2, 77 + seed).unwrap();
            let k = cos_angle(&z, &x).unwrap();
            assert!((0.0..=1.0).contains(&k));
            assert_eq!(k, cos_angle(&x, &z).unwrap());
        }
    }
}

#[test]
fn degenerate_configurations() {
    for field in Field::ALL {
        let x = haar_frame(field, 6, 2, 4).unwrap();
        assert!((cos_angle(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!(sin_angle(&x, &x).unwrap() < 1e-6);
        assert!(principal_angles(&x, &x).unwrap().angles().iter().all(|a| a.abs() < 1e-6));
        let perp = x.complement().unwrap();
        let two = StiefelFrame::orthonormalize(field, &perp.entries().columns(0, 2).into_owned()).unwrap();
        assert!((sin_angle(&x, &two).unwrap() - 1.0).abs() < 1e-12);
        assert!(cos_angle(&x, &two).unwrap() < 1e-6);
    }
}

#[test]
fn block_rotation_recovers_angles() {
    let (n, t) = (5, [0.3f64, 1.1]);
    let m = CMatrix::from_fn(n, 2, |i, j| match i {
        i if i < 2 && i == j => c(t[j].cos()),
        i if (2..4).contains(&i) && i - 2 == j => c(t[j].sin()),
        _ => c(0.0),
    });
    let x = StiefelFrame::orthonormalize(Field::R, &m).unwrap();
    let x0 = StiefelFrame::base_point(Field::R, n, 2).unwrap();
    let a = principal_angles(&x, &x0).unwrap();
    assert!((a.angles()[0] - 0.3).abs() < 1e-12 && (a.angles()[1] - 1.1).abs() < 1e-12);
}

#[test]
fn lines_satisfy_pythagoras() {
    for field in Field::ALL {
        for seed in 0..10 {
            let x = haar_frame(field, 4, 1, seed).unwrap();
            let y = haar_frame(field, 4, 1, 40 + seed).unwrap();
            let (co, si) = (cos_angle(&x, &y).unwrap(), sin_angle(&x, &y).unwrap());
            assert!((co * co + si * si - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn knapp_stein_kernel_identity() {
    for field in Field::ALL {
        for r in [1, 2] {
            let rep = knapp_stein_kernel_check(field, r, &Param::Exact(q(1, 4)), 200, 3).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }
}

#[test]
fn forty_five_degree_line() {
    // Y = 1 over ℝ, r = 1: η is the diagonal line
    let x0 = StiefelFrame::base_point(Field::R, 2, 1).unwrap();
    let eta = StiefelFrame::orthonormalize(Field::R, &CMatrix::from_fn(2, 1, |_, _| c(1.0))).unwrap();
    let s = sin_angle(&x0, &eta).unwrap();
    assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
}

#[test]
fn monte_carlo_is_reproducible_and_exact_at_zero_weight() {
    let m0 = Weight::zero(2);
    let e = mc_symbol(Field::C, 4, 2, &Param::from(1), TransformKind::Cosine, &m0, 5000, 1).unwrap();
    assert_eq!(e.estimate, 1.0);
    let m = Weight::new(vec![2, 0]).unwrap();
    let a = mc_symbol(Field::R, 4, 2, &Param::from(1), TransformKind::Cosine, &m, 10_000, 7).unwrap();
    let b = mc_symbol(Field::R, 4, 2, &Param::from(1), TransformKind::Cosine, &m, 10_000, 7).unwrap();
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    assert!(a.z.abs() < 4.0, "{a:?}");
}
