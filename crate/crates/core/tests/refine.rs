mod common;

use common::{c, mat};
use proptest::prelude::*;
use zgv_core::dense::{smallest_singular_triplets, svd, ComplexMatrix};
use zgv_core::mfrd::QuadraticPencil;
use zgv_core::refine::*;
use zgv_core::scalar::vnorm;
use zgv_core::waveguide::{example21, golden};
use zgv_core::C;

fn refined_zgv() -> (QuadraticPencil<f64>, GaussNewtonState<f64>) {
    let p = example21::<f64>();
    let (l0, m0) = (c(0.0, 1.06), c(0.0576, 0.0));
    let (u, y) = initial_vectors(&p, l0, m0).unwrap();
    let s = gauss_newton(&p, &u, &y, l0, m0, 1e-13, 30).unwrap();
    (p, s)
}

fn crossing_state(p: &QuadraticPencil<f64>) -> GaussNewtonState<f64> {
    let (l0, m0) = (c(0.0, 0.421), c(0.1231, 0.0));
    refine_candidate(p, l0, m0, default_tol(p), 30, 0.1).unwrap()
}

#[test]
fn evaluate_w_at_origin_is_l0() {
    let p = example21::<f64>();
    assert_eq!(evaluate_w(&p, c(0.0, 0.0), c(0.0, 0.0)), *p.l0());
}

#[test]
fn w_is_nearly_singular_at_printed_zgv() {
    let p = example21::<f64>();
    let (k, w) = golden::ZGV;
    let m = evaluate_w(&p, c(golden::parse(k), 0.0), c(golden::parse(w), 0.0));
    let s = svd(&m).unwrap();
    assert!(s.sigma_min() <= 1e-3 * s.sigma_max());
}

#[test]
fn initial_vectors_span_exact_kernel() {
    let p = example21::<f64>();
    let w2 = gep_omega_squared(&p, 0.0).unwrap()[1];
    let (u, y) = initial_vectors(&p, c(0.0, 0.0), w2).unwrap();
    let w = p.eval_lambda_mu(c(0.0, 0.0), w2);
    assert!(vnorm(&w.matvec(&u)) <= 1e-10 * w.norm_fro());
    assert!(vnorm(&w.transpose_matvec(&y)) <= 1e-10 * w.norm_fro());
    assert!((vnorm(&u) - 1.0).abs() < 1e-12 && (vnorm(&y) - 1.0).abs() < 1e-12);
}

#[test]
fn initial_vectors_near_zgv() {
    let p = example21::<f64>();
    let (l0, m0) = (c(0.0, 1.0642), c(0.2393 * 0.2393, 0.0));
    let (u, _) = initial_vectors(&p, l0, m0).unwrap();
    let w = p.eval_lambda_mu(l0, m0);
    assert!(vnorm(&w.matvec(&u)) <= 1e-3 * w.norm_fro());
}

#[test]
fn initial_vectors_for_orthogonal_w_are_unit() {
    let r = mat(&[&[0.6, -0.8], &[0.8, 0.6]]);
    let z = ComplexMatrix::zeros(2, 2);
    let p = QuadraticPencil::new(r, z.clone(), z, ComplexMatrix::identity(2)).unwrap();
    let (u, y) = initial_vectors(&p, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!((vnorm(&u) - 1.0).abs() < 1e-12 && (vnorm(&y) - 1.0).abs() < 1e-12);
}

#[test]
fn converges_to_printed_zgv_in_few_iterations() {
    let p = example21::<f64>();
    let (l0, m0) = (c(0.0, 1.06), c(0.0576, 0.0));
    let (u, y) = initial_vectors(&p, l0, m0).unwrap();
    let s = gauss_newton(&p, &u, &y, l0, m0, default_tol(&p), DEFAULT_MAXIT).unwrap();
    assert!(s.iterations <= 8);
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    assert_eq!(format!("{:.4}", pt.k), golden::ZGV.0);
    assert_eq!(format!("{:.4}", pt.omega), golden::ZGV.1);
    assert_eq!(pt.classification, Classification::Zgv);
    assert!((vnorm(&s.u) - 1.0).abs() <= 1e-8 && (vnorm(&s.y) - 1.0).abs() <= 1e-8);
}

#[test]
fn exact_solution_is_a_fixed_point() {
    let (p, s) = refined_zgv();
    assert!(s.residual_norm <= 1e-12);
    let (_, step) = gauss_newton_step(&p, &s).unwrap();
    assert!(step <= 1e-10, "step {step:e}");
}

#[test]
fn local_convergence_is_quadratic() {
    let (p, s) = refined_zgv();
    let bump = |v: &[C<f64>]| -> Vec<C<f64>> { v.iter().map(|x| x + c(1e-2, 1e-2)).collect() };
    let l0 = s.lambda + c(1e-2, 1e-2);
    let m0 = s.mu + c(1e-2, 1e-2);
    let r = gauss_newton(&p, &bump(&s.u), &bump(&s.y), l0, m0, 1e-14, 30).unwrap();
    assert!(r.iterations <= 8);
    let h: Vec<f64> = r.history.iter().copied().filter(|&x| x > 1e-13).collect();
    assert!(h.len() >= 3, "history {:?}", r.history);
    let ratios: Vec<f64> = h.windows(2).map(|w| w[1] / (w[0] * w[0])).collect();
    let last = &ratios[ratios.len().saturating_sub(2)..];
    let (lo, hi) = last.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi <= 10.0 * lo, "ratios {ratios:?} history {:?}", r.history);
}

#[test]
fn jacobian_full_rank_at_zgv() {
    let (p, s) = refined_zgv();
    let (lo, hi) = jacobian_singular_range(&p, &s).unwrap();
    assert!(lo >= 1e-8 * hi);
}

#[test]
fn jacobian_matches_finite_differences() {
    let (p, s) = refined_zgv();
    let n = p.n();
    let j = jacobian(&p, &s.u, &s.y, s.lambda, s.mu);
    let mut rng = zgv_core::dense::random::MatrixRng::new(31);
    let d = rng.vector::<f64>(2 * n + 2);
    let h = 1e-7;
    let shift = |v: &[C<f64>], off: usize| -> Vec<C<f64>> { v.iter().enumerate().map(|(i, x)| x + d[off + i] * h).collect() };
    let f0 = residual(&p, &s.u, &s.y, s.lambda, s.mu);
    let f1 = residual(&p, &shift(&s.u, 0), &shift(&s.y, n), s.lambda + d[2 * n] * h, s.mu + d[2 * n + 1] * h);
    let jd = j.matvec(&d);
    for i in 0..2 * n + 1 {
        let fd = (f1[i] - f0[i]) / h;
        assert!((fd - jd[i]).norm() <= 1e-5 * (1.0 + jd[i].norm()), "row {i}: {fd} vs {}", jd[i]);
    }
    // normalization rows are only real-differentiable
    for i in 2 * n + 1..2 * n + 3 {
        let fd = (f1[i].re - f0[i].re) / h;
        assert!((fd - jd[i].re).abs() <= 1e-5, "row {i}");
    }
}

#[test]
fn gep_omega_at_zero_matches_printed_values() {
    let p = example21::<f64>();
    let pairs = gep_omega(&p, 0.0).unwrap();
    let omegas: Vec<String> = pairs.iter().map(|(w2, _)| format!("{:.4}", w2.sqrt().re)).collect();
    assert_eq!(omegas, golden::TRIVIAL_OMEGA.to_vec());
    for (w2, u) in &pairs {
        let w = p.eval_lambda_mu(c(0.0, 0.0), *w2);
        assert!(vnorm(&w.matvec(u)) <= 1e-10 * w.norm_fro());
    }
}

#[test]
fn gep_omega_diagonal_case() {
    let d = [0.5, 2.0, 3.5];
    let z = ComplexMatrix::zeros(3, 3);
    let p = QuadraticPencil::new(
        ComplexMatrix::diag(&d.map(|x| c(-x, 0.0))),
        z,
        ComplexMatrix::identity(3),
        ComplexMatrix::identity(3),
    )
    .unwrap();
    let w2 = gep_omega_squared(&p, 0.0).unwrap();
    for (g, want) in w2.iter().zip(d) {
        assert!((g - c(want, 0.0)).norm() <= 1e-14);
    }
}

#[test]
fn crossing_is_classified_as_crossing() {
    let p = example21::<f64>();
    let s = crossing_state(&p);
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    assert_eq!(pt.classification, Classification::Crossing);
    // the printed crossing wavenumber is 0.42355 rounded up
    assert!((pt.k - golden::parse(golden::CROSSING.0)).abs() <= 1e-4, "k = {}", pt.k);
    assert_eq!(format!("{:.4}", pt.omega), golden::CROSSING.1);
    assert!(pt.omega_gap <= 1e-6);
}

#[test]
fn non_real_mu_is_rejected() {
    let (p, mut s) = refined_zgv();
    s.mu = s.mu + c(0.0, 0.1 * s.mu.norm());
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    assert_eq!(pt.classification, Classification::Rejected);
}

#[test]
fn small_k_is_trivial() {
    let p = example21::<f64>();
    let l0 = c(0.0, 1e-3);
    let w2 = gep_omega_squared(&p, 0.0).unwrap()[0];
    let s = refine_candidate(&p, l0, w2, default_tol(&p), 30, 0.1).unwrap();
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    assert_eq!(pt.classification, Classification::TrivialZgv);
}

#[test]
fn zgv_frequency_is_in_gep_spectrum() {
    let (p, s) = refined_zgv();
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    let w2 = gep_omega_squared(&p, pt.k).unwrap();
    assert!(w2.iter().any(|x| (x.sqrt().re - pt.omega).abs() <= 1e-8 * pt.omega));
}

#[test]
fn mirrored_start_converges_to_mirrored_point() {
    let (p, s) = refined_zgv();
    let pt = classify(&p, &s, &ClassifyOptions::default()).unwrap();
    let l0 = c(0.0, -pt.k);
    let m0 = c(pt.omega * pt.omega, 0.0);
    let (u, y) = initial_vectors(&p, l0, m0).unwrap();
    let r = gauss_newton(&p, &u, &y, l0, m0, 1e-12, 30).unwrap();
    let q = classify(&p, &r, &ClassifyOptions::default()).unwrap();
    assert_eq!(q.classification, Classification::Zgv);
    assert!((q.k + pt.k).abs() <= 1e-10 && (q.omega - pt.omega).abs() <= 1e-10);
}

#[test]
fn smallest_triplet_at_zgv_is_simple() {
    let (p, s) = refined_zgv();
    let t = smallest_singular_triplets(&p.eval_lambda_mu(s.lambda, s.mu), 2).unwrap();
    assert!(t[0].sigma <= 1e-12 && t[1].sigma > 1e-2);
}

proptest! {
    #[test]
    fn residual_is_phase_invariant(a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let (p, s) = refined_zgv();
        let pa = C::from_polar(1.0, a);
        let pb = C::from_polar(1.0, b);
        let u: Vec<C<f64>> = s.u.iter().map(|x| x * pa).collect();
        let y: Vec<C<f64>> = s.y.iter().map(|x| x * pb).collect();
        let mut lam = s.lambda;
        lam += c(1e-3, 2e-3); // away from the solution so F is not trivially zero
        let n = p.n();
        let f0 = residual(&p, &s.u, &s.y, lam, s.mu);
        let f1 = residual(&p, &u, &y, lam, s.mu);
        prop_assert!((vnorm(&f0[..2 * n + 1]) - vnorm(&f1[..2 * n + 1])).abs() <= 1e-14);
        prop_assert!((vnorm(&f0) - vnorm(&f1)).abs() <= 1e-14);
    }
}
