mod common;

use common::{c, mat, random_pencil, rel_err};
use proptest::prelude::*;
use zgv_core::dense::random::MatrixRng;
use zgv_core::dense::{eigvals, svd, ComplexMatrix};
use zgv_core::mfrd::*;
use zgv_core::scalar::vnorm;
use zgv_core::waveguide::example21;
use zgv_core::{Error, C};

#[test]
fn n1_matches_hand_expansion() {
    let (l0, l1, l2, m) = (-1.5, 0.7, 2.0, 3.0);
    let delta = 0.1;
    let s = 1.0 + delta;
    let p = QuadraticPencil::from_real_rows(&[&[l0]], &[&[l1]], &[&[l2]], &[&[m]]).unwrap();
    let o = build_explicit_deltas(&p, delta).unwrap();
    // |C2 C1 0; l2 l1 m; s²l2 sl1 m| = C2 (l1 m − s l1 m) − C1 (l2 m − s² l2 m)
    let a = l1 * m - s * l1 * m;
    let b = l2 * m - s * s * l2 * m;
    let want0 = mat(&[&[a, b], &[b, 0.0]]);
    // −|C2 C0 0; l2 l0 m; s²l2 l0 m| = −C2·0 + C0 (l2 m − s² l2 m)
    let want1 = mat(&[&[0.0, 0.0], &[0.0, b]]);
    // −|C2 C1 C0; l2 l1 l0; s²l2 sl1 l0|
    let g3 = s * l0 * l1 - l1 * l0;
    let g4 = s * s * l0 * l2 - l2 * l0;
    let g5 = s * s * l1 * l2 - s * l2 * l1;
    let wantm = mat(&[&[g3, g4], &[g4, g5]]);
    for (got, want) in [(&o.delta0, &want0), (&o.delta1, &want1), (&o.delta_m, &wantm)] {
        assert!((got - want).max_abs() <= 1e-14, "{got:?} vs {want:?}");
    }
}

#[test]
fn c_matrices_encode_eta_minus_lambda_squared() {
    let mut rng = MatrixRng::new(1);
    for _ in 0..100 {
        let lam: C<f64> = rng.scalar();
        let eta: C<f64> = rng.scalar();
        let mut a = c0::<f64>();
        a.add_scaled(lam, &c1());
        a.add_scaled(eta, &c2());
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        assert!((det - (eta - lam * lam)).norm() <= 1e-14);
    }
}

#[test]
fn expansion_and_blocks_agree() {
    let mut rng = MatrixRng::new(2);
    let mut pencils = vec![example21::<f64>()];
    for n in 1..=4 {
        pencils.push(random_pencil(&mut rng, n));
    }
    for p in &pencils {
        for delta in [0.0, 1e-3, 1e-2, 1e-1] {
            let o = build_explicit_deltas(p, delta).unwrap();
            assert!(o.assembly_discrepancy <= 1e-12 * o.delta0.max_abs().max(o.delta_m.max_abs()));
        }
    }
}

#[test]
fn delta_zero_makes_delta0_singular() {
    let o = build_explicit_deltas(&example21::<f64>(), 0.0).unwrap();
    let s = svd(&o.delta0).unwrap();
    assert!(s.sigma_min() <= 1e-10 * s.sigma_max());
}

#[test]
fn positive_delta_makes_delta0_nonsingular() {
    let o = build_explicit_deltas(&example21::<f64>(), 1e-2).unwrap();
    let s = svd(&o.delta0).unwrap();
    assert!(s.sigma_min() > 1e-8 * s.sigma_max(), "cond = {:e}", s.sigma_max() / s.sigma_min());
}

#[test]
fn oracle_cap_enforced() {
    let mut rng = MatrixRng::new(3);
    let p = random_pencil(&mut rng, 13);
    assert!(matches!(build_explicit_deltas(&p, 1e-2), Err(Error::OracleTooLarge { n: 13, cap: 12 })));
    assert!(build_explicit_deltas_capped(&p, 1e-2, 13).is_ok());
}

#[test]
fn singular_mass_rejected() {
    let e = QuadraticPencil::<f64>::from_real_rows(
        &[&[1.0, 0.0], &[0.0, 1.0]],
        &[&[0.0, 0.0], &[0.0, 0.0]],
        &[&[1.0, 0.0], &[0.0, 1.0]],
        &[&[1.0, 2.0], &[2.0, 4.0]],
    )
    .unwrap_err();
    assert!(matches!(e, Error::SingularMass { .. }));
}

#[test]
fn pencil_validation() {
    let a = mat(&[&[1.0, 0.0], &[0.0, 1.0]]);
    let b = mat(&[&[1.0]]);
    assert!(matches!(
        QuadraticPencil::new(a.clone(), a.clone(), b, a.clone()),
        Err(Error::DimensionMismatch(_))
    ));
    let mut cplx = a.clone();
    cplx[(0, 1)] = c(0.0, 1.0);
    assert!(matches!(
        QuadraticPencil::new(a.clone(), cplx, a.clone(), a.clone()),
        Err(Error::NonRealEntries(_))
    ));
    let mut nan = a.clone();
    nan[(1, 1)] = c(f64::NAN, 0.0);
    assert!(matches!(QuadraticPencil::new(nan, a.clone(), a.clone(), a), Err(Error::NonFinite(_))));
}

#[test]
fn example21_cache_is_valid() {
    let p = example21::<f64>();
    let cache = build_cache(&p, c(0.0, 1.0), 1e-2).unwrap();
    assert!(cache.schur_left().r.is_finite() && cache.schur_right().r.is_finite());
    let l = cache.l_delta();
    let s = 1.01;
    let sig = c(0.0, 1.0) * s;
    let mut want = p.l0().clone();
    want.add_scaled(sig, p.l1());
    want.add_scaled(sig * sig, p.l2());
    assert!((&l - &want).max_abs() <= 1e-15);
    // Schur factors reproduce M⁻¹L(δ) and L(0)ᵀM⁻ᵀ
    let left = cache.m_factor().solve(&l);
    assert!((&cache.schur_left().reconstruct() - &left).norm_fro() <= 1e-12 * left.norm_fro());
}

#[test]
fn decoupled_pencil_always_collides() {
    // M = I, L1 = L2 = 0: the Sylvester operator is X ↦ XL₀ᵀ − L₀X, whose
    // spectrum {λ_j − λ_i} always contains 0.
    let mut rng = MatrixRng::new(4);
    let n = 4;
    let l0 = rng.real(n, n);
    let z = ComplexMatrix::zeros(n, n);
    let p = QuadraticPencil::new(l0, z.clone(), z, ComplexMatrix::identity(n)).unwrap();
    for sigma in [c(0.0, 0.0), c(0.0, 1.0), c(0.3, -2.0)] {
        let e = build_cache(&p, sigma, 1e-2).unwrap_err();
        assert!(matches!(e, Error::EigenvalueCollision { .. }), "{e:?}");
    }
}

#[test]
fn zero_shift_always_collides() {
    let e = build_cache(&example21::<f64>(), c(0.0, 0.0), 1e-2).unwrap_err();
    assert!(matches!(e, Error::EigenvalueCollision { .. }));
}

fn sorted_close(a: &[C<f64>], b: &[C<f64>]) -> f64 {
    // greedy nearest matching
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn nearby_shifts_move_both_spectra_slightly() {
    let mut rng = MatrixRng::new(5);
    let p = random_pencil(&mut rng, 4);
    let s0 = c(0.1, 0.7);
    let a = build_cache(&p, s0, 1e-2).unwrap();
    let b = build_cache(&p, s0 + c(1e-6, 0.0), 1e-2).unwrap();
    let dl = sorted_close(&a.schur_left().eigenvalues(), &b.schur_left().eigenvalues());
    let dr = sorted_close(&a.schur_right().eigenvalues(), &b.schur_right().eigenvalues());
    assert!(dl > 0.0 && dl <= 1e-4, "left moved {dl:e}");
    assert!(dr > 0.0 && dr <= 1e-4, "right moved {dr:e}");
}

#[test]
fn zero_input_gives_zero_output() {
    let p = example21::<f64>();
    let cache = build_cache(&p, c(0.0, 0.8), 1e-2).unwrap();
    let z = apply_shift_invert(&cache, &vec![c(0.0, 0.0); 18]).unwrap();
    assert!(z.iter().all(|v| v.norm() == 0.0));
    assert!(matches!(apply_shift_invert(&cache, &[c(1.0, 0.0)]), Err(Error::DimensionMismatch(_))));
}

#[test]
fn example21_apply_matches_oracle() {
    let p = example21::<f64>();
    let sigma = c(0.0, 0.8);
    let cache = build_cache(&p, sigma, 1e-2).unwrap();
    let o = build_explicit_deltas(&p, 1e-2).unwrap();
    let mut rng = MatrixRng::new(6);
    for _ in 0..5 {
        let y = rng.vector::<f64>(18);
        let z = apply_shift_invert(&cache, &y).unwrap();
        let zo = o.shift_invert_solve(sigma, &y).unwrap();
        assert!(rel_err(&z, &zo) <= 1e-10, "rel err {:e}", rel_err(&z, &zo));
        assert!(o.shift_invert_residual(sigma, &y, &z) <= 1e-9);
    }
}

#[test]
fn apply_is_linear() {
    let mut rng = MatrixRng::new(7);
    let p = random_pencil(&mut rng, 5);
    let cache = build_cache(&p, c(0.2, 1.3), 1e-2).unwrap();
    let y = rng.vector::<f64>(50);
    let yp = rng.vector::<f64>(50);
    let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
    let comb: Vec<_> = y.iter().zip(&yp).map(|(u, v)| a * u + b * v).collect();
    let lhs = cache.apply(&comb);
    let (zy, zyp) = (cache.apply(&y), cache.apply(&yp));
    let rhs: Vec<_> = zy.iter().zip(&zyp).map(|(u, v)| a * u + b * v).collect();
    assert!(rel_err(&lhs, &rhs) <= 1e-12);
}

#[test]
fn rayleigh_mu_on_oracle_eigenvectors() {
    let p = example21::<f64>();
    let o = build_explicit_deltas(&p, 1e-2).unwrap();
    let pairs = o.eigenpairs().unwrap();
    let mut checked = 0;
    for pair in pairs.iter().filter(|e| e.value.norm() > 1e-3 && e.value.norm() < 10.0) {
        let structured = match rayleigh_mu(&p, 1e-2, &pair.vector) {
            Ok(mu) => mu,
            Err(Error::DegenerateQuotient { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let explicit = o.rayleigh_mu(&pair.vector);
        assert!((structured - explicit).norm() <= 1e-10 * explicit.norm().max(1.0));
        let eta = rayleigh_eta(&p, 1e-2, &pair.vector).unwrap();
        assert!((eta - o.rayleigh_eta(&pair.vector)).norm() <= 1e-10 * eta.norm().max(1.0));
        checked += 1;
    }
    assert!(checked >= 4, "only {checked} eigenvectors checked");
}

#[test]
fn rayleigh_eta_recovers_lambda_squared_for_finite_eigenpairs() {
    let p = example21::<f64>();
    let o = build_explicit_deltas(&p, 1e-2).unwrap();
    let mut checked = 0;
    for pair in o.eigenpairs().unwrap() {
        if pair.value.norm() > 10.0 {
            continue;
        }
        let Ok(eta) = rayleigh_eta(&p, 1e-2, &pair.vector) else { continue };
        let lam = pair.value;
        assert!((eta - lam * lam).norm() <= 1e-6 * (1.0 + lam.norm_sqr()), "η {eta} λ² {}", lam * lam);
        checked += 1;
    }
    assert!(checked >= 4);
}

#[test]
fn degenerate_quotient_for_zero_vector() {
    let p = example21::<f64>();
    let e = rayleigh_mu(&p, 1e-2, &vec![c(0.0, 0.0); 18]).unwrap_err();
    assert!(matches!(e, Error::DegenerateQuotient { .. }));
}

#[test]
fn random_n2_rayleigh_matches_oracle() {
    let mut rng = MatrixRng::new(8);
    for _ in 0..20 {
        let p = random_pencil(&mut rng, 2);
        let o = build_explicit_deltas(&p, 1e-2).unwrap();
        let z = rng.vector::<f64>(8);
        let s = rayleigh_mu(&p, 1e-2, &z).unwrap();
        let e = o.rayleigh_mu(&z);
        assert!((s - e).norm() <= 1e-12 * e.norm().max(1.0) * 10.0, "{s} vs {e}");
    }
}

#[test]
fn oracle_spectrum_contains_paper_candidate() {
    let o = build_explicit_deltas(&example21::<f64>(), 1e-2).unwrap();
    let ev = eigvals(&zgv_core::dense::LuFactorization::new(&o.delta0).unwrap().solve(&o.delta1)).unwrap();
    assert!(ev.iter().any(|l| l.re.abs() <= 1e-6 && (l.im - 1.06).abs() <= 0.02), "{ev:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn structured_apply_matches_oracle(seed in any::<u64>(), n in 1usize..=6, di in 0usize..3) {
        let mut rng = MatrixRng::new(seed);
        let p = random_pencil(&mut rng, n);
        let delta = [1e-1, 1e-2, 1e-3][di];
        let sigma: C<f64> = rng.scalar::<f64>() * 2.0;
        let cache = match build_cache(&p, sigma, delta) {
            Ok(c) => c,
            Err(Error::EigenvalueCollision { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let o = build_explicit_deltas(&p, delta).unwrap();
        let y = rng.vector::<f64>(2 * n * n);
        let z = cache.apply(&y);
        let zo = o.shift_invert_solve(sigma, &y).unwrap();
        // the dense solve itself loses digits when Δ₁ − σΔ₀ is ill conditioned
        let cond = {
            let mut a = o.delta1.clone();
            a.add_scaled(-sigma, &o.delta0);
            let s = svd(&a).unwrap();
            s.sigma_max() / s.sigma_min()
        };
        prop_assert!(rel_err(&z, &zo) <= 1e-9f64.max(1e-14 * cond), "err {:e} cond {:e}", rel_err(&z, &zo), cond);
    }

    #[test]
    fn rayleigh_mu_is_homogeneous(seed in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let mut rng = MatrixRng::new(seed);
        let p = random_pencil(&mut rng, 3);
        let z = rng.vector::<f64>(18);
        let a = rayleigh_mu(&p, 1e-2, &z).unwrap();
        let zs: Vec<_> = z.iter().map(|v| v * c(re, im)).collect();
        let b = rayleigh_mu(&p, 1e-2, &zs).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn scaled_by_7i_is_identical(seed in any::<u64>()) {
        let mut rng = MatrixRng::new(seed);
        let p = example21::<f64>();
        let z = rng.vector::<f64>(18);
        let zs: Vec<_> = z.iter().map(|v| v * c(0.0, 7.0)).collect();
        let a = rayleigh_mu(&p, 1e-2, &z).unwrap();
        let b = rayleigh_mu(&p, 1e-2, &zs).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
        prop_assert!(vnorm(&zs) > 0.0);
    }
}
