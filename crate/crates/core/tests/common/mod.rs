#![allow(dead_code)]

use zgv_core::dense::random::MatrixRng;
use zgv_core::dense::ComplexMatrix;
use zgv_core::mfrd::QuadraticPencil;
use zgv_core::C;

/// Random real pencil with SPD mass matrix and otherwise unstructured blocks.
pub fn random_pencil(rng: &mut MatrixRng, n: usize) -> QuadraticPencil<f64> {
    let l0 = rng.real(n, n);
    let l1 = rng.real(n, n);
    let l2 = rng.real(n, n);
    let m = rng.spd(n);
    QuadraticPencil::new(l0, l1, l2, m).unwrap()
}

/// Random pencil with waveguide structure: `L₀` symmetric, `L₁` skew,
/// `L₂`, `M` SPD, so that `W(k, ω)` is Hermitian for real `k`, `ω`.
pub fn hermitian_pencil(rng: &mut MatrixRng, n: usize) -> QuadraticPencil<f64> {
    let l0 = rng.symmetric(n).scale_real(-1.0);
    let l1 = rng.skew(n);
    let l2 = rng.spd(n);
    let m = rng.spd(n);
    QuadraticPencil::new(l0, l1, l2, m).unwrap()
}

pub fn rel_err(a: &[C<f64>], b: &[C<f64>]) -> f64 {
    let d: Vec<C<f64>> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    zgv_core::scalar::vnorm(&d) / zgv_core::scalar::vnorm(b).max(f64::MIN_POSITIVE)
}

pub fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

pub fn mat(rows: &[&[f64]]) -> ComplexMatrix<f64> {
    ComplexMatrix::from_real_rows(rows)
}

/// Nondimensional steel plate: wavenumbers are `kh`, frequencies `ωh/c_t`.
pub fn steel_plate(order: usize, polarization: zgv_core::waveguide::Polarization) -> QuadraticPencil<f64> {
    use zgv_core::waveguide::*;
    let (ct, cl, rho) = STEEL;
    let mat = PlateMaterial::isotropic(ct, cl, rho, 1e-3).unwrap().nondimensional();
    let disc = Discretization::new(order, 1, polarization, BoundaryCondition::FreeFree).unwrap();
    assemble_plate(&mat, &disc).unwrap()
}
