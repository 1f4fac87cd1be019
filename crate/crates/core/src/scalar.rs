//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All kernels are written against [`Real`] and operate on `Complex<T>`
//! entries, so the same code serves `f64` (the default used throughout the
//! scanner) and `f32` (useful for quick experiments on the dense kernels).

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Complex scalar over a real field `T`.
pub type C<T> = Complex<T>;

/// Real floating-point field the library is generic over.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal into this field.
    fn lit(x: f64) -> Self;

    /// Lossy conversion back to `f64` for reporting.
    fn as_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

#[inline]
pub fn cz<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

#[inline]
pub fn cre<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}

/// Imaginary unit times `x`.
#[inline]
pub(crate) fn cim<T: Real>(x: T) -> C<T> {
    C::new(T::zero(), x)
}

/// Euclidean norm of a complex vector.
pub fn vnorm<T: Real>(v: &[C<T>]) -> T {
    // scaled accumulation avoids overflow for the large entries of SI-unit pencils
    let scale = v.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let s: T = v
        .iter()
        .map(|z| {
            let a = z.re / scale;
            let b = z.im / scale;
            a * a + b * b
        })
        .sum();
    scale * s.sqrt()
}

/// `xᴴ y`.
pub fn vdot<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = cz();
    for (a, b) in x.iter().zip(y) {
        acc += a.conj() * b;
    }
    acc
}

/// `xᵀ y` without conjugation.
pub fn vdotu<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = cz();
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}

/// `y += alpha * x`.
#[inline]
pub fn axpy<T: Real>(alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Scales `v` to unit Euclidean norm; returns the original norm.
pub fn normalize<T: Real>(v: &mut [C<T>]) -> T {
    let nrm = vnorm(v);
    if nrm > T::zero() {
        let inv = T::one() / nrm;
        for z in v.iter_mut() {
            *z = z.scale(inv);
        }
    }
    nrm
}
