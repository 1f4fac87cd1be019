use crate::error::{Error, Result};
use crate::mfrd::QuadraticPencil;
use crate::refine::gep_omega_squared;
use crate::scalar::Real;

/// Real dispersion curves sampled on a wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionGrid<T: Real = f64> {
    pub k_values: Vec<T>,
    /// `omega_branches[i]` holds the ascending frequencies at `k_values[i]`.
    pub omega_branches: Vec<Vec<T>>,
}

impl<T: Real> DispersionGrid<T> {
    pub fn branch_count(&self) -> usize {
        self.omega_branches.first().map_or(0, Vec::len)
    }

    /// Values of branch `b` across the grid.
    pub fn branch(&self, b: usize) -> Vec<T> {
        self.omega_branches.iter().map(|w| w[b]).collect()
    }
}

/// Ascending non-negative frequencies at `k`; negative `ω²` from roundoff
/// clamps to zero.
pub fn frequencies<T: Real>(pencil: &QuadraticPencil<T>, k: T) -> Result<Vec<T>> {
    let mut w: Vec<T> = gep_omega_squared(pencil, k)?.into_iter().map(|w2| w2.re.max(T::zero()).sqrt()).collect();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(w)
}

fn check_grid<T: Real>(k_values: &[T]) -> Result<()> {
    if k_values.is_empty() {
        return Err(Error::InvalidConfig("empty wavenumber grid".into()));
    }
    if k_values.iter().any(|k| !k.is_finite()) || k_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidConfig("wavenumber grid must be finite and strictly ascending".into()));
    }
    Ok(())
}

/// Frequencies on every grid point, evaluated concurrently.
///
/// Branches are the sorted frequency lists. For two sorted lists of equal
/// length the order-preserving pairing is the nearest-value matching, so no
/// reordering across `k` is needed.
pub fn dispersion_sweep<T: Real>(pencil: &QuadraticPencil<T>, k_values: &[T]) -> Result<DispersionGrid<T>> {
    check_grid(k_values)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(k_values.len());
    let chunk = k_values.len().div_ceil(threads);
    let parts: Vec<Result<Vec<Vec<T>>>> = std::thread::scope(|s| {
        let handles: Vec<_> = k_values
            .chunks(chunk)
            .map(|ks| s.spawn(move || ks.iter().map(|&k| frequencies(pencil, k)).collect::<Result<Vec<_>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut omega_branches = Vec::with_capacity(k_values.len());
    for p in parts {
        omega_branches.extend(p?);
    }
    Ok(DispersionGrid {
        k_values: k_values.to_vec(),
        omega_branches,
    })
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;
const MAX_BRENT: usize = 200;

/// Brent minimization of `f` on `[a, c]` from an interior `b` with
/// `f(b) ≤ min(f(a), f(c))`; stops when the bracket is below
/// `2·tol·(1 + |x|)`.
fn brent_min<T: Real>(mut f: impl FnMut(T) -> Result<T>, mut a: T, b: T, mut c: T, tol: T) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let g = T::lit(GOLDEN);
    let (mut x, mut w, mut v) = (b, b, b);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d = T::zero();
    let mut e = T::zero();
    for _ in 0..MAX_BRENT {
        let xm = half * (a + c);
        let tol1 = half * tol * (T::one() + x.abs());
        let tol2 = T::lit(2.0) * tol1;
        if (x - xm).abs() <= tol2 - half * (c - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = T::lit(2.0) * (q - r);
            if q > T::zero() {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (half * q * e).abs() && p > q * (a - x) && p < q * (c - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || c - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { c - x };
            d = g * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > T::zero() {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                c = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                c = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok((x, fx))
}

/// Tolerances of the finite-difference oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions<T: Real = f64> {
    /// Extremum location tolerance, relative to `1 + |k|`.
    pub k_tol: T,
    /// Extrema whose frequency lies within `gap · (1 + ω)` of a neighbouring
    /// branch are crossing kinks.
    pub gap: T,
    /// One-sided slopes at distance `probe · (1 + |k|)` above `kink_slope`
    /// mark a kink.
    pub probe: T,
    pub kink_slope: T,
}

impl<T: Real> Default for OracleOptions<T> {
    fn default() -> Self {
        Self {
            k_tol: T::lit(1e-8),
            gap: T::lit(1e-5),
            probe: T::lit(1e-6),
            kink_slope: T::lit(1e-2),
        }
    }
}

/// Interior extrema of the real dispersion curves on the grid, refined by
/// safeguarded parabolic interpolation; crossing kinks are discarded.
pub fn zgv_oracle<T: Real>(pencil: &QuadraticPencil<T>, k_values: &[T]) -> Result<Vec<(T, T)>> {
    zgv_oracle_with(pencil, k_values, &OracleOptions::default())
}

pub fn zgv_oracle_with<T: Real>(pencil: &QuadraticPencil<T>, k_values: &[T], opts: &OracleOptions<T>) -> Result<Vec<(T, T)>> {
    let grid = dispersion_sweep(pencil, k_values)?;
    let ks = &grid.k_values;
    let nk = ks.len();
    if nk < 4 {
        return Ok(vec![]);
    }
    let mut found = Vec::new();
    for b in 0..grid.branch_count() {
        let f = grid.branch(b);
        let slope = |i: usize| (f[i + 1] - f[i - 1]) / (ks[i + 1] - ks[i - 1]);
        let mut last_node = usize::MAX;
        for i in 1..nk - 2 {
            let (s0, s1) = (slope(i), slope(i + 1));
            if !(s0 * s1 < T::zero()) {
                continue;
            }
            let is_max = s0 > T::zero();
            let sign = if is_max { -T::one() } else { T::one() };
            let j = if sign * f[i] <= sign * f[i + 1] { i } else { i + 1 };
            if j == last_node || sign * f[j] > sign * f[j - 1] || sign * f[j] > sign * f[j + 1] {
                continue;
            }
            last_node = j;
            let eval = |k: T| -> Result<T> { Ok(sign * frequencies(pencil, k)?[b]) };
            let (k_star, _) = brent_min(eval, ks[j - 1], ks[j], ks[j + 1], opts.k_tol)?;
            if !(k_star > ks[0] && k_star < ks[nk - 1]) {
                continue;
            }
            let w = frequencies(pencil, k_star)?;
            let omega = w[b];
            let mut gap = T::infinity();
            if b > 0 {
                gap = gap.min(omega - w[b - 1]);
            }
            if b + 1 < w.len() {
                gap = gap.min(w[b + 1] - omega);
            }
            if gap <= opts.gap * (T::one() + omega) {
                continue;
            }
            let eps = opts.probe * (T::one() + k_star.abs());
            let up = (frequencies(pencil, k_star + eps)?[b] - omega) / eps;
            let down = (omega - frequencies(pencil, k_star - eps)?[b]) / eps;
            if up.abs() > opts.kink_slope || down.abs() > opts.kink_slope {
                continue;
            }
            found.push((k_star, omega));
        }
    }
    found.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    Ok(found)
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * T::lit(i as f64) / T::lit((n - 1) as f64)).collect(),
    }
}
