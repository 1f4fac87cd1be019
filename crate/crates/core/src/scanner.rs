//! Sweep of shift targets `σ = i k₀` across `[k_a, k_b]`.
//!
//! At every target the `m` eigenvalues of the MFRD pencil closest to `σ` are
//! computed, filtered for approximate realness, refined by Gauss-Newton and
//! classified. After a target the next one is
//! `k₀ ← max(k₀ + Δk, 0.95 · max k*)` over the ZGV wavenumbers `k*` found so
//! far, so targets increase strictly.

use crate::arnoldi::{krylov_schur, ArnoldiOptions};
use crate::error::{Error, Result};
use crate::mfrd::{build_cache, rayleigh_eta, rayleigh_mu, QuadraticPencil};
use crate::refine::{
    classify, default_tol, initial_vectors, refine_candidate, Classification, ClassifyOptions, GaussNewtonState, ZgvPoint,
    DEFAULT_MAXIT,
};
use crate::refine::gep_omega;
use crate::scalar::{Real, C};

/// Thresholds of the realness pre-filter applied to raw candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefilter<T: Real = f64> {
    /// `|Re λ| ≤ real · (1 + |λ|)`.
    pub real: T,
    /// `|Im μ| ≤ imag · (1 + |μ|)`.
    pub imag: T,
    /// `|η − λ²| ≤ eta · (1 + |λ|²)`.
    pub eta: T,
}

impl<T: Real> Default for Prefilter<T> {
    fn default() -> Self {
        Self {
            real: T::lit(1e-2),
            imag: T::lit(1e-2),
            eta: T::lit(1e-6),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig<T: Real = f64> {
    pub k_a: T,
    pub k_b: T,
    pub dk: T,
    /// Eigenvalues requested per target.
    pub m: usize,
    pub delta: T,
    /// Solver options; `arnoldi.m` is overridden by `m`.
    pub arnoldi: ArnoldiOptions<T>,
    pub filters: Prefilter<T>,
    /// Gauss-Newton tolerance on `‖F‖`; `None` selects [`default_tol`].
    pub newton_tol: Option<T>,
    pub newton_maxit: usize,
    pub dedup_tol: T,
    /// Worker count; above one the interval is split into disjoint pieces
    /// scanned concurrently.
    pub threads: usize,
}

impl<T: Real> ScanConfig<T> {
    /// Defaults `m = 8`, `δ = 1e-2`, `dedup_tol = 1e-6`, one thread.
    pub fn new(k_a: T, k_b: T, dk: T) -> Self {
        Self {
            k_a,
            k_b,
            dk,
            m: 8,
            delta: T::lit(1e-2),
            arnoldi: ArnoldiOptions::with_m(8),
            filters: Prefilter::default(),
            newton_tol: None,
            newton_maxit: DEFAULT_MAXIT,
            dedup_tol: T::lit(1e-6),
            threads: 1,
        }
    }

    /// Sets `m` and resizes the Krylov subspace to match.
    pub fn with_m(mut self, m: usize) -> Self {
        let seed = self.arnoldi.seed;
        self.m = m;
        self.arnoldi = ArnoldiOptions {
            seed,
            ..ArnoldiOptions::with_m(m)
        };
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.k_a.is_finite() && self.k_b.is_finite() && self.k_a < self.k_b) {
            return bad(format!("need k_a < k_b, got [{}, {}]", self.k_a, self.k_b));
        }
        if !(self.dk > T::zero() && self.dk.is_finite()) {
            return bad(format!("dk must be positive, got {}", self.dk));
        }
        if self.m == 0 {
            return bad("m must be at least 1".into());
        }
        if !(self.delta > T::zero() && self.delta.is_finite()) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.dedup_tol >= T::zero()) {
            return bad("dedup_tol must be non-negative".into());
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        self.arnoldi_options().validate()
    }

    fn arnoldi_options(&self) -> ArnoldiOptions<T> {
        let mut o = self.arnoldi.clone();
        o.m = self.m;
        o.max_subspace = o.max_subspace.max(2 * self.m + 2);
        o
    }
}

/// Eigenvalue triple `(λ, μ, η)` of the MFRD problem with its eigenvector.
#[derive(Debug, Clone)]
pub struct Mep3Candidate<T: Real = f64> {
    pub lambda: C<T>,
    pub mu: C<T>,
    pub eta: C<T>,
    pub z: Vec<C<T>>,
    pub source_target: T,
}

/// What happened to one candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateOutcome<T: Real = f64> {
    /// Rejected by the named pre-filter before refinement.
    Filtered(&'static str),
    /// Refinement failed with the given message.
    RefineFailed(String),
    /// Refined and classified.
    Refined { k: T, omega: T, classification: Classification, residual: T },
}

#[derive(Debug, Clone)]
pub struct CandidateRecord<T: Real = f64> {
    pub candidate: Mep3Candidate<T>,
    pub outcome: CandidateOutcome<T>,
}

/// Per-target diagnostics.
#[derive(Debug, Clone)]
pub struct TargetRecord<T: Real = f64> {
    pub k0: T,
    pub sigma: C<T>,
    /// `σ` was moved off an eigenvalue collision.
    pub nudged: bool,
    pub applies: usize,
    pub restarts: usize,
    pub converged_pairs: usize,
    /// Failure that ended this target early, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ScanReport<T: Real = f64> {
    /// Deduplicated ZGV points in `[k_a, k_b]`, ascending in `k`.
    pub points: Vec<ZgvPoint<T>>,
    /// Deduplicated crossings in `[k_a, k_b]`, ascending in `k`.
    pub crossings: Vec<ZgvPoint<T>>,
    pub targets: Vec<TargetRecord<T>>,
    pub candidates: Vec<CandidateRecord<T>>,
}

impl<T: Real> ScanReport<T> {
    pub fn filtered_count(&self) -> usize {
        self.candidates.iter().filter(|c| matches!(c.outcome, CandidateOutcome::Filtered(_))).count()
    }
}

/// Runs the sweep. Per-target failures are recorded in the report.
pub fn scan<T: Real>(pencil: &QuadraticPencil<T>, config: &ScanConfig<T>) -> Result<ScanReport<T>> {
    config.validate()?;
    let parts: Vec<Partial<T>> = if config.threads == 1 {
        vec![scan_range(pencil, config, config.k_a, config.k_b)]
    } else {
        let w = (config.k_b - config.k_a) / T::lit(config.threads as f64);
        let bounds: Vec<(T, T)> = (0..config.threads)
            .map(|i| {
                let lo = config.k_a + w * T::lit(i as f64);
                let hi = if i + 1 == config.threads { config.k_b } else { lo + w };
                (lo, hi)
            })
            .collect();
        std::thread::scope(|s| {
            let handles: Vec<_> = bounds
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| {
                    // pieces after the first start one step in so that shared
                    // endpoints are not targeted twice
                    let lo = if i == 0 { lo } else { lo + config.dk.min(w) * T::lit(0.5) };
                    s.spawn(move || scan_range(pencil, config, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        })
    };
    let mut report = ScanReport {
        points: vec![],
        crossings: vec![],
        targets: vec![],
        candidates: vec![],
    };
    let mut zgv = vec![];
    let mut crossings = vec![];
    for p in parts {
        zgv.extend(p.zgv);
        crossings.extend(p.crossings);
        report.targets.extend(p.targets);
        report.candidates.extend(p.candidates);
    }
    report.points = dedup(zgv, config);
    report.crossings = dedup(crossings, config);
    Ok(report)
}

struct Partial<T: Real> {
    zgv: Vec<ZgvPoint<T>>,
    crossings: Vec<ZgvPoint<T>>,
    targets: Vec<TargetRecord<T>>,
    candidates: Vec<CandidateRecord<T>>,
}

fn scan_range<T: Real>(pencil: &QuadraticPencil<T>, config: &ScanConfig<T>, lo: T, hi: T) -> Partial<T> {
    let mut out = Partial {
        zgv: vec![],
        crossings: vec![],
        targets: vec![],
        candidates: vec![],
    };
    let opts = ClassifyOptions::for_interval(config.k_b);
    let tol = config.newton_tol.unwrap_or_else(|| default_tol(pencil));
    let mut k0 = lo;
    let mut k_star_max = T::neg_infinity();
    while k0 <= hi {
        let (record, candidates) = harvest(pencil, config, k0);
        out.targets.push(record);
        for cand in candidates {
            let outcome = process_candidate(pencil, config, &opts, tol, &cand, &mut out, &mut k_star_max);
            out.candidates.push(CandidateRecord { candidate: cand, outcome });
        }
        k0 = (k0 + config.dk).max(T::lit(0.95) * k_star_max);
    }
    out
}

/// Eigenvalues of the MFRD pencil closest to `i k₀`.
fn harvest<T: Real>(pencil: &QuadraticPencil<T>, config: &ScanConfig<T>, k0: T) -> (TargetRecord<T>, Vec<Mep3Candidate<T>>) {
    let mut record = TargetRecord {
        k0,
        sigma: C::new(T::zero(), k0),
        nudged: false,
        applies: 0,
        restarts: 0,
        converged_pairs: 0,
        error: None,
    };
    let cache = match build_cache(pencil, record.sigma, config.delta) {
        Err(Error::EigenvalueCollision { .. }) => {
            record.nudged = true;
            record.sigma += C::new(T::zero(), T::lit(1e-6) * (T::one() + k0.abs()));
            build_cache(pencil, record.sigma, config.delta)
        }
        other => other,
    };
    let cache = match cache {
        Ok(c) => c,
        Err(e) => {
            record.error = Some(e.to_string());
            return (record, vec![]);
        }
    };
    let outcome = match krylov_schur(&cache, &config.arnoldi_options()) {
        Ok(o) => o,
        Err(e) => {
            record.error = Some(e.to_string());
            return (record, vec![]);
        }
    };
    record.applies = outcome.applies;
    record.restarts = outcome.restarts;
    let mut candidates = vec![];
    for pair in outcome.converged() {
        record.converged_pairs += 1;
        let (mu, eta) = match (rayleigh_mu(pencil, config.delta, &pair.z), rayleigh_eta(pencil, config.delta, &pair.z)) {
            (Ok(mu), Ok(eta)) => (mu, eta),
            // multiple λ: μ is ambiguous; trivial points are handled separately
            _ => continue,
        };
        candidates.push(Mep3Candidate {
            lambda: pair.lambda,
            mu,
            eta,
            z: pair.z.clone(),
            source_target: k0,
        });
    }
    (record, candidates)
}

fn process_candidate<T: Real>(
    pencil: &QuadraticPencil<T>,
    config: &ScanConfig<T>,
    opts: &ClassifyOptions<T>,
    tol: T,
    cand: &Mep3Candidate<T>,
    out: &mut Partial<T>,
    k_star_max: &mut T,
) -> CandidateOutcome<T> {
    let (lambda, mu, f) = (cand.lambda, cand.mu, &config.filters);
    if lambda.re.abs() > f.real * (T::one() + lambda.norm()) {
        return CandidateOutcome::Filtered("real-k");
    }
    if mu.im.abs() > f.imag * (T::one() + mu.norm()) {
        return CandidateOutcome::Filtered("real-omega");
    }
    if (cand.eta - lambda * lambda).norm() > f.eta * (T::one() + lambda.norm_sqr()) {
        return CandidateOutcome::Filtered("eta");
    }
    let radius = T::lit(10.0) * config.delta * (T::one() + lambda.norm());
    if lambda.im.abs() < config.k_a - radius || lambda.im.abs() > config.k_b + radius {
        return CandidateOutcome::Filtered("interval");
    }
    // purely imaginary λ and real μ; the MFRD offset is O(δ)
    let lambda0 = C::new(T::zero(), lambda.im);
    let mu0 = C::new(mu.re, T::zero());
    let state = match refine_candidate(pencil, lambda0, mu0, tol, config.newton_maxit, radius) {
        Ok(s) => s,
        Err(e) => return CandidateOutcome::RefineFailed(e.to_string()),
    };
    let mut point = match classify(pencil, &state, opts) {
        Ok(p) => p,
        Err(e) => return CandidateOutcome::RefineFailed(e.to_string()),
    };
    if point.k < T::zero() {
        // real pencils: W(−k, ω) = conj W(k, ω)
        point.k = -point.k;
        point.lambda = point.lambda.conj();
        point.u.iter_mut().for_each(|v| *v = v.conj());
        point.z.iter_mut().for_each(|v| *v = v.conj());
    }
    let outcome = CandidateOutcome::Refined {
        k: point.k,
        omega: point.omega,
        classification: point.classification,
        residual: point.residual,
    };
    let inside = point.k >= config.k_a && point.k <= config.k_b;
    match point.classification {
        Classification::Zgv if inside => {
            *k_star_max = k_star_max.max(point.k);
            out.zgv.push(point);
        }
        Classification::Crossing if inside => out.crossings.push(point),
        _ => {}
    }
    outcome
}

/// Merges points closer than `dedup_tol`, keeping the smaller residual, and
/// sorts by `k`.
pub fn dedup<T: Real>(mut points: Vec<ZgvPoint<T>>, config: &ScanConfig<T>) -> Vec<ZgvPoint<T>> {
    points.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap_or(std::cmp::Ordering::Equal));
    let mut kept: Vec<ZgvPoint<T>> = vec![];
    let kscale = T::one() + config.k_b.abs();
    for p in points {
        let dup = kept.iter().any(|q| {
            (p.k - q.k).abs() <= config.dedup_tol * kscale && (p.omega - q.omega).abs() <= config.dedup_tol * (T::one() + p.omega)
        });
        if !dup {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| {
        a.k.partial_cmp(&b.k)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.omega.partial_cmp(&b.omega).unwrap_or(std::cmp::Ordering::Equal))
    });
    kept
}

/// Trivial ZGV points at `k = 0` from the GEP `(L₀ + ω²M)u = 0`, one per
/// eigenvalue with `ω²` real to `realness · (1 + |ω²|)` and non-negative up
/// to roundoff.
pub fn trivial_zgv<T: Real>(pencil: &QuadraticPencil<T>) -> Result<Vec<ZgvPoint<T>>> {
    trivial_zgv_with(pencil, T::lit(1e-2))
}

pub fn trivial_zgv_with<T: Real>(pencil: &QuadraticPencil<T>, realness: T) -> Result<Vec<ZgvPoint<T>>> {
    let pairs = gep_omega(pencil, T::zero())?;
    let wmax = pairs.iter().fold(T::zero(), |m, p| m.max(p.0.norm()));
    let floor = -T::lit(1e-8) * wmax;
    let mut out = vec![];
    for (w2, _) in pairs {
        if w2.im.abs() > realness * (T::one() + w2.norm()) || w2.re < floor {
            continue;
        }
        let mu = C::new(w2.re.max(T::zero()), T::zero());
        let lambda = C::new(T::zero(), T::zero());
        let (u, y) = initial_vectors(pencil, lambda, mu)?;
        let state = GaussNewtonState::new(pencil, u, y, lambda, mu);
        out.push(classify(pencil, &state, &ClassifyOptions::default())?);
    }
    Ok(out)
}
