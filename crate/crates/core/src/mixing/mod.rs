//! Weighted functionals, spectral gap, χ² constant and mixing-time bounds.

mod log_sobolev;

pub use log_sobolev::{
    entropy_derivative, entropy_derivative_exact, log_sobolev_estimate, LogSobolevOptions,
    LogSobolevResult,
};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, HermEig, ZERO};
use crate::spin_system::{DenseOperator, Liouvillian, LocalTerm};
use faer::{c64, Mat, MatRef};
use serde::Serialize;

/// Eigenvalue floor applied before powers and logarithms of σ.
pub const EIG_FLOOR: f64 = 1e-14;

/// σ together with its eigendecomposition and the Schur weights of Γ^s_σ.
#[derive(Clone, Debug)]
pub struct WeightedContext {
    sigma: DenseOperator,
    s: f64,
    probs: Vec<f64>,
    vecs: CMat,
    weights: Mat<f64>,
}

impl WeightedContext {
    pub fn new(sigma: &DenseOperator, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Validation(vec![format!("s must lie in [0, 1], got {s}")]));
        }
        let d = sigma.dim();
        let eig = HermEig::new(sigma.as_ref());
        let rank_tol = 1e-12 * d as f64;
        if eig.min() <= rank_tol {
            return Err(Error::SingularSigma { min_eig: eig.min() });
        }
        let probs: Vec<f64> = eig.values.iter().map(|&p| p.max(EIG_FLOOR)).collect();
        let weights = Mat::from_fn(d, d, |i, j| {
            let (pi, pj) = (probs[i], probs[j]);
            0.5 * (pi.powf(s) * pj.powf(1.0 - s) + pi.powf(1.0 - s) * pj.powf(s))
        });
        Ok(WeightedContext {
            sigma: sigma.clone(),
            s,
            probs,
            vecs: eig.vectors,
            weights,
        })
    }

    pub fn sigma(&self) -> &DenseOperator {
        &self.sigma
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// Eigenvalues of σ, ascending.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn eigenvectors(&self) -> &CMat {
        &self.vecs
    }

    pub fn to_eigenbasis(&self, f: MatRef<'_, c64>) -> CMat {
        self.vecs.adjoint() * f * &self.vecs
    }

    pub fn from_eigenbasis(&self, x: MatRef<'_, c64>) -> CMat {
        &self.vecs * x * self.vecs.adjoint()
    }

    /// (Γ^s_σ)^power (f); Γ is a Schur multiplier in the eigenbasis of σ.
    pub fn gamma_pow(&self, f: MatRef<'_, c64>, power: f64) -> CMat {
        let mut x = self.to_eigenbasis(f);
        let d = self.dim();
        for j in 0..d {
            for i in 0..d {
                x[(i, j)] *= self.weights[(i, j)].powf(power);
            }
        }
        self.from_eigenbasis(x.as_ref())
    }

    pub fn gamma(&self, f: MatRef<'_, c64>) -> CMat {
        self.gamma_pow(f, 1.0)
    }

    /// ⟨f, g⟩_{s,σ} = tr[f† Γ(g)]
    pub fn inner(&self, f: MatRef<'_, c64>, g: MatRef<'_, c64>) -> c64 {
        linalg::hs_inner(f, self.gamma(g).as_ref())
    }

    /// log σ with the eigenvalue floor.
    pub fn log_sigma(&self) -> CMat {
        let d = self.dim();
        let diag = Mat::from_fn(d, d, |i, j| if i == j { linalg::re(self.probs[i].ln()) } else { ZERO });
        self.from_eigenbasis(diag.as_ref())
    }
}

/// Γ^s_σ(f) = ½(σ^s f σ^{1−s} + σ^{1−s} f σ^s).
pub fn gamma_s(ctx: &WeightedContext, f: &DenseOperator) -> Result<DenseOperator> {
    if f.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            found: f.dim(),
        });
    }
    Ok(f.with_mat(ctx.gamma(f.as_ref())))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReversibilityReport {
    pub reversible: bool,
    pub residual: f64,
    pub scale: f64,
    pub s: f64,
}

/// Relative tolerance of the reversibility residual.
pub const REVERSIBILITY_TOL: f64 = 1e-9;

/// Residual ‖Γ ℒ* − ℒ Γ‖ over the matrix-unit basis, relative to the size
/// of either side. The coherent part is dropped unless requested.
pub fn check_s_reversibility(
    l: &Liouvillian,
    ctx: &WeightedContext,
    include_hamiltonian: bool,
) -> Result<ReversibilityReport> {
    let d = l.dim();
    if d != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: ctx.dim(),
        });
    }
    let gen = if include_hamiltonian {
        l.clone()
    } else {
        dissipative_part(l)?
    };
    let mut res2 = 0.0;
    let mut scale2 = 0.0;
    for j in 0..d {
        for i in 0..d {
            let mut e = Mat::<c64>::zeros(d, d);
            e[(i, j)] = linalg::ONE;
            let lhs = ctx.gamma(gen.apply_adjoint(e.as_ref()).as_ref());
            let rhs = gen.apply(ctx.gamma(e.as_ref()).as_ref());
            res2 += linalg::frobenius((&lhs - &rhs).as_ref()).powi(2);
            scale2 += linalg::frobenius(lhs.as_ref()).powi(2).max(linalg::frobenius(rhs.as_ref()).powi(2));
        }
    }
    let residual = res2.sqrt();
    let scale = scale2.sqrt();
    Ok(ReversibilityReport {
        reversible: residual <= REVERSIBILITY_TOL * scale.max(f64::MIN_POSITIVE),
        residual,
        scale,
        s: ctx.s(),
    })
}

/// The generator with every Hamiltonian piece removed.
pub fn dissipative_part(l: &Liouvillian) -> Result<Liouvillian> {
    let terms: Vec<LocalTerm> = l
        .terms()
        .iter()
        .filter(|t| !t.jumps.is_empty())
        .map(|t| LocalTerm {
            support: t.support.clone(),
            hamiltonian: None,
            jumps: t.jumps.clone(),
        })
        .collect();
    l.with_terms(terms)
}

/// Var^s_σ(f) = |tr[f Γ(f)] − tr[σ f]²|.
pub fn variance_s(ctx: &WeightedContext, f: &DenseOperator) -> Result<f64> {
    if !f.is_hermitian(1e-10 * linalg::max_abs(f.as_ref()).max(1.0)) {
        return Err(Error::Validation(vec!["variance needs a Hermitian operator".into()]));
    }
    Ok(variance_mat(ctx, f.as_ref()))
}

pub(crate) fn variance_mat(ctx: &WeightedContext, f: MatRef<'_, c64>) -> f64 {
    let a = linalg::trace((f * ctx.gamma(f).as_ref()).as_ref()).re;
    let m = linalg::trace((ctx.sigma().as_ref() * f).as_ref()).re;
    (a - m * m).abs()
}

/// Ent^s_σ(f) = tr[Γ(f)(log Γ(f) − log σ)] − tr[Γ(f)] log tr[Γ(f)], natural log.
pub fn entropy_s(ctx: &WeightedContext, f: &DenseOperator) -> Result<f64> {
    let d = ctx.dim();
    if f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.dim(),
        });
    }
    let herm = linalg::hermitian_part(f.as_ref());
    let min = linalg::herm_eigvals(herm.as_ref())[0];
    if min <= 1e-12 * d as f64 {
        return Err(Error::NotPositive { min_eig: min });
    }
    let shifted = &herm - linalg::identity(d);
    Ok(log_sobolev::entropy_parts(ctx, shifted.as_ref()).entropy)
}

/// Spectral gap from the dense spectrum of Ŝ: minus the largest real part
/// among all eigenvalues except the stationary one.
pub fn spectral_gap(l: &Liouvillian) -> Result<f64> {
    let report = l.primitivity();
    if !report.primitive {
        return Err(Error::NotPrimitive {
            null_dim: report.null_dim,
            min_eig: report.min_eig,
        });
    }
    let n = l.dim() * l.dim();
    if n > DENSE_SPECTRUM_LIMIT {
        return Err(Error::DenseLimitExceeded {
            dim: n,
            limit: DENSE_SPECTRUM_LIMIT,
        });
    }
    let mut ev = l
        .superop()
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e:?}")))?;
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let gap = ev[1..].iter().map(|z| -z.re).fold(f64::INFINITY, f64::min);
    Ok(gap)
}

/// Largest superoperator dimension for the dense non-Hermitian eigensolver.
pub const DENSE_SPECTRUM_LIMIT: usize = 1024;

/// Largest superoperator dimension for the dense Hermitian path of λ_s.
pub const DENSE_CHI2_LIMIT: usize = 1024;

/// The χ² constant λ_s: minus the top of the spectrum of the Hermitian part
/// of Γ^{1/2} ℒ* Γ^{−1/2} on the complement of √σ. Equals the decay rate
/// of Var^s_σ, so that Var(f_t) ≤ Var(f) e^{−2λ_s t}.
pub fn chi2_constant(l: &Liouvillian, ctx: &WeightedContext) -> Result<f64> {
    let d = l.dim();
    if d != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: ctx.dim(),
        });
    }
    let apply = |x: &CMat| symmetrized_adjoint(l, ctx, x);
    let root = normalized_root(ctx);
    let top = if d * d <= DENSE_CHI2_LIMIT {
        let n = d * d;
        let kp = projected_chi2_matrix(l, ctx, &root);
        linalg::herm_eigvals(kp.as_ref())[n - 1]
    } else {
        let mut rng = crate::random::rng(0x5eed);
        let start = crate::random::hermitian(d, &mut rng);
        let iters = (d * d).min(600);
        linalg::lanczos_largest(apply, &start, &[root], iters, 1e-12).ok_or_else(|| {
            Error::ConvergenceFailure("Lanczos iteration for the chi-square constant".into())
        })?
    };
    Ok(-top)
}

/// Hermitian part of Γ^{1/2} ℒ* Γ^{−1/2} applied to x.
fn symmetrized_adjoint(l: &Liouvillian, ctx: &WeightedContext, x: &CMat) -> CMat {
    let a = ctx.gamma_pow(l.apply_adjoint(ctx.gamma_pow(x.as_ref(), -0.5).as_ref()).as_ref(), 0.5);
    let b = ctx.gamma_pow(l.apply(ctx.gamma_pow(x.as_ref(), 0.5).as_ref()).as_ref(), -0.5);
    linalg::scaled((&a + &b).as_ref(), linalg::re(0.5))
}

/// √σ with unit Hilbert-Schmidt norm: the stationary vector of the symmetrized generator.
fn normalized_root(ctx: &WeightedContext) -> CMat {
    let root = linalg::herm_fn(ctx.sigma().as_ref(), |p| p.max(EIG_FLOOR).sqrt());
    let nr = linalg::frobenius(root.as_ref());
    linalg::scaled(root.as_ref(), linalg::re(1.0 / nr))
}

/// Dense symmetrized generator with √σ shifted to the bottom of the spectrum.
fn projected_chi2_matrix(l: &Liouvillian, ctx: &WeightedContext, root: &CMat) -> CMat {
    let d = l.dim();
    let n = d * d;
    let shift = 2.0 * l.norm_bound() + 1.0;
    let v = linalg::vectorize(root.as_ref());
    let mut k = Mat::<c64>::zeros(n, n);
    for c in 0..n {
        let mut e = Mat::<c64>::zeros(d, d);
        e[(c % d, c / d)] = linalg::ONE;
        let col = linalg::vectorize(symmetrized_adjoint(l, ctx, &e).as_ref());
        for r in 0..n {
            k[(r, c)] = col[(r, 0)];
        }
    }
    let proj = linalg::identity(n) - &v * v.adjoint();
    let mut kp = &proj * &k * &proj;
    kp -= linalg::scaled((&v * v.adjoint()).as_ref(), linalg::re(shift));
    kp
}

/// Slowest `count` modes of the symmetrized generator, mapped back to
/// Hermitian observables g = Γ^{−1/2} y. Empty above the dense limit.
pub(crate) fn slow_modes(l: &Liouvillian, ctx: &WeightedContext, count: usize) -> Vec<CMat> {
    let d = l.dim();
    if d * d > DENSE_CHI2_LIMIT {
        return Vec::new();
    }
    let n = d * d;
    let root = normalized_root(ctx);
    let eig = linalg::HermEig::new(projected_chi2_matrix(l, ctx, &root).as_ref());
    let mut out = Vec::new();
    for c in (0..n).rev().take(count) {
        let y = linalg::unvectorize(eig.vectors.col(c).as_mat(), d);
        let g = ctx.gamma_pow(y.as_ref(), -0.5);
        let herm = linalg::hermitian_part(g.as_ref());
        let anti = linalg::hermitian_part(linalg::scaled(g.as_ref(), c64::new(0.0, -1.0)).as_ref());
        for mut m in [herm, anti] {
            let tr = linalg::trace(m.as_ref()).re / d as f64;
            for i in 0..d {
                m[(i, i)] -= linalg::re(tr);
            }
            let nm = linalg::frobenius(m.as_ref());
            if nm > 1e-8 {
                out.push(linalg::scaled(m.as_ref(), linalg::re(1.0 / nm)));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub gap: f64,
    /// (s, λ_s) for every requested s on which ℒ is s-reversible
    pub chi2: Vec<(f64, f64)>,
    /// (s, relative deviation |λ_s − λ|/λ)
    pub chi2_deviation: Vec<(f64, f64)>,
}

/// Gap plus χ² constants at the given s values, with the deviation between
/// them. The dense spectrum is used when it fits, otherwise the gap is taken
/// from the χ² path, which is exact for reversible generators.
pub fn gap_report(l: &Liouvillian, s_values: &[f64]) -> Result<GapReport> {
    let sigma = l.stationary_state()?;
    let dense = l.dim() * l.dim() <= DENSE_SPECTRUM_LIMIT;
    let gap = if dense { Some(spectral_gap(l)?) } else { None };
    let mut chi2 = Vec::new();
    for &s in s_values {
        let ctx = WeightedContext::new(&sigma, s)?;
        chi2.push((s, chi2_constant(l, &ctx)?));
    }
    let gap = match gap {
        Some(g) => g,
        None => chi2
            .first()
            .map(|c| c.1)
            .ok_or_else(|| Error::DenseLimitExceeded {
                dim: l.dim() * l.dim(),
                limit: DENSE_SPECTRUM_LIMIT,
            })?,
    };
    let chi2_deviation = chi2.iter().map(|&(s, v)| (s, (v - gap).abs() / gap)).collect();
    Ok(GapReport {
        gap,
        chi2,
        chi2_deviation,
    })
}

/// (χ² bound, Log-Sobolev bound) on ‖ρ_t − σ‖₁ at time t.
pub fn mixing_bounds(inv_norm: f64, lambda: f64, alpha: f64, t: f64) -> (f64, f64) {
    let chi = inv_norm.sqrt() * (-lambda * t).exp();
    let ls = (2.0 * inv_norm.ln()).max(0.0).sqrt() * (-alpha * t).exp();
    (chi, ls)
}

/// ‖σ⁻¹‖ = 1 / λ_min(σ).
pub fn inverse_norm(sigma: &DenseOperator) -> Result<f64> {
    let min = linalg::herm_eigvals(sigma.as_ref())[0];
    if min <= 1e-12 * sigma.dim() as f64 {
        return Err(Error::SingularSigma { min_eig: min });
    }
    Ok(1.0 / min)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThermalBound {
    pub lower: f64,
    pub upper: f64,
}

/// d ≤ ‖σ_β⁻¹‖ ≤ d e^{β(‖H‖ − ‖H⁻¹‖⁻¹)}, valid for H > 0.
pub fn thermal_bound(h: MatRef<'_, c64>, beta: f64) -> Result<ThermalBound> {
    let ev = linalg::herm_eigvals(h);
    let d = ev.len() as f64;
    let (min, max) = (ev[0], ev[ev.len() - 1]);
    if min <= 0.0 {
        return Err(Error::NonPositiveH { min_eig: min });
    }
    Ok(ThermalBound {
        lower: d,
        upper: d * (beta * (max - min)).exp(),
    })
}

/// d ≤ ‖σ_β⁻¹‖ ≤ d e^{β(λ_max − λ_min)}, valid for every Hermitian H.
pub fn shifted_thermal_bound(h: MatRef<'_, c64>, beta: f64) -> ThermalBound {
    let ev = linalg::herm_eigvals(h);
    let d = ev.len() as f64;
    ThermalBound {
        lower: d,
        upper: d * (beta * (ev[ev.len() - 1] - ev[0])).exp(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingSummary {
    pub gap: f64,
    pub chi2: Vec<(f64, f64)>,
    /// Variational upper estimate of the Log-Sobolev constant.
    pub ls_estimate: Option<f64>,
    pub inv_norm: f64,
}
