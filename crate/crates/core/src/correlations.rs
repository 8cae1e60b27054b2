//! Covariance, trace-norm and mutual-information correlations between two
//! disjoint regions, and the inequalities relating them.

use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::linalg::{self, CMat};
use crate::random;
use crate::spin_system::{DenseOperator, Embedding};
use faer::MatRef;
use faer::c64;
use rayon::prelude::*;
use serde::Serialize;

/// Eigenvalues at or below this are dropped from von Neumann entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// ρ_AB counts as singular when its smallest eigenvalue is at or below this.
pub const RANK_TOL: f64 = 1e-12;

/// ρ_AB on the sorted union of A and B, with embeddings of A and B into it.
struct Bipartite {
    rho_ab: CMat,
    rho_a: CMat,
    rho_b: CMat,
    /// ρ_AB − ρ_A ⊗ ρ_B
    delta: CMat,
    emb_a: Embedding,
    emb_b: Embedding,
    dim: usize,
}

impl Bipartite {
    fn new(rho: &DenseOperator, a: &Region, b: &Region) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if a.intersects(b) {
            return Err(Error::OverlappingRegions);
        }
        let n = rho.site_dims().len();
        if let Some(&s) = a.sites().iter().chain(b.sites()).find(|&&s| s >= n) {
            return Err(Error::SiteOutOfRange { site: s, sites: n });
        }
        let union = a.union(b)?;
        let rho_ab = Embedding::new(rho.site_dims(), union.sites())?.reduce(rho.as_ref());
        let dims: Vec<usize> = union.sites().iter().map(|&s| rho.site_dims()[s]).collect();
        let pos = |r: &Region| -> Vec<usize> {
            r.sites()
                .iter()
                .map(|s| union.sites().iter().position(|u| u == s).expect("site in union"))
                .collect()
        };
        let emb_a = Embedding::new(&dims, &pos(a))?;
        let emb_b = Embedding::new(&dims, &pos(b))?;
        let rho_a = emb_a.reduce(rho_ab.as_ref());
        let rho_b = emb_b.reduce(rho_ab.as_ref());
        let product = emb_a.left_mul(rho_a.as_ref(), emb_b.embed(rho_b.as_ref()).as_ref());
        let delta = linalg::hermitian_part((&rho_ab - &product).as_ref());
        Ok(Bipartite {
            dim: rho_ab.nrows(),
            rho_ab,
            rho_a,
            rho_b,
            delta,
            emb_a,
            emb_b,
        })
    }

    /// tr_B[(𝟙 ⊗ g) Δ]
    fn marginal_a(&self, g: &CMat) -> CMat {
        linalg::hermitian_part(self.emb_a.reduce(self.emb_b.left_mul(g.as_ref(), self.delta.as_ref()).as_ref()).as_ref())
    }

    /// tr_A[(f ⊗ 𝟙) Δ]
    fn marginal_b(&self, f: &CMat) -> CMat {
        linalg::hermitian_part(self.emb_b.reduce(self.emb_a.left_mul(f.as_ref(), self.delta.as_ref()).as_ref()).as_ref())
    }
}

fn sign(m: &CMat) -> CMat {
    linalg::herm_fn(m.as_ref(), |x| if x >= 0.0 { 1.0 } else { -1.0 })
}

#[derive(Clone, Debug)]
pub struct CovarianceOptions {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CovarianceOptions {
    fn default() -> Self {
        CovarianceOptions {
            restarts: 10,
            seed: 0,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CovarianceResult {
    pub value: f64,
    /// maximizing observables on A and B
    pub f: CMat,
    pub g: CMat,
    /// objective after each half-step of the winning restart
    pub history: Vec<f64>,
}

/// Alternating maximization from a starting observable g on B.
fn alternate(bp: &Bipartite, mut g: CMat, opts: &CovarianceOptions) -> CovarianceResult {
    let mut history = Vec::new();
    let mut f = CMat::zeros(bp.rho_a.nrows(), bp.rho_a.nrows());
    let mut last = f64::NEG_INFINITY;
    for _ in 0..opts.max_iter {
        let ma = bp.marginal_a(&g);
        f = sign(&ma);
        history.push(linalg::trace_norm_herm(ma.as_ref()));
        let mb = bp.marginal_b(&f);
        g = sign(&mb);
        let value = linalg::trace_norm_herm(mb.as_ref());
        history.push(value);
        if (value - last).abs() < opts.tol {
            break;
        }
        last = value;
    }
    CovarianceResult {
        value: *history.last().unwrap_or(&0.0),
        f,
        g,
        history,
    }
}

/// C_ρ(A:B) = sup over Hermitian ‖f‖ = ‖g‖ = 1 of |tr[(f⊗g)(ρ_AB − ρ_A⊗ρ_B)]|.
///
/// For fixed g the optimal f is the sign of tr_B[(𝟙⊗g)Δ], so the objective
/// never decreases under alternation; random restarts guard against local maxima.
pub fn covariance_correlation_with(
    rho: &DenseOperator,
    a: &Region,
    b: &Region,
    opts: &CovarianceOptions,
) -> Result<CovarianceResult> {
    let bp = Bipartite::new(rho, a, b)?;
    let db = bp.rho_b.nrows();
    let best = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = random::rng(opts.seed);
            rng.set_stream(r as u64 + 1);
            let g0 = sign(&random::hermitian(db, &mut rng));
            alternate(&bp, g0, opts)
        })
        .reduce_with(|x, y| if y.value > x.value { y } else { x })
        .expect("at least one restart");
    Ok(best)
}

pub fn covariance_correlation(rho: &DenseOperator, a: &Region, b: &Region) -> Result<f64> {
    covariance_correlation_with(rho, a, b, &CovarianceOptions::default()).map(|r| r.value)
}

/// T_ρ(A:B) = ‖ρ_AB − ρ_A⊗ρ_B‖₁.
pub fn trace_correlation(rho: &DenseOperator, a: &Region, b: &Region) -> Result<f64> {
    let bp = Bipartite::new(rho, a, b)?;
    Ok(linalg::trace_norm_herm(bp.delta.as_ref()))
}

/// −tr ρ ln ρ, dropping eigenvalues at or below the cutoff.
pub fn von_neumann_entropy(rho: MatRef<'_, c64>) -> f64 {
    linalg::herm_eigvals(rho)
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.ln())
        .sum()
}

fn mutual_info_of(bp: &Bipartite) -> f64 {
    let i = von_neumann_entropy(bp.rho_a.as_ref()) + von_neumann_entropy(bp.rho_b.as_ref())
        - von_neumann_entropy(bp.rho_ab.as_ref());
    i.max(0.0)
}

/// I_ρ(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB) in nats.
pub fn mutual_information(rho: &DenseOperator, a: &Region, b: &Region) -> Result<f64> {
    Ok(mutual_info_of(&Bipartite::new(rho, a, b)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationTriple {
    pub covariance: f64,
    pub trace_norm: f64,
    /// nats
    pub mutual_info: f64,
    /// d_AB
    pub dims: usize,
    /// ‖ρ_AB⁻¹‖, or None when ρ_AB is singular (the norm is +∞)
    pub inv_norm_ab: Option<f64>,
}

pub fn correlation_triple(rho: &DenseOperator, a: &Region, b: &Region) -> Result<CorrelationTriple> {
    triple_with(rho, a, b, &CovarianceOptions::default())
}

pub fn triple_with(
    rho: &DenseOperator,
    a: &Region,
    b: &Region,
    opts: &CovarianceOptions,
) -> Result<CorrelationTriple> {
    let bp = Bipartite::new(rho, a, b)?;
    let covariance = covariance_correlation_with(rho, a, b, opts)?.value;
    let min_eig = linalg::herm_eigvals(bp.rho_ab.as_ref())[0];
    Ok(CorrelationTriple {
        covariance,
        trace_norm: linalg::trace_norm_herm(bp.delta.as_ref()),
        mutual_info: mutual_info_of(&bp),
        dims: bp.dim,
        inv_norm_ab: (min_eig > RANK_TOL).then(|| 1.0 / min_eig),
    })
}

/// Slacks (right side minus left side) of
/// T/(2d²) ≤ C ≤ T and T²/2 ≤ I ≤ ln‖ρ_AB⁻¹‖·T.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationBounds {
    pub triple: CorrelationTriple,
    pub cov_lower: f64,
    pub cov_upper: f64,
    pub mi_lower: f64,
    /// None when ρ_AB is singular and the bound is vacuous
    pub mi_upper: Option<f64>,
}

impl CorrelationBounds {
    pub fn holds(&self, tol: f64) -> bool {
        self.cov_lower >= -tol
            && self.cov_upper >= -tol
            && self.mi_lower >= -tol
            && self.mi_upper.is_none_or(|s| s >= -tol)
    }

    pub fn mi_upper_vacuous(&self) -> bool {
        self.mi_upper.is_none()
    }
}

pub fn correlation_bounds(triple: CorrelationTriple) -> CorrelationBounds {
    let t = triple.trace_norm;
    let d = triple.dims as f64;
    CorrelationBounds {
        cov_lower: triple.covariance - t / (2.0 * d * d),
        cov_upper: t - triple.covariance,
        mi_lower: triple.mutual_info - 0.5 * t * t,
        mi_upper: triple.inv_norm_ab.map(|n| n.ln() * t - triple.mutual_info),
        triple,
    }
}

pub fn bounds_report(rho: &DenseOperator, a: &Region, b: &Region) -> Result<CorrelationBounds> {
    Ok(correlation_bounds(correlation_triple(rho, a, b)?))
}
