//! Quadratic fermionic Liouvillians in Majorana form and their Gaussian
//! stationary states.
//!
//! Majoranas are normalized as {r_j, r_k} = δ_jk, mode j owning r_{2j} and
//! r_{2j+1} with a_j = (r_{2j} + i r_{2j+1})/√2. The covariance matrix is
//! γ_jk = i tr(ρ[r_j, r_k]), so a single mode with occupation n has
//! γ_{01} = 2n − 1. With H = i rᵀhr and L_μ = l_μᵀr, the covariance obeys
//! dγ/dt = Xᵀγ + γX + Y with X = −2h − Re M, Y = −2 Im M, M = Σ conj(l_μ) l_μᵀ.

pub mod fock;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Region};
use crate::linalg;
use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat, MatRef};
use serde::Serialize;

pub type RMat = Mat<f64>;

/// Antisymmetry and norm tolerances for covariance matrices.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
pub const NORM_TOL: f64 = 1e-10;
/// Target for the Lyapunov residual ‖Xᵀγ + γX + Y‖_F.
pub const LYAPUNOV_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CovarianceMatrix {
    gamma: RMat,
}

impl CovarianceMatrix {
    pub fn new(gamma: RMat) -> Result<Self> {
        let n = gamma.nrows();
        if n != gamma.ncols() || !n.is_multiple_of(2) {
            return Err(Error::ShapeMismatch(format!(
                "covariance matrix must be square of even size, found {}x{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        let scale = max_abs(gamma.as_ref()).max(1.0);
        let defect = max_abs((&gamma + gamma.transpose()).as_ref());
        if defect > ANTISYMMETRY_TOL * scale {
            return Err(Error::ShapeMismatch(format!("covariance matrix is not antisymmetric (defect {defect:e})")));
        }
        let norm = spectral_norm(gamma.as_ref());
        if norm > 1.0 + NORM_TOL {
            return Err(Error::ShapeMismatch(format!("covariance matrix has norm {norm} > 1")));
        }
        Ok(CovarianceMatrix { gamma })
    }

    /// γ = 0, the maximally mixed state.
    pub fn zeros(modes: usize) -> Self {
        CovarianceMatrix {
            gamma: RMat::zeros(2 * modes, 2 * modes),
        }
    }

    /// Product state with γ_{2j,2j+1} = values[j].
    pub fn from_modes(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut g = RMat::zeros(2 * n, 2 * n);
        for (j, &c) in values.iter().enumerate() {
            g[(2 * j, 2 * j + 1)] = c;
            g[(2 * j + 1, 2 * j)] = -c;
        }
        Self::new(g)
    }

    pub fn gamma(&self) -> &RMat {
        &self.gamma
    }

    pub fn modes(&self) -> usize {
        self.gamma.nrows() / 2
    }

    /// Principal submatrix on the given modes, in the given order.
    pub fn restrict(&self, modes: &[usize]) -> Result<CovarianceMatrix> {
        if let Some(&m) = modes.iter().find(|&&m| m >= self.modes()) {
            return Err(Error::SiteOutOfRange { site: m, sites: self.modes() });
        }
        let idx = majorana_indices(modes);
        let k = idx.len();
        Ok(CovarianceMatrix {
            gamma: Mat::from_fn(k, k, |i, j| self.gamma[(idx[i], idx[j])]),
        })
    }
}

fn majorana_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

fn max_abs(a: MatRef<'_, f64>) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

fn frob(a: MatRef<'_, f64>) -> f64 {
    a.norm_l2()
}

/// Largest singular value of a real matrix.
pub fn spectral_norm(a: MatRef<'_, f64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.singular_values().map(|s| s[0]).unwrap_or(f64::NAN)
}

/// Eigenvalues of the Hermitian matrix iγ, ascending; they come in pairs ±c_j.
fn i_gamma_eigvals(g: MatRef<'_, f64>) -> Vec<f64> {
    let ig = Mat::from_fn(g.nrows(), g.ncols(), |i, j| c64::new(0.0, g[(i, j)]));
    linalg::herm_eigvals(ig.as_ref())
}

/// Quadratic Hamiltonian terms in mode language.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadraticTerm {
    /// t (a_i†a_j + a_j†a_i)
    Hopping { i: usize, j: usize, t: f64 },
    /// μ a_i†a_i (up to a constant)
    Potential { i: usize, mu: f64 },
    /// Δ (a_i a_j + a_j†a_i†)
    Pairing { i: usize, j: usize, delta: f64 },
    /// h_jk += value, h_kj −= value on Majorana indices
    Majorana { j: usize, k: usize, value: f64 },
}

/// Linear jump operators.
#[derive(Clone, Debug, PartialEq)]
pub enum JumpSpec {
    /// √rate a_i
    Loss { site: usize, rate: f64 },
    /// √rate a_i†
    Gain { site: usize, rate: f64 },
    /// L = lᵀr with the full Majorana coefficient vector
    Vector(Vec<c64>),
}

#[derive(Clone, Debug)]
pub struct QuadraticLiouvillian {
    lattice: Lattice,
    h: RMat,
    jumps: Vec<Vec<c64>>,
    /// sites on which each jump acts
    supports: Vec<Vec<usize>>,
    x: RMat,
    y: RMat,
}

fn check_site(s: usize, n: usize) -> Result<()> {
    if s >= n {
        return Err(Error::SiteOutOfRange { site: s, sites: n });
    }
    Ok(())
}

/// Assembles h and the jump vectors, then the drift X and noise Y.
pub fn build_quadratic(lattice: &Lattice, terms: &[QuadraticTerm], jumps: &[JumpSpec]) -> Result<QuadraticLiouvillian> {
    let n = lattice.sites();
    let dim = 2 * n;
    let mut h = RMat::zeros(dim, dim);
    let mut add = |j: usize, k: usize, v: f64| {
        h[(j, k)] += v;
        h[(k, j)] -= v;
    };
    for term in terms {
        match *term {
            QuadraticTerm::Hopping { i, j, t } => {
                check_site(i, n)?;
                check_site(j, n)?;
                if i == j {
                    return Err(Error::ShapeMismatch(format!("hopping from site {i} to itself")));
                }
                add(2 * i, 2 * j + 1, 0.5 * t);
                add(2 * j, 2 * i + 1, 0.5 * t);
            }
            QuadraticTerm::Potential { i, mu } => {
                check_site(i, n)?;
                add(2 * i, 2 * i + 1, 0.5 * mu);
            }
            QuadraticTerm::Pairing { i, j, delta } => {
                check_site(i, n)?;
                check_site(j, n)?;
                if i == j {
                    return Err(Error::ShapeMismatch(format!("pairing of site {i} with itself")));
                }
                add(2 * i, 2 * j + 1, 0.5 * delta);
                add(2 * i + 1, 2 * j, 0.5 * delta);
            }
            QuadraticTerm::Majorana { j, k, value } => {
                if j >= dim || k >= dim {
                    return Err(Error::ShapeMismatch(format!("Majorana index out of range 0..{dim}")));
                }
                if j == k {
                    return Err(Error::ShapeMismatch("diagonal entry of an antisymmetric kernel".into()));
                }
                add(j, k, value);
            }
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut vectors = Vec::with_capacity(jumps.len());
    for spec in jumps {
        let mut l = vec![linalg::ZERO; dim];
        match spec {
            JumpSpec::Loss { site, rate } | JumpSpec::Gain { site, rate } => {
                check_site(*site, n)?;
                if *rate < 0.0 {
                    return Err(Error::ShapeMismatch(format!("negative rate {rate}")));
                }
                let sign = if matches!(spec, JumpSpec::Loss { .. }) { 1.0 } else { -1.0 };
                let c = rate.sqrt() * s;
                l[2 * site] = c64::new(c, 0.0);
                l[2 * site + 1] = c64::new(0.0, sign * c);
            }
            JumpSpec::Vector(v) => {
                if v.len() != dim {
                    return Err(Error::ShapeMismatch(format!(
                        "jump vector has length {}, expected {dim}",
                        v.len()
                    )));
                }
                l.clone_from(v);
            }
        }
        vectors.push(l);
    }
    QuadraticLiouvillian::new(lattice.clone(), h, vectors)
}

impl QuadraticLiouvillian {
    pub fn new(lattice: Lattice, h: RMat, jumps: Vec<Vec<c64>>) -> Result<Self> {
        let dim = 2 * lattice.sites();
        if h.nrows() != dim || h.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "kernel is {}x{}, expected {dim}x{dim}",
                h.nrows(),
                h.ncols()
            )));
        }
        let defect = max_abs((&h + h.transpose()).as_ref());
        if defect > ANTISYMMETRY_TOL * max_abs(h.as_ref()).max(1.0) {
            return Err(Error::ShapeMismatch(format!("kernel is not antisymmetric (defect {defect:e})")));
        }
        let mut m = Mat::<c64>::zeros(dim, dim);
        let mut supports = Vec::with_capacity(jumps.len());
        for l in &jumps {
            if l.len() != dim {
                return Err(Error::ShapeMismatch(format!("jump vector has length {}, expected {dim}", l.len())));
            }
            for j in 0..dim {
                for k in 0..dim {
                    m[(j, k)] += l[j].conj() * l[k];
                }
            }
            let mut sites: Vec<usize> = (0..dim).filter(|&j| l[j] != linalg::ZERO).map(|j| j / 2).collect();
            sites.dedup();
            supports.push(sites);
        }
        let x = Mat::from_fn(dim, dim, |j, k| -2.0 * h[(j, k)] - m[(j, k)].re);
        let y = Mat::from_fn(dim, dim, |j, k| -2.0 * m[(j, k)].im);
        Ok(QuadraticLiouvillian {
            lattice,
            h,
            jumps,
            supports,
            x,
            y,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn modes(&self) -> usize {
        self.lattice.sites()
    }

    pub fn h(&self) -> &RMat {
        &self.h
    }

    pub fn jumps(&self) -> &[Vec<c64>] {
        &self.jumps
    }

    pub fn jump_supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    /// Drift X of dγ/dt = Xᵀγ + γX + Y.
    pub fn drift(&self) -> &RMat {
        &self.x
    }

    /// Noise Y of dγ/dt = Xᵀγ + γX + Y.
    pub fn noise(&self) -> &RMat {
        &self.y
    }

    pub fn drift_eigenvalues(&self) -> Result<Vec<c64>> {
        if self.x.nrows() == 0 {
            return Ok(Vec::new());
        }
        self.x
            .eigenvalues()
            .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e:?}")))
    }

    /// Largest real part of the drift spectrum.
    pub fn max_drift_real(&self) -> Result<f64> {
        Ok(self.drift_eigenvalues()?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }

    fn ensure_stable(&self) -> Result<()> {
        let max_real = self.max_drift_real()?;
        if max_real.is_nan() || max_real >= 0.0 {
            return Err(Error::NotStable { max_real });
        }
        Ok(())
    }

    /// ‖Xᵀγ + γX + Y‖_F
    pub fn lyapunov_residual(&self, gamma: &RMat) -> f64 {
        frob(lyapunov_lhs(&self.x, gamma, &self.y).as_ref())
    }
}

fn lyapunov_lhs(x: &RMat, g: &RMat, y: &RMat) -> RMat {
    x.transpose() * g + g * x + y
}

/// Solves Xᵀγ + γX + Y = 0 for Hurwitz X by the matrix sign-function
/// iteration A ← (cA + (cA)⁻¹)/2, Q ← (cQ + A⁻¹QA⁻ᵀ/c)/2 from A = Xᵀ, Q = Y,
/// which drives A to −𝟙 and Q to 2γ.
fn lyapunov_sign(x: &RMat, y: &RMat) -> RMat {
    let n = x.nrows();
    let id = RMat::identity(n, n);
    let mut a = x.transpose().to_owned();
    let mut q = y.clone();
    for _ in 0..100 {
        let inv = a.partial_piv_lu().inverse();
        let c = (frob(inv.as_ref()) / frob(a.as_ref())).sqrt();
        let next = (&a * c + &inv * (1.0 / c)) * 0.5;
        q = (&q * c + &inv * &q * inv.transpose() * (1.0 / c)) * 0.5;
        let change = frob((&next - &a).as_ref());
        a = next;
        if change <= 1e-14 * frob(a.as_ref()) || frob((&a + &id).as_ref()) <= 1e-14 * (n as f64).sqrt() {
            break;
        }
    }
    q * 0.5
}

/// Dense Kronecker solve of the Lyapunov equation, for small systems.
fn lyapunov_kron(x: &RMat, y: &RMat) -> RMat {
    let n = x.nrows();
    let xc = linalg::to_complex(x.as_ref());
    let xt = linalg::to_complex(x.transpose());
    let id = linalg::identity(n);
    // vec(XᵀG) = (𝟙⊗Xᵀ)vec G, vec(GX) = (Xᵀ⊗𝟙)vec G
    let a = linalg::kron(id.as_ref(), xt.as_ref()) + linalg::kron(xc.transpose(), id.as_ref());
    let b = linalg::scaled(linalg::vectorize(linalg::to_complex(y.as_ref()).as_ref()).as_ref(), linalg::re(-1.0));
    let g = linalg::unvectorize(linalg::solve(a.as_ref(), b.as_ref()).as_ref(), n);
    linalg::real_part(g.as_ref())
}

fn antisymmetrize(g: &RMat) -> RMat {
    Mat::from_fn(g.nrows(), g.ncols(), |i, j| 0.5 * (g[(i, j)] - g[(j, i)]))
}

/// Stationary covariance: the solution of Xᵀγ + γX + Y = 0.
pub fn stationary_covariance(ql: &QuadraticLiouvillian) -> Result<CovarianceMatrix> {
    let dim = 2 * ql.modes();
    if dim == 0 {
        return CovarianceMatrix::new(RMat::zeros(0, 0));
    }
    ql.ensure_stable()?;
    let mut g = antisymmetrize(&lyapunov_sign(&ql.x, &ql.y));
    for _ in 0..3 {
        let r = lyapunov_lhs(&ql.x, &g, &ql.y);
        if frob(r.as_ref()) <= 0.1 * LYAPUNOV_TOL {
            break;
        }
        g = antisymmetrize(&(&g + lyapunov_sign(&ql.x, &r)));
    }
    if ql.lyapunov_residual(&g) > LYAPUNOV_TOL && dim <= 32 {
        g = antisymmetrize(&lyapunov_kron(&ql.x, &ql.y));
    }
    let residual = ql.lyapunov_residual(&g);
    if residual > LYAPUNOV_TOL {
        return Err(Error::Numerical(format!("Lyapunov residual {residual:e} above tolerance")));
    }
    CovarianceMatrix::new(g)
}

fn expm_real(a: &RMat) -> RMat {
    linalg::real_part(linalg::expm(linalg::to_complex(a.as_ref()).as_ref()).as_ref())
}

/// γ(t) = e^{Xᵀt} γ₀ e^{Xt} + ∫₀ᵗ e^{Xᵀs} Y e^{Xs} ds.
///
/// Uses γ_ss + e^{Xᵀt}(γ₀ − γ_ss)e^{Xt} for stable drifts and the block
/// exponential of [[−Xᵀ, Y], [0, X]] otherwise.
pub fn evolve_covariance(ql: &QuadraticLiouvillian, gamma0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
    let dim = 2 * ql.modes();
    if gamma0.gamma.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: gamma0.gamma.nrows(),
        });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::ShapeMismatch(format!("evolution time must be nonnegative, found {t}")));
    }
    if t == 0.0 || dim == 0 {
        return Ok(gamma0.clone());
    }
    let et = expm_real(&(&ql.x * t));
    let g = if ql.max_drift_real()? < 0.0 {
        let ss = stationary_covariance(ql)?;
        let d = &gamma0.gamma - &ss.gamma;
        &ss.gamma + et.transpose() * d * &et
    } else {
        let mut big = RMat::zeros(2 * dim, 2 * dim);
        for i in 0..dim {
            for j in 0..dim {
                big[(i, j)] = -ql.x[(j, i)] * t;
                big[(i, dim + j)] = ql.y[(i, j)] * t;
                big[(dim + i, dim + j)] = ql.x[(i, j)] * t;
            }
        }
        let e = expm_real(&big);
        let f12 = e.as_ref().submatrix(0, dim, dim, dim).to_owned();
        let f22 = e.as_ref().submatrix(dim, dim, dim, dim).to_owned();
        f22.transpose() * &gamma0.gamma * &f22 + f22.transpose() * f12
    };
    CovarianceMatrix::new(antisymmetrize(&g))
}

/// Mode values c_j ∈ [0, 1], sorted descending: the nonnegative half of the
/// spectrum of iγ.
pub fn normal_modes(gamma: &CovarianceMatrix) -> Vec<f64> {
    let ev = i_gamma_eigvals(gamma.gamma.as_ref());
    let n = gamma.modes();
    ev.iter().rev().take(n).map(|&c| c.clamp(0.0, 1.0)).collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MinEigenvalue {
    /// ∏_j (1 − c_j)/2
    pub value: f64,
    /// some mode is pure (c_j ≥ 1 − tol) and the value was set to 0
    pub pure: bool,
}

/// Mode values at or above 1 − this count as pure.
pub const PURITY_TOL: f64 = 1e-12;

/// Smallest eigenvalue of the Gaussian state, ∏_j (1 − c_j)/2.
///
/// Equivalently exp(½ tr log((𝟙 − |γ|)/2)); the ½ accounts for each c_j
/// appearing twice in the spectrum of |γ|.
pub fn gaussian_min_eigenvalue(gamma: &CovarianceMatrix) -> MinEigenvalue {
    let modes = normal_modes(gamma);
    if modes.iter().any(|&c| c >= 1.0 - PURITY_TOL) {
        return MinEigenvalue { value: 0.0, pure: true };
    }
    MinEigenvalue {
        value: modes.iter().map(|c| 0.5 * (1.0 - c)).product(),
        pure: false,
    }
}

/// The trace form exp(½ tr log((𝟙 − |γ|)/2)) with |γ| = √(−γ²).
pub fn gaussian_min_eigenvalue_trace_form(gamma: &CovarianceMatrix) -> f64 {
    let g = &gamma.gamma;
    let minus_sq = -(g * g);
    let abs_vals = minus_sq
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .unwrap_or_default();
    let s: f64 = abs_vals.iter().map(|&v| (0.5 * (1.0 - v.max(0.0).sqrt())).ln()).sum();
    (0.5 * s).exp()
}

/// s(x) = −(1+x)/2 · log₂((1+x)/2)
pub fn mode_entropy_term(x: f64) -> f64 {
    let p = (0.5 * (1.0 + x)).clamp(0.0, 1.0);
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// von Neumann entropy in bits, tr s(iγ).
pub fn gaussian_entropy_bits(gamma: &CovarianceMatrix) -> f64 {
    i_gamma_eigvals(gamma.gamma.as_ref()).into_iter().map(mode_entropy_term).sum()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FermionMutualInfo {
    pub bits: f64,
    pub nats: f64,
}

fn disjoint_modes(a: &Region, b: &Region) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if a.intersects(b) {
        return Err(Error::OverlappingRegions);
    }
    Ok(())
}

/// γ_AB on modes A then B, and its block-diagonal part ξ_AB.
fn blocks(gamma: &CovarianceMatrix, a: &Region, b: &Region) -> Result<(CovarianceMatrix, CovarianceMatrix, RMat)> {
    disjoint_modes(a, b)?;
    let modes: Vec<usize> = a.sites().iter().chain(b.sites()).copied().collect();
    let gab = gamma.restrict(&modes)?;
    let ka = 2 * a.len();
    let k = gab.gamma.nrows();
    let xi = Mat::from_fn(k, k, |i, j| if (i < ka) == (j < ka) { gab.gamma[(i, j)] } else { 0.0 });
    let gc = gab.gamma.as_ref().submatrix(0, ka, ka, k - ka).to_owned();
    Ok((gab, CovarianceMatrix { gamma: xi }, gc))
}

/// I(A:B) = tr s(iξ_AB) − tr s(iγ_AB).
pub fn fermion_mutual_information(gamma: &CovarianceMatrix, a: &Region, b: &Region) -> Result<FermionMutualInfo> {
    let (gab, xi, _) = blocks(gamma, a, b)?;
    let bits = (gaussian_entropy_bits(&xi) - gaussian_entropy_bits(&gab)).max(0.0);
    Ok(FermionMutualInfo {
        bits,
        nats: bits * std::f64::consts::LN_2,
    })
}

/// Check of I ≤ −4n·log₂(min(1 − ‖γ_AB‖, 1 − ‖ξ_AB‖))·C with C replaced by
/// its lower bound ‖γ_C‖/2, all in bits.
#[derive(Clone, Debug, Serialize)]
pub struct FermionBoundReport {
    pub n: usize,
    pub mutual_info_bits: f64,
    /// ‖γ_C‖/2
    pub covariance_proxy: f64,
    pub norm_gamma_ab: f64,
    pub norm_xi_ab: f64,
    /// right-hand side, or None when the logarithm diverges
    pub bound: Option<f64>,
    /// bound − I
    pub slack: Option<f64>,
}

impl FermionBoundReport {
    pub fn vacuous(&self) -> bool {
        self.bound.is_none()
    }

    /// The right-hand side evaluated with another value of C.
    pub fn bound_with(&self, c: f64) -> Option<f64> {
        let m = (1.0 - self.norm_gamma_ab).min(1.0 - self.norm_xi_ab);
        (m > 0.0).then(|| -4.0 * self.n as f64 * m.log2() * c)
    }
}

pub fn fermion_bound_report(gamma: &CovarianceMatrix, a: &Region, b: &Region) -> Result<FermionBoundReport> {
    if a.len() != b.len() {
        return Err(Error::UnequalBlocks { a: a.len(), b: b.len() });
    }
    let (gab, xi, gc) = blocks(gamma, a, b)?;
    let mi = (gaussian_entropy_bits(&xi) - gaussian_entropy_bits(&gab)).max(0.0);
    let mut report = FermionBoundReport {
        n: a.len(),
        mutual_info_bits: mi,
        covariance_proxy: 0.5 * spectral_norm(gc.as_ref()),
        norm_gamma_ab: spectral_norm(gab.gamma.as_ref()),
        norm_xi_ab: spectral_norm(xi.gamma.as_ref()),
        bound: None,
        slack: None,
    };
    report.bound = report.bound_with(report.covariance_proxy);
    report.slack = report.bound.map(|b| b - mi);
    Ok(report)
}

/// Liouvillian gap min(−Re μ) over the drift eigenvalues μ.
///
/// The spectrum of a quadratic Liouvillian consists of sums of drift
/// eigenvalues, so its slowest nonzero rate is the slowest drift rate.
pub fn fermion_gap(ql: &QuadraticLiouvillian) -> Result<f64> {
    ql.ensure_stable()?;
    Ok(ql.drift_eigenvalues()?.iter().map(|z| -z.re).fold(f64::INFINITY, f64::min))
}

/// Uniform chain with hopping t, pairing Δ, potential μ and on-site loss and gain.
pub fn uniform_chain(n: usize, t: f64, delta: f64, mu: f64, loss: f64, gain: f64) -> Result<QuadraticLiouvillian> {
    let lat = Lattice::chain(n);
    let mut terms = Vec::new();
    for i in 0..n {
        if mu != 0.0 {
            terms.push(QuadraticTerm::Potential { i, mu });
        }
        if i + 1 < n {
            if t != 0.0 {
                terms.push(QuadraticTerm::Hopping { i, j: i + 1, t });
            }
            if delta != 0.0 {
                terms.push(QuadraticTerm::Pairing { i, j: i + 1, delta });
            }
        }
    }
    let mut jumps = Vec::new();
    for site in 0..n {
        if loss > 0.0 {
            jumps.push(JumpSpec::Loss { site, rate: loss });
        }
        if gain > 0.0 {
            jumps.push(JumpSpec::Gain { site, rate: gain });
        }
    }
    build_quadratic(&lat, &terms, &jumps)
}
