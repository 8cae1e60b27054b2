use super::operator::{DenseOperator, Embedding};
use crate::error::{Error, Result};
use crate::lattice::{separating_boundary, Lattice, Region};
use crate::linalg::{self, CMat, ONE, ZERO};
use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

const HERMITIAN_TOL: f64 = 1e-10;

/// Superoperators up to this dimension are exponentiated densely.
pub const DENSE_EXPM_LIMIT: usize = 256;

/// Superoperators up to this dimension use a rank-revealing factorization.
pub const FULL_PIVOT_LIMIT: usize = 1024;

/// A Hamiltonian piece and jump operators acting on a support region.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub support: Region,
    pub hamiltonian: Option<CMat>,
    pub jumps: Vec<CMat>,
}

impl LocalTerm {
    pub fn new(support: Region, hamiltonian: Option<CMat>, jumps: Vec<CMat>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if let Some(h) = &hamiltonian {
            let defect = linalg::hermiticity_defect(h.as_ref());
            if defect > HERMITIAN_TOL * linalg::max_abs(h.as_ref()).max(1.0) {
                return Err(Error::Validation(vec![format!(
                    "Hamiltonian on {:?} is not Hermitian (defect {defect:e})",
                    support.sites()
                )]));
            }
        }
        Ok(LocalTerm {
            support,
            hamiltonian,
            jumps,
        })
    }

    pub fn hamiltonian(support: Region, h: CMat) -> Result<Self> {
        LocalTerm::new(support, Some(h), Vec::new())
    }

    pub fn dissipator(support: Region, jumps: Vec<CMat>) -> Result<Self> {
        LocalTerm::new(support, None, jumps)
    }

    fn local_dim(&self) -> Option<usize> {
        self.hamiltonian
            .as_ref()
            .map(|h| h.nrows())
            .or_else(|| self.jumps.first().map(|l| l.nrows()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Schroedinger,
    Heisenberg,
}

pub enum Restriction<'a> {
    ToRegion(&'a Region),
    StripBoundary(&'a Region, &'a Region),
}

#[derive(Clone, Debug)]
struct Compiled {
    emb: Embedding,
    // G = -iH - ½ Σ L†L, so ℒ(ρ) = Gρ + ρG† + Σ LρL†
    g: CMat,
    g_adj: CMat,
    jumps: Vec<(CMat, CMat)>,
    norm: f64,
}

/// A sum of local Lindblad terms on a lattice.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    lattice: Lattice,
    site_dims: Vec<usize>,
    terms: Vec<LocalTerm>,
    compiled: OnceLock<Vec<Compiled>>,
    superop: OnceLock<CMat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitivityReport {
    pub primitive: bool,
    pub null_dim: usize,
    pub min_eig: f64,
    pub rank_tol: f64,
}

impl Liouvillian {
    pub fn new(lattice: Lattice, site_dims: Vec<usize>, terms: Vec<LocalTerm>) -> Result<Self> {
        if site_dims.len() != lattice.sites() {
            return Err(Error::DimensionMismatch {
                expected: lattice.sites(),
                found: site_dims.len(),
            });
        }
        let mut problems = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            if t.support.lattice() != &lattice {
                return Err(Error::LatticeMismatch);
            }
            let want: usize = t.support.sites().iter().map(|&s| site_dims[s]).product();
            let ops = t.hamiltonian.iter().chain(&t.jumps);
            for op in ops {
                if op.nrows() != want || op.ncols() != want {
                    problems.push(format!(
                        "term {i}: operator is {}x{}, support needs {want}x{want}",
                        op.nrows(),
                        op.ncols()
                    ));
                }
            }
            if t.local_dim().is_none() {
                problems.push(format!("term {i}: no Hamiltonian and no jumps"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(Liouvillian {
            lattice,
            site_dims,
            terms,
            compiled: OnceLock::new(),
            superop: OnceLock::new(),
        })
    }

    pub fn qubits(lattice: Lattice, terms: Vec<LocalTerm>) -> Result<Self> {
        let n = lattice.sites();
        Liouvillian::new(lattice, vec![2; n], terms)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    pub fn supports(&self) -> Vec<Region> {
        self.terms.iter().map(|t| t.support.clone()).collect()
    }

    pub fn with_terms(&self, terms: Vec<LocalTerm>) -> Result<Self> {
        Liouvillian::new(self.lattice.clone(), self.site_dims.clone(), terms)
    }

    fn compiled(&self) -> &[Compiled] {
        self.compiled.get_or_init(|| {
            self.terms
                .iter()
                .map(|t| {
                    let emb = Embedding::new(&self.site_dims, t.support.sites())
                        .expect("supports validated at construction");
                    let dl = emb.local_dim;
                    let mut g = match &t.hamiltonian {
                        Some(h) => linalg::scaled(h.as_ref(), -linalg::I),
                        None => Mat::zeros(dl, dl),
                    };
                    let mut norm = 0.0;
                    let mut jumps = Vec::with_capacity(t.jumps.len());
                    for l in &t.jumps {
                        let ld = linalg::adjoint(l.as_ref());
                        let k = &ld * l;
                        g -= linalg::scaled(k.as_ref(), linalg::re(0.5));
                        norm += linalg::op_norm(l.as_ref()).powi(2);
                        jumps.push((l.clone(), ld));
                    }
                    norm += 2.0 * linalg::op_norm(g.as_ref());
                    let g_adj = linalg::adjoint(g.as_ref());
                    Compiled {
                        emb,
                        g,
                        g_adj,
                        jumps,
                        norm,
                    }
                })
                .collect()
        })
    }

    /// Upper bound on the norm of ℒ and ℒ* on Hilbert-Schmidt space.
    pub fn norm_bound(&self) -> f64 {
        self.compiled().iter().map(|c| c.norm).sum()
    }

    /// ℒ(ρ) applied term by term without forming global operators.
    pub fn apply(&self, rho: MatRef<'_, c64>) -> CMat {
        let d = self.dim();
        let mut out = Mat::zeros(d, d);
        for c in self.compiled() {
            out += c.emb.left_mul(c.g.as_ref(), rho);
            out += c.emb.right_mul(rho, c.g_adj.as_ref());
            for (l, ld) in &c.jumps {
                let lr = c.emb.left_mul(l.as_ref(), rho);
                out += c.emb.right_mul(lr.as_ref(), ld.as_ref());
            }
        }
        out
    }

    /// ℒ*(f), the Heisenberg-picture generator.
    pub fn apply_adjoint(&self, f: MatRef<'_, c64>) -> CMat {
        let d = self.dim();
        let mut out = Mat::zeros(d, d);
        for c in self.compiled() {
            out += c.emb.left_mul(c.g_adj.as_ref(), f);
            out += c.emb.right_mul(f, c.g.as_ref());
            for (l, ld) in &c.jumps {
                let lf = c.emb.left_mul(ld.as_ref(), f);
                out += c.emb.right_mul(lf.as_ref(), l.as_ref());
            }
        }
        out
    }

    pub fn apply_picture(&self, x: MatRef<'_, c64>, picture: Picture) -> CMat {
        match picture {
            Picture::Schroedinger => self.apply(x),
            Picture::Heisenberg => self.apply_adjoint(x),
        }
    }

    /// Matrix Ŝ with Ŝ vec(ρ) = vec(ℒ(ρ)) under column stacking. Built once.
    pub fn superop(&self) -> &CMat {
        self.superop.get_or_init(|| self.assemble_superop())
    }

    /// Matrix of ℒ* in the same vectorization; the adjoint of Ŝ.
    pub fn heisenberg_superop(&self) -> CMat {
        linalg::adjoint(self.superop().as_ref())
    }

    fn assemble_superop(&self) -> CMat {
        let d = self.dim();
        let mut s = Mat::<c64>::zeros(d * d, d * d);
        for c in self.compiled() {
            let e = &c.emb;
            let dl = e.local_dim;
            // 𝟙 ⊗ G
            for j in 0..d {
                for i in 0..d {
                    let base = e.rest[i] * dl;
                    for l2 in 0..dl {
                        let v = c.g[(e.loc[i], l2)];
                        if v != ZERO {
                            s[(i + d * j, e.full[base + l2] + d * j)] += v;
                        }
                    }
                }
            }
            // conj(G) ⊗ 𝟙
            for j in 0..d {
                let base = e.rest[j] * dl;
                for l2 in 0..dl {
                    let v = c.g[(e.loc[j], l2)].conj();
                    if v == ZERO {
                        continue;
                    }
                    let jp = e.full[base + l2];
                    for i in 0..d {
                        s[(i + d * j, i + d * jp)] += v;
                    }
                }
            }
            // conj(L) ⊗ L
            for (l, _) in &c.jumps {
                for j in 0..d {
                    let bj = e.rest[j] * dl;
                    for l2 in 0..dl {
                        let lb = l[(e.loc[j], l2)].conj();
                        if lb == ZERO {
                            continue;
                        }
                        let jp = e.full[bj + l2];
                        for i in 0..d {
                            let bi = e.rest[i] * dl;
                            for l1 in 0..dl {
                                let la = l[(e.loc[i], l1)];
                                if la != ZERO {
                                    s[(i + d * j, e.full[bi + l1] + d * jp)] += la * lb;
                                }
                            }
                        }
                    }
                }
            }
        }
        s
    }

    /// e^{tℒ} or e^{tℒ*} applied to the operand.
    pub fn evolve(&self, operand: &DenseOperator, t: f64, picture: Picture) -> Result<DenseOperator> {
        if operand.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: operand.dim(),
            });
        }
        if t < 0.0 || !t.is_finite() {
            return Err(Error::Numerical(format!("evolution time must be nonnegative, got {t}")));
        }
        Ok(operand.with_mat(self.evolve_mat(operand.mat(), t, picture)))
    }

    pub fn evolve_mat(&self, x: &CMat, t: f64, picture: Picture) -> CMat {
        if t == 0.0 || self.terms.is_empty() {
            return x.clone();
        }
        let d = self.dim();
        if d * d <= DENSE_EXPM_LIMIT {
            let s = match picture {
                Picture::Schroedinger => self.superop().clone(),
                Picture::Heisenberg => self.heisenberg_superop(),
            };
            let e = linalg::expm(linalg::scaled(s.as_ref(), linalg::re(t)).as_ref());
            let v = &e * linalg::vectorize(x.as_ref());
            return linalg::unvectorize(v.as_ref(), d);
        }
        linalg::expm_action(
            |y| self.apply_picture(y.as_ref(), picture),
            self.norm_bound(),
            t,
            x,
        )
    }

    fn rank_tol(&self) -> f64 {
        1e-12 * self.dim() as f64
    }

    /// Null-space dimension of Ŝ and one null vector, reshaped to a matrix.
    fn null_space(&self) -> (usize, Option<CMat>) {
        let s = self.superop();
        let n = s.nrows();
        let d = self.dim();
        let tol = 1e-12 * n as f64;
        if n <= FULL_PIVOT_LIMIT {
            let lu = s.full_piv_lu();
            let u = lu.U();
            let (_, q) = (lu.P().arrays().0, lu.Q().arrays().0);
            let scale = u[(0, 0)].norm().max(f64::MIN_POSITIVE);
            let rank = (0..n).take_while(|&k| u[(k, k)].norm() > tol * scale).count();
            let null_dim = n - rank;
            if null_dim == 0 {
                return (0, None);
            }
            // Back-substitute U y = 0 with y[rank] = 1 and the remaining free entries 0.
            let mut y = vec![ZERO; n];
            y[rank] = ONE;
            for k in (0..rank).rev() {
                let mut acc = u[(k, rank)];
                for m in k + 1..rank {
                    acc += u[(k, m)] * y[m];
                }
                y[k] = -acc / u[(k, k)];
            }
            let mut x = Mat::<c64>::zeros(n, 1);
            for j in 0..n {
                x[(q[j], 0)] = y[j];
            }
            (null_dim, Some(linalg::unvectorize(x.as_ref(), d)))
        } else {
            // Trace preservation makes the diagonal rows of Ŝ linearly dependent,
            // so replacing one of them by the trace functional leaves a regular
            // system exactly when the null space is one-dimensional.
            let mut m = s.clone();
            for j in 0..n {
                m[(0, j)] = ZERO;
            }
            for i in 0..d {
                m[(0, i + d * i)] = ONE;
            }
            let lu = m.partial_piv_lu();
            let u = lu.U();
            let piv: Vec<f64> = (0..n).map(|k| u[(k, k)].norm()).collect();
            let max = piv.iter().cloned().fold(0.0, f64::max);
            let small = piv.iter().filter(|&&p| p <= tol * max).count();
            if small > 0 {
                return (1 + small, None);
            }
            let mut rhs = Mat::<c64>::zeros(n, 1);
            rhs[(0, 0)] = ONE;
            let x = lu.solve(&rhs);
            (1, Some(linalg::unvectorize(x.as_ref(), d)))
        }
    }

    pub fn primitivity(&self) -> PrimitivityReport {
        let rank_tol = self.rank_tol();
        let (null_dim, vec) = self.null_space();
        let min_eig = match (null_dim, vec) {
            (1, Some(x)) => match normalize_state(x) {
                Some(rho) => linalg::herm_eigvals(rho.as_ref())[0],
                None => f64::NAN,
            },
            _ => f64::NAN,
        };
        PrimitivityReport {
            primitive: null_dim == 1 && min_eig > rank_tol,
            null_dim,
            min_eig,
            rank_tol,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity().primitive
    }

    /// The unique full-rank stationary state.
    pub fn stationary_state(&self) -> Result<DenseOperator> {
        let rank_tol = self.rank_tol();
        let (null_dim, vec) = self.null_space();
        let rho = match (null_dim, vec) {
            (1, Some(x)) => normalize_state(x),
            _ => None,
        };
        let Some(rho) = rho else {
            return Err(Error::NotPrimitive {
                null_dim,
                min_eig: f64::NAN,
            });
        };
        let min_eig = linalg::herm_eigvals(rho.as_ref())[0];
        if min_eig <= rank_tol {
            return Err(Error::NotPrimitive { null_dim, min_eig });
        }
        DenseOperator::new(rho, self.site_dims.clone())
    }

    /// Keeps the terms inside a region, or removes the terms crossing the
    /// band between two regions.
    pub fn restrict(&self, mode: Restriction<'_>) -> Result<Liouvillian> {
        let keep: Vec<LocalTerm> = match mode {
            Restriction::ToRegion(b) => {
                if b.is_empty() {
                    return Err(Error::EmptyRegion);
                }
                self.terms
                    .iter()
                    .filter(|t| t.support.is_subset(b))
                    .cloned()
                    .collect()
            }
            Restriction::StripBoundary(a, b) => {
                let cut = separating_boundary(a, b, &self.supports())?;
                self.terms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !cut.contains(i))
                    .map(|(_, t)| t.clone())
                    .collect()
            }
        };
        self.with_terms(keep)
    }

    /// The terms supported in `b`, re-indexed as a generator on a chain of
    /// `|b|` sites in the order of `b`. Evolution on this smaller space,
    /// tensored with the identity, equals evolution under
    /// `restrict(ToRegion(b))` for operators supported in `b`.
    pub fn localize(&self, b: &Region) -> Result<Liouvillian> {
        if b.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let chain = Lattice::chain(b.len());
        let pos = |s: usize| b.sites().binary_search(&s).unwrap();
        let mut terms = Vec::new();
        for t in self.terms.iter().filter(|t| t.support.is_subset(b)) {
            let support = Region::new(&chain, t.support.sites().iter().map(|&s| pos(s)))?;
            terms.push(LocalTerm {
                support,
                hamiltonian: t.hamiltonian.clone(),
                jumps: t.jumps.clone(),
            });
        }
        let dims = b.sites().iter().map(|&s| self.site_dims[s]).collect();
        Liouvillian::new(chain, dims, terms)
    }

    /// Adds the terms of another generator on the same lattice.
    pub fn plus(&self, extra: &[LocalTerm]) -> Result<Liouvillian> {
        let mut terms = self.terms.clone();
        terms.extend(extra.iter().cloned());
        self.with_terms(terms)
    }
}

fn normalize_state(x: CMat) -> Option<CMat> {
    let tr = linalg::trace(x.as_ref());
    if tr.norm() < 1e-300 || !tr.re.is_finite() {
        return None;
    }
    let rho = linalg::scaled(x.as_ref(), ONE / tr);
    Some(linalg::hermitian_part(rho.as_ref()))
}

/// Full-lattice generator assembled from a global Hamiltonian and global
/// jumps, used as an independent oracle.
pub fn dense_superop(h: MatRef<'_, c64>, jumps: &[CMat]) -> CMat {
    let d = h.nrows();
    let id = linalg::identity(d);
    let mut g = linalg::scaled(h, -linalg::I);
    for l in jumps {
        g -= linalg::scaled((l.adjoint() * l).as_ref(), linalg::re(0.5));
    }
    let mut s = linalg::kron(id.as_ref(), g.as_ref());
    s += linalg::kron(linalg::conj(g.as_ref()).as_ref(), id.as_ref());
    for l in jumps {
        s += linalg::kron(linalg::conj(l.as_ref()).as_ref(), l.as_ref());
    }
    s
}
