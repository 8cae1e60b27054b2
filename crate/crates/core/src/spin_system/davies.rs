//! Thermal (Davies) generators from a Hamiltonian and system-bath couplings.

use super::liouvillian::{Liouvillian, LocalTerm};
use super::operator::Embedding;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Region};
use crate::linalg::{self, CMat, HermEig};
use faer::{c64, Mat, MatRef};

/// Relative tolerance for merging Bohr frequencies.
pub const BOHR_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct DaviesOptions {
    pub beta: f64,
    pub eta0: f64,
    pub include_hamiltonian: bool,
    pub bohr_tol: f64,
}

impl Default for DaviesOptions {
    fn default() -> Self {
        DaviesOptions {
            beta: 1.0,
            eta0: 1.0,
            include_hamiltonian: true,
            bohr_tol: BOHR_TOL,
        }
    }
}

/// A Bohr frequency with the jump S(ω) of one coupling.
#[derive(Clone, Debug)]
pub struct BohrJump {
    pub coupling: usize,
    pub omega: f64,
    pub rate: f64,
    pub op: CMat,
}

/// KMS-compatible rate η(ω) = η₀ e^{βω/2}.
pub fn davies_rate(omega: f64, beta: f64, eta0: f64) -> f64 {
    eta0 * (0.5 * beta * omega).exp()
}

/// Sums local Hamiltonian pieces into a global matrix.
pub fn global_operator(site_dims: &[usize], terms: &[(CMat, Region)]) -> Result<CMat> {
    let d: usize = site_dims.iter().product();
    let mut h = Mat::<c64>::zeros(d, d);
    for (op, r) in terms {
        let emb = Embedding::new(site_dims, r.sites())?;
        if op.nrows() != emb.local_dim {
            return Err(Error::DimensionMismatch {
                expected: emb.local_dim,
                found: op.nrows(),
            });
        }
        h += emb.embed(op.as_ref());
    }
    Ok(h)
}

/// A Bohr frequency with the (a, b) eigenvalue index pairs realizing it.
type BohrCluster = (f64, Vec<(usize, usize)>);

/// Groups the gaps E_b − E_a into Bohr frequencies. Returns the frequency of
/// each cluster and, for each cluster, the (a, b) index pairs in it.
fn bohr_clusters(energies: &[f64], tol: f64) -> Result<Vec<BohrCluster>> {
    let n = energies.len();
    let mut gaps: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            gaps.push((energies[b] - energies[a], a, b));
        }
    }
    gaps.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, Vec<(usize, usize)>)> = Vec::new();
    let mut start = 0;
    for k in 1..=gaps.len() {
        if k == gaps.len() || gaps[k].0 - gaps[k - 1].0 > tol {
            let cluster = &gaps[start..k];
            let lo = cluster[0].0;
            let hi = cluster[cluster.len() - 1].0;
            if hi - lo > 4.0 * tol {
                return Err(Error::DegenerateBinning {
                    omega: 0.5 * (lo + hi),
                });
            }
            let mean = cluster.iter().map(|g| g.0).sum::<f64>() / cluster.len() as f64;
            out.push((mean, cluster.iter().map(|g| (g.1, g.2)).collect()));
            start = k;
        }
    }
    // Snap the cluster containing zero gaps to exactly zero.
    for c in out.iter_mut() {
        if c.1.iter().any(|&(a, b)| a == b) {
            c.0 = 0.0;
        }
    }
    Ok(out)
}

/// Jumps S_k(ω) = Σ_{E_b − E_a = ω} P_a A_k P_b for every coupling, in the
/// global basis.
pub fn bohr_jumps(h: MatRef<'_, c64>, couplings: &[CMat], opts: &DaviesOptions) -> Result<Vec<BohrJump>> {
    let eig = HermEig::new(h);
    let hnorm = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let clusters = bohr_clusters(&eig.values, opts.bohr_tol * hnorm)?;
    let v = &eig.vectors;
    let mut out = Vec::new();
    for (k, a) in couplings.iter().enumerate() {
        let m = v.adjoint() * a * v;
        let scale = linalg::max_abs(m.as_ref()).max(1e-300);
        for (omega, pairs) in &clusters {
            let mut masked = Mat::<c64>::zeros(m.nrows(), m.ncols());
            let mut any = false;
            for &(i, j) in pairs {
                let x = m[(i, j)];
                if x.norm() > 1e-14 * scale {
                    masked[(i, j)] = x;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let op = v * &masked * v.adjoint();
            out.push(BohrJump {
                coupling: k,
                omega: *omega,
                rate: davies_rate(*omega, opts.beta, opts.eta0),
                op,
            });
        }
    }
    Ok(out)
}

/// Sites on which a global operator acts nontrivially.
fn nontrivial_sites(x: MatRef<'_, c64>, site_dims: &[usize]) -> Result<Vec<usize>> {
    let scale = linalg::frobenius(x).max(1e-300);
    let n = site_dims.len();
    let mut out = Vec::new();
    for s in 0..n {
        let others: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let emb = Embedding::new(site_dims, &others)?;
        let red = linalg::scaled(emb.reduce(x).as_ref(), linalg::re(1.0 / site_dims[s] as f64));
        let back = emb.embed(red.as_ref());
        if linalg::frobenius((&back - x.to_owned()).as_ref()) > 1e-10 * scale {
            out.push(s);
        }
    }
    Ok(out)
}

/// Builds the Davies generator. The Hamiltonian is given by local pieces so
/// that the coherent part stays local; each coupling becomes one dissipative
/// term whose support is detected from its Bohr jumps.
pub fn davies_generator(
    lattice: &Lattice,
    site_dims: &[usize],
    hamiltonian: &[(CMat, Region)],
    couplings: &[(CMat, Region)],
    opts: &DaviesOptions,
) -> Result<Liouvillian> {
    if opts.beta < 0.0 || opts.eta0 <= 0.0 {
        return Err(Error::Validation(vec![format!(
            "need beta >= 0 and eta0 > 0, got beta = {}, eta0 = {}",
            opts.beta, opts.eta0
        )]));
    }
    let h = global_operator(site_dims, hamiltonian)?;
    for (a, r) in couplings {
        if linalg::hermiticity_defect(a.as_ref()) > 1e-10 * linalg::max_abs(a.as_ref()).max(1.0) {
            return Err(Error::Validation(vec![format!(
                "coupling on {:?} is not Hermitian",
                r.sites()
            )]));
        }
    }
    let globals = global_operator_each(site_dims, couplings)?;
    let jumps = bohr_jumps(h.as_ref(), &globals, opts)?;
    let mut terms = Vec::new();
    if opts.include_hamiltonian {
        for (op, r) in hamiltonian {
            terms.push(LocalTerm::hamiltonian(r.clone(), op.clone())?);
        }
    }
    for k in 0..couplings.len() {
        let mine: Vec<&BohrJump> = jumps.iter().filter(|j| j.coupling == k).collect();
        if mine.is_empty() {
            continue;
        }
        let mut sites: Vec<usize> = Vec::new();
        for j in &mine {
            sites.extend(nontrivial_sites(j.op.as_ref(), site_dims)?);
        }
        if sites.is_empty() {
            continue;
        }
        let support = Region::new(lattice, sites)?;
        let emb = Embedding::new(site_dims, support.sites())?;
        let norm = 1.0 / emb.rest_dim as f64;
        let local: Vec<CMat> = mine
            .iter()
            .map(|j| {
                let red = emb.reduce(j.op.as_ref());
                linalg::scaled(red.as_ref(), linalg::re(j.rate.sqrt() * norm))
            })
            .filter(|l| linalg::max_abs(l.as_ref()) > 0.0)
            .collect();
        terms.push(LocalTerm::dissipator(support, local)?);
    }
    Liouvillian::new(lattice.clone(), site_dims.to_vec(), terms)
}

fn global_operator_each(site_dims: &[usize], ops: &[(CMat, Region)]) -> Result<Vec<CMat>> {
    ops.iter()
        .map(|(op, r)| global_operator(site_dims, std::slice::from_ref(&(op.clone(), r.clone()))))
        .collect()
}

/// e^{−βH}/Z.
pub fn gibbs_state(h: MatRef<'_, c64>, beta: f64) -> CMat {
    let eig = HermEig::new(h);
    let e0 = eig.min();
    let z: f64 = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
    eig.apply(|e| (-beta * (e - e0)).exp() / z)
}
