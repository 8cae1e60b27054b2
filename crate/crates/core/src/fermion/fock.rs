//! Dense Fock-space construction of Gaussian states and quadratic
//! Liouvillians through the Jordan–Wigner map, for a handful of modes.
//!
//! Independent of the covariance-matrix formulas: states are built from
//! Wick's theorem, ρ = 2^{−n} Σ_S i^{|S|/2} Pf(γ_S) c_S over even ordered
//! subsets S of the Majoranas c = √2 r.

use super::{CovarianceMatrix, QuadraticLiouvillian};
use crate::error::Result;
use crate::lattice::Region;
use crate::linalg::{self, CMat};
use crate::spin_system::{pauli, DenseOperator, Liouvillian, LocalTerm};
use faer::{c64, Mat};

/// Largest mode count accepted by the dense constructions.
pub const MAX_MODES: usize = 5;

fn assert_small(n: usize) {
    assert!(n <= MAX_MODES, "dense Fock construction limited to {MAX_MODES} modes, got {n}");
}

/// Majoranas c_k with c_k² = 𝟙: c_{2j} = Z^{⊗j}X, c_{2j+1} = Z^{⊗j}Y.
/// The occupied state of a mode is |1⟩.
pub fn majoranas(n: usize) -> Vec<CMat> {
    assert_small(n);
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        for p in ['X', 'Y'] {
            let mut m = linalg::identity(1);
            for k in 0..n {
                let f = if k < j {
                    pauli('Z')
                } else if k == j {
                    pauli(p)
                } else {
                    pauli('I')
                };
                m = linalg::kron(m.as_ref(), f.as_ref());
            }
            out.push(m);
        }
    }
    out
}

fn pfaffian(a: &Mat<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let v = a[(first, j)];
        if v == 0.0 {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&k| k != j).collect();
        let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * v * pfaffian(a, &rest);
    }
    total
}

/// Dense Gaussian state with covariance matrix γ.
pub fn gaussian_state(gamma: &CovarianceMatrix) -> CMat {
    let n = gamma.modes();
    assert_small(n);
    let c = majoranas(n);
    let dim = 1usize << n;
    let m = 2 * n;
    let mut rho = Mat::<c64>::zeros(dim, dim);
    for mask in 0u32..(1u32 << m) {
        let k = mask.count_ones() as usize;
        if k % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let pf = pfaffian(gamma.gamma(), &idx);
        if pf == 0.0 {
            continue;
        }
        let phase = [c64::new(1.0, 0.0), c64::new(0.0, 1.0), c64::new(-1.0, 0.0), c64::new(0.0, -1.0)][(k / 2) % 4];
        let mut op = linalg::identity(dim);
        for &i in &idx {
            op = &op * &c[i];
        }
        rho += linalg::scaled(op.as_ref(), phase * pf);
    }
    linalg::scaled(rho.as_ref(), linalg::re(1.0 / dim as f64))
}

/// γ_jk = i tr(ρ[r_j, r_k]) read off a dense state.
pub fn covariance_of(rho: &CMat, n: usize) -> Mat<f64> {
    let c = majoranas(n);
    Mat::from_fn(2 * n, 2 * n, |j, k| {
        let comm = &c[j] * &c[k] - &c[k] * &c[j];
        // r = c/√2, so [r_j, r_k] = ½[c_j, c_k]
        (c64::new(0.0, 0.5) * linalg::trace((rho * &comm).as_ref())).re
    })
}

/// H = i rᵀ h r.
pub fn hamiltonian(ql: &QuadraticLiouvillian) -> CMat {
    let n = ql.modes();
    let c = majoranas(n);
    let dim = 1usize << n;
    let mut h = Mat::<c64>::zeros(dim, dim);
    for j in 0..2 * n {
        for k in 0..2 * n {
            let v = ql.h()[(j, k)];
            if v != 0.0 {
                // i h_jk r_j r_k = (i/2) h_jk c_j c_k
                h += linalg::scaled((&c[j] * &c[k]).as_ref(), c64::new(0.0, 0.5 * v));
            }
        }
    }
    linalg::hermitian_part(h.as_ref())
}

/// L = lᵀ r.
pub fn jump(l: &[c64]) -> CMat {
    let n = l.len() / 2;
    let c = majoranas(n);
    let dim = 1usize << n;
    let mut out = Mat::<c64>::zeros(dim, dim);
    for (k, &v) in l.iter().enumerate() {
        out += linalg::scaled(c[k].as_ref(), v * std::f64::consts::FRAC_1_SQRT_2);
    }
    out
}

/// The quadratic Liouvillian as a dense qubit generator on a chain.
pub fn liouvillian(ql: &QuadraticLiouvillian) -> Result<Liouvillian> {
    let n = ql.modes();
    assert_small(n);
    let lat = crate::lattice::Lattice::chain(n);
    let support = Region::new(&lat, 0..n)?;
    let jumps = ql.jumps().iter().map(|l| jump(l)).collect();
    let term = LocalTerm::new(support, Some(hamiltonian(ql)), jumps)?;
    Liouvillian::qubits(lat, vec![term])
}

/// Dense state with the given covariance matrix, wrapped with qubit site dimensions.
pub fn gaussian_operator(gamma: &CovarianceMatrix) -> Result<DenseOperator> {
    DenseOperator::qubits(gaussian_state(gamma))
}
