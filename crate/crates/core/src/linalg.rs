//! Dense complex linear algebra shared by the spin, mixing and correlation
//! modules. Thin wrappers over `faer` plus the few matrix functions it does
//! not ship (Hermitian functional calculus, Padé exponential, Lanczos).

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{c64, Mat, MatRef, Side};

pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn scaled(a: MatRef<'_, c64>, s: c64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn adjoint(a: MatRef<'_, c64>) -> CMat {
    a.adjoint().to_owned()
}

pub fn conj(a: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// Hilbert-Schmidt inner product tr(a† b).
pub fn hs_inner(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    let mut acc = ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].conj() * b[(i, j)];
        }
    }
    acc
}

pub fn frobenius(a: MatRef<'_, c64>) -> f64 {
    a.norm_l2()
}

pub fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// (a + a†) / 2
pub fn hermitian_part(a: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j.min(a.nrows() - 1) {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

/// Kronecker product with the first factor as the most significant index.
pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = Mat::zeros(ar * br, ac * bc);
    for j1 in 0..ac {
        for i1 in 0..ar {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for j2 in 0..bc {
                for i2 in 0..br {
                    out[(i1 * br + i2, j1 * bc + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization: vec(ρ)[i + d j] = ρ[i, j].
pub fn vectorize(a: MatRef<'_, c64>) -> CMat {
    let (r, c) = (a.nrows(), a.ncols());
    Mat::from_fn(r * c, 1, |k, _| a[(k % r, k / r)])
}

pub fn unvectorize(v: MatRef<'_, c64>, rows: usize) -> CMat {
    let cols = v.nrows() / rows;
    Mat::from_fn(rows, cols, |i, j| v[(i + rows * j, 0)])
}

pub fn to_complex(a: MatRef<'_, f64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| re(a[(i, j)]))
}

pub fn real_part(a: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    pub fn new(a: MatRef<'_, c64>) -> Self {
        let h = hermitian_part(a);
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .expect("self-adjoint eigendecomposition failed");
        let values = evd.S().column_vector().iter().map(|x| x.re).collect();
        HermEig {
            values,
            vectors: evd.U().to_owned(),
        }
    }

    /// V diag(f(λ)) V†
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMat {
        let v = &self.vectors;
        let n = v.nrows();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let mut scaled_v = v.clone();
        for j in 0..n {
            for i in 0..n {
                scaled_v[(i, j)] *= fv[j];
            }
        }
        &scaled_v * v.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

pub fn herm_eigvals(a: MatRef<'_, c64>) -> Vec<f64> {
    let h = hermitian_part(a);
    h.self_adjoint_eigenvalues(Side::Lower)
        .expect("self-adjoint eigenvalues failed")
}

pub fn herm_fn(a: MatRef<'_, c64>, f: impl Fn(f64) -> f64) -> CMat {
    HermEig::new(a).apply(f)
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm_herm(a: MatRef<'_, c64>) -> f64 {
    herm_eigvals(a).iter().map(|x| x.abs()).sum()
}

/// Trace norm of a general matrix (sum of singular values).
pub fn trace_norm(a: MatRef<'_, c64>) -> f64 {
    a.singular_values()
        .expect("singular values failed")
        .iter()
        .sum()
}

/// Operator norm (largest singular value).
pub fn op_norm(a: MatRef<'_, c64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.singular_values()
        .expect("singular values failed")
        .first()
        .copied()
        .unwrap_or(0.0)
}

pub fn op_norm_herm(a: MatRef<'_, c64>) -> f64 {
    herm_eigvals(a)
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn norm1(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn inverse(a: MatRef<'_, c64>) -> CMat {
    a.partial_piv_lu().inverse()
}

pub fn solve(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    a.partial_piv_lu().solve(b)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: MatRef<'_, c64>) -> CMat {
    let n = a.nrows();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    const THETA13: f64 = 5.371920351148152;
    let nrm = norm1(a);
    let squarings = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = scaled(a, re(0.5f64.powi(squarings as i32)));
    let b = &PADE13;
    let id = identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> CMat {
        Mat::from_fn(n, n, |i, j| {
            a6[(i, j)] * c6 + a4[(i, j)] * c4 + a2[(i, j)] * c2 + id[(i, j)] * c0
        })
    };
    let u_inner = &a6 * lin(b[13], b[11], b[9], 0.0) + lin(b[7], b[5], b[3], b[1]);
    let u = &a * &u_inner;
    let v = &a6 * lin(b[12], b[10], b[8], 0.0) + lin(b[6], b[4], b[2], b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve(q.as_ref(), p.as_ref());
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// exp(t A) applied to `v` by truncated Taylor series on sub-steps, where
/// `apply` computes A·x and `norm_bound` bounds the induced norm of A.
pub fn expm_action<F>(apply: F, norm_bound: f64, t: f64, v: &CMat) -> CMat
where
    F: Fn(&CMat) -> CMat,
{
    if t == 0.0 || norm_bound == 0.0 {
        return v.clone();
    }
    let steps = (t.abs() * norm_bound).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut x = v.clone();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        let scale = frobenius(acc.as_ref()).max(f64::MIN_POSITIVE);
        for k in 1..=60 {
            term = scaled(apply(&term).as_ref(), re(h / k as f64));
            acc += &term;
            if frobenius(term.as_ref()) <= 1e-17 * scale {
                break;
            }
        }
        x = acc;
    }
    x
}

/// Largest eigenvalue of a Hermitian operator given by its action, found by
/// Lanczos with full reorthogonalization. Vectors are matrices with the
/// Hilbert-Schmidt inner product; `deflate` lists orthonormal directions to
/// project out.
pub fn lanczos_largest<F>(
    apply: F,
    start: &CMat,
    deflate: &[CMat],
    max_iter: usize,
    tol: f64,
) -> Option<f64>
where
    F: Fn(&CMat) -> CMat,
{
    let project = |w: &mut CMat| {
        for d in deflate {
            let c = hs_inner(d.as_ref(), w.as_ref());
            *w -= scaled(d.as_ref(), c);
        }
    };
    let mut q = start.clone();
    project(&mut q);
    let n0 = frobenius(q.as_ref());
    if n0 == 0.0 {
        return None;
    }
    q = scaled(q.as_ref(), re(1.0 / n0));
    let mut basis: Vec<CMat> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut scale = 0.0f64;
    for k in 0..max_iter {
        let mut w = apply(&basis[k]);
        project(&mut w);
        let alpha = hs_inner(basis[k].as_ref(), w.as_ref()).re;
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let c = hs_inner(b.as_ref(), w.as_ref());
                w -= scaled(b.as_ref(), c);
            }
            project(&mut w);
        }
        let beta = frobenius(w.as_ref());
        scale = scale.max(alpha.abs()).max(beta);
        let m = alphas.len();
        let t = Mat::<f64>::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let evd = t
            .self_adjoint_eigen(Side::Lower)
            .expect("tridiagonal eigendecomposition failed");
        let theta = evd.S().column_vector()[m - 1];
        let resid = (beta * evd.U()[(m - 1, m - 1)]).abs();
        // A tiny β means the Krylov space is invariant (degenerate spectra
        // exhaust it early); continuing would normalize rounding noise.
        if resid <= tol * theta.abs().max(1.0) || beta <= 1e-10 * scale {
            return Some(theta);
        }
        betas.push(beta);
        basis.push(scaled(w.as_ref(), re(1.0 / beta)));
    }
    None
}
