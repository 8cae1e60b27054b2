use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::linalg::{self, CMat, ONE, ZERO};
use faer::{c64, Mat, MatRef};

/// A square complex matrix on a tensor product of local spaces.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    mat: CMat,
    site_dims: Vec<usize>,
}

impl DenseOperator {
    pub fn new(mat: CMat, site_dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let d: usize = site_dims.iter().product();
        if d != mat.nrows() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: mat.nrows(),
            });
        }
        Ok(DenseOperator { mat, site_dims })
    }

    pub fn qubits(mat: CMat) -> Result<Self> {
        let n = mat.nrows().trailing_zeros() as usize;
        if 1usize << n != mat.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "dimension {} is not a power of two",
                mat.nrows()
            )));
        }
        DenseOperator::new(mat, vec![2; n])
    }

    pub fn identity(site_dims: Vec<usize>) -> Self {
        let d = site_dims.iter().product();
        DenseOperator {
            mat: linalg::identity(d),
            site_dims,
        }
    }

    pub fn maximally_mixed(site_dims: Vec<usize>) -> Self {
        let d: usize = site_dims.iter().product();
        DenseOperator {
            mat: linalg::scaled(linalg::identity(d).as_ref(), linalg::re(1.0 / d as f64)),
            site_dims,
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn as_ref(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> c64 {
        linalg::trace(self.mat.as_ref())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(self.mat.as_ref()) <= tol
    }

    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(self.mat.as_ref())
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn check_state(&self, tol: f64) -> Result<()> {
        if !self.is_hermitian(tol) {
            return Err(Error::Numerical("state is not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::Numerical(format!("state has trace {tr}")));
        }
        let min = linalg::herm_eigvals(self.mat.as_ref())[0];
        if min < -tol {
            return Err(Error::NotPositive { min_eig: min });
        }
        Ok(())
    }

    pub fn with_mat(&self, mat: CMat) -> Self {
        DenseOperator {
            mat,
            site_dims: self.site_dims.clone(),
        }
    }
}

pub fn pauli(c: char) -> CMat {
    let z = ZERO;
    let o = ONE;
    let i = linalg::I;
    let m = match c.to_ascii_uppercase() {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        '+' => [[z, o], [z, z]],
        '-' => [[z, z], [o, z]],
        other => panic!("unknown Pauli label {other:?}"),
    };
    Mat::from_fn(2, 2, |r, s| m[r][s])
}

pub fn is_pauli_label(c: char) -> bool {
    matches!(c.to_ascii_uppercase(), 'I' | 'X' | 'Y' | 'Z' | '+' | '-')
}

/// Tensor product of single-qubit Paulis, leftmost label most significant.
pub fn pauli_string(labels: &str) -> CMat {
    let mut out = linalg::identity(1);
    for c in labels.chars() {
        out = linalg::kron(out.as_ref(), pauli(c).as_ref());
    }
    out
}

/// Index tables splitting a global basis index into the digits on a
/// support and on its complement.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub dim: usize,
    pub local_dim: usize,
    pub rest_dim: usize,
    /// loc[k], rest[k]: local and complementary index of global index k
    pub loc: Vec<usize>,
    pub rest: Vec<usize>,
    /// full[r * local_dim + l]: global index from (rest, local)
    pub full: Vec<usize>,
}

impl Embedding {
    pub fn new(site_dims: &[usize], support: &[usize]) -> Result<Self> {
        let n = site_dims.len();
        for &s in support {
            if s >= n {
                return Err(Error::SiteOutOfRange { site: s, sites: n });
            }
        }
        let dim: usize = site_dims.iter().product();
        let local_dim: usize = support.iter().map(|&s| site_dims[s]).product();
        let rest_dim = dim / local_dim;
        let on_support: Vec<bool> = (0..n).map(|s| support.contains(&s)).collect();
        let mut loc = vec![0; dim];
        let mut rest = vec![0; dim];
        let mut full = vec![0; dim];
        let mut digits = vec![0usize; n];
        for k in 0..dim {
            let mut rem = k;
            for s in (0..n).rev() {
                digits[s] = rem % site_dims[s];
                rem /= site_dims[s];
            }
            let mut l = 0;
            for &s in support {
                l = l * site_dims[s] + digits[s];
            }
            let mut r = 0;
            for s in 0..n {
                if !on_support[s] {
                    r = r * site_dims[s] + digits[s];
                }
            }
            loc[k] = l;
            rest[k] = r;
            full[r * local_dim + l] = k;
        }
        Ok(Embedding {
            dim,
            local_dim,
            rest_dim,
            loc,
            rest,
            full,
        })
    }

    /// The global matrix acting as `op` on the support.
    pub fn embed(&self, op: MatRef<'_, c64>) -> CMat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for k in 0..self.dim {
            let base = self.rest[k] * self.local_dim;
            let lk = self.loc[k];
            for l2 in 0..self.local_dim {
                out[(k, self.full[base + l2])] = op[(lk, l2)];
            }
        }
        out
    }

    /// (op ⊗ 𝟙) · x
    pub fn left_mul(&self, op: MatRef<'_, c64>, x: MatRef<'_, c64>) -> CMat {
        let dl = self.local_dim;
        let mut out = Mat::zeros(self.dim, x.ncols());
        for j in 0..x.ncols() {
            let col = x.col(j);
            for k in 0..self.dim {
                let base = self.rest[k] * dl;
                let lk = self.loc[k];
                let mut acc = ZERO;
                for l2 in 0..dl {
                    acc += op[(lk, l2)] * col[self.full[base + l2]];
                }
                out[(k, j)] = acc;
            }
        }
        out
    }

    /// x · (op ⊗ 𝟙)
    pub fn right_mul(&self, x: MatRef<'_, c64>, op: MatRef<'_, c64>) -> CMat {
        let dl = self.local_dim;
        let mut out = Mat::zeros(x.nrows(), self.dim);
        for k in 0..self.dim {
            let base = self.rest[k] * dl;
            let lk = self.loc[k];
            let mut col = out.col_mut(k);
            for l2 in 0..dl {
                let c = op[(l2, lk)];
                if c == ZERO {
                    continue;
                }
                let src = x.col(self.full[base + l2]);
                for i in 0..x.nrows() {
                    col[i] += src[i] * c;
                }
            }
        }
        out
    }

    /// Partial trace of a global operator onto the support.
    pub fn reduce(&self, x: MatRef<'_, c64>) -> CMat {
        let dl = self.local_dim;
        let mut out = Mat::zeros(dl, dl);
        for r in 0..self.rest_dim {
            for l1 in 0..dl {
                let k1 = self.full[r * dl + l1];
                for l2 in 0..dl {
                    out[(l1, l2)] += x[(k1, self.full[r * dl + l2])];
                }
            }
        }
        out
    }
}

/// Embeds an operator on `support` into the lattice Hilbert space.
pub fn embed_local(op: &DenseOperator, support: &Region, site_dims: &[usize]) -> Result<DenseOperator> {
    if support.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let emb = Embedding::new(site_dims, support.sites())?;
    if op.dim() != emb.local_dim {
        return Err(Error::DimensionMismatch {
            expected: emb.local_dim,
            found: op.dim(),
        });
    }
    DenseOperator::new(emb.embed(op.as_ref()), site_dims.to_vec())
}

/// Reduced state on `keep`.
pub fn partial_trace(state: &DenseOperator, keep: &Region) -> Result<DenseOperator> {
    let emb = Embedding::new(state.site_dims(), keep.sites())?;
    if emb.dim != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: emb.dim,
            found: state.dim(),
        });
    }
    let dims = keep.sites().iter().map(|&s| state.site_dims()[s]).collect();
    DenseOperator::new(emb.reduce(state.as_ref()), dims)
}
