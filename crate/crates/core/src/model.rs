//! JSON model files: lattice, generator terms and experiment settings.
//!
//! The schema is documented in `docs/model-schema.md`.

use crate::error::{Error, Result};
use crate::fermion::{build_quadratic, JumpSpec, QuadraticLiouvillian, QuadraticTerm};
use crate::lattice::{Lattice, Region};
use crate::linalg::{self, CMat};
use crate::spin_system::{davies_generator, is_pauli_label, pauli_string, DaviesOptions, Liouvillian, LocalTerm};
use faer::{c64, Mat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Spin,
    Davies,
    Fermion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub extents: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub string: String,
    #[serde(default = "one")]
    pub coeff: f64,
}

fn one() -> f64 {
    1.0
}

/// Real and imaginary parts of a dense matrix, row by row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// An operator on the sites of a term: a sum of Pauli strings or a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli: Option<Vec<PauliTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
}

impl OperatorSpec {
    pub fn paulis(terms: &[(&str, f64)]) -> Self {
        OperatorSpec {
            pauli: Some(
                terms
                    .iter()
                    .map(|&(s, c)| PauliTerm {
                        string: s.to_string(),
                        coeff: c,
                    })
                    .collect(),
            ),
            matrix: None,
        }
    }

    fn check(&self, local_dim: usize, nsites: usize, qubits: bool) -> std::result::Result<(), String> {
        match (&self.pauli, &self.matrix) {
            (Some(_), Some(_)) => Err("give either `pauli` or `matrix`, not both".into()),
            (None, None) => Err("operator needs `pauli` or `matrix`".into()),
            (Some(list), None) => {
                if !qubits {
                    return Err("Pauli strings require qubit sites".into());
                }
                if list.is_empty() {
                    return Err("empty Pauli sum".into());
                }
                for (k, p) in list.iter().enumerate() {
                    if p.string.chars().count() != nsites {
                        return Err(format!(
                            "pauli[{k}]: string {:?} has {} labels for {} sites",
                            p.string,
                            p.string.chars().count(),
                            nsites
                        ));
                    }
                    if let Some(c) = p.string.chars().find(|&c| !is_pauli_label(c)) {
                        return Err(format!("pauli[{k}]: unknown label {c:?}"));
                    }
                    if !p.coeff.is_finite() {
                        return Err(format!("pauli[{k}]: coefficient is not finite"));
                    }
                }
                Ok(())
            }
            (None, Some(m)) => {
                let square = |rows: &Vec<Vec<f64>>| rows.len() == local_dim && rows.iter().all(|r| r.len() == local_dim);
                if !square(&m.re) || m.im.as_ref().is_some_and(|im| !square(im)) {
                    return Err(format!("matrix must be {local_dim}x{local_dim}"));
                }
                let finite = m.re.iter().chain(m.im.iter().flatten()).flatten().all(|v| v.is_finite());
                if !finite {
                    return Err("matrix has non-finite entries".into());
                }
                Ok(())
            }
        }
    }

    /// Dense matrix; assumes `check` passed.
    pub fn to_matrix(&self) -> CMat {
        if let Some(list) = &self.pauli {
            let d = 1usize << list[0].string.chars().count();
            let mut out = Mat::<c64>::zeros(d, d);
            for p in list {
                out += linalg::scaled(pauli_string(&p.string).as_ref(), linalg::re(p.coeff));
            }
            return out;
        }
        let m = self.matrix.as_ref().expect("operator checked");
        let n = m.re.len();
        Mat::from_fn(n, n, |i, j| {
            let im = m.im.as_ref().map_or(0.0, |x| x[i][j]);
            c64::new(m.re[i][j], im)
        })
    }
}

/// A local Lindblad term: optional Hamiltonian and jump operators on `sites`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinTermSpec {
    pub sites: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<OperatorSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitedOperator {
    pub sites: Vec<usize>,
    pub op: OperatorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaviesSpec {
    pub beta: f64,
    #[serde(default = "one")]
    pub eta0: f64,
    #[serde(default = "yes")]
    pub include_hamiltonian: bool,
    pub hamiltonian: Vec<SitedOperator>,
    pub couplings: Vec<SitedOperator>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FermionTermSpec {
    Hopping { i: usize, j: usize, t: f64 },
    Potential { i: usize, mu: f64 },
    Pairing { i: usize, j: usize, delta: f64 },
    Majorana { j: usize, k: usize, value: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FermionJumpSpec {
    Loss { site: usize, rate: f64 },
    Gain { site: usize, rate: f64 },
    /// Majorana coefficients l of L = lᵀr as [re, im] pairs
    Vector { coefficients: Vec<[f64; 2]> },
}

/// Translation-invariant chain couplings added to every site and bond.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformChainSpec {
    #[serde(default)]
    pub hopping: f64,
    #[serde(default)]
    pub pairing: f64,
    #[serde(default)]
    pub potential: f64,
    #[serde(default)]
    pub loss: f64,
    #[serde(default)]
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<UniformChainSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<FermionTermSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<FermionJumpSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionPair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureSpec {
    C,
    I,
}

/// Names accepted in `experiments.tolerances` and by `--tol`.
pub const TOLERANCE_NAMES: &[&str] = &[
    "slack",
    "epsilon",
    "t_min",
    "t_max",
    "area_tolerance",
    "covariance_tol",
    "velocity",
    "alpha",
];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// regions for correlations and fermion-mi
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<RegionPair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_values: Vec<f64>,
    /// light-cone distances d(Y, Bᶜ) around site 0
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distances: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<RegionPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<SpinTermSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<Vec<usize>>,
    /// block sizes for the area-law sweep
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub id: String,
    pub kind: ModelKind,
    pub lattice: LatticeSpec,
    /// local dimensions for spin models, qubits when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<SpinTermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub davies: Option<DaviesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fermion: Option<FermionSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub experiments: ExperimentSpec,
}

fn is_default(e: &ExperimentSpec) -> bool {
    *e == ExperimentSpec::default()
}

/// A generator built from a model file.
#[derive(Clone, Debug)]
pub enum Model {
    Spin(Liouvillian),
    Fermion(QuadraticLiouvillian),
}

/// Parses and validates JSON model text.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let model: ModelFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path.is_empty() || path == "." {
            inner.to_string()
        } else {
            format!("at `{path}`: {inner}")
        };
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })?;
    let problems = model.validate();
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    parse_model(&std::fs::read_to_string(path)?)
}

impl ModelFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(&self.lattice.extents)
    }

    pub fn sites(&self) -> usize {
        self.lattice.extents.iter().product()
    }

    pub fn seed(&self) -> u64 {
        self.experiments.seed.unwrap_or(0)
    }

    fn dims(&self) -> Vec<usize> {
        self.site_dims.clone().unwrap_or_else(|| vec![2; self.sites()])
    }

    /// Every schema violation, each prefixed by its field path.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ext = &self.lattice.extents;
        if ext.is_empty() || ext.contains(&0) {
            out.push(format!("lattice.extents: need one or more positive extents, got {ext:?}"));
            return out;
        }
        let n = self.sites();
        if self.id.is_empty() || self.id.contains(['/', '\\']) {
            out.push("id: must be a nonempty name without path separators".into());
        }
        let check_sites = |field: &str, sites: &[usize], out: &mut Vec<String>| {
            if sites.is_empty() {
                out.push(format!("{field}: empty site list"));
            }
            for &s in sites {
                if s >= n {
                    out.push(format!("{field}: site {s} out of range for {n} sites"));
                }
            }
            let mut sorted = sites.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                out.push(format!("{field}: repeated site"));
            }
        };
        let dims = self.dims();
        if dims.len() != n || dims.contains(&0) {
            out.push(format!("site_dims: need {n} positive dimensions"));
        }
        let local = |sites: &[usize]| -> usize { sites.iter().map(|&s| dims.get(s).copied().unwrap_or(1)).product() };
        let qubits = |sites: &[usize]| sites.iter().all(|&s| dims.get(s) == Some(&2));
        let check_term = |field: &str, t: &SpinTermSpec, out: &mut Vec<String>| {
            check_sites(&format!("{field}.sites"), &t.sites, out);
            let (d, q) = (local(&t.sites), qubits(&t.sites));
            if let Some(h) = &t.hamiltonian {
                if let Err(e) = h.check(d, t.sites.len(), q) {
                    out.push(format!("{field}.hamiltonian: {e}"));
                }
            }
            for (k, j) in t.jumps.iter().enumerate() {
                if let Err(e) = j.check(d, t.sites.len(), q) {
                    out.push(format!("{field}.jumps[{k}]: {e}"));
                }
            }
            if t.hamiltonian.is_none() && t.jumps.is_empty() {
                out.push(format!("{field}: term has neither hamiltonian nor jumps"));
            }
        };

        match self.kind {
            ModelKind::Spin => {
                for (i, t) in self.terms.iter().enumerate() {
                    check_term(&format!("terms[{i}]"), t, &mut out);
                }
                if self.davies.is_some() || self.fermion.is_some() {
                    out.push("kind spin: `davies` and `fermion` sections are not allowed".into());
                }
            }
            ModelKind::Davies => {
                match &self.davies {
                    None => out.push("davies: section required for kind davies".into()),
                    Some(d) => {
                        if !(d.beta >= 0.0 && d.beta.is_finite()) {
                            out.push(format!("davies.beta: need a finite value >= 0, got {}", d.beta));
                        }
                        if !(d.eta0 > 0.0 && d.eta0.is_finite()) {
                            out.push(format!("davies.eta0: need a finite value > 0, got {}", d.eta0));
                        }
                        if d.couplings.is_empty() {
                            out.push("davies.couplings: at least one coupling required".into());
                        }
                        for (name, list) in [("hamiltonian", &d.hamiltonian), ("couplings", &d.couplings)] {
                            for (i, so) in list.iter().enumerate() {
                                let field = format!("davies.{name}[{i}]");
                                check_sites(&format!("{field}.sites"), &so.sites, &mut out);
                                if let Err(e) = so.op.check(local(&so.sites), so.sites.len(), qubits(&so.sites)) {
                                    out.push(format!("{field}.op: {e}"));
                                }
                            }
                        }
                    }
                }
                if !self.terms.is_empty() || self.fermion.is_some() {
                    out.push("kind davies: `terms` and `fermion` are not allowed".into());
                }
            }
            ModelKind::Fermion => {
                match &self.fermion {
                    None => out.push("fermion: section required for kind fermion".into()),
                    Some(f) => {
                        if f.chain.is_some() && ext.len() != 1 {
                            out.push("fermion.chain: requires a one-dimensional lattice".into());
                        }
                        if let Some(c) = &f.chain {
                            if c.loss < 0.0 || c.gain < 0.0 {
                                out.push("fermion.chain: rates must be >= 0".into());
                            }
                        }
                        for (k, t) in f.terms.iter().enumerate() {
                            let (idx, lim): (Vec<usize>, usize) = match *t {
                                FermionTermSpec::Hopping { i, j, .. } | FermionTermSpec::Pairing { i, j, .. } => {
                                    if i == j {
                                        out.push(format!("fermion.terms[{k}]: i and j must differ"));
                                    }
                                    (vec![i, j], n)
                                }
                                FermionTermSpec::Potential { i, .. } => (vec![i], n),
                                FermionTermSpec::Majorana { j, k: kk, .. } => (vec![j, kk], 2 * n),
                            };
                            for v in idx {
                                if v >= lim {
                                    out.push(format!("fermion.terms[{k}]: index {v} out of range ({lim})"));
                                }
                            }
                        }
                        for (k, j) in f.jumps.iter().enumerate() {
                            match j {
                                FermionJumpSpec::Loss { site, rate } | FermionJumpSpec::Gain { site, rate } => {
                                    if *site >= n {
                                        out.push(format!("fermion.jumps[{k}]: site {site} out of range for {n} modes"));
                                    }
                                    if !(*rate >= 0.0 && rate.is_finite()) {
                                        out.push(format!("fermion.jumps[{k}]: rate must be finite and >= 0"));
                                    }
                                }
                                FermionJumpSpec::Vector { coefficients } => {
                                    if coefficients.len() != 2 * n {
                                        out.push(format!(
                                            "fermion.jumps[{k}]: vector has {} coefficients, expected 2N = {}",
                                            coefficients.len(),
                                            2 * n
                                        ));
                                    }
                                    if coefficients.iter().flatten().any(|v| !v.is_finite()) {
                                        out.push(format!("fermion.jumps[{k}]: non-finite coefficient"));
                                    }
                                }
                            }
                        }
                    }
                }
                if !self.terms.is_empty() || self.davies.is_some() || self.site_dims.is_some() {
                    out.push("kind fermion: `terms`, `davies` and `site_dims` are not allowed".into());
                }
            }
        }

        let e = &self.experiments;
        if let Some(r) = &e.regions {
            check_sites("experiments.regions.a", &r.a, &mut out);
            check_sites("experiments.regions.b", &r.b, &mut out);
        }
        for (i, p) in e.pairs.iter().enumerate() {
            check_sites(&format!("experiments.pairs[{i}].a"), &p.a, &mut out);
            check_sites(&format!("experiments.pairs[{i}].b"), &p.b, &mut out);
        }
        for (i, p) in e.probes.iter().enumerate() {
            check_sites(&format!("experiments.probes[{i}]"), p, &mut out);
        }
        if let Some(t) = &e.perturbation {
            check_term("experiments.perturbation", t, &mut out);
        }
        for (i, &b) in e.blocks.iter().enumerate() {
            if b == 0 || b >= n {
                out.push(format!("experiments.blocks[{i}]: block size {b} must lie in 1..{n}"));
            }
        }
        for (i, &s) in e.s_values.iter().enumerate() {
            if !(0.0..=1.0).contains(&s) {
                out.push(format!("experiments.s_values[{i}]: {s} outside [0, 1]"));
            }
        }
        for (name, v) in &e.tolerances {
            if !TOLERANCE_NAMES.contains(&name.as_str()) {
                out.push(format!("experiments.tolerances.{name}: unknown name"));
            } else if !v.is_finite() {
                out.push(format!("experiments.tolerances.{name}: not finite"));
            }
        }
        out
    }

    /// Builds the generator; the model must have passed validation.
    pub fn build(&self) -> Result<Model> {
        let lat = self.lattice()?;
        match self.kind {
            ModelKind::Spin => {
                let terms = self
                    .terms
                    .iter()
                    .map(|t| local_term(&lat, &self.dims(), t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Model::Spin(Liouvillian::new(lat, self.dims(), terms)?))
            }
            ModelKind::Davies => {
                let d = self.davies.as_ref().ok_or_else(|| Error::Validation(vec!["davies: missing".into()]))?;
                let sited = |list: &[SitedOperator]| -> Result<Vec<(CMat, Region)>> {
                    list.iter()
                        .map(|s| Ok((s.op.to_matrix(), Region::new(&lat, s.sites.iter().copied())?)))
                        .collect()
                };
                let opts = DaviesOptions {
                    beta: d.beta,
                    eta0: d.eta0,
                    include_hamiltonian: d.include_hamiltonian,
                    ..Default::default()
                };
                let l = davies_generator(&lat, &self.dims(), &sited(&d.hamiltonian)?, &sited(&d.couplings)?, &opts)?;
                Ok(Model::Spin(l))
            }
            ModelKind::Fermion => {
                let f = self.fermion.as_ref().ok_or_else(|| Error::Validation(vec!["fermion: missing".into()]))?;
                let (terms, jumps) = fermion_terms(&lat, f);
                Ok(Model::Fermion(build_quadratic(&lat, &terms, &jumps)?))
            }
        }
    }

    pub fn region(&self, sites: &[usize]) -> Result<Region> {
        Region::new(&self.lattice()?, sites.iter().copied())
    }
}

/// Builds a LocalTerm from its description; the sites are sorted and the
/// operator is permuted to match.
pub fn local_term(lat: &Lattice, site_dims: &[usize], t: &SpinTermSpec) -> Result<LocalTerm> {
    let region = Region::new(lat, t.sites.iter().copied())?;
    let dims: Vec<usize> = t.sites.iter().map(|&s| site_dims[s]).collect();
    let reorder = |m: CMat| sort_sites(&t.sites, &dims, m);
    let h = t.hamiltonian.as_ref().map(|h| reorder(h.to_matrix()));
    let jumps = t.jumps.iter().map(|j| reorder(j.to_matrix())).collect();
    LocalTerm::new(region, h, jumps)
}

/// Permutes the tensor factors of `m`, given in the order of `sites`, into
/// ascending site order.
fn sort_sites(sites: &[usize], dims: &[usize], m: CMat) -> CMat {
    let k = sites.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| sites[i]);
    if order.iter().enumerate().all(|(a, &b)| a == b) {
        return m;
    }
    let d = m.nrows();
    let digits = |mut x: usize| {
        let mut v = vec![0; k];
        for i in (0..k).rev() {
            v[i] = x % dims[i];
            x /= dims[i];
        }
        v
    };
    let compose = |v: &[usize]| order.iter().fold(0, |acc, &i| acc * dims[i] + v[i]);
    let perm: Vec<usize> = (0..d).map(|x| compose(&digits(x))).collect();
    let mut out = Mat::<c64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(perm[i], perm[j])] = m[(i, j)];
        }
    }
    out
}

fn fermion_terms(lat: &Lattice, f: &FermionSpec) -> (Vec<QuadraticTerm>, Vec<JumpSpec>) {
    let n = lat.sites();
    let mut terms = Vec::new();
    let mut jumps = Vec::new();
    if let Some(c) = &f.chain {
        for i in 0..n {
            if c.potential != 0.0 {
                terms.push(QuadraticTerm::Potential { i, mu: c.potential });
            }
            if i + 1 < n {
                if c.hopping != 0.0 {
                    terms.push(QuadraticTerm::Hopping { i, j: i + 1, t: c.hopping });
                }
                if c.pairing != 0.0 {
                    terms.push(QuadraticTerm::Pairing {
                        i,
                        j: i + 1,
                        delta: c.pairing,
                    });
                }
            }
            if c.loss > 0.0 {
                jumps.push(JumpSpec::Loss { site: i, rate: c.loss });
            }
            if c.gain > 0.0 {
                jumps.push(JumpSpec::Gain { site: i, rate: c.gain });
            }
        }
    }
    terms.extend(f.terms.iter().map(|t| match *t {
        FermionTermSpec::Hopping { i, j, t } => QuadraticTerm::Hopping { i, j, t },
        FermionTermSpec::Potential { i, mu } => QuadraticTerm::Potential { i, mu },
        FermionTermSpec::Pairing { i, j, delta } => QuadraticTerm::Pairing { i, j, delta },
        FermionTermSpec::Majorana { j, k, value } => QuadraticTerm::Majorana { j, k, value },
    }));
    jumps.extend(f.jumps.iter().map(|j| match j {
        FermionJumpSpec::Loss { site, rate } => JumpSpec::Loss { site: *site, rate: *rate },
        FermionJumpSpec::Gain { site, rate } => JumpSpec::Gain { site: *site, rate: *rate },
        FermionJumpSpec::Vector { coefficients } => {
            JumpSpec::Vector(coefficients.iter().map(|&[re, im]| c64::new(re, im)).collect())
        }
    }));
    (terms, jumps)
}
