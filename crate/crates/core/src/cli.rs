//! Command-line front end: parses a model file, runs one computation and
//! writes JSON/CSV artifacts.

use crate::correlations::{correlation_bounds, triple_with, CovarianceOptions};
use crate::error::{Error, Result};
use crate::fermion::{
    fermion_bound_report, fermion_gap, fermion_mutual_information, gaussian_min_eigenvalue, normal_modes,
    stationary_covariance, QuadraticLiouvillian,
};
use crate::harness::{
    area_law_fermion, area_law_spin, clustering_experiment, estimate_velocity, lightcone_report, lppl_experiment,
    site_zero_probes, AreaLawOptions, ClusteringOptions, ExperimentReport, LightConeOptions, LpplOptions, Measure,
};
use crate::lattice::Region;
use crate::mixing::{
    check_s_reversibility, gap_report, inverse_norm, log_sobolev_estimate, LogSobolevOptions, MixingSummary,
    WeightedContext,
};
use crate::model::{load_model, local_term, MeasureSpec, Model, ModelFile, RegionPair, TOLERANCE_NAMES};
use crate::spin_system::Liouvillian;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "qmix", version, about = "Mixing, correlation and area-law computations for local Lindblad generators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for randomized routines; overrides the model's seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "qmix-out")]
    pub out: PathBuf,

    /// Tolerance override NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,

    /// Format of the summary printed on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stationary state of a spin or Davies model.
    Steady { model: PathBuf },
    /// Spectral gap and χ² constants.
    Gap { model: PathBuf },
    /// Variational Log-Sobolev estimate.
    Lsobolev { model: PathBuf },
    /// s-reversibility residuals.
    Reversibility { model: PathBuf },
    /// Correlation measures and their bounds on the stationary state.
    Correlations { model: PathBuf },
    /// Light-cone crossing times and velocity fit.
    Lightcone { model: PathBuf },
    /// Decay of stationary correlations with distance.
    Clustering { model: PathBuf },
    /// Response of distant marginals to a local perturbation.
    Lppl { model: PathBuf },
    /// Mutual information of growing blocks.
    Arealaw { model: PathBuf },
    /// Stationary covariance matrix of a quadratic fermionic model.
    FermionSteady { model: PathBuf },
    /// Gaussian mutual information and its bound.
    FermionMi { model: PathBuf },
    /// Gap, χ², Log-Sobolev and ‖σ⁻¹‖ in one summary.
    Report { model: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Steady { .. } => "steady",
            Command::Gap { .. } => "gap",
            Command::Lsobolev { .. } => "lsobolev",
            Command::Reversibility { .. } => "reversibility",
            Command::Correlations { .. } => "correlations",
            Command::Lightcone { .. } => "lightcone",
            Command::Clustering { .. } => "clustering",
            Command::Lppl { .. } => "lppl",
            Command::Arealaw { .. } => "arealaw",
            Command::FermionSteady { .. } => "fermion-steady",
            Command::FermionMi { .. } => "fermion-mi",
            Command::Report { .. } => "report",
        }
    }

    fn model(&self) -> &Path {
        match self {
            Command::Steady { model }
            | Command::Gap { model }
            | Command::Lsobolev { model }
            | Command::Reversibility { model }
            | Command::Correlations { model }
            | Command::Lightcone { model }
            | Command::Clustering { model }
            | Command::Lppl { model }
            | Command::Arealaw { model }
            | Command::FermionSteady { model }
            | Command::FermionMi { model }
            | Command::Report { model } => model,
        }
    }
}

/// Exit status for an error: 2 for model errors, 3 for numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_model_error() {
        2
    } else {
        3
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command and returns the text printed on standard output.
pub fn run(cli: &Cli) -> Result<String> {
    if let Some(n) = cli.threads {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let model = load_model(cli.command.model())?;
    let ctx = Context::new(cli, model)?;
    let out = match &cli.command {
        Command::Steady { .. } => ctx.steady()?,
        Command::Gap { .. } => ctx.gap()?,
        Command::Lsobolev { .. } => ctx.lsobolev()?,
        Command::Reversibility { .. } => ctx.reversibility()?,
        Command::Correlations { .. } => ctx.correlations()?,
        Command::Lightcone { .. } => Output::Report(ctx.lightcone()?),
        Command::Clustering { .. } => Output::Report(ctx.clustering()?),
        Command::Lppl { .. } => Output::Report(ctx.lppl()?),
        Command::Arealaw { .. } => Output::Report(ctx.arealaw()?),
        Command::FermionSteady { .. } => ctx.fermion_steady()?,
        Command::FermionMi { .. } => ctx.fermion_mi()?,
        Command::Report { .. } => ctx.report()?,
    };
    ctx.emit(cli.command.name(), out)
}

enum Output {
    Summary(Value),
    Report(ExperimentReport),
}

struct Context<'a> {
    cli: &'a Cli,
    file: ModelFile,
    seed: u64,
    tol: BTreeMap<String, f64>,
}

fn parse_tol(s: &str) -> Result<(String, f64)> {
    let bad = || Error::Validation(vec![format!("--tol {s}: expected NAME=VALUE")]);
    let (name, value) = s.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if !TOLERANCE_NAMES.contains(&name) {
        return Err(Error::Validation(vec![format!(
            "--tol {name}: unknown name, expected one of {}",
            TOLERANCE_NAMES.join(", ")
        )]));
    }
    let v: f64 = value.trim().parse().map_err(|_| bad())?;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok((name.to_string(), v))
}

fn not_for(kind: &str, cmd: &str) -> Error {
    Error::Validation(vec![format!("subcommand {cmd} does not apply to {kind} models")])
}

fn matrix_json(m: &crate::linalg::CMat) -> Value {
    let re: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
    json!({ "re": re, "im": im })
}

impl<'a> Context<'a> {
    fn new(cli: &'a Cli, file: ModelFile) -> Result<Self> {
        let mut tol = file.experiments.tolerances.clone();
        for t in &cli.tol {
            let (k, v) = parse_tol(t)?;
            tol.insert(k, v);
        }
        let seed = cli.seed.unwrap_or_else(|| file.seed());
        Ok(Context { cli, file, seed, tol })
    }

    fn id(&self) -> &str {
        &self.file.id
    }

    fn spin(&self, cmd: &str) -> Result<Liouvillian> {
        match self.file.build()? {
            Model::Spin(l) => Ok(l),
            Model::Fermion(_) => Err(not_for("fermion", cmd)),
        }
    }

    fn fermion(&self, cmd: &str) -> Result<QuadraticLiouvillian> {
        match self.file.build()? {
            Model::Fermion(q) => Ok(q),
            Model::Spin(_) => Err(not_for("spin", cmd)),
        }
    }

    fn s_values(&self) -> Vec<f64> {
        if self.file.experiments.s_values.is_empty() {
            vec![0.0, 0.5, 1.0]
        } else {
            self.file.experiments.s_values.clone()
        }
    }

    /// Configured regions, or the two end sites of the lattice.
    fn regions(&self) -> Result<(Region, Region)> {
        let pair = self.file.experiments.regions.clone().unwrap_or(RegionPair {
            a: vec![0],
            b: vec![self.file.sites().saturating_sub(1)],
        });
        Ok((self.file.region(&pair.a)?, self.file.region(&pair.b)?))
    }

    fn lightcone_options(&self) -> LightConeOptions {
        let mut o = LightConeOptions::default();
        if let Some(&e) = self.tol.get("epsilon") {
            o.epsilon = e;
        }
        if let Some(&t) = self.tol.get("t_min") {
            o.t_min = t;
        }
        if let Some(&t) = self.tol.get("t_max") {
            o.t_max = t;
        }
        o
    }

    fn emit(&self, cmd: &str, out: Output) -> Result<String> {
        match out {
            Output::Report(r) => {
                r.write(&self.cli.out)?;
                Ok(match self.cli.format {
                    Format::Json => serde_json::to_string_pretty(&r)?,
                    Format::Csv => {
                        let mut s = r.columns.join(",");
                        for row in &r.rows {
                            s.push('\n');
                            s.push_str(&row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                        }
                        s
                    }
                })
            }
            Output::Summary(mut v) => {
                if let Value::Object(m) = &mut v {
                    m.insert("model_id".into(), json!(self.id()));
                    m.insert("command".into(), json!(cmd));
                    m.insert("seed".into(), json!(self.seed));
                }
                std::fs::create_dir_all(&self.cli.out)?;
                let path = self.cli.out.join(format!("{}.{}.{}.json", self.id(), cmd, self.seed));
                std::fs::write(&path, serde_json::to_string_pretty(&v)?)?;
                Ok(match self.cli.format {
                    Format::Json => serde_json::to_string_pretty(&v)?,
                    Format::Csv => {
                        let mut lines = vec!["key,value".to_string()];
                        if let Value::Object(m) = &v {
                            for (k, x) in m {
                                if x.is_number() || x.is_boolean() || x.is_string() {
                                    let s = x.to_string();
                                    lines.push(format!("{k},{}", s.trim_matches('"')));
                                }
                            }
                        }
                        lines.join("\n")
                    }
                })
            }
        }
    }

    fn steady(&self) -> Result<Output> {
        let l = self.spin("steady")?;
        let sigma = l.stationary_state()?;
        let ev = crate::linalg::herm_eigvals(sigma.as_ref());
        Ok(Output::Summary(json!({
            "dim": sigma.dim(),
            "min_eigenvalue": ev[0],
            "inverse_norm": 1.0 / ev[0],
            "state": matrix_json(sigma.mat()),
        })))
    }

    fn gap(&self) -> Result<Output> {
        match self.file.build()? {
            Model::Spin(l) => {
                let r = gap_report(&l, &self.s_values())?;
                Ok(Output::Summary(json!({
                    "lambda": r.gap,
                    "chi2": r.chi2,
                    "chi2_deviation": r.chi2_deviation,
                })))
            }
            Model::Fermion(q) => Ok(Output::Summary(json!({ "lambda": fermion_gap(&q)? }))),
        }
    }

    fn ls_options(&self) -> LogSobolevOptions {
        LogSobolevOptions {
            seed: self.seed,
            ..Default::default()
        }
    }

    fn lsobolev(&self) -> Result<Output> {
        let l = self.spin("lsobolev")?;
        let sigma = l.stationary_state()?;
        let ctx = WeightedContext::new(&sigma, 0.0)?;
        let r = log_sobolev_estimate(&l, &ctx, &self.ls_options())?;
        let lambda = gap_report(&l, &[0.0])?.gap;
        Ok(Output::Summary(json!({
            "alpha": r.alpha,
            "lambda": lambda,
            "restarts": r.restarts,
            "note": "alpha is a variational upper estimate",
        })))
    }

    fn reversibility(&self) -> Result<Output> {
        let l = self.spin("reversibility")?;
        let sigma = l.stationary_state()?;
        let mut rows = Vec::new();
        for s in self.s_values() {
            let ctx = WeightedContext::new(&sigma, s)?;
            let diss = check_s_reversibility(&l, &ctx, false)?;
            let full = check_s_reversibility(&l, &ctx, true)?;
            rows.push(json!({
                "s": s,
                "dissipative": diss,
                "with_hamiltonian": full,
            }));
        }
        Ok(Output::Summary(json!({ "checks": rows })))
    }

    fn correlations(&self) -> Result<Output> {
        let l = self.spin("correlations")?;
        let sigma = l.stationary_state()?;
        let (a, b) = self.regions()?;
        let mut opts = CovarianceOptions {
            seed: self.seed,
            ..Default::default()
        };
        if let Some(&t) = self.tol.get("covariance_tol") {
            opts.tol = t;
        }
        let triple = triple_with(&sigma, &a, &b, &opts)?;
        let rep = correlation_bounds(triple);
        Ok(Output::Summary(json!({
            "a": a.sites(),
            "b": b.sites(),
            "covariance": rep.triple.covariance,
            "trace_norm": rep.triple.trace_norm,
            "mutual_info": rep.triple.mutual_info,
            "bounds": rep,
            "holds": rep.holds(1e-9),
        })))
    }

    fn probes(&self, l: &Liouvillian) -> Result<Vec<(crate::harness::LocalObservable, Region)>> {
        let n = self.file.sites();
        let distances: Vec<usize> = if !self.file.experiments.distances.is_empty() {
            self.file.experiments.distances.clone()
        } else if n >= 6 {
            (3..n).collect()
        } else {
            (1..n).collect()
        };
        site_zero_probes(l, &distances)
    }

    fn velocity(&self, l: &Liouvillian) -> Result<(f64, &'static str)> {
        if let Some(&v) = self.tol.get("velocity") {
            return Ok((v, "configured"));
        }
        let est = estimate_velocity(l, &self.probes(l)?, &self.lightcone_options())?;
        Ok((est.velocity, "measured light-cone estimate"))
    }

    fn lightcone(&self) -> Result<ExperimentReport> {
        let l = self.spin("lightcone")?;
        let est = estimate_velocity(&l, &self.probes(&l)?, &self.lightcone_options())?;
        Ok(lightcone_report(&est, self.id(), self.seed))
    }

    fn clustering(&self) -> Result<ExperimentReport> {
        let l = self.spin("clustering")?;
        let n = self.file.sites();
        let pairs: Vec<(Region, Region)> = if self.file.experiments.pairs.is_empty() {
            (1..n)
                .map(|d| Ok((self.file.region(&[0])?, self.file.region(&[d])?)))
                .collect::<Result<_>>()?
        } else {
            self.file
                .experiments
                .pairs
                .iter()
                .map(|p| Ok((self.file.region(&p.a)?, self.file.region(&p.b)?)))
                .collect::<Result<_>>()?
        };
        let (velocity, source) = self.velocity(&l)?;
        let measure = match self.file.experiments.measure.unwrap_or(MeasureSpec::C) {
            MeasureSpec::C => Measure::C,
            MeasureSpec::I => Measure::I,
        };
        let opts = ClusteringOptions {
            measure,
            velocity,
            lambda: None,
            alpha: self.tol.get("alpha").copied(),
            slack: self.tol.get("slack").copied().unwrap_or(0.1),
            seed: self.seed,
            model_id: self.id().to_string(),
        };
        let mut r = clustering_experiment(&l, &pairs, &opts)?;
        r.note("velocity_source", source);
        Ok(r)
    }

    fn lppl(&self) -> Result<ExperimentReport> {
        let l = self.spin("lppl")?;
        let spec = self
            .file
            .experiments
            .perturbation
            .as_ref()
            .ok_or_else(|| Error::Validation(vec!["experiments.perturbation: required for lppl".into()]))?;
        let lat = self.file.lattice()?;
        let q = local_term(&lat, l.site_dims(), spec)?;
        let probes: Vec<Region> = if self.file.experiments.probes.is_empty() {
            let support = q.support.clone();
            (0..lat.sites())
                .filter(|&s| !support.contains(s))
                .map(|s| self.file.region(&[s]))
                .collect::<Result<_>>()?
        } else {
            self.file
                .experiments
                .probes
                .iter()
                .map(|p| self.file.region(p))
                .collect::<Result<_>>()?
        };
        let opts = LpplOptions {
            velocity: self.tol.get("velocity").copied(),
            alpha: self.tol.get("alpha").copied(),
            seed: self.seed,
            model_id: self.id().to_string(),
        };
        lppl_experiment(&l, &[q], &probes, &opts)
    }

    fn arealaw(&self) -> Result<ExperimentReport> {
        let n = self.file.sites();
        let opts = AreaLawOptions {
            tolerance: self.tol.get("area_tolerance").copied().unwrap_or(0.1),
            seed: self.seed,
            model_id: self.id().to_string(),
        };
        match self.file.build()? {
            Model::Fermion(q) => {
                let sizes: Vec<usize> = if self.file.experiments.blocks.is_empty() {
                    let mut v: Vec<usize> = [n / 16, n / 8, n / 4, n / 2].into_iter().filter(|&s| s >= 1).collect();
                    v.dedup();
                    v
                } else {
                    self.file.experiments.blocks.clone()
                };
                area_law_fermion(&q, &sizes, &opts)
            }
            Model::Spin(l) => {
                let sizes: Vec<usize> = if self.file.experiments.blocks.is_empty() {
                    (1..=n / 2).collect()
                } else {
                    self.file.experiments.blocks.clone()
                };
                let blocks: Vec<Region> = sizes
                    .iter()
                    .map(|&k| self.file.region(&(0..k).collect::<Vec<_>>()))
                    .collect::<Result<_>>()?;
                area_law_spin(&l, &blocks, &opts)
            }
        }
    }

    fn fermion_steady(&self) -> Result<Output> {
        let q = self.fermion("fermion-steady")?;
        let gamma = stationary_covariance(&q)?;
        let g = gamma.gamma();
        let rows: Vec<Vec<f64>> = (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| g[(i, j)]).collect()).collect();
        let min = gaussian_min_eigenvalue(&gamma);
        Ok(Output::Summary(json!({
            "modes": gamma.modes(),
            "gap": fermion_gap(&q)?,
            "lyapunov_residual": q.lyapunov_residual(g),
            "normal_modes": normal_modes(&gamma),
            "min_eigenvalue": min.value,
            "pure": min.pure,
            "gamma": rows,
        })))
    }

    fn fermion_mi(&self) -> Result<Output> {
        let q = self.fermion("fermion-mi")?;
        let gamma = stationary_covariance(&q)?;
        let (a, b) = self.regions()?;
        let mi = fermion_mutual_information(&gamma, &a, &b)?;
        let bound = if a.len() == b.len() {
            Some(fermion_bound_report(&gamma, &a, &b)?)
        } else {
            None
        };
        Ok(Output::Summary(json!({
            "a": a.sites(),
            "b": b.sites(),
            "mutual_info_bits": mi.bits,
            "mutual_info_nats": mi.nats,
            "bound": bound,
        })))
    }

    fn report(&self) -> Result<Output> {
        match self.file.build()? {
            Model::Spin(l) => {
                let sigma = l.stationary_state()?;
                let g = gap_report(&l, &self.s_values())?;
                let ctx = WeightedContext::new(&sigma, 0.0)?;
                let ls = log_sobolev_estimate(&l, &ctx, &self.ls_options())?;
                let summary = MixingSummary {
                    gap: g.gap,
                    chi2: g.chi2,
                    ls_estimate: Some(ls.alpha),
                    inv_norm: inverse_norm(&sigma)?,
                };
                Ok(Output::Summary(serde_json::to_value(summary)?))
            }
            Model::Fermion(q) => {
                let gamma = stationary_covariance(&q)?;
                let min = gaussian_min_eigenvalue(&gamma);
                Ok(Output::Summary(json!({
                    "gap": fermion_gap(&q)?,
                    "inv_norm": if min.value > 0.0 { Some(1.0 / min.value) } else { None },
                    "modes": gamma.modes(),
                })))
            }
        }
    }
}
