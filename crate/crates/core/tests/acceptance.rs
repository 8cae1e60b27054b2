//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every comparison uses an oracle computed independently
//! of the code path under test.

use faer::Mat;
use qmix::correlations::{self, covariance_correlation, mutual_information, trace_correlation, CovarianceOptions};
use qmix::fermion::{self, fock, CovarianceMatrix, RMat};
use qmix::harness::*;
use qmix::lattice::{Lattice, Region};
use qmix::linalg::{self, kron, CMat};
use qmix::mixing::{self, LogSobolevOptions, WeightedContext};
use qmix::models::{self, DaviesChain};
use qmix::random::{self, SeededRng};
use qmix::spin_system::{pauli, DenseOperator, Liouvillian, Picture};
use rand::Rng;
use std::f64::consts::LN_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ok<T>(r: qmix::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn region(lat: &Lattice, s: impl IntoIterator<Item = usize>) -> Region {
    Region::new(lat, s).unwrap()
}

fn davies(sites: usize, beta: f64) -> DaviesChain {
    DaviesChain {
        sites,
        beta,
        field_step: 0.2,
        coupling: 0.3,
        ..Default::default()
    }
}

// ---------------------------------------------------------------- oracles

/// e^A by Taylor series with scaling and squaring.
fn expm_taylor(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = linalg::norm1(a.as_ref());
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = linalg::scaled(a.as_ref(), linalg::re(0.5f64.powi(squarings)));
    let mut term = linalg::identity(n);
    let mut sum = linalg::identity(n);
    for k in 1..30 {
        term = linalg::scaled((&term * &scaled).as_ref(), linalg::re(1.0 / k as f64));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn gibbs(h: &CMat, beta: f64) -> CMat {
    let e = expm_taylor(&linalg::scaled(h.as_ref(), linalg::re(-beta)));
    let z = linalg::trace(e.as_ref()).re;
    linalg::scaled(e.as_ref(), linalg::re(1.0 / z))
}

/// Largest singular value of a real 3×3 matrix by power iteration on TᵀT.
fn largest_singular_value(t: &[[f64; 3]; 3]) -> f64 {
    let mut v = [1.0, 0.7, 0.3];
    let mut value = 0.0;
    for _ in 0..500 {
        let tv: Vec<f64> = (0..3).map(|i| (0..3).map(|j| t[i][j] * v[j]).sum()).collect();
        let w: Vec<f64> = (0..3).map(|j| (0..3).map(|i| t[i][j] * tv[i]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        value = norm.sqrt();
        v = [w[0] / norm, w[1] / norm, w[2] / norm];
    }
    value
}

fn random_orthogonal(d: usize, rng: &mut SeededRng) -> RMat {
    let g = Mat::from_fn(d, d, |_, _| random::real_normal(rng));
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(d, d, |i, j| if r[(j, j)] < 0.0 { -q[(i, j)] } else { q[(i, j)] })
}

/// O diag-blocks(c_j) Oᵀ with uniformly drawn normal-mode values.
fn random_covariance(n: usize, cmax: f64, rng: &mut SeededRng) -> CovarianceMatrix {
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-cmax..cmax)).collect();
    let base = CovarianceMatrix::from_modes(&values).unwrap();
    let o = random_orthogonal(2 * n, rng);
    let g = &o * base.gamma() * o.transpose();
    let g = Mat::from_fn(2 * n, 2 * n, |i, j| 0.5 * (g[(i, j)] - g[(j, i)]));
    CovarianceMatrix::new(g).unwrap()
}

/// Mutual information of the dense Fock-space state, with the modes of A
/// and B moved to the front of the Jordan–Wigner order.
fn dense_mutual_info(g: &CovarianceMatrix, a: &[usize], b: &[usize]) -> f64 {
    let n = g.modes();
    let mut order: Vec<usize> = a.iter().chain(b).copied().collect();
    order.extend((0..n).filter(|m| !a.contains(m) && !b.contains(m)));
    let rho = DenseOperator::qubits(fock::gaussian_state(&g.restrict(&order).unwrap())).unwrap();
    let lat = Lattice::chain(n);
    let ra = region(&lat, 0..a.len());
    let rb = region(&lat, a.len()..a.len() + b.len());
    mutual_information(&rho, &ra, &rb).unwrap()
}

// ---------------------------------------------------------------- criteria

fn chi2_constants_equal_gap() -> Check {
    let models: Vec<(String, Liouvillian)> = vec![
        ("davies qubit β=0.5".into(), ok(models::davies_qubit(0.5, 1.0))?),
        ("davies qubit β=1.5".into(), ok(models::davies_qubit(1.5, 1.0))?),
        ("davies chain N=2".into(), ok(davies(2, 0.7).build())?),
        ("davies chain N=3".into(), ok(davies(3, 1.0).build())?),
    ];
    let mut worst: f64 = 0.0;
    for (name, l) in &models {
        let lambda = ok(mixing::spectral_gap(l))?;
        let sigma = ok(l.stationary_state())?;
        for s in [0.0, 0.5, 1.0] {
            let ctx = ok(WeightedContext::new(&sigma, s))?;
            let lam_s = ok(mixing::chi2_constant(l, &ctx))?;
            let dev = (lam_s - lambda).abs() / lambda;
            worst = worst.max(dev);
            ensure(dev <= 1e-8, || format!("{name}, s={s}: λ_s={lam_s}, λ={lambda}"))?;
        }
    }
    Ok(format!("max |λ_s−λ|/λ = {worst:.1e} over 4 models × 3 values of s"))
}

fn chi2_mixing_bound() -> Check {
    let mut rng = random::rng(101);
    let times: Vec<f64> = (0..10).map(|k| 0.3 * k as f64).collect();
    let mut checked = 0;
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for n in 2..=4 {
        let l = ok(davies(n, 0.8).build())?;
        let d = l.dim();
        let sigma = ok(l.stationary_state())?;
        let lambda = ok(mixing::spectral_gap(&l))?;
        let inv = 1.0 / linalg::herm_eigvals(sigma.as_ref())[0];
        let step = linalg::expm(linalg::scaled(l.superop().as_ref(), linalg::re(times[1])).as_ref());
        // columns are vectorized initial states: pure, low rank and full rank
        let states: Vec<CMat> = (0..100)
            .map(|k| random::density_rank(d, 1 + k % d, &mut rng))
            .collect();
        let mut vecs = Mat::from_fn(d * d, states.len(), |r, c| states[c][(r % d, r / d)]);
        for &t in &times {
            let bound = inv.sqrt() * (-lambda * t).exp();
            for c in 0..states.len() {
                let rho = Mat::from_fn(d, d, |i, j| vecs[(i + j * d, c)]);
                let dist = linalg::trace_norm_herm((&rho - sigma.mat()).as_ref());
                checked += 1;
                min_margin = min_margin.min(bound - dist);
                if dist > bound + 1e-10 {
                    violations += 1;
                }
            }
            vecs = &step * &vecs;
        }
    }
    ensure(violations == 0, || format!("{violations} violations in {checked} checks"))?;
    Ok(format!("{checked} checks (N=2,3,4 × 100 states × 10 times), 0 violations, min margin {min_margin:.2e}"))
}

fn log_sobolev_sanity() -> Check {
    let models: Vec<(&str, Liouvillian)> = vec![
        ("depolarizing qubit", ok(models::depolarizing_qubit(1.0))?),
        ("davies qubit β=0.5", ok(models::davies_qubit(0.5, 1.0))?),
        ("davies qubit β=1.5", ok(models::davies_qubit(1.5, 1.0))?),
        ("davies chain N=2", ok(davies(2, 0.7).build())?),
    ];
    let mut summary = Vec::new();
    for (name, l) in &models {
        let sigma = ok(l.stationary_state())?;
        let ctx = ok(WeightedContext::new(&sigma, 0.5))?;
        ensure(ok(mixing::check_s_reversibility(l, &ctx, false))?.reversible, || {
            format!("{name} is not ½-reversible")
        })?;
        let lambda = ok(mixing::spectral_gap(l))?;
        let alphas: Vec<f64> = (1..=5)
            .map(|seed| {
                let opts = LogSobolevOptions {
                    seed,
                    ..Default::default()
                };
                ok(mixing::log_sobolev_estimate(l, &ctx, &opts)).map(|r| r.alpha)
            })
            .collect::<Result<_, _>>()?;
        for a in &alphas {
            ensure(*a > 0.0 && *a <= lambda + 1e-8, || format!("{name}: α̂={a}, λ={lambda}"))?;
        }
        let spread = alphas.iter().map(|a| (a - alphas[0]).abs()).fold(0.0, f64::max) / alphas[0];
        ensure(spread < 5e-4, || format!("{name}: α̂ over seeds {alphas:?}"))?;
        summary.push(format!("{name} α̂={:.4}≤λ={lambda:.4}", alphas[0]));
    }
    Ok(format!("{}; 5 seeds agree to 3 digits", summary.join(", ")))
}

fn correlation_inequalities() -> Check {
    let lat = Lattice::chain(2);
    let (a, b) = (region(&lat, [0]), region(&lat, [1]));
    let mut rng = random::rng(404);
    let mut min_slack = f64::INFINITY;
    for k in 0..500u64 {
        let w = (k % 10) as f64 / 10.0;
        let raw = random::density(4, &mut rng);
        let prod = kron(random::density(2, &mut rng).as_ref(), random::density(2, &mut rng).as_ref());
        let m = linalg::scaled(raw.as_ref(), linalg::re(1.0 - w)) + linalg::scaled(prod.as_ref(), linalg::re(w));
        let rho = ok(DenseOperator::qubits(m))?;
        let opts = CovarianceOptions {
            seed: k,
            ..Default::default()
        };
        let rep = correlations::correlation_bounds(ok(correlations::triple_with(&rho, &a, &b, &opts))?);
        let upper = rep.mi_upper.ok_or("full-rank state reported singular")?;
        for s in [rep.cov_lower, rep.cov_upper, rep.mi_lower, upper] {
            min_slack = min_slack.min(s);
        }
        ensure(rep.holds(1e-9), || format!("sample {k}: {rep:?}"))?;
    }

    // Bell state: T from the spectrum of Δ = |Φ⟩⟨Φ| − 𝟙/4 (3/4 once, −1/4
    // three times), I from the entropies ln 2 + ln 2 − 0, C as the largest
    // singular value of the Pauli correlation tensor.
    let phi = Mat::from_fn(4, 4, |i, j| if (i == 0 || i == 3) && (j == 0 || j == 3) { linalg::re(0.5) } else { linalg::ZERO });
    let bell = ok(DenseOperator::qubits(phi.clone()))?;
    let delta = &phi - linalg::scaled(linalg::identity(4).as_ref(), linalg::re(0.25));
    let p = ['X', 'Y', 'Z'];
    let mut tensor = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let op = kron(pauli(p[i]).as_ref(), pauli(p[j]).as_ref());
            tensor[i][j] = linalg::trace((&op * &delta).as_ref()).re;
        }
    }
    let c_oracle = largest_singular_value(&tensor);
    let t = ok(trace_correlation(&bell, &a, &b))?;
    let i = ok(mutual_information(&bell, &a, &b))?;
    let c = ok(covariance_correlation(&bell, &a, &b))?;
    ensure((c_oracle - 1.0).abs() < 1e-12, || format!("oracle C = {c_oracle}"))?;
    ensure((t - 1.5).abs() <= 1e-9, || format!("Bell T = {t}"))?;
    ensure((i - 2.0 * LN_2).abs() <= 1e-9, || format!("Bell I = {i}"))?;
    ensure((c - c_oracle).abs() <= 1e-9, || format!("Bell C = {c}"))?;
    Ok(format!("500 states, min slack {min_slack:.2e}; Bell T={t:.10}, I={i:.10}, C={c:.10}"))
}

fn fermionic_inequality() -> Check {
    let mut rng = random::rng(505);
    let mut min_slack = f64::INFINITY;
    let mut vacuous = 0;
    let mut worst_mi: f64 = 0.0;
    for k in 0..200 {
        let n = 1 + k % 6;
        let total = 2 * n;
        let g = random_covariance(total, 0.98, &mut rng);
        let lat = Lattice::chain(total);
        let (a, b): (Vec<usize>, Vec<usize>) = ((0..n).collect(), (n..total).collect());
        let rep = ok(fermion::fermion_bound_report(&g, &region(&lat, a.clone()), &region(&lat, b.clone())))?;
        match rep.slack {
            Some(s) => {
                min_slack = min_slack.min(s);
                ensure(s >= -1e-9, || format!("sample {k}: {rep:?}"))?;
            }
            None => vacuous += 1,
        }
        if total <= 4 {
            let dense = dense_mutual_info(&g, &a, &b);
            worst_mi = worst_mi.max((rep.mutual_info_bits * LN_2 - dense).abs());
        }
    }
    let cases: [(usize, &[usize], &[usize]); 4] = [(2, &[0], &[1]), (3, &[2], &[0]), (4, &[0, 3], &[1]), (4, &[3], &[0, 1, 2])];
    for (n, a, b) in cases {
        for _ in 0..5 {
            let g = random_covariance(n, 0.95, &mut rng);
            let lat = Lattice::chain(n);
            let mi = ok(fermion::fermion_mutual_information(&g, &region(&lat, a.iter().copied()), &region(&lat, b.iter().copied())))?;
            worst_mi = worst_mi.max((mi.nats - dense_mutual_info(&g, a, b)).abs());
        }
    }
    ensure(worst_mi <= 1e-8, || format!("Gaussian vs Fock mutual information differ by {worst_mi:e}"))?;
    Ok(format!(
        "200 states, min slack {min_slack:.2e} ({vacuous} vacuous); Fock oracle max error {worst_mi:.1e}"
    ))
}

fn fermionic_inverse_norm() -> Check {
    let mut rng = random::rng(606);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..10 {
            let g = random_covariance(n, 0.97, &mut rng);
            let product = fermion::gaussian_min_eigenvalue(&g).value;
            let dense = linalg::herm_eigvals(fock::gaussian_state(&g).as_ref())[0];
            let rel = (product / dense - 1.0).abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-9, || format!("n={n}: product {product}, dense {dense}"))?;
        }
    }
    // one mode: |γ| has the doubled eigenvalue c, so exp(tr log((𝟙−|γ|)/2))
    // gives ((1−c)/2)², the square of the true minimum (1−c)/2
    let c = 0.35;
    let g = ok(CovarianceMatrix::from_modes(&[c]))?;
    let exact = (1.0 - c) / 2.0;
    let dense = linalg::herm_eigvals(fock::gaussian_state(&g).as_ref())[0];
    let uncorrected = (2.0 * exact.ln()).exp();
    ensure((dense - exact).abs() < 1e-14, || format!("dense single mode {dense}"))?;
    ensure((uncorrected - exact * exact).abs() < 1e-15 && (uncorrected - exact).abs() > 0.1, || {
        "uncorrected trace form does not square the value".into()
    })?;
    let corrected = fermion::gaussian_min_eigenvalue_trace_form(&g);
    ensure((corrected - exact).abs() < 1e-14, || format!("corrected trace form {corrected}"))?;
    ensure((fermion::gaussian_min_eigenvalue(&g).value - exact).abs() < 1e-15, || "product form".into())?;
    Ok(format!("n=1..4, 40 states, max relative error {worst:.1e}; single mode: trace form needs the ½"))
}

fn light_cone() -> Check {
    let start = Instant::now();
    let l = ok(models::xx_depolarizing_chain(6, 1.0, 0.1))?;
    let lat = l.lattice().clone();
    let z = |s| LocalObservable::new(region(&lat, [s]), pauli('Z')).unwrap();
    let times: Vec<f64> = (0..=12).map(|k| 0.05 * k as f64).collect();

    let mut previous: Option<Vec<f64>> = None;
    for d in 1..=4 {
        let series = ok(lr_deviation_series(&l, &z(0), &region(&lat, 0..d), &times))?;
        ensure(series[0] == 0.0, || format!("lr_deviation at t=0 is {}", series[0]))?;
        ensure(series.windows(2).all(|w| w[1] >= w[0] - 1e-12), || format!("D={d} not monotone in t: {series:?}"))?;
        if let Some(p) = &previous {
            ensure(series.iter().zip(p).all(|(x, y)| *x <= y + 1e-14), || format!("D={d} does not decay"))?;
        }
        previous = Some(series);
    }

    let mut previous: Option<Vec<f64>> = None;
    for d in 1..=5 {
        let split: Vec<f64> = times
            .iter()
            .map(|&t| ok(split_deviation(&l, &z(0), &z(d), t)))
            .collect::<Result<_, _>>()?;
        ensure(split[0] < 1e-14, || format!("split deviation at t=0 is {}", split[0]))?;
        ensure(split.windows(2).all(|w| w[1] >= w[0] - 1e-12), || format!("split D={d} not monotone: {split:?}"))?;
        if let Some(p) = &previous {
            ensure(split.iter().zip(p).all(|(x, y)| *x <= y + 1e-14), || format!("split D={d} does not decay"))?;
        }
        previous = Some(split);
    }

    let est = ok(estimate_velocity(&l, &ok(site_zero_probes(&l, &[3, 4, 5]))?, &LightConeOptions::default()))?;
    ensure(est.velocity.is_finite() && est.velocity > 0.0, || format!("velocity {}", est.velocity))?;
    ensure(est.fit_quality >= 0.9, || format!("R² = {}", est.fit_quality))?;
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "v̂={:.3}, R²={:.4}, {:.1} s",
        est.velocity,
        est.fit_quality,
        elapsed.as_secs_f64()
    ))
}

fn weak_davies() -> DaviesChain {
    DaviesChain {
        sites: 6,
        field_step: 0.13,
        coupling: 0.2,
        ..Default::default()
    }
}

fn clustering() -> Check {
    let l = ok(weak_davies().build())?;
    let lat = l.lattice().clone();
    let est = ok(estimate_velocity(&l, &ok(site_zero_probes(&l, &[3, 4, 5]))?, &LightConeOptions::default()))?;
    let pairs: Vec<(Region, Region)> = (1..=4).map(|d| (region(&lat, [0]), region(&lat, [d]))).collect();
    let opts = ClusteringOptions {
        velocity: est.velocity,
        slack: 0.1,
        ..Default::default()
    };
    let rep = ok(clustering_experiment(&l, &pairs, &opts))?;
    let values = rep.column(1);
    ensure(is_decreasing(&values), || format!("C not decreasing: {values:?}"))?;
    let fitted = rep.fitted_rate.ok_or("no decay rate fitted")?;
    let theory = rep.theory_rate.ok_or("no theory rate")?;
    ensure(fitted >= theory - 0.1, || format!("fitted {fitted} < theory {theory} − 0.1"))?;
    Ok(format!(
        "C(D=1..4) = {}; fitted {fitted:.3} ≥ λ/(v̂+2λ) − 0.1 = {:.3} (v̂={:.2})",
        values.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(", "),
        theory - 0.1,
        est.velocity
    ))
}

fn local_perturbations() -> Check {
    let l = ok(models::xx_loss_gain_chain(6, 0.2, 1.0, 0.5))?;
    let lat = l.lattice().clone();
    let probes: Vec<Region> = (1..=4).map(|d| region(&lat, [d])).collect();
    let q = ok(models::extra_loss(&lat, 0, 1.0))?;
    let rep = ok(lppl_experiment(&l, &[q], &probes, &LpplOptions::default()))?;
    let values = rep.column(1);
    ensure(values.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {values:?}"))?;
    let last = *values.last().unwrap();
    ensure(last <= 1e-3, || format!("value at largest D is {last}"))?;
    Ok(format!(
        "‖ρ_B−σ_B‖₁(D=1..4) = {}",
        values.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(", ")
    ))
}

fn area_law() -> Check {
    let chain = |n| fermion::uniform_chain(n, 1.0, 0.5, 0.3, 0.4, 0.2);
    let ql = ok(chain(200))?;
    let rep = ok(area_law_fermion(&ql, &[50, 100], &AreaLawOptions::default()))?;
    let mi = rep.column(2);
    let change = (mi[1] - mi[0]).abs() / mi[0].abs().max(mi[1].abs());
    ensure(change < 0.1, || format!("I(50)={}, I(100)={}", mi[0], mi[1]))?;
    ensure(rep.passed, || "report not passed".into())?;
    let gaps: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&n| ok(chain(n)).and_then(|q| ok(fermion::fermion_gap(&q))))
        .collect::<Result<_, _>>()?;
    let max = gaps.iter().cloned().fold(f64::MIN, f64::max);
    let min = gaps.iter().cloned().fold(f64::MAX, f64::min);
    let drift = (max - min) / max;
    ensure(drift < 0.05, || format!("gap drift {drift} over {gaps:?}"))?;
    Ok(format!(
        "I(50)={:.5}, I(100)={:.5} nats (change {:.1e}); gap drift {drift:.1e}",
        mi[0], mi[1], change
    ))
}

fn closed_forms() -> Check {
    let mut rng = random::rng(1111);
    let mut worst: f64 = 0.0;
    for g in [0.3, 1.0, 2.5] {
        let l = ok(models::depolarizing_qubit(g))?;
        for _ in 0..5 {
            let rho = ok(DenseOperator::qubits(random::density(2, &mut rng)))?;
            for t in [0.0, 0.05, 0.7, 3.0, 10.0] {
                let out = ok(l.evolve(&rho, t, Picture::Schroedinger))?;
                let e = (-g * t).exp();
                let expected = linalg::scaled(rho.as_ref(), linalg::re(e))
                    + linalg::scaled(linalg::identity(2).as_ref(), linalg::re(0.5 * (1.0 - e)));
                worst = worst.max(linalg::max_abs((out.mat() - &expected).as_ref()));
            }
        }
    }
    ensure(worst <= 1e-10, || format!("depolarizing deviation {worst:e}"))?;

    let mut worst_gibbs: f64 = 0.0;
    for beta in [0.3, 1.0, 2.0] {
        let l = ok(models::davies_qubit(beta, 1.0))?;
        let sigma = ok(l.stationary_state())?;
        worst_gibbs = worst_gibbs.max(linalg::max_abs((sigma.mat() - gibbs(&pauli('Z'), beta)).as_ref()));
    }
    for (n, beta) in [(2, 0.5), (3, 1.0), (4, 0.8)] {
        let chain = davies(n, beta);
        let sigma = ok(ok(chain.build())?.stationary_state())?;
        let h = ok(chain.hamiltonian())?;
        worst_gibbs = worst_gibbs.max(linalg::max_abs((sigma.mat() - gibbs(&h, beta)).as_ref()));
    }
    ensure(worst_gibbs <= 1e-8, || format!("Davies vs Gibbs deviation {worst_gibbs:e}"))?;
    Ok(format!("depolarizing max error {worst:.1e}; Davies vs Gibbs max error {worst_gibbs:.1e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("chi2 constants equal the gap", chi2_constants_equal_gap),
        ("chi2 mixing-time bound", chi2_mixing_bound),
        ("Log-Sobolev estimate sanity", log_sobolev_sanity),
        ("correlation measure inequalities", correlation_inequalities),
        ("fermionic mutual-information bound", fermionic_inequality),
        ("fermionic inverse-norm formula", fermionic_inverse_norm),
        ("light cone and split evolution", light_cone),
        ("clustering of correlations", clustering),
        ("local perturbations perturb locally", local_perturbations),
        ("fermionic area law", area_law),
        ("closed forms", closed_forms),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail} [{secs:.1} s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {why} [{secs:.1} s]", k + 1);
            }
        }
    }
    let total = start.elapsed();
    let limit = Duration::from_secs(600);
    if total <= limit {
        println!("criterion 12 PASS  wall-clock: acceptance suite ran in {:.1} s (limit 600 s)", total.as_secs_f64());
    } else {
        failed += 1;
        println!("criterion 12 FAIL  wall-clock: acceptance suite ran in {:.1} s (limit 600 s)", total.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
