//! Variational upper estimate of the Log-Sobolev constant.
//!
//! Trial operators are f = exp(h) with h Hermitian and traceless. The entropy
//! is evaluated from F = f − 𝟙 without forming log Γ(f) and log σ separately,
//! which keeps it accurate down to values near 1e−12 where the infimum is
//! often approached.

use super::WeightedContext;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, HermEig};
use crate::random;
use crate::spin_system::{Liouvillian, Picture, DENSE_EXPM_LIMIT};
use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::neldermead::NelderMead;
use faer::{c64, Mat, MatRef};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct LogSobolevOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Trials with D(Γ(f)/tr ‖ σ) below this are treated as f ∝ 𝟙.
    pub entropy_floor: f64,
    pub max_iters: u64,
    /// Finite-difference step in units of 1/‖ℒ‖.
    pub fd_scale: f64,
}

impl Default for LogSobolevOptions {
    fn default() -> Self {
        LogSobolevOptions {
            restarts: 20,
            seed: 0,
            entropy_floor: 1e-10,
            max_iters: 3000,
            fd_scale: 0.01,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LogSobolevResult {
    /// min over trials of −(d/dt)Ent(f_t) / (2 Ent(f)); an upper estimate
    pub alpha: f64,
    /// normalized entropy of the minimizing trial
    pub entropy: f64,
    pub restarts: usize,
    pub seed: u64,
}

pub(crate) struct EntropyParts {
    pub entropy: f64,
    /// D(X̂ ‖ σ) with X̂ = Γ(f)/tr Γ(f)
    pub relative: f64,
    /// log X̂ − log σ
    pub log_ratio: CMat,
}

/// Entropy of f = 𝟙 + F. With Δ = X̂ − σ formed directly from F,
/// log X̂ − log σ = V[(V†ΔU) ∘ K]U† where σ = V diag(p) V†,
/// X̂ = U diag(x) U† and K_ij = (ln p_i − ln x_j)/(p_i − x_j).
pub(crate) fn entropy_parts(ctx: &WeightedContext, f_minus_one: MatRef<'_, c64>) -> EntropyParts {
    let d = ctx.dim();
    let gf = linalg::hermitian_part(ctx.gamma(f_minus_one).as_ref());
    let tau = linalg::trace(gf.as_ref()).re;
    let sigma = ctx.sigma().mat();
    let mut delta = &gf - linalg::scaled(sigma.as_ref(), linalg::re(tau));
    delta = linalg::scaled(delta.as_ref(), linalg::re(1.0 / (1.0 + tau)));
    let xhat = linalg::hermitian_part((sigma + &delta).as_ref());
    let ex = HermEig::new(xhat.as_ref());
    let p = ctx.probs();
    let v = ctx.eigenvectors();
    let m = v.adjoint() * &delta * &ex.vectors;
    let mut kmat = Mat::<c64>::zeros(d, d);
    for j in 0..d {
        let x = ex.values[j];
        for i in 0..d {
            let k = if x <= 0.0 {
                f64::NAN
            } else {
                let r = (p[i] - x) / x;
                if r.abs() < 1e-8 {
                    (1.0 - 0.5 * r + r * r / 3.0) / x
                } else {
                    r.ln_1p() / (r * x)
                }
            };
            kmat[(i, j)] = m[(i, j)] * k;
        }
    }
    let log_ratio = linalg::hermitian_part((v * &kmat * ex.vectors.adjoint()).as_ref());
    let relative = linalg::trace((sigma * &log_ratio).as_ref()).re
        + linalg::trace((&delta * &log_ratio).as_ref()).re;
    EntropyParts {
        entropy: (1.0 + tau) * relative,
        relative,
        log_ratio,
    }
}

/// d/dt Ent(f_t) at t = 0 from its closed form tr[Γ(ℒ*f)(log X̂ − log σ)].
pub fn entropy_derivative_exact(l: &Liouvillian, ctx: &WeightedContext, f: MatRef<'_, c64>) -> f64 {
    let d = ctx.dim();
    let fm1 = f.to_owned() - linalg::identity(d);
    let parts = entropy_parts(ctx, fm1.as_ref());
    let lf = l.apply_adjoint(f);
    linalg::trace((ctx.gamma(lf.as_ref()) * &parts.log_ratio).as_ref()).re
}

/// Propagators e^{±δℒ*}, e^{±δℒ*/2} for the central differences.
struct Flow<'a> {
    l: &'a Liouvillian,
    delta: f64,
    dense: Option<[CMat; 4]>,
}

impl<'a> Flow<'a> {
    fn new(l: &'a Liouvillian, delta: f64) -> Self {
        let d = l.dim();
        let dense = (d * d <= DENSE_EXPM_LIMIT).then(|| {
            let s = l.heisenberg_superop();
            let at = |t: f64| linalg::expm(linalg::scaled(s.as_ref(), linalg::re(t)).as_ref());
            [at(delta), at(-delta), at(0.5 * delta), at(-0.5 * delta)]
        });
        Flow { l, delta, dense }
    }

    fn step(&self, x: &CMat, which: usize) -> CMat {
        let t = [self.delta, -self.delta, 0.5 * self.delta, -0.5 * self.delta][which];
        match &self.dense {
            Some(p) => {
                let v = &p[which] * linalg::vectorize(x.as_ref());
                linalg::unvectorize(v.as_ref(), x.nrows())
            }
            None => linalg::expm_action(
                |y| self.l.apply_picture(y.as_ref(), Picture::Heisenberg),
                self.l.norm_bound(),
                t,
                x,
            ),
        }
    }

    /// Richardson-extrapolated central difference of Ent(f_t) at t = 0.
    /// Since ℒ*(𝟙) = 0 the flow acts on F = f − 𝟙 directly.
    fn derivative(&self, ctx: &WeightedContext, fm1: &CMat) -> f64 {
        let e = |which: usize| entropy_parts(ctx, self.step(fm1, which).as_ref()).entropy;
        let d1 = (e(0) - e(1)) / (2.0 * self.delta);
        let d2 = (e(2) - e(3)) / self.delta;
        (4.0 * d2 - d1) / 3.0
    }
}

fn fd_delta(l: &Liouvillian, opts: &LogSobolevOptions) -> f64 {
    opts.fd_scale / l.norm_bound().max(1e-300)
}

/// d/dt Ent(f_t) at t = 0 by central differences with Richardson extrapolation.
pub fn entropy_derivative(l: &Liouvillian, ctx: &WeightedContext, f: MatRef<'_, c64>) -> f64 {
    let flow = Flow::new(l, fd_delta(l, &LogSobolevOptions::default()));
    let fm1 = f.to_owned() - linalg::identity(ctx.dim());
    flow.derivative(ctx, &fm1)
}

struct Trial<'a> {
    flow: Flow<'a>,
    ctx: &'a WeightedContext,
    floor: f64,
}

const REJECTED: f64 = 1e300;

fn hermitian_from_params(p: &[f64], d: usize) -> CMat {
    let mut h = Mat::<c64>::zeros(d, d);
    let mean = p[..d].iter().sum::<f64>() / d as f64;
    for i in 0..d {
        h[(i, i)] = linalg::re(p[i] - mean);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = c64::new(p[k], p[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

impl Trial<'_> {
    /// (ratio, normalized entropy) for f = exp(h), or None below the floor.
    fn evaluate(&self, h: &CMat) -> Option<(f64, f64)> {
        let fm1 = HermEig::new(h.as_ref()).apply(f64::exp_m1);
        let parts = entropy_parts(self.ctx, fm1.as_ref());
        if parts.relative.is_nan() || parts.relative < self.floor {
            return None;
        }
        let de = self.flow.derivative(self.ctx, &fm1);
        let ratio = -de / (2.0 * parts.entropy);
        ratio.is_finite().then_some((ratio, parts.relative))
    }

    /// Follows the ray t·h toward the identity down to the entropy floor.
    fn ray_search(&self, h: &CMat) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        let mut t = 1.0;
        for _ in 0..80 {
            match self.evaluate(&linalg::scaled(h.as_ref(), linalg::re(t))) {
                Some(v) => {
                    if best.is_none_or(|b| v.0 < b.0) {
                        best = Some(v);
                    }
                }
                None => break,
            }
            t *= 0.5;
        }
        best
    }
}

impl CostFunction for Trial<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        let h = hermitian_from_params(p, self.ctx.dim());
        Ok(self.evaluate(&h).map_or(REJECTED, |v| v.0))
    }
}

/// α̂ = min over optimized trials of −(d/dt)Ent(f_t)|₀ / (2 Ent(f)).
///
/// The factor ½ puts α̂ on the same scale as the gap, so that
/// Ent(f_t) ≤ Ent(f) e^{−2αt} and α ≤ λ for reversible generators.
pub fn log_sobolev_estimate(
    l: &Liouvillian,
    ctx: &WeightedContext,
    opts: &LogSobolevOptions,
) -> Result<LogSobolevResult> {
    let d = ctx.dim();
    let n = d * d;
    let delta = fd_delta(l, opts);
    let runs: Vec<Option<(f64, f64)>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = random::rng(opts.seed);
            rng.set_stream(r as u64 + 1);
            let trial = Trial {
                flow: Flow::new(l, delta),
                ctx,
                floor: opts.entropy_floor,
            };
            let scale = 10f64.powf(rng.random_range(-1.0..0.7));
            let mut x0: Vec<f64> = (0..n).map(|_| random::real_normal(&mut rng)).collect();
            let norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            x0.iter_mut().for_each(|v| *v *= scale / norm);
            let step = 0.25 * scale.max(0.05);
            let mut simplex = vec![x0.clone()];
            for k in 0..n {
                let mut v = x0.clone();
                v[k] += step;
                simplex.push(v);
            }
            let solver = NelderMead::new(simplex).with_sd_tolerance(1e-12).ok()?;
            let best = Executor::new(trial, solver)
                .configure(|s| s.max_iters(opts.max_iters))
                .run()
                .ok()?;
            let param = best.state().get_best_param()?.clone();
            let trial = best.problem.problem.as_ref()?;
            let h = hermitian_from_params(&param, d);
            let direct = trial.evaluate(&h);
            let along = trial.ray_search(&h);
            match (direct, along) {
                (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
                (a, b) => a.or(b),
            }
        })
        .collect();
    // Rays along the slowest χ² modes reach the linearized regime directly.
    let trial = Trial {
        flow: Flow::new(l, delta),
        ctx,
        floor: opts.entropy_floor,
    };
    let modes: Vec<Option<(f64, f64)>> = super::slow_modes(l, ctx, 2)
        .iter()
        .map(|h| trial.ray_search(h))
        .collect();
    let best = runs
        .iter()
        .chain(modes.iter())
        .flatten()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::ConvergenceFailure("every Log-Sobolev restart stagnated".into()))?;
    Ok(LogSobolevResult {
        alpha: best.0,
        entropy: best.1,
        restarts: opts.restarts,
        seed: opts.seed,
    })
}
