//! Light-cone probes: deviation between full and restricted Heisenberg
//! evolution, split evolution of products, and velocity fits.

use super::linear_fit;
use crate::error::{Error, Result};
use crate::lattice::{region_distance, Region};
use crate::linalg::{self, CMat};
use crate::spin_system::{pauli, Embedding, Liouvillian, Picture};
use rayon::prelude::*;
use serde::Serialize;

/// An operator acting on the sites of `support`, in their sorted order.
#[derive(Clone, Debug)]
pub struct LocalObservable {
    pub support: Region,
    pub op: CMat,
}

impl LocalObservable {
    pub fn new(support: Region, op: CMat) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(LocalObservable { support, op })
    }

    /// The operator tensored with the identity on the sites of `host`
    /// outside the support, with `dims` the dimensions of the host sites.
    fn embed_into(&self, host: &[usize], dims: &[usize]) -> Result<CMat> {
        let pos: Vec<usize> = self
            .support
            .sites()
            .iter()
            .map(|s| host.binary_search(s).map_err(|_| Error::SupportNotContained))
            .collect::<Result<_>>()?;
        let emb = Embedding::new(dims, &pos)?;
        if emb.local_dim != self.op.nrows() || self.op.nrows() != self.op.ncols() {
            return Err(Error::DimensionMismatch {
                expected: emb.local_dim,
                found: self.op.nrows(),
            });
        }
        Ok(emb.embed(self.op.as_ref()))
    }

    fn embed_full(&self, l: &Liouvillian) -> Result<CMat> {
        let all: Vec<usize> = (0..l.lattice().sites()).collect();
        self.embed_into(&all, l.site_dims())
    }
}

/// Full and B-restricted Heisenberg evolutions of one observable, advanced
/// together in time.
struct Probe {
    full_gen: Liouvillian,
    local_gen: Liouvillian,
    lift: Embedding,
    full: CMat,
    local: CMat,
    t: f64,
}

impl Probe {
    fn new(l: &Liouvillian, f: &LocalObservable, b: &Region) -> Result<Self> {
        if !f.support.is_subset(b) {
            return Err(Error::SupportNotContained);
        }
        let b_dims: Vec<usize> = b.sites().iter().map(|&s| l.site_dims()[s]).collect();
        Ok(Probe {
            full_gen: l.clone(),
            local_gen: l.localize(b)?,
            lift: Embedding::new(l.site_dims(), b.sites())?,
            full: f.embed_full(l)?,
            local: f.embed_into(b.sites(), &b_dims)?,
            t: 0.0,
        })
    }

    fn advance(&self, t: f64) -> (CMat, CMat) {
        let dt = t - self.t;
        (
            self.full_gen.evolve_mat(&self.full, dt, Picture::Heisenberg),
            self.local_gen.evolve_mat(&self.local, dt, Picture::Heisenberg),
        )
    }

    fn set(&mut self, t: f64, state: (CMat, CMat)) {
        self.t = t;
        self.full = state.0;
        self.local = state.1;
    }

    fn deviation(&self, state: &(CMat, CMat)) -> f64 {
        let lifted = self.lift.embed(state.1.as_ref());
        linalg::op_norm((&state.0 - &lifted).as_ref())
    }
}

/// ‖f_t − f_t^B ⊗ 𝟙‖ in operator norm, where f_t^B evolves under the terms
/// of ℒ supported in B.
pub fn lr_deviation(l: &Liouvillian, f: &LocalObservable, b: &Region, t: f64) -> Result<f64> {
    let probe = Probe::new(l, f, b)?;
    let state = probe.advance(t);
    Ok(probe.deviation(&state))
}

/// lr_deviation on a list of increasing times, evolving incrementally.
pub fn lr_deviation_series(l: &Liouvillian, f: &LocalObservable, b: &Region, times: &[f64]) -> Result<Vec<f64>> {
    let mut probe = Probe::new(l, f, b)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < probe.t {
            return Err(Error::Numerical("times must be nondecreasing".into()));
        }
        let state = probe.advance(t);
        out.push(probe.deviation(&state));
        probe.set(t, state);
    }
    Ok(out)
}

/// ‖(fg)_t − f_t g_t‖ under the full Heisenberg evolution.
pub fn split_deviation(l: &Liouvillian, f: &LocalObservable, g: &LocalObservable, t: f64) -> Result<f64> {
    if f.support.intersects(&g.support) {
        return Err(Error::OverlappingRegions);
    }
    let fm = f.embed_full(l)?;
    let gm = g.embed_full(l)?;
    let fg = &fm * &gm;
    let fg_t = l.evolve_mat(&fg, t, Picture::Heisenberg);
    let f_t = l.evolve_mat(&fm, t, Picture::Heisenberg);
    let g_t = l.evolve_mat(&gm, t, Picture::Heisenberg);
    Ok(linalg::op_norm((&fg_t - &f_t * &g_t).as_ref()))
}

#[derive(Clone, Debug, Serialize)]
pub struct LightConeOptions {
    pub epsilon: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// points of the geometric time grid
    pub points: usize,
    pub bisection_steps: usize,
    /// smallest R² accepted for the velocity fit
    pub min_r_squared: f64,
}

impl Default for LightConeOptions {
    fn default() -> Self {
        LightConeOptions {
            epsilon: 1e-6,
            t_min: 1e-3,
            t_max: 20.0,
            points: 40,
            bisection_steps: 30,
            min_r_squared: 0.9,
        }
    }
}

impl LightConeOptions {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points.max(2);
        let ratio = (self.t_max / self.t_min).powf(1.0 / (n - 1) as f64);
        (0..n).map(|k| self.t_min * ratio.powi(k as i32)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LightConeEstimate {
    pub velocity: f64,
    /// (D, t_cross), sorted by D
    pub contour: Vec<(usize, f64)>,
    pub fit_quality: f64,
    pub threshold: f64,
    /// fit_quality meets the requested minimum
    pub accepted: bool,
}

/// Distance from the support of f to the complement of B.
pub fn probe_distance(f: &LocalObservable, b: &Region) -> Result<usize> {
    let rest = b.complement();
    if rest.is_empty() {
        return Err(Error::EmptyRegion);
    }
    region_distance(&f.support, &rest)
}

/// σ_z on site 0 with B the ball of radius D − 1 around it, one probe per D.
pub fn site_zero_probes(l: &Liouvillian, distances: &[usize]) -> Result<Vec<(LocalObservable, Region)>> {
    let lat = l.lattice();
    if l.site_dims()[0] != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: l.site_dims()[0],
        });
    }
    let f = LocalObservable::new(Region::new(lat, [0])?, pauli('Z'))?;
    distances
        .iter()
        .map(|&d| {
            let b = Region::new(lat, (0..lat.sites()).filter(|&s| lat.distance(0, s) < d))?;
            Ok((f.clone(), b))
        })
        .collect()
}

/// First time in the window at which the deviation exceeds ε.
pub fn crossing_time(l: &Liouvillian, f: &LocalObservable, b: &Region, opts: &LightConeOptions) -> Result<f64> {
    let d = probe_distance(f, b)?;
    let mut probe = Probe::new(l, f, b)?;
    for t in opts.grid() {
        let state = probe.advance(t);
        if probe.deviation(&state) > opts.epsilon {
            // the deviation crosses in (probe.t, t]
            let (mut lo, mut hi) = (probe.t, t);
            for _ in 0..opts.bisection_steps {
                let mid = 0.5 * (lo + hi);
                let s = probe.advance(mid);
                if probe.deviation(&s) > opts.epsilon {
                    hi = mid;
                } else {
                    lo = mid;
                    probe.set(mid, s);
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        probe.set(t, state);
    }
    Err(Error::NoCrossing {
        distance: d,
        epsilon: opts.epsilon,
    })
}

/// Crossing times t_cross(D) for every probe and v = 1/slope of t_cross
/// against D.
pub fn estimate_velocity(
    l: &Liouvillian,
    probes: &[(LocalObservable, Region)],
    opts: &LightConeOptions,
) -> Result<LightConeEstimate> {
    let mut distances: Vec<usize> = probes.iter().map(|(f, b)| probe_distance(f, b)).collect::<Result<_>>()?;
    distances.sort_unstable();
    distances.dedup();
    if distances.len() < 3 {
        return Err(Error::InsufficientRows {
            found: distances.len(),
            required: 3,
        });
    }
    let mut contour: Vec<(usize, f64)> = probes
        .par_iter()
        .map(|(f, b)| Ok((probe_distance(f, b)?, crossing_time(l, f, b, opts)?)))
        .collect::<Result<_>>()?;
    contour.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let x: Vec<f64> = contour.iter().map(|c| c.0 as f64).collect();
    let y: Vec<f64> = contour.iter().map(|c| c.1).collect();
    let fit = linear_fit(&x, &y)?;
    if fit.slope <= 0.0 {
        return Err(Error::Numerical(format!(
            "crossing times do not grow with distance (slope {:e})",
            fit.slope
        )));
    }
    Ok(LightConeEstimate {
        velocity: 1.0 / fit.slope,
        contour,
        fit_quality: fit.r_squared,
        threshold: opts.epsilon,
        accepted: fit.r_squared >= opts.min_r_squared,
    })
}
