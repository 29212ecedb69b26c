//! Implicit radial solver on the fixed cylinder `y = r / ζ(t) ∈ [0, 1]`, the
//! origin probe, and the regularity table.
//!
//! In cylinder coordinates the equation reads
//! `U_t = y (ζ'/ζ) U_y + ζ^{-p} y^{1-n} ∂_y(y^{n-1} |U_y|^{p-2} U_y)`.
//! Space is discretized with finite volumes on a uniform grid (zero flux at
//! `y = 0`, Dirichlet data at `y = 1`), the advection term is upwinded and
//! time is advanced with implicit Euler. Each step is a tridiagonal nonlinear
//! system solved by damped Newton, with a Picard (frozen-coefficient) fallback.
//! The scheme is monotone, so discrete maximum and comparison principles hold
//! up to the solve tolerance.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::calculus::{p_flux, p_flux_derivative, SpaceTimeFunction, TimeDomain};
use crate::domains::DomainProfile;
use crate::error::bad_input;
use crate::params::Params;
use crate::{Error, Result};

/// Coefficients of the equation in cylinder coordinates.
#[derive(Debug, Clone)]
pub struct CylinderCoefficients {
    pub profile: DomainProfile,
    pub p: f64,
    pub n: u32,
}

/// `y ζ'/ζ` and `ζ^{-p}` for a profile.
pub fn transform_pde(profile: &DomainProfile, p: f64, n: u32) -> Result<CylinderCoefficients> {
    if !(p > 1.0) || n < 1 {
        return Err(bad_input!("need p > 1 and n >= 1"));
    }
    Ok(CylinderCoefficients { profile: profile.clone(), p, n })
}

impl CylinderCoefficients {
    pub fn advection(&self, y: f64, t: f64) -> f64 {
        y * self.profile.dzeta(t) / self.profile.zeta(t)
    }

    pub fn diffusion_scale(&self, t: f64) -> f64 {
        self.profile.zeta(t).powf(-self.p)
    }

    /// `U(y, t) = u(y ζ(t), t)`.
    pub fn to_cylinder(&self, u: &SpaceTimeFunction) -> SpaceTimeFunction {
        let (u, prof) = (u.clone(), self.profile.clone());
        SpaceTimeFunction::new(format!("cyl[{}]", u.label), move |y, t| u.eval(y * prof.zeta(t), t))
    }

    /// `u(r, t) = U(r / ζ(t), t)`.
    pub fn from_cylinder(&self, u: &SpaceTimeFunction) -> SpaceTimeFunction {
        let (u, prof) = (u.clone(), self.profile.clone());
        SpaceTimeFunction::new(format!("phys[{}]", u.label), move |r, t| u.eval(r / prof.zeta(t), t))
    }

    /// Residual `U_t - y(ζ'/ζ)U_y - ζ^{-p} y^{1-n}(y^{n-1}|U_y|^{p-2}U_y)_y` of a
    /// cylinder field, all derivatives by central differences with step `h` in `y`.
    pub fn residual_fd(&self, u: &SpaceTimeFunction, y: f64, t: f64, h: f64) -> f64 {
        let ht = 1e-6 * t.abs();
        let ut = (u.eval(y, t + ht) - u.eval(y, t - ht)) / (2.0 * ht);
        let uy = (u.eval(y + h, t) - u.eval(y - h, t)) / (2.0 * h);
        let nm1 = f64::from(self.n) - 1.0;
        let flux = |a: f64, b: f64, mid: f64| mid.powf(nm1) * p_flux((b - a) / h, self.p, 0.0);
        let (um, u0, up) = (u.eval(y - h, t), u.eval(y, t), u.eval(y + h, t));
        let div = (flux(u0, up, y + 0.5 * h) - flux(um, u0, y - 0.5 * h)) / (h * y.powf(nm1));
        ut - self.advection(y, t) * uy - self.diffusion_scale(t) * div
    }
}

/// Discretization and nonlinear-solve settings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SolverConfig {
    /// Number of cells in `y`; nodes are `i / n_y`, `i = 0..=n_y`.
    pub n_y: usize,
    /// `Δt <= c_step ζ(t)^p`.
    pub c_step: f64,
    /// `Δt <= rho_geo (-t)`, which makes the grid geometric toward 0.
    pub rho_geo: f64,
    pub eps_reg: f64,
    /// Stop at `t = -eps_min`; `None` means `1e-4 |t0|`.
    pub eps_min: Option<f64>,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub picard_max_iter: usize,
    /// Times the marching must land on exactly; `None` means `t0/2` and the
    /// decades `t0 · 10^{-k}`.
    pub checkpoints: Option<Vec<f64>>,
    /// Keep every `store_every`-th step (checkpoints and the last step are always kept).
    pub store_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_y: 64,
            c_step: 0.5,
            rho_geo: 0.1,
            eps_reg: 1e-8,
            eps_min: None,
            newton_tol: 1e-10,
            newton_max_iter: 25,
            picard_max_iter: 2000,
            checkpoints: None,
            store_every: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_y < 2 {
            return Err(bad_input!("n_y must be >= 2"));
        }
        let positive = [self.c_step, self.rho_geo, self.newton_tol];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(bad_input!("c_step, rho_geo and newton_tol must be finite and > 0"));
        }
        if !(self.rho_geo < 1.0) {
            return Err(bad_input!("rho_geo must be < 1"));
        }
        if !(self.eps_reg >= 0.0) {
            return Err(bad_input!("eps_reg must be >= 0"));
        }
        if let Some(e) = self.eps_min {
            if !(e > 0.0) {
                return Err(bad_input!("eps_min must be > 0"));
            }
        }
        if self.store_every == 0 {
            return Err(bad_input!("store_every must be >= 1"));
        }
        Ok(())
    }

    /// Halve the cell size and both step factors.
    pub fn refined(&self) -> SolverConfig {
        SolverConfig { n_y: 2 * self.n_y, c_step: 0.5 * self.c_step, rho_geo: 0.5 * self.rho_geo, ..self.clone() }
    }

    fn stop_time(&self, profile: &DomainProfile) -> f64 {
        let eps = self.eps_min.unwrap_or(1e-4 * profile.t0.abs());
        (-eps).min(profile.t_end())
    }
}

/// `t0/2` and `t0 · 10^{-k}` above the stop time.
pub fn default_checkpoints(t0: f64, t_stop: f64) -> Vec<f64> {
    let mut out = vec![0.5 * t0];
    for k in 1..=22 {
        let t = t0 / 10f64.powi(k);
        if t_stop - t <= 1e-12 * t_stop.abs() {
            break;
        }
        out.push(t);
    }
    out
}

/// Dirichlet data on the parabolic boundary: `f` on the lateral surface
/// `r = ζ(t)` and, unless nodal values are given, `f(y ζ(t0), t0)` at the bottom.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub f: SpaceTimeFunction,
    pub initial: Option<Vec<f64>>,
}

impl BoundaryData {
    pub fn new(f: SpaceTimeFunction) -> Self {
        BoundaryData { f, initial: None }
    }

    pub fn with_initial(f: SpaceTimeFunction, initial: Vec<f64>) -> Self {
        BoundaryData { f, initial: Some(initial) }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveStats {
    pub steps: usize,
    pub newton_iterations: usize,
    pub picard_fallbacks: usize,
    /// Largest final nonlinear residual over all steps.
    pub max_residual: f64,
}

/// Discrete solution `values[k][i] ≈ u(y_i ζ(t_k), t_k)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridField {
    pub y_nodes: Vec<f64>,
    pub t_nodes: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub zeta: Vec<f64>,
    pub params: Params,
    pub profile: DomainProfile,
    pub stats: SolveStats,
}

impl GridField {
    pub fn r(&self, k: usize, i: usize) -> f64 {
        self.y_nodes[i] * self.zeta[k]
    }

    /// `(t, u(0, t))` for every stored time.
    pub fn axis_trace(&self) -> Vec<(f64, f64)> {
        self.t_nodes.iter().zip(&self.values).map(|(t, row)| (*t, row[0])).collect()
    }

    pub fn final_axis_value(&self) -> f64 {
        self.values.last().map_or(f64::NAN, |row| row[0])
    }

    /// Row stored at exactly `t`.
    pub fn row_at(&self, t: f64) -> Option<&[f64]> {
        self.t_nodes.iter().position(|&s| s == t).map(|k| self.values[k].as_slice())
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Every value inside `[lo - tol, hi + tol]`.
    pub fn within(&self, lo: f64, hi: f64, tol: f64) -> bool {
        self.values.iter().flatten().all(|&v| v.is_finite() && v >= lo - tol && v <= hi + tol)
    }
}

struct Stepper<'a> {
    profile: &'a DomainProfile,
    p: f64,
    cfg: &'a SolverConfig,
    y: Vec<f64>,
    dy: f64,
    /// `y_{i+1/2}^{n-1}`.
    face: Vec<f64>,
    /// Cell measures `∫ y^{n-1} dy`.
    vol: Vec<f64>,
}

struct StepSystem {
    res: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(profile: &'a DomainProfile, p: f64, n: u32, cfg: &'a SolverConfig) -> Self {
        let m = cfg.n_y;
        let dy = 1.0 / m as f64;
        let nf = f64::from(n);
        let y: Vec<f64> = (0..=m).map(|i| i as f64 * dy).collect();
        let face: Vec<f64> = (0..m).map(|i| ((i as f64 + 0.5) * dy).powf(nf - 1.0)).collect();
        let vol = (0..m)
            .map(|i| {
                let hi = (i as f64 + 0.5) * dy;
                let lo = if i == 0 { 0.0 } else { (i as f64 - 0.5) * dy };
                (hi.powf(nf) - lo.powf(nf)) / nf
            })
            .collect();
        Stepper { profile, p, cfg, y, dy, face, vol }
    }

    /// Residual (and Jacobian) of the implicit step `old -> u` over `dt`
    /// ending at `t`; `u[n_y]` holds the Dirichlet value.
    fn system(&self, old: &[f64], u: &[f64], t: f64, dt: f64, frozen: Option<&[f64]>) -> StepSystem {
        let m = self.cfg.n_y;
        let zeta = self.profile.zeta(t);
        let log_rate = self.profile.dzeta(t) / zeta;
        let scale = zeta.powf(-self.p);
        let eps = self.cfg.eps_reg;
        // face fluxes and their slopes
        let mut flux = vec![0.0; m];
        let mut dflux = vec![0.0; m];
        for j in 0..m {
            let s = (u[j + 1] - u[j]) / self.dy;
            match frozen {
                None => {
                    flux[j] = self.face[j] * p_flux(s, self.p, eps);
                    dflux[j] = self.face[j] * p_flux_derivative(s, self.p, eps) / self.dy;
                }
                Some(prev) => {
                    let sp = (prev[j + 1] - prev[j]) / self.dy;
                    let k = self.face[j] * (sp * sp + eps * eps).powf(0.5 * (self.p - 2.0));
                    flux[j] = k * s;
                    dflux[j] = k / self.dy;
                }
            }
        }
        let mut sys = StepSystem { res: vec![0.0; m], lower: vec![0.0; m], diag: vec![0.0; m], upper: vec![0.0; m] };
        for i in 0..m {
            let a = self.y[i] * log_rate;
            let c = dt * scale / self.vol[i];
            let left = if i == 0 { 0.0 } else { flux[i - 1] };
            let mut r = u[i] - old[i] - c * (flux[i] - left);
            let mut d = 1.0 + c * dflux[i];
            if i > 0 {
                d += c * dflux[i - 1];
                sys.lower[i] = -c * dflux[i - 1];
            }
            if i + 1 < m {
                sys.upper[i] = -c * dflux[i];
            }
            if a < 0.0 {
                r -= dt * a * (u[i] - u[i - 1]) / self.dy;
                d -= dt * a / self.dy;
                sys.lower[i] += dt * a / self.dy;
            } else if a > 0.0 {
                r -= dt * a * (u[i + 1] - u[i]) / self.dy;
                d += dt * a / self.dy;
                if i + 1 < m {
                    sys.upper[i] -= dt * a / self.dy;
                }
            }
            sys.res[i] = r;
            sys.diag[i] = d;
        }
        sys
    }

    fn step(&self, old: &[f64], t: f64, dt: f64, boundary: f64, stats: &mut SolveStats) -> Result<Vec<f64>> {
        let m = self.cfg.n_y;
        let tol = self.cfg.newton_tol;
        let mut u = old.to_vec();
        u[m] = boundary;
        let mut sys = self.system(old, &u, t, dt, None);
        let mut norm = max_abs(&sys.res);
        let mut merit = sum_sq(&sys.res);
        let mut iters = 0;
        let mut floor = false;
        while norm > tol && iters < self.cfg.newton_max_iter {
            iters += 1;
            let delta = thomas(&sys.lower, &sys.diag, &sys.upper, &sys.res)?;
            let mut lambda = 1.0;
            let mut accepted = false;
            // Armijo backtracking on |R|², for which the Newton direction is a descent direction
            for _ in 0..40 {
                let trial: Vec<f64> = u
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if i < m { v - lambda * delta[i] } else { *v })
                    .collect();
                let tsys = self.system(old, &trial, t, dt, None);
                let tmerit = sum_sq(&tsys.res);
                if tmerit.is_finite() && tmerit < (1.0 - 1e-4 * lambda) * merit {
                    u = trial;
                    norm = max_abs(&tsys.res);
                    merit = tmerit;
                    sys = tsys;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                // no decrease possible: at the roundoff floor if the correction itself is negligible
                floor = negligible(&delta, &u);
                break;
            }
        }
        stats.newton_iterations += iters;
        if norm <= tol || floor {
            // one polishing iteration keeps accumulated solve error far below tol
            if let Ok(delta) = thomas(&sys.lower, &sys.diag, &sys.upper, &sys.res) {
                let trial: Vec<f64> =
                    u.iter().enumerate().map(|(i, v)| if i < m { v - delta[i] } else { *v }).collect();
                let tnorm = max_abs(&self.system(old, &trial, t, dt, None).res);
                if tnorm < norm {
                    u = trial;
                    norm = tnorm;
                }
            }
            stats.max_residual = stats.max_residual.max(norm);
            return Ok(u);
        }
        stats.picard_fallbacks += 1;
        for _ in 0..self.cfg.picard_max_iter {
            let lin = self.system(old, &u, t, dt, Some(&u));
            let delta = thomas(&lin.lower, &lin.diag, &lin.upper, &lin.res)?;
            for i in 0..m {
                u[i] -= delta[i];
            }
            norm = max_abs(&self.system(old, &u, t, dt, None).res);
            if norm <= tol || negligible(&delta, &u) {
                stats.max_residual = stats.max_residual.max(norm);
                return Ok(u);
            }
            if !norm.is_finite() {
                break;
            }
        }
        Err(Error::Solver {
            t,
            message: format!("nonlinear solve stalled at residual {norm:e} (dt = {dt:e}, {iters} Newton iterations, Picard fallback)"),
        })
    }
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// The correction no longer moves `u` beyond roundoff.
fn negligible(delta: &[f64], u: &[f64]) -> bool {
    max_abs(delta) <= 1e-13 * (1.0 + max_abs(u))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// Tridiagonal solve; `lower[0]` and `upper[last]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut piv = diag[0];
    if !(piv.abs() > 0.0) || !piv.is_finite() {
        return Err(Error::Solver { t: f64::NAN, message: "singular tridiagonal system".into() });
    }
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for i in 1..m {
        piv = diag[i] - lower[i] * c[i - 1];
        if !(piv.abs() > 0.0) || !piv.is_finite() {
            return Err(Error::Solver { t: f64::NAN, message: "singular tridiagonal system".into() });
        }
        c[i] = upper[i] / piv;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    for i in (0..m - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

fn grid_params(profile: &DomainProfile, p: f64, n: u32) -> Result<Params> {
    match profile.kind {
        crate::domains::ProfileKind::Power { k, q } => Params::with_cusp(p, n, q, k, profile.t0),
        _ => Params::new(p, n, profile.t0),
    }
}

/// March the Dirichlet problem from `t0` to `-eps_min`.
pub fn solve_dirichlet(
    profile: &DomainProfile,
    p: f64,
    n: u32,
    data: &BoundaryData,
    config: &SolverConfig,
) -> Result<GridField> {
    config.validate()?;
    let params = grid_params(profile, p, n)?;
    let stepper = Stepper::new(profile, p, n, config);
    let m = config.n_y;
    let t0 = profile.t0;
    let t_stop = config.stop_time(profile);
    if !(t_stop > t0) {
        return Err(bad_input!("stop time {t_stop} is not after t0 = {t0}"));
    }
    let eval = |r: f64, t: f64| -> Result<f64> {
        let v = data.f.try_eval(r, t)?;
        if !v.is_finite() {
            return Err(bad_input!("boundary data is not finite at (r, t) = ({r}, {t})"));
        }
        Ok(v)
    };
    let mut u = match &data.initial {
        Some(v) => {
            if v.len() != m + 1 || v.iter().any(|x| !x.is_finite()) {
                return Err(bad_input!("initial values need {} finite entries", m + 1));
            }
            v.clone()
        }
        None => {
            let z0 = profile.zeta(t0);
            stepper.y.iter().map(|&y| eval(y * z0, t0)).collect::<Result<Vec<f64>>>()?
        }
    };
    let mut marks: Vec<f64> = config.checkpoints.clone().unwrap_or_else(|| default_checkpoints(t0, t_stop));
    marks.retain(|&c| c > t0 && c < t_stop);
    marks.push(t_stop);
    marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    marks.dedup();

    let mut field = GridField {
        y_nodes: stepper.y.clone(),
        t_nodes: vec![t0],
        values: vec![u.clone()],
        zeta: vec![profile.zeta(t0)],
        params,
        profile: profile.clone(),
        stats: SolveStats::default(),
    };
    let mut t = t0;
    let mut next = 0;
    while next < marks.len() {
        let target = marks[next];
        let dt_cap = (config.c_step * profile.zeta(t).powf(p)).min(config.rho_geo * (-t));
        let (t_new, hit) = if t + dt_cap >= target { (target, true) } else { (t + dt_cap, false) };
        let dt = t_new - t;
        let boundary = eval(profile.zeta(t_new), t_new)?;
        u = stepper.step(&u, t_new, dt, boundary, &mut field.stats).map_err(|e| match e {
            Error::Solver { message, .. } => Error::Solver { t: t_new, message },
            other => other,
        })?;
        t = t_new;
        field.stats.steps += 1;
        if hit {
            next += 1;
        }
        if hit || field.stats.steps.is_multiple_of(config.store_every) {
            field.t_nodes.push(t);
            field.values.push(u.clone());
            field.zeta.push(profile.zeta(t));
        }
    }
    Ok(field)
}

/// One rung of a probe refinement ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeLevel {
    pub eps_min: f64,
    pub n_y: usize,
    pub c_step: f64,
}

pub fn default_ladder() -> Vec<ProbeLevel> {
    vec![
        ProbeLevel { eps_min: 1e-2, n_y: 32, c_step: 0.5 },
        ProbeLevel { eps_min: 1e-3, n_y: 64, c_step: 0.25 },
        ProbeLevel { eps_min: 1e-4, n_y: 128, c_step: 0.125 },
    ]
}

/// `f(x, t) = min{1, |(x, t)| / 0.1}`, so `f(0, 0) = 0`.
pub fn default_probe() -> SpaceTimeFunction {
    SpaceTimeFunction::new("probe min(1, |(x,t)|/0.1)", |r, t| (r.hypot(t) / 0.1).min(1.0)).on(TimeDomain::All)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeThresholds {
    /// Attains: last endpoint below this...
    pub attain_endpoint: f64,
    /// ...and every endpoint below this fraction of the previous one.
    pub attain_ratio: f64,
    /// Gap: last two endpoints within this relative spread...
    pub gap_spread: f64,
    /// ...and both at least this large.
    pub gap_floor: f64,
}

impl Default for ProbeThresholds {
    fn default() -> Self {
        ProbeThresholds { attain_endpoint: 0.1, attain_ratio: 0.8, gap_spread: 0.1, gap_floor: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Trend {
    Attains,
    Gap,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeRun {
    pub level: ProbeLevel,
    pub trace: Vec<(f64, f64)>,
    pub endpoint: f64,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeOutcome {
    pub runs: Vec<ProbeRun>,
    pub trend: Trend,
    pub thresholds: ProbeThresholds,
}

/// Classify a sequence of probe endpoints (coarse to fine).
pub fn probe_trend(endpoints: &[f64], th: &ProbeThresholds) -> Trend {
    if endpoints.len() < 2 || endpoints.iter().any(|e| !e.is_finite()) {
        return Trend::Inconclusive;
    }
    let last = endpoints[endpoints.len() - 1];
    let prev = endpoints[endpoints.len() - 2];
    let shrinking = endpoints.windows(2).all(|w| w[1].abs() <= 1e-12 || w[1] < th.attain_ratio * w[0]);
    if last < th.attain_endpoint && shrinking {
        return Trend::Attains;
    }
    let spread = (last - prev).abs() <= th.gap_spread * last.abs().max(prev.abs());
    if spread && last.min(prev) >= th.gap_floor {
        return Trend::Gap;
    }
    Trend::Inconclusive
}

/// Solve with the probe data on each ladder rung and read off `u(0, -eps_min)`.
pub fn probe_origin(
    profile: &DomainProfile,
    p: f64,
    n: u32,
    f_probe: &SpaceTimeFunction,
    ladder: &[ProbeLevel],
    base: &SolverConfig,
    thresholds: ProbeThresholds,
) -> Result<ProbeOutcome> {
    let mut runs = Vec::with_capacity(ladder.len());
    for level in ladder {
        let cfg = SolverConfig { n_y: level.n_y, c_step: level.c_step, eps_min: Some(level.eps_min), ..base.clone() };
        let field = solve_dirichlet(profile, p, n, &BoundaryData::new(f_probe.clone()), &cfg)?;
        runs.push(ProbeRun {
            level: *level,
            trace: field.axis_trace(),
            endpoint: field.final_axis_value(),
            stats: field.stats.clone(),
        });
    }
    let endpoints: Vec<f64> = runs.iter().map(|r| r.endpoint).collect();
    let trend = probe_trend(&endpoints, &thresholds);
    Ok(ProbeOutcome { runs, trend, thresholds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TheoremVerdict {
    Regular,
    Irregular,
    Unknown,
}

/// Regularity of the vertex of `{|x| < K(-t)^q}`:
/// `p > 2`: regular iff `q > 1/p`; `p = 2`: regular iff `q >= 1/2`;
/// `1 < p < 2`: regular if `q > 1/p`, irregular if `q < 1/p`, unknown at `q = 1/p`.
pub fn classify(p: f64, q: f64) -> Result<TheoremVerdict> {
    if !(p > 1.0) || !p.is_finite() || !(q > 0.0) || !q.is_finite() {
        return Err(Error::Inadmissible(format!("classification needs p > 1 and q > 0 (got p = {p}, q = {q})")));
    }
    let critical = (q * p - 1.0).abs() <= 1e-12;
    let above = q * p > 1.0 && !critical;
    Ok(if p == 2.0 {
        if above || critical {
            TheoremVerdict::Regular
        } else {
            TheoremVerdict::Irregular
        }
    } else if above {
        TheoremVerdict::Regular
    } else if p > 2.0 || !critical {
        TheoremVerdict::Irregular
    } else {
        TheoremVerdict::Unknown
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegularityVerdict {
    pub theorem_verdict: TheoremVerdict,
    pub numeric_trace: Vec<(f64, f64)>,
    pub numeric_trend: Option<Trend>,
    pub certificate_refs: Vec<String>,
}

impl RegularityVerdict {
    pub fn from_table(p: f64, q: f64) -> Result<Self> {
        Ok(RegularityVerdict {
            theorem_verdict: classify(p, q)?,
            numeric_trace: Vec::new(),
            numeric_trend: None,
            certificate_refs: Vec::new(),
        })
    }

    /// Attach the finest probe trace and the trend. Where the table says
    /// `Unknown` the trend is reported as `Inconclusive` whatever the numerics
    /// suggest; the trace is still attached.
    pub fn with_probe(mut self, outcome: &ProbeOutcome) -> Self {
        self.numeric_trace = outcome.runs.last().map(|r| r.trace.clone()).unwrap_or_default();
        self.numeric_trend = Some(match self.theorem_verdict {
            TheoremVerdict::Unknown => Trend::Inconclusive,
            _ => outcome.trend,
        });
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Barenblatt;

    #[test]
    fn thomas_solves() {
        let lower = [0.0, -1.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0, 2.0];
        let upper = [-1.0, -1.0, -1.0, 0.0];
        let x = [1.0, 2.0, 3.0, 4.0];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i < 3 {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect();
        let sol = thomas(&lower, &diag, &upper, &rhs).unwrap();
        for (a, b) in sol.iter().zip(&x) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_space_function_has_no_transport() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let co = transform_pde(&prof, 3.0, 2).unwrap();
        let u = SpaceTimeFunction::new("t^2", |_, t| t * t);
        let cyl = co.to_cylinder(&u);
        for &(y, t) in &[(0.3, -0.5), (0.7, -0.01)] {
            let res = co.residual_fd(&cyl, y, t, 1e-4);
            assert!((res - 2.0 * t).abs() < 1e-6, "{res}");
        }
    }

    #[test]
    fn cylinder_round_trip() {
        let prof = DomainProfile::power(2.0, 0.3, -1.0).unwrap();
        let co = transform_pde(&prof, 1.5, 1).unwrap();
        let u = SpaceTimeFunction::new("r^2", |r, _| r * r);
        let back = co.from_cylinder(&co.to_cylinder(&u));
        for &(r, t) in &[(0.1, -0.5), (0.9, -0.9), (0.01, -1e-3)] {
            assert!((back.eval(r, t) - r * r).abs() < 1e-12);
        }
    }

    #[test]
    fn barenblatt_residual_in_cylinder() {
        // a shifted Barenblatt profile is a solution for t < 0 as well
        let b = Barenblatt::new(3.0, 1, 1.0).unwrap();
        let u = SpaceTimeFunction::new("shifted barenblatt", move |r, t| b.value(r, t + 2.0));
        let prof = DomainProfile::power(0.5, 0.5, -1.0).unwrap();
        let co = transform_pde(&prof, 3.0, 1).unwrap();
        let cyl = co.to_cylinder(&u);
        for &(y, t) in &[(0.3, -0.5), (0.5, -0.2), (0.8, -0.9)] {
            let res = co.residual_fd(&cyl, y, t, 1e-4);
            assert!(res.abs() < 1e-5, "{res}");
        }
    }

    #[test]
    fn constants_are_reproduced() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        for &p in &[1.5, 2.0, 3.0] {
            let cfg = SolverConfig { n_y: 16, eps_min: Some(1e-2), ..SolverConfig::default() };
            let f = solve_dirichlet(&prof, p, 2, &BoundaryData::new(SpaceTimeFunction::constant(0.7)), &cfg).unwrap();
            assert!(f.within(0.7, 0.7, 1e-12), "p = {p}");
        }
    }

    #[test]
    fn checkpoints_are_hit() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let cfg = SolverConfig { n_y: 8, eps_min: Some(1e-3), ..SolverConfig::default() };
        let data = BoundaryData::new(SpaceTimeFunction::new("t", |_, t| -t));
        let f = solve_dirichlet(&prof, 3.0, 1, &data, &cfg).unwrap();
        for c in [-0.5, -0.1, -0.01, -1e-3] {
            assert!(f.row_at(c).is_some(), "{c}");
        }
        assert_eq!(*f.t_nodes.last().unwrap(), -1e-3);
        assert!(f.t_nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_initial_values() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let cfg = SolverConfig { n_y: 8, ..SolverConfig::default() };
        let data = BoundaryData::with_initial(SpaceTimeFunction::constant(1.0), vec![1.0; 3]);
        assert!(matches!(solve_dirichlet(&prof, 3.0, 1, &data, &cfg), Err(Error::Input(_))));
    }

    #[test]
    fn classifier_cases() {
        assert_eq!(classify(3.0, 0.5).unwrap(), TheoremVerdict::Regular);
        assert_eq!(classify(3.0, 1.0 / 3.0).unwrap(), TheoremVerdict::Irregular);
        assert_eq!(classify(2.0, 0.5).unwrap(), TheoremVerdict::Regular);
        assert_eq!(classify(2.0, 0.49).unwrap(), TheoremVerdict::Irregular);
        assert_eq!(classify(1.5, 2.0 / 3.0).unwrap(), TheoremVerdict::Unknown);
        assert_eq!(classify(1.5, 0.5).unwrap(), TheoremVerdict::Irregular);
        assert_eq!(classify(1.5, 0.7).unwrap(), TheoremVerdict::Regular);
        assert!(classify(1.0, 0.5).is_err());
        assert!(classify(3.0, 0.0).is_err());
    }

    #[test]
    fn trend_rules() {
        let th = ProbeThresholds::default();
        assert_eq!(probe_trend(&[0.5, 0.2, 0.05], &th), Trend::Attains);
        assert_eq!(probe_trend(&[0.0, 0.0, 0.0], &th), Trend::Attains);
        assert_eq!(probe_trend(&[1.0, 0.99, 0.98], &th), Trend::Gap);
        assert_eq!(probe_trend(&[0.5, 0.3, 0.15], &th), Trend::Inconclusive);
        assert_eq!(probe_trend(&[0.05], &th), Trend::Inconclusive);
    }
}
