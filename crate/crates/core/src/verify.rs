//! Grid-sampled certificates: residual signs, barrier-family conditions,
//! scaling equivariance and discrete comparison.
//!
//! Every check is a finite sample. A passing report says the inequality held
//! at the listed points, nothing more.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::barriers::FamilyMember;
use crate::calculus::{residual, SpaceTimeFunction};
use crate::domains::{scale_domain, DomainProfile};
use crate::error::bad_input;
use crate::solver::{default_checkpoints, solve_dirichlet, BoundaryData, GridField, SolverConfig};
use crate::{Error, Result};

/// Interior tensor grid of `Θ`: times `t_j = t0 · ratio^{(j+1)/n_t}`
/// (geometric toward 0) and `y_i = i / (n_y + 1)`, `r = y ζ(t)`.
///
/// For tables ending before 0 the times run geometrically to the last sample,
/// which is excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleGrid {
    pub n_t: usize,
    pub n_y: usize,
    pub t_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub r: f64,
    pub t: f64,
    pub y: f64,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid { n_t: 128, n_y: 128, t_ratio: 1e-4 }
    }
}

impl SampleGrid {
    pub fn new(n_t: usize, n_y: usize) -> Self {
        SampleGrid { n_t, n_y, ..SampleGrid::default() }
    }

    pub fn times(&self, profile: &DomainProfile) -> Vec<f64> {
        let t0 = profile.t0;
        let end = profile.t_end();
        let (ratio, denom) = if end < 0.0 { (end / t0, self.n_t + 1) } else { (self.t_ratio, self.n_t) };
        (0..self.n_t).map(|j| t0 * ratio.powf((j + 1) as f64 / denom as f64)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (1..=self.n_y).map(|i| i as f64 / (self.n_y + 1) as f64).collect()
    }

    /// Points in time-major order.
    pub fn points(&self, profile: &DomainProfile) -> Vec<SamplePoint> {
        let ys = self.ys();
        let mut out = Vec::with_capacity(self.n_t * self.n_y);
        for t in self.times(profile) {
            let z = profile.zeta(t);
            out.extend(ys.iter().map(|&y| SamplePoint { r: y * z, t, y }));
        }
        out
    }

    pub fn meta(&self, profile: &DomainProfile) -> GridMeta {
        let times = self.times(profile);
        GridMeta {
            n_t: self.n_t,
            n_y: self.n_y,
            t_range: (times.first().copied().unwrap_or(f64::NAN), times.last().copied().unwrap_or(f64::NAN)),
            spacing: format!("t geometric toward 0 (ratio {}), y = i/(n_y+1), r = y zeta(t)", self.t_ratio),
            profile: profile.describe(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridMeta {
    pub n_t: usize,
    pub n_y: usize,
    pub t_range: (f64, f64),
    pub spacing: String,
    pub profile: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Sense {
    /// The sampled quantity must be `>= -tol`.
    NonNegative,
    /// The sampled quantity must be `<= tol`.
    NonPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Result of one sampled condition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertificateReport {
    pub subject: String,
    pub condition: String,
    pub grid: GridMeta,
    pub sense: Sense,
    /// Minimum (for `NonNegative`) or maximum (for `NonPositive`) sampled value.
    pub worst_violation: f64,
    pub worst_location: (f64, f64),
    pub tolerance: f64,
    pub pass: bool,
    pub verdict: Verdict,
    pub samples: usize,
    pub finite_sample: bool,
    pub notes: Vec<String>,
}

impl CertificateReport {
    fn decide(sense: Sense, worst: f64, tol: f64) -> bool {
        match sense {
            Sense::NonNegative => worst >= -tol,
            Sense::NonPositive => worst <= tol,
        }
    }

    fn build(subject: &str, condition: &str, grid: GridMeta, sense: Sense, acc: &Worst, tol: f64) -> Self {
        let pass = CertificateReport::decide(sense, acc.value, tol);
        CertificateReport {
            subject: subject.into(),
            condition: condition.into(),
            grid,
            sense,
            worst_violation: acc.value,
            worst_location: acc.at,
            tolerance: tol,
            pass,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            samples: acc.count,
            finite_sample: true,
            notes: Vec::new(),
        }
    }

    fn inconclusive(mut self, note: String) -> Self {
        self.pass = false;
        self.verdict = Verdict::Inconclusive;
        self.notes.push(note);
        self
    }
}

/// Index-ordered running extreme; the first of equal values wins.
#[derive(Debug, Clone, Copy)]
struct Worst {
    sense: Sense,
    value: f64,
    at: (f64, f64),
    count: usize,
}

impl Worst {
    fn new(sense: Sense) -> Self {
        let value = match sense {
            Sense::NonNegative => f64::INFINITY,
            Sense::NonPositive => f64::NEG_INFINITY,
        };
        Worst { sense, value, at: (f64::NAN, f64::NAN), count: 0 }
    }

    fn push(&mut self, v: f64, r: f64, t: f64) {
        self.count += 1;
        let worse = match self.sense {
            Sense::NonNegative => v < self.value,
            Sense::NonPositive => v > self.value,
        };
        if worse || self.count == 1 {
            self.value = v;
            self.at = (r, t);
        }
    }
}

fn finite(v: f64, what: &str, r: f64, t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad_input!("{what} is not finite at (r, t) = ({r}, {t})"))
    }
}

/// Sign of `∂_t u - Δ_p u` on the interior grid points of `Θ`.
pub fn check_sign(
    u: &SpaceTimeFunction,
    profile: &DomainProfile,
    p: f64,
    n: u32,
    grid: &SampleGrid,
    sense: Sense,
    tol: f64,
) -> Result<CertificateReport> {
    let points = grid.points(profile);
    if points.is_empty() {
        return Err(bad_input!("empty sample grid"));
    }
    let mut acc = Worst::new(sense);
    for pt in &points {
        let v = finite(residual(u, p, n, pt.r, pt.t)?, "residual", pt.r, pt.t)?;
        acc.push(v, pt.r, pt.t);
    }
    Ok(CertificateReport::build(&u.label, "residual_sign", grid.meta(profile), sense, &acc, tol))
}

/// The axis row `y = 0` left out of [`check_sign`]: the residual sign along
/// `r = y_1 ζ(t) 10^{-k}`, `k = 1..=3`, below the first grid row `y_1`.
pub fn check_axis_limit(
    u: &SpaceTimeFunction,
    profile: &DomainProfile,
    p: f64,
    n: u32,
    grid: &SampleGrid,
    sense: Sense,
    tol: f64,
) -> Result<CertificateReport> {
    let y1 = grid.ys().first().copied().ok_or_else(|| bad_input!("empty sample grid"))?;
    let mut acc = Worst::new(sense);
    for t in grid.times(profile) {
        let z = profile.zeta(t);
        for k in 1..=3 {
            let r = y1 * z * 10f64.powi(-k);
            let v = finite(residual(u, p, n, r, t)?, "residual", r, t)?;
            acc.push(v, r, t);
        }
    }
    if acc.count == 0 {
        return Err(bad_input!("empty sample grid"));
    }
    let mut report = CertificateReport::build(&u.label, "axis_limit", grid.meta(profile), sense, &acc, tol);
    report.notes.push(format!("r = y_1 zeta(t) 10^-k, y_1 = {y1}, k = 1..3"));
    Ok(report)
}

/// Sampling for the barrier-family conditions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyCheckConfig {
    pub grid: SampleGrid,
    pub sign_tol: f64,
    /// Approach sequences: rays `y = m / rays` (m = 0..rays) in `(y, t)`.
    pub rays: usize,
    pub ray_samples: usize,
    /// Rays run from `t0` to `t0 · ray_t_ratio`.
    pub ray_t_ratio: f64,
    /// Decay: the sampled sup near the vertex must fall below this fraction
    /// of the sup over the whole ray set.
    pub decay_ratio: f64,
    /// Samples on the bottom disk and on the lateral surface each.
    pub boundary_samples: usize,
    pub k_max: u32,
}

impl Default for FamilyCheckConfig {
    fn default() -> Self {
        FamilyCheckConfig {
            grid: SampleGrid::default(),
            sign_tol: 1e-10,
            rays: 8,
            ray_samples: 64,
            ray_t_ratio: 1e-8,
            decay_ratio: 0.05,
            boundary_samples: 256,
            k_max: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyReport {
    pub conditions: Vec<CertificateReport>,
    /// For each `k = 1..=k_max`, the first ladder index meeting condition (iii).
    pub ladder_index: Vec<Option<usize>>,
    pub verdict: Verdict,
}

/// Boundary samples of `∂Θ`: bottom disk `t = t0` and lateral surface
/// `r = ζ(t)`, the latter geometric in `t` toward the vertex.
pub fn boundary_samples(profile: &DomainProfile, count: usize, t_ratio: f64) -> Vec<(f64, f64)> {
    let t0 = profile.t0;
    let z0 = profile.zeta(t0);
    let mut out: Vec<(f64, f64)> = (0..count).map(|i| (z0 * i as f64 / (count - 1).max(1) as f64, t0)).collect();
    let end = profile.t_end();
    let ratio = if end < 0.0 { end / t0 } else { t_ratio };
    out.extend((1..=count).map(|j| {
        let t = t0 * ratio.powf(j as f64 / count as f64);
        (profile.zeta(t), t)
    }));
    out
}

/// Conditions (i) positivity and supersolution sign, (ii) vanishing at the
/// vertex along approach rays, (iii) for each `k <= k_max` some member is
/// `>= k` on the boundary samples at distance `>= 1/k` from the vertex.
///
/// `family` is ordered by increasing index. A ladder too short for some `k`
/// makes condition (iii) inconclusive rather than failed.
pub fn check_barrier_family(
    family: &[(f64, SpaceTimeFunction)],
    profile: &DomainProfile,
    p: f64,
    n: u32,
    cfg: &FamilyCheckConfig,
) -> Result<FamilyReport> {
    if family.is_empty() {
        return Err(bad_input!("empty family"));
    }
    let points = cfg.grid.points(profile);
    if points.is_empty() {
        return Err(bad_input!("empty sample grid"));
    }
    let meta = cfg.grid.meta(profile);
    let subject = format!("family[{}] on {}", family.len(), profile.describe());
    let mut conditions = Vec::new();

    let mut positive = Worst::new(Sense::NonNegative);
    let mut sign = Worst::new(Sense::NonNegative);
    for (_, w) in family {
        for pt in &points {
            positive.push(finite(w.eval(pt.r, pt.t), "member value", pt.r, pt.t)?, pt.r, pt.t);
            sign.push(finite(residual(w, p, n, pt.r, pt.t)?, "residual", pt.r, pt.t)?, pt.r, pt.t);
        }
    }
    let mut pos = CertificateReport::build(&subject, "positivity", meta.clone(), Sense::NonNegative, &positive, 0.0);
    if positive.value <= 0.0 {
        pos.pass = false;
        pos.verdict = Verdict::Fail;
    }
    pos.notes.push("strict: every sampled value must be > 0".into());
    conditions.push(pos);
    let mut sup = CertificateReport::build(&subject, "supersolution_sign", meta.clone(), Sense::NonNegative, &sign, cfg.sign_tol);
    sup.notes.push("members are continuous by construction; the strong-family gauge condition is not checked".into());
    conditions.push(sup);

    // (ii): sup over ray samples with t >= t_cut against sup over all ray samples
    let ray_meta = GridMeta {
        n_t: cfg.ray_samples,
        n_y: cfg.rays,
        t_range: (profile.t0, profile.t0 * cfg.ray_t_ratio),
        spacing: format!("{} rays y = m/{}, t geometric to t0*{}", cfg.rays, cfg.rays, cfg.ray_t_ratio),
        profile: profile.describe(),
    };
    let ray_times: Vec<f64> = (0..cfg.ray_samples)
        .map(|j| profile.t0 * cfg.ray_t_ratio.powf((j + 1) as f64 / cfg.ray_samples as f64))
        .collect();
    let tail_from = ray_times.len().saturating_sub((ray_times.len() / 8).max(1));
    let mut decay = Worst::new(Sense::NonNegative);
    for (_, w) in family {
        let mut overall = 0.0f64;
        let mut tail = 0.0f64;
        let mut at = (f64::NAN, f64::NAN);
        for m in 0..cfg.rays {
            let y = m as f64 / cfg.rays as f64;
            for (j, &t) in ray_times.iter().enumerate() {
                let r = y * profile.zeta(t);
                let v = finite(w.eval(r, t), "member value", r, t)?.abs();
                overall = overall.max(v);
                if j >= tail_from && v >= tail {
                    tail = v;
                    at = (r, t);
                }
            }
        }
        decay.push(cfg.decay_ratio * overall - tail, at.0, at.1);
    }
    let mut dec = CertificateReport::build(&subject, "vertex_decay", ray_meta, Sense::NonNegative, &decay, 0.0);
    dec.notes.push(format!(
        "sup over the last {} ray times must be <= {} x sup over all ray samples",
        ray_times.len() - tail_from,
        cfg.decay_ratio
    ));
    conditions.push(dec);

    // (iii)
    let bdry = boundary_samples(profile, cfg.boundary_samples, cfg.ray_t_ratio);
    let bmeta = GridMeta {
        n_t: cfg.boundary_samples,
        n_y: cfg.boundary_samples,
        t_range: (profile.t0, bdry.last().map_or(f64::NAN, |b| b.1)),
        spacing: "bottom disk uniform in r, lateral surface geometric in t".into(),
        profile: profile.describe(),
    };
    let mut ladder_index = Vec::new();
    let mut growth = Worst::new(Sense::NonNegative);
    let mut missing = Vec::new();
    for k in 1..=cfg.k_max {
        let kf = f64::from(k);
        let far: Vec<&(f64, f64)> = bdry.iter().filter(|(r, t)| r.hypot(*t) >= 1.0 / kf).collect();
        let mut found = None;
        let mut best = f64::NEG_INFINITY;
        let mut best_at = (f64::NAN, f64::NAN);
        for (j, (_, w)) in family.iter().enumerate() {
            let mut lo = f64::INFINITY;
            let mut lo_at = (f64::NAN, f64::NAN);
            for &&(r, t) in &far {
                let v = finite(w.eval(r, t), "member value", r, t)?;
                if v < lo {
                    lo = v;
                    lo_at = (r, t);
                }
            }
            if lo - kf > best {
                best = lo - kf;
                best_at = lo_at;
            }
            if lo >= kf {
                found = Some(j);
                best = lo - kf;
                best_at = lo_at;
                break;
            }
        }
        if found.is_none() {
            missing.push(k);
        }
        growth.push(best, best_at.0, best_at.1);
        ladder_index.push(found);
    }
    let mut grow = CertificateReport::build(&subject, "boundary_growth", bmeta, Sense::NonNegative, &growth, 0.0);
    grow.notes.push(format!("ladder index per k: {ladder_index:?}"));
    if !missing.is_empty() {
        grow = grow.inconclusive(format!("ladder too short for k = {missing:?}"));
    }
    conditions.push(grow);

    let verdict = if conditions.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if conditions.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(FamilyReport { conditions, ladder_index, verdict })
}

/// The bounds a family member relies on, sampled on the grid:
/// `Q >= C`, `Q <= 2C`, and `w >= (1/p) C^{1/(p-2)} δ^{(p-1)/(p-2)} (-t)^{-n/λ}`.
pub fn check_family_bounds(
    members: &[FamilyMember],
    profile: &DomainProfile,
    grid: &SampleGrid,
) -> Result<Vec<CertificateReport>> {
    let points = grid.points(profile);
    if points.is_empty() || members.is_empty() {
        return Err(bad_input!("empty sample grid or family"));
    }
    let meta = grid.meta(profile);
    let subject = format!("family[{}] on {}", members.len(), profile.describe());
    let mut lower = Worst::new(Sense::NonNegative);
    let mut upper = Worst::new(Sense::NonNegative);
    let mut bound = Worst::new(Sense::NonNegative);
    for w in members {
        for pt in &points {
            let q = w.q_of(pt.r, pt.t);
            lower.push((q - w.c) / w.c, pt.r, pt.t);
            upper.push((2.0 * w.c - q) / w.c, pt.r, pt.t);
            let val = w.function().eval(pt.r, pt.t);
            let lb = w.lower_bound(pt.t);
            bound.push(finite((val - lb) / lb, "lower bound gap", pt.r, pt.t)?, pt.r, pt.t);
        }
    }
    Ok(vec![
        CertificateReport::build(&subject, "q_at_least_c", meta.clone(), Sense::NonNegative, &lower, 0.0),
        CertificateReport::build(&subject, "q_at_most_2c", meta.clone(), Sense::NonNegative, &upper, 0.0),
        CertificateReport::build(&subject, "lower_bound", meta, Sense::NonNegative, &bound, 0.0),
    ])
}

/// Largest `|a - b|` over two fields restricted to shared stored times.
fn shared_rows<'a>(a: &'a GridField, b: &'a GridField) -> Vec<(f64, &'a [f64], &'a [f64])> {
    a.t_nodes
        .iter()
        .enumerate()
        .filter_map(|(k, &t)| b.row_at(t).map(|row| (t, a.values[k].as_slice(), row)))
        .collect()
}

/// Solve on `Θ` with data `f` and on `aΘ` with data `f(·/a, t) / factor`,
/// then compare `u` with `factor · ũ` on the shared checkpoints. Each domain
/// uses its own stiffness-limited time grid, so the mismatch measures
/// discretization error, and shrinks under refinement.
pub fn check_scaling_equivariance(
    profile: &DomainProfile,
    p: f64,
    n: u32,
    a: f64,
    f: &SpaceTimeFunction,
    config: &SolverConfig,
    tol: f64,
) -> Result<CertificateReport> {
    let (scaled, factor) = scale_domain(profile, a, p)?;
    let mut cfg = config.clone();
    let t_stop = -config.eps_min.unwrap_or(1e-4 * profile.t0.abs());
    if cfg.checkpoints.is_none() {
        cfg.checkpoints = Some(default_checkpoints(profile.t0, t_stop));
    }
    let base = solve_dirichlet(profile, p, n, &BoundaryData::new(f.clone()), &cfg)?;
    let fs = f.clone();
    let g = SpaceTimeFunction::new(format!("scaled[{}]", f.label), move |r, t| fs.eval(r / a, t) / factor);
    let other = solve_dirichlet(&scaled, p, n, &BoundaryData::new(g), &cfg)?;
    let rows = shared_rows(&base, &other);
    let scale = base.values.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut acc = Worst::new(Sense::NonPositive);
    for (t, u, v) in &rows {
        let z = profile.zeta(*t);
        for (i, (x, y)) in u.iter().zip(v.iter()).enumerate() {
            acc.push((x - factor * y).abs() / scale, base.y_nodes[i] * z, *t);
        }
    }
    let meta = GridMeta {
        n_t: rows.len(),
        n_y: config.n_y + 1,
        t_range: (rows.first().map_or(f64::NAN, |r| r.0), rows.last().map_or(f64::NAN, |r| r.0)),
        spacing: "shared checkpoints, solver y nodes".into(),
        profile: profile.describe(),
    };
    let mut report = CertificateReport::build(&f.label, "scaling_equivariance", meta, Sense::NonPositive, &acc, tol);
    report.notes.push(format!("a = {a}, amplitude factor = {factor}, relative to max |u| = {scale}"));
    Ok(report)
}

/// Solve with `f1` and `f2` (`f1 <= f2` on the parabolic boundary samples)
/// and report `max (u1 - u2)`.
pub fn check_comparison(
    profile: &DomainProfile,
    p: f64,
    n: u32,
    f1: &SpaceTimeFunction,
    f2: &SpaceTimeFunction,
    config: &SolverConfig,
    tol: f64,
) -> Result<(CertificateReport, GridField, GridField)> {
    for (r, t) in boundary_samples(profile, 256, config.eps_min.unwrap_or(1e-4 * profile.t0.abs()) / profile.t0.abs()) {
        if f1.eval(r, t) > f2.eval(r, t) {
            return Err(Error::Input(format!("boundary data not ordered at (r, t) = ({r}, {t})")));
        }
    }
    let u1 = solve_dirichlet(profile, p, n, &BoundaryData::new(f1.clone()), config)?;
    let u2 = solve_dirichlet(profile, p, n, &BoundaryData::new(f2.clone()), config)?;
    let mut acc = Worst::new(Sense::NonPositive);
    for (k, (a, b)) in u1.values.iter().zip(&u2.values).enumerate() {
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            acc.push(x - y, u1.r(k, i), u1.t_nodes[k]);
        }
    }
    let meta = GridMeta {
        n_t: u1.t_nodes.len(),
        n_y: u1.y_nodes.len(),
        t_range: (u1.t_nodes[0], *u1.t_nodes.last().unwrap()),
        spacing: "solver grid".into(),
        profile: profile.describe(),
    };
    let subject = format!("{} <= {}", f1.label, f2.label);
    Ok((CertificateReport::build(&subject, "comparison", meta, Sense::NonPositive, &acc, tol), u1, u2))
}

/// Solve with the barrier's own boundary values and report
/// `max (solution - barrier)` over every stored grid point.
pub fn check_witness(
    barrier: &SpaceTimeFunction,
    profile: &DomainProfile,
    p: f64,
    n: u32,
    config: &SolverConfig,
    tol: f64,
) -> Result<(CertificateReport, GridField)> {
    let field = solve_dirichlet(profile, p, n, &BoundaryData::new(barrier.clone()), config)?;
    let mut acc = Worst::new(Sense::NonPositive);
    for (k, row) in field.values.iter().enumerate() {
        let t = field.t_nodes[k];
        for (i, u) in row.iter().enumerate() {
            let r = field.r(k, i);
            acc.push(u - barrier.eval(r, t), r, t);
        }
    }
    let meta = GridMeta {
        n_t: field.t_nodes.len(),
        n_y: field.y_nodes.len(),
        t_range: (field.t_nodes[0], *field.t_nodes.last().unwrap()),
        spacing: "solver grid".into(),
        profile: profile.describe(),
    };
    let report = CertificateReport::build(&barrier.label, "solution_below_barrier", meta, Sense::NonPositive, &acc, tol);
    Ok((report, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::singular_irregularity_barrier;

    #[test]
    fn grid_shape() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let g = SampleGrid::new(4, 3);
        let pts = g.points(&prof);
        assert_eq!(pts.len(), 12);
        assert!(pts.iter().all(|p| prof.contains(p.r, p.t)));
        let ts = g.times(&prof);
        assert!((ts[3] + 1e-4).abs() < 1e-18);
        let tab = DomainProfile::tabulated(vec![-1.0, -0.5, -0.1], vec![1.0, 0.7, 0.3]).unwrap();
        assert!(g.points(&tab).iter().all(|p| tab.contains(p.r, p.t)));
    }

    #[test]
    fn zero_function_passes_exactly() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let rep = check_sign(&SpaceTimeFunction::constant(0.0), &prof, 3.0, 1, &SampleGrid::new(8, 8), Sense::NonNegative, 1e-10)
            .unwrap();
        assert!(rep.pass);
        assert_eq!(rep.worst_violation, 0.0);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let r = check_sign(&SpaceTimeFunction::constant(0.0), &prof, 3.0, 1, &SampleGrid::new(0, 8), Sense::NonNegative, 0.0);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn negated_barrier_fails_with_witness() {
        let b = singular_irregularity_barrier(1.5, 0.25, 2).unwrap();
        let grid = SampleGrid::new(16, 16);
        let neg = b.function.negated();
        let rep = check_sign(&neg, &b.domain, 1.5, 2, &grid, Sense::NonNegative, 1e-10).unwrap();
        assert!(!rep.pass);
        assert!(b.domain.contains(rep.worst_location.0, rep.worst_location.1));
        let dual = check_sign(&neg, &b.domain, 1.5, 2, &grid, Sense::NonPositive, 1e-10).unwrap();
        assert!(dual.pass);
    }

    #[test]
    fn family_with_nonpositive_member_fails_positivity() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let fam = vec![(1.0, SpaceTimeFunction::constant(-1.0)), (2.0, SpaceTimeFunction::constant(5.0))];
        let cfg = FamilyCheckConfig { grid: SampleGrid::new(8, 8), boundary_samples: 16, ray_samples: 16, ..Default::default() };
        let rep = check_barrier_family(&fam, &prof, 3.0, 1, &cfg).unwrap();
        assert_eq!(rep.conditions[0].verdict, Verdict::Fail);
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn short_ladder_is_inconclusive() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let bump = SpaceTimeFunction::new("(-t)^0.5 + r", |r, t| (-t).sqrt() + r).with_dt(|_, t| -0.5 / (-t).sqrt());
        let fam = vec![(1.0, bump)];
        let cfg = FamilyCheckConfig { grid: SampleGrid::new(8, 8), boundary_samples: 16, ray_samples: 16, ..Default::default() };
        let rep = check_barrier_family(&fam, &prof, 3.0, 1, &cfg).unwrap();
        let grow = rep.conditions.iter().find(|c| c.condition == "boundary_growth").unwrap();
        assert_eq!(grow.verdict, Verdict::Inconclusive);
    }
}
