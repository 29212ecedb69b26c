//! Cusp geometry: width profiles `ζ(t)`, the gauge
//! `δ(t) = (ζ(t) / (-t)^{1/λ})^{p/(p-1)}`, its monotonization and smooth
//! envelope, and the spatial scaling map `x -> a x`.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::{bad_input, domain};
use crate::interp::MonotoneCubic;
use crate::params::lambda_of;
use crate::{Error, Result};

/// Shape of the width function.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ProfileKind {
    /// `ζ(t) = K (-t)^q`.
    Power {
        #[cfg_attr(feature = "serde", serde(rename = "K"))]
        k: f64,
        q: f64,
    },
    /// `ζ(t) = K √(-t) √(log|log(-t)|)`, the classical heat-equation cusp.
    PetrovskiiLoglog {
        #[cfg_attr(feature = "serde", serde(rename = "K"))]
        k: f64,
    },
    /// Monotone cubic through `(t, ζ)` samples; defined up to the last sample.
    Tabulated { table: TabulatedWidth },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TabulatedWidth {
    spline: MonotoneCubic,
}

impl TabulatedWidth {
    pub fn samples(&self) -> (&[f64], &[f64]) {
        self.spline.knots()
    }
}

/// The space-time cusp `Θ = {(x, t) : |x| < ζ(t), t0 < t < 0}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DomainProfile {
    pub kind: ProfileKind,
    pub t0: f64,
}

impl DomainProfile {
    pub fn power(k: f64, q: f64, t0: f64) -> Result<Self> {
        if !(k > 0.0) || !(q > 0.0) {
            return Err(domain!("power profile needs K > 0 and q > 0 (K = {k}, q = {q})"));
        }
        check_t0(t0)?;
        Ok(DomainProfile { kind: ProfileKind::Power { k, q }, t0 })
    }

    pub fn petrovskii_loglog(k: f64, t0: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(domain!("log-log profile needs K > 0 (K = {k})"));
        }
        check_t0(t0)?;
        // log|log(-t)| > 0 needs -t < 1/e
        if !(-t0 < (-1.0f64).exp()) {
            return Err(domain!("log-log profile needs t0 > -1/e (got {t0})"));
        }
        Ok(DomainProfile { kind: ProfileKind::PetrovskiiLoglog { k }, t0 })
    }

    /// Tabulated profile; `t` strictly increasing and negative, `ζ > 0`.
    /// `t0` is the first sample.
    pub fn tabulated(t: Vec<f64>, zeta: Vec<f64>) -> Result<Self> {
        if t.iter().any(|&v| !(v < 0.0)) {
            return Err(bad_input!("tabulated times must be negative"));
        }
        if zeta.iter().any(|&v| !(v > 0.0)) {
            return Err(bad_input!("tabulated widths must be positive"));
        }
        let t0 = *t.first().ok_or_else(|| bad_input!("empty profile table"))?;
        let spline = MonotoneCubic::new(t, zeta)?;
        Ok(DomainProfile { kind: ProfileKind::Tabulated { table: TabulatedWidth { spline } }, t0 })
    }

    /// Right end of the time interval: 0, or the last sample of a table.
    pub fn t_end(&self) -> f64 {
        match &self.kind {
            ProfileKind::Tabulated { table } => *table.samples().0.last().unwrap(),
            _ => 0.0,
        }
    }

    /// Same shape with a new start time.
    pub fn with_t0(&self, t0: f64) -> Result<Self> {
        check_t0(t0)?;
        let out = DomainProfile { kind: self.kind.clone(), t0 };
        if let ProfileKind::PetrovskiiLoglog { k } = out.kind {
            return DomainProfile::petrovskii_loglog(k, t0);
        }
        Ok(out)
    }

    pub fn zeta(&self, t: f64) -> f64 {
        let tau = -t;
        match &self.kind {
            ProfileKind::Power { k, q } => k * tau.powf(*q),
            ProfileKind::PetrovskiiLoglog { k } => k * tau.sqrt() * (-tau.ln()).ln().sqrt(),
            ProfileKind::Tabulated { table } => table.spline.value(t),
        }
    }

    /// `dζ/dt`.
    pub fn dzeta(&self, t: f64) -> f64 {
        let tau = -t;
        match &self.kind {
            ProfileKind::Power { k, q } => -q * k * tau.powf(q - 1.0),
            ProfileKind::PetrovskiiLoglog { k } => {
                let l = (-tau.ln()).ln();
                // d/dτ of √τ √L with dL/dτ = 1 / (τ ln τ)
                let d_tau = 0.5 / tau.sqrt() * l.sqrt() + tau.sqrt() * 0.5 / l.sqrt() / (tau * tau.ln());
                -k * d_tau
            }
            ProfileKind::Tabulated { table } => table.spline.derivative(t),
        }
    }

    /// `(r, t) ∈ Θ ⇔ t0 < t < t_end and r < ζ(t)`.
    pub fn contains(&self, r: f64, t: f64) -> bool {
        t > self.t0 && t < self.t_end() && r >= 0.0 && r < self.zeta(t)
    }

    /// Exponent `q` of a power profile.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::Power { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ProfileKind::Power { k, q } => alloc::format!("power(K={k}, q={q}, t0={})", self.t0),
            ProfileKind::PetrovskiiLoglog { k } => alloc::format!("petrovskii_loglog(K={k}, t0={})", self.t0),
            ProfileKind::Tabulated { table } => {
                alloc::format!("tabulated({} samples, t0={})", table.samples().0.len(), self.t0)
            }
        }
    }
}

fn check_t0(t0: f64) -> Result<()> {
    if !(t0 < 0.0) || !t0.is_finite() {
        return Err(domain!("t0 must be finite and < 0 (got {t0})"));
    }
    Ok(())
}

/// Spatially scaled domain `{(a x, t) : (x, t) ∈ Θ}` together with the
/// amplitude factor `a^{-p/(p-2)}`: if `ũ` solves the equation on the scaled
/// domain then `u(x, t) = factor · ũ(a x, t)` solves it on `Θ`.
pub fn scale_domain(profile: &DomainProfile, a: f64, p: f64) -> Result<(DomainProfile, f64)> {
    if p == 2.0 {
        return Err(Error::Unsupported("p = 2 has no amplitude/space scaling invariance".into()));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain!("scale must be > 0 (got {a})"));
    }
    let kind = match &profile.kind {
        ProfileKind::Power { k, q } => ProfileKind::Power { k: a * k, q: *q },
        ProfileKind::PetrovskiiLoglog { k } => ProfileKind::PetrovskiiLoglog { k: a * k },
        ProfileKind::Tabulated { table } => {
            let (t, z) = table.samples();
            let zeta = z.iter().map(|v| a * v).collect();
            let scaled = DomainProfile::tabulated(t.to_vec(), zeta)?;
            return Ok((scaled, a.powf(-p / (p - 2.0))));
        }
    };
    Ok((DomainProfile { kind, t0: profile.t0 }, a.powf(-p / (p - 2.0))))
}

/// Function samples on strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampledFunction {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

impl SampledFunction {
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.len() != v.len() {
            return Err(bad_input!("sample arrays differ in length"));
        }
        if t.is_empty() {
            return Err(bad_input!("empty sample set"));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(bad_input!("sample times must be strictly increasing"));
        }
        Ok(SampledFunction { t, v })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Samples times `(-t)^{-β}`.
    pub fn weighted(&self, beta: f64) -> SampledFunction {
        let v = self.t.iter().zip(&self.v).map(|(t, d)| (-t).powf(-beta) * d).collect();
        SampledFunction { t: self.t.clone(), v }
    }

    /// Inverse of [`SampledFunction::weighted`].
    pub fn unweighted(&self, beta: f64) -> SampledFunction {
        let v = self.t.iter().zip(&self.v).map(|(t, h)| (-t).powf(beta) * h).collect();
        SampledFunction { t: self.t.clone(), v }
    }

    /// True when the values never decrease, up to `1e-12 · max(1, |v|)`.
    pub fn is_nondecreasing(&self) -> bool {
        self.v.windows(2).all(|w| w[0] <= w[1] + 1e-12 * w[0].abs().max(1.0))
    }
}

/// Running maximum `h̃(t_k) = max_{j <= k} h(t_j)`.
pub fn running_sup(h: &SampledFunction) -> Result<SampledFunction> {
    if h.is_empty() {
        return Err(bad_input!("running_sup of an empty sample set"));
    }
    if h.t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(bad_input!("sample times must be strictly increasing"));
    }
    let mut acc = f64::NEG_INFINITY;
    let v = h
        .v
        .iter()
        .map(|&x| {
            if x > acc {
                acc = x;
            }
            acc
        })
        .collect();
    Ok(SampledFunction { t: h.t.clone(), v })
}

/// Geometric time grid `t_k = t0 · ratio^k` used to resolve `t -> 0-`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaugeSampling {
    pub ratio: f64,
    pub count: usize,
}

impl Default for GaugeSampling {
    fn default() -> Self {
        GaugeSampling { ratio: 0.9, count: 200 }
    }
}

impl GaugeSampling {
    pub fn times(&self, profile: &DomainProfile) -> Vec<f64> {
        let end = profile.t_end();
        (0..self.count)
            .map(|k| profile.t0 * self.ratio.powi(k as i32))
            .take_while(|&t| t <= end)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
enum GaugeRepr {
    Profile { profile: DomainProfile, p: f64, lambda: f64 },
    Sampled,
    /// `δ̂(t) = exp(β s + G(s))`, `s = ln(-t)`, with `G` nonincreasing.
    Envelope { log_weighted: MonotoneCubic },
}

/// The gauge `δ(t)` and its weighted monotonicity data.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Gauge {
    pub beta: f64,
    pub gamma: f64,
    /// `(-t)^{-β} δ(t)` nondecreasing on the samples.
    pub monotone: bool,
    /// Least-squares slope of `ln((-t)^{-γ} δ)` against `ln(-t)` over the
    /// later half of the samples; positive means the weighted gauge vanishes.
    pub limit_exponent: f64,
    /// `(-t)^{-γ} δ(t) -> 0` as judged on the samples.
    pub vanishing_limit: bool,
    pub samples: SampledFunction,
    repr: GaugeRepr,
}

impl Gauge {
    fn from_samples(beta: f64, gamma: f64, samples: SampledFunction, repr: GaugeRepr) -> Self {
        let monotone = samples.weighted(beta).is_nondecreasing();
        let (limit_exponent, vanishing_limit) = limit_trend(&samples, gamma);
        Gauge { beta, gamma, monotone, limit_exponent, vanishing_limit, samples, repr }
    }

    pub fn delta(&self, t: f64) -> f64 {
        match &self.repr {
            GaugeRepr::Profile { profile, p, lambda } => {
                (profile.zeta(t) / (-t).powf(1.0 / lambda)).powf(p / (p - 1.0))
            }
            GaugeRepr::Sampled => log_linear(&self.samples, t),
            GaugeRepr::Envelope { log_weighted } => {
                let s = (-t).ln();
                (self.beta * s + log_weighted.value(s)).exp()
            }
        }
    }

    /// `dδ/dt` where a closed form exists (profile-backed or envelope gauges).
    pub fn delta_prime(&self, t: f64) -> Option<f64> {
        match &self.repr {
            GaugeRepr::Profile { profile, p, lambda } => {
                let sigma = p / (p - 1.0);
                let log_d = profile.dzeta(t) / profile.zeta(t) + 1.0 / (lambda * (-t));
                Some(sigma * self.delta(t) * log_d)
            }
            GaugeRepr::Sampled => None,
            GaugeRepr::Envelope { log_weighted } => {
                let s = (-t).ln();
                Some(-self.delta(t) * (self.beta + log_weighted.derivative(s)) / (-t))
            }
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self.repr, GaugeRepr::Sampled)
    }

    /// `δ̃ = (-t)^β h̃`, `h̃` the running sup of `h = (-t)^{-β} δ`, as a sampled gauge.
    pub fn monotonized(&self) -> Result<Gauge> {
        let h_tilde = running_sup(&self.samples.weighted(self.beta))?;
        let samples = h_tilde.unweighted(self.beta);
        Ok(Gauge::from_samples(self.beta, self.gamma, samples, GaugeRepr::Sampled))
    }

    /// Sampled minimum of `(-t)^{-β} δ(t)`, the constant `θ` of the lower bound.
    pub fn theta(&self) -> f64 {
        self.samples.weighted(self.beta).v.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn log_linear(samples: &SampledFunction, t: f64) -> f64 {
    let ts = &samples.t;
    let last = ts.len() - 1;
    if t <= ts[0] {
        return samples.v[0];
    }
    if t >= ts[last] {
        return samples.v[last];
    }
    let i = ts.partition_point(|&k| k <= t) - 1;
    let (s0, s1, s) = ((-ts[i]).ln(), (-ts[i + 1]).ln(), (-t).ln());
    let w = (s - s0) / (s1 - s0);
    (samples.v[i].ln() * (1.0 - w) + samples.v[i + 1].ln() * w).exp()
}

fn limit_trend(samples: &SampledFunction, gamma: f64) -> (f64, bool) {
    let n = samples.len();
    let start = n / 2;
    if n - start < 2 {
        return (f64::NAN, false);
    }
    let pts: Vec<(f64, f64)> = samples.t[start..]
        .iter()
        .zip(&samples.v[start..])
        .map(|(t, d)| {
            let s = (-t).ln();
            (s, d.ln() - gamma * s)
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let slope = sxy / sxx;
    let tail_drops = pts.last().unwrap().1 < pts[0].1;
    (slope, slope > 1e-3 && tail_drops)
}

/// Gauge of a profile, sampled on the default geometric grid.
pub fn gauge_of(profile: &DomainProfile, p: f64, n: u32) -> Result<Gauge> {
    gauge_of_with(profile, p, n, GaugeSampling::default())
}

pub fn gauge_of_with(profile: &DomainProfile, p: f64, n: u32, sampling: GaugeSampling) -> Result<Gauge> {
    let lambda = lambda_of(p, n);
    if !(lambda > 0.0) {
        return Err(domain!("gauge needs lambda = n(p-2)+p > 0 (got {lambda})"));
    }
    let beta = f64::from(n) * (p - 2.0) / lambda;
    let gamma = beta / (p - 1.0);
    let repr = GaugeRepr::Profile { profile: profile.clone(), p, lambda };
    let t = sampling.times(profile);
    if t.len() < 2 {
        return Err(bad_input!("gauge sampling produced fewer than two times"));
    }
    let mut gauge = Gauge::from_samples(beta, gamma, SampledFunction { t: t.clone(), v: alloc::vec![0.0; t.len()] }, repr);
    let v: Vec<f64> = t.iter().map(|&s| gauge.delta(s)).collect();
    gauge = Gauge::from_samples(beta, gamma, SampledFunction { t, v }, gauge.repr);
    Ok(gauge)
}

/// Smooth (C¹) gauge `δ̂` with `δ̃ < δ̂ < 2δ̃` at every sample and
/// `(-t)^{-β} δ̂` nondecreasing.
///
/// In `s = ln(-t)` the weighted log gauge `ln δ̃ - β s` is nonincreasing; it is
/// shifted up by `ln 1.5` and joined by a monotone cubic, then mapped back.
/// Outside the sampled range the weighted gauge is held constant.
pub fn monotone_smooth_envelope(delta_tilde: &Gauge) -> Result<Gauge> {
    let beta = delta_tilde.beta;
    let samples = &delta_tilde.samples;
    if samples.v.iter().any(|&d| !(d > 0.0)) {
        return Err(bad_input!("gauge samples must be positive"));
    }
    if !samples.weighted(beta).is_nondecreasing() {
        return Err(bad_input!("(-t)^(-beta) * delta_tilde is not nondecreasing on the samples"));
    }
    let shift = 1.5f64.ln();
    let (s, g): (Vec<f64>, Vec<f64>) = samples
        .t
        .iter()
        .zip(&samples.v)
        .rev()
        .map(|(t, d)| {
            let s = (-t).ln();
            (s, d.ln() - beta * s + shift)
        })
        .unzip();
    // equal weighted values may differ in the last bit after the log round trip
    let mut g = g;
    for i in 1..g.len() {
        if g[i] > g[i - 1] {
            g[i] = g[i - 1];
        }
    }
    let curve = MonotoneCubic::new(s, g)?;
    let repr = GaugeRepr::Envelope { log_weighted: curve };
    let mut out = Gauge::from_samples(beta, delta_tilde.gamma, samples.clone(), repr);
    let v: Vec<f64> = samples.t.iter().map(|&t| out.delta(t)).collect();
    for (hat, tilde) in v.iter().zip(&samples.v) {
        if !(*hat > tilde * (1.0 + 1e-9) && *hat < 2.0 * tilde * (1.0 - 1e-9)) {
            return Err(bad_input!("envelope sandwich failed: {hat} vs {tilde}"));
        }
    }
    out = Gauge::from_samples(beta, delta_tilde.gamma, SampledFunction { t: samples.t.clone(), v }, out.repr);
    Ok(out)
}

/// Profile gauge, then running sup, then smooth envelope.
pub fn family_gauge(profile: &DomainProfile, p: f64, n: u32) -> Result<Gauge> {
    let raw = gauge_of(profile, p, n)?;
    monotone_smooth_envelope(&raw.monotonized()?)
}
