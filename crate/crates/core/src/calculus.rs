//! Radial p-parabolic calculus: closed forms, the Barenblatt profile, pointwise
//! residuals and an independent finite-difference oracle for `Δ_p`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::domain;
use crate::params::lambda_of;
use crate::{Error, Result};

/// Shared scalar field `(r, t) -> value`.
pub type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Time interval on which a [`SpaceTimeFunction`] is declared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeDomain {
    /// `t < 0`; every barrier lives here.
    Past,
    /// `t > 0`; the Barenblatt profile.
    Future,
    All,
}

impl TimeDomain {
    pub fn contains(self, t: f64) -> bool {
        match self {
            TimeDomain::Past => t < 0.0,
            TimeDomain::Future => t > 0.0,
            TimeDomain::All => t.is_finite(),
        }
    }
}

/// A radial field `u(r, t)` with optional closed-form derivatives.
///
/// `p_laplacian` is only meaningful at the exponent it was derived for, so it
/// is stored together with that exponent and ignored for any other `p`.
#[derive(Clone)]
pub struct SpaceTimeFunction {
    pub label: String,
    eval: Field,
    dt: Option<Field>,
    dr: Option<Field>,
    p_laplacian: Option<(f64, Field)>,
    time_domain: TimeDomain,
}

impl core::fmt::Debug for SpaceTimeFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SpaceTimeFunction")
            .field("label", &self.label)
            .field("dt", &self.dt.is_some())
            .field("dr", &self.dr.is_some())
            .field("p_laplacian", &self.p_laplacian.as_ref().map(|(p, _)| *p))
            .field("time_domain", &self.time_domain)
            .finish()
    }
}

impl SpaceTimeFunction {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        SpaceTimeFunction {
            label: label.into(),
            eval: Arc::new(eval),
            dt: None,
            dr: None,
            p_laplacian: None,
            time_domain: TimeDomain::All,
        }
    }

    pub fn constant(c: f64) -> Self {
        SpaceTimeFunction::new(format!("constant({c})"), move |_, _| c)
            .with_dt(|_, _| 0.0)
            .with_dr(|_, _| 0.0)
    }

    pub fn with_dt(mut self, dt: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.dt = Some(Arc::new(dt));
        self
    }

    pub fn with_dr(mut self, dr: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.dr = Some(Arc::new(dr));
        self
    }

    pub fn with_p_laplacian(mut self, p: f64, lap: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.p_laplacian = Some((p, Arc::new(lap)));
        self
    }

    pub fn on(mut self, time_domain: TimeDomain) -> Self {
        self.time_domain = time_domain;
        self
    }

    pub fn time_domain(&self) -> TimeDomain {
        self.time_domain
    }

    pub fn eval(&self, r: f64, t: f64) -> f64 {
        (self.eval)(r, t)
    }

    pub fn try_eval(&self, r: f64, t: f64) -> Result<f64> {
        self.check_domain(r, t)?;
        Ok(self.eval(r, t))
    }

    pub fn dt(&self, r: f64, t: f64) -> Option<f64> {
        self.dt.as_ref().map(|f| f(r, t))
    }

    pub fn dr(&self, r: f64, t: f64) -> Option<f64> {
        self.dr.as_ref().map(|f| f(r, t))
    }

    /// Closed-form `Δ_p u` if one was attached for exactly this `p`.
    pub fn p_laplacian(&self, p: f64, r: f64, t: f64) -> Option<f64> {
        match &self.p_laplacian {
            Some((q, lap)) if *q == p => Some(lap(r, t)),
            _ => None,
        }
    }

    pub fn has_closed_forms(&self) -> bool {
        self.dt.is_some() && self.dr.is_some()
    }

    pub fn check_domain(&self, r: f64, t: f64) -> Result<()> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(domain!("radius must be finite and >= 0 (got {r})"));
        }
        if !self.time_domain.contains(t) {
            return Err(domain!("t = {t} outside the declared time domain of {}", self.label));
        }
        Ok(())
    }

    /// `-u`, with every closed form negated. `Δ_p` is odd, so residual signs flip.
    pub fn negated(&self) -> Self {
        let eval = self.eval.clone();
        let mut out = SpaceTimeFunction {
            label: format!("-({})", self.label),
            eval: Arc::new(move |r, t| -eval(r, t)),
            dt: None,
            dr: None,
            p_laplacian: None,
            time_domain: self.time_domain,
        };
        if let Some(dt) = self.dt.clone() {
            out.dt = Some(Arc::new(move |r, t| -dt(r, t)));
        }
        if let Some(dr) = self.dr.clone() {
            out.dr = Some(Arc::new(move |r, t| -dr(r, t)));
        }
        if let Some((p, lap)) = self.p_laplacian.clone() {
            out.p_laplacian = Some((p, Arc::new(move |r, t| -lap(r, t))));
        }
        out
    }

    /// Same field with the closed forms stripped, so every derivative goes
    /// through finite differences.
    pub fn eval_only(&self) -> Self {
        SpaceTimeFunction {
            label: self.label.clone(),
            eval: self.eval.clone(),
            dt: None,
            dr: None,
            p_laplacian: None,
            time_domain: self.time_domain,
        }
    }
}

/// Regularized p-flux `(s² + ε²)^{(p-2)/2} s`; `ε = 0` gives `|s|^{p-2} s`.
pub fn p_flux(s: f64, p: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        if s == 0.0 {
            0.0
        } else {
            s.abs().powf(p - 2.0) * s
        }
    } else {
        (s * s + eps * eps).powf(0.5 * (p - 2.0)) * s
    }
}

/// Derivative of [`p_flux`] with respect to `s`.
pub fn p_flux_derivative(s: f64, p: f64, eps: f64) -> f64 {
    let a = s * s + eps * eps;
    if a == 0.0 {
        return if p > 2.0 { 0.0 } else if p == 2.0 { 1.0 } else { f64::INFINITY };
    }
    a.powf(0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps)
}

/// `Δ_p (C|x|^α)` at `|x| = r`:
/// `Cα|Cα|^{p-2} (n + (α-1)(p-1) - 1) r^{(α-1)(p-1)-1}`.
pub fn p_laplacian_radial_power(c: f64, alpha: f64, p: f64, n: u32, r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(domain!("radius must be finite and >= 0 (got {r})"));
    }
    let ca = c * alpha;
    if ca == 0.0 {
        return Ok(0.0);
    }
    let exponent = (alpha - 1.0) * (p - 1.0) - 1.0;
    let coefficient = ca * ca.abs().powf(p - 2.0) * (f64::from(n) + exponent);
    if r == 0.0 {
        if coefficient == 0.0 {
            return Ok(0.0);
        }
        return if exponent < 0.0 {
            Err(domain!("r = 0 with negative output exponent {exponent}"))
        } else if exponent == 0.0 {
            Ok(coefficient)
        } else {
            Ok(0.0)
        };
    }
    Ok(coefficient * r.powf(exponent))
}

/// Step and flux regularization for [`p_laplacian_radial_fd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub h: f64,
    /// Regularization of `|s|^{p-2}`; only applied when `p < 2`.
    pub eps: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { h: 1e-4, eps: 0.0 }
    }
}

/// Central-difference approximation of the radial p-Laplacian using only
/// values of `u`:
///
/// `r^{1-n} [F(r + h/2) - F(r - h/2)] / h`, `F(s) = s^{n-1} φ((u(s + h/2) - u(s - h/2)) / h)`.
///
/// Second-order in `h` where `u` is smooth; at nonsmooth points the output is
/// meaningless and it is the caller's job not to ask.
pub fn p_laplacian_radial_fd(u: &SpaceTimeFunction, p: f64, n: u32, r: f64, t: f64, opts: FdOptions) -> Result<f64> {
    let h = opts.h;
    if !(h > 0.0) || !(h < 0.5 * r) {
        return Err(domain!("finite-difference step must satisfy 0 < h < r/2 (h = {h}, r = {r})"));
    }
    u.check_domain(r - h, t)?;
    let eps = if p < 2.0 { opts.eps } else { 0.0 };
    let (um, u0, up) = (u.eval(r - h, t), u.eval(r, t), u.eval(r + h, t));
    let nm1 = f64::from(n) - 1.0;
    let (rl, rr) = (r - 0.5 * h, r + 0.5 * h);
    let fl = rl.powf(nm1) * p_flux((u0 - um) / h, p, eps);
    let fr = rr.powf(nm1) * p_flux((up - u0) / h, p, eps);
    Ok((fr - fl) / (h * r.powf(nm1)))
}

/// Central time derivative with a relative step; stays inside `t < 0` / `t > 0`.
pub(crate) fn time_derivative_fd(u: &SpaceTimeFunction, r: f64, t: f64) -> f64 {
    let h = 1e-6 * t.abs().max(1e-300);
    (u.eval(r, t + h) - u.eval(r, t - h)) / (2.0 * h)
}

/// Pointwise residual `∂_t u - Δ_p u`; `>= 0` means supersolution behaviour.
///
/// Closed forms are used where attached, the finite-difference oracle
/// otherwise (with `h = min(1e-4, r/4)`).
pub fn residual(u: &SpaceTimeFunction, p: f64, n: u32, r: f64, t: f64) -> Result<f64> {
    u.check_domain(r, t)?;
    let dt = match u.dt(r, t) {
        Some(v) => v,
        None => time_derivative_fd(u, r, t),
    };
    let lap = match u.p_laplacian(p, r, t) {
        Some(v) => v,
        None => {
            if r == 0.0 {
                return Err(domain!("no closed-form p-Laplacian for {} at r = 0", u.label));
            }
            let h = (0.25 * r).min(1e-4);
            p_laplacian_radial_fd(u, p, n, r, t, FdOptions { h, eps: 0.0 })?
        }
    };
    Ok(dt - lap)
}

/// Barenblatt self-similar solution
/// `t^{-n/λ} (C - ((p-2)/p) λ^{1/(1-p)} (r / t^{1/λ})^{p/(p-1)})_+^{(p-1)/(p-2)}`.
pub fn barenblatt(r: f64, t: f64, p: f64, n: u32, c: f64) -> Result<f64> {
    let b = Barenblatt::new(p, n, c)?;
    if !(t > 0.0) {
        return Err(domain!("Barenblatt profile needs t > 0 (got {t})"));
    }
    if !(r >= 0.0) {
        return Err(domain!("radius must be >= 0 (got {r})"));
    }
    Ok(b.value(r, t))
}

/// Parameters of a Barenblatt profile; build the field with [`Barenblatt::function`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barenblatt {
    pub p: f64,
    pub n: u32,
    pub c: f64,
    pub lambda: f64,
    k: f64,
}

impl Barenblatt {
    pub fn new(p: f64, n: u32, c: f64) -> Result<Self> {
        if p == 2.0 {
            return Err(Error::Unsupported("p = 2 (Gaussian kernel)".into()));
        }
        if !(p > 1.0) || n < 1 {
            return Err(domain!("need p > 1 and n >= 1"));
        }
        let lambda = lambda_of(p, n);
        if !(lambda > 0.0) {
            return Err(domain!("lambda = n(p-2)+p = {lambda} must be > 0"));
        }
        if !(c > 0.0) {
            return Err(domain!("Barenblatt constant must be > 0 (got {c})"));
        }
        let k = (p - 2.0) / p * lambda.powf(1.0 / (1.0 - p));
        Ok(Barenblatt { p, n, c, lambda, k })
    }

    fn sigma(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    fn m(&self) -> f64 {
        (self.p - 1.0) / (self.p - 2.0)
    }

    fn core(&self, r: f64, t: f64) -> (f64, f64) {
        let xi = r / t.powf(1.0 / self.lambda);
        let xs = xi.powf(self.sigma());
        (self.c - self.k * xs, xs)
    }

    pub fn value(&self, r: f64, t: f64) -> f64 {
        let (g, _) = self.core(r, t);
        if g <= 0.0 {
            return 0.0;
        }
        t.powf(-f64::from(self.n) / self.lambda) * g.powf(self.m())
    }

    /// Radius of the support at time `t` (infinite for `p < 2`).
    pub fn support_radius(&self, t: f64) -> f64 {
        if self.p < 2.0 {
            return f64::INFINITY;
        }
        t.powf(1.0 / self.lambda) * (self.c / self.k).powf(1.0 / self.sigma())
    }

    pub fn function(&self) -> SpaceTimeFunction {
        let b = *self;
        let (bv, bt, br) = (b, b, b);
        SpaceTimeFunction::new(format!("barenblatt(p={}, n={}, C={})", b.p, b.n, b.c), move |r, t| bv.value(r, t))
            .with_dt(move |r, t| {
                let b = bt;
                let (g, xs) = b.core(r, t);
                if g <= 0.0 {
                    return 0.0;
                }
                let nl = f64::from(b.n) / b.lambda;
                let pre = t.powf(-nl);
                -nl * pre * g.powf(b.m()) / t + pre * b.m() * g.powf(b.m() - 1.0) * b.k * b.sigma() * xs / (b.lambda * t)
            })
            .with_dr(move |r, t| {
                let b = br;
                let (g, xs) = b.core(r, t);
                if g <= 0.0 || r == 0.0 {
                    return 0.0;
                }
                let pre = t.powf(-f64::from(b.n) / b.lambda);
                -pre * b.m() * g.powf(b.m() - 1.0) * b.k * b.sigma() * xs / r
            })
            .on(TimeDomain::Future)
    }
}
