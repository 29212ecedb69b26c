//! Explicit barrier constructions for the singular (`1 < p < 2`) and
//! degenerate (`p > 2`) ranges, each with closed-form `∂_t`, `∂_r` and `Δ_p`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

#[allow(unused_imports)]
use num_traits::Float;


use crate::calculus::{SpaceTimeFunction, TimeDomain};
use crate::domains::{DomainProfile, Gauge};
use crate::error::{domain, inadmissible};
use crate::params::{lambda_of, Params};
use crate::verify::SampleGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BarrierKind {
    SingularIrregularity,
    SingularTraditional,
    DegenerateFamilyMember,
    DegenerateIrregularity,
    DegenerateSmallData,
}

impl BarrierKind {
    pub const ALL: [BarrierKind; 5] = [
        BarrierKind::SingularIrregularity,
        BarrierKind::SingularTraditional,
        BarrierKind::DegenerateFamilyMember,
        BarrierKind::DegenerateIrregularity,
        BarrierKind::DegenerateSmallData,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BarrierKind::SingularIrregularity => "singular_irregularity",
            BarrierKind::SingularTraditional => "singular_traditional",
            BarrierKind::DegenerateFamilyMember => "degenerate_family_member",
            BarrierKind::DegenerateIrregularity => "degenerate_irregularity",
            BarrierKind::DegenerateSmallData => "degenerate_small_data",
        }
    }
}

impl core::str::FromStr for BarrierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BarrierKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown barrier kind `{s}`")))
    }
}

/// Serializable description of a constructed barrier.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BarrierSpec {
    pub kind: BarrierKind,
    pub params: Params,
    pub constants: BTreeMap<String, f64>,
    /// Family members only: the smooth gauge `δ̂` the member was built on.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub gauge: Option<Gauge>,
}

/// A barrier: its description, the field, and the domain on which its
/// supersolution inequality is claimed.
#[derive(Debug, Clone)]
pub struct Barrier {
    pub spec: BarrierSpec,
    pub function: SpaceTimeFunction,
    pub domain: DomainProfile,
}

impl Barrier {
    pub fn constant(&self, name: &str) -> Option<f64> {
        self.spec.constants.get(name).copied()
    }
}

fn spec(kind: BarrierKind, params: Params, constants: &[(&str, f64)]) -> BarrierSpec {
    BarrierSpec {
        kind,
        params,
        constants: constants.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        gauge: None,
    }
}

fn check_singular(p: f64, q: f64, n: u32, q_strict: bool) -> Result<()> {
    if !(p > 1.0 && p < 2.0) {
        return Err(inadmissible!("singular constructions need 1 < p < 2 (got p = {p})"));
    }
    if n < 1 {
        return Err(inadmissible!("n must be >= 1"));
    }
    let ok = if q_strict { q > 0.0 && q * p < 1.0 } else { q > 0.0 && q * p <= 1.0 };
    if !ok {
        let rel = if q_strict { "<" } else { "<=" };
        return Err(inadmissible!("need 0 < q {rel} 1/p = {} (got q = {q})", 1.0 / p));
    }
    Ok(())
}

fn check_degenerate(p: f64, n: u32) -> Result<()> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(inadmissible!("degenerate constructions need p > 2 (got p = {p})"));
    }
    if n < 1 {
        return Err(inadmissible!("n must be >= 1"));
    }
    Ok(())
}

/// Irregularity barrier for `1 < p < 2`, `0 < q < 1/p` on `|x| < (-t)^q`:
///
/// `u = |x|^{p/(p-1)} / (-t)^{pq/(p-1)} - n/(1-pq) (p/(p-1))^{p-1} (-t)^{1-pq}`,
/// with `u(0, 0) = 1`.
pub fn singular_irregularity_barrier(p: f64, q: f64, n: u32) -> Result<Barrier> {
    check_singular(p, q, n, true)?;
    let sigma = p / (p - 1.0);
    let nf = f64::from(n);
    let c = nf / (1.0 - p * q) * sigma.powf(p - 1.0);
    let a = p * q / (p - 1.0);
    let function = SpaceTimeFunction::new(format!("singular_irregularity(p={p}, q={q}, n={n})"), move |r, t| {
        if r == 0.0 && t == 0.0 {
            return 1.0;
        }
        let tau = -t;
        r.powf(sigma) / tau.powf(a) - c * tau.powf(1.0 - p * q)
    })
    .with_dt(move |r, t| {
        let tau = -t;
        a * r.powf(sigma) / tau.powf(1.0 + a) + c * (1.0 - p * q) * tau.powf(-p * q)
    })
    .with_dr(move |r, t| sigma * r.powf(sigma - 1.0) / (-t).powf(a))
    .with_p_laplacian(p, move |_, t| nf * sigma.powf(p - 1.0) * (-t).powf(-p * q))
    .on(TimeDomain::Past);
    let params = Params::with_cusp(p, n, q, 1.0, -1.0)?;
    Ok(Barrier {
        spec: spec(BarrierKind::SingularIrregularity, params, &[("c", c), ("origin_value", 1.0)]),
        function,
        domain: DomainProfile::power(1.0, q, -1.0)?,
    })
}

/// `B = min{n(2-p)(p/(p-1))^{p-1}, 1}`.
pub fn b_const(p: f64, n: u32) -> Result<f64> {
    check_singular(p, 0.5 / p, n, false)?;
    let v = f64::from(n) * (2.0 - p) * (p / (p - 1.0)).powf(p - 1.0);
    Ok(v.min(1.0))
}

/// `M = (B/2)^{1 + (p-1)/(pq(2-p))}`, the infimum of `v` on the inner
/// boundary of `Θ'`.
pub fn m_const(p: f64, q: f64, n: u32) -> Result<f64> {
    check_singular(p, q, n, false)?;
    let b = b_const(p, n)?;
    Ok((0.5 * b).powf(1.0 + (p - 1.0) / (p * q * (2.0 - p))))
}

/// Traditional barrier for `1 < p < 2`, `0 < q <= 1/p`: `min{v, M}` on
/// `Θ' = {|x|^{p/(p-1)} < B/2}` and `M` elsewhere, with
/// `v = (-t)^{1/(2-p)} (B - |x|^{p/(p-1)})`.
pub fn singular_traditional_barrier(p: f64, q: f64, n: u32) -> Result<Barrier> {
    check_singular(p, q, n, false)?;
    let b = b_const(p, n)?;
    let m = m_const(p, q, n)?;
    let sigma = p / (p - 1.0);
    let e = 1.0 / (2.0 - p);
    let nf = f64::from(n);
    let v = move |r: f64, t: f64| (-t).powf(e) * (b - r.powf(sigma));
    // true where the pasted function follows v
    let on_v = move |r: f64, t: f64| r.powf(sigma) < 0.5 * b && v(r, t) < m;
    let function = SpaceTimeFunction::new(format!("singular_traditional(p={p}, q={q}, n={n})"), move |r, t| {
        if on_v(r, t) {
            v(r, t)
        } else {
            m
        }
    })
    .with_dt(move |r, t| {
        if on_v(r, t) {
            -e * (-t).powf(e - 1.0) * (b - r.powf(sigma))
        } else {
            0.0
        }
    })
    .with_dr(move |r, t| {
        if on_v(r, t) {
            -sigma * r.powf(sigma - 1.0) * (-t).powf(e)
        } else {
            0.0
        }
    })
    .with_p_laplacian(p, move |r, t| {
        if on_v(r, t) {
            -nf * sigma.powf(p - 1.0) * (-t).powf((p - 1.0) * e)
        } else {
            0.0
        }
    })
    .on(TimeDomain::Past);
    let params = Params::with_cusp(p, n, q, 1.0, -1.0)?;
    Ok(Barrier {
        spec: spec(BarrierKind::SingularTraditional, params, &[("B", b), ("M", m)]),
        function,
        domain: DomainProfile::power(1.0, q, -1.0)?,
    })
}

/// Small-data bound `g = (B/2) min{-t, (B/2)^{(p-1)/(pq)}}^{1/(2-p)}`.
pub fn small_data_bound_g(p: f64, q: f64, n: u32) -> Result<SpaceTimeFunction> {
    check_singular(p, q, n, false)?;
    let half_b = 0.5 * b_const(p, n)?;
    let cap = half_b.powf((p - 1.0) / (p * q));
    let e = 1.0 / (2.0 - p);
    Ok(SpaceTimeFunction::new(format!("small_data_bound(p={p}, q={q}, n={n})"), move |_, t| {
        half_b * (-t).min(cap).max(0.0).powf(e)
    })
    .with_dr(|_, _| 0.0)
    .with_dt(move |_, t| if -t < cap { -half_b * e * (-t).powf(e - 1.0) } else { 0.0 })
    .on(TimeDomain::All))
}

/// Largest admissible coefficient `((p-2)^{p-1} / (λ p^{p-1}))^{1/(p-2)}`.
pub fn degenerate_irregularity_max_c(p: f64, n: u32) -> Result<f64> {
    check_degenerate(p, n)?;
    let lambda = lambda_of(p, n);
    Ok(((p - 2.0).powf(p - 1.0) / (lambda * p.powf(p - 1.0))).powf(1.0 / (p - 2.0)))
}

/// Irregularity barrier `C (|x|^p / (-t))^{1/(p-2)}` for `p > 2` on the
/// reference cusp `|x| < (-t)^{1/p}`, `-1 < t < 0`.
pub fn degenerate_irregularity_barrier(p: f64, n: u32, c: f64) -> Result<Barrier> {
    check_degenerate(p, n)?;
    let c_max = degenerate_irregularity_max_c(p, n)?;
    if !(c > 0.0) || c > c_max {
        return Err(inadmissible!("need 0 < C <= c_max = {c_max} (got C = {c})"));
    }
    let alpha = p / (p - 2.0);
    let e = 1.0 / (p - 2.0);
    let nf = f64::from(n);
    let function = SpaceTimeFunction::new(format!("degenerate_irregularity(p={p}, n={n}, C={c})"), move |r, t| {
        c * r.powf(alpha) * (-t).powf(-e)
    })
    .with_dt(move |r, t| c * e * r.powf(alpha) * (-t).powf(-e - 1.0))
    .with_dr(move |r, t| c * alpha * r.powf(alpha - 1.0) * (-t).powf(-e))
    .with_p_laplacian(p, move |r, t| (c * alpha * (-t).powf(-e)).powf(p - 1.0) * (nf + alpha) * r.powf(alpha))
    .on(TimeDomain::Past);
    let params = Params::with_cusp(p, n, 1.0 / p, 1.0, -1.0)?;
    Ok(Barrier {
        spec: spec(BarrierKind::DegenerateIrregularity, params, &[("C", c), ("c_max", c_max), ("origin_value", c)]),
        function,
        domain: DomainProfile::power(1.0, 1.0 / p, -1.0)?,
    })
}

/// `A = ((β/λ)(1 - 2/p)^{p-1})^{1/(p-2)}`.
pub fn small_data_coefficient(p: f64, n: u32, beta: f64) -> f64 {
    let lambda = lambda_of(p, n);
    (beta / lambda * (1.0 - 2.0 / p).powf(p - 1.0)).powf(1.0 / (p - 2.0))
}

/// Small-data barrier `A (|x|^p / (-t)^β)^{1/(p-2)}` for `p > 2` on
/// `|x| < (-t)^q`, `0 < q <= 1/p`, `0 < β < pq`.
pub fn degenerate_small_data_barrier(p: f64, q: f64, n: u32, beta: f64) -> Result<Barrier> {
    check_degenerate(p, n)?;
    if !(q > 0.0 && q * p <= 1.0) {
        return Err(inadmissible!("need 0 < q <= 1/p = {} (got q = {q})", 1.0 / p));
    }
    if !(beta > 0.0 && beta < p * q) {
        return Err(inadmissible!(
            "need 0 < beta < pq = {} (got beta = {beta}); beta = pq would break continuity at the origin",
            p * q
        ));
    }
    let a = small_data_coefficient(p, n, beta);
    let alpha = p / (p - 2.0);
    let e = 1.0 / (p - 2.0);
    let lambda = lambda_of(p, n);
    let function = SpaceTimeFunction::new(format!("degenerate_small_data(p={p}, q={q}, n={n}, beta={beta})"), move |r, t| {
        if r == 0.0 {
            return 0.0;
        }
        a * r.powf(alpha) * (-t).powf(-beta * e)
    })
    .with_dt(move |r, t| a * beta * e * r.powf(alpha) * (-t).powf(-beta * e - 1.0))
    .with_dr(move |r, t| a * alpha * r.powf(alpha - 1.0) * (-t).powf(-beta * e))
    .with_p_laplacian(p, move |r, t| (a * alpha * (-t).powf(-beta * e)).powf(p - 1.0) * lambda / (p - 2.0) * r.powf(alpha))
    .on(TimeDomain::Past);
    let params = Params::with_cusp(p, n, q, 1.0, -1.0)?;
    Ok(Barrier {
        spec: spec(BarrierKind::DegenerateSmallData, params, &[("A", a), ("beta", beta)]),
        function,
        domain: DomainProfile::power(1.0, q, -1.0)?,
    })
}

/// The pieces of a family member
/// `w_C = (Q^{(p-1)/(p-2)} - C^{(p-1)/(p-2)}) f(t) + ρ_C(t)` evaluated on a
/// smooth gauge `δ̂`.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub barrier: Barrier,
    pub c: f64,
    parts: FamilyParts,
}

#[derive(Debug, Clone)]
struct FamilyParts {
    p: f64,
    n: f64,
    c: f64,
    lambda: f64,
    gauge: Gauge,
}

impl FamilyParts {
    fn e(&self) -> f64 {
        1.0 / (self.p - 2.0)
    }
    fn m(&self) -> f64 {
        (self.p - 1.0) / (self.p - 2.0)
    }
    fn sigma(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
    fn kappa(&self) -> f64 {
        (self.p - 2.0) / (self.p * self.lambda.powf(1.0 / (self.p - 1.0)))
    }
    fn z(&self, r: f64, t: f64) -> f64 {
        (r / (-t).powf(1.0 / self.lambda)).powf(self.sigma())
    }
    fn q(&self, r: f64, t: f64) -> f64 {
        self.c + self.kappa() * self.z(r, t)
    }
    fn f(&self, t: f64) -> f64 {
        -self.gauge.delta(t).powf(self.e()) * (-t).powf(-self.n / self.lambda)
    }
    fn f_prime(&self, t: f64) -> f64 {
        let d = self.gauge.delta(t);
        let dp = self.gauge.delta_prime(t).unwrap_or(f64::NAN);
        let tau = -t;
        let nl = self.n / self.lambda;
        -self.e() * d.powf(self.e() - 1.0) * dp * tau.powf(-nl) - d.powf(self.e()) * nl * tau.powf(-nl - 1.0)
    }
    fn rho(&self, t: f64) -> f64 {
        -self.c.powf(self.e()) * self.gauge.delta(t) * self.f(t)
    }
    fn rho_prime(&self, t: f64) -> f64 {
        let dp = self.gauge.delta_prime(t).unwrap_or(f64::NAN);
        -self.c.powf(self.e()) * (dp * self.f(t) + self.gauge.delta(t) * self.f_prime(t))
    }
    fn value(&self, r: f64, t: f64) -> f64 {
        (self.q(r, t).powf(self.m()) - self.c.powf(self.m())) * self.f(t) + self.rho(t)
    }
    fn dt(&self, r: f64, t: f64) -> f64 {
        let q = self.q(r, t);
        let dq = self.sigma() / self.lambda * (q - self.c) / (-t);
        (q.powf(self.m()) - self.c.powf(self.m())) * self.f_prime(t)
            + self.m() * self.f(t) * q.powf(self.e()) * dq
            + self.rho_prime(t)
    }
    fn dr(&self, r: f64, t: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let q = self.q(r, t);
        let dq = self.kappa() * self.sigma() * self.z(r, t) / r;
        self.m() * self.f(t) * q.powf(self.e()) * dq
    }
    fn p_laplacian(&self, r: f64, t: f64) -> f64 {
        let q = self.q(r, t);
        let f = self.f(t);
        let flux = f.abs().powf(self.p - 2.0) * f;
        let scale = (-t).powf(self.p / self.lambda);
        flux / scale
            * (q.powf(self.m()) * self.n / self.lambda
                + q.powf(self.e()) * self.z(r, t) / self.lambda.powf(self.p / (self.p - 1.0)))
    }
    /// `H = (ρ/f)' + pQ^{1/(p-2)}(Q - C)/(λ(p-2)(-t)) - nQ^{(p-1)/(p-2)} δ/(λ(-t))`;
    /// `H <= 0` makes `w_C` a supersolution.
    fn h(&self, r: f64, t: f64) -> f64 {
        let q = self.q(r, t);
        let d = self.gauge.delta(t);
        let dp = self.gauge.delta_prime(t).unwrap_or(f64::NAN);
        let tau = -t;
        -self.c.powf(self.e()) * dp + self.p * q.powf(self.e()) * (q - self.c) / (self.lambda * (self.p - 2.0) * tau)
            - self.n * q.powf(self.m()) * d / (self.lambda * tau)
    }
    fn lower_bound(&self, t: f64) -> f64 {
        self.c.powf(self.e()) * self.gauge.delta(t).powf(self.m()) * (-t).powf(-self.n / self.lambda) / self.p
    }
}

impl FamilyMember {
    pub fn function(&self) -> &SpaceTimeFunction {
        &self.barrier.function
    }
    pub fn q_of(&self, r: f64, t: f64) -> f64 {
        self.parts.q(r, t)
    }
    pub fn rho(&self, t: f64) -> f64 {
        self.parts.rho(t)
    }
    pub fn f(&self, t: f64) -> f64 {
        self.parts.f(t)
    }
    pub fn h(&self, r: f64, t: f64) -> f64 {
        self.parts.h(r, t)
    }
    /// `(1/p) C^{1/(p-2)} δ^{(p-1)/(p-2)} (-t)^{-n/λ}`.
    pub fn lower_bound(&self, t: f64) -> f64 {
        self.parts.lower_bound(t)
    }
    /// `Q^{(p-1)/(p-2)} - C^{(p-1)/(p-2)}` and its bound `((p-1)/p) C^{1/(p-2)} δ`.
    pub fn chain_terms(&self, r: f64, t: f64) -> (f64, f64) {
        let fp = &self.parts;
        let lhs = fp.q(r, t).powf(fp.m()) - fp.c.powf(fp.m());
        let rhs = (fp.p - 1.0) / fp.p * fp.c.powf(fp.e()) * fp.gauge.delta(t);
        (lhs, rhs)
    }
    pub fn gauge(&self) -> &Gauge {
        &self.parts.gauge
    }
}

/// Family member `w_C` on a smooth monotone gauge built from `profile`.
pub fn degenerate_family_member(p: f64, n: u32, profile: &DomainProfile, gauge: &Gauge, c: f64) -> Result<FamilyMember> {
    check_degenerate(p, n)?;
    if !(c > 0.0) {
        return Err(inadmissible!("family index C must be > 0 (got {c})"));
    }
    if !gauge.is_smooth() {
        return Err(Error::Input("family member needs a gauge with a closed-form derivative".into()));
    }
    if !gauge.monotone {
        return Err(Error::Input("family member needs (-t)^(-beta) delta nondecreasing".into()));
    }
    let lambda = lambda_of(p, n);
    let parts = FamilyParts { p, n: f64::from(n), c, lambda, gauge: gauge.clone() };
    let (pv, pt, pr, pl) = (parts.clone(), parts.clone(), parts.clone(), parts.clone());
    let function = SpaceTimeFunction::new(format!("degenerate_family_member(p={p}, n={n}, C={c})"), move |r, t| pv.value(r, t))
        .with_dt(move |r, t| pt.dt(r, t))
        .with_dr(move |r, t| pr.dr(r, t))
        .with_p_laplacian(p, move |r, t| pl.p_laplacian(r, t))
        .on(TimeDomain::Past);
    let mut s = spec(
        BarrierKind::DegenerateFamilyMember,
        Params::new(p, n, profile.t0)?,
        &[("C", c), ("beta", gauge.beta), ("theta", gauge.theta())],
    );
    s.gauge = Some(gauge.clone());
    Ok(FamilyMember { barrier: Barrier { spec: s, function, domain: profile.clone() }, c, parts })
}

/// Outcome of the search for a family threshold.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdSearch {
    pub c0: f64,
    pub doublings: u32,
    /// Sampled minimum of `(-t)^{-β} δ̂(t)`.
    pub theta: f64,
    pub grid_points: usize,
}

/// Doubling search from `C = 1` for the first `C` at which, on every grid
/// point of `profile`, `Q <= 2C`, the chain bound
/// `Q^{(p-1)/(p-2)} - C^{(p-1)/(p-2)} <= ((p-1)/p) C^{1/(p-2)} δ̂` and `H <= 0` hold.
pub fn find_c0(p: f64, n: u32, gauge: &Gauge, profile: &DomainProfile, grid: &SampleGrid) -> Result<ThresholdSearch> {
    let mut c = 1.0;
    let points = grid.points(profile);
    if points.is_empty() {
        return Err(Error::Input("empty sample grid".into()));
    }
    for doublings in 0..64 {
        let member = degenerate_family_member(p, n, profile, gauge, c)?;
        let ok = points.iter().all(|pt| {
            let q = member.q_of(pt.r, pt.t);
            let (lhs, rhs) = member.chain_terms(pt.r, pt.t);
            q <= 2.0 * c && lhs <= rhs && member.h(pt.r, pt.t) <= 0.0
        });
        if ok {
            return Ok(ThresholdSearch { c0: c, doublings, theta: gauge.theta(), grid_points: points.len() });
        }
        c *= 2.0;
    }
    Err(domain!("no admissible family index found below 2^64"))
}

/// Both sides of `(1+s)^α < 1 + α s (1+s)^{α-1}`.
pub fn elementary_inequality(alpha: f64, s: f64) -> (f64, f64) {
    ((1.0 + s).powf(alpha), 1.0 + alpha * s * (1.0 + s).powf(alpha - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{p_laplacian_radial_fd, residual, FdOptions};
    use crate::domains::family_gauge;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * (1.0 + b.abs())
    }

    fn check_closed_forms(f: &SpaceTimeFunction, p: f64, n: u32, pts: &[(f64, f64)]) {
        for &(r, t) in pts {
            let h = 1e-6 * r;
            let fdr = (f.eval(r + h, t) - f.eval(r - h, t)) / (2.0 * h);
            let ht = 1e-6 * t.abs();
            let fdt = (f.eval(r, t + ht) - f.eval(r, t - ht)) / (2.0 * ht);
            assert!(close(fdr, f.dr(r, t).unwrap(), 1e-6), "{} dr {fdr} {:?}", f.label, f.dr(r, t));
            assert!(close(fdt, f.dt(r, t).unwrap(), 1e-6), "{} dt {fdt} {:?}", f.label, f.dt(r, t));
            let lap = p_laplacian_radial_fd(f, p, n, r, t, FdOptions { h: 1e-3 * r, eps: 0.0 }).unwrap();
            let closed = f.p_laplacian(p, r, t).unwrap();
            assert!(close(lap, closed, 1e-5), "{} lap {lap} {closed}", f.label);
        }
    }

    #[test]
    fn singular_irregularity_values() {
        let b = singular_irregularity_barrier(1.5, 0.25, 2).unwrap();
        let v = b.function.eval(0.0, -1.0);
        assert!((v + 3.2 * 3f64.sqrt()).abs() < 1e-12, "{v}");
        assert_eq!(b.function.eval(0.0, 0.0), 1.0);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..30 {
            let u = b.function.eval(0.0, -(0.5f64).powi(k));
            assert!(u > prev && u < 0.0);
            prev = u;
        }
        assert!(prev > -0.01);
        assert!(matches!(singular_irregularity_barrier(1.5, 2.0 / 3.0, 2), Err(Error::Inadmissible(_))));
        check_closed_forms(&b.function, 1.5, 2, &[(0.3, -0.5), (0.05, -0.01), (0.7, -0.9)]);
    }

    #[test]
    fn singular_constants() {
        assert_eq!(b_const(1.5, 2).unwrap(), 1.0);
        let m = m_const(1.5, 0.25, 2).unwrap();
        assert!((m - 0.5f64.powf(1.0 + 0.5 / 0.1875)).abs() < 1e-15);
        assert!((m - 0.0787).abs() < 1e-4);
        for &(p, n) in &[(1.1, 1u32), (1.9, 1), (1.5, 7)] {
            assert!(b_const(p, n).unwrap() <= 1.0);
        }
        assert!(b_const(2.5, 1).is_err());
        assert!(m_const(1.5, 0.7, 1).is_err());
    }

    #[test]
    fn traditional_barrier_pasting() {
        let b = singular_traditional_barrier(1.5, 0.25, 2).unwrap();
        let m = b.constant("M").unwrap();
        // |x|^{p/(p-1)} >= B/2 gives M
        assert_eq!(b.function.eval(0.8, -0.5), m);
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let u = b.function.eval(0.0, -(0.5f64).powi(k));
            assert!(u <= prev && u > 0.0);
            prev = u;
        }
        assert!(prev < 1e-10);
        check_closed_forms(&b.function, 1.5, 2, &[(0.05, -0.01), (0.1, -0.001)]);
    }

    #[test]
    fn small_data_bound_values() {
        let g = small_data_bound_g(1.5, 0.25, 2).unwrap();
        let expect = 0.5 * 0.5f64.powf(4.0 / 3.0).powf(2.0);
        assert!((g.eval(0.0, -1.0) - expect).abs() < 1e-15);
        assert!((expect - m_const(1.5, 0.25, 2).unwrap()).abs() < 1e-15);
        assert_eq!(g.eval(0.3, -1.0), g.eval(0.0, -0.5));
        assert!(g.eval(0.0, -1e-12) < 1e-20);
    }

    #[test]
    fn degenerate_irregularity_values() {
        let c = degenerate_irregularity_max_c(3.0, 2).unwrap();
        assert!((c - 1.0 / 45.0).abs() < 1e-15);
        assert!(matches!(degenerate_irregularity_barrier(3.0, 2, 0.03), Err(Error::Inadmissible(_))));
        let b = degenerate_irregularity_barrier(3.0, 2, 0.02).unwrap();
        for k in 0..10 {
            assert_eq!(b.function.eval(0.0, -(0.3f64).powi(k)), 0.0);
        }
        check_closed_forms(&b.function, 3.0, 2, &[(0.3, -0.5), (0.05, -0.01)]);
        // C = c_max: residual vanishes identically
        let b = degenerate_irregularity_barrier(3.0, 2, c).unwrap();
        let res = residual(&b.function, 3.0, 2, 0.4, -0.5).unwrap();
        assert!(res.abs() < 1e-14, "{res}");
    }

    #[test]
    fn small_data_values() {
        let a = small_data_coefficient(3.0, 2, 0.5);
        assert!((a - 0.5 / 45.0).abs() < 1e-15);
        assert!(matches!(degenerate_small_data_barrier(3.0, 1.0 / 3.0, 2, 1.0), Err(Error::Inadmissible(_))));
        let b = degenerate_small_data_barrier(3.0, 1.0 / 3.0, 2, 0.5).unwrap();
        assert_eq!(b.function.eval(0.0, -0.3), 0.0);
        check_closed_forms(&b.function, 3.0, 2, &[(0.3, -0.5), (0.05, -0.01)]);
    }

    #[test]
    fn elementary_inequality_holds() {
        for &p in &[2.2, 2.5, 3.0, 4.0, 7.0] {
            let alpha = (p - 1.0) / (p - 2.0);
            for k in 0..200 {
                let s = 10f64.powf(-6.0 + 7.0 * k as f64 / 199.0);
                let (lhs, rhs) = elementary_inequality(alpha, s);
                assert!(lhs < rhs, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn family_member_structure() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let gauge = family_gauge(&prof, 3.0, 1).unwrap();
        let grid = SampleGrid::new(32, 32);
        let search = find_c0(3.0, 1, &gauge, &prof, &grid).unwrap();
        let w = degenerate_family_member(3.0, 1, &prof, &gauge, search.c0).unwrap();
        for &t in &[-0.9, -0.1, -1e-3] {
            assert_eq!(w.q_of(0.0, t), search.c0);
            let rho = w.rho(t);
            assert!(rho > 0.0);
            assert!((w.function().eval(0.0, t) - rho).abs() <= 1e-14 * rho);
        }
        check_closed_forms(w.function(), 3.0, 1, &[(0.3, -0.5), (0.05, -0.01), (0.2, -0.2)]);
    }

    #[test]
    fn family_member_rejects_raw_gauge() {
        let prof = DomainProfile::power(1.0, 0.5, -1.0).unwrap();
        let raw = crate::domains::gauge_of(&prof, 3.0, 1).unwrap();
        assert!(degenerate_family_member(3.0, 1, &prof, &raw, 4.0).is_err());
        let sampled = raw.monotonized().unwrap();
        assert!(degenerate_family_member(3.0, 1, &prof, &sampled, 4.0).is_err());
    }
}
