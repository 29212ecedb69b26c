use crate::error::inadmissible;
use crate::Result;

/// Scale exponent `n(p-2) + p` of the self-similar (Barenblatt) scaling.
pub fn lambda_of(p: f64, n: u32) -> f64 {
    f64::from(n) * (p - 2.0) + p
}

/// Problem parameters shared by every construction.
///
/// `q` and `k` describe the power cusp `|x| < K(-t)^q`; they are optional
/// because some objects (Barenblatt, the gauge pipeline) do not need them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Params {
    pub p: f64,
    pub n: u32,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub q: Option<f64>,
    #[cfg_attr(
        feature = "serde",
        serde(rename = "K", default, skip_serializing_if = "Option::is_none")
    )]
    pub k: Option<f64>,
    pub t0: f64,
}

impl Params {
    pub fn new(p: f64, n: u32, t0: f64) -> Result<Self> {
        let params = Params { p, n, q: None, k: None, t0 };
        params.validate()?;
        Ok(params)
    }

    pub fn with_cusp(p: f64, n: u32, q: f64, k: f64, t0: f64) -> Result<Self> {
        let params = Params { p, n, q: Some(q), k: Some(k), t0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(inadmissible!("p must be > 1 (got {})", self.p));
        }
        if self.n < 1 {
            return Err(inadmissible!("n must be >= 1"));
        }
        if !(self.t0 < 0.0) || !self.t0.is_finite() {
            return Err(inadmissible!("t0 must be < 0 (got {})", self.t0));
        }
        if let Some(q) = self.q {
            if !(q > 0.0) || !q.is_finite() {
                return Err(inadmissible!("q must be > 0 (got {q})"));
            }
        }
        if let Some(k) = self.k {
            if !(k > 0.0) || !k.is_finite() {
                return Err(inadmissible!("K must be > 0 (got {k})"));
            }
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        lambda_of(self.p, self.n)
    }

    /// `p / (p - 2)`, the exponent of the degenerate-case radial powers.
    pub fn alpha(&self) -> f64 {
        self.p / (self.p - 2.0)
    }

    /// `n(p-2)/λ`; `(-t)^{-β} δ(t)` is the weighted gauge that must be monotone.
    pub fn beta(&self) -> f64 {
        f64::from(self.n) * (self.p - 2.0) / self.lambda()
    }

    /// `β / (p-1)`.
    pub fn gamma(&self) -> f64 {
        self.beta() / (self.p - 1.0)
    }

    /// `p / (p - 1)`, the exponent for which `Δ_p |x|^σ` is constant.
    pub fn sigma(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// True when `q` sits on the critical value `1/p` (relative 1e-12).
    pub fn q_is_critical(&self) -> bool {
        self.q.is_some_and(|q| (q * self.p - 1.0).abs() <= 1e-12)
    }
}
