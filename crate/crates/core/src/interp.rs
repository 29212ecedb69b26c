//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Butland slopes).
//!
//! The interpolant is C¹, reproduces the data at the knots and is monotone on
//! every interval where the data are. Outside the knot range it is held
//! constant, with zero derivative.

use alloc::vec::Vec;

use crate::error::bad_input;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub(crate) struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub(crate) fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(bad_input!("knot arrays differ in length"));
        }
        if x.len() < 2 {
            return Err(bad_input!("need at least two knots, got {}", x.len()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(bad_input!("non-finite knot data"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(bad_input!("knots must be strictly increasing"));
        }
        let m = x.len();
        let secant: Vec<f64> = (0..m - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut slope = alloc::vec![0.0; m];
        for i in 1..m - 1 {
            let (a, b) = (secant[i - 1], secant[i]);
            if a * b > 0.0 {
                let (ha, hb) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                let (wa, wb) = (2.0 * hb + ha, hb + 2.0 * ha);
                slope[i] = (wa + wb) / (wa / a + wb / b);
            }
        }
        slope[0] = end_slope(x[1] - x[0], x[2.min(m - 1)] - x[1], secant[0], secant.get(1).copied());
        slope[m - 1] = end_slope(
            x[m - 1] - x[m - 2],
            if m > 2 { x[m - 2] - x[m - 3] } else { 0.0 },
            secant[m - 2],
            if m > 2 { Some(secant[m - 3]) } else { None },
        );
        Ok(MonotoneCubic { x, y, slope })
    }

    pub(crate) fn knots(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let last = self.x.len() - 1;
        if x <= self.x[0] || x >= self.x[last] {
            return None;
        }
        // first index with knot > x, minus one
        let i = self.x.partition_point(|&k| k <= x);
        Some(i - 1)
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        let last = self.x.len() - 1;
        match self.locate(x) {
            None if x <= self.x[0] => self.y[0],
            None => self.y[last],
            Some(i) => {
                let h = self.x[i + 1] - self.x[i];
                let s = (x - self.x[i]) / h;
                let (h00, h10, h01, h11) = hermite(s);
                h00 * self.y[i] + h10 * h * self.slope[i] + h01 * self.y[i + 1] + h11 * h * self.slope[i + 1]
            }
        }
    }

    pub(crate) fn derivative(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => {
                // at a knot the one-sided derivatives agree (C¹); off range it is flat
                if let Some(i) = self.x.iter().position(|&k| k == x) {
                    self.slope[i]
                } else {
                    0.0
                }
            }
            Some(i) => {
                let h = self.x[i + 1] - self.x[i];
                let s = (x - self.x[i]) / h;
                let d00 = 6.0 * s * s - 6.0 * s;
                let d10 = 3.0 * s * s - 4.0 * s + 1.0;
                let d01 = -d00;
                let d11 = 3.0 * s * s - 2.0 * s;
                (d00 * self.y[i] + d01 * self.y[i + 1]) / h + d10 * self.slope[i] + d11 * self.slope[i + 1]
            }
        }
    }
}

fn hermite(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2)
}

// One-sided three-point end slope, limited so the end interval stays monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: Option<f64>) -> f64 {
    let Some(d1) = d1 else { return d0 };
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_is_monotone() {
        let x = alloc::vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let y = alloc::vec![0.0, 0.0, 1.0, 1.0, 3.0, 3.5];
        let c = MonotoneCubic::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((c.value(*xi) - yi).abs() < 1e-14);
        }
        let mut prev = c.value(-1.0);
        for k in 0..=5000 {
            let v = c.value(-0.5 + 6.0 * k as f64 / 5000.0);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let x: Vec<f64> = (0..8).map(|i| i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|v| -(v * v) - v).collect();
        let c = MonotoneCubic::new(x, y).unwrap();
        for &s in &[0.3, 1.1, 2.9, 4.4] {
            let h = 1e-6;
            let fd = (c.value(s + h) - c.value(s - h)) / (2.0 * h);
            assert!((fd - c.derivative(s)).abs() < 1e-6, "{fd} vs {}", c.derivative(s));
        }
    }

    #[test]
    fn rejects_unordered_knots() {
        assert!(MonotoneCubic::new(alloc::vec![0.0, 0.0], alloc::vec![1.0, 2.0]).is_err());
        assert!(MonotoneCubic::new(alloc::vec![0.0], alloc::vec![1.0]).is_err());
    }
}
