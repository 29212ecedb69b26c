use petrocheck_core::barriers::elementary_inequality;
use petrocheck_core::calculus::{barenblatt, p_flux, p_flux_derivative, p_laplacian_radial_power};
use petrocheck_core::domains::{running_sup, scale_domain, DomainProfile, SampledFunction};
use petrocheck_core::solver::{classify, TheoremVerdict};
use petrocheck_core::lambda_of;
use proptest::prelude::*;

fn sampled(values: Vec<f64>) -> SampledFunction {
    let t: Vec<f64> = (0..values.len()).map(|i| -1.0 + i as f64 / values.len() as f64).collect();
    SampledFunction::new(t, values).unwrap()
}

proptest! {
    #[test]
    fn running_sup_dominates_and_is_monotone(values in prop::collection::vec(-1e3f64..1e3, 2..60)) {
        let h = sampled(values.clone());
        let s = running_sup(&h).unwrap();
        prop_assert!(s.is_nondecreasing());
        for (a, b) in values.iter().zip(&s.v) {
            prop_assert!(b >= a);
        }
        prop_assert_eq!(running_sup(&s).unwrap(), s);
    }

    #[test]
    fn flux_is_odd_and_increasing(s in -50f64..50.0, ds in 1e-6f64..5.0, p in 1.1f64..6.0) {
        prop_assert_eq!(p_flux(-s, p, 0.0), -p_flux(s, p, 0.0));
        prop_assert!(p_flux(s + ds, p, 1e-8) > p_flux(s, p, 1e-8));
        prop_assert!(p_flux_derivative(s, p, 1e-8) > 0.0);
    }

    #[test]
    fn radial_power_scales_linearly(c in 0.1f64..10.0, alpha in 1.1f64..4.0, p in 1.5f64..5.0, n in 1u32..4, r in 0.01f64..2.0) {
        let one = p_laplacian_radial_power(1.0, alpha, p, n, r).unwrap();
        let scaled = p_laplacian_radial_power(c, alpha, p, n, r).unwrap();
        let expected = c.powf(p - 1.0) * one;
        prop_assert!((scaled - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
    }

    #[test]
    fn barenblatt_is_nonnegative_and_radially_nonincreasing(
        p in 1.2f64..5.0, n in 1u32..4, t in 0.01f64..10.0, r in 0.0f64..5.0, dr in 0.0f64..1.0,
    ) {
        prop_assume!(lambda_of(p, n) > 0.0);
        let a = barenblatt(r, t, p, n, 1.0).unwrap();
        let b = barenblatt(r + dr, t, p, n, 1.0).unwrap();
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn classify_matches_threshold(p in 1.01f64..8.0, q in 0.01f64..2.0) {
        let verdict = classify(p, q).unwrap();
        let critical = (q * p - 1.0).abs() <= 1e-12;
        if !critical {
            let expected = if q * p > 1.0 { TheoremVerdict::Regular } else { TheoremVerdict::Irregular };
            prop_assert_eq!(verdict, expected);
        }
    }

    #[test]
    fn elementary_inequality_holds(alpha in 1.01f64..10.0, s in 1e-6f64..10.0) {
        let (lhs, rhs) = elementary_inequality(alpha, s);
        prop_assert!(lhs < rhs);
    }

    #[test]
    fn domain_scaling_inverts(k in 0.1f64..5.0, q in 0.1f64..1.0, a in 0.1f64..10.0, p in 2.1f64..6.0) {
        let base = DomainProfile::power(k, q, -1.0).unwrap();
        let (there, factor) = scale_domain(&base, a, p).unwrap();
        let (back, inverse) = scale_domain(&there, 1.0 / a, p).unwrap();
        prop_assert!((factor * inverse - 1.0).abs() < 1e-12);
        for &t in &[-1.0, -0.5, -0.1, -1e-3] {
            let t = t * base.t0.abs();
            prop_assert!((back.zeta(t) - base.zeta(t)).abs() <= 1e-10 * base.zeta(t));
        }
    }
}

#[test]
fn classify_edges() {
    assert_eq!(classify(2.0, 0.5).unwrap(), TheoremVerdict::Regular);
    assert_eq!(classify(3.0, 1.0 / 3.0).unwrap(), TheoremVerdict::Irregular);
    assert_eq!(classify(1.5, 2.0 / 3.0).unwrap(), TheoremVerdict::Unknown);
    assert!(classify(1.0, 0.5).is_err());
    assert!(classify(3.0, 0.0).is_err());
    assert!(classify(f64::NAN, 0.5).is_err());
}
