//! K-Bessel function of imaginary order, exponentially rescaled.
//!
//! Everything downstream works with κ(r, x) = exp(πr/2) K_{ir}(x); the bare
//! function has magnitude ~e^{-πr/2} and would underflow near r ≈ 1450. The
//! rescaling cancels in every ratio the Hejhal systems form.
//!
//! Evaluation strategy by regime, each validated against the quadrature
//! reference in `maass-oracle`:
//!
//! * power series in the order for small x (and for x well below r, where
//!   the series stays cancellation-free up to x ≈ 6√r);
//! * constant-phase contour quadrature for x ≥ r ([`contour`]);
//! * large-argument expansion where it reaches 1e-15 ([`asymptotic`]);
//! * shifted-contour oscillatory quadrature for x < r ([`oscillatory`]).

mod asymptotic;
mod contour;
mod gamma;
mod oscillatory;
mod series;
mod truncation;

pub use truncation::{truncation_m, TruncationBound, HARD_CAP, TAIL_MARGIN_FLAT, TAIL_MARGIN_PER_LOG_EPS};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BesselError {
    #[error("K_ir requires a positive argument, got {x}")]
    NonpositiveArgument { x: f64 },
    #[error("non-finite input")]
    NonFinite,
    #[error("tail tolerance must be positive, got {epsilon}")]
    InvalidEpsilon { epsilon: f64 },
    #[error("truncation would need {required} coefficients, above the cap {cap}")]
    TruncationCapExceeded { required: usize, cap: usize },
}

/// Value of κ(r, x) = exp(πr/2) K_{ir}(x). `underflow` flags the case where
/// even the rescaled value is below the f64 range and 0.0 was returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub value: f64,
    pub underflow: bool,
}

/// κ(r, x) = exp(πr/2) K_{ir}(x) for r ≥ 0 (negative r is canonicalised;
/// K_{ir} = K_{-ir}), x > 0.
pub fn besselk_ir_scaled(r: f64, x: f64) -> Result<ScaledBessel, BesselError> {
    if !r.is_finite() || !x.is_finite() {
        return Err(BesselError::NonFinite);
    }
    if x <= 0.0 {
        return Err(BesselError::NonpositiveArgument { x });
    }
    let r = r.abs();

    // Series regime: cheap, so try it wherever the cancellation predictor
    // allows; the in-loop monitor rejects marginal cases.
    if x <= 3.8 || (x <= 6.0 * r.max(1.0).sqrt() && x <= 0.8 * r) {
        if let Some(value) = series::eval(r, x) {
            return Ok(ScaledBessel {
                value,
                underflow: false,
            });
        }
    }

    if x >= r {
        if x >= 35.0 && x >= 0.72 * r * r {
            if let Some((value, underflow)) = asymptotic::eval(r, x) {
                return Ok(ScaledBessel { value, underflow });
            }
        }
        let (value, underflow) = contour::eval(r, x);
        Ok(ScaledBessel { value, underflow })
    } else {
        Ok(ScaledBessel {
            value: oscillatory::eval(r, x),
            underflow: false,
        })
    }
}

/// Unchecked hot-path wrapper for callers that guarantee x > 0.
pub(crate) fn kappa(r: f64, x: f64) -> f64 {
    besselk_ir_scaled(r, x)
        .expect("kappa called with invalid argument")
        .value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_at_one() {
        // K_0(1), pinned from the quadrature reference.
        let v = besselk_ir_scaled(0.0, 1.0).unwrap().value;
        assert!((v - 0.421024438240708).abs() < 1e-12);
    }

    #[test]
    fn matches_oracle_across_regimes() {
        // Spot grid hitting series/contour/oscillatory/asymptotic branches,
        // including the transition band x ≈ r.
        let rs = [0.0, 0.3, 2.0, 9.533695, 30.0, 87.0, 160.0, 250.0];
        let xs = [0.01, 0.4, 3.0, 8.0, 21.0, 55.0, 140.0, 320.0, 480.0];
        for &r in &rs {
            for &x in &xs {
                let got = besselk_ir_scaled(r, x).unwrap().value;
                let want = maass_oracle::besselk_ir_scaled(r, x);
                let denom = want.abs().max(1e-280);
                assert!(
                    ((got - want) / denom).abs() < 1e-11,
                    "r={r} x={x}: got {got:e}, want {want:e}"
                );
            }
        }
        // Transition points x = r exactly.
        for &r in &[1.0, 14.0, 62.0, 213.0] {
            let got = besselk_ir_scaled(r, r).unwrap().value;
            let want = maass_oracle::besselk_ir_scaled(r, r);
            assert!(((got - want) / want).abs() < 1e-11, "r={r} at turning point");
        }
    }

    #[test]
    fn symmetric_in_sign_of_r() {
        for &(r, x) in &[(4.5, 2.0), (31.0, 12.0), (9.0, 40.0)] {
            let plus = besselk_ir_scaled(r, x).unwrap().value;
            let minus = besselk_ir_scaled(-r, x).unwrap().value;
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn leading_exponential_asymptotics() {
        // Ratio against the leading term sqrt(π/2x) e^{πr/2 - x} approaches 1;
        // the first correction is (4r²+1)/(8x), so pick points where that is
        // inside the 1% band.
        for &(r, x) in &[(0.0, 40.0), (0.5, 35.0), (1.0, 80.0), (2.0, 300.0)] {
            let v = besselk_ir_scaled(r, x).unwrap().value;
            let lead =
                (std::f64::consts::FRAC_PI_2 / x).sqrt() * (std::f64::consts::FRAC_PI_2 * r - x).exp();
            assert!((v / lead - 1.0).abs() < 0.01, "r={r} x={x}: ratio {}", v / lead);
        }
    }

    #[test]
    fn no_positivity_in_the_oscillatory_regime() {
        // K_{ir}(x) changes sign for x < r; make sure we see both signs.
        let mut signs = (false, false);
        for i in 0..200 {
            let x = 1.0 + 28.0 * i as f64 / 199.0;
            let v = besselk_ir_scaled(30.0, x).unwrap().value;
            if v > 0.0 {
                signs.0 = true;
            }
            if v < 0.0 {
                signs.1 = true;
            }
        }
        assert!(signs.0 && signs.1);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            besselk_ir_scaled(1.0, 0.0),
            Err(BesselError::NonpositiveArgument { .. })
        ));
        assert!(matches!(
            besselk_ir_scaled(1.0, -2.0),
            Err(BesselError::NonpositiveArgument { .. })
        ));
        assert!(matches!(
            besselk_ir_scaled(f64::NAN, 1.0),
            Err(BesselError::NonFinite)
        ));
    }

    #[test]
    fn underflow_is_flagged_not_junk() {
        let out = besselk_ir_scaled(0.0, 800.0).unwrap();
        assert!(out.underflow);
        assert_eq!(out.value, 0.0);
    }
}
