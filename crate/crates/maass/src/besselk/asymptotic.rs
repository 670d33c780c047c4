//! Large-argument expansion K_ν(x) ~ sqrt(π/2x) e^{-x} Σ_k a_k(ν) x^{-k}
//! specialised to ν = ir, truncated at the smallest term. Only accepted when
//! the smallest term is below 1e-15 of the sum; otherwise the caller uses
//! the contour route.

pub(crate) fn eval(r: f64, x: f64) -> Option<(f64, bool)> {
    let four_r2 = 4.0 * r * r;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut smallest = 1.0f64;
    for k in 1..=60u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (-(four_r2 + odd * odd)) / (8.0 * x * k as f64);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        smallest = term.abs();
        if smallest < 1e-17 * sum.abs() {
            break;
        }
    }
    if smallest > 1e-15 * sum.abs() {
        return None;
    }
    let log_pref = std::f64::consts::FRAC_PI_2 * r - x
        + 0.5 * (std::f64::consts::FRAC_PI_2 / x).ln();
    if log_pref > -600.0 {
        Some((sum * log_pref.exp(), false))
    } else {
        let log_value = log_pref + sum.abs().ln();
        if log_value < -744.0 {
            Some((0.0, true))
        } else {
            Some((sum.signum() * log_value.exp(), false))
        }
    }
}
