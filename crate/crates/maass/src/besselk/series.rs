//! Power series in the order for exp(πr/2) K_{ir}(x).
//!
//! Writing K through I_{±ir} and pairing conjugate terms gives the real form
//!
//! ```text
//! exp(πr/2) K_{ir}(x) = -(2π / (1 - e^{-2πr})) Σ_{k≥0} (x²/4)^k / k! · Im W_k,
//! W_0 = (x/2)^{ir} e^{-πr/2} / Γ(1+ir),   W_{k+1} = W_k / (k+1+ir),
//! ```
//!
//! where the modulus e^{-πr/2}/|Γ(1+ir)| = sqrt((1-e^{-2πr})/(2πr)) is taken
//! in closed form so nothing ever leaves the f64 range. The series is cheap
//! and accurate wherever its internal cancellation stays small; the caller
//! falls back to a quadrature route when the term-size monitor trips.

use num_complex::Complex64;

use super::gamma::arg_gamma_one_plus_ir;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest tolerated ratio between the biggest term and the final sum.
/// Beyond this the result has lost more than ~3 digits to cancellation.
const CANCEL_BUDGET: f64 = 3e3;

const MAX_TERMS: usize = 400;

pub(crate) fn eval(r: f64, x: f64) -> Option<f64> {
    if r < 1e-13 {
        return eval_order_zero(x);
    }
    let q = 0.25 * x * x;
    let two_pi_r = 2.0 * std::f64::consts::PI * r;
    let one_minus_exp = -(-two_pi_r).exp_m1(); // 1 - e^{-2πr}, stable for all r
    let modulus = (one_minus_exp / two_pi_r).sqrt();
    let phase = r * (0.5 * x).ln() - arg_gamma_one_plus_ir(r);
    let mut w = Complex64::from_polar(modulus, phase);
    let prefactor = -(2.0 * std::f64::consts::PI) / one_minus_exp;

    let mut coeff = 1.0f64; // (x²/4)^k / k!
    let mut sum = 0.0f64;
    let mut max_term = 0.0f64;
    for k in 0..MAX_TERMS {
        let magnitude = coeff * w.norm();
        sum += coeff * w.im;
        max_term = max_term.max(magnitude);
        let kp1 = (k + 1) as f64;
        let ratio = q / (kp1 * (kp1 * kp1 + r * r).sqrt());
        if k >= 3 && ratio < 0.7 {
            let tail = magnitude * ratio / (1.0 - ratio);
            if tail < 1e-18 * sum.abs().max(1e-280) {
                let value = prefactor * sum;
                if max_term > CANCEL_BUDGET * sum.abs() {
                    return None;
                }
                return Some(value);
            }
        }
        w /= Complex64::new(kp1, r);
        coeff *= q / kp1;
    }
    None
}

/// Order-zero limit: K_0(x) = Σ (x²/4)^k / (k!)² (ψ(k+1) - ln(x/2)).
fn eval_order_zero(x: f64) -> Option<f64> {
    let q = 0.25 * x * x;
    let ln_half_x = (0.5 * x).ln();
    let mut psi = -EULER_GAMMA;
    let mut coeff = 1.0f64; // q^k / (k!)²
    let mut sum = 0.0f64;
    let mut max_term = 0.0f64;
    for k in 0..MAX_TERMS {
        let term = coeff * (psi - ln_half_x);
        sum += term;
        max_term = max_term.max(term.abs());
        let kp1 = (k + 1) as f64;
        let ratio = q / (kp1 * kp1);
        if k >= 3 && ratio < 0.7 && coeff * (psi.abs() + ln_half_x.abs() + 1.0) < 1e-18 * sum.abs()
        {
            if max_term > CANCEL_BUDGET * sum.abs() {
                return None;
            }
            return Some(sum);
        }
        psi += 1.0 / kp1;
        coeff *= ratio;
    }
    None
}
