//! Oscillatory regime x < r.
//!
//! Shifting the defining integral by iπ/2 gives the exact representation
//!
//! ```text
//! exp(πr/2) K_{ir}(x) = ∫_0^∞ cos(x sinh t - r t) dt,
//! ```
//!
//! an O(1) integrand with a stationary phase point at t₀ = arccosh(r/x).
//! The finite part up to T₁ is summed over phase-bounded panels; the tail is
//! taken up the vertical segment t = T₁ + is where it decays like
//! exp(rs - x cosh T₁ sin s) without further stationary points. T₁ is chosen
//! so the discarded corner at s = π/2 is below e^{-45}.

use crate::quad::gl_integrate_pub;

const PHASE_CAP: f64 = 1.8;
const TAIL_NATS: f64 = 45.0;

/// Phase-bounded panels of [a, b]; `max_dt` also caps the width so envelope
/// variation stays resolvable.
fn walk_panels(a: f64, b: f64, max_dt: f64, phase: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut t = a;
    while t < b {
        let here = phase(t);
        let probe = (phase((t + 1e-3).min(b)) - here).abs() * 1e3;
        let mut dt = (2.0 / (probe + 1.0)).min(max_dt).min(b - t);
        while dt > 1e-9 && (phase(t + dt) - here).abs() > PHASE_CAP {
            dt *= 0.5;
        }
        panels.push((t, t + dt));
        t += dt;
    }
    panels
}

pub(crate) fn eval(r: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0 && x < r);
    let t0 = (r / x).acosh();
    let reach = (std::f64::consts::FRAC_PI_2 * r + TAIL_NATS).max(r + 60.0);
    let t1 = (reach / x).acosh();
    let chi = |t: f64| x * t.sinh() - r * t;

    let mut panels = walk_panels(0.0, t0, 0.45, chi);
    panels.extend(walk_panels(t0, t1, 0.45, chi));
    let mut acc = 0.0;
    for (a, b) in panels {
        acc += gl_integrate_pub(a, b, 16, |t| chi(t).cos());
    }

    // Vertical leg: Re[i ∫_0^{s_cut} e^{iχ(T₁+is)} ds]
    //             = -∫ exp(rs - X sin s) sin(Y cos s - r T₁) ds,
    // X = x cosh T₁, Y = x sinh T₁.
    let big_x = x * t1.cosh();
    let big_y = x * t1.sinh();
    let envelope = |s: f64| r * s - big_x * s.sin();
    let mut s_cut = std::f64::consts::FRAC_PI_2;
    let mut s = 0.0;
    while s < std::f64::consts::FRAC_PI_2 {
        if envelope(s) < -(TAIL_NATS - 3.0) {
            s_cut = s;
            break;
        }
        s += 1e-3;
    }
    for (a, b) in walk_panels(0.0, s_cut, 0.3, |s| big_y * s.cos()) {
        acc -= gl_integrate_pub(a, b, 16, |s| {
            envelope(s).exp() * (big_y * s.cos() - r * t1).sin()
        });
    }
    acc
}
