//! Eigenvalue location by linearisation.
//!
//! At a trial value λ̃ the nonlinear problem C(λ) a ≈ 0 is replaced by the
//! matrix eigenproblem of −C′(λ̃)⁻¹ C(λ̃): each eigenvalue h is a candidate
//! shift with λ ≈ λ̃ + h. Shifts larger than the local trial spacing are
//! discarded, the survivors are refined by re-linearising at λ ← λ + Re h,
//! and a converged candidate is accepted only if its coefficient vector is
//! independent of the horocycle height. Everything that fails on the way is
//! a *rejection*, not an error: missed eigenvalues are the Turing audit's
//! job to catch.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{sample_horocycle, HorocycleSample, DOMAIN_FLOOR};
use crate::hejhal::{
    self, default_height, phase1_solve, verification_heights, CuspFormCandidate, HejhalError,
    HejhalParams, HejhalSystem, SymmetryClass,
};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Hejhal(#[from] HejhalError),
    #[error("C'(λ̃) too ill-conditioned (cond ≈ {cond:.2e}); shift the trial value or change y")]
    IllConditionedDerivative { cond: f64 },
    #[error("a conditioning-dropped row at this height prevents the square eigenproblem; change y")]
    RowsNotContiguous,
    #[error("trial grid requires 1/4 < λ_min < λ_max")]
    InvalidGrid,
}

/// Why a linearised solution did not become an accepted candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rejection {
    /// |h| exceeds the local trial spacing; a neighbouring trial owns it.
    TooFar,
    /// Shift did not contract below the refinement tolerance.
    NotConverged,
    /// Imaginary part of the shift stayed above tolerance.
    ComplexShift,
    /// Coefficients depend on the horocycle height: a formal solution.
    YDependent,
    /// Assembly or solve failed at this trial (bad height, degenerate rank).
    BuildFailed,
}

impl Rejection {
    pub fn tag(self) -> &'static str {
        match self {
            Rejection::TooFar => "too_far",
            Rejection::NotConverged => "not_converged",
            Rejection::ComplexShift => "complex_shift",
            Rejection::YDependent => "y_dependent",
            Rejection::BuildFailed => "build_failed",
        }
    }
}

/// Tunables for the search. Spacing deliberately under-resolves the mean
/// eigenvalue gap and leans on the Turing audit for completeness.
#[derive(Debug, Clone)]
pub struct SearchContext {
    pub params: HejhalParams,
    /// Finite-difference step in r-units for C'.
    pub fd_delta_r: f64,
    /// Convergence threshold on |h| in λ-units.
    pub refine_tol_lambda: f64,
    pub refine_max_iter: usize,
    /// Candidates closer than this in r (same symmetry) are duplicates.
    pub dedupe_tol_r: f64,
    /// Acceptance threshold for the y-independence residual.
    pub y_independence_tol: f64,
    /// Acceptance threshold for |Im h| at convergence, in λ-units.
    pub imag_tol_lambda: f64,
    /// Trial spacing Δr = max(spacing_floor_r, spacing_coeff / r).
    pub spacing_floor_r: f64,
    pub spacing_coeff: f64,
    /// Height multiplier, stepped by the control loop's retry schedule.
    pub y_multiplier: f64,
    /// Condition-number ceiling for the live block of C' when seeding
    /// shifts (coarse accuracy suffices there).
    pub cprime_cond_max: f64,
}

impl Default for SearchContext {
    fn default() -> Self {
        SearchContext {
            params: HejhalParams::default(),
            fd_delta_r: 1e-4,
            refine_tol_lambda: 1e-10,
            refine_max_iter: 12,
            dedupe_tol_r: 1e-7,
            y_independence_tol: 1e-6,
            imag_tol_lambda: 1e-7,
            spacing_floor_r: 0.02,
            spacing_coeff: 3.0,
            y_multiplier: 1.0,
            cprime_cond_max: 1e14,
        }
    }
}

impl SearchContext {
    pub fn height_for(&self, r: f64) -> f64 {
        (default_height(r, &self.params) * self.y_multiplier).clamp(0.05, 0.8 * DOMAIN_FLOOR)
    }

    pub fn spacing_r(&self, r: f64) -> f64 {
        self.spacing_floor_r.max(self.spacing_coeff / r.max(1.0))
    }

    pub fn spacing_lambda(&self, r: f64) -> f64 {
        2.0 * r.max(1.0) * self.spacing_r(r)
    }
}

pub fn r_of_lambda(lambda: f64) -> f64 {
    (lambda - 0.25).max(0.0).sqrt()
}

/// Trial values λ̃ on (1/4, ∞) for one symmetry class.
#[derive(Debug, Clone)]
pub struct TrialGrid {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub symmetry: SymmetryClass,
}

impl TrialGrid {
    pub fn new(lambda_min: f64, lambda_max: f64, symmetry: SymmetryClass) -> Result<Self, SearchError> {
        if !(lambda_min > 0.25) || !(lambda_max > lambda_min) {
            return Err(SearchError::InvalidGrid);
        }
        Ok(TrialGrid { lambda_min, lambda_max, symmetry })
    }

    /// Trial λ values walked with the context's r-spacing.
    pub fn trial_values(&self, ctx: &SearchContext) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = r_of_lambda(self.lambda_min).max(0.4);
        let r_hi = r_of_lambda(self.lambda_max);
        while r <= r_hi {
            out.push(r * r + 0.25);
            r += ctx.spacing_r(r);
        }
        out
    }
}

/// One eigenpair of −C′(λ̃)⁻¹C(λ̃) at a trial value.
#[derive(Debug, Clone)]
pub struct LinearisedSolution {
    pub trial_lambda: f64,
    pub h: Complex64,
    pub alpha: DVector<Complex64>,
}

/// System assembled at one λ, with the pieces needed to rebuild C at a
/// shifted λ on the identical sample and row set.
pub struct TrialAssembly {
    pub sample: HorocycleSample,
    pub system: HejhalSystem,
}

pub fn assemble_trial(
    lambda: f64,
    symmetry: SymmetryClass,
    ctx: &SearchContext,
) -> Result<TrialAssembly, HejhalError> {
    let r = r_of_lambda(lambda);
    let y = ctx.height_for(r);
    let sizing = hejhal::size_system(r, y, &ctx.params)?;
    let sample = sample_horocycle(y, sizing.q)?;
    let system = hejhal::build_system(r, symmetry, &sample, sizing.m0, &ctx.params)?;
    Ok(TrialAssembly { sample, system })
}

/// C(λ') on the fixed sample and row set of an existing assembly.
fn c_at(
    lambda: f64,
    symmetry: SymmetryClass,
    assembly: &TrialAssembly,
) -> DMatrix<f64> {
    let r = r_of_lambda(lambda);
    let weights = hejhal::row_weights(r, assembly.sample.y, assembly.system.m0);
    let (_, c) = hejhal::assemble_on_rows(
        r,
        symmetry,
        &assembly.sample,
        assembly.system.m0,
        &assembly.system.rows,
        &weights,
    );
    c
}

/// Central finite difference of C in λ, on a fixed sample and row set.
/// The stencil is symmetric, so the same matrix comes back for ±δ.
pub fn derivative_c(
    lambda: f64,
    symmetry: SymmetryClass,
    assembly: &TrialAssembly,
    delta_lambda: f64,
) -> DMatrix<f64> {
    let plus = c_at(lambda + delta_lambda, symmetry, assembly);
    let minus = c_at(lambda - delta_lambda, symmetry, assembly);
    (plus - minus) / (2.0 * delta_lambda)
}

fn fd_step(lambda: f64, ctx: &SearchContext) -> f64 {
    2.0 * r_of_lambda(lambda).max(1.0) * ctx.fd_delta_r
}

/// Eigen-shifts of −C′⁻¹C at λ̃, with eigenvectors by inverse iteration.
/// No filtering happens here; the full spectrum comes back.
pub fn linearised_solutions(
    trial_lambda: f64,
    symmetry: SymmetryClass,
    ctx: &SearchContext,
) -> Result<Vec<LinearisedSolution>, SearchError> {
    let assembly = assemble_trial(trial_lambda, symmetry, ctx)?;
    shifts_at(trial_lambda, symmetry, &assembly, ctx, true)
}

/// Index count of the numerically live columns of C'. The Fourier tail
/// makes trailing columns of both V and its λ-derivative decay like the
/// truncation tolerance, so C' always has an ε-dead tail block; those
/// columns pair with pure-identity rows of C and factor out of the pencil
/// det(C + hC') with effectively infinite shifts.
fn live_dimension(cp: &DMatrix<f64>) -> usize {
    let mut max_norm = 0.0f64;
    let mut norms = Vec::with_capacity(cp.ncols());
    for j in 0..cp.ncols() {
        let n = cp.column(j).norm();
        norms.push(n);
        max_norm = max_norm.max(n);
    }
    let mut k = 1;
    for (j, n) in norms.iter().enumerate() {
        if *n >= 3e-8 * max_norm {
            k = j + 1;
        }
    }
    k
}

/// Newton step for det C(λ) = 0: h = -1 / trace(C(λ)⁻¹ C'(λ)). Refinement
/// drives λ with this scalar shift; unlike the explicit -C'⁻¹C eigenproblem
/// it needs no inversion of the tail-degenerate derivative, so its noise
/// floor sits at the matrix-entry level (~1e-14 in λ) instead of ~ε⁻¹·eps.
fn determinant_newton_step(
    lambda: f64,
    symmetry: SymmetryClass,
    assembly: &TrialAssembly,
    ctx: &SearchContext,
) -> Option<f64> {
    let c = c_at(lambda, symmetry, assembly);
    let cp = derivative_c(lambda, symmetry, assembly, fd_step(lambda, ctx));
    let lu = c.lu();
    let x = lu.solve(&cp)?;
    let trace = x.trace();
    if !trace.is_finite() {
        return Some(0.0);
    }
    Some(-1.0 / trace)
}

/// Shifts at λ on an existing assembly; optionally with eigenvectors.
///
/// The full spectrum is reported: the live block contributes its matrix
/// eigenvalues; dead tail directions are reported with infinite shift (they
/// fail every downstream filter, as they should).
fn shifts_at(
    lambda: f64,
    symmetry: SymmetryClass,
    assembly: &TrialAssembly,
    ctx: &SearchContext,
    with_vectors: bool,
) -> Result<Vec<LinearisedSolution>, SearchError> {
    let m0 = assembly.system.m0;
    if assembly.system.rows.len() != m0 {
        return Err(SearchError::RowsNotContiguous);
    }
    let c = c_at(lambda, symmetry, assembly);
    let cp = derivative_c(lambda, symmetry, assembly, fd_step(lambda, ctx));

    let k = live_dimension(&cp);
    let cp_live = cp.view((0, 0), (k, k)).clone_owned();
    let c_live = c.view((0, 0), (k, k)).clone_owned();

    let svd = cp_live.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > ctx.cprime_cond_max {
        return Err(SearchError::IllConditionedDerivative {
            cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
        });
    }

    let lu = cp_live.lu();
    let solved = lu.solve(&c_live).ok_or(SearchError::IllConditionedDerivative {
        cond: f64::INFINITY,
    })?;
    let a = -solved;
    let eigenvalues = a.clone().complex_eigenvalues();

    let a_complex = a.map(|v| Complex64::new(v, 0.0));
    let mut out = Vec::with_capacity(m0);
    for h in eigenvalues.iter() {
        let alpha = if with_vectors {
            let live = inverse_iteration(&a_complex, *h);
            // slave the tail components through the identity rows of C
            let mut full = DVector::from_element(m0, Complex64::new(0.0, 0.0));
            for i in 0..k {
                full[i] = live[i];
            }
            for n in k..m0 {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..k {
                    acc += Complex64::new(c[(n, j)], 0.0) * live[j];
                }
                full[n] = -acc;
            }
            full
        } else {
            DVector::zeros(0)
        };
        out.push(LinearisedSolution {
            trial_lambda: lambda,
            h: *h,
            alpha,
        });
    }
    for _ in k..m0 {
        out.push(LinearisedSolution {
            trial_lambda: lambda,
            h: Complex64::new(f64::INFINITY, 0.0),
            alpha: DVector::zeros(if with_vectors { m0 } else { 0 }),
        });
    }
    Ok(out)
}

/// Two rounds of inverse iteration at a slightly de-tuned shift.
fn inverse_iteration(a: &DMatrix<Complex64>, h: Complex64) -> DVector<Complex64> {
    let n = a.nrows();
    let detune = Complex64::new(1e-10 * (1.0 + h.norm()), 1e-12);
    let shifted = a - DMatrix::<Complex64>::identity(n, n) * (h + detune);
    let lu = shifted.lu();
    let mut v = DVector::from_element(n, Complex64::new(1.0, 0.0));
    for _ in 0..2 {
        if let Some(next) = lu.solve(&v) {
            let norm = next.norm();
            if norm.is_finite() && norm > 0.0 {
                v = next / Complex64::new(norm, 0.0);
            }
        }
    }
    v
}

/// Refine one linearised solution into an accepted candidate, or reject.
pub fn refine(
    solution: &LinearisedSolution,
    symmetry: SymmetryClass,
    ctx: &SearchContext,
) -> Result<CuspFormCandidate, Rejection> {
    let seed_r = r_of_lambda(solution.trial_lambda);
    let spacing = ctx.spacing_lambda(seed_r);
    if solution.h.norm() > spacing {
        return Err(Rejection::TooFar);
    }
    let mut lambda = solution.trial_lambda + solution.h.re;
    let mut converged = false;
    let mut final_assembly = None;
    for _ in 0..ctx.refine_max_iter {
        if (lambda - solution.trial_lambda).abs() > 2.0 * spacing || lambda <= 0.2506 {
            return Err(Rejection::TooFar);
        }
        let assembly = match assemble_trial(lambda, symmetry, ctx) {
            Ok(a) => a,
            Err(_) => return Err(Rejection::BuildFailed),
        };
        let Some(step) = determinant_newton_step(lambda, symmetry, &assembly, ctx) else {
            return Err(Rejection::BuildFailed);
        };
        lambda += step;
        if step.abs() < ctx.refine_tol_lambda {
            converged = true;
            final_assembly = Some(assembly);
            break;
        }
    }
    if !converged {
        return Err(Rejection::NotConverged);
    }
    // The determinant iteration walks the real λ axis; a conjugate pair of
    // formal solutions shows up as a residual imaginary part in the nearest
    // eigen-shift at the converged point.
    let probe = final_assembly.expect("assembly stored at convergence");
    if let Ok(shifts) = shifts_at(lambda, symmetry, &probe, ctx, false) {
        if let Some(nearest) = shifts
            .iter()
            .min_by(|a, b| a.h.norm().partial_cmp(&b.h.norm()).unwrap())
        {
            if nearest.h.im.abs() > ctx.imag_tol_lambda + 1e-7 {
                return Err(Rejection::ComplexShift);
            }
        }
    }

    let assembly = match assemble_trial(lambda, symmetry, ctx) {
        Ok(a) => a,
        Err(_) => return Err(Rejection::BuildFailed),
    };
    let mut candidate = match phase1_solve(&assembly.system) {
        Ok(c) => c,
        Err(_) => return Err(Rejection::BuildFailed),
    };
    let heights = verification_heights(ctx.height_for(candidate.r));
    let y_res = match hejhal::y_independence_check(&candidate, &heights, &ctx.params) {
        Ok(res) => res,
        Err(_) => return Err(Rejection::BuildFailed),
    };
    if y_res > ctx.y_independence_tol {
        return Err(Rejection::YDependent);
    }
    candidate.residual_y_independence = y_res;
    Ok(candidate)
}

/// Outcome of scanning a set of trial values.
#[derive(Debug, Default)]
pub struct ScanReport {
    pub candidates: Vec<CuspFormCandidate>,
    pub trials: usize,
    pub rejections: BTreeMap<&'static str, usize>,
}

/// Scan explicit trial λ values (the control loop drives this directly).
/// Trials run in parallel; the merge is order-independent: candidates are
/// sorted before deduplication, so worker scheduling cannot change output.
pub fn scan_trials(
    trial_lambdas: &[f64],
    symmetry: SymmetryClass,
    ctx: &SearchContext,
) -> ScanReport {
    let per_trial: Vec<(Vec<CuspFormCandidate>, Vec<&'static str>)> = trial_lambdas
        .par_iter()
        .map(|&lambda| {
            let mut found = Vec::new();
            let mut rejected = Vec::new();
            match linearised_solutions(lambda, symmetry, ctx) {
                Err(_) => rejected.push("assembly_failed"),
                Ok(solutions) => {
                    let spacing = ctx.spacing_lambda(r_of_lambda(lambda));
                    for solution in &solutions {
                        if solution.h.norm() > spacing {
                            continue;
                        }
                        match refine(solution, symmetry, ctx) {
                            Ok(c) => found.push(c),
                            Err(reason) => rejected.push(reason.tag()),
                        }
                    }
                }
            }
            (found, rejected)
        })
        .collect();

    let mut report = ScanReport {
        trials: trial_lambdas.len(),
        ..Default::default()
    };
    let mut all: Vec<CuspFormCandidate> = Vec::new();
    for (found, rejected) in per_trial {
        all.extend(found);
        for tag in rejected {
            *report.rejections.entry(tag).or_insert(0) += 1;
        }
    }
    report.candidates = dedupe_candidates(all, ctx.dedupe_tol_r);
    report
}

/// Scan a grid range for one symmetry class.
pub fn scan(grid: &TrialGrid, ctx: &SearchContext) -> ScanReport {
    let trials = grid.trial_values(ctx);
    scan_trials(&trials, grid.symmetry, ctx)
}

/// Sort by r and collapse clusters within the tolerance, keeping the member
/// with the smallest Phase-1 residual (deterministic regardless of input
/// order).
pub fn dedupe_candidates(mut all: Vec<CuspFormCandidate>, tol_r: f64) -> Vec<CuspFormCandidate> {
    all.sort_by(|a, b| {
        (a.r, a.residual_phase1)
            .partial_cmp(&(b.r, b.residual_phase1))
            .unwrap()
    });
    let mut out: Vec<CuspFormCandidate> = Vec::new();
    for cand in all {
        match out.last_mut() {
            Some(last) if cand.symmetry == last.symmetry && (cand.r - last.r).abs() < tol_r => {
                if cand.residual_phase1 < last.residual_phase1 {
                    *last = cand;
                }
            }
            _ => out.push(cand),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_ODD: f64 = 9.5336952613536;

    #[test]
    fn derivative_is_richardson_consistent() {
        let ctx = SearchContext::default();
        let lambda = FIRST_ODD * FIRST_ODD + 0.25 + 0.8;
        let assembly = assemble_trial(lambda, SymmetryClass::Odd, &ctx).unwrap();
        let base = fd_step(lambda, &ctx);
        let d1 = derivative_c(lambda, SymmetryClass::Odd, &assembly, base);
        let d2 = derivative_c(lambda, SymmetryClass::Odd, &assembly, base / 2.0);
        let d4 = derivative_c(lambda, SymmetryClass::Odd, &assembly, base / 4.0);
        let e1 = (&d1 - &d2).amax();
        let e2 = (&d2 - &d4).amax();
        // central differences: halving δ divides the O(δ²) error by 4
        let ratio = e1 / e2;
        assert!(
            (2.5..6.0).contains(&ratio),
            "Richardson ratio {ratio} (e1={e1:.3e}, e2={e2:.3e})"
        );
    }

    #[test]
    fn derivative_condition_guard_trips() {
        let mut ctx = SearchContext::default();
        ctx.cprime_cond_max = 1.0 + 1e-9;
        let lambda = 80.0;
        match linearised_solutions(lambda, SymmetryClass::Odd, &ctx) {
            Err(SearchError::IllConditionedDerivative { .. }) => {}
            other => panic!("expected the condition guard, got {other:?}"),
        }
    }

    #[test]
    fn full_spectrum_size_and_positive_control() {
        let ctx = SearchContext::default();
        let lambda = FIRST_ODD * FIRST_ODD + 0.25 - 0.4; // near but off
        let sols = linearised_solutions(lambda, SymmetryClass::Odd, &ctx).unwrap();
        // full spectrum: one shift per column
        let assembly = assemble_trial(lambda, SymmetryClass::Odd, &ctx).unwrap();
        assert_eq!(sols.len(), assembly.system.m0);
        let min_h = sols.iter().map(|s| s.h.norm()).fold(f64::INFINITY, f64::min);
        assert!(
            min_h < ctx.spacing_lambda(r_of_lambda(lambda)),
            "no shift within spacing near a true eigenvalue: min |h| = {min_h:.3e}"
        );
    }

    #[test]
    fn refine_converges_to_first_odd_eigenvalue() {
        let ctx = SearchContext::default();
        let lambda = 9.53f64 * 9.53 + 0.25;
        let sols = linearised_solutions(lambda, SymmetryClass::Odd, &ctx).unwrap();
        let best = sols
            .iter()
            .min_by(|a, b| a.h.norm().partial_cmp(&b.h.norm()).unwrap())
            .unwrap();
        let candidate = refine(best, SymmetryClass::Odd, &ctx).unwrap();
        assert!(
            (candidate.r - FIRST_ODD).abs() < 1e-7,
            "converged to r = {}",
            candidate.r
        );
        assert!(candidate.residual_y_independence < ctx.y_independence_tol);
    }

    #[test]
    fn gap_trial_yields_no_accepted_candidate() {
        let ctx = SearchContext::default();
        // the odd spectrum has no eigenvalue near r = 10.8
        let lambda = 10.8f64 * 10.8 + 0.25;
        let sols = linearised_solutions(lambda, SymmetryClass::Odd, &ctx).unwrap();
        let spacing = ctx.spacing_lambda(10.8);
        for sol in &sols {
            if sol.h.norm() <= spacing {
                assert!(
                    refine(sol, SymmetryClass::Odd, &ctx).is_err(),
                    "gap trial accepted a candidate at shift {}",
                    sol.h
                );
            }
        }
    }

    #[test]
    fn scan_finds_exactly_the_first_odd_form_below_ten() {
        let ctx = SearchContext::default();
        let grid = TrialGrid::new(0.25 + 81.0, 0.25 + 100.0, SymmetryClass::Odd).unwrap();
        let report = scan(&grid, &ctx);
        assert_eq!(
            report.candidates.len(),
            1,
            "expected exactly one odd form with 9 < r < 10, got {:?}",
            report.candidates.iter().map(|c| c.r).collect::<Vec<_>>()
        );
        assert!((report.candidates[0].r - FIRST_ODD).abs() < 1e-7);
    }

    #[test]
    fn empty_range_scans_to_nothing() {
        let ctx = SearchContext::default();
        let report = scan_trials(&[], SymmetryClass::Even, &ctx);
        assert!(report.candidates.is_empty());
        assert_eq!(report.trials, 0);
    }

    #[test]
    fn adjacent_trials_converge_to_the_same_eigenvalue() {
        let ctx = SearchContext::default();
        let mut found = Vec::new();
        for seed in [9.50f64, 9.56] {
            let lambda = seed * seed + 0.25;
            let sols = linearised_solutions(lambda, SymmetryClass::Odd, &ctx).unwrap();
            let best = sols
                .iter()
                .min_by(|a, b| a.h.norm().partial_cmp(&b.h.norm()).unwrap())
                .unwrap()
                .clone();
            if let Ok(c) = refine(&best, SymmetryClass::Odd, &ctx) {
                found.push(c.r);
            }
        }
        assert_eq!(found.len(), 2);
        let dr = (found[0] - found[1]).abs();
        // both in λ-units within 2·refine_tol, generous in r
        assert!(dr < 1e-8, "adjacent refinements disagree by {dr:.3e}");
    }

    #[test]
    fn invalid_grid_is_rejected() {
        assert!(TrialGrid::new(0.1, 50.0, SymmetryClass::Even).is_err());
        assert!(TrialGrid::new(90.0, 50.0, SymmetryClass::Even).is_err());
    }
}
