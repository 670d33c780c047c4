//! Hejhal systems: exponentially-weighted automorphy conditions on a closed
//! horocycle, assembled into the matrices V and C.
//!
//! For a form f(z) = Σ_{n≥1} a_n √y κ(r, 2πny) cs(2πnx) (cs = cos for even
//! symmetry, sin for odd) automorphy tested at the sample points collapses,
//! via discrete orthogonality on the half-interval grid x_j = (j-1/2)/(2Q),
//! to
//!
//! ```text
//! a_m √y κ(r, 2πmy) ≈ Σ_n V_mn a_n,
//! V_mn = (2/Q) Σ_j √(y*_j) κ(r, 2πn y*_j) cs(2πn x*_j) cs(2πm x_j),
//! ```
//!
//! so C_mn = δ_mn - V_mn / (√y κ(r, 2πmy)) annihilates the coefficient
//! vector of a genuine form. Rows where the weight √y κ(r, 2πmy) is tiny
//! relative to the best row are dropped; they carry no information at this
//! height. Everything is real arithmetic throughout.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::besselk::{self, truncation_m, BesselError};
use crate::geometry::{self, GeometryError, HorocycleSample, UhpPoint, DOMAIN_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Even,
    Odd,
}

impl SymmetryClass {
    /// Basis function of the symmetry class at the given angle.
    #[inline]
    pub fn basis(self, angle: f64) -> f64 {
        match self {
            SymmetryClass::Even => angle.cos(),
            SymmetryClass::Odd => angle.sin(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SymmetryClass::Even => "even",
            SymmetryClass::Odd => "odd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "even" => Some(SymmetryClass::Even),
            "odd" => Some(SymmetryClass::Odd),
            _ => None,
        }
    }
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error)]
pub enum HejhalError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("horocycle height {y} unusable at r = {r}: all rows below the conditioning floor")]
    HeightUnusable { r: f64, y: f64 },
    #[error("degenerate system at r = {r} (relative rank gap {gap:.2e}); change the horocycle height")]
    DegenerateSystem { r: f64, gap: f64 },
    #[error("extension to m = {requested} exceeds the truncation bound {available} at y = {y}; use a smaller height")]
    ExtensionBeyondTruncation {
        requested: usize,
        available: usize,
        y: f64,
    },
    #[error("form with M0 = {m0} is not evaluable below y = {floor:.6}, got {y}")]
    NotEvaluable { m0: usize, floor: f64, y: f64 },
    #[error("spectral parameter must be positive and finite, got {r}")]
    InvalidSpectralParameter { r: f64 },
    #[error("need at least {needed} sample points, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
}

/// Assembly and solve parameters. Defaults implement the calibrated choices
/// described in the module docs; ε is the master expansion tolerance that
/// every residual threshold is expressed against.
#[derive(Debug, Clone, Copy)]
pub struct HejhalParams {
    /// Fourier tail tolerance ε.
    pub epsilon: f64,
    /// Sample sizes are chosen so aliasing stays below ε times this factor.
    pub alias_epsilon_factor: f64,
    /// Rows with |√y κ| below this fraction of the best row are dropped.
    pub row_floor_rel: f64,
    /// Row count target as a multiple of M0 (capped by the truncation bound
    /// at the sample height).
    pub row_factor: f64,
    /// Tail tolerance used for the evaluability floor of evaluate_form.
    pub eval_epsilon: f64,
    /// Extra sample points beyond the aliasing requirement.
    pub q_margin: usize,
}

impl Default for HejhalParams {
    fn default() -> Self {
        HejhalParams {
            epsilon: 1e-9,
            alias_epsilon_factor: 1e-3,
            row_floor_rel: 1e-3,
            row_factor: 1.5,
            eval_epsilon: 1e-7,
            q_margin: 8,
        }
    }
}

/// Calibrated primary horocycle height at spectral parameter r.
///
/// Two constraints pull against each other: taller horocycles need fewer
/// sample points, but the row weights √y κ(r, 2πmy) fall off exponentially
/// once 2πmy clears r, and at least M0 rows must survive the conditioning
/// floor. The first factor is the smooth 1/(r_ref + r) profile; the second
/// caps the height by the retention estimate (the decay exponent grows like
/// (x - r)^{3/2}/√r near the onset, so the usable margin scales like r^{1/3}).
pub fn default_height(r: f64, params: &HejhalParams) -> f64 {
    let m0 = truncation_m(r.abs().max(0.1), DOMAIN_FLOOR, params.epsilon)
        .map(|b| b.m)
        .unwrap_or(8);
    let profile = 0.85 * DOMAIN_FLOOR * 20.0 / (20.0 + r);
    let retention =
        0.85 * (r + 3.2 * r.max(1.0).cbrt()) / (2.0 * std::f64::consts::PI * m0 as f64);
    profile.min(retention).clamp(0.05, 0.8 * DOMAIN_FLOOR)
}

/// Heights for the y-independence re-checks, staggered below the primary.
pub fn verification_heights(primary: f64) -> [f64; 3] {
    [0.80 * primary, 0.87 * primary, 0.93 * primary]
}

/// Row/column/sample dimensions for a system at (r, y).
#[derive(Debug, Clone, Copy)]
pub struct SystemSizing {
    /// Coefficients kept: the truncation count at the domain floor Y0.
    pub m0: usize,
    /// Sample points on the half-interval.
    pub q: usize,
}

/// Dimension choice at (r, y): M0 from the truncation bound at the domain
/// floor, and Q large enough that grid aliases fall beyond the truncation
/// bound at the tighter aliasing tolerance.
///
/// The system is square at M0: a row at index m carries a_m √y κ(r, 2πmy)
/// on its diagonal, so rows beyond the column range would relate the kept
/// coefficients to coefficients outside the system; they define the
/// Phase-2 extension instead and contribute no constraint here.
pub fn size_system(r: f64, y: f64, params: &HejhalParams) -> Result<SystemSizing, HejhalError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(HejhalError::InvalidSpectralParameter { r });
    }
    let m0 = truncation_m(r, DOMAIN_FLOOR, params.epsilon)?.m;
    let my_alias = truncation_m(r, y, params.epsilon * params.alias_epsilon_factor)?.m;
    let q = (my_alias + m0).div_ceil(2) + params.q_margin;
    Ok(SystemSizing { m0, q })
}

/// An assembled system at one spectral parameter and height.
#[derive(Debug, Clone)]
pub struct HejhalSystem {
    pub r: f64,
    pub symmetry: SymmetryClass,
    pub y: f64,
    pub m0: usize,
    /// 1-based Fourier indices of the retained rows.
    pub rows: Vec<usize>,
    pub v: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

/// Weighted pullback table shared by every row of a system: entry (j, n) is
/// √(y*_j) κ(r, 2π n y*_j) cs(2πn x*_j).
fn pullback_table(
    r: f64,
    symmetry: SymmetryClass,
    sample: &HorocycleSample,
    m0: usize,
) -> DMatrix<f64> {
    let q = sample.q;
    let mut table = DMatrix::zeros(q, m0);
    for (j, w) in sample.pullbacks.iter().enumerate() {
        let sqrt_y = w.y.sqrt();
        for n in 1..=m0 {
            let kappa = besselk::kappa(r, 2.0 * std::f64::consts::PI * n as f64 * w.y);
            let angle = 2.0 * std::f64::consts::PI * n as f64 * w.x;
            table[(j, n - 1)] = sqrt_y * kappa * symmetry.basis(angle);
        }
    }
    table
}

/// Row weights √y κ(r, 2πmy) for m = 1..m_rows at the sample height.
pub(crate) fn row_weights(r: f64, y: f64, m_rows: usize) -> Vec<f64> {
    let sqrt_y = y.sqrt();
    (1..=m_rows)
        .map(|m| sqrt_y * besselk::kappa(r, 2.0 * std::f64::consts::PI * m as f64 * y))
        .collect()
}

/// Retained row indices: |weight| at least row_floor_rel times the best.
fn retained_rows(weights: &[f64], params: &HejhalParams) -> Vec<usize> {
    let best = weights.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w.abs() >= params.row_floor_rel * best)
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn build_system(
    r: f64,
    symmetry: SymmetryClass,
    sample: &HorocycleSample,
    m0: usize,
    params: &HejhalParams,
) -> Result<HejhalSystem, HejhalError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(HejhalError::InvalidSpectralParameter { r });
    }
    if sample.q < m0 {
        return Err(HejhalError::SampleTooSmall {
            needed: m0,
            got: sample.q,
        });
    }
    let weights = row_weights(r, sample.y, m0);
    let rows = retained_rows(&weights, params);
    // Allow at most one row lost to an oscillation zero of κ(r, 2πmy); the
    // solve still has as many equations as unknowns after pinning a_1.
    if rows.len() + 1 < m0 {
        return Err(HejhalError::HeightUnusable { r, y: sample.y });
    }
    let (v, c) = assemble_on_rows(r, symmetry, sample, m0, &rows, &weights);
    Ok(HejhalSystem {
        r,
        symmetry,
        y: sample.y,
        m0,
        rows,
        v,
        c,
    })
}

/// V and C restricted to the given rows, reusing precomputed row weights.
/// Split out so the eigenvalue derivative can rebuild C at shifted spectral
/// parameters on an identical sample and row set.
pub(crate) fn assemble_on_rows(
    r: f64,
    symmetry: SymmetryClass,
    sample: &HorocycleSample,
    m0: usize,
    rows: &[usize],
    weights: &[f64],
) -> (DMatrix<f64>, DMatrix<f64>) {
    let table = pullback_table(r, symmetry, sample, m0);
    let q = sample.q;
    // test-weight matrix: (row index, j) = cs(2πm x_j)
    let mut tests = DMatrix::zeros(rows.len(), q);
    for (ri, &m) in rows.iter().enumerate() {
        for j in 0..q {
            let angle = 2.0 * std::f64::consts::PI * m as f64 * sample.points[j].x;
            tests[(ri, j)] = symmetry.basis(angle);
        }
    }
    let mut v = tests * table;
    v *= 2.0 / q as f64;
    let mut c = DMatrix::zeros(rows.len(), m0);
    for (ri, &m) in rows.iter().enumerate() {
        let den = weights[m - 1];
        for n in 1..=m0 {
            let delta = if m == n { 1.0 } else { 0.0 };
            c[(ri, n - 1)] = delta - v[(ri, n - 1)] / den;
        }
    }
    (v, c)
}


/// A coefficient vector solved at one eigenvalue candidate, a_1 = 1.
#[derive(Debug, Clone)]
pub struct CuspFormCandidate {
    pub symmetry: SymmetryClass,
    pub r: f64,
    /// a_1..a_M0, with a_1 = 1 exactly.
    pub coefficients: Vec<f64>,
    pub residual_phase1: f64,
    pub residual_y_independence: f64,
    /// Horocycle height the Phase-1 solve used.
    pub solved_at_y: f64,
}

impl CuspFormCandidate {
    pub fn lambda(&self) -> f64 {
        self.r * self.r + 0.25
    }
}

/// Solve C a ≈ 0 with the normalisation a_1 = 1: move the first column to
/// the right-hand side and least-squares the rest. The relative gap between
/// extreme singular values guards against degenerate systems.
pub fn phase1_solve(system: &HejhalSystem) -> Result<CuspFormCandidate, HejhalError> {
    let rows = system.c.nrows();
    let m0 = system.m0;
    if m0 == 1 {
        let a = DVector::from_element(1, 1.0);
        let residual = (&system.c * &a).amax();
        return Ok(CuspFormCandidate {
            symmetry: system.symmetry,
            r: system.r,
            coefficients: vec![1.0],
            residual_phase1: residual,
            residual_y_independence: f64::NAN,
            solved_at_y: system.y,
        });
    }
    let reduced = system.c.columns(1, m0 - 1).clone_owned();
    let rhs = -system.c.column(0).clone_owned();
    let svd = reduced.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin < 1e-13 * smax {
        return Err(HejhalError::DegenerateSystem {
            r: system.r,
            gap: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let tail = svd.solve(&rhs, 0.0).expect("svd computed with u/v");
    let mut coefficients = Vec::with_capacity(m0);
    coefficients.push(1.0);
    coefficients.extend(tail.iter().copied());
    let a = DVector::from_column_slice(&coefficients);
    let residual = (&system.c * &a).amax();
    let _ = rows;
    Ok(CuspFormCandidate {
        symmetry: system.symmetry,
        r: system.r,
        coefficients,
        residual_phase1: residual,
        residual_y_independence: f64::NAN,
        solved_at_y: system.y,
    })
}

/// A coefficient obtained by the direct Phase-2 extension, with the a-priori
/// error bound 2ε / |√y κ(r, 2πmy)|.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedCoefficient {
    pub m: usize,
    pub value: f64,
    pub error_bound: f64,
}

/// Extend the coefficients of a solved candidate to indices M0+1..=m_max by
/// a_m = (Σ_n V_mn a_n) / (√y κ(r, 2πmy)) on a fresh sample at height `y`.
pub fn phase2_extend(
    candidate: &CuspFormCandidate,
    y: f64,
    m_max: usize,
    params: &HejhalParams,
) -> Result<Vec<ExtendedCoefficient>, HejhalError> {
    let m0 = candidate.coefficients.len();
    if m_max <= m0 {
        return Ok(Vec::new());
    }
    let available = truncation_m(candidate.r, y, params.epsilon)?.m;
    if m_max > available {
        return Err(HejhalError::ExtensionBeyondTruncation {
            requested: m_max,
            available,
            y,
        });
    }
    let my_alias = truncation_m(
        candidate.r,
        y,
        params.epsilon * params.alias_epsilon_factor,
    )?
    .m;
    let q = (my_alias + m_max).div_ceil(2) + params.q_margin;
    let sample = geometry::sample_horocycle(y, q)?;
    let weights = row_weights(candidate.r, y, m_max);
    let rows: Vec<usize> = (m0 + 1..=m_max).collect();
    let (v, _) = assemble_on_rows(candidate.r, candidate.symmetry, &sample, m0, &rows, &weights);
    let a = DVector::from_column_slice(&candidate.coefficients);
    let projected = v * a;
    let mut out = Vec::with_capacity(rows.len());
    for (i, &m) in rows.iter().enumerate() {
        let den = weights[m - 1];
        out.push(ExtendedCoefficient {
            m,
            value: projected[i] / den,
            error_bound: 2.0 * params.epsilon / den.abs(),
        });
    }
    Ok(out)
}

/// Height below which the truncated expansion of this candidate no longer
/// reaches the eval tail tolerance.
pub fn evaluability_floor(r: f64, m0: usize, eval_epsilon: f64) -> f64 {
    let reach = r
        + crate::besselk::TAIL_MARGIN_PER_LOG_EPS * (1.0 / eval_epsilon).ln()
        + crate::besselk::TAIL_MARGIN_FLAT;
    reach / (2.0 * std::f64::consts::PI * m0 as f64)
}

/// Evaluate the truncated expansion at a point with z.y above the
/// evaluability floor. Points lower in the cusp region should be pulled
/// back first.
pub fn evaluate_form(
    candidate: &CuspFormCandidate,
    z: UhpPoint,
    params: &HejhalParams,
) -> Result<f64, HejhalError> {
    let m0 = candidate.coefficients.len();
    let floor = evaluability_floor(candidate.r, m0, params.eval_epsilon);
    if z.y < floor {
        return Err(HejhalError::NotEvaluable { m0, floor, y: z.y });
    }
    let sqrt_y = z.y.sqrt();
    let mut acc = 0.0;
    for (idx, a) in candidate.coefficients.iter().enumerate() {
        let n = (idx + 1) as f64;
        let kappa = besselk::kappa(candidate.r, 2.0 * std::f64::consts::PI * n * z.y);
        acc += a * sqrt_y * kappa * candidate.symmetry.basis(2.0 * std::f64::consts::PI * n * z.x);
    }
    Ok(acc)
}

/// Re-evaluate ‖C(λ) a‖_∞ at other horocycle heights with the coefficients
/// held fixed. A formal solution that only solves the system at its own
/// height fails this; a genuine form passes at every height.
pub fn y_independence_check(
    candidate: &CuspFormCandidate,
    heights: &[f64],
    params: &HejhalParams,
) -> Result<f64, HejhalError> {
    let m0 = candidate.coefficients.len();
    let a = DVector::from_column_slice(&candidate.coefficients);
    let mut worst: f64 = 0.0;
    for &y in heights {
        let sizing = size_system(candidate.r, y, params)?;
        let sample = geometry::sample_horocycle(y, sizing.q.max(m0))?;
        let system = build_system(candidate.r, candidate.symmetry, &sample, m0, params)?;
        worst = worst.max((&system.c * &a).amax());
    }
    Ok(worst)
}
