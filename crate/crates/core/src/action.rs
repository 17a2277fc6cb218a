//! Hamilton–Jacobi separation and action variables.
//!
//! With `p_v = l` and `p_ψ = s` conserved, the `u` motion is governed by
//!
//! ```text
//! p_u² = R(u) = 2 m r² (E - V(u)) / cosh 2u - l² + 2 tanh 2u · l s
//!               - (m r² / (I cosh 2u) + tanh² 2u) s²
//! ```
//!
//! and the actions are `J_u = ∮ p_u du`, `J_v = 2π l`, `J_ψ = 2π s`.
//!
//! Two routes to `J_u` live here. [`action_ju_quadrature`] integrates the
//! radicand between its turning points. [`closed_form_ju`] evaluates the
//! energy-free relation obtained from the residues of
//! `f(z) = -sqrt(P(z)) / ((1 - z)(1 + z)(i - z)(i + z))`, where `P` is the
//! radicand rewritten in `x = tanh u`. The two do not agree in general; the
//! [`crate::verify`] module reports the discrepancy.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::PotentialModel;
use crate::error::{Error, Result};
use crate::geometry::BalloonParams;
use crate::quadrature::{integrate_adaptive, QuadratureControls};

/// Energy `E` and the cyclic momenta `l = p_v`, `s = p_ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionConstants {
    pub energy: f64,
    pub l: f64,
    pub s: f64,
}

impl MotionConstants {
    pub fn new(energy: f64, l: f64, s: f64) -> Self {
        Self { energy, l, s }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.energy, self.l, self.s].iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter("motion constants must be finite".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionTriple {
    pub j_u: f64,
    pub j_v: f64,
    pub j_psi: f64,
}

/// The u-radicand `R(u)`; negative values mark classically forbidden `u`.
pub fn radicand_u(u: f64, c: &MotionConstants, model: &PotentialModel, params: &BalloonParams) -> f64 {
    let mr2 = params.mr2();
    let sech = 1.0 / (2.0 * u).cosh();
    let t = (2.0 * u).tanh();
    2.0 * mr2 * sech * (c.energy - model.eval(u)) - c.l * c.l + 2.0 * t * c.l * c.s
        - (mr2 * sech / params.inertia + t * t) * c.s * c.s
}

fn radicand_scale(c: &MotionConstants, model: &PotentialModel, params: &BalloonParams) -> f64 {
    let mr2 = params.mr2();
    (2.0 * mr2 * (c.energy.abs() + model.scale())
        + c.l * c.l
        + c.s * c.s * (1.0 + mr2 / params.inertia))
        .max(f64::MIN_POSITIVE)
}

/// Bounds of the turning-point search.
pub const U_SEARCH_LIMIT: f64 = 40.0;
const GRID_HALF: usize = 1500;
const GRID_SMALLEST: f64 = 1e-8;
/// Bisection stops once the bracket is this narrow.
pub const TURNING_POINT_TOL: f64 = 1e-13;
/// `|R| <= DEGENERATE_TOL * scale` at the maximum means a degenerate orbit.
pub const DEGENERATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    pub u_min: f64,
    pub u_max: f64,
}

impl TurningPoints {
    pub fn is_degenerate(&self) -> bool {
        self.u_min == self.u_max
    }
}

fn search_grid(seed: Option<f64>) -> Vec<f64> {
    let span = (U_SEARCH_LIMIT / GRID_SMALLEST).ln();
    let pos: Vec<f64> = (0..GRID_HALF)
        .map(|k| GRID_SMALLEST * (span * k as f64 / (GRID_HALF - 1) as f64).exp())
        .collect();
    let mut grid: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    grid.push(0.0);
    grid.extend(pos);
    if let Some(s) = seed {
        grid.push(s.clamp(-U_SEARCH_LIMIT, U_SEARCH_LIMIT));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    grid
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 { (x1, f1) } else { (x2, f2) }
}

/// Root of `f` between `outside` (f <= 0) and `inside` (f > 0).
fn bisect<F: Fn(f64) -> f64>(f: &F, mut outside: f64, mut inside: f64) -> f64 {
    for _ in 0..300 {
        if (inside - outside).abs() <= TURNING_POINT_TOL {
            break;
        }
        let mid = 0.5 * (outside + inside);
        if mid == outside || mid == inside {
            break;
        }
        if f(mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (outside + inside)
}

/// Turning points of the unique allowed interval.
pub fn turning_points(c: &MotionConstants, model: &PotentialModel, params: &BalloonParams) -> Result<TurningPoints> {
    turning_points_seeded(c, model, params, None)
}

/// Turning points of the allowed interval containing `seed`, or of the unique
/// one when no seed is given.
pub fn turning_points_seeded(
    c: &MotionConstants,
    model: &PotentialModel,
    params: &BalloonParams,
    seed: Option<f64>,
) -> Result<TurningPoints> {
    params.validate()?;
    model.validate_finite()?;
    c.validate()?;
    if let Some(s) = seed {
        if !s.is_finite() {
            return Err(Error::InvalidParameter("seed must be finite".into()));
        }
    }
    let f = |u: f64| radicand_u(u, c, model, params);
    let scale = radicand_scale(c, model, params);
    let tol = DEGENERATE_TOL * scale;

    let mut pts: Vec<(f64, f64)> = search_grid(seed).into_iter().map(|u| (u, f(u))).collect();

    // refine the maximum of the relevant region (near the seed if one is given)
    let anchor = match seed {
        Some(s) => {
            let i = pts.partition_point(|p| p.0 < s).min(pts.len() - 1);
            // climb to the local maximum on the grid
            let mut i = i;
            loop {
                let left = if i > 0 { pts[i - 1].1 } else { f64::NEG_INFINITY };
                let right = if i + 1 < pts.len() { pts[i + 1].1 } else { f64::NEG_INFINITY };
                if left > pts[i].1 && left >= right {
                    i -= 1;
                } else if right > pts[i].1 {
                    i += 1;
                } else {
                    break;
                }
            }
            i
        }
        None => (0..pts.len()).max_by(|&a, &b| pts[a].1.total_cmp(&pts[b].1)).unwrap_or(0),
    };
    let lo = pts[anchor.saturating_sub(1)].0;
    let hi = pts[(anchor + 1).min(pts.len() - 1)].0;
    let (u_peak, r_peak) = golden_max(&f, lo, hi);
    let (u_peak, r_peak) = if r_peak >= pts[anchor].1 { (u_peak, r_peak) } else { pts[anchor] };

    if r_peak < -tol {
        return Err(Error::NoClassicalMotion);
    }
    if r_peak <= tol {
        return Ok(TurningPoints { u_min: u_peak, u_max: u_peak });
    }
    if pts.iter().all(|p| p.0 != u_peak) {
        let at = pts.partition_point(|p| p.0 < u_peak);
        pts.insert(at, (u_peak, r_peak));
    }

    // maximal runs of grid points with R > 0
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < pts.len() {
        if pts[i].1 > 0.0 {
            let start = i;
            while i + 1 < pts.len() && pts[i + 1].1 > 0.0 {
                i += 1;
            }
            runs.push((start, i));
        }
        i += 1;
    }
    let target = match seed {
        Some(s) => {
            let found = runs.iter().copied().find(|&(a, b)| pts[a].0 <= s && s <= pts[b].0);
            match found {
                Some(run) => run,
                None => return Err(Error::NoClassicalMotion),
            }
        }
        None => {
            if runs.len() > 1 {
                return Err(Error::MultipleWells { count: runs.len() });
            }
            runs[0]
        }
    };
    let (a, b) = target;
    // R underflows to zero towards a pole the motion can reach
    let open_left = pts[..a].iter().all(|p| p.1 > -tol);
    let open_right = pts[b + 1..].iter().all(|p| p.1 > -tol);
    if open_left || open_right {
        return Err(Error::UnboundedMotion { limit: U_SEARCH_LIMIT });
    }
    let u_min = bisect(&f, pts[a - 1].0, pts[a].0);
    let u_max = bisect(&f, pts[b + 1].0, pts[b].0);
    Ok(TurningPoints { u_min, u_max })
}

/// `J_u` with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionQuadrature {
    pub j_u: f64,
    pub error: f64,
    pub turning_points: TurningPoints,
}

/// `J_u = 2 ∫ sqrt(R(u)) du` between the turning points, using the default controls.
pub fn action_ju_quadrature(c: &MotionConstants, model: &PotentialModel, params: &BalloonParams) -> Result<f64> {
    action_ju_quadrature_with(c, model, params, None, &QuadratureControls::default()).map(|a| a.j_u)
}

/// `J_u` for the well selected by `seed`.
///
/// The substitution `u = u_min + (u_max - u_min) sin²θ` cancels the square-root
/// zeros at both turning points, leaving a smooth integrand on `[0, π/2]`.
pub fn action_ju_quadrature_with(
    c: &MotionConstants,
    model: &PotentialModel,
    params: &BalloonParams,
    seed: Option<f64>,
    controls: &QuadratureControls,
) -> Result<ActionQuadrature> {
    let tp = turning_points_seeded(c, model, params, seed)?;
    if tp.is_degenerate() {
        return Ok(ActionQuadrature { j_u: 0.0, error: 0.0, turning_points: tp });
    }
    let width = tp.u_max - tp.u_min;
    let integrand = |theta: f64| {
        let s = theta.sin();
        let u = tp.u_min + width * s * s;
        radicand_u(u, c, model, params).max(0.0).sqrt() * width * (2.0 * theta).sin()
    };
    let q = integrate_adaptive(&integrand, 0.0, FRAC_PI_2, controls)?;
    Ok(ActionQuadrature { j_u: 2.0 * q.value, error: 2.0 * q.error, turning_points: tp })
}

/// Period of the u-libration, `T = ∂J_u/∂E = 2 m r² ∫ sech(2u) / sqrt(R(u)) du`.
///
/// The inverse square root is evaluated through the polynomial form with both
/// turning points divided out, so the θ-integrand stays smooth even though the
/// turning points carry rounding error. `None` for a degenerate orbit.
pub fn libration_period(
    c: &MotionConstants,
    model: &PotentialModel,
    params: &BalloonParams,
    seed: Option<f64>,
    controls: &QuadratureControls,
) -> Result<Option<f64>> {
    let tp = turning_points_seeded(c, model, params, seed)?;
    if tp.is_degenerate() {
        return Ok(None);
    }
    let (a, b) = (tp.u_min, tp.u_max);
    let width = b - a;
    let mr2 = params.mr2();
    let poly = poly_coefficients(c, model, params);
    let quotient = deflate(&deflate(&poly.coefficients, a.tanh()), b.tanh());
    let ends = (a.cosh() * b.cosh()).sqrt();
    let integrand = |theta: f64| {
        let (s, co) = theta.sin_cos();
        let u = a + width * s * s;
        let x = u.tanh();
        // P(x) = (x - x_a)(x - x_b) Q(x), with Q < 0 inside the well
        let q = -quotient.iter().fold(0.0, |acc, k| acc * x + k);
        if q <= 0.0 {
            return 0.0;
        }
        let h = sinhc(width * s * s) * sinhc(width * co * co);
        2.0 * mr2 * (1.0 + x * x) * u.cosh() * ends / ((2.0 * u).cosh() * (h * q).sqrt())
    };
    let q = integrate_adaptive(&integrand, 0.0, FRAC_PI_2, controls)?;
    Ok(Some(2.0 * q.value))
}

/// Quotient of the synthetic division of `coefficients` (highest degree first) by `x - root`.
fn deflate(coefficients: &[f64], root: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(coefficients.len() - 1);
    let mut acc = 0.0;
    for &k in &coefficients[..coefficients.len() - 1] {
        acc = acc * root + k;
        out.push(acc);
    }
    out
}

fn sinhc(y: f64) -> f64 {
    if y.abs() < 1e-8 { 1.0 + y * y / 6.0 } else { y.sinh() / y }
}

/// `(J_v, J_ψ) = (2π l, 2π s)`.
pub fn actions_cyclic(c: &MotionConstants) -> (f64, f64) {
    (TAU * c.l, TAU * c.s)
}

/// Polynomial under the square root after `x = tanh u`:
/// `sqrt(R(u)) du = sqrt(P(x)) dx / (1 - x⁴)`.
///
/// Coefficients are stored highest degree first, matching the lettering
/// `a, b, c, …` of the quartic, sextic and octic forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadicandPoly {
    pub coefficients: Vec<f64>,
}

impl RadicandPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// The denominator `(1 - z)(1 + z)(i - z)(i + z) = z⁴ - 1`.
    pub fn denominator(z: Complex64) -> Complex64 {
        (1.0 - z) * (1.0 + z) * (Complex64::i() - z) * (Complex64::i() + z)
    }

    /// `f(z) = -sqrt(P(z)) / ((1 - z)(1 + z)(i - z)(i + z))` on the principal branch.
    pub fn integrand(&self, z: Complex64) -> Complex64 {
        -self.eval_complex(z).sqrt() / Self::denominator(z)
    }
}

fn hj_abc(c: &MotionConstants, params: &BalloonParams) -> (f64, f64, f64) {
    let mr2 = params.mr2();
    let a = mr2 * (2.0 * c.energy - c.s * c.s / params.inertia);
    // B = J_ψ / 2π = s, C = J_v / 2π = l
    (a, c.s, c.l)
}

/// Coefficients of the radicand polynomial for the given model.
pub fn poly_coefficients(c: &MotionConstants, model: &PotentialModel, params: &BalloonParams) -> RadicandPoly {
    let (a_big, b_big, c_big) = hj_abc(c, params);
    let mr2 = params.mr2();
    let lead = -a_big - c_big * c_big;
    let cross = 4.0 * b_big * c_big;
    let mid = -4.0 * b_big * b_big - 2.0 * c_big * c_big;
    let constant = a_big - c_big * c_big;
    let coefficients = match *model {
        PotentialModel::Geodetic => vec![lead, cross, mid, cross, constant],
        PotentialModel::Harmonic { kappa } => {
            let k = kappa * mr2;
            vec![k, 0.0, lead, cross, mid - k, cross, constant]
        }
        PotentialModel::Anharmonic { alpha, beta, gamma, delta } => {
            let (a2, b2, g2, d2) = (2.0 * alpha * mr2, 2.0 * beta * mr2, 2.0 * gamma * mr2, 2.0 * delta * mr2);
            vec![a2, b2, g2, d2, lead - a2, cross - b2, mid - g2, cross - d2, constant]
        }
    };
    RadicandPoly { coefficients }
}

/// Residues at `1, -1, i, -i, ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residues {
    pub at_plus_one: Complex64,
    pub at_minus_one: Complex64,
    pub at_i: Complex64,
    pub at_minus_i: Complex64,
    pub at_infinity: Complex64,
}

impl Residues {
    pub fn sum(&self) -> Complex64 {
        self.at_plus_one + self.at_minus_one + self.at_i + self.at_minus_i + self.at_infinity
    }

    /// `-2πi Σ Res`, the contour integral around the cut.
    pub fn contour_integral(&self) -> Complex64 {
        -2.0 * PI * Complex64::i() * self.sum()
    }

    pub fn as_array(&self) -> [Complex64; 5] {
        [self.at_plus_one, self.at_minus_one, self.at_i, self.at_minus_i, self.at_infinity]
    }
}

fn expected_degree(model: &PotentialModel) -> usize {
    match model {
        PotentialModel::Geodetic => 4,
        PotentialModel::Harmonic { .. } => 6,
        PotentialModel::Anharmonic { .. } => 8,
    }
}

fn require_positive_alpha(model: &PotentialModel) -> Result<()> {
    if let PotentialModel::Anharmonic { alpha, .. } = *model {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "residue at infinity needs alpha > 0, got {alpha}"
            )));
        }
    }
    Ok(())
}

/// Residues evaluated from the polynomial: `∓(i/4) sqrt|P(±1)|` at `±1`,
/// `(i/4) sqrt|P(±i)|` at `±i`, and at infinity `0`, `i sqrt|a|` or
/// `(i/2)|b|/sqrt|a|` for the quartic, sextic and octic radicands.
pub fn residues(model: &PotentialModel, poly: &RadicandPoly) -> Result<Residues> {
    require_positive_alpha(model)?;
    let degree = expected_degree(model);
    if poly.degree() != degree {
        return Err(Error::InvalidParameter(format!(
            "{} model needs a degree-{degree} radicand, got degree {}",
            model.name(),
            poly.degree()
        )));
    }
    let i = Complex64::i();
    let quarter_root = |z: Complex64| 0.25 * poly.eval_complex(z).norm().sqrt();
    let coeffs = &poly.coefficients;
    let at_infinity = match degree {
        4 => Complex64::new(0.0, 0.0),
        6 => i * coeffs[0].abs().sqrt(),
        _ => i * 0.5 * coeffs[1].abs() / coeffs[0].abs().sqrt(),
    };
    Ok(Residues {
        at_plus_one: -i * quarter_root(Complex64::new(1.0, 0.0)),
        at_minus_one: -i * quarter_root(Complex64::new(-1.0, 0.0)),
        at_i: i * quarter_root(i),
        at_minus_i: i * quarter_root(-i),
        at_infinity,
    })
}

/// The same residues written through the actions:
/// `∓(i/4π)|J_ψ ∓ J_v|`, `(i/4π)|J_ψ|`, plus the model's residue at infinity.
pub fn residues_from_actions(
    model: &PotentialModel,
    j_v: f64,
    j_psi: f64,
    params: &BalloonParams,
) -> Result<Residues> {
    require_positive_alpha(model)?;
    let i = Complex64::i();
    let mr2 = params.mr2();
    let at_infinity = match *model {
        PotentialModel::Geodetic => Complex64::new(0.0, 0.0),
        PotentialModel::Harmonic { kappa } => i * (kappa * mr2).sqrt(),
        PotentialModel::Anharmonic { alpha, beta, .. } => i * beta.abs() * (mr2 / (2.0 * alpha)).sqrt(),
    };
    let k = 1.0 / (4.0 * PI);
    Ok(Residues {
        at_plus_one: -i * k * (j_psi - j_v).abs(),
        at_minus_one: -i * k * (j_psi + j_v).abs(),
        at_i: i * k * j_psi.abs(),
        at_minus_i: i * k * j_psi.abs(),
        at_infinity,
    })
}

/// Model-dependent constant in `J_u`: `0`, `2π sqrt(κ m r²)` or `π|β| sqrt(2 m r²/α)`.
pub fn offset_term(model: &PotentialModel, params: &BalloonParams) -> Result<f64> {
    let mr2 = params.mr2();
    match *model {
        PotentialModel::Geodetic => Ok(0.0),
        PotentialModel::Harmonic { kappa } => {
            model.validate()?;
            Ok(TAU * (kappa * mr2).sqrt())
        }
        PotentialModel::Anharmonic { alpha, beta, .. } => {
            require_positive_alpha(model)?;
            Ok(PI * beta.abs() * (2.0 * mr2 / alpha).sqrt())
        }
    }
}

/// Prediction of the residue relation
/// `2 J_u = 2·offset + 2|J_ψ| - |J_ψ - J_v| - |J_ψ + J_v|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormAction {
    pub j_u: f64,
    /// Value of `J_u` in regions i and vi.
    pub offset: f64,
    /// Set when the relation predicts a negative action.
    pub negative: bool,
}

pub fn closed_form_ju(
    model: &PotentialModel,
    j_v: f64,
    j_psi: f64,
    params: &BalloonParams,
) -> Result<ClosedFormAction> {
    params.validate()?;
    let offset = offset_term(model, params)?;
    let j_u = offset + 0.5 * (2.0 * j_psi.abs() - (j_psi - j_v).abs() - (j_psi + j_v).abs());
    Ok(ClosedFormAction { j_u, offset, negative: j_u < 0.0 })
}

/// One of the six sectors of the `(J_v, J_ψ)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl Region {
    pub const ALL: [Region; 6] = [Region::I, Region::II, Region::III, Region::IV, Region::V, Region::VI];

    pub fn label(&self) -> &'static str {
        match self {
            Region::I => "i",
            Region::II => "ii",
            Region::III => "iii",
            Region::IV => "iv",
            Region::V => "v",
            Region::VI => "vi",
        }
    }

    pub fn conditions(&self) -> &'static str {
        match self {
            Region::I => "J_psi > |J_v|",
            Region::II => "J_v > J_psi > 0",
            Region::III => "-J_v < J_psi < 0",
            Region::IV => "-J_v > J_psi > 0",
            Region::V => "J_v < J_psi < 0",
            Region::VI => "J_psi < -|J_v|",
        }
    }

    /// Coefficients `(c_v, c_ψ)` of the degeneracy relation `J_u + c_v J_v + c_ψ J_ψ = offset`.
    pub fn relation(&self) -> (i8, i8) {
        match self {
            Region::I | Region::VI => (0, 0),
            Region::II => (1, -1),
            Region::III => (1, 1),
            Region::IV => (-1, -1),
            Region::V => (-1, 1),
        }
    }

    pub fn relation_text(&self) -> &'static str {
        match self {
            Region::I | Region::VI => "J_u = offset",
            Region::II => "J_u + J_v - J_psi = offset",
            Region::III => "J_u + J_v + J_psi = offset",
            Region::IV => "J_u - J_v - J_psi = offset",
            Region::V => "J_u - J_v + J_psi = offset",
        }
    }

    /// `J_u` predicted by this region's relation.
    pub fn predicted_ju(&self, j_v: f64, j_psi: f64, offset: f64) -> f64 {
        let (cv, cp) = self.relation();
        offset - (cv as f64 * j_v + cp as f64 * j_psi)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown region label {s:?}")))
    }
}

/// Sector of `(J_v, J_ψ)` from the signs of `J_ψ`, `J_ψ - J_v` and `J_ψ + J_v`.
pub fn classify_region(j_v: f64, j_psi: f64) -> Result<Region> {
    if !(j_v.is_finite() && j_psi.is_finite()) {
        return Err(Error::InvalidParameter("actions must be finite".into()));
    }
    if j_psi == 0.0 || j_psi == j_v || j_psi == -j_v {
        return Err(Error::Boundary { j_v, j_psi });
    }
    let positive = j_psi > 0.0;
    let above = j_psi > j_v;
    let above_neg = j_psi > -j_v;
    Ok(match (positive, above, above_neg) {
        (true, true, true) => Region::I,
        (true, false, true) => Region::II,
        (false, false, true) => Region::III,
        (true, true, false) => Region::IV,
        (false, true, false) => Region::V,
        (false, false, false) => Region::VI,
        // the remaining sign patterns are inconsistent
        _ => unreachable!("impossible sign pattern for ({j_v}, {j_psi})"),
    })
}

/// Balloon radius with `π r² / 2 = N`.
pub fn quantized_radius(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("quantum number N must be a positive integer".into()));
    }
    Ok((2.0 * n as f64 / PI).sqrt())
}

/// `π r² / 2`, the quantity fixed to an integer by [`quantized_radius`].
pub fn radius_quantum_number(r: f64) -> f64 {
    PI * r * r / 2.0
}
