//! Confronts the closed-form action relations with direct quadrature and with
//! actions measured along integrated trajectories.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::action::{
    action_ju_quadrature_with, actions_cyclic, classify_region, closed_form_ju, libration_period,
    poly_coefficients, residues, turning_points_seeded, MotionConstants, Region, TurningPoints,
};
use crate::dynamics::{hamiltonian, CanonicalFlow, PhasePoint, PotentialModel};
use crate::error::{Error, Result};
use crate::geometry::BalloonParams;
use crate::ode::{dopri_step, Integrator, IntegratorControls, VectorField};
use crate::parallel::{map_indexed, Execution};
use crate::quadrature::QuadratureControls;

/// Evenly spaced values `min..=max`; a single point sits at `min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn single(value: f64) -> Self {
        Self { min: value, max: value, count: 1 }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter(format!("{name} grid needs count >= 1")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} grid bounds must be finite")));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else if k + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: PotentialModel,
    pub params: BalloonParams,
    pub energy: Grid,
    pub l: Grid,
    pub s: Grid,
    #[serde(default)]
    pub quadrature: QuadratureControls,
    /// Selects the well when the radicand has several.
    #[serde(default)]
    pub seed: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.model.validate_finite()?;
        self.energy.validate("energy")?;
        self.l.validate("l")?;
        self.s.validate("s")?;
        self.quadrature.validate()?;
        if let Some(seed) = self.seed {
            if !seed.is_finite() {
                return Err(Error::InvalidParameter("seed must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.energy.count * self.l.count * self.s.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `index`, with energy outermost and `s` innermost.
    pub fn constants(&self, index: usize) -> MotionConstants {
        let ks = index % self.s.count;
        let kl = (index / self.s.count) % self.l.count;
        let ke = index / (self.s.count * self.l.count);
        MotionConstants::new(self.energy.value(ke), self.l.value(kl), self.s.value(ks))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    NoClassicalMotion,
    MultipleWells,
    UnboundedMotion,
    NumericFailure,
    InvalidInput,
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NoClassicalMotion => "no_classical_motion",
            RowStatus::MultipleWells => "multiple_wells",
            RowStatus::UnboundedMotion => "unbounded_motion",
            RowStatus::NumericFailure => "numeric_failure",
            RowStatus::InvalidInput => "invalid_input",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::NoClassicalMotion => RowStatus::NoClassicalMotion,
            Error::MultipleWells { .. } => RowStatus::MultipleWells,
            Error::UnboundedMotion { .. } => RowStatus::UnboundedMotion,
            Error::Divergence { .. } | Error::QuadratureNotConverged { .. } => RowStatus::NumericFailure,
            _ => RowStatus::InvalidInput,
        }
    }
}

/// Quadrature against the closed-form prediction at one `(E, l, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub energy: f64,
    pub l: f64,
    pub s: f64,
    pub j_v: f64,
    pub j_psi: f64,
    /// `None` on the boundary set.
    pub region: Option<Region>,
    pub relation: Option<String>,
    pub turning_points: Option<TurningPoints>,
    pub ju_quadrature: Option<f64>,
    pub ju_quadrature_error: Option<f64>,
    pub period: Option<f64>,
    pub ju_closed_form: Option<f64>,
    pub closed_form_negative: Option<bool>,
    pub offset_term: Option<f64>,
    /// `Ju_quadrature - Ju_closed_form`.
    pub delta: Option<f64>,
    pub rel_delta: Option<f64>,
    /// `|Re(-2πi Σ Res) - Ju_closed_form| + |Im(-2πi Σ Res)|` with the residues taken from the polynomial.
    pub residue_residual: Option<f64>,
    pub status: RowStatus,
    pub message: Option<String>,
}

impl ComparisonRow {
    pub fn admissible(&self) -> bool {
        self.status == RowStatus::Ok
    }

    pub fn region_label(&self) -> &'static str {
        self.region.map_or("boundary", |r| r.label())
    }
}

/// Evaluates both sides of the action relation at one point.
pub fn compare_point(
    c: &MotionConstants,
    model: &PotentialModel,
    params: &BalloonParams,
    seed: Option<f64>,
    quadrature: &QuadratureControls,
) -> ComparisonRow {
    let (j_v, j_psi) = actions_cyclic(c);
    let region = classify_region(j_v, j_psi).ok();
    let mut row = ComparisonRow {
        energy: c.energy,
        l: c.l,
        s: c.s,
        j_v,
        j_psi,
        region,
        relation: region.map(|r| r.relation_text().to_string()),
        turning_points: None,
        ju_quadrature: None,
        ju_quadrature_error: None,
        period: None,
        ju_closed_form: None,
        closed_form_negative: None,
        offset_term: None,
        delta: None,
        rel_delta: None,
        residue_residual: None,
        status: RowStatus::Ok,
        message: None,
    };

    if let Ok(cf) = closed_form_ju(model, j_v, j_psi, params) {
        row.ju_closed_form = Some(cf.j_u);
        row.closed_form_negative = Some(cf.negative);
        row.offset_term = Some(cf.offset);
        if let Ok(res) = residues(model, &poly_coefficients(c, model, params)) {
            let contour = res.contour_integral();
            row.residue_residual = Some((contour.re - cf.j_u).abs() + contour.im.abs());
        }
    }

    let quad = action_ju_quadrature_with(c, model, params, seed, quadrature).and_then(|q| {
        let period = libration_period(c, model, params, seed, quadrature)?;
        Ok((q, period))
    });
    match quad {
        Ok((q, period)) => {
            row.turning_points = Some(q.turning_points);
            row.ju_quadrature = Some(q.j_u);
            row.ju_quadrature_error = Some(q.error);
            row.period = period;
            if let Some(cf) = row.ju_closed_form {
                let delta = q.j_u - cf;
                let scale = q.j_u.abs().max(cf.abs());
                row.delta = Some(delta);
                row.rel_delta = Some(if scale > 0.0 { delta.abs() / scale } else { 0.0 });
            }
        }
        Err(e) => {
            row.status = RowStatus::from_error(&e);
            row.message = Some(e.to_string());
        }
    }
    row
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ComparisonRow>> {
    run_sweep_with(spec, Execution::default())
}

/// One row per grid point in grid order, whichever execution mode is used.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<Vec<ComparisonRow>> {
    spec.validate()?;
    Ok(map_indexed(spec.len(), exec, |i| {
        compare_point(&spec.constants(i), &spec.model, &spec.params, spec.seed, &spec.quadrature)
    }))
}

pub const SWEEP_COLUMNS: [&str; 13] = [
    "E",
    "l",
    "s",
    "J_v",
    "J_psi",
    "region",
    "Ju_quadrature",
    "Ju_closed_form",
    "delta",
    "offset_term",
    "rel_delta",
    "residue_residual",
    "status",
];

/// Scientific notation with 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Writes the comparison CSV. `header`, when given, becomes a leading `# ...` comment line.
pub fn write_sweep_csv<W: Write>(rows: &[ComparisonRow], header: Option<&str>, mut out: W) -> io::Result<()> {
    if let Some(h) = header {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "{}", SWEEP_COLUMNS.join(","))?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            format_float(r.energy),
            format_float(r.l),
            format_float(r.s),
            format_float(r.j_v),
            format_float(r.j_psi),
            r.region_label(),
            format_opt(r.ju_quadrature),
            format_opt(r.ju_closed_form),
            format_opt(r.delta),
            format_opt(r.offset_term),
            format_opt(r.rel_delta),
            format_opt(r.residue_residual),
            r.status.label(),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub energy: Grid,
    pub l: Grid,
    pub s: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub model: PotentialModel,
    pub grid: SweepGrid,
    pub n_rows: usize,
    pub n_admissible: usize,
    /// Extremes of `delta` over rows where both sides exist.
    pub max_delta: Option<f64>,
    pub min_delta: Option<f64>,
    pub max_residue_residual: Option<f64>,
}

pub fn summarize(spec: &SweepSpec, rows: &[ComparisonRow]) -> SweepSummary {
    let deltas: Vec<f64> = rows.iter().filter_map(|r| r.delta).collect();
    let fold = |init: f64, f: fn(f64, f64) -> f64| {
        if deltas.is_empty() { None } else { Some(deltas.iter().copied().fold(init, f)) }
    };
    SweepSummary {
        model: spec.model,
        grid: SweepGrid { energy: spec.energy, l: spec.l, s: spec.s },
        n_rows: rows.len(),
        n_admissible: rows.iter().filter(|r| r.admissible()).count(),
        max_delta: fold(f64::NEG_INFINITY, f64::max),
        min_delta: fold(f64::INFINITY, f64::min),
        max_residue_residual: rows.iter().filter_map(|r| r.residue_residual).reduce(f64::max),
    }
}

/// Settings for [`trajectory_action_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActionCheckControls {
    pub integrator: IntegratorControls,
    pub quadrature: QuadratureControls,
    pub seed: Option<f64>,
    /// Give up after this many quadrature periods without closing the orbit.
    pub max_periods: f64,
}

impl Default for ActionCheckControls {
    fn default() -> Self {
        Self {
            integrator: IntegratorControls::with_tolerance(1e-12, 1e-14),
            quadrature: QuadratureControls::default(),
            seed: None,
            max_periods: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionCheckReport {
    pub constants: MotionConstants,
    pub turning_points: TurningPoints,
    /// `∮ p_u du` accumulated along one integrated libration.
    pub ju_trajectory: f64,
    pub ju_quadrature: f64,
    pub ju_quadrature_error: f64,
    pub relative_deviation: f64,
    pub period_trajectory: Option<f64>,
    pub period_quadrature: Option<f64>,
    /// Energy of the start state minus `E`.
    pub start_energy_offset: f64,
    pub steps: usize,
}

/// Canonical flow with `W' = p_u u̇` appended.
struct AugmentedFlow(CanonicalFlow);

impl VectorField<7> for AugmentedFlow {
    fn eval(&self, y: &[f64; 7]) -> [f64; 7] {
        let s: [f64; 6] = [y[0], y[1], y[2], y[3], y[4], y[5]];
        let r = self.0.rates(&s);
        [r[0], r[1], r[2], r[3], r[4], r[5], y[3] * r[0]]
    }
}

/// Integrates one full u-libration from the lower turning point and compares the
/// accumulated `∮ p_u du` with the quadrature value.
///
/// The orbit closes at the second sign change of `p_u` (first `+ → -` at `u_max`,
/// then `- → +` back at `u_min`); each crossing is located by bisecting the
/// length of the step that brackets it.
pub fn trajectory_action_check(
    c: &MotionConstants,
    model: &PotentialModel,
    params: &BalloonParams,
    controls: &ActionCheckControls,
) -> Result<ActionCheckReport> {
    let tp = turning_points_seeded(c, model, params, controls.seed)?;
    let quad = action_ju_quadrature_with(c, model, params, controls.seed, &controls.quadrature)?;
    let start = PhasePoint { u: tp.u_min, v: 0.0, psi: 0.0, p_u: 0.0, p_v: c.l, p_psi: c.s };
    let start_energy_offset = hamiltonian(&start, model, params) - c.energy;
    if tp.is_degenerate() {
        return Ok(ActionCheckReport {
            constants: *c,
            turning_points: tp,
            ju_trajectory: 0.0,
            ju_quadrature: quad.j_u,
            ju_quadrature_error: quad.error,
            relative_deviation: 0.0,
            period_trajectory: None,
            period_quadrature: None,
            start_energy_offset,
            steps: 0,
        });
    }
    let period_quadrature = libration_period(c, model, params, controls.seed, &controls.quadrature)?;
    let t_limit = controls.max_periods * period_quadrature.unwrap_or(1.0);

    let flow = AugmentedFlow(CanonicalFlow::new(*model, *params));
    let s = start.to_array();
    let y0 = [s[0], s[1], s[2], s[3], s[4], s[5], 0.0];
    let mut integ = Integrator::new(&flow, y0, controls.integrator)?;

    let mut crossings = 0;
    let mut sign = 0.0f64;
    loop {
        if integ.t >= t_limit {
            return Err(Error::Divergence {
                t: integ.t,
                reason: "orbit did not close within the time limit".into(),
            });
        }
        let (t_prev, y_prev, k_prev) = (integ.t, integ.y, *integ.derivative());
        integ.step(t_limit)?;
        let p_u = integ.y[3];
        if sign == 0.0 {
            sign = p_u.signum();
            continue;
        }
        if p_u.signum() == sign || p_u == 0.0 {
            continue;
        }
        crossings += 1;
        sign = -sign;
        if crossings < 2 {
            continue;
        }
        // bisect on the step length for p_u = 0 within the bracketing step
        let full = integ.t - t_prev;
        let (mut lo, mut hi) = (0.0, full);
        let old_sign = -sign;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let y = dopri_step(&flow, &y_prev, &k_prev, mid).y;
            if y[3].signum() == old_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = 0.5 * (lo + hi);
        let y = dopri_step(&flow, &y_prev, &k_prev, h).y;
        let ju_trajectory = y[6];
        let scale = quad.j_u.abs();
        let relative_deviation = if scale > 0.0 {
            (ju_trajectory - quad.j_u).abs() / scale
        } else {
            (ju_trajectory - quad.j_u).abs()
        };
        return Ok(ActionCheckReport {
            constants: *c,
            turning_points: tp,
            ju_trajectory,
            ju_quadrature: quad.j_u,
            ju_quadrature_error: quad.error,
            relative_deviation,
            period_trajectory: Some(t_prev + h),
            period_quadrature,
            start_energy_offset,
            steps: integ.steps(),
        });
    }
}
