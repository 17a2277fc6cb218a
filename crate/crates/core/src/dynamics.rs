//! Lagrangian and Hamiltonian mechanics of the gyroscope on the balloon.
//!
//! Configuration `q = (u, v, ψ)`: the position on the surface plus the angle
//! of the internal planar rotator relative to the orthonormal frame. The
//! kinetic energy is
//!
//! ```text
//! T = m r² / (2 cosh 2u) (u̇² + v̇²) + I/2 (ψ̇ + tanh 2u · v̇)²
//! ```
//!
//! and `v`, `ψ` are cyclic, so `p_v` and `p_ψ` are conserved.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BalloonParams;
use crate::ode::{Integrator, IntegratorControls, VectorField};
use crate::parallel::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub u: f64,
    pub v: f64,
    pub psi: f64,
    pub p_u: f64,
    pub p_v: f64,
    pub p_psi: f64,
}

impl PhasePoint {
    pub fn to_array(&self) -> [f64; 6] {
        [self.u, self.v, self.psi, self.p_u, self.p_v, self.p_psi]
    }

    pub fn from_array(a: &[f64]) -> Self {
        Self { u: a[0], v: a[1], psi: a[2], p_u: a[3], p_v: a[4], p_psi: a[5] }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Copy with both angles reduced to `[0, 2π)`.
    pub fn reduced(&self) -> Self {
        Self { v: self.v.rem_euclid(TAU), psi: self.psi.rem_euclid(TAU), ..*self }
    }
}

/// Generalized coordinates together with their rates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VelocityPoint {
    pub u: f64,
    pub v: f64,
    pub psi: f64,
    pub du: f64,
    pub dv: f64,
    pub dpsi: f64,
}

/// Potential energy as a function of `x = tanh u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialModel {
    Geodetic,
    /// `V = (κ/2) x²`.
    Harmonic { kappa: f64 },
    /// `V = α x⁴ + β x³ + γ x² + δ x`.
    Anharmonic { alpha: f64, beta: f64, gamma: f64, delta: f64 },
}

impl PotentialModel {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialModel::Geodetic => "geodetic",
            PotentialModel::Harmonic { .. } => "harmonic",
            PotentialModel::Anharmonic { .. } => "anharmonic",
        }
    }

    /// Harmonic needs `κ > 0`, anharmonic needs `α > 0`.
    pub fn validate(&self) -> Result<()> {
        self.validate_finite()?;
        match *self {
            PotentialModel::Harmonic { kappa } if kappa <= 0.0 => Err(Error::InvalidParameter(
                format!("harmonic potential needs kappa > 0, got {kappa}"),
            )),
            PotentialModel::Anharmonic { alpha, .. } if alpha <= 0.0 => Err(
                Error::InvalidParameter(format!("anharmonic potential needs alpha > 0, got {alpha}")),
            ),
            _ => Ok(()),
        }
    }

    /// Only checks that the coefficients are finite.
    pub fn validate_finite(&self) -> Result<()> {
        let ok = self.x_coefficients().iter().all(|c| c.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("potential coefficients must be finite".into()))
        }
    }

    /// Coefficients of `V` as a polynomial in `x`, ascending `[x, x², x³, x⁴]`.
    pub fn x_coefficients(&self) -> [f64; 4] {
        match *self {
            PotentialModel::Geodetic => [0.0; 4],
            PotentialModel::Harmonic { kappa } => [0.0, 0.5 * kappa, 0.0, 0.0],
            PotentialModel::Anharmonic { alpha, beta, gamma, delta } => [delta, gamma, beta, alpha],
        }
    }

    pub fn eval_x(&self, x: f64) -> f64 {
        let [c1, c2, c3, c4] = self.x_coefficients();
        x * (c1 + x * (c2 + x * (c3 + x * c4)))
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.eval_x(u.tanh())
    }

    /// `dV/du = V'(x) sech² u`.
    pub fn derivative(&self, u: f64) -> f64 {
        let x = u.tanh();
        let [c1, c2, c3, c4] = self.x_coefficients();
        let dvdx = c1 + x * (2.0 * c2 + x * (3.0 * c3 + x * 4.0 * c4));
        dvdx * (1.0 - x * x)
    }

    /// Rough magnitude of the potential, used for scaling tolerances.
    pub fn scale(&self) -> f64 {
        self.x_coefficients().iter().map(|c| c.abs()).sum()
    }
}

pub fn potential_eval(u: f64, model: &PotentialModel) -> f64 {
    model.eval(u)
}

/// Kinetic energy of the gyroscope for given coordinates and rates.
pub fn kinetic_energy(state: &VelocityPoint, params: &BalloonParams) -> f64 {
    let c = (2.0 * state.u).cosh();
    let t = (2.0 * state.u).tanh();
    let omega = state.dpsi + t * state.dv;
    0.5 * params.mr2() / c * (state.du * state.du + state.dv * state.dv)
        + 0.5 * params.inertia * omega * omega
}

/// Metric of the configuration space in `T = (m/2) G_ij q̇^i q̇^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigMetric {
    pub g: [[f64; 3]; 3],
    pub inverse: [[f64; 3]; 3],
    pub sqrt_det: f64,
}

pub fn config_metric(u: f64, params: &BalloonParams) -> ConfigMetric {
    let r2 = params.r * params.r;
    let ratio = params.inertia / params.mr2();
    let sech = 1.0 / (2.0 * u).cosh();
    let cosh = (2.0 * u).cosh();
    let sinh = (2.0 * u).sinh();
    let t = (2.0 * u).tanh();
    let g = [
        [r2 * sech, 0.0, 0.0],
        [0.0, r2 * (sech + ratio * t * t), r2 * ratio * t],
        [0.0, r2 * ratio * t, r2 * ratio],
    ];
    let inverse = [
        [cosh / r2, 0.0, 0.0],
        [0.0, cosh / r2, -sinh / r2],
        [0.0, -sinh / r2, (sinh * t + 1.0 / ratio) / r2],
    ];
    ConfigMetric {
        g,
        inverse,
        sqrt_det: (params.inertia / params.m).sqrt() * r2 * sech,
    }
}

/// Velocities to canonical momenta, `p = m G q̇`.
pub fn legendre(state: &VelocityPoint, params: &BalloonParams) -> PhasePoint {
    let mr2 = params.mr2();
    let i = params.inertia;
    let c = (2.0 * state.u).cosh();
    let t = (2.0 * state.u).tanh();
    PhasePoint {
        u: state.u,
        v: state.v,
        psi: state.psi,
        p_u: mr2 / c * state.du,
        p_v: (mr2 / c + i * t * t) * state.dv + i * t * state.dpsi,
        p_psi: i * (state.dpsi + t * state.dv),
    }
}

/// Canonical momenta to velocities (the inverse of [`legendre`]).
pub fn legendre_inverse(state: &PhasePoint, params: &BalloonParams) -> VelocityPoint {
    let mr2 = params.mr2();
    let c = (2.0 * state.u).cosh();
    let s = (2.0 * state.u).sinh();
    let t = (2.0 * state.u).tanh();
    VelocityPoint {
        u: state.u,
        v: state.v,
        psi: state.psi,
        du: c / mr2 * state.p_u,
        dv: c / mr2 * (state.p_v - t * state.p_psi),
        // written without dividing by sinh 2u so that u = 0 is regular
        dpsi: state.p_psi / params.inertia + s / mr2 * (t * state.p_psi - state.p_v),
    }
}

/// `H = T(q, p) + V(u)`.
pub fn hamiltonian(state: &PhasePoint, model: &PotentialModel, params: &BalloonParams) -> f64 {
    let mr2 = params.mr2();
    let c = (2.0 * state.u).cosh();
    let t = (2.0 * state.u).tanh();
    let (pu, pv, ps) = (state.p_u, state.p_v, state.p_psi);
    c / (2.0 * mr2)
        * (pu * pu + pv * pv - 2.0 * t * pv * ps + (mr2 / (params.inertia * c) + t * t) * ps * ps)
        + model.eval(state.u)
}

/// Right-hand side of Hamilton's equations.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalFlow {
    pub model: PotentialModel,
    pub params: BalloonParams,
}

impl CanonicalFlow {
    pub fn new(model: PotentialModel, params: BalloonParams) -> Self {
        Self { model, params }
    }

    /// `(q̇, ṗ)` at a phase point.
    pub fn rates(&self, y: &[f64; 6]) -> [f64; 6] {
        let [u, _, _, pu, pv, ps] = *y;
        let mr2 = self.params.mr2();
        let c = (2.0 * u).cosh();
        let s = (2.0 * u).sinh();
        let t = (2.0 * u).tanh();
        let sech2 = 1.0 / (c * c);
        let du = c * pu / mr2;
        let dv = c * (pv - t * ps) / mr2;
        let dpsi = ps / self.params.inertia + s * (t * ps - pv) / mr2;
        let dh_du = (s * (pu * pu + pv * pv) - 2.0 * c * pv * ps + s * (1.0 + sech2) * ps * ps) / mr2
            + self.model.derivative(u);
        [du, dv, dpsi, -dh_du, 0.0, 0.0]
    }
}

impl VectorField<6> for CanonicalFlow {
    fn eval(&self, y: &[f64; 6]) -> [f64; 6] {
        self.rates(y)
    }
}

/// Single independent entries of the antisymmetric angular velocity matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularVelocitySplit {
    pub omega_total: f64,
    pub omega_drift: f64,
    pub omega_relative: f64,
}

/// Frame-transport ("drift") and relative parts of the rotator's angular velocity.
pub fn omega_split(state: &VelocityPoint) -> AngularVelocitySplit {
    let drift = (2.0 * state.u).tanh() * state.dv;
    let relative = state.dpsi;
    AngularVelocitySplit { omega_total: drift + relative, omega_drift: drift, omega_relative: relative }
}

/// Time scale `sqrt(m r² / max(E, κ, α, 1))`, used for default run lengths.
pub fn characteristic_time(energy: f64, model: &PotentialModel, params: &BalloonParams) -> f64 {
    let strength = match *model {
        PotentialModel::Geodetic => 0.0,
        PotentialModel::Harmonic { kappa } => kappa,
        PotentialModel::Anharmonic { alpha, .. } => alpha,
    };
    (params.mr2() / energy.abs().max(strength).max(1.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectoryControls {
    pub integrator: IntegratorControls,
    /// Keep every n-th accepted step (the final state is always kept).
    pub record_every: usize,
}

impl Default for TrajectoryControls {
    fn default() -> Self {
        Self { integrator: IntegratorControls::default(), record_every: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PhasePoint,
    pub energy: f64,
    pub omega_drift: f64,
    pub omega_relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// `max |H(t) - H(0)| / max(|H(0)|, 1)` over all accepted steps.
    pub max_energy_drift: f64,
    /// Same for the cyclic momenta, relative to `max(|p(0)|, 1)`.
    pub max_p_v_drift: f64,
    pub max_p_psi_drift: f64,
    pub steps: usize,
}

fn sample(t: f64, y: &[f64; 6], model: &PotentialModel, params: &BalloonParams) -> TrajectorySample {
    let state = PhasePoint::from_array(y);
    let omega = omega_split(&legendre_inverse(&state, params));
    TrajectorySample {
        t,
        state,
        energy: hamiltonian(&state, model, params),
        omega_drift: omega.omega_drift,
        omega_relative: omega.omega_relative,
    }
}

/// Integrates Hamilton's equations from `start` up to `t_end`.
pub fn integrate_trajectory(
    start: &PhasePoint,
    model: &PotentialModel,
    params: &BalloonParams,
    t_end: f64,
    controls: &TrajectoryControls,
) -> Result<Trajectory> {
    params.validate()?;
    model.validate_finite()?;
    if !start.is_finite() {
        return Err(Error::Divergence { t: 0.0, reason: "non-finite start state".into() });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
    }
    let every = controls.record_every.max(1);
    let flow = CanonicalFlow::new(*model, *params);
    let y0 = start.to_array();
    let mut integrator = Integrator::new(&flow, y0, controls.integrator)?;

    let h0 = hamiltonian(start, model, params);
    let energy_scale = h0.abs().max(1.0);
    let pv_scale = start.p_v.abs().max(1.0);
    let ps_scale = start.p_psi.abs().max(1.0);
    let mut drift = (0.0f64, 0.0f64, 0.0f64);
    let mut samples = vec![sample(0.0, &y0, model, params)];
    while integrator.t < t_end {
        integrator.step(t_end)?;
        let y = integrator.y;
        if y.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { t: integrator.t, reason: "non-finite state".into() });
        }
        let s = sample(integrator.t, &y, model, params);
        drift.0 = drift.0.max((s.energy - h0).abs() / energy_scale);
        drift.1 = drift.1.max((y[4] - start.p_v).abs() / pv_scale);
        drift.2 = drift.2.max((y[5] - start.p_psi).abs() / ps_scale);
        if integrator.steps() % every == 0 || integrator.t >= t_end {
            samples.push(s);
        }
    }
    Ok(Trajectory {
        samples,
        max_energy_drift: drift.0,
        max_p_v_drift: drift.1,
        max_p_psi_drift: drift.2,
        steps: integrator.steps(),
    })
}

/// Integrates independent trajectories, concurrently when `exec` allows it.
/// Results keep the order of `starts`.
pub fn integrate_many(
    starts: &[PhasePoint],
    model: &PotentialModel,
    params: &BalloonParams,
    t_end: f64,
    controls: &TrajectoryControls,
    exec: Execution,
) -> Vec<Result<Trajectory>> {
    parallel::map_indexed(starts.len(), exec, |i| {
        integrate_trajectory(&starts[i], model, params, t_end, controls)
    })
}
