//! Adaptive Dormand–Prince 5(4) integrator for autonomous systems `y' = f(y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorControls {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `0` picks one from the vector field.
    pub h_init: f64,
    /// Steps shorter than this report divergence.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorControls {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 0.0,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorControls {
    pub fn with_tolerance(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if !(self.h_min > 0.0 && self.h_max > self.h_min && self.h_init >= 0.0) {
            return Err(Error::InvalidParameter("inconsistent step bounds".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

pub trait VectorField<const N: usize> {
    fn eval(&self, y: &[f64; N]) -> [f64; N];
}

impl<const N: usize, F: Fn(&[f64; N]) -> [f64; N]> VectorField<N> for F {
    fn eval(&self, y: &[f64; N]) -> [f64; N] {
        self(y)
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Result of a single trial step.
#[derive(Debug, Clone, Copy)]
pub struct TrialStep<const N: usize> {
    pub y: [f64; N],
    pub error: [f64; N],
    /// Derivative at the new point (first stage of the next step).
    pub f_new: [f64; N],
}

/// One Dormand–Prince step of size `h` from `y` with `k1 = f(y)` supplied.
pub fn dopri_step<const N: usize, F: VectorField<N>>(
    f: &F,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> TrialStep<N> {
    let k2 = f.eval(&axpy(y, h, &[(A21, k1)]));
    let k3 = f.eval(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f.eval(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f.eval(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f.eval(&axpy(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y_new = axpy(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f.eval(&y_new);
    let mut error = [0.0; N];
    for i in 0..N {
        error[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    TrialStep { y: y_new, error, f_new: k7 }
}

/// Adaptive driver around [`dopri_step`], stepping one accepted step at a time.
pub struct Integrator<'a, const N: usize, F: VectorField<N>> {
    field: &'a F,
    controls: IntegratorControls,
    pub t: f64,
    pub y: [f64; N],
    dydt: [f64; N],
    h: f64,
    steps: usize,
}

impl<'a, const N: usize, F: VectorField<N>> Integrator<'a, N, F> {
    pub fn new(field: &'a F, y0: [f64; N], controls: IntegratorControls) -> Result<Self> {
        controls.validate()?;
        if y0.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { t: 0.0, reason: "non-finite initial state".into() });
        }
        let dydt = field.eval(&y0);
        let h = if controls.h_init > 0.0 {
            controls.h_init
        } else {
            initial_step(&y0, &dydt, &controls)
        };
        Ok(Self { field, controls, t: 0.0, y: y0, dydt, h, steps: 0 })
    }

    pub fn field(&self) -> &F {
        self.field
    }

    pub fn derivative(&self) -> &[f64; N] {
        &self.dydt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn error_norm(&self, trial: &TrialStep<N>) -> f64 {
        let mut sum = 0.0;
        for i in 0..N {
            let sc = self.controls.atol
                + self.controls.rtol * self.y[i].abs().max(trial.y[i].abs());
            let e = trial.error[i] / sc;
            sum += e * e;
        }
        (sum / N as f64).sqrt()
    }

    /// Takes one accepted step, never overshooting `t_stop`.
    pub fn step(&mut self, t_stop: f64) -> Result<()> {
        if self.steps >= self.controls.max_steps {
            return Err(Error::Divergence { t: self.t, reason: "step budget exhausted".into() });
        }
        loop {
            let remaining = t_stop - self.t;
            let mut h = self.h.min(self.controls.h_max);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let trial = dopri_step(self.field, &self.y, &self.dydt, h);
            if trial.y.iter().any(|x| !x.is_finite()) {
                self.h = 0.25 * h;
            } else {
                let err = self.error_norm(&trial);
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if err <= 1.0 {
                    self.t = if last { t_stop } else { self.t + h };
                    self.y = trial.y;
                    self.dydt = trial.f_new;
                    self.steps += 1;
                    // a truncated final step says nothing about the natural size
                    if !last {
                        self.h = h * factor;
                    }
                    return Ok(());
                }
                self.h = h * factor.min(1.0);
            }
            if self.h < self.controls.h_min {
                return Err(Error::Divergence {
                    t: self.t,
                    reason: format!("step size underflow (h = {:e})", self.h),
                });
            }
        }
    }

    /// Re-evaluates the step of size `h` from the current state without committing it.
    pub fn probe(&self, h: f64) -> [f64; N] {
        dopri_step(self.field, &self.y, &self.dydt, h).y
    }
}

fn initial_step<const N: usize>(y: &[f64; N], f: &[f64; N], c: &IntegratorControls) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = c.atol + c.rtol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.clamp(c.h_min * 10.0, c.h_max.min(1.0))
}
