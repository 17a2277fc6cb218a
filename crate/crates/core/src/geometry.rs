//! The Mylar balloon in conformal coordinates `(u, v)`.
//!
//! The first fundamental form is `r²/cosh(2u) (du² + dv²)`, so the metric is
//! conformally flat and every geometric quantity depends on `u` only.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ellip_e, ellip_f, EllipticArgs};

/// Embedding evaluations clamp `|u|` here; `cosh(2u)` overflows near `u = 355`
/// and the point is numerically at the pole long before that.
pub const U_CLAMP: f64 = 40.0;

/// Balloon radius, rotator mass and scalar moment of inertia of the rotator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalloonParams {
    pub r: f64,
    pub m: f64,
    pub inertia: f64,
}

impl BalloonParams {
    pub fn new(r: f64, m: f64, inertia: f64) -> Result<Self> {
        let p = Self { r, m, inertia };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("r", self.r), ("m", self.m), ("inertia", self.inertia)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// `m r²`, the combination that appears throughout the dynamics.
    pub fn mr2(&self) -> f64 {
        self.m * self.r * self.r
    }
}

impl Default for BalloonParams {
    fn default() -> Self {
        Self { r: 1.0, m: 1.0, inertia: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub u: f64,
    pub v: f64,
}

impl SurfacePoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// `v` reduced to `[0, 2π)`.
    pub fn v_reduced(&self) -> f64 {
        self.v.rem_euclid(TAU)
    }
}

/// Metric components; the off-diagonal entries vanish identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricData {
    pub g_uu: f64,
    pub g_vv: f64,
    pub ginv_uu: f64,
    pub ginv_vv: f64,
}

/// Coefficients of `du², dv²` in the first and second fundamental forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub first: (f64, f64),
    pub second: (f64, f64),
}

/// Holonomic Levi-Civita symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomicConnection {
    pub u_uu: f64,
    pub u_vv: f64,
    pub v_uv: f64,
    pub v_vu: f64,
}

/// Non-vanishing components of the connection data at a given `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionData {
    pub holonomic: HolonomicConnection,
    /// Teleparallel connection of the orthonormal frame: `Γ[E]^u_uu`, `Γ[E]^v_vu`.
    pub teleparallel_u_uu: f64,
    pub teleparallel_v_vu: f64,
    /// Levi-Civita connection in the aholonomic (frame) representation.
    pub aholonomic_u_vv: f64,
    pub aholonomic_v_uv: f64,
}

/// Orthonormal frame `E_u, E_v` and its dual coframe, as coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e_u: [f64; 2],
    pub e_v: [f64; 2],
    pub co_u: [f64; 2],
    pub co_v: [f64; 2],
}

fn amplitude(u: f64) -> f64 {
    let s = SQRT_2 * u.sinh() / (2.0 * u).cosh().sqrt();
    s.clamp(-1.0, 1.0).asin()
}

/// Point of the balloon in Euclidean 3-space.
pub fn embed(p: SurfacePoint, params: &BalloonParams) -> Result<[f64; 3]> {
    params.validate()?;
    if !p.u.is_finite() || !p.v.is_finite() {
        return Err(Error::Domain("surface point must be finite".into()));
    }
    let u = p.u.clamp(-U_CLAMP, U_CLAMP);
    let rho = params.r / (2.0 * u).cosh().sqrt();
    let args = EllipticArgs::new(amplitude(u), FRAC_1_SQRT_2)?;
    let z = SQRT_2 * params.r * (ellip_e(args)? - 0.5 * ellip_f(args)?);
    Ok([rho * p.v.cos(), rho * p.v.sin(), z])
}

pub fn fundamental_forms(p: SurfacePoint, params: &BalloonParams) -> FundamentalForms {
    let c = (2.0 * p.u).cosh();
    let first = params.r * params.r / c;
    let second = params.r / c.powf(1.5);
    FundamentalForms {
        first: (first, first),
        second: (2.0 * second, second),
    }
}

pub fn metric(u: f64, params: &BalloonParams) -> MetricData {
    let c = (2.0 * u).cosh();
    let r2 = params.r * params.r;
    MetricData {
        g_uu: r2 / c,
        g_vv: r2 / c,
        ginv_uu: c / r2,
        ginv_vv: c / r2,
    }
}

pub fn connections(u: f64, params: &BalloonParams) -> ConnectionData {
    let t = (2.0 * u).tanh();
    let ahol = (2.0 * u).sinh() / (params.r * (2.0 * u).cosh().sqrt());
    ConnectionData {
        holonomic: HolonomicConnection {
            u_uu: -t,
            u_vv: t,
            v_uv: -t,
            v_vu: -t,
        },
        teleparallel_u_uu: -t,
        teleparallel_v_vu: -t,
        aholonomic_u_vv: ahol,
        aholonomic_v_uv: -ahol,
    }
}

pub fn frame(u: f64, params: &BalloonParams) -> Frame {
    let scale = (2.0 * u).cosh().sqrt() / params.r;
    let inv = 1.0 / scale;
    Frame {
        e_u: [scale, 0.0],
        e_v: [0.0, scale],
        co_u: [inv, 0.0],
        co_v: [0.0, inv],
    }
}

/// Gaussian curvature `K = det II / det I = 2 / (r² cosh 2u)`.
pub fn gauss_curvature(u: f64, params: &BalloonParams) -> f64 {
    2.0 / (params.r * params.r * (2.0 * u).cosh())
}

/// One mesh row `(u, v, x, y, z, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshRow {
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub k: f64,
}

/// Tabulates the embedding over a `nu × nv` grid, `v` varying fastest.
///
/// With a single node along an axis the lower bound is used.
pub fn mesh(
    u_range: (f64, f64),
    nu: usize,
    v_range: (f64, f64),
    nv: usize,
    params: &BalloonParams,
) -> Result<Vec<MeshRow>> {
    if nu == 0 || nv == 0 {
        return Err(Error::InvalidParameter("mesh needs at least one node per axis".into()));
    }
    let node = |range: (f64, f64), n: usize, i: usize| {
        if n == 1 {
            range.0
        } else {
            range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
        }
    };
    let mut rows = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = node(u_range, nu, i);
        for j in 0..nv {
            let v = node(v_range, nv, j);
            let [x, y, z] = embed(SurfacePoint::new(u, v), params)?;
            rows.push(MeshRow { u, v, x, y, z, k: gauss_curvature(u, params) });
        }
    }
    Ok(rows)
}
