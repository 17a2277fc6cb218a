//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use mylar_core::dynamics::{PhasePoint, PotentialModel};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 30)
}

/// Incomplete integrals of the first and second kind straight from their definitions.
pub fn elliptic_oracle(phi: f64, k: f64) -> (f64, f64) {
    let k2 = k * k;
    let f = simpson(&|t: f64| 1.0 / (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-14);
    let e = simpson(&|t: f64| (1.0 - k2 * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-14);
    (f, e)
}

/// Complete integrals `(K, E)` by the arithmetic-geometric mean.
pub fn agm_complete(k: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    for _ in 0..60 {
        let c = 0.5 * (a - b);
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
        if c.abs() < 1e-17 {
            break;
        }
    }
    let kk = PI / (2.0 * a);
    (kk, kk * (1.0 - sum))
}

/// Five-point central first and second differences.
pub fn d1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn d2<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Brioschi formula for a metric `E du² + G dv²` depending on `u` only,
/// with derivatives taken by finite differences.
pub fn brioschi<Fe: Fn(f64) -> f64, Fg: Fn(f64) -> f64>(e: &Fe, g: &Fg, u: f64, h: f64) -> f64 {
    let (ee, gg, f) = (e(u), g(u), 0.0);
    let (e_u, g_u, g_uu) = (d1(e, u, h), d1(g, u, h), d2(g, u, h));
    // v-derivatives vanish for a surface of revolution in these coordinates
    let (e_v, e_vv, f_u, f_v, f_uv, g_v) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let a = det3([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, ee, f],
        [0.5 * g_v, f, gg],
    ]);
    let b = det3([[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, ee, f], [0.5 * g_u, f, gg]]);
    (a - b) / (ee * gg - f * f).powi(2)
}

pub fn models() -> [PotentialModel; 3] {
    [
        PotentialModel::Geodetic,
        PotentialModel::Harmonic { kappa: 1.0 },
        PotentialModel::Anharmonic { alpha: 1.0, beta: 0.3, gamma: -0.2, delta: 0.1 },
    ]
}

/// A start state whose u-motion is bounded: `|p_v ± p_ψ|` stays away from zero.
pub fn bounded_start(rng: &mut ChaCha8Rng) -> PhasePoint {
    loop {
        let p_v: f64 = rng.random_range(-1.0..1.0);
        let p_psi: f64 = rng.random_range(-1.0..1.0);
        if (p_v - p_psi).abs() < 0.2 || (p_v + p_psi).abs() < 0.2 {
            continue;
        }
        return PhasePoint {
            u: rng.random_range(-0.6..0.6),
            v: rng.random_range(0.0..6.0),
            psi: rng.random_range(0.0..6.0),
            p_u: rng.random_range(-1.0..1.0),
            p_v,
            p_psi,
        };
    }
}
