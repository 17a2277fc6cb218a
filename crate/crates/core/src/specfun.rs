//! Incomplete elliptic integrals of the first and second kind.
//!
//! Both are evaluated through Carlson's symmetric integrals `R_F` and `R_D`
//! using the duplication theorem:
//!
//! ```text
//! F(phi, k) = sin(phi) R_F(cos^2 phi, 1 - k^2 sin^2 phi, 1)
//! E(phi, k) = F(phi, k) - (k^2 / 3) sin^3(phi) R_D(cos^2 phi, 1 - k^2 sin^2 phi, 1)
//! ```
//!
//! The supported domain is `0 <= k <= 1`, `|phi| <= pi/2`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Amplitude and modulus of an incomplete elliptic integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub phi: f64,
    pub k: f64,
}

impl EllipticArgs {
    pub fn new(phi: f64, k: f64) -> Result<Self> {
        let args = Self { phi, k };
        args.validate()?;
        Ok(args)
    }

    fn validate(&self) -> Result<()> {
        if !self.phi.is_finite() || self.phi.abs() > FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "amplitude {} outside [-pi/2, pi/2]",
                self.phi
            )));
        }
        if !(0.0..=1.0).contains(&self.k) {
            return Err(Error::Domain(format!("modulus {} outside [0, 1]", self.k)));
        }
        Ok(())
    }
}

// Series truncation thresholds; the neglected terms are O(tol^6).
const RF_TOL: f64 = 1e-3;
const RD_TOL: f64 = 5e-4;

/// Carlson's symmetric integral of the first kind,
/// `R_F(x, y, z) = 1/2 ∫_0^∞ dt / sqrt((t+x)(t+y)(t+z))`.
///
/// Requires `x, y, z >= 0` with at most one of them zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 {
        return Err(Error::Domain("R_F arguments must be non-negative".into()));
    }
    if [x + y, y + z, z + x].contains(&0.0) {
        return Err(Error::Domain("R_F diverges: two arguments are zero".into()));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    loop {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= RF_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok(
                (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt(),
            );
        }
    }
}

/// Carlson's symmetric integral of the second kind,
/// `R_D(x, y, z) = 3/2 ∫_0^∞ dt / ((t+z) sqrt((t+x)(t+y)(t+z)))`.
///
/// Requires `x, y >= 0` with `x + y > 0`, and `z > 0`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0 {
        return Err(Error::Domain("R_D arguments out of range".into()));
    }
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;

    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lambda));
        fac *= 0.25;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = 0.2 * (xt + yt + 3.0 * zt);
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= RD_TOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let series = 1.0
                + ed * (-C1 + C5 * ed - C6 * dz * ee)
                + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea));
            return Ok(3.0 * sum + fac * series / (ave * ave.sqrt()));
        }
    }
}

/// Incomplete elliptic integral of the first kind, `∫_0^phi dθ / sqrt(1 - k² sin²θ)`.
pub fn ellip_f(args: EllipticArgs) -> Result<f64> {
    args.validate()?;
    let EllipticArgs { phi, k } = args;
    if phi == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok(phi);
    }
    let s = phi.sin();
    if k == 1.0 {
        if phi.abs() == FRAC_PI_2 {
            return Err(Error::Domain("F(pi/2, 1) diverges".into()));
        }
        return Ok(s.atanh());
    }
    let c = phi.cos();
    let y = 1.0 - k * k * s * s;
    Ok(s * carlson_rf(c * c, y, 1.0)?)
}

/// Incomplete elliptic integral of the second kind, `∫_0^phi sqrt(1 - k² sin²θ) dθ`.
pub fn ellip_e(args: EllipticArgs) -> Result<f64> {
    args.validate()?;
    let EllipticArgs { phi, k } = args;
    if phi == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok(phi);
    }
    let s = phi.sin();
    if k == 1.0 {
        return Ok(s);
    }
    let c = phi.cos();
    let k2 = k * k;
    let y = 1.0 - k2 * s * s;
    let x = c * c;
    let rf = carlson_rf(x, y, 1.0)?;
    let rd = carlson_rd(x, y, 1.0)?;
    Ok(s * rf - k2 / 3.0 * s * s * s * rd)
}

/// Complete integral of the first kind, `K(k) = F(pi/2, k)`.
pub fn ellip_k(k: f64) -> Result<f64> {
    ellip_f(EllipticArgs { phi: FRAC_PI_2, k })
}

/// Complete integral of the second kind, `E(k) = E(pi/2, k)`.
pub fn ellip_e_complete(k: f64) -> Result<f64> {
    ellip_e(EllipticArgs { phi: FRAC_PI_2, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// Adaptive Simpson with Richardson correction; test-only oracle.
    #[allow(clippy::too_many_arguments)]
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let diff = left + right - whole;
            if depth == 0 || diff.abs() <= 15.0 * tol {
                return left + right + diff / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    fn agm_complete(k: f64) -> (f64, f64) {
        // K = pi / (2 agm(1, k')), E = K (1 - sum 2^(n-1) c_n^2)
        let mut a = 1.0_f64;
        let mut b = (1.0 - k * k).sqrt();
        let mut c = k;
        let mut sum = 0.5 * c * c;
        let mut pow = 0.5;
        for _ in 0..40 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            c = 0.5 * (a - b);
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

    #[test]
    fn trivial_values() {
        assert_eq!(ellip_f(EllipticArgs::new(0.0, 0.5).unwrap()).unwrap(), 0.0);
        assert_eq!(ellip_f(EllipticArgs::new(0.7, 0.0).unwrap()).unwrap(), 0.7);
        assert_eq!(ellip_e(EllipticArgs::new(0.0, 0.9).unwrap()).unwrap(), 0.0);
        let e = ellip_e(EllipticArgs::new(FRAC_PI_2, 1.0).unwrap()).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complete_values_at_inverse_sqrt_two() {
        let (k_oracle, e_oracle) = agm_complete(FRAC_1_SQRT_2);
        assert!((k_oracle - 1.8540746773013719).abs() < 1e-14);
        assert!((e_oracle - 1.3506438810476755).abs() < 1e-14);
        let k = ellip_k(FRAC_1_SQRT_2).unwrap();
        let e = ellip_e_complete(FRAC_1_SQRT_2).unwrap();
        assert!((k - k_oracle).abs() / k_oracle < 1e-13, "{k} vs {k_oracle}");
        assert!((e - e_oracle).abs() / e_oracle < 1e-13, "{e} vs {e_oracle}");
    }

    #[test]
    fn agm_oracle_across_moduli() {
        for i in 0..20 {
            let k = 0.049 * i as f64;
            let (ko, eo) = agm_complete(k);
            assert!((ellip_k(k).unwrap() - ko).abs() / ko < 1e-13);
            assert!((ellip_e_complete(k).unwrap() - eo).abs() / eo < 1e-13);
        }
    }

    #[test]
    fn quadrature_oracle_on_grid() {
        for i in 0..20 {
            let phi = (i as f64 + 0.5) / 20.0 * 0.97 * FRAC_PI_2;
            for j in 0..20 {
                let k = j as f64 / 19.0;
                let args = EllipticArgs::new(phi, k).unwrap();
                let fo = simpson(&|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-15);
                let eo = simpson(&|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-15);
                let f = ellip_f(args).unwrap();
                let e = ellip_e(args).unwrap();
                assert!((f - fo).abs() / fo < 1e-12, "F({phi},{k}) = {f} vs {fo}");
                assert!((e - eo).abs() / eo < 1e-12, "E({phi},{k}) = {e} vs {eo}");
            }
        }
    }

    #[test]
    fn odd_and_ordered() {
        for &phi in &[0.1, 0.5, 1.2, FRAC_PI_2 - 1e-3] {
            for &k in &[0.0, 0.3, FRAC_1_SQRT_2, 0.99] {
                let f = ellip_f(EllipticArgs::new(phi, k).unwrap()).unwrap();
                let fm = ellip_f(EllipticArgs::new(-phi, k).unwrap()).unwrap();
                let e = ellip_e(EllipticArgs::new(phi, k).unwrap()).unwrap();
                let em = ellip_e(EllipticArgs::new(-phi, k).unwrap()).unwrap();
                assert_eq!(f, -fm);
                assert_eq!(e, -em);
                if k == 0.0 {
                    assert_eq!(e, f);
                } else {
                    assert!(e < f);
                }
                assert!(e <= phi);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(EllipticArgs::new(0.3, 1.1).is_err());
        assert!(EllipticArgs::new(0.3, -0.1).is_err());
        assert!(EllipticArgs::new(2.0, 0.5).is_err());
        assert!(EllipticArgs::new(f64::NAN, 0.5).is_err());
        assert!(matches!(
            ellip_f(EllipticArgs { phi: FRAC_PI_2, k: 1.0 }),
            Err(Error::Domain(_))
        ));
        assert!(carlson_rf(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn unit_modulus_limits() {
        let phi = 1.3;
        let f = ellip_f(EllipticArgs::new(phi, 1.0).unwrap()).unwrap();
        let near = ellip_f(EllipticArgs::new(phi, 1.0 - 1e-12).unwrap()).unwrap();
        assert!((f - near).abs() < 1e-9);
        let e = ellip_e(EllipticArgs::new(phi, 1.0).unwrap()).unwrap();
        let near = ellip_e(EllipticArgs::new(phi, 1.0 - 1e-12).unwrap()).unwrap();
        assert!((e - near).abs() < 1e-9);
    }

    proptest::proptest! {
        #[test]
        fn monotone_in_amplitude(a in 0.0f64..1.5, d in 1e-6f64..0.07, k in 0.0f64..1.0) {
            let f0 = ellip_f(EllipticArgs::new(a, k).unwrap()).unwrap();
            let f1 = ellip_f(EllipticArgs::new(a + d, k).unwrap()).unwrap();
            proptest::prop_assert!(f1 > f0);
        }
    }
}
