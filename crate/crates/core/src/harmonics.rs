//! Real spherical harmonics, orthonormal with respect to the uniform
//! probability measure on S² (so `Y_00 = 1` and the mean of `Y_lm²` is 1).

use crate::sphere::UnitPoint3;

/// Fully normalized associated Legendre values `P̄_lm(cos θ)` for
/// `0 <= m <= l <= lmax`, stored row-major by `l` then `m`.
///
/// `P̄_lm = sqrt((2 - δ_m0)(2l + 1)(l - m)! / (l + m)!) P_lm`, built with the
/// standard column recurrence, which is stable for every `m` because it
/// never differentiates.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    lmax: usize,
    values: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn new(lmax: usize, cos_theta: f64, sin_theta: f64) -> Self {
        let mut values = vec![0.0; (lmax + 1) * (lmax + 2) / 2];
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
        values[0] = 1.0;
        for m in 0..=lmax {
            if m > 0 {
                let prev = values[idx(m - 1, m - 1)];
                let f = if m == 1 {
                    3f64.sqrt()
                } else {
                    ((2 * m + 1) as f64 / (2 * m) as f64).sqrt()
                };
                values[idx(m, m)] = f * sin_theta * prev;
            }
            if m < lmax {
                values[idx(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * cos_theta * values[idx(m, m)];
            }
            for l in m + 2..=lmax {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt();
                let b = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                    / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                    .sqrt();
                values[idx(l, m)] =
                    a * cos_theta * values[idx(l - 1, m)] - b * values[idx(l - 2, m)];
            }
        }
        Self { lmax, values }
    }

    pub fn get(&self, l: usize, m: usize) -> f64 {
        assert!(m <= l && l <= self.lmax);
        self.values[l * (l + 1) / 2 + m]
    }
}

/// All real harmonics `Y_lm(p)` for `l <= lmax`, ordered `(l, m)` with
/// `m = -l..=l`. Negative `m` are the `sin(|m| φ)` members.
pub fn real_harmonics(p: &UnitPoint3, lmax: usize) -> Vec<f64> {
    let [x, y, z] = p.coords();
    let rho = x.hypot(y);
    let plm = NormalizedLegendre::new(lmax, z, rho);
    let phi = y.atan2(x);
    let mut out = Vec::with_capacity((lmax + 1) * (lmax + 1));
    for l in 0..=lmax {
        for m in -(l as i64)..=(l as i64) {
            let am = m.unsigned_abs() as usize;
            let trig = if m > 0 {
                (am as f64 * phi).cos()
            } else if m < 0 {
                (am as f64 * phi).sin()
            } else {
                1.0
            };
            out.push(plm.get(l, am) * trig);
        }
    }
    out
}
