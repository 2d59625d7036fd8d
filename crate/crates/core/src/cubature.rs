//! Spherical t-design verification.
//!
//! A weighted point set is a t-design when its weighted average of every
//! polynomial of degree at most `t` equals the polynomial's mean over the
//! sphere. Two independent checks are offered: exact monomial moments and
//! the energy of the weighted harmonic sums of degrees `1..=t`.

use std::fmt;

use crate::design::{SphericalDesign, WEIGHT_SUM_TOL};
use crate::error::{Error, Result};
use crate::harmonics::real_harmonics;

/// Highest degree either check supports.
pub const T_MAX: usize = 12;
/// Per-monomial absolute tolerance used unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Exponents of `x1^a x2^b x3^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialExponent {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl MonomialExponent {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        x[0].powi(self.a as i32) * x[1].powi(self.b as i32) * x[2].powi(self.c as i32)
    }
}

impl fmt::Display for MonomialExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Monomials of total degree at most `t`, lexicographic in `(a, b, c)`.
pub fn monomials_up_to(t: usize) -> Vec<MonomialExponent> {
    let t = t as u32;
    let mut out = Vec::new();
    for a in 0..=t {
        for b in 0..=t - a {
            for c in 0..=t - a - b {
                out.push(MonomialExponent::new(a, b, c));
            }
        }
    }
    out
}

fn double_factorial_odd(n: i64) -> f64 {
    // n!! for odd n >= -1
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Mean of `x1^a x2^b x3^c` over S² under the uniform probability measure.
pub fn sphere_monomial_integral(m: MonomialExponent) -> f64 {
    if m.a % 2 == 1 || m.b % 2 == 1 || m.c % 2 == 1 {
        return 0.0;
    }
    let num = double_factorial_odd(m.a as i64 - 1)
        * double_factorial_odd(m.b as i64 - 1)
        * double_factorial_odd(m.c as i64 - 1);
    num / double_factorial_odd(m.degree() as i64 + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubatureReport {
    pub t_requested: usize,
    pub passed: bool,
    /// Largest moment defect over monomials of degree `<= t_requested`.
    pub max_defect: f64,
    pub worst_monomial: MonomialExponent,
    /// Largest `t' <= T_MAX` at which the design passes.
    pub t_achieved: usize,
}

impl fmt::Display for CubatureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t_achieved={} maxDefect={:.6e} pass={}",
            self.t_achieved, self.max_defect, self.passed
        )
    }
}

fn check_weights(design: &SphericalDesign) -> Result<()> {
    if design.is_empty() {
        return Err(Error::EmptyDesign);
    }
    let total: f64 = design.masses().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum(total));
    }
    Ok(())
}

/// Weighted moments `Σ w_y y^m` for every monomial of degree `<= t`, in
/// [`monomials_up_to`] order. The sum over points runs in point order so
/// the result is bit-stable.
pub fn design_moments(design: &SphericalDesign, t: usize) -> Vec<(MonomialExponent, f64)> {
    let monos = monomials_up_to(t);
    let mut sums = vec![0.0; monos.len()];
    for (i, p) in design.points().iter().enumerate() {
        let w = design.mass(i);
        let x = p.coords();
        for (s, m) in sums.iter_mut().zip(&monos) {
            *s += w * m.eval(x);
        }
    }
    monos.into_iter().zip(sums).collect()
}

pub fn check_t_design(design: &SphericalDesign, t: usize, tol: f64) -> Result<CubatureReport> {
    if t > T_MAX {
        return Err(Error::DegreeTooHigh(t, T_MAX));
    }
    check_weights(design)?;
    let mut per_degree = [0.0f64; T_MAX + 1];
    let mut worst = (0.0f64, MonomialExponent::new(0, 0, 0));
    for (m, moment) in design_moments(design, T_MAX) {
        let defect = (moment - sphere_monomial_integral(m)).abs();
        let deg = m.degree() as usize;
        per_degree[deg] = per_degree[deg].max(defect);
        // ties go to the later monomial, i.e. the higher power of x1
        if deg <= t && defect >= worst.0 {
            worst = (defect, m);
        }
    }
    let t_achieved = per_degree
        .iter()
        .position(|&d| d > tol)
        .map_or(T_MAX, |first_bad| first_bad.saturating_sub(1));
    Ok(CubatureReport {
        t_requested: t,
        passed: worst.0 <= tol,
        max_defect: worst.0,
        worst_monomial: worst.1,
        t_achieved,
    })
}

/// `sqrt(Σ_{l=1..t} Σ_m (Σ_y w_y Y_lm(y))²)`; zero exactly for t-designs.
pub fn harmonic_defect(design: &SphericalDesign, t: usize) -> Result<f64> {
    if t > T_MAX {
        return Err(Error::DegreeTooHigh(t, T_MAX));
    }
    check_weights(design)?;
    let mut sums = vec![0.0; (t + 1) * (t + 1)];
    for (i, p) in design.points().iter().enumerate() {
        let w = design.mass(i);
        for (s, y) in sums.iter_mut().zip(real_harmonics(p, t)) {
            *s += w * y;
        }
    }
    Ok(sums[1..].iter().map(|s| s * s).sum::<f64>().sqrt())
}
