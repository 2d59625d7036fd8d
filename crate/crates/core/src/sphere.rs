//! Points on the unit sphere and the folded stereographic projection.
//!
//! Both hemispheres are projected into the same closed unit disk:
//! `(x1, x2, x3) -> (x1 / (1 + |x3|), x2 / (1 + |x3|))`. The hemisphere a
//! point came from travels with the projected coordinates so that it can be
//! drawn solid (north) or open (south) and so the map can be inverted.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Points whose norm is further than this from 1 are rejected.
pub const NORM_REPAIR_TOL: f64 = 1e-6;
/// `|x3|` at or below this counts as lying on the equator.
pub const EQUATOR_TOL: f64 = 1e-9;

/// A point on S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint3 {
    x: [f64; 3],
}

impl UnitPoint3 {
    /// Normalizes `(x1, x2, x3)` if its norm is within [`NORM_REPAIR_TOL`] of 1.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let norm = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_REPAIR_TOL {
            return Err(Error::NotUnit(x1, x2, x3, (norm - 1.0).abs()));
        }
        Ok(Self {
            x: [x1 / norm, x2 / norm, x3 / norm],
        })
    }

    /// Normalizes any nonzero vector onto the sphere.
    pub fn from_vector(v: [f64; 3]) -> Option<Self> {
        let norm = dot(v, v).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        Some(Self {
            x: [v[0] / norm, v[1] / norm, v[2] / norm],
        })
    }

    /// Wraps coordinates already known to be exactly unit length.
    pub(crate) fn from_unit_unchecked(x: [f64; 3]) -> Self {
        Self { x }
    }

    pub fn x1(&self) -> f64 {
        self.x[0]
    }

    pub fn x2(&self) -> f64 {
        self.x[1]
    }

    pub fn x3(&self) -> f64 {
        self.x[2]
    }

    pub fn coords(&self) -> [f64; 3] {
        self.x
    }

    pub fn dot(&self, other: &UnitPoint3) -> f64 {
        dot(self.x, other.x)
    }

    /// Maximum coordinate difference.
    pub fn distance_inf(&self, other: &UnitPoint3) -> f64 {
        (0..3)
            .map(|i| (self.x[i] - other.x[i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn hemisphere(&self) -> Hemisphere {
        Hemisphere::of(self.x[2])
    }
}

impl fmt::Display for UnitPoint3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x[0], self.x[1], self.x[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hemisphere {
    North,
    South,
    Equator,
}

impl Hemisphere {
    pub fn of(x3: f64) -> Self {
        if x3 > EQUATOR_TOL {
            Hemisphere::North
        } else if x3 < -EQUATOR_TOL {
            Hemisphere::South
        } else {
            Hemisphere::Equator
        }
    }

    /// `N`, `S` or `E`.
    pub fn code(&self) -> char {
        match self {
            Hemisphere::North => 'N',
            Hemisphere::South => 'S',
            Hemisphere::Equator => 'E',
        }
    }
}

/// A projected point in the unit disk, tagged with its source hemisphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoPoint {
    pub u: f64,
    pub v: f64,
    pub hemisphere: Hemisphere,
}

impl StereoPoint {
    pub fn radius(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

pub fn project(p: &UnitPoint3) -> StereoPoint {
    let [x1, x2, x3] = p.x;
    let scale = 1.0 + x3.abs();
    StereoPoint {
        u: x1 / scale,
        v: x2 / scale,
        hemisphere: Hemisphere::of(x3),
    }
}

/// Inverse of [`project`]. Points flagged `Equator` are restored with
/// `x3 >= 0`, so their sign below [`EQUATOR_TOL`] is not recovered.
pub fn unproject(s: &StereoPoint) -> Result<UnitPoint3> {
    let r2 = s.u * s.u + s.v * s.v;
    if !(r2 <= 1.0 + 2.0 * EQUATOR_TOL) || !r2.is_finite() {
        return Err(Error::OutsideDisk(s.u, s.v));
    }
    let r2 = r2.min(1.0);
    let a3 = (1.0 - r2) / (1.0 + r2);
    let x3 = match s.hemisphere {
        Hemisphere::South => -a3,
        _ => a3,
    };
    let scale = 1.0 + a3;
    let x = [s.u * scale, s.v * scale, x3];
    // re-normalize away the rounding of the closed form
    UnitPoint3::from_vector(x).ok_or(Error::OutsideDisk(s.u, s.v))
}

/// Stereogram radius of the parallel at `polar_angle` from the nearer pole.
pub fn parallel_radius(polar_angle: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&polar_angle) {
        return Err(Error::AngleOutOfRange(polar_angle));
    }
    Ok((polar_angle / 2.0).tan())
}

/// One hemisphere-consistent piece of a projected curve.
pub type Polyline = Vec<StereoPoint>;

/// Minor great-circle arc from `a` to `b`, sampled at no more than
/// `step_deg` and split into polylines wherever the curve crosses the
/// equator (the fold of the projection).
pub fn great_circle_arc(a: &UnitPoint3, b: &UnitPoint3, step_deg: f64) -> Result<Vec<Polyline>> {
    check_step(step_deg)?;
    let cos = a.dot(b).clamp(-1.0, 1.0);
    if cos < -1.0 + 1e-9 && a.distance_inf(&negate(b)) < 1e-9 {
        return Err(Error::Antipodal);
    }
    let omega = cos.acos();
    if omega < 1e-15 {
        return Ok(vec![vec![project(a)]]);
    }
    let w = orthonormal_in_plane(a, b).ok_or(Error::Antipodal)?;
    let steps = ((omega.to_degrees() / step_deg).ceil() as usize).max(1);
    let samples: Vec<UnitPoint3> = (0..=steps)
        .map(|k| {
            if k == steps {
                *b
            } else {
                circle_point(a, &w, omega * k as f64 / steps as f64)
            }
        })
        .collect();
    Ok(split_at_fold(&samples))
}

/// The full great circle through `a` and `b`, closed back onto `a`.
pub fn great_circle(a: &UnitPoint3, b: &UnitPoint3, step_deg: f64) -> Result<Vec<Polyline>> {
    check_step(step_deg)?;
    let w = orthonormal_in_plane(a, b).ok_or_else(|| {
        Error::Degenerate("great circle through parallel points is undefined".into())
    })?;
    let steps = (360.0 / step_deg).ceil() as usize;
    let samples: Vec<UnitPoint3> = (0..=steps)
        .map(|k| {
            if k == steps {
                *a
            } else {
                circle_point(a, &w, std::f64::consts::TAU * k as f64 / steps as f64)
            }
        })
        .collect();
    Ok(split_at_fold(&samples))
}

fn check_step(step_deg: f64) -> Result<()> {
    if step_deg > 0.0 && step_deg <= 10.0 {
        Ok(())
    } else {
        Err(Error::BadStep(step_deg))
    }
}

fn negate(p: &UnitPoint3) -> UnitPoint3 {
    UnitPoint3::from_unit_unchecked([-p.x[0], -p.x[1], -p.x[2]])
}

fn orthonormal_in_plane(a: &UnitPoint3, b: &UnitPoint3) -> Option<[f64; 3]> {
    let c = a.dot(b);
    let v = [
        b.x[0] - c * a.x[0],
        b.x[1] - c * a.x[1],
        b.x[2] - c * a.x[2],
    ];
    let n = dot(v, v).sqrt();
    if n < 1e-12 {
        return None;
    }
    Some([v[0] / n, v[1] / n, v[2] / n])
}

fn circle_point(a: &UnitPoint3, w: &[f64; 3], theta: f64) -> UnitPoint3 {
    let (s, c) = theta.sin_cos();
    let v = [
        c * a.x[0] + s * w[0],
        c * a.x[1] + s * w[1],
        c * a.x[2] + s * w[2],
    ];
    UnitPoint3::from_vector(v).expect("combination of orthonormal vectors is nonzero")
}

/// Splits sampled sphere points where the hemisphere changes. A direct
/// north/south jump gets the exact equator crossing appended to one piece
/// and prepended to the next; equator samples are shared the same way.
fn split_at_fold(samples: &[UnitPoint3]) -> Vec<Polyline> {
    let mut pieces: Vec<Polyline> = Vec::new();
    let mut current: Polyline = Vec::new();
    let mut side = Hemisphere::Equator;
    let mut prev: Option<&UnitPoint3> = None;
    for p in samples {
        let h = p.hemisphere();
        let sp = project(p);
        let flips = matches!(
            (side, h),
            (Hemisphere::North, Hemisphere::South) | (Hemisphere::South, Hemisphere::North)
        );
        if flips {
            let q = prev.expect("a side is only set after a sample");
            let bridge = if q.hemisphere() == Hemisphere::Equator {
                project(q)
            } else {
                project(&equator_crossing(q, p))
            };
            if current.last() != Some(&bridge) {
                current.push(bridge);
            }
            pieces.push(std::mem::take(&mut current));
            current.push(bridge);
        }
        if h != Hemisphere::Equator {
            side = h;
        }
        current.push(sp);
        prev = Some(p);
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
}

fn equator_crossing(p: &UnitPoint3, q: &UnitPoint3) -> UnitPoint3 {
    let (wp, wq) = (q.x[2].abs(), p.x[2].abs());
    let v = [p.x[0] * wp + q.x[0] * wq, p.x[1] * wp + q.x[1] * wq, 0.0];
    UnitPoint3::from_vector(v).unwrap_or(*p)
}

/// Miller-style direction `[hkl]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Direction {
    h: i32,
    k: i32,
    l: i32,
}

impl Direction {
    pub fn new(h: i32, k: i32, l: i32) -> Result<Self> {
        if h == 0 && k == 0 && l == 0 {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { h, k, l })
    }

    pub fn indices(&self) -> (i32, i32, i32) {
        (self.h, self.k, self.l)
    }

    pub fn unit(&self) -> UnitPoint3 {
        UnitPoint3::from_vector([self.h as f64, self.k as f64, self.l as f64])
            .expect("nonzero by construction")
    }
}

/// `[-110]`: the overbar is written as a leading minus.
impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}{}{}]", self.h, self.k, self.l)
    }
}

/// Parses `111`, `-110` or `[1-10]`. Indices are single digits, each
/// optionally preceded by a minus sign.
impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let bad = || Error::InvalidDesign(format!("bad direction {s:?}"));
        let mut idx = Vec::with_capacity(3);
        let mut chars = body.chars();
        while let Some(c) = chars.next() {
            let (sign, digit) = if c == '-' {
                (-1, chars.next().ok_or_else(bad)?)
            } else {
                (1, c)
            };
            let d = digit.to_digit(10).ok_or_else(bad)? as i32;
            idx.push(sign * d);
        }
        if idx.len() != 3 {
            return Err(bad());
        }
        Direction::new(idx[0], idx[1], idx[2])
    }
}

pub fn direction_mark(d: &Direction) -> StereoPoint {
    project(&d.unit())
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn p(x: f64, y: f64, z: f64) -> UnitPoint3 {
        UnitPoint3::new(x, y, z).unwrap()
    }

    #[test]
    fn constructor_repairs_small_norm_errors_only() {
        let q = p(0.0, 0.0, 1.0 + 5e-7);
        assert_eq!(q.x3(), 1.0);
        assert!(UnitPoint3::new(0.0, 0.0, 1.01).is_err());
        assert!(UnitPoint3::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn projection_examples() {
        let s = project(&p(0.0, 0.0, 1.0));
        assert_eq!((s.u, s.v, s.hemisphere), (0.0, 0.0, Hemisphere::North));
        let s = project(&p(1.0, 0.0, 0.0));
        assert_eq!((s.u, s.v, s.hemisphere), (1.0, 0.0, Hemisphere::Equator));
        let r = 1.0 / 3f64.sqrt();
        let s = project(&p(r, r, r));
        assert!((s.u - 0.3660254).abs() < 1e-7 && (s.v - 0.3660254).abs() < 1e-7);
        assert_eq!(s.hemisphere, Hemisphere::North);
        assert_eq!(project(&p(0.0, 0.0, -1.0)).hemisphere, Hemisphere::South);
    }

    #[test]
    fn unprojection_examples() {
        let q = unproject(&StereoPoint {
            u: 0.0,
            v: 0.0,
            hemisphere: Hemisphere::North,
        })
        .unwrap();
        assert_eq!(q.coords(), [0.0, 0.0, 1.0]);
        let q = unproject(&StereoPoint {
            u: 1.0,
            v: 0.0,
            hemisphere: Hemisphere::Equator,
        })
        .unwrap();
        assert_eq!(q.coords(), [1.0, 0.0, 0.0]);
        let q = unproject(&StereoPoint {
            u: 0.3660254,
            v: 0.3660254,
            hemisphere: Hemisphere::North,
        })
        .unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!(q.distance_inf(&p(r, r, r)) < 1e-7);
        let q = unproject(&StereoPoint {
            u: 0.0,
            v: 0.0,
            hemisphere: Hemisphere::South,
        })
        .unwrap();
        assert_eq!(q.coords(), [0.0, 0.0, -1.0]);
        assert!(unproject(&StereoPoint {
            u: 0.9,
            v: 0.9,
            hemisphere: Hemisphere::North
        })
        .is_err());
    }

    #[test]
    fn parallel_radii() {
        assert!((parallel_radius(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(parallel_radius(0.0).unwrap(), 0.0);
        let r = parallel_radius(FRAC_PI_3).unwrap();
        assert!((r - 0.5773503).abs() < 1e-7);
        let (s, c) = FRAC_PI_3.sin_cos();
        assert!((project(&p(s, 0.0, c)).radius() - r).abs() < 1e-15);
        assert!(parallel_radius(-0.1).is_err());
        assert!(parallel_radius(2.0).is_err());
    }

    #[test]
    fn equatorial_arc_stays_on_unit_circle() {
        let pieces = great_circle_arc(&p(1.0, 0.0, 0.0), &p(0.0, 1.0, 0.0), 1.0).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].len() >= 91);
        for s in &pieces[0] {
            assert_eq!(s.hemisphere, Hemisphere::Equator);
            assert!((s.radius() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn meridian_arc_is_a_radial_segment() {
        let pieces = great_circle_arc(&p(0.0, 0.0, 1.0), &p(1.0, 0.0, 0.0), 1.0).unwrap();
        for s in pieces.iter().flatten() {
            assert!(s.v.abs() < 1e-15);
            assert!((-1e-15..=1.0 + 1e-15).contains(&s.u));
        }
    }

    #[test]
    fn tilted_great_circle_touches_the_equator_at_its_nodes() {
        let pieces = great_circle(&p(1.0, 0.0, 0.0), &p(0.0, 0.6, 0.8), 1.0).unwrap();
        assert!(pieces.len() >= 2);
        let on_rim: Vec<&StereoPoint> = pieces
            .iter()
            .flatten()
            .filter(|s| s.radius() > 1.0 - 1e-9)
            .collect();
        assert!(!on_rim.is_empty());
        for s in &on_rim {
            assert!((s.u.abs() - 1.0).abs() < 1e-9 && s.v.abs() < 1e-9, "{s:?}");
        }
        assert!(on_rim.iter().any(|s| s.u > 0.0));
        assert!(on_rim.iter().any(|s| s.u < 0.0));
        // each piece stays on one side of the fold
        for piece in &pieces {
            let sides: Vec<_> = piece
                .iter()
                .map(|s| s.hemisphere)
                .filter(|h| *h != Hemisphere::Equator)
                .collect();
            assert!(sides.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn fold_crossing_is_inserted_between_samples() {
        // crosses the equator between samples at 10 degree spacing
        let a = p(0.0, 0.3f64.sin(), 0.3f64.cos());
        let b = p(0.0, 2.9f64.sin(), 2.9f64.cos());
        let pieces = great_circle_arc(&a, &b, 10.0).unwrap();
        assert_eq!(pieces.len(), 2);
        let end = pieces[0].last().unwrap();
        assert_eq!(end, &pieces[1][0]);
        assert!((end.radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antipodal_endpoints_are_refused() {
        let err = great_circle_arc(&p(0.0, 0.0, 1.0), &p(0.0, 0.0, -1.0), 1.0);
        assert!(matches!(err, Err(Error::Antipodal)));
        assert!(great_circle_arc(&p(0.0, 0.0, 1.0), &p(1.0, 0.0, 0.0), 0.0).is_err());
        assert!(great_circle_arc(&p(0.0, 0.0, 1.0), &p(1.0, 0.0, 0.0), 11.0).is_err());
    }

    #[test]
    fn direction_marks() {
        let d: Direction = "001".parse().unwrap();
        let s = direction_mark(&d);
        assert_eq!((s.u, s.v, s.hemisphere), (0.0, 0.0, Hemisphere::North));
        let s = direction_mark(&Direction::new(1, 1, 0).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.u - h).abs() < 1e-15 && (s.v - h).abs() < 1e-15);
        assert_eq!(s.hemisphere, Hemisphere::Equator);
        let s = direction_mark(&Direction::new(1, 1, 1).unwrap());
        assert!((s.u - 0.3660254).abs() < 1e-7);
        assert!(matches!(Direction::new(0, 0, 0), Err(Error::ZeroDirection)));
        assert!("000".parse::<Direction>().is_err());
    }

    #[test]
    fn direction_text_round_trip() {
        let d: Direction = "-110".parse().unwrap();
        assert_eq!(d.indices(), (-1, 1, 0));
        assert_eq!(d.to_string(), "[-110]");
        assert_eq!("[1-10]".parse::<Direction>().unwrap().indices(), (1, -1, 0));
        assert!("11".parse::<Direction>().is_err());
        assert!("1x1".parse::<Direction>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unit() -> impl Strategy<Value = UnitPoint3> {
            (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
                let r = (1.0 - z * z).sqrt();
                UnitPoint3::from_vector([r * phi.cos(), r * phi.sin(), z]).unwrap()
            })
        }

        proptest! {
            #[test]
            fn folds_are_symmetric(q in unit()) {
                let [x, y, z] = q.coords();
                let a = project(&UnitPoint3::new(x, y, z).unwrap());
                let b = project(&UnitPoint3::new(x, y, -z).unwrap());
                prop_assert_eq!((a.u, a.v), (b.u, b.v));
                match a.hemisphere {
                    Hemisphere::North => prop_assert_eq!(b.hemisphere, Hemisphere::South),
                    Hemisphere::South => prop_assert_eq!(b.hemisphere, Hemisphere::North),
                    Hemisphere::Equator => prop_assert_eq!(b.hemisphere, Hemisphere::Equator),
                }
            }

            #[test]
            fn projection_stays_in_disk(q in unit()) {
                let s = project(&q);
                prop_assert!(s.u * s.u + s.v * s.v <= 1.0 + 1e-9);
            }

            #[test]
            fn equatorial_angles_are_preserved(a in 0.0f64..std::f64::consts::TAU, b in 0.0f64..std::f64::consts::TAU) {
                let pa = project(&UnitPoint3::from_vector([a.cos(), a.sin(), 0.0]).unwrap());
                let pb = project(&UnitPoint3::from_vector([b.cos(), b.sin(), 0.0]).unwrap());
                let seen = (pa.u * pb.u + pa.v * pb.v).clamp(-1.0, 1.0).acos();
                let mut diff = (a - b).abs();
                if diff > std::f64::consts::PI {
                    diff = std::f64::consts::TAU - diff;
                }
                prop_assert!((seen - diff).abs() < 1e-7);
            }
        }
    }
}
