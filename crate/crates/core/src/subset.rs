//! Subset designs on the unit ball built from the centre and three orbits
//! of the cube: face normals, edge midpoints and vertices.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::design::SphericalDesign;
use crate::error::{Error, Result};
use crate::sphere::UnitPoint3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubsetSet {
    /// The centre point.
    S0,
    /// `(±1, 0, 0)` cycled.
    S1,
    /// `(±1/√2, ±1/√2, 0)` cycled.
    S2,
    /// `(±1/√3, ±1/√3, ±1/√3)`.
    S3,
}

impl SubsetSet {
    pub const ALL: [SubsetSet; 4] = [SubsetSet::S0, SubsetSet::S1, SubsetSet::S2, SubsetSet::S3];

    pub fn size(&self) -> usize {
        match self {
            SubsetSet::S0 => 1,
            SubsetSet::S1 => 6,
            SubsetSet::S2 => 12,
            SubsetSet::S3 => 8,
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

fn cycles(p: [f64; 3]) -> [[f64; 3]; 3] {
    [p, [p[2], p[0], p[1]], [p[1], p[2], p[0]]]
}

const SIGNS: [f64; 2] = [1.0, -1.0];

/// Raw coordinates of one set, in a fixed order. `S0` is the origin.
pub fn subset_coords(which: SubsetSet) -> Vec<[f64; 3]> {
    match which {
        SubsetSet::S0 => vec![[0.0; 3]],
        SubsetSet::S1 => SIGNS.iter().flat_map(|&s| cycles([s, 0.0, 0.0])).collect(),
        SubsetSet::S2 => {
            let h = FRAC_1_SQRT_2;
            SIGNS
                .iter()
                .flat_map(|&a| SIGNS.iter().map(move |&b| [a * h, b * h, 0.0]))
                .flat_map(cycles)
                .collect()
        }
        SubsetSet::S3 => {
            let r = 1.0 / 3f64.sqrt();
            SIGNS
                .iter()
                .flat_map(|&a| {
                    SIGNS
                        .iter()
                        .flat_map(move |&b| SIGNS.iter().map(move |&c| [a * r, b * r, c * r]))
                })
                .collect()
        }
    }
}

/// Sphere points of `S1`, `S2` or `S3`; empty for `S0`.
pub fn subset_points(which: SubsetSet) -> Vec<UnitPoint3> {
    if which == SubsetSet::S0 {
        return Vec::new();
    }
    subset_coords(which)
        .into_iter()
        .map(UnitPoint3::from_unit_unchecked)
        .collect()
}

/// How a coefficient `c_i` turns into weight on the points of `S_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// `c_i` copies of every point: `S0 + S1 + 2 S2` is two copies of `S2`.
    Multiplicity,
    /// `c_i` is the total mass of `S_i`, spread evenly over its points.
    SetMass,
}

/// Coefficients of `c0 S0 + c1 S1 + c2 S2 + c3 S3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetCoefficients {
    c: [f64; 4],
    mode: CoefficientMode,
}

impl SubsetCoefficients {
    /// Per-point multiplicities.
    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::with_mode(c0, c1, c2, c3, CoefficientMode::Multiplicity)
    }

    /// Total mass per set.
    pub fn set_masses(c0: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::with_mode(c0, c1, c2, c3, CoefficientMode::SetMass)
    }

    pub fn with_mode(c0: f64, c1: f64, c2: f64, c3: f64, mode: CoefficientMode) -> Result<Self> {
        let c = [c0, c1, c2, c3];
        if c.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::BadCoefficients(
                "coefficients must be finite and >= 0".into(),
            ));
        }
        if c0 <= 0.0 {
            return Err(Error::BadCoefficients("c0 must be positive".into()));
        }
        if c1 == 0.0 && c2 == 0.0 && c3 == 0.0 {
            return Err(Error::BadCoefficients("no points on the sphere".into()));
        }
        Ok(Self { c, mode })
    }

    pub fn get(&self, which: SubsetSet) -> f64 {
        self.c[which.index()]
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    /// Unnormalized mass placed on each single point of `which`.
    fn point_mass(&self, which: SubsetSet) -> f64 {
        match self.mode {
            CoefficientMode::Multiplicity => self.get(which),
            CoefficientMode::SetMass => self.get(which) / which.size() as f64,
        }
    }

    /// `Σ c_j |S_j|` for multiplicities, `Σ c_j` for set masses.
    pub fn total_mass(&self) -> f64 {
        SubsetSet::ALL
            .iter()
            .map(|s| self.point_mass(*s) * s.size() as f64)
            .sum()
    }
}

/// Parses `"c0,c1,c2,c3"`; each entry may be a fraction such as `9/17`.
impl std::str::FromStr for SubsetCoefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| parse_ratio(t.trim()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::BadCoefficients(format!("cannot parse {s:?}")))?;
        if vals.len() != 4 {
            return Err(Error::BadCoefficients(format!(
                "expected 4 values in {s:?}"
            )));
        }
        Self::new(vals[0], vals[1], vals[2], vals[3])
    }
}

fn parse_ratio(t: &str) -> Option<f64> {
    match t.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (n.trim().parse::<f64>().ok()?, d.trim().parse::<f64>().ok()?);
            (d != 0.0).then(|| n / d)
        }
        None => t.parse().ok(),
    }
}

/// Named classical subset designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedDesign {
    /// Central composite: `S0 + S1 + S3`.
    CentralComposite,
    /// Box–Behnken: `S0 + S2`.
    BoxBehnken,
    /// Rotatable: `S0 + S1 + 2 S2`.
    Rotatable,
    /// Approximate E-optimal: `9/17 S0 + 3/17 S1 + 5/17 S3`.
    EOptimal,
}

impl NamedDesign {
    pub fn coefficients(&self) -> SubsetCoefficients {
        let c = match self {
            NamedDesign::CentralComposite => [1.0, 1.0, 0.0, 1.0],
            NamedDesign::BoxBehnken => [1.0, 0.0, 1.0, 0.0],
            NamedDesign::Rotatable => [1.0, 1.0, 2.0, 0.0],
            NamedDesign::EOptimal => {
                return SubsetCoefficients::set_masses(9.0 / 17.0, 3.0 / 17.0, 0.0, 5.0 / 17.0)
                    .expect("valid constants");
            }
        };
        SubsetCoefficients::new(c[0], c[1], c[2], c[3]).expect("valid constants")
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ccd" => Some(NamedDesign::CentralComposite),
            "bbd" => Some(NamedDesign::BoxBehnken),
            "rotatable" => Some(NamedDesign::Rotatable),
            "eoptimal" => Some(NamedDesign::EOptimal),
            _ => None,
        }
    }
}

/// The design measure of `c0 S0 + c1 S1 + c2 S2 + c3 S3`. With
/// multiplicities each point of `S_i` weighs `c_i / Σ c_j |S_j|` and the
/// centre `c0 / Σ c_j |S_j|`; with set masses `S_i` receives `c_i / Σ c_j`.
/// Orbit labels are 1, 2, 3 by source set.
pub fn build_subset_design(c: &SubsetCoefficients) -> Result<SphericalDesign> {
    let total = c.total_mass();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut labels = Vec::new();
    for (label, set) in [(1, SubsetSet::S1), (2, SubsetSet::S2), (3, SubsetSet::S3)] {
        let ci = c.point_mass(set);
        if ci == 0.0 {
            continue;
        }
        for p in subset_points(set) {
            points.push(p);
            weights.push(ci / total);
            labels.push(label);
        }
    }
    let center = c.point_mass(SubsetSet::S0) / total;
    // summing 27 rationals can drift from 1 by a few ulps
    let drift = 1.0 - center - weights.iter().sum::<f64>();
    let center = center + drift;
    SphericalDesign::weighted(points, weights, center)?.with_orbit_labels(labels)
}

/// Moment `Σ w x1^a x2^b x3^c` of the whole measure, centre included.
pub fn ball_moment(d: &SphericalDesign, a: i32, b: i32, c: i32) -> f64 {
    let mut m: f64 = d
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| d.mass(i) * p.x1().powi(a) * p.x2().powi(b) * p.x3().powi(c))
        .sum();
    if a == 0 && b == 0 && c == 0 {
        m += d.center_weight();
    }
    m
}
