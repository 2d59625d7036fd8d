//! Weighted point designs on the sphere, optionally with mass at the centre
//! of the ball, and their text formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sphere::UnitPoint3;

/// Total design mass must equal 1 within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Points closer than this (max-norm) are considered the same point.
pub const DISTINCT_TOL: f64 = 1e-9;

/// A design measure: distinct sphere points, each carrying `replication`
/// runs of `weight` apiece, plus an optional mass at the centre.
///
/// The total mass `center_weight + sum(weight * replication)` is always 1.
/// Approximate (measure) designs have replication 1 everywhere; exact
/// designs have weight `1/n` per run.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDesign {
    points: Vec<UnitPoint3>,
    weights: Vec<f64>,
    replication: Vec<u32>,
    center_weight: f64,
    orbit_label: Vec<u32>,
}

impl SphericalDesign {
    /// Equal weights `1/N` on `N` distinct points.
    pub fn equal_weights(points: Vec<UnitPoint3>) -> Result<Self> {
        let n = points.len();
        Self::exact(points, vec![1; n], 0)
    }

    /// An exact design of `sum(replication) + center_runs` runs.
    pub fn exact(points: Vec<UnitPoint3>, replication: Vec<u32>, center_runs: u32) -> Result<Self> {
        if replication.len() != points.len() {
            return Err(Error::InvalidDesign("replication length mismatch".into()));
        }
        if replication.contains(&0) {
            return Err(Error::InvalidDesign("replication must be positive".into()));
        }
        let runs: u32 = replication.iter().sum::<u32>() + center_runs;
        if runs == 0 {
            return Err(Error::EmptyDesign);
        }
        let w = 1.0 / runs as f64;
        let n = points.len();
        let design = Self {
            points,
            weights: vec![w; n],
            replication,
            center_weight: center_runs as f64 * w,
            orbit_label: vec![0; n],
        };
        design.check_distinct()?;
        Ok(design)
    }

    /// An approximate design. Every weight must lie in `[0, 1)` and the
    /// weights plus `center_weight` must sum to 1.
    pub fn weighted(
        points: Vec<UnitPoint3>,
        weights: Vec<f64>,
        center_weight: f64,
    ) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::InvalidDesign("weight length mismatch".into()));
        }
        if let Some(&w) = weights.iter().find(|w| !(0.0..1.0).contains(*w)) {
            return Err(Error::BadWeight(w));
        }
        if !(0.0..1.0).contains(&center_weight) {
            return Err(Error::BadWeight(center_weight));
        }
        let total = center_weight + weights.iter().sum::<f64>();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum(total));
        }
        let n = points.len();
        let design = Self {
            points,
            weights,
            replication: vec![1; n],
            center_weight,
            orbit_label: vec![0; n],
        };
        design.check_distinct()?;
        Ok(design)
    }

    pub fn with_orbit_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidDesign("orbit label length mismatch".into()));
        }
        self.orbit_label = labels;
        Ok(self)
    }

    fn check_distinct(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[..i] {
                if p.distance_inf(q) <= DISTINCT_TOL {
                    return Err(Error::InvalidDesign(format!(
                        "duplicate point {p}; use replication instead"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[UnitPoint3] {
        &self.points
    }

    /// Weight of a single run at each point.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn replication(&self) -> &[u32] {
        &self.replication
    }

    pub fn center_weight(&self) -> f64 {
        self.center_weight
    }

    pub fn orbit_labels(&self) -> &[u32] {
        &self.orbit_label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total mass at point `i` (run weight times replication).
    pub fn mass(&self, i: usize) -> f64 {
        self.weights[i] * self.replication[i] as f64
    }

    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.mass(i))
    }

    /// Number of runs on the sphere (replication counted).
    pub fn sphere_runs(&self) -> u32 {
        self.replication.iter().sum()
    }

    /// The sphere points alone, masses rescaled to sum to 1.
    pub fn sphere_part(&self) -> Result<SphericalDesign> {
        let total: f64 = self.masses().sum();
        if self.is_empty() || total <= 0.0 {
            return Err(Error::EmptyDesign);
        }
        let mut d = self.clone();
        for w in &mut d.weights {
            *w /= total;
        }
        d.center_weight = 0.0;
        Ok(d)
    }
}

/// Input layouts for [`load_point_file`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    /// Whitespace-separated coordinates, three per point, equal weights.
    SloanePlain,
    /// One `x1 x2 x3 w` line per point.
    GraefWeighted,
    /// The `spheredesign v1` export written by [`to_native_string`].
    Native,
}

pub fn load_point_file(path: impl AsRef<Path>, format: PointFormat) -> Result<SphericalDesign> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_points(&text, format).map_err(|e| match e {
        Error::Parse { line, msg, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
        other => other,
    })
}

pub fn parse_points(text: &str, format: PointFormat) -> Result<SphericalDesign> {
    match format {
        PointFormat::SloanePlain => parse_sloane(text),
        PointFormat::GraefWeighted => parse_graef(text),
        PointFormat::Native => parse_native(text),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: Default::default(),
        line,
        msg: msg.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_err(line, format!("not a number: {tok:?}")))
}

fn unit(x: f64, y: f64, z: f64, line: usize) -> Result<UnitPoint3> {
    UnitPoint3::new(x, y, z).map_err(|e| parse_err(line, e.to_string()))
}

fn parse_sloane(text: &str) -> Result<SphericalDesign> {
    let mut values = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            values.push((number(tok, ln + 1)?, ln + 1));
        }
    }
    if values.len() % 3 != 0 {
        return Err(parse_err(
            values.last().map_or(0, |v| v.1),
            format!("{} values is not a multiple of 3", values.len()),
        ));
    }
    let points = values
        .chunks(3)
        .map(|c| unit(c[0].0, c[1].0, c[2].0, c[2].1))
        .collect::<Result<Vec<_>>>()?;
    if points.is_empty() {
        return Err(Error::EmptyDesign);
    }
    SphericalDesign::equal_weights(points)
}

fn parse_graef(text: &str) -> Result<SphericalDesign> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 4 {
            return Err(parse_err(
                ln + 1,
                format!("expected 4 fields, found {}", toks.len()),
            ));
        }
        let v = toks
            .iter()
            .map(|t| number(t, ln + 1))
            .collect::<Result<Vec<_>>>()?;
        if v[3] <= 0.0 {
            return Err(parse_err(ln + 1, format!("non-positive weight {}", v[3])));
        }
        points.push(unit(v[0], v[1], v[2], ln + 1)?);
        weights.push(v[3]);
    }
    if points.is_empty() {
        return Err(Error::EmptyDesign);
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() >= 1e-6 {
        return Err(Error::WeightSum(total));
    }
    for w in &mut weights {
        *w /= total;
    }
    SphericalDesign::weighted(points, weights, 0.0)
}

const NATIVE_MAGIC: &str = "spheredesign v1";

/// Header `spheredesign v1 N center=<w>`, then `x1 x2 x3 w rep orbit` per
/// point, reals with 17 significant digits.
pub fn to_native_string(d: &SphericalDesign) -> String {
    let mut s = format!(
        "{NATIVE_MAGIC} {} center={:.16e}\n",
        d.len(),
        d.center_weight
    );
    for i in 0..d.len() {
        let [x, y, z] = d.points[i].coords();
        let _ = writeln!(
            s,
            "{x:.16e} {y:.16e} {z:.16e} {:.16e} {} {}",
            d.weights[i], d.replication[i], d.orbit_label[i]
        );
    }
    s
}

pub fn save_native(d: &SphericalDesign, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_native_string(d))?;
    Ok(())
}

fn parse_native(text: &str) -> Result<SphericalDesign> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyDesign)?;
    let rest = header
        .strip_prefix(NATIVE_MAGIC)
        .ok_or_else(|| parse_err(1, "missing spheredesign v1 header"))?;
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(1, "header must be: spheredesign v1 N center=<w>"));
    }
    let n: usize = toks[0]
        .parse()
        .map_err(|_| parse_err(1, format!("bad point count {:?}", toks[0])))?;
    let center = toks[1]
        .strip_prefix("center=")
        .ok_or_else(|| parse_err(1, "missing center="))
        .and_then(|v| number(v, 1))?;

    let (mut points, mut weights, mut reps, mut labels) = (vec![], vec![], vec![], vec![]);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 6 {
            return Err(parse_err(
                ln + 1,
                format!("expected 6 fields, found {}", toks.len()),
            ));
        }
        let x = number(toks[0], ln + 1)?;
        let y = number(toks[1], ln + 1)?;
        let z = number(toks[2], ln + 1)?;
        points.push(unit(x, y, z, ln + 1)?);
        weights.push(number(toks[3], ln + 1)?);
        let int = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| parse_err(ln + 1, format!("not an integer: {t:?}")))
        };
        reps.push(int(toks[4])?);
        labels.push(int(toks[5])?);
    }
    if points.len() != n {
        return Err(parse_err(
            1,
            format!("header says {n} points, found {}", points.len()),
        ));
    }
    if points.is_empty() && center <= 0.0 {
        return Err(Error::EmptyDesign);
    }
    if reps.contains(&0) {
        return Err(Error::InvalidDesign("replication must be positive".into()));
    }
    if weights
        .iter()
        .chain([&center])
        .any(|w| !(0.0..=1.0).contains(w))
    {
        return Err(Error::InvalidDesign("weights must lie in [0, 1]".into()));
    }
    let total: f64 = center
        + weights
            .iter()
            .zip(&reps)
            .map(|(w, &r)| w * r as f64)
            .sum::<f64>();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::WeightSum(total));
    }
    let design = SphericalDesign {
        points,
        weights,
        replication: reps,
        center_weight: center,
        orbit_label: labels,
    };
    design.check_distinct()?;
    Ok(design)
}

/// One orbit: its label, point count, total mass, and the shared polar
/// angle (from the nearer pole) when every point has the same `|x3|`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSummary {
    pub label: u32,
    pub size: usize,
    pub weight: f64,
    pub polar_angle: Option<f64>,
}

/// Orbits in ascending label order.
pub fn orbit_summaries(d: &SphericalDesign) -> Vec<OrbitSummary> {
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in d.orbit_label.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(label, idx)| {
            let abs_z: Vec<f64> = idx.iter().map(|&i| d.points[i].x3().abs()).collect();
            let (lo, hi) = abs_z
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &z| {
                    (lo.min(z), hi.max(z))
                });
            let polar_angle = (hi - lo <= 1e-6).then(|| ((lo + hi) / 2.0).min(1.0).acos());
            OrbitSummary {
                label,
                size: idx.len(),
                weight: idx.iter().map(|&i| d.mass(i)).sum(),
                polar_angle,
            }
        })
        .collect()
}
