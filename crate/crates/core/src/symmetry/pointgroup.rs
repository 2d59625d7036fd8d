//! Point-group detection for finite point sets on S².

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;

use super::SymmetryOperation;
use crate::error::{Error, Result};
use crate::sphere::UnitPoint3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGroupOptions {
    /// Matching tolerance on point coordinates.
    pub tol: f64,
    /// Largest proper rotation order tested; improper orders go to twice this.
    pub max_order: usize,
}

impl Default for PointGroupOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_order: 10,
        }
    }
}

/// Schönflies symbol of a point group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointGroupLabel {
    C1,
    Cs,
    Ci,
    Cn(usize),
    Cnv(usize),
    Cnh(usize),
    S2n(usize),
    Dn(usize),
    Dnh(usize),
    Dnd(usize),
    T,
    Td,
    Th,
    O,
    Oh,
    I,
    Ih,
    /// Collinear set without inversion symmetry.
    LinearCv,
    /// Collinear set with inversion symmetry.
    LinearDh,
}

impl fmt::Display for PointGroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PointGroupLabel::*;
        match self {
            C1 => write!(f, "C1"),
            Cs => write!(f, "Cs"),
            Ci => write!(f, "Ci"),
            Cn(n) => write!(f, "C{n}"),
            Cnv(n) => write!(f, "C{n}v"),
            Cnh(n) => write!(f, "C{n}h"),
            S2n(n) => write!(f, "S{}", 2 * n),
            Dn(n) => write!(f, "D{n}"),
            Dnh(n) => write!(f, "D{n}h"),
            Dnd(n) => write!(f, "D{n}d"),
            T => write!(f, "T"),
            Td => write!(f, "Td"),
            Th => write!(f, "Th"),
            O => write!(f, "O"),
            Oh => write!(f, "Oh"),
            I => write!(f, "I"),
            Ih => write!(f, "Ih"),
            LinearCv => write!(f, "C∞v"),
            LinearDh => write!(f, "D∞h"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PointGroup {
    pub label: PointGroupLabel,
    /// Every operation found, identity first. For collinear sets this is
    /// the finite subgroup with rotation order `max_order`.
    pub ops: Vec<SymmetryOperation>,
}

impl PointGroup {
    pub fn order(&self) -> usize {
        self.ops.len()
    }
}

pub fn detect_point_group(points: &[UnitPoint3], tol: f64) -> Result<PointGroup> {
    detect_point_group_with(
        points,
        None,
        PointGroupOptions {
            tol,
            ..PointGroupOptions::default()
        },
    )
}

/// Detects the symmetry group of a point set. With `weights`, operations
/// must also map each point to one of equal weight (to `tol`).
pub fn detect_point_group_with(
    points: &[UnitPoint3],
    weights: Option<&[f64]>,
    opts: PointGroupOptions,
) -> Result<PointGroup> {
    if points.is_empty() {
        return Err(Error::EmptyDesign);
    }
    if let Some(w) = weights {
        if w.len() != points.len() {
            return Err(Error::InvalidDesign(
                "weight count does not match point count".into(),
            ));
        }
    }
    let pts: Vec<Vector3<f64>> = points.iter().map(|p| Vector3::from(p.coords())).collect();
    if pts.iter().all(|p| (p - pts[0]).amax() <= opts.tol) {
        return Err(Error::Degenerate("all points are identical".into()));
    }
    let matcher = Matcher {
        pts: &pts,
        weights,
        tol: opts.tol,
    };

    if let Some(axis) = common_axis(&pts, opts.tol) {
        let inv = SymmetryOperation::inversion();
        let symmetric = matcher.preserves(&inv);
        let ops = linear_group(axis, opts.max_order, symmetric);
        let label = if symmetric {
            PointGroupLabel::LinearDh
        } else {
            PointGroupLabel::LinearCv
        };
        return Ok(PointGroup { label, ops });
    }

    let mut gens = vec![SymmetryOperation::identity()];
    let inversion = SymmetryOperation::inversion();
    if matcher.preserves(&inversion) {
        gens.push(inversion);
    }
    for axis in candidate_axes(&pts, opts.tol) {
        let a: [f64; 3] = axis.into();
        for n in 2..=opts.max_order {
            let g = SymmetryOperation::rotation(a, 2.0 * PI / n as f64);
            if matcher.preserves(&g) {
                gens.push(g);
            }
        }
        let m = SymmetryOperation::reflection(a);
        if matcher.preserves(&m) {
            gens.push(m);
        }
        for n in 3..=2 * opts.max_order {
            let g = SymmetryOperation::rotoreflection(a, 2.0 * PI / n as f64);
            if matcher.preserves(&g) {
                gens.push(g);
            }
        }
    }
    let mut ops = dedup_ops(gens, opts.tol);
    close_group(&mut ops, opts.tol);
    ops.retain(|g| matcher.preserves(g));
    let label = classify(&ops);
    Ok(PointGroup { label, ops })
}

struct Matcher<'a> {
    pts: &'a [Vector3<f64>],
    weights: Option<&'a [f64]>,
    tol: f64,
}

impl Matcher<'_> {
    /// Greedy nearest-neighbour matching; succeeds only for a bijection.
    fn preserves(&self, g: &SymmetryOperation) -> bool {
        let mut used = vec![false; self.pts.len()];
        for (i, p) in self.pts.iter().enumerate() {
            let q = g.matrix() * p;
            let mut best: Option<(usize, f64)> = None;
            for (j, r) in self.pts.iter().enumerate() {
                if used[j] {
                    continue;
                }
                if let Some(w) = self.weights {
                    if (w[i] - w[j]).abs() > self.tol {
                        continue;
                    }
                }
                let d = (q - r).amax();
                if d <= self.tol && best.is_none_or(|b| d < b.1) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, _)) => used[j] = true,
                None => return false,
            }
        }
        true
    }
}

fn common_axis(pts: &[Vector3<f64>], tol: f64) -> Option<Vector3<f64>> {
    let axis = pts
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))?
        .normalize();
    pts.iter()
        .all(|p| p.cross(&axis).amax() <= tol)
        .then_some(axis)
}

fn linear_group(axis: Vector3<f64>, order: usize, inversion: bool) -> Vec<SymmetryOperation> {
    let a: [f64; 3] = axis.into();
    let perp = if axis.x.abs() < 0.9 {
        axis.cross(&Vector3::x())
    } else {
        axis.cross(&Vector3::y())
    }
    .normalize();
    let mut ops = Vec::new();
    for k in 0..order {
        let r = SymmetryOperation::rotation(a, 2.0 * PI * k as f64 / order as f64);
        ops.push(r);
        // mirrors containing the axis
        let n = r.apply(perp.into());
        ops.push(SymmetryOperation::reflection(n));
    }
    if inversion {
        let inv = SymmetryOperation::inversion();
        let extra: Vec<_> = ops.iter().map(|g| inv.compose(g)).collect();
        ops.extend(extra);
    }
    ops
}

fn canonical_sign(v: Vector3<f64>, tol: f64) -> Vector3<f64> {
    for k in 0..3 {
        if v[k].abs() > tol {
            return if v[k] < 0.0 { -v } else { v };
        }
    }
    v
}

/// Axes through points, pair midpoints, pair bisecting-plane normals and
/// normals of planes through point triples, deduplicated up to sign.
fn candidate_axes(pts: &[Vector3<f64>], tol: f64) -> Vec<Vector3<f64>> {
    let mut raw: Vec<Vector3<f64>> = Vec::new();
    let mut push = |v: Vector3<f64>| {
        let n = v.norm();
        if n > 1e-8 {
            raw.push(canonical_sign(v / n, 1e-9));
        }
    };
    for (i, a) in pts.iter().enumerate() {
        push(*a);
        for b in &pts[..i] {
            push(a + b);
            push(a - b);
            push(a.cross(b));
            for c in &pts[..i] {
                if std::ptr::eq(b, c) {
                    break;
                }
                push((b - a).cross(&(c - a)));
            }
        }
    }
    raw.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.y.total_cmp(&b.y))
            .then(a.z.total_cmp(&b.z))
    });
    let mut out: Vec<Vector3<f64>> = Vec::new();
    for v in raw {
        let dup = out
            .iter()
            .rev()
            .take_while(|u| v.x - u.x <= tol)
            .any(|u| (v - u).amax() <= tol);
        if !dup {
            out.push(v);
        }
    }
    out
}

fn dedup_ops(ops: Vec<SymmetryOperation>, tol: f64) -> Vec<SymmetryOperation> {
    let mut out: Vec<SymmetryOperation> = Vec::new();
    for g in ops {
        if !out.iter().any(|h| h.distance(&g) <= tol) {
            out.push(g);
        }
    }
    out
}

fn close_group(ops: &mut Vec<SymmetryOperation>, tol: f64) {
    let mut start = 0;
    while start < ops.len() {
        let end = ops.len();
        let mut fresh = Vec::new();
        for i in 0..end {
            for j in 0..end {
                if i < start && j < start {
                    continue;
                }
                let g = ops[i].compose(&ops[j]);
                if !ops.iter().chain(&fresh).any(|h| h.distance(&g) <= tol) {
                    fresh.push(g);
                }
            }
        }
        start = end;
        ops.extend(fresh);
        if ops.len() > 240 {
            // a finite point group has at most 120 elements
            break;
        }
    }
}

fn rotation_axis(g: &SymmetryOperation) -> Vector3<f64> {
    let m = if g.is_proper() {
        *g.matrix()
    } else {
        -g.matrix()
    };
    let skew = Vector3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    );
    if skew.norm() > 1e-6 {
        return skew.normalize();
    }
    // half turn: columns of M + I span the axis
    let p = m + nalgebra::Matrix3::identity();
    let col = (0..3)
        .map(|k| p.column(k).into_owned())
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three columns");
    col.normalize()
}

fn classify(ops: &[SymmetryOperation]) -> PointGroupLabel {
    use PointGroupLabel::*;
    let order = ops.len();
    let proper: Vec<_> = ops.iter().filter(|g| g.is_proper()).collect();
    let n_proper = proper.len();
    let has_inversion = ops
        .iter()
        .any(|g| g.distance(&SymmetryOperation::inversion()) < 1e-6);
    let mirrors = ops
        .iter()
        .filter(|g| !g.is_proper() && (g.matrix().trace() - 1.0).abs() < 1e-6)
        .count();

    // rotation axes with their orders
    let mut axes: Vec<(Vector3<f64>, usize)> = Vec::new();
    for g in proper.iter().filter(|g| g.angle() > 1e-6) {
        let a = canonical_sign(rotation_axis(g), 1e-6);
        match axes.iter_mut().find(|(b, _)| (a - b).amax() < 1e-5) {
            Some(entry) => entry.1 += 1,
            None => axes.push((a, 1)),
        }
    }
    let axis_orders: Vec<usize> = axes.iter().map(|(_, c)| c + 1).collect();
    let high_axes = axis_orders.iter().filter(|&&k| k >= 3).count();
    let n = axis_orders.iter().copied().max().unwrap_or(1);

    if high_axes >= 2 {
        return match (n, has_inversion, order) {
            (5, true, _) => Ih,
            (5, false, _) => I,
            (4, _, 48) => Oh,
            (4, _, _) => O,
            (_, _, 12) => T,
            (_, true, _) => Th,
            _ => Td,
        };
    }
    if n_proper == 2 * n && n >= 2 {
        return if order == n_proper {
            Dn(n)
        } else if mirrors == n + 1 {
            Dnh(n)
        } else {
            Dnd(n)
        };
    }
    if order == n_proper {
        return if n == 1 { C1 } else { Cn(n) };
    }
    match (n, mirrors) {
        (1, 0) => Ci,
        (1, _) => Cs,
        (_, 0) => S2n(n),
        (_, 1) => Cnh(n),
        _ => Cnv(n),
    }
}

/// Orbit labels `1..`: orbits are numbered by decreasing `|x3|` of their
/// members (inner rings of the stereogram first), then by first index.
pub fn label_orbits(points: &[UnitPoint3], ops: &[SymmetryOperation], tol: f64) -> Vec<u32> {
    let n = points.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![i];
        orbit_of[i] = id;
        for g in ops {
            let q = g.apply(points[i].coords());
            let near = |j: &usize| {
                let x = points[*j].coords();
                (0..3).all(|k| (x[k] - q[k]).abs() <= tol)
            };
            if let Some(j) = (0..n).find(near) {
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    members.push(j);
                }
            }
        }
        orbits.push(members);
    }
    let key = |o: &Vec<usize>| {
        o.iter()
            .map(|&i| points[i].x3().abs())
            .fold(0.0f64, f64::max)
    };
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.sort_by(|&a, &b| {
        key(&orbits[b])
            .total_cmp(&key(&orbits[a]))
            .then(orbits[a][0].cmp(&orbits[b][0]))
    });
    let mut label = vec![0u32; orbits.len()];
    for (rank, &o) in order.iter().enumerate() {
        label[o] = rank as u32 + 1;
    }
    orbit_of.iter().map(|&o| label[o]).collect()
}
