//! Stereogram scenes and their SVG serialization.
//!
//! Scene coordinates live in the unit disk of the projection plane. The
//! renderer maps that disk onto a square canvas with `v` pointing up.

mod svg;

use std::fmt::Write as _;

use crate::design::SphericalDesign;
use crate::error::{Error, Result};
use crate::sphere::{
    direction_mark, great_circle_arc, parallel_radius, project, Direction, Hemisphere, Polyline,
    StereoPoint, UnitPoint3,
};

pub use svg::render_svg;

/// Mark radius without weight scaling, in pixels at the reference size.
pub const DEFAULT_MARK_RADIUS: f64 = 5.0;
/// Radius of the heaviest mark when areas follow weights.
pub const MAX_MARK_RADIUS: f64 = 12.0;
/// Canvas size at which mark radii are specified.
pub const REFERENCE_SIZE: f64 = 600.0;
/// How far labels may sit outside the unit disk.
pub const LABEL_ALLOWANCE: f64 = 0.15;

const LABEL_OFFSET: f64 = 0.04;
const ARC_STEP_DEG: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillStyle {
    Solid,
    Open,
}

impl FillStyle {
    pub fn of(h: Hemisphere) -> Self {
        match h {
            Hemisphere::South => FillStyle::Open,
            Hemisphere::North | Hemisphere::Equator => FillStyle::Solid,
        }
    }
}

/// Colour assignment for orbit labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// Label 0 black, 1 red, 2 blue, then green, orange, purple, cycling.
    #[default]
    Orbit,
    /// Subset-design source sets: 1 (S1) black, 2 (S2) blue, 3 (S3) red.
    SubsetSets,
}

const ORBIT_COLORS: [&str; 6] = ["black", "red", "blue", "green", "orange", "purple"];

impl Palette {
    pub fn color(&self, label: u32) -> &'static str {
        match (self, label) {
            (Palette::SubsetSets, 1) => "black",
            (Palette::SubsetSets, 2) => "blue",
            (Palette::SubsetSets, 3) => "red",
            _ => ORBIT_COLORS[label as usize % ORBIT_COLORS.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub size_px: u32,
    pub margin_px: u32,
    pub polar_net: bool,
    pub net_step_deg: f64,
    pub weight_areas: bool,
    pub color_by_orbit: bool,
    pub directions: Vec<Direction>,
    pub palette: Palette,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            size_px: 600,
            margin_px: 40,
            polar_net: false,
            net_step_deg: 30.0,
            weight_areas: false,
            color_by_orbit: false,
            directions: Vec::new(),
            palette: Palette::Orbit,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.size_px < 100 {
            return Err(Error::InvalidDesign(format!(
                "canvas size {} is below 100 px",
                self.size_px
            )));
        }
        if 2 * self.margin_px >= self.size_px {
            return Err(Error::InvalidDesign("margin leaves no drawing area".into()));
        }
        if !(self.net_step_deg > 0.0 && self.net_step_deg <= 90.0) {
            return Err(Error::BadStep(self.net_step_deg));
        }
        Ok(())
    }

    /// Pixels per unit of the projection plane.
    pub fn scale(&self) -> f64 {
        self.size_px as f64 / 2.0 - self.margin_px as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    PointMark {
        point: StereoPoint,
        fill: FillStyle,
        color: &'static str,
        /// Pixels at the reference canvas size.
        radius_px: f64,
    },
    Circle {
        center: (f64, f64),
        radius: f64,
    },
    Polyline {
        points: Vec<(f64, f64)>,
        color: &'static str,
        width: f64,
    },
    Label {
        text: String,
        anchor: (f64, f64),
    },
}

/// Primitives grouped in drawing order: frame, net, arcs, points, labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StereogramScene {
    net: Vec<Primitive>,
    arcs: Vec<Primitive>,
    points: Vec<Primitive>,
    labels: Vec<Primitive>,
}

impl StereogramScene {
    pub fn new() -> Self {
        Self::default()
    }

    /// The equator: a unit circle at the origin.
    pub fn frame() -> Primitive {
        Primitive::Circle {
            center: (0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn net(&self) -> &[Primitive] {
        &self.net
    }

    pub fn arcs(&self) -> &[Primitive] {
        &self.arcs
    }

    pub fn points(&self) -> &[Primitive] {
        &self.points
    }

    pub fn labels(&self) -> &[Primitive] {
        &self.labels
    }

    /// Every primitive in drawing order, frame first.
    pub fn primitives(&self) -> Vec<Primitive> {
        let mut out = vec![Self::frame()];
        out.extend(self.net.iter().cloned());
        out.extend(self.arcs.iter().cloned());
        out.extend(self.points.iter().cloned());
        out.extend(self.labels.iter().cloned());
        out
    }

    /// Meridians every `step_deg` of longitude and parallels every
    /// `step_deg` of polar angle up to 90°.
    pub fn add_polar_net(&mut self, step_deg: f64) -> Result<()> {
        if !(step_deg > 0.0 && step_deg <= 90.0) {
            return Err(Error::BadStep(step_deg));
        }
        let meridians = (360.0 / step_deg - 1e-9).ceil() as usize;
        for k in 0..meridians {
            let phi = (k as f64 * step_deg).to_radians();
            self.net.push(Primitive::Polyline {
                points: vec![(0.0, 0.0), (phi.cos(), phi.sin())],
                color: "gray",
                width: 0.5,
            });
        }
        let parallels = (90.0 / step_deg + 1e-9).floor() as usize;
        for k in 1..=parallels {
            let theta = (k as f64 * step_deg).to_radians();
            self.net.push(Primitive::Circle {
                center: (0.0, 0.0),
                radius: parallel_radius(theta.min(std::f64::consts::FRAC_PI_2))?,
            });
        }
        Ok(())
    }

    /// Minor great-circle arc between two sphere points.
    pub fn add_arc(&mut self, a: &UnitPoint3, b: &UnitPoint3, color: &'static str) -> Result<()> {
        for piece in great_circle_arc(a, b, ARC_STEP_DEG)? {
            self.push_polyline(piece, color);
        }
        Ok(())
    }

    fn push_polyline(&mut self, piece: Polyline, color: &'static str) {
        self.arcs.push(Primitive::Polyline {
            points: piece.iter().map(|s| (s.u, s.v)).collect(),
            color,
            width: 1.0,
        });
    }

    pub fn add_point(&mut self, p: &UnitPoint3, color: &'static str, radius_px: f64) {
        let point = project(p);
        self.points.push(Primitive::PointMark {
            fill: FillStyle::of(point.hemisphere),
            point,
            color,
            radius_px,
        });
    }

    /// `[hkl]` label beside the projected direction, with a small mark.
    pub fn add_direction(&mut self, d: &Direction) {
        let s = direction_mark(d);
        self.points.push(Primitive::PointMark {
            point: s,
            fill: FillStyle::of(s.hemisphere),
            color: "black",
            radius_px: 2.0,
        });
        let r = s.radius();
        let anchor = if r > 1e-12 {
            (
                s.u * (1.0 + LABEL_OFFSET / r),
                s.v * (1.0 + LABEL_OFFSET / r),
            )
        } else {
            (LABEL_OFFSET, LABEL_OFFSET)
        };
        self.labels.push(Primitive::Label {
            text: d.to_string(),
            anchor,
        });
    }

    /// Line-oriented dump, one primitive per line, for debugging and diffs.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in self.primitives() {
            match p {
                Primitive::PointMark {
                    point,
                    fill,
                    color,
                    radius_px,
                } => writeln!(
                    out,
                    "point {:.6} {:.6} {} {} {} {:.6}",
                    point.u,
                    point.v,
                    point.hemisphere.code(),
                    if fill == FillStyle::Solid {
                        "solid"
                    } else {
                        "open"
                    },
                    color,
                    radius_px
                ),
                Primitive::Circle { center, radius } => {
                    writeln!(out, "circle {:.6} {:.6} {:.6}", center.0, center.1, radius)
                }
                Primitive::Polyline {
                    points,
                    color,
                    width,
                } => {
                    write!(out, "polyline {color} {width:.6}").unwrap();
                    for (u, v) in points {
                        write!(out, " {u:.6},{v:.6}").unwrap();
                    }
                    writeln!(out)
                }
                Primitive::Label { text, anchor } => {
                    writeln!(out, "label {:.6} {:.6} {}", anchor.0, anchor.1, text)
                }
            }
            .unwrap();
        }
        out
    }
}

/// Mark radius for a point of mass `w` when the heaviest mark has `w_max`.
pub fn weighted_radius(w: f64, w_max: f64) -> f64 {
    MAX_MARK_RADIUS * (w / w_max).sqrt()
}

/// Scene of the sphere points of `design`. The centre of a ball design is
/// not drawn.
pub fn build_scene(design: &SphericalDesign, opts: &RenderOptions) -> Result<StereogramScene> {
    opts.validate()?;
    let mut scene = StereogramScene::new();
    if opts.polar_net {
        scene.add_polar_net(opts.net_step_deg)?;
    }
    let w_max = design.masses().fold(0.0f64, f64::max);
    for (i, p) in design.points().iter().enumerate() {
        let color = if opts.color_by_orbit {
            opts.palette.color(design.orbit_labels()[i])
        } else {
            "black"
        };
        let radius = if opts.weight_areas && w_max > 0.0 {
            weighted_radius(design.mass(i), w_max)
        } else {
            DEFAULT_MARK_RADIUS
        };
        scene.add_point(p, color, radius);
    }
    for d in &opts.directions {
        scene.add_direction(d);
    }
    Ok(scene)
}
