use std::fmt::Write as _;

use super::{FillStyle, Primitive, RenderOptions, StereogramScene, REFERENCE_SIZE};

struct Canvas {
    center: f64,
    scale: f64,
    px: f64,
}

impl Canvas {
    fn x(&self, u: f64) -> f64 {
        self.center + u * self.scale
    }

    fn y(&self, v: f64) -> f64 {
        self.center - v * self.scale
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Standalone SVG 1.1 document. Numbers use six decimals, so identical
/// scenes and options give identical bytes.
pub fn render_svg(scene: &StereogramScene, opts: &RenderOptions) -> Vec<u8> {
    let size = opts.size_px;
    let c = Canvas {
        center: size as f64 / 2.0,
        scale: opts.scale(),
        px: size as f64 / REFERENCE_SIZE,
    };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"black\" stroke-width=\"{:.6}\"/>",
        c.x(0.0),
        c.y(0.0),
        c.scale,
        1.5 * c.px
    );
    let body = scene
        .net()
        .iter()
        .chain(scene.arcs())
        .chain(scene.points())
        .chain(scene.labels());
    for p in body {
        write_primitive(&mut out, p, &c);
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

fn write_primitive(out: &mut String, p: &Primitive, c: &Canvas) {
    match p {
        Primitive::Circle { center, radius } => {
            let _ = writeln!(
                out,
                "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" stroke=\"gray\" stroke-width=\"{:.6}\"/>",
                c.x(center.0),
                c.y(center.1),
                radius * c.scale,
                0.5 * c.px
            );
        }
        Primitive::Polyline {
            points,
            color,
            width,
        } => {
            let coords: Vec<String> = points
                .iter()
                .map(|(u, v)| format!("{:.6},{:.6}", c.x(*u), c.y(*v)))
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{:.6}\"/>",
                coords.join(" "),
                width * c.px
            );
        }
        Primitive::PointMark {
            point,
            fill,
            color,
            radius_px,
        } => {
            let (x, y, r) = (c.x(point.u), c.y(point.v), radius_px * c.px);
            let _ = match fill {
                FillStyle::Solid => writeln!(
                    out,
                    "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"{r:.6}\" fill=\"{color}\"/>"
                ),
                FillStyle::Open => writeln!(
                    out,
                    "<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"{r:.6}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{:.6}\"/>",
                    1.5 * c.px
                ),
            };
        }
        Primitive::Label { text, anchor } => {
            let _ = writeln!(
                out,
                "<text x=\"{:.6}\" y=\"{:.6}\" font-family=\"sans-serif\" font-size=\"{:.6}\">{}</text>",
                c.x(anchor.0),
                c.y(anchor.1),
                14.0 * c.px,
                escape(text)
            );
        }
    }
}
