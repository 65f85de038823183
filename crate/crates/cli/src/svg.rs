//! Minimal deterministic SVG writer. Geometry is emitted in chart
//! coordinates inside one flipped group; labels are placed in screen space
//! so text is not mirrored.

use std::fmt::Write;

use farpoint_core::PlanePoint;

fn n(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn pts(points: &[PlanePoint]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", n(p.x), n(p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub struct Svg {
    width: f64,
    height: f64,
    scale: f64,
    min: PlanePoint,
    max: PlanePoint,
    title: String,
    chart: String,
    overlay: String,
}

impl Svg {
    /// A canvas showing the chart box `[min, max]`, `width` pixels wide.
    pub fn new(title: &str, min: PlanePoint, max: PlanePoint, width: f64) -> Self {
        let pad = 0.05 * (max.x - min.x).max(max.y - min.y);
        let min = PlanePoint::new(min.x - pad, min.y - pad);
        let max = PlanePoint::new(max.x + pad, max.y + pad);
        let scale = width / (max.x - min.x);
        Self {
            width,
            height: (scale * (max.y - min.y)).ceil(),
            scale,
            min,
            max,
            title: title.to_string(),
            chart: String::new(),
            overlay: String::new(),
        }
    }

    /// Bounding box of the points, or the unit box when empty.
    pub fn fit(title: &str, points: &[PlanePoint], width: f64) -> Self {
        let lo = points
            .iter()
            .fold(PlanePoint::new(f64::INFINITY, f64::INFINITY), |a, p| {
                PlanePoint::new(a.x.min(p.x), a.y.min(p.y))
            });
        let hi = points.iter().fold(
            PlanePoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            |a, p| PlanePoint::new(a.x.max(p.x), a.y.max(p.y)),
        );
        if points.is_empty() {
            Self::new(title, PlanePoint::ORIGIN, PlanePoint::new(1.0, 1.0), width)
        } else {
            Self::new(title, lo, hi, width)
        }
    }

    fn screen(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new(
            (p.x - self.min.x) * self.scale,
            (self.max.y - p.y) * self.scale,
        )
    }

    /// Chart length of `px` screen pixels.
    pub fn px(&self, px: f64) -> f64 {
        px / self.scale
    }

    /// Stroke style `px` screen pixels wide.
    pub fn stroke(&self, color: &str, px: f64) -> String {
        format!("stroke:{color};stroke-width:{}", n(self.px(px)))
    }

    /// Dashed stroke; dash and gap lengths in screen pixels.
    pub fn dashed(&self, color: &str, px: f64, dash: f64, gap: f64) -> String {
        format!(
            "{};stroke-dasharray:{} {}",
            self.stroke(color, px),
            n(self.px(dash)),
            n(self.px(gap))
        )
    }

    pub fn polygon(&mut self, points: &[PlanePoint], class: &str, style: &str) {
        let _ = writeln!(
            self.chart,
            r#"<polygon class="{class}" points="{}" style="{style}"/>"#,
            pts(points)
        );
    }

    pub fn polyline(&mut self, points: &[PlanePoint], class: &str, style: &str) {
        let _ = writeln!(
            self.chart,
            r#"<polyline class="{class}" points="{}" style="fill:none;{style}"/>"#,
            pts(points)
        );
    }

    pub fn path(&mut self, id: &str, points: &[PlanePoint], style: &str) {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let _ = write!(
                d,
                "{}{},{}",
                if i == 0 { "M" } else { " L" },
                n(p.x),
                n(p.y)
            );
        }
        let _ = writeln!(
            self.chart,
            r#"<path id="{id}" d="{d}" style="fill:none;{style}"/>"#
        );
    }

    pub fn line(&mut self, a: PlanePoint, b: PlanePoint, class: &str, style: &str) {
        let _ = writeln!(
            self.chart,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" style="{style}"/>"#,
            n(a.x),
            n(a.y),
            n(b.x),
            n(b.y)
        );
    }

    /// A dot `radius_px` pixels across, in screen space.
    pub fn marker(&mut self, at: PlanePoint, radius_px: f64, class: &str, style: &str) {
        let s = self.screen(at);
        let _ = writeln!(
            self.overlay,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" style="{style}"/>"#,
            n(s.x),
            n(s.y),
            n(radius_px)
        );
    }

    pub fn label(&mut self, at: PlanePoint, text: &str, dx: f64, dy: f64) {
        let s = self.screen(at);
        let text = text
            .replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;");
        let _ = writeln!(
            self.overlay,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{text}</text>"#,
            n(s.x + dx),
            n(s.y + dy)
        );
    }

    pub fn finish(self) -> String {
        let (tx, ty) = (-self.min.x * self.scale, self.max.y * self.scale);
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
                "\n<title>{title}</title>\n",
                r#"<rect width="100%" height="100%" fill="white"/>"#,
                "\n",
                r#"<g transform="matrix({s} 0 0 {ms} {tx} {ty})" stroke-linejoin="round">"#,
                "\n{chart}</g>\n{overlay}</svg>\n"
            ),
            w = n(self.width),
            h = n(self.height),
            title = self.title,
            s = n(self.scale),
            ms = n(-self.scale),
            tx = n(tx),
            ty = n(ty),
            chart = self.chart,
            overlay = self.overlay,
        )
    }
}
