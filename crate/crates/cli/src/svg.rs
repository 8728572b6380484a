//! Static SVG snapshots of a realization in its affine chart.

use std::fmt::Write;

use projrig::Realization;

const SIZE: f64 = 480.0;

struct Frame {
    min: [f64; 2],
    max: [f64; 2],
}

impl Frame {
    /// Bounding box of the points, padded by 20% of its extent.
    fn around(points: &[[f64; 2]]) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        if points.is_empty() {
            (min, max) = ([-1.0; 2], [1.0; 2]);
        }
        for k in 0..2 {
            let pad = 0.2 * (max[k] - min[k]).max(1e-9);
            let pad = if max[k] - min[k] < 1e-9 { 1.0 } else { pad };
            min[k] -= pad;
            max[k] += pad;
        }
        Frame { min, max }
    }

    fn to_screen(&self, p: [f64; 2]) -> [f64; 2] {
        let sx = SIZE / (self.max[0] - self.min[0]);
        let sy = SIZE / (self.max[1] - self.min[1]);
        [(p[0] - self.min[0]) * sx, (self.max[1] - p[1]) * sy]
    }

    /// Segment of `a x + b y + c = 0` inside the frame.
    fn clip(&self, l: [f64; 3]) -> Option<([f64; 2], [f64; 2])> {
        let [a, b, c] = l;
        let mut hits: Vec<[f64; 2]> = Vec::new();
        if b.abs() > 1e-15 {
            for x in [self.min[0], self.max[0]] {
                let y = -(a * x + c) / b;
                if y >= self.min[1] && y <= self.max[1] {
                    hits.push([x, y]);
                }
            }
        }
        if a.abs() > 1e-15 {
            for y in [self.min[1], self.max[1]] {
                let x = -(b * y + c) / a;
                if x >= self.min[0] && x <= self.max[0] {
                    hits.push([x, y]);
                }
            }
        }
        let first = *hits.first()?;
        let far = hits
            .iter()
            .copied()
            .max_by(|p, q| dist2(first, *p).total_cmp(&dist2(first, *q)))?;
        Some((first, far))
    }
}

fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
}

fn chart_point(v: &[f64; 3]) -> [f64; 2] {
    [v[0] / v[2], v[1] / v[2]]
}

pub fn render(r: &Realization<f64>, caption: &str) -> String {
    let g = r.geometry();
    let finite: Vec<[f64; 2]> = r
        .points()
        .iter()
        .filter(|p| p[2].abs() > 1e-12)
        .map(chart_point)
        .collect();
    let frame = Frame::around(&finite);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (name, l) in g.lines().iter().zip(r.lines()) {
        if let Some((p, q)) = frame.clip(*l) {
            let (p, q) = (frame.to_screen(p), frame.to_screen(q));
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="steelblue" stroke-width="1.2"><title>{name}</title></line>"#,
                p[0], p[1], q[0], q[1]
            );
        }
    }
    for (name, p) in g.points().iter().zip(r.points()) {
        if p[2].abs() <= 1e-12 {
            continue;
        }
        let c = frame.to_screen(chart_point(p));
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="3.5" fill="black"/>"#, c[0], c[1]);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif">{name}</text>"#,
            c[0] + 5.0,
            c[1] - 5.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="8" y="{}" font-size="12" font-family="sans-serif">{caption}</text>"#,
        SIZE - 8.0
    );
    s.push_str("</svg>\n");
    s
}
