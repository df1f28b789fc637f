//! Hand-rolled SVG emission. The plots are static result displays, so the
//! files are built from straight-line primitives with fixed formatting;
//! rendering the same data always yields the same bytes.

use dlfm::landscape::Landscape;
use std::fmt::Write;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn coord(v: f64) -> String {
    format!("{v:.3}")
}

struct Frame {
    width: f64,
    height: f64,
    margin: f64,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(width: f64, height: f64, x: (f64, f64), y: (f64, f64)) -> Frame {
        let widen = |(lo, hi): (f64, f64)| {
            if hi > lo {
                let pad = 0.05 * (hi - lo);
                (lo - pad, hi + pad)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        let (x_min, x_max) = widen(x);
        let (y_min, y_max) = widen(y);
        Frame {
            width,
            height,
            margin: 50.0,
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn x(&self, v: f64) -> f64 {
        let span = self.x_max - self.x_min;
        self.margin + (v - self.x_min) / span * (self.width - 2.0 * self.margin)
    }

    fn y(&self, v: f64) -> f64 {
        let span = self.y_max - self.y_min;
        self.height - self.margin - (v - self.y_min) / span * (self.height - 2.0 * self.margin)
    }

    fn open(&self, out: &mut String) {
        let _ = write!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
             viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            w = coord(self.width),
            h = coord(self.height),
        );
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let left = coord(self.margin);
        let right = coord(self.width - self.margin);
        let top = coord(self.margin);
        let bottom = coord(self.height - self.margin);
        let _ = write!(
            out,
            "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{right}\" y2=\"{bottom}\" stroke=\"#333\"/>\n\
             <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"#333\"/>\n",
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>",
            coord((self.width) / 2.0),
            coord(self.height - 12.0),
        );
        let _ = writeln!(
            out,
            "<text x=\"14\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
             transform=\"rotate(-90 14 {})\">{y_label}</text>",
            coord(self.height / 2.0),
            coord(self.height / 2.0),
        );
        for (v, anchor, x, y) in [
            (self.x_min, "start", self.margin, self.height - self.margin + 16.0),
            (self.x_max, "end", self.width - self.margin, self.height - self.margin + 16.0),
        ] {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"{anchor}\">{}</text>",
                coord(x),
                coord(y),
                coord(v),
            );
        }
        for (v, y) in [
            (self.y_min, self.height - self.margin),
            (self.y_max, self.margin + 4.0),
        ] {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{}</text>",
                coord(self.margin - 6.0),
                coord(y),
                coord(v),
            );
        }
    }
}

/// Landscape levels as polylines over the filtration axis.
pub fn landscape_svg(l: &Landscape) -> String {
    let pairs: Vec<(f64, f64)> = l.levels().iter().flatten().copied().collect();
    let x = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(t, _)| {
            (lo.min(t), hi.max(t))
        });
    let x = if pairs.is_empty() { (0.0, 1.0) } else { x };
    let y_hi = pairs.iter().fold(0.0f64, |hi, &(_, v)| hi.max(v));
    let frame = Frame::new(640.0, 360.0, x, (0.0, y_hi));

    let mut out = String::new();
    frame.open(&mut out);
    frame.axes(&mut out, "t", "level value");
    for (k, level) in l.levels().iter().enumerate() {
        let points: Vec<String> = level
            .iter()
            .map(|&(t, v)| format!("{},{}", coord(frame.x(t)), coord(frame.y(v))))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            points.join(" "),
            PALETTE[k % PALETTE.len()],
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter plot of projected rows, one color per class, legend in the top
/// right. `classes[i]` indexes into `class_names`.
pub fn scatter_svg(points: &[(f64, f64)], classes: &[usize], class_names: &[String]) -> String {
    let fold = |f: fn(&(f64, f64)) -> f64| {
        points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(f(p)), hi.max(f(p)))
            })
    };
    let x = if points.is_empty() { (0.0, 1.0) } else { fold(|p| p.0) };
    let y = if points.is_empty() { (0.0, 1.0) } else { fold(|p| p.1) };
    let frame = Frame::new(560.0, 440.0, x, y);

    let mut out = String::new();
    frame.open(&mut out);
    frame.axes(&mut out, "PC1", "PC2");
    for (&(px, py), &class) in points.iter().zip(classes) {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.8\"/>",
            coord(frame.x(px)),
            coord(frame.y(py)),
            PALETTE[class % PALETTE.len()],
        );
    }
    for (i, name) in class_names.iter().enumerate() {
        let y = frame.margin + 14.0 + 16.0 * i as f64;
        let _ = write!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
            coord(frame.width - frame.margin - 110.0),
            coord(y - 9.0),
            PALETTE[i % PALETTE.len()],
            coord(frame.width - frame.margin - 96.0),
            coord(y),
            escape(name),
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
