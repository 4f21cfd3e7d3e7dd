//! CSV tables and static SVG plots built from polylines and text.

use std::fmt::Write as _;

use crate::format::{human, machine};

/// A CSV table of numbers with an optional leading text column.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { header: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, label: Option<&str>, values: &[Option<f64>]) {
        let mut r: Vec<String> = label.map(|l| vec![l.to_string()]).unwrap_or_default();
        r.extend(values.iter().map(|v| v.map(machine).unwrap_or_default()));
        self.rows.push(r);
    }

    /// A row of preformatted cells.
    pub fn push(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d68910", "#566573"];

struct Line {
    points: Vec<(f64, f64)>,
    color: usize,
    width: f64,
}

/// A 2D plot in data coordinates.
pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    equal_aspect: bool,
    lines: Vec<Line>,
    legend: Vec<(String, usize)>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            equal_aspect: false,
            lines: Vec::new(),
            legend: Vec::new(),
        }
    }

    /// Same scale on both axes, for drawing geometry.
    pub fn geometric(mut self) -> Self {
        self.equal_aspect = true;
        self
    }

    pub fn series(&mut self, name: &str, color: usize, points: Vec<(f64, f64)>) {
        self.legend.push((name.to_string(), color));
        self.lines.push(Line { points, color, width: 1.6 });
    }

    /// A thin unlabeled polyline, e.g. one comb tooth.
    pub fn stroke(&mut self, color: usize, points: Vec<(f64, f64)>) {
        self.lines.push(Line { points, color, width: 0.6 });
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let finite = self.lines.iter().flat_map(|l| l.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |a: f64, b: f64| if b - a > 0.0 { (a, b) } else { (a - 0.5, b + 0.5) };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    pub fn to_svg(&self) -> String {
        let (mut x0, mut x1, mut y0, mut y1) = self.bounds();
        let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
        if self.equal_aspect {
            let k = ((x1 - x0) / pw).max((y1 - y0) / ph);
            let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            x0 = cx - 0.5 * k * pw;
            x1 = cx + 0.5 * k * pw;
            y0 = cy - 0.5 * k * ph;
            y1 = cy + 0.5 * k * ph;
        }
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let frame = [(MARGIN, MARGIN), (WIDTH - MARGIN, MARGIN), (WIDTH - MARGIN, HEIGHT - MARGIN), (MARGIN, HEIGHT - MARGIN), (MARGIN, MARGIN)];
        let _ = writeln!(s, r##"<polyline fill="none" stroke="#999999" stroke-width="1" points="{}"/>"##, svg_points(&frame));
        for l in &self.lines {
            // break at non-finite values so gaps stay gaps
            for run in l.points.split(|p| !(p.0.is_finite() && p.1.is_finite())) {
                if run.len() < 2 {
                    continue;
                }
                let pts: Vec<(f64, f64)> = run.iter().map(|&(x, y)| (sx(x), sy(y))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
                    COLORS[l.color % COLORS.len()],
                    l.width,
                    svg_points(&pts)
                );
            }
        }
        let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
                escape(body)
            );
        };
        text(&mut s, WIDTH / 2.0, MARGIN / 2.0, "middle", &self.title);
        text(&mut s, WIDTH / 2.0, HEIGHT - 15.0, "middle", &self.x_label);
        text(&mut s, 15.0, HEIGHT / 2.0, "start", &self.y_label);
        text(&mut s, MARGIN, HEIGHT - MARGIN + 16.0, "start", &human(x0));
        text(&mut s, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "end", &human(x1));
        text(&mut s, MARGIN - 4.0, HEIGHT - MARGIN, "end", &human(y0));
        text(&mut s, MARGIN - 4.0, MARGIN + 4.0, "end", &human(y1));
        for (i, (name, color)) in self.legend.iter().enumerate() {
            let y = MARGIN + 16.0 + 16.0 * i as f64;
            let x = WIDTH - MARGIN - 150.0;
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
                COLORS[color % COLORS.len()],
                svg_points(&[(x, y - 4.0), (x + 20.0, y - 4.0)])
            );
            text(&mut s, x + 26.0, y, "start", name);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn svg_points(p: &[(f64, f64)]) -> String {
    p.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_only_polylines_and_text() {
        let mut p = Plot::new("t <1>", "x", "y");
        p.series("a", 0, vec![(0.0, 0.0), (1.0, 2.0), (f64::NAN, 0.0), (2.0, 1.0), (3.0, 3.0)]);
        p.stroke(1, vec![(0.5, 0.5), (0.5, 1.5)]);
        let svg = p.to_svg();
        for tag in svg.split('<').skip(1) {
            let name: String = tag.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '/').collect();
            assert!(["svg", "/svg", "polyline", "text", "/text"].contains(&name.as_str()), "{name}");
        }
        assert!(svg.contains("t &lt;1&gt;"));
    }

    #[test]
    fn csv_quotes_labels() {
        let mut t = Table::new(&["id", "v"]);
        t.row(Some("a,b"), &[Some(0.5)]);
        t.row(Some("c"), &[None]);
        assert_eq!(t.to_csv(), "id,v\n\"a,b\",5.0000000000000000e-1\nc,\n");
    }
}
