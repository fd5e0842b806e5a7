//! Deterministic SVG scatter plots of root sets: dots for the target
//! polynomial, circles and diamonds for approximations, axes in the
//! (Re, Im) plane, optional stability-circle overlay. Byte output depends
//! only on the input data.

/// Marker shapes, cycled per input series.
#[derive(Clone, Copy, Debug)]
pub enum Marker {
    Dot,
    Circle,
    Diamond,
}

impl Marker {
    pub fn cycle(index: usize) -> Marker {
        match index % 3 {
            0 => Marker::Dot,
            1 => Marker::Circle,
            _ => Marker::Diamond,
        }
    }
}

/// One plotted series.
#[derive(Clone, Debug)]
pub struct PlotSeries {
    pub label: String,
    pub marker: Marker,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 3] = ["#1b1b1b", "#c23b22", "#2456a4"];

/// Renders the scatter; `stability_circle` draws a circle of that radius
/// centered at the origin.
pub fn render_scatter(series: &[PlotSeries], stability_circle: Option<f64>) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if let Some(r) = stability_circle {
        min_x = min_x.min(-r);
        max_x = max_x.max(r);
        min_y = min_y.min(-r);
        max_y = max_y.max(r);
    }
    if !(min_x.is_finite() && max_x.is_finite()) {
        min_x = -1.0;
        max_x = 1.0;
        min_y = -1.0;
        max_y = 1.0;
    }
    let pad_x = ((max_x - min_x) * 0.05).max(1e-9);
    let pad_y = ((max_y - min_y) * 0.05).max(1e-9);
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;
    let sx = (WIDTH - 2.0 * MARGIN) / (max_x - min_x);
    let sy = (HEIGHT - 2.0 * MARGIN) / (max_y - min_y);
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (MARGIN + (x - min_x) * sx, HEIGHT - MARGIN - (y - min_y) * sy)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes through zero when visible.
    if min_x < 0.0 && max_x > 0.0 {
        let (x0, _) = to_px(0.0, 0.0);
        out.push_str(&format!(
            "<line x1=\"{:.3}\" y1=\"{MARGIN}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
            x0,
            x0,
            HEIGHT - MARGIN
        ));
    }
    if min_y < 0.0 && max_y > 0.0 {
        let (_, y0) = to_px(0.0, 0.0);
        out.push_str(&format!(
            "<line x1=\"{MARGIN}\" y1=\"{y0:.3}\" x2=\"{:.3}\" y2=\"{y0:.3}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
            WIDTH - MARGIN
        ));
    }
    // Frame and axis labels.
    out.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"#444444\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\">Re</text>\n",
        WIDTH / 2.0,
        HEIGHT - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.3})\">Im</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));
    if let Some(r) = stability_circle {
        let (cx, cy) = to_px(0.0, 0.0);
        out.push_str(&format!(
            "<ellipse cx=\"{cx:.3}\" cy=\"{cy:.3}\" rx=\"{:.3}\" ry=\"{:.3}\" fill=\"none\" stroke=\"#5a9e6f\" stroke-dasharray=\"6 4\"/>\n",
            r * sx,
            r * sy
        ));
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y);
            match s.marker {
                Marker::Dot => out.push_str(&format!(
                    "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"1.8\" fill=\"{color}\"/>\n"
                )),
                Marker::Circle => out.push_str(&format!(
                    "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"3.4\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"/>\n"
                )),
                Marker::Diamond => out.push_str(&format!(
                    "<path d=\"M {px:.3} {:.3} L {:.3} {py:.3} L {px:.3} {:.3} L {:.3} {py:.3} Z\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"/>\n",
                    py - 4.2,
                    px + 4.2,
                    py + 4.2,
                    px - 4.2
                )),
            }
        }
        // Legend entry.
        let ly = MARGIN + 16.0 * (i as f64 + 1.0);
        let lx = WIDTH - MARGIN - 150.0;
        match s.marker {
            Marker::Dot => out.push_str(&format!(
                "<circle cx=\"{lx:.3}\" cy=\"{:.3}\" r=\"1.8\" fill=\"{color}\"/>\n",
                ly - 4.0
            )),
            Marker::Circle => out.push_str(&format!(
                "<circle cx=\"{lx:.3}\" cy=\"{:.3}\" r=\"3.4\" fill=\"none\" stroke=\"{color}\"/>\n",
                ly - 4.0
            )),
            Marker::Diamond => out.push_str(&format!(
                "<path d=\"M {lx:.3} {:.3} L {:.3} {:.3} L {lx:.3} {:.3} L {:.3} {:.3} Z\" fill=\"none\" stroke=\"{color}\"/>\n",
                ly - 8.2,
                lx + 4.2,
                ly - 4.0,
                ly + 0.2,
                lx - 4.2,
                ly - 4.0
            )),
        }
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{ly:.3}\" font-size=\"11\">{}</text>\n",
            lx + 10.0,
            xml_escape(&s.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
