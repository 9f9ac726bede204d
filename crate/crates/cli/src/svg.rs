//! Static SVG line charts with a log-scale value axis.
//!
//! Emitted files are self-contained result displays: axes, decade
//! gridlines, polyline series, and a legend. No scripting, no interactivity.

pub struct Series {
    pub label: String,
    pub color: &'static str,
    /// (order, value) pairs; non-finite values break the line.
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;
/// Values at or below this floor are drawn on the floor decade.
const VALUE_FLOOR: f64 = 1e-18;

pub fn render_log_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            let clamped = y.max(VALUE_FLOOR);
            y_min = y_min.min(clamped);
            y_max = y_max.max(clamped);
        }
    }
    if !x_min.is_finite() {
        // no finite data at all; draw an empty frame
        x_min = 0.0;
        x_max = 1.0;
        y_min = VALUE_FLOOR;
        y_max = 1.0;
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }

    let mut decade_lo = y_min.log10().floor() as i32;
    let mut decade_hi = y_max.log10().ceil() as i32;
    if decade_hi <= decade_lo {
        decade_hi = decade_lo + 1;
    }
    // keep the axis readable on huge dynamic ranges
    if decade_hi - decade_lo > 24 {
        decade_lo = decade_hi - 24;
    }
    let log_lo = decade_lo as f64;
    let log_hi = decade_hi as f64;

    let to_x = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let to_y = |y: f64| {
        let l = y.max(VALUE_FLOOR).log10().clamp(log_lo, log_hi);
        MARGIN_TOP + (log_hi - l) / (log_hi - log_lo) * plot_h
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // decade gridlines and labels
    for decade in decade_lo..=decade_hi {
        let y = to_y(10f64.powi(decade));
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            WIDTH - MARGIN_RIGHT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\" \
             fill=\"#444444\">1e{decade}</text>\n",
            MARGIN_LEFT - 6.0,
            y + 4.0
        ));
    }

    // x ticks at integer orders
    let span = x_max - x_min;
    let step = (span / 10.0).ceil().max(1.0);
    let mut tick = x_min;
    while tick <= x_max + 1e-9 {
        let x = to_x(tick);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP,
            HEIGHT - MARGIN_BOTTOM
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\" \
             fill=\"#444444\">{tick:.0}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 16.0
        ));
        tick += step;
    }

    // frame
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{plot_w:.2}\" \
         height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));

    // series as polylines, split at non-finite values
    for s in series {
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, svg: &mut String| {
            if seg.len() >= 2 {
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>\n",
                    seg.join(" "),
                    s.color
                ));
            }
            seg.clear();
        };
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                segment.push(format!("{:.2},{:.2}", to_x(x), to_y(y)));
            } else {
                flush(&mut segment, &mut svg);
            }
        }
        flush(&mut segment, &mut svg);
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\" \
         transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));

    // legend
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_RIGHT - 180.0;
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" \
             stroke-width=\"2.5\"/>\n",
            x + 24.0,
            s.color
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
            x + 30.0,
            y + 4.0,
            escape(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
