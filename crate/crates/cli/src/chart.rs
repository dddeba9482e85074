//! Self-contained SVG line charts for metric series: one polyline per
//! series, axes with ticks, and dashed vertical markers at group join
//! hours.

use std::path::Path;

use crate::report::ReportError;

/// Which metric a chart plots; fixes the title and y-axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Gini,
    Nakamoto,
}

impl ChartKind {
    fn title(self) -> &'static str {
        match self {
            ChartKind::Gini => "Gini index over time",
            ChartKind::Nakamoto => "Nakamoto coefficient over time",
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            ChartKind::Gini => "Gini index",
            ChartKind::Nakamoto => "Nakamoto coefficient",
        }
    }
}

/// One labelled line on a chart.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// (hour, value) points.
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 9] = [
    "#d97706", "#7c3aed", "#2563eb", "#059669", "#dc2626", "#0891b2", "#ca8a04",
    "#be185d", "#4b5563",
];

/// Renders the chart and writes it to `path`.
///
/// `markers` are hours to highlight with dashed vertical lines (group join
/// hours; hour zero is the chart origin and gets no marker).
pub fn emit_chart(
    series: &[Series],
    kind: ChartKind,
    markers: &[u64],
    path: &Path,
) -> Result<(), ReportError> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(ReportError::EmptySeries);
    }
    let svg = render_svg(series, kind, markers);
    std::fs::write(path, svg).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Renders the chart as an SVG document string.
pub fn render_svg(series: &[Series], kind: ChartKind, markers: &[u64]) -> String {
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(1.0f64, f64::max);
    let y_max_data = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0f64, f64::max);
    let y_max = nice_ceiling(y_max_data);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |x: f64| MARGIN_LEFT + x / x_max * plot_w;
    let to_y = |y: f64| MARGIN_TOP + (1.0 - y / y_max) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        kind.title()
    ));

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h,
        r = MARGIN_LEFT + plot_w,
    ));

    // Ticks and grid.
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let y_val = y_max * frac;
        let y = to_y(y_val);
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"#e5e7eb\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{label}</text>\n",
            x0 = MARGIN_LEFT,
            x1 = MARGIN_LEFT + plot_w,
            tx = MARGIN_LEFT - 6.0,
            ty = y + 4.0,
            label = format_tick(y_val),
        ));
        let x_val = x_max * frac;
        let x = to_x(x_val);
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{label}</text>\n",
            ty = MARGIN_TOP + plot_h + 16.0,
            label = format_tick(x_val),
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">hour</text>\n",
        x = MARGIN_LEFT + plot_w / 2.0,
        y = HEIGHT - 12.0,
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {y})\">{label}</text>\n",
        y = MARGIN_TOP + plot_h / 2.0,
        label = kind.y_label(),
    ));

    // Group-entry markers.
    for &hour in markers {
        let x = to_x(hour as f64);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{t}\" x2=\"{x}\" y2=\"{b}\" stroke=\"#9ca3af\" \
             stroke-dasharray=\"6 4\" class=\"join-marker\"/>\n\
             <text x=\"{x}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"middle\" fill=\"#6b7280\">+{hour}h</text>\n",
            t = MARGIN_TOP,
            b = MARGIN_TOP + plot_h,
            ty = MARGIN_TOP - 4.0,
        ));
    }

    // Series lines and legend.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", to_x(*x), to_y(*y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             points=\"{}\"/>\n",
            points.join(" ")
        ));
        if series.len() > 1 {
            let ly = MARGIN_TOP + 14.0 * i as f64;
            svg.push_str(&format!(
                "<line x1=\"{x0}\" y1=\"{ly}\" x2=\"{x1}\" y2=\"{ly}\" stroke=\"{color}\" \
                 stroke-width=\"2\"/>\n\
                 <text x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" \
                 font-size=\"10\">{label}</text>\n",
                x0 = MARGIN_LEFT + plot_w - 150.0,
                x1 = MARGIN_LEFT + plot_w - 130.0,
                tx = MARGIN_LEFT + plot_w - 124.0,
                ty = ly + 3.0,
                label = xml_escape(&s.label),
            ));
        }
    }

    svg.push_str("</svg>\n");
    svg
}

fn nice_ceiling(value: f64) -> f64 {
    if value <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(value.log10().floor());
    for mult in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if magnitude * mult >= value {
            return magnitude * mult;
        }
    }
    value
}

fn format_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e6 {
        (v as i64).to_string()
    } else {
        format!("{v:.2}")
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
