//! Standalone SVG charts: line/point plots with optional log axes,
//! histograms and scatter matrices.

use std::fmt::Write as _;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#17becf",
];
pub const ORANGE: &str = "#ff7f0e";
pub const GREY: &str = "#7f7f7f";

pub fn palette(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Style {
    Line {
        color: String,
        width: f64,
        opacity: f64,
    },
    Points {
        color: String,
        radius: f64,
    },
}

impl Style {
    pub fn line(color: &str) -> Self {
        Self::Line {
            color: color.into(),
            width: 1.5,
            opacity: 1.0,
        }
    }

    pub fn faint_line(color: &str, opacity: f64) -> Self {
        Self::Line {
            color: color.into(),
            width: 1.0,
            opacity,
        }
    }

    pub fn points(color: &str) -> Self {
        Self::Points {
            color: color.into(),
            radius: 2.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: Option<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub errors: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn new(x: &[f64], y: &[f64], style: Style) -> Self {
        Self {
            label: None,
            x: x.to_vec(),
            y: y.to_vec(),
            errors: None,
            style,
        }
    }

    pub fn label(mut self, label: &str) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn errors(mut self, errors: &[f64]) -> Self {
        self.errors = Some(errors.to_vec());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HLine {
    pub y: f64,
    pub color: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub hlines: Vec<HLine>,
}

/// A rectangular plotting area with data ranges.
#[derive(Debug, Clone, Copy)]
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
    log_x: bool,
    log_y: bool,
}

fn transform(v: f64, log: bool) -> f64 {
    if log {
        v.log10()
    } else {
        v
    }
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        let t = transform(v, self.log_x);
        self.left + (t - self.x.0) / (self.x.1 - self.x.0) * self.width
    }

    fn py(&self, v: f64) -> f64 {
        let t = transform(v, self.log_y);
        self.top + self.height - (t - self.y.0) / (self.y.1 - self.y.0) * self.height
    }

    fn usable(&self, x: f64, y: f64) -> bool {
        x.is_finite() && y.is_finite() && (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0)
    }
}

/// Range in transformed coordinates covering `values`.
fn data_range(values: impl Iterator<Item = f64>, log: bool) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite() && (!log || *v > 0.0))
        .map(|v| transform(v, log))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if log {
        let (lo, hi) = (lo.floor(), hi.ceil());
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    } else if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let fraction = raw / magnitude;
    let nice = if fraction < 1.5 {
        1.0
    } else if fraction < 3.0 {
        2.0
    } else if fraction < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * magnitude
}

/// Tick positions in transformed coordinates with their labels.
fn ticks(range: (f64, f64), log: bool, target: usize) -> Vec<(f64, String)> {
    if log {
        let decades = (range.1 - range.0).round() as i64;
        let stride = ((decades as f64 / target as f64).ceil() as i64).max(1);
        (range.0.round() as i64..=range.1.round() as i64)
            .filter(|e| e.rem_euclid(stride) == 0)
            .map(|e| (e as f64, format!("1e{e}")))
            .collect()
    } else {
        let step = nice_step(range.1 - range.0, target);
        let first = (range.0 / step).ceil() as i64;
        let last = (range.1 / step).floor() as i64;
        (first..=last)
            .map(|i| {
                let v = i as f64 * step;
                (v, format_tick(v, step))
            })
            .collect()
    }
}

fn format_tick(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor();
    if !(-3.0..5.0).contains(&magnitude) {
        let digits = ((magnitude - step.log10().floor()).max(0.0) as usize).min(6);
        return format!("{v:.digits$e}");
    }
    let digits = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.digits$}")
}

struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            width,
            height,
        }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, size: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="{size}">{}</text>"#,
            escape(text)
        );
    }

    fn rotated_text(&mut self, x: f64, y: f64, size: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="middle" font-size="{size}" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"#,
            escape(text)
        );
    }

    fn line(&mut self, (x1, y1): (f64, f64), (x2, y2): (f64, f64), color: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="{width}"/>"#
        );
    }

    /// Axes box, ticks and optional labels for `frame`; opens a clip group
    /// that [`Canvas::close_frame`] ends.
    fn open_frame(
        &mut self,
        id: usize,
        frame: &Frame,
        x_label: &str,
        y_label: &str,
        tick_labels: bool,
    ) {
        let Frame {
            left,
            top,
            width,
            height,
            ..
        } = *frame;
        let _ = writeln!(
            self.body,
            r##"<rect x="{left:.2}" y="{top:.2}" width="{width:.2}" height="{height:.2}" fill="none" stroke="#000000"/>"##
        );
        let font = if tick_labels { 11.0 } else { 9.0 };
        for (t, label) in ticks(frame.x, frame.log_x, 6) {
            let x = left + (t - frame.x.0) / (frame.x.1 - frame.x.0) * width;
            self.line((x, top + height), (x, top + height + 4.0), "#000000", 1.0);
            if tick_labels {
                self.text(x, top + height + 16.0, "middle", font, &label);
            }
        }
        for (t, label) in ticks(frame.y, frame.log_y, 6) {
            let y = top + height - (t - frame.y.0) / (frame.y.1 - frame.y.0) * height;
            self.line((left - 4.0, y), (left, y), "#000000", 1.0);
            if tick_labels {
                self.text(left - 6.0, y + 4.0, "end", font, &label);
            }
        }
        if !x_label.is_empty() {
            let offset = if tick_labels { 40.0 } else { 16.0 };
            self.text(
                left + width / 2.0,
                top + height + offset,
                "middle",
                13.0,
                x_label,
            );
        }
        if !y_label.is_empty() {
            let offset = if tick_labels { 62.0 } else { 12.0 };
            self.rotated_text(left - offset, top + height / 2.0, 13.0, y_label);
        }
        let _ = writeln!(
            self.body,
            r#"<clipPath id="clip{id}"><rect x="{left:.2}" y="{top:.2}" width="{width:.2}" height="{height:.2}"/></clipPath>"#
        );
        let _ = writeln!(self.body, r#"<g clip-path="url(#clip{id})">"#);
    }

    fn close_frame(&mut self) {
        self.body.push_str("</g>\n");
    }

    fn series(&mut self, frame: &Frame, s: &Series) {
        let usable: Vec<usize> = (0..s.x.len().min(s.y.len()))
            .filter(|&i| frame.usable(s.x[i], s.y[i]))
            .collect();
        match &s.style {
            Style::Line {
                color,
                width,
                opacity,
            } => {
                if usable.is_empty() {
                    return;
                }
                let points: Vec<String> = usable
                    .iter()
                    .map(|&i| format!("{:.2},{:.2}", frame.px(s.x[i]), frame.py(s.y[i])))
                    .collect();
                let _ = writeln!(
                    self.body,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" stroke-opacity="{opacity}" points="{}"/>"#,
                    points.join(" ")
                );
            }
            Style::Points { color, radius } => {
                for &i in &usable {
                    let (x, y) = (frame.px(s.x[i]), frame.py(s.y[i]));
                    if let Some(err) = s.errors.as_ref().and_then(|e| e.get(i)) {
                        let lo = s.y[i] - err;
                        let hi = s.y[i] + err;
                        let y_lo = if frame.log_y && lo <= 0.0 {
                            frame.top + frame.height
                        } else {
                            frame.py(lo)
                        };
                        self.line((x, y_lo), (x, frame.py(hi)), color, 1.0);
                    }
                    let _ = writeln!(
                        self.body,
                        r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius}" fill="{color}"/>"#
                    );
                }
            }
        }
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n{body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Self::default()
        }
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn with(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    pub fn hline(mut self, y: f64, color: &str, label: Option<&str>) -> Self {
        self.hlines.push(HLine {
            y,
            color: color.into(),
            label: label.map(str::to_string),
        });
        self
    }

    pub fn render(&self) -> String {
        let (width, height) = (760.0, 500.0);
        let xs = self.series.iter().flat_map(|s| s.x.iter().copied());
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.y.iter().copied())
            .chain(self.hlines.iter().map(|h| h.y));
        let frame = Frame {
            left: 90.0,
            top: 40.0,
            width: width - 120.0,
            height: height - 100.0,
            x: data_range(xs, self.log_x),
            y: data_range(ys, self.log_y),
            log_x: self.log_x,
            log_y: self.log_y,
        };
        let mut canvas = Canvas::new(width, height);
        canvas.text(width / 2.0, 24.0, "middle", 15.0, &self.title);
        canvas.open_frame(0, &frame, &self.x_label, &self.y_label, true);
        for s in &self.series {
            canvas.series(&frame, s);
        }
        for h in &self.hlines {
            if frame.usable(1.0, h.y) || (!frame.log_y && h.y.is_finite()) {
                let y = frame.py(h.y);
                let _ = writeln!(
                    canvas.body,
                    r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                    frame.left,
                    frame.left + frame.width,
                    h.color
                );
            }
        }
        canvas.close_frame();

        let legend: Vec<(&str, &str)> = self
            .series
            .iter()
            .filter_map(|s| {
                let color = match &s.style {
                    Style::Line { color, .. } | Style::Points { color, .. } => color.as_str(),
                };
                s.label.as_deref().map(|l| (l, color))
            })
            .chain(
                self.hlines
                    .iter()
                    .filter_map(|h| h.label.as_deref().map(|l| (l, h.color.as_str()))),
            )
            .collect();
        for (i, (label, color)) in legend.iter().enumerate() {
            let y = frame.top + 18.0 + 18.0 * i as f64;
            let x = frame.left + frame.width - 170.0;
            canvas.line((x, y - 4.0), (x + 22.0, y - 4.0), color, 3.0);
            canvas.text(x + 28.0, y, "start", 12.0, label);
        }
        canvas.finish()
    }
}

/// Counts of `values` in `bins` equal-width bins over their range.
pub fn histogram_counts(values: &[f64], bins: usize) -> (f64, f64, Vec<usize>) {
    let (lo, hi) = values
        .iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let bins = bins.max(1);
    let mut counts = vec![0; bins];
    if !lo.is_finite() {
        return (0.0, 1.0, counts);
    }
    let (lo, hi) = if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    };
    for &v in values.iter().filter(|v| v.is_finite()) {
        let i = (((v - lo) / (hi - lo)) * bins as f64) as usize;
        counts[i.min(bins - 1)] += 1;
    }
    (lo, hi, counts)
}

fn draw_histogram(
    canvas: &mut Canvas,
    frame: &Frame,
    lo: f64,
    hi: f64,
    counts: &[usize],
    color: &str,
) {
    let bin = (hi - lo) / counts.len() as f64;
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x0 = frame.px(lo + bin * i as f64);
        let x1 = frame.px(lo + bin * (i + 1) as f64);
        let y = frame.py(c as f64);
        let base = frame.py(0.0);
        let _ = writeln!(
            canvas.body,
            r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.6" stroke="{color}"/>"#,
            (x1 - x0).max(0.0),
            (base - y).max(0.0)
        );
    }
}

/// Histogram of one parameter's samples, with an optional vertical marker.
pub fn histogram_svg(values: &[f64], bins: usize, name: &str, marker: Option<f64>) -> String {
    let (lo, hi, counts) = histogram_counts(values, bins);
    let peak = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let (width, height) = (600.0, 420.0);
    let pad = 0.05 * (hi - lo);
    let mut x = (lo - pad, hi + pad);
    if let Some(m) = marker.filter(|m| m.is_finite()) {
        x = (x.0.min(m - pad), x.1.max(m + pad));
    }
    let frame = Frame {
        left: 80.0,
        top: 40.0,
        width: width - 110.0,
        height: height - 100.0,
        x,
        y: (0.0, 1.05 * peak),
        log_x: false,
        log_y: false,
    };
    let mut canvas = Canvas::new(width, height);
    canvas.text(
        width / 2.0,
        24.0,
        "middle",
        15.0,
        &format!("Posterior of {name}"),
    );
    canvas.open_frame(0, &frame, name, "count", true);
    draw_histogram(&mut canvas, &frame, lo, hi, &counts, palette(0));
    if let Some(m) = marker.filter(|m| m.is_finite()) {
        let px = frame.px(m);
        canvas.line((px, frame.top), (px, frame.top + frame.height), ORANGE, 2.0);
    }
    canvas.close_frame();
    canvas.finish()
}

/// Pairwise scatter matrix: histograms on the diagonal, sample scatter below.
/// At most `max_points` samples are drawn per panel (evenly strided).
pub fn scatter_matrix_svg(names: &[String], samples: &[Vec<f64>], max_points: usize) -> String {
    let n = names.len();
    let panel = 170.0;
    let gap = 14.0;
    let (margin_left, margin_top) = (40.0, 40.0);
    let size = margin_left + n as f64 * (panel + gap) + 10.0;
    let mut canvas = Canvas::new(size, size + 20.0);
    canvas.text(size / 2.0, 24.0, "middle", 15.0, "Posterior samples");
    let column = |j: usize| samples.iter().map(|s| s[j]).collect::<Vec<f64>>();
    let columns: Vec<Vec<f64>> = (0..n).map(column).collect();
    let ranges: Vec<(f64, f64)> = columns
        .iter()
        .map(|c| data_range(c.iter().copied(), false))
        .collect();
    let stride = samples.len().div_ceil(max_points.max(1)).max(1);
    let mut id = 0;
    for row in 0..n {
        for col in 0..=row {
            let left = margin_left + col as f64 * (panel + gap);
            let top = margin_top + row as f64 * (panel + gap);
            let x_label = if row + 1 == n {
                names[col].as_str()
            } else {
                ""
            };
            if row == col {
                let (lo, hi, counts) = histogram_counts(&columns[col], 30);
                let peak = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
                let frame = Frame {
                    left,
                    top,
                    width: panel,
                    height: panel,
                    x: ranges[col],
                    y: (0.0, 1.05 * peak),
                    log_x: false,
                    log_y: false,
                };
                canvas.open_frame(id, &frame, x_label, "", false);
                draw_histogram(&mut canvas, &frame, lo, hi, &counts, palette(0));
            } else {
                let frame = Frame {
                    left,
                    top,
                    width: panel,
                    height: panel,
                    x: ranges[col],
                    y: ranges[row],
                    log_x: false,
                    log_y: false,
                };
                let y_label = if col == 0 { names[row].as_str() } else { "" };
                canvas.open_frame(id, &frame, x_label, y_label, false);
                for s in samples.iter().step_by(stride) {
                    let _ = writeln!(
                        canvas.body,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="1" fill="{}" fill-opacity="0.4"/>"#,
                        frame.px(s[col]),
                        frame.py(s[row]),
                        palette(0)
                    );
                }
            }
            canvas.close_frame();
            id += 1;
        }
    }
    canvas.finish()
}
