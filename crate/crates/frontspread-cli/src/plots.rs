//! Self-contained SVG plots from a run's artifacts.
//!
//! `trajectories.svg`: log-log level positions against time, with the
//! spreading envelopes overlaid when the run was classified as
//! accelerating.  `phase.svg`: the sweep scatter in the `(alpha, beta)`
//! plane with the critical hyperbola `beta = 1 + 1/alpha`.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Affine map from a data rectangle to the plot area (y inverted).
struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_L + (v - self.xmin) / (self.xmax - self.xmin) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (v - self.ymin) / (self.ymax - self.ymin) * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        WIDTH / 2.0
    )
}

fn axes(svg: &mut String, frame: &Frame, x_label: &str, y_label: &str, log_ticks: bool) {
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let y0 = HEIGHT - MARGIN_B;
    let y1 = MARGIN_T;
    let _ = writeln!(
        svg,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{x_label}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" \
         transform=\"rotate(-90 18 {})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let tick = |v: f64, log: bool| -> String {
        if log {
            format!("1e{v:.0}")
        } else {
            format!("{v}")
        }
    };
    let steps = |lo: f64, hi: f64| -> Vec<f64> {
        if log_ticks {
            let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
            (a..=b).map(|k| k as f64).collect()
        } else {
            let span = hi - lo;
            let raw = span / 6.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 2.5, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| span / s <= 7.0)
                .unwrap_or(mag);
            let mut v = (lo / step).ceil() * step;
            let mut out = Vec::new();
            while v <= hi + 1e-9 * step {
                out.push((v / step).round() * step);
                v += step;
            }
            out
        }
    };
    for v in steps(frame.xmin, frame.xmax) {
        let px = frame.x(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{y1}\" x2=\"{px:.2}\" y2=\"{y0}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n\
             <text x=\"{px:.2}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            y0 + 18.0,
            tick(v, log_ticks)
        );
    }
    for v in steps(frame.ymin, frame.ymax) {
        let py = frame.y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{x0}\" y1=\"{py:.2}\" x2=\"{x1}\" y2=\"{py:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n\
             <text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\">{}</text>",
            x0 - 6.0,
            py + 4.0,
            tick(v, log_ticks)
        );
    }
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str, dashed: bool) {
    if pts.len() < 2 {
        return;
    }
    let mut d = String::new();
    for &(x, y) in pts {
        if frame.contains(x, y) {
            let _ = write!(d, "{:.2},{:.2} ", frame.x(x), frame.y(y));
        }
    }
    if d.is_empty() {
        return;
    }
    let dash = if dashed { " stroke-dasharray=\"7 5\"" } else { "" };
    let _ = writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.7\"{dash}/>",
        d.trim_end()
    );
}

struct Series {
    lambda: f64,
    /// `(log10 t, log10 x_right)` of usable samples.
    points: Vec<(f64, f64)>,
}

fn read_levelsets(path: &Path) -> Result<Vec<Series>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut series: Vec<Series> = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            bail!("{}: malformed row `{line}`", path.display());
        }
        let lambda: f64 = fields[0].parse()?;
        let t: f64 = fields[1].parse()?;
        let x_right: Option<f64> = if fields[3].is_empty() {
            None
        } else {
            Some(fields[3].parse()?)
        };
        if series.last().map(|s| s.lambda) != Some(lambda) {
            series.push(Series {
                lambda,
                points: Vec::new(),
            });
        }
        if let Some(x) = x_right {
            if t > 0.0 && x > 0.0 {
                series.last_mut().unwrap().points.push((t.log10(), x.log10()));
            }
        }
    }
    Ok(series)
}

/// Envelope constants lifted out of `run.json`, if the run accelerates.
struct EnvelopeInfo {
    alpha: f64,
    beta: f64,
    r: f64,
    r_bar: f64,
    c: f64,
    c_bar: f64,
    epsilon: f64,
}

fn read_envelope(run_json: &Path) -> Result<Option<EnvelopeInfo>> {
    let text = std::fs::read_to_string(run_json)
        .with_context(|| format!("reading {}", run_json.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", run_json.display()))?;
    let theory = &value["theory"];
    let accelerating = theory["regime"]["regime"].as_str() == Some("acceleration");
    let env = &theory["envelope"];
    if !accelerating || env.is_null() {
        return Ok(None);
    }
    let get = |key: &str| -> Result<f64> {
        env[key]
            .as_f64()
            .with_context(|| format!("run.json envelope lacks `{key}`"))
    };
    Ok(Some(EnvelopeInfo {
        alpha: get("alpha")?,
        beta: get("beta")?,
        r: get("r")?,
        r_bar: get("r_bar")?,
        c: get("c")?,
        c_bar: get("c_bar")?,
        epsilon: get("epsilon")?,
    }))
}

fn trajectories_svg(series: &[Series], envelope: Option<&EnvelopeInfo>) -> Result<String> {
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    if all.is_empty() {
        bail!("levelsets.csv holds no positive-time crossings to plot");
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let span = (*hi - *lo).max(0.5);
        *lo -= 0.05 * span;
        *hi += 0.05 * span;
    };
    pad(&mut xmin, &mut xmax);
    pad(&mut ymin, &mut ymax);
    let frame = Frame {
        xmin,
        xmax,
        ymin,
        ymax,
    };

    let mut svg = svg_open("level positions (log-log)");
    axes(&mut svg, &frame, "t", "x_lambda(t)", true);

    let mut legend_y = MARGIN_T + 16.0;
    let mut legend = |svg: &mut String, color: &str, dashed: bool, label: &str| {
        let dash = if dashed { " stroke-dasharray=\"7 5\"" } else { "" };
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{legend_y}\" x2=\"{}\" y2=\"{legend_y}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"12\">{label}</text>",
            MARGIN_L + 10.0,
            MARGIN_L + 40.0,
            MARGIN_L + 46.0,
            legend_y + 4.0
        );
        legend_y += 18.0;
    };

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        polyline(&mut svg, &frame, &s.points, color, false);
        legend(&mut svg, color, false, &format!("lambda = {}", s.lambda));
    }

    if let Some(env) = envelope {
        let exponent = 1.0 / (env.alpha * (env.beta - 1.0));
        let curve = |rate: f64, amp: f64| -> Vec<(f64, f64)> {
            (0..=200)
                .map(|i| {
                    let lt = xmin + (xmax - xmin) * i as f64 / 200.0;
                    let t = 10f64.powf(lt);
                    let x = (rate * amp.powf(env.beta - 1.0) * (env.beta - 1.0) * t)
                        .powf(exponent);
                    (lt, x.log10())
                })
                .filter(|&(_, y)| y.is_finite())
                .collect()
        };
        polyline(
            &mut svg,
            &frame,
            &curve(env.r - env.epsilon, env.c),
            "#555555",
            true,
        );
        legend(&mut svg, "#555555", true, "lower envelope x_-(t)");
        polyline(
            &mut svg,
            &frame,
            &curve(env.r_bar + env.epsilon, env.c_bar),
            "#111111",
            true,
        );
        legend(&mut svg, "#111111", true, "upper envelope x_+(t)");
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

struct PhasePoint {
    alpha: f64,
    beta: f64,
    agree: bool,
    label: String,
}

fn read_phase(path: &Path) -> Result<Vec<PhasePoint>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut points = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!("{}: malformed row `{line}`", path.display());
        }
        points.push(PhasePoint {
            alpha: fields[0].parse()?,
            beta: fields[1].parse()?,
            agree: fields[6] == "true",
            label: format!("theory {} / measured {}", fields[2], fields[3]),
        });
    }
    Ok(points)
}

fn phase_svg(points: &[PhasePoint]) -> Result<String> {
    if points.is_empty() {
        bail!("phase_diagram.csv holds no cells to plot");
    }
    let mut frame = Frame {
        xmin: f64::INFINITY,
        xmax: f64::NEG_INFINITY,
        ymin: f64::INFINITY,
        ymax: f64::NEG_INFINITY,
    };
    for p in points {
        frame.xmin = frame.xmin.min(p.alpha);
        frame.xmax = frame.xmax.max(p.alpha);
        frame.ymin = frame.ymin.min(p.beta);
        frame.ymax = frame.ymax.max(p.beta);
    }
    frame.xmin = (frame.xmin - 0.3).max(0.05);
    frame.xmax += 0.3;
    frame.ymin = (frame.ymin - 0.3).max(1.0);
    frame.ymax += 0.3;

    let mut svg = svg_open("spreading phase diagram");
    axes(&mut svg, &frame, "alpha (tail decay exponent)", "beta (reaction degeneracy)", false);

    let hyperbola: Vec<(f64, f64)> = (0..=300)
        .map(|i| {
            let a = frame.xmin + (frame.xmax - frame.xmin) * i as f64 / 300.0;
            (a, 1.0 + 1.0 / a)
        })
        .collect();
    polyline(&mut svg, &frame, &hyperbola, "#333333", true);
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">beta = 1 + 1/alpha</text>",
        WIDTH - MARGIN_R - 170.0,
        MARGIN_T + 18.0
    );

    for p in points {
        let (cx, cy) = (frame.x(p.alpha), frame.y(p.beta));
        let color = if p.agree { "#2ca02c" } else { "#d62728" };
        let _ = writeln!(
            svg,
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"6\" fill=\"{color}\" \
             fill-opacity=\"0.85\"><title>alpha={} beta={}: {}</title></circle>",
            p.alpha, p.beta, p.label
        );
    }
    let _ = writeln!(
        svg,
        "<circle cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"#2ca02c\"/>\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">agreement</text>\n\
         <circle cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"#d62728\"/>\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">disagreement</text>",
        MARGIN_L + 16.0,
        MARGIN_T + 16.0,
        MARGIN_L + 28.0,
        MARGIN_T + 20.0,
        MARGIN_L + 16.0,
        MARGIN_T + 34.0,
        MARGIN_L + 28.0,
        MARGIN_T + 38.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders every plot the artifacts in `dir` support.
pub fn emit_plots(dir: &Path) -> Result<bool> {
    let run_json = dir.join("run.json");
    let levelsets = dir.join("levelsets.csv");
    let phase = dir.join("phase_diagram.csv");
    let mut wrote = Vec::new();

    if levelsets.is_file() {
        let series = read_levelsets(&levelsets)?;
        let envelope = if run_json.is_file() {
            read_envelope(&run_json)?
        } else {
            None
        };
        let svg = trajectories_svg(&series, envelope.as_ref())?;
        let path = dir.join("trajectories.svg");
        std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        wrote.push(path);
    }
    if phase.is_file() {
        let svg = phase_svg(&read_phase(&phase)?)?;
        let path = dir.join("phase.svg");
        std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        wrote.push(path);
    }
    if wrote.is_empty() {
        bail!(
            "no plottable artifacts in {} (need levelsets.csv or phase_diagram.csv)",
            dir.display()
        );
    }
    for path in &wrote {
        println!("wrote {}", path.display());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_plot_marks_agreement_and_hyperbola() {
        let points = vec![
            PhasePoint {
                alpha: 1.0,
                beta: 1.5,
                agree: true,
                label: "t".into(),
            },
            PhasePoint {
                alpha: 2.0,
                beta: 3.0,
                agree: false,
                label: "f".into(),
            },
        ];
        let svg = phase_svg(&points).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("#2ca02c"));
        assert!(svg.contains("#d62728"));
        assert!(svg.contains("1 + 1/alpha"));
    }

    #[test]
    fn trajectory_plot_draws_each_series() {
        let series = vec![Series {
            lambda: 0.5,
            points: (1..=20).map(|i| (i as f64 * 0.1, i as f64 * 0.2)).collect(),
        }];
        let svg = trajectories_svg(&series, None).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("lambda = 0.5"));
        assert!(!svg.contains("envelope"));
    }
}
