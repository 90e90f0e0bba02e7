//! SVG figures from run artifacts.
//!
//! Interface overlays read CSV files with `x` and `y` columns (trajectory
//! files contribute their last step). Heatmaps read field snapshots and embed
//! the raster as a base64 PNG. Dispersion curves read `k` and `rate`
//! columns and plot one point per row.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use base64::Engine;

use crate::error::{Error, Result};
use crate::phase_field::read_snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    InterfaceOverlay,
    FieldHeatmap,
    DispersionCurve,
}

impl FigureKind {
    pub fn name(self) -> &'static str {
        match self {
            FigureKind::InterfaceOverlay => "interface-overlay",
            FigureKind::FieldHeatmap => "field-heatmap",
            FigureKind::DispersionCurve => "dispersion-curve",
        }
    }
}

impl std::str::FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interface-overlay" => Ok(FigureKind::InterfaceOverlay),
            "field-heatmap" => Ok(FigureKind::FieldHeatmap),
            "dispersion-curve" => Ok(FigureKind::DispersionCurve),
            _ => Err(Error::InvalidInput(format!("unknown figure kind `{s}`"))),
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn malformed(path: &Path, message: impl Into<String>) -> Error {
    Error::MalformedCsv {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn require(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::MissingArtifact(path.display().to_string()))
    }
}

/// Named numeric columns of a CSV file.
fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    require(path)?;
    let mut r = csv::Reader::from_path(path).map_err(|e| malformed(path, e.to_string()))?;
    let headers = r.headers().map_err(|e| malformed(path, e.to_string()))?.clone();
    let idx = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h.trim() == *n)
                .ok_or_else(|| malformed(path, format!("missing column `{n}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| malformed(path, e.to_string()))?;
        for (c, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).unwrap_or("");
            let v = cell.trim().parse::<f64>().map_err(|_| {
                malformed(path, format!("row {}: `{cell}` is not a number", line + 2))
            })?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

/// Polyline of an interface or trajectory CSV.
fn read_polyline(path: &Path) -> Result<Vec<(f64, f64)>> {
    require(path)?;
    let mut r = csv::Reader::from_path(path).map_err(|e| malformed(path, e.to_string()))?;
    let has_step = r
        .headers()
        .map_err(|e| malformed(path, e.to_string()))?
        .iter()
        .any(|h| h.trim() == "step");
    if !has_step {
        let c = read_columns(path, &["x", "y"])?;
        return Ok(c[0].iter().copied().zip(c[1].iter().copied()).collect());
    }
    let c = read_columns(path, &["step", "x", "y"])?;
    let last = c[0].iter().copied().fold(f64::MIN, f64::max);
    Ok((0..c[0].len())
        .filter(|&i| c[0][i] == last)
        .map(|i| (c[1][i], c[2][i]))
        .collect())
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut f = Frame { x0: f64::MAX, x1: f64::MIN, y0: f64::MAX, y1: f64::MIN };
        for (x, y) in points {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if f.x0 > f.x1 {
            return Frame { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        let pad = |lo: f64, hi: f64| {
            let w = hi - lo;
            let p = if w > 0.0 { 0.05 * w } else { 0.5 * lo.abs().max(1.0) };
            (lo - p, hi + p)
        };
        let (x0, x1) = pad(f.x0, f.x1);
        let (y0, y1) = pad(f.y0, f.y1);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>",
        WIDTH / 2.0
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r, b, t) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        "<g class=\"axes\" stroke=\"black\" fill=\"none\"><rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\"/></g>",
        r - l,
        b - t
    );
    let _ = writeln!(out, "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">");
    for i in 0..=4 {
        let s = i as f64 / 4.0;
        let xv = f.x0 + s * (f.x1 - f.x0);
        let yv = f.y0 + s * (f.y1 - f.y0);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.3}</text>",
            f.px(xv),
            b + 16.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.3}</text>",
            l - 6.0,
            f.py(yv) + 4.0
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{xlabel}</text>",
        WIDTH / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {})\">{ylabel}</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

fn file_label(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn interface_overlay(inputs: &[PathBuf]) -> Result<String> {
    let lines = inputs.iter().map(|p| read_polyline(p)).collect::<Result<Vec<_>>>()?;
    let f = Frame::fit(lines.iter().flatten().copied());
    let mut out = String::new();
    header(&mut out, "Interface overlay");
    axes(&mut out, &f, "x / W", "y / W");
    for (i, (pts, path)) in lines.iter().zip(inputs).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (x, y) in pts {
            let _ = write!(d, "{:.3},{:.3} ", f.px(*x), f.py(*y));
        }
        let _ = writeln!(
            out,
            "<polyline class=\"interface\" data-source=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            file_label(path),
            d.trim_end()
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>",
            WIDTH - MARGIN + 4.0 - 120.0,
            MARGIN + 14.0 * (i + 1) as f64,
            file_label(path)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Blue-white-red ramp over [0, 1].
fn ramp(s: f64) -> [u8; 3] {
    let s = s.clamp(0.0, 1.0);
    let (r, g, b) = if s < 0.5 {
        let t = s / 0.5;
        (t, t, 1.0)
    } else {
        let t = (s - 0.5) / 0.5;
        (1.0, 1.0 - t, 1.0 - t)
    };
    [(r * 255.0).round() as u8, (g * 255.0).round() as u8, (b * 255.0).round() as u8]
}

fn field_heatmap(input: &Path) -> Result<String> {
    require(input)?;
    let snap = read_snapshot(input)?;
    let field = &snap.field;
    let (nx, ny) = (field.nx(), field.ny());
    let (lo, hi) = field.min_max();
    let mut rgb = Vec::with_capacity(nx * ny * 3);
    // PNG rows run top to bottom, grid rows bottom to top
    for j in (0..ny).rev() {
        for i in 0..nx {
            let s = if hi > lo { (field.at(i, j) - lo) / (hi - lo) } else { 0.5 };
            rgb.extend_from_slice(&ramp(s));
        }
    }
    let mut png_bytes = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut png_bytes, nx as u32, ny as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(|e| Error::Io(e.to_string()))?;
        w.write_image_data(&rgb).map_err(|e| Error::Io(e.to_string()))?;
    }
    let data = base64::engine::general_purpose::STANDARD.encode(&png_bytes);
    let (lx, ly) = (field.lx(), field.ly());
    let f = Frame { x0: 0.0, x1: lx, y0: 0.0, y1: ly };
    let mut out = String::new();
    header(&mut out, &format!("{} at t = {:.4}", snap.name, snap.t));
    let _ = writeln!(
        out,
        "<metadata><extent x0=\"0\" x1=\"{lx:?}\" y0=\"0\" y1=\"{ly:?}\" nx=\"{nx}\" ny=\"{ny}\" min=\"{lo:?}\" max=\"{hi:?}\"/></metadata>"
    );
    let _ = writeln!(
        out,
        "<image class=\"raster\" x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" preserveAspectRatio=\"none\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64,{data}\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    axes(&mut out, &f, "x / W", "y / W");
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"44\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">range [{lo:.4}, {hi:.4}]</text>",
        WIDTH - MARGIN
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn dispersion_curve(input: &Path) -> Result<String> {
    let c = read_columns(input, &["k", "rate"])?;
    let pts: Vec<(f64, f64)> = c[0].iter().copied().zip(c[1].iter().copied()).collect();
    let f = Frame::fit(pts.iter().copied().chain(std::iter::once((0.0, 0.0))));
    let mut out = String::new();
    header(&mut out, "Growth rate");
    axes(&mut out, &f, "k W", "growth rate W / U*");
    let _ = writeln!(
        out,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>",
        f.px(f.x0),
        f.py(0.0),
        f.px(f.x1),
        f.py(0.0)
    );
    for (x, y) in &pts {
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"{}\"/>",
            f.px(*x),
            f.py(*y),
            COLORS[0]
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders `kind` from `inputs` and writes the SVG to `out`.
pub fn emit_figure(inputs: &[PathBuf], kind: FigureKind, out: &Path) -> Result<()> {
    let svg = render_figure(inputs, kind)?;
    std::fs::write(out, svg)?;
    Ok(())
}

pub fn render_figure(inputs: &[PathBuf], kind: FigureKind) -> Result<String> {
    if inputs.is_empty() {
        return Err(Error::MissingArtifact(format!("no inputs for {}", kind.name())));
    }
    match kind {
        FigureKind::InterfaceOverlay => interface_overlay(inputs),
        FigureKind::FieldHeatmap => field_heatmap(&inputs[0]),
        FigureKind::DispersionCurve => dispersion_curve(&inputs[0]),
    }
}
