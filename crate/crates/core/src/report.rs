//! Deterministic serialization of coefficient grids and band reports.
//!
//! Every number is rounded to 6 significant digits before formatting and the
//! writers avoid anything non-reproducible, so identical inputs always yield
//! byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::bandsearch::{Band, BandReport, CoefficientGrid};
pub use crate::sigfig::format_sig6;
use crate::sigfig::sig6;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Gray mapping for PGM export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapScale {
    /// 0 maps to black, coefficient 1 to white.
    Absolute,
    /// Grid minimum maps to black, grid maximum to white.
    Relative,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    std::fs::write(path, bytes).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Matrix CSV of the coefficient grid: header row `start_um\width_um`
/// followed by the width values, one row per start; absent cells are empty
/// fields.
pub fn heatmap_csv_string(grid: &CoefficientGrid) -> String {
    let mut out = String::from("start_um\\width_um");
    for &w in grid.widths() {
        out.push(',');
        out.push_str(&format_sig6(w));
    }
    out.push('\n');
    for (si, &start) in grid.starts().iter().enumerate() {
        out.push_str(&format_sig6(start));
        for wi in 0..grid.widths().len() {
            out.push(',');
            if let Some(v) = grid.value(si, wi) {
                out.push_str(&format_sig6(v));
            }
        }
        out.push('\n');
    }
    out
}

pub fn export_heatmap_csv(grid: &CoefficientGrid, path: &Path) -> Result<(), ReportError> {
    write_atomic(path, heatmap_csv_string(grid).as_bytes())
}

/// Plain-text PGM (P2, maxval 255) of the grid. Row 0 is the smallest band
/// start; columns run over widths. Absent cells render as 0. Pixel values
/// are `round(255 * g)` with round-half-up, where `g` is the coefficient
/// under `Absolute` scale or its min-max normalization under `Relative`.
pub fn heatmap_pgm_string(grid: &CoefficientGrid, scale: HeatmapScale) -> String {
    let (n_starts, n_widths) = (grid.starts().len(), grid.widths().len());
    let (lo, span) = match scale {
        HeatmapScale::Absolute => (0.0, 1.0),
        HeatmapScale::Relative => {
            let values: Vec<f64> = grid.present_cells().map(|(_, _, v)| v).collect();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if max > min {
                (min, max - min)
            } else {
                // degenerate: uniform grid renders black
                (f64::INFINITY, 1.0)
            }
        }
    };
    let mut out = format!("P2\n{n_widths} {n_starts}\n255\n");
    for si in 0..n_starts {
        for wi in 0..n_widths {
            if wi > 0 {
                out.push(' ');
            }
            let gray = match grid.value(si, wi) {
                Some(v) => {
                    let g = ((v - lo) / span).clamp(0.0, 1.0);
                    // f64::round is half-away-from-zero, which is
                    // round-half-up for nonnegative pixels
                    (255.0 * g).round() as u32
                }
                None => 0,
            };
            out.push_str(&gray.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn export_heatmap_pgm(
    grid: &CoefficientGrid,
    scale: HeatmapScale,
    path: &Path,
) -> Result<(), ReportError> {
    write_atomic(path, heatmap_pgm_string(grid, scale).as_bytes())
}

#[derive(Serialize)]
struct BandDoc {
    start_um: f64,
    width_um: f64,
    end_um: f64,
}

#[derive(Serialize)]
struct BestDoc {
    start_um: f64,
    width_um: f64,
    end_um: f64,
    coefficient: f64,
}

#[derive(Serialize)]
struct RegionDoc {
    start_lo_um: f64,
    start_hi_um: f64,
    width_lo_um: f64,
    width_hi_um: f64,
    max_coefficient: f64,
    argmax_band: BandDoc,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    pair: [&'a str; 2],
    best: Vec<BestDoc>,
    regions: Vec<RegionDoc>,
}

fn band_doc(band: &Band) -> BandDoc {
    BandDoc {
        start_um: sig6(band.start()),
        width_um: sig6(band.width()),
        end_um: sig6(band.end()),
    }
}

/// JSON form of a band report with fixed key order and 6-significant-digit
/// numbers; byte-stable for golden tests.
pub fn band_report_json_string(report: &BandReport) -> String {
    let doc = ReportDoc {
        pair: [report.pair.0.as_str(), report.pair.1.as_str()],
        best: report
            .best
            .iter()
            .map(|rb| BestDoc {
                start_um: sig6(rb.band.start()),
                width_um: sig6(rb.band.width()),
                end_um: sig6(rb.band.end()),
                coefficient: sig6(rb.coefficient),
            })
            .collect(),
        regions: report
            .regions
            .iter()
            .map(|r| RegionDoc {
                start_lo_um: sig6(r.start_lo),
                start_hi_um: sig6(r.start_hi),
                width_lo_um: sig6(r.width_lo),
                width_hi_um: sig6(r.width_hi),
                max_coefficient: sig6(r.max_coefficient),
                argmax_band: band_doc(&r.argmax),
            })
            .collect(),
    };
    let mut json = serde_json::to_string(&doc).expect("report serialization cannot fail");
    json.push('\n');
    json
}

pub fn export_band_report_json(report: &BandReport, path: &Path) -> Result<(), ReportError> {
    write_atomic(path, band_report_json_string(report).as_bytes())
}
