//! End-to-end analysis of one class pair: shared grid, class averages,
//! coefficient scan, report.

use thiserror::Error;

use crate::bandsearch::{
    build_report, scan_grid, BandReport, BandScanConfig, BandSearchError, CoefficientGrid,
    MIN_BAND_WIDTH_UM,
};
use crate::dataset::ClassedDataset;
use crate::resample::{
    average_class, wavelength_intersection, AveragedSpectrum, ResampleError, WavelengthGrid,
};
use crate::spectrum::ClassLabel;

/// Default scan window bounds, μm: the measured infrared range. The actual
/// window is the pair's common data range clipped to these.
pub const DEFAULT_WINDOW_LO_UM: f64 = 1.6;
pub const DEFAULT_WINDOW_HI_UM: f64 = 18.0;

/// Internal integration resolution, μm. Finer than the scan step so band
/// areas do not depend on the scan granularity.
pub const DEFAULT_RESOLUTION_UM: f64 = 0.01;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown class label `{label}`")]
    UnknownLabel { label: String },
    #[error(
        "default scan window is empty: data covers [{data_lo}, {data_hi}] um, \
         outside [{DEFAULT_WINDOW_LO_UM}, {DEFAULT_WINDOW_HI_UM}] um; pass an explicit window"
    )]
    EmptyDefaultWindow { data_lo: f64, data_hi: f64 },
    #[error(transparent)]
    Resample(#[from] ResampleError),
    #[error(transparent)]
    Scan(#[from] BandSearchError),
}

/// Knobs for [`analyze_pair`]; `Default` gives the standard 50 nm scan at
/// 10 nm internal resolution.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub scan_step: f64,
    pub resolution: f64,
    /// Explicit scan window; `None` means the pair's common range clipped to
    /// `[1.6, 18]` μm.
    pub window: Option<(f64, f64)>,
    /// Widest band to scan; `None` means the whole window.
    pub max_width: Option<f64>,
    pub region_threshold_fraction: f64,
    pub top_k: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            scan_step: MIN_BAND_WIDTH_UM,
            resolution: DEFAULT_RESOLUTION_UM,
            window: None,
            max_width: None,
            region_threshold_fraction: 0.8,
            top_k: 5,
        }
    }
}

/// Everything produced for one class pair.
#[derive(Debug)]
pub struct PairAnalysis {
    pub grid: CoefficientGrid,
    pub report: BandReport,
    pub averaged: [AveragedSpectrum; 2],
}

/// Run the full pipeline for the pair `(a, b)`.
pub fn analyze_pair(
    dataset: &ClassedDataset,
    a: &ClassLabel,
    b: &ClassLabel,
    opts: &AnalysisOptions,
) -> Result<PairAnalysis, AnalysisError> {
    let group_a = dataset.group(a).ok_or_else(|| AnalysisError::UnknownLabel {
        label: a.as_str().to_string(),
    })?;
    let group_b = dataset.group(b).ok_or_else(|| AnalysisError::UnknownLabel {
        label: b.as_str().to_string(),
    })?;

    let (window_lo, window_hi) = match opts.window {
        Some(window) => window,
        None => {
            let (data_lo, data_hi) = wavelength_intersection(group_a.iter().chain(group_b))
                .ok_or(ResampleError::DegenerateOverlap {
                    lo: f64::NAN,
                    hi: f64::NAN,
                    resolution: opts.resolution,
                })?;
            let lo = data_lo.max(DEFAULT_WINDOW_LO_UM);
            let hi = data_hi.min(DEFAULT_WINDOW_HI_UM);
            if hi - lo < opts.scan_step {
                return Err(AnalysisError::EmptyDefaultWindow { data_lo, data_hi });
            }
            (lo, hi)
        }
    };

    let grid = WavelengthGrid::spanning(window_lo, window_hi, opts.resolution)?;
    let avg_a = average_class(group_a, a, &grid)?;
    let avg_b = average_class(group_b, b, &grid)?;

    // snap the scan window to the integration grid so every band endpoint is
    // a grid point
    let mut config = BandScanConfig::new(grid.start(), grid.end())
        .with_scan_step(opts.scan_step)
        .with_region_threshold(opts.region_threshold_fraction);
    if let Some(max_width) = opts.max_width {
        config = config.with_max_width(max_width);
    }

    let coefficient_grid = scan_grid(&avg_a, &avg_b, &config)?;
    let report = build_report(&coefficient_grid, opts.top_k)?;
    Ok(PairAnalysis {
        grid: coefficient_grid,
        report,
        averaged: [avg_a, avg_b],
    })
}
