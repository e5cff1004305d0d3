//! Exhaustive waveband scan with the normalized-contrast coefficient.
//!
//! For a candidate band starting at `i` with width `j`, the coefficient is
//!
//! ```text
//! |AUC1(i,j) - AUC2(i,j)| / (AUC1(i,j) + AUC2(i,j))
//! ```
//!
//! where each AUC is the trapezoid area under one class's averaged spectrum
//! over the band. Areas come from a cumulative prefix integral, so every
//! band costs O(1) and the full triangular (start, width) grid costs O(cells)
//! instead of O(cells x grid points). Cells are independent, which makes the
//! scan embarrassingly parallel; the `parallel` feature switches the row loop
//! to rayon without changing a single bit of the output.

use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use thiserror::Error;

use crate::resample::{AveragedSpectrum, WavelengthGrid};
use crate::spectrum::ClassLabel;

/// Narrowest band worth scanning, μm (50 nm: narrower optical filters are
/// not practical in the field).
pub const MIN_BAND_WIDTH_UM: f64 = 0.05;

/// Alignment tolerance for band endpoints against the grid lattice, μm.
pub const BAND_ALIGN_TOL_UM: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BandSearchError {
    #[error("invalid band: {reason}")]
    InvalidBand { reason: String },
    #[error("invalid scan config: {reason}")]
    InvalidConfig { reason: String },
    #[error("band [{lo}, {hi}] um outside grid range [{grid_lo}, {grid_hi}] um")]
    BandOutOfRange {
        lo: f64,
        hi: f64,
        grid_lo: f64,
        grid_hi: f64,
    },
    #[error("band endpoint {wavelength} um is not on the integration grid")]
    BandNotOnGrid { wavelength: f64 },
    #[error("negative AUC ({auc1}, {auc2}); areas under nonnegative spectra cannot be negative")]
    NegativeAuc { auc1: f64, auc2: f64 },
    #[error("averaged spectra are on different grids")]
    IncompatibleGrids,
    #[error("scan step {scan_step} um is not an integer multiple of the grid step {grid_step} um")]
    StepMismatch { scan_step: f64, grid_step: f64 },
    #[error("coefficient grid has no present cells")]
    EmptyGrid,
}

/// Contiguous waveband `[start, start + width]`, μm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    start: f64,
    width: f64,
}

impl Band {
    pub fn new(start: f64, width: f64) -> Result<Self, BandSearchError> {
        if !start.is_finite() || start <= 0.0 {
            return Err(BandSearchError::InvalidBand {
                reason: format!("start must be positive, got {start}"),
            });
        }
        if !width.is_finite() || width < MIN_BAND_WIDTH_UM - BAND_ALIGN_TOL_UM {
            return Err(BandSearchError::InvalidBand {
                reason: format!("width must be at least {MIN_BAND_WIDTH_UM} um, got {width}"),
            });
        }
        Ok(Band { start, width })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    /// Inclusive containment, tolerant to [`BAND_ALIGN_TOL_UM`] of lattice
    /// rounding on the endpoints.
    pub fn contains(&self, wavelength: f64) -> bool {
        wavelength >= self.start - BAND_ALIGN_TOL_UM
            && wavelength <= self.end() + BAND_ALIGN_TOL_UM
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{} um",
            crate::sigfig::format_sig6(self.start),
            crate::sigfig::format_sig6(self.end())
        )
    }
}

/// Cumulative trapezoid integral of an averaged spectrum.
///
/// `prefix[k]` is the area from grid point 0 to grid point k, so the area of
/// any grid-aligned band is one subtraction.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    grid: WavelengthGrid,
    prefix: Vec<f64>,
}

/// Build the prefix integral for `a`.
pub fn cumulative_integral(a: &AveragedSpectrum) -> CumulativeIntegral {
    let grid = a.grid().clone();
    let r = a.mean_reflectance();
    let step = grid.step();
    let mut prefix = Vec::with_capacity(grid.count());
    let mut sum = 0.0f64;
    prefix.push(0.0);
    for k in 0..grid.count() - 1 {
        sum += step * (r[k] + r[k + 1]) / 2.0;
        prefix.push(sum);
    }
    CumulativeIntegral { grid, prefix }
}

impl CumulativeIntegral {
    pub fn grid(&self) -> &WavelengthGrid {
        &self.grid
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    /// Total area under the whole curve.
    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    fn index_of(&self, wavelength: f64) -> Result<usize, BandSearchError> {
        self.grid
            .index_of(wavelength)
            .ok_or(BandSearchError::BandNotOnGrid { wavelength })
    }

    /// Area under the spectrum over `band`. Both endpoints must be grid
    /// points.
    pub fn auc(&self, band: &Band) -> Result<f64, BandSearchError> {
        let (grid_lo, grid_hi) = (self.grid.start(), self.grid.end());
        if band.start() < grid_lo - BAND_ALIGN_TOL_UM || band.end() > grid_hi + BAND_ALIGN_TOL_UM {
            return Err(BandSearchError::BandOutOfRange {
                lo: band.start(),
                hi: band.end(),
                grid_lo,
                grid_hi,
            });
        }
        let i_start = self.index_of(band.start())?;
        let i_end = self.index_of(band.end())?;
        Ok(self.prefix[i_end] - self.prefix[i_start])
    }
}

/// Normalized contrast of two band areas, total over nonnegative inputs.
/// Zero by convention when both areas are zero.
#[inline]
fn normalized_contrast(auc1: f64, auc2: f64) -> f64 {
    debug_assert!(auc1 >= 0.0 && auc2 >= 0.0);
    let sum = auc1 + auc2;
    if sum == 0.0 {
        0.0
    } else {
        (auc1 - auc2).abs() / sum
    }
}

/// `|auc1 - auc2| / (auc1 + auc2)`, the coefficient from two band areas.
///
/// Defined as 0 when both areas are 0 (two empty bands carry no
/// discriminative information). Always lands in `[0, 1]`.
pub fn discriminative_coef(auc1: f64, auc2: f64) -> Result<f64, BandSearchError> {
    if auc1 < 0.0 || auc2 < 0.0 || !auc1.is_finite() || !auc2.is_finite() {
        return Err(BandSearchError::NegativeAuc { auc1, auc2 });
    }
    Ok(normalized_contrast(auc1, auc2))
}

/// Scan window and granularity.
#[derive(Debug, Clone, PartialEq)]
pub struct BandScanConfig {
    /// Granularity of band starts and widths, μm. Defaults to 0.05 (50 nm).
    pub scan_step: f64,
    /// Scan window lower bound, μm; band starts anchor here.
    pub range_lo: f64,
    /// Scan window upper bound, μm; no band extends past it.
    pub range_hi: f64,
    /// Widest band to scan, μm. Defaults to the whole window.
    pub max_width: f64,
    /// Fraction of the grid maximum a cell needs to join a selective region.
    pub region_threshold_fraction: f64,
}

impl BandScanConfig {
    pub fn new(range_lo: f64, range_hi: f64) -> Self {
        BandScanConfig {
            scan_step: MIN_BAND_WIDTH_UM,
            range_lo,
            range_hi,
            max_width: range_hi - range_lo,
            region_threshold_fraction: 0.8,
        }
    }

    pub fn with_scan_step(mut self, scan_step: f64) -> Self {
        self.scan_step = scan_step;
        self
    }

    pub fn with_max_width(mut self, max_width: f64) -> Self {
        self.max_width = max_width;
        self
    }

    pub fn with_region_threshold(mut self, fraction: f64) -> Self {
        self.region_threshold_fraction = fraction;
        self
    }

    fn validate(&self) -> Result<(), BandSearchError> {
        let fail = |reason: String| Err(BandSearchError::InvalidConfig { reason });
        if !self.range_lo.is_finite() || !self.range_hi.is_finite() || self.range_lo >= self.range_hi
        {
            return fail(format!(
                "window [{}, {}] um is empty or inverted",
                self.range_lo, self.range_hi
            ));
        }
        if self.range_lo <= 0.0 {
            return fail(format!("window must start above 0, got {}", self.range_lo));
        }
        if !self.scan_step.is_finite() || self.scan_step < MIN_BAND_WIDTH_UM - BAND_ALIGN_TOL_UM {
            return fail(format!(
                "scan step must be at least {MIN_BAND_WIDTH_UM} um, got {}",
                self.scan_step
            ));
        }
        if !self.max_width.is_finite() || self.max_width < self.scan_step - BAND_ALIGN_TOL_UM {
            return fail(format!(
                "max width {} um is narrower than the scan step {} um",
                self.max_width, self.scan_step
            ));
        }
        if !(self.region_threshold_fraction > 0.0 && self.region_threshold_fraction <= 1.0) {
            return fail(format!(
                "region threshold fraction must be in (0, 1], got {}",
                self.region_threshold_fraction
            ));
        }
        Ok(())
    }
}

/// Coefficient for every candidate band, indexed `[start][width]`.
///
/// Cells whose band would extend past `range_hi` are absent, so the occupied
/// area is triangular.
#[derive(Debug, Clone)]
pub struct CoefficientGrid {
    config: BandScanConfig,
    starts: Vec<f64>,
    widths: Vec<f64>,
    values: Vec<Option<f64>>,
    pair: (ClassLabel, ClassLabel),
}

impl CoefficientGrid {
    /// Assemble a grid from raw parts, enforcing the value range and the
    /// triangular absence pattern. `values` is row-major `[start][width]`.
    pub fn from_parts(
        config: BandScanConfig,
        starts: Vec<f64>,
        widths: Vec<f64>,
        values: Vec<Option<f64>>,
        pair: (ClassLabel, ClassLabel),
    ) -> Result<Self, BandSearchError> {
        config.validate()?;
        let invalid = |reason: String| Err(BandSearchError::InvalidConfig { reason });
        if values.len() != starts.len() * widths.len() {
            return invalid(format!(
                "{} values do not fill a {} x {} grid",
                values.len(),
                starts.len(),
                widths.len()
            ));
        }
        for (si, &start) in starts.iter().enumerate() {
            for (wi, &width) in widths.iter().enumerate() {
                let cell = values[si * widths.len() + wi];
                let fits = start + width <= config.range_hi + BAND_ALIGN_TOL_UM;
                match cell {
                    Some(v) if !fits => {
                        return invalid(format!(
                            "cell ({start}, {width}) holds {v} but extends past range_hi"
                        ));
                    }
                    Some(v) if !(0.0..=1.0).contains(&v) => {
                        return invalid(format!("coefficient {v} outside [0, 1]"));
                    }
                    None if fits => {
                        return invalid(format!(
                            "cell ({start}, {width}) fits the window but is absent"
                        ));
                    }
                    _ => {}
                }
            }
        }
        Ok(CoefficientGrid {
            config,
            starts,
            widths,
            values,
            pair,
        })
    }

    pub fn config(&self) -> &BandScanConfig {
        &self.config
    }

    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn pair(&self) -> (&ClassLabel, &ClassLabel) {
        (&self.pair.0, &self.pair.1)
    }

    pub fn value(&self, start_idx: usize, width_idx: usize) -> Option<f64> {
        self.values[start_idx * self.widths.len() + width_idx]
    }

    pub fn band(&self, start_idx: usize, width_idx: usize) -> Band {
        Band {
            start: self.starts[start_idx],
            width: self.widths[width_idx],
        }
    }

    /// Present cells as `(start_idx, width_idx, coefficient)`, row-major.
    pub fn present_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| {
            v.map(|v| (i / self.widths.len(), i % self.widths.len(), v))
        })
    }

    pub fn present_count(&self) -> usize {
        self.values.iter().flatten().count()
    }

    /// Largest present coefficient.
    pub fn max_value(&self) -> Option<f64> {
        self.values.iter().flatten().copied().reduce(f64::max)
    }
}

struct ScanPlan {
    origin_index: usize,
    stride: usize,
    total_steps: usize,
    n_starts: usize,
    n_widths: usize,
    starts: Vec<f64>,
    widths: Vec<f64>,
}

fn plan_scan(grid: &WavelengthGrid, config: &BandScanConfig) -> Result<ScanPlan, BandSearchError> {
    config.validate()?;

    let stride_f = (config.scan_step / grid.step()).round();
    if stride_f < 1.0 || (stride_f * grid.step() - config.scan_step).abs() > BAND_ALIGN_TOL_UM {
        return Err(BandSearchError::StepMismatch {
            scan_step: config.scan_step,
            grid_step: grid.step(),
        });
    }
    let stride = stride_f as usize;

    let origin_index = grid
        .index_of(config.range_lo)
        .ok_or(BandSearchError::BandNotOnGrid {
            wavelength: config.range_lo,
        })?;

    // number of scan steps that fit in the window
    let total_steps =
        ((config.range_hi - config.range_lo + BAND_ALIGN_TOL_UM) / config.scan_step).floor()
            as usize;
    if total_steps < 1 {
        return Err(BandSearchError::InvalidConfig {
            reason: format!(
                "window [{}, {}] um is narrower than one scan step ({} um)",
                config.range_lo, config.range_hi, config.scan_step
            ),
        });
    }
    if origin_index + total_steps * stride > grid.count() - 1 {
        return Err(BandSearchError::BandOutOfRange {
            lo: config.range_lo,
            hi: config.range_lo + total_steps as f64 * config.scan_step,
            grid_lo: grid.start(),
            grid_hi: grid.end(),
        });
    }

    let n_starts = total_steps;
    let n_widths = total_steps
        .min(((config.max_width + BAND_ALIGN_TOL_UM) / config.scan_step).floor() as usize);
    let starts = (0..n_starts)
        .map(|k| config.range_lo + k as f64 * config.scan_step)
        .collect();
    let widths = (1..=n_widths)
        .map(|m| m as f64 * config.scan_step)
        .collect();

    Ok(ScanPlan {
        origin_index,
        stride,
        total_steps,
        n_starts,
        n_widths,
        starts,
        widths,
    })
}

/// One row of the coefficient matrix: all widths for the k-th band start.
/// Shared verbatim by the serial and parallel drivers, so both produce
/// identical bits.
fn fill_row(row: &mut [Option<f64>], k: usize, plan: &ScanPlan, prefix1: &[f64], prefix2: &[f64]) {
    let i_start = plan.origin_index + k * plan.stride;
    let base1 = prefix1[i_start];
    let base2 = prefix2[i_start];
    for m in 1..=plan.n_widths {
        if k + m > plan.total_steps {
            break;
        }
        let i_end = plan.origin_index + (k + m) * plan.stride;
        let auc1 = prefix1[i_end] - base1;
        let auc2 = prefix2[i_end] - base2;
        row[m - 1] = Some(normalized_contrast(auc1, auc2));
    }
}

fn prepare(
    a1: &AveragedSpectrum,
    a2: &AveragedSpectrum,
    config: &BandScanConfig,
) -> Result<(ScanPlan, CumulativeIntegral, CumulativeIntegral), BandSearchError> {
    if a1.grid() != a2.grid() {
        return Err(BandSearchError::IncompatibleGrids);
    }
    let plan = plan_scan(a1.grid(), config)?;
    Ok((plan, cumulative_integral(a1), cumulative_integral(a2)))
}

fn assemble(
    plan: ScanPlan,
    values: Vec<Option<f64>>,
    config: &BandScanConfig,
    a1: &AveragedSpectrum,
    a2: &AveragedSpectrum,
) -> CoefficientGrid {
    CoefficientGrid {
        config: config.clone(),
        starts: plan.starts,
        widths: plan.widths,
        values,
        pair: (a1.class_label().clone(), a2.class_label().clone()),
    }
}

/// Evaluate the coefficient for every candidate band, single-threaded.
pub fn scan_grid_seq(
    a1: &AveragedSpectrum,
    a2: &AveragedSpectrum,
    config: &BandScanConfig,
) -> Result<CoefficientGrid, BandSearchError> {
    let (plan, c1, c2) = prepare(a1, a2, config)?;
    let mut values = vec![None; plan.n_starts * plan.n_widths];
    for (k, row) in values.chunks_mut(plan.n_widths).enumerate() {
        fill_row(row, k, &plan, c1.prefix(), c2.prefix());
    }
    Ok(assemble(plan, values, config, a1, a2))
}

/// Evaluate the coefficient for every candidate band across the rayon pool.
/// Output is bit-identical to [`scan_grid_seq`].
#[cfg(feature = "parallel")]
pub fn scan_grid_par(
    a1: &AveragedSpectrum,
    a2: &AveragedSpectrum,
    config: &BandScanConfig,
) -> Result<CoefficientGrid, BandSearchError> {
    let (plan, c1, c2) = prepare(a1, a2, config)?;
    let mut values = vec![None; plan.n_starts * plan.n_widths];
    values
        .par_chunks_mut(plan.n_widths)
        .enumerate()
        .for_each(|(k, row)| fill_row(row, k, &plan, c1.prefix(), c2.prefix()));
    Ok(assemble(plan, values, config, a1, a2))
}

/// Evaluate the coefficient for every candidate band. Uses the rayon pool
/// when the `parallel` feature is enabled, otherwise runs serially; the
/// result is identical either way.
pub fn scan_grid(
    a1: &AveragedSpectrum,
    a2: &AveragedSpectrum,
    config: &BandScanConfig,
) -> Result<CoefficientGrid, BandSearchError> {
    #[cfg(feature = "parallel")]
    {
        scan_grid_par(a1, a2, config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        scan_grid_seq(a1, a2, config)
    }
}

/// One band with its coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedBand {
    pub band: Band,
    pub coefficient: f64,
}

/// Connected component of above-threshold cells, summarized by its bounding
/// ranges in (start, width) space.
#[derive(Debug, Clone)]
pub struct SelectiveRegion {
    pub start_lo: f64,
    pub start_hi: f64,
    pub width_lo: f64,
    pub width_hi: f64,
    pub max_coefficient: f64,
    pub argmax: Band,
    /// Member bands in row-major scan order.
    pub members: Vec<Band>,
}

/// Ranked optimal bands and selective regions for one class pair.
#[derive(Debug, Clone)]
pub struct BandReport {
    pub pair: (ClassLabel, ClassLabel),
    pub best: Vec<RankedBand>,
    pub regions: Vec<SelectiveRegion>,
}

/// Ordering used everywhere ties must break deterministically: larger
/// coefficient first, then narrower band, then smaller start. Narrower
/// winners mean cheaper filters.
fn rank_cells(
    a: &(usize, usize, f64),
    b: &(usize, usize, f64),
) -> std::cmp::Ordering {
    b.2.partial_cmp(&a.2)
        .expect("coefficients are never NaN")
        .then(a.1.cmp(&b.1))
        .then(a.0.cmp(&b.0))
}

/// Top-`k` bands by coefficient. Truncated when the grid has fewer present
/// cells than `k`.
pub fn find_optimal_bands(
    grid: &CoefficientGrid,
    k: usize,
) -> Result<Vec<RankedBand>, BandSearchError> {
    if k == 0 {
        return Err(BandSearchError::InvalidConfig {
            reason: "top-k must be at least 1".to_string(),
        });
    }
    let mut cells: Vec<(usize, usize, f64)> = grid.present_cells().collect();
    if cells.is_empty() {
        return Err(BandSearchError::EmptyGrid);
    }
    cells.sort_by(rank_cells);
    Ok(cells
        .into_iter()
        .take(k)
        .map(|(si, wi, v)| RankedBand {
            band: grid.band(si, wi),
            coefficient: v,
        })
        .collect())
}

/// Connected components (4-adjacency in index space) of present cells whose
/// coefficient reaches `region_threshold_fraction` of the grid maximum.
/// Empty when the grid maximum is 0. Regions are ordered by max coefficient
/// descending, ties by smaller start then smaller width.
pub fn find_selective_regions(
    grid: &CoefficientGrid,
) -> Result<Vec<SelectiveRegion>, BandSearchError> {
    let max = grid.max_value().ok_or(BandSearchError::EmptyGrid)?;
    if max == 0.0 {
        return Ok(Vec::new());
    }
    let threshold = grid.config().region_threshold_fraction * max;
    let (n_starts, n_widths) = (grid.starts().len(), grid.widths().len());
    let hot = |si: usize, wi: usize| grid.value(si, wi).is_some_and(|v| v >= threshold);

    let mut seen = vec![false; n_starts * n_widths];
    let mut regions = Vec::new();
    for si in 0..n_starts {
        for wi in 0..n_widths {
            if seen[si * n_widths + wi] || !hot(si, wi) {
                continue;
            }
            // flood fill one component
            let mut cells = Vec::new();
            let mut queue = vec![(si, wi)];
            seen[si * n_widths + wi] = true;
            while let Some((s, w)) = queue.pop() {
                cells.push((s, w, grid.value(s, w).unwrap()));
                let mut push = |ns: usize, nw: usize| {
                    if !seen[ns * n_widths + nw] && hot(ns, nw) {
                        seen[ns * n_widths + nw] = true;
                        queue.push((ns, nw));
                    }
                };
                if s > 0 {
                    push(s - 1, w);
                }
                if s + 1 < n_starts {
                    push(s + 1, w);
                }
                if w > 0 {
                    push(s, w - 1);
                }
                if w + 1 < n_widths {
                    push(s, w + 1);
                }
            }
            cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            let argmax_cell = cells
                .iter()
                .copied()
                .min_by(rank_cells)
                .unwrap();
            regions.push(SelectiveRegion {
                start_lo: grid.starts()[cells.iter().map(|c| c.0).min().unwrap()],
                start_hi: grid.starts()[cells.iter().map(|c| c.0).max().unwrap()],
                width_lo: grid.widths()[cells.iter().map(|c| c.1).min().unwrap()],
                width_hi: grid.widths()[cells.iter().map(|c| c.1).max().unwrap()],
                max_coefficient: argmax_cell.2,
                argmax: grid.band(argmax_cell.0, argmax_cell.1),
                members: cells.iter().map(|&(s, w, _)| grid.band(s, w)).collect(),
            });
        }
    }
    regions.sort_by(|a, b| {
        b.max_coefficient
            .partial_cmp(&a.max_coefficient)
            .expect("coefficients are never NaN")
            .then(a.start_lo.partial_cmp(&b.start_lo).unwrap())
            .then(a.width_lo.partial_cmp(&b.width_lo).unwrap())
    });
    Ok(regions)
}

/// Full report: top-`k` bands plus selective regions.
pub fn build_report(grid: &CoefficientGrid, k: usize) -> Result<BandReport, BandSearchError> {
    Ok(BandReport {
        pair: (grid.pair().0.clone(), grid.pair().1.clone()),
        best: find_optimal_bands(grid, k)?,
        regions: find_selective_regions(grid)?,
    })
}
