//! Uniform wavelength grids, linear resampling, and per-class averaging.
//!
//! Class pairs are compared on one shared uniform grid. The grid lattice is
//! anchored at multiples of the resolution measured from zero, so the same
//! resolution always lands on the same absolute wavelengths regardless of
//! where the data happens to start.

use thiserror::Error;

use crate::spectrum::{ClassLabel, Spectrum};

/// Snap tolerance when matching wavelengths to lattice points, μm.
pub const GRID_SNAP_TOL_UM: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ResampleError {
    #[error("degenerate overlap: common range [{lo}, {hi}] um cannot hold a grid at {resolution} um resolution")]
    DegenerateOverlap { lo: f64, hi: f64, resolution: f64 },
    #[error("grid point {wavelength} um outside spectrum range [{lo}, {hi}] um")]
    GridOutOfRange { wavelength: f64, lo: f64, hi: f64 },
    #[error("group contains no spectra")]
    EmptyGroup,
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
}

/// Uniform wavelength grid: points `start + k * step` for `k in 0..count`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavelengthGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl WavelengthGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self, ResampleError> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(ResampleError::InvalidGrid {
                reason: format!("step must be positive and finite, got {step}"),
            });
        }
        if count < 2 {
            return Err(ResampleError::InvalidGrid {
                reason: format!("need at least 2 grid points, got {count}"),
            });
        }
        Ok(WavelengthGrid { start, step, count })
    }

    /// Maximal grid with the given step whose points all lie in `[lo, hi]`,
    /// with the start rounded up to the nearest multiple of `step` measured
    /// from zero. Wavelengths within [`GRID_SNAP_TOL_UM`] of a lattice point
    /// count as on it.
    pub fn spanning(lo: f64, hi: f64, step: f64) -> Result<Self, ResampleError> {
        if !step.is_finite() || step <= 0.0 {
            return Err(ResampleError::InvalidGrid {
                reason: format!("step must be positive and finite, got {step}"),
            });
        }
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            return Err(ResampleError::DegenerateOverlap {
                lo,
                hi,
                resolution: step,
            });
        }
        let k_lo = ((lo - GRID_SNAP_TOL_UM) / step).ceil() as i64;
        let k_hi = ((hi + GRID_SNAP_TOL_UM) / step).floor() as i64;
        if k_hi < k_lo + 1 {
            return Err(ResampleError::DegenerateOverlap {
                lo,
                hi,
                resolution: step,
            });
        }
        Ok(WavelengthGrid {
            start: k_lo as f64 * step,
            step,
            count: (k_hi - k_lo + 1) as usize,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Last grid point.
    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.point(k))
    }

    /// Index of the grid point within [`GRID_SNAP_TOL_UM`] of `wavelength`,
    /// if one exists.
    pub fn index_of(&self, wavelength: f64) -> Option<usize> {
        if !wavelength.is_finite() {
            return None;
        }
        let k = ((wavelength - self.start) / self.step).round();
        if k < 0.0 || k >= self.count as f64 {
            return None;
        }
        let k = k as usize;
        if (self.point(k) - wavelength).abs() <= GRID_SNAP_TOL_UM {
            Some(k)
        } else {
            None
        }
    }
}

/// Per-class mean reflectance on a shared uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedSpectrum {
    grid: WavelengthGrid,
    mean_reflectance: Vec<f64>,
    class_label: ClassLabel,
    n_spectra: usize,
}

impl AveragedSpectrum {
    pub fn new(
        grid: WavelengthGrid,
        mean_reflectance: Vec<f64>,
        class_label: ClassLabel,
        n_spectra: usize,
    ) -> Result<Self, ResampleError> {
        if mean_reflectance.len() != grid.count() {
            return Err(ResampleError::InvalidGrid {
                reason: format!(
                    "value count {} does not match grid count {}",
                    mean_reflectance.len(),
                    grid.count()
                ),
            });
        }
        if n_spectra == 0 {
            return Err(ResampleError::EmptyGroup);
        }
        if let Some(&bad) = mean_reflectance
            .iter()
            .find(|r| !r.is_finite() || **r < 0.0)
        {
            return Err(ResampleError::InvalidGrid {
                reason: format!("reflectance {bad} is negative or non-finite"),
            });
        }
        Ok(AveragedSpectrum {
            grid,
            mean_reflectance,
            class_label,
            n_spectra,
        })
    }

    pub fn grid(&self) -> &WavelengthGrid {
        &self.grid
    }

    pub fn mean_reflectance(&self) -> &[f64] {
        &self.mean_reflectance
    }

    pub fn class_label(&self) -> &ClassLabel {
        &self.class_label
    }

    pub fn n_spectra(&self) -> usize {
        self.n_spectra
    }

    /// Same grid, every value multiplied by `factor`. Handy for scale
    /// experiments; rejects negative factors.
    pub fn scaled(&self, factor: f64) -> Result<Self, ResampleError> {
        if factor <= 0.0 || !factor.is_finite() {
            return Err(ResampleError::InvalidGrid {
                reason: format!("scale factor must be positive and finite, got {factor}"),
            });
        }
        AveragedSpectrum::new(
            self.grid.clone(),
            self.mean_reflectance.iter().map(|r| r * factor).collect(),
            self.class_label.clone(),
            self.n_spectra,
        )
    }
}

/// Intersection of every spectrum's covered range, or `None` when empty.
pub fn wavelength_intersection<'a>(
    spectra: impl IntoIterator<Item = &'a Spectrum>,
) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut any = false;
    for s in spectra {
        let (s_lo, s_hi) = s.range();
        lo = lo.max(s_lo);
        hi = hi.min(s_hi);
        any = true;
    }
    (any && hi > lo).then_some((lo, hi))
}

/// Uniform grid with the given resolution spanning the intersection of all
/// spectra in both groups.
pub fn common_grid(
    group_a: &[Spectrum],
    group_b: &[Spectrum],
    resolution: f64,
) -> Result<WavelengthGrid, ResampleError> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(ResampleError::EmptyGroup);
    }
    let (lo, hi) = wavelength_intersection(group_a.iter().chain(group_b)).ok_or(
        ResampleError::DegenerateOverlap {
            lo: f64::NAN,
            hi: f64::NAN,
            resolution,
        },
    )?;
    WavelengthGrid::spanning(lo, hi, resolution)
}

/// Linear interpolation of `s` at every grid point.
///
/// Exact at the spectrum's own samples. Grid points may undershoot or
/// overshoot the spectrum's range by at most [`GRID_SNAP_TOL_UM`] (lattice
/// snapping can place the grid edge marginally outside the data); those are
/// clamped to the boundary sample.
pub fn resample_linear(s: &Spectrum, grid: &WavelengthGrid) -> Result<Vec<f64>, ResampleError> {
    let wl = s.wavelengths();
    let rf = s.reflectance();
    let last = wl.len() - 1;
    let (lo, hi) = s.range();

    let mut out = Vec::with_capacity(grid.count());
    let mut seg = 0usize;
    for x in grid.points() {
        if x < lo - GRID_SNAP_TOL_UM || x > hi + GRID_SNAP_TOL_UM {
            return Err(ResampleError::GridOutOfRange {
                wavelength: x,
                lo,
                hi,
            });
        }
        let x = x.clamp(lo, hi);
        while seg + 1 < last && wl[seg + 1] < x {
            seg += 1;
        }
        let (w0, w1) = (wl[seg], wl[seg + 1]);
        let (r0, r1) = (rf[seg], rf[seg + 1]);
        let t = (x - w0) / (w1 - w0);
        let value = (1.0 - t) * r0 + t * r1;
        // convex combination; clamp squashes any last-ulp overshoot
        out.push(value.clamp(r0.min(r1), r0.max(r1)));
    }
    Ok(out)
}

/// Unweighted arithmetic mean of the group's resampled spectra, in the
/// group's index order.
pub fn average_class(
    group: &[Spectrum],
    label: &ClassLabel,
    grid: &WavelengthGrid,
) -> Result<AveragedSpectrum, ResampleError> {
    if group.is_empty() {
        return Err(ResampleError::EmptyGroup);
    }
    let mut acc = vec![0.0f64; grid.count()];
    for s in group {
        let values = resample_linear(s, grid)?;
        for (a, v) in acc.iter_mut().zip(&values) {
            *a += v;
        }
    }
    let n = group.len() as f64;
    let means = acc.into_iter().map(|a| a / n).collect();
    AveragedSpectrum::new(grid.clone(), means, label.clone(), group.len())
}
