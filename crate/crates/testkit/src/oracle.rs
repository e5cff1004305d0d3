//! Brute-force reference scanner.
//!
//! Everything here is computed from raw slices with per-band direct
//! trapezoid summation: no prefix sums, no types or code from the library
//! under test. Deliberately slow and obvious.

/// Trapezoid area of `values` between sample indices `i` and `j` on a
/// uniform grid with spacing `step`, summed term by term.
pub fn direct_band_area(values: &[f64], step: f64, i: usize, j: usize) -> f64 {
    assert!(i <= j && j < values.len());
    let mut area = 0.0;
    for k in i..j {
        area += step * (values[k] + values[k + 1]) / 2.0;
    }
    area
}

/// Brute-force coefficient grid. Mirrors the scan contract: starts anchor at
/// `range_lo` in steps of `scan_step`, widths run from `scan_step` to
/// `max_width`, and a cell is present iff the band fits below `range_hi`.
pub struct OracleGrid {
    pub starts: Vec<f64>,
    pub widths: Vec<f64>,
    /// `cells[start_idx][width_idx]`, `None` where the band does not fit.
    pub cells: Vec<Vec<Option<f64>>>,
}

/// Scan every candidate band by direct integration.
///
/// `grid_start`/`grid_step` describe the uniform sampling of `r1`/`r2`;
/// `scan_step` must be an integer multiple of `grid_step` and `range_lo`
/// must lie on the sampling lattice.
#[allow(clippy::too_many_arguments)]
pub fn brute_force_scan(
    grid_start: f64,
    grid_step: f64,
    r1: &[f64],
    r2: &[f64],
    range_lo: f64,
    range_hi: f64,
    scan_step: f64,
    max_width: f64,
) -> OracleGrid {
    assert_eq!(r1.len(), r2.len());
    let stride = (scan_step / grid_step).round();
    assert!(
        (stride * grid_step - scan_step).abs() <= 1e-9,
        "scan step off the sampling lattice"
    );
    let stride = stride as usize;
    let origin = ((range_lo - grid_start) / grid_step).round();
    assert!(
        origin >= 0.0 && (grid_start + origin * grid_step - range_lo).abs() <= 1e-9,
        "range_lo off the sampling lattice"
    );
    let origin = origin as usize;

    let total_steps = ((range_hi - range_lo + 1e-9) / scan_step).floor() as usize;
    let n_widths = total_steps.min(((max_width + 1e-9) / scan_step).floor() as usize);

    let starts: Vec<f64> = (0..total_steps)
        .map(|k| range_lo + k as f64 * scan_step)
        .collect();
    let widths: Vec<f64> = (1..=n_widths).map(|m| m as f64 * scan_step).collect();

    let mut cells = Vec::with_capacity(starts.len());
    for k in 0..starts.len() {
        let mut row = Vec::with_capacity(widths.len());
        for m in 1..=n_widths {
            if k + m > total_steps {
                row.push(None);
                continue;
            }
            let i = origin + k * stride;
            let j = origin + (k + m) * stride;
            let area1 = direct_band_area(r1, grid_step, i, j);
            let area2 = direct_band_area(r2, grid_step, i, j);
            let sum = area1 + area2;
            let coef = if sum == 0.0 {
                0.0
            } else {
                (area1 - area2).abs() / sum
            };
            row.push(Some(coef));
        }
        cells.push(row);
    }

    OracleGrid {
        starts,
        widths,
        cells,
    }
}

impl OracleGrid {
    pub fn present_count(&self) -> usize {
        self.cells.iter().flatten().flatten().count()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.cells
            .iter()
            .flatten()
            .flatten()
            .copied()
            .reduce(f64::max)
    }

    /// Argmax cell under the ranking "highest coefficient, then narrowest
    /// width, then smallest start", applied by explicit enumeration.
    pub fn best_cell(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        // iterate widths outer-to-inner so earlier candidates win ties
        for wi in 0..self.widths.len() {
            for si in 0..self.starts.len() {
                let Some(v) = self.cells[si][wi] else {
                    continue;
                };
                match best {
                    Some((_, _, bv)) if bv >= v => {}
                    _ => best = Some((si, wi, v)),
                }
            }
        }
        best
    }

    /// Top-`k` cells under the same ranking (full ordering, not just the
    /// argmax).
    pub fn best_cells(&self, k: usize) -> Vec<(usize, usize, f64)> {
        let mut all: Vec<(usize, usize, f64)> = Vec::new();
        for si in 0..self.starts.len() {
            for wi in 0..self.widths.len() {
                if let Some(v) = self.cells[si][wi] {
                    all.push((si, wi, v));
                }
            }
        }
        all.sort_by(|a, b| {
            b.2.partial_cmp(&a.2)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.0.cmp(&b.0))
        });
        all.truncate(k);
        all
    }

    /// Cells at or above `fraction` of the grid maximum.
    pub fn hot_cells(&self, fraction: f64) -> Vec<(usize, usize)> {
        let Some(max) = self.max_value() else {
            return Vec::new();
        };
        if max == 0.0 {
            return Vec::new();
        }
        let threshold = fraction * max;
        let mut out = Vec::new();
        for si in 0..self.starts.len() {
            for wi in 0..self.widths.len() {
                if let Some(v) = self.cells[si][wi] {
                    if v >= threshold {
                        out.push((si, wi));
                    }
                }
            }
        }
        out
    }
}
