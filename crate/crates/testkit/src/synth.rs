//! Synthetic spectra and datasets for tests and benches.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bandscan::{
    AveragedSpectrum, ClassLabel, Spectrum, SpectrumMetadata, WavelengthGrid, WavelengthUnit,
};

/// Deterministic RNG for reproducible test instances.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label(name: &str) -> ClassLabel {
    ClassLabel::new(name).expect("non-empty label")
}

fn metadata(sample_id: &str, class: &str) -> SpectrumMetadata {
    SpectrumMetadata::new(sample_id, label(class)).expect("valid metadata")
}

/// Spectrum sampling `f` at `n` evenly spaced wavelengths across `[lo, hi]`.
pub fn spectrum_from_fn(
    lo: f64,
    hi: f64,
    n: usize,
    class: &str,
    sample_id: &str,
    mut f: impl FnMut(f64) -> f64,
) -> Spectrum {
    assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    let wavelengths: Vec<f64> = (0..n).map(|k| lo + k as f64 * step).collect();
    let reflectance: Vec<f64> = wavelengths.iter().map(|&w| f(w)).collect();
    Spectrum::new(wavelengths, reflectance, metadata(sample_id, class)).expect("valid spectrum")
}

pub fn constant_spectrum(lo: f64, hi: f64, n: usize, level: f64, class: &str) -> Spectrum {
    spectrum_from_fn(lo, hi, n, class, &format!("const-{level}"), |_| level)
}

/// Flat curve at `base` with a Gaussian dip of the given depth at `center`.
#[allow(clippy::too_many_arguments)]
pub fn gaussian_dip_spectrum(
    lo: f64,
    hi: f64,
    n: usize,
    base: f64,
    depth: f64,
    center: f64,
    sigma: f64,
    class: &str,
) -> Spectrum {
    spectrum_from_fn(lo, hi, n, class, "dip", |w| {
        base - depth * (-((w - center) * (w - center)) / (2.0 * sigma * sigma)).exp()
    })
}

/// Random piecewise-linear spectrum with values in `[r_min, r_max]`.
pub fn random_spectrum(
    rng: &mut ChaCha8Rng,
    lo: f64,
    hi: f64,
    n: usize,
    r_min: f64,
    r_max: f64,
    class: &str,
) -> Spectrum {
    let id = format!("rand-{}", rng.random_range(0..u32::MAX));
    spectrum_from_fn(lo, hi, n, class, &id, |_| rng.random_range(r_min..=r_max))
}

/// Averaged spectrum sampling `f` on `grid`.
pub fn averaged_from_fn(
    grid: &WavelengthGrid,
    class: &str,
    f: impl FnMut(f64) -> f64,
) -> AveragedSpectrum {
    let values: Vec<f64> = grid.points().map(f).collect();
    AveragedSpectrum::new(grid.clone(), values, label(class), 1).expect("valid averaged spectrum")
}

/// Random averaged spectrum with values in `[r_min, r_max]`.
pub fn random_averaged(
    rng: &mut ChaCha8Rng,
    grid: &WavelengthGrid,
    r_min: f64,
    r_max: f64,
    class: &str,
) -> AveragedSpectrum {
    averaged_from_fn(grid, class, |_| rng.random_range(r_min..=r_max))
}

/// Write a spectrum CSV with raw text formatting, independent of the
/// library's own serializer.
pub fn write_spectrum_csv(
    dir: &Path,
    name: &str,
    unit: WavelengthUnit,
    points: &[(f64, f64)],
) -> PathBuf {
    let header = match unit {
        WavelengthUnit::Micrometer => "wavelength_um,reflectance",
        WavelengthUnit::Nanometer => "wavelength_nm,reflectance",
    };
    let mut text = String::from(header);
    text.push('\n');
    for (w, r) in points {
        text.push_str(&format!("{w},{r}\n"));
    }
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write spectrum csv");
    path
}

/// Write a manifest JSON listing the given classes and (relative) file names.
pub fn write_manifest(dir: &Path, default_unit: &str, classes: &[(&str, Vec<String>)]) -> PathBuf {
    let classes_json: Vec<String> = classes
        .iter()
        .map(|(class_label, files)| {
            let files_json: Vec<String> = files.iter().map(|f| format!("\"{f}\"")).collect();
            format!(
                "{{\"label\":\"{class_label}\",\"files\":[{}]}}",
                files_json.join(",")
            )
        })
        .collect();
    let text = format!(
        "{{\"default_unit\":\"{default_unit}\",\"classes\":[{}]}}",
        classes_json.join(",")
    );
    let path = dir.join("manifest.json");
    std::fs::write(&path, text).expect("write manifest");
    path
}

/// Full synthetic two-class dataset on disk: a flat class and a dipped class
/// (Gaussian dip at `center`), with mild per-file level jitter. Returns the
/// manifest path.
pub fn write_dip_dataset(
    dir: &Path,
    files_per_class: usize,
    center: f64,
    depth: f64,
    sigma: f64,
    seed: u64,
) -> PathBuf {
    let mut rng = rng(seed);
    let n = 600;
    let (lo, hi) = (1.5, 3.5);
    let mut flat_files = Vec::new();
    let mut dip_files = Vec::new();
    for i in 0..files_per_class {
        let level = 1.0 + rng.random_range(-0.02..=0.02);
        let flat = spectrum_from_fn(lo, hi, n, "flat", &format!("flat-{i}"), |_| level);
        let name = format!("flat_{i:02}.csv");
        let points: Vec<(f64, f64)> = flat
            .wavelengths()
            .iter()
            .copied()
            .zip(flat.reflectance().iter().copied())
            .collect();
        write_spectrum_csv(dir, &name, WavelengthUnit::Micrometer, &points);
        flat_files.push(name);

        let level = 1.0 + rng.random_range(-0.02..=0.02);
        let dip = gaussian_dip_spectrum(lo, hi, n, level, depth, center, sigma, "dip");
        let name = format!("dip_{i:02}.csv");
        let points: Vec<(f64, f64)> = dip
            .wavelengths()
            .iter()
            .copied()
            .zip(dip.reflectance().iter().copied())
            .collect();
        write_spectrum_csv(dir, &name, WavelengthUnit::Micrometer, &points);
        dip_files.push(name);
    }
    write_manifest(
        dir,
        "micrometer",
        &[("flat", flat_files), ("dip", dip_files)],
    )
}
