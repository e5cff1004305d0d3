//! Reflectance spectrum type and strict CSV ingestion.
//!
//! A spectrum file is two-column CSV with a mandatory header
//! (`wavelength_um,reflectance`, `wavelength_nm,reflectance`, or bare
//! `wavelength,reflectance` which falls back to the caller's default unit).
//! `#`-prefixed lines are comments; `# key: value` comments carry optional
//! sample metadata (`sample_id`, `class`, `disease`, `stage`, `subregion`).
//! All wavelengths are converted to micrometers at the boundary; everything
//! downstream works in μm only.

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Sanity bounds for ingested wavelengths, μm.
pub const WAVELENGTH_MIN_UM: f64 = 0.1;
pub const WAVELENGTH_MAX_UM: f64 = 100.0;

/// Reflectance values in `[NEGATIVE_CLAMP_FLOOR, 0)` are treated as baseline
/// noise and clamped to zero; anything below is rejected as corrupt.
pub const NEGATIVE_CLAMP_FLOOR: f64 = -1e-6;

/// Wavelength unit accepted at the file boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WavelengthUnit {
    Micrometer,
    Nanometer,
}

impl WavelengthUnit {
    fn to_um(self, value: f64) -> f64 {
        match self {
            WavelengthUnit::Micrometer => value,
            WavelengthUnit::Nanometer => value / 1000.0,
        }
    }
}

/// Name of one class population (e.g. `healthy`, `infected`).
/// Case-sensitive, never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(String);

impl ClassLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, SpectrumError> {
        let name = name.into();
        if name.is_empty() {
            return Err(SpectrumError::EmptyClassLabel);
        }
        Ok(ClassLabel(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Provenance of one measured spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumMetadata {
    pub sample_id: String,
    pub class_label: ClassLabel,
    pub disease: String,
    pub stage: Option<String>,
    pub subregion_id: Option<String>,
}

impl SpectrumMetadata {
    pub fn new(sample_id: impl Into<String>, class_label: ClassLabel) -> Result<Self, SpectrumError> {
        let sample_id = sample_id.into();
        if sample_id.is_empty() {
            return Err(SpectrumError::EmptySampleId);
        }
        Ok(SpectrumMetadata {
            sample_id,
            class_label,
            disease: String::new(),
            stage: None,
            subregion_id: None,
        })
    }
}

/// One measured reflectance curve on its native wavelength sampling.
///
/// Invariants, enforced at construction and by every parser:
/// wavelengths strictly increasing, within `[0.1, 100]` μm, at least two
/// points, reflectance nonnegative and of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    wavelengths: Vec<f64>,
    reflectance: Vec<f64>,
    metadata: SpectrumMetadata,
}

impl Spectrum {
    pub fn new(
        wavelengths: Vec<f64>,
        reflectance: Vec<f64>,
        metadata: SpectrumMetadata,
    ) -> Result<Self, SpectrumError> {
        if wavelengths.len() != reflectance.len() {
            return Err(SpectrumError::InvalidSpectrum {
                reason: format!(
                    "wavelength/reflectance length mismatch ({} vs {})",
                    wavelengths.len(),
                    reflectance.len()
                ),
            });
        }
        if wavelengths.len() < 2 {
            return Err(SpectrumError::TooFewPoints {
                found: wavelengths.len(),
            });
        }
        for (i, &w) in wavelengths.iter().enumerate() {
            if !w.is_finite() || !(WAVELENGTH_MIN_UM..=WAVELENGTH_MAX_UM).contains(&w) {
                return Err(SpectrumError::InvalidSpectrum {
                    reason: format!("wavelength {w} um at index {i} outside [{WAVELENGTH_MIN_UM}, {WAVELENGTH_MAX_UM}]"),
                });
            }
            if i > 0 && w <= wavelengths[i - 1] {
                return Err(SpectrumError::InvalidSpectrum {
                    reason: format!("wavelengths not strictly increasing at index {i}"),
                });
            }
        }
        if let Some((i, &r)) = reflectance
            .iter()
            .enumerate()
            .find(|(_, r)| !r.is_finite() || **r < 0.0)
        {
            return Err(SpectrumError::InvalidSpectrum {
                reason: format!("reflectance {r} at index {i} is negative or non-finite"),
            });
        }
        Ok(Spectrum {
            wavelengths,
            reflectance,
            metadata,
        })
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn reflectance(&self) -> &[f64] {
        &self.reflectance
    }

    pub fn metadata(&self) -> &SpectrumMetadata {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.wavelengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths.is_empty()
    }

    /// Covered wavelength range `(first, last)`, μm.
    pub fn range(&self) -> (f64, f64) {
        (self.wavelengths[0], *self.wavelengths.last().unwrap())
    }

    pub fn max_reflectance(&self) -> f64 {
        self.reflectance.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn set_class_label(&mut self, label: ClassLabel) {
        self.metadata.class_label = label;
    }

    /// Serialize back to spectrum CSV in μm. Values are written with the
    /// shortest decimal form that re-parses to the identical `f64`, so a
    /// write/parse round trip is lossless.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let meta = &self.metadata;
        out.push_str(&format!("# sample_id: {}\n", meta.sample_id));
        out.push_str(&format!("# class: {}\n", meta.class_label));
        if !meta.disease.is_empty() {
            out.push_str(&format!("# disease: {}\n", meta.disease));
        }
        if let Some(stage) = &meta.stage {
            out.push_str(&format!("# stage: {stage}\n"));
        }
        if let Some(sub) = &meta.subregion_id {
            out.push_str(&format!("# subregion: {sub}\n"));
        }
        out.push_str("wavelength_um,reflectance\n");
        for (w, r) in self.wavelengths.iter().zip(&self.reflectance) {
            out.push_str(&format!("{w},{r}\n"));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), SpectrumError> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| SpectrumError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Errors raised while parsing or constructing spectra.
#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("file is not valid UTF-8")]
    NotUtf8,
    #[error("no header row found (expected `wavelength_um,reflectance`)")]
    MissingHeader,
    #[error("line {line}: bad header `{found}` (expected `wavelength[_um|_nm],reflectance`)")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: malformed row `{row}`: {reason}")]
    MalformedRow {
        line: usize,
        row: String,
        reason: String,
    },
    #[error("line {line}: wavelengths not strictly increasing ({previous} um then {value} um)")]
    NonMonotonicWavelengths {
        line: usize,
        previous: f64,
        value: f64,
    },
    #[error("line {line}: negative reflectance {value} (below the {NEGATIVE_CLAMP_FLOOR} noise floor)")]
    NegativeReflectance { line: usize, value: f64 },
    #[error("line {line}: wavelength {value} um outside [{WAVELENGTH_MIN_UM}, {WAVELENGTH_MAX_UM}] um")]
    WavelengthOutOfRange { line: usize, value: f64 },
    #[error("too few data points: need at least 2, found {found}")]
    TooFewPoints { found: usize },
    #[error("class label must not be empty")]
    EmptyClassLabel,
    #[error("sample id must not be empty")]
    EmptySampleId,
    #[error("invalid spectrum: {reason}")]
    InvalidSpectrum { reason: String },
}

#[derive(Default)]
struct MetadataDraft {
    sample_id: Option<String>,
    class: Option<String>,
    disease: Option<String>,
    stage: Option<String>,
    subregion: Option<String>,
}

impl MetadataDraft {
    fn absorb(&mut self, comment: &str) {
        let Some((key, value)) = comment.split_once(':') else {
            return;
        };
        let value = value.trim();
        if value.is_empty() {
            return;
        }
        let slot = match key.trim() {
            "sample_id" => &mut self.sample_id,
            "class" => &mut self.class,
            "disease" => &mut self.disease,
            "stage" => &mut self.stage,
            "subregion" => &mut self.subregion,
            _ => return,
        };
        *slot = Some(value.to_string());
    }

    fn build(self, fallback_sample_id: &str) -> Result<SpectrumMetadata, SpectrumError> {
        let sample_id = self
            .sample_id
            .unwrap_or_else(|| fallback_sample_id.to_string());
        let class = ClassLabel::new(self.class.unwrap_or_else(|| "unlabeled".to_string()))?;
        let mut meta = SpectrumMetadata::new(sample_id, class)?;
        meta.disease = self.disease.unwrap_or_default();
        meta.stage = self.stage;
        meta.subregion_id = self.subregion;
        Ok(meta)
    }
}

fn parse_header(
    line: &str,
    line_no: usize,
    default_unit: WavelengthUnit,
) -> Result<WavelengthUnit, SpectrumError> {
    let bad = || SpectrumError::BadHeader {
        line: line_no,
        found: line.to_string(),
    };
    let mut fields = line.split(',');
    let wavelength = fields.next().ok_or_else(bad)?.trim();
    let reflectance = fields.next().ok_or_else(bad)?.trim();
    if fields.next().is_some() || reflectance != "reflectance" {
        return Err(bad());
    }
    match wavelength {
        "wavelength_um" => Ok(WavelengthUnit::Micrometer),
        "wavelength_nm" => Ok(WavelengthUnit::Nanometer),
        "wavelength" => Ok(default_unit),
        _ => Err(bad()),
    }
}

fn parse_cell(raw: &str, line_no: usize, row: &str) -> Result<f64, SpectrumError> {
    let malformed = |reason: String| SpectrumError::MalformedRow {
        line: line_no,
        row: row.to_string(),
        reason,
    };
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(malformed("empty cell".to_string()));
    }
    let value: f64 = trimmed
        .parse()
        .map_err(|_| malformed(format!("non-numeric cell `{trimmed}`")))?;
    if !value.is_finite() {
        return Err(malformed(format!("non-finite cell `{trimmed}`")));
    }
    Ok(value)
}

/// Parse spectrum CSV from a string. `default_unit` applies only when the
/// header names the wavelength column without a unit suffix.
pub fn parse_spectrum_str(
    text: &str,
    default_unit: WavelengthUnit,
    fallback_sample_id: &str,
) -> Result<Spectrum, SpectrumError> {
    let mut unit: Option<WavelengthUnit> = None;
    let mut wavelengths: Vec<f64> = Vec::new();
    let mut reflectance: Vec<f64> = Vec::new();
    let mut draft = MetadataDraft::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = if line_no == 1 {
            raw.trim_start_matches('\u{feff}')
        } else {
            raw
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            draft.absorb(comment);
            continue;
        }
        let Some(active_unit) = unit else {
            unit = Some(parse_header(trimmed, line_no, default_unit)?);
            continue;
        };

        let cells: Vec<&str> = trimmed.split(',').collect();
        if cells.len() != 2 {
            return Err(SpectrumError::MalformedRow {
                line: line_no,
                row: trimmed.to_string(),
                reason: format!("expected 2 columns, found {}", cells.len()),
            });
        }
        let wavelength = active_unit.to_um(parse_cell(cells[0], line_no, trimmed)?);
        let mut value = parse_cell(cells[1], line_no, trimmed)?;

        if !(WAVELENGTH_MIN_UM..=WAVELENGTH_MAX_UM).contains(&wavelength) {
            return Err(SpectrumError::WavelengthOutOfRange {
                line: line_no,
                value: wavelength,
            });
        }
        if let Some(&previous) = wavelengths.last() {
            if wavelength <= previous {
                return Err(SpectrumError::NonMonotonicWavelengths {
                    line: line_no,
                    previous,
                    value: wavelength,
                });
            }
        }
        if value < NEGATIVE_CLAMP_FLOOR {
            return Err(SpectrumError::NegativeReflectance {
                line: line_no,
                value,
            });
        }
        if value < 0.0 {
            value = 0.0;
        }
        wavelengths.push(wavelength);
        reflectance.push(value);
    }

    if unit.is_none() {
        return Err(SpectrumError::MissingHeader);
    }
    if wavelengths.len() < 2 {
        return Err(SpectrumError::TooFewPoints {
            found: wavelengths.len(),
        });
    }
    Spectrum::new(wavelengths, reflectance, draft.build(fallback_sample_id)?)
}

/// Parse one spectrum file. See [`parse_spectrum_str`] for format rules.
pub fn parse_spectrum_file(
    path: &Path,
    default_unit: WavelengthUnit,
) -> Result<Spectrum, SpectrumError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| SpectrumError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| SpectrumError::NotUtf8)?;
    let fallback = path
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .unwrap_or("sample");
    parse_spectrum_str(text, default_unit, fallback)
}
