//! Dataset manifests and the loaded, class-grouped spectrum corpus.
//!
//! A manifest is a JSON file listing at least two classes, each with one or
//! more spectrum CSV files. Relative file paths are resolved against the
//! manifest's directory. The manifest label is authoritative: it overrides
//! any `# class:` comment found inside a member file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::spectrum::{parse_spectrum_file, ClassLabel, Spectrum, SpectrumError, WavelengthUnit};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest schema violation: {detail}")]
    SchemaViolation { detail: String },
    #[error("duplicate class label `{label}`")]
    DuplicateClassLabel { label: String },
    #[error("file listed twice: {path}")]
    DuplicateFile { path: PathBuf },
    #[error("class `{label}` lists no files")]
    EmptyClass { label: String },
    #[error("manifest must list at least 2 classes, found {found}")]
    TooFewClasses { found: usize },
    #[error("{path}: {source}")]
    FileParse {
        path: PathBuf,
        #[source]
        source: SpectrumError,
    },
    #[error("class `{label}`: member wavelength ranges have no common overlap")]
    DegenerateOverlap { label: String },
}

/// One class entry: a label and the resolved spectrum file paths.
#[derive(Debug, Clone)]
pub struct ManifestClass {
    pub label: ClassLabel,
    pub files: Vec<PathBuf>,
}

/// Parsed and validated dataset manifest.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    pub default_unit: WavelengthUnit,
    pub classes: Vec<ManifestClass>,
}

impl DatasetManifest {
    pub fn labels(&self) -> Vec<&ClassLabel> {
        self.classes.iter().map(|c| &c.label).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    default_unit: WavelengthUnit,
    classes: Vec<RawClass>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    label: String,
    files: Vec<String>,
}

/// Parse a manifest JSON file and resolve its file paths.
pub fn parse_manifest(path: &Path) -> Result<DatasetManifest, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawManifest =
        serde_json::from_str(&text).map_err(|e| DatasetError::SchemaViolation {
            detail: e.to_string(),
        })?;

    if raw.classes.len() < 2 {
        return Err(DatasetError::TooFewClasses {
            found: raw.classes.len(),
        });
    }

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut seen_labels = BTreeSet::new();
    let mut seen_files = BTreeSet::new();
    let mut classes = Vec::with_capacity(raw.classes.len());
    for class in raw.classes {
        let label = ClassLabel::new(class.label).map_err(|e| DatasetError::SchemaViolation {
            detail: e.to_string(),
        })?;
        if !seen_labels.insert(label.clone()) {
            return Err(DatasetError::DuplicateClassLabel {
                label: label.as_str().to_string(),
            });
        }
        if class.files.is_empty() {
            return Err(DatasetError::EmptyClass {
                label: label.as_str().to_string(),
            });
        }
        let mut files = Vec::with_capacity(class.files.len());
        for file in class.files {
            let resolved = base.join(&file);
            if !seen_files.insert(resolved.clone()) {
                return Err(DatasetError::DuplicateFile { path: resolved });
            }
            files.push(resolved);
        }
        classes.push(ManifestClass { label, files });
    }

    Ok(DatasetManifest {
        default_unit: raw.default_unit,
        classes,
    })
}

/// Spectra grouped under class labels. Immutable once constructed; groups
/// keep their members in sorted-file-path order so downstream averaging is
/// bitwise reproducible.
#[derive(Debug, Clone)]
pub struct ClassedDataset {
    groups: BTreeMap<ClassLabel, Vec<Spectrum>>,
}

impl ClassedDataset {
    /// Build from pre-parsed groups. Every group must be non-empty and have
    /// a non-degenerate common wavelength overlap.
    pub fn from_groups(
        groups: BTreeMap<ClassLabel, Vec<Spectrum>>,
    ) -> Result<Self, DatasetError> {
        for (label, members) in &groups {
            if members.is_empty() {
                return Err(DatasetError::EmptyClass {
                    label: label.as_str().to_string(),
                });
            }
            let lo = members
                .iter()
                .map(|s| s.range().0)
                .fold(f64::NEG_INFINITY, f64::max);
            let hi = members
                .iter()
                .map(|s| s.range().1)
                .fold(f64::INFINITY, f64::min);
            if hi - lo <= 0.0 {
                return Err(DatasetError::DegenerateOverlap {
                    label: label.as_str().to_string(),
                });
            }
        }
        Ok(ClassedDataset { groups })
    }

    pub fn group(&self, label: &ClassLabel) -> Option<&[Spectrum]> {
        self.groups.get(label).map(Vec::as_slice)
    }

    pub fn groups(&self) -> impl Iterator<Item = (&ClassLabel, &[Spectrum])> {
        self.groups.iter().map(|(l, g)| (l, g.as_slice()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &ClassLabel> {
        self.groups.keys()
    }

    pub fn class_count(&self) -> usize {
        self.groups.len()
    }

    pub fn spectrum_count(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    /// All unordered label pairs, lexicographically sorted.
    pub fn pairs(&self) -> Vec<(ClassLabel, ClassLabel)> {
        let labels: Vec<&ClassLabel> = self.groups.keys().collect();
        let mut out = Vec::new();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                out.push((labels[i].clone(), labels[j].clone()));
            }
        }
        out
    }
}

/// Result of loading a manifest: the dataset plus non-fatal diagnostics.
#[derive(Debug)]
pub struct LoadedDataset {
    pub dataset: ClassedDataset,
    pub warnings: Vec<String>,
}

/// Parse every file listed in the manifest and group the spectra by class.
///
/// Files within a class are parsed in sorted-path order, which fixes the
/// summation order used later by class averaging.
pub fn load_dataset(manifest: &DatasetManifest) -> Result<LoadedDataset, DatasetError> {
    let mut groups = BTreeMap::new();
    for class in &manifest.classes {
        let mut paths = class.files.clone();
        paths.sort();
        let mut members = Vec::with_capacity(paths.len());
        for path in &paths {
            let mut spectrum =
                parse_spectrum_file(path, manifest.default_unit).map_err(|source| {
                    DatasetError::FileParse {
                        path: path.clone(),
                        source,
                    }
                })?;
            spectrum.set_class_label(class.label.clone());
            members.push(spectrum);
        }
        groups.insert(class.label.clone(), members);
    }
    let dataset = ClassedDataset::from_groups(groups)?;

    // Likely-mixed-scale heuristic: one group looks like percent while
    // another looks like a 0-1 fraction.
    let mut warnings = Vec::new();
    let maxes: Vec<(&ClassLabel, f64)> = dataset
        .groups()
        .map(|(label, members)| {
            let max = members
                .iter()
                .map(Spectrum::max_reflectance)
                .fold(0.0, f64::max);
            (label, max)
        })
        .collect();
    let any_high = maxes.iter().filter(|(_, m)| *m > 2.0).collect::<Vec<_>>();
    let any_low = maxes.iter().filter(|(_, m)| *m < 1.0).collect::<Vec<_>>();
    if !any_high.is_empty() && !any_low.is_empty() {
        warnings.push(format!(
            "possible mixed reflectance scales: max {} = {} but max {} = {}",
            any_high[0].0, any_high[0].1, any_low[0].0, any_low[0].1
        ));
    }

    Ok(LoadedDataset { dataset, warnings })
}
