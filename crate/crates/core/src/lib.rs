//! Waveband selection for labeled reflectance spectra.
//!
//! The pipeline: ingest two-column spectrum CSVs grouped by a JSON manifest
//! ([`spectrum`], [`dataset`]), place each class pair on one uniform
//! wavelength grid and average per class ([`resample`]), exhaustively score
//! every candidate band `[start, start + width]` with the normalized
//! contrast `|AUC1 - AUC2| / (AUC1 + AUC2)` of the two class areas
//! ([`bandsearch`]), then export the coefficient grid as heatmap CSV / PGM
//! and the ranked optimal bands as JSON ([`report`]). [`pipeline`] wires the
//! stages together for one pair.
//!
//! Everything works in micrometers internally; nanometer input is converted
//! at the file boundary. All outputs are byte-deterministic, and the band
//! scan is data-parallel under the default `parallel` feature with output
//! identical to the serial path.

pub mod bandsearch;
pub mod dataset;
pub mod pipeline;
pub mod report;
pub mod resample;
mod sigfig;
pub mod spectrum;

pub use bandsearch::{
    build_report, cumulative_integral, discriminative_coef, find_optimal_bands,
    find_selective_regions, scan_grid, scan_grid_seq, Band, BandReport, BandScanConfig,
    BandSearchError, CoefficientGrid, CumulativeIntegral, RankedBand, SelectiveRegion,
    MIN_BAND_WIDTH_UM,
};
#[cfg(feature = "parallel")]
pub use bandsearch::scan_grid_par;
pub use dataset::{
    load_dataset, parse_manifest, ClassedDataset, DatasetError, DatasetManifest, LoadedDataset,
    ManifestClass,
};
pub use pipeline::{analyze_pair, AnalysisError, AnalysisOptions, PairAnalysis};
pub use report::{
    export_band_report_json, export_heatmap_csv, export_heatmap_pgm, format_sig6, HeatmapScale,
    ReportError,
};
pub use resample::{
    average_class, common_grid, resample_linear, wavelength_intersection, AveragedSpectrum,
    ResampleError, WavelengthGrid,
};
pub use spectrum::{
    parse_spectrum_file, parse_spectrum_str, ClassLabel, Spectrum, SpectrumError,
    SpectrumMetadata, WavelengthUnit,
};
