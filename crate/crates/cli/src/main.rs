//! `bandscan` command line: validate spectrum datasets, list class pairs,
//! and run the full waveband analysis with deterministic file outputs.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (parsing/validation),
//! 3 analysis error (degenerate overlap, out-of-range windows, output I/O).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use bandscan::{
    analyze_pair, export_band_report_json, export_heatmap_csv, export_heatmap_pgm, format_sig6,
    load_dataset, parse_manifest, parse_spectrum_file, AnalysisError, AnalysisOptions, ClassLabel,
    DatasetManifest, HeatmapScale, MIN_BAND_WIDTH_UM,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_ANALYSIS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bandscan",
    about = "Find the wavebands that best separate classes of reflectance spectra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a dataset manifest and report per-file diagnostics.
    Validate {
        /// Manifest JSON path
        manifest: PathBuf,
    },
    /// Scan all candidate wavebands for one class pair and write
    /// heatmap.csv, heatmap.pgm, and report.json.
    Analyze {
        /// Manifest JSON path
        manifest: PathBuf,
        /// Class pair as LABEL_A:LABEL_B
        #[arg(long)]
        pair: String,
        /// Scan window as LO:HI in μm (default: common data range clipped
        /// to 1.6-18 μm)
        #[arg(long)]
        range: Option<String>,
        /// Band start/width granularity, μm
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Widest band to scan, μm (default: the whole window)
        #[arg(long)]
        max_width: Option<f64>,
        /// Internal integration grid spacing, μm
        #[arg(long, default_value_t = 0.01)]
        resolution: f64,
        /// Fraction of the grid maximum defining selective regions
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        /// How many top bands to report
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// Output directory for the three result files
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// List the class pairs available in a manifest.
    Pairs {
        /// Manifest JSON path
        manifest: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    fn analysis(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ANALYSIS,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { manifest } => validate(&manifest),
        Command::Pairs { manifest } => pairs(&manifest),
        Command::Analyze {
            manifest,
            pair,
            range,
            step,
            max_width,
            resolution,
            threshold,
            top,
            out_dir,
        } => analyze(
            &manifest, &pair, range, step, max_width, resolution, threshold, top, &out_dir,
        ),
    }
}

fn read_manifest(path: &Path) -> Result<DatasetManifest, Failure> {
    parse_manifest(path).map_err(|e| Failure::data(e.to_string()))
}

fn validate(manifest_path: &Path) -> Result<(), Failure> {
    let manifest = read_manifest(manifest_path)?;
    let mut failures = 0usize;
    for class in &manifest.classes {
        let mut paths = class.files.clone();
        paths.sort();
        for path in paths {
            match parse_spectrum_file(&path, manifest.default_unit) {
                Ok(s) => {
                    let (lo, hi) = s.range();
                    println!(
                        "ok   {} ({} points, {}-{} um, class {})",
                        path.display(),
                        s.len(),
                        format_sig6(lo),
                        format_sig6(hi),
                        class.label
                    );
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("FAIL {}: {e}", path.display());
                }
            }
        }
    }
    if failures > 0 {
        return Err(Failure::data(format!("{failures} file(s) failed to parse")));
    }
    let loaded = load_dataset(&manifest).map_err(|e| Failure::data(e.to_string()))?;
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }
    println!(
        "dataset ok: {} classes, {} spectra",
        loaded.dataset.class_count(),
        loaded.dataset.spectrum_count()
    );
    Ok(())
}

fn pairs(manifest_path: &Path) -> Result<(), Failure> {
    let manifest = read_manifest(manifest_path)?;
    let mut labels: Vec<&ClassLabel> = manifest.labels();
    labels.sort();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            println!("{}:{}", labels[i], labels[j]);
        }
    }
    Ok(())
}

fn parse_pair(raw: &str) -> Result<(ClassLabel, ClassLabel), Failure> {
    let (a, b) = raw
        .split_once(':')
        .ok_or_else(|| Failure::usage(format!("--pair must be LABEL_A:LABEL_B, got `{raw}`")))?;
    if a.is_empty() || b.is_empty() {
        return Err(Failure::usage(format!(
            "--pair must name two classes, got `{raw}`"
        )));
    }
    if a == b {
        return Err(Failure::usage(format!(
            "--pair must name two distinct classes, got `{raw}`"
        )));
    }
    Ok((
        ClassLabel::new(a).expect("non-empty"),
        ClassLabel::new(b).expect("non-empty"),
    ))
}

fn parse_range(raw: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::usage(format!("--range must be LO:HI in um with LO < HI, got `{raw}`"));
    let (lo, hi) = raw.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || lo >= hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    manifest_path: &Path,
    pair: &str,
    range: Option<String>,
    step: f64,
    max_width: Option<f64>,
    resolution: f64,
    threshold: f64,
    top: usize,
    out_dir: &Path,
) -> Result<(), Failure> {
    let (label_a, label_b) = parse_pair(pair)?;
    let window = range.as_deref().map(parse_range).transpose()?;

    if !resolution.is_finite() || resolution <= 0.0 {
        return Err(Failure::usage(format!(
            "--resolution must be positive, got {resolution}"
        )));
    }
    if !step.is_finite() || step < MIN_BAND_WIDTH_UM {
        return Err(Failure::usage(format!(
            "--step must be at least {MIN_BAND_WIDTH_UM} um, got {step}"
        )));
    }
    let stride = (step / resolution).round();
    if stride < 1.0 || (stride * resolution - step).abs() > 1e-9 {
        return Err(Failure::usage(format!(
            "--step {step} must be an integer multiple of --resolution {resolution}"
        )));
    }
    if let Some(width) = max_width {
        if !width.is_finite() || width < step {
            return Err(Failure::usage(format!(
                "--max-width must be at least the scan step, got {width}"
            )));
        }
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Failure::usage(format!(
            "--threshold must be in (0, 1], got {threshold}"
        )));
    }
    if top == 0 {
        return Err(Failure::usage("--top must be at least 1"));
    }

    let manifest = read_manifest(manifest_path)?;
    let loaded = load_dataset(&manifest).map_err(|e| Failure::data(e.to_string()))?;
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }

    let options = AnalysisOptions {
        scan_step: step,
        resolution,
        window,
        max_width,
        region_threshold_fraction: threshold,
        top_k: top,
    };
    let analysis =
        analyze_pair(&loaded.dataset, &label_a, &label_b, &options).map_err(|e| match e {
            AnalysisError::UnknownLabel { .. } => Failure::data(e.to_string()),
            _ => Failure::analysis(e.to_string()),
        })?;

    std::fs::create_dir_all(out_dir).map_err(|e| {
        Failure::analysis(format!("cannot create {}: {e}", out_dir.display()))
    })?;
    export_heatmap_csv(&analysis.grid, &out_dir.join("heatmap.csv"))
        .map_err(|e| Failure::analysis(e.to_string()))?;
    export_heatmap_pgm(
        &analysis.grid,
        HeatmapScale::Absolute,
        &out_dir.join("heatmap.pgm"),
    )
    .map_err(|e| Failure::analysis(e.to_string()))?;
    export_band_report_json(&analysis.report, &out_dir.join("report.json"))
        .map_err(|e| Failure::analysis(e.to_string()))?;

    let best = &analysis.report.best[0];
    println!(
        "best band {}-{} um (width {} um), coefficient {}",
        format_sig6(best.band.start()),
        format_sig6(best.band.end()),
        format_sig6(best.band.width()),
        format_sig6(best.coefficient)
    );
    Ok(())
}
