//! Acceptance suite. One test per criterion; each prints a PASS/SKIP line
//! (run with `-- --nocapture` to see them).
//!
//! The dataset-contingent reproduction (`table1_reproduction`) runs only
//! when the reference spectra are mounted under `data/` at the workspace
//! root; it reports SKIP otherwise. Everything else is unconditional.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use approx::assert_relative_eq;
use rand::Rng;

use bandscan::{
    analyze_pair, cumulative_integral, find_optimal_bands, find_selective_regions, load_dataset,
    parse_manifest, parse_spectrum_file, scan_grid, scan_grid_seq, AnalysisOptions,
    AveragedSpectrum, Band, BandScanConfig, ClassLabel, CoefficientGrid, DatasetError,
    SpectrumError, WavelengthGrid, WavelengthUnit,
};
use bandscan_testkit::{oracle, synth};

fn pass(name: &str, detail: impl std::fmt::Display) {
    println!("ACCEPTANCE {name}: PASS ({detail})");
}

/// Random scan instance on a grid of at most 200 points.
struct Instance {
    grid: WavelengthGrid,
    config: BandScanConfig,
    values1: Vec<f64>,
    values2: Vec<f64>,
}

impl Instance {
    fn random(seed: u64) -> Self {
        let mut rng = synth::rng(seed);
        let resolution = 0.01;
        let stride = rng.random_range(5usize..=10);
        let total_steps = rng.random_range(4usize..=12);
        let lo = rng.random_range(100u32..=300) as f64 * resolution;
        let count = total_steps * stride + 1;
        let grid = WavelengthGrid::new(lo, resolution, count).unwrap();
        let config = BandScanConfig::new(grid.start(), grid.end())
            .with_scan_step(stride as f64 * resolution);
        Instance {
            grid,
            config,
            values1: (0..count).map(|_| rng.random_range(0.1..2.0)).collect(),
            values2: (0..count).map(|_| rng.random_range(0.1..2.0)).collect(),
        }
    }

    fn averaged(&self) -> (AveragedSpectrum, AveragedSpectrum) {
        (
            AveragedSpectrum::new(
                self.grid.clone(),
                self.values1.clone(),
                synth::label("one"),
                1,
            )
            .unwrap(),
            AveragedSpectrum::new(
                self.grid.clone(),
                self.values2.clone(),
                synth::label("two"),
                1,
            )
            .unwrap(),
        )
    }

    fn scan(&self) -> CoefficientGrid {
        let (a1, a2) = self.averaged();
        scan_grid(&a1, &a2, &self.config).unwrap()
    }
}

fn assert_grids_bitwise_equal(a: &CoefficientGrid, b: &CoefficientGrid) {
    assert_eq!(a.starts().len(), b.starts().len());
    assert_eq!(a.widths().len(), b.widths().len());
    for si in 0..a.starts().len() {
        for wi in 0..a.widths().len() {
            assert_eq!(a.value(si, wi), b.value(si, wi), "cell ({si},{wi})");
        }
    }
}

/// Criterion: coefficient range, pair symmetry, joint-scale invariance,
/// one-sided closed form, zero-denominator convention, and prefix-vs-direct
/// agreement, each across >= 100 randomized nonnegative spectra, in under
/// 10 s total.
#[test]
fn property_suite() {
    let started = Instant::now();
    const INSTANCES: u64 = 60; // 120 random spectra per property

    // range + symmetry
    for seed in 0..INSTANCES {
        let inst = Instance::random(seed);
        let (a1, a2) = inst.averaged();
        let forward = scan_grid(&a1, &a2, &inst.config).unwrap();
        for (_, _, v) in forward.present_cells() {
            assert!((0.0..=1.0).contains(&v), "coefficient {v} out of [0,1]");
        }
        let swapped = scan_grid(&a2, &a1, &inst.config).unwrap();
        assert_grids_bitwise_equal(&forward, &swapped);
    }

    // joint-scale invariance: exact (bitwise) for power-of-two factors,
    // <= 1e-12 drift on the [0,1] coefficient scale for arbitrary factors
    let mut rng = synth::rng(0xA11CE);
    for seed in 1000..1000 + INSTANCES {
        let inst = Instance::random(seed);
        let (a1, a2) = inst.averaged();
        let base = scan_grid(&a1, &a2, &inst.config).unwrap();

        let pow2 = [0.125, 0.25, 0.5, 2.0, 4.0, 8.0][(seed % 6) as usize];
        let scaled = scan_grid(
            &a1.scaled(pow2).unwrap(),
            &a2.scaled(pow2).unwrap(),
            &inst.config,
        )
        .unwrap();
        assert_grids_bitwise_equal(&base, &scaled);

        let c = rng.random_range(0.03..30.0);
        let scaled = scan_grid(
            &a1.scaled(c).unwrap(),
            &a2.scaled(c).unwrap(),
            &inst.config,
        )
        .unwrap();
        for si in 0..base.starts().len() {
            for wi in 0..base.widths().len() {
                if let (Some(x), Some(y)) = (base.value(si, wi), scaled.value(si, wi)) {
                    assert!((x - y).abs() <= 1e-12, "joint-scale drift {}", (x - y).abs());
                }
            }
        }
    }

    // one-sided scale: coefficient equals |1-c|/(1+c) within 1e-12 relative
    let factors = [0.125, 0.25, 0.5, 2.0, 4.0, 8.0, 3.0, 1.5, 0.75];
    for seed in 2000..2000 + INSTANCES {
        let inst = Instance::random(seed);
        let (a1, _) = inst.averaged();
        let c = factors[(seed % factors.len() as u64) as usize];
        let a2 = a1.scaled(c).unwrap();
        let scanned = scan_grid(&a1, &a2, &inst.config).unwrap();
        let expected = (1.0 - c).abs() / (1.0 + c);
        for (_, _, v) in scanned.present_cells() {
            assert_relative_eq!(v, expected, max_relative = 1e-12);
        }
    }

    // zero-denominator convention: bands over an all-zero plateau score 0
    for seed in 3000..3000 + INSTANCES {
        let inst = Instance::random(seed);
        let zero_from = inst.config.range_lo + inst.config.scan_step;
        let zero_to = zero_from + 2.0 * inst.config.scan_step;
        let silence = |values: &[f64]| -> Vec<f64> {
            inst.grid
                .points()
                .zip(values)
                .map(|(x, &v)| {
                    if (zero_from - 1e-9..=zero_to + 1e-9).contains(&x) {
                        0.0
                    } else {
                        v
                    }
                })
                .collect()
        };
        let a1 = AveragedSpectrum::new(
            inst.grid.clone(),
            silence(&inst.values1),
            synth::label("one"),
            1,
        )
        .unwrap();
        let a2 = AveragedSpectrum::new(
            inst.grid.clone(),
            silence(&inst.values2),
            synth::label("two"),
            1,
        )
        .unwrap();
        let scanned = scan_grid(&a1, &a2, &inst.config).unwrap();
        let mut checked = 0;
        for (si, wi, v) in scanned.present_cells() {
            let band = scanned.band(si, wi);
            if band.start() >= zero_from - 1e-9 && band.end() <= zero_to + 1e-9 {
                assert_eq!(v, 0.0, "zero/zero band must score 0 by convention");
                checked += 1;
            }
        }
        assert!(checked >= 3, "plateau produced no all-zero bands");
    }

    // prefix-sum AUC vs direct trapezoid summation
    for seed in 4000..4000 + INSTANCES {
        let inst = Instance::random(seed);
        let (a1, a2) = inst.averaged();
        for (values, avg) in [(&inst.values1, &a1), (&inst.values2, &a2)] {
            let prefix = cumulative_integral(avg);
            let stride = (inst.config.scan_step / inst.grid.step()).round() as usize;
            let total = (inst.grid.count() - 1) / stride;
            for k in 0..total {
                for m in 1..=total - k {
                    let band = Band::new(
                        inst.config.range_lo + k as f64 * inst.config.scan_step,
                        m as f64 * inst.config.scan_step,
                    )
                    .unwrap();
                    let fast = prefix.auc(&band).unwrap();
                    let direct = oracle::direct_band_area(
                        values,
                        inst.grid.step(),
                        k * stride,
                        (k + m) * stride,
                    );
                    assert_relative_eq!(fast, direct, epsilon = 1e-12, max_relative = 1e-12);
                }
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "property suite took {elapsed:?}, budget is 10 s"
    );
    pass(
        "property_suite",
        format!("6 properties x {INSTANCES} instances in {elapsed:.2?}"),
    );
}

/// Criterion: the full coefficient grid matches the independently written
/// brute-force scanner within 1e-12 on >= 20 random instances of <= 200
/// grid points, argmax identical including tie-breaks.
#[test]
fn oracle_equivalence() {
    const INSTANCES: u64 = 25;
    for seed in 0..INSTANCES {
        let inst = Instance::random(seed * 31 + 7);
        assert!(inst.grid.count() <= 200);
        let scanned = inst.scan();
        let reference = oracle::brute_force_scan(
            inst.grid.start(),
            inst.grid.step(),
            &inst.values1,
            &inst.values2,
            inst.config.range_lo,
            inst.config.range_hi,
            inst.config.scan_step,
            inst.config.max_width,
        );
        assert_eq!(scanned.present_count(), reference.present_count());
        for si in 0..reference.starts.len() {
            for wi in 0..reference.widths.len() {
                match (scanned.value(si, wi), reference.cells[si][wi]) {
                    (Some(a), Some(b)) => {
                        assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12)
                    }
                    (None, None) => {}
                    other => panic!("presence mismatch at ({si},{wi}): {other:?}"),
                }
            }
        }
        let best = find_optimal_bands(&scanned, 1).unwrap()[0];
        let (osi, owi, ov) = reference.best_cell().unwrap();
        assert_eq!(
            best.band,
            scanned.band(osi, owi),
            "argmax mismatch (tie-break?)"
        );
        assert_relative_eq!(best.coefficient, ov, epsilon = 1e-12, max_relative = 1e-12);
    }
    pass("oracle_equivalence", format!("{INSTANCES} instances"));
}

/// Criterion: flat class vs the same flat class with a Gaussian dip to 0.2
/// at 1.9 μm (depth 0.8, σ 0.05 μm). The best band must contain 1.9 μm and
/// the single above-threshold region must contain 1.9 μm in every member
/// band, in agreement with the brute-force oracle.
#[test]
fn synthetic_dip_recovery() {
    let n = 1601;
    let flat = synth::constant_spectrum(1.6, 3.2, n, 1.0, "flat");
    let dipped = synth::gaussian_dip_spectrum(1.6, 3.2, n, 1.0, 0.8, 1.9, 0.05, "dip");

    let grid = bandscan::common_grid(
        std::slice::from_ref(&flat),
        std::slice::from_ref(&dipped),
        0.01,
    )
    .unwrap();
    let a1 = bandscan::average_class(std::slice::from_ref(&flat), &synth::label("flat"), &grid)
        .unwrap();
    let a2 = bandscan::average_class(std::slice::from_ref(&dipped), &synth::label("dip"), &grid)
        .unwrap();
    let config = BandScanConfig::new(grid.start(), grid.end());
    let scanned = scan_grid(&a1, &a2, &config).unwrap();

    let best = find_optimal_bands(&scanned, 1).unwrap()[0];
    assert!(
        best.band.contains(1.9),
        "best band {} does not contain the dip",
        best.band
    );

    let regions = find_selective_regions(&scanned).unwrap();
    assert_eq!(regions.len(), 1, "expected a single above-threshold region");
    for member in &regions[0].members {
        assert!(
            member.contains(1.9),
            "region member {member} does not contain the dip"
        );
    }

    // cross-check against the oracle: same argmax, same hot-cell set
    let reference = oracle::brute_force_scan(
        grid.start(),
        grid.step(),
        a1.mean_reflectance(),
        a2.mean_reflectance(),
        config.range_lo,
        config.range_hi,
        config.scan_step,
        config.max_width,
    );
    let (osi, owi, _) = reference.best_cell().unwrap();
    assert_eq!(best.band, scanned.band(osi, owi));
    let mut oracle_hot: Vec<Band> = reference
        .hot_cells(config.region_threshold_fraction)
        .into_iter()
        .map(|(si, wi)| scanned.band(si, wi))
        .collect();
    let mut impl_hot: Vec<Band> = regions[0].members.clone();
    let key = |b: &Band| (b.start(), b.width());
    oracle_hot.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    impl_hot.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    assert_eq!(oracle_hot, impl_hot, "hot cells differ from oracle");

    pass(
        "synthetic_dip_recovery",
        format!(
            "best {} coef {:.4}, region of {} bands",
            best.band,
            best.coefficient,
            regions[0].members.len()
        ),
    );
}

/// Criterion: 1.6-3.2 μm at 0.05 μm step gives exactly 528 present cells;
/// the full 1.6-18 μm window (53,956 cells at 0.01 μm resolution) scans in
/// under 1 s thanks to the prefix sums.
#[test]
fn grid_shape_and_scan_speed() {
    let mut rng = synth::rng(5);
    let small = WavelengthGrid::spanning(1.6, 3.2, 0.01).unwrap();
    let a1 = synth::random_averaged(&mut rng, &small, 0.1, 1.0, "one");
    let a2 = synth::random_averaged(&mut rng, &small, 0.1, 1.0, "two");
    let scanned = scan_grid(&a1, &a2, &BandScanConfig::new(1.6, 3.2)).unwrap();
    assert_eq!(scanned.starts().len(), 32);
    assert_eq!(scanned.present_count(), 528);

    let full = WavelengthGrid::spanning(1.6, 18.0, 0.01).unwrap();
    assert_eq!(full.count(), 1641);
    let b1 = synth::random_averaged(&mut rng, &full, 0.1, 1.0, "one");
    let b2 = synth::random_averaged(&mut rng, &full, 0.1, 1.0, "two");
    let config = BandScanConfig::new(1.6, 18.0);

    let started = Instant::now();
    let wide = scan_grid(&b1, &b2, &config).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(wide.present_count(), 53_956);
    assert!(
        elapsed < Duration::from_secs(1),
        "full-window scan took {elapsed:?}, budget is 1 s"
    );

    // serial and parallel scans are interchangeable bit for bit
    let serial = scan_grid_seq(&b1, &b2, &config).unwrap();
    assert_grids_bitwise_equal(&wide, &serial);

    pass(
        "grid_shape_and_scan_speed",
        format!("528 + 53,956 cells, full window in {elapsed:.2?}"),
    );
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

struct Table1Row {
    dataset: &'static str,
    pair: (&'static str, &'static str),
    window_hi: f64,
    expected_bands: &'static [(f64, f64)],
    expected_coef: f64,
}

const TABLE1_ROWS: &[Table1Row] = &[
    Table1Row {
        dataset: "apple_scab",
        pair: ("healthy", "infected"),
        window_hi: 3.2,
        expected_bands: &[(1.8, 2.0), (2.4, 2.8)],
        expected_coef: 0.5,
    },
    Table1Row {
        dataset: "moniliasis",
        pair: ("spores", "infected"),
        window_hi: 3.2,
        expected_bands: &[(2.8, 3.1)],
        expected_coef: 0.7,
    },
    Table1Row {
        dataset: "moniliasis",
        pair: ("healthy", "infected"),
        window_hi: 3.2,
        expected_bands: &[(1.6, 1.8)],
        expected_coef: 0.25,
    },
    Table1Row {
        dataset: "moniliasis",
        pair: ("healthy", "spores"),
        window_hi: 9.0,
        expected_bands: &[(2.9, 3.2), (5.9, 9.0)],
        expected_coef: 0.8,
    },
    Table1Row {
        dataset: "powdery_mildew",
        pair: ("healthy", "infected"),
        window_hi: 3.2,
        expected_bands: &[(2.7, 2.9)],
        expected_coef: 0.41,
    },
];

/// Criterion (contingent on the reference dataset, mounted under `data/`):
/// the scans reproduce the known per-pair maxima within ±0.1 and the known
/// band locations within one scan step, in under 5 s per pair.
#[test]
fn table1_reproduction() {
    let data_dir = workspace_root().join("data");
    if !data_dir.is_dir() {
        println!(
            "ACCEPTANCE table1_reproduction: SKIP (dataset not mounted at {})",
            data_dir.display()
        );
        return;
    }
    let step = 0.05;
    let mut checked = 0usize;
    for row in TABLE1_ROWS {
        let manifest_path = data_dir.join(row.dataset).join("manifest.json");
        if !manifest_path.is_file() {
            println!(
                "ACCEPTANCE table1_reproduction: SKIP row {} ({} missing)",
                row.dataset,
                manifest_path.display()
            );
            continue;
        }
        let loaded = load_dataset(&parse_manifest(&manifest_path).unwrap()).unwrap();
        let label_a = ClassLabel::new(row.pair.0).unwrap();
        let label_b = ClassLabel::new(row.pair.1).unwrap();
        if loaded.dataset.group(&label_a).is_none() || loaded.dataset.group(&label_b).is_none() {
            println!(
                "ACCEPTANCE table1_reproduction: SKIP row {} (labels {}:{} not in manifest)",
                row.dataset, row.pair.0, row.pair.1
            );
            continue;
        }
        let (data_lo, data_hi) = bandscan::wavelength_intersection(
            loaded
                .dataset
                .group(&label_a)
                .unwrap()
                .iter()
                .chain(loaded.dataset.group(&label_b).unwrap()),
        )
        .unwrap();
        let window = (data_lo.max(1.6), data_hi.min(row.window_hi));

        let started = Instant::now();
        let analysis = analyze_pair(
            &loaded.dataset,
            &label_a,
            &label_b,
            &AnalysisOptions {
                window: Some(window),
                ..AnalysisOptions::default()
            },
        )
        .unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed < Duration::from_secs(5),
            "{}: scan took {elapsed:?}, budget is 5 s per pair",
            row.dataset
        );

        let max = analysis.grid.max_value().unwrap();
        assert!(
            (max - row.expected_coef).abs() <= 0.1,
            "{} {}:{}: max coefficient {max:.3}, expected {:.2} (±0.1)",
            row.dataset,
            row.pair.0,
            row.pair.1,
            row.expected_coef
        );
        for &(band_lo, band_hi) in row.expected_bands {
            let hit = analysis.report.regions.iter().any(|region| {
                region.members.iter().any(|member| {
                    member.start() <= band_hi + step && member.end() >= band_lo - step
                })
            });
            assert!(
                hit,
                "{} {}:{}: no above-threshold region intersects {band_lo}-{band_hi} um",
                row.dataset, row.pair.0, row.pair.1
            );
        }
        checked += 1;
    }
    if checked > 0 {
        pass("table1_reproduction", format!("{checked} rows reproduced"));
    }
}

/// Criterion: byte-identical heatmap CSV/PGM and report JSON across repeated
/// runs, and a malformed-input corpus (>= 10 files) all rejected with the
/// designated error classes and nonzero exit codes.
#[test]
fn io_goldens_and_rejection() {
    let binary = env!("CARGO_BIN_EXE_bandscan");

    // determinism across two separate processes
    let dir = tempfile::tempdir().unwrap();
    synth::write_dip_dataset(dir.path(), 3, 1.9, 0.8, 0.05, 1234);
    for out in ["run1", "run2"] {
        let status = Command::new(binary)
            .current_dir(dir.path())
            .args([
                "analyze",
                "manifest.json",
                "--pair",
                "flat:dip",
                "--range",
                "1.6:3.2",
                "--out-dir",
                out,
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    for file in ["heatmap.csv", "heatmap.pgm", "report.json"] {
        let first = std::fs::read(dir.path().join("run1").join(file)).unwrap();
        let second = std::fs::read(dir.path().join("run2").join(file)).unwrap();
        assert_eq!(first, second, "{file} not byte-identical across runs");
        assert!(!first.is_empty());
    }

    // malformed spectrum corpus: every file must be rejected with the
    // designated error class by the library and a nonzero exit by the CLI
    type SpectrumCheck = fn(&SpectrumError) -> bool;
    let corpus: Vec<(&str, &str, SpectrumCheck)> = vec![
        ("non_numeric.csv", "wavelength_um,reflectance\n1.6,abc\n1.7,0.2\n", |e| {
            matches!(e, SpectrumError::MalformedRow { .. })
        }),
        ("three_columns.csv", "wavelength_um,reflectance\n1.6,0.2,0.3\n", |e| {
            matches!(e, SpectrumError::MalformedRow { .. })
        }),
        ("one_column.csv", "wavelength_um,reflectance\n1.6\n1.7\n", |e| {
            matches!(e, SpectrumError::MalformedRow { .. })
        }),
        ("inf_value.csv", "wavelength_um,reflectance\n1.6,inf\n1.7,0.2\n", |e| {
            matches!(e, SpectrumError::MalformedRow { .. })
        }),
        ("decreasing.csv", "wavelength_um,reflectance\n1.7,0.4\n1.6,0.3\n", |e| {
            matches!(e, SpectrumError::NonMonotonicWavelengths { .. })
        }),
        ("duplicate_wavelength.csv", "wavelength_um,reflectance\n1.6,0.4\n1.6,0.3\n", |e| {
            matches!(e, SpectrumError::NonMonotonicWavelengths { .. })
        }),
        ("negative.csv", "wavelength_um,reflectance\n1.6,-0.5\n1.7,0.2\n", |e| {
            matches!(e, SpectrumError::NegativeReflectance { .. })
        }),
        ("single_row.csv", "wavelength_um,reflectance\n1.6,0.2\n", |e| {
            matches!(e, SpectrumError::TooFewPoints { found: 1 })
        }),
        ("header_only.csv", "wavelength_um,reflectance\n", |e| {
            matches!(e, SpectrumError::TooFewPoints { found: 0 })
        }),
        ("bad_header.csv", "lambda,intensity\n1.6,0.2\n1.7,0.3\n", |e| {
            matches!(e, SpectrumError::BadHeader { .. })
        }),
        ("empty.csv", "", |e| matches!(e, SpectrumError::MissingHeader)),
        ("wavelength_500um.csv", "wavelength_um,reflectance\n1.6,0.2\n500,0.3\n", |e| {
            matches!(e, SpectrumError::WavelengthOutOfRange { .. })
        }),
    ];
    assert!(corpus.len() >= 10);

    let bad_dir = tempfile::tempdir().unwrap();
    synth::write_spectrum_csv(
        bad_dir.path(),
        "good.csv",
        WavelengthUnit::Micrometer,
        &[(1.6, 0.5), (3.2, 0.4)],
    );
    for (name, content, matches_class) in &corpus {
        let path = bad_dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        let err = parse_spectrum_file(&path, WavelengthUnit::Micrometer)
            .expect_err("malformed file must be rejected");
        assert!(
            matches_class(&err),
            "{name}: unexpected error class {err:?}"
        );

        synth::write_manifest(
            bad_dir.path(),
            "micrometer",
            &[
                ("bad", vec![name.to_string()]),
                ("good", vec!["good.csv".to_string()]),
            ],
        );
        let out = Command::new(binary)
            .current_dir(bad_dir.path())
            .args(["validate", "manifest.json"])
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(2),
            "{name}: validate must exit 2, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    // malformed manifests reject with their own designated classes
    type ManifestCheck = fn(&DatasetError) -> bool;
    let manifest_corpus: Vec<(&str, ManifestCheck)> = vec![
        (
            r#"{"default_unit":"micrometer","classes":[{"label":"a","files":["good.csv"]},{"label":"a","files":["x.csv"]}]}"#,
            |e| matches!(e, DatasetError::DuplicateClassLabel { .. }),
        ),
        (
            r#"{"default_unit":"micrometer","classes":[{"label":"a","files":[]},{"label":"b","files":["good.csv"]}]}"#,
            |e| matches!(e, DatasetError::EmptyClass { .. }),
        ),
        (
            r#"{"default_unit":"parsec","classes":[{"label":"a","files":["good.csv"]},{"label":"b","files":["x.csv"]}]}"#,
            |e| matches!(e, DatasetError::SchemaViolation { .. }),
        ),
        (
            r#"{"default_unit":"micrometer","classes":[{"label":"only","files":["good.csv"]}]}"#,
            |e| matches!(e, DatasetError::TooFewClasses { .. }),
        ),
    ];
    for (i, (content, matches_class)) in manifest_corpus.iter().enumerate() {
        let path = bad_dir.path().join(format!("bad_manifest_{i}.json"));
        std::fs::write(&path, content).unwrap();
        let err = parse_manifest(&path).expect_err("malformed manifest must be rejected");
        assert!(matches_class(&err), "manifest {i}: wrong class {err:?}");
        let out = Command::new(binary)
            .current_dir(bad_dir.path())
            .args(["validate", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "manifest {i} must exit 2");
    }

    pass(
        "io_goldens_and_rejection",
        format!(
            "3 deterministic outputs, {} rejected spectra, {} rejected manifests",
            corpus.len(),
            manifest_corpus.len()
        ),
    );
}
