use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use serde::Serialize;

use contextcalc::noise::{depolarizing_report, ChannelSpec};
use contextcalc::ontomodels::{
    overlap_upper_bound, ks_ensemble_density, ks_model_eval, ks_pair_tv, model_total_variation,
    distance_sandwich_audit, SphereGrid,
};
use contextcalc::qgames::{polygon_experiment, qudit_haar_threshold};
use contextcalc::qmath::{bloch_to_density, BlochVector};
use contextcalc_cli::{
    analyze, ingest_theory, parse_decoders, parse_groups, simulate_table, AnalyzeOptions,
    CliError, Shots,
};

/// Contextuality witnesses and inaccessible-information bounds for
/// prepare-measure experiments.
#[derive(Parser)]
#[command(name = "contextcalc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a theory file and report its shape.
    IngestCheck {
        path: PathBuf,
        /// Row-sum tolerance override.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Write a synthetic polygon-experiment theory file.
    Simulate {
        /// Config name: `square`, `hexagon`, or `polygon:N`.
        #[arg(long, default_value = "square")]
        config: String,
        /// Depolarizing noise strength applied to every preparation.
        #[arg(long)]
        depolarizing: Option<f64>,
        /// Shot count; omit for exact Born probabilities.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the witness pipeline on a theory file.
    Analyze {
        path: PathBuf,
        /// Preparation grid, e.g. `k1x1,k1x2;k2x1,k2x2`.
        #[arg(long)]
        groups: String,
        /// Decoder measurement labels, e.g. `D1,D2`.
        #[arg(long)]
        decoders: String,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here (stdout gets the summary either way).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print the full JSON to stdout instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Depolarizing-noise thresholds for a dimension and strength.
    Thresholds {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
    },
    /// Monte-Carlo verification of the Haar guessing threshold.
    HaarVerify {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quadrature audit of the sphere models: Born residuals, the
    /// ensemble separation cap, and the distance sandwich.
    KsAudit {
        #[arg(long, default_value_t = 400)]
        grid_order: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Node count of the Monte-Carlo cross-check grid.
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct KsAuditReport {
    grid_order: usize,
    grid_tolerance: f64,
    mc_tolerance: f64,
    /// The looser of the grid and Monte-Carlo error estimates.
    reported_tolerance: f64,
    pairs: usize,
    max_born_residual: f64,
    max_ensemble_tv: f64,
    ensemble_cap_ok: bool,
    sandwich_all_pass: bool,
    overlap_bound: f64,
}

fn run() -> Result<(), CliError> {
    if let Ok(threads) = std::env::var("CONTEXTCALC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::IngestCheck { path, tolerance } => {
            let ingested = ingest_theory(&path, tolerance)?;
            println!(
                "ok: {} preparations, {} measurements, {} rows",
                ingested.table.n_preparations(),
                ingested.table.measurements().len(),
                ingested.table.n_rows(),
            );
            for w in &ingested.warnings {
                println!("warning: {w}");
            }
            println!("sha256: {}", ingested.input_sha256);
        }
        Command::Simulate { config, depolarizing, shots, seed, out } => {
            let n = match config.as_str() {
                "square" => 2,
                "hexagon" => 3,
                other => match other.strip_prefix("polygon:") {
                    Some(n) => n
                        .parse::<usize>()
                        .map_err(|_| CliError::Groups(format!("bad config `{other}`")))?,
                    None => {
                        return Err(CliError::Groups(format!(
                            "unknown config `{other}` (use square, hexagon, polygon:N)"
                        )))
                    }
                },
            };
            let exp = polygon_experiment(n)?;
            let channel = match depolarizing {
                Some(p) => Some(ChannelSpec::depolarizing(2, p)?),
                None => None,
            };
            let shots = match shots {
                Some(n) => Shots::Finite(n),
                None => Shots::Exact,
            };
            let file = simulate_table(
                &exp.preparations,
                &exp.measurements,
                channel.as_ref(),
                shots,
                seed,
            )?;
            let json = serde_json::to_string_pretty(&file).expect("theory serializes");
            match out {
                Some(path) => std::fs::write(&path, json).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => println!("{json}"),
            }
            eprintln!(
                "simulated polygon:{n} ({} preparations); groups: {}; decoders: {}",
                exp.preparations.len(),
                exp.groups
                    .iter()
                    .map(|g| g.join(","))
                    .collect::<Vec<_>>()
                    .join(";"),
                exp.decoders.join(","),
            );
        }
        Command::Analyze { path, groups, decoders, tolerance, seed, out, json } => {
            let ingested = ingest_theory(&path, tolerance)?;
            let groups = parse_groups(&groups)?;
            let decoders = parse_decoders(&decoders);
            let opts = AnalyzeOptions {
                seed,
                equivalence_tolerance: tolerance.unwrap_or(ingested.tolerance),
            };
            let report = analyze(&ingested, &groups, &decoders, &opts)?;
            if let Some(path) = out {
                std::fs::write(&path, report.to_json()).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.summary());
            }
        }
        Command::Thresholds { dim, p } => {
            let report = depolarizing_report(dim, p)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
        }
        Command::HaarVerify { dim, mc_samples, seed } => {
            let t = qudit_haar_threshold(dim, mc_samples, seed)?;
            println!("{}", serde_json::to_string_pretty(&t).expect("serializes"));
            let gap = (t.mc_estimate - t.exact).abs();
            println!(
                "|estimate - exact| = {:.3e} ({:.2} standard errors)",
                gap,
                gap / t.std_err
            );
        }
        Command::KsAudit { grid_order, pairs, mc_samples, seed } => {
            let grid = Arc::new(SphereGrid::product_gauss(grid_order).map_err(table_from)?);
            let mc_grid =
                Arc::new(SphereGrid::uniform_mc(mc_samples, seed).map_err(table_from)?);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut max_born: f64 = 0.0;
            let mut max_tv: f64 = 0.0;
            for _ in 0..pairs {
                let s = random_unit_bloch(&mut rng);
                let r = random_unit_bloch(&mut rng);
                let psi = bloch_to_density(&s);
                let phi = bloch_to_density(&r);
                let eval = ks_model_eval(&grid, &psi, &phi).map_err(table_from)?;
                let expected = (1.0 + s.dot(&r)) / 2.0;
                max_born = max_born.max((eval.born - expected).abs());

                // Equal-density ensembles built by construction.
                let anti = |b: &BlochVector| {
                    bloch_to_density(&BlochVector::new(-b.x, -b.y, -b.z).unwrap())
                };
                let e1 = ks_ensemble_density(
                    &grid,
                    &[(0.5, psi.clone()), (0.5, anti(&s))],
                )
                .map_err(table_from)?;
                let e2 = ks_ensemble_density(
                    &grid,
                    &[(0.5, phi.clone()), (0.5, anti(&r))],
                )
                .map_err(table_from)?;
                max_tv = max_tv.max(model_total_variation(&e1, &e2).map_err(table_from)?);
            }
            let sandwich_pairs: Vec<_> = (0..pairs)
                .map(|_| {
                    (
                        bloch_to_density(&random_unit_bloch(&mut rng)),
                        bloch_to_density(&random_unit_bloch(&mut rng)),
                    )
                })
                .collect();
            let sandwich = distance_sandwich_audit(
                |a, b| ks_pair_tv(&grid, a, b),
                &sandwich_pairs,
                0.5,
                1e-6,
            )
            .map_err(table_from)?;
            let overlap = overlap_upper_bound(2, |a, b| ks_pair_tv(&grid, a, b), 2000, seed)
                .map_err(table_from)?;
            let report = KsAuditReport {
                grid_order,
                grid_tolerance: grid.tolerance(),
                mc_tolerance: mc_grid.tolerance(),
                reported_tolerance: grid.tolerance().max(mc_grid.tolerance()),
                pairs,
                max_born_residual: max_born,
                max_ensemble_tv: max_tv,
                ensemble_cap_ok: max_tv <= 0.5 + 1e-6,
                sandwich_all_pass: sandwich.all_pass,
                overlap_bound: overlap.bound,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
        }
    }
    Ok(())
}

fn table_from(e: contextcalc::ontomodels::ModelError) -> CliError {
    CliError::Annotation(e.to_string())
}

fn random_unit_bloch<R: rand::Rng>(rng: &mut R) -> BlochVector {
    use rand_distr::StandardNormal;
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-6 {
            return BlochVector::new(x / n, y / n, z / n).unwrap();
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
