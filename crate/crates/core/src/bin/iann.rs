//! Command-line front end: `cv`, `curve`, `importance` and `train`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric abort.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use iann::experiment::{
    run_cross_validation, run_learning_curve, ExperimentSpec, Method, Mode, RunConfig,
};
use iann::fri::{parse_fri_file, parse_fri_list};
use iann::importance::{importance_report, Agreement};
use iann::init::{init_iann, init_standard};
use iann::theory::DomainTheory;
use iann::train::{train, TrainConfig};
use iann::{Dataset, Error, FriVector, Network, Result, Topology};

#[derive(Parser)]
#[command(
    name = "iann",
    version,
    about = "Importance-aided neural network experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratified k-fold cross-validation; writes report.json.
    Cv(Common),
    /// Test error against training-set size; writes curve.csv and report.json.
    Curve {
        #[command(flatten)]
        common: Common,
        /// Training-set sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Per-feature importance diagnostics for a saved model; writes importance.csv and report.json.
    Importance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: PathBuf,
    },
    /// Trains one network on the whole dataset; writes model.json and trace.csv.
    Train(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Theory {
    Promoter,
    Splice,
}

#[derive(Args)]
struct Common {
    /// Comma-separated `label, id, sequence` records.
    #[arg(long)]
    data: PathBuf,
    /// FRI file, one `index<TAB>value` line per sequence position.
    #[arg(long, conflicts_with_all = ["fri_inline", "fri_theory"])]
    fri: Option<PathBuf>,
    /// FRI as a comma-separated list, one value per sequence position.
    #[arg(long, conflicts_with = "fri_theory")]
    fri_inline: Option<String>,
    /// FRI derived from a built-in domain theory.
    #[arg(long, value_enum)]
    fri_theory: Option<Theory>,
    #[arg(long, default_value_t = 23)]
    hidden: usize,
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Seeds as `a..b` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "0..9")]
    seeds: String,
    /// Use a seeded random subset of this many instances.
    #[arg(long)]
    subset: Option<usize>,
    #[arg(long, default_value_t = 0)]
    subset_seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("cannot parse seeds {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.into(),
        source: e,
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.into(),
        source: e,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })?;
    eprintln!("wrote {}", dir.join(name).display());
    Ok(())
}

fn load_fri(common: &Common) -> Result<Option<FriVector>> {
    Ok(match (&common.fri, &common.fri_inline, common.fri_theory) {
        (Some(path), _, _) => Some(parse_fri_file(&read(path)?)?),
        (_, Some(list), _) => Some(parse_fri_list(list)?),
        (_, _, Some(Theory::Promoter)) => Some(DomainTheory::promoter().fri()),
        (_, _, Some(Theory::Splice)) => Some(DomainTheory::splice().fri()),
        _ => None,
    })
}

fn build_spec(
    mode: Mode,
    common: &Common,
    sizes: Vec<usize>,
    model: Option<PathBuf>,
) -> Result<ExperimentSpec> {
    let spec = ExperimentSpec {
        mode,
        data: common.data.clone(),
        fri: load_fri(common)?,
        run: RunConfig {
            hidden: common.hidden,
            epochs: common.epochs,
            learning_rate: common.lr,
            folds: common.folds,
            seeds: parse_seeds(&common.seeds)?,
            shuffle_each_epoch: true,
        },
        sizes,
        model,
        out: common.out.clone(),
    };
    spec.validate()?;
    Ok(spec)
}

fn load_data(spec: &ExperimentSpec, common: &Common, notes: &mut Vec<String>) -> Result<Dataset> {
    let data = Dataset::load(&spec.data)?;
    match common.subset {
        Some(n) => {
            notes.push(format!(
                "seeded random subset of {n} from {} instances (subset seed {})",
                data.len(),
                common.subset_seed
            ));
            data.random_subset(n, common.subset_seed)
        }
        None => Ok(data),
    }
}

fn method_for(spec: &ExperimentSpec, data: &Dataset) -> Result<Method> {
    match &spec.fri {
        Some(fri) => Ok(Method::iann(data.expand_fri(fri)?)),
        None => Ok(Method::backprop()),
    }
}

#[derive(Serialize)]
struct ImportanceSummary {
    model: PathBuf,
    features: usize,
    fri_agreement: Agreement,
}

fn run(cli: Cli) -> Result<()> {
    let mut notes = Vec::new();
    match cli.command {
        Command::Cv(common) => {
            let spec = build_spec(Mode::Cv, &common, vec![], None)?;
            let data = load_data(&spec, &common, &mut notes)?;
            let mut report = run_cross_validation(&data, &method_for(&spec, &data)?, &spec.run)?;
            report.notes = notes;
            eprintln!(
                "{}: mean accuracy {:.2}% (fold sd {:.2}, seed sd {:.2})",
                report.method, report.mean_accuracy, report.fold_std, report.seed_std
            );
            write(&spec.out, "report.json", &report.to_json()?)
        }
        Command::Curve { common, sizes } => {
            let spec = build_spec(Mode::Curve, &common, sizes, None)?;
            let data = load_data(&spec, &common, &mut notes)?;
            let report =
                run_learning_curve(&data, &method_for(&spec, &data)?, &spec.run, &spec.sizes)?;
            for m in &report.means {
                eprintln!(
                    "{}: size {} error {:.2}%",
                    report.method, m.train_size, m.mean_error_pct
                );
            }
            write(&spec.out, "curve.csv", &report.to_csv()?)?;
            write(&spec.out, "report.json", &report.to_json()?)
        }
        Command::Importance { common, model } => {
            let spec = build_spec(Mode::Importance, &common, vec![], Some(model))?;
            let data = load_data(&spec, &common, &mut notes)?;
            let model_path = spec.model.clone().unwrap_or_default();
            let net = Network::from_json(&read(&model_path)?)?;
            let fri = spec.fri.as_ref().expect("validated");
            let report = importance_report(&net, &data, fri)?;
            let summary = ImportanceSummary {
                model: model_path,
                features: report.rows.len(),
                fri_agreement: report.fri_agreement,
            };
            eprintln!(
                "FRI agreement: {}",
                serde_json::to_string(&report.fri_agreement)?
            );
            write(&spec.out, "importance.csv", &report.to_csv()?)?;
            write(
                &spec.out,
                "report.json",
                &serde_json::to_string_pretty(&summary)?,
            )
        }
        Command::Train(common) => {
            let spec = build_spec(Mode::Train, &common, vec![], None)?;
            let data = load_data(&spec, &common, &mut notes)?;
            let topology = Topology::new(data.n_inputs(), spec.run.hidden, data.output_units())?;
            let seed = spec.run.seeds[0];
            let method = method_for(&spec, &data)?;
            let net = match &method.init_fri {
                Some(fri) => init_iann(topology, fri, seed)?,
                None => init_standard(topology, seed)?,
            };
            let config = TrainConfig {
                learning_rate: spec.run.learning_rate,
                epochs: spec.run.epochs,
                seed,
                shuffle_each_epoch: true,
            };
            let trace = train(net, &data, &config, method.update_fri.as_ref())?;
            eprintln!(
                "{}: final training MSE {:.5}",
                method.name,
                trace.epoch_mse.last().copied().unwrap_or(f64::NAN)
            );
            write(&spec.out, "model.json", &trace.network.to_json()?)?;
            write(&spec.out, "trace.csv", &trace.to_csv()?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
