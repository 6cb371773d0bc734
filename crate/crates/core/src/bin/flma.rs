use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flma::correction::CertaintyThresholds;
use flma::io::{read_numeric_table, write_matrix};
use flma::mining::read_rules;
use flma::pipeline::{correct_scores, mine_to_dir, run};
use flma::{evaluate, harden, load_external_scores, ConfigMap, Error, Result, ScoreMatrix};

#[derive(Parser)]
#[command(name = "flma", version, about = "Label-association correction for multi-label classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine CP and CA rules from a whole dataset.
    Mine(MineArgs),
    /// Cross-validate the baseline classifier against its corrected output.
    Run(RunArgs),
    /// Correct an existing score matrix with a rules file.
    Correct(CorrectArgs),
    /// Evaluate scores (and optionally hard predictions) against ground truth.
    Eval(EvalArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// `key = value` configuration file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ARFF data file (requires --labels).
    #[arg(long)]
    data: Option<String>,
    /// XML label declaration for the ARFF file.
    #[arg(long)]
    labels: Option<String>,
    /// CSV with a header row; the last --label-count columns are labels.
    #[arg(long)]
    csv: Option<String>,
    #[arg(long)]
    label_count: Option<usize>,
    #[arg(long)]
    min_sup_cp: Option<f64>,
    #[arg(long)]
    min_conf_cp: Option<f64>,
    #[arg(long)]
    min_sup_ca: Option<f64>,
    #[arg(long)]
    min_conf_ca: Option<f64>,
    #[arg(long)]
    max_labelset_size: Option<usize>,
    /// Drop labels below average frequency before mining CP rules.
    #[arg(long)]
    use_frequency_filter: Option<bool>,
    /// Output directory.
    #[arg(long, short)]
    output: Option<String>,
}

impl DatasetArgs {
    fn to_map(&self) -> Result<ConfigMap> {
        let mut map = match &self.config {
            Some(p) => ConfigMap::load(p)?,
            None => ConfigMap::new(),
        };
        let mut flags = ConfigMap::new();
        flags.set_opt("data", self.data.as_ref());
        flags.set_opt("labels", self.labels.as_ref());
        flags.set_opt("csv", self.csv.as_ref());
        flags.set_opt("label_count", self.label_count);
        flags.set_opt("min_sup_cp", self.min_sup_cp);
        flags.set_opt("min_conf_cp", self.min_conf_cp);
        flags.set_opt("min_sup_ca", self.min_sup_ca);
        flags.set_opt("min_conf_ca", self.min_conf_ca);
        flags.set_opt("max_labelset_size", self.max_labelset_size);
        flags.set_opt("use_frequency_filter", self.use_frequency_filter);
        flags.set_opt("output", self.output.as_ref());
        map.merge(&flags);
        Ok(map)
    }
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    common: DatasetArgs,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: DatasetArgs,
    /// Base classifier: `mlknn` or `external`.
    #[arg(long)]
    classifier: Option<String>,
    /// Neighbourhood size for ML-KNN.
    #[arg(long)]
    k: Option<usize>,
    /// Laplace smoothing for ML-KNN.
    #[arg(long)]
    smoothing: Option<f64>,
    /// Score CSV for every instance, in dataset order (classifier `external`).
    #[arg(long)]
    external_scores: Option<String>,
    #[arg(long)]
    external_header: Option<bool>,
    /// Fixed lower certainty threshold (requires --upper).
    #[arg(long)]
    lower: Option<f64>,
    /// Fixed upper certainty threshold (requires --lower).
    #[arg(long)]
    upper: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write a per-fold trace of every score change.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct CorrectArgs {
    /// Score CSV, one column per label.
    #[arg(long)]
    scores: PathBuf,
    /// The score file has no header; take label names from --label-names.
    #[arg(long)]
    no_header: bool,
    /// Comma-separated label names (required with --no-header).
    #[arg(long, value_delimiter = ',')]
    label_names: Option<Vec<String>>,
    /// Rules file as written by `flma mine`.
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    lower: Option<f64>,
    #[arg(long)]
    upper: Option<f64>,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Binary ground-truth CSV with a header row.
    #[arg(long)]
    truth: PathBuf,
    /// Score CSV with a header row.
    #[arg(long)]
    scores: PathBuf,
    /// Binary prediction CSV; scores are thresholded at 0.5 when absent.
    #[arg(long)]
    pred: Option<PathBuf>,
    /// Write the report as JSON here instead of printing it.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn thresholds(lower: Option<f64>, upper: Option<f64>) -> Result<Option<CertaintyThresholds>> {
    match (lower, upper) {
        (Some(l), Some(u)) => CertaintyThresholds::fixed(l, u).map(Some),
        (None, None) => Ok(None),
        _ => Err(Error::invalid("--lower and --upper must be given together")),
    }
}

fn out_dir(map: &ConfigMap) -> PathBuf {
    map.get("output").unwrap_or("flma-out").into()
}

fn cmd_mine(args: MineArgs) -> Result<()> {
    let map = args.common.to_map()?;
    let dataset = map.dataset()?.load()?;
    let params = map.mining()?;
    let out = out_dir(&map);
    let s = mine_to_dir(&dataset, &params, &out)?;
    println!(
        "{} CP rules, {} CA rules, {} after cleaning -> {}",
        s.cp_rules,
        s.ca_rules,
        s.cleaned_rules,
        out.join("rules.tsv").display()
    );
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut map = args.common.to_map()?;
    let mut flags = ConfigMap::new();
    flags.set_opt("classifier", args.classifier);
    flags.set_opt("k", args.k);
    flags.set_opt("smoothing", args.smoothing);
    flags.set_opt("external_scores", args.external_scores);
    flags.set_opt("external_header", args.external_header);
    flags.set_opt("thr_lower", args.lower);
    flags.set_opt("thr_upper", args.upper);
    flags.set_opt("folds", args.folds);
    flags.set_opt("runs", args.runs);
    flags.set_opt("seed", args.seed);
    if args.trace {
        flags.set("trace", "true");
    }
    map.merge(&flags);
    let config = map.run_config()?;
    let outcome = run(&config)?;
    let s = &outcome.summary;
    println!("{:<16} {:>10} {:>10}", "metric", "baseline", "flma");
    for (i, name) in flma::metrics::METRIC_NAMES.iter().enumerate() {
        println!(
            "{:<16} {:>10.4} {:>10.4}",
            name,
            s.baseline.values()[i],
            s.flma.values()[i]
        );
    }
    println!("results in {}", config.output.display());
    Ok(())
}

fn cmd_correct(args: CorrectArgs) -> Result<()> {
    let table = read_numeric_table(&args.scores, !args.no_header)?;
    let names = match (table.header, args.label_names) {
        (Some(h), None) => h,
        (None, Some(n)) => n,
        (Some(h), Some(n)) => {
            if h != n {
                return Err(Error::LabelMismatch(format!(
                    "--label-names [{}] differ from the score header [{}]",
                    n.join(","),
                    h.join(",")
                )));
            }
            h
        }
        (None, None) => {
            return Err(Error::invalid("--no-header requires --label-names"));
        }
    };
    if names.len() != table.values.ncols() {
        return Err(Error::Dimension(format!(
            "{} label names for {} score columns",
            names.len(),
            table.values.ncols()
        )));
    }
    let scores = ScoreMatrix::new(table.values)
        .map_err(|e| Error::Format(format!("{}: {e}", args.scores.display())))?;
    let rules = read_rules(&args.rules, &names)?;
    let out = correct_scores(&scores, &rules, thresholds(args.lower, args.upper)?)?;

    let dir = &args.output;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_matrix(dir.join("corrected_scores.csv"), &names, out.corrected.as_array())?;
    write_matrix(dir.join("labels.csv"), &names, &out.labels)?;
    if args.trace {
        out.trace.write_tsv(dir.join("trace.tsv"), &names)?;
    }
    println!(
        "thresholds ({:.4}, {:.4}); {} uncertain cells, {} rule applications -> {}",
        out.thresholds.lower,
        out.thresholds.upper,
        out.summary.uncertain_cells,
        out.summary.applications,
        dir.display()
    );
    Ok(())
}

fn read_binary(path: &Path) -> Result<(Vec<String>, ndarray::Array2<u8>)> {
    let table = read_numeric_table(path, true)?;
    if let Some((idx, v)) = table
        .values
        .iter()
        .enumerate()
        .find(|(_, &v)| v != 0.0 && v != 1.0)
    {
        let c = table.values.ncols();
        return Err(Error::Format(format!(
            "{}: non-binary value {v} at row {}, column {}",
            path.display(),
            idx / c + 1,
            idx % c + 1
        )));
    }
    Ok((
        table.header.unwrap_or_default(),
        table.values.mapv(|v| v as u8),
    ))
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let (names, truth) = read_binary(&args.truth)?;
    let (scores, header) = load_external_scores(&args.scores, truth.ncols(), true)?;
    if header.as_deref() != Some(names.as_slice()) {
        return Err(Error::LabelMismatch(format!(
            "{} columns differ from {}",
            args.scores.display(),
            args.truth.display()
        )));
    }
    let pred = match &args.pred {
        Some(p) => {
            let (pn, pred) = read_binary(p)?;
            if pn != names {
                return Err(Error::LabelMismatch(format!(
                    "{} columns differ from {}",
                    p.display(),
                    args.truth.display()
                )));
            }
            pred
        }
        None => harden(&scores),
    };
    let report = evaluate(&pred, &scores, &truth)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Format(e.to_string()))?;
    match args.output {
        Some(p) => std::fs::write(&p, json + "\n").map_err(|e| Error::io(&p, e))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Run(a) => cmd_run(a),
        Command::Correct(a) => cmd_correct(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
