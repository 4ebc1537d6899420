use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rebel::io::{
    cost_checksum, load_costs, load_dataset, load_model, save_costs, save_model, write_dataset, write_trace,
    DatasetOptions, EvalReport, LabelSpec, ModelFile, TrainReport,
};
use rebel::oracle::{run_oracle, OracleConfig};
use rebel::synth::{
    class_tokens, gen_dataset, gen_normalized_cost_matrix, run_fig3, Fig3Config, MixtureParams, MixtureSpec,
};
use rebel::{Error, Result};
use rebel_core::eval::{evaluate, select_rounds};
use rebel_core::loss::argmax;
use rebel_core::{train, CostMatrix, StopReason, TrainConfig};

/// Multi-class cost-sensitive boosting.
#[derive(Parser)]
#[command(name = "rebel", version)]
struct Cli {
    /// Worker threads for feature scans and trials (0 = one per core).
    #[arg(long, global = true, env = "REBEL_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model on a labelled CSV dataset.
    Train(TrainArgs),
    /// Predict classes and scores for every row of a CSV file.
    Predict(PredictArgs),
    /// Error, risk and confusion matrix of a model on labelled data.
    Eval(EvalArgs),
    /// Sample a synthetic mixture dataset and optionally a cost matrix.
    Synth(SynthArgs),
    /// REBEL against the two-step method on random mixtures and cost matrices.
    Fig3(Fig3Args),
    /// Check two-class REBEL against discrete AdaBoost round by round.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// last, first, col:N (1-based), file:PATH or none.
    #[arg(long, default_value = "last")]
    labels: String,
    /// The CSV starts with a header row.
    #[arg(long)]
    header: bool,
}

impl DataArgs {
    fn options(&self, classes: Option<Vec<String>>) -> Result<DatasetOptions> {
        Ok(DatasetOptions { labels: self.labels.parse()?, has_header: self.header, classes })
    }
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Cost matrix CSV; uniform 0-1 costs when omitted.
    #[arg(long)]
    costs: Option<PathBuf>,
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 200)]
    ntau: usize,
    /// Smoothing of the fitted vectors, or `auto` for 1/(2NK).
    #[arg(long, default_value = "auto")]
    epsilon: String,
    /// Do not fit the constant vector a0.
    #[arg(long)]
    no_a0: bool,
    /// Keep training after the loss certifies zero training risk.
    #[arg(long)]
    no_certificate_stop: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Per-round trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Validation CSV (same layout as --data) for choosing the round count.
    #[arg(long)]
    val: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Label column to skip, if the file has one (same syntax as for train).
    #[arg(long, default_value = "none")]
    labels: String,
    #[arg(long)]
    header: bool,
    /// Use only the first N rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    costs: Option<PathBuf>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Mixture spec file (key = value); defaults are used when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Overrides the spec file's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    train_out: PathBuf,
    #[arg(long)]
    test_out: PathBuf,
    /// Also write a random cost matrix, normalized on the training labels.
    #[arg(long)]
    costs_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    cost_seed: u64,
}

#[derive(Args)]
struct Fig3Args {
    #[arg(long, default_value_t = 10)]
    datasets: usize,
    #[arg(long, default_value_t = 20)]
    matrices: usize,
    #[arg(long, default_value_t = 100)]
    rounds: usize,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = 200)]
    ntau: usize,
    #[arg(long)]
    no_a0: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mixture spec file supplying class count, cluster layout and sizes.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 50)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give AdaBoost a smoothing term that does not match REBEL's.
    #[arg(long, hide = true)]
    debug_mismatch_smoothing: bool,
}

fn load_costs_or_uniform(path: Option<&Path>, k: usize) -> Result<CostMatrix> {
    let costs = match path {
        Some(p) => load_costs(p)?,
        None => CostMatrix::uniform(k),
    };
    if costs.n_classes() != k {
        return Err(Error::Invalid(format!("cost matrix is {0}x{0} but the data has {k} classes", costs.n_classes())));
    }
    Ok(costs)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io { path: p.to_path_buf(), source: e }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn cmd_train(a: &TrainArgs) -> Result<i32> {
    let loaded = load_dataset(&a.data.data, &a.data.options(None)?)?;
    let data = loaded.dataset()?;
    let costs = load_costs_or_uniform(a.costs.as_deref(), data.n_classes())?;
    let epsilon = match a.epsilon.as_str() {
        "auto" => None,
        v => Some(
            v.parse::<f64>().map_err(|_| Error::Invalid(format!("--epsilon must be a number or auto, got {v:?}")))?,
        ),
    };
    let cfg = TrainConfig {
        rounds: a.rounds,
        tree_depth: a.depth,
        n_tau: a.ntau,
        epsilon,
        fit_a0: !a.no_a0,
        seed: a.seed,
        early_stop_on_certificate: !a.no_certificate_stop,
    };
    let (model, trace) = train(&data, &costs, &cfg)?;
    let (best_rounds, validation_risk) = match &a.val {
        Some(path) => {
            let val = load_dataset(path, &a.data.options(Some(loaded.classes.clone()))?)?.dataset()?;
            let best = select_rounds(&model, &val, &costs)?;
            (Some(best), Some(evaluate(&model.truncated(best), &val, &costs)?.risk))
        }
        None => (None, None),
    };
    let last = trace.rounds.last();
    let report = TrainReport {
        n: data.len(),
        d: data.n_features(),
        k: data.n_classes(),
        classes: loaded.classes.clone(),
        config: cfg.fingerprint(),
        rounds_trained: model.n_rounds(),
        stop: match trace.stop {
            Some(StopReason::Certificate) => "certificate",
            Some(StopReason::LossFloor) => "loss_floor",
            _ => "round_budget",
        }
        .into(),
        loss: trace.final_loss(),
        l_star: trace.l_star,
        l_bullet: trace.l_bullet,
        train_error: last.map_or_else(|| evaluate(&model, &data, &costs).map(|e| e.error), |r| Ok(r.train_error))?,
        train_risk: last.map_or_else(|| evaluate(&model, &data, &costs).map(|e| e.risk), |r| Ok(r.train_risk))?,
        cost_checksum: cost_checksum(&costs),
        best_rounds,
        validation_risk,
    };
    save_model(&a.out, &ModelFile { classes: loaded.classes, config: cfg.fingerprint(), model })?;
    if let Some(p) = &a.trace {
        write_trace(p, &trace)?;
    }
    emit(&json(&report), a.report.as_deref())?;
    Ok(0)
}

fn model_rounds(file: ModelFile, rounds: Option<usize>) -> ModelFile {
    match rounds {
        Some(t) => ModelFile { model: file.model.truncated(t), ..file },
        None => file,
    }
}

fn cmd_predict(a: &PredictArgs) -> Result<i32> {
    let file = model_rounds(load_model(&a.model)?, a.rounds);
    let spec: LabelSpec = a.labels.parse()?;
    let options = DatasetOptions { labels: spec.clone(), has_header: a.header, classes: Some(file.classes.clone()) };
    // label tokens are skipped, so unknown ones must not abort prediction
    let options = if spec == LabelSpec::None { options } else { DatasetOptions { classes: None, ..options } };
    let loaded = load_dataset(&a.data, &options)?;
    let mut out = String::from("label");
    for c in &file.classes {
        out.push_str(&format!(",score_{c}"));
    }
    out.push('\n');
    for x in loaded.rows() {
        let h = file.model.scores(x)?;
        out.push_str(&file.classes[argmax(&h)]);
        for v in &h {
            out.push_str(&format!(",{v:?}"));
        }
        out.push('\n');
    }
    emit(&out, a.out.as_deref())?;
    Ok(0)
}

fn cmd_eval(a: &EvalArgs) -> Result<i32> {
    let file = model_rounds(load_model(&a.model)?, a.rounds);
    let data = load_dataset(&a.data.data, &a.data.options(Some(file.classes.clone()))?)?.dataset()?;
    let costs = load_costs_or_uniform(a.costs.as_deref(), file.classes.len())?;
    let eval = evaluate(&file.model, &data, &costs)?;
    emit(&json(&EvalReport::new(&eval, &file.classes, file.model.n_rounds(), &costs)), a.out.as_deref())?;
    Ok(0)
}

fn load_spec(path: Option<&Path>) -> Result<Option<MixtureSpec>> {
    path.map(|p| {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Io { path: p.to_path_buf(), source: e })?;
        MixtureSpec::parse(&text)
    })
    .transpose()
}

fn cmd_synth(a: &SynthArgs) -> Result<i32> {
    let mut spec = match load_spec(a.spec.as_deref())? {
        Some(s) => s,
        None => MixtureSpec::random(&MixtureParams::default(), a.seed.unwrap_or(0))?,
    };
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let (train_set, test_set) = gen_dataset(&spec)?;
    let tokens = class_tokens(spec.classes);
    write_dataset(&a.train_out, &train_set, &tokens)?;
    write_dataset(&a.test_out, &test_set, &tokens)?;
    if let Some(p) = &a.costs_out {
        save_costs(p, &gen_normalized_cost_matrix(spec.classes, a.cost_seed, train_set.labels())?)?;
    }
    Ok(0)
}

fn cmd_fig3(a: &Fig3Args) -> Result<i32> {
    let mixture = match &a.spec {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io { path: p.clone(), source: e })?;
            MixtureParams::parse(&text)?
        }
        None => MixtureParams::default(),
    };
    let cfg = Fig3Config {
        datasets: a.datasets,
        matrices: a.matrices,
        rounds: a.rounds,
        depth: a.depth,
        n_tau: a.ntau,
        fit_a0: !a.no_a0,
        seed: a.seed,
        mixture,
    };
    let table = run_fig3(&cfg)?;
    emit(&table.to_csv(), Some(&a.out))?;
    println!("trials {} rebel_win_fraction {:.4}", table.trials.len(), table.win_fraction());
    println!("two-step baseline: REBEL trained with uniform costs, softmax posterior, least expected cost");
    Ok(0)
}

fn cmd_oracle(a: &OracleArgs) -> Result<i32> {
    let cfg = OracleConfig {
        trials: a.trials,
        rounds: a.rounds,
        seed: a.seed,
        mismatch_smoothing: a.debug_mismatch_smoothing,
        ..OracleConfig::default()
    };
    let report = run_oracle(&cfg)?;
    match &report.divergence {
        None => {
            println!(
                "pass: {} trials, {} rounds, max |a1 - alpha| {:e}, max |H1 + H2| {:e}",
                report.trials, report.rounds_checked, report.max_alpha_gap, report.max_antisymmetry
            );
            Ok(0)
        }
        Some(d) => {
            eprintln!("fail: {d}");
            Ok(1)
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Fig3(a) => cmd_fig3(a),
        Command::OracleCheck(a) => cmd_oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(Error::Invalid(format!("cannot start worker pool: {e}"))),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
