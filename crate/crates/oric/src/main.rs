use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oric::error::{DataError, Result};
use oric::oric_core::chain::ChainEngine;
use oric::oric_core::metrics::jaccard;
use oric::oric_core::rng::{derive_seed, substream};
use oric::oric_core::synth::{generate_period, StreamSpec};
use oric::oric_core::{
    plan, ChainConfig, ModelConfig, OricError, OricModel, Pattern, PlannerSpec, SequentialEngine,
};
use oric::{report, CsvLayout, EncoderState, IngestState, ParallelEngine};

#[derive(Parser)]
#[command(
    name = "oric",
    version,
    about = "Online mining of categorical feature interactions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create an empty model and its encoder sidecar.
    Init(InitArgs),
    /// Fold one batch file into the model.
    Update(UpdateArgs),
    /// Rank and prune the tracked interactions.
    Select(SelectArgs),
    /// Write binary interaction columns for a batch.
    Emit(EmitArgs),
    /// Choose chain length and count for detection budgets.
    Plan(PlanArgs),
    /// Generate a synthetic stream with planted interactions.
    Simulate(SimulateArgs),
    /// Compare selections, or model estimates against exact counts.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Rows,
}

#[derive(Args)]
struct InitArgs {
    #[arg(long)]
    model: PathBuf,
    /// CSV file whose header defines the schema.
    #[arg(long, required_unless_present = "schema")]
    data: Option<PathBuf>,
    /// Comma-separated categorical column names, instead of --data.
    #[arg(long, value_delimiter = ',', conflicts_with = "data")]
    schema: Option<Vec<String>>,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Numeric columns carried along but not mined.
    #[arg(long = "numeric", value_delimiter = ',')]
    numeric_columns: Vec<String>,
    /// Categories seen fewer times than this are encoded as "others".
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    #[arg(long, short = 'M', default_value_t = 10_000)]
    num_chains: u32,
    #[arg(long, short = 'L', default_value_t = 32)]
    max_length: u32,
    #[arg(long, default_value_t = 4)]
    max_tail_size: u32,
    #[arg(long, default_value_t = 100)]
    d_freq: u32,
    #[arg(long, default_value_t = 50)]
    d_conf: u32,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct UpdateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Worker threads for chain generation; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    d_freq: Option<u32>,
    #[arg(long)]
    d_conf: Option<u32>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Also list interactions removed by pruning.
    #[arg(long)]
    include_pruned: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmitArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Selection file in rows format; defaults to the model's own selection.
    #[arg(long)]
    selection: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: f64,
    #[arg(long, default_value_t = 0.05)]
    eta1: f64,
    #[arg(long, default_value_t = 0.05)]
    eta2: f64,
    #[arg(long, default_value_t = 1)]
    horizon: u32,
    #[arg(long, default_value_t = oric::oric_core::DEFAULT_L_MAX)]
    l_max: u32,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 20)]
    features: u32,
    #[arg(long, default_value_t = 10)]
    categories: u32,
    #[arg(long, default_value_t = 10_000)]
    rows: usize,
    #[arg(long, default_value_t = 5)]
    horizon: usize,
    #[arg(long, default_value_t = 0.3)]
    positive_rate: f64,
    /// Number of planted patterns.
    #[arg(long, default_value_t = 5)]
    planted: usize,
    /// Items per planted pattern.
    #[arg(long, default_value_t = 2)]
    order: u32,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.2, 0.6])]
    freq_pos: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.0, 0.1])]
    freq_neg: Vec<f64>,
    #[arg(long, default_value = "label")]
    label_column: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Jaccard similarity of two selection files (rows format).
    Jaccard {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Estimated against exact frequencies and confidence on one batch.
    Exact {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Patterns to compare (rows format); defaults to the model's selection.
        #[arg(long)]
        selection: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Keep the message, drop clap's usage block and tips.
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .map(str::trim)
                .collect();
            eprintln!(
                "error: usage: {}",
                message.join(" ").trim_start_matches("error: ")
            );
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Init(a) => cmd_init(a),
        Command::Update(a) => cmd_update(a),
        Command::Select(a) => cmd_select(a),
        Command::Emit(a) => cmd_emit(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Eval(EvalCommand::Jaccard { a, b }) => cmd_jaccard(&a, &b),
        Command::Eval(EvalCommand::Exact {
            model,
            data,
            selection,
            format,
        }) => cmd_exact(&model, &data, selection.as_deref(), format),
    }
}

fn invalid(msg: &'static str) -> DataError {
    DataError::Core(OricError::InvalidConfig(msg))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| DataError::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| DataError::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn load(model_path: &Path) -> Result<(OricModel, IngestState)> {
    let model = oric::load_model_from(model_path)?;
    let state = IngestState::load(&IngestState::sidecar_path(model_path))?;
    Ok((model, state))
}

fn cmd_init(a: InitArgs) -> Result<String> {
    let layout = CsvLayout {
        label_column: a.label_column,
        numeric_columns: a.numeric_columns,
    };
    let schema = match (&a.data, a.schema) {
        (Some(path), _) => oric::read_schema(path, &layout)?,
        (None, Some(names)) => names,
        (None, None) => return Err(invalid("init needs --data or --schema")),
    };
    let config = ModelConfig {
        chain: ChainConfig {
            num_chains: a.num_chains,
            max_length: a.max_length,
            max_tail_size: a.max_tail_size,
            rng_seed: a.seed,
        },
        d_freq: a.d_freq,
        d_conf: a.d_conf,
        gamma: a.gamma,
    };
    let model = OricModel::new(config, schema.clone())?;
    let mut encoder = EncoderState::new(a.min_count);
    encoder.bind(&schema)?;
    oric::save_model_to(&model, &a.model)?;
    IngestState { layout, encoder }.save(&IngestState::sidecar_path(&a.model))?;

    let mut out = format!(
        "initialized {} with {} categorical features\n",
        a.model.display(),
        schema.len()
    );
    for w in model.config().warnings() {
        out.push_str(&format!("warning: {w}\n"));
    }
    Ok(out)
}

fn cmd_update(a: UpdateArgs) -> Result<String> {
    let (mut model, mut state) = load(&a.model)?;
    let period = model.period() + 1;
    let (batch, encoder) = oric::ingest_csv(&a.data, &state.layout, &state.encoder, period)?;
    let engine: Box<dyn ChainEngine + Send + Sync> = match a.threads {
        1 => Box::new(SequentialEngine),
        _ => Box::new(ParallelEngine),
    };
    let report = if a.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.threads)
            .build()
            .map_err(|_| invalid("could not start worker threads"))?;
        pool.install(|| model.update_with(&batch, engine.as_ref()))?
    } else {
        model.update_with(&batch, engine.as_ref())?
    };
    state.encoder = encoder;
    oric::save_model_to(&model, &a.model)?;
    state.save(&IngestState::sidecar_path(&a.model))?;
    Ok(report::update_summary(&report))
}

fn cmd_select(a: SelectArgs) -> Result<String> {
    let (model, state) = load(&a.model)?;
    let d_freq = a.d_freq.unwrap_or(model.config().d_freq);
    let d_conf = a.d_conf.unwrap_or(model.config().d_conf);
    let selection = model.select_top(d_freq, d_conf)?;
    let text = match a.format {
        Format::Table => {
            report::selection_table(&selection, Some(&state.encoder), a.include_pruned)
        }
        Format::Rows => report::selection_tsv(&selection, Some(&state.encoder), a.include_pruned),
    };
    match a.out {
        Some(path) => {
            write_file(&path, text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn patterns_for(model: &OricModel, selection: Option<&Path>) -> Result<Vec<Pattern>> {
    match selection {
        Some(path) => report::parse_selection(&read_text(path)?),
        None => Ok(model.select()?.selected_patterns()),
    }
}

fn cmd_emit(a: EmitArgs) -> Result<String> {
    let (model, state) = load(&a.model)?;
    let patterns = patterns_for(&model, a.selection.as_deref())?;
    // Encoding only; the sidecar is left as it was.
    let (batch, _) = oric::ingest_csv(&a.data, &state.layout, &state.encoder, model.period())?;
    let emitted = oric::emit_interaction_features(&batch, &patterns, &a.out)?;
    let mut out = format!("rows\t{}\ncolumn\tpositive_rate\n", emitted.rows);
    for (p, rate) in &emitted.positive_rates {
        out.push_str(&format!("{p}\t{rate}\n"));
    }
    Ok(out)
}

fn cmd_plan(a: PlanArgs) -> Result<String> {
    let spec = PlannerSpec {
        theta: a.theta,
        eta1: a.eta1,
        eta2: a.eta2,
        p1: a.p1.unwrap_or(a.theta),
        p2: a.p2,
        horizon: a.horizon,
    };
    Ok(report::plan_summary(&plan(&spec, a.l_max)?))
}

fn cmd_simulate(a: SimulateArgs) -> Result<String> {
    let mut spec = StreamSpec {
        num_features: a.features,
        categories_per_feature: a.categories,
        rows_per_period: a.rows,
        horizon: a.horizon,
        positive_rate: a.positive_rate,
        planted: Vec::new(),
        rng_seed: a.seed,
    };
    // Periods use labels 1..=horizon, so label 0 is free for planting.
    let mut rng = substream(derive_seed(a.seed, &[0]), 0);
    spec.plant_random(
        a.planted,
        a.order,
        (a.freq_pos[0], a.freq_pos[1]),
        (a.freq_neg[0], a.freq_neg[1]),
        &mut rng,
    )?;
    fs::create_dir_all(&a.out_dir).map_err(|e| DataError::Io {
        path: a.out_dir.clone(),
        source: e,
    })?;

    let json = serde_json::to_string_pretty(&spec).expect("stream spec serializes");
    write_file(&a.out_dir.join("spec.json"), (json + "\n").as_bytes())?;

    let schema = spec.schema();
    let mut truth = String::from("pattern\tdescription\tfreq_pos\tfreq_neg\n");
    for p in &spec.planted {
        let described: Vec<String> = p
            .pattern
            .items()
            .iter()
            .map(|i| format!("{}={}", schema[i.feature as usize], i.category))
            .collect();
        let join = |s: &[f64]| s.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        truth.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            p.pattern,
            described.join(" & "),
            join(&p.freq_schedule_pos),
            join(&p.freq_schedule_neg)
        ));
    }
    write_file(&a.out_dir.join("planted.tsv"), truth.as_bytes())?;

    let mut out = String::new();
    for t in 1..=spec.horizon {
        let batch = generate_period(&spec, t)?;
        let path = a.out_dir.join(format!("period_{t:03}.csv"));
        let mut buf = Vec::new();
        oric::write_batch_csv(&batch, &a.label_column, &mut buf)?;
        write_file(&path, &buf)?;
        out.push_str(&format!("{}\n", path.display()));
    }
    Ok(out)
}

fn cmd_jaccard(a: &Path, b: &Path) -> Result<String> {
    let sa = report::parse_selection(&read_text(a)?)?;
    let sb = report::parse_selection(&read_text(b)?)?;
    Ok(format!("jaccard\t{}\n", jaccard(&sa, &sb)))
}

fn cmd_exact(
    model_path: &Path,
    data: &Path,
    selection: Option<&Path>,
    format: Format,
) -> Result<String> {
    let (model, state) = load(model_path)?;
    let patterns = patterns_for(&model, selection)?;
    let (batch, encoder) = oric::ingest_csv(data, &state.layout, &state.encoder, model.period())?;
    let rows = report::compare_with_exact(&model, &batch, &patterns)?;
    Ok(match format {
        Format::Rows => report::comparison_tsv(&rows, Some(&encoder)),
        Format::Table => report::comparison_table(&rows, Some(&encoder)),
    })
}
