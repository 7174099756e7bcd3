use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use sfr_kit::codec::{find_object, Task, TaskSchema};
use sfr_kit::data::{self, DatasetPool, MixSpec, PromptMode};
use sfr_kit::eval::{self, CharTokens, EvalRecord, TokenCounter, WhitespaceTokens};
use sfr_kit::grpo::{default_phase_plan, group_advantages, DEFAULT_EPSILON};
use sfr_kit::reward::{score, SfrConfig};
use sfr_kit::service::{default_workers, serve_stdio, serve_tcp, RewardService, SchemaRegistry};

#[derive(Parser)]
#[command(name = "sfr-kit", version, about = "Structured-extraction rewards, advantages and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one prediction against its gold output.
    Score(ScoreArgs),
    /// Group-relative advantages for a list of rewards.
    Advantage(AdvantageArgs),
    /// Evaluate a records file.
    Eval(EvalArgs),
    /// Rewrite targets in concise form.
    Streamline(StreamlineArgs),
    /// Sample a training mixture from dataset pools.
    Mix(MixArgs),
    /// Render an instruction prompt.
    Render(RenderArgs),
    /// Token-length percentile buckets.
    Stats(StatsArgs),
    /// Print the default three-phase rollout plan.
    Plan,
    /// Run the reward server.
    Serve(ServeArgs),
}

#[derive(Args)]
struct SchemaArgs {
    /// Schema file ({task, labels, roles}).
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long, value_parser = parse_task)]
    task: Option<Task>,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    schema: SchemaArgs,
    /// File holding the gold output.
    #[arg(long)]
    gold: PathBuf,
    /// File holding the predicted output.
    #[arg(long)]
    pred: PathBuf,
    /// SfrConfig JSON; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Clamp the total to [0, 1].
    #[arg(long)]
    clip: bool,
}

#[derive(Args)]
struct AdvantageArgs {
    /// Comma-separated rewards.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    rewards: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Micro,
    Trigger,
    Argument,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    schema: SchemaArgs,
    /// Line-delimited {id, gold, pred, source} records.
    #[arg(long)]
    records: PathBuf,
    /// Defaults to micro for ner/re and trigger + argument for ee.
    #[arg(long, value_enum)]
    metric: Option<Metric>,
    /// Slots for the exact metric (comma-separated).
    #[arg(long, value_delimiter = ',')]
    slots: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct StreamlineArgs {
    #[arg(long)]
    schema: PathBuf,
    /// Targets file: JSON objects, one per line (pretty-printed objects are accepted too).
    #[arg(long)]
    input: PathBuf,
    /// Treat each line as a record and streamline this string field.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cm,
    Sa,
}

#[derive(Args)]
struct MixArgs {
    /// Pool file of {input, target} lines; repeat once per pool.
    #[arg(long = "pool", required = true)]
    pools: Vec<PathBuf>,
    /// Schema for each pool, in the same order.
    #[arg(long = "schema", required = true)]
    schemas: Vec<PathBuf>,
    /// Ratio such as 2:8 or 3:3:4.
    #[arg(long)]
    ratio: String,
    #[arg(long)]
    total: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// cm: ratio mixture of raw targets; sa: streamlined RE/EE subset.
    #[arg(long, value_enum, default_value = "cm")]
    mode: Mode,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    schema: PathBuf,
    /// Input text.
    #[arg(long, conflicts_with = "input_file")]
    input: Option<String>,
    #[arg(long)]
    input_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "cm")]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tokenizer {
    Whitespace,
    Chars,
}

#[derive(Args)]
struct StatsArgs {
    /// Lines holding JSON strings or objects.
    #[arg(long)]
    input: PathBuf,
    /// Field to measure when a line is an object.
    #[arg(long, default_value = "target")]
    field: String,
    #[arg(long, value_enum, default_value = "whitespace")]
    tokenizer: Tokenizer,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of schema files; ids are file stems.
    #[arg(long)]
    schemas: PathBuf,
    /// stdio or tcp:PORT.
    #[arg(long, default_value = "stdio")]
    transport: String,
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_task(s: &str) -> Result<Task, String> {
    s.parse().map_err(|e: sfr_kit::codec::SchemaError| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(usage) = e.downcast_ref::<UsageError>() {
                eprintln!("error: {}", usage.0);
                ExitCode::from(1)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Score(args) => cmd_score(args),
        Command::Advantage(args) => cmd_advantage(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Streamline(args) => cmd_streamline(args),
        Command::Mix(args) => cmd_mix(args),
        Command::Render(args) => cmd_render(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Plan => print_json(&default_phase_plan()),
        Command::Serve(args) => cmd_serve(args),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn load_config(path: Option<&Path>) -> Result<SfrConfig> {
    match path {
        Some(p) => SfrConfig::load(p).with_context(|| format!("loading config {}", p.display())),
        None => Ok(SfrConfig::default()),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Loads `--schema`, or infers one from the keys of the given outputs when only `--task` is set.
fn resolve_schema(args: &SchemaArgs, texts: &[&str]) -> Result<TaskSchema> {
    match (&args.schema, args.task) {
        (Some(path), task) => {
            let schema = TaskSchema::load(path).with_context(|| format!("loading schema {}", path.display()))?;
            if let Some(task) = task {
                schema.expect_task(task)?;
            }
            Ok(schema)
        }
        (None, Some(task)) => {
            let mut labels: Vec<String> = Vec::new();
            for text in texts {
                if let Some((map, _)) = find_object(text) {
                    for key in map.keys() {
                        if !labels.contains(key) {
                            labels.push(key.clone());
                        }
                    }
                }
            }
            if labels.is_empty() {
                bail!("cannot infer labels: no keys in the given outputs; pass --schema");
            }
            Ok(TaskSchema::new(task, labels, vec![])?)
        }
        (None, None) => Err(usage("one of --schema or --task is required")),
    }
}

fn cmd_score(args: ScoreArgs) -> Result<()> {
    if args.schema.schema.is_none() && args.schema.task.is_none() {
        return Err(usage("one of --schema or --task is required"));
    }
    let gold = read_text(&args.gold)?;
    let pred = read_text(&args.pred)?;
    let schema = resolve_schema(&args.schema, &[&gold, &pred])?;
    let mut cfg = load_config(args.config.as_deref())?;
    cfg.clip_to_unit |= args.clip;
    let breakdown = score(&gold, &pred, &schema, &cfg).with_context(|| format!("gold {}", args.gold.display()))?;
    print_json(&breakdown)
}

fn cmd_advantage(args: AdvantageArgs) -> Result<()> {
    if args.rewards.is_empty() {
        return Err(usage("--rewards needs at least one value"));
    }
    let advantages = group_advantages(&args.rewards, args.epsilon);
    if args.json {
        print_json(&advantages)
    } else {
        let line = advantages
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",");
        println!("{line}");
        Ok(())
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let records: Vec<EvalRecord> =
        eval::read_records(open(&args.records)?).with_context(|| format!("reading {}", args.records.display()))?;
    if let Some(Metric::Exact) = args.metric {
        if args.slots.is_empty() {
            return Err(usage("--metric exact needs --slots"));
        }
        let acc = eval::exact_acc(&records, &args.slots)?;
        return match args.format {
            Format::Json => print_json(&acc),
            Format::Table => {
                let width = args.slots.iter().map(|s| s.len()).max().unwrap_or(4).max(4);
                println!("{:<width$}  {:>8}", "slot", "exact");
                for (slot, v) in &acc {
                    println!("{slot:<width$}  {v:>8.4}");
                }
                Ok(())
            }
        };
    }
    let texts: Vec<&str> = records.iter().map(|r| r.gold.as_str()).collect();
    let schema = resolve_schema(&args.schema, &texts)?;
    let metrics = match (args.metric, schema.task) {
        (Some(Metric::Micro), _) | (None, Task::Ner | Task::Re) => vec![eval::micro_f1(&records, &schema)?],
        (Some(Metric::Trigger), _) => vec![eval::trigger_f1(&records, &schema)?],
        (Some(Metric::Argument), _) => vec![eval::argument_f1(&records, &schema)?],
        (None, Task::Ee) => vec![
            eval::trigger_f1(&records, &schema)?,
            eval::argument_f1(&records, &schema)?,
        ],
        (Some(Metric::Exact), _) => unreachable!(),
    };
    match args.format {
        Format::Json if metrics.len() == 1 => print_json(&metrics[0]),
        Format::Json => print_json(&metrics),
        Format::Table => {
            for m in &metrics {
                print!("{}", m.to_table());
            }
            Ok(())
        }
    }
}

/// Yields each JSON value in the file with the line it starts on.
fn json_values(path: &Path) -> Result<Vec<(usize, Value)>> {
    let text = read_text(path)?;
    let mut values = Vec::new();
    let mut stream = serde_json::Deserializer::from_str(&text).into_iter::<Value>();
    loop {
        let start = stream.byte_offset();
        match stream.next() {
            None => break,
            Some(Ok(v)) => {
                let skipped = text[start..].len() - text[start..].trim_start().len();
                values.push((line_of(&text, start + skipped), v));
            }
            Some(Err(e)) => bail!("{} line {}: {e}", path.display(), e.line()),
        }
    }
    Ok(values)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
}

fn cmd_streamline(args: StreamlineArgs) -> Result<()> {
    let schema = TaskSchema::load(&args.schema).with_context(|| format!("loading schema {}", args.schema.display()))?;
    let mut out = io::stdout().lock();
    for (line, value) in json_values(&args.input)? {
        let here = || format!("{} line {line}", args.input.display());
        match &args.field {
            Some(field) => {
                let mut record = value;
                let target = record
                    .get(field)
                    .and_then(Value::as_str)
                    .with_context(|| format!("{}: missing string field `{field}`", here()))?;
                let concise = data::streamline(target, &schema).with_context(here)?;
                record[field.as_str()] = Value::String(concise);
                serde_json::to_writer(&mut out, &record)?;
                writeln!(out)?;
            }
            None => {
                let target = serde_json::to_string(&value)?;
                let concise = data::streamline(&target, &schema).with_context(here)?;
                writeln!(out, "{concise}")?;
            }
        }
    }
    Ok(())
}

fn cmd_mix(args: MixArgs) -> Result<()> {
    if args.pools.len() != args.schemas.len() {
        return Err(usage("give exactly one --schema per --pool"));
    }
    let ratio = data::parse_ratio(&args.ratio).map_err(|e| usage(e.to_string()))?;
    if ratio.len() != args.pools.len() {
        return Err(usage(format!(
            "--ratio has {} parts for {} pools",
            ratio.len(),
            args.pools.len()
        )));
    }
    let mut pools = Vec::new();
    for (path, schema_path) in args.pools.iter().zip(&args.schemas) {
        let schema =
            TaskSchema::load(schema_path).with_context(|| format!("loading schema {}", schema_path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        pools.push(DatasetPool::read(name, schema, open(path)?).with_context(|| format!("reading {}", path.display()))?);
    }
    let items = match args.mode {
        Mode::Cm => data::mix_phases(&MixSpec {
            pools: pools.iter().zip(ratio).collect(),
            total: args.total,
            seed: args.seed,
        })?,
        Mode::Sa => {
            let [re, ee] = pools.as_slice() else {
                return Err(usage("--mode sa takes exactly two pools: RE then EE"));
            };
            if re.task() != Task::Re || ee.task() != Task::Ee {
                return Err(usage("--mode sa takes an RE pool followed by an EE pool"));
            }
            let shares = data::allocate(&ratio, args.total)?;
            data::sample_sa(re, ee, shares[0], shares[1], args.seed)?
        }
    };
    match &args.out {
        Some(path) => data::write_items(&items, io::BufWriter::new(File::create(path)?))?,
        None => data::write_items(&items, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    let schema = TaskSchema::load(&args.schema).with_context(|| format!("loading schema {}", args.schema.display()))?;
    let input = match (&args.input, &args.input_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => read_text(path)?.trim_end_matches('\n').to_string(),
        (None, None) => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            text.trim_end_matches('\n').to_string()
        }
    };
    let mode = match args.mode {
        Mode::Cm => PromptMode::Cm,
        Mode::Sa => PromptMode::Sa,
    };
    println!("{}", data::render_prompt(&schema, &input, mode));
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let mut texts = Vec::new();
    for (i, line) in open(&args.input)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .with_context(|| format!("{} line {}", args.input.display(), i + 1))?;
        let text = match value {
            Value::String(s) => s,
            Value::Object(mut map) => match map.remove(&args.field) {
                Some(Value::String(s)) => s,
                Some(other) => other.to_string(),
                None => bail!("{} line {}: no `{}` field", args.input.display(), i + 1, args.field),
            },
            other => other.to_string(),
        };
        texts.push(text);
    }
    let counter: &dyn TokenCounter = match args.tokenizer {
        Tokenizer::Whitespace => &WhitespaceTokens,
        Tokenizer::Chars => &CharTokens,
    };
    let buckets = eval::length_buckets(&texts, counter)?;
    match args.format {
        Format::Json => print_json(&buckets),
        Format::Table => {
            print!("{}", buckets.to_table());
            Ok(())
        }
    }
}

fn cmd_serve(args: ServeArgs) -> Result<()> {
    let config = load_config(args.config.as_deref())?;
    let registry = SchemaRegistry::load_dir(&args.schemas)
        .with_context(|| format!("loading schemas from {}", args.schemas.display()))?;
    let service = RewardService::new(registry, config);
    let workers = args.workers.unwrap_or_else(default_workers);
    match args.transport.as_str() {
        "stdio" => {
            let stats = serve_stdio(&service, workers).context("transport failure")?;
            eprintln!("sfr-kit: served {} requests ({} errors)", stats.requests, stats.errors);
            Ok(())
        }
        other => {
            let Some(port) = other.strip_prefix("tcp:") else {
                return Err(usage(format!("unknown transport `{other}` (expected stdio or tcp:PORT)")));
            };
            let port: u16 = port.parse().map_err(|_| usage(format!("bad port `{port}`")))?;
            let listener = TcpListener::bind(("0.0.0.0", port)).with_context(|| format!("binding port {port}"))?;
            eprintln!("sfr-kit: listening on {}", listener.local_addr()?);
            serve_tcp(&service, listener, workers, None).context("transport failure")
        }
    }
}
