use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use txgraph::explorer::{
    fetch_range, Checkpoint, ExplorerClient, ExplorerConfig, ExplorerError, HttpResponse, SystemClock, Transport,
    TransportError,
};
use txgraph::fitting::{
    align_with_price, fit_power_law, fit_power_model, rgr, scan_x_min, PowerLawMethod, PriceSeries,
};
use txgraph::graph::snapshot::GraphSnapshot;
use txgraph::ingest::{
    infer_genesis, read_records, CsvWriter, DataSource, DatasetManifest, JsonlWriter, ParseOptions, RecordFormat,
    RecordSink,
};
use txgraph::metrics::CliqueBudget;
use txgraph::pipeline::{
    build_snapshot, load_price, load_records, run_pipeline, sample_cmtg_edges, write_report, InputSource,
    MetricFlags, PipelineError, RunConfig, XMinPolicy,
};
use txgraph::synthetic::{baseline, hub_month, BaselineConfig, HubConfig};
use txgraph::{MonthIndex, YearMonth};

/// Failure with its exit status: 1 for bad input or usage, 2 for runtime.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn runtime(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::runtime(format!("{}: {e}", path.display()))
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_input_error() {
            Failure::input(e)
        } else {
            Failure::runtime(e)
        }
    }
}

impl From<ExplorerError> for Failure {
    fn from(e: ExplorerError) -> Self {
        match e {
            ExplorerError::InvalidRange { .. } | ExplorerError::Config(_) => Failure::input(e),
            _ => Failure::runtime(e),
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "txgraph", version, about = "Monthly transaction graphs for UTXO coins")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate record files and optionally convert them.
    Ingest(IngestArgs),
    /// Download blocks from a block explorer as records.
    Fetch(FetchArgs),
    /// Build the monthly graphs and save them as a snapshot.
    Build(BuildArgs),
    /// Compute the monthly metrics and fits and write the report.
    Run(RunArgs),
    /// Export a uniform sample of cumulative-graph edges.
    SampleEdges(SampleArgs),
    /// Standalone fits on CSV input.
    #[command(subcommand)]
    Fit(FitCommand),
    /// Correlate a monthly series with the price.
    Correlate(CorrelateArgs),
    /// Generate synthetic records.
    Synth(SynthArgs),
}

#[derive(Args)]
struct RecordInputs {
    /// Record files (.csv or JSONL), concatenated in order.
    inputs: Vec<PathBuf>,
    /// Override the format inferred from each extension.
    #[arg(long, value_parser = parse_format)]
    input_format: Option<RecordFormat>,
    /// Skip malformed records instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    records: RecordInputs,
    /// Write all records here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; inferred from `--out` when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<RecordFormat>,
    /// Write a dataset manifest here.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value = "unknown")]
    coin: String,
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    base_url: String,
    #[arg(long)]
    coin: String,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long)]
    out: PathBuf,
    /// Output format; inferred from `--out` when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<RecordFormat>,
    /// Resume from and update this checkpoint file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    rps: f64,
    #[arg(long, default_value_t = 5)]
    max_retries: u32,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    records: RecordInputs,
    #[arg(long)]
    out: PathBuf,
    /// Month 0 (YYYY-MM); defaults to the month of the earliest record.
    #[arg(long)]
    genesis_month: Option<YearMonth>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mle,
    Approximate,
}

impl From<MethodArg> for PowerLawMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mle => PowerLawMethod::DiscreteMle,
            MethodArg::Approximate => PowerLawMethod::Approximate,
        }
    }
}

#[derive(Args)]
struct XMinArgs {
    #[arg(long, default_value_t = 1, conflicts_with = "scan_x_min")]
    x_min: u64,
    /// Choose x_min by KS distance.
    #[arg(long)]
    scan_x_min: bool,
    #[arg(long, default_value_t = 50)]
    scan_candidates: usize,
    #[arg(long, default_value_t = 50)]
    scan_min_tail: usize,
    #[arg(long, value_enum, default_value = "mle")]
    method: MethodArg,
}

impl XMinArgs {
    fn policy(&self) -> XMinPolicy {
        if self.scan_x_min {
            XMinPolicy::KsScan {
                max_candidates: self.scan_candidates,
                min_tail: self.scan_min_tail,
            }
        } else {
            XMinPolicy::Fixed(self.x_min)
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    records: RecordInputs,
    /// Read graphs from a snapshot instead of record files.
    #[arg(long, conflicts_with = "inputs")]
    snapshot: Option<PathBuf>,
    /// Monthly price CSV (`month,price`).
    #[arg(long)]
    price: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    genesis_month: Option<YearMonth>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip clustering, clique and assortativity once the cumulative graph
    /// has more nodes than this.
    #[arg(long, default_value_t = 1_000_000)]
    clique_cap: usize,
    /// Triad samples per month.
    #[arg(long)]
    samples: Option<u64>,
    /// Clique search time limit per month in seconds; 0 disables it.
    #[arg(long, default_value_t = 60.0)]
    clique_seconds: f64,
    #[arg(long)]
    clique_steps: Option<u64>,
    #[command(flatten)]
    fit: XMinArgs,
    #[arg(long, default_value_t = 2)]
    anomaly_window: usize,
    #[arg(long, default_value_t = 5.0)]
    anomaly_threshold: f64,
    #[arg(long)]
    no_clustering: bool,
    #[arg(long)]
    no_clique: bool,
    #[arg(long)]
    no_assortativity: bool,
    #[arg(long)]
    no_power_law: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Cumulative graph through this month (YYYY-MM); defaults to the last.
    #[arg(long)]
    month: Option<YearMonth>,
    #[arg(short, default_value_t = 5000)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FitCommand {
    /// Degree exponent from a file of non-negative integers, one per line.
    PowerLaw {
        degrees: PathBuf,
        #[command(flatten)]
        fit: XMinArgs,
    },
    /// E = a·V^b from a `nodes,edges` CSV.
    PowerModel { points: PathBuf },
    /// Relative growth rate between two sizes.
    Rgr {
        #[arg(long)]
        s1: f64,
        #[arg(long)]
        t1: u32,
        #[arg(long)]
        s2: f64,
        #[arg(long)]
        t2: u32,
    },
}

#[derive(Args)]
struct CorrelateArgs {
    /// `month,value` CSV.
    series: PathBuf,
    /// `month,price` CSV.
    #[arg(long)]
    price: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    start: YearMonth,
    #[arg(long)]
    months: u32,
    #[arg(long)]
    transactions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add a hub-and-spoke burst in this month.
    #[arg(long)]
    hub_month: Option<YearMonth>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_format)]
    format: Option<RecordFormat>,
}

fn parse_format(s: &str) -> Result<RecordFormat, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Fetch(a) => fetch(a),
        Command::Build(a) => build(a),
        Command::Run(a) => run(a),
        Command::SampleEdges(a) => sample(a),
        Command::Fit(c) => fit(c),
        Command::Correlate(a) => correlate(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn require_inputs(r: &RecordInputs) -> CliResult {
    if r.inputs.is_empty() {
        return Err(Failure::input("no input files given"));
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::io(path, e))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn ingest(a: IngestArgs) -> CliResult {
    require_inputs(&a.records)?;
    let mut records = Vec::new();
    let mut skipped = 0;
    for path in &a.records.inputs {
        let fmt = a.records.input_format.unwrap_or_else(|| RecordFormat::from_path(path));
        let parsed = read_records(path, fmt, ParseOptions { lenient: a.records.lenient })
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        skipped += parsed.skipped;
        records.extend(parsed.records);
    }
    let genesis = infer_genesis(&records).map_err(Failure::input)?;
    if let Some(out) = &a.out {
        let fmt = a.format.unwrap_or_else(|| RecordFormat::from_path(out));
        let file = create(out)?;
        txgraph::ingest::write_records(&records, fmt, file).map_err(|e| Failure::runtime(format!("{}: {e}", out.display())))?;
    }
    if let Some(path) = &a.manifest {
        DatasetManifest {
            coin_name: a.coin.clone(),
            genesis_month: genesis,
            record_count: records.len() as u64,
            source: DataSource::File,
        }
        .write(path)
        .map_err(|e| Failure::io(path, e))?;
    }
    print_json(&json!({
        "records": records.len(),
        "skipped": skipped,
        "genesis_month": genesis,
    }));
    Ok(())
}

/// Blocking HTTP transport.
struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        UreqTransport { agent }
    }
}

impl Transport for UreqTransport {
    fn request(&mut self, method: &str, url: &str, _timeout: Duration) -> Result<HttpResponse, TransportError> {
        if method != "GET" {
            return Err(TransportError::Connection(format!("unsupported method {method}")));
        }
        let mut resp = self.agent.get(url).call().map_err(|e| match e {
            ureq::Error::Timeout(_) => TransportError::Timeout,
            other => TransportError::Connection(other.to_string()),
        })?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Connection(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

fn fetch(a: FetchArgs) -> CliResult {
    if !(a.timeout > 0.0) || !a.timeout.is_finite() {
        return Err(Failure::input("timeout must be positive"));
    }
    let mut config = ExplorerConfig::new(a.base_url.clone(), a.coin.clone());
    config.requests_per_second = a.rps;
    config.max_retries = a.max_retries;
    config.timeout = Duration::from_secs_f64(a.timeout);
    let transport = UreqTransport::new(config.timeout);
    let mut client = ExplorerClient::new(config, transport, SystemClock::default())?;

    // Resuming appends to the records already written.
    let resuming = match &a.checkpoint {
        Some(cp) => Checkpoint::load(cp)?.is_some() && a.out.exists(),
        None => false,
    };
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(resuming)
        .truncate(!resuming)
        .open(&a.out)
        .map_err(|e| Failure::io(&a.out, e))?;
    let out = BufWriter::new(file);
    let fmt = a.format.unwrap_or_else(|| RecordFormat::from_path(&a.out));
    let mut sink: Box<dyn RecordSink> = match (fmt, resuming) {
        (RecordFormat::Jsonl, _) => Box::new(JsonlWriter::new(out)),
        (RecordFormat::Csv, true) => Box::new(CsvWriter::appending(out)),
        (RecordFormat::Csv, false) => Box::new(CsvWriter::new(out)),
    };
    let result = fetch_range(&mut client, a.from, a.to, sink.as_mut(), a.checkpoint.as_deref());
    // Keep whatever was fetched before a failure.
    let flushed = sink.finish();
    let outcome = result?;
    flushed.map_err(|e| Failure::runtime(format!("{}: {e}", a.out.display())))?;

    let mut manifest = outcome.manifest;
    if resuming {
        // Describe the whole file, not just this run's share of it.
        let all = read_records(&a.out, fmt, ParseOptions::default())
            .map_err(|e| Failure::runtime(format!("{}: {e}", a.out.display())))?;
        manifest.record_count = all.records.len() as u64;
        manifest.genesis_month = infer_genesis(&all.records).map_err(Failure::runtime)?;
    }
    if let Some(path) = &a.manifest {
        manifest.write(path).map_err(|e| Failure::io(path, e))?;
    }
    let stats = client.stats();
    print_json(&json!({
        "blocks_fetched": outcome.blocks_fetched,
        "resumed_from": outcome.resumed_from,
        "records": manifest.record_count,
        "genesis_month": manifest.genesis_month,
        "requests": stats.requests,
        "retries": stats.retries,
        "opaque_inputs": outcome.opaque.opaque_inputs,
        "opaque_outputs": outcome.opaque.opaque_outputs,
    }));
    Ok(())
}

fn build(a: BuildArgs) -> CliResult {
    require_inputs(&a.records)?;
    let records = load_records(&a.records.inputs, a.records.input_format, a.records.lenient)?;
    let snapshot = build_snapshot(records, a.genesis_month)?;
    snapshot.save(&a.out).map_err(|e| Failure::runtime(format!("{}: {e}", a.out.display())))?;
    print_json(&json!({
        "genesis_month": snapshot.genesis,
        "months": snapshot.months.len(),
        "addresses": snapshot.table.len(),
    }));
    Ok(())
}

fn run(a: RunArgs) -> CliResult {
    let input = match a.snapshot {
        Some(path) => InputSource::Snapshot(path),
        None => {
            require_inputs(&a.records)?;
            InputSource::Records {
                paths: a.records.inputs,
                format: a.records.input_format,
            }
        }
    };
    if !(a.clique_seconds >= 0.0) || !a.clique_seconds.is_finite() {
        return Err(Failure::input("clique time limit must be a non-negative number"));
    }
    let config = RunConfig {
        price: a.price,
        genesis: a.genesis_month,
        samples: a.samples,
        seed: a.seed,
        clique_cap: a.clique_cap,
        clique_budget: CliqueBudget {
            time_limit: (a.clique_seconds > 0.0).then(|| Duration::from_secs_f64(a.clique_seconds)),
            max_steps: a.clique_steps,
        },
        x_min: a.fit.policy(),
        power_law_method: a.fit.method.into(),
        metrics: MetricFlags {
            clustering: !a.no_clustering,
            max_clique: !a.no_clique,
            assortativity: !a.no_assortativity,
            power_law: !a.no_power_law,
        },
        lenient: a.records.lenient,
        anomaly_window: a.anomaly_window,
        anomaly_threshold: a.anomaly_threshold,
        ..RunConfig::new(input)
    };
    let report = run_pipeline(&config)?;
    let written = write_report(&report, &a.out)?;
    print_json(&json!({
        "months": report.rows.len(),
        "anomalies": report.summary.anomalies.iter().map(|x| x.month.to_string()).collect::<Vec<_>>(),
        "files": written.len(),
    }));
    Ok(())
}

fn sample(a: SampleArgs) -> CliResult {
    let snapshot = GraphSnapshot::load(&a.snapshot).map_err(|source| PipelineError::Snapshot {
        path: a.snapshot.clone(),
        source,
    })?;
    let through = match a.month {
        Some(m) => {
            let i = m.ordinal() - snapshot.genesis.ordinal();
            if i < 0 || i as usize >= snapshot.months.len() {
                return Err(Failure::input(format!("{m} is outside the snapshot")));
            }
            MonthIndex(i as u32)
        }
        None => match snapshot.months.len() {
            0 => return Err(Failure::input("snapshot has no months")),
            n => MonthIndex(n as u32 - 1),
        },
    };
    let n = match &a.out {
        Some(path) => {
            let mut out = create(path)?;
            let n = sample_cmtg_edges(&snapshot, through, a.k, a.seed, &mut out)?;
            out.flush().map_err(|e| Failure::io(path, e))?;
            n
        }
        None => sample_cmtg_edges(&snapshot, through, a.k, a.seed, io::stdout().lock())?,
    };
    eprintln!("{n} edges through {}", snapshot.genesis.offset(through));
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(s)
}

/// Non-empty lines split on commas, skipping a non-numeric header.
fn numeric_rows(path: &Path, text: &str) -> Result<Vec<Vec<String>>, Failure> {
    let mut rows: Vec<Vec<String>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.trim().to_owned()).collect())
        .collect();
    if rows.is_empty() {
        return Err(Failure::input(format!("{}: empty", path.display())));
    }
    if rows[0].last().is_some_and(|c| c.parse::<f64>().is_err()) {
        rows.remove(0);
    }
    Ok(rows)
}

fn bad_line(path: &Path, i: usize, what: &str) -> Failure {
    Failure::input(format!("{}: row {}: {what}", path.display(), i + 1))
}

fn fit(c: FitCommand) -> CliResult {
    let out = match c {
        FitCommand::PowerLaw { degrees, fit } => {
            let rows = numeric_rows(&degrees, &read_text(&degrees)?)?;
            let xs = rows
                .iter()
                .enumerate()
                .map(|(i, r)| r[0].parse::<u64>().map_err(|_| bad_line(&degrees, i, "expected a non-negative integer")))
                .collect::<Result<Vec<_>, _>>()?;
            let method = fit.method.into();
            let result = match fit.policy() {
                XMinPolicy::Fixed(x) => fit_power_law(&xs, x, method),
                XMinPolicy::KsScan { max_candidates, min_tail } => scan_x_min(&xs, method, max_candidates, min_tail),
            };
            serde_json::to_value(result.map_err(Failure::input)?)
        }
        FitCommand::PowerModel { points } => {
            let rows = numeric_rows(&points, &read_text(&points)?)?;
            let pts = rows
                .iter()
                .enumerate()
                .map(|(i, r)| match r.as_slice() {
                    [v, e] => v.parse().ok().zip(e.parse().ok()).ok_or_else(|| bad_line(&points, i, "expected two numbers")),
                    _ => Err(bad_line(&points, i, "expected nodes,edges")),
                })
                .collect::<Result<Vec<(f64, f64)>, _>>()?;
            serde_json::to_value(fit_power_model(&pts).map_err(Failure::input)?)
        }
        FitCommand::Rgr { s1, t1, s2, t2 } => {
            serde_json::to_value(rgr(s1, MonthIndex(t1), s2, MonthIndex(t2)).map_err(Failure::input)?)
        }
    };
    print_json(&out.expect("fit results serialize"));
    Ok(())
}

fn correlate(a: CorrelateArgs) -> CliResult {
    let price: PriceSeries = load_price(&a.price)?;
    let rows = numeric_rows(&a.series, &read_text(&a.series)?)?;
    let mut series = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        let [m, v] = r.as_slice() else {
            return Err(bad_line(&a.series, i, "expected month,value"));
        };
        let month: YearMonth = m.parse().map_err(|_| bad_line(&a.series, i, "bad month"))?;
        let value: f64 = v.parse().map_err(|_| bad_line(&a.series, i, "bad value"))?;
        if series.insert(month, value).is_some() {
            return Err(bad_line(&a.series, i, "duplicate month"));
        }
    }
    let aligned = align_with_price(&series, &price).map_err(Failure::input)?;
    let r = aligned.correlation().map_err(Failure::input)?;
    print_json(&json!({
        "pearson": r,
        "pairs": aligned.months.len(),
        "dropped": aligned.dropped,
    }));
    Ok(())
}

fn synth(a: SynthArgs) -> CliResult {
    if a.months == 0 {
        return Err(Failure::input("months must be positive"));
    }
    let mut records = baseline(&BaselineConfig::new(a.start, a.months, a.transactions, a.seed));
    if let Some(m) = a.hub_month {
        records.extend(hub_month(&HubConfig::new(m, a.seed)));
        records.sort_by_key(|r| r.timestamp);
    }
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    let fmt = a.format.unwrap_or_else(|| RecordFormat::from_path(&a.out));
    txgraph::ingest::write_records(&records, fmt, create(&a.out)?)
        .map_err(|e| Failure::runtime(format!("{}: {e}", a.out.display())))?;
    eprintln!("{} records", records.len());
    Ok(())
}
