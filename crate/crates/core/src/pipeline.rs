//! The monthly run: records → month buckets → MTG/CMTG → metrics → fits →
//! report files.
//!
//! Graphs are folded month by month because each CMTG depends on the previous
//! one. Within a month the expensive measures run concurrently on the
//! immutable graphs. Every random choice is derived from the configured seed,
//! so identical configurations give byte-identical report files.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fitting::{
    align_with_price, fit_power_law, fit_power_model, rgr, scan_x_min, FitError, GrowthRate, PowerLawFit,
    PowerLawMethod, PowerModelFit, PriceSeries,
};
use crate::graph::snapshot::GraphSnapshot;
use crate::graph::{
    accumulate_cmtg, build_mtg, degree_sequence, AddressTable, CumulativeGraph, DegreeVariant, GraphError,
    GraphView, MonthlyGraph,
};
use crate::ingest::{
    bucket_by_month, infer_genesis, read_records, IngestError, MonthError, MonthIndex, ParseOptions, RecordFormat,
    TxRecord, YearMonth,
};
use crate::metrics::{
    assortativity, clustering_sampled, default_sample_count, density, edge_vertex_ratio, max_clique,
    repetition_ratio_edges, repetition_ratio_nodes, CliqueBudget, MetricRow,
};

/// How `x_min` is chosen for the degree fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XMinPolicy {
    Fixed(u64),
    /// Minimize the KS distance over the smallest `max_candidates` distinct
    /// degrees that leave at least `min_tail` observations.
    KsScan { max_candidates: usize, min_tail: usize },
}

/// Which optional measures to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricFlags {
    pub clustering: bool,
    pub max_clique: bool,
    pub assortativity: bool,
    pub power_law: bool,
}

impl Default for MetricFlags {
    fn default() -> Self {
        MetricFlags {
            clustering: true,
            max_clique: true,
            assortativity: true,
            power_law: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    /// Record files, concatenated in order. `None` infers each file's format
    /// from its extension.
    Records {
        paths: Vec<PathBuf>,
        format: Option<RecordFormat>,
    },
    Snapshot(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub price: Option<PathBuf>,
    /// Month 0; inferred from the earliest record when absent.
    pub genesis: Option<YearMonth>,
    /// Triad samples per month; `None` uses [`default_sample_count`].
    pub samples: Option<u64>,
    pub seed: u64,
    /// Gated measures (clustering, clique, assortativity) are computed only
    /// while the CMTG has at most this many nodes.
    pub clique_cap: usize,
    pub clique_budget: CliqueBudget,
    pub x_min: XMinPolicy,
    pub power_law_method: PowerLawMethod,
    pub metrics: MetricFlags,
    pub lenient: bool,
    pub anomaly_window: usize,
    pub anomaly_threshold: f64,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        RunConfig {
            input,
            price: None,
            genesis: None,
            samples: None,
            seed: 0,
            clique_cap: 1_000_000,
            clique_budget: CliqueBudget::default(),
            x_min: XMinPolicy::Fixed(1),
            power_law_method: PowerLawMethod::DiscreteMle,
            metrics: MetricFlags::default(),
            lenient: false,
            anomaly_window: 2,
            anomaly_threshold: 5.0,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.into()));
        if self.clique_cap == 0 {
            return bad("clique cap must be positive");
        }
        if self.samples == Some(0) {
            return bad("sample count must be positive");
        }
        if matches!(self.x_min, XMinPolicy::Fixed(0)) {
            return bad("x_min must be positive");
        }
        if self.anomaly_window == 0 || !(self.anomaly_threshold > 0.0) {
            return bad("anomaly window and threshold must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no records")]
    NoRecords,
    #[error("{path}: {source}")]
    Ingest { path: PathBuf, source: IngestError },
    #[error("{path}: {source}")]
    Price { path: PathBuf, source: FitError },
    #[error(transparent)]
    Month(#[from] MonthError),
    #[error("{path}: {source}")]
    Snapshot { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Anomaly(#[from] AnomalyError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl PipelineError {
    /// True when the failure is due to bad input rather than the environment.
    pub fn is_input_error(&self) -> bool {
        match self {
            PipelineError::Io { .. } => false,
            PipelineError::Snapshot {
                source: GraphError::Io(e),
                ..
            } => e.kind() == io::ErrorKind::NotFound,
            PipelineError::Snapshot { .. } => true,
            PipelineError::Graph(source) => !matches!(source, GraphError::Io(_)),
            _ => true,
        }
    }
}

/// Interns and builds every monthly graph. `genesis` defaults to the month
/// of the earliest record.
pub fn build_snapshot(records: Vec<TxRecord>, genesis: Option<YearMonth>) -> Result<GraphSnapshot, PipelineError> {
    let genesis = match genesis {
        Some(g) => g,
        None => infer_genesis(&records)?.ok_or(PipelineError::NoRecords)?,
    };
    if records.is_empty() {
        return Err(PipelineError::NoRecords);
    }
    let buckets = bucket_by_month(records, genesis)?;
    let mut table = AddressTable::new();
    let months = buckets
        .into_inner()
        .iter()
        .enumerate()
        .map(|(m, bucket)| build_mtg(bucket, MonthIndex(m as u32), &mut table))
        .collect();
    Ok(GraphSnapshot { genesis, table, months })
}

/// Reads and concatenates record files.
pub fn load_records(paths: &[PathBuf], format: Option<RecordFormat>, lenient: bool) -> Result<Vec<TxRecord>, PipelineError> {
    let mut records = Vec::new();
    for path in paths {
        let fmt = format.unwrap_or_else(|| RecordFormat::from_path(path));
        let parsed = read_records(path, fmt, ParseOptions { lenient }).map_err(|source| PipelineError::Ingest {
            path: path.clone(),
            source,
        })?;
        records.extend(parsed.records);
    }
    Ok(records)
}

pub fn load_price(path: &Path) -> Result<PriceSeries, PipelineError> {
    let price_err = |source| PipelineError::Price {
        path: path.to_owned(),
        source,
    };
    let file = File::open(path).map_err(|e| price_err(FitError::PriceFile(e.to_string())))?;
    PriceSeries::from_csv(file).map_err(price_err)
}

/// Loads inputs, builds graphs, computes everything.
pub fn run_pipeline(config: &RunConfig) -> Result<Report, PipelineError> {
    config.validate()?;
    let price = config.price.as_deref().map(load_price).transpose()?;
    let snapshot = match &config.input {
        InputSource::Records { paths, format } => {
            build_snapshot(load_records(paths, *format, config.lenient)?, config.genesis)?
        }
        InputSource::Snapshot(path) => {
            let snap = GraphSnapshot::load(path).map_err(|source| PipelineError::Snapshot {
                path: path.clone(),
                source,
            })?;
            if config.genesis.is_some_and(|g| g != snap.genesis) {
                return Err(PipelineError::Config(format!(
                    "snapshot genesis is {}, configuration says {}",
                    snap.genesis,
                    config.genesis.unwrap()
                )));
            }
            snap
        }
    };
    analyze(&snapshot, price.as_ref(), config)
}

/// Degree-exponent fits for one CMTG, in [`DegreeVariant::ALL`] order.
pub type AlphaFits = [Option<PowerLawFit>; 4];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlation {
    pub pearson: Option<f64>,
    pub pairs: usize,
    pub dropped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceCorrelations {
    pub mtg_nodes: Correlation,
    pub mtg_edges: Correlation,
    pub mtg_density: Correlation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Anomaly {
    pub month: YearMonth,
    pub index: MonthIndex,
    pub edge_vertex_mtg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub genesis_month: YearMonth,
    pub months: usize,
    pub self_transfers: u64,
    pub rgr_nodes: Option<GrowthRate>,
    pub rgr_edges: Option<GrowthRate>,
    pub power_model: Option<PowerModelFit>,
    pub price: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<PriceCorrelations>,
    pub anomalies: Vec<Anomaly>,
    pub clique_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub genesis: YearMonth,
    pub rows: Vec<MetricRow>,
    pub alphas: Vec<AlphaFits>,
    pub summary: Summary,
}

impl Report {
    pub fn month_label(&self, index: MonthIndex) -> YearMonth {
        self.genesis.offset(index)
    }

    /// The MTG edge-to-vertex series, one entry per month.
    pub fn edge_vertex_series(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.edge_vertex_mtg).collect()
    }

    pub fn anomalies(&self, window: usize, threshold: f64) -> Result<Vec<usize>, AnomalyError> {
        detect_anomalies(&self.edge_vertex_series(), window, threshold)
    }
}

fn fit_alphas(cmtg: &CumulativeGraph, config: &RunConfig) -> AlphaFits {
    let fits: Vec<Option<PowerLawFit>> = DegreeVariant::ALL
        .par_iter()
        .map(|&variant| {
            let degrees: Vec<u64> = degree_sequence(cmtg, variant).into_iter().filter(|&d| d > 0).collect();
            match config.x_min {
                XMinPolicy::Fixed(x) => fit_power_law(&degrees, x, config.power_law_method),
                XMinPolicy::KsScan {
                    max_candidates,
                    min_tail,
                } => scan_x_min(&degrees, config.power_law_method, max_candidates, min_tail),
            }
            .ok()
        })
        .collect();
    [fits[0], fits[1], fits[2], fits[3]]
}

fn month_row(
    mtg: &MonthlyGraph,
    prev: Option<&MonthlyGraph>,
    cmtg: &CumulativeGraph,
    config: &RunConfig,
) -> (MetricRow, AlphaFits) {
    let (mn, me) = (mtg.node_count() as u64, mtg.edge_count() as u64);
    let (cn, ce) = (cmtg.node_count() as u64, cmtg.edge_count() as u64);
    let mut row = MetricRow {
        month: mtg.month,
        mtg_nodes: mn,
        mtg_edges: me,
        cmtg_nodes: cn,
        cmtg_edges: ce,
        mtg_density: density(mn, me).ok(),
        cmtg_density: density(cn, ce).ok(),
        edge_vertex_mtg: edge_vertex_ratio(mn, me).ok(),
        edge_vertex_cmtg: edge_vertex_ratio(cn, ce).ok(),
        rr_nodes: prev.and_then(|p| repetition_ratio_nodes(mtg, p).ok()),
        rr_edges: prev.and_then(|p| repetition_ratio_edges(mtg, p).ok()),
        assortativity: None,
        clustering: None,
        max_clique: None,
    };
    let flags = config.metrics;
    let gated = cmtg.node_count() <= config.clique_cap
        && cn > 0
        && (flags.clustering || flags.max_clique || flags.assortativity);
    let ((clustering, clique, assort), alphas) = rayon::join(
        || {
            if !gated {
                return (None, None, None);
            }
            let csr = cmtg.to_undirected();
            let seed = config.seed.wrapping_add(u64::from(mtg.month.0));
            let samples = config.samples.unwrap_or_else(|| default_sample_count(csr.node_count()));
            let (clustering, (clique, assort)) = rayon::join(
                || flags.clustering.then(|| clustering_sampled(&csr, samples, seed).ok()).flatten(),
                || {
                    rayon::join(
                        || flags.max_clique.then(|| max_clique(&csr, &config.clique_budget)),
                        || flags.assortativity.then(|| assortativity(&csr).ok()).flatten(),
                    )
                },
            );
            (clustering, clique, assort)
        },
        || {
            if flags.power_law {
                fit_alphas(cmtg, config)
            } else {
                [None; 4]
            }
        },
    );
    row.clustering = clustering;
    row.max_clique = clique.filter(|c| c.size > 0);
    row.assortativity = assort;
    (row, alphas)
}

fn month_series(report_genesis: YearMonth, rows: &[MetricRow], f: impl Fn(&MetricRow) -> Option<f64>) -> BTreeMap<YearMonth, f64> {
    rows.iter()
        .filter_map(|r| f(r).map(|v| (report_genesis.offset(r.month), v)))
        .collect()
}

fn correlate(series: &BTreeMap<YearMonth, f64>, price: &PriceSeries) -> Correlation {
    match align_with_price(series, price) {
        Ok(aligned) => {
            let (pearson, error) = match aligned.correlation() {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Correlation {
                pearson,
                pairs: aligned.months.len(),
                dropped: aligned.dropped,
                error,
            }
        }
        Err(e) => Correlation {
            pearson: None,
            pairs: 0,
            dropped: series.len() + price.len(),
            error: Some(e.to_string()),
        },
    }
}

/// Growth of a CMTG size series from its first positive value to the last
/// month.
fn growth(rows: &[MetricRow], size: impl Fn(&MetricRow) -> u64) -> Option<GrowthRate> {
    let first = rows.iter().find(|r| size(r) > 0)?;
    let last = rows.last()?;
    rgr(size(first) as f64, first.month, size(last) as f64, last.month).ok()
}

/// Computes every metric and fit for an already-built series of months.
pub fn analyze(snapshot: &GraphSnapshot, price: Option<&PriceSeries>, config: &RunConfig) -> Result<Report, PipelineError> {
    config.validate()?;
    if snapshot.months.is_empty() {
        return Err(PipelineError::NoRecords);
    }
    let mut cmtg = CumulativeGraph::empty();
    let mut rows = Vec::with_capacity(snapshot.months.len());
    let mut alphas = Vec::with_capacity(snapshot.months.len());
    let mut prev: Option<&MonthlyGraph> = None;
    for mtg in &snapshot.months {
        cmtg = accumulate_cmtg(&cmtg, mtg)?;
        let (row, fits) = month_row(mtg, prev, &cmtg, config);
        rows.push(row);
        alphas.push(fits);
        prev = Some(mtg);
    }

    let genesis = snapshot.genesis;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.cmtg_nodes >= 2 && r.cmtg_edges >= 1)
        .map(|r| (r.cmtg_nodes as f64, r.cmtg_edges as f64))
        .collect();
    let correlations = price.map(|p| PriceCorrelations {
        mtg_nodes: correlate(&month_series(genesis, &rows, |r| Some(r.mtg_nodes as f64)), p),
        mtg_edges: correlate(&month_series(genesis, &rows, |r| Some(r.mtg_edges as f64)), p),
        mtg_density: correlate(&month_series(genesis, &rows, |r| r.mtg_density), p),
    });
    let ev: Vec<Option<f64>> = rows.iter().map(|r| r.edge_vertex_mtg).collect();
    let anomalies = if ev.len() > config.anomaly_window {
        detect_anomalies(&ev, config.anomaly_window, config.anomaly_threshold)?
            .into_iter()
            .map(|m| Anomaly {
                month: genesis.offset(MonthIndex(m as u32)),
                index: MonthIndex(m as u32),
                edge_vertex_mtg: ev[m].unwrap_or_default(),
            })
            .collect()
    } else {
        Vec::new()
    };
    let summary = Summary {
        genesis_month: genesis,
        months: rows.len(),
        self_transfers: snapshot.months.iter().map(|m| m.self_transfers()).sum(),
        rgr_nodes: growth(&rows, |r| r.cmtg_nodes),
        rgr_edges: growth(&rows, |r| r.cmtg_edges),
        power_model: fit_power_model(&points).ok(),
        price: if price.is_some() { "supplied" } else { "absent" },
        correlations,
        anomalies,
        clique_cap: config.clique_cap,
    };
    Ok(Report {
        genesis,
        rows,
        alphas,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnomalyError {
    #[error("anomaly detection needs more than {window} months, got {months}")]
    TooFewMonths { months: usize, window: usize },
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Indices whose value exceeds `threshold` times the median of the defined
/// values within `window` months on either side (the month itself excluded).
pub fn detect_anomalies(series: &[Option<f64>], window: usize, threshold: f64) -> Result<Vec<usize>, AnomalyError> {
    if series.len() <= window {
        return Err(AnomalyError::TooFewMonths {
            months: series.len(),
            window,
        });
    }
    let mut flagged = Vec::new();
    for (m, value) in series.iter().enumerate() {
        let Some(value) = *value else { continue };
        let lo = m.saturating_sub(window);
        let hi = (m + window).min(series.len() - 1);
        let mut around: Vec<f64> = (lo..=hi).filter(|&i| i != m).filter_map(|i| series[i]).collect();
        if around.is_empty() {
            continue;
        }
        if value > threshold * median(&mut around) {
            flagged.push(m);
        }
    }
    Ok(flagged)
}

pub const MONTHLY_COLUMNS: [&str; 20] = [
    "month",
    "mtg_nodes",
    "mtg_edges",
    "cmtg_nodes",
    "cmtg_edges",
    "mtg_density",
    "cmtg_density",
    "ev_mtg",
    "ev_cmtg",
    "rr_nodes",
    "rr_edges",
    "assortativity",
    "clustering",
    "clustering_samples",
    "max_clique",
    "clique_exact",
    "alpha_undirected",
    "alpha_in",
    "alpha_out",
    "alpha_total",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl Table {
    fn create(path: PathBuf, header: &[&str]) -> Result<Self, PipelineError> {
        let file = File::create(&path).map_err(|source| PipelineError::Io {
            path: path.clone(),
            source,
        })?;
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(BufWriter::new(file));
        writer.write_record(header).map_err(|e| io_err(&path, e.into()))?;
        Ok(Table { path, writer })
    }

    fn row(&mut self, cells: &[String]) -> Result<(), PipelineError> {
        self.writer.write_record(cells).map_err(|e| io_err(&self.path, e.into()))
    }

    fn finish(mut self) -> Result<PathBuf, PipelineError> {
        self.writer.flush().map_err(|e| io_err(&self.path, e))?;
        Ok(self.path)
    }
}

fn io_err(path: &Path, source: io::Error) -> PipelineError {
    PipelineError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Writes `monthly.csv`, `summary.json` and `plotdata/*.csv` under `dir`,
/// returning the paths written.
pub fn write_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let plot = dir.join("plotdata");
    fs::create_dir_all(&plot).map_err(|e| io_err(&plot, e))?;
    let mut written = Vec::new();
    let label = |r: &MetricRow| report.month_label(r.month).to_string();

    let mut monthly = Table::create(dir.join("monthly.csv"), &MONTHLY_COLUMNS)?;
    for (row, fits) in report.rows.iter().zip(&report.alphas) {
        let mut cells = vec![
            label(row),
            row.mtg_nodes.to_string(),
            row.mtg_edges.to_string(),
            row.cmtg_nodes.to_string(),
            row.cmtg_edges.to_string(),
            cell(row.mtg_density),
            cell(row.cmtg_density),
            cell(row.edge_vertex_mtg),
            cell(row.edge_vertex_cmtg),
            cell(row.rr_nodes),
            cell(row.rr_edges),
            cell(row.assortativity),
            cell(row.clustering.map(|c| c.value)),
            cell(row.clustering.map(|c| c.samples)),
            cell(row.max_clique.as_ref().map(|c| c.size)),
            cell(row.max_clique.as_ref().map(|c| c.exact)),
        ];
        cells.extend(fits.iter().map(|f| cell(f.map(|f| f.alpha))));
        monthly.row(&cells)?;
    }
    written.push(monthly.finish()?);

    let summary_path = dir.join("summary.json");
    let mut json = serde_json::to_string_pretty(&report.summary).map_err(|e| io_err(&summary_path, e.into()))?;
    json.push('\n');
    fs::write(&summary_path, json).map_err(|e| io_err(&summary_path, e))?;
    written.push(summary_path);

    type Column<'a> = (&'a str, Box<dyn Fn(&MetricRow) -> String + 'a>);
    let per_month = |name: &str, columns: Vec<Column>| -> Result<PathBuf, PipelineError> {
        let mut header = vec!["month_index", "month"];
        header.extend(columns.iter().map(|(h, _)| *h));
        let mut t = Table::create(plot.join(name), &header)?;
        for row in &report.rows {
            let mut cells = vec![row.month.to_string(), label(row)];
            cells.extend(columns.iter().map(|(_, f)| f(row)));
            t.row(&cells)?;
        }
        t.finish()
    };
    written.push(per_month(
        "sizes.csv",
        vec![
            ("mtg_nodes", Box::new(|r| r.mtg_nodes.to_string())),
            ("mtg_edges", Box::new(|r| r.mtg_edges.to_string())),
            ("cmtg_nodes", Box::new(|r| r.cmtg_nodes.to_string())),
            ("cmtg_edges", Box::new(|r| r.cmtg_edges.to_string())),
        ],
    )?);
    written.push(per_month(
        "densities.csv",
        vec![
            ("mtg_density", Box::new(|r| cell(r.mtg_density))),
            ("cmtg_density", Box::new(|r| cell(r.cmtg_density))),
        ],
    )?);
    written.push(per_month(
        "ratios.csv",
        vec![
            ("ev_mtg", Box::new(|r| cell(r.edge_vertex_mtg))),
            ("ev_cmtg", Box::new(|r| cell(r.edge_vertex_cmtg))),
        ],
    )?);
    written.push(per_month(
        "rr.csv",
        vec![
            ("rr_nodes", Box::new(|r| cell(r.rr_nodes))),
            ("rr_edges", Box::new(|r| cell(r.rr_edges))),
        ],
    )?);
    written.push(per_month(
        "assortativity.csv",
        vec![("assortativity", Box::new(|r| cell(r.assortativity)))],
    )?);

    let mut growth = Table::create(plot.join("growth.csv"), &["month_index", "month", "rgr_nodes", "rgr_edges"])?;
    for pair in report.rows.windows(2) {
        let step = |s: fn(&MetricRow) -> u64| {
            cell(rgr(s(&pair[0]) as f64, pair[0].month, s(&pair[1]) as f64, pair[1].month).ok().map(|g| g.rgr))
        };
        growth.row(&[
            pair[1].month.to_string(),
            label(&pair[1]),
            step(|r| r.cmtg_nodes),
            step(|r| r.cmtg_edges),
        ])?;
    }
    written.push(growth.finish()?);

    let mut alpha_header = vec!["month_index", "month"];
    let names: Vec<String> = DegreeVariant::ALL
        .iter()
        .flat_map(|v| {
            let n = v.name();
            [format!("alpha_{n}"), format!("x_min_{n}"), format!("n_tail_{n}"), format!("ks_{n}")]
        })
        .collect();
    alpha_header.extend(names.iter().map(String::as_str));
    let mut alpha_t = Table::create(plot.join("alphas.csv"), &alpha_header)?;
    for (row, fits) in report.rows.iter().zip(&report.alphas) {
        let mut cells = vec![row.month.to_string(), label(row)];
        for f in fits {
            cells.push(cell(f.map(|f| f.alpha)));
            cells.push(cell(f.map(|f| f.x_min)));
            cells.push(cell(f.map(|f| f.n_tail)));
            cells.push(cell(f.map(|f| f.ks_distance)));
        }
        alpha_t.row(&cells)?;
    }
    written.push(alpha_t.finish()?);

    let mut cl = Table::create(plot.join("clustering_vs_nodes.csv"), &["month", "cmtg_nodes", "clustering"])?;
    let mut cq = Table::create(plot.join("clique_vs_nodes.csv"), &["month", "cmtg_nodes", "max_clique", "exact"])?;
    for row in &report.rows {
        if let Some(c) = row.clustering {
            cl.row(&[label(row), row.cmtg_nodes.to_string(), c.value.to_string()])?;
        }
        if let Some(c) = &row.max_clique {
            cq.row(&[label(row), row.cmtg_nodes.to_string(), c.size.to_string(), c.exact.to_string()])?;
        }
    }
    written.push(cl.finish()?);
    written.push(cq.finish()?);

    let mut pm = Table::create(plot.join("power_model.csv"), &["month", "cmtg_nodes", "cmtg_edges", "fitted_edges"])?;
    for row in report.rows.iter().filter(|r| r.cmtg_nodes > 0) {
        let fitted = report.summary.power_model.map(|f| f.predict(row.cmtg_nodes as f64));
        pm.row(&[label(row), row.cmtg_nodes.to_string(), row.cmtg_edges.to_string(), cell(fitted)])?;
    }
    written.push(pm.finish()?);
    Ok(written)
}

/// Writes a uniform sample of `k` CMTG edges for the month `through` as a
/// `src,dst` CSV of address names.
pub fn sample_cmtg_edges<W: Write>(
    snapshot: &GraphSnapshot,
    through: MonthIndex,
    k: usize,
    seed: u64,
    out: W,
) -> Result<usize, PipelineError> {
    let months = snapshot
        .months
        .get(..=through.as_usize())
        .ok_or_else(|| PipelineError::Config(format!("month {through} is beyond the last month")))?;
    let mut cmtg = CumulativeGraph::empty();
    for mtg in months {
        cmtg = accumulate_cmtg(&cmtg, mtg)?;
    }
    let edges = crate::graph::sample_edges(&cmtg, k, seed);
    crate::graph::write_edge_list(&edges, &snapshot.table, out).map_err(|e| io_err(Path::new("<edge list>"), e))?;
    Ok(edges.len())
}
