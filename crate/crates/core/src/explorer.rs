//! Client for a JSON block-explorer API.
//!
//! Blocks are fetched with `GET {base_url}/block/{coin_code}/{height}`. The
//! expected body is
//!
//! ```text
//! {"status": "success",
//!  "data": {"block_no": 12, "time": 1478000000,
//!           "txs": [{"txid": "...",
//!                    "inputs":  [{"address": "A", "received_from": {"txid": "...", "output_no": 0}}],
//!                    "outputs": [{"address": "D"}]}]}}
//! ```
//!
//! An input without `received_from` spends no previous output. The first
//! transaction of a block whose inputs all lack it is the coinbase. A `null`
//! address (shielded or unparseable endpoint) maps to a reserved opaque token,
//! one per side, and is counted in [`NormalizeStats`].
//!
//! Network access goes through the [`Transport`] trait and time through the
//! [`Clock`] trait, so tests can script responses and run on a virtual clock.

use std::collections::VecDeque;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::ingest::{DataSource, DatasetManifest, IngestError, RecordSink, TxRecord, YearMonth};

/// Stand-in for an input address the explorer could not reveal.
pub const OPAQUE_INPUT_TOKEN: &str = "$opaque-in";
/// Stand-in for an output address the explorer could not reveal.
pub const OPAQUE_OUTPUT_TOKEN: &str = "$opaque-out";

#[derive(Debug, Clone, PartialEq)]
pub struct ExplorerConfig {
    pub base_url: String,
    pub coin_code: String,
    pub requests_per_second: f64,
    pub max_retries: u32,
    pub timeout: Duration,
    pub backoff_base: Duration,
    pub backoff_cap: Duration,
    pub jitter_seed: u64,
}

impl ExplorerConfig {
    pub fn new(base_url: impl Into<String>, coin_code: impl Into<String>) -> Self {
        ExplorerConfig {
            base_url: base_url.into(),
            coin_code: coin_code.into(),
            requests_per_second: 1.0,
            max_retries: 5,
            timeout: Duration::from_secs(30),
            backoff_base: Duration::from_secs(1),
            backoff_cap: Duration::from_secs(60),
            jitter_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ExplorerError> {
        if !(self.requests_per_second > 0.0 && self.requests_per_second.is_finite()) {
            return Err(ExplorerError::Config("requests_per_second must be positive".into()));
        }
        if self.base_url.is_empty() || self.coin_code.is_empty() {
            return Err(ExplorerError::Config("base_url and coin_code are required".into()));
        }
        Ok(())
    }

    pub fn block_url(&self, height: u64) -> String {
        format!("{}/block/{}/{}", self.base_url.trim_end_matches('/'), self.coin_code, height)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("connection failed: {0}")]
    Connection(String),
}

/// Minimal HTTP surface: one request in, status and body out.
pub trait Transport {
    fn request(&mut self, method: &str, url: &str, timeout: Duration) -> Result<HttpResponse, TransportError>;
}

/// Monotonic time source.
pub trait Clock {
    /// Time since an arbitrary fixed origin.
    fn now(&self) -> Duration;
    fn sleep(&self, duration: Duration);
}

pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock { origin: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Virtual clock: `sleep` advances time instantly. Clones share one timeline.
#[derive(Debug, Clone, Default)]
pub struct MockClock {
    now: Arc<Mutex<Duration>>,
    sleeps: Arc<Mutex<Vec<Duration>>>,
}

impl MockClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, by: Duration) {
        *self.now.lock().unwrap() += by;
    }

    /// Every sleep requested so far, in order.
    pub fn sleeps(&self) -> Vec<Duration> {
        self.sleeps.lock().unwrap().clone()
    }
}

impl Clock for MockClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap()
    }

    fn sleep(&self, duration: Duration) {
        self.sleeps.lock().unwrap().push(duration);
        self.advance(duration);
    }
}

/// Keeps request starts at least `1/rps` apart and never more than
/// `max(1, floor(rps))` inside any half-open one-second window.
#[derive(Debug, Clone)]
pub struct RateLimiter {
    min_interval: Duration,
    per_window: usize,
    recent: VecDeque<Duration>,
    last: Option<Duration>,
}

const WINDOW: Duration = Duration::from_secs(1);

impl RateLimiter {
    pub fn new(requests_per_second: f64) -> Self {
        RateLimiter {
            min_interval: Duration::from_secs_f64(1.0 / requests_per_second),
            per_window: (requests_per_second.floor() as usize).max(1),
            recent: VecDeque::new(),
            last: None,
        }
    }

    /// Blocks (via `clock`) until a request may start, then records it.
    pub fn acquire(&mut self, clock: &dyn Clock) -> Duration {
        loop {
            let now = clock.now();
            while self.recent.front().is_some_and(|&t| now >= t + WINDOW) {
                self.recent.pop_front();
            }
            let mut ready = now;
            if let Some(last) = self.last {
                ready = ready.max(last + self.min_interval);
            }
            if self.recent.len() >= self.per_window {
                ready = ready.max(self.recent[self.recent.len() - self.per_window] + WINDOW);
            }
            if ready <= now {
                self.recent.push_back(now);
                self.last = Some(now);
                return now;
            }
            clock.sleep(ready - now);
        }
    }
}

#[derive(Debug, Error)]
pub enum ExplorerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("block {height} not found")]
    NotFound { height: u64 },
    #[error("block {height}: HTTP {status}")]
    Permanent { height: u64, status: u16 },
    #[error("block {height}: gave up after {attempts} attempts ({last})")]
    RetriesExhausted { height: u64, attempts: u32, last: String },
    #[error("block {height}: unexpected payload: {reason}")]
    Schema { height: u64, reason: String },
    #[error("block {height}, transaction {index}: {reason}")]
    Transaction { height: u64, index: usize, reason: String },
    #[error("range start {from} is after end {to}")]
    InvalidRange { from: u64, to: u64 },
    #[error("checkpoint {path}: {source}")]
    Checkpoint { path: String, source: io::Error },
    #[error("block {height}: writing records failed: {source}")]
    Sink { height: u64, source: IngestError },
}

/// A block as returned by the explorer, transactions left as raw JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct RawBlock {
    pub height: u64,
    pub timestamp: i64,
    pub transactions: Vec<Value>,
}

#[derive(Deserialize)]
struct Envelope {
    status: String,
    data: BlockBody,
}

#[derive(Deserialize)]
struct BlockBody {
    block_no: u64,
    time: i64,
    txs: Vec<Value>,
}

impl RawBlock {
    pub fn from_json(height: u64, body: &str) -> Result<Self, ExplorerError> {
        let schema = |reason: String| ExplorerError::Schema { height, reason };
        let env: Envelope = serde_json::from_str(body).map_err(|e| schema(e.to_string()))?;
        if env.status != "success" {
            return Err(schema(format!("status {:?}", env.status)));
        }
        if env.data.block_no != height {
            return Err(schema(format!("asked for {height}, got block {}", env.data.block_no)));
        }
        Ok(RawBlock {
            height,
            timestamp: env.data.time,
            transactions: env.data.txs,
        })
    }
}

/// Counters maintained across requests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClientStats {
    pub requests: u64,
    pub retries: u64,
    /// Retries spent on the most recent `fetch_block` call.
    pub last_retries: u32,
}

pub struct ExplorerClient<T, C> {
    config: ExplorerConfig,
    transport: T,
    clock: C,
    limiter: RateLimiter,
    rng: ChaCha8Rng,
    stats: ClientStats,
    request_times: Vec<Duration>,
}

impl<T: Transport, C: Clock> ExplorerClient<T, C> {
    pub fn new(config: ExplorerConfig, transport: T, clock: C) -> Result<Self, ExplorerError> {
        config.validate()?;
        Ok(ExplorerClient {
            limiter: RateLimiter::new(config.requests_per_second),
            rng: ChaCha8Rng::seed_from_u64(config.jitter_seed),
            config,
            transport,
            clock,
            stats: ClientStats::default(),
            request_times: Vec::new(),
        })
    }

    pub fn config(&self) -> &ExplorerConfig {
        &self.config
    }

    pub fn stats(&self) -> ClientStats {
        self.stats
    }

    /// Clock readings at which each request started.
    pub fn request_times(&self) -> &[Duration] {
        &self.request_times
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn transport_mut(&mut self) -> &mut T {
        &mut self.transport
    }

    /// Exponential backoff with equal jitter: half the capped delay is fixed,
    /// the other half uniform.
    fn backoff(&mut self, attempt: u32) -> Duration {
        let base = self.config.backoff_base.as_secs_f64();
        let cap = self.config.backoff_cap.as_secs_f64();
        let full = (base * 2f64.powi(attempt.min(62) as i32)).min(cap);
        Duration::from_secs_f64(full / 2.0 + self.rng.random_range(0.0..=full / 2.0))
    }

    pub fn fetch_block(&mut self, height: u64) -> Result<RawBlock, ExplorerError> {
        let url = self.config.block_url(height);
        let mut attempt = 0u32;
        self.stats.last_retries = 0;
        loop {
            let started = self.limiter.acquire(&self.clock);
            self.request_times.push(started);
            self.stats.requests += 1;
            let failure = match self.transport.request("GET", &url, self.config.timeout) {
                Ok(resp) if resp.status == 200 => return RawBlock::from_json(height, &resp.body),
                Ok(resp) if resp.status == 404 => return Err(ExplorerError::NotFound { height }),
                Ok(resp) if resp.status == 429 || (500..600).contains(&resp.status) => {
                    format!("HTTP {}", resp.status)
                }
                Ok(resp) => {
                    return Err(ExplorerError::Permanent {
                        height,
                        status: resp.status,
                    })
                }
                Err(e) => e.to_string(),
            };
            if attempt >= self.config.max_retries {
                return Err(ExplorerError::RetriesExhausted {
                    height,
                    attempts: attempt + 1,
                    last: failure,
                });
            }
            let delay = self.backoff(attempt);
            self.clock.sleep(delay);
            attempt += 1;
            self.stats.retries += 1;
            self.stats.last_retries = attempt;
        }
    }
}

/// Opaque endpoints seen while normalizing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeStats {
    pub opaque_inputs: u64,
    pub opaque_outputs: u64,
}

impl std::ops::AddAssign for NormalizeStats {
    fn add_assign(&mut self, rhs: Self) {
        self.opaque_inputs += rhs.opaque_inputs;
        self.opaque_outputs += rhs.opaque_outputs;
    }
}

fn endpoint_address(
    entry: &Value,
    opaque: &str,
    tally: &mut u64,
    fail: &dyn Fn(String) -> ExplorerError,
) -> Result<String, ExplorerError> {
    match entry.get("address") {
        None => Err(fail("address field absent".into())),
        Some(Value::Null) => {
            *tally += 1;
            Ok(opaque.to_owned())
        }
        Some(Value::String(s)) if !s.is_empty() => Ok(s.clone()),
        Some(other) => Err(fail(format!("address must be a non-empty string or null, got {other}"))),
    }
}

fn spends_previous_output(input: &Value) -> bool {
    input.get("received_from").is_some_and(|v| !v.is_null())
}

/// Converts a block's transactions into records stamped with the block time.
pub fn normalize_block(block: &RawBlock) -> Result<(Vec<TxRecord>, NormalizeStats), ExplorerError> {
    let mut stats = NormalizeStats::default();
    let mut records = Vec::with_capacity(block.transactions.len());
    for (index, tx) in block.transactions.iter().enumerate() {
        let fail = |reason: String| ExplorerError::Transaction {
            height: block.height,
            index,
            reason,
        };
        let list = |key: &str| -> Result<Option<&Vec<Value>>, ExplorerError> {
            match tx.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Array(items)) => Ok(Some(items)),
                Some(_) => Err(fail(format!("{key} must be an array"))),
            }
        };
        let inputs = list("inputs")?;
        let outputs = list("outputs")?.ok_or_else(|| fail("outputs missing".into()))?;
        let coinbase = index == 0 && inputs.is_none_or(|ins| !ins.iter().any(spends_previous_output));

        let mut record = TxRecord {
            timestamp: block.timestamp,
            inputs: Vec::new(),
            outputs: Vec::with_capacity(outputs.len()),
            coinbase,
        };
        if !coinbase {
            let inputs = inputs
                .filter(|ins| !ins.is_empty())
                .ok_or_else(|| fail("no inputs and not a coinbase".into()))?;
            for input in inputs {
                record
                    .inputs
                    .push(endpoint_address(input, OPAQUE_INPUT_TOKEN, &mut stats.opaque_inputs, &fail)?);
            }
        }
        for output in outputs {
            record
                .outputs
                .push(endpoint_address(output, OPAQUE_OUTPUT_TOKEN, &mut stats.opaque_outputs, &fail)?);
        }
        record.validate().map_err(|e| fail(e.to_string()))?;
        records.push(record);
    }
    Ok((records, stats))
}

/// Resume marker: the last height whose records were fully written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub last_height: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Self>, ExplorerError> {
        let err = |source| ExplorerError::Checkpoint {
            path: path.display().to_string(),
            source,
        };
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map(Some).map_err(|e| err(io::Error::other(e))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(err(e)),
        }
    }

    /// Writes through a temporary file and rename, so a crash never leaves a
    /// half-written checkpoint.
    pub fn store(&self, path: &Path) -> Result<(), ExplorerError> {
        let err = |source| ExplorerError::Checkpoint {
            path: path.display().to_string(),
            source,
        };
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(self).map_err(|e| err(io::Error::other(e)))?;
        fs::write(&tmp, text).map_err(err)?;
        fs::rename(&tmp, path).map_err(err)
    }
}

/// Summary of a range fetch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeOutcome {
    pub manifest: DatasetManifest,
    pub blocks_fetched: u64,
    /// First height fetched in this run (after honoring the checkpoint).
    pub resumed_from: u64,
    pub opaque: NormalizeStats,
}

/// Fetches heights `from..=to` in order, streaming normalized records into
/// `sink`. With a checkpoint path, heights up to the recorded `last_height`
/// are skipped and the checkpoint advances after every block.
pub fn fetch_range<T: Transport, C: Clock>(
    client: &mut ExplorerClient<T, C>,
    from: u64,
    to: u64,
    sink: &mut dyn RecordSink,
    checkpoint: Option<&Path>,
) -> Result<RangeOutcome, ExplorerError> {
    if from > to {
        return Err(ExplorerError::InvalidRange { from, to });
    }
    let mut start = from;
    if let Some(path) = checkpoint {
        if let Some(cp) = Checkpoint::load(path)? {
            start = start.max(cp.last_height.saturating_add(1));
        }
    }
    let mut outcome = RangeOutcome {
        manifest: DatasetManifest {
            coin_name: client.config().coin_code.clone(),
            genesis_month: None,
            record_count: 0,
            source: DataSource::Explorer,
        },
        blocks_fetched: 0,
        resumed_from: start,
        opaque: NormalizeStats::default(),
    };
    let mut earliest: Option<i64> = None;
    for height in start..=to {
        let block = client.fetch_block(height)?;
        let (records, stats) = normalize_block(&block)?;
        for record in &records {
            sink.write_record(record)
                .map_err(|source| ExplorerError::Sink { height, source })?;
        }
        outcome.manifest.record_count += records.len() as u64;
        outcome.opaque += stats;
        outcome.blocks_fetched += 1;
        earliest = Some(earliest.map_or(block.timestamp, |t| t.min(block.timestamp)));
        if let Some(path) = checkpoint {
            sink.flush().map_err(|source| ExplorerError::Sink { height, source })?;
            Checkpoint { last_height: height }.store(path)?;
        }
    }
    sink.finish()
        .map_err(|source| ExplorerError::Sink { height: to, source })?;
    outcome.manifest.genesis_month = earliest.and_then(|t| YearMonth::from_timestamp(t).ok());
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    /// Replays canned responses per URL, in order; the last one repeats.
    #[derive(Default)]
    struct Scripted {
        responses: std::collections::HashMap<String, VecDeque<Result<HttpResponse, TransportError>>>,
        calls: Vec<String>,
    }

    impl Scripted {
        fn push(&mut self, url: &str, r: Result<HttpResponse, TransportError>) {
            self.responses.entry(url.to_owned()).or_default().push_back(r);
        }
    }

    impl Transport for Scripted {
        fn request(&mut self, _m: &str, url: &str, _t: Duration) -> Result<HttpResponse, TransportError> {
            self.calls.push(url.to_owned());
            let q = self.responses.get_mut(url).expect("unscripted url");
            if q.len() > 1 {
                q.pop_front().unwrap()
            } else {
                q.front().unwrap().clone()
            }
        }
    }

    fn ok(body: Value) -> Result<HttpResponse, TransportError> {
        Ok(HttpResponse {
            status: 200,
            body: body.to_string(),
        })
    }

    fn status(code: u16) -> Result<HttpResponse, TransportError> {
        Ok(HttpResponse {
            status: code,
            body: String::new(),
        })
    }

    fn block(height: u64, txs: Vec<Value>) -> Value {
        json!({"status": "success", "data": {"block_no": height, "time": 1_500_000_000 + height as i64 * 600, "txs": txs}})
    }

    fn coinbase_tx(miner: &str) -> Value {
        json!({"txid": "cb", "inputs": [{"address": null, "coinbase": "04ffff"}], "outputs": [{"address": miner}]})
    }

    fn spend(ins: &[&str], outs: &[&str]) -> Value {
        json!({
            "txid": "t",
            "inputs": ins.iter().map(|a| json!({"address": a, "received_from": {"txid": "p", "output_no": 0}})).collect::<Vec<_>>(),
            "outputs": outs.iter().map(|a| json!({"address": a})).collect::<Vec<_>>(),
        })
    }

    fn client(transport: Scripted) -> ExplorerClient<Scripted, MockClock> {
        let mut cfg = ExplorerConfig::new("https://explorer.test/api", "ZEC");
        cfg.requests_per_second = 5.0;
        cfg.max_retries = 3;
        ExplorerClient::new(cfg, transport, MockClock::new()).unwrap()
    }

    #[test]
    fn url_layout() {
        let cfg = ExplorerConfig::new("https://explorer.test/api/", "ZEC");
        assert_eq!(cfg.block_url(7), "https://explorer.test/api/block/ZEC/7");
    }

    #[test]
    fn fetch_success() {
        let mut t = Scripted::default();
        t.push(
            "https://explorer.test/api/block/ZEC/3",
            ok(block(3, vec![coinbase_tx("M"), spend(&["A"], &["B"])])),
        );
        let mut c = client(t);
        let b = c.fetch_block(3).unwrap();
        assert_eq!(b.transactions.len(), 2);
        assert_eq!(b.height, 3);
        assert_eq!(c.stats().last_retries, 0);
    }

    #[test]
    fn fetch_retries_server_errors() {
        let url = "https://explorer.test/api/block/ZEC/1";
        let mut t = Scripted::default();
        t.push(url, status(500));
        t.push(url, ok(block(1, vec![coinbase_tx("M")])));
        let mut c = client(t);
        c.fetch_block(1).unwrap();
        assert_eq!(c.stats().last_retries, 1);
        let sleeps = c.clock.sleeps();
        // First backoff lies in [base/2, base].
        let backoff = sleeps.iter().copied().find(|d| *d >= Duration::from_millis(500)).unwrap();
        assert!(backoff <= Duration::from_secs(1));
    }

    #[test]
    fn fetch_not_found_is_not_retried() {
        let url = "https://explorer.test/api/block/ZEC/99";
        let mut t = Scripted::default();
        t.push(url, status(404));
        let mut c = client(t);
        assert!(matches!(c.fetch_block(99), Err(ExplorerError::NotFound { height: 99 })));
        assert_eq!(c.stats().retries, 0);
        assert_eq!(c.transport().calls.len(), 1);
    }

    #[test]
    fn fetch_permanent_and_exhausted() {
        let mut t = Scripted::default();
        t.push("https://explorer.test/api/block/ZEC/1", status(403));
        t.push("https://explorer.test/api/block/ZEC/2", Err(TransportError::Timeout));
        t.push("https://explorer.test/api/block/ZEC/3", status(429));
        t.push("https://explorer.test/api/block/ZEC/3", ok(json!({"status": "success"})));
        let mut c = client(t);
        assert!(matches!(
            c.fetch_block(1),
            Err(ExplorerError::Permanent { status: 403, .. })
        ));
        match c.fetch_block(2) {
            Err(ExplorerError::RetriesExhausted { attempts, .. }) => assert_eq!(attempts, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(c.fetch_block(3), Err(ExplorerError::Schema { .. })));
    }

    #[test]
    fn backoff_grows_and_caps() {
        let mut c = client(Scripted::default());
        for attempt in 0..10 {
            let full = (2f64.powi(attempt)).min(60.0);
            let d = c.backoff(attempt as u32).as_secs_f64();
            assert!(d >= full / 2.0 - 1e-9 && d <= full + 1e-9, "{attempt}: {d}");
        }
    }

    #[test]
    fn normalize_coinbase_only() {
        let b = RawBlock::from_json(0, &block(0, vec![coinbase_tx("M1")]).to_string()).unwrap();
        let (records, stats) = normalize_block(&b).unwrap();
        assert_eq!(records, vec![TxRecord::coinbase(b.timestamp, ["M1"]).unwrap()]);
        // The coinbase's null input is dropped, not tallied.
        assert_eq!(stats, NormalizeStats::default());
    }

    #[test]
    fn normalize_three_in_two_out() {
        let b = RawBlock::from_json(5, &block(5, vec![coinbase_tx("M"), spend(&["A", "B", "C"], &["D", "E"])]).to_string())
            .unwrap();
        let (records, _) = normalize_block(&b).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].inputs, ["A", "B", "C"]);
        assert_eq!(records[1].outputs, ["D", "E"]);
        assert!(!records[1].coinbase);
        assert!(records.iter().all(|r| r.timestamp == b.timestamp));
    }

    #[test]
    fn normalize_counts_opaque_outputs() {
        let shielded = json!({
            "txid": "z",
            "inputs": [{"address": "A", "received_from": {"txid": "p", "output_no": 1}}],
            "outputs": [{"address": null}, {"address": "B"}, {"address": null}],
        });
        let also = json!({
            "txid": "z2",
            "inputs": [{"address": null, "received_from": {"txid": "p", "output_no": 2}}],
            "outputs": [{"address": null}],
        });
        let fixture = block(8, vec![coinbase_tx("M"), shielded, also]);
        let null_outputs = fixture["data"]["txs"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|tx| tx["outputs"].as_array().unwrap().iter())
            .filter(|o| o["address"].is_null())
            .count() as u64;
        let b = RawBlock::from_json(8, &fixture.to_string()).unwrap();
        let (records, stats) = normalize_block(&b).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(stats.opaque_outputs, null_outputs);
        assert_eq!(stats.opaque_inputs, 1);
        assert_eq!(records[1].outputs, [OPAQUE_OUTPUT_TOKEN, "B", OPAQUE_OUTPUT_TOKEN]);
        assert_eq!(records[2].inputs, [OPAQUE_INPUT_TOKEN]);
    }

    #[test]
    fn normalize_errors() {
        let no_inputs = json!({"txid": "x", "outputs": [{"address": "B"}]});
        let b = RawBlock::from_json(1, &block(1, vec![coinbase_tx("M"), no_inputs]).to_string()).unwrap();
        assert!(matches!(
            normalize_block(&b),
            Err(ExplorerError::Transaction { index: 1, .. })
        ));

        let no_address = json!({"txid": "x", "inputs": [{"received_from": {"txid": "p"}}], "outputs": [{"address": "B"}]});
        let b = RawBlock::from_json(1, &block(1, vec![coinbase_tx("M"), no_address]).to_string()).unwrap();
        assert!(normalize_block(&b).is_err());
    }

    #[test]
    fn rate_limiter_respects_window() {
        for rps in [0.5, 1.0, 2.0, 2.5, 10.0] {
            let clock = MockClock::new();
            let mut limiter = RateLimiter::new(rps);
            let mut times = Vec::new();
            for i in 0..60 {
                if i % 7 == 3 {
                    clock.advance(Duration::from_millis(1300));
                }
                times.push(limiter.acquire(&clock));
            }
            for (i, &t) in times.iter().enumerate() {
                let in_window = times[i..].iter().take_while(|&&u| u < t + WINDOW).count();
                if rps >= 1.0 {
                    assert!(in_window as f64 <= rps, "rps {rps}: {in_window} in window at {t:?}");
                } else {
                    assert_eq!(in_window, 1);
                }
            }
            for w in times.windows(2) {
                assert!(w[1] - w[0] >= Duration::from_secs_f64(1.0 / rps) - Duration::from_nanos(1));
            }
        }
    }
}
