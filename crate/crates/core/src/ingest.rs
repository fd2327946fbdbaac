//! Normalized transaction records: parsing, writing and month bucketing.
//!
//! Two interchangeable on-disk formats are supported. JSONL carries one object
//! per line:
//!
//! ```text
//! {"ts":1500000000,"inputs":["A","B","C"],"outputs":["D","E"],"coinbase":false}
//! ```
//!
//! CSV carries the header `ts,inputs,outputs,coinbase` with address lists
//! joined by `;`. Both formats round-trip through their writers bit-exactly.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Datelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Reserved address token standing in for the source of every coinbase
/// transaction. It is never a legal address in input data.
pub const SUPERNODE_TOKEN: &str = "$coinbase";

/// Separator for address lists inside a CSV field.
pub const CSV_LIST_SEPARATOR: char = ';';

const CSV_HEADER: [&str; 4] = ["ts", "inputs", "outputs", "coinbase"];

/// Violations of the [`TxRecord`] invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("transaction has no outputs")]
    EmptyOutputs,
    #[error("coinbase transaction must not list inputs")]
    CoinbaseWithInputs,
    #[error("non-coinbase transaction has no inputs")]
    MissingInputs,
    #[error("empty address")]
    EmptyAddress,
    #[error("address {0:?} contains whitespace")]
    Whitespace(String),
    #[error("address {0:?} contains the reserved supernode token")]
    ReservedToken(String),
}

/// One blockchain transaction reduced to the parts the graph needs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TxRecord {
    /// Block time, unix seconds (UTC).
    #[serde(rename = "ts")]
    pub timestamp: i64,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub coinbase: bool,
}

impl TxRecord {
    /// Builds a validated ordinary transaction.
    pub fn transfer<I, O, S, T>(timestamp: i64, inputs: I, outputs: O) -> Result<Self, RecordError>
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let record = TxRecord {
            timestamp,
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
            coinbase: false,
        };
        record.validate()?;
        Ok(record)
    }

    /// Builds a validated coinbase (block reward) transaction.
    pub fn coinbase<O, T>(timestamp: i64, outputs: O) -> Result<Self, RecordError>
    where
        O: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let record = TxRecord {
            timestamp,
            inputs: Vec::new(),
            outputs: outputs.into_iter().map(Into::into).collect(),
            coinbase: true,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<(), RecordError> {
        if self.outputs.is_empty() {
            return Err(RecordError::EmptyOutputs);
        }
        match (self.coinbase, self.inputs.is_empty()) {
            (true, false) => return Err(RecordError::CoinbaseWithInputs),
            (false, true) => return Err(RecordError::MissingInputs),
            _ => {}
        }
        for address in self.inputs.iter().chain(&self.outputs) {
            validate_address(address)?;
        }
        Ok(())
    }
}

fn validate_address(address: &str) -> Result<(), RecordError> {
    if address.is_empty() {
        Err(RecordError::EmptyAddress)
    } else if address.chars().any(char::is_whitespace) {
        Err(RecordError::Whitespace(address.to_owned()))
    } else if address.contains(SUPERNODE_TOKEN) {
        Err(RecordError::ReservedToken(address.to_owned()))
    } else {
        Ok(())
    }
}

/// A UTC calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonthError {
    #[error("invalid year-month {0:?}, expected YYYY-MM")]
    Parse(String),
    #[error("timestamp {0} is out of range")]
    TimestampRange(i64),
    #[error("timestamp {ts} falls before genesis month {genesis}")]
    BeforeGenesis { ts: i64, genesis: YearMonth },
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self, MonthError> {
        if !(1..=12).contains(&month) || !(0..=9999).contains(&year) {
            return Err(MonthError::Parse(format!("{year:04}-{month:02}")));
        }
        Ok(YearMonth { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    /// The calendar month containing `ts`.
    pub fn from_timestamp(ts: i64) -> Result<Self, MonthError> {
        let when = DateTime::from_timestamp(ts, 0).ok_or(MonthError::TimestampRange(ts))?;
        Ok(YearMonth {
            year: when.year(),
            month: when.month(),
        })
    }

    /// Months since year 0, so that consecutive months differ by one.
    pub fn ordinal(self) -> i64 {
        12 * i64::from(self.year) + i64::from(self.month) - 1
    }

    pub fn from_ordinal(ordinal: i64) -> Self {
        YearMonth {
            year: ordinal.div_euclid(12) as i32,
            month: ordinal.rem_euclid(12) as u32 + 1,
        }
    }

    /// The month `index` months after this one.
    pub fn offset(self, index: MonthIndex) -> Self {
        YearMonth::from_ordinal(self.ordinal() + i64::from(index.0))
    }

    /// Unix seconds of the first instant of this month.
    pub fn start_timestamp(self) -> i64 {
        chrono::NaiveDate::from_ymd_opt(self.year, self.month, 1)
            .and_then(|d| d.and_hms_opt(0, 0, 0))
            .map(|d| d.and_utc().timestamp())
            .expect("validated year-month")
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = MonthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MonthError::Parse(s.to_owned());
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        YearMonth::new(year, month).map_err(|_| bad())
    }
}

impl Serialize for YearMonth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Zero-based month offset from the genesis month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonthIndex(pub u32);

impl MonthIndex {
    pub fn next(self) -> MonthIndex {
        MonthIndex(self.0 + 1)
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MonthIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Calendar-month difference between the month of `ts` and `genesis`.
pub fn month_index(ts: i64, genesis: YearMonth) -> Result<MonthIndex, MonthError> {
    let month = YearMonth::from_timestamp(ts)?;
    let diff = month.ordinal() - genesis.ordinal();
    if diff < 0 {
        return Err(MonthError::BeforeGenesis { ts, genesis });
    }
    u32::try_from(diff)
        .map(MonthIndex)
        .map_err(|_| MonthError::TimestampRange(ts))
}

/// The month of the earliest record, used as genesis when none is configured.
pub fn infer_genesis(records: &[TxRecord]) -> Result<Option<YearMonth>, MonthError> {
    records
        .iter()
        .map(|r| r.timestamp)
        .min()
        .map(YearMonth::from_timestamp)
        .transpose()
}

/// Records grouped by month index. Months without records keep an empty slot
/// so that every time series built from the buckets stays aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonthBuckets {
    genesis: YearMonth,
    buckets: Vec<Vec<TxRecord>>,
}

impl MonthBuckets {
    pub fn genesis(&self) -> YearMonth {
        self.genesis
    }

    pub fn month_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn get(&self, month: MonthIndex) -> Option<&[TxRecord]> {
        self.buckets.get(month.as_usize()).map(Vec::as_slice)
    }

    pub fn record_count(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonthIndex, &[TxRecord])> + '_ {
        self.buckets
            .iter()
            .enumerate()
            .map(|(i, b)| (MonthIndex(i as u32), b.as_slice()))
    }

    pub fn into_inner(self) -> Vec<Vec<TxRecord>> {
        self.buckets
    }
}

/// Groups records by calendar month relative to `genesis`. Order within a
/// bucket follows input order; input order itself need not be chronological.
pub fn bucket_by_month<I>(records: I, genesis: YearMonth) -> Result<MonthBuckets, MonthError>
where
    I: IntoIterator<Item = TxRecord>,
{
    let mut buckets: Vec<Vec<TxRecord>> = Vec::new();
    for record in records {
        let idx = month_index(record.timestamp, genesis)?.as_usize();
        if idx >= buckets.len() {
            buckets.resize_with(idx + 1, Vec::new);
        }
        buckets[idx].push(record);
    }
    Ok(MonthBuckets { genesis, buckets })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    File,
    Explorer,
}

/// Sidecar description of a record file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub coin_name: String,
    /// `None` when the producing run saw no blocks (for example a resumed
    /// fetch whose range was already complete).
    pub genesis_month: Option<YearMonth>,
    pub record_count: u64,
    pub source: DataSource,
}

impl DatasetManifest {
    pub fn read(path: &Path) -> io::Result<Self> {
        let file = File::open(path)?;
        serde_json::from_reader(BufReader::new(file)).map_err(io::Error::other)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, self).map_err(io::Error::other)?;
        out.write_all(b"\n")?;
        out.flush()
    }
}

#[derive(Debug, Error)]
pub enum IngestErrorKind {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("invalid record: {0}")]
    Record(#[from] RecordError),
    #[error("address {0:?} cannot be written to CSV (contains the list separator)")]
    Unrepresentable(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// An ingest failure with the 1-based line it occurred on (0 when not tied to
/// a line, e.g. write errors).
#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct IngestError {
    pub line: u64,
    pub kind: IngestErrorKind,
}

impl IngestError {
    fn at(line: u64, kind: impl Into<IngestErrorKind>) -> Self {
        IngestError {
            line,
            kind: kind.into(),
        }
    }

    fn is_io(&self) -> bool {
        matches!(self.kind, IngestErrorKind::Io(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Skip and count bad records instead of failing on the first one.
    pub lenient: bool,
}

/// Records parsed from a file together with the lenient-mode skip tally.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parsed {
    pub records: Vec<TxRecord>,
    pub skipped: u64,
}

#[derive(Deserialize)]
struct JsonRecord {
    ts: i64,
    inputs: Vec<String>,
    outputs: Vec<String>,
    coinbase: bool,
}

/// Streaming JSONL reader yielding records in file order. Blank lines are
/// ignored.
pub struct JsonlRecords<R> {
    reader: R,
    line: u64,
    buf: String,
}

impl<R: BufRead> JsonlRecords<R> {
    pub fn new(reader: R) -> Self {
        JsonlRecords {
            reader,
            line: 0,
            buf: String::new(),
        }
    }
}

impl<R: BufRead> Iterator for JsonlRecords<R> {
    type Item = Result<TxRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            self.line += 1;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(IngestError::at(self.line, e))),
            }
            let text = self.buf.trim_end_matches(['\n', '\r']);
            if text.trim().is_empty() {
                continue;
            }
            return Some(parse_json_line(text, self.line));
        }
    }
}

fn parse_json_line(text: &str, line: u64) -> Result<TxRecord, IngestError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| IngestError::at(line, IngestErrorKind::Json(e.to_string())))?;
    let raw: JsonRecord = serde_json::from_value(value)
        .map_err(|e| IngestError::at(line, IngestErrorKind::Schema(e.to_string())))?;
    let record = TxRecord {
        timestamp: raw.ts,
        inputs: raw.inputs,
        outputs: raw.outputs,
        coinbase: raw.coinbase,
    };
    record.validate().map_err(|e| IngestError::at(line, e))?;
    Ok(record)
}

fn collect<I>(iter: I, options: ParseOptions) -> Result<Parsed, IngestError>
where
    I: Iterator<Item = Result<TxRecord, IngestError>>,
{
    let mut parsed = Parsed::default();
    for item in iter {
        match item {
            Ok(record) => parsed.records.push(record),
            Err(e) if options.lenient && !e.is_io() => parsed.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(parsed)
}

pub fn parse_jsonl<R: Read>(reader: R, options: ParseOptions) -> Result<Parsed, IngestError> {
    collect(JsonlRecords::new(BufReader::new(reader)), options)
}

/// Streaming CSV reader yielding records in file order.
pub struct CsvRecords<R> {
    reader: csv::Reader<R>,
    header_error: Option<IngestError>,
    record: csv::StringRecord,
    done: bool,
}

impl<R: Read> CsvRecords<R> {
    pub fn new(reader: R) -> Self {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(reader);
        let header_error = match reader.headers() {
            Ok(h) if h.iter().eq(CSV_HEADER) => None,
            Ok(h) => Some(IngestError::at(
                1,
                IngestErrorKind::Schema(format!(
                    "expected header {}, found {}",
                    CSV_HEADER.join(","),
                    h.iter().collect::<Vec<_>>().join(",")
                )),
            )),
            Err(e) => Some(csv_error(e, 1)),
        };
        CsvRecords {
            reader,
            header_error,
            record: csv::StringRecord::new(),
            done: false,
        }
    }
}

fn csv_error(e: csv::Error, fallback_line: u64) -> IngestError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IngestError::at(line, io),
        other => IngestError::at(line, IngestErrorKind::Csv(format!("{other:?}"))),
    }
}

impl<R: Read> Iterator for CsvRecords<R> {
    type Item = Result<TxRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if let Some(e) = self.header_error.take() {
            // A bad header makes every following row meaningless.
            self.done = true;
            return Some(Err(e));
        }
        match self.reader.read_record(&mut self.record) {
            Ok(false) => {
                self.done = true;
                None
            }
            Ok(true) => {
                let line = self.record.position().map_or(0, |p| p.line());
                Some(parse_csv_row(&self.record, line))
            }
            Err(e) => {
                let fatal = matches!(e.kind(), csv::ErrorKind::Io(_));
                self.done = fatal;
                let line = e.position().map_or(0, |p| p.line());
                Some(Err(csv_error(e, line)))
            }
        }
    }
}

fn split_list(field: &str) -> Vec<String> {
    if field.is_empty() {
        Vec::new()
    } else {
        field.split(CSV_LIST_SEPARATOR).map(str::to_owned).collect()
    }
}

fn parse_csv_row(row: &csv::StringRecord, line: u64) -> Result<TxRecord, IngestError> {
    let schema = |msg: String| IngestError::at(line, IngestErrorKind::Schema(msg));
    let ts = row[0]
        .parse::<i64>()
        .map_err(|_| schema(format!("ts {:?} is not an integer", &row[0])))?;
    let coinbase = match &row[3] {
        "true" => true,
        "false" => false,
        other => return Err(schema(format!("coinbase {other:?} is not true/false"))),
    };
    let record = TxRecord {
        timestamp: ts,
        inputs: split_list(&row[1]),
        outputs: split_list(&row[2]),
        coinbase,
    };
    record.validate().map_err(|e| IngestError::at(line, e))?;
    Ok(record)
}

pub fn parse_csv<R: Read>(reader: R, options: ParseOptions) -> Result<Parsed, IngestError> {
    collect(CsvRecords::new(reader), options)
}

/// Record file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Jsonl,
    Csv,
}

impl RecordFormat {
    /// Guesses the format from a file extension (`.csv` or anything else as JSONL).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => RecordFormat::Csv,
            _ => RecordFormat::Jsonl,
        }
    }

    pub fn parse<R: Read>(self, reader: R, options: ParseOptions) -> Result<Parsed, IngestError> {
        match self {
            RecordFormat::Jsonl => parse_jsonl(reader, options),
            RecordFormat::Csv => parse_csv(reader, options),
        }
    }
}

impl FromStr for RecordFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(RecordFormat::Jsonl),
            "csv" => Ok(RecordFormat::Csv),
            other => Err(format!("unknown record format {other:?} (expected csv or jsonl)")),
        }
    }
}

pub fn read_records(path: &Path, format: RecordFormat, options: ParseOptions) -> Result<Parsed, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::at(0, e))?;
    format.parse(file, options)
}

/// Destination for a stream of records.
pub trait RecordSink {
    fn write_record(&mut self, record: &TxRecord) -> Result<(), IngestError>;

    /// Pushes buffered records to the underlying writer.
    fn flush(&mut self) -> Result<(), IngestError> {
        Ok(())
    }

    fn finish(&mut self) -> Result<(), IngestError> {
        self.flush()
    }
}

impl RecordSink for Vec<TxRecord> {
    fn write_record(&mut self, record: &TxRecord) -> Result<(), IngestError> {
        self.push(record.clone());
        Ok(())
    }
}

pub struct JsonlWriter<W: Write> {
    out: W,
}

impl<W: Write> JsonlWriter<W> {
    pub fn new(out: W) -> Self {
        JsonlWriter { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> RecordSink for JsonlWriter<W> {
    fn write_record(&mut self, record: &TxRecord) -> Result<(), IngestError> {
        serde_json::to_writer(&mut self.out, record).map_err(|e| IngestError::at(0, io::Error::other(e)))?;
        self.out.write_all(b"\n").map_err(|e| IngestError::at(0, e))
    }

    fn flush(&mut self) -> Result<(), IngestError> {
        self.out.flush().map_err(|e| IngestError::at(0, e))
    }
}

pub struct CsvWriter<W: Write> {
    out: csv::Writer<W>,
    wrote_header: bool,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W) -> Self {
        CsvWriter {
            out: csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out),
            wrote_header: false,
        }
    }

    /// A writer for a file that already starts with the header row.
    pub fn appending(out: W) -> Self {
        CsvWriter {
            wrote_header: true,
            ..Self::new(out)
        }
    }

    fn ensure_header(&mut self) -> Result<(), IngestError> {
        if !self.wrote_header {
            self.out.write_record(CSV_HEADER).map_err(|e| csv_error(e, 0))?;
            self.wrote_header = true;
        }
        Ok(())
    }

    pub fn into_inner(mut self) -> Result<W, IngestError> {
        self.ensure_header()?;
        self.out
            .into_inner()
            .map_err(|e| IngestError::at(0, io::Error::other(e.to_string())))
    }
}

fn join_list(addresses: &[String]) -> Result<String, IngestError> {
    if let Some(bad) = addresses.iter().find(|a| a.contains(CSV_LIST_SEPARATOR)) {
        return Err(IngestError::at(0, IngestErrorKind::Unrepresentable(bad.clone())));
    }
    Ok(addresses.join(";"))
}

impl<W: Write> RecordSink for CsvWriter<W> {
    fn write_record(&mut self, record: &TxRecord) -> Result<(), IngestError> {
        self.ensure_header()?;
        let ts = record.timestamp.to_string();
        let inputs = join_list(&record.inputs)?;
        let outputs = join_list(&record.outputs)?;
        let coinbase = if record.coinbase { "true" } else { "false" };
        self.out
            .write_record([ts.as_str(), &inputs, &outputs, coinbase])
            .map_err(|e| csv_error(e, 0))
    }

    fn flush(&mut self) -> Result<(), IngestError> {
        self.out.flush().map_err(|e| IngestError::at(0, e))
    }

    fn finish(&mut self) -> Result<(), IngestError> {
        self.ensure_header()?;
        self.flush()
    }
}

/// Writes `records` in the given format.
pub fn write_records<W: Write>(records: &[TxRecord], format: RecordFormat, out: W) -> Result<(), IngestError> {
    match format {
        RecordFormat::Jsonl => {
            let mut sink = JsonlWriter::new(out);
            records.iter().try_for_each(|r| sink.write_record(r))?;
            sink.finish()
        }
        RecordFormat::Csv => {
            let mut sink = CsvWriter::new(out);
            records.iter().try_for_each(|r| sink.write_record(r))?;
            sink.finish()
        }
    }
}
