//! Binary snapshot of an address table plus a run of monthly graphs.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    8 bytes  "TXGRAPH\0"
//! version  u32      1
//! genesis  i32 year, u32 month
//! names    u64 count, then per name: u32 byte length + UTF-8 bytes
//! months   u32 count, then per month:
//!            u32 month index, u64 self transfers,
//!            u64 n + n×u32 nodes,
//!            u64 m + m×(u32,u32) undirected,
//!            u64 k + k×(u32,u32) directed
//! ```
//!
//! Cumulative graphs are not stored; they are refolded from the months.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::{AddressTable, EdgeSets, GraphError, GraphView, MonthlyGraph, NodeId};
use crate::ingest::{MonthIndex, YearMonth};

const MAGIC: &[u8; 8] = b"TXGRAPH\0";
const VERSION: u32 = 1;

/// Everything needed to rerun the metric passes without the record files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSnapshot {
    pub genesis: YearMonth,
    pub table: AddressTable,
    pub months: Vec<MonthlyGraph>,
}

impl GraphSnapshot {
    pub fn write_to<W: Write>(&self, out: W) -> Result<(), GraphError> {
        let mut w = BufWriter::new(out);
        w.write_all(MAGIC)?;
        w.write_u32::<LE>(VERSION)?;
        w.write_i32::<LE>(self.genesis.year())?;
        w.write_u32::<LE>(self.genesis.month())?;
        w.write_u64::<LE>(self.table.len() as u64)?;
        for name in self.table.names() {
            w.write_u32::<LE>(name.len() as u32)?;
            w.write_all(name.as_bytes())?;
        }
        w.write_u32::<LE>(self.months.len() as u32)?;
        for g in &self.months {
            w.write_u32::<LE>(g.month.0)?;
            w.write_u64::<LE>(g.self_transfers())?;
            w.write_u64::<LE>(g.nodes().len() as u64)?;
            for &n in g.nodes() {
                w.write_u32::<LE>(n)?;
            }
            write_pairs(&mut w, g.undirected_edges())?;
            write_pairs(&mut w, g.directed_edges())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self, GraphError> {
        Self::read_inner(input).map_err(|e| match e {
            GraphError::Io(io) if io.kind() == io::ErrorKind::UnexpectedEof => {
                GraphError::Corrupt("truncated snapshot".into())
            }
            other => other,
        })
    }

    fn read_inner<R: Read>(input: R) -> Result<Self, GraphError> {
        let mut r = BufReader::new(input);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(GraphError::Corrupt("not a graph snapshot".into()));
        }
        let version = r.read_u32::<LE>()?;
        if version != VERSION {
            return Err(GraphError::Corrupt(format!("unsupported snapshot version {version}")));
        }
        let year = r.read_i32::<LE>()?;
        let month = r.read_u32::<LE>()?;
        let genesis = YearMonth::new(year, month).map_err(|e| GraphError::Corrupt(e.to_string()))?;

        let n_names = r.read_u64::<LE>()?;
        let mut names = Vec::with_capacity(n_names.min(1 << 24) as usize);
        for _ in 0..n_names {
            let len = r.read_u32::<LE>()? as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf)?;
            names.push(String::from_utf8(buf).map_err(|e| GraphError::Corrupt(e.to_string()))?);
        }
        let table = AddressTable::from_names(names)?;

        let n_months = r.read_u32::<LE>()?;
        let mut months = Vec::with_capacity(n_months as usize);
        for expected in 0..n_months {
            let idx = r.read_u32::<LE>()?;
            if idx != expected {
                return Err(GraphError::Corrupt(format!("month {idx} out of sequence")));
            }
            let self_transfers = r.read_u64::<LE>()?;
            let n = r.read_u64::<LE>()?;
            let mut nodes = Vec::with_capacity(n.min(1 << 24) as usize);
            for _ in 0..n {
                nodes.push(r.read_u32::<LE>()?);
            }
            let undirected = read_pairs(&mut r)?;
            let directed = read_pairs(&mut r)?;
            if nodes.last().is_some_and(|&id| id as usize >= table.len()) {
                return Err(GraphError::Corrupt("node id outside address table".into()));
            }
            let edges = EdgeSets::from_sorted(nodes, undirected, directed, self_transfers)?;
            months.push(MonthlyGraph::from_edge_sets(MonthIndex(idx), edges));
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(GraphError::Corrupt("trailing bytes after snapshot".into()));
        }
        Ok(GraphSnapshot { genesis, table, months })
    }

    pub fn save(&self, path: &Path) -> Result<(), GraphError> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self, GraphError> {
        Self::read_from(File::open(path)?)
    }
}

fn write_pairs<W: Write>(w: &mut W, pairs: &[(NodeId, NodeId)]) -> io::Result<()> {
    w.write_u64::<LE>(pairs.len() as u64)?;
    for &(a, b) in pairs {
        w.write_u32::<LE>(a)?;
        w.write_u32::<LE>(b)?;
    }
    Ok(())
}

fn read_pairs<R: Read>(r: &mut R) -> io::Result<Vec<(NodeId, NodeId)>> {
    let n = r.read_u64::<LE>()?;
    let mut pairs = Vec::with_capacity(n.min(1 << 24) as usize);
    for _ in 0..n {
        pairs.push((r.read_u32::<LE>()?, r.read_u32::<LE>()?));
    }
    Ok(pairs)
}
