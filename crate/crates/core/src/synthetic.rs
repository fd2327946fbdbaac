//! Seeded transaction generators for tests, benchmarks and demos.
//!
//! [`baseline`] produces a preferential-attachment style series: each
//! endpoint is either a fresh address or an existing one drawn in proportion
//! to how often it has been used, which yields a heavy-tailed degree
//! distribution. [`hub_month`] produces a burst of many hubs fully wired to a
//! feeder population plus degree-one leaves, a strongly disassortative pattern
//! with a very high edge-to-vertex ratio.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{TxRecord, YearMonth};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub start: YearMonth,
    pub months: u32,
    /// Total transactions, spread evenly over the months.
    pub transactions: usize,
    pub seed: u64,
    /// Probability that an endpoint is a never-seen address.
    pub new_address_prob: f64,
    pub max_inputs: usize,
    pub max_outputs: usize,
    /// One coinbase transaction every this many transactions.
    pub coinbase_every: usize,
    /// Prefix for generated address names.
    pub prefix: String,
}

impl BaselineConfig {
    pub fn new(start: YearMonth, months: u32, transactions: usize, seed: u64) -> Self {
        BaselineConfig {
            start,
            months,
            transactions,
            seed,
            new_address_prob: 0.4,
            max_inputs: 3,
            max_outputs: 3,
            coinbase_every: 50,
            prefix: "a".into(),
        }
    }
}

/// Length of `month` in seconds.
pub fn month_seconds(month: YearMonth) -> i64 {
    YearMonth::from_ordinal(month.ordinal() + 1).start_timestamp() - month.start_timestamp()
}

struct AddressPool {
    prefix: String,
    next: u64,
    /// One entry per past use, so uniform picks are degree-weighted.
    urn: Vec<u64>,
}

impl AddressPool {
    fn pick(&mut self, rng: &mut ChaCha8Rng, new_prob: f64) -> u64 {
        let id = if self.urn.is_empty() || rng.random_bool(new_prob) {
            self.next += 1;
            self.next - 1
        } else {
            self.urn[rng.random_range(0..self.urn.len())]
        };
        self.urn.push(id);
        id
    }

    fn distinct(&mut self, rng: &mut ChaCha8Rng, new_prob: f64, count: usize, avoid: &[u64]) -> Vec<u64> {
        let mut ids: Vec<u64> = Vec::with_capacity(count);
        let mut attempts = 0;
        while ids.len() < count && attempts < count * 8 {
            attempts += 1;
            let id = self.pick(rng, new_prob);
            if !ids.contains(&id) && !avoid.contains(&id) {
                ids.push(id);
            }
        }
        if ids.is_empty() {
            self.next += 1;
            ids.push(self.next - 1);
        }
        ids
    }

    fn names(&self, ids: &[u64]) -> Vec<String> {
        ids.iter().map(|id| format!("{}{id}", self.prefix)).collect()
    }
}

/// A preferential-attachment transaction series with timestamps uniform
/// within each month. Transactions come out in timestamp order.
pub fn baseline(config: &BaselineConfig) -> Vec<TxRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pool = AddressPool {
        prefix: config.prefix.clone(),
        next: 0,
        urn: Vec::with_capacity(config.transactions * 4),
    };
    let months = config.months.max(1) as usize;
    let mut out = Vec::with_capacity(config.transactions);
    for m in 0..months {
        let month = YearMonth::from_ordinal(config.start.ordinal() + m as i64);
        let base = month.start_timestamp();
        let span = month_seconds(month);
        let count = config.transactions / months + usize::from(m < config.transactions % months);
        let mut stamps: Vec<i64> = (0..count).map(|_| base + rng.random_range(0..span)).collect();
        stamps.sort_unstable();
        for ts in stamps {
            let global = out.len();
            if config.coinbase_every > 0 && global % config.coinbase_every == 0 {
                let miner = pool.distinct(&mut rng, config.new_address_prob, 1, &[]);
                out.push(TxRecord::coinbase(ts, pool.names(&miner)).expect("generated coinbase is valid"));
                continue;
            }
            let n_in = rng.random_range(1..=config.max_inputs.max(1));
            let n_out = rng.random_range(1..=config.max_outputs.max(1));
            // Inputs spend from existing addresses where possible.
            let inputs = pool.distinct(&mut rng, config.new_address_prob * 0.5, n_in, &[]);
            let outputs = pool.distinct(&mut rng, config.new_address_prob, n_out, &inputs);
            out.push(TxRecord::transfer(ts, pool.names(&inputs), pool.names(&outputs)).expect("generated transfer is valid"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubConfig {
    pub month: YearMonth,
    pub hubs: usize,
    pub feeders: usize,
    /// Feeder addresses per funding transaction; every such transaction pays
    /// all hubs, so hubs and feeders end up completely bipartite.
    pub feeders_per_tx: usize,
    pub leaves_per_hub: usize,
    pub seed: u64,
    pub prefix: String,
}

impl HubConfig {
    pub fn new(month: YearMonth, seed: u64) -> Self {
        HubConfig {
            month,
            hubs: 50,
            feeders: 2000,
            feeders_per_tx: 200,
            leaves_per_hub: 40,
            seed,
            prefix: "hub".into(),
        }
    }
}

/// Transactions for one hub-burst month, all addresses fresh.
pub fn hub_month(config: &HubConfig) -> Vec<TxRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let base = config.month.start_timestamp();
    let span = month_seconds(config.month);
    let p = &config.prefix;
    let hubs: Vec<String> = (0..config.hubs).map(|h| format!("{p}-h{h}")).collect();
    let mut out = Vec::new();
    let feeders: Vec<String> = (0..config.feeders).map(|f| format!("{p}-f{f}")).collect();
    for chunk in feeders.chunks(config.feeders_per_tx.max(1)) {
        let ts = base + rng.random_range(0..span);
        out.push(TxRecord::transfer(ts, chunk.to_vec(), hubs.clone()).expect("generated hub funding is valid"));
    }
    for (h, hub) in hubs.iter().enumerate() {
        if config.leaves_per_hub == 0 {
            continue;
        }
        let ts = base + rng.random_range(0..span);
        let leaves: Vec<String> = (0..config.leaves_per_hub).map(|l| format!("{p}-l{h}-{l}")).collect();
        out.push(TxRecord::transfer(ts, [hub.clone()], leaves).expect("generated hub payout is valid"));
    }
    out.sort_by_key(|r| r.timestamp);
    out
}
