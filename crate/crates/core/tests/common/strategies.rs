//! Proptest strategies for records.

use proptest::collection::vec;
use proptest::prelude::*;
use txgraph::TxRecord;

/// 2015-01-01 .. roughly 2017-01-01.
pub const TS_LO: i64 = 1_420_070_400;
pub const TS_HI: i64 = 1_483_228_800;

/// Addresses from a small pool so that transactions collide.
pub fn address(pool: u32) -> impl Strategy<Value = String> {
    (0..pool).prop_map(|i| format!("addr{i}"))
}

pub fn record(pool: u32) -> impl Strategy<Value = TxRecord> {
    (
        TS_LO..TS_HI,
        any::<bool>(),
        vec(address(pool), 1..5),
        vec(address(pool), 1..5),
    )
        .prop_map(|(ts, coinbase, inputs, outputs)| {
            if coinbase {
                TxRecord::coinbase(ts, outputs).unwrap()
            } else {
                TxRecord::transfer(ts, inputs, outputs).unwrap()
            }
        })
}

pub fn records(pool: u32, max: usize) -> impl Strategy<Value = Vec<TxRecord>> {
    vec(record(pool), 0..max)
}
