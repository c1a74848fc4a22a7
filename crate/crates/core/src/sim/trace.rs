//! Per-day CSV trace.
//!
//! Columns: `day,demand,shipment,on_hand,position,backorder_total,orders_placed,deliveries`.
//! One row per simulated day, header first, comma separated.

use std::io::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day: u32,
    pub demand: f64,
    pub shipment: f64,
    pub on_hand: f64,
    pub position: f64,
    pub backorder_total: f64,
    pub orders_placed: u32,
    pub deliveries: f64,
}

pub struct TraceWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            inner: csv::Writer::from_writer(out),
        }
    }

    pub fn write(&mut self, record: &DayRecord) -> csv::Result<()> {
        self.inner.serialize(record)
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error())
    }
}

pub fn read_trace<R: std::io::Read>(input: R) -> csv::Result<Vec<DayRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
