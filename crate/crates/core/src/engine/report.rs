//! CSV rows and rendering. Files use LF line endings and floats are written
//! in their shortest round-trip form.

use csv::{ReaderBuilder, Terminator, WriterBuilder};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRAJECTORY_HEADER: &str = "realization,frame,snr_normalized,gap,feedback_bit";
pub const GAP_CDF_HEADER: &str = "frames,gap_threshold,fraction";
pub const BER_HEADER: &str = "scheme,snr_db,bits,errors,ber";
pub const TRACKING_HEADER: &str = "scheme,beta,normalized_doppler,bits,errors,ber";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub realization: u64,
    pub frame: u64,
    pub snr_normalized: f64,
    pub gap: f64,
    pub feedback_bit: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCdfRow {
    pub frames: u64,
    pub gap_threshold: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub scheme: String,
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingRow {
    pub scheme: String,
    pub beta: f64,
    pub normalized_doppler: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
}

/// A record that maps to one CSV line.
pub trait CsvRow: Serialize + DeserializeOwned {
    const HEADER: &'static str;
}

impl CsvRow for TrajectoryRow {
    const HEADER: &'static str = TRAJECTORY_HEADER;
}

impl CsvRow for GapCdfRow {
    const HEADER: &'static str = GAP_CDF_HEADER;
}

impl CsvRow for BerRow {
    const HEADER: &'static str = BER_HEADER;
}

impl CsvRow for TrackingRow {
    const HEADER: &'static str = TRACKING_HEADER;
}

pub fn to_csv<T: CsvRow>(rows: &[T]) -> String {
    let mut w = WriterBuilder::new()
        .has_headers(false)
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8");
    format!("{}\n{body}", T::HEADER)
}

pub fn from_csv<T: CsvRow>(text: &str) -> Result<Vec<T>> {
    match text.lines().next() {
        Some(h) if h == T::HEADER => {}
        other => return Err(Error::Decode(format!("expected header {:?}, got {other:?}", T::HEADER))),
    }
    ReaderBuilder::new()
        .from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Decode(e.to_string())))
        .collect()
}
