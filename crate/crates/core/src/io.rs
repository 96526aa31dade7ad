// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Stream files: a `t,item,count` CSV plus a JSON sidecar carrying `T`, `U` and
//! the regime.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stream::{validate_stream, EventStream, Regime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamMeta {
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "U")]
    pub universe: usize,
    pub regime: Regime,
}

impl StreamMeta {
    pub fn of(stream: &EventStream) -> Self {
        Self {
            horizon: stream.horizon(),
            universe: stream.universe(),
            regime: stream.regime(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    t: usize,
    item: usize,
    count: u64,
}

/// CSV writer with `\n` line endings. Headers are written explicitly so that
/// empty tables still carry them.
pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_stream_csv<W: Write>(stream: &EventStream, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["t", "item", "count"])?;
    for (t, item, count) in stream.entries() {
        out.serialize(Row { t, item, count })?;
    }
    out.flush()?;
    Ok(())
}

/// Reads rows into a stream described by `meta` and validates the result.
pub fn read_stream_csv<R: Read>(meta: StreamMeta, r: R) -> Result<EventStream> {
    let mut stream = EventStream::new(meta.horizon, meta.universe, meta.regime)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    for row in reader.deserialize() {
        let row: Row = row?;
        stream.add(row.t, row.item, row.count)?;
    }
    validate_stream(&stream)?;
    Ok(stream)
}

/// Sidecar path convention: `events.csv` pairs with `events.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_stream(stream: &EventStream, csv_path: &Path, meta_path: &Path) -> Result<()> {
    write_stream_csv(stream, BufWriter::new(File::create(csv_path)?))?;
    let mut meta = BufWriter::new(File::create(meta_path)?);
    serde_json::to_writer_pretty(&mut meta, &StreamMeta::of(stream))?;
    meta.write_all(b"\n")?;
    meta.flush()?;
    Ok(())
}

pub fn read_stream(csv_path: &Path, meta_path: &Path) -> Result<EventStream> {
    let meta: StreamMeta = serde_json::from_reader(BufReader::new(File::open(meta_path)?))?;
    read_stream_csv(meta, BufReader::new(File::open(csv_path)?))
}
