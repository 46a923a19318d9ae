//! Timestamp file formats.
//!
//! The native format is `.pts` (see [`pts`]); a `channel,time_ps` CSV is
//! accepted as a plain-text alternative.

pub mod pts;

pub use pts::{read_pts, read_pts_bytes, write_pts, write_pts_bytes};

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::tcspc::{TcspcError, TimestampStream};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic: expected `PTS1`")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("file truncated at byte {0}")]
    Truncated(usize),
    #[error("header declares {declared} channels but records use {found}")]
    ChannelCountMismatch { declared: u8, found: usize },
    #[error("streams written together must share one duration")]
    MixedDurations,
    #[error("timestamp {0} ps cannot be negative in a file")]
    NegativeTime(i64),
    #[error("records not sorted by time at record {index}: {prev} ps then {next} ps")]
    UnsortedFile { index: usize, prev: u64, next: u64 },
    #[error("malformed CSV row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("no records in input")]
    Empty,
    #[error(transparent)]
    Stream(#[from] TcspcError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Reads the `channel,time_ps` CSV alternative. Records must be sorted by
/// time. The acquisition duration is not part of the CSV; pass it in, or
/// `None` to use the last timestamp.
pub fn read_timestamps_csv<R: Read>(
    reader: R,
    duration_ps: Option<i64>,
) -> Result<Vec<TimestampStream>, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(reader);
    {
        let headers = rdr.headers().map_err(|e| FormatError::MalformedRow {
            row: 0,
            reason: e.to_string(),
        })?;
        let joined = headers.iter().collect::<Vec<_>>().join(",");
        if joined != "channel,time_ps" {
            return Err(FormatError::MalformedRow {
                row: 0,
                reason: format!("expected header `channel,time_ps`, got `{joined}`"),
            });
        }
    }
    let mut records: Vec<(u8, i64)> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| FormatError::MalformedRow {
            row,
            reason: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(FormatError::MalformedRow {
                row,
                reason: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let channel: u8 = record[0].parse().map_err(|_| FormatError::MalformedRow {
            row,
            reason: format!("bad channel `{}`", &record[0]),
        })?;
        let time: i64 = record[1].parse().map_err(|_| FormatError::MalformedRow {
            row,
            reason: format!("bad time `{}`", &record[1]),
        })?;
        if time < 0 {
            return Err(FormatError::NegativeTime(time));
        }
        if let Some(&(_, prev)) = records.last() {
            if prev > time {
                return Err(FormatError::UnsortedFile {
                    index: row,
                    prev: prev as u64,
                    next: time as u64,
                });
            }
        }
        records.push((channel, time));
    }
    if records.is_empty() {
        return Err(FormatError::Empty);
    }
    let duration = match duration_ps {
        Some(d) => d,
        None => records.last().map(|&(_, t)| t.max(1)).unwrap_or(1),
    };
    group_streams(&records, duration)
}

pub fn read_timestamps_csv_path<P: AsRef<Path>>(
    path: P,
    duration_ps: Option<i64>,
) -> Result<Vec<TimestampStream>, FormatError> {
    read_timestamps_csv(std::fs::File::open(path)?, duration_ps)
}

/// Writes streams as the `channel,time_ps` CSV, merged in time order
/// (ties resolved by channel id).
pub fn write_timestamps_csv<W: Write>(
    mut writer: W,
    streams: &[&TimestampStream],
) -> Result<(), FormatError> {
    writeln!(writer, "channel,time_ps")?;
    for (channel, time) in merge_events(streams)? {
        writeln!(writer, "{channel},{time}")?;
    }
    Ok(())
}

pub(crate) fn group_streams(
    records: &[(u8, i64)],
    duration_ps: i64,
) -> Result<Vec<TimestampStream>, FormatError> {
    let mut channels: Vec<u8> = records.iter().map(|&(c, _)| c).collect();
    channels.sort_unstable();
    channels.dedup();
    let mut streams = Vec::with_capacity(channels.len());
    for ch in channels {
        let times: Vec<i64> = records
            .iter()
            .filter(|&&(c, _)| c == ch)
            .map(|&(_, t)| t)
            .collect();
        streams.push(TimestampStream::new(ch, times, duration_ps)?);
    }
    Ok(streams)
}

pub(crate) fn merge_events(
    streams: &[&TimestampStream],
) -> Result<Vec<(u8, i64)>, FormatError> {
    if streams.is_empty() {
        return Err(FormatError::Empty);
    }
    let duration = streams[0].duration_ps();
    if streams.iter().any(|s| s.duration_ps() != duration) {
        return Err(FormatError::MixedDurations);
    }
    let mut events: Vec<(u8, i64)> = streams
        .iter()
        .flat_map(|s| s.times_ps().iter().map(|&t| (s.channel(), t)))
        .collect();
    events.sort_unstable_by_key(|&(c, t)| (t, c));
    Ok(events)
}
