//! The `.pts` binary timestamp container.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  "PTS1"
//! version u16      currently 1
//! nchan   u8       number of distinct channels
//! duration_ps u64
//! records (channel u8, time_ps u64)*   sorted by time
//! ```

use std::path::Path;

use super::{group_streams, merge_events, FormatError};
use crate::tcspc::TimestampStream;

pub const MAGIC: &[u8; 4] = b"PTS1";
pub const VERSION: u16 = 1;

/// Serializes streams (which must share one duration) into `.pts` bytes,
/// merged by time with ties broken by channel id, so the output is a pure
/// function of the inputs.
pub fn write_pts_bytes(streams: &[&TimestampStream]) -> Result<Vec<u8>, FormatError> {
    let events = merge_events(streams)?;
    let duration = streams[0].duration_ps();
    let mut out = Vec::with_capacity(15 + 9 * events.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(streams.len() as u8);
    out.extend_from_slice(&(duration as u64).to_le_bytes());
    for (channel, time) in events {
        if time < 0 {
            return Err(FormatError::NegativeTime(time));
        }
        out.push(channel);
        out.extend_from_slice(&(time as u64).to_le_bytes());
    }
    Ok(out)
}

pub fn write_pts<P: AsRef<Path>>(
    path: P,
    streams: &[&TimestampStream],
) -> Result<(), FormatError> {
    let bytes = write_pts_bytes(streams)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Parses `.pts` bytes into per-channel streams (channels ascending).
/// Files whose records are not sorted by time are rejected.
pub fn read_pts_bytes(bytes: &[u8]) -> Result<Vec<TimestampStream>, FormatError> {
    if bytes.len() < 15 {
        return Err(FormatError::Truncated(bytes.len()));
    }
    if &bytes[0..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let declared_channels = bytes[6];
    let duration = u64::from_le_bytes(bytes[7..15].try_into().expect("8 bytes"));
    let body = &bytes[15..];
    if !body.len().is_multiple_of(9) {
        return Err(FormatError::Truncated(bytes.len()));
    }
    let mut records: Vec<(u8, i64)> = Vec::with_capacity(body.len() / 9);
    let mut prev: Option<u64> = None;
    for (index, chunk) in body.chunks_exact(9).enumerate() {
        let channel = chunk[0];
        let time = u64::from_le_bytes(chunk[1..9].try_into().expect("8 bytes"));
        if let Some(p) = prev {
            if p > time {
                return Err(FormatError::UnsortedFile {
                    index,
                    prev: p,
                    next: time,
                });
            }
        }
        prev = Some(time);
        records.push((channel, time as i64));
    }
    let mut found: Vec<u8> = records.iter().map(|&(c, _)| c).collect();
    found.sort_unstable();
    found.dedup();
    if found.len() != declared_channels as usize {
        return Err(FormatError::ChannelCountMismatch {
            declared: declared_channels,
            found: found.len(),
        });
    }
    group_streams(&records, duration as i64)
}

pub fn read_pts<P: AsRef<Path>>(path: P) -> Result<Vec<TimestampStream>, FormatError> {
    read_pts_bytes(&std::fs::read(path)?)
}
