//! Text format for forcing signals.
//!
//! ```text
//! # channels: 2
//! # period: none
//! -inf,0.0000000000000000e0,1.0000000000000000e0
//! -1.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0
//! ```
//!
//! Each data row is a segment start followed by that segment's channel values.
//! Aperiodic files begin with a `-inf` row for the leading segment; periodic
//! files list one row per breakpoint within a single period. Numbers carry 17
//! significant digits, enough for an exact round trip.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::ForcingSignal;
use crate::error::{Error, Result};

pub fn write_signal(f: &ForcingSignal, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    write_to(f, &mut out)?;
    out.flush()?;
    Ok(())
}

pub(crate) fn write_to<W: Write>(f: &ForcingSignal, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# channels: {}", f.channels())?;
    match f.period() {
        Some(t) => writeln!(out, "# period: {t:.16e}")?,
        None => writeln!(out, "# period: none")?,
    }
    for k in 0..f.segment_count() {
        let (start, _) = f.segment_bounds(k);
        if start == f64::NEG_INFINITY {
            write!(out, "-inf")?;
        } else {
            write!(out, "{start:.16e}")?;
        }
        for v in f.segment_values(k) {
            write!(out, ",{v:.16e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<ForcingSignal> {
    read_from(BufReader::new(fs::File::open(path)?))
}

pub(crate) fn read_from<R: BufRead>(input: R) -> Result<ForcingSignal> {
    let mut channels: Option<usize> = None;
    let mut period: Option<Option<f64>> = None;
    let mut starts = Vec::new();
    let mut rows = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let fail = |message: String| Error::Format { line: lineno, message };
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                match key.trim() {
                    "channels" => {
                        let n: usize = value
                            .trim()
                            .parse()
                            .map_err(|e| fail(format!("bad channel count: {e}")))?;
                        if n == 0 {
                            return Err(fail("channel list is empty".into()));
                        }
                        channels = Some(n);
                    }
                    "period" => {
                        let v = value.trim();
                        period = Some(if v == "none" {
                            None
                        } else {
                            Some(v.parse().map_err(|e| fail(format!("bad period: {e}")))?)
                        });
                    }
                    _ => {}
                }
            }
            continue;
        }
        let n = channels.ok_or_else(|| fail("data before '# channels:' header".into()))?;
        let mut fields = text.split(',').map(str::trim);
        let start = match fields.next().unwrap() {
            "-inf" => f64::NEG_INFINITY,
            s => s.parse().map_err(|e| fail(format!("bad breakpoint {s:?}: {e}")))?,
        };
        let values = fields
            .map(|s| s.parse::<f64>().map_err(|e| fail(format!("bad value {s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != n {
            return Err(fail(format!("expected {n} values, found {}", values.len())));
        }
        if let Some(&prev) = starts.last() {
            if start <= prev {
                return Err(fail(format!("breakpoints not increasing: {start} after {prev}")));
            }
        }
        starts.push(start);
        rows.push(values);
    }

    if channels.is_none() {
        return Err(Error::Format {
            line: 0,
            message: "missing '# channels:' header".into(),
        });
    }
    let period = period.ok_or_else(|| Error::Format {
        line: 0,
        message: "missing '# period:' header".into(),
    })?;
    match period {
        None => {
            if starts.first() != Some(&f64::NEG_INFINITY) {
                return Err(Error::Format {
                    line: 0,
                    message: "aperiodic signal must start with a '-inf' row".into(),
                });
            }
            ForcingSignal::aperiodic(starts[1..].to_vec(), rows)
        }
        Some(t) => ForcingSignal::periodic(starts, rows, t),
    }
}
