//! Versioned line-delimited report records, shared by `allocate --out` and
//! `verify --out`. Each line is one JSON object carrying `version` and a
//! `record` tag.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::verify::Witness;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub version: u32,
    #[serde(flatten)]
    pub body: RecordBody,
}

impl Record {
    pub fn new(body: RecordBody) -> Self {
        Record {
            version: REPORT_VERSION,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum RecordBody {
    /// Shares after one arrival; values are exact fraction strings.
    Allocation {
        instance: String,
        mechanism: String,
        step: usize,
        arrived: Vec<String>,
        shares: Vec<(String, String)>,
    },
    /// Aggregate outcome of one property over one game source.
    Property {
        instance: String,
        property: String,
        verdict: Verdict,
        checked: u64,
        failures: u64,
    },
    /// A failing instance with enough detail to re-run it alone.
    Witness {
        instance: String,
        property: String,
        verdict: Verdict,
        witness: Box<Witness>,
    },
    Summary {
        suite: String,
        verdict: Verdict,
        properties: usize,
        checked: u64,
        failures: u64,
    },
}

pub fn write_records<W: Write>(mut out: W, records: &[Record]) -> io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: unsupported report version {version}")]
    Version { line: usize, version: u32 },
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<Record>, ReadError> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|source| ReadError::Parse {
            line: k + 1,
            source,
        })?;
        if record.version != REPORT_VERSION {
            return Err(ReadError::Version {
                line: k + 1,
                version: record.version,
            });
        }
        out.push(record);
    }
    Ok(out)
}
