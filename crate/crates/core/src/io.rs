//! File formats: surface descriptions, trace tables and count records.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::assembler::RangeEntry;
use crate::surface::{BranchLocus, LineOrbit, LinearForm, Sextic, SixLineSurface, SurfaceError};
use crate::two_adic::TraceTable;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid surface file: {0}")]
    Format(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceMode {
    SixRationalLines,
    S5Rm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFile {
    pub lines: Vec<u8>,
    pub modulus: u64,
    pub generator: u64,
}

/// On-disk surface description. Field order here is the canonical order used
/// for fingerprints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub name: String,
    pub mode: SurfaceMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<[i64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sextic: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_lines: Option<Vec<[i64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_bad_primes: Option<Vec<u64>>,
    pub picard_rank: u32,
    pub trivial_galois_pic: bool,
}

fn parse_key(key: &str) -> Result<(u32, u32, u32), IoError> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    let bad = || IoError::Format(format!("sextic key {key:?} is not of the form \"i,j,k\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<u32> = parts
        .iter()
        .map(|s| s.parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    Ok((v[0], v[1], v[2]))
}

impl SurfaceFile {
    pub fn into_surface(self) -> Result<SixLineSurface, IoError> {
        let missing = |f: &str| IoError::Format(format!("field `{f}` is required for this mode"));
        match self.mode {
            SurfaceMode::SixRationalLines => {
                let lines = self.lines.ok_or_else(|| missing("lines"))?;
                let raw: [[i64; 3]; 6] = lines.try_into().map_err(|v: Vec<[i64; 3]>| {
                    IoError::Format(format!("field `lines`: expected 6 lines, found {}", v.len()))
                })?;
                Ok(SixLineSurface::six_lines(
                    self.name,
                    raw,
                    self.picard_rank,
                    self.trivial_galois_pic,
                )?)
            }
            SurfaceMode::S5Rm => {
                let mut terms = BTreeMap::new();
                for (k, v) in self.sextic.ok_or_else(|| missing("sextic"))? {
                    let key = parse_key(&k)?;
                    if terms.insert(key, v).is_some() {
                        return Err(IoError::Format(format!("duplicate sextic monomial {k:?}")));
                    }
                }
                let sextic = Sextic::new(terms)?;
                let rational = self
                    .rational_lines
                    .ok_or_else(|| missing("rational_lines"))?
                    .into_iter()
                    .map(|c| LinearForm::new(c).map(|(l, _)| l))
                    .collect::<Result<Vec<_>, _>>()?;
                let orbit = self.orbit.ok_or_else(|| missing("orbit"))?;
                let bad = self.odd_bad_primes.ok_or_else(|| missing("odd_bad_primes"))?;
                Ok(SixLineSurface::s5_rm(
                    self.name,
                    sextic,
                    rational,
                    LineOrbit {
                        lines: orbit.lines,
                        modulus: orbit.modulus,
                        generator: orbit.generator,
                    },
                    bad,
                    self.picard_rank,
                    self.trivial_galois_pic,
                )?)
            }
        }
    }

    pub fn from_surface(s: &SixLineSurface) -> Self {
        let mut f = SurfaceFile {
            name: s.name.clone(),
            mode: SurfaceMode::SixRationalLines,
            lines: None,
            sextic: None,
            rational_lines: None,
            orbit: None,
            odd_bad_primes: None,
            picard_rank: s.picard_rank,
            trivial_galois_pic: s.trivial_galois_pic,
        };
        match &s.locus {
            BranchLocus::SixRationalLines { lines, scale } => {
                let mut raw: Vec<[i64; 3]> = lines.iter().map(|l| l.coeffs()).collect();
                // keep the normalisation factor so the sextic is unchanged
                raw[0] = raw[0].map(|c| c * scale);
                f.lines = Some(raw);
            }
            BranchLocus::S5Rm {
                sextic,
                rational_lines,
                orbit,
                odd_bad_primes,
            } => {
                f.mode = SurfaceMode::S5Rm;
                f.sextic = Some(
                    sextic
                        .terms()
                        .iter()
                        .map(|(&(i, j, k), &c)| (format!("{i},{j},{k}"), c))
                        .collect(),
                );
                f.rational_lines = Some(rational_lines.iter().map(|l| l.coeffs()).collect());
                f.orbit = Some(OrbitFile {
                    lines: orbit.lines.clone(),
                    modulus: orbit.modulus,
                    generator: orbit.generator,
                });
                f.odd_bad_primes = Some(odd_bad_primes.clone());
            }
        }
        f
    }
}

/// Parses and validates a surface description.
pub fn parse_surface_str(text: &str) -> Result<SixLineSurface, IoError> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    let s = file.into_surface()?;
    s.validate()?;
    Ok(s)
}

pub fn parse_surface_file(path: impl AsRef<Path>) -> Result<SixLineSurface, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_surface_str(&text)
}

/// Hex SHA-256 of the canonical surface description followed by the rank.
pub fn fingerprint(s: &SixLineSurface) -> String {
    let canonical = serde_json::to_string(&SurfaceFile::from_surface(s)).expect("serialisable");
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    h.update(format!("|r={}", s.picard_rank).as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_table(table: &TraceTable, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(table)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_table(path: impl AsRef<Path>) -> Result<TraceTable, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let table: TraceTable = serde_json::from_str(&text)?;
    table
        .check_shape()
        .map_err(|e| IoError::Format(e.to_string()))?;
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountFormat {
    Csv,
    Jsonl,
}

pub const CSV_HEADER: &str = "p,count,trace_mod16,class_index";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct JsonlRow {
    p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace_mod16: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Writes count records, ascending by `p` as given.
pub fn emit_counts<W: Write>(
    records: &[RangeEntry],
    format: CountFormat,
    mut sink: W,
) -> Result<(), IoError> {
    match format {
        CountFormat::Csv => {
            writeln!(sink, "{CSV_HEADER}")?;
            for r in records {
                match r {
                    RangeEntry::Counted(c) => writeln!(
                        sink,
                        "{},{},{},{}",
                        c.p, c.count, c.trace_mod16, c.class_index
                    )?,
                    RangeEntry::Skipped { p } => writeln!(sink, "# bad {p}")?,
                    RangeEntry::Failed { p, error } => writeln!(sink, "# error {p}: {error}")?,
                }
            }
        }
        CountFormat::Jsonl => {
            for r in records {
                let row = match r {
                    RangeEntry::Counted(c) => JsonlRow {
                        p: c.p,
                        count: Some(c.count),
                        trace_mod16: Some(c.trace_mod16),
                        class_index: Some(c.class_index),
                        skipped: None,
                        error: None,
                    },
                    RangeEntry::Skipped { p } => JsonlRow {
                        p: *p,
                        count: None,
                        trace_mod16: None,
                        class_index: None,
                        skipped: Some("bad".into()),
                        error: None,
                    },
                    RangeEntry::Failed { p, error } => JsonlRow {
                        p: *p,
                        count: None,
                        trace_mod16: None,
                        class_index: None,
                        skipped: None,
                        error: Some(error.clone()),
                    },
                };
                writeln!(sink, "{}", serde_json::to_string(&row)?)?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}

/// Reads records written by [`emit_counts`] in JSONL format.
pub fn parse_jsonl<R: BufRead>(input: R) -> Result<Vec<RangeEntry>, IoError> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonlRow = serde_json::from_str(&line)?;
        let entry = match row {
            JsonlRow {
                p,
                count: Some(count),
                trace_mod16: Some(trace_mod16),
                class_index: Some(class_index),
                ..
            } => RangeEntry::Counted(crate::assembler::PointCount {
                p,
                count,
                trace_mod16,
                class_index,
            }),
            JsonlRow { p, skipped: Some(_), .. } => RangeEntry::Skipped { p },
            JsonlRow { p, error: Some(error), .. } => RangeEntry::Failed { p, error },
            JsonlRow { p, .. } => {
                return Err(IoError::Format(format!("incomplete record for p = {p}")))
            }
        };
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::PointCount;
    use crate::fixtures;

    #[test]
    fn fixtures_parse() {
        let s1 = fixtures::s1();
        assert_eq!(s1.picard_rank, 16);
        assert_eq!(fixtures::s3().picard_rank, 17);
        assert!(fixtures::s5().is_rm());
    }

    #[test]
    fn five_lines_is_a_parse_error() {
        let text = r#"{"name":"x","mode":"six-rational-lines","lines":[[1,0,0],[0,1,0],[0,0,1],[1,1,1],[1,2,3]],"picard_rank":16,"trivial_galois_pic":true}"#;
        let err = parse_surface_str(text).unwrap_err();
        assert!(err.to_string().contains("expected 6 lines"), "{err}");
        let text = r#"{"name":"x","mode":"six-rational-lines","picard_rank":16}"#;
        assert!(parse_surface_str(text).is_err());
    }

    #[test]
    fn round_trip_through_file_format() {
        for s in fixtures::all() {
            let again = SurfaceFile::from_surface(&s).into_surface().unwrap();
            assert_eq!(again.sextic(), s.sextic(), "{}", s.name);
            assert_eq!(fingerprint(&again), fingerprint(&s));
        }
        assert_ne!(fingerprint(&fixtures::s1()), fingerprint(&fixtures::s2()));
    }

    #[test]
    fn fingerprint_depends_on_rank() {
        let mut f = SurfaceFile::from_surface(&fixtures::s1());
        let a = fingerprint(&f.clone().into_surface().unwrap());
        f.picard_rank = 17;
        let b = fingerprint(&f.into_surface().unwrap());
        assert_ne!(a, b);
    }

    fn sample() -> Vec<RangeEntry> {
        vec![
            RangeEntry::Skipped { p: 3 },
            RangeEntry::Skipped { p: 5 },
            RangeEntry::Counted(PointCount {
                p: 7,
                count: 183,
                trace_mod16: 3,
                class_index: 13,
            }),
            RangeEntry::Failed {
                p: 11,
                error: "impossible residue".into(),
            },
        ]
    }

    #[test]
    fn csv_framing() {
        let mut buf = Vec::new();
        emit_counts(&[], CountFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "p,count,trace_mod16,class_index\n");
        let mut buf = Vec::new();
        emit_counts(&sample(), CountFormat::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p,count,trace_mod16,class_index\n# bad 3\n# bad 5\n7,183,3,13\n# error 11: impossible residue\n"
        );
    }

    #[test]
    fn jsonl_round_trip() {
        let mut buf = Vec::new();
        emit_counts(&sample(), CountFormat::Jsonl, &mut buf).unwrap();
        let back = parse_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back, sample());
    }
}
