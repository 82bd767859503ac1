use serde::{Deserialize, Serialize};

use crate::surface::SixLineSurface;

use super::{trace_expansion, GaloisClass, TraceUnknowns, TwoAdicError};

/// Transcendental trace mod 16 for every Frobenius class.
///
/// Serialised with fields in the order `surface`, `b`, `n`, `entries`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTable {
    /// Fingerprint of the surface the table was built for.
    pub surface: String,
    pub b: usize,
    pub n: u32,
    pub entries: Vec<u8>,
}

impl TraceTable {
    pub fn class_len(&self) -> usize {
        self.b + 2
    }

    pub fn check_shape(&self) -> Result<(), TwoAdicError> {
        let want = 1usize << self.class_len();
        if self.entries.len() != want {
            return Err(TwoAdicError::TableShape(format!(
                "{} entries, expected {want}",
                self.entries.len()
            )));
        }
        if let Some(v) = self.entries.iter().find(|&&v| v >= 16) {
            return Err(TwoAdicError::TableShape(format!("entry {v} is not below 16")));
        }
        if self.entries[0] as u32 != self.n % 16 {
            return Err(TwoAdicError::TableShape(format!(
                "trivial class holds {}, expected n = {}",
                self.entries[0], self.n
            )));
        }
        Ok(())
    }

    pub fn check_surface(&self, surface: &SixLineSurface) -> Result<(), TwoAdicError> {
        let fp = crate::io::fingerprint(surface);
        if fp != self.surface {
            return Err(TwoAdicError::FingerprintMismatch {
                table: self.surface.clone(),
                surface: fp,
            });
        }
        Ok(())
    }

    pub fn lookup(&self, cls: &GaloisClass) -> Result<u8, TwoAdicError> {
        if cls.len() != self.class_len() {
            return Err(TwoAdicError::ClassLength {
                got: cls.len(),
                want: self.class_len(),
            });
        }
        Ok(self.entries[cls.index() as usize])
    }

    /// Number of classes per residue `0..16`.
    pub fn histogram(&self) -> [u32; 16] {
        let mut h = [0u32; 16];
        for &v in &self.entries {
            h[v as usize] += 1;
        }
        h
    }
}

pub fn build_table(u: &TraceUnknowns, n: u32, b: usize, fingerprint: String) -> TraceTable {
    let len = b + 2;
    let entries = (0..1u32 << len)
        .map(|idx| trace_expansion(&GaloisClass::from_index(idx, len), u, n))
        .collect();
    TraceTable {
        surface: fingerprint,
        b,
        n,
        entries,
    }
}
