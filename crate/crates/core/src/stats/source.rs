//! Where original messages come from.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hash::BitMessage;

/// Default synthetic message length in bits.
pub const DEFAULT_SYNTHETIC_BITS: usize = 4096;

/// Text records loaded from a JSON-lines file.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub path: PathBuf,
    pub field: String,
    records: Vec<Vec<u8>>,
}

impl Dataset {
    /// Reads every line of `path` as a JSON object and keeps the non-empty
    /// string values of `field` (as UTF-8 bytes). Lines without the field are
    /// skipped.
    pub fn load_jsonl(path: impl AsRef<Path>, field: &str) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut records = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(&line)?;
            if let Some(text) = value.get(field).and_then(|v| v.as_str()) {
                if !text.is_empty() {
                    records.push(text.as_bytes().to_vec());
                }
            }
        }
        Self::from_records(path.to_path_buf(), field.to_string(), records)
    }

    pub fn from_records(path: PathBuf, field: String, records: Vec<Vec<u8>>) -> Result<Self> {
        if records.iter().all(|r| r.is_empty()) {
            return Err(Error::EmptySource(format!(
                "no non-empty {field:?} records in {}",
                path.display()
            )));
        }
        let records = records.into_iter().filter(|r| !r.is_empty()).collect();
        Ok(Self {
            path,
            field,
            records,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Vec<u8>] {
        &self.records
    }
}

/// Message source for original messages.
#[derive(Debug, Clone, PartialEq)]
pub enum MessageSource {
    /// Uniform random bits of a fixed length.
    Synthetic { bits: usize },
    /// A record drawn uniformly, with replacement, from a dataset.
    Dataset(Arc<Dataset>),
}

impl Default for MessageSource {
    fn default() -> Self {
        MessageSource::Synthetic {
            bits: DEFAULT_SYNTHETIC_BITS,
        }
    }
}

/// Serializable summary of a [`MessageSource`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceDescriptor {
    Synthetic {
        bits: usize,
    },
    Dataset {
        path: String,
        field: String,
        records: usize,
    },
}

impl MessageSource {
    pub fn validate(&self) -> Result<()> {
        match self {
            MessageSource::Synthetic { bits: 0 } => {
                Err(invalid("synthetic messages need at least one bit"))
            }
            MessageSource::Dataset(d) if d.is_empty() => {
                Err(Error::EmptySource(d.path.display().to_string()))
            }
            _ => Ok(()),
        }
    }

    pub fn descriptor(&self) -> SourceDescriptor {
        match self {
            MessageSource::Synthetic { bits } => SourceDescriptor::Synthetic { bits: *bits },
            MessageSource::Dataset(d) => SourceDescriptor::Dataset {
                path: d.path.display().to_string(),
                field: d.field.clone(),
                records: d.len(),
            },
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> BitMessage {
        match self {
            MessageSource::Synthetic { bits } => {
                BitMessage::new((0..*bits).map(|_| rng.random::<bool>()).collect())
            }
            MessageSource::Dataset(d) => {
                let i = rng.random_range(0..d.len());
                BitMessage::from_bytes(&d.records[i])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn loads_jsonl_field() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, r#"{{"id": 1, "abstract": "We study walks."}}"#).unwrap();
        writeln!(f, r#"{{"id": 2, "title": "no abstract"}}"#).unwrap();
        writeln!(f).unwrap();
        writeln!(f, r#"{{"id": 3, "abstract": ""}}"#).unwrap();
        writeln!(f, r#"{{"id": 4, "abstract": "Second."}}"#).unwrap();
        let d = Dataset::load_jsonl(f.path(), "abstract").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.records()[0], b"We study walks.");

        let src = MessageSource::Dataset(Arc::new(d));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = src.draw(&mut rng);
        assert!(m.len() == 15 * 8 || m.len() == 7 * 8);
    }

    #[test]
    fn dataset_errors() {
        assert!(matches!(
            Dataset::load_jsonl("/nonexistent/file.jsonl", "abstract"),
            Err(Error::Io { .. })
        ));
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, r#"{{"title": "x"}}"#).unwrap();
        assert!(matches!(
            Dataset::load_jsonl(f.path(), "abstract"),
            Err(Error::EmptySource(_))
        ));
        let mut g = tempfile::NamedTempFile::new().unwrap();
        writeln!(g, "not json").unwrap();
        assert!(matches!(
            Dataset::load_jsonl(g.path(), "abstract"),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn synthetic_draws() {
        let src = MessageSource::Synthetic { bits: 100 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = src.draw(&mut rng);
        assert_eq!(m.len(), 100);
        assert!(m.bits().iter().any(|&b| b) && m.bits().iter().any(|&b| !b));
        assert!(MessageSource::Synthetic { bits: 0 }.validate().is_err());
    }
}
