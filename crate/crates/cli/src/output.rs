//! CSV output with provenance comments.
//!
//! Every file starts with a `# config:` line recording the fully resolved
//! configuration and, unless disabled, a `# generated:` timestamp; both are
//! comments above the CSV header so the data parses with any
//! comment-tolerant reader. All numbers use the shortest round-trip decimal
//! form, which keeps reruns byte-identical.

use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{SecondsFormat, Utc};
use csv::Writer;

use crate::config::RunConfig;

pub struct CsvSink {
    writer: Writer<File>,
    path: PathBuf,
}

impl CsvSink {
    /// Creates `dir/name`, writes the comment preamble, and positions the
    /// sink at the header row.
    pub fn create(dir: &Path, name: &str, rc: &RunConfig) -> Result<CsvSink> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join(name);
        let mut file =
            File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        writeln!(file, "# config: {}", rc.provenance_line())?;
        if rc.timestamp {
            let stamp = Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true);
            writeln!(file, "# generated: {stamp}")?;
        }
        Ok(CsvSink {
            writer: Writer::from_writer(file),
            path,
        })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        self.writer.write_record(columns)?;
        Ok(())
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    /// Flushes and returns the written path.
    pub fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    x.to_string()
}

/// Optional value; absent fields are empty.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Booleans as 0/1.
pub fn flag(b: bool) -> String {
    if b {
        "1".into()
    } else {
        "0".into()
    }
}
