//! Coefficient tables and their JSON / CSV encodings.

use std::io::Write;

use anyhow::Result;
use gessel_core::laurent::format_rational;
use gessel_core::{CountTable, TSeries};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<&'static str>,
    pub x: i32,
    pub y: i32,
    pub n: usize,
    pub count: String,
}

/// A model's coefficients in `(n, x, y)` order, plus any subcommand-specific
/// fields that only appear in JSON.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub model: String,
    pub trunc: usize,
    pub entries: Vec<Entry>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Table {
    pub fn new(model: impl Into<String>, trunc: usize) -> Self {
        Table {
            model: model.into(),
            trunc,
            entries: Vec::new(),
            extra: Map::new(),
        }
    }

    /// Appends the nonzero coefficients of `s`, summed over marks.
    pub fn push_series(&mut self, part: Option<&'static str>, s: &TSeries) {
        for n in 0..=s.trunc() {
            for (k, v) in s.get(n).forget_mark().terms() {
                self.entries.push(Entry {
                    part,
                    x: k.ex,
                    y: k.ey,
                    n,
                    count: format_rational(v),
                });
            }
        }
    }

    pub fn push_counts(&mut self, t: &CountTable) {
        for (x, y, n, c) in t.iter() {
            self.entries.push(Entry {
                part: None,
                x,
                y,
                n,
                count: c.to_string(),
            });
        }
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Result<Self> {
        self.extra.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(self)
    }

    pub fn write<W: Write>(&self, fmt: Format, mut w: W) -> Result<()> {
        match fmt {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w)?;
            }
            Format::Csv => {
                let mut c = csv::Writer::from_writer(w);
                for e in &self.entries {
                    c.serialize(e)?;
                }
                c.flush()?;
            }
        }
        Ok(())
    }
}
