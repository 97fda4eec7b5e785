//! Plot-ready serialization: CSV series, phase tables and `key = value`
//! summaries. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagnostics::EnergySeries;
use crate::error::Result;

pub const SERIES_HEADER: &str = "t,E,J,I,L2,Lp_g,damping_integral,label";

/// Lossless scientific formatting used in every output file.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn series_csv(series: &EnergySeries) -> String {
    let mut out = String::with_capacity(160 * (series.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in series.rows() {
        let cols = [r.t, r.e, r.j, r.i, r.l2, r.lp_g, r.damping_integral];
        for c in cols {
            out.push_str(&fmt_f64(c));
            out.push(',');
        }
        out.push_str(r.label.as_str());
        out.push('\n');
    }
    out
}

/// Ordered `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.text(key, fmt_f64(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}
