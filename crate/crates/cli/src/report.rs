use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use gifs_dim::bowen::BowenError;
use gifs_dim::model::ModelError;
use gifs_dim::oracle::OracleError;
use gifs_dim::perturb::PerturbError;
use gifs_dim::pressure::PressureError;
use gifs_dim::specfile::SpecError;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, bad arguments.
    Input(String),
    /// The input is well formed but violates a mathematical requirement.
    Domain(String),
    NonConvergence(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
            CliError::NonConvergence(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) | CliError::NonConvergence(m) => f.write_str(m),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Invalid(_) => CliError::Domain(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<PressureError> for CliError {
    fn from(e: PressureError) -> Self {
        match e {
            PressureError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<BowenError> for CliError {
    fn from(e: BowenError) -> Self {
        match e {
            BowenError::Pressure(p) => p.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<PerturbError> for CliError {
    fn from(e: PerturbError) -> Self {
        match e {
            PerturbError::Bowen(b) => b.into(),
            PerturbError::Pressure(p) => p.into(),
            PerturbError::BadGrid | PerturbError::GridTooShort { .. } | PerturbError::BadExponent(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooFewPoints(_) | OracleError::TooFewScales => CliError::Input(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub struct Table {
    pub name: String,
    pub header: String,
    pub rows: Vec<String>,
}

/// CSV tables plus `#`-prefixed summary lines.
#[derive(Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn table(&mut self, name: &str, header: &str) -> &mut Vec<String> {
        self.tables.push(Table {
            name: name.to_string(),
            header: header.to_string(),
            rows: Vec::new(),
        });
        &mut self.tables.last_mut().expect("just pushed").rows
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    fn write_tables(&self, w: &mut impl Write) -> io::Result<()> {
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(w)?;
            }
            if self.tables.len() > 1 {
                writeln!(w, "# table: {}", t.name)?;
            }
            writeln!(w, "{}", t.header)?;
            for r in &t.rows {
                writeln!(w, "{r}")?;
            }
        }
        Ok(())
    }

    pub fn emit(&self, out: Option<&Path>) -> io::Result<ExitCode> {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        match out {
            Some(path) => {
                let mut buf = Vec::new();
                self.write_tables(&mut buf)?;
                fs::write(path, buf)?;
            }
            None => self.write_tables(&mut lock)?,
        }
        for line in &self.summary {
            writeln!(lock, "# {line}")?;
        }
        Ok(ExitCode::SUCCESS)
    }
}

/// Shortest round-trip representation.
pub fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_nonconvergence_maps_to_three() {
        let p = PressureError::NonConvergence {
            iterations: 10,
            lower: 0.0,
            upper: 1.0,
        };
        assert_eq!(CliError::from(p.clone()).code(), 3);
        assert_eq!(CliError::from(BowenError::Pressure(p.clone())).code(), 3);
        assert_eq!(CliError::from(PerturbError::Bowen(BowenError::Pressure(p.clone()))).code(), 3);
        assert_eq!(CliError::from(PerturbError::Pressure(p)).code(), 3);
        assert_eq!(CliError::from(PerturbError::BadGrid).code(), 2);
        assert_eq!(CliError::from(OracleError::TooFewScales).code(), 2);
        assert_eq!(CliError::from(BowenError::NoPositiveRoot(0.1)).code(), 1);
    }
}
