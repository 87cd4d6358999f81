//! Run configuration: paper defaults, overridden by a `key = value` file,
//! overridden in turn by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bspline::{KnotFamily, DEFAULT_R_FIRST, MAX_ORDER, MIN_ORDER};
use crate::error::{Error, Result};
use crate::model::PseudopotentialModel;
use crate::spectra::BasisConfig;
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (text|csv|json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_splines: usize,
    pub order: usize,
    pub r_max: f64,
    pub knots: KnotFamily,
    pub r_first: f64,
    /// `None` resolves to 2·order.
    pub quad_nodes: Option<usize>,
    pub units: UnitSystem,
    pub model: PseudopotentialModel,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// m used for magnesium (3 by default, 2 as printed).
    pub mg_m: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_splines: 600,
            order: 10,
            r_max: 200.0,
            knots: KnotFamily::ExpLinear,
            r_first: DEFAULT_R_FIRST,
            quad_nodes: None,
            units: UnitSystem::PaperCompat,
            model: PseudopotentialModel::SymmetryDependent,
            format: OutputFormat::Text,
            out: None,
            mg_m: 3,
        }
    }
}

impl RunConfig {
    /// Defaults, then `file`, then `flags`; the result is validated.
    pub fn resolve(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(f) = file {
            f.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&self.order) {
            return Err(Error::Config(format!("order: {} outside {MIN_ORDER}..={MAX_ORDER}", self.order)));
        }
        if self.n_splines <= 2 * self.order {
            return Err(Error::Config(format!(
                "splines: {} must exceed twice the order ({})",
                self.n_splines,
                2 * self.order
            )));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::Config(format!("rmax: {} must be positive", self.r_max)));
        }
        if self.knots == KnotFamily::ExpLinear && !(self.r_first > 0.0 && self.r_first < self.r_max) {
            return Err(Error::Config(format!("rfirst: {} must lie in (0, rmax)", self.r_first)));
        }
        if self.quad_nodes == Some(0) {
            return Err(Error::Config("quad_nodes: must be at least 1".into()));
        }
        if !matches!(self.mg_m, 2 | 3) {
            return Err(Error::Config(format!("mg_mn: {} must be 2 or 3", self.mg_m)));
        }
        Ok(())
    }

    pub fn basis(&self) -> BasisConfig {
        BasisConfig {
            n_splines: self.n_splines,
            order: self.order,
            r_max: self.r_max,
            knots: self.knots.with_r_first(self.r_first),
            nodes_per_interval: self.quad_nodes,
        }
    }

    /// True when the basis and units match the published configuration.
    pub fn is_paper_units(&self) -> bool {
        self.units == UnitSystem::PaperCompat
    }
}

/// Optional value for every configurable field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub n_splines: Option<usize>,
    pub order: Option<usize>,
    pub r_max: Option<f64>,
    pub knots: Option<KnotFamily>,
    pub r_first: Option<f64>,
    pub quad_nodes: Option<usize>,
    pub units: Option<UnitSystem>,
    pub model: Option<PseudopotentialModel>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub mg_m: Option<u32>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($src:ident => $dst:ident),*) => {
                $(if let Some(v) = self.$src.clone() { cfg.$dst = v; })*
            };
        }
        set!(n_splines => n_splines, order => order, r_max => r_max, knots => knots, r_first => r_first,
             units => units, model => model, format => format, mg_m => mg_m);
        if self.quad_nodes.is_some() {
            cfg.quad_nodes = self.quad_nodes;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. A file with no
    /// settings at all is rejected.
    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        let mut seen = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", idx + 1)))?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            let value = value.trim();
            let err = |what: &str| Error::Config(format!("{key}: {what} (line {})", idx + 1));
            let num = |v: &str| v.parse::<usize>().map_err(|_| err(&format!("`{v}` is not a positive integer")));
            let real = |v: &str| v.parse::<f64>().map_err(|_| err(&format!("`{v}` is not a number")));
            match key.as_str() {
                "splines" | "n_splines" => o.n_splines = Some(num(value)?),
                "order" | "order_k" => o.order = Some(num(value)?),
                "rmax" | "r_max" => o.r_max = Some(real(value)?),
                "knots" => o.knots = Some(value.parse().map_err(|e: Error| err(&e.to_string()))?),
                "rfirst" | "r_first" => o.r_first = Some(real(value)?),
                "quad_nodes" | "nodes_per_interval" => o.quad_nodes = Some(num(value)?),
                "units" => o.units = Some(value.parse().map_err(|e: Error| err(&e.to_string()))?),
                "model" => o.model = Some(value.parse().map_err(|e: Error| err(&e.to_string()))?),
                "format" => o.format = Some(value.parse().map_err(|e: Error| err(&e.to_string()))?),
                "out" => o.out = Some(PathBuf::from(value)),
                "mg_mn" => o.mg_m = Some(num(value)? as u32),
                _ => return Err(Error::Config(format!("line {}: unknown key `{key}`", idx + 1))),
            }
            seen += 1;
        }
        if seen == 0 {
            return Err(Error::Config("config file contains no settings".into()));
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }
}
