//! Flat `key = value` experiment configurations.
//!
//! One assignment per line, `#` starts a comment line, blank lines are
//! ignored. Every key has a default except `kind`. [`ExperimentConfig::to_text`]
//! writes every key, so its output re-parses to the same configuration.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::{Param, ThresholdQuery};
use crate::engine::{EngineError, ModelParams, Strategy};

/// Where a configuration value came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    /// The `i`-th `--set` override (1-based).
    Override(usize),
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(l) => write!(f, "line {l}"),
            Origin::Override(i) => write!(f, "--set #{i}"),
            Origin::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("{origin}: {key}: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    /// Offending key, or the raw text when no key could be read.
    pub key: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    SingleRun,
    Ensemble,
    Threshold,
    ImmunizationThreshold,
    PhaseDiagram,
    CrossValidate,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::SingleRun,
        ExperimentKind::Ensemble,
        ExperimentKind::Threshold,
        ExperimentKind::ImmunizationThreshold,
        ExperimentKind::PhaseDiagram,
        ExperimentKind::CrossValidate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SingleRun => "single-run",
            ExperimentKind::Ensemble => "ensemble",
            ExperimentKind::Threshold => "threshold",
            ExperimentKind::ImmunizationThreshold => "immunization-threshold",
            ExperimentKind::PhaseDiagram => "phase-diagram",
            ExperimentKind::CrossValidate => "cross-validate",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment kind {s:?}"))
    }
}

/// How one layer is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum LayerSource {
    ErdosRenyi,
    BarabasiAlbert,
    EdgeList(PathBuf),
}

impl fmt::Display for LayerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerSource::ErdosRenyi => f.write_str("erdos-renyi"),
            LayerSource::BarabasiAlbert => f.write_str("barabasi-albert"),
            LayerSource::EdgeList(p) => write!(f, "edge-list:{}", p.display()),
        }
    }
}

impl FromStr for LayerSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "erdos-renyi" => Ok(LayerSource::ErdosRenyi),
            "barabasi-albert" => Ok(LayerSource::BarabasiAlbert),
            _ => match s.strip_prefix("edge-list:") {
                Some(p) if !p.is_empty() => Ok(LayerSource::EdgeList(PathBuf::from(p))),
                _ => Err(format!(
                    "unknown topology {s:?} (erdos-renyi|barabasi-albert|edge-list:<path>)"
                )),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerConfig {
    pub source: LayerSource,
    pub mean_degree: f64,
    /// Generator seed; derived from the master seed when absent.
    pub seed: Option<u64>,
}

impl Default for LayerConfig {
    fn default() -> Self {
        Self {
            source: LayerSource::ErdosRenyi,
            mean_degree: 4.0,
            seed: None,
        }
    }
}

/// Quantity swept over a phase-diagram axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisParam {
    Model(Param),
    /// Mean degree of both generated layers; a network is built per value.
    MeanDegree,
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisParam::Model(p) => write!(f, "{p}"),
            AxisParam::MeanDegree => f.write_str("mean_degree"),
        }
    }
}

impl FromStr for AxisParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "mean_degree" {
            return Ok(AxisParam::MeanDegree);
        }
        s.parse::<Param>()
            .map(AxisParam::Model)
            .map_err(|e| format!("{e} (or mean_degree)"))
    }
}

/// Axis grid, either `lo:hi:points` or an explicit comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    Range { lo: f64, hi: f64, points: usize },
    List(Vec<f64>),
}

impl AxisValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AxisValues::Range { lo, hi, points } => {
                crate::analysis::Axis::linspace(Param::BetaA, *lo, *hi, *points).values
            }
            AxisValues::List(v) => v.clone(),
        }
    }
}

impl fmt::Display for AxisValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValues::Range { lo, hi, points } => write!(f, "{lo}:{hi}:{points}"),
            AxisValues::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for AxisValues {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [lo, hi, points] => Ok(AxisValues::Range {
                lo: parse_f64(lo)?,
                hi: parse_f64(hi)?,
                points: points
                    .parse()
                    .map_err(|_| format!("invalid point count {points:?}"))?,
            }),
            [list] => Ok(AxisValues::List(
                list.split(',')
                    .map(|x| parse_f64(x.trim()))
                    .collect::<Result<_, _>>()?,
            )),
            _ => Err(format!("expected lo:hi:points or a comma list, got {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxisConfig {
    pub param: AxisParam,
    pub values: AxisValues,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantityKind {
    OutbreakSize,
    EpidemicThreshold,
    ImmunizationThreshold,
}

impl QuantityKind {
    pub fn name(self) -> &'static str {
        match self {
            QuantityKind::OutbreakSize => "outbreak-size",
            QuantityKind::EpidemicThreshold => "epidemic-threshold",
            QuantityKind::ImmunizationThreshold => "immunization-threshold",
        }
    }
}

impl FromStr for QuantityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            QuantityKind::OutbreakSize,
            QuantityKind::EpidemicThreshold,
            QuantityKind::ImmunizationThreshold,
        ]
        .into_iter()
        .find(|q| q.name() == s)
        .ok_or_else(|| {
            format!("unknown quantity {s:?} (outbreak-size|epidemic-threshold|immunization-threshold)")
        })
    }
}

/// One complete experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Stem of every output file.
    pub name: String,
    pub master_seed: u64,
    pub n: usize,
    pub layer_a: LayerConfig,
    pub layer_b: LayerConfig,
    pub params: ModelParams,
    pub seed_count: usize,
    /// Overrides `seed_count` with `max(1, round(fraction * n))`.
    pub seed_fraction: Option<f64>,
    pub seed_aware: bool,
    /// Explicit infection seeds; drawn by the seed rule when absent.
    pub seed_nodes: Option<Vec<usize>>,
    pub strategy: Strategy,
    /// Immunized fraction for single-run, ensemble and cross-validate.
    pub v: f64,
    pub plan_draws: usize,
    pub query: ThresholdQuery,
    pub runs: usize,
    pub quantity: QuantityKind,
    pub axis1: AxisConfig,
    pub axis2: AxisConfig,
    /// Also write the final joint-state distribution of a single run.
    pub snapshot: bool,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            name: kind.name().to_string(),
            master_seed: 2024,
            n: 1000,
            layer_a: LayerConfig::default(),
            layer_b: LayerConfig::default(),
            params: ModelParams::default(),
            seed_count: 1,
            seed_fraction: None,
            seed_aware: false,
            seed_nodes: None,
            strategy: Strategy::Random,
            v: 0.0,
            plan_draws: 10,
            query: ThresholdQuery::default(),
            runs: 1000,
            quantity: QuantityKind::OutbreakSize,
            axis1: AxisConfig {
                param: AxisParam::Model(Param::BetaA),
                values: AxisValues::Range {
                    lo: 0.0,
                    hi: 1.0,
                    points: 21,
                },
            },
            axis2: AxisConfig {
                param: AxisParam::Model(Param::BetaB),
                values: AxisValues::Range {
                    lo: 0.0,
                    hi: 1.0,
                    points: 21,
                },
            },
            snapshot: false,
            output_dir: PathBuf::from("out"),
        }
    }

    /// Parse and validate a configuration file.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parse `text`, then apply `key=value` overrides in order, then
    /// validate.
    pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut entries: Vec<(String, String, Origin)> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = Origin::Line(idx + 1);
            let (key, value) = split_assignment(line).map_err(|message| ConfigError {
                origin: origin.clone(),
                key: line.to_string(),
                message,
            })?;
            if let Some(first) = seen.insert(key.clone(), idx + 1) {
                return Err(ConfigError {
                    origin,
                    key,
                    message: format!("already set on line {first}"),
                });
            }
            entries.push((key, value, origin));
        }
        for (i, ov) in overrides.iter().enumerate() {
            let origin = Origin::Override(i + 1);
            let (key, value) = split_assignment(ov).map_err(|message| ConfigError {
                origin: origin.clone(),
                key: ov.clone(),
                message,
            })?;
            entries.push((key, value, origin));
        }

        let kind_entry = entries.iter().rev().find(|(k, _, _)| k == "kind");
        let kind = match kind_entry {
            Some((_, v, origin)) => v.parse().map_err(|message| ConfigError {
                origin: origin.clone(),
                key: "kind".into(),
                message,
            })?,
            None => {
                return Err(ConfigError {
                    origin: Origin::Default,
                    key: "kind".into(),
                    message: "required key is missing".into(),
                })
            }
        };
        let mut cfg = Self::new(kind);
        let mut origins: HashMap<String, Origin> = HashMap::new();
        for (key, value, origin) in entries {
            cfg.set(&key, &value).map_err(|message| ConfigError {
                origin: origin.clone(),
                key: key.clone(),
                message,
            })?;
            origins.insert(key, origin);
        }
        cfg.validate().map_err(|(key, message)| ConfigError {
            origin: origins.get(key).cloned().unwrap_or(Origin::Default),
            key: key.to_string(),
            message,
        })?;
        Ok(cfg)
    }

    /// Assign one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "kind" => self.kind = value.parse()?,
            "name" => {
                if value.is_empty()
                    || !value
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
                    || value.starts_with('.')
                {
                    return Err(format!(
                        "{value:?} is not a plain file stem (letters, digits, - _ .)"
                    ));
                }
                self.name = value.to_string();
            }
            "master_seed" => self.master_seed = parse_u64(value)?,
            "n" => self.n = parse_usize(value)?,
            "layer_a.topology" => self.layer_a.source = value.parse()?,
            "layer_a.mean_degree" => self.layer_a.mean_degree = parse_f64(value)?,
            "layer_a.seed" => self.layer_a.seed = parse_auto(value, parse_u64)?,
            "layer_b.topology" => self.layer_b.source = value.parse()?,
            "layer_b.mean_degree" => self.layer_b.mean_degree = parse_f64(value)?,
            "layer_b.seed" => self.layer_b.seed = parse_auto(value, parse_u64)?,
            "beta_a" => self.params.beta_a = parse_f64(value)?,
            "beta_b" => self.params.beta_b = parse_f64(value)?,
            "delta_a" => self.params.delta_a = parse_f64(value)?,
            "delta_b" => self.params.delta_b = parse_f64(value)?,
            "gamma" => self.params.gamma = parse_f64(value)?,
            "kappa" => self.params.kappa = parse_f64(value)?,
            "convergence_tol" => self.params.convergence_tol = parse_f64(value)?,
            "max_steps" => self.params.max_steps = parse_usize(value)?,
            "seed_count" => self.seed_count = parse_usize(value)?,
            "seed_fraction" => self.seed_fraction = parse_auto(value, parse_f64)?,
            "seed_aware" => self.seed_aware = parse_bool(value)?,
            "seed_nodes" => {
                self.seed_nodes = parse_auto(value, |s| {
                    s.split(',').map(|x| parse_usize(x.trim())).collect()
                })?
            }
            "strategy" => self.strategy = value.parse()?,
            "v" => self.v = parse_f64(value)?,
            "plan_draws" => self.plan_draws = parse_usize(value)?,
            "criterion" => self.query.criterion = parse_f64(value)?,
            "bisection_tol" => self.query.bisection_tol = parse_f64(value)?,
            "bracket_lo" => self.query.lo = parse_f64(value)?,
            "bracket_hi" => self.query.hi = parse_f64(value)?,
            "runs" => self.runs = parse_usize(value)?,
            "quantity" => self.quantity = value.parse()?,
            "axis1" => self.axis1.param = value.parse()?,
            "axis1.values" => self.axis1.values = value.parse()?,
            "axis2" => self.axis2.param = value.parse()?,
            "axis2.values" => self.axis2.values = value.parse()?,
            "snapshot" => self.snapshot = parse_bool(value)?,
            "output_dir" => {
                if value.is_empty() {
                    return Err("must not be empty".into());
                }
                self.output_dir = PathBuf::from(value);
            }
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Every key in canonical order, one per line.
    pub fn to_text(&self) -> String {
        let auto = |o: Option<String>| o.unwrap_or_else(|| "auto".into());
        let p = &self.params;
        let lines: Vec<(&str, String)> = vec![
            ("kind", self.kind.name().into()),
            ("name", self.name.clone()),
            ("master_seed", self.master_seed.to_string()),
            ("n", self.n.to_string()),
            ("layer_a.topology", self.layer_a.source.to_string()),
            ("layer_a.mean_degree", self.layer_a.mean_degree.to_string()),
            ("layer_a.seed", auto(self.layer_a.seed.map(|s| s.to_string()))),
            ("layer_b.topology", self.layer_b.source.to_string()),
            ("layer_b.mean_degree", self.layer_b.mean_degree.to_string()),
            ("layer_b.seed", auto(self.layer_b.seed.map(|s| s.to_string()))),
            ("beta_a", p.beta_a.to_string()),
            ("beta_b", p.beta_b.to_string()),
            ("delta_a", p.delta_a.to_string()),
            ("delta_b", p.delta_b.to_string()),
            ("gamma", p.gamma.to_string()),
            ("kappa", p.kappa.to_string()),
            ("convergence_tol", p.convergence_tol.to_string()),
            ("max_steps", p.max_steps.to_string()),
            ("seed_count", self.seed_count.to_string()),
            ("seed_fraction", auto(self.seed_fraction.map(|f| f.to_string()))),
            ("seed_aware", self.seed_aware.to_string()),
            (
                "seed_nodes",
                auto(self.seed_nodes.as_ref().map(|v| {
                    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                })),
            ),
            ("strategy", self.strategy.to_string()),
            ("v", self.v.to_string()),
            ("plan_draws", self.plan_draws.to_string()),
            ("criterion", self.query.criterion.to_string()),
            ("bisection_tol", self.query.bisection_tol.to_string()),
            ("bracket_lo", self.query.lo.to_string()),
            ("bracket_hi", self.query.hi.to_string()),
            ("runs", self.runs.to_string()),
            ("quantity", self.quantity.name().into()),
            ("axis1", self.axis1.param.to_string()),
            ("axis1.values", self.axis1.values.to_string()),
            ("axis2", self.axis2.param.to_string()),
            ("axis2.values", self.axis2.values.to_string()),
            ("snapshot", self.snapshot.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
        ];
        let mut out = String::new();
        for (k, v) in lines {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    /// Number of infection seeds the seed rule draws.
    pub fn effective_seed_count(&self) -> usize {
        match (&self.seed_nodes, self.seed_fraction) {
            (Some(nodes), _) => nodes.len(),
            (None, Some(f)) => ((f * self.n as f64).round() as usize).max(1),
            (None, None) => self.seed_count,
        }
    }

    fn uses_immunization_plan(&self) -> bool {
        matches!(
            self.kind,
            ExperimentKind::SingleRun | ExperimentKind::Ensemble | ExperimentKind::CrossValidate
        ) && self.v > 0.0
    }

    /// Check domains and kind-specific consistency. Errors name the key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        self.params.validate().map_err(|e| match e {
            EngineError::InvalidParameter { field, reason } => (field, reason),
            other => ("params", other.to_string()),
        })?;
        if self.n < 2 {
            return Err(("n", format!("{} nodes; at least 2 are required", self.n)));
        }
        for (key, layer) in [
            ("layer_a.mean_degree", &self.layer_a),
            ("layer_b.mean_degree", &self.layer_b),
        ] {
            if !matches!(layer.source, LayerSource::EdgeList(_)) {
                check_degree(key, layer.mean_degree, self.n)?;
            }
            if layer.source == LayerSource::BarabasiAlbert && layer.mean_degree <= 0.0 {
                return Err((key, "preferential attachment needs a positive degree".into()));
            }
        }
        if let Some(f) = self.seed_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(("seed_fraction", format!("{f} outside (0, 1]")));
            }
        }
        if self.seed_count == 0 {
            return Err(("seed_count", "must be at least 1".into()));
        }
        if self.effective_seed_count() > self.n {
            return Err((
                "seed_count",
                format!("{} seeds exceed {} nodes", self.effective_seed_count(), self.n),
            ));
        }
        if let Some(nodes) = &self.seed_nodes {
            if matches!(
                self.kind,
                ExperimentKind::PhaseDiagram | ExperimentKind::ImmunizationThreshold
            ) {
                return Err((
                    "seed_nodes",
                    format!("explicit seeds are not supported by {}", self.kind.name()),
                ));
            }
            if self.uses_immunization_plan() {
                return Err((
                    "seed_nodes",
                    "explicit seeds cannot be combined with an immunization plan".into(),
                ));
            }
            if nodes.is_empty() {
                return Err(("seed_nodes", "empty list".into()));
            }
            if let Some(bad) = nodes.iter().find(|&&s| s >= self.n) {
                return Err(("seed_nodes", format!("node {bad} out of range for n = {}", self.n)));
            }
            let mut sorted = nodes.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(("seed_nodes", "repeated node".into()));
            }
        }
        if !(0.0..1.0).contains(&self.v) {
            return Err(("v", format!("{} outside [0, 1)", self.v)));
        }
        if self.v > 0.0
            && matches!(
                self.kind,
                ExperimentKind::Threshold
                    | ExperimentKind::ImmunizationThreshold
                    | ExperimentKind::PhaseDiagram
            )
        {
            return Err(("v", format!("not used by {}; leave it at 0", self.kind.name())));
        }
        if self.uses_immunization_plan() {
            let immunized = (self.v * self.n as f64).round() as usize;
            if immunized + self.effective_seed_count() > self.n {
                return Err((
                    "v",
                    format!("{immunized} immunized nodes leave too few infectable nodes"),
                ));
            }
        }
        if self.plan_draws == 0 {
            return Err(("plan_draws", "must be at least 1".into()));
        }
        let q = &self.query;
        if !(q.criterion > 0.0 && q.criterion < 1.0) {
            return Err(("criterion", format!("{} outside (0, 1)", q.criterion)));
        }
        if !(q.bisection_tol > 0.0) {
            return Err(("bisection_tol", format!("{} must be positive", q.bisection_tol)));
        }
        if !(0.0..=1.0).contains(&q.lo) {
            return Err(("bracket_lo", format!("{} outside [0, 1]", q.lo)));
        }
        if !(q.hi <= 1.0 && q.hi > q.lo) {
            return Err(("bracket_hi", format!("{} must lie in (bracket_lo, 1]", q.hi)));
        }
        if self.runs == 0 {
            return Err(("runs", "must be at least 1".into()));
        }
        if self.kind == ExperimentKind::PhaseDiagram {
            self.validate_axes()?;
        }
        Ok(())
    }

    fn validate_axes(&self) -> Result<(), (&'static str, String)> {
        if self.axis1.param == self.axis2.param {
            return Err(("axis2", format!("both axes sweep {}", self.axis1.param)));
        }
        for (key, vkey, axis) in [
            ("axis1", "axis1.values", &self.axis1),
            ("axis2", "axis2.values", &self.axis2),
        ] {
            if let AxisValues::Range { lo, hi, points } = axis.values {
                if points == 0 {
                    return Err((vkey, "no points".into()));
                }
                if !(lo.is_finite() && hi.is_finite()) {
                    return Err((vkey, "non-finite bound".into()));
                }
            }
            let values = axis.values.values();
            if values.is_empty() {
                return Err((vkey, "no values".into()));
            }
            match axis.param {
                AxisParam::Model(Param::BetaB) if self.quantity == QuantityKind::EpidemicThreshold => {
                    return Err((
                        key,
                        "epidemic-threshold cells already search over beta_b".into(),
                    ));
                }
                AxisParam::Model(param) => {
                    for &x in &values {
                        let mut p = self.params.clone();
                        param.apply(&mut p, x);
                        if let Err(EngineError::InvalidParameter { reason, .. }) = p.validate() {
                            return Err((vkey, format!("{param} = {reason}")));
                        }
                    }
                }
                AxisParam::MeanDegree => {
                    for layer in [&self.layer_a, &self.layer_b] {
                        if let LayerSource::EdgeList(_) = layer.source {
                            return Err((key, "mean_degree axes need generated layers".into()));
                        }
                    }
                    for &x in &values {
                        check_degree(vkey, x, self.n)?;
                        if x <= 0.0
                            && (self.layer_a.source == LayerSource::BarabasiAlbert
                                || self.layer_b.source == LayerSource::BarabasiAlbert)
                        {
                            return Err((vkey, "preferential attachment needs a positive degree".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_degree(key: &'static str, k: f64, n: usize) -> Result<(), (&'static str, String)> {
    if !(k.is_finite() && k >= 0.0) {
        return Err((key, format!("{k} must be a finite non-negative number")));
    }
    if k >= (n - 1) as f64 {
        return Err((key, format!("{k} must be below n - 1 = {}", n - 1)));
    }
    Ok(())
}

fn split_assignment(line: &str) -> Result<(String, String), String> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| "expected key = value".to_string())?;
    let key = k.trim();
    if key.is_empty() {
        return Err("missing key before '='".into());
    }
    Ok((key.to_string(), v.trim().to_string()))
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x.is_nan() {
        return Err("NaN is not allowed".into());
    }
    Ok(x)
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("{s:?} is not true or false")),
    }
}

fn parse_auto<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, String> {
    if s == "auto" {
        Ok(None)
    } else {
        f(s).map(Some)
    }
}
