//! Run configuration for `gbh simulate`.
//!
//! A config is a JSON document. Unknown keys are rejected, as are keys that
//! do not apply to the chosen mode.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use gbh_core::{
    AdaptiveVariant, LayoutKind, OneWaySimConfig, OracleVariant, Procedure, SimDesign,
    TwoWaySimConfig,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    OneWay,
    TwoWay,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProcSpec {
    Name(String),
    Full(ProcObject),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcObject {
    pub name: String,
    pub variant: Option<String>,
    pub lambda: Option<f64>,
    pub cap_at_one: Option<bool>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub pi_dot: Option<Vec<f64>>,
    pub pi: Option<Vec<f64>>,
    pub pi_r: Option<Vec<f64>>,
    pub pi_c: Option<Vec<f64>>,
    pub pi_rc: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub m: usize,
    pub n: usize,
    pub p: Option<usize>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub rho: Option<f64>,
    pub rho_per_group: Option<Vec<f64>>,
    pub rho_r: Option<f64>,
    pub rho_c: Option<f64>,
    pub rho_p: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    pub procedures: Vec<ProcSpec>,
    pub sweep: Sweep,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn default_mu() -> f64 {
    3.0
}

fn default_alpha() -> f64 {
    0.05
}

fn default_lambda() -> f64 {
    0.5
}

fn default_reps() -> usize {
    200
}

/// A procedure with its output label and the lambda reported for it.
#[derive(Debug, Clone)]
pub struct ResolvedProc {
    pub label: String,
    pub procedure: Procedure,
    pub lambda: f64,
}

/// One parameter point of the sweep.
#[derive(Debug, Clone)]
pub struct Point {
    pub design: SimDesign,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_open_unit(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{field} must lie in (0, 1), got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn inapplicable(&self) -> Vec<&'static str> {
        let s = &self.sweep;
        match self.mode {
            Mode::OneWay => [
                ("p", self.p.is_some()),
                ("rho_r", self.rho_r.is_some()),
                ("rho_c", self.rho_c.is_some()),
                ("rho_p", self.rho_p.is_some()),
                ("sweep.pi_r", s.pi_r.is_some()),
                ("sweep.pi_c", s.pi_c.is_some()),
                ("sweep.pi_rc", s.pi_rc.is_some()),
            ]
            .into_iter()
            .filter_map(|(k, set)| set.then_some(k))
            .collect(),
            Mode::TwoWay => [
                ("rho", self.rho.is_some()),
                ("rho_per_group", self.rho_per_group.is_some()),
                ("sweep.pi_dot", s.pi_dot.is_some()),
                ("sweep.pi", s.pi.is_some()),
            ]
            .into_iter()
            .filter_map(|(k, set)| set.then_some(k))
            .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(field) = self.inapplicable().first() {
            return Err(invalid(format!("{field} does not apply to mode {:?}", self.mode)));
        }
        check_open_unit("alpha", self.alpha)?;
        check_open_unit("lambda", self.lambda)?;
        if self.reps == 0 {
            return Err(invalid("reps must be positive"));
        }
        if self.procedures.is_empty() {
            return Err(invalid("procedures must not be empty"));
        }
        let required = match self.mode {
            Mode::OneWay => &[("sweep.pi", &self.sweep.pi)][..],
            Mode::TwoWay => &[("sweep.pi_rc", &self.sweep.pi_rc)][..],
        };
        for (field, grid) in required {
            match grid {
                None => return Err(invalid(format!("{field} is required"))),
                Some(v) if v.is_empty() => return Err(invalid(format!("{field} must not be empty"))),
                _ => {}
            }
        }
        for grid in [&self.sweep.pi_dot, &self.sweep.pi_r, &self.sweep.pi_c] {
            if grid.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(invalid("sweep grids must not be empty"));
            }
        }
        self.procedures()?;
        for point in self.points() {
            point.design.validate()?;
        }
        Ok(())
    }

    pub fn layout_kind(&self) -> LayoutKind {
        match (self.mode, self.p.unwrap_or(1)) {
            (Mode::OneWay, _) => LayoutKind::OneWay,
            (Mode::TwoWay, 1) => LayoutKind::TwoWayOnePerCell,
            (Mode::TwoWay, _) => LayoutKind::TwoWayCells,
        }
    }

    /// Procedures in config order, with unique labels.
    pub fn procedures(&self) -> Result<Vec<ResolvedProc>> {
        let kind = self.layout_kind();
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.procedures.len());
        for spec in &self.procedures {
            let obj = match spec {
                ProcSpec::Name(name) => ProcObject {
                    name: name.clone(),
                    variant: None,
                    lambda: None,
                    cap_at_one: None,
                    label: None,
                },
                ProcSpec::Full(obj) => obj.clone(),
            };
            let resolved = resolve(&obj, kind, self.lambda)?;
            if !seen.insert(resolved.label.clone()) {
                return Err(invalid(format!(
                    "procedures: duplicate label {:?}",
                    resolved.label
                )));
            }
            out.push(resolved);
        }
        Ok(out)
    }

    /// Sweep points in nested grid order.
    pub fn points(&self) -> Vec<Point> {
        let zero = vec![0.0];
        let grid = |g: &Option<Vec<f64>>| g.clone().unwrap_or_else(|| zero.clone());
        let mut points = Vec::new();
        match self.mode {
            Mode::OneWay => {
                for &pi_dot in &grid(&self.sweep.pi_dot) {
                    for &pi in &grid(&self.sweep.pi) {
                        points.push(Point {
                            design: SimDesign::OneWay(OneWaySimConfig {
                                m: self.m,
                                n: self.n,
                                pi_dot,
                                pi,
                                mu: self.mu,
                                rho: self.rho.unwrap_or(0.0),
                                rho_per_group: self.rho_per_group.clone(),
                            }),
                        });
                    }
                }
            }
            Mode::TwoWay => {
                for &pi_r in &grid(&self.sweep.pi_r) {
                    for &pi_c in &grid(&self.sweep.pi_c) {
                        for &pi_rc in &grid(&self.sweep.pi_rc) {
                            points.push(Point {
                                design: SimDesign::TwoWay(TwoWaySimConfig {
                                    m: self.m,
                                    n: self.n,
                                    p: self.p.unwrap_or(1),
                                    pi_r,
                                    pi_c,
                                    pi_rc,
                                    mu: self.mu,
                                    rho_r: self.rho_r.unwrap_or(0.0),
                                    rho_c: self.rho_c.unwrap_or(0.0),
                                    rho_p: self.rho_p.unwrap_or(0.0),
                                }),
                            });
                        }
                    }
                }
            }
        }
        points
    }
}

fn resolve(obj: &ProcObject, kind: LayoutKind, default_lambda: f64) -> Result<ResolvedProc> {
    let field = |k: &str| format!("procedures[{}].{k}", obj.name);
    let lambda = obj.lambda.unwrap_or(default_lambda);
    if obj.lambda.is_some() {
        check_open_unit(&field("lambda"), lambda)?;
    }
    let uses_lambda = matches!(obj.name.as_str(), "naive_adaptive_bh" | "adaptive_gbh");
    if obj.lambda.is_some() && !uses_lambda {
        return Err(invalid(format!("{} does not apply", field("lambda"))));
    }
    if obj.cap_at_one.is_some() && obj.name != "naive_adaptive_bh" {
        return Err(invalid(format!("{} does not apply", field("cap_at_one"))));
    }
    if obj.variant.is_some() && !matches!(obj.name.as_str(), "oracle_gbh" | "adaptive_gbh") {
        return Err(invalid(format!("{} does not apply", field("variant"))));
    }
    let procedure = match obj.name.as_str() {
        "bh" => Procedure::PlainBh,
        "naive_adaptive_bh" => Procedure::NaiveAdaptiveBh {
            lambda,
            cap_at_one: obj.cap_at_one.unwrap_or(false),
        },
        "oracle_gbh" => {
            let variant = match &obj.variant {
                None => OracleVariant::default_for(kind),
                Some(v) => OracleVariant::from_name(v)
                    .ok_or_else(|| invalid(format!("{}: unknown variant {v:?}", field("variant"))))?,
            };
            if variant.layout_kind() != kind {
                return Err(invalid(format!(
                    "{}: {} does not fit a {} layout",
                    field("variant"),
                    variant.name(),
                    kind.name()
                )));
            }
            Procedure::OracleGbh {
                variant,
                proportions: None,
            }
        }
        "adaptive_gbh" => {
            let variant = match &obj.variant {
                None => AdaptiveVariant::default_for(kind),
                Some(v) => AdaptiveVariant::from_name(v)
                    .ok_or_else(|| invalid(format!("{}: unknown variant {v:?}", field("variant"))))?,
            };
            if variant.layout_kind() != kind {
                return Err(invalid(format!(
                    "{}: {} does not fit a {} layout",
                    field("variant"),
                    variant.name(),
                    kind.name()
                )));
            }
            Procedure::AdaptiveGbh { variant, lambda }
        }
        "lsl_gbh" | "tst_gbh" if kind != LayoutKind::OneWay => {
            return Err(invalid(format!(
                "procedures: {} needs mode one_way",
                obj.name
            )));
        }
        "lsl_gbh" => Procedure::LslGbh,
        "tst_gbh" => Procedure::TstGbh,
        other => return Err(invalid(format!("procedures: unknown procedure {other:?}"))),
    };
    let label = match (&obj.label, &obj.variant) {
        (Some(l), _) => l.clone(),
        (None, Some(v)) => format!("{}/{v}", obj.name),
        (None, None) => obj.name.clone(),
    };
    Ok(ResolvedProc {
        label,
        procedure,
        lambda,
    })
}
