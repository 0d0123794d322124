use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use unipotent_core::inverse::{coordinates, run_pipeline, GroupSpec, PipelineResult};
use unipotent_core::{MatrixQ, Rational};

use crate::config::Config;
use crate::error::CliError;
use crate::input;
use crate::report::{self, Report};

/// The spec file. Absent fields are derived from the others.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    #[serde(default)]
    pub ideal: Option<Vec<String>>,
    #[serde(default)]
    pub lie_basis: Option<Vec<Vec<Vec<Literal>>>>,
    #[serde(default)]
    pub l: Option<usize>,
    #[serde(default)]
    pub a: Option<Vec<String>>,
}

/// A rational entry, written either as a JSON integer or as a string like `"-7/2"`.
#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Str(String),
}

impl Literal {
    fn value(&self, what: &str) -> Result<Rational, CliError> {
        match self {
            Literal::Int(k) => Ok(Rational::from_integer((*k).into())),
            Literal::Str(s) => input::rational(s, what),
        }
    }
}

impl SpecFile {
    pub fn read(path: &Path) -> Result<(SpecFile, Value), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let spec: SpecFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let echo = serde_json::from_str(&text).expect("already parsed");
        Ok((spec, echo))
    }

    pub fn resolve(&self, config: &Config) -> Result<GroupSpec, CliError> {
        let vs = coordinates(self.n);
        let ideal = self
            .ideal
            .as_ref()
            .map(|gens| {
                gens.iter()
                    .enumerate()
                    .map(|(i, g)| vs.parse::<Rational>(g).map_err(|e| CliError::from(e).context(&format!("ideal[{i}] `{g}`"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let lie = self
            .lie_basis
            .as_ref()
            .map(|basis| {
                basis
                    .iter()
                    .enumerate()
                    .map(|(k, m)| self.lie_matrix(k, m))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let a = self
            .a
            .as_ref()
            .map(|a| a.iter().enumerate().map(|(i, s)| input::ratfunc(s, &format!("a[{i}]"))).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(GroupSpec::resolve(self.n, ideal, lie, self.l, a, &config.budgets())?)
    }

    fn lie_matrix(&self, k: usize, rows: &[Vec<Literal>]) -> Result<MatrixQ, CliError> {
        let what = format!("lie_basis[{k}]");
        if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Input(format!("{what} is not {0}x{0}", self.n)));
        }
        let entries = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, c)| c.value(&format!("{what}[{i}][{j}]"))).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(MatrixQ::from_rows(entries)?)
    }
}

pub fn run(spec_path: &Path, out: Option<&Path>, config: &Config) -> Result<Report, CliError> {
    let (file, echo) = SpecFile::read(spec_path)?;
    let spec = file.resolve(config)?;
    let r = run_pipeline(&spec, &config.budgets())?;
    let report = Report::new("construct", json!({ "spec": echo }), outputs(&spec, &r)).with_certificate(certificate(&r));
    if let Some(path) = out {
        std::fs::write(path, report.to_json() + "\n").map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}

fn outputs(spec: &GroupSpec, r: &PipelineResult) -> Value {
    let vs = coordinates(spec.n);
    json!({
        "n": spec.n,
        "l": spec.l,
        "lie_basis": spec.lie_basis.iter().map(report::matrix).collect::<Vec<_>>(),
        "a_choices": report::strings(&r.a_choices),
        "a_u": report::matrix(&r.a_u),
        "cyclic_vector": report::strings(&r.cyclic_vector),
        "b": report::matrix(&r.b),
        "a_c": report::matrix(&r.a_c),
        "ideal_basis": r.ideal_basis.iter().map(|p| p.display(&vs).to_string()).collect::<Vec<_>>(),
        "w": r.w.iter().map(|p| p.display(&vs).to_string()).collect::<Vec<_>>(),
        "g": r.g.iter().map(|g| json!({ "num": g.num().display(&vs).to_string(), "den": g.den().display(&vs).to_string() })).collect::<Vec<_>>(),
        "f": report::strings(r.f_tuple.entries()),
        "a": report::matrix(&r.a),
        "operator": r.l.to_string(),
    })
}

fn certificate(r: &PipelineResult) -> Value {
    let c = &r.certificate;
    json!({
        "companion_shape": c.companion_shape,
        "z_free": c.z_free,
        "annihilation": c.annihilation,
        "fundamental_matrix": c.fundamental_matrix,
        "differential_ideal": c.differential_ideal,
        "operator_match": c.operator_match,
    })
}
