use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;
use unipotent_core::diffop::parse_operator;
use unipotent_core::tower::{apply_operator, TowerExpr};

use crate::error::CliError;
use crate::input;
use crate::report::{self, Report};

/// Either an operator with candidate solutions, or a matrix with a candidate
/// fundamental matrix, over a tower declared as `[name, definition]` pairs.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyInput {
    #[serde(default)]
    pub tower: Vec<(String, String)>,
    #[serde(default)]
    pub operator: Option<String>,
    #[serde(default)]
    pub solutions: Vec<String>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub fundamental: Option<Vec<Vec<String>>>,
}

impl VerifyInput {
    pub fn read(path: &Path) -> Result<VerifyInput, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

pub fn run(v: &VerifyInput) -> Result<Report, CliError> {
    let tower = input::tower(&v.tower)?;
    let inputs = serde_json::to_value(v).expect("inputs serialize");
    match (&v.operator, &v.matrix) {
        (Some(op), None) => {
            if v.solutions.is_empty() {
                return Err(CliError::Input("an operator needs at least one solution to check".into()));
            }
            let l = parse_operator(op).map_err(|e| CliError::from(e).context("operator"))?;
            let residuals = v
                .solutions
                .iter()
                .enumerate()
                .map(|(i, s)| Ok(apply_operator(&l, &input::tower_expr(&tower, s, &format!("solutions[{i}]"))?)))
                .collect::<Result<Vec<TowerExpr>, CliError>>()?;
            let outputs = json!({ "operator": l.to_string(), "residuals": report::strings(&residuals) });
            let certificate = json!({ "annihilated": residuals.iter().map(Zero::is_zero).collect::<Vec<_>>() });
            Ok(Report::new("verify", inputs, outputs).with_certificate(certificate))
        }
        (None, Some(rows)) => {
            let t_rows = v.fundamental.as_ref().ok_or_else(|| CliError::Input("a matrix needs a fundamental matrix to check".into()))?;
            let a = input::matrix(rows, "matrix", |s, what| Ok(TowerExpr::base(input::ratfunc(s, what)?)))?;
            let t = input::matrix(t_rows, "fundamental", |s, what| input::tower_expr(&tower, s, what))?;
            if !a.is_square() || a.rows() != t.rows() || !t.is_square() {
                return Err(CliError::Input(format!(
                    "matrix is {}x{} but fundamental is {}x{}",
                    a.rows(),
                    a.cols(),
                    t.rows(),
                    t.cols()
                )));
            }
            let residual = t.derive().try_sub(&a.try_mul(&t)?)?;
            let outputs = json!({ "residual": report::matrix(&residual), "det": t.det().to_string() });
            let certificate = json!({ "fundamental_matrix": residual.is_zero(), "invertible": !t.det().is_zero() });
            Ok(Report::new("verify", inputs, outputs).with_certificate(certificate))
        }
        _ => Err(CliError::Input("give exactly one of an operator or a matrix".into())),
    }
}
