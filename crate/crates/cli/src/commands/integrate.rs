use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};
use unipotent_core::integrab::{
    classify_exp, classify_log, classify_radical, elementary_n_witness, infinity_integrable_in_cx, n_integrable_in_cx,
    verify_liouville_form, ElementaryWitness, IntegrabilityVerdict,
};
use unipotent_core::tower::Tower;
use unipotent_core::{Error, RatFunc};

use crate::error::CliError;
use crate::input;
use crate::report::{self, Report, Status};

/// The field the expression lives in. Each non-rational field has one
/// generator with a fixed name: `t = exp(x)`, `L = log(x)`, `r = x^(1/n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldArg {
    Rational,
    Exp,
    Log,
    Radical(u32),
}

impl FromStr for FieldArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" => Ok(FieldArg::Rational),
            "exp" => Ok(FieldArg::Exp),
            "log" => Ok(FieldArg::Log),
            _ => match s.strip_prefix("radical:").map(str::parse::<u32>) {
                Some(Ok(n)) if n >= 2 => Ok(FieldArg::Radical(n)),
                _ => Err(format!("unknown field `{s}`; expected rational, exp, log or radical:n with n >= 2")),
            },
        }
    }
}

impl fmt::Display for FieldArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldArg::Rational => write!(f, "rational"),
            FieldArg::Exp => write!(f, "exp"),
            FieldArg::Log => write!(f, "log"),
            FieldArg::Radical(n) => write!(f, "radical:{n}"),
        }
    }
}

impl FieldArg {
    fn tower(self) -> Result<Arc<Tower>, Error> {
        match self {
            FieldArg::Rational => Ok(Tower::base()),
            FieldArg::Exp => Tower::from_defs(&[("t", "exp(x)")]),
            FieldArg::Log => Tower::from_defs(&[("L", "log(x)")]),
            FieldArg::Radical(n) => Tower::from_defs(&[("r".to_string(), format!("x^(1/{n})"))]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl FromStr for Depth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" => Ok(Depth::Infinite),
            _ => match s.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Depth::Finite(n)),
                _ => Err(format!("depth `{s}` is neither a positive integer nor `inf`")),
            },
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(n) => write!(f, "{n}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

/// Rational inputs get the in-field verdict and, at finite depth, an
/// elementary witness over `Q(x)`. In the other fields the classifiers decide
/// ∞-integrability and the depth (1 for `inf`) picks the witness.
pub fn run(field: FieldArg, expr: &str, depth: Depth) -> Result<Report, CliError> {
    let inputs = json!({ "field": field.to_string(), "expr": expr, "depth": depth.to_string() });
    let tower = field.tower()?;
    let (outputs, integrable) = match field {
        FieldArg::Rational => {
            let g = input::ratfunc(expr, "expr")?;
            rational(&g, depth)?
        }
        _ => {
            let g = input::tower_expr(&tower, expr, "expr")?;
            let d = match depth {
                Depth::Finite(n) => n,
                Depth::Infinite => 1,
            };
            let v = match field {
                FieldArg::Exp => classify_exp(&g, d),
                FieldArg::Log => classify_log(&g, d),
                _ => classify_radical(&g, d),
            };
            let integrable = v.is_integrable();
            let mut out = verdict(v)?;
            out["tower"] = json!(report::tower(&tower));
            out["decides"] = json!("infinity-integrability");
            (out, integrable)
        }
    };
    let status = if integrable { Status::Ok } else { Status::Negative };
    Ok(Report::new("integrate", inputs, outputs).with_status(status))
}

fn rational(g: &RatFunc, depth: Depth) -> Result<(Value, bool), CliError> {
    match depth {
        Depth::Infinite => {
            let v = infinity_integrable_in_cx(g);
            let ok = v.is_integrable();
            Ok((verdict(v)?, ok))
        }
        Depth::Finite(n) => {
            let v = n_integrable_in_cx(g, n);
            let in_field = v.is_integrable();
            let mut out = json!({ "in_field": verdict(v)? });
            out["elementary"] = match elementary_n_witness(g, n) {
                Ok(w) => elementary(g, &w),
                Err(_) if in_field => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let verified = out["elementary"]["form_verified"] != Value::Bool(false);
            Ok((out, verified))
        }
    }
}

fn verdict(v: IntegrabilityVerdict) -> Result<Value, CliError> {
    match v {
        IntegrabilityVerdict::Integrable { witness, depth } => {
            Ok(json!({ "verdict": "integrable", "witness": witness.to_string(), "witness_depth": depth }))
        }
        IntegrabilityVerdict::NotIntegrable(o) => Ok(json!({ "verdict": "not integrable", "obstruction": o.to_string() })),
        IntegrabilityVerdict::NotSupported(why) => Err(CliError::Input(format!("not supported: {why}"))),
    }
}

fn elementary(g: &RatFunc, w: &ElementaryWitness) -> Value {
    let terms: Vec<Value> = w
        .form
        .terms()
        .iter()
        .map(|(p, u)| json!({ "coefficient": RatFunc::from_poly(p.clone()).to_string(), "argument": u.to_string() }))
        .collect();
    json!({
        "tower": report::tower(&w.tower),
        "witness": w.eta.to_string(),
        "form": { "f": w.form.f().to_string(), "terms": terms },
        "form_verified": verify_liouville_form(g, &w.form),
    })
}
