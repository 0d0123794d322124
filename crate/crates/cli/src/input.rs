use std::sync::Arc;

use unipotent_core::matrix::Matrix;
use unipotent_core::tower::{Tower, TowerExpr};
use unipotent_core::{RatFunc, Rational};

use crate::error::CliError;

pub fn ratfunc(src: &str, what: &str) -> Result<RatFunc, CliError> {
    src.parse::<RatFunc>().map_err(|e| CliError::from(e).context(&format!("{what} `{src}`")))
}

pub fn rational(src: &str, what: &str) -> Result<Rational, CliError> {
    src.trim().parse::<Rational>().map_err(|e| CliError::Input(format!("{what} `{src}`: {e}")))
}

/// Splits `(a, b, c)` or `a, b, c` at the commas outside parentheses.
pub fn tuple(src: &str) -> Vec<String> {
    let s = src.trim();
    let inner = match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(r) if balanced(r) => r,
        _ => s,
    };
    let mut parts = Vec::new();
    let (mut depth, mut cur) = (0i32, String::new());
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    parts.push(cur.trim().to_string());
    parts
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

/// `name=definition`.
pub fn generator(src: &str) -> Result<(String, String), CliError> {
    let (name, def) = src
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("generator `{src}` is not of the form name=definition")))?;
    Ok((name.trim().to_string(), def.trim().to_string()))
}

pub fn tower(defs: &[(String, String)]) -> Result<Arc<Tower>, CliError> {
    Tower::from_defs(defs).map_err(|e| CliError::from(e).context("tower"))
}

pub fn tower_expr(t: &Arc<Tower>, src: &str, what: &str) -> Result<TowerExpr, CliError> {
    t.parse(src).map_err(|e| CliError::from(e).context(&format!("{what} `{src}`")))
}

pub fn matrix<T: unipotent_core::Ring>(
    rows: &[Vec<String>],
    what: &str,
    entry: impl Fn(&str, &str) -> Result<T, CliError>,
) -> Result<Matrix<T>, CliError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, s)| entry(s, &format!("{what}[{i}][{j}]"))).collect())
        .collect::<Result<Vec<Vec<T>>, _>>()?;
    Matrix::from_rows(parsed).map_err(|e| CliError::from(e).context(what))
}

pub fn json_matrix(src: &str, what: &str) -> Result<Vec<Vec<String>>, CliError> {
    serde_json::from_str(src).map_err(|e| CliError::Input(format!("{what}: expected a JSON array of rows of strings: {e}")))
}
