use num_traits::{One, Zero};
use serde_json::json;
use unipotent_core::diffop::{build_lf, monicize, shape_matrix, FTuple};
use unipotent_core::tower::{apply_operator, fundamental_t, nested_solutions, TowerExpr};
use unipotent_core::RatFunc;

use crate::error::CliError;
use crate::input;
use crate::report::{self, Report};

/// `L_f`, its matrix form, and the nested-integral solutions with their checks.
/// With `monic`, the first entry is replaced by the one that makes `L_f` monic.
pub fn run(tuple: &str, monic: bool) -> Result<Report, CliError> {
    let entries = input::tuple(tuple)
        .iter()
        .enumerate()
        .map(|(i, s)| input::ratfunc(s, &format!("f{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.is_empty() {
        return Err(CliError::Input("empty tuple".into()));
    }
    let f = if monic { monicize(&entries[1..])? } else { FTuple::new(entries)? };
    let l = build_lf(&f);
    let a = shape_matrix(&f.entries()[1..])?;
    let (tower, solutions) = nested_solutions(&f, &RatFunc::one())?;
    let annihilated: Vec<bool> = solutions.iter().map(|v| apply_operator(&l, v).is_zero()).collect();
    let t = fundamental_t(&f.entries()[1..])?;
    let at = a.map(|c| TowerExpr::base(c.clone())).try_mul(&t)?;
    let t_tower = t.to_rows().iter().flatten().find_map(|e| e.tower().cloned());
    let outputs = json!({
        "f": report::strings(f.entries()),
        "operator": l.to_string(),
        "monic": l.is_monic(),
        "a": report::matrix(&a),
        "tower": report::tower(&tower),
        "solutions": report::strings(&solutions),
        "fundamental_tower": t_tower.map(|t| report::tower(&t)).unwrap_or_default(),
        "fundamental": report::matrix(&t),
    });
    let certificate = json!({ "annihilation": annihilated, "fundamental_matrix": t.derive() == at });
    Ok(Report::new("expand", json!({ "tuple": tuple, "monicize": monic }), outputs).with_certificate(certificate))
}
