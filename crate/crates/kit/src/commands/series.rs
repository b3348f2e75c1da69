//! `series` commands: composition loops of power series.

use sabinin_core::poly::vec_is_zero;
use sabinin_core::series::{b_compose, b_compose_by_formula, b_graded_associator, b_graded_commutator, b_loop, c_mul, CSeries};
use rand_chacha::ChaCha8Rng;
use sabinin_core::structure::{StructureConstants, Vector};
use sabinin_core::verify::{shifted_commutator_prediction, Check};
use sabinin_core::Field;
use serde_json::{json, Value};

use super::{as_algebra, coords, random_point, show_vec, Ctx, Outcome, Result};
use crate::cli::SeriesCmd;
use crate::error::KitError;
use crate::formats::{bseries_from_json, bseries_json, cseries_from_json, cseries_json, loop_json, vector_json};

/// `--degree` if given, else the larger `"depth"` key, else the longest
/// coefficient list.
fn depth_of(ctx: &Ctx, files: &[&Value], list_key: &str) -> Result<usize> {
    if let Some(d) = ctx.degree() {
        return Ok(d as usize);
    }
    let keyed = files.iter().filter_map(|v| v.get("depth").and_then(Value::as_u64)).max();
    let listed = files.iter().filter_map(|v| v.get(list_key).and_then(Value::as_array).map(Vec::len)).max();
    keyed.map(|d| d as usize).or(listed).filter(|&d| d > 0).ok_or_else(|| KitError::Input("series depth unknown; pass --degree".into()))
}

fn point_arg(alg: &StructureConstants, arg: &Option<String>, what: &str, rng: &mut ChaCha8Rng) -> Result<Vector> {
    match arg {
        Some(s) => coords(alg.field(), s, alg.dim(), what),
        None => Ok(random_point(rng, alg.field(), alg.dim())),
    }
}

pub fn run(cmd: &SeriesCmd, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        SeriesCmd::BCompose { algebra, a, b } => {
            let alg = as_algebra(ctx.load_fixture(algebra)?)?;
            let (va, vb) = (ctx.input_json(a)?, ctx.input_json(b)?);
            let depth = depth_of(ctx, &[&va, &vb], "coefficients")?;
            let (sa, sb) = (bseries_from_json(&va, &alg, depth)?, bseries_from_json(&vb, &alg, depth)?);
            let c = b_compose(&alg, &sa, &sb)?;
            let f = b_compose_by_formula(&alg, &sa, &sb)?;
            let checks = vec![Check::new("substitution agrees with the coefficient formula", "b-compose", c == f, String::new())];
            let text: String = c.coeffs.iter().enumerate().map(|(m, v)| format!("x^{}: {}\n", m + 2, show_vec(v))).collect();
            Ok(Outcome::new(text, bseries_json(&c, alg.field()), checks))
        }
        SeriesCmd::Nottingham => {
            let field = match ctx.field() {
                Field::Rational => Field::prime(7)?,
                f => f,
            };
            let depth = ctx.degree_or(6) as usize;
            let l = b_loop(&StructureConstants::scalars(field), depth)?;
            let cert = l.verify_n_sequence(2);
            let failing: Vec<&str> = cert.entries.iter().filter(|e| !e.passed()).map(|e| e.name.as_str()).collect();
            let checks = vec![
                Check::new("associator vanishes", "nottingham", vec_is_zero(&l.associator()), String::new()),
                Check::new("loop certificate", "n-sequence", failing.is_empty(), failing.join(", ")),
            ];
            let text = format!("composition loop over {field}, depth {depth}, dim {}\ncommutator nonzero: {}\n", l.dim(), !vec_is_zero(&l.commutator()));
            Ok(Outcome::new(text, loop_json(&l), checks))
        }
        SeriesCmd::CMul { algebra, a, b } => {
            let alg = as_algebra(ctx.load_fixture(algebra)?)?;
            let (va, vb) = (ctx.input_json(a)?, ctx.input_json(b)?);
            let depth = depth_of(ctx, &[&va, &vb], "terms")? as u32;
            let (sa, sb) = (cseries_from_json(&va, &alg, depth)?, cseries_from_json(&vb, &alg, depth)?);
            let c = c_mul(&alg, &sa, &sb)?;
            let one = CSeries::one(depth);
            let neutral = c_mul(&alg, &one, &sa)? == sa && c_mul(&alg, &sa, &one)? == sa;
            let checks = vec![Check::new("unit series is neutral", "c-mul", neutral, String::new())];
            let text: String = c.coeffs.iter().map(|(w, v)| format!("{w}: {}\n", show_vec(v))).collect();
            Ok(Outcome::new(text, cseries_json(&c, alg.field()), checks))
        }
        SeriesCmd::Brackets { algebra, i, j, k, a, b, c } => {
            if *i == 0 || *j == 0 || *k == Some(0) {
                return Err(KitError::Usage("degrees start at 1".into()));
            }
            let alg = as_algebra(ctx.load_fixture(algebra)?)?;
            let mut rng = ctx.rng();
            let va = point_arg(&alg, a, "a", &mut rng)?;
            let vb = point_arg(&alg, b, "b", &mut rng)?;
            let mut out = json!({ "a": vector_json(&va), "b": vector_json(&vb) });
            let mut checks = Vec::new();
            let text = if let Some(k) = k {
                let vc = point_arg(&alg, c, "c", &mut rng)?;
                let g = b_graded_associator(&alg, (*i, *j, *k), &va, &vb, &vc)?;
                checks.push(Check::new("graded associator formula", "graded-associator", g.holds(), show_vec(&g.difference())));
                out["c"] = vector_json(&vc);
                out["leading"] = vector_json(&g.leading);
                format!("associator leading term in degree {}: {}\npredicted {}\n", g.degree, show_vec(&g.leading), show_vec(&g.predicted))
            } else {
                let g = b_graded_commutator(&alg, *i, *j, &va, &vb)?;
                let shifted = shifted_commutator_prediction(&alg, *i, *j, &va, &vb);
                checks.push(Check::new("graded commutator, displayed formula i ab - j ba", "graded-commutator", g.holds(), show_vec(&g.difference())));
                checks.push(Check::new(
                    "graded commutator, leading term (i+1) ab - (j+1) ba",
                    "graded-commutator",
                    g.lower_vanish && g.leading == shifted,
                    show_vec(&shifted),
                ));
                out["leading"] = vector_json(&g.leading);
                format!("commutator leading term in degree {}: {}\ndisplayed formula {}\n", g.degree, show_vec(&g.leading), show_vec(&g.predicted))
            };
            Ok(Outcome::new(text, out, checks))
        }
    }
}
