//! `sabinin`, `loop` and `bch` commands.

use sabinin_core::bch::{exp_series, integrate, log_series, recover_low_brackets, LowDegreeRelations, RbchSeries};
use sabinin_core::poly::{format_vec, Poly};
use sabinin_core::sabinin::{ms_bracket, multioperator, shu_p};
use sabinin_core::structure::{sub_vec, Vector};
use sabinin_core::table::{lower_filtration, ux_table, FiltrationOutcome};
use sabinin_core::verify::{associator_expansion_residual, Check, Status};
use sabinin_core::{Field, FreeElement, PolyLoop, SabininTable};
use serde_json::{json, Value};

use super::{as_algebra, as_loop, as_table, coords, index_list, show_vec, Ctx, Outcome, Result};
use crate::cli::{BchCmd, LoopCmd, SabininCmd};
use crate::error::KitError;
use crate::formats::{element_from_text, element_json, loop_json, table_json, vector_json};

fn gens(field: Field, d: u32, idx: &[usize]) -> Vec<FreeElement> {
    idx.iter().map(|&i| FreeElement::gen(field, d, i as u32)).collect()
}

fn primitive_check(name: &str, e: &FreeElement) -> Check {
    Check::new(name, "primitive-components", e.is_primitive(), e.to_string())
}

pub fn sabinin(cmd: &SabininCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let field = ctx.field();
    match cmd {
        SabininCmd::ShuP { u, v, z } => {
            let (u, v, z) = (index_list(u, "u")?, index_list(v, "v")?, index_list(z, "z")?);
            if z.len() != 1 {
                return Err(KitError::Usage("z: expected a single generator".into()));
            }
            let d = ctx.degree_or((u.len() + v.len() + 1).max(2) as u32);
            let (us, vs, zs) = (gens(field, d, &u), gens(field, d, &v), gens(field, d, &z));
            let p = shu_p(&us, &vs, &zs[0])?;
            let residual = associator_expansion_residual(&us, &vs, &zs[0])?;
            let checks = vec![
                primitive_check("value is primitive", &p),
                Check::new("associator expansion closes", "associator-expansion", residual.is_zero(), residual.to_string()),
            ];
            Ok(Outcome::new(format!("p = {p}\n"), element_json(&p), checks))
        }
        SabininCmd::Ms { prefix, y, z } => {
            let (prefix, y, z) = (index_list(prefix, "prefix")?, index_list(y, "y")?, index_list(z, "z")?);
            if y.len() != 1 || z.len() != 1 {
                return Err(KitError::Usage("y, z: expected single arguments".into()));
            }
            if ctx.has_fixture() {
                let t = as_table(ctx.fixture_or("")?)?;
                let v = t.ms(&prefix, y[0], z[0])?;
                let swapped = t.ms(&prefix, z[0], y[0])?;
                let neg: Vector = v.iter().map(|c| -c).collect();
                let checks = vec![Check::new("antisymmetric in y, z", "ms-antisymmetry", swapped == neg, show_vec(&swapped))];
                return Ok(Outcome::new(format!("bracket = {}\n", show_vec(&v)), vector_json(&v), checks));
            }
            let d = ctx.degree_or(prefix.len() as u32 + 2);
            let (xs, ys, zs) = (gens(field, d, &prefix), gens(field, d, &y), gens(field, d, &z));
            let b = ms_bracket(&xs, &ys[0], &zs[0])?;
            let swapped = ms_bracket(&xs, &zs[0], &ys[0])?;
            let checks = vec![
                primitive_check("bracket is primitive", &b),
                Check::new("antisymmetric in y, z", "ms-antisymmetry", (&b + &swapped).is_zero(), swapped.to_string()),
            ];
            Ok(Outcome::new(format!("bracket = {b}\n"), element_json(&b), checks))
        }
        SabininCmd::Phi { xs, ys } => {
            let (xs, ys) = (index_list(xs, "xs")?, index_list(ys, "ys")?);
            let (rx, ry): (Vec<usize>, Vec<usize>) = (xs.iter().rev().copied().collect(), ys.iter().rev().copied().collect());
            if ctx.has_fixture() {
                let t = as_table(ctx.fixture_or("")?)?;
                let v = t.phi(&xs, &ys)?;
                let r = t.phi(&rx, &ry)?;
                let checks = vec![Check::new("symmetric in each argument group", "phi-symmetry", r == v, show_vec(&r))];
                return Ok(Outcome::new(format!("multioperator = {}\n", show_vec(&v)), vector_json(&v), checks));
            }
            let d = ctx.degree_or((xs.len() + ys.len()) as u32);
            let phi = multioperator(&gens(field, d, &xs), &gens(field, d, &ys))?;
            let rev = multioperator(&gens(field, d, &rx), &gens(field, d, &ry))?;
            let checks = vec![
                primitive_check("multioperator is primitive", &phi),
                Check::new("symmetric in each argument group", "phi-symmetry", rev == phi, rev.to_string()),
            ];
            Ok(Outcome::new(format!("multioperator = {phi}\n"), element_json(&phi), checks))
        }
        SabininCmd::Ux => {
            let a = as_algebra(ctx.fixture_or("remark-algebra")?)?;
            let w = ctx.degree_or(3) as usize;
            let t = ux_table(&a, w)?;
            let mut checks = Vec::new();
            let mut bad = None;
            for y in 0..a.dim() {
                for z in 0..a.dim() {
                    let (ey, ez) = (a.basis(y), a.basis(z));
                    let want = sub_vec(&a.mul(&ez, &ey), &a.mul(&ey, &ez));
                    if t.ms(&[], y, z)? != want && bad.is_none() {
                        bad = Some(format!("e{} e{}", y + 1, z + 1));
                    }
                }
            }
            checks.push(Check::new("weight-two bracket is zy - yz", "ux-commutator", bad.is_none(), bad.unwrap_or_default()));
            if a.is_associative() {
                let higher = t.ms_entries().keys().find(|k| !k.0.is_empty()).map(|k| format!("{k:?}"));
                let phi = t.phi_entries().keys().next().map(|k| format!("{k:?}"));
                let w = higher.clone().or(phi.clone()).unwrap_or_else(|| "none".into());
                checks.push(Check::new("associative input has only the Lie bracket", "ux-associative", higher.is_none() && phi.is_none(), w));
            }
            let text = format!(
                "dim {}, weight bound {w}, {} nonzero brackets, {} nonzero multioperator values\n",
                t.dim(),
                t.ms_entries().len(),
                t.phi_entries().len()
            );
            Ok(Outcome::new(text, table_json(&t), checks))
        }
        SabininCmd::Filtration => {
            let t = as_table(ctx.fixture_or("remark")?)?;
            let f = lower_filtration(&t);
            let (verdict, status) = match &f.outcome {
                FiltrationOutcome::Nilpotent { class } => (format!("nilpotent of class {class}"), Status::Pass),
                FiltrationOutcome::NotNilpotent { from, dim } => (format!("not nilpotent: constant of dim {dim} from level {from}"), Status::Pass),
                FiltrationOutcome::Inconclusive { levels } => (format!("undecided after {levels} levels"), Status::Inconclusive),
            };
            let mut checks = vec![Check { name: "filtration decided".into(), anchor: "filtration", status, witness: verdict.clone() }];
            if let Some(c) = t.claimed_class() {
                checks.push(Check::new("claimed class agrees", "claimed-class", f.class() == Some(c), format!("claimed {c}, found {:?}", f.class())));
                let consistent = t.check_claimed_class();
                checks.push(Check::new("no entries above the claimed class", "claimed-class", consistent.is_ok(), consistent.err().map(|e| e.to_string()).unwrap_or_default()));
            }
            let text = format!("dims {:?}\n{verdict}\n", f.dims());
            Ok(Outcome::new(text, json!({ "dims": f.dims(), "class": f.class(), "outcome": verdict }), checks))
        }
    }
}

fn certificate_checks(l: &PolyLoop, depth: usize) -> Vec<Check> {
    l.verify_n_sequence(depth)
        .entries
        .iter()
        .map(|e| Check::new(&e.name, "n-sequence", e.passed(), e.counterexamples.first().cloned().unwrap_or_default()))
        .collect()
}

fn certificate_summary(l: &PolyLoop) -> Check {
    let cert = l.verify_n_sequence(2);
    let failing: Vec<&str> = cert.entries.iter().filter(|e| !e.passed()).map(|e| e.name.as_str()).collect();
    let w = if failing.is_empty() { format!("{} identities", cert.entries.len()) } else { failing.join(", ") };
    Check::new("loop certificate", "n-sequence", failing.is_empty(), w)
}

fn show_loop(l: &PolyLoop) -> String {
    let mut s = format!("dim {}, degree {}, weights {:?}\n", l.dim(), l.deg(), l.weights());
    for (i, f) in l.product_map().iter().enumerate() {
        s.push_str(&format!("F{} = {f}\n", i + 1));
    }
    s
}

fn built_loop(ctx: &mut Ctx, require_table: bool) -> Result<Outcome> {
    let f = ctx.fixture_or("free-nilp-2-2")?;
    let (l, table) = if require_table { let t = as_table(f)?; (integrate(&t)?, Some(t)) } else { as_loop(f)? };
    let mut checks = vec![certificate_summary(&l)];
    if let Some(c) = table.as_ref().and_then(SabininTable::claimed_class) {
        let found = l.nilpotency_class(c + 1);
        checks.push(Check::new("loop keeps the class", "integration", found == c, format!("table {c}, loop {found}")));
    }
    Ok(Outcome::new(show_loop(&l), loop_json(&l), checks))
}

fn names(prefix: &str, v: &[Poly]) -> String {
    v.iter().enumerate().map(|(i, p)| format!("{prefix}{} = {p}\n", i + 1)).collect()
}

pub fn polyloop(cmd: &LoopCmd, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        LoopCmd::Build => built_loop(ctx, false),
        LoopCmd::Divide { x, y } => {
            let (l, _) = as_loop(ctx.fixture_or("free-nilp-2-2")?)?;
            let (xa, ya) = (l.arg(0), l.arg(1));
            let mut checks = vec![
                Check::new("x (x\\y) = y", "divisions", l.mul(&xa, l.left_division_map()) == ya, String::new()),
                Check::new("(x/y) y = x", "divisions", l.mul(l.right_division_map(), &ya) == xa, String::new()),
            ];
            let mut text = names("D", l.left_division_map()) + &names("E", l.right_division_map());
            let mut out = json!({
                "left": l.left_division_map().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "right": l.right_division_map().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            });
            match (x, y) {
                (Some(x), Some(y)) => {
                    let field = l.field();
                    let (xv, yv) = (coords(field, x, l.dim(), "x")?, coords(field, y, l.dim(), "y")?);
                    let d = l.eval(l.left_division_map(), &[&xv, &yv]);
                    let r = l.eval(l.right_division_map(), &[&xv, &yv]);
                    checks.push(Check::new("x (x\\y) = y at the point", "divisions", l.mul_points(&xv, &d) == yv, show_vec(&d)));
                    checks.push(Check::new("(x/y) y = x at the point", "divisions", l.mul_points(&r, &yv) == xv, show_vec(&r)));
                    text.push_str(&format!("x\\y = {}\nx/y = {}\n", show_vec(&d), show_vec(&r)));
                    out["at"] = json!({ "ldiv": vector_json(&d), "rdiv": vector_json(&r) });
                }
                (None, None) => {}
                _ => return Err(KitError::Usage("--x and --y go together".into())),
            }
            Ok(Outcome::new(text, out, checks))
        }
        LoopCmd::Deviations { depth } => {
            let (l, _) = as_loop(ctx.fixture_or("free-nilp-2-3")?)?;
            let comm = l.commutator();
            let assoc = l.associator();
            let mut text = format!("commutator {}\nassociator {}\n", format_vec(&comm), format_vec(&assoc));
            let mut devs = Vec::new();
            for j in 0..3.min(*depth + 2) {
                let d = l.associator_deviation(&[j])?;
                text.push_str(&format!("associator deviation[{}] {}\n", j + 1, format_vec(&d)));
                devs.push(format_vec(&d));
            }
            let out = json!({ "commutator": format_vec(&comm), "associator": format_vec(&assoc), "associator_deviations": devs });
            Ok(Outcome::new(text, out, certificate_checks(&l, *depth)))
        }
        LoopCmd::Certify { depth } => {
            let (l, _) = as_loop(ctx.fixture_or("free-nilp-2-2")?)?;
            let checks = certificate_checks(&l, *depth);
            let text = format!("{} identities checked\n", checks.len());
            Ok(Outcome::new(text, loop_json(&l), checks))
        }
    }
}

fn element_arg(ctx: &mut Ctx, arg: &str) -> Result<FreeElement> {
    let text = ctx.input_text(arg)?;
    element_from_text(&text, ctx.field(), ctx.degree_or(4))
}

fn same_nonzero_phi(a: &SabininTable, b: &SabininTable) -> bool {
    let nz = |t: &SabininTable| -> Vec<(Vec<usize>, Vec<usize>, Vector)> {
        t.phi_entries().iter().filter(|(_, v)| v.iter().any(|c| !c.is_zero())).map(|(k, v)| (k.0.clone(), k.1.clone(), v.clone())).collect()
    };
    nz(a) == nz(b)
}

pub fn bch(cmd: &BchCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let field = ctx.field();
    match cmd {
        BchCmd::Exp { element } => {
            let x = element_arg(ctx, element)?;
            let d = x.trunc();
            let e = exp_series(&x, d)?;
            let back = log_series(&e, d)?;
            let checks = vec![
                Check::new("input is primitive", "exp-log", x.is_primitive(), String::new()),
                Check::new("exp is group-like", "exp-log", e.is_grouplike(), String::new()),
                Check::new("log exp is the identity", "exp-log", back == x, back.to_string()),
            ];
            Ok(Outcome::new(format!("exp = {e}\n"), element_json(&e), checks))
        }
        BchCmd::Log { element } => {
            let g = element_arg(ctx, element)?;
            let d = g.trunc();
            let l = log_series(&g, d)?;
            let back = exp_series(&l, d)?;
            let checks = vec![
                Check::new("log is primitive", "exp-log", l.is_primitive(), String::new()),
                Check::new("exp log is the identity", "exp-log", back == g, back.to_string()),
            ];
            Ok(Outcome::new(format!("log = {l}\n"), element_json(&l), checks))
        }
        BchCmd::Rbch => {
            let d = ctx.degree_or(4);
            let s = RbchSeries::new(field, d)?;
            let mut text = String::new();
            let mut comps = Vec::new();
            let mut bad_rebuild = None;
            for w in 1..=d {
                let c = s.component(w).with_trunc(w);
                text.push_str(&format!("weight {w}: {c}\n"));
                let mut entry = json!({ "weight": w, "element": element_json(&c) });
                if w >= 2 {
                    text.push_str(&format!("  as brackets: {}\n", s.brackets(w)));
                    entry["brackets"] = Value::String(s.brackets(w).to_string());
                    let args = [FreeElement::gen(field, w, 0), FreeElement::gen(field, w, 1)];
                    let mut back = FreeElement::zero(field, w);
                    for (e, k) in &s.brackets(w).0 {
                        back.axpy(k, &e.to_free(&args)?);
                    }
                    if back != c && bad_rebuild.is_none() {
                        bad_rebuild = Some(format!("weight {w}"));
                    }
                }
                comps.push(entry);
            }
            let mut checks = Vec::new();
            if d >= 2 {
                let (x, y) = (FreeElement::gen(field, 2, 0), FreeElement::gen(field, 2, 1));
                let half = field.ratio(1, 2)?;
                let want = (&(&x * &y) - &(&y * &x)).scale(&half);
                let got = s.component(2).with_trunc(2);
                checks.push(Check::new("weight 2 is half the commutator", "rbch-weight-two", got == want, got.to_string()));
            }
            let np = (1..=d).find(|&w| !s.component(w).is_primitive());
            checks.push(Check::new("components are primitive", "primitive-rbch", np.is_none(), np.map(|w| format!("weight {w}")).unwrap_or_default()));
            checks.push(Check::new("components are bracket combinations", "rbch-brackets", bad_rebuild.is_none(), bad_rebuild.unwrap_or_default()));
            Ok(Outcome::new(text, json!({ "trunc": d, "components": comps }), checks))
        }
        BchCmd::Integrate => built_loop(ctx, true),
        BchCmd::Roundtrip => {
            let t = as_table(ctx.fixture_or("free-nilp-2-2")?)?;
            let l = integrate(&t)?;
            let rel = LowDegreeRelations::compute(t.field())?;
            let back = recover_low_brackets(&l, &rel)?;
            let low = t.restricted(3);
            let checks = vec![
                certificate_summary(&l),
                Check::new("brackets recovered", "integration", back.ms_entries() == low.ms_entries(), format!("{} entries", back.ms_entries().len())),
                Check::new("multioperator recovered", "integration", same_nonzero_phi(&back, &low), String::new()),
            ];
            let text = show_loop(&l) + &format!("recovered {} brackets up to weight 3\n", back.ms_entries().len());
            Ok(Outcome::new(text, json!({ "loop": loop_json(&l), "recovered": table_json(&back) }), checks))
        }
    }
}
