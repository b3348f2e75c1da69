//! `jennings` commands: finite loops and lattice embeddings.

use sabinin_core::loops::{comm_assoc_filtration, dimension_subloops, lattice_points, loop_ado_check};
use sabinin_core::structure::Vector;
use sabinin_core::verify::Check;
use sabinin_core::Field;
use serde_json::json;

use super::{as_cayley, as_table, random_point, Ctx, Outcome, Result};
use crate::cli::JenningsCmd;
use crate::error::KitError;

/// Largest lattice enumerated in full.
const FULL_LATTICE: i64 = 5000;

pub fn jennings(cmd: &JenningsCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let field = ctx.field();
    match cmd {
        JenningsCmd::DimensionSubloops => {
            let l = as_cayley(ctx.fixture_or("loop8")?)?;
            let d = dimension_subloops(&l, field);
            let mut text = String::new();
            let mut terms = Vec::new();
            for (k, t) in d.terms.iter().enumerate() {
                let names = l.describe(t);
                text.push_str(&format!("D{} (order {}): {}\n", k + 1, t.len(), names.join(" ")));
                terms.push(names);
            }
            let mut checks = vec![Check::new("terms are normal subloops", "dimension-subloops", d.verified(), String::new())];
            let sizes: Vec<usize> = d.terms.iter().map(|t| t.len()).collect();
            if field != Field::Rational {
                checks.push(Check::new(
                    "chain descends strictly to the trivial subloop",
                    "dimension-subloops",
                    d.strictly_descending_to_trivial(),
                    format!("orders {sizes:?}"),
                ));
            }
            let filt = comm_assoc_filtration(&l, 8);
            let last = d.terms.last().ok_or_else(|| KitError::Input("empty loop".into()))?;
            let inside = filt.terms.iter().enumerate().all(|(k, g)| g.is_subset(d.terms.get(k).unwrap_or(last)));
            checks.push(Check::new("commutator-associator filtration lies inside", "filtration-in-dimension", inside, format!("{} terms", filt.terms.len())));
            Ok(Outcome::new(text, json!({ "ring": field.to_string(), "orders": sizes, "terms": terms }), checks))
        }
        JenningsCmd::AdoLoop { radius, sample: n } => {
            if *radius < 0 {
                return Err(KitError::Usage("--radius must be nonnegative".into()));
            }
            let t = as_table(ctx.fixture_or("free-nilp-2-2")?)?;
            let dim = t.dim();
            let side = 2 * radius + 1;
            let full = (0..dim).try_fold(1i64, |acc, _| acc.checked_mul(side)).is_some_and(|c| c <= FULL_LATTICE);
            let points: Vec<Vector> = if full {
                lattice_points(field, dim, *radius)
            } else {
                let mut rng = ctx.rng();
                let mut pts = vec![vec![field.zero(); dim]];
                pts.extend((0..*n).map(|_| random_point(&mut rng, field, dim)));
                pts.sort();
                pts.dedup();
                pts
            };
            let rep = loop_ado_check(&t, &points, 6)?;
            let checks = vec![
                Check::new("distinct points have distinct images", "lattice-ado", rep.injective() && rep.distinct_images == rep.sample, format!("{} of {}", rep.distinct_images, rep.sample)),
                Check::new("identity maps to 1", "lattice-ado", rep.identity_to_one, String::new()),
                Check::new("division separates points", "lattice-ado", rep.division_failures.is_empty(), rep.division_failures.first().cloned().unwrap_or_default()),
            ];
            let text = format!(
                "{} points ({}), quotient dim {}, {} distinct images, {} pairs checked\n",
                rep.sample,
                if full { "full lattice" } else { "sample" },
                rep.quotient_dim,
                rep.distinct_images,
                rep.pairs_checked
            );
            let out = json!({
                "points": rep.sample, "full_lattice": full, "quotient_dim": rep.quotient_dim, "distinct_images": rep.distinct_images,
                "product_mismatches": rep.product_mismatches.len(), "warnings": rep.warnings,
            });
            Ok(Outcome::new(text, out, checks))
        }
    }
}
