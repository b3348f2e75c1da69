//! Named fixtures and fixture files.
//!
//! A `--fixture` argument is either one of [`NAMES`] or a path. Paths
//! ending in `.csv` are Cayley tables; JSON files are told apart by their
//! keys: `ms` for a Sabinin table, `ops` for an operation family, `F` for
//! a polynomial loop, `h` and `s` for a split Lie algebra, `mul` for an
//! algebra.

use std::path::Path;

use sabinin_core::fixtures::{free_nilpotent, lie_splittings, remark_algebra, remark_structure};
use sabinin_core::lie::{OpFamily, SplitLie};
use sabinin_core::loops::{central_extension_loop, CayleyLoop};
use sabinin_core::series::b_loop;
use sabinin_core::structure::StructureConstants;
use sabinin_core::{Field, PolyLoop, SabininTable};
use serde_json::Value;

use crate::error::KitError;
use crate::formats;

#[derive(Clone, Debug)]
pub enum Fixture {
    Table(SabininTable),
    Algebra(StructureConstants),
    Loop(PolyLoop),
    Split(SplitLie),
    Ops(OpFamily),
    Cayley(CayleyLoop),
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Table(_) => "Sabinin table",
            Fixture::Algebra(_) => "algebra",
            Fixture::Loop(_) => "polynomial loop",
            Fixture::Split(_) => "split Lie algebra",
            Fixture::Ops(_) => "operation family",
            Fixture::Cayley(_) => "Cayley table",
        }
    }

    /// Canonical file contents: JSON, or CSV for Cayley tables.
    pub fn to_file_text(&self) -> String {
        let v = match self {
            Fixture::Table(t) => formats::table_json(t),
            Fixture::Algebra(a) => formats::algebra_json(a),
            Fixture::Loop(l) => formats::loop_json(l),
            Fixture::Split(s) => formats::split_json(s),
            Fixture::Ops(o) => formats::ops_json(o),
            Fixture::Cayley(c) => return formats::cayley_csv(c),
        };
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn extension(&self) -> &'static str {
        if matches!(self, Fixture::Cayley(_)) {
            "csv"
        } else {
            "json"
        }
    }
}

pub const NAMES: [&str; 13] = [
    "free-nilp-2-2",
    "free-nilp-2-3",
    "free-nilp-3-2",
    "remark",
    "remark-algebra",
    "mat2",
    "nottingham-7-6",
    "rbch-loop-2-2",
    "loop8",
    "sl2-upper",
    "sl2-torus",
    "free-lie-2-3",
    "free-lie-2-3-flat",
];

/// Builds a named fixture; `field` applies where the fixture is not tied
/// to a particular ring.
pub fn builtin(name: &str, field: Field) -> Result<Fixture, KitError> {
    let nilp = |g, c| free_nilpotent(field, g, c).map(|f| Fixture::Table(f.table)).map_err(KitError::from);
    match name {
        "free-nilp-2-2" => nilp(2, 2),
        "free-nilp-2-3" => nilp(2, 3),
        "free-nilp-3-2" => nilp(3, 2),
        "remark" => Ok(Fixture::Table(remark_algebra(field))),
        "remark-algebra" => Ok(Fixture::Algebra(remark_structure(field))),
        "mat2" => Ok(Fixture::Algebra(StructureConstants::matrices(field, 2))),
        "nottingham-7-6" => {
            let f7 = Field::prime(7)?;
            Ok(Fixture::Loop(b_loop(&StructureConstants::scalars(f7), 6)?))
        }
        "rbch-loop-2-2" => {
            let t = free_nilpotent(field, 2, 2)?.table;
            Ok(Fixture::Loop(sabinin_core::bch::integrate(&t)?))
        }
        "loop8" => Ok(Fixture::Cayley(central_extension_loop())),
        _ => lie_splittings(field)
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| Fixture::Split(s))
            .ok_or_else(|| KitError::Input(format!("unknown fixture {name:?}; known: {}", NAMES.join(", ")))),
    }
}

/// Reads a fixture file; also returns its bytes for the input digest.
pub fn from_path(path: &Path, field: Field) -> Result<(Fixture, Vec<u8>), KitError> {
    let bytes = std::fs::read(path).map_err(|e| KitError::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| KitError::Input(format!("{}: {e}", path.display())))?;
    let fixture = if path.extension().is_some_and(|e| e == "csv") {
        Fixture::Cayley(formats::cayley_from_csv(text)?)
    } else {
        let v: Value = serde_json::from_str(text).map_err(|e| KitError::Input(format!("{}: {e}", path.display())))?;
        from_json(&v, field)?
    };
    Ok((fixture, bytes))
}

pub fn from_json(v: &Value, field: Field) -> Result<Fixture, KitError> {
    if v.get("ms").is_some() || v.get("phi").is_some() {
        Ok(Fixture::Table(formats::table_from_json(v, field)?))
    } else if v.get("ops").is_some() {
        Ok(Fixture::Ops(formats::ops_from_json(v, field)?))
    } else if v.get("F").is_some() {
        Ok(Fixture::Loop(formats::loop_from_json(v, field)?))
    } else if v.get("h").is_some() && v.get("s").is_some() {
        Ok(Fixture::Split(formats::split_from_json(v, field)?))
    } else if v.get("mul").is_some() {
        Ok(Fixture::Algebra(formats::algebra_from_json(v, field)?))
    } else {
        Err(KitError::Input("unrecognized fixture JSON".to_string()))
    }
}

/// A name from [`NAMES`] or a path to a fixture file.
pub fn resolve(arg: &str, field: Field) -> Result<(Fixture, Vec<u8>), KitError> {
    if NAMES.contains(&arg) {
        let f = builtin(arg, field)?;
        return Ok((f, arg.as_bytes().to_vec()));
    }
    let path = Path::new(arg);
    if path.exists() {
        return from_path(path, field);
    }
    Err(KitError::Input(format!("no fixture named {arg:?} and no such file; known names: {}", NAMES.join(", "))))
}
