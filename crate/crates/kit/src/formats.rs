//! JSON and CSV forms of the kernel's data types.
//!
//! Scalars travel as strings (`"3"`, `"-1/2"`), coordinate vectors as
//! arrays of such strings. Every JSON object may carry a `"ring"` key
//! (`"Q"` or `"Fp:<p>"`); readers fall back to the ring given on the
//! command line when it is absent.

use sabinin_core::free::parse_element;
use sabinin_core::lie::{OpFamily, SplitLie};
use sabinin_core::loops::CayleyLoop;
use sabinin_core::poly::{Monomial, Poly};
use sabinin_core::series::{BSeries, CSeries};
use sabinin_core::structure::{StructureConstants, Vector};
use sabinin_core::{Field, FreeElement, PolyLoop, SabininTable, Scalar, Word};
use serde_json::{json, Map, Value};

use crate::error::KitError;

type Result<T> = std::result::Result<T, KitError>;

fn bad(what: &str, detail: impl std::fmt::Display) -> KitError {
    KitError::Input(format!("{what}: {detail}"))
}

pub fn field_of(v: &Value, default: Field) -> Result<Field> {
    match v.get("ring") {
        None | Some(Value::Null) => Ok(default),
        Some(Value::String(s)) => s.parse().map_err(|e| bad("ring", e)),
        Some(other) => Err(bad("ring", format!("expected a string, found {other}"))),
    }
}

pub fn scalar_json(c: &Scalar) -> Value {
    Value::String(c.literal())
}

pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s).map_err(|e| bad("scalar", e)),
        Value::Number(n) => field.parse(&n.to_string()).map_err(|e| bad("scalar", e)),
        other => Err(bad("scalar", format!("expected a string, found {other}"))),
    }
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn parse_vector(field: Field, v: &Value, dim: usize) -> Result<Vector> {
    let arr = v.as_array().ok_or_else(|| bad("coordinates", "expected an array"))?;
    if arr.len() != dim {
        return Err(bad("coordinates", format!("expected {dim} entries, found {}", arr.len())));
    }
    arr.iter().map(|c| parse_scalar(field, c)).collect()
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(what, "expected a nonnegative integer"))
}

fn indices(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array().ok_or_else(|| bad(what, "expected an array"))?.iter().map(|x| usize_of(x, what)).collect()
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad("missing key", key))
}

pub fn element_json(e: &FreeElement) -> Value {
    let terms: Vec<Value> = e.terms().iter().map(|(w, c)| json!([w.to_string(), c.literal()])).collect();
    json!({ "trunc": e.trunc(), "ring": e.field().to_string(), "terms": terms })
}

pub fn element_from_json(v: &Value, default: Field) -> Result<FreeElement> {
    let field = field_of(v, default)?;
    let trunc = usize_of(get(v, "trunc")?, "trunc")? as u32;
    let mut e = FreeElement::zero(field, trunc);
    for t in get(v, "terms")?.as_array().ok_or_else(|| bad("terms", "expected an array"))? {
        let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term", "expected [word, coefficient]"))?;
        let w = pair[0].as_str().ok_or_else(|| bad("word", "expected a string"))?;
        let w = if w == "1" { Word::Unit } else { Word::parse(w).map_err(|e| bad("word", e))? };
        if w.degree() > trunc {
            return Err(bad("word", format!("{w} exceeds truncation {trunc}")));
        }
        e.add_term(w, &parse_scalar(field, &pair[1])?);
    }
    Ok(e)
}

/// Text form `c1*w1 + c2*w2` or the JSON form.
pub fn element_from_text(s: &str, field: Field, trunc: u32) -> Result<FreeElement> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| bad("element JSON", e))?;
        return element_from_json(&v, field);
    }
    parse_element(field, trunc, t).map_err(|e| bad("element", e))
}

pub fn table_json(t: &SabininTable) -> Value {
    let ms: Vec<Value> = t.ms_entries().iter().map(|((p, y, z), v)| json!([p, y, z, vector_json(v)])).collect();
    let phi: Vec<Value> = t.phi_entries().iter().map(|((xs, ys), v)| json!([xs, ys, vector_json(v)])).collect();
    json!({
        "ring": t.field().to_string(),
        "dim": t.dim(),
        "weight_bound": t.weight_bound(),
        "class": t.claimed_class(),
        "ms": ms,
        "phi": phi,
    })
}

pub fn table_from_json(v: &Value, default: Field) -> Result<SabininTable> {
    let field = field_of(v, default)?;
    let dim = usize_of(get(v, "dim")?, "dim")?;
    let wb = usize_of(get(v, "weight_bound")?, "weight_bound")?;
    let mut t = SabininTable::new(field, dim, wb).map_err(|e| bad("table", e))?;
    let list = |key: &str| -> Result<Vec<Value>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(x) => x.as_array().cloned().ok_or_else(|| bad(key, "expected an array")),
        }
    };
    for e in list("ms")? {
        let e = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("ms entry", "expected [prefix, y, z, coords]"))?;
        let (p, y, z) = (indices(&e[0], "prefix")?, usize_of(&e[1], "y")?, usize_of(&e[2], "z")?);
        t.set_ms(&p, y, z, parse_vector(field, &e[3], dim)?).map_err(|e| bad("ms entry", e))?;
    }
    for e in list("phi")? {
        let e = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("phi entry", "expected [xs, ys, coords]"))?;
        let (xs, ys) = (indices(&e[0], "xs")?, indices(&e[1], "ys")?);
        t.set_phi(&xs, &ys, parse_vector(field, &e[2], dim)?).map_err(|e| bad("phi entry", e))?;
    }
    match v.get("class") {
        None | Some(Value::Null) => {}
        Some(c) => t.set_claimed_class(Some(usize_of(c, "class")?)),
    }
    Ok(t)
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.terms().iter().map(|(m, c)| json!([m.to_string(), c.literal()])).collect())
}

fn poly_from_json(field: Field, v: &Value) -> Result<Poly> {
    let mut p = Poly::zero(field);
    for t in v.as_array().ok_or_else(|| bad("polynomial", "expected an array of terms"))? {
        let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term", "expected [monomial, coefficient]"))?;
        let m = pair[0].as_str().ok_or_else(|| bad("monomial", "expected a string"))?;
        let m = if m == "1" { Monomial::one() } else { Monomial::parse(m).map_err(|e| bad("monomial", e))? };
        p.add_term(m, &parse_scalar(field, &pair[1])?);
    }
    Ok(p)
}

/// The product map `F`; coordinates are 1-based keys.
pub fn loop_json(l: &PolyLoop) -> Value {
    let f: Map<String, Value> = l.product_map().iter().enumerate().map(|(i, p)| ((i + 1).to_string(), poly_json(p))).collect();
    json!({ "ring": l.field().to_string(), "dim": l.dim(), "deg": l.deg(), "weights": l.weights(), "F": f })
}

pub fn loop_from_json(v: &Value, default: Field) -> Result<PolyLoop> {
    let field = field_of(v, default)?;
    let dim = usize_of(get(v, "dim")?, "dim")?;
    let deg = usize_of(get(v, "deg")?, "deg")? as u32;
    let weights: Vec<u32> = indices(get(v, "weights")?, "weights")?.into_iter().map(|w| w as u32).collect();
    let fobj = get(v, "F")?.as_object().ok_or_else(|| bad("F", "expected an object"))?;
    let mut f = Vec::with_capacity(dim);
    for c in 1..=dim {
        match fobj.get(&c.to_string()) {
            Some(p) => f.push(poly_from_json(field, p)?),
            None => return Err(bad("F", format!("coordinate {c} is missing"))),
        }
    }
    PolyLoop::from_product(field, deg, weights, f).map_err(|e| bad("loop", e))
}

/// Nonzero products `[i, j, coords]` and an optional unit.
pub fn algebra_json(a: &StructureConstants) -> Value {
    let mut mul = Vec::new();
    for (i, row) in a.table().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.iter().any(|c| !c.is_zero()) {
                mul.push(json!([i, j, vector_json(v)]));
            }
        }
    }
    json!({ "ring": a.field().to_string(), "dim": a.dim(), "unit": a.unit().map(|u| vector_json(u)), "mul": mul })
}

pub fn algebra_from_json(v: &Value, default: Field) -> Result<StructureConstants> {
    let field = field_of(v, default)?;
    let dim = usize_of(get(v, "dim")?, "dim")?;
    let mut table = vec![vec![vec![field.zero(); dim]; dim]; dim];
    for e in get(v, "mul")?.as_array().ok_or_else(|| bad("mul", "expected an array"))? {
        let e = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("mul entry", "expected [i, j, coords]"))?;
        let (i, j) = (usize_of(&e[0], "i")?, usize_of(&e[1], "j")?);
        if i >= dim || j >= dim {
            return Err(bad("mul entry", format!("index out of range for dimension {dim}")));
        }
        table[i][j] = parse_vector(field, &e[2], dim)?;
    }
    let unit = match v.get("unit") {
        None | Some(Value::Null) => None,
        Some(u) => Some(parse_vector(field, u, dim)?),
    };
    StructureConstants::new(field, table, unit).map_err(|e| bad("algebra", e))
}

/// A basis vector is written as its index, anything else as coordinates.
fn basis_entry(v: &[Scalar]) -> Value {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]].is_one() {
        json!(nz[0])
    } else {
        vector_json(v)
    }
}

fn parse_basis_entry(field: Field, v: &Value, dim: usize) -> Result<Vector> {
    if let Some(i) = v.as_u64() {
        let i = i as usize;
        if i >= dim {
            return Err(bad("basis index", format!("{i} out of range for dimension {dim}")));
        }
        let mut out = vec![field.zero(); dim];
        out[i] = field.one();
        return Ok(out);
    }
    parse_vector(field, v, dim)
}

pub fn split_json(sp: &SplitLie) -> Value {
    let mut v = algebra_json(sp.lie());
    v["h"] = Value::Array(sp.h().iter().map(|x| basis_entry(x)).collect());
    v["s"] = Value::Array(sp.s().iter().map(|x| basis_entry(x)).collect());
    v
}

pub fn split_from_json(v: &Value, default: Field) -> Result<SplitLie> {
    let lie = algebra_from_json(v, default)?;
    let (field, dim) = (lie.field(), lie.dim());
    let part = |key: &str| -> Result<Vec<Vector>> {
        get(v, key)?.as_array().ok_or_else(|| bad(key, "expected an array"))?.iter().map(|e| parse_basis_entry(field, e, dim)).collect()
    };
    let (h, s) = (part("h")?, part("s")?);
    SplitLie::new(lie, h, s).map_err(|e| bad("split Lie algebra", e))
}

pub fn ops_json(ops: &OpFamily) -> Value {
    let entries: Vec<Value> = ops.entries().iter().map(|(seq, v)| json!([seq, vector_json(v)])).collect();
    json!({
        "ring": ops.field().to_string(),
        "dim": ops.dim(),
        "weight_bound": ops.weight_bound(),
        "class": ops.class(),
        "ops": entries,
    })
}

pub fn ops_from_json(v: &Value, default: Field) -> Result<OpFamily> {
    let field = field_of(v, default)?;
    let dim = usize_of(get(v, "dim")?, "dim")?;
    let wb = usize_of(get(v, "weight_bound")?, "weight_bound")?;
    let mut ops = OpFamily::new(field, dim, wb);
    for e in get(v, "ops")?.as_array().ok_or_else(|| bad("ops", "expected an array"))? {
        let e = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("op entry", "expected [indices, coords]"))?;
        ops.set(indices(&e[0], "indices")?, parse_vector(field, &e[1], dim)?).map_err(|e| bad("op entry", e))?;
    }
    Ok(ops)
}

/// `coefficients[m]` multiplies `x^{m+2}`.
pub fn bseries_json(s: &BSeries, field: Field) -> Value {
    json!({ "ring": field.to_string(), "depth": s.depth(), "coefficients": s.coeffs.iter().map(|c| vector_json(c)).collect::<Vec<_>>() })
}

pub fn bseries_from_json(v: &Value, alg: &StructureConstants, depth: usize) -> Result<BSeries> {
    let field = alg.field();
    let cs = get(v, "coefficients")?.as_array().ok_or_else(|| bad("coefficients", "expected an array"))?;
    if cs.len() > depth {
        return Err(bad("series", format!("{} coefficients exceed depth {depth}", cs.len())));
    }
    let mut s = BSeries::identity(alg, depth);
    for (m, c) in cs.iter().enumerate() {
        s.coeffs[m] = parse_vector(field, c, alg.dim())?;
    }
    Ok(s)
}

pub fn cseries_json(s: &CSeries, field: Field) -> Value {
    let terms: Vec<Value> = s.coeffs.iter().map(|(w, c)| json!([w.to_string(), vector_json(c)])).collect();
    json!({ "ring": field.to_string(), "depth": s.depth, "terms": terms })
}

pub fn cseries_from_json(v: &Value, alg: &StructureConstants, depth: u32) -> Result<CSeries> {
    let mut s = CSeries::one(depth);
    for t in get(v, "terms")?.as_array().ok_or_else(|| bad("terms", "expected an array"))? {
        let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term", "expected [word, coords]"))?;
        let w = Word::parse(pair[0].as_str().ok_or_else(|| bad("word", "expected a string"))?).map_err(|e| bad("word", e))?;
        if w.is_unit() || w.degree() > depth || w.max_generator().unwrap_or(0) > 0 {
            return Err(bad("word", format!("{w} is not a word of degree 1..={depth} in x1")));
        }
        s = s.with_term(w, parse_vector(alg.field(), &pair[1], alg.dim())?);
    }
    Ok(s)
}

pub fn cayley_csv(l: &CayleyLoop) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(l.names()).expect("in-memory write");
    for row in l.table() {
        w.write_record(row.iter().map(|i| i.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

pub fn cayley_from_csv(text: &str) -> Result<CayleyLoop> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let names: Vec<String> = r.headers().map_err(|e| bad("Cayley header", e))?.iter().map(str::to_string).collect();
    let mut table = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad("Cayley row", e))?;
        let row: std::result::Result<Vec<usize>, _> = rec.iter().map(|x| x.parse::<usize>()).collect();
        table.push(row.map_err(|e| bad(&format!("Cayley row {}", i + 1), e))?);
    }
    CayleyLoop::new(names, table).map_err(|e| bad("Cayley table", e))
}
