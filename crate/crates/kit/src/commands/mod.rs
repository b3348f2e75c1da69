//! Command implementations. Each returns the text body, a JSON payload
//! and the checks it ran; the caller wraps them in a run report.

mod algebra;
mod envelope;
mod finite;
mod series;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sabinin_core::lie::{OpFamily, SplitLie};
use sabinin_core::loops::CayleyLoop;
use sabinin_core::structure::{StructureConstants, Vector};
use sabinin_core::verify::{run_topic, Check, Settings, TOPICS};
use sabinin_core::{Field, PolyLoop, SabininTable};
use serde_json::{json, Value};

use crate::cli::{Cmd, Common};
use crate::error::KitError;
use crate::fixtures::{self, Fixture};
use crate::report::InputDigest;

pub(crate) type Result<T> = std::result::Result<T, KitError>;

/// Flags shared by every command plus the running input digest.
pub struct Ctx {
    common: Common,
    digest: InputDigest,
}

impl Ctx {
    pub fn new(common: Common, digest: InputDigest) -> Self {
        Ctx { common, digest }
    }

    pub fn finish_digest(&mut self) -> String {
        std::mem::take(&mut self.digest).finish()
    }

    pub(crate) fn field(&self) -> Field {
        self.common.field
    }

    pub(crate) fn degree(&self) -> Option<u32> {
        self.common.degree
    }

    pub(crate) fn degree_or(&self, d: u32) -> u32 {
        self.common.degree.unwrap_or(d)
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.common.seed)
    }

    pub(crate) fn has_fixture(&self) -> bool {
        self.common.fixture.is_some()
    }

    /// The `--fixture` argument, or `default` when it is absent.
    pub(crate) fn fixture_or(&mut self, default: &str) -> Result<Fixture> {
        let arg = self.common.fixture.clone().unwrap_or_else(|| default.to_string());
        self.load_fixture(&arg)
    }

    pub(crate) fn load_fixture(&mut self, arg: &str) -> Result<Fixture> {
        let (f, bytes) = fixtures::resolve(arg, self.field())?;
        self.digest.add("fixture", &bytes);
        Ok(f)
    }

    /// A file's contents when `arg` names one, otherwise `arg` itself.
    pub(crate) fn input_text(&mut self, arg: &str) -> Result<String> {
        let path = Path::new(arg);
        let text = if !arg.trim_start().starts_with('{') && path.is_file() {
            std::fs::read_to_string(path).map_err(|e| KitError::Input(format!("{arg}: {e}")))?
        } else {
            arg.to_string()
        };
        self.digest.add("input", text.as_bytes());
        Ok(text)
    }

    pub(crate) fn input_json(&mut self, arg: &str) -> Result<Value> {
        let text = self.input_text(arg)?;
        serde_json::from_str(&text).map_err(|e| KitError::Input(format!("{arg}: {e}")))
    }
}

pub struct Outcome {
    pub text: String,
    pub output: Value,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub(crate) fn new(text: String, output: Value, checks: Vec<Check>) -> Self {
        Outcome { text, output, checks }
    }
}

pub fn dispatch(cmd: &Cmd, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Sabinin(c) => algebra::sabinin(c, ctx),
        Cmd::Loop(c) => algebra::polyloop(c, ctx),
        Cmd::Bch(c) => algebra::bch(c, ctx),
        Cmd::Series(c) => series::run(c, ctx),
        Cmd::Envelope(c) => envelope::envelope(c, ctx),
        Cmd::Mlt(c) => envelope::mlt(c, ctx),
        Cmd::Pbw(c) => envelope::pbw(c, ctx),
        Cmd::Jennings(c) => finite::jennings(c, ctx),
        Cmd::VerifyAll => verify_all(ctx),
    }
}

fn verify_all(ctx: &mut Ctx) -> Result<Outcome> {
    let s = Settings::new(ctx.degree_or(4), ctx.common.seed);
    let mut checks = Vec::new();
    let mut text = String::new();
    let mut topics = Vec::new();
    for (k, name) in TOPICS.iter().enumerate() {
        let cs = run_topic(k, &s);
        let passed = cs.iter().filter(|c| c.passed()).count();
        text.push_str(&format!("{name}: {passed} of {} checks pass\n", cs.len()));
        topics.push(json!({ "topic": name, "checks": cs.len(), "passed": passed }));
        checks.extend(cs);
    }
    Ok(Outcome::new(text, json!({ "degree": s.degree, "seed": s.seed, "topics": topics }), checks))
}

fn wrong_kind(f: &Fixture, want: &str) -> KitError {
    KitError::Input(format!("the fixture is a {}, this command needs a {want}", f.kind()))
}

pub(crate) fn as_table(f: Fixture) -> Result<SabininTable> {
    match f {
        Fixture::Table(t) => Ok(t),
        other => Err(wrong_kind(&other, "table")),
    }
}

pub(crate) fn as_algebra(f: Fixture) -> Result<StructureConstants> {
    match f {
        Fixture::Algebra(a) => Ok(a),
        other => Err(wrong_kind(&other, "algebra")),
    }
}

pub(crate) fn as_split(f: Fixture) -> Result<SplitLie> {
    match f {
        Fixture::Split(s) => Ok(s),
        other => Err(wrong_kind(&other, "split Lie algebra")),
    }
}

pub(crate) fn as_cayley(f: Fixture) -> Result<CayleyLoop> {
    match f {
        Fixture::Cayley(l) => Ok(l),
        other => Err(wrong_kind(&other, "Cayley table")),
    }
}

/// A loop file as is, or a table integrated to its loop.
pub(crate) fn as_loop(f: Fixture) -> Result<(PolyLoop, Option<SabininTable>)> {
    match f {
        Fixture::Loop(l) => Ok((l, None)),
        Fixture::Table(t) => Ok((sabinin_core::bch::integrate(&t)?, Some(t))),
        other => Err(wrong_kind(&other, "loop or table")),
    }
}

/// An operation family, or the one induced by a split Lie algebra up to
/// weight `w`.
pub(crate) fn as_ops(f: Fixture, w: usize) -> Result<OpFamily> {
    match f {
        Fixture::Ops(o) => Ok(o),
        Fixture::Split(s) => Ok(sabinin_core::lie::split_ops(&s, w)),
        other => Err(wrong_kind(&other, "operation family or split Lie algebra")),
    }
}

/// `x1,x3` or `1,3` as zero-based indices; `prefix` is the optional
/// letter (`x` for generators, `e` for basis vectors).
pub(crate) fn index_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits = t.trim_start_matches(['x', 'e']);
            match digits.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(KitError::Usage(format!("{what}: {t:?} is not an index like x1 or 1"))),
            }
        })
        .collect()
}

pub(crate) fn coords(field: Field, s: &str, dim: usize, what: &str) -> Result<Vector> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != dim {
        return Err(KitError::Usage(format!("{what}: expected {dim} coordinates, found {}", parts.len())));
    }
    parts.iter().map(|p| field.parse(p).map_err(|e| KitError::Usage(format!("{what}: {e}")))).collect()
}

pub(crate) fn random_point(rng: &mut ChaCha8Rng, field: Field, dim: usize) -> Vector {
    (0..dim).map(|_| field.int(rng.gen_range(-3..=3))).collect()
}

pub(crate) fn show_vec(v: &[sabinin_core::Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.literal()).collect();
    format!("[{}]", parts.join(", "))
}
