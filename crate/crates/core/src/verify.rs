//! Named self-checks grouped by topic. The command line runs them through
//! `verify-all`; the acceptance suite runs them next to its own oracles.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bch::{integrate, recover_low_brackets, LowDegreeRelations, RbchSeries};
use crate::error::Result;
use crate::fixtures::{free_nilpotent, lie_splittings, remark_algebra, remark_structure};
use crate::formal_loop::PolyLoop;
use crate::free::FreeElement;
use crate::lie::{free_envelope, lie_class, right_normed_rewrite, split_ops, standard_envelope, LieTree};
use crate::loops::{central_extension_loop, comm_assoc_filtration, dimension_subloops, lattice_points, loop_ado_check};
use crate::mlt::{monomials_of_degree, pi_plus_left, primitive_elements, primitive_split, Antipode, MltElement, Sym};
use crate::pbw::{ado_certificate, PbwEnvelope};
use crate::poly::vec_is_zero;
use crate::sabinin::{ms_bracket, shu_p};
use crate::scalar::{Field, Scalar};
use crate::series::{b_graded_associator, b_graded_commutator, b_loop};
use crate::structure::{scale_vec, sub_vec, StructureConstants, Vector};
use crate::table::{lower_filtration, FiltrationOutcome};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be decided; never counts as a pass.
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub status: Status,
    pub witness: String,
}

impl Check {
    pub fn new(name: &str, anchor: &'static str, ok: bool, witness: String) -> Check {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name: name.to_string(), anchor, status, witness }
    }

    /// `Ok((ok, witness))` decides the check; an error leaves it undecided.
    pub fn from_result(name: &str, anchor: &'static str, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((ok, w)) => Check::new(name, anchor, ok, w),
            Err(e) => Check { name: name.to_string(), anchor, status: Status::Inconclusive, witness: e.to_string() },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    /// Truncation degree of the free-algebra checks.
    pub degree: u32,
    pub seed: u64,
    /// Random pairs for the sampled checks.
    pub samples: usize,
}

impl Settings {
    pub fn new(degree: u32, seed: u64) -> Settings {
        Settings { degree: degree.max(3), seed, samples: 1000 }
    }
}

/// Topic names in run order.
pub const TOPICS: [&str; 12] = [
    "defining-identity",
    "primitivity",
    "loop-certificates",
    "rbch-flatness",
    "integration",
    "pbw",
    "envelope-axioms",
    "right-normed",
    "mlt",
    "non-nilpotent",
    "loop-algebra",
    "composition-loops",
];

/// Runs topic `k` (0-based index into [`TOPICS`]).
pub fn run_topic(k: usize, s: &Settings) -> Vec<Check> {
    match k {
        0 => defining_identity(s),
        1 => primitivity(s),
        2 => loop_certificates(s),
        3 => rbch_flatness(s),
        4 => integration(),
        5 => pbw(s),
        6 => envelope_axioms(s),
        7 => right_normed(s),
        8 => mlt(s),
        9 => non_nilpotent(s),
        10 => loop_algebra(),
        11 => composition_loops(s),
        _ => Vec::new(),
    }
}

pub fn run_all(s: &Settings) -> Vec<Check> {
    (0..TOPICS.len()).flat_map(|k| run_topic(k, s)).collect()
}

const Q: Field = Field::Rational;

fn left_normed(seq: &[FreeElement], d: u32) -> FreeElement {
    seq.iter().fold(FreeElement::one(Q, d), |acc, e| &acc * e)
}

fn pick(seq: &[FreeElement], mask: u64, keep: bool) -> Vec<FreeElement> {
    seq.iter().enumerate().filter(|(i, _)| (mask >> i & 1 == 1) == keep).map(|(_, e)| e.clone()).collect()
}

/// `(uv)z − u(vz)` minus `Σ u₍₁₎v₍₁₎·p(u₍₂₎; v₍₂₎; z)` over all splits of
/// the sequences of primitives.
pub fn associator_expansion_residual(u: &[FreeElement], v: &[FreeElement], z: &FreeElement) -> Result<FreeElement> {
    let d = z.trunc();
    let (lu, lv) = (left_normed(u, d), left_normed(v, d));
    let mut out = &(&(&lu * &lv) * z) - &(&lu * &(&lv * z));
    for s in 0..1u64 << u.len() {
        for t in 0..1u64 << v.len() {
            let coef = &left_normed(&pick(u, s, true), d) * &left_normed(&pick(v, t, true), d);
            let p = shu_p(&pick(u, s, false), &pick(v, t, false), z)?;
            out = &out - &(&coef * &p);
        }
    }
    Ok(out)
}

/// Sequences of generators `x1, x2` with `|u| + |v| + 1 ≤ d`.
fn generator_shapes(d: u32) -> Vec<(Vec<u32>, Vec<u32>, u32)> {
    let mut out = Vec::new();
    for total in 2..d as usize {
        for a in 1..total {
            for code in 0..1usize << (total + 1) {
                let bit = |i: usize| ((code >> i) & 1) as u32;
                out.push(((0..a).map(bit).collect(), (a..total).map(bit).collect(), bit(total)));
            }
        }
    }
    out
}

fn defining_identity(s: &Settings) -> Vec<Check> {
    let d = s.degree;
    let g: Vec<FreeElement> = (0..2).map(|i| FreeElement::gen(Q, d, i)).collect();
    let r = (|| {
        let shapes = generator_shapes(d);
        let mut bad = Vec::new();
        for (u, v, z) in &shapes {
            let us: Vec<_> = u.iter().map(|&i| g[i as usize].clone()).collect();
            let vs: Vec<_> = v.iter().map(|&i| g[i as usize].clone()).collect();
            if !associator_expansion_residual(&us, &vs, &g[*z as usize])?.is_zero() {
                bad.push(format!("{u:?} {v:?} {z}"));
            }
        }
        Ok(match bad.first() {
            None => (true, format!("{} sequence pairs up to total degree {d}", shapes.len())),
            Some(b) => (false, format!("{} failures, first {b}", bad.len())),
        })
    })();
    alloc::vec![Check::from_result("associator expansion round trip", "associator-expansion", r)]
}

fn primitivity(s: &Settings) -> Vec<Check> {
    let d = s.degree;
    let g: Vec<FreeElement> = (0..3).map(|i| FreeElement::gen(Q, d, i)).collect();
    let mut out = Vec::new();
    let r = (|| {
        let mut n = 0;
        for (u, v, z) in generator_shapes(d) {
            let us: Vec<_> = u.iter().map(|&i| g[i as usize].clone()).collect();
            let vs: Vec<_> = v.iter().map(|&i| g[i as usize].clone()).collect();
            let p = shu_p(&us, &vs, &g[z as usize])?;
            if !p.is_primitive() {
                return Ok((false, format!("p({u:?}; {v:?}; {z}) = {p}")));
            }
            n += 1;
        }
        Ok((true, format!("{n} values")))
    })();
    out.push(Check::from_result("associator components are primitive", "primitive-components", r));
    let r = (|| {
        let mut n = 0;
        for k in 0..=d as usize - 2 {
            for code in 0..3usize.pow(k as u32 + 2) {
                let digit = |i: usize| (code / 3usize.pow(i as u32)) % 3;
                let prefix: Vec<_> = (0..k).map(|i| g[digit(i)].clone()).collect();
                let b = ms_bracket(&prefix, &g[digit(k)], &g[digit(k + 1)])?;
                if !b.is_primitive() {
                    return Ok((false, format!("bracket code {code} of length {k}")));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} brackets")))
    })();
    out.push(Check::from_result("brackets are primitive", "primitive-brackets", r));
    let r = RbchSeries::new(Q, d).map(|series| match (1..=d).find(|&w| !series.component(w).is_primitive()) {
        None => (true, format!("weights 1..={d}")),
        Some(w) => (false, format!("weight {w}")),
    });
    out.push(Check::from_result("rbch components are primitive", "primitive-rbch", r));
    out
}

fn seeded_points(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Vec<Vector> {
    (0..n).map(|_| (0..dim).map(|_| Q.int(rng.gen_range(-3..=3))).collect()).collect()
}

fn certify_loop(name: &str, l: &PolyLoop, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let cert = l.verify_n_sequence(2);
    let failing: Vec<String> = cert.entries.iter().filter(|e| !e.passed()).map(|e| e.name.clone()).collect();
    let witness = if failing.is_empty() { format!("{} identities", cert.entries.len()) } else { failing.join(", ") };
    let mut out = alloc::vec![Check::new(&format!("{name}: certificate"), "n-sequence", failing.is_empty(), witness)];
    let pts = seeded_points(rng, l.dim(), 12);
    let mut bad = 0;
    for pair in pts.chunks(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let dv = l.eval(l.left_division_map(), &[x, y]);
        let rv = l.eval(l.right_division_map(), &[x, y]);
        if l.mul_points(x, &dv) != *y || l.mul_points(&rv, y) != *x {
            bad += 1;
        }
    }
    out.push(Check::new(&format!("{name}: divisions round trip"), "divisions", bad == 0, format!("{bad} of 6 point pairs fail")));
    out
}

fn loop_certificates(s: &Settings) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::new();
    for class in [2, 3] {
        let name = format!("class-{class} rbch loop");
        match free_nilpotent(Q, 2, class).and_then(|f| integrate(&f.table)) {
            Ok(l) => out.extend(certify_loop(&name, &l, &mut rng)),
            Err(e) => out.push(Check::from_result(&name, "n-sequence", Err(e))),
        }
    }
    let depth = (s.degree as usize).min(5);
    let name = format!("2x2 matrix composition loop, depth {depth}");
    match b_loop(&StructureConstants::matrices(Q, 2), depth) {
        Ok(l) => out.extend(certify_loop(&name, &l, &mut rng)),
        Err(e) => out.push(Check::from_result(&name, "n-sequence", Err(e))),
    }
    out
}

fn rbch_flatness(s: &Settings) -> Vec<Check> {
    let d = s.degree;
    let mut out = Vec::new();
    let series = match RbchSeries::new(Q, d) {
        Ok(x) => x,
        Err(e) => return alloc::vec![Check::from_result("rbch series", "rbch-brackets", Err(e))],
    };
    let r = (|| {
        for w in 2..=d {
            let args = [FreeElement::gen(Q, w, 0), FreeElement::gen(Q, w, 1)];
            let mut back = FreeElement::zero(Q, w);
            for (e, k) in &series.brackets(w).0 {
                back.axpy(k, &e.to_free(&args)?);
            }
            let residual = &back - &series.component(w).with_trunc(w);
            if !residual.is_zero() {
                return Ok((false, format!("weight {w} residual {residual}")));
            }
        }
        Ok((true, format!("weights 2..={d} have zero residual")))
    })();
    out.push(Check::from_result("rbch components are bracket combinations", "rbch-brackets", r));
    let (x, y) = (FreeElement::gen(Q, 2, 0), FreeElement::gen(Q, 2, 1));
    let half = Q.ratio(1, 2).expect("rational field");
    let want = (&(&x * &y) - &(&y * &x)).scale(&half);
    let got = series.component(2).with_trunc(2);
    out.push(Check::new("rbch weight 2 is half the commutator", "rbch-weight-two", got == want, got.to_string()));
    out
}

fn integration() -> Vec<Check> {
    let rel = match LowDegreeRelations::compute(Q) {
        Ok(r) => r,
        Err(e) => return alloc::vec![Check::from_result("low degree relations", "integration", Err(e))],
    };
    let mut out = Vec::new();
    for (gens, class) in [(2u32, 2u32), (3, 2), (2, 3)] {
        let name = format!("free nilpotent {gens} generators class {class}");
        let r = (|| {
            let t = free_nilpotent(Q, gens, class)?.table;
            let l = integrate(&t)?;
            let found = l.nilpotency_class(class as usize + 1);
            let back = recover_low_brackets(&l, &rel)?;
            let low = t.restricted(3);
            let nonzero = |t: &crate::table::SabininTable| -> Vec<_> {
                t.phi_entries().iter().filter(|(_, v)| v.iter().any(|c| !c.is_zero())).map(|(k, v)| (k.clone(), v.clone())).collect()
            };
            let same = back.ms_entries() == low.ms_entries() && nonzero(&back) == nonzero(&low);
            Ok((same && found == class as usize, format!("round trip {same}, loop class {found}")))
        })();
        out.push(Check::from_result(&format!("{name}: integrate then recover"), "integration", r));
    }
    out
}

/// Free magma words of degree `0..=n` in two letters.
fn free_word_count(n: u32) -> usize {
    (0..=n).map(|d| if d == 0 { 1 } else { Word::all_of_degree(2, d).len() }).sum()
}

fn pbw(s: &Settings) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::new();
    for class in [2u32, 3] {
        let r = (|| {
            let f = free_nilpotent(Q, 2, class)?;
            let mut env = PbwEnvelope::new(f.table.clone(), class + 2)?;
            let basis = env.basis();
            for _ in 0..s.samples {
                let a = &basis[rng.gen_range(0..basis.len())];
                let b = &basis[rng.gen_range(0..basis.len())];
                let p = env.mul(a, b)?;
                if let Some(n) = env.n_weight(&p) {
                    if n < env.monomial_weight(a) + env.monomial_weight(b) {
                        return Ok((false, format!("{a:?}·{b:?} has weight {n}")));
                    }
                }
            }
            Ok((true, format!("{} pairs", s.samples)))
        })();
        out.push(Check::from_result(&format!("class {class}: weight is superadditive"), "pbw-weight", r));
        let r = (|| {
            let cert = ado_certificate(&free_nilpotent(Q, 2, class)?.table)?;
            let oracle = free_word_count(class);
            let ok = cert.passed() && cert.quotient_dim == oracle;
            let verdict = if cert.injective() { "injective" } else { "not injective" };
            Ok((ok, format!("{verdict}, quotient dim {} (word count {oracle})", cert.quotient_dim)))
        })();
        out.push(Check::from_result(&format!("class {class}: ado certificate"), "ado", r));
    }
    out
}

fn envelope_axioms(s: &Settings) -> Vec<Check> {
    let w = s.degree as usize;
    let mut out = Vec::new();
    for (name, sp) in lie_splittings(Q) {
        let ops = split_ops(&sp, w);
        let r = (|| {
            let mut checked = 0;
            for n in 1..w {
                for m in 1..=w - n {
                    let bad = ops.check_eq_three(n, m)?;
                    if let Some(b) = bad.first() {
                        return Ok((false, format!("n={n} m={m}: {b:?}")));
                    }
                    checked += 1;
                }
            }
            Ok((true, format!("{checked} (n, m) pairs")))
        })();
        out.push(Check::from_result(&format!("{name}: envelope axioms"), "envelope-axioms", r));
        if let Some(class) = ops.class() {
            let r = (|| {
                let env = free_envelope(&ops, class)?;
                let std = standard_envelope(&env)?;
                let ok = split_ops(&env, w) == ops
                    && split_ops(&std, w) == ops
                    && lie_class(env.lie()) == Some(class)
                    && lie_class(std.lie()) == Some(class);
                Ok((ok, format!("class {class}, envelope dims {} and {}", env.lie().dim(), std.lie().dim())))
            })();
            out.push(Check::from_result(&format!("{name}: free envelope round trip"), "free-envelope", r));
        }
    }
    out
}

/// Every bracketing of `degree` distinct letters.
pub fn bracket_shapes(degree: usize) -> Vec<LieTree> {
    fn build(lo: u32, n: usize) -> Vec<LieTree> {
        if n == 1 {
            return alloc::vec![LieTree::Gen(lo)];
        }
        let mut out = Vec::new();
        for k in 1..n {
            for a in build(lo, k) {
                for b in build(lo + k as u32, n - k) {
                    out.push(LieTree::br(a.clone(), b));
                }
            }
        }
        out
    }
    build(0, degree)
}

fn right_normed(s: &Settings) -> Vec<Check> {
    let top = (s.degree as usize + 3).min(7);
    let mut n = 0;
    let mut bad = None;
    for degree in 1..=top {
        for t in bracket_shapes(degree) {
            n += 1;
            if bad.is_none() && right_normed_rewrite(Q, &t).eval(Q) != t.eval(Q) {
                bad = Some(t.to_string());
            }
        }
    }
    let witness = bad.clone().unwrap_or_else(|| format!("{n} shapes up to degree {top}"));
    let mut out = alloc::vec![Check::new("rewriting matches tensor evaluation", "rewrite", bad.is_none(), witness)];
    let tree = |s: &str| LieTree::parse(s).expect("literal tree");
    let jacobi = right_normed_rewrite(Q, &tree("[[x1,x2],x3]"))
        .sub(&right_normed_rewrite(Q, &tree("[x1,[x2,x3]]")))
        .add(&right_normed_rewrite(Q, &tree("[x2,[x1,x3]]")));
    out.push(Check::new("jacobi rewrites to zero", "rewrite-jacobi", jacobi.is_zero(), jacobi.to_string()));
    out
}

fn random_operator(rng: &mut ChaCha8Rng, trunc: u32, max_degree: u32) -> MltElement {
    let mut f = MltElement::zero(Q, trunc);
    for _ in 0..3 {
        let monos = monomials_of_degree(2, rng.gen_range(1..=max_degree));
        let m = monos[rng.gen_range(0..monos.len())].clone();
        f.add_term(m, &Q.int(rng.gen_range(-3..=3)));
    }
    f
}

fn mlt(s: &Settings) -> Vec<Check> {
    let d = s.degree.min(4);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut anti = Antipode::new(Q, d);
    let mut out = Vec::new();
    let r = (|| {
        for _ in 0..20 {
            let f = random_operator(&mut rng, d, d);
            let p = pi_plus_left(&f, &mut anti)?;
            if !pi_plus_left(&p, &mut anti)?.agrees_with(&p, 2)? {
                return Ok((false, f.to_string()));
            }
        }
        Ok((true, format!("20 operators at truncation {d}")))
    })();
    out.push(Check::from_result("projection is idempotent", "mlt-projection", r));
    let r = (|| {
        for n in 1..=3.min(d) {
            let c = primitive_split(Q, 2, n, &mut anti)?;
            if !c.holds() {
                return Ok((false, format!("{c:?}")));
            }
        }
        Ok((true, "degrees 1..=3".to_string()))
    })();
    out.push(Check::from_result("primitive operators split", "mlt-split", r));
    let r = (|| {
        let l = MltElement::sym(Q, d, Sym::left(Word::gen(0)));
        let rx = MltElement::sym(Q, d, Sym::right(Word::gen(0)));
        let p = pi_plus_left(&rx, &mut anti)?;
        Ok((p == rx.sub(&l), p.to_string()))
    })();
    out.push(Check::from_result("projection of a right multiplication", "mlt-right", r));
    let r = (|| {
        let prims: Vec<Vec<FreeElement>> = (1..=2).map(|n| primitive_elements(Q, 2, n, d)).collect();
        let n = s.samples / 5;
        for _ in 0..n {
            let f = pi_plus_left(&random_operator(&mut rng, d, 3.min(d)), &mut anti)?;
            let mut z = FreeElement::one(Q, d);
            for _ in 0..rng.gen_range(1..=2) {
                let row = &prims[rng.gen_range(0..2)];
                z = z.checked_mul(&row[rng.gen_range(0..row.len())])?;
            }
            if f.act(&z)?.coradical_degree()? > z.coradical_degree()? {
                return Ok((false, format!("{f} on {z}")));
            }
        }
        Ok((true, format!("{n} actions")))
    })();
    out.push(Check::from_result("projected operators keep coradical degree", "mlt-coradical", r));
    out
}

fn non_nilpotent(s: &Settings) -> Vec<Check> {
    let r = remark_structure(Q);
    let (a, b) = (r.basis(0), r.basis(1));
    let assoc = sub_vec(&r.mul(&r.mul(&b, &a), &b), &r.mul(&b, &r.mul(&a, &b)));
    let neg_b = scale_vec(&Q.int(-1), &b);
    let mut out = alloc::vec![Check::new("associator (b, a, b) is -b", "remark-associator", assoc == neg_b, format!("{assoc:?}"))];
    let f = lower_filtration(&remark_algebra(Q));
    let stuck = matches!(f.outcome, FiltrationOutcome::NotNilpotent { dim: 1, .. })
        && f.levels.last() == Some(&alloc::vec![b.clone()]);
    out.push(Check::new("filtration stabilizes at span(b)", "remark-filtration", stuck, format!("dims {:?}", f.dims())));
    let mut power = b.clone();
    let mut ok = true;
    for _ in 2..=s.degree.max(6) {
        power = r.mul(&power, &b);
        ok &= power == b;
    }
    out.push(Check::new("powers of b stay b", "remark-powers", ok, format!("checked up to b^{}", s.degree.max(6))));
    out
}

fn loop_algebra() -> Vec<Check> {
    let f2 = Field::prime(2).expect("2 is prime");
    let l = central_extension_loop();
    let d = dimension_subloops(&l, f2);
    let sizes: Vec<usize> = d.terms.iter().map(|t| t.len()).collect();
    let mut out = alloc::vec![Check::new(
        "dimension subloops over F2 descend strictly",
        "dimension-subloops",
        d.verified() && d.strictly_descending_to_trivial(),
        format!("orders {sizes:?}"),
    )];
    let filt = comm_assoc_filtration(&l, 8);
    let inside = filt.terms.iter().enumerate().all(|(k, g)| g.is_subset(d.terms.get(k).or(d.terms.last()).expect("nonempty")));
    out.push(Check::new("filtration inside dimension subloops", "filtration-in-dimension", inside, format!("{} terms", filt.terms.len())));
    let r = (|| {
        let t = free_nilpotent(Q, 2, 2)?.table;
        let rep = loop_ado_check(&t, &lattice_points(Q, 3, 2), 6)?;
        let ok = rep.injective() && rep.distinct_images == rep.sample;
        Ok((ok, format!("{} of {} images distinct", rep.distinct_images, rep.sample)))
    })();
    out.push(Check::from_result("lattice embedding separates points", "lattice-ado", r));
    out
}

/// `(i+1)·ab − (j+1)·ba`, the leading commutator term for coefficients
/// that need not commute.
pub fn shifted_commutator_prediction(alg: &StructureConstants, i: usize, j: usize, a: &[Scalar], b: &[Scalar]) -> Vector {
    let f = alg.field();
    sub_vec(&scale_vec(&f.int(i as i64 + 1), &alg.mul(a, b)), &scale_vec(&f.int(j as i64 + 1), &alg.mul(b, a)))
}

fn composition_loops(s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();
    let f7 = Field::prime(7).expect("7 is prime");
    let r = b_loop(&StructureConstants::scalars(f7), 6).map(|l| (vec_is_zero(&l.associator()), "depth 6".to_string()));
    out.push(Check::from_result("F7 composition loop is associative", "nottingham", r));
    let scalars = StructureConstants::scalars(Q);
    let one = alloc::vec![Q.one()];
    let top = s.degree as usize;
    let r = (|| {
        for i in 1..top {
            for j in 1..=top - i {
                let c = b_graded_commutator(&scalars, i, j, &one, &one)?;
                if !c.holds() {
                    return Ok((false, format!("i={i} j={j}: {:?}", c.difference())));
                }
            }
        }
        Ok((true, format!("i + j ≤ {top}")))
    })();
    out.push(Check::from_result("graded commutator, commuting coefficients", "graded-commutator", r));
    let m2 = StructureConstants::matrices(Q, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let r = (|| {
        for (i, j) in [(1, 1), (1, 2), (2, 1)] {
            let (a, b) = (seeded_points(&mut rng, 4, 1).remove(0), seeded_points(&mut rng, 4, 1).remove(0));
            let c = b_graded_commutator(&m2, i, j, &a, &b)?;
            if !c.lower_vanish || c.leading != shifted_commutator_prediction(&m2, i, j, &a, &b) {
                return Ok((false, format!("i={i} j={j}")));
            }
        }
        Ok((true, "leading term (i+1)ab - (j+1)ba".to_string()))
    })();
    out.push(Check::from_result("graded commutator, matrix coefficients", "graded-commutator", r));
    let r = (|| {
        for (i, j, k) in [(1, 1, 1), (2, 1, 1), (1, 2, 1)] {
            let v = seeded_points(&mut rng, 4, 3);
            let c = b_graded_associator(&m2, (i, j, k), &v[0], &v[1], &v[2])?;
            if !c.holds() {
                return Ok((false, format!("({i},{j},{k}): {:?}", c.difference())));
            }
        }
        Ok((true, "three index triples".to_string()))
    })();
    out.push(Check::from_result("graded associator, matrix coefficients", "graded-associator", r));
    out
}
