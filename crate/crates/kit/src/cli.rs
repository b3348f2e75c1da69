//! Argument parsing and dispatch for the `sabinin` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sabinin_core::Field;

use crate::commands::{self, Ctx};
use crate::report::{InputDigest, RunReport};

#[derive(Parser, Debug)]
#[command(name = "sabinin", version, about = "Exact computations with Sabinin algebras, nilpotent loops and their envelopes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Truncation degree, depth or weight bound, depending on the command.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Coefficient ring: `Q` or `Fp:<p>`.
    #[arg(long, global = true, default_value = "Q", value_parser = parse_field)]
    pub field: Field,
    /// Fixture name or path to a fixture file.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Emit the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Operations in the free non-associative algebra and Sabinin tables.
    #[command(subcommand)]
    Sabinin(SabininCmd),
    /// Polynomial loops: construction, divisions, derived operations.
    #[command(subcommand)]
    Loop(LoopCmd),
    /// Exponentials, the right alternative series, integration.
    #[command(subcommand)]
    Bch(BchCmd),
    /// Loops of power series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Lie envelopes and right-normed rewriting.
    #[command(subcommand)]
    Envelope(EnvelopeCmd),
    /// Operators on the free algebra.
    #[command(subcommand)]
    Mlt(MltCmd),
    /// Ordered-monomial envelopes and the embedding certificate.
    #[command(subcommand)]
    Pbw(PbwCmd),
    /// Finite loops: dimension subloops and lattice embeddings.
    #[command(subcommand)]
    Jennings(JenningsCmd),
    /// Runs every self-check.
    VerifyAll,
}

#[derive(Subcommand, Debug)]
pub enum SabininCmd {
    /// The primitive associator components `p(u; v; z)`.
    ShuP {
        /// First sequence of generators, e.g. `x1,x2`.
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        z: String,
    },
    /// The bracket `<x1..xn; y, z>`; reads a table entry with `--fixture`.
    Ms {
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// The multioperator; reads a table entry with `--fixture`.
    Phi {
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
    /// Table of an algebra's induced operations.
    Ux,
    /// The lower filtration of a table.
    Filtration,
}

#[derive(Subcommand, Debug)]
pub enum LoopCmd {
    /// A loop from a table (by integration) or from a loop file.
    Build,
    /// Division maps, optionally at a pair of points.
    Divide {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Commutator, associator and their deviations.
    Deviations {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// The filtration certificate.
    Certify {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum BchCmd {
    /// `exp` of a primitive element.
    Exp {
        #[arg(long)]
        element: String,
    },
    /// `log` of a group-like element.
    Log {
        #[arg(long)]
        element: String,
    },
    /// Components of `log(exp x × exp y)` by weight.
    Rbch,
    /// The loop of a nilpotent table.
    Integrate,
    /// Integration followed by recovery of the low brackets.
    Roundtrip,
}

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Composition `a(b(x))` of two series files.
    BCompose {
        #[arg(long)]
        algebra: String,
        a: String,
        b: String,
    },
    /// The composition loop over a prime field.
    Nottingham,
    /// Product of two non-associative series files.
    CMul {
        #[arg(long)]
        algebra: String,
        a: String,
        b: String,
    },
    /// Leading terms of graded commutators (or associators with `--k`).
    Brackets {
        #[arg(long, default_value = "mat2")]
        algebra: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Coordinates in the algebra, e.g. `0,1,0,0`.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum EnvelopeCmd {
    /// Right-normed form of a bracket expression such as `[[x1,x2],x3]`.
    Rewrite {
        #[arg(long)]
        tree: String,
    },
    /// Operations induced on the complement of a split Lie algebra.
    Split,
    /// The defining identities of the operations.
    Axioms,
    /// The free envelope of a nilpotent family.
    Free,
    /// The standard envelope.
    Standard,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum MltCmd {
    /// Projection onto the operators fixing 1, e.g. `--op 'R[x1]'`.
    Piplus {
        #[arg(long)]
        op: String,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Dimensions of the primitive operator split in one degree.
    Split {
        #[arg(long, default_value_t = 2)]
        gens: u32,
    },
    /// Whether projected operators generate a filtration level.
    Generation {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        gens: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum PbwCmd {
    /// Weight of an ordered monomial such as `1,3`.
    Weight {
        #[arg(long)]
        monomial: String,
    },
    /// Rewrites a product of basis elements in ordered monomials.
    Straighten {
        #[arg(long)]
        seq: String,
    },
    /// Embeds a nilpotent table in its truncated envelope.
    Ado,
}

#[derive(Subcommand, Debug)]
pub enum JenningsCmd {
    /// Dimension subloops of a finite loop.
    DimensionSubloops,
    /// Distinguishes lattice points of an integrated loop in the envelope.
    AdoLoop {
        #[arg(long, default_value_t = 2)]
        radius: i64,
        /// Sample size when the full lattice is too large.
        #[arg(long, default_value_t = 60)]
        sample: usize,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn command_path(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Sabinin(c) => match c {
            SabininCmd::ShuP { .. } => "sabinin shu-p",
            SabininCmd::Ms { .. } => "sabinin ms",
            SabininCmd::Phi { .. } => "sabinin phi",
            SabininCmd::Ux => "sabinin ux",
            SabininCmd::Filtration => "sabinin filtration",
        },
        Cmd::Loop(c) => match c {
            LoopCmd::Build => "loop build",
            LoopCmd::Divide { .. } => "loop divide",
            LoopCmd::Deviations { .. } => "loop deviations",
            LoopCmd::Certify { .. } => "loop certify",
        },
        Cmd::Bch(c) => match c {
            BchCmd::Exp { .. } => "bch exp",
            BchCmd::Log { .. } => "bch log",
            BchCmd::Rbch => "bch rbch",
            BchCmd::Integrate => "bch integrate",
            BchCmd::Roundtrip => "bch roundtrip",
        },
        Cmd::Series(c) => match c {
            SeriesCmd::BCompose { .. } => "series b-compose",
            SeriesCmd::Nottingham => "series nottingham",
            SeriesCmd::CMul { .. } => "series c-mul",
            SeriesCmd::Brackets { .. } => "series brackets",
        },
        Cmd::Envelope(c) => match c {
            EnvelopeCmd::Rewrite { .. } => "envelope rewrite",
            EnvelopeCmd::Split => "envelope split",
            EnvelopeCmd::Axioms => "envelope axioms",
            EnvelopeCmd::Free => "envelope free",
            EnvelopeCmd::Standard => "envelope standard",
        },
        Cmd::Mlt(c) => match c {
            MltCmd::Piplus { .. } => "mlt piplus",
            MltCmd::Split { .. } => "mlt split",
            MltCmd::Generation { .. } => "mlt generation",
        },
        Cmd::Pbw(c) => match c {
            PbwCmd::Weight { .. } => "pbw weight",
            PbwCmd::Straighten { .. } => "pbw straighten",
            PbwCmd::Ado => "pbw ado",
        },
        Cmd::Jennings(c) => match c {
            JenningsCmd::DimensionSubloops => "jennings dimension-subloops",
            JenningsCmd::AdoLoop { .. } => "jennings ado-loop",
        },
        Cmd::VerifyAll => "verify-all",
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Execution { stdout: text, stderr: String::new(), code: 0 },
                _ => Execution { stdout: String::new(), stderr: text, code: 2 },
            };
        }
    };
    let command = command_path(&cli.cmd).to_string();
    let mut digest = InputDigest::default();
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).filter(|a| a != "--json").collect();
    digest.add("argv", argv.join("\0").as_bytes());
    let mut ctx = Ctx::new(cli.common.clone(), digest);
    match commands::dispatch(&cli.cmd, &mut ctx) {
        Ok(outcome) => {
            let report = RunReport::new(command, ctx.finish_digest(), &outcome.checks, outcome.output);
            let stdout = if cli.common.json { report.to_json() } else { report.to_text(&outcome.text) };
            Execution { stdout, stderr: String::new(), code: report.exit_code() }
        }
        Err(e) => Execution { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}
