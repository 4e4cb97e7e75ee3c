use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use nodal_core::error::{Error, Result};
use nodal_core::field::FieldConfig;
use nodal_core::fixture::{self, Fixture, FixtureKind, Support};
use nodal_core::parse::parse_polynomial_list;
use nodal_core::report::RunReport;
use nodal_core::session::{self, Command, GridEntry, Options};

#[derive(Parser)]
#[command(name = "nodal", version, about = "Graded invariants of nodal projective hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// `fp:<p>,fp:<q>` (all primes must agree) or `exact`.
    #[arg(long, global = true, default_value_t = FieldConfig::default())]
    field: FieldConfig,

    /// Last degree scanned for mdr (default n·d).
    #[arg(long, global = true)]
    qmax: Option<u32>,

    /// Last degree of the Hilbert table (default (n+1)(d-2)+2).
    #[arg(long, global = true)]
    kmax: Option<u32>,

    /// Seed of generated fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Check claims on smooth input too.
    #[arg(long, global = true)]
    allow_smooth: bool,

    /// Machine-readable report.
    #[arg(long, global = true)]
    json: bool,

    /// Leave wall-clock timings out of the report.
    #[arg(long, global = true)]
    no_timings: bool,
}

#[derive(Args, Clone)]
struct Input {
    /// Polynomial file, `-` for stdin.
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,

    /// Ambient dimension of `--input`.
    #[arg(long, requires = "input")]
    n: Option<usize>,

    /// One projective point per line, e.g. `[0 : 0 : 0 : 1]`.
    #[arg(long, requires = "input")]
    points: Option<PathBuf>,

    /// `fermat:N:D`, `one-node:N:D` or `multi-node:N:D:M`, seeded by `--seed`.
    #[arg(long)]
    fixture: Option<String>,

    /// Coefficient support of generated fixtures: dense or diagonal.
    #[arg(long)]
    support: Option<Support>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert function of S/J(f) against the smooth reference.
    Hilbert(Input),
    /// Injectivity of φ: (S/J)_d → Hom((S/J)_{d-n-1}, (S/J)_{2d-n-1}).
    PhiCheck(Input),
    /// Koszul cohomology H^n(K(f))_m and the ct/mdr identity.
    Koszul {
        #[command(flatten)]
        input: Input,
        /// `LO..HI`, inclusive.
        #[arg(long)]
        m_range: Option<String>,
    },
    /// Kernels of multiplication by all variables below degree 2d-n-1.
    Lemma23(Input),
    /// Dimensions of the top two Hodge-graded pieces.
    Hodge(Input),
    /// Injectivity of the period-map differential.
    PeriodDiff {
        #[command(flatten)]
        input: Input,
        /// One degree-d polynomial per line; default the standard complement of J(f)_d.
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Nodal certification of the listed points.
    Certify(Input),
    /// Constancy of Hodge-graded dimensions across generated fixtures.
    Sweep {
        /// Entries `n:d:m` or `n:d:mxcount`, comma separated; m = 0 is Fermat.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<GridEntry>,
        #[arg(long)]
        support: Option<Support>,
    },
    /// Prints (or writes) a generated fixture.
    Fixture {
        #[command(flatten)]
        input: Input,
        /// Writes `f.txt` and `points.txt` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_fixture_spec(spec: &str, seed: u64, support: Option<Support>) -> Result<FixtureKind> {
    let bad = || Error::Invalid(format!("bad fixture `{spec}`: expected fermat:N:D, one-node:N:D or multi-node:N:D:M"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize> { parts.get(i).and_then(|s| s.parse().ok()).ok_or_else(bad) };
    let (n, d) = (num(1)?, num(2)? as u32);
    let support = support.unwrap_or(Support::default_for(n));
    match (parts[0], parts.len()) {
        ("fermat", 3) => Ok(FixtureKind::Fermat { n, d }),
        ("one-node", 3) => Ok(FixtureKind::OneNode { n, d, seed, support }),
        ("multi-node", 4) => Ok(FixtureKind::MultiNode {
            n,
            d,
            m: num(3)?,
            seed,
            support,
        }),
        _ => Err(bad()),
    }
}

fn load(input: &Input, seed: u64) -> Result<Fixture> {
    if let Some(spec) = &input.fixture {
        return fixture::generate(&parse_fixture_spec(spec, seed, input.support)?, 0);
    }
    let path = input
        .input
        .clone()
        .ok_or_else(|| Error::Invalid("give --input FILE (with --n) or --fixture SPEC".into()))?;
    let n = input.n.ok_or_else(|| Error::Invalid("--input needs --n".into()))?;
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        let points = match &input.points {
            Some(p) => Some(std::fs::read_to_string(p)?),
            None => None,
        };
        return fixture::from_text(&text, points.as_deref(), n);
    }
    fixture::from_file(path, input.points.clone(), n)
}

fn parse_range(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::Invalid(format!("bad range `{text}`: expected LO..HI"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn single(name: &str, input: &Input, cli: &Cli, opts: &Options, build: impl FnOnce(&Fixture) -> Result<Command>) -> RunReport {
    let start = Instant::now();
    let fixture = match load(input, cli.seed) {
        Ok(f) => f,
        Err(e) => return RunReport::failed(name, opts.field.descriptors(), &e),
    };
    let generated = start.elapsed().as_millis() as u64;
    let command = match build(&fixture) {
        Ok(c) => c,
        Err(e) => return RunReport::failed(name, opts.field.descriptors(), &e),
    };
    let mut report = session::run(&command, &fixture, opts);
    report.timings_ms.insert("input".into(), generated);
    report
}

fn fixture_command(input: &Input, cli: &Cli, out: Option<&PathBuf>) -> Result<()> {
    let fx = load(input, cli.seed)?;
    let poly = format!("{}\n", fx.f);
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("f.txt"), &poly)?;
            std::fs::write(dir.join("points.txt"), fx.points_text())?;
            println!("{} -> {} (n = {}, {} points)", fx.kind, dir.display(), fx.n(), fx.points.len());
        }
        None if cli.json => {
            let value = serde_json::json!({
                "kind": fx.kind,
                "n": fx.n(),
                "d": fx.d(),
                "polynomial": fx.f.to_string(),
                "points": fx.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "attempts": fx.attempts,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
        None => {
            print!("{poly}");
            for p in &fx.points {
                println!("# node {p}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        field: cli.field.clone(),
        k_max: cli.kmax,
        q_max: cli.qmax,
        allow_smooth: cli.allow_smooth,
        threads: cli.threads,
    };
    let report = match &cli.command {
        Cmd::Hilbert(input) => single("hilbert", input, &cli, &opts, |_| Ok(Command::Hilbert)),
        Cmd::PhiCheck(input) => single("phi-check", input, &cli, &opts, |_| Ok(Command::PhiCheck)),
        Cmd::Koszul { input, m_range } => single("koszul", input, &cli, &opts, |_| {
            Ok(Command::Koszul {
                m_range: m_range.as_deref().map(parse_range).transpose()?,
            })
        }),
        Cmd::Lemma23(input) => single("lemma23", input, &cli, &opts, |_| Ok(Command::Lemma23)),
        Cmd::Hodge(input) => single("hodge", input, &cli, &opts, |_| Ok(Command::Hodge)),
        Cmd::PeriodDiff { input, subspace } => single("period-diff", input, &cli, &opts, |fx| {
            let subspace = match subspace {
                Some(p) => Some(parse_polynomial_list(&std::fs::read_to_string(p)?, fx.n())?),
                None => None,
            };
            Ok(Command::PeriodDiff { subspace })
        }),
        Cmd::Certify(input) => single("certify", input, &cli, &opts, |_| Ok(Command::Certify)),
        Cmd::Sweep { grid, support } => session::sweep(grid, cli.seed, *support, &opts),
        Cmd::Fixture { input, out } => {
            return match fixture_command(input, &cli, out.as_ref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    let report = if cli.no_timings { report.without_timings() } else { report };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(e) = &report.error {
        eprintln!("error: {}", e.message);
    }
    ExitCode::from(report.exit_code() as u8)
}
