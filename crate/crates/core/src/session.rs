//! Commands over a session field configuration. Every command runs once per
//! configured field and the outcomes must agree up to the field; the agreed
//! outcome becomes a [`RunReport`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig, PrimeField, Rationals};
use crate::fixture::{fermat_fixture, multi_node, Fixture, FixtureKind, Support};
use crate::hodge::{corollary_constancy_check, hodge_graded_dims, ideal_of_points_dim, GradedDim};
use crate::koszul::{KoszulContext, TrivialRoute};
use crate::milnor::{smooth_reference_dim, JacobianContext, Threshold};
use crate::nodal::{certify_nodal, Verdict};
use crate::poly::HomogeneousPolynomial;
use crate::report::{sha256_hex, InputRecord, RunReport, Status, Table};
use crate::torelli::{effective_deformation_check, period_differential, phi_injective, phi_matrix, DeformationSubspace};

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub field: FieldConfig,
    /// Last degree of the Hilbert table; default `(n+1)(d-2) + 2`.
    pub k_max: Option<u32>,
    /// Last degree scanned for `mdr`; default `n·d`.
    pub q_max: Option<u32>,
    /// Accept smooth input where a nodal hypersurface is required.
    pub allow_smooth: bool,
    /// Worker threads for sweeps, one fixture per worker.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Command {
    Hilbert,
    PhiCheck,
    /// `m_range` defaults to `0 ..= (nd-1)/2`.
    Koszul { m_range: Option<(u32, u32)> },
    Lemma23,
    Hodge,
    /// Deformation directions of degree `d`; default the standard-monomial
    /// complement of `J(f)_d`.
    PeriodDiff { subspace: Option<Vec<HomogeneousPolynomial<Rationals>>> },
    Certify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hilbert => "hilbert",
            Command::PhiCheck => "phi-check",
            Command::Koszul { .. } => "koszul",
            Command::Lemma23 => "lemma23",
            Command::Hodge => "hodge",
            Command::PeriodDiff { .. } => "period-diff",
            Command::Certify => "certify",
        }
    }
}

/// Fixtures `n:d:m`, optionally repeated with consecutive seeds as `n:d:mxcount`.
/// `m = 0` is the Fermat polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridEntry {
    pub n: usize,
    pub d: u32,
    pub m: usize,
    pub count: usize,
}

impl FromStr for GridEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("bad grid entry `{s}`: expected n:d:m or n:d:mxcount"));
        let (body, count) = match s.trim().split_once('x') {
            Some((b, c)) => (b, c.parse().map_err(|_| bad())?),
            None => (s.trim(), 1),
        };
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 || count == 0 {
            return Err(bad());
        }
        Ok(GridEntry {
            n: parts[0].parse().map_err(|_| bad())?,
            d: parts[1].parse().map_err(|_| bad())?,
            m: parts[2].parse().map_err(|_| bad())?,
            count,
        })
    }
}

impl fmt::Display for GridEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.n, self.d, self.m)?;
        if self.count != 1 {
            write!(f, "x{}", self.count)?;
        }
        Ok(())
    }
}

/// Result of a command over one field.
#[derive(Clone, Debug, Default)]
struct Outcome {
    /// Nodal verdict per input, when certified.
    hypotheses: Vec<Option<String>>,
    tables: Vec<Table>,
    certificates: Vec<Certificate>,
    notes: Vec<String>,
    status: Option<Status>,
}

impl Outcome {
    fn agrees_with(&self, other: &Outcome) -> bool {
        self.hypotheses == other.hypotheses
            && self.tables == other.tables
            && self.notes == other.notes
            && self.status == other.status
            && self.certificates.len() == other.certificates.len()
            && self.certificates.iter().zip(&other.certificates).all(|(a, b)| a.agrees_with(b))
    }

    fn summary(&self) -> String {
        let certs: Vec<String> = self
            .certificates
            .iter()
            .map(|c| {
                let q: Vec<String> = c.quantities.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", c.claim, q.join(","))
            })
            .collect();
        format!("[{}]", certs.join(" "))
    }

    fn stop(&mut self, status: Status, note: impl Into<String>) {
        self.status = Some(status);
        self.notes.push(note.into());
    }
}

/// Work repeated over every configured field.
trait FieldTask: Sync {
    fn run<K: Field>(&self, field: K) -> Result<Outcome>;
}

fn across_fields<T: FieldTask>(
    what: &str,
    config: &FieldConfig,
    task: &T,
    timings: &mut BTreeMap<String, u64>,
) -> Result<Outcome> {
    let mut outcomes: Vec<(String, Outcome)> = Vec::new();
    let mut timed = |label: String, f: &dyn Fn() -> Result<Outcome>| -> Result<()> {
        let start = Instant::now();
        let out = f()?;
        timings.insert(format!("field.{label}"), start.elapsed().as_millis() as u64);
        outcomes.push((label, out));
        Ok(())
    };
    match config {
        FieldConfig::Exact => timed("exact".into(), &|| task.run(Rationals))?,
        FieldConfig::Primes(ps) => {
            for &p in ps {
                let field = PrimeField::new(p)?;
                timed(format!("fp:{p}"), &|| task.run(field))?;
            }
        }
    }
    let (_, first) = &outcomes[0];
    if outcomes.iter().any(|(_, o)| !o.agrees_with(first)) {
        let values: Vec<String> = outcomes.iter().map(|(l, o)| format!("{l} {}", o.summary())).collect();
        return Err(Error::FieldDisagreement {
            what: what.to_string(),
            values: values.join("; "),
        });
    }
    Ok(outcomes.swap_remove(0).1)
}

fn input_record(fixture: &Fixture) -> InputRecord {
    let polynomial = fixture.f.to_string();
    let seed = match fixture.kind {
        FixtureKind::OneNode { seed, .. } | FixtureKind::MultiNode { seed, .. } => Some(seed),
        _ => None,
    };
    InputRecord {
        source: fixture.kind.to_string(),
        n: fixture.n(),
        d: fixture.d(),
        sha256: sha256_hex(&polynomial),
        polynomial,
        points: fixture.points.iter().map(|p| p.to_string()).collect(),
        seed,
        attempts: seed.map(|_| fixture.attempts),
        hypothesis: None,
    }
}

fn base_report(command: &str, opts: &Options) -> RunReport {
    let mut report = RunReport::new(command, opts.field.descriptors());
    if let Some(k) = opts.k_max {
        report.option("k_max", k);
    }
    if let Some(q) = opts.q_max {
        report.option("q_max", q);
    }
    if opts.allow_smooth {
        report.option("allow_smooth", true);
    }
    report
}

fn finish(mut report: RunReport, outcome: Outcome) -> RunReport {
    for (input, h) in report.inputs.iter_mut().zip(outcome.hypotheses) {
        input.hypothesis = h;
    }
    report.tables = outcome.tables;
    report.certificates = outcome.certificates;
    report.notes = outcome.notes;
    if let Some(s) = outcome.status {
        report.status = s;
    }
    report.settle();
    report
}

/// Runs `command` on one input.
pub fn run(command: &Command, fixture: &Fixture, opts: &Options) -> RunReport {
    let mut report = base_report(command.name(), opts);
    report.inputs.push(input_record(fixture));
    if let Command::Koszul { m_range: Some((lo, hi)) } = command {
        report.option("m_range", format!("{lo}..={hi}"));
    }
    if let Command::PeriodDiff { subspace: Some(v) } = command {
        report.option("subspace_dim", v.len());
    }
    let start = Instant::now();
    let task = SingleTask { command, fixture, opts };
    let result = opts
        .field
        .validate(fixture.n(), fixture.d())
        .and_then(|_| across_fields(command.name(), &opts.field, &task, &mut report.timings_ms));
    report.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
    match result {
        Ok(outcome) => finish(report, outcome),
        Err(e) => {
            let mut failed = RunReport::failed(command.name(), opts.field.descriptors(), &e);
            failed.options = report.options;
            failed.inputs = report.inputs;
            failed.timings_ms = report.timings_ms;
            failed
        }
    }
}

struct SingleTask<'a> {
    command: &'a Command,
    fixture: &'a Fixture,
    opts: &'a Options,
}

impl FieldTask for SingleTask<'_> {
    fn run<K: Field>(&self, field: K) -> Result<Outcome> {
        let ctx = JacobianContext::new(self.fixture.f.reduce_into(&field)?)?;
        ctx.register_singular_points(&self.fixture.points);
        let mut out = Outcome::default();
        if let Command::Hilbert = self.command {
            out.hypotheses.push(None);
            hilbert(&ctx, self.opts, &mut out);
            return Ok(out);
        }
        let Some((nodes, label)) = hypothesis(&ctx, self.fixture, self.opts, &mut out)? else {
            return Ok(out);
        };
        match self.command {
            Command::Hilbert | Command::Certify => {}
            Command::PhiCheck => out.certificates.push(phi_injective(&ctx)?.with_hypothesis(&label)),
            Command::Koszul { m_range } => koszul(&ctx, *m_range, self.opts, &label, &mut out)?,
            Command::Lemma23 => kernels(&ctx, &label, &mut out),
            Command::Hodge => hodge(&ctx, self.fixture, nodes, &label, &mut out)?,
            Command::PeriodDiff { subspace } => period(&ctx, subspace.as_deref(), &label, &mut out)?,
        }
        Ok(out)
    }
}

fn claim<K: Field>(name: &str, ctx: &JacobianContext<K>, hypothesis: &str) -> Certificate {
    Certificate::new(name, ctx.field().descriptor())
        .parameter("n", ctx.n() as i64)
        .parameter("d", i64::from(ctx.d()))
        .with_hypothesis(hypothesis)
}

/// Certifies the declared nodes; `None` stops the command.
fn hypothesis<K: Field>(
    ctx: &JacobianContext<K>,
    fixture: &Fixture,
    opts: &Options,
    out: &mut Outcome,
) -> Result<Option<(usize, String)>> {
    let cert = certify_nodal(ctx, &fixture.points)?;
    let label = cert.verdict.to_string();
    out.hypotheses.push(Some(label.clone()));
    let mut points = Table::new("points", &["point", "singular", "hessian_rank"]);
    for p in &cert.per_point {
        let rank = p.hessian_rank.map_or("-".to_string(), |r| r.to_string());
        points.row([p.point.clone(), p.singular.to_string(), rank]);
    }
    if !points.rows.is_empty() {
        out.tables.push(points);
    }
    let accepted = match &cert.verdict {
        Verdict::Nodal(m) => Some(*m),
        Verdict::Smooth if opts.allow_smooth => Some(0),
        Verdict::Smooth => None,
        Verdict::Failed(_) => None,
    };
    let mut c = claim("nodal", ctx, &label)
        .quantity("points", fixture.points.len())
        .passed(accepted.is_some());
    if let Some(t) = cert.tjurina {
        c = c.quantity("tjurina", t);
    }
    if let Verdict::Failed(reason) = &cert.verdict {
        c = c.detail(reason.clone());
    }
    out.certificates.push(c);
    match (&cert.verdict, accepted) {
        (_, Some(m)) => Ok(Some((m, label))),
        (Verdict::Smooth, None) => {
            out.stop(Status::HypothesisNotMet, "input is smooth; rerun with --allow-smooth to check it anyway");
            Ok(None)
        }
        (_, None) => {
            out.stop(Status::HypothesisNotMet, format!("nodal certification failed: {label}"));
            Ok(None)
        }
    }
}

fn hilbert<K: Field>(ctx: &JacobianContext<K>, opts: &Options, out: &mut Outcome) {
    let k_max = opts.k_max.unwrap_or(ctx.socle_degree() + 2);
    let mut table = Table::new("hilbert", &["k", "milnor_dim", "smooth_reference"]);
    for k in 0..=k_max {
        table.row([k as usize, ctx.milnor_dim(k), ctx.smooth_reference_dim(k)]);
    }
    out.tables.push(table);
    let mut inv = Table::new("invariants", &["name", "value"]);
    inv.row(["socle_degree".to_string(), ctx.socle_degree().to_string()]);
    inv.row(["ct".to_string(), ctx.coincidence_threshold().to_string()]);
    let tjurina = match ctx.tjurina_count() {
        Ok(t) => t.to_string(),
        Err(e) => format!("none ({e})"),
    };
    inv.row(["tjurina".to_string(), tjurina]);
    out.tables.push(inv);
}

fn koszul<K: Field>(
    ctx: &JacobianContext<K>,
    m_range: Option<(u32, u32)>,
    opts: &Options,
    label: &str,
    out: &mut Outcome,
) -> Result<()> {
    let (n, d) = (ctx.n() as u32, ctx.d());
    let bound = (n * d - 1) / 2;
    let (lo, hi) = m_range.unwrap_or((0, bound));
    let kc = KoszulContext::new(ctx);
    let mut table = Table::new("koszul", &["m", "hn_dim", "trivial_route"]);
    let mut nonzero = 0;
    let mut regular = false;
    for m in lo..=hi {
        let (dim, route) = kc.hn_dim_with_route(m);
        if m <= bound && dim != 0 {
            nonzero += 1;
        }
        regular |= route == TrivialRoute::RegularSequence;
        let route = match route {
            TrivialRoute::Explicit => "explicit",
            TrivialRoute::RegularSequence => "regular_sequence",
        };
        table.row([m.to_string(), dim.to_string(), route.to_string()]);
    }
    out.tables.push(table);
    if lo <= bound {
        out.certificates.push(
            claim("koszul_vanishing", ctx, label)
                .parameter("m_min", i64::from(lo))
                .parameter("m_max", i64::from(hi.min(bound)))
                .quantity("nonzero", nonzero)
                .passed(nonzero == 0),
        );
    }
    let q_max = opts.q_max.unwrap_or(n * d);
    let mdr = kc.mdr(q_max)?;
    let ct = ctx.coincidence_threshold();
    if regular || matches!(mdr, Threshold::Value(_)) {
        if let Some(rs) = kc.regular_sequence() {
            let section = if rs.section_form.is_empty() {
                format!("x{} = 0", rs.section_variable)
            } else {
                format!("x{} = generic form", rs.section_variable)
            };
            out.notes.push(format!(
                "regular sequence: partials without x{}{}, Artinian on {section} in degree {}",
                rs.excluded,
                if rs.mixed_generators { " (recombined)" } else { "" },
                rs.vanishing_degree
            ));
        }
    }
    let mut c = claim("ct_mdr_identity", ctx, label).parameter("q_max", i64::from(q_max));
    let passed = match (ct, mdr) {
        (Threshold::Smooth, Threshold::Smooth) => true,
        (Threshold::Value(c_), Threshold::Value(r)) => {
            c = c.quantity("ct", c_ as usize).quantity("mdr", r as usize);
            c_ == r + d - 2 && i64::from(c_) > 2 * i64::from(d) - i64::from(n) - 1
        }
        (ct, mdr) => {
            c = c.detail(format!("ct = {ct}, mdr = {mdr}"));
            false
        }
    };
    out.certificates.push(c.passed(passed));
    Ok(())
}

fn kernels<K: Field>(ctx: &JacobianContext<K>, label: &str, out: &mut Outcome) {
    let (n, d) = (ctx.n() as i64, i64::from(ctx.d()));
    let mut table = Table::new("kernels", &["t", "kernel_dim"]);
    let mut nonzero = 0;
    for t in 0..=(2 * d - n - 2).max(-1) {
        let dim = crate::torelli::variable_multiplication_kernel(ctx, t as u32).dim();
        nonzero += usize::from(dim != 0);
        table.row([t as usize, dim]);
    }
    out.tables.push(table);
    out.certificates.push(
        claim("multiplication_kernel", ctx, label)
            .parameter("t_max", 2 * d - n - 2)
            .quantity("nonzero", nonzero)
            .passed(nonzero == 0),
    );
    let mut c = claim("reference_equalities", ctx, label);
    let mut passed = true;
    for (name, k) in [("low", d - n - 1), ("high", 2 * d - n - 1)] {
        if k < 0 {
            continue;
        }
        let (m, r) = (ctx.milnor_dim(k as u32), ctx.smooth_reference_dim(k as u32));
        c = c
            .quantity(&format!("milnor_{name}"), m)
            .quantity(&format!("reference_{name}"), r);
        passed &= m == r;
    }
    out.certificates.push(c.passed(passed));
}

fn hodge<K: Field>(
    ctx: &JacobianContext<K>,
    fixture: &Fixture,
    nodes: usize,
    label: &str,
    out: &mut Outcome,
) -> Result<()> {
    let (n, d) = (ctx.n(), ctx.d());
    let h = hodge_graded_dims(ctx, Some(nodes))?;
    let mut table = Table::new("hodge", &["name", "value"]);
    table.row(["gr_top".to_string(), h.gr_top.to_string()]);
    table.row(["gr_next".to_string(), h.gr_next.to_string()]);
    if let Some(f) = h.f_next() {
        table.row(["f_next".to_string(), f.to_string()]);
    }
    out.tables.push(table);
    if let GradedDim::Unsupported(reason) = &h.gr_next {
        out.notes.push(format!("gr_next: {reason}"));
    }
    let n32 = n as u32;
    let top_ref = smooth_reference_dim(n, d, d - n32 - 1);
    out.certificates.push(
        claim("hodge_top", ctx, label)
            .quantity("gr_top", h.gr_top)
            .quantity("reference", top_ref)
            .passed(h.gr_top == top_ref),
    );
    if n > 4 {
        let next_ref = smooth_reference_dim(n, d, 2 * d - n32 - 1);
        let gr_next = h.gr_next.value().expect("n > 4 has gr_next");
        out.certificates.push(
            claim("hodge_next", ctx, label)
                .quantity("gr_next", gr_next)
                .quantity("reference", next_ref)
                .passed(gr_next == next_ref),
        );
    }
    if n == 3 {
        let k = 2 * d - 4;
        let saturation = ctx.saturation_graded(k)?.dim();
        let coords: Vec<_> = fixture.points.iter().map(|p| p.coordinates().to_vec()).collect();
        let points = ideal_of_points_dim(ctx.field(), &coords, n, k)?;
        out.certificates.push(
            claim("saturation_points", ctx, label)
                .parameter("k", i64::from(k))
                .quantity("saturation_dim", saturation)
                .quantity("ideal_of_points_dim", points)
                .passed(saturation == points),
        );
    }
    Ok(())
}

fn period<K: Field>(
    ctx: &JacobianContext<K>,
    subspace: Option<&[HomogeneousPolynomial<Rationals>]>,
    label: &str,
    out: &mut Outcome,
) -> Result<()> {
    let v = match subspace {
        None => DeformationSubspace::standard_complement(ctx),
        Some(list) => {
            let basis = list.iter().map(|p| p.reduce_into(ctx.field())).collect::<Result<Vec<_>>>()?;
            DeformationSubspace::new(ctx.d(), basis)?
        }
    };
    let effective = effective_deformation_check(ctx, &v)?.with_hypothesis(label);
    let is_effective = effective.passed;
    out.certificates.push(effective);
    if !is_effective {
        out.stop(Status::HypothesisNotMet, "deformation subspace meets J(f)_d");
        return Ok(());
    }
    let (map, cert) = period_differential(ctx, &v)?;
    out.certificates.push(cert.with_hypothesis(label));
    if subspace.is_none() {
        let phi = phi_matrix(ctx)?;
        let field = ctx.field();
        let negated: Vec<Vec<K::Elem>> = phi
            .map
            .to_dense_rows()
            .into_iter()
            .map(|row| row.iter().map(|x| field.neg(x)).collect())
            .collect();
        let entries = map.nrows() * map.ncols();
        out.certificates.push(
            claim("period_sign", ctx, label)
                .quantity("entries", entries)
                .passed(map.to_dense_rows() == negated),
        );
    }
    Ok(())
}

fn maybe_parallel<T, U, F>(threads: Option<usize>, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            pool.install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Generates every grid fixture, certifies it, computes its Hodge-graded
/// dimensions and checks their constancy within each `(n,d)`.
pub fn sweep(grid: &[GridEntry], seed: u64, support: Option<Support>, opts: &Options) -> RunReport {
    let mut report = base_report("sweep", opts);
    let spec: Vec<String> = grid.iter().map(|g| g.to_string()).collect();
    report.option("grid", spec.join(","));
    report.option("seed", seed);
    if let Some(s) = support {
        report.option("support", s);
    }
    let start = Instant::now();
    let result = sweep_inner(grid, seed, support, opts, &mut report);
    report.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
    match result {
        Ok(outcome) => finish(report, outcome),
        Err(e) => {
            let mut failed = RunReport::failed("sweep", opts.field.descriptors(), &e);
            failed.options = report.options;
            failed.inputs = report.inputs;
            failed.timings_ms = report.timings_ms;
            failed
        }
    }
}

fn sweep_inner(
    grid: &[GridEntry],
    seed: u64,
    support: Option<Support>,
    opts: &Options,
    report: &mut RunReport,
) -> Result<Outcome> {
    let mut kinds = Vec::new();
    for g in grid {
        for j in 0..g.count {
            let s = seed + j as u64;
            kinds.push(match (g.m, support) {
                (0, _) => FixtureKind::Fermat { n: g.n, d: g.d },
                (m, Some(support)) => FixtureKind::MultiNode {
                    n: g.n,
                    d: g.d,
                    m,
                    seed: s,
                    support,
                },
                (m, None) => FixtureKind::multi_node(g.n, g.d, m, s),
            });
        }
    }
    let start = Instant::now();
    let fixtures = maybe_parallel(opts.threads, &kinds, |kind| match kind {
        FixtureKind::Fermat { n, d } => fermat_fixture(*n, *d),
        FixtureKind::MultiNode {
            n,
            d,
            m,
            seed,
            support,
        } => multi_node(*n, *d, *m, *seed, *support),
        _ => unreachable!("sweeps generate fermat and multi-node fixtures"),
    })?;
    report.timings_ms.insert("fixtures".into(), start.elapsed().as_millis() as u64);
    report.inputs = fixtures.iter().map(input_record).collect();
    for f in &fixtures {
        opts.field.validate(f.n(), f.d())?;
    }
    let task = SweepTask {
        fixtures: &fixtures,
        opts,
    };
    across_fields("sweep", &opts.field, &task, &mut report.timings_ms)
}

type NodeCounted<'a, K> = (&'a JacobianContext<K>, usize);

struct SweepTask<'a> {
    fixtures: &'a [Fixture],
    opts: &'a Options,
}

impl FieldTask for SweepTask<'_> {
    fn run<K: Field>(&self, field: K) -> Result<Outcome> {
        let opts = self.opts;
        let per_fixture = maybe_parallel(opts.threads, self.fixtures, |fx| {
            let ctx = JacobianContext::new(fx.f.reduce_into(&field)?)?;
            let cert = certify_nodal(&ctx, &fx.points)?;
            let nodes = match cert.verdict {
                Verdict::Nodal(m) => Some(m),
                Verdict::Smooth => Some(0),
                Verdict::Failed(_) => None,
            };
            let dims = match nodes {
                Some(m) => Some(hodge_graded_dims(&ctx, Some(m))?),
                None => None,
            };
            Ok((ctx, cert.verdict, nodes, dims))
        })?;
        let mut out = Outcome::default();
        let mut table = Table::new("sweep", &["input", "n", "d", "verdict", "gr_top", "gr_next"]);
        let mut groups: BTreeMap<(usize, u32), Vec<NodeCounted<K>>> = BTreeMap::new();
        for (i, (ctx, verdict, nodes, dims)) in per_fixture.iter().enumerate() {
            out.hypotheses.push(Some(verdict.to_string()));
            let (top, next) = match dims {
                Some(h) => (h.gr_top.to_string(), h.gr_next.to_string()),
                None => ("-".to_string(), "-".to_string()),
            };
            table.row([
                i.to_string(),
                ctx.n().to_string(),
                ctx.d().to_string(),
                verdict.to_string(),
                top,
                next,
            ]);
            match nodes {
                Some(m) => groups.entry((ctx.n(), ctx.d())).or_default().push((ctx, *m)),
                None => out.stop(Status::HypothesisNotMet, format!("input {i} excluded: {verdict}")),
            }
        }
        out.tables.push(table);
        for members in groups.values() {
            out.certificates.push(corollary_constancy_check(members)?);
        }
        Ok(out)
    }
}
