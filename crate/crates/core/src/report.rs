//! Batch runs: load a group or algebra, compute its graded ring, verify the
//! identities, and serialize the result.

use std::fmt::Write as _;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::algebra::{AlgebraPresentation, GroupTable};
use crate::cohomology::{CohomologyContext, ProductEntry, ProductKind};
use crate::error::{Error, Result};
use crate::input::{parse_input_with_field, InputObject};
use crate::linalg::{Field, Vector};
use crate::monoidal::{check_axioms, random_samples, AxiomReport, Instance, ResolvedUnit};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest total dimension of a truncated resolution for which the star
/// product is attempted; `P ⊗ P` grows quadratically in it.
pub const MAX_STAR_RESOLUTION_DIM: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Group,
    Hochschild,
    Axioms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Named(String),
    Json(Vec<u8>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Products {
    Yoneda,
    Cup,
    Star,
    All,
}

impl Products {
    fn yoneda(self) -> bool {
        matches!(self, Products::Yoneda | Products::All)
    }
    fn cup(self) -> bool {
        matches!(self, Products::Cup | Products::All)
    }
    fn star(self) -> bool {
        matches!(self, Products::Star | Products::All)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Ignored by `axioms`.
    pub source: Option<Source>,
    /// Overrides the field named in an input file.
    pub field: Option<Field>,
    pub max_degree: usize,
    pub products: Products,
    pub verify: bool,
    /// Random complex pairs per field for `axioms`.
    pub samples: usize,
    pub seed: u64,
    /// Record wall-clock time; makes the output nondeterministic.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            source: None,
            field: None,
            max_degree: 6,
            products: Products::Yoneda,
            verify: false,
            samples: 20,
            seed: 0,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductRow {
    pub left: [usize; 2],
    pub right: [usize; 2],
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductTable {
    pub kind: String,
    pub entries: Vec<ProductRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Command,
    pub subject: String,
    pub field: String,
    pub max_degree: usize,
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<String>>,
    pub products: Vec<ProductTable>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(["record", "name", "p", "i", "q", "j", "value", "witness"])
            .map_err(io)?;
        for (n, d) in self.dims.iter().enumerate() {
            w.write_record(["dim", "", &n.to_string(), "", "", "", &d.to_string(), ""])
                .map_err(io)?;
        }
        for table in &self.products {
            for e in &table.entries {
                w.write_record([
                    "product",
                    &table.kind,
                    &e.left[0].to_string(),
                    &e.left[1].to_string(),
                    &e.right[0].to_string(),
                    &e.right[1].to_string(),
                    &e.coefficients.join(" "),
                    "",
                ])
                .map_err(io)?;
            }
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "fail" };
            w.write_record(["check", &c.name, "", "", "", "", verdict, c.witness.as_deref().unwrap_or("")])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} over {}", self.command_name(), self.subject, self.field);
        if !self.dims.is_empty() {
            let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "dims (0..={}): {}", self.max_degree, dims.join(" "));
        }
        for table in &self.products {
            let _ = writeln!(s, "{} products:", table.kind);
            for e in &table.entries {
                let _ = writeln!(
                    s,
                    "  {} * {} = [{}]",
                    self.label(e.left),
                    self.label(e.right),
                    e.coefficients.join(", ")
                );
            }
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(s, "{verdict} {} ({} cases; first failure {w})", c.name, c.cases);
                }
                None => {
                    let _ = writeln!(s, "{verdict} {} ({} cases)", c.name, c.cases);
                }
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "time: {t} ms");
        }
        s
    }

    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Group => "group",
            Command::Hochschild => "hochschild",
            Command::Axioms => "axioms",
        }
    }

    fn label(&self, [p, i]: [usize; 2]) -> String {
        self.basis
            .get(p)
            .and_then(|row| row.get(i))
            .cloned()
            .unwrap_or_else(|| format!("x{p}_{i}"))
    }
}

impl ProductRow {
    fn from_entry(e: &ProductEntry) -> ProductRow {
        ProductRow {
            left: [e.left.0, e.left.1],
            right: [e.right.0, e.right.1],
            coefficients: e.coords.to_scalars().iter().map(ToString::to_string).collect(),
        }
    }
}

/// Accumulates the outcomes of one named identity.
struct Tally {
    name: String,
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally {
            name: name.to_string(),
            cases: 0,
            witness: None,
        }
    }

    fn record(&mut self, passed: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !passed && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.witness.is_none(),
            cases: self.cases,
            witness: self.witness,
        }
    }
}

fn pair_witness(p: usize, i: usize, q: usize, j: usize) -> String {
    format!("x{p}_{i} * x{q}_{j} (degrees {p}, {q})")
}

/// Runs a configuration to completion.
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut report = match config.command {
        Command::Axioms => run_axioms(config),
        Command::Group => {
            let (group, field) = load_group(config)?;
            let ctx = CohomologyContext::group(&group, field, config.max_degree)?;
            run_context(config, &ctx, group.name().to_string())
        }
        Command::Hochschild => {
            let algebra = load_algebra(config)?;
            let ctx = CohomologyContext::hochschild(&algebra, config.max_degree)?;
            run_context(config, &ctx, algebra.name().to_string())
        }
    }?;
    if config.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn require_field(config: &RunConfig, from_file: Option<Field>) -> Result<Field> {
    config
        .field
        .or(from_file)
        .ok_or_else(|| Error::InvalidInput("no field given; pass --field or name one in the input".into()))
}

fn load_group(config: &RunConfig) -> Result<(GroupTable, Field)> {
    match &config.source {
        Some(Source::Named(name)) => Ok((GroupTable::named(name)?, require_field(config, None)?)),
        Some(Source::Json(bytes)) => {
            let parsed = parse_input_with_field(bytes, config.field)?;
            match parsed.object {
                InputObject::Group(g) => Ok((g, require_field(config, parsed.field)?)),
                InputObject::Algebra(_) => Err(Error::InvalidInput("expected a group, found an algebra".into())),
            }
        }
        None => Err(Error::InvalidInput("no group given".into())),
    }
}

fn load_algebra(config: &RunConfig) -> Result<AlgebraPresentation> {
    match &config.source {
        Some(Source::Named(name)) => AlgebraPresentation::named(name, require_field(config, None)?),
        Some(Source::Json(bytes)) => {
            let parsed = parse_input_with_field(bytes, config.field)?;
            match parsed.object {
                InputObject::Algebra(a) => Ok(a),
                InputObject::Group(g) => Ok(AlgebraPresentation::group_algebra(&g, require_field(config, parsed.field)?)),
            }
        }
        None => Err(Error::InvalidInput("no algebra given".into())),
    }
}

fn empty_report(config: &RunConfig, subject: String, field: String) -> Report {
    Report {
        schema: SCHEMA_VERSION,
        command: config.command,
        subject,
        field,
        max_degree: config.max_degree,
        dims: Vec::new(),
        basis: Vec::new(),
        products: Vec::new(),
        checks: Vec::new(),
        timing_ms: None,
    }
}

fn run_axioms(config: &RunConfig) -> Result<Report> {
    let fields = match config.field {
        Some(f) => vec![f],
        None => vec![Field::Prime(2), Field::Prime(3), Field::Rational],
    };
    let names: Vec<String> = fields.iter().map(ToString::to_string).collect();
    let mut report = empty_report(config, "random complexes".into(), names.join(","));
    for field in fields {
        let samples = random_samples(field, config.samples, 3, 4, config.seed);
        let axioms = check_axioms(&Instance::vector_spaces(field), &samples, config.seed);
        report.checks.extend(summarize_axioms(&axioms, &format!(" [{field}]")));
    }
    Ok(report)
}

/// One result per identity name, in order of first appearance.
pub fn summarize_axioms(axioms: &AxiomReport, suffix: &str) -> Vec<CheckResult> {
    let mut tallies: Vec<Tally> = Vec::new();
    for c in &axioms.checks {
        let pos = match tallies.iter().position(|t| t.name == c.name) {
            Some(pos) => pos,
            None => {
                tallies.push(Tally::new(&c.name));
                tallies.len() - 1
            }
        };
        tallies[pos].record(c.passed, || {
            let mut w = format!("sample {}", c.sample);
            if let Some(p) = c.p {
                let _ = write!(w, ", p = {p}");
            }
            if let Some(q) = c.q {
                let _ = write!(w, ", q = {q}");
            }
            w
        });
    }
    tallies
        .into_iter()
        .map(|t| {
            let mut r = t.finish();
            r.name.push_str(suffix);
            r
        })
        .collect()
}

fn table_for(kind: &str, entries: &[ProductEntry]) -> ProductTable {
    ProductTable {
        kind: kind.to_string(),
        entries: entries.iter().map(ProductRow::from_entry).collect(),
    }
}

fn lookup(table: &[ProductEntry], left: (usize, usize), right: (usize, usize)) -> &Vector {
    &table
        .iter()
        .find(|e| e.left == left && e.right == right)
        .expect("the table covers every pair of basis classes")
        .coords
}

fn run_context(config: &RunConfig, ctx: &CohomologyContext, subject: String) -> Result<Report> {
    let n = config.max_degree;
    let field = ctx.field();
    let mut report = empty_report(config, subject, field.to_string());
    report.dims = ctx.dims();
    report.basis = (0..=n).map(|p| (0..ctx.dim(p)).map(|i| format!("x{p}_{i}")).collect()).collect();

    let need_yoneda = config.products.yoneda() || config.verify;
    let yoneda = if need_yoneda { Some(ctx.product_table(ProductKind::Yoneda)?) } else { None };
    let need_cup = config.products.cup() || config.verify;
    let cup = if need_cup { Some(ctx.product_table(ProductKind::Cup)?) } else { None };
    let unit = if config.products.star() {
        let total: usize = (0..=ctx.resolution().top()).map(|k| ctx.resolution().dim(k)).sum();
        if total > MAX_STAR_RESOLUTION_DIM {
            return Err(Error::WrongContext(format!(
                "the star product needs a resolution of total dimension {total}, above the limit \
                 {MAX_STAR_RESOLUTION_DIM}; lower --max-degree or omit star"
            )));
        }
        Some(ResolvedUnit::for_context(ctx, true)?)
    } else {
        None
    };
    let star = match &unit {
        Some(u) => Some(star_table(u, ctx, n)?),
        None => None,
    };

    if config.products.yoneda() {
        report.products.push(table_for("yoneda", yoneda.as_ref().expect("computed above")));
    }
    if config.products.cup() {
        report.products.push(table_for("cup", cup.as_ref().expect("computed above")));
    }
    if let Some(star) = &star {
        report.products.push(table_for("star", star));
    }

    if config.verify {
        let yoneda = yoneda.as_ref().expect("computed for verification");
        let cup = cup.as_ref().expect("computed for verification");
        report.checks.push(graded_commutativity(ctx, yoneda));
        report.checks.push(cup_matches_yoneda(yoneda, cup));
        report.checks.push(associativity(ctx, yoneda));
        report.checks.push(well_definedness(ctx, yoneda, config.seed)?);
        if let (Some(unit), Some(star)) = (&unit, &star) {
            report.checks.extend(star_checks(ctx, unit, yoneda, star, n)?);
        }
    }
    Ok(report)
}

/// `x_p · x_q = (-1)^{pq} x_q · x_p`.
fn graded_commutativity(ctx: &CohomologyContext, yoneda: &[ProductEntry]) -> CheckResult {
    let mut tally = Tally::new("graded-commutativity");
    for e in yoneda {
        let ((p, i), (q, j)) = (e.left, e.right);
        let swapped = lookup(yoneda, e.right, e.left);
        let ok = e.coords == swapped.scaled(&ctx.field().sign((p * q) as i64));
        tally.record(ok, || pair_witness(p, i, q, j));
    }
    tally.finish()
}

/// The front-back cochain product `f ⌣ g` is the Yoneda composite `g ∘ F`.
fn cup_matches_yoneda(yoneda: &[ProductEntry], cup: &[ProductEntry]) -> CheckResult {
    let mut tally = Tally::new("cup-equals-yoneda");
    for e in cup {
        let ((p, i), (q, j)) = (e.left, e.right);
        tally.record(e.coords == *lookup(yoneda, e.right, e.left), || pair_witness(p, i, q, j));
    }
    tally.finish()
}

/// `(x y) z = x (y z)` on basis triples, expanded through the table.
fn associativity(ctx: &CohomologyContext, yoneda: &[ProductEntry]) -> CheckResult {
    let n = ctx.max_degree();
    let field = ctx.field();
    let mut tally = Tally::new("associativity");
    let times = |left: &Vector, ld: usize, right: (usize, usize)| -> Vector {
        let mut out = Vector::zeros(field, ctx.dim(ld + right.0));
        for k in left.support() {
            out.add_scaled(&left.get(k), lookup(yoneda, (ld, k), right));
        }
        out
    };
    let times_left = |left: (usize, usize), right: &Vector, rd: usize| -> Vector {
        let mut out = Vector::zeros(field, ctx.dim(left.0 + rd));
        for k in right.support() {
            out.add_scaled(&right.get(k), lookup(yoneda, left, (rd, k)));
        }
        out
    };
    for p in 0..=n {
        for q in 0..=n - p {
            for r in 0..=n - p - q {
                for i in 0..ctx.dim(p) {
                    for j in 0..ctx.dim(q) {
                        for k in 0..ctx.dim(r) {
                            let xy = lookup(yoneda, (p, i), (q, j));
                            let lhs = times(xy, p + q, (r, k));
                            let yz = lookup(yoneda, (q, j), (r, k));
                            let rhs = times_left((p, i), yz, q + r);
                            tally.record(lhs == rhs, || format!("x{p}_{i} * x{q}_{j} * x{r}_{k}"));
                        }
                    }
                }
            }
        }
    }
    tally.finish()
}

/// Perturbing both representatives by random coboundaries leaves each
/// Yoneda product class unchanged.
fn well_definedness(ctx: &CohomologyContext, yoneda: &[ProductEntry], seed: u64) -> Result<CheckResult> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut tally = Tally::new("well-definedness");
    for e in yoneda {
        let ((p, i), (q, j)) = (e.left, e.right);
        let f = ctx.perturbed(&ctx.basis_class(p, i), &mut rng);
        let g = ctx.perturbed(&ctx.basis_class(q, j), &mut rng);
        let prod = ctx.yoneda_product(&f, &g)?;
        tally.record(ctx.coordinates(&prod)? == e.coords, || pair_witness(p, i, q, j));
    }
    Ok(tally.finish())
}

/// The star products of all basis pairs with `p + q <= N`.
pub fn star_table(unit: &ResolvedUnit, ctx: &CohomologyContext, max_degree: usize) -> Result<Vec<ProductEntry>> {
    let elements = (0..=max_degree)
        .map(|p| ctx.basis(p).iter().map(|c| unit.element(ctx, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for p in 0..=max_degree {
        for q in 0..=max_degree - p {
            for (i, f) in elements[p].iter().enumerate() {
                for (j, g) in elements[q].iter().enumerate() {
                    let prod = unit.star(f, g)?;
                    let class = ctx.class(p + q, unit.cocycle(&prod)?)?;
                    out.push(ProductEntry {
                        left: (p, i),
                        right: (q, j),
                        coords: ctx.coordinates(&class)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn star_checks(
    ctx: &CohomologyContext,
    unit: &ResolvedUnit,
    yoneda: &[ProductEntry],
    star: &[ProductEntry],
    max_degree: usize,
) -> Result<Vec<CheckResult>> {
    let mut classes = Tally::new("star-equals-swapped-yoneda");
    for e in star {
        let ((p, i), (q, j)) = (e.left, e.right);
        classes.record(e.coords == *lookup(yoneda, e.right, e.left), || pair_witness(p, i, q, j));
    }
    let mut swapped = Tally::new("star-homotopic-to-swapped-dot");
    let mut signed = Tally::new("star-homotopic-to-signed-dot");
    let mut route = Tally::new("star-equals-signed-lambda-route");
    let mut route_dot = Tally::new("lambda-route-homotopic-to-dot");
    for c in unit.check_theorem_all(ctx, max_degree)? {
        let w = || pair_witness(c.p, c.i, c.q, c.j);
        swapped.record(c.star_is_swapped_dot, w);
        signed.record(c.star_is_signed_dot, w);
        route.record(c.star_is_signed_lambda_route, w);
        route_dot.record(c.lambda_route_is_dot, w);
    }
    Ok(vec![classes.finish(), swapped.finish(), signed.finish(), route.finish(), route_dot.finish()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str, p: u32, n: usize) -> RunConfig {
        RunConfig {
            source: Some(Source::Named(name.into())),
            field: Some(Field::Prime(p)),
            max_degree: n,
            products: Products::All,
            verify: true,
            ..RunConfig::new(Command::Group)
        }
    }

    #[test]
    fn cyclic_two_runs_clean() {
        let report = run(&group("cyclic:2", 2, 6)).unwrap();
        assert_eq!(report.dims, vec![1; 7]);
        assert_eq!(report.products.len(), 3);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.exit_code(), 0);
        let again = run(&group("cyclic:2", 2, 6)).unwrap();
        assert_eq!(report.render(Format::Json).unwrap(), again.render(Format::Json).unwrap());
    }

    #[test]
    fn star_size_guard() {
        let err = run(&group("s3", 2, 4)).unwrap_err().to_string();
        assert!(err.contains("lower --max-degree"), "{err}");
    }

    #[test]
    fn hochschild_dual_numbers() {
        let config = RunConfig {
            source: Some(Source::Named("dual-numbers".into())),
            field: Some(Field::Prime(3)),
            max_degree: 4,
            verify: true,
            ..RunConfig::new(Command::Hochschild)
        };
        let report = run(&config).unwrap();
        assert_eq!(report.dims, vec![2, 1, 1, 1, 1]);
        assert!(report.all_passed());
    }

    #[test]
    fn axioms_report_one_line_per_identity() {
        let config = RunConfig {
            field: Some(Field::Prime(5)),
            samples: 3,
            ..RunConfig::new(Command::Axioms)
        };
        let report = run(&config).unwrap();
        assert!(report.all_passed());
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"anticommuting-square [F5]"));
        assert!(names.contains(&"sign-relation [F5]"));
    }

    #[test]
    fn formats_render() {
        let report = run(&RunConfig {
            max_degree: 2,
            ..group("cyclic:3", 3, 2)
        })
        .unwrap();
        let csv = report.render(Format::Csv).unwrap();
        assert!(csv.starts_with("record,name,p,i,q,j,value,witness\n"));
        assert!(csv.contains("check,graded-commutativity,,,,,pass,"));
        let text = report.render(Format::Text).unwrap();
        assert!(text.contains("dims (0..=2): 1 1 1"));
        assert!(text.contains("PASS associativity"));
    }
}
