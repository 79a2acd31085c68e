//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ext_core::algebra::{AlgebraPresentation, GroupTable};
use ext_core::cohomology::{CohomologyContext, ProductEntry, ProductKind};
use ext_core::monoidal::{check_axioms, graded_end_ring, random_samples, Instance, ResolvedUnit};
use ext_core::{Field, Vector};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

type Outcome = Result<String, String>;

const FIELDS: [Field; 3] = [Field::Prime(2), Field::Prime(3), Field::Prime(5)];
const GROUPS: [&str; 5] = ["cyclic:2", "cyclic:3", "cyclic:4", "klein4", "s3"];
const ALGEBRAS: [&str; 4] = ["field", "dual-numbers", "group:cyclic:2", "upper-triangular"];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group_degree(name: &str) -> usize {
    if name.starts_with("cyclic") {
        6
    } else {
        4
    }
}

fn group_context(name: &str, field: Field) -> CohomologyContext {
    let g = GroupTable::named(name).unwrap();
    CohomologyContext::group(&g, field, group_degree(name)).unwrap()
}

fn hochschild_context(name: &str, field: Field, n: usize) -> CohomologyContext {
    let a = AlgebraPresentation::named(name, field).unwrap();
    CohomologyContext::hochschild(&a, n).unwrap()
}

fn lookup(table: &[ProductEntry], left: (usize, usize), right: (usize, usize)) -> &Vector {
    &table.iter().find(|e| e.left == left && e.right == right).unwrap().coords
}

fn graded_commutative(ctx: &CohomologyContext, table: &[ProductEntry]) -> Result<usize, String> {
    for e in table {
        let (p, q) = (e.left.0, e.right.0);
        let sign = ctx.field().sign((p * q) as i64);
        ensure(e.coords == lookup(table, e.right, e.left).scaled(&sign), || {
            format!("{:?} * {:?} is not graded commutative", e.left, e.right)
        })?;
    }
    Ok(table.len())
}

/// 1: unit squares, anticommuting square and the iterated relations on
/// random complexes over F_2, F_3 and Q.
fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for field in [Field::Prime(2), Field::Prime(3), Field::Rational] {
        let samples = random_samples(field, 20, 3, 4, 1);
        let report = check_axioms(&Instance::vector_spaces(field), &samples, 1);
        for name in ["unit-square-left", "unit-square-right", "anticommuting-square", "sign-relation"] {
            ensure(report.checks.iter().any(|c| c.name == name), || format!("{name} did not run"))?;
        }
        if let Some(c) = report.failures().next() {
            return Err(format!("{field}: {c:?}"));
        }
        checks += report.checks.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{checks} exact identities on 60 sample pairs in {:.2?}", elapsed))
}

/// 2: star ≃ swapped dot and star ≃ signed dot through homotopies on the
/// smallest rings; graded commutativity of the dot product across the matrix.
fn theorem_identities() -> Outcome {
    let mut star_pairs = 0;
    let small = [
        group_context_n("cyclic:2", Field::Prime(2), 4),
        hochschild_context("dual-numbers", Field::Prime(3), 4),
    ];
    for ctx in &small {
        let unit = ResolvedUnit::for_context(ctx, true).map_err(|e| e.to_string())?;
        for c in unit.check_theorem_all(ctx, 4).map_err(|e| e.to_string())? {
            ensure(c.passed(), || format!("{c:?}"))?;
            star_pairs += 1;
        }
        // the chain-level dot product agrees with the cocycle-level table
        let dot = graded_end_ring(&unit, ctx, 4).map_err(|e| e.to_string())?;
        ensure(dot == ctx.product_table(ProductKind::Yoneda).unwrap(), || "dot table differs".into())?;
    }
    let mut pairs = 0;
    let mut rings = 0;
    for g in GROUPS {
        for field in FIELDS.into_iter().chain([Field::Rational]) {
            let ctx = group_context(g, field);
            pairs += graded_commutative(&ctx, &ctx.product_table(ProductKind::Yoneda).unwrap())
                .map_err(|e| format!("{g} over {field}: {e}"))?;
            rings += 1;
        }
    }
    for a in ALGEBRAS {
        for field in FIELDS.into_iter().chain([Field::Rational]) {
            let ctx = hochschild_context(a, field, 4);
            pairs += graded_commutative(&ctx, &ctx.product_table(ProductKind::Yoneda).unwrap())
                .map_err(|e| format!("HH {a} over {field}: {e}"))?;
            rings += 1;
        }
    }
    Ok(format!("{star_pairs} star pairs homotopic; {pairs} dot pairs graded commutative in {rings} rings"))
}

fn group_context_n(name: &str, field: Field, n: usize) -> CohomologyContext {
    CohomologyContext::group(&GroupTable::named(name).unwrap(), field, n).unwrap()
}

/// 3: the rings of Z/2 and Z/3 and the vanishing for Z/2 over F_3, with the
/// periodic resolution as oracle.
fn known_rings() -> Outcome {
    let start = Instant::now();
    let one = |v: &Vector| v.len() == 1 && !v.is_zero();
    // H*(Z/2; F_2) = F_2[x], |x| = 1
    let oracle = CohomologyContext::periodic(2, Field::Prime(2), 6).unwrap();
    let bar = group_context("cyclic:2", Field::Prime(2));
    ensure(oracle.dims() == vec![1; 7] && bar.dims() == oracle.dims(), || {
        format!("Z/2 dims {:?} vs oracle {:?}", bar.dims(), oracle.dims())
    })?;
    for table in [bar.product_table(ProductKind::Yoneda).unwrap(), oracle.product_table(ProductKind::Yoneda).unwrap()] {
        ensure(table.iter().all(|e| one(&e.coords)), || "some x^i x^j vanishes".into())?;
    }
    // H*(Z/3; F_3) = Λ(x) ⊗ F_3[y], |x| = 1, |y| = 2
    let oracle = CohomologyContext::periodic(3, Field::Prime(3), 6).unwrap();
    let bar = group_context("cyclic:3", Field::Prime(3));
    ensure(oracle.dims() == vec![1; 7] && bar.dims() == oracle.dims(), || {
        format!("Z/3 dims {:?} vs oracle {:?}", bar.dims(), oracle.dims())
    })?;
    for ctx in [&bar, &oracle] {
        let table = ctx.product_table(ProductKind::Yoneda).unwrap();
        for e in &table {
            let (p, q) = (e.left.0, e.right.0);
            let expect_zero = p % 2 == 1 && q % 2 == 1;
            ensure(e.coords.is_zero() == expect_zero, || format!("Z/3: degrees {p}, {q} gave {}", e.coords))?;
        }
        // y is polynomial: y^k = y · y^{k-1} is a generator up to a unit
        let y = ctx.basis_class(2, 0);
        let mut power = y.clone();
        for k in 2..=3 {
            power = ctx.yoneda_product(&y, &power).unwrap();
            ensure(!ctx.is_zero(&power).unwrap(), || format!("y^{k} vanishes"))?;
        }
    }
    // H^n(Z/2; F_3) = 0 for n >= 1
    for ctx in [group_context("cyclic:2", Field::Prime(3)), CohomologyContext::periodic(2, Field::Prime(3), 6).unwrap()] {
        ensure(ctx.dims() == vec![1, 0, 0, 0, 0, 0, 0], || format!("Z/2 over F3 dims {:?}", ctx.dims()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("Z/2 over F2, Z/3 over F3, Z/2 over F3 match the oracle in {:.2?}", elapsed))
}

/// 4: cochain cup products equal Yoneda products as classes.
fn yoneda_equals_cup() -> Outcome {
    let mut pairs = 0;
    let mut compare = |label: String, ctx: &CohomologyContext| -> Result<(), String> {
        let yoneda = ctx.product_table(ProductKind::Yoneda).unwrap();
        let cup = ctx.product_table(ProductKind::Cup).unwrap();
        for (y, c) in yoneda.iter().zip(&cup) {
            ensure(y == c, || format!("{label}: {:?} * {:?}: cup {} vs Yoneda {}", y.left, y.right, c.coords, y.coords))?;
            pairs += 1;
        }
        Ok(())
    };
    for g in GROUPS {
        for field in FIELDS {
            compare(format!("{g} over {field}"), &group_context(g, field))?;
        }
    }
    for a in ["dual-numbers", "group:cyclic:2"] {
        for field in FIELDS.into_iter().chain([Field::Rational]) {
            compare(format!("HH {a} over {field}"), &hochschild_context(a, field, 4))?;
        }
    }
    Ok(format!("{pairs} basis pairs agree"))
}

fn random_class(ctx: &CohomologyContext, n: usize, rng: &mut StdRng) -> ext_core::cohomology::CohomologyClass {
    let field = ctx.field();
    let coords: Vec<i64> = (0..ctx.dim(n)).map(|_| rng.random_range(-2..=2)).collect();
    ctx.combination(n, &Vector::from_i64(field, &coords))
}

/// 5: random coboundary perturbations of representatives change no product.
fn well_definedness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let contexts = [
        group_context("cyclic:3", Field::Prime(3)),
        group_context("cyclic:4", Field::Prime(2)),
        group_context("klein4", Field::Prime(2)),
        group_context("s3", Field::Prime(3)),
        hochschild_context("dual-numbers", Field::Prime(3), 4),
        hochschild_context("group:cyclic:2", Field::Prime(2), 4),
    ];
    for trial in 0..100 {
        let ctx = &contexts[trial % contexts.len()];
        let n = ctx.max_degree();
        let p = rng.random_range(0..=n);
        let q = rng.random_range(0..=n - p);
        let f = random_class(ctx, p, &mut rng);
        let g = random_class(ctx, q, &mut rng);
        let (f2, g2) = (ctx.perturbed(&f, &mut rng), ctx.perturbed(&g, &mut rng));
        for kind in [ProductKind::Yoneda, ProductKind::Cup] {
            let a = ctx.product(kind, &f, &g).unwrap();
            let b = ctx.product(kind, &f2, &g2).unwrap();
            ensure(ctx.classes_equal(&a, &b).unwrap(), || format!("trial {trial}: {kind:?} degrees {p}, {q}"))?;
        }
    }
    Ok("100 perturbations, Yoneda and cup classes unchanged".into())
}

/// 6: bar and periodic resolutions give the same Ext dimensions for Z/n.
fn oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for n in [2, 3, 4] {
        for field in FIELDS.into_iter().chain([Field::Rational]) {
            let bar = group_context_n(&format!("cyclic:{n}"), field, 6);
            let oracle = CohomologyContext::periodic(n, field, 6).unwrap();
            ensure(bar.dims() == oracle.dims(), || {
                format!("Z/{n} over {field}: {:?} vs {:?}", bar.dims(), oracle.dims())
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} (group, field) pairs agree in degrees 0..=6"))
}

/// 7: dropping the Koszul sign of λ is detected by the anticommuting square
/// and by the sign identity of the star product.
fn negative_control() -> Outcome {
    let field = Field::Prime(3);
    let samples = random_samples(field, 20, 3, 4, 1);
    let report = check_axioms(&Instance::vector_spaces(field).without_lambda_sign(), &samples, 1);
    ensure(!report.passed("anticommuting-square"), || "anticommuting square still passes".into())?;
    ensure(report.passed("unit-square-left") && report.passed("unit-square-right"), || {
        "unit squares should not depend on the sign of λ".into()
    })?;
    let mut caught = Vec::new();
    for (label, ctx) in [
        ("Z/3 over F3", group_context_n("cyclic:3", field, 2)),
        ("k[x]/(x^2) over F3", hochschild_context("dual-numbers", field, 2)),
    ] {
        let unit = ResolvedUnit::for_context(&ctx, false).map_err(|e| e.to_string())?;
        let checks = unit.check_theorem_all(&ctx, 2).map_err(|e| e.to_string())?;
        let failed = checks.iter().filter(|c| !c.sign_identities_passed()).count();
        ensure(failed > 0, || format!("{label}: sign identity not violated"))?;
        caught.push(format!("{label}: {failed}/{} pairs", checks.len()));
    }
    Ok(format!("anticommuting square fails; sign identity fails for {}", caught.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("axiom suite", axiom_suite),
        ("theorem identities", theorem_identities),
        ("known rings", known_rings),
        ("Yoneda = cup", yoneda_equals_cup),
        ("well-definedness", well_definedness),
        ("oracle equivalence", oracle_equivalence),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
