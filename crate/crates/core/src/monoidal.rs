//! Suspended monoidal structure on complexes of modules, and the graded
//! endomorphism ring of the unit with its two products.
//!
//! Three tensor products are supported: plain vector spaces, modules over a
//! group algebra with the diagonal action, and bimodules tensored over the
//! algebra. In each case the unit object is replaced by a free resolution
//! `P` of it, `e ⊗ e` by `P ⊗ P`, and `r^{-1}` by a diagonal `Δ : P -> P ⊗ P`
//! obtained from the comparison theorem.

use std::borrow::Cow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;

use crate::algebra::AlgebraPresentation;
use crate::cohomology::{CohomologyClass, CohomologyContext, ContextKind, ProductEntry};
use crate::complex::{
    associator, lambda_iso_through, left_unitor, rho_iso_through, right_unitor, same_complex, tensor_map_through,
    tensor_through,
    ChainMap, Complex, TensorProduct,
};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Field, Matrix, Solver, Vector};
use crate::resolution::FreeResolution;

static NEXT_INSTANCE: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorKind {
    /// `⊗_k` of vector spaces.
    Field,
    /// `⊗_k` of `kG`-modules, `g` acting as `g ⊗ g`.
    Diagonal,
    /// `⊗_A` of `A`-bimodules.
    OverAlgebra,
}

/// A complex of left modules: a complex of vector spaces with one action
/// matrix per ring basis element in every degree.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    complex: Arc<Complex>,
    /// `actions[n - lo][b]`
    actions: Arc<Vec<Vec<Matrix>>>,
}

impl ModuleComplex {
    pub fn new(complex: Arc<Complex>, actions: Vec<Vec<Matrix>>) -> Result<ModuleComplex> {
        if actions.len() != complex.degrees().count() {
            return Err(Error::Shape("one list of action matrices per degree expected".into()));
        }
        for (n, acts) in complex.degrees().zip(&actions) {
            let dim = complex.dim(n);
            if acts.iter().any(|m| m.rows() != dim || m.cols() != dim) {
                return Err(Error::Shape(format!("action matrix in degree {n} has the wrong shape")));
            }
        }
        Ok(ModuleComplex {
            complex,
            actions: Arc::new(actions),
        })
    }

    /// A complex of vector spaces, as modules over the field.
    pub fn vector_space(complex: Complex) -> ModuleComplex {
        let field = complex.field();
        let actions = complex.degrees().map(|n| vec![Matrix::identity(field, complex.dim(n))]).collect();
        ModuleComplex {
            complex: Arc::new(complex),
            actions: Arc::new(actions),
        }
    }

    /// A free resolution with its ring action.
    pub fn from_resolution(res: &FreeResolution) -> ModuleComplex {
        let r = res.ring().dim();
        let actions = (0..=res.top()).map(|n| (0..r).map(|b| res.action(n, b)).collect()).collect();
        ModuleComplex {
            complex: res.complex(),
            actions: Arc::new(actions),
        }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    /// Action of the ring basis element `b` in degree `n`.
    pub fn action(&self, n: i64, b: usize) -> Cow<'_, Matrix> {
        let c = &self.complex;
        if n < c.lo() || n > c.hi() {
            Cow::Owned(Matrix::zeros(c.field(), 0, 0))
        } else {
            Cow::Borrowed(&self.actions[(n - c.lo()) as usize][b])
        }
    }

    /// Action of a ring element given by coordinates.
    pub fn act(&self, n: i64, c: &Vector) -> Matrix {
        let dim = self.complex.dim(n);
        let mut m = Matrix::zeros(self.complex.field(), dim, dim);
        for b in c.support() {
            m.add_scaled(&c.get(b), &self.action(n, b));
        }
        m
    }

    pub fn shift(&self, p: i64) -> ModuleComplex {
        ModuleComplex {
            complex: Arc::new(self.complex.shift(p)),
            actions: self.actions.clone(),
        }
    }

    fn ring_dim(&self) -> usize {
        self.actions.first().map_or(0, Vec::len)
    }
}

/// A chain map between complexes of modules.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: ModuleComplex,
    target: ModuleComplex,
    map: ChainMap,
}

impl ModuleMap {
    pub fn new(source: ModuleComplex, target: ModuleComplex, map: ChainMap) -> Result<ModuleMap> {
        if !same_complex(map.source(), &source.complex) || !same_complex(map.target(), &target.complex) {
            return Err(Error::Shape("chain map does not match the module complexes".into()));
        }
        Ok(ModuleMap { source, target, map })
    }

    pub fn identity(x: &ModuleComplex) -> ModuleMap {
        ModuleMap {
            source: x.clone(),
            target: x.clone(),
            map: ChainMap::identity(x.complex.clone()),
        }
    }

    pub fn source(&self) -> &ModuleComplex {
        &self.source
    }

    pub fn target(&self) -> &ModuleComplex {
        &self.target
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    pub fn degree(&self) -> i64 {
        self.map.degree()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        Ok(ModuleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&first.map)?,
        })
    }

    pub fn shift(&self, p: i64) -> ModuleMap {
        ModuleMap {
            source: self.source.shift(p),
            target: self.target.shift(p),
            map: self.map.shift(p),
        }
    }

    pub fn scaled(&self, c: &crate::linalg::Scalar) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.scaled(c),
        }
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.map.equals(&other.map)
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }
}

/// `X ⊗ Y` with its relation to the tensor product over the field.
#[derive(Clone, Debug)]
pub struct Tensor {
    module: ModuleComplex,
    full: TensorProduct,
    /// Projection from and section into the field tensor product, per degree
    /// of the field tensor product. `None` when the two coincide.
    quotient: Option<(i64, Vec<(Matrix, Matrix)>)>,
}

impl Tensor {
    pub fn module(&self) -> &ModuleComplex {
        &self.module
    }

    fn projection(&self, n: i64) -> Option<Cow<'_, Matrix>> {
        self.quotient.as_ref().map(|(lo, qs)| match qs.get((n - lo) as usize) {
            Some((q, _)) if n >= *lo => Cow::Borrowed(q),
            _ => Cow::Owned(Matrix::zeros(self.module.complex.field(), 0, 0)),
        })
    }

    fn section(&self, n: i64) -> Option<Cow<'_, Matrix>> {
        self.quotient.as_ref().map(|(lo, qs)| match qs.get((n - lo) as usize) {
            Some((_, s)) if n >= *lo => Cow::Borrowed(s),
            _ => Cow::Owned(Matrix::zeros(self.module.complex.field(), 0, 0)),
        })
    }
}

/// `k^dim / span(relations)`: a projection and a section built from the
/// standard basis vectors outside the relation span.
fn quotient_by(field: Field, dim: usize, relations: &[Vector]) -> (Matrix, Matrix) {
    let mut span = EchelonBasis::new(field, dim);
    let mut rel_basis = Vec::new();
    for r in relations {
        if span.insert(r) {
            rel_basis.push(r.clone());
        }
    }
    let mut chosen = Vec::new();
    for k in 0..dim {
        let e = Vector::unit(field, dim, k);
        if span.insert(&e) {
            chosen.push(e);
        }
    }
    let section = Matrix::from_columns(field, dim, &chosen);
    let mut all = chosen.clone();
    all.extend(rel_basis);
    let solver = Solver::new(&Matrix::from_columns(field, dim, &all));
    let mut projection = Matrix::zeros(field, chosen.len(), dim);
    for k in 0..dim {
        let x = solver
            .solve(&Vector::unit(field, dim, k))
            .expect("chosen vectors and relations span the space");
        projection.set_column(k, &x.slice(0, chosen.len()));
    }
    (projection, section)
}

/// A concrete suspended monoidal category of complexes of modules.
#[derive(Clone, Debug)]
pub struct Instance {
    id: u64,
    kind: TensorKind,
    ring: Arc<AlgebraPresentation>,
    algebra: Option<Arc<AlgebraPresentation>>,
    koszul_lambda: bool,
    /// Tensor products keep only degrees up to this bound.
    truncation: Option<i64>,
}

impl Instance {
    fn build(kind: TensorKind, ring: Arc<AlgebraPresentation>, algebra: Option<Arc<AlgebraPresentation>>) -> Instance {
        Instance {
            id: NEXT_INSTANCE.fetch_add(1, Ordering::Relaxed),
            kind,
            ring,
            algebra,
            koszul_lambda: true,
            truncation: None,
        }
    }

    pub fn vector_spaces(field: Field) -> Instance {
        Instance::build(TensorKind::Field, Arc::new(AlgebraPresentation::field_algebra(field)), None)
    }

    /// Modules over a group algebra whose basis is the group.
    pub fn group_modules(group_algebra: Arc<AlgebraPresentation>) -> Instance {
        Instance::build(TensorKind::Diagonal, group_algebra, None)
    }

    /// `A`-bimodules, i.e. left `A^e`-modules, with `⊗_A`.
    pub fn bimodules(algebra: &AlgebraPresentation) -> Instance {
        Instance::build(
            TensorKind::OverAlgebra,
            Arc::new(algebra.enveloping_algebra()),
            Some(Arc::new(algebra.clone())),
        )
    }

    /// The same instance with the Koszul sign of `λ` dropped.
    pub fn without_lambda_sign(&self) -> Instance {
        let mut out = Instance::build(self.kind, self.ring.clone(), self.algebra.clone());
        out.koszul_lambda = false;
        out.truncation = self.truncation;
        out
    }

    /// The same instance with every tensor product truncated above degree
    /// `top`. Maps out of complexes concentrated in degrees `<= top` are
    /// unaffected.
    pub fn truncated_at(&self, top: i64) -> Instance {
        let mut out = Instance::build(self.kind, self.ring.clone(), self.algebra.clone());
        out.koszul_lambda = self.koszul_lambda;
        out.truncation = Some(top);
        out
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn ring(&self) -> &Arc<AlgebraPresentation> {
        &self.ring
    }

    pub fn has_lambda_sign(&self) -> bool {
        self.koszul_lambda
    }

    /// The unit object: `k` in degree 0, or `A` for bimodules.
    pub fn unit(&self) -> ModuleComplex {
        let field = self.field();
        match &self.algebra {
            Some(a) => {
                let m = crate::algebra::ModuleRep::algebra_as_bimodule(a);
                let actions = vec![(0..self.ring.dim()).map(|b| m.action_of_basis(b).clone()).collect()];
                ModuleComplex::new(Arc::new(Complex::concentrated(field, 0, a.dim())), actions)
                    .expect("unit actions have the right shape")
            }
            None => {
                let actions = vec![vec![Matrix::identity(field, 1); self.ring.dim()]];
                ModuleComplex::new(Arc::new(Complex::unit(field)), actions).expect("unit actions have the right shape")
            }
        }
    }

    fn check_module(&self, x: &ModuleComplex) -> Result<()> {
        if x.complex.field() != self.field() {
            return Err(Error::FieldMismatch {
                expected: self.field(),
                found: x.complex.field(),
            });
        }
        if !x.complex.is_zero() && x.ring_dim() != self.ring.dim() {
            return Err(Error::InstanceMismatch);
        }
        Ok(())
    }

    /// Left multiplication by `e_i` on a bimodule in degree `n`.
    fn bimodule_left(&self, x: &ModuleComplex, n: i64, i: usize) -> Matrix {
        let a = self.algebra.as_ref().expect("bimodule instance");
        let d = a.dim();
        let unit = a.unit();
        let coords = Vector::unit(self.field(), d, i).kron(unit);
        x.act(n, &coords)
    }

    /// Right multiplication by `e_j` on a bimodule in degree `n`.
    fn bimodule_right(&self, x: &ModuleComplex, n: i64, j: usize) -> Matrix {
        let a = self.algebra.as_ref().expect("bimodule instance");
        let d = a.dim();
        let coords = a.unit().kron(&Vector::unit(self.field(), d, j));
        x.act(n, &coords)
    }

    pub fn tensor(&self, x: &ModuleComplex, y: &ModuleComplex) -> Result<Tensor> {
        self.check_module(x)?;
        self.check_module(y)?;
        let field = self.field();
        let full = tensor_through(&x.complex, &y.complex, self.truncation)?;
        let fc = full.complex().clone();
        match self.kind {
            TensorKind::Field => {
                let actions = fc.degrees().map(|n| vec![Matrix::identity(field, fc.dim(n))]).collect();
                Ok(Tensor {
                    module: ModuleComplex::new(fc, actions)?,
                    full,
                    quotient: None,
                })
            }
            TensorKind::Diagonal => {
                let r = self.ring.dim();
                let actions = fc
                    .degrees()
                    .map(|n| {
                        (0..r)
                            .map(|g| {
                                let mut m = Matrix::zeros(field, fc.dim(n), fc.dim(n));
                                for blk in full.blocks(n) {
                                    let part = x.action(blk.left, g).kron(&y.action(blk.right, g));
                                    m.set_block(blk.offset, blk.offset, &part);
                                }
                                m
                            })
                            .collect()
                    })
                    .collect();
                Ok(Tensor {
                    module: ModuleComplex::new(fc, actions)?,
                    full,
                    quotient: None,
                })
            }
            TensorKind::OverAlgebra => self.tensor_over_algebra(x, y, full),
        }
    }

    fn tensor_over_algebra(&self, x: &ModuleComplex, y: &ModuleComplex, full: TensorProduct) -> Result<Tensor> {
        let field = self.field();
        let a = self.algebra.as_ref().expect("bimodule instance").clone();
        let d = a.dim();
        let fc = full.complex().clone();
        let mut quotients = Vec::new();
        for n in fc.degrees() {
            let dim = fc.dim(n);
            let mut relations = Vec::new();
            for blk in full.blocks(n) {
                let (dx, dy) = (x.complex.dim(blk.left), y.complex.dim(blk.right));
                for i in 0..d {
                    // (x e_i) ⊗ y - x ⊗ (e_i y)
                    let rel = self
                        .bimodule_right(x, blk.left, i)
                        .kron(&Matrix::identity(field, dy))
                        .sub(&Matrix::identity(field, dx).kron(&self.bimodule_left(y, blk.right, i)));
                    for col in rel.columns() {
                        if !col.is_zero() {
                            let mut v = Vector::zeros(field, dim);
                            v.set_slice(blk.offset, &col);
                            relations.push(v);
                        }
                    }
                }
            }
            quotients.push(quotient_by(field, dim, &relations));
        }
        let lo = fc.lo();
        let dims: Vec<usize> = quotients.iter().map(|(q, _)| q.rows()).collect();
        let diffs = (1..quotients.len())
            .map(|i| {
                let n = lo + i as i64;
                quotients[i - 1].0.mul(&fc.d(n)).mul(&quotients[i].1)
            })
            .collect();
        let complex = Complex::new(field, lo, dims, diffs)?;
        let r = self.ring.dim();
        let actions = complex
            .degrees()
            .map(|n| {
                let (q, s) = &quotients[(n - lo) as usize];
                (0..r)
                    .map(|b| {
                        let (i, j) = (b / d, b % d);
                        let mut m = Matrix::zeros(field, fc.dim(n), fc.dim(n));
                        for blk in full.blocks(n) {
                            let part = self
                                .bimodule_left(x, blk.left, i)
                                .kron(&self.bimodule_right(y, blk.right, j));
                            m.set_block(blk.offset, blk.offset, &part);
                        }
                        q.mul(&m).mul(s)
                    })
                    .collect()
            })
            .collect();
        Ok(Tensor {
            module: ModuleComplex::new(Arc::new(complex), actions)?,
            full,
            quotient: Some((lo, quotients)),
        })
    }

    /// Restricts a map between field tensor products to the module tensors.
    fn compress(
        &self,
        src: &Tensor,
        tgt: &Tensor,
        tgt_shift: i64,
        target: ModuleComplex,
        full: &ChainMap,
    ) -> Result<ModuleMap> {
        let k = full.degree();
        let source = src.module.clone();
        let components = source
            .complex
            .degrees()
            .map(|n| {
                let mut m = full.component(n).into_owned();
                if let Some(q) = tgt.projection(n + k - tgt_shift) {
                    m = q.mul(&m);
                }
                if let Some(s) = src.section(n) {
                    m = m.mul(&s);
                }
                m
            })
            .collect();
        // without the Koszul sign λ is not a chain map, so it is kept unchecked
        let map = if self.koszul_lambda {
            ChainMap::new(source.complex.clone(), target.complex.clone(), k, components)?
        } else {
            ChainMap::new_unchecked(source.complex.clone(), target.complex.clone(), k, components)?
        };
        ModuleMap::new(source, target, map)
    }

    /// `f ⊗ g` with the Koszul sign `(-1)^{q|x|}`.
    pub fn tensor_map(&self, f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
        let src = self.tensor(&f.source, &g.source)?;
        let tgt = self.tensor(&f.target, &g.target)?;
        let full = tensor_map_through(&f.map, &g.map, self.truncation)?;
        let target = tgt.module.clone();
        self.compress(&src, &tgt, 0, target, &full)
    }

    /// `λ_p : X ⊗ T^p Y -> T^p(X ⊗ Y)`.
    pub fn lambda(&self, x: &ModuleComplex, y: &ModuleComplex, p: i64) -> Result<ModuleMap> {
        let src = self.tensor(x, &y.shift(p))?;
        let inner = self.tensor(x, y)?;
        let full = lambda_iso_through(&x.complex, &y.complex, p, self.koszul_lambda, self.truncation)?;
        let target = inner.module.shift(p);
        self.compress(&src, &inner, p, target, &full)
    }

    /// `ρ_p : T^p X ⊗ Y -> T^p(X ⊗ Y)`.
    pub fn rho(&self, x: &ModuleComplex, y: &ModuleComplex, p: i64) -> Result<ModuleMap> {
        let src = self.tensor(&x.shift(p), y)?;
        let inner = self.tensor(x, y)?;
        let full = rho_iso_through(&x.complex, &y.complex, p, self.truncation)?;
        let target = inner.module.shift(p);
        self.compress(&src, &inner, p, target, &full)
    }

    /// `l : e ⊗ X -> X`.
    pub fn left_unitor(&self, x: &ModuleComplex) -> Result<ModuleMap> {
        let src = self.tensor(&self.unit(), x)?;
        match self.kind {
            TensorKind::Field | TensorKind::Diagonal => {
                let map = left_unitor(&x.complex)?;
                let map = ChainMap::new(
                    src.module.complex.clone(),
                    x.complex.clone(),
                    0,
                    components_on(&map, &src.module.complex),
                )?;
                ModuleMap::new(src.module, x.clone(), map)
            }
            TensorKind::OverAlgebra => {
                let d = self.algebra.as_ref().expect("bimodule instance").dim();
                let full = ChainMap::new_unchecked(
                    src.full.complex().clone(),
                    x.complex.clone(),
                    0,
                    src.full
                        .complex()
                        .degrees()
                        .map(|n| {
                            let parts: Vec<Matrix> = (0..d).map(|i| self.bimodule_left(x, n, i)).collect();
                            let refs: Vec<&Matrix> = parts.iter().collect();
                            Matrix::hstack(self.field(), x.complex.dim(n), &refs)
                        })
                        .collect(),
                )?;
                self.compress_into(&src, x.clone(), &full)
            }
        }
    }

    /// `r : X ⊗ e -> X`.
    pub fn right_unitor(&self, x: &ModuleComplex) -> Result<ModuleMap> {
        let src = self.tensor(x, &self.unit())?;
        match self.kind {
            TensorKind::Field | TensorKind::Diagonal => {
                let map = right_unitor(&x.complex)?;
                let map = ChainMap::new(
                    src.module.complex.clone(),
                    x.complex.clone(),
                    0,
                    components_on(&map, &src.module.complex),
                )?;
                ModuleMap::new(src.module, x.clone(), map)
            }
            TensorKind::OverAlgebra => {
                let field = self.field();
                let d = self.algebra.as_ref().expect("bimodule instance").dim();
                let full = ChainMap::new_unchecked(
                    src.full.complex().clone(),
                    x.complex.clone(),
                    0,
                    src.full
                        .complex()
                        .degrees()
                        .map(|n| {
                            let dx = x.complex.dim(n);
                            let mut m = Matrix::zeros(field, dx, dx * d);
                            for j in 0..d {
                                let right = self.bimodule_right(x, n, j);
                                for s in 0..dx {
                                    m.set_column(s * d + j, &right.column(s));
                                }
                            }
                            m
                        })
                        .collect(),
                )?;
                self.compress_into(&src, x.clone(), &full)
            }
        }
    }

    fn compress_into(&self, src: &Tensor, target: ModuleComplex, full: &ChainMap) -> Result<ModuleMap> {
        let components = src
            .module
            .complex
            .degrees()
            .map(|n| match src.section(n) {
                Some(s) => full.component(n).mul(&s),
                None => full.component(n).into_owned(),
            })
            .collect();
        let map = ChainMap::new(src.module.complex.clone(), target.complex.clone(), 0, components)?;
        ModuleMap::new(src.module.clone(), target, map)
    }

    /// `a : (X ⊗ Y) ⊗ Z -> X ⊗ (Y ⊗ Z)`; the identity on bases.
    pub fn associator(&self, x: &ModuleComplex, y: &ModuleComplex, z: &ModuleComplex) -> Result<ModuleMap> {
        if self.kind == TensorKind::OverAlgebra {
            return Err(Error::WrongContext("associator is only realized over the field".into()));
        }
        let xy = self.tensor(x, y)?;
        let yz = self.tensor(y, z)?;
        let src = self.tensor(&xy.module, z)?;
        let tgt = self.tensor(x, &yz.module)?;
        let map = associator(&x.complex, &y.complex, &z.complex)?;
        let map = ChainMap::new(
            src.module.complex.clone(),
            tgt.module.complex.clone(),
            0,
            components_on(&map, &src.module.complex),
        )?;
        ModuleMap::new(src.module, tgt.module, map)
    }
}

fn components_on(map: &ChainMap, source: &Complex) -> Vec<Matrix> {
    source.degrees().map(|n| map.component(n).into_owned()).collect()
}

/// One evaluated identity of the axiom suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub sample: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Whether every check with this name passed (vacuously true if none ran).
    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().filter(|c| c.name == name).all(|c| c.passed)
    }

    fn push(&mut self, name: &str, sample: usize, p: Option<i64>, q: Option<i64>, outcome: Result<bool>) {
        self.checks.push(AxiomCheck {
            name: name.to_string(),
            sample,
            p,
            q,
            passed: outcome.unwrap_or(false),
        });
    }
}

/// Largest total dimension of `X ⊗ Y ⊗ X ⊗ Y` on which the pentagon is
/// evaluated; larger samples skip it.
pub const PENTAGON_BUDGET: usize = 1296;

/// Exponent range used for the iterated relations.
pub const RELATION_RANGE: std::ops::RangeInclusive<i64> = -2..=2;

/// Evaluates the unit squares, the anticommuting square, the iterated
/// relations for `p, q ∈ [-2, 2]`, the inverse and iterate definitions of
/// `λ_p`, `ρ_p`, naturality, and the pentagon and triangle where available
/// (the pentagon only within [`PENTAGON_BUDGET`]).
pub fn check_axioms(instance: &Instance, samples: &[(ModuleComplex, ModuleComplex)], seed: u64) -> AxiomReport {
    let mut report = AxiomReport::default();
    if samples.is_empty() {
        return report;
    }
    let e = instance.unit();
    let field = instance.field();
    let mut rng = StdRng::seed_from_u64(seed);
    report.push("unit-coherence", 0, None, None, unit_coherence(instance, &e));
    for (s, (x, y)) in samples.iter().enumerate() {
        report.push("unit-square-left", s, None, None, (|| {
            let lhs = instance.left_unitor(&x.shift(1))?;
            let rhs = instance.left_unitor(x)?.shift(1).compose(&instance.lambda(&e, x, 1)?)?;
            Ok(lhs.equals(&rhs))
        })());
        report.push("unit-square-right", s, None, None, (|| {
            let lhs = instance.right_unitor(&x.shift(1))?;
            let rhs = instance.right_unitor(x)?.shift(1).compose(&instance.rho(x, &e, 1)?)?;
            Ok(lhs.equals(&rhs))
        })());
        report.push("anticommuting-square", s, None, None, interchange(instance, x, y, 1, 1));
        for p in RELATION_RANGE {
            report.push("left-unit-relation", s, Some(p), None, (|| {
                let lhs = instance.left_unitor(&y.shift(p))?;
                let rhs = instance.left_unitor(y)?.shift(p).compose(&instance.lambda(&e, y, p)?)?;
                Ok(lhs.equals(&rhs))
            })());
            report.push("right-unit-relation", s, Some(p), None, (|| {
                let lhs = instance.right_unitor(&x.shift(p))?;
                let rhs = instance.right_unitor(x)?.shift(p).compose(&instance.rho(x, &e, p)?)?;
                Ok(lhs.equals(&rhs))
            })());
            for q in RELATION_RANGE {
                report.push("sign-relation", s, Some(p), Some(q), interchange(instance, x, y, p, q));
            }
        }
        for p in 0..=2 {
            report.push("lambda-iterate", s, Some(p), None, (|| {
                let lhs = instance.lambda(x, y, p + 1)?;
                let rhs = instance.lambda(x, y, 1)?.shift(p).compose(&instance.lambda(x, &y.shift(1), p)?)?;
                Ok(lhs.equals(&rhs))
            })());
            report.push("rho-iterate", s, Some(p), None, (|| {
                let lhs = instance.rho(x, y, p + 1)?;
                let rhs = instance.rho(x, y, 1)?.shift(p).compose(&instance.rho(&x.shift(1), y, p)?)?;
                Ok(lhs.equals(&rhs))
            })());
        }
        for p in 1..=2 {
            report.push("lambda-inverse", s, Some(p), None, (|| {
                let there = instance.lambda(x, &y.shift(-p), p)?;
                let back = instance.lambda(x, y, -p)?.shift(p);
                Ok(back.compose(&there)?.equals(&ModuleMap::identity(there.source())))
            })());
            report.push("rho-inverse", s, Some(p), None, (|| {
                let there = instance.rho(&x.shift(-p), y, p)?;
                let back = instance.rho(x, y, -p)?.shift(p);
                Ok(back.compose(&there)?.equals(&ModuleMap::identity(there.source())))
            })());
        }
        if instance.kind() == TensorKind::Field {
            for p in RELATION_RANGE {
                report.push("lambda-natural", s, Some(p), None, (|| {
                    let f = random_endomorphism(x, &mut rng);
                    let g = random_endomorphism(y, &mut rng);
                    let lhs = instance.lambda(x, y, p)?.compose(&instance.tensor_map(&f, &g.shift(p))?)?;
                    let rhs = instance.tensor_map(&f, &g)?.shift(p).compose(&instance.lambda(x, y, p)?)?;
                    Ok(lhs.equals(&rhs))
                })());
            }
        }
        if instance.kind() != TensorKind::OverAlgebra {
            report.push("triangle", s, None, None, triangle(instance, x, y, &e));
            let fourfold = (x.complex.total_dim() * y.complex.total_dim()).pow(2);
            if fourfold <= PENTAGON_BUDGET {
                report.push("pentagon", s, None, None, pentagon(instance, x, y));
            }
        }
    }
    let _ = field;
    report
}

fn random_endomorphism(x: &ModuleComplex, rng: &mut impl RngExt) -> ModuleMap {
    let map = ChainMap::random(x.complex.clone(), x.complex.clone(), 0, rng);
    ModuleMap {
        source: x.clone(),
        target: x.clone(),
        map,
    }
}

/// `T^p λ_q ∘ ρ_p = (-1)^{pq} T^q ρ_p ∘ λ_q` on `T^p X ⊗ T^q Y`.
fn interchange(instance: &Instance, x: &ModuleComplex, y: &ModuleComplex, p: i64, q: i64) -> Result<bool> {
    let lhs = instance.lambda(x, y, q)?.shift(p).compose(&instance.rho(x, &y.shift(q), p)?)?;
    let rhs = instance.rho(x, y, p)?.shift(q).compose(&instance.lambda(&x.shift(p), y, q)?)?;
    Ok(lhs.equals(&rhs.scaled(&instance.field().sign(p * q))))
}

fn unit_coherence(instance: &Instance, e: &ModuleComplex) -> Result<bool> {
    Ok(instance.left_unitor(e)?.equals(&instance.right_unitor(e)?))
}

/// `(1 ⊗ l) ∘ a = r ⊗ 1 : (X ⊗ e) ⊗ Y -> X ⊗ Y`.
fn triangle(instance: &Instance, x: &ModuleComplex, y: &ModuleComplex, e: &ModuleComplex) -> Result<bool> {
    let xe = instance.tensor(x, e)?;
    let a = instance.associator(x, e, y)?;
    let lhs = instance
        .tensor_map(&ModuleMap::identity(x), &instance.left_unitor(y)?)?
        .compose(&a)?;
    let rhs = instance.tensor_map(&instance.right_unitor(x)?, &ModuleMap::identity(y))?;
    let _ = xe;
    Ok(lhs.equals(&rhs))
}

/// Mac Lane's pentagon on `(X, Y, X, Y)`.
fn pentagon(instance: &Instance, x: &ModuleComplex, y: &ModuleComplex) -> Result<bool> {
    let (w, z) = (x, y);
    let id = ModuleMap::identity;
    let wx = instance.tensor(w, y)?.module;
    let xz = instance.tensor(y, x)?.module;
    let yz = instance.tensor(x, z)?.module;
    // ((W X) Y) Z -> (W X)(Y Z) -> W (X (Y Z))
    let top = instance
        .associator(w, y, &yz)?
        .compose(&instance.associator(&wx, x, z)?)?;
    // ((W X) Y) Z -> (W (X Y)) Z -> W ((X Y) Z) -> W (X (Y Z))
    let first = instance.tensor_map(&instance.associator(w, y, x)?, &id(z))?;
    let second = instance.associator(w, &xz, z)?;
    let third = instance.tensor_map(&id(w), &instance.associator(y, x, z)?)?;
    let bottom = third.compose(&second.compose(&first)?)?;
    Ok(top.equals(&bottom))
}

/// Random sample pairs of complexes of vector spaces.
pub fn random_samples(field: Field, count: usize, max_dim: usize, max_len: usize, seed: u64) -> Vec<(ModuleComplex, ModuleComplex)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let one = |rng: &mut StdRng| {
                let len = rng.random_range(1..=max_len);
                let lo = rng.random_range(-2..=1);
                ModuleComplex::vector_space(Complex::random(field, rng, lo, len, max_dim))
            };
            let x = one(&mut rng);
            let y = one(&mut rng);
            (x, y)
        })
        .collect()
}

/// An element of `⊕_p hom(e, T^p e)` realized as `P -> T^p P`.
#[derive(Clone, Debug)]
pub struct GradedEndElement {
    instance: u64,
    degree: i64,
    map: ModuleMap,
}

impl GradedEndElement {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn map(&self) -> &ModuleMap {
        &self.map
    }
}

/// The unit object replaced by a resolution, with `Δ ≃ r^{-1}` and
/// `l_P = l ∘ (ε ⊗ 1)`.
pub struct ResolvedUnit {
    instance: Instance,
    /// `instance` with tensors cut off above the top of the resolution.
    work: Instance,
    resolution: Arc<FreeResolution>,
    p: ModuleComplex,
    diagonal: ModuleMap,
    left: ModuleMap,
}

impl ResolvedUnit {
    pub fn new(instance: Instance, resolution: Arc<FreeResolution>) -> Result<ResolvedUnit> {
        if **resolution.ring() != **instance.ring() {
            return Err(Error::InstanceMismatch);
        }
        let work = instance.truncated_at(resolution.top() as i64);
        let p = ModuleComplex::from_resolution(&resolution);
        let e = work.unit();
        let eps = ChainMap::new(
            p.complex.clone(),
            e.complex.clone(),
            0,
            p.complex
                .degrees()
                .map(|n| {
                    if n == 0 {
                        resolution.expanded_d(0).clone()
                    } else {
                        Matrix::zeros(instance.field(), 0, p.complex.dim(n))
                    }
                })
                .collect(),
        )?;
        let eps = ModuleMap::new(p.clone(), e, eps)?;
        let left = work
            .left_unitor(&p)?
            .compose(&work.tensor_map(&eps, &ModuleMap::identity(&p))?)?;
        let pp = work.tensor(&p, &p)?;
        let diagonal = lift_diagonal(&resolution, &p, &pp, &left)?;
        Ok(ResolvedUnit {
            instance,
            work,
            resolution,
            p,
            diagonal,
            left,
        })
    }

    /// The instance matching a cohomology context: diagonal `kG`-modules for
    /// groups, bimodules over `A` for Hochschild cohomology.
    pub fn for_context(ctx: &CohomologyContext, koszul_lambda: bool) -> Result<ResolvedUnit> {
        let instance = match ctx.kind() {
            ContextKind::Group(_) => Instance::group_modules(ctx.resolution().ring().clone()),
            ContextKind::Hochschild(a) => Instance::bimodules(a),
            ContextKind::Other => {
                return Err(Error::WrongContext("the resolved unit needs a bar resolution context".into()))
            }
        };
        let instance = if koszul_lambda { instance } else { instance.without_lambda_sign() };
        ResolvedUnit::new(instance, ctx.resolution().clone())
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn complex(&self) -> &ModuleComplex {
        &self.p
    }

    pub fn diagonal(&self) -> &ModuleMap {
        &self.diagonal
    }

    pub fn left(&self) -> &ModuleMap {
        &self.left
    }

    fn wrap(&self, degree: i64, map: ModuleMap) -> GradedEndElement {
        GradedEndElement {
            instance: self.instance.id,
            degree,
            map,
        }
    }

    fn check(&self, f: &GradedEndElement) -> Result<()> {
        if f.instance != self.instance.id {
            return Err(Error::InstanceMismatch);
        }
        Ok(())
    }

    pub fn identity(&self) -> GradedEndElement {
        self.wrap(0, ModuleMap::identity(&self.p))
    }

    /// The chain map `P -> T^q P` lifting a class.
    pub fn element(&self, ctx: &CohomologyContext, class: &CohomologyClass) -> Result<GradedEndElement> {
        if !Arc::ptr_eq(ctx.resolution(), &self.resolution) {
            return Err(Error::InstanceMismatch);
        }
        let q = class.degree();
        let lift = ctx.lift_class(class, self.resolution.top())?;
        let map = lift.to_chain_map(&self.resolution)?;
        let target = self.p.shift(q as i64);
        Ok(self.wrap(q as i64, ModuleMap::new(self.p.clone(), target, map)?))
    }

    /// `f · g = T^q f ∘ g`.
    pub fn dot(&self, f: &GradedEndElement, g: &GradedEndElement) -> Result<GradedEndElement> {
        self.check(f)?;
        self.check(g)?;
        let map = f.map.shift(g.degree).compose(&g.map)?;
        Ok(self.wrap(f.degree + g.degree, map))
    }

    /// `T^{p+q} l ∘ T^p λ_q ∘ ρ_p ∘ (f ⊗ g) ∘ r^{-1}`.
    pub fn star(&self, f: &GradedEndElement, g: &GradedEndElement) -> Result<GradedEndElement> {
        self.check(f)?;
        self.check(g)?;
        let (p, q) = (f.degree, g.degree);
        let inst = &self.work;
        let fg = inst.tensor_map(&f.map, &g.map)?;
        let rho = inst.rho(&self.p, &self.p.shift(q), p)?;
        let lambda = inst.lambda(&self.p, &self.p, q)?.shift(p);
        let l = self.left.shift(p + q);
        let map = l.compose(&lambda.compose(&rho.compose(&fg.compose(&self.diagonal)?)?)?)?;
        Ok(self.wrap(p + q, map))
    }

    /// `T^{p+q} l ∘ T^q ρ_p ∘ λ_q ∘ (f ⊗ g) ∘ r^{-1}`: the route through the
    /// other side of the anticommuting square.
    pub fn star_lambda_route(&self, f: &GradedEndElement, g: &GradedEndElement) -> Result<GradedEndElement> {
        self.check(f)?;
        self.check(g)?;
        let (p, q) = (f.degree, g.degree);
        let inst = &self.work;
        let fg = inst.tensor_map(&f.map, &g.map)?;
        let lambda = inst.lambda(&self.p.shift(p), &self.p, q)?;
        let rho = inst.rho(&self.p, &self.p, p)?.shift(q);
        let l = self.left.shift(p + q);
        let map = l.compose(&rho.compose(&lambda.compose(&fg.compose(&self.diagonal)?)?)?)?;
        Ok(self.wrap(p + q, map))
    }

    pub fn scaled(&self, f: &GradedEndElement, c: &crate::linalg::Scalar) -> GradedEndElement {
        self.wrap(f.degree, f.map.scaled(c))
    }

    /// `ε ∘ f_p` on generators of `P_p`: the cocycle of an element of degree `p`.
    pub fn cocycle(&self, f: &GradedEndElement) -> Result<Vector> {
        self.check(f)?;
        let p = usize::try_from(f.degree).map_err(|_| Error::WrongContext("negative degree".into()))?;
        let res = &self.resolution;
        let r = res.ring().dim();
        let m = res.module().dim();
        let eps = res.expanded_d(0);
        let comp = f.map.map.component(p as i64);
        let mut out = Vector::zeros(res.field(), res.cochain_dim(p));
        for w in 0..res.rank(p) {
            let mut x = Vector::zeros(res.field(), res.dim(p));
            x.set_slice(w * r, res.ring().unit());
            out.set_slice(w * m, &eps.mul_vec(&comp.mul_vec(&x)));
        }
        Ok(out)
    }

    /// Whether `a - b = d s + s d` for a ring-linear `s` on the truncated resolution.
    ///
    /// Equations are imposed in the source degrees where every term of the
    /// homotopy exists, `n <= min(top, top + k - 1)`.
    pub fn homotopic(&self, a: &GradedEndElement, b: &GradedEndElement) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        if a.degree != b.degree {
            return Err(Error::WrongContext("elements of different degrees".into()));
        }
        let res = &self.resolution;
        let field = res.field();
        let r = res.ring().dim();
        let k = a.degree;
        let top = res.top() as i64;
        let diff = a.map.map.sub(&b.map.map)?;
        // unknown s_n(w) ∈ P_{n+1-k}
        let tdim = |m: i64| if m < 0 || m > top { 0 } else { res.dim(m as usize) };
        let mut offsets = std::collections::BTreeMap::new();
        let mut unknowns = 0;
        for n in 0..=top {
            let per = tdim(n + 1 - k);
            if per > 0 {
                offsets.insert(n, unknowns);
                unknowns += per * res.rank(n as usize);
            }
        }
        let last = top.min(top + k - 1);
        let mut rows = 0;
        let mut row_offsets = std::collections::BTreeMap::new();
        for n in 0..=last {
            let per = tdim(n - k);
            if per > 0 {
                row_offsets.insert(n, rows);
                rows += per * res.rank(n as usize);
            }
        }
        let mut system = Matrix::zeros(field, rows, unknowns);
        let mut rhs = Vector::zeros(field, rows);
        let sign = field.sign(k);
        for (&n, &row0) in &row_offsets {
            let nu = n as usize;
            let per = tdim(n - k);
            let comp = diff.component(n);
            let d_target = if n + 1 - k >= 1 && n + 1 - k <= top {
                Some(res.expanded_d((n + 1 - k) as usize).scaled(&sign))
            } else {
                None
            };
            for w in 0..res.rank(nu) {
                let base = row0 + w * per;
                let mut x = Vector::zeros(field, res.dim(nu));
                x.set_slice(w * r, res.ring().unit());
                rhs.set_slice(base, &comp.mul_vec(&x));
                if let (Some(d), Some(&off)) = (&d_target, offsets.get(&n)) {
                    let cols = d.cols();
                    system.set_block(base, off + w * cols, d);
                }
                if n >= 1 {
                    if let Some(&off) = offsets.get(&(n - 1)) {
                        for (u, c) in res.d_terms(nu, w) {
                            let left = res.ring().left_matrix(c);
                            for g in 0..per / r {
                                let col = off + u * per + g * r;
                                for i in 0..r {
                                    for j in 0..r {
                                        let v = left.get(i, j);
                                        if !v.is_zero() {
                                            system.add_at(base + g * r + i, col + j, &v);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(system.solve(&rhs).is_some())
    }
}

/// `Δ : P -> P ⊗ P` over the identity of the augmentation target, lifted
/// degree by degree through ring-linear solves.
fn lift_diagonal(res: &FreeResolution, p: &ModuleComplex, pp: &Tensor, left: &ModuleMap) -> Result<ModuleMap> {
    let field = res.field();
    let r = res.ring().dim();
    let target = pp.module.clone();
    let tc = target.complex.clone();
    let aug = res.expanded_d(0).mul(&left.map.component(0));
    let mut images: Vec<Vec<Vector>> = Vec::new();
    let mut components = Vec::new();
    for n in 0..=res.top() {
        let ni = n as i64;
        let solver = if n == 0 { Solver::new(&aug) } else { Solver::new(&tc.d(ni)) };
        let mut stage = Vec::with_capacity(res.rank(n));
        for w in 0..res.rank(n) {
            let y = if n == 0 {
                res.augmentation_of(w).clone()
            } else {
                let mut y = Vector::zeros(field, tc.dim(ni - 1));
                for (u, c) in res.d_terms(n, w) {
                    y.add_scaled(&field.one(), &target.act(ni - 1, c).mul_vec(&images[n - 1][*u]));
                }
                y
            };
            stage.push(solver.solve(&y).ok_or(Error::LiftFailed { degree: n })?);
        }
        let mut m = Matrix::zeros(field, tc.dim(ni), res.dim(n));
        for (w, x) in stage.iter().enumerate() {
            for b in 0..r {
                m.set_column(w * r + b, &target.action(ni, b).mul_vec(x));
            }
        }
        components.push(m);
        images.push(stage);
    }
    let map = ChainMap::new(p.complex.clone(), tc, 0, components)?;
    ModuleMap::new(p.clone(), target, map)
}

/// Outcome of the two proof diagrams for one pair of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub p: usize,
    pub i: usize,
    pub q: usize,
    pub j: usize,
    /// `f ★ g ≃ g · f`
    pub star_is_swapped_dot: bool,
    /// `f ★ g ≃ (-1)^{pq} f · g`
    pub star_is_signed_dot: bool,
    /// `f ★ g = (-1)^{pq}` times the λ-route composite, exactly
    pub star_is_signed_lambda_route: bool,
    /// λ-route composite `≃ f · g`
    pub lambda_route_is_dot: bool,
}

impl TheoremCheck {
    pub fn passed(&self) -> bool {
        self.star_is_swapped_dot && self.star_is_signed_dot && self.star_is_signed_lambda_route && self.lambda_route_is_dot
    }

    /// The identities that carry the `(-1)^{pq}` sign.
    pub fn sign_identities_passed(&self) -> bool {
        self.star_is_signed_dot && self.star_is_signed_lambda_route && self.lambda_route_is_dot
    }
}

impl ResolvedUnit {
    /// Evaluates both proof diagrams on a pair of classes.
    pub fn check_theorem(&self, ctx: &CohomologyContext, f: &CohomologyClass, g: &CohomologyClass) -> Result<TheoremCheck> {
        let ef = self.element(ctx, f)?;
        let eg = self.element(ctx, g)?;
        let sign = ctx.field().sign((f.degree() * g.degree()) as i64);
        let star = self.star(&ef, &eg)?;
        let route = self.star_lambda_route(&ef, &eg)?;
        let fg = self.dot(&ef, &eg)?;
        let gf = self.dot(&eg, &ef)?;
        Ok(TheoremCheck {
            p: f.degree(),
            i: 0,
            q: g.degree(),
            j: 0,
            star_is_swapped_dot: self.homotopic(&star, &gf)?,
            star_is_signed_dot: self.homotopic(&star, &self.scaled(&fg, &sign))?,
            star_is_signed_lambda_route: star.map.equals(&route.map.scaled(&sign)),
            lambda_route_is_dot: self.homotopic(&route, &fg)?,
        })
    }

    /// All basis pairs with `p + q <= max_degree`.
    pub fn check_theorem_all(&self, ctx: &CohomologyContext, max_degree: usize) -> Result<Vec<TheoremCheck>> {
        let mut out = Vec::new();
        for p in 0..=max_degree {
            for q in 0..=max_degree - p {
                for i in 0..ctx.dim(p) {
                    for j in 0..ctx.dim(q) {
                        let mut c = self.check_theorem(ctx, &ctx.basis_class(p, i), &ctx.basis_class(q, j))?;
                        c.i = i;
                        c.j = j;
                        out.push(c);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The multiplication table of `⊕_p hom(e, T^p e)` under `·`, through degree `N`.
pub fn graded_end_ring(unit: &ResolvedUnit, ctx: &CohomologyContext, max_degree: usize) -> Result<Vec<ProductEntry>> {
    let mut elements = Vec::new();
    for n in 0..=max_degree {
        let row = ctx
            .basis(n)
            .iter()
            .map(|c| unit.element(ctx, c))
            .collect::<Result<Vec<_>>>()?;
        elements.push(row);
    }
    let mut out = Vec::new();
    for p in 0..=max_degree {
        for q in 0..=max_degree - p {
            for (i, f) in elements[p].iter().enumerate() {
                for (j, g) in elements[q].iter().enumerate() {
                    let prod = unit.dot(f, g)?;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;
    use crate::cohomology::ProductKind;

    #[test]
    fn axioms_hold_for_vector_spaces() {
        for field in [Field::Prime(2), Field::Prime(3), Field::Rational] {
            let inst = Instance::vector_spaces(field);
            let samples = random_samples(field, 3, 2, 3, 17);
            let report = check_axioms(&inst, &samples, 5);
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{field}: {failures:?}");
        }
    }

    #[test]
    fn empty_samples_give_empty_report() {
        let report = check_axioms(&Instance::vector_spaces(Field::Prime(5)), &[], 0);
        assert!(report.checks.is_empty());
    }

    #[test]
    fn dropping_the_lambda_sign_breaks_only_sign_checks() {
        let field = Field::Prime(3);
        let inst = Instance::vector_spaces(field).without_lambda_sign();
        let samples = random_samples(field, 4, 2, 3, 23);
        let report = check_axioms(&inst, &samples, 5);
        assert!(!report.passed("anticommuting-square"));
        assert!(!report.passed("sign-relation"));
        for name in ["unit-square-left", "unit-square-right", "left-unit-relation", "pentagon", "triangle"] {
            assert!(report.passed(name), "{name}");
        }
    }

    #[test]
    fn axioms_hold_for_resolved_units() {
        let ctx = CohomologyContext::group(&GroupTable::named("cyclic:2").unwrap(), Field::Prime(3), 1).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        let p = unit.complex().clone();
        let report = check_axioms(unit.instance(), &[(p.clone(), p)], 1);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());

        let a = AlgebraPresentation::dual_numbers(Field::Prime(3));
        let ctx = CohomologyContext::hochschild(&a, 1).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        let p = unit.complex().clone();
        let report = check_axioms(unit.instance(), &[(p.clone(), p)], 1);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn tensor_over_algebra_has_expected_dimensions() {
        // P_a ⊗_A P_b ≅ A ⊗ Ā^a ⊗ A ⊗ Ā^b ⊗ A for the two-sided bar resolution
        let a = AlgebraPresentation::dual_numbers(Field::Prime(3));
        let res = FreeResolution::two_sided_bar(&a, 2).unwrap();
        let inst = Instance::bimodules(&a);
        let p = ModuleComplex::from_resolution(&res);
        let t = inst.tensor(&p, &p).unwrap();
        for n in 0..=4 {
            let blocks = (0..=n).filter(|a| *a <= 2 && n - a <= 2).count();
            assert_eq!(t.module().complex().dim(n), 8 * blocks);
        }
    }

    #[test]
    fn star_examples() {
        let ctx = CohomologyContext::group(&GroupTable::named("cyclic:2").unwrap(), Field::Prime(2), 3).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        let one = unit.identity();
        let s = unit.star(&one, &one).unwrap();
        assert!(unit.homotopic(&s, &one).unwrap());
        let x = unit.element(&ctx, &ctx.basis_class(1, 0)).unwrap();
        assert!(unit.homotopic(&unit.dot(&one, &x).unwrap(), &x).unwrap());
        assert!(unit.homotopic(&unit.dot(&x, &one).unwrap(), &x).unwrap());
        let xx = unit.dot(&x, &x).unwrap();
        let zero = unit.scaled(&xx, &Field::Prime(2).zero());
        assert!(!unit.homotopic(&xx, &zero).unwrap());
        for check in unit.check_theorem_all(&ctx, 3).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn degree_zero_star_is_composition() {
        let a = AlgebraPresentation::dual_numbers(Field::Prime(3));
        let ctx = CohomologyContext::hochschild(&a, 2).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        let f = unit.element(&ctx, &ctx.basis_class(0, 0)).unwrap();
        let g = unit.element(&ctx, &ctx.basis_class(0, 1)).unwrap();
        let s = unit.star(&f, &g).unwrap();
        assert!(unit.homotopic(&s, &unit.dot(&g, &f).unwrap()).unwrap());
        for check in unit.check_theorem_all(&ctx, 2).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn homotopy_agrees_with_cocycle_classes() {
        let ctx = CohomologyContext::group(&GroupTable::named("cyclic:3").unwrap(), Field::Prime(3), 3).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        for n in 0..=3 {
            let c = ctx.basis_class(n, 0);
            let e = unit.element(&ctx, &c).unwrap();
            assert_eq!(unit.cocycle(&e).unwrap(), *c.rep());
            let zero = unit.scaled(&e, &ctx.field().zero());
            assert!(!unit.homotopic(&e, &zero).unwrap());
        }
    }

    #[test]
    fn dot_table_matches_yoneda_table() {
        let ctx = CohomologyContext::group(&GroupTable::named("cyclic:3").unwrap(), Field::Prime(3), 4).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, true).unwrap();
        assert_eq!(graded_end_ring(&unit, &ctx, 4).unwrap(), ctx.product_table(ProductKind::Yoneda).unwrap());
    }

    #[test]
    fn mutated_lambda_is_caught_by_the_lambda_route() {
        let ctx = CohomologyContext::group(&GroupTable::named("cyclic:3").unwrap(), Field::Prime(3), 2).unwrap();
        let unit = ResolvedUnit::for_context(&ctx, false).unwrap();
        let x = ctx.basis_class(1, 0);
        let check = unit.check_theorem(&ctx, &x, &x).unwrap();
        assert!(!check.sign_identities_passed(), "{check:?}");
    }
}
