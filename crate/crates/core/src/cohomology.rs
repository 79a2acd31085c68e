//! Ext groups of a resolution and their products.
//!
//! Classes are cocycles in `Hom_R(P_n, M)`. The Yoneda product lifts the
//! right factor to a chain map and precomposes; the cup products are the
//! explicit cochain formulas on bar resolutions. Both are computed
//! independently so that they can be compared.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::RngExt;

use crate::algebra::{AlgebraPresentation, GroupTable};
use crate::complex::random_scalar;
use crate::error::{Error, Result};
use crate::linalg::{subquotient_representatives, Field, Matrix, Scalar, Solver, Vector};
use crate::resolution::{FreeResolution, LiftedMap, ResolutionKind};

static NEXT_CONTEXT: AtomicU64 = AtomicU64::new(1);

/// A cohomology class given by a representative cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    context: u64,
    degree: usize,
    rep: Vector,
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rep(&self) -> &Vector {
        &self.rep
    }
}

#[derive(Clone, Debug)]
pub enum ContextKind {
    /// `Ext_{kG}(k, k)` on the bar resolution.
    Group(Arc<GroupTable>),
    /// `Ext_{A^e}(A, A)` on the two-sided bar resolution.
    Hochschild(Arc<AlgebraPresentation>),
    /// Any other resolution; only Yoneda products are available.
    Other,
}

/// Products a caller may request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductKind {
    Yoneda,
    Cup,
}

/// Ext of a resolution through degree `N`, with cached class bases.
pub struct CohomologyContext {
    id: u64,
    kind: ContextKind,
    resolution: Arc<FreeResolution>,
    max_degree: usize,
    coboundaries: Vec<Matrix>,
    reps: Vec<Vec<Vector>>,
    coordinate_solvers: Vec<Solver>,
    basis_lifts: Vec<Vec<OnceLock<LiftedMap>>>,
}

impl CohomologyContext {
    /// Requires the resolution to reach degree `N + 1`.
    pub fn new(kind: ContextKind, resolution: Arc<FreeResolution>, max_degree: usize) -> Result<CohomologyContext> {
        if resolution.top() < max_degree + 1 {
            return Err(Error::DegreeOverflow {
                needed: max_degree + 1,
                max: resolution.top(),
            });
        }
        let field = resolution.field();
        let coboundaries = (0..=max_degree)
            .map(|n| resolution.coboundary(n))
            .collect::<Result<Vec<_>>>()?;
        let mut reps = Vec::new();
        let mut coordinate_solvers = Vec::new();
        for n in 0..=max_degree {
            let dim = resolution.cochain_dim(n);
            let ker = coboundaries[n].kernel_basis();
            let im = if n == 0 { Vec::new() } else { coboundaries[n - 1].columns() };
            let r = subquotient_representatives(field, dim, &ker, &im)?;
            let basis = Matrix::from_columns(field, dim, &r);
            let system = if n == 0 {
                basis
            } else {
                Matrix::hstack(field, dim, &[&coboundaries[n - 1], &basis])
            };
            coordinate_solvers.push(Solver::new(&system));
            reps.push(r);
        }
        let basis_lifts = reps
            .iter()
            .map(|r| r.iter().map(|_| OnceLock::new()).collect())
            .collect();
        Ok(CohomologyContext {
            id: NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed),
            kind,
            resolution,
            max_degree,
            coboundaries,
            reps,
            coordinate_solvers,
            basis_lifts,
        })
    }

    /// `H*(G; k)` through degree `N`.
    pub fn group(group: &GroupTable, field: Field, max_degree: usize) -> Result<CohomologyContext> {
        let res = FreeResolution::group(group, field, max_degree + 1)?;
        CohomologyContext::new(ContextKind::Group(Arc::new(group.clone())), Arc::new(res), max_degree)
    }

    /// `HH*(A)` through degree `N`.
    pub fn hochschild(algebra: &AlgebraPresentation, max_degree: usize) -> Result<CohomologyContext> {
        let res = FreeResolution::two_sided_bar(algebra, max_degree + 1)?;
        CohomologyContext::new(
            ContextKind::Hochschild(Arc::new(algebra.clone())),
            Arc::new(res),
            max_degree,
        )
    }

    /// `H*(Z/n; k)` from the periodic resolution.
    pub fn periodic(n: usize, field: Field, max_degree: usize) -> Result<CohomologyContext> {
        let res = FreeResolution::periodic_cyclic(n, field, max_degree + 1)?;
        CohomologyContext::new(ContextKind::Other, Arc::new(res), max_degree)
    }

    pub fn kind(&self) -> &ContextKind {
        &self.kind
    }

    pub fn field(&self) -> Field {
        self.resolution.field()
    }

    pub fn resolution(&self) -> &Arc<FreeResolution> {
        &self.resolution
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.reps.get(n).map_or(0, Vec::len)
    }

    /// `δ^n : C^n -> C^{n+1}`.
    pub fn coboundary(&self, n: usize) -> &Matrix {
        &self.coboundaries[n]
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            Err(Error::DegreeOverflow {
                needed: n,
                max: self.max_degree,
            })
        } else {
            Ok(())
        }
    }

    fn check_class(&self, c: &CohomologyClass) -> Result<()> {
        if c.context != self.id {
            return Err(Error::InstanceMismatch);
        }
        Ok(())
    }

    /// The `i`-th basis class of `H^n`.
    pub fn basis_class(&self, n: usize, i: usize) -> CohomologyClass {
        CohomologyClass {
            context: self.id,
            degree: n,
            rep: self.reps[n][i].clone(),
        }
    }

    pub fn basis(&self, n: usize) -> Vec<CohomologyClass> {
        (0..self.dim(n)).map(|i| self.basis_class(n, i)).collect()
    }

    /// Wraps a cocycle; fails with "not a cocycle" otherwise.
    pub fn class(&self, n: usize, cocycle: Vector) -> Result<CohomologyClass> {
        self.check_degree(n)?;
        if cocycle.len() != self.resolution.cochain_dim(n) {
            return Err(Error::Shape(format!("cochain of length {} in degree {n}", cocycle.len())));
        }
        if !self.coboundaries[n].mul_vec(&cocycle).is_zero() {
            return Err(Error::NotACocycle { degree: n });
        }
        Ok(CohomologyClass {
            context: self.id,
            degree: n,
            rep: cocycle,
        })
    }

    /// `Σ c_i · basis_i`.
    pub fn combination(&self, n: usize, coords: &Vector) -> CohomologyClass {
        let mut rep = Vector::zeros(self.field(), self.resolution.cochain_dim(n));
        for i in coords.support() {
            rep.add_scaled(&coords.get(i), &self.reps[n][i]);
        }
        CohomologyClass {
            context: self.id,
            degree: n,
            rep,
        }
    }

    /// Coordinates of a class in the basis of `H^n`.
    pub fn coordinates(&self, c: &CohomologyClass) -> Result<Vector> {
        self.check_class(c)?;
        let n = c.degree;
        let x = self.coordinate_solvers[n]
            .solve(&c.rep)
            .ok_or(Error::NotACocycle { degree: n })?;
        let skip = if n == 0 { 0 } else { self.coboundaries[n - 1].cols() };
        Ok(x.slice(skip, self.dim(n)))
    }

    /// Whether `a - b` is a coboundary.
    pub fn classes_equal(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<bool> {
        self.check_class(a)?;
        self.check_class(b)?;
        if a.degree != b.degree {
            return Err(Error::WrongContext("classes of different degrees".into()));
        }
        Ok(self.coordinates(a)? == self.coordinates(b)?)
    }

    pub fn is_zero(&self, c: &CohomologyClass) -> Result<bool> {
        Ok(self.coordinates(c)?.is_zero())
    }

    pub fn scaled(&self, c: &CohomologyClass, s: &Scalar) -> CohomologyClass {
        CohomologyClass {
            context: c.context,
            degree: c.degree,
            rep: c.rep.scaled(s),
        }
    }

    pub fn add(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
        self.check_class(a)?;
        self.check_class(b)?;
        if a.degree != b.degree {
            return Err(Error::WrongContext("classes of different degrees".into()));
        }
        Ok(CohomologyClass {
            context: self.id,
            degree: a.degree,
            rep: &a.rep + &b.rep,
        })
    }

    /// The same class with a random coboundary added to its representative.
    pub fn perturbed(&self, c: &CohomologyClass, rng: &mut impl RngExt) -> CohomologyClass {
        let mut rep = c.rep.clone();
        if c.degree > 0 {
            let delta = &self.coboundaries[c.degree - 1];
            for j in 0..delta.cols() {
                let s = random_scalar(self.field(), rng);
                if !s.is_zero() {
                    rep.add_scaled(&s, &delta.column(j));
                }
            }
        }
        CohomologyClass {
            context: c.context,
            degree: c.degree,
            rep,
        }
    }

    /// A lift of `g` through source degree `through`, cached for basis classes.
    fn lift(&self, g: &CohomologyClass, through: usize) -> Result<std::borrow::Cow<'_, LiftedMap>> {
        if let Some(i) = self.reps[g.degree].iter().position(|r| *r == g.rep) {
            let cell = &self.basis_lifts[g.degree][i];
            if let Some(l) = cell.get() {
                return Ok(std::borrow::Cow::Borrowed(l));
            }
            let l = self.resolution.lift_cocycle(&g.rep, g.degree, self.max_degree)?;
            return Ok(std::borrow::Cow::Borrowed(cell.get_or_init(|| l)));
        }
        Ok(std::borrow::Cow::Owned(
            self.resolution.lift_cocycle(&g.rep, g.degree, through)?,
        ))
    }

    /// The lift of a class to a chain map `P -> T^q P` on generators.
    pub fn lift_class(&self, g: &CohomologyClass, through: usize) -> Result<LiftedMap> {
        self.check_class(g)?;
        self.resolution.lift_cocycle(&g.rep, g.degree, through)
    }

    /// `f ∘ G_{p+q}` where `G` lifts `g`.
    pub fn yoneda_product(&self, f: &CohomologyClass, g: &CohomologyClass) -> Result<CohomologyClass> {
        self.check_class(f)?;
        self.check_class(g)?;
        let n = f.degree + g.degree;
        self.check_degree(n)?;
        let lift = self.lift(g, n)?;
        let rep = lift.precompose(&self.resolution, &f.rep, f.degree)?;
        Ok(CohomologyClass {
            context: self.id,
            degree: n,
            rep,
        })
    }

    /// The cochain cup product of the context: group or Hochschild.
    pub fn cup_product(&self, f: &CohomologyClass, g: &CohomologyClass) -> Result<CohomologyClass> {
        match &self.kind {
            ContextKind::Group(_) => self.cup_group(f, g),
            ContextKind::Hochschild(_) => self.cup_hochschild(f, g),
            ContextKind::Other => Err(Error::WrongContext("cup product needs a bar resolution".into())),
        }
    }

    pub fn product(&self, kind: ProductKind, f: &CohomologyClass, g: &CohomologyClass) -> Result<CohomologyClass> {
        match kind {
            ProductKind::Yoneda => self.yoneda_product(f, g),
            ProductKind::Cup => self.cup_product(f, g),
        }
    }

    fn split_degrees(&self, f: &CohomologyClass, g: &CohomologyClass) -> Result<(usize, usize, usize)> {
        self.check_class(f)?;
        self.check_class(g)?;
        let (p, q) = (f.degree, g.degree);
        self.check_degree(p + q)?;
        let res = &self.resolution;
        let bar_dim = match res.kind() {
            ResolutionKind::Bar => res.ring().reduced_basis().len(),
            ResolutionKind::TwoSidedBar => res.rank(1),
            ResolutionKind::Periodic => {
                return Err(Error::WrongContext("cup product needs a bar resolution".into()));
            }
        };
        Ok((p, q, bar_dim))
    }

    /// `(f ⌣ g)[g_1|…|g_{p+q}] = f[g_1|…|g_p] · g[g_{p+1}|…|g_{p+q}]`.
    pub fn cup_group(&self, f: &CohomologyClass, g: &CohomologyClass) -> Result<CohomologyClass> {
        if !matches!(self.kind, ContextKind::Group(_)) {
            return Err(Error::WrongContext("cup_group needs a group cohomology context".into()));
        }
        let (p, q, bar_dim) = self.split_degrees(f, g)?;
        let back_count = bar_dim.pow(q as u32);
        let n = p + q;
        let mut rep = Vector::zeros(self.field(), self.resolution.cochain_dim(n));
        for front in f.rep.support() {
            let a = f.rep.get(front);
            for back in g.rep.support() {
                rep.set(front * back_count + back, &(&a * &g.rep.get(back)));
            }
        }
        Ok(CohomologyClass {
            context: self.id,
            degree: n,
            rep,
        })
    }

    /// `(f ⌣ g)[a_1|…|a_{p+q}] = f[a_1|…|a_p] · g[a_{p+1}|…|a_{p+q}]` in `A`.
    pub fn cup_hochschild(&self, f: &CohomologyClass, g: &CohomologyClass) -> Result<CohomologyClass> {
        let ContextKind::Hochschild(algebra) = &self.kind else {
            return Err(Error::WrongContext("cup_hochschild needs a Hochschild context".into()));
        };
        let (p, q, bar_dim) = self.split_degrees(f, g)?;
        let d = algebra.dim();
        let fronts = bar_dim.pow(p as u32);
        let backs = bar_dim.pow(q as u32);
        let n = p + q;
        let mut rep = Vector::zeros(self.field(), self.resolution.cochain_dim(n));
        for front in 0..fronts {
            let x = f.rep.slice(front * d, d);
            if x.is_zero() {
                continue;
            }
            let left = algebra.left_matrix(&x);
            for back in 0..backs {
                let y = g.rep.slice(back * d, d);
                if !y.is_zero() {
                    rep.set_slice((front * backs + back) * d, &left.mul_vec(&y));
                }
            }
        }
        Ok(CohomologyClass {
            context: self.id,
            degree: n,
            rep,
        })
    }

    /// Coordinates of every product of basis classes with `p + q <= N`.
    pub fn product_table(&self, kind: ProductKind) -> Result<Vec<ProductEntry>> {
        let mut out = Vec::new();
        for p in 0..=self.max_degree {
            for q in 0..=self.max_degree - p {
                for i in 0..self.dim(p) {
                    for j in 0..self.dim(q) {
                        let prod = self.product(kind, &self.basis_class(p, i), &self.basis_class(q, j))?;
                        out.push(ProductEntry {
                            left: (p, i),
                            right: (q, j),
                            coords: self.coordinates(&prod)?,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `basis(left) · basis(right)` expressed in the basis of `H^{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub coords: Vector,
}
