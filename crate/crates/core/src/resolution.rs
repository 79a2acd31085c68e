//! Free resolutions over finite-dimensional algebras, the cochain complexes
//! they induce, and lifting of cocycles to chain maps.
//!
//! A free module `R^rank` is stored through its generators. An element is a
//! dense field vector whose coordinate `gen * dim R + b` is the coefficient of
//! `e_b · gen`. Differentials are stored sparsely on generators.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{AlgebraPresentation, GroupTable, ModuleRep};
use crate::complex::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Solver, Vector};

/// A sum `Σ c_j · u_j` of generators with ring coefficients.
pub type FreeTerms = Vec<(usize, Vector)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionKind {
    /// Normalized bar resolution `A ⊗ Ā^{⊗n} ⊗ M` over `A`.
    Bar,
    /// Normalized two-sided bar resolution `A ⊗ Ā^{⊗n} ⊗ A` over `A^e`.
    TwoSidedBar,
    /// Rank-one 2-periodic resolution of `k` over `kZ/n`.
    Periodic,
}

/// The standard contracting homotopy of a bar resolution, prepending the
/// reduced first coefficient as a new leading bar entry.
#[derive(Clone, Debug)]
struct Contraction {
    /// `s(e_b · u) = Σ coef · [c | u]` for each ring basis element `b`.
    prepend: Vec<Vec<(usize, Vector)>>,
    /// `s(m_i)` as an element of `P_0`.
    section: Vec<FreeTerms>,
    /// dimension of `Ā`
    bar_dim: usize,
}

/// A free resolution `P_top -> ... -> P_0 -> M` with `P_n = R^{rank_n}`.
#[derive(Debug)]
pub struct FreeResolution {
    kind: ResolutionKind,
    ring: Arc<AlgebraPresentation>,
    module: Arc<ModuleRep>,
    ranks: Vec<usize>,
    /// `diffs[n][u] = d_n(u)` for `1 <= n <= top`; `diffs[0]` is empty.
    diffs: Vec<Vec<FreeTerms>>,
    augmentation: Vec<Vector>,
    contraction: Option<Contraction>,
    expanded: Vec<OnceLock<Matrix>>,
    solvers: Vec<OnceLock<Solver>>,
    complex: OnceLock<Arc<Complex>>,
}

/// Mixed-radix helpers for generators indexed by tuples over `Ā`.
fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn undigits(ds: &[usize], base: usize) -> usize {
    ds.iter().fold(0, |acc, &d| acc * base + d)
}

fn accumulate(terms: &mut BTreeMap<usize, Vector>, gen: usize, coef: &Vector) {
    if coef.is_zero() {
        return;
    }
    let one = coef.field().one();
    match terms.get_mut(&gen) {
        Some(v) => v.add_scaled(&one, coef),
        None => {
            terms.insert(gen, coef.clone());
        }
    }
}

fn collect_terms(terms: BTreeMap<usize, Vector>) -> FreeTerms {
    terms.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl FreeResolution {
    /// The normalized bar resolution of a left `A`-module `M` through degree `top`.
    pub fn bar(ring: Arc<AlgebraPresentation>, module: Arc<ModuleRep>, top: usize) -> Result<FreeResolution> {
        let field = ring.field();
        let r = ring.dim();
        let m = module.dim();
        let bar_dim = ring.reduced_basis().len();
        let reduced = ring.reduced_basis().to_vec();
        let pi = ring.reduced_projection().clone();
        let unit = ring.unit().clone();
        let ranks: Vec<usize> = (0..=top).map(|n| bar_dim.pow(n as u32) * m).collect();
        let mut diffs = vec![Vec::new()];
        for n in 1..=top {
            let mut dn = Vec::with_capacity(ranks[n]);
            for u in 0..ranks[n] {
                let (tuple, mi) = (u / m, u % m);
                let a = digits(tuple, bar_dim, n);
                let mut terms = BTreeMap::new();
                // a_1 [a_2 | ... | a_n] m
                let rest = undigits(&a[1..], bar_dim) * m + mi;
                accumulate(&mut terms, rest, &Vector::unit(field, r, reduced[a[0]]));
                for i in 1..n {
                    let prod = ring.basis_product(reduced[a[i - 1]], reduced[a[i]]);
                    let proj = pi.mul_vec(&prod);
                    let sign = field.sign(i as i64);
                    for c in proj.support() {
                        let mut b = a.clone();
                        b.splice(i - 1..=i, [c]);
                        let gen = undigits(&b, bar_dim) * m + mi;
                        accumulate(&mut terms, gen, &unit.scaled(&(&sign * &proj.get(c))));
                    }
                }
                let acted = module.action_of_basis(reduced[a[n - 1]]).column(mi);
                let sign = field.sign(n as i64);
                let front = undigits(&a[..n - 1], bar_dim) * m;
                for t in acted.support() {
                    accumulate(&mut terms, front + t, &unit.scaled(&(&sign * &acted.get(t))));
                }
                dn.push(collect_terms(terms));
            }
            diffs.push(dn);
        }
        let augmentation = (0..m).map(|i| Vector::unit(field, m, i)).collect();
        let prepend = (0..r)
            .map(|b| {
                let proj = pi.column(b);
                proj.support()
                    .into_iter()
                    .map(|c| (c, unit.scaled(&proj.get(c))))
                    .collect()
            })
            .collect();
        let section = (0..m).map(|i| vec![(i, unit.clone())]).collect();
        Ok(FreeResolution::assemble(
            ResolutionKind::Bar,
            ring,
            module,
            ranks,
            diffs,
            augmentation,
            Some(Contraction {
                prepend,
                section,
                bar_dim,
            }),
        ))
    }

    /// `k` over `kG` through degree `top`.
    pub fn group(group: &GroupTable, field: Field, top: usize) -> Result<FreeResolution> {
        let ring = Arc::new(AlgebraPresentation::group_algebra(group, field));
        let module = Arc::new(ModuleRep::trivial(&ring));
        FreeResolution::bar(ring, module, top)
    }

    /// The normalized two-sided bar resolution of `A` over `A^e`:
    /// `d[a_1|…|a_n] = (a_1 ⊗ 1)[a_2|…] + Σ (-1)^i […|a_i a_{i+1}|…] + (-1)^n (1 ⊗ a_n)[…|a_{n-1}]`.
    pub fn two_sided_bar(algebra: &AlgebraPresentation, top: usize) -> Result<FreeResolution> {
        let field = algebra.field();
        let d = algebra.dim();
        let ring = Arc::new(algebra.enveloping_algebra());
        let module = Arc::new(ModuleRep::algebra_as_bimodule(algebra));
        let bar_dim = algebra.reduced_basis().len();
        let reduced = algebra.reduced_basis().to_vec();
        let pi = algebra.reduced_projection().clone();
        let unit = algebra.unit().clone();
        let unit2 = unit.kron(&unit);
        let e = |i: usize| Vector::unit(field, d, i);
        let ranks: Vec<usize> = (0..=top).map(|n| bar_dim.pow(n as u32)).collect();
        let mut diffs = vec![Vec::new()];
        for n in 1..=top {
            let mut dn = Vec::with_capacity(ranks[n]);
            for u in 0..ranks[n] {
                let a = digits(u, bar_dim, n);
                let mut terms = BTreeMap::new();
                accumulate(&mut terms, undigits(&a[1..], bar_dim), &e(reduced[a[0]]).kron(&unit));
                for i in 1..n {
                    let prod = algebra.basis_product(reduced[a[i - 1]], reduced[a[i]]);
                    let proj = pi.mul_vec(&prod);
                    let sign = field.sign(i as i64);
                    for c in proj.support() {
                        let mut b = a.clone();
                        b.splice(i - 1..=i, [c]);
                        accumulate(
                            &mut terms,
                            undigits(&b, bar_dim),
                            &unit2.scaled(&(&sign * &proj.get(c))),
                        );
                    }
                }
                let last = unit.kron(&e(reduced[a[n - 1]])).scaled(&field.sign(n as i64));
                accumulate(&mut terms, undigits(&a[..n - 1], bar_dim), &last);
                dn.push(collect_terms(terms));
            }
            diffs.push(dn);
        }
        let augmentation = vec![unit.clone()];
        let prepend = (0..d * d)
            .map(|b| {
                let (i, j) = (b / d, b % d);
                let proj = pi.column(i);
                let back = unit.kron(&e(j));
                proj.support()
                    .into_iter()
                    .map(|c| (c, back.scaled(&proj.get(c))))
                    .collect()
            })
            .collect();
        let section = (0..d).map(|i| vec![(0, unit.kron(&e(i)))]).collect();
        Ok(FreeResolution::assemble(
            ResolutionKind::TwoSidedBar,
            ring,
            module,
            ranks,
            diffs,
            augmentation,
            Some(Contraction {
                prepend,
                section,
                bar_dim,
            }),
        ))
    }

    /// `… -> kG --Norm--> kG --(g-1)--> kG -> k` for `G = Z/n`, rank 1 in each degree.
    pub fn periodic_cyclic(n: usize, field: Field, top: usize) -> Result<FreeResolution> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("periodic resolution needs n >= 2, got {n}")));
        }
        let group = GroupTable::named(&format!("cyclic:{n}"))?;
        let ring = Arc::new(AlgebraPresentation::group_algebra(&group, field));
        let module = Arc::new(ModuleRep::trivial(&ring));
        let mut g_minus_one = Vector::unit(field, n, 1);
        g_minus_one.add_at(0, &-field.one());
        let norm = Vector::from_scalars(field, &vec![field.one(); n]);
        let mut diffs = vec![Vec::new()];
        for k in 1..=top {
            let c = if k % 2 == 1 { g_minus_one.clone() } else { norm.clone() };
            diffs.push(vec![vec![(0, c)]]);
        }
        Ok(FreeResolution::assemble(
            ResolutionKind::Periodic,
            ring,
            module,
            vec![1; top + 1],
            diffs,
            vec![Vector::unit(field, 1, 0)],
            None,
        ))
    }

    fn assemble(
        kind: ResolutionKind,
        ring: Arc<AlgebraPresentation>,
        module: Arc<ModuleRep>,
        ranks: Vec<usize>,
        diffs: Vec<Vec<FreeTerms>>,
        augmentation: Vec<Vector>,
        contraction: Option<Contraction>,
    ) -> FreeResolution {
        let top = ranks.len();
        FreeResolution {
            kind,
            ring,
            module,
            ranks,
            diffs,
            augmentation,
            contraction,
            expanded: (0..top).map(|_| OnceLock::new()).collect(),
            solvers: (0..top).map(|_| OnceLock::new()).collect(),
            complex: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> ResolutionKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn ring(&self) -> &Arc<AlgebraPresentation> {
        &self.ring
    }

    pub fn module(&self) -> &Arc<ModuleRep> {
        &self.module
    }

    /// Highest degree with a stored module.
    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Field dimension of `P_n`.
    pub fn dim(&self, n: usize) -> usize {
        self.rank(n) * self.ring.dim()
    }

    /// `d_n(u)` for a generator `u` of `P_n`, `1 <= n <= top`.
    pub fn d_terms(&self, n: usize, u: usize) -> &FreeTerms {
        &self.diffs[n][u]
    }

    /// `ε(u)` for a generator `u` of `P_0`.
    pub fn augmentation_of(&self, u: usize) -> &Vector {
        &self.augmentation[u]
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.top() {
            Err(Error::DegreeOverflow {
                needed: n,
                max: self.top(),
            })
        } else {
            Ok(())
        }
    }

    /// `c · x` for `c ∈ R` and `x ∈ P_n`.
    pub fn ring_times(&self, c: &Vector, x: &Vector) -> Vector {
        let r = self.ring.dim();
        let left = self.ring.left_matrix(c);
        let mut out = Vector::zeros(self.field(), x.len());
        for g in 0..x.len() / r {
            let slice = x.slice(g * r, r);
            if !slice.is_zero() {
                out.set_slice(g * r, &left.mul_vec(&slice));
            }
        }
        out
    }

    /// `Σ c_j · x_j` where `x_j` is the image of the generator `u_j`.
    pub fn combine_images(&self, terms: &FreeTerms, images: &[Vector], len: usize) -> Vector {
        let one = self.field().one();
        let mut out = Vector::zeros(self.field(), len);
        for (u, c) in terms {
            let x = &images[*u];
            if !x.is_zero() {
                out.add_scaled(&one, &self.ring_times(c, x));
            }
        }
        out
    }

    /// `d_n x` for `x ∈ P_n`, `n >= 1`.
    pub fn apply_d(&self, n: usize, x: &Vector) -> Vector {
        let r = self.ring.dim();
        let field = self.field();
        let mut out = Vector::zeros(field, self.dim(n - 1));
        for u in 0..self.rank(n) {
            let a = x.slice(u * r, r);
            if a.is_zero() {
                continue;
            }
            for (t, c) in &self.diffs[n][u] {
                let ac = self.ring.mul(&a, c);
                let mut block = out.slice(t * r, r);
                block.add_scaled(&field.one(), &ac);
                out.set_slice(t * r, &block);
            }
        }
        out
    }

    /// `ε x` for `x ∈ P_0`.
    pub fn augment(&self, x: &Vector) -> Vector {
        let r = self.ring.dim();
        let mut out = Vector::zeros(self.field(), self.module.dim());
        for u in 0..self.rank(0) {
            let a = x.slice(u * r, r);
            if !a.is_zero() {
                out.add_scaled(&self.field().one(), &self.module.act(&a).mul_vec(&self.augmentation[u]));
            }
        }
        out
    }

    /// `d_n` as a field matrix `dim P_{n-1} × dim P_n`; `n = 0` gives `ε`.
    pub fn expanded_d(&self, n: usize) -> &Matrix {
        self.expanded[n].get_or_init(|| {
            let r = self.ring.dim();
            let field = self.field();
            if n == 0 {
                let mut m = Matrix::zeros(field, self.module.dim(), self.dim(0));
                for u in 0..self.rank(0) {
                    for b in 0..r {
                        let col = self.module.action_of_basis(b).mul_vec(&self.augmentation[u]);
                        m.set_column(u * r + b, &col);
                    }
                }
                return m;
            }
            let mut m = Matrix::zeros(field, self.dim(n - 1), self.dim(n));
            for u in 0..self.rank(n) {
                for (t, c) in &self.diffs[n][u] {
                    // column (u, b) in block t is e_b · c
                    for b in 0..r {
                        let v = self.ring.left_matrix_of_basis(b).mul_vec(c);
                        for i in v.support() {
                            m.set(t * r + i, u * r + b, &v.get(i));
                        }
                    }
                }
            }
            m
        })
    }

    /// The resolution as a complex of vector spaces in degrees `0..=top`.
    pub fn complex(&self) -> Arc<Complex> {
        self.complex
            .get_or_init(|| {
                let dims = (0..=self.top()).map(|n| self.dim(n)).collect();
                let diffs = (1..=self.top()).map(|n| self.expanded_d(n).clone()).collect();
                Arc::new(
                    Complex::new(self.field(), 0, dims, diffs)
                        .expect("bar and periodic differentials square to zero"),
                )
            })
            .clone()
    }

    /// Action of the ring basis element `b` on the field coordinates of `P_n`.
    pub fn action(&self, n: usize, b: usize) -> Matrix {
        let r = self.ring.dim();
        let left = self.ring.left_matrix_of_basis(b);
        let mut m = Matrix::zeros(self.field(), self.dim(n), self.dim(n));
        for u in 0..self.rank(n) {
            m.set_block(u * r, u * r, left);
        }
        m
    }

    /// Exactness of `P_{below} -> … -> P_0 -> M -> 0` by rank counting.
    pub fn verify_exactness(&self, below: usize) -> Result<()> {
        self.check_degree(below)?;
        if self.expanded_d(0).rank() != self.module.dim() {
            return Err(Error::NotExact { degree: 0 });
        }
        let mut prev_rank = self.expanded_d(0).rank();
        for n in 0..below {
            let next = self.expanded_d(n + 1).rank();
            if prev_rank + next != self.dim(n) {
                return Err(Error::NotExact { degree: n });
            }
            prev_rank = next;
        }
        Ok(())
    }

    /// Some `x ∈ P_n` with `d_n x = y` (or `ε x = y` when `n = 0`).
    ///
    /// Bar resolutions use their contracting homotopy, which is correct
    /// whenever `y` is a cycle; other resolutions solve a linear system.
    pub fn preimage(&self, n: usize, y: &Vector) -> Result<Vector> {
        self.check_degree(n)?;
        match &self.contraction {
            Some(s) => Ok(self.contract(s, n, y)),
            None => {
                let solver = self.solvers[n].get_or_init(|| Solver::new(self.expanded_d(n)));
                solver.solve(y).ok_or(Error::LiftFailed { degree: n })
            }
        }
    }

    fn contract(&self, s: &Contraction, n: usize, y: &Vector) -> Vector {
        let field = self.field();
        let r = self.ring.dim();
        let mut out = Vector::zeros(field, self.dim(n));
        if n == 0 {
            for i in y.support() {
                for (u, c) in &s.section[i] {
                    let mut block = out.slice(u * r, r);
                    block.add_scaled(&y.get(i), c);
                    out.set_slice(u * r, &block);
                }
            }
            return out;
        }
        let below = self.rank(n - 1);
        debug_assert_eq!(self.rank(n), s.bar_dim * below);
        for u in 0..below {
            let a = y.slice(u * r, r);
            for b in a.support() {
                let ab = a.get(b);
                for (c, coef) in &s.prepend[b] {
                    let gen = c * below + u;
                    let mut block = out.slice(gen * r, r);
                    block.add_scaled(&ab, coef);
                    out.set_slice(gen * r, &block);
                }
            }
        }
        out
    }

    /// Dimension of `Hom_R(P_n, M) ≅ M^{rank_n}`.
    pub fn cochain_dim(&self, n: usize) -> usize {
        self.rank(n) * self.module.dim()
    }

    /// `δ^n : Hom(P_n, M) -> Hom(P_{n+1}, M)`, `(δφ)(w) = φ(d w)`.
    pub fn coboundary(&self, n: usize) -> Result<Matrix> {
        self.check_degree(n + 1)?;
        let m = self.module.dim();
        let mut out = Matrix::zeros(self.field(), self.cochain_dim(n + 1), self.cochain_dim(n));
        for w in 0..self.rank(n + 1) {
            for (u, c) in &self.diffs[n + 1][w] {
                let block = self.module.act(c);
                for i in 0..m {
                    for j in 0..m {
                        let v = block.get(i, j);
                        if !v.is_zero() {
                            out.add_at(w * m + i, u * m + j, &v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `φ(x)` for a cochain `φ ∈ Hom(P_n, M)` and `x ∈ P_n`.
    pub fn evaluate(&self, phi: &Vector, x: &Vector) -> Vector {
        let r = self.ring.dim();
        let m = self.module.dim();
        let mut out = Vector::zeros(self.field(), m);
        for u in 0..x.len() / r {
            let a = x.slice(u * r, r);
            if !a.is_zero() {
                let value = phi.slice(u * m, m);
                out.add_scaled(&self.field().one(), &self.module.act(&a).mul_vec(&value));
            }
        }
        out
    }

    /// Lifts a degree-`q` cocycle `φ` to `G : P -> T^q P` with `ε G_q = φ`,
    /// computing `G_n` for `q <= n <= through`.
    ///
    /// `G_{n-1} d = (-1)^q d G_n`, so `G_n(w)` is a preimage of
    /// `(-1)^q G_{n-1}(d w)`.
    pub fn lift_cocycle(&self, phi: &Vector, q: usize, through: usize) -> Result<LiftedMap> {
        self.check_degree(q + 1)?;
        self.check_degree(through)?;
        if phi.len() != self.cochain_dim(q) {
            return Err(Error::Shape(format!(
                "cochain of length {} in degree {q} (expected {})",
                phi.len(),
                self.cochain_dim(q)
            )));
        }
        if !self.coboundary(q)?.mul_vec(phi).is_zero() {
            return Err(Error::NotACocycle { degree: q });
        }
        let field = self.field();
        let m = self.module.dim();
        let sign = field.sign(q as i64);
        let mut images: Vec<Vec<Vector>> = Vec::new();
        let first = (0..self.rank(q))
            .map(|w| self.preimage(0, &phi.slice(w * m, m)))
            .collect::<Result<Vec<_>>>()?;
        images.push(first);
        for n in q + 1..=through {
            let prev = &images[n - q - 1];
            let len = self.dim(n - q - 1);
            let mut stage = Vec::with_capacity(self.rank(n));
            for w in 0..self.rank(n) {
                let y = self.combine_images(&self.diffs[n][w], prev, len).scaled(&sign);
                stage.push(self.preimage(n - q, &y)?);
            }
            images.push(stage);
        }
        Ok(LiftedMap { degree: q, images })
    }
}

/// `G : P -> T^q P` stored on generators: `images[n - q][w] = G_n(w) ∈ P_{n-q}`.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    degree: usize,
    images: Vec<Vec<Vector>>,
}

impl LiftedMap {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Highest source degree computed.
    pub fn through(&self) -> usize {
        self.degree + self.images.len() - 1
    }

    /// `G_n` on generators, or `None` outside the computed range.
    pub fn component(&self, n: usize) -> Option<&[Vector]> {
        n.checked_sub(self.degree)
            .and_then(|i| self.images.get(i))
            .map(Vec::as_slice)
    }

    /// `f ∘ G_{p+q}` for a degree-`p` cochain `f`: the Yoneda composite.
    pub fn precompose(&self, res: &FreeResolution, f: &Vector, p: usize) -> Result<Vector> {
        let n = p + self.degree;
        let stage = self.component(n).ok_or(Error::DegreeOverflow {
            needed: n,
            max: self.through(),
        })?;
        let m = res.module().dim();
        let mut out = Vector::zeros(res.field(), res.cochain_dim(n));
        for (w, x) in stage.iter().enumerate() {
            out.set_slice(w * m, &res.evaluate(f, x));
        }
        Ok(out)
    }

    /// The field-level chain map `P -> T^q P` on the window `0..=top`.
    pub fn to_chain_map(&self, res: &FreeResolution) -> Result<ChainMap> {
        let top = res.top();
        if self.through() < top {
            return Err(Error::DegreeOverflow {
                needed: top,
                max: self.through(),
            });
        }
        let field = res.field();
        let r = res.ring().dim();
        let source = res.complex();
        let target = Arc::new(source.shift(self.degree as i64));
        let components = (0..=top)
            .map(|n| {
                let rows = target.dim(n as i64);
                let mut m = Matrix::zeros(field, rows, res.dim(n));
                if let Some(stage) = self.component(n) {
                    for (w, x) in stage.iter().enumerate() {
                        for b in 0..r {
                            let col = res.ring_times(&Vector::unit(field, r, b), x);
                            m.set_column(w * r + b, &col);
                        }
                    }
                }
                m
            })
            .collect();
        ChainMap::new(source, target, 0, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_res(name: &str, p: u32, top: usize) -> FreeResolution {
        FreeResolution::group(&GroupTable::named(name).unwrap(), Field::Prime(p), top).unwrap()
    }

    #[test]
    fn bar_ranks() {
        let f = Field::Prime(2);
        let trivial = group_res("trivial", 2, 3);
        assert_eq!(trivial.ranks(), &[1, 0, 0, 0]);
        assert_eq!(group_res("cyclic:2", 2, 5).ranks(), &[1; 6]);
        assert_eq!(group_res("cyclic:3", 3, 4).ranks(), &[1, 2, 4, 8, 16]);
        let field_alg = Arc::new(AlgebraPresentation::field_algebra(f));
        let k = Arc::new(ModuleRep::trivial(&field_alg));
        let res = FreeResolution::bar(field_alg, k, 2).unwrap();
        assert_eq!(res.ranks(), &[1, 0, 0]);
    }

    #[test]
    fn bar_resolutions_are_exact() {
        for (g, p) in [("cyclic:2", 2), ("cyclic:3", 3), ("cyclic:4", 2), ("klein4", 2), ("s3", 3)] {
            let top = if g == "s3" || g == "klein4" { 3 } else { 5 };
            let res = group_res(g, p, top);
            res.verify_exactness(top - 1).unwrap();
            res.complex();
        }
        for a in [
            AlgebraPresentation::dual_numbers(Field::Prime(3)),
            AlgebraPresentation::upper_triangular(Field::Rational),
            AlgebraPresentation::field_algebra(Field::Prime(5)),
        ] {
            let res = FreeResolution::two_sided_bar(&a, 4).unwrap();
            res.verify_exactness(3).unwrap();
        }
    }

    #[test]
    fn periodic_examples() {
        let f2 = Field::Prime(2);
        let res = FreeResolution::periodic_cyclic(2, f2, 4).unwrap();
        let g_plus_one = Vector::from_i64(f2, &[1, 1]);
        for n in 1..=4 {
            assert_eq!(res.d_terms(n, 0), &vec![(0, g_plus_one.clone())]);
        }
        res.verify_exactness(3).unwrap();
        for n in 0..4 {
            assert!(res.coboundary(n).unwrap().is_zero());
        }
        let f3 = Field::Prime(3);
        let res = FreeResolution::periodic_cyclic(3, f3, 3).unwrap();
        assert_eq!(res.d_terms(1, 0)[0].1, Vector::from_i64(f3, &[-1, 1, 0]));
        assert_eq!(res.d_terms(2, 0)[0].1, Vector::from_i64(f3, &[1, 1, 1]));
        res.verify_exactness(2).unwrap();
        assert!(FreeResolution::periodic_cyclic(1, f3, 3).is_err());
    }

    #[test]
    fn contraction_is_a_homotopy() {
        // d s + s d = 1 on P_n for n >= 1, d s = 1 - s ε on P_0
        let res = group_res("s3", 5, 3);
        let a = AlgebraPresentation::upper_triangular(Field::Prime(3));
        let hh = FreeResolution::two_sided_bar(&a, 3).unwrap();
        for res in [&res, &hh] {
            let s = res.contraction.as_ref().unwrap();
            for n in 1..3 {
                for i in 0..res.dim(n) {
                    let x = Vector::unit(res.field(), res.dim(n), i);
                    let ds = res.apply_d(n + 1, &res.contract(s, n + 1, &x));
                    let sd = res.contract(s, n, &res.apply_d(n, &x));
                    assert_eq!(&ds + &sd, x);
                }
            }
            for i in 0..res.dim(0) {
                let x = Vector::unit(res.field(), res.dim(0), i);
                let ds = res.apply_d(1, &res.contract(s, 1, &x));
                let se = res.contract(s, 0, &res.augment(&x));
                assert_eq!(&ds + &se, x);
            }
        }
    }

    #[test]
    fn apply_d_matches_expanded_matrix() {
        let res = group_res("cyclic:3", 3, 3);
        for n in 1..=3 {
            let m = res.expanded_d(n);
            for i in 0..res.dim(n) {
                let x = Vector::unit(res.field(), res.dim(n), i);
                assert_eq!(res.apply_d(n, &x), m.column(i));
            }
        }
    }

    #[test]
    fn lift_of_augmentation_is_identity() {
        let res = group_res("cyclic:3", 3, 4);
        let eps = Vector::from_i64(res.field(), &[1]);
        let lift = res.lift_cocycle(&eps, 0, 4).unwrap();
        let map = lift.to_chain_map(&res).unwrap();
        assert!(map.equals(&ChainMap::identity(res.complex())));
    }

    #[test]
    fn zero_cocycle_lifts_to_zero() {
        let res = group_res("cyclic:2", 2, 4);
        let zero = Vector::zeros(res.field(), 1);
        let lift = res.lift_cocycle(&zero, 1, 4).unwrap();
        assert!(lift.to_chain_map(&res).unwrap().is_zero());
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let res = group_res("cyclic:3", 3, 3);
        let phi = Vector::from_i64(res.field(), &[1, 0]);
        assert!(matches!(
            res.lift_cocycle(&phi, 1, 3),
            Err(Error::NotACocycle { degree: 1 })
        ));
    }

    #[test]
    fn lifts_are_equivariant_chain_maps() {
        let res = group_res("cyclic:3", 3, 4);
        // the degree-1 cocycle sending [g] ↦ 1, [g²] ↦ 2
        let phi = Vector::from_i64(res.field(), &[1, 2]);
        let lift = res.lift_cocycle(&phi, 1, 4).unwrap();
        let map = lift.to_chain_map(&res).unwrap();
        for n in 1..=4usize {
            for b in 0..3 {
                let lhs = map.component(n as i64).mul(&res.action(n, b));
                let rhs = res.action(n - 1, b).mul(&map.component(n as i64));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn square_of_degree_one_class_over_f2() {
        // [g] ↦ 1 generates H^1(Z/2; F_2); its Yoneda square is nonzero.
        let res = group_res("cyclic:2", 2, 4);
        let x = Vector::from_i64(res.field(), &[1]);
        let lift = res.lift_cocycle(&x, 1, 3).unwrap();
        let sq = lift.precompose(&res, &x, 1).unwrap();
        assert_eq!(sq, Vector::from_i64(res.field(), &[1]));
        // same on the periodic resolution
        let per = FreeResolution::periodic_cyclic(2, res.field(), 4).unwrap();
        let lift = per.lift_cocycle(&x, 1, 3).unwrap();
        assert_eq!(lift.precompose(&per, &x, 1).unwrap(), x);
    }
}
