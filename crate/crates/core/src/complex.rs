//! Bounded chain complexes of finite-dimensional vector spaces.
//!
//! Indexing is homological: `d_n : C_n -> C_{n-1}`. Cohomological degrees
//! are the negatives of these and only appear at the presentation layer.
//!
//! The shift is `(T^p C)_n = C_{n-p}` with differential `(-1)^p d`, and the
//! tensor product uses the Koszul rule `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
//! Bases of tensor products are ordered by the degree of the left factor,
//! then first-factor-major inside each block, so associativity and the unit
//! isomorphisms are canonical reindexings.

use std::borrow::Cow;
use std::sync::Arc;

use rand::RngExt;

use crate::error::{Error, Result};
use crate::linalg::{subquotient_representatives, Field, Matrix, Scalar, Vector};

/// A bounded chain complex. Degrees outside the window are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[i] = d_{lo + i + 1}`
    diffs: Vec<Matrix>,
}

impl Complex {
    /// `diffs[i]` is `d_{lo+i+1} : C_{lo+i+1} -> C_{lo+i}`.
    ///
    /// Shapes and `d ∘ d = 0` are checked exactly. Zero-dimensional degrees at
    /// either end of the window are trimmed.
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Complex> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return Err(Error::Shape(format!(
                "{} differentials for {} degrees",
                diffs.len(),
                dims.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: d.field(),
                });
            }
            if d.rows() != dims[i] || d.cols() != dims[i + 1] {
                return Err(Error::Shape(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    lo + i as i64 + 1,
                    d.rows(),
                    d.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i - 1].mul(&diffs[i]).is_zero() {
                return Err(Error::NotAComplex { degree: lo + i as i64 });
            }
        }
        Ok(Complex::trimmed(field, lo, dims, diffs))
    }

    fn trimmed(field: Field, mut lo: i64, mut dims: Vec<usize>, mut diffs: Vec<Matrix>) -> Complex {
        while dims.last() == Some(&0) {
            dims.pop();
            diffs.pop();
        }
        while dims.first() == Some(&0) {
            dims.remove(0);
            if !diffs.is_empty() {
                diffs.remove(0);
            }
            lo += 1;
        }
        if dims.is_empty() {
            lo = 0;
        }
        Complex { field, lo, dims, diffs }
    }

    /// The zero complex.
    pub fn zero(field: Field) -> Complex {
        Complex {
            field,
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// The base field concentrated in degree 0: the monoidal unit.
    pub fn unit(field: Field) -> Complex {
        Complex::concentrated(field, 0, 1)
    }

    /// `k^dim` in a single degree.
    pub fn concentrated(field: Field, degree: i64, dim: usize) -> Complex {
        Complex::trimmed(field, degree, vec![dim], Vec::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest degree of the window (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree of the window (`lo - 1` for the zero complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_n : C_n -> C_{n-1}`.
    pub fn d(&self, n: i64) -> Cow<'_, Matrix> {
        if n > self.lo && n <= self.hi() {
            Cow::Borrowed(&self.diffs[(n - self.lo - 1) as usize])
        } else {
            Cow::Owned(Matrix::zeros(self.field, self.dim(n - 1), self.dim(n)))
        }
    }

    /// `T^p C`: degree `n` holds `C_{n-p}` and the differential is `(-1)^p d`.
    pub fn shift(&self, p: i64) -> Complex {
        let sign = self.field.sign(p);
        Complex {
            field: self.field,
            lo: if self.is_zero() { 0 } else { self.lo + p },
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scaled(&sign)).collect(),
        }
    }

    /// Dimension and representatives of `ker d_n / im d_{n+1}`.
    pub fn homology_classes(&self, n: i64) -> (usize, Vec<Vector>) {
        let dim = self.dim(n);
        let ker = self.d(n).kernel_basis();
        let im = self.d(n + 1).columns();
        let reps = subquotient_representatives(self.field, dim, &ker, &im)
            .expect("d ∘ d = 0 is a construction invariant");
        (reps.len(), reps)
    }

    /// A random complex with the given window and per-degree dimension bound.
    ///
    /// Differentials are built top-down as `d_n = R · W` where the rows of
    /// `W` annihilate the image of `d_{n+1}`, so `d ∘ d = 0` by construction.
    pub fn random(field: Field, rng: &mut impl RngExt, lo: i64, len: usize, max_dim: usize) -> Complex {
        let dims: Vec<usize> = (0..len).map(|_| rng.random_range(0..=max_dim)).collect();
        let mut diffs: Vec<Matrix> = Vec::with_capacity(len.saturating_sub(1));
        for i in (0..len.saturating_sub(1)).rev() {
            let (rows, cols) = (dims[i], dims[i + 1]);
            let annihilator: Vec<Vector> = match diffs.last() {
                Some(above) => above.transpose().kernel_basis(),
                None => (0..cols).map(|j| Vector::unit(field, cols, j)).collect(),
            };
            let w = Matrix::from_columns(field, cols, &annihilator).transpose();
            let r = random_matrix(field, rng, rows, annihilator.len());
            let d = if annihilator.is_empty() {
                Matrix::zeros(field, rows, cols)
            } else {
                r.mul(&w)
            };
            diffs.push(d);
        }
        diffs.reverse();
        Complex::new(field, lo, dims, diffs).expect("random complex satisfies d ∘ d = 0")
    }
}

/// Uniform residues over `F_p`; small integers in `[-3, 3]` over `Q`.
pub fn random_scalar(field: Field, rng: &mut impl RngExt) -> Scalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.random_range(0..p as i64)),
        Field::Rational => field.from_i64(rng.random_range(-3..=3)),
    }
}

pub fn random_matrix(field: Field, rng: &mut impl RngExt, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, &random_scalar(field, rng));
        }
    }
    m
}

/// A homogeneous map of complexes `f : C -> D` of degree `k`, so
/// `f_n : C_n -> D_{n+k}`, satisfying `f_{n-1} d = (-1)^k d f_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    degree: i64,
    /// Components for source degrees `source.lo()..=source.hi()`.
    components: Vec<Matrix>,
}

impl ChainMap {
    /// Checks shapes and the sign-commutation rule exactly.
    pub fn new(source: Arc<Complex>, target: Arc<Complex>, degree: i64, components: Vec<Matrix>) -> Result<ChainMap> {
        let map = ChainMap::new_unchecked(source, target, degree, components)?;
        map.check()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Complex>,
        target: Arc<Complex>,
        degree: i64,
        components: Vec<Matrix>,
    ) -> Result<ChainMap> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch {
                expected: source.field(),
                found: target.field(),
            });
        }
        let expected = source.dims.len();
        if components.len() != expected {
            return Err(Error::Shape(format!(
                "{} components for {} source degrees",
                components.len(),
                expected
            )));
        }
        for (n, f) in source.degrees().zip(&components) {
            if f.rows() != target.dim(n + degree) || f.cols() != source.dim(n) {
                return Err(Error::Shape(format!(
                    "component {n} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    target.dim(n + degree),
                    source.dim(n)
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            degree,
            components,
        })
    }

    fn check(&self) -> Result<()> {
        let sign = self.field().sign(self.degree);
        let k = self.degree;
        for n in self.source.lo()..=self.source.hi() + 1 {
            let lhs = self.component(n - 1).mul(&self.source.d(n));
            let rhs = self.target.d(n + k).mul(&self.component(n)).scaled(&sign);
            if lhs != rhs {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    /// Builds a map component by component from a closure.
    pub fn from_fn(
        source: Arc<Complex>,
        target: Arc<Complex>,
        degree: i64,
        mut f: impl FnMut(i64) -> Matrix,
    ) -> Result<ChainMap> {
        let components = source.degrees().map(&mut f).collect();
        ChainMap::new(source, target, degree, components)
    }

    /// A uniformly random chain map of the given degree: a random element of
    /// the kernel of `(f_n) ↦ (f_{n-1} d - (-1)^k d f_n)`.
    pub fn random(source: Arc<Complex>, target: Arc<Complex>, degree: i64, rng: &mut impl RngExt) -> ChainMap {
        let field = source.field();
        let k = degree;
        let mut offsets = Vec::new();
        let mut unknowns = 0;
        for n in source.degrees() {
            offsets.push(unknowns);
            unknowns += target.dim(n + k) * source.dim(n);
        }
        let offset = |n: i64| offsets[(n - source.lo()) as usize];
        let in_window = |n: i64| n >= source.lo() && n <= source.hi();
        let sign = field.sign(k);
        let mut rows = Vec::new();
        for n in source.lo()..=source.hi() + 1 {
            // entry (i, j) of f_{n-1} d_n - (-1)^k d_{n+k} f_n
            let (r, c) = (target.dim(n - 1 + k), source.dim(n));
            let d_src = source.d(n);
            let d_tgt = target.d(n + k);
            for i in 0..r {
                for j in 0..c {
                    let mut row = Vector::zeros(field, unknowns);
                    if in_window(n - 1) {
                        let cols = source.dim(n - 1);
                        for m in 0..cols {
                            let v = d_src.get(m, j);
                            if !v.is_zero() {
                                row.add_at(offset(n - 1) + i * cols + m, &v);
                            }
                        }
                    }
                    if in_window(n) {
                        for l in 0..target.dim(n + k) {
                            let v = d_tgt.get(i, l);
                            if !v.is_zero() {
                                row.add_at(offset(n) + l * c + j, &-(&v * &sign));
                            }
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let system = Matrix::from_columns(field, unknowns, &rows).transpose();
        let mut x = Vector::zeros(field, unknowns);
        for v in system.kernel_basis() {
            x.add_scaled(&random_scalar(field, rng), &v);
        }
        let components = source
            .degrees()
            .map(|n| {
                let (r, c) = (target.dim(n + k), source.dim(n));
                let mut m = Matrix::zeros(field, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, &x.get(offset(n) + i * c + j));
                    }
                }
                m
            })
            .collect();
        ChainMap::new(source, target, degree, components).expect("kernel elements are chain maps")
    }

    pub fn identity(c: Arc<Complex>) -> ChainMap {
        let components = c.degrees().map(|n| Matrix::identity(c.field(), c.dim(n))).collect();
        ChainMap {
            source: c.clone(),
            target: c,
            degree: 0,
            components,
        }
    }

    pub fn zero(source: Arc<Complex>, target: Arc<Complex>, degree: i64) -> ChainMap {
        let components = source
            .degrees()
            .map(|n| Matrix::zeros(source.field(), target.dim(n + degree), source.dim(n)))
            .collect();
        ChainMap {
            source,
            target,
            degree,
            components,
        }
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `f_n : C_n -> D_{n+k}`.
    pub fn component(&self, n: i64) -> Cow<'_, Matrix> {
        if n >= self.source.lo() && n <= self.source.hi() {
            Cow::Borrowed(&self.components[(n - self.source.lo()) as usize])
        } else {
            Cow::Owned(Matrix::zeros(
                self.field(),
                self.target.dim(n + self.degree),
                self.source.dim(n),
            ))
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if !same_complex(&first.target, &self.source) {
            return Err(Error::Shape("composition of non-composable chain maps".into()));
        }
        let components = first
            .source
            .degrees()
            .map(|n| self.component(n + first.degree).mul(&first.component(n)))
            .collect();
        Ok(ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            components,
        })
    }

    fn check_parallel(&self, other: &ChainMap) -> Result<()> {
        if self.degree != other.degree
            || !same_complex(&self.source, &other.source)
            || !same_complex(&self.target, &other.target)
        {
            return Err(Error::Shape("maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(&self.field().one(), other)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(&-self.field().one(), other)
    }

    /// `self + c * other`
    pub fn combine(&self, c: &Scalar, other: &ChainMap) -> Result<ChainMap> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            a.add_scaled(c, b);
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> ChainMap {
        let mut out = self.clone();
        for a in &mut out.components {
            *a = a.scaled(c);
        }
        out
    }

    /// `T^p f : T^p C -> T^p D`; components are reindexed without signs.
    pub fn shift(&self, p: i64) -> ChainMap {
        ChainMap {
            source: Arc::new(self.source.shift(p)),
            target: Arc::new(self.target.shift(p)),
            degree: self.degree,
            components: self.components.clone(),
        }
    }

    /// Exact equality of all components (maps must be parallel).
    pub fn equals(&self, other: &ChainMap) -> bool {
        self.check_parallel(other).is_ok() && self.components == other.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }
}

pub(crate) fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// One summand `C_left ⊗ D_right` of a tensor product in a fixed degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TensorBlock {
    pub left: i64,
    pub right: i64,
    pub offset: usize,
    pub dim: usize,
}

/// A tensor product together with its block decomposition.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    complex: Arc<Complex>,
    lo: i64,
    blocks: Vec<Vec<TensorBlock>>,
}

impl TensorProduct {
    pub(crate) fn from_parts(complex: Arc<Complex>, lo: i64, blocks: Vec<Vec<TensorBlock>>) -> TensorProduct {
        TensorProduct { complex, lo, blocks }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    /// Blocks in degree `n`, ordered by the left degree.
    pub fn blocks(&self, n: i64) -> &[TensorBlock] {
        if n < self.lo || n >= self.lo + self.blocks.len() as i64 {
            &[]
        } else {
            &self.blocks[(n - self.lo) as usize]
        }
    }

    pub fn block(&self, left: i64, right: i64) -> Option<TensorBlock> {
        self.blocks(left + right).iter().find(|b| b.left == left).copied()
    }
}

/// Block layout of `C ⊗ D` with the given per-pair block dimension.
pub(crate) fn tensor_layout(
    c: &Complex,
    d: &Complex,
    mut block_dim: impl FnMut(i64, i64) -> usize,
) -> (i64, Vec<Vec<TensorBlock>>) {
    if c.is_zero() || d.is_zero() {
        return (0, Vec::new());
    }
    let lo = c.lo() + d.lo();
    let hi = c.hi() + d.hi();
    let mut all = Vec::new();
    for n in lo..=hi {
        let mut offset = 0;
        let mut blocks = Vec::new();
        for a in c.degrees() {
            let b = n - a;
            if b < d.lo() || b > d.hi() {
                continue;
            }
            let dim = block_dim(a, b);
            if dim == 0 {
                continue;
            }
            blocks.push(TensorBlock {
                left: a,
                right: b,
                offset,
                dim,
            });
            offset += dim;
        }
        all.push(blocks);
    }
    (lo, all)
}

/// `C ⊗ D` with the Koszul differential.
pub fn tensor(c: &Complex, d: &Complex) -> Result<TensorProduct> {
    tensor_through(c, d, None)
}

/// `C ⊗ D` with every degree above `top` dropped (the brutal truncation).
pub fn tensor_through(c: &Complex, d: &Complex, top: Option<i64>) -> Result<TensorProduct> {
    if c.field() != d.field() {
        return Err(Error::FieldMismatch {
            expected: c.field(),
            found: d.field(),
        });
    }
    let field = c.field();
    let (lo, mut blocks) = tensor_layout(c, d, |a, b| c.dim(a) * d.dim(b));
    if let Some(top) = top {
        blocks.truncate(usize::try_from(top - lo + 1).unwrap_or(0));
    }
    let dims: Vec<usize> = blocks.iter().map(|bs| bs.iter().map(|b| b.dim).sum()).collect();
    let mut diffs = Vec::new();
    for i in 1..blocks.len() {
        let mut m = Matrix::zeros(field, dims[i - 1], dims[i]);
        let below = &blocks[i - 1];
        let find = |a: i64| below.iter().find(|b| b.left == a);
        for blk in &blocks[i] {
            let (a, b) = (blk.left, blk.right);
            if let Some(t) = find(a - 1) {
                let part = c.d(a).kron(&Matrix::identity(field, d.dim(b)));
                m.set_block(t.offset, blk.offset, &part);
            }
            if let Some(t) = find(a) {
                let part = Matrix::identity(field, c.dim(a))
                    .kron(&d.d(b))
                    .scaled(&field.sign(a));
                m.set_block(t.offset, blk.offset, &part);
            }
        }
        diffs.push(m);
    }
    let complex = Complex::new(field, lo, dims, diffs)?;
    // Trimming only removes empty ends, which carry no blocks.
    let first = blocks.iter().position(|bs| !bs.is_empty()).unwrap_or(0);
    let blocks: Vec<Vec<TensorBlock>> = blocks.into_iter().skip(first).collect();
    Ok(TensorProduct::from_parts(Arc::new(complex), lo + first as i64, blocks))
}

/// Assembles a degree-`k` map between tensor products block by block.
///
/// `image(a, b)` returns the target block coordinates and the matrix for
/// the source block `(a, b)`, or `None` when that block maps to zero.
pub(crate) fn assemble_blockwise(
    src: &TensorProduct,
    tgt: &TensorProduct,
    tgt_complex: Arc<Complex>,
    tgt_block_shift: i64,
    degree: i64,
    checked: bool,
    mut image: impl FnMut(&TensorBlock) -> Option<(i64, i64, Matrix)>,
) -> Result<ChainMap> {
    let source = src.complex().clone();
    let field = source.field();
    let mut components = Vec::new();
    for n in source.degrees() {
        let mut m = Matrix::zeros(field, tgt_complex.dim(n + degree), source.dim(n));
        for blk in src.blocks(n) {
            if let Some((a, b, part)) = image(blk) {
                debug_assert_eq!(a + b + tgt_block_shift, n + degree);
                match tgt.block(a, b) {
                    Some(t) => m.set_block(t.offset, blk.offset, &part),
                    None if part.is_zero() => {}
                    None => return Err(Error::Shape(format!("target block ({a}, {b}) missing"))),
                }
            }
        }
        components.push(m);
    }
    if checked {
        ChainMap::new(source, tgt_complex, degree, components)
    } else {
        ChainMap::new_unchecked(source, tgt_complex, degree, components)
    }
}

/// `f ⊗ g` with `(f ⊗ g)(x ⊗ y) = (-1)^{q|x|} f(x) ⊗ g(y)`, `q = deg g`.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    tensor_map_through(f, g, None)
}

/// `f ⊗ g` between tensor products truncated above `top`.
pub fn tensor_map_through(f: &ChainMap, g: &ChainMap, top: Option<i64>) -> Result<ChainMap> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch {
            expected: f.field(),
            found: g.field(),
        });
    }
    let src = tensor_through(f.source(), g.source(), top)?;
    let tgt = tensor_through(f.target(), g.target(), top)?;
    let (p, q) = (f.degree(), g.degree());
    let field = f.field();
    assemble_blockwise(&src, &tgt, tgt.complex().clone(), 0, p + q, true, |blk| {
        let (a, b) = (blk.left, blk.right);
        let part = f.component(a).kron(&g.component(b)).scaled(&field.sign(q * a));
        Some((a + p, b + q, part))
    })
}

/// `λ_p : C ⊗ T^p D -> T^p(C ⊗ D)`, multiplication by `(-1)^{p|x|}` on `x ⊗ y`.
pub fn lambda_iso(c: &Complex, d: &Complex, p: i64) -> Result<ChainMap> {
    lambda_iso_with_sign(c, d, p, true)
}

/// `λ_p` with the Koszul sign optionally dropped (used as a negative control).
pub fn lambda_iso_with_sign(c: &Complex, d: &Complex, p: i64, koszul: bool) -> Result<ChainMap> {
    lambda_iso_through(c, d, p, koszul, None)
}

/// `λ_p` between tensor products truncated above `top`.
pub fn lambda_iso_through(c: &Complex, d: &Complex, p: i64, koszul: bool, top: Option<i64>) -> Result<ChainMap> {
    let src = tensor_through(c, &d.shift(p), top)?;
    let inner = tensor_through(c, d, top)?;
    let target = Arc::new(inner.complex().shift(p));
    let field = c.field();
    assemble_blockwise(&src, &inner, target, p, 0, koszul, |blk| {
        let sign = if koszul { field.sign(p * blk.left) } else { field.one() };
        Some((blk.left, blk.right - p, Matrix::identity(field, blk.dim).scaled(&sign)))
    })
}

/// `ρ_p : T^p C ⊗ D -> T^p(C ⊗ D)`, a pure reindexing.
pub fn rho_iso(c: &Complex, d: &Complex, p: i64) -> Result<ChainMap> {
    rho_iso_through(c, d, p, None)
}

/// `ρ_p` between tensor products truncated above `top`.
pub fn rho_iso_through(c: &Complex, d: &Complex, p: i64, top: Option<i64>) -> Result<ChainMap> {
    let src = tensor_through(&c.shift(p), d, top)?;
    let inner = tensor_through(c, d, top)?;
    let target = Arc::new(inner.complex().shift(p));
    let field = c.field();
    assemble_blockwise(&src, &inner, target, p, 0, true, |blk| {
        Some((blk.left - p, blk.right, Matrix::identity(field, blk.dim)))
    })
}

/// `l : e ⊗ C -> C`. With the canonical basis `e ⊗ C` is literally `C`.
pub fn left_unitor(c: &Complex) -> Result<ChainMap> {
    let src = tensor(&Complex::unit(c.field()), c)?;
    let target = Arc::new(c.clone());
    ChainMap::from_fn(src.complex().clone(), target, 0, |n| Matrix::identity(c.field(), c.dim(n)))
}

/// `r : C ⊗ e -> C`.
pub fn right_unitor(c: &Complex) -> Result<ChainMap> {
    let src = tensor(c, &Complex::unit(c.field()))?;
    let target = Arc::new(c.clone());
    ChainMap::from_fn(src.complex().clone(), target, 0, |n| Matrix::identity(c.field(), c.dim(n)))
}

/// `a : (X ⊗ Y) ⊗ Z -> X ⊗ (Y ⊗ Z)`, the basis permutation
/// `(x ⊗ y) ⊗ z ↦ x ⊗ (y ⊗ z)`. No signs arise.
pub fn associator(x: &Complex, y: &Complex, z: &Complex) -> Result<ChainMap> {
    let xy = tensor(x, y)?;
    let yz = tensor(y, z)?;
    let src = tensor(xy.complex(), z)?;
    let tgt = tensor(x, yz.complex())?;
    let field = x.field();
    let one = field.one();
    let source = src.complex().clone();
    let target = tgt.complex().clone();
    ChainMap::from_fn(source.clone(), target.clone(), 0, |n| {
        let mut m = Matrix::zeros(field, target.dim(n), source.dim(n));
        for outer in src.blocks(n) {
            let (ab, c) = (outer.left, outer.right);
            let zdim = z.dim(c);
            for inner in xy.blocks(ab) {
                let (a, b) = (inner.left, inner.right);
                let ydim = y.dim(b);
                let Some(t_outer) = tgt.block(a, b + c) else { continue };
                let Some(t_inner) = yz.block(b, c) else { continue };
                let yzdim = yz.complex().dim(b + c);
                for i in 0..x.dim(a) {
                    for j in 0..ydim {
                        for k in 0..zdim {
                            let u = inner.offset + i * ydim + j;
                            let from = outer.offset + u * zdim + k;
                            let v = t_inner.offset + j * zdim + k;
                            let to = t_outer.offset + i * yzdim + v;
                            m.set(to, from, &one);
                        }
                    }
                }
            }
        }
        m
    })
}

/// Whether `f - g = d s + (-1)^k s d` for some `s` of degree `k + 1`.
///
/// All entries of all components of `s` are unknowns of a single linear
/// system over the field.
pub fn chain_homotopic(f: &ChainMap, g: &ChainMap) -> Result<bool> {
    let diff = f.sub(g)?;
    let (src, tgt, k) = (f.source().clone(), f.target().clone(), f.degree());
    let field = f.field();
    // unknown blocks s_n : C_n -> D_{n+k+1}
    let mut offsets = std::collections::BTreeMap::new();
    let mut unknowns = 0;
    for n in src.degrees() {
        let size = tgt.dim(n + k + 1) * src.dim(n);
        if size > 0 {
            offsets.insert(n, unknowns);
            unknowns += size;
        }
    }
    let equations: usize = src.degrees().map(|n| tgt.dim(n + k) * src.dim(n)).sum();
    let mut system = Matrix::zeros(field, equations, unknowns);
    let mut rhs = Vector::zeros(field, equations);
    let sign = field.sign(k);
    let mut row = 0;
    for n in src.degrees() {
        let (rows, cols) = (tgt.dim(n + k), src.dim(n));
        let d_tgt = tgt.d(n + k + 1);
        let d_src = src.d(n);
        let target_block = diff.component(n);
        for i in 0..rows {
            for j in 0..cols {
                let eq = row + i * cols + j;
                rhs.set(eq, &target_block.get(i, j));
                // (d s_n)[i, j] = Σ_l d[i, l] s_n[l, j]
                if let Some(&off) = offsets.get(&n) {
                    for l in 0..tgt.dim(n + k + 1) {
                        let c = d_tgt.get(i, l);
                        if !c.is_zero() {
                            system.add_at(eq, off + l * cols + j, &c);
                        }
                    }
                }
                // (s_{n-1} d)[i, j] = Σ_m s_{n-1}[i, m] d[m, j]
                if let Some(&off) = offsets.get(&(n - 1)) {
                    let prev_cols = src.dim(n - 1);
                    for m in 0..prev_cols {
                        let c = d_src.get(m, j);
                        if !c.is_zero() {
                            system.add_at(eq, off + i * prev_cols + m, &(&c * &sign));
                        }
                    }
                }
            }
        }
        row += rows * cols;
    }
    Ok(system.solve(&rhs).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn two_term(field: Field, d: i64) -> Complex {
        // 0 -> k --d--> k -> 0 in degrees 1, 0
        Complex::new(field, 0, vec![1, 1], vec![Matrix::from_i64_rows(field, &[vec![d]])]).unwrap()
    }

    #[test]
    fn rejects_non_complex() {
        let f = Field::Prime(3);
        let one = Matrix::from_i64_rows(f, &[vec![1]]);
        assert!(matches!(
            Complex::new(f, 0, vec![1, 1, 1], vec![one.clone(), one]),
            Err(Error::NotAComplex { degree: 1 })
        ));
    }

    #[test]
    fn shift_examples() {
        let f = Field::Prime(3);
        let c = two_term(f, 1);
        assert_eq!(c.shift(0), c);
        let u = Complex::unit(f).shift(2);
        assert_eq!((u.lo(), u.hi(), u.dim(2)), (2, 2, 1));
        let mut rng = StdRng::seed_from_u64(7);
        let r = Complex::random(f, &mut rng, -1, 3, 3);
        assert_eq!(r.shift(1).shift(-1), r);
        assert_eq!(r.shift(2).shift(3), r.shift(5));
    }

    #[test]
    fn tensor_unit_laws_are_literal() {
        let f = Field::Rational;
        let mut rng = StdRng::seed_from_u64(1);
        let c = Complex::random(f, &mut rng, -1, 3, 2);
        let e = Complex::unit(f);
        assert_eq!(**tensor(&e, &c).unwrap().complex(), c);
        assert_eq!(**tensor(&c, &e).unwrap().complex(), c);
    }

    #[test]
    fn truncated_tensor_keeps_low_degrees() {
        let f = Field::Prime(3);
        let mut rng = StdRng::seed_from_u64(4);
        let c = Complex::random(f, &mut rng, 0, 3, 2);
        let full = tensor(&c, &c).unwrap();
        let cut = tensor_through(&c, &c, Some(2)).unwrap();
        let (fc, cc) = (full.complex(), cut.complex());
        assert!(cc.is_zero() || cc.hi() <= 2);
        for n in fc.lo()..=2 {
            assert_eq!(cc.dim(n), fc.dim(n));
            assert_eq!(cut.blocks(n), full.blocks(n));
            if n > fc.lo() {
                assert_eq!(cc.d(n), fc.d(n));
            }
        }
        assert!(tensor_through(&c, &c, Some(-1)).unwrap().complex().is_zero());
    }

    #[test]
    fn tensor_of_two_term_complexes() {
        // (0 -> k -> k -> 0)^{⊗2} over F_2: dims (1, 2, 1) in degrees 0, 1, 2.
        // d_1(x1⊗y0) = x0⊗y0, d_1(x0⊗y1) = x0⊗y0; d_2(x1⊗y1) = x0⊗y1 - x1⊗y0.
        let f = Field::Prime(2);
        let c = two_term(f, 1);
        let t = tensor(&c, &c).unwrap();
        let cx = t.complex();
        assert_eq!((cx.dim(0), cx.dim(1), cx.dim(2)), (1, 2, 1));
        // block order in degree 1: left degree 0 first.
        assert_eq!(*cx.d(1), Matrix::from_i64_rows(f, &[vec![1, 1]]));
        assert_eq!(*cx.d(2), Matrix::from_i64_rows(f, &[vec![1], vec![1]]));
        assert!(cx.d(1).mul(&cx.d(2)).is_zero());
        // over Q the sign shows up
        let q = Field::Rational;
        let cq = two_term(q, 1);
        let tq = tensor(&cq, &cq).unwrap();
        assert_eq!(*tq.complex().d(2), Matrix::from_i64_rows(q, &[vec![1], vec![-1]]));
    }

    #[test]
    fn tensor_rejects_field_mismatch() {
        let a = Complex::unit(Field::Prime(2));
        let b = Complex::unit(Field::Prime(3));
        assert!(matches!(tensor(&a, &b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn tensor_map_degree_zero_is_plain_kron() {
        let f = Field::Prime(5);
        let mut rng = StdRng::seed_from_u64(3);
        let c = Arc::new(Complex::random(f, &mut rng, 0, 2, 2));
        let id = ChainMap::identity(c.clone());
        let twice = id.scaled(&f.from_i64(2));
        let t = tensor_map(&id, &twice).unwrap();
        for n in t.source().degrees() {
            let dim = t.source().dim(n);
            assert_eq!(*t.component(n), Matrix::identity(f, dim).scaled(&f.from_i64(2)));
        }
    }

    /// `d` itself, viewed as a degree -1 endomorphism.
    fn degree_minus_one_map(c: &Arc<Complex>) -> ChainMap {
        ChainMap::from_fn(c.clone(), c.clone(), -1, |n| {
            if n == 1 {
                c.d(1).into_owned()
            } else {
                Matrix::zeros(c.field(), c.dim(n - 1), c.dim(n))
            }
        })
        .unwrap()
    }

    #[test]
    fn interchange_law_picks_up_koszul_sign() {
        // (f ⊗ 1)(1 ⊗ g) = (-1)^{pq} (1 ⊗ g)(f ⊗ 1) for p = q = -1.
        let f = Field::Rational;
        let c = Arc::new(two_term(f, 1));
        let h = degree_minus_one_map(&c);
        let id = ChainMap::identity(c.clone());
        let lhs = tensor_map(&h, &id).unwrap().compose(&tensor_map(&id, &h).unwrap()).unwrap();
        let rhs = tensor_map(&id, &h).unwrap().compose(&tensor_map(&h, &id).unwrap()).unwrap();
        assert!(!lhs.is_zero());
        assert!(lhs.equals(&rhs.scaled(&f.from_i64(-1))));
    }

    #[test]
    fn lambda_examples() {
        let f = Field::Rational;
        let mut rng = StdRng::seed_from_u64(11);
        let c = Complex::random(f, &mut rng, -1, 3, 2);
        let d = Complex::random(f, &mut rng, 0, 2, 2);
        let l0 = lambda_iso(&c, &d, 0).unwrap();
        assert!(l0.equals(&ChainMap::identity(l0.source().clone())));
        let e = Complex::unit(f);
        let l1 = lambda_iso(&e, &e.shift(1), 1).unwrap();
        assert_eq!(*l1.component(2), Matrix::identity(f, 1));
        // T(λ_{-1}) ∘ λ_1 = 1
        let up = lambda_iso(&c, &d, 1).unwrap();
        let down = lambda_iso(&c, &d.shift(1), -1).unwrap().shift(1);
        let round = down.compose(&up).unwrap();
        assert!(round.equals(&ChainMap::identity(up.source().clone())));
        // λ_2 = Tλ ∘ λ
        let two = lambda_iso(&c, &d, 2).unwrap();
        let iterate = lambda_iso(&c, &d, 1)
            .unwrap()
            .shift(1)
            .compose(&lambda_iso(&c, &d.shift(1), 1).unwrap())
            .unwrap();
        assert!(two.equals(&iterate));
    }

    #[test]
    fn rho_examples() {
        let f = Field::Prime(3);
        let mut rng = StdRng::seed_from_u64(5);
        let c = Complex::random(f, &mut rng, 0, 2, 2);
        let d = Complex::random(f, &mut rng, 0, 3, 2);
        let r0 = rho_iso(&c, &d, 0).unwrap();
        assert!(r0.equals(&ChainMap::identity(r0.source().clone())));
        // ρ_2 = Tρ ∘ ρ (applied to T c)
        let two = rho_iso(&c, &d, 2).unwrap();
        let first = rho_iso(&c.shift(1), &d, 1).unwrap();
        let second = rho_iso(&c, &d, 1).unwrap().shift(1);
        assert!(two.equals(&second.compose(&first).unwrap()));
    }

    #[test]
    fn homology_examples() {
        let f = Field::Prime(3);
        assert_eq!(Complex::unit(f).homology_classes(0).0, 1);
        let acyclic = two_term(f, 1);
        for n in -1..=2 {
            assert_eq!(acyclic.homology_classes(n).0, 0);
        }
        let split = two_term(f, 0);
        assert_eq!(split.homology_classes(0).0, 1);
        assert_eq!(split.homology_classes(1).0, 1);
    }

    #[test]
    fn homotopy_examples() {
        let f = Field::Prime(2);
        let u = Arc::new(Complex::unit(f));
        let id = ChainMap::identity(u.clone());
        assert!(chain_homotopic(&id, &id).unwrap());
        let zero = ChainMap::zero(u.clone(), u, 0);
        assert!(!chain_homotopic(&id, &zero).unwrap());
        let acyclic = Arc::new(two_term(f, 1));
        let id = ChainMap::identity(acyclic.clone());
        let zero = ChainMap::zero(acyclic.clone(), acyclic, 0);
        assert!(chain_homotopic(&id, &zero).unwrap());
    }

    #[test]
    fn chain_map_checks_sign_rule() {
        let f = Field::Rational;
        let c = Arc::new(two_term(f, 1));
        let ids: Vec<Matrix> = c.degrees().map(|n| Matrix::identity(f, c.dim(n))).collect();
        // the identity matrices form a degree-1 map C -> TC since d_{TC} = -d
        let shifted = Arc::new(c.shift(1));
        assert!(ChainMap::new(c.clone(), shifted, 1, ids).is_ok());
        let half = vec![Matrix::identity(f, 1), Matrix::zeros(f, 1, 1)];
        assert!(matches!(
            ChainMap::new(c.clone(), c, 0, half),
            Err(Error::NotAChainMap { degree: 1 })
        ));
    }

    #[test]
    fn random_chain_maps_are_chain_maps() {
        let mut rng = StdRng::seed_from_u64(2);
        for field in [Field::Prime(2), Field::Prime(3), Field::Rational] {
            let c = Arc::new(Complex::random(field, &mut rng, 0, 3, 3));
            let d = Arc::new(Complex::random(field, &mut rng, 0, 3, 3));
            for k in -1..=1 {
                ChainMap::random(c.clone(), d.clone(), k, &mut rng);
            }
            // the identity is in the kernel, so random endomorphisms are rarely all zero
            let e = ChainMap::random(c.clone(), c.clone(), 0, &mut rng);
            assert_eq!(e.degree(), 0);
        }
    }

    #[test]
    fn associator_is_a_chain_isomorphism() {
        let f = Field::Rational;
        let mut rng = StdRng::seed_from_u64(21);
        let x = Complex::random(f, &mut rng, 0, 2, 2);
        let y = Complex::random(f, &mut rng, -1, 2, 2);
        let z = Complex::random(f, &mut rng, 0, 3, 2);
        let a = associator(&x, &y, &z).unwrap();
        for n in a.source().degrees() {
            assert_eq!(a.component(n).rank(), a.source().dim(n));
        }
    }
}
