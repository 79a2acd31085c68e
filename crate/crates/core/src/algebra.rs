//! Finite groups, finite-dimensional algebras given by structure constants,
//! and their modules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar, Vector};

/// Multiplication table of a finite group on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, identity, inverses and associativity exhaustively.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {x} has no inverse")))?;
            inverses.push(inv);
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::NotAGroup(format!("associativity fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(GroupTable {
            name: name.into(),
            table,
            identity,
            inverses,
        })
    }

    /// `trivial`, `cyclic:n`, `klein4`, `s3` or `q8`.
    pub fn named(name: &str) -> Result<GroupTable> {
        let name = name.trim().to_ascii_lowercase();
        let table = match name.as_str() {
            "trivial" => vec![vec![0]],
            "klein4" | "v4" => (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect(),
            "s3" => symmetric3(),
            "q8" => quaternion8(),
            other => match other.strip_prefix("cyclic:").or_else(|| other.strip_prefix("z/")) {
                Some(n) => {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad cyclic order in {name:?}")))?;
                    if n == 0 || n > 64 {
                        return Err(Error::InvalidInput(format!("cyclic order must be in 1..=64, got {n}")));
                    }
                    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
                }
                None => return Err(Error::InvalidInput(format!("unknown group {name:?}"))),
            },
        };
        GroupTable::new(name, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

fn symmetric3() -> Vec<Vec<usize>> {
    let mut perms: Vec<[usize; 3]> = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    perms.push([a, b, c]);
                }
            }
        }
    }
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    perms
        .iter()
        .map(|s| perms.iter().map(|t| index([s[t[0]], s[t[1]], s[t[2]]])).collect())
        .collect()
}

fn quaternion8() -> Vec<Vec<usize>> {
    // element 4*s + u is (-1)^s times 1, i, j, k for u = 0..4
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sign, unit) = UNITS[a % 4][b % 4];
                    4 * ((a / 4 + b / 4 + sign) % 2) + unit
                })
                .collect()
        })
        .collect()
}

/// A finite-dimensional associative unital algebra over a field.
///
/// `left[i]` is the matrix of left multiplication by the basis element `e_i`,
/// so its column `j` holds the coordinates of `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: Field,
    name: String,
    labels: Vec<String>,
    left: Vec<Matrix>,
    unit: Vector,
    /// Basis indices kept in `A / k·1`; the first index with a nonzero unit
    /// coordinate is dropped.
    reduced: Vec<usize>,
    /// `A -> A / k·1` in the basis `reduced`.
    reduced_projection: Matrix,
}

impl AlgebraPresentation {
    /// `products[i][j]` holds the coordinates of `e_i e_j`.
    pub fn new(
        field: Field,
        name: impl Into<String>,
        labels: Vec<String>,
        products: Vec<Vec<Vector>>,
        unit: Vector,
    ) -> Result<AlgebraPresentation> {
        let d = products.len();
        if d == 0 {
            return Err(Error::NotAnAlgebra("zero-dimensional algebra".into()));
        }
        if labels.len() != d {
            return Err(Error::NotAnAlgebra(format!("{} labels for dimension {d}", labels.len())));
        }
        if unit.len() != d || unit.field() != field {
            return Err(Error::NotAnAlgebra("unit vector has the wrong length or field".into()));
        }
        for row in &products {
            if row.len() != d || row.iter().any(|v| v.len() != d || v.field() != field) {
                return Err(Error::NotAnAlgebra("structure constants have the wrong shape".into()));
            }
        }
        let left: Vec<Matrix> = (0..d)
            .map(|i| Matrix::from_columns(field, d, &products[i]))
            .collect();
        let mut algebra = AlgebraPresentation {
            field,
            name: name.into(),
            labels,
            left,
            unit,
            reduced: Vec::new(),
            reduced_projection: Matrix::zeros(field, 0, d),
        };
        for i in 0..d {
            for j in 0..d {
                let ij = algebra.basis_product(i, j);
                for k in 0..d {
                    let lhs = algebra.right_matrix_of_basis(k).mul_vec(&ij);
                    let jk = algebra.basis_product(j, k);
                    let rhs = algebra.left[i].mul_vec(&jk);
                    if lhs != rhs {
                        return Err(Error::NotAnAlgebra(format!("associativity fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        for j in 0..d {
            let e = Vector::unit(field, d, j);
            if algebra.mul(&algebra.unit, &e) != e || algebra.mul(&e, &algebra.unit) != e {
                return Err(Error::NotAnAlgebra(format!("unit does not act as identity on basis element {j}")));
            }
        }
        algebra.set_reduced_basis();
        Ok(algebra)
    }

    fn set_reduced_basis(&mut self) {
        let d = self.dim();
        let field = self.field;
        let pivot = self.unit.support()[0];
        self.reduced = (0..d).filter(|&i| i != pivot).collect();
        let mut pi = Matrix::zeros(field, d - 1, d);
        let pivot_inv = self.unit.get(pivot).inverse().expect("pivot is nonzero");
        for (r, &i) in self.reduced.iter().enumerate() {
            pi.set(r, i, &field.one());
            // e_pivot ≡ -Σ (u_i / u_pivot) e_i modulo k·1
            pi.set(r, pivot, &-(&self.unit.get(i) * &pivot_inv));
        }
        self.reduced_projection = pi;
    }

    /// Structure constants from sparse `(i, j, k, c)` entries meaning
    /// `e_i e_j` has coefficient `c` on `e_k`.
    pub fn from_constants(
        field: Field,
        name: impl Into<String>,
        labels: Vec<String>,
        constants: &[(usize, usize, usize, Scalar)],
        unit: Vector,
    ) -> Result<AlgebraPresentation> {
        let d = labels.len();
        let mut products = vec![vec![Vector::zeros(field, d); d]; d];
        for (i, j, k, c) in constants {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::NotAnAlgebra(format!("structure constant ({i}, {j}, {k}) out of range")));
            }
            products[*i][*j].add_at(*k, c);
        }
        AlgebraPresentation::new(field, name, labels, products, unit)
    }

    /// The field itself.
    pub fn field_algebra(field: Field) -> AlgebraPresentation {
        AlgebraPresentation::new(
            field,
            "field",
            vec!["1".into()],
            vec![vec![Vector::unit(field, 1, 0)]],
            Vector::unit(field, 1, 0),
        )
        .expect("the field is an algebra")
    }

    /// `k[x]/(x²)` with basis `1, x`.
    pub fn dual_numbers(field: Field) -> AlgebraPresentation {
        let e = |i| Vector::unit(field, 2, i);
        let z = Vector::zeros(field, 2);
        AlgebraPresentation::new(
            field,
            "dual-numbers",
            vec!["1".into(), "x".into()],
            vec![vec![e(0), e(1)], vec![e(1), z]],
            e(0),
        )
        .expect("dual numbers form an algebra")
    }

    /// Upper-triangular 2×2 matrices with basis `E11, E12, E22`.
    pub fn upper_triangular(field: Field) -> AlgebraPresentation {
        let e = |i| Vector::unit(field, 3, i);
        let z = Vector::zeros(field, 3);
        let products = vec![
            vec![e(0), e(1), z.clone()],
            vec![z.clone(), z.clone(), e(1)],
            vec![z.clone(), z, e(2)],
        ];
        let unit = &e(0) + &e(2);
        AlgebraPresentation::new(
            field,
            "upper-triangular",
            vec!["E11".into(), "E12".into(), "E22".into()],
            products,
            unit,
        )
        .expect("upper-triangular matrices form an algebra")
    }

    /// `kG` with `e_i e_j = e_{g_i g_j}`.
    pub fn group_algebra(group: &GroupTable, field: Field) -> AlgebraPresentation {
        let n = group.order();
        let products = (0..n)
            .map(|i| (0..n).map(|j| Vector::unit(field, n, group.mul(i, j))).collect())
            .collect();
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        AlgebraPresentation::new(
            field,
            format!("k[{}]", group.name()),
            labels,
            products,
            Vector::unit(field, n, group.identity()),
        )
        .expect("a group algebra is an algebra")
    }

    /// `A ⊗ A^op` with basis `e_i ⊗ e_j` at index `i * d + j` and product
    /// `(a ⊗ b)(a' ⊗ b') = aa' ⊗ b'b`.
    pub fn enveloping_algebra(&self) -> AlgebraPresentation {
        let d = self.dim();
        let field = self.field;
        let mut products = vec![vec![Vector::zeros(field, d * d); d * d]; d * d];
        for i in 0..d {
            for j in 0..d {
                for i2 in 0..d {
                    for j2 in 0..d {
                        let front = self.basis_product(i, i2);
                        let back = self.basis_product(j2, j);
                        products[i * d + j][i2 * d + j2] = front.kron(&back);
                    }
                }
            }
        }
        let labels = (0..d * d)
            .map(|x| format!("{}⊗{}", self.labels[x / d], self.labels[x % d]))
            .collect();
        AlgebraPresentation::new(
            field,
            format!("{}^e", self.name),
            labels,
            products,
            self.unit.kron(&self.unit),
        )
        .expect("the enveloping algebra of an algebra is an algebra")
    }

    /// `field`, `dual-numbers`, `upper-triangular` or `group:<group name>`.
    pub fn named(name: &str, field: Field) -> Result<AlgebraPresentation> {
        let key = name.trim().to_ascii_lowercase();
        match key.as_str() {
            "field" | "k" => Ok(AlgebraPresentation::field_algebra(field)),
            "dual-numbers" | "dualnumbers" => Ok(AlgebraPresentation::dual_numbers(field)),
            "upper-triangular" | "uppertriangular" => Ok(AlgebraPresentation::upper_triangular(field)),
            other => match other.strip_prefix("group:") {
                Some(g) => Ok(AlgebraPresentation::group_algebra(&GroupTable::named(g)?, field)),
                None => Err(Error::InvalidInput(format!("unknown algebra {name:?}"))),
            },
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        self.left[i].column(j)
    }

    /// Left multiplication by `e_i`.
    pub fn left_matrix_of_basis(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Right multiplication by `e_k`: column `i` is `e_i e_k`.
    pub fn right_matrix_of_basis(&self, k: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|i| self.left[i].column(k)).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    pub fn left_matrix(&self, a: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(), self.dim());
        for i in a.support() {
            m.add_scaled(&a.get(i), &self.left[i]);
        }
        m
    }

    pub fn right_matrix(&self, b: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(), self.dim());
        for k in b.support() {
            m.add_scaled(&b.get(k), &self.right_matrix_of_basis(k));
        }
        m
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        self.left_matrix(a).mul_vec(b)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Basis indices representing `A / k·1`.
    pub fn reduced_basis(&self) -> &[usize] {
        &self.reduced
    }

    /// The projection `A -> A / k·1`.
    pub fn reduced_projection(&self) -> &Matrix {
        &self.reduced_projection
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {} over {})", self.name, self.dim(), self.field)
    }
}

/// A finite-dimensional left module, one action matrix per algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRep {
    name: String,
    action: Vec<Matrix>,
    dim: usize,
}

impl ModuleRep {
    /// Checks `ρ(e_i) ρ(e_j) = ρ(e_i e_j)` and `ρ(1) = 1`.
    pub fn new(algebra: &AlgebraPresentation, name: impl Into<String>, action: Vec<Matrix>) -> Result<ModuleRep> {
        let d = algebra.dim();
        if action.len() != d {
            return Err(Error::NotAModule(format!("{} action matrices for dimension {d}", action.len())));
        }
        let dim = action[0].rows();
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim || m.field() != algebra.field()) {
            return Err(Error::NotAModule("action matrices have inconsistent shapes".into()));
        }
        let module = ModuleRep {
            name: name.into(),
            action,
            dim,
        };
        for i in 0..d {
            for j in 0..d {
                let lhs = module.action[i].mul(&module.action[j]);
                if lhs != module.act(&algebra.basis_product(i, j)) {
                    return Err(Error::NotAModule(format!("action fails on product ({i}, {j})")));
                }
            }
        }
        if module.act(algebra.unit()) != Matrix::identity(algebra.field(), dim) {
            return Err(Error::NotAModule("unit does not act as identity".into()));
        }
        Ok(module)
    }

    /// `k` with every group element acting as 1.
    pub fn trivial(group_algebra: &AlgebraPresentation) -> ModuleRep {
        let field = group_algebra.field();
        ModuleRep {
            name: "trivial".into(),
            action: vec![Matrix::identity(field, 1); group_algebra.dim()],
            dim: 1,
        }
    }

    /// `A` as a left `A^e`-module: `(a ⊗ b) · x = a x b`.
    pub fn algebra_as_bimodule(algebra: &AlgebraPresentation) -> ModuleRep {
        let d = algebra.dim();
        let action = (0..d * d)
            .map(|x| algebra.left_matrix_of_basis(x / d).mul(&algebra.right_matrix_of_basis(x % d)))
            .collect();
        ModuleRep {
            name: algebra.name().to_string(),
            action,
            dim: d,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action_of_basis(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn act(&self, a: &Vector) -> Matrix {
        let field = a.field();
        let mut m = Matrix::zeros(field, self.dim, self.dim);
        for i in a.support() {
            m.add_scaled(&a.get(i), &self.action[i]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups_validate() {
        for (name, order) in [("trivial", 1), ("cyclic:5", 5), ("klein4", 4), ("s3", 6), ("q8", 8)] {
            let g = GroupTable::named(name).unwrap();
            assert_eq!(g.order(), order);
            assert_eq!(g.identity(), 0);
        }
        let s3 = GroupTable::named("s3").unwrap();
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        let q8 = GroupTable::named("q8").unwrap();
        // -1 is central of order 2; i has order 4
        assert_eq!(q8.mul(4, 4), 0);
        assert_eq!(q8.mul(1, 1), 4);
        assert!((0..8).all(|a| q8.mul(a, 4) == q8.mul(4, a)));
    }

    #[test]
    fn broken_tables_are_rejected() {
        let mut t = GroupTable::named("cyclic:3").unwrap().table().to_vec();
        t[1][1] = 0;
        t[1][2] = 2;
        let err = GroupTable::new("bad", t).unwrap_err().to_string();
        assert!(err.contains("not a group"), "{err}");
        assert!(matches!(GroupTable::named("cyclic:x"), Err(Error::InvalidInput(_))));
        assert!(matches!(GroupTable::named("dihedral:4"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn group_algebra_examples() {
        let f2 = Field::Prime(2);
        let trivial = AlgebraPresentation::group_algebra(&GroupTable::named("trivial").unwrap(), f2);
        assert_eq!(trivial.dim(), 1);
        let z2 = AlgebraPresentation::group_algebra(&GroupTable::named("cyclic:2").unwrap(), f2);
        assert_eq!(z2.dim(), 2);
        // t = 1 + g squares to zero in characteristic 2
        let t = Vector::from_i64(f2, &[1, 1]);
        assert!(z2.mul(&t, &t).is_zero());
        let z3 = AlgebraPresentation::group_algebra(&GroupTable::named("cyclic:3").unwrap(), Field::Prime(3));
        assert_eq!(z3.dim(), 3);
        assert!(z3.is_commutative());
    }

    #[test]
    fn enveloping_examples() {
        let f3 = Field::Prime(3);
        assert_eq!(AlgebraPresentation::field_algebra(f3).enveloping_algebra().dim(), 1);
        assert_eq!(AlgebraPresentation::dual_numbers(f3).enveloping_algebra().dim(), 4);
        let f2 = Field::Prime(2);
        let z2 = AlgebraPresentation::group_algebra(&GroupTable::named("cyclic:2").unwrap(), f2);
        let env = z2.enveloping_algebra();
        assert_eq!(env.dim(), 4);
        assert!(env.is_commutative());
        let ut = AlgebraPresentation::upper_triangular(f3);
        assert!(!ut.enveloping_algebra().is_commutative());
    }

    #[test]
    fn non_associative_constants_name_the_triple() {
        let f = Field::Rational;
        let e = |i| Vector::unit(f, 2, i);
        // x·x = 1 + x is fine; make x·x = x but with 1 acting wrongly on the right
        let products = vec![vec![e(0), e(1)], vec![e(1), e(0)]];
        assert!(AlgebraPresentation::new(f, "ok", vec!["1".into(), "x".into()], products, e(0)).is_ok());
        let bad = vec![vec![e(0), e(1)], vec![e(0), e(1)]];
        let err = AlgebraPresentation::new(f, "bad", vec!["1".into(), "x".into()], bad, e(0)).unwrap_err();
        assert!(matches!(err, Error::NotAnAlgebra(_)), "{err}");
    }

    #[test]
    fn non_unital_unit_is_rejected() {
        let f = Field::Prime(5);
        let a = AlgebraPresentation::dual_numbers(f);
        let products: Vec<Vec<Vector>> = (0..2).map(|i| (0..2).map(|j| a.basis_product(i, j)).collect()).collect();
        let err = AlgebraPresentation::new(f, "d", a.labels().to_vec(), products, Vector::unit(f, 2, 1)).unwrap_err();
        assert!(err.to_string().contains("unit"));
    }

    #[test]
    fn reduced_basis_uses_unit_pivot() {
        let f = Field::Prime(3);
        let ut = AlgebraPresentation::upper_triangular(f);
        assert_eq!(ut.reduced_basis(), &[1, 2]);
        // the unit maps to zero in A / k·1
        assert!(ut.reduced_projection().mul_vec(ut.unit()).is_zero());
    }

    #[test]
    fn bimodule_structure_checks() {
        let f = Field::Prime(3);
        for a in [AlgebraPresentation::dual_numbers(f), AlgebraPresentation::upper_triangular(f)] {
            let env = a.enveloping_algebra();
            let m = ModuleRep::algebra_as_bimodule(&a);
            let action = (0..env.dim()).map(|i| m.action_of_basis(i).clone()).collect();
            assert!(ModuleRep::new(&env, "A", action).is_ok());
        }
        let z = AlgebraPresentation::group_algebra(&GroupTable::named("s3").unwrap(), f);
        let t = ModuleRep::trivial(&z);
        let action = (0..z.dim()).map(|i| t.action_of_basis(i).clone()).collect();
        assert!(ModuleRep::new(&z, "k", action).is_ok());
    }
}
