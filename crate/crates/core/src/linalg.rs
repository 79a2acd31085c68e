//! Exact dense linear algebra over prime fields `F_p` and the rationals.
//!
//! Every cohomology computation in this crate bottoms out in the handful of
//! kernels here: reduced row echelon form, kernels, particular solutions and
//! bases of subquotients. All arithmetic is exact. Basis conventions are
//! deterministic so that cohomology representatives are reproducible.
//!
//! Storage is dense and row-major. The element representation depends on the
//! field: residues are `u32` values in `[0, p)` and rationals are
//! [`BigRational`]s in lowest terms. The generic kernels are written once
//! against the private [`Arith`] trait and dispatched on the field tag.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// The prime field `F_p`.
    Prime(u32),
    /// The rational numbers.
    Rational,
}

impl Field {
    /// `F_p`, checking that `p` is a prime small enough for `u64` products.
    pub fn prime(p: u32) -> Result<Field> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    /// The characteristic; zero for the rationals.
    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Prime(p) => p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod { value: 0, modulus: p },
            Field::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod { value: 1 % p, modulus: p },
            Field::Rational => Scalar::Rat(BigRational::one()),
        }
    }

    /// The image of an integer.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// The image of `num / den`; fails if `den` vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match *self {
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> u32 {
                    let r = x % BigInt::from(p);
                    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                    r.to_u32().expect("residue fits in u32")
                };
                let d = reduce(den);
                if d == 0 {
                    return Err(Error::InvalidInput(format!(
                        "denominator {den} vanishes modulo {p}"
                    )));
                }
                let n = reduce(num);
                Ok(Scalar::Mod {
                    value: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
            Field::Rational => {
                if den.is_zero() {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone())))
            }
        }
    }

    /// `(-1)^n`.
    pub fn sign(&self, n: i64) -> Scalar {
        if n.rem_euclid(2) == 0 {
            self.one()
        } else {
            -self.one()
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0);
    // Fermat: a^(p-2)
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// A field element tagged with its field.
///
/// Arithmetic between scalars of different fields panics; callers are
/// expected to keep every computation inside one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, modulus: u32 },
    Rat(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    fn mismatch(&self, other: &Scalar) -> ! {
        panic!(
            "scalar field mismatch: {} vs {}",
            self.field(),
            other.field()
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $modop:expr, $ratop:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (
                        Scalar::Mod { value: a, modulus: p },
                        Scalar::Mod { value: b, modulus: q },
                    ) if p == q => Scalar::Mod {
                        value: $modop(*a, *b, *p),
                        modulus: *p,
                    },
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat($ratop(a, b)),
                    _ => self.mismatch(rhs),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(
    Add,
    add,
    |a: u32, b: u32, p: u32| ((a as u64 + b as u64) % p as u64) as u32,
    |a: &BigRational, b: &BigRational| a + b
);
scalar_binop!(
    Sub,
    sub,
    |a: u32, b: u32, p: u32| ((a as u64 + (p - b) as u64) % p as u64) as u32,
    |a: &BigRational, b: &BigRational| a - b
);
scalar_binop!(Mul, mul, mul_mod, |a: &BigRational, b: &BigRational| a * b);
scalar_binop!(
    Div,
    div,
    |a: u32, b: u32, p: u32| {
        assert!(b != 0, "division by zero");
        mul_mod(a, inv_mod(b, p), p)
    },
    |a: &BigRational, b: &BigRational| {
        assert!(!b.is_zero(), "division by zero");
        a / b
    }
);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// ---------------------------------------------------------------------------
// generic kernels

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Entries {
    Mod(Vec<u32>),
    Rat(Vec<Q>),
}

impl Entries {
    fn zeros(field: Field, n: usize) -> Entries {
        match field {
            Field::Prime(_) => Entries::Mod(vec![0; n]),
            Field::Rational => Entries::Rat(vec![Q::Small(0); n]),
        }
    }

    fn len(&self) -> usize {
        match self {
            Entries::Mod(v) => v.len(),
            Entries::Rat(v) => v.len(),
        }
    }
}

trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// `a <- a - f * b`
    fn sub_mul(&self, a: &mut Self::E, f: &Self::E, b: &Self::E);
    /// `a <- a + f * b`
    fn add_mul(&self, a: &mut Self::E, f: &Self::E, b: &Self::E);
    fn wrap(v: Vec<Self::E>) -> Entries;
    fn to_scalar(&self, a: &Self::E) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Self::E;
    /// Preference when choosing a pivot; 0 is taken immediately.
    fn pivot_cost(&self, _a: &Self::E) -> u8 {
        0
    }
}

struct ModP(u32);
struct Rat;

impl Arith for ModP {
    type E = u32;
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u32) -> u32 {
        inv_mod(*a, self.0)
    }
    #[inline]
    fn sub_mul(&self, a: &mut u32, f: &u32, b: &u32) {
        let p = self.0 as u64;
        *a = ((*a as u64 + (p - *f as u64) * *b as u64) % p) as u32;
    }
    #[inline]
    fn add_mul(&self, a: &mut u32, f: &u32, b: &u32) {
        let p = self.0 as u64;
        *a = ((*a as u64 + *f as u64 * *b as u64) % p) as u32;
    }
    fn wrap(v: Vec<u32>) -> Entries {
        Entries::Mod(v)
    }
    fn to_scalar(&self, a: &u32) -> Scalar {
        Scalar::Mod {
            value: *a,
            modulus: self.0,
        }
    }
    fn from_scalar(&self, s: &Scalar) -> u32 {
        match s {
            Scalar::Mod { value, modulus } if *modulus == self.0 => *value,
            _ => panic!("scalar {s} does not belong to F{}", self.0),
        }
    }
}

/// A rational matrix entry. Integers that fit in `i64` are kept unboxed,
/// which is the common case; the form is canonical so derived equality holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Q {
    Small(i64),
    Big(BigRational),
}

impl Q {
    fn from_big(r: BigRational) -> Q {
        if r.is_integer() {
            if let Some(n) = r.numer().to_i64() {
                return Q::Small(n);
            }
        }
        Q::Big(r)
    }

    fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n) => BigRational::from_integer(BigInt::from(*n)),
            Q::Big(r) => r.clone(),
        }
    }

    fn mul(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(0), _) | (_, Q::Small(0)) => Q::Small(0),
            (Q::Small(a), Q::Small(b)) => match a.checked_mul(*b) {
                Some(c) => Q::Small(c),
                None => Q::from_big(self.to_big() * other.to_big()),
            },
            _ => Q::from_big(self.to_big() * other.to_big()),
        }
    }

    fn add_assign(&mut self, other: &Q) {
        *self = match (&*self, other) {
            (_, Q::Small(0)) => return,
            (Q::Small(a), Q::Small(b)) => match a.checked_add(*b) {
                Some(c) => Q::Small(c),
                None => Q::from_big(self.to_big() + other.to_big()),
            },
            _ => Q::from_big(self.to_big() + other.to_big()),
        };
    }

    fn neg(&self) -> Q {
        match self {
            Q::Small(n) => match n.checked_neg() {
                Some(m) => Q::Small(m),
                None => Q::from_big(-self.to_big()),
            },
            Q::Big(r) => Q::from_big(-r),
        }
    }
}

impl Arith for Rat {
    type E = Q;
    fn zero(&self) -> Q {
        Q::Small(0)
    }
    fn one(&self) -> Q {
        Q::Small(1)
    }
    fn is_zero(&self, a: &Q) -> bool {
        matches!(a, Q::Small(0))
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a.mul(b)
    }
    fn inv(&self, a: &Q) -> Q {
        match a {
            Q::Small(1) | Q::Small(-1) => a.clone(),
            _ => Q::from_big(a.to_big().recip()),
        }
    }
    fn sub_mul(&self, a: &mut Q, f: &Q, b: &Q) {
        a.add_assign(&f.mul(b).neg());
    }
    fn add_mul(&self, a: &mut Q, f: &Q, b: &Q) {
        a.add_assign(&f.mul(b));
    }
    fn wrap(v: Vec<Q>) -> Entries {
        Entries::Rat(v)
    }
    fn to_scalar(&self, a: &Q) -> Scalar {
        Scalar::Rat(a.to_big())
    }
    fn from_scalar(&self, s: &Scalar) -> Q {
        match s {
            Scalar::Rat(r) => Q::from_big(r.clone()),
            _ => panic!("scalar {s} is not rational"),
        }
    }
    fn pivot_cost(&self, a: &Q) -> u8 {
        match a {
            Q::Small(1) | Q::Small(-1) => 0,
            Q::Small(_) => 1,
            Q::Big(_) => 2,
        }
    }
}

macro_rules! dispatch {
    ($field:expr, $entries:expr, |$k:ident, $d:ident| $body:expr) => {
        match ($field, $entries) {
            (Field::Prime(p), Entries::Mod($d)) => {
                let $k = ModP(p);
                $body
            }
            (Field::Rational, Entries::Rat($d)) => {
                let $k = Rat;
                $body
            }
            _ => unreachable!("entry storage does not match field"),
        }
    };
}

macro_rules! dispatch2 {
    ($field:expr, $a:expr, $b:expr, |$k:ident, $x:ident, $y:ident| $body:expr) => {
        match ($field, $a, $b) {
            (Field::Prime(p), Entries::Mod($x), Entries::Mod($y)) => {
                let $k = ModP(p);
                $body
            }
            (Field::Rational, Entries::Rat($x), Entries::Rat($y)) => {
                let $k = Rat;
                $body
            }
            _ => unreachable!("entry storage does not match field"),
        }
    };
}

macro_rules! dispatch3 {
    ($field:expr, $a:expr, $b:expr, $c:expr, |$k:ident, $x:ident, $y:ident, $z:ident| $body:expr) => {
        match ($field, $a, $b, $c) {
            (Field::Prime(p), Entries::Mod($x), Entries::Mod($y), Entries::Mod($z)) => {
                let $k = ModP(p);
                $body
            }
            (Field::Rational, Entries::Rat($x), Entries::Rat($y), Entries::Rat($z)) => {
                let $k = Rat;
                $body
            }
            _ => unreachable!("entry storage does not match field"),
        }
    };
}

/// Row reduction in place. Pivots are only searched in the first
/// `pivot_cols` columns; row operations act on all `cols` columns, which is
/// how the transform of an augmented matrix is recorded.
fn rref_kernel<K: Arith>(
    k: &K,
    rows: usize,
    cols: usize,
    pivot_cols: usize,
    data: &mut [K::E],
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut pivot_row: Vec<K::E> = Vec::with_capacity(cols);
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        // the reduced form is unique, so the pivot row only affects entry growth
        let mut found = None;
        let mut best = u8::MAX;
        for i in r..rows {
            let e = &data[i * cols + c];
            if !k.is_zero(e) {
                let cost = k.pivot_cost(e);
                if cost < best {
                    best = cost;
                    found = Some(i);
                    if cost == 0 {
                        break;
                    }
                }
            }
        }
        let Some(found) = found else {
            continue;
        };
        if found != r {
            for j in 0..cols {
                data.swap(found * cols + j, r * cols + j);
            }
        }
        let inv = k.inv(&data[r * cols + c]);
        for j in c..cols {
            let v = k.mul(&data[r * cols + j], &inv);
            data[r * cols + j] = v;
        }
        pivot_row.clear();
        pivot_row.extend_from_slice(&data[r * cols..(r + 1) * cols]);
        let nonzero: Vec<usize> = (c..cols).filter(|&j| !k.is_zero(&pivot_row[j])).collect();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c].clone();
            if k.is_zero(&f) {
                continue;
            }
            let row = &mut data[i * cols..(i + 1) * cols];
            for &j in &nonzero {
                k.sub_mul(&mut row[j], &f, &pivot_row[j]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn matmul_kernel<K: Arith>(
    k: &K,
    n: usize,
    m: usize,
    l: usize,
    a: &[K::E],
    b: &[K::E],
) -> Vec<K::E> {
    let mut out = vec![k.zero(); n * l];
    let mut starts = Vec::with_capacity(m + 1);
    let mut support = Vec::new();
    starts.push(0);
    for t in 0..m {
        support.extend((0..l).filter(|&j| !k.is_zero(&b[t * l + j])));
        starts.push(support.len());
    }
    if support.len() * 4 < m * l {
        for i in 0..n {
            let orow = &mut out[i * l..(i + 1) * l];
            for t in 0..m {
                let f = &a[i * m + t];
                if k.is_zero(f) {
                    continue;
                }
                for &j in &support[starts[t]..starts[t + 1]] {
                    k.add_mul(&mut orow[j], f, &b[t * l + j]);
                }
            }
        }
        return out;
    }
    for i in 0..n {
        for t in 0..m {
            let f = &a[i * m + t];
            if k.is_zero(f) {
                continue;
            }
            let brow = &b[t * l..(t + 1) * l];
            let orow = &mut out[i * l..(i + 1) * l];
            for j in 0..l {
                if !k.is_zero(&brow[j]) {
                    k.add_mul(&mut orow[j], f, &brow[j]);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// vectors

/// A column vector over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    entries: Entries,
}

impl Vector {
    pub fn zeros(field: Field, len: usize) -> Vector {
        Vector {
            field,
            entries: Entries::zeros(field, len),
        }
    }

    /// The standard basis vector `e_index`.
    pub fn unit(field: Field, len: usize, index: usize) -> Vector {
        let mut v = Vector::zeros(field, len);
        v.set(index, &field.one());
        v
    }

    pub fn from_scalars(field: Field, values: &[Scalar]) -> Vector {
        let mut v = Vector::zeros(field, values.len());
        for (i, s) in values.iter().enumerate() {
            v.set(i, s);
        }
        v
    }

    pub fn from_i64(field: Field, values: &[i64]) -> Vector {
        let scalars: Vec<Scalar> = values.iter().map(|&x| field.from_i64(x)).collect();
        Vector::from_scalars(field, &scalars)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Scalar {
        dispatch!(self.field, &self.entries, |k, d| k.to_scalar(&d[i]))
    }

    pub fn set(&mut self, i: usize, s: &Scalar) {
        dispatch!(self.field, &mut self.entries, |k, d| d[i] = k.from_scalar(s))
    }

    /// `self[i] += s`
    pub fn add_at(&mut self, i: usize, s: &Scalar) {
        dispatch!(self.field, &mut self.entries, |k, d| {
            let one = k.one();
            k.add_mul(&mut d[i], &one, &k.from_scalar(s))
        })
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self.field, &self.entries, |k, d| d.iter().all(|x| k.is_zero(x)))
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        dispatch!(self.field, &self.entries, |k, d| d
            .iter()
            .enumerate()
            .filter(|(_, x)| !k.is_zero(x))
            .map(|(i, _)| i)
            .collect())
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Vector) {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        assert_eq!(self.field, other.field, "vector field mismatch");
        dispatch2!(self.field, &mut self.entries, &other.entries, |k, x, y| {
            let c = k.from_scalar(c);
            if !k.is_zero(&c) {
                for (a, b) in x.iter_mut().zip(y.iter()) {
                    if !k.is_zero(b) {
                        k.add_mul(a, &c, b);
                    }
                }
            }
        })
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        let mut out = Vector::zeros(self.field, self.len());
        out.add_scaled(c, self);
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> Vector {
        let entries = match &self.entries {
            Entries::Mod(d) => Entries::Mod(d[start..start + len].to_vec()),
            Entries::Rat(d) => Entries::Rat(d[start..start + len].to_vec()),
        };
        Vector {
            field: self.field,
            entries,
        }
    }

    /// Overwrite `self[offset..offset + v.len()]` with `v`.
    pub fn set_slice(&mut self, offset: usize, v: &Vector) {
        match (&mut self.entries, &v.entries) {
            (Entries::Mod(a), Entries::Mod(b)) => a[offset..offset + b.len()].copy_from_slice(b),
            (Entries::Rat(a), Entries::Rat(b)) => a[offset..offset + b.len()].clone_from_slice(b),
            _ => panic!("vector field mismatch"),
        }
    }

    pub fn concat(field: Field, parts: &[Vector]) -> Vector {
        let len = parts.iter().map(Vector::len).sum();
        let mut out = Vector::zeros(field, len);
        let mut offset = 0;
        for part in parts {
            out.set_slice(offset, part);
            offset += part.len();
        }
        out
    }

    /// Tensor (Kronecker) product of coordinate vectors.
    pub fn kron(&self, other: &Vector) -> Vector {
        let mut out = Vector::zeros(self.field, self.len() * other.len());
        for i in self.support() {
            let c = self.get(i);
            out.set_slice(i * other.len(), &other.scaled(&c));
        }
        out
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), rhs);
        out
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(&-self.field.one(), rhs);
        out
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(&-self.field.one())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.get(i))?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// matrices

/// A dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: Entries::zeros(field, rows * cols),
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        let one = field.one();
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    /// Build from row-major scalars, checking length and field tags.
    pub fn from_scalars(field: Field, rows: usize, cols: usize, values: &[Scalar]) -> Result<Matrix> {
        if values.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch {
                expected: field,
                found: bad.field(),
            });
        }
        let mut m = Matrix::zeros(field, rows, cols);
        for (idx, s) in values.iter().enumerate() {
            m.set(idx / cols.max(1), idx % cols.max(1), s);
        }
        Ok(m)
    }

    /// Build from integer rows; all rows must have the same length.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, &field.from_i64(x));
            }
        }
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let cols = self.cols;
        dispatch!(self.field, &self.entries, |k, d| k.to_scalar(&d[i * cols + j]))
    }

    pub fn set(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let cols = self.cols;
        dispatch!(self.field, &mut self.entries, |k, d| d[i * cols + j] =
            k.from_scalar(s))
    }

    /// `self[i, j] += s`
    pub fn add_at(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let cols = self.cols;
        dispatch!(self.field, &mut self.entries, |k, d| {
            let one = k.one();
            k.add_mul(&mut d[i * cols + j], &one, &k.from_scalar(s))
        })
    }

    pub fn row(&self, i: usize) -> Vector {
        let cols = self.cols;
        let entries = match &self.entries {
            Entries::Mod(d) => Entries::Mod(d[i * cols..(i + 1) * cols].to_vec()),
            Entries::Rat(d) => Entries::Rat(d[i * cols..(i + 1) * cols].to_vec()),
        };
        Vector {
            field: self.field,
            entries,
        }
    }

    pub fn column(&self, j: usize) -> Vector {
        let mut v = Vector::zeros(self.field, self.rows);
        for i in 0..self.rows {
            v.set(i, &self.get(i, j));
        }
        v
    }

    pub fn set_column(&mut self, j: usize, v: &Vector) {
        assert_eq!(v.len(), self.rows, "column length mismatch");
        let (rows, cols) = (self.rows, self.cols);
        dispatch2!(self.field, &mut self.entries, &v.entries, |_k, d, x| {
            for i in 0..rows {
                d[i * cols + j] = x[i].clone();
            }
        })
    }

    pub fn columns(&self) -> Vec<Vector> {
        let t = self.transpose();
        (0..self.cols).map(|j| t.row(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self.field, &self.entries, |k, d| d.iter().all(|x| k.is_zero(x)))
    }

    pub fn transpose(&self) -> Matrix {
        let (rows, cols) = (self.rows, self.cols);
        let entries = dispatch!(self.field, &self.entries, |_k, d| {
            let mut out = Vec::with_capacity(rows * cols);
            for j in 0..cols {
                for i in 0..rows {
                    out.push(d[i * cols + j].clone());
                }
            }
            wrap_with(&_k, out)
        });
        Matrix {
            field: self.field,
            rows: cols,
            cols: rows,
            entries,
        }
    }

    fn check_compatible(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "matrix field mismatch");
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check_compatible(other);
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let (n, m, l) = (self.rows, self.cols, other.cols);
        let entries = dispatch2!(self.field, &self.entries, &other.entries, |k, a, b| {
            wrap_with(&k, matmul_kernel(&k, n, m, l, a, b))
        });
        Matrix {
            field: self.field,
            rows: n,
            cols: l,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.field, v.field, "field mismatch");
        assert_eq!(self.cols, v.len(), "cannot apply {}x{} to length {}", self.rows, self.cols, v.len());
        let (n, m) = (self.rows, self.cols);
        let entries = dispatch2!(self.field, &self.entries, &v.entries, |k, a, b| {
            wrap_with(&k, matmul_kernel(&k, n, m, 1, a, b))
        });
        Vector {
            field: self.field,
            entries,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&-self.field.one(), other);
        out
    }

    pub fn neg(&self) -> Matrix {
        self.scaled(&-self.field.one())
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        self.check_compatible(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        dispatch2!(self.field, &mut self.entries, &other.entries, |k, x, y| {
            let c = k.from_scalar(c);
            for (a, b) in x.iter_mut().zip(y.iter()) {
                if !k.is_zero(b) {
                    k.add_mul(a, &c, b);
                }
            }
        })
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        out.add_scaled(c, self);
        out
    }

    /// Kronecker product; row `(i, k)` and column `(j, l)` are flattened
    /// first-factor-major.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        self.check_compatible(other);
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(self.field, r1 * r2, c1 * c2);
        let cols = c1 * c2;
        dispatch3!(self.field, &mut out.entries, &self.entries, &other.entries, |k, o, a, b| {
            for i in 0..r1 {
                for j in 0..c1 {
                    let f = &a[i * c1 + j];
                    if k.is_zero(f) {
                        continue;
                    }
                    for s in 0..r2 {
                        for t in 0..c2 {
                            o[(i * r2 + s) * cols + j * c2 + t] = k.mul(f, &b[s * c2 + t]);
                        }
                    }
                }
            }
        });
        out
    }

    /// Copy `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Matrix) {
        self.check_compatible(block);
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols, "block out of bounds");
        let (cols, bcols) = (self.cols, block.cols);
        dispatch2!(self.field, &mut self.entries, &block.entries, |_k, d, b| {
            for i in 0..block.rows {
                d[(row + i) * cols + col..(row + i) * cols + col + bcols]
                    .clone_from_slice(&b[i * bcols..(i + 1) * bcols]);
            }
        })
    }

    pub fn submatrix(&self, row: usize, rows: usize, col: usize, cols: usize) -> Matrix {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "submatrix out of bounds");
        let mut out = Matrix::zeros(self.field, rows, cols);
        let scols = self.cols;
        dispatch2!(self.field, &mut out.entries, &self.entries, |_k, o, d| {
            for i in 0..rows {
                o[i * cols..(i + 1) * cols]
                    .clone_from_slice(&d[(row + i) * scols + col..(row + i) * scols + col + cols]);
            }
        });
        out
    }

    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for part in parts {
            out.set_block(0, offset, part);
            offset += part.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for part in parts {
            out.set_block(offset, 0, part);
            offset += part.rows;
        }
        out
    }

    /// Reduced row echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let pivots = dispatch!(self.field, &mut out.entries, |k, d| rref_kernel(
            &k, rows, cols, cols, d
        ));
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space. One vector per free column, in increasing
    /// column order, with that free variable set to 1 and the others to 0.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let one = self.field.one();
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Vector::zeros(self.field, self.cols);
                v.set(free, &one);
                for (i, &p) in pivots.iter().enumerate() {
                    let e = r.get(i, free);
                    if !e.is_zero() {
                        v.set(p, &-e);
                    }
                }
                v
            })
            .collect()
    }

    /// The echelon particular solution of `self * x = b`, or `None`.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        Solver::new(self).solve(b)
    }
}

fn wrap_with<K: Arith>(_k: &K, v: Vec<K::E>) -> Entries {
    K::wrap(v)
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A factorization `E * M = R` of a matrix, reusable for many right-hand
/// sides.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    rows: usize,
    cols: usize,
    pivots: Vec<usize>,
    transform: Matrix,
}

impl Solver {
    pub fn new(m: &Matrix) -> Solver {
        let (rows, cols) = (m.rows, m.cols);
        let width = cols + rows;
        let mut aug = Matrix::zeros(m.field, rows, width);
        aug.set_block(0, 0, m);
        aug.set_block(0, cols, &Matrix::identity(m.field, rows));
        let pivots = dispatch!(m.field, &mut aug.entries, |k, d| rref_kernel(
            &k, rows, width, cols, d
        ));
        let transform = aug.submatrix(0, rows, cols, rows);
        Solver {
            field: m.field,
            rows,
            cols,
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The echelon particular solution (free variables zero), or `None` if
    /// `b` is not in the column space.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let c = self.transform.mul_vec(b);
        let rank = self.pivots.len();
        if (rank..self.rows).any(|i| !c.get(i).is_zero()) {
            return None;
        }
        let mut x = Vector::zeros(self.field, self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            x.set(p, &c.get(i));
        }
        Some(x)
    }

    pub fn contains(&self, b: &Vector) -> bool {
        self.solve(b).is_some()
    }
}

/// An incrementally grown echelon basis of a subspace of `k^dim`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new(field: Field, dim: usize) -> EchelonBasis {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `v` reduced against the basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut w = v.clone();
        for (p, row) in &self.rows {
            let c = w.get(*p);
            if !c.is_zero() {
                w.add_scaled(&-c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current basis.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let w = self.reduce(v);
        let Some(&p) = w.support().first() else {
            return false;
        };
        let inv = w.get(p).inverse().expect("nonzero pivot");
        self.rows.push((p, w.scaled(&inv)));
        true
    }
}

/// Vectors from `ker` whose classes form a basis of `span(ker) / span(im)`.
///
/// `ker` vectors are taken greedily in order, so the result is
/// deterministic given the inputs.
pub fn subquotient_representatives(field: Field, dim: usize, ker: &[Vector], im: &[Vector]) -> Result<Vec<Vector>> {
    let pivots = |first: &[Vector], second: &[Vector]| {
        let columns: Vec<Vector> = first.iter().chain(second).cloned().collect();
        Matrix::from_columns(field, dim, &columns).rref().1
    };
    if pivots(ker, im).last().is_some_and(|&c| c >= ker.len()) {
        return Err(Error::ImageNotInKernel);
    }
    Ok(pivots(im, ker)
        .into_iter()
        .filter(|&c| c >= im.len())
        .map(|c| ker[c - im.len()].clone())
        .collect())
}
