//! Exact rational matrices and linear subspaces.
//!
//! Subspaces are stored by a basis in reduced row-echelon form, which is
//! unique for a given subspace. Two [`Subspace`] values are equal exactly
//! when they describe the same subspace, so `==` is subspace equality.
//!
//! A subspace of the dual space is represented in the same way, using the
//! dual of the standard basis; [`Subspace::annihilator`] maps between the two.

use std::fmt;
use std::ops::{Deref, DerefMut};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A column vector (or covector, depending on context) of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector(pub Vec<Rational>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector(values.iter().map(|&x| crate::int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        assert_eq!(self.dim(), other.len(), "dot product of mismatched vectors");
        self.0
            .iter()
            .zip(other)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(v: Vec<Rational>) -> Self {
        Vector(v)
    }
}

impl From<Vector> for Vec<Rational> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed to give
    /// an empty row list a width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| Vector(self.row(i).to_vec())).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        Vector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v)
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", Vector(self.row(i).to_vec()))?;
        }
        write!(f, "]")
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form of `m`, with its pivot columns.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a.get(row, col).recip();
        for j in col..a.cols {
            let v = a.get(row, j) * &inv;
            a.set(row, j, v);
        }
        for i in 0..a.rows {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for j in col..a.cols {
                let v = a.get(i, j) - &factor * a.get(row, j);
                a.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        matrix: a,
        rank: pivots.len(),
        pivots,
    }
}

/// `{v : m·v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let r = rref(m);
    let n = m.cols;
    let mut vectors = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = Vector::zeros(n);
        v[free] = Rational::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = -r.matrix.get(i, free).clone();
        }
        vectors.push(v);
    }
    Subspace::span(n, vectors)
}

/// Solves `a·x = b`. Returns `None` when `b` is outside the column space.
pub fn solve_affine(a: &Matrix, b: &[Rational]) -> Option<AffineSet> {
    assert_eq!(b.len(), a.rows, "right-hand side length must equal row count");
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let r = rref(&aug);
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = Vector::zeros(n);
    for (i, &p) in r.pivots.iter().enumerate() {
        particular[p] = r.matrix.get(i, n).clone();
    }
    Some(AffineSet {
        particular,
        freedom: kernel_basis(a),
    })
}

/// A linear subspace of `ℚ^n` (or of its dual) in canonical RREF form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of an arbitrary (possibly dependent) family of vectors.
    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Vec<Rational>>,
    {
        let rows: Vec<Vec<Rational>> = vectors.into_iter().map(Into::into).collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "spanning vector has wrong dimension");
        }
        let r = rref(&Matrix::from_rows(ambient, rows));
        let rows = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis: Matrix::from_rows(ambient, rows),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Basis rows in RREF.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// Residual of `v` after reduction against the RREF basis.
    fn reduce(&self, v: &[Rational]) -> Vector {
        let mut v = Vector(v.to_vec());
        for i in 0..self.dim() {
            // basis rows are already in RREF: the pivot is the leading entry
            let p = (0..self.ambient)
                .find(|&j| !self.basis.get(i, j).is_zero())
                .expect("basis rows are nonzero");
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for j in 0..self.ambient {
                let x = &v[j] - &c * self.basis.get(i, j);
                v[j] = x;
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector has wrong dimension");
        self.reduce(v).is_zero()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok((0..other.dim()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::span(
            self.ambient,
            self.basis_vectors().into_iter().chain(other.basis_vectors()),
        ))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self
            .annihilator()
            .sum(&other.annihilator())?
            .annihilator())
    }

    /// Covectors vanishing on every vector of `self` (or vectors killed by
    /// every covector, for a dual subspace).
    pub fn annihilator(&self) -> Subspace {
        kernel_basis(&self.basis)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis_vectors().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// `particular + freedom`: the solution set of a consistent linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSet {
    pub particular: Vector,
    pub freedom: Subspace,
}

impl AffineSet {
    pub fn contains(&self, v: &[Rational]) -> bool {
        let diff = Vector(v.to_vec()).sub(&self.particular);
        self.freedom.contains_vector(&diff)
    }

    /// Equality as affine subspaces, independent of the particular point chosen.
    pub fn same_as(&self, other: &AffineSet) -> bool {
        self.freedom == other.freedom && self.contains(&other.particular)
    }
}
