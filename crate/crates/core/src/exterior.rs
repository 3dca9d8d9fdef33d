//! Alternating forms with coefficients in a commutative ring.
//!
//! A `p`-form on an `m`-dimensional space is stored as a sparse map from
//! strictly increasing index tuples `(i1 < … < ip)` (0-based) to
//! coefficients. The same code serves pointwise forms with rational
//! coefficients ([`AltForm`]) and forms on a chart with polynomial
//! coefficients ([`crate::PolyForm`]).
//!
//! Conventions: `dx^i ∧ dx^j` evaluates to the 2×2 determinant on a pair of
//! vectors, and the interior product inserts into the first slot, so
//! `ι_v(dx^{i1}∧…∧dx^{ip}) = Σ_k (-1)^k v^{ik} dx^{i1}∧…∧\widehat{dx^{ik}}∧…∧dx^{ip}`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Matrix, Subspace, Vector};
use crate::Rational;

/// Ring operations needed by [`Form`].
///
/// `nvars` lets polynomial coefficients build their zero and one in the
/// right number of variables; scalar coefficients ignore it.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_in(nvars: usize) -> Self;
    fn one_in(nvars: usize) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rational(value: Rational, nvars: usize) -> Self;
    /// Human-readable rendering; `names` are the coordinate names.
    fn render(&self, names: &[String]) -> String;
}

impl Coefficient for Rational {
    fn zero_in(_: usize) -> Self {
        Rational::zero()
    }

    fn one_in(_: usize) -> Self {
        Rational::one()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn from_rational(value: Rational, _: usize) -> Self {
        value
    }

    fn render(&self, _: &[String]) -> String {
        self.to_string()
    }
}

/// Sign of the permutation sorting `indices`, or `None` if an index repeats.
fn sort_with_sign(indices: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    // insertion sort; tuples are short
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// All strictly increasing `k`-tuples from `0..m`, in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        go(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

/// An alternating form of fixed degree on an `m`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form<C> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, C>,
}

/// Pointwise alternating form with rational coefficients.
pub type AltForm = Form<Rational>;

impl<C: Coefficient> Form<C> {
    /// The zero form. `degree` may exceed `dim`, in which case the form is
    /// necessarily zero.
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: C) -> Self {
        Self::from_terms(dim, 0, [(Vec::new(), value)])
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, C::one_in(dim))
    }

    /// Builds a form from `(indices, coefficient)` terms. Indices need not be
    /// sorted: each term is reordered with the corresponding sign, terms with
    /// a repeated index vanish, and equal tuples are summed.
    ///
    /// Panics if a tuple has the wrong length or an index is out of range.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, C)>,
    {
        let mut form = Self::zero(dim, degree);
        for (mut idx, c) in terms {
            assert_eq!(idx.len(), degree, "index tuple length must equal degree");
            assert!(idx.iter().all(|&i| i < dim), "index out of range");
            let Some(negative) = sort_with_sign(&mut idx) else {
                continue;
            };
            let c = if negative { c.negated() } else { c };
            form.accumulate(idx, c);
        }
        form
    }

    /// `dx^{i1} ∧ … ∧ dx^{ip}` for the given (0-based) coordinates.
    pub fn basis_form(dim: usize, indices: &[usize]) -> Self {
        Self::from_terms(dim, indices.len(), [(indices.to_vec(), C::one_in(dim))])
    }

    fn accumulate(&mut self, idx: Vec<usize>, c: C) {
        if c.vanishes() {
            return;
        }
        match self.coeffs.get_mut(&idx) {
            Some(existing) => {
                let sum = existing.plus(&c);
                if sum.vanishes() {
                    self.coeffs.remove(&idx);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, indices: &[usize]) -> Option<&C> {
        self.coeffs.get(indices)
    }

    /// Coefficient on `indices`, or zero.
    pub fn coeff_or_zero(&self, indices: &[usize]) -> C {
        self.coeffs
            .get(indices)
            .cloned()
            .unwrap_or_else(|| C::zero_in(self.dim))
    }

    /// Nonzero terms in lexicographic order of index tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &C)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim != other_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other_dim,
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.check_dim(other.dim)?;
        if self.degree != other.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.accumulate(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn scaled(&self, factor: &C) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            out.accumulate(idx.clone(), c.times(factor));
        }
        out
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            out.accumulate(idx.clone(), f(c));
        }
        out
    }

    /// Exterior product. A product whose degree exceeds the dimension is the
    /// zero form of that degree.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a.iter().any(|i| b.binary_search(i).is_ok()) {
                    continue;
                }
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                let negative = sort_with_sign(&mut idx).expect("disjoint tuples");
                let c = ca.times(cb);
                out.accumulate(idx, if negative { c.negated() } else { c });
            }
        }
        Ok(out)
    }

    /// `ι_v self`, for `v` given by its components.
    pub fn interior(&self, v: &[C]) -> Result<Self> {
        self.check_dim(v.len())?;
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (k, &i) in idx.iter().enumerate() {
                if v[i].vanishes() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let term = v[i].times(c);
                out.accumulate(rest, if k % 2 == 1 { term.negated() } else { term });
            }
        }
        Ok(out)
    }

    /// `self^k`, the exterior product of `k` copies; `self^0` is the scalar 1.
    pub fn wedge_power(&self, k: usize) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            if acc.is_zero() {
                return Self::zero(self.dim, self.degree * k);
            }
            acc = acc.wedge(self).expect("same dimension");
        }
        acc
    }

    /// Matrix of the linear map `v ↦ ι_v self`: one row per `(p-1)`-tuple in
    /// lexicographic order, one column per basis vector.
    pub fn contraction_matrix_with<F>(&self, mut entry: F) -> Vec<Vec<C>>
    where
        F: FnMut(usize) -> Vec<C>,
    {
        let rows = combinations(self.dim, self.degree.saturating_sub(1));
        let mut m = vec![vec![C::zero_in(self.dim); self.dim]; rows.len()];
        for col in 0..self.dim {
            let image = self
                .interior(&entry(col))
                .expect("positive degree checked by caller");
            for (r, idx) in rows.iter().enumerate() {
                if let Some(c) = image.coeff(idx) {
                    m[r][col] = c.clone();
                }
            }
        }
        m
    }

    /// Renders the form as `c dx∧dy + …` using coordinate names.
    pub fn render(&self, names: &[String]) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (idx, c) in &self.coeffs {
            let basis: Vec<String> = idx
                .iter()
                .map(|&i| format!("d{}", names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))))
                .collect();
            let coeff = c.render(names);
            if idx.is_empty() {
                parts.push(coeff);
            } else {
                parts.push(format!("({coeff}) {}", basis.join("∧")));
            }
        }
        parts.join(" + ")
    }
}

impl AltForm {
    /// The 1-form `Σ c_i dx^i`.
    pub fn covector(coeffs: &[Rational]) -> Self {
        Self::from_terms(
            coeffs.len(),
            1,
            coeffs.iter().enumerate().map(|(i, c)| (vec![i], c.clone())),
        )
    }

    /// Components of a 1-form in the dual basis.
    pub fn to_covector(&self) -> Result<Vector> {
        if self.degree != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: self.degree,
            });
        }
        Ok(Vector(
            (0..self.dim).map(|i| self.coeff_or_zero(&[i])).collect(),
        ))
    }

    /// Scalar value of a 0-form.
    pub fn scalar_value(&self) -> Rational {
        assert_eq!(self.degree, 0, "scalar_value of a positive-degree form");
        self.coeff_or_zero(&[])
    }

    /// Skew matrix `W[i][j] = ω(e_i, e_j)` of a 2-form.
    pub fn skew_matrix(&self) -> Result<Matrix> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.degree,
            });
        }
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (idx, c) in &self.coeffs {
            m.set(idx[0], idx[1], c.clone());
            m.set(idx[1], idx[0], -c.clone());
        }
        Ok(m)
    }

    /// Matrix of `v ↦ ι_v self` (see [`Form::contraction_matrix_with`]).
    pub fn contraction_matrix(&self) -> Result<Matrix> {
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let rows = self.contraction_matrix_with(|i| Vector::basis(self.dim, i).into_inner());
        Ok(Matrix::from_rows(self.dim, rows))
    }

    /// `Ker self = {v : ι_v self = 0}`.
    pub fn kernel(&self) -> Result<Subspace> {
        Ok(kernel_basis(&self.contraction_matrix()?))
    }

    /// Rank of the contraction map, i.e. the codimension of the kernel.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.kernel()?.codim())
    }

    /// Span of all `ι_{v1} ⋯ ι_{v_{p-1}} self` over standard basis vectors:
    /// a subspace of the dual space.
    pub fn multilinear_image(&self) -> Result<Subspace> {
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut covectors = Vec::new();
        for tuple in combinations(self.dim, self.degree - 1) {
            let mut f = self.clone();
            // ι_{v1}(ι_{v2}(⋯ ι_{v_{p-1}} α)): apply the last vector first
            for &i in tuple.iter().rev() {
                f = f.interior(&Vector::basis(self.dim, i))?;
            }
            covectors.push(f.to_covector()?);
        }
        Ok(Subspace::span(self.dim, covectors))
    }

    /// Rank of a 2-form, computed as the codimension of its kernel.
    pub fn two_form_rank(&self) -> Result<usize> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.degree,
            });
        }
        self.rank()
    }

    /// Rank of a 2-form by the power criterion: `2r` where `ω^r ≠ 0` and
    /// `ω^{r+1} = 0`.
    pub fn rank_by_wedge_powers(&self) -> Result<usize> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: self.degree,
            });
        }
        let mut r = 0;
        let mut power = Self::one(self.dim);
        loop {
            let next = power.wedge(self)?;
            if next.is_zero() {
                return Ok(2 * r);
            }
            power = next;
            r += 1;
        }
    }

    /// Largest absolute numerator/denominator size, in bits. Handy for
    /// watching coefficient growth.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}
