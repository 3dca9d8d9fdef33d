//! Forms and vector fields on a chart `ℝ^m` with polynomial coefficients.

use std::fmt;

use num::One;

use crate::error::{Error, Result};
use crate::exterior::{AltForm, Form};
use crate::linalg::{Subspace, Vector};
use crate::poly::Polynomial;
use crate::Rational;

/// A differential form whose coefficients are polynomials in the chart
/// coordinates. The polynomials always have `dim` variables.
pub type PolyForm = Form<Polynomial>;

fn check_point(dim: usize, point: &[Rational]) -> Result<()> {
    if point.len() != dim {
        return Err(Error::PointDimension {
            expected: dim,
            found: point.len(),
        });
    }
    Ok(())
}

impl PolyForm {
    /// A function viewed as a 0-form.
    pub fn function(f: Polynomial) -> Self {
        let dim = f.nvars();
        Form::scalar(dim, f)
    }

    /// `df`.
    pub fn differential(f: &Polynomial) -> Self {
        let dim = f.nvars();
        Form::from_terms(dim, 1, (0..dim).map(|i| (vec![i], f.derivative(i))))
    }

    /// A form with the constant coefficients of `a`.
    pub fn constant(a: &AltForm) -> Self {
        let dim = a.dim();
        a.map_coeffs(|c| Polynomial::constant(dim, c.clone()))
    }

    /// Exterior derivative. On a top-degree form the result is the zero form
    /// of degree `dim + 1`.
    pub fn exterior_derivative(&self) -> Self {
        let dim = self.dim();
        let mut terms = Vec::new();
        for (idx, c) in self.terms() {
            for j in 0..dim {
                let dc = c.derivative(j);
                if dc.is_zero() {
                    continue;
                }
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(j);
                full.extend_from_slice(idx);
                terms.push((full, dc));
            }
        }
        Form::from_terms(dim, self.degree() + 1, terms)
    }

    /// `ι_X self`.
    pub fn interior_field(&self, x: &PolyVectorField) -> Result<Self> {
        self.interior(&x.components)
    }

    /// `L_X self` by Cartan's formula; on functions `L_X f = ι_X df`.
    pub fn lie_derivative(&self, x: &PolyVectorField) -> Result<Self> {
        let head = self.exterior_derivative().interior_field(x)?;
        if self.degree() == 0 {
            return Ok(head);
        }
        head.plus(&self.interior_field(x)?.exterior_derivative())
    }

    /// Coefficient-wise evaluation at a point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<AltForm> {
        check_point(self.dim(), point)?;
        Ok(self.map_coeffs(|c| c.eval(point)))
    }

    /// The same form on `ℝ^n`, with the new coordinates appended last.
    pub fn extend_dim(&self, n: usize) -> Self {
        Form::from_terms(
            n,
            self.degree(),
            self.terms().map(|(idx, c)| (idx.clone(), c.extend_vars(n))),
        )
    }

    /// Whether every coefficient is a constant polynomial.
    pub fn is_constant(&self) -> bool {
        self.terms().all(|(_, c)| c.is_constant())
    }
}

/// A vector field `Σ X^i ∂_i` with polynomial components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    pub components: Vec<Polynomial>,
}

impl PolyVectorField {
    /// Panics if a component has the wrong number of variables.
    pub fn new(components: Vec<Polynomial>) -> Self {
        let dim = components.len();
        assert!(
            components.iter().all(|c| c.nvars() == dim),
            "component polynomials must have one variable per coordinate"
        );
        PolyVectorField { components }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Polynomial::zero(dim); dim])
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[i] = Polynomial::one(dim);
        v
    }

    /// The constant field with the given components.
    pub fn constant(v: &[Rational]) -> Self {
        let dim = v.len();
        Self::new(v.iter().map(|c| Polynomial::constant(dim, c.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vector> {
        check_point(self.dim(), point)?;
        Ok(Vector(self.components.iter().map(|c| c.eval(point)).collect()))
    }

    /// `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.dim());
        for (i, xi) in self.components.iter().enumerate() {
            if !xi.is_zero() {
                acc = &acc + &(xi * &f.derivative(i));
            }
        }
        acc
    }

    /// `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(xi, yi)| &self.apply(yi) - &other.apply(xi))
                .collect(),
        ))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scaled(&self, f: &Polynomial) -> Self {
        Self::new(self.components.iter().map(|c| c * f).collect())
    }

    /// Renders as `a ∂x + b ∂y`.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                format!("({}) ∂{name}", c.display_with(names))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// Pointwise span of a family of fields.
pub fn span_at(fields: &[PolyVectorField], dim: usize, point: &[Rational]) -> Result<Subspace> {
    let mut vs = Vec::with_capacity(fields.len());
    for f in fields {
        vs.push(f.evaluate(point)?.into_inner());
    }
    Ok(Subspace::span(dim, vs))
}

/// Generic kernel fields of a polynomial matrix with `cols` columns.
///
/// Fraction-free elimination over the polynomial ring: each reduced row reads
/// `P_i v_{c_i} + Σ_f b_{if} v_f = 0`, and for every free column `f` the field
/// `v_f = Π P`, `v_{c_i} = −b_{if} Π_{j≠i} P_j` is returned. These span the
/// kernel wherever all pivots `P_i` are nonzero and the rank is generic;
/// callers verify that pointwise.
pub fn polynomial_kernel(rows: &[Vec<Polynomial>], cols: usize, nvars: usize) -> Vec<PolyVectorField> {
    let mut m: Vec<Vec<Polynomial>> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; m.len()];
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate() {
            if used[r] {
                continue;
            }
            for (c, e) in row.iter().enumerate() {
                if e.is_zero() || pivots.iter().any(|&(_, pc)| pc == c) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((br, bc)) => pivot_key(e) < pivot_key(&m[br][bc]),
                };
                if better {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        used[pr] = true;
        let p = m[pr][pc].clone();
        if p.is_constant() {
            let inv = Rational::one() / p.constant_term();
            m[pr] = m[pr].iter().map(|e| e.scale(&inv)).collect();
            for r in 0..m.len() {
                if r == pr || m[r][pc].is_zero() {
                    continue;
                }
                let factor = m[r][pc].clone();
                m[r] = (0..cols).map(|c| &m[r][c] - &(&factor * &m[pr][c])).collect();
            }
        } else {
            for r in 0..m.len() {
                if r == pr || m[r][pc].is_zero() {
                    continue;
                }
                let factor = m[r][pc].clone();
                m[r] = (0..cols)
                    .map(|c| &(&p * &m[r][c]) - &(&factor * &m[pr][c]))
                    .collect();
            }
        }
        pivots.push((pr, pc));
    }

    let free: Vec<usize> = (0..cols)
        .filter(|c| pivots.iter().all(|&(_, pc)| pc != *c))
        .collect();
    let product = |skip: Option<usize>| {
        pivots
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip)
            .fold(Polynomial::one(nvars), |acc, (_, &(r, c))| &acc * &m[r][c])
    };
    let full = product(None);
    free.iter()
        .map(|&f| {
            let mut comps = vec![Polynomial::zero(nvars); cols];
            comps[f] = full.clone();
            for (k, &(r, c)) in pivots.iter().enumerate() {
                comps[c] = -&(&m[r][f] * &product(Some(k)));
            }
            PolyVectorField::new_unchecked(comps)
        })
        .collect()
}

fn pivot_key(p: &Polynomial) -> (bool, usize, u32) {
    (!p.is_constant(), p.num_terms(), p.degree().unwrap_or(0))
}

impl PolyVectorField {
    /// For fields whose component count differs from the chart dimension
    /// (intermediate results with auxiliary unknowns).
    fn new_unchecked(components: Vec<Polynomial>) -> Self {
        PolyVectorField { components }
    }

    /// Keeps the first `dim` components and re-checks the shape.
    fn truncated(&self, dim: usize) -> Self {
        Self::new(self.components[..dim].to_vec())
    }
}

/// Polynomial contraction matrix of a form: `rows × dim`.
fn contraction_rows(a: &PolyForm) -> Result<Vec<Vec<Polynomial>>> {
    if a.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    let dim = a.dim();
    Ok(a.contraction_matrix_with(|j| {
        (0..dim)
            .map(|i| if i == j { Polynomial::one(dim) } else { Polynomial::zero(dim) })
            .collect()
    }))
}

/// Generic polynomial fields spanning `Ker a`.
pub fn kernel_fields(a: &PolyForm) -> Result<Vec<PolyVectorField>> {
    let rows = contraction_rows(a)?;
    Ok(polynomial_kernel(&rows, a.dim(), a.dim()))
}

/// Generic polynomial fields spanning `𝒦 = Ker τ ∩ Ker ω`.
pub fn characteristic_fields(tau: &PolyForm, omega: &PolyForm) -> Result<Vec<PolyVectorField>> {
    let mut rows = contraction_rows(tau)?;
    rows.extend(contraction_rows(omega)?);
    Ok(polynomial_kernel(&rows, tau.dim(), tau.dim()))
}

/// Generic polynomial fields spanning `𝒳 = {v ∈ Ker τ : ι_v ω ∈ ⟨τ⟩}`,
/// solved with one auxiliary unknown and projected back.
pub fn extended_fields(tau: &PolyForm, omega: &PolyForm) -> Result<Vec<PolyVectorField>> {
    let dim = tau.dim();
    let tau_row: Vec<Polynomial> = (0..dim).map(|i| tau.coeff_or_zero(&[i])).collect();
    let mut rows = Vec::new();
    let mut first = tau_row.clone();
    first.push(Polynomial::zero(dim));
    rows.push(first);
    for (i, mut row) in contraction_rows(omega)?.into_iter().enumerate() {
        row.push(-&tau_row[i]);
        rows.push(row);
    }
    Ok(polynomial_kernel(&rows, dim + 1, dim)
        .into_iter()
        .map(|f| f.truncated(dim))
        .filter(|f| !f.is_zero())
        .collect())
}
