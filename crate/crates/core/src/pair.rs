//! Pointwise classification of a pair `(τ, ω)` of a 1-form and a 2-form.
//!
//! Everything here acts on forms at a single point. Reeb vectors solve
//! `ι_R τ = 1, ι_R ω = 0`; Liouville vectors solve `ι_Δ ω = τ`. Both are
//! obtained from one stacked exact linear system, and the parity theorem
//! (odd class ⇔ Reeb, even class ⇔ Liouville) is asserted on every call.

use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::linalg::{kernel_basis, solve_affine, AffineSet, Matrix, Subspace, Vector};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The Reeb set (odd class) or Liouville set (even class) of a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Reeb(AffineSet),
    Liouville(AffineSet),
}

impl Witness {
    pub fn solutions(&self) -> &AffineSet {
        match self {
            Witness::Reeb(s) | Witness::Liouville(s) => s,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Reeb(_) => "reeb",
            Witness::Liouville(_) => "liouville",
        }
    }
}

/// Full classification of `(τ_x, ω_x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub class: usize,
    pub omega_rank: usize,
    pub parity: Parity,
    /// `𝒦 = Ker τ ∩ Ker ω`
    pub characteristic: Subspace,
    /// `𝒳 = {v ∈ Ker τ : ι_v ω ∈ ⟨τ⟩}`
    pub extended: Subspace,
    pub tau_vanishes: bool,
    pub witness: Witness,
}

fn check_pair(tau: &AltForm, omega: &AltForm) -> Result<()> {
    if tau.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            found: tau.degree(),
        });
    }
    if omega.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: omega.degree(),
        });
    }
    if tau.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: tau.dim(),
            found: omega.dim(),
        });
    }
    Ok(())
}

/// `Ker τ ∩ Ker ω`.
pub fn characteristic_space(tau: &AltForm, omega: &AltForm) -> Result<Subspace> {
    check_pair(tau, omega)?;
    tau.kernel()?.intersect(&omega.kernel()?)
}

/// Class by the Grassmann route:
/// `rk τ + rk ω − dim((Ker τ)° ∩ (Ker ω)°)`.
pub fn class_by_grassmann(tau: &AltForm, omega: &AltForm) -> Result<usize> {
    check_pair(tau, omega)?;
    let tau_ann = tau.kernel()?.annihilator();
    let omega_ann = omega.kernel()?.annihilator();
    let common = tau_ann.intersect(&omega_ann)?;
    Ok(tau_ann.dim() + omega_ann.dim() - common.dim())
}

/// Codimension of the characteristic space. Cross-checked against
/// [`class_by_grassmann`].
pub fn class_of_pair(tau: &AltForm, omega: &AltForm) -> Result<usize> {
    let class = characteristic_space(tau, omega)?.codim();
    let other = class_by_grassmann(tau, omega)?;
    assert_eq!(class, other, "class routes disagree");
    Ok(class)
}

/// Rows: `τ` on top of the contraction matrix of `ω`.
fn reeb_system(tau: &AltForm, omega: &AltForm) -> Result<(Matrix, Vector)> {
    let m = tau.dim();
    let w = omega.contraction_matrix()?;
    let t = tau.to_covector()?;
    let mut rows = vec![t.into_inner()];
    rows.extend(w.row_vectors().into_iter().map(Vector::into_inner));
    let mut rhs = Vector::zeros(m + 1);
    rhs[0] = Rational::one();
    Ok((Matrix::from_rows(m, rows), rhs))
}

/// Solutions of `ι_R τ = 1, ι_R ω = 0`, if any.
pub fn reeb_solutions(tau: &AltForm, omega: &AltForm) -> Result<Option<AffineSet>> {
    check_pair(tau, omega)?;
    let (a, b) = reeb_system(tau, omega)?;
    Ok(solve_affine(&a, &b))
}

/// Solutions of `ι_Δ ω = τ`, if any.
pub fn liouville_solutions(tau: &AltForm, omega: &AltForm) -> Result<Option<AffineSet>> {
    check_pair(tau, omega)?;
    let w = omega.contraction_matrix()?;
    Ok(solve_affine(&w, &tau.to_covector()?))
}

pub fn classify(tau: &AltForm, omega: &AltForm) -> Result<PairReport> {
    let characteristic = characteristic_space(tau, omega)?;
    let class = characteristic.codim();
    let omega_rank = omega.two_form_rank()?;
    let parity = Parity::of(class);
    let tau_vanishes = tau.is_zero();

    let reeb = reeb_solutions(tau, omega)?;
    let liouville = liouville_solutions(tau, omega)?;
    let witness = match (parity, reeb, liouville) {
        (Parity::Odd, Some(r), None) => Witness::Reeb(r),
        (Parity::Even, None, Some(l)) => Witness::Liouville(l),
        (parity, r, l) => panic!(
            "parity theorem violated: class {class} ({parity}), reeb solvable: {}, liouville solvable: {}",
            r.is_some(),
            l.is_some()
        ),
    };
    assert!(
        omega_rank == class || omega_rank + 1 == class,
        "class {class} is not 2r or 2r+1 for rank {omega_rank}"
    );

    Ok(PairReport {
        class,
        omega_rank,
        parity,
        extended: extended_characteristic_space(tau, omega)?,
        characteristic,
        tau_vanishes,
        witness,
    })
}

/// `B_{ij} = τ_i τ_j + ω_{ij}`, the matrix of `B = τ⊗τ + ω`.
pub fn characteristic_tensor(tau: &AltForm, omega: &AltForm) -> Result<Matrix> {
    check_pair(tau, omega)?;
    let t = tau.to_covector()?;
    let mut b = omega.skew_matrix()?;
    for i in 0..t.dim() {
        for j in 0..t.dim() {
            let v = b.get(i, j) + &t[i] * &t[j];
            b.set(i, j, v);
        }
    }
    Ok(b)
}

/// Solutions of `B̂(X) = τ`, where `B̂(X) = ι_X B = (ι_X τ)τ + ι_X ω`.
/// These are exactly the Reeb vectors (odd class) or Liouville vectors
/// (even class).
pub fn solve_b_preimage_of_tau(tau: &AltForm, omega: &AltForm) -> Result<AffineSet> {
    let b = characteristic_tensor(tau, omega)?;
    // B̂(X)_j = Σ_i X^i B_ij, so B̂ acts by the transpose
    solve_affine(&b.transpose(), &tau.to_covector()?).ok_or(Error::Inconsistent)
}

/// `{v ∈ Ker τ : ι_v ω = a τ for some a}`.
///
/// The scalar `a` is an extra unknown: the kernel of
/// `[τ 0; W −τ]` in `(v, a)` is projected onto `v`.
pub fn extended_characteristic_space(tau: &AltForm, omega: &AltForm) -> Result<Subspace> {
    check_pair(tau, omega)?;
    let m = tau.dim();
    let t = tau.to_covector()?;
    let w = omega.contraction_matrix()?;
    let mut rows = Vec::with_capacity(m + 1);
    let mut first = t.clone().into_inner();
    first.push(Rational::zero());
    rows.push(first);
    for j in 0..m {
        let mut row = w.row(j).to_vec();
        row.push(-t[j].clone());
        rows.push(row);
    }
    let k = kernel_basis(&Matrix::from_rows(m + 1, rows));
    Ok(Subspace::span(
        m,
        k.basis_vectors().into_iter().map(|v| v.0[..m].to_vec()),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KerOmegaDecomposition {
    pub parity: Parity,
    pub ker_omega: Subspace,
    pub characteristic: Subspace,
    /// Particular Reeb vector (odd case only).
    pub reeb: Option<Vector>,
    /// Odd: `Ker ω = 𝒦 ⊕ ⟨R₀⟩`. Even: `Ker ω = 𝒦`.
    pub holds: bool,
}

pub fn ker_omega_decomposition(tau: &AltForm, omega: &AltForm) -> Result<KerOmegaDecomposition> {
    let report = classify(tau, omega)?;
    let ker_omega = omega.kernel()?;
    let (reeb, holds) = match &report.witness {
        Witness::Reeb(s) => {
            let r0 = s.particular.clone();
            let with_r0 = report
                .characteristic
                .sum(&Subspace::span(tau.dim(), [r0.clone()]))?;
            let direct = !report.characteristic.contains_vector(&r0);
            (Some(r0), direct && with_r0 == ker_omega)
        }
        Witness::Liouville(_) => (None, ker_omega == report.characteristic),
    };
    Ok(KerOmegaDecomposition {
        parity: report.parity,
        ker_omega,
        characteristic: report.characteristic,
        reeb,
        holds,
    })
}

/// The extended 3-form `τ ∧ ω`.
pub fn extended_three_form(tau: &AltForm, omega: &AltForm) -> Result<AltForm> {
    check_pair(tau, omega)?;
    tau.wedge(omega)
}

/// `Ker(τ ∧ ω)`.
pub fn kernel_of_three_form(tau: &AltForm, omega: &AltForm) -> Result<Subspace> {
    extended_three_form(tau, omega)?.kernel()
}

/// Checks `Ker(τ∧ω) = 𝒳` when `τ ≠ 0` and the class is at least 3;
/// `None` when those preconditions fail.
pub fn three_form_kernel_identity(tau: &AltForm, omega: &AltForm) -> Result<Option<bool>> {
    if tau.is_zero() || class_of_pair(tau, omega)? < 3 {
        return Ok(None);
    }
    Ok(Some(
        kernel_of_three_form(tau, omega)? == extended_characteristic_space(tau, omega)?,
    ))
}

/// Whether `v ↦ ι_v(τ∧ω)` is injective.
pub fn almost_multisymplectic(tau: &AltForm, omega: &AltForm) -> Result<bool> {
    Ok(kernel_of_three_form(tau, omega)?.is_zero())
}

/// Wedge-power criteria evaluated at a point, next to the class they imply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCriteria {
    pub class: usize,
    /// Half the rank of ω.
    pub r: usize,
    pub tau_nonzero: bool,
    pub omega_r_nonzero: bool,
    pub omega_r1_zero: bool,
    pub tau_omega_r_nonzero: bool,
    /// `ω^{r+1} = 0 ∧ τ∧ω^r ≠ 0`
    pub odd_criteria: bool,
    /// `ω^r ≠ 0 ∧ ω^{r+1} = 0 ∧ τ∧ω^r = 0`
    pub even_criteria: bool,
    /// With `τ ≠ 0`: `ω^s ≠ 0 ∧ τ∧ω^s = 0 ⇒ ω^{s+1} = 0`, for every `s`.
    pub lepage: bool,
    /// With `τ ≠ 0` and class `2s+1` or `2s+2`: `τ∧ω^s ≠ 0`, `τ∧ω^{s+1} = 0`,
    /// and `ω^{s+1} = 0` exactly when the class is odd. `None` when `τ = 0`.
    pub prepair: Option<bool>,
    /// With class `2r`, `τ ≠ 0`: `τ∧ω^i ≠ 0` for `1 ≤ i ≤ r−1`. `None` otherwise.
    pub even_lower_powers: Option<bool>,
    /// Every criterion agrees with the kernel-based class.
    pub consistent: bool,
}

pub fn verify_class_criteria(tau: &AltForm, omega: &AltForm) -> Result<ClassCriteria> {
    let class = class_of_pair(tau, omega)?;
    let rank = omega.two_form_rank()?;
    let r = rank / 2;
    let m = tau.dim();

    let powers: Vec<AltForm> = (0..=m / 2 + 2).map(|k| omega.wedge_power(k)).collect();
    let tau_powers: Vec<AltForm> = powers
        .iter()
        .map(|p| tau.wedge(p).expect("same dimension"))
        .collect();

    let tau_nonzero = !tau.is_zero();
    let omega_r_nonzero = !powers[r].is_zero();
    let omega_r1_zero = powers[r + 1].is_zero();
    let tau_omega_r_nonzero = !tau_powers[r].is_zero();
    let odd_criteria = omega_r1_zero && tau_omega_r_nonzero;
    let even_criteria = omega_r_nonzero && omega_r1_zero && !tau_omega_r_nonzero;

    let lepage = !tau_nonzero
        || (0..powers.len() - 1).all(|s| {
            !(!powers[s].is_zero() && tau_powers[s].is_zero()) || powers[s + 1].is_zero()
        });

    let prepair = (tau_nonzero && class >= 1).then(|| {
        let s = (class - 1) / 2;
        let shape = !tau_powers[s].is_zero() && tau_powers[s + 1].is_zero();
        let parity_rule = powers[s + 1].is_zero() == (class % 2 == 1);
        shape && parity_rule
    });

    let even_lower_powers = (tau_nonzero && class % 2 == 0)
        .then(|| (1..r).all(|i| !tau_powers[i].is_zero()));

    let consistent = rank == omega.rank_by_wedge_powers()?
        && (class % 2 == 1) == odd_criteria
        && (class % 2 == 0) == even_criteria
        && lepage
        && prepair.unwrap_or(true)
        && even_lower_powers.unwrap_or(true);

    Ok(ClassCriteria {
        class,
        r,
        tau_nonzero,
        omega_r_nonzero,
        omega_r1_zero,
        tau_omega_r_nonzero,
        odd_criteria,
        even_criteria,
        lepage,
        prepair,
        even_lower_powers,
        consistent,
    })
}
