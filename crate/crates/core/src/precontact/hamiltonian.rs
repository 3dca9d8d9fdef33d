//! Precontact Hamiltonian equations, solved pointwise.
//!
//! A vector `X` at `p` solves the equations for `(η, H)` when
//! `(ι_X dη)∧η = dH∧η` and `ι_X η = −H`. Both are linear in `X`.

use num::Zero;

use crate::error::{Error, Result};
use crate::exterior::{combinations, AltForm};
use crate::field::PolyForm;
use crate::linalg::{solve_affine, AffineSet, Matrix, Vector};
use crate::pair::{classify, liouville_solutions, Parity, Witness};
use crate::poly::Polynomial;
use crate::scan::{map_points, SampleDomain};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSolutionSet {
    pub point: Vec<Rational>,
    pub solutions: Option<AffineSet>,
    /// `ι_X(η∧dη) = −H dη + dH∧η` together with `ι_X η = −H` has the same
    /// solutions.
    pub eq58_with_clause_agrees: bool,
    /// Where `η∧dη ≠ 0` at the point: the same equation alone has the same
    /// solutions. `None` elsewhere.
    pub eq58_alone_agrees: Option<bool>,
}

impl HamiltonianSolutionSet {
    pub fn consistent(&self) -> bool {
        self.solutions.is_some()
    }
}

/// Rows of the linear map `X ↦ image(X)` into `k`-forms, with right-hand side.
fn form_system(m: usize, k: usize, image: impl Fn(&[Rational]) -> Result<AltForm>, rhs: &AltForm) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let tuples = combinations(m, k);
    let mut rows = vec![vec![Rational::zero(); m]; tuples.len()];
    for col in 0..m {
        let img = image(&Vector::basis(m, col))?;
        for (r, idx) in tuples.iter().enumerate() {
            rows[r][col] = img.coeff_or_zero(idx);
        }
    }
    let b = tuples.iter().map(|idx| rhs.coeff_or_zero(idx)).collect();
    Ok((rows, b))
}

fn solve(m: usize, rows: Vec<Vec<Rational>>, b: Vec<Rational>) -> Option<AffineSet> {
    solve_affine(&Matrix::from_rows(m, rows), &b)
}

fn same_solutions(a: &Option<AffineSet>, b: &Option<AffineSet>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.same_as(y),
        (None, None) => true,
        _ => false,
    }
}

/// Solves the Hamiltonian equations for `(η, H)` at `p`.
pub fn hamiltonian_solutions_at(eta: &PolyForm, h: &Polynomial, p: &[Rational]) -> Result<HamiltonianSolutionSet> {
    let m = eta.dim();
    let e = eta.evaluate(p)?;
    let de = eta.exterior_derivative().evaluate(p)?;
    let dh = PolyForm::differential(h).evaluate(p)?;
    let h_p = h.eval(p);
    let clause_row = e.to_covector()?.into_inner();

    let dh_eta = dh.wedge(&e)?;
    let (mut rows, mut b) = form_system(m, 2, |x| de.interior(x)?.wedge(&e), &dh_eta)?;
    rows.push(clause_row.clone());
    b.push(-h_p.clone());
    let solutions = solve(m, rows, b);

    let top = e.wedge(&de)?;
    let rhs58 = de.scaled(&-h_p.clone()).plus(&dh_eta)?;
    let (rows58, b58) = form_system(m, 2, |x| top.interior(x), &rhs58)?;
    let alone = solve(m, rows58.clone(), b58.clone());
    let mut rows_c = rows58;
    let mut b_c = b58;
    rows_c.push(clause_row);
    b_c.push(-h_p);
    let with_clause = solve(m, rows_c, b_c);

    Ok(HamiltonianSolutionSet {
        point: p.to_vec(),
        eq58_with_clause_agrees: same_solutions(&solutions, &with_clause),
        eq58_alone_agrees: (!top.is_zero()).then(|| same_solutions(&solutions, &alone)),
        solutions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessaryConditions {
    pub class: usize,
    pub parity: Parity,
    /// Named residuals: `L_Γ H` on a basis of `𝒦` (odd class); `L_{Δ₀}H − H`
    /// and `L_Γ H` on a basis of `Ker dη` (even class).
    pub residuals: Vec<(String, Rational)>,
    pub all_zero: bool,
}

/// Residuals of the necessary conditions for solvability at `p`.
pub fn necessary_conditions_at(eta: &PolyForm, h: &Polynomial, p: &[Rational]) -> Result<NecessaryConditions> {
    let e = eta.evaluate(p)?;
    let de = eta.exterior_derivative().evaluate(p)?;
    let dh = PolyForm::differential(h).evaluate(p)?.to_covector()?;
    let report = classify(&e, &de)?;
    let mut residuals = Vec::new();
    match &report.witness {
        Witness::Reeb(_) => {
            for (i, g) in report.characteristic.basis_vectors().iter().enumerate() {
                residuals.push((format!("L_K{} H", i + 1), dh.dot(g)));
            }
        }
        Witness::Liouville(liouville) => {
            residuals.push(("L_D0 H - H".to_string(), dh.dot(&liouville.particular) - h.eval(p)));
            for (i, g) in de.kernel()?.basis_vectors().iter().enumerate() {
                residuals.push((format!("L_G{} H", i + 1), dh.dot(g)));
            }
        }
    }
    Ok(NecessaryConditions {
        class: report.class,
        parity: report.parity,
        all_zero: residuals.iter().all(|(_, r)| r.is_zero()),
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalEquivalencePoint {
    /// `(η, H)` and `(gη, gH)` have the same solutions.
    pub same: bool,
    /// Where `H ≠ gH` at the point: whether `(gη, H)` has different
    /// solutions from `(η, H)`.
    pub mismatch_differs: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalEquivalenceReport {
    pub points: Vec<(Vec<Rational>, ConformalEquivalencePoint)>,
    pub equivalent: bool,
    /// Some sample has `H ≠ gH`, and at every such sample `(gη, H)` differs.
    pub mismatch_detected: bool,
}

/// Compares the equations of `(η, H)`, `(gη, gH)` and `(gη, H)` on samples.
pub fn conformal_equivalence_check(
    eta: &PolyForm,
    h: &Polynomial,
    g: &Polynomial,
    dom: &SampleDomain,
) -> Result<ConformalEquivalenceReport> {
    if let Some(p) = dom.points().into_iter().find(|p| g.eval(p).is_zero()) {
        return Err(Error::ScaleVanishes { point: p });
    }
    let g_eta = eta.scaled(g);
    let g_h = g * h;
    let points = map_points(dom, |p| {
        let base = hamiltonian_solutions_at(eta, h, p)?;
        let scaled = hamiltonian_solutions_at(&g_eta, &g_h, p)?;
        let same = same_solutions(&base.solutions, &scaled.solutions);
        let mismatch_differs = if h.eval(p) != g_h.eval(p) {
            let wrong = hamiltonian_solutions_at(&g_eta, h, p)?;
            Some(!same_solutions(&base.solutions, &wrong.solutions))
        } else {
            None
        };
        Ok(ConformalEquivalencePoint { same, mismatch_differs })
    })?;
    let equivalent = points.iter().all(|(_, c)| c.same);
    let mismatches: Vec<bool> = points.iter().filter_map(|(_, c)| c.mismatch_differs).collect();
    Ok(ConformalEquivalenceReport {
        mismatch_detected: !mismatches.is_empty() && mismatches.iter().all(|&d| d),
        points,
        equivalent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    /// Every sample with whether `ι_X ω = dH` is solvable there.
    pub points: Vec<(Vec<Rational>, bool)>,
    /// Samples where `(dH, ω)` has even class.
    pub constraint_points: Vec<Vec<Rational>>,
}

/// Samples of the primary constraint set of `(ω, H)`.
pub fn primary_constraint_scan(omega: &PolyForm, h: &Polynomial, dom: &SampleDomain) -> Result<ConstraintReport> {
    let dh = PolyForm::differential(h);
    let points = map_points(dom, |p| {
        let t = dh.evaluate(p)?;
        let w = omega.evaluate(p)?;
        let even = classify(&t, &w)?.parity == Parity::Even;
        let solvable = liouville_solutions(&t, &w)?.is_some();
        assert_eq!(even, solvable, "even class must match solvability of ι_X ω = dH");
        Ok(even)
    })?;
    let constraint_points = points.iter().filter(|(_, e)| *e).map(|(p, _)| p.clone()).collect();
    Ok(ConstraintReport {
        points,
        constraint_points,
    })
}
