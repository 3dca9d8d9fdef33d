//! Precontact forms: classification on samples, Darboux models,
//! presymplectization, conformal changes and Hamiltonian dynamics.
//!
//! A 1-form `η` is precontact when it vanishes nowhere and `(η, dη)` has
//! constant class. Both conditions are checked on a [`SampleDomain`] only.

mod conformal;
mod hamiltonian;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::field::{PolyForm, PolyVectorField};
use crate::pair::{verify_class_criteria, Parity};
use crate::poly::Polynomial;
use crate::scan::{grid_scan, map_points, SampleDomain, ScanReport};
use crate::{int, Rational};

pub use conformal::{
    odd_preservation_check, parity_change_check, sufficient_conditions_check, wedge_power_identity_check,
    ConformalPair, FieldSource, OddPreservationPoint, OddPreservationReport, ParityChangePoint,
    ParityChangeReport, SufficientConditionsReport, WedgePowerIdentity,
};
pub use hamiltonian::{
    conformal_equivalence_check, hamiltonian_solutions_at, necessary_conditions_at, primary_constraint_scan,
    ConformalEquivalencePoint, ConformalEquivalenceReport, ConstraintReport, HamiltonianSolutionSet,
    NecessaryConditions,
};

/// Normal form suggested by the sampled class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DarbouxFamily {
    /// `ds − Σ_{i≤r} p_i dq^i`, class `2r+1`.
    OddModel { r: usize, m: usize },
    /// `Σ_{i≤r+1} p_i dq^i`, class `2r+2`.
    EvenModel { r: usize, m: usize },
    NotConstant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecontactReport {
    pub scan: ScanReport,
    pub nowhere_vanishing_on_samples: bool,
    pub class_values: BTreeSet<usize>,
    pub constant_on_samples: bool,
    /// Precontact on the samples: nowhere vanishing with a single class.
    pub precontact: bool,
    /// `Some` when the class is constant and positive.
    pub r: Option<usize>,
    pub parity: Option<Parity>,
    pub darboux_family: DarbouxFamily,
    /// The pointwise wedge-power criteria give the same class as the kernels
    /// at every sample.
    pub wedge_route_agrees: bool,
    /// For constant odd class `2r+1`: `(dη)^{r+1} = 0` as a polynomial form
    /// and `η∧(dη)^r ≠ 0` at every sample. For constant even class `2r+2`:
    /// `η∧(dη)^{r+1} = 0` as a polynomial form and `(dη)^{r+1} ≠ 0` at every
    /// sample. `None` when the class is not constant.
    pub identity_criteria: Option<bool>,
}

/// Classifies `η` on the samples by both the kernel and the wedge route.
pub fn precontact_report(eta: &PolyForm, dom: &SampleDomain) -> Result<PrecontactReport> {
    let deta = eta.exterior_derivative();
    let scan = grid_scan(eta, &deta, dom)?;
    let criteria = map_points(dom, |p| verify_class_criteria(&eta.evaluate(p)?, &deta.evaluate(p)?))?;
    let wedge_route_agrees = criteria
        .iter()
        .zip(&scan.points)
        .all(|((_, c), (_, r))| c.consistent && c.class == r.class);

    let m = eta.dim();
    let class = scan.constant_class().filter(|&c| c > 0);
    let (r, parity, darboux_family) = match class {
        Some(c) if c % 2 == 1 => (Some(c / 2), Some(Parity::Odd), DarbouxFamily::OddModel { r: c / 2, m }),
        Some(c) => (Some(c / 2 - 1), Some(Parity::Even), DarbouxFamily::EvenModel { r: c / 2 - 1, m }),
        None => (None, None, DarbouxFamily::NotConstant),
    };

    let identity_criteria = match class {
        Some(c) => {
            let k = c / 2;
            let power = deta.wedge_power(k);
            let next = deta.wedge_power(k + 1);
            Some(if c % 2 == 1 {
                let top = eta.wedge(&power)?;
                next.is_zero() && nonzero_at_all(&top, dom)?
            } else {
                let top = eta.wedge(&power)?;
                top.is_zero() && nonzero_at_all(&power, dom)?
            })
        }
        None => None,
    };

    let nowhere_vanishing_on_samples = !scan.tau_vanishes_somewhere;
    Ok(PrecontactReport {
        nowhere_vanishing_on_samples,
        class_values: scan.classes.clone(),
        constant_on_samples: scan.constant_on_samples,
        precontact: nowhere_vanishing_on_samples && scan.constant_on_samples,
        r,
        parity,
        darboux_family,
        wedge_route_agrees,
        identity_criteria,
        scan,
    })
}

fn nonzero_at_all(form: &PolyForm, dom: &SampleDomain) -> Result<bool> {
    Ok(map_points(dom, |p| Ok(!form.evaluate(p)?.is_zero()))?
        .iter()
        .all(|(_, ok)| *ok))
}

/// Coordinate names of the model on `ℝ^m`: `q1…, p1…, s, u1…` (no `s` for
/// the even model).
pub fn model_coordinates(parity: Parity, r: usize, m: usize) -> Result<Vec<String>> {
    let (k, with_s) = model_shape(parity, r, m)?;
    let mut names: Vec<String> = (1..=k).map(|i| format!("q{i}")).collect();
    names.extend((1..=k).map(|i| format!("p{i}")));
    if with_s {
        names.push("s".into());
    }
    let used = names.len();
    names.extend((1..=m - used).map(|i| format!("u{i}")));
    Ok(names)
}

fn model_shape(parity: Parity, r: usize, m: usize) -> Result<(usize, bool)> {
    let (k, with_s, class) = match parity {
        Parity::Odd => (r, true, 2 * r + 1),
        Parity::Even => (r + 1, false, 2 * r + 2),
    };
    if class > m {
        return Err(Error::DimensionTooSmall { dim: m, class });
    }
    Ok((k, with_s))
}

/// The Darboux model form in the coordinates of [`model_coordinates`].
pub fn darboux_model(parity: Parity, r: usize, m: usize) -> Result<PolyForm> {
    let (k, with_s) = model_shape(parity, r, m)?;
    let sign = if with_s { -1 } else { 1 };
    let mut terms: Vec<(Vec<usize>, Polynomial)> = (0..k)
        .map(|i| (vec![i], Polynomial::var(m, k + i).scale(&int(sign))))
        .collect();
    if with_s {
        terms.push((vec![2 * k], Polynomial::one(m)));
    }
    Ok(Form::from_terms(m, 1, terms))
}

/// Exact equality with a model form. No change of coordinates is searched.
pub fn model_equals(eta: &PolyForm, model: &PolyForm) -> bool {
    eta == model
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presymplectization {
    /// `zη` on `ℝ^{m+1}`, with `z` the last coordinate.
    pub form: PolyForm,
    /// `z ∂z`.
    pub liouville: PolyVectorField,
    /// `ι_{z∂z} d(zη) = zη` as a polynomial identity.
    pub liouville_identity: bool,
}

/// `η ↦ zη` on `ℝ^m × ℝ^×`.
pub fn presymplectize(eta: &PolyForm) -> Presymplectization {
    let n = eta.dim() + 1;
    let z = Polynomial::var(n, n - 1);
    let form = eta.extend_dim(n).scaled(&z);
    let mut liouville = PolyVectorField::zero(n);
    liouville.components[n - 1] = z;
    let contracted = form
        .exterior_derivative()
        .interior_field(&liouville)
        .expect("same dimension");
    Presymplectization {
        liouville_identity: contracted == form,
        form,
        liouville,
    }
}

/// Default nonzero samples for the `z` coordinate.
pub fn default_z_values() -> Vec<Rational> {
    [-2, -1, 1, 2].into_iter().map(int).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresymplectizationScan {
    pub presymplectization: Presymplectization,
    pub base: ScanReport,
    pub lifted: ScanReport,
    /// Per lifted point: the observed class and the class of `η` at the
    /// base point rounded up to even.
    pub comparisons: Vec<(Vec<Rational>, usize, usize)>,
    pub agrees_with_expected: bool,
}

/// Scans `η` on `dom` and `zη` on `dom × z_values`, comparing the lifted
/// class with the base class rounded up to even.
pub fn presymplectize_scan(
    eta: &PolyForm,
    dom: &SampleDomain,
    z_values: Vec<Rational>,
) -> Result<PresymplectizationScan> {
    let pre = presymplectize(eta);
    let base = grid_scan(eta, &eta.exterior_derivative(), dom)?;
    let lifted_dom = dom.extended(z_values)?;
    let lifted = grid_scan(&pre.form, &pre.form.exterior_derivative(), &lifted_dom)?;
    let m = eta.dim();
    let comparisons: Vec<(Vec<Rational>, usize, usize)> = lifted
        .points
        .iter()
        .map(|(p, r)| {
            let base_class = base.class_at(&p[..m]).expect("lifted point projects to a sample");
            (p.clone(), r.class, base_class + base_class % 2)
        })
        .collect();
    let agrees_with_expected = comparisons.iter().all(|(_, got, want)| got == want);
    Ok(PresymplectizationScan {
        presymplectization: pre,
        base,
        lifted,
        comparisons,
        agrees_with_expected,
    })
}
