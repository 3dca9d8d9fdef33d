//! Conformal changes `(τ, ω) ↦ (e^f τ, e^f(df∧τ + ω))`.
//!
//! The factor `e^f` never appears: it vanishes nowhere, so the rescaled pair
//! has the same kernels as the reduced pair `(τ, df∧τ + ω)`, and every
//! statement about classes is computed on the reduced pair.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::field::{kernel_fields, span_at, PolyForm, PolyVectorField};
use crate::linalg::Vector;
use crate::pair::{classify, Parity, PairReport, Witness};
use crate::poly::Polynomial;
use crate::scan::{grid_scan, involutive_at, map_points, SampleDomain, ScanReport};
use crate::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalPair {
    pub base_tau: PolyForm,
    pub base_omega: PolyForm,
    /// The exponent `f` of the factor `e^f`.
    pub f: Polynomial,
}

impl ConformalPair {
    pub fn new(base_tau: PolyForm, base_omega: PolyForm, f: Polynomial) -> Self {
        ConformalPair { base_tau, base_omega, f }
    }

    /// `df∧τ + ω`.
    pub fn reduced_omega(&self) -> PolyForm {
        PolyForm::differential(&self.f)
            .wedge(&self.base_tau)
            .and_then(|w| w.plus(&self.base_omega))
            .expect("forms share the chart")
    }

    /// Classes of the rescaled pair on the samples.
    pub fn scan(&self, dom: &SampleDomain) -> Result<ScanReport> {
        grid_scan(&self.base_tau, &self.reduced_omega(), dom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgePowerIdentity {
    pub n: usize,
    /// `(df∧τ+ω)^n = n·df∧τ∧ω^{n−1} + ω^n`
    pub power_identity: bool,
    /// `τ∧(df∧τ+ω)^n = τ∧ω^n`
    pub top_identity: bool,
}

/// Checks both identities as polynomial-form equalities (the exponential
/// factors on the two sides agree and are dropped).
pub fn wedge_power_identity_check(
    tau: &PolyForm,
    omega: &PolyForm,
    f: &Polynomial,
    n: usize,
) -> Result<WedgePowerIdentity> {
    assert!(n >= 1, "n must be positive");
    let pair = ConformalPair::new(tau.clone(), omega.clone(), f.clone());
    let reduced = pair.reduced_omega();
    let lhs = reduced.wedge_power(n);
    let df_tau = PolyForm::differential(f).wedge(tau)?;
    let rhs = df_tau
        .wedge(&omega.wedge_power(n - 1))?
        .scaled(&Polynomial::constant(tau.dim(), int(n as i64)))
        .plus(&omega.wedge_power(n))?;
    let top_lhs = tau.wedge(&lhs)?;
    let top_rhs = tau.wedge(&omega.wedge_power(n))?;
    Ok(WedgePowerIdentity {
        n,
        power_identity: lhs == rhs,
        top_identity: top_lhs == top_rhs,
    })
}

fn require_parity(scan: &ScanReport, parity: Parity) -> Result<()> {
    if let Some((p, r)) = scan.points.iter().find(|(_, r)| r.parity != parity) {
        return Err(Error::BaseParity {
            point: p.clone(),
            class: r.class,
            expected: parity.as_str(),
        });
    }
    Ok(())
}

fn df_at(f: &Polynomial, p: &[Rational]) -> Vector {
    Vector((0..f.nvars()).map(|i| f.derivative(i).eval(p)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityChangePoint {
    /// `L_{Δ₀} f + 1` for the particular Liouville vector `Δ₀`.
    pub liouville_residual: Rational,
    /// `L_Γ f` for a basis `Γ` of `Ker ω`.
    pub kernel_residuals: Vec<Rational>,
    pub holds: bool,
    pub base_class: usize,
    pub conformal_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityChangeReport {
    pub points: Vec<(Vec<Rational>, ParityChangePoint)>,
    /// `L_Δ f = −1` for every Liouville vector at every sample.
    pub holds: bool,
    pub conformal: ScanReport,
    pub conformal_odd_everywhere: bool,
    /// At every sample: the condition holds exactly when the rescaled pair
    /// has odd class one below the base class.
    pub cross_check: bool,
}

/// Whether `e^f` turns the even-class pair `(τ, ω)` into an odd one, by the
/// finite condition `L_{Δ₀} f = −1` and `L_Γ f = 0` on a basis of `Ker ω`.
pub fn parity_change_check(
    tau: &PolyForm,
    omega: &PolyForm,
    f: &Polynomial,
    dom: &SampleDomain,
) -> Result<ParityChangeReport> {
    let base = grid_scan(tau, omega, dom)?;
    require_parity(&base, Parity::Even)?;
    let pair = ConformalPair::new(tau.clone(), omega.clone(), f.clone());
    let conformal = pair.scan(dom)?;

    let points = map_points(dom, |p| {
        let w = omega.evaluate(p)?;
        let t = tau.evaluate(p)?;
        let report = classify(&t, &w)?;
        let Witness::Liouville(liouville) = &report.witness else {
            unreachable!("even class has Liouville vectors")
        };
        let df = df_at(f, p);
        let liouville_residual = df.dot(&liouville.particular) + Rational::one();
        let kernel_residuals: Vec<Rational> = w
            .kernel()?
            .basis_vectors()
            .iter()
            .map(|g| df.dot(g))
            .collect();
        let holds = liouville_residual.is_zero() && kernel_residuals.iter().all(Zero::is_zero);
        let conformal_class = conformal.class_at(p).expect("same samples");
        Ok(ParityChangePoint {
            liouville_residual,
            kernel_residuals,
            holds,
            base_class: report.class,
            conformal_class,
        })
    })?;

    let holds = points.iter().all(|(_, c)| c.holds);
    let cross_check = points.iter().all(|(_, c)| {
        let dropped = c.conformal_class % 2 == 1 && c.conformal_class + 1 == c.base_class;
        c.holds == dropped
    });
    Ok(ParityChangeReport {
        conformal_odd_everywhere: conformal.parities.iter().all(|&p| p == Parity::Odd),
        points,
        holds,
        conformal,
        cross_check,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPreservationPoint {
    /// `L_Γ f` for a basis `Γ` of `𝒦`.
    pub residuals: Vec<Rational>,
    pub holds: bool,
    /// `(ι_{R₀} df) τ∧ω^r = df∧ω^r` for the particular Reeb vector `R₀`.
    pub reeb_identity: bool,
    pub base_class: usize,
    pub conformal_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPreservationReport {
    pub points: Vec<(Vec<Rational>, OddPreservationPoint)>,
    pub holds: bool,
    pub conformal: ScanReport,
    /// At every sample: the `𝒦` condition, the Reeb identity and "the
    /// rescaled pair keeps the base class" all agree.
    pub cross_check: bool,
}

/// Whether `e^f` keeps the odd class of `(τ, ω)`: `L_Γ f = 0` on `𝒦`.
pub fn odd_preservation_check(
    tau: &PolyForm,
    omega: &PolyForm,
    f: &Polynomial,
    dom: &SampleDomain,
) -> Result<OddPreservationReport> {
    let base = grid_scan(tau, omega, dom)?;
    require_parity(&base, Parity::Odd)?;
    let conformal = ConformalPair::new(tau.clone(), omega.clone(), f.clone()).scan(dom)?;

    let points = map_points(dom, |p| {
        let t = tau.evaluate(p)?;
        let w = omega.evaluate(p)?;
        let report = classify(&t, &w)?;
        let Witness::Reeb(reeb) = &report.witness else {
            unreachable!("odd class has Reeb vectors")
        };
        let df = df_at(f, p);
        let residuals: Vec<Rational> = report
            .characteristic
            .basis_vectors()
            .iter()
            .map(|g| df.dot(g))
            .collect();
        let r = report.omega_rank / 2;
        let wr = w.wedge_power(r);
        let df_form = AltForm::covector(&df);
        let lhs = t.wedge(&wr)?.scaled(&df.dot(&reeb.particular));
        let reeb_identity = lhs == df_form.wedge(&wr)?;
        Ok(OddPreservationPoint {
            holds: residuals.iter().all(Zero::is_zero),
            residuals,
            reeb_identity,
            base_class: report.class,
            conformal_class: conformal.class_at(p).expect("same samples"),
        })
    })?;

    let holds = points.iter().all(|(_, c)| c.holds);
    let cross_check = points
        .iter()
        .all(|(_, c)| c.holds == c.reeb_identity && c.holds == (c.conformal_class == c.base_class));
    Ok(OddPreservationReport {
        points,
        holds,
        conformal,
        cross_check,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSource {
    Provided,
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SufficientConditionsReport {
    pub source: FieldSource,
    /// Polynomial fields spanning `Ker ω` at every sample.
    pub kernel_fields: Vec<PolyVectorField>,
    /// `Ker ω` is closed under brackets at every sample.
    pub involutive: bool,
    /// `ι_Γ ι_{Γ'} dω = 0` for a pointwise basis of `Ker ω`, at every sample.
    pub kernel_pairs_condition: bool,
    /// `ι_{Δ₀} ι_Γ dω − ι_Γ dτ = 0`, the pointwise form of
    /// `[Δ₀, Γ] ∈ Ker ω`, at every sample.
    pub bracket_condition: bool,
    /// `[Δ, Γ] ∈ Ker ω` for a supplied polynomial Liouville field `Δ` and
    /// the kernel fields, at every sample.
    pub liouville_bracket: Option<bool>,
    pub holds: bool,
}

/// Hypothesis checks for the existence of a parity-changing factor. The
/// factor itself is not constructed.
///
/// `fields`, when given, must span `Ker ω` at every sample; otherwise
/// spanning fields are computed by polynomial elimination.
pub fn sufficient_conditions_check(
    tau: &PolyForm,
    omega: &PolyForm,
    dom: &SampleDomain,
    fields: Option<Vec<PolyVectorField>>,
    liouville: Option<&PolyVectorField>,
) -> Result<SufficientConditionsReport> {
    let base = grid_scan(tau, omega, dom)?;
    require_parity(&base, Parity::Even)?;
    let m = tau.dim();
    let (source, kernel_fields) = match fields {
        Some(f) => (FieldSource::Provided, f),
        None => (FieldSource::Computed, kernel_fields(omega)?),
    };
    for (p, report) in &base.points {
        let ker = omega.evaluate(p)?.kernel()?;
        if span_at(&kernel_fields, m, p)? != ker {
            return Err(Error::SpanningFieldsUnavailable(format!(
                "{} fields do not span Ker ω at a sample with class {}",
                match source {
                    FieldSource::Provided => "provided",
                    FieldSource::Computed => "computed",
                },
                report.class
            )));
        }
    }
    let involutive = involutive_at(&kernel_fields, m, dom)?;

    let d_omega = omega.exterior_derivative();
    let d_tau = tau.exterior_derivative();
    let pointwise = map_points(dom, |p| {
        let report: PairReport = classify(&tau.evaluate(p)?, &omega.evaluate(p)?)?;
        let Witness::Liouville(liouville) = &report.witness else {
            unreachable!("even class has Liouville vectors")
        };
        let dw = d_omega.evaluate(p)?;
        let dt = d_tau.evaluate(p)?;
        let basis = omega.evaluate(p)?.kernel()?.basis_vectors();
        let mut pairs = true;
        let mut bracket = true;
        for g in &basis {
            let ig = dw.interior(g)?;
            for h in &basis {
                pairs &= ig.interior(h)?.is_zero();
            }
            let lhs = ig.interior(&liouville.particular)?.minus(&dt.interior(g)?)?;
            bracket &= lhs.is_zero();
        }
        Ok((pairs, bracket))
    })?;
    let kernel_pairs_condition = pointwise.iter().all(|(_, (a, _))| *a);
    let bracket_condition = pointwise.iter().all(|(_, (_, b))| *b);

    let liouville_bracket = match liouville {
        Some(delta) => {
            let brackets: Vec<PolyVectorField> = kernel_fields
                .iter()
                .map(|g| delta.lie_bracket(g))
                .collect::<Result<_>>()?;
            let ok = map_points(dom, |p| {
                let ker = omega.evaluate(p)?.kernel()?;
                let mut inside = true;
                for b in &brackets {
                    inside &= ker.contains_vector(&b.evaluate(p)?);
                }
                Ok(inside)
            })?;
            Some(ok.iter().all(|(_, b)| *b))
        }
        None => None,
    };

    let holds = involutive && bracket_condition && liouville_bracket.unwrap_or(true);
    Ok(SufficientConditionsReport {
        source,
        kernel_fields,
        involutive,
        kernel_pairs_condition,
        bracket_condition,
        liouville_bracket,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::poly::parse_polynomial;
    use std::collections::BTreeSet;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn poly_form(vars: &[String], degree: usize, terms: &[(&[usize], &str)]) -> PolyForm {
        Form::from_terms(
            vars.len(),
            degree,
            terms
                .iter()
                .map(|(idx, s)| (idx.to_vec(), parse_polynomial(s, vars).unwrap())),
        )
    }

    fn xyzt() -> Vec<String> {
        names(&["x", "y", "z", "t"])
    }

    #[test]
    fn rescaled_pair_gains_a_class_off_the_hyperplane() {
        let v = xyzt();
        let tau = poly_form(&v, 1, &[(&[2], "1")]);
        let omega = poly_form(&v, 2, &[(&[0, 1], "1")]);
        let f = parse_polynomial("1/2*t^2", &v).unwrap();
        let pair = ConformalPair::new(tau, omega, f);
        assert_eq!(pair.reduced_omega(), poly_form(&v, 2, &[(&[3, 2], "t"), (&[0, 1], "1")]));
        let scan = pair.scan(&SampleDomain::default_for(&[false; 4])).unwrap();
        assert_eq!(scan.classes, BTreeSet::from([3, 4]));
        for (p, r) in &scan.points {
            assert_eq!(r.class, if p[3].is_zero() { 3 } else { 4 });
        }
    }

    #[test]
    fn lemma_identities() {
        let v = xyzt();
        let tau = poly_form(&v, 1, &[(&[2], "1"), (&[0], "x*y")]);
        let omega = poly_form(&v, 2, &[(&[0, 1], "1"), (&[2, 3], "t - y")]);
        let f = parse_polynomial("1/2*t^2 + x", &v).unwrap();
        for n in 1..=3 {
            let check = wedge_power_identity_check(&tau, &omega, &f, n).unwrap();
            assert!(check.power_identity && check.top_identity, "n = {n}");
        }
    }

    #[test]
    fn no_factor_changes_the_twisted_pair() {
        let v = xyzt();
        let tau = poly_form(&v, 1, &[(&[2], "1")]);
        let omega = poly_form(&v, 2, &[(&[3, 2], "1"), (&[0, 2], "-y"), (&[1, 2], "x")]);
        let dom = SampleDomain::default_for(&[false; 4]);
        let f = parse_polynomial("-t", &v).unwrap();
        let report = parity_change_check(&tau, &omega, &f, &dom).unwrap();
        assert!(!report.holds);
        assert!(report.cross_check);
        let constant = parity_change_check(&tau, &omega, &Polynomial::constant(4, int(3)), &dom).unwrap();
        assert!(!constant.holds);

        let sufficient = sufficient_conditions_check(&tau, &omega, &dom, None, None).unwrap();
        assert!(!sufficient.involutive);
        assert!(!sufficient.kernel_pairs_condition);
        assert!(!sufficient.holds);
    }

    #[test]
    fn lagrangian_form_changes_parity() {
        let v = names(&["q", "v", "s"]);
        let eta = poly_form(&v, 1, &[(&[2], "1"), (&[0], "-s")]);
        let deta = eta.exterior_derivative();
        let dom = SampleDomain::default_for(&[false; 3]);
        let f = parse_polynomial("-q", &v).unwrap();
        let report = parity_change_check(&eta, &deta, &f, &dom).unwrap();
        assert!(report.holds);
        assert!(report.cross_check);
        assert_eq!(report.conformal.classes, BTreeSet::from([1]));

        let sufficient = sufficient_conditions_check(&eta, &deta, &dom, None, None).unwrap();
        assert!(sufficient.holds && sufficient.kernel_pairs_condition);
    }

    #[test]
    fn odd_parity_preservation() {
        let v = xyzt();
        let tau = poly_form(&v, 1, &[(&[3], "1")]);
        let omega = poly_form(&v, 2, &[(&[0, 1], "1"), (&[1, 2], "y")]);
        let dom = SampleDomain::default_for(&[false; 4]);
        let kept = odd_preservation_check(&tau, &omega, &parse_polynomial("t", &v).unwrap(), &dom).unwrap();
        assert!(kept.holds && kept.cross_check);
        let lost = odd_preservation_check(&tau, &omega, &parse_polynomial("x", &v).unwrap(), &dom).unwrap();
        assert!(!lost.holds && lost.cross_check);
        for (p, c) in &lost.points {
            assert_eq!(c.holds, p[1].is_zero());
        }
        assert!(matches!(
            parity_change_check(&tau, &omega, &Polynomial::zero(4), &dom),
            Err(Error::BaseParity { .. })
        ));
    }

    #[test]
    fn contact_forms_keep_odd_class_under_any_factor() {
        let v = names(&["q", "p", "s"]);
        let eta = poly_form(&v, 1, &[(&[2], "1"), (&[0], "-p")]);
        let dom = SampleDomain::default_for(&[false; 3]);
        let f = parse_polynomial("q^2*p - s + 3*p*s", &v).unwrap();
        let report = odd_preservation_check(&eta, &eta.exterior_derivative(), &f, &dom).unwrap();
        assert!(report.holds && report.cross_check);
        assert!(report.points.iter().all(|(_, c)| c.reeb_identity));
    }
}
