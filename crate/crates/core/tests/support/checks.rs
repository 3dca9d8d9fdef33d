//! Property bodies. Each `criterion_*` runs one suite with its own fixed
//! seed; the core test target and the acceptance harness both call them.

use formclass_core::exterior::combinations;
use formclass_core::linalg::kernel_basis;
use formclass_core::pair::{
    characteristic_space, characteristic_tensor, class_by_grassmann, class_of_pair, extended_characteristic_space,
    liouville_solutions, reeb_solutions, three_form_kernel_identity, verify_class_criteria,
};
use formclass_core::precontact::wedge_power_identity_check;
use formclass_core::{int, AltForm, Form, PolyForm, PolyVectorField, Polynomial, Rational};
use num::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::*;

type Outcome = Result<(), TestCaseError>;

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

/// Rank of `ω` through the oracle skew matrix, and the power criterion
/// `ω^{r} ≠ 0`, `ω^{r+1} = 0` through oracle wedge powers.
pub fn rank_parity((tau, omega): (AltForm, AltForm)) -> Outcome {
    let rank = ok(omega.two_form_rank())?;
    prop_assert_eq!(rank % 2, 0, "odd rank {}", rank);
    prop_assert_eq!(rank, oracle_rank(oracle_skew(&omega)));
    prop_assert_eq!(rank, ok(omega.rank_by_wedge_powers())?);
    let r = rank / 2;
    prop_assert!(r == 0 || !oracle_wedge_power(&omega, r).is_zero());
    prop_assert!(oracle_wedge_power(&omega, r + 1).is_zero());

    let criteria = ok(verify_class_criteria(&tau, &omega))?;
    prop_assert!(criteria.consistent, "{:?}", criteria);
    prop_assert_eq!(criteria.class, oracle_class(&tau, &omega));
    Ok(())
}

pub fn criterion_rank_parity() -> Result<(), String> {
    run_property(0x2a, pair(), rank_parity)
}

/// Image of the multilinear map equals the annihilator of the kernel, and
/// the kernel dimension matches the oracle contraction rank.
pub fn image_annihilator((m, k, seed): (usize, usize, AltForm)) -> Outcome {
    let alpha = seed;
    prop_assert_eq!(alpha.degree(), k);
    let image = ok(alpha.multilinear_image())?;
    let kernel = ok(alpha.kernel())?;
    prop_assert_eq!(&image, &kernel.annihilator());

    let rows: Vec<Vec<Rational>> = {
        let cols: Vec<AltForm> = (0..m)
            .map(|i| {
                let mut e = vec![Rational::zero(); m];
                e[i] = Rational::one();
                oracle_interior(&alpha, &e)
            })
            .collect();
        combinations(m, k - 1)
            .into_iter()
            .map(|idx| cols.iter().map(|c| c.coeff_or_zero(&idx)).collect())
            .collect()
    };
    prop_assert_eq!(kernel.dim(), m - oracle_rank(rows));
    Ok(())
}

pub fn graded_form() -> impl Strategy<Value = (usize, usize, AltForm)> {
    dim()
        .prop_flat_map(|m| (Just(m), 1..=m.min(4)))
        .prop_flat_map(|(m, k)| (Just(m), Just(k), alt_form(m, k)))
}

pub fn criterion_image_annihilator() -> Result<(), String> {
    run_property(0x2b, graded_form(), image_annihilator)
}

/// Reeb vectors exist exactly for odd class, Liouville vectors exactly for
/// even class; every reported solution satisfies its defining equations.
pub fn reeb_liouville_parity((tau, omega): (AltForm, AltForm)) -> Outcome {
    let class = oracle_class(&tau, &omega);
    prop_assert_eq!(ok(class_of_pair(&tau, &omega))?, class);
    let reeb = ok(reeb_solutions(&tau, &omega))?;
    let liouville = ok(liouville_solutions(&tau, &omega))?;
    prop_assert_eq!(reeb.is_some(), class % 2 == 1);
    prop_assert_eq!(liouville.is_some(), class % 2 == 0);
    prop_assert!(!(reeb.is_some() && liouville.is_some()));

    let kernel = ok(characteristic_space(&tau, &omega))?;
    if let Some(r) = reeb {
        let v = &r.particular.0;
        prop_assert_eq!(oracle_interior(&tau, v).scalar_value(), Rational::one());
        prop_assert!(oracle_interior(&omega, v).is_zero());
        prop_assert_eq!(&r.freedom, &kernel);
    }
    if let Some(l) = liouville {
        let v = &l.particular.0;
        prop_assert_eq!(oracle_interior(&omega, v), tau.clone());
        prop_assert_eq!(l.freedom, ok(omega.kernel())?);
    }
    Ok(())
}

pub fn criterion_reeb_liouville() -> Result<(), String> {
    run_property(0x2c, pair(), reeb_liouville_parity)
}

/// `B = τ⊗τ + ω` has rank equal to the class and kernel `𝒦`.
pub fn characteristic_tensor_rank((tau, omega): (AltForm, AltForm)) -> Outcome {
    let b = ok(characteristic_tensor(&tau, &omega))?;
    let class = oracle_class(&tau, &omega);
    let rows: Vec<Vec<Rational>> = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
    prop_assert_eq!(oracle_rank(rows), class);
    prop_assert_eq!(b.rank(), class);
    prop_assert_eq!(kernel_basis(&b), ok(characteristic_space(&tau, &omega))?);

    // entries against the definition
    let t = Multilinear::from_form(&tau);
    let w = Multilinear::from_form(&omega);
    let m = tau.dim();
    let e = |i: usize| -> Vec<Rational> { (0..m).map(|j| if i == j { int(1) } else { int(0) }).collect() };
    let (mut direct, mut transposed) = (true, true);
    for i in 0..m {
        for j in 0..m {
            let want = t.eval(&[e(i)]) * t.eval(&[e(j)]) + w.eval(&[e(i), e(j)]);
            direct &= *b.get(i, j) == want;
            transposed &= *b.get(j, i) == want;
        }
    }
    prop_assert!(direct || transposed, "B does not match τ⊗τ + ω");
    Ok(())
}

pub fn criterion_characteristic_tensor() -> Result<(), String> {
    run_property(0x2d, pair(), characteristic_tensor_rank)
}

/// Kernel route and Grassmann route give the same class.
pub fn grassmann_routes((tau, omega): (AltForm, AltForm)) -> Outcome {
    let by_kernel = ok(class_of_pair(&tau, &omega))?;
    let by_grassmann = ok(class_by_grassmann(&tau, &omega))?;
    prop_assert_eq!(by_kernel, by_grassmann);
    prop_assert_eq!(by_kernel, oracle_class(&tau, &omega));
    Ok(())
}

pub fn criterion_grassmann() -> Result<(), String> {
    run_property(0x2e, pair(), grassmann_routes)
}

/// `Ker(τ∧ω) = 𝒳` whenever `τ ≠ 0` and the class is at least 3.
pub fn three_form_kernel((tau, omega): (AltForm, AltForm)) -> Outcome {
    let class = oracle_class(&tau, &omega);
    prop_assume!(!tau.is_zero() && class >= 3);
    prop_assert_eq!(ok(three_form_kernel_identity(&tau, &omega))?, Some(true));

    let theta = oracle_wedge(&tau, &omega);
    let m = tau.dim();
    let cols: Vec<AltForm> = (0..m)
        .map(|i| {
            let mut e = vec![Rational::zero(); m];
            e[i] = Rational::one();
            oracle_interior(&theta, &e)
        })
        .collect();
    let rows: Vec<Vec<Rational>> = combinations(m, 2)
        .into_iter()
        .map(|idx| cols.iter().map(|c| c.coeff_or_zero(&idx)).collect())
        .collect();
    let extended = ok(extended_characteristic_space(&tau, &omega))?;
    prop_assert_eq!(extended.dim(), m - oracle_rank(rows));
    Ok(())
}

pub fn criterion_three_form_kernel() -> Result<(), String> {
    run_property(0x2f, pair(), three_form_kernel)
}

#[derive(Clone, Debug)]
pub struct ConformalInput {
    pub tau: PolyForm,
    pub omega: PolyForm,
    pub f: Polynomial,
    pub point: Vec<Rational>,
}

pub fn conformal_input() -> impl Strategy<Value = ConformalInput> {
    dim().prop_flat_map(|m| {
        (poly_form(m, 1), poly_form(m, 2), polynomial(m), point(m)).prop_map(|(tau, omega, f, point)| {
            ConformalInput { tau, omega, f, point }
        })
    })
}

/// `(df∧τ+ω)^n = n·df∧τ∧ω^{n−1} + ω^n` and `τ∧(df∧τ+ω)^n = τ∧ω^n` for
/// `n = 1, 2, 3`: exact on polynomial forms, and through the oracle at a
/// sample point.
pub fn lemma_identity(input: ConformalInput) -> Outcome {
    let ConformalInput { tau, omega, f, point } = input;
    let t = ok(tau.evaluate(&point))?;
    let w = ok(omega.evaluate(&point))?;
    let df: Vec<Rational> = (0..f.nvars()).map(|i| f.derivative(i).eval(&point)).collect();
    let df_tau = oracle_wedge(&AltForm::covector(&df), &t);
    let reduced = ok(df_tau.plus(&w))?;
    for n in 1..=3 {
        let check = ok(wedge_power_identity_check(&tau, &omega, &f, n))?;
        prop_assert!(check.power_identity && check.top_identity, "n = {}", n);

        let lhs = oracle_wedge_power(&reduced, n);
        let rhs = ok(oracle_wedge(&df_tau, &oracle_wedge_power(&w, n - 1))
            .scaled(&int(n as i64))
            .plus(&oracle_wedge_power(&w, n)))?;
        prop_assert_eq!(&lhs, &rhs, "pointwise n = {}", n);
        prop_assert_eq!(oracle_wedge(&t, &lhs), oracle_wedge(&t, &oracle_wedge_power(&w, n)));
    }
    Ok(())
}

pub fn criterion_lemma_identity() -> Result<(), String> {
    run_property(0x20, conformal_input(), lemma_identity)
}

#[derive(Clone, Debug)]
pub struct ProductInput {
    pub a: AltForm,
    pub b: AltForm,
    pub v: Vec<Rational>,
    pub two: AltForm,
    pub k: usize,
}

pub fn product_input() -> impl Strategy<Value = ProductInput> {
    dim()
        .prop_flat_map(|m| (Just(m), 0..=m.min(3), 0..=m.min(3), 1..=3usize))
        .prop_flat_map(|(m, p, q, k)| {
            (alt_form(m, p), alt_form(m, q), covector(m), alt_form(m, 2), Just(k))
                .prop_map(|(a, b, v, two, k)| ProductInput { a, b, v, two, k })
        })
}

/// Library wedge, interior and wedge power agree with the permutation-sum
/// oracle.
pub fn oracle_equivalence(input: ProductInput) -> Outcome {
    let ProductInput { a, b, v, two, k } = input;
    prop_assert_eq!(ok(a.wedge(&b))?, oracle_wedge(&a, &b));
    if a.degree() > 0 {
        prop_assert_eq!(ok(a.interior(&v))?, oracle_interior(&a, &v));
    }
    if b.degree() > 0 {
        prop_assert_eq!(ok(b.interior(&v))?, oracle_interior(&b, &v));
    }
    prop_assert_eq!(two.wedge_power(k), oracle_wedge_power(&two, k));
    prop_assert_eq!(Multilinear::from_form(&a).as_form(), a);
    Ok(())
}

pub fn criterion_oracle_equivalence() -> Result<(), String> {
    run_property(0x21, product_input(), oracle_equivalence)
}

#[derive(Clone, Debug)]
pub struct DerivationInput {
    pub a: PolyForm,
    pub b: PolyForm,
    pub x: PolyVectorField,
}

pub fn derivation_input() -> impl Strategy<Value = DerivationInput> {
    dim()
        .prop_flat_map(|m| (Just(m), 0..=2usize, 0..=2usize))
        .prop_flat_map(|(m, p, q)| {
            (poly_form(m, p), poly_form(m, q), poly_field(m)).prop_map(|(a, b, x)| DerivationInput { a, b, x })
        })
}

fn sign(m: usize, p: usize) -> Polynomial {
    Polynomial::constant(m, int(if p % 2 == 0 { 1 } else { -1 }))
}

/// `d∘d = 0`, the graded Leibniz rules for `d` and `ι_X`, and `L_X d = d L_X`.
pub fn derivations(input: DerivationInput) -> Outcome {
    let DerivationInput { a, b, x } = input;
    let m = a.dim();
    let s = |p: usize| sign(m, p);
    let p = a.degree();

    prop_assert!(a.exterior_derivative().exterior_derivative().is_zero());

    let ab = ok(a.wedge(&b))?;
    let leibniz = ok(ok(a.exterior_derivative().wedge(&b))?.plus(&ok(a.wedge(&b.exterior_derivative()))?.scaled(&s(p))))?;
    prop_assert_eq!(ab.exterior_derivative(), leibniz);

    if p + b.degree() > 0 {
        let lhs = ok(ab.interior_field(&x))?;
        let left = if p > 0 { ok(ok(a.interior_field(&x))?.wedge(&b))? } else { Form::zero(m, p + b.degree() - 1) };
        let right = if b.degree() > 0 {
            ok(a.wedge(&ok(b.interior_field(&x))?))?.scaled(&s(p))
        } else {
            Form::zero(m, p + b.degree() - 1)
        };
        prop_assert_eq!(lhs, ok(left.plus(&right))?);
    }

    let da = a.exterior_derivative();
    prop_assert_eq!(ok(da.lie_derivative(&x))?, ok(a.lie_derivative(&x))?.exterior_derivative());

    if p == 0 {
        let f = a.coeff_or_zero(&[]);
        prop_assert_eq!(PolyForm::differential(&f), da);
        prop_assert_eq!(ok(a.lie_derivative(&x))?.coeff_or_zero(&[]), x.apply(&f));
    }
    Ok(())
}

pub fn criterion_derivations() -> Result<(), String> {
    run_property(0x22, derivation_input(), derivations)
}
