//! Independent oracles and random generators shared by the property suites.
//!
//! The oracle treats a k-form as the multilinear function
//! `α(v1,…,vk) = Σ_I a_I det[v_j^{I_l}]` and builds products from the
//! permutation-sum definitions. It never calls the library's wedge or
//! interior code.
#![allow(dead_code)]

pub mod checks;

use std::collections::BTreeMap;

use formclass_core::exterior::combinations;
use formclass_core::field::PolyVectorField;
use formclass_core::poly::Monomial;
use formclass_core::{int, rat, AltForm, Form, PolyForm, Polynomial, Rational};
use num::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

pub const CASES: u32 = 256;

/// Runs `test` on `CASES` inputs drawn from `strategy` with a fixed seed.
pub fn run_property<S, F>(seed: u64, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes));
    match runner.run(&strategy, test) {
        Ok(()) => Ok(()),
        Err(TestError::Fail(reason, input)) => Err(format!("{reason}; minimal input: {input:?}")),
        Err(TestError::Abort(reason)) => Err(format!("aborted: {reason}")),
    }
}

/// Draws one value from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(seed: u64, strategy: S) -> S::Value {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &bytes));
    strategy.new_tree(&mut runner).expect("strategy produces a value").current()
}

// ---------------------------------------------------------------- oracle

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (perm, negative) in permutations(n - 1) {
        // insert n-1 at every position; moving it left past j elements flips j times
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            let flips = perm.len() - pos;
            out.push((p, negative ^ (flips % 2 == 1)));
        }
    }
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut total = Rational::zero();
    for (perm, negative) in permutations(n) {
        let mut term = Rational::one();
        for (i, &j) in perm.iter().enumerate() {
            term *= &rows[i][j];
            if term.is_zero() {
                break;
            }
        }
        if negative {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// A k-form as a multilinear alternating function.
#[derive(Clone, Debug)]
pub struct Multilinear {
    pub dim: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<usize>, Rational>,
}

impl Multilinear {
    pub fn from_form(a: &AltForm) -> Self {
        Multilinear {
            dim: a.dim(),
            degree: a.degree(),
            coeffs: a.terms().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn eval(&self, vectors: &[Vec<Rational>]) -> Rational {
        assert_eq!(vectors.len(), self.degree);
        self.coeffs
            .iter()
            .map(|(idx, a)| {
                let rows: Vec<Vec<Rational>> =
                    vectors.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect();
                a * det(&rows)
            })
            .sum()
    }

    /// `α(e_{i1}, …, e_{ik})`: only the term on the sorted index set
    /// survives, weighted by the determinant of the 0/1 selection matrix.
    pub fn eval_basis(&self, indices: &[usize]) -> Rational {
        assert_eq!(indices.len(), self.degree);
        let mut key = indices.to_vec();
        key.sort_unstable();
        let Some(a) = self.coeffs.get(&key) else {
            return Rational::zero();
        };
        let k = indices.len();
        let mut det = 0i64;
        for (perm, negative) in permutations(k) {
            if (0..k).all(|r| indices[r] == key[perm[r]]) {
                det += if negative { -1 } else { 1 };
            }
        }
        a * int(det)
    }

    fn basis(&self, i: usize) -> Vec<Rational> {
        (0..self.dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
    }

    /// Reads coefficients back by evaluating on sorted basis tuples.
    pub fn to_form(&self, degree: usize, value: impl Fn(&[Vec<Rational>]) -> Rational) -> AltForm {
        let terms = combinations(self.dim, degree).into_iter().map(|idx| {
            let vs: Vec<Vec<Rational>> = idx.iter().map(|&i| self.basis(i)).collect();
            (idx, value(&vs))
        });
        Form::from_terms(self.dim, degree, terms.collect::<Vec<_>>())
    }

    pub fn as_form(&self) -> AltForm {
        self.to_form(self.degree, |vs| self.eval(vs))
    }
}

/// `(α∧β)(v) = 1/(p!q!) Σ_σ sgn(σ) α(v_σ(1..p)) β(v_σ(p+1..))`.
pub fn oracle_wedge(a: &AltForm, b: &AltForm) -> AltForm {
    let (ma, mb) = (Multilinear::from_form(a), Multilinear::from_form(b));
    let (p, q) = (a.degree(), b.degree());
    let n = p + q;
    if n > a.dim() {
        return Form::zero(a.dim(), n);
    }
    let perms = permutations(n);
    let norm = factorial(p) * factorial(q);
    let terms = combinations(a.dim(), n).into_iter().map(|idx| {
        let mut total = Rational::zero();
        for (perm, negative) in &perms {
            let left: Vec<usize> = perm[..p].iter().map(|&i| idx[i]).collect();
            let x = ma.eval_basis(&left);
            if x.is_zero() {
                continue;
            }
            let right: Vec<usize> = perm[p..].iter().map(|&i| idx[i]).collect();
            let t = x * mb.eval_basis(&right);
            if *negative {
                total -= t;
            } else {
                total += t;
            }
        }
        (idx, total / &norm)
    });
    Form::from_terms(a.dim(), n, terms.collect::<Vec<_>>())
}

/// `(ι_v α)(w1,…) = α(v, w1, …)`.
pub fn oracle_interior(a: &AltForm, v: &[Rational]) -> AltForm {
    let ma = Multilinear::from_form(a);
    ma.to_form(a.degree() - 1, |ws| {
        let mut args = vec![v.to_vec()];
        args.extend(ws.iter().cloned());
        ma.eval(&args)
    })
}

pub fn oracle_wedge_power(a: &AltForm, k: usize) -> AltForm {
    let mut acc = Form::one(a.dim());
    for _ in 0..k {
        acc = oracle_wedge(&acc, a);
    }
    acc
}

/// Rank of a matrix by plain fraction Gaussian elimination.
pub fn oracle_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &rows[rank][c];
                for k in c..cols {
                    let sub = &factor * &rows[rank][k];
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Skew matrix `W[i][j] = ω(e_i, e_j)` through the oracle.
pub fn oracle_skew(omega: &AltForm) -> Vec<Vec<Rational>> {
    let m = Multilinear::from_form(omega);
    let e = |i: usize| m.basis(i);
    (0..omega.dim())
        .map(|i| (0..omega.dim()).map(|j| m.eval(&[e(i), e(j)])).collect())
        .collect()
}

/// Class of `(τ, ω)` as `rank [W; τ] `: codimension of `Ker τ ∩ Ker ω`.
pub fn oracle_class(tau: &AltForm, omega: &AltForm) -> usize {
    let mut rows = oracle_skew(omega);
    let t = Multilinear::from_form(tau);
    rows.push((0..tau.dim()).map(|i| t.eval(&[t.basis(i)])).collect());
    oracle_rank(rows)
}

// ------------------------------------------------------------ generators

pub fn dim() -> impl Strategy<Value = usize> {
    2usize..=6
}

/// Small rationals, zero with probability about 3/8.
pub fn small_rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => Just(Rational::zero()),
        5 => (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
    ]
}

pub fn covector(m: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), m)
}

pub fn alt_form(m: usize, k: usize) -> impl Strategy<Value = AltForm> {
    let idx = combinations(m, k);
    prop::collection::vec(small_rational(), idx.len())
        .prop_map(move |cs| Form::from_terms(m, k, idx.iter().cloned().zip(cs).collect::<Vec<_>>()))
}

/// `Σ_{i<s} a_i ∧ b_i` with `s ≤ 3`: exercises every rank, not only full rank.
pub fn low_rank_two_form(m: usize) -> impl Strategy<Value = (AltForm, Vec<Vec<Rational>>)> {
    prop::collection::vec((covector(m), covector(m)), 0..=3).prop_map(move |pairs| {
        let mut w = Form::zero(m, 2);
        let mut factors = Vec::new();
        for (a, b) in pairs {
            let term = AltForm::covector(&a).wedge(&AltForm::covector(&b)).unwrap();
            w = w.plus(&term).unwrap();
            factors.push(a);
            factors.push(b);
        }
        (w, factors)
    })
}

/// Pairs covering every class: `τ` random, zero, or in the span of the
/// factors of `ω`; `ω` low-rank or fully random.
pub fn pair_in(m: usize) -> impl Strategy<Value = (AltForm, AltForm)> {
    let low = (low_rank_two_form(m), prop::collection::vec(small_rational(), 6), covector(m), 0u8..3).prop_map(
        move |((w, factors), weights, random, mode)| {
            let tau = match mode {
                0 => AltForm::covector(&random),
                1 => Form::zero(m, 1),
                _ => {
                    let mut t = vec![Rational::zero(); m];
                    for (f, c) in factors.iter().zip(&weights) {
                        for (ti, fi) in t.iter_mut().zip(f) {
                            *ti += c * fi;
                        }
                    }
                    AltForm::covector(&t)
                }
            };
            (tau, w)
        },
    );
    prop_oneof![3 => low, 1 => (alt_form(m, 1), alt_form(m, 2))]
}

pub fn pair() -> impl Strategy<Value = (AltForm, AltForm)> {
    dim().prop_flat_map(pair_in)
}

/// Up to three terms of total degree at most 2.
pub fn polynomial(m: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0u32..=2, m), -3i64..=3).prop_map(|(mut e, c)| {
        while e.iter().sum::<u32>() > 2 {
            let i = e.iter().position(|&x| x > 0).unwrap();
            e[i] -= 1;
        }
        (Monomial(e), int(c))
    });
    prop::collection::vec(term, 0..=3).prop_map(move |ts| Polynomial::from_terms(m, ts))
}

pub fn poly_form(m: usize, k: usize) -> impl Strategy<Value = PolyForm> {
    let idx = combinations(m, k);
    let coeff = prop_oneof![1 => Just(Polynomial::zero(m)), 1 => polynomial(m)];
    prop::collection::vec(coeff, idx.len())
        .prop_map(move |cs| Form::from_terms(m, k, idx.iter().cloned().zip(cs).collect::<Vec<_>>()))
}

pub fn poly_field(m: usize) -> impl Strategy<Value = PolyVectorField> {
    prop::collection::vec(polynomial(m), m).prop_map(PolyVectorField::new)
}

pub fn point(m: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-3i64..=3).prop_map(int), m)
}
