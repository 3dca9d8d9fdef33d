//! Shared inputs for the benchmarks.

use formclass_core::{int, parse_polynomial, AltForm, PolyForm, Rational, SampleDomain};

pub const R7_COORDINATES: [&str; 7] = ["x", "y", "z", "px", "py", "pz", "s"];

/// `η = ds − px dx + s dy − pz dz` on R^7.
pub fn singular_lagrangian_eta() -> PolyForm {
    let vars: Vec<String> = R7_COORDINATES.iter().map(|s| s.to_string()).collect();
    let p = |text: &str| parse_polynomial(text, &vars).expect("valid polynomial");
    PolyForm::from_terms(7, 1, [(vec![0], p("-px")), (vec![1], p("s")), (vec![2], p("-pz")), (vec![6], p("1"))])
}

/// A small grid in R^7 with two values per axis.
pub fn r7_domain() -> SampleDomain {
    let axes = (0..7).map(|i| vec![int(-1), int(i as i64 % 3)]).collect();
    SampleDomain::new(axes, Vec::new()).expect("valid domain")
}

/// Dense constant pair `(τ, ω)` in dimension `dim`, with integer
/// coefficients drawn from a fixed linear congruential sequence.
pub fn dense_pair(dim: usize, seed: u64) -> (AltForm, AltForm) {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        int(((state >> 33) % 7) as i64 - 3)
    };
    let tau = AltForm::from_terms(dim, 1, (0..dim).map(|i| (vec![i], next())).collect::<Vec<_>>());
    let mut terms: Vec<(Vec<usize>, Rational)> = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            terms.push((vec![i, j], next()));
        }
    }
    (tau, AltForm::from_terms(dim, 2, terms))
}

/// A generic point of R^7.
pub fn r7_point() -> Vec<Rational> {
    [2, -1, 3, 1, 0, -2, 1].iter().map(|&v| int(v)).collect()
}
