//! Sampling a chart on a finite grid.
//!
//! A scan classifies a polynomial pair at every sample point. Its summary
//! only ever speaks about the sampled points.

use std::collections::BTreeSet;

use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{span_at, PolyForm, PolyVectorField};
use crate::pair::{classify, PairReport, Parity};
use crate::{int, Rational};

/// Most points a default grid may have.
pub const DEFAULT_GRID_LIMIT: usize = 3125;

/// A finite grid (product of per-coordinate value lists) plus extra points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleDomain {
    axes: Vec<Vec<Rational>>,
    extra: Vec<Vec<Rational>>,
}

impl SampleDomain {
    /// Fails if there are no points at all or an extra point has the wrong
    /// dimension.
    pub fn new(axes: Vec<Vec<Rational>>, extra: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = axes.len();
        for p in &extra {
            if p.len() != dim {
                return Err(Error::PointDimension {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let dom = SampleDomain { axes, extra };
        if dom.len() == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(dom)
    }

    /// Only the given points.
    pub fn points_only(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(vec![Vec::new(); dim], points)
    }

    /// The default grid: `{-2, …, 2}` on every coordinate, shrunk to
    /// `{-1, 0, 1}`, `{0, 1}` and finally `{1}` until the grid has at most
    /// [`DEFAULT_GRID_LIMIT`] points. Coordinates flagged `nonzero` drop 0.
    pub fn default_for(nonzero: &[bool]) -> Self {
        let ladders: [&[i64]; 4] = [&[-2, -1, 0, 1, 2], &[-1, 0, 1], &[0, 1], &[1]];
        let axes_for = |values: &[i64]| -> Vec<Vec<Rational>> {
            nonzero
                .iter()
                .map(|&nz| {
                    values
                        .iter()
                        .filter(|&&v| !(nz && v == 0))
                        .map(|&v| int(v))
                        .collect()
                })
                .collect()
        };
        for values in ladders {
            let axes = axes_for(values);
            let size = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
            if size.is_some_and(|n| n <= DEFAULT_GRID_LIMIT) {
                return SampleDomain { axes, extra: Vec::new() };
            }
        }
        SampleDomain {
            axes: axes_for(&[1]),
            extra: Vec::new(),
        }
    }

    /// Replaces the sample list of one coordinate.
    pub fn with_axis(mut self, i: usize, values: Vec<Rational>) -> Self {
        self.axes[i] = values;
        self
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<Rational>] {
        &self.axes
    }

    pub fn extra(&self) -> &[Vec<Rational>] {
        &self.extra
    }

    fn grid_len(&self) -> usize {
        if self.axes.is_empty() {
            return 0;
        }
        self.axes.iter().map(Vec::len).product()
    }

    pub fn len(&self) -> usize {
        self.grid_len() + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points with the first coordinate varying slowest, then the extra
    /// points in the order given.
    pub fn points(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.len());
        if self.grid_len() > 0 {
            let mut idx = vec![0usize; self.dim()];
            loop {
                out.push(idx.iter().enumerate().map(|(k, &i)| self.axes[k][i].clone()).collect());
                let mut k = self.dim();
                loop {
                    if k == 0 {
                        out.extend(self.extra.iter().cloned());
                        return out;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < self.axes[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        out.extend(self.extra.iter().cloned());
        out
    }

    /// Embeds the domain into one more dimension by appending a coordinate.
    pub fn extended(&self, values: Vec<Rational>) -> Result<Self> {
        let mut axes = self.axes.clone();
        axes.push(values.clone());
        let extra = self
            .extra
            .iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
        Self::new(axes, extra)
    }
}

/// Applies `f` at every sample point in parallel; results keep point order.
pub fn map_points<T, F>(dom: &SampleDomain, f: F) -> Result<Vec<(Vec<Rational>, T)>>
where
    T: Send,
    F: Fn(&[Rational]) -> Result<T> + Sync,
{
    if dom.is_empty() {
        return Err(Error::EmptyDomain);
    }
    dom.points()
        .into_par_iter()
        .map(|p| f(&p).map(|t| (p, t)))
        .collect()
}

/// Per-point classification of a polynomial pair, with a summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub points: Vec<(Vec<Rational>, PairReport)>,
    pub classes: BTreeSet<usize>,
    /// Whether a single class was observed. Says nothing about other points.
    pub constant_on_samples: bool,
    pub tau_vanishes_somewhere: bool,
    pub parities: BTreeSet<Parity>,
}

impl ScanReport {
    pub fn from_points(points: Vec<(Vec<Rational>, PairReport)>) -> Self {
        let classes: BTreeSet<usize> = points.iter().map(|(_, r)| r.class).collect();
        let parities = points.iter().map(|(_, r)| r.parity).collect();
        let tau_vanishes_somewhere = points.iter().any(|(_, r)| r.tau_vanishes);
        ScanReport {
            constant_on_samples: classes.len() == 1,
            points,
            classes,
            tau_vanishes_somewhere,
            parities,
        }
    }

    /// The class if it was the same at every sample.
    pub fn constant_class(&self) -> Option<usize> {
        if self.constant_on_samples {
            self.classes.iter().next().copied()
        } else {
            None
        }
    }

    pub fn class_at(&self, point: &[Rational]) -> Option<usize> {
        self.points
            .iter()
            .find(|(p, _)| p.as_slice() == point)
            .map(|(_, r)| r.class)
    }
}

fn check_pair_fields(tau: &PolyForm, omega: &PolyForm, dom: &SampleDomain) -> Result<()> {
    for (form, degree) in [(tau, 1), (omega, 2)] {
        if form.degree() != degree {
            return Err(Error::WrongDegree {
                expected: degree,
                found: form.degree(),
            });
        }
    }
    if tau.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: tau.dim(),
            found: omega.dim(),
        });
    }
    if dom.dim() != tau.dim() {
        return Err(Error::PointDimension {
            expected: tau.dim(),
            found: dom.dim(),
        });
    }
    Ok(())
}

/// Classifies `(τ_x, ω_x)` at every sample point.
pub fn grid_scan(tau: &PolyForm, omega: &PolyForm, dom: &SampleDomain) -> Result<ScanReport> {
    check_pair_fields(tau, omega, dom)?;
    let points = map_points(dom, |p| classify(&tau.evaluate(p)?, &omega.evaluate(p)?))?;
    Ok(ScanReport::from_points(points))
}

/// Whether the distribution spanned by `fields` is closed under brackets at
/// every sample point. Errors if the pointwise span dimension varies.
pub fn involutive_at(fields: &[PolyVectorField], dim: usize, dom: &SampleDomain) -> Result<bool> {
    if fields.iter().any(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: fields.iter().map(PolyVectorField::dim).find(|&d| d != dim).unwrap_or(dim),
        });
    }
    let mut brackets = Vec::new();
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i + 1..] {
            brackets.push(a.lie_bracket(b)?);
        }
    }
    let per_point = map_points(dom, |p| {
        let span = span_at(fields, dim, p)?;
        let mut closed = true;
        for br in &brackets {
            if !span.contains_vector(&br.evaluate(p)?) {
                closed = false;
                break;
            }
        }
        Ok((span.dim(), closed))
    })?;
    let expected = per_point[0].1 .0;
    for (p, (d, _)) in &per_point {
        if *d != expected {
            return Err(Error::NonConstantSpan {
                point: p.clone(),
                expected,
                found: *d,
            });
        }
    }
    Ok(per_point.iter().all(|(_, (_, closed))| *closed))
}

/// Whether a polynomial vanishes at any sample point.
pub fn vanishes_somewhere(f: &crate::Polynomial, dom: &SampleDomain) -> Option<Vec<Rational>> {
    dom.points().into_iter().find(|p| f.eval(p).is_zero())
}
