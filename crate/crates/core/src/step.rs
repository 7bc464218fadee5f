//! Piecewise-constant functions on `[0, 1)` with exact breakpoints.

use serde::Serialize;

use crate::interval::{Interval, IntervalUnion};
use crate::iet::PiecewiseTranslation;
use crate::scalar::Scalar;

/// `f(x) = values[k]` for `breakpoints[k] <= x < breakpoints[k + 1]`, with
/// `breakpoints` running from `0` to `1`. Adjacent values always differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl StepFunction {
    pub fn constant(value: Scalar) -> Self {
        StepFunction {
            breakpoints: vec![Scalar::zero(), Scalar::one()],
            values: vec![value],
        }
    }

    /// Builds from piece boundaries and one value per piece. Returns `None`
    /// unless the boundaries strictly increase from `0` to `1`.
    pub fn new(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Option<Self> {
        let valid = breakpoints.len() == values.len() + 1
            && breakpoints.first() == Some(&Scalar::zero())
            && breakpoints.last() == Some(&Scalar::one())
            && breakpoints.windows(2).all(|w| w[0] < w[1]);
        valid.then(|| Self::merged(breakpoints.iter().cloned().zip(values)))
    }

    /// Indicator function of a union of subintervals of `[0, 1)`.
    pub fn indicator(set: &IntervalUnion) -> Self {
        let mut pieces = Vec::new();
        let mut cursor = Scalar::zero();
        for iv in set.parts() {
            if iv.left > cursor {
                pieces.push((cursor.clone(), Scalar::zero()));
            }
            pieces.push((iv.left.clone(), Scalar::one()));
            cursor = iv.right.clone();
        }
        if cursor < Scalar::one() {
            pieces.push((cursor, Scalar::zero()));
        }
        Self::merged(pieces)
    }

    /// Builds from `(left endpoint, value)` pairs in increasing order starting
    /// at `0`, merging equal neighbours.
    pub(crate) fn merged(pieces: impl IntoIterator<Item = (Scalar, Scalar)>) -> Self {
        let mut breakpoints = Vec::new();
        let mut values: Vec<Scalar> = Vec::new();
        for (left, value) in pieces {
            if values.last() == Some(&value) {
                continue;
            }
            breakpoints.push(left);
            values.push(value);
        }
        breakpoints.push(Scalar::one());
        StepFunction { breakpoints, values }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Interval, &Scalar)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (Interval::new(w[0].clone(), w[1].clone()), v))
    }

    pub fn value_at(&self, x: &Scalar) -> &Scalar {
        let idx = self.breakpoints[1..].partition_point(|b| b <= x);
        &self.values[idx.min(self.values.len() - 1)]
    }

    /// Lebesgue measure of the set where `pred(value)` holds.
    pub fn measure_where(&self, mut pred: impl FnMut(&Scalar) -> bool) -> Scalar {
        self.pieces()
            .filter(|(_, v)| pred(v))
            .fold(Scalar::zero(), |acc, (iv, _)| acc + iv.length())
    }

    /// The step function `x -> self(map(x))`.
    pub fn compose(&self, map: &PiecewiseTranslation) -> StepFunction {
        let mut pieces = Vec::new();
        map.refine_through(&self.breakpoints, |segment, _, outer| {
            pieces.push((segment.left, self.values[outer].clone()));
        });
        Self::merged(pieces)
    }
}
