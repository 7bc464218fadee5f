//! Interval exchange transformations and the exact piecewise-translation
//! algebra used to represent every power `T^n`.
//!
//! All intervals are half-open, `[a, b)`. The map is defined on `[0, 1)`; the
//! point `1` is only reachable through left limits.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::interval::Interval;
use crate::perm::Permutation;
use crate::scalar::{Scalar, ScalarError};
use crate::step::StepFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IetError {
    #[error("length {index} is not positive: {value}")]
    NonpositiveLength { index: usize, value: Scalar },
    #[error("expected {expected} lengths for the permutation, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{0} is outside [0, 1)")]
    OutOfDomain(Scalar),
}

/// An interval exchange transformation on `[0, 1)`: interval `I_i` of length
/// `lengths[i]` is translated by `translations[i]`, placing the intervals in
/// the order given by the permutation.
#[derive(Clone, PartialEq, Eq)]
pub struct Iet {
    lengths: Vec<Scalar>,
    perm: Permutation,
    /// `0 = beta_0 < beta_1 < ... < beta_d = 1`.
    boundaries: Vec<Scalar>,
    translations: Vec<Scalar>,
    /// Left endpoints of the image intervals in position order, followed by `1`.
    image_boundaries: Vec<Scalar>,
    radicand: Option<u64>,
    normalized: bool,
    map: PiecewiseTranslation,
    inverse_map: PiecewiseTranslation,
}

impl Iet {
    /// Builds the IET for `(lengths, perm)`. Lengths not summing to one are
    /// rescaled by their sum, which is recorded in [`Iet::was_normalized`].
    pub fn new(lengths: Vec<Scalar>, perm: Permutation) -> Result<Self, IetError> {
        let d = perm.d();
        if lengths.len() != d {
            return Err(IetError::DimensionMismatch {
                expected: d,
                found: lengths.len(),
            });
        }
        let mut radicand = None;
        for (index, value) in lengths.iter().enumerate() {
            if let Some(r) = value.radicand() {
                match radicand {
                    Some(prev) if prev != r => {
                        return Err(ScalarError::IncompatibleRadicands(prev, r).into())
                    }
                    _ => radicand = Some(r),
                }
            }
            if !value.is_positive() {
                return Err(IetError::NonpositiveLength {
                    index: index + 1,
                    value: value.clone(),
                });
            }
        }

        let total = lengths.iter().fold(Scalar::zero(), |acc, l| acc + l);
        let normalized = total != Scalar::one();
        let lengths: Vec<Scalar> = if normalized {
            lengths.iter().map(|l| l / &total).collect()
        } else {
            lengths
        };

        let mut boundaries = Vec::with_capacity(d + 1);
        boundaries.push(Scalar::zero());
        for l in &lengths[..d - 1] {
            let next = boundaries.last().unwrap() + l;
            boundaries.push(next);
        }
        boundaries.push(Scalar::one());

        let mut image_boundaries = Vec::with_capacity(d + 1);
        image_boundaries.push(Scalar::zero());
        for pos in 1..d {
            let next = image_boundaries.last().unwrap() + &lengths[perm.preimage(pos) - 1];
            image_boundaries.push(next);
        }
        image_boundaries.push(Scalar::one());

        let translations: Vec<Scalar> = (1..=d)
            .map(|i| &image_boundaries[perm.image(i) - 1] - &boundaries[i - 1])
            .collect();
        let map = PiecewiseTranslation::from_pieces(
            boundaries[..d].iter().cloned().zip(translations.iter().cloned()),
        );
        let inverse_map = map.inverse();

        Ok(Iet {
            lengths,
            perm,
            boundaries,
            translations,
            image_boundaries,
            radicand,
            normalized,
            map,
            inverse_map,
        })
    }

    pub fn identity() -> Self {
        Iet::new(vec![Scalar::one()], Permutation::identity(1)).expect("valid")
    }

    /// Rotation `x -> x + alpha mod 1` for `0 < alpha < 1`, as the two-interval
    /// exchange with lengths `(1 - alpha, alpha)`.
    pub fn rotation(alpha: Scalar) -> Result<Self, IetError> {
        let swap = Permutation::new(vec![2, 1]).expect("valid");
        Iet::new(vec![Scalar::one() - &alpha, alpha], swap)
    }

    pub fn d(&self) -> usize {
        self.perm.d()
    }

    pub fn lengths(&self) -> &[Scalar] {
        &self.lengths
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// Per-interval translation amounts `alpha_i`.
    pub fn translations(&self) -> &[Scalar] {
        &self.translations
    }

    /// The radicand shared by all lengths, `None` if they are rational.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn was_normalized(&self) -> bool {
        self.normalized
    }

    /// `beta_1, ..., beta_{d-1}`: the interior interval endpoints.
    pub fn betas(&self) -> &[Scalar] {
        &self.boundaries[1..self.d()]
    }

    /// Endpoint `omega_i` for `0 <= i <= d`, with `omega_0 = 0` and `omega_d = 1`.
    pub fn omega(&self, i: usize) -> &Scalar {
        &self.boundaries[i]
    }

    /// Formal breakpoints; identical to [`Iet::betas`].
    pub fn breakpoints(&self) -> &[Scalar] {
        self.betas()
    }

    /// Betas at which the two one-sided translations actually differ.
    pub fn discontinuities(&self) -> Vec<Scalar> {
        self.betas()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.translations[*i] != self.translations[i + 1])
            .map(|(_, b)| b.clone())
            .collect()
    }

    /// Interior left endpoints of the image intervals, where `T^{-1}` can jump.
    pub fn inverse_breakpoints(&self) -> &[Scalar] {
        &self.image_boundaries[1..self.d()]
    }

    /// Smallest distance between consecutive betas; `None` with fewer than two.
    pub fn min_discontinuity_spacing(&self) -> Option<Scalar> {
        self.betas().windows(2).map(|w| &w[1] - &w[0]).min()
    }

    fn check_domain(x: &Scalar) -> Result<(), IetError> {
        if x.is_negative() || *x >= Scalar::one() {
            return Err(IetError::OutOfDomain(x.clone()));
        }
        Ok(())
    }

    /// Index (0-based) of the interval containing `x`, for `x` in `[0, 1)`.
    fn piece_of(&self, x: &Scalar) -> usize {
        self.betas().partition_point(|b| b <= x)
    }

    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar, IetError> {
        Self::check_domain(x)?;
        Ok(self.apply(x))
    }

    pub fn evaluate_inverse(&self, y: &Scalar) -> Result<Scalar, IetError> {
        Self::check_domain(y)?;
        Ok(self.apply_inverse(y))
    }

    /// `T(x)` without the domain check.
    pub(crate) fn apply(&self, x: &Scalar) -> Scalar {
        x + &self.translations[self.piece_of(x)]
    }

    pub(crate) fn apply_inverse(&self, y: &Scalar) -> Scalar {
        y + self.inverse_map.shift_at(y)
    }

    /// `(T_+(a), T_-(a))`: limits from the right (defined on `[0, 1)`) and from
    /// the left (defined on `(0, 1]`).
    pub fn one_sided_limits(&self, a: &Scalar) -> (Option<Scalar>, Option<Scalar>) {
        let plus = (!a.is_negative() && *a < Scalar::one())
            .then(|| a + &self.translations[self.piece_of(a)]);
        let minus = (a.is_positive() && *a <= Scalar::one()).then(|| {
            let idx = self.betas().partition_point(|b| b < a);
            a + &self.translations[idx]
        });
        (plus, minus)
    }

    /// The IET `T^{-1}`.
    pub fn inverse(&self) -> Iet {
        let perm = self.perm.inverse();
        let lengths = (1..=self.d())
            .map(|pos| self.lengths[self.perm.preimage(pos) - 1].clone())
            .collect();
        Iet::new(lengths, perm).expect("inverse of a valid IET is valid")
    }

    /// `T` as a canonical piecewise translation.
    pub fn to_translation(&self) -> PiecewiseTranslation {
        self.map.clone()
    }

    /// The single translation taking `interval` onto `T(interval)`, if no
    /// discontinuity of `T` lies in the interval's interior.
    pub fn translation_on(&self, interval: &Interval) -> Option<Scalar> {
        self.map.translation_on(interval)
    }

    /// As [`Iet::translation_on`] for `T^{-1}`.
    pub fn inverse_translation_on(&self, interval: &Interval) -> Option<Scalar> {
        self.inverse_map.translation_on(interval)
    }

    /// `T^n` for any integer `n`, composed one step at a time.
    pub fn power(&self, n: i64) -> PiecewiseTranslation {
        if n == 0 {
            return PiecewiseTranslation::identity();
        }
        let steps = n.unsigned_abs() as usize;
        let mut it = if n > 0 { self.powers() } else { self.inverse_powers() };
        it.nth(steps - 1).expect("powers never ends")
    }

    /// `T^1, T^2, T^3, ...`
    pub fn powers(&self) -> Powers {
        Powers {
            step: self.map.clone(),
            current: PiecewiseTranslation::identity(),
        }
    }

    /// `T^-1, T^-2, T^-3, ...`
    pub fn inverse_powers(&self) -> Powers {
        Powers {
            step: self.inverse_map.clone(),
            current: PiecewiseTranslation::identity(),
        }
    }

    /// The step function `x -> T^n(x) - x`.
    pub fn displacement_profile(&self, n: i64) -> StepFunction {
        self.power(n).displacement()
    }
}

impl fmt::Debug for Iet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Iet")
            .field("lengths", &self.lengths)
            .field("perm", &self.perm.to_string())
            .finish()
    }
}

/// Successive powers of a fixed map; see [`Iet::powers`].
pub struct Powers {
    step: PiecewiseTranslation,
    current: PiecewiseTranslation,
}

impl Iterator for Powers {
    type Item = PiecewiseTranslation;

    fn next(&mut self) -> Option<PiecewiseTranslation> {
        self.current = self.step.compose(&self.current);
        Some(self.current.clone())
    }
}

/// A bijection of `[0, 1)` that translates each piece
/// `[breakpoints[k], breakpoints[k + 1])` by `shifts[k]`.
///
/// Canonical form: breakpoints strictly increase from `0` to `1` and adjacent
/// shifts differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseTranslation {
    breakpoints: Vec<Scalar>,
    shifts: Vec<Scalar>,
}

impl PiecewiseTranslation {
    pub fn identity() -> Self {
        PiecewiseTranslation {
            breakpoints: vec![Scalar::zero(), Scalar::one()],
            shifts: vec![Scalar::zero()],
        }
    }

    /// From `(left endpoint, shift)` pairs in increasing order starting at 0.
    fn from_pieces(pieces: impl IntoIterator<Item = (Scalar, Scalar)>) -> Self {
        let mut breakpoints = Vec::new();
        let mut shifts: Vec<Scalar> = Vec::new();
        for (left, shift) in pieces {
            if shifts.last() == Some(&shift) {
                continue;
            }
            breakpoints.push(left);
            shifts.push(shift);
        }
        breakpoints.push(Scalar::one());
        PiecewiseTranslation { breakpoints, shifts }
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn shifts(&self) -> &[Scalar] {
        &self.shifts
    }

    pub fn piece_count(&self) -> usize {
        self.shifts.len()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Interval, &Scalar)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.shifts)
            .map(|(w, s)| (Interval::new(w[0].clone(), w[1].clone()), s))
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.len() == 1 && self.shifts[0].is_zero()
    }

    pub fn shift_at(&self, x: &Scalar) -> &Scalar {
        let idx = self.breakpoints[1..].partition_point(|b| b <= x);
        &self.shifts[idx.min(self.shifts.len() - 1)]
    }

    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar, IetError> {
        Iet::check_domain(x)?;
        Ok(x + self.shift_at(x))
    }

    /// The shift of the piece containing `interval`, if the interval does not
    /// straddle a breakpoint.
    pub fn translation_on(&self, interval: &Interval) -> Option<Scalar> {
        let idx = self.breakpoints[1..].partition_point(|b| b <= &interval.left);
        (idx < self.shifts.len() && interval.right <= self.breakpoints[idx + 1])
            .then(|| self.shifts[idx].clone())
    }

    /// Image intervals, in domain order.
    pub fn image_intervals(&self) -> Vec<Interval> {
        self.pieces().map(|(iv, s)| iv.translate(s)).collect()
    }

    /// The image intervals tile `[0, 1)` with no gaps or overlaps.
    pub fn is_measure_preserving(&self) -> bool {
        let mut images = self.image_intervals();
        images.sort_by(|a, b| a.left.cmp(&b.left));
        let mut cursor = Scalar::zero();
        for iv in &images {
            if iv.left != cursor || iv.is_empty() {
                return false;
            }
            cursor = iv.right.clone();
        }
        cursor == Scalar::one()
    }

    pub fn inverse(&self) -> PiecewiseTranslation {
        let mut pieces: Vec<(Scalar, Scalar)> = self
            .pieces()
            .map(|(iv, s)| (&iv.left + s, -s))
            .collect();
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        Self::from_pieces(pieces)
    }

    /// Walks the pieces of `self` and splits each one where its image crosses
    /// one of `outer_breaks` (a sorted list from `0` to `1`). For every domain
    /// segment calls `emit(segment, shift of self, index of the outer piece
    /// containing the image)`.
    pub(crate) fn refine_through(
        &self,
        outer_breaks: &[Scalar],
        mut emit: impl FnMut(Interval, &Scalar, usize),
    ) {
        let last = outer_breaks.len() - 2;
        for (piece, shift) in self.pieces() {
            let image_left = &piece.left + shift;
            let image_right = &piece.right + shift;
            let mut idx = outer_breaks[1..=last].partition_point(|b| *b <= image_left);
            let mut left = piece.left;
            while idx < last && outer_breaks[idx + 1] < image_right {
                let cut = &outer_breaks[idx + 1] - shift;
                emit(Interval::new(left, cut.clone()), shift, idx);
                left = cut;
                idx += 1;
            }
            emit(Interval::new(left, piece.right), shift, idx);
        }
    }

    /// `self ∘ inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &PiecewiseTranslation) -> PiecewiseTranslation {
        let mut pieces = Vec::with_capacity(inner.piece_count() + self.piece_count());
        inner.refine_through(&self.breakpoints, |segment, shift, outer| {
            pieces.push((segment.left, shift + &self.shifts[outer]));
        });
        Self::from_pieces(pieces)
    }

    /// `x -> self(x) - x` as a step function.
    pub fn displacement(&self) -> StepFunction {
        StepFunction::merged(
            self.breakpoints
                .iter()
                .cloned()
                .zip(self.shifts.iter().cloned()),
        )
    }
}
