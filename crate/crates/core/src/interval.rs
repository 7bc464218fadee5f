//! Half-open intervals `[left, right)` and finite unions of them.

use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub left: Scalar,
    pub right: Scalar,
}

impl Interval {
    pub fn new(left: Scalar, right: Scalar) -> Self {
        Interval { left, right }
    }

    pub fn unit() -> Self {
        Interval::new(Scalar::zero(), Scalar::one())
    }

    pub fn length(&self) -> Scalar {
        &self.right - &self.left
    }

    pub fn is_empty(&self) -> bool {
        self.left >= self.right
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.left <= x && x < &self.right
    }

    /// `left < x < right`.
    pub fn contains_in_interior(&self, x: &Scalar) -> bool {
        &self.left < x && x < &self.right
    }

    pub fn translate(&self, shift: &Scalar) -> Interval {
        Interval::new(&self.left + shift, &self.right + shift)
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let left = self.left.clone().max(other.left.clone());
        let right = self.right.clone().min(other.right.clone());
        (left < right).then(|| Interval::new(left, right))
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.left < other.right && other.left < self.right
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left, self.right)
    }
}

/// A finite union of half-open intervals, kept sorted, disjoint, and with
/// touching pieces merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = intervals.into_iter().filter(|iv| !iv.is_empty()).collect();
        parts.sort_by(|a, b| a.left.cmp(&b.left));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match merged.last_mut() {
                Some(last) if iv.left <= last.right => {
                    if iv.right > last.right {
                        last.right = iv.right;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalUnion { parts: merged }
    }

    pub fn single(left: Scalar, right: Scalar) -> Self {
        Self::new([Interval::new(left, right)])
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn measure(&self) -> Scalar {
        self.parts.iter().fold(Scalar::zero(), |acc, iv| acc + iv.length())
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let idx = self.parts.partition_point(|iv| &iv.left <= x);
        idx > 0 && self.parts[idx - 1].contains(x)
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            if let Some(iv) = a.intersection(b) {
                out.push(iv);
            }
            if a.right < b.right {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion { parts: out }
    }

    /// The part of the union inside `window`, translated by `shift`.
    pub fn clip_translate(&self, window: &Interval, shift: &Scalar) -> Vec<Interval> {
        self.parts
            .iter()
            .filter_map(|iv| iv.intersection(window))
            .map(|iv| iv.translate(shift))
            .collect()
    }
}
