//! Finite-horizon rigidity and mixing diagnostics.
//!
//! Everything here is an exact Lebesgue measure of a set built from step
//! functions and powers of the map. None of it can certify an asymptotic
//! property; reports phrase results as evidence only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::iet::{Iet, PiecewiseTranslation};
use crate::interval::IntervalUnion;
use crate::scalar::Scalar;
use crate::step::StepFunction;

/// `Leb{x : |P(x) - x| > eps}` for a piecewise translation `P`.
pub fn displacement_measure(map: &PiecewiseTranslation, eps: &Scalar) -> Scalar {
    map.pieces()
        .filter(|(_, shift)| shift.abs() > *eps)
        .fold(Scalar::zero(), |acc, (iv, _)| acc + iv.length())
}

/// `Leb{x : |T^n x - x| > eps}`.
pub fn rigidity_measure(iet: &Iet, n: i64, eps: &Scalar) -> Scalar {
    displacement_measure(&iet.power(n), eps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityEntry {
    pub n: usize,
    pub measure: Scalar,
    pub is_candidate: bool,
}

/// Rigidity measures for `1 <= n <= N` with the times whose measure falls
/// below `threshold` flagged as candidates. A candidate is a screening hint,
/// not a proof of rigidity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityProfile {
    pub eps: Scalar,
    pub threshold: Scalar,
    pub entries: Vec<RigidityEntry>,
    pub candidate_rigid_times: Vec<usize>,
}

impl RigidityProfile {
    /// Smallest measure and the first `n` attaining it.
    pub fn min(&self) -> Option<(&Scalar, usize)> {
        let mut best: Option<&RigidityEntry> = None;
        for e in &self.entries {
            if best.map_or(true, |b| e.measure < b.measure) {
                best = Some(e);
            }
        }
        best.map(|e| (&e.measure, e.n))
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("n,measure,is_candidate,measure_decimal\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.n,
                e.measure,
                e.is_candidate,
                e.measure.to_decimal(digits)
            );
        }
        out
    }
}

pub fn rigidity_profile(iet: &Iet, horizon: usize, eps: &Scalar, threshold: &Scalar) -> RigidityProfile {
    let mut entries = Vec::with_capacity(horizon);
    let mut candidates = Vec::new();
    for (i, power) in iet.powers().take(horizon).enumerate() {
        let n = i + 1;
        let measure = displacement_measure(&power, eps);
        let is_candidate = measure < *threshold;
        if is_candidate {
            candidates.push(n);
        }
        entries.push(RigidityEntry {
            n,
            measure,
            is_candidate,
        });
    }
    RigidityProfile {
        eps: eps.clone(),
        threshold: threshold.clone(),
        entries,
        candidate_rigid_times: candidates,
    }
}

/// `Leb(A ∩ T^{-n} B)`.
pub fn correlation(iet: &Iet, a: &IntervalUnion, b: &IntervalUnion, n: i64) -> Scalar {
    let map = iet.power(n);
    let preimage = IntervalUnion::new(
        map.pieces()
            .flat_map(|(piece, shift)| b.clip_translate(&piece.translate(shift), &-shift)),
    );
    a.intersection(&preimage).measure()
}

/// `f ∘ T^i` for every `i` in `indices`, computed from one sweep of powers in
/// each direction.
fn compositions(iet: &Iet, f: &StepFunction, indices: &[i64]) -> BTreeMap<i64, StepFunction> {
    let mut out = BTreeMap::new();
    let max = indices.iter().copied().max().unwrap_or(0);
    let min = indices.iter().copied().min().unwrap_or(0);
    if indices.contains(&0) {
        out.insert(0, f.clone());
    }
    for (k, power) in iet.powers().take(max.max(0) as usize).enumerate() {
        let i = k as i64 + 1;
        if indices.contains(&i) {
            out.insert(i, f.compose(&power));
        }
    }
    for (k, power) in iet.inverse_powers().take((-min).max(0) as usize).enumerate() {
        let i = -(k as i64) - 1;
        if indices.contains(&i) {
            out.insert(i, f.compose(&power));
        }
    }
    out
}

/// `Leb{x : |f(T^{i+s} x) - f(T^i x)| < delta for all -b <= i <= b}` with
/// `s = shift_power`. With `s = 1` this is the quantitative-ergodicity set;
/// larger `s` probes recurrence of `f` along `T^s`.
pub fn invariance_window_measure(
    iet: &Iet,
    f: &StepFunction,
    delta: &Scalar,
    b: usize,
    shift_power: i64,
) -> Scalar {
    let b = b as i64;
    let mut indices: Vec<i64> = (-b..=b).flat_map(|i| [i, i + shift_power]).collect();
    indices.sort_unstable();
    indices.dedup();
    let composed = compositions(iet, f, &indices);

    let mut cuts: Vec<Scalar> = composed
        .values()
        .flat_map(|g| g.breakpoints().iter().cloned())
        .collect();
    cuts.sort();
    cuts.dedup();

    let mut total = Scalar::zero();
    for cell in cuts.windows(2) {
        let x = &cell[0];
        let ok = (-b..=b).all(|i| {
            let later = composed[&(i + shift_power)].value_at(x);
            let now = composed[&i].value_at(x);
            (later - now).abs() < *delta
        });
        if ok {
            total = total + (&cell[1] - &cell[0]);
        }
    }
    total
}
