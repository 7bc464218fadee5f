//! Dynamical partitions, `eps_n`, towers, and the recurrence statistics
//! (linear recurrence and bad approximability).
//!
//! `D` is always the set of interior endpoints `beta_1, ..., beta_{d-1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::iet::Iet;
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("the map has no discontinuities (d = 1)")]
    EmptyDiscontinuitySet,
    #[error("empty interval {0:?}")]
    EmptyInterval(Interval),
    #[error("interval {0:?} is not contained in [0, 1)")]
    OutOfDomain(Interval),
    #[error("permutation {0} is not type W")]
    NotTypeW(String),
    #[error("infinite distinct orbits condition fails at n = {0}")]
    IdocViolation(usize),
}

/// Outcome of scanning `D ∩ T^{-n} D` for `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdocOutcome {
    Pass { horizon: usize },
    /// `point` lies in `D` and equals `T^{-n}(source)` with `source` in `D`.
    Failure { n: usize, point: Scalar, source: Scalar },
}

impl IdocOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, IdocOutcome::Pass { .. })
    }
}

pub fn idoc_check(iet: &Iet, horizon: usize) -> IdocOutcome {
    let d_set: BTreeSet<&Scalar> = iet.betas().iter().collect();
    let mut frontier: Vec<Scalar> = iet.betas().to_vec();
    for n in 1..=horizon {
        for (source, point) in iet.betas().iter().zip(frontier.iter_mut()) {
            *point = iet.apply_inverse(point);
            if d_set.contains(&*point) {
                return IdocOutcome::Failure {
                    n,
                    point: point.clone(),
                    source: source.clone(),
                };
            }
        }
    }
    IdocOutcome::Pass { horizon }
}

/// Incremental construction of the partition of `[0, 1)` cut by
/// `T^{-i} D` for `0 <= i <= n`.
///
/// The smallest cell only shrinks as points are added, so each step costs
/// one neighbour lookup per new point.
pub struct PartitionSweep<'a> {
    iet: &'a Iet,
    n: usize,
    points: BTreeSet<Scalar>,
    frontier: Vec<Scalar>,
    min_cell: Scalar,
    first_collision: Option<usize>,
}

impl<'a> PartitionSweep<'a> {
    pub fn new(iet: &'a Iet) -> Self {
        let mut sweep = PartitionSweep {
            iet,
            n: 0,
            points: BTreeSet::new(),
            frontier: iet.betas().to_vec(),
            min_cell: Scalar::one(),
            first_collision: None,
        };
        for beta in iet.betas() {
            sweep.insert(beta.clone());
        }
        sweep
    }

    fn insert(&mut self, x: Scalar) {
        if self.points.contains(&x) {
            self.first_collision.get_or_insert(self.n);
            return;
        }
        if !x.is_zero() {
            let below = self.points.range(..&x).next_back().cloned().unwrap_or_else(Scalar::zero);
            let above = self
                .points
                .range((std::ops::Bound::Excluded(&x), std::ops::Bound::Unbounded))
                .next()
                .cloned()
                .unwrap_or_else(Scalar::one);
            let candidate = (&x - &below).min(&above - &x);
            if candidate < self.min_cell {
                self.min_cell = candidate;
            }
        }
        self.points.insert(x);
    }

    /// Adds `T^{-(n+1)} D`.
    pub fn advance(&mut self) {
        self.n += 1;
        let next: Vec<Scalar> = self.frontier.iter().map(|p| self.iet.apply_inverse(p)).collect();
        for p in &next {
            self.insert(p.clone());
        }
        self.frontier = next;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `eps_n`; zero once two points of the union have collided.
    pub fn eps(&self) -> Scalar {
        if self.first_collision.is_some() {
            Scalar::zero()
        } else {
            self.min_cell.clone()
        }
    }

    /// Shortest cell length among the distinct points, ignoring collisions.
    pub fn min_cell(&self) -> &Scalar {
        &self.min_cell
    }

    pub fn first_collision(&self) -> Option<usize> {
        self.first_collision
    }

    pub fn snapshot(&self) -> DynamicalPartition {
        DynamicalPartition {
            n: self.n,
            points: self.points.iter().cloned().collect(),
            eps: self.eps(),
            min_cell: self.min_cell.clone(),
            collision: self.first_collision.is_some(),
        }
    }
}

/// The partition of `[0, 1)` by `∪ { T^{-i} D : 0 <= i <= n }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynamicalPartition {
    pub n: usize,
    /// Sorted, deduplicated cut points.
    pub points: Vec<Scalar>,
    /// Shortest cell, or zero if the union had duplicates.
    pub eps: Scalar,
    /// Shortest cell among the deduplicated points.
    pub min_cell: Scalar,
    pub collision: bool,
}

impl DynamicalPartition {
    /// Cells `[a, b)` between consecutive cut points, including the cells
    /// touching `0` and `1`.
    pub fn cells(&self) -> Vec<Interval> {
        let mut bounds = Vec::with_capacity(self.points.len() + 2);
        bounds.push(Scalar::zero());
        bounds.extend(self.points.iter().filter(|p| !p.is_zero()).cloned());
        bounds.push(Scalar::one());
        bounds
            .windows(2)
            .map(|w| Interval::new(w[0].clone(), w[1].clone()))
            .collect()
    }
}

pub fn partition(iet: &Iet, n: usize) -> DynamicalPartition {
    let mut sweep = PartitionSweep::new(iet);
    for _ in 0..n {
        sweep.advance();
    }
    sweep.snapshot()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinRecRow {
    pub n: usize,
    pub eps_n: Scalar,
    pub n_eps_n: Scalar,
    pub min_so_far: Scalar,
}

/// The sequence `n * eps_n` for `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinRecStat {
    pub rows: Vec<LinRecRow>,
    pub min: Scalar,
    /// First `n` attaining the minimum.
    pub argmin: usize,
    /// `n * eps_n <= 1` at every row.
    pub all_at_most_one: bool,
    pub first_collision: Option<usize>,
}

impl LinRecStat {
    /// CSV with exact columns followed by decimal renderings.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from(
            "n,eps_n,n_eps_n,min_so_far,eps_n_decimal,n_eps_n_decimal,min_so_far_decimal\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                r.eps_n,
                r.n_eps_n,
                r.min_so_far,
                r.eps_n.to_decimal(digits),
                r.n_eps_n.to_decimal(digits),
                r.min_so_far.to_decimal(digits)
            );
        }
        out
    }
}

pub fn lin_rec_stat(iet: &Iet, horizon: usize) -> LinRecStat {
    let mut sweep = PartitionSweep::new(iet);
    let mut rows = Vec::with_capacity(horizon);
    let mut min: Option<(Scalar, usize)> = None;
    let mut all_at_most_one = true;
    let one = Scalar::one();
    for _ in 0..horizon {
        sweep.advance();
        let n = sweep.n();
        let eps_n = sweep.eps();
        let n_eps_n = &eps_n * &Scalar::from_integer(n as i64);
        all_at_most_one &= n_eps_n <= one;
        if min.as_ref().map_or(true, |(m, _)| n_eps_n < *m) {
            min = Some((n_eps_n.clone(), n));
        }
        rows.push(LinRecRow {
            n,
            eps_n,
            n_eps_n,
            min_so_far: min.as_ref().unwrap().0.clone(),
        });
    }
    let (min, argmin) = min.unwrap_or((Scalar::one(), 0));
    LinRecStat {
        rows,
        min,
        argmin,
        all_at_most_one,
        first_collision: sweep.first_collision(),
    }
}

/// Minimum of `n * |q - T^n(p)|` over `1 <= n <= N` and `p, q` in `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadApproxStat {
    pub min: Scalar,
    pub n: usize,
    pub p: Scalar,
    pub q: Scalar,
}

pub fn bad_approx_stat(iet: &Iet, horizon: usize) -> Result<BadApproxStat, DynError> {
    let betas = iet.betas();
    if betas.is_empty() {
        return Err(DynError::EmptyDiscontinuitySet);
    }
    let mut orbit: Vec<Scalar> = betas.to_vec();
    let mut best: Option<BadApproxStat> = None;
    for n in 1..=horizon {
        let factor = Scalar::from_integer(n as i64);
        for (p, image) in betas.iter().zip(orbit.iter_mut()) {
            *image = iet.apply(image);
            for q in betas {
                let value = (q - &*image).abs() * &factor;
                if best.as_ref().map_or(true, |b| value < b.min) {
                    best = Some(BadApproxStat {
                        min: value,
                        n,
                        p: p.clone(),
                        q: q.clone(),
                    });
                }
            }
        }
    }
    best.ok_or(DynError::EmptyDiscontinuitySet)
}

/// A stack of disjoint intervals `T^{-p} J, ..., J, ..., T^q J`, each the
/// translate of the one below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub base: Interval,
    pub p: usize,
    pub q: usize,
    /// Bottom floor first.
    pub floors: Vec<Interval>,
    /// The `n` the tower was requested for, and `eps_n` at that `n`.
    pub n: usize,
    pub eps_n: Scalar,
}

impl Tower {
    pub fn height(&self) -> usize {
        self.floors.len()
    }

    pub fn bottom(&self) -> &Interval {
        &self.floors[0]
    }

    pub fn top(&self) -> &Interval {
        self.floors.last().expect("a tower has at least one floor")
    }

    /// `(p + q + 1) |J|`.
    pub fn measure(&self) -> Scalar {
        self.base.length() * Scalar::from_integer(self.floors.len() as i64)
    }

    pub fn is_disjoint(&self) -> bool {
        let mut sorted: Vec<&Interval> = self.floors.iter().collect();
        sorted.sort_by(|a, b| a.left.cmp(&b.left));
        sorted.windows(2).all(|w| w[0].right <= w[1].left)
    }

    /// Every floor is mapped onto the next by a single translation of `T`.
    pub fn floors_are_translates(&self, iet: &Iet) -> bool {
        self.floors.windows(2).all(|w| match iet.translation_on(&w[0]) {
            Some(shift) => w[0].translate(&shift) == w[1],
            None => false,
        })
    }

    /// Whenever `|J| <= eps_n` the tower reaches `p + q >= n - 1`.
    pub fn height_bound_holds(&self) -> bool {
        self.eps_n.is_zero()
            || self.base.length() > self.eps_n
            || self.p + self.q + 1 >= self.n
    }
}

fn overlaps_any(floors: &BTreeMap<Scalar, Scalar>, iv: &Interval) -> bool {
    if let Some((_, right)) = floors.range(..=&iv.left).next_back() {
        if *right > iv.left {
            return true;
        }
    }
    floors.range(&iv.left..).next().is_some_and(|(left, _)| *left < iv.right)
}

/// Greedy maximal tower over `J`: extends upward while the top floor has no
/// discontinuity of `T` in its interior and downward while the bottom floor
/// has none of `T^{-1}`, stopping either way before a new floor would meet an
/// existing one.
pub fn build_tower(iet: &Iet, base: Interval, n: usize) -> Result<Tower, DynError> {
    if base.is_empty() {
        return Err(DynError::EmptyInterval(base));
    }
    if base.left.is_negative() || base.right > Scalar::one() {
        return Err(DynError::OutOfDomain(base));
    }
    let mut occupied = BTreeMap::new();
    occupied.insert(base.left.clone(), base.right.clone());

    let mut above = Vec::new();
    let mut current = base.clone();
    while let Some(shift) = iet.translation_on(&current) {
        let next = current.translate(&shift);
        if overlaps_any(&occupied, &next) {
            break;
        }
        occupied.insert(next.left.clone(), next.right.clone());
        above.push(next.clone());
        current = next;
    }

    let mut below = Vec::new();
    let mut current = base.clone();
    while let Some(shift) = iet.inverse_translation_on(&current) {
        let next = current.translate(&shift);
        if overlaps_any(&occupied, &next) {
            break;
        }
        occupied.insert(next.left.clone(), next.right.clone());
        below.push(next.clone());
        current = next;
    }

    let (p, q) = (below.len(), above.len());
    let mut floors: Vec<Interval> = below.into_iter().rev().collect();
    floors.push(base.clone());
    floors.extend(above);
    Ok(Tower {
        base,
        p,
        q,
        floors,
        n,
        eps_n: partition(iet, n).eps,
    })
}

/// A tower over one vertex of the loop through `0`, with its top floor
/// centred on the vertex (or `[0, eps_n / 2)` for vertex `0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopTower {
    /// Vertex index `k`, standing for `omega_k`.
    pub vertex: usize,
    pub tower: Tower,
    /// All `n` floors `T^{-(n-1)} I, ..., I` were single translates.
    pub complete: bool,
    pub disjoint: bool,
    pub measure: Scalar,
    /// `n eps_n` for interior vertices, `n eps_n / 2` for vertex `0`.
    pub measure_bound: Scalar,
    pub measure_bound_holds: bool,
}

pub fn loop_towers(iet: &Iet, n: usize) -> Result<Vec<LoopTower>, DynError> {
    let graph = iet.permutation().endpoint_graph();
    if !graph.is_type_w() {
        return Err(DynError::NotTypeW(iet.permutation().to_string()));
    }
    if let IdocOutcome::Failure { n: at, .. } = idoc_check(iet, n) {
        return Err(DynError::IdocViolation(at));
    }
    let eps_n = partition(iet, n).eps;
    let half = &eps_n / &Scalar::from_integer(2);
    let n_eps = &eps_n * &Scalar::from_integer(n as i64);

    let mut towers = Vec::new();
    for vertex in graph.loop_through_zero() {
        let (top, bound) = if vertex == 0 {
            (Interval::new(Scalar::zero(), half.clone()), &n_eps / &Scalar::from_integer(2))
        } else {
            let centre = iet.omega(vertex);
            (Interval::new(centre - &half, centre + &half), n_eps.clone())
        };
        let mut floors = vec![top.clone()];
        let mut complete = true;
        while floors.len() < n.max(1) {
            match iet.inverse_translation_on(floors.last().unwrap()) {
                Some(shift) => {
                    let next = floors.last().unwrap().translate(&shift);
                    floors.push(next);
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        floors.reverse();
        let tower = Tower {
            base: top,
            p: floors.len() - 1,
            q: 0,
            floors,
            n,
            eps_n: eps_n.clone(),
        };
        let measure = tower.measure();
        towers.push(LoopTower {
            vertex,
            disjoint: tower.is_disjoint(),
            measure_bound_holds: measure >= bound,
            measure,
            measure_bound: bound,
            complete,
            tower,
        });
    }
    Ok(towers)
}
