//! Test-side oracles and generators, independent of the library's own
//! constructions.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use ietlab::{Iet, Permutation, Scalar};

pub fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

/// Irreducible check straight from the definition: no prefix `{1..k}`,
/// `k < d`, is mapped onto itself.
pub fn irreducible_oracle(images: &[usize]) -> bool {
    let d = images.len();
    (1..d).all(|k| {
        let prefix: BTreeSet<usize> = images[..k].iter().copied().collect();
        prefix != (1..=k).collect()
    })
}

/// All permutations of `1..=d` in lexicographic order.
pub fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let d = used.len();
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=d {
            if !used[v - 1] {
                used[v - 1] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// The endpoint graph built from the left-to-right order of the image
/// intervals: the left edge of `[0, 1)` is glued to the first image's left
/// endpoint, each image's right endpoint to the next image's left endpoint,
/// and the last image's right endpoint to `1`. Vertex `j` is `omega_j`.
/// Returns the undirected edge list.
pub fn gluing_edges(images: &[usize]) -> Vec<(usize, usize)> {
    let d = images.len();
    let mut order = vec![0; d];
    for (i, &p) in images.iter().enumerate() {
        order[p - 1] = i + 1;
    }
    let mut edges = vec![(0, order[0] - 1)];
    for w in order.windows(2) {
        edges.push((w[0], w[1] - 1));
    }
    edges.push((order[d - 1], d));
    edges
}

/// Connected components of an undirected graph on `0..n`, by repeated
/// breadth-first search.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut queue = vec![start];
        label[start] = next;
        while let Some(v) = queue.pop() {
            for &(a, b) in edges {
                let other = if a == v { b } else if b == v { a } else { continue };
                if label[other] == usize::MAX {
                    label[other] = next;
                    queue.push(other);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn random_irreducible<R: Rng>(rng: &mut R, d: usize) -> Permutation {
    loop {
        let mut images: Vec<usize> = (1..=d).collect();
        images.shuffle(rng);
        if irreducible_oracle(&images) {
            return Permutation::new(images).unwrap();
        }
    }
}

/// Positive rational lengths summing to one.
pub fn random_lengths<R: Rng>(rng: &mut R, d: usize) -> Vec<Scalar> {
    let ints: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=60)).collect();
    let total: i64 = ints.iter().sum();
    ints.iter().map(|&k| Scalar::ratio(k, total)).collect()
}

pub fn random_iet<R: Rng>(rng: &mut R, max_d: usize) -> Iet {
    let d = rng.gen_range(2..=max_d);
    let perm = random_irreducible(rng, d);
    Iet::new(random_lengths(rng, d), perm).unwrap()
}

/// Right endpoint of the image of `I_j` (`1 <= j <= d`): the total length of
/// the intervals placed at positions `1..=pi(j)`.
pub fn image_right(lengths: &[Scalar], images: &[usize], j: usize) -> Scalar {
    let pos = images[j - 1];
    (0..images.len())
        .filter(|&i| images[i] <= pos)
        .fold(Scalar::zero(), |acc, i| acc + &lengths[i])
}

/// Left endpoint of the image of `I_j`.
pub fn image_left(lengths: &[Scalar], images: &[usize], j: usize) -> Scalar {
    image_right(lengths, images, j) - &lengths[j - 1]
}

/// `T^n(x)` by repeated single steps.
pub fn iterate(iet: &Iet, x: &Scalar, n: i64) -> Scalar {
    let mut y = x.clone();
    for _ in 0..n.unsigned_abs() {
        y = if n > 0 {
            iet.evaluate(&y).unwrap()
        } else {
            iet.evaluate_inverse(&y).unwrap()
        };
    }
    y
}

/// `eps_n` by brute force: all points `T^{-i} beta` for `0 <= i <= n`. Zero
/// if two of them coincide, otherwise the smallest cell once `0` and `1` are
/// added as ends.
pub fn eps_oracle(iet: &Iet, n: usize) -> Scalar {
    let mut points = Vec::new();
    for beta in iet.betas() {
        for i in 0..=n {
            points.push(iterate(iet, beta, -(i as i64)));
        }
    }
    points.sort();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Scalar::zero();
    }
    points.push(Scalar::zero());
    points.push(Scalar::one());
    points.sort();
    points.dedup();
    points.windows(2).map(|w| &w[1] - &w[0]).min().unwrap()
}

/// `floor(x * 10^digits)` for `x = a + b sqrt(d)`, using integer square
/// roots only.
pub fn fixed_point(x: &Scalar, digits: u32) -> BigInt {
    let (a, b) = x.parts();
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let d = BigInt::from(x.radicand().unwrap_or(0));
    let sqrt_scaled = (d * &scale * &scale).sqrt();
    let num = a.numer() * b.denom() * &scale + b.numer() * a.denom() * sqrt_scaled;
    let den = a.denom() * b.denom();
    num_integer::Integer::div_floor(&num, &den)
}
