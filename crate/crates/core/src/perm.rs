//! Permutation combinatorics: irreducibility, the auxiliary permutation
//! `sigma` on `{0, ..., d}`, its orbit graph, and the type-W predicate.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty permutation")]
    EmptyInput,
    #[error("not a bijection of 1..={d}: {detail}")]
    NotABijection { d: usize, detail: String },
    #[error("invalid token '{0}'")]
    InvalidToken(String),
}

/// A permutation of `{1, ..., d}` stored by its images, `images[i - 1] = pi(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-indexed images.
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        if d == 0 {
            return Err(PermError::EmptyInput);
        }
        let mut inverse = vec![0usize; d];
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > d {
                return Err(PermError::NotABijection {
                    d,
                    detail: format!("image {img} out of range"),
                });
            }
            if inverse[img - 1] != 0 {
                return Err(PermError::NotABijection {
                    d,
                    detail: format!("image {img} repeated"),
                });
            }
            inverse[img - 1] = i + 1;
        }
        Ok(Permutation { images, inverse })
    }

    pub fn identity(d: usize) -> Self {
        Self::new((1..=d).collect()).expect("identity is a bijection")
    }

    /// Parses whitespace-separated 1-indexed images, e.g. `"3 2 1"`.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let images = text
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| PermError::InvalidToken(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(images)
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    /// `pi(i)` for `1 <= i <= d`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `pi^{-1}(k)` for `1 <= k <= d`.
    pub fn preimage(&self, k: usize) -> usize {
        self.inverse[k - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    /// No proper prefix `{1..k}` is mapped onto itself.
    pub fn is_irreducible(&self) -> bool {
        let mut running_max = 0;
        for k in 1..self.d() {
            running_max = running_max.max(self.image(k));
            if running_max == k {
                return false;
            }
        }
        true
    }

    /// The auxiliary permutation of `{0, ..., d}` and its orbits.
    pub fn endpoint_graph(&self) -> EndpointGraph {
        EndpointGraph::new(self)
    }

    /// Vertex `0` and vertex `d` lie in different orbits of `sigma`.
    pub fn is_type_w(&self) -> bool {
        self.endpoint_graph().is_type_w()
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The endpoint identification graph: the functional graph of `sigma` on
/// vertices `0..=d`, where vertex `i` stands for the endpoint `omega_i`
/// (`omega_0 = 0`, `omega_d = 1`). Since `sigma` is a bijection the graph is
/// a disjoint union of cycles and its components are the orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointGraph {
    d: usize,
    sigma: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    #[serde(skip)]
    orbit_of: Vec<usize>,
}

impl EndpointGraph {
    pub fn new(perm: &Permutation) -> Self {
        let d = perm.d();
        let sigma: Vec<usize> = (0..=d)
            .map(|j| {
                if j == 0 {
                    perm.preimage(1) - 1
                } else if perm.image(j) == d {
                    d
                } else {
                    perm.preimage(perm.image(j) + 1) - 1
                }
            })
            .collect();

        let mut orbit_of = vec![usize::MAX; d + 1];
        let mut orbits = Vec::new();
        for start in 0..=d {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            let mut v = start;
            while orbit_of[v] == usize::MAX {
                orbit_of[v] = orbits.len();
                orbit.push(v);
                v = sigma[v];
            }
            orbits.push(orbit);
        }
        EndpointGraph {
            d,
            sigma,
            orbits,
            orbit_of,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Cycle decomposition of `sigma`, each cycle listed in edge order from
    /// its smallest vertex.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbit_of[u] == self.orbit_of[v]
    }

    pub fn is_type_w(&self) -> bool {
        !self.same_orbit(0, self.d)
    }

    /// Directed edges `(j, sigma(j))`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sigma.iter().copied().enumerate()
    }

    /// The orbit of `0` in edge order, `[0, sigma(0), sigma^2(0), ...]`,
    /// stopping before the return to `0`.
    pub fn loop_through_zero(&self) -> Vec<usize> {
        // Orbits are discovered starting from their smallest vertex, so the
        // one containing 0 is already in the right order.
        self.orbits[self.orbit_of[0]].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Permutation {
        text.parse().unwrap()
    }

    #[test]
    fn parsing() {
        let swap = p("2 1");
        assert_eq!(swap.image(1), 2);
        assert_eq!(swap.image(2), 1);
        assert_eq!(p("3 2 1").images(), &[3, 2, 1]);
        assert!(matches!(Permutation::parse("2 2 1"), Err(PermError::NotABijection { .. })));
        assert_eq!(Permutation::parse("   "), Err(PermError::EmptyInput));
        assert!(matches!(Permutation::parse("0 1"), Err(PermError::NotABijection { .. })));
        assert!(matches!(Permutation::parse("1 x"), Err(PermError::InvalidToken(_))));
    }

    #[test]
    fn irreducibility() {
        assert!(!Permutation::identity(3).is_irreducible());
        assert!(p("3 2 1").is_irreducible());
        assert!(!p("2 1 3").is_irreducible());
        assert!(p("1").is_irreducible());
        assert!(p("3 1 2").is_irreducible());
    }

    #[test]
    fn sigma_examples() {
        let g = p("2 1").endpoint_graph();
        assert_eq!(g.sigma(), &[1, 2, 0]);
        assert_eq!(g.orbits(), &[vec![0, 1, 2]]);

        let g = p("3 2 1").endpoint_graph();
        assert_eq!(g.sigma(), &[2, 3, 0, 1]);
        assert_eq!(g.orbits(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn type_w_examples() {
        assert!(!p("2 1").is_type_w());
        assert!(p("3 2 1").is_type_w());
        let id = Permutation::identity(2);
        assert_eq!(id.endpoint_graph().sigma(), &[0, 1, 2]);
        assert!(id.is_type_w());
        assert!(!id.is_irreducible());
        assert!(!p("4 3 2 1").is_type_w());
        assert!(p("5 4 3 2 1").is_type_w());
    }

    #[test]
    fn loops_through_zero() {
        assert_eq!(p("3 2 1").endpoint_graph().loop_through_zero(), vec![0, 2]);
        assert_eq!(p("2 1").endpoint_graph().loop_through_zero(), vec![0, 1, 2]);
        assert_eq!(p("5 4 3 2 1").endpoint_graph().loop_through_zero(), vec![0, 4, 2]);
    }

    fn all_permutations(d: usize) -> Vec<Vec<usize>> {
        if d == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for smaller in all_permutations(d - 1) {
            for pos in 0..=smaller.len() {
                let mut v = smaller.clone();
                v.insert(pos, d);
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn sigma_is_a_bijection_up_to_seven() {
        for d in 1..=7 {
            let perms = all_permutations(d);
            assert_eq!(perms.len(), (1..=d).product::<usize>());
            for images in perms {
                let g = Permutation::new(images).unwrap().endpoint_graph();
                let mut seen = vec![false; d + 1];
                for &s in g.sigma() {
                    assert!(!seen[s]);
                    seen[s] = true;
                }
                let mut covered: Vec<usize> = g.orbits().iter().flatten().copied().collect();
                covered.sort_unstable();
                assert_eq!(covered, (0..=d).collect::<Vec<_>>());
                assert_eq!(g.loop_through_zero()[0], 0);
            }
        }
    }

    #[test]
    fn type_w_survives_display_round_trip() {
        for images in all_permutations(5) {
            let perm = Permutation::new(images).unwrap();
            let again: Permutation = perm.to_string().parse().unwrap();
            assert_eq!(again.is_type_w(), perm.is_type_w());
        }
    }
}
