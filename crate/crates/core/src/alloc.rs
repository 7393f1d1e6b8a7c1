//! The allocation space `A^N`.
//!
//! Profiles (one ground-set element per agent) are identified with dense
//! mixed-radix integers so relation tables can be flat arrays; agent 0 is the
//! lowest-order digit. This module provides the codec, the substitution and
//! permutation actions, and the orbit decomposition under coordinate
//! permutations.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AllocError {
    #[error("profile space {elements}^{agents} exceeds the enumeration bound {bound}")]
    BoundExceeded {
        elements: usize,
        agents: usize,
        bound: usize,
    },
    #[error("need at least 2 agents, got {0}")]
    TooFewAgents(usize),
}

/// Bounds for exhaustive work; see `enumerate` for the weak-order bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bounds {
    /// Maximum number of profiles (`m^n`).
    pub max_profiles: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_profiles: 1_000_000,
        }
    }
}

/// Dense index scheme for `A^N` with `m` elements and `n` agents.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    m: usize,
    n: usize,
    count: usize,
    pow: Vec<usize>,
}

impl ProfileSpace {
    pub fn new(m: usize, n: usize, bounds: &Bounds) -> Result<ProfileSpace, AllocError> {
        if n < 2 {
            return Err(AllocError::TooFewAgents(n));
        }
        let mut count: usize = 1;
        let mut pow = Vec::with_capacity(n + 1);
        for _ in 0..n {
            pow.push(count);
            count = count.saturating_mul(m);
            if count > bounds.max_profiles {
                return Err(AllocError::BoundExceeded {
                    elements: m,
                    agents: n,
                    bound: bounds.max_profiles,
                });
            }
        }
        pow.push(count);
        Ok(ProfileSpace { m, n, count, pow })
    }

    pub fn elements(&self) -> usize {
        self.m
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    /// Total number of profiles, `m^n`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn coord(&self, idx: usize, agent: usize) -> usize {
        idx / self.pow[agent] % self.m
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        (0..self.n).map(|i| self.coord(idx, i)).collect()
    }

    pub fn decode_into(&self, idx: usize, out: &mut [usize]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coord(idx, i);
        }
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.n);
        coords
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                debug_assert!(c < self.m);
                c * self.pow[i]
            })
            .sum()
    }

    /// Profile with every agent at `elem`.
    pub fn constant(&self, elem: usize) -> usize {
        (0..self.n).map(|i| elem * self.pow[i]).sum()
    }

    /// Replace agent `i`'s coordinate by `elem`; `a_i b` in substitution
    /// notation when applied to a constant profile.
    pub fn substitute(&self, idx: usize, agent: usize, elem: usize) -> usize {
        let old = self.coord(idx, agent);
        idx - old * self.pow[agent] + elem * self.pow[agent]
    }

    /// Coordinate permutation: result has coordinate `k` equal to
    /// `x_{perm[k]}`.
    pub fn permute(&self, idx: usize, perm: &[usize]) -> usize {
        (0..self.n)
            .map(|k| self.coord(idx, perm[k]) * self.pow[k])
            .sum()
    }

    /// `(x_M, y_{-M})`: coordinates in `members` come from `x`, the rest
    /// from `y`.
    pub fn mixed(&self, x: usize, y: usize, members: &AgentSet) -> usize {
        (0..self.n)
            .map(|i| {
                let src = if members.contains(i) { x } else { y };
                self.coord(src, i) * self.pow[i]
            })
            .sum()
    }

    /// Orbit decomposition under all coordinate permutations. Orbit ids are
    /// assigned in first-occurrence order scanning profile indices ascending.
    pub fn orbits(&self) -> OrbitTable {
        let mut orbit_id = vec![u32::MAX; self.count];
        let mut rep = vec![0u32; self.count];
        let mut rep_to_orbit = vec![u32::MAX; self.count];
        let mut reps: Vec<u32> = Vec::new();
        let mut members: Vec<Vec<u32>> = Vec::new();
        let mut coords = vec![0usize; self.n];
        for idx in 0..self.count {
            self.decode_into(idx, &mut coords);
            coords.sort_unstable();
            let r = self.encode(&coords);
            rep[idx] = r as u32;
            if rep_to_orbit[r] == u32::MAX {
                rep_to_orbit[r] = reps.len() as u32;
                reps.push(r as u32);
                members.push(Vec::new());
            }
            let id = rep_to_orbit[r];
            orbit_id[idx] = id;
            members[id as usize].push(idx as u32);
        }
        OrbitTable {
            orbit_id,
            rep,
            reps,
            members,
        }
    }
}

/// A subset of agents, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentSet(pub u64);

impl AgentSet {
    pub fn empty() -> AgentSet {
        AgentSet(0)
    }

    pub fn full(n: usize) -> AgentSet {
        AgentSet((1u64 << n) - 1)
    }

    pub fn from_indices(idx: &[usize]) -> AgentSet {
        AgentSet(idx.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }
}

/// Orbits of coordinate permutations over the profile space.
///
/// The representative of an orbit is its member with coordinates sorted in
/// nondecreasing element order, i.e. the lexicographically smallest member
/// reading agent 0 first.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    orbit_id: Vec<u32>,
    rep: Vec<u32>,
    reps: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl OrbitTable {
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_of(&self, idx: usize) -> u32 {
        self.orbit_id[idx]
    }

    pub fn representative(&self, idx: usize) -> u32 {
        self.rep[idx]
    }

    pub fn representatives(&self) -> &[u32] {
        &self.reps
    }

    pub fn members(&self, orbit: u32) -> &[u32] {
        &self.members[orbit as usize]
    }

    pub fn same_orbit(&self, x: usize, y: usize) -> bool {
        self.orbit_id[x] == self.orbit_id[y]
    }
}

/// All permutations of `0..n` in lexicographic order, identity first.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
