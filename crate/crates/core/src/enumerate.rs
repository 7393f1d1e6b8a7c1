//! Exhaustive generation of weak orders, directly over profiles and via the
//! symmetry quotient, plus signature search over the streams.
//!
//! A weak order on a k-element set is an ordered set partition: level 0
//! (worst) gets a nonempty block of elements, then level 1 among the rest,
//! and so on. Blocks are chosen by ascending submask of the remaining
//! elements, which yields every weak order exactly once in a fixed order
//! with no hashing. Totals follow the ordered Bell recurrence
//! `a(0) = 1, a(k) = sum_j C(k,j) a(k-j)`.

use thiserror::Error;

use crate::alloc::{AllocError, OrbitTable, ProfileSpace};
use crate::axioms::{self, Axiom, AxiomError, AxiomVerdict};
use crate::relations::{ExtensionalRelation, RankFunction};
use crate::space::ValidatedSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("{count} weak orders on {k} items exceeds the bound {bound}")]
    BoundExceeded { k: usize, count: u128, bound: u64 },
    #[error("weak-order count on {0} items overflows")]
    CountOverflow(usize),
    #[error(transparent)]
    Alloc(#[from] AllocError),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
}

/// Bound on how many weak orders a stream may emit.
#[derive(Debug, Clone, Copy)]
pub struct EnumBounds {
    pub max_weak_orders: u64,
}

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds {
            max_weak_orders: 10_000_000,
        }
    }
}

/// Number of weak orders on a k-element set (ordered Bell / Fubini number),
/// or `None` on overflow.
pub fn ordered_bell(k: usize) -> Option<u128> {
    let mut binom = vec![vec![0u128; k + 1]; k + 1];
    for i in 0..=k {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1].checked_add(binom[i - 1][j])?;
        }
    }
    let mut a = vec![0u128; k + 1];
    a[0] = 1;
    for i in 1..=k {
        let mut sum: u128 = 0;
        for j in 1..=i {
            sum = sum.checked_add(binom[i][j].checked_mul(a[i - j])?)?;
        }
        a[i] = sum;
    }
    Some(a[k])
}

/// Stream of all weak orders on `0..k`, emitted as rank vectors
/// (higher level = better) in a fixed canonical order.
#[derive(Debug)]
pub struct WeakOrders {
    k: usize,
    count: u128,
}

impl WeakOrders {
    pub fn new(k: usize, bounds: &EnumBounds) -> Result<WeakOrders, EnumError> {
        assert!(k <= 64, "weak-order enumeration is masked to 64 items");
        let count = ordered_bell(k).ok_or(EnumError::CountOverflow(k))?;
        if count > bounds.max_weak_orders as u128 {
            return Err(EnumError::BoundExceeded {
                k,
                count,
                bound: bounds.max_weak_orders,
            });
        }
        Ok(WeakOrders { k, count })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Exact number of emissions.
    pub fn count(&self) -> u128 {
        self.count
    }

    /// Visits every weak order once as `(enumeration index, ranks)`.
    pub fn for_each(&self, mut f: impl FnMut(u64, &[u32])) {
        let mut ranks = vec![0u32; self.k];
        let mut index = 0u64;
        let full: u64 = if self.k == 64 {
            u64::MAX
        } else {
            (1 << self.k) - 1
        };
        assign_blocks(full, 0, &mut ranks, &mut index, &mut f);
        debug_assert_eq!(index as u128, self.count);
    }

    pub fn collect(&self) -> Vec<RankFunction> {
        let mut out = Vec::with_capacity(self.count as usize);
        self.for_each(|_, ranks| out.push(RankFunction(ranks.to_vec())));
        out
    }
}

/// Recursive block assignment: pick the level-`level` block as a nonempty
/// submask of `remaining` (ascending), recurse on the rest.
fn assign_blocks(
    remaining: u64,
    level: u32,
    ranks: &mut [u32],
    index: &mut u64,
    f: &mut impl FnMut(u64, &[u32]),
) {
    if remaining == 0 {
        f(*index, ranks);
        *index += 1;
        return;
    }
    // Nonempty submasks of `remaining` in increasing numeric order.
    let mut block = 0u64;
    loop {
        block = block.wrapping_sub(remaining) & remaining;
        if block == 0 {
            return;
        }
        let mut bits = block;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            ranks[i] = level;
            bits &= bits - 1;
        }
        assign_blocks(remaining & !block, level + 1, ranks, index, f);
    }
}

/// Stream of all symmetric weak orders on the profile space: weak orders on
/// orbits, lifted to profiles.
pub struct SymmetricWeakOrders<'a> {
    orbits: &'a OrbitTable,
    profiles: usize,
    inner: WeakOrders,
}

impl<'a> SymmetricWeakOrders<'a> {
    pub fn new(
        ps: &ProfileSpace,
        orbits: &'a OrbitTable,
        bounds: &EnumBounds,
    ) -> Result<SymmetricWeakOrders<'a>, EnumError> {
        Ok(SymmetricWeakOrders {
            orbits,
            profiles: ps.len(),
            inner: WeakOrders::new(orbits.orbit_count(), bounds)?,
        })
    }

    pub fn count(&self) -> u128 {
        self.inner.count()
    }

    /// Visits every symmetric weak order once as profile-level ranks.
    pub fn for_each(&self, mut f: impl FnMut(u64, &[u32])) {
        let mut lifted = vec![0u32; self.profiles];
        self.inner.for_each(|index, orbit_ranks| {
            for (idx, slot) in lifted.iter_mut().enumerate() {
                *slot = orbit_ranks[self.orbits.orbit_of(idx) as usize];
            }
            f(index, &lifted);
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Direct,
    Quotient,
}

impl SearchMode {
    pub fn parse(s: &str) -> Option<SearchMode> {
        match s {
            "direct" => Some(SearchMode::Direct),
            "quotient" => Some(SearchMode::Quotient),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Direct => "direct",
            SearchMode::Quotient => "quotient",
        }
    }
}

/// First match and exact match count for an axiom signature over a stream.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub scanned: u64,
    pub count: u64,
    pub first: Option<SearchHit>,
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub index: u64,
    pub ranks: RankFunction,
}

/// Rough cost rank used to order checks cheapest-first during search;
/// separability carries the heaviest quantifier.
fn cost_rank(axiom: Axiom) -> u32 {
    match axiom {
        Axiom::Symmetry => 0,
        Axiom::WeakOrder => 1,
        Axiom::NonDegeneracy => 2,
        Axiom::SufficientarianJudgment => 3,
        Axiom::DualSufficientarianJudgment => 4,
        Axiom::WeakSufficientarianJudgment => 5,
        Axiom::Monotonicity => 6,
        Axiom::GeqComplements => 7,
        Axiom::AbsoluteIndividualImprovement => 8,
        Axiom::PrioritarianThreshold => 9,
        Axiom::Separability => 10,
    }
}

/// Dispatches one axiom checker.
pub fn run_axiom(
    axiom: Axiom,
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<AxiomVerdict, AxiomError> {
    Ok(match axiom {
        Axiom::WeakOrder => axioms::check_weak_order(rel),
        Axiom::Symmetry => axioms::check_symmetry(rel, ps),
        Axiom::Separability => axioms::check_separability(rel, ps),
        Axiom::SufficientarianJudgment => axioms::check_sufficientarian_judgment(rel, ps),
        Axiom::DualSufficientarianJudgment => axioms::check_dual_sj(rel, ps),
        Axiom::WeakSufficientarianJudgment => axioms::check_weak_sj(rel, ps),
        Axiom::NonDegeneracy => axioms::check_nondegeneracy(rel),
        Axiom::Monotonicity => axioms::check_monotonicity(rel, space, ps)?,
        Axiom::GeqComplements => axioms::check_geq_complements(rel, space, ps)?,
        Axiom::AbsoluteIndividualImprovement => {
            axioms::check_absolute_individual_improvement(rel, space, ps)?
        }
        Axiom::PrioritarianThreshold => {
            axioms::check_prioritarian_threshold(rel, space, ps)?.verdict
        }
    })
}

/// Scans the chosen stream for relations satisfying every axiom in
/// `satisfy` and violating every axiom in `violate`. Returns the first
/// match (by enumeration index) and the exact total count.
pub fn search_signature(
    space: &ValidatedSpace,
    ps: &ProfileSpace,
    satisfy: &[Axiom],
    violate: &[Axiom],
    mode: SearchMode,
    bounds: &EnumBounds,
) -> Result<SearchOutcome, EnumError> {
    let orbits = ps.orbits();

    // Requirements sorted cheapest-first, with the expected outcome.
    // Contradictory signatures scan anyway and report their exact (zero)
    // count.
    let mut wanted: Vec<(Axiom, bool)> = satisfy
        .iter()
        .map(|&a| (a, true))
        .chain(violate.iter().map(|&a| (a, false)))
        .collect();
    wanted.sort_by_key(|&(a, _)| cost_rank(a));

    // Validate applicability up front on a cheap dummy so a mid-scan error
    // is impossible.
    {
        let dummy = RankFunction(vec![0; ps.len()]).to_relation();
        for &(a, _) in &wanted {
            run_axiom(a, &dummy, space, ps)?;
        }
    }

    let mut scanned = 0u64;
    let mut count = 0u64;
    let mut first: Option<SearchHit> = None;

    let mut visit = |index: u64, ranks: &[u32]| {
        scanned += 1;
        let mut table: Option<ExtensionalRelation> = None;
        for &(axiom, expected) in &wanted {
            let holds = if axiom == Axiom::Symmetry {
                // Symmetric iff ranks are constant on orbits.
                (0..ps.len()).all(|idx| ranks[idx] == ranks[orbits.representative(idx) as usize])
            } else {
                let rel = table.get_or_insert_with(|| RankFunction(ranks.to_vec()).to_relation());
                run_axiom(axiom, rel, space, ps)
                    .expect("applicability validated before the scan")
                    .holds
            };
            if holds != expected {
                return;
            }
        }
        count += 1;
        if first.is_none() {
            first = Some(SearchHit {
                index,
                ranks: RankFunction(ranks.to_vec()),
            });
        }
    };

    match mode {
        SearchMode::Direct => WeakOrders::new(ps.len(), bounds)?.for_each(&mut visit),
        SearchMode::Quotient => SymmetricWeakOrders::new(ps, &orbits, bounds)?.for_each(&mut visit),
    }

    Ok(SearchOutcome {
        scanned,
        count,
        first,
    })
}

/// Groups profile indices by rank, best level first (for rendering search
/// hits in the explicit-relation level format).
pub fn rank_levels(ranks: &RankFunction) -> Vec<Vec<usize>> {
    let mut levels: Vec<u32> = ranks.0.clone();
    levels.sort_unstable();
    levels.dedup();
    levels
        .iter()
        .rev()
        .map(|&lvl| {
            (0..ranks.0.len())
                .filter(|&idx| ranks.0[idx] == lvl)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alloc::Bounds;
    use crate::space::load_builtin;
    use std::collections::HashSet;

    /// Independent recurrence oracle, kept separate from `ordered_bell`.
    fn fubini_oracle(k: usize) -> u64 {
        fn binom(n: usize, r: usize) -> u64 {
            let mut acc = 1u64;
            for i in 0..r {
                acc = acc * (n - i) as u64 / (i + 1) as u64;
            }
            acc
        }
        let mut a = vec![1u64];
        for i in 1..=k {
            let mut sum = 0;
            for j in 1..=i {
                sum += binom(i, j) * a[i - j];
            }
            a.push(sum);
        }
        a[k]
    }

    #[test]
    fn ordered_bell_matches_the_recurrence_oracle() {
        let expected = [1u64, 1, 3, 13, 75, 541, 4683, 47293, 545835, 7087261];
        for (k, &want) in expected.iter().enumerate() {
            assert_eq!(fubini_oracle(k), want, "oracle k={k}");
            assert_eq!(ordered_bell(k), Some(want as u128), "lib k={k}");
        }
    }

    #[test]
    fn stream_counts_and_uniqueness() {
        let bounds = EnumBounds::default();
        for k in 1..=6 {
            let stream = WeakOrders::new(k, &bounds).unwrap();
            let mut seen = HashSet::new();
            let mut n = 0u64;
            stream.for_each(|index, ranks| {
                assert_eq!(index, n);
                n += 1;
                assert!(seen.insert(ranks.to_vec()), "duplicate at {ranks:?}");
                // Levels are dense from 0.
                let max = *ranks.iter().max().unwrap();
                for l in 0..=max {
                    assert!(ranks.contains(&l));
                }
            });
            assert_eq!(n as u128, ordered_bell(k).unwrap());
            assert_eq!(seen.len() as u128, stream.count());
        }
    }

    #[test]
    fn emitted_orders_are_weak_orders() {
        let bounds = EnumBounds::default();
        WeakOrders::new(4, &bounds).unwrap().for_each(|_, ranks| {
            let rel = RankFunction(ranks.to_vec()).to_relation();
            assert!(crate::axioms::check_weak_order(&rel).holds);
        });
    }

    #[test]
    fn bound_is_enforced() {
        let err = WeakOrders::new(
            9,
            &EnumBounds {
                max_weak_orders: 100,
            },
        )
        .unwrap_err();
        assert!(matches!(err, EnumError::BoundExceeded { .. }));
    }

    #[test]
    fn quotient_counts_match_orbit_fubini() {
        let bounds = EnumBounds::default();
        for (name, n, orbits, want) in [("B2", 2, 3, 13u64), ("C3", 2, 6, 4683), ("B2", 3, 4, 75)] {
            let space = load_builtin(name).unwrap();
            let ps = ProfileSpace::new(space.len(), n, &Bounds::default()).unwrap();
            let table = ps.orbits();
            assert_eq!(table.orbit_count(), orbits);
            let stream = SymmetricWeakOrders::new(&ps, &table, &bounds).unwrap();
            let mut count = 0u64;
            stream.for_each(|_, ranks| {
                count += 1;
                // Lifted ranks are constant on orbits.
                for idx in 0..ps.len() {
                    assert_eq!(ranks[idx], ranks[table.representative(idx) as usize]);
                }
            });
            assert_eq!(count, want, "{name} n={n}");
        }
    }

    #[test]
    fn direct_symmetric_filter_equals_quotient_stream() {
        // All 75 weak orders over B2^2, filtered to the symmetric ones,
        // must be exactly the 13 lifted quotient relations.
        let space = load_builtin("B2").unwrap();
        let ps = ProfileSpace::new(space.len(), 2, &Bounds::default()).unwrap();
        let orbits = ps.orbits();
        let bounds = EnumBounds::default();

        let mut direct: HashSet<Vec<u32>> = HashSet::new();
        WeakOrders::new(ps.len(), &bounds)
            .unwrap()
            .for_each(|_, ranks| {
                let symmetric =
                    (0..ps.len()).all(|i| ranks[i] == ranks[orbits.representative(i) as usize]);
                if symmetric {
                    direct.insert(ranks.to_vec());
                }
            });

        let mut quotient: HashSet<Vec<u32>> = HashSet::new();
        SymmetricWeakOrders::new(&ps, &orbits, &bounds)
            .unwrap()
            .for_each(|_, ranks| {
                quotient.insert(ranks.to_vec());
            });

        assert_eq!(direct.len(), 13);
        assert_eq!(direct, quotient);
    }

    #[test]
    fn contradictory_signatures_are_empty() {
        let space = load_builtin("B2").unwrap();
        let ps = ProfileSpace::new(space.len(), 2, &Bounds::default()).unwrap();
        let out = search_signature(
            &space,
            &ps,
            &[Axiom::WeakOrder],
            &[Axiom::WeakOrder],
            SearchMode::Direct,
            &EnumBounds::default(),
        )
        .unwrap();
        assert_eq!(out.count, 0);
        assert!(out.first.is_none());
        assert_eq!(out.scanned, 75);
    }

    #[test]
    fn searching_the_four_axioms_on_b2_finds_three() {
        let space = load_builtin("B2").unwrap();
        let ps = ProfileSpace::new(space.len(), 2, &Bounds::default()).unwrap();
        let four = [
            Axiom::WeakOrder,
            Axiom::Symmetry,
            Axiom::Separability,
            Axiom::SufficientarianJudgment,
        ];
        for mode in [SearchMode::Direct, SearchMode::Quotient] {
            let out =
                search_signature(&space, &ps, &four, &[], mode, &EnumBounds::default()).unwrap();
            assert_eq!(out.count, 3, "{mode:?}");
            assert!(out.first.is_some());
        }
    }

    // Recorded count: among the 4683 symmetric weak orders on the
    // three-point chain squared, exactly 18 are separable weak orders that
    // break sufficientarian judgment (the 6 three-level endogenous leximin
    // relations plus 12 utilitarian-like relations that break the weak
    // judgment too). The first hit is the additive chain at index 0.
    #[test]
    fn utilitarian_like_signature_count_on_c3_is_frozen() {
        let space = load_builtin("C3").unwrap();
        let ps = ProfileSpace::new(space.len(), 2, &Bounds::default()).unwrap();
        let out = search_signature(
            &space,
            &ps,
            &[Axiom::WeakOrder, Axiom::Symmetry, Axiom::Separability],
            &[Axiom::SufficientarianJudgment],
            SearchMode::Quotient,
            &EnumBounds::default(),
        )
        .unwrap();
        assert_eq!(out.scanned, 4683);
        assert_eq!(out.count, 18);
        assert_eq!(out.first.unwrap().index, 0);

        let weak_too = search_signature(
            &space,
            &ps,
            &[Axiom::WeakOrder, Axiom::Symmetry, Axiom::Separability],
            &[
                Axiom::SufficientarianJudgment,
                Axiom::WeakSufficientarianJudgment,
            ],
            SearchMode::Quotient,
            &EnumBounds::default(),
        )
        .unwrap();
        assert_eq!(weak_too.count, 12);
    }

    #[test]
    fn rank_levels_renders_best_first() {
        let levels = rank_levels(&RankFunction(vec![0, 2, 1, 2]));
        assert_eq!(levels, vec![vec![1, 3], vec![2], vec![0]]);
    }
}
