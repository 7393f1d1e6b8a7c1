//! Extensional binary relations over `A^N` and the intensional rule catalog.
//!
//! An [`ExtensionalRelation`] is the complete boolean comparison table the
//! axiom checkers run against. A [`Rule`] is an intensional description of a
//! ranking rule; [`materialize`] turns it into a table by direct evaluation
//! of its definition. Rank-representable rules go through [`RankFunction`];
//! rules whose definition is genuinely pairwise (the guarded product rule,
//! permutation equivalence) fill the table cell by cell so that the axiom
//! checkers, not the materializer, decide whether the result is a weak order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alloc::ProfileSpace;
use crate::rational::Rat;
use crate::space::{ElementSet, SpaceError, ValidatedSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("rule `{rule}` is incompatible with space `{space}`: {reason}")]
    IncompatibleSpace {
        rule: String,
        space: String,
        reason: String,
    },
    #[error("alpha sequence must be strictly increasing")]
    NonIncreasingAlpha,
    #[error("alpha sequence must be strictly positive")]
    NonPositiveAlpha,
    #[error("alpha sequence has length {got}, need one weight per agent ({want})")]
    AlphaLengthMismatch { got: usize, want: usize },
    #[error("tau must lie strictly between 0 and 1, got {0}")]
    TauOutOfRange(Rat),
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("weight vector has length {got}, need one weight per agent ({want})")]
    WeightLengthMismatch { got: usize, want: usize },
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("agent index {agent} out of range for {agents} agents")]
    InvalidAgent { agent: usize, agents: usize },
    #[error("level list must cover every element of A exactly once")]
    LevelsNotAPartition,
    #[error("unknown profile {0}")]
    UnknownProfile(String),
    #[error("incomplete table: {0}")]
    IncompleteTable(String),
    #[error("profile {0} appears in two different levels")]
    AmbiguousProfile(String),
    #[error("explicit rule references file `{0}`; inline it before resolving")]
    UnresolvedFile(String),
    #[error("invalid rule json: {0}")]
    Json(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Complete boolean comparison table over all profiles.
///
/// `geq(x, y)` holds when `x` is ranked weakly above `y`. No structure is
/// imposed at construction; completeness and transitivity are the business
/// of the axiom checkers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionalRelation {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ExtensionalRelation {
    pub fn new_empty(size: usize) -> ExtensionalRelation {
        let words = size.div_ceil(64);
        ExtensionalRelation {
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn geq(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        let w = &mut self.bits[x * self.words + y / 64];
        if v {
            *w |= 1 << (y % 64);
        } else {
            *w &= !(1 << (y % 64));
        }
    }

    pub fn strict(&self, x: usize, y: usize) -> bool {
        self.geq(x, y) && !self.geq(y, x)
    }

    pub fn indiff(&self, x: usize, y: usize) -> bool {
        self.geq(x, y) && self.geq(y, x)
    }

    pub fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    pub fn is_total_indifference(&self) -> bool {
        (0..self.size).all(|x| {
            let row = self.row(x);
            (0..self.size).all(|y| row[y / 64] >> (y % 64) & 1 == 1)
        })
    }

    /// First cell where the two tables differ, scanning rows then columns.
    pub fn first_difference(&self, other: &ExtensionalRelation) -> Option<(usize, usize)> {
        debug_assert_eq!(self.size, other.size);
        for x in 0..self.size {
            for y in 0..self.size {
                if self.geq(x, y) != other.geq(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// Total rank assignment over profiles; higher level = socially better.
/// Induces the complete transitive relation `x >= y iff level(x) >= level(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankFunction(pub Vec<u32>);

impl RankFunction {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn level(&self, x: usize) -> u32 {
        self.0[x]
    }

    pub fn to_relation(&self) -> ExtensionalRelation {
        let size = self.0.len();
        let words = size.div_ceil(64);
        // Profiles at equal levels share rows; build one row per level.
        let mut levels: Vec<u32> = self.0.clone();
        levels.sort_unstable();
        levels.dedup();
        let mut patterns: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for &lvl in &levels {
            let mut row = vec![0u64; words];
            for (y, &ly) in self.0.iter().enumerate() {
                if ly <= lvl {
                    row[y / 64] |= 1 << (y % 64);
                }
            }
            patterns.insert(lvl, row);
        }
        let mut bits = vec![0u64; words * size];
        for (x, &lx) in self.0.iter().enumerate() {
            bits[x * words..(x + 1) * words].copy_from_slice(&patterns[&lx]);
        }
        ExtensionalRelation { size, words, bits }
    }
}

/// Lexicographic comparison of the sorted-ascending rearrangements: the
/// classical leximin ranking on rational vectors.
pub fn leximin_compare(u: &[Rat], v: &[Rat]) -> Result<Ordering, RelationError> {
    if u.len() != v.len() {
        return Err(RelationError::LengthMismatch(u.len(), v.len()));
    }
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort_unstable();
    sv.sort_unstable();
    Ok(su.cmp(&sv))
}

/// The intensional catalog. Every rule named in the sufficientarian
/// framework, each materializable to an extensional table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Sufficientarian { s: ElementSet },
    WeightedSufficientarian { s: ElementSet, lambda: Vec<Rat> },
    Dictatorship { ranks: Vec<u32>, dictator: usize },
    ThresholdSufficientarian { beta: usize },
    GeneralizedThresholdSufficientarian { filter: ElementSet },
    EndogenousLeximin { ranks: Vec<u32> },
    Utilitarian { u: Vec<Rat> },
    MinRule,
    PermEquiv,
    Example1 { alpha: Vec<Rat> },
    Example2 { tau: Rat },
    Example3,
    Explicit { levels: Vec<Vec<Vec<String>>> },
    ExplicitTable { table: Vec<Vec<bool>> },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Sufficientarian { .. } => "sufficientarian",
            Rule::WeightedSufficientarian { .. } => "weighted_sufficientarian",
            Rule::Dictatorship { .. } => "dictatorship",
            Rule::ThresholdSufficientarian { .. } => "threshold",
            Rule::GeneralizedThresholdSufficientarian { .. } => "generalized_threshold",
            Rule::EndogenousLeximin { .. } => "endogenous_leximin",
            Rule::Utilitarian { .. } => "utilitarian",
            Rule::MinRule => "min",
            Rule::PermEquiv => "perm_equiv",
            Rule::Example1 { .. } => "example1",
            Rule::Example2 { .. } => "example2",
            Rule::Example3 => "example3",
            Rule::Explicit { .. } | Rule::ExplicitTable { .. } => "explicit",
        }
    }
}

fn incompatible(rule: &str, space: &ValidatedSpace, reason: &str) -> RelationError {
    RelationError::IncompatibleSpace {
        rule: rule.to_string(),
        space: space.name().to_string(),
        reason: reason.to_string(),
    }
}

fn numeric_chain<'s>(rule: &str, space: &'s ValidatedSpace) -> Result<&'s [Rat], RelationError> {
    space.numeric_chain().ok_or_else(|| {
        incompatible(
            rule,
            space,
            "requires a numeric chain (total order with values)",
        )
    })
}

/// Dense ranks (higher = better) from per-profile comparable keys.
fn ranks_from_keys<K: Ord>(keys: Vec<K>) -> RankFunction {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup_by(|a, b| a == b);
    let ranks = keys
        .iter()
        .map(|k| sorted.binary_search_by(|probe| probe.cmp(&k)).unwrap() as u32)
        .collect();
    RankFunction(ranks)
}

fn sufficientarian_ranks(s: &ElementSet, ps: &ProfileSpace) -> RankFunction {
    let mut ranks = vec![0u32; ps.len()];
    for (idx, slot) in ranks.iter_mut().enumerate() {
        *slot = (0..ps.agents())
            .filter(|&i| s.contains(ps.coord(idx, i)))
            .count() as u32;
    }
    RankFunction(ranks)
}

/// Ranks profiles by leximin over `>=*`-levels of the coordinates.
/// Satisfies the two defining clauses of the endogenous leximin ranking by
/// construction: it is symmetric (sorted level vectors) and compares
/// nondecreasing rearrangements lexicographically from the worst-off agent.
pub fn endogenous_leximin_materialize(
    ranks_on_a: &[u32],
    ps: &ProfileSpace,
) -> ExtensionalRelation {
    endogenous_leximin_ranks(ranks_on_a, ps).to_relation()
}

pub(crate) fn endogenous_leximin_ranks(ranks_on_a: &[u32], ps: &ProfileSpace) -> RankFunction {
    debug_assert_eq!(ranks_on_a.len(), ps.elements());
    let keys: Vec<Vec<u32>> = (0..ps.len())
        .map(|idx| {
            let mut v: Vec<u32> = (0..ps.agents())
                .map(|i| ranks_on_a[ps.coord(idx, i)])
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    ranks_from_keys(keys)
}

/// The fixed three-agent, three-element counterexample chain, best level
/// first, as multisets of element indices. The orbit `{0,0,2}` is not part
/// of the nine-level chain the rule is usually quoted with; exhaustive
/// search over all placements (see the characterize tests) shows the single
/// position compatible with separability and weak sufficientarian judgment
/// is strictly between `{0,1,1}` and `{0,0,1}`, which is where it sits here.
pub const EXAMPLE3_LEVELS: [[usize; 3]; 10] = [
    [2, 2, 2],
    [1, 2, 2],
    [1, 1, 2],
    [0, 2, 2],
    [1, 1, 1],
    [0, 1, 2],
    [0, 1, 1],
    [0, 0, 2],
    [0, 0, 1],
    [0, 0, 0],
];

fn example3_ranks(ps: &ProfileSpace) -> RankFunction {
    let nlevels = EXAMPLE3_LEVELS.len() as u32;
    let mut ranks = vec![0u32; ps.len()];
    let mut coords = [0usize; 3];
    for (idx, slot) in ranks.iter_mut().enumerate() {
        ps.decode_into(idx, &mut coords);
        coords.sort_unstable();
        let pos = EXAMPLE3_LEVELS
            .iter()
            .position(|l| *l == coords)
            .expect("every multiset of {0,1,2}^3 is listed");
        *slot = nlevels - 1 - pos as u32;
    }
    RankFunction(ranks)
}

/// Materializes a rule into its full comparison table. Deterministic.
pub fn materialize(
    rule: &Rule,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<ExtensionalRelation, RelationError> {
    debug_assert_eq!(space.len(), ps.elements());
    let n = ps.agents();
    match rule {
        Rule::Sufficientarian { s } => Ok(sufficientarian_ranks(s, ps).to_relation()),
        Rule::WeightedSufficientarian { s, lambda } => {
            if lambda.len() != n {
                return Err(RelationError::WeightLengthMismatch {
                    got: lambda.len(),
                    want: n,
                });
            }
            if !lambda.iter().all(|w| w.is_positive()) {
                return Err(RelationError::NonPositiveWeight);
            }
            let keys: Vec<Rat> = (0..ps.len())
                .map(|idx| {
                    (0..n)
                        .filter(|&i| s.contains(ps.coord(idx, i)))
                        .map(|i| lambda[i])
                        .fold(Rat::ZERO, |acc, w| acc + w)
                })
                .collect();
            Ok(ranks_from_keys(keys).to_relation())
        }
        Rule::Dictatorship { ranks, dictator } => {
            if *dictator >= n {
                return Err(RelationError::InvalidAgent {
                    agent: *dictator,
                    agents: n,
                });
            }
            if ranks.len() != space.len() {
                return Err(RelationError::LevelsNotAPartition);
            }
            let profile_ranks: Vec<u32> = (0..ps.len())
                .map(|idx| ranks[ps.coord(idx, *dictator)])
                .collect();
            Ok(RankFunction(profile_ranks).to_relation())
        }
        Rule::ThresholdSufficientarian { beta } => {
            if !space.has_order() {
                return Err(incompatible(
                    "threshold",
                    space,
                    "requires an ordered space",
                ));
            }
            let s = space.up_set(*beta);
            Ok(sufficientarian_ranks(&s, ps).to_relation())
        }
        Rule::GeneralizedThresholdSufficientarian { filter } => {
            if !space.is_filter(filter)? {
                return Err(RelationError::Space(SpaceError::NotAFilter));
            }
            Ok(sufficientarian_ranks(filter, ps).to_relation())
        }
        Rule::EndogenousLeximin { ranks } => {
            if ranks.len() != space.len() {
                return Err(RelationError::LevelsNotAPartition);
            }
            Ok(endogenous_leximin_materialize(ranks, ps))
        }
        Rule::Utilitarian { u } => {
            if u.len() != space.len() {
                return Err(RelationError::LevelsNotAPartition);
            }
            let keys: Vec<Rat> = (0..ps.len())
                .map(|idx| {
                    (0..n)
                        .map(|i| u[ps.coord(idx, i)])
                        .fold(Rat::ZERO, |acc, v| acc + v)
                })
                .collect();
            Ok(ranks_from_keys(keys).to_relation())
        }
        Rule::MinRule => {
            let vals = numeric_chain("min", space)?;
            let keys: Vec<Rat> = (0..ps.len())
                .map(|idx| (0..n).map(|i| vals[ps.coord(idx, i)]).min().unwrap())
                .collect();
            Ok(ranks_from_keys(keys).to_relation())
        }
        Rule::PermEquiv => {
            let orbits = ps.orbits();
            let mut rel = ExtensionalRelation::new_empty(ps.len());
            for x in 0..ps.len() {
                for y in 0..ps.len() {
                    if orbits.same_orbit(x, y) {
                        rel.set(x, y, true);
                    }
                }
            }
            Ok(rel)
        }
        Rule::Example1 { alpha } => {
            let vals = numeric_chain("example1", space)?;
            if vals.iter().any(|v| *v < Rat::ZERO) {
                return Err(incompatible(
                    "example1",
                    space,
                    "requires nonnegative values",
                ));
            }
            if alpha.len() != n {
                return Err(RelationError::AlphaLengthMismatch {
                    got: alpha.len(),
                    want: n,
                });
            }
            if !alpha.iter().all(|a| a.is_positive()) {
                return Err(RelationError::NonPositiveAlpha);
            }
            if alpha.windows(2).any(|w| w[0] >= w[1]) {
                return Err(RelationError::NonIncreasingAlpha);
            }
            // U(x) = min_i alpha_i * d(x)_i with d(x) the nonincreasing
            // rearrangement, so alpha_1 multiplies the largest coordinate.
            let keys: Vec<Rat> = (0..ps.len())
                .map(|idx| {
                    let mut d: Vec<Rat> = (0..n).map(|i| vals[ps.coord(idx, i)]).collect();
                    d.sort_unstable_by(|a, b| b.cmp(a));
                    d.iter().zip(alpha).map(|(&di, &ai)| ai * di).min().unwrap()
                })
                .collect();
            Ok(ranks_from_keys(keys).to_relation())
        }
        Rule::Example2 { tau } => {
            let vals = numeric_chain("example2", space)?;
            if vals.iter().any(|v| *v < Rat::ZERO || *v > Rat::ONE) {
                return Err(incompatible(
                    "example2",
                    space,
                    "requires values within [0,1]",
                ));
            }
            if *tau <= Rat::ZERO || *tau >= Rat::ONE {
                return Err(RelationError::TauOutOfRange(*tau));
            }
            let count =
                |idx: usize| (0..n).filter(|&i| vals[ps.coord(idx, i)] >= *tau).count() as u32;
            let prod = |idx: usize| {
                (0..n)
                    .map(|i| Rat::ONE - vals[ps.coord(idx, i)])
                    .fold(Rat::ONE, |acc, v| acc * v)
            };
            let minv = |idx: usize| (0..n).map(|i| vals[ps.coord(idx, i)]).min().unwrap();
            let counts: Vec<u32> = (0..ps.len()).map(count).collect();
            let prods: Vec<Rat> = (0..ps.len()).map(prod).collect();
            let mins: Vec<Rat> = (0..ps.len()).map(minv).collect();
            let mut rel = ExtensionalRelation::new_empty(ps.len());
            for x in 0..ps.len() {
                for y in 0..ps.len() {
                    // Count branch whenever any coordinate of either profile
                    // is below tau; product branch only when every
                    // coordinate of both profiles is >= tau.
                    let geq = if mins[x].min(mins[y]) < *tau {
                        counts[x] >= counts[y]
                    } else {
                        prods[x] <= prods[y]
                    };
                    rel.set(x, y, geq);
                }
            }
            Ok(rel)
        }
        Rule::Example3 => {
            if space.len() != 3 || n != 3 {
                return Err(incompatible(
                    "example3",
                    space,
                    "fixed to three elements and three agents",
                ));
            }
            Ok(example3_ranks(ps).to_relation())
        }
        Rule::Explicit { levels } => {
            let ranks = resolve_levels(levels, space, ps)?;
            Ok(ranks.to_relation())
        }
        Rule::ExplicitTable { table } => {
            if table.len() != ps.len() || table.iter().any(|row| row.len() != ps.len()) {
                return Err(RelationError::IncompleteTable(format!(
                    "need a {0}x{0} table",
                    ps.len()
                )));
            }
            let mut rel = ExtensionalRelation::new_empty(ps.len());
            for (x, row) in table.iter().enumerate() {
                for (y, &v) in row.iter().enumerate() {
                    rel.set(x, y, v);
                }
            }
            Ok(rel)
        }
    }
}

/// Parses a profile written as an array of element identifiers.
pub fn parse_profile(
    space: &ValidatedSpace,
    ps: &ProfileSpace,
    ids: &[String],
) -> Result<usize, RelationError> {
    if ids.len() != ps.agents() {
        return Err(RelationError::UnknownProfile(format!(
            "[{}] has {} coordinates, expected {}",
            ids.join(","),
            ids.len(),
            ps.agents()
        )));
    }
    let mut coords = Vec::with_capacity(ids.len());
    for id in ids {
        coords.push(
            space
                .index_of(id)
                .ok_or_else(|| RelationError::UnknownProfile(format!("unknown element `{id}`")))?,
        );
    }
    Ok(ps.encode(&coords))
}

/// Renders a profile as element identifiers.
pub fn profile_ids(space: &ValidatedSpace, ps: &ProfileSpace, idx: usize) -> Vec<String> {
    ps.decode(idx)
        .into_iter()
        .map(|c| space.id(c).to_string())
        .collect()
}

/// Resolves a best-to-worst level chain over profiles, closing each level
/// under coordinate permutations, into a rank function.
fn resolve_levels(
    levels: &[Vec<Vec<String>>],
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<RankFunction, RelationError> {
    let orbits = ps.orbits();
    let nlevels = levels.len() as u32;
    let mut ranks: Vec<Option<u32>> = vec![None; ps.len()];
    for (pos, level) in levels.iter().enumerate() {
        let rank = nlevels - 1 - pos as u32;
        for ids in level {
            let idx = parse_profile(space, ps, ids)?;
            let orbit = orbits.orbit_of(idx);
            for &member in orbits.members(orbit) {
                match ranks[member as usize] {
                    Some(r) if r != rank => {
                        return Err(RelationError::AmbiguousProfile(format!(
                            "[{}]",
                            profile_ids(space, ps, member as usize).join(",")
                        )));
                    }
                    _ => ranks[member as usize] = Some(rank),
                }
            }
        }
    }
    let mut out = Vec::with_capacity(ps.len());
    for (idx, r) in ranks.into_iter().enumerate() {
        match r {
            Some(r) => out.push(r),
            None => {
                return Err(RelationError::IncompleteTable(format!(
                    "profile [{}] not assigned a level",
                    profile_ids(space, ps, idx).join(",")
                )));
            }
        }
    }
    Ok(RankFunction(out))
}

/// On-disk relation file: either a best-to-worst level chain over profiles
/// (closed under symmetry) or a full boolean table in canonical profile
/// index order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitRelationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<bool>>>,
}

/// Loads an explicit relation from its JSON text.
pub fn load_explicit_relation(
    json: &str,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<ExtensionalRelation, RelationError> {
    let file: ExplicitRelationFile =
        serde_json::from_str(json).map_err(|e| RelationError::Json(e.to_string()))?;
    let rule = match (file.levels, file.table) {
        (Some(levels), None) => Rule::Explicit { levels },
        (None, Some(table)) => Rule::ExplicitTable { table },
        _ => {
            return Err(RelationError::Json(
                "expected exactly one of `levels` or `table`".to_string(),
            ));
        }
    };
    materialize(&rule, space, ps)
}

/// The JSON form of a rule, with element references still symbolic.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleSpec {
    Sufficientarian {
        #[serde(rename = "S")]
        s: Vec<String>,
    },
    WeightedSufficientarian {
        #[serde(rename = "S")]
        s: Vec<String>,
        lambda: Vec<Rat>,
    },
    Dictatorship {
        dictator: usize,
        /// Levels of the dictator's order on A, best first.
        levels: Vec<Vec<String>>,
    },
    Threshold {
        beta: String,
    },
    GeneralizedThreshold {
        filter: Vec<String>,
    },
    EndogenousLeximin {
        /// Levels of the >=* order on A, best first.
        levels: Vec<Vec<String>>,
    },
    Utilitarian {
        u: UtilitySpec,
    },
    Min,
    PermEquiv,
    Example1 {
        alpha: Vec<Rat>,
    },
    Example2 {
        tau: Rat,
    },
    Example3,
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<Vec<Vec<Vec<String>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<bool>>>,
    },
}

/// Utility assignment: an explicit map, or `"values"` to reuse the space's
/// numeric values.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum UtilitySpec {
    Keyword(String),
    Map(BTreeMap<String, Rat>),
}

impl RuleSpec {
    pub fn from_json(s: &str) -> Result<RuleSpec, RelationError> {
        serde_json::from_str(s).map_err(|e| RelationError::Json(e.to_string()))
    }

    /// Resolves symbolic element references against a space. Pure: explicit
    /// file references must have been inlined by the caller.
    pub fn resolve(&self, space: &ValidatedSpace, agents: usize) -> Result<Rule, RelationError> {
        let rank_levels = |levels: &Vec<Vec<String>>| -> Result<Vec<u32>, RelationError> {
            let nlevels = levels.len() as u32;
            let mut ranks: Vec<Option<u32>> = vec![None; space.len()];
            for (pos, level) in levels.iter().enumerate() {
                for id in level {
                    let i = space.resolve(id)?;
                    if ranks[i].is_some() {
                        return Err(RelationError::LevelsNotAPartition);
                    }
                    ranks[i] = Some(nlevels - 1 - pos as u32);
                }
            }
            ranks
                .into_iter()
                .collect::<Option<Vec<u32>>>()
                .ok_or(RelationError::LevelsNotAPartition)
        };
        match self {
            RuleSpec::Sufficientarian { s } => Ok(Rule::Sufficientarian {
                s: space.set_from_ids(s)?,
            }),
            RuleSpec::WeightedSufficientarian { s, lambda } => Ok(Rule::WeightedSufficientarian {
                s: space.set_from_ids(s)?,
                lambda: lambda.clone(),
            }),
            RuleSpec::Dictatorship { dictator, levels } => Ok(Rule::Dictatorship {
                ranks: rank_levels(levels)?,
                dictator: *dictator,
            }),
            RuleSpec::Threshold { beta } => Ok(Rule::ThresholdSufficientarian {
                beta: space.resolve(beta)?,
            }),
            RuleSpec::GeneralizedThreshold { filter } => {
                Ok(Rule::GeneralizedThresholdSufficientarian {
                    filter: space.set_from_ids(filter)?,
                })
            }
            RuleSpec::EndogenousLeximin { levels } => Ok(Rule::EndogenousLeximin {
                ranks: rank_levels(levels)?,
            }),
            RuleSpec::Utilitarian { u } => {
                let u = match u {
                    UtilitySpec::Keyword(k) if k == "values" => space
                        .values()
                        .map(|v| v.to_vec())
                        .ok_or_else(|| incompatible("utilitarian", space, "space has no values"))?,
                    UtilitySpec::Keyword(k) => {
                        return Err(RelationError::Json(format!(
                            "unknown utility keyword `{k}`, expected \"values\" or a map"
                        )));
                    }
                    UtilitySpec::Map(map) => {
                        let mut vals = Vec::with_capacity(space.len());
                        for id in space.ids() {
                            vals.push(*map.get(id).ok_or_else(|| {
                                RelationError::Space(SpaceError::MissingValue(id.clone()))
                            })?);
                        }
                        for id in map.keys() {
                            space.resolve(id)?;
                        }
                        vals
                    }
                };
                Ok(Rule::Utilitarian { u })
            }
            RuleSpec::Min => Ok(Rule::MinRule),
            RuleSpec::PermEquiv => Ok(Rule::PermEquiv),
            RuleSpec::Example1 { alpha } => {
                let _ = agents;
                Ok(Rule::Example1 {
                    alpha: alpha.clone(),
                })
            }
            RuleSpec::Example2 { tau } => Ok(Rule::Example2 { tau: *tau }),
            RuleSpec::Example3 => Ok(Rule::Example3),
            RuleSpec::Explicit {
                file,
                levels,
                table,
            } => {
                if let Some(path) = file {
                    return Err(RelationError::UnresolvedFile(path.clone()));
                }
                match (levels, table) {
                    (Some(levels), None) => Ok(Rule::Explicit {
                        levels: levels.clone(),
                    }),
                    (None, Some(table)) => Ok(Rule::ExplicitTable {
                        table: table.clone(),
                    }),
                    _ => Err(RelationError::Json(
                        "explicit rule needs exactly one of `file`, `levels`, `table`".to_string(),
                    )),
                }
            }
        }
    }
}
