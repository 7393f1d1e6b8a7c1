//! Finite ground sets with optional order structure.
//!
//! A space is a finite set `A` of consumption bundles, optionally endowed
//! with a preorder / partial order / meet-semilattice structure given by
//! generator pairs (the reflexive-transitive closure is computed on load),
//! and optionally with exact rational values attached to the elements.
//!
//! All other modules refer to elements by their dense index `0..m`;
//! identifier strings appear only at the serialization boundary.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order pairs given for an unordered space")]
    OrderOnUnordered,
    #[error("order is not antisymmetric: `{0}` and `{1}` are equivalent but distinct")]
    NotAntisymmetric(String, String),
    #[error("no unique greatest lower bound for `{0}` and `{1}`")]
    NoUniqueMeet(String, String),
    #[error("order disagrees with numeric values between `{0}` and `{1}`")]
    ValueOrderMismatch(String, String),
    #[error("element `{0}` has no value")]
    MissingValue(String),
    #[error("operation requires kind `{required}`, space `{space}` has kind `{actual}`")]
    KindMismatch {
        space: String,
        required: &'static str,
        actual: &'static str,
    },
    #[error("set is not a filter")]
    NotAFilter,
    #[error("empty set has no threshold")]
    EmptySet,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid space json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Unordered,
    Preorder,
    Poset,
    Semilattice,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Unordered => "unordered",
            Kind::Preorder => "preorder",
            Kind::Poset => "poset",
            Kind::Semilattice => "semilattice",
        }
    }
}

/// The on-disk description of a space, before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub name: String,
    pub kind: Kind,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, Rat>>,
}

impl SpaceSpec {
    pub fn from_json(s: &str) -> Result<SpaceSpec, SpaceError> {
        serde_json::from_str(s).map_err(|e| SpaceError::Json(e.to_string()))
    }
}

/// Pairwise meet table of a semilattice; `table[a * m + b]` is the index of
/// the greatest lower bound of `a` and `b`.
#[derive(Debug, Clone)]
pub struct MeetTable {
    m: usize,
    table: Vec<usize>,
}

impl MeetTable {
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.table[a * self.m + b]
    }
}

/// A subset of the ground set, stored as a membership vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    members: Vec<bool>,
}

impl ElementSet {
    pub fn empty(m: usize) -> ElementSet {
        ElementSet {
            members: vec![false; m],
        }
    }

    pub fn from_indices(m: usize, idx: &[usize]) -> ElementSet {
        let mut s = ElementSet::empty(m);
        for &i in idx {
            s.members[i] = true;
        }
        s
    }

    /// Bit `i` of `mask` selects element `i`. Only meaningful for `m <= 64`.
    pub fn from_mask(m: usize, mask: u64) -> ElementSet {
        assert!(m <= 64);
        ElementSet {
            members: (0..m).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn universe_size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.members[i] = true;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

/// Why a set fails to be a filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FilterViolation {
    /// `lo` is in the set, `hi >= lo` is not.
    NotUpwardClosed { lo: String, hi: String },
    /// Both elements are in the set but their meet is not.
    NotMeetClosed { a: String, b: String, meet: String },
}

/// Result of the (trivially true on finite spaces) descending chain check.
#[derive(Debug, Clone, Serialize)]
pub struct DccReport {
    pub holds: bool,
    pub reason: String,
}

/// A loaded, validated space: closed order, kind invariants verified, meet
/// table present whenever all pairwise meets exist.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct ValidatedSpace {
    name: String,
    kind: Kind,
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Row-major `m x m`: `leq[a * m + b]` means `a <= b`.
    leq: Vec<bool>,
    meet: Option<MeetTable>,
    values: Option<Vec<Rat>>,
}

/// Reflexive-transitive closure of a relation given as an adjacency matrix.
pub fn reflexive_transitive_closure(m: usize, rel: &mut [bool]) {
    assert_eq!(rel.len(), m * m);
    for i in 0..m {
        rel[i * m + i] = true;
    }
    // Warshall. Spaces are small; no need for bit rows.
    for k in 0..m {
        for i in 0..m {
            if rel[i * m + k] {
                for j in 0..m {
                    if rel[k * m + j] {
                        rel[i * m + j] = true;
                    }
                }
            }
        }
    }
}

impl ValidatedSpace {
    pub fn load(spec: &SpaceSpec) -> Result<ValidatedSpace, SpaceError> {
        let m = spec.elements.len();
        if m == 0 {
            return Err(SpaceError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, id) in spec.elements.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(SpaceError::DuplicateElement(id.clone()));
            }
        }
        if spec.kind == Kind::Unordered && !spec.order.is_empty() {
            return Err(SpaceError::OrderOnUnordered);
        }

        let mut leq = vec![false; m * m];
        for (lo, hi) in &spec.order {
            let a = *index
                .get(lo)
                .ok_or_else(|| SpaceError::UnknownElement(lo.clone()))?;
            let b = *index
                .get(hi)
                .ok_or_else(|| SpaceError::UnknownElement(hi.clone()))?;
            leq[a * m + b] = true;
        }
        reflexive_transitive_closure(m, &mut leq);

        if matches!(spec.kind, Kind::Poset | Kind::Semilattice) {
            for a in 0..m {
                for b in a + 1..m {
                    if leq[a * m + b] && leq[b * m + a] {
                        return Err(SpaceError::NotAntisymmetric(
                            spec.elements[a].clone(),
                            spec.elements[b].clone(),
                        ));
                    }
                }
            }
        }

        let meet = match spec.kind {
            Kind::Semilattice => Some(build_meet_table(m, &leq).map_err(|(a, b)| {
                SpaceError::NoUniqueMeet(spec.elements[a].clone(), spec.elements[b].clone())
            })?),
            // Posets are not required to have meets, but when every pair has
            // one we keep the table so threshold extraction works there too.
            Kind::Poset => build_meet_table(m, &leq).ok(),
            _ => None,
        };

        let values = match &spec.values {
            None => None,
            Some(map) => {
                let mut vals = Vec::with_capacity(m);
                for id in &spec.elements {
                    vals.push(
                        *map.get(id)
                            .ok_or_else(|| SpaceError::MissingValue(id.clone()))?,
                    );
                }
                for id in map.keys() {
                    if !index.contains_key(id) {
                        return Err(SpaceError::UnknownElement(id.clone()));
                    }
                }
                Some(vals)
            }
        };

        let space = ValidatedSpace {
            name: spec.name.clone(),
            kind: spec.kind,
            ids: spec.elements.clone(),
            index,
            leq,
            meet,
            values,
        };

        // On a chain with values, the order must agree with numeric order.
        if let Some(vals) = &space.values
            && space.is_total_order()
        {
            for a in 0..m {
                for b in 0..m {
                    if space.leq(a, b) != (vals[a] <= vals[b]) {
                        return Err(SpaceError::ValueOrderMismatch(
                            space.ids[a].clone(),
                            space.ids[b].clone(),
                        ));
                    }
                }
            }
        }

        Ok(space)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize, SpaceError> {
        self.index_of(id)
            .ok_or_else(|| SpaceError::UnknownElement(id.to_string()))
    }

    /// `a <= b` in the closed order. Reflexive-only when kind is unordered.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if self.kind == Kind::Unordered {
            a == b
        } else {
            self.leq[a * self.len() + b]
        }
    }

    pub fn has_order(&self) -> bool {
        self.kind != Kind::Unordered
    }

    pub fn is_total_order(&self) -> bool {
        let m = self.len();
        self.has_order() && (0..m).all(|a| (0..m).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    pub fn values(&self) -> Option<&[Rat]> {
        self.values.as_deref()
    }

    pub fn value(&self, i: usize) -> Option<Rat> {
        self.values.as_ref().map(|v| v[i])
    }

    /// A numeric chain: totally ordered with values agreeing with the order.
    pub fn numeric_chain(&self) -> Option<&[Rat]> {
        if self.is_total_order() {
            self.values.as_deref()
        } else {
            None
        }
    }

    pub fn meet_table(&self) -> Option<&MeetTable> {
        self.meet.as_ref()
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet.as_ref().map(|t| t.meet(a, b))
    }

    /// Filter operations need meets; semilattices always have them, posets
    /// keep a table when every pair happens to have one.
    fn require_meets(&self) -> Result<&MeetTable, SpaceError> {
        self.meet.as_ref().ok_or_else(|| SpaceError::KindMismatch {
            space: self.name.clone(),
            required: "semilattice",
            actual: self.kind.as_str(),
        })
    }

    pub fn up_set(&self, beta: usize) -> ElementSet {
        let m = self.len();
        ElementSet {
            members: (0..m).map(|a| self.leq(beta, a)).collect(),
        }
    }

    pub fn is_upward_closed(&self, s: &ElementSet) -> bool {
        self.upward_closure_violation(s).is_none()
    }

    fn upward_closure_violation(&self, s: &ElementSet) -> Option<(usize, usize)> {
        let m = self.len();
        for lo in 0..m {
            if !s.contains(lo) {
                continue;
            }
            for hi in 0..m {
                if self.leq(lo, hi) && !s.contains(hi) {
                    return Some((lo, hi));
                }
            }
        }
        None
    }

    /// Whether `s` is upward closed and meet closed. The empty set is a
    /// filter: both defining clauses hold vacuously.
    pub fn is_filter(&self, s: &ElementSet) -> Result<bool, SpaceError> {
        Ok(self.filter_violation(s)?.is_none())
    }

    /// First filter violation in scan order, or `None` when `s` is a filter.
    pub fn filter_violation(&self, s: &ElementSet) -> Result<Option<FilterViolation>, SpaceError> {
        let meets = self.require_meets()?;
        if let Some((lo, hi)) = self.upward_closure_violation(s) {
            return Ok(Some(FilterViolation::NotUpwardClosed {
                lo: self.ids[lo].clone(),
                hi: self.ids[hi].clone(),
            }));
        }
        let m = self.len();
        for a in 0..m {
            if !s.contains(a) {
                continue;
            }
            for b in 0..m {
                if !s.contains(b) {
                    continue;
                }
                let g = meets.meet(a, b);
                if !s.contains(g) {
                    return Ok(Some(FilterViolation::NotMeetClosed {
                        a: self.ids[a].clone(),
                        b: self.ids[b].clone(),
                        meet: self.ids[g].clone(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// For a nonempty filter `s`, the threshold `beta` with
    /// `up_set(beta) == s`. On a finite semilattice this always exists: the
    /// meet of all of `s` lies in `s` by meet-closure.
    pub fn principal_filter_threshold(&self, s: &ElementSet) -> Result<usize, SpaceError> {
        let meets = self.require_meets()?;
        if !self.is_filter(s)? {
            return Err(SpaceError::NotAFilter);
        }
        let mut iter = s.iter();
        let first = iter.next().ok_or(SpaceError::EmptySet)?;
        let beta = iter.fold(first, |acc, b| meets.meet(acc, b));
        debug_assert!(s.contains(beta));
        debug_assert_eq!(&self.up_set(beta), s);
        Ok(beta)
    }

    /// Finite spaces always satisfy the descending chain condition, which is
    /// why every filter found here is principal.
    ///
    /// The converse is what the check stands in for: on a semilattice with
    /// an infinite strictly descending sequence, the union of the up-sets of
    /// its members is a filter with no least element, hence not principal.
    /// No finite space can exhibit that, so the report is always positive
    /// and exists purely so downstream reports can say why.
    pub fn check_dcc_finite(&self) -> DccReport {
        DccReport {
            holds: true,
            reason: format!(
                "space `{}` is finite ({} elements); every weakly decreasing sequence is eventually constant",
                self.name,
                self.len()
            ),
        }
    }

    /// Renders an element set as sorted identifiers.
    pub fn set_ids(&self, s: &ElementSet) -> Vec<String> {
        s.iter().map(|i| self.ids[i].clone()).collect()
    }

    pub fn set_from_ids(&self, ids: &[String]) -> Result<ElementSet, SpaceError> {
        let mut s = ElementSet::empty(self.len());
        for id in ids {
            s.insert(self.resolve(id)?);
        }
        Ok(s)
    }
}

impl fmt::Display for ValidatedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, {} elements)",
            self.name,
            self.kind.as_str(),
            self.len()
        )
    }
}

/// Builds the meet table, or reports the first pair without a unique
/// greatest lower bound.
fn build_meet_table(m: usize, leq: &[bool]) -> Result<MeetTable, (usize, usize)> {
    let le = |a: usize, b: usize| leq[a * m + b];
    let mut table = vec![0usize; m * m];
    for a in 0..m {
        for b in 0..m {
            // Maximal lower bounds of {a, b}; in a finite poset the meet
            // exists iff there is exactly one.
            let lower: Vec<usize> = (0..m).filter(|&c| le(c, a) && le(c, b)).collect();
            let mut maximal = lower
                .iter()
                .copied()
                .filter(|&c| !lower.iter().any(|&d| d != c && le(c, d)));
            let first = maximal.next().ok_or((a, b))?;
            if maximal.next().is_some() {
                return Err((a, b));
            }
            table[a * m + b] = first;
        }
    }
    Ok(MeetTable { m, table })
}

/// Built-in fixtures constructible without files.
pub fn builtin(name: &str) -> Result<SpaceSpec, SpaceError> {
    let chain = |name: &str, labels: &[&str], vals: Option<Vec<(&str, Rat)>>| SpaceSpec {
        name: name.to_string(),
        kind: Kind::Semilattice,
        elements: labels.iter().map(|s| s.to_string()).collect(),
        order: labels
            .windows(2)
            .map(|w| (w[0].to_string(), w[1].to_string()))
            .collect(),
        values: vals.map(|v| {
            v.into_iter()
                .map(|(k, r)| (k.to_string(), r))
                .collect::<BTreeMap<_, _>>()
        }),
    };
    let grid = |name: &str, k: usize| {
        let mut elements = Vec::new();
        let mut order = Vec::new();
        for i in 0..k {
            for j in 0..k {
                elements.push(format!("({i},{j})"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i + 1 < k {
                    order.push((format!("({i},{j})"), format!("({},{j})", i + 1)));
                }
                if j + 1 < k {
                    order.push((format!("({i},{j})"), format!("({i},{})", j + 1)));
                }
            }
        }
        SpaceSpec {
            name: name.to_string(),
            kind: Kind::Semilattice,
            elements,
            order,
            values: None,
        }
    };

    match name {
        "B2" => Ok(chain(
            "B2",
            &["0", "1"],
            Some(vec![("0", Rat::ZERO), ("1", Rat::ONE)]),
        )),
        "C3" => Ok(chain(
            "C3",
            &["0", "1", "2"],
            Some(vec![
                ("0", Rat::ZERO),
                ("1", Rat::ONE),
                ("2", Rat::from_int(2)),
            ]),
        )),
        "G2" => Ok(grid("G2", 2)),
        "G3" => Ok(grid("G3", 3)),
        "D12" => {
            let divs: [usize; 6] = [1, 2, 3, 4, 6, 12];
            let elements: Vec<String> = divs.iter().map(|d| d.to_string()).collect();
            let mut order = Vec::new();
            for &a in &divs {
                for &b in &divs {
                    if a != b && b % a == 0 {
                        order.push((a.to_string(), b.to_string()));
                    }
                }
            }
            Ok(SpaceSpec {
                name: "D12".to_string(),
                kind: Kind::Semilattice,
                elements,
                order,
                values: None,
            })
        }
        "U5" => {
            let pts = [(0, 4), (1, 4), (2, 4), (3, 4), (4, 4)];
            Ok(unit_chain("U5", &pts))
        }
        "U9" => {
            let pts: Vec<(i64, i64)> = (0..=8).map(|k| (k, 8)).collect();
            Ok(unit_chain("U9", &pts))
        }
        other => Err(SpaceError::UnknownFixture(other.to_string())),
    }
}

fn unit_chain(name: &str, pts: &[(i64, i64)]) -> SpaceSpec {
    let rats: Vec<Rat> = pts.iter().map(|&(n, d)| Rat::new(n, d)).collect();
    let labels: Vec<String> = rats.iter().map(|r| r.to_string()).collect();
    SpaceSpec {
        name: name.to_string(),
        kind: Kind::Semilattice,
        elements: labels.clone(),
        order: labels
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect(),
        values: Some(labels.into_iter().zip(rats).collect()),
    }
}

/// Loads a built-in fixture straight to a validated space.
pub fn load_builtin(name: &str) -> Result<ValidatedSpace, SpaceError> {
    ValidatedSpace::load(&builtin(name)?)
}
