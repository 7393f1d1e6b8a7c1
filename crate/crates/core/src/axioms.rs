//! One checker per axiom, each returning pass (with the exact instantiation
//! count) or the first violation in canonical scan order.
//!
//! Canonical scan order means nested ascending loops in the order the
//! quantifiers are documented on each checker: profile indices, then agents,
//! then elements, with coalition bitmasks ascending where applicable. The
//! first violation encountered under that order is the reported witness, so
//! reports are reproducible byte for byte.
//!
//! Every failing verdict carries a witness that can be replayed against the
//! relation with [`replay`] using only table lookups.

use serde::Serialize;
use serde_json::{Value, json};
use thiserror::Error;

use crate::alloc::{ProfileSpace, permutations};
use crate::rational::Rat;
use crate::relations::{ExtensionalRelation, profile_ids};
use crate::space::ValidatedSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("axiom `{axiom}` requires {requirement}; space `{space}` does not provide it")]
    Unsupported {
        axiom: Axiom,
        requirement: &'static str,
        space: String,
    },
}

/// Every axiom this toolkit can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    WeakOrder,
    Symmetry,
    Separability,
    SufficientarianJudgment,
    DualSufficientarianJudgment,
    WeakSufficientarianJudgment,
    NonDegeneracy,
    Monotonicity,
    GeqComplements,
    AbsoluteIndividualImprovement,
    PrioritarianThreshold,
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::WeakOrder => "weak_order",
            Axiom::Symmetry => "symmetry",
            Axiom::Separability => "separability",
            Axiom::SufficientarianJudgment => "sufficientarian_judgment",
            Axiom::DualSufficientarianJudgment => "dual_sufficientarian_judgment",
            Axiom::WeakSufficientarianJudgment => "weak_sufficientarian_judgment",
            Axiom::NonDegeneracy => "non_degeneracy",
            Axiom::Monotonicity => "monotonicity",
            Axiom::GeqComplements => "geq_complements",
            Axiom::AbsoluteIndividualImprovement => "absolute_individual_improvement",
            Axiom::PrioritarianThreshold => "prioritarian_threshold",
        }
    }

    /// Accepts the canonical name and a few short aliases.
    pub fn parse(s: &str) -> Option<Axiom> {
        Some(match s {
            "weak_order" | "weak-order" | "wo" => Axiom::WeakOrder,
            "symmetry" | "sym" => Axiom::Symmetry,
            "separability" | "sep" => Axiom::Separability,
            "sufficientarian_judgment" | "sufficientarian-judgment" | "sj" => {
                Axiom::SufficientarianJudgment
            }
            "dual_sufficientarian_judgment" | "dual-sj" | "dual_sj" | "dsj" => {
                Axiom::DualSufficientarianJudgment
            }
            "weak_sufficientarian_judgment" | "weak-sj" | "weak_sj" | "wsj" => {
                Axiom::WeakSufficientarianJudgment
            }
            "non_degeneracy" | "non-degeneracy" | "nondegeneracy" | "nd" => Axiom::NonDegeneracy,
            "monotonicity" | "mono" => Axiom::Monotonicity,
            "geq_complements" | "geq-complements" | "complements" => Axiom::GeqComplements,
            "absolute_individual_improvement" | "aii" => Axiom::AbsoluteIndividualImprovement,
            "prioritarian_threshold" | "pt" => Axiom::PrioritarianThreshold,
            _ => return None,
        })
    }

    pub fn all() -> [Axiom; 11] {
        [
            Axiom::WeakOrder,
            Axiom::Symmetry,
            Axiom::Separability,
            Axiom::SufficientarianJudgment,
            Axiom::DualSufficientarianJudgment,
            Axiom::WeakSufficientarianJudgment,
            Axiom::NonDegeneracy,
            Axiom::Monotonicity,
            Axiom::GeqComplements,
            Axiom::AbsoluteIndividualImprovement,
            Axiom::PrioritarianThreshold,
        ]
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which substitution-style judgment a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JudgmentKind {
    Sufficientarian,
    Dual,
    Weak,
}

/// A concrete violation, stored as profile/agent/element indices so replay
/// needs nothing but the relation table (and the space for dominance and
/// value lookups).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Neither `x >= y` nor `y >= x`.
    Incomplete { x: usize, y: usize },
    /// `x >= y` and `y >= z` but not `x >= z`.
    Intransitive { x: usize, y: usize, z: usize },
    /// `x` is not indifferent to its permutation image.
    Asymmetric {
        x: usize,
        perm: Vec<usize>,
        image: usize,
    },
    /// The comparison of a coalition's bundles flips between two contexts:
    /// `(xy vs xpy)` differs from `(xyp vs xpyp)`.
    Separability {
        coalition: Vec<usize>,
        xy: usize,
        xpy: usize,
        xyp: usize,
        xpyp: usize,
    },
    /// A violated substitution judgment. `base` is the constant-`b` profile,
    /// `lowered` is `a_i b`, `shifted` is `c_j(a_i b)`.
    Judgment {
        kind: JudgmentKind,
        a: usize,
        b: usize,
        c: usize,
        i: usize,
        j: usize,
        base: usize,
        lowered: usize,
        shifted: usize,
    },
    /// `x` dominates `y` pointwise but is not weakly preferred.
    Dominance { x: usize, y: usize },
    /// `a_i c > (a ∧ b)_i c` but not `a_i c > b_i c`.
    Complements {
        a: usize,
        b: usize,
        c: usize,
        i: usize,
        meet: usize,
        with_a: usize,
        with_meet: usize,
        with_b: usize,
    },
    /// `x > y`, `x_i < 1`, yet maxing out agent `i` in `x` fails to cover
    /// `(b_i, y_{-i})`.
    Improvement {
        x: usize,
        y: usize,
        i: usize,
        b: usize,
        maxed: usize,
        alternative: usize,
    },
}

impl Witness {
    /// Renders the witness with profiles as element-identifier arrays.
    pub fn render(&self, space: &ValidatedSpace, ps: &ProfileSpace) -> Value {
        let p = |idx: &usize| Value::from(profile_ids(space, ps, *idx));
        let e = |idx: &usize| Value::from(space.id(*idx));
        match self {
            Witness::Incomplete { x, y } => json!({"kind": "incomplete", "x": p(x), "y": p(y)}),
            Witness::Intransitive { x, y, z } => {
                json!({"kind": "intransitive", "x": p(x), "y": p(y), "z": p(z)})
            }
            Witness::Asymmetric { x, perm, image } => {
                json!({"kind": "asymmetric", "x": p(x), "permutation": perm, "image": p(image)})
            }
            Witness::Separability {
                coalition,
                xy,
                xpy,
                xyp,
                xpyp,
            } => json!({
                "kind": "separability",
                "coalition": coalition,
                "x_with_context": p(xy),
                "x_prime_with_context": p(xpy),
                "x_with_context_prime": p(xyp),
                "x_prime_with_context_prime": p(xpyp),
            }),
            Witness::Judgment {
                kind,
                a,
                b,
                c,
                i,
                j,
                base,
                lowered,
                shifted,
            } => json!({
                "kind": match kind {
                    JudgmentKind::Sufficientarian => "sufficientarian_judgment",
                    JudgmentKind::Dual => "dual_sufficientarian_judgment",
                    JudgmentKind::Weak => "weak_sufficientarian_judgment",
                },
                "a": e(a), "b": e(b), "c": e(c),
                "i": i, "j": j,
                "base": p(base), "lowered": p(lowered), "shifted": p(shifted),
            }),
            Witness::Dominance { x, y } => json!({"kind": "dominance", "x": p(x), "y": p(y)}),
            Witness::Complements {
                a,
                b,
                c,
                i,
                meet,
                with_a,
                with_meet,
                with_b,
            } => json!({
                "kind": "complements",
                "a": e(a), "b": e(b), "c": e(c), "meet": e(meet), "i": i,
                "with_a": p(with_a), "with_meet": p(with_meet), "with_b": p(with_b),
            }),
            Witness::Improvement {
                x,
                y,
                i,
                b,
                maxed,
                alternative,
            } => json!({
                "kind": "improvement",
                "x": p(x), "y": p(y), "i": i, "b": e(b),
                "maxed": p(maxed), "alternative": p(alternative),
            }),
        }
    }
}

/// Re-evaluates a witness against the relation; true means the violation is
/// reproduced.
pub fn replay(
    w: &Witness,
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> bool {
    match w {
        Witness::Incomplete { x, y } => !rel.geq(*x, *y) && !rel.geq(*y, *x),
        Witness::Intransitive { x, y, z } => rel.geq(*x, *y) && rel.geq(*y, *z) && !rel.geq(*x, *z),
        Witness::Asymmetric { x, perm, image } => {
            ps.permute(*x, perm) == *image && !rel.indiff(*x, *image)
        }
        Witness::Separability {
            xy, xpy, xyp, xpyp, ..
        } => {
            (rel.geq(*xy, *xpy), rel.geq(*xpy, *xy)) != (rel.geq(*xyp, *xpyp), rel.geq(*xpyp, *xyp))
        }
        Witness::Judgment {
            kind,
            base,
            lowered,
            shifted,
            ..
        } => match kind {
            JudgmentKind::Sufficientarian => {
                rel.strict(*base, *lowered) && !rel.geq(*lowered, *shifted)
            }
            JudgmentKind::Dual => rel.strict(*lowered, *base) && !rel.geq(*shifted, *lowered),
            JudgmentKind::Weak => rel.strict(*base, *lowered) && !rel.strict(*base, *shifted),
        },
        Witness::Dominance { x, y } => {
            let n = ps.agents();
            (0..n).all(|i| space.leq(ps.coord(*y, i), ps.coord(*x, i))) && !rel.geq(*x, *y)
        }
        Witness::Complements {
            with_a,
            with_meet,
            with_b,
            ..
        } => rel.strict(*with_a, *with_meet) && !rel.strict(*with_a, *with_b),
        Witness::Improvement {
            x,
            y,
            i,
            maxed,
            alternative,
            ..
        } => {
            let top_ok = space.value(ps.coord(*x, *i)).is_some_and(|v| v < Rat::ONE);
            rel.strict(*x, *y) && top_ok && !rel.geq(*maxed, *alternative)
        }
    }
}

/// Pass/fail for one axiom, with the first canonical witness on failure.
/// `checked` is the size of the quantifier domain (reported in full when the
/// axiom holds; on failure it is the canonical position of the violation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub checked: u64,
}

impl AxiomVerdict {
    fn pass(axiom: Axiom, checked: u64) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            holds: true,
            witness: None,
            checked,
        }
    }

    fn fail(axiom: Axiom, witness: Witness, checked: u64) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            holds: false,
            witness: Some(witness),
            checked,
        }
    }

    /// The external JSON form:
    /// `{"axiom": str, "holds": bool, "witness": {...}|null, "checked": int}`.
    pub fn render(&self, space: &ValidatedSpace, ps: &ProfileSpace) -> Value {
        json!({
            "axiom": self.axiom.as_str(),
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| w.render(space, ps)),
            "checked": self.checked,
        })
    }
}

/// Completeness (`x >= y` or `y >= x`, pairs ascending) and transitivity
/// (`x >= y >= z` implies `x >= z`, triples ascending). Completeness is
/// scanned in full before transitivity.
pub fn check_weak_order(rel: &ExtensionalRelation) -> AxiomVerdict {
    let p = rel.size();
    let total = (p as u64).pow(2) + (p as u64).pow(3);
    for x in 0..p {
        for y in 0..p {
            if !rel.geq(x, y) && !rel.geq(y, x) {
                let checked = (x * p + y + 1) as u64;
                return AxiomVerdict::fail(Axiom::WeakOrder, Witness::Incomplete { x, y }, checked);
            }
        }
    }
    let words = p.div_ceil(64);
    for x in 0..p {
        let row_x = rel.row(x);
        for y in 0..p {
            if !rel.geq(x, y) {
                continue;
            }
            let row_y = rel.row(y);
            for w in 0..words {
                let bad = row_y[w] & !row_x[w];
                if bad != 0 {
                    let z = w * 64 + bad.trailing_zeros() as usize;
                    let checked =
                        (p as u64).pow(2) + (x as u64 * (p as u64).pow(2)) + (y * p + z + 1) as u64;
                    return AxiomVerdict::fail(
                        Axiom::WeakOrder,
                        Witness::Intransitive { x, y, z },
                        checked,
                    );
                }
            }
        }
    }
    AxiomVerdict::pass(Axiom::WeakOrder, total)
}

/// Every profile is indifferent to each of its permutation images;
/// profiles ascending, permutations in lexicographic order.
pub fn check_symmetry(rel: &ExtensionalRelation, ps: &ProfileSpace) -> AxiomVerdict {
    let perms = permutations(ps.agents());
    let total = (ps.len() * perms.len()) as u64;
    for x in 0..ps.len() {
        for (k, perm) in perms.iter().enumerate() {
            let image = ps.permute(x, perm);
            if !rel.indiff(x, image) {
                let checked = (x * perms.len() + k + 1) as u64;
                return AxiomVerdict::fail(
                    Axiom::Symmetry,
                    Witness::Asymmetric {
                        x,
                        perm: perm.clone(),
                        image,
                    },
                    checked,
                );
            }
        }
    }
    AxiomVerdict::pass(Axiom::Symmetry, total)
}

/// Enumerates the partial assignments of the coalition agents (ascending,
/// lowest agent fastest) as profile-index contributions; adding a context
/// contribution yields a full profile index.
fn contributions(ps: &ProfileSpace, agents: &[usize]) -> Vec<usize> {
    let m = ps.elements();
    let mut out = Vec::with_capacity(m.pow(agents.len() as u32));
    let mut counters = vec![0usize; agents.len()];
    loop {
        out.push(
            agents
                .iter()
                .zip(&counters)
                .map(|(&agent, &e)| {
                    // elem * m^agent
                    e * (0..agent).fold(1usize, |acc, _| acc * m)
                })
                .sum(),
        );
        let mut k = 0;
        loop {
            if k == counters.len() {
                return out;
            }
            counters[k] += 1;
            if counters[k] < m {
                break;
            }
            counters[k] = 0;
            k += 1;
        }
    }
}

/// For every coalition `M` (bitmask ascending) and every pair of coalition
/// bundles, the comparison must not depend on the outsiders' bundles. Both
/// directions of the relation count; the witness fixes the first context and
/// the first context that disagrees with it.
pub fn check_separability(rel: &ExtensionalRelation, ps: &ProfileSpace) -> AxiomVerdict {
    let n = ps.agents();
    let total = (1u64 << n) * (ps.len() as u64).pow(2);
    for mask in 0u64..1 << n {
        let coalition: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let outsiders: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        // The empty coalition degenerates to uniform reflexivity across
        // contexts (x and x' are both the empty assignment); the full
        // coalition has a single empty context and is vacuous. Both fall
        // out of the general loop below.
        let inner = contributions(ps, &coalition);
        let contexts = contributions(ps, &outsiders);
        for (ix, &cx) in inner.iter().enumerate() {
            for (ixp, &cxp) in inner.iter().enumerate() {
                let base = (
                    rel.geq(cx + contexts[0], cxp + contexts[0]),
                    rel.geq(cxp + contexts[0], cx + contexts[0]),
                );
                for (iy, &cy) in contexts.iter().enumerate().skip(1) {
                    let here = (rel.geq(cx + cy, cxp + cy), rel.geq(cxp + cy, cx + cy));
                    if here != base {
                        // Canonical position of ((cx, cxp), (ctx 0, ctx iy))
                        // among the (M, x, x', y, y') quintuples.
                        let pairs = (contexts.len() as u64).pow(2);
                        let checked = mask * (ps.len() as u64).pow(2)
                            + ((ix * inner.len() + ixp) as u64) * pairs
                            + iy as u64
                            + 1;
                        return AxiomVerdict::fail(
                            Axiom::Separability,
                            Witness::Separability {
                                coalition: coalition.clone(),
                                xy: cx + contexts[0],
                                xpy: cxp + contexts[0],
                                xyp: cx + cy,
                                xpyp: cxp + cy,
                            },
                            checked,
                        );
                    }
                }
            }
        }
    }
    AxiomVerdict::pass(Axiom::Separability, total)
}

fn check_judgment(
    rel: &ExtensionalRelation,
    ps: &ProfileSpace,
    kind: JudgmentKind,
) -> AxiomVerdict {
    let m = ps.elements();
    let n = ps.agents();
    let total = (m as u64).pow(3) * (n as u64) * (n as u64 - 1);
    let axiom = match kind {
        JudgmentKind::Sufficientarian => Axiom::SufficientarianJudgment,
        JudgmentKind::Dual => Axiom::DualSufficientarianJudgment,
        JudgmentKind::Weak => Axiom::WeakSufficientarianJudgment,
    };
    let mut counter: u64 = 0;
    for a in 0..m {
        for b in 0..m {
            let base = ps.constant(b);
            for c in 0..m {
                for i in 0..n {
                    let lowered = ps.substitute(base, i, a);
                    for j in 0..n {
                        if j == i {
                            continue;
                        }
                        counter += 1;
                        let shifted = ps.substitute(lowered, j, c);
                        let violated = match kind {
                            JudgmentKind::Sufficientarian => {
                                rel.strict(base, lowered) && !rel.geq(lowered, shifted)
                            }
                            JudgmentKind::Dual => {
                                rel.strict(lowered, base) && !rel.geq(shifted, lowered)
                            }
                            JudgmentKind::Weak => {
                                rel.strict(base, lowered) && !rel.strict(base, shifted)
                            }
                        };
                        if violated {
                            return AxiomVerdict::fail(
                                axiom,
                                Witness::Judgment {
                                    kind,
                                    a,
                                    b,
                                    c,
                                    i,
                                    j,
                                    base,
                                    lowered,
                                    shifted,
                                },
                                counter,
                            );
                        }
                    }
                }
            }
        }
    }
    AxiomVerdict::pass(axiom, total)
}

/// `b > a_i b` implies `a_i b >= c_j(a_i b)`: once lowering agent `i` from a
/// common bundle strictly hurts society, no change to another agent's bundle
/// weakly improves it. Scans `(a, b, c, i, j)` ascending.
pub fn check_sufficientarian_judgment(
    rel: &ExtensionalRelation,
    ps: &ProfileSpace,
) -> AxiomVerdict {
    check_judgment(rel, ps, JudgmentKind::Sufficientarian)
}

/// `a_i b > b` implies `c_j(a_i b) >= a_i b`: a strict gain from one agent's
/// change cannot be undone by changing another agent's bundle.
pub fn check_dual_sj(rel: &ExtensionalRelation, ps: &ProfileSpace) -> AxiomVerdict {
    check_judgment(rel, ps, JudgmentKind::Dual)
}

/// `b > a_i b` implies `b > c_j(a_i b)`: the drop can be compensated only
/// partially, never back to (or past) the starting level.
pub fn check_weak_sj(rel: &ExtensionalRelation, ps: &ProfileSpace) -> AxiomVerdict {
    check_judgment(rel, ps, JudgmentKind::Weak)
}

/// Pointwise dominance in the ground-set order implies weak social
/// preference. Pairs ascending.
pub fn check_monotonicity(
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<AxiomVerdict, AxiomError> {
    if !space.has_order() {
        return Err(AxiomError::Unsupported {
            axiom: Axiom::Monotonicity,
            requirement: "an ordered space",
            space: space.name().to_string(),
        });
    }
    let p = ps.len();
    let n = ps.agents();
    let total = (p as u64).pow(2);
    for x in 0..p {
        for y in 0..p {
            let dominates = (0..n).all(|i| space.leq(ps.coord(y, i), ps.coord(x, i)));
            if dominates && !rel.geq(x, y) {
                return Ok(AxiomVerdict::fail(
                    Axiom::Monotonicity,
                    Witness::Dominance { x, y },
                    (x * p + y + 1) as u64,
                ));
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Monotonicity, total))
}

/// `a_i c > (a ∧ b)_i c` implies `a_i c > b_i c`: goods cannot substitute
/// for one another once dropping to the meet strictly hurts. Scans
/// `(a, b, c, i)` ascending over a constant-`c` background.
pub fn check_geq_complements(
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<AxiomVerdict, AxiomError> {
    let meets = space.meet_table().ok_or(AxiomError::Unsupported {
        axiom: Axiom::GeqComplements,
        requirement: "a meet-semilattice",
        space: space.name().to_string(),
    })?;
    let m = ps.elements();
    let n = ps.agents();
    let total = (m as u64).pow(3) * n as u64;
    let mut counter = 0u64;
    for a in 0..m {
        for b in 0..m {
            let meet = meets.meet(a, b);
            for c in 0..m {
                let base = ps.constant(c);
                for i in 0..n {
                    counter += 1;
                    let with_a = ps.substitute(base, i, a);
                    let with_meet = ps.substitute(base, i, meet);
                    if rel.strict(with_a, with_meet) {
                        let with_b = ps.substitute(base, i, b);
                        if !rel.strict(with_a, with_b) {
                            return Ok(AxiomVerdict::fail(
                                Axiom::GeqComplements,
                                Witness::Complements {
                                    a,
                                    b,
                                    c,
                                    i,
                                    meet,
                                    with_a,
                                    with_meet,
                                    with_b,
                                },
                                counter,
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::GeqComplements, total))
}

/// Some strict comparison exists. Fails on total indifference; an existence
/// failure has no finite witness tuple, so the witness is empty and
/// `checked` covers the whole pair domain.
pub fn check_nondegeneracy(rel: &ExtensionalRelation) -> AxiomVerdict {
    let p = rel.size();
    let total = (p as u64).pow(2);
    for x in 0..p {
        for y in 0..p {
            if rel.strict(x, y) {
                return AxiomVerdict::pass(Axiom::NonDegeneracy, total);
            }
        }
    }
    AxiomVerdict {
        axiom: Axiom::NonDegeneracy,
        holds: false,
        witness: None,
        checked: total,
    }
}

fn require_unit_chain(axiom: Axiom, space: &ValidatedSpace) -> Result<(&[Rat], usize), AxiomError> {
    let unsupported = |requirement| AxiomError::Unsupported {
        axiom,
        requirement,
        space: space.name().to_string(),
    };
    let vals = space
        .numeric_chain()
        .ok_or(unsupported("a numeric chain"))?;
    let top = (0..vals.len())
        .max_by_key(|&i| vals[i])
        .expect("nonempty space");
    if vals[top] != Rat::ONE {
        return Err(unsupported("a chain whose top value is exactly 1"));
    }
    Ok((vals, top))
}

/// `x > y` and `x_i < 1` imply `(1, x_{-i}) >= (b_i, y_{-i})` for every `b`.
/// Scans `(x, y, i, b)` ascending. Requires a numeric chain topping out at 1.
pub fn check_absolute_individual_improvement(
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<AxiomVerdict, AxiomError> {
    let (vals, top) = require_unit_chain(Axiom::AbsoluteIndividualImprovement, space)?;
    let p = ps.len();
    let n = ps.agents();
    let m = ps.elements();
    let total = (p as u64).pow(2) * n as u64 * m as u64;
    let mut counter = 0u64;
    for x in 0..p {
        for y in 0..p {
            let strict = rel.strict(x, y);
            for i in 0..n {
                if !strict || vals[ps.coord(x, i)] >= Rat::ONE {
                    counter += m as u64;
                    continue;
                }
                let maxed = ps.substitute(x, i, top);
                for b in 0..m {
                    counter += 1;
                    let alternative = ps.substitute(y, i, b);
                    if !rel.geq(maxed, alternative) {
                        return Ok(AxiomVerdict::fail(
                            Axiom::AbsoluteIndividualImprovement,
                            Witness::Improvement {
                                x,
                                y,
                                i,
                                b,
                                maxed,
                                alternative,
                            },
                            counter,
                        ));
                    }
                }
            }
        }
    }
    Ok(AxiomVerdict::pass(
        Axiom::AbsoluteIndividualImprovement,
        total,
    ))
}

/// Status of one candidate threshold value for the prioritarian threshold
/// axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaStatus {
    /// Element index of the grid value.
    pub beta: usize,
    pub holds: bool,
    /// First qualifying profile the constant-beta profile fails to beat.
    pub witness: Option<usize>,
}

/// Per-beta detail plus the overall verdict for prioritarian threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrioritarianThresholdOutcome {
    pub verdict: AxiomVerdict,
    /// One entry per grid value strictly between 0 and 1, ascending.
    pub per_beta: Vec<BetaStatus>,
}

impl PrioritarianThresholdOutcome {
    pub fn render(&self, space: &ValidatedSpace, ps: &ProfileSpace) -> Value {
        let betas: Vec<Value> = self
            .per_beta
            .iter()
            .map(|b| {
                json!({
                    "beta": space.id(b.beta),
                    "holds": b.holds,
                    "witness": b.witness.map(|w| profile_ids(space, ps, w)),
                })
            })
            .collect();
        let mut v = self.verdict.render(space, ps);
        v["per_beta"] = Value::from(betas);
        v
    }
}

/// Some grid value `beta` strictly between 0 and 1 satisfies: whenever one
/// agent consumes strictly below `beta` and all remaining agents consume a
/// common bundle, the constant-`beta` profile is strictly better. The
/// detail map records every candidate's status; the axiom holds when any
/// candidate passes.
///
/// On a finite grid the smallest positive value can pass for rules that
/// fail the axiom on the continuum (a coordinate below it must be 0), which
/// is exactly why the per-beta map is exposed.
pub fn check_prioritarian_threshold(
    rel: &ExtensionalRelation,
    space: &ValidatedSpace,
    ps: &ProfileSpace,
) -> Result<PrioritarianThresholdOutcome, AxiomError> {
    let (vals, _) = require_unit_chain(Axiom::PrioritarianThreshold, space)?;
    let m = ps.elements();
    let n = ps.agents();
    let p = ps.len();
    let mut candidates: Vec<usize> = (0..m)
        .filter(|&e| vals[e] > Rat::ZERO && vals[e] < Rat::ONE)
        .collect();
    candidates.sort_by_key(|&e| vals[e]);

    let mut per_beta = Vec::with_capacity(candidates.len());
    for &beta in &candidates {
        let beta_profile = ps.constant(beta);
        let mut witness = None;
        'profiles: for x in 0..p {
            for i in 0..n {
                let below = vals[ps.coord(x, i)] < vals[beta];
                if !below {
                    continue;
                }
                let others_equal = {
                    let rest: Vec<usize> = (0..n).filter(|&k| k != i).collect();
                    rest.windows(2)
                        .all(|w| ps.coord(x, w[0]) == ps.coord(x, w[1]))
                };
                if others_equal && !rel.strict(beta_profile, x) {
                    witness = Some(x);
                    break 'profiles;
                }
            }
        }
        per_beta.push(BetaStatus {
            beta,
            holds: witness.is_none(),
            witness,
        });
    }
    let holds = per_beta.iter().any(|b| b.holds);
    let checked = candidates.len() as u64 * p as u64;
    Ok(PrioritarianThresholdOutcome {
        verdict: AxiomVerdict {
            axiom: Axiom::PrioritarianThreshold,
            holds,
            witness: None,
            checked,
        },
        per_beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alloc::Bounds;
    use crate::rational::Rat;
    use crate::relations::{Rule, materialize, parse_profile};
    use crate::space::{ElementSet, load_builtin};

    fn setup(name: &str, n: usize) -> (ValidatedSpace, ProfileSpace) {
        let space = load_builtin(name).unwrap();
        let ps = ProfileSpace::new(space.len(), n, &Bounds::default()).unwrap();
        (space, ps)
    }

    fn p(space: &ValidatedSpace, ps: &ProfileSpace, ids: &[&str]) -> usize {
        let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        parse_profile(space, ps, &ids).unwrap()
    }

    fn suff(space: &ValidatedSpace, ids: &[&str]) -> Rule {
        let ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        Rule::Sufficientarian {
            s: space.set_from_ids(&ids).unwrap(),
        }
    }

    #[test]
    fn sufficientarian_relations_pass_the_core_axioms() {
        let (space, ps) = setup("C3", 2);
        let rel = materialize(&suff(&space, &["1", "2"]), &space, &ps).unwrap();
        assert!(check_weak_order(&rel).holds);
        assert!(check_symmetry(&rel, &ps).holds);
        assert!(check_separability(&rel, &ps).holds);
        assert!(check_sufficientarian_judgment(&rel, &ps).holds);
        assert!(check_dual_sj(&rel, &ps).holds);
        assert!(check_weak_sj(&rel, &ps).holds);
        assert!(check_nondegeneracy(&rel).holds);
        let full = check_weak_order(&rel);
        assert_eq!(full.checked, 81 + 729);
    }

    #[test]
    fn perm_equiv_fails_completeness_only() {
        let (space, ps) = setup("B2", 2);
        let rel = materialize(&Rule::PermEquiv, &space, &ps).unwrap();
        let wo = check_weak_order(&rel);
        assert!(!wo.holds);
        let w = wo.witness.unwrap();
        assert!(replay(&w, &rel, &space, &ps));
        assert!(matches!(w, Witness::Incomplete { .. }));
        assert!(check_symmetry(&rel, &ps).holds);
        assert!(check_separability(&rel, &ps).holds);
        assert!(check_sufficientarian_judgment(&rel, &ps).holds);
        // No strict pairs at all.
        assert!(!check_nondegeneracy(&rel).holds);
    }

    #[test]
    fn weighted_sufficientarian_fails_symmetry_at_the_expected_pair() {
        let (space, ps) = setup("B2", 2);
        let rule = Rule::WeightedSufficientarian {
            s: space.set_from_ids(&["1".to_string()]).unwrap(),
            lambda: vec![Rat::ONE, Rat::from_int(2)],
        };
        let rel = materialize(&rule, &space, &ps).unwrap();
        let v = check_symmetry(&rel, &ps);
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::Asymmetric { x, image, .. } => {
                assert_eq!(x, p(&space, &ps, &["1", "0"]));
                assert_eq!(image, p(&space, &ps, &["0", "1"]));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(check_weak_order(&rel).holds);
        assert!(check_separability(&rel, &ps).holds);
        assert!(check_sufficientarian_judgment(&rel, &ps).holds);
    }

    #[test]
    fn min_rule_fails_separability_with_replayable_witness() {
        let (space, ps) = setup("U5", 2);
        let rel = materialize(&Rule::MinRule, &space, &ps).unwrap();
        assert!(check_weak_order(&rel).holds);
        assert!(check_symmetry(&rel, &ps).holds);
        assert!(check_sufficientarian_judgment(&rel, &ps).holds);
        let v = check_separability(&rel, &ps);
        assert!(!v.holds);
        assert!(replay(&v.witness.unwrap(), &rel, &space, &ps));

        // The documented witness family: raising 3/4 to 1 in one coordinate
        // is null next to 1/4 but strict next to 1.
        let family = Witness::Separability {
            coalition: vec![0],
            xy: p(&space, &ps, &["3/4", "1/4"]),
            xpy: p(&space, &ps, &["1", "1/4"]),
            xyp: p(&space, &ps, &["3/4", "1"]),
            xpyp: p(&space, &ps, &["1", "1"]),
        };
        assert!(replay(&family, &rel, &space, &ps));
    }

    #[test]
    fn separability_covers_the_empty_coalition() {
        // With M empty, both sides of the comparison are the context
        // itself, so the axiom forces reflexivity to be uniform across
        // profiles. A table reflexive everywhere except one profile
        // violates exactly that clause.
        let (space, ps) = setup("B2", 2);
        let mut rel = crate::relations::RankFunction(vec![0; 4]).to_relation();
        rel.set(2, 2, false);
        let v = check_separability(&rel, &ps);
        assert!(!v.holds);
        match v.witness.as_ref().unwrap() {
            Witness::Separability { coalition, xy, xyp, .. } => {
                assert!(coalition.is_empty());
                assert_ne!(rel.geq(*xy, *xy), rel.geq(*xyp, *xyp));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(replay(v.witness.as_ref().unwrap(), &rel, &space, &ps));
    }

    #[test]
    fn example2_fails_separability_and_sj_with_replayable_witnesses() {
        let (space, ps) = setup("U5", 2);
        let rel = materialize(
            &Rule::Example2 {
                tau: Rat::new(1, 2),
            },
            &space,
            &ps,
        )
        .unwrap();
        let sep = check_separability(&rel, &ps);
        assert!(!sep.holds);
        assert!(replay(sep.witness.as_ref().unwrap(), &rel, &space, &ps));
        // Documented witness family: 3/4 vs 1 in one coordinate ties under
        // the count branch (context 0) and splits under the product branch
        // (context 1/2).
        let family = Witness::Separability {
            coalition: vec![0],
            xy: p(&space, &ps, &["3/4", "0"]),
            xpy: p(&space, &ps, &["1", "0"]),
            xyp: p(&space, &ps, &["3/4", "1/2"]),
            xpyp: p(&space, &ps, &["1", "1/2"]),
        };
        assert!(replay(&family, &rel, &space, &ps));

        // The product branch also breaks sufficientarian judgment: from the
        // constant 3/4 profile, dropping one agent to 1/2 strictly hurts,
        // yet raising the other agent to 1 strictly gains.
        let sj = check_sufficientarian_judgment(&rel, &ps);
        assert!(!sj.holds);
        assert!(replay(sj.witness.as_ref().unwrap(), &rel, &space, &ps));
        let sj_family = Witness::Judgment {
            kind: JudgmentKind::Sufficientarian,
            a: space.index_of("1/2").unwrap(),
            b: space.index_of("3/4").unwrap(),
            c: space.index_of("1").unwrap(),
            i: 0,
            j: 1,
            base: p(&space, &ps, &["3/4", "3/4"]),
            lowered: p(&space, &ps, &["1/2", "3/4"]),
            shifted: p(&space, &ps, &["1/2", "1"]),
        };
        assert!(replay(&sj_family, &rel, &space, &ps));
    }

    #[test]
    fn utilitarian_identity_fails_all_three_judgments() {
        let (space, ps) = setup("C3", 2);
        let rel = materialize(
            &Rule::Utilitarian {
                u: space.values().unwrap().to_vec(),
            },
            &space,
            &ps,
        )
        .unwrap();
        assert!(check_weak_order(&rel).holds);
        assert!(check_symmetry(&rel, &ps).holds);
        assert!(check_separability(&rel, &ps).holds);

        let sj = check_sufficientarian_judgment(&rel, &ps);
        assert!(!sj.holds);
        match sj.witness.as_ref().unwrap() {
            Witness::Judgment { a, b, c, .. } => {
                // First canonical violation: lowering from the common bundle
                // 1 to 0 strictly hurts; topping the other agent up to 2
                // strictly gains.
                assert_eq!((*a, *b, *c), (0, 1, 2));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(replay(sj.witness.as_ref().unwrap(), &rel, &space, &ps));

        let dual = check_dual_sj(&rel, &ps);
        assert!(!dual.holds);
        assert!(replay(dual.witness.as_ref().unwrap(), &rel, &space, &ps));
        let weak = check_weak_sj(&rel, &ps);
        assert!(!weak.holds);
        assert!(replay(weak.witness.as_ref().unwrap(), &rel, &space, &ps));
    }

    #[test]
    fn monotonicity_distinguishes_up_sets() {
        let (space, ps) = setup("G2", 2);
        // S = {(0,0)} is not upward closed.
        let rel = materialize(&suff(&space, &["(0,0)"]), &space, &ps).unwrap();
        let v = check_monotonicity(&rel, &space, &ps).unwrap();
        assert!(!v.holds);
        assert!(replay(&v.witness.unwrap(), &rel, &space, &ps));
        // Any threshold rule is monotone.
        for beta in 0..space.len() {
            let rel = materialize(&Rule::ThresholdSufficientarian { beta }, &space, &ps).unwrap();
            assert!(check_monotonicity(&rel, &space, &ps).unwrap().holds);
        }
    }

    #[test]
    fn complements_fails_on_the_meet_escaping_set() {
        let (space, ps) = setup("G2", 2);
        let rel = materialize(&suff(&space, &["(1,0)", "(0,1)", "(1,1)"]), &space, &ps).unwrap();
        let v = check_geq_complements(&rel, &space, &ps).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(replay(&w, &rel, &space, &ps));
        match &w {
            Witness::Complements { a, b, meet, .. } => {
                assert_eq!(space.id(*a), "(0,1)");
                assert_eq!(space.id(*b), "(1,0)");
                assert_eq!(space.id(*meet), "(0,0)");
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let top = space.index_of("(1,1)").unwrap();
        let thr = materialize(&Rule::ThresholdSufficientarian { beta: top }, &space, &ps).unwrap();
        assert!(check_geq_complements(&thr, &space, &ps).unwrap().holds);

        let indiff = materialize(
            &Rule::Sufficientarian {
                s: ElementSet::empty(space.len()),
            },
            &space,
            &ps,
        )
        .unwrap();
        assert!(check_geq_complements(&indiff, &space, &ps).unwrap().holds);
    }

    #[test]
    fn nondegeneracy_on_the_catalog() {
        let (space, ps) = setup("B2", 2);
        let indiff = materialize(
            &Rule::Sufficientarian {
                s: ElementSet::empty(space.len()),
            },
            &space,
            &ps,
        )
        .unwrap();
        assert!(!check_nondegeneracy(&indiff).holds);
        let suff1 = materialize(&suff(&space, &["1"]), &space, &ps).unwrap();
        assert!(check_nondegeneracy(&suff1).holds);
    }

    // Frozen evaluations for the comonotonic maxmin rule with alpha = (1,2):
    //   U(3/4, 1/4) = min(3/4, 1/2) = 1/2     U(0, 3/4) = min(3/4, 0) = 0
    //   U(1, 1/4)   = min(1, 1/2)   = 1/2     U(1, 3/4) = min(1, 3/2) = 1
    // so (3/4,1/4) > (0,3/4), yet topping agent 0 up to 1 loses against
    // (1, 3/4): absolute individual improvement fails.
    #[test]
    fn example1_fails_absolute_individual_improvement() {
        let (space, ps) = setup("U5", 2);
        let rel = materialize(
            &Rule::Example1 {
                alpha: vec![Rat::ONE, Rat::from_int(2)],
            },
            &space,
            &ps,
        )
        .unwrap();
        let v = check_absolute_individual_improvement(&rel, &space, &ps).unwrap();
        assert!(!v.holds);
        assert!(replay(v.witness.as_ref().unwrap(), &rel, &space, &ps));

        let family = Witness::Improvement {
            x: p(&space, &ps, &["3/4", "1/4"]),
            y: p(&space, &ps, &["0", "3/4"]),
            i: 0,
            b: space.index_of("1").unwrap(),
            maxed: p(&space, &ps, &["1", "1/4"]),
            alternative: p(&space, &ps, &["1", "3/4"]),
        };
        assert!(replay(&family, &rel, &space, &ps));

        // Threshold rules satisfy it.
        let beta = space.index_of("1/2").unwrap();
        let thr = materialize(&Rule::ThresholdSufficientarian { beta }, &space, &ps).unwrap();
        assert!(
            check_absolute_individual_improvement(&thr, &space, &ps)
                .unwrap()
                .holds
        );

        // Total indifference: the antecedent never fires.
        let indiff = materialize(
            &Rule::Sufficientarian {
                s: ElementSet::empty(space.len()),
            },
            &space,
            &ps,
        )
        .unwrap();
        assert!(
            check_absolute_individual_improvement(&indiff, &space, &ps)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn prioritarian_threshold_details() {
        let (space, ps) = setup("U5", 2);
        let beta = space.index_of("1/2").unwrap();
        let thr = materialize(&Rule::ThresholdSufficientarian { beta }, &space, &ps).unwrap();
        let out = check_prioritarian_threshold(&thr, &space, &ps).unwrap();
        assert!(out.verdict.holds);
        let at_half = out.per_beta.iter().find(|b| b.beta == beta).unwrap();
        assert!(at_half.holds);

        // Identity-utility sums fail at every grid value.
        let util = materialize(
            &Rule::Utilitarian {
                u: space.values().unwrap().to_vec(),
            },
            &space,
            &ps,
        )
        .unwrap();
        let out = check_prioritarian_threshold(&util, &space, &ps).unwrap();
        assert!(!out.verdict.holds);
        assert!(out.per_beta.iter().all(|b| !b.holds));
        assert_eq!(out.per_beta.len(), 3); // 1/4, 1/2, 3/4
    }

    #[test]
    fn axiom_parsing_round_trips() {
        for axiom in Axiom::all() {
            assert_eq!(Axiom::parse(axiom.as_str()), Some(axiom));
        }
        assert_eq!(Axiom::parse("sj"), Some(Axiom::SufficientarianJudgment));
        assert_eq!(Axiom::parse("nope"), None);
    }

    #[test]
    fn unsupported_spaces_are_rejected() {
        let (g2, ps) = setup("G2", 2);
        let rel = materialize(&suff(&g2, &["(1,1)"]), &g2, &ps).unwrap();
        assert!(check_absolute_individual_improvement(&rel, &g2, &ps).is_err());
        assert!(check_prioritarian_threshold(&rel, &g2, &ps).is_err());
        // C3 tops out at 2, not 1.
        let (c3, ps3) = setup("C3", 2);
        let rel3 = materialize(&suff(&c3, &["2"]), &c3, &ps3).unwrap();
        assert!(check_absolute_individual_improvement(&rel3, &c3, &ps3).is_err());
    }
}
