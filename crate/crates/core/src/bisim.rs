//! Bisimulation between simplicial models: relation checking, the maximal
//! bisimulation, and distinguishing-formula synthesis.
//!
//! The maximal bisimulation is computed by greatest-fixpoint pair
//! deletion. Each deleted pair remembers the deletion round and cause,
//! and [`distinguish`] replays that record into a formula that is true at
//! one point and not true at the other.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{AgentId, Formula};
use crate::lifetree::{transform, OrderingPolicy};
use crate::model::{Facet, ModelError, SimplicialModel};
use crate::semantics::eval;
use crate::TruthValue;

/// Why a pair was deleted during the fixpoint computation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RemovalCause {
    /// chi or ell differ.
    Atoms,
    /// `unmatched` is a-adjacent to the left facet but has no partner
    /// a-adjacent to the right one.
    Forth { agent: AgentId, unmatched: Facet },
    /// Mirror image of Forth.
    Back { agent: AgentId, unmatched: Facet },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RemovedInfo {
    /// 0 for atom mismatches, the deleting refinement round otherwise.
    pub round: usize,
    pub cause: RemovalCause,
}

/// The result of [`max_bisim`]: the surviving pairs plus a removal record
/// for every deleted pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BisimRelation {
    pairs: BTreeSet<(Facet, Facet)>,
    removed: BTreeMap<(Facet, Facet), RemovedInfo>,
}

impl BisimRelation {
    pub fn pairs(&self) -> &BTreeSet<(Facet, Facet)> {
        &self.pairs
    }

    pub fn removed(&self) -> &BTreeMap<(Facet, Facet), RemovedInfo> {
        &self.removed
    }

    pub fn contains(&self, left: &Facet, right: &Facet) -> bool {
        self.pairs.contains(&(left.clone(), right.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The first violated clause found in a claimed bisimulation, with
/// witnesses. Pairs are scanned in sorted order, clauses in the order
/// Atoms, Forth, Back, agents sorted, star facets sorted, so the report
/// is deterministic.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum BisimViolation {
    #[error("a bisimulation must be nonempty")]
    Empty,
    #[error("{facet} is not a facet of the left model")]
    LeftNotFacet { facet: Facet },
    #[error("{facet} is not a facet of the right model")]
    RightNotFacet { facet: Facet },
    #[error("Atoms fails at ({left}, {right})")]
    Atoms { left: Facet, right: Facet },
    #[error("Forth fails at ({left}, {right}) for agent {agent}: no partner for {unmatched}")]
    Forth {
        left: Facet,
        right: Facet,
        agent: AgentId,
        unmatched: Facet,
    },
    #[error("Back fails at ({left}, {right}) for agent {agent}: no partner for {unmatched}")]
    Back {
        left: Facet,
        right: Facet,
        agent: AgentId,
        unmatched: Facet,
    },
}

fn atoms_match(m: &SimplicialModel, x: &Facet, m2: &SimplicialModel, x2: &Facet) -> bool {
    m.chi(x).unwrap() == m2.chi(x2).unwrap() && m.ell(x).unwrap() == m2.ell(x2).unwrap()
}

/// Checks whether `pairs` is a bisimulation between `m` and `m2`.
pub fn is_bisimulation(
    m: &SimplicialModel,
    m2: &SimplicialModel,
    pairs: &BTreeSet<(Facet, Facet)>,
) -> Result<(), BisimViolation> {
    if pairs.is_empty() {
        return Err(BisimViolation::Empty);
    }
    let agents: BTreeSet<&AgentId> = m.agents().iter().chain(m2.agents()).collect();
    for (x, x2) in pairs {
        if !m.is_facet(x) {
            return Err(BisimViolation::LeftNotFacet { facet: x.clone() });
        }
        if !m2.is_facet(x2) {
            return Err(BisimViolation::RightNotFacet { facet: x2.clone() });
        }
        if !atoms_match(m, x, m2, x2) {
            return Err(BisimViolation::Atoms {
                left: x.clone(),
                right: x2.clone(),
            });
        }
        for a in &agents {
            let star = m.star(a, x).unwrap();
            let star2 = m2.star(a, x2).unwrap();
            for y in &star {
                if !star2
                    .iter()
                    .any(|y2| pairs.contains(&(y.clone(), y2.clone())))
                {
                    return Err(BisimViolation::Forth {
                        left: x.clone(),
                        right: x2.clone(),
                        agent: (*a).clone(),
                        unmatched: y.clone(),
                    });
                }
            }
            for y2 in &star2 {
                if !star
                    .iter()
                    .any(|y| pairs.contains(&(y.clone(), y2.clone())))
                {
                    return Err(BisimViolation::Back {
                        left: x.clone(),
                        right: x2.clone(),
                        agent: (*a).clone(),
                        unmatched: y2.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The largest bisimulation between `m` and `m2`, possibly empty.
pub fn max_bisim(m: &SimplicialModel, m2: &SimplicialModel) -> BisimRelation {
    let mut pairs: BTreeSet<(Facet, Facet)> = BTreeSet::new();
    let mut removed: BTreeMap<(Facet, Facet), RemovedInfo> = BTreeMap::new();
    for x in m.facets() {
        for x2 in m2.facets() {
            let pair = (x.clone(), x2.clone());
            if atoms_match(m, x, m2, x2) {
                pairs.insert(pair);
            } else {
                removed.insert(
                    pair,
                    RemovedInfo {
                        round: 0,
                        cause: RemovalCause::Atoms,
                    },
                );
            }
        }
    }
    let agents: BTreeSet<AgentId> = m.agents().union(m2.agents()).cloned().collect();
    let mut round = 0;
    loop {
        round += 1;
        let prev = pairs.clone();
        let mut deleted = Vec::new();
        'pairs: for (x, x2) in &prev {
            for a in &agents {
                let star = m.star(a, x).unwrap();
                let star2 = m2.star(a, x2).unwrap();
                for y in &star {
                    if !star2.iter().any(|y2| prev.contains(&(y.clone(), y2.clone()))) {
                        deleted.push((
                            (x.clone(), x2.clone()),
                            RemovedInfo {
                                round,
                                cause: RemovalCause::Forth {
                                    agent: a.clone(),
                                    unmatched: y.clone(),
                                },
                            },
                        ));
                        continue 'pairs;
                    }
                }
                for y2 in &star2 {
                    if !star.iter().any(|y| prev.contains(&(y.clone(), y2.clone()))) {
                        deleted.push((
                            (x.clone(), x2.clone()),
                            RemovedInfo {
                                round,
                                cause: RemovalCause::Back {
                                    agent: a.clone(),
                                    unmatched: y2.clone(),
                                },
                            },
                        ));
                        continue 'pairs;
                    }
                }
            }
        }
        if deleted.is_empty() {
            break;
        }
        for (pair, info) in deleted {
            pairs.remove(&pair);
            removed.insert(pair, info);
        }
    }
    BisimRelation { pairs, removed }
}

/// Whether some bisimulation relates the two points.
pub fn bisimilar(
    m: &SimplicialModel,
    x: &Facet,
    m2: &SimplicialModel,
    x2: &Facet,
) -> Result<bool, ModelError> {
    if !m.is_facet(x) {
        return Err(ModelError::PointNotFacet(x.clone()));
    }
    if !m2.is_facet(x2) {
        return Err(ModelError::PointNotFacet(x2.clone()));
    }
    Ok(max_bisim(m, m2).contains(x, x2))
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DistinguishError {
    #[error("the two points are bisimilar, no distinguishing formula exists")]
    Bisimilar,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which of the two points the synthesized formula must be true at; it is
/// not true (false or undefined) at the other one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Synthesizes a formula that is True at `(m, x)` and not True at
/// `(m2, x2)`. Fails iff the two points are bisimilar.
pub fn distinguish(
    m: &SimplicialModel,
    x: &Facet,
    m2: &SimplicialModel,
    x2: &Facet,
) -> Result<Formula, DistinguishError> {
    distinguish_oriented(m, x, m2, x2, Side::Left)
}

/// As [`distinguish`], with the true side selectable.
pub fn distinguish_oriented(
    m: &SimplicialModel,
    x: &Facet,
    m2: &SimplicialModel,
    x2: &Facet,
    side: Side,
) -> Result<Formula, DistinguishError> {
    if !m.is_facet(x) {
        return Err(ModelError::PointNotFacet(x.clone()).into());
    }
    if !m2.is_facet(x2) {
        return Err(ModelError::PointNotFacet(x2.clone()).into());
    }
    let relation = max_bisim(m, m2);
    if relation.contains(x, x2) {
        return Err(DistinguishError::Bisimilar);
    }
    let ctx = Synth {
        m,
        m2,
        removed: &relation.removed,
    };
    Ok(ctx.oriented(x, x2, side))
}

struct Synth<'a> {
    m: &'a SimplicialModel,
    m2: &'a SimplicialModel,
    removed: &'a BTreeMap<(Facet, Facet), RemovedInfo>,
}

impl Synth<'_> {
    /// A formula True at the wanted side and not True at the other, for a
    /// removed pair. Recursion is well-founded: Forth/Back causes at round
    /// r only reference pairs removed strictly before round r.
    fn oriented(&self, x: &Facet, x2: &Facet, want: Side) -> Formula {
        let info = &self.removed[&(x.clone(), x2.clone())];
        match &info.cause {
            RemovalCause::Atoms => self.literal(x, x2, want),
            RemovalCause::Forth { agent, unmatched } => {
                // Natural direction: true on the left. The unmatched facet
                // satisfies something no a-neighbor of x2 does.
                let conjuncts: Vec<Formula> = self
                    .m2
                    .star(agent, x2)
                    .unwrap()
                    .iter()
                    .map(|y2| self.oriented(unmatched, y2, Side::Left))
                    .collect();
                let theta = Formula::diamond(agent.clone(), conjoin(conjuncts));
                self.orient(theta, Side::Left, want, x, x2)
            }
            RemovalCause::Back { agent, unmatched } => {
                let conjuncts: Vec<Formula> = self
                    .m
                    .star(agent, x)
                    .unwrap()
                    .iter()
                    .map(|y| self.oriented(y, unmatched, Side::Right))
                    .collect();
                let theta = Formula::diamond(agent.clone(), conjoin(conjuncts));
                self.orient(theta, Side::Right, want, x, x2)
            }
        }
    }

    /// A literal separating two facets whose chi or ell differ, True at
    /// the wanted side. Literals over live agents are always defined.
    fn literal(&self, x: &Facet, x2: &Facet, want: Side) -> Formula {
        let chi = self.m.chi(x).unwrap();
        let chi2 = self.m2.chi(x2).unwrap();
        if let Some(a) = chi.difference(&chi2).next() {
            // alive(a) is True at x, False at x2.
            return match want {
                Side::Left => Formula::Global(a.clone()),
                Side::Right => Formula::not(Formula::Global(a.clone())),
            };
        }
        if let Some(a) = chi2.difference(&chi).next() {
            return match want {
                Side::Left => Formula::not(Formula::Global(a.clone())),
                Side::Right => Formula::Global(a.clone()),
            };
        }
        // chi agrees, so the differing local atom's agent is alive on both
        // sides and the literal is defined on both.
        let ell = self.m.ell(x).unwrap();
        let ell2 = self.m2.ell(x2).unwrap();
        if let Some(p) = ell.difference(&ell2).next() {
            return match want {
                Side::Left => Formula::Local(p.clone()),
                Side::Right => Formula::not(Formula::Local(p.clone())),
            };
        }
        let p = ell2
            .difference(&ell)
            .next()
            .expect("Atoms removal implies a chi or ell difference");
        match want {
            Side::Left => Formula::not(Formula::Local(p.clone())),
            Side::Right => Formula::Local(p.clone()),
        }
    }

    /// Fits a naturally-oriented formula to the wanted side. When the
    /// sides disagree, negation works only if theta is false (not
    /// undefined) at the wanted point; otherwise the transform supplies a
    /// defined replacement that is false there and true wherever theta is
    /// defined, in particular at the other point.
    fn orient(&self, theta: Formula, natural: Side, want: Side, x: &Facet, x2: &Facet) -> Formula {
        if natural == want {
            return theta;
        }
        let (model, point) = match want {
            Side::Left => (self.m, x),
            Side::Right => (self.m2, x2),
        };
        match eval(model, point, &theta).unwrap() {
            TruthValue::False => Formula::not(theta),
            TruthValue::Undef => Formula::not(
                transform(model, point, &theta, &OrderingPolicy::Canonical)
                    .expect("theta is undefined at the wanted point"),
            ),
            TruthValue::True => unreachable!("theta is not true opposite its natural side"),
        }
    }
}

/// Deduplicates, sorts, and right-nests a nonempty list of conjuncts.
fn conjoin(mut conjuncts: Vec<Formula>) -> Formula {
    conjuncts.sort();
    conjuncts.dedup();
    let last = conjuncts.pop().expect("nonempty conjunction");
    conjuncts
        .into_iter()
        .rev()
        .fold(last, |acc, f| Formula::and(f, acc))
}

#[cfg(test)]
mod tests {
    use crate::corpus;
    use crate::formula::parse;
    use crate::semantics::satisfies;

    use super::*;

    fn pt(m: &SimplicialModel, name: &str) -> Facet {
        m.resolve_point(name).unwrap()
    }

    fn pairs(
        m: &SimplicialModel,
        m2: &SimplicialModel,
        named: &[(&str, &str)],
    ) -> BTreeSet<(Facet, Facet)> {
        named
            .iter()
            .map(|(l, r)| (pt(m, l), pt(m2, r)))
            .collect()
    }

    #[test]
    fn stated_relations_are_bisimulations() {
        let left = corpus::fixture_model("ex.bisim.left");
        let mid = corpus::fixture_model("ex.bisim.mid");
        let right = corpus::fixture_model("ex.bisim.right");
        let r1 = pairs(&left, &mid, &[("X", "Xp"), ("X", "Zp"), ("Y", "Yp")]);
        assert_eq!(is_bisimulation(&left, &mid, &r1), Ok(()));
        let r2 = pairs(&left, &right, &[("X", "Xpp"), ("Y", "Ypp"), ("Y", "Zpp")]);
        assert_eq!(is_bisimulation(&left, &right, &r2), Ok(()));
    }

    #[test]
    fn dropped_pair_breaks_the_relation() {
        // Frozen from the checker's deterministic scan order: without
        // (X, Z'), the first failure is the Back step from Y' toward Z'
        // at the pair (Y, Y'), which sorts before (X, X').
        let left = corpus::fixture_model("ex.bisim.left");
        let mid = corpus::fixture_model("ex.bisim.mid");
        let r = pairs(&left, &mid, &[("X", "Xp"), ("Y", "Yp")]);
        let violation = is_bisimulation(&left, &mid, &r).unwrap_err();
        assert_eq!(
            violation,
            BisimViolation::Back {
                left: pt(&left, "Y"),
                right: pt(&mid, "Yp"),
                agent: AgentId::new("a"),
                unmatched: pt(&mid, "Zp"),
            }
        );
    }

    #[test]
    fn empty_relation_rejected() {
        let left = corpus::fixture_model("ex.bisim.left");
        assert_eq!(
            is_bisimulation(&left, &left, &BTreeSet::new()),
            Err(BisimViolation::Empty)
        );
    }

    #[test]
    fn max_bisim_example_models_total() {
        let left = corpus::fixture_model("ex.bisim.left");
        let mid = corpus::fixture_model("ex.bisim.mid");
        let rel = max_bisim(&left, &mid);
        for (l, r) in [("X", "Xp"), ("X", "Zp"), ("Y", "Yp")] {
            assert!(rel.contains(&pt(&left, l), &pt(&mid, r)));
        }
        // Total in both directions.
        for x in left.facets() {
            assert!(rel.pairs().iter().any(|(l, _)| l == x));
        }
        for x2 in mid.facets() {
            assert!(rel.pairs().iter().any(|(_, r)| r == x2));
        }
        // The fixpoint is itself a bisimulation and contains the stated
        // hand-written one.
        assert_eq!(is_bisimulation(&left, &mid, rel.pairs()), Ok(()));
    }

    #[test]
    fn max_bisim_fig1() {
        let c = corpus::fixture_model("fig1.C");
        let cp = corpus::fixture_model("fig1.Cp");
        let rel = max_bisim(&c, &cp);
        assert!(rel.is_empty());
        let info = &rel.removed()[&(pt(&c, "Y"), pt(&cp, "Yp"))];
        assert_eq!(info.round, 1);
        assert_eq!(
            info.cause,
            RemovalCause::Forth {
                agent: AgentId::new("a"),
                unmatched: pt(&c, "X"),
            }
        );
    }

    #[test]
    fn identity_is_a_bisimulation() {
        for id in corpus::model_fixture_ids() {
            let m = corpus::fixture_model(id);
            let rel = max_bisim(&m, &m);
            for x in m.facets() {
                assert!(rel.contains(x, x), "{id}: identity pair missing");
            }
        }
    }

    #[test]
    fn distinguish_fig1() {
        let c = corpus::fixture_model("fig1.C");
        let cp = corpus::fixture_model("fig1.Cp");
        let y = pt(&c, "Y");
        let yp = pt(&cp, "Yp");
        let phi = distinguish(&c, &y, &cp, &yp).unwrap();
        assert_eq!(phi.to_string(), "<a> !alive(c)");
        assert_eq!(eval(&c, &y, &phi).unwrap(), TruthValue::True);
        assert_ne!(eval(&cp, &yp, &phi).unwrap(), TruthValue::True);
        // The oriented variant splits the pair the other way round.
        let psi = distinguish_oriented(&c, &y, &cp, &yp, Side::Right).unwrap();
        assert_ne!(eval(&c, &y, &psi).unwrap(), TruthValue::True);
        assert_eq!(eval(&cp, &yp, &psi).unwrap(), TruthValue::True);
    }

    #[test]
    fn distinguish_rejects_bisimilar_points() {
        let left = corpus::fixture_model("ex.bisim.left");
        let mid = corpus::fixture_model("ex.bisim.mid");
        assert_eq!(
            distinguish(&left, &pt(&left, "X"), &mid, &pt(&mid, "Xp")),
            Err(DistinguishError::Bisimilar)
        );
    }

    #[test]
    fn distinguish_all_non_pairs_of_example_models() {
        let left = corpus::fixture_model("ex.bisim.left");
        let mid = corpus::fixture_model("ex.bisim.mid");
        let rel = max_bisim(&left, &mid);
        for (x, x2) in rel.removed().keys() {
            let phi = distinguish(&left, x, &mid, x2).unwrap();
            assert!(satisfies(&left, x, &phi).unwrap());
            assert!(!satisfies(&mid, x2, &phi).unwrap());
        }
    }

    #[test]
    fn faraway_family_not_bisimilar() {
        let family = corpus::faraway_family(1).unwrap();
        let x = pt(&family.c, "X");
        let xp = pt(&family.cp, "X");
        let xpp = pt(&family.cpp, "X");
        assert!(!bisimilar(&family.c, &x, &family.cp, &xp).unwrap());
        assert!(!bisimilar(&family.c, &x, &family.cpp, &xpp).unwrap());
        for (m2, x2) in [(&family.cp, &xp), (&family.cpp, &xpp)] {
            let phi = distinguish(&family.c, &x, m2, x2).unwrap();
            assert!(satisfies(&family.c, &x, &phi).unwrap());
            assert!(!satisfies(m2, x2, &phi).unwrap());
        }
        // Frozen from the oracle.
        let witness = parse("[b][c][d] p@e").unwrap();
        assert!(satisfies(&family.c, &x, &witness).unwrap());
        assert!(!satisfies(&family.cp, &xp, &witness).unwrap());
    }
}
