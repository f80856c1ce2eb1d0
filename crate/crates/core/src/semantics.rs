//! Three-valued evaluation of formulas on pointed simplicial models.
//!
//! Definability and satisfaction are packed into one [`TruthValue`]:
//! a point defines a formula iff its value is not `Undef`, and satisfies
//! it iff the value is `True`. Undefinedness arises only from atoms and
//! modalities of dead agents and is contagious through negation and
//! conjunction (paraconsistent weak Kleene).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{enumerate_formulas, Formula, Fragment, Vocabulary};
use crate::model::{Facet, ModelError, SimplicialModel};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum TruthValue {
    True,
    False,
    Undef,
}

impl TruthValue {
    pub fn negate(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Undef => TruthValue::Undef,
        }
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        match (self, other) {
            (TruthValue::Undef, _) | (_, TruthValue::Undef) => TruthValue::Undef,
            (TruthValue::True, TruthValue::True) => TruthValue::True,
            _ => TruthValue::False,
        }
    }

    pub fn is_defined(self) -> bool {
        self != TruthValue::Undef
    }

    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "True",
            TruthValue::False => "False",
            TruthValue::Undef => "Undef",
        })
    }
}

/// Evaluates `phi` at the facet `x` of `m`.
pub fn eval(m: &SimplicialModel, x: &Facet, phi: &Formula) -> Result<TruthValue, ModelError> {
    let idx = m
        .facet_index(x)
        .ok_or_else(|| ModelError::PointNotFacet(x.clone()))?;
    let mut ev = Evaluator {
        m,
        memo: HashMap::new(),
    };
    Ok(ev.at(idx, phi))
}

pub fn defines(m: &SimplicialModel, x: &Facet, phi: &Formula) -> Result<bool, ModelError> {
    Ok(eval(m, x, phi)?.is_defined())
}

pub fn satisfies(m: &SimplicialModel, x: &Facet, phi: &Formula) -> Result<bool, ModelError> {
    Ok(eval(m, x, phi)?.is_true())
}

/// All facets of `m` where `phi` evaluates to `True`.
pub fn denotation(m: &SimplicialModel, phi: &Formula) -> BTreeSet<Facet> {
    let mut ev = Evaluator {
        m,
        memo: HashMap::new(),
    };
    (0..m.facets().len())
        .filter(|&i| ev.at(i, phi).is_true())
        .map(|i| m.facets()[i].clone())
        .collect()
}

/// One evaluation query. The memo is keyed by facet index and subformula
/// identity (node address within the borrowed formula), so repeated visits
/// through overlapping stars cost one traversal per (facet, node).
struct Evaluator<'a> {
    m: &'a SimplicialModel,
    memo: HashMap<(usize, *const Formula), TruthValue>,
}

impl Evaluator<'_> {
    fn at(&mut self, facet_idx: usize, phi: &Formula) -> TruthValue {
        let key = (facet_idx, phi as *const Formula);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let facet = &self.m.facets()[facet_idx];
        let value = match phi {
            Formula::Global(a) => {
                if self.m.vertex_of_agent(facet, a).is_some() {
                    TruthValue::True
                } else {
                    TruthValue::False
                }
            }
            Formula::Local(p) => match self.m.vertex_of_agent(facet, &p.agent) {
                None => TruthValue::Undef,
                Some(v) => {
                    if self.m.vertices()[v].atoms.contains(&p.name) {
                        TruthValue::True
                    } else {
                        TruthValue::False
                    }
                }
            },
            Formula::Not(p) => self.at(facet_idx, p).negate(),
            Formula::And(p, q) => {
                let l = self.at(facet_idx, p);
                // PWK: Undef wins regardless of the other conjunct, so the
                // right side must still be visited when l is False.
                l.and(self.at(facet_idx, q))
            }
            Formula::Diamond(a, p) => {
                let facet = facet.clone();
                let star = self.m.star(a, &facet).expect("facet of the model");
                let mut any_defined = false;
                let mut any_true = false;
                for y in &star {
                    let yi = self.m.facet_index(y).expect("star yields facets");
                    let v = self.at(yi, p);
                    any_defined |= v.is_defined();
                    any_true |= v.is_true();
                }
                if !any_defined {
                    TruthValue::Undef
                } else if any_true {
                    TruthValue::True
                } else {
                    TruthValue::False
                }
            }
        };
        self.memo.insert(key, value);
        value
    }
}

/// Outcome of a bounded modal-equivalence search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EquivOutcome {
    /// No formula within the bounds separates the two points.
    Equal,
    /// A formula on which the two points take different truth values.
    Witness(Formula),
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EquivError {
    #[error("equivalence search budget of {budget} formulas exhausted")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Exhaustively compares two pointed models on every formula of the
/// fragment within the modal-depth and size bounds. Sound for
/// inequivalence; `Equal` means only that no witness exists within the
/// bounds. `budget` caps the number of formulas evaluated.
#[allow(clippy::too_many_arguments)]
pub fn modal_equiv_bounded(
    m: &SimplicialModel,
    x: &Facet,
    m2: &SimplicialModel,
    x2: &Facet,
    vocab: &Vocabulary,
    max_modal_depth: usize,
    max_size: usize,
    fragment: Fragment,
    budget: Option<usize>,
) -> Result<EquivOutcome, EquivError> {
    let xi = m
        .facet_index(x)
        .ok_or_else(|| ModelError::PointNotFacet(x.clone()))?;
    let xi2 = m2
        .facet_index(x2)
        .ok_or_else(|| ModelError::PointNotFacet(x2.clone()))?;
    let mut ev = Evaluator {
        m,
        memo: HashMap::new(),
    };
    let mut ev2 = Evaluator {
        m: m2,
        memo: HashMap::new(),
    };
    let mut checked = 0usize;
    for phi in enumerate_formulas(vocab, max_modal_depth, max_size, fragment) {
        if let Some(limit) = budget {
            if checked >= limit {
                return Err(EquivError::BudgetExceeded { budget: limit });
            }
        }
        checked += 1;
        // The memo keys subformulas by address, which is only stable
        // within a single formula: candidates are dropped between
        // iterations and their allocations reused.
        ev.memo.clear();
        ev2.memo.clear();
        if ev.at(xi, &phi) != ev2.at(xi2, &phi) {
            return Ok(EquivOutcome::Witness(phi));
        }
    }
    Ok(EquivOutcome::Equal)
}

#[cfg(test)]
mod tests {
    use crate::corpus;
    use crate::formula::{parse, AgentId, LocalAtom};

    use super::*;

    fn tv(m: &SimplicialModel, point: &str, phi: &str) -> TruthValue {
        let x = m.resolve_point(point).unwrap();
        eval(m, &x, &parse(phi).unwrap()).unwrap()
    }

    #[test]
    fn example_judgments() {
        let c = corpus::fixture_model("fig1.C");
        let cp = corpus::fixture_model("fig1.Cp");
        assert_eq!(tv(&c, "X", "p@c"), TruthValue::Undef);
        assert_eq!(tv(&c, "X", "!p@c"), TruthValue::Undef);
        assert_eq!(tv(&c, "X", "<c> p@a"), TruthValue::Undef);
        assert_eq!(tv(&c, "X", "<a> p@c"), TruthValue::True);
        assert_eq!(tv(&c, "X", "[a] p@c"), TruthValue::True);
        assert_eq!(tv(&c, "Y", "<a> !alive(c)"), TruthValue::True);
        assert_eq!(tv(&cp, "Yp", "<a> !alive(c)"), TruthValue::False);
        assert_eq!(tv(&c, "X", "alive(c)"), TruthValue::False);
        assert_eq!(tv(&c, "Y", "alive(c)"), TruthValue::True);
        assert_eq!(tv(&c, "X", "alive(a)"), TruthValue::True);
    }

    #[test]
    fn denotations_on_fig1() {
        let c = corpus::fixture_model("fig1.C");
        let x = c.resolve_point("X").unwrap();
        let y = c.resolve_point("Y").unwrap();
        assert_eq!(
            denotation(&c, &parse("alive(c)").unwrap()),
            BTreeSet::from([y.clone()])
        );
        assert_eq!(denotation(&c, &parse("p@b").unwrap()), BTreeSet::new());
        assert_eq!(
            denotation(&c, &parse("alive(a)").unwrap()),
            BTreeSet::from([x, y])
        );
    }

    #[test]
    fn pwk_contagion_and_involution() {
        let c = corpus::fixture_model("fig1.C");
        let x = c.resolve_point("X").unwrap();
        let undef = parse("p@c").unwrap();
        let defined = parse("p@a").unwrap();
        assert_eq!(eval(&c, &x, &Formula::not(undef.clone())).unwrap(), TruthValue::Undef);
        assert_eq!(
            eval(&c, &x, &Formula::and(defined.clone(), undef.clone())).unwrap(),
            TruthValue::Undef
        );
        assert_eq!(
            eval(&c, &x, &Formula::and(undef, Formula::not(defined.clone()))).unwrap(),
            TruthValue::Undef
        );
        assert_eq!(
            eval(&c, &x, &Formula::not(Formula::not(defined.clone()))).unwrap(),
            eval(&c, &x, &defined).unwrap()
        );
    }

    #[test]
    fn truth_constants_need_a_live_agent_to_be_true() {
        let c = corpus::fixture_model("fig1.C");
        assert_eq!(tv(&c, "X", "alive(a) | !alive(a)"), TruthValue::True);
        // The c-instantiated constant is still defined (global atoms
        // always are), just built from a dead agent.
        assert_eq!(tv(&c, "X", "alive(c) | !alive(c)"), TruthValue::True);
    }

    #[test]
    fn equiv_bounded_fig1() {
        let c = corpus::fixture_model("fig1.C");
        let cp = corpus::fixture_model("fig1.Cp");
        let y = c.resolve_point("Y").unwrap();
        let yp = cp.resolve_point("Yp").unwrap();
        let vocab = Vocabulary::new(
            [AgentId::new("a"), AgentId::new("b"), AgentId::new("c")],
            [
                LocalAtom::new("p", AgentId::new("a")),
                LocalAtom::new("p", AgentId::new("b")),
                LocalAtom::new("p", AgentId::new("c")),
            ],
        );
        let out = modal_equiv_bounded(&c, &y, &cp, &yp, &vocab, 1, 4, Fragment::Lminus, None)
            .unwrap();
        assert_eq!(out, EquivOutcome::Equal);
        let out = modal_equiv_bounded(&c, &y, &cp, &yp, &vocab, 1, 3, Fragment::Lplus, None)
            .unwrap();
        match out {
            EquivOutcome::Witness(phi) => {
                // First witness in enumeration order; frozen from the
                // oracle trace.
                assert_eq!(phi, parse("<a> !alive(c)").unwrap());
                assert_ne!(eval(&c, &y, &phi).unwrap(), eval(&cp, &yp, &phi).unwrap());
            }
            EquivOutcome::Equal => panic!("expected a witness"),
        }
        let out = modal_equiv_bounded(&c, &y, &c, &y, &vocab, 1, 3, Fragment::Lplus, None)
            .unwrap();
        assert_eq!(out, EquivOutcome::Equal);
        let err = modal_equiv_bounded(&c, &y, &cp, &yp, &vocab, 2, 6, Fragment::Lminus, Some(10))
            .unwrap_err();
        assert_eq!(err, EquivError::BudgetExceeded { budget: 10 });
    }

    #[test]
    fn semantic_invariants_over_corpus() {
        use crate::formula::enumerate_formulas;

        for id in corpus::model_fixture_ids() {
            let m = corpus::fixture_model(id);
            let vocab = Vocabulary::new(
                m.agents().iter().cloned(),
                m.vertices().values().flat_map(|d| {
                    d.atoms
                        .iter()
                        .map(|p| LocalAtom::new(p.clone(), d.agent.clone()))
                }),
            );
            for phi in enumerate_formulas(&vocab, 1, 3, Fragment::Lplus) {
                for x in m.facets() {
                    let v = eval(&m, x, &phi).unwrap();
                    // Truth implies definedness and negation involution.
                    if v == TruthValue::True {
                        assert!(v.is_defined());
                    }
                    assert_eq!(
                        eval(&m, x, &Formula::not(Formula::not(phi.clone()))).unwrap(),
                        v
                    );
                    for a in m.agents() {
                        // Defeasible factivity: a known formula is not false.
                        if eval(&m, x, &Formula::boxed(a.clone(), phi.clone())).unwrap()
                            == TruthValue::True
                        {
                            assert_ne!(v, TruthValue::False, "{id} {x} [{a}] {phi}");
                        }
                        // Diamond is monotone in the star.
                        let diamond =
                            eval(&m, x, &Formula::diamond(a.clone(), phi.clone())).unwrap();
                        if m
                            .star(a, x)
                            .unwrap()
                            .iter()
                            .any(|y| eval(&m, y, &phi).unwrap() == TruthValue::True)
                        {
                            assert_eq!(diamond, TruthValue::True, "{id} {x} <{a}> {phi}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_must_be_a_facet() {
        let c = corpus::fixture_model("fig1.C");
        let not_facet = Facet::from_names(["a1", "c1"]);
        assert!(matches!(
            eval(&c, &not_facet, &parse("alive(a)").unwrap()),
            Err(ModelError::PointNotFacet(_))
        ));
    }
}
