//! Life trees, tree embedding into pointed models, and the localized
//! undefined-to-true transformation.
//!
//! The life tree of a formula records which agents must be alive, and
//! through which modal steps, for the formula to be defined. Embedding a
//! life tree into a pointed model is equivalent to definability there, and
//! the failure analysis of an embedding drives [`transform`]: a formula
//! that is false at the given point but true at every point defining the
//! input formula.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{AgentId, Formula};
use crate::model::{Facet, ModelError, SimplicialModel};
use crate::semantics::{defines, eval, TruthValue};

/// A rooted tree with agent-set node labels and agent edge labels, where
/// each edge label belongs to both endpoint labels. Node 0 is the root;
/// children are kept in construction order. Every non-root node of a
/// formula-derived tree carries the subformula whose (grafted) life tree
/// is the subtree rooted there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LifeTree {
    labels: Vec<BTreeSet<AgentId>>,
    /// parent index and edge label; None exactly at the root.
    parents: Vec<Option<(usize, AgentId)>>,
    children: Vec<Vec<usize>>,
    tags: Vec<Option<Formula>>,
}

impl LifeTree {
    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, node: usize) -> &BTreeSet<AgentId> {
        &self.labels[node]
    }

    /// The parent and incoming edge label; None at the root.
    pub fn parent(&self, node: usize) -> Option<(usize, &AgentId)> {
        self.parents[node].as_ref().map(|(p, a)| (*p, a))
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// The subformula that generated this subtree; None at the root.
    pub fn tag(&self, node: usize) -> Option<&Formula> {
        self.tags[node].as_ref()
    }

    /// Order-insensitive comparison form: node label plus the sorted list
    /// of (edge label, child shape) pairs.
    pub fn shape(&self) -> TreeShape {
        self.shape_of(Self::ROOT)
    }

    fn shape_of(&self, node: usize) -> TreeShape {
        let mut children: Vec<(AgentId, TreeShape)> = self.children[node]
            .iter()
            .map(|&c| {
                let (_, a) = self.parents[c].clone().unwrap();
                (a, self.shape_of(c))
            })
            .collect();
        children.sort();
        TreeShape {
            label: self.labels[node].clone(),
            children,
        }
    }

    fn assert_coherent(&self) {
        for node in 1..self.len() {
            let (p, a) = self.parents[node].as_ref().unwrap();
            debug_assert!(
                self.labels[*p].contains(a) && self.labels[node].contains(a),
                "edge label must occur in both endpoint labels"
            );
        }
    }
}

/// Structural comparison value for life trees, with children sorted so
/// sibling order does not matter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TreeShape {
    pub label: BTreeSet<AgentId>,
    pub children: Vec<(AgentId, TreeShape)>,
}

impl TreeShape {
    pub fn new(
        label: impl IntoIterator<Item = AgentId>,
        children: impl IntoIterator<Item = (AgentId, TreeShape)>,
    ) -> Self {
        let mut children: Vec<_> = children.into_iter().collect();
        children.sort();
        TreeShape {
            label: label.into_iter().collect(),
            children,
        }
    }
}

// Recursive intermediate used while following the construction clauses;
// flattened into the indexed form afterwards.
struct RawTree {
    label: BTreeSet<AgentId>,
    children: Vec<(AgentId, Formula, RawTree)>,
}

fn raw_tree(phi: &Formula) -> RawTree {
    match phi {
        Formula::Global(_) => RawTree {
            label: BTreeSet::new(),
            children: Vec::new(),
        },
        Formula::Local(p) => RawTree {
            label: BTreeSet::from([p.agent.clone()]),
            children: Vec::new(),
        },
        Formula::Not(p) => raw_tree(p),
        Formula::And(p, q) => {
            let left = raw_tree(p);
            let mut right = raw_tree(q);
            let mut label = left.label;
            label.append(&mut right.label);
            let mut children = left.children;
            children.extend(right.children);
            RawTree { label, children }
        }
        Formula::Diamond(a, p) => {
            let mut sub = raw_tree(p);
            sub.label.insert(a.clone());
            RawTree {
                label: BTreeSet::from([a.clone()]),
                children: vec![(a.clone(), p.as_ref().clone(), sub)],
            }
        }
    }
}

fn flatten(raw: RawTree) -> LifeTree {
    let mut tree = LifeTree {
        labels: Vec::new(),
        parents: Vec::new(),
        children: Vec::new(),
        tags: Vec::new(),
    };
    fn push(tree: &mut LifeTree, raw: RawTree, parent: Option<(usize, AgentId)>, tag: Option<Formula>) -> usize {
        let id = tree.labels.len();
        tree.labels.push(raw.label);
        tree.parents.push(parent);
        tree.children.push(Vec::new());
        tree.tags.push(tag);
        for (a, psi, sub) in raw.children {
            let child = push(tree, sub, Some((id, a)), Some(psi));
            tree.children[id].push(child);
        }
        id
    }
    push(&mut tree, raw, None, None);
    tree.assert_coherent();
    tree
}

/// The life tree of a formula.
pub fn life_tree(phi: &Formula) -> LifeTree {
    flatten(raw_tree(phi))
}

/// The a-grafting: the same tree with `a` added to the root label.
pub fn graft(t: &LifeTree, a: &AgentId) -> LifeTree {
    let mut out = t.clone();
    out.labels[LifeTree::ROOT].insert(a.clone());
    out.assert_coherent();
    out
}

/// A successful embedding: each tree node mapped to a facet, root first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    assignment: Vec<Facet>,
}

impl Embedding {
    pub fn facet_of(&self, node: usize) -> &Facet {
        &self.assignment[node]
    }

    pub fn assignment(&self) -> &[Facet] {
        &self.assignment
    }
}

/// Why a tree does not embed at a point, per the non-embeddability
/// criterion: either a root-label agent is dead there, or some child
/// subtree fits no adjacent facet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EmbedFailure {
    RootLabel { agent: AgentId },
    Child {
        edge: AgentId,
        /// The subformula tag of the failing child, when the tree came
        /// from a formula.
        subformula: Option<Formula>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EmbedOutcome {
    Embedded(Embedding),
    NotEmbeddable(EmbedFailure),
}

impl EmbedOutcome {
    pub fn is_embedded(&self) -> bool {
        matches!(self, EmbedOutcome::Embedded(_))
    }
}

/// Embeddability search with a memo over (node, facet) pairs, shared
/// across the recursive calls of one query.
struct EmbedSearch<'a> {
    m: &'a SimplicialModel,
    t: &'a LifeTree,
    memo: HashMap<(usize, usize), bool>,
}

impl EmbedSearch<'_> {
    fn can(&mut self, node: usize, facet_idx: usize) -> bool {
        if let Some(&v) = self.memo.get(&(node, facet_idx)) {
            return v;
        }
        // Seed pessimistically; the tree is acyclic so a (node, facet)
        // pair never recurses into itself, this only guards against
        // exponential re-exploration.
        self.memo.insert((node, facet_idx), false);
        let facet = &self.m.facets()[facet_idx];
        let chi = self.m.chi(facet).expect("facet of the model");
        let ok = self.t.label(node).is_subset(&chi)
            && self.t.children(node).iter().all(|&child| {
                let (_, a) = self.t.parent(child).unwrap();
                let a = a.clone();
                self.m
                    .star(&a, &facet.clone())
                    .expect("facet of the model")
                    .iter()
                    .any(|y| {
                        let yi = self.m.facet_index(y).unwrap();
                        self.can(child, yi)
                    })
            });
        self.memo.insert((node, facet_idx), ok);
        ok
    }

    fn assignment(&mut self, node: usize, facet_idx: usize, out: &mut Vec<Facet>) {
        out[node] = self.m.facets()[facet_idx].clone();
        for &child in self.t.children(node) {
            let (_, a) = self.t.parent(child).unwrap();
            let a = a.clone();
            let facet = self.m.facets()[facet_idx].clone();
            let y = self
                .m
                .star(&a, &facet)
                .unwrap()
                .into_iter()
                .find(|y| {
                    let yi = self.m.facet_index(y).unwrap();
                    self.can(child, yi)
                })
                .expect("feasible child has a target");
            let yi = self.m.facet_index(&y).unwrap();
            self.assignment(child, yi, out);
        }
    }
}

/// Tries to embed `t` at the facet `x` of `m`; on failure, returns the
/// root-level reason.
pub fn embed(m: &SimplicialModel, x: &Facet, t: &LifeTree) -> Result<EmbedOutcome, ModelError> {
    let xi = m
        .facet_index(x)
        .ok_or_else(|| ModelError::PointNotFacet(x.clone()))?;
    let mut search = EmbedSearch {
        m,
        t,
        memo: HashMap::new(),
    };
    if search.can(LifeTree::ROOT, xi) {
        let placeholder = x.clone();
        let mut assignment = vec![placeholder; t.len()];
        search.assignment(LifeTree::ROOT, xi, &mut assignment);
        return Ok(EmbedOutcome::Embedded(Embedding { assignment }));
    }
    let chi = m.chi(x)?;
    if let Some(agent) = t.label(LifeTree::ROOT).iter().find(|a| !chi.contains(*a)) {
        return Ok(EmbedOutcome::NotEmbeddable(EmbedFailure::RootLabel {
            agent: agent.clone(),
        }));
    }
    let failing = t
        .children(LifeTree::ROOT)
        .iter()
        .find(|&&child| {
            let (_, a) = t.parent(child).unwrap();
            let a = a.clone();
            !m.star(&a, x)
                .unwrap()
                .iter()
                .any(|y| search.can(child, m.facet_index(y).unwrap()))
        })
        .copied()
        .expect("root failure implies a failing child");
    let (_, a) = t.parent(failing).unwrap();
    Ok(EmbedOutcome::NotEmbeddable(EmbedFailure::Child {
        edge: a.clone(),
        subformula: t.tag(failing).cloned(),
    }))
}

/// Cross-implementation oracle: embeddability of the life tree must agree
/// with definability computed by the evaluator.
pub fn check_embed_equals_definability(
    m: &SimplicialModel,
    x: &Facet,
    phi: &Formula,
) -> Result<bool, ModelError> {
    let embedded = embed(m, x, &life_tree(phi))?.is_embedded();
    Ok(embedded == defines(m, x, phi)?)
}

/// How star facets are ordered while folding the transform's conditional
/// conjunction. The explicit variant applies to the outermost step only;
/// recursive steps always use the canonical sorted order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub enum OrderingPolicy {
    #[default]
    Canonical,
    Explicit(Vec<Facet>),
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TransformError {
    #[error("the formula is already defined at the given point")]
    AlreadyDefined,
    #[error("explicit ordering must be a permutation of the relevant star {star:?}")]
    BadOrdering { star: Vec<Facet> },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Builds a formula F with eval(m, x, F) = False and eval = True at every
/// pointed model that defines `phi`. Requires `phi` undefined at `x`.
pub fn transform(
    m: &SimplicialModel,
    x: &Facet,
    phi: &Formula,
    ordering: &OrderingPolicy,
) -> Result<Formula, TransformError> {
    if defines(m, x, phi)? {
        return Err(TransformError::AlreadyDefined);
    }
    transform_undef(m, x, phi, Some(ordering))
}

fn transform_undef(
    m: &SimplicialModel,
    x: &Facet,
    phi: &Formula,
    ordering: Option<&OrderingPolicy>,
) -> Result<Formula, TransformError> {
    let tree = life_tree(phi);
    let failure = match embed(m, x, &tree)? {
        EmbedOutcome::Embedded(_) => return Err(TransformError::AlreadyDefined),
        EmbedOutcome::NotEmbeddable(f) => f,
    };
    match failure {
        EmbedFailure::RootLabel { .. } => {
            // Some required agent is dead at x, so the conjunction of
            // aliveness atoms over the whole root label is false at x and
            // true wherever phi is defined.
            let mut agents: Vec<_> = tree.label(LifeTree::ROOT).iter().cloned().collect();
            let last = agents.pop().expect("nonempty root label");
            let tail = Formula::Global(last);
            Ok(agents
                .into_iter()
                .rev()
                .fold(tail, |acc, a| Formula::and(Formula::Global(a), acc)))
        }
        EmbedFailure::Child { edge: a, subformula } => {
            let psi = subformula.expect("formula-derived tree nodes are tagged");
            let mut star = m.star(&a, x)?;
            if let Some(OrderingPolicy::Explicit(order)) = ordering {
                let mut sorted = order.clone();
                sorted.sort();
                if sorted != star {
                    return Err(TransformError::BadOrdering { star });
                }
                star = order.clone();
            }
            // The failing child embeds at no a-adjacent facet, so psi is
            // undefined at every element of the star and the recursive
            // calls all satisfy the precondition.
            let mut xi = transform_undef(m, &star[0], &psi, None)?;
            for y in &star[1..] {
                if eval(m, y, &xi)? == TruthValue::True {
                    let f_y = transform_undef(m, y, &psi, None)?;
                    xi = Formula::and(xi, f_y);
                }
            }
            Ok(Formula::diamond(a, xi))
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::corpus;
    use crate::formula::parse;
    use crate::semantics::satisfies;

    use super::*;

    fn a(name: &str) -> AgentId {
        AgentId::new(name)
    }

    fn leaf(label: &[&str]) -> TreeShape {
        TreeShape::new(label.iter().map(|s| a(s)), [])
    }

    #[test]
    fn sample_tree_shapes() {
        let left = life_tree(&parse("<b> !p@d & <c> p@d").unwrap());
        assert_eq!(
            left.shape(),
            TreeShape::new(
                [a("b"), a("c")],
                [(a("b"), leaf(&["b", "d"])), (a("c"), leaf(&["c", "d"]))],
            )
        );
        let middle = life_tree(&parse("<a>(<b> !p@d & <c> p@d)").unwrap());
        assert_eq!(
            middle.shape(),
            TreeShape::new(
                [a("a")],
                [(
                    a("a"),
                    TreeShape::new(
                        [a("a"), a("b"), a("c")],
                        [(a("b"), leaf(&["b", "d"])), (a("c"), leaf(&["c", "d"]))],
                    ),
                )],
            )
        );
        let right = life_tree(&parse("<a><b> !p@d & <a><c> p@d").unwrap());
        assert_eq!(
            right.shape(),
            TreeShape::new(
                [a("a")],
                [
                    (
                        a("a"),
                        TreeShape::new([a("a"), a("b")], [(a("b"), leaf(&["b", "d"]))]),
                    ),
                    (
                        a("a"),
                        TreeShape::new([a("a"), a("c")], [(a("c"), leaf(&["c", "d"]))]),
                    ),
                ],
            )
        );
        // The grafted left tree is the subtree of the middle tree under
        // its root.
        let grafted = graft(&left, &a("a"));
        let sub = middle.children(LifeTree::ROOT)[0];
        assert_eq!(grafted.shape(), middle.shape_of(sub));
    }

    #[test]
    fn atom_trees() {
        let t = life_tree(&parse("alive(a)").unwrap());
        assert_eq!(t.len(), 1);
        assert!(t.label(LifeTree::ROOT).is_empty());
        let t = life_tree(&parse("p@a").unwrap());
        assert_eq!(t.label(LifeTree::ROOT), &BTreeSet::from([a("a")]));
        assert_eq!(graft(&t, &a("a")).shape(), t.shape());
        assert_eq!(
            graft(&life_tree(&parse("alive(a)").unwrap()), &a("b"))
                .label(LifeTree::ROOT),
            &BTreeSet::from([a("b")])
        );
    }

    #[test]
    fn node_count_identities() {
        let phi = parse("<a>(p@b & <c> p@d)").unwrap();
        let psi = parse("<b> !p@a").unwrap();
        assert_eq!(life_tree(&Formula::not(phi.clone())), life_tree(&phi));
        assert_eq!(
            life_tree(&Formula::and(phi.clone(), psi.clone())).len(),
            life_tree(&phi).len() + life_tree(&psi).len() - 1
        );
        assert_eq!(
            life_tree(&Formula::diamond(a("e"), phi.clone())).len(),
            life_tree(&phi).len() + 1
        );
    }

    #[test]
    fn embed_on_fig4() {
        let c = corpus::fixture_model("fig4.C");
        let x = c.resolve_point("X").unwrap();
        let y2 = c.resolve_point("Y2").unwrap();
        let phi = parse("p@b & <c><d> p@a & <c><e> !p@a").unwrap();
        let out = embed(&c, &x, &life_tree(&phi)).unwrap();
        assert!(matches!(
            out,
            EmbedOutcome::NotEmbeddable(EmbedFailure::Child { .. })
        ));
        let out = embed(&c, &y2, &life_tree(&parse("<d> p@a").unwrap())).unwrap();
        match out {
            EmbedOutcome::NotEmbeddable(EmbedFailure::Child { edge, .. }) => {
                assert_eq!(edge, a("d"));
            }
            other => panic!("expected child failure, got {other:?}"),
        }
        let out = embed(&c, &x, &life_tree(&parse("alive(a)").unwrap())).unwrap();
        match out {
            EmbedOutcome::Embedded(e) => assert_eq!(e.facet_of(LifeTree::ROOT), &x),
            other => panic!("expected embedding, got {other:?}"),
        }
    }

    #[test]
    fn embed_matches_definability_on_fig1() {
        let c = corpus::fixture_model("fig1.C");
        for point in ["X", "Y"] {
            let x = c.resolve_point(point).unwrap();
            for text in [
                "p@c",
                "p@a",
                "<a> p@c",
                "<c> p@a",
                "[a](p@b & p@c)",
                "<b><a> alive(c)",
                "p@a & <a> p@c",
            ] {
                let phi = parse(text).unwrap();
                assert!(
                    check_embed_equals_definability(&c, &x, &phi).unwrap(),
                    "disagreement at {point} on {text}"
                );
            }
        }
    }

    #[test]
    fn transform_fig4_orderings() {
        let c = corpus::fixture_model("fig4.C");
        let x = c.resolve_point("X").unwrap();
        let phi = parse("p@b & <c><d> p@a & <c><e> !p@a").unwrap();

        let canonical = transform(&c, &x, &phi, &OrderingPolicy::Canonical).unwrap();
        let explicit = |points: [&str; 3]| {
            let order = points
                .iter()
                .map(|p| c.resolve_point(p).unwrap())
                .collect::<Vec<_>>();
            transform(&c, &x, &phi, &OrderingPolicy::Explicit(order)).unwrap()
        };
        let f1 = explicit(["Y2", "X", "Y3"]);
        assert_eq!(f1.to_string(), "<c><d> alive(a)");
        let f2 = explicit(["X", "Y2", "Y3"]);
        assert_eq!(f2.to_string(), "<c>(alive(d) & <d> alive(a))");

        for f in [&canonical, &f1, &f2] {
            assert_eq!(eval(&c, &x, f).unwrap(), TruthValue::False);
            // True wherever phi is defined, across the whole corpus.
            for id in corpus::model_fixture_ids() {
                let m = corpus::fixture_model(id);
                for point in m.facets() {
                    if defines(&m, point, &phi).unwrap() {
                        assert!(satisfies(&m, point, f).unwrap(), "{id} {point}");
                    }
                }
            }
        }
    }

    #[test]
    fn transform_root_label_case() {
        let c = corpus::fixture_model("fig1.C");
        let x = c.resolve_point("X").unwrap();
        let f = transform(&c, &x, &parse("p@c").unwrap(), &OrderingPolicy::Canonical).unwrap();
        assert_eq!(f.to_string(), "alive(c)");
        let f = transform(&c, &x, &parse("p@c & p@a").unwrap(), &OrderingPolicy::Canonical)
            .unwrap();
        assert_eq!(f.to_string(), "alive(a) & alive(c)");
    }

    #[test]
    fn transform_rejects_defined_input() {
        let c = corpus::fixture_model("fig1.C");
        let x = c.resolve_point("X").unwrap();
        let err = transform(&c, &x, &parse("p@a").unwrap(), &OrderingPolicy::Canonical)
            .unwrap_err();
        assert_eq!(err, TransformError::AlreadyDefined);
    }

    #[test]
    fn transform_rejects_bad_ordering() {
        let c = corpus::fixture_model("fig4.C");
        let x = c.resolve_point("X").unwrap();
        let phi = parse("p@b & <c><d> p@a & <c><e> !p@a").unwrap();
        let err = transform(
            &c,
            &x,
            &phi,
            &OrderingPolicy::Explicit(vec![x.clone()]),
        )
        .unwrap_err();
        assert!(matches!(err, TransformError::BadOrdering { .. }));
    }
}
