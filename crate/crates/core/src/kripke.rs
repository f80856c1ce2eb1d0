//! Partial epistemic (Kripke) models, their three-valued semantics, life
//! and standard bisimulations, and the two translations to and from
//! simplicial models.
//!
//! A partial epistemic model carries, per agent, a partition of the
//! states where that agent is alive; the induced relation is a partial
//! equivalence on all states. Local atoms may be assigned where their
//! agent is dead; such atoms are invisible to the semantics and to life
//! bisimulation, but standard bisimulation sees them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisim::{max_bisim, DistinguishError};
use crate::formula::{AgentId, Formula, LocalAtom, Vocabulary};
use crate::model::{Facet, SimplicialModel, VertexData, VertexId};
use crate::semantics::{eval, EquivError};
use crate::TruthValue;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Self {
        StateId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateId({})", self.0)
    }
}

/// Per-state data: the live agents and the true local atoms. Atoms of
/// dead agents are allowed and semantically inert.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateData {
    pub alive: BTreeSet<AgentId>,
    pub atoms: BTreeSet<LocalAtom>,
}

impl StateData {
    /// The atoms belonging to live agents, the part the semantics and
    /// life bisimulation can see.
    pub fn live_atoms(&self) -> BTreeSet<LocalAtom> {
        self.atoms
            .iter()
            .filter(|p| self.alive.contains(&p.agent))
            .cloned()
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum KripkeViolation {
    #[error("model has no states")]
    NoStates,
    #[error("state `{0}` has no live agents")]
    NoLiveAgents(StateId),
    #[error("state `{state}` lists unknown agent `{agent}`")]
    UnknownAliveAgent { state: StateId, agent: AgentId },
    #[error("state `{state}` carries atom of unknown agent `{agent}`")]
    UnknownAtomAgent { state: StateId, agent: AgentId },
    #[error("relation listed for unknown agent `{0}`")]
    UnknownRelationAgent(AgentId),
    #[error("block for agent `{agent}` references unknown state `{state}`")]
    UnknownBlockState { agent: AgentId, state: StateId },
    #[error("agent `{agent}` has an empty partition block")]
    EmptyBlock { agent: AgentId },
    #[error("state `{state}` is dead for agent `{agent}` but occurs in its partition")]
    DeadStateInBlock { agent: AgentId, state: StateId },
    #[error("state `{state}` occurs in two blocks of agent `{agent}`")]
    OverlappingBlocks { agent: AgentId, state: StateId },
    #[error("state `{state}` is alive for agent `{agent}` but occurs in no block")]
    UncoveredState { agent: AgentId, state: StateId },
    #[error("states `{left}` and `{right}` are related by `{agent}` but disagree on `{atom}`")]
    ValuationLocality {
        agent: AgentId,
        left: StateId,
        right: StateId,
        atom: LocalAtom,
    },
    #[error("states `{left}` and `{right}` are indistinguishable to every agent alive in `{left}`")]
    Improper { left: StateId, right: StateId },
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum KripkeError {
    #[error("unknown state `{0}`")]
    UnknownState(StateId),
}

/// A validated partial epistemic model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialEpistemicModel {
    agents: BTreeSet<AgentId>,
    states: BTreeMap<StateId, StateData>,
    /// Per agent, the partition of that agent's live states, blocks
    /// sorted by least element.
    relations: BTreeMap<AgentId, Vec<BTreeSet<StateId>>>,
}

impl PartialEpistemicModel {
    pub fn from_parts(
        agents: impl IntoIterator<Item = AgentId>,
        states: impl IntoIterator<Item = (StateId, StateData)>,
        relations: impl IntoIterator<Item = (AgentId, Vec<BTreeSet<StateId>>)>,
    ) -> Result<Self, Vec<KripkeViolation>> {
        let agents: BTreeSet<_> = agents.into_iter().collect();
        let states: BTreeMap<_, _> = states.into_iter().collect();
        let mut relations: BTreeMap<_, _> = relations.into_iter().collect();
        // Agents with no live states may omit their (empty) partition.
        for a in &agents {
            relations.entry(a.clone()).or_default();
        }
        for blocks in relations.values_mut() {
            blocks.sort();
        }
        let model = PartialEpistemicModel {
            agents,
            states,
            relations,
        };
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(violations)
        }
    }

    /// Checks every model invariant; an empty result means valid.
    pub fn validate(&self) -> Vec<KripkeViolation> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(KripkeViolation::NoStates);
        }
        for (s, data) in &self.states {
            if data.alive.is_empty() {
                out.push(KripkeViolation::NoLiveAgents(s.clone()));
            }
            for a in &data.alive {
                if !self.agents.contains(a) {
                    out.push(KripkeViolation::UnknownAliveAgent {
                        state: s.clone(),
                        agent: a.clone(),
                    });
                }
            }
            for p in &data.atoms {
                if !self.agents.contains(&p.agent) {
                    out.push(KripkeViolation::UnknownAtomAgent {
                        state: s.clone(),
                        agent: p.agent.clone(),
                    });
                }
            }
        }
        for (a, blocks) in &self.relations {
            if !self.agents.contains(a) {
                out.push(KripkeViolation::UnknownRelationAgent(a.clone()));
                continue;
            }
            let mut seen: BTreeSet<&StateId> = BTreeSet::new();
            for block in blocks {
                if block.is_empty() {
                    out.push(KripkeViolation::EmptyBlock { agent: a.clone() });
                }
                for s in block {
                    match self.states.get(s) {
                        None => out.push(KripkeViolation::UnknownBlockState {
                            agent: a.clone(),
                            state: s.clone(),
                        }),
                        Some(data) if !data.alive.contains(a) => {
                            out.push(KripkeViolation::DeadStateInBlock {
                                agent: a.clone(),
                                state: s.clone(),
                            })
                        }
                        Some(_) => {}
                    }
                    if !seen.insert(s) {
                        out.push(KripkeViolation::OverlappingBlocks {
                            agent: a.clone(),
                            state: s.clone(),
                        });
                    }
                }
                // Valuation locality inside the block.
                if let Some(first) = block.iter().find(|s| self.states.contains_key(*s)) {
                    let reference = agent_atoms(&self.states[first], a);
                    for s in block {
                        let Some(data) = self.states.get(s) else { continue };
                        let here = agent_atoms(data, a);
                        if here != reference {
                            let atom = here
                                .symmetric_difference(&reference)
                                .next()
                                .unwrap()
                                .clone();
                            out.push(KripkeViolation::ValuationLocality {
                                agent: a.clone(),
                                left: first.clone(),
                                right: s.clone(),
                                atom,
                            });
                        }
                    }
                }
            }
            for (s, data) in &self.states {
                if data.alive.contains(a) && !seen.contains(s) {
                    out.push(KripkeViolation::UncoveredState {
                        agent: a.clone(),
                        state: s.clone(),
                    });
                }
            }
        }
        // Properness: every state is told apart from every other one by
        // some agent alive in it.
        for (s, data) in &self.states {
            for t in self.states.keys() {
                if s != t
                    && data
                        .alive
                        .iter()
                        .all(|b| self.related(b, s, t))
                {
                    out.push(KripkeViolation::Improper {
                        left: s.clone(),
                        right: t.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.agents
    }

    pub fn states(&self) -> &BTreeMap<StateId, StateData> {
        &self.states
    }

    pub fn relations(&self) -> &BTreeMap<AgentId, Vec<BTreeSet<StateId>>> {
        &self.relations
    }

    /// The a-class of `s`: the partition block containing it, or an empty
    /// set when `a` is dead at `s`.
    pub fn class(&self, a: &AgentId, s: &StateId) -> BTreeSet<StateId> {
        self.relations
            .get(a)
            .and_then(|blocks| blocks.iter().find(|b| b.contains(s)))
            .cloned()
            .unwrap_or_default()
    }

    pub fn related(&self, a: &AgentId, s: &StateId, t: &StateId) -> bool {
        self.class(a, s).contains(t)
    }

    /// Agents plus every (atom name, agent) pair, for formula enumeration.
    pub fn vocabulary(&self) -> Vocabulary {
        let names: BTreeSet<&str> = self
            .states
            .values()
            .flat_map(|d| d.atoms.iter().map(|p| p.name.as_str()))
            .collect();
        Vocabulary::new(
            self.agents.iter().cloned(),
            names.iter().flat_map(|n| {
                self.agents
                    .iter()
                    .map(|a| LocalAtom::new(n.to_string(), a.clone()))
            }),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("kripke serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn agent_atoms(data: &StateData, a: &AgentId) -> BTreeSet<LocalAtom> {
    data.atoms
        .iter()
        .filter(|p| p.agent == *a)
        .cloned()
        .collect()
}

/// Evaluates `phi` at state `s`, mirroring the simplicial clauses with
/// the a-class in place of the star.
pub fn eval_kripke(
    m: &PartialEpistemicModel,
    s: &StateId,
    phi: &Formula,
) -> Result<TruthValue, KripkeError> {
    if !m.states.contains_key(s) {
        return Err(KripkeError::UnknownState(s.clone()));
    }
    let mut memo: HashMap<(StateId, *const Formula), TruthValue> = HashMap::new();
    Ok(eval_k(m, s, phi, &mut memo))
}

fn eval_k(
    m: &PartialEpistemicModel,
    s: &StateId,
    phi: &Formula,
    memo: &mut HashMap<(StateId, *const Formula), TruthValue>,
) -> TruthValue {
    let key = (s.clone(), phi as *const Formula);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let data = &m.states[s];
    let value = match phi {
        Formula::Global(a) => {
            if data.alive.contains(a) {
                TruthValue::True
            } else {
                TruthValue::False
            }
        }
        Formula::Local(p) => {
            if !data.alive.contains(&p.agent) {
                TruthValue::Undef
            } else if data.atoms.contains(p) {
                TruthValue::True
            } else {
                TruthValue::False
            }
        }
        Formula::Not(q) => eval_k(m, s, q, memo).negate(),
        Formula::And(p, q) => eval_k(m, s, p, memo).and(eval_k(m, s, q, memo)),
        Formula::Diamond(a, q) => {
            let class = m.class(a, s);
            let mut any_defined = false;
            let mut any_true = false;
            for t in &class {
                let v = eval_k(m, t, q, memo);
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
    memo.insert(key, value);
    value
}

/// Builds the simplicial counterpart: one vertex per (equivalence class,
/// agent) pair, one facet per state. Returns the state-to-facet map;
/// state names are also installed as facet aliases. Atoms of dead agents
/// are discarded.
pub fn sigma(m: &PartialEpistemicModel) -> (SimplicialModel, BTreeMap<StateId, Facet>) {
    // Vertex ([s]_a, a) is named after a and the least state of the class.
    let mut vertices: BTreeMap<VertexId, VertexData> = BTreeMap::new();
    let mut vertex_of: BTreeMap<(AgentId, StateId), VertexId> = BTreeMap::new();
    for (a, blocks) in &m.relations {
        for block in blocks {
            let least = block.iter().next().unwrap();
            let name = VertexId::new(format!("{}_{}", a, least));
            let atoms = agent_atoms(&m.states[least], a)
                .into_iter()
                .map(|p| p.name)
                .collect();
            vertices.insert(
                name.clone(),
                VertexData {
                    agent: a.clone(),
                    atoms,
                },
            );
            for s in block {
                vertex_of.insert((a.clone(), s.clone()), name.clone());
            }
        }
    }
    let mut facets = Vec::new();
    let mut state_map = BTreeMap::new();
    let mut names = Vec::new();
    for (s, data) in &m.states {
        let facet = Facet::new(
            data.alive
                .iter()
                .map(|a| vertex_of[&(a.clone(), s.clone())].clone()),
        );
        facets.push(facet.clone());
        names.push((s.as_str().to_string(), facet.clone()));
        state_map.insert(s.clone(), facet);
    }
    let model = SimplicialModel::from_parts(m.agents.iter().cloned(), vertices, facets, names)
        .expect("sigma of a valid model is valid");
    (model, state_map)
}

/// Builds the Kripke counterpart: one state per facet (named by its alias
/// when present, else by its vertices joined with `+`), with per-agent
/// blocks given by shared a-vertices.
pub fn kappa(c: &SimplicialModel) -> PartialEpistemicModel {
    kappa_with_map(c).0
}

/// As [`kappa`], also returning the facet-to-state naming.
pub fn kappa_with_map(c: &SimplicialModel) -> (PartialEpistemicModel, BTreeMap<Facet, StateId>) {
    let state_name = |facet: &Facet| -> StateId {
        match c.alias_of(facet) {
            Some(alias) => StateId::new(alias),
            None => StateId::new(
                facet
                    .vertices()
                    .iter()
                    .map(|v| v.as_str())
                    .collect::<Vec<_>>()
                    .join("+"),
            ),
        }
    };
    let states = c.facets().iter().map(|facet| {
        (
            state_name(facet),
            StateData {
                alive: c.chi(facet).unwrap(),
                atoms: c.ell(facet).unwrap(),
            },
        )
    });
    let mut relations: BTreeMap<AgentId, Vec<BTreeSet<StateId>>> = BTreeMap::new();
    for (v, data) in c.vertices() {
        let block: BTreeSet<StateId> = c
            .facets()
            .iter()
            .filter(|f| f.contains(v))
            .map(&state_name)
            .collect();
        relations.entry(data.agent.clone()).or_default().push(block);
    }
    let model = PartialEpistemicModel::from_parts(c.agents().iter().cloned(), states, relations)
        .expect("kappa of a valid model is valid");
    let map = c
        .facets()
        .iter()
        .map(|f| (f.clone(), state_name(f)))
        .collect();
    (model, map)
}

/// Removal record for Kripke-side bisimulations, mirroring the simplicial
/// one with states in place of facets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KripkeRemovalCause {
    Atoms,
    Forth { agent: AgentId, unmatched: StateId },
    Back { agent: AgentId, unmatched: StateId },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KripkeRemovedInfo {
    pub round: usize,
    pub cause: KripkeRemovalCause,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KripkeBisimRelation {
    pairs: BTreeSet<(StateId, StateId)>,
    removed: BTreeMap<(StateId, StateId), KripkeRemovedInfo>,
}

impl KripkeBisimRelation {
    pub fn pairs(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.pairs
    }

    pub fn removed(&self) -> &BTreeMap<(StateId, StateId), KripkeRemovedInfo> {
        &self.removed
    }

    pub fn contains(&self, s: &StateId, s2: &StateId) -> bool {
        self.pairs.contains(&(s.clone(), s2.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The two bisimulation notions on partial epistemic models. Their forth
/// and back clauses coincide (a dead agent relates nothing), so they
/// differ only in whether dead agents' atoms must match.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BisimKind {
    /// Atoms clause compares alive sets and live agents' atoms only.
    Life,
    /// Atoms clause additionally compares dead agents' atoms.
    Standard,
}

fn kripke_atoms_match(
    kind: BisimKind,
    d: &StateData,
    d2: &StateData,
) -> bool {
    d.alive == d2.alive
        && match kind {
            BisimKind::Life => d.live_atoms() == d2.live_atoms(),
            BisimKind::Standard => d.atoms == d2.atoms,
        }
}

fn kripke_max_bisim(
    m: &PartialEpistemicModel,
    m2: &PartialEpistemicModel,
    kind: BisimKind,
) -> KripkeBisimRelation {
    let mut pairs: BTreeSet<(StateId, StateId)> = BTreeSet::new();
    let mut removed: BTreeMap<(StateId, StateId), KripkeRemovedInfo> = BTreeMap::new();
    for (s, d) in m.states() {
        for (s2, d2) in m2.states() {
            let pair = (s.clone(), s2.clone());
            if kripke_atoms_match(kind, d, d2) {
                pairs.insert(pair);
            } else {
                removed.insert(
                    pair,
                    KripkeRemovedInfo {
                        round: 0,
                        cause: KripkeRemovalCause::Atoms,
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
        'pairs: for (s, s2) in &prev {
            for a in &agents {
                let class = m.class(a, s);
                let class2 = m2.class(a, s2);
                for t in &class {
                    if !class2.iter().any(|t2| prev.contains(&(t.clone(), t2.clone()))) {
                        deleted.push((
                            (s.clone(), s2.clone()),
                            KripkeRemovedInfo {
                                round,
                                cause: KripkeRemovalCause::Forth {
                                    agent: a.clone(),
                                    unmatched: t.clone(),
                                },
                            },
                        ));
                        continue 'pairs;
                    }
                }
                for t2 in &class2 {
                    if !class.iter().any(|t| prev.contains(&(t.clone(), t2.clone()))) {
                        deleted.push((
                            (s.clone(), s2.clone()),
                            KripkeRemovedInfo {
                                round,
                                cause: KripkeRemovalCause::Back {
                                    agent: a.clone(),
                                    unmatched: t2.clone(),
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
    KripkeBisimRelation { pairs, removed }
}

pub fn life_bisim(m: &PartialEpistemicModel, m2: &PartialEpistemicModel) -> KripkeBisimRelation {
    kripke_max_bisim(m, m2, BisimKind::Life)
}

pub fn standard_bisim(
    m: &PartialEpistemicModel,
    m2: &PartialEpistemicModel,
) -> KripkeBisimRelation {
    kripke_max_bisim(m, m2, BisimKind::Standard)
}

pub fn life_bisimilar(
    m: &PartialEpistemicModel,
    s: &StateId,
    m2: &PartialEpistemicModel,
    s2: &StateId,
) -> Result<bool, KripkeError> {
    if !m.states.contains_key(s) {
        return Err(KripkeError::UnknownState(s.clone()));
    }
    if !m2.states.contains_key(s2) {
        return Err(KripkeError::UnknownState(s2.clone()));
    }
    Ok(life_bisim(m, m2).contains(s, s2))
}

pub fn standard_bisimilar(
    m: &PartialEpistemicModel,
    s: &StateId,
    m2: &PartialEpistemicModel,
    s2: &StateId,
) -> Result<bool, KripkeError> {
    if !m.states.contains_key(s) {
        return Err(KripkeError::UnknownState(s.clone()));
    }
    if !m2.states.contains_key(s2) {
        return Err(KripkeError::UnknownState(s2.clone()));
    }
    Ok(standard_bisim(m, m2).contains(s, s2))
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum KripkeDistinguishError {
    #[error("the two states are life bisimilar, no distinguishing formula exists")]
    Bisimilar,
    #[error(transparent)]
    State(#[from] KripkeError),
}

/// Distinguishing-formula synthesis for Kripke models, obtained by mapping
/// both sides through sigma and reusing the simplicial synthesis.
pub fn distinguish_kripke(
    m: &PartialEpistemicModel,
    s: &StateId,
    m2: &PartialEpistemicModel,
    s2: &StateId,
) -> Result<Formula, KripkeDistinguishError> {
    if !m.states.contains_key(s) {
        return Err(KripkeError::UnknownState(s.clone()).into());
    }
    if !m2.states.contains_key(s2) {
        return Err(KripkeError::UnknownState(s2.clone()).into());
    }
    let (c, map) = sigma(m);
    let (c2, map2) = sigma(m2);
    match crate::bisim::distinguish(&c, &map[s], &c2, &map2[s2]) {
        Ok(phi) => Ok(phi),
        Err(DistinguishError::Bisimilar) => Err(KripkeDistinguishError::Bisimilar),
        Err(DistinguishError::Model(_)) => unreachable!("sigma maps states to facets"),
    }
}

/// Result of [`correspondence_check`]: truth preservation across the
/// translations plus bisimilarity of the round trips.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorrespondenceReport {
    pub checked_formulas: usize,
    pub failures: Vec<String>,
}

impl CorrespondenceReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, for a simplicial model: eval(C, X, phi) = eval(kappa(C), X,
/// phi) for every facet and every enumerated formula within bounds, and
/// that C is bisimilar to sigma(kappa(C)) at every facet.
pub fn correspondence_check_model(
    c: &SimplicialModel,
    max_modal_depth: usize,
    max_size: usize,
    budget: Option<usize>,
) -> Result<CorrespondenceReport, EquivError> {
    let (k, state_names) = kappa_with_map(c);
    let vocab = k.vocabulary();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let states: Vec<&StateId> = c.facets().iter().map(|f| &state_names[f]).collect();
    for phi in crate::formula::enumerate_formulas(
        &vocab,
        max_modal_depth,
        max_size,
        crate::formula::Fragment::Lplus,
    ) {
        if let Some(limit) = budget {
            if checked >= limit {
                return Err(EquivError::BudgetExceeded { budget: limit });
            }
        }
        checked += 1;
        for (facet, state) in c.facets().iter().zip(&states) {
            let simp = eval(c, facet, &phi).unwrap();
            let krip = eval_kripke(&k, state, &phi).unwrap();
            if simp != krip {
                failures.push(format!(
                    "kappa disagrees at {facet} on {phi}: {simp} vs {krip}"
                ));
            }
        }
    }
    let (back, map) = sigma(&k);
    let rel = max_bisim(c, &back);
    for (facet, state) in c.facets().iter().zip(&states) {
        if !rel.contains(facet, &map[state]) {
            failures.push(format!("{facet} not bisimilar to its sigma(kappa) image"));
        }
    }
    Ok(CorrespondenceReport {
        checked_formulas: checked,
        failures,
    })
}

/// Checks, for a Kripke model: eval_kripke(M, s, phi) = eval(sigma(M),
/// sigma(s), phi) within bounds, and that M is life bisimilar to
/// kappa(sigma(M)) at every state.
pub fn correspondence_check_kripke(
    m: &PartialEpistemicModel,
    max_modal_depth: usize,
    max_size: usize,
    budget: Option<usize>,
) -> Result<CorrespondenceReport, EquivError> {
    let (c, map) = sigma(m);
    let vocab = m.vocabulary();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for phi in crate::formula::enumerate_formulas(
        &vocab,
        max_modal_depth,
        max_size,
        crate::formula::Fragment::Lplus,
    ) {
        if let Some(limit) = budget {
            if checked >= limit {
                return Err(EquivError::BudgetExceeded { budget: limit });
            }
        }
        checked += 1;
        for (s, facet) in &map {
            let krip = eval_kripke(m, s, &phi).unwrap();
            let simp = eval(&c, facet, &phi).unwrap();
            if krip != simp {
                failures.push(format!(
                    "sigma disagrees at {s} on {phi}: {krip} vs {simp}"
                ));
            }
        }
    }
    let back = kappa(&c);
    let rel = life_bisim(m, &back);
    for (s, facet) in &map {
        // kappa names its states after sigma's facet aliases, which are
        // the original state names.
        let image = StateId::new(
            c.alias_of(facet).expect("sigma installs state aliases"),
        );
        if !rel.contains(s, &image) {
            failures.push(format!("{s} not life bisimilar to its kappa(sigma) image"));
        }
    }
    Ok(CorrespondenceReport {
        checked_formulas: checked,
        failures,
    })
}

// JSON schema:
// {"agents":[...],
//  "states":{"s":{"alive":["a"],"atoms":["p@a"]},...},
//  "relations":{"a":[["s","t"],["u"]],...}}
#[derive(Serialize, Deserialize)]
struct KripkeJson {
    agents: Vec<AgentId>,
    states: BTreeMap<StateId, StateJson>,
    relations: BTreeMap<AgentId, Vec<Vec<StateId>>>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    alive: Vec<AgentId>,
    #[serde(default)]
    atoms: Vec<String>,
}

fn parse_atom(text: &str) -> Result<LocalAtom, String> {
    match text.split_once('@') {
        Some((name, agent)) if !name.is_empty() && !agent.is_empty() => {
            Ok(LocalAtom::new(name, AgentId::new(agent)))
        }
        _ => Err(format!("malformed local atom `{text}`, expected `name@agent`")),
    }
}

impl Serialize for PartialEpistemicModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        KripkeJson {
            agents: self.agents.iter().cloned().collect(),
            states: self
                .states
                .iter()
                .map(|(s, d)| {
                    (
                        s.clone(),
                        StateJson {
                            alive: d.alive.iter().cloned().collect(),
                            atoms: d.atoms.iter().map(ToString::to_string).collect(),
                        },
                    )
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|(a, blocks)| {
                    (
                        a.clone(),
                        blocks
                            .iter()
                            .map(|b| b.iter().cloned().collect())
                            .collect(),
                    )
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartialEpistemicModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = KripkeJson::deserialize(deserializer)?;
        let mut states = BTreeMap::new();
        for (s, d) in raw.states {
            let atoms = d
                .atoms
                .iter()
                .map(|t| parse_atom(t))
                .collect::<Result<BTreeSet<_>, _>>()
                .map_err(serde::de::Error::custom)?;
            states.insert(
                s,
                StateData {
                    alive: d.alive.into_iter().collect(),
                    atoms,
                },
            );
        }
        PartialEpistemicModel::from_parts(
            raw.agents,
            states,
            raw.relations
                .into_iter()
                .map(|(a, blocks)| (a, blocks.into_iter().map(|b| b.into_iter().collect()).collect())),
        )
        .map_err(|violations| {
            let text = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            serde::de::Error::custom(format!("invalid kripke model: {text}"))
        })
    }
}
