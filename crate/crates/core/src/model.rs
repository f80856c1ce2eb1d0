//! Simplicial models: facet-listed chromatic simplicial complexes with a
//! per-vertex local-atom valuation.
//!
//! Complexes are stored by their facets only; the downward closure is never
//! materialized because the semantics quantifies only over facets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{AgentId, LocalAtom};

/// A vertex name, unique within a model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexId({})", self.0)
    }
}

/// A canonically sorted, nonempty vertex set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Facet(Vec<VertexId>);

impl Facet {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut vs: Vec<_> = vertices.into_iter().collect();
        vs.sort();
        vs.dedup();
        Facet(vs)
    }

    pub fn from_names<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Facet::new(names.into_iter().map(|s| VertexId::new(s)))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Facet) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }

    /// Vertices shared with `other`.
    pub fn intersection(&self, other: &Facet) -> Vec<VertexId> {
        self.0.iter().filter(|v| other.contains(v)).cloned().collect()
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Per-vertex data: the vertex color and the set of local-atom names that
/// are true there. Absent atoms are false where the agent is alive.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VertexData {
    pub agent: AgentId,
    #[serde(default)]
    pub atoms: BTreeSet<String>,
}

/// An invariant violation reported by validation. Violations are data, not
/// exceptions: a builder returns all of them at once.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum Violation {
    #[error("agent name `{0}` is not a valid identifier")]
    BadAgentName(String),
    #[error("vertex name `{0}` is not a valid identifier")]
    BadVertexName(String),
    #[error("vertex `{vertex}` is colored with unknown agent `{agent}`")]
    UnknownVertexAgent { vertex: VertexId, agent: AgentId },
    #[error("facet {0} is empty")]
    EmptyFacet(Facet),
    #[error("facet {facet} references unknown vertex `{vertex}`")]
    UnknownFacetVertex { facet: Facet, vertex: VertexId },
    #[error("facet {facet} has two vertices colored `{agent}`")]
    ChromaticClash { facet: Facet, agent: AgentId },
    #[error("facet {sub} is contained in facet {sup}")]
    NonMaximal { sub: Facet, sup: Facet },
    #[error("facet {0} is listed twice")]
    DuplicateFacet(Facet),
    #[error("vertex `{0}` occurs in no facet")]
    OrphanVertex(VertexId),
    #[error("model has no facets")]
    NoFacets,
    #[error("alias `{name}` refers to {facet}, which is not a facet")]
    BadAlias { name: String, facet: Facet },
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("{0} is not a facet of the model")]
    PointNotFacet(Facet),
}

/// A validated simplicial model. Immutable once constructed; all queries
/// are pure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialModel {
    agents: BTreeSet<AgentId>,
    vertices: BTreeMap<VertexId, VertexData>,
    facets: Vec<Facet>,
    names: BTreeMap<String, Facet>,
    /// vertex -> indices into `facets`, for star queries.
    facets_of: HashMap<VertexId, Vec<usize>>,
}

impl SimplicialModel {
    pub fn from_parts(
        agents: impl IntoIterator<Item = AgentId>,
        vertices: impl IntoIterator<Item = (VertexId, VertexData)>,
        facets: impl IntoIterator<Item = Facet>,
        names: impl IntoIterator<Item = (String, Facet)>,
    ) -> Result<Self, Vec<Violation>> {
        let agents: BTreeSet<_> = agents.into_iter().collect();
        let vertices: BTreeMap<_, _> = vertices.into_iter().collect();
        let mut facets: Vec<_> = facets.into_iter().collect();
        let names: BTreeMap<_, _> = names.into_iter().collect();

        let violations = validate_parts(&agents, &vertices, &facets, &names);
        if !violations.is_empty() {
            return Err(violations);
        }

        facets.sort();
        let mut facets_of: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, facet) in facets.iter().enumerate() {
            for v in facet.vertices() {
                facets_of.entry(v.clone()).or_default().push(i);
            }
        }
        Ok(SimplicialModel {
            agents,
            vertices,
            facets,
            names,
            facets_of,
        })
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.agents
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, VertexData> {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn aliases(&self) -> &BTreeMap<String, Facet> {
        &self.names
    }

    pub fn facet_index(&self, facet: &Facet) -> Option<usize> {
        self.facets.binary_search(facet).ok()
    }

    pub fn is_facet(&self, facet: &Facet) -> bool {
        self.facet_index(facet).is_some()
    }

    /// Resolves a point given as an alias or as a comma-separated vertex
    /// list.
    pub fn resolve_point(&self, text: &str) -> Result<Facet, ModelError> {
        if let Some(facet) = self.names.get(text) {
            return Ok(facet.clone());
        }
        let facet = Facet::from_names(text.split(',').map(str::trim).filter(|s| !s.is_empty()));
        if self.is_facet(&facet) {
            Ok(facet)
        } else {
            Err(ModelError::PointNotFacet(facet))
        }
    }

    /// The alias of a facet, if one was declared.
    pub fn alias_of(&self, facet: &Facet) -> Option<&str> {
        self.names
            .iter()
            .find(|(_, f)| *f == facet)
            .map(|(n, _)| n.as_str())
    }

    /// The agent colors of a simplex: chi(X) = { chi(v) | v in X }.
    pub fn chi(&self, simplex: &Facet) -> Result<BTreeSet<AgentId>, ModelError> {
        simplex
            .vertices()
            .iter()
            .map(|v| {
                self.vertices
                    .get(v)
                    .map(|d| d.agent.clone())
                    .ok_or_else(|| ModelError::UnknownVertex(v.clone()))
            })
            .collect()
    }

    /// The valuation of a simplex: the union of vertex valuations, tagged
    /// with each vertex's agent.
    pub fn ell(&self, simplex: &Facet) -> Result<BTreeSet<LocalAtom>, ModelError> {
        let mut out = BTreeSet::new();
        for v in simplex.vertices() {
            let data = self
                .vertices
                .get(v)
                .ok_or_else(|| ModelError::UnknownVertex(v.clone()))?;
            for atom in &data.atoms {
                out.insert(LocalAtom::new(atom.clone(), data.agent.clone()));
            }
        }
        Ok(out)
    }

    /// The a-colored vertex of a facet, if any. Unique by chromatic
    /// injectivity.
    pub fn vertex_of_agent<'f>(&self, facet: &'f Facet, a: &AgentId) -> Option<&'f VertexId> {
        facet
            .vertices()
            .iter()
            .find(|v| self.vertices[*v].agent == *a)
    }

    /// star_a(X): all facets a-adjacent to X, in sorted order. Contains X
    /// itself iff a is in chi(X). Two facets are a-adjacent iff they share
    /// the (unique) a-colored vertex.
    pub fn star(&self, a: &AgentId, facet: &Facet) -> Result<Vec<Facet>, ModelError> {
        if !self.is_facet(facet) {
            return Err(ModelError::PointNotFacet(facet.clone()));
        }
        Ok(match self.vertex_of_agent(facet, a) {
            Some(v) => self.facets_of[v]
                .iter()
                .map(|&i| self.facets[i].clone())
                .collect(),
            None => Vec::new(),
        })
    }

    /// The largest facet dimension (|X| - 1).
    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// A model is pure iff every facet has dimension |A| - 1.
    pub fn is_pure(&self) -> bool {
        let n = self.agents.len();
        self.facets.iter().all(|f| f.len() == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Checks every model invariant and returns all violations found.
pub fn validate_parts(
    agents: &BTreeSet<AgentId>,
    vertices: &BTreeMap<VertexId, VertexData>,
    facets: &[Facet],
    names: &BTreeMap<String, Facet>,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for a in agents {
        if !AgentId::is_valid_name(a.as_str()) {
            out.push(Violation::BadAgentName(a.as_str().to_string()));
        }
    }
    for (v, data) in vertices {
        if v.as_str().is_empty() {
            out.push(Violation::BadVertexName(v.as_str().to_string()));
        }
        if !agents.contains(&data.agent) {
            out.push(Violation::UnknownVertexAgent {
                vertex: v.clone(),
                agent: data.agent.clone(),
            });
        }
    }
    if facets.is_empty() {
        out.push(Violation::NoFacets);
    }
    let mut seen: BTreeSet<&Facet> = BTreeSet::new();
    for facet in facets {
        if facet.is_empty() {
            out.push(Violation::EmptyFacet(facet.clone()));
            continue;
        }
        if !seen.insert(facet) {
            out.push(Violation::DuplicateFacet(facet.clone()));
        }
        let mut colors: BTreeSet<AgentId> = BTreeSet::new();
        for v in facet.vertices() {
            match vertices.get(v) {
                None => out.push(Violation::UnknownFacetVertex {
                    facet: facet.clone(),
                    vertex: v.clone(),
                }),
                Some(data) => {
                    if !colors.insert(data.agent.clone()) {
                        out.push(Violation::ChromaticClash {
                            facet: facet.clone(),
                            agent: data.agent.clone(),
                        });
                    }
                }
            }
        }
    }
    for sub in facets {
        for sup in facets {
            if sub != sup && sub.is_subset_of(sup) {
                out.push(Violation::NonMaximal {
                    sub: sub.clone(),
                    sup: sup.clone(),
                });
            }
        }
    }
    for v in vertices.keys() {
        if !facets.iter().any(|f| f.contains(v)) {
            out.push(Violation::OrphanVertex(v.clone()));
        }
    }
    for (name, facet) in names {
        if !facets.contains(facet) {
            out.push(Violation::BadAlias {
                name: name.clone(),
                facet: facet.clone(),
            });
        }
    }
    out
}

// JSON schema:
// {"agents":[...],
//  "vertices":{"v1":{"agent":"a","atoms":["p"]},...},
//  "facets":[["v1","v2"],...],
//  "names":{"X":["v1","v2"]}}        (optional)
#[derive(Serialize, Deserialize)]
struct ModelJson {
    agents: Vec<AgentId>,
    vertices: BTreeMap<VertexId, VertexData>,
    facets: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    names: BTreeMap<String, Vec<VertexId>>,
}

impl Serialize for SimplicialModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModelJson {
            agents: self.agents.iter().cloned().collect(),
            vertices: self.vertices.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| f.vertices().to_vec())
                .collect(),
            names: self
                .names
                .iter()
                .map(|(n, f)| (n.clone(), f.vertices().to_vec()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ModelJson::deserialize(deserializer)?;
        SimplicialModel::from_parts(
            raw.agents,
            raw.vertices,
            raw.facets.into_iter().map(Facet::new),
            raw.names.into_iter().map(|(n, vs)| (n, Facet::new(vs))),
        )
        .map_err(|violations| {
            let text = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            serde::de::Error::custom(format!("invalid model: {text}"))
        })
    }
}
