//! Executable fixtures: the worked example models, an expected-value
//! table, and seeded random model generators for property tests.
//!
//! Vertex names encode the figure labels: the vertex drawn as `1_a`
//! (agent a with its atom p true) is named `a1` and carries atom `p`,
//! `0_b` becomes `b0` with no atoms. Where a figure repeats a label, a
//! disambiguating suffix is appended (`b0p` for the second `0_b`).

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{parse, AgentId, Formula, LocalAtom};
use crate::kripke::{kappa, PartialEpistemicModel, StateData, StateId};
use crate::model::{Facet, SimplicialModel, VertexData, VertexId};
use crate::TruthValue;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum CorpusError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("faraway family requires m >= 1")]
    InvalidParam,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Fixture {
    Model(SimplicialModel),
    Kripke(PartialEpistemicModel),
}

const MODEL_IDS: &[&str] = &[
    "fig1.C",
    "fig1.Cp",
    "ex.bisim.left",
    "ex.bisim.mid",
    "ex.bisim.right",
    "fig4.C",
    "prop4.single",
    "prop4.edge",
    "prop4.path",
];

const KRIPKE_IDS: &[&str] = &[
    "fig1.M",
    "fig1.Mp",
    "ex.bisim2.M",
    "ex.bisim2.Mp",
    "ex.bisim2.Mpp",
];

pub fn model_fixture_ids() -> &'static [&'static str] {
    MODEL_IDS
}

pub fn kripke_fixture_ids() -> &'static [&'static str] {
    KRIPKE_IDS
}

pub fn fixture(id: &str) -> Result<Fixture, CorpusError> {
    if MODEL_IDS.contains(&id) {
        return Ok(Fixture::Model(fixture_model(id)));
    }
    if KRIPKE_IDS.contains(&id) {
        return Ok(Fixture::Kripke(fixture_kripke(id)));
    }
    Err(CorpusError::UnknownFixture(id.to_string()))
}

/// Builder conveniences used pervasively in fixtures and tests; panic on
/// unknown ids.
pub fn fixture_model(id: &str) -> SimplicialModel {
    let build = |agents: &[&str],
                 vertices: &[(&str, &str, &[&str])],
                 facets: &[(&str, &[&str])]|
     -> SimplicialModel {
        SimplicialModel::from_parts(
            agents.iter().map(|a| AgentId::new(*a)),
            vertices.iter().map(|(v, a, atoms)| {
                (
                    VertexId::new(*v),
                    VertexData {
                        agent: AgentId::new(*a),
                        atoms: atoms.iter().map(|s| s.to_string()).collect(),
                    },
                )
            }),
            facets
                .iter()
                .map(|(_, vs)| Facet::from_names(vs.iter().copied())),
            facets.iter().map(|(name, vs)| {
                (name.to_string(), Facet::from_names(vs.iter().copied()))
            }),
        )
        .expect("fixture must validate")
    };
    match id {
        "fig1.C" => build(
            &["a", "b", "c"],
            &[
                ("a1", "a", &["p"]),
                ("b0", "b", &[]),
                ("b0p", "b", &[]),
                ("c1", "c", &["p"]),
            ],
            &[("X", &["a1", "b0"]), ("Y", &["a1", "b0p", "c1"])],
        ),
        "fig1.Cp" => build(
            &["a", "b", "c"],
            &[("a1", "a", &["p"]), ("b0", "b", &[]), ("c1", "c", &["p"])],
            &[("Yp", &["a1", "b0", "c1"])],
        ),
        "ex.bisim.left" => build(
            &["a", "b", "c"],
            &[
                ("a0", "a", &[]),
                ("b1", "b", &["p"]),
                ("b0", "b", &[]),
                ("c1", "c", &["p"]),
            ],
            &[("X", &["a0", "b1"]), ("Y", &["a0", "b0", "c1"])],
        ),
        "ex.bisim.mid" => build(
            &["a", "b", "c"],
            &[
                ("a0", "a", &[]),
                ("b1", "b", &["p"]),
                ("b0", "b", &[]),
                ("c1", "c", &["p"]),
                ("b1z", "b", &["p"]),
            ],
            &[
                ("Xp", &["a0", "b1"]),
                ("Yp", &["a0", "b0", "c1"]),
                ("Zp", &["a0", "b1z"]),
            ],
        ),
        "ex.bisim.right" => build(
            &["a", "b", "c"],
            &[
                ("a0", "a", &[]),
                ("b1", "b", &["p"]),
                ("b0", "b", &[]),
                ("c1", "c", &["p"]),
                ("c1z", "c", &["p"]),
            ],
            &[
                ("Xpp", &["a0", "b1"]),
                ("Ypp", &["a0", "b0", "c1"]),
                ("Zpp", &["a0", "b0", "c1z"]),
            ],
        ),
        "fig4.C" => build(
            &["a", "b", "c", "d", "e"],
            &[
                ("a1", "a", &["p"]),
                ("b0", "b", &[]),
                ("c1", "c", &["p"]),
                ("d0", "d", &[]),
                ("e1", "e", &["p"]),
                ("a0", "a", &[]),
            ],
            &[
                ("X", &["a1", "b0", "c1"]),
                ("Y2", &["c1", "d0"]),
                ("Y3", &["c1", "e1"]),
                ("Y4", &["a0", "e1"]),
            ],
        ),
        // The three evaluation points used to show that no uniform
        // undefinedness formula exists for p@a & [b] p@c: a point where
        // a lone agent survives, the two-agent edge, and the three-agent
        // path on which the formula is defined.
        "prop4.single" => build(
            &["a", "b", "c"],
            &[("a1", "a", &["p"])],
            &[("X", &["a1"])],
        ),
        "prop4.edge" => build(
            &["a", "b", "c"],
            &[("a1", "a", &["p"]), ("b1", "b", &["p"])],
            &[("X", &["a1", "b1"])],
        ),
        "prop4.path" => build(
            &["a", "b", "c"],
            &[
                ("a1", "a", &["p"]),
                ("b1", "b", &["p"]),
                ("c0", "c", &[]),
            ],
            &[("X", &["a1", "b1"]), ("Z", &["b1", "c0"])],
        ),
        other => panic!("unknown model fixture `{other}`"),
    }
}

pub fn fixture_kripke(id: &str) -> PartialEpistemicModel {
    let build = |agents: &[&str],
                 states: &[(&str, &[&str], &[&str])],
                 relations: &[(&str, &[&[&str]])]|
     -> PartialEpistemicModel {
        PartialEpistemicModel::from_parts(
            agents.iter().map(|a| AgentId::new(*a)),
            states.iter().map(|(s, alive, atoms)| {
                (
                    StateId::new(*s),
                    StateData {
                        alive: alive.iter().map(|a| AgentId::new(*a)).collect(),
                        atoms: atoms
                            .iter()
                            .map(|t| {
                                let (name, agent) = t.split_once('@').unwrap();
                                LocalAtom::new(name, AgentId::new(agent))
                            })
                            .collect(),
                    },
                )
            }),
            relations.iter().map(|(a, blocks)| {
                (
                    AgentId::new(*a),
                    blocks
                        .iter()
                        .map(|b| b.iter().map(|s| StateId::new(*s)).collect())
                        .collect(),
                )
            }),
        )
        .expect("fixture must validate")
    };
    match id {
        // The dead agent c carries no atom at state s; the figure leaves
        // this open, conflating two models that differ only there.
        "fig1.M" => build(
            &["a", "b", "c"],
            &[
                ("s", &["a", "b"], &["p@a"]),
                ("t", &["a", "b", "c"], &["p@a", "p@c"]),
            ],
            &[
                ("a", &[&["s", "t"]]),
                ("b", &[&["s"], &["t"]]),
                ("c", &[&["t"]]),
            ],
        ),
        "fig1.Mp" => build(
            &["a", "b", "c"],
            &[("s", &["a", "b", "c"], &["p@a", "p@c"])],
            &[("a", &[&["s"]]), ("b", &[&["s"]]), ("c", &[&["s"]])],
        ),
        // The p@c values at dead-c states follow the stated assignment:
        // false at X and Xp, true at Zp and Xpp.
        "ex.bisim2.M" => build(
            &["a", "b", "c"],
            &[
                ("X", &["a", "b"], &["p@b"]),
                ("Y", &["a", "b", "c"], &["p@c"]),
            ],
            &[
                ("a", &[&["X", "Y"]]),
                ("b", &[&["X"], &["Y"]]),
                ("c", &[&["Y"]]),
            ],
        ),
        "ex.bisim2.Mp" => build(
            &["a", "b", "c"],
            &[
                ("Xp", &["a", "b"], &["p@b"]),
                ("Yp", &["a", "b", "c"], &["p@c"]),
                ("Zp", &["a", "b"], &["p@b", "p@c"]),
            ],
            &[
                ("a", &[&["Xp", "Yp", "Zp"]]),
                ("b", &[&["Xp"], &["Yp"], &["Zp"]]),
                ("c", &[&["Yp"]]),
            ],
        ),
        "ex.bisim2.Mpp" => build(
            &["a", "b", "c"],
            &[
                ("Xpp", &["a", "b"], &["p@b", "p@c"]),
                ("Ypp", &["a", "b", "c"], &["p@c"]),
                ("Zpp", &["a", "b", "c"], &["p@c"]),
            ],
            &[
                ("a", &[&["Xpp", "Ypp", "Zpp"]]),
                ("b", &[&["Xpp"], &["Ypp", "Zpp"]]),
                ("c", &[&["Ypp"], &["Zpp"]]),
            ],
        ),
        other => panic!("unknown kripke fixture `{other}`"),
    }
}

/// The three chain models whose only difference sits 2m+1 steps away
/// from the distinguished edge X: both branches end in an e-vertex with
/// p (`c`), the left one ends without p (`cp`), or the left e-vertex is
/// missing entirely (`cpp`). Aliases: `X`, `Y` (first left-branch edge),
/// `YR` (first right-branch edge).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FarawayFamily {
    pub c: SimplicialModel,
    pub cp: SimplicialModel,
    pub cpp: SimplicialModel,
}

enum LeftEnd {
    EWithP,
    EWithoutP,
    Missing,
}

pub fn faraway_family(m: usize) -> Result<FarawayFamily, CorpusError> {
    if m < 1 {
        return Err(CorpusError::InvalidParam);
    }
    Ok(FarawayFamily {
        c: faraway_model(m, LeftEnd::EWithP),
        cp: faraway_model(m, LeftEnd::EWithoutP),
        cpp: faraway_model(m, LeftEnd::Missing),
    })
}

fn faraway_model(m: usize, left_end: LeftEnd) -> SimplicialModel {
    let mut vertices: Vec<(String, &str, bool)> = vec![
        ("a0".to_string(), "a", false),
        ("b1".to_string(), "b", true),
    ];
    let mut facets: Vec<Vec<String>> = vec![vec!["a0".to_string(), "b1".to_string()]];
    let mut names: Vec<(String, Vec<String>)> =
        vec![("X".to_string(), facets[0].clone())];
    for side in ["L", "R"] {
        let mut prev = "b1".to_string();
        for i in 1..=m {
            let c = format!("c{side}{i}");
            let d = format!("d{side}{i}");
            vertices.push((c.clone(), "c", false));
            vertices.push((d.clone(), "d", false));
            facets.push(vec![prev.clone(), c.clone()]);
            if i == 1 {
                let alias = if side == "L" { "Y" } else { "YR" };
                names.push((alias.to_string(), facets.last().unwrap().clone()));
            }
            facets.push(vec![c.clone(), d.clone()]);
            prev = d;
        }
        let e_vertex = match (side, &left_end) {
            ("L", LeftEnd::Missing) => None,
            ("L", LeftEnd::EWithoutP) => Some(false),
            _ => Some(true),
        };
        if let Some(has_p) = e_vertex {
            let e = format!("e{side}");
            vertices.push((e.clone(), "e", has_p));
            facets.push(vec![prev, e]);
        }
    }
    SimplicialModel::from_parts(
        ["a", "b", "c", "d", "e"].map(AgentId::new),
        vertices.into_iter().map(|(v, a, has_p)| {
            (
                VertexId::new(v),
                VertexData {
                    agent: AgentId::new(a),
                    atoms: if has_p {
                        BTreeSet::from(["p".to_string()])
                    } else {
                        BTreeSet::new()
                    },
                },
            )
        }),
        facets.into_iter().map(Facet::from_names),
        names
            .into_iter()
            .map(|(n, vs)| (n, Facet::from_names(vs))),
    )
    .expect("faraway model must validate")
}

const AGENT_POOL: &[&str] = &["a", "b", "c", "d", "e", "f"];
const ATOM_POOL: &[&str] = &["p", "q", "r", "s"];

/// A valid random model, deterministic per seed. Maximality and
/// chromatic injectivity hold by construction: facets are generated over
/// agent subsets with at most one vertex per agent, then non-maximal and
/// duplicate candidates are discarded.
pub fn random_model(
    seed: u64,
    max_agents: usize,
    max_facets: usize,
    max_atoms: usize,
) -> SimplicialModel {
    random_model_impl(seed, max_agents, max_facets, max_atoms, false)
}

/// As [`random_model`] but every facet contains every agent, so every
/// agent is alive everywhere and the semantics is two-valued.
pub fn random_model_pure(
    seed: u64,
    max_agents: usize,
    max_facets: usize,
    max_atoms: usize,
) -> SimplicialModel {
    random_model_impl(seed, max_agents, max_facets, max_atoms, true)
}

fn random_model_impl(
    seed: u64,
    max_agents: usize,
    max_facets: usize,
    max_atoms: usize,
    pure: bool,
) -> SimplicialModel {
    assert!(max_agents >= 1 && max_facets >= 1 && max_atoms >= 1);
    let max_agents = max_agents.min(AGENT_POOL.len());
    let max_atoms = max_atoms.min(ATOM_POOL.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_agents = rng.gen_range(1..=max_agents);
    let n_facets = rng.gen_range(1..=max_facets);
    let atoms = &ATOM_POOL[..rng.gen_range(1..=max_atoms)];

    let mut vertices: Vec<(VertexId, VertexData)> = Vec::new();
    // Per agent, indices into `vertices` available for reuse.
    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); n_agents];
    let mut facets: Vec<Facet> = Vec::new();
    for _ in 0..n_facets {
        let mut members: Vec<usize> = (0..n_agents).collect();
        if !pure {
            members.shuffle(&mut rng);
            members.truncate(rng.gen_range(1..=n_agents));
        }
        let mut facet_vertices = Vec::new();
        for agent_idx in members {
            let reuse = !pools[agent_idx].is_empty() && rng.gen_bool(0.5);
            let vertex_idx = if reuse {
                *pools[agent_idx].choose(&mut rng).unwrap()
            } else {
                let name = format!("{}{}", AGENT_POOL[agent_idx], pools[agent_idx].len());
                let data = VertexData {
                    agent: AgentId::new(AGENT_POOL[agent_idx]),
                    atoms: atoms
                        .iter()
                        .filter(|_| rng.gen_bool(0.5))
                        .map(|s| s.to_string())
                        .collect(),
                };
                vertices.push((VertexId::new(name), data));
                pools[agent_idx].push(vertices.len() - 1);
                vertices.len() - 1
            };
            facet_vertices.push(vertices[vertex_idx].0.clone());
        }
        facets.push(Facet::new(facet_vertices));
    }
    facets.sort();
    facets.dedup();
    let maximal: Vec<Facet> = facets
        .iter()
        .filter(|f| !facets.iter().any(|g| *f != g && f.is_subset_of(g)))
        .cloned()
        .collect();
    let used: BTreeSet<&VertexId> = maximal.iter().flat_map(|f| f.vertices()).collect();
    let vertices: Vec<_> = vertices
        .into_iter()
        .filter(|(v, _)| used.contains(v))
        .collect();
    SimplicialModel::from_parts(
        (0..n_agents).map(|i| AgentId::new(AGENT_POOL[i])),
        vertices,
        maximal,
        [],
    )
    .expect("random model must validate")
}

/// A valid random partial epistemic model: the Kripke image of a random
/// simplicial model, with superfluous atoms sprinkled onto dead agents.
pub fn random_kripke(
    seed: u64,
    max_agents: usize,
    max_states: usize,
    max_atoms: usize,
) -> PartialEpistemicModel {
    let base = kappa(&random_model(seed, max_agents, max_states, max_atoms));
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e3779b97f4a7c15));
    let states: Vec<(StateId, StateData)> = base
        .states()
        .iter()
        .map(|(s, d)| {
            let mut data = d.clone();
            for a in base.agents() {
                if data.alive.contains(a) {
                    continue;
                }
                for name in &ATOM_POOL[..ATOM_POOL.len().min(max_atoms)] {
                    if rng.gen_bool(0.25) {
                        data.atoms.insert(LocalAtom::new(*name, a.clone()));
                    }
                }
            }
            (s.clone(), data)
        })
        .collect();
    PartialEpistemicModel::from_parts(
        base.agents().iter().cloned(),
        states,
        base.relations().clone(),
    )
    .expect("sprinkled atoms keep the model valid")
}

/// A random S5 model: every agent alive in every state.
pub fn random_kripke_pure(
    seed: u64,
    max_agents: usize,
    max_states: usize,
    max_atoms: usize,
) -> PartialEpistemicModel {
    kappa(&random_model_pure(seed, max_agents, max_states, max_atoms))
}

/// One expected evaluation judgment, reproduced from the worked examples.
#[derive(Clone, Copy, Debug)]
pub struct Judgment {
    pub model: &'static str,
    pub point: &'static str,
    pub formula: &'static str,
    pub expected: TruthValue,
}

/// The example-semantics table: every judgment stated alongside the
/// two introductory models.
pub fn example_judgments() -> Vec<Judgment> {
    use TruthValue::*;
    let j = |model, point, formula, expected| Judgment {
        model,
        point,
        formula,
        expected,
    };
    vec![
        j("fig1.C", "X", "p@c", Undef),
        j("fig1.C", "X", "!p@c", Undef),
        j("fig1.C", "X", "<c> p@a", Undef),
        j("fig1.C", "X", "<a> p@c", True),
        j("fig1.C", "X", "[a] p@c", True),
        j("fig1.C", "Y", "<a> !alive(c)", True),
        j("fig1.Cp", "Yp", "<a> !alive(c)", False),
        j("fig1.C", "X", "alive(a)", True),
        j("fig1.C", "X", "alive(c)", False),
        j("fig1.C", "Y", "alive(c)", True),
    ]
}

/// Every formula appearing in a worked example, used as the search space
/// for "no corpus formula satisfies the uniform undefinedness contract".
pub fn corpus_formulas() -> Vec<Formula> {
    [
        "alive(a)",
        "alive(c)",
        "p@a",
        "p@b",
        "p@c",
        "!p@c",
        "<a> p@c",
        "[a] p@c",
        "<c> p@a",
        "<a> !alive(c)",
        "p@b & <c><d> p@a & <c><e> !p@a",
        "<c><d> alive(a)",
        "<c>(alive(d) & <d> alive(a))",
        "p@a & [b] p@c",
        "alive(a) & alive(b)",
        "<b> alive(c)",
        "<b> !p@d & <c> p@d",
        "<a>(<b> !p@d & <c> p@d)",
        "<a><b> !p@d & <a><c> p@d",
        "[b][c][d] p@e",
        "p@b & !p@c",
        "[c][d] p@e",
    ]
    .iter()
    .map(|s| parse(s).unwrap())
    .collect()
}

/// The checked-in JSON serialization of a fixture, if any.
pub fn checked_in_json(id: &str) -> Option<&'static str> {
    Some(match id {
        "fig1.C" => include_str!("../fixtures/fig1.C.json"),
        "fig1.Cp" => include_str!("../fixtures/fig1.Cp.json"),
        "ex.bisim.left" => include_str!("../fixtures/ex.bisim.left.json"),
        "ex.bisim.mid" => include_str!("../fixtures/ex.bisim.mid.json"),
        "ex.bisim.right" => include_str!("../fixtures/ex.bisim.right.json"),
        "fig4.C" => include_str!("../fixtures/fig4.C.json"),
        "prop4.single" => include_str!("../fixtures/prop4.single.json"),
        "prop4.edge" => include_str!("../fixtures/prop4.edge.json"),
        "prop4.path" => include_str!("../fixtures/prop4.path.json"),
        "fig1.M" => include_str!("../fixtures/fig1.M.json"),
        "fig1.Mp" => include_str!("../fixtures/fig1.Mp.json"),
        "ex.bisim2.M" => include_str!("../fixtures/ex.bisim2.M.json"),
        "ex.bisim2.Mp" => include_str!("../fixtures/ex.bisim2.Mp.json"),
        "ex.bisim2.Mpp" => include_str!("../fixtures/ex.bisim2.Mpp.json"),
        _ => return None,
    })
}

/// JSON for any fixture id.
pub fn fixture_json(id: &str) -> Result<String, CorpusError> {
    match fixture(id)? {
        Fixture::Model(m) => Ok(m.to_json()),
        Fixture::Kripke(m) => Ok(m.to_json()),
    }
}

#[cfg(test)]
mod tests {
    use crate::semantics::eval;

    use super::*;

    #[test]
    fn all_fixtures_resolve() {
        for id in MODEL_IDS.iter().chain(KRIPKE_IDS) {
            assert!(fixture(id).is_ok(), "{id}");
        }
        assert_eq!(
            fixture("no.such"),
            Err(CorpusError::UnknownFixture("no.such".to_string()))
        );
    }

    #[test]
    fn figure_shapes() {
        let c = fixture_model("fig1.C");
        assert_eq!(c.vertices().len(), 4);
        assert_eq!(c.facets().len(), 2);
        let f4 = fixture_model("fig4.C");
        assert_eq!(f4.vertices().len(), 6);
        assert_eq!(f4.facets().len(), 4);
        let mpp = fixture_kripke("ex.bisim2.Mpp");
        assert_eq!(mpp.states().len(), 3);
        assert_eq!(mpp.relations()[&AgentId::new("b")].len(), 2);
    }

    #[test]
    fn judgments_reproduce() {
        for j in example_judgments() {
            let m = fixture_model(j.model);
            let x = m.resolve_point(j.point).unwrap();
            let phi = parse(j.formula).unwrap();
            assert_eq!(
                eval(&m, &x, &phi).unwrap(),
                j.expected,
                "{} {} {}",
                j.model,
                j.point,
                j.formula
            );
        }
    }

    #[test]
    fn faraway_family_shape() {
        assert_eq!(faraway_family(0), Err(CorpusError::InvalidParam));
        for m in 1..=3 {
            let family = faraway_family(m).unwrap();
            for model in [&family.c, &family.cp, &family.cpp] {
                // Chains of edges only: max star size 3 at the branching
                // b-vertex.
                assert_eq!(model.dimension(), 1);
                for facet in model.facets() {
                    for a in model.agents() {
                        assert!(model.star(a, facet).unwrap().len() <= 3);
                    }
                }
            }
            assert_eq!(
                family.c.vertices().len(),
                family.cp.vertices().len()
            );
            assert_eq!(
                family.c.vertices().len(),
                family.cpp.vertices().len() + 1
            );
        }
    }

    // Golden negative suite: every fixture, mutated, fails validation.
    #[test]
    fn mutated_fixtures_are_rejected() {
        for id in MODEL_IDS {
            let m = fixture_model(id);
            let facets: Vec<Facet> = m.facets().to_vec();
            // Adding a proper face of a multi-vertex facet breaks
            // maximality; duplicating a singleton facet is a duplicate.
            let bad = match facets.iter().find(|f| f.vertices().len() > 1) {
                Some(f) => Facet::new([f.vertices()[0].clone()]),
                None => facets[0].clone(),
            };
            let mutated = SimplicialModel::from_parts(
                m.agents().iter().cloned(),
                m.vertices().clone(),
                facets.into_iter().chain([bad]),
                [],
            );
            assert!(mutated.is_err(), "{id}");

            // Recoloring every vertex to one agent forces a chromatic
            // clash in any multi-vertex facet, or an orphaned agent set
            // mismatch is avoided by keeping the full agent list.
            if m.facets().iter().any(|f| f.vertices().len() > 1) {
                let one = m.agents().iter().next().unwrap().clone();
                let recolored = SimplicialModel::from_parts(
                    m.agents().iter().cloned(),
                    m.vertices().iter().map(|(v, d)| {
                        (
                            v.clone(),
                            VertexData {
                                agent: one.clone(),
                                atoms: d.atoms.clone(),
                            },
                        )
                    }),
                    m.facets().iter().cloned(),
                    [],
                );
                assert!(recolored.is_err(), "{id}");
            }
        }
    }

    #[test]
    fn random_model_soak() {
        // from_parts re-validates everything, so constructing is the test.
        for seed in 0..10_000 {
            random_model(seed, 4, 8, 2);
        }
    }

    #[test]
    fn random_models_are_deterministic_and_valid() {
        for seed in 0..200 {
            let m1 = random_model(seed, 4, 8, 2);
            let m2 = random_model(seed, 4, 8, 2);
            assert_eq!(m1, m2);
            let k = random_kripke(seed, 3, 5, 2);
            assert!(k.validate().is_empty(), "seed {seed}");
            let p = random_kripke_pure(seed, 3, 5, 2);
            for d in p.states().values() {
                assert_eq!(d.alive, p.agents().clone());
            }
        }
    }

    #[test]
    fn checked_in_json_matches() {
        for id in MODEL_IDS.iter().chain(KRIPKE_IDS) {
            let expected = checked_in_json(id).expect("fixture file exists");
            assert_eq!(fixture_json(id).unwrap(), expected, "{id}");
        }
    }

    // One-off regeneration helper for the checked-in files:
    // cargo test -p impure-simplicial regenerate_fixture_files -- --ignored
    #[test]
    #[ignore]
    fn regenerate_fixture_files() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        std::fs::create_dir_all(&dir).unwrap();
        for id in MODEL_IDS.iter().chain(KRIPKE_IDS) {
            let path = dir.join(format!("{id}.json"));
            std::fs::write(path, fixture_json(id).unwrap()).unwrap();
        }
    }
}
