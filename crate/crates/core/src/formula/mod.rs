//! Formula AST for the glocal epistemic language and its global-atom-free
//! fragment, with parser, printer and structural utilities.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

mod enumerate;
mod parse;

pub use enumerate::{enumerate_formulas, FormulaEnumerator};
pub use parse::{parse, parse_with_top_agent, SyntaxError};

/// An agent (process) name. Valid names match `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        AgentId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Checks the identifier shape shared by agent, atom and vertex names.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AgentId({})", self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_string())
    }
}

/// A local atom `name@agent`. The pair is the identity: `p@a` and `p@b`
/// are distinct atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LocalAtom {
    pub name: String,
    pub agent: AgentId,
}

impl LocalAtom {
    pub fn new(name: impl Into<String>, agent: impl Into<AgentId>) -> Self {
        LocalAtom {
            name: name.into(),
            agent: agent.into(),
        }
    }
}

impl fmt::Display for LocalAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.agent)
    }
}

/// A formula of the glocal language, built from the five primitive
/// constructors. Box, disjunction, implication and the constants are
/// parser sugar expanded into this core.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    /// Global atom `alive(a)`: agent `a` is alive. Always defined.
    Global(AgentId),
    /// Local atom `p@a`: undefined wherever `a` is dead.
    Local(LocalAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `<a> phi`: agent `a` considers `phi` possible.
    Diamond(AgentId, Box<Formula>),
}

impl Formula {
    pub fn global(a: impl Into<AgentId>) -> Self {
        Formula::Global(a.into())
    }

    pub fn local(name: impl Into<String>, agent: impl Into<AgentId>) -> Self {
        Formula::Local(LocalAtom::new(name, agent))
    }

    pub fn not(phi: Formula) -> Self {
        Formula::Not(Box::new(phi))
    }

    pub fn and(phi: Formula, psi: Formula) -> Self {
        Formula::And(Box::new(phi), Box::new(psi))
    }

    pub fn diamond(a: impl Into<AgentId>, phi: Formula) -> Self {
        Formula::Diamond(a.into(), Box::new(phi))
    }

    /// `[a] phi`, expanded to `!<a>!phi`.
    pub fn boxed(a: impl Into<AgentId>, phi: Formula) -> Self {
        Formula::not(Formula::diamond(a, Formula::not(phi)))
    }

    /// `phi | psi`, expanded to `!(!phi & !psi)`.
    pub fn or(phi: Formula, psi: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(phi), Formula::not(psi)))
    }

    /// `phi -> psi`, expanded to `!phi | psi`.
    pub fn implies(phi: Formula, psi: Formula) -> Self {
        Formula::or(Formula::not(phi), psi)
    }

    /// The constant `true`, fixed as `alive(a) | !alive(a)` for an explicit
    /// agent `a`.
    pub fn top(a: impl Into<AgentId>) -> Self {
        let a = a.into();
        Formula::or(Formula::Global(a.clone()), Formula::not(Formula::Global(a)))
    }

    /// The constant `false`, fixed as the negation of [`Formula::top`].
    pub fn bot(a: impl Into<AgentId>) -> Self {
        Formula::not(Formula::top(a))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Global(_) | Formula::Local(_) => 1,
            Formula::Not(p) => 1 + p.size(),
            Formula::And(p, q) => 1 + p.size() + q.size(),
            Formula::Diamond(_, p) => 1 + p.size(),
        }
    }

    /// Maximal nesting of diamonds.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Global(_) | Formula::Local(_) => 0,
            Formula::Not(p) => p.modal_depth(),
            Formula::And(p, q) => p.modal_depth().max(q.modal_depth()),
            Formula::Diamond(_, p) => 1 + p.modal_depth(),
        }
    }

    /// All agents occurring in atoms or modalities.
    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<AgentId>) {
        match self {
            Formula::Global(a) => {
                out.insert(a.clone());
            }
            Formula::Local(p) => {
                out.insert(p.agent.clone());
            }
            Formula::Not(p) => p.collect_agents(out),
            Formula::And(p, q) => {
                p.collect_agents(out);
                q.collect_agents(out);
            }
            Formula::Diamond(a, p) => {
                out.insert(a.clone());
                p.collect_agents(out);
            }
        }
    }

    /// All local atoms occurring in the formula.
    pub fn local_atoms(&self) -> BTreeSet<LocalAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<LocalAtom>) {
        match self {
            Formula::Global(_) => {}
            Formula::Local(p) => {
                out.insert(p.clone());
            }
            Formula::Not(p) => p.collect_atoms(out),
            Formula::And(p, q) => {
                p.collect_atoms(out);
                q.collect_atoms(out);
            }
            Formula::Diamond(_, p) => p.collect_atoms(out),
        }
    }

    /// A formula is in the local fragment iff it contains no global atom.
    pub fn in_local_fragment(&self) -> bool {
        match self {
            Formula::Global(_) => false,
            Formula::Local(_) => true,
            Formula::Not(p) => p.in_local_fragment(),
            Formula::And(p, q) => p.in_local_fragment() && q.in_local_fragment(),
            Formula::Diamond(_, p) => p.in_local_fragment(),
        }
    }
}

/// The two languages: the local fragment (no global atoms) and the full
/// glocal language.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fragment {
    Lminus,
    Lplus,
}

/// A finite vocabulary fixing the agent set and the local atoms available
/// for formula enumeration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vocabulary {
    pub agents: BTreeSet<AgentId>,
    pub local_atoms: BTreeSet<LocalAtom>,
}

impl Vocabulary {
    pub fn new(
        agents: impl IntoIterator<Item = AgentId>,
        local_atoms: impl IntoIterator<Item = LocalAtom>,
    ) -> Self {
        let agents: BTreeSet<_> = agents.into_iter().collect();
        let local_atoms: BTreeSet<_> = local_atoms.into_iter().collect();
        debug_assert!(local_atoms.iter().all(|p| agents.contains(&p.agent)));
        Vocabulary {
            agents,
            local_atoms,
        }
    }
}

// Printing. The canonical form uses minimal parentheses under the
// precedence ! = modalities > & > | > -> and detects the box pattern
// !<a>!phi, rendering it as [a] phi. Only And and the unary forms ever
// occur in a primitive AST, so | and -> never appear in output.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

/// Matches the derived-box pattern `!<a>!phi`.
fn as_box(phi: &Formula) -> Option<(&AgentId, &Formula)> {
    if let Formula::Not(inner) = phi {
        if let Formula::Diamond(a, body) = inner.as_ref() {
            if let Formula::Not(arg) = body.as_ref() {
                return Some((a, arg));
            }
        }
    }
    None
}

fn write_formula(phi: &Formula, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    match phi {
        Formula::Global(a) => write!(f, "alive({a})"),
        Formula::Local(p) => write!(f, "{p}"),
        Formula::And(l, r) => {
            let needs_parens = min_prec > 2;
            if needs_parens {
                f.write_str("(")?;
            }
            // & parses left-associated, so the left operand may itself be
            // a bare conjunction while the right one needs parentheses.
            write_formula(l, f, 2)?;
            f.write_str(" & ")?;
            write_formula(r, f, 3)?;
            if needs_parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        _ => {
            if let Some((a, body)) = as_box(phi) {
                write!(f, "[{a}]")?;
                write_unary_operand(body, f)
            } else {
                match phi {
                    Formula::Not(p) => {
                        f.write_str("!")?;
                        write_formula(p, f, 3)
                    }
                    Formula::Diamond(a, p) => {
                        write!(f, "<{a}>")?;
                        write_unary_operand(p, f)
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Modalities chain without a space (`<c><d> p@a`), everything else gets
/// one separating space after the modality token.
fn write_unary_operand(phi: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let chains = as_box(phi).is_some() || matches!(phi, Formula::Diamond(..));
    let parenthesized = matches!(phi, Formula::And(..));
    if !chains && !parenthesized {
        f.write_str(" ")?;
    }
    write_formula(phi, f, 3)
}
