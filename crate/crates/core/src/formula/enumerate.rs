//! Exhaustive, canonicalized formula enumeration used as a brute-force
//! oracle for modal-equivalence checks and property tests.

use super::{Formula, Fragment, Vocabulary};

/// Enumerates every formula of the fragment over the vocabulary with
/// `size() <= max_size` and `modal_depth() <= max_modal_depth`, modulo the
/// canonical form: no double negation, conjunctions right-nested with the
/// flattened conjunct list sorted. The order is deterministic: by size,
/// then negations, diamonds (by agent), conjunctions (by left size).
pub fn enumerate_formulas(
    vocab: &Vocabulary,
    max_modal_depth: usize,
    max_size: usize,
    fragment: Fragment,
) -> FormulaEnumerator {
    FormulaEnumerator {
        vocab: vocab.clone(),
        max_modal_depth,
        max_size,
        fragment,
        layers: Vec::new(),
        layer: 0,
        index: 0,
    }
}

pub struct FormulaEnumerator {
    vocab: Vocabulary,
    max_modal_depth: usize,
    max_size: usize,
    fragment: Fragment,
    /// layers[n] holds all canonical formulas of size n + 1.
    layers: Vec<Vec<Formula>>,
    layer: usize,
    index: usize,
}

/// The head of the flattened conjunct list.
fn conj_head(phi: &Formula) -> &Formula {
    match phi {
        Formula::And(l, _) => l,
        other => other,
    }
}

impl FormulaEnumerator {
    fn build_layer(&mut self, size: usize) {
        debug_assert_eq!(self.layers.len() + 1, size);
        let mut out = Vec::new();
        if size == 1 {
            if self.fragment == Fragment::Lplus {
                out.extend(self.vocab.agents.iter().cloned().map(Formula::Global));
            }
            out.extend(self.vocab.local_atoms.iter().cloned().map(Formula::Local));
        } else {
            for phi in &self.layers[size - 2] {
                if !matches!(phi, Formula::Not(_)) {
                    out.push(Formula::not(phi.clone()));
                }
            }
            if self.max_modal_depth > 0 {
                for a in &self.vocab.agents {
                    for phi in &self.layers[size - 2] {
                        if phi.modal_depth() < self.max_modal_depth {
                            out.push(Formula::diamond(a.clone(), phi.clone()));
                        }
                    }
                }
            }
            for left_size in 1..size - 1 {
                let right_size = size - 1 - left_size;
                for l in &self.layers[left_size - 1] {
                    if matches!(l, Formula::And(..)) {
                        continue;
                    }
                    for r in &self.layers[right_size - 1] {
                        if l <= conj_head(r) {
                            out.push(Formula::and(l.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        self.layers.push(out);
    }
}

impl Iterator for FormulaEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if self.layer >= self.max_size {
                return None;
            }
            if self.layers.len() == self.layer {
                self.build_layer(self.layer + 1);
            }
            if self.index < self.layers[self.layer].len() {
                let phi = self.layers[self.layer][self.index].clone();
                self.index += 1;
                return Some(phi);
            }
            self.layer += 1;
            self.index = 0;
        }
    }
}
