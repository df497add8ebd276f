//! The transposition machine: undo any scramble with distinct swaps that
//! each involve one of two fresh outsiders.

use thiserror::Error;

use crate::machine::MachineMove;
use crate::perm::{Cycle, Element, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeelerError {
    #[error("outsider {0} already lies in the cycle")]
    OutsiderInCycle(Element),
    #[error("the two outsiders must differ")]
    SameOutsiders,
    #[error("target permutation moves outsider {0}")]
    TouchesOutsider(Element),
}

/// A chronological sequence of transpositions, each containing `x` or `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoMachinePlan {
    pub moves: Vec<Cycle>,
    pub x: Element,
    pub y: Element,
}

impl TwoMachinePlan {
    /// The plan as machine moves (two seats each).
    pub fn machine_moves(&self) -> Vec<MachineMove> {
        self.moves
            .iter()
            .map(|c| MachineMove::new(c.elements().to_vec()))
            .collect()
    }

    /// Right-to-left product; the earliest move acts first.
    pub fn product(&self) -> Permutation {
        self.moves
            .iter()
            .fold(Permutation::identity(), |acc, m| m.to_permutation().compose(&acc))
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

fn swap(a: Element, b: Element) -> Cycle {
    Cycle::transposition(a, b).expect("distinct elements")
}

/// `(x a_2)(x a_3)⋯(x a_k)` as written, leftmost first. The last entry
/// acts first.
pub fn taubar(tau: &Cycle, x: Element) -> Result<Vec<Cycle>, KeelerError> {
    if tau.contains(x) {
        return Err(KeelerError::OutsiderInCycle(x));
    }
    Ok(tau.elements()[1..].iter().map(|&a| swap(x, a)).collect())
}

/// [`taubar`] followed by `(y a_1)(y a_2)(x a_1)`, leftmost first.
///
/// Multiplying the listed factors right to left and then by `tau` gives
/// the single swap `(x y)`.
pub fn taucar(tau: &Cycle, x: Element, y: Element) -> Result<Vec<Cycle>, KeelerError> {
    if x == y {
        return Err(KeelerError::SameOutsiders);
    }
    if tau.contains(y) {
        return Err(KeelerError::OutsiderInCycle(y));
    }
    let mut out = taubar(tau, x)?;
    let (a1, a2) = (tau.elements()[0], tau.elements()[1]);
    out.extend([swap(y, a1), swap(y, a2), swap(x, a1)]);
    Ok(out)
}

/// Writes `sigma⁻¹` as distinct transpositions through outsiders
/// `x = Outsider(1)` and `y = Outsider(2)`.
///
/// The move count is `Σ(k_i + 2)` over the cycles of `sigma`, plus one
/// trailing `(x y)` when the number of cycles is odd.
pub fn solve_two_machine(sigma: &Permutation) -> Result<TwoMachinePlan, KeelerError> {
    if let Some(e) = sigma.support().into_iter().find(|e| e.is_outsider()) {
        return Err(KeelerError::TouchesOutsider(e));
    }
    let (x, y) = (Element::Outsider(1), Element::Outsider(2));
    let cycles = sigma.cycles();
    let mut moves = Vec::new();
    // Written form is (x y) τ̌_j ⋯ τ̌_1; store it reversed.
    for tau in &cycles {
        let mut block = taucar(tau, x, y)?;
        block.reverse();
        moves.extend(block);
    }
    if cycles.len() % 2 == 1 {
        moves.push(swap(x, y));
    }
    Ok(TwoMachinePlan { moves, x, y })
}
