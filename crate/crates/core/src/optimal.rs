//! Optimal plans for the 3-machine with a single outsider.
//!
//! A scramble with `n` moved insiders in `r` disjoint cycles is undone in
//! exactly `(n + r) / 2` uses, and no plan can do better: every use seats
//! two insiders, and each cycle forces one of its members to sit twice.

use thiserror::Error;

use crate::machine::{plan_product, MachineMove};
use crate::perm::{Cycle, Element, Parity, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptimalError {
    #[error("odd permutations cannot be produced on a 3-machine")]
    OddPermutation,
    #[error("target permutation moves outsider {0}")]
    TouchesOutsider(Element),
    #[error("move {0} does not seat the outsider")]
    MissingOutsider(usize),
    #[error("move {0} does not have exactly three distinct seats")]
    NotThreeCycle(usize),
    #[error("expected a cycle of {expected} length, got {got}")]
    WrongCycleLength { expected: &'static str, got: usize },
    #[error("cycles share element {0}")]
    Overlap(Element),
}

/// An optimal 3-machine plan and the cycle profile it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePlan {
    pub moves: Vec<MachineMove>,
    pub outsider: Element,
    /// Number of moved insiders.
    pub n: usize,
    /// Number of disjoint cycles.
    pub r: usize,
}

impl ThreePlan {
    pub fn product(&self) -> Permutation {
        plan_product(&self.moves).expect("solver moves never repeat seats")
    }
}

/// Total number of insider seats across a plan whose every move seats `x`.
pub fn insider_count(moves: &[MachineMove], x: Element) -> Result<usize, OptimalError> {
    moves.iter().enumerate().try_fold(0, |acc, (i, mv)| {
        if mv.len() != 3 || mv.has_repeats() {
            return Err(OptimalError::NotThreeCycle(i));
        }
        if !mv.contains(x) {
            return Err(OptimalError::MissingOutsider(i));
        }
        Ok(acc + mv.seats().iter().filter(|e| e.is_insider()).count())
    })
}

fn tri(a: Element, b: Element, x: Element) -> MachineMove {
    MachineMove::new(vec![a, b, x])
}

/// Inverse of an odd cycle `(a_1 ⋯ a_k)` in `(k + 1) / 2` moves. Written
/// out this is `(a_3 a_2 x)(a_5 a_4 x)⋯(a_k a_{k-1} x)(a_2 a_1 x)`; the
/// returned list is the same factors in chronological order.
pub fn f_construction(tau: &[Element], x: Element) -> Result<Vec<MachineMove>, OptimalError> {
    let k = tau.len();
    if k < 3 || k % 2 == 0 {
        return Err(OptimalError::WrongCycleLength { expected: "odd", got: k });
    }
    if let Some(&e) = tau.iter().find(|&&e| e == x) {
        return Err(OptimalError::Overlap(e));
    }
    let a = |i: usize| tau[i - 1];
    let mut written: Vec<MachineMove> = (2..k).step_by(2).map(|l| tri(a(l + 1), a(l), x)).collect();
    written.push(tri(a(2), a(1), x));
    written.reverse();
    Ok(written)
}

/// Inverse of a product of two disjoint even cycles `(b_1 ⋯ b_{k1})` and
/// `(c_1 ⋯ c_{k2})` in `(k1 + k2 + 2) / 2` moves, returned chronologically.
pub fn g_construction(
    tau_v: &[Element],
    tau_w: &[Element],
    x: Element,
) -> Result<Vec<MachineMove>, OptimalError> {
    for tau in [tau_v, tau_w] {
        if tau.len() < 2 || tau.len() % 2 == 1 {
            return Err(OptimalError::WrongCycleLength { expected: "even", got: tau.len() });
        }
    }
    if let Some(&e) = tau_v.iter().find(|e| tau_w.contains(e) || **e == x) {
        return Err(OptimalError::Overlap(e));
    }
    if tau_w.contains(&x) {
        return Err(OptimalError::Overlap(x));
    }
    let (k1, k2) = (tau_v.len(), tau_w.len());
    let b = |i: usize| tau_v[i - 1];
    let c = |i: usize| tau_w[i - 1];

    let mut written = vec![tri(c(1), c(k2), x)];
    written.extend((2..k2 - 1).step_by(2).map(|l| tri(c(l + 1), c(l), x)));
    written.push(tri(b(1), b(k1), x));
    written.extend((2..k1 - 1).step_by(2).map(|l| tri(b(l + 1), b(l), x)));
    written.push(tri(c(k2), b(k1), x));
    written.reverse();
    Ok(written)
}

/// `(n + r) / 2` for an even permutation with `n` moved points in `r`
/// cycles. Holds for any number of outsiders.
pub fn lower_bound(sigma: &Permutation) -> Result<usize, OptimalError> {
    if sigma.parity() == Parity::Odd {
        return Err(OptimalError::OddPermutation);
    }
    Ok((sigma.support().len() + sigma.cycle_count()) / 2)
}

/// Optimal single-outsider plan: `F` for each odd cycle, `G` for each pair
/// of even cycles (paired in canonical order).
pub fn solve_three_machine_optimal(sigma: &Permutation) -> Result<ThreePlan, OptimalError> {
    if let Some(e) = sigma.support().into_iter().find(|e| e.is_outsider()) {
        return Err(OptimalError::TouchesOutsider(e));
    }
    if sigma.parity() == Parity::Odd {
        return Err(OptimalError::OddPermutation);
    }
    let x = Element::Outsider(1);
    let cycles = sigma.cycles();
    let (odd, even): (Vec<&Cycle>, Vec<&Cycle>) = cycles.iter().partition(|c| c.len() % 2 == 1);
    let mut moves = Vec::new();
    for c in odd {
        moves.extend(f_construction(c.elements(), x)?);
    }
    for pair in even.chunks(2) {
        let [v, w] = pair else {
            unreachable!("even permutations have an even number of even-length cycles")
        };
        moves.extend(g_construction(v.elements(), w.elements(), x)?);
    }
    Ok(ThreePlan {
        moves,
        outsider: x,
        n: sigma.support().len(),
        r: cycles.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Element::{Insider as A, Outsider as X};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn insider_counts() {
        assert_eq!(insider_count(&[tri(A(1), A(2), X(1))], X(1)).unwrap(), 2);
        let f = f_construction(&[A(1), A(2), A(3)], X(1)).unwrap();
        assert_eq!(insider_count(&f, X(1)).unwrap(), 4);
        assert_eq!(insider_count(&[], X(1)).unwrap(), 0);
        assert_eq!(
            insider_count(&[tri(A(1), A(2), X(1)), tri(A(1), A(2), A(3))], X(1)),
            Err(OptimalError::MissingOutsider(1))
        );
    }

    #[test]
    fn f_examples() {
        let x = X(1);
        let f = f_construction(&[A(1), A(2), A(3)], x).unwrap();
        assert_eq!(f, vec![tri(A(2), A(1), x), tri(A(3), A(2), x)]);
        assert_eq!(plan_product(&f).unwrap(), p("(1 3 2)"));

        let t5: Vec<_> = (1..=5).map(A).collect();
        let f = f_construction(&t5, x).unwrap();
        assert_eq!(f.len(), 3);
        let prod = plan_product(&f).unwrap();
        assert!(prod.compose(&p("(1 2 3 4 5)")).is_identity());

        assert!(f_construction(&[A(1), A(2)], x).is_err());
    }

    #[test]
    fn g_examples() {
        let x = X(1);
        let g = g_construction(&[A(1), A(2)], &[A(3), A(4)], x).unwrap();
        assert_eq!(g, vec![tri(A(4), A(2), x), tri(A(1), A(2), x), tri(A(3), A(4), x)]);
        assert_eq!(plan_product(&g).unwrap(), p("(1 2)(3 4)"));

        let v: Vec<_> = (1..=4).map(A).collect();
        let g = g_construction(&v, &[A(5), A(6)], x).unwrap();
        assert_eq!(g.len(), 4);
        assert!(plan_product(&g).unwrap().compose(&p("(1 2 3 4)(5 6)")).is_identity());

        assert!(g_construction(&[A(1), A(2), A(3)], &[A(4), A(5)], x).is_err());
        assert_eq!(
            g_construction(&[A(1), A(2)], &[A(2), A(3)], x),
            Err(OptimalError::Overlap(A(2)))
        );
    }

    #[test]
    fn solver_counts() {
        assert_eq!(solve_three_machine_optimal(&p("(1 2 3)")).unwrap().moves.len(), 2);
        assert_eq!(solve_three_machine_optimal(&p("(1 2)(3 4)")).unwrap().moves.len(), 3);
        let sigma = p("(1 2 3)(4 5 6 7)(8 9)");
        let plan = solve_three_machine_optimal(&sigma).unwrap();
        assert_eq!((plan.n, plan.r), (9, 3));
        assert_eq!(plan.moves.len(), 6);
        assert_eq!(plan.product(), sigma.inverse());
        assert_eq!(
            solve_three_machine_optimal(&p("(1 2)")),
            Err(OptimalError::OddPermutation)
        );
    }

    #[test]
    fn bounds() {
        assert_eq!(lower_bound(&p("(1 2 3)")).unwrap(), 2);
        assert_eq!(lower_bound(&p("(1 2)(3 4)")).unwrap(), 3);
        assert_eq!(lower_bound(&Permutation::identity()).unwrap(), 0);
        assert_eq!(lower_bound(&p("(1 2)")), Err(OptimalError::OddPermutation));
    }

    #[test]
    fn printed_three_cycle_is_not_the_claimed_product() {
        // (3 1 x)(2 3 x)(1 2 x) composes to the identity, not to (1 2 3).
        let written = [p("(3 1 x1)"), p("(2 3 x1)"), p("(1 2 x1)")];
        assert!(Permutation::product(&written).is_identity());
    }
}
