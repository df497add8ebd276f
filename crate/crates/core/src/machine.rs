//! Machines of size `m >= 3`: every use is an `m`-cycle, no set of `m`
//! people may sit down together twice, and every use seats an outsider.
//!
//! All constructions here return moves in chronological order. The plan
//! product is the right-to-left product, so the first move acts first.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::perm::{Element, Parity, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("machine size must be at least {min}, got {got}")]
    InvalidMachineSize { min: usize, got: usize },
    #[error("an odd permutation cannot be produced by a machine of odd size {0}")]
    NotInSubgroup(usize),
    #[error("target permutation moves outsider {0}")]
    TouchesOutsider(Element),
    #[error("expected a cycle of length {expected}, got length {got}")]
    WrongCycleLength { expected: &'static str, got: usize },
    #[error("outsider pool has {found} elements, expected {expected}")]
    WrongPoolSize { expected: usize, found: usize },
    #[error("element {0} appears both in the pool and in the cycle")]
    PoolOverlap(Element),
    #[error("the two cycles share element {0}")]
    OverlappingCycles(Element),
    #[error("machine size {0} has the wrong parity for this construction")]
    WrongParity(usize),
    #[error("need {needed} elements, got {got}")]
    InsufficientElements { needed: usize, got: usize },
}

/// One machine use: the person in seat `i` sends their mind to seat `i+1`,
/// and the last seat sends to the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineMove {
    seats: Vec<Element>,
}

impl MachineMove {
    pub fn new(seats: Vec<Element>) -> Self {
        MachineMove { seats }
    }

    pub fn seats(&self) -> &[Element] {
        &self.seats
    }

    pub fn len(&self) -> usize {
        self.seats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seats.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Element> {
        self.seats.iter().copied().collect()
    }

    pub fn has_repeats(&self) -> bool {
        self.support().len() != self.seats.len()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.seats.contains(&e)
    }

    pub fn contains_outsider(&self) -> bool {
        self.seats.iter().any(|e| e.is_outsider())
    }

    /// The induced cycle, or `None` when a seat is repeated.
    pub fn permutation(&self) -> Option<Permutation> {
        let n = self.seats.len();
        Permutation::from_pairs((0..n).map(|i| (self.seats[i], self.seats[(i + 1) % n])))
    }
}

impl fmt::Display for MachineMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::perm::write_cycle(f, &self.seats)
    }
}

/// Right-to-left product of a chronological plan, or `None` if some move
/// repeats a seat.
pub fn plan_product(moves: &[MachineMove]) -> Option<Permutation> {
    moves.iter().try_fold(Permutation::identity(), |acc, m| {
        Some(m.permutation()?.compose(&acc))
    })
}

/// A solution for an `m`-machine together with the outsiders it may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPlan {
    pub m: usize,
    pub moves: Vec<MachineMove>,
    pub outsider_pool: Vec<Element>,
}

impl MPlan {
    pub fn product(&self) -> Permutation {
        plan_product(&self.moves).expect("solver moves never repeat seats")
    }
}

/// Number of outsiders the general construction needs: `m - 2` for odd
/// `m`, `3(m/2 - 1)` for even `m`.
pub fn outsider_pool_size(m: usize) -> usize {
    if m % 2 == 1 {
        m - 2
    } else {
        3 * (m / 2 - 1)
    }
}

/// Whether `sigma` lies in the group generated by `m`-cycles: the even
/// permutations when `m` is odd, everything when `m` is even.
pub fn membership_check(sigma: &Permutation, m: usize) -> bool {
    m % 2 == 0 || sigma.parity() == Parity::Even
}

fn check_pool(pool: &[Element], expected: usize, avoid: &[Element]) -> Result<(), MachineError> {
    if pool.len() != expected {
        return Err(MachineError::WrongPoolSize { expected, found: pool.len() });
    }
    if let Some(&e) = pool.iter().find(|e| avoid.contains(e)) {
        return Err(MachineError::PoolOverlap(e));
    }
    Ok(())
}

fn three_cycle_moves(a1: Element, a2: Element, a3: Element, pool: &[Element]) -> [MachineMove; 2] {
    let mut first = vec![a3, a2];
    first.extend(pool.iter().rev());
    let mut second = vec![a1, a3];
    second.extend(pool.iter());
    [MachineMove::new(first), MachineMove::new(second)]
}

/// Inverts the 3-cycle written `(a_1 a_2 a_3)` with two `m`-cycles:
/// `(a_3 a_2 x_{m-2} ⋯ x_1)` then `(a_1 a_3 x_1 ⋯ x_{m-2})`.
///
/// The two moves share the pool but not the insider pair, so their seat
/// sets differ. Which pair is left out depends on how `tau` is written.
pub fn invert_three_cycle(
    tau: &[Element],
    pool: &[Element],
    m: usize,
) -> Result<[MachineMove; 2], MachineError> {
    if m < 3 {
        return Err(MachineError::InvalidMachineSize { min: 3, got: m });
    }
    if tau.len() != 3 {
        return Err(MachineError::WrongCycleLength { expected: "3", got: tau.len() });
    }
    check_pool(pool, m - 2, tau)?;
    Ok(three_cycle_moves(tau[0], tau[1], tau[2], pool))
}

/// Moves whose product is the 3-cycle `(c1 c2 c3)` itself.
fn produce_three_cycle(c1: Element, c2: Element, c3: Element, pool: &[Element]) -> [MachineMove; 2] {
    three_cycle_moves(c1, c3, c2, pool)
}

fn odd_cycle_moves(tau: &[Element], pool: &[Element], out: &mut Vec<MachineMove>) {
    // (a1 ⋯ ak) = (a1 a2 a3)(a3 a4 a5)⋯(a_{k-2} a_{k-1} a_k); the leftmost
    // factor's inverse has to act first.
    for start in (0..tau.len().saturating_sub(2)).step_by(2) {
        out.extend(three_cycle_moves(tau[start], tau[start + 1], tau[start + 2], pool));
    }
}

fn check_distinct(tau: &[Element]) -> Result<(), MachineError> {
    let mut seen = BTreeSet::new();
    for &e in tau {
        if !seen.insert(e) {
            return Err(MachineError::OverlappingCycles(e));
        }
    }
    Ok(())
}

/// Inverts an odd-length cycle (written order) through its chain of
/// overlapping 3-cycles; emits `k - 1` moves.
pub fn invert_odd_cycle(
    tau: &[Element],
    pool: &[Element],
    m: usize,
) -> Result<Vec<MachineMove>, MachineError> {
    if m < 3 {
        return Err(MachineError::InvalidMachineSize { min: 3, got: m });
    }
    if tau.len() < 3 || tau.len() % 2 == 0 {
        return Err(MachineError::WrongCycleLength { expected: "odd and at least 3", got: tau.len() });
    }
    check_distinct(tau)?;
    check_pool(pool, m - 2, tau)?;
    let mut out = Vec::with_capacity(tau.len() - 1);
    odd_cycle_moves(tau, pool, &mut out);
    Ok(out)
}

/// Inverts the product of two disjoint even-length cycles on a machine of
/// odd size.
///
/// Each cycle splits as an odd prefix times its final transposition. The
/// prefixes go through [`invert_odd_cycle`]; the two transpositions are
/// undone together as `(a_k b_l b_{l-1})(a_{k-1} b_{l-1} a_k)`, each of
/// those 3-cycles produced by two `m`-cycles.
pub fn invert_even_pair_odd_m(
    tau_i: &[Element],
    tau_j: &[Element],
    pool: &[Element],
    m: usize,
) -> Result<Vec<MachineMove>, MachineError> {
    if m < 3 || m % 2 == 0 {
        return Err(MachineError::WrongParity(m));
    }
    for tau in [tau_i, tau_j] {
        if tau.len() < 2 || tau.len() % 2 == 1 {
            return Err(MachineError::WrongCycleLength { expected: "even", got: tau.len() });
        }
    }
    let both: Vec<Element> = tau_i.iter().chain(tau_j).copied().collect();
    check_distinct(&both)?;
    check_pool(pool, m - 2, &both)?;

    let (ki, kj) = (tau_i.len(), tau_j.len());
    let mut out = Vec::with_capacity(ki + kj);
    odd_cycle_moves(&tau_i[..ki - 1], pool, &mut out);
    odd_cycle_moves(&tau_j[..kj - 1], pool, &mut out);
    let (a_prev, a_last) = (tau_i[ki - 2], tau_i[ki - 1]);
    let (b_prev, b_last) = (tau_j[kj - 2], tau_j[kj - 1]);
    out.extend(produce_three_cycle(a_prev, b_prev, a_last, pool));
    out.extend(produce_three_cycle(a_last, b_last, b_prev, pool));
    Ok(out)
}

/// Three `m`-cycles undoing the swap `(a_1 a_2)` on an even-size machine:
/// `([w] a_1 [y] a_2)`, `(a_1 [w̄] a_2 [z])`, `(a_1 [z̄] [ȳ] a_2)` in that
/// order, where a bar reverses a pool.
pub fn invert_transposition_even_m(
    a1: Element,
    a2: Element,
    w: &[Element],
    y: &[Element],
    z: &[Element],
    m: usize,
) -> Result<[MachineMove; 3], MachineError> {
    if m < 4 || m % 2 == 1 {
        return Err(MachineError::WrongParity(m));
    }
    let h = m / 2 - 1;
    let pair = [a1, a2];
    for pool in [w, y, z] {
        check_pool(pool, h, &pair)?;
    }
    let all: Vec<Element> = w.iter().chain(y).chain(z).chain(&pair).copied().collect();
    check_distinct(&all)?;

    let mut first: Vec<Element> = w.to_vec();
    first.push(a1);
    first.extend(y);
    first.push(a2);

    let mut second = vec![a1];
    second.extend(w.iter().rev());
    second.push(a2);
    second.extend(z);

    let mut third = vec![a1];
    third.extend(z.iter().rev());
    third.extend(y.iter().rev());
    third.push(a2);

    Ok([MachineMove::new(first), MachineMove::new(second), MachineMove::new(third)])
}

/// Checks the two products behind "even machines generate every swap".
///
/// `elements` is `[y, x, a_1, …, a_{m-2}]`. Verifies
/// `(y a_1 x a_2 ⋯ a_{m-2})(y x a_1 ⋯ a_{m-2}) = (y a_2 a_4 ⋯ a_{m-2} a_1 a_3 ⋯ a_{m-3})`
/// and that multiplying that `(m-1)`-cycle on the left by
/// `(x y a_{m-3} ⋯ a_3 a_1 a_{m-2} ⋯ a_4 a_2)` leaves `(x y)`.
pub fn generator_identity_check(m: usize, elements: &[Element]) -> Result<bool, MachineError> {
    if m < 4 || m % 2 == 1 {
        return Err(MachineError::WrongParity(m));
    }
    if elements.len() < m {
        return Err(MachineError::InsufficientElements { needed: m, got: elements.len() });
    }
    let elements = &elements[..m];
    check_distinct(elements)?;
    let (y, x, a) = (elements[0], elements[1], &elements[2..]);
    // a[i] is a_{i+1}
    let odds: Vec<Element> = a.iter().step_by(2).copied().collect();
    let evens: Vec<Element> = a.iter().skip(1).step_by(2).copied().collect();

    let cyc = |seats: Vec<Element>| MachineMove::new(seats).permutation().expect("distinct seats");

    let mut first = vec![y, a[0], x];
    first.extend(&a[1..]);
    let mut second = vec![y, x];
    second.extend(a);
    let mut long = vec![y];
    long.extend(&evens);
    long.extend(&odds);
    let mut closing = vec![x, y];
    closing.extend(odds.iter().rev());
    closing.extend(evens.iter().rev());

    let long = cyc(long);
    let lhs = cyc(first).compose(&cyc(second));
    let swap = cyc(vec![x, y]);
    Ok(lhs == long && cyc(closing).compose(&long) == swap)
}

/// Writes `sigma⁻¹` as `m`-cycles on pairwise distinct seat sets, each
/// seating at least one of `d` outsiders (see [`outsider_pool_size`]).
pub fn solve_m_machine(sigma: &Permutation, m: usize) -> Result<MPlan, MachineError> {
    if m < 3 {
        return Err(MachineError::InvalidMachineSize { min: 3, got: m });
    }
    if let Some(e) = sigma.support().into_iter().find(|e| e.is_outsider()) {
        return Err(MachineError::TouchesOutsider(e));
    }
    if !membership_check(sigma, m) {
        return Err(MachineError::NotInSubgroup(m));
    }
    let d = outsider_pool_size(m);
    let pool: Vec<Element> = (1..=d).map(Element::Outsider).collect();
    let three_pool = &pool[..m - 2];
    let cycles = sigma.cycles();
    let mut moves = Vec::new();

    if m % 2 == 1 {
        let mut evens = Vec::new();
        for c in &cycles {
            if c.len() % 2 == 1 {
                odd_cycle_moves(c.elements(), three_pool, &mut moves);
            } else {
                evens.push(c);
            }
        }
        for pair in evens.chunks(2) {
            let [ci, cj] = pair else {
                unreachable!("even permutations have an even number of even-length cycles")
            };
            moves.extend(invert_even_pair_odd_m(ci.elements(), cj.elements(), three_pool, m)?);
        }
    } else {
        let h = m / 2 - 1;
        let (w, y, z) = (&pool[..h], &pool[h..2 * h], &pool[2 * h..]);
        for c in &cycles {
            let seats = c.elements();
            let k = seats.len();
            if k % 2 == 1 {
                odd_cycle_moves(seats, three_pool, &mut moves);
            } else {
                // (a1 ⋯ ak) = (a1 ⋯ a_{k-1})(a_{k-1} a_k)
                odd_cycle_moves(&seats[..k - 1], three_pool, &mut moves);
                moves.extend(invert_transposition_even_m(seats[k - 2], seats[k - 1], w, y, z, m)?);
            }
        }
    }
    Ok(MPlan { m, moves, outsider_pool: pool })
}
