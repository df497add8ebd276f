//! Plans of forgetful and retentive swaps that undo shifts and finitary
//! permutations.

use std::collections::{BTreeMap, BTreeSet};

use super::{compose_all, CarrierPoint, InfiniteError, PointSet, StreamId, SwapClassification, Tail, TailMap};
use crate::perm::{Element, Permutation};

/// `a_n ↦ a_{n+1}` on the whole stream.
pub fn forward_shift(stream: StreamId) -> TailMap {
    TailMap::shift(stream, 1)
}

fn check_outsider(z: &CarrierPoint) -> Result<(), InfiniteError> {
    match z {
        CarrierPoint::Named(_) => Ok(()),
        CarrierPoint::Stream { .. } => Err(InfiniteError::OutsiderOnStream(z.clone())),
    }
}

/// Stream indices outside `excluded`, in increasing order, up to and
/// including the first one past every excluded index.
fn free_prefix(excluded: &BTreeSet<u64>) -> (Vec<u64>, u64) {
    let top = excluded.iter().max().map_or(1, |m| m + 1);
    let free = (1..=top).filter(|i| !excluded.contains(i)).collect();
    (free, top)
}

/// `(head… b_1 b_2 ⋯)` where the `b_j` are the indices of `stream` not in
/// `excluded`, increasing.
fn forward_chain(
    stream: StreamId,
    head: &[CarrierPoint],
    excluded: &BTreeSet<u64>,
) -> Result<TailMap, InfiniteError> {
    let (free, top) = free_prefix(excluded);
    let chain: Vec<CarrierPoint> = head
        .iter()
        .cloned()
        .chain(free.iter().map(|&i| CarrierPoint::stream(stream, i)))
        .collect();
    let exceptions = chain.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    TailMap::new(exceptions, BTreeMap::from([(stream, Tail { threshold: top, delta: 1 })]))
}

/// `(⋯ b_2 b_1 head…)`, the `b_j` as in [`forward_chain`].
fn backward_chain(
    stream: StreamId,
    head: &[CarrierPoint],
    excluded: &BTreeSet<u64>,
) -> Result<TailMap, InfiniteError> {
    let (free, top) = free_prefix(excluded);
    let chain: Vec<CarrierPoint> = free
        .iter()
        .rev()
        .map(|&i| CarrierPoint::stream(stream, i))
        .chain(head.iter().cloned())
        .collect();
    let exceptions = chain.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    TailMap::new(exceptions, BTreeMap::from([(stream, Tail { threshold: top + 1, delta: -1 })]))
}

/// Three swaps, retentive then forgetful then retentive, undoing
/// [`forward_shift`] with the help of one outsider `z`.
pub fn invert_shift_three_step(stream: StreamId, z: &CarrierPoint) -> Result<[TailMap; 3], InfiniteError> {
    check_outsider(z)?;
    let a = |i| CarrierPoint::stream(stream, i);
    let one_two = BTreeSet::from([1, 2]);
    Ok([
        backward_chain(stream, &[z.clone(), a(2), a(1)], &one_two)?,
        forward_chain(stream, std::slice::from_ref(z), &BTreeSet::from([1]))?,
        backward_chain(stream, std::slice::from_ref(z), &one_two)?,
    ])
}

/// The three-step inverse applied to each stream in turn; one shared outsider.
pub fn invert_multi_shift(streams: &[StreamId], z: &CarrierPoint) -> Result<Vec<TailMap>, InfiniteError> {
    check_outsider(z)?;
    let mut seen = BTreeSet::new();
    let mut plan = Vec::with_capacity(3 * streams.len());
    for &s in streams {
        if !seen.insert(s) {
            return Err(InfiniteError::OverlappingStreams(s));
        }
        plan.extend(invert_shift_three_step(s, z)?);
    }
    Ok(plan)
}

/// The cycle `(a_1 ⋯ a_n)` on the first `n` points of `stream` as a
/// forgetful swap followed by a retentive one.
pub fn cycle_as_two_swaps(stream: StreamId, n: u64) -> Result<[TailMap; 2], InfiniteError> {
    if n == 0 {
        return Err(InfiniteError::InvalidCycle("a cycle needs at least one point"));
    }
    let excluded = (1..=n).collect();
    Ok([
        forward_shift(stream),
        backward_chain(stream, &[CarrierPoint::stream(stream, 1)], &excluded)?,
    ])
}

/// The inverse of the cycle `(a_{c_1} a_{c_2} ⋯ a_{c_k})` as two swaps
/// through `z`: `(a_{c_1} a_{c_k} ⋯ a_{c_2} z b_1 b_2 ⋯)` and then
/// `(⋯ b_2 b_1 z a_{c_1})`, where the `b_j` are the untouched indices.
pub fn sigma_star(stream: StreamId, cycle: &[u64], z: &CarrierPoint) -> Result<[TailMap; 2], InfiniteError> {
    check_outsider(z)?;
    if cycle.len() < 2 {
        return Err(InfiniteError::InvalidCycle("a cycle needs at least two points"));
    }
    if cycle.contains(&0) {
        return Err(InfiniteError::ZeroIndex);
    }
    let excluded: BTreeSet<u64> = cycle.iter().copied().collect();
    if excluded.len() != cycle.len() {
        return Err(InfiniteError::InvalidCycle("repeated point"));
    }
    let a = |i| CarrierPoint::stream(stream, i);
    let mut head: Vec<CarrierPoint> = vec![a(cycle[0])];
    head.extend(cycle[1..].iter().rev().map(|&i| a(i)));
    head.push(z.clone());
    Ok([
        forward_chain(stream, &head, &excluded)?,
        backward_chain(stream, &[z.clone(), a(cycle[0])], &excluded)?,
    ])
}

/// Two swaps undoing any finitary permutation of `stream`, insider `a_i`
/// standing for stream index `i`. The identity needs no swaps.
pub fn invert_finitary_two_step(
    sigma: &Permutation,
    stream: StreamId,
    z: &CarrierPoint,
) -> Result<Vec<TailMap>, InfiniteError> {
    check_outsider(z)?;
    if let Some(e) = sigma.support().into_iter().find(|e| e.is_outsider()) {
        return Err(InfiniteError::NonStreamPoint(e));
    }
    if sigma.is_identity() {
        return Ok(Vec::new());
    }
    let inv = sigma.inverse();
    let point = |e: Element| CarrierPoint::stream(stream, e.index() as u64);
    let excluded: BTreeSet<u64> = sigma.support().iter().map(|e| e.index() as u64).collect();

    let mut forward = Vec::new();
    let mut firsts = Vec::new();
    for (i, cycle) in sigma.cycles().iter().enumerate() {
        let leader = cycle.leader();
        let mut e = if i == 0 { leader } else { inv.apply(leader) };
        firsts.push(point(e));
        for _ in 0..cycle.len() {
            forward.push(point(e));
            e = inv.apply(e);
        }
        if i == 0 {
            forward.push(z.clone());
        }
    }
    let mut backward: Vec<CarrierPoint> = firsts[1..].iter().rev().cloned().collect();
    backward.push(z.clone());
    backward.push(firsts[0].clone());

    Ok(vec![
        forward_chain(stream, &forward, &excluded)?,
        backward_chain(stream, &backward, &excluded)?,
    ])
}

/// What one swap of a plan looks like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSummary {
    pub classification: SwapClassification,
    pub domain: PointSet,
    pub participants: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfiniteReport {
    pub steps: Vec<StepSummary>,
    pub composite: TailMap,
    pub matches_target: bool,
    pub participants_distinct: bool,
    pub domains_distinct: bool,
}

impl InfiniteReport {
    pub fn is_clean(&self) -> bool {
        self.matches_target && self.participants_distinct
    }
}

fn pairwise_distinct<T: PartialEq>(items: &[T]) -> bool {
    items
        .iter()
        .enumerate()
        .all(|(i, a)| items[i + 1..].iter().all(|b| a != b))
}

/// Composes a chronological plan, compares it with `target` and reports
/// each swap's classification, domain and participants.
pub fn verify_infinite_plan(plan: &[TailMap], target: &TailMap) -> InfiniteReport {
    let steps: Vec<StepSummary> = plan
        .iter()
        .map(|f| StepSummary {
            classification: f.classify(),
            domain: f.domain(),
            participants: f.participants(),
        })
        .collect();
    let composite = compose_all(plan);
    let participants: Vec<_> = steps.iter().map(|s| &s.participants).collect();
    let domains: Vec<_> = steps.iter().map(|s| &s.domain).collect();
    InfiniteReport {
        matches_target: &composite == target,
        participants_distinct: pairwise_distinct(&participants),
        domains_distinct: pairwise_distinct(&domains),
        composite,
        steps,
    }
}
