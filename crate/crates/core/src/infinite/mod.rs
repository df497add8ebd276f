//! The countably infinite machine.
//!
//! People are points of one or more infinite streams `a1, a2, …` plus a
//! few named outsiders such as `z`. A single machine use ("swap") is a
//! [`TailMap`]: a finite table of exceptions plus, per stream, an eventual
//! shift `n ↦ n + delta`. Anyone not seated on the machine keeps their
//! mind; a seated body that no mind leaves is undefined under the map.

mod constructions;
mod notation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use constructions::{
    cycle_as_two_swaps, forward_shift, invert_finitary_two_step, invert_multi_shift,
    invert_shift_three_step, sigma_star, verify_infinite_plan, InfiniteReport, StepSummary,
};
pub use notation::{parse_swaps, render, render_steps, DEFAULT_HORIZON};

pub type StreamId = u32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CarrierPoint {
    Stream { stream: StreamId, index: u64 },
    Named(String),
}

impl CarrierPoint {
    pub fn stream(stream: StreamId, index: u64) -> Self {
        CarrierPoint::Stream { stream, index }
    }

    pub fn named(label: impl Into<String>) -> Self {
        CarrierPoint::Named(label.into())
    }

    fn stream_parts(&self) -> Option<(StreamId, u64)> {
        match *self {
            CarrierPoint::Stream { stream, index } => Some((stream, index)),
            CarrierPoint::Named(_) => None,
        }
    }
}

const STREAM_LETTERS: &[u8] = b"abcdefghijklmnopqrstuvw";

impl fmt::Display for CarrierPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CarrierPoint::Stream { stream, index } => match STREAM_LETTERS.get(*stream as usize) {
                Some(&c) => write!(f, "{}{index}", c as char),
                None => write!(f, "s{stream}_{index}"),
            },
            CarrierPoint::Named(label) => f.write_str(label),
        }
    }
}

/// Eventual behaviour on one stream: `n ↦ n + delta` for every `n >= threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tail {
    pub threshold: u64,
    pub delta: i64,
}

impl Tail {
    fn covers(&self, index: u64) -> bool {
        index >= self.threshold
    }

    fn image_start(&self) -> u64 {
        (self.threshold as i64 + self.delta) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfiniteError {
    #[error("stream indices start at 1")]
    ZeroIndex,
    #[error("tail on stream {stream} would map below index 1")]
    TailUnderflow { stream: StreamId },
    #[error("two points map to {0}")]
    NotInjective(CarrierPoint),
    #[error("exception at {0} lies inside its stream's tail")]
    ExceptionInTail(CarrierPoint),
    #[error("exception image {0} collides with a tail image")]
    ImageInTail(CarrierPoint),
    #[error("{0} is already a participant")]
    AlreadyParticipant(CarrierPoint),
    #[error("outsider {0} must be a named point off every stream")]
    OutsiderOnStream(CarrierPoint),
    #[error("stream {0} listed twice")]
    OverlappingStreams(StreamId),
    #[error("invalid cycle: {0}")]
    InvalidCycle(&'static str),
    #[error("permutation moves {0}, which is not a stream point")]
    NonStreamPoint(crate::perm::Element),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Membership on one stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StreamSet {
    /// Exactly these indices.
    Finite(BTreeSet<u64>),
    /// Every index except these.
    Cofinite(BTreeSet<u64>),
}

/// A subset of the carrier that is finite or cofinite on each stream.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PointSet {
    pub streams: BTreeMap<StreamId, StreamSet>,
    pub named: BTreeSet<String>,
}

impl PointSet {
    pub fn contains(&self, p: &CarrierPoint) -> bool {
        match p {
            CarrierPoint::Named(label) => self.named.contains(label),
            CarrierPoint::Stream { stream, index } => match self.streams.get(stream) {
                None => false,
                Some(StreamSet::Finite(s)) => s.contains(index),
                Some(StreamSet::Cofinite(s)) => !s.contains(index),
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty() && self.named.is_empty()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &BTreeSet<u64>, s: StreamId| {
            set.iter()
                .map(|&i| CarrierPoint::stream(s, i).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut parts = Vec::new();
        for (&s, set) in &self.streams {
            let name = CarrierPoint::stream(s, 1).to_string();
            let name = name.trim_end_matches('1');
            parts.push(match set {
                StreamSet::Cofinite(ex) if ex.is_empty() => format!("{name}*"),
                StreamSet::Cofinite(ex) => format!("{name}* \\ {{{}}}", list(ex, s)),
                StreamSet::Finite(inc) => format!("{{{}}}", list(inc, s)),
            });
        }
        if !self.named.is_empty() {
            parts.push(format!("{{{}}}", self.named.iter().cloned().collect::<Vec<_>>().join(", ")));
        }
        if parts.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&parts.join(" ∪ "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapClassification {
    /// Every participating mind moves and some participating body ends up empty.
    Forgetful,
    /// Every participating body receives a mind.
    Retentive,
    Neither,
}

/// What a map does to one point.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Eval {
    Bystander,
    Image(CarrierPoint),
    Undefined,
}

/// A partial injection on the carrier: finite exceptions, per-stream
/// eventual shifts, and a finite set of `lost` participants that neither
/// send nor receive a mind. Always kept in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TailMap {
    exceptions: BTreeMap<CarrierPoint, CarrierPoint>,
    tails: BTreeMap<StreamId, Tail>,
    lost: BTreeSet<CarrierPoint>,
}

impl TailMap {
    /// The empty swap: nobody participates.
    pub fn identity() -> Self {
        TailMap::default()
    }

    pub fn new(
        exceptions: BTreeMap<CarrierPoint, CarrierPoint>,
        tails: BTreeMap<StreamId, Tail>,
    ) -> Result<Self, InfiniteError> {
        let map = TailMap { exceptions, tails, lost: BTreeSet::new() };
        map.validate()?;
        Ok(map.canonical())
    }

    /// `a_n ↦ a_{n + delta}` on the whole stream (from `a_2` when `delta = -1`).
    pub fn shift(stream: StreamId, delta: i64) -> Self {
        let threshold = if delta < 0 { 1 + delta.unsigned_abs() } else { 1 };
        TailMap {
            tails: BTreeMap::from([(stream, Tail { threshold, delta })]),
            ..TailMap::default()
        }
    }

    /// Extends a finite permutation of stream indices by the identity on
    /// the rest of `stream`; every stream point participates.
    pub fn from_finitary(
        stream: StreamId,
        moves: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, InfiniteError> {
        let exceptions: BTreeMap<_, _> = moves
            .into_iter()
            .map(|(a, b)| (CarrierPoint::stream(stream, a), CarrierPoint::stream(stream, b)))
            .collect();
        let top = exceptions
            .keys()
            .chain(exceptions.values())
            .filter_map(|p| p.stream_parts().map(|(_, i)| i))
            .max()
            .unwrap_or(0);
        let mut exceptions = exceptions;
        for i in 1..=top {
            let p = CarrierPoint::stream(stream, i);
            exceptions.entry(p.clone()).or_insert(p);
        }
        TailMap::new(exceptions, BTreeMap::from([(stream, Tail { threshold: top + 1, delta: 0 })]))
    }

    /// Adds `p` as a participant that keeps its own mind.
    pub fn with_fixed(mut self, p: CarrierPoint) -> Result<Self, InfiniteError> {
        if self.is_participant(&p) {
            return Err(InfiniteError::AlreadyParticipant(p));
        }
        self.exceptions.insert(p.clone(), p);
        self.validate()?;
        Ok(self.canonical())
    }

    pub fn exceptions(&self) -> &BTreeMap<CarrierPoint, CarrierPoint> {
        &self.exceptions
    }

    pub fn tails(&self) -> &BTreeMap<StreamId, Tail> {
        &self.tails
    }

    pub fn lost(&self) -> &BTreeSet<CarrierPoint> {
        &self.lost
    }

    fn validate(&self) -> Result<(), InfiniteError> {
        let all = self.exceptions.keys().chain(self.exceptions.values()).chain(&self.lost);
        if all.clone().any(|p| p.stream_parts().is_some_and(|(_, i)| i == 0)) {
            return Err(InfiniteError::ZeroIndex);
        }
        for (&stream, tail) in &self.tails {
            if tail.threshold == 0 || (tail.threshold as i64) + tail.delta < 1 {
                return Err(InfiniteError::TailUnderflow { stream });
            }
        }
        let mut images = BTreeSet::new();
        for (k, v) in &self.exceptions {
            if self.tail_covers(k) {
                return Err(InfiniteError::ExceptionInTail(k.clone()));
            }
            if self.in_tail_image(v) {
                return Err(InfiniteError::ImageInTail(v.clone()));
            }
            if !images.insert(v) {
                return Err(InfiniteError::NotInjective(v.clone()));
            }
        }
        if let Some(p) = self.lost.iter().find(|p| self.in_domain(p) || self.in_image(p)) {
            return Err(InfiniteError::AlreadyParticipant(p.clone()));
        }
        Ok(())
    }

    /// Pulls exceptions that agree with a tail into it, so thresholds are minimal.
    fn canonical(mut self) -> Self {
        for (&stream, tail) in self.tails.iter_mut() {
            while tail.threshold > 1 {
                let below = tail.threshold - 1;
                let key = CarrierPoint::stream(stream, below);
                let expected = below as i64 + tail.delta;
                if expected < 1 {
                    break;
                }
                if self.exceptions.get(&key) != Some(&CarrierPoint::stream(stream, expected as u64)) {
                    break;
                }
                self.exceptions.remove(&key);
                tail.threshold = below;
            }
        }
        self
    }

    fn tail_covers(&self, p: &CarrierPoint) -> bool {
        p.stream_parts()
            .and_then(|(s, i)| self.tails.get(&s).map(|t| t.covers(i)))
            .unwrap_or(false)
    }

    fn in_tail_image(&self, p: &CarrierPoint) -> bool {
        p.stream_parts()
            .and_then(|(s, i)| self.tails.get(&s).map(|t| i >= t.image_start()))
            .unwrap_or(false)
    }

    pub fn in_domain(&self, p: &CarrierPoint) -> bool {
        self.exceptions.contains_key(p) || self.tail_covers(p)
    }

    pub fn in_image(&self, p: &CarrierPoint) -> bool {
        self.in_tail_image(p) || self.exceptions.values().any(|v| v == p)
    }

    pub fn is_participant(&self, p: &CarrierPoint) -> bool {
        self.in_domain(p) || self.in_image(p) || self.lost.contains(p)
    }

    fn eval(&self, p: &CarrierPoint) -> Eval {
        if let Some(v) = self.exceptions.get(p) {
            return Eval::Image(v.clone());
        }
        if let Some((s, i)) = p.stream_parts() {
            if let Some(t) = self.tails.get(&s).filter(|t| t.covers(i)) {
                return Eval::Image(CarrierPoint::stream(s, (i as i64 + t.delta) as u64));
            }
        }
        if self.is_participant(p) {
            Eval::Undefined
        } else {
            Eval::Bystander
        }
    }

    /// Where the mind in body `p` ends up. Bystanders stay put; `None`
    /// means `p` is seated but no mind leaves it.
    pub fn apply(&self, p: &CarrierPoint) -> Option<CarrierPoint> {
        match self.eval(p) {
            Eval::Bystander => Some(p.clone()),
            Eval::Image(q) => Some(q),
            Eval::Undefined => None,
        }
    }

    /// The point whose mind lands in `p`, if any participant's does.
    pub fn preimage(&self, p: &CarrierPoint) -> Option<CarrierPoint> {
        if let Some((k, _)) = self.exceptions.iter().find(|(_, v)| *v == p) {
            return Some(k.clone());
        }
        let (s, i) = p.stream_parts()?;
        let t = self.tails.get(&s)?;
        (i >= t.image_start()).then(|| CarrierPoint::stream(s, (i as i64 - t.delta) as u64))
    }

    pub(crate) fn streams(&self) -> BTreeSet<StreamId> {
        self.exceptions
            .keys()
            .chain(self.exceptions.values())
            .chain(&self.lost)
            .filter_map(|p| p.stream_parts().map(|(s, _)| s))
            .chain(self.tails.keys().copied())
            .collect()
    }

    fn named_points(&self) -> BTreeSet<CarrierPoint> {
        self.exceptions
            .keys()
            .chain(self.exceptions.values())
            .chain(&self.lost)
            .filter(|p| matches!(p, CarrierPoint::Named(_)))
            .cloned()
            .collect()
    }

    /// Index from which the stream is pure tail (or untouched) and
    /// no exception mentions it.
    pub(crate) fn stream_bound(&self, stream: StreamId) -> u64 {
        let mut b = self
            .exceptions
            .keys()
            .chain(self.exceptions.values())
            .chain(&self.lost)
            .filter_map(|p| p.stream_parts())
            .filter(|&(s, _)| s == stream)
            .map(|(_, i)| i)
            .max()
            .unwrap_or(0);
        if let Some(t) = self.tails.get(&stream) {
            b = b.max(t.threshold + t.delta.unsigned_abs());
        }
        b + 1
    }

    fn point_set(&self, pred: impl Fn(&CarrierPoint) -> bool) -> PointSet {
        let mut out = PointSet::default();
        for s in self.streams() {
            let bound = self.stream_bound(s);
            let pick = |keep: bool| -> BTreeSet<u64> {
                (1..bound)
                    .filter(|&i| pred(&CarrierPoint::stream(s, i)) == keep)
                    .collect()
            };
            if self.tails.contains_key(&s) {
                out.streams.insert(s, StreamSet::Cofinite(pick(false)));
            } else {
                let inc = pick(true);
                if !inc.is_empty() {
                    out.streams.insert(s, StreamSet::Finite(inc));
                }
            }
        }
        for p in self.named_points() {
            if let CarrierPoint::Named(label) = &p {
                if pred(&p) {
                    out.named.insert(label.clone());
                }
            }
        }
        out
    }

    /// Everyone seated on the machine: the domain together with the image
    /// (and any lost participants).
    pub fn participants(&self) -> PointSet {
        self.point_set(|p| self.is_participant(p))
    }

    pub fn domain(&self) -> PointSet {
        self.point_set(|p| self.in_domain(p))
    }

    pub fn image(&self) -> PointSet {
        self.point_set(|p| self.in_image(p))
    }

    pub fn classify(&self) -> SwapClassification {
        let participants = self.participants();
        let image = self.image();
        if self.lost.is_empty() && image == participants {
            SwapClassification::Retentive
        } else if self.lost.is_empty() && self.domain() == participants {
            SwapClassification::Forgetful
        } else {
            SwapClassification::Neither
        }
    }

    /// `self ∘ earlier`: first `earlier`, then `self`. Participants of the
    /// result are the participants of either factor.
    pub fn compose(&self, earlier: &TailMap) -> TailMap {
        let (f, g) = (self, earlier);
        let streams: BTreeSet<StreamId> = f.streams().union(&g.streams()).copied().collect();
        let mut exceptions = BTreeMap::new();
        let mut tails = BTreeMap::new();
        let mut undefined = Vec::new();

        let mut points: Vec<CarrierPoint> = f.named_points().union(&g.named_points()).cloned().collect();
        for &s in &streams {
            let g_shift = g.tails.get(&s).map_or(0, |t| t.delta);
            let bound = f.stream_bound(s).max(g.stream_bound(s)) + g_shift.unsigned_abs() + 1;
            points.extend((1..bound).map(|i| CarrierPoint::stream(s, i)));
            if f.tails.contains_key(&s) || g.tails.contains_key(&s) {
                let f_shift = f.tails.get(&s).map_or(0, |t| t.delta);
                tails.insert(s, Tail { threshold: bound, delta: f_shift + g_shift });
            }
        }
        for p in points {
            if !f.is_participant(&p) && !g.is_participant(&p) {
                continue;
            }
            let image = match g.eval(&p) {
                Eval::Bystander => f.apply(&p),
                Eval::Image(q) => f.apply(&q),
                Eval::Undefined => None,
            };
            match image {
                Some(q) => {
                    exceptions.insert(p, q);
                }
                None => undefined.push(p),
            }
        }
        let mut out = TailMap { exceptions, tails, lost: BTreeSet::new() };
        let lost: BTreeSet<_> = undefined.into_iter().filter(|p| !out.in_image(p)).collect();
        out.lost = lost;
        debug_assert!(out.validate().is_ok(), "composition broke an invariant");
        out.canonical()
    }
}

/// Composes swaps given in chronological order (the first acts first).
pub fn compose_all<'a>(swaps: impl IntoIterator<Item = &'a TailMap>) -> TailMap {
    swaps
        .into_iter()
        .fold(TailMap::identity(), |acc, f| f.compose(&acc))
}

impl fmt::Display for TailMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, DEFAULT_HORIZON))
    }
}
