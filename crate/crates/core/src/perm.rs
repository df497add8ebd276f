//! Finite-support permutations over insiders and outsiders.
//!
//! Products are evaluated right to left: in `p * q` (or `p.compose(&q)`)
//! the factor `q` acts first. Every value is kept in canonical form, so
//! structural equality is permutation equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

/// A point the symmetric group acts on.
///
/// Insiders are the originally scrambled people, outsiders are helpers
/// that never shared a machine use with them. The derived order puts every
/// insider before every outsider, then orders by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Insider(usize),
    Outsider(usize),
}

impl Element {
    pub fn index(self) -> usize {
        match self {
            Element::Insider(i) | Element::Outsider(i) => i,
        }
    }

    pub fn is_insider(self) -> bool {
        matches!(self, Element::Insider(_))
    }

    pub fn is_outsider(self) -> bool {
        matches!(self, Element::Outsider(_))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Insider(i) => write!(f, "a{i}"),
            Element::Outsider(i) => write!(f, "x{i}"),
        }
    }
}

impl FromStr for Element {
    type Err = ParseError;

    /// Accepts `aN`, `xN` or a bare `N` (an insider), with `N >= 1`.
    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let malformed = || ParseError::MalformedToken(token.to_string());
        let (ctor, digits): (fn(usize) -> Element, &str) =
            if let Some(rest) = token.strip_prefix('a') {
                (Element::Insider, rest)
            } else if let Some(rest) = token.strip_prefix('x') {
                (Element::Outsider, rest)
            } else {
                (Element::Insider, token)
            };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let index: usize = digits.parse().map_err(|_| malformed())?;
        if index == 0 {
            return Err(malformed());
        }
        Ok(ctor(index))
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed element token `{0}`")]
    MalformedToken(String),
    #[error("element {0} repeated within one cycle")]
    RepeatedElement(Element),
    #[error("unbalanced parentheses at byte {0}")]
    Unbalanced(usize),
    #[error("unexpected character `{ch}` at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("a cycle needs at least two elements, got {0}")]
    TooShort(usize),
    #[error("element {0} repeated in cycle")]
    Repeated(Element),
}

/// A cycle of length at least two, rotated so its minimal element leads.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(Vec<Element>);

impl Cycle {
    pub fn new(elements: Vec<Element>) -> Result<Self, CycleError> {
        if elements.len() < 2 {
            return Err(CycleError::TooShort(elements.len()));
        }
        let mut seen = BTreeSet::new();
        for &e in &elements {
            if !seen.insert(e) {
                return Err(CycleError::Repeated(e));
            }
        }
        let mut elements = elements;
        let lead = (0..elements.len())
            .min_by_key(|&i| elements[i])
            .expect("nonempty");
        elements.rotate_left(lead);
        Ok(Cycle(elements))
    }

    /// The transposition `(a b)`.
    pub fn transposition(a: Element, b: Element) -> Result<Self, CycleError> {
        Cycle::new(vec![a, b])
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leader(&self) -> Element {
        self.0[0]
    }

    pub fn contains(&self, e: Element) -> bool {
        self.0.contains(&e)
    }

    pub fn inverse(&self) -> Cycle {
        let mut rev = self.0.clone();
        rev.reverse();
        Cycle::new(rev).expect("reversal keeps a valid cycle")
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_cycle(self)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycle(f, &self.0)
    }
}

pub(crate) fn write_cycle<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str(")")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_transpositions(count: usize) -> Parity {
        if count % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of a product given the parities of its factors.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A bijection moving finitely many elements.
///
/// Stored as the map restricted to its support; fixed points are implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: BTreeMap<Element, Element>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    pub fn from_cycle(cycle: &Cycle) -> Self {
        let items = cycle.elements();
        let map = items
            .iter()
            .zip(items.iter().cycle().skip(1))
            .map(|(&a, &b)| (a, b))
            .collect();
        Permutation { map }
    }

    /// Builds a permutation from explicit `(from, to)` pairs. Fixed pairs
    /// are dropped; returns `None` unless the pairs form a bijection of
    /// their element set.
    pub fn from_pairs<I>(pairs: I) -> Option<Self>
    where
        I: IntoIterator<Item = (Element, Element)>,
    {
        let mut map = BTreeMap::new();
        let mut images = BTreeSet::new();
        for (a, b) in pairs {
            if map.insert(a, b).is_some() || !images.insert(b) {
                return None;
            }
        }
        let domain: BTreeSet<Element> = map.keys().copied().collect();
        if domain != images {
            return None;
        }
        map.retain(|a, b| a != b);
        Some(Permutation { map })
    }

    /// Right-to-left product of factors written left to right, as in
    /// `(1 5)(1 2 3)(1 4)`.
    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a Permutation>,
        I::IntoIter: DoubleEndedIterator,
    {
        factors
            .into_iter()
            .rev()
            .fold(Permutation::identity(), |acc, p| p.compose(&acc))
    }

    /// The map `e ↦ self(other(e))`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut map = BTreeMap::new();
        for e in self.map.keys().chain(other.map.keys()) {
            let image = self.apply(other.apply(*e));
            if image != *e {
                map.insert(*e, image);
            }
        }
        Permutation { map }
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    pub fn apply(&self, e: Element) -> Element {
        self.map.get(&e).copied().unwrap_or(e)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Element> {
        self.map.keys().copied().collect()
    }

    /// Moved `(element, image)` pairs in element order.
    pub fn mapping(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// Disjoint cycles, each led by its minimal element, sorted by leader.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = self.apply(start);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur);
                cur = self.apply(cur);
            }
            // Keys are visited in order, so `start` is already the minimum.
            out.push(Cycle(cycle));
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        Parity::from_transpositions(transpositions)
    }

    pub fn touches_outsiders(&self) -> bool {
        self.map.keys().any(|e| e.is_outsider())
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        self.compose(&rhs)
    }
}

impl From<&Cycle> for Permutation {
    fn from(c: &Cycle) -> Self {
        Permutation::from_cycle(c)
    }
}

impl fmt::Display for Permutation {
    /// Canonical cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for c in self.cycles() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_cycles(s)
    }
}

/// Splits cycle notation into the element lists of its written cycles,
/// in written order. Singletons and `()` are kept as written.
pub fn parse_cycle_lists(text: &str) -> Result<Vec<Vec<Element>>, ParseError> {
    let mut cycles = Vec::new();
    let mut current: Option<(usize, Vec<Element>)> = None;
    let mut token_start: Option<usize> = None;

    let flush = |start: &mut Option<usize>,
                 end: usize,
                 cur: &mut Option<(usize, Vec<Element>)>|
     -> Result<(), ParseError> {
        if let Some(s) = start.take() {
            let e: Element = text[s..end].parse()?;
            let (_, items) = cur.as_mut().expect("tokens only start inside a cycle");
            if items.contains(&e) {
                return Err(ParseError::RepeatedElement(e));
            }
            items.push(e);
        }
        Ok(())
    };

    for (pos, ch) in text.char_indices() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(ParseError::Unbalanced(pos));
                }
                current = Some((pos, Vec::new()));
            }
            ')' => {
                flush(&mut token_start, pos, &mut current)?;
                match current.take() {
                    Some((_, items)) => cycles.push(items),
                    None => return Err(ParseError::Unbalanced(pos)),
                }
            }
            c if c.is_whitespace() || c == ',' => {
                if current.is_none() && c == ',' {
                    return Err(ParseError::UnexpectedChar { ch: c, pos });
                }
                flush(&mut token_start, pos, &mut current)?;
            }
            c if c.is_ascii_alphanumeric() => {
                if current.is_none() {
                    return Err(ParseError::UnexpectedChar { ch: c, pos });
                }
                token_start.get_or_insert(pos);
            }
            c => return Err(ParseError::UnexpectedChar { ch: c, pos }),
        }
    }
    if let Some((open, _)) = current {
        return Err(ParseError::Unbalanced(open));
    }
    Ok(cycles)
}

/// Parses a product of cycles such as `(1 5)(1 2 3)(1 4)` or `(a1 x1)`
/// and reduces it to canonical disjoint-cycle form.
pub fn parse_cycles(text: &str) -> Result<Permutation, ParseError> {
    let factors: Vec<Permutation> = parse_cycle_lists(text)?
        .into_iter()
        .filter(|items| items.len() >= 2)
        .map(|items| Permutation::from_cycle(&Cycle::new(items).expect("checked by parser")))
        .collect();
    Ok(Permutation::product(&factors))
}
