//! Extended cycle notation for swaps.
//!
//! Each person's mind goes to the person on their right. `(1 2 3 ⋯)` trails
//! off to the right (forgetful), `(⋯ 3 2 1)` to the left (retentive),
//! `[p q]` is a path whose last body sends no mind anywhere and `[p]` a seat
//! that neither sends nor receives one. A swap made of several pieces is
//! wrapped in braces, and `(a6)(a7)⋯` inside braces means every later point
//! of the stream sits still. A written product lists the latest swap first.

use std::collections::{BTreeMap, BTreeSet};

use super::{CarrierPoint, Eval, InfiniteError, StreamId, Tail, TailMap, STREAM_LETTERS};

/// Tail points shown before the ellipsis.
pub const DEFAULT_HORIZON: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Forward(Vec<CarrierPoint>),
    Backward(Vec<CarrierPoint>),
    BiInfinite(Vec<CarrierPoint>),
    Path(Vec<CarrierPoint>),
    Cycle(Vec<CarrierPoint>),
    FixedTail(Vec<CarrierPoint>),
}

struct Walker<'a> {
    f: &'a TailMap,
    horizon: usize,
    visited: BTreeSet<CarrierPoint>,
}

impl Walker<'_> {
    fn tail_at(&self, p: &CarrierPoint) -> Option<(StreamId, u64, Tail)> {
        let (s, i) = p.stream_parts()?;
        let t = self.f.tails.get(&s).filter(|t| t.covers(i))?;
        Some((s, i, *t))
    }

    /// Shows `horizon` points of a tail run starting at index `i`, never
    /// fewer than two so the stride can be read back, and marks the run as
    /// seen as far as the window reaches.
    fn tail_run(&mut self, s: StreamId, i: u64, step: i64) -> Vec<CarrierPoint> {
        let step = step.unsigned_abs();
        let bound = self.f.stream_bound(s);
        let mut j = i;
        while j < bound {
            self.visited.insert(CarrierPoint::stream(s, j));
            j += step;
        }
        let shown = self.horizon.max(2) as u64;
        (0..shown)
            .map(|n| CarrierPoint::stream(s, i + n * step))
            .collect()
    }

    /// Follows minds forward from `p` until the walk enters a rising tail,
    /// stops at a body with no outgoing mind, or returns to `p`.
    fn forward(&mut self, p: &CarrierPoint) -> (Vec<CarrierPoint>, Option<Vec<CarrierPoint>>, bool) {
        let mut seq = Vec::new();
        let mut cur = p.clone();
        loop {
            if let Some((s, i, t)) = self.tail_at(&cur).filter(|(_, _, t)| t.delta > 0) {
                return (seq, Some(self.tail_run(s, i, t.delta)), false);
            }
            self.visited.insert(cur.clone());
            seq.push(cur.clone());
            match self.f.eval(&cur) {
                Eval::Image(q) if &q == p => return (seq, None, true),
                Eval::Image(q) => cur = q,
                _ => return (seq, None, false),
            }
        }
    }

    /// Follows minds backward from `p` (exclusive) until the walk enters a
    /// falling tail. Returned nearest first.
    fn backward(&mut self, p: &CarrierPoint) -> (Vec<CarrierPoint>, Vec<CarrierPoint>) {
        let mut seq = Vec::new();
        let mut cur = p.clone();
        while let Some(q) = self.f.preimage(&cur) {
            if let Some((s, i, t)) = self.tail_at(&q).filter(|(_, _, t)| t.delta < 0) {
                return (seq, self.tail_run(s, i, t.delta));
            }
            self.visited.insert(q.clone());
            seq.push(q.clone());
            cur = q;
        }
        (seq, Vec::new())
    }
}

fn pieces(f: &TailMap, horizon: usize) -> Vec<Piece> {
    let mut window: Vec<CarrierPoint> = Vec::new();
    for s in f.streams() {
        window.extend((1..f.stream_bound(s)).map(|i| CarrierPoint::stream(s, i)));
    }
    window.extend(f.named_points());
    window.retain(|p| f.is_participant(p));

    let mut w = Walker { f, horizon, visited: BTreeSet::new() };
    let mut out = Vec::new();

    for p in window.iter().filter(|p| !f.in_image(p)) {
        match w.forward(p) {
            (mut seq, Some(tail), _) => {
                seq.extend(tail);
                out.push(Piece::Forward(seq));
            }
            (seq, None, _) => out.push(Piece::Path(seq)),
        }
    }
    for p in window.iter().filter(|p| !f.in_domain(p)) {
        if !w.visited.insert(p.clone()) {
            continue;
        }
        let (back, tail) = w.backward(p);
        let mut seq: Vec<CarrierPoint> = tail.into_iter().rev().chain(back.into_iter().rev()).collect();
        seq.push(p.clone());
        out.push(Piece::Backward(seq));
    }
    for p in &window {
        if w.visited.contains(p) || w.tail_at(p).is_some_and(|(_, _, t)| t.delta == 0) {
            continue;
        }
        match w.forward(p) {
            (seq, _, true) => out.push(Piece::Cycle(seq)),
            (fwd, tail, false) => {
                let (back, back_tail) = w.backward(p);
                let seq = back_tail
                    .into_iter()
                    .rev()
                    .chain(back.into_iter().rev())
                    .chain(fwd)
                    .chain(tail.unwrap_or_default())
                    .collect();
                out.push(Piece::BiInfinite(seq));
            }
        }
    }
    for (&s, t) in &f.tails {
        if t.delta == 0 {
            out.push(Piece::FixedTail(
                (0..horizon.max(1) as u64).map(|n| CarrierPoint::stream(s, t.threshold + n)).collect(),
            ));
        }
    }
    out
}

fn words(points: &[CarrierPoint]) -> String {
    points.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn piece_text(piece: &Piece) -> String {
    match piece {
        Piece::Forward(p) => format!("({} ⋯)", words(p)),
        Piece::Backward(p) => format!("(⋯ {})", words(p)),
        Piece::BiInfinite(p) => format!("(⋯ {} ⋯)", words(p)),
        Piece::Path(p) => format!("[{}]", words(p)),
        Piece::Cycle(p) => format!("({})", words(p)),
        Piece::FixedTail(p) => {
            let mut s: String = p.iter().map(|q| format!("({q})")).collect();
            s.push('⋯');
            s
        }
    }
}

/// One swap in extended cycle notation, tails cut after `horizon` points.
pub fn render(f: &TailMap, horizon: usize) -> String {
    let pieces = pieces(f, horizon);
    match pieces.as_slice() {
        [] => "()".to_string(),
        [single] if !matches!(single, Piece::FixedTail(_)) => piece_text(single),
        many => format!("{{{}}}", many.iter().map(piece_text).collect::<String>()),
    }
}

/// One `p → q` line per mind movement, in the order a reader traces them:
/// rising chains from their first body, falling chains from their last.
pub fn render_steps(f: &TailMap, horizon: usize) -> String {
    let arrow = |p: &CarrierPoint, q: &CarrierPoint| format!("{p} → {q}");
    let mut lines = Vec::new();
    for piece in pieces(f, horizon) {
        match piece {
            Piece::Forward(p) => {
                lines.extend(p.windows(2).map(|w| arrow(&w[0], &w[1])));
                lines.push("⋮".to_string());
            }
            Piece::Backward(p) => {
                lines.extend(p.windows(2).rev().map(|w| arrow(&w[0], &w[1])));
                lines.push("⋮".to_string());
            }
            Piece::BiInfinite(p) => {
                lines.push("⋮".to_string());
                lines.extend(p.windows(2).map(|w| arrow(&w[0], &w[1])));
                lines.push("⋮".to_string());
            }
            Piece::Path(p) if p.len() == 1 => lines.push(format!("{} ↛", p[0])),
            Piece::Path(p) => lines.extend(p.windows(2).map(|w| arrow(&w[0], &w[1]))),
            Piece::Cycle(p) => {
                lines.extend(p.windows(2).map(|w| arrow(&w[0], &w[1])));
                lines.push(arrow(&p[p.len() - 1], &p[0]));
            }
            Piece::FixedTail(p) => {
                lines.extend(p.iter().map(|q| arrow(q, q)));
                lines.push("⋮".to_string());
            }
        }
    }
    lines.join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open(char),
    Close(char),
    Ellipsis,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, InfiniteError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' | '[' | '{' => out.push(Token::Open(c)),
            ')' | ']' | '}' => out.push(Token::Close(c)),
            '⋯' | '…' => out.push(Token::Ellipsis),
            '.' => {
                if chars.next() != Some('.') || chars.next() != Some('.') {
                    return Err(InfiniteError::Parse("stray '.'".into()));
                }
                out.push(Token::Ellipsis);
            }
            c if c.is_whitespace() || c == ',' => {}
            c if c.is_alphanumeric() || c == '_' => {
                let mut word = c.to_string();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    word.push(d);
                    chars.next();
                }
                out.push(Token::Word(word));
            }
            c => return Err(InfiniteError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

/// `7` and `a7` are stream 0, `b7` stream 1 and so on through `w`;
/// `s30_7` names stream 30 directly. Anything else is a named point.
fn point(word: &str) -> Result<CarrierPoint, InfiniteError> {
    let index = |digits: &str| -> Option<u64> {
        (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
            .then(|| digits.parse().ok())
            .flatten()
    };
    let found = if let Some(i) = index(word) {
        Some((0, i))
    } else if let Some((s, i)) = word.strip_prefix('s').and_then(|r| r.split_once('_')) {
        index(s).zip(index(i)).map(|(s, i)| (s as StreamId, i))
    } else {
        let first = word.as_bytes()[0];
        STREAM_LETTERS
            .iter()
            .position(|&l| l == first)
            .and_then(|s| index(&word[1..]).map(|i| (s as StreamId, i)))
    };
    match found {
        Some((_, 0)) => Err(InfiniteError::ZeroIndex),
        Some((s, i)) => Ok(CarrierPoint::stream(s, i)),
        None => Ok(CarrierPoint::named(word)),
    }
}

#[derive(Default)]
struct Builder {
    exceptions: BTreeMap<CarrierPoint, CarrierPoint>,
    runs: BTreeMap<StreamId, Vec<Tail>>,
    lost: BTreeSet<CarrierPoint>,
}

impl Builder {
    fn edge(&mut self, p: &CarrierPoint, q: &CarrierPoint) -> Result<(), InfiniteError> {
        if self.exceptions.insert(p.clone(), q.clone()).is_some() {
            return Err(InfiniteError::Parse(format!("{p} sends its mind twice")));
        }
        Ok(())
    }

    fn tail(&mut self, p: &CarrierPoint, threshold: u64, delta: i64) -> Result<(), InfiniteError> {
        let (s, _) = p
            .stream_parts()
            .ok_or_else(|| InfiniteError::Parse(format!("{p} cannot start a tail")))?;
        self.runs.entry(s).or_default().push(Tail { threshold, delta });
        Ok(())
    }

    fn chain(&mut self, pts: &[CarrierPoint]) -> Result<(), InfiniteError> {
        pts.windows(2).try_for_each(|w| self.edge(&w[0], &w[1]))
    }

    /// Several chains on one stream (say odds and evens under `n ↦ n + 2`)
    /// share a single tail starting where the last of them does.
    fn finish(mut self) -> Result<TailMap, InfiniteError> {
        let mut tails = BTreeMap::new();
        for (s, runs) in std::mem::take(&mut self.runs) {
            let delta = runs[0].delta;
            if runs.iter().any(|r| r.delta != delta) {
                return Err(InfiniteError::Parse(format!("stream {s} drifts at two different rates")));
            }
            let top = runs.iter().map(|r| r.threshold).max().unwrap_or(1);
            for r in &runs {
                let mut i = r.threshold;
                while i < top && delta != 0 {
                    let (p, q) = (CarrierPoint::stream(s, i), CarrierPoint::stream(s, (i as i64 + delta) as u64));
                    self.edge(&p, &q)?;
                    i += delta.unsigned_abs();
                }
            }
            tails.insert(s, Tail { threshold: top, delta });
        }
        let map = TailMap { exceptions: self.exceptions, tails, lost: self.lost };
        map.validate()?;
        Ok(map.canonical())
    }
}

/// Index gap between two neighbouring tail points, or 1 if they are not
/// on the same stream in the expected direction.
fn step(far: &CarrierPoint, near: &CarrierPoint) -> u64 {
    match (far.stream_parts(), near.stream_parts()) {
        (Some((s, i)), Some((t, j))) if s == t && i > j => i - j,
        _ => 1,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    /// Reads one bracketed group after its opening token.
    fn group(&mut self, open: char, b: &mut Builder) -> Result<Option<CarrierPoint>, InfiniteError> {
        let close = if open == '(' { ')' } else { ']' };
        let mut lead = false;
        let mut trail = false;
        let mut pts = Vec::new();
        loop {
            match self.next() {
                Some(Token::Word(w)) if !trail => pts.push(point(&w)?),
                Some(Token::Ellipsis) if pts.is_empty() && !lead => lead = true,
                Some(Token::Ellipsis) if !pts.is_empty() && !trail => trail = true,
                Some(Token::Close(c)) if c == close => break,
                other => return Err(InfiniteError::Parse(format!("unexpected {other:?} in group"))),
            }
        }
        if open == '[' {
            if lead || trail || pts.is_empty() {
                return Err(InfiniteError::Parse("paths are finite and non-empty".into()));
            }
            if pts.len() == 1 {
                b.lost.insert(pts[0].clone());
            }
            b.chain(&pts)?;
            return Ok(None);
        }
        if pts.is_empty() {
            return if lead || trail {
                Err(InfiniteError::Parse("empty infinite chain".into()))
            } else {
                Ok(None)
            };
        }
        b.chain(&pts)?;
        if lead {
            let d = pts.get(1).map_or(1, |n| step(&pts[0], n));
            let (_, i) = pts[0].stream_parts().unwrap_or((0, 0));
            b.tail(&pts[0], i + d, -(d as i64))?;
        }
        if trail {
            let k = pts.len();
            let d = if k > 1 { step(&pts[k - 1], &pts[k - 2]) } else { 1 };
            let (_, i) = pts[k - 1].stream_parts().unwrap_or((0, 0));
            b.tail(&pts[k - 1], i, d as i64)?;
        }
        if !lead && !trail {
            b.edge(&pts[pts.len() - 1], &pts[0])?;
            if pts.len() == 1 {
                return Ok(Some(pts[0].clone()));
            }
        }
        Ok(None)
    }

    fn swap(&mut self) -> Result<TailMap, InfiniteError> {
        let mut b = Builder::default();
        match self.next() {
            Some(Token::Open('{')) => {
                let mut last_fixed: Option<CarrierPoint> = None;
                loop {
                    match self.next() {
                        Some(Token::Open(c)) if c != '{' => last_fixed = self.group(c, &mut b)?,
                        Some(Token::Ellipsis) => {
                            let p = last_fixed
                                .take()
                                .ok_or_else(|| InfiniteError::Parse("'⋯' must follow a fixed point".into()))?;
                            b.exceptions.remove(&p);
                            let (_, i) = p.stream_parts().unwrap_or((0, 0));
                            b.tail(&p, i, 0)?;
                        }
                        Some(Token::Close('}')) => break,
                        other => return Err(InfiniteError::Parse(format!("unexpected {other:?} in swap"))),
                    }
                }
            }
            Some(Token::Open(c)) if c != '{' => {
                self.group(c, &mut b)?;
            }
            other => return Err(InfiniteError::Parse(format!("expected a swap, found {other:?}"))),
        }
        b.finish()
    }
}

/// Parses a written product of swaps and returns them chronologically,
/// so the rightmost swap comes first.
pub fn parse_swaps(text: &str) -> Result<Vec<TailMap>, InfiniteError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let mut swaps = Vec::new();
    while parser.peek().is_some() {
        swaps.push(parser.swap()?);
    }
    swaps.reverse();
    Ok(swaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinite::{invert_finitary_two_step, invert_shift_three_step};

    fn z() -> CarrierPoint {
        CarrierPoint::named("z")
    }

    #[test]
    fn renders_shift_steps() {
        let [f1, f2, f3] = invert_shift_three_step(0, &z()).unwrap();
        assert_eq!(render(&f1, 1), "(⋯ a5 a4 a3 z a2 a1)");
        assert_eq!(render(&f2, 2), "(z a2 a3 ⋯)");
        assert_eq!(render(&f3, 2), "(⋯ a5 a4 a3 z)");
        assert_eq!(render_steps(&f1, 2), "a2 → a1\nz → a2\na3 → z\na4 → a3\na5 → a4\n⋮");
    }

    #[test]
    fn renders_worked_example() {
        let sigma = "(1 2)(3 4 5)".parse().unwrap();
        let plan = invert_finitary_two_step(&sigma, 0, &z()).unwrap();
        assert_eq!(render(&plan[0], 2), "(a1 a2 z a5 a4 a3 a6 a7 ⋯)");
        assert_eq!(render(&plan[1], 2), "(⋯ a7 a6 a5 z a1)");
        assert_eq!(render_steps(&plan[1], 2), "z → a1\na5 → z\na6 → a5\na7 → a6\n⋮");
    }

    #[test]
    fn renders_other_shapes() {
        assert_eq!(render(&TailMap::identity(), 2), "()");
        assert_eq!(render(&TailMap::shift(0, 0), 2), "{(a1)(a2)⋯}");
        assert_eq!(render(&TailMap::shift(1, 2), 2), "{(b1 b3 ⋯)(b2 b4 ⋯)}");
        let up = TailMap::shift(0, 1);
        assert_eq!(render(&up.compose(&TailMap::shift(0, -1)), 2), "{[a1](a2)(a3)⋯}");
        let t = TailMap::from_finitary(0, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(t.to_string(), "{(a1 a2)(a3)(a4)⋯}");
    }

    #[test]
    fn parses_written_products() {
        let shift = parse_swaps("(⋯ 5 4 3 x)(x 2 3 4 ⋯)(⋯ 4 3 x 2 1)").unwrap();
        assert_eq!(shift, invert_shift_three_step(0, &CarrierPoint::named("x")).unwrap());
        let sigma = "(1 2)(3 4 5)".parse().unwrap();
        let two = parse_swaps("(... a7 a6 a5 z a1)(a1 a2 z a5 a4 a3 a6 a7 ...)").unwrap();
        assert_eq!(two, invert_finitary_two_step(&sigma, 0, &z()).unwrap());
    }

    #[test]
    fn render_parse_round_trip() {
        let samples = [
            TailMap::identity(),
            TailMap::shift(0, 0),
            TailMap::shift(1, 2),
            TailMap::shift(0, -3),
            TailMap::shift(0, 1).compose(&TailMap::shift(0, -1)),
            TailMap::from_finitary(0, [(1, 2), (2, 1)]).unwrap(),
            TailMap::shift(0, 1).compose(&TailMap::shift(1, -1)),
        ];
        for f in samples {
            for h in 1..=3 {
                let text = render(&f, h);
                assert_eq!(parse_swaps(&text).unwrap(), vec![f.clone()], "{text}");
            }
        }
    }

    #[test]
    fn tokens_and_points() {
        assert_eq!(point("a12").unwrap(), CarrierPoint::stream(0, 12));
        assert_eq!(point("12").unwrap(), CarrierPoint::stream(0, 12));
        assert_eq!(point("c3").unwrap(), CarrierPoint::stream(2, 3));
        assert_eq!(point("s40_2").unwrap(), CarrierPoint::stream(40, 2));
        assert_eq!(point("x").unwrap(), CarrierPoint::named("x"));
        assert_eq!(point("y2").unwrap(), CarrierPoint::named("y2"));
        assert_eq!(point("a0"), Err(InfiniteError::ZeroIndex));
        assert!(parse_swaps("(1 2").is_err());
        assert!(parse_swaps("(1 2)(2 3").is_err());
        assert!(parse_swaps("(1 ⋯ 2)").is_err());
        assert!(parse_swaps("(1 2 1)").is_err());
        assert!(parse_swaps("..").is_err());
    }
}
