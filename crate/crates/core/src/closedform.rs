//! Closed forms for the checkered pattern: the estimating norm, the stitch
//! distance formula, network parts and the explicit "awesome" paths, and the
//! elementary inequalities comparing them with straight hops.

use std::f64::consts::SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{segment_segment_nearest, DirectedSegment, Point2, EPS};
use crate::metric::{Path, PathEnd};
use crate::pattern::{Pattern, Stitch, StitchClass, StitchIndex};

/// Gap between the stitch distance from the origin and the norm: `2√2 - 2`.
pub const SANDWICH_GAP: f64 = 2.0 * SQRT_2 - 2.0;

/// Lipschitz constant of the norm from the coordinate-wise estimate, `2√2/3`.
pub const LIPSCHITZ_BOUND: f64 = 2.0 * SQRT_2 / 3.0;

/// Dilation bound from the sum rule, `(2 + √2)/3`.
pub const DILATION_BOUND: f64 = (2.0 + SQRT_2) / 3.0;

/// Smocking depth of the checkered pattern.
pub const CHECKERED_DEPTH: f64 = 1.5;

/// Stitch length of the checkered pattern.
pub const CHECKERED_LENGTH: f64 = 1.0;

/// `2h + C + 2 dil (h + L)`: the uniform bound on `|d̄(x, x') - F(x - x')|`
/// obtained from a stitch-level bound `C` and a Lipschitz norm.
pub fn uniform_deviation_bound(depth: f64, stitch_bound: f64, dilation: f64, length: f64) -> f64 {
    2.0 * depth + stitch_bound + 2.0 * dilation * (depth + length)
}

/// The published deviation threshold for the checkered pattern,
/// `(18 + 11√2)/3`. Evaluating [`uniform_deviation_bound`] with the checkered
/// constants gives the tighter `(13 + 11√2)/3`.
pub fn deviation_bound_k() -> f64 {
    (18.0 + 11.0 * SQRT_2) / 3.0
}

/// The estimating norm
/// `F(x) = (√2/3)(|x1| + |x2|) + ((2 - √2)/3) ||x1| - |x2||`.
pub fn norm_f(v: Point2) -> f64 {
    let (a, b) = (v.x.abs(), v.y.abs());
    SQRT_2 / 3.0 * (a + b) + (2.0 - SQRT_2) / 3.0 * (a - b).abs()
}

/// Stitch distance from `I_(0,0)` to `I_j`.
pub fn d_h_closed_form(j: &StitchIndex) -> Result<f64> {
    require_checkered(j)?;
    if j.j1 == 0.0 && j.j2 == 0.0 {
        return Err(Error::Domain("the formula excludes j = (0, 0)".into()));
    }
    if j.j1 != 0.0 {
        Ok(norm_f(j.center()))
    } else {
        Ok(2.0 * SQRT_2 + 2.0 / 3.0 * j.j2.abs() - 2.0)
    }
}

fn require_checkered(j: &StitchIndex) -> Result<()> {
    if j.is_checkered() {
        Ok(())
    } else {
        Err(Error::NotInLattice(j.j1, j.j2))
    }
}

/// Stitch distance between two indices via the pattern symmetry taking
/// `I_j` to the origin.
pub fn stitch_distance_closed_form(j: &StitchIndex, k: &StitchIndex) -> Result<f64> {
    require_checkered(j)?;
    require_checkered(k)?;
    if j.key() == k.key() {
        return Ok(0.0);
    }
    d_h_closed_form(&isometry_to_origin(j)?.apply_index(k))
}

/// An isometry of the plane of the form `p -> S(p) + shift`, where `S`
/// swaps the coordinates (reflection across `y = x`) or is the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneIsometry {
    pub swap: bool,
    pub shift: Point2,
}

impl PlaneIsometry {
    fn linear(&self, p: Point2) -> Point2 {
        if self.swap {
            Point2::new(p.y, p.x)
        } else {
            p
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.linear(p) + self.shift
    }

    pub fn apply_inverse(&self, q: Point2) -> Point2 {
        self.linear(q - self.shift)
    }

    pub fn apply_segment(&self, s: &DirectedSegment) -> DirectedSegment {
        DirectedSegment::new(self.apply(s.start), self.apply(s.end))
    }

    pub fn apply_index(&self, j: &StitchIndex) -> StitchIndex {
        let c = self.apply(j.center());
        let class = if self.swap { j.class.swapped() } else { j.class };
        StitchIndex::new(c.x, c.y, class)
    }

    pub fn inverse(&self) -> PlaneIsometry {
        // (S p + t)^-1 = S q - S t, S being an involution
        PlaneIsometry {
            swap: self.swap,
            shift: -self.linear(self.shift),
        }
    }
}

/// The pattern symmetry taking `I_j` onto `I_(0,0)`: reflection across
/// `y = x` for vertical stitches, followed by a translation.
pub fn isometry_to_origin(j: &StitchIndex) -> Result<PlaneIsometry> {
    require_checkered(j)?;
    let swap = j.class == StitchClass::Vertical;
    let reflected = if swap { Point2::new(j.j2, j.j1) } else { j.center() };
    Ok(PlaneIsometry {
        swap,
        shift: -reflected,
    })
}

/// The eight kinds of network part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartKind {
    NorthEast,
    NorthWest,
    SouthEast,
    SouthWest,
    Left,
    Right,
    Up,
    Down,
}

impl PartKind {
    pub const ALL: [PartKind; 8] = [
        PartKind::NorthEast,
        PartKind::NorthWest,
        PartKind::SouthEast,
        PartKind::SouthWest,
        PartKind::Left,
        PartKind::Right,
        PartKind::Up,
        PartKind::Down,
    ];

    /// Index offset from the source stitch to the target stitch.
    pub fn offset(self) -> (f64, f64) {
        match self {
            PartKind::NorthEast => (1.5, 1.5),
            PartKind::NorthWest => (-1.5, 1.5),
            PartKind::SouthEast => (1.5, -1.5),
            PartKind::SouthWest => (-1.5, -1.5),
            PartKind::Left => (-3.0, 0.0),
            PartKind::Right => (3.0, 0.0),
            PartKind::Up => (0.0, 3.0),
            PartKind::Down => (0.0, -3.0),
        }
    }

    pub fn from_offset(d1: f64, d2: f64) -> Option<PartKind> {
        PartKind::ALL.into_iter().find(|k| {
            let (a, b) = k.offset();
            (a - d1).abs() <= EPS && (b - d2).abs() <= EPS
        })
    }

    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            PartKind::NorthEast | PartKind::NorthWest | PartKind::SouthEast | PartKind::SouthWest
        )
    }

    /// Class both ends must have, for horizontals and verticals.
    pub fn required_class(self) -> Option<StitchClass> {
        match self {
            PartKind::Left | PartKind::Right => Some(StitchClass::Horizontal),
            PartKind::Up | PartKind::Down => Some(StitchClass::Vertical),
            _ => None,
        }
    }

    pub fn length(self) -> f64 {
        if self.is_diagonal() {
            SQRT_2
        } else {
            2.0
        }
    }

    pub fn arrow(self) -> char {
        match self {
            PartKind::NorthEast => '↗',
            PartKind::NorthWest => '↖',
            PartKind::SouthEast => '↘',
            PartKind::SouthWest => '↙',
            PartKind::Left => '←',
            PartKind::Right => '→',
            PartKind::Up => '↑',
            PartKind::Down => '↓',
        }
    }

    fn mapped(self, f: impl Fn(f64, f64) -> (f64, f64)) -> PartKind {
        let (a, b) = self.offset();
        let (c, d) = f(a, b);
        PartKind::from_offset(c, d).expect("the symmetry permutes network parts")
    }

    /// Reflection across the x-axis.
    pub fn reflect_x(self) -> PartKind {
        self.mapped(|a, b| (a, -b))
    }

    /// Reflection across the y-axis.
    pub fn reflect_y(self) -> PartKind {
        self.mapped(|a, b| (-a, b))
    }

    /// Reflection across the line `y = x`.
    pub fn reflect_diagonal(self) -> PartKind {
        self.mapped(|a, b| (b, a))
    }
}

impl fmt::Display for PartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.arrow())
    }
}

/// A shortest hop between two network-adjacent stitches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkPart {
    pub kind: PartKind,
    pub source: StitchIndex,
    pub target: StitchIndex,
    pub segment: DirectedSegment,
}

fn shortest_hop(from: &StitchIndex, to: &StitchIndex) -> DirectedSegment {
    segment_segment_nearest(&Stitch::new(*from).segment, &Stitch::new(*to).segment).as_segment()
}

/// The network part of the given kind ending at `target`, if it exists.
pub fn network_part(kind: PartKind, target: &StitchIndex) -> Result<NetworkPart> {
    require_checkered(target)?;
    let (a, b) = kind.offset();
    let source = target.offset(-a, -b)?;
    if let Some(class) = kind.required_class() {
        if target.class != class {
            return Err(Error::Domain(format!("{kind} parts join {class:?} stitches only")));
        }
    }
    Ok(NetworkPart {
        kind,
        source,
        target: *target,
        segment: shortest_hop(&source, target),
    })
}

/// The path through the given stitch sequence whose segments are shortest
/// hops between consecutive stitches.
pub fn path_through(stitches: &[StitchIndex]) -> Path {
    match stitches {
        [] => Path::stationary(PathEnd::Stitch(StitchIndex::ORIGIN)),
        [only] => Path::stationary(PathEnd::Stitch(*only)),
        [first, .., last] => Path {
            start: PathEnd::Stitch(*first),
            end: PathEnd::Stitch(*last),
            segments: stitches.windows(2).map(|w| shortest_hop(&w[0], &w[1])).collect(),
            junctions: stitches[1..stitches.len() - 1].to_vec(),
        },
    }
}

/// Word of network parts of the awesome path from `I_(0,0)` to `I_delta`.
pub fn awesome_word(delta: &StitchIndex) -> Result<Vec<PartKind>> {
    require_checkered(delta)?;
    Ok(word_from_origin(delta.j1, delta.j2))
}

fn count(v: f64) -> usize {
    v.round().max(0.0) as usize
}

fn word_from_origin(x: f64, y: f64) -> Vec<PartKind> {
    use PartKind::*;
    if x < 0.0 {
        return word_from_origin(-x, y).into_iter().map(PartKind::reflect_y).collect();
    }
    if y < 0.0 {
        return word_from_origin(x, -y).into_iter().map(PartKind::reflect_x).collect();
    }
    let mut w = Vec::new();
    if x == 0.0 && y == 0.0 {
        return w;
    }
    if x == 0.0 {
        w.push(NorthEast);
        w.extend(std::iter::repeat_n(Up, count(y / 3.0 - 1.0)));
        w.push(NorthWest);
    } else if x <= y {
        w.push(NorthEast);
        w.extend(std::iter::repeat_n(Up, count((y - x) / 3.0)));
        w.extend(std::iter::repeat_n(NorthEast, count(2.0 / 3.0 * x - 1.0)));
    } else {
        w.extend(std::iter::repeat_n(Right, count((x - y) / 3.0)));
        w.extend(std::iter::repeat_n(NorthEast, count(2.0 / 3.0 * y)));
    }
    w
}

/// Applies a word of network parts starting at `start`; the target of each
/// part is resolved from the running stitch.
pub fn follow_word(start: &StitchIndex, word: &[PartKind]) -> Result<Vec<NetworkPart>> {
    let mut cur = *start;
    let mut parts = Vec::with_capacity(word.len());
    for &kind in word {
        let (a, b) = kind.offset();
        let next = cur.offset(a, b)?;
        let part = network_part(kind, &next)?;
        if part.source.key() != cur.key() || part.source.class != cur.class {
            return Err(Error::Domain(format!("{kind} cannot leave {cur}")));
        }
        parts.push(part);
        cur = next;
    }
    Ok(parts)
}

/// The awesome path from `I_j` to `I_k`: the word for the image of `k`
/// under [`isometry_to_origin`], carried back to `I_j`.
pub fn awesome_path(j: &StitchIndex, k: &StitchIndex) -> Result<Path> {
    require_checkered(j)?;
    require_checkered(k)?;
    let t = isometry_to_origin(j)?;
    let delta = t.apply_index(k);
    let word: Vec<PartKind> = word_from_origin(delta.j1, delta.j2)
        .into_iter()
        .map(|p| if t.swap { p.reflect_diagonal() } else { p })
        .collect();
    let parts = follow_word(j, &word)?;
    let mut seq = vec![*j];
    seq.extend(parts.iter().map(|p| p.target));
    if let Some(last) = seq.last() {
        if last.key() != k.key() {
            return Err(Error::Domain(format!("awesome path from {j} ends at {last}, not {k}")));
        }
    }
    Ok(path_through(&seq))
}

/// Length of the awesome path from `I_j` to `I_k` by its piecewise formula
/// in the coordinates `delta` of the image of `k`.
pub fn awesome_length(j: &StitchIndex, k: &StitchIndex) -> Result<f64> {
    require_checkered(j)?;
    require_checkered(k)?;
    if j.key() == k.key() {
        return Ok(0.0);
    }
    let d = isometry_to_origin(j)?.apply_index(k);
    let (a, b) = (d.j1.abs(), d.j2.abs());
    if d.j1 != 0.0 {
        Ok(2.0 * SQRT_2 / 3.0 * a.min(b) + 2.0 / 3.0 * (a - b).abs())
    } else {
        Ok(2.0 * SQRT_2 + 2.0 / 3.0 * b - 2.0)
    }
}

/// Length of the shortest straight segment between the two stitches.
pub fn euclidean_path_length(j: &StitchIndex, k: &StitchIndex) -> f64 {
    shortest_hop(j, k).length()
}

/// `(|j1| + |j2|) / 3`.
pub fn depth(j: &StitchIndex) -> f64 {
    (j.j1.abs() + j.j2.abs()) / 3.0
}

/// Most diagonals a monotone network path from the origin can use:
/// `(2/3) min(|j1|, |j2|)`.
pub fn max_diagonals(j: &StitchIndex) -> Result<u32> {
    require_checkered(j)?;
    if j.j1 == 0.0 {
        return Err(Error::Domain("diagonal count requires j1 != 0".into()));
    }
    Ok(count(2.0 / 3.0 * j.j1.abs().min(j.j2.abs())) as u32)
}

/// Length of a network path with `n` parts of which `diagonals` are
/// diagonal.
pub fn network_path_length(n: u32, diagonals: u32) -> Result<f64> {
    if diagonals > n {
        return Err(Error::Domain(format!("{diagonals} diagonals exceed {n} parts")));
    }
    Ok(diagonals as f64 * SQRT_2 + 2.0 * (n - diagonals) as f64)
}

/// Identifies `s` as a network part of the checkered pattern: its ends lie
/// in network-adjacent stitches and it is the shortest hop between them.
pub fn classify_network_part(s: &DirectedSegment, pattern: &Pattern) -> Option<NetworkPart> {
    let from = pattern.stitches()[pattern.stitch_containing(s.start)?].index;
    let to = pattern.stitches()[pattern.stitch_containing(s.end)?].index;
    let kind = PartKind::from_offset(to.j1 - from.j1, to.j2 - from.j2)?;
    let part = network_part(kind, &to).ok()?;
    (part.source.key() == from.key()
        && part.segment.start.approx_eq(s.start, EPS)
        && part.segment.end.approx_eq(s.end, EPS))
    .then_some(part)
}

/// The four sets of part kinds a monotone network path may draw from.
pub const MONOTONE_SETS: [[PartKind; 3]; 4] = [
    [PartKind::Up, PartKind::Right, PartKind::NorthEast],
    [PartKind::Up, PartKind::Left, PartKind::NorthWest],
    [PartKind::Down, PartKind::Left, PartKind::SouthWest],
    [PartKind::Down, PartKind::Right, PartKind::SouthEast],
];

/// Kinds of the parts of a network path, in order.
pub fn part_kinds(p: &Path, pattern: &Pattern) -> Result<Vec<PartKind>> {
    p.segments
        .iter()
        .map(|s| {
            classify_network_part(s, pattern)
                .map(|part| part.kind)
                .ok_or_else(|| Error::NotNetworkPath(format!("{} -> {}", s.start, s.end)))
        })
        .collect()
}

/// Whether every part of the network path `p` lies in one monotone set.
pub fn monotone_check(p: &Path, pattern: &Pattern) -> Result<bool> {
    let kinds = part_kinds(p, pattern)?;
    Ok(MONOTONE_SETS
        .iter()
        .any(|set| kinds.iter().all(|k| set.contains(k))))
}

/// The three elementary inequalities behind "awesome beats Euclidean".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// Horizontal source, vertical target with `|x|, |y| >= 1.5`.
    Ineq1,
    /// Two horizontal stitches with `|x| >= 3`.
    Ineq2,
    /// Two horizontal stitches in one column, `|y| >= 3`.
    Ineq3,
}

impl Lemma {
    pub const ALL: [Lemma; 3] = [Lemma::Ineq1, Lemma::Ineq2, Lemma::Ineq3];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Ineq1 => "ineq1",
            Lemma::Ineq2 => "ineq2",
            Lemma::Ineq3 => "ineq3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaEvaluation {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
}

/// Slack below which an inequality counts as violated.
pub const LEMMA_TOLERANCE: f64 = 1e-12;

/// Evaluates the two sides of a lemma at `(x, y)`.
pub fn lemma_inequality(lemma: Lemma, x: f64, y: f64) -> Result<LemmaEvaluation> {
    let (ax, ay) = (x.abs(), y.abs());
    let awesome = |a: f64, b: f64| 2.0 * SQRT_2 / 3.0 * a.min(b) + 2.0 / 3.0 * (a - b).abs();
    let (lhs, rhs) = match lemma {
        Lemma::Ineq1 => {
            if ax < 1.5 || ay < 1.5 {
                return Err(Error::Domain(format!("ineq1 needs |x|, |y| >= 1.5, got ({x}, {y})")));
            }
            (awesome(ax, ay).powi(2), (ax - 0.5).powi(2) + (ay - 0.5).powi(2))
        }
        Lemma::Ineq2 => {
            let idx = StitchIndex::checkered(x, y).ok();
            if idx.map(|i| i.class) != Some(StitchClass::Horizontal) || ax < 3.0 {
                return Err(Error::Domain(format!(
                    "ineq2 needs (x, y) in 3Z x 3Z with |x| >= 3, got ({x}, {y})"
                )));
            }
            (awesome(ax, ay).powi(2), (ax - 1.0).powi(2) + ay * ay)
        }
        Lemma::Ineq3 => {
            if ay < 3.0 {
                return Err(Error::Domain(format!("ineq3 needs |y| >= 3, got {y}")));
            }
            (2.0 * SQRT_2 + 2.0 / 3.0 * ay - 2.0, ay)
        }
    };
    let slack = rhs - lhs;
    Ok(LemmaEvaluation {
        lhs,
        rhs,
        slack,
        holds: slack >= -LEMMA_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::checkered_pattern;

    fn idx(a: f64, b: f64) -> StitchIndex {
        StitchIndex::checkered(a, b).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn norm_values() {
        assert_eq!(norm_f(Point2::ORIGIN), 0.0);
        assert!(close(norm_f(Point2::new(3.0, 0.0)), 2.0));
        assert!(close(norm_f(Point2::new(1.0, 1.0)), 2.0 * SQRT_2 / 3.0));
        assert!(close(norm_f(Point2::new(-3.0, 3.0)), 2.0 * SQRT_2));
    }

    #[test]
    fn deviation_constant() {
        let k = deviation_bound_k();
        assert!(close(k, (18.0 + 11.0 * SQRT_2) / 3.0));
        assert!((k - 11.185450).abs() < 1e-6);
        let b = uniform_deviation_bound(CHECKERED_DEPTH, SANDWICH_GAP, DILATION_BOUND, CHECKERED_LENGTH);
        assert!(close(b, (13.0 + 11.0 * SQRT_2) / 3.0));
        assert!(b < k);
    }

    #[test]
    fn distance_formula_values() {
        assert!(close(d_h_closed_form(&idx(3.0, 0.0)).unwrap(), 2.0));
        assert!(close(d_h_closed_form(&idx(1.5, 1.5)).unwrap(), SQRT_2));
        assert!(close(d_h_closed_form(&idx(0.0, 3.0)).unwrap(), 2.0 * SQRT_2));
        assert!(close(d_h_closed_form(&idx(6.0, 3.0)).unwrap(), 2.0 + 2.0 * SQRT_2));
        assert!(d_h_closed_form(&StitchIndex::ORIGIN).is_err());
    }

    #[test]
    fn pairwise_formula_values() {
        assert!(close(stitch_distance_closed_form(&idx(3.0, 0.0), &idx(6.0, 0.0)).unwrap(), 2.0));
        // two verticals in one column are joined by a single upward part
        assert!(close(stitch_distance_closed_form(&idx(1.5, 1.5), &idx(1.5, 4.5)).unwrap(), 2.0));
        assert!(close(
            stitch_distance_closed_form(&idx(1.5, 1.5), &idx(4.5, 1.5)).unwrap(),
            2.0 * SQRT_2
        ));
        let o = StitchIndex::ORIGIN;
        assert_eq!(stitch_distance_closed_form(&o, &o).unwrap(), 0.0);
    }

    #[test]
    fn isometry_examples() {
        let t = isometry_to_origin(&idx(3.0, 0.0)).unwrap();
        assert!(!t.swap);
        assert_eq!(t.shift, Point2::new(-3.0, 0.0));

        let j = idx(1.5, 1.5);
        let t = isometry_to_origin(&j).unwrap();
        assert!(t.swap);
        let img = t.apply_segment(&Stitch::new(j).segment);
        let origin = Stitch::new(StitchIndex::ORIGIN).segment;
        let same = (img.start == origin.start && img.end == origin.end)
            || (img.start == origin.end && img.end == origin.start);
        assert!(same, "{img:?}");
        assert_eq!(t.apply_index(&j), StitchIndex::ORIGIN);
        let back = t.inverse();
        let q = Point2::new(0.3, -7.0);
        assert!(back.apply(t.apply(q)).approx_eq(q, 1e-12));
        assert!(t.apply_inverse(t.apply(q)).approx_eq(q, 1e-12));
    }

    #[test]
    fn isometries_preserve_the_pattern() {
        let p = checkered_pattern(10.0);
        for j in p.stitches() {
            let t = isometry_to_origin(&j.index).unwrap();
            for s in p.stitches() {
                let img = t.apply_index(&s.index);
                assert!(img.is_checkered(), "{} maps {} to {img}", j.index, s.index);
                // geometry of the image stitch is the image of the geometry
                let seg = t.apply_segment(&s.segment);
                let expect = Stitch::new(img).segment;
                assert!(
                    (seg.start.approx_eq(expect.start, 1e-12) && seg.end.approx_eq(expect.end, 1e-12))
                        || (seg.start.approx_eq(expect.end, 1e-12) && seg.end.approx_eq(expect.start, 1e-12))
                );
            }
        }
    }

    #[test]
    fn awesome_words() {
        use PartKind::*;
        assert_eq!(awesome_word(&idx(6.0, 3.0)).unwrap(), vec![Right, NorthEast, NorthEast]);
        assert_eq!(awesome_word(&idx(0.0, 3.0)).unwrap(), vec![NorthEast, NorthWest]);
        assert_eq!(awesome_word(&idx(3.0, 3.0)).unwrap(), vec![NorthEast, NorthEast]);
        assert_eq!(awesome_word(&idx(0.0, -6.0)).unwrap(), vec![SouthEast, Down, SouthWest]);
        assert_eq!(awesome_word(&idx(-6.0, -3.0)).unwrap(), vec![Left, SouthWest, SouthWest]);
    }

    #[test]
    fn awesome_path_lengths() {
        let o = StitchIndex::ORIGIN;
        let p = awesome_path(&o, &idx(6.0, 3.0)).unwrap();
        assert_eq!(p.combinatorial_length(), 3);
        assert!(close(p.total_length(), 2.0 + 2.0 * SQRT_2));
        assert!(close(awesome_length(&o, &idx(6.0, 3.0)).unwrap(), 2.0 + 2.0 * SQRT_2));
        assert!(close(awesome_path(&o, &idx(0.0, 3.0)).unwrap().total_length(), 2.0 * SQRT_2));
        assert!(close(awesome_length(&o, &idx(0.0, 3.0)).unwrap(), 2.0 * SQRT_2));
        assert!(close(awesome_path(&o, &idx(3.0, 3.0)).unwrap().total_length(), 2.0 * SQRT_2));
        let (j, k) = (idx(1.5, 1.5), idx(4.5, 1.5));
        assert!(close(awesome_length(&j, &k).unwrap(), 2.0 * SQRT_2));
        let p = awesome_path(&j, &k).unwrap();
        assert!(close(p.total_length(), 2.0 * SQRT_2));
        assert_eq!(p.visited_stitches().last(), Some(&k));
        assert!(awesome_path(&o, &o).unwrap().segments.is_empty());
    }

    #[test]
    fn awesome_paths_agree_with_their_formula() {
        let p = checkered_pattern(9.0);
        let host = checkered_pattern(15.0);
        for j in p.stitches() {
            for k in p.stitches() {
                let path = awesome_path(&j.index, &k.index).unwrap();
                let len = awesome_length(&j.index, &k.index).unwrap();
                assert!(close(path.total_length(), len), "{} {}", j.index, k.index);
                assert!(path.is_consistent(&host, 1e-9) || path.segments.is_empty());
            }
        }
    }

    #[test]
    fn euclidean_lengths() {
        let o = StitchIndex::ORIGIN;
        assert!(close(euclidean_path_length(&o, &idx(3.0, 0.0)), 2.0));
        assert!(close(euclidean_path_length(&o, &idx(1.5, 1.5)), SQRT_2));
        assert!(close(euclidean_path_length(&o, &idx(0.0, 3.0)), 3.0));
    }

    #[test]
    fn depth_and_diagonals() {
        assert_eq!(depth(&StitchIndex::ORIGIN), 0.0);
        assert_eq!(depth(&idx(1.5, 1.5)), 1.0);
        assert_eq!(depth(&idx(6.0, 3.0)), 3.0);
        assert_eq!(max_diagonals(&idx(3.0, 0.0)).unwrap(), 0);
        assert_eq!(max_diagonals(&idx(6.0, 3.0)).unwrap(), 2);
        assert_eq!(max_diagonals(&idx(4.5, 4.5)).unwrap(), 3);
        assert!(max_diagonals(&idx(0.0, 3.0)).is_err());
    }

    #[test]
    fn network_lengths() {
        assert_eq!(network_path_length(0, 0).unwrap(), 0.0);
        assert!(close(network_path_length(3, 2).unwrap(), 2.0 + 2.0 * SQRT_2));
        assert!(close(network_path_length(2, 2).unwrap(), 2.0 * SQRT_2));
        assert!(network_path_length(1, 2).is_err());
    }

    #[test]
    fn classification() {
        let p = checkered_pattern(6.0);
        let seg = |a: (f64, f64), b: (f64, f64)| DirectedSegment::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1));
        let part = classify_network_part(&seg((0.5, 0.0), (1.5, 1.0)), &p).unwrap();
        assert_eq!(part.kind, PartKind::NorthEast);
        assert_eq!(part.target, idx(1.5, 1.5));
        let part = classify_network_part(&seg((0.5, 0.0), (2.5, 0.0)), &p).unwrap();
        assert_eq!(part.kind, PartKind::Right);
        assert_eq!(part.target, idx(3.0, 0.0));
        assert!(classify_network_part(&seg((0.0, 0.0), (5.0, 7.0)), &p).is_none());
        // right stitches, wrong segment
        assert!(classify_network_part(&seg((0.0, 0.0), (3.0, 0.0)), &p).is_none());
    }

    #[test]
    fn monotonicity() {
        let p = checkered_pattern(9.0);
        let o = StitchIndex::ORIGIN;
        assert!(monotone_check(&awesome_path(&o, &idx(6.0, 3.0)).unwrap(), &p).unwrap());
        let zigzag = path_through(&[o, idx(1.5, 1.5), o]);
        assert!(!monotone_check(&zigzag, &p).unwrap());
        assert!(!monotone_check(&awesome_path(&o, &idx(0.0, 3.0)).unwrap(), &p).unwrap());
        let bad = Path {
            start: PathEnd::Point(Point2::new(0.0, 1.0)),
            end: PathEnd::Point(Point2::new(0.0, 2.0)),
            segments: vec![DirectedSegment::new(Point2::new(0.0, 1.0), Point2::new(0.0, 2.0))],
            junctions: vec![],
        };
        assert!(matches!(monotone_check(&bad, &p), Err(Error::NotNetworkPath(_))));
    }

    #[test]
    fn lemma_witnesses() {
        let e = lemma_inequality(Lemma::Ineq1, 1.5, 1.5).unwrap();
        assert!(e.holds && e.slack.abs() < 1e-12);
        let e = lemma_inequality(Lemma::Ineq2, 3.0, 0.0).unwrap();
        assert!(e.holds && e.slack.abs() < 1e-12);
        let e = lemma_inequality(Lemma::Ineq3, 0.0, 3.0).unwrap();
        assert!(e.holds && close(e.slack, 3.0 - 2.0 * SQRT_2));
        assert!(lemma_inequality(Lemma::Ineq1, 1.0, 2.0).is_err());
        assert!(lemma_inequality(Lemma::Ineq2, 1.5, 1.5).is_err());
        assert!(lemma_inequality(Lemma::Ineq2, 0.0, 3.0).is_err());
        assert!(lemma_inequality(Lemma::Ineq3, 0.0, 2.0).is_err());
    }

    #[test]
    fn network_part_geometry() {
        for kind in PartKind::ALL {
            let target = if kind.required_class() == Some(StitchClass::Vertical) || kind.is_diagonal() {
                idx(1.5, 1.5)
            } else {
                idx(3.0, 3.0)
            };
            let part = network_part(kind, &target).unwrap();
            assert!(close(part.segment.length(), kind.length()), "{kind}");
        }
        assert!(network_part(PartKind::Up, &StitchIndex::ORIGIN).is_err());
    }
}
