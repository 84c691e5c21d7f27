//! Smocking patterns.
//!
//! A [`Pattern`] is a finite set of pairwise disjoint unit stitches. The
//! checkered pattern is described by a [`PeriodicPattern`] (a motif repeated
//! on a rectangular lattice) and materialized as index windows.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, segment_distance, DirectedSegment, Point2, EPS};

/// Orientation of a unit stitch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StitchClass {
    Horizontal,
    Vertical,
}

impl StitchClass {
    pub fn letter(self) -> char {
        match self {
            StitchClass::Horizontal => 'H',
            StitchClass::Vertical => 'V',
        }
    }

    pub fn swapped(self) -> StitchClass {
        match self {
            StitchClass::Horizontal => StitchClass::Vertical,
            StitchClass::Vertical => StitchClass::Horizontal,
        }
    }
}

/// Index of a stitch: its center `(j1, j2)` and orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StitchIndex {
    pub j1: f64,
    pub j2: f64,
    pub class: StitchClass,
}

/// Hashable key for an index, quantized to 1e-6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexKey(i64, i64);

impl IndexKey {
    pub fn of(p: Point2) -> IndexKey {
        IndexKey((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64)
    }
}

fn on_lattice(v: f64, offset: f64) -> bool {
    let q = (v - offset) / 3.0;
    (q - q.round()).abs() <= EPS
}

impl StitchIndex {
    pub const ORIGIN: StitchIndex = StitchIndex {
        j1: 0.0,
        j2: 0.0,
        class: StitchClass::Horizontal,
    };

    pub fn new(j1: f64, j2: f64, class: StitchClass) -> Self {
        StitchIndex { j1, j2, class }
    }

    /// Index of the checkered pattern at `(j1, j2)`. The class follows from
    /// the lattice: `3Z x 3Z` is horizontal, `(3Z+1.5) x (3Z+1.5)` vertical.
    pub fn checkered(j1: f64, j2: f64) -> Result<Self> {
        let class = if on_lattice(j1, 0.0) && on_lattice(j2, 0.0) {
            StitchClass::Horizontal
        } else if on_lattice(j1, 1.5) && on_lattice(j2, 1.5) {
            StitchClass::Vertical
        } else {
            return Err(Error::NotInLattice(j1, j2));
        };
        // snap to the exact lattice value
        let snap = |v: f64| (v * 2.0).round() / 2.0;
        Ok(StitchIndex::new(snap(j1), snap(j2), class))
    }

    pub fn is_checkered(&self) -> bool {
        matches!(StitchIndex::checkered(self.j1, self.j2), Ok(i) if i.class == self.class)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.j1, self.j2)
    }

    pub fn key(&self) -> IndexKey {
        IndexKey::of(self.center())
    }

    pub fn offset(&self, d1: f64, d2: f64) -> Result<StitchIndex> {
        StitchIndex::checkered(self.j1 + d1, self.j2 + d2)
    }

    /// Lexicographic order on `(j1, j2)`.
    pub fn lex_cmp(&self, other: &StitchIndex) -> Ordering {
        self.j1
            .total_cmp(&other.j1)
            .then(self.j2.total_cmp(&other.j2))
    }
}

impl fmt::Display for StitchIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_({}, {})[{}]", self.j1, self.j2, self.class.letter())
    }
}

/// A unit stitch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stitch {
    pub index: StitchIndex,
    pub segment: DirectedSegment,
}

impl Stitch {
    /// The unit segment centered at the index, oriented by its class.
    pub fn new(index: StitchIndex) -> Self {
        let c = index.center();
        let half = match index.class {
            StitchClass::Horizontal => Point2::new(0.5, 0.0),
            StitchClass::Vertical => Point2::new(0.0, 0.5),
        };
        Stitch {
            index,
            segment: DirectedSegment::new(c - half, c + half),
        }
    }

    pub fn length(&self) -> f64 {
        self.segment.length()
    }
}

/// How much of the plane a pattern describes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    /// Index window `max(|j1|, |j2|) <= radius` of an infinite pattern.
    Window { radius: f64 },
    /// The pattern is the complete set of stitches.
    Finite,
}

/// The constants a pattern contributes to window sizing and to the
/// deviation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternConstants {
    pub separation: f64,
    pub max_stitch_length: f64,
}

impl PatternConstants {
    pub const CHECKERED: PatternConstants = PatternConstants {
        separation: std::f64::consts::SQRT_2,
        max_stitch_length: 1.0,
    };
}

/// A finite collection of pairwise disjoint stitches, sorted
/// lexicographically by index.
#[derive(Clone, Debug)]
pub struct Pattern {
    stitches: Vec<Stitch>,
    lookup: HashMap<IndexKey, usize>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    extent: Extent,
    separation: Option<f64>,
    max_stitch_length: f64,
    domain: (Point2, Point2),
}

impl Pattern {
    /// Builds a pattern, checking that stitches are pairwise disjoint.
    pub fn new(stitches: Vec<Stitch>, extent: Extent) -> Result<Self> {
        let mut stitches = stitches;
        stitches.sort_by(|a, b| a.index.lex_cmp(&b.index));
        let mut lookup = HashMap::with_capacity(stitches.len());
        for (i, s) in stitches.iter().enumerate() {
            if let Some(&prev) = lookup.get(&s.index.key()) {
                let prev: &Stitch = &stitches[prev];
                return Err(Error::StitchesNotDisjoint(prev.index, s.index));
            }
            lookup.insert(s.index.key(), i);
        }
        let separation = min_pair_distance(&stitches)?;
        let max_stitch_length = stitches.iter().map(Stitch::length).fold(0.0, f64::max);
        let domain = bounding_box(&stitches);
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, s) in stitches.iter().enumerate() {
            buckets.entry(bucket_of(s.index.center())).or_default().push(i);
        }
        Ok(Pattern {
            stitches,
            lookup,
            buckets,
            extent,
            separation,
            max_stitch_length,
            domain,
        })
    }

    pub fn stitches(&self) -> &[Stitch] {
        &self.stitches
    }

    pub fn len(&self) -> usize {
        self.stitches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stitches.is_empty()
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn window_radius(&self) -> Option<f64> {
        match self.extent {
            Extent::Window { radius } => Some(radius),
            Extent::Finite => None,
        }
    }

    pub fn max_stitch_length(&self) -> f64 {
        self.max_stitch_length
    }

    pub fn constants(&self) -> Result<PatternConstants> {
        Ok(PatternConstants {
            separation: separation_factor(self)?,
            max_stitch_length: self.max_stitch_length,
        })
    }

    pub fn id_of(&self, index: &StitchIndex) -> Option<usize> {
        self.lookup
            .get(&index.key())
            .copied()
            .filter(|&i| self.stitches[i].index.class == index.class)
    }

    pub fn get(&self, index: &StitchIndex) -> Result<&Stitch> {
        self.id_of(index)
            .map(|i| &self.stitches[i])
            .ok_or(Error::IndexNotInPattern(*index))
    }

    /// The stitch containing `p`, if any (the smocking map).
    pub fn stitch_containing(&self, p: Point2) -> Option<usize> {
        // Unit stitches containing `p` have their center within half a unit.
        let (bx, by) = bucket_of(p);
        let mut found: Option<usize> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &i in self.buckets.get(&(bx + dx, by + dy)).into_iter().flatten() {
                    if self.stitches[i].segment.contains(p, EPS) {
                        found = Some(found.map_or(i, |f| f.min(i)));
                    }
                }
            }
        }
        found
    }

    /// Region probed for the smocking depth: the fundamental domain
    /// `[0, 3]^2` for lattice windows, the bounding box of the stitches
    /// otherwise.
    pub fn probe_domain(&self) -> (Point2, Point2) {
        match self.extent {
            Extent::Window { .. } => (Point2::ORIGIN, Point2::new(3.0, 3.0)),
            Extent::Finite => self.domain,
        }
    }
}

fn bucket_of(p: Point2) -> (i64, i64) {
    (p.x.floor() as i64, p.y.floor() as i64)
}

fn bounding_box(stitches: &[Stitch]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in stitches {
        for p in [s.segment.start, s.segment.end] {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
    }
    if stitches.is_empty() {
        (Point2::ORIGIN, Point2::ORIGIN)
    } else {
        (lo, hi)
    }
}

/// Minimum distance between distinct stitches by a sweep over x-sorted
/// bounding boxes. `None` for fewer than two stitches.
fn min_pair_distance(stitches: &[Stitch]) -> Result<Option<f64>> {
    if stitches.len() < 2 {
        return Ok(None);
    }
    let bbox = |s: &Stitch| {
        let (a, b) = (s.segment.start, s.segment.end);
        (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
    };
    let mut order: Vec<usize> = (0..stitches.len()).collect();
    order.sort_by(|&a, &b| bbox(&stitches[a]).0.total_cmp(&bbox(&stitches[b]).0));
    let mut best = f64::INFINITY;
    for (pos, &i) in order.iter().enumerate() {
        let bi = bbox(&stitches[i]);
        for &k in &order[pos + 1..] {
            let bk = bbox(&stitches[k]);
            if bk.0 - bi.1 > best {
                break;
            }
            let gap_y = (bk.2 - bi.3).max(bi.2 - bk.3);
            if gap_y > best {
                continue;
            }
            let d = segment_distance(&stitches[i].segment, &stitches[k].segment);
            if d <= EPS {
                return Err(Error::StitchesNotDisjoint(
                    stitches[i].index,
                    stitches[k].index,
                ));
            }
            best = best.min(d);
        }
    }
    Ok(Some(best))
}

/// A motif of stitches repeated by the translations `(a * p1, b * p2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicPattern {
    pub period: (f64, f64),
    pub motif: Vec<StitchIndex>,
}

impl PeriodicPattern {
    /// The checkered pattern: horizontal stitches on `3Z x 3Z`, vertical ones
    /// on `(3Z+1.5) x (3Z+1.5)`.
    pub fn checkered() -> Self {
        PeriodicPattern {
            period: (3.0, 3.0),
            motif: vec![
                StitchIndex::new(0.0, 0.0, StitchClass::Horizontal),
                StitchIndex::new(1.5, 1.5, StitchClass::Vertical),
            ],
        }
    }

    /// Index of the motif element `m` translated by lattice cell `(a, b)`.
    pub fn index_at(&self, a: i64, b: i64, m: usize) -> StitchIndex {
        let base = self.motif[m];
        StitchIndex::new(
            base.j1 + a as f64 * self.period.0,
            base.j2 + b as f64 * self.period.1,
            base.class,
        )
    }

    /// Decomposes an index into `(cell_a, cell_b, motif)`, if it belongs to
    /// the pattern.
    pub fn locate(&self, index: &StitchIndex) -> Option<(i64, i64, usize)> {
        self.motif.iter().enumerate().find_map(|(m, base)| {
            if base.class != index.class {
                return None;
            }
            let a = (index.j1 - base.j1) / self.period.0;
            let b = (index.j2 - base.j2) / self.period.1;
            let (ar, br) = (a.round(), b.round());
            ((a - ar).abs() <= EPS && (b - br).abs() <= EPS).then_some((ar as i64, br as i64, m))
        })
    }

    /// Stitches whose index satisfies `max(|j1|, |j2|) <= radius`.
    pub fn window(&self, radius: f64) -> Pattern {
        let mut stitches = Vec::new();
        let cells_x = (radius / self.period.0).ceil() as i64 + 1;
        let cells_y = (radius / self.period.1).ceil() as i64 + 1;
        for a in -cells_x..=cells_x {
            for b in -cells_y..=cells_y {
                for m in 0..self.motif.len() {
                    let idx = self.index_at(a, b, m);
                    if idx.center().norm_inf() <= radius + EPS {
                        stitches.push(Stitch::new(idx));
                    }
                }
            }
        }
        Pattern::new(stitches, Extent::Window { radius })
            .expect("motif translates are disjoint")
    }
}

/// The checkered pattern restricted to the index window of `window_radius`.
pub fn checkered_pattern(window_radius: f64) -> Pattern {
    PeriodicPattern::checkered().window(window_radius.max(0.0))
}

/// Smallest distance between two distinct stitches.
pub fn separation_factor(pattern: &Pattern) -> Result<f64> {
    pattern.separation.ok_or(Error::SeparationUndefined)
}

/// Largest distance from a probe point to the stitch set, over the grid of
/// spacing `probe_grid_step` laid on the pattern's probe domain. The grid
/// always includes the domain corners, so grids whose steps divide each
/// other are nested.
pub fn smocking_depth(pattern: &Pattern, probe_grid_step: f64) -> Result<f64> {
    if !(probe_grid_step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "probe grid step must be positive, got {probe_grid_step}"
        )));
    }
    let (lo, hi) = pattern.probe_domain();
    let nx = ((hi.x - lo.x) / probe_grid_step).round() as usize;
    let ny = ((hi.y - lo.y) / probe_grid_step).round() as usize;
    let probes = (0..=nx).flat_map(|i| {
        (0..=ny).map(move |k| {
            Point2::new(
                lo.x + (hi.x - lo.x) * if nx == 0 { 0.0 } else { i as f64 / nx as f64 },
                lo.y + (hi.y - lo.y) * if ny == 0 { 0.0 } else { k as f64 / ny as f64 },
            )
        })
    });
    depth_at(pattern, probes)
}

/// Largest distance from the given probes to the stitch set.
pub fn depth_at(pattern: &Pattern, probes: impl IntoIterator<Item = Point2>) -> Result<f64> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("empty pattern".into()));
    }
    let mut worst: f64 = 0.0;
    for p in probes {
        let nearest = pattern
            .stitches()
            .iter()
            .map(|s| point_segment_distance(p, &s.segment).distance)
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    Ok(worst)
}

/// Parses the line-oriented pattern format: `H <j1> <j2>` or `V <j1> <j2>`
/// per line, `#` comment lines, blank lines ignored.
pub fn parse_pattern_file(text: &str) -> Result<Pattern> {
    let mut stitches = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected `H|V <j1> <j2>`, found {} fields",
                fields.len()
            )));
        }
        let class = match fields[0] {
            "H" => StitchClass::Horizontal,
            "V" => StitchClass::Vertical,
            other => return Err(parse_err(format!("unknown stitch class `{other}`"))),
        };
        let coord = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(format!("invalid number `{s}`")))
        };
        let (j1, j2) = (coord(fields[1])?, coord(fields[2])?);
        stitches.push(Stitch::new(StitchIndex::new(j1, j2, class)));
    }
    Pattern::new(stitches, Extent::Finite)
}
