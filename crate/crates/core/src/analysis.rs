//! Verification sweeps and rescaling experiments.
//!
//! Every sweep is a deterministic function of its arguments: sample `i`
//! draws from its own ChaCha8 stream (`seed`, stream `i`), samples are
//! collected in index order and reduced sequentially, so sequential and
//! parallel runs give identical reports.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedform::{
    awesome_length, awesome_path, d_h_closed_form, deviation_bound_k, euclidean_path_length, lemma_inequality,
    monotone_check, network_part, norm_f, path_through, Lemma, PartKind, LEMMA_TOLERANCE, LIPSCHITZ_BOUND,
    DILATION_BOUND, SANDWICH_GAP,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geom::{point_segment_distance, DirectedSegment, Point2};
use crate::metric::{OffsetTable, PeriodicMetric};
use crate::pattern::{checkered_pattern, Stitch, StitchIndex};

/// Outcome of one verification suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub name: String,
    pub samples: usize,
    pub max_abs_error: f64,
    pub worst_witness: Option<(Point2, Point2)>,
    pub threshold: f64,
    /// Discrete failures not measured by `max_abs_error`, such as equality
    /// cases outside the expected set.
    pub violations: usize,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl Report {
    fn new(name: &str, samples: usize, worst: Worst, threshold: f64, violations: usize) -> Self {
        Report {
            name: name.to_string(),
            samples,
            max_abs_error: worst.error,
            worst_witness: worst.witness,
            threshold,
            violations,
            pass: worst.error <= threshold && violations == 0,
            notes: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub const CSV_HEADER: &'static str =
        "suite,samples,max_abs_error,threshold,pass,witness_x1,witness_y1,witness_x2,witness_y2";

    pub fn csv_row(&self) -> String {
        let (a, b) = match self.worst_witness {
            Some((a, b)) => (
                [format_number(a.x), format_number(a.y)],
                [format_number(b.x), format_number(b.y)],
            ),
            None => ([String::new(), String::new()], [String::new(), String::new()]),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.name,
            self.samples,
            format_number(self.max_abs_error),
            format_number(self.threshold),
            self.pass,
            a[0],
            a[1],
            b[0],
            b[1]
        )
    }
}

/// CSV text for a list of reports, header included.
pub fn reports_csv(reports: &[Report]) -> String {
    let mut out = String::from(Report::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Formats with 12 significant digits, like C's `%.12g`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    trim_zeros(&format!("{:.*}", (11 - exp) as usize, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Largest error seen so far and where.
#[derive(Clone, Copy, Debug)]
struct Worst {
    error: f64,
    witness: Option<(Point2, Point2)>,
}

impl Worst {
    const NONE: Worst = Worst {
        error: 0.0,
        witness: None,
    };

    fn at(error: f64, a: Point2, b: Point2) -> Worst {
        Worst {
            error,
            witness: Some((a, b)),
        }
    }

    /// Keeps the earlier entry on ties, so the reduction is order-stable.
    fn max(self, other: Worst) -> Worst {
        if other.error > self.error || (self.witness.is_none() && other.witness.is_some() && other.error >= self.error) {
            other
        } else {
            self
        }
    }
}

fn reduce(items: impl IntoIterator<Item = Worst>) -> Worst {
    items.into_iter().fold(Worst::NONE, Worst::max)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniform point of the closed Euclidean disk of radius `r`.
fn sample_disk(rng: &mut ChaCha8Rng, r: f64) -> Point2 {
    loop {
        let p = Point2::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        if p.norm() <= r {
            return p;
        }
    }
}

fn require_table(table: &OffsetTable, window: f64) -> Result<()> {
    if table.hop_limit().is_some() {
        return Err(Error::InvalidArgument("stitch sweeps need an exact table".into()));
    }
    if table.offset_radius() + 1e-9 < 2.0 * window {
        return Err(Error::InsufficientWindow {
            required: 2.0 * window,
            available: table.offset_radius(),
        });
    }
    Ok(())
}

fn window_indices(window: f64) -> Vec<StitchIndex> {
    checkered_pattern(window).stitches().iter().map(|s| s.index).collect()
}

/// Closed-form stitch distance from the origin against the graph oracle,
/// for every stitch of the window.
pub fn verify_formula(table: &OffsetTable, window: f64, exec: Execution) -> Result<Report> {
    require_table(table, window / 2.0)?;
    let targets: Vec<StitchIndex> = window_indices(window)
        .into_iter()
        .filter(|j| *j != StitchIndex::ORIGIN)
        .collect();
    let o = StitchIndex::ORIGIN;
    let errs = exec.map(targets.len(), |i| -> Result<Worst> {
        let j = targets[i];
        let e = (table.distance(&o, &j)? - d_h_closed_form(&j)?).abs();
        Ok(Worst::at(e, o.center(), j.center()))
    });
    let worst = reduce(errs.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(Report::new("formula", targets.len(), worst, 1e-9, 0))
}

/// Whether `k` is reached from `j` by a single network part.
pub fn network_adjacent(j: &StitchIndex, k: &StitchIndex) -> bool {
    PartKind::from_offset(k.j1 - j.j1, k.j2 - j.j2)
        .and_then(|kind| network_part(kind, k).ok())
        .is_some_and(|part| part.source == *j)
}

/// Over all ordered pairs of the window: the awesome path is no longer than
/// the straight hop, ties exactly on network-adjacent pairs, and its length
/// is the oracle distance.
pub fn verify_awesome(table: &OffsetTable, window: f64, exec: Execution) -> Result<Report> {
    require_table(table, window)?;
    let ids = window_indices(window);
    let n = ids.len();
    let rows = exec.map(n, |a| -> Result<(Worst, usize, usize)> {
        let j = ids[a];
        let mut worst = Worst::NONE;
        let (mut ties, mut wrong) = (0, 0);
        for (b, k) in ids.iter().enumerate() {
            if a == b {
                continue;
            }
            let aw = awesome_length(&j, k)?;
            let eu = euclidean_path_length(&j, k);
            let oracle = table.distance(&j, k)?;
            let built = awesome_path(&j, k)?.total_length();
            let e = (aw - oracle).abs().max((aw - eu).max(0.0)).max((built - aw).abs());
            worst = worst.max(Worst::at(e, j.center(), k.center()));
            let tie = (aw - eu).abs() <= 1e-9;
            ties += tie as usize;
            wrong += (tie != network_adjacent(&j, k)) as usize;
        }
        Ok((worst, ties, wrong))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let ties: usize = rows.iter().map(|r| r.1).sum();
    let wrong: usize = rows.iter().map(|r| r.2).sum();
    let worst = reduce(rows.iter().map(|r| r.0));
    Ok(Report::new("awesome", n * (n - 1), worst, 1e-9, wrong)
        .note(format!("equality pairs: {ties}, outside the adjacent set: {wrong}")))
}

/// Nonnegativity, homogeneity and the triangle inequality of the norm on
/// seeded vectors from `[-10, 10]^2` and scalars from `[-10, 10]`.
pub fn verify_norm_axioms(n_samples: usize, seed: u64, exec: Execution) -> Report {
    let errs = exec.map(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let u = Point2::new(rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
        let v = Point2::new(rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
        let a: f64 = rng.gen_range(-10.0..=10.0);
        let homogeneity = (norm_f(v * a) - a.abs() * norm_f(v)).abs();
        let triangle = (norm_f(u + v) - norm_f(u) - norm_f(v)).max(0.0);
        // positivity off the origin, measured against the smallest value
        // F can take at that Euclidean length
        let positivity = if v.norm() >= 1e-6 {
            (2.0 / 3.0 * v.norm() - norm_f(v)).max(0.0)
        } else {
            0.0
        };
        Worst::at(homogeneity.max(triangle).max(positivity), u, v)
    });
    let at_zero = norm_f(Point2::ORIGIN).abs();
    let worst = reduce(errs).max(Worst::at(at_zero, Point2::ORIGIN, Point2::ORIGIN));
    Report::new("norm", n_samples, worst, 1e-12, 0)
}

/// Vertices of the unit ball of the norm, counterclockwise from `(1.5, 0)`.
pub fn octagon_vertices() -> [Point2; 8] {
    let d = 3.0 * SQRT_2 / 4.0;
    [
        Point2::new(1.5, 0.0),
        Point2::new(d, d),
        Point2::new(0.0, 1.5),
        Point2::new(-d, d),
        Point2::new(-1.5, 0.0),
        Point2::new(-d, -d),
        Point2::new(0.0, -1.5),
        Point2::new(d, -d),
    ]
}

/// Points of the unit sphere of the norm on `n_points` equally spaced rays.
pub fn trace_unit_sphere(n_points: usize) -> Result<Vec<Point2>> {
    if n_points < 8 {
        return Err(Error::InvalidArgument("tracing needs at least 8 rays".into()));
    }
    Ok((0..n_points)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n_points as f64;
            let dir = Point2::new(t.cos(), t.sin());
            dir * (1.0 / norm_f(dir))
        })
        .collect())
}

fn distance_to_polygon(p: Point2, vertices: &[Point2]) -> f64 {
    (0..vertices.len())
        .map(|i| {
            let s = DirectedSegment::new(vertices[i], vertices[(i + 1) % vertices.len()]);
            point_segment_distance(p, &s).distance
        })
        .fold(f64::INFINITY, f64::min)
}

/// The traced sphere against the regular octagon: distance of every trace
/// point to its boundary, vertex radii 1.5 and convexity of the trace.
pub fn verify_unit_sphere(n_points: usize) -> Result<Report> {
    let trace = trace_unit_sphere(n_points)?;
    let oct = octagon_vertices();
    let mut worst = Worst::NONE;
    for p in &trace {
        worst = worst.max(Worst::at(distance_to_polygon(*p, &oct), *p, Point2::ORIGIN));
    }
    for v in oct {
        worst = worst.max(Worst::at((v.norm() - 1.5).abs(), v, Point2::ORIGIN));
        worst = worst.max(Worst::at((norm_f(v) - 1.0).abs(), v, Point2::ORIGIN));
    }
    let n = trace.len();
    let turns_right = (0..n)
        .filter(|&i| {
            let (a, b, c) = (trace[i], trace[(i + 1) % n], trace[(i + 2) % n]);
            (b - a).cross(c - b) < -1e-12
        })
        .count();
    Ok(Report::new("sphere", n, worst, 1e-6, turns_right))
}

/// Empirical and analytic Lipschitz constants of the norm.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationEstimate {
    pub samples: usize,
    /// Sup of `|F(a) - F(b)| / |a - b|` over the samples.
    pub empirical: f64,
    pub witness: (Point2, Point2),
    /// Max of F over the Euclidean unit circle, `(1/3)√(16 - 8√2)`.
    pub analytic: f64,
    pub lipschitz_bound: f64,
    pub dilation_bound: f64,
}

/// `(1/3)√(16 - 8√2)`, attained at 22.5° off an axis.
pub fn analytic_dilation() -> f64 {
    (16.0 - 8.0 * SQRT_2).sqrt() / 3.0
}

/// Samples pairs from the radius-10 disk; the axis pair `(1, 0), (0, 0)`
/// is always included.
pub fn estimate_dilation(n_samples: usize, seed: u64, exec: Execution) -> DilationEstimate {
    let ratio = |a: Point2, b: Point2| (norm_f(a) - norm_f(b)).abs() / a.distance(b);
    let axis = (Point2::new(1.0, 0.0), Point2::ORIGIN);
    let rows = exec.map(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let a = sample_disk(&mut rng, 10.0);
        let b = sample_disk(&mut rng, 10.0);
        if a == b {
            Worst::NONE
        } else {
            Worst::at(ratio(a, b), a, b)
        }
    });
    let worst = Worst::at(ratio(axis.0, axis.1), axis.0, axis.1).max(reduce(rows));
    DilationEstimate {
        samples: n_samples,
        empirical: worst.error,
        witness: worst.witness.unwrap_or(axis),
        analytic: analytic_dilation(),
        lipschitz_bound: LIPSCHITZ_BOUND,
        dilation_bound: DILATION_BOUND,
    }
}

/// Dilation as a report: passes when the empirical sup lies in
/// `[2/3, 2√2/3]` up to 1e-9. The error column is the excess over `2√2/3`.
pub fn verify_dilation(n_samples: usize, seed: u64, exec: Execution) -> Report {
    let est = estimate_dilation(n_samples, seed, exec);
    let excess = (est.empirical - LIPSCHITZ_BOUND).max(0.0);
    let below = (est.empirical < 2.0 / 3.0 - 1e-9) as usize;
    Report::new(
        "dilation",
        est.samples,
        Worst::at(excess, est.witness.0, est.witness.1),
        1e-9,
        below,
    )
    .note(format!(
        "empirical {} analytic {} bounds {} {}",
        format_number(est.empirical),
        format_number(est.analytic),
        format_number(est.lipschitz_bound),
        format_number(est.dilation_bound)
    ))
}

/// One sampled pair of a deviation sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationSample {
    pub x: Point2,
    pub y: Point2,
    pub distance: f64,
    /// `F(x - y)`.
    pub norm_of_difference: f64,
    /// `F(x) - F(y)`.
    pub difference_of_norms: f64,
}

impl DeviationSample {
    /// `|d̄(x, y) - F(x - y)|`.
    pub fn deviation(&self) -> f64 {
        (self.distance - self.norm_of_difference).abs()
    }

    /// `|d̄(x, y) - [F(x) - F(y)]|`.
    pub fn bracket_deviation(&self) -> f64 {
        (self.distance - self.difference_of_norms).abs()
    }

    pub const CSV_HEADER: &'static str = "x1,y1,x2,y2,distance,F_of_difference,deviation,F_difference,bracket_deviation";

    pub fn csv_row(&self) -> String {
        [
            self.x.x,
            self.x.y,
            self.y.x,
            self.y.y,
            self.distance,
            self.norm_of_difference,
            self.deviation(),
            self.difference_of_norms,
            self.bracket_deviation(),
        ]
        .map(format_number)
        .join(",")
    }
}

/// Pairs `x, y` uniform in the radius-`ball_radius` disk, scaled by `scale`,
/// with `d̄(Rx, Ry)/R` against `F(x - y)`.
pub fn deviation_samples(
    metric: &PeriodicMetric,
    scale: f64,
    ball_radius: f64,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<DeviationSample>> {
    if !(scale > 0.0) || !(ball_radius > 0.0) {
        return Err(Error::InvalidArgument("scale and ball radius must be positive".into()));
    }
    exec.map(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let x = sample_disk(&mut rng, ball_radius);
        let y = sample_disk(&mut rng, ball_radius);
        let d = metric.distance(x * scale, y * scale)? / scale;
        Ok(DeviationSample {
            x,
            y,
            distance: d,
            norm_of_difference: norm_f(x - y),
            difference_of_norms: norm_f(x) - norm_f(y),
        })
    })
    .into_iter()
    .collect()
}

fn sup_deviation(samples: &[DeviationSample]) -> Worst {
    reduce(samples.iter().map(|s| Worst::at(s.deviation(), s.x, s.y)))
}

/// Sup of `|d̄(x, y) - F(x - y)|` over sampled pairs of the disk, against
/// the uniform bound `K`.
pub fn deviation_sup(
    metric: &PeriodicMetric,
    ball_radius: f64,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let samples = deviation_samples(metric, 1.0, ball_radius, n_samples, seed, exec)?;
    let worst = sup_deviation(&samples);
    let bracket = samples.iter().map(DeviationSample::bracket_deviation).fold(0.0, f64::max);
    Ok(Report::new("deviation", n_samples, worst, deviation_bound_k(), 0)
        .note(format!("empirical sup {}", format_number(worst.error)))
        .note(format!("sup against F(x) - F(y): {}", format_number(bracket))))
}

/// One scale of a rescaling experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub scale: f64,
    pub sup_deviation: f64,
    /// `K / R`.
    pub bound: f64,
    pub samples: usize,
    pub seed: u64,
}

impl ConvergencePoint {
    pub fn within_bound(&self) -> bool {
        self.sup_deviation <= self.bound
    }

    pub const CSV_HEADER: &'static str = "R,sup_deviation,bound_K_over_R,samples,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            format_number(self.scale),
            format_number(self.sup_deviation),
            format_number(self.bound),
            self.samples,
            self.seed
        )
    }
}

/// CSV text for a convergence curve, header included.
pub fn convergence_csv(curve: &[ConvergencePoint]) -> String {
    let mut out = String::from(ConvergencePoint::CSV_HEADER);
    out.push('\n');
    for p in curve {
        let _ = writeln!(out, "{}", p.csv_row());
    }
    out
}

/// For each scale `R`, the sup over sampled pairs of the radius-`ball_radius`
/// disk of `|d̄(Rx, Ry)/R - F(x - y)|`. The same pairs are used at every
/// scale. The sup bounds the distortion of the identity correspondence
/// between the rescaled ball and the ball of the norm.
pub fn convergence_curve(
    metric: &PeriodicMetric,
    scales: &[f64],
    ball_radius: f64,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<ConvergencePoint>> {
    let k = deviation_bound_k();
    scales
        .iter()
        .map(|&r| {
            let samples = deviation_samples(metric, r, ball_radius, n_samples, seed, exec)?;
            Ok(ConvergencePoint {
                scale: r,
                sup_deviation: sup_deviation(&samples).error,
                bound: k / r,
                samples: n_samples,
                seed,
            })
        })
        .collect()
}

/// Reach a [`PeriodicMetric`] needs for sweeps over the given disk and scales.
pub fn reach_for(ball_radius: f64, scales: &[f64]) -> f64 {
    2.0 * ball_radius * scales.iter().cloned().fold(1.0, f64::max)
}

fn is_documented_equality(lemma: Lemma, x: f64, y: f64) -> bool {
    match lemma {
        Lemma::Ineq1 => x.abs() == 1.5 && y.abs() == 1.5,
        Lemma::Ineq2 => x.abs() == 3.0 && y == 0.0,
        Lemma::Ineq3 => false,
    }
}

fn lemma_sample(lemma: Lemma, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    match lemma {
        Lemma::Ineq1 => (
            sign(rng) * rng.gen_range(1.5..=100.0),
            sign(rng) * rng.gen_range(1.5..=100.0),
        ),
        Lemma::Ineq2 => (
            sign(rng) * 3.0 * rng.gen_range(1..=33) as f64,
            3.0 * rng.gen_range(-33..=33) as f64,
        ),
        Lemma::Ineq3 => (0.0, sign(rng) * rng.gen_range(3.0..=1000.0)),
    }
}

/// The equality points each lemma names, evaluated alongside the samples.
pub fn lemma_witnesses(lemma: Lemma) -> Vec<(f64, f64)> {
    match lemma {
        Lemma::Ineq1 => vec![(1.5, 1.5), (-1.5, 1.5), (1.5, -1.5), (-1.5, -1.5)],
        Lemma::Ineq2 => vec![(3.0, 0.0), (-3.0, 0.0)],
        Lemma::Ineq3 => vec![(0.0, 3.0), (0.0, -3.0)],
    }
}

/// One report per lemma: the error column is the largest violation
/// `max(0, -slack)`; zero slack away from the documented witnesses counts
/// as a violation.
pub fn verify_lemma_inequalities(n_samples: usize, seed: u64, exec: Execution) -> Result<Vec<Report>> {
    Lemma::ALL
        .iter()
        .enumerate()
        .map(|(li, &lemma)| {
            let witnesses = lemma_witnesses(lemma);
            let stream_base = (li as u64) << 40;
            let mut points = witnesses.clone();
            points.extend(exec.map(n_samples, |i| lemma_sample(lemma, &mut rng_for(seed, stream_base + i as u64))));
            let mut worst = Worst::NONE;
            let mut equalities = 0;
            let mut stray = 0;
            for &(x, y) in &points {
                let e = lemma_inequality(lemma, x, y)?;
                worst = worst.max(Worst::at((-e.slack).max(0.0), Point2::new(x, y), Point2::ORIGIN));
                if e.slack.abs() <= LEMMA_TOLERANCE {
                    equalities += 1;
                    stray += !is_documented_equality(lemma, x, y) as usize;
                }
            }
            Ok(Report::new(
                &format!("lemma-{}", lemma.name()),
                points.len(),
                worst,
                LEMMA_TOLERANCE,
                stray,
            )
            .note(format!("equality cases: {equalities}")))
        })
        .collect()
}

/// For every `j` with `j1 != 0` in the window, whether the fewest-hop
/// geodesic from the origin is a monotone network path. The error column
/// counts failures.
pub fn verify_monotone_geodesics(table: &OffsetTable, window: f64, exec: Execution) -> Result<Report> {
    require_table(table, window / 2.0)?;
    let host = checkered_pattern(window + 6.0);
    let targets: Vec<StitchIndex> = window_indices(window).into_iter().filter(|j| j.j1 != 0.0).collect();
    let o = StitchIndex::ORIGIN;
    let rows = exec.map(targets.len(), |i| -> Result<Worst> {
        let j = targets[i];
        let seq = table.min_hop_path(&o, &j)?;
        let ok = monotone_check(&path_through(&seq), &host).unwrap_or(false);
        Ok(Worst::at(if ok { 0.0 } else { 1.0 }, o.center(), j.center()))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let failures = rows.iter().filter(|w| w.error > 0.0).count();
    Ok(Report::new("monotone", targets.len(), reduce(rows), 0.0, 0)
        .note(format!("non-monotone geodesics: {failures}")))
}

/// `F(j) <= d(I_0, I_j) <= F(j) + 2√2 - 2` over the window, and the upper
/// constant is attained.
pub fn verify_sandwich(window: f64) -> Result<Report> {
    let mut worst = Worst::NONE;
    let mut top = Worst::NONE;
    let targets: Vec<StitchIndex> = window_indices(window)
        .into_iter()
        .filter(|j| *j != StitchIndex::ORIGIN)
        .collect();
    for j in &targets {
        let f = norm_f(j.center());
        let d = d_h_closed_form(j)?;
        let excess = (f - d).max(d - f - SANDWICH_GAP).max(0.0);
        worst = worst.max(Worst::at(excess, Point2::ORIGIN, j.center()));
        top = top.max(Worst::at(d - f, Point2::ORIGIN, j.center()));
    }
    let attained = (top.error - SANDWICH_GAP).abs() <= 1e-9;
    let mut r = Report::new("sandwich", targets.len(), worst, 1e-9, (!attained) as usize)
        .note(format!("largest gap {}", format_number(top.error)));
    if let Some((_, j)) = top.witness {
        r = r.note(format!("attained at ({}, {})", format_number(j.x), format_number(j.y)));
    }
    Ok(r)
}

/// Symmetry, the triangle inequality, identity on stitches and the
/// Euclidean upper bound on seeded triples of the radius-`radius` disk.
pub fn verify_metric_axioms(
    metric: &PeriodicMetric,
    radius: f64,
    n_samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let pattern = checkered_pattern(radius);
    let stitches = pattern.stitches();
    let rows = exec.map(n_samples, |i| -> Result<Worst> {
        let mut rng = rng_for(seed, i as u64);
        let x = sample_disk(&mut rng, radius);
        let y = sample_disk(&mut rng, radius);
        let z = sample_disk(&mut rng, radius);
        let d = |a: Point2, b: Point2| metric.distance(a, b);
        let (xy, yx, yz, xz) = (d(x, y)?, d(y, x)?, d(y, z)?, d(x, z)?);
        let mut w = Worst::at((xy - yx).abs(), x, y);
        w = w.max(Worst::at((xz - xy - yz).max(0.0), x, z));
        w = w.max(Worst::at(d(x, x)?, x, x));
        w = w.max(Worst::at((xy - x.distance(y)).max(0.0), x, y));
        w = w.max(Worst::at((-xy).max(0.0), x, y));
        let s: &Stitch = &stitches[rng.gen_range(0..stitches.len())];
        let (p, q) = (s.segment.point_at(rng.gen()), s.segment.point_at(rng.gen()));
        w = w.max(Worst::at(d(p, q)?, p, q));
        Ok(w)
    });
    let worst = reduce(rows.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(Report::new("metric", n_samples, worst, 1e-9, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PeriodicPattern;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.8), "1.8");
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(SQRT_2), "1.41421356237");
        assert_eq!(format_number(-11.185449728701), "-11.1854497287");
        assert_eq!(format_number(1e-9), "1e-09");
        assert_eq!(format_number(1.5e-13), "1.5e-13");
        assert_eq!(format_number(0.0001234), "0.0001234");
        assert_eq!(format_number(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn disk_samples_stay_inside() {
        let mut rng = rng_for(3, 0);
        for _ in 0..1000 {
            assert!(sample_disk(&mut rng, 5.0).norm() <= 5.0);
        }
    }

    #[test]
    fn small_formula_sweeps() {
        let t = OffsetTable::exact(&PeriodicPattern::checkered(), 12.0).unwrap();
        let r = verify_formula(&t, 6.0, Execution::Sequential).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_formula(&t, 2.0, Execution::Sequential).unwrap();
        assert!(r.pass);
        assert_eq!(r.samples, 4);
        let r = verify_awesome(&t, 3.0, Execution::Sequential).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_awesome(&t, 9.0, Execution::Sequential).is_err());
    }

    #[test]
    fn adjacency() {
        let i = |a, b| StitchIndex::checkered(a, b).unwrap();
        let o = StitchIndex::ORIGIN;
        assert!(network_adjacent(&o, &i(1.5, 1.5)));
        assert!(network_adjacent(&o, &i(-3.0, 0.0)));
        assert!(!network_adjacent(&o, &i(0.0, 3.0)));
        assert!(network_adjacent(&i(1.5, 1.5), &i(1.5, -1.5)));
        assert!(!network_adjacent(&i(1.5, 1.5), &i(4.5, 1.5)));
    }

    #[test]
    fn norm_and_sphere() {
        assert!(verify_norm_axioms(2000, 0, Execution::Sequential).pass);
        let f = norm_f(Point2::new(-2.0, -2.0));
        assert!((f - 4.0 * SQRT_2 / 3.0).abs() < 1e-12);
        let trace = trace_unit_sphere(8).unwrap();
        assert!(trace[0].approx_eq(Point2::new(1.5, 0.0), 1e-12));
        let d = 3.0 * SQRT_2 / 4.0;
        assert!(trace[1].approx_eq(Point2::new(d, d), 1e-12));
        assert!((trace[1].norm() - 1.5).abs() < 1e-12);
        assert!(trace_unit_sphere(7).is_err());
        assert!(verify_unit_sphere(720).unwrap().pass);
    }

    #[test]
    fn dilation_bounds() {
        let e = estimate_dilation(20_000, 1, Execution::Sequential);
        assert!(e.empirical <= LIPSCHITZ_BOUND + 1e-9);
        assert!(e.empirical >= 2.0 / 3.0);
        assert!((e.analytic - 0.7215948).abs() < 1e-6);
        let t = PI / 8.0;
        assert!((norm_f(Point2::new(t.cos(), t.sin())) - e.analytic).abs() < 1e-12);
    }

    #[test]
    fn lemmas_small() {
        let rs = verify_lemma_inequalities(500, 2, Execution::Sequential).unwrap();
        assert_eq!(rs.len(), 3);
        for r in rs {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn sandwich_attained() {
        let r = verify_sandwich(9.0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn identical_points_have_zero_deviation() {
        let m = PeriodicMetric::checkered(4.0).unwrap();
        let x = Point2::new(0.7, -1.1);
        assert_eq!(m.distance(x, x).unwrap(), 0.0);
    }

    #[test]
    fn csv_rows() {
        let r = verify_sandwich(3.0).unwrap();
        let csv = reports_csv(&[r]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(Report::CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[0], "sandwich");
        assert_eq!(row[4], "true");
    }
}
