//! `smock`: distances, geodesics, verification sweeps and pictures for
//! smocked patterns.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use smocking::analysis::{
    self, convergence_csv, convergence_curve, format_number, reach_for, reports_csv, Report,
};
use smocking::closedform::{classify_network_part, stitch_distance_closed_form};
use smocking::geom::Point2;
use smocking::metric::{geodesic, pseudometric, required_window, stitch_distance, OffsetTable, PeriodicMetric};
use smocking::pattern::{parse_pattern_file, PatternConstants};
use smocking::{checkered_pattern, Execution, Pattern, PeriodicPattern, StitchIndex};

#[derive(Parser, Debug)]
#[command(name = "smock", version, about = "Smocked metric spaces and the checkered pattern")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// Pattern file (`H|V <j1> <j2>` per line); the checkered pattern when omitted.
    #[arg(long, global = true)]
    pattern: Option<PathBuf>,
    /// Window radius of the checkered pattern.
    #[arg(long, global = true)]
    window: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (CSV or SVG, depending on the command).
    #[arg(long, global = true, visible_alias = "csv")]
    out: Option<PathBuf>,
    /// Allowed gap between the graph distance and the closed form.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Evaluate sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct PointPair {
    #[arg(long, allow_hyphen_values = true)]
    x1: f64,
    #[arg(long, allow_hyphen_values = true)]
    y1: f64,
    #[arg(long, allow_hyphen_values = true)]
    x2: f64,
    #[arg(long, allow_hyphen_values = true)]
    y2: f64,
}

impl PointPair {
    fn points(&self) -> (Point2, Point2) {
        (Point2::new(self.x1, self.y1), Point2::new(self.x2, self.y2))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smocked distance between two points.
    Dist(PointPair),
    /// Smocked distance between two stitches, given by index.
    StitchDist {
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["J1", "J2"])]
        j: Vec<f64>,
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["K1", "K2"])]
        k: Vec<f64>,
    },
    /// Shortest path between two points, hop by hop.
    Geodesic(PointPair),
    /// Run verification suites on the checkered pattern.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Disk radius for the deviation sweep; the metric-axiom sweep uses half of it.
        #[arg(long, default_value_t = 100.0)]
        ball: f64,
    },
    /// Rescaled deviation curve `sup |d(Rx, Ry)/R - F(x - y)|` against `K/R`.
    Converge {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0])]
        scales: Vec<f64>,
        #[arg(long, default_value_t = 5.0)]
        ball: f64,
        #[arg(long, default_value_t = 1_000)]
        samples: usize,
    },
    /// Trace the unit sphere of the limit norm.
    Sphere {
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// SVG of the pattern, optionally with a geodesic.
    Render {
        #[arg(long, num_args = 4, allow_hyphen_values = true, value_names = ["X1", "Y1", "X2", "Y2"])]
        geodesic: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Formula,
    Awesome,
    Norm,
    Lemmas,
    Monotone,
    Deviation,
    Sandwich,
    Dilation,
    Sphere,
    Metric,
    All,
}

impl Suite {
    const EACH: [Suite; 10] = [
        Suite::Formula,
        Suite::Awesome,
        Suite::Norm,
        Suite::Lemmas,
        Suite::Monotone,
        Suite::Deviation,
        Suite::Sandwich,
        Suite::Dilation,
        Suite::Sphere,
        Suite::Metric,
    ];

    fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Suite::EACH.to_vec()
        } else {
            vec![self]
        }
    }
}

/// Input problems exit with status 2, failed checks with status 1.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    if !(cfg.tolerance > 0.0) {
        bail!("--tolerance must be positive");
    }
    if let Some(w) = cfg.window {
        if !(w >= 0.0) {
            bail!("--window must be nonnegative");
        }
    }
    let exec = if cfg.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match &cli.command {
        Command::Dist(pair) => {
            let (x, y) = pair.points();
            let pattern = load_pattern(cfg, required_window(x, y, &PatternConstants::CHECKERED))?;
            let d = pseudometric(&pattern, x, y)?;
            emit(cfg, &format!("{}\n", format_number(d)))?;
            Ok(Outcome::Pass)
        }
        Command::StitchDist { j, k } => stitch_dist(cfg, j, k),
        Command::Geodesic(pair) => {
            let (x, y) = pair.points();
            let pattern = load_pattern(cfg, required_window(x, y, &PatternConstants::CHECKERED))?;
            let g = geodesic(&pattern, x, y)?;
            let mut out = format!("distance {}\nstitches {}\n", format_number(g.distance), g.stitch_count);
            for (i, s) in g.path.segments.iter().enumerate() {
                let kind = classify_network_part(s, &pattern)
                    .map(|p| p.kind.to_string())
                    .unwrap_or_else(|| "-".into());
                out.push_str(&format!(
                    "{i} ({}, {}) -> ({}, {}) {} {kind}\n",
                    format_number(s.start.x),
                    format_number(s.start.y),
                    format_number(s.end.x),
                    format_number(s.end.y),
                    format_number(s.length())
                ));
            }
            for j in &g.path.junctions {
                out.push_str(&format!("via {j}\n"));
            }
            emit(cfg, &out)?;
            Ok(Outcome::Pass)
        }
        Command::Verify { suite, samples, ball } => verify(cfg, exec, *suite, *samples, *ball),
        Command::Converge { scales, ball, samples } => {
            builtin_only(cfg, "converge")?;
            if scales.is_empty() || scales.iter().any(|s| !(*s > 0.0)) || !(*ball > 0.0) {
                bail!("scales and --ball must be positive");
            }
            let metric = PeriodicMetric::checkered(reach_for(*ball, scales))?;
            let curve = convergence_curve(&metric, scales, *ball, *samples, cfg.seed, exec)?;
            let csv = convergence_csv(&curve);
            print!("{csv}");
            if let Some(path) = &cfg.out {
                write_file(path, &csv)?;
            }
            Ok(if curve.iter().all(|p| p.within_bound()) {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Sphere { points } => {
            let trace = analysis::trace_unit_sphere(*points)?;
            let mut csv = String::from("x,y\n");
            for p in &trace {
                csv.push_str(&format!("{},{}\n", format_number(p.x), format_number(p.y)));
            }
            emit(cfg, &csv)?;
            let r = analysis::verify_unit_sphere(*points)?;
            eprintln!("{}", summary_line(&r, false));
            Ok(if r.pass { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Render { geodesic: pair } => {
            let ends = pair.as_ref().map(|v| (Point2::new(v[0], v[1]), Point2::new(v[2], v[3])));
            let needed = ends.map_or(9.0, |(x, y)| required_window(x, y, &PatternConstants::CHECKERED));
            let pattern = load_pattern(cfg, cfg.window.unwrap_or(needed))?;
            let path = match ends {
                Some((x, y)) => Some(geodesic(&pattern, x, y)?.path),
                None => None,
            };
            emit(cfg, &render::svg(&pattern, path.as_ref()))?;
            Ok(Outcome::Pass)
        }
    }
}

fn stitch_dist(cfg: &Config, j: &[f64], k: &[f64]) -> Result<Outcome> {
    let (j, k) = match &cfg.pattern {
        Some(_) => {
            let pattern = load_pattern(cfg, 0.0)?;
            let find = |a: f64, b: f64| -> Result<StitchIndex> {
                pattern
                    .stitches()
                    .iter()
                    .map(|s| s.index)
                    .find(|i| i.j1 == a && i.j2 == b)
                    .with_context(|| format!("no stitch at index ({a}, {b}) in the pattern file"))
            };
            let (j, k) = (find(j[0], j[1])?, find(k[0], k[1])?);
            let d = stitch_distance(&pattern, &j, &k)?;
            emit(cfg, &format!("{}\n", format_number(d)))?;
            return Ok(Outcome::Pass);
        }
        None => (StitchIndex::checkered(j[0], j[1])?, StitchIndex::checkered(k[0], k[1])?),
    };
    let w = required_window(j.center(), k.center(), &PatternConstants::CHECKERED);
    let pattern = load_pattern(cfg, w)?;
    let d = stitch_distance(&pattern, &j, &k)?;
    emit(cfg, &format!("{}\n", format_number(d)))?;
    let cf = stitch_distance_closed_form(&j, &k)?;
    if (d - cf).abs() > cfg.tolerance {
        eprintln!(
            "graph distance {} differs from the closed form {}",
            format_number(d),
            format_number(cf)
        );
        return Ok(Outcome::Fail);
    }
    Ok(Outcome::Pass)
}

fn verify(cfg: &Config, exec: Execution, suite: Suite, samples: usize, ball: f64) -> Result<Outcome> {
    builtin_only(cfg, "verify")?;
    if samples == 0 || !(ball > 0.0) {
        bail!("--samples and --ball must be positive");
    }
    let window = cfg.window.unwrap_or(15.0);
    if window < 3.0 {
        bail!("verification windows start at radius 3");
    }
    let suites = suite.expand();
    let needs = |s: &[Suite]| suites.iter().any(|x| s.contains(x));
    let table = if needs(&[Suite::Formula, Suite::Awesome, Suite::Monotone]) {
        let radius = if needs(&[Suite::Awesome]) { 2.0 * window } else { window };
        Some(OffsetTable::exact(&PeriodicPattern::checkered(), radius)?)
    } else {
        None
    };
    let metric = if needs(&[Suite::Deviation, Suite::Metric]) {
        Some(PeriodicMetric::checkered(2.0 * ball)?)
    } else {
        None
    };
    let seed = cfg.seed;
    let mut reports: Vec<(Report, bool)> = Vec::new();
    for s in suites {
        let table = || table.as_ref().expect("table built");
        let metric = || metric.as_ref().expect("metric built");
        match s {
            Suite::Formula => reports.push((analysis::verify_formula(table(), window, exec)?, true)),
            Suite::Awesome => reports.push((analysis::verify_awesome(table(), window, exec)?, true)),
            Suite::Norm => reports.push((analysis::verify_norm_axioms(samples, seed, exec), true)),
            Suite::Lemmas => {
                for r in analysis::verify_lemma_inequalities(samples, seed, exec)? {
                    reports.push((r, true));
                }
            }
            // an unproven claim: reported, never fatal
            Suite::Monotone => reports.push((analysis::verify_monotone_geodesics(table(), window, exec)?, false)),
            Suite::Deviation => reports.push((analysis::deviation_sup(metric(), ball, samples, seed, exec)?, true)),
            Suite::Sandwich => reports.push((analysis::verify_sandwich(window)?, true)),
            Suite::Dilation => reports.push((analysis::verify_dilation(samples, seed, exec), true)),
            Suite::Sphere => reports.push((analysis::verify_unit_sphere(samples.max(8))?, true)),
            Suite::Metric => reports.push((
                analysis::verify_metric_axioms(metric(), ball / 2.0, samples, seed, exec)?,
                true,
            )),
            Suite::All => unreachable!("expanded above"),
        }
    }
    let mut stdout = String::new();
    for (r, fatal) in &reports {
        stdout.push_str(&summary_line(r, !fatal));
        stdout.push('\n');
        for n in &r.notes {
            stdout.push_str(&format!("  {n}\n"));
        }
    }
    print!("{stdout}");
    if let Some(path) = &cfg.out {
        let only: Vec<Report> = reports.iter().map(|(r, _)| r.clone()).collect();
        write_file(path, &reports_csv(&only))?;
    }
    Ok(if reports.iter().all(|(r, fatal)| r.pass || !fatal) {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn summary_line(r: &Report, advisory: bool) -> String {
    let status = match (r.pass, advisory) {
        (true, _) => "PASS",
        (false, true) => "WARN",
        (false, false) => "FAIL",
    };
    format!(
        "{status} {} samples={} max_abs_error={} threshold={} violations={}",
        r.name,
        r.samples,
        format_number(r.max_abs_error),
        format_number(r.threshold),
        r.violations
    )
}

fn builtin_only(cfg: &Config, command: &str) -> Result<()> {
    if cfg.pattern.is_some() {
        bail!("`{command}` runs on the built-in checkered pattern; drop --pattern");
    }
    Ok(())
}

/// The pattern file if given, otherwise the checkered window of radius
/// `--window`, or of `needed` rounded up.
fn load_pattern(cfg: &Config, needed: f64) -> Result<Pattern> {
    match &cfg.pattern {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_pattern_file(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => Ok(checkered_pattern(cfg.window.unwrap_or(needed.ceil()))),
    }
}

fn emit(cfg: &Config, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => write_file(path, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
