//! Monte Carlo sweeps over `(n, alpha, p)` grids and paired model comparisons.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::wilson_interval;
use super::HarnessError;
use crate::embedder::{embed_perturbed, EmbedConfig, EmbedError, Stage};
use crate::graph::{make_host, HostSpec};
use crate::rng::derive_seed;
use crate::targets::TargetSpec;

/// Normal quantile for two-sided 95% intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

pub const CSV_HEADER: &str =
    "n,alpha,p,target,host,trials,successes,rate,ci_lo,ci_hi,fail_round1,fail_hall,fail_other,seed";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub ns: Vec<usize>,
    pub alphas: Vec<f64>,
    pub ps: Vec<f64>,
    /// Target spec, e.g. `factor:K3`.
    pub target: String,
    /// Host kind, e.g. `random`; `alpha` is filled in per cell.
    pub host: String,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub target: String,
    pub host: String,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub fail_round1: usize,
    pub fail_hall: usize,
    pub fail_other: usize,
    pub seed: u64,
    /// Why an infeasible cell ran no trials.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub trials: usize,
    pub successes: usize,
    pub fail_round1: usize,
    pub fail_hall: usize,
    pub fail_other: usize,
}

impl Tally {
    fn add(&mut self, stage: Option<Stage>) {
        self.trials += 1;
        match stage {
            None => self.successes += 1,
            Some(Stage::Round1) => self.fail_round1 += 1,
            Some(Stage::Hall) => self.fail_hall += 1,
            Some(Stage::Other) => self.fail_other += 1,
        }
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn ci(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, Z95)
    }
}

/// Host spec string for a cell: the kind with `alpha` appended.
pub fn host_for(kind: &str, alpha: f64) -> String {
    if kind.contains(':') {
        format!("{kind},alpha={alpha}")
    } else {
        format!("{kind}:alpha={alpha}")
    }
}

/// Seed of trial `t`; shared by every cell and both arms of a comparison.
pub fn trial_seed(master: u64, t: usize) -> u64 {
    derive_seed(master, t as u64)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Parameter(format!("thread pool: {e}")))
}

/// Checks a cell before running trials; `Err` carries the reason tag.
fn prepare(target: &str, host: &str, n: usize) -> Result<(TargetSpec, HostSpec), String> {
    let t = TargetSpec::parse(target, n).map_err(|e| e.to_string())?;
    t.realize().map_err(|e| e.to_string())?;
    let h = HostSpec::parse(host, n).map_err(|e| e.to_string())?;
    make_host(&h, 0).map_err(|e| e.to_string())?;
    Ok((t, h))
}

fn run_trials(
    t: &TargetSpec,
    h: &HostSpec,
    p: f64,
    cfg: &EmbedConfig,
    master: u64,
    trials: usize,
) -> Result<Vec<Option<Stage>>, EmbedError> {
    (0..trials)
        .into_par_iter()
        .map(|i| embed_perturbed(t, h, p, cfg, trial_seed(master, i)).map(|r| r.failure_stage()))
        .collect()
}

fn lift(e: EmbedError) -> Result<String, HarnessError> {
    match e {
        EmbedError::Internal(m) => Err(HarnessError::Internal(m)),
        other => Ok(other.to_string()),
    }
}

/// Runs every grid cell with `trials` independent trials. Trial `i` of
/// every cell uses the same seed, so rows depend only on the master seed.
/// Rows come out sorted by `(n, alpha, p)`.
pub fn sweep(
    grid: &SweepGrid,
    master_seed: u64,
    workers: usize,
    cfg: &EmbedConfig,
) -> Result<Vec<SweepRow>, HarnessError> {
    let mut cells: Vec<(usize, f64, f64)> = Vec::new();
    for &n in &grid.ns {
        for &alpha in &grid.alphas {
            for &p in &grid.ps {
                cells.push((n, alpha, p));
            }
        }
    }
    cells.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    cells.dedup();
    let pool = pool(workers)?;
    pool.install(|| {
        cells
            .iter()
            .map(|&(n, alpha, p)| {
                let host = host_for(&grid.host, alpha);
                let mut row = SweepRow {
                    n,
                    alpha,
                    p,
                    target: grid.target.clone(),
                    host: host.clone(),
                    trials: 0,
                    successes: 0,
                    rate: 0.0,
                    ci_lo: 0.0,
                    ci_hi: 1.0,
                    fail_round1: 0,
                    fail_hall: 0,
                    fail_other: 0,
                    seed: master_seed,
                    reason: None,
                };
                let outcomes = match prepare(&grid.target, &host, n) {
                    Err(reason) => Err(reason),
                    Ok((t, h)) => match run_trials(&t, &h, p, cfg, master_seed, grid.trials) {
                        Ok(stages) => Ok(stages),
                        Err(e) => Err(lift(e)?),
                    },
                };
                match outcomes {
                    Ok(stages) => {
                        let mut tally = Tally::default();
                        stages.into_iter().for_each(|s| tally.add(s));
                        row.trials = tally.trials;
                        row.successes = tally.successes;
                        row.rate = tally.rate();
                        (row.ci_lo, row.ci_hi) = tally.ci();
                        row.fail_round1 = tally.fail_round1;
                        row.fail_hall = tally.fail_hall;
                        row.fail_other = tally.fail_other;
                    }
                    Err(reason) => row.reason = Some(reason),
                }
                Ok(row)
            })
            .collect()
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{},{}",
            r.n,
            r.alpha,
            r.p,
            csv_field(&r.target),
            csv_field(&r.host),
            r.trials,
            r.successes,
            r.rate,
            r.ci_lo,
            r.ci_hi,
            r.fail_round1,
            r.fail_hall,
            r.fail_other,
            r.seed
        )
        .expect("write to string");
    }
    out
}

/// Success rate against `p` with Wilson bars, one polyline per `(n, alpha)`.
pub fn rows_to_svg(rows: &[SweepRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let ps: Vec<f64> = rows.iter().map(|r| r.p).collect();
    let (lo, hi) = ps.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |p: f64| M + (p - lo) / span * (W - 2.0 * M);
    let y = |r: f64| H - M - r * (H - 2.0 * M);
    let mut s = String::new();
    writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">").unwrap();
    writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>").unwrap();
    writeln!(s, "<line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>", H - M, W - M, H - M).unwrap();
    writeln!(s, "<line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>", H - M).unwrap();
    writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">p</text>", W / 2.0, H - 15.0).unwrap();
    writeln!(
        s,
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">success rate</text>",
        H / 2.0,
        H / 2.0
    )
    .unwrap();
    for t in 0..=4 {
        let r = t as f64 / 4.0;
        writeln!(s, "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{r:.2}</text>", M - 5.0, y(r) + 4.0).unwrap();
    }
    writeln!(s, "<text x=\"{M}\" y=\"{}\" text-anchor=\"start\">{lo}</text>", H - M + 15.0).unwrap();
    writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{hi}</text>", W - M, H - M + 15.0).unwrap();
    let mut series: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.alpha)).collect();
    series.dedup();
    for (i, &(n, alpha)) in series.iter().enumerate() {
        let c = COLOURS[i % COLOURS.len()];
        let pts: Vec<&SweepRow> = rows.iter().filter(|r| r.n == n && r.alpha == alpha && r.trials > 0).collect();
        let line: Vec<String> = pts.iter().map(|r| format!("{:.1},{:.1}", x(r.p), y(r.rate))).collect();
        writeln!(s, "<polyline fill=\"none\" stroke=\"{c}\" points=\"{}\"/>", line.join(" ")).unwrap();
        for r in pts {
            let px = x(r.p);
            writeln!(
                s,
                "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"{c}\"/>",
                y(r.ci_lo),
                y(r.ci_hi)
            )
            .unwrap();
            writeln!(s, "<circle cx=\"{px:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{c}\"/>", y(r.rate)).unwrap();
        }
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" fill=\"{c}\">n={n} alpha={alpha}</text>",
            W - M - 110.0,
            M + 14.0 * i as f64
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmStats {
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl From<Tally> for ArmStats {
    fn from(t: Tally) -> Self {
        let (ci_lo, ci_hi) = t.ci();
        Self { trials: t.trials, successes: t.successes, rate: t.rate(), ci_lo, ci_hi }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub target: String,
    pub host: String,
    pub seed: u64,
    /// `G_alpha ∪ G(n, p)`.
    pub perturbed: ArmStats,
    /// `G(n, p)` alone: the same pipeline with an empty host.
    pub pure: ArmStats,
}

/// Paired rates of the perturbed and pure models. Trial `i` of both arms uses
/// the same seed, so the random rounds coincide and only the host differs.
#[allow(clippy::too_many_arguments)]
pub fn compare_models(
    n: usize,
    alpha: f64,
    p: f64,
    target: &str,
    host_kind: &str,
    trials: usize,
    seed: u64,
    workers: usize,
    cfg: &EmbedConfig,
) -> Result<ModelComparison, HarnessError> {
    let host = host_for(host_kind, alpha);
    let (t, h) = prepare(target, &host, n).map_err(HarnessError::Parameter)?;
    let (_, empty) = prepare(target, "empty", n).map_err(HarnessError::Parameter)?;
    let pool = pool(workers)?;
    let arm = |h: &HostSpec| -> Result<ArmStats, HarnessError> {
        let stages = pool.install(|| run_trials(&t, h, p, cfg, seed, trials)).map_err(|e| match lift(e) {
            Ok(m) => HarnessError::Parameter(m),
            Err(e) => e,
        })?;
        let mut tally = Tally::default();
        stages.into_iter().for_each(|s| tally.add(s));
        Ok(tally.into())
    };
    Ok(ModelComparison { n, alpha, p, target: target.into(), host, seed, perturbed: arm(&h)?, pure: arm(&empty)? })
}
