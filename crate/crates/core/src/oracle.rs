//! Geometric ground truth: chaos-game samples, box counting and the coding
//! map.
//!
//! Random streams come from ChaCha8 keyed by the run seed, with the chain
//! index as the ChaCha stream id, so every chain is replayable on its own.

use std::collections::HashSet;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Word;
use crate::linalg::fit_line;
use crate::model::{AffineSystem, ModelError, PerturbedFamily};

pub const DEFAULT_BURN_IN: usize = 64;
/// Number of independent chains a chaos-game run is split into.
pub const CHAOS_CHAINS: usize = 8;
pub const MIN_BOX_POINTS: usize = 10_000;
pub const DEFAULT_BOX_LEVELS: usize = 8;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("not right-resolving: no edge terminates at vertex {vertex}")]
    NotRightResolving { vertex: String },
    #[error("box counting needs at least {MIN_BOX_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("box counting needs at least 4 scales spanning 2 octaves")]
    TooFewScales,
    #[error("word is not an admissible path")]
    NotAPath,
    #[error("word is not a cycle and cannot be repeated")]
    NotACycle,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One replayable random stream.
#[derive(Debug, Clone)]
pub struct ChainRng(ChaCha8Rng);

impl ChainRng {
    pub fn new(seed: u64, chain: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chain);
        Self(rng)
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    /// Vertex whose seed box holds each point.
    pub labels: Vec<usize>,
    pub seed: u64,
    pub chains: usize,
    /// Grid anchor for box counting: lower corner of the seed hull.
    pub anchor: Vec<f64>,
    /// Longest side of the seed hull.
    pub extent: f64,
}

/// Random orbit `x <- T_e(x)` where `e` is drawn uniformly among edges
/// ending at the vertex that currently holds `x`.
pub fn chaos_game(sys: &AffineSystem, n_points: usize, burn_in: usize, seed: u64) -> Result<PointCloud, OracleError> {
    chaos_game_par(sys, n_points, burn_in, seed, 1)
}

/// [`chaos_game`] with the fixed set of chains spread over `workers`
/// threads. Output does not depend on `workers`.
pub fn chaos_game_par(
    sys: &AffineSystem,
    n_points: usize,
    burn_in: usize,
    seed: u64,
    workers: usize,
) -> Result<PointCloud, OracleError> {
    let g = sys.graph();
    for v in 0..g.vertex_count() {
        if g.incoming(v).is_empty() {
            return Err(OracleError::NotRightResolving {
                vertex: g.vertices()[v].clone(),
            });
        }
    }
    let quota: Vec<usize> = (0..CHAOS_CHAINS)
        .map(|c| n_points / CHAOS_CHAINS + usize::from(c < n_points % CHAOS_CHAINS))
        .collect();
    let run = |c: usize| run_chain(sys, quota[c], burn_in, seed, c as u64);
    let mut results: Vec<ChainSample> = Vec::with_capacity(CHAOS_CHAINS);
    if workers <= 1 {
        results.extend((0..CHAOS_CHAINS).map(run));
    } else {
        let mut slots: Vec<Option<ChainSample>> = vec![None; CHAOS_CHAINS];
        let per = CHAOS_CHAINS.div_ceil(workers);
        thread::scope(|scope| {
            for (k, chunk) in slots.chunks_mut(per).enumerate() {
                let run = &run;
                scope.spawn(move || {
                    for (j, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(run(k * per + j));
                    }
                });
            }
        });
        results.extend(slots.into_iter().map(|s| s.expect("chain finished")));
    }
    let mut points = Vec::with_capacity(n_points);
    let mut labels = Vec::with_capacity(n_points);
    for (p, l) in results {
        points.extend(p);
        labels.extend(l);
    }
    let hull = sys.seed_hull();
    Ok(PointCloud {
        dim: sys.dim(),
        points,
        labels,
        seed,
        chains: CHAOS_CHAINS,
        anchor: hull.low.clone(),
        extent: hull.max_side(),
    })
}

type ChainSample = (Vec<Vec<f64>>, Vec<usize>);

fn run_chain(sys: &AffineSystem, count: usize, burn_in: usize, seed: u64, chain: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let g = sys.graph();
    let mut rng = ChainRng::new(seed, chain);
    let mut v = rng.below(g.vertex_count());
    let mut x = sys.seed(v).center();
    let mut points = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for step in 0..burn_in + count {
        let into = g.incoming(v);
        let e = into[rng.below(into.len())];
        x = sys.map(e).apply(&x);
        v = g.edges()[e].from;
        if step >= burn_in {
            points.push(x.clone());
            labels.push(v);
        }
    }
    (points, labels)
}

/// `T_w^reps` applied to the centre of `J_t(w)`, with
/// `T_w = T_w1 o ... o T_wk`.
pub fn coding_point(sys: &AffineSystem, w: &Word, reps: usize) -> Result<Vec<f64>, OracleError> {
    let g = sys.graph();
    if w.is_empty() || !g.is_path(w.edges()) {
        return Err(OracleError::NotAPath);
    }
    if reps > 1 && !w.is_cycle(g) {
        return Err(OracleError::NotACycle);
    }
    let last = *w.edges().last().expect("non-empty");
    let map = sys.word_map(w.edges());
    let mut x = sys.seed(g.edges()[last].to).center();
    for _ in 0..reps.max(1) {
        x = map.apply(&x);
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountReport {
    /// Box side lengths, decreasing.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub stderr: f64,
    pub warning: Option<String>,
}

/// `levels` dyadic box sizes `extent * 2^-j`, `j = 1..=levels`.
pub fn dyadic_scales(extent: f64, levels: usize) -> Vec<f64> {
    (1..=levels).map(|j| extent * 0.5f64.powi(j as i32)).collect()
}

/// Least-squares slope of `log N(delta)` against `-log delta`, with the
/// box grid anchored at the cloud's anchor corner.
pub fn box_count_dim(cloud: &PointCloud, scales: &[f64]) -> Result<BoxCountReport, OracleError> {
    if cloud.points.len() < MIN_BOX_POINTS {
        return Err(OracleError::TooFewPoints(cloud.points.len()));
    }
    let mut scales: Vec<f64> = scales.iter().copied().filter(|s| *s > 0.0).collect();
    scales.sort_by(|a, b| b.total_cmp(a));
    scales.dedup();
    if scales.len() < 4 || scales[0] / scales[scales.len() - 1] < 4.0 {
        return Err(OracleError::TooFewScales);
    }
    let counts: Vec<usize> = scales
        .iter()
        .map(|&delta| {
            let cells: HashSet<Vec<i64>> = cloud
                .points
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&cloud.anchor)
                        .map(|(x, a)| ((x - a) / delta).floor() as i64)
                        .collect()
                })
                .collect();
            cells.len()
        })
        .collect();
    if *counts.last().expect("scales non-empty") <= 1 {
        return Ok(BoxCountReport {
            scales,
            counts,
            slope: 0.0,
            stderr: 0.0,
            warning: Some("degenerate cloud: every point lies in one box at the finest scale".into()),
        });
    }
    let xs: Vec<f64> = scales.iter().map(|s| -s.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let fit = fit_line(&xs, &ys).ok_or(OracleError::TooFewScales)?;
    Ok(BoxCountReport {
        scales,
        counts,
        slope: fit.slope.max(0.0),
        stderr: fit.slope_stderr,
        warning: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodingPerturbationReport {
    /// `(eps, max_w |pi(eps, w) - pi(0, w)|)`.
    pub rows: Vec<(f64, f64)>,
    /// Log-log slope of the deviation; `None` when every deviation is zero.
    pub slope: Option<f64>,
}

/// Word length after which the coding map is resolved to `1e-9` of the seed
/// hull's size.
pub fn resolving_length(sys: &AffineSystem) -> usize {
    let r = sys.contraction_ratio();
    if r == 0.0 {
        return 1;
    }
    ((1e-9f64).ln() / r.ln()).ceil().max(1.0) as usize
}

/// Deviation of coding-map images under perturbation, over sample words.
pub fn coding_perturbation_check(
    fam: &PerturbedFamily,
    grid: &[f64],
    words: &[Word],
) -> Result<CodingPerturbationReport, OracleError> {
    let base: Vec<Vec<f64>> = words
        .iter()
        .map(|w| coding_point(fam.base(), w, 1))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &eps in grid {
        let sys = fam.at(eps)?;
        let mut worst: f64 = 0.0;
        for (w, p0) in words.iter().zip(&base) {
            let p = coding_point(&sys, w, 1)?;
            let d = p.iter().zip(p0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            worst = worst.max(d);
        }
        rows.push((eps, worst));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|(e, d)| *e > 0.0 && *d > 0.0)
        .map(|(e, d)| (e.ln(), d.ln()))
        .unzip();
    let slope = fit_line(&xs, &ys).map(|f| f.slope);
    Ok(CodingPerturbationReport { rows, slope })
}
