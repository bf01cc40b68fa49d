//! Topological pressure of locally constant edge potentials.
//!
//! For `f(omega) = f(omega_0)` the pressure is the log spectral radius of
//! `B(e, e') = A(ee') exp(f(e'))`. `B` factors through the vertex matrix
//! `W(u, v) = sum_{e: u -> v} exp(f(e))`, which has the same non-zero
//! spectrum, so the spectral route works on `|V| x |V|` matrices. The
//! cylinder-sum route enumerates words directly and shares nothing with it.

use std::thread;

use thiserror::Error;

use crate::graph::DirectedMultigraph;

/// Collatz-Wielandt bracket width (relative) at which power iteration stops.
pub const SPECTRAL_TOL: f64 = 1e-13;
const MAX_POWER_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PressureError {
    #[error("power iteration did not converge after {iterations} steps (bracket {lower}..{upper})")]
    NonConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
    #[error("potential has {got} values for {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("potential value {0} is NaN or +inf")]
    BadValue(f64),
}

/// Per-edge values of a locally constant potential. `-inf` is allowed and
/// stands for an edge of zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePotential(Vec<f64>);

impl EdgePotential {
    pub fn new(values: Vec<f64>) -> Result<Self, PressureError> {
        if let Some(&bad) = values.iter().find(|v| v.is_nan() || **v == f64::INFINITY) {
            return Err(PressureError::BadValue(bad));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s * f`, with `0 * (-inf) = -inf` kept as a zero-weight edge.
    pub fn scaled(&self, s: f64) -> Self {
        Self(
            self.0
                .iter()
                .map(|&v| if v == f64::NEG_INFINITY { v } else { s * v })
                .collect(),
        )
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v + c).collect())
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn check(&self, g: &DirectedMultigraph) -> Result<(), PressureError> {
        if self.0.len() != g.edge_count() {
            return Err(PressureError::LengthMismatch {
                expected: g.edge_count(),
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureMethod {
    Spectral,
    Cylinder,
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureValue {
    /// May be `-inf` (no admissible infinite path carries weight) or `+inf`.
    pub value: f64,
    pub method: PressureMethod,
    pub iterations: usize,
    pub truncation: Option<usize>,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let mut s = CompensatedSum::default();
    for x in &v {
        s.add((x - m).exp());
    }
    m + s.value().ln()
}

/// `log rho(W)` for a square matrix given entrywise as `log W(i, j)`
/// (`-inf` for zero entries), plus the number of power iterations used.
///
/// The matrix is split into strongly connected components; on each
/// irreducible block power iteration from the all-ones vector runs with a
/// positive diagonal shift (so periodic blocks still converge) until the
/// Collatz-Wielandt bounds `min (Wx)_i/x_i <= rho <= max (Wx)_i/x_i` agree.
pub fn log_spectral_radius(log_weights: &[Vec<f64>]) -> Result<(f64, usize), PressureError> {
    let n = log_weights.len();
    let top = log_weights
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok((f64::NEG_INFINITY, 0));
    }
    let w: Vec<Vec<f64>> = log_weights
        .iter()
        .map(|row| row.iter().map(|x| (x - top).exp()).collect())
        .collect();
    let adjacency: Vec<Vec<usize>> = w
        .iter()
        .map(|row| (0..n).filter(|&j| row[j] > 0.0).collect())
        .collect();
    let mut best = 0.0f64;
    let mut iterations = 0;
    for comp in DirectedMultigraph::vertex_components(&adjacency) {
        let (rho, it) = if comp.len() == 1 {
            (w[comp[0]][comp[0]], 0)
        } else {
            let block: Vec<Vec<f64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| w[i][j]).collect())
                .collect();
            irreducible_radius(&block)?
        };
        iterations += it;
        best = best.max(rho);
    }
    if best == 0.0 {
        return Ok((f64::NEG_INFINITY, iterations));
    }
    Ok((best.ln() + top, iterations))
}

fn irreducible_radius(a: &[Vec<f64>]) -> Result<(f64, usize), PressureError> {
    let n = a.len();
    let mut x = vec![1.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for it in 1..=MAX_POWER_ITERATIONS {
        let ax: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum())
            .collect();
        lo = f64::INFINITY;
        hi = 0.0f64;
        for (y, v) in ax.iter().zip(&x) {
            let r = y / v;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= SPECTRAL_TOL * hi {
            return Ok((0.5 * (lo + hi), it));
        }
        // shift by the current upper bound; keeps x positive and damps the
        // peripheral eigenvalues of periodic blocks
        let shift = hi;
        let mut next: Vec<f64> = ax.iter().zip(&x).map(|(y, v)| y + shift * v).collect();
        let norm = next.iter().copied().fold(0.0, f64::max);
        for v in &mut next {
            *v /= norm;
        }
        x = next;
    }
    Err(PressureError::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        lower: lo,
        upper: hi,
    })
}

/// `log W` with `W(u, v) = sum_{e: u -> v} exp(f(e))`.
fn vertex_log_matrix(g: &DirectedMultigraph, f: &EdgePotential) -> Vec<Vec<f64>> {
    let nv = g.vertex_count();
    let mut terms: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); nv]; nv];
    for (e, edge) in g.edges().iter().enumerate() {
        terms[edge.from][edge.to].push(f.values()[e]);
    }
    terms
        .into_iter()
        .map(|row| row.into_iter().map(log_sum_exp).collect())
        .collect()
}

/// Pressure as the log spectral radius of the weighted transition matrix.
pub fn pressure_spectral(g: &DirectedMultigraph, f: &EdgePotential) -> Result<PressureValue, PressureError> {
    f.check(g)?;
    let (value, iterations) = log_spectral_radius(&vertex_log_matrix(g, f))?;
    Ok(PressureValue {
        value,
        method: PressureMethod::Spectral,
        iterations,
        truncation: None,
    })
}

/// Edge-indexed weighted transition matrix `log B(e, e') = log A(ee') + f(e')`.
pub fn edge_log_matrix(g: &DirectedMultigraph, f: &EdgePotential) -> Vec<Vec<f64>> {
    let ne = g.edge_count();
    (0..ne)
        .map(|e| {
            (0..ne)
                .map(|e2| {
                    if g.edges()[e].to == g.edges()[e2].from {
                        f.values()[e2]
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect()
        })
        .collect()
}

/// `(1/n) log sum_{|w| = n admissible} exp(S_n f(w))` by direct enumeration.
pub fn pressure_cylinder(g: &DirectedMultigraph, f: &EdgePotential, n: usize) -> Result<f64, PressureError> {
    pressure_cylinder_par(g, f, n, 1)
}

/// [`pressure_cylinder`] with the word tree split by leading edge over
/// `workers` threads; partial sums are merged in edge order, so the result
/// does not depend on `workers`.
pub fn pressure_cylinder_par(
    g: &DirectedMultigraph,
    f: &EdgePotential,
    n: usize,
    workers: usize,
) -> Result<f64, PressureError> {
    f.check(g)?;
    assert!(n >= 1, "word length must be positive");
    let fv = f.values();
    // max-plus pass: the heaviest admissible word sets the scale, so the
    // largest term is exactly 1 and nothing underflows wholesale
    let mut heaviest: Vec<f64> = fv.to_vec();
    for _ in 1..n {
        heaviest = (0..g.edge_count())
            .map(|e| {
                let tail = g
                    .successors(e)
                    .iter()
                    .map(|&s| heaviest[s])
                    .fold(f64::NEG_INFINITY, f64::max);
                fv[e] + tail
            })
            .collect();
    }
    let scale = heaviest.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let per_step = scale / n as f64;
    let weights: Vec<f64> = fv.iter().map(|v| (v - per_step).exp()).collect();

    let partial = |first: usize| -> f64 {
        let mut acc = CompensatedSum::default();
        walk(g, &weights, n, 1, first, weights[first], &mut acc);
        acc.value()
    };
    let ne = g.edge_count();
    let sums: Vec<f64> = if workers <= 1 || ne == 1 {
        (0..ne).map(partial).collect()
    } else {
        let mut sums = vec![0.0; ne];
        let chunk = ne.div_ceil(workers);
        thread::scope(|scope| {
            for (c, slot) in sums.chunks_mut(chunk).enumerate() {
                let partial = &partial;
                scope.spawn(move || {
                    for (k, s) in slot.iter_mut().enumerate() {
                        *s = partial(c * chunk + k);
                    }
                });
            }
        });
        sums
    };
    let mut total = CompensatedSum::default();
    for s in sums {
        total.add(s);
    }
    Ok(total.value().ln() / n as f64 + per_step)
}

fn walk(
    g: &DirectedMultigraph,
    weights: &[f64],
    n: usize,
    depth: usize,
    last: usize,
    product: f64,
    acc: &mut CompensatedSum,
) {
    if depth == n {
        acc.add(product);
        return;
    }
    for &e in g.successors(last) {
        walk(g, weights, n, depth + 1, e, product * weights[e], acc);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailKind {
    /// `|M_k| = scale * k^(-exponent)`
    Polynomial { exponent: f64 },
    /// `|M_k| = scale * ratio^k`
    Geometric { ratio: f64 },
}

/// Closed-form norms of a countable family of loops at one vertex,
/// indexed `k = start, start + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRule {
    pub kind: TailKind,
    pub scale: f64,
    pub start: u64,
    pub vertex: usize,
}

impl TailRule {
    pub fn new(kind: TailKind, scale: f64, start: u64) -> Result<Self, String> {
        if !(scale >= 0.0) || !scale.is_finite() {
            return Err(format!("scale must be finite and >= 0, got {scale}"));
        }
        if start == 0 {
            return Err("start must be >= 1".into());
        }
        match kind {
            TailKind::Polynomial { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                return Err(format!("exponent must be positive, got {exponent}"))
            }
            TailKind::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => {
                return Err(format!("ratio must lie in (0,1), got {ratio}"))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            scale,
            start,
            vertex: 0,
        })
    }

    pub fn polynomial(exponent: f64) -> Self {
        Self::new(TailKind::Polynomial { exponent }, 1.0, 1).expect("valid exponent")
    }

    pub fn geometric(ratio: f64) -> Self {
        Self::new(TailKind::Geometric { ratio }, 1.0, 1).expect("valid ratio")
    }

    pub fn norm(&self, k: u64) -> f64 {
        self.log_norm(k).exp()
    }

    pub fn log_norm(&self, k: u64) -> f64 {
        let base = self.scale.ln();
        match self.kind {
            TailKind::Polynomial { exponent } => base - exponent * (k as f64).ln(),
            TailKind::Geometric { ratio } => base + k as f64 * ratio.ln(),
        }
    }

    /// Whether `sum_k |M_k|^s` is finite.
    pub fn series_converges(&self, s: f64) -> bool {
        if self.scale == 0.0 {
            return true;
        }
        match self.kind {
            TailKind::Polynomial { exponent } => exponent * s > 1.0,
            TailKind::Geometric { .. } => s > 0.0,
        }
    }

    /// Upper bound on `sum_{k >= from} |M_k|^s`; `+inf` when divergent.
    pub fn remainder_bound(&self, s: f64, from: u64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        if !self.series_converges(s) {
            return f64::INFINITY;
        }
        let cs = self.scale.powf(s);
        match self.kind {
            TailKind::Polynomial { exponent } => {
                let q = exponent * s;
                if from >= 2 {
                    // integral test: sum_{k >= K} k^-q <= int_{K-1}^inf x^-q dx
                    cs * ((from - 1) as f64).powf(1.0 - q) / (q - 1.0)
                } else {
                    cs * (1.0 + 1.0 / (q - 1.0))
                }
            }
            TailKind::Geometric { ratio } => {
                let qs = ratio.powf(s);
                cs * qs.powf(from as f64) / (1.0 - qs)
            }
        }
    }
}

/// A finite explicit part plus a countable tail of loops.
#[derive(Debug, Clone, PartialEq)]
pub struct CountableSystem {
    pub vertex_count: usize,
    /// `(from, to, log norm)` of the explicit edges.
    pub explicit: Vec<(usize, usize, f64)>,
    pub tail: Option<TailRule>,
}

impl CountableSystem {
    pub fn tail_only(rule: TailRule) -> Self {
        Self {
            vertex_count: 1,
            explicit: Vec::new(),
            tail: Some(rule),
        }
    }

    /// Explicit edges weighted by `log |M_e|` (operator norm).
    pub fn from_system(sys: &crate::model::AffineSystem) -> Self {
        let explicit = sys
            .graph()
            .edges()
            .iter()
            .zip(sys.maps())
            .map(|(e, m)| (e.from, e.to, m.linear.op_norm().ln()))
            .collect();
        Self {
            vertex_count: sys.graph().vertex_count(),
            explicit,
            tail: sys.tail().cloned(),
        }
    }

    fn log_matrix(&self, s: f64, tail_log_sum: Option<f64>) -> Vec<Vec<f64>> {
        let nv = self.vertex_count;
        let mut terms: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); nv]; nv];
        for &(from, to, ln) in &self.explicit {
            terms[from][to].push(s * ln);
        }
        if let (Some(t), Some(extra)) = (&self.tail, tail_log_sum) {
            terms[t.vertex][t.vertex].push(extra);
        }
        terms
            .into_iter()
            .map(|row| row.into_iter().map(log_sum_exp).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPressure {
    /// One value per requested level (number of tail edges kept), ascending.
    pub values: Vec<PressureValue>,
    /// The tail series converges, so the full pressure is finite.
    pub finite: bool,
    /// Divergence signalled: infinite tail sum or a value above the ceiling.
    pub diverged: bool,
    /// Last successive difference fell below the tolerance.
    pub settled: bool,
    /// Upper bound on the full pressure from the closed-form tail remainder.
    pub upper_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationOptions {
    pub ceiling: f64,
    pub tol: f64,
}

impl Default for TruncationOptions {
    fn default() -> Self {
        Self {
            ceiling: 1e3,
            tol: 1e-6,
        }
    }
}

/// Pressures of the finite subsystems keeping the first `N` tail edges, for
/// each `N` in `levels`. The sequence is non-decreasing in `N`.
pub fn pressure_truncated(
    sys: &CountableSystem,
    s: f64,
    levels: &[usize],
    opts: TruncationOptions,
) -> Result<TruncatedPressure, PressureError> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let mut values = Vec::with_capacity(levels.len());
    let mut partial = CompensatedSum::default();
    let mut kept = 0usize;
    // terms are summed as exp(s * log|M_k| - shift) with a shift fixed by
    // the first term, so large tails cannot overflow
    let shift = sys
        .tail
        .as_ref()
        .map(|t| s * t.log_norm(t.start))
        .filter(|v| v.is_finite())
        .unwrap_or(0.0);
    for &level in &levels {
        if let Some(t) = &sys.tail {
            while kept < level {
                let k = t.start + kept as u64;
                partial.add((s * t.log_norm(k) - shift).exp());
                kept += 1;
            }
        }
        let tail_sum = (kept > 0 && partial.value() > 0.0).then(|| partial.value().ln() + shift);
        let (value, iterations) = log_spectral_radius(&sys.log_matrix(s, tail_sum))?;
        values.push(PressureValue {
            value,
            method: PressureMethod::Truncated,
            iterations,
            truncation: Some(level),
        });
    }
    let (finite, upper_bound) = match &sys.tail {
        None => (true, values.last().map_or(f64::NEG_INFINITY, |v| v.value)),
        Some(t) => {
            let kept_to = t.start + kept as u64;
            let rem = t.remainder_bound(s, kept_to);
            if rem.is_infinite() {
                (false, f64::INFINITY)
            } else {
                let full = CompensatedSum {
                    sum: partial.value() * shift.exp(),
                    comp: rem,
                };
                let total = full.value();
                let extra = (total > 0.0).then(|| total.ln());
                (true, log_spectral_radius(&sys.log_matrix(s, extra))?.0)
            }
        }
    };
    let above_ceiling = values.iter().any(|v| v.value > opts.ceiling);
    let settled = values.len() >= 2 && {
        let n = values.len();
        (values[n - 1].value - values[n - 2].value).abs() < opts.tol
    };
    Ok(TruncatedPressure {
        values,
        finite: finite && !above_ceiling,
        diverged: !finite || above_ceiling,
        settled,
        upper_bound,
    })
}

/// `inf { s >= 0 : P(s log|M|) < inf }` by bisection on the verdict of
/// [`pressure_truncated`], to within `tol`. Not divided by the dimension.
pub fn finiteness_threshold(sys: &CountableSystem, tol: f64) -> Result<f64, PressureError> {
    const PROBE_LEVELS: [usize; 2] = [16, 64];
    let finite_at = |s: f64| -> Result<bool, PressureError> {
        Ok(pressure_truncated(sys, s, &PROBE_LEVELS, TruncationOptions::default())?.finite)
    };
    if sys.tail.is_none() || finite_at(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while !finite_at(hi)? {
        hi *= 2.0;
        if hi > 1e9 {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if finite_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
