//! Perturbation analysis: admissibility exponents, affine condition checks
//! and numerical extraction of the dimension's asymptotic expansion.

use std::collections::BTreeMap;
use std::thread;

use thiserror::Error;

use crate::bowen::{bowen_root, lower_potential, upper_potential, BowenError};
use crate::linalg::{fit_line, least_squares};
use crate::model::{ModelError, PerturbedFamily, QuasiregularityReport};
use crate::pressure::{finiteness_threshold, CountableSystem, PressureError};

/// Tolerance of the finiteness-threshold bisection.
pub const THRESHOLD_TOL: f64 = 1e-3;
/// Width allowance of `fit_expansion`: the excess bracket width at `eps`
/// may not exceed this share of `|d(eps) - d(0)|`.
pub const DEFAULT_WIDTH_SHARE: f64 = 0.5;
pub const DEFAULT_EPS_START: f64 = 0.1;
pub const DEFAULT_EPS_LEVELS: usize = 11;
/// Margin by which the fitted `log(K - 1)` slope must exceed `n`.
pub const K_ORDER_MARGIN: f64 = 0.05;

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("missing exponent t({0},{1})")]
    MissingEntry(usize, usize),
    #[error("exponent {0} outside (0,1]")]
    BadExponent(f64),
    #[error("grid must be positive and strictly decreasing")]
    BadGrid,
    #[error("need at least {needed} grid points for order {order}, got {got}")]
    GridTooShort { needed: usize, got: usize, order: usize },
    #[error("nonconformality dominates, expansion unreliable (excess widths {widths:?})")]
    NonconformalityDominates { widths: Vec<(f64, f64)> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bowen(#[from] BowenError),
    #[error(transparent)]
    Pressure(#[from] PressureError),
}

/// Exponents `t(l, k)` for `l = 0..=n`, `k = 1..=n-l+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTable {
    pub order: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl ExponentTable {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            entries: BTreeMap::new(),
        }
    }

    /// Every entry equal to `t`.
    pub fn uniform(order: usize, t: f64) -> Self {
        let mut table = Self::new(order);
        for l in 0..=order {
            for k in 1..=order - l + 1 {
                table.set(l, k, t);
            }
        }
        table
    }

    /// The affine assignment: `t(l, 1) = t` for `l >= 1`, all others 1.
    pub fn affine(order: usize, t: f64) -> Self {
        let mut table = Self::uniform(order, 1.0);
        for l in 1..=order {
            table.set(l, 1, t);
        }
        table
    }

    pub fn set(&mut self, l: usize, k: usize, t: f64) {
        self.entries.insert((l, k), t);
    }

    pub fn get(&self, l: usize, k: usize) -> Result<f64, PerturbError> {
        self.entries
            .get(&(l, k))
            .copied()
            .ok_or(PerturbError::MissingEntry(l, k))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }
}

/// All ways to write `total` as an ordered sum of `parts` non-negative
/// integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `t_k`: the minimum of `(1/D) sum_p t(i_p, j_p + 1)` over tuples with
/// `i = k, j = 0` or `0 <= i < k, 1 <= j <= k - i`, by exhaustive
/// enumeration.
pub fn compute_tk(table: &ExponentTable, d: usize, k: usize) -> Result<f64, PerturbError> {
    let mut best = f64::INFINITY;
    let mut sums: Vec<(usize, usize)> = vec![(k, 0)];
    for i in 0..k {
        for j in 1..=k - i {
            sums.push((i, j));
        }
    }
    for (i, j) in sums {
        let i_parts = compositions(i, d);
        let j_parts = compositions(j, d);
        for ip in &i_parts {
            for jp in &j_parts {
                let mut total = 0.0;
                for p in 0..d {
                    total += table.get(ip[p], jp[p] + 1)?;
                }
                best = best.min(total / d as f64);
            }
        }
    }
    Ok(best)
}

/// `t~ = min{t_n, t~0, t~0/D + (D-1)/D t(l,1) for l = 1..=n}`; `t~0` when
/// `n = 0`.
pub fn compute_t_tilde(table: &ExponentTable, tks: &[f64], t0: f64, d: usize) -> Result<f64, PerturbError> {
    let n = table.order;
    let mut best = t0;
    if n >= 1 {
        best = best.min(tks[n - 1]);
        let df = d as f64;
        for l in 1..=n {
            best = best.min(t0 / df + (df - 1.0) / df * table.get(l, 1)?);
        }
    }
    Ok(best)
}

/// `p(n)`: `p/t~` for `n = 0`, otherwise the maximum of
/// `p + (n/k)(1 - t_k)`, `p/t_k`, `p + 1 - t~` and `p/t~`.
pub fn compute_pn(p_low: f64, tks: &[f64], t_tilde: f64, n: usize) -> f64 {
    if n == 0 {
        return p_low / t_tilde;
    }
    let mut best = f64::max(p_low + (1.0 - t_tilde), p_low / t_tilde);
    for (idx, &tk) in tks.iter().take(n).enumerate() {
        let k = (idx + 1) as f64;
        best = best.max(p_low + n as f64 / k * (1.0 - tk)).max(p_low / tk);
    }
    best
}

/// `p_n(t) = max(s + D n (1 - t), s / t)` with `s` the undivided
/// finiteness threshold.
pub fn affine_pn(s_low: f64, d: usize, n: usize, t: f64) -> f64 {
    f64::max(s_low + (d * n) as f64 * (1.0 - t), s_low / t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub table: ExponentTable,
    pub tk: Vec<f64>,
    pub t_tilde: f64,
    /// Finiteness threshold divided by `D`.
    pub p_low: f64,
    /// `p(n)` from the general exponent formula.
    pub pn: f64,
    /// `p_n(t)` from the affine two-term formula.
    pub pn_affine: f64,
    /// `max_k max_e |M_{e,k}| / |M_e|^t`.
    pub coefficient_ratio: f64,
    /// `max_k max_e |a_{e,k}|`.
    pub offset_bound: f64,
    pub dim_check: bool,
    pub failing: Vec<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn affine_condition_check(
    fam: &PerturbedFamily,
    t: f64,
    dim_bracket: (f64, f64),
) -> Result<ConditionReport, PerturbError> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(PerturbError::BadExponent(t));
    }
    let base = fam.base();
    let d = base.dim();
    let n = fam.order();
    let threshold = finiteness_threshold(&CountableSystem::from_system(base), THRESHOLD_TOL)?;
    let p_low = threshold / d as f64;
    let table = ExponentTable::affine(n, t);
    let tk = (1..=n)
        .map(|k| compute_tk(&table, d, k))
        .collect::<Result<Vec<_>, _>>()?;
    let t_tilde = compute_t_tilde(&table, &tk, t, d)?;
    let pn = compute_pn(p_low, &tk, t_tilde, n);
    let pn_affine = affine_pn(threshold, d, n, t);

    let mut coefficient_ratio: f64 = 0.0;
    let mut offset_bound: f64 = 0.0;
    for e in 0..base.graph().edge_count() {
        let scale = base.map(e).linear.op_norm().powf(t);
        for (m, a) in fam.coeffs(e) {
            coefficient_ratio = coefficient_ratio.max(m.op_norm() / scale);
            offset_bound = offset_bound.max(crate::linalg::norm(a));
        }
    }
    let dim_check = pn_affine < dim_bracket.0;
    let mut failing = Vec::new();
    if !coefficient_ratio.is_finite() {
        failing.push("coefficient finiteness".to_string());
    }
    if !offset_bound.is_finite() {
        failing.push("offset bound".to_string());
    }
    if !dim_check {
        failing.push(format!("dimension: p_n(t) = {pn_affine} is not below {}", dim_bracket.0));
    }
    Ok(ConditionReport {
        table,
        tk,
        t_tilde,
        p_low,
        pn,
        pn_affine,
        coefficient_ratio,
        offset_bound,
        dim_check,
        failing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Richardson,
    Polyfit,
}

impl std::str::FromStr for FitMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "richardson" => Ok(FitMethod::Richardson),
            "polyfit" => Ok(FitMethod::Polyfit),
            other => Err(format!("unknown fit method {other:?}")),
        }
    }
}

/// Dimension bracket of the family at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketRow {
    pub eps: f64,
    pub lower: f64,
    pub upper: f64,
    /// `max_e K_min(M_e(eps))`.
    pub k: f64,
}

impl BracketRow {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    pub order: usize,
    pub method: FitMethod,
    /// `s_0, ..., s_n`.
    pub coefficients: Vec<f64>,
    /// Log-log slope of `|d(eps) - sum s_k eps^k|` over the grid points
    /// where it rises above the root-solver noise; `None` if none do.
    pub remainder_slope: Option<f64>,
    pub base: BracketRow,
    pub rows: Vec<BracketRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub method: FitMethod,
    pub tol: f64,
    pub width_share: f64,
    pub workers: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            method: FitMethod::Richardson,
            tol: crate::bowen::DEFAULT_ROOT_TOL,
            width_share: DEFAULT_WIDTH_SHARE,
            workers: 1,
        }
    }
}

/// `eps_j = start * 2^-j`, `j = 0..levels`.
pub fn dyadic_grid(start: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|j| start * 0.5f64.powi(j as i32)).collect()
}

fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// `(s_lower, s_upper, K)` of the family at `eps`.
pub fn bracket_at(fam: &PerturbedFamily, eps: f64, tol: f64) -> Result<BracketRow, PerturbError> {
    let sys = fam.at(eps)?;
    let g = sys.graph();
    let upper = bowen_root(g, &upper_potential(&sys), tol)?.root;
    let lower = bowen_root(g, &lower_potential(&sys), tol)?.root;
    let mut k: f64 = 1.0;
    for m in sys.maps() {
        k = k.max(m.linear.min_quasiregular_k().map_err(ModelError::from)?);
    }
    Ok(BracketRow { eps, lower, upper, k })
}

/// Brackets over a grid, solved independently and returned in grid order.
pub fn bracket_sweep(
    fam: &PerturbedFamily,
    grid: &[f64],
    tol: f64,
    workers: usize,
) -> Result<Vec<BracketRow>, PerturbError> {
    par_map(grid, workers, |&eps| bracket_at(fam, eps, tol))
        .into_iter()
        .collect()
}

/// Neville extrapolation to 0 of the polynomial through `(xs, ys)`.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let m = xs.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Richardson estimate of `lim_{eps->0} g(eps)` where
/// `g = s + O(eps)`: extrapolations over sliding windows of `depth`
/// consecutive grid points, taking the one that agrees best with its
/// neighbour.
fn richardson_limit(eps: &[f64], g: &[f64], depth: usize) -> f64 {
    let depth = depth.min(eps.len()).max(1);
    let estimates: Vec<f64> = (0..=eps.len() - depth)
        .map(|s| extrapolate_to_zero(&eps[s..s + depth], &g[s..s + depth]))
        .collect();
    if estimates.len() == 1 {
        return estimates[0];
    }
    let mut best = (f64::INFINITY, estimates[0]);
    for w in estimates.windows(2) {
        let diff = (w[1] - w[0]).abs();
        if diff < best.0 {
            best = (diff, w[1]);
        }
    }
    best.1
}

/// Coefficients `s_0..s_n` of `d(eps) = s_0 + s_1 eps + ... + o(eps^n)`
/// where `d` is the bracket midpoint.
pub fn fit_expansion(
    fam: &PerturbedFamily,
    n: usize,
    grid: &[f64],
    opts: FitOptions,
) -> Result<ExpansionFit, PerturbError> {
    if grid.is_empty() || grid.iter().any(|e| !(*e > 0.0)) || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(PerturbError::BadGrid);
    }
    let needed = n + 2;
    if grid.len() < needed {
        return Err(PerturbError::GridTooShort {
            needed,
            got: grid.len(),
            order: n,
        });
    }
    let base = bracket_at(fam, 0.0, opts.tol)?;
    let rows = bracket_sweep(fam, grid, opts.tol, opts.workers)?;
    let d0 = base.midpoint();

    let widths: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, r.width() - base.width())).collect();
    let dominated = rows
        .iter()
        .zip(&widths)
        .any(|(r, (_, w))| *w > opts.width_share * (r.midpoint() - d0).abs() + 4.0 * opts.tol);
    if dominated {
        return Err(PerturbError::NonconformalityDominates { widths });
    }

    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let d: Vec<f64> = rows.iter().map(BracketRow::midpoint).collect();
    let mut coefficients = vec![d0];
    match opts.method {
        FitMethod::Richardson => {
            for k in 1..=n {
                let g: Vec<f64> = eps
                    .iter()
                    .zip(&d)
                    .map(|(&e, &v)| {
                        let known: f64 = coefficients.iter().enumerate().map(|(i, s)| s * e.powi(i as i32)).sum();
                        (v - known) / e.powi(k as i32)
                    })
                    .collect();
                coefficients.push(richardson_limit(&eps, &g, n + 2 - k + 1));
            }
        }
        FitMethod::Polyfit => {
            if n > 0 {
                // (d - s_0)/eps = s_1 + s_2 eps + ... with one guard term
                let design: Vec<Vec<f64>> = eps.iter().map(|&e| (0..=n).map(|i| e.powi(i as i32)).collect()).collect();
                let rhs: Vec<f64> = eps.iter().zip(&d).map(|(e, v)| (v - d0) / e).collect();
                let sol = least_squares(&design, &rhs).ok_or(PerturbError::BadGrid)?;
                coefficients.extend_from_slice(&sol[..n]);
            }
        }
    }

    let floor = 100.0 * opts.tol;
    let (xs, ys): (Vec<f64>, Vec<f64>) = eps
        .iter()
        .zip(&d)
        .filter_map(|(&e, &v)| {
            let fit: f64 = coefficients.iter().enumerate().map(|(i, s)| s * e.powi(i as i32)).sum();
            let r = (v - fit).abs();
            (r > floor).then(|| (e.ln(), r.ln()))
        })
        .unzip();
    let remainder_slope = if xs.len() >= 3 { fit_line(&xs, &ys).map(|f| f.slope) } else { None };

    Ok(ExpansionFit {
        order: n,
        method: opts.method,
        coefficients,
        remainder_slope,
        base,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KOrderVerdict {
    pub pass: bool,
    pub order: usize,
    pub report: QuasiregularityReport,
}

/// Passes iff the family is exactly conformal on the grid or the fitted
/// slope of `log(K - 1)` exceeds `n` by [`K_ORDER_MARGIN`].
pub fn k_order_check(fam: &PerturbedFamily, n: usize, grid: &[f64]) -> Result<KOrderVerdict, PerturbError> {
    let report = fam.quasiregularity_report(grid)?;
    Ok(KOrderVerdict {
        pass: report.meets_order(n, K_ORDER_MARGIN),
        order: n,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareMatrix;
    use crate::model::{AffineMap, AffineSystem};

    #[test]
    fn tk_examples() {
        let ones = ExponentTable::uniform(3, 1.0);
        for k in 1..=3 {
            assert_eq!(compute_tk(&ones, 2, k).unwrap(), 1.0);
        }
        let mut t = ExponentTable::uniform(1, 1.0);
        t.set(1, 1, 0.5);
        t.set(0, 2, 0.7);
        assert_eq!(compute_tk(&t, 1, 1).unwrap(), 0.5);
        let flat = ExponentTable::uniform(2, 0.35);
        assert!((compute_tk(&flat, 2, 1).unwrap() - 0.35).abs() < 1e-15);
        assert!(matches!(
            compute_tk(&ExponentTable::new(1), 1, 1),
            Err(PerturbError::MissingEntry(..))
        ));
    }

    #[test]
    fn pn_examples() {
        assert!((compute_pn(0.3, &[], 0.6, 0) - 0.5).abs() < 1e-15);
        for n in 0..4 {
            assert_eq!(compute_pn(0.3, &vec![1.0; n], 1.0, n), 0.3);
        }
        assert!((compute_pn(0.2, &[0.8], 0.8, 1) - 0.4).abs() < 1e-15);
        assert!((affine_pn(0.9, 3, 1, 0.8) - 1.5).abs() < 1e-15);
        assert_eq!(affine_pn(0.9, 3, 2, 1.0), 0.9);
    }

    #[test]
    fn uniform_table_matches_two_term_form() {
        for d in 1..=3 {
            for n in 0..=3 {
                let t = 0.7;
                let table = ExponentTable::uniform(n, t);
                let tk: Vec<f64> = (1..=n).map(|k| compute_tk(&table, d, k).unwrap()).collect();
                let tt = compute_t_tilde(&table, &tk, t, d).unwrap();
                assert!((tt - t).abs() < 1e-15);
                let p = 0.25;
                let general = d as f64 * compute_pn(p, &tk, tt, n);
                assert!((general - affine_pn(d as f64 * p, d, n, t)).abs() < 1e-12);
            }
        }
    }

    fn conformal_family() -> PerturbedFamily {
        let base = AffineSystem::on_unit_cube(
            1,
            vec![AffineMap::similitude(0.5, vec![0.0]), AffineMap::similitude(0.5, vec![0.5])],
        )
        .unwrap();
        let coeff = vec![(SquareMatrix::scaled_identity(1, 0.1), vec![0.0])];
        PerturbedFamily::new(base, 1, vec![coeff.clone(), vec![(SquareMatrix::scaled_identity(1, 0.1), vec![-0.1])]])
            .unwrap()
    }

    #[test]
    fn conformal_family_first_coefficient() {
        let fam = conformal_family();
        let grid = dyadic_grid(0.1, 11);
        let exact = 2f64.ln() * 0.1 / (0.5 * 0.5f64.ln().powi(2));
        for method in [FitMethod::Richardson, FitMethod::Polyfit] {
            let fit = fit_expansion(&fam, 1, &grid, FitOptions { method, ..FitOptions::default() }).unwrap();
            assert!((fit.coefficients[0] - 1.0).abs() < 1e-8);
            assert!((fit.coefficients[1] - exact).abs() < 1e-3 * exact, "{method:?} {:?}", fit.coefficients);
        }
    }

    #[test]
    fn constant_family_has_zero_coefficients() {
        let base = AffineSystem::on_unit_cube(
            1,
            vec![AffineMap::similitude(1.0 / 3.0, vec![0.0]), AffineMap::similitude(1.0 / 3.0, vec![2.0 / 3.0])],
        )
        .unwrap();
        let fam = PerturbedFamily::constant(base, 2);
        let fit = fit_expansion(&fam, 2, &dyadic_grid(0.1, 8), FitOptions::default()).unwrap();
        assert!((fit.coefficients[0] - 2f64.ln() / 3f64.ln()).abs() < 1e-10);
        assert!(fit.coefficients[1..].iter().all(|s| s.abs() < 1e-9));
        assert_eq!(fit.remainder_slope, None);
    }

    #[test]
    fn k_order_verdicts() {
        let fam = conformal_family();
        let v = k_order_check(&fam, 1, &dyadic_grid(0.1, 11)).unwrap();
        assert!(v.pass && v.report.exactly_conformal);

        let base = AffineSystem::on_unit_cube(
            2,
            vec![
                AffineMap::similitude(0.5, vec![0.0, 0.0]),
                AffineMap::similitude(0.5, vec![0.5, 0.5]),
            ],
        )
        .unwrap();
        let bump = (SquareMatrix::diagonal(&[1.0, 0.0]), vec![0.0, 0.0]);
        let zero = (SquareMatrix::zeros(2), vec![0.0, 0.0]);
        let fam = PerturbedFamily::new(base, 1, vec![vec![bump], vec![zero]]).unwrap();
        let v = k_order_check(&fam, 1, &[0.01, 0.005, 0.0025, 0.00125]).unwrap();
        assert!(!v.pass);
        assert!((v.report.slope.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn grid_validation() {
        let fam = conformal_family();
        assert!(matches!(
            fit_expansion(&fam, 1, &[0.1, 0.2, 0.05], FitOptions::default()),
            Err(PerturbError::BadGrid)
        ));
        assert!(matches!(
            fit_expansion(&fam, 2, &[0.1, 0.05], FitOptions::default()),
            Err(PerturbError::GridTooShort { .. })
        ));
    }

    #[test]
    fn condition_check_on_finite_family() {
        let fam = conformal_family();
        let constant = PerturbedFamily::constant(fam.base().clone(), 0);
        let rep = affine_condition_check(&constant, 0.8, (1.0, 1.0)).unwrap();
        assert_eq!(rep.p_low, 0.0);
        assert_eq!(rep.pn_affine, 0.0);
        assert!(rep.passed());
        let rep = affine_condition_check(&fam, 0.8, (1.0, 1.0)).unwrap();
        assert!((rep.pn_affine - 0.2).abs() < 1e-15);
        assert!((rep.coefficient_ratio - 0.1 / 0.5f64.powf(0.8)).abs() < 1e-15);
        assert!(rep.passed());
        let rep = affine_condition_check(&fam, 1.0, (1.0, 1.0)).unwrap();
        assert_eq!(rep.pn_affine, 0.0);
        assert!(affine_condition_check(&fam, 1.5, (1.0, 1.0)).is_err());
    }
}
