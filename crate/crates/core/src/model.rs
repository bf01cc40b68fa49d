//! Affine graph-directed systems: construction, validation, separation
//! diagnostics and perturbed families `T_e(eps, x) = M_e(eps) x + a_e(eps)`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{DirectedMultigraph, GraphError, Word};
use crate::linalg::{fit_line, LinalgError, SquareMatrix};
use crate::pressure::TailRule;

/// Slack for floating point containment checks (absolute, in ambient units).
pub const CONTAINMENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("edge {edge}: not a contraction (operator norm {norm})")]
    NotAContraction { edge: String, norm: f64 },
    #[error("edge {edge}: singular linear part")]
    SingularMap { edge: String },
    #[error("edge {edge}: no map given")]
    MissingMap { edge: String },
    #[error("vertex {vertex}: seed box has empty interior")]
    EmptyBox { vertex: String },
    #[error("vertex {vertex}: seed box J not inside open domain O")]
    SeedOutsideDomain { vertex: String },
    #[error("vertices {first} and {second}: seed boxes overlap")]
    OverlappingSeeds { first: String, second: String },
    #[error("edge {edge}: image of J_{terminal} escapes J_{initial}")]
    ImageEscapes {
        edge: String,
        terminal: String,
        initial: String,
    },
    #[error("edge {edge}: image of O_{terminal} escapes O_{initial}")]
    DomainEscapes {
        edge: String,
        terminal: String,
        initial: String,
    },
    #[error("{name} = {value} outside ({low}, {high}]")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        low: f64,
        high: f64,
    },
    #[error("perturbation parameter {eps} outside valid range [0, {max}]")]
    EpsOutOfRange { eps: f64, max: f64 },
    #[error("at eps = {eps}: {source}")]
    InvalidAt {
        eps: f64,
        #[source]
        source: Box<ModelError>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `x -> M x + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub linear: SquareMatrix,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(linear: SquareMatrix, offset: Vec<f64>) -> Result<Self, ModelError> {
        if offset.len() != linear.dim() {
            return Err(ModelError::DimensionMismatch {
                what: "offset".into(),
                expected: linear.dim(),
                got: offset.len(),
            });
        }
        Ok(Self { linear, offset })
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    /// Similitude `c x + a`.
    pub fn similitude(ratio: f64, offset: Vec<f64>) -> Self {
        let dim = offset.len();
        Self {
            linear: SquareMatrix::scaled_identity(dim, ratio),
            offset,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.linear.apply(x);
        for (yi, ai) in y.iter_mut().zip(&self.offset) {
            *yi += ai;
        }
        y
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            linear: &self.linear * &inner.linear,
            offset: self.apply(&inner.offset),
        }
    }

    /// Bounding box of the image of an axis-aligned box.
    pub fn image_box(&self, b: &AxisBox) -> AxisBox {
        let center = self.apply(&b.center());
        let half: Vec<f64> = b.high.iter().zip(&b.low).map(|(h, l)| (h - l) / 2.0).collect();
        let spread = self.linear.abs().apply(&half);
        AxisBox {
            low: center.iter().zip(&spread).map(|(c, s)| c - s).collect(),
            high: center.iter().zip(&spread).map(|(c, s)| c + s).collect(),
        }
    }
}

/// Axis-aligned box `[low, high]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl AxisBox {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Self {
        assert_eq!(low.len(), high.len(), "box corners differ in dimension");
        Self { low, high }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn has_interior(&self) -> bool {
        self.low.iter().zip(&self.high).all(|(l, h)| l < h)
    }

    pub fn center(&self) -> Vec<f64> {
        self.low.iter().zip(&self.high).map(|(l, h)| 0.5 * (l + h)).collect()
    }

    pub fn max_side(&self) -> f64 {
        self.low
            .iter()
            .zip(&self.high)
            .map(|(l, h)| h - l)
            .fold(0.0, f64::max)
    }

    pub fn contains_point(&self, x: &[f64], slack: f64) -> bool {
        x.iter()
            .zip(self.low.iter().zip(&self.high))
            .all(|(v, (l, h))| *v >= l - slack && *v <= h + slack)
    }

    pub fn contains_box(&self, other: &AxisBox, slack: f64) -> bool {
        other.low.iter().zip(&self.low).all(|(o, s)| *o >= s - slack)
            && other.high.iter().zip(&self.high).all(|(o, s)| *o <= s + slack)
    }

    /// Strict containment, as needed for a compact set inside an open one.
    pub fn contains_box_strictly(&self, other: &AxisBox) -> bool {
        other.low.iter().zip(&self.low).all(|(o, s)| o > s)
            && other.high.iter().zip(&self.high).all(|(o, s)| o < s)
    }

    /// Euclidean distance between the closed boxes (0 when they touch).
    pub fn distance(&self, other: &AxisBox) -> f64 {
        (0..self.dim())
            .map(|i| {
                let gap = (other.low[i] - self.high[i]).max(self.low[i] - other.high[i]).max(0.0);
                gap * gap
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Whether the open interiors intersect.
    pub fn interiors_overlap(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.low[i] < other.high[i] && other.low[i] < self.high[i])
    }

    pub fn hull(&self, other: &AxisBox) -> AxisBox {
        AxisBox {
            low: self.low.iter().zip(&other.low).map(|(a, b)| a.min(*b)).collect(),
            high: self.high.iter().zip(&other.high).map(|(a, b)| a.max(*b)).collect(),
        }
    }
}

/// A validated affine GIFS: graph, per-edge maps and per-vertex seed and
/// domain boxes `J_v` and `O_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSystem {
    dim: usize,
    graph: DirectedMultigraph,
    maps: Vec<AffineMap>,
    seed: Vec<AxisBox>,
    domain: Vec<AxisBox>,
    tail: Option<TailRule>,
    contraction: f64,
}

impl AffineSystem {
    /// Checks dimensions, invertibility, contraction, `J_v` inside `O_v`,
    /// disjoint seed interiors and `T_e(J_t(e))` inside `J_i(e)`.
    pub fn new(
        dim: usize,
        graph: DirectedMultigraph,
        maps: Vec<AffineMap>,
        seed: Vec<AxisBox>,
        domain: Vec<AxisBox>,
    ) -> Result<Self, ModelError> {
        let mismatch = |what: &str, expected: usize, got: usize| ModelError::DimensionMismatch {
            what: what.to_string(),
            expected,
            got,
        };
        if maps.len() != graph.edge_count() {
            return Err(mismatch("map count", graph.edge_count(), maps.len()));
        }
        if seed.len() != graph.vertex_count() || domain.len() != graph.vertex_count() {
            return Err(mismatch("box count", graph.vertex_count(), seed.len().min(domain.len())));
        }
        let vname = |v: usize| graph.vertices()[v].clone();
        for (v, (j, o)) in seed.iter().zip(&domain).enumerate() {
            if j.dim() != dim || o.dim() != dim {
                return Err(mismatch(&format!("boxes of vertex {}", vname(v)), dim, j.dim()));
            }
            if !j.has_interior() || !o.has_interior() {
                return Err(ModelError::EmptyBox { vertex: vname(v) });
            }
            if !o.contains_box_strictly(j) {
                return Err(ModelError::SeedOutsideDomain { vertex: vname(v) });
            }
        }
        for a in 0..seed.len() {
            for b in a + 1..seed.len() {
                if seed[a].interiors_overlap(&seed[b]) {
                    return Err(ModelError::OverlappingSeeds {
                        first: vname(a),
                        second: vname(b),
                    });
                }
            }
        }
        let mut contraction: f64 = 0.0;
        for (e, (edge, map)) in graph.edges().iter().zip(&maps).enumerate() {
            let ename = || graph.edges()[e].name.clone();
            if map.dim() != dim || map.offset.len() != dim {
                return Err(mismatch(&format!("map of edge {}", ename()), dim, map.dim()));
            }
            if map.linear.determinant() == 0.0 {
                return Err(ModelError::SingularMap { edge: ename() });
            }
            let norm = map.linear.op_norm();
            if norm.is_nan() || norm >= 1.0 {
                return Err(ModelError::NotAContraction { edge: ename(), norm });
            }
            contraction = contraction.max(norm);
            let slack = CONTAINMENT_SLACK * (1.0 + seed[edge.from].max_side());
            if !seed[edge.from].contains_box(&map.image_box(&seed[edge.to]), slack) {
                return Err(ModelError::ImageEscapes {
                    edge: ename(),
                    terminal: vname(edge.to),
                    initial: vname(edge.from),
                });
            }
            if !domain[edge.from].contains_box(&map.image_box(&domain[edge.to]), slack) {
                return Err(ModelError::DomainEscapes {
                    edge: ename(),
                    terminal: vname(edge.to),
                    initial: vname(edge.from),
                });
            }
        }
        Ok(Self {
            dim,
            graph,
            maps,
            seed,
            domain,
            tail: None,
            contraction,
        })
    }

    pub fn with_tail(mut self, tail: TailRule) -> Self {
        self.tail = Some(tail);
        self
    }

    /// One-vertex system on the unit cube `[0,1]^D` with domain `(-1/2, 3/2)^D`.
    pub fn on_unit_cube(dim: usize, maps: Vec<AffineMap>) -> Result<Self, ModelError> {
        let graph = DirectedMultigraph::full_shift(maps.len());
        let domain = AxisBox::new(vec![-0.5; dim], vec![1.5; dim]);
        Self::new(dim, graph, maps, vec![AxisBox::unit(dim)], vec![domain])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn map(&self, e: usize) -> &AffineMap {
        &self.maps[e]
    }

    pub fn seed(&self, v: usize) -> &AxisBox {
        &self.seed[v]
    }

    pub fn seeds(&self) -> &[AxisBox] {
        &self.seed
    }

    pub fn domains(&self) -> &[AxisBox] {
        &self.domain
    }

    pub fn tail(&self) -> Option<&TailRule> {
        self.tail.as_ref()
    }

    /// `r = max_e |M_e|`.
    pub fn contraction_ratio(&self) -> f64 {
        self.contraction
    }

    /// `T_w = T_{w_1} o ... o T_{w_k}`.
    pub fn word_map(&self, word: &[usize]) -> AffineMap {
        let mut iter = word.iter();
        let first = iter.next().expect("empty word");
        iter.fold(self.maps[*first].clone(), |acc, &e| acc.compose(&self.maps[e]))
    }

    /// Bounding box of `T_w(J_t(w))`.
    pub fn word_image_box(&self, word: &[usize]) -> AxisBox {
        let last = *word.last().expect("empty word");
        self.word_map(word).image_box(&self.seed[self.graph.edges()[last].to])
    }

    /// Hull of all seed boxes.
    pub fn seed_hull(&self) -> AxisBox {
        self.seed[1..]
            .iter()
            .fold(self.seed[0].clone(), |acc, b| acc.hull(b))
    }

    /// Same graph and boxes with new maps, re-validated.
    pub fn with_maps(&self, maps: Vec<AffineMap>) -> Result<Self, ModelError> {
        let mut sys = Self::new(
            self.dim,
            self.graph.clone(),
            maps,
            self.seed.clone(),
            self.domain.clone(),
        )?;
        sys.tail = self.tail.clone();
        Ok(sys)
    }

    /// Separation diagnostics from depth-`depth` image boxes.
    pub fn validate(&self, depth: usize) -> ValidationReport {
        let depth = depth.max(1);
        let ne = self.graph.edge_count();
        let boxes: Vec<Vec<AxisBox>> = (0..ne)
            .map(|e| {
                if depth == 1 {
                    vec![self.word_image_box(&[e])]
                } else {
                    self.graph
                        .enumerate_words(depth)
                        .filter(|w| w.0[0] == e)
                        .map(|w| self.word_image_box(&w.0))
                        .collect()
                }
            })
            .collect();
        let mut separations = Vec::new();
        let mut osc_overlaps = Vec::new();
        for e in 0..ne {
            for f in e + 1..ne {
                if self.graph.edges()[e].from != self.graph.edges()[f].from {
                    continue;
                }
                let mut delta = f64::INFINITY;
                for a in &boxes[e] {
                    for b in &boxes[f] {
                        delta = delta.min(a.distance(b));
                    }
                }
                // images of the whole seed boxes
                let (ie, jf) = (self.word_image_box(&[e]), self.word_image_box(&[f]));
                if ie.interiors_overlap(&jf) {
                    osc_overlaps.push((e, f));
                }
                separations.push(Separation {
                    first: e,
                    second: f,
                    delta: if delta.is_finite() { delta } else { 0.0 },
                });
            }
        }
        let ssc = separations.iter().all(|s| s.delta > 0.0);
        ValidationReport {
            depth,
            contraction_ratio: self.contraction,
            ssc,
            osc: osc_overlaps.is_empty(),
            separations,
            osc_overlaps,
        }
    }
}

/// Lower bound on `Delta(e, e')` for two edges sharing an initial vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub first: usize,
    pub second: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub depth: usize,
    pub contraction_ratio: f64,
    pub ssc: bool,
    pub osc: bool,
    pub separations: Vec<Separation>,
    /// Edge pairs whose depth-1 image boxes have overlapping interiors.
    pub osc_overlaps: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn ssc_offenders(&self) -> impl Iterator<Item = &Separation> {
        self.separations.iter().filter(|s| s.delta <= 0.0)
    }

    pub fn min_separation(&self) -> Option<f64> {
        self.separations.iter().map(|s| s.delta).reduce(f64::min)
    }
}

type Evaluator = Arc<dyn Fn(usize, f64) -> AffineMap + Send + Sync>;

/// `M_e(eps) = M_e + sum_k M_{e,k} eps^k`, `a_e(eps)` likewise, optionally
/// overridden by an exact closed-form evaluator.
#[derive(Clone)]
pub struct PerturbedFamily {
    base: AffineSystem,
    order: usize,
    /// `coeffs[e][k-1]` holds `(M_{e,k}, a_{e,k})`.
    coeffs: Vec<Vec<(SquareMatrix, Vec<f64>)>>,
    evaluator: Option<Evaluator>,
    max_eps: f64,
}

impl fmt::Debug for PerturbedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbedFamily")
            .field("base", &self.base)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .field("closed_form", &self.evaluator.is_some())
            .field("max_eps", &self.max_eps)
            .finish()
    }
}

impl PerturbedFamily {
    pub fn new(
        base: AffineSystem,
        order: usize,
        coeffs: Vec<Vec<(SquareMatrix, Vec<f64>)>>,
    ) -> Result<Self, ModelError> {
        let ne = base.graph().edge_count();
        if coeffs.len() != ne {
            return Err(ModelError::DimensionMismatch {
                what: "coefficient edge count".into(),
                expected: ne,
                got: coeffs.len(),
            });
        }
        for (e, list) in coeffs.iter().enumerate() {
            if list.len() != order {
                return Err(ModelError::DimensionMismatch {
                    what: format!("coefficients of edge {}", base.graph().edges()[e].name),
                    expected: order,
                    got: list.len(),
                });
            }
            for (m, a) in list {
                if m.dim() != base.dim() || a.len() != base.dim() {
                    return Err(ModelError::DimensionMismatch {
                        what: format!("coefficient of edge {}", base.graph().edges()[e].name),
                        expected: base.dim(),
                        got: m.dim(),
                    });
                }
            }
        }
        Ok(Self {
            base,
            order,
            coeffs,
            evaluator: None,
            max_eps: f64::INFINITY,
        })
    }

    /// Family with no `eps` dependence.
    pub fn constant(base: AffineSystem, order: usize) -> Self {
        let d = base.dim();
        let coeffs = vec![vec![(SquareMatrix::zeros(d), vec![0.0; d]); order]; base.graph().edge_count()];
        Self {
            base,
            order,
            coeffs,
            evaluator: None,
            max_eps: f64::INFINITY,
        }
    }

    /// Installs an exact evaluator `(edge, eps) -> T_e(eps, .)` used instead
    /// of the truncated polynomial.
    pub fn with_closed_form<F>(mut self, f: F) -> Self
    where
        F: Fn(usize, f64) -> AffineMap + Send + Sync + 'static,
    {
        self.evaluator = Some(Arc::new(f));
        self
    }

    pub fn with_max_eps(mut self, max_eps: f64) -> Self {
        self.max_eps = max_eps;
        self
    }

    pub fn base(&self) -> &AffineSystem {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self, edge: usize) -> &[(SquareMatrix, Vec<f64>)] {
        &self.coeffs[edge]
    }

    pub fn has_closed_form(&self) -> bool {
        self.evaluator.is_some()
    }

    pub fn max_eps(&self) -> f64 {
        self.max_eps
    }

    /// The edge map at `eps` without re-validation.
    pub fn edge_map(&self, edge: usize, eps: f64) -> AffineMap {
        if let Some(f) = &self.evaluator {
            return f(edge, eps);
        }
        let base = self.base.map(edge);
        let mut linear = base.linear.clone();
        let mut offset = base.offset.clone();
        let mut power = 1.0;
        for (m, a) in &self.coeffs[edge] {
            power *= eps;
            linear = &linear + &m.scale(power);
            for (o, ak) in offset.iter_mut().zip(a) {
                *o += ak * power;
            }
        }
        AffineMap { linear, offset }
    }

    /// The validated system at `eps`; `eps = 0` returns the base unchanged.
    pub fn at(&self, eps: f64) -> Result<AffineSystem, ModelError> {
        if !(eps >= 0.0) || eps > self.max_eps {
            return Err(ModelError::EpsOutOfRange {
                eps,
                max: self.max_eps,
            });
        }
        if eps == 0.0 {
            return Ok(self.base.clone());
        }
        let maps = (0..self.base.graph().edge_count())
            .map(|e| self.edge_map(e, eps))
            .collect();
        self.base.with_maps(maps).map_err(|source| ModelError::InvalidAt {
            eps,
            source: Box::new(source),
        })
    }

    /// Largest grid value `eps*` such that every grid point `<= eps*` gives
    /// a valid system; 0 when even the smallest point fails.
    pub fn validity_limit(&self, grid: &[f64]) -> f64 {
        let mut sorted: Vec<f64> = grid.iter().copied().filter(|e| *e > 0.0).collect();
        sorted.sort_by(f64::total_cmp);
        let mut limit = 0.0;
        for eps in sorted {
            if self.at(eps).is_err() {
                break;
            }
            limit = eps;
        }
        limit
    }

    /// `K(eps) = max_e K_min(M_e(eps))` over the grid.
    pub fn quasiregularity_report(&self, grid: &[f64]) -> Result<QuasiregularityReport, ModelError> {
        let mut rows = Vec::with_capacity(grid.len());
        for &eps in grid {
            let sys = self.at(eps)?;
            let mut k: f64 = 1.0;
            for m in sys.maps() {
                k = k.max(m.linear.min_quasiregular_k()?);
            }
            rows.push((eps, k));
        }
        Ok(QuasiregularityReport::from_rows(rows))
    }
}

/// Below this `K - 1` counts as round-off of an exactly conformal map.
pub const CONFORMAL_K_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiregularityReport {
    /// `(eps, K(eps))`.
    pub rows: Vec<(f64, f64)>,
    /// Least-squares slope of `log(K - 1)` against `log eps`.
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
    pub exactly_conformal: bool,
}

impl QuasiregularityReport {
    pub fn from_rows(rows: Vec<(f64, f64)>) -> Self {
        let exactly_conformal = rows.iter().all(|(_, k)| k - 1.0 <= CONFORMAL_K_SLACK);
        let (xs, ys): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter(|(e, k)| *e > 0.0 && k - 1.0 > CONFORMAL_K_SLACK)
            .map(|(e, k)| (e.ln(), (k - 1.0).ln()))
            .unzip();
        let fit = if exactly_conformal { None } else { fit_line(&xs, &ys) };
        Self {
            rows,
            slope: fit.map(|f| f.slope),
            slope_stderr: fit.map(|f| f.slope_stderr),
            exactly_conformal,
        }
    }

    /// Whether `K(eps) = 1 + o(eps^n)` is supported: exactly conformal, or the
    /// fitted slope exceeds `n` by more than `margin`.
    pub fn meets_order(&self, n: usize, margin: f64) -> bool {
        self.exactly_conformal || self.slope.is_some_and(|s| s > n as f64 + margin)
    }
}

/// Random admissible words of a fixed length, for coding-map probes.
pub fn sample_words(graph: &DirectedMultigraph, count: usize, len: usize, seed: u64) -> Vec<Word> {
    use crate::oracle::ChainRng;
    let mut rng = ChainRng::new(seed, 0);
    let mut out = Vec::with_capacity(count);
    'outer: while out.len() < count {
        let mut w = vec![rng.below(graph.edge_count())];
        while w.len() < len {
            let next = graph.successors(*w.last().unwrap());
            if next.is_empty() {
                continue 'outer;
            }
            w.push(next[rng.below(next.len())]);
        }
        out.push(Word(w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_system(maps: &[(f64, f64)]) -> AffineSystem {
        let maps = maps
            .iter()
            .map(|&(c, a)| AffineMap::similitude(c, vec![a]))
            .collect();
        AffineSystem::on_unit_cube(1, maps).unwrap()
    }

    #[test]
    fn cantor_separation() {
        let rep = interval_system(&[(1.0 / 3.0, 0.0), (1.0 / 3.0, 2.0 / 3.0)]).validate(1);
        assert!(rep.ssc && rep.osc);
        assert!((rep.separations[0].delta - 1.0 / 3.0).abs() < 1e-15);
        let rep2 = interval_system(&[(1.0 / 3.0, 0.0), (1.0 / 3.0, 2.0 / 3.0)]).validate(3);
        assert!((rep2.separations[0].delta - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn touching_halves() {
        let rep = interval_system(&[(0.5, 0.0), (0.5, 0.5)]).validate(1);
        assert!(!rep.ssc);
        assert!(rep.osc);
        assert_eq!(rep.separations[0].delta, 0.0);
        assert_eq!(rep.ssc_offenders().count(), 1);
    }

    #[test]
    fn two_vertex_overlap_is_reported() {
        let g = DirectedMultigraph::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        let j = vec![AxisBox::new(vec![0.0], vec![1.0]), AxisBox::new(vec![2.0], vec![3.0])];
        let o = vec![AxisBox::new(vec![-0.1], vec![1.1]), AxisBox::new(vec![1.9], vec![3.1])];
        let maps = vec![
            AffineMap::similitude(0.5, vec![-1.0]),  // [2,3] -> [0,0.5]
            AffineMap::similitude(0.5, vec![-0.8]),  // [2,3] -> [0.2,0.7]
            AffineMap::similitude(0.5, vec![2.25]), // [0,1] -> [2.25,2.75]
        ];
        let sys = AffineSystem::new(1, g, maps, j, o).unwrap();
        let rep = sys.validate(1);
        assert!(!rep.ssc && !rep.osc);
        assert_eq!(rep.osc_overlaps, vec![(0, 1)]);
        let bad: Vec<_> = rep.ssc_offenders().map(|s| (s.first, s.second)).collect();
        assert_eq!(bad, vec![(0, 1)]);
    }

    #[test]
    fn rejects_non_contraction() {
        let err = AffineSystem::on_unit_cube(1, vec![AffineMap::similitude(1.2, vec![0.0])]).unwrap_err();
        assert!(matches!(err, ModelError::NotAContraction { .. }));
        assert!(err.to_string().contains("not a contraction"));
        let err = AffineSystem::on_unit_cube(1, vec![AffineMap::similitude(0.5, vec![0.7])]).unwrap_err();
        assert!(matches!(err, ModelError::ImageEscapes { .. }));
    }

    #[test]
    fn family_evaluation() {
        let base = interval_system(&[(0.5, 0.0), (0.25, 0.5)]);
        let one = SquareMatrix::identity(1);
        let fam = PerturbedFamily::new(
            base.clone(),
            1,
            vec![vec![(one.clone(), vec![0.0])], vec![(one.scale(0.0), vec![0.1])]],
        )
        .unwrap();
        assert_eq!(fam.at(0.0).unwrap(), base);
        let at = fam.at(0.1).unwrap();
        assert!((at.map(0).linear.get(0, 0) - 0.6).abs() < 1e-15);
        assert!((at.map(1).offset[0] - 0.51).abs() < 1e-15);
        // 0.5 + eps reaches the non-contraction (and escape) regime
        assert!(matches!(fam.at(0.6), Err(ModelError::InvalidAt { .. })));
        assert!(matches!(fam.at(-0.1), Err(ModelError::EpsOutOfRange { .. })));
        assert_eq!(fam.validity_limit(&[0.4, 0.1, 0.2, 0.7]), 0.4);
    }

    #[test]
    fn k_report_linear_violation() {
        let base = AffineSystem::on_unit_cube(2, vec![AffineMap::similitude(0.5, vec![0.0, 0.0])]).unwrap();
        let fam = PerturbedFamily::new(
            base,
            1,
            vec![vec![(SquareMatrix::diagonal(&[1.0, 0.0]), vec![0.0, 0.0])]],
        )
        .unwrap();
        let grid: Vec<f64> = (0..8).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        let rep = fam.quasiregularity_report(&grid).unwrap();
        assert!(!rep.exactly_conformal);
        assert!((rep.slope.unwrap() - 1.0).abs() < 1e-9);
        assert!(!rep.meets_order(1, 0.05));
        assert!(rep.meets_order(0, 0.05));
    }

    #[test]
    fn image_box_of_rotation() {
        let c = std::f64::consts::FRAC_1_SQRT_2 * 0.5;
        let m = AffineMap::new(SquareMatrix::from_rows(&[[c, -c], [c, c]]).unwrap(), vec![0.5, 0.0]).unwrap();
        let b = m.image_box(&AxisBox::unit(2));
        assert!((b.low[0] - (0.5 - c)).abs() < 1e-15);
        assert!((b.high[1] - 2.0 * c).abs() < 1e-15);
    }
}
