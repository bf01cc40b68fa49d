//! Bowen-equation roots and dimension brackets for affine systems.

use std::fmt;

use thiserror::Error;

use crate::graph::DirectedMultigraph;
use crate::linalg::LinalgError;
use crate::model::AffineSystem;
use crate::pressure::{pressure_spectral, EdgePotential, PressureError};

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_CONFORMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BowenError {
    #[error("no positive root: pressure at s=0 is {0}")]
    NoPositiveRoot(f64),
    #[error("potential must be negative on every edge, edge {edge} has {value}")]
    NonNegativePotential { edge: usize, value: f64 },
    #[error("degenerate bracket: {0}")]
    DegenerateBracket(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Pressure(#[from] PressureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A root found by bisection together with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCertificate {
    pub root: f64,
    /// Final bracket; the function is positive at `lower` and non-positive
    /// at `upper`.
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub value_at_lower: f64,
    pub value_at_upper: f64,
}

/// Bisection for the zero of a strictly decreasing `f` on `[lo, hi]`,
/// stopping when the bracket is no wider than `tol`.
pub fn bisect_decreasing<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<RootCertificate, BowenError>
where
    F: FnMut(f64) -> Result<f64, BowenError>,
{
    if !(tol > 0.0) {
        return Err(BowenError::BadTolerance(tol));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if !(f_lo > 0.0) || f_hi > 0.0 {
        return Err(BowenError::DegenerateBracket(format!(
            "f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v > 0.0 {
            lo = mid;
            f_lo = v;
        } else {
            hi = mid;
            f_hi = v;
        }
        iterations += 1;
    }
    Ok(RootCertificate {
        root: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        iterations,
        value_at_lower: f_lo,
        value_at_upper: f_hi,
    })
}

fn check_negative(phi: &EdgePotential) -> Result<(), BowenError> {
    match phi.values().iter().position(|v| !(*v < 0.0)) {
        Some(edge) => Err(BowenError::NonNegativePotential {
            edge,
            value: phi.values()[edge],
        }),
        None => Ok(()),
    }
}

/// The zero of `s -> P(s phi)` on `[0, P(0) / (-max phi)]`.
pub fn bowen_root(g: &DirectedMultigraph, phi: &EdgePotential, tol: f64) -> Result<RootCertificate, BowenError> {
    check_negative(phi)?;
    let p0 = pressure_spectral(g, &phi.scaled(0.0))?.value;
    if !(p0 > 0.0) {
        return Err(BowenError::NoPositiveRoot(p0));
    }
    let s_max = p0 / -phi.max();
    bisect_decreasing(
        |s| Ok(pressure_spectral(g, &phi.scaled(s))?.value),
        0.0,
        s_max * (1.0 + 1e-12) + tol,
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionFlag {
    /// No connecting words within `|V|` edges for some edge pair.
    NotFinitelyIrreducible,
    /// Open set condition only: the lower bound is not guaranteed.
    LowerBoundHeuristic,
    /// Neither separation condition was verified at the depth used.
    NoSeparation,
}

impl fmt::Display for DimensionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimensionFlag::NotFinitelyIrreducible => "not-finitely-irreducible",
            DimensionFlag::LowerBoundHeuristic => "lower-bound-heuristic",
            DimensionFlag::NoSeparation => "no-separation",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionReport {
    pub lower: f64,
    pub upper: f64,
    pub det_bracket: (f64, f64),
    pub conformal: bool,
    /// `max_e K_min(M_e)`.
    pub k: f64,
    pub flags: Vec<DimensionFlag>,
    pub lower_root: RootCertificate,
    pub upper_root: RootCertificate,
}

impl DimensionReport {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn flag_string(&self) -> String {
        self.flags.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(";")
    }
}

pub fn upper_potential(sys: &AffineSystem) -> EdgePotential {
    EdgePotential::new(sys.maps().iter().map(|m| m.linear.op_norm().ln()).collect())
        .expect("norms of contractions are finite")
}

pub fn lower_potential(sys: &AffineSystem) -> EdgePotential {
    EdgePotential::new(sys.maps().iter().map(|m| m.linear.inf_norm().ln()).collect())
        .expect("invertible maps have positive infimum norm")
}

pub fn determinant_potential(sys: &AffineSystem) -> EdgePotential {
    EdgePotential::new(sys.maps().iter().map(|m| m.linear.determinant().abs().ln()).collect())
        .expect("invertible maps have non-zero determinant")
}

/// Upper bound from `log |M_e|`, lower bound from `log |M_e|_i`, plus the
/// determinant bracket with `K = max_e K_min(M_e)`.
pub fn dim_bounds_affine(sys: &AffineSystem, tol: f64) -> Result<DimensionReport, BowenError> {
    let g = sys.graph();
    let upper_root = bowen_root(g, &upper_potential(sys), tol)?;
    let lower_root = bowen_root(g, &lower_potential(sys), tol)?;
    let mut k: f64 = 1.0;
    for m in sys.maps() {
        k = k.max(m.linear.min_quasiregular_k()?);
    }
    let det = det_bracket(sys, k, tol)?;
    let conformal = sys.maps().iter().all(|m| m.linear.is_conformal(DEFAULT_CONFORMAL_TOL));

    let mut flags = Vec::new();
    if !g.finite_irreducibility(g.vertex_count().max(1)).irreducible {
        flags.push(DimensionFlag::NotFinitelyIrreducible);
    }
    let validation = sys.validate(1);
    if !validation.ssc {
        flags.push(if validation.osc {
            DimensionFlag::LowerBoundHeuristic
        } else {
            DimensionFlag::NoSeparation
        });
    }
    Ok(DimensionReport {
        lower: lower_root.root,
        upper: upper_root.root,
        det_bracket: det,
        conformal,
        k,
        flags,
        lower_root,
        upper_root,
    })
}

/// `[s-, s+]` with `P((s/D) phi_det) = +(s/D) log K` at `s-` and
/// `-(s/D) log K` at `s+`, where `phi_det = log |det M_e|`.
pub fn det_bracket(sys: &AffineSystem, k: f64, tol: f64) -> Result<(f64, f64), BowenError> {
    if !(k >= 1.0) {
        return Err(BowenError::DegenerateBracket(format!("K must be >= 1, got {k}")));
    }
    let g = sys.graph();
    let phi = determinant_potential(sys);
    check_negative(&phi)?;
    let d = sys.dim() as f64;
    let log_k = k.ln();
    let p0 = pressure_spectral(g, &phi.scaled(0.0))?.value;
    if !(p0 > 0.0) {
        return Err(BowenError::NoPositiveRoot(p0));
    }
    // P((s/D) phi) <= P(0) + (s/D) max phi gives the right bracket ends
    let max_phi = phi.max();
    let root = |sign: f64| -> Result<f64, BowenError> {
        let slope = max_phi - sign * log_k;
        if slope >= 0.0 {
            return Err(BowenError::DegenerateBracket(format!(
                "log K = {log_k} outweighs the largest determinant potential {max_phi}"
            )));
        }
        let s_max = d * p0 / -slope;
        let cert = bisect_decreasing(
            |s| Ok(pressure_spectral(g, &phi.scaled(s / d))?.value - sign * (s / d) * log_k),
            0.0,
            s_max * (1.0 + 1e-12) + tol,
            tol,
        )?;
        Ok(cert.root)
    };
    Ok((root(1.0)?, root(-1.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SquareMatrix;
    use crate::model::AffineMap;

    fn uniform(n: usize, c: f64) -> (DirectedMultigraph, EdgePotential) {
        (
            DirectedMultigraph::full_shift(n),
            EdgePotential::new(vec![c.ln(); n]).unwrap(),
        )
    }

    #[test]
    fn similarity_dimensions() {
        let (g, phi) = uniform(3, 0.5);
        let r = bowen_root(&g, &phi, 1e-10).unwrap();
        assert!((r.root - 3f64.ln() / 2f64.ln()).abs() < 1e-10);
        let (g, phi) = uniform(2, 0.5);
        assert!((bowen_root(&g, &phi, 1e-10).unwrap().root - 1.0).abs() < 1e-10);
        let g = DirectedMultigraph::full_shift(2);
        let phi = EdgePotential::new(vec![0.5f64.ln(), 0.25f64.ln()]).unwrap();
        // x + x^2 = 1 with x = 2^-s
        let x = (5f64.sqrt() - 1.0) / 2.0;
        let expected = -x.ln() / 2f64.ln();
        assert!((bowen_root(&g, &phi, 1e-10).unwrap().root - expected).abs() < 1e-10);
    }

    #[test]
    fn certificate_brackets_root() {
        let g = DirectedMultigraph::from_pairs(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let phi = EdgePotential::new(vec![-0.9, -1.3, -0.7, -2.2]).unwrap();
        let tol = 1e-10;
        let c = bowen_root(&g, &phi, tol).unwrap();
        let p = |s: f64| pressure_spectral(&g, &phi.scaled(s)).unwrap().value;
        assert!(p(c.root - tol) > 0.0 && p(c.root + tol) < 0.0);
        assert!(c.upper - c.lower <= tol);
    }

    #[test]
    fn degenerate_inputs() {
        let (g, phi) = uniform(1, 0.5);
        assert!(matches!(bowen_root(&g, &phi, 1e-10), Err(BowenError::NoPositiveRoot(_))));
        let g = DirectedMultigraph::full_shift(2);
        let phi = EdgePotential::new(vec![-1.0, 0.0]).unwrap();
        assert!(matches!(
            bowen_root(&g, &phi, 1e-10),
            Err(BowenError::NonNegativePotential { edge: 1, .. })
        ));
        assert!(bisect_decreasing(|s| Ok(1.0 - s), 0.0, 2.0, 0.0).is_err());
    }

    fn diag_system() -> AffineSystem {
        let m = SquareMatrix::diagonal(&[0.5, 0.25]);
        AffineSystem::on_unit_cube(
            2,
            vec![
                AffineMap::new(m.clone(), vec![0.0, 0.0]).unwrap(),
                AffineMap::new(m, vec![0.5, 0.75]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn diagonal_bracket() {
        let rep = dim_bounds_affine(&diag_system(), 1e-10).unwrap();
        assert!((rep.lower - 0.5).abs() < 1e-9 && (rep.upper - 1.0).abs() < 1e-9);
        assert!((rep.k - 2.0).abs() < 1e-14);
        assert!((rep.det_bracket.0 - 0.5).abs() < 1e-6 && (rep.det_bracket.1 - 1.0).abs() < 1e-6);
        assert!(!rep.conformal);
        assert!(rep.flags.is_empty(), "{:?}", rep.flags);
    }

    #[test]
    fn conformal_bracket_collapses() {
        let sys = AffineSystem::on_unit_cube(
            2,
            vec![
                AffineMap::similitude(0.5, vec![0.0, 0.0]),
                AffineMap::similitude(0.5, vec![0.5, 0.0]),
                AffineMap::similitude(0.5, vec![0.0, 0.5]),
            ],
        )
        .unwrap();
        let tol = 1e-10;
        let rep = dim_bounds_affine(&sys, tol).unwrap();
        assert!(rep.conformal);
        assert!(rep.width() <= 2.0 * tol);
        let log3 = 3f64.ln() / 2f64.ln();
        assert!((rep.det_bracket.0 - log3).abs() < 2.0 * tol && (rep.det_bracket.1 - log3).abs() < 2.0 * tol);
        // Sierpinski images touch: only the open set condition holds
        assert_eq!(rep.flags, vec![DimensionFlag::LowerBoundHeuristic]);
    }
}
