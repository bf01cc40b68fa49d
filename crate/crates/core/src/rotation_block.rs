//! A perturbed affine family in three dimensions whose quasiregularity
//! constant tends to 1 quadratically.
//!
//! The perturbed map scales by `r/2` along `x` and rotates the `yz` plane by
//! `pi/3` with factor `r/2`; the perturbation adds `r * diag(eps/4, eps/2,
//! eps/2)`. Four similitudes of ratio 0.3 in the far corners of the unit
//! cube complete the system; the offsets keep all five images disjoint.

use crate::graph::DirectedMultigraph;
use crate::linalg::SquareMatrix;
use crate::model::{AffineMap, AffineSystem, AxisBox, ModelError, PerturbedFamily};

pub const DEFAULT_R: f64 = 0.4;
pub const COMPANION_RATIO: f64 = 0.3;
pub const COMPANION_OFFSETS: [[f64; 3]; 4] = [
    [0.7, 0.0, 0.0],
    [0.0, 0.7, 0.0],
    [0.0, 0.0, 0.7],
    [0.7, 0.7, 0.7],
];
/// Offset of the perturbed map, in units of `r`.
pub const BLOCK_OFFSET: [f64; 3] = [0.125, 0.5, 0.05];
pub const MAX_EPS: f64 = 1.0;

/// `M(eps) / r`.
pub fn block_matrix(eps: f64) -> SquareMatrix {
    let h = 3f64.sqrt() / 4.0;
    SquareMatrix::from_rows(&[
        [0.5 + eps / 4.0, 0.0, 0.0],
        [0.0, 0.25 + eps / 2.0, -h],
        [0.0, h, 0.25 + eps / 2.0],
    ])
    .expect("3x3")
}

/// `(1/2) sqrt(eps^2 + eps + 1)`, the operator norm of [`block_matrix`].
pub fn block_op_norm(eps: f64) -> f64 {
    0.5 * (eps * eps + eps + 1.0).sqrt()
}

/// `(eps + 2) / 4`, the infimum norm of [`block_matrix`].
pub fn block_inf_norm(eps: f64) -> f64 {
    (eps + 2.0) / 4.0
}

/// The published closed form `2 sqrt 2 (eps^2+eps+1)^(3/4) / (eps+2)^(3/2)`.
pub fn closed_form_k(eps: f64) -> f64 {
    2.0 * 2f64.sqrt() * (eps * eps + eps + 1.0).powf(0.75) / (eps + 2.0).powf(1.5)
}

/// Second-order Taylor coefficient of [`closed_form_k`] at 0 by the central
/// difference `(K(h) - 2K(0) + K(-h)) / (2 h^2)`.
pub fn closed_form_k_second_coefficient(h: f64) -> f64 {
    (closed_form_k(h) - 2.0 * closed_form_k(0.0) + closed_form_k(-h)) / (2.0 * h * h)
}

fn block_map(r: f64, eps: f64) -> AffineMap {
    AffineMap {
        linear: block_matrix(eps).scale(r),
        offset: BLOCK_OFFSET.iter().map(|a| a * r).collect(),
    }
}

/// The family with the perturbed map on edge 0, for `0 < r <= 1/2`.
pub fn family(r: f64) -> Result<PerturbedFamily, ModelError> {
    if !(r > 0.0 && r <= 0.5) {
        return Err(ModelError::ParameterOutOfRange {
            name: "r".into(),
            value: r,
            low: 0.0,
            high: 0.5,
        });
    }
    let mut maps = vec![block_map(r, 0.0)];
    maps.extend(
        COMPANION_OFFSETS
            .iter()
            .map(|a| AffineMap::similitude(COMPANION_RATIO, a.to_vec())),
    );
    let graph = DirectedMultigraph::full_shift(maps.len());
    let base = AffineSystem::new(
        3,
        graph,
        maps.clone(),
        vec![AxisBox::unit(3)],
        vec![AxisBox::new(vec![-0.5; 3], vec![1.5; 3])],
    )?;
    let mut coeffs = vec![vec![(SquareMatrix::zeros(3), vec![0.0; 3])]; maps.len()];
    coeffs[0][0].0 = SquareMatrix::diagonal(&[0.25, 0.5, 0.5]).scale(r);
    let fam = PerturbedFamily::new(base, 1, coeffs)?
        .with_max_eps(MAX_EPS)
        .with_closed_form(move |e, eps| if e == 0 { block_map(r, eps) } else { maps[e].clone() });
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((closed_form_k(0.0) - 1.0).abs() < 1e-15);
        assert!((closed_form_k(0.1) - 1.00509).abs() < 1e-5);
        for h in [1e-2, 5e-3] {
            assert!((closed_form_k_second_coefficient(h) - 0.5625).abs() < 1e-3);
        }
        for i in 0..=50 {
            let eps = 0.01 * i as f64;
            let m = block_matrix(eps);
            assert!((m.op_norm() - block_op_norm(eps)).abs() < 1e-12);
            assert!((m.inf_norm() - block_inf_norm(eps)).abs() < 1e-12);
        }
        assert!(block_matrix(0.0).is_conformal(1e-9));
    }

    #[test]
    fn family_is_valid_and_separated() {
        for r in [0.1, 0.4, 0.5] {
            let fam = family(r).unwrap();
            for eps in [0.0, 0.1, 0.5, 1.0] {
                let sys = fam.at(eps).unwrap();
                assert!(sys.validate(1).ssc, "r={r} eps={eps}");
                // closed form and truncated polynomial coincide for a linear family
                let poly = fam.coeffs(0)[0].0.scale(eps);
                let expected = &fam.base().map(0).linear + &poly;
                assert!(sys
                    .map(0)
                    .linear
                    .as_slice()
                    .iter()
                    .zip(expected.as_slice())
                    .all(|(a, b)| (a - b).abs() < 1e-15));
            }
        }
        assert!(family(0.6).is_err());
        let sys = family(0.4).unwrap().at(0.1).unwrap();
        assert!((sys.map(0).linear.get(0, 0) - 0.4 * (0.5 + 0.025)).abs() < 1e-15);
    }
}
