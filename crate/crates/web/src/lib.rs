//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export is an ordinary Rust function as well, so the bindings are
//! tested natively.

use gifs_dim::bowen::dim_bounds_affine;
use gifs_dim::oracle::{box_count_dim, chaos_game, dyadic_scales, DEFAULT_BURN_IN};
use gifs_dim::perturb::{dyadic_grid, fit_expansion, FitOptions};
use gifs_dim::rotation_block::{self, closed_form_k};
use gifs_dim::{parse_spec, AffineSystem};
use wasm_bindgen::prelude::*;

const PRESETS: [(&str, &str); 5] = [
    ("sierpinski", include_str!("../../../specs/sierpinski.gifs")),
    ("cantor", include_str!("../../../specs/cantor.gifs")),
    ("affine_diag", include_str!("../../../specs/affine_diag.gifs")),
    ("two_vertex", include_str!("../../../specs/two_vertex.gifs")),
    ("r3_family", include_str!("../../../specs/r3_family.gifs")),
];

const TOL: f64 = 1e-10;

#[wasm_bindgen]
pub fn preset_names() -> Vec<String> {
    PRESETS.iter().map(|(n, _)| n.to_string()).collect()
}

#[wasm_bindgen]
pub fn preset(name: &str) -> Result<String, String> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| format!("unknown preset {name}"))
}

fn system(spec: &str) -> Result<AffineSystem, String> {
    parse_spec(spec).map(|s| s.base().clone()).map_err(|e| e.to_string())
}

/// Chaos-game sample as flat `(x, y, vertex)` triples; only the first two
/// coordinates are kept and one-dimensional systems get `y = 0`.
#[wasm_bindgen]
pub fn attractor_points(spec: &str, points: usize, seed: u32) -> Result<Vec<f64>, String> {
    let sys = system(spec)?;
    let cloud = chaos_game(&sys, points, DEFAULT_BURN_IN, u64::from(seed)).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * cloud.points.len());
    for (p, &v) in cloud.points.iter().zip(&cloud.labels) {
        out.push(p[0]);
        out.push(p.get(1).copied().unwrap_or(0.0));
        out.push(v as f64);
    }
    Ok(out)
}

#[wasm_bindgen]
pub struct DimensionSummary {
    pub lower: f64,
    pub upper: f64,
    pub det_lower: f64,
    pub det_upper: f64,
    pub k: f64,
    pub box_dimension: f64,
    pub box_stderr: f64,
    flags: String,
}

#[wasm_bindgen]
impl DimensionSummary {
    #[wasm_bindgen(getter)]
    pub fn flags(&self) -> String {
        self.flags.clone()
    }
}

/// Pressure brackets together with a box-counting estimate from `points`
/// chaos-game samples.
#[wasm_bindgen]
pub fn dimension_summary(spec: &str, points: usize, seed: u32) -> Result<DimensionSummary, String> {
    let sys = system(spec)?;
    let r = dim_bounds_affine(&sys, TOL).map_err(|e| e.to_string())?;
    let cloud = chaos_game(&sys, points, DEFAULT_BURN_IN, u64::from(seed)).map_err(|e| e.to_string())?;
    let bc = box_count_dim(&cloud, &dyadic_scales(cloud.extent, 8)).map_err(|e| e.to_string())?;
    Ok(DimensionSummary {
        lower: r.lower,
        upper: r.upper,
        det_lower: r.det_bracket.0,
        det_upper: r.det_bracket.1,
        k: r.k,
        box_dimension: bc.slope,
        box_stderr: bc.stderr,
        flags: r.flag_string(),
    })
}

#[wasm_bindgen]
pub struct Sweep {
    rows: Vec<f64>,
    pub s0: f64,
    pub s1: f64,
    pub remainder_slope: f64,
}

#[wasm_bindgen]
impl Sweep {
    /// Flat `(eps, s_lower, s_upper, K_min, K_closed_form)` rows, `eps = 0` first.
    #[wasm_bindgen(getter)]
    pub fn rows(&self) -> Vec<f64> {
        self.rows.clone()
    }
}

/// Dimension brackets of the rotation-block family over `eps_start * 2^-j`
/// and the first-order expansion fitted to them.
#[wasm_bindgen]
pub fn rotation_block_sweep(r: f64, eps_start: f64, levels: usize) -> Result<Sweep, String> {
    let fam = rotation_block::family(r).map_err(|e| e.to_string())?;
    let grid = dyadic_grid(eps_start, levels);
    let fit = fit_expansion(&fam, 1, &grid, FitOptions::default()).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(5 * (fit.rows.len() + 1));
    for row in std::iter::once(&fit.base).chain(&fit.rows) {
        rows.extend([row.eps, row.lower, row.upper, row.k, closed_form_k(row.eps)]);
    }
    Ok(Sweep {
        rows,
        s0: fit.coefficients[0],
        s1: fit.coefficients[1],
        remainder_slope: fit.remainder_slope.unwrap_or(f64::NAN),
    })
}
