//! One pass/fail line per acceptance criterion. Run with
//! `cargo test -p gifs-dim --test acceptance -- --nocapture` to see them.

use std::time::{Duration, Instant};

use gifs_dim::bowen::{bowen_root, det_bracket, dim_bounds_affine, upper_potential};
use gifs_dim::linalg::fit_line;
use gifs_dim::model::sample_words;
use gifs_dim::oracle::{box_count_dim, chaos_game, coding_perturbation_check, dyadic_scales, resolving_length};
use gifs_dim::perturb::{dyadic_grid, fit_expansion, FitMethod, FitOptions};
use gifs_dim::pressure::{
    finiteness_threshold, pressure_cylinder, pressure_spectral, pressure_truncated, CountableSystem, TailRule,
    TruncationOptions,
};
use gifs_dim::rotation_block::{self, block_matrix, closed_form_k, closed_form_k_second_coefficient};
use gifs_dim::{AffineMap, AffineSystem, DirectedMultigraph, EdgePotential, PerturbedFamily, SquareMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROOT_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn similitudes(dim: usize, maps: &[(f64, &[f64])]) -> AffineSystem {
    AffineSystem::on_unit_cube(dim, maps.iter().map(|(r, a)| AffineMap::similitude(*r, a.to_vec())).collect())
        .unwrap()
}

fn diagonal_pair() -> AffineSystem {
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

fn closed_form_quasiregularity() -> Outcome {
    let k0 = closed_form_k(0.0);
    let coeffs: Vec<f64> = [1e-2, 5e-3].iter().map(|&h| closed_form_k_second_coefficient(h)).collect();
    let pass = (k0 - 1.0).abs() < 1e-12 && coeffs.iter().all(|c| (c - 0.5625).abs() < 1e-3);
    outcome(pass, format!("K(0) = {k0}, second-order coefficients {coeffs:?} vs 0.5625 +/- 1e-3"))
}

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn quasiregularity_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for eps in [0.05, 0.1, 0.2] {
        let m = block_matrix(eps).scale(rotation_block::DEFAULT_R);
        let k = m.min_quasiregular_k().unwrap();
        let det = m.determinant().abs();
        for _ in 0..1000 {
            let v = unit_vector(&mut rng, 3);
            let stretch = gifs_dim::linalg::norm(&m.apply(&v)).powi(3);
            // |Mv| lies between the two norms, so both sides of the
            // inequality must hold for it
            if stretch / k > det * (1.0 + 1e-12) || det > k * stretch * (1.0 + 1e-12) {
                violations += 1;
            }
        }
        if m.op_norm().powi(3) / k > det * (1.0 + 1e-12) || det > k * m.inf_norm().powi(3) * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    let fam = rotation_block::family(rotation_block::DEFAULT_R).unwrap();
    let slope = fam.quasiregularity_report(&dyadic_grid(0.1, 11)).unwrap().slope.unwrap();
    let coarse = fam.quasiregularity_report(&[0.2, 0.1, 0.05]).unwrap().slope.unwrap();
    let pass = violations == 0 && (slope - 2.0).abs() <= 0.05;
    outcome(
        pass,
        format!(
            "{violations} violations in 3000 vectors; slope {slope:.4} on eps = 0.1 * 2^-j, j < 11 (2.0 +/- 0.05); {coarse:.4} on {{0.05, 0.1, 0.2}}"
        ),
    )
}

fn bowen_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for (m, c) in [(3usize, 0.5f64), (2, 0.5), (5, 1.0 / 3.0)] {
        let g = DirectedMultigraph::full_shift(m);
        let phi = EdgePotential::new(vec![c.ln(); m]).unwrap();
        let root = bowen_root(&g, &phi, ROOT_TOL).unwrap().root;
        worst = worst.max((root + (m as f64).ln() / c.ln()).abs());
    }
    let g = DirectedMultigraph::full_shift(2);
    let phi = EdgePotential::new(vec![0.5f64.ln(), 0.25f64.ln()]).unwrap();
    let root = bowen_root(&g, &phi, ROOT_TOL).unwrap().root;
    // x = 2^-s solves x + x^2 = 1
    let x = (5f64.sqrt() - 1.0) / 2.0;
    let oracle = -x.log2();
    let pass = worst <= 1e-10 && (root - 0.6942419).abs() <= 1e-6 && (root - oracle).abs() <= 1e-6;
    outcome(
        pass,
        format!("equal ratios: worst error {worst:.2e} (<= 1e-10); ratios 1/2, 1/4: {root:.10} vs {oracle:.10}"),
    )
}

fn random_system(rng: &mut ChaCha8Rng) -> (DirectedMultigraph, EdgePotential) {
    let nv = rng.random_range(1..=3usize);
    let mut pairs: Vec<(usize, usize)> = (0..nv).map(|v| (v, (v + 1) % nv)).collect();
    let extra = rng.random_range(0..=5 - nv);
    for _ in 0..extra {
        pairs.push((rng.random_range(0..nv), rng.random_range(0..nv)));
    }
    let g = DirectedMultigraph::from_pairs(nv, &pairs).unwrap();
    let phi = EdgePotential::new((0..g.edge_count()).map(|_| rng.random_range(0.1f64..0.6).ln()).collect()).unwrap();
    (g, phi)
}

fn pressure_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut over = 0;
    let mut envelope_breaks = 0;
    for _ in 0..20 {
        let (g, phi) = random_system(&mut rng);
        let p = pressure_spectral(&g, &phi).unwrap().value;
        let scaled_err: Vec<f64> = (1..=12)
            .map(|n| n as f64 * (pressure_cylinder(&g, &phi, n).unwrap() - p).abs())
            .collect();
        let err12 = scaled_err[11] / 12.0;
        worst = worst.max(err12);
        if err12 > 1e-2 {
            over += 1;
        }
        // n |P_n - P| stays bounded: the error envelope decays like 1/n
        let early = scaled_err[..6].iter().copied().fold(0.0, f64::max);
        let late = scaled_err[6..].iter().copied().fold(0.0, f64::max);
        if late > early + 1e-9 {
            envelope_breaks += 1;
        }
    }
    outcome(
        over == 0 && envelope_breaks == 0,
        format!(
            "{over}/20 systems exceed 1e-2 at n = 12 (worst {worst:.4}); {envelope_breaks} envelope violations"
        ),
    )
}

fn affine_bracket() -> Outcome {
    let sys = diagonal_pair();
    let r = dim_bounds_affine(&sys, ROOT_TOL).unwrap();
    let cloud = chaos_game(&sys, 100_000, 64, 0).unwrap();
    let bc = box_count_dim(&cloud, &dyadic_scales(cloud.extent, 8)).unwrap();
    let pass = (r.lower - 0.5).abs() <= 1e-9 && (r.upper - 1.0).abs() <= 1e-9 && (0.45..=1.05).contains(&bc.slope);
    outcome(
        pass,
        format!("bracket ({:.12}, {:.12}); box counting {:.4} in [0.45, 1.05]", r.lower, r.upper, bc.slope),
    )
}

fn expansion_fit() -> Outcome {
    let base = similitudes(1, &[(0.5, &[0.0]), (0.5, &[0.5])]);
    let bump = SquareMatrix::scaled_identity(1, 0.1);
    let fam = PerturbedFamily::new(base, 1, vec![vec![(bump.clone(), vec![0.0])], vec![(bump, vec![-0.1])]]).unwrap();
    let grid = dyadic_grid(0.1, 11);
    // d/d eps of log 2 / -log(1/2 + eps/10) at eps = 0
    let exact = 0.2 / 2f64.ln();
    let mut lines = Vec::new();
    let mut pass = true;
    for method in [FitMethod::Richardson, FitMethod::Polyfit] {
        let fit = fit_expansion(&fam, 1, &grid, FitOptions { method, ..FitOptions::default() }).unwrap();
        let (s0, s1) = (fit.coefficients[0], fit.coefficients[1]);
        pass &= (s0 - 1.0).abs() <= 1e-8 && (s1 - exact).abs() <= 0.01 * exact;
        lines.push(format!("{method:?} s0 = {s0:.10} s1 = {s1:.6}"));
    }

    let cantor = similitudes(1, &[(1.0 / 3.0, &[0.0]), (1.0 / 3.0, &[2.0 / 3.0])]);
    let constant = PerturbedFamily::constant(cantor, 3);
    let fit = fit_expansion(&constant, 3, &grid, FitOptions::default()).unwrap();
    let higher = fit.coefficients[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    pass &= higher <= 1e-9;
    lines.push(format!("constant family max |s_k| = {higher:.1e}"));

    let r3 = rotation_block::family(rotation_block::DEFAULT_R).unwrap();
    let full = fit_expansion(&r3, 1, &grid, FitOptions::default()).unwrap();
    let halved = fit_expansion(&r3, 1, &dyadic_grid(0.05, 11), FitOptions::default()).unwrap();
    let (a, b) = (full.coefficients[1], halved.coefficients[1]);
    let variation = (a - b).abs() / a.abs();
    let (xs, ys): (Vec<f64>, Vec<f64>) = full
        .rows
        .iter()
        .filter(|r| r.width() > 100.0 * ROOT_TOL)
        .map(|r| (r.eps.ln(), r.width().ln()))
        .unzip();
    let width_slope = fit_line(&xs, &ys).map_or(f64::NAN, |f| f.slope);
    pass &= variation < 0.05 && width_slope >= 1.8;
    lines.push(format!(
        "rotation block s1 = {a:.6} / {b:.6} (variation {:.2}%), width slope {width_slope:.3}",
        100.0 * variation
    ));
    outcome(pass, lines.join("; "))
}

fn countable_truncation() -> Outcome {
    let sys = CountableSystem::tail_only(TailRule::polynomial(2.0));
    let threshold = finiteness_threshold(&sys, 1e-5).unwrap();
    let mut monotone = true;
    for s in [0.3, 0.5, 0.75, 1.0, 2.0] {
        let t = pressure_truncated(&sys, s, &[1, 2, 4, 16, 64, 256, 1024], TruncationOptions::default()).unwrap();
        monotone &= t.values.windows(2).all(|w| w[1].value >= w[0].value);
    }
    outcome(
        (threshold - 0.5).abs() <= 1e-3 && monotone,
        format!("threshold {threshold:.6} (0.5 +/- 1e-3); truncations non-decreasing: {monotone}"),
    )
}

fn norm_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for d in 1..=4 {
        let random = |rng: &mut ChaCha8Rng| loop {
            let m = SquareMatrix::new(d, (0..d * d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            if m.determinant().abs() > 1e-6 {
                return m;
            }
        };
        for _ in 0..1000 {
            let m = random(&mut rng);
            let l = random(&mut rng);
            let mut ml = SquareMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    ml.set(i, j, (0..d).map(|k| m.get(i, k) * l.get(k, j)).sum());
                }
            }
            let lower = m.inf_norm() * l.inf_norm();
            if ml.inf_norm() < lower * (1.0 - 1e-9) {
                failures += 1;
            }
            if (l.inf_norm() * l.inverse().unwrap().op_norm() - 1.0).abs() > 1e-9 {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{failures} failures over 4000 pairs"))
}

fn coding_perturbation() -> Outcome {
    let v = [0.3, -0.4];
    let base = AffineSystem::on_unit_cube(2, vec![AffineMap::similitude(0.5, vec![0.25, 0.25])]).unwrap();
    let fam = PerturbedFamily::new(base, 1, vec![vec![(SquareMatrix::zeros(2), v.to_vec())]]).unwrap();
    // ten extra letters push the truncation of the infinite code below 1e-12
    let len = resolving_length(fam.base()) + 10;
    let words = sample_words(fam.base().graph(), 4, len, 0);
    let grid = dyadic_grid(0.1, 8);
    let rep = coding_perturbation_check(&fam, &grid, &words).unwrap();
    let norm_v = 0.5;
    let worst = rep
        .rows
        .iter()
        .map(|(eps, dev)| (dev - 2.0 * norm_v * eps).abs())
        .fold(0.0, f64::max);

    let r3 = rotation_block::family(rotation_block::DEFAULT_R).unwrap();
    let words = sample_words(r3.base().graph(), 16, resolving_length(r3.base()), 1);
    let slope = coding_perturbation_check(&r3, &dyadic_grid(0.1, 8), &words)
        .unwrap()
        .slope
        .unwrap_or(f64::NAN);
    outcome(
        worst <= 1e-10 && slope >= 0.9,
        format!("translation deviation error {worst:.1e} (<= 1e-10); rotation block slope {slope:.4} (>= 0.9)"),
    )
}

fn determinant_bracket() -> Outcome {
    let sys = diagonal_pair();
    let (lo, hi) = det_bracket(&sys, 2.0, ROOT_TOL).unwrap();
    // P((s/2) log|det|) -/+ (s/2) log K = log 2 - (s/2) log 8 -/+ (s/2) log 2
    let oracle = (2.0 * 2f64.ln() / 16f64.ln(), 2.0 * 2f64.ln() / 4f64.ln());
    let mut pass = (lo - oracle.0).abs() <= 1e-6 && (hi - oracle.1).abs() <= 1e-6;
    let mut worst: f64 = 0.0;
    for sys in [
        similitudes(2, &[(0.5, &[0.0, 0.0]), (0.5, &[0.5, 0.0]), (0.5, &[0.0, 0.5])]),
        similitudes(1, &[(1.0 / 3.0, &[0.0]), (1.0 / 3.0, &[2.0 / 3.0])]),
        similitudes(2, &[(0.3, &[0.0, 0.0]), (0.4, &[0.6, 0.6])]),
    ] {
        let root = bowen_root(sys.graph(), &upper_potential(&sys), ROOT_TOL).unwrap().root;
        let (a, b) = det_bracket(&sys, 1.0, ROOT_TOL).unwrap();
        worst = worst.max((a - root).abs()).max((b - root).abs());
    }
    pass &= worst <= 2.0 * ROOT_TOL;
    outcome(
        pass,
        format!("K = 2: [{lo:.9}, {hi:.9}] vs [0.5, 1.0]; K = 1: distance to root {worst:.1e} (<= 2 tol)"),
    )
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("closed-form K(eps) and its second-order coefficient", closed_form_quasiregularity, Duration::from_secs(1)),
        ("quasiregularity law for the rotation block", quasiregularity_law, Duration::from_secs(5)),
        ("Bowen roots of similarity systems", bowen_exactness, Duration::from_secs(1)),
        ("spectral and cylinder pressure agree", pressure_equivalence, Duration::from_secs(30)),
        ("affine bracket and box counting", affine_bracket, Duration::from_secs(30)),
        ("expansion coefficients", expansion_fit, Duration::from_secs(120)),
        ("countable truncation", countable_truncation, Duration::from_secs(10)),
        ("infimum-norm properties", norm_suite, Duration::from_secs(5)),
        ("coding-map perturbation", coding_perturbation, Duration::from_secs(10)),
        ("determinant bracket", determinant_bracket, Duration::from_secs(1)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < *budget;
        println!(
            "{} {:>2} {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
