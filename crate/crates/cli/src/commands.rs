use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gifs_dim::bowen::{determinant_potential, dim_bounds_affine, lower_potential, upper_potential};
use gifs_dim::oracle::{box_count_dim, chaos_game_par, dyadic_scales};
use gifs_dim::perturb::{
    affine_condition_check, dyadic_grid, fit_expansion, k_order_check, FitMethod, FitOptions, DEFAULT_WIDTH_SHARE,
};
use gifs_dim::pressure::{
    pressure_cylinder_par, pressure_spectral, pressure_truncated, CountableSystem, TruncationOptions,
};
use gifs_dim::rotation_block::{self, closed_form_k, closed_form_k_second_coefficient};
use gifs_dim::specfile::to_spec_string;
use gifs_dim::{load_spec, AffineSystem, Spec};

use crate::report::{num, CliError, Report};
use crate::{Common, Grid, Method, PotentialKind};

const TRUNCATION_LEVELS: [usize; 5] = [16, 64, 256, 1024, 4096];

fn check_common(common: &Common) -> Result<(), CliError> {
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", common.tol)));
    }
    if common.workers == 0 {
        return Err(CliError::Input("--workers must be at least 1".into()));
    }
    Ok(())
}

fn load(common: &Common) -> Result<(String, Spec), CliError> {
    check_common(common)?;
    let path = common
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Input("--spec is required".into()))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((id, load_spec(path)?))
}

fn grid_of(grid: &Grid) -> Result<Vec<f64>, CliError> {
    if !(grid.eps_start > 0.0 && grid.eps_start.is_finite()) || grid.eps_levels == 0 {
        return Err(CliError::Input(format!(
            "bad eps grid: start {} levels {}",
            grid.eps_start, grid.eps_levels
        )));
    }
    Ok(dyadic_grid(grid.eps_start, grid.eps_levels))
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn validate(common: &Common, depth: usize) -> Result<Report, CliError> {
    let (id, spec) = load(common)?;
    let sys = spec.base();
    let v = sys.validate(depth.max(1));
    let mut report = Report::default();
    let rows = report.table("validate", "system,dim,vertices,edges,contraction_ratio,ssc,osc,min_separation");
    rows.push(format!(
        "{id},{},{},{},{},{},{},{}",
        sys.dim(),
        sys.graph().vertex_count(),
        sys.graph().edges().len(),
        num(v.contraction_ratio),
        v.ssc,
        v.osc,
        v.min_separation().map_or_else(String::new, num)
    ));
    report.note(format!("{id}: valid ({} vertices, {} edges)", sys.graph().vertex_count(), sys.graph().edges().len()));
    if let Spec::Family(f) = &spec {
        report.note(format!("perturbed family of order {}", f.order()));
    }
    if let Some(t) = sys.tail() {
        report.note(format!("countable tail at vertex {} from k = {}", sys.graph().vertices()[t.vertex], t.start));
    }
    report.note(format!("strong separation at depth {}: {}", v.depth, flag(v.ssc)));
    for s in v.ssc_offenders() {
        let edges = sys.graph().edges();
        report.note(format!("  images of {} and {} are {} apart", edges[s.first].name, edges[s.second].name, num(s.delta)));
    }
    report.note(format!("open set condition: {}", flag(v.osc)));
    Ok(report)
}

pub fn pressure(common: &Common, potential: PotentialKind, s: f64, cylinder: usize) -> Result<Report, CliError> {
    let (id, spec) = load(common)?;
    if !s.is_finite() {
        return Err(CliError::Input(format!("--s must be finite, got {s}")));
    }
    let sys = spec.base();
    let phi = match potential {
        PotentialKind::Upper => upper_potential(sys),
        PotentialKind::Lower => lower_potential(sys),
        PotentialKind::Det => determinant_potential(sys),
    }
    .scaled(s);
    let g = sys.graph();
    let mut report = Report::default();
    let spectral = pressure_spectral(g, &phi)?;
    let mut rows = vec![format!("{id},spectral,,{}", num(spectral.value))];
    for n in 1..=cylinder {
        let v = pressure_cylinder_par(g, &phi, n, common.workers)?;
        rows.push(format!("{id},cylinder,{n},{}", num(v)));
    }
    let mut notes = vec![format!(
        "P = {} after {} power iterations",
        num(spectral.value),
        spectral.iterations
    )];
    if sys.tail().is_some() {
        if potential == PotentialKind::Upper {
            let countable = CountableSystem::from_system(sys);
            let t = pressure_truncated(&countable, s, &TRUNCATION_LEVELS, TruncationOptions::default())?;
            for v in &t.values {
                rows.push(format!("{id},truncated,{},{}", v.truncation.unwrap_or(0), num(v.value)));
            }
            notes.push(format!(
                "countable system: finite {}, settled {}, upper bound {}",
                flag(t.finite),
                flag(t.settled),
                num(t.upper_bound)
            ));
        } else {
            notes.push("countable tail ignored for this potential; only the finite part is used".into());
        }
    }
    *report.table("pressure", "system,method,n,value") = rows;
    for n in notes {
        report.note(n);
    }
    Ok(report)
}

fn bounds_row(id: &str, sys: &AffineSystem, tol: f64) -> Result<(String, Vec<String>), CliError> {
    let r = dim_bounds_affine(sys, tol)?;
    let row = format!(
        "{id},{},{},{},{},{},{}",
        num(r.lower),
        num(r.upper),
        num(r.det_bracket.0),
        num(r.det_bracket.1),
        num(r.k),
        r.flag_string()
    );
    let mut notes = vec![format!(
        "{id}: {} <= dim <= {} (width {})",
        num(r.lower),
        num(r.upper),
        num(r.width())
    )];
    if r.conformal {
        notes.push("all maps conformal".into());
    }
    if sys.tail().is_some() {
        notes.push("countable tail not included in the bracket".into());
    }
    Ok((row, notes))
}

pub fn dim_bounds(common: &Common) -> Result<Report, CliError> {
    let (id, spec) = load(common)?;
    let (row, notes) = bounds_row(&id, spec.base(), common.tol)?;
    let mut report = Report::default();
    report.table("dim-bounds", "system,s_lower,s_upper,det_lo,det_hi,K,flags").push(row);
    for n in notes {
        report.note(n);
    }
    Ok(report)
}

fn fit_summary(report: &mut Report, fit: &gifs_dim::perturb::ExpansionFit) {
    let method = match fit.method {
        FitMethod::Richardson => "richardson",
        FitMethod::Polyfit => "polyfit",
    };
    report.note(format!("fit: order {} by {method}", fit.order));
    for (i, c) in fit.coefficients.iter().enumerate() {
        report.note(format!("  s_{i} = {}", num(*c)));
    }
    match fit.remainder_slope {
        Some(sl) => report.note(format!("  remainder slope = {}", num(sl))),
        None => report.note("  remainder slope = n/a (residuals at tolerance)"),
    }
}

fn bracket_rows(rows: &[gifs_dim::perturb::BracketRow]) -> Vec<String> {
    rows.iter()
        .map(|r| format!("{},{},{},{}", num(r.eps), num(r.lower), num(r.upper), num(r.k)))
        .collect()
}

pub fn perturb(common: &Common, grid: &Grid, order: Option<usize>, method: Method, t: f64) -> Result<Report, CliError> {
    let (id, spec) = load(common)?;
    let fam = spec.into_family();
    let eps = grid_of(grid)?;
    let n = order.unwrap_or(fam.order());
    let opts = FitOptions {
        method: match method {
            Method::Richardson => FitMethod::Richardson,
            Method::Polyfit => FitMethod::Polyfit,
        },
        tol: common.tol,
        width_share: DEFAULT_WIDTH_SHARE,
        workers: common.workers,
    };
    let fit = fit_expansion(&fam, n, &eps, opts)?;
    let mut report = Report::default();
    let mut rows = bracket_rows(std::slice::from_ref(&fit.base));
    rows.extend(bracket_rows(&fit.rows));
    *report.table("perturb", "eps,s_lower,s_upper,K") = rows;
    report.note(format!("{id}: {} grid points from eps = {}", eps.len(), num(grid.eps_start)));
    fit_summary(&mut report, &fit);
    let verdict = k_order_check(&fam, n, &eps)?;
    match verdict.report.slope {
        Some(sl) => report.note(format!(
            "K(eps) - 1 slope {} (needs > {n}): {}",
            num(sl),
            if verdict.pass { "pass" } else { "fail" }
        )),
        None => report.note(format!(
            "K(eps) = 1 on the grid: {}",
            if verdict.pass { "pass" } else { "fail" }
        )),
    }
    if n > 0 {
        let cond = affine_condition_check(&fam, t, (fit.base.lower, fit.base.upper))?;
        report.note(format!(
            "affine condition at t = {}: p_n = {}, {}",
            num(t),
            num(cond.pn_affine),
            if cond.passed() { "pass" } else { "fail" }
        ));
        for f in &cond.failing {
            report.note(format!("  {f}"));
        }
    }
    Ok(report)
}

pub fn boxcount(
    common: &Common,
    seed: u64,
    points: usize,
    burn_in: usize,
    levels: usize,
    dump: Option<&Path>,
) -> Result<Report, CliError> {
    let (id, spec) = load(common)?;
    let sys = spec.base();
    let cloud = chaos_game_par(sys, points, burn_in, seed, common.workers)?;
    let scales = dyadic_scales(cloud.extent, levels);
    let bc = box_count_dim(&cloud, &scales)?;
    if let Some(path) = dump {
        let mut text = String::new();
        let header: Vec<String> = (1..=cloud.dim).map(|i| format!("x{i}")).chain(["vertex".into()]).collect();
        text.push_str(&header.join(","));
        text.push('\n');
        let names = sys.graph().vertices();
        for (p, &v) in cloud.points.iter().zip(&cloud.labels) {
            for x in p {
                let _ = write!(text, "{},", num(*x));
            }
            text.push_str(&names[v]);
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let mut report = Report::default();
    *report.table("boxcount", "scale,count") = bc
        .scales
        .iter()
        .zip(&bc.counts)
        .map(|(s, c)| format!("{},{c}", num(*s)))
        .collect();
    report.note(format!(
        "{id}: box dimension {} (stderr {}) from {} points, seed {seed}",
        num(bc.slope),
        num(bc.stderr),
        cloud.points.len()
    ));
    if let Some(w) = &bc.warning {
        report.note(format!("warning: {w}"));
    }
    if let Ok(r) = dim_bounds_affine(sys, common.tol) {
        report.note(format!("dimension bracket [{}, {}]", num(r.lower), num(r.upper)));
    }
    Ok(report)
}

pub fn example_r3(common: &Common, grid: &Grid, r: f64, dump: Option<&Path>) -> Result<Report, CliError> {
    check_common(common)?;
    let fam = rotation_block::family(r)?;
    let eps = grid_of(grid)?;
    if let Some(path) = dump {
        fs::write(path, to_spec_string(&fam)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let mut report = Report::default();

    let qr = fam.quasiregularity_report(&eps)?;
    *report.table("quasiregularity", "eps,K_closed_form,K_min") = qr
        .rows
        .iter()
        .map(|(e, k)| format!("{},{},{}", num(*e), num(closed_form_k(*e)), num(*k)))
        .collect();

    let opts = FitOptions {
        tol: common.tol,
        workers: common.workers,
        ..FitOptions::default()
    };
    let fit = fit_expansion(&fam, 1, &eps, opts)?;
    let mut rows = bracket_rows(std::slice::from_ref(&fit.base));
    rows.extend(bracket_rows(&fit.rows));
    *report.table("brackets", "eps,s_lower,s_upper,K") = rows;

    report.note(format!("rotation-block family, r = {}", num(r)));
    report.note(format!("closed-form K(0) = {}", num(closed_form_k(0.0))));
    for h in [1e-2, 5e-3] {
        report.note(format!(
            "second-order coefficient of K, central difference h = {}: {}",
            num(h),
            num(closed_form_k_second_coefficient(h))
        ));
    }
    if let Some(sl) = qr.slope {
        report.note(format!("log-log slope of K_min - 1: {}", num(sl)));
    }
    fit_summary(&mut report, &fit);
    Ok(report)
}
