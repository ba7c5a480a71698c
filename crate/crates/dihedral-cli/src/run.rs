//! One function per subcommand, each a thin wrapper: resolve parameters,
//! call into the library, emit artifacts, print a one-line summary.

use crate::emit::{float, Artifacts};
use crate::{Failure, GalerkinAction, MatchMode};
use dihedral::continuum::{default_initial_guess, g_residual, solve_continuum};
use dihedral::galerkin::{
    newton_solve, secant_continue, she_residual, RadialField, RadialMesh, SheParams,
};
use dihedral::lattice::LatticeConfig;
use dihedral::matching::{closed_form_solutions, enumerate_solutions, MatchSolution};
use dihedral::profile::{initial_guess, synthesize, uniform_angles, ModelParams};
use dihedral::verify::{approximate_inverse, radii_check};
use serde_json::json;
use std::path::Path;

fn solution_record(m: u32, n: usize, s: &MatchSolution) -> serde_json::Value {
    json!({
        "m": m,
        "N": n,
        "a": s.a,
        "residual": s.residual_norm,
        "det": s.nondegeneracy_det,
    })
}

pub fn cmd_match(
    m: u32,
    n: usize,
    mode: MatchMode,
    starts: usize,
    seed: u64,
    tol: f64,
    out: &Path,
) -> Result<(), Failure> {
    let cfg = LatticeConfig::new(m, n)?;
    let (mode_name, records) = match mode {
        MatchMode::ClosedForm => {
            let sols = closed_form_solutions(&cfg)?;
            let recs: Vec<_> = sols.iter().map(|s| solution_record(m, n, s)).collect();
            ("closed-form", recs)
        }
        MatchMode::Enumerate => {
            let sols = enumerate_solutions(&cfg, starts, seed, tol);
            let recs: Vec<_> = sols
                .iter()
                .map(|e| {
                    let mut rec = solution_record(m, n, &e.solution);
                    rec["origin"] = json!(e.origin);
                    rec
                })
                .collect();
            ("enumerate", recs)
        }
    };

    let mut art = Artifacts::new(
        out,
        "match",
        json!({
            "m": m, "N": n, "mode": mode_name,
            "starts": starts, "seed": seed, "tol": tol,
        }),
    )?;
    art.json("solutions.json", &records)?;
    art.finish()?;
    println!(
        "match m={m} N={n} ({mode_name}): {} solution(s)",
        records.len()
    );
    Ok(())
}

pub fn cmd_continuum(mesh: usize, tol: f64, out: &Path) -> Result<(), Failure> {
    let init = default_initial_guess(mesh)?;
    let alpha = solve_continuum(mesh, &init, tol)?;
    let residual_sup = g_residual(&alpha)
        .iter()
        .fold(0.0_f64, |a, r| a.max(r.abs()));

    let mut art = Artifacts::new(out, "continuum solve", json!({ "mesh": mesh, "tol": tol }))?;
    let dt = alpha.dt();
    art.csv(
        "alpha.csv",
        &["t", "alpha"],
        alpha
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| vec![float(k as f64 * dt), float(v)]),
    )?;
    art.json(
        "summary.json",
        &json!({
            "mesh": mesh,
            "alpha0": alpha.eval(0.0),
            "alpha1": alpha.eval(1.0),
            "min_value": alpha.min_value(),
            "max_abs": alpha.max_abs(),
            "residual_sup": residual_sup,
        }),
    )?;
    art.finish()?;
    println!(
        "continuum mesh={mesh}: alpha(0)={:.5}, alpha(1)={:.5}, residual {residual_sup:.2e}",
        alpha.eval(0.0),
        alpha.eval(1.0)
    );
    Ok(())
}

pub fn cmd_verify(omega: f64, mesh: usize, r: f64, tol: f64, out: &Path) -> Result<(), Failure> {
    let init = default_initial_guess(mesh)?;
    let alpha = solve_continuum(mesh, &init, tol)?;
    let a_dagger = approximate_inverse(&alpha)?;
    let cert = radii_check(&alpha, &a_dagger, omega, r)?;

    let mut art = Artifacts::new(
        out,
        "verify radii",
        json!({ "omega": omega, "mesh": mesh, "r": r, "tol": tol }),
    )?;
    art.json("certificate.json", &cert)?;
    art.finish()?;

    if cert.verified {
        println!(
            "verified r={r:e} (bracket [{:e}, {:e}], positive: {})",
            cert.r_lo, cert.r_hi, cert.positive
        );
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "radius {r:e} not certified (injective: {}, bracket [{:e}, {:e}])",
            cert.injective, cert.r_lo, cert.r_hi
        )))
    }
}

/// `H3` → index 2 into the closed-form list.
fn parse_solution_id(id: &str, available: usize) -> Result<usize, Failure> {
    let k: usize = id
        .strip_prefix('H')
        .and_then(|s| s.parse().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| {
            Failure::usage(format!("solution id '{id}' is not of the form H1, H2, …"))
        })?;
    if k > available {
        return Err(Failure::usage(format!(
            "solution {id} requested but only {available} closed-form solution(s) exist"
        )));
    }
    Ok(k - 1)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_profile(
    m: u32,
    n: usize,
    solution: &str,
    gamma: f64,
    mu: f64,
    radius: f64,
    nr: usize,
    ntheta: usize,
    out: &Path,
) -> Result<(), Failure> {
    if nr < 2 || ntheta < 1 {
        return Err(Failure::usage("need at least 2 radial and 1 angular node"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Failure::usage(format!("radius must be positive, got {radius}")));
    }
    let cfg = LatticeConfig::new(m, n)?;
    let sols = closed_form_solutions(&cfg)?;
    let idx = parse_solution_id(solution, sols.len())?;
    let params = ModelParams::swift_hohenberg(gamma, mu)?;

    let r_grid: Vec<f64> = (0..nr)
        .map(|j| j as f64 * radius / (nr - 1) as f64)
        .collect();
    let theta_grid = uniform_angles(ntheta);
    let grid = synthesize(&params, &cfg, &sols[idx].a, &r_grid, &theta_grid)?;

    let mut art = Artifacts::new(
        out,
        "profile synth",
        json!({
            "m": m, "N": n, "solution": solution,
            "gamma": gamma, "mu": mu,
            "radius": radius, "nr": nr, "ntheta": ntheta,
        }),
    )?;
    art.json("solution.json", &solution_record(m, n, &sols[idx]))?;
    art.csv(
        "grid.csv",
        &["r", "theta", "u"],
        grid.r.iter().enumerate().flat_map(|(i, &r)| {
            let row = &grid.u[i];
            grid.theta
                .iter()
                .zip(row)
                .map(|(&th, &u)| vec![float(r), float(th), float(u)])
                .collect::<Vec<_>>()
        }),
    )?;
    art.heatmap("pattern.png", &grid, 480)?;
    art.finish()?;
    println!(
        "profile m={m} N={n} {solution}: {}x{} grid on radius {radius}",
        nr, ntheta
    );
    Ok(())
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalerkinConfig {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub r_star: f64,
    #[serde(rename = "T")]
    pub t: usize,
    pub mu0: f64,
    pub gamma: f64,
    #[serde(default = "default_solution_id")]
    pub solution_id: String,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_step_size")]
    pub step_size: f64,
}

fn default_solution_id() -> String {
    "H1".into()
}
fn default_steps() -> usize {
    200
}
fn default_step_size() -> f64 {
    0.01
}

fn load_config(path: &Path) -> Result<GalerkinConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// The single-ring closed-form amplitudes for this `m`, zero-padded to the
/// Galerkin truncation. Seeding every run from the `N = 1` ring follows the
/// observation that higher modes fill in during the Newton solve.
fn guess_amplitudes(cfg: &LatticeConfig, solution_id: &str) -> Result<Vec<f64>, Failure> {
    let ring = LatticeConfig::new(cfg.m(), 1)?;
    let sols = closed_form_solutions(&ring)?;
    if sols.is_empty() {
        return Err(Failure::usage(format!(
            "no closed-form ring solution exists for m = {}",
            cfg.m()
        )));
    }
    let idx = parse_solution_id(solution_id, sols.len())?;
    let mut a = vec![0.0; cfg.modes()];
    a[..2].copy_from_slice(&sols[idx].a);
    Ok(a)
}

fn field_csv(art: &mut Artifacts, name: &str, mesh: &RadialMesh, field: &RadialField) -> Result<(), Failure> {
    let mut header = vec!["r".to_string()];
    header.extend((0..field.modes()).map(|n| format!("v_{n}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    art.csv(
        name,
        &header_refs,
        (0..mesh.len()).map(|j| {
            let mut row = vec![float(mesh.node(j))];
            row.extend((0..field.modes()).map(|n| float(field.row(n)[j])));
            row
        }),
    )
}

const NEWTON_TOL: f64 = 1e-9;
const NEWTON_ITERS: usize = 60;

pub fn cmd_galerkin(action: GalerkinAction, config: &Path, out: &Path) -> Result<(), Failure> {
    let cf = load_config(config)?;
    let mesh = RadialMesh::new(cf.r_star, cf.t)?;
    let cfg = LatticeConfig::new(cf.m, cf.n)?;
    let params = SheParams { mu: cf.mu0, gamma: cf.gamma };
    let model = ModelParams::swift_hohenberg(cf.gamma, cf.mu0)?;
    let a = guess_amplitudes(&cfg, &cf.solution_id)?;

    // one and a half times the uniform-state scale lands in the localised
    // basin; the equilibrium scale itself slides back to zero
    let beta = 3.0 * (3.0 * cf.mu0).sqrt() / cf.gamma;
    let seed = initial_guess(&model, &cfg, &a, &mesh, beta)?;
    let start = newton_solve(&mesh, &cfg, &params, &seed, NEWTON_TOL, NEWTON_ITERS)?;
    let residual_sup = she_residual(&mesh, &cfg, &params, &start)?.max_abs();

    let action_name = match action {
        GalerkinAction::Solve => "solve",
        GalerkinAction::Continue => "continue",
    };
    let mut art = Artifacts::new(
        out,
        &format!("galerkin {action_name}"),
        json!({
            "config": config.display().to_string(),
            "m": cf.m, "N": cf.n, "r_star": cf.r_star, "T": cf.t,
            "mu0": cf.mu0, "gamma": cf.gamma,
            "solution_id": cf.solution_id,
            "steps": cf.steps, "step_size": cf.step_size,
            "beta": beta,
            "newton_tol": NEWTON_TOL,
        }),
    )?;

    match action {
        GalerkinAction::Solve => {
            field_csv(&mut art, "field.csv", &mesh, &start)?;
            art.json(
                "summary.json",
                &json!({
                    "mu": cf.mu0,
                    "gamma": cf.gamma,
                    "residual_sup": residual_sup,
                    "max_abs": start.max_abs(),
                    "l2_norm": start.l2_norm(mesh.spacing()),
                }),
            )?;
            art.finish()?;
            println!(
                "galerkin solve m={} N={}: residual {residual_sup:.2e}, max |v| = {:.4}",
                cf.m,
                cf.n,
                start.max_abs()
            );
        }
        GalerkinAction::Continue => {
            let branch = secant_continue(
                &mesh, &cfg, &params, &start, None, cf.steps, cf.step_size,
            )?;
            art.csv(
                "branch.csv",
                &["step", "mu", "norm"],
                branch
                    .points
                    .iter()
                    .map(|p| vec![p.step.to_string(), float(p.mu), float(p.norm)]),
            )?;
            field_csv(&mut art, "final_field.csv", &mesh, &branch.final_field)?;
            art.json(
                "summary.json",
                &json!({
                    "points": branch.points.len(),
                    "fold_count": branch.fold_count(),
                    "final_mu": branch.final_mu,
                    "start_residual_sup": residual_sup,
                }),
            )?;
            art.finish()?;
            println!(
                "galerkin continue m={} N={}: {} point(s), {} fold(s), final mu = {:.5}",
                cf.m,
                cf.n,
                branch.points.len(),
                branch.fold_count(),
                branch.final_mu
            );
        }
    }
    Ok(())
}
