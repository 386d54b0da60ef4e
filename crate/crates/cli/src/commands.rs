use rayon::prelude::*;

use minmax_core::bilinear::{theorem1_equivalence_report, BilinearParams};
use minmax_core::gan::{asymptotic_eps_g, learning_curve, solve_wgan, GanParams, Init, RatioConvention, SolverConfig, WganSolution};
use minmax_core::simulator::{replica_vs_simulation, run_seed, CompareConfig, GdaConfig};
use minmax_core::two_temperature::{limit_order_diagnostic, DiscreteGame, TemperaturePair};

use crate::config::{Command, RunConfig};
use crate::output::{emit_csv, Cell, Table};
use crate::{CliError, Status};

/// Runs the configured subcommand on a pool of `config.jobs` workers and
/// writes its CSV.
pub fn run(config: &RunConfig) -> Result<Status, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("jobs: {e}")))?;
    let (table, status) = pool.install(|| dispatch(config))?;
    emit_csv(&table, &metadata(config), config.output.as_deref())?;
    Ok(status)
}

/// Version, command, seed and every resolved key. The worker count and the
/// destination are left out so the output depends only on the computation.
fn metadata(config: &RunConfig) -> Vec<(String, String)> {
    let mut m = vec![
        ("minmax".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("command".to_string(), config.command.name().to_string()),
        ("seed".to_string(), config.master_seed.to_string()),
    ];
    m.extend(config.raw.iter().map(|(k, v)| (k.clone(), v.clone())));
    m
}

fn dispatch(config: &RunConfig) -> Result<(Table, Status), CliError> {
    match config.command {
        Command::TwoTemp => two_temp(config),
        Command::Bilinear => bilinear(config),
        Command::WganPoint => wgan_point(config),
        Command::WganCurve => wgan_curve(config),
        Command::Asymptotic => asymptotic(config),
        Command::Simulate => simulate(config),
        Command::Compare => compare(config),
    }
}

fn status_of(all_ok: bool) -> Status {
    if all_ok {
        Status::Success
    } else {
        Status::PartialFailure
    }
}

fn two_temp(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let game = match c.text("game") {
        "pennies" => DiscreteGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]])?,
        "saddle" => DiscreteGame::new(vec![vec![1.0, 2.0], vec![0.0, 3.0]])?,
        path => DiscreteGame::from_csv_path(path)?,
    }
    .with_norm_dim(c.float("norm-dim"))?;
    let rows = limit_order_diagnostic(&game, c.floats("betas"), c.float("ratio"))?;
    let mut t = Table::new(vec!["beta_min", "beta_max", "value", "minmax", "delta_minmax", "swapped", "maxmin", "delta_maxmin"]);
    for r in rows {
        t.push(vec![
            r.beta_min.into(),
            r.beta_max.into(),
            r.value.into(),
            r.minmax.into(),
            r.delta_minmax().into(),
            r.swapped.into(),
            r.maxmin.into(),
            r.delta_maxmin().into(),
        ]);
    }
    Ok((t, Status::Success))
}

fn bilinear(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let params = BilinearParams {
        w_xx: c.float("w-xx"),
        w_yy: c.float("w-yy"),
        w_xy: c.float("w-xy"),
        b_x: c.float("b-x"),
        b_y: c.float("b-y"),
        kappa: c.float("kappa"),
    };
    let temps = TemperaturePair::new(c.float("beta-min"), c.float("beta-max"))?;
    let rows = theorem1_equivalence_report(&params, c.counts("d-list"), &temps)?;
    let mut t = Table::new(vec!["d_x", "d_y", "exact", "saddle", "gap"]);
    for r in rows {
        t.push(vec![r.d_x.into(), r.d_y.into(), r.exact.into(), r.saddle.into(), r.gap.into()]);
    }
    Ok((t, Status::Success))
}

fn gan_params(c: &RunConfig, alpha: f64, r: f64) -> GanParams<f64> {
    GanParams {
        eta: c.float("eta"),
        eta_tilde: c.float("eta-tilde"),
        lambda: c.float("lambda"),
        lambda_tilde: c.float("lambda-tilde"),
        convention: match c.text("convention") {
            "direct" => RatioConvention::Direct,
            _ => RatioConvention::Doubled,
        },
        ..GanParams::unit(alpha, r)
    }
}

fn solver(c: &RunConfig) -> SolverConfig<f64> {
    SolverConfig { tol: c.opt_float("tol").unwrap_or(1e-10), ..SolverConfig::default() }
}

const SOLUTION_COLUMNS: [&str; 14] = [
    "converged", "branch", "eps_g", "q", "chi", "m", "b", "q_hat", "chi_hat", "m_hat", "b_hat", "free_energy", "residual",
    "iterations",
];

/// Solution fields; blank apart from the diagnostics when not converged.
fn solution_cells(s: &WganSolution<f64>) -> Vec<Cell> {
    let f = |v: f64| if s.converged { Cell::Float(v) } else { Cell::Empty };
    vec![
        s.converged.into(),
        if s.converged { s.branch.as_str().into() } else { Cell::Empty },
        f(s.eps_g),
        f(s.order.q),
        f(s.order.chi),
        f(s.order.m),
        f(s.order.b),
        f(s.conj.q_hat),
        f(s.conj.chi_hat),
        f(s.conj.m_hat),
        f(s.conj.b_hat),
        f(s.free_energy),
        s.residual.into(),
        s.iterations.into(),
    ]
}

fn wgan_point(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let (alpha, r) = (c.float("alpha"), c.float("r"));
    let params = gan_params(c, alpha, r);
    let init = match c.text("init") {
        "informative" => Init::Informative,
        "trivial" => Init::Trivial,
        _ => Init::Auto,
    };
    let s = solve_wgan(&params, &solver(c), init)?;
    let mut cols = vec!["alpha", "r"];
    cols.extend(SOLUTION_COLUMNS);
    let mut t = Table::new(cols);
    let mut row = vec![alpha.into(), r.into()];
    row.extend(solution_cells(&s));
    t.push(row);
    Ok((t, status_of(s.converged)))
}

fn wgan_curve(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let mut ratios = c.floats("r").to_vec();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();
    let alphas = c.floats("alpha-grid");
    let cfg = solver(c);
    let curves = ratios
        .par_iter()
        .map(|&r| learning_curve(&gan_params(c, alphas.first().copied().unwrap_or(1.0), r), alphas, r, &cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let mut cols = vec!["r", "alpha"];
    cols.extend(SOLUTION_COLUMNS);
    cols.push("branch_switch");
    let mut t = Table::new(cols);
    let mut all_ok = true;
    for row in curves.into_iter().flatten() {
        all_ok &= row.solution.converged;
        let mut cells = vec![row.r.into(), row.alpha.into()];
        cells.extend(solution_cells(&row.solution));
        cells.push(row.branch_switch.into());
        t.push(cells);
    }
    Ok((t, status_of(all_ok)))
}

fn asymptotic(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let alpha = c.float("alpha");
    let mut t = Table::new(vec!["r", "alpha", "plateau", "two_term", "correction", "singular"]);
    for &r in c.floats("r-grid") {
        let a = asymptotic_eps_g(r, alpha)?;
        t.push(vec![r.into(), alpha.into(), a.plateau.into(), a.two_term.into(), a.correction().into(), a.singular.into()]);
    }
    Ok((t, Status::Success))
}

fn gda_config(c: &RunConfig) -> GdaConfig {
    let lr = c.opt_float("lr").unwrap_or(1e-2 / c.float("alpha").max(1.0));
    GdaConfig {
        lr_w: lr,
        lr_v: lr,
        grad_tol: c.float("grad-tol"),
        max_steps: c.count("max-steps"),
        seed: 0,
    }
}

fn simulate(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let params = gan_params(c, c.float("alpha"), c.float("r"));
    params.validate()?;
    let d = c.count("d");
    let gda = gda_config(c);
    let runs = (0..c.count("seeds"))
        .into_par_iter()
        .map(|i| run_seed(&params, d, c.master_seed, i, &gda))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(vec![
        "index", "seed", "stationary", "steps", "eps_g", "eps_g_aligned", "m", "b", "q", "diagnostic",
    ]);
    let mut all_ok = true;
    for run in runs {
        all_ok &= run.stationary;
        let o = run.observables;
        t.push(vec![
            run.index.into(),
            run.seed.into(),
            run.stationary.into(),
            run.steps.into(),
            o.eps_g.into(),
            o.eps_g_aligned.into(),
            o.m.into(),
            o.b.into(),
            o.q.into(),
            run.diagnostic.as_deref().map_or(Cell::Empty, Cell::from),
        ]);
    }
    Ok((t, status_of(all_ok)))
}

fn compare(c: &RunConfig) -> Result<(Table, Status), CliError> {
    let params = gan_params(c, c.float("alpha"), c.float("r"));
    let cfg = CompareConfig { gda: gda_config(c), master_seed: c.master_seed, solver: solver(c), ..CompareConfig::default() };
    let rep = replica_vs_simulation(&params, c.count("d"), c.count("seeds"), &cfg)?;
    let s = rep.stats;
    let replica = if rep.replica.converged {
        [rep.replica.eps_g, rep.replica.order.m.abs(), rep.replica.order.b.abs(), rep.replica.order.q]
    } else {
        [f64::NAN; 4]
    };
    let emp = [(s.eps_g_mean, s.eps_g_se), (s.m_emp, s.m_se), (s.b_emp, s.b_se), (s.q_emp, s.q_se)];
    let mut t = Table::new(vec![
        "quantity", "empirical", "se", "replica", "delta", "within", "n_seeds", "n_stationary", "inconclusive",
    ]);
    for (k, name) in ["eps_g", "m", "b", "q"].into_iter().enumerate() {
        t.push(vec![
            name.into(),
            emp[k].0.into(),
            emp[k].1.into(),
            replica[k].into(),
            rep.deltas[k].into(),
            (rep.within[k] && rep.replica.converged).into(),
            s.n_seeds.into(),
            s.n_stationary.into(),
            rep.inconclusive.into(),
        ]);
    }
    Ok((t, status_of(rep.replica.converged && s.n_stationary == s.n_seeds)))
}
