use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use frontspeed::acceptance;
use frontspeed::pdesim::{self, InitialData, Outcome, SimConfig};
use frontspeed::phaseplane::{optimal_g, standard_speed, stefan_speed_with_reference, ShootOptions};
use frontspeed::reactions::{custom_from_config, make_builtin, ReactionConfig, ReactionTerm};
use frontspeed::varbound::{
    bound_value, catalog, fisher_bound_hyper, fisher_bound_simple, fisher_simple_literal, optimize_bound,
    sensitivity_kappa, sensitivity_m, zfk_bound, BoundResult, TrialFamily, TrialFunction,
};

use crate::grid::parse_grid;
use crate::table::{fmt_num, Cell, Table};
use crate::{KappaArgs, OutputArgs, ReactionArgs};

/// λ of the simple Fisher trial 1 − λq when no --theta is given.
const DEFAULT_SIMPLE_LAMBDA: f64 = 0.22;
const COMPARE_GRID: &str = "0.05:50:40:log";

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("parameter `{item}` must look like key=value"))?;
        let v: f64 = v
            .trim()
            .parse()
            .with_context(|| format!("bad value in `{item}`"))?;
        params.insert(k.trim().to_string(), v);
    }
    Ok(params)
}

fn reaction(args: &ReactionArgs) -> Result<ReactionTerm> {
    match (&args.reaction, &args.config) {
        (Some(name), None) => Ok(make_builtin(name, &parse_params(&args.params)?)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(custom_from_config(&ReactionConfig::from_json(&text)?)?)
        }
        _ => bail!("exactly one of --reaction or --config is required"),
    }
}

fn kappas(args: &KappaArgs) -> Result<Vec<f64>> {
    match (&args.kappa, &args.kappa_grid) {
        (Some(k), None) => {
            if !(*k > 0.0) {
                bail!("kappa = {k} must be positive");
            }
            Ok(vec![*k])
        }
        (None, Some(g)) => parse_grid(g, "log"),
        _ => bail!("one of --kappa or --kappa-grid is required"),
    }
}

/// Maps `f` over `items` on a pool of `jobs` workers, keeping input order.
fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| items.par_iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .collect()
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(&mut w, output.format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&mut w, output.format)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn speed(
    args: &ReactionArgs,
    kappa: &KappaArgs,
    tol: f64,
    profile: Option<&Path>,
    output: &OutputArgs,
) -> Result<()> {
    let f = reaction(args)?;
    let grid = kappas(kappa)?;
    if profile.is_some() && grid.len() != 1 {
        bail!("--profile needs a single --kappa");
    }
    let opts = ShootOptions::default();
    let c_rd = standard_speed(&f, &opts).context("speed: kappa = inf reference")?;
    let results = par_map(output.jobs, &grid, |&k| {
        stefan_speed_with_reference(&f, k, tol, c_rd, &opts).with_context(|| format!("speed at kappa = {k}"))
    })?;

    let mut table = Table::new(vec![
        "kappa",
        "c_star",
        "bracket_lo",
        "bracket_hi",
        "residual",
        "c_rd",
    ]);
    for r in &results {
        table.push(vec![
            r.kappa.into(),
            r.c_star.into(),
            r.bracket.0.into(),
            r.bracket.1.into(),
            r.residual.into(),
            r.c_rd_reference.into(),
        ]);
    }
    if let Some(path) = profile {
        write_file(path, |w| results[0].profile.write_csv(w))?;
    }
    emit(&table, output)
}

fn is_fisher(f: &ReactionTerm) -> bool {
    f.name() == "fisher"
}

fn bound_results(
    f: &ReactionTerm,
    kappa: f64,
    trial: &str,
    theta: &[f64],
    optimize: bool,
    tol: f64,
) -> Result<Vec<BoundResult>> {
    if optimize {
        let family = TrialFamily::from_str(trial).map_err(|_| {
            anyhow!("--optimize needs a family: linear, exp, rational, power_pair, power_general")
        })?;
        return Ok(vec![optimize_bound(f, kappa, family, None)?]);
    }
    let single = |g: TrialFunction| -> Result<Vec<BoundResult>> { Ok(vec![bound_value(f, kappa, &g)?]) };
    match trial {
        "catalog" => catalog(kappa)
            .iter()
            .map(|g| bound_value(f, kappa, g).with_context(|| format!("trial {}", g.id())))
            .collect(),
        "zfk" => single(TrialFunction::zfk(kappa)?),
        "g2" => single(TrialFunction::g2(kappa)?),
        "optimal" => {
            let c_rd = standard_speed(f, &ShootOptions::default())?;
            let s = stefan_speed_with_reference(f, kappa, tol, c_rd, &ShootOptions::default())?;
            let mut r = bound_value(f, kappa, &optimal_g(&s.profile)?)?;
            r.diagnostics.insert("c_star".into(), s.c_star);
            Ok(vec![r])
        }
        "zfk-bound" => Ok(vec![zfk_bound(f, kappa)?]),
        "fisher-simple" | "fisher-hyper" => {
            if !is_fisher(f) {
                bail!("trial `{trial}` is specific to --reaction fisher");
            }
            if trial == "fisher-simple" {
                let lambda = match theta {
                    [] => DEFAULT_SIMPLE_LAMBDA,
                    [l] => *l,
                    _ => bail!("fisher-simple takes one parameter"),
                };
                Ok(vec![fisher_bound_simple(kappa, lambda)?])
            } else {
                Ok(vec![fisher_bound_hyper(kappa)?])
            }
        }
        name => {
            let family = TrialFamily::from_str(name).map_err(|_| anyhow!("unknown trial `{name}`"))?;
            if theta.is_empty() {
                bail!("trial `{name}` needs --theta (or --optimize)");
            }
            single(family.build(theta, kappa)?)
        }
    }
}

fn joined(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(";")
}

pub fn bound(
    args: &ReactionArgs,
    kappa: &KappaArgs,
    trial: &str,
    theta: &[f64],
    optimize: bool,
    tol: f64,
    output: &OutputArgs,
) -> Result<()> {
    let f = reaction(args)?;
    let grid = kappas(kappa)?;
    let results = par_map(output.jobs, &grid, |&k| {
        bound_results(&f, k, trial, theta, optimize, tol).with_context(|| format!("bound at kappa = {k}"))
    })?;
    let mut table = Table::new(vec![
        "kappa",
        "trial",
        "theta",
        "numerator",
        "denominator",
        "c_lower",
        "diagnostics",
        "warnings",
    ]);
    for r in results.iter().flatten() {
        for w in &r.warnings {
            eprintln!("warning: kappa = {}: {}: {w}", r.kappa, r.trial_id);
        }
        table.push(vec![
            r.kappa.into(),
            r.trial_id.clone().into(),
            joined(r.theta.iter().map(|&t| fmt_num(t))).into(),
            r.numerator.into(),
            r.denominator.into(),
            r.c_lower.into(),
            joined(r.diagnostics.iter().map(|(k, &v)| format!("{k}={}", fmt_num(v)))).into(),
            r.warnings.join(";").into(),
        ]);
    }
    emit(&table, output)
}

pub fn sweep(
    args: &ReactionArgs,
    kappa: &KappaArgs,
    m_grid: Option<&str>,
    sensitivities: bool,
    tol: f64,
    output: &OutputArgs,
) -> Result<()> {
    let grid = kappas(kappa)?;
    // One reaction per m (a single one without an m grid).
    let terms: Vec<(Option<f64>, ReactionTerm)> = match m_grid {
        Some(text) => {
            if args.config.is_some() || args.reaction.as_deref().is_some_and(|r| r != "mkpp") {
                bail!("--m-grid sweeps the mkpp family only");
            }
            if !args.params.is_empty() {
                bail!("--m-grid sets m; drop --params");
            }
            parse_grid(text, "lin")?
                .into_iter()
                .map(|m| Ok((Some(m), ReactionTerm::mkpp(m)?)))
                .collect::<Result<_>>()?
        }
        None => vec![(None, reaction(args)?)],
    };
    let opts = ShootOptions::default();
    let references = par_map(output.jobs, &terms, |(m, f)| {
        standard_speed(f, &opts).with_context(|| match m {
            Some(m) => format!("sweep: kappa = inf reference at m = {m}"),
            None => "sweep: kappa = inf reference".to_string(),
        })
    })?;
    let cases: Vec<(usize, f64)> = (0..terms.len())
        .flat_map(|i| grid.iter().map(move |&k| (i, k)))
        .collect();
    let rows = par_map(output.jobs, &cases, |&(i, k)| {
        let (m, f) = &terms[i];
        let context = || match m {
            Some(m) => format!("sweep at m = {m}, kappa = {k}"),
            None => format!("sweep at kappa = {k}"),
        };
        let s = stefan_speed_with_reference(f, k, tol, references[i], &opts).with_context(context)?;
        let zfk = match zfk_bound(f, k) {
            Ok(z) => z.c_lower,
            Err(_) => f64::NAN,
        };
        let mut row: Vec<Cell> = Vec::new();
        if let Some(m) = m {
            row.push((*m).into());
        }
        row.extend([k.into(), s.c_star.into(), s.c_rd_reference.into(), zfk.into()]);
        if sensitivities {
            row.push(sensitivity_kappa(f, k).with_context(context)?.into());
            if let Some(m) = m {
                row.push(sensitivity_m(k, *m).with_context(context)?.into());
            }
        }
        Ok(row)
    })?;

    let mut header = Vec::new();
    if m_grid.is_some() {
        header.push("m");
    }
    header.extend(["kappa", "c_star", "c_rd", "c_zfk_lower"]);
    if sensitivities {
        header.push("dc2_dkappa");
        if m_grid.is_some() {
            header.push("dc2_dm");
        }
    }
    let mut table = Table::new(header);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, output)
}

#[derive(Debug, Clone, Copy)]
pub struct SimArgs {
    pub kappa: f64,
    pub l0: f64,
    pub amplitude: f64,
    pub n_xi: usize,
    pub t_end: f64,
    pub dt: Option<f64>,
    pub record_interval: f64,
    pub window: f64,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn simulate(args: &ReactionArgs, sim: SimArgs, prefix: &Path, output: &OutputArgs) -> Result<()> {
    let f = reaction(args)?;
    let mut cfg = SimConfig::new(
        f,
        sim.kappa,
        sim.l0,
        InitialData::Cosine {
            amplitude: sim.amplitude,
        },
        sim.t_end,
    )
    .with_nodes(sim.n_xi)
    .with_record_interval(sim.record_interval);
    cfg.dt = sim.dt;
    let traj = pdesim::simulate(&cfg).context("simulate")?;
    write_file(&with_suffix(prefix, "_trajectory.csv"), |w| traj.write_csv(w))?;
    write_file(&with_suffix(prefix, "_profile.csv"), |w| {
        traj.write_profile_csv(w)
    })?;
    let (speed, slope) = if traj.outcome == Outcome::Spreading {
        let est = pdesim::measure_speed(&traj, sim.window).context("simulate: speed")?;
        (est.speed, est.fit_slope)
    } else {
        (f64::NAN, f64::NAN)
    };
    let mut table = Table::new(vec![
        "kappa",
        "l0",
        "n_xi",
        "dt",
        "t_end",
        "final_length",
        "max_u",
        "outcome",
        "speed",
        "fit_slope",
    ]);
    table.push(vec![
        sim.kappa.into(),
        sim.l0.into(),
        (sim.n_xi as f64).into(),
        traj.dt.into(),
        (*traj.times.last().unwrap()).into(),
        traj.final_length().into(),
        (*traj.max_u_series.last().unwrap()).into(),
        traj.outcome.to_string().into(),
        speed.into(),
        slope.into(),
    ]);
    emit(&table, output)
}

fn gnuplot_script(data: &Path) -> String {
    let name = data.display();
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead left top\n\
         set logscale x\n\
         set xlabel 'kappa'\n\
         set ylabel 'c'\n\
         plot '{name}' using 1:2 with lines lw 2, \\\n\
         \x20    '' using 1:3 with lines, \\\n\
         \x20    '' using 1:4 with lines dashtype 2, \\\n\
         \x20    '' using 1:5 with lines, \\\n\
         \x20    '' using 1:6 with lines\n\
         pause mouse close\n"
    )
}

pub fn compare(script: Option<&Path>, output: &OutputArgs) -> Result<()> {
    let f = ReactionTerm::fisher();
    let grid = parse_grid(COMPARE_GRID, "log")?;
    let opts = ShootOptions::default();
    let c_rd = standard_speed(&f, &opts).context("compare: kappa = inf reference")?;
    let rows = par_map(output.jobs, &grid, |&k| -> Result<[f64; 6]> {
        let context = || format!("compare at kappa = {k}");
        let shoot =
            stefan_speed_with_reference(&f, k, frontspeed::phaseplane::DEFAULT_SPEED_TOL, c_rd, &opts)
                .with_context(context)?;
        let simple = fisher_bound_simple(k, DEFAULT_SIMPLE_LAMBDA).with_context(context)?;
        let hyper = fisher_bound_hyper(k).with_context(context)?;
        let zfk = zfk_bound(&f, k).with_context(context)?;
        Ok([
            k,
            shoot.c_star,
            simple.c_lower,
            fisher_simple_literal(k),
            hyper.c_lower,
            zfk.c_lower,
        ])
    })?;
    let mut table = Table::new(vec![
        "kappa",
        "c_shoot",
        "c_bound_simple_direct",
        "c_bound_simple_paper",
        "c_bound_hyper",
        "c_zfk",
    ]);
    for r in &rows {
        table.push(r.iter().map(|&v| v.into()).collect());
    }
    emit(&table, output)?;
    if let (Some(path), Some(data)) = (script, &output.out) {
        fs::write(path, gnuplot_script(data)).with_context(|| format!("writing {}", path.display()))?;
    }

    if let Some(r) = rows.iter().find(|r| r[4] > r[1]) {
        bail!(
            "compare: hypergeometric bound {} exceeds the speed {} at kappa = {}",
            r[4],
            r[1],
            r[0]
        );
    }
    for (col, name) in [(1, "c_shoot"), (4, "c_bound_hyper")] {
        if let Some(w) = rows.windows(2).find(|w| !(w[1][col] > w[0][col])) {
            bail!(
                "compare: {name} is not increasing between kappa = {} and {}",
                w[0][0],
                w[1][0]
            );
        }
    }
    Ok(())
}

pub fn selftest(only: &[u32]) -> Result<()> {
    let known: Vec<u32> = acceptance::criteria().iter().map(|c| c.0).collect();
    if let Some(id) = only.iter().find(|id| !known.contains(id)) {
        bail!("unknown criterion {id}; known: {known:?}");
    }
    let reports: Vec<_> = if only.is_empty() {
        acceptance::run_all()
    } else {
        only.iter().filter_map(|&id| acceptance::run(id)).collect()
    };
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed > 0 {
        bail!("{failed} acceptance criteria failed");
    }
    Ok(())
}
