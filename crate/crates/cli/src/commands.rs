use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fracou::diagnostics::{self, ConvergenceReport, Verdict};
use fracou::kernels::{EmpiricalKernel, MeanKernel};
use fracou::mixing::{check_condition, moment_frac, sample_alphas, GammaMixing};
use fracou::simulator::{
    sidecar_path, simulate_component_paths, simulate_exact_gaussian, simulate_kernel_paths, simulate_limit_paths,
    simulate_stationary_paths, simulate_xi_paths, write_ensemble, PathEnsemble, ProcessKind, StationaryOptions,
    TimeGrid,
};
use fracou::special::{g_rho_quadrature, g_rho_series, ml_one, ml_two, EvalResult, FractionalOrder, Method};
use fracou::{Error, Real, Result};
use serde::Serialize;

use crate::args::{Check, Command, DiagnoseArgs, EvalArgs, Function, MixingAction, MixingArgs, Process, ReportFormat,
    SimulateArgs};

/// Exit code of a finished command.
pub type Code = i32;

pub fn run(cmd: Command) -> Result<Code> {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Mixing(a) => mixing(a),
        Command::Simulate(a) => simulate(a),
        Command::Diagnose(a) => diagnose(a.resolved()),
    }
}

#[derive(Serialize)]
struct DataSidecar<'a> {
    data: String,
    config: &'a Command,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_table(out: &Path, header: &[&str], rows: &[Vec<String>], config: &Command) -> Result<()> {
    let mut w = BufWriter::new(File::create(out)?);
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        writeln!(w, "{}", r.join(","))?;
    }
    w.flush()?;
    write_json(&sidecar_path(out), &DataSidecar { data: file_name(out), config })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Series => "series",
        Method::Asymptotic => "asymptotic",
        Method::ClosedForm => "closed_form",
        Method::Quadrature => "quadrature",
    }
}

/// `G_rho(-x)`: the mixture series where it certifies, quadrature otherwise.
fn g_rho(rho: FractionalOrder<f64>, mu: f64, x: f64) -> Result<EvalResult<f64>> {
    if rho.value() > 1.0 {
        if let Ok(s) = g_rho_series(rho.value(), mu, -x) {
            if s.est_abs_error <= f64::eval_target() {
                return Ok(s);
            }
        }
    }
    g_rho_quadrature(rho, mu, 1.0, x.powf(1.0 / rho.value()))
}

fn eval(a: EvalArgs) -> Result<Code> {
    let rho = FractionalOrder::new(a.rho)?;
    if !(a.xmax >= a.xmin && a.xmin >= 0.0 && a.points >= 2) {
        return Err(Error::Domain("need 0 <= xmin <= xmax and at least 2 points".into()));
    }
    if a.function == Function::Gml && !(a.mu > 0.0) {
        return Err(Error::Domain(format!("shape mu must be positive, got {}", a.mu)));
    }
    let rows = (0..a.points)
        .map(|i| {
            let x = a.xmin + (a.xmax - a.xmin) * i as f64 / (a.points - 1) as f64;
            let r = match a.function {
                Function::Ml => ml_one(rho, x)?,
                Function::Ml2 => ml_two(rho, x)?,
                Function::Gml => g_rho(rho, a.mu, x)?,
            };
            Ok(vec![
                x.to_string(),
                r.value.to_string(),
                r.est_abs_error.to_string(),
                method_name(r.method).to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(&a.out, &["x", "value", "est_abs_error", "method"], &rows, &Command::Eval(a.clone()))?;
    Ok(0)
}

fn mixing(a: MixingArgs) -> Result<Code> {
    let g = GammaMixing::new(a.mu, a.lambda)?;
    let config = Command::Mixing(a.clone());
    match a.action {
        MixingAction::Sample => {
            let seed = a.seed.ok_or_else(|| Error::Domain("`mixing sample` needs --seed".into()))?;
            let rows: Vec<Vec<String>> = sample_alphas(&g, a.n, seed)
                .into_iter()
                .enumerate()
                .map(|(k, x)| vec![k.to_string(), x.to_string()])
                .collect();
            write_table(&a.out, &["k", "alpha"], &rows, &config)?;
        }
        MixingAction::Moments => {
            let rows = a
                .p
                .iter()
                .map(|&p| Ok(vec![p.to_string(), moment_frac(&g, p)?.to_string()]))
                .collect::<Result<Vec<_>>>()?;
            write_table(&a.out, &["p", "moment"], &rows, &config)?;
        }
        MixingAction::Condition => {
            let rho = FractionalOrder::new(a.rho)?;
            let ok = check_condition(&g, rho);
            let rows = vec![vec![a.mu.to_string(), a.rho.to_string(), (0.5 / a.rho).to_string(), ok.to_string()]];
            write_table(&a.out, &["mu", "rho", "threshold", "holds"], &rows, &config)?;
        }
    }
    Ok(0)
}

fn simulate(a: SimulateArgs) -> Result<Code> {
    let rho = FractionalOrder::new(a.rho)?;
    let g = GammaMixing::new(a.mu, a.lambda)?;
    let mk = MeanKernel::new(rho, g);
    let grid = TimeGrid::new(a.t0, a.t_end, a.steps)?;
    let opts = StationaryOptions::new(a.tol);
    let ens: PathEnsemble<f64> = match a.process {
        Process::Component => simulate_component_paths(&sample_alphas(&g, a.n, a.seed), rho, &grid, a.seed)?,
        Process::Empirical => {
            let k = EmpiricalKernel::new(sample_alphas(&g, a.n, a.seed), rho)?;
            if a.rho < 1.0 {
                return Err(Error::Domain(format!("path simulation needs rho >= 1, got {}", a.rho)));
            }
            simulate_kernel_paths(&k, &grid, a.seed, a.paths, ProcessKind::EmpiricalMean)?
        }
        Process::Limit => simulate_limit_paths(&mk, &grid, a.seed, a.paths)?,
        Process::LimitExact => simulate_exact_gaussian(&mk, &grid, a.paths, a.seed)?,
        Process::Stationary => simulate_stationary_paths(&mk, &grid, a.seed, a.paths, &opts)?,
        Process::Xi => simulate_xi_paths(&sample_alphas(&g, a.n, a.seed), rho, &grid, a.seed, &opts)?,
    };
    let config = serde_json::to_value(Command::Simulate(a.clone()))?;
    write_ensemble(&ens, &a.out, config)?;
    Ok(0)
}

impl DiagnoseArgs {
    /// Fills the check-dependent defaults so the written config is complete.
    pub fn resolved(mut self) -> Self {
        if self.n.is_empty() {
            self.n = match self.check {
                Check::L2sup => vec![10, 100, 1000],
                Check::Tightness => vec![10, 100, 1000, 10000],
                Check::Pathwise => vec![100, 1000, 10000],
                Check::Variance => vec![100],
                _ => vec![],
            };
        }
        if self.mc.is_none() {
            self.mc = Some(match self.check {
                Check::Stationarity | Check::Variance => 10000,
                Check::Pathwise | Check::Remark => 0,
                _ => 2000,
            });
        }
        if self.t_list.is_empty() && self.check == Check::Cauchy {
            self.t_list = (0..11).map(|k| 10.0 * 2f64.powi(k)).collect();
        }
        self
    }
}

pub fn config_path(out: &Path) -> PathBuf {
    out.with_extension("config.json")
}

fn diagnose(a: DiagnoseArgs) -> Result<Code> {
    let rho = FractionalOrder::new(a.rho)?;
    let g = GammaMixing::new(a.mu, a.lambda)?;
    let mk = MeanKernel::new(rho, g);
    let grid = TimeGrid::new(0.0, a.t_end, a.steps)?;
    let mc = a.mc.unwrap_or(0);
    let report: ConvergenceReport = match a.check {
        Check::L2sup => diagnostics::check_l2_sup_convergence(&mk, &a.n, &grid, mc, a.seed)?,
        Check::Tightness => diagnostics::check_tightness(&mk, &grid, &a.n, mc, a.seed)?,
        Check::Pathwise => diagnostics::check_pathwise_conditions(&mk, &a.n, &grid, a.seed)?,
        Check::Cauchy => diagnostics::check_cauchy_decay(&mk, &a.t_list, mc, a.seed, a.mc_dt, a.mc_max_t)?,
        Check::Stationarity => diagnostics::check_stationarity(&mk, &grid, mc, a.seed, a.tol, a.y_time)?,
        Check::Remark => diagnostics::check_mixing_condition_remark(&g, rho)?,
        Check::Variance => {
            let n = *a.n.first().ok_or_else(|| Error::Domain("variance check needs --n".into()))?;
            diagnostics::check_variance_law(&mk, &grid, mc, a.seed, a.tol, n)?
        }
    };
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    match a.format {
        ReportFormat::Json => write_json(&a.out, &report)?,
        ReportFormat::Text => fs::write(&a.out, report.to_text())?,
    }
    write_json(&config_path(&a.out), &Command::Diagnose(a.clone()))?;
    eprintln!("{}: {:?} ({:.2} s)", report.check_name, report.verdict, report.runtime_seconds);
    Ok(match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 5,
        Verdict::Inconclusive => 6,
    })
}
