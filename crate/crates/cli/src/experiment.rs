//! Runs every configured method on one generated problem and writes, per
//! method, `history.csv`, `best.pgm`, `dp.pgm` and `summary.txt`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use deblur_core::problems::{edges, make_problem, phantom, run_method, scene, star_field, MethodSpec, NoisyProblem};
use deblur_core::solvers::SolveRecord;
use deblur_core::ImageGrid;

use crate::config::{ExperimentConfig, ImageSource};
use crate::error::{CliError, Result};
use crate::images::{load_image, write_pgm};

#[derive(Debug)]
pub struct MethodOutcome {
    pub method: MethodSpec,
    pub record: SolveRecord,
    pub wall_time: Duration,
    pub dir: PathBuf,
}

pub fn build_truth(cfg: &ExperimentConfig) -> Result<ImageGrid> {
    Ok(match &cfg.image {
        ImageSource::Phantom => phantom(cfg.n),
        ImageSource::Edges => edges(cfg.n),
        ImageSource::Stars => star_field(cfg.n, cfg.seed),
        ImageSource::Scene => scene(cfg.n),
        ImageSource::File(path) => load_image(path, cfg.n)?,
    })
}

pub fn build_problem(cfg: &ExperimentConfig) -> Result<NoisyProblem> {
    let truth = build_truth(cfg)?;
    Ok(make_problem(&truth, cfg.psf.build()?, cfg.bc, cfg.sigma, cfg.seed)?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn history_csv(record: &SolveRecord) -> String {
    let mut out = String::from("iter,res_norm,rre,psnr,alpha\n");
    for h in &record.history {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            h.iteration,
            h.residual_norm,
            fmt_opt(h.rre),
            fmt_opt(h.psnr),
            fmt_opt(h.alpha)
        );
    }
    out
}

fn summary(outcome: &MethodOutcome) -> String {
    let r = &outcome.record;
    let at = |k: Option<usize>| k.map(|k| r.history[k - 1]);
    let best = at(r.best_iteration);
    let dp = at(r.discrepancy_iteration);
    let mut s = String::new();
    let _ = writeln!(s, "method = {}", outcome.method);
    let _ = writeln!(s, "stop_reason = {}", r.stop_reason);
    let _ = writeln!(s, "iterations = {}", r.iterations());
    match best {
        Some(h) => {
            let _ = writeln!(s, "best_iteration = {}", h.iteration);
            let _ = writeln!(s, "best_rre = {}", fmt_opt(h.rre));
            let _ = writeln!(s, "best_psnr = {}", fmt_opt(h.psnr));
        }
        None => s.push_str("best_iteration = none\n"),
    }
    match dp {
        Some(h) => {
            let _ = writeln!(s, "dp_iteration = {}", h.iteration);
            let _ = writeln!(s, "dp_rre = {}", fmt_opt(h.rre));
            let _ = writeln!(s, "dp_psnr = {}", fmt_opt(h.psnr));
        }
        None => s.push_str("dp_iteration = none (dp.pgm holds the final iterate)\n"),
    }
    let _ = writeln!(s, "operator_applications = {}", r.operator_applications);
    let _ = writeln!(s, "wall_time_s = {:.3}", outcome.wall_time.as_secs_f64());
    s
}

pub fn method_dir(outdir: &Path, method: &MethodSpec) -> PathBuf {
    outdir.join(method.to_string().replace(' ', "_"))
}

fn write_outputs(outcome: &MethodOutcome, n: usize, peak: f64) -> Result<()> {
    let dir = &outcome.dir;
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let r = &outcome.record;
    let path = dir.join("history.csv");
    std::fs::write(&path, history_csv(r)).map_err(CliError::io(path))?;
    let best = r.best_solution.as_ref().unwrap_or(&r.solution);
    write_pgm(&dir.join("best.pgm"), best, n, peak)?;
    let dp = r.discrepancy_solution.as_ref().unwrap_or(&r.solution);
    write_pgm(&dir.join("dp.pgm"), dp, n, peak)?;
    let path = dir.join("summary.txt");
    std::fs::write(&path, summary(outcome)).map_err(CliError::io(path))
}

/// Runs all methods (concurrently) and writes their artifacts under `cfg.outdir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<MethodOutcome>> {
    let problem = build_problem(cfg)?;
    for m in &cfg.methods {
        m.check_problem(&problem)?;
    }
    let truth = problem.x_true.as_ref().expect("generated problems carry their truth");
    let n = cfg.n;
    let peak = truth.max();

    let results: Vec<Result<(SolveRecord, Duration)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .methods
            .iter()
            .map(|m| {
                let problem = &problem;
                scope.spawn(move || {
                    let start = Instant::now();
                    let rec = run_method(problem, m, &cfg.params)?;
                    Ok((rec, start.elapsed()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Runtime("solver thread panicked".into()))))
            .collect()
    });

    std::fs::create_dir_all(&cfg.outdir).map_err(CliError::io(&cfg.outdir))?;
    write_pgm(&cfg.outdir.join("truth.pgm"), truth.pixels(), n, peak)?;
    write_pgm(&cfg.outdir.join("observed.pgm"), problem.b.pixels(), n, peak)?;

    let mut outcomes = Vec::with_capacity(results.len());
    for (method, res) in cfg.methods.iter().zip(results) {
        let (record, wall_time) = res?;
        let outcome = MethodOutcome { method: *method, record, wall_time, dir: method_dir(&cfg.outdir, method) };
        write_outputs(&outcome, n, peak)?;
        outcomes.push(outcome);
    }
    Ok(outcomes)
}
