//! Files written by a scenario run.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::EnergyRecord;
use crate::error::{Error, Result};
use crate::scenario::{convergence_study, run, ConvergenceRow, RunOutcome, Scenario};

pub const ENERGY_HEADER: &str = "t,E,psi,Gamma,sigma,X,u0_trace,u1_trace";

pub fn write_energy_csv(path: &Path, records: &[EnergyRecord]) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{ENERGY_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.energy, r.psi, r.gamma, r.sigma, r.x, r.u0_trace, r.u1_trace
        )?;
    }
    w.flush()
}

pub fn read_energy_csv(path: &Path) -> Result<Vec<EnergyRecord>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == ENERGY_HEADER => {}
        _ => {
            return Err(Error::Config {
                line: 1,
                message: format!("expected header `{ENERGY_HEADER}`"),
            })
        }
    }
    let mut out = vec![];
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config {
                line: i + 1,
                message: e.to_string(),
            })?;
        if vals.len() != 8 {
            return Err(Error::Config {
                line: i + 1,
                message: format!("expected 8 columns, found {}", vals.len()),
            });
        }
        out.push(EnergyRecord {
            t: vals[0],
            energy: vals[1],
            psi: vals[2],
            gamma: vals[3],
            sigma: vals[4],
            x: vals[5],
            u0_trace: vals[6],
            u1_trace: vals[7],
        });
    }
    Ok(out)
}

/// Nodal snapshots, one row per `stride`-th sample: `t,u_0,...,u_{m-1}`.
pub fn write_solution_csv(path: &Path, outcome: &RunOutcome, stride: usize) -> io::Result<()> {
    let traj = &outcome.trajectory;
    let mut w = BufWriter::new(fs::File::create(path)?);
    let m = traj.coeffs.first().map_or(0, |c| c.len());
    let mut header = String::from("t");
    for i in 0..m {
        write!(header, ",u_{i}").unwrap();
    }
    writeln!(w, "{header}")?;
    for i in (0..traj.len()).step_by(stride.max(1)) {
        write!(w, "{:.16e}", traj.times[i])?;
        for c in traj.coeffs[i].iter() {
            write!(w, ",{c:.16e}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}

fn fmt_order(o: Option<f64>) -> String {
    o.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "n_nodes,dt,l2_error,h1_error,l2_order,h1_order")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{},{}",
            r.n_nodes,
            r.dt,
            r.l2_error,
            r.h1_error,
            fmt_order(r.l2_order),
            fmt_order(r.h1_order)
        )?;
    }
    w.flush()
}

/// Report in `key = value` form, readable by the scenario parser's tokenizer.
pub fn render_report(scenario: &Scenario, outcome: &RunOutcome) -> String {
    let mut s = String::new();
    let p = &scenario.params;
    for name in crate::params::ProblemParams::NAMES {
        writeln!(s, "{name} = {}", p.get(name).unwrap()).unwrap();
    }
    writeln!(s, "n_nodes = {}", scenario.n_nodes).unwrap();
    writeln!(s, "T = {}", scenario.horizon).unwrap();
    writeln!(s, "dt = {}", scenario.dt).unwrap();
    let hyp = if outcome.validation.accepted() {
        "accepted".to_string()
    } else {
        outcome
            .validation
            .violations
            .iter()
            .map(|h| h.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    };
    writeln!(s, "hypotheses = {hyp}").unwrap();
    if let Some(d) = outcome.derived {
        writeln!(s, "C0 = {:.12e}", d.c0).unwrap();
        writeln!(s, "C1 = {:.12e}", d.c1).unwrap();
        writeln!(s, "C1_sharp = {:.12e}", d.c1_sharp).unwrap();
        writeln!(s, "mu_min = {:.12e}", d.mu_min).unwrap();
        writeln!(s, "eps1 = {:.12e}", d.eps1).unwrap();
        writeln!(s, "eps2 = {:.12e}", d.eps2).unwrap();
        writeln!(s, "delta = {:.12e}", d.delta).unwrap();
        writeln!(s, "beta1 = {:.12e}", d.beta1).unwrap();
        writeln!(s, "beta2 = {:.12e}", d.beta2).unwrap();
        writeln!(s, "htilde_budget = {:.12e}", d.htilde_budget).unwrap();
    }
    if let (Some(first), Some(last)) = (outcome.records.first(), outcome.records.last()) {
        writeln!(s, "energy_initial = {:.12e}", first.energy).unwrap();
        writeln!(s, "energy_final = {:.12e}", last.energy).unwrap();
    }
    writeln!(s, "energy_drift = {:.12e}", outcome.energy_drift).unwrap();
    if let Some(d) = outcome.decay {
        writeln!(s, "fitted_rate = {:.12e}", d.fitted_rate).unwrap();
        writeln!(s, "fitted_amplitude = {:.12e}", d.fitted_amplitude).unwrap();
        writeln!(s, "theoretical_delta = {:.12e}", d.theoretical_delta).unwrap();
        writeln!(s, "fit_window = {}, {}", d.fit_window.0, d.fit_window.1).unwrap();
        writeln!(s, "fit_residual = {:.12e}", d.residual).unwrap();
    } else if let Some(f) = outcome.fit {
        writeln!(s, "fitted_rate = {:.12e}", f.rate).unwrap();
        writeln!(s, "fit_residual = {:.12e}", f.residual).unwrap();
    }
    if let Some(c) = outcome.sandwich {
        writeln!(s, "sandwich_violations = {}", c.violations).unwrap();
    }
    if let Some(c) = outcome.differential {
        writeln!(s, "differential_violations = {}", c.violations).unwrap();
        writeln!(s, "differential_worst_excess = {:.12e}", c.worst_excess).unwrap();
    }
    if let Some(l) = outcome.ladder {
        writeln!(s, "ladder_relative = {:.12e}", l.relative).unwrap();
    }
    if let Some(e) = outcome.oracle_error {
        writeln!(s, "oracle_relative_error = {e:.12e}").unwrap();
    }
    for c in &outcome.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        writeln!(s, "check_{} = {verdict}  # {}", c.check, c.detail).unwrap();
    }
    writeln!(
        s,
        "verdict = {}",
        if outcome.passed() { "PASS" } else { "FAIL" }
    )
    .unwrap();
    s
}

/// Output directory: explicit flag, then `TWOPOINT_WAVE_OUT`, then
/// `out/<config stem>`.
pub fn output_dir(flag: Option<&Path>, config: &Path) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os("TWOPOINT_WAVE_OUT") {
        return PathBuf::from(p);
    }
    let stem = config
        .file_stem()
        .map_or_else(|| "scenario".into(), |s| s.to_os_string());
    Path::new("out").join(stem)
}

/// Runs a scenario and writes `energy.csv`, `report.txt`, and optionally
/// `solution.csv` and `convergence.csv` into `dir`.
pub fn run_to_dir(scenario: &Scenario, dir: &Path) -> Result<RunOutcome> {
    let outcome = run(scenario)?;
    fs::create_dir_all(dir)?;
    write_energy_csv(&dir.join("energy.csv"), &outcome.records)?;
    if scenario.solution_stride > 0 {
        write_solution_csv(
            &dir.join("solution.csv"),
            &outcome,
            scenario.solution_stride,
        )?;
    }
    if scenario.converge_levels >= 3 {
        let rows = convergence_study(scenario, scenario.converge_levels)?;
        write_convergence_csv(&dir.join("convergence.csv"), &rows)?;
    }
    fs::write(dir.join("report.txt"), render_report(scenario, &outcome))?;
    Ok(outcome)
}

/// One line of `sweep.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub passed: bool,
    pub delta: Option<f64>,
    pub fitted_rate: Option<f64>,
    pub energy_final: Option<f64>,
    pub error: Option<String>,
}

/// Runs one scenario per value of `key`, concurrently, each into
/// `dir/<key>=<value>`, and writes `dir/sweep.csv`.
pub fn sweep(base: &Scenario, key: &str, values: &[String], dir: &Path) -> Result<Vec<SweepRow>> {
    let mut scenarios = Vec::with_capacity(values.len());
    for v in values {
        let mut s = base.clone();
        s.set_simple(key, v)
            .map_err(|message| Error::Config { line: 0, message })?;
        scenarios.push(s);
    }
    fs::create_dir_all(dir)?;
    let rows: Vec<SweepRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .zip(values)
            .map(|(s, v)| {
                let sub = dir.join(format!("{key}={v}"));
                scope.spawn(move || match run_to_dir(s, &sub) {
                    Ok(o) => SweepRow {
                        value: v.clone(),
                        passed: o.passed(),
                        delta: o.derived.map(|d| d.delta),
                        fitted_rate: o.fit.map(|f| f.rate),
                        energy_final: o.records.last().map(|r| r.energy),
                        error: None,
                    },
                    Err(e) => SweepRow {
                        value: v.clone(),
                        passed: false,
                        delta: None,
                        fitted_rate: None,
                        energy_final: None,
                        error: Some(e.to_string()),
                    },
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.12e}"));
    let mut w = BufWriter::new(fs::File::create(dir.join("sweep.csv"))?);
    writeln!(w, "{key},verdict,delta,fitted_rate,energy_final,error")?;
    for r in &rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.value,
            if r.passed { "PASS" } else { "FAIL" },
            opt(r.delta),
            opt(r.fitted_rate),
            opt(r.energy_final),
            r.error.as_deref().unwrap_or("").replace(',', ";")
        )?;
    }
    w.flush()?;
    Ok(rows)
}
