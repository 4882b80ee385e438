use std::f64::consts::PI;

use clap::ValueEnum;
use cohphase::phase::{phase_distribution, squeezing_report, crossover_scan, CROSSOVER_TOL};
use cohphase::series::{eigen_residual, state_amplitudes};
use cohphase::{PhaseWindow, SpecKind, Squeezing, StateSpec, SystemId, TruncationPolicy};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig, System, SystemConfig, ZSweep};
use crate::error::{is_numerical, CliError};
use crate::output::{format_f64, Meta, Table};

/// Text of an artifact plus non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub text: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Which {
    #[value(name = "Sn")]
    #[serde(rename = "Sn")]
    Sn,
    #[value(name = "Sphi")]
    #[serde(rename = "Sphi")]
    Sphi,
}

impl From<Which> for Squeezing {
    fn from(w: Which) -> Self {
        match w {
            Which::Sn => Squeezing::Number,
            Which::Sphi => Squeezing::Phase,
        }
    }
}

fn meta(sys: &System) -> Meta {
    Meta {
        system: sys.name.clone(),
        params: sys.params.clone(),
        kind: sys.kind.map(|k| k.as_str().to_string()),
        expr: sys.expr.clone(),
    }
}

fn render(table: &Table, sys: &System, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(&meta(sys)),
    }
}

struct Job {
    sys: System,
    zs: Vec<Complex64>,
    window: PhaseWindow,
    policy: TruncationPolicy,
}

fn prepare(cfg: &RunConfig) -> Result<Job, CliError> {
    let sys = cfg.system.build()?;
    let zs = cfg.z_values(&sys.spec)?;
    Ok(Job {
        zs,
        window: cfg.window()?,
        policy: cfg.policy()?,
        sys,
    })
}

/// Phase distribution on the θ grid, one column per `z`.
pub fn dist(cfg: &RunConfig) -> Result<Artifact, CliError> {
    if cfg.theta_grid < 2 {
        return Err(CliError::Usage(format!("theta_grid = {} must be at least 2", cfg.theta_grid)));
    }
    let job = prepare(cfg)?;
    let dists = job
        .zs
        .par_iter()
        .map(|&z| phase_distribution(&job.sys.spec, z, cfg.theta_grid, job.window, &job.policy))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["theta".to_string()];
    match cfg.z_sweep {
        Some(ZSweep::Range { .. }) => header.extend(job.zs.iter().map(|z| format!("P_z{}", format_f64(z.re)))),
        _ => header.push("P".into()),
    }
    let mut table = Table::new(header);
    for (i, &theta) in dists[0].thetas.iter().enumerate() {
        let mut row = vec![Some(theta)];
        row.extend(dists.iter().map(|d| Some(d.values[i])));
        table.rows.push(row);
    }
    Ok(Artifact {
        text: render(&table, &job.sys, cfg.output.format),
        warnings: job.sys.warnings.clone(),
    })
}

pub const SQUEEZE_HEADER: [&str; 6] = ["z", "var_n", "var_phi", "commutator", "S_n", "S_phi"];

/// Variances, commutator and squeezing parameters along the `z` sweep.
pub fn squeeze(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let job = prepare(cfg)?;
    let reports: Vec<_> = job
        .zs
        .par_iter()
        .map(|&z| squeezing_report(&job.sys.spec, z, job.window, &job.policy))
        .collect();
    let mut errors = reports.iter().filter_map(|r| r.as_ref().err());
    if let Some(e) = errors.clone().find(|e| !recoverable(e)) {
        return Err(e.clone().into());
    }
    if reports.iter().all(|r| r.is_err()) {
        if let Some(e) = errors.next() {
            return Err(e.clone().into());
        }
    }

    let mut warnings = job.sys.warnings.clone();
    let mut table = Table::new(SQUEEZE_HEADER.iter().map(|s| s.to_string()).collect());
    for (z, report) in job.zs.iter().zip(reports) {
        let row = match report {
            Ok(r) => vec![Some(z.norm()), Some(r.var_n), Some(r.var_phi), Some(r.commutator_mag), r.s_n, r.s_phi],
            Err(e) => {
                warnings.push(format!("z = {}: {}: {e}", format_f64(z.norm()), e.name()));
                vec![Some(z.norm()), None, None, None, None, None]
            }
        };
        table.rows.push(row);
    }
    Ok(Artifact {
        text: render(&table, &job.sys, cfg.output.format),
        warnings,
    })
}

#[derive(Debug, Serialize)]
struct CrossoverDoc<'a> {
    #[serde(flatten)]
    meta: Meta,
    which: Which,
    roots: &'a [f64],
    tol: f64,
}

/// Sign changes of `S_n` or `S_φ` along the real sweep; always JSON.
pub fn crossover(cfg: &RunConfig, which: Which) -> Result<Artifact, CliError> {
    let Some(ZSweep::Range { lo, hi, count }) = cfg.z_sweep else {
        return Err(CliError::Usage("crossover needs a sweep (--lo/--hi/--count)".into()));
    };
    if count < 2 {
        return Err(CliError::Usage(format!("crossover needs count >= 2, got {count}")));
    }
    let sys = cfg.system.build()?;
    let step = (hi - lo) / (count - 1) as f64;
    let roots = crossover_scan(&sys.spec, which.into(), lo, hi, step, cfg.window()?, &cfg.policy()?)?;
    let doc = CrossoverDoc {
        meta: meta(&sys),
        which,
        roots: &roots,
        tol: CROSSOVER_TOL,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("crossover serializes");
    text.push('\n');
    Ok(Artifact {
        text,
        warnings: sys.warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub system: String,
    pub invariant: &'static str,
    pub z: f64,
    /// Worst violation found, or the error that stopped the check.
    pub outcome: Result<f64, String>,
    pub tolerance: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Ok(err) if err <= self.tolerance)
    }
}

/// Checks a family at `z = 0.3r, 0.6r, 0.9r` with `r = min(radius, 3)`.
pub fn check_system(name: &str, spec: &StateSpec, policy: &TruncationPolicy) -> Vec<CheckRow> {
    let r = spec.radius().min(3.0);
    let window = PhaseWindow::default();
    let dual = match spec.kind() {
        SpecKind::Spectrum => spec.to_nonlinearity(),
        SpecKind::Nonlinearity => spec.to_spectrum(),
    };
    // The same quantities with the tail tolerance squared and twice the cap.
    let tighter = TruncationPolicy {
        tail_tol: (policy.tail_tol * policy.tail_tol).max(f64::MIN_POSITIVE),
        n_cap: policy.n_cap * 2,
    };
    let mut rows = Vec::new();
    let mut push = |invariant: &'static str, z: f64, tolerance: f64, outcome: cohphase::Result<f64>| {
        rows.push(CheckRow {
            system: name.to_string(),
            invariant,
            z,
            outcome: outcome.map_err(|e| format!("{}: {e}", e.name())),
            tolerance,
        });
    };

    let uniform = phase_distribution(spec, Complex64::new(0.0, 0.0), 401, window, policy)
        .map(|d| d.values.iter().map(|p| (p - 0.5 / PI).abs()).fold(0.0, f64::max));
    push("uniform at z = 0", 0.0, 1e-12, uniform);

    for z in [0.3 * r, 0.6 * r, 0.9 * r] {
        let zc = Complex64::new(z, 0.0);
        push(
            "normalization",
            z,
            1e-10,
            state_amplitudes(spec, zc, policy).map(|c| (c.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs()),
        );
        push("eigenvector", z, 1e-9 * z.max(1.0), eigen_residual(spec, zc, policy));

        let dist = phase_distribution(spec, zc, 2001, window, policy);
        push(
            "trapezoid normalization",
            z,
            1e-8,
            dist.as_ref().map(|d| (d.trapezoid_integral() - 1.0).abs()).map_err(Clone::clone),
        );
        push(
            "symmetry",
            z,
            1e-12,
            dist.as_ref()
                .map(|d| {
                    let v = &d.values;
                    (0..v.len()).map(|i| (v[i] - v[v.len() - 1 - i]).abs()).fold(0.0, f64::max)
                })
                .map_err(Clone::clone),
        );

        let dual_err = (|| {
            let a = squeezing_report(spec, zc, window, policy)?;
            let b = squeezing_report(&dual, zc, window, policy)?;
            let pa = phase_distribution(&dual, zc, 2001, window, policy)?;
            let pb = dist.clone()?;
            let p_err = pa.values.iter().zip(&pb.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let s_err = |x: Option<f64>, y: Option<f64>| match (x, y) {
                (Some(x), Some(y)) => (x - y).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            Ok([
                p_err,
                (a.var_n - b.var_n).abs(),
                (a.var_phi - b.var_phi).abs(),
                s_err(a.s_n, b.s_n),
                s_err(a.s_phi, b.s_phi),
            ]
            .into_iter()
            .fold(0.0, f64::max))
        })();
        push("dual path", z, 1e-10, dual_err);

        let stability = (|| {
            let a = squeezing_report(spec, zc, window, policy)?;
            let b = squeezing_report(spec, zc, window, &tighter)?;
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            Ok(rel(a.var_n, b.var_n)
                .max(rel(a.var_phi, b.var_phi))
                .max(rel(a.commutator_mag, b.commutator_mag)))
        })();
        push("truncation stability", z, 1e-10, stability);

        let uncertainty = squeezing_report(spec, zc, window, policy)
            .map(|r| (0.25 * r.commutator_mag.powi(2) - r.var_n * r.var_phi).max(0.0));
        push("uncertainty relation", z, 1e-9, uncertainty);
    }
    rows
}

pub fn format_check(rows: &[CheckRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let value = match &r.outcome {
            Ok(v) => format!("{v:.3e}"),
            Err(e) => e.clone(),
        };
        let status = if r.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{:<18} {:<24} z={:<8.4} {:<12} tol={:.0e}  {status}\n",
            r.system,
            r.invariant,
            r.z,
            value,
            r.tolerance
        ));
    }
    out
}

/// Runs the invariant suite on one configured system or the whole catalog.
pub fn check(system: Option<&SystemConfig>, policy: &TruncationPolicy) -> Result<(String, Vec<CheckRow>), CliError> {
    let mut rows = Vec::new();
    match system {
        Some(s) => {
            let sys = s.build()?;
            rows.extend(check_system(&sys.name, &sys.spec, policy));
        }
        None => {
            let per_system: Vec<_> = SystemId::ALL
                .par_iter()
                .map(|&id| SystemConfig::catalog(id).build().map(|sys| check_system(&sys.name, &sys.spec, policy)))
                .collect::<Result<_, _>>()?;
            rows.extend(per_system.into_iter().flatten());
        }
    }
    Ok((format_check(&rows), rows))
}

/// Fails with the names of the invariants that did not hold.
pub fn check_verdict(rows: &[CheckRow]) -> Result<(), CliError> {
    let mut failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} {} at z = {:.4}", r.system, r.invariant, r.z))
        .collect();
    failed.dedup();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failed.join("; ")))
    }
}

/// Per-point numerical failures in a sweep are warnings; anything else aborts.
pub fn recoverable(e: &cohphase::Error) -> bool {
    is_numerical(e) || matches!(e, cohphase::Error::Expression(_))
}
