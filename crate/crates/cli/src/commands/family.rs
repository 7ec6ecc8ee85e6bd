use std::f64::consts::FRAC_PI_6;
use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tpms_period::{sweep_family_with, PeriodSolution, SolverOptions};

use super::{create, required};
use crate::error::CliError;
use crate::meta::write_sidecar;

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyArgs {
    /// Smallest eta of the grid [default: -0.45].
    #[arg(long, allow_negative_numbers = true)]
    pub eta_min: Option<f64>,
    /// Largest eta of the grid [default: 0.5].
    #[arg(long, allow_negative_numbers = true)]
    pub eta_max: Option<f64>,
    /// Grid points; one point solves at eta-min only [default: 20].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual tolerance of the solver [default: 1e-8].
    #[arg(long)]
    pub tol: Option<f64>,
}

const HEADER: &str = "eta,delta,theta,c,a,rho,re_omega1,im_omega1,res1,res2,res3,status";

fn row(m: &PeriodSolution) -> String {
    let p = &m.params;
    format!(
        "{},{},{},{},{},{},{},{},{:e},{:e},{:e},converged",
        p.eta, p.delta, p.theta, m.c, m.a, m.rho, m.omega1.0, m.omega1.1, m.residuals[0], m.residuals[1], m.residuals[2]
    )
}

pub fn family(args: FamilyArgs) -> Result<i32, CliError> {
    let out = required(args.out.clone(), "out")?;
    let eta_min = args.eta_min.unwrap_or(-0.45);
    let eta_max = args.eta_max.unwrap_or(0.5);
    let steps = args.steps.unwrap_or(20);
    let tol = args.tol.unwrap_or(1e-8);
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    for eta in [eta_min, eta_max] {
        if !(eta.abs() < FRAC_PI_6) {
            return Err(CliError::Usage(format!("eta {eta} outside (-pi/6, pi/6)")));
        }
    }
    if eta_min > eta_max {
        return Err(CliError::Usage("--eta-min exceeds --eta-max".into()));
    }
    let mut w = create(&out)?;
    if steps == 0 {
        w.flush().map_err(|e| CliError::io(&out, e))?;
        write_sidecar(&out, "family", &args, json!({ "rows": 0, "failures": 0 }))?;
        return Ok(0);
    }
    let grid: Vec<f64> = if steps == 1 {
        vec![eta_min]
    } else {
        (0..steps).map(|k| eta_min + (eta_max - eta_min) * k as f64 / (steps - 1) as f64).collect()
    };
    // Continuation runs from the doubly periodic end, where seeding is easiest.
    let descending: Vec<f64> = grid.iter().rev().copied().collect();
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    let sweep = sweep_family_with(&descending, &opts);

    let io = |e| CliError::io(&out, e);
    writeln!(w, "{HEADER}").map_err(io)?;
    for &eta in &grid {
        if let Some(m) = sweep.members.iter().find(|m| m.params.eta == eta) {
            writeln!(w, "{}", row(m)).map_err(io)?;
        } else {
            let why = sweep
                .failures
                .iter()
                .find(|(e, _)| *e == eta)
                .map(|(_, err)| err.to_string())
                .unwrap_or_default()
                .replace(',', ";");
            writeln!(w, "{eta},,,,,,,,,,,failed: {why}").map_err(io)?;
        }
    }
    w.flush().map_err(io)?;
    let failures = sweep.failures.len();
    write_sidecar(
        &out,
        "family",
        &args,
        json!({
            "rows": grid.len(),
            "converged": sweep.members.len(),
            "failures": failures,
            "monotone": sweep.monotone,
            "tolerances": { "residual": tol },
        }),
    )?;
    println!("{} of {} members converged", sweep.members.len(), grid.len());
    Ok(if failures == 0 { 0 } else { 2 })
}
