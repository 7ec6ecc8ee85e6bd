use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tpms_geometry::{euler_genus, find_flat_points, gauss_bonnet_total, read_obj, FlatPoint, Topology};

use super::{create, required};
use crate::error::CliError;
use crate::meta::write_sidecar;

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Mesh to check (OBJ).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// JSON report; printed to stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Curvature threshold for flat-point candidates [default: 10th percentile of |K|].
    #[arg(long)]
    pub flat_eps: Option<f64>,
    /// Relative Gauss-Bonnet tolerance [default: 1e-6].
    #[arg(long)]
    pub gb_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct Report {
    input: String,
    vertices: usize,
    triangles: usize,
    periodic: bool,
    topology: Option<Topology>,
    gauss_bonnet_total: Option<f64>,
    flat_points: Vec<FlatPoint>,
    checks: Vec<Check>,
    pass: bool,
}

pub fn verify(args: VerifyArgs) -> Result<i32, CliError> {
    let input = required(args.input.clone(), "input")?;
    let gb_tol = args.gb_tol.unwrap_or(1e-6);
    let file = File::open(&input).map_err(|e| CliError::io(&input, e))?;
    let pm = read_obj(BufReader::new(file)).map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;

    let mut checks = Vec::new();
    let mut gb = None;
    let mut flats = Vec::new();
    let topology = match euler_genus(&pm) {
        Ok(t) => {
            checks.push(Check {
                name: "closed_orientable",
                pass: true,
                detail: format!("euler {} genus {}", t.euler, t.genus),
            });
            Some(t)
        }
        Err(e) => {
            checks.push(Check {
                name: "closed_orientable",
                pass: false,
                detail: e.to_string(),
            });
            None
        }
    };
    if let Some(t) = &topology {
        let total = gauss_bonnet_total(&pm)?;
        let expected = 2.0 * PI * t.euler as f64;
        let err = (total - expected).abs() / expected.abs().max(2.0 * PI);
        checks.push(Check {
            name: "gauss_bonnet",
            pass: err <= gb_tol,
            detail: format!("total {total:.12} vs 2 pi chi {expected:.12} (relative {err:.2e})"),
        });
        gb = Some(total);
        flats = find_flat_points(&pm, args.flat_eps)?;
        if pm.lattice.is_some() {
            // A genus-g surface in a 3-torus has Gauss-map branching 4(g - 1).
            let branching: i64 = flats.iter().map(|f| f.winding as i64 - 1).sum();
            let expected = 4 * (t.genus - 1);
            checks.push(Check {
                name: "flat_point_branching",
                pass: branching == expected,
                detail: format!("{} flat points, total order {branching}, Riemann-Hurwitz needs {expected}", flats.len()),
            });
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = Report {
        input: input.display().to_string(),
        vertices: pm.vertex_count(),
        triangles: pm.triangle_count(),
        periodic: pm.lattice.is_some(),
        topology,
        gauss_bonnet_total: gb,
        flat_points: flats,
        checks,
        pass,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    match &args.report {
        Some(path) => {
            use std::io::Write;
            let mut w = create(path)?;
            w.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
            w.flush().map_err(|e| CliError::io(path, e))?;
            write_sidecar(path, "verify", &args, json!({ "pass": pass, "tolerances": { "gauss_bonnet": gb_tol } }))?;
        }
        None => print!("{text}"),
    }
    Ok(if pass { 0 } else { 2 })
}
