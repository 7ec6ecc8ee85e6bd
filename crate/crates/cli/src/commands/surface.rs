use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tpms_geometry::euler_genus;
use tpms_mesh::Cell;
use tpms_period::{seed_member, solve_for_pitch, solve_member_with, PeriodSolution, SolverOptions, Strategy};

use super::{required, write_mesh};
use crate::error::CliError;
use crate::meta::write_sidecar;

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceArgs {
    /// Family parameter eta of the member.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "rho_target")]
    pub eta: Option<f64>,
    /// Pitch c/a to hit instead of giving eta.
    #[arg(long)]
    pub rho_target: Option<f64>,
    /// Allowed pitch error with --rho-target [default: 1e-4].
    #[arg(long)]
    pub rho_tol: Option<f64>,
    /// Rows per curved triangle of the sphere template, at least 1 [default: 16].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub resolution: Option<u64>,
    /// Output mesh (.obj, or .ply with curvature).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn solve(args: &SurfaceArgs, opts: &SolverOptions) -> Result<PeriodSolution, CliError> {
    match (args.eta, args.rho_target) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --eta or --rho-target".into())),
        (None, None) => Err(CliError::Usage("one of --eta or --rho-target is required".into())),
        (Some(eta), None) => {
            let seed = seed_member(eta, 40)
                .ok_or_else(|| CliError::Numerical(format!("no family member found at eta {eta}")))?;
            Ok(solve_member_with(seed, Strategy::FixEta, opts)?)
        }
        (None, Some(rho)) => {
            let tol = args.rho_tol.unwrap_or(1e-4);
            if !(rho > 0.0 && tol > 0.0) {
                return Err(CliError::Usage("--rho-target and --rho-tol must be positive".into()));
            }
            Ok(solve_for_pitch(rho, tol, opts)?)
        }
    }
}

pub fn surface(args: SurfaceArgs) -> Result<i32, CliError> {
    let out = required(args.out.clone(), "out")?;
    let resolution = args.resolution.unwrap_or(16) as usize;
    if resolution == 0 {
        return Err(CliError::Usage("resolution must be at least 1".into()));
    }
    let opts = SolverOptions::default();
    let sol = solve(&args, &opts)?;
    let cell = Cell::from_solution(&sol, resolution)?;
    let topo = euler_genus(&cell.mesh)?;
    let p = sol.params;
    let comments = vec![
        format!("QTZ-QZD cell: eta {} delta {} theta {}", p.eta, p.delta, p.theta),
        format!("c {} a {} rho {}", sol.c, sol.a, sol.rho),
    ];
    write_mesh(&out, &cell.mesh, &comments)?;
    write_sidecar(
        &out,
        "surface",
        &args,
        json!({
            "member": sol,
            "resolution": resolution,
            "vertices": cell.mesh.vertex_count(),
            "triangles": cell.mesh.triangle_count(),
            "euler": topo.euler,
            "genus": topo.genus,
            "mirrored": cell.alignment.mirrored,
            "symmetry_residual": cell.invariance_residual,
            "tolerances": { "residual": opts.tol, "quadrature": opts.quad.abs_tol },
        }),
    )?;
    println!(
        "eta {:.6} rho {:.6}: {} vertices, {} triangles, genus {}",
        p.eta,
        sol.rho,
        cell.mesh.vertex_count(),
        cell.mesh.triangle_count(),
        topo.genus
    );
    Ok(0)
}
