use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tpms_evolver::{evolve as run_evolution, load_net, qtz, tube_mesh, write_trace_csv, EvolveOptions};
use tpms_geometry::euler_genus;

use super::{create, required, with_suffix, write_mesh};
use crate::error::CliError;
use crate::meta::write_sidecar;

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveArgs {
    /// Periodic net file [default: the bundled qtz net].
    #[arg(long)]
    pub net: Option<PathBuf>,
    /// Tube radius [default: 0.12].
    #[arg(long)]
    pub radius: Option<f64>,
    /// Polygon sides of each sleeve [default: 24].
    #[arg(long)]
    pub segments: Option<usize>,
    /// Iteration budget; 0 writes the tube unchanged [default: 2000].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Stop when the gradient norm falls below this [default: 1e-6].
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Output mesh (.obj or .ply).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Energy trace CSV [default: <out>.trace.csv].
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

pub fn evolve(args: EvolveArgs) -> Result<i32, CliError> {
    let out = required(args.out.clone(), "out")?;
    let trace_path = args.trace.clone().unwrap_or_else(|| with_suffix(&out, ".trace.csv"));
    let radius = args.radius.unwrap_or(0.12);
    let segments = args.segments.unwrap_or(24);
    let defaults = EvolveOptions::default();
    let opts = EvolveOptions {
        max_iters: args.iters.unwrap_or(defaults.max_iters),
        grad_tol: args.grad_tol.unwrap_or(defaults.grad_tol),
        ..defaults
    };
    if !(opts.grad_tol >= 0.0) || segments < 3 {
        return Err(CliError::Usage("--grad-tol must be non-negative and --segments at least 3".into()));
    }
    let net = match &args.net {
        Some(path) => load_net(path).map_err(|e| match e {
            tpms_evolver::EvolverError::Io(source) => CliError::io(path, source),
            other => CliError::Input(format!("{}: {other}", path.display())),
        })?,
        None => qtz(),
    };
    let tube = tube_mesh(&net, radius, segments)?;
    let genus_before = euler_genus(&tube)?.genus;
    let ev = run_evolution(&tube, &opts)?;
    let genus_after = euler_genus(&ev.mesh)?.genus;
    let collapsed = ev.collapsed_triangles();

    write_mesh(
        &out,
        &ev.mesh,
        &[format!("evolved tube: radius {radius}, {segments} segments, {} iterations", ev.trace.len() - 1)],
    )?;
    let w = create(&trace_path)?;
    write_trace_csv(w, &ev.trace).map_err(|e| CliError::io(&trace_path, e))?;
    let ratio = ev.final_energy() / ev.initial_energy();
    write_sidecar(
        &out,
        "evolve",
        &args,
        json!({
            "triangles": ev.mesh.triangle_count(),
            "initial_energy": ev.initial_energy(),
            "final_energy": ev.final_energy(),
            "energy_ratio": ratio,
            "stop": ev.stop,
            "genus_before": genus_before,
            "genus_after": genus_after,
            "collapsed_triangles": collapsed,
            "inverted_trials": ev.inverted_trials,
            "trace": trace_path.display().to_string(),
            "tolerances": { "grad_tol": opts.grad_tol, "armijo": opts.armijo },
        }),
    )?;
    println!(
        "f {:.6e} -> {:.6e} (ratio {ratio:.3e}), {:?}, genus {genus_after}",
        ev.initial_energy(),
        ev.final_energy(),
        ev.stop
    );
    if collapsed > 0 || genus_after != genus_before {
        eprintln!("tpms: pinch-off: {collapsed} collapsed triangles");
        return Ok(2);
    }
    Ok(0)
}
