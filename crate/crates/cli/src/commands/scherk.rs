use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tpms_geometry::PeriodicMesh;
use tpms_mesh::{scherk_domain, scherk_mesh};
use tpms_weierstrass::ScherkKind;

use super::{required, write_mesh};
use crate::error::CliError;
use crate::meta::write_sidecar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Doubly,
    Singly,
}

impl From<Kind> for ScherkKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Doubly => ScherkKind::Doubly,
            Kind::Singly => ScherkKind::Singly,
        }
    }
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScherkArgs {
    /// Which limit [default: doubly].
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Radial rows of the half disc [default: 32].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub resolution: Option<u64>,
    /// Radius of the half disc, below the rim poles at 1 [default: 0.99].
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn scherk(args: ScherkArgs) -> Result<i32, CliError> {
    let out = required(args.out.clone(), "out")?;
    let kind = args.kind.unwrap_or(Kind::Doubly);
    let resolution = args.resolution.unwrap_or(32) as usize;
    let radius = args.radius.unwrap_or(0.99);
    if resolution == 0 {
        return Err(CliError::Usage("resolution must be at least 1".into()));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(CliError::Usage("--radius must lie in (0, 1)".into()));
    }
    let mesh = scherk_mesh(kind.into(), &scherk_domain(resolution, radius))?;
    let pm = PeriodicMesh::closed(mesh);
    write_mesh(&out, &pm, &[format!("Scherk limit, {kind:?}, half disc radius {radius}")])?;
    write_sidecar(
        &out,
        "scherk",
        &args,
        json!({ "vertices": pm.vertex_count(), "triangles": pm.triangle_count() }),
    )?;
    println!("{kind:?} Scherk mesh: {} triangles", pm.triangle_count());
    Ok(0)
}
