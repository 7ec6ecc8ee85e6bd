mod evolve;
mod family;
mod scherk;
mod surface;
mod verify;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

pub use evolve::{evolve, EvolveArgs};
pub use family::{family, FamilyArgs};
pub use scherk::{scherk, ScherkArgs};
pub use surface::{surface, SurfaceArgs};
pub use verify::{verify, VerifyArgs};

use tpms_geometry::{angle_deficit_K, write_obj, write_ply, PeriodicMesh};

use crate::error::CliError;

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Writes OBJ, or binary PLY with the angle-deficit curvature as vertex
/// quality when the extension is `.ply`.
fn write_mesh(path: &Path, pm: &PeriodicMesh, comments: &[String]) -> Result<(), CliError> {
    let ply = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ply"));
    let w = create(path)?;
    let result = if ply {
        let k = angle_deficit_K(pm)?;
        write_ply(w, pm, &k, &comments.join("\n"))
    } else {
        write_obj(w, pm, comments)
    };
    result.map_err(|e| match e {
        tpms_geometry::GeometryError::Io(source) => CliError::io(path, source),
        other => other.into(),
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}
