use thiserror::Error;
use tpms_evolver::EvolverError;
use tpms_geometry::GeometryError;
use tpms_mesh::MeshError;
use tpms_period::PeriodError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<PeriodError> for CliError {
    fn from(e: PeriodError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        match e {
            MeshError::ZeroResolution => CliError::Usage(e.to_string()),
            MeshError::Io(source) => CliError::Io {
                path: String::new(),
                source,
            },
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Parse { .. } | GeometryError::Json(_) => CliError::Input(e.to_string()),
            GeometryError::Io(source) => CliError::Io {
                path: String::new(),
                source,
            },
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<EvolverError> for CliError {
    fn from(e: EvolverError) -> Self {
        match e {
            EvolverError::Parse { .. }
            | EvolverError::DanglingEdge { .. }
            | EvolverError::DegenerateCell(_)
            | EvolverError::LowDegree { .. }
            | EvolverError::Empty => CliError::Input(e.to_string()),
            EvolverError::Io(source) => CliError::Io {
                path: String::new(),
                source,
            },
            other => CliError::Numerical(other.to_string()),
        }
    }
}
