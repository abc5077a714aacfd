//! Locating and loading input files.
//!
//! An argument that names an existing file is used as is. Otherwise a bare
//! name is looked up in the fixture directory, trying `.msf` and then `.pos`
//! when it has no extension. The fixture directory is `$MSFLOW_FIXTURES` if
//! set, else the `fixtures/` directory shipped with this crate.

use std::env;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use msflow_core::{ChoiceDescriptor, FlowSystem, LabeledPoset};
use thiserror::Error;

use crate::{msc, msf, pos};

pub const ENV_VAR: &str = "MSFLOW_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    match env::var_os(ENV_VAR) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

pub fn resolve(arg: &str) -> PathBuf {
    let direct = PathBuf::from(arg);
    if direct.is_file() || arg.contains(['/', '\\']) {
        return direct;
    }
    let dir = fixture_dir();
    let mut candidates = vec![dir.join(arg)];
    if direct.extension().is_none() {
        candidates.push(dir.join(format!("{arg}.msf")));
        candidates.push(dir.join(format!("{arg}.pos")));
    }
    candidates.into_iter().find(|p| p.is_file()).unwrap_or(direct)
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Msf { path: String, source: msf::MsfError },
    #[error("{path}: {source}")]
    Pos { path: String, source: pos::PosError },
    #[error("{path}: {source}")]
    Msc { path: String, source: msc::MscError },
}

#[derive(Debug, Clone)]
pub enum Input {
    System(FlowSystem),
    Poset(LabeledPoset),
}

/// A parsed input together with a short name for reports (the file stem).
#[derive(Debug, Clone)]
pub struct Loaded {
    pub name: String,
    pub path: PathBuf,
    pub input: Input,
}

fn read(arg: &str) -> Result<(PathBuf, String), LoadError> {
    let path = resolve(arg);
    let text = fs::read_to_string(&path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok((path, text))
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Loads a `.pos` file as a poset and anything else as a system.
pub fn load(arg: &str) -> Result<Loaded, LoadError> {
    let (path, text) = read(arg)?;
    let shown = path.display().to_string();
    let input = if path.extension().is_some_and(|e| e == "pos") {
        Input::Poset(pos::parse(&text).map_err(|source| LoadError::Pos { path: shown, source })?)
    } else {
        Input::System(msf::parse(&text).map_err(|source| LoadError::Msf { path: shown, source })?)
    };
    Ok(Loaded {
        name: stem(&path),
        path,
        input,
    })
}

pub fn load_system(arg: &str) -> Result<(String, FlowSystem), LoadError> {
    let (path, text) = read(arg)?;
    let s = msf::parse(&text).map_err(|source| LoadError::Msf {
        path: path.display().to_string(),
        source,
    })?;
    Ok((stem(&path), s))
}

pub fn load_choices(arg: &str) -> Result<Vec<ChoiceDescriptor>, LoadError> {
    let (path, text) = read(arg)?;
    msc::parse(&text).map_err(|source| LoadError::Msc {
        path: path.display().to_string(),
        source,
    })
}
