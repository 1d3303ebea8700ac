//! Surface syntax, scope resolution, and the resolved program tree.

mod ast;
mod label;
mod parse;
mod path;
mod render;
mod resolve;

pub use ast::{CoreProgram, Record, Reference, SurfaceElement, SurfaceProgram, SurfaceRecord, SurfaceRef};
pub use label::{well_known, Label};
pub use parse::{parse, ParseError};
pub use path::{path, Path, PathParseError, ROOT_TEXT};
pub use render::{render, render_surface};
pub use resolve::{resolve_references, ResolutionError};

/// Parses and resolves in one step.
pub fn load(src: &str) -> Result<CoreProgram, LoadError> {
    Ok(resolve_references(&parse(src)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}
