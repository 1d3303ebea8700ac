use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::label::Label;

/// A finite label sequence addressing a node from the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Path(Vec<Label>);

/// Text used for the empty path.
pub const ROOT_TEXT: &str = "()";

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Path {
        Path(labels.into_iter().collect())
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All labels but the last; `None` at the root.
    pub fn init(&self) -> Option<Path> {
        let (_, rest) = self.0.split_last()?;
        Some(Path(rest.to_vec()))
    }

    pub fn last(&self) -> Option<Label> {
        self.0.last().copied()
    }

    pub fn child(&self, label: Label) -> Path {
        let mut labels = self.0.clone();
        labels.push(label);
        Path(labels)
    }

    pub fn join(&self, downs: &[Label]) -> Path {
        let mut labels = self.0.clone();
        labels.extend_from_slice(downs);
        Path(labels)
    }

    pub fn prefix(&self, len: usize) -> Path {
        Path(self.0[..len].to_vec())
    }

    pub fn starts_with(&self, other: &Path) -> bool {
        self.0.starts_with(&other.0)
    }

    /// The labels after `prefix`, if `prefix` is one.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<&[Label]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(ROOT_TEXT);
        }
        for (i, label) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(label.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid path `{0}`")]
pub struct PathParseError(pub String);

impl FromStr for Path {
    type Err = PathParseError;

    /// Accepts `()` or the empty string for the root, otherwise dotted identifiers.
    fn from_str(text: &str) -> Result<Path, PathParseError> {
        let text = text.trim();
        if text.is_empty() || text == ROOT_TEXT {
            return Ok(Path::root());
        }
        text.split('.')
            .map(|part| {
                if Label::is_identifier(part) {
                    Ok(Label::new(part))
                } else {
                    Err(PathParseError(text.to_owned()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Builds a path from dotted text. Panics on malformed input, so it is meant
/// for literals in tests and fixtures.
pub fn path(text: &str) -> Path {
    text.parse().unwrap_or_else(|e| panic!("{e}"))
}
