use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use serde::{Serialize, Serializer};

/// An interned record label.
///
/// Equal texts share one allocation, so equality and hashing work on the
/// pointer. Ordering is by text, which keeps every sorted output stable
/// across runs.
#[derive(Clone, Copy)]
pub struct Label(&'static str);

fn table() -> &'static Mutex<HashSet<&'static str>> {
    static TABLE: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

impl Label {
    pub fn new(text: &str) -> Label {
        let mut set = table().lock().expect("label table poisoned");
        if let Some(existing) = set.get(text) {
            return Label(existing);
        }
        let leaked: &'static str = Box::leak(text.to_owned().into_boxed_str());
        set.insert(leaked);
        Label(leaked)
    }

    pub fn as_str(self) -> &'static str {
        self.0
    }

    /// True for `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn is_identifier(text: &str) -> bool {
        let mut chars = text.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Label {}

impl Hash for Label {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.as_ptr() as usize).hash(state)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Label {
    fn from(text: &str) -> Self {
        Label::new(text)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0)
    }
}

/// Well-known labels produced by the lambda translation.
pub mod well_known {
    use super::Label;

    pub fn argument() -> Label {
        Label::new("argument")
    }

    pub fn result() -> Label {
        Label::new("result")
    }

    pub fn tail_call() -> Label {
        Label::new("tailCall")
    }
}
