//! Finite carrier spaces.
//!
//! A [`Space`] is a named, ordered list of element labels. Product spaces keep
//! their two factors so that projections can be recovered; elements of
//! `A × B` are laid out row-major, i.e. the pair `(i, j)` sits at index
//! `i * |B| + j`. Every category in this crate uses that layout.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    name: String,
    labels: Vec<String>,
    factors: Option<(Space, Space)>,
}

/// A finite, ordered, named set of elements. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct Space(Arc<SpaceInner>);

impl Space {
    pub fn new<S: Into<String>>(name: impl Into<String>, labels: Vec<S>) -> Result<Self> {
        let name = name.into();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace(format!(
                "space `{name}` has no elements"
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpace(format!(
                "space `{name}` repeats label `{}`",
                w[0]
            )));
        }
        Ok(Space(Arc::new(SpaceInner {
            name,
            labels,
            factors: None,
        })))
    }

    /// A space named `name` with labels `{prefix}1 .. {prefix}n`.
    pub fn indexed(name: &str, prefix: &str, n: usize) -> Result<Self> {
        Space::new(name, (1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    /// The distinguished one-point space, terminal in every finite category.
    pub fn terminal() -> Self {
        Space(Arc::new(SpaceInner {
            name: "Z".into(),
            labels: vec!["*".into()],
            factors: None,
        }))
    }

    /// The product `first × second` in the canonical row-major layout.
    pub fn product(first: &Space, second: &Space) -> Self {
        let mut labels = Vec::with_capacity(first.len() * second.len());
        for a in first.labels() {
            for b in second.labels() {
                labels.push(format!("({a},{b})"));
            }
        }
        Space(Arc::new(SpaceInner {
            name: format!("({}×{})", first.name(), second.name()),
            labels,
            factors: Some((first.clone(), second.clone())),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    /// Always false: spaces have at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement {
                space: self.name().to_string(),
                element: label.to_string(),
            })
    }

    pub fn factors(&self) -> Result<(&Space, &Space)> {
        self.0
            .factors
            .as_ref()
            .map(|(a, b)| (a, b))
            .ok_or_else(|| Error::NotAProduct(self.name().to_string()))
    }

    pub fn is_product(&self) -> bool {
        self.0.factors.is_some()
    }

    /// Index of the pair `(i, j)` in `self = A × B`, where `|B| = inner`.
    #[inline]
    pub fn pair_index(i: usize, j: usize, inner: usize) -> usize {
        i * inner + j
    }

    pub fn ensure_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                expected: self.name().to_string(),
                found: other.name().to_string(),
            })
        }
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name(), self.labels())
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
