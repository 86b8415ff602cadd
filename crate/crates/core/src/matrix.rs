//! Element sets and symmetric similarity matrices.
//!
//! A [`SimilarityMatrix`] stores one value per unordered pair of distinct
//! elements, so symmetry holds by construction and the diagonal is never
//! represented. Values must be nonnegative; everything downstream (objectives,
//! cuts, generating trees) relies on that.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("element set must not be empty")]
    EmptyElementSet,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("entry pairs an element `{0}` with itself")]
    SelfPair(String),
    #[error("conflicting values for the symmetric pair {{{a}, {b}}}")]
    ConflictingEntry { a: String, b: String },
    #[error("negative similarity for the pair {{{a}, {b}}}")]
    NegativeValue { a: String, b: String },
    #[error("subset of elements must not be empty")]
    EmptySubset,
    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Ordered set of distinct element labels; indices `0..n` address them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl ElementSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, MatrixError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(MatrixError::EmptyElementSet);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(MatrixError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// Element set labelled `0, 1, ..., n-1`.
    pub fn indexed(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("indexed labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }
}

/// Symmetric nonnegative similarity table over an [`ElementSet`].
///
/// Stored in condensed form: one slot per unordered pair `{i, j}`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityMatrix<T> {
    elements: ElementSet,
    values: Vec<T>,
}

impl<T: Scalar> SimilarityMatrix<T> {
    /// All-zero matrix over `elements`.
    pub fn zero(elements: ElementSet) -> Self {
        let n = elements.len();
        Self {
            elements,
            values: vec![T::zero(); n * (n - 1) / 2],
        }
    }

    /// Matrix with every off-diagonal entry equal to `value`, over elements
    /// labelled by index.
    pub fn uniform(n: usize, value: T) -> Self {
        let elements = ElementSet::indexed(n);
        let len = n * (n - 1) / 2;
        Self {
            elements,
            values: vec![value; len],
        }
    }

    /// Populate a matrix from pairwise values; `f` is called once per pair
    /// `i < j` and must return nonnegative values.
    pub fn from_fn(
        elements: ElementSet,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self, MatrixError> {
        let n = elements.len();
        let mut values = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                if v < T::zero() {
                    return Err(MatrixError::NegativeValue {
                        a: elements.label(i).to_string(),
                        b: elements.label(j).to_string(),
                    });
                }
                values.push(v);
            }
        }
        Ok(Self { elements, values })
    }

    /// Build a matrix from an explicit label list and sparse pair entries.
    /// Pairs not listed default to zero. A pair may be listed twice only with
    /// an identical value.
    pub fn from_entries(
        labels: &[&str],
        entries: &[(&str, &str, T)],
    ) -> Result<Self, MatrixError> {
        let elements = ElementSet::new(labels.iter().copied())?;
        let mut matrix = Self::zero(elements);
        let mut seen = vec![false; matrix.values.len()];
        for (a, b, v) in entries {
            let i = matrix
                .elements
                .index_of(a)
                .ok_or_else(|| MatrixError::UnknownLabel(a.to_string()))?;
            let j = matrix
                .elements
                .index_of(b)
                .ok_or_else(|| MatrixError::UnknownLabel(b.to_string()))?;
            if i == j {
                return Err(MatrixError::SelfPair(a.to_string()));
            }
            if *v < T::zero() {
                return Err(MatrixError::NegativeValue {
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            let slot = matrix.slot(i, j);
            if seen[slot] && matrix.values[slot] != *v {
                return Err(MatrixError::ConflictingEntry {
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
            seen[slot] = true;
            matrix.values[slot] = v.clone();
        }
        Ok(matrix)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let n = self.elements.len();
        debug_assert!(i < j && j < n);
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Value for the unordered pair `{i, j}`. Panics if `i == j` or either
    /// index is out of range: the diagonal does not exist.
    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i != j, "similarity matrix has no diagonal");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        &self.values[self.slot(i, j)]
    }

    /// Iterate over all pairs `i < j` with their values.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let n = self.elements.len();
        (0..n)
            .flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.get(i, j)))
    }

    /// Largest pairwise value; `None` when there is a single element.
    pub fn max_value(&self) -> Option<&T> {
        self.values.iter().reduce(|acc, v| if v > acc { v } else { acc })
    }

    /// Principal submatrix on `subset` (indices into this matrix's elements).
    /// Surviving elements keep their relative order; values are preserved.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self, MatrixError> {
        if subset.is_empty() {
            return Err(MatrixError::EmptySubset);
        }
        let n = self.elements.len();
        let mut picked = vec![false; n];
        for &i in subset {
            if i >= n {
                return Err(MatrixError::IndexOutOfRange { index: i, len: n });
            }
            picked[i] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&i| picked[i]).collect();
        let elements = ElementSet::new(kept.iter().map(|&i| self.elements.label(i)))?;
        let values = kept
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| kept[a + 1..].iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Ok(Self { elements, values })
    }
}

impl<T: Scalar> fmt::Display for SimilarityMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, v) in self.pairs() {
            writeln!(
                f,
                "{}\t{}\t{}",
                self.elements.label(i),
                self.elements.label(j),
                v
            )?;
        }
        Ok(())
    }
}
