use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest product space any operation will materialize.
pub const SIZE_LIMIT: u128 = 1_000_000;

/// A finite, ordered set of distinct string labels.
///
/// Cheap to clone. Product spaces remember their components so elements can
/// be decoded back into coordinates; their labels are the component labels
/// joined with `,` (so `H,T` is the pair `(H, T)`).
#[derive(Clone)]
pub struct SampleSpace(Arc<Inner>);

struct Inner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    parts: Vec<SampleSpace>,
}

impl SampleSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::build(labels.into_iter().map(Into::into).collect(), Vec::new())
    }

    fn build(labels: Vec<String>, parts: Vec<SampleSpace>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        Ok(SampleSpace(Arc::new(Inner { labels, index, parts })))
    }

    /// Cartesian product in lexicographic order (first component varies slowest).
    pub fn product(spaces: &[SampleSpace]) -> Result<Self> {
        let size = spaces.iter().map(|s| s.len() as u128).product::<u128>();
        check_size(size)?;
        let mut labels = vec![String::new()];
        for (k, s) in spaces.iter().enumerate() {
            let mut next = Vec::with_capacity(labels.len() * s.len());
            for prefix in &labels {
                for l in s.labels() {
                    next.push(if k == 0 { l.clone() } else { format!("{prefix},{l}") });
                }
            }
            labels = next;
        }
        if spaces.is_empty() {
            labels = vec!["()".to_string()];
        }
        Self::build(labels, spaces.to_vec())
    }

    /// `X^n`.
    pub fn power(&self, n: usize) -> Result<Self> {
        let size = (self.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        check_size(size)?;
        Self::product(&vec![self.clone(); n])
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.index.contains_key(label)
    }

    /// Components of a product space (empty for a base space).
    pub fn parts(&self) -> &[SampleSpace] {
        &self.0.parts
    }

    /// Coordinates of element `i` of a product space.
    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        let parts = self.parts();
        let mut out = vec![0; parts.len()];
        for k in (0..parts.len()).rev() {
            let n = parts[k].len();
            out[k] = i % n;
            i /= n;
        }
        out
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn index_of_coords(&self, coords: &[usize]) -> usize {
        self.parts()
            .iter()
            .zip(coords)
            .fold(0, |acc, (s, &c)| acc * s.len() + c)
    }

    pub fn same(&self, other: &SampleSpace) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }

    pub(crate) fn ensure_same(&self, other: &SampleSpace) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("{self} vs {other}")))
        }
    }
}

pub(crate) fn check_size(size: u128) -> Result<()> {
    if size > SIZE_LIMIT {
        Err(Error::SizeLimit { size, limit: SIZE_LIMIT })
    } else {
        Ok(())
    }
}

impl PartialEq for SampleSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for SampleSpace {}

impl fmt::Debug for SampleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels()).finish()
    }
}

impl fmt::Display for SampleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

impl Serialize for SampleSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampleSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(d)?;
        SampleSpace::new(labels).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            SampleSpace::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateElement("a".into())
        );
    }

    #[test]
    fn product_order_and_coords() {
        let c = SampleSpace::new(["H", "T"]).unwrap();
        let p = SampleSpace::product(&[c.clone(), c.clone()]).unwrap();
        assert_eq!(p.labels(), ["H,H", "H,T", "T,H", "T,T"]);
        for i in 0..p.len() {
            assert_eq!(p.index_of_coords(&p.coords(i)), i);
        }
        assert_eq!(p.coords(2), vec![1, 0]);
    }

    #[test]
    fn size_guard() {
        let s = SampleSpace::new((0..10).map(|i| i.to_string())).unwrap();
        assert!(s.power(6).is_ok());
        assert!(matches!(s.power(7), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn lookup() {
        let s = SampleSpace::new(["d", "~d"]).unwrap();
        assert_eq!(s.index_of("~d").unwrap(), 1);
        assert_eq!(s.index_of("x").unwrap_err(), Error::UnknownElement("x".into()));
    }
}
