//! Natural-number multisets, accumulation and frequentist learning.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::space::{check_size, SampleSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiset {
    space: SampleSpace,
    counts: Vec<u64>,
}

impl Multiset {
    pub fn empty(space: &SampleSpace) -> Self {
        Multiset { space: space.clone(), counts: vec![0; space.len()] }
    }

    /// Counts given in space order.
    pub fn from_counts(space: &SampleSpace, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != space.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} counts for a space of {} elements",
                counts.len(),
                space.len()
            )));
        }
        Ok(Multiset { space: space.clone(), counts })
    }

    pub fn from_pairs<S: AsRef<str>>(space: &SampleSpace, pairs: &[(S, u64)]) -> Result<Self> {
        let mut m = Multiset::empty(space);
        for (x, n) in pairs {
            m.counts[space.index_of(x.as_ref())?] += n;
        }
        Ok(m)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, x: &str) -> Result<u64> {
        Ok(self.counts[self.space.index_of(x)?])
    }

    /// ‖φ‖.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.counts.len()).filter(|&i| self.counts[i] > 0)
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn add(&self, other: &Multiset) -> Result<Multiset> {
        self.space.ensure_same(&other.space)?;
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Ok(Multiset { space: self.space.clone(), counts })
    }

    /// `n·φ`.
    pub fn scale(&self, n: u64) -> Multiset {
        Multiset { space: self.space.clone(), counts: self.counts.iter().map(|c| c * n).collect() }
    }

    /// Frequentist learning: normalise to a distribution.
    pub fn flrn(&self) -> Result<Dist> {
        let k = self.size();
        if k == 0 {
            return Err(Error::EmptyMultiset);
        }
        let k = k as i64;
        let w = self.counts.iter().map(|&c| Scalar::ratio(c as i64, k)).collect();
        Ok(Dist::from_trusted(self.space.clone(), w))
    }

    /// Multinomial coefficient ‖φ‖! / Π φ(x)!.
    pub fn coefm(&self) -> BigUint {
        multinomial_coefficient(&self.counts)
    }

    /// Canonical ket label, e.g. `2|a> + 1|b>`; the empty multiset is `0`.
    pub fn label(&self) -> String {
        let parts: Vec<String> =
            self.support().map(|i| format!("{}|{}>", self.counts[i], self.space.label(i))).collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Accumulate a sequence into a multiset.
pub fn acc<S: AsRef<str>>(seq: &[S], space: &SampleSpace) -> Result<Multiset> {
    let mut m = Multiset::empty(space);
    for x in seq {
        m.counts[space.index_of(x.as_ref())?] += 1;
    }
    Ok(m)
}

/// `(Σ n_i)! / Π n_i!`.
pub fn multinomial_coefficient(counts: &[u64]) -> BigUint {
    let total: u64 = counts.iter().sum();
    let denom = counts.iter().fold(BigUint::one(), |acc, &c| acc * factorial(c));
    factorial(total) / denom
}

/// `C(n+k-1, k)`: the number of size-`k` multisets over `n` elements.
pub fn count_multisets(n: usize, k: u64) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::from(0u32) };
    }
    let top = factorial(n as u64 + k - 1);
    top / (factorial(k) * factorial(n as u64 - 1))
}

/// All multisets of size `k`, in lexicographic order of their count vectors
/// (largest first, so `{a,b}`, 2 gives `2|a>, 1|a>+1|b>, 2|b>`).
pub fn enumerate_multisets(space: &SampleSpace, k: u64) -> Vec<Multiset> {
    let n = space.len();
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Multiset::empty(space));
        }
        return out;
    }
    let mut counts = vec![0u64; n];
    fn rec(pos: usize, left: u64, counts: &mut [u64], space: &SampleSpace, out: &mut Vec<Multiset>) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            out.push(Multiset { space: space.clone(), counts: counts.to_vec() });
            return;
        }
        for c in (0..=left).rev() {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, space, out);
        }
    }
    rec(0, k, &mut counts, space, &mut out);
    out
}

/// The space Mlt[k](X) with multiset labels, plus the multisets in space order.
pub fn multiset_space(space: &SampleSpace, k: u64) -> Result<(SampleSpace, Vec<Multiset>)> {
    let n = count_multisets(space.len(), k).to_u128().unwrap_or(u128::MAX);
    check_size(n)?;
    let ms = enumerate_multisets(space, k);
    let s = SampleSpace::new(ms.iter().map(Multiset::label))?;
    Ok((s, ms))
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// One entry of a serialized multiset.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountEntry {
    pub element: String,
    pub count: u64,
}

impl Serialize for Multiset {
    /// List of `{element, count}` over the support, in space order.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(None)?;
        for i in self.support() {
            seq.serialize_element(&CountEntry {
                element: self.space.label(i).to_string(),
                count: self.counts[i],
            })?;
        }
        seq.end()
    }
}
