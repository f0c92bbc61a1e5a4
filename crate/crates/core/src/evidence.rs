//! Factors, predicates and evidence multisets.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::{multinomial_coefficient, Multiset};
use crate::scalar::Scalar;
use crate::space::SampleSpace;

/// A non-negative function on a finite space. A predicate when bounded by 1.
#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    space: SampleSpace,
    values: Vec<Scalar>,
}

impl Factor {
    pub fn new(space: &SampleSpace, values: Vec<Scalar>) -> Result<Factor> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} values for a space of {} elements",
                values.len(),
                space.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative() || !v.to_f64().is_finite()) {
            return Err(Error::NegativeValue(v.to_string()));
        }
        Ok(Factor { space: space.clone(), values })
    }

    /// Missing elements get value 0.
    pub fn from_pairs<S: AsRef<str>>(space: &SampleSpace, pairs: &[(S, Scalar)]) -> Result<Factor> {
        let mut v = vec![Scalar::zero(); space.len()];
        for (x, r) in pairs {
            v[space.index_of(x.as_ref())?] = r.clone();
        }
        Factor::new(space, v)
    }

    pub(crate) fn from_trusted(space: SampleSpace, values: Vec<Scalar>) -> Factor {
        Factor { space, values }
    }

    pub fn constant(space: &SampleSpace, s: Scalar) -> Result<Factor> {
        Factor::new(space, vec![s; space.len()])
    }

    pub fn truth(space: &SampleSpace) -> Factor {
        Factor::from_trusted(space.clone(), vec![Scalar::one(); space.len()])
    }

    pub fn falsity(space: &SampleSpace) -> Factor {
        Factor::from_trusted(space.clone(), vec![Scalar::zero(); space.len()])
    }

    /// Sharp indicator `1_U`.
    pub fn indicator<S: AsRef<str>>(subset: &[S], space: &SampleSpace) -> Result<Factor> {
        let mut f = Factor::falsity(space);
        for x in subset {
            f.values[space.index_of(x.as_ref())?] = Scalar::one();
        }
        Ok(f)
    }

    pub fn point_pred(x: &str, space: &SampleSpace) -> Result<Factor> {
        Factor::indicator(&[x], space)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn at(&self, i: usize) -> &Scalar {
        &self.values[i]
    }

    pub fn value(&self, x: &str) -> Result<&Scalar> {
        Ok(&self.values[self.space.index_of(x)?])
    }

    pub fn is_predicate(&self) -> bool {
        self.values.iter().all(|v| *v <= Scalar::one())
    }

    pub fn is_sharp(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }

    pub fn to_float(&self) -> Factor {
        Factor::from_trusted(self.space.clone(), self.values.iter().map(Scalar::to_float).collect())
    }

    fn zip_with(&self, other: &Factor, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Factor> {
        self.space.ensure_same(&other.space)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(Factor::from_trusted(self.space.clone(), values))
    }

    /// Pointwise product `p & q`.
    pub fn conj(&self, other: &Factor) -> Result<Factor> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Pointwise sum `p + q`.
    pub fn add(&self, other: &Factor) -> Result<Factor> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `s·p` for `s ≥ 0`.
    pub fn scale(&self, s: &Scalar) -> Result<Factor> {
        if s.is_negative() {
            return Err(Error::NegativeValue(s.to_string()));
        }
        Ok(Factor::from_trusted(self.space.clone(), self.values.iter().map(|v| v * s).collect()))
    }

    /// Orthosupplement `p⊥ = 1 − p`; only for predicates.
    pub fn ortho(&self) -> Result<Factor> {
        if let Some(v) = self.values.iter().find(|v| **v > Scalar::one()) {
            return Err(Error::NotAPredicate(v.to_string()));
        }
        Ok(Factor::from_trusted(self.space.clone(), self.values.iter().map(|v| Scalar::one() - v).collect()))
    }

    /// `p^n` as an n-fold conjunction; `p^0` is truth.
    pub fn pow(&self, n: u64) -> Factor {
        Factor::from_trusted(self.space.clone(), self.values.iter().map(|v| v.pow(n)).collect())
    }

    /// Parallel conjunction `p ⊗ q` on the product space.
    pub fn tensor_factor(&self, other: &Factor) -> Result<Factor> {
        Factor::tensor_all(&[self.clone(), other.clone()])
    }

    pub fn tensor_all(factors: &[Factor]) -> Result<Factor> {
        let spaces: Vec<SampleSpace> = factors.iter().map(|f| f.space.clone()).collect();
        let space = SampleSpace::product(&spaces)?;
        let values = (0..space.len())
            .map(|i| space.coords(i).iter().zip(factors).map(|(&c, f)| &f.values[c]).product())
            .collect();
        Ok(Factor::from_trusted(space, values))
    }
}

impl PartialEq for Factor {
    /// Same space and pointwise equal values.
    fn eq(&self, other: &Factor) -> bool {
        self.space.same(&other.space) && self.values == other.values
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}|{}>", v, self.space.label(i)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Deserialize)]
struct RawFactor {
    space: SampleSpace,
    values: Vec<Scalar>,
}

impl<'de> Deserialize<'de> for Factor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Factor, D::Error> {
        let raw = RawFactor::deserialize(d)?;
        Factor::new(&raw.space, raw.values).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchStatus {
    NoMatch,
    Match,
    PerfectMatch,
}

/// A multiset of factors on one space. Factors are keyed by pointwise
/// equality and kept in insertion order; zero multiplicities are dropped.
#[derive(Clone, Debug)]
pub struct Evidence {
    space: SampleSpace,
    items: Vec<(Factor, u64)>,
}

#[derive(Serialize, Deserialize)]
struct EvidenceEntry {
    factor: Factor,
    count: u64,
}

impl Evidence {
    pub fn empty(space: &SampleSpace) -> Evidence {
        Evidence { space: space.clone(), items: Vec::new() }
    }

    /// Evidence from `(factor, count)` pairs; needs at least one pair to fix the space.
    pub fn new(pairs: Vec<(Factor, u64)>) -> Result<Evidence> {
        let space = pairs.first().ok_or(Error::EmptyEvidence)?.0.space.clone();
        let mut e = Evidence::empty(&space);
        for (f, n) in pairs {
            e.insert(f, n)?;
        }
        Ok(e)
    }

    /// Convenience: `n|p⟩`.
    pub fn single(p: &Factor, n: u64) -> Evidence {
        let mut e = Evidence::empty(&p.space);
        if n > 0 {
            e.items.push((p.clone(), n));
        }
        e
    }

    /// Point evidence `Σ φ(x)|1_x⟩` from a multiset over the space.
    pub fn point(phi: &Multiset) -> Evidence {
        let space = phi.space();
        let mut e = Evidence::empty(space);
        for i in phi.support() {
            let f = Factor::point_pred(space.label(i), space).expect("label from space");
            e.items.push((f, phi.counts()[i]));
        }
        e
    }

    pub fn insert(&mut self, f: Factor, n: u64) -> Result<()> {
        self.space.ensure_same(&f.space)?;
        if n == 0 {
            return Ok(());
        }
        match self.items.iter_mut().find(|(g, _)| *g == f) {
            Some((_, c)) => *c += n,
            None => self.items.push((f, n)),
        }
        Ok(())
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    /// Support factors with their multiplicities, in insertion order.
    pub fn items(&self) -> &[(Factor, u64)] {
        &self.items
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.items.iter().map(|(f, _)| f)
    }

    pub fn count(&self, f: &Factor) -> u64 {
        self.items.iter().find(|(g, _)| g == f).map_or(0, |(_, n)| *n)
    }

    /// ‖ψ‖.
    pub fn size(&self) -> u64 {
        self.items.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn coefm(&self) -> BigUint {
        let counts: Vec<u64> = self.items.iter().map(|(_, n)| *n).collect();
        multinomial_coefficient(&counts)
    }

    /// `Flrn(ψ)` as factor weights `ψ(p)/‖ψ‖`.
    pub fn flrn(&self) -> Result<Vec<(Factor, Scalar)>> {
        if self.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let k = self.size() as i64;
        Ok(self.items.iter().map(|(f, n)| (f.clone(), Scalar::ratio(*n as i64, k))).collect())
    }

    /// `ψ + χ`.
    pub fn add(&self, other: &Evidence) -> Result<Evidence> {
        self.space.ensure_same(&other.space)?;
        let mut e = self.clone();
        for (f, n) in &other.items {
            e.insert(f.clone(), *n)?;
        }
        Ok(e)
    }

    /// `n·ψ`.
    pub fn scale(&self, n: u64) -> Evidence {
        let mut e = Evidence::empty(&self.space);
        if n > 0 {
            e.items = self.items.iter().map(|(f, c)| (f.clone(), c * n)).collect();
        }
        e
    }

    /// `&ψ = Π_p p^ψ(p)`, pointwise.
    pub fn and_conj(&self) -> Result<Factor> {
        if self.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let mut acc = Factor::truth(&self.space);
        for (f, n) in &self.items {
            acc = acc.conj(&f.pow(*n))?;
        }
        Ok(acc)
    }

    /// `⊗ψ` on `X^K`, factors laid out in evidence order.
    pub fn tensor_conj(&self) -> Result<Factor> {
        if self.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        self.space.power(self.size() as usize)?;
        let seq: Vec<Factor> =
            self.items.iter().flat_map(|(f, n)| std::iter::repeat_n(f.clone(), *n as usize)).collect();
        Factor::tensor_all(&seq)
    }

    /// `&(Flrn ψ) = Π_p p^{ψ(p)/‖ψ‖}` in float mode, with `0^t = 0`.
    pub fn frac_conj(&self) -> Result<Factor> {
        let w = self.flrn()?;
        let values = (0..self.space.len())
            .map(|i| {
                let mut acc = 1.0f64;
                for (f, r) in &w {
                    let v = f.values[i].to_f64();
                    if v == 0.0 {
                        return Scalar::Float(0.0);
                    }
                    acc *= v.powf(r.to_f64());
                }
                Scalar::Float(acc)
            })
            .collect();
        Ok(Factor::from_trusted(self.space.clone(), values))
    }

    /// Sum over the support factors (multiplicities ignored) against 1.
    pub fn match_status(&self) -> MatchStatus {
        let mut sum = Factor::falsity(&self.space);
        for f in self.factors() {
            sum = sum.add(f).expect("same space");
        }
        if sum.values.iter().all(Scalar::is_one) {
            MatchStatus::PerfectMatch
        } else if sum.is_predicate() {
            MatchStatus::Match
        } else {
            MatchStatus::NoMatch
        }
    }
}

impl PartialEq for Evidence {
    /// Multiset equality: insertion order is irrelevant.
    fn eq(&self, other: &Evidence) -> bool {
        self.space.same(&other.space)
            && self.items.len() == other.items.len()
            && self.items.iter().all(|(f, n)| other.count(f) == *n)
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|(p, n)| {
                let vals: Vec<String> = p.values.iter().map(Scalar::to_string).collect();
                format!("{n}|({})>", vals.join(", "))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for Evidence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<EvidenceEntry> =
            self.items.iter().map(|(f, n)| EvidenceEntry { factor: f.clone(), count: *n }).collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Evidence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Evidence, D::Error> {
        let entries = Vec::<EvidenceEntry>::deserialize(d)?;
        Evidence::new(entries.into_iter().map(|e| (e.factor, e.count)).collect()).map_err(serde::de::Error::custom)
    }
}
