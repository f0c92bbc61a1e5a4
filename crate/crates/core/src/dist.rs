//! Finite discrete distributions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::{multiset_space, Multiset};
use crate::scalar::Scalar;
use crate::space::SampleSpace;

/// Tolerance on the total mass of float-mode distributions.
pub const FLOAT_MASS_TOL: f64 = 1e-9;

/// A probability distribution on a finite sample space. Weights are stored
/// for every element, zeros included.
#[derive(Clone, Debug, Serialize)]
pub struct Dist {
    space: SampleSpace,
    weights: Vec<Scalar>,
}

impl Dist {
    /// Validating constructor: non-negative weights summing to one (exactly
    /// when all weights are exact, otherwise within [`FLOAT_MASS_TOL`]).
    pub fn new(space: &SampleSpace, weights: Vec<Scalar>) -> Result<Dist> {
        if weights.len() != space.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for a space of {} elements",
                weights.len(),
                space.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative() || !w.to_f64().is_finite()) {
            return Err(Error::InvalidDistribution(format!("weight {w} is not a probability")));
        }
        let total: Scalar = weights.iter().sum();
        let ok = if total.is_exact() {
            total.is_one()
        } else {
            (total.to_f64() - 1.0).abs() <= FLOAT_MASS_TOL
        };
        if !ok {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Dist { space: space.clone(), weights })
    }

    /// Build from `(label, weight)` pairs; missing elements get weight 0.
    pub fn from_pairs<S: AsRef<str>>(space: &SampleSpace, pairs: &[(S, Scalar)]) -> Result<Dist> {
        let mut w = vec![Scalar::zero(); space.len()];
        for (x, r) in pairs {
            let i = space.index_of(x.as_ref())?;
            w[i] = &w[i] + r;
        }
        Dist::new(space, w)
    }

    pub(crate) fn from_trusted(space: SampleSpace, weights: Vec<Scalar>) -> Dist {
        debug_assert_eq!(space.len(), weights.len());
        Dist { space, weights }
    }


    pub fn dirac(x: &str, space: &SampleSpace) -> Result<Dist> {
        let i = space.index_of(x)?;
        let mut w = vec![Scalar::zero(); space.len()];
        w[i] = Scalar::one();
        Ok(Dist::from_trusted(space.clone(), w))
    }

    pub fn uniform(space: &SampleSpace) -> Result<Dist> {
        if space.is_empty() {
            return Err(Error::InvalidDistribution("uniform on an empty space".into()));
        }
        let n = space.len() as i64;
        Ok(Dist::from_trusted(space.clone(), vec![Scalar::ratio(1, n); space.len()]))
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weight(&self, x: &str) -> Result<&Scalar> {
        Ok(&self.weights[self.space.index_of(x)?])
    }

    pub fn at(&self, i: usize) -> &Scalar {
        &self.weights[i]
    }

    /// Indices with strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i].is_positive()).collect()
    }

    pub fn is_dirac(&self) -> bool {
        self.support().len() == 1
    }

    pub fn is_exact(&self) -> bool {
        self.weights.iter().all(Scalar::is_exact)
    }

    pub fn to_float(&self) -> Dist {
        Dist::from_trusted(self.space.clone(), self.weights.iter().map(Scalar::to_float).collect())
    }

    /// Pointwise comparison within `tol`, on the union of both spaces.
    pub fn approx_eq(&self, other: &Dist, tol: f64) -> bool {
        self.union_pairs(other).iter().all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest pointwise absolute difference.
    pub fn max_abs_diff(&self, other: &Dist) -> f64 {
        self.union_pairs(other)
            .iter()
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    fn union_pairs(&self, other: &Dist) -> Vec<(Scalar, Scalar)> {
        if self.space.same(&other.space) {
            return self.weights.iter().cloned().zip(other.weights.iter().cloned()).collect();
        }
        let get = |d: &Dist, l: &str| {
            d.space.index_of(l).map(|i| d.weights[i].clone()).unwrap_or_else(|_| Scalar::zero())
        };
        let mut labels: Vec<&str> = self.space.labels().iter().map(String::as_str).collect();
        labels.extend(other.space.labels().iter().map(String::as_str).filter(|l| !self.space.contains(l)));
        labels.iter().map(|l| (get(self, l), get(other, l))).collect()
    }

    /// `Σ r_i·ω_i`.
    pub fn convex_sum(weights: &[Scalar], dists: &[Dist]) -> Result<Dist> {
        if weights.len() != dists.len() || dists.is_empty() {
            return Err(Error::WeightsNotConvex(format!(
                "{} weights for {} distributions",
                weights.len(),
                dists.len()
            )));
        }
        if weights.iter().any(Scalar::is_negative) {
            return Err(Error::WeightsNotConvex("negative weight".into()));
        }
        let total: Scalar = weights.iter().sum();
        let ok = if total.is_exact() { total.is_one() } else { total.approx_eq(&Scalar::one(), FLOAT_MASS_TOL) };
        if !ok {
            return Err(Error::WeightsNotConvex(format!("weights sum to {total}")));
        }
        let space = dists[0].space.clone();
        for d in &dists[1..] {
            space.ensure_same(&d.space)?;
        }
        let mut out = vec![Scalar::zero(); space.len()];
        for (r, d) in weights.iter().zip(dists) {
            if r.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(&d.weights) {
                *o = &*o + &(r * w);
            }
        }
        Ok(Dist::from_trusted(space, out))
    }

    /// `ω ⊗ ρ` on the product space.
    pub fn tensor(&self, other: &Dist) -> Result<Dist> {
        Dist::tensor_all(&[self.clone(), other.clone()])
    }

    /// `ω_1 ⊗ … ⊗ ω_n`.
    pub fn tensor_all(dists: &[Dist]) -> Result<Dist> {
        let spaces: Vec<SampleSpace> = dists.iter().map(|d| d.space.clone()).collect();
        let space = SampleSpace::product(&spaces)?;
        let weights = (0..space.len())
            .map(|i| space.coords(i).iter().zip(dists).map(|(&c, d)| &d.weights[c]).product())
            .collect();
        Ok(Dist::from_trusted(space, weights))
    }

    /// `ω^{⊗n}`.
    pub fn tensor_power(&self, n: usize) -> Result<Dist> {
        self.space.power(n)?;
        Dist::tensor_all(&vec![self.clone(); n])
    }

    /// `D(f)(ω)`: push forward along a function, merging weights by addition.
    /// `f` is only consulted on the support.
    pub fn push_function<F>(&self, codomain: &SampleSpace, f: F) -> Result<Dist>
    where
        F: Fn(&str) -> String,
    {
        self.push_indices(codomain, |i| codomain.index_of(&f(self.space.label(i))))
    }

    /// Index-level pushforward.
    pub fn push_indices<F>(&self, codomain: &SampleSpace, f: F) -> Result<Dist>
    where
        F: Fn(usize) -> Result<usize>,
    {
        let mut out = vec![Scalar::zero(); codomain.len()];
        for i in self.support() {
            let j = f(i)?;
            out[j] = &out[j] + &self.weights[i];
        }
        Ok(Dist::from_trusted(codomain.clone(), out))
    }

    /// Marginal on component `k` of a product space.
    pub fn marginal(&self, k: usize) -> Result<Dist> {
        let parts = self.space.parts();
        let target = parts
            .get(k)
            .ok_or_else(|| Error::SpaceMismatch(format!("no component {k} in {}", self.space)))?
            .clone();
        self.push_indices(&target, |i| Ok(self.space.coords(i)[k]))
    }

    /// `D(Δ)(ω)` for the copy map `x ↦ (x, x)`.
    pub fn copy(&self) -> Result<Dist> {
        let pair = self.space.power(2)?;
        self.push_indices(&pair, |i| Ok(pair.index_of_coords(&[i, i])))
    }

    /// `mn[K](ω)` over `Mlt[K](X)`, in enumeration order.
    pub fn multinomial(&self, k: u64) -> Result<Dist> {
        let (space, ms) = multiset_space(&self.space, k)?;
        let weights = ms.iter().map(|m| self.multinomial_prob(m)).collect();
        Ok(Dist::from_trusted(space, weights))
    }

    /// `coefm(φ)·Π ω(x)^φ(x)`.
    pub fn multinomial_prob(&self, phi: &Multiset) -> Scalar {
        let c = Scalar::from_biguint(phi.coefm());
        let p: Scalar = phi.support().map(|i| self.weights[i].pow(phi.counts()[i])).product();
        c * p
    }
}

impl PartialEq for Dist {
    /// Exact pointwise equality on the union of the two spaces.
    fn eq(&self, other: &Dist) -> bool {
        self.union_pairs(other).iter().all(|(a, b)| a == b)
    }
}

impl fmt::Display for Dist {
    /// Kets over the support, e.g. `27/635|d> + 608/635|~d>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.support().iter().map(|&i| format!("{}|{}>", self.weights[i], self.space.label(i))).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Deserialize)]
struct RawDist {
    space: SampleSpace,
    weights: Vec<Scalar>,
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Dist, D::Error> {
        let raw = RawDist::deserialize(d)?;
        Dist::new(&raw.space, raw.weights).map_err(serde::de::Error::custom)
    }
}
