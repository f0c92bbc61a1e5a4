//! Kullback–Leibler divergence.

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `DKL(σ, ρ) = Σ_x σ(x)·ln(σ(x)/ρ(x))` in nats, with `0·ln 0 = 0`.
///
/// Support inclusion is checked on the stored (possibly exact) weights.
pub fn kl_divergence(sigma: &Dist, rho: &Dist) -> Result<Scalar> {
    sigma.space().ensure_same(rho.space())?;
    let mut acc = 0.0;
    for i in sigma.support() {
        let s = sigma.at(i);
        let r = rho.at(i);
        if !r.is_positive() {
            return Err(Error::SupportViolation(format!(
                "element `{}` has weight {s} in the first distribution but 0 in the second",
                sigma.space().label(i)
            )));
        }
        acc += s.to_f64() * (s / r).ln()?.to_f64();
    }
    // rounding can leave a tiny negative residue for (near-)equal inputs
    Ok(Scalar::Float(acc.max(0.0)))
}

/// [`kl_divergence`] measured in bits (base-2 logarithm).
pub fn kl_divergence_bits(sigma: &Dist, rho: &Dist) -> Result<Scalar> {
    Ok(Scalar::Float(kl_divergence(sigma, rho)?.to_f64() / std::f64::consts::LN_2))
}

/// `σ ⊨ DKL(ρ, c(−)) = Σ_z σ(z)·DKL(ρ, c(z))`, a lower-bounded by `DKL(ρ, c ≫ σ)`.
pub fn expected_channel_divergence(sigma: &Dist, rho: &Dist, c: &Channel) -> Result<Scalar> {
    sigma.space().ensure_same(c.dom())?;
    let mut acc = 0.0;
    for z in sigma.support() {
        acc += sigma.at(z).to_f64() * kl_divergence(rho, c.row(z))?.to_f64();
    }
    Ok(Scalar::Float(acc))
}
