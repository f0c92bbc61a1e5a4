//! Bayesian, Jeffrey, Pearl and free-energy (VFE) updating.

use crate::dist::Dist;
use crate::divergence::kl_divergence;
use crate::error::{Error, Result};
use crate::evidence::{Evidence, Factor};
use crate::scalar::Scalar;
use crate::validity::validity;

/// `ω|p`: `x ↦ ω(x)·p(x)/(ω ⊨ p)`.
pub fn bayes_update(omega: &Dist, p: &Factor) -> Result<Dist> {
    let v = validity(omega, p)?;
    if !v.is_positive() {
        return Err(Error::ZeroValidity(format!("cannot update with factor {p}: validity is 0")));
    }
    let weights = omega.weights().iter().zip(p.values()).map(|(w, x)| w * x / &v).collect();
    Ok(Dist::from_trusted(omega.space().clone(), weights))
}

fn nonzero_updates(omega: &Dist, weighted: &[(Factor, Scalar)]) -> Result<Vec<Dist>> {
    weighted
        .iter()
        .map(|(p, _)| {
            bayes_update(omega, p).map_err(|e| match e {
                Error::ZeroValidity(_) => Error::ZeroValidity(format!("evidence factor {p} has validity 0")),
                other => other,
            })
        })
        .collect()
}

/// Jeffrey update `Σ_p Flrn(ψ)(p)·(ω|p)`. Every support factor needs
/// non-zero validity; the error names the first one that does not.
pub fn jeffrey_update(omega: &Dist, psi: &Evidence) -> Result<Dist> {
    omega.space().ensure_same(psi.space())?;
    jeffrey_update_weighted(omega, &psi.flrn()?)
}

/// Extension: Jeffrey update with an arbitrary convex weighting of factors
/// instead of the normalised counts of an evidence multiset.
pub fn jeffrey_update_weighted(omega: &Dist, weighted: &[(Factor, Scalar)]) -> Result<Dist> {
    if weighted.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    let updates = nonzero_updates(omega, weighted)?;
    let rs: Vec<Scalar> = weighted.iter().map(|(_, r)| r.clone()).collect();
    Dist::convex_sum(&rs, &updates)
}

/// Pearl update `ω | &ψ`.
pub fn pearl_update(omega: &Dist, psi: &Evidence) -> Result<Dist> {
    omega.space().ensure_same(psi.space())?;
    let conj = psi.and_conj()?;
    bayes_update(omega, &conj).map_err(|e| match e {
        Error::ZeroValidity(_) => {
            Error::ZeroValidity("the conjunction of the evidence has validity 0 (inconsistent evidence)".into())
        }
        other => other,
    })
}

fn vfe_precheck(omega: &Dist, psi: &Evidence) -> Result<Vec<(Factor, Scalar)>> {
    omega.space().ensure_same(psi.space())?;
    let w = psi.flrn()?;
    for (p, _) in &w {
        if !validity(omega, p)?.is_positive() {
            return Err(Error::ZeroValidity(format!("evidence factor {p} has validity 0")));
        }
    }
    Ok(w)
}

/// Free-energy update `ω | &(Flrn ψ)` (float mode).
///
/// Requires every support factor to have non-zero validity; if the
/// fractional conjunction itself has zero validity (factors with disjoint
/// supports) this is a `ZeroValidity` error too.
pub fn vfe_update(omega: &Dist, psi: &Evidence) -> Result<Dist> {
    vfe_precheck(omega, psi)?;
    let f = psi.frac_conj()?;
    bayes_update(&omega.to_float(), &f).map_err(|e| match e {
        Error::ZeroValidity(_) => {
            Error::ZeroValidity("the fractional conjunction of the evidence has validity 0".into())
        }
        other => other,
    })
}

/// The same update in softmax form:
/// `Flrn(Σ_x exp(Flrn(ψ) ⊨ ln((ω|−)(x))) |x⟩)`.
pub fn vfe_update_softmax(omega: &Dist, psi: &Evidence) -> Result<Dist> {
    let w = vfe_precheck(omega, psi)?;
    let posts = nonzero_updates(omega, &w)?;
    let n = omega.space().len();
    let logits: Vec<f64> = (0..n)
        .map(|x| {
            let mut s = 0.0;
            for ((_, r), post) in w.iter().zip(&posts) {
                let v = post.at(x).to_f64();
                if v == 0.0 {
                    return f64::NEG_INFINITY;
                }
                s += r.to_f64() * v.ln();
            }
            s
        })
        .collect();
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(Error::ZeroValidity("the fractional conjunction of the evidence has validity 0".into()));
    }
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = e.iter().sum();
    Ok(Dist::from_trusted(omega.space().clone(), e.iter().map(|v| Scalar::Float(v / z)).collect()))
}

/// `Σ_p Flrn(ψ)(p)·DKL(ρ, ω|p)`, minimised by the VFE update.
pub fn free_energy_objective(rho: &Dist, omega: &Dist, psi: &Evidence) -> Result<Scalar> {
    let w = psi.flrn()?;
    let posts = nonzero_updates(omega, &w)?;
    let mut acc = 0.0;
    for ((_, r), post) in w.iter().zip(&posts) {
        acc += r.to_f64() * kl_divergence(rho, post)?.to_f64();
    }
    Ok(Scalar::Float(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SampleSpace;
    use crate::validity::{jeffrey_validity, pearl_validity};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn med() -> (Dist, Factor, Factor) {
        let s = SampleSpace::new(["d", "~d"]).unwrap();
        let w = Dist::new(&s, vec![q(1, 20), q(19, 20)]).unwrap();
        let pt = Factor::new(&s, vec![q(9, 10), q(2, 5)]).unwrap();
        let nt = Factor::new(&s, vec![q(1, 10), q(3, 5)]).unwrap();
        (w, pt, nt)
    }

    #[test]
    fn bayes() {
        let (w, pt, nt) = med();
        assert_eq!(bayes_update(&w, &pt).unwrap().weights(), [q(9, 85), q(76, 85)]);
        assert_eq!(bayes_update(&w, &nt).unwrap().weights(), [q(1, 115), q(114, 115)]);
        let d = Dist::dirac("d", w.space()).unwrap();
        assert_eq!(bayes_update(&d, &pt).unwrap(), d);
        let z = Factor::point_pred("~d", w.space()).unwrap();
        assert!(matches!(bayes_update(&d, &z), Err(Error::ZeroValidity(_))));
    }

    #[test]
    fn physics() {
        let s = SampleSpace::new(["L", "M", "R"]).unwrap();
        let w = Dist::new(&s, vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        let lr = Factor::indicator(&["L", "R"], &s).unwrap();
        assert_eq!(bayes_update(&w, &lr).unwrap().weights(), [q(3, 4), q(0, 1), q(1, 4)]);
        let taps = Factor::new(&s, vec![q(2, 3), q(1, 3), q(1, 2)]).unwrap();
        assert_eq!(bayes_update(&w, &taps).unwrap().weights(), [q(12, 19), q(4, 19), q(3, 19)]);
    }

    #[test]
    fn jeffrey() {
        let (w, pt, nt) = med();
        let psi = Evidence::new(vec![(pt.clone(), 2), (nt.clone(), 1)]).unwrap();
        let j = jeffrey_update(&w, &psi).unwrap();
        // oracle: 2/3·9/85 + 1/3·1/115
        assert_eq!(j.at(0), &(q(2, 3) * q(9, 85) + q(1, 3) * q(1, 115)));
        assert_eq!(j.weights(), [q(431, 5865), q(5434, 5865)]);
        let one = Evidence::single(&pt, 1);
        assert_eq!(jeffrey_update(&w, &one).unwrap(), bayes_update(&w, &pt).unwrap());
        let jv = jeffrey_validity(&j, &psi).unwrap().to_f64();
        assert!((jv - 0.322).abs() < 5e-4);
    }

    #[test]
    fn jeffrey_zero_validity_names_factor() {
        let s = SampleSpace::new(["a", "b", "c"]).unwrap();
        let w = Dist::new(&s, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let c = Factor::point_pred("c", &s).unwrap();
        let a = Factor::point_pred("a", &s).unwrap();
        let e = Evidence::new(vec![(a, 1), (c.clone(), 1)]).unwrap();
        match jeffrey_update(&w, &e) {
            Err(Error::ZeroValidity(m)) => assert!(m.contains(&c.to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_evidence() {
        let s = SampleSpace::new(["a", "b", "c"]).unwrap();
        let w = Dist::new(&s, vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        let u = Factor::indicator(&["a", "b"], &s).unwrap();
        let nu = u.ortho().unwrap();
        let e = Evidence::new(vec![(u.clone(), 1), (nu.clone(), 1)]).unwrap();
        let expect = Dist::convex_sum(
            &[q(1, 2), q(1, 2)],
            &[bayes_update(&w, &u).unwrap(), bayes_update(&w, &nu).unwrap()],
        )
        .unwrap();
        assert_eq!(jeffrey_update(&w, &e).unwrap(), expect);
        assert!(matches!(pearl_update(&w, &e), Err(Error::ZeroValidity(_))));
    }

    #[test]
    fn pearl() {
        let (w, pt, nt) = med();
        let psi = Evidence::new(vec![(pt.clone(), 2), (nt, 1)]).unwrap();
        let p = pearl_update(&w, &psi).unwrap();
        assert_eq!(p.weights(), [q(27, 635), q(608, 635)]);
        assert_eq!(pearl_update(&w, &Evidence::single(&pt, 1)).unwrap(), bayes_update(&w, &pt).unwrap());
        assert!((pearl_validity(&p, &psi).unwrap().to_f64() - 0.2861).abs() < 5e-4);
    }

    #[test]
    fn vfe_forms() {
        let (w, pt, nt) = med();
        let psi = Evidence::new(vec![(pt.clone(), 1), (nt.clone(), 1)]).unwrap();
        let a = vfe_update(&w, &psi).unwrap();
        let b = vfe_update_softmax(&w, &psi).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        // oracle: ω(x)·sqrt(pt(x)·nt(x)), normalised
        let m = [0.05 * (0.9f64 * 0.1).sqrt(), 0.95 * (0.4f64 * 0.6).sqrt()];
        assert!((a.at(0).to_f64() - m[0] / (m[0] + m[1])).abs() < 1e-12);
        assert!((a.at(0).to_f64() - 0.031).abs() < 5e-4);
        for k in [1, 4] {
            let e = Evidence::single(&pt, k);
            assert!(vfe_update(&w, &e).unwrap().approx_eq(&bayes_update(&w, &pt).unwrap(), 1e-9));
        }
    }

    #[test]
    fn vfe_zero_validity() {
        let s = SampleSpace::new(["a", "b"]).unwrap();
        let w = Dist::uniform(&s).unwrap();
        let a = Factor::point_pred("a", &s).unwrap();
        let b = Factor::point_pred("b", &s).unwrap();
        let e = Evidence::new(vec![(a, 1), (b, 1)]).unwrap();
        assert!(matches!(vfe_update(&w, &e), Err(Error::ZeroValidity(_))));
        assert!(matches!(vfe_update_softmax(&w, &e), Err(Error::ZeroValidity(_))));
        let d = Dist::dirac("a", &s).unwrap();
        let eb = Evidence::single(&Factor::point_pred("b", &s).unwrap(), 1);
        assert!(matches!(vfe_update(&d, &eb), Err(Error::ZeroValidity(_))));
    }

    #[test]
    fn free_energy() {
        let (w, pt, nt) = med();
        let one = Evidence::single(&pt, 1);
        let post = bayes_update(&w, &pt).unwrap();
        assert!(free_energy_objective(&post, &w, &one).unwrap().to_f64().abs() < 1e-15);
        let psi = Evidence::new(vec![(pt, 1), (nt, 2)]).unwrap();
        let v = vfe_update(&w, &psi).unwrap();
        let rho = Dist::new(w.space(), vec![q(1, 3), q(2, 3)]).unwrap();
        let gap = free_energy_objective(&rho, &w, &psi).unwrap().to_f64()
            - free_energy_objective(&v, &w, &psi).unwrap().to_f64();
        assert!((gap - kl_divergence(&rho, &v).unwrap().to_f64()).abs() < 1e-9);
    }

    #[test]
    fn jeffrey_weighted_extension() {
        let (w, pt, nt) = med();
        let ws = vec![(pt.clone(), q(1, 4)), (nt.clone(), q(3, 4))];
        let j = jeffrey_update_weighted(&w, &ws).unwrap();
        let expect = q(1, 4) * q(9, 85) + q(3, 4) * q(1, 115);
        assert_eq!(j.at(0), &expect);
        let bad = vec![(pt, q(1, 2)), (nt, q(1, 3))];
        assert!(matches!(jeffrey_update_weighted(&w, &bad), Err(Error::WeightsNotConvex(_))));
    }
}
