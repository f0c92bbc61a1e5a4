//! Validity of factors and evidence in a distribution.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::evidence::{Evidence, Factor};
use crate::scalar::Scalar;
use crate::update::bayes_update;

/// `ω ⊨ p = Σ_x ω(x)·p(x)`.
pub fn validity(omega: &Dist, p: &Factor) -> Result<Scalar> {
    omega.space().ensure_same(p.space())?;
    Ok(omega
        .weights()
        .iter()
        .zip(p.values())
        .filter(|(w, _)| !w.is_zero())
        .map(|(w, v)| w * v)
        .sum())
}

fn check_evidence(omega: &Dist, psi: &Evidence) -> Result<()> {
    if psi.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    omega.space().ensure_same(psi.space())
}

/// Jeffrey validity: `coefm(ψ)·Π_p (ω ⊨ p)^ψ(p)`.
pub fn jeffrey_validity(omega: &Dist, psi: &Evidence) -> Result<Scalar> {
    check_evidence(omega, psi)?;
    let mut acc = Scalar::from_biguint(psi.coefm());
    for (p, n) in psi.items() {
        acc = acc * validity(omega, p)?.pow(*n);
    }
    Ok(acc)
}

/// Pearl validity: `coefm(ψ)·(ω ⊨ &ψ)`.
pub fn pearl_validity(omega: &Dist, psi: &Evidence) -> Result<Scalar> {
    check_evidence(omega, psi)?;
    Ok(Scalar::from_biguint(psi.coefm()) * validity(omega, &psi.and_conj()?)?)
}

/// `Π_i (ω|p_1|…|p_{i−1} ⊨ p_i)`, which equals `ω ⊨ p_1 & … & p_n`.
///
/// Fails with `ZeroValidity` naming the prefix whose update is impossible.
pub fn iterated_pearl_validity(omega: &Dist, ps: &[Factor]) -> Result<Scalar> {
    let mut current = omega.clone();
    let mut acc = Scalar::one();
    for (i, p) in ps.iter().enumerate() {
        let v = validity(&current, p)?;
        if i + 1 < ps.len() {
            if v.is_zero() {
                return Err(Error::ZeroValidity(format!(
                    "factor #{} has validity 0 after updating with the first {} factor(s)",
                    i + 1,
                    i
                )));
            }
            current = bayes_update(&current, p)?;
        }
        acc = acc * v;
    }
    Ok(acc)
}

/// `(ω ⊨ p₁&p₂) − (ω ⊨ p₁)·(ω ⊨ p₂)`.
pub fn covariance(omega: &Dist, p1: &Factor, p2: &Factor) -> Result<Scalar> {
    let both = validity(omega, &p1.conj(p2)?)?;
    Ok(both - validity(omega, p1)? * validity(omega, p2)?)
}

/// `Flrn(ψ) ⊨ ln((ω ⊨ −)/(ω′ ⊨ −))`. Non-positive exactly when
/// `ω ⊨_J ψ ≤ ω′ ⊨_J ψ`.
pub fn log_likelihood_score(omega: &Dist, omega2: &Dist, psi: &Evidence) -> Result<Scalar> {
    check_evidence(omega, psi)?;
    check_evidence(omega2, psi)?;
    let mut acc = 0.0;
    for (p, r) in psi.flrn()? {
        let a = validity(omega, &p)?;
        let b = validity(omega2, &p)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroValidity(format!("factor {p} has validity 0")));
        }
        acc += r.to_f64() * (a / b).ln()?.to_f64();
    }
    Ok(Scalar::Float(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SampleSpace;

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
    fn plain() {
        let (w, pt, nt) = med();
        assert_eq!(validity(&w, &pt).unwrap(), q(17, 40));
        assert_eq!(validity(&w, &nt).unwrap(), q(23, 40));
        assert_eq!(validity(&w, &Factor::truth(w.space())).unwrap(), Scalar::one());
        assert_eq!(validity(&w, &Factor::point_pred("d", w.space()).unwrap()).unwrap(), q(1, 20));
        let other = Factor::truth(&SampleSpace::new(["x"]).unwrap());
        assert!(matches!(validity(&w, &other), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn jeffrey_and_pearl() {
        let (w, pt, nt) = med();
        let psi = Evidence::new(vec![(pt.clone(), 2), (nt, 1)]).unwrap();
        // oracle: 3·(17/40)²·(23/40) and 3·(1/20·81/1000 + 19/20·12/125)
        assert_eq!(jeffrey_validity(&w, &psi).unwrap(), q(3, 1) * q(17, 40) * q(17, 40) * q(23, 40));
        assert_eq!(jeffrey_validity(&w, &psi).unwrap(), q(19941, 64000));
        assert_eq!(pearl_validity(&w, &psi).unwrap(), q(1143, 4000));
        let t = Evidence::single(&Factor::truth(w.space()), 1);
        assert_eq!(jeffrey_validity(&w, &t).unwrap(), Scalar::one());
        assert_eq!(pearl_validity(&w, &t).unwrap(), Scalar::one());
        let e = Evidence::empty(w.space());
        assert_eq!(jeffrey_validity(&w, &e).unwrap_err(), Error::EmptyEvidence);
        assert_eq!(pearl_validity(&w, &e).unwrap_err(), Error::EmptyEvidence);
        // n|p⟩: Pearl ≥ Jeffrey (Jensen)
        for n in 1..6 {
            let e = Evidence::single(&pt, n);
            assert!(pearl_validity(&w, &e).unwrap() >= jeffrey_validity(&w, &e).unwrap());
        }
    }

    #[test]
    fn divergent_rules() {
        let s = SampleSpace::new(["1", "2", "3"]).unwrap();
        let w = Dist::new(&s, vec![q(3, 10), q(3, 10), q(2, 5)]).unwrap();
        let p = Factor::new(&s, vec![q(1, 100), q(1, 100), q(49, 50)]).unwrap();
        let psi = Evidence::new(vec![(p.clone(), 1), (p.ortho().unwrap(), 1)]).unwrap();
        // oracle: 2·(ω⊨p)·(1−ω⊨p) and 2·Σ ω p (1−p)
        let v = 0.3 * 0.01 * 2.0 + 0.4 * 0.98;
        assert!((jeffrey_validity(&w, &psi).unwrap().to_f64() - 2.0 * v * (1.0 - v)).abs() < 1e-12);
        let pv = 2.0 * (0.6 * 0.01 * 0.99 + 0.4 * 0.98 * 0.02);
        assert!((pearl_validity(&w, &psi).unwrap().to_f64() - pv).abs() < 1e-12);
        assert!((jeffrey_validity(&w, &psi).unwrap().to_f64() - 0.479).abs() < 5e-4);
        assert!((pearl_validity(&w, &psi).unwrap().to_f64() - 0.028).abs() < 5e-4);
    }

    #[test]
    fn iterated() {
        let (w, pt, nt) = med();
        let perms = [
            [pt.clone(), pt.clone(), nt.clone()],
            [pt.clone(), nt.clone(), pt.clone()],
            [nt.clone(), pt.clone(), pt.clone()],
        ];
        for ps in &perms {
            assert_eq!(iterated_pearl_validity(&w, ps).unwrap(), q(381, 4000));
        }
        assert_eq!(iterated_pearl_validity(&w, std::slice::from_ref(&pt)).unwrap(), q(17, 40));
        let s = w.space();
        let u = Factor::point_pred("d", s).unwrap();
        let not_u = u.ortho().unwrap();
        let err = iterated_pearl_validity(&w, &[u, not_u, pt]).unwrap_err();
        assert!(matches!(err, Error::ZeroValidity(ref m) if m.contains("#2")));
    }

    #[test]
    fn covariances() {
        let (w, pt, nt) = med();
        assert!(covariance(&w, &pt, &Factor::truth(w.space())).unwrap().is_zero());
        let direct = q(1, 20) * q(81, 100) + q(19, 20) * q(4, 25) - q(17, 40) * q(17, 40);
        assert_eq!(covariance(&w, &pt, &pt).unwrap(), direct);
        let psi = Evidence::new(vec![(pt.clone(), 1), (nt.clone(), 1)]).unwrap();
        let half = q(1, 2) * (pearl_validity(&w, &psi).unwrap() - jeffrey_validity(&w, &psi).unwrap());
        assert_eq!(covariance(&w, &pt, &nt).unwrap(), half);
    }

    #[test]
    fn log_likelihood() {
        let (w, pt, nt) = med();
        let psi = Evidence::new(vec![(pt, 2), (nt, 1)]).unwrap();
        assert_eq!(log_likelihood_score(&w, &w, &psi).unwrap().to_f64(), 0.0);
        let wj = crate::update::jeffrey_update(&w, &psi).unwrap();
        assert!(log_likelihood_score(&w, &wj, &psi).unwrap().to_f64() < 0.0);
        let d = Dist::dirac("d", w.space()).unwrap();
        let zero = Evidence::single(&Factor::point_pred("~d", w.space()).unwrap(), 1);
        assert!(matches!(log_likelihood_score(&d, &w, &zero), Err(Error::ZeroValidity(_))));
    }
}
