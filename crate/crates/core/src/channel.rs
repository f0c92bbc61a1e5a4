//! Channels (conditional probability tables) and transformations along them.

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::evidence::{Evidence, Factor};
use crate::scalar::Scalar;
use crate::space::SampleSpace;
use crate::update::{bayes_update, jeffrey_update, pearl_update};
use crate::validity::validity;

/// A map from each domain element to a distribution on the codomain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Channel {
    dom: SampleSpace,
    cod: SampleSpace,
    rows: Vec<Dist>,
}

impl Channel {
    pub fn new(dom: &SampleSpace, cod: &SampleSpace, rows: Vec<Dist>) -> Result<Channel> {
        if rows.len() != dom.len() {
            return Err(Error::SpaceMismatch(format!("{} rows for a domain of {} elements", rows.len(), dom.len())));
        }
        for r in &rows {
            r.space().ensure_same(cod)?;
        }
        Ok(Channel { dom: dom.clone(), cod: cod.clone(), rows })
    }

    /// Rows given as weight vectors in codomain order.
    pub fn from_table(dom: &SampleSpace, cod: &SampleSpace, table: Vec<Vec<Scalar>>) -> Result<Channel> {
        let rows = table.into_iter().map(|w| Dist::new(cod, w)).collect::<Result<Vec<_>>>()?;
        Channel::new(dom, cod, rows)
    }

    pub fn identity(space: &SampleSpace) -> Channel {
        let rows = space.labels().iter().map(|x| Dist::dirac(x, space).expect("own label")).collect();
        Channel { dom: space.clone(), cod: space.clone(), rows }
    }

    pub fn constant(dom: &SampleSpace, row: &Dist) -> Channel {
        Channel { dom: dom.clone(), cod: row.space().clone(), rows: vec![row.clone(); dom.len()] }
    }

    pub fn dom(&self) -> &SampleSpace {
        &self.dom
    }

    pub fn cod(&self) -> &SampleSpace {
        &self.cod
    }

    pub fn rows(&self) -> &[Dist] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Dist {
        &self.rows[i]
    }

    /// `c ≫ ω`.
    pub fn push(&self, omega: &Dist) -> Result<Dist> {
        omega.space().ensure_same(&self.dom)?;
        let mut out = vec![Scalar::zero(); self.cod.len()];
        for x in omega.support() {
            let w = omega.at(x);
            for (o, r) in out.iter_mut().zip(self.rows[x].weights()) {
                if !r.is_zero() {
                    *o = &*o + &(w * r);
                }
            }
        }
        Ok(Dist::from_trusted(self.cod.clone(), out))
    }

    /// `c ⪻ q`: `x ↦ c(x) ⊨ q`.
    pub fn pull(&self, q: &Factor) -> Result<Factor> {
        q.space().ensure_same(&self.cod)?;
        let values = self.rows.iter().map(|r| validity(r, q)).collect::<Result<Vec<_>>>()?;
        Ok(Factor::from_trusted(self.dom.clone(), values))
    }

    /// `c ⋘ ψ = Σ_q ψ(q)|c ⪻ q⟩`; factors that coincide after pulling are merged.
    pub fn triple_pull(&self, psi: &Evidence) -> Result<Evidence> {
        psi.space().ensure_same(&self.cod)?;
        let mut out = Evidence::empty(&self.dom);
        for (q, n) in psi.items() {
            out.insert(self.pull(q)?, *n)?;
        }
        Ok(out)
    }

    /// Bayesian inversion `c†ω : y ↦ ω | (c ⪻ 1_y)`.
    pub fn dagger(&self, omega: &Dist) -> Result<Channel> {
        omega.space().ensure_same(&self.dom)?;
        let rows = self
            .cod
            .labels()
            .iter()
            .map(|y| {
                let p = self.pull(&Factor::point_pred(y, &self.cod)?)?;
                bayes_update(omega, &p).map_err(|e| match e {
                    Error::ZeroValidity(_) => {
                        Error::ZeroValidity(format!("codomain element `{y}` has predicted probability 0"))
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Channel { dom: self.cod.clone(), cod: self.dom.clone(), rows })
    }

    /// `mn[K](c) : x ↦ mn[K](c(x))`.
    pub fn multinomial_channel(&self, k: u64) -> Result<Channel> {
        let rows = self.rows.iter().map(|r| r.multinomial(k)).collect::<Result<Vec<_>>>()?;
        let cod = rows
            .first()
            .map(|r| r.space().clone())
            .unwrap_or_else(|| crate::multiset::multiset_space(&self.cod, k).expect("size checked").0);
        Ok(Channel { dom: self.dom.clone(), cod, rows })
    }
}

#[derive(Deserialize)]
struct RawChannel {
    dom: SampleSpace,
    cod: SampleSpace,
    rows: Vec<Dist>,
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Channel, D::Error> {
        let raw = RawChannel::deserialize(d)?;
        Channel::new(&raw.dom, &raw.cod, raw.rows).map_err(serde::de::Error::custom)
    }
}

/// Jeffrey validity of evidence on the codomain, pulled back factor-wise:
/// `coefm(ψ)·Π_q (ω ⊨ c ⪻ q)^ψ(q)`.
///
/// Uses the multiplicities of `ψ` itself, so it is unaffected by factors
/// that collide under [`Channel::triple_pull`].
pub fn jeffrey_validity_along(omega: &Dist, c: &Channel, psi: &Evidence) -> Result<Scalar> {
    if psi.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    let mut acc = Scalar::from_biguint(psi.coefm());
    for (q, n) in psi.items() {
        acc = acc * validity(omega, &c.pull(q)?)?.pow(*n);
    }
    Ok(acc)
}

/// Pearl validity along a channel: `coefm(ψ)·(ω ⊨ &_q (c ⪻ q)^ψ(q))`.
pub fn pearl_validity_along(omega: &Dist, c: &Channel, psi: &Evidence) -> Result<Scalar> {
    if psi.is_empty() {
        return Err(Error::EmptyEvidence);
    }
    let pulled = c.triple_pull(psi)?;
    Ok(Scalar::from_biguint(psi.coefm()) * validity(omega, &pulled.and_conj()?)?)
}

/// `ω⟨J c ⋘ ψ⟩`.
pub fn jeffrey_update_along(omega: &Dist, c: &Channel, psi: &Evidence) -> Result<Dist> {
    jeffrey_update(omega, &c.triple_pull(psi)?)
}

/// `ω⟨P c ⋘ ψ⟩`.
pub fn pearl_update_along(omega: &Dist, c: &Channel, psi: &Evidence) -> Result<Dist> {
    pearl_update(omega, &c.triple_pull(psi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::acc;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn med() -> (Dist, Channel) {
        let d = SampleSpace::new(["d", "~d"]).unwrap();
        let t = SampleSpace::new(["p", "n"]).unwrap();
        let w = Dist::new(&d, vec![q(1, 20), q(19, 20)]).unwrap();
        let c = Channel::from_table(&d, &t, vec![vec![q(9, 10), q(1, 10)], vec![q(2, 5), q(3, 5)]]).unwrap();
        (w, c)
    }

    #[test]
    fn construction() {
        let (w, c) = med();
        assert!(Channel::from_table(w.space(), c.cod(), vec![vec![q(1, 2), q(1, 3)], vec![q(1, 1), q(0, 1)]]).is_err());
        assert!(Channel::new(w.space(), c.cod(), vec![]).is_err());
    }

    #[test]
    fn push_pull() {
        let (w, c) = med();
        assert_eq!(c.push(&w).unwrap().weights(), [q(17, 40), q(23, 40)]);
        assert_eq!(Channel::identity(w.space()).push(&w).unwrap(), w);
        let dd = Dist::dirac("~d", w.space()).unwrap();
        assert_eq!(&c.push(&dd).unwrap(), c.row(1));
        let pt = c.pull(&Factor::point_pred("p", c.cod()).unwrap()).unwrap();
        assert_eq!(pt.values(), [q(9, 10), q(2, 5)]);
        let nt = c.pull(&Factor::point_pred("n", c.cod()).unwrap()).unwrap();
        assert_eq!(nt.values(), [q(1, 10), q(3, 5)]);
        assert_eq!(c.pull(&Factor::truth(c.cod())).unwrap(), Factor::truth(w.space()));
        assert!(matches!(c.push(&c.push(&w).unwrap()), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn triple_pulls() {
        let (w, c) = med();
        let psi = Evidence::point(&acc(&["p", "p", "n"], c.cod()).unwrap());
        let pulled = c.triple_pull(&psi).unwrap();
        let pt = Factor::new(w.space(), vec![q(9, 10), q(2, 5)]).unwrap();
        let nt = Factor::new(w.space(), vec![q(1, 10), q(3, 5)]).unwrap();
        assert_eq!(pulled, Evidence::new(vec![(pt, 2), (nt, 1)]).unwrap());
        let id = Channel::identity(c.cod());
        assert_eq!(id.triple_pull(&psi).unwrap(), psi);
        // constant channel: every factor becomes a multiple of truth, equal ones merge
        let k = Channel::constant(w.space(), c.row(0));
        let e = k.triple_pull(&psi).unwrap();
        for (f, _) in e.items() {
            assert!(f.values().iter().all(|v| v == f.at(0)));
        }
        assert_eq!(e.size(), 3);
    }

    #[test]
    fn collisions_merge_but_validity_along_keeps_coefficient() {
        let x = SampleSpace::new(["a", "b"]).unwrap();
        let y = SampleSpace::new(["u", "v"]).unwrap();
        let half = Dist::uniform(&y).unwrap();
        let c = Channel::constant(&x, &half);
        let psi = Evidence::point(&acc(&["u", "v"], &y).unwrap());
        let pulled = c.triple_pull(&psi).unwrap();
        assert_eq!(pulled.items().len(), 1);
        assert_eq!(pulled.size(), 2);
        let w = Dist::uniform(&x).unwrap();
        let direct = crate::validity::jeffrey_validity(&c.push(&w).unwrap(), &psi).unwrap();
        assert_eq!(jeffrey_validity_along(&w, &c, &psi).unwrap(), direct);
        assert_eq!(direct, q(1, 2));
    }

    #[test]
    fn dagger_rows() {
        let (w, c) = med();
        let dg = c.dagger(&w).unwrap();
        assert_eq!(dg.row(0).weights(), [q(9, 85), q(76, 85)]);
        assert_eq!(dg.row(1).weights(), [q(1, 115), q(114, 115)]);
        let id = Channel::identity(w.space());
        assert_eq!(id.dagger(&w).unwrap(), id);
        let d = Dist::dirac("d", w.space()).unwrap();
        let sure = Channel::from_table(w.space(), c.cod(), vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        match sure.dagger(&d) {
            Err(Error::ZeroValidity(m)) => assert!(m.contains("`n`")),
            other => panic!("{other:?}"),
        }
        let psi = Evidence::point(&acc(&["p", "p", "n"], c.cod()).unwrap());
        let phi = acc(&["p", "p", "n"], c.cod()).unwrap();
        let lhs = dg.push(&phi.flrn().unwrap()).unwrap();
        assert_eq!(lhs, jeffrey_update_along(&w, &c, &psi).unwrap());
    }

    #[test]
    fn multinomial_channels() {
        let (w, c) = med();
        let m1 = c.multinomial_channel(1).unwrap();
        for i in 0..2 {
            assert_eq!(m1.row(i).weights(), c.row(i).weights());
        }
        let m3 = c.multinomial_channel(3).unwrap();
        let phi = acc(&["p", "p", "n"], c.cod()).unwrap();
        let psi = Evidence::point(&phi);
        let lhs = m3.push(&w).unwrap();
        assert_eq!(lhs.weight(&phi.label()).unwrap(), &pearl_validity_along(&w, &c, &psi).unwrap());
        assert_eq!(lhs.weight(&phi.label()).unwrap(), &q(1143, 4000));
        let ind = Factor::point_pred(&phi.label(), m3.cod()).unwrap();
        assert_eq!(pearl_update_along(&w, &c, &psi).unwrap(), bayes_update(&w, &m3.pull(&ind).unwrap()).unwrap());
    }

    #[test]
    fn serialization() {
        let (_, c) = med();
        let js = serde_json::to_string(&c).unwrap();
        let back: Channel = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        assert!(js.starts_with(r#"{"dom":["d","~d"],"cod":["p","n"],"rows":[{"space":["p","n"],"weights":["9/10","1/10"]}"#));
    }
}
