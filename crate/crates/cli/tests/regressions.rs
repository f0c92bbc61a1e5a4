//! Pinned counterexamples to the literal statements that need a correction,
//! the sub-grid count, and model-file round trips.

use evupdate::update::{bayes_update, jeffrey_update, pearl_update};
use evupdate::validity::{pearl_validity, validity};
use evupdate::{Dist, Evidence, Factor, SampleSpace, Scalar};
use evupdate_cli::gen::Gen;
use evupdate_cli::grid::{GridMode, GridSpec};
use evupdate_cli::model::{ChannelEntry, DistEntry, EvidenceEntry, FactorEntry, ModelFile};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn abc() -> (SampleSpace, Dist, Factor, Factor) {
    let s = SampleSpace::new(["a", "b", "c"]).unwrap();
    let w = Dist::new(&s, vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
    let p = Factor::new(&s, vec![q(1, 2), q(1, 4), q(1, 1)]).unwrap();
    let r = Factor::new(&s, vec![q(1, 3), q(1, 1), q(1, 5)]).unwrap();
    (s, w, p, r)
}

#[test]
fn vfe_delta_positive_cells_on_nine_by_nine() {
    let cells = GridSpec::medical(GridMode::VfeDklDelta, 9, 9).compute().unwrap();
    assert_eq!(cells.iter().filter(|c| c.2.to_f64() > 0.0).count(), 37);
    let all = GridSpec::medical(GridMode::VfeDklDelta, 10, 10).compute().unwrap();
    assert_eq!(all.iter().filter(|c| c.2.to_f64() > 0.0).count(), 45);
    // No cell is close enough to zero for the count to be a rounding artefact.
    assert!(all.iter().all(|c| c.2.to_f64().abs() > 1e-6));
}

#[test]
fn pearl_product_rule_needs_coefficients() {
    let (_, w, p, r) = abc();
    let psi = Evidence::single(&p, 1);
    let chi = Evidence::single(&r, 1);
    let sum = psi.add(&chi).unwrap();
    let lhs = pearl_validity(&pearl_update(&w, &psi).unwrap(), &chi).unwrap();
    let literal = pearl_validity(&w, &sum).unwrap() / pearl_validity(&w, &psi).unwrap();
    // coefm(1|p⟩ + 1|r⟩) = 2, the single-factor coefficients are 1.
    assert_eq!(literal, Scalar::int(2) * &lhs);
    assert_ne!(lhs, literal);
}

#[test]
fn jeffrey_convex_sum_needs_equal_sizes() {
    let (s, w, p, r) = abc();
    let psi1 = Evidence::single(&p, 1);
    let psi2 = Evidence::new(vec![(r.clone(), 1), (p.ortho().unwrap(), 1)]).unwrap();
    let literal = Dist::convex_sum(
        &[q(1, 2), q(1, 2)],
        &[jeffrey_update(&w, &psi1).unwrap(), jeffrey_update(&w, &psi2).unwrap()],
    )
    .unwrap();
    let single = jeffrey_update(&w, &psi1.add(&psi2).unwrap()).unwrap();
    assert_ne!(literal, single);
    let weighted = Dist::convex_sum(
        &[q(1, 3), q(2, 3)],
        &[jeffrey_update(&w, &psi1).unwrap(), jeffrey_update(&w, &psi2).unwrap()],
    )
    .unwrap();
    assert_eq!(weighted, single);
    assert_eq!(single.space(), &s);
}

#[test]
fn iterated_update_factor_is_inverse_coefm() {
    let (_, w, p, _) = abc();
    // ψ = 2|p⟩: the tensor of successive updates has validity ω⊨p², while
    // ω⊨Pψ/2! would be half of that.
    let wp = bayes_update(&w, &p).unwrap();
    let tensor = validity(&w.tensor(&wp).unwrap(), &p.tensor_factor(&p).unwrap()).unwrap();
    let pearl = pearl_validity(&w, &Evidence::single(&p, 2)).unwrap();
    assert_eq!(tensor, pearl.clone());
    assert_ne!(tensor, pearl / Scalar::int(2));
}

fn random_model(seed: u64) -> ModelFile {
    let mut g = Gen::for_trial(seed, "model-file", 0);
    let mut m = ModelFile::default();
    let x = g.space(1, 4);
    let y = g.space(1, 4);
    m.spaces.insert("X".into(), x.labels().to_vec());
    m.spaces.insert("Y".into(), y.labels().to_vec());
    for k in 0..g.size(0, 3) {
        let d = g.dist(&x, false);
        m.distributions.insert(format!("w{k}"), DistEntry { space: "X".into(), weights: d.weights().to_vec() });
    }
    let nf = g.size(1, 3);
    for k in 0..nf {
        let f = g.factor(&x);
        m.factors.insert(format!("f{k}"), FactorEntry { space: "X".into(), values: f.values().to_vec() });
    }
    let entries = (0..g.size(1, 3)).map(|k| EvidenceEntry { factor: format!("f{}", k % nf), count: k as u64 + 1 });
    m.evidence.insert("psi".into(), entries.collect());
    let c = g.channel(&x, &y, false);
    let rows = c.rows().iter().map(|r| DistEntry { space: "Y".into(), weights: r.weights().to_vec() }).collect();
    m.channels.insert("c".into(), ChannelEntry { dom: "X".into(), cod: "Y".into(), rows });
    m
}

proptest! {
    #[test]
    fn model_files_round_trip(seed in any::<u64>()) {
        let m = random_model(seed);
        let text = m.to_json();
        let parsed = ModelFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &m);
        prop_assert_eq!(parsed.to_json(), text);
        prop_assert!(parsed.resolve().is_ok());
    }
}
