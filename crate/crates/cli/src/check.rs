//! Seeded property suites: the algebraic laws and update theorems, checked on random
//! instances. Deterministic for a given seed regardless of thread count.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use evupdate::channel::{
    jeffrey_update_along, jeffrey_validity_along, pearl_update_along, pearl_validity_along,
};
use evupdate::divergence::{expected_channel_divergence, kl_divergence};
use evupdate::multiset::{acc, enumerate_multisets, Multiset};
use evupdate::update::{
    bayes_update, free_energy_objective, jeffrey_update, pearl_update, vfe_update, vfe_update_softmax,
};
use evupdate::validity::{
    covariance, iterated_pearl_validity, jeffrey_validity, log_likelihood_score, pearl_validity, validity,
};
use evupdate::{Dist, Evidence, Factor, MatchStatus, SampleSpace, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::builtin::medical;
use crate::error::{CliError, Result};
use crate::gen::{named_space, Gen, MAX_SPACE};

/// Slack for float inequalities and float identities.
pub const FLOAT_TOL: f64 = 1e-9;
/// Tolerance against values printed rounded.
pub const PRINTED_TOL: f64 = 5e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    /// Must hold on every (non-skipped) trial.
    ForAll,
    /// At least one trial must produce a witness.
    Exists,
    /// A single fixed instance, run once.
    Fixed,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Holds; for `Exists`, a witness description.
    Holds(Option<String>),
    /// Preconditions not met (or near-tie); not counted either way.
    Skipped,
    Violated(String),
}

pub struct Property {
    pub id: &'static str,
    pub quantifier: Quantifier,
    pub check: fn(&mut Gen) -> Outcome,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub id: &'static str,
    pub quantifier: Quantifier,
    pub trials: u64,
    pub skipped: u64,
    pub passed: bool,
    /// First counterexample (or witness for existential properties).
    pub detail: Option<String>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<36} trials={} skipped={}", self.id, self.trials, self.skipped)?;
        match (&self.detail, self.passed, self.quantifier) {
            (Some(d), false, _) => write!(f, "\n     counterexample: {d}"),
            (Some(d), true, Quantifier::Exists) => write!(f, "\n     witness: {d}"),
            (Some(d), true, Quantifier::Fixed) => write!(f, "\n     {d}"),
            (None, false, Quantifier::Exists) => write!(f, "\n     no witness found"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn failures(&self) -> usize {
        self.properties.iter().filter(|p| !p.passed).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (trials={}, seed={})", self.suite, self.trials, self.seed)?;
        for p in &self.properties {
            writeln!(f, "{p}")?;
        }
        let n = self.properties.len();
        writeln!(f, "{} of {n} properties passed", n - self.failures())
    }
}

fn run_property(p: &Property, trials: u64, seed: u64) -> PropertyReport {
    let n = if p.quantifier == Quantifier::Fixed { 1 } else { trials };
    let outcomes: Vec<Outcome> = (0..n)
        .into_par_iter()
        .map(|t| {
            let mut g = Gen::for_trial(seed, p.id, t);
            catch_unwind(AssertUnwindSafe(|| (p.check)(&mut g)))
                .unwrap_or_else(|_| Outcome::Violated(format!("panic in trial {t}")))
        })
        .collect();
    let skipped = outcomes.iter().filter(|o| matches!(o, Outcome::Skipped)).count() as u64;
    let violation = outcomes.iter().enumerate().find_map(|(t, o)| match o {
        Outcome::Violated(m) => Some(format!("trial {t}: {m}")),
        _ => None,
    });
    let (passed, detail) = match p.quantifier {
        Quantifier::ForAll | Quantifier::Fixed => match violation {
            Some(v) => (false, Some(v)),
            None => {
                let note = outcomes.iter().find_map(|o| match o {
                    Outcome::Holds(Some(m)) => Some(m.clone()),
                    _ => None,
                });
                (true, note)
            }
        },
        Quantifier::Exists => {
            let witness = outcomes.iter().enumerate().find_map(|(t, o)| match o {
                Outcome::Holds(Some(m)) => Some(format!("trial {t}: {m}")),
                Outcome::Holds(None) => Some(format!("trial {t}")),
                _ => None,
            });
            match (violation, witness) {
                (Some(v), _) => (false, Some(v)),
                (None, Some(w)) => (true, Some(w)),
                (None, None) => (false, None),
            }
        }
    };
    PropertyReport { id: p.id, quantifier: p.quantifier, trials: n, skipped, passed, detail }
}

pub const SUITES: &[&str] = &[
    "all", "core", "multiset", "distribution", "evidence", "validity", "update", "bayes", "gain", "jeffrey",
    "jeffrey-order", "pearl", "vfe", "channel", "divergence",
];

/// The properties making up a suite.
pub fn suite(name: &str) -> Result<Vec<Property>> {
    let all = properties();
    let prefixes: &[&str] = match name {
        "all" => &[""],
        "update" => &["bayes.", "gain.", "jeffrey.", "pearl.", "vfe."],
        "jeffrey-order" => &["jeffrey.order"],
        "core" => &["core."],
        "multiset" => &["multiset."],
        "distribution" => &["distribution."],
        "evidence" => &["evidence."],
        "validity" => &["validity."],
        "bayes" => &["bayes."],
        "gain" => &["gain."],
        "jeffrey" => &["jeffrey."],
        "pearl" => &["pearl."],
        "vfe" => &["vfe."],
        "channel" => &["channel."],
        "divergence" => &["divergence."],
        _ => return Err(CliError::UnknownSuite(name.to_string())),
    };
    Ok(all.into_iter().filter(|p| prefixes.iter().any(|pre| p.id.starts_with(pre))).collect())
}

pub fn run_suite(name: &str, trials: u64, seed: u64) -> Result<SuiteReport> {
    let props = suite(name)?;
    let properties = props.iter().map(|p| run_property(p, trials, seed)).collect();
    Ok(SuiteReport { suite: name.to_string(), seed, trials, properties })
}

// ---------------------------------------------------------------------------

macro_rules! ensure {
    ($c:expr, $($fmt:tt)+) => {
        let holds: bool = $c;
        if !holds {
            return Outcome::Violated(format!($($fmt)+));
        }
    };
}

macro_rules! ok {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Outcome::Violated(format!("unexpected error: {e}")),
        }
    };
}

macro_rules! or_skip {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(_) => return Outcome::Skipped,
        }
    };
}

const HOLDS: Outcome = Outcome::Holds(None);

fn prop(id: &'static str, check: fn(&mut Gen) -> Outcome) -> Property {
    Property { id, quantifier: Quantifier::ForAll, check }
}

fn exists(id: &'static str, check: fn(&mut Gen) -> Outcome) -> Property {
    Property { id, quantifier: Quantifier::Exists, check }
}

fn fixed(id: &'static str, check: fn(&mut Gen) -> Outcome) -> Property {
    Property { id, quantifier: Quantifier::Fixed, check }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn v(w: &Dist, p: &Factor) -> Scalar {
    validity(w, p).expect("same space")
}

fn conj_all(s: &SampleSpace, ps: &[Factor]) -> Factor {
    ps.iter().fold(Factor::truth(s), |acc, p| acc.conj(p).expect("same space"))
}

fn kl(a: &Dist, b: &Dist) -> std::result::Result<f64, evupdate::Error> {
    kl_divergence(a, b).map(|d| d.to_f64())
}

/// Random distribution supported inside `support`.
fn dist_on(g: &mut Gen, s: &SampleSpace, support: &[usize]) -> Dist {
    let mut m = vec![0i64; s.len()];
    for &i in support {
        m[i] = g.rng.gen_range(1..=9);
    }
    let t: i64 = m.iter().sum();
    Dist::new(s, m.iter().map(|&x| Scalar::ratio(x, t)).collect()).expect("normalised")
}

/// Evidence of exactly `k` predicates (repeats allowed).
fn sized_evidence(g: &mut Gen, s: &SampleSpace, k: usize) -> Evidence {
    let mut e = Evidence::empty(s);
    for _ in 0..k {
        e.insert(g.pred(s), 1).expect("same space");
    }
    e
}

/// Σ r_i·ω⟨Jψ_i⟩ against ω⟨J Σ n_i·ψ_i⟩, with r_i ∝ n_i, or ∝ n_i·‖ψ_i‖ when
/// `size_weighted`.
fn fractional_convex_sum(w: &Dist, psis: &[Evidence], ns: &[u64], size_weighted: bool) -> Outcome {
    let s = w.space();
    let ms: Vec<i64> =
        psis.iter().zip(ns).map(|(p, &n)| if size_weighted { (n * p.size()) as i64 } else { n as i64 }).collect();
    let total: i64 = ms.iter().sum();
    let ups = or_skip!(psis.iter().map(|p| jeffrey_update(w, p)).collect::<evupdate::Result<Vec<_>>>());
    let rs: Vec<Scalar> = ms.iter().map(|&m| Scalar::ratio(m, total)).collect();
    let lhs = ok!(Dist::convex_sum(&rs, &ups));
    let mut sum = Evidence::empty(s);
    for (p, &n) in psis.iter().zip(ns) {
        sum = ok!(sum.add(&p.scale(n)));
    }
    let rhs = ok!(jeffrey_update(w, &sum));
    ensure!(lhs == rhs, "convex sum {lhs} ≠ single update {rhs}");
    HOLDS
}

pub fn properties() -> Vec<Property> {
    vec![
        // core
        prop("core.exact_round_trip", |g| {
            let a = g.rational(1_000_000);
            let b = g.rational(1_000_000);
            ensure!((&a + &b) - &b == a, "({a}+{b})-{b}");
            if !b.is_zero() {
                ensure!((&a * &b) / &b == a, "({a}*{b})/{b}");
            }
            HOLDS
        }),
        prop("core.float_conversion_ulp", |g| {
            let p: i64 = g.rng.gen_range(-(1i64 << 40)..(1i64 << 40));
            let q: i64 = g.rng.gen_range(1..(1i64 << 40));
            let got = Scalar::ratio(p, q).to_f64();
            let direct = p as f64 / q as f64;
            let ulp = f64::EPSILON * direct.abs().max(f64::MIN_POSITIVE);
            ensure!((got - direct).abs() <= ulp, "{p}/{q}: {got} vs {direct}");
            HOLDS
        }),
        // multiset
        prop("multiset.acc_size_and_permutation", |g| {
            let s = g.space(1, MAX_SPACE);
            let len = g.size(0, 8);
            let mut seq: Vec<String> = (0..len).map(|_| s.label(g.rng.gen_range(0..s.len())).to_string()).collect();
            let m = ok!(acc(&seq, &s));
            ensure!(m.size() as usize == len, "size {} for length {len}", m.size());
            seq.shuffle(&mut g.rng);
            ensure!(ok!(acc(&seq, &s)) == m, "not permutation invariant");
            HOLDS
        }),
        prop("multiset.coefm_counts_sequences", |g| {
            let s = g.space(1, 4);
            let k = g.size(0, 5) as u32;
            let phi = g.multiset(&s, 5);
            let phi = if k == 0 { Multiset::empty(&s) } else { phi };
            let k = phi.size() as u32;
            let n = s.len();
            let mut hits = 0u64;
            for code in 0..n.pow(k) {
                let mut c = code;
                let mut counts = vec![0u64; n];
                for _ in 0..k {
                    counts[c % n] += 1;
                    c /= n;
                }
                if counts == phi.counts() {
                    hits += 1;
                }
            }
            ensure!(num_bigint::BigUint::from(hits) == phi.coefm(), "{phi}: {hits} sequences vs coefm {}", phi.coefm());
            HOLDS
        }),
        prop("multiset.flrn_scale_invariant", |g| {
            let s = g.space(1, MAX_SPACE);
            let phi = g.multiset(&s, 6);
            let n = g.size(1, 5) as u64;
            ensure!(ok!(phi.scale(n).flrn()) == ok!(phi.flrn()), "{phi} scaled by {n}");
            HOLDS
        }),
        prop("multiset.multinomial_theorem", |g| {
            let n = g.size(1, 4);
            let k = g.size(0, 5) as u64;
            let rs: Vec<Scalar> = (0..n).map(|_| g.rational(20)).collect();
            let s = named_space("r", n);
            let lhs = rs.iter().sum::<Scalar>().pow(k);
            let rhs: Scalar = enumerate_multisets(&s, k)
                .iter()
                .map(|phi| {
                    Scalar::from_biguint(phi.coefm())
                        * phi.counts().iter().zip(&rs).map(|(&c, r)| r.pow(c)).product::<Scalar>()
                })
                .sum();
            ensure!(lhs == rhs, "K={k}: {lhs} vs {rhs}");
            HOLDS
        }),
        // distribution
        prop("distribution.constructors_valid", |g| {
            let s = g.space(1, 4);
            let a = g.dist(&s, false);
            let b = g.dist(&s, false);
            let r = g.unit();
            let outs = vec![
                ok!(Dist::convex_sum(&[r.clone(), Scalar::one() - &r], &[a.clone(), b.clone()])),
                ok!(a.tensor(&b)),
                ok!(a.copy()),
                ok!(a.multinomial(g.size(0, 4) as u64)),
                ok!(g.multiset(&s, 6).flrn()),
            ];
            for d in outs {
                ensure!(Dist::new(d.space(), d.weights().to_vec()).is_ok(), "invalid output {d}");
            }
            HOLDS
        }),
        prop("distribution.copy_is_tensor_iff_dirac", |g| {
            let s = g.space(1, 4);
            let w = if g.bool() {
                let x = s.label(g.rng.gen_range(0..s.len())).to_string();
                ok!(Dist::dirac(&x, &s))
            } else {
                g.dist(&s, false)
            };
            let same = ok!(w.copy()) == ok!(w.tensor(&w));
            ensure!(same == w.is_dirac(), "{w}: copy==tensor is {same}");
            HOLDS
        }),
        prop("distribution.multinomial_sums_to_one", |g| {
            let s = g.space(1, 4);
            let w = g.dist(&s, false);
            let k = g.size(0, 5) as u64;
            let total: Scalar = ok!(w.multinomial(k)).weights().iter().sum();
            ensure!(total == Scalar::one(), "{w}, K={k}: total {total}");
            HOLDS
        }),
        prop("distribution.multinomial_is_pushforward_of_acc", |g| {
            let s = g.space(1, 3);
            let w = g.dist(&s, false);
            let k = g.size(0, 4);
            let power = ok!(w.tensor_power(k));
            let m = ok!(w.multinomial(k as u64));
            let ps = power.space().clone();
            let pushed = ok!(power.push_indices(m.space(), |i| {
                let seq: Vec<&str> = ps.coords(i).iter().zip(ps.parts()).map(|(&c, p)| p.label(c)).collect();
                m.space().index_of(&acc(&seq, &s)?.label())
            }));
            ensure!(pushed == m, "{w}, K={k}");
            HOLDS
        }),
        // evidence
        prop("evidence.ortho_laws", |g| {
            let s = g.space(1, MAX_SPACE);
            let p = g.pred(&s);
            let o = ok!(p.ortho());
            ensure!(ok!(o.ortho()) == p, "p⊥⊥ ≠ p for {p}");
            ensure!(ok!(p.add(&o)) == Factor::truth(&s), "p + p⊥ ≠ 1 for {p}");
            HOLDS
        }),
        prop("evidence.conj_commutative_associative", |g| {
            let s = g.space(1, MAX_SPACE);
            let (p, q, r) = (g.factor(&s), g.factor(&s), g.factor(&s));
            ensure!(ok!(p.conj(&q)) == ok!(q.conj(&p)), "not commutative");
            ensure!(ok!(ok!(p.conj(&q)).conj(&r)) == ok!(p.conj(&ok!(q.conj(&r)))), "not associative");
            HOLDS
        }),
        prop("evidence.weakening", |g| {
            let x = g.space(1, 4);
            let y = named_space("y", g.size(1, 4));
            let xy = ok!(SampleSpace::product(&[x.clone(), y.clone()]));
            let tau = g.dist(&xy, false);
            let p = g.pred(&x);
            let lhs = v(&tau, &ok!(p.tensor_factor(&Factor::truth(&y))));
            ensure!(lhs == v(&ok!(tau.marginal(0)), &p), "weakening fails for {p}");
            HOLDS
        }),
        prop("evidence.and_conj_additive", |g| {
            let s = g.space(1, MAX_SPACE);
            let psi = g.evidence_with(&s, 6, |g, s| g.factor(s));
            let chi = g.evidence_with(&s, 6, |g, s| g.factor(s));
            let lhs = ok!(ok!(psi.add(&chi)).and_conj());
            let rhs = ok!(ok!(psi.and_conj()).conj(&ok!(chi.and_conj())));
            ensure!(lhs == rhs, "&(ψ+χ) ≠ &ψ & &χ");
            HOLDS
        }),
        prop("evidence.frac_conj_power", |g| {
            let s = g.space(1, MAX_SPACE);
            let psi = g.evidence(&s);
            let k = psi.size() as i32;
            let f = ok!(psi.frac_conj());
            let a = ok!(psi.and_conj());
            for (x, y) in f.values().iter().zip(a.values()) {
                ensure!(close(x.to_f64().powi(k), y.to_f64(), FLOAT_TOL), "{} vs {}", x.to_f64().powi(k), y);
            }
            HOLDS
        }),
        prop("evidence.tensor_conj_validity", |g| {
            let s = g.space(1, 3);
            let w = g.dist(&s, false);
            let psi = g.evidence_with(&s, 4, |g, s| g.pred(s));
            let t = ok!(psi.tensor_conj());
            let lhs = v(&ok!(w.tensor_power(psi.size() as usize)), &t);
            let rhs: Scalar = psi.items().iter().map(|(p, n)| v(&w, p).pow(*n)).product();
            ensure!(lhs == rhs, "{lhs} vs {rhs}");
            HOLDS
        }),
        // validity
        prop("validity.linearity", |g| {
            let s = g.space(1, MAX_SPACE);
            let t = g.space(1, 4);
            let (w, rho) = (g.dist(&s, false), g.dist(&t, false));
            let (p, q, r) = (g.pred(&s), g.pred(&s), g.pred(&t));
            let c = g.unit();
            ensure!(v(&w, &ok!(p.add(&q))) == v(&w, &p) + v(&w, &q), "additivity");
            ensure!(v(&w, &ok!(p.scale(&c))) == &c * v(&w, &p), "homogeneity");
            ensure!(v(&w, &ok!(p.ortho())) == Scalar::one() - v(&w, &p), "orthosupplement");
            ensure!(v(&w, &ok!(p.conj(&q))) <= v(&w, &p), "monotonicity");
            let tensor = v(&ok!(w.tensor(&rho)), &ok!(p.tensor_factor(&r)));
            ensure!(tensor == v(&w, &p) * v(&rho, &r), "tensor");
            ensure!(v(&w, &ok!(p.conj(&q))) == v(&ok!(w.copy()), &ok!(p.tensor_factor(&q))), "copy");
            HOLDS
        }),
        prop("validity.matching_bound", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(2, 4);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let phi = g.multiset(&y, 6);
            let halve = g.bool();
            let mut psi = Evidence::empty(&x);
            for (k, i) in phi.support().enumerate() {
                let mut q = ok!(c.pull(&ok!(Factor::point_pred(y.label(i), &y))));
                if halve && k == 0 {
                    q = ok!(q.scale(&Scalar::ratio(1, 2)));
                }
                ok!(psi.insert(q, phi.counts()[i]));
            }
            ensure!(psi.match_status() != MatchStatus::NoMatch, "generated evidence does not match");
            for val in [ok!(jeffrey_validity(&w, &psi)), ok!(pearl_validity(&w, &psi))] {
                ensure!(!val.is_negative() && val <= Scalar::one(), "validity {val} outside [0,1]");
            }
            HOLDS
        }),
        prop("validity.perfect_match_normalization", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(2, 3);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let preds: Vec<Factor> =
                y.labels().iter().map(|l| c.pull(&Factor::point_pred(l, &y).expect("label")).expect("pull")).collect();
            if (0..preds.len()).any(|i| (0..i).any(|j| preds[i] == preds[j])) {
                return Outcome::Skipped;
            }
            let k = g.size(1, 4) as u64;
            let (mut sj, mut sp) = (Scalar::zero(), Scalar::zero());
            for phi in enumerate_multisets(&y, k) {
                let pairs = phi.counts().iter().zip(&preds).map(|(&n, p)| (p.clone(), n)).collect();
                let psi = ok!(Evidence::new(pairs));
                sj = sj + ok!(jeffrey_validity(&w, &psi));
                sp = sp + ok!(pearl_validity(&w, &psi));
            }
            ensure!(sj == Scalar::one() && sp == Scalar::one(), "K={k}: Jeffrey sum {sj}, Pearl sum {sp}");
            HOLDS
        }),
        prop("validity.point_evidence_is_multinomial", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let phi = g.multiset(&s, 6);
            let j = ok!(jeffrey_validity(&w, &Evidence::point(&phi)));
            let m = ok!(w.multinomial(phi.size()));
            ensure!(&j == ok!(m.weight(&phi.label())), "{phi}: {j}");
            HOLDS
        }),
        prop("validity.flrn_maximizes_point_validity", |g| {
            let s = g.space(1, MAX_SPACE);
            let phi = g.multiset(&s, 6);
            let psi = Evidence::point(&phi);
            let best = ok!(jeffrey_validity(&ok!(phi.flrn()), &psi));
            for _ in 0..10 {
                let rho = g.dist(&s, false);
                let val = ok!(jeffrey_validity(&rho, &psi));
                ensure!(val <= best, "{rho} beats Flrn({phi}): {val} > {best}");
            }
            HOLDS
        }),
        prop("validity.covariance_identity", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (p, q) = (g.pred(&s), g.pred(&s));
            if p == q {
                return Outcome::Skipped;
            }
            let psi = ok!(Evidence::new(vec![(p.clone(), 1), (q.clone(), 1)]));
            let half = Scalar::ratio(1, 2) * (ok!(pearl_validity(&w, &psi)) - ok!(jeffrey_validity(&w, &psi)));
            ensure!(ok!(covariance(&w, &p, &q)) == half, "Cov ≠ ½(P−J)");
            HOLDS
        }),
        prop("validity.log_likelihood_sign", |g| {
            let s = g.space(1, MAX_SPACE);
            let (w, w2) = (g.dist(&s, false), g.dist(&s, false));
            let psi = g.positive_evidence(&s);
            let score = ok!(log_likelihood_score(&w, &w2, &psi)).to_f64();
            if score.abs() < FLOAT_TOL {
                return Outcome::Skipped;
            }
            let le = ok!(jeffrey_validity(&w, &psi)) <= ok!(jeffrey_validity(&w2, &psi));
            ensure!((score <= 0.0) == le, "score {score} but J(ω) ≤ J(ω′) is {le}");
            HOLDS
        }),
        prop("validity.iterated_pearl", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let n = g.size(1, 4);
            let mut ps: Vec<Factor> = (0..n).map(|_| g.pred(&s)).collect();
            let target = v(&w, &conj_all(&s, &ps));
            ps.shuffle(&mut g.rng);
            let it = or_skip!(iterated_pearl_validity(&w, &ps));
            ensure!(it == target, "{it} vs {target}");
            HOLDS
        }),
        prop("validity.pearl_dominates_jeffrey_for_repeats", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let p = g.pred(&s);
            let psi = Evidence::single(&p, g.size(1, 6) as u64);
            ensure!(ok!(pearl_validity(&w, &psi)) >= ok!(jeffrey_validity(&w, &psi)), "Pearl < Jeffrey");
            HOLDS
        }),
        // Bayesian update laws
        prop("bayes.truth", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            ensure!(ok!(bayes_update(&w, &Factor::truth(&s))) == w, "ω|1 ≠ ω");
            HOLDS
        }),
        prop("bayes.conjunction", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (p, q) = (g.factor(&s), g.factor(&s));
            let lhs = or_skip!(bayes_update(&w, &ok!(p.conj(&q))));
            let rhs = ok!(bayes_update(&ok!(bayes_update(&w, &p)), &q));
            ensure!(lhs == rhs, "ω|(p&q) ≠ (ω|p)|q");
            HOLDS
        }),
        prop("bayes.order_irrelevant", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (p, q) = (g.factor(&s), g.factor(&s));
            let a = or_skip!(bayes_update(&w, &p).and_then(|x| bayes_update(&x, &q)));
            let b = ok!(bayes_update(&ok!(bayes_update(&w, &q)), &p));
            ensure!(a == b, "order matters");
            HOLDS
        }),
        prop("bayes.point", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let supp = w.support();
            let x = s.label(*supp.choose(&mut g.rng).expect("non-empty")).to_string();
            let u = ok!(bayes_update(&w, &ok!(Factor::point_pred(&x, &s))));
            ensure!(u == ok!(Dist::dirac(&x, &s)), "ω|1_{x} = {u}");
            HOLDS
        }),
        prop("bayes.scalar_invariance", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let p = g.factor(&s);
            let c = Scalar::ratio(g.rng.gen_range(1..=20), g.rng.gen_range(1..=20));
            let a = or_skip!(bayes_update(&w, &p));
            ensure!(ok!(bayes_update(&w, &ok!(p.scale(&c)))) == a, "ω|(s·p) ≠ ω|p for s={c}");
            HOLDS
        }),
        prop("bayes.product_rule", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (p, q) = (g.factor(&s), g.factor(&s));
            let u = or_skip!(bayes_update(&w, &p));
            ensure!(v(&u, &q) == v(&w, &ok!(p.conj(&q))) / v(&w, &p), "product rule");
            HOLDS
        }),
        prop("bayes.bayes_rule", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (p, q) = (g.factor(&s), g.factor(&s));
            let up = or_skip!(bayes_update(&w, &p));
            let uq = or_skip!(bayes_update(&w, &q));
            ensure!(v(&up, &q) == v(&uq, &p) * v(&w, &q) / v(&w, &p), "Bayes' rule");
            HOLDS
        }),
        prop("bayes.iterated_tensor", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let n = g.size(1, 3);
            let ps: Vec<Factor> = (0..n).map(|_| g.pred(&s)).collect();
            let mut states = vec![w.clone()];
            for p in &ps[..n - 1] {
                let last = states.last().expect("non-empty").clone();
                states.push(or_skip!(bayes_update(&last, p)));
            }
            let lhs = v(&ok!(Dist::tensor_all(&states)), &ok!(Factor::tensor_all(&ps)));
            let conj = v(&w, &conj_all(&s, &ps));
            ensure!(lhs == conj, "{lhs} vs {conj}");
            let psi = ok!(Evidence::new(ps.iter().map(|p| (p.clone(), 1)).collect()));
            let pearl = ok!(pearl_validity(&w, &psi)) / Scalar::from_biguint(psi.coefm());
            ensure!(pearl == conj, "Pearl/coefm {pearl} vs {conj}");
            HOLDS
        }),
        // validity gain
        prop("gain.single", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let p = g.factor(&s);
            let u = or_skip!(bayes_update(&w, &p));
            ensure!(v(&u, &p) >= v(&w, &p), "(ω|p)⊨p < ω⊨p");
            HOLDS
        }),
        prop("gain.uniform_mixture", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let n = g.size(1, 4);
            let ps: Vec<Factor> = (0..n).map(|_| g.factor(&s)).collect();
            let ups = or_skip!(ps.iter().map(|p| bayes_update(&w, p)).collect::<evupdate::Result<Vec<_>>>());
            let mix = ok!(Dist::convex_sum(&vec![Scalar::ratio(1, n as i64); n], &ups));
            let after: Scalar = ps.iter().map(|p| v(&mix, p)).product();
            let before: Scalar = ps.iter().map(|p| v(&w, p)).product();
            ensure!(after >= before, "{after} < {before}");
            HOLDS
        }),
        // Jeffrey
        prop("jeffrey.increases_validity", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let u = or_skip!(jeffrey_update(&w, &psi));
            ensure!(ok!(jeffrey_validity(&u, &psi)) >= ok!(jeffrey_validity(&w, &psi)), "decrease");
            HOLDS
        }),
        prop("jeffrey.point_kl_reduction", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let phi = g.multiset_in(&s, &w.support(), 6);
            let target = ok!(phi.flrn());
            let u = ok!(jeffrey_update(&w, &Evidence::point(&phi)));
            let (after, before) = (ok!(kl(&target, &u)), ok!(kl(&target, &w)));
            ensure!(after <= before + FLOAT_TOL, "{after} > {before}");
            HOLDS
        }),
        prop("jeffrey.more_of_the_same", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let n = g.size(2, 4) as u64;
            let u = or_skip!(jeffrey_update(&w, &psi));
            ensure!(ok!(jeffrey_update(&w, &psi.scale(n))) == u, "n·ψ changes the update");
            HOLDS
        }),
        exists("jeffrey.order_sensitive_witness", |g| {
            let s = g.space(2, MAX_SPACE);
            let w = g.dist(&s, false);
            let (psi, chi) = (g.evidence(&s), g.evidence(&s));
            let a = or_skip!(jeffrey_update(&w, &psi).and_then(|x| jeffrey_update(&x, &chi)));
            let b = or_skip!(jeffrey_update(&w, &chi).and_then(|x| jeffrey_update(&x, &psi)));
            if a != b {
                Outcome::Holds(Some(format!("ω={w}: ψ then χ gives {a}; χ then ψ gives {b}")))
            } else {
                Outcome::Skipped
            }
        }),
        fixed("jeffrey.order_medical_counterexample", |_| {
            let m = medical();
            let psi = ok!(Evidence::new(vec![(m.pt.clone(), 2), (m.nt.clone(), 1)]));
            let chi = ok!(Evidence::new(vec![(m.pt.clone(), 1), (m.nt.clone(), 2)]));
            let a = ok!(jeffrey_update(&ok!(jeffrey_update(&m.prior, &psi)), &chi)).at(0).to_f64();
            let b = ok!(jeffrey_update(&ok!(jeffrey_update(&m.prior, &chi)), &psi)).at(0).to_f64();
            ensure!((a - 0.059).abs() <= PRINTED_TOL, "ψ then χ: {a}");
            ensure!((b - 0.061).abs() <= PRINTED_TOL, "χ then ψ: {b}");
            ensure!(a != b, "orders agree");
            Outcome::Holds(Some(format!("ψ then χ: {a:.4}|d>, χ then ψ: {b:.4}|d>")))
        }),
        prop("jeffrey.fractional_point_evidence_no_effect", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let n = w
                .weights()
                .iter()
                .map(|x| x.as_rational().expect("exact").denom().clone())
                .fold(BigInt::from(1), |a, b| num_integer::Integer::lcm(&a, &b));
            let counts: Vec<u64> = w
                .weights()
                .iter()
                .map(|x| {
                    let c = x.as_rational().expect("exact") * BigRational::from_integer(n.clone());
                    num_traits::ToPrimitive::to_u64(&c.to_integer()).expect("small")
                })
                .collect();
            let phi = ok!(Multiset::from_counts(&s, counts));
            ensure!(ok!(jeffrey_update(&w, &Evidence::point(&phi))) == w, "ω⟨N·ω⟩ ≠ ω");
            HOLDS
        }),
        prop("jeffrey.fractional_convex_sum", |g| {
            // As stated, with weights n_i/n, this needs all ψ_i of equal size.
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let l = g.size(1, 3);
            let k = g.size(1, 3);
            let psis: Vec<Evidence> = (0..l).map(|_| sized_evidence(g, &s, k)).collect();
            let ns: Vec<u64> = (0..l).map(|_| g.size(1, 3) as u64).collect();
            fractional_convex_sum(&w, &psis, &ns, false)
        }),
        prop("jeffrey.fractional_convex_sum_size_weighted", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let l = g.size(1, 3);
            let psis: Vec<Evidence> = (0..l).map(|_| g.evidence_with(&s, 3, |g, s| g.pred(s))).collect();
            let ns: Vec<u64> = (0..l).map(|_| g.size(1, 3) as u64).collect();
            fractional_convex_sum(&w, &psis, &ns, true)
        }),
        // Pearl
        prop("pearl.increases_validity", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let u = or_skip!(pearl_update(&w, &psi));
            ensure!(ok!(pearl_validity(&u, &psi)) >= ok!(pearl_validity(&w, &psi)), "decrease");
            HOLDS
        }),
        prop("pearl.product_rule", |g| {
            // Holds for the conjunction validities ω ⊨ &ψ; with the multinomial
            // coefficients of ⊨P it needs the factor coefm(ψ)·coefm(χ)/coefm(ψ+χ).
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (psi, chi) = (g.evidence(&s), g.evidence(&s));
            let u = or_skip!(pearl_update(&w, &psi));
            let sum = ok!(psi.add(&chi));
            let raw = v(&u, &ok!(chi.and_conj()));
            ensure!(raw == v(&w, &ok!(sum.and_conj())) / v(&w, &ok!(psi.and_conj())), "conjunction form");
            let cf = Scalar::from_biguint(psi.coefm() * chi.coefm()) / Scalar::from_biguint(sum.coefm());
            let rhs = cf * ok!(pearl_validity(&w, &sum)) / ok!(pearl_validity(&w, &psi));
            ensure!(ok!(pearl_validity(&u, &chi)) == rhs, "coefficient form");
            HOLDS
        }),
        prop("pearl.bayes_rule", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (psi, chi) = (g.evidence(&s), g.evidence(&s));
            let up = or_skip!(pearl_update(&w, &psi));
            let uc = or_skip!(pearl_update(&w, &chi));
            let lhs = ok!(pearl_validity(&up, &chi));
            let rhs = ok!(pearl_validity(&uc, &psi)) * ok!(pearl_validity(&w, &chi)) / ok!(pearl_validity(&w, &psi));
            ensure!(lhs == rhs, "{lhs} vs {rhs}");
            HOLDS
        }),
        prop("pearl.updates_compose", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (psi, chi) = (g.evidence(&s), g.evidence(&s));
            let seq = or_skip!(pearl_update(&w, &psi).and_then(|x| pearl_update(&x, &chi)));
            ensure!(seq == ok!(pearl_update(&w, &ok!(psi.add(&chi)))), "ω⟨ψ⟩⟨χ⟩ ≠ ω⟨ψ+χ⟩");
            HOLDS
        }),
        prop("pearl.order_irrelevant", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let (psi, chi) = (g.evidence(&s), g.evidence(&s));
            let a = or_skip!(pearl_update(&w, &psi).and_then(|x| pearl_update(&x, &chi)));
            let b = ok!(pearl_update(&ok!(pearl_update(&w, &chi)), &psi));
            ensure!(a == b, "order matters");
            HOLDS
        }),
        prop("pearl.uniform_factors_teach_nothing", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence_with(&s, 6, |g, s| {
                let c = Scalar::ratio(g.rng.gen_range(1..=9), g.rng.gen_range(1..=9));
                Factor::constant(s, c).expect("positive")
            });
            ensure!(ok!(pearl_update(&w, &psi)) == w, "learned from scalars");
            HOLDS
        }),
        // VFE
        prop("vfe.softmax_matches_conjunction", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let a = or_skip!(vfe_update(&w, &psi));
            let b = ok!(vfe_update_softmax(&w, &psi));
            let d = a.max_abs_diff(&b);
            ensure!(d <= FLOAT_TOL, "forms differ by {d}");
            HOLDS
        }),
        prop("vfe.pearl_sandwich", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let f = or_skip!(vfe_update(&w, &psi));
            let p = ok!(pearl_update(&w, &psi));
            let (a, b, c) = (
                ok!(pearl_validity(&w, &psi)).to_f64(),
                ok!(pearl_validity(&f, &psi)).to_f64(),
                ok!(pearl_validity(&p, &psi)).to_f64(),
            );
            let tol = FLOAT_TOL * c.max(1.0);
            ensure!(a <= b + tol && b <= c + tol, "{a} ≤ {b} ≤ {c} fails");
            HOLDS
        }),
        prop("vfe.argmin_free_energy", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let f = or_skip!(vfe_update(&w, &psi));
            let best = ok!(free_energy_objective(&f, &w, &psi)).to_f64();
            let supp = f.support();
            for _ in 0..10 {
                let rho = dist_on(g, &s, &supp);
                let val = ok!(free_energy_objective(&rho, &w, &psi)).to_f64();
                ensure!(val >= best - FLOAT_TOL, "{rho}: {val} < {best}");
            }
            HOLDS
        }),
        prop("vfe.objective_gap_is_divergence", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.evidence(&s);
            let f = or_skip!(vfe_update(&w, &psi));
            let rho = dist_on(g, &s, &f.support());
            let gap = ok!(free_energy_objective(&rho, &w, &psi)).to_f64() - ok!(free_energy_objective(&f, &w, &psi)).to_f64();
            let d = ok!(kl(&rho, &f));
            ensure!((gap - d).abs() <= FLOAT_TOL, "gap {gap} vs DKL {d}");
            HOLDS
        }),
        prop("vfe.repeated_factor_is_bayes", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let p = g.pred(&s);
            let b = or_skip!(bayes_update(&w, &p));
            let f = ok!(vfe_update(&w, &Evidence::single(&p, g.size(1, 6) as u64)));
            ensure!(f.approx_eq(&b, FLOAT_TOL), "{f} vs {b}");
            HOLDS
        }),
        fixed("vfe.jeffrey_validity_can_drop", |_| {
            let m = medical();
            let chi = ok!(Evidence::new(vec![(m.pt.clone(), 1), (m.nt.clone(), 1)]));
            let before = ok!(jeffrey_validity(&m.prior, &chi)).to_f64();
            let after = ok!(jeffrey_validity(&ok!(vfe_update(&m.prior, &chi)), &chi)).to_f64();
            ensure!((before - 0.489).abs() <= PRINTED_TOL, "before {before}");
            ensure!((after - 0.486).abs() <= PRINTED_TOL, "after {after}");
            ensure!(before > after, "no drop");
            Outcome::Holds(Some(format!("Jeffrey validity {before:.5} before, {after:.5} after")))
        }),
        // channels
        prop("channel.adjunction", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, MAX_SPACE);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let q = g.factor(&y);
            ensure!(v(&ok!(c.push(&w)), &q) == v(&w, &ok!(c.pull(&q))), "(c≫ω)⊨q ≠ ω⊨(c⪻q)");
            HOLDS
        }),
        prop("channel.jeffrey_along", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, MAX_SPACE);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let psi = g.evidence(&y);
            let lhs = ok!(jeffrey_validity_along(&w, &c, &psi));
            ensure!(lhs == ok!(jeffrey_validity(&ok!(c.push(&w)), &psi)), "Jeffrey along channel");
            HOLDS
        }),
        exists("channel.pearl_along_differs", |g| {
            let x = g.space(2, MAX_SPACE);
            let y = g.space(2, MAX_SPACE);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let psi = g.evidence(&y);
            let a = ok!(pearl_validity_along(&w, &c, &psi));
            let b = ok!(pearl_validity(&ok!(c.push(&w)), &psi));
            if a != b {
                Outcome::Holds(Some(format!("ω⊨P(c⋘ψ) = {} but (c≫ω)⊨Pψ = {}", a.to_f64(), b.to_f64())))
            } else {
                Outcome::Skipped
            }
        }),
        prop("channel.point_jeffrey_is_multinomial", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, 4);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let phi = g.multiset(&y, 6);
            let lhs = ok!(jeffrey_validity_along(&w, &c, &Evidence::point(&phi)));
            let mn = ok!(ok!(c.push(&w)).multinomial(phi.size()));
            ensure!(&lhs == ok!(mn.weight(&phi.label())), "{phi}");
            HOLDS
        }),
        prop("channel.jeffrey_divergence_decrease", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, MAX_SPACE);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let pred = ok!(c.push(&w));
            let phi = g.multiset_in(&y, &pred.support(), 6);
            let u = or_skip!(jeffrey_update_along(&w, &c, &Evidence::point(&phi)));
            let target = ok!(phi.flrn());
            let (after, before) = (ok!(kl(&target, &ok!(c.push(&u)))), ok!(kl(&target, &pred)));
            ensure!(after <= before + FLOAT_TOL, "{after} > {before}");
            HOLDS
        }),
        prop("channel.dagger_is_jeffrey", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, MAX_SPACE);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let d = or_skip!(c.dagger(&w));
            let phi = g.multiset(&y, 6);
            let lhs = ok!(d.push(&ok!(phi.flrn())));
            ensure!(lhs == ok!(jeffrey_update_along(&w, &c, &Evidence::point(&phi))), "c†ω ≫ Flrn(ψ) ≠ ω⟨J c⋘ψ⟩");
            HOLDS
        }),
        prop("channel.multinomial_pearl_validity", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, 4);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let phi = g.multiset(&y, 4);
            let mc = ok!(c.multinomial_channel(phi.size()));
            let lhs = ok!(mc.push(&w));
            let rhs = ok!(pearl_validity_along(&w, &c, &Evidence::point(&phi)));
            ensure!(ok!(lhs.weight(&phi.label())) == &rhs, "{phi}");
            HOLDS
        }),
        prop("channel.multinomial_pearl_update", |g| {
            let x = g.space(1, MAX_SPACE);
            let y = g.space(1, 4);
            let c = g.channel(&x, &y, false);
            let w = g.dist(&x, false);
            let phi = g.multiset(&y, 4);
            let u = or_skip!(pearl_update_along(&w, &c, &Evidence::point(&phi)));
            let mc = ok!(c.multinomial_channel(phi.size()));
            let ind = ok!(Factor::point_pred(&phi.label(), mc.cod()));
            ensure!(u == ok!(bayes_update(&w, &ok!(mc.pull(&ind)))), "{phi}");
            HOLDS
        }),
        // divergence
        prop("divergence.nonnegative_zero_iff_equal", |g| {
            let s = g.space(1, MAX_SPACE);
            let (a, b) = (g.dist(&s, false), g.dist(&s, true));
            let d = ok!(kl(&a, &b));
            ensure!(d >= 0.0, "negative divergence {d}");
            ensure!((d == 0.0) == (a == b), "DKL={d} but equal={}", a == b);
            ensure!(ok!(kl(&a, &a)) == 0.0, "DKL(ω,ω) ≠ 0");
            HOLDS
        }),
        exists("divergence.asymmetric_witness", |g| {
            let s = g.space(2, MAX_SPACE);
            let (a, b) = (g.dist(&s, true), g.dist(&s, true));
            let (x, y) = (ok!(kl(&a, &b)), ok!(kl(&b, &a)));
            if (x - y).abs() > FLOAT_TOL {
                Outcome::Holds(Some(format!("DKL({a}, {b}) = {x:.6}, reversed {y:.6}")))
            } else {
                Outcome::Skipped
            }
        }),
        prop("divergence.kl_order_equivalence", |g| {
            let s = g.space(1, MAX_SPACE);
            let (w, w2) = (g.dist(&s, true), g.dist(&s, true));
            let phi = g.multiset(&s, 6);
            let psi = Evidence::point(&phi);
            let target = ok!(phi.flrn());
            let (d1, d2) = (ok!(kl(&target, &w)), ok!(kl(&target, &w2)));
            if (d1 - d2).abs() < FLOAT_TOL {
                return Outcome::Skipped;
            }
            let le = ok!(jeffrey_validity(&w, &psi)) <= ok!(jeffrey_validity(&w2, &psi));
            ensure!(le == (d1 >= d2), "J(ω)≤J(ω′) is {le} but DKL {d1} vs {d2}");
            HOLDS
        }),
        prop("divergence.channel_lower_bound", |g| {
            let z = g.space(1, MAX_SPACE);
            let x = g.space(1, MAX_SPACE);
            let c = g.channel(&z, &x, true);
            let sigma = g.dist(&z, false);
            let rho = g.dist(&x, false);
            let e = ok!(expected_channel_divergence(&sigma, &rho, &c)).to_f64();
            let d = ok!(kl(&rho, &ok!(c.push(&sigma))));
            ensure!(e >= d - FLOAT_TOL, "{e} < {d}");
            HOLDS
        }),
        prop("divergence.update_lower_bound", |g| {
            let s = g.space(1, MAX_SPACE);
            let w = g.dist(&s, false);
            let psi = g.positive_evidence(&s);
            let j = ok!(jeffrey_update(&w, &psi));
            let rho = dist_on(g, &s, &w.support());
            let e = ok!(free_energy_objective(&rho, &w, &psi)).to_f64();
            let d = ok!(kl(&rho, &j));
            ensure!(e >= d - FLOAT_TOL, "{e} < {d}");
            HOLDS
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_suites_resolve() {
        let ps = properties();
        let mut ids: Vec<&str> = ps.iter().map(|p| p.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), ps.len());
        for s in SUITES {
            assert!(!suite(s).unwrap().is_empty(), "{s}");
        }
        assert!(matches!(suite("unknown"), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn deterministic() {
        let a = run_suite("jeffrey-order", 50, 7).unwrap().to_string();
        let b = run_suite("jeffrey-order", 50, 7).unwrap().to_string();
        assert_eq!(a, b);
        assert!(a.contains("jeffrey.order_medical_counterexample"));
    }

    #[test]
    fn detects_failures() {
        let bad = Property { id: "bad", quantifier: Quantifier::ForAll, check: |g| {
            if g.bool() { Outcome::Violated("boom".into()) } else { HOLDS }
        }};
        let r = run_property(&bad, 20, 1);
        assert!(!r.passed);
        assert!(r.detail.unwrap().contains("boom"));
        let none = Property { id: "none", quantifier: Quantifier::Exists, check: |_| Outcome::Skipped };
        assert!(!run_property(&none, 5, 1).passed);
    }
}
