//! JSON model files and the `eval` expression language.
//!
//! A model file names spaces and entities that refer to those spaces by id:
//!
//! ```json
//! {
//!   "spaces": { "D": ["d", "~d"], "T": ["p", "n"] },
//!   "distributions": { "prior": { "space": "D", "weights": ["1/20", "19/20"] } },
//!   "factors": { "pt": { "space": "D", "values": ["9/10", "2/5"] } },
//!   "multisets": { "obs": { "space": "T", "counts": [{ "element": "p", "count": 2 }] } },
//!   "evidence": { "psi": [{ "factor": "pt", "count": 2 }] },
//!   "channels": { "test": { "dom": "D", "cod": "T", "rows": [
//!       { "space": "T", "weights": ["9/10", "1/10"] },
//!       { "space": "T", "weights": ["2/5", "3/5"] } ] } }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use evupdate::channel::{
    jeffrey_update_along, jeffrey_validity_along, pearl_update_along, pearl_validity_along,
};
use evupdate::divergence::{kl_divergence, kl_divergence_bits};
use evupdate::multiset::CountEntry;
use evupdate::update::{
    bayes_update, free_energy_objective, jeffrey_update, pearl_update, vfe_update, vfe_update_softmax,
};
use evupdate::validity::{
    covariance, iterated_pearl_validity, jeffrey_validity, log_likelihood_score, pearl_validity, validity,
};
use evupdate::{Channel, Dist, Evidence, Factor, MatchStatus, Multiset, SampleSpace, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub distributions: BTreeMap<String, DistEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub factors: BTreeMap<String, FactorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub multisets: BTreeMap<String, MultisetEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub evidence: BTreeMap<String, Vec<EvidenceEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub channels: BTreeMap<String, ChannelEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistEntry {
    pub space: String,
    pub weights: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub space: String,
    pub values: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultisetEntry {
    pub space: String,
    pub counts: Vec<CountEntry>,
}

impl PartialEq for MultisetEntry {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a.element == b.element && a.count == b.count)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceEntry {
    pub factor: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelEntry {
    pub dom: String,
    pub cod: String,
    pub rows: Vec<DistEntry>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<ModelFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        ModelFile::parse(&text)
    }

    /// Pretty JSON with a trailing newline; stable across round trips.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    /// Resolve references and validate every entity.
    pub fn resolve(&self) -> Result<Model> {
        let mut m = Model::default();
        for (id, labels) in &self.spaces {
            let s = SampleSpace::new(labels.clone()).map_err(|e| ctx(id, e))?;
            m.spaces.insert(id.clone(), s);
        }
        let space = |id: &str, owner: &str| {
            m.spaces
                .get(id)
                .cloned()
                .ok_or_else(|| CliError::Resolution(format!("`{owner}` refers to unknown space `{id}`")))
        };
        let mut dists = BTreeMap::new();
        for (id, d) in &self.distributions {
            let s = space(&d.space, id)?;
            dists.insert(id.clone(), Dist::new(&s, d.weights.clone()).map_err(|e| ctx(id, e))?);
        }
        let mut factors = BTreeMap::new();
        for (id, f) in &self.factors {
            let s = space(&f.space, id)?;
            factors.insert(id.clone(), Factor::new(&s, f.values.clone()).map_err(|e| ctx(id, e))?);
        }
        let mut multisets = BTreeMap::new();
        for (id, ms) in &self.multisets {
            let s = space(&ms.space, id)?;
            let pairs: Vec<(&str, u64)> = ms.counts.iter().map(|c| (c.element.as_str(), c.count)).collect();
            multisets.insert(id.clone(), Multiset::from_pairs(&s, &pairs).map_err(|e| ctx(id, e))?);
        }
        let mut evidence = BTreeMap::new();
        for (id, entries) in &self.evidence {
            let pairs = entries
                .iter()
                .map(|e| {
                    factors.get(&e.factor).cloned().map(|f| (f, e.count)).ok_or_else(|| {
                        CliError::Resolution(format!("`{id}` refers to unknown factor `{}`", e.factor))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            evidence.insert(id.clone(), Evidence::new(pairs).map_err(|e| ctx(id, e))?);
        }
        let mut channels = BTreeMap::new();
        for (id, c) in &self.channels {
            let dom = space(&c.dom, id)?;
            let cod = space(&c.cod, id)?;
            let rows = c
                .rows
                .iter()
                .map(|r| {
                    let s = space(&r.space, id)?;
                    Dist::new(&s, r.weights.clone()).map_err(|e| ctx(id, e))
                })
                .collect::<Result<Vec<_>>>()?;
            channels.insert(id.clone(), Channel::new(&dom, &cod, rows).map_err(|e| ctx(id, e))?);
        }
        m.dists = dists;
        m.factors = factors;
        m.multisets = multisets;
        m.evidence = evidence;
        m.channels = channels;
        Ok(m)
    }
}

fn ctx(id: &str, e: evupdate::Error) -> CliError {
    CliError::Invalid(format!("`{id}`: {e}"))
}

/// A resolved model.
#[derive(Clone, Debug, Default)]
pub struct Model {
    pub spaces: BTreeMap<String, SampleSpace>,
    pub dists: BTreeMap<String, Dist>,
    pub factors: BTreeMap<String, Factor>,
    pub multisets: BTreeMap<String, Multiset>,
    pub evidence: BTreeMap<String, Evidence>,
    pub channels: BTreeMap<String, Channel>,
}

/// A parsed expression `op(arg, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub op: String,
    pub args: Vec<String>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '~'
}

impl Expr {
    /// Parse `name(arg, arg, ...)`. Errors carry a 1-based column.
    pub fn parse(src: &str) -> Result<Expr> {
        let err = |col: usize, msg: &str| CliError::Parse { line: 1, column: col + 1, message: msg.to_string() };
        let chars: Vec<char> = src.chars().collect();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let ident = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            while *pos < chars.len() && is_ident_char(chars[*pos]) {
                *pos += 1;
            }
            (start < *pos).then(|| chars[start..*pos].iter().collect())
        };
        skip_ws(&mut pos);
        let op = ident(&mut pos).ok_or_else(|| err(pos, "expected an operation name"))?;
        skip_ws(&mut pos);
        if chars.get(pos) != Some(&'(') {
            return Err(err(pos, "expected `(`"));
        }
        pos += 1;
        let mut args = Vec::new();
        skip_ws(&mut pos);
        if chars.get(pos) == Some(&')') {
            pos += 1;
        } else {
            loop {
                skip_ws(&mut pos);
                let a = ident(&mut pos).ok_or_else(|| err(pos, "expected an argument"))?;
                args.push(a);
                skip_ws(&mut pos);
                match chars.get(pos) {
                    Some(',') => pos += 1,
                    Some(')') => {
                        pos += 1;
                        break;
                    }
                    _ => return Err(err(pos, "expected `,` or `)`")),
                }
            }
        }
        skip_ws(&mut pos);
        if pos != chars.len() {
            return Err(err(pos, "unexpected trailing input"));
        }
        Ok(Expr { op, args })
    }
}

/// Operations understood by `eval`, with their argument kinds.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("validity", "dist, factor"),
    ("jeffrey_validity", "dist, evidence"),
    ("pearl_validity", "dist, evidence"),
    ("iterated_pearl_validity", "dist, factor..."),
    ("covariance", "dist, factor, factor"),
    ("log_likelihood_score", "dist, dist, evidence"),
    ("bayes_update", "dist, factor"),
    ("jeffrey_update", "dist, evidence"),
    ("pearl_update", "dist, evidence"),
    ("vfe_update", "dist, evidence"),
    ("vfe_update_softmax", "dist, evidence"),
    ("free_energy_objective", "dist, dist, evidence"),
    ("jeffrey_validity_along", "dist, channel, evidence"),
    ("pearl_validity_along", "dist, channel, evidence"),
    ("jeffrey_update_along", "dist, channel, evidence"),
    ("pearl_update_along", "dist, channel, evidence"),
    ("flrn", "multiset"),
    ("coefm", "multiset|evidence"),
    ("size", "multiset|evidence"),
    ("multinomial", "K, dist"),
    ("tensor", "dist, dist"),
    ("push", "channel, dist"),
    ("pull", "channel, factor"),
    ("triple_pull", "channel, evidence"),
    ("dagger", "channel, dist"),
    ("kl_divergence", "dist, dist"),
    ("kl_divergence_bits", "dist, dist"),
    ("and_conj", "evidence"),
    ("frac_conj", "evidence"),
    ("match_status", "evidence"),
    ("conj", "factor, factor"),
    ("add", "factor, factor"),
    ("ortho", "factor"),
];

impl Model {
    fn dist(&self, id: &str) -> Result<&Dist> {
        self.dists.get(id).ok_or_else(|| CliError::Resolution(format!("no distribution named `{id}`")))
    }

    fn factor(&self, id: &str) -> Result<&Factor> {
        self.factors.get(id).ok_or_else(|| CliError::Resolution(format!("no factor named `{id}`")))
    }

    fn multiset(&self, id: &str) -> Result<&Multiset> {
        self.multisets.get(id).ok_or_else(|| CliError::Resolution(format!("no multiset named `{id}`")))
    }

    fn channel(&self, id: &str) -> Result<&Channel> {
        self.channels.get(id).ok_or_else(|| CliError::Resolution(format!("no channel named `{id}`")))
    }

    /// Evidence by name; a multiset name stands for its point evidence.
    fn evidence(&self, id: &str) -> Result<Evidence> {
        if let Some(e) = self.evidence.get(id) {
            return Ok(e.clone());
        }
        if let Some(m) = self.multisets.get(id) {
            return Ok(Evidence::point(m));
        }
        Err(CliError::Resolution(format!("no evidence or multiset named `{id}`")))
    }

    pub fn eval(&self, expr: &Expr) -> Result<String> {
        let a = &expr.args;
        let arity = |n: usize| -> Result<()> {
            if a.len() == n {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("`{}` takes {n} argument(s), got {}", expr.op, a.len())))
            }
        };
        let s = |v: Scalar| v.to_string();
        let out = match expr.op.as_str() {
            "validity" => {
                arity(2)?;
                s(validity(self.dist(&a[0])?, self.factor(&a[1])?)?)
            }
            "jeffrey_validity" => {
                arity(2)?;
                s(jeffrey_validity(self.dist(&a[0])?, &self.evidence(&a[1])?)?)
            }
            "pearl_validity" => {
                arity(2)?;
                s(pearl_validity(self.dist(&a[0])?, &self.evidence(&a[1])?)?)
            }
            "iterated_pearl_validity" => {
                if a.len() < 2 {
                    return Err(CliError::Invalid("`iterated_pearl_validity` needs a distribution and factors".into()));
                }
                let ps = a[1..].iter().map(|id| self.factor(id).cloned()).collect::<Result<Vec<_>>>()?;
                s(iterated_pearl_validity(self.dist(&a[0])?, &ps)?)
            }
            "covariance" => {
                arity(3)?;
                s(covariance(self.dist(&a[0])?, self.factor(&a[1])?, self.factor(&a[2])?)?)
            }
            "log_likelihood_score" => {
                arity(3)?;
                s(log_likelihood_score(self.dist(&a[0])?, self.dist(&a[1])?, &self.evidence(&a[2])?)?)
            }
            "bayes_update" => {
                arity(2)?;
                bayes_update(self.dist(&a[0])?, self.factor(&a[1])?)?.to_string()
            }
            "jeffrey_update" => {
                arity(2)?;
                jeffrey_update(self.dist(&a[0])?, &self.evidence(&a[1])?)?.to_string()
            }
            "pearl_update" => {
                arity(2)?;
                pearl_update(self.dist(&a[0])?, &self.evidence(&a[1])?)?.to_string()
            }
            "vfe_update" => {
                arity(2)?;
                vfe_update(self.dist(&a[0])?, &self.evidence(&a[1])?)?.to_string()
            }
            "vfe_update_softmax" => {
                arity(2)?;
                vfe_update_softmax(self.dist(&a[0])?, &self.evidence(&a[1])?)?.to_string()
            }
            "free_energy_objective" => {
                arity(3)?;
                s(free_energy_objective(self.dist(&a[0])?, self.dist(&a[1])?, &self.evidence(&a[2])?)?)
            }
            "jeffrey_validity_along" => {
                arity(3)?;
                s(jeffrey_validity_along(self.dist(&a[0])?, self.channel(&a[1])?, &self.evidence(&a[2])?)?)
            }
            "pearl_validity_along" => {
                arity(3)?;
                s(pearl_validity_along(self.dist(&a[0])?, self.channel(&a[1])?, &self.evidence(&a[2])?)?)
            }
            "jeffrey_update_along" => {
                arity(3)?;
                jeffrey_update_along(self.dist(&a[0])?, self.channel(&a[1])?, &self.evidence(&a[2])?)?.to_string()
            }
            "pearl_update_along" => {
                arity(3)?;
                pearl_update_along(self.dist(&a[0])?, self.channel(&a[1])?, &self.evidence(&a[2])?)?.to_string()
            }
            "flrn" => {
                arity(1)?;
                self.multiset(&a[0])?.flrn()?.to_string()
            }
            "coefm" | "size" => {
                arity(1)?;
                let (c, k) = match self.multisets.get(&a[0]) {
                    Some(m) => (m.coefm(), m.size()),
                    None => {
                        let e = self.evidence(&a[0])?;
                        (e.coefm(), e.size())
                    }
                };
                if expr.op == "coefm" {
                    c.to_string()
                } else {
                    k.to_string()
                }
            }
            "multinomial" => {
                arity(2)?;
                let k: u64 = a[0]
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("`{}` is not a natural number", a[0])))?;
                self.dist(&a[1])?.multinomial(k)?.to_string()
            }
            "tensor" => {
                arity(2)?;
                self.dist(&a[0])?.tensor(self.dist(&a[1])?)?.to_string()
            }
            "push" => {
                arity(2)?;
                self.channel(&a[0])?.push(self.dist(&a[1])?)?.to_string()
            }
            "pull" => {
                arity(2)?;
                self.channel(&a[0])?.pull(self.factor(&a[1])?)?.to_string()
            }
            "triple_pull" => {
                arity(2)?;
                self.channel(&a[0])?.triple_pull(&self.evidence(&a[1])?)?.to_string()
            }
            "dagger" => {
                arity(2)?;
                let d = self.channel(&a[0])?.dagger(self.dist(&a[1])?)?;
                let rows: Vec<String> =
                    d.rows().iter().enumerate().map(|(i, r)| format!("{} -> {r}", d.dom().label(i))).collect();
                rows.join("\n")
            }
            "kl_divergence" => {
                arity(2)?;
                s(kl_divergence(self.dist(&a[0])?, self.dist(&a[1])?)?)
            }
            "kl_divergence_bits" => {
                arity(2)?;
                s(kl_divergence_bits(self.dist(&a[0])?, self.dist(&a[1])?)?)
            }
            "and_conj" => {
                arity(1)?;
                self.evidence(&a[0])?.and_conj()?.to_string()
            }
            "frac_conj" => {
                arity(1)?;
                self.evidence(&a[0])?.frac_conj()?.to_string()
            }
            "match_status" => {
                arity(1)?;
                match self.evidence(&a[0])?.match_status() {
                    MatchStatus::NoMatch => "no-match",
                    MatchStatus::Match => "match",
                    MatchStatus::PerfectMatch => "perfect-match",
                }
                .to_string()
            }
            "conj" => {
                arity(2)?;
                self.factor(&a[0])?.conj(self.factor(&a[1])?)?.to_string()
            }
            "add" => {
                arity(2)?;
                self.factor(&a[0])?.add(self.factor(&a[1])?)?.to_string()
            }
            "ortho" => {
                arity(1)?;
                self.factor(&a[0])?.ortho()?.to_string()
            }
            other => return Err(CliError::Invalid(format!("unknown operation `{other}`"))),
        };
        Ok(out)
    }
}

/// The medical model as a model file (used by examples and tests).
pub fn medical_model_json() -> &'static str {
    include_str!("../models/medical.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_parsing() {
        assert_eq!(
            Expr::parse(" validity( prior ,pt )").unwrap(),
            Expr { op: "validity".into(), args: vec!["prior".into(), "pt".into()] }
        );
        assert_eq!(Expr::parse("f()").unwrap().args.len(), 0);
        match Expr::parse("validity(prior pt)") {
            Err(CliError::Parse { line: 1, column: 16, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(Expr::parse("validity"), Err(CliError::Parse { .. })));
        assert!(matches!(Expr::parse("f(a) x"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn medical_model() {
        let m = ModelFile::parse(medical_model_json()).unwrap().resolve().unwrap();
        let ev = |s: &str| m.eval(&Expr::parse(s).unwrap()).unwrap();
        assert_eq!(ev("validity(prior, pt)"), "17/40");
        assert_eq!(ev("jeffrey_validity(prior, psi)"), "19941/64000");
        assert_eq!(ev("pearl_update(prior, psi)"), "27/635|d> + 608/635|~d>");
        assert_eq!(ev("flrn(urn)"), "1/2|R> + 1/5|B> + 3/10|G>");
        assert_eq!(ev("jeffrey_update_along(prior, test, tests)"), "431/5865|d> + 5434/5865|~d>");
        assert_eq!(ev("match_status(psi)"), "perfect-match");
        assert_eq!(ev("coefm(psi)"), "3");
        assert!(matches!(m.eval(&Expr::parse("validity(nope, pt)").unwrap()), Err(CliError::Resolution(_))));
        assert!(matches!(m.eval(&Expr::parse("frobnicate(pt)").unwrap()), Err(CliError::Invalid(_))));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let a = ModelFile::parse(medical_model_json()).unwrap().to_json();
        let b = ModelFile::parse(&a).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_files() {
        match ModelFile::parse("{\n  \"spaces\": {\"D\": [\"d\",]\n}") {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        let dangling = r#"{"factors": {"p": {"space": "X", "values": ["1"]}}}"#;
        assert!(matches!(ModelFile::parse(dangling).unwrap().resolve(), Err(CliError::Resolution(_))));
        let bad = r#"{"spaces": {"X": ["a","b"]}, "distributions": {"w": {"space": "X", "weights": ["1/2","1/3"]}}}"#;
        assert!(matches!(ModelFile::parse(bad).unwrap().resolve(), Err(CliError::Invalid(_))));
    }
}
