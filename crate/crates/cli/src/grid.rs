//! Parameter grids over point evidence `i|pos⟩ + j|neg⟩`.

use std::fmt;
use std::str::FromStr;

use evupdate::channel::{jeffrey_update_along, jeffrey_validity_along, pearl_update_along, pearl_validity_along};
use evupdate::divergence::kl_divergence;
use evupdate::update::vfe_update;
use evupdate::{Channel, Dist, Evidence, Multiset, Scalar};
use rayon::prelude::*;

use crate::builtin::medical;
use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    JeffreyValidity,
    PearlValidity,
    JeffreyUpdate,
    PearlUpdate,
    VfeUpdate,
    VfeDklDelta,
}

impl GridMode {
    pub const ALL: [GridMode; 6] = [
        GridMode::JeffreyValidity,
        GridMode::PearlValidity,
        GridMode::JeffreyUpdate,
        GridMode::PearlUpdate,
        GridMode::VfeUpdate,
        GridMode::VfeDklDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GridMode::JeffreyValidity => "jeffrey-validity",
            GridMode::PearlValidity => "pearl-validity",
            GridMode::JeffreyUpdate => "jeffrey-update",
            GridMode::PearlUpdate => "pearl-update",
            GridMode::VfeUpdate => "vfe-update",
            GridMode::VfeDklDelta => "vfe-dkl-delta",
        }
    }
}

impl fmt::Display for GridMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<GridMode> {
        GridMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Invalid(format!("unknown grid mode `{s}`")))
    }
}

/// A grid of evidence `i|pos⟩ + j|neg⟩` for `1 ≤ i ≤ imax`, `1 ≤ j ≤ jmax`,
/// pulled back along `channel` to `prior`.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub mode: GridMode,
    pub imax: u64,
    pub jmax: u64,
    pub channel: Channel,
    pub prior: Dist,
    pub pos: String,
    pub neg: String,
}

impl GridSpec {
    /// The medical test grid.
    pub fn medical(mode: GridMode, imax: u64, jmax: u64) -> GridSpec {
        let m = medical();
        GridSpec { mode, imax, jmax, channel: m.test, prior: m.prior, pos: "p".into(), neg: "n".into() }
    }

    fn evidence(&self, i: u64, j: u64) -> Result<Multiset> {
        Ok(Multiset::from_pairs(self.channel.cod(), &[(self.pos.as_str(), i), (self.neg.as_str(), j)])?)
    }

    /// The value of one cell. Updates report the posterior probability of
    /// the first domain element; `vfe-dkl-delta` reports posterior minus
    /// prior divergence of the predicted outcomes from the observed
    /// frequencies, in nats.
    pub fn cell(&self, i: u64, j: u64) -> Result<Scalar> {
        let at = |e: evupdate::Error| CliError::Cell { i, j, source: e };
        let phi = self.evidence(i, j)?;
        let psi = Evidence::point(&phi);
        let (c, w) = (&self.channel, &self.prior);
        let v = match self.mode {
            GridMode::JeffreyValidity => jeffrey_validity_along(w, c, &psi).map_err(at)?,
            GridMode::PearlValidity => pearl_validity_along(w, c, &psi).map_err(at)?,
            GridMode::JeffreyUpdate => jeffrey_update_along(w, c, &psi).map_err(at)?.at(0).clone(),
            GridMode::PearlUpdate => pearl_update_along(w, c, &psi).map_err(at)?.at(0).clone(),
            GridMode::VfeUpdate => vfe_update(w, &c.triple_pull(&psi).map_err(at)?).map_err(at)?.at(0).clone(),
            GridMode::VfeDklDelta => {
                let (before, after) = self.vfe_divergences(&phi).map_err(at)?;
                Scalar::Float(after - before)
            }
        };
        Ok(v)
    }

    /// `(DKL(Flrn φ, c ≫ ω), DKL(Flrn φ, c ≫ ω⟨F c⋘φ⟩))` in nats.
    pub fn vfe_divergences(&self, phi: &Multiset) -> evupdate::Result<(f64, f64)> {
        let c = &self.channel;
        let target = phi.flrn()?;
        let post = vfe_update(&self.prior, &c.triple_pull(&Evidence::point(phi))?)?;
        let before = kl_divergence(&target, &c.push(&self.prior)?)?.to_f64();
        let after = kl_divergence(&target, &c.push(&post)?)?.to_f64();
        Ok((before, after))
    }

    /// All cells in row-major order, computed in parallel.
    pub fn compute(&self) -> Result<Vec<(u64, u64, Scalar)>> {
        if self.imax < 1 || self.jmax < 1 {
            return Err(CliError::Invalid("imax and jmax must be at least 1".into()));
        }
        let cells: Vec<(u64, u64)> =
            (1..=self.imax).flat_map(|i| (1..=self.jmax).map(move |j| (i, j))).collect();
        cells.par_iter().map(|&(i, j)| self.cell(i, j).map(|v| (i, j, v))).collect()
    }
}

/// Significant digits used for grid output.
pub const GRID_DIGITS: usize = 12;

pub fn to_csv(cells: &[(u64, u64, Scalar)]) -> String {
    let mut out = String::from("i,j,value\n");
    for (i, j, v) in cells {
        out.push_str(&format!("{i},{j},{}\n", v.to_sig_digits(GRID_DIGITS)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jeffrey_update_cell() {
        let g = GridSpec::medical(GridMode::JeffreyUpdate, 2, 1);
        assert_eq!(g.cell(2, 1).unwrap(), Scalar::ratio(431, 5865));
        let csv = to_csv(&g.compute().unwrap());
        assert!(csv.starts_with("i,j,value\n1,1,"));
        assert!(csv.contains("\n2,1,0.0734867860188\n"));
    }

    #[test]
    fn validity_cells_are_exact() {
        let g = GridSpec::medical(GridMode::JeffreyValidity, 2, 1);
        assert_eq!(g.cell(2, 1).unwrap(), Scalar::ratio(19941, 64000));
        let g = GridSpec::medical(GridMode::PearlValidity, 2, 1);
        assert_eq!(g.cell(2, 1).unwrap(), Scalar::ratio(1143, 4000));
    }

    #[test]
    fn modes_parse() {
        for m in GridMode::ALL {
            assert_eq!(m.name().parse::<GridMode>().unwrap(), m);
        }
        assert!("bogus".parse::<GridMode>().is_err());
        assert!(GridSpec::medical(GridMode::VfeUpdate, 0, 3).compute().is_err());
    }
}
