//! Exact discrete probabilistic updating with multiple pieces of evidence.
//!
//! Distributions, factors and channels over finite sample spaces, with
//! Bayesian, Jeffrey, Pearl and free-energy (VFE) update rules. Everything
//! that needs no logarithm is computed in exact rational arithmetic.
//!
//! ```
//! use evupdate::{Dist, Evidence, Factor, SampleSpace, Scalar};
//! use evupdate::validity::{jeffrey_validity, pearl_validity};
//!
//! let s = SampleSpace::new(["d", "~d"]).unwrap();
//! let prior = Dist::new(&s, vec![Scalar::ratio(1, 20), Scalar::ratio(19, 20)]).unwrap();
//! let pos = Factor::new(&s, vec![Scalar::ratio(9, 10), Scalar::ratio(2, 5)]).unwrap();
//! let neg = pos.ortho().unwrap();
//! let psi = Evidence::new(vec![(pos, 2), (neg, 1)]).unwrap();
//! assert_eq!(jeffrey_validity(&prior, &psi).unwrap().to_string(), "19941/64000");
//! assert_eq!(pearl_validity(&prior, &psi).unwrap().to_string(), "1143/4000");
//! ```

pub mod channel;
pub mod dist;
pub mod divergence;
pub mod error;
pub mod evidence;
pub mod multiset;
pub mod scalar;
pub mod space;
pub mod update;
pub mod validity;

pub use channel::Channel;
pub use dist::Dist;
pub use error::{Error, Result};
pub use evidence::{Evidence, Factor, MatchStatus};
pub use multiset::Multiset;
pub use scalar::Scalar;
pub use space::SampleSpace;
