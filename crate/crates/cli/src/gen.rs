//! Seeded random instances for the property suites.

use evupdate::multiset::Multiset;
use evupdate::{Channel, Dist, Evidence, Factor, SampleSpace, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest sample space drawn.
pub const MAX_SPACE: usize = 6;
/// Largest evidence size drawn.
pub const MAX_EVIDENCE: u64 = 6;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finaliser
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl Gen {
    /// Independent stream for one trial of one property.
    pub fn for_trial(seed: u64, property: &str, trial: u64) -> Gen {
        let s = mix(mix(seed) ^ fnv(property)) ^ mix(trial.wrapping_add(1));
        Gen { rng: ChaCha8Rng::seed_from_u64(s) }
    }

    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn space(&mut self, lo: usize, hi: usize) -> SampleSpace {
        let n = self.size(lo, hi);
        named_space("x", n)
    }

    pub fn bool(&mut self) -> bool {
        self.rng.gen()
    }

    /// Exact distribution with small denominators; `full` forces full support.
    pub fn dist(&mut self, s: &SampleSpace, full: bool) -> Dist {
        loop {
            let lo = if full { 1 } else { 0 };
            let m: Vec<i64> = (0..s.len()).map(|_| self.rng.gen_range(lo..=9)).collect();
            let t: i64 = m.iter().sum();
            if t > 0 {
                return Dist::new(s, m.iter().map(|&x| Scalar::ratio(x, t)).collect()).expect("normalised");
            }
        }
    }

    pub fn unit(&mut self) -> Scalar {
        let d = self.rng.gen_range(1..=10);
        Scalar::ratio(self.rng.gen_range(0..=d), d)
    }

    pub fn positive_unit(&mut self) -> Scalar {
        let d = self.rng.gen_range(1..=10);
        Scalar::ratio(self.rng.gen_range(1..=d), d)
    }

    /// Predicate with values in [0, 1].
    pub fn pred(&mut self, s: &SampleSpace) -> Factor {
        Factor::new(s, (0..s.len()).map(|_| self.unit()).collect()).expect("non-negative")
    }

    /// Predicate with values in (0, 1].
    pub fn positive_pred(&mut self, s: &SampleSpace) -> Factor {
        Factor::new(s, (0..s.len()).map(|_| self.positive_unit()).collect()).expect("non-negative")
    }

    /// Factor with values in [0, 3].
    pub fn factor(&mut self, s: &SampleSpace) -> Factor {
        let v = (0..s.len())
            .map(|_| {
                let d = self.rng.gen_range(1..=5);
                Scalar::ratio(self.rng.gen_range(0..=3 * d), d)
            })
            .collect();
        Factor::new(s, v).expect("non-negative")
    }

    /// Evidence of 1–3 factors with total size at most `kmax`.
    pub fn evidence_with(&mut self, s: &SampleSpace, kmax: u64, mut f: impl FnMut(&mut Gen, &SampleSpace) -> Factor) -> Evidence {
        let k = self.rng.gen_range(1..=kmax);
        let m = self.rng.gen_range(1..=k.min(3));
        let mut counts = vec![1u64; m as usize];
        for _ in m..k {
            let i = self.rng.gen_range(0..m as usize);
            counts[i] += 1;
        }
        let mut e = Evidence::empty(s);
        for c in counts {
            let p = f(self, s);
            e.insert(p, c).expect("same space");
        }
        e
    }

    pub fn evidence(&mut self, s: &SampleSpace) -> Evidence {
        self.evidence_with(s, MAX_EVIDENCE, |g, s| g.pred(s))
    }

    pub fn positive_evidence(&mut self, s: &SampleSpace) -> Evidence {
        self.evidence_with(s, MAX_EVIDENCE, |g, s| g.positive_pred(s))
    }

    /// Non-empty multiset of size `1..=kmax`.
    pub fn multiset(&mut self, s: &SampleSpace, kmax: u64) -> Multiset {
        let k = self.rng.gen_range(1..=kmax);
        let mut counts = vec![0u64; s.len()];
        for _ in 0..k {
            counts[self.rng.gen_range(0..s.len())] += 1;
        }
        Multiset::from_counts(s, counts).expect("matching length")
    }

    /// Multiset supported inside `support` (indices).
    pub fn multiset_in(&mut self, s: &SampleSpace, support: &[usize], kmax: u64) -> Multiset {
        let k = self.rng.gen_range(1..=kmax);
        let mut counts = vec![0u64; s.len()];
        for _ in 0..k {
            counts[*support.choose(&mut self.rng).expect("non-empty support")] += 1;
        }
        Multiset::from_counts(s, counts).expect("matching length")
    }

    pub fn channel(&mut self, dom: &SampleSpace, cod: &SampleSpace, full: bool) -> Channel {
        let rows = (0..dom.len()).map(|_| self.dist(cod, full)).collect();
        Channel::new(dom, cod, rows).expect("rows on codomain")
    }

    pub fn rational(&mut self, bound: i64) -> Scalar {
        Scalar::ratio(self.rng.gen_range(-bound..=bound), self.rng.gen_range(1..=bound))
    }
}

pub fn named_space(prefix: &str, n: usize) -> SampleSpace {
    SampleSpace::new((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct labels")
}
