//! Built-in worked models.

use evupdate::{Channel, Dist, Factor, SampleSpace, Scalar};

/// Disease prior and a test channel `{d, ~d} → {p, n}`.
#[derive(Clone, Debug)]
pub struct Medical {
    pub prior: Dist,
    pub test: Channel,
    /// `test ⪻ 1_p`
    pub pt: Factor,
    /// `test ⪻ 1_n`
    pub nt: Factor,
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

pub fn medical() -> Medical {
    let d = SampleSpace::new(["d", "~d"]).expect("distinct");
    let t = SampleSpace::new(["p", "n"]).expect("distinct");
    let prior = Dist::new(&d, vec![q(1, 20), q(19, 20)]).expect("valid prior");
    let test = Channel::from_table(&d, &t, vec![vec![q(9, 10), q(1, 10)], vec![q(2, 5), q(3, 5)]])
        .expect("valid channel");
    let pt = test.pull(&Factor::point_pred("p", &t).expect("p")).expect("pull");
    let nt = test.pull(&Factor::point_pred("n", &t).expect("n")).expect("pull");
    Medical { prior, test, pt, nt }
}

/// Water-tap example: prior over left/middle/right.
pub struct Physics {
    pub prior: Dist,
    pub not_middle: Factor,
    pub taps: Factor,
}

pub fn physics() -> Physics {
    let s = SampleSpace::new(["L", "M", "R"]).expect("distinct");
    Physics {
        prior: Dist::new(&s, vec![q(1, 2), q(1, 3), q(1, 6)]).expect("valid"),
        not_middle: Factor::indicator(&["L", "R"], &s).expect("subset"),
        taps: Factor::new(&s, vec![q(2, 3), q(1, 3), q(1, 2)]).expect("factor"),
    }
}
