//! The medical-test report: every prior/posterior quantity of the worked example.

use evupdate::update::{bayes_update, jeffrey_update, pearl_update};
use evupdate::validity::{iterated_pearl_validity, jeffrey_validity, pearl_validity, validity};
use evupdate::{Dist, Evidence, Scalar};

use crate::builtin::medical;
use crate::error::Result;

const DIGITS: usize = 12;

fn scalar_line(key: &str, v: &Scalar) -> String {
    format!("{key} = {v}  ({})", v.to_sig_digits(DIGITS))
}

fn dist_line(key: &str, d: &Dist) -> String {
    let dec: Vec<String> = d
        .support()
        .iter()
        .map(|&i| format!("{}|{}>", d.at(i).to_sig_digits(DIGITS), d.space().label(i)))
        .collect();
    format!("{key} = {d}  ({})", dec.join(" + "))
}

pub fn medical_report() -> Result<String> {
    let m = medical();
    let w = &m.prior;
    let psi = Evidence::new(vec![(m.pt.clone(), 2), (m.nt.clone(), 1)])?;
    let wj = jeffrey_update(w, &psi)?;
    let wp = pearl_update(w, &psi)?;
    let lines = vec![
        "# medical test: prior 1/20 disease, evidence 2 positive + 1 negative".to_string(),
        dist_line("prior", w),
        scalar_line("predicted_positive", &validity(w, &m.pt)?),
        scalar_line("predicted_negative", &validity(w, &m.nt)?),
        dist_line("predicted_outcomes", &m.test.push(w)?),
        scalar_line("jeffrey_prior_validity", &jeffrey_validity(w, &psi)?),
        scalar_line("pearl_prior_validity", &pearl_validity(w, &psi)?),
        dist_line("posterior_positive", &bayes_update(w, &m.pt)?),
        dist_line("posterior_negative", &bayes_update(w, &m.nt)?),
        dist_line("jeffrey_posterior", &wj),
        dist_line("pearl_posterior", &wp),
        scalar_line("jeffrey_posterior_jeffrey_validity", &jeffrey_validity(&wj, &psi)?),
        scalar_line("pearl_posterior_pearl_validity", &pearl_validity(&wp, &psi)?),
        scalar_line("pearl_posterior_jeffrey_validity", &jeffrey_validity(&wp, &psi)?),
        scalar_line("jeffrey_posterior_pearl_validity", &pearl_validity(&wj, &psi)?),
        scalar_line("iterated_pearl", &iterated_pearl_validity(w, &[m.pt.clone(), m.pt.clone(), m.nt.clone()])?),
    ];
    Ok(lines.join("\n") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_every_medical_quantity() {
        let r = medical_report().unwrap();
        for needle in [
            "predicted_positive = 17/40 ",
            "predicted_negative = 23/40 ",
            "jeffrey_prior_validity = 19941/64000 ",
            "pearl_prior_validity = 1143/4000 ",
            "posterior_positive = 9/85|d> + 76/85|~d> ",
            "posterior_negative = 1/115|d> + 114/115|~d> ",
            "jeffrey_posterior = 431/5865|d> + 5434/5865|~d> ",
            "pearl_posterior = 27/635|d> + 608/635|~d> ",
            "iterated_pearl = 381/4000 ",
        ] {
            assert!(r.contains(needle), "missing {needle}\n{r}");
        }
    }
}
