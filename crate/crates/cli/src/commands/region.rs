//! `region`: boundary tables of the admissible ranges.

use diracspec_core::norms::{beta_exponent, p_alpha, q_alpha, q_nu};

use crate::config::RegionParams;
use crate::output::{Cell, Outcome, Table};
use crate::row;

pub fn region(p: &RegionParams) -> Outcome {
    let mut alpha = Table::new("alpha", &["alpha", "q_alpha", "p_alpha", "degenerate"]);
    for &a in &p.alphas {
        let pa = p_alpha(a);
        let mut r = row![a, q_alpha(a)];
        r.push(pa.map_or(Cell::S(String::new()), Cell::F));
        r.push(pa.is_none().into());
        alpha.push(r);
    }
    let mut nu = Table::new("nu", &["nu", "gamma_1", "q_nu"]);
    for &v in &p.nus {
        nu.push(row![v, (1.0 - v * v).sqrt(), q_nu(v)]);
    }
    let mut beta = Table::new("beta", &["dim", "p", "beta"]);
    for n in [2usize, 3] {
        for &x in &p.ps {
            beta.push(row![n, x, beta_exponent(x, n).expect("p >= 2 checked by the config")]);
        }
    }
    Outcome {
        tables: vec![alpha, nu, beta],
        ..Default::default()
    }
}
