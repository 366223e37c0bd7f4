//! `qipe-bench`: accuracy of sampled inner-product estimates on random
//! pairs of unit vectors.

use rayon::prelude::*;
use serde::Serialize;

use qgs_core::linalg::random_unit_vector;
use qgs_core::qipe::{estimate_inner_product, sample_count, IpeConfig};
use qgs_core::rng::{domain, substream};
use qgs_core::Mode;

use super::{single, trial_seed, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{at_least, unit_interval, Params};

#[derive(Debug, Serialize)]
struct Settings {
    dim: usize,
    eps: f64,
    delta: f64,
    mode: Mode,
    trials: usize,
    seed: u64,
    shots_per_circuit: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    trial: usize,
    exact_re: f64,
    exact_im: f64,
    estimate_re: f64,
    estimate_im: f64,
    abs_error: f64,
    shots: u64,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let eps = single("eps", &p.eps, 0.05)?;
    let delta = p.delta.unwrap_or(0.1);
    unit_interval("eps", &[eps])?;
    unit_interval("delta", &[delta])?;
    let s = Settings {
        dim: single("dim", &p.dim, 8)?,
        eps,
        delta,
        mode: p.ipe_mode.or(p.mode).unwrap_or(Mode::Sampled),
        trials: p.trials.unwrap_or(200),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
        shots_per_circuit: sample_count(eps, delta)?,
    };
    at_least("dim", s.dim, 1)?;
    at_least("trials", s.trials, 1)?;

    let rows = (0..s.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(s.seed, t as u64);
            let mut rng = substream(seed, domain::MATRIX, 0);
            let x = random_unit_vector(s.dim, &mut rng);
            let y = random_unit_vector(s.dim, &mut rng);
            let cfg = IpeConfig::new(s.eps, s.delta).with_mode(s.mode).with_seed(seed);
            let est = estimate_inner_product(&x, &y, &cfg)?;
            let exact = x.dotc(&y);
            Ok(Row {
                trial: t,
                exact_re: exact.re,
                exact_im: exact.im,
                estimate_re: est.value.re,
                estimate_im: est.value.im,
                abs_error: (est.value - exact).norm(),
                shots: est.shots_used,
            })
        })
        .collect::<CliResult<Vec<Row>>>()?;
    out.write_csv("qipe_bench.csv", &rows)?;

    // Success rate must clear 1 - delta less three binomial standard errors.
    let n = s.trials as f64;
    let floor = 1.0 - s.delta - 3.0 * (s.delta * (1.0 - s.delta) / n).sqrt();
    let hits = rows.iter().filter(|r| r.abs_error <= s.eps).count();
    let check = Check::new(
        "hoeffding",
        hits as f64 >= floor * n,
        format!("{hits}/{} within eps, floor {:.1}%", s.trials, 100.0 * floor),
    );
    Report::new(&s, vec![check])
}
