//! Suite drivers.
//!
//! Trial `t` of a seeded suite uses seed `seed + t` (wrapping): the family is
//! drawn from that seed and the word from the same seed xor [`WORD_SALT`].
//! Trials run in parallel and are collected in index order.

use num_traits::Zero;
use rayon::prelude::*;
use symord_core::random::{self, random_word};
use symord_core::rational::{self, Rational};
use symord_core::{
    bernoulli, build_generators, cancellation_check, derived_family, homomorphism_defect, iota_all,
    random_family, span_dimension, theorem_check, Polynomial, StructureConstants, TruncationOrder,
    WeylElement,
};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::report::{Report, TrialRecord};
use crate::scfile::load_structure_constants;

pub const WORD_SALT: u64 = 0x5eed0fa1fa;

pub fn trial_seed(base: u64, t: usize) -> u64 {
    base.wrapping_add(t as u64)
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let trials = match config.command {
        Command::VerifyTheorem => seeded(config, theorem_trial)?,
        Command::Cancellation => seeded(config, cancellation_trial)?,
        Command::SpanDim => seeded(config, span_trial)?,
        Command::VerifyIota => {
            let path = config.sc_path.as_ref().expect("validated");
            let sc = load_structure_constants(path)?;
            iota_trials(&sc, config.effective_d())?
        }
        Command::Bernoulli => bernoulli_trials(config.n_max),
    };
    Ok(Report::new(config, trials))
}

fn seeded<F>(config: &RunConfig, f: F) -> Result<Vec<TrialRecord>, CliError>
where
    F: Fn(&RunConfig, usize, u64) -> Result<TrialRecord, CliError> + Sync,
{
    (0..config.trials)
        .into_par_iter()
        .map(|t| f(config, t, trial_seed(config.seed, t)))
        .collect()
}

fn first_term(p: &Polynomial) -> Option<String> {
    p.sorted_terms()
        .first()
        .map(|(m, c)| Polynomial::monomial((*m).clone(), (*c).clone()).to_string())
}

fn theorem_trial(config: &RunConfig, t: usize, seed: u64) -> Result<TrialRecord, CliError> {
    let fam = random_family(config.n, config.n_max, &config.sparsity, seed)?;
    let word = random_word(&mut random::rng(seed ^ WORD_SALT), config.n, config.k)?;
    let g = build_generators(&fam, TruncationOrder(config.effective_d()));
    let report = theorem_check(&g, &word)?;
    let mut rec = TrialRecord::new(t, "theorem");
    rec.seed = Some(seed);
    rec.word = Some(word.to_one_based());
    rec.passed = report.passed();
    rec.residual_terms = report.residual.len();
    rec.first_offending = first_term(&report.residual);
    rec.detail = report.warning.map(|w| format!("warning: {w}"));
    Ok(rec)
}

fn cancellation_trial(config: &RunConfig, t: usize, seed: u64) -> Result<TrialRecord, CliError> {
    let fam = random_family(config.n, config.n_max, &config.sparsity, seed)?;
    let word = random_word(&mut random::rng(seed ^ WORD_SALT), config.n, config.k)?;
    let mut rec = TrialRecord::new(t, "cancellation");
    rec.seed = Some(seed);
    rec.word = Some(word.to_one_based());
    for l in 0..config.n {
        for order in 1..=config.n_max {
            let residual = cancellation_check(&fam, &word, l, order)?;
            if !residual.is_zero() {
                rec.passed = false;
                rec.residual_terms += residual.len();
                if rec.first_offending.is_none() {
                    rec.first_offending = first_term(&residual).map(|m| format!("l={} N={order}: {m}", l + 1));
                }
            }
        }
    }
    Ok(rec)
}

fn span_trial(config: &RunConfig, t: usize, seed: u64) -> Result<TrialRecord, CliError> {
    let fam = random_family(config.n, config.n_max, &config.sparsity, seed)?;
    let d = config.effective_d();
    let g = build_generators(&fam, TruncationOrder(d));
    let compare = TruncationOrder(d + 1 - config.k as u32);
    let span = span_dimension(&g, config.k, compare)?;
    let mut rec = TrialRecord::new(t, "span");
    rec.seed = Some(seed);
    rec.passed = span.dim_words >= span.dim_symmetric;
    rec.value = Some(span.dim_words.to_string());
    rec.detail = Some(format!(
        "dim_words={} dim_symmetric={} compared_at={}",
        span.dim_words, span.dim_symmetric, compare.0
    ));
    Ok(rec)
}

fn iota_trials(sc: &StructureConstants, d: u32) -> Result<Vec<TrialRecord>, CliError> {
    let n = sc.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out: Vec<TrialRecord> = pairs
        .par_iter()
        .enumerate()
        .map(|(t, &(i, j))| -> Result<TrialRecord, CliError> {
            let defect = homomorphism_defect(sc, i, j, TruncationOrder(d))?;
            let mut rec = TrialRecord::new(t, format!("defect({},{})", i + 1, j + 1));
            rec.passed = defect.is_zero();
            rec.residual_terms = defect.len();
            rec.first_offending = first_weyl_term(&defect);
            Ok(rec)
        })
        .collect::<Result<_, _>>()?;

    let order = d.max(1);
    let fam = derived_family(sc, order)?;
    let g = build_generators(&fam, TruncationOrder(order));
    let expected = iota_all(sc, TruncationOrder(order));
    let mut rec = TrialRecord::new(out.len(), "derived-family");
    for (got, want) in g.generators().iter().zip(&expected) {
        let diff = got.sub(want)?;
        if !diff.is_zero() {
            rec.passed = false;
            rec.residual_terms += diff.len();
            if rec.first_offending.is_none() {
                rec.first_offending = first_weyl_term(&diff);
            }
        }
    }
    out.push(rec);
    Ok(out)
}

fn first_weyl_term(e: &WeylElement) -> Option<String> {
    e.sorted_terms()
        .first()
        .map(|(m, c)| WeylElement::monomial((*m).clone(), (*c).clone()).to_string())
}

fn bernoulli_trials(max: u32) -> Vec<TrialRecord> {
    (0..=max)
        .map(|m| {
            let b = bernoulli(m);
            let mut rec = TrialRecord::new(m as usize, format!("B_{m}"));
            rec.value = Some(rational::to_fraction_string(&b));
            // recurrence Σ_{k≤m} C(m+1, k) B_k = 0 for m ≥ 1, B_0 = 1, odd B_m = 0 for m ≥ 3
            let ok = if m == 0 {
                b == Rational::from_integer(1.into())
            } else {
                let sum = (0..=m).fold(Rational::zero(), |acc, k| {
                    acc + Rational::from_integer(rational::binomial(m + 1, k)) * bernoulli(k)
                });
                sum.is_zero() && (m < 3 || m % 2 == 0 || b.is_zero())
            };
            rec.passed = ok;
            rec
        })
        .collect()
}
