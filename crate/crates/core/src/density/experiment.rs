//! The seeded density experiment.
//!
//! Each trial samples a positive real plane, rounds it to an integral one,
//! perturbs it with doubling `k` until the principal angle to the rounded
//! plane is at most `epsilon` (or `k` would exceed `kmax`), then realizes
//! every orbit class orthogonal to the perturbed plane. Trials are
//! independent: trial `i` draws from ChaCha8 stream `i` of the seed, so the
//! report does not depend on evaluation order.

use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::perturb::{check_certificate, is_saturated_snf, perturb_to_saturated, Perturbation};
use super::plane::{form, gram_f64, validate_period};
use super::realize::{default_realize_bound, height, realize_orbit, PeriodData};
use crate::error::{Error, Result};
use crate::lattice::is_definite;
use crate::linalg::{smith, IntMatrix};
use crate::orbits::{enumerate_classes, Kind, Model};

/// Planes whose Gram matrix has condition number above this are resampled.
pub const MAX_CONDITION: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: i64,
    pub kind: Kind,
    pub trials: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub kmax: u64,
    /// Rounding scale: sampled planes are scaled to this coordinate height
    /// and rounded to integers.
    pub scale: f64,
    /// Weight of the negative directions in the sampler.
    pub negative_weight: f64,
    /// Search height handed to orbit realization; `None` uses the default.
    pub realize_bound: Option<i64>,
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(n: i64, kind: Kind, trials: usize, epsilon: f64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            kind,
            trials,
            epsilon,
            seed,
            kmax: 1 << 20,
            scale: 100.0,
            negative_weight: 0.3,
            realize_bound: None,
            timing: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub angle_achieved: f64,
    pub k_used: u64,
    pub classes_requested: usize,
    pub classes_realized: usize,
    #[serde(serialize_with = "crate::json::ser")]
    pub max_height: BigInt,
    pub resamples: u64,
    pub millis: Option<u128>,
    /// Whether the rounded plane already spanned a saturated lattice with `v`.
    pub sampled_in_a: bool,
    /// `ok`, or the first error met in the trial.
    pub status: String,
}

pub const CSV_HEADER: [&str; 10] = [
    "trial",
    "angle_achieved",
    "k_used",
    "classes_requested",
    "classes_realized",
    "max_height",
    "resamples",
    "millis",
    "sampled_in_a",
    "status",
];

/// RNG for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn unit_rows(m: &IntMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| {
            let r = super::plane::to_f64(m.row(i));
            let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            r.iter().map(|x| x / n).collect()
        })
        .collect()
}

/// Samples a positive plane in the lattice of `model` and rounds it to an
/// integral plane `(u1, u2)` in lattice coordinates. Returns the number of
/// rejected samples as well.
pub fn sample_plane(model: &Model, cfg: &ExperimentConfig, rng: &mut impl Rng) -> Result<(Vec<BigInt>, Vec<BigInt>, u64)> {
    let l = &model.lattice;
    let pos = unit_rows(l.positive_reference());
    let neg = unit_rows(l.negative_reference());
    let gf = gram_f64(l.gram());
    let dim = l.rank();
    let mut resamples = 0u64;
    for _ in 0..10_000 {
        let mut draw = || -> Vec<f64> {
            let mut x = vec![0.0; dim];
            for r in &pos {
                let g: f64 = rng.sample(StandardNormal);
                for (a, b) in x.iter_mut().zip(r) {
                    *a += g * b;
                }
            }
            for r in &neg {
                let g: f64 = rng.sample(StandardNormal);
                for (a, b) in x.iter_mut().zip(r) {
                    *a += cfg.negative_weight * g * b;
                }
            }
            x
        };
        let (x, y) = (draw(), draw());
        let Ok(p) = validate_period(l.gram(), &x, &y) else {
            resamples += 1;
            continue;
        };
        let (xx, xy, yy) = (form(&gf, &x, &x), form(&gf, &x, &y), form(&gf, &y, &y));
        let tr = xx + yy;
        let det = xx * yy - xy * xy;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let (hi, lo) = (tr / 2.0 + disc, tr / 2.0 - disc);
        if lo <= 0.0 || hi / lo > MAX_CONDITION {
            resamples += 1;
            continue;
        }
        let round = |v: &[f64]| -> Vec<BigInt> {
            let m = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            v.iter().map(|t| BigInt::from((t / m * cfg.scale).round() as i64)).collect()
        };
        let (u1, u2) = (round(&p.x), round(&p.y));
        let rows = IntMatrix::from_rows(&[u1.clone(), u2.clone()], dim)?;
        if smith(&rows).rank < 2 || !is_definite(&l.gram_of(&rows)?, true) {
            resamples += 1;
            continue;
        }
        return Ok((u1, u2, resamples));
    }
    Err(Error::SearchExhausted {
        stage: "positive plane sampling".into(),
        bound: 10_000,
    })
}

/// Perturbation with doubling `k` until the angle is at most `epsilon`.
pub fn perturb_until(
    model: &Model,
    u1: &[BigInt],
    u2: &[BigInt],
    epsilon: f64,
    kmax: u64,
) -> Result<Perturbation> {
    let (a1, a2) = (model.embed(u1)?, model.embed(u2)?);
    let mut k = 1u64;
    loop {
        let p = perturb_to_saturated(&model.ambient, &model.v, &a1, &a2, k)?;
        if p.angle <= epsilon || k.saturating_mul(2) > kmax {
            return Ok(p);
        }
        k *= 2;
    }
}

fn run_trial(model: &Model, cfg: &ExperimentConfig, trial: usize) -> TrialRow {
    let start = Instant::now();
    let classes = enumerate_classes(cfg.n, cfg.kind).unwrap_or_default();
    let mut row = TrialRow {
        trial,
        angle_achieved: f64::NAN,
        k_used: 0,
        classes_requested: classes.len(),
        classes_realized: 0,
        max_height: BigInt::zero(),
        resamples: 0,
        millis: None,
        sampled_in_a: false,
        status: "ok".into(),
    };
    let mut rng = trial_rng(cfg.seed, trial);
    let outcome = (|| -> Result<()> {
        let (u1, u2, resamples) = sample_plane(model, cfg, &mut rng)?;
        row.resamples = resamples;
        let (a1, a2) = (model.embed(&u1)?, model.embed(&u2)?);
        row.sampled_in_a = is_saturated_snf(&a1, &a2, &model.v)?;
        let p = perturb_until(model, &u1, &u2, cfg.epsilon, cfg.kmax)?;
        row.angle_achieved = p.angle;
        row.k_used = p.k;
        if !check_certificate(&model.ambient, &model.v, &p.u1p, &p.u2p, &p.certificate)?
            || !is_saturated_snf(&p.u1p, &p.u2p, &model.v)?
        {
            return Err(Error::Invariant("saturation certificate failed".into()));
        }
        let pull = |x: &[BigInt]| -> Result<Vec<BigInt>> {
            model
                .pull_back(x)?
                .ok_or_else(|| Error::Invariant("perturbed plane left ι(Λ)".into()))
        };
        let emb = IntMatrix::from_rows(&[pull(&p.u1p)?, pull(&p.u2p)?], model.lattice.rank())?;
        let pd = PeriodData::from_model(model.clone(), emb)?;
        let bound = cfg.realize_bound.unwrap_or_else(|| default_realize_bound(cfg.n));
        let mut first_err = None;
        for c in &classes {
            match realize_orbit(&pd, c, bound) {
                Ok(r) => {
                    row.classes_realized += 1;
                    row.max_height = row.max_height.clone().max(height(&r.delta));
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    })();
    if let Err(e) = outcome {
        row.status = e.to_string();
    }
    if cfg.timing {
        row.millis = Some(start.elapsed().as_millis());
    }
    row
}

/// Runs all trials; per-trial failures are recorded in the rows.
pub fn density_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRow>> {
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if !(cfg.epsilon > 0.0) {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if cfg.kmax == 0 {
        return Err(Error::Precondition("kmax must be at least 1".into()));
    }
    let model = Model::new(cfg.n, cfg.kind)?;
    Ok((0..cfg.trials).map(|t| run_trial(&model, cfg, t)).collect())
}

/// Writes the rows as CSV.
pub fn write_csv(rows: &[TrialRow], out: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.angle_achieved.to_string(),
            r.k_used.to_string(),
            r.classes_requested.to_string(),
            r.classes_realized.to_string(),
            r.max_height.to_string(),
            r.resamples.to_string(),
            r.millis.map(|m| m.to_string()).unwrap_or_default(),
            r.sampled_in_a.to_string(),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

pub fn to_csv_string(rows: &[TrialRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_succeeds() {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            let mut cfg = ExperimentConfig::new(2, kind, 3, 0.05, 7);
            cfg.timing = false;
            let rows = density_experiment(&cfg).unwrap();
            for r in &rows {
                assert_eq!(r.status, "ok", "{r:?}");
                assert_eq!(r.classes_realized, r.classes_requested);
                assert!(r.angle_achieved <= 0.05);
            }
            let again = density_experiment(&cfg).unwrap();
            assert_eq!(to_csv_string(&rows).unwrap(), to_csv_string(&again).unwrap());
        }
    }

    #[test]
    fn loose_epsilon_stops_at_k1() {
        let mut cfg = ExperimentConfig::new(3, Kind::Kummer, 4, 1.5, 1);
        cfg.timing = false;
        for r in density_experiment(&cfg).unwrap() {
            assert_eq!(r.k_used, 1);
            assert_eq!(r.status, "ok");
        }
    }

    #[test]
    fn bad_config() {
        let cfg = ExperimentConfig::new(2, Kind::Hilbert, 0, 0.1, 1);
        assert!(density_experiment(&cfg).is_err());
        let cfg = ExperimentConfig::new(2, Kind::Hilbert, 1, 0.0, 1);
        assert!(density_experiment(&cfg).is_err());
    }
}
