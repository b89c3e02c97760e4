//! The acceptance suite: eleven checks over the whole library, each
//! reported as a pass/fail line with a short detail.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::experiment::{sample_plane, to_csv_string, trial_rng};
use crate::density::{
    brute_delta_search, check_certificate, default_realize_bound, density_experiment, is_saturated_snf,
    perturb_to_saturated, realize_orbit, ExperimentConfig, PeriodData,
};
use crate::error::Result;
use crate::isometry::{reflection, Isometry};
use crate::lattice::{make_standard, Lattice};
use crate::orbits::{
    enumerate_classes, f_invariant_in, orbit_count_formula, sigma_check_in, Kind, Model,
};
use crate::wedge::{tau_report, unit_sweep, verify_psi_decomposition};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("{status} criterion {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

type Check = fn() -> Result<(bool, String)>;

pub const CRITERIA: [(u32, &str, Check); 11] = [
    (1, "orbit counts", orbit_counts),
    (2, "discriminant groups", discriminant_groups),
    (3, "psi table and decomposition", psi_table),
    (4, "psi block structure", psi_blocks),
    (5, "exceptional reflections", exceptional_reflections),
    (6, "orbit realization", orbit_realization),
    (7, "perturbation", perturbation),
    (8, "unit criterion", unit_criterion),
    (9, "tau witness", tau_witness),
    (10, "character laws", character_laws),
    (11, "determinism", determinism),
];

pub fn run_criterion(id: u32) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CriterionResult {
        id,
        name: name.into(),
        pass,
        detail,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

fn orbit_counts() -> Result<(bool, String)> {
    let start = Instant::now();
    let two = enumerate_classes(2, Kind::Hilbert)?.len();
    let mut bad = Vec::new();
    for n in 3..=200 {
        if enumerate_classes(n, Kind::Hilbert)?.len() as u64 != orbit_count_formula(n)? {
            bad.push(n);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = two == 1 && bad.is_empty() && secs < 5.0;
    Ok((pass, format!("n=2 gives {two}, mismatches for 3..=200: {bad:?}, {secs:.2}s")))
}

fn discriminant_groups() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 2..=50 {
        for (name, order) in [("Lambda", 2 * n - 2), ("KummerLambda", 2 * n + 2)] {
            let d = make_standard(name, Some(n))?.disc_group();
            if d.invariant_factors != vec![BigInt::from(order)] {
                bad.push(format!("{name}({n}) = {:?}", d.invariant_factors));
            }
        }
    }
    Ok((bad.is_empty(), format!("cyclic of orders 2n-2 and 2n+2 for 2..=50, mismatches {bad:?}")))
}

fn psi_table() -> Result<(bool, String)> {
    let r = verify_psi_decomposition()?;
    let decomposed = r.conventions.iter().all(|c| c.decomposition_holds);
    let pass = r.table_matches && decomposed && r.det_psi == BigInt::from(-1);
    Ok((
        pass,
        format!(
            "table matches {}, psi = R_a R_b R_g under both signs {}, det {}",
            r.table_matches, decomposed, r.det_psi
        ),
    ))
}

fn psi_blocks() -> Result<(bool, String)> {
    let r = verify_psi_decomposition()?;
    let blocks = r.conventions.iter().all(|c| c.block_structure_holds);
    let minus = r.conventions.iter().find(|c| c.sign == -1).expect("both signs");
    let pass = blocks && minus.reverses_positive_preserves_negative;
    Ok((
        pass,
        format!(
            "+1/-1 blocks {blocks}; s=-1: orientation on positive cone {}, negative cone {}",
            minus.orientation_positive, minus.orientation_negative
        ),
    ))
}

/// Exceptional classes used for the reflection checks: `w` and one
/// realization of every orbit class orthogonal to the standard plane.
fn exceptional_samples(n: i64, kind: Kind) -> Result<Vec<Vec<BigInt>>> {
    let model = Model::new(n, kind)?;
    let pd = PeriodData::standard(n, kind)?;
    let mut out = vec![model.w()];
    for c in enumerate_classes(n, kind)? {
        out.push(realize_orbit(&pd, &c, default_realize_bound(n))?.delta);
    }
    Ok(out)
}

fn exceptional_reflections() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=20 {
        let model = Model::new(n, Kind::Kummer)?;
        for d in exceptional_samples(n, Kind::Kummer)? {
            count += 1;
            let r = reflection(&model.lattice, &d)?;
            let (u, order) = r.disc_action()?;
            if u != &order - 1 || !r.in_n()? || !sigma_check_in(&model, &d)? {
                bad.push(format!("n={n} u={u}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{count} classes for n in 2..=20 act by -1 and lie in N; failures {bad:?}")))
}

fn orbit_realization() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut bad = Vec::new();
    let (mut realized, mut brute_found) = (0, 0);
    for n in [2, 3, 4, 7] {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            let pd = PeriodData::standard(n, kind)?;
            let l = &pd.model.lattice;
            for c in enumerate_classes(n, kind)? {
                let d = match realize_orbit(&pd, &c, default_realize_bound(n)) {
                    Ok(r) => r.delta,
                    Err(e) => {
                        bad.push(format!("{kind} n={n} {c}: {e}"));
                        continue;
                    }
                };
                let orth = (0..2).all(|i| l.inner(pd.emb.row(i), &d).map(|x| x.is_zero()).unwrap_or(false));
                if !orth || !sigma_check_in(&pd.model, &d)? || f_invariant_in(&pd.model, &d)? != c {
                    bad.push(format!("{kind} n={n} {c}: output fails verification"));
                }
                realized += 1;
                if let Some(b) = brute_delta_search(&pd, &c, brute_bound(n))? {
                    brute_found += 1;
                    if f_invariant_in(&pd.model, &b)? != c {
                        bad.push(format!("{kind} n={n} {c}: brute force disagrees"));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        bad.is_empty() && secs < 60.0,
        format!("{realized} classes realized, {brute_found} brute-force agreements, failures {bad:?}, {secs:.1}s"),
    ))
}

/// Coordinate bound for the exhaustive cross-check.
pub fn brute_bound(n: i64) -> i64 {
    3 * n
}

/// Multipliers compared pairwise in the perturbation check.
pub const PERTURB_KS: [u64; 5] = [1, 2, 4, 8, 16];

fn perturbation() -> Result<(bool, String)> {
    let mut pass = true;
    let mut detail = Vec::new();
    for kind in [Kind::Hilbert, Kind::Kummer] {
        let model = Model::new(2, kind)?;
        let cfg = ExperimentConfig::new(2, kind, 100, 0.01, 2024);
        let mut angles = vec![Vec::new(); PERTURB_KS.len()];
        let mut cert_failures = 0;
        for t in 0..100 {
            let mut rng = trial_rng(cfg.seed, t);
            let (u1, u2, _) = sample_plane(&model, &cfg, &mut rng)?;
            let (a1, a2) = (model.embed(&u1)?, model.embed(&u2)?);
            for (i, &k) in PERTURB_KS.iter().enumerate() {
                let p = perturb_to_saturated(&model.ambient, &model.v, &a1, &a2, k)?;
                if !check_certificate(&model.ambient, &model.v, &p.u1p, &p.u2p, &p.certificate)?
                    || !is_saturated_snf(&p.u1p, &p.u2p, &model.v)?
                {
                    cert_failures += 1;
                }
                angles[i].push(p.angle);
            }
        }
        let medians: Vec<f64> = angles.iter_mut().map(|a| median(a)).collect();
        let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0]).collect();
        pass &= cert_failures == 0 && ratios.iter().all(|&r| r <= 0.6);
        let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
        detail.push(format!("{kind}: {cert_failures} certificate failures, median ratios {}", shown.join(" ")));
    }
    Ok((pass, detail.join("; ")))
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn unit_criterion() -> Result<(bool, String)> {
    let s = unit_sweep(2, 200)?;
    let bad: Vec<i64> = s.disagreements.iter().map(|c| c.n).collect();
    Ok((s.all_agree, format!("count 2 iff n+1 prime power for 2..=200, disagreements {bad:?}")))
}

fn tau_witness() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 2..=10 {
        let r = tau_report(n, -1)?;
        if r.det_chi != -1 || r.orientation_positive != 1 || !r.in_w || r.in_n || !r.involution {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("s=-1: det*chi = -1, orientation +1, in W not N for 2..=10, failures {bad:?}")))
}

/// Vectors whose reflections are integral: `±2`-roots of the hyperbolic
/// and definite summands and the exceptional generator.
fn reflection_pool(lattice: &Lattice, model: Option<&Model>) -> Vec<Vec<BigInt>> {
    let r = lattice.rank();
    let g = lattice.gram();
    let unit = |i: usize| -> Vec<BigInt> { (0..r).map(|j| BigInt::from((i == j) as i64)).collect() };
    let mut pool = Vec::new();
    for i in 0..r {
        if g[(i, i)].abs() == BigInt::from(2) {
            pool.push(unit(i));
        }
        if i + 1 < r && g[(i, i)].is_zero() && g[(i + 1, i + 1)].is_zero() && g[(i, i + 1)].is_one() {
            for s in [1, -1] {
                let mut x = unit(i);
                x[i + 1] = BigInt::from(s);
                pool.push(x);
            }
        }
    }
    if let Some(m) = model {
        pool.push(m.w());
    }
    pool
}

fn character_laws() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    let mut lattices = Vec::new();
    for (n, kind) in [(2, Kind::Hilbert), (5, Kind::Hilbert), (2, Kind::Kummer), (4, Kind::Kummer)] {
        let m = Model::new(n, kind)?;
        lattices.push((format!("{kind}({n})"), m.lattice.clone(), Some(m)));
    }
    let w = crate::wedge::wedge_gram(-1)?;
    lattices.push(("wedge".into(), w.lattice, None));
    for (name, lattice, model) in &lattices {
        let pool = reflection_pool(lattice, model.as_ref());
        // spread the pool by conjugating with a few reflections
        let mut roots = pool.clone();
        for _ in 0..40 {
            let a = &roots[rng.random_range(0..roots.len())];
            let b = &roots[rng.random_range(0..roots.len())];
            let moved = reflection(lattice, a)?.apply(b)?;
            roots.push(moved);
        }
        for _ in 0..500 {
            let len = rng.random_range(1..=6);
            let mut g = Isometry::identity(lattice);
            let (mut det, mut chi, mut ori, mut ori_neg) = (1, 1, 1, 1);
            for _ in 0..len {
                let d = &roots[rng.random_range(0..roots.len())];
                let r = reflection(lattice, d)?;
                let expected = if lattice.norm(d)?.is_negative() { 1 } else { -1 };
                if r.orientation_char() != expected || r.orientation_char_negative() != -expected {
                    bad.push(format!("{name}: parity rule for {d:?}"));
                }
                det *= r.det_char();
                chi *= r.chi()?;
                ori *= r.orientation_char();
                ori_neg *= r.orientation_char_negative();
                g = g.compose(&r)?;
            }
            if g.det_char() != det
                || g.chi()? != chi
                || g.orientation_char() != ori
                || g.orientation_char_negative() != ori_neg
            {
                bad.push(format!("{name}: product of {len} reflections"));
            }
        }
    }
    bad.truncate(5);
    Ok((bad.is_empty(), format!("500 products per lattice on {} lattices, failures {bad:?}", lattices.len())))
}

fn determinism() -> Result<(bool, String)> {
    let mut cfg = ExperimentConfig::new(2, Kind::Hilbert, 3, 0.05, 42);
    cfg.timing = false;
    let a = to_csv_string(&density_experiment(&cfg)?)?;
    let b = to_csv_string(&density_experiment(&cfg)?)?;
    Ok((a == b, format!("two runs with seed 42 give {} and {} bytes, identical {}", a.len(), b.len(), a == b)))
}
