//! Reproducible measurement of inputs-consumed-per-output-emitted.
//!
//! Three suites:
//!
//! * **cubic** — Möbius maps with fixed integer matrices applied to the
//!   expansions of `(∛d, ∛d²)` for non-cube `d` in a range;
//! * **random-mcf** — random nonsingular matrices over random admissible
//!   input streams;
//! * **random-bilinear** — random coefficient families over two independent
//!   random admissible streams.
//!
//! Each output event of each trial becomes one row of a CSV table
//! (`trial_id, mode, m, d_or_seed, matrix_id, output_index,
//! cumulative_inputs, max_entry_bits, guard_hit`), sorted by
//! `(trial_id, output_index)` so identical configurations yield
//! byte-identical files. Trials that stall before the first output are kept
//! as a single sentinel row with `output_index = 0` rather than dropped.
//! Randomness is `ChaCha8` seeded per trial from the master seed, so results
//! do not depend on thread count.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bilinear::{run_bilinear, BilinearState};
use crate::error::{Error, Result};
use crate::exactnum::{int_root, Rational};
use crate::jpa::JpaStream;
use crate::log::{RunOutcome, StepKind, StopReason};
use crate::matrix::IntMatrix;
use crate::mcf::{McfStep, QuotientStream};
use crate::mobius::{run, MobiusState, RunLimits};
use crate::oracle::{eval_mobius, verify_prefix};
use crate::source::CbrtPairSource;

/// One output event (or a stall sentinel when `output_index == 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRow {
    /// Trial number, unique within a suite.
    pub trial_id: u64,
    /// Suite kind: `cubic`, `random-mcf`, or `random-bilinear`.
    pub mode: &'static str,
    /// Dimension of the expanded tuples.
    pub m: usize,
    /// `d` for the cubic suite, the trial's derived seed otherwise.
    pub d_or_seed: String,
    /// Which coefficient matrix/family the trial used.
    pub matrix_id: String,
    /// 1-based output count at this event; 0 marks a stalled trial.
    pub output_index: usize,
    /// Inputs consumed when this output was emitted.
    pub cumulative_inputs: usize,
    /// Largest state entry, in bits, at this event.
    pub max_entry_bits: u64,
    /// Whether the whole trial ended on the output guard (stalled).
    pub guard_hit: bool,
}

/// Write rows as CSV with a fixed header. Rows should already be sorted
/// (the suite runners sort) so equal inputs give byte-identical output.
pub fn write_results_csv<W: Write>(rows: &[TrialRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "trial_id",
        "mode",
        "m",
        "d_or_seed",
        "matrix_id",
        "output_index",
        "cumulative_inputs",
        "max_entry_bits",
        "guard_hit",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.trial_id.to_string(),
            r.mode.to_string(),
            r.m.to_string(),
            r.d_or_seed.clone(),
            r.matrix_id.clone(),
            r.output_index.to_string(),
            r.cumulative_inputs.to_string(),
            r.max_entry_bits.to_string(),
            r.guard_hit.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

/// Exact least-squares slope of `y` against `x` over `(x, y)` points.
/// Fewer than two points (or constant `x`) give 0.
pub fn fit_slope(points: &[(usize, usize)]) -> Rational {
    let n = points.len();
    if n < 2 {
        return Rational::zero();
    }
    let nb = BigInt::from(n as u64);
    let mut sx = BigInt::zero();
    let mut sy = BigInt::zero();
    let mut sxx = BigInt::zero();
    let mut sxy = BigInt::zero();
    for &(x, y) in points {
        let xb = BigInt::from(x as u64);
        let yb = BigInt::from(y as u64);
        sxx += &xb * &xb;
        sxy += &xb * &yb;
        sx += xb;
        sy += yb;
    }
    let den = &nb * &sxx - &sx * &sx;
    if den.is_zero() {
        return Rational::zero();
    }
    let num = &nb * &sxy - &sx * &sy;
    Rational::new(num, den)
}

/// Per-trial slopes plus their mean and maximum.
#[derive(Debug, Clone)]
pub struct SlopeStats {
    /// `(trial_id, slope)` for every trial that produced ≥ 1 output row.
    pub per_trial: Vec<(u64, Rational)>,
    /// Arithmetic mean of the slopes (0 if there are none).
    pub mean: Rational,
    /// Largest slope (0 if there are none).
    pub max: Rational,
}

/// Fit one slope per trial (cumulative inputs against output index) over a
/// sorted row set, skipping stall sentinels.
pub fn slope_stats(rows: &[TrialRow]) -> SlopeStats {
    let mut per_trial: Vec<(u64, Rational)> = Vec::new();
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut current: Option<u64> = None;
    for r in rows {
        if current != Some(r.trial_id) {
            if let Some(id) = current {
                if !points.is_empty() {
                    per_trial.push((id, fit_slope(&points)));
                }
            }
            current = Some(r.trial_id);
            points.clear();
        }
        if r.output_index > 0 {
            points.push((r.output_index, r.cumulative_inputs));
        }
    }
    if let Some(id) = current {
        if !points.is_empty() {
            per_trial.push((id, fit_slope(&points)));
        }
    }
    let mean = if per_trial.is_empty() {
        Rational::zero()
    } else {
        let sum: Rational = per_trial.iter().map(|(_, s)| s.clone()).sum();
        sum / Rational::from_integer(BigInt::from(per_trial.len() as u64))
    };
    let max = per_trial
        .iter()
        .map(|(_, s)| s.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    SlopeStats {
        per_trial,
        mean,
        max,
    }
}

fn rows_for_outcome(
    trial_id: u64,
    mode: &'static str,
    m: usize,
    d_or_seed: &str,
    matrix_id: &str,
    outcome: &RunOutcome,
) -> Vec<TrialRow> {
    let guard_hit = matches!(outcome.stop, StopReason::GuardHit);
    let mut rows: Vec<TrialRow> = outcome
        .log
        .records()
        .iter()
        .filter(|r| r.kind == StepKind::Output)
        .map(|r| TrialRow {
            trial_id,
            mode,
            m,
            d_or_seed: d_or_seed.to_string(),
            matrix_id: matrix_id.to_string(),
            output_index: r.outputs_so_far,
            cumulative_inputs: r.inputs_so_far,
            max_entry_bits: r.max_entry_bits,
            guard_hit,
        })
        .collect();
    if rows.is_empty() {
        // Keep stalled trials visible instead of silently dropping them.
        rows.push(TrialRow {
            trial_id,
            mode,
            m,
            d_or_seed: d_or_seed.to_string(),
            matrix_id: matrix_id.to_string(),
            output_index: 0,
            cumulative_inputs: outcome.inputs_total(),
            max_entry_bits: outcome.max_entry_bits,
            guard_hit,
        });
    }
    rows
}

/// SplitMix64-style derivation of one trial's seed from the master seed, so
/// trials are independent of scheduling order.
fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_trials<T, F>(jobs: usize, count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if jobs <= 1 {
        (0..count).map(f).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| (0..count).into_par_iter().map(f).collect())
    }
}

/// A random quotient stream: the leading tuple is unconstrained in
/// `[0, bound]` componentwise; every later tuple satisfies the
/// admissibility constraints (`a₁ ≥ 1`, `0 ≤ aᵢ ≤ a₁`). Never exhausts.
pub struct RandomMcfStream {
    rng: ChaCha8Rng,
    m: usize,
    bound: u64,
    emitted: usize,
}

impl RandomMcfStream {
    /// Deterministic stream for the given seed.
    pub fn new(seed: u64, m: usize, bound: u64) -> Self {
        RandomMcfStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            m,
            bound,
            emitted: 0,
        }
    }
}

impl QuotientStream for RandomMcfStream {
    fn m(&self) -> usize {
        self.m
    }

    fn next_step(&mut self) -> Result<Option<McfStep>> {
        let tuple = if self.emitted == 0 {
            (0..self.m)
                .map(|_| BigInt::from(self.rng.gen_range(0..=self.bound)))
                .collect()
        } else {
            let a1 = self.rng.gen_range(1..=self.bound);
            let mut v = Vec::with_capacity(self.m);
            v.push(BigInt::from(a1));
            for _ in 1..self.m {
                v.push(BigInt::from(self.rng.gen_range(0..=a1)));
            }
            v
        };
        self.emitted += 1;
        Ok(Some(McfStep(tuple)))
    }
}

fn random_nonsingular_matrix(rng: &mut ChaCha8Rng, size: usize, bound: u64) -> IntMatrix {
    loop {
        let data: Vec<BigInt> = (0..size * size)
            .map(|_| BigInt::from(rng.gen_range(0..=bound)))
            .collect();
        let c = IntMatrix::new(size, size, data).expect("square shape");
        if !c.det().is_zero() {
            return c;
        }
    }
}

fn random_forms(rng: &mut ChaCha8Rng, m: usize, bound: u64) -> Vec<IntMatrix> {
    let size = m + 1;
    let mut forms = Vec::with_capacity(size);
    for idx in 0..size {
        loop {
            let data: Vec<BigInt> = (0..size * size)
                .map(|_| BigInt::from(rng.gen_range(0..=bound)))
                .collect();
            let c = IntMatrix::new(size, size, data).expect("square shape");
            // The denominator form must not vanish identically.
            if idx < m || !c.is_zero() {
                forms.push(c);
                break;
            }
        }
    }
    forms
}

/// Configuration for the cubic suite.
#[derive(Debug, Clone)]
pub struct CubicConfig {
    /// Smallest `d` (inclusive).
    pub d_min: u64,
    /// Largest `d` (inclusive); perfect cubes in range are skipped.
    pub d_max: u64,
    /// Outputs requested per trial.
    pub max_outputs: usize,
    /// Refinement budget for the `(∛d, ∛d²)` sources, in bits.
    pub budget_bits: u64,
    /// Verify every `verify_sample`-th nonsingular trial against the
    /// interval oracle; 0 disables verification.
    pub verify_sample: u64,
    /// Worker threads; 1 runs serially.
    pub jobs: usize,
}

impl Default for CubicConfig {
    fn default() -> Self {
        CubicConfig {
            d_min: 2,
            d_max: 100,
            max_outputs: 10,
            budget_bits: 1 << 16,
            verify_sample: 20,
            jobs: 1,
        }
    }
}

/// Output of [`run_cubic_suite`].
#[derive(Debug, Clone)]
pub struct CubicReport {
    /// One row per output event, sorted by `(trial_id, output_index)`.
    pub rows: Vec<TrialRow>,
    /// Human-readable remarks (e.g. singular matrices kept but unverified).
    pub notes: Vec<String>,
    /// How many trials were cross-checked against the oracle.
    pub verified: usize,
}

const CUBIC_MATRICES: [(&str, [[i64; 3]; 3]); 3] = [
    ("C1", [[2, 0, 0], [0, 2, 0], [0, 0, 1]]),
    ("C2", [[1, -1, 0], [1, -1, 0], [0, 0, 1]]),
    ("C3", [[3, 5, 0], [5, 3, 0], [1, 0, 2]]),
];

fn is_perfect_cube(d: u64) -> bool {
    let r = int_root(&BigInt::from(d), 3);
    &r * &r * &r == BigInt::from(d)
}

/// Run Möbius trials for every non-cube `d` in range against each fixed
/// matrix. Singular matrices run through the guard machinery unchanged (and
/// typically stall); they are noted and excluded from oracle verification.
/// A sampled-trial oracle mismatch aborts the suite with an error.
pub fn run_cubic_suite(cfg: &CubicConfig) -> Result<CubicReport> {
    if cfg.d_min < 2 || cfg.d_min > cfg.d_max {
        return Err(Error::Invalid(format!(
            "cubic range must satisfy 2 <= d_min <= d_max, got {}..={}",
            cfg.d_min, cfg.d_max
        )));
    }
    let ds: Vec<u64> = (cfg.d_min..=cfg.d_max)
        .filter(|&d| !is_perfect_cube(d))
        .collect();
    let trials: Vec<(u64, usize)> = ds
        .iter()
        .flat_map(|&d| (0..CUBIC_MATRICES.len()).map(move |k| (d, k)))
        .collect();
    let limits = RunLimits::for_outputs(cfg.max_outputs);

    let per_trial = run_trials(cfg.jobs, trials.len() as u64, |trial_id| {
        let (d, k) = trials[trial_id as usize];
        let (matrix_id, entries) = CUBIC_MATRICES[k];
        let rows_i64: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
        let c = IntMatrix::from_rows(&rows_i64);
        let singular = c.det().is_zero();
        let mut state = MobiusState::new_allow_singular(c.clone())?;
        let src = CbrtPairSource::new(BigInt::from(d), cfg.budget_bits)?;
        let mut stream = JpaStream::new(Box::new(src));
        let outcome = run(&mut state, &mut stream, limits)?;
        let rows = rows_for_outcome(trial_id, "cubic", 2, &d.to_string(), matrix_id, &outcome);
        let mut verified = false;
        if !singular
            && cfg.verify_sample > 0
            && trial_id % cfg.verify_sample == 0
            && !outcome.outputs.is_empty()
        {
            let base = CbrtPairSource::new(BigInt::from(d), cfg.budget_bits)?;
            let mut oracle = eval_mobius(Box::new(base), c)?;
            let v = verify_prefix(&outcome.outputs, &mut oracle, outcome.outputs.len())?;
            if !v.is_agreement() {
                return Err(Error::Invalid(format!(
                    "oracle mismatch on cubic trial {trial_id} (d={d}, {matrix_id}): {v:?}"
                )));
            }
            verified = true;
        }
        Ok((rows, verified))
    })?;

    let mut rows: Vec<TrialRow> = Vec::new();
    let mut verified = 0;
    for (r, v) in per_trial {
        rows.extend(r);
        verified += usize::from(v);
    }
    rows.sort_by_key(|r| (r.trial_id, r.output_index));

    let mut notes = Vec::new();
    for (id, entries) in CUBIC_MATRICES {
        let rows_i64: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
        if IntMatrix::from_rows(&rows_i64).det().is_zero() {
            notes.push(format!(
                "{id} is singular (det = 0): its trials are recorded with guard flags and \
                 excluded from oracle verification"
            ));
        }
    }
    Ok(CubicReport {
        rows,
        notes,
        verified,
    })
}

/// Configuration shared by the random suites.
#[derive(Debug, Clone)]
pub struct RandomConfig {
    /// Tuple dimension.
    pub m: usize,
    /// Number of trials.
    pub trials: u64,
    /// Upper bound `B` for quotients and coefficients (≥ 1).
    pub bound: u64,
    /// Outputs requested per trial.
    pub max_outputs: usize,
    /// Master seed; per-trial seeds are derived from it.
    pub seed: u64,
    /// Worker threads; 1 runs serially.
    pub jobs: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            m: 2,
            trials: 100,
            bound: 1000,
            max_outputs: 500,
            seed: 1,
            jobs: 1,
        }
    }
}

fn check_random_config(cfg: &RandomConfig) -> Result<()> {
    if cfg.m == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    if cfg.bound == 0 {
        return Err(Error::Invalid("bound must be at least 1".into()));
    }
    Ok(())
}

/// Random nonsingular Möbius maps over random admissible streams.
pub fn run_random_mobius_suite(cfg: &RandomConfig) -> Result<Vec<TrialRow>> {
    check_random_config(cfg)?;
    let limits = RunLimits::for_outputs(cfg.max_outputs);
    let per_trial = run_trials(cfg.jobs, cfg.trials, |trial_id| {
        let seed = trial_seed(cfg.seed, trial_id);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_nonsingular_matrix(&mut rng, cfg.m + 1, cfg.bound);
        let mut state = MobiusState::new(c)?;
        let mut stream = RandomMcfStream::new(trial_seed(seed, 1), cfg.m, cfg.bound);
        let outcome = run(&mut state, &mut stream, limits)?;
        Ok(rows_for_outcome(
            trial_id,
            "random-mcf",
            cfg.m,
            &seed.to_string(),
            "R",
            &outcome,
        ))
    })?;
    let mut rows: Vec<TrialRow> = per_trial.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.trial_id, r.output_index));
    Ok(rows)
}

/// Random coefficient families over two independent random streams.
pub fn run_random_bilinear_suite(cfg: &RandomConfig) -> Result<Vec<TrialRow>> {
    check_random_config(cfg)?;
    let limits = RunLimits::for_outputs(cfg.max_outputs);
    let per_trial = run_trials(cfg.jobs, cfg.trials, |trial_id| {
        let seed = trial_seed(cfg.seed, trial_id);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let forms = random_forms(&mut rng, cfg.m, cfg.bound);
        let mut state = BilinearState::new(forms)?;
        let mut xs = RandomMcfStream::new(trial_seed(seed, 1), cfg.m, cfg.bound);
        let mut ys = RandomMcfStream::new(trial_seed(seed, 2), cfg.m, cfg.bound);
        let outcome = run_bilinear(&mut state, &mut xs, &mut ys, limits)?;
        Ok(rows_for_outcome(
            trial_id,
            "random-bilinear",
            cfg.m,
            &seed.to_string(),
            "F",
            &outcome,
        ))
    })?;
    let mut rows: Vec<TrialRow> = per_trial.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.trial_id, r.output_index));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_bytes(rows: &[TrialRow]) -> Vec<u8> {
        let mut buf = Vec::new();
        write_results_csv(rows, &mut buf).unwrap();
        buf
    }

    #[test]
    fn slope_of_exact_line_is_one() {
        let pts = [(1, 1), (2, 2), (3, 3), (4, 4)];
        assert_eq!(fit_slope(&pts), Rational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn slope_of_staircase_is_two_fifths() {
        let pts = [(1, 1), (2, 1), (3, 2), (4, 2)];
        assert_eq!(
            fit_slope(&pts),
            Rational::new(BigInt::from(2), BigInt::from(5))
        );
    }

    #[test]
    fn slope_degenerate_cases_are_zero() {
        assert_eq!(fit_slope(&[]), Rational::zero());
        assert_eq!(fit_slope(&[(3, 7)]), Rational::zero());
        assert_eq!(fit_slope(&[(3, 7), (3, 9)]), Rational::zero());
    }

    #[test]
    fn slope_stats_group_by_trial() {
        let mk = |trial_id, output_index, cumulative_inputs| TrialRow {
            trial_id,
            mode: "cubic",
            m: 2,
            d_or_seed: "2".into(),
            matrix_id: "C1".into(),
            output_index,
            cumulative_inputs,
            max_entry_bits: 1,
            guard_hit: false,
        };
        let rows = vec![
            mk(0, 1, 1),
            mk(0, 2, 2),
            mk(1, 0, 5),
            mk(2, 1, 1),
            mk(2, 2, 1),
            mk(2, 3, 2),
            mk(2, 4, 2),
        ];
        let stats = slope_stats(&rows);
        // Trial 1 is a stall sentinel and contributes no slope.
        assert_eq!(stats.per_trial.len(), 2);
        assert_eq!(
            stats.per_trial[0],
            (0, Rational::from_integer(BigInt::from(1)))
        );
        assert_eq!(
            stats.per_trial[1],
            (2, Rational::new(BigInt::from(2), BigInt::from(5)))
        );
        assert_eq!(stats.mean, Rational::new(BigInt::from(7), BigInt::from(10)));
        assert_eq!(stats.max, Rational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn cubic_suite_small_range_is_deterministic_and_skips_cubes() {
        let cfg = CubicConfig {
            d_min: 2,
            d_max: 10,
            max_outputs: 4,
            verify_sample: 7,
            jobs: 1,
            ..CubicConfig::default()
        };
        let report = run_cubic_suite(&cfg).unwrap();
        // 8 is a cube: 8 remaining d values × 3 matrices.
        assert!(report.rows.iter().all(|r| r.d_or_seed != "8"));
        let ids: std::collections::BTreeSet<u64> = report.rows.iter().map(|r| r.trial_id).collect();
        assert_eq!(ids.len(), 8 * 3);
        assert!(report.verified >= 1);
        assert_eq!(report.notes.len(), 1);
        assert!(report.notes[0].starts_with("C2 is singular"));
        // Sorted, and per-trial inputs are nondecreasing across outputs.
        let mut prev: Option<(u64, usize, usize)> = None;
        for r in &report.rows {
            if let Some((id, oi, ci)) = prev {
                assert!((r.trial_id, r.output_index) > (id, oi));
                if r.trial_id == id {
                    assert!(r.cumulative_inputs >= ci);
                }
            }
            prev = Some((r.trial_id, r.output_index, r.cumulative_inputs));
        }
        // C1 and C3 trials reach the requested output count.
        for r in report.rows.iter().filter(|r| r.matrix_id != "C2") {
            assert!(r.output_index >= 1, "nonsingular trial stalled: {r:?}");
        }
        // Byte-identical across repeat and across thread counts.
        let again = run_cubic_suite(&cfg).unwrap();
        assert_eq!(csv_bytes(&report.rows), csv_bytes(&again.rows));
        let parallel = run_cubic_suite(&CubicConfig { jobs: 3, ..cfg }).unwrap();
        assert_eq!(csv_bytes(&report.rows), csv_bytes(&parallel.rows));
    }

    #[test]
    fn singular_matrix_trials_are_flagged_not_dropped() {
        let cfg = CubicConfig {
            d_min: 5,
            d_max: 5,
            max_outputs: 6,
            verify_sample: 0,
            jobs: 1,
            ..CubicConfig::default()
        };
        let report = run_cubic_suite(&cfg).unwrap();
        let c2: Vec<&TrialRow> = report.rows.iter().filter(|r| r.matrix_id == "C2").collect();
        assert!(!c2.is_empty(), "C2 rows must be present");
        assert!(
            c2.iter().all(|r| r.guard_hit),
            "C2 trials stall on the guard"
        );
    }

    #[test]
    fn random_mobius_suite_is_deterministic() {
        let cfg = RandomConfig {
            m: 2,
            trials: 5,
            bound: 30,
            max_outputs: 8,
            seed: 42,
            jobs: 1,
        };
        let rows = run_random_mobius_suite(&cfg).unwrap();
        assert!(!rows.is_empty());
        assert!(
            rows.iter().any(|r| r.output_index > 0),
            "no outputs in any trial"
        );
        let repeat = run_random_mobius_suite(&cfg).unwrap();
        assert_eq!(csv_bytes(&rows), csv_bytes(&repeat));
        let parallel = run_random_mobius_suite(&RandomConfig { jobs: 4, ..cfg }).unwrap();
        assert_eq!(csv_bytes(&rows), csv_bytes(&parallel));
        // A different seed changes the data.
        let other = run_random_mobius_suite(&RandomConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(csv_bytes(&rows), csv_bytes(&other));
    }

    #[test]
    fn random_bilinear_suite_is_deterministic() {
        let cfg = RandomConfig {
            m: 1,
            trials: 4,
            bound: 9,
            max_outputs: 6,
            seed: 7,
            jobs: 1,
        };
        let rows = run_random_bilinear_suite(&cfg).unwrap();
        assert!(!rows.is_empty());
        let repeat = run_random_bilinear_suite(&cfg).unwrap();
        assert_eq!(csv_bytes(&rows), csv_bytes(&repeat));
        let parallel = run_random_bilinear_suite(&RandomConfig { jobs: 2, ..cfg }).unwrap();
        assert_eq!(csv_bytes(&rows), csv_bytes(&parallel));
    }

    #[test]
    fn csv_layout_is_stable() {
        let row = TrialRow {
            trial_id: 3,
            mode: "random-mcf",
            m: 2,
            d_or_seed: "12345".into(),
            matrix_id: "R".into(),
            output_index: 2,
            cumulative_inputs: 5,
            max_entry_bits: 17,
            guard_hit: false,
        };
        let text = String::from_utf8(csv_bytes(&[row])).unwrap();
        assert_eq!(
            text,
            "trial_id,mode,m,d_or_seed,matrix_id,output_index,cumulative_inputs,max_entry_bits,guard_hit\n\
             3,random-mcf,2,12345,R,2,5,17,false\n"
        );
    }

    #[test]
    fn config_validation() {
        let bad = RandomConfig {
            bound: 0,
            ..RandomConfig::default()
        };
        assert!(run_random_mobius_suite(&bad).is_err());
        let bad = CubicConfig {
            d_min: 1,
            ..CubicConfig::default()
        };
        assert!(run_cubic_suite(&bad).is_err());
    }
}
