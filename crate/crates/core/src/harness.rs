//! Randomized verification campaigns, tightness comparison and the
//! regression fixtures for the two worked examples.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant as Clock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_bound, lemma_check, BoundId, BoundReport, Instance, LemmaId, Variant, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{max_eigenvalue, min_eigenvalue, operator_norm, polar_unitary};
use crate::matrix::ComplexMatrix;
use crate::oracle::{oracle_a_numerical_radius, oracle_a_seminorm, OracleConfig};
use crate::orlicz::{ComplementaryPair, OrliczFn, TriState};
use crate::state::{a_numerical_radius, a_seminorm, random_state, AState, Weight, DEFAULT_RADIUS_TOL};

/// Worker-count override for campaign pools.
pub const THREADS_ENV: &str = "ORLICZ_RADIUS_THREADS";

const ORACLE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Identity for bounds stated at `a = 1`; `random_pd_geq_one` for
    /// ramm, re02 and sumpi; `random_pd` for the remaining weighted bounds.
    #[default]
    Policy,
    Identity,
    RandomPd,
    RandomPdGeqOne,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub bound_ids: Vec<BoundId>,
    pub lemma_ids: Vec<LemmaId>,
    pub n_instances: usize,
    pub dim_range: [usize; 2],
    pub weight_mode: WeightMode,
    /// Names accepted by [`OrliczFn::from_name`], or paths to density CSV files.
    pub phi_set: Vec<String>,
    pub alpha_range: [f64; 2],
    pub r_range: [f64; 2],
    pub s_range: [f64; 2],
    pub n_range: [u32; 2],
    pub seed: u64,
    pub tol: f64,
    pub stress: bool,
    pub variant: Variant,
    /// Fraction of instances re-checked against the state-space oracle.
    pub oracle_fraction: f64,
    pub radius_tol: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            bound_ids: BoundId::ALL.to_vec(),
            lemma_ids: LemmaId::ALL.to_vec(),
            n_instances: 10_000,
            dim_range: [2, 6],
            weight_mode: WeightMode::Policy,
            phi_set: ["t", "t^2", "t^3/3", "t^1.5", "t^2+t"].map(String::from).to_vec(),
            alpha_range: [0.0, 1.0],
            r_range: [1.0, 3.0],
            s_range: [1.0, 3.0],
            n_range: [1, 6],
            seed: 0,
            tol: DEFAULT_TOL,
            stress: false,
            variant: Variant::Proof,
            oracle_fraction: 0.01,
            radius_tol: DEFAULT_RADIUS_TOL,
        }
    }
}

impl CampaignConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: Self = serde_json::from_str(&fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_instances == 0 {
            return bad("n_instances must be at least 1".into());
        }
        let [lo, hi] = self.dim_range;
        if lo < 1 || hi > crate::matrix::MAX_DIM || lo > hi {
            return bad(format!("dim_range must satisfy 1 <= min <= max <= 64, got {lo}..{hi}"));
        }
        for (name, [a, b]) in [("alpha_range", self.alpha_range), ("r_range", self.r_range), ("s_range", self.s_range)] {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return bad(format!("{name} must be a finite interval, got [{a}, {b}]"));
            }
        }
        if self.n_range[0] > self.n_range[1] {
            return bad(format!("n_range is empty: {:?}", self.n_range));
        }
        if !self.stress {
            if self.alpha_range[0] < 0.0 || self.alpha_range[1] > 1.0 {
                return bad("alpha_range must lie in [0, 1] outside stress mode".into());
            }
            if self.r_range[0] < 1.0 || self.s_range[0] < 1.0 {
                return bad("r_range and s_range must lie in [1, ∞) outside stress mode".into());
            }
            if self.n_range[0] < 1 {
                return bad("n_range must lie in [1, ∞) outside stress mode".into());
            }
        }
        if !(self.tol > 0.0) || !(self.radius_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.oracle_fraction) {
            return bad("oracle_fraction must lie in [0, 1]".into());
        }
        if self.phi_set.is_empty() {
            return bad("phi_set must not be empty".into());
        }
        self.phis()?;
        Ok(())
    }

    pub fn phis(&self) -> Result<Vec<OrliczFn>> {
        self.phi_set.iter().map(|name| parse_phi(name)).collect()
    }
}

/// A named function, or a density table when `spec` names an existing file.
pub fn parse_phi(spec: &str) -> Result<OrliczFn> {
    match OrliczFn::from_name(spec) {
        Ok(phi) => Ok(phi),
        Err(Error::UnknownId(_)) if Path::new(spec).is_file() => OrliczFn::from_csv(spec),
        Err(e) => Err(e),
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of instance `index` for identifier `id` in a campaign seeded with `seed`.
pub fn instance_seed(seed: u64, id: &str, index: usize) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a(id)) ^ index as u64)
}

/// Complex Gaussian rescaled to an operator norm drawn from `[0.05, 2]`.
fn scaled_gaussian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::random_gaussian(n, rng);
    rescale(g, rng.random_range(0.05..=2.0))
}

fn rescale(m: ComplexMatrix, target: f64) -> ComplexMatrix {
    let norm = operator_norm(&m).unwrap_or(0.0);
    if norm > 0.0 {
        m.scale(target / norm)
    } else {
        m
    }
}

fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::random_gaussian(n, rng).cogram();
    h.symmetrize();
    rescale(h, rng.random_range(0.05..=2.0))
}

/// Singular values floored at `1e-3·‖g‖` via `u(|g| + εI)`.
fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::random_gaussian(n, rng);
    let floor = 1e-3 * operator_norm(&g).unwrap_or(1.0);
    let m = match polar_unitary(&g) {
        Ok(u) => &g + &u.scale(floor),
        Err(_) => &g + &ComplexMatrix::identity(n).scale(floor),
    };
    rescale(m, rng.random_range(0.05..=2.0))
}

/// `g·g* + εI` with `ε = 1e-3·‖g·g*‖`, optionally shifted to `λ_min ≥ 1`.
fn random_weight(n: usize, geq_one: bool, rng: &mut ChaCha8Rng) -> Weight {
    let mut a = ComplexMatrix::random_gaussian(n, rng).cogram();
    a.symmetrize();
    let eps = 1e-3 * max_eigenvalue(&a);
    a = &a + &ComplexMatrix::identity(n).scale(eps);
    if geq_one {
        let lo = min_eigenvalue(&a);
        if lo < 1.0 {
            a = &a + &ComplexMatrix::identity(n).scale(1.0 - lo);
        }
    }
    // g·g* + εI with ε > 0 is invertible; the fallback only guards degenerate draws
    Weight::new(a).unwrap_or_else(|_| Weight::identity(n))
}

fn make_weight(mode: WeightMode, n: usize, rng: &mut ChaCha8Rng) -> Weight {
    match mode {
        WeightMode::Identity | WeightMode::Policy => Weight::identity(n),
        WeightMode::RandomPd => random_weight(n, false, rng),
        WeightMode::RandomPdGeqOne => random_weight(n, true, rng),
    }
}

fn bound_weight_mode(cfg: &CampaignConfig, id: BoundId) -> WeightMode {
    if !id.uses_weight() {
        return WeightMode::Identity;
    }
    let mode = match cfg.weight_mode {
        WeightMode::Policy => match id {
            BoundId::Ramm | BoundId::Re02 | BoundId::Sumpi => WeightMode::RandomPdGeqOne,
            _ => WeightMode::RandomPd,
        },
        mode => mode,
    };
    if cfg.stress && mode == WeightMode::RandomPdGeqOne {
        WeightMode::RandomPd
    } else {
        mode
    }
}

fn uniform(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn random_probs(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random_range(1e-12f64..1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = probs[..k - 1].iter().sum();
    probs[k - 1] = (1.0 - head).max(0.0);
    probs
}

fn pick_phi(phis: &[OrliczFn], keep: impl Fn(&OrliczFn) -> bool, rng: &mut ChaCha8Rng) -> OrliczFn {
    let allowed: Vec<&OrliczFn> = phis.iter().filter(|p| keep(p)).collect();
    if allowed.is_empty() {
        OrliczFn::power(1.0)
    } else {
        allowed[rng.random_range(0..allowed.len())].clone()
    }
}

/// Draws the instance for bound `id` determined by `seed` (an instance seed,
/// see [`instance_seed`]). Fails only on an invalid configuration.
pub fn random_instance(cfg: &CampaignConfig, id: BoundId, seed: u64) -> Result<Instance> {
    use BoundId::*;
    let phis = cfg.phis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(cfg.dim_range[0]..=cfg.dim_range[1]);
    let weight = make_weight(bound_weight_mode(cfg, id), n, &mut rng);
    let mut inst = Instance::new(weight);
    inst.variant = cfg.variant;
    inst.radius_tol = cfg.radius_tol;
    inst.alpha = uniform(&mut rng, cfg.alpha_range);
    inst.r = uniform(&mut rng, cfg.r_range);
    inst.s = uniform(&mut rng, cfg.s_range);
    inst.n = rng.random_range(cfg.n_range[0]..=cfg.n_range[1]);
    let stress = cfg.stress;
    let phi = match id {
        Dra | DraComm => pick_phi(&phis, |p| p.power_exponent().is_some(), &mut rng),
        Ra if !stress => pick_phi(&phis, |p| p.submultiplicative != TriState::No, &mut rng),
        _ => pick_phi(&phis, |_| true, &mut rng),
    };
    inst.phi = phi;

    match id {
        Sumpi => {
            let k = rng.random_range(2..=4);
            inst.probs = random_probs(k, &mut rng);
            for i in 1..=k {
                inst.matrices.insert(format!("x{i}"), scaled_gaussian(n, &mut rng));
            }
        }
        Ra => {
            if !stress {
                inst.r = inst.r.max(2.0);
            }
            let x = random_psd(n, &mut rng);
            let z = random_psd(n, &mut rng);
            let y = scaled_gaussian(n, &mut rng);
            inst = inst.with("x", x).with("y", y).with("z", z);
        }
        Kit28 => {
            if !stress {
                inst.n = inst.n.max(2);
            }
            for role in ["p", "q", "r", "s"] {
                inst.matrices.insert(role.into(), scaled_gaussian(n, &mut rng));
            }
            inst.matrices.insert("x".into(), random_invertible(n, &mut rng));
            inst.matrices.insert("y".into(), random_invertible(n, &mut rng));
        }
        _ => {
            for role in id.roles() {
                inst.matrices.insert(role.to_string(), scaled_gaussian(n, &mut rng));
            }
        }
    }

    // ‖y‖ ≤ 1 hypotheses, relaxed in stress mode
    let y_cap = match id {
        PietA if !stress => Some(true),
        PietB | Ram if !stress => Some(false),
        Sum2 if inst.n == 1 => Some(true),
        _ => None,
    };
    if let Some(weighted) = y_cap {
        let y = inst.matrices.remove("y").expect("role y drawn above");
        let norm = if weighted {
            a_seminorm(&y, &inst.weight)?
        } else {
            operator_norm(&y)?
        };
        let target = rng.random_range(0.05..=1.0);
        inst.matrices.insert("y".into(), if norm > 0.0 { y.scale(target / norm) } else { y });
    }
    Ok(inst)
}

/// Instance and state for a lemma check: the matrices live in the
/// instance, the state is returned as its density matrix.
pub fn random_lemma_instance(cfg: &CampaignConfig, id: LemmaId, seed: u64) -> Result<(Instance, ComplexMatrix)> {
    use LemmaId::*;
    let phis = cfg.phis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(cfg.dim_range[0]..=cfg.dim_range[1]);
    let geq_one = !cfg.stress;
    let weight = match id {
        L426 | Tla | Pje => Weight::identity(n),
        Lemma1 | Lemma2a | Lemma2b | Pie | Lj | M02 => random_weight(n, geq_one, &mut rng),
        Cauchy | Lsplemma02 | Cbuzano | Lal | L01 => random_weight(n, false, &mut rng),
    };
    let mut inst = Instance::new(weight);
    inst.radius_tol = cfg.radius_tol;
    inst.alpha = uniform(&mut rng, cfg.alpha_range);
    inst.r = uniform(&mut rng, cfg.r_range);
    inst.phi = pick_phi(&phis, |_| true, &mut rng);
    match id {
        Cbuzano | Lal => {
            let k = rng.random_range(2..=4);
            inst.probs = random_probs(k, &mut rng);
            for i in 1..=k {
                inst.matrices.insert(format!("x{i}"), scaled_gaussian(n, &mut rng));
                inst.matrices.insert(format!("y{i}"), scaled_gaussian(n, &mut rng));
            }
        }
        Cauchy | Lsplemma02 | L01 | Lemma1 | Lemma2a | Lemma2b => {
            inst.matrices.insert("x".into(), scaled_gaussian(n, &mut rng));
            inst.matrices.insert("y".into(), scaled_gaussian(n, &mut rng));
        }
        Pie => {
            let y = scaled_gaussian(n, &mut rng);
            let ny = a_seminorm(&y, &inst.weight)?;
            let target = rng.random_range(0.05..=1.0);
            inst.matrices.insert("x".into(), scaled_gaussian(n, &mut rng));
            inst.matrices.insert("y".into(), y.scale(target / ny.max(f64::MIN_POSITIVE)));
            inst.matrices.insert("z".into(), scaled_gaussian(n, &mut rng));
        }
        L426 => {
            inst.matrices.insert("x".into(), scaled_gaussian(n, &mut rng));
            inst.matrices.insert("y".into(), random_invertible(n, &mut rng));
            inst.matrices.insert("z".into(), scaled_gaussian(n, &mut rng));
        }
        Tla => {
            for role in ["p", "q", "r", "s"] {
                inst.matrices.insert(role.into(), scaled_gaussian(n, &mut rng));
            }
            inst.matrices.insert("x".into(), random_invertible(n, &mut rng));
            inst.matrices.insert("y".into(), random_invertible(n, &mut rng));
        }
        Lj | M02 => {
            // x = a⁻¹h with h PSD, so ax = h is Hermitian PSD
            let h = random_psd(n, &mut rng);
            let x = inst.weight.inv_a().matmul(&h);
            inst.matrices.insert("x".into(), x);
        }
        Pje => {
            inst.alpha = rng.random_range(0.05..=1.0);
            inst.matrices.insert("x".into(), random_psd(n, &mut rng));
        }
    }
    if matches!(id, L01 | Tla) {
        let p = rng.random_range(1.2..=4.0);
        inst.pair = Some(ComplementaryPair::conjugate_powers(p)?);
    }
    let rank = rng.random_range(1..=n);
    let rho = random_state(&inst.weight, rank, &mut rng).rho().clone();
    Ok((inst, rho))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeededReport {
    pub seed: u64,
    pub report: BoundReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceError {
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackStats {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    /// Smallest `slack / scale`.
    pub min_relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub id: String,
    pub count: usize,
    /// Instances with every recorded precondition satisfied.
    pub preconditions_met: usize,
    pub violations: Vec<SeededReport>,
    /// Failures on instances with an unmet precondition (stress evidence).
    pub unmet_precondition_failures: Vec<SeededReport>,
    /// First-pass failures cleared by the tighter re-evaluation.
    pub cleared_by_retriage: usize,
    pub errors: Vec<InstanceError>,
    pub slack: Option<SlackStats>,
    pub tightest: Option<SeededReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub checked: usize,
    pub max_relative_gap: f64,
    pub failures: Vec<InstanceError>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub n_instances: usize,
    pub tol: f64,
    pub stress: bool,
    pub bounds: Vec<BoundSummary>,
    pub lemmas: Vec<BoundSummary>,
    pub oracle: OracleSummary,
    #[serde(skip)]
    pub wall_time_secs: f64,
    #[serde(skip)]
    pub rows: Vec<CsvRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub bound_id: String,
    pub seed: u64,
    pub dim: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub variant: String,
    pub precondition_flags: String,
}

impl CampaignReport {
    pub fn violation_count(&self) -> usize {
        self.bounds.iter().chain(&self.lemmas).map(|b| b.violations.len()).sum()
    }

    pub fn error_count(&self) -> usize {
        self.bounds.iter().chain(&self.lemmas).map(|b| b.errors.len()).sum()
    }

    /// No violations, no evaluator errors and no oracle disagreement.
    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0 && self.error_count() == 0 && self.oracle.failures.is_empty()
    }

    pub fn summary(&self, id: &str) -> Option<&BoundSummary> {
        self.bounds.iter().chain(&self.lemmas).find(|b| b.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Writes `report.json` and `report.csv` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json()?)?;
        self.write_csv(dir.join("report.csv"))
    }
}

enum Outcome {
    Evaluated {
        report: BoundReport,
        cleared: bool,
        dim: usize,
        oracle: Option<std::result::Result<f64, String>>,
    },
    Failed(String),
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
}

/// Evaluates once, and once more at a 10× tighter radius tolerance when the
/// first pass fails. Returns the final report and whether retriage cleared it.
fn evaluate_with_retriage(
    eval: impl Fn(&Instance) -> Result<BoundReport>,
    inst: &mut Instance,
    tol: f64,
) -> Result<(BoundReport, bool)> {
    let first = eval(inst)?;
    if first.holds_at(tol) {
        return Ok((first, false));
    }
    inst.radius_tol /= 10.0;
    let second = eval(inst)?;
    let cleared = second.holds_at(tol);
    Ok((second, cleared))
}

fn oracle_check(inst: &Instance, seed: u64) -> Option<std::result::Result<f64, String>> {
    let x = inst.matrices.values().next()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f72_6163_6c65);
    let w = &inst.weight;
    let mut gap = |cfg: &OracleConfig| -> Result<f64> {
        let v = a_numerical_radius(x, w, DEFAULT_RADIUS_TOL)?;
        let ov = oracle_a_numerical_radius(x, w, cfg, &mut rng)?;
        let n = a_seminorm(x, w)?;
        let on = oracle_a_seminorm(x, w, cfg, &mut rng)?;
        Ok(((v - ov).abs() / v.max(1.0)).max((n - on).abs() / n.max(1.0)))
    };
    // the light search can stall on a local maximum; confirm with the full one
    let mut run = || -> Result<f64> {
        let light = gap(&OracleConfig::light())?;
        if light <= ORACLE_TOL {
            Ok(light)
        } else {
            gap(&OracleConfig::full())
        }
    };
    Some(run().map_err(|e| e.to_string()))
}

fn selected_for_oracle(seed: u64, fraction: f64) -> bool {
    fraction > 0.0 && (splitmix64(seed ^ 0x0a11_ce00) as f64 / u64::MAX as f64) < fraction
}

fn summarize(id: &str, seeds: &[u64], outcomes: Vec<Outcome>, tol: f64, oracle: &mut OracleSummary) -> (BoundSummary, Vec<CsvRow>) {
    let mut summary = BoundSummary {
        id: id.to_string(),
        count: seeds.len(),
        preconditions_met: 0,
        violations: Vec::new(),
        unmet_precondition_failures: Vec::new(),
        cleared_by_retriage: 0,
        errors: Vec::new(),
        slack: None,
        tightest: None,
    };
    let mut rows = Vec::with_capacity(seeds.len());
    let mut slacks = Vec::new();
    let mut tightest: Option<(f64, SeededReport)> = None;
    for (&seed, outcome) in seeds.iter().zip(outcomes) {
        match outcome {
            Outcome::Failed(message) => summary.errors.push(InstanceError { seed, message }),
            Outcome::Evaluated {
                report,
                cleared,
                dim,
                oracle: check,
            } => {
                if cleared {
                    summary.cleared_by_retriage += 1;
                }
                match check {
                    Some(Ok(gap)) => {
                        oracle.checked += 1;
                        oracle.max_relative_gap = oracle.max_relative_gap.max(gap);
                        if gap > ORACLE_TOL {
                            oracle.failures.push(InstanceError {
                                seed,
                                message: format!("{id}: relative gap {gap:e}"),
                            });
                        }
                    }
                    Some(Err(message)) => oracle.failures.push(InstanceError { seed, message }),
                    None => {}
                }
                rows.push(CsvRow {
                    bound_id: id.to_string(),
                    seed,
                    dim,
                    lhs: report.lhs,
                    rhs: report.rhs,
                    slack: report.slack,
                    holds: report.holds_at(tol),
                    variant: report.variant.map(|v| v.as_str().to_string()).unwrap_or_default(),
                    precondition_flags: report
                        .preconditions
                        .iter()
                        .map(|p| format!("{}={}", p.name, u8::from(p.satisfied)))
                        .collect::<Vec<_>>()
                        .join(";"),
                });
                let holds = report.holds_at(tol);
                if !report.preconditions_met() {
                    if !holds {
                        summary.unmet_precondition_failures.push(SeededReport { seed, report });
                    }
                    continue;
                }
                summary.preconditions_met += 1;
                slacks.push(report.slack);
                let relative = report.slack / report.scale();
                if tightest.as_ref().is_none_or(|(best, _)| relative < *best) {
                    tightest = Some((relative, SeededReport { seed, report: report.clone() }));
                }
                if !holds {
                    summary.violations.push(SeededReport { seed, report });
                }
            }
        }
    }
    if !slacks.is_empty() {
        let mean = slacks.iter().sum::<f64>() / slacks.len() as f64;
        slacks.sort_by(f64::total_cmp);
        let mid = slacks.len() / 2;
        let median = if slacks.len() % 2 == 1 {
            slacks[mid]
        } else {
            0.5 * (slacks[mid - 1] + slacks[mid])
        };
        summary.slack = Some(SlackStats {
            min: slacks[0],
            median,
            mean,
            min_relative: tightest.as_ref().map_or(0.0, |(r, _)| *r),
        });
    }
    summary.tightest = tightest.map(|(_, s)| s);
    (summary, rows)
}

/// Runs every selected bound and lemma on `n_instances` fresh instances.
/// The report depends only on `cfg`, not on scheduling.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Clock::now();
    let pool = thread_pool()?;
    let tol = cfg.tol;
    let mut oracle = OracleSummary::default();
    let mut bounds = Vec::new();
    let mut lemmas = Vec::new();
    let mut rows = Vec::new();

    for &id in &cfg.bound_ids {
        let seeds: Vec<u64> = (0..cfg.n_instances).map(|i| instance_seed(cfg.seed, id.as_str(), i)).collect();
        let outcomes: Vec<Outcome> = pool.install(|| {
            seeds
                .par_iter()
                .map(|&seed| {
                    let run = || -> Result<Outcome> {
                        let mut inst = random_instance(cfg, id, seed)?;
                        let check = if selected_for_oracle(seed, cfg.oracle_fraction) {
                            oracle_check(&inst, seed)
                        } else {
                            None
                        };
                        let (report, cleared) =
                            evaluate_with_retriage(|i| evaluate_bound(id, i, tol), &mut inst, tol)?;
                        Ok(Outcome::Evaluated {
                            report,
                            cleared,
                            dim: inst.dim(),
                            oracle: check,
                        })
                    };
                    run().unwrap_or_else(|e| Outcome::Failed(e.to_string()))
                })
                .collect()
        });
        let (summary, mut id_rows) = summarize(id.as_str(), &seeds, outcomes, tol, &mut oracle);
        bounds.push(summary);
        rows.append(&mut id_rows);
    }

    for &id in &cfg.lemma_ids {
        let seeds: Vec<u64> = (0..cfg.n_instances).map(|i| instance_seed(cfg.seed, id.as_str(), i)).collect();
        let outcomes: Vec<Outcome> = pool.install(|| {
            seeds
                .par_iter()
                .map(|&seed| {
                    let run = || -> Result<Outcome> {
                        let (mut inst, rho) = random_lemma_instance(cfg, id, seed)?;
                        let weight = inst.weight.clone();
                        let f = AState::new(rho, &weight)?;
                        let (report, cleared) =
                            evaluate_with_retriage(|i| lemma_check(id, i, &f, tol), &mut inst, tol)?;
                        Ok(Outcome::Evaluated {
                            report,
                            cleared,
                            dim: inst.dim(),
                            oracle: None,
                        })
                    };
                    run().unwrap_or_else(|e| Outcome::Failed(e.to_string()))
                })
                .collect()
        });
        let (summary, mut id_rows) = summarize(id.as_str(), &seeds, outcomes, tol, &mut oracle);
        lemmas.push(summary);
        rows.append(&mut id_rows);
    }

    Ok(CampaignReport {
        seed: cfg.seed,
        n_instances: cfg.n_instances,
        tol,
        stress: cfg.stress,
        bounds,
        lemmas,
        oracle,
        wall_time_secs: start.elapsed().as_secs_f64(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseWins {
    pub first: String,
    pub second: String,
    /// Instances where `first` has the strictly smaller right side.
    pub first_wins: usize,
    pub second_wins: usize,
    pub ties: usize,
    /// Mean of `rhs(first) − rhs(second)`.
    pub mean_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessTable {
    pub ids: Vec<String>,
    /// `rhs[k][j]`: right side of bound `j` on instance `k`.
    pub rhs: Vec<Vec<f64>>,
    /// Per instance, identifiers ordered by ascending right side.
    pub rankings: Vec<Vec<String>>,
    pub pairs: Vec<PairwiseWins>,
}

/// Ranks the right sides of `ids` on every instance. Right sides within
/// `1e-12·scale` of each other count as ties.
pub fn tightness_compare(ids: &[BoundId], instances: &[Instance], tol: f64) -> Result<TightnessTable> {
    let mut rhs = Vec::with_capacity(instances.len());
    for inst in instances {
        let row = ids
            .iter()
            .map(|&id| evaluate_bound(id, inst, tol).map(|r| r.rhs))
            .collect::<Result<Vec<f64>>>()?;
        rhs.push(row);
    }
    let names: Vec<String> = ids.iter().map(|id| id.as_str().to_string()).collect();
    let rankings = rhs
        .iter()
        .map(|row| {
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by(|&i, &j| row[i].total_cmp(&row[j]));
            order.into_iter().map(|i| names[i].clone()).collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let mut entry = PairwiseWins {
                first: names[i].clone(),
                second: names[j].clone(),
                first_wins: 0,
                second_wins: 0,
                ties: 0,
                mean_gap: 0.0,
            };
            for row in &rhs {
                let (a, b) = (row[i], row[j]);
                let scale = 1f64.max(a.abs()).max(b.abs());
                if (a - b).abs() <= 1e-12 * scale {
                    entry.ties += 1;
                } else if a < b {
                    entry.first_wins += 1;
                } else {
                    entry.second_wins += 1;
                }
                entry.mean_gap += a - b;
            }
            if !rhs.is_empty() {
                entry.mean_gap /= rhs.len() as f64;
            }
            pairs.push(entry);
        }
    }
    Ok(TightnessTable {
        ids: names,
        rhs,
        rankings,
        pairs,
    })
}

/// Inputs of the two worked examples; the expected constants are fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleFixtures {
    pub t: ComplexMatrix,
    pub s: ComplexMatrix,
    pub sum2_n: u32,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub kit28_alpha: f64,
    pub kit28_n: u32,
}

impl Default for ExampleFixtures {
    fn default() -> Self {
        let diag = |d: &[f64]| ComplexMatrix::from_real_diag(d).expect("fixed 2×2 diagonal");
        Self {
            t: diag(&[0.5, 1.0 / 3.0]),
            s: diag(&[0.25, 0.2]),
            sum2_n: 3,
            a: diag(&[0.5, 1.0 / 3.0]),
            b: diag(&[3.0, 4.0]),
            c: diag(&[0.5, 0.25]),
            d: diag(&[3.0, 5.0]),
            kit28_alpha: 1.0,
            kit28_n: 3,
        }
    }
}

impl ExampleFixtures {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub const FIXTURE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureQuantity {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub quantities: Vec<FixtureQuantity>,
}

impl FixtureReport {
    pub fn all_match(&self) -> bool {
        self.quantities.iter().all(|q| q.matches)
    }

    /// The first deviating quantity as an error.
    pub fn into_result(self) -> Result<Self> {
        match self.quantities.iter().find(|q| !q.matches) {
            Some(q) => Err(Error::FixtureMismatch {
                quantity: q.name.clone(),
                expected: q.expected,
                computed: q.computed,
            }),
            None => Ok(self),
        }
    }
}

/// Evaluates both examples on `fx` and compares with the published values.
pub fn evaluate_fixtures(fx: &ExampleFixtures) -> Result<FixtureReport> {
    let dim = fx.t.dim();
    let mut sum2_inst = Instance::with_identity(dim).with("x", fx.t.clone()).with("y", fx.s.clone());
    sum2_inst.n = fx.sum2_n;
    let sum2 = evaluate_bound(BoundId::Sum2, &sum2_inst, DEFAULT_TOL)?;
    let hhnn = evaluate_bound(BoundId::Hhnn, &sum2_inst, DEFAULT_TOL)?;

    let dim = fx.a.dim();
    let identity = ComplexMatrix::identity(dim);
    let mut kit_inst = Instance::with_identity(dim)
        .with("p", fx.a.clone())
        .with("x", fx.b.clone())
        .with("q", identity.clone())
        .with("r", fx.c.clone())
        .with("y", fx.d.clone())
        .with("s", identity);
    kit_inst.alpha = fx.kit28_alpha;
    kit_inst.n = fx.kit28_n;
    let kit = evaluate_bound(BoundId::Kit28, &kit_inst, DEFAULT_TOL)?;

    let quantity = |name: &str, expected: f64, computed: f64| FixtureQuantity {
        name: name.to_string(),
        expected,
        computed,
        matches: (expected - computed).abs() <= FIXTURE_TOL,
    };
    Ok(FixtureReport {
        quantities: vec![
            quantity("sum2_rhs", 0.5625, sum2.rhs),
            quantity("hhnn_rhs", 0.59375, hhnn.rhs),
            quantity("sum2_lhs", 0.5625, sum2.lhs),
            quantity("kit28_rhs", (65.0 + 40.0 * 5f64.sqrt()) / 12.0, kit.rhs),
            quantity("kit28_lhs", 3.0, kit.lhs),
        ],
    })
}

/// Both worked examples at their published inputs; fails with
/// [`Error::FixtureMismatch`] on the first deviating quantity.
pub fn repro_worked_examples() -> Result<FixtureReport> {
    evaluate_fixtures(&ExampleFixtures::default())?.into_result()
}

/// Per-identifier counts keyed by id, convenient for printing.
pub fn violation_table(report: &CampaignReport) -> BTreeMap<String, usize> {
    report
        .bounds
        .iter()
        .chain(&report.lemmas)
        .map(|b| (b.id.clone(), b.violations.len()))
        .collect()
}
