//! Orlicz functions, complementary pairs and Young's inequality.
//!
//! An Orlicz function here is a continuous, convex, nondecreasing map
//! `φ: [0,∞) → [0,∞)` with `φ(0) = 0`, always taken non-degenerate
//! (`φ(u) > 0` for `u > 0`). When a density `p` is available,
//! `φ(u) = ∫₀ᵘ p`, and the complementary function is
//! `ψ(v) = ∫₀ᵛ q` with `q(s) = sup{t : p(t) ≤ s}`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Clone)]
pub enum OrliczForm {
    /// `t^p / p`, `p ≥ 1`.
    PowerScaled(f64),
    /// `t^r`, `r ≥ 1`.
    Power(f64),
    /// Piecewise-linear density.
    TableDensity(Arc<DensityTable>),
    /// Arbitrary evaluable map, optionally with its density.
    Custom {
        func: ScalarFn,
        density: Option<ScalarFn>,
    },
}

#[derive(Clone)]
pub struct OrliczFn {
    name: String,
    form: OrliczForm,
    pub submultiplicative: TriState,
    pub multiplicative: TriState,
}

impl fmt::Debug for OrliczFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.form {
            OrliczForm::PowerScaled(p) => format!("PowerScaled({p})"),
            OrliczForm::Power(r) => format!("Power({r})"),
            OrliczForm::TableDensity(t) => format!("TableDensity({} nodes)", t.grid.len()),
            OrliczForm::Custom { density, .. } => {
                format!("Custom(density: {})", density.is_some())
            }
        };
        f.debug_struct("OrliczFn")
            .field("name", &self.name)
            .field("form", &kind)
            .field("submultiplicative", &self.submultiplicative)
            .field("multiplicative", &self.multiplicative)
            .finish()
    }
}

impl OrliczFn {
    /// `t^p / p`.
    pub fn power_scaled(p: f64) -> Self {
        assert!(p >= 1.0 && p.is_finite(), "exponent must be >= 1");
        let exact = if p == 1.0 { TriState::Yes } else { TriState::No };
        Self {
            name: if p == 1.0 { "t".into() } else { format!("t^{p}/{p}") },
            form: OrliczForm::PowerScaled(p),
            submultiplicative: exact,
            multiplicative: exact,
        }
    }

    /// `t^r`; multiplicative, hence submultiplicative.
    pub fn power(r: f64) -> Self {
        assert!(r >= 1.0 && r.is_finite(), "exponent must be >= 1");
        Self {
            name: if r == 1.0 { "t".into() } else { format!("t^{r}") },
            form: OrliczForm::Power(r),
            submultiplicative: TriState::Yes,
            multiplicative: TriState::Yes,
        }
    }

    pub fn table(table: DensityTable) -> Self {
        Self {
            name: "table".into(),
            form: OrliczForm::TableDensity(Arc::new(table)),
            submultiplicative: TriState::Unknown,
            multiplicative: TriState::Unknown,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
        density: Option<ScalarFn>,
    ) -> Self {
        Self {
            name: name.into(),
            form: OrliczForm::Custom {
                func: Arc::new(func),
                density,
            },
            submultiplicative: TriState::Unknown,
            multiplicative: TriState::Unknown,
        }
    }

    /// Loads a density table from a two-column CSV `t,p(t)` without header.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path.as_ref())?;
        let mut grid = Vec::new();
        let mut p_values = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::InvalidParameter(format!(
                    "density CSV rows need two columns, found {}",
                    record.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("not a number: `{s}`")))
            };
            grid.push(parse(&record[0])?);
            p_values.push(parse(&record[1])?);
        }
        let mut phi = Self::table(DensityTable::new(grid, p_values)?);
        phi.name = format!("table:{}", path.as_ref().display());
        Ok(phi)
    }

    /// Parses a named function: `t`, `t^2`, `t^3/3`, `t^1.5`, `t^2+t`,
    /// `exp-1`, `pow:<r>` (for `t^r`) or `powscaled:<p>` (for `t^p/p`).
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::UnknownId(name.to_string());
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let phi = match name.trim() {
            "t" => Self::power(1.0),
            "t^2+t" => {
                let mut phi = Self::custom(
                    "t^2+t",
                    |t| t * t + t,
                    Some(Arc::new(|t: f64| 2.0 * t + 1.0)),
                );
                // (u²+u)(v²+v) − (u²v² + uv) = u²v + uv² ≥ 0
                phi.submultiplicative = TriState::Yes;
                phi.multiplicative = TriState::No;
                phi
            }
            "exp-1" => {
                let mut phi = Self::custom("exp-1", f64::exp_m1, Some(Arc::new(f64::exp)));
                phi.submultiplicative = TriState::No;
                phi.multiplicative = TriState::No;
                phi
            }
            other => {
                if let Some(r) = other.strip_prefix("pow:") {
                    Self::checked_power(num(r)?, false)?
                } else if let Some(p) = other.strip_prefix("powscaled:") {
                    Self::checked_power(num(p)?, true)?
                } else if let Some(rest) = other.strip_prefix("t^") {
                    match rest.split_once('/') {
                        Some((e, d)) if num(e)? == num(d)? => Self::checked_power(num(e)?, true)?,
                        Some(_) => return Err(bad()),
                        None => Self::checked_power(num(rest)?, false)?,
                    }
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(phi)
    }

    fn checked_power(e: f64, scaled: bool) -> Result<Self> {
        if !(e >= 1.0) || !e.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Orlicz exponent must be finite and >= 1, got {e}"
            )));
        }
        Ok(if scaled {
            Self::power_scaled(e)
        } else {
            Self::power(e)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> &OrliczForm {
        &self.form
    }

    /// Exponent when this is `t^r` (or the linear function `t`).
    pub fn power_exponent(&self) -> Option<f64> {
        match self.form {
            OrliczForm::Power(r) => Some(r),
            OrliczForm::PowerScaled(1.0) => Some(1.0),
            _ => None,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.power_exponent() == Some(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match &self.form {
            OrliczForm::PowerScaled(p) => {
                if *p == 1.0 {
                    t
                } else {
                    t.powf(*p) / p
                }
            }
            OrliczForm::Power(r) => {
                if *r == 1.0 {
                    t
                } else if *r == 2.0 {
                    t * t
                } else {
                    t.powf(*r)
                }
            }
            OrliczForm::TableDensity(table) => table.integral(t),
            OrliczForm::Custom { func, .. } => func(t),
        }
    }

    /// The density `p` with `φ(u) = ∫₀ᵘ p`, if known.
    pub fn density(&self, t: f64) -> Option<f64> {
        let t = t.max(0.0);
        match &self.form {
            OrliczForm::PowerScaled(p) => Some(t.powf(p - 1.0)),
            OrliczForm::Power(r) => Some(r * t.powf(r - 1.0)),
            OrliczForm::TableDensity(table) => Some(table.density(t)),
            OrliczForm::Custom { density, .. } => density.as_ref().map(|d| d(t)),
        }
    }
}

/// Piecewise-linear density table with linear extrapolation past the last node.
#[derive(Clone, Debug)]
pub struct DensityTable {
    grid: Vec<f64>,
    p_values: Vec<f64>,
    /// `∫₀^{grid[k]} p`
    cumulative: Vec<f64>,
}

impl DensityTable {
    pub fn new(grid: Vec<f64>, p_values: Vec<f64>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        if grid.len() != p_values.len() || grid.len() < 2 {
            return invalid("density table needs at least two (t, p) rows".into());
        }
        if grid.iter().chain(&p_values).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if grid[0] != 0.0 || p_values[0] != 0.0 {
            return invalid("density table must start at (0, 0)".into());
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("density grid must be strictly ascending".into());
        }
        if p_values.windows(2).any(|w| w[1] < w[0]) {
            return invalid("density values must be nondecreasing".into());
        }
        if p_values[1] <= 0.0 {
            return invalid("density must be positive beyond the first node".into());
        }
        let k = grid.len() - 1;
        if p_values[k] <= p_values[k - 1] {
            return invalid("density must be strictly increasing on the last segment".into());
        }
        let mut cumulative = Vec::with_capacity(grid.len());
        cumulative.push(0.0);
        for i in 1..grid.len() {
            let area = 0.5 * (p_values[i] + p_values[i - 1]) * (grid[i] - grid[i - 1]);
            cumulative.push(cumulative[i - 1] + area);
        }
        Ok(Self {
            grid,
            p_values,
            cumulative,
        })
    }

    /// Samples `p` on `grid`.
    pub fn from_fn(grid: Vec<f64>, p: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&t| p(t)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    fn last_slope(&self) -> f64 {
        let k = self.grid.len() - 1;
        (self.p_values[k] - self.p_values[k - 1]) / (self.grid[k] - self.grid[k - 1])
    }

    /// Index `k` with `grid[k] ≤ t < grid[k+1]`, clamped to the last segment.
    fn segment(&self, t: f64) -> usize {
        let idx = self.grid.partition_point(|&g| g <= t);
        idx.saturating_sub(1).min(self.grid.len() - 2)
    }

    pub fn density(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let (t0, t1) = (self.grid[k], self.grid[k + 1]);
        let (p0, p1) = (self.p_values[k], self.p_values[k + 1]);
        p0 + (p1 - p0) * (t - t0) / (t1 - t0)
    }

    /// `∫₀ᵗ p`, exact for the piecewise-linear density.
    pub fn integral(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let d = t - self.grid[k];
        let pt = self.density(t);
        self.cumulative[k] + 0.5 * (self.p_values[k] + pt) * d
    }

    /// Right inverse `q(s) = sup{t : p(t) ≤ s}`.
    pub fn right_inverse(&self, s: f64) -> f64 {
        let last = self.grid.len() - 1;
        // number of nodes with p ≤ s; nodes are nondecreasing
        let count = self.p_values.partition_point(|&p| p <= s);
        if count == 0 {
            return 0.0;
        }
        let k = count - 1;
        if k == last {
            return self.grid[last] + (s - self.p_values[last]) / self.last_slope();
        }
        let (p0, p1) = (self.p_values[k], self.p_values[k + 1]);
        let (t0, t1) = (self.grid[k], self.grid[k + 1]);
        t0 + (s - p0) / (p1 - p0) * (t1 - t0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    ClosedForm,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct ComplementaryPair {
    pub phi: OrliczFn,
    pub psi: OrliczFn,
    pub construction: Construction,
}

impl ComplementaryPair {
    /// The closed-form pair `(t^p/p, t^q/q)` with `1/p + 1/q = 1`, `p > 1`.
    pub fn conjugate_powers(p: f64) -> Result<Self> {
        complementary(&OrliczFn::power_scaled(p), 10.0, 1e-10)
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Builds the complementary Orlicz function of `phi`.
///
/// Power forms are conjugated in closed form. Density tables are inverted by
/// binary search and the right inverse is integrated with adaptive trapezoid
/// halving, tabulated on `[0, v_max]` with error at most `integration_tol`
/// per node.
pub fn complementary(phi: &OrliczFn, v_max: f64, integration_tol: f64) -> Result<ComplementaryPair> {
    if phi.is_linear() {
        return Err(Error::NoDensity(format!(
            "{} (linear: complementary is degenerate)",
            phi.name()
        )));
    }
    match phi.form() {
        OrliczForm::PowerScaled(p) => {
            let q = conjugate_exponent(*p);
            let mut psi = OrliczFn::power_scaled(q);
            psi.name = format!("t^{q}/{q}");
            Ok(ComplementaryPair {
                phi: phi.clone(),
                psi,
                construction: Construction::ClosedForm,
            })
        }
        OrliczForm::Power(r) => {
            // sup_t (vt − t^r) = (r−1)·(v/r)^{r/(r−1)}
            let r = *r;
            let e = r / (r - 1.0);
            let psi = OrliczFn::custom(
                format!("conj(t^{r})"),
                move |v| (r - 1.0) * (v / r).powf(e),
                Some(Arc::new(move |s: f64| (s / r).powf(1.0 / (r - 1.0)))),
            );
            Ok(ComplementaryPair {
                phi: phi.clone(),
                psi,
                construction: Construction::ClosedForm,
            })
        }
        OrliczForm::TableDensity(table) => {
            if !(v_max > 0.0) || !(integration_tol > 0.0) {
                return Err(Error::InvalidParameter(
                    "complementary construction needs v_max > 0 and integration_tol > 0".into(),
                ));
            }
            let numeric = Arc::new(NumericComplement::build(
                Arc::clone(table),
                v_max,
                integration_tol,
            ));
            let density_src = Arc::clone(&numeric);
            let eval_src = Arc::clone(&numeric);
            let psi = OrliczFn::custom(
                format!("conj({})", phi.name()),
                move |v| eval_src.eval(v),
                Some(Arc::new(move |s: f64| density_src.table.right_inverse(s))),
            );
            Ok(ComplementaryPair {
                phi: phi.clone(),
                psi,
                construction: Construction::Numeric,
            })
        }
        OrliczForm::Custom { .. } => Err(Error::NoDensity(phi.name().to_string())),
    }
}

const COMPLEMENT_NODES: usize = 512;

struct NumericComplement {
    table: Arc<DensityTable>,
    step: f64,
    values: Vec<f64>,
    tol: f64,
}

impl NumericComplement {
    fn build(table: Arc<DensityTable>, v_max: f64, tol: f64) -> Self {
        let step = v_max / COMPLEMENT_NODES as f64;
        let mut values = Vec::with_capacity(COMPLEMENT_NODES + 1);
        values.push(0.0);
        for k in 1..=COMPLEMENT_NODES {
            let a = (k - 1) as f64 * step;
            let b = k as f64 * step;
            let piece = adaptive_trapezoid(|s| table.right_inverse(s), a, b, tol);
            values.push(values[k - 1] + piece);
        }
        Self {
            table,
            step,
            values,
            tol,
        }
    }

    fn eval(&self, v: f64) -> f64 {
        let v = v.max(0.0);
        let k = ((v / self.step).floor() as usize).min(COMPLEMENT_NODES);
        let start = k as f64 * self.step;
        if v <= start {
            return self.values[k];
        }
        self.values[k] + adaptive_trapezoid(|s| self.table.right_inverse(s), start, v, self.tol)
    }
}

/// Trapezoid rule with repeated halving until successive estimates differ
/// by at most `tol`.
pub fn adaptive_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut n = 1usize;
    let mut h = b - a;
    let mut estimate = 0.5 * h * (f(a) + f(b));
    for _ in 0..24 {
        // add the midpoints of the current panels
        let mid_sum: f64 = (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum();
        let refined = 0.5 * estimate + 0.5 * h * mid_sum;
        n *= 2;
        h *= 0.5;
        let converged = (refined - estimate).abs() <= tol;
        estimate = refined;
        if converged {
            break;
        }
    }
    estimate
}

/// `xy ≤ φ(x) + ψ(y)` within `1e-8·(1+xy)`.
pub fn young_check(pair: &ComplementaryPair, x: f64, y: f64) -> Result<bool> {
    if x < 0.0 {
        return Err(Error::NegativeInput(x));
    }
    if y < 0.0 {
        return Err(Error::NegativeInput(y));
    }
    let xy = x * y;
    Ok(xy <= pair.phi.eval(x) + pair.psi.eval(y) + 1e-8 * (1.0 + xy))
}

/// Young's inequality on a `grid_n × grid_n` grid over `[0, grid_max]²`;
/// returns the first violating `(x, y)`.
pub fn young_grid_check(pair: &ComplementaryPair, grid_max: f64, grid_n: usize) -> Option<(f64, f64)> {
    let grid = uniform_grid(grid_max, grid_n);
    for &x in &grid {
        for &y in &grid {
            if !young_check(pair, x, y).unwrap_or(false) {
                return Some((x, y));
            }
        }
    }
    None
}

fn uniform_grid(max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrliczCheck {
    ZeroAtOrigin,
    NonDegenerate,
    Monotone,
    MidpointConvex,
    Finite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: OrliczCheck,
    pub u: f64,
    pub v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violation: Option<Violation>,
}

/// Grid validation of the Orlicz axioms on `[0, grid_max]`.
pub fn validate_orlicz(phi: &OrliczFn, grid_max: f64, grid_n: usize) -> ValidationReport {
    let fail = |check, u, v| ValidationReport {
        passed: false,
        violation: Some(Violation { check, u, v }),
    };
    let grid = uniform_grid(grid_max, grid_n.max(16));
    let values: Vec<f64> = grid.iter().map(|&t| phi.eval(t)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return fail(OrliczCheck::Finite, grid[i], grid[i]);
    }
    if values[0].abs() > 1e-12 {
        return fail(OrliczCheck::ZeroAtOrigin, 0.0, 0.0);
    }
    if !(values[1] > 0.0) {
        return fail(OrliczCheck::NonDegenerate, grid[1], grid[1]);
    }
    for i in 1..grid.len() {
        if values[i] < values[i - 1] - 1e-12 * (1.0 + values[i - 1].abs()) {
            return fail(OrliczCheck::Monotone, grid[i - 1], grid[i]);
        }
    }
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let mid = phi.eval(0.5 * (grid[i] + grid[j]));
            if mid > 0.5 * (values[i] + values[j]) + 1e-10 * (1.0 + values[j]) {
                return fail(OrliczCheck::MidpointConvex, grid[i], grid[j]);
            }
        }
    }
    ValidationReport {
        passed: true,
        violation: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativityCheck {
    pub verdict: TriState,
    pub witness: Option<(f64, f64)>,
}

/// Grid check of `φ(uv) ≤ φ(u)φ(v)`; `t^r` short-circuits to yes.
pub fn is_submultiplicative(phi: &OrliczFn, grid_max: f64, grid_n: usize) -> MultiplicativityCheck {
    if phi.power_exponent().is_some() {
        return MultiplicativityCheck {
            verdict: TriState::Yes,
            witness: None,
        };
    }
    grid_product_check(phi, grid_max, grid_n, |lhs, rhs| {
        lhs <= rhs + 1e-10 * (1.0 + rhs)
    })
}

/// Grid check of `φ(uv) = φ(u)φ(v)`; `t^r` short-circuits to yes.
pub fn is_multiplicative(phi: &OrliczFn, grid_max: f64, grid_n: usize) -> MultiplicativityCheck {
    if phi.power_exponent().is_some() {
        return MultiplicativityCheck {
            verdict: TriState::Yes,
            witness: None,
        };
    }
    grid_product_check(phi, grid_max, grid_n, |lhs, rhs| {
        (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs())
    })
}

fn grid_product_check(
    phi: &OrliczFn,
    grid_max: f64,
    grid_n: usize,
    ok: impl Fn(f64, f64) -> bool,
) -> MultiplicativityCheck {
    let grid = uniform_grid(grid_max, grid_n.max(16));
    for &u in &grid {
        for &v in &grid {
            if !ok(phi.eval(u * v), phi.eval(u) * phi.eval(v)) {
                return MultiplicativityCheck {
                    verdict: TriState::No,
                    witness: Some((u, v)),
                };
            }
        }
    }
    MultiplicativityCheck {
        verdict: TriState::Yes,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(validate_orlicz(&OrliczFn::power(2.0), 10.0, 256).passed);
        let hinge = OrliczFn::custom("hinge", |t| (t - 1.0).max(0.0), None);
        let report = validate_orlicz(&hinge, 10.0, 256);
        assert!(!report.passed);
        assert_eq!(report.violation.unwrap().check, OrliczCheck::NonDegenerate);
        let sqrt = OrliczFn::custom("sqrt", f64::sqrt, None);
        let report = validate_orlicz(&sqrt, 10.0, 256);
        assert_eq!(report.violation.unwrap().check, OrliczCheck::MidpointConvex);
    }

    #[test]
    fn named_functions_parse() {
        for name in ["t", "t^2", "t^3/3", "t^1.5", "t^2+t", "exp-1", "pow:3", "powscaled:4"] {
            let phi = OrliczFn::from_name(name).unwrap();
            assert!(validate_orlicz(&phi, 10.0, 64).passed, "{name}");
        }
        assert_eq!(OrliczFn::from_name("t^3/3").unwrap().eval(3.0), 9.0);
        assert_eq!(OrliczFn::from_name("t^2").unwrap().eval(3.0), 9.0);
        assert!(OrliczFn::from_name("t^0.5").is_err());
        assert!(OrliczFn::from_name("t^3/2").is_err());
        assert!(OrliczFn::from_name("sin").is_err());
    }

    #[test]
    fn self_dual_square() {
        let pair = complementary(&OrliczFn::power_scaled(2.0), 10.0, 1e-10).unwrap();
        assert_eq!(pair.construction, Construction::ClosedForm);
        for t in [0.0, 0.5, 1.0, 3.0, 10.0] {
            assert!((pair.psi.eval(t) - t * t / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cube_complement_closed_and_numeric_agree() {
        let pair = complementary(&OrliczFn::power_scaled(3.0), 10.0, 1e-10).unwrap();
        // density p(t) = t², tabulated finely enough to cover q(10) = √10
        let grid: Vec<f64> = (0..=8000).map(|i| 4.0 * i as f64 / 8000.0).collect();
        let table = DensityTable::from_fn(grid, |t| t * t).unwrap();
        let numeric = complementary(&OrliczFn::table(table), 10.0, 1e-11).unwrap();
        assert_eq!(numeric.construction, Construction::Numeric);
        for i in 0..=100 {
            let v = i as f64 / 10.0;
            let closed = pair.psi.eval(v);
            assert!((closed - v.powf(1.5) / 1.5).abs() < 1e-12);
            assert!((numeric.psi.eval(v) - closed).abs() < 1e-6, "v={v}");
        }
    }

    #[test]
    fn linear_and_custom_have_no_complement() {
        assert!(matches!(
            complementary(&OrliczFn::power(1.0), 10.0, 1e-8),
            Err(Error::NoDensity(_))
        ));
        let custom = OrliczFn::custom("c", |t| t * t, None);
        assert!(matches!(complementary(&custom, 10.0, 1e-8), Err(Error::NoDensity(_))));
    }

    #[test]
    fn power_complement_is_legendre_transform() {
        let pair = complementary(&OrliczFn::power(3.0), 10.0, 1e-10).unwrap();
        // brute-force sup_t (vt − t³)
        for v in [0.5, 1.0, 4.0, 9.0] {
            let brute = (0..=200_000)
                .map(|i| {
                    let t = 4.0 * i as f64 / 200_000.0;
                    v * t - t * t * t
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((pair.psi.eval(v) - brute).abs() < 1e-8, "v={v}");
        }
        assert!(young_grid_check(&pair, 10.0, 50).is_none());
    }

    #[test]
    fn young_examples() {
        let square = complementary(&OrliczFn::power_scaled(2.0), 10.0, 1e-10).unwrap();
        assert!(young_check(&square, 1.0, 1.0).unwrap());
        assert_eq!(square.phi.eval(1.0) + square.psi.eval(1.0), 1.0);

        let cube = complementary(&OrliczFn::power_scaled(3.0), 10.0, 1e-10).unwrap();
        assert!(young_check(&cube, 2.0, 4.0).unwrap());
        let sum = cube.phi.eval(2.0) + cube.psi.eval(4.0);
        assert!((sum - 8.0).abs() < 1e-12, "equality at y = p(x): {sum}");

        assert!(young_check(&cube, 0.0, 7.0).unwrap());
        assert!(matches!(young_check(&cube, -1.0, 1.0), Err(Error::NegativeInput(_))));
    }

    #[test]
    fn submultiplicativity_examples() {
        assert_eq!(is_submultiplicative(&OrliczFn::power(2.0), 10.0, 64).verdict, TriState::Yes);
        let quad = OrliczFn::from_name("t^2+t").unwrap();
        assert_eq!(is_submultiplicative(&quad, 10.0, 64).verdict, TriState::Yes);
        assert_eq!(is_submultiplicative(&quad, 3.0, 200).verdict, TriState::Yes);

        let exp = OrliczFn::from_name("exp-1").unwrap();
        let check = is_submultiplicative(&exp, 4.0, 17);
        assert_eq!(check.verdict, TriState::No);
        let (u, v) = check.witness.unwrap();
        assert!(exp.eval(u * v) > exp.eval(u) * exp.eval(v));
        // the documented witness u = v = 2
        assert!(exp.eval(4.0) > exp.eval(2.0).powi(2));

        assert_eq!(is_multiplicative(&OrliczFn::power(2.5), 10.0, 32).verdict, TriState::Yes);
        assert_eq!(is_multiplicative(&quad, 10.0, 32).verdict, TriState::No);
    }

    #[test]
    fn table_round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(&path, "0,0\n1,1\n2,2\n3,3\n").unwrap();
        let phi = OrliczFn::from_csv(&path).unwrap();
        // p(t) = t exactly, so φ(t) = t²/2 everywhere including past the table
        for t in [0.0, 0.5, 2.5, 5.0] {
            assert!((phi.eval(t) - t * t / 2.0).abs() < 1e-14);
        }
        std::fs::write(&path, "0,0\n1,2\n2,1\n").unwrap();
        assert!(OrliczFn::from_csv(&path).is_err());
        std::fs::write(&path, "t,p\n0,0\n").unwrap();
        assert!(OrliczFn::from_csv(&path).is_err());
    }

    #[test]
    fn right_inverse_handles_flat_segments() {
        let table = DensityTable::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(table.right_inverse(0.5), 0.5);
        // sup over the flat piece
        assert_eq!(table.right_inverse(1.0), 2.0);
        assert_eq!(table.right_inverse(1.5), 2.5);
        assert_eq!(table.right_inverse(3.0), 4.0);
    }
}
