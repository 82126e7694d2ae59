//! Registry of numerical-radius bounds and state-level lemma checks.
//!
//! Every evaluation returns a [`BoundReport`]: both sides of the inequality,
//! the slack `rhs − lhs`, and the status of each hypothesis. Evaluation
//! proceeds when hypotheses fail; they are only flagged.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{matrix_func, max_eigenvalue, min_eigenvalue, operator_norm, psd_power};
use crate::matrix::{ComplexMatrix, C64};
use crate::orlicz::{is_multiplicative, is_submultiplicative, validate_orlicz, ComplementaryPair, OrliczFn, TriState};
use crate::state::{
    a_adjoint, a_numerical_radius, a_seminorm, is_a_positive, is_a_selfadjoint, numerical_radius, AState,
    Weight, DEFAULT_RADIUS_TOL,
};

pub const DEFAULT_TOL: f64 = 1e-8;

macro_rules! string_ids {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::UnknownId(other.to_string())),
                }
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_ids!(
    /// Stable public identifiers of the bound registry.
    BoundId {
        NormLower => "norm_lower",
        NormUpper => "norm_upper",
        ANormBounds => "a_norm_bounds",
        Mz3 => "mz3",
        Mz4 => "mz4",
        Th1a => "th1a",
        Th1b => "th1b",
        Re01 => "re01",
        Ramm => "ramm",
        Re02 => "re02",
        Th2aI => "th2a_i",
        Th2aII => "th2a_ii",
        Th2bI => "th2b_i",
        Th2bII => "th2b_ii",
        CccI => "ccc_i",
        CccII => "ccc_ii",
        Hhnn => "hhnn",
        Sum2 => "sum2",
        Sumpi => "sumpi",
        PietA => "piet_a",
        PietB => "piet_b",
        Ram => "ram",
        Ra => "ra",
        Dra => "dra",
        DraComm => "dra_comm",
        Kit28 => "kit28",
    }
);

string_ids!(
    /// State-level lemmas checked at a given weighted state.
    LemmaId {
        Cauchy => "cauchy",
        Lsplemma02 => "lsplemma02",
        Cbuzano => "cbuzano",
        Lal => "lal",
        Lemma1 => "lemma1",
        Lemma2a => "lemma2a",
        Lemma2b => "lemma2b",
        L01 => "L01",
        Pie => "pie",
        L426 => "l426",
        Tla => "tla",
        Lj => "lj",
        M02 => "m02",
        Pje => "pje",
    }
);

impl BoundId {
    /// Matrix roles the bound reads. `sumpi` additionally reads `x1..xk`.
    pub fn roles(self) -> &'static [&'static str] {
        use BoundId::*;
        match self {
            NormLower | NormUpper | ANormBounds | Mz3 | Mz4 | Th1a | Th1b | Re01 | Ramm | Re02 | Th2aI
            | Th2aII | Th2bI | Th2bII | CccI | CccII => &["x"],
            Hhnn | Sum2 => &["x", "y"],
            Sumpi => &[],
            PietA | PietB | Ram | Ra => &["x", "y", "z"],
            Dra => &["w", "x", "y", "z"],
            DraComm => &["p", "q"],
            Kit28 => &["p", "x", "q", "r", "y", "s"],
        }
    }

    /// Whether the statement involves the weight `a` (otherwise it is stated at `a = 1`).
    pub fn uses_weight(self) -> bool {
        use BoundId::*;
        matches!(
            self,
            ANormBounds | Mz3 | Mz4 | Th1a | Ramm | Re02 | Th2aI | Th2aII | Hhnn | Sum2 | Sumpi | PietA
        )
    }

    /// Whether the statement involves the Orlicz function `φ`.
    pub fn uses_phi(self) -> bool {
        use BoundId::*;
        matches!(self, Th1b | Ramm | Th2bI | Th2bII | Sumpi | PietB | Ra | Dra | DraComm)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Left side `φ(v²((x*w+z*y)/2))`, the quantity the proof bounds.
    #[default]
    Proof,
    /// Left side `φ(v²(x*w+z*y)/2)` as printed in the statement.
    Literal,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proof" => Ok(Variant::Proof),
            "literal" => Ok(Variant::Literal),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Proof => "proof",
            Variant::Literal => "literal",
        }
    }
}

/// One inequality instance: named matrices plus scalar parameters.
#[derive(Clone, Debug)]
pub struct Instance {
    pub matrices: BTreeMap<String, ComplexMatrix>,
    pub weight: Weight,
    pub alpha: f64,
    pub r: f64,
    pub s: f64,
    pub n: u32,
    pub probs: Vec<f64>,
    pub phi: OrliczFn,
    pub pair: Option<ComplementaryPair>,
    pub variant: Variant,
    /// Accuracy passed to the numerical-radius sweep.
    pub radius_tol: f64,
}

impl Instance {
    pub fn new(weight: Weight) -> Self {
        Self {
            matrices: BTreeMap::new(),
            weight,
            alpha: 0.5,
            r: 1.0,
            s: 1.0,
            n: 2,
            probs: Vec::new(),
            phi: OrliczFn::power(1.0),
            pair: None,
            variant: Variant::Proof,
            radius_tol: DEFAULT_RADIUS_TOL,
        }
    }

    pub fn with_identity(dim: usize) -> Self {
        Self::new(Weight::identity(dim))
    }

    pub fn with(mut self, role: &str, m: ComplexMatrix) -> Self {
        self.matrices.insert(role.to_string(), m);
        self
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    pub fn matrix(&self, role: &str) -> Result<&ComplexMatrix> {
        let m = self
            .matrices
            .get(role)
            .ok_or_else(|| Error::MissingRole(role.to_string()))?;
        self.weight.a().ensure_same_dim(m)?;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub preconditions: Vec<Precondition>,
    pub params: BTreeMap<String, Value>,
    pub variant: Option<Variant>,
}

impl BoundReport {
    fn new(id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            bound_id: id.to_string(),
            lhs,
            rhs,
            slack,
            holds: holds(slack, lhs, rhs, tol),
            preconditions: Vec::new(),
            params: BTreeMap::new(),
            variant: None,
        }
    }

    pub fn scale(&self) -> f64 {
        1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }

    pub fn preconditions_met(&self) -> bool {
        self.preconditions.iter().all(|p| p.satisfied)
    }

    /// Re-derives `holds` at another tolerance.
    pub fn holds_at(&self, tol: f64) -> bool {
        holds(self.slack, self.lhs, self.rhs, tol)
    }

    fn require(&mut self, name: &str, satisfied: bool) {
        self.preconditions.push(Precondition {
            name: name.to_string(),
            satisfied,
        });
    }

    fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }
}

fn holds(slack: f64, lhs: f64, rhs: f64, tol: f64) -> bool {
    slack >= -tol * 1f64.max(lhs.abs()).max(rhs.abs())
}

/// Evaluation context: role lookup, cached weighted quantities and
/// bookkeeping of every argument handed to `φ`.
struct Ctx<'a> {
    inst: &'a Instance,
    phi_ceiling: Cell<f64>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            phi_ceiling: Cell::new(0.0),
        }
    }

    fn m(&self, role: &str) -> Result<&'a ComplexMatrix> {
        self.inst.matrix(role)
    }

    fn w(&self) -> &'a Weight {
        &self.inst.weight
    }

    fn v(&self, x: &ComplexMatrix) -> Result<f64> {
        numerical_radius(x, self.inst.radius_tol)
    }

    fn va(&self, x: &ComplexMatrix) -> Result<f64> {
        a_numerical_radius(x, self.w(), self.inst.radius_tol)
    }

    fn na(&self, x: &ComplexMatrix) -> Result<f64> {
        a_seminorm(x, self.w())
    }

    fn adj(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        a_adjoint(x, self.w())
    }

    fn track(&self, t: f64) {
        if t > self.phi_ceiling.get() {
            self.phi_ceiling.set(t);
        }
    }

    fn phi(&self, t: f64) -> f64 {
        self.track(t);
        self.inst.phi.eval(t)
    }

    /// `φ(H)` for PSD `H`.
    fn phi_mat(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut h = h.clone();
        h.symmetrize();
        self.track(max_eigenvalue(&h));
        matrix_func(&h, &self.inst.phi)
    }

    /// Whether `φ` passes the Orlicz checks on the range of arguments seen.
    fn phi_is_orlicz(&self) -> bool {
        match self.inst.phi.form() {
            crate::orlicz::OrliczForm::Power(_) | crate::orlicz::OrliczForm::PowerScaled(_) => true,
            _ => {
                let ceiling = self.phi_ceiling.get().max(10.0) * 1.01;
                validate_orlicz(&self.inst.phi, ceiling, 32).passed
            }
        }
    }
}

/// Operator norm of a (numerically) Hermitian PSD matrix.
fn psd_norm(h: &ComplexMatrix) -> f64 {
    let mut h = h.clone();
    h.symmetrize();
    max_eigenvalue(&h).max(0.0)
}

fn sym(h: ComplexMatrix) -> ComplexMatrix {
    let mut h = h;
    h.symmetrize();
    h
}

fn is_psd(h: &ComplexMatrix) -> bool {
    let scale = h.frobenius_norm();
    h.hermitian_defect() <= 1e-10 * (1.0 + scale) && min_eigenvalue(&sym(h.clone())) >= -1e-12 * scale.max(1.0)
}

fn is_invertible(x: &ComplexMatrix) -> bool {
    let g = x.gram();
    let hi = max_eigenvalue(&g);
    let lo = min_eigenvalue(&g);
    hi > 0.0 && lo.max(0.0).sqrt() > 1e-12 * hi.sqrt()
}

fn check_alpha(report: &mut BoundReport, alpha: f64) {
    report.require("alpha_in_unit_interval", (0.0..=1.0).contains(&alpha));
}

/// `x^{#a}x + xx^{#a}` (a-self-adjoint).
fn a_symmetric_square(ctx: &Ctx<'_>, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let xa = ctx.adj(x)?;
    Ok(&xa.matmul(x) + &x.matmul(&xa))
}

/// Evaluates the registry bound `id` on `inst`.
pub fn evaluate_bound(id: BoundId, inst: &Instance, tol: f64) -> Result<BoundReport> {
    use BoundId::*;
    let ctx = Ctx::new(inst);
    let alpha = inst.alpha;
    let mut report = match id {
        NormLower | NormUpper => {
            let x = ctx.m("x")?;
            let v = ctx.v(x)?;
            let norm = operator_norm(x)?;
            if id == NormLower {
                BoundReport::new(id.as_str(), 0.5 * norm, v, tol)
            } else {
                BoundReport::new(id.as_str(), v, norm, tol)
            }
        }
        ANormBounds => {
            let x = ctx.m("x")?;
            let v = ctx.va(x)?;
            let norm = ctx.na(x)?;
            let lower_slack = v - 0.5 * norm;
            let upper_slack = norm - v;
            let mut report = if lower_slack <= upper_slack {
                BoundReport::new(id.as_str(), 0.5 * norm, v, tol)
            } else {
                BoundReport::new(id.as_str(), v, norm, tol)
            };
            report.holds = holds(lower_slack, 0.5 * norm, v, tol) && holds(upper_slack, v, norm, tol);
            report.param("side", json!(if lower_slack <= upper_slack { "lower" } else { "upper" }));
            report.param("lower_slack", json!(lower_slack));
            report.param("upper_slack", json!(upper_slack));
            report.require("weight_invertible", true);
            report
        }
        Mz3 => {
            let x = ctx.m("x")?;
            let lhs = ctx.va(x)?.powi(2);
            let rhs = 0.5 * ctx.na(&a_symmetric_square(&ctx, x)?)?;
            BoundReport::new(id.as_str(), lhs, rhs, tol)
        }
        Mz4 => {
            let x = ctx.m("x")?;
            let lhs = ctx.va(x)?.powi(2);
            let rhs = 0.5 * ctx.va(&x.matmul(x))? + 0.25 * ctx.na(&a_symmetric_square(&ctx, x)?)?;
            BoundReport::new(id.as_str(), lhs, rhs, tol)
        }
        Th1a => {
            let x = ctx.m("x")?;
            let xa = ctx.adj(x)?;
            let lhs = ctx.va(x)?.powi(2);
            let mix = xa.matmul(x).lin_comb(alpha, &x.matmul(&xa), 1.0 - alpha);
            let mut report = BoundReport::new(id.as_str(), lhs, ctx.na(&mix)?, tol);
            check_alpha(&mut report, alpha);
            report
        }
        Th1b | Re01 => {
            let x = ctx.m("x")?;
            let v2 = ctx.v(x)?.powi(2);
            let (gram, cogram) = (x.gram(), x.cogram());
            let (lhs, rhs) = if id == Th1b {
                let mix = ctx.phi_mat(&gram)?.lin_comb(alpha, &ctx.phi_mat(&cogram)?, 1.0 - alpha);
                (ctx.phi(v2), psd_norm(&mix))
            } else {
                let r = inst.r;
                let mix = psd_power(&gram, r)?.lin_comb(alpha, &psd_power(&cogram, r)?, 1.0 - alpha);
                (v2.powf(r), psd_norm(&mix))
            };
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            check_alpha(&mut report, alpha);
            if id == Th1b {
                report.require("phi_orlicz", ctx.phi_is_orlicz());
            } else {
                report.require("r_geq_one", inst.r >= 1.0);
            }
            report
        }
        Ramm | Re02 => {
            let x = ctx.m("x")?;
            let va2 = ctx.va(x)?.powi(2);
            let vx2 = ctx.va(&x.matmul(x))?;
            let norm = ctx.na(&a_symmetric_square(&ctx, x)?)?;
            let mut report = if id == Ramm {
                let rhs = 0.5 * ctx.phi(vx2) + 0.5 * ctx.phi(0.5 * norm);
                let mut report = BoundReport::new(id.as_str(), ctx.phi(va2), rhs, tol);
                report.require("phi_orlicz", ctx.phi_is_orlicz());
                report
            } else {
                let r = inst.r;
                let rhs = 0.5 * vx2.powf(r) + 2f64.powf(-(r + 1.0)) * norm.powf(r);
                let mut report = BoundReport::new(id.as_str(), va2.powf(r), rhs, tol);
                report.require("r_geq_one", r >= 1.0);
                report
            };
            report.param("weight_geq_one", json!(inst.weight.geq_one()));
            report
        }
        Th2aI | Th2aII => {
            let x = ctx.m("x")?;
            let xa = ctx.adj(x)?;
            let (first, second) = (x.matmul(&xa), xa.matmul(x));
            let (quarter, rest) = if id == Th2aI { (first, second) } else { (second, first) };
            let mix = quarter.lin_comb(alpha / 4.0, &rest, 1.0 - 0.75 * alpha);
            let lhs = ctx.va(x)?.powi(2);
            let rhs = 0.5 * alpha * ctx.va(&x.matmul(x))? + ctx.na(&mix)?;
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            check_alpha(&mut report, alpha);
            report
        }
        Th2bI | Th2bII | CccI | CccII => {
            let x = ctx.m("x")?;
            let v2 = ctx.v(x)?.powi(2);
            let vx2 = ctx.v(&x.matmul(x))?;
            let (cogram, gram) = (x.cogram(), x.gram());
            let (quarter, rest) = if matches!(id, Th2bI | CccI) {
                (cogram, gram)
            } else {
                (gram, cogram)
            };
            let mut report = if matches!(id, Th2bI | Th2bII) {
                let mix = ctx.phi_mat(&quarter)?.lin_comb(alpha / 4.0, &ctx.phi_mat(&rest)?, 1.0 - 0.75 * alpha);
                let rhs = 0.5 * alpha * ctx.phi(vx2) + psd_norm(&mix);
                let mut report = BoundReport::new(id.as_str(), ctx.phi(v2), rhs, tol);
                report.require("phi_orlicz", ctx.phi_is_orlicz());
                report
            } else {
                let r = inst.r;
                let mix = psd_power(&quarter, r)?.lin_comb(alpha / 4.0, &psd_power(&rest, r)?, 1.0 - 0.75 * alpha);
                let rhs = 0.5 * alpha * vx2.powf(r) + psd_norm(&mix);
                let mut report = BoundReport::new(id.as_str(), v2.powf(r), rhs, tol);
                report.require("r_geq_one", r >= 1.0);
                report
            };
            check_alpha(&mut report, alpha);
            report
        }
        Hhnn | Sum2 => {
            let x = ctx.m("x")?;
            let y = ctx.m("y")?;
            let lhs = ctx.va(&(x + y))?.powi(2);
            let common = ctx.va(x)?.powi(2) + ctx.va(y)?.powi(2) + ctx.va(&y.matmul(x))?;
            if id == Hhnn {
                let xa = ctx.adj(x)?;
                let ya = ctx.adj(y)?;
                let tail = 0.5 * ctx.na(&(&xa.matmul(x) + &y.matmul(&ya)))?;
                BoundReport::new(id.as_str(), lhs, common + tail, tol)
            } else {
                let nx = ctx.na(x)?;
                let ny = ctx.na(y)?;
                let n = inst.n;
                if n == 0 {
                    return Err(Error::InvalidParameter("sum2 needs n >= 1".into()));
                }
                let rhs = common + sum2_tail(nx, ny, n as f64)?;
                let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
                report.require("n_geq_one", n >= 1);
                let mut by_n = serde_json::Map::new();
                let mut best = (f64::INFINITY, 0u32);
                for m in [2u32, 3, 4, 8] {
                    let value = common + sum2_tail(nx, ny, m as f64)?;
                    by_n.insert(m.to_string(), json!(value));
                    if value < best.0 {
                        best = (value, m);
                    }
                }
                report.param("rhs_by_n", Value::Object(by_n));
                report.param("argmin_n", json!(best.1));
                report
            }
        }
        Sumpi => {
            let k = inst.probs.len();
            if k == 0 {
                return Err(Error::InvalidParameter("sumpi needs a probability vector".into()));
            }
            let xs: Vec<&ComplexMatrix> = (1..=k).map(|i| ctx.m(&format!("x{i}"))).collect::<Result<_>>()?;
            let dim = inst.dim();
            let mut mean = ComplexMatrix::zeros(dim);
            let mut squares = ComplexMatrix::zeros(dim);
            let mut left = ComplexMatrix::zeros(dim);
            let mut right = ComplexMatrix::zeros(dim);
            for (&p, x) in inst.probs.iter().zip(&xs) {
                let xa = ctx.adj(x)?;
                mean = mean.lin_comb(1.0, x, p);
                squares = squares.lin_comb(1.0, &x.matmul(x), p);
                left = left.lin_comb(1.0, &xa.matmul(x), p);
                right = right.lin_comb(1.0, &x.matmul(&xa), p);
            }
            let lhs = ctx.phi(ctx.va(&mean)?.powi(2));
            let geo = (ctx.na(&left)? * ctx.na(&right)?).sqrt();
            let rhs = 0.5 * ctx.phi(ctx.va(&squares)?) + 0.5 * ctx.phi(geo);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("probs_valid", probs_valid(&inst.probs));
            report.require("phi_orlicz", ctx.phi_is_orlicz());
            report.param("weight_geq_one", json!(inst.weight.geq_one()));
            report
        }
        PietA => {
            let (x, y, z) = (ctx.m("x")?, ctx.m("y")?, ctx.m("z")?);
            let ny = ctx.na(y)?;
            let za = ctx.adj(z)?;
            let lhs = ctx.va(&x.matmul(y).matmul(&za))?;
            let sum = &x.matmul(&ctx.adj(x)?) + &z.matmul(&za);
            let mut report = BoundReport::new(id.as_str(), lhs, 0.5 * ny * ctx.na(&sum)?, tol);
            report.require("y_a_norm_leq_one", ny <= 1.0 + 1e-12);
            report
        }
        PietB | Ram => {
            let (x, y, z) = (ctx.m("x")?, ctx.m("y")?, ctx.m("z")?);
            let ny = operator_norm(y)?;
            let v = ctx.v(&x.matmul(y).matmul(&z.adjoint()))?;
            let (xx, zz) = (x.cogram(), z.cogram());
            let mut report = if id == PietB {
                let sum = &ctx.phi_mat(&xx)? + &ctx.phi_mat(&zz)?;
                let mut report = BoundReport::new(id.as_str(), ctx.phi(v), 0.5 * ny * psd_norm(&sum), tol);
                report.require("phi_orlicz", ctx.phi_is_orlicz());
                report
            } else {
                let r = inst.r;
                let sum = &psd_power(&xx, r)? + &psd_power(&zz, r)?;
                let mut report = BoundReport::new(id.as_str(), v.powf(r), 0.5 * ny * psd_norm(&sum), tol);
                report.require("r_geq_one", r >= 1.0);
                report
            };
            report.require("y_norm_leq_one", ny <= 1.0 + 1e-12);
            report
        }
        Ra => {
            let (x, y, z) = (ctx.m("x")?, ctx.m("y")?, ctx.m("z")?);
            let r = inst.r;
            let x_psd = is_psd(x);
            let z_psd = is_psd(z);
            let (xs, zs) = (sym(x.clone()), sym(z.clone()));
            let inner = psd_power(&xs, alpha)?.matmul(y).matmul(&psd_power(&zs, 1.0 - alpha)?);
            let lhs = ctx.phi(ctx.v(&inner)?.powf(r));
            let mix = ctx
                .phi_mat(&psd_power(&xs, r)?)?
                .lin_comb(alpha, &ctx.phi_mat(&psd_power(&zs, r)?)?, 1.0 - alpha);
            let rhs = ctx.phi(operator_norm(y)?.powf(r)) * psd_norm(&mix);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("x_psd", x_psd);
            report.require("z_psd", z_psd);
            report.require("r_geq_two", r >= 2.0);
            check_alpha(&mut report, alpha);
            let ceiling = ctx.phi_ceiling.get().max(10.0);
            let sub = match inst.phi.submultiplicative {
                TriState::Yes => true,
                TriState::No => false,
                TriState::Unknown => is_submultiplicative(&inst.phi, ceiling.sqrt(), 64).verdict == TriState::Yes,
            };
            report.require("phi_submultiplicative", sub);
            report.require("phi_orlicz", ctx.phi_is_orlicz());
            report
        }
        Dra | DraComm => {
            let (x, w, z, y) = if id == Dra {
                (
                    ctx.m("x")?.clone(),
                    ctx.m("w")?.clone(),
                    ctx.m("z")?.clone(),
                    ctx.m("y")?.clone(),
                )
            } else {
                let p = ctx.m("p")?;
                let q = ctx.m("q")?;
                (p.adjoint(), q.clone(), q.adjoint(), -p)
            };
            let sum = &x.adjoint().matmul(&w) + &z.adjoint().matmul(&y);
            let lhs = match inst.variant {
                Variant::Proof => ctx.phi(ctx.v(&sum.scale(0.5))?.powi(2)),
                Variant::Literal => ctx.phi(0.5 * ctx.v(&sum)?.powi(2)),
            };
            let (r, s) = (inst.r, inst.s);
            let power_mean = |a: &ComplexMatrix, b: &ComplexMatrix, e: f64| -> Result<f64> {
                let mix = psd_power(&ctx.phi_mat(&a.gram())?, e)?.lin_comb(0.5, &psd_power(&ctx.phi_mat(&b.gram())?, e)?, 0.5);
                Ok(psd_norm(&mix).powf(1.0 / e))
            };
            let rhs = power_mean(&w, &y, r)? * power_mean(&x, &z, s)?;
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            let multiplicative = inst.phi.power_exponent().is_some()
                || is_multiplicative(&inst.phi, 10.0, 32).verdict == TriState::Yes;
            report.require("phi_multiplicative", multiplicative);
            report.require("r_geq_one", r >= 1.0);
            report.require("s_geq_one", s >= 1.0);
            report.variant = Some(inst.variant);
            report
        }
        Kit28 => {
            let (p, x, q) = (ctx.m("p")?, ctx.m("x")?, ctx.m("q")?);
            let (r, y, s) = (ctx.m("r")?, ctx.m("y")?, ctx.m("s")?);
            let n = inst.n as f64;
            let lhs = ctx.v(&(&p.matmul(x).matmul(q) + &r.matmul(y).matmul(s)))?;
            let outer = |c: &ComplexMatrix, t: &ComplexMatrix| -> Result<ComplexMatrix> {
                // c |t*|^{2(1−α)} c*, then the n/2 power
                let core = psd_power(&t.cogram(), 1.0 - alpha)?;
                psd_power(&sym(core.conjugate_by(c)), n / 2.0)
            };
            let inner = |c: &ComplexMatrix, t: &ComplexMatrix| -> Result<f64> {
                // ‖c* |t|^{2α} c‖^{n/(2(n−1))}
                let core = psd_power(&t.gram(), alpha)?;
                Ok(psd_norm(&core.conjugate_by(&c.adjoint())).powf(n / (2.0 * (n - 1.0))))
            };
            let first = psd_norm(&(&outer(p, x)? + &outer(r, y)?)) / n;
            let second = (n - 1.0) / n * (inner(q, x)? + inner(s, y)?);
            let mut report = BoundReport::new(id.as_str(), lhs, first + second, tol);
            report.require("x_invertible", is_invertible(x));
            report.require("y_invertible", is_invertible(y));
            check_alpha(&mut report, alpha);
            report.require("n_geq_two", inst.n >= 2);
            report
        }
    };
    echo_params(&mut report, id, inst);
    Ok(report)
}

/// `(1/n)‖x‖^n + ((n−1)/n)‖y‖^{n/(n−1)}`, with the `n → 1⁺` limit at `n = 1`.
fn sum2_tail(nx: f64, ny: f64, n: f64) -> Result<f64> {
    if n == 1.0 {
        if ny > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "sum2 with n = 1 requires ‖y‖_a <= 1, got {ny}"
            )));
        }
        return Ok(nx);
    }
    Ok(nx.powf(n) / n + (n - 1.0) / n * ny.powf(n / (n - 1.0)))
}

fn probs_valid(probs: &[f64]) -> bool {
    !probs.is_empty()
        && probs.iter().all(|&p| p >= 0.0 && p.is_finite())
        && (probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12
}

fn echo_params(report: &mut BoundReport, id: BoundId, inst: &Instance) {
    use BoundId::*;
    report.param("dim", json!(inst.dim()));
    if matches!(id, Th1a | Th1b | Re01 | Th2aI | Th2aII | Th2bI | Th2bII | CccI | CccII | Ra | Kit28) {
        report.param("alpha", json!(inst.alpha));
    }
    if matches!(id, Re01 | Re02 | CccI | CccII | Ram | Ra | Dra | DraComm) {
        report.param("r", json!(inst.r));
    }
    if matches!(id, Dra | DraComm) {
        report.param("s", json!(inst.s));
    }
    if matches!(id, Sum2 | Kit28) {
        report.param("n", json!(inst.n));
    }
    if id == Sumpi {
        report.param("probs", json!(inst.probs));
    }
    if id.uses_phi() {
        report.param("phi", json!(inst.phi.name()));
        // p = 1 lies outside the stated range p > 1 of the power pair
        if inst.phi.is_linear() {
            report.param("phi_linear_boundary", json!(true));
        }
    }
    if id.uses_weight() {
        report.param("weight_is_identity", json!(inst.weight.is_identity()));
    }
}

fn re(z: C64) -> f64 {
    z.re
}

/// Evaluates both sides of a state-level lemma at the a-state `f`.
pub fn lemma_check(id: LemmaId, inst: &Instance, f: &AState<'_>, tol: f64) -> Result<BoundReport> {
    use LemmaId::*;
    let ctx = Ctx::new(inst);
    let w = ctx.w();
    w.a().ensure_same_dim(f.rho())?;
    let a = w.a();
    let alpha = inst.alpha;
    let ev = |y: &ComplexMatrix| f.apply(y);
    // a x^{#a} x = x*ax and a x x^{#a}, both PSD
    let a_left = |x: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(sym(a.matmul(&ctx.adj(x)?).matmul(x))) };
    let a_right = |x: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(sym(a.matmul(x).matmul(&ctx.adj(x)?))) };
    let pair = || {
        inst.pair
            .as_ref()
            .ok_or_else(|| Error::NoDensity(format!("{} (no complementary pair supplied)", inst.phi.name())))
    };

    let mut report = match id {
        Cauchy => {
            let (x, y) = (ctx.m("x")?, ctx.m("y")?);
            let lhs = ev(&x.adjoint().matmul(a).matmul(y))?.norm_sqr();
            let rhs = re(ev(&x.adjoint().matmul(a).matmul(x))?) * re(ev(&y.adjoint().matmul(a).matmul(y))?);
            BoundReport::new(id.as_str(), lhs, rhs, tol)
        }
        Lsplemma02 => {
            let (x, y) = (ctx.m("x")?, ctx.m("y")?);
            let lhs = re(ev(&y.adjoint().matmul(&x.adjoint()).matmul(a).matmul(x).matmul(y))?);
            let rhs = ctx.na(x)?.powi(2) * re(ev(&y.adjoint().matmul(a).matmul(y))?);
            BoundReport::new(id.as_str(), lhs, rhs, tol)
        }
        Cbuzano | Lal => {
            let k = inst.probs.len();
            if k == 0 {
                return Err(Error::InvalidParameter(format!("{id} needs a probability vector")));
            }
            let mut sx = C64::new(0.0, 0.0);
            let mut sy = C64::new(0.0, 0.0);
            let mut cross = C64::new(0.0, 0.0);
            let mut gx = 0.0;
            let mut gy = 0.0;
            for (i, &p) in inst.probs.iter().enumerate() {
                let x = ctx.m(&format!("x{}", i + 1))?;
                let y = ctx.m(&format!("y{}", i + 1))?;
                sx += ev(&a.matmul(x))? * p;
                if id == Cbuzano {
                    sy += ev(&y.adjoint().matmul(a))? * p;
                    cross += ev(&y.adjoint().matmul(a).matmul(x))? * p;
                    gx += p * re(ev(&x.adjoint().matmul(a).matmul(x))?);
                    gy += p * re(ev(&y.adjoint().matmul(a).matmul(y))?);
                } else {
                    sy += ev(&a.matmul(y))? * p;
                    cross += ev(&a.matmul(y).matmul(x))? * p;
                    gx += p * re(ev(&a_left(x)?)?);
                    gy += p * re(ev(&a_right(y)?)?);
                }
            }
            let lhs = sx.norm() * sy.norm();
            let rhs = 0.5 * (cross.norm() + gx.max(0.0).sqrt() * gy.max(0.0).sqrt());
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("probs_valid", probs_valid(&inst.probs));
            report
        }
        Lemma1 => {
            let x = ctx.m("x")?;
            let lhs = ctx.phi(ev(&a.matmul(x))?.norm_sqr());
            let rhs = alpha * re(ev(&ctx.phi_mat(&a_left(x)?)?)?) + (1.0 - alpha) * re(ev(&ctx.phi_mat(&a_right(x)?)?)?);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("a_geq_one", w.geq_one());
            check_alpha(&mut report, alpha);
            report.require("phi_orlicz", ctx.phi_is_orlicz());
            report
        }
        Lemma2a | Lemma2b => {
            let x = ctx.m("x")?;
            let lhs = ctx.phi(ev(&a.matmul(x))?.norm_sqr());
            let (right, left) = (ctx.phi_mat(&a_right(x)?)?, ctx.phi_mat(&a_left(x)?)?);
            let (quarter, rest) = if id == Lemma2a { (right, left) } else { (left, right) };
            let rhs = 0.5 * alpha * ctx.phi(ev(&a.matmul(x).matmul(x))?.norm())
                + alpha / 4.0 * re(ev(&quarter)?)
                + (1.0 - 0.75 * alpha) * re(ev(&rest)?);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("a_geq_one", w.geq_one());
            check_alpha(&mut report, alpha);
            report.require("phi_orlicz", ctx.phi_is_orlicz());
            report
        }
        L01 => {
            let (x, y) = (ctx.m("x")?, ctx.m("y")?);
            let pair = pair()?;
            let lhs = ev(&a.matmul(&(x + y)))?.norm_sqr();
            let rhs = ev(&a.matmul(x))?.norm_sqr()
                + ev(&a.matmul(y))?.norm_sqr()
                + ev(&a.matmul(y).matmul(x))?.norm()
                + pair.phi.eval(re(ev(&a_left(x)?)?).max(0.0).sqrt())
                + pair.psi.eval(re(ev(&a_right(y)?)?).max(0.0).sqrt());
            BoundReport::new(id.as_str(), lhs, rhs, tol)
        }
        Pie => {
            let (x, y, z) = (ctx.m("x")?, ctx.m("y")?, ctx.m("z")?);
            let ny = ctx.na(y)?;
            let lhs = ctx.phi(ev(&a.matmul(x).matmul(y).matmul(&ctx.adj(z)?))?.norm());
            let sum = &ctx.phi_mat(&a_right(x)?)? + &ctx.phi_mat(&a_right(z)?)?;
            let mut report = BoundReport::new(id.as_str(), lhs, 0.5 * ny * re(ev(&sum)?), tol);
            report.require("y_a_norm_leq_one", ny <= 1.0 + 1e-12);
            report.require("a_geq_one", w.geq_one());
            report.require("phi_orlicz", ctx.phi_is_orlicz());
            report
        }
        L426 => {
            let (x, y, z) = (ctx.m("x")?, ctx.m("y")?, ctx.m("z")?);
            let lhs = ev(&x.matmul(y).matmul(z))?.norm_sqr();
            let left = psd_power(&y.cogram(), 1.0 - alpha)?.conjugate_by(x);
            let right = psd_power(&y.gram(), alpha)?.conjugate_by(&z.adjoint());
            let rhs = re(ev(&left)?) * re(ev(&right)?);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("weight_is_identity", w.is_identity());
            report.require("y_invertible", is_invertible(y));
            check_alpha(&mut report, alpha);
            report
        }
        Tla => {
            let (p, x, q) = (ctx.m("p")?, ctx.m("x")?, ctx.m("q")?);
            let (r, y, s) = (ctx.m("r")?, ctx.m("y")?, ctx.m("s")?);
            let pair = pair()?;
            let lhs = ev(&(&p.matmul(x).matmul(q) + &r.matmul(y).matmul(s)))?.norm();
            let outer = |c: &ComplexMatrix, t: &ComplexMatrix| -> Result<f64> {
                Ok(re(ev(&psd_power(&t.cogram(), 1.0 - alpha)?.conjugate_by(c))?).max(0.0).sqrt())
            };
            let inner = |c: &ComplexMatrix, t: &ComplexMatrix| -> Result<f64> {
                Ok(re(ev(&psd_power(&t.gram(), alpha)?.conjugate_by(&c.adjoint()))?).max(0.0).sqrt())
            };
            let rhs = pair.phi.eval(outer(p, x)?)
                + pair.psi.eval(inner(q, x)?)
                + pair.phi.eval(outer(r, y)?)
                + pair.psi.eval(inner(s, y)?);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("weight_is_identity", w.is_identity());
            report.require("x_invertible", is_invertible(x));
            report.require("y_invertible", is_invertible(y));
            check_alpha(&mut report, alpha);
            report
        }
        Lj | M02 => {
            let x = ctx.m("x")?;
            let ax = sym(a.matmul(x));
            let fax = re(ev(&ax)?);
            let mut report = if id == Lj {
                let mut report = BoundReport::new(id.as_str(), ctx.phi(fax), re(ev(&ctx.phi_mat(&ax)?)?), tol);
                report.require("phi_orlicz", ctx.phi_is_orlicz());
                report
            } else {
                let r = inst.r;
                let mut report = BoundReport::new(id.as_str(), fax.max(0.0).powf(r), re(ev(&psd_power(&ax, r)?)?), tol);
                report.require("r_geq_one", r >= 1.0);
                report
            };
            report.require("x_a_selfadjoint", is_a_selfadjoint(x, w, 1e-10));
            report.require("ax_psd", is_a_positive(x, w, 1e-10));
            report.require("a_geq_one", w.geq_one());
            report
        }
        Pje => {
            let x = ctx.m("x")?;
            let e = alpha;
            let xs = sym(x.clone());
            let lhs = re(ev(&psd_power(&xs, e)?)?);
            let rhs = re(ev(&xs)?).max(0.0).powf(e);
            let mut report = BoundReport::new(id.as_str(), lhs, rhs, tol);
            report.require("weight_is_identity", w.is_identity());
            report.require("x_psd", is_psd(x));
            report.require("exponent_in_unit_interval", e > 0.0 && e <= 1.0);
            report
        }
    };
    report.param("dim", json!(inst.dim()));
    report.param("alpha", json!(inst.alpha));
    if matches!(id, Lemma1 | Lemma2a | Lemma2b | Pie | Lj) {
        report.param("phi", json!(inst.phi.name()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_abs, polar_unitary};
    use crate::state::random_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(d).unwrap()
    }

    fn random_weight(n: usize, rng: &mut ChaCha8Rng) -> Weight {
        let g = ComplexMatrix::random_gaussian(n, rng);
        Weight::new(&g.cogram() + &ComplexMatrix::identity(n).scale(0.1)).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        assert_eq!(BoundId::ALL.len(), 26);
        for id in BoundId::ALL {
            assert_eq!(id.as_str().parse::<BoundId>().unwrap(), *id);
            let json = serde_json::to_string(id).unwrap();
            assert_eq!(serde_json::from_str::<BoundId>(&json).unwrap(), *id);
        }
        for id in LemmaId::ALL {
            assert_eq!(id.as_str().parse::<LemmaId>().unwrap(), *id);
        }
        assert!(matches!("nope".parse::<BoundId>(), Err(Error::UnknownId(_))));
    }

    #[test]
    fn sum2_and_hhnn_example() {
        let mut inst = Instance::with_identity(2)
            .with("x", diag(&[0.5, 1.0 / 3.0]))
            .with("y", diag(&[0.25, 0.2]));
        inst.n = 3;
        let sum2 = evaluate_bound(BoundId::Sum2, &inst, DEFAULT_TOL).unwrap();
        let hhnn = evaluate_bound(BoundId::Hhnn, &inst, DEFAULT_TOL).unwrap();
        assert!((sum2.rhs - 0.5625).abs() < 1e-9);
        assert!((hhnn.rhs - 0.59375).abs() < 1e-9);
        assert!((sum2.lhs - 0.5625).abs() < 1e-9);
        assert!(sum2.holds && hhnn.holds);
        assert_eq!(sum2.params["argmin_n"], json!(3));
    }

    #[test]
    fn kit28_example() {
        let id = ComplexMatrix::identity(2);
        let mut inst = Instance::with_identity(2)
            .with("p", diag(&[0.5, 1.0 / 3.0]))
            .with("x", diag(&[3.0, 4.0]))
            .with("q", id.clone())
            .with("r", diag(&[0.5, 0.25]))
            .with("y", diag(&[3.0, 5.0]))
            .with("s", id);
        inst.alpha = 1.0;
        inst.n = 3;
        let report = evaluate_bound(BoundId::Kit28, &inst, DEFAULT_TOL).unwrap();
        let expected = (65.0 + 40.0 * 5f64.sqrt()) / 12.0;
        assert!((report.rhs - expected).abs() < 1e-9, "{}", report.rhs);
        assert!((report.lhs - 3.0).abs() < 1e-9);
        assert!(report.holds && report.preconditions_met());
        // the constant pins α = 1
        inst.alpha = 0.5;
        let half = evaluate_bound(BoundId::Kit28, &inst, DEFAULT_TOL).unwrap();
        assert!((half.rhs - expected).abs() > 1e-3);
    }

    #[test]
    fn dra_scalar_fixture() {
        let one = ComplexMatrix::identity(1);
        let mut inst = Instance::with_identity(1)
            .with("x", one.clone())
            .with("w", one.clone())
            .with("y", one.clone())
            .with("z", one);
        let proof = evaluate_bound(BoundId::Dra, &inst, DEFAULT_TOL).unwrap();
        assert!((proof.lhs - 1.0).abs() < 1e-12 && (proof.rhs - 1.0).abs() < 1e-12);
        assert!(proof.holds);
        inst.variant = Variant::Literal;
        let literal = evaluate_bound(BoundId::Dra, &inst, DEFAULT_TOL).unwrap();
        assert_eq!((literal.lhs, literal.rhs), (2.0, 1.0));
        assert!(!literal.holds);
        assert_eq!(literal.variant, Some(Variant::Literal));
    }

    #[test]
    fn sum2_at_n_one() {
        let mut inst = Instance::with_identity(2)
            .with("x", diag(&[0.5, 0.25]))
            .with("y", diag(&[0.5, 0.1]));
        inst.n = 1;
        let report = evaluate_bound(BoundId::Sum2, &inst, DEFAULT_TOL).unwrap();
        assert!(report.holds);
        inst.matrices.insert("y".into(), diag(&[2.0, 0.1]));
        assert!(matches!(
            evaluate_bound(BoundId::Sum2, &inst, DEFAULT_TOL),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn missing_roles_and_dimension_errors() {
        let inst = Instance::with_identity(2);
        assert!(matches!(evaluate_bound(BoundId::Mz3, &inst, DEFAULT_TOL), Err(Error::MissingRole(r)) if r == "x"));
        let inst = Instance::with_identity(2).with("x", ComplexMatrix::identity(3));
        assert!(matches!(
            evaluate_bound(BoundId::Mz3, &inst, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coincidences_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.random_range(2..=5);
            let x = ComplexMatrix::random_gaussian(n, &mut rng);
            let mut inst = Instance::new(random_weight(n, &mut rng)).with("x", x);
            inst.alpha = 0.5;
            let th1a = evaluate_bound(BoundId::Th1a, &inst, DEFAULT_TOL).unwrap();
            let mz3 = evaluate_bound(BoundId::Mz3, &inst, DEFAULT_TOL).unwrap();
            assert!((th1a.rhs - mz3.rhs).abs() < 1e-12 * mz3.scale());
            let ramm = evaluate_bound(BoundId::Ramm, &inst, DEFAULT_TOL).unwrap();
            let mz4 = evaluate_bound(BoundId::Mz4, &inst, DEFAULT_TOL).unwrap();
            assert!((ramm.rhs - mz4.rhs).abs() < 1e-12 * mz4.scale());
            assert!(mz4.rhs <= mz3.rhs + 1e-10 * mz3.scale());

            inst.r = rng.random_range(1.0..3.0);
            inst.alpha = rng.random_range(0.0..1.0);
            inst.phi = OrliczFn::power(inst.r);
            let pairs = [
                (BoundId::Re02, BoundId::Ramm),
                (BoundId::Re01, BoundId::Th1b),
                (BoundId::CccI, BoundId::Th2bI),
                (BoundId::CccII, BoundId::Th2bII),
            ];
            for (a, b) in pairs {
                let ra = evaluate_bound(a, &inst, DEFAULT_TOL).unwrap();
                let rb = evaluate_bound(b, &inst, DEFAULT_TOL).unwrap();
                assert!((ra.rhs - rb.rhs).abs() < 1e-12 * ra.scale(), "{a} vs {b}");
                assert!((ra.lhs - rb.lhs).abs() < 1e-12 * ra.scale(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn th1a_is_degree_two_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = ComplexMatrix::random_gaussian(4, &mut rng);
        let w = random_weight(4, &mut rng);
        let base = evaluate_bound(BoundId::Th1a, &Instance::new(w.clone()).with("x", x.clone()), DEFAULT_TOL).unwrap();
        let scaled = evaluate_bound(BoundId::Th1a, &Instance::new(w).with("x", x.scale(3.0)), DEFAULT_TOL).unwrap();
        assert!((scaled.lhs - 9.0 * base.lhs).abs() < 1e-10 * scaled.scale());
        assert!((scaled.rhs - 9.0 * base.rhs).abs() < 1e-10 * scaled.scale());
    }

    #[test]
    fn ra_flags_non_submultiplicative_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = ComplexMatrix::random_gaussian(3, &mut rng);
        let h = ComplexMatrix::random_gaussian(3, &mut rng);
        let y = ComplexMatrix::random_gaussian(3, &mut rng);
        let ny = operator_norm(&y).unwrap();
        let mut inst = Instance::with_identity(3)
            .with("x", g.cogram())
            .with("y", y.scale(0.5 / ny))
            .with("z", h.cogram());
        inst.r = 2.0;
        inst.phi = OrliczFn::power_scaled(3.0);
        let report = evaluate_bound(BoundId::Ra, &inst, DEFAULT_TOL).unwrap();
        assert!(!report.preconditions_met());
        inst.phi = OrliczFn::from_name("t^2+t").unwrap();
        let report = evaluate_bound(BoundId::Ra, &inst, DEFAULT_TOL).unwrap();
        assert!(report.preconditions_met() && report.holds);
    }

    #[test]
    fn report_json_shape() {
        let inst = Instance::with_identity(2).with("x", diag(&[1.0, -2.0]));
        let report = evaluate_bound(BoundId::NormUpper, &inst, DEFAULT_TOL).unwrap();
        let value: Value = serde_json::to_value(&report).unwrap();
        for key in ["bound_id", "lhs", "rhs", "slack", "holds", "preconditions", "params", "variant"] {
            assert!(value.get(key).is_some(), "{key}");
        }
        let back: BoundReport = serde_json::from_value(value).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn cauchy_lemma_on_many_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..200 {
            let n = rng.random_range(1..=4);
            let w = random_weight(n, &mut rng);
            let inst = Instance::new(w.clone())
                .with("x", ComplexMatrix::random_gaussian(n, &mut rng))
                .with("y", ComplexMatrix::random_gaussian(n, &mut rng));
            let f = random_state(&w, n, &mut rng);
            assert!(lemma_check(LemmaId::Cauchy, &inst, &f, DEFAULT_TOL).unwrap().holds);
            assert!(lemma_check(LemmaId::Lsplemma02, &inst, &f, DEFAULT_TOL).unwrap().holds);
        }
    }

    #[test]
    fn jensen_lemmas() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let w = Weight::identity(3);
        let x = ComplexMatrix::random_gaussian(3, &mut rng).cogram();
        let mut inst = Instance::new(w.clone()).with("x", x);
        inst.phi = OrliczFn::power(2.0);
        let f = random_state(&w, 3, &mut rng);
        let lj = lemma_check(LemmaId::Lj, &inst, &f, DEFAULT_TOL).unwrap();
        assert!(lj.holds && lj.preconditions_met());
        inst.r = 1.0;
        let m02 = lemma_check(LemmaId::M02, &inst, &f, DEFAULT_TOL).unwrap();
        assert!(m02.slack.abs() < 1e-12 * m02.scale());
        inst.alpha = 0.3;
        let pje = lemma_check(LemmaId::Pje, &inst, &f, DEFAULT_TOL).unwrap();
        assert!(pje.holds && pje.preconditions_met());
    }

    #[test]
    fn l426_with_polar_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let w = Weight::identity(3);
        for _ in 0..20 {
            let mut inst = Instance::new(w.clone())
                .with("x", ComplexMatrix::random_gaussian(3, &mut rng))
                .with("y", ComplexMatrix::random_gaussian(3, &mut rng))
                .with("z", ComplexMatrix::random_gaussian(3, &mut rng));
            inst.alpha = rng.random_range(0.0..=1.0);
            let f = random_state(&w, 2, &mut rng);
            let report = lemma_check(LemmaId::L426, &inst, &f, DEFAULT_TOL).unwrap();
            assert!(report.holds && report.preconditions_met());
        }
        // the polar route and the direct route agree
        let y = ComplexMatrix::random_gaussian(3, &mut rng);
        let u = polar_unitary(&y).unwrap();
        let abs = matrix_abs(&y).unwrap();
        assert!(u.matmul(&abs).distance(&y) < 1e-10);
    }
}
