//! Machine-checkable inequalities and identities for the weighted numerical
//! radius, and a suite runner over random ensembles.
//!
//! Each check is split into atomic records. A record compares `lhs <= rhs`
//! and passes when `slack = rhs - lhs >= -tol_used`. Radius-valued terms are
//! carried as enclosures, and `tol_used` is the user tolerance plus the widths
//! of both sides, so solver error never produces a false failure. Equalities
//! are recorded as `|x - y| <= 0`, and identity residuals as
//! `residual <= threshold` with `tol_used = 0`.
//!
//! A check may have a fixed part (evaluated once per sample), a part
//! evaluated at each weight `t`, and a part evaluated at each `lambda`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_4, SQRT_2};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::ensembles::{gen, sector_angle, EnsembleSpec};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::ComplexMatrix;
use crate::quadrature::{
    integrate_enclosures, sqrt_gap_integral, sqrt_weight_constant, IntegralEstimate,
};
use crate::radius::{numerical_radius, rotated_weighted_sup, weighted_norm, RadiusEstimate};
use crate::spectral::{min_eigenvalue, spectral_norm};
use crate::weighted::{
    dual_residual, identity_threshold, loewner_gap_min_eigenvalue, prop12_residual, weighted_sum,
    Weight,
};

pub const DEFAULT_T_GRID: [f64; 7] = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
pub const DEFAULT_LAMBDA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Points of the convexity grid, `k / 20` for `k = 0..=20`.
const CONVEXITY_POINTS: usize = 21;

macro_rules! check_ids {
    ($($variant:ident => $name:literal, [$fixed:expr, $by_t:expr, $by_lambda:expr];)*) => {
        /// Identifier of a catalog check. Ordering follows declaration order,
        /// which is the canonical report order.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }

            fn parts(self) -> Parts {
                match self {
                    $(CheckId::$variant => Parts {
                        fixed: $fixed,
                        by_t: $by_t,
                        by_lambda: $by_lambda,
                    },)*
                }
            }
        }
    };
}

check_ids! {
    Prop12Identity => "PROP12_IDENTITY", [false, true, false];
    DualIdentity => "DUAL_IDENTITY", [false, true, false];
    LoewnerGapPsd => "LOEWNER_GAP_PSD", [false, true, false];
    SqrtGapProportional => "SQRT_GAP_PROPORTIONAL", [true, false, false];
    BasicProperties => "BASIC_PROPERTIES", [true, true, false];
    ConvexityT => "CONVEXITY_T", [true, false, false];
    AdjointInvariant => "ADJOINT_INVARIANT", [false, true, false];
    SandwichT23 => "SANDWICH_T23", [false, true, false];
    IntegralBoundsC24 => "INTEGRAL_BOUNDS_C24", [true, false, false];
    ReRefinementC25 => "RE_REFINEMENT_C25", [true, true, false];
    ImRefinementR26 => "IM_REFINEMENT_R26", [true, true, false];
    HalfNormChainP27 => "HALF_NORM_CHAIN_P27", [true, false, false];
    RotatedSupT28 => "ROTATED_SUP_T28", [false, true, false];
    WeightedNormLowerT29 => "WEIGHTED_NORM_LOWER_T29", [false, true, false];
    HhChainC210 => "HH_CHAIN_C210", [false, false, true];
    SelfadjointEqR211 => "SELFADJOINT_EQ_R211", [false, false, true];
    JensenGapC212 => "JENSEN_GAP_C212", [true, true, false];
    SkewCombLowerP213 => "SKEW_COMB_LOWER_P213", [false, true, false];
    CubeWeightT214 => "CUBE_WEIGHT_T214", [false, true, false];
    MaxRefineC215 => "MAX_REFINE_C215", [false, true, false];
    AccdissNormC31 => "ACCDISS_NORM_C31", [false, true, false];
    SPlusItNorm => "S_PLUS_IT_NORM", [false, true, false];
    AccdissChainP32 => "ACCDISS_CHAIN_P32", [false, true, false];
    SectorRefineR33 => "SECTOR_REFINE_R33", [true, true, false];
    PowerReverseT34 => "POWER_REVERSE_T34", [true, false, false];
}

#[derive(Clone, Copy, Debug)]
struct Parts {
    fixed: bool,
    by_t: bool,
    by_lambda: bool,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or(Error::UnknownCheckId)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "skipped" => Ok(Verdict::Skipped),
            _ => Err(Error::InvalidArgument("unknown verdict")),
        }
    }
}

/// One atomic comparison `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub check_id: CheckId,
    pub sample_index: usize,
    pub t: Option<f64>,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol_used: f64,
    pub verdict: Verdict,
    pub note: String,
}

impl CheckRecord {
    fn compare(key: Key, lhs: f64, rhs: f64, tol_used: f64, note: String) -> Self {
        let slack = rhs - lhs;
        let verdict = if slack >= -tol_used {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckRecord {
            check_id: key.id,
            sample_index: 0,
            t: key.t,
            lambda: key.lambda,
            lhs,
            rhs,
            slack,
            tol_used,
            verdict,
            note,
        }
    }

    fn skipped(key: Key, note: String) -> Self {
        debug_assert!(!note.is_empty());
        CheckRecord {
            check_id: key.id,
            sample_index: 0,
            t: key.t,
            lambda: key.lambda,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            tol_used: 0.0,
            verdict: Verdict::Skipped,
            note,
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        fn opt(a: Option<f64>, b: Option<f64>) -> Ordering {
            match (a, b) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => x.total_cmp(&y),
            }
        }
        self.check_id
            .cmp(&other.check_id)
            .then(self.sample_index.cmp(&other.sample_index))
            .then(opt(self.t, other.t))
            .then(opt(self.lambda, other.lambda))
    }
}

/// Per-check aggregate over a report. Slack statistics ignore skipped records
/// and are `None` when every record was skipped.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSummary {
    pub count: usize,
    pub failures: usize,
    pub skipped: usize,
    pub min_slack: Option<f64>,
    pub median_slack: Option<f64>,
}

impl CheckSummary {
    fn from_records<'a>(records: impl Iterator<Item = &'a CheckRecord>) -> Self {
        let mut count = 0;
        let mut failures = 0;
        let mut skipped = 0;
        let mut slacks = Vec::new();
        for r in records {
            count += 1;
            match r.verdict {
                Verdict::Fail => failures += 1,
                Verdict::Skipped => {
                    skipped += 1;
                    continue;
                }
                Verdict::Pass => {}
            }
            slacks.push(r.slack);
        }
        slacks.sort_by(f64::total_cmp);
        let median_slack = match slacks.len() {
            0 => None,
            n if n % 2 == 1 => Some(slacks[n / 2]),
            n => Some(0.5 * (slacks[n / 2 - 1] + slacks[n / 2])),
        };
        CheckSummary {
            count,
            failures,
            skipped,
            min_slack: slacks.first().copied(),
            median_slack,
        }
    }
}

/// Records for a run, in canonical order, with per-check summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    /// The generating ensemble; `None` for explicitly supplied matrices.
    pub spec: Option<EnsembleSpec>,
    pub dim: usize,
    pub count: usize,
    pub tol: f64,
    pub records: Vec<CheckRecord>,
    pub summary: BTreeMap<CheckId, CheckSummary>,
}

impl SuiteReport {
    /// Sorts `records` canonically and derives the summary from them.
    pub fn from_records(
        spec: Option<EnsembleSpec>,
        dim: usize,
        count: usize,
        tol: f64,
        mut records: Vec<CheckRecord>,
    ) -> Self {
        records.sort_by(CheckRecord::order);
        let summary = summarize(&records);
        SuiteReport {
            spec,
            dim,
            count,
            tol,
            records,
            summary,
        }
    }

    pub fn failures(&self) -> usize {
        self.summary.values().map(|s| s.failures).sum()
    }
}

/// Per-check summaries of a record list.
pub fn summarize(records: &[CheckRecord]) -> BTreeMap<CheckId, CheckSummary> {
    let mut ids: Vec<CheckId> = records.iter().map(|r| r.check_id).collect();
    ids.sort();
    ids.dedup();
    ids.into_iter()
        .map(|id| {
            let s = CheckSummary::from_records(records.iter().filter(|r| r.check_id == id));
            (id, s)
        })
        .collect()
}

#[derive(Clone, Copy)]
struct Key {
    id: CheckId,
    t: Option<f64>,
    lambda: Option<f64>,
}

/// Builds comparison records with a fixed user tolerance.
#[derive(Clone, Copy)]
struct Cmp {
    tol: f64,
}

impl Cmp {
    fn le(self, key: Key, lhs: Interval, rhs: Interval) -> CheckRecord {
        self.le_tol(key, lhs, rhs, self.tol)
    }

    fn le_tol(self, key: Key, lhs: Interval, rhs: Interval, tol: f64) -> CheckRecord {
        CheckRecord::compare(
            key,
            lhs.mid(),
            rhs.mid(),
            tol + lhs.width() + rhs.width(),
            String::new(),
        )
    }

    fn equal(self, key: Key, x: Interval, y: Interval) -> CheckRecord {
        CheckRecord::compare(
            key,
            (x.mid() - y.mid()).abs(),
            0.0,
            self.tol + x.width() + y.width(),
            String::new(),
        )
    }
}

/// Lazily computed, memoised quantities of one sample.
struct SampleContext<'a> {
    a: &'a ComplexMatrix,
    tol: f64,
    inner: f64,
    re: ComplexMatrix,
    im: ComplexMatrix,
    norm_re: f64,
    norm_im: f64,
    norm: f64,
    omega_t: BTreeMap<u64, RadiusEstimate>,
    omega_skew: BTreeMap<u64, RadiusEstimate>,
    rotated: BTreeMap<u64, f64>,
    int_low: Option<Interval>,
    int_high: Option<Interval>,
    int_skew: Option<Interval>,
    omega_square: Option<Interval>,
    sector: Option<core::result::Result<f64, f64>>,
    accdiss: Option<bool>,
}

fn enclosure(e: &RadiusEstimate) -> Interval {
    e.interval()
}

fn integral(e: IntegralEstimate) -> Interval {
    Interval::new(e.value - e.error, e.value + e.error)
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

impl<'a> SampleContext<'a> {
    fn new(a: &'a ComplexMatrix, tol: f64) -> Self {
        let re = a.hermitian_part();
        let im = a.skew_part();
        SampleContext {
            a,
            tol,
            inner: tol / 10.0,
            norm_re: spectral_norm(&re),
            norm_im: spectral_norm(&im),
            norm: spectral_norm(a),
            re,
            im,
            omega_t: BTreeMap::new(),
            omega_skew: BTreeMap::new(),
            rotated: BTreeMap::new(),
            int_low: None,
            int_high: None,
            int_skew: None,
            omega_square: None,
            sector: None,
            accdiss: None,
        }
    }

    fn omega_t_estimate(&mut self, t: f64) -> Result<RadiusEstimate> {
        if let Some(e) = self.omega_t.get(&t.to_bits()) {
            return Ok(*e);
        }
        let e = numerical_radius(&weighted_sum(self.a, Weight::new(t)?), self.inner)?;
        self.omega_t.insert(t.to_bits(), e);
        Ok(e)
    }

    fn omega_t(&mut self, t: f64) -> Result<Interval> {
        Ok(enclosure(&self.omega_t_estimate(t)?))
    }

    fn omega(&mut self) -> Result<Interval> {
        self.omega_t(0.5)
    }

    /// `omega((1 - 2t) A - A*)`, the weighted radius of `i A*`.
    fn omega_skew_estimate(&mut self, t: f64) -> Result<RadiusEstimate> {
        if let Some(e) = self.omega_skew.get(&t.to_bits()) {
            return Ok(*e);
        }
        let m = self.a.lin_comb(
            Complex64::new(1.0 - 2.0 * t, 0.0),
            &self.a.adjoint(),
            Complex64::new(-1.0, 0.0),
        );
        let e = numerical_radius(&m, self.inner)?;
        self.omega_skew.insert(t.to_bits(), e);
        Ok(e)
    }

    fn int_low(&mut self) -> Result<Interval> {
        if let Some(v) = self.int_low {
            return Ok(v);
        }
        let tol = self.tol;
        let v = integral(integrate_enclosures(|t| self.omega_t_estimate(t), 0.0, 0.5, tol)?);
        self.int_low = Some(v);
        Ok(v)
    }

    fn int_high(&mut self) -> Result<Interval> {
        if let Some(v) = self.int_high {
            return Ok(v);
        }
        let tol = self.tol;
        let v = integral(integrate_enclosures(|t| self.omega_t_estimate(t), 0.5, 1.0, tol)?);
        self.int_high = Some(v);
        Ok(v)
    }

    fn int_full(&mut self) -> Result<Interval> {
        Ok(self.int_low()? + self.int_high()?)
    }

    fn int_skew(&mut self) -> Result<Interval> {
        if let Some(v) = self.int_skew {
            return Ok(v);
        }
        let tol = self.tol;
        let v = integral(integrate_enclosures(|t| self.omega_skew_estimate(t), 0.0, 0.5, tol)?);
        self.int_skew = Some(v);
        Ok(v)
    }

    fn rotated_sup(&mut self, w: Weight) -> Result<f64> {
        let key = w.lesser().to_bits();
        if let Some(v) = self.rotated.get(&key) {
            return Ok(*v);
        }
        let v = rotated_weighted_sup(self.a, w, self.inner)?;
        self.rotated.insert(key, v);
        Ok(v)
    }

    fn omega_square(&mut self) -> Result<Interval> {
        if let Some(v) = self.omega_square {
            return Ok(v);
        }
        let v = numerical_radius(&self.a.square(), self.inner)?.interval();
        self.omega_square = Some(v);
        Ok(v)
    }

    /// Measured sector angle, or the offending eigenvalue of `Re A`.
    fn sector(&mut self) -> core::result::Result<f64, f64> {
        if let Some(s) = self.sector {
            return s;
        }
        let s = match sector_angle(self.a) {
            Ok(theta) => Ok(theta),
            Err(Error::NotAccretive { min_eigenvalue }) => Err(min_eigenvalue),
            Err(_) => Err(f64::NAN),
        };
        self.sector = Some(s);
        s
    }

    fn accretive_dissipative(&mut self) -> bool {
        if let Some(b) = self.accdiss {
            return b;
        }
        let floor = 1e-12 * self.norm;
        let positive = |h: &ComplexMatrix| min_eigenvalue(h).map(|l| l > floor).unwrap_or(false);
        let b = self.norm > 0.0 && positive(&self.re) && positive(&self.im);
        self.accdiss = Some(b);
        b
    }

    fn is_selfadjoint(&self) -> bool {
        self.a.is_hermitian()
    }

    fn residual(key: Key, value: f64, threshold: f64) -> CheckRecord {
        CheckRecord::compare(key, value, threshold, 0.0, String::new())
    }

    fn fixed(&mut self, id: CheckId, out: &mut Vec<CheckRecord>) -> Result<()> {
        let cmp = Cmp { tol: self.tol };
        let key = Key {
            id,
            t: None,
            lambda: None,
        };
        let (n_re, n_im, norm) = (pt(self.norm_re), pt(self.norm_im), pt(self.norm));
        match id {
            CheckId::SqrtGapProportional => {
                let scale = self.a.frobenius_norm().max(1.0);
                let g = sqrt_gap_integral(self.a, 1e-9 * scale)?;
                let threshold = 1e-6 * g.scale.max(1.0);
                if !g.defined {
                    let mut r = Self::residual(key, g.residual, threshold);
                    r.note = String::from("Im A = 0: integral vanishes, constant undefined");
                    out.push(r);
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("Im A = 0: no proportionality constant to compare"),
                    ));
                } else {
                    out.push(Self::residual(key, g.residual, threshold));
                    let universal = sqrt_weight_constant(1e-12)?;
                    let mut r = Self::residual(key, (g.c - universal).abs(), 1e-6);
                    r.note = format!(
                        "c = {:.12}; int 2 sqrt(t(1-t)) dt = {:.12}; (3/2) c = {:.12}",
                        g.c,
                        universal,
                        1.5 * g.c
                    );
                    out.push(r);
                }
            }
            CheckId::BasicProperties => {
                let omega = self.omega()?;
                out.push(cmp.equal(key, self.omega_t(0.5)?, omega));
                out.push(cmp.equal(key, pt(weighted_norm(self.a, Weight::HALF)), norm));
                out.push(cmp.equal(key, self.omega_t(0.0)?, n_re * 2.0));
                out.push(cmp.equal(key, self.omega_t(1.0)?, n_im * 2.0));
            }
            CheckId::ConvexityT => {
                let step = (CONVEXITY_POINTS - 1) as f64;
                let mut vals = Vec::with_capacity(CONVEXITY_POINTS);
                for k in 0..CONVEXITY_POINTS {
                    vals.push(self.omega_t(k as f64 / step)?);
                }
                for k in 1..CONVEXITY_POINTS - 1 {
                    let mid = Key {
                        t: Some(k as f64 / step),
                        ..key
                    };
                    let chord = (vals[k - 1] + vals[k + 1]) * 0.5;
                    out.push(cmp.le_tol(mid, vals[k], chord, 4.0 * self.tol));
                }
            }
            CheckId::IntegralBoundsC24 => {
                let omega = self.omega()?;
                out.push(cmp.le(key, self.int_low()?, omega * 0.75));
                out.push(cmp.le(key, omega * 0.25, self.int_high()?));
            }
            CheckId::ReRefinementC25 => {
                let omega = self.omega()?;
                let mid = self.int_low()? * (4.0 / 3.0);
                out.push(cmp.le(key, n_re, mid));
                out.push(cmp.le(key, mid, omega));
            }
            CheckId::ImRefinementR26 => {
                let omega = self.omega()?;
                let mid = self.int_skew()? * (4.0 / 3.0);
                out.push(cmp.le(key, n_im, mid));
                out.push(cmp.le(key, mid, omega));
            }
            CheckId::HalfNormChainP27 => {
                let omega = self.omega()?;
                let half_sum = (n_re + n_im) * 0.5;
                let integrals = (self.int_low()? + self.int_skew()?) * (2.0 / 3.0);
                out.push(cmp.le(key, norm * 0.5, half_sum));
                out.push(cmp.le(key, half_sum, integrals));
                out.push(cmp.le(key, integrals, omega));
            }
            CheckId::JensenGapC212 => {
                let omega = self.omega()?;
                let full = self.int_full()?;
                let sum = n_re + n_im;
                out.push(cmp.le(key, full * 2.0 - sum, omega));
                out.push(cmp.le(key, omega, full * (2.0 / 3.0) + sum * (1.0 / 3.0)));
            }
            CheckId::SectorRefineR33 => match self.sector() {
                Err(lmin) => out.push(CheckRecord::skipped(key, not_accretive_note(lmin))),
                Ok(theta) => {
                    let omega = self.omega()?;
                    let note = format!("measured sector angle {theta:.12}");
                    let cos = libm::cos(theta);
                    let diff = self.plus_minus_gap(1.0, 1.0);
                    let refined = pt(cos / SQRT_2 * self.norm + diff / (2.0 * SQRT_2));
                    let mut r = cmp.le(key, norm * cos, n_re);
                    r.note = note.clone();
                    out.push(r);
                    let mut r = cmp.le(key, refined, omega);
                    r.note = note.clone();
                    out.push(r);
                    if theta <= FRAC_PI_4 {
                        let half = pt(0.5 * self.norm);
                        let padded = pt(0.5 * self.norm + diff / (2.0 * SQRT_2));
                        let mut r = cmp.le(key, half, padded);
                        r.note = note.clone();
                        out.push(r);
                        let mut r = cmp.le(key, padded, refined);
                        r.note = note;
                        out.push(r);
                    } else {
                        out.push(CheckRecord::skipped(
                            key,
                            format!("sector angle {theta:.6} > pi/4: half-norm chain not claimed"),
                        ));
                    }
                }
            },
            CheckId::PowerReverseT34 => match self.sector() {
                Err(lmin) => out.push(CheckRecord::skipped(key, not_accretive_note(lmin))),
                Ok(alpha) => {
                    let tan = libm::tan(alpha);
                    let coef = 1.0 - 2.0 * tan * tan;
                    let lhs = self.omega()?.sqr() * coef;
                    let rhs = self.omega_square()?;
                    let mut r = cmp.le(key, lhs, rhs);
                    r.note = if coef <= 0.0 {
                        format!("vacuous: 1 - 2 tan^2(alpha) <= 0 at measured alpha {alpha:.12}")
                    } else {
                        format!("measured alpha {alpha:.12}")
                    };
                    out.push(r);
                }
            },
            _ => {}
        }
        Ok(())
    }

    /// `| ||a Re A + b Im A|| - ||a Re A - b Im A|| |`.
    fn plus_minus_gap(&self, a: f64, b: f64) -> f64 {
        let (p, m) = self.plus_minus(a, b);
        (p - m).abs()
    }

    fn plus_minus(&self, a: f64, b: f64) -> (f64, f64) {
        let ca = Complex64::new(a, 0.0);
        let plus = self.re.lin_comb(ca, &self.im, Complex64::new(b, 0.0));
        let minus = self.re.lin_comb(ca, &self.im, Complex64::new(-b, 0.0));
        (spectral_norm(&plus), spectral_norm(&minus))
    }

    fn at_t(&mut self, id: CheckId, t: f64, out: &mut Vec<CheckRecord>) -> Result<()> {
        let cmp = Cmp { tol: self.tol };
        let w = Weight::new(t)?;
        let key = Key {
            id,
            t: Some(t),
            lambda: None,
        };
        let (r, big_r) = (w.lesser(), w.greater());
        let (n_re, n_im, norm) = (pt(self.norm_re), pt(self.norm_im), pt(self.norm));
        match id {
            CheckId::Prop12Identity => {
                out.push(Self::residual(key, prop12_residual(self.a, w), identity_threshold(self.a)));
            }
            CheckId::DualIdentity => {
                out.push(Self::residual(key, dual_residual(self.a, w), identity_threshold(self.a)));
            }
            CheckId::LoewnerGapPsd => {
                let (lmin, scale) = loewner_gap_min_eigenvalue(self.a, w)?;
                out.push(CheckRecord::compare(
                    key,
                    0.0,
                    lmin,
                    1e-9 * scale.max(1.0),
                    String::new(),
                ));
            }
            CheckId::BasicProperties => {
                let omega = self.omega()?;
                let wt = self.omega_t(t)?;
                let nt = pt(weighted_norm(self.a, w));
                out.push(cmp.le(key, nt * 0.5, wt));
                out.push(cmp.le(key, wt, nt));
                out.push(cmp.le(key, wt, omega * 2.0));
                let b = self.a.adjoint().times_i();
                let wb = numerical_radius(&weighted_sum(&b, w), self.inner)?.interval();
                let wab = numerical_radius(&weighted_sum(&(self.a + &b), w), self.inner)?.interval();
                let mut rec = cmp.le(key, wab, wt + wb);
                rec.note = String::from("B = i A*");
                out.push(rec);
            }
            CheckId::AdjointInvariant => {
                let wt = self.omega_t(t)?;
                let adj = numerical_radius(&weighted_sum(&self.a.adjoint(), w), self.inner)?;
                out.push(cmp.equal(key, enclosure(&adj), wt));
                let inner = self.re.lin_comb(
                    Complex64::new(1.0 - t, 0.0),
                    &self.im,
                    Complex64::new(0.0, t),
                );
                let half = numerical_radius(&inner, self.inner)?.interval() * 2.0;
                out.push(cmp.equal(key, wt, half));
            }
            CheckId::SandwichT23 => {
                let omega = self.omega()?;
                out.push(cmp.le(key, self.omega_t(r)? * (1.0 / (2.0 * big_r)), omega));
                if r == 0.0 {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("r = 0: upper bound divides by 2r"),
                    ));
                } else {
                    out.push(cmp.le(key, omega, self.omega_t(big_r)? * (1.0 / (2.0 * r))));
                }
            }
            CheckId::ReRefinementC25 => {
                let omega = self.omega()?;
                let mid = self.omega_t(r)? * (1.0 / (2.0 * big_r));
                out.push(cmp.le(key, n_re, mid));
                out.push(cmp.le(key, mid, omega));
            }
            CheckId::ImRefinementR26 => {
                if t > 0.5 {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("t > 1/2: statement only covers 0 <= t <= 1/2"),
                    ));
                } else {
                    let omega = self.omega()?;
                    let mid = enclosure(&self.omega_skew_estimate(t)?) * (1.0 / (2.0 * (1.0 - t)));
                    out.push(cmp.le(key, n_im, mid));
                    out.push(cmp.le(key, mid, omega));
                }
            }
            CheckId::RotatedSupT28 => {
                let omega = self.omega()?;
                let s = self.rotated_sup(w)?;
                let sup = Interval::new(s - self.tol, s + self.tol);
                out.push(cmp.le(key, sup, omega));
                out.push(cmp.le(key, omega, sup));
            }
            CheckId::WeightedNormLowerT29 => {
                let omega = self.omega()?;
                let nr = weighted_norm(self.a, Weight::new(r)?);
                out.push(cmp.le(key, pt(nr / (4.0 * big_r)), omega));
            }
            CheckId::JensenGapC212 => {
                let omega = self.omega()?;
                let gap = n_re + n_im - omega;
                let excess = n_re * (1.0 - t) + n_im * t - self.omega_t(t)? * 0.5;
                out.push(cmp.le(key, excess * (1.0 / big_r), gap));
                if r == 0.0 {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("r = 0: upper bound divides by r"),
                    ));
                } else {
                    out.push(cmp.le(key, gap, excess * (1.0 / r)));
                }
            }
            CheckId::SkewCombLowerP213 => {
                let comb = self.re.lin_comb(
                    Complex64::new(1.0 - t, 0.0),
                    &self.im,
                    Complex64::new(t, 0.0),
                );
                let wt = self.omega_t(t)?;
                out.push(cmp.le(key, pt(SQRT_2 * spectral_norm(&comb)), wt));
            }
            CheckId::CubeWeightT214 => {
                let (a, b) = cube_weights(t);
                let half = self.omega_t(t)? * 0.5;
                let (plus, minus) = self.plus_minus(a, b);
                out.push(cmp.le(key, pt(plus), half));
                out.push(cmp.le(key, pt(minus), half));
                let s = 1.0 - t;
                let upper = self.re.square().lin_comb(
                    Complex64::new(s * s, 0.0),
                    &self.im.square(),
                    Complex64::new(t * t, 0.0),
                );
                out.push(cmp.le(key, half, pt(libm::sqrt(spectral_norm(&upper)))));
            }
            CheckId::MaxRefineC215 => {
                let (a, b) = cube_weights(t);
                let lhs = 2.0 * a * self.norm_re + self.plus_minus_gap(a, b);
                out.push(cmp.le(key, pt(lhs), self.omega_t(t)?));
            }
            CheckId::AccdissNormC31 | CheckId::SPlusItNorm | CheckId::AccdissChainP32 => {
                if !self.accretive_dissipative() {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("hypothesis not met: sample is not accretive-dissipative"),
                    ));
                    return Ok(());
                }
                let wt = self.omega_t(t)?;
                let nt = pt(weighted_norm(self.a, w));
                match id {
                    CheckId::AccdissNormC31 => {
                        out.push(cmp.le(key, nt * (1.0 / SQRT_2), wt));
                    }
                    CheckId::SPlusItNorm => {
                        let (cs, ct) = (Complex64::new(1.0 - t, 0.0), Complex64::new(t, 0.0));
                        let s_it = self.re.lin_comb(cs, &self.im, Complex64::new(0.0, t));
                        let s_t = self.re.lin_comb(cs, &self.im, ct);
                        out.push(cmp.le(key, pt(spectral_norm(&s_it)), pt(spectral_norm(&s_t))));
                    }
                    _ => {
                        let omega = self.omega()?;
                        let w2 = omega.sqr();
                        let wt2 = wt.sqr() * 0.25;
                        out.push(cmp.le(key, nt.sqr() * 0.125, wt2));
                        out.push(cmp.le(key, wt2, w2));
                        out.push(cmp.le(key, w2, norm.sqr()));
                        out.push(cmp.le(key, norm.sqr(), n_re.sqr() + n_im.sqr()));
                    }
                }
            }
            CheckId::SectorRefineR33 => match self.sector() {
                Err(lmin) => out.push(CheckRecord::skipped(key, not_accretive_note(lmin))),
                Ok(theta) => {
                    let (a, b) = cube_weights(t);
                    let lhs = 2.0 * a * libm::cos(theta) * self.norm + self.plus_minus_gap(a, b);
                    let mut rec = cmp.le(key, pt(lhs), self.omega_t(t)?);
                    rec.note = format!("measured sector angle {theta:.12}");
                    out.push(rec);
                }
            },
            _ => {}
        }
        Ok(())
    }

    fn at_lambda(&mut self, id: CheckId, lambda: f64, out: &mut Vec<CheckRecord>) -> Result<()> {
        let cmp = Cmp { tol: self.tol };
        Weight::new(lambda)?;
        let key = Key {
            id,
            t: None,
            lambda: Some(lambda),
        };
        let (n_re, n_im, norm) = (pt(self.norm_re), pt(self.norm_im), pt(self.norm));
        match id {
            CheckId::HhChainC210 => {
                let omega = self.omega()?;
                let low = self.omega_t(lambda / 2.0)? * lambda
                    + self.omega_t((1.0 + lambda) / 2.0)? * (1.0 - lambda);
                let full = self.int_full()?;
                let high = self.omega_t(lambda)? * 0.5 + n_re * lambda + n_im * (1.0 - lambda);
                out.push(cmp.le(key, omega, low));
                out.push(cmp.le(key, low, full));
                out.push(cmp.le(key, full, high));
                out.push(cmp.le(key, high, n_re + n_im));
            }
            CheckId::SelfadjointEqR211 => {
                if !self.is_selfadjoint() {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("hypothesis not met: sample is not self-adjoint"),
                    ));
                } else if self.norm == 0.0 {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("hypothesis not met: zero operator"),
                    ));
                } else if lambda >= 1.0 {
                    out.push(CheckRecord::skipped(
                        key,
                        String::from("lambda = 1: identity divides by 2(1 - lambda)"),
                    ));
                } else {
                    let rhs = self.omega_t(lambda)? * (1.0 / (2.0 * (1.0 - lambda)));
                    out.push(cmp.equal(key, norm, rhs));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn cube_weights(t: f64) -> (f64, f64) {
    let s = 1.0 - t;
    (libm::sqrt(s * s * s), libm::sqrt(t * t * t))
}

fn not_accretive_note(lmin: f64) -> String {
    format!("hypothesis not met: Re A is not positive definite (min eigenvalue {lmin:e})")
}

fn check_grid(values: &[f64]) -> Result<()> {
    values.iter().try_for_each(|&x| Weight::new(x).map(|_| ()))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Records of one check on one matrix.
///
/// Without parameters the fixed part of the check is evaluated. With `t`
/// (or `lambda`) the part parameterised by it is evaluated instead. A check
/// that has only a parameterised part fails with `MissingParameter` when its
/// parameter is absent.
pub fn check(
    id: CheckId,
    a: &ComplexMatrix,
    t: Option<f64>,
    lambda: Option<f64>,
    tol: f64,
) -> Result<Vec<CheckRecord>> {
    check_tol(tol)?;
    let parts = id.parts();
    let mut ctx = SampleContext::new(a, tol);
    let mut out = Vec::new();
    let wants_t = parts.by_t && t.is_some();
    let wants_lambda = parts.by_lambda && lambda.is_some();
    if wants_t || wants_lambda {
        if let (true, Some(t)) = (wants_t, t) {
            ctx.at_t(id, t, &mut out)?;
        }
        if let (true, Some(l)) = (wants_lambda, lambda) {
            ctx.at_lambda(id, l, &mut out)?;
        }
    } else if parts.fixed {
        ctx.fixed(id, &mut out)?;
    } else if parts.by_t {
        return Err(Error::MissingParameter("t"));
    } else {
        return Err(Error::MissingParameter("lambda"));
    }
    Ok(out)
}

/// All records of `checks` on one matrix: fixed parts once, then every `t`
/// and `lambda` of the grids. Records carry `sample_index`; ordering is
/// canonical within the sample.
pub fn evaluate_sample(
    a: &ComplexMatrix,
    sample_index: usize,
    checks: &[CheckId],
    t_grid: &[f64],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<Vec<CheckRecord>> {
    check_tol(tol)?;
    check_grid(t_grid)?;
    check_grid(lambda_grid)?;
    let mut ctx = SampleContext::new(a, tol);
    let mut out = Vec::new();
    for &id in checks {
        let parts = id.parts();
        if parts.fixed {
            ctx.fixed(id, &mut out)?;
        }
        if parts.by_t {
            for &t in t_grid {
                ctx.at_t(id, t, &mut out)?;
            }
        }
        if parts.by_lambda {
            for &l in lambda_grid {
                ctx.at_lambda(id, l, &mut out)?;
            }
        }
    }
    for r in &mut out {
        r.sample_index = sample_index;
    }
    out.sort_by(CheckRecord::order);
    Ok(out)
}

/// Runs `checks` over every sample of `spec`.
pub fn run_suite(
    spec: &EnsembleSpec,
    checks: &[CheckId],
    t_grid: &[f64],
    lambda_grid: &[f64],
    tol: f64,
) -> Result<SuiteReport> {
    spec.validate()?;
    if checks.is_empty() {
        return Err(Error::InvalidArgument("no checks selected"));
    }
    let mut records = Vec::new();
    for i in 0..spec.count {
        let a = gen(spec, i)?;
        records.extend(evaluate_sample(&a, i, checks, t_grid, lambda_grid, tol)?);
    }
    Ok(SuiteReport::from_records(
        Some(*spec),
        spec.dim,
        spec.count,
        tol,
        records,
    ))
}
