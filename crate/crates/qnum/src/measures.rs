//! Entanglement measures over the Werner parameter.
//!
//! Four measures are built in:
//!
//! - `sk`   — secret key fraction of entanglement-based QKD,
//! - `de`   — hashing lower bound to distillable entanglement,
//! - `neg`  — negativity,
//! - `succ` — success probability of teleportation.
//!
//! Each measure `f` maps the end-to-end Werner parameter in `[0, 1]` to
//! application quality in `[0, b]` and is non-decreasing. Besides the value
//! and its first two derivatives, a [`MeasureModel`] carries the quantities
//! the convexity analysis needs: the zero threshold `c = sup{z : f(z) = 0}`,
//! the inflection point `c1` of `F = ln f` (when one exists), and for
//! measures that are only well-behaved on a restricted domain, the cutoff on
//! the end-to-end Werner parameter.
//!
//! All `F`-quantities use the natural logarithm; the closed forms use base-2
//! logarithms internally where the information-theoretic expressions demand
//! it.

use crate::error::{Error, Result};
use std::sync::{Arc, OnceLock};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Derivative calls clamp the Werner parameter to `1 - DERIV_CLAMP` to keep
/// the diverging closed forms finite at the upper endpoint.
const DERIV_CLAMP: f64 = 1e-12;

/// Absolute bisection tolerance for thresholds and inflection points.
const BISECT_TOL: f64 = 1e-10;

/// Grid size for the inflection-point sign scan.
const INFLECTION_SCAN_POINTS: usize = 100_000;

/// The four measures with closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinMeasure {
    SecretKeyFraction,
    DistillableEntanglement,
    Negativity,
    TeleportationSuccess,
}

impl BuiltinMeasure {
    pub const ALL: [BuiltinMeasure; 4] = [
        BuiltinMeasure::SecretKeyFraction,
        BuiltinMeasure::DistillableEntanglement,
        BuiltinMeasure::Negativity,
        BuiltinMeasure::TeleportationSuccess,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BuiltinMeasure::SecretKeyFraction => "sk",
            BuiltinMeasure::DistillableEntanglement => "de",
            BuiltinMeasure::Negativity => "neg",
            BuiltinMeasure::TeleportationSuccess => "succ",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.id() == id)
    }

    pub(crate) fn raw_value(&self, w: f64) -> f64 {
        match self {
            BuiltinMeasure::SecretKeyFraction => {
                // The (1 - w) log2((1 - w)/2) term vanishes in the limit w -> 1.
                if w >= 1.0 {
                    return 1.0;
                }
                let v = 1.0
                    + (1.0 + w) * ((1.0 + w) / 2.0).log2()
                    + (1.0 - w) * ((1.0 - w) / 2.0).log2();
                v.max(0.0)
            }
            BuiltinMeasure::DistillableEntanglement => {
                if w >= 1.0 {
                    return 1.0;
                }
                let a = (1.0 + 3.0 * w) / 4.0;
                let b = (1.0 - w) / 4.0;
                let v = 1.0 + a * a.log2() + 3.0 * b * b.log2();
                v.max(0.0)
            }
            BuiltinMeasure::Negativity => ((3.0 * w - 1.0) / 4.0).max(0.0),
            BuiltinMeasure::TeleportationSuccess => (1.0 + w) / 2.0,
        }
    }

    /// Derivative of the positive branch (the expression inside `max(0, .)`).
    pub(crate) fn raw_d1(&self, w: f64) -> f64 {
        let w = w.min(1.0 - DERIV_CLAMP);
        match self {
            BuiltinMeasure::SecretKeyFraction => ((1.0 + w) / (1.0 - w)).log2(),
            BuiltinMeasure::DistillableEntanglement => {
                0.75 * ((1.0 + 3.0 * w) / (1.0 - w)).log2()
            }
            BuiltinMeasure::Negativity => 0.75,
            BuiltinMeasure::TeleportationSuccess => 0.5,
        }
    }

    pub(crate) fn raw_d2(&self, w: f64) -> f64 {
        let w = w.min(1.0 - DERIV_CLAMP);
        match self {
            BuiltinMeasure::SecretKeyFraction => 2.0 * LOG2_E / (1.0 - w * w),
            BuiltinMeasure::DistillableEntanglement => {
                3.0 * LOG2_E / (-3.0 * w * w + 2.0 * w + 1.0)
            }
            BuiltinMeasure::Negativity | BuiltinMeasure::TeleportationSuccess => 0.0,
        }
    }

    fn restricted_cutoff(&self) -> Option<f64> {
        match self {
            // Teleportation success is only convexifiable once the
            // end-to-end Werner parameter is restricted to (1/2, 1].
            BuiltinMeasure::TeleportationSuccess => Some(0.5),
            _ => None,
        }
    }
}

/// User-supplied measure: value and two derivatives of the positive branch.
///
/// `value` must be non-decreasing on `[0, 1]` with `value(1) > 0`; the
/// endpoint `w = 1` must be handled by its analytic limit when the naive
/// expression is indeterminate there.
pub trait MeasureCurve: Send + Sync {
    fn value(&self, w: f64) -> f64;
    fn d1(&self, w: f64) -> f64;
    fn d2(&self, w: f64) -> f64;
}

#[derive(Clone)]
enum MeasureKind {
    Builtin(BuiltinMeasure),
    Custom(Arc<dyn MeasureCurve>),
}

impl std::fmt::Debug for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureKind::Builtin(m) => write!(f, "Builtin({})", m.id()),
            MeasureKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// An entanglement measure together with its analysis quantities.
#[derive(Debug, Clone)]
pub struct MeasureModel {
    id: String,
    kind: MeasureKind,
    c: f64,
    c1: Option<f64>,
    b: f64,
    f0_zero: bool,
    restricted_cutoff: Option<f64>,
    /// Set when the inflection scan found several sign changes; the measure
    /// is then never certified through the curvature conditions.
    inflection_ambiguous: bool,
}

impl MeasureModel {
    /// A builtin measure with all thresholds computed.
    pub fn builtin(kind: BuiltinMeasure) -> MeasureModel {
        builtin_table()
            .iter()
            .find(|m| m.id == kind.id())
            .expect("builtin table covers all variants")
            .clone()
    }

    /// Look a builtin measure up by id ("sk", "de", "neg", "succ").
    pub fn builtin_by_id(id: &str) -> Option<MeasureModel> {
        BuiltinMeasure::from_id(id).map(MeasureModel::builtin)
    }

    /// Construct a model from a custom curve, computing `c`, `c1` and the
    /// upper bound numerically.
    ///
    /// A measure that is still zero at `1 - 1e-12` is rejected as degenerate.
    /// An ambiguous inflection scan does not reject the measure; it only
    /// prevents certification later.
    pub fn from_curve(id: impl Into<String>, curve: Arc<dyn MeasureCurve>) -> Result<MeasureModel> {
        let id = id.into();
        let (c, b, f0_zero, c1, ambiguous) = {
            let value = |w: f64| curve.value(w);
            let c = numeric_zero_threshold(&value)?;
            let log_d2 = make_log_d2(curve.as_ref());
            let (c1, ambiguous) = match numeric_inflection(&value, &log_d2, c) {
                Ok(c1) => (c1, false),
                Err(Error::NonUniqueInflection(_)) => (None, true),
                Err(e) => return Err(e),
            };
            (c, curve.value(1.0), curve.value(0.0) <= 0.0, c1, ambiguous)
        };
        Ok(MeasureModel {
            id,
            kind: MeasureKind::Custom(curve),
            c,
            c1,
            b,
            f0_zero,
            restricted_cutoff: None,
            inflection_ambiguous: ambiguous,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn is_builtin(&self, kind: BuiltinMeasure) -> bool {
        matches!(self.kind, MeasureKind::Builtin(k) if k == kind)
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.kind, MeasureKind::Custom(_))
    }

    /// Measure value `f(w)`, zero at and below the zero threshold.
    pub fn value(&self, w: f64) -> Result<f64> {
        self.check_unit_interval(w)?;
        Ok(match &self.kind {
            MeasureKind::Builtin(m) => m.raw_value(w),
            MeasureKind::Custom(c) => c.value(w),
        })
    }

    /// First derivative of the positive branch.
    ///
    /// The closed forms of `sk` and `de` diverge at `w = 1`, so the domain is
    /// `[0, 1)`; evaluation clamps to `1 - 1e-12`.
    pub fn d1(&self, w: f64) -> Result<f64> {
        self.check_derivative_domain(w)?;
        Ok(match &self.kind {
            MeasureKind::Builtin(m) => m.raw_d1(w),
            MeasureKind::Custom(c) => c.d1(w.min(1.0 - DERIV_CLAMP)),
        })
    }

    /// Second derivative of the positive branch on `[0, 1)`.
    pub fn d2(&self, w: f64) -> Result<f64> {
        self.check_derivative_domain(w)?;
        Ok(match &self.kind {
            MeasureKind::Builtin(m) => m.raw_d2(w),
            MeasureKind::Custom(c) => c.d2(w.min(1.0 - DERIV_CLAMP)),
        })
    }

    /// `F'(w) = f'(w)/f(w)` where `F = ln f`; requires `f(w) > 0`.
    pub fn log_d1(&self, w: f64) -> Result<f64> {
        let f = self.positive_value(w)?;
        Ok(self.d1(w)? / f)
    }

    /// `F''(w) = (f''(w) f(w) - f'(w)^2) / f(w)^2`; requires `f(w) > 0`.
    pub fn log_d2(&self, w: f64) -> Result<f64> {
        let f = self.positive_value(w)?;
        let d1 = self.d1(w)?;
        let d2 = self.d2(w)?;
        Ok((d2 * f - d1 * d1) / (f * f))
    }

    /// Zero threshold `c = sup{z : f(z) = 0}`.
    pub fn zero_threshold(&self) -> f64 {
        self.c
    }

    /// Inflection point of `ln f` on `(c, 1)`, when exactly one exists.
    pub fn inflection_point(&self) -> Option<f64> {
        self.c1
    }

    /// True when the inflection scan found several sign changes.
    pub fn inflection_ambiguous(&self) -> bool {
        self.inflection_ambiguous
    }

    /// Upper bound `b = f(1)`.
    pub fn upper_bound(&self) -> f64 {
        self.b
    }

    /// Whether the measure vanishes on the fully depolarised state.
    pub fn satisfies_f0_zero(&self) -> bool {
        self.f0_zero
    }

    /// Domain cutoff on the end-to-end Werner parameter, for measures that
    /// are only convexifiable on a restricted domain.
    pub fn restricted_cutoff(&self) -> Option<f64> {
        self.restricted_cutoff
    }

    /// The feasibility threshold for routes using this measure: the zero
    /// threshold, raised to the restricted-domain cutoff when one applies.
    pub fn effective_threshold(&self) -> f64 {
        match self.restricted_cutoff {
            Some(cut) => self.c.max(cut),
            None => self.c,
        }
    }

    fn check_unit_interval(&self, w: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!(
                "measure '{}': Werner parameter must lie in [0, 1], got {w}",
                self.id
            )));
        }
        Ok(())
    }

    fn check_derivative_domain(&self, w: f64) -> Result<()> {
        if !(0.0..1.0).contains(&w) {
            return Err(Error::Domain(format!(
                "measure '{}': derivatives are defined on [0, 1), got {w} \
                 (closed forms diverge at 1)",
                self.id
            )));
        }
        Ok(())
    }

    fn positive_value(&self, w: f64) -> Result<f64> {
        if !(self.c..1.0).contains(&w) || w <= self.c {
            return Err(Error::Domain(format!(
                "measure '{}': log-derivatives need w in (c, 1) with c = {}, got {w}",
                self.id, self.c
            )));
        }
        let f = self.value(w)?;
        if f <= 0.0 {
            return Err(Error::Domain(format!(
                "measure '{}': f({w}) = 0, logarithm undefined",
                self.id
            )));
        }
        Ok(f)
    }
}

fn builtin_table() -> &'static Vec<MeasureModel> {
    static TABLE: OnceLock<Vec<MeasureModel>> = OnceLock::new();
    TABLE.get_or_init(|| {
        BuiltinMeasure::ALL
            .into_iter()
            .map(|kind| {
                let value = |w: f64| kind.raw_value(w);
                let c = numeric_zero_threshold(&value)
                    .expect("builtin measures are non-degenerate");
                let log_d2 = |w: f64| {
                    let f = kind.raw_value(w);
                    let d1 = kind.raw_d1(w);
                    let d2 = kind.raw_d2(w);
                    (d2 * f - d1 * d1) / (f * f)
                };
                let c1 = numeric_inflection(&value, &log_d2, c)
                    .expect("builtin measures have at most one inflection");
                MeasureModel {
                    id: kind.id().to_string(),
                    kind: MeasureKind::Builtin(kind),
                    c,
                    c1,
                    b: kind.raw_value(1.0),
                    f0_zero: kind.raw_value(0.0) <= 0.0,
                    restricted_cutoff: kind.restricted_cutoff(),
                    inflection_ambiguous: false,
                }
            })
            .collect()
    })
}

fn make_log_d2<'a>(curve: &'a dyn MeasureCurve) -> impl Fn(f64) -> f64 + 'a {
    move |w: f64| {
        let f = curve.value(w);
        let d1 = curve.d1(w);
        let d2 = curve.d2(w);
        (d2 * f - d1 * d1) / (f * f)
    }
}

/// Bisection for `sup{z : f(z) = 0}` of a non-decreasing `f` on `[0, 1]`.
///
/// Returns 0 when `f` is already positive at `1e-12`; rejects measures that
/// are still zero at `1 - 1e-12`.
pub fn numeric_zero_threshold(value: &dyn Fn(f64) -> f64) -> Result<f64> {
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-12;
    if value(lo) > 0.0 {
        return Ok(0.0);
    }
    if value(hi) <= 0.0 {
        return Err(Error::DegenerateMeasure(
            "measure is zero on essentially all of [0, 1]".into(),
        ));
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if value(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locate the inflection point of `F = ln f` on `(c + 1e-9, 1 - 1e-9)`.
///
/// Scans the sign of `F''` on a 10^5-point grid; zero sign changes means no
/// inflection, one is bisected down to `1e-10`, more than one is an error.
pub fn numeric_inflection(
    value: &dyn Fn(f64) -> f64,
    log_d2: &dyn Fn(f64) -> f64,
    c: f64,
) -> Result<Option<f64>> {
    let lo = c + 1e-9;
    let hi = 1.0 - 1e-9;
    if lo >= hi {
        return Ok(None);
    }
    let n = INFLECTION_SCAN_POINTS;
    let step = (hi - lo) / (n - 1) as f64;

    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..n {
        let w = lo + step * k as f64;
        // The bisected threshold can sit a hair above the true root; skip
        // points where the value has not become positive yet.
        if value(w) <= 0.0 {
            continue;
        }
        let g = log_d2(w);
        if !g.is_finite() {
            continue;
        }
        if let Some((pw, pg)) = prev {
            if pg != 0.0 && g != 0.0 && pg.signum() != g.signum() {
                brackets.push((pw, w));
            }
        }
        prev = Some((w, g));
    }

    match brackets.len() {
        0 => Ok(None),
        1 => {
            let (mut a, mut b) = brackets[0];
            let ga = log_d2(a);
            while b - a > BISECT_TOL {
                let mid = 0.5 * (a + b);
                let gm = log_d2(mid);
                if gm == 0.0 {
                    return Ok(Some(mid));
                }
                if gm.signum() == ga.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Ok(Some(0.5 * (a + b)))
        }
        k => Err(Error::NonUniqueInflection(format!(
            "log-measure second derivative changes sign {k} times on ({lo}, {hi})"
        ))),
    }
}

/// Fidelity of a Werner state: `(1 + 3w) / 4`.
pub fn fidelity_from_werner(w: f64) -> Result<f64> {
    check_unit(w)?;
    Ok((1.0 + 3.0 * w) / 4.0)
}

/// Werner parameter of a Werner state with the given fidelity.
pub fn werner_from_fidelity(fidelity: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!(
            "Werner-state fidelity must lie in [1/4, 1], got {fidelity}"
        )));
    }
    Ok((4.0 * fidelity - 1.0) / 3.0)
}

/// Bright-state population of the single-photon scheme: `3(1 - w) / 4`.
pub fn bright_state_population(w: f64) -> Result<f64> {
    check_unit(w)?;
    Ok(3.0 * (1.0 - w) / 4.0)
}

fn check_unit(w: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!(
            "Werner parameter must lie in [0, 1], got {w}"
        )));
    }
    Ok(())
}
