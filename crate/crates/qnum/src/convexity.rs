//! Convexity certification of the transformed problem.
//!
//! The per-route contribution `-y_i - ln f_i(u_i(y))` is convex when the
//! measure satisfies two sufficient conditions:
//!
//! - Cond. 1: the zero threshold satisfies `c >= 1/2`, making `u_i(y)`
//!   concave on the feasible region;
//! - Cond. 2: beyond the inflection point `c1` of `F = ln f`,
//!   `v(u) = u F''/(u F'' + F') + 1/u <= 2`.
//!
//! Negativity fails Cond. 1 but its contribution is convex before the change
//! of variables, which is preserved; teleportation success needs the
//! end-to-end Werner parameter restricted to `(1/2, 1]`. Anything else is
//! certified numerically or reported as uncertified (the conditions are
//! sufficient, not necessary, so uncertified scenarios are still solvable).

use crate::error::{Error, Result};
use crate::measures::{BuiltinMeasure, MeasureModel};
use crate::network::NetworkModel;
use crate::reformulation;
use serde::Serialize;

/// Which convexity argument covers a measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CertificateClass {
    /// Curvature conditions 1 and 2 both hold.
    Cond12,
    /// Convex before the change of variables, which preserves convexity.
    PreservedConvex,
    /// Convex once the end-to-end Werner parameter is cut off from below.
    RestrictedDomain,
    /// No certificate; solve with multistart and label the result.
    Uncertified,
}

impl std::fmt::Display for CertificateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CertificateClass::Cond12 => "Cond12",
            CertificateClass::PreservedConvex => "PreservedConvex",
            CertificateClass::RestrictedDomain => "RestrictedDomain",
            CertificateClass::Uncertified => "Uncertified",
        };
        f.write_str(name)
    }
}

/// Numerical record of a Cond. 2 scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cond2Report {
    /// Minimum of `g(u) = 2 - v(u)` over the refined grid.
    pub min_g: f64,
    pub argmin_u: f64,
    /// Number of scan points; 0 marks a vacuous pass (no inflection point,
    /// so the condition has nothing to constrain).
    pub grid_points: usize,
}

impl Cond2Report {
    pub fn passes(&self) -> bool {
        self.min_g >= COND2_PASS_TOL
    }
}

/// Roundoff allowance on the Cond. 2 minimum.
pub const COND2_PASS_TOL: f64 = -1e-9;

/// Convexity certificate of a single measure.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityCertificate {
    pub class: CertificateClass,
    pub cond1_pass: bool,
    pub cond2: Option<Cond2Report>,
    pub restricted_cutoff: Option<f64>,
}

/// Cond. 1: the zero threshold is at least 1/2.
pub fn check_cond1(measure: &MeasureModel) -> bool {
    measure.zero_threshold() >= 0.5
}

/// Cond. 2 scan of `g(u) = 2 - u F''/(u F'' + F') - 1/u` on `(c1, 1)`.
///
/// The mesh is geometric towards the upper endpoint, where `g` tends to zero
/// for the information-theoretic measures, and the bracket around the grid
/// minimum is refined afterwards. A non-positive denominator `u F'' + F'`
/// anywhere on the mesh is reported as an error with its location.
pub fn check_cond2(measure: &MeasureModel, grid: usize) -> Result<Cond2Report> {
    let Some(c1) = measure.inflection_point() else {
        return Err(Error::Domain(format!(
            "measure '{}' has no inflection point; Cond. 2 is vacuous",
            measure.id()
        )));
    };
    let grid = grid.max(16);
    let lo = c1 + 1e-9;
    let hi = 1.0 - 1e-9;
    let span = hi - lo;
    // Geometric distances from the upper endpoint: u_k = hi - span * rho^k
    // with the last point at distance 1e-9.
    let rho = (1e-9 / span).powf(1.0 / (grid - 1) as f64);

    let g_val = |u: f64| -> Result<f64> {
        let fp = measure.log_d1(u)?;
        let fpp = measure.log_d2(u)?;
        let denom = u * fpp + fp;
        if denom <= 0.0 {
            return Err(Error::Cond2Denominator { u, denominator: denom });
        }
        Ok(2.0 - u * fpp / denom - 1.0 / u)
    };

    let mut min_g = f64::INFINITY;
    let mut argmin = lo;
    let mut argmin_index = 0usize;
    let mut dist = span;
    let mut points = Vec::with_capacity(grid);
    for _ in 0..grid {
        points.push(hi - dist);
        dist *= rho;
    }
    for (k, &u) in points.iter().enumerate() {
        let g = g_val(u)?;
        if g < min_g {
            min_g = g;
            argmin = u;
            argmin_index = k;
        }
    }

    // Golden-section refinement inside the bracket around the grid minimum.
    let mut a = if argmin_index == 0 { lo } else { points[argmin_index - 1] };
    let mut b = if argmin_index + 1 == points.len() { hi } else { points[argmin_index + 1] };
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut u1 = b - INV_PHI * (b - a);
    let mut u2 = a + INV_PHI * (b - a);
    let mut g1 = g_val(u1)?;
    let mut g2 = g_val(u2)?;
    for _ in 0..80 {
        if g1 < g2 {
            b = u2;
            u2 = u1;
            g2 = g1;
            u1 = b - INV_PHI * (b - a);
            g1 = g_val(u1)?;
        } else {
            a = u1;
            u1 = u2;
            g1 = g2;
            u2 = a + INV_PHI * (b - a);
            g2 = g_val(u2)?;
        }
    }
    let (g_ref, u_ref) = if g1 < g2 { (g1, u1) } else { (g2, u2) };
    if g_ref < min_g {
        min_g = g_ref;
        argmin = u_ref;
    }

    Ok(Cond2Report { min_g, argmin_u: argmin, grid_points: grid })
}

/// Default Cond. 2 grid size.
pub const COND2_DEFAULT_GRID: usize = 100_000;

/// Certify a measure.
///
/// Builtins map directly to their known classes; custom measures run the
/// numerical checks and any failure downgrades to `Uncertified`.
pub fn certify(measure: &MeasureModel) -> ConvexityCertificate {
    if measure.is_builtin(BuiltinMeasure::Negativity) {
        return ConvexityCertificate {
            class: CertificateClass::PreservedConvex,
            cond1_pass: check_cond1(measure),
            cond2: None,
            restricted_cutoff: None,
        };
    }
    if measure.is_builtin(BuiltinMeasure::TeleportationSuccess) {
        return ConvexityCertificate {
            class: CertificateClass::RestrictedDomain,
            cond1_pass: check_cond1(measure),
            cond2: None,
            restricted_cutoff: measure.restricted_cutoff(),
        };
    }

    let cond1 = check_cond1(measure);
    if !cond1 || measure.inflection_ambiguous() {
        return ConvexityCertificate {
            class: CertificateClass::Uncertified,
            cond1_pass: cond1,
            cond2: None,
            restricted_cutoff: None,
        };
    }
    let cond2 = match measure.inflection_point() {
        // F = ln f concave on all of (c, 1): nothing for Cond. 2 to constrain.
        None => Cond2Report { min_g: 0.0, argmin_u: 1.0, grid_points: 0 },
        Some(_) => match check_cond2(measure, COND2_DEFAULT_GRID) {
            Ok(report) => report,
            Err(_) => {
                return ConvexityCertificate {
                    class: CertificateClass::Uncertified,
                    cond1_pass: cond1,
                    cond2: None,
                    restricted_cutoff: None,
                };
            }
        },
    };
    let class = if cond2.passes() {
        CertificateClass::Cond12
    } else {
        CertificateClass::Uncertified
    };
    ConvexityCertificate {
        class,
        cond1_pass: cond1,
        cond2: Some(cond2),
        restricted_cutoff: None,
    }
}

/// The weakest certificate across a scenario's routes; the whole objective
/// is convex only when every per-route contribution is.
pub fn scenario_class(measures: &[MeasureModel]) -> CertificateClass {
    measures
        .iter()
        .map(|m| certify(m).class)
        .max()
        .unwrap_or(CertificateClass::Uncertified)
}

/// Supremum of the reciprocal sums behind the concavity proofs.
///
/// Without `beta`: `sup sum_{i<n} 1/b_i` over `0 < b_i < 1` with
/// `prod b_i >= t`, equal to `n - 2 + 1/t`. With `beta` in (0, 1) the first
/// reciprocal is weighted and the constraint is `prod b_i = t`, giving
/// `n - 2 + beta + 1/t`.
pub fn lemma_sup_bound(n: usize, t: f64, beta: Option<f64>) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t must lie in (0, 1), got {t}")));
    }
    match beta {
        None => Ok((n - 2) as f64 + 1.0 / t),
        Some(b) if b > 0.0 && b < 1.0 => Ok((n - 2) as f64 + b + 1.0 / t),
        Some(b) => Err(Error::Domain(format!("beta must lie in (0, 1), got {b}"))),
    }
}

/// Eigenvalue probe of the objective Hessian at a strictly feasible point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PsdProbe {
    /// Exact minimum eigenvalue of the dense symmetric Hessian.
    pub min_eigenvalue_estimate: f64,
    /// Sum over routes of the Gershgorin lower bounds of the per-route
    /// blocks; always at or below the true minimum eigenvalue.
    pub gershgorin_bound: f64,
}

/// Probe positive semidefiniteness of the objective Hessian at `y`.
pub fn hessian_psd_probe(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<PsdProbe> {
    let blocks = reformulation::per_route_hessian_blocks(network, measures, y)?;
    let r = network.num_routes();
    let mut total = nalgebra::DMatrix::zeros(r, r);
    let mut gershgorin = 0.0;
    for block in &blocks {
        total += block;
        let mut block_bound = f64::INFINITY;
        for k in 0..r {
            let radius: f64 = (0..r)
                .filter(|&m| m != k)
                .map(|m| block[(k, m)].abs())
                .sum();
            block_bound = block_bound.min(block[(k, k)] - radius);
        }
        // lambda_min(sum_i B_i) >= sum_i lambda_min(B_i) >= sum_i gersh(B_i)
        gershgorin += block_bound;
    }
    let eigenvalues = total.symmetric_eigenvalues();
    let min_eig = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PsdProbe { min_eigenvalue_estimate: min_eig, gershgorin_bound: gershgorin })
}
