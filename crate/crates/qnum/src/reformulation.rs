//! The transformed allocation problem in log-rate space.
//!
//! With rates `x = e^y`, link Werner parameters are eliminated via
//! `w_j(y) = 1 - <A_j, e^y>/d_j` and the end-to-end parameter of route `i`
//! is `u_i(y) = prod_j w_j(y)^(a_ji)`. The problem minimises
//!
//! ```text
//!     -sum_i ( y_i + ln f_i(u_i(y)) )
//! ```
//!
//! over the region where every link has positive slack and every `u_i`
//! clears its route threshold. This module evaluates the objective together
//! with its analytic gradient and Hessian, assembled per route from
//!
//! ```text
//!     s_k = sum_{j in route} dw_j/dy_k / w_j ,
//!     du_i/dy = u_i s ,
//!     H^(i)  = u_i (diag(s) + s s^T - q),   q_km = sum_j (dw_j/dy_k)(dw_j/dy_m) / w_j^2 ,
//!     D2F_i  = F_i''(u_i) (du_i)(du_i)^T + F_i'(u_i) H^(i) ,
//! ```
//!
//! and checks both against finite differences in the tests.

use crate::error::{Error, Result};
use crate::measures::MeasureModel;
use crate::network::NetworkModel;
use nalgebra::{DMatrix, DVector};

/// A log-rate vector with everything derived from it.
#[derive(Debug, Clone)]
pub struct EvalPoint {
    pub y: Vec<f64>,
    /// Rates `x = e^y`, pairs per second.
    pub x: Vec<f64>,
    /// Per-link Werner parameters; may fall outside (0, 1) at infeasible `y`.
    pub w: Vec<f64>,
    /// Per-route end-to-end Werner parameters.
    pub u: Vec<f64>,
}

/// Derive rates, link Werner parameters and end-to-end parameters from `y`.
pub fn eval_point(network: &NetworkModel, y: &[f64]) -> EvalPoint {
    assert_eq!(y.len(), network.num_routes(), "y must have one entry per route");
    let x: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    let w: Vec<f64> = (0..network.num_links())
        .map(|j| 1.0 - network.link_load(j, &x) / network.d(j))
        .collect();
    let u = (0..network.num_routes())
        .map(|i| route_werner(network, i, &w))
        .collect();
    EvalPoint { y: y.to_vec(), x, w, u }
}

/// Product of link Werner parameters along a route, via a log-sum when all
/// factors are positive (stable on long routes).
fn route_werner(network: &NetworkModel, i: usize, w: &[f64]) -> f64 {
    let links = network.links_of_route(i);
    if links.iter().all(|&j| w[j] > 0.0) {
        links.iter().map(|&j| w[j].ln()).sum::<f64>().exp()
    } else {
        links.iter().map(|&j| w[j]).product()
    }
}

/// Constraint family a binding entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    LinkCapacity,
    RouteThreshold,
}

/// A constraint whose relative slack is below the binding tolerance.
#[derive(Debug, Clone)]
pub struct BindingConstraint {
    pub kind: ConstraintKind,
    pub id: String,
    pub relative_slack: f64,
}

/// Relative slack below which a constraint is reported as near-active.
pub const BINDING_RTOL: f64 = 1e-6;

/// Feasibility of a point with per-constraint slack detail.
#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Per link: `d_j - <A_j, x>`.
    pub slacks: Vec<f64>,
    /// Per route: `u_i - threshold_i`.
    pub margins: Vec<f64>,
    /// Per route feasibility threshold on `u_i`.
    pub thresholds: Vec<f64>,
    /// Constraints with relative slack below [`BINDING_RTOL`].
    pub binding: Vec<BindingConstraint>,
}

/// Check `y` against link capacities and route thresholds.
///
/// `margin` is a relative safety factor: a link needs slack above
/// `margin * d_j` and a route needs `u_i - threshold_i` above
/// `margin * (1 - threshold_i)`. Pass `0` for plain feasibility.
pub fn feasibility(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
    margin: f64,
) -> FeasibilityReport {
    let point = eval_point(network, y);
    feasibility_at(network, measures, &point, margin)
}

pub(crate) fn feasibility_at(
    network: &NetworkModel,
    measures: &[MeasureModel],
    point: &EvalPoint,
    margin: f64,
) -> FeasibilityReport {
    assert_eq!(measures.len(), network.num_routes(), "one measure per route");
    let slacks: Vec<f64> = (0..network.num_links())
        .map(|j| network.d(j) - network.link_load(j, &point.x))
        .collect();
    let thresholds: Vec<f64> = measures.iter().map(|m| m.effective_threshold()).collect();
    let margins: Vec<f64> = point
        .u
        .iter()
        .zip(&thresholds)
        .map(|(u, c)| u - c)
        .collect();

    let mut feasible = true;
    let mut binding = Vec::new();
    for (j, &s) in slacks.iter().enumerate() {
        let scale = network.d(j);
        if s <= margin * scale {
            feasible = false;
        }
        if s < BINDING_RTOL * scale {
            binding.push(BindingConstraint {
                kind: ConstraintKind::LinkCapacity,
                id: network.links()[j].id.clone(),
                relative_slack: s / scale,
            });
        }
    }
    for (i, &m) in margins.iter().enumerate() {
        let scale = 1.0 - thresholds[i];
        if m <= margin * scale {
            feasible = false;
        }
        if m < BINDING_RTOL * scale {
            binding.push(BindingConstraint {
                kind: ConstraintKind::RouteThreshold,
                id: network.routes()[i].id.clone(),
                relative_slack: m / scale,
            });
        }
    }
    FeasibilityReport { feasible, slacks, margins, thresholds, binding }
}

fn require_feasible(
    network: &NetworkModel,
    measures: &[MeasureModel],
    point: &EvalPoint,
) -> Result<()> {
    let report = feasibility_at(network, measures, point, 0.0);
    if report.feasible {
        return Ok(());
    }
    for (j, &s) in report.slacks.iter().enumerate() {
        if s <= 0.0 {
            return Err(Error::Infeasible(format!(
                "link '{}' capacity violated (slack {s})",
                network.links()[j].id
            )));
        }
    }
    for (i, &m) in report.margins.iter().enumerate() {
        if m <= 0.0 {
            return Err(Error::Infeasible(format!(
                "route '{}' end-to-end Werner parameter {} not above threshold {}",
                network.routes()[i].id,
                point.u[i],
                report.thresholds[i]
            )));
        }
    }
    unreachable!("infeasible report must name a violated constraint");
}

/// Per-route first- and second-order geometry of `u_i(y)`.
pub(crate) struct RouteQuantities {
    pub point: EvalPoint,
    /// `du[i][k] = d u_i / d y_k`.
    pub du: Vec<DVector<f64>>,
    /// `hess_u[i]` is the Hessian of `u_i`.
    pub hess_u: Vec<DMatrix<f64>>,
}

/// Assemble `u`, `du` and the per-route Hessians. Requires all `w_j > 0`.
pub(crate) fn route_quantities(network: &NetworkModel, y: &[f64]) -> Result<RouteQuantities> {
    let point = eval_point(network, y);
    if let Some(j) = point.w.iter().position(|&w| w <= 0.0) {
        return Err(Error::Infeasible(format!(
            "link '{}' capacity violated",
            network.links()[j].id
        )));
    }
    let r = network.num_routes();
    let mut du = Vec::with_capacity(r);
    let mut hess_u = Vec::with_capacity(r);
    for i in 0..r {
        let mut s = DVector::zeros(r);
        let mut q = DMatrix::zeros(r, r);
        for &j in network.links_of_route(i) {
            let dw = network.d(j) * point.w[j];
            let users = network.routes_of_link(j);
            for &k in users {
                s[k] -= point.x[k] / dw;
            }
            for &k in users {
                for &m in users {
                    q[(k, m)] += point.x[k] * point.x[m] / (dw * dw);
                }
            }
        }
        let ui = point.u[i];
        let grad = ui * &s;
        let mut h = &s * s.transpose();
        h -= &q;
        for k in 0..r {
            h[(k, k)] += s[k];
        }
        hess_u.push(ui * h);
        du.push(grad);
    }
    Ok(RouteQuantities { point, du, hess_u })
}

/// Per-route summary attached to an [`ObjectiveEval`].
#[derive(Debug, Clone)]
pub struct RouteEval {
    pub u: f64,
    /// `f_i(u_i)`.
    pub measure_value: f64,
    /// `F_i(u_i) = ln f_i(u_i)`.
    pub log_measure: f64,
}

/// Objective value, gradient and Hessian at a strictly feasible point.
#[derive(Debug, Clone)]
pub struct ObjectiveEval {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
    pub per_route: Vec<RouteEval>,
}

/// Negative log-utility `-sum_i (y_i + F_i(u_i(y)))`.
pub fn objective(network: &NetworkModel, measures: &[MeasureModel], y: &[f64]) -> Result<f64> {
    let point = eval_point(network, y);
    require_feasible(network, measures, &point)?;
    let mut value = 0.0;
    for i in 0..network.num_routes() {
        let f = measures[i].value(point.u[i])?;
        value -= y[i] + f.ln();
    }
    Ok(value)
}

/// Analytic gradient: `g_k = -1 - sum_i F_i'(u_i) du_i/dy_k`.
pub fn objective_gradient(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<DVector<f64>> {
    Ok(evaluate(network, measures, y)?.gradient)
}

/// Analytic Hessian: `-sum_i D2F_i`.
pub fn objective_hessian(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<DMatrix<f64>> {
    Ok(evaluate(network, measures, y)?.hessian)
}

/// Evaluate value, gradient, Hessian and per-route terms in one pass.
pub fn evaluate(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<ObjectiveEval> {
    let quantities = route_quantities(network, y)?;
    require_feasible(network, measures, &quantities.point)?;
    let r = network.num_routes();
    let mut value = 0.0;
    let mut gradient = DVector::from_element(r, -1.0);
    let mut hessian = DMatrix::zeros(r, r);
    let mut per_route = Vec::with_capacity(r);
    for i in 0..r {
        let ui = quantities.point.u[i];
        let f = measures[i].value(ui)?;
        let fp = measures[i].log_d1(ui)?;
        let fpp = measures[i].log_d2(ui)?;
        value -= y[i] + f.ln();
        gradient -= fp * &quantities.du[i];
        hessian -= fpp * &quantities.du[i] * quantities.du[i].transpose();
        hessian -= fp * &quantities.hess_u[i];
        per_route.push(RouteEval { u: ui, measure_value: f, log_measure: f.ln() });
    }
    // Symmetrise away the last-ulp asymmetry of the accumulation order.
    let symmetrised = 0.5 * (&hessian + hessian.transpose());
    Ok(ObjectiveEval { value, gradient, hessian: symmetrised, per_route })
}

/// Per-route contributions `-D2F_i` to the objective Hessian.
///
/// The objective Hessian is the sum of these blocks; each block is positive
/// semidefinite exactly when the route's contribution to the objective is
/// convex.
pub fn per_route_hessian_blocks(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<Vec<DMatrix<f64>>> {
    let quantities = route_quantities(network, y)?;
    require_feasible(network, measures, &quantities.point)?;
    let mut blocks = Vec::with_capacity(network.num_routes());
    for i in 0..network.num_routes() {
        let ui = quantities.point.u[i];
        let fp = measures[i].log_d1(ui)?;
        let fpp = measures[i].log_d2(ui)?;
        let mut block = -fpp * &quantities.du[i] * quantities.du[i].transpose();
        block -= fp * &quantities.hess_u[i];
        blocks.push(0.5 * (&block + block.transpose()));
    }
    Ok(blocks)
}

/// Product utility `prod_i x_i f_i(u_i)` of the canonical problem.
///
/// `w` is a free variable here (it need not equal the eliminating choice);
/// the rate constraints `<A_j, x> <= d_j (1 - w_j)` must hold.
pub fn canonical_objective(
    network: &NetworkModel,
    measures: &[MeasureModel],
    x: &[f64],
    w: &[f64],
) -> Result<f64> {
    assert_eq!(x.len(), network.num_routes());
    assert_eq!(w.len(), network.num_links());
    if let Some(i) = x.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "rate of route '{}' must be positive, got {}",
            network.routes()[i].id, x[i]
        )));
    }
    if let Some(j) = w.iter().position(|&v| v <= 0.0 || v > 1.0) {
        return Err(Error::Domain(format!(
            "Werner parameter of link '{}' must lie in (0, 1], got {}",
            network.links()[j].id, w[j]
        )));
    }
    for j in 0..network.num_links() {
        let cap = network.d(j) * (1.0 - w[j]);
        let load = network.link_load(j, x);
        if load > cap * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "link '{}' rate constraint violated: load {load} exceeds capacity {cap}",
                network.links()[j].id
            )));
        }
    }
    let mut utility = 1.0;
    for i in 0..network.num_routes() {
        let ui = route_werner(network, i, w);
        utility *= x[i] * measures[i].value(ui)?;
    }
    Ok(utility)
}

/// The utility-maximising elimination `w_j = 1 - <A_j, x>/d_j`.
pub fn reduce_w(network: &NetworkModel, x: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(x.len(), network.num_routes());
    if let Some(i) = x.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "rate of route '{}' must be positive, got {}",
            network.routes()[i].id, x[i]
        )));
    }
    let mut w = Vec::with_capacity(network.num_links());
    for j in 0..network.num_links() {
        let load = network.link_load(j, x);
        if load >= network.d(j) {
            return Err(Error::Domain(format!(
                "link '{}' capacity exceeded: load {load} >= d {}",
                network.links()[j].id,
                network.d(j)
            )));
        }
        w.push(1.0 - load / network.d(j));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::BuiltinMeasure;
    use crate::network::{LinkSpec, RouteSpec};

    fn sk() -> MeasureModel {
        MeasureModel::builtin(BuiltinMeasure::SecretKeyFraction)
    }
    fn neg() -> MeasureModel {
        MeasureModel::builtin(BuiltinMeasure::Negativity)
    }

    fn single_link(d: f64, measure: &str) -> NetworkModel {
        NetworkModel::build(
            vec![LinkSpec::new("l1", d)],
            vec![RouteSpec::new("r1", vec!["l1".into()], measure)],
        )
        .unwrap()
    }

    /// Two routes sharing the middle link of three.
    fn shared_link() -> NetworkModel {
        NetworkModel::build(
            vec![
                LinkSpec::new("a", 5.0),
                LinkSpec::new("b", 8.0),
                LinkSpec::new("c", 6.0),
            ],
            vec![
                RouteSpec::new("r1", vec!["a".into(), "b".into()], "sk"),
                RouteSpec::new("r2", vec!["b".into(), "c".into()], "sk"),
            ],
        )
        .unwrap()
    }

    struct SplitMix(u64);
    impl SplitMix {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    fn sample_feasible(
        network: &NetworkModel,
        measures: &[MeasureModel],
        rng: &mut SplitMix,
    ) -> Vec<f64> {
        loop {
            let y: Vec<f64> = (0..network.num_routes())
                .map(|_| -6.0 + 7.0 * rng.next())
                .collect();
            if feasibility(network, measures, &y, 0.05).feasible {
                return y;
            }
        }
    }

    #[test]
    fn eval_point_trivials() {
        let net = single_link(10.0, "sk");
        let p = eval_point(&net, &[(5.0f64).ln()]);
        assert!((p.w[0] - 0.5).abs() < 1e-15);
        assert!((p.u[0] - 0.5).abs() < 1e-15);

        let net = NetworkModel::build(
            vec![LinkSpec::new("shared", 10.0)],
            vec![
                RouteSpec::new("r1", vec!["shared".into()], "sk"),
                RouteSpec::new("r2", vec!["shared".into()], "sk"),
            ],
        )
        .unwrap();
        let p = eval_point(&net, &[(2.0f64).ln(), (3.0f64).ln()]);
        assert!((p.w[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn feasibility_trivials() {
        let net = single_link(10.0, "sk");
        let ms = vec![sk()];
        // Tiny rates: w -> 1, u -> 1.
        assert!(feasibility(&net, &ms, &[-20.0], 0.0).feasible);
        // Saturating the link: w = 0.
        assert!(!feasibility(&net, &ms, &[(10.0f64).ln()], 0.0).feasible);
        // u above c but checked against the margin-scaled threshold.
        let report = feasibility(&net, &ms, &[-20.0], 0.0);
        assert!(report.binding.is_empty());
        assert_eq!(report.thresholds[0], ms[0].zero_threshold());
    }

    #[test]
    fn objective_reference_values() {
        // Single sk link, d = 150, y = ln 15: w = u = 0.9.
        let net = single_link(150.0, "sk");
        let v = objective(&net, &[sk()], &[(15.0f64).ln()]).unwrap();
        assert!((v - (-1.8575614554)).abs() < 1e-9, "{v}");

        // Single neg link, d = 3, y = 0: u = 2/3, f = 1/4.
        let net = single_link(3.0, "neg");
        let v = objective(&net, &[neg()], &[0.0]).unwrap();
        assert!((v - 4.0f64.ln()).abs() < 1e-12);

        // Deep interior: objective approaches -sum y_i since F(1) = 0.
        let net = shared_link();
        let v = objective(&net, &[sk(), sk()], &[-30.0, -30.0]).unwrap();
        assert!((v - 60.0).abs() < 1e-6);
    }

    #[test]
    fn objective_rejects_infeasible() {
        let net = single_link(10.0, "sk");
        let err = objective(&net, &[sk()], &[(20.0f64).ln()]).unwrap_err();
        assert!(err.to_string().contains("l1"));
        // Feasible in capacity but below the sk threshold: w = 0.5 < c.
        let err = objective(&net, &[sk()], &[(5.0f64).ln()]).unwrap_err();
        assert!(err.to_string().contains("r1"));
    }

    #[test]
    fn gradient_symmetry_on_symmetric_instance() {
        let net = NetworkModel::build(
            vec![LinkSpec::new("a", 10.0), LinkSpec::new("b", 10.0)],
            vec![
                RouteSpec::new("r1", vec!["a".into()], "sk"),
                RouteSpec::new("r2", vec!["b".into()], "sk"),
            ],
        )
        .unwrap();
        let ms = vec![sk(), sk()];
        let g = objective_gradient(&net, &ms, &[-1.0, -1.0]).unwrap();
        assert!((g[0] - g[1]).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let net = shared_link();
        let ms = vec![sk(), sk()];
        let mut rng = SplitMix(11);
        for _ in 0..25 {
            let y = sample_feasible(&net, &ms, &mut rng);
            let g = objective_gradient(&net, &ms, &y).unwrap();
            for k in 0..y.len() {
                let h = 1e-6 * (1.0 + y[k].abs());
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[k] += h;
                ym[k] -= h;
                let fd = (objective(&net, &ms, &yp).unwrap()
                    - objective(&net, &ms, &ym).unwrap())
                    / (2.0 * h);
                assert!(
                    (g[k] - fd).abs() / (1.0 + g[k].abs()) < 1e-6,
                    "k={k}: {} vs {fd}",
                    g[k]
                );
            }
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let net = shared_link();
        let ms = vec![sk(), sk()];
        let mut rng = SplitMix(17);
        for _ in 0..10 {
            let y = sample_feasible(&net, &ms, &mut rng);
            let hess = objective_hessian(&net, &ms, &y).unwrap();
            let r = y.len();
            let f = |yv: &[f64]| objective(&net, &ms, yv).unwrap();
            for k in 0..r {
                let hk = 1e-4 * (1.0 + y[k].abs());
                for m in k..r {
                    let hm = 1e-4 * (1.0 + y[m].abs());
                    let fd = if k == m {
                        let mut yp = y.clone();
                        let mut ym = y.clone();
                        yp[k] += hk;
                        ym[k] -= hk;
                        (f(&yp) - 2.0 * f(&y) + f(&ym)) / (hk * hk)
                    } else {
                        let mut ypp = y.clone();
                        let mut ypm = y.clone();
                        let mut ymp = y.clone();
                        let mut ymm = y.clone();
                        ypp[k] += hk;
                        ypp[m] += hm;
                        ypm[k] += hk;
                        ypm[m] -= hm;
                        ymp[k] -= hk;
                        ymp[m] += hm;
                        ymm[k] -= hk;
                        ymm[m] -= hm;
                        (f(&ypp) - f(&ypm) - f(&ymp) + f(&ymm)) / (4.0 * hk * hm)
                    };
                    let a = hess[(k, m)];
                    assert!(
                        (a - fd).abs() / (1.0 + a.abs()) < 1e-4,
                        "({k},{m}): {a} vs {fd}"
                    );
                }
            }
            // Symmetry.
            for k in 0..r {
                for m in 0..r {
                    let denom = 1.0 + hess[(k, m)].abs();
                    assert!((hess[(k, m)] - hess[(m, k)]).abs() / denom < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scalar_case_hessian() {
        // One route over one link: the Hessian is the 1-D second derivative.
        let net = single_link(150.0, "sk");
        let ms = vec![sk()];
        let y = [(10.0f64).ln()];
        let hess = objective_hessian(&net, &ms, &y).unwrap();
        let h = 1e-4;
        let f = |v: f64| objective(&net, &ms, &[v]).unwrap();
        let fd = (f(y[0] + h) - 2.0 * f(y[0]) + f(y[0] - h)) / (h * h);
        assert!((hess[(0, 0)] - fd).abs() / (1.0 + fd.abs()) < 1e-5);
    }

    #[test]
    fn log_consistency_with_canonical() {
        let net = shared_link();
        let ms = vec![sk(), sk()];
        let mut rng = SplitMix(23);
        for _ in 0..50 {
            let y = sample_feasible(&net, &ms, &mut rng);
            let point = eval_point(&net, &y);
            let w = reduce_w(&net, &point.x).unwrap();
            let utility = canonical_objective(&net, &ms, &point.x, &w).unwrap();
            let obj = objective(&net, &ms, &y).unwrap();
            assert!((-utility.ln() - obj).abs() < 1e-10);
        }
    }

    #[test]
    fn reduce_w_examples_and_monotonicity() {
        let net = single_link(10.0, "sk");
        let w = reduce_w(&net, &[5.0]).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15);
        let err = reduce_w(&net, &[11.0]).unwrap_err();
        assert!(err.to_string().contains("l1"));

        // Utility at any feasible w below the eliminating choice is no better.
        let net = shared_link();
        let ms = vec![neg(), neg()];
        let mut rng = SplitMix(29);
        for _ in 0..50 {
            let x: Vec<f64> = (0..2).map(|_| 0.2 + 1.0 * rng.next()).collect();
            let Ok(w_star) = reduce_w(&net, &x) else { continue };
            let w: Vec<f64> = w_star
                .iter()
                .map(|&w| (w * (0.3 + 0.7 * rng.next())).max(1e-6))
                .collect();
            let best = canonical_objective(&net, &ms, &x, &w_star).unwrap();
            let other = canonical_objective(&net, &ms, &x, &w).unwrap();
            assert!(other <= best + 1e-12);
        }
    }

    #[test]
    fn canonical_zero_branch() {
        // A route whose u falls at or below its threshold has zero utility.
        let net = single_link(10.0, "neg");
        let utility = canonical_objective(&net, &[neg()], &[1.0], &[0.25]).unwrap();
        assert_eq!(utility, 0.0);
    }

    #[test]
    fn row_sum_identity() {
        // sum_m dw_j/dy_m = w_j - 1, with partials accumulated one route at
        // a time exactly as the assembly does.
        let net = shared_link();
        let y = [-0.7, -1.1];
        let point = eval_point(&net, &y);
        for j in 0..net.num_links() {
            let sum: f64 = net
                .routes_of_link(j)
                .iter()
                .map(|&m| -point.x[m] / net.d(j))
                .sum();
            assert!((sum - (point.w[j] - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn feasible_midpoints_stay_feasible() {
        let net = shared_link();
        let ms = vec![sk(), sk()];
        let mut rng = SplitMix(31);
        for _ in 0..500 {
            let y1 = sample_feasible(&net, &ms, &mut rng);
            let y2 = sample_feasible(&net, &ms, &mut rng);
            let mid: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| 0.5 * (a + b)).collect();
            assert!(feasibility(&net, &ms, &mid, 0.0).feasible);
        }
    }

    #[test]
    fn per_route_u_concavity_above_half() {
        // With thresholds >= 1/2 each u_i is concave: Hessians of u_i alone
        // have no positive-definite direction beyond roundoff.
        let net = shared_link();
        let ms = vec![sk(), sk()];
        let mut rng = SplitMix(37);
        for _ in 0..50 {
            let y = sample_feasible(&net, &ms, &mut rng);
            let q = route_quantities(&net, &y).unwrap();
            for h in &q.hess_u {
                let sym = 0.5 * (h + h.transpose());
                let eig = sym.symmetric_eigenvalues();
                assert!(eig.iter().all(|&e| e <= 1e-8), "eigs {eig:?}");
            }
        }
    }
}
