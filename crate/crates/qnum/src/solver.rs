//! Log-barrier interior-point solver for the transformed problem.
//!
//! Each outer stage minimises `f(y) + (1/t) * phi(y)` with damped Newton
//! steps, where `phi` collects `-ln` of every link slack and every route
//! margin. The barrier weight `t` grows geometrically until the duality
//! measure `(l + r)/t` falls below the configured tolerance. Analytic
//! gradients and Hessians are used throughout; backtracking first shrinks a
//! step until it stays strictly feasible, then applies the Armijo rule.

use crate::convexity::{self, CertificateClass};
use crate::error::{Error, Result};
use crate::measures::{fidelity_from_werner, MeasureModel};
use crate::network::NetworkModel;
use crate::reformulation::{self, eval_point, route_quantities, ConstraintKind};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Solver parameters; the defaults suit every scenario in the test corpus.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Target duality measure `(l + r)/t`.
    pub tol: f64,
    /// Newton stage stops once (decrement^2)/2 falls below this.
    pub newton_tol: f64,
    /// Initial barrier weight.
    pub barrier_t0: f64,
    /// Barrier weight multiplier per outer stage.
    pub barrier_mu: f64,
    /// Armijo slope fraction.
    pub backtrack_alpha: f64,
    /// Step shrink factor.
    pub backtrack_beta: f64,
    pub max_outer: usize,
    pub max_newton: usize,
    /// Relative strict-feasibility margin enforced during line searches.
    pub feasibility_margin: f64,
    /// Number of starts used by [`multistart_solve`].
    pub multistart_count: usize,
    /// Seed for the multistart perturbations.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-9,
            newton_tol: 1e-10,
            barrier_t0: 1.0,
            barrier_mu: 10.0,
            backtrack_alpha: 0.25,
            backtrack_beta: 0.5,
            max_outer: 60,
            max_newton: 100,
            feasibility_margin: 1e-12,
            multistart_count: 8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol", self.tol),
            ("newton_tol", self.newton_tol),
            ("barrier_t0", self.barrier_t0),
            ("feasibility_margin", self.feasibility_margin),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.barrier_mu > 1.0) {
            return Err(Error::Validation("barrier_mu must exceed 1".into()));
        }
        if !(self.backtrack_alpha > 0.0 && self.backtrack_alpha < 0.5) {
            return Err(Error::Validation("backtrack_alpha must lie in (0, 0.5)".into()));
        }
        if !(self.backtrack_beta > 0.0 && self.backtrack_beta < 1.0) {
            return Err(Error::Validation("backtrack_beta must lie in (0, 1)".into()));
        }
        if self.max_outer == 0 || self.max_newton == 0 || self.multistart_count == 0 {
            return Err(Error::Validation(
                "iteration and start counts must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SolveStatus {
    /// Interior optimum with a small objective gradient.
    Converged,
    /// The central path ran into the boundary of the feasible region; the
    /// optimum is a supremum there (typical for restricted-domain measures).
    BoundarySupremum,
    /// Iteration budget exhausted before the duality target was met.
    MaxIterations,
}

/// Gradient-norm ceiling for classifying a solve as converged.
const CONVERGED_GRAD_TOL: f64 = 1e-6;

/// A restricted-domain route whose optimum sits this close (in `u`) to its
/// cutoff gets an explicit boundary warning.
const CUTOFF_WARN_TOL: f64 = 1e-3;

#[derive(Debug, Clone, serde::Serialize)]
pub struct Diagnostics {
    pub outer_stages: usize,
    pub newton_iters: usize,
    pub final_gradient_norm: f64,
    pub boundary_warnings: Vec<String>,
}

/// Optimal allocation with per-route detail and solve diagnostics.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub u: Vec<f64>,
    /// Per-route end-to-end fidelity `(1 + 3u)/4`.
    pub fidelity: Vec<f64>,
    /// Per-route utility `x_i f_i(u_i)`.
    pub route_utility: Vec<f64>,
    /// Product of the route utilities.
    pub network_utility: f64,
    /// Value of the minimised negative log-utility.
    pub objective: f64,
    pub certificate: CertificateClass,
    pub status: SolveStatus,
    pub diagnostics: Diagnostics,
}

/// A strictly feasible starting point.
///
/// Starts from `x_i = (min incident d_j) / (2 r)`, which already keeps every
/// link load at or below half its capacity, and halves all rates uniformly
/// until every route margin reaches half its attainable span.
pub fn find_interior_point(
    network: &NetworkModel,
    measures: &[MeasureModel],
) -> Result<Vec<f64>> {
    let r = network.num_routes();
    let mut x: Vec<f64> = (0..r)
        .map(|i| {
            let d_min = network
                .links_of_route(i)
                .iter()
                .map(|&j| network.d(j))
                .fold(f64::INFINITY, f64::min);
            d_min / (2.0 * r as f64)
        })
        .collect();

    for _ in 0..=100 {
        let y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let point = eval_point(network, &y);
        let slacks_ok = (0..network.num_links())
            .all(|j| network.d(j) - network.link_load(j, &point.x) >= network.d(j) / 2.0);
        let margins_ok = (0..r).all(|i| {
            let c = measures[i].effective_threshold();
            point.u[i] - c >= (1.0 - c) / 2.0
        });
        if slacks_ok && margins_ok {
            return Ok(y);
        }
        for v in &mut x {
            *v *= 0.5;
        }
    }
    Err(Error::Numerical(
        "no interior point found after 100 halvings".into(),
    ))
}

struct StageEval {
    value: f64,
    gradient: DVector<f64>,
    hessian: DMatrix<f64>,
}

/// Objective plus `(1/t)` barrier with analytic derivatives. `None` when the
/// point is not strictly feasible (relative margin `feas_margin`) or any
/// quantity is non-finite.
fn stage_eval(
    network: &NetworkModel,
    measures: &[MeasureModel],
    thresholds: &[f64],
    y: &[f64],
    inv_t: f64,
    feas_margin: f64,
    with_derivatives: bool,
) -> Option<StageEval> {
    let r = network.num_routes();
    let quantities = route_quantities(network, y).ok()?;
    let point = &quantities.point;

    let mut value = 0.0;
    let mut gradient = DVector::from_element(r, -1.0);
    let mut hessian = DMatrix::zeros(r, r);

    for j in 0..network.num_links() {
        let d = network.d(j);
        let slack = d - network.link_load(j, &point.x);
        if slack <= feas_margin * d {
            return None;
        }
        value -= inv_t * slack.ln();
        if with_derivatives {
            let users = network.routes_of_link(j);
            for &k in users {
                gradient[k] += inv_t * point.x[k] / slack;
                hessian[(k, k)] += inv_t * point.x[k] / slack;
                for &m in users {
                    hessian[(k, m)] += inv_t * point.x[k] * point.x[m] / (slack * slack);
                }
            }
        }
    }

    for i in 0..r {
        let margin = point.u[i] - thresholds[i];
        if margin <= feas_margin * (1.0 - thresholds[i]) {
            return None;
        }
        let f = measures[i].value(point.u[i]).ok()?;
        value -= y[i] + f.ln() + inv_t * margin.ln();
        if with_derivatives {
            let fp = measures[i].log_d1(point.u[i]).ok()?;
            let fpp = measures[i].log_d2(point.u[i]).ok()?;
            let du = &quantities.du[i];
            let hu = &quantities.hess_u[i];
            gradient -= (fp + inv_t / margin) * du;
            hessian -= fpp * du * du.transpose();
            hessian -= fp * hu;
            hessian += (inv_t / (margin * margin)) * du * du.transpose();
            hessian -= (inv_t / margin) * hu;
        }
    }

    if !value.is_finite() || gradient.iter().any(|g| !g.is_finite()) {
        return None;
    }
    Some(StageEval { value, gradient, hessian })
}

/// Cholesky solve of `H step = -g`, escalating a diagonal ridge when the
/// Hessian is not numerically positive definite.
fn newton_step(hessian: &DMatrix<f64>, gradient: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = 1.0 + hessian.diagonal().amax();
    let mut ridge = 0.0;
    for _ in 0..10 {
        let mut h = hessian.clone();
        if ridge > 0.0 {
            for k in 0..h.nrows() {
                h[(k, k)] += ridge;
            }
        }
        if let Some(chol) = h.cholesky() {
            return Some(chol.solve(&(-gradient)));
        }
        ridge = if ridge == 0.0 { 1e-12 * scale } else { ridge * 100.0 };
    }
    None
}

/// Solve from the default interior point.
pub fn solve(
    network: &NetworkModel,
    measures: &[MeasureModel],
    config: &SolverConfig,
) -> Result<SolveResult> {
    let y0 = find_interior_point(network, measures)?;
    solve_from(network, measures, config, &y0)
}

/// Run the barrier method from an explicit strictly feasible start.
pub fn solve_from(
    network: &NetworkModel,
    measures: &[MeasureModel],
    config: &SolverConfig,
    y_start: &[f64],
) -> Result<SolveResult> {
    config.validate()?;
    assert_eq!(measures.len(), network.num_routes(), "one measure per route");
    let thresholds: Vec<f64> = measures.iter().map(|m| m.effective_threshold()).collect();
    let constraint_count = (network.num_links() + network.num_routes()) as f64;

    let mut y = DVector::from_column_slice(y_start);
    if stage_eval(network, measures, &thresholds, y.as_slice(), 0.0, config.feasibility_margin, false)
        .is_none()
    {
        return Err(Error::Infeasible(
            "starting point is not strictly feasible".into(),
        ));
    }

    let mut t = config.barrier_t0;
    let mut outer_stages = 0;
    let mut newton_iters = 0;
    let mut duality_met = false;

    'outer: for _ in 0..config.max_outer {
        outer_stages += 1;
        let inv_t = 1.0 / t;

        let mut eval = stage_eval(
            network,
            measures,
            &thresholds,
            y.as_slice(),
            inv_t,
            config.feasibility_margin,
            true,
        )
        .ok_or_else(|| numerical_failure(&y))?;

        for _ in 0..config.max_newton {
            let Some(step) = newton_step(&eval.hessian, &eval.gradient) else {
                return Err(numerical_failure(&y));
            };
            let slope = eval.gradient.dot(&step);
            // Newton decrement squared is -slope for a PD system. A stage
            // ends with the step that crosses the threshold: quadratic
            // convergence makes that last step the one that actually centres.
            let centred = -slope / 2.0 <= config.newton_tol;
            newton_iters += 1;

            // Shrink until strictly feasible, then Armijo.
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..200 {
                let candidate = &y + alpha * &step;
                if let Some(cand_eval) = stage_eval(
                    network,
                    measures,
                    &thresholds,
                    candidate.as_slice(),
                    inv_t,
                    config.feasibility_margin,
                    true,
                ) {
                    if cand_eval.value <= eval.value + config.backtrack_alpha * alpha * slope {
                        accepted = Some((candidate, cand_eval));
                        break;
                    }
                    alpha *= config.backtrack_beta;
                } else {
                    alpha *= 0.5;
                }
                if alpha < 1e-18 {
                    break;
                }
            }
            let Some((new_y, new_eval)) = accepted else {
                // No acceptable step: the stage is as centred as f64 allows.
                break;
            };
            debug_assert!(new_eval.value <= eval.value + 1e-9 * (1.0 + eval.value.abs()));
            y = new_y;
            eval = new_eval;
            if centred {
                break;
            }
        }

        if constraint_count / t < config.tol {
            duality_met = true;
            break 'outer;
        }
        t *= config.barrier_mu;
    }

    finalize(network, measures, y.as_slice(), outer_stages, newton_iters, duality_met)
}

fn numerical_failure(y: &DVector<f64>) -> Error {
    Error::Numerical(format!(
        "stage evaluation produced non-finite values near y = {:?}",
        y.as_slice()
    ))
}

fn finalize(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
    outer_stages: usize,
    newton_iters: usize,
    duality_met: bool,
) -> Result<SolveResult> {
    let point = eval_point(network, y);
    let w = reformulation::reduce_w(network, &point.x)?;
    let report = reformulation::feasibility(network, measures, y, 0.0);
    if !report.feasible {
        return Err(Error::Numerical(
            "solver returned a point outside the feasible region".into(),
        ));
    }

    let mut boundary_warnings: Vec<String> = report
        .binding
        .iter()
        .map(|b| match b.kind {
            ConstraintKind::LinkCapacity => format!(
                "link '{}' capacity nearly active (relative slack {:.3e})",
                b.id, b.relative_slack
            ),
            ConstraintKind::RouteThreshold => format!(
                "route '{}' Werner threshold nearly active (relative margin {:.3e})",
                b.id, b.relative_slack
            ),
        })
        .collect();
    for i in 0..network.num_routes() {
        if let Some(cutoff) = measures[i].restricted_cutoff() {
            if point.u[i] - cutoff < CUTOFF_WARN_TOL {
                boundary_warnings.push(format!(
                    "route '{}' sits at the restricted-domain cutoff: u = {:.6} vs cutoff {}",
                    network.routes()[i].id,
                    point.u[i],
                    cutoff
                ));
            }
        }
    }

    let gradient = reformulation::objective_gradient(network, measures, y)?;
    let grad_norm = gradient.amax();
    let objective = reformulation::objective(network, measures, y)?;

    let status = if !duality_met {
        SolveStatus::MaxIterations
    } else if !report.binding.is_empty() {
        SolveStatus::BoundarySupremum
    } else if grad_norm <= CONVERGED_GRAD_TOL {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };

    let mut fidelity = Vec::with_capacity(network.num_routes());
    let mut route_utility = Vec::with_capacity(network.num_routes());
    let mut network_utility = 1.0;
    for i in 0..network.num_routes() {
        fidelity.push(fidelity_from_werner(point.u[i])?);
        let util = point.x[i] * measures[i].value(point.u[i])?;
        route_utility.push(util);
        network_utility *= util;
    }

    Ok(SolveResult {
        y: point.y.clone(),
        x: point.x.clone(),
        w,
        u: point.u.clone(),
        fidelity,
        route_utility,
        network_utility,
        objective,
        certificate: convexity::scenario_class(measures),
        status,
        diagnostics: Diagnostics {
            outer_stages,
            newton_iters,
            final_gradient_norm: grad_norm,
            boundary_warnings,
        },
    })
}

/// Stationarity residual at `y`.
///
/// With no constraint near-active this is the max-norm of the objective
/// gradient; otherwise the norm of the Lagrangian gradient with
/// least-squares multipliers on the near-active constraints.
pub fn kkt_residual(
    network: &NetworkModel,
    measures: &[MeasureModel],
    y: &[f64],
) -> Result<f64> {
    let eval = reformulation::evaluate(network, measures, y)?;
    let report = reformulation::feasibility(network, measures, y, 0.0);
    if report.binding.is_empty() {
        return Ok(eval.gradient.amax());
    }

    let quantities = route_quantities(network, y)?;
    let point = &quantities.point;
    let r = network.num_routes();
    let mut columns: Vec<DVector<f64>> = Vec::new();
    for (j, &slack) in report.slacks.iter().enumerate() {
        if slack < reformulation::BINDING_RTOL * network.d(j) {
            // Gradient of <A_j, e^y> - d_j.
            let mut col = DVector::zeros(r);
            for &k in network.routes_of_link(j) {
                col[k] = point.x[k];
            }
            columns.push(col);
        }
    }
    for (i, &margin) in report.margins.iter().enumerate() {
        if margin < reformulation::BINDING_RTOL * (1.0 - report.thresholds[i]) {
            // Gradient of threshold_i - u_i(y).
            columns.push(-&quantities.du[i]);
        }
    }
    let jt = DMatrix::from_columns(&columns);
    let svd = jt.clone().svd(true, true);
    let multipliers = svd
        .solve(&(-&eval.gradient), 1e-12)
        .map_err(|e| Error::Numerical(format!("least-squares multipliers failed: {e}")))?;
    Ok((eval.gradient + jt * multipliers).amax())
}

/// Best-of-`multistart_count` solve from log-uniformly scaled-down copies of
/// the interior point; start 0 is the unperturbed interior point itself.
pub fn multistart_solve(
    network: &NetworkModel,
    measures: &[MeasureModel],
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    let y0 = find_interior_point(network, measures)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<SolveResult> = None;
    let mut failures = Vec::new();
    for start in 0..config.multistart_count {
        let y_start: Vec<f64> = if start == 0 {
            y0.clone()
        } else {
            // Scaling rates down keeps strict feasibility.
            y0.iter()
                .map(|&v| v + rng.gen_range(-(100.0f64).ln()..0.0))
                .collect()
        };
        match solve_from(network, measures, config, &y_start) {
            Ok(result) => {
                let better = match &best {
                    Some(b) => result.objective < b.objective,
                    None => true,
                };
                if better {
                    best = Some(result);
                }
            }
            Err(e) => failures.push(format!("start {start}: {e}")),
        }
    }
    best.ok_or_else(|| {
        Error::Numerical(format!("all multistart runs failed: {}", failures.join("; ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::BuiltinMeasure;
    use crate::network::{LinkSpec, RouteSpec};

    fn measures_for(network: &NetworkModel) -> Vec<MeasureModel> {
        network
            .routes()
            .iter()
            .map(|r| MeasureModel::builtin_by_id(&r.measure_id).expect("builtin measure"))
            .collect()
    }

    fn single_link(d: f64, measure: &str) -> NetworkModel {
        NetworkModel::build(
            vec![LinkSpec::new("l1", d)],
            vec![RouteSpec::new("r1", vec!["l1".into()], measure)],
        )
        .unwrap()
    }

    #[test]
    fn interior_point_follows_halving_rule() {
        // d = 150, one sk route: x starts at 75 and halves until the margin
        // rule u >= (1 + c)/2 ~ 0.890 holds, landing on 9.375.
        let net = single_link(150.0, "sk");
        let ms = measures_for(&net);
        let y0 = find_interior_point(&net, &ms).unwrap();
        assert!((y0[0].exp() - 9.375).abs() < 1e-12);
        let report = reformulation::feasibility(&net, &ms, &y0, 0.0);
        assert!(report.feasible);
        let c = ms[0].zero_threshold();
        let u = eval_point(&net, &y0).u[0];
        assert!(u >= (1.0 + c) / 2.0);
    }

    #[test]
    fn single_neg_route_closed_form() {
        // Stationary point of ln x + ln((2 - 3x/d)/4) is x = d/3.
        let net = single_link(3.0, "neg");
        let ms = measures_for(&net);
        let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Converged);
        assert!((result.x[0] - 1.0).abs() < 1e-6, "x = {}", result.x[0]);
        assert!((result.w[0] - 2.0 / 3.0).abs() < 1e-6);
        assert!((result.network_utility - 0.25).abs() < 1e-8);
        assert!(result.diagnostics.final_gradient_norm <= 1e-6);
    }

    #[test]
    fn symmetric_routes_get_equal_rates() {
        let links: Vec<LinkSpec> = (0..3).map(|k| LinkSpec::new(format!("l{k}"), 50.0)).collect();
        let routes: Vec<RouteSpec> = (0..3)
            .map(|k| RouteSpec::new(format!("r{k}"), vec![format!("l{k}")], "sk"))
            .collect();
        let net = NetworkModel::build(links, routes).unwrap();
        let ms = measures_for(&net);
        let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Converged);
        for k in 1..3 {
            assert!((result.x[k] - result.x[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn different_starts_agree() {
        let net = NetworkModel::build(
            vec![
                LinkSpec::new("a", 60.0),
                LinkSpec::new("b", 90.0),
                LinkSpec::new("c", 70.0),
            ],
            vec![
                RouteSpec::new("r1", vec!["a".into(), "b".into()], "sk"),
                RouteSpec::new("r2", vec!["b".into(), "c".into()], "de"),
            ],
        )
        .unwrap();
        let ms = measures_for(&net);
        let config = SolverConfig::default();
        let y0 = find_interior_point(&net, &ms).unwrap();
        let result1 = solve_from(&net, &ms, &config, &y0).unwrap();
        let shifted: Vec<f64> = y0.iter().map(|v| v - 2.5).collect();
        let result2 = solve_from(&net, &ms, &config, &shifted).unwrap();
        assert!((result1.objective - result2.objective).abs() < 1e-8);
        for k in 0..2 {
            assert!((result1.y[k] - result2.y[k]).abs() < 1e-5);
        }
    }

    #[test]
    fn capacity_increase_never_hurts() {
        let base = |d_mid: f64| {
            NetworkModel::build(
                vec![
                    LinkSpec::new("a", 40.0),
                    LinkSpec::new("b", d_mid),
                    LinkSpec::new("c", 55.0),
                ],
                vec![
                    RouteSpec::new("r1", vec!["a".into(), "b".into()], "sk"),
                    RouteSpec::new("r2", vec!["b".into(), "c".into()], "sk"),
                ],
            )
            .unwrap()
        };
        let config = SolverConfig::default();
        let net1 = base(70.0);
        let net2 = base(77.0);
        let u1 = solve(&net1, &measures_for(&net1), &config).unwrap().network_utility;
        let u2 = solve(&net2, &measures_for(&net2), &config).unwrap().network_utility;
        assert!(u2 >= u1 - 1e-10);
    }

    #[test]
    fn succ_route_stops_at_cutoff() {
        let net = single_link(10.0, "succ");
        let ms = measures_for(&net);
        let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::BoundarySupremum);
        assert!(!result.diagnostics.boundary_warnings.is_empty());
        assert!((result.u[0] - 0.5).abs() < 1e-3, "u = {}", result.u[0]);
    }

    #[test]
    fn kkt_residual_interior_and_boundary() {
        let net = single_link(3.0, "neg");
        let ms = measures_for(&net);
        let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
        assert!(kkt_residual(&net, &ms, &result.y).unwrap() <= 1e-6);

        // Boundary supremum: the raw gradient does not vanish but the
        // Lagrangian residual with the active cutoff does.
        let net = single_link(10.0, "succ");
        let ms = measures_for(&net);
        let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
        let raw = reformulation::objective_gradient(&net, &ms, &result.y).unwrap();
        assert!(raw.amax() > 1e-3);
        assert!(kkt_residual(&net, &ms, &result.y).unwrap() <= 1e-5);
    }

    #[test]
    fn multistart_single_start_is_plain_solve() {
        let net = single_link(3.0, "neg");
        let ms = measures_for(&net);
        let config = SolverConfig { multistart_count: 1, ..SolverConfig::default() };
        let a = solve(&net, &ms, &config).unwrap();
        let b = multistart_solve(&net, &ms, &config).unwrap();
        assert_eq!(a.y, b.y);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn multistart_matches_solve_on_certified() {
        let net = NetworkModel::build(
            vec![LinkSpec::new("a", 30.0), LinkSpec::new("b", 45.0)],
            vec![
                RouteSpec::new("r1", vec!["a".into()], "sk"),
                RouteSpec::new("r2", vec!["b".into()], "de"),
            ],
        )
        .unwrap();
        let ms = measures_for(&net);
        let config = SolverConfig { multistart_count: 4, seed: 7, ..SolverConfig::default() };
        let a = solve(&net, &ms, &config).unwrap();
        let b = multistart_solve(&net, &ms, &config).unwrap();
        assert!((a.objective - b.objective).abs() < 1e-8);
    }

    #[test]
    fn config_validation() {
        let mut config = SolverConfig::default();
        config.backtrack_alpha = 0.9;
        assert!(config.validate().is_err());
        let mut config = SolverConfig::default();
        config.barrier_mu = 1.0;
        assert!(config.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }
}
