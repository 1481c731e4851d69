//! Brute-force verification of optima on small instances.
//!
//! Searches the rate-only canonical formulation (link Werner parameters
//! eliminated by the capacity-saturating choice) on a log-uniform grid per
//! route. Exponential in the route count, so capped at three routes; only a
//! lower bound on the maximum utility, but a tight one once the grid is fine
//! enough.

use crate::error::{Error, Result};
use crate::measures::MeasureModel;
use crate::network::NetworkModel;
use crate::reformulation::{canonical_objective, reduce_w};

/// Number of routes the oracle accepts.
pub const MAX_ORACLE_ROUTES: usize = 3;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Grid points per route dimension.
    pub grid_points_per_dim: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { grid_points_per_dim: 400 }
    }
}

/// Best grid point found by [`grid_search`].
#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub x: Vec<f64>,
    pub utility: f64,
    /// Feasible points evaluated.
    pub evaluated: usize,
    /// Grid points skipped for violating a link capacity.
    pub skipped: usize,
}

/// Exhaustive log-uniform grid search over the rate vector.
///
/// Each route's axis spans `(1e-6 * bound, bound)` where `bound` is the
/// smallest rate constant among its links. Capacity-violating combinations
/// are skipped; zero-utility points are feasible and count as evaluated.
pub fn grid_search(
    network: &NetworkModel,
    measures: &[MeasureModel],
    config: &OracleConfig,
) -> Result<GridSearchResult> {
    let r = network.num_routes();
    if r > MAX_ORACLE_ROUTES {
        return Err(Error::UnsupportedSize(format!(
            "grid search supports at most {MAX_ORACLE_ROUTES} routes, scenario has {r}"
        )));
    }
    if config.grid_points_per_dim < 2 {
        return Err(Error::Validation(
            "grid_points_per_dim must be at least 2".into(),
        ));
    }

    let axes: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            let bound = network
                .links_of_route(i)
                .iter()
                .map(|&j| network.d(j))
                .fold(f64::INFINITY, f64::min);
            log_uniform_axis(1e-6 * bound, bound, config.grid_points_per_dim)
        })
        .collect();

    let mut best_x: Option<Vec<f64>> = None;
    let mut best_utility = f64::NEG_INFINITY;
    let mut evaluated = 0usize;
    let mut skipped = 0usize;

    let mut index = vec![0usize; r];
    let mut x = vec![0.0f64; r];
    loop {
        for i in 0..r {
            x[i] = axes[i][index[i]];
        }
        match reduce_w(network, &x) {
            Ok(w) => {
                // Thresholds only zero the utility; they do not exclude the point.
                let utility = canonical_objective(network, measures, &x, &w)?;
                evaluated += 1;
                if utility > best_utility {
                    best_utility = utility;
                    best_x = Some(x.clone());
                }
            }
            Err(_) => skipped += 1,
        }

        // Row-major advance, so ties resolve to the earliest point.
        let mut dim = r;
        loop {
            if dim == 0 {
                return Ok(GridSearchResult {
                    x: best_x.ok_or_else(|| {
                        Error::Numerical("no feasible grid point found".into())
                    })?,
                    utility: best_utility,
                    evaluated,
                    skipped,
                });
            }
            dim -= 1;
            index[dim] += 1;
            if index[dim] < axes[dim].len() {
                break;
            }
            index[dim] = 0;
        }
    }
}

fn log_uniform_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            // Keep the top of the axis strictly below the bound.
            (ln_lo + t * (ln_hi - ln_lo)).exp().min(hi * (1.0 - 1e-12))
        })
        .collect()
}
