//! Links, routes and the binary link-route incidence structure.
//!
//! A link is characterised by a rate constant `d` (entangled pairs per second
//! per unit of `1 - w`, where `w` is the link Werner parameter), optionally
//! derived from physical fibre parameters. A route is an ordered set of links
//! carrying one application flow. The incidence matrix `A` has `a[j][i] = 1`
//! iff route `i` traverses link `j`; only set membership enters the math.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Physical fibre parameters from which a link rate constant can be derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalLinkParams {
    /// Fibre length in km.
    pub length_km: f64,
    /// Non-fibre inefficiency coefficient, in (0, 1).
    pub kappa: f64,
    /// Period between entanglement generation attempts, in seconds.
    pub attempt_period_s: f64,
}

impl PhysicalLinkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::Validation(format!(
                "kappa must lie in (0, 1), got {}",
                self.kappa
            )));
        }
        if !(self.length_km >= 0.0) {
            return Err(Error::Validation(format!(
                "length_km must be non-negative, got {}",
                self.length_km
            )));
        }
        if !(self.attempt_period_s > 0.0) {
            return Err(Error::Validation(format!(
                "attempt_period_s must be positive, got {}",
                self.attempt_period_s
            )));
        }
        Ok(())
    }
}

/// Rate constant `d = 3*kappa*eta / (2*T)` with transmissivity
/// `eta = 10^(-0.02 * length_km)`.
pub fn derive_rate_constant(params: &PhysicalLinkParams) -> Result<f64> {
    params.validate()?;
    let eta = 10f64.powf(-0.02 * params.length_km);
    Ok(3.0 * params.kappa * eta / (2.0 * params.attempt_period_s))
}

/// Maximum generation rate of a link producing Werner pairs with parameter `w`.
pub fn link_capacity(d: f64, w: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("rate constant must be positive, got {d}")));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("Werner parameter must lie in [0, 1], got {w}")));
    }
    Ok(d * (1.0 - w))
}

/// A single link: identifier, rate constant, optional physical source data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkSpec {
    pub id: String,
    /// Pairs per second per unit of (1 - w).
    pub d: f64,
    /// Present when `d` was derived from (or cross-checked against) fibre data.
    pub physical: Option<PhysicalLinkParams>,
}

/// Relative tolerance for agreement between a given `d` and one derived from
/// physical parameters.
const D_AGREEMENT_RTOL: f64 = 1e-6;

impl LinkSpec {
    pub fn new(id: impl Into<String>, d: f64) -> Self {
        LinkSpec { id: id.into(), d, physical: None }
    }

    pub fn from_physical(id: impl Into<String>, params: PhysicalLinkParams) -> Result<Self> {
        let d = derive_rate_constant(&params)?;
        Ok(LinkSpec { id: id.into(), d, physical: Some(params) })
    }

    /// Build from both a direct `d` and physical parameters; they must agree.
    pub fn with_both(id: impl Into<String>, d: f64, params: PhysicalLinkParams) -> Result<Self> {
        let id = id.into();
        let derived = derive_rate_constant(&params)?;
        if (d - derived).abs() > D_AGREEMENT_RTOL * derived.abs() {
            return Err(Error::Validation(format!(
                "link '{id}': d = {d} disagrees with value {derived} derived from physical parameters"
            )));
        }
        Ok(LinkSpec { id, d, physical: Some(params) })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0) {
            return Err(Error::Validation(format!(
                "link '{}': d must be positive, got {}",
                self.id, self.d
            )));
        }
        if let Some(p) = &self.physical {
            p.validate()?;
            let derived = derive_rate_constant(p)?;
            if (self.d - derived).abs() > D_AGREEMENT_RTOL * derived.abs() {
                return Err(Error::Validation(format!(
                    "link '{}': d = {} disagrees with derived value {}",
                    self.id, self.d, derived
                )));
            }
        }
        Ok(())
    }
}

/// A route: an ordered, duplicate-free list of link ids plus the id of the
/// entanglement measure expressing its utility.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteSpec {
    pub id: String,
    pub link_ids: Vec<String>,
    pub measure_id: String,
}

impl RouteSpec {
    pub fn new(
        id: impl Into<String>,
        link_ids: Vec<String>,
        measure_id: impl Into<String>,
    ) -> Self {
        RouteSpec { id: id.into(), link_ids, measure_id: measure_id.into() }
    }
}

/// Immutable network: links, routes and the incidence matrix between them.
///
/// Links referenced by no route are dropped at build time, so every row and
/// every column of the incidence matrix contains at least one 1.
#[derive(Debug, Clone)]
pub struct NetworkModel {
    links: Vec<LinkSpec>,
    routes: Vec<RouteSpec>,
    /// `incidence[j][i] = 1` iff route `i` contains link `j`.
    incidence: Vec<Vec<u8>>,
    /// Per-route link indices, in route declaration order.
    links_of_route: Vec<Vec<usize>>,
    /// Per-link route indices.
    routes_of_link: Vec<Vec<usize>>,
}

/// Validate links and routes and assemble the incidence structure.
pub fn build_network(links: Vec<LinkSpec>, routes: Vec<RouteSpec>) -> Result<NetworkModel> {
    NetworkModel::build(links, routes)
}

impl NetworkModel {
    pub fn build(links: Vec<LinkSpec>, routes: Vec<RouteSpec>) -> Result<Self> {
        if routes.is_empty() {
            return Err(Error::Validation("network must declare at least one route".into()));
        }
        for link in &links {
            link.validate()?;
        }
        let mut seen = std::collections::HashSet::new();
        let dup: Vec<&str> = links
            .iter()
            .filter(|l| !seen.insert(l.id.as_str()))
            .map(|l| l.id.as_str())
            .collect();
        if !dup.is_empty() {
            return Err(Error::Validation(format!("duplicate link ids: {}", dup.join(", "))));
        }
        seen.clear();
        let dup: Vec<&str> = routes
            .iter()
            .filter(|r| !seen.insert(r.id.as_str()))
            .map(|r| r.id.as_str())
            .collect();
        if !dup.is_empty() {
            return Err(Error::Validation(format!("duplicate route ids: {}", dup.join(", "))));
        }

        let index_of: std::collections::HashMap<&str, usize> =
            links.iter().enumerate().map(|(j, l)| (l.id.as_str(), j)).collect();

        let mut used = vec![false; links.len()];
        let mut resolved: Vec<Vec<usize>> = Vec::with_capacity(routes.len());
        for route in &routes {
            if route.link_ids.is_empty() {
                return Err(Error::Validation(format!("route '{}' has no links", route.id)));
            }
            let mut link_idx = Vec::with_capacity(route.link_ids.len());
            let mut in_route = std::collections::HashSet::new();
            for id in &route.link_ids {
                let Some(&j) = index_of.get(id.as_str()) else {
                    return Err(Error::Validation(format!(
                        "route '{}' references unknown link '{}'",
                        route.id, id
                    )));
                };
                if !in_route.insert(j) {
                    return Err(Error::Validation(format!(
                        "route '{}' lists link '{}' more than once",
                        route.id, id
                    )));
                }
                used[j] = true;
                link_idx.push(j);
            }
            resolved.push(link_idx);
        }

        // Drop unreferenced links, preserving declaration order.
        let mut remap = vec![usize::MAX; links.len()];
        let mut kept = Vec::new();
        for (j, link) in links.into_iter().enumerate() {
            if used[j] {
                remap[j] = kept.len();
                kept.push(link);
            }
        }
        let links_of_route: Vec<Vec<usize>> = resolved
            .into_iter()
            .map(|idx| idx.into_iter().map(|j| remap[j]).collect())
            .collect();

        let l = kept.len();
        let r = routes.len();
        let mut incidence = vec![vec![0u8; r]; l];
        let mut routes_of_link = vec![Vec::new(); l];
        for (i, link_idx) in links_of_route.iter().enumerate() {
            for &j in link_idx {
                incidence[j][i] = 1;
                routes_of_link[j].push(i);
            }
        }

        Ok(NetworkModel { links: kept, routes, incidence, links_of_route, routes_of_link })
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_routes(&self) -> usize {
        self.routes.len()
    }

    pub fn links(&self) -> &[LinkSpec] {
        &self.links
    }

    pub fn routes(&self) -> &[RouteSpec] {
        &self.routes
    }

    pub fn incidence(&self) -> &[Vec<u8>] {
        &self.incidence
    }

    /// Rate constant of link `j`.
    pub fn d(&self, j: usize) -> f64 {
        self.links[j].d
    }

    pub fn links_of_route(&self, i: usize) -> &[usize] {
        &self.links_of_route[i]
    }

    pub fn routes_of_link(&self, j: usize) -> &[usize] {
        &self.routes_of_link[j]
    }

    /// Total rate loaded onto link `j` by the allocation `x`.
    pub fn link_load(&self, j: usize, x: &[f64]) -> f64 {
        self.routes_of_link[j].iter().map(|&i| x[i]).sum()
    }
}
