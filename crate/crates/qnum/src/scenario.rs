//! Scenario files: JSON descriptions of a network plus per-route measures
//! and optional solver overrides.
//!
//! ```json
//! {
//!   "links":  [{"id": "a", "d": 89.84},
//!              {"id": "b", "length_km": 30.6, "kappa": 0.1, "attempt_period_s": 1e-3}],
//!   "routes": [{"id": "r1", "measure": "sk", "links": ["a", "b"]}],
//!   "solver": {"tol": 1e-9, "seed": 0}
//! }
//! ```
//!
//! A link may give `d` directly, give the physical parameters it is derived
//! from, or both (they must then agree to 1e-6 relative). Unknown fields are
//! collected as warnings and rejected in strict mode.

use crate::error::{Error, Result};
use crate::measures::MeasureModel;
use crate::network::{LinkSpec, NetworkModel, PhysicalLinkParams, RouteSpec};
use crate::solver::SolverConfig;
use serde_json::{Map, Value};

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub network: NetworkModel,
    /// One measure per route, aligned with `network.routes()`.
    pub measures: Vec<MeasureModel>,
    pub solver: SolverConfig,
}

/// Warnings accumulated while parsing (unknown fields outside strict mode).
pub type Warnings = Vec<String>;

/// Parse a scenario from a JSON string.
pub fn parse_scenario(json: &str, strict: bool) -> Result<(Scenario, Warnings)> {
    let value: Value = serde_json::from_str(json)
        .map_err(|e| Error::Validation(format!("scenario is not valid JSON: {e}")))?;
    scenario_from_value(&value, strict)
}

/// Load a scenario from a file path.
pub fn load_scenario(path: &std::path::Path, strict: bool) -> Result<(Scenario, Warnings)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Validation(format!("cannot read scenario '{}': {e}", path.display()))
    })?;
    parse_scenario(&text, strict)
}

fn scenario_from_value(value: &Value, strict: bool) -> Result<(Scenario, Warnings)> {
    let mut warnings = Vec::new();
    let top = expect_object(value, "scenario")?;
    check_fields(top, &["links", "routes", "solver"], "scenario", strict, &mut warnings)?;

    let links_value = top
        .get("links")
        .ok_or_else(|| Error::Validation("scenario is missing \"links\"".into()))?;
    let routes_value = top
        .get("routes")
        .ok_or_else(|| Error::Validation("scenario is missing \"routes\"".into()))?;

    let mut links = Vec::new();
    for (idx, entry) in expect_array(links_value, "links")?.iter().enumerate() {
        let obj = expect_object(entry, &format!("links[{idx}]"))?;
        check_fields(
            obj,
            &["id", "d", "length_km", "kappa", "attempt_period_s"],
            &format!("links[{idx}]"),
            strict,
            &mut warnings,
        )?;
        let id = string_field(obj, "id", &format!("links[{idx}]"))?;
        let d = optional_number(obj, "d", &id)?;
        let physical = physical_params(obj, &id)?;
        let link = match (d, physical) {
            (Some(d), None) => LinkSpec::new(id, d),
            (None, Some(p)) => LinkSpec::from_physical(id, p)?,
            (Some(d), Some(p)) => LinkSpec::with_both(id, d, p)?,
            (None, None) => {
                return Err(Error::Validation(format!(
                    "link '{id}' needs either d or the full physical parameters \
                     (length_km, kappa, attempt_period_s)"
                )))
            }
        };
        links.push(link);
    }

    let mut routes = Vec::new();
    let mut measures = Vec::new();
    for (idx, entry) in expect_array(routes_value, "routes")?.iter().enumerate() {
        let obj = expect_object(entry, &format!("routes[{idx}]"))?;
        check_fields(
            obj,
            &["id", "measure", "links"],
            &format!("routes[{idx}]"),
            strict,
            &mut warnings,
        )?;
        let id = string_field(obj, "id", &format!("routes[{idx}]"))?;
        let measure_id = string_field(obj, "measure", &id)?;
        let measure = MeasureModel::builtin_by_id(&measure_id).ok_or_else(|| {
            Error::Validation(format!(
                "route '{id}' uses unknown measure '{measure_id}' \
                 (builtins: sk, de, neg, succ)"
            ))
        })?;
        let link_ids = expect_array(
            obj.get("links")
                .ok_or_else(|| Error::Validation(format!("route '{id}' is missing \"links\"")))?,
            &format!("route '{id}' links"),
        )?
        .iter()
        .map(|v| {
            v.as_str().map(String::from).ok_or_else(|| {
                Error::Validation(format!("route '{id}': link ids must be strings"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
        routes.push(RouteSpec::new(id, link_ids, measure_id));
        measures.push(measure);
    }

    let solver = match top.get("solver") {
        None => SolverConfig::default(),
        Some(v) => {
            let obj = expect_object(v, "solver")?;
            check_fields(
                obj,
                &[
                    "tol",
                    "newton_tol",
                    "barrier_t0",
                    "barrier_mu",
                    "backtrack_alpha",
                    "backtrack_beta",
                    "max_outer",
                    "max_newton",
                    "feasibility_margin",
                    "multistart_count",
                    "seed",
                ],
                "solver",
                strict,
                &mut warnings,
            )?;
            let config: SolverConfig = serde_json::from_value(v.clone())
                .map_err(|e| Error::Validation(format!("invalid solver settings: {e}")))?;
            config.validate()?;
            config
        }
    };

    let network = NetworkModel::build(links, routes)?;
    Ok((Scenario { network, measures, solver }, warnings))
}

/// Serialise a scenario back to the JSON schema (used for round-trips).
pub fn scenario_to_json(scenario: &Scenario) -> Value {
    let links: Vec<Value> = scenario
        .network
        .links()
        .iter()
        .map(|l| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(l.id.clone()));
            obj.insert("d".into(), Value::from(l.d));
            if let Some(p) = &l.physical {
                obj.insert("length_km".into(), Value::from(p.length_km));
                obj.insert("kappa".into(), Value::from(p.kappa));
                obj.insert("attempt_period_s".into(), Value::from(p.attempt_period_s));
            }
            Value::Object(obj)
        })
        .collect();
    let routes: Vec<Value> = scenario
        .network
        .routes()
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(r.id.clone()));
            obj.insert("measure".into(), Value::from(r.measure_id.clone()));
            obj.insert(
                "links".into(),
                Value::from(r.link_ids.iter().cloned().collect::<Vec<_>>()),
            );
            Value::Object(obj)
        })
        .collect();
    let mut top = Map::new();
    top.insert("links".into(), Value::from(links));
    top.insert("routes".into(), Value::from(routes));
    Value::Object(top)
}

fn expect_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Validation(format!("{what} must be a JSON object")))
}

fn expect_array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| Error::Validation(format!("{what} must be a JSON array")))
}

fn string_field(obj: &Map<String, Value>, key: &str, context: &str) -> Result<String> {
    obj.get(key)
        .and_then(Value::as_str)
        .map(String::from)
        .ok_or_else(|| Error::Validation(format!("{context} is missing string field \"{key}\"")))
}

fn optional_number(obj: &Map<String, Value>, key: &str, context: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v.as_f64().map(Some).ok_or_else(|| {
            Error::Validation(format!("{context}: field \"{key}\" must be a number"))
        }),
    }
}

fn physical_params(obj: &Map<String, Value>, id: &str) -> Result<Option<PhysicalLinkParams>> {
    let length_km = optional_number(obj, "length_km", id)?;
    let kappa = optional_number(obj, "kappa", id)?;
    let attempt_period_s = optional_number(obj, "attempt_period_s", id)?;
    match (length_km, kappa, attempt_period_s) {
        (None, None, None) => Ok(None),
        (Some(length_km), Some(kappa), Some(attempt_period_s)) => {
            Ok(Some(PhysicalLinkParams { length_km, kappa, attempt_period_s }))
        }
        _ => Err(Error::Validation(format!(
            "link '{id}': physical parameters are all-or-none \
             (length_km, kappa, attempt_period_s)"
        ))),
    }
}

fn check_fields(
    obj: &Map<String, Value>,
    known: &[&str],
    context: &str,
    strict: bool,
    warnings: &mut Warnings,
) -> Result<()> {
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            let message = format!("{context}: unknown field \"{key}\"");
            if strict {
                return Err(Error::Validation(message));
            }
            warnings.push(message);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "links": [{"id": "a", "d": 150.0}],
        "routes": [{"id": "r1", "measure": "sk", "links": ["a"]}]
    }"#;

    #[test]
    fn parses_minimal_scenario() {
        let (scenario, warnings) = parse_scenario(MINIMAL, true).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(scenario.network.num_links(), 1);
        assert_eq!(scenario.measures[0].id(), "sk");
        assert_eq!(scenario.solver.tol, 1e-9);
    }

    #[test]
    fn derives_d_from_physical_params() {
        let json = r#"{
            "links": [{"id": "a", "length_km": 0.0, "kappa": 0.1, "attempt_period_s": 1e-3}],
            "routes": [{"id": "r1", "measure": "de", "links": ["a"]}]
        }"#;
        let (scenario, _) = parse_scenario(json, true).unwrap();
        assert!((scenario.network.d(0) - 150.0).abs() < 1e-9);
    }

    #[test]
    fn both_d_and_physical_must_agree() {
        let json = r#"{
            "links": [{"id": "a", "d": 120.0,
                       "length_km": 0.0, "kappa": 0.1, "attempt_period_s": 1e-3}],
            "routes": [{"id": "r1", "measure": "sk", "links": ["a"]}]
        }"#;
        let err = parse_scenario(json, true).unwrap_err();
        assert!(err.to_string().contains("disagrees"));
    }

    #[test]
    fn missing_rate_information_is_an_error() {
        let json = r#"{
            "links": [{"id": "a"}],
            "routes": [{"id": "r1", "measure": "sk", "links": ["a"]}]
        }"#;
        assert!(parse_scenario(json, false).is_err());
    }

    #[test]
    fn unknown_fields_warn_or_reject() {
        let json = r#"{
            "links": [{"id": "a", "d": 10.0, "color": "blue"}],
            "routes": [{"id": "r1", "measure": "neg", "links": ["a"]}]
        }"#;
        let (_, warnings) = parse_scenario(json, false).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("color"));
        let err = parse_scenario(json, true).unwrap_err();
        assert!(err.to_string().contains("color"));
    }

    #[test]
    fn unknown_measure_is_named() {
        let json = r#"{
            "links": [{"id": "a", "d": 10.0}],
            "routes": [{"id": "r1", "measure": "mystery", "links": ["a"]}]
        }"#;
        let err = parse_scenario(json, true).unwrap_err();
        assert!(err.to_string().contains("mystery"));
    }

    #[test]
    fn solver_overrides_apply() {
        let json = r#"{
            "links": [{"id": "a", "d": 10.0}],
            "routes": [{"id": "r1", "measure": "sk", "links": ["a"]}],
            "solver": {"tol": 1e-7, "seed": 42, "multistart_count": 3}
        }"#;
        let (scenario, _) = parse_scenario(json, true).unwrap();
        assert_eq!(scenario.solver.tol, 1e-7);
        assert_eq!(scenario.solver.seed, 42);
        assert_eq!(scenario.solver.multistart_count, 3);
        // Untouched fields keep their defaults.
        assert_eq!(scenario.solver.max_outer, 60);
    }

    #[test]
    fn roundtrip_preserves_incidence() {
        let json = r#"{
            "links": [{"id": "a", "d": 10.0}, {"id": "b", "d": 12.0}, {"id": "c", "d": 9.0}],
            "routes": [
                {"id": "r1", "measure": "sk", "links": ["a", "b"]},
                {"id": "r2", "measure": "neg", "links": ["b", "c"]}
            ]
        }"#;
        let (scenario, _) = parse_scenario(json, true).unwrap();
        let serialized = scenario_to_json(&scenario).to_string();
        let (reparsed, _) = parse_scenario(&serialized, true).unwrap();
        assert_eq!(scenario.network.incidence(), reparsed.network.incidence());
    }
}
