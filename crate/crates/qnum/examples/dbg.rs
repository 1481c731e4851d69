use qnum::network::{LinkSpec, NetworkModel, RouteSpec};
use qnum::measures::MeasureModel;
use qnum::solver::{solve, SolverConfig};
use qnum::reformulation;

fn main() {
    let net = NetworkModel::build(
        vec![LinkSpec::new("l1", 3.0)],
        vec![RouteSpec::new("r1", vec!["l1".into()], "neg")],
    ).unwrap();
    let ms = vec![MeasureModel::builtin_by_id("neg").unwrap()];
    let result = solve(&net, &ms, &SolverConfig::default()).unwrap();
    println!("status {:?} x {:?} u {:?} obj {}", result.status, result.x, result.u, result.objective);
    println!("diag: {:?}", result.diagnostics);
    let g = reformulation::objective_gradient(&net, &ms, &result.y).unwrap();
    println!("grad {:?}", g);
}
