//! Numerical checks with sampled coupled cell systems: flow invariance,
//! agreement with the quotient dynamics, and the linear span of a class.

use syncspace::dynamics::{
    certify_flow_invariance, linear_span_check, restriction_consistency, SimulationOptions,
};
use syncspace::{parse_partition, Network, SystemClass};

fn main() -> syncspace::Result<()> {
    let net = Network::from_json_file(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/ex_qutro.json"
    ))?;
    let opts = SimulationOptions {
        trials: 3,
        horizon: 5.0,
        ..SimulationOptions::default()
    };

    for (labels, class) in [
        ("1,1,2,-2", SystemClass::Godd),
        ("1,1,1,1", SystemClass::G0),
        ("1,1,1,1", SystemClass::G),
        ("0,1,-1,1", SystemClass::Geo),
        ("0,1,-1,1", SystemClass::Godd),
    ] {
        let p = parse_partition(labels, net.n())?;
        let r = certify_flow_invariance(&net, &p, class, &opts)?;
        println!(
            "{p} under {class}: {} (max residual {:.2e})",
            if r.pass { "invariant" } else { "leaves" },
            r.max_residual
        );
    }

    let p = parse_partition("1,2,3,-3", 4)?;
    let r = restriction_consistency(&net, &p, SystemClass::Gl, &opts)?;
    println!(
        "linear symbolic quotient reproduces the flow on {p}: {} ({:.2e})",
        r.pass, r.max_deviation
    );

    let span = linear_span_check(&net, SystemClass::Gl, 7)?;
    println!(
        "linear member = {:?} * {:?}, residual {:.2e}",
        span.coefficients, span.basis, span.residual
    );
    Ok(())
}
