//! Certificates for the altering distance psi and the control pair (alpha, beta).

use jungck::control::{
    check_altering_distance, check_control_pair, uniform_grid, FunctionDescriptor, DEFAULT_DELTA, DEFAULT_PROBES,
};
use jungck::expr::Expr;

fn show(cert: &jungck::control::FunctionCertificate) {
    println!("{}: pass={} analytic={}", cert.subject, cert.pass, cert.analytic);
    for m in &cert.margins {
        println!("  {:<32} {:>12.6e} (holds: {})", m.name, m.value, m.holds());
    }
    for f in &cert.failures {
        println!("  failure: {f}");
    }
}

fn main() {
    let grid = uniform_grid(4.0, 256);
    show(&check_altering_distance(&FunctionDescriptor::Ratio, &grid).unwrap());
    show(&check_altering_distance(&FunctionDescriptor::Constant(1.0), &grid).unwrap());

    // expression-defined controls go through the sampled checks
    let alpha = FunctionDescriptor::Expr(Expr::control("0.5/(1+t)").unwrap());
    let beta = FunctionDescriptor::Expr(Expr::control("0.3*t/(1+t)").unwrap());
    show(&check_control_pair(&alpha, &beta, &grid, DEFAULT_DELTA, DEFAULT_PROBES).unwrap());

    let too_big = FunctionDescriptor::Constant(0.6);
    show(&check_control_pair(&too_big, &too_big, &grid, DEFAULT_DELTA, DEFAULT_PROBES).unwrap());
}
