//! Crossing indices for the (non-Cauchy) harmonic partial sums.

use jungck::demos;

fn main() {
    let diag = demos::harmonic_diagnostics();
    println!("epsilon0 = {}", diag.epsilon0);
    for k in [0, 1, 10, 50, 100] {
        let r = diag.row(k).unwrap();
        println!(
            "k={k:>3} n={:>3} m={:>3}  d(x_m,x_n)={:.4} d(x_m-1,x_n)={:.4} d(x_m-1,x_n+1)={:.4}",
            r.n, r.m, r.d_m_n, r.d_m1_n, r.d_m1_n1
        );
    }
}
