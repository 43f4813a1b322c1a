//! Built-in instances used by the `demo` command, the runnable examples and
//! the acceptance tests.

use crate::contraction::SelfMapPair;
use crate::control::{ControlTriple, FunctionDescriptor};
use crate::instance::{controls_spec, InstanceFile, MapSpec, MapsSpec, PointSpec, SolverSpec, SpaceSpec};
use crate::metric::FiniteMetricSpace;
use crate::solver::{harmonic_partial_sums, lemma_limit_estimates, CauchyDiagnostics};

/// Points `{0, 1, 3}` on the line, `T = id`, `S: p0 -> p0, p1 -> p0, p2 -> p1`,
/// `psi = id`, `alpha ≡ 0.6`, `beta ≡ 0.3`.
pub fn three_point() -> InstanceFile {
    let space = FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).expect("valid line space");
    let pair = SelfMapPair::tables(vec![0, 0, 1], vec![0, 1, 2]);
    let mut f = InstanceFile::finite(&space, &pair, &ControlTriple::constants(0.6, 0.3));
    f.solver.x0 = Some(PointSpec::Label("p2".into()));
    f
}

/// Constant `S ≡ a` with `T a = a` on four points of the line.
pub fn constant_s() -> InstanceFile {
    let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
    let space = FiniteMetricSpace::new(labels, line_matrix(&[0.0, 1.0, 2.5, 4.0])).expect("valid line space");
    let pair = SelfMapPair::tables(vec![0, 0, 0, 0], vec![0, 2, 3, 1]);
    let triple = ControlTriple::new(
        FunctionDescriptor::Ratio,
        FunctionDescriptor::Constant(0.5),
        FunctionDescriptor::Constant(0.25),
    );
    let mut f = InstanceFile::finite(&space, &pair, &triple);
    f.solver.x0 = Some(PointSpec::Label("d".into()));
    f
}

/// `T = id` and `S` swapping two points at distance 1, `alpha ≡ beta ≡ 0.1`:
/// the inequality fails at `(p0, p1)`.
pub fn swap_violation() -> InstanceFile {
    let space = FiniteMetricSpace::from_line(&[0.0, 1.0]).expect("valid line space");
    let pair = SelfMapPair::tables(vec![1, 0], vec![0, 1]);
    InstanceFile::finite(&space, &pair, &ControlTriple::constants(0.1, 0.1))
}

/// `S(x) = x/4`, `T(x) = x/2` on `[0, 1]`, `psi = id`, `alpha ≡ 0.6`, `beta ≡ 0.1`.
pub fn continuous_halving() -> InstanceFile {
    InstanceFile {
        space: SpaceSpec::Interval { lower: 0.0, upper: 1.0 },
        maps: Some(MapsSpec {
            s: MapSpec::Expr("x/4".into()),
            t: MapSpec::Expr("x/2".into()),
            t_inverse: Some("2*x".into()),
        }),
        controls: Some(controls_spec(&ControlTriple::constants(0.6, 0.1))),
        solver: SolverSpec { x0: Some(PointSpec::Scalar(1.0)), tol: Some(1e-10), max_iter: Some(10_000) },
    }
}

/// Crossing-index table for the harmonic partial sums, `epsilon0 = 0.5`,
/// `k = 0..=100`.
pub fn harmonic_diagnostics() -> CauchyDiagnostics {
    let sums = harmonic_partial_sums(1000);
    let ks: Vec<usize> = (0..=100).collect();
    lemma_limit_estimates(&sums, |a, b| (a - b).abs(), 0.5, &ks)
}

fn line_matrix(coords: &[f64]) -> Vec<Vec<f64>> {
    coords.iter().map(|a| coords.iter().map(|b| (a - b).abs()).collect()).collect()
}
