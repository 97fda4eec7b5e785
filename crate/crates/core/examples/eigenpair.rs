//! Smallest Dirichlet eigenpair of `-Δ_B`, and its convergence to
//! `(π/|s_min|)²` on the one-node cross-section under mesh refinement.

use cone_wave::operators::{second_eigenpair, StiffnessSolver};
use cone_wave::{build_grid, smallest_eigenpair, GridSpec};

fn main() -> cone_wave::Result<()> {
    let s_min = -2.0f64;
    let exact = (std::f64::consts::PI / s_min.abs()).powi(2);
    println!("{:>5} {:>16} {:>12} {:>7}", "ns", "lambda1", "error", "order");
    let mut prev: Option<f64> = None;
    for ns in [8, 16, 32, 64, 128] {
        let e = smallest_eigenpair(&build_grid(GridSpec::new(3, ns, 1, s_min))?)?;
        let err = (e.lambda1 - exact).abs();
        let order = prev.map_or(String::new(), |p| format!("{:.3}", (p / err).log2()));
        println!("{ns:>5} {:>16.12} {err:>12.3e} {order:>7}", e.lambda1);
        prev = Some(err);
    }

    let grid = build_grid(GridSpec::new(3, 32, 8, -3.0))?;
    let solver = StiffnessSolver::new(&grid)?;
    let e = cone_wave::operators::smallest_eigenpair_with(&solver)?;
    let (l2, _) = second_eigenpair(&solver, &e.omega1)?;
    println!(
        "32x8^2 grid: lambda1 = {:.10} ({} iterations, residual {:.1e}), lambda2 = {l2:.10}",
        e.lambda1, e.iterations, e.residual
    );
    Ok(())
}
