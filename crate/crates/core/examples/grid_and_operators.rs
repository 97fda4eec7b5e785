//! Builds a cone grid, applies the Fuchsian Laplacian and the cone gradient,
//! and checks the summation-by-parts identity `-(Δu, u) = ‖∇u‖²`.

use cone_wave::operators::{apply_gradient, apply_laplacian};
use cone_wave::{build_grid, cone_norm, rng, weighted_inner, GridSpec};

fn main() -> cone_wave::Result<()> {
    let grid = build_grid(GridSpec::new(3, 16, 8, -3.0))?;
    println!(
        "n = {}, {} interior nodes, hs = {:.4}, hx = {:.4}, measure = {:.4}",
        grid.dim(),
        grid.interior_count(),
        grid.hs(),
        grid.hx(),
        grid.total_measure()
    );

    let u = rng::smooth_field(&grid, 4, &mut rng::seeded(7));
    let lap = apply_laplacian(&u);
    let grad = apply_gradient(&u);
    let lhs = -weighted_inner(&lap, &u)?;
    println!("-(Δu, u)   = {lhs:.12e}");
    println!("‖∇u‖²      = {:.12e}", grad.norm_sq());
    println!("components = {:?}", grad.component_norms_sq());
    for p in [1.0, 2.0, 3.0, 6.0] {
        println!("‖u‖_{p} = {:.6}", cone_norm(&u, p)?);
    }
    Ok(())
}
