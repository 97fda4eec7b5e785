//! Discrete embedding and Hardy constants, the coercivity bounds and the
//! well depth `d`, compared with a sampled infimum of `J` over the Nehari
//! manifold.

use cone_wave::operators::PotentialKind;
use cone_wave::variational::{
    compute_well_constants, gradient_threshold, sampled_nehari_infimum, ModelParams, SpectralData,
};
use cone_wave::{build_grid, GridSpec};

fn main() -> cone_wave::Result<()> {
    let grid = build_grid(GridSpec::new(3, 24, 6, -3.0))?;
    let spectral = SpectralData::new(&grid)?;
    for (potential, gamma) in [(PotentialKind::None, 0.0), (PotentialKind::V2, 0.05)] {
        let model = ModelParams::with_constant_source(&grid, 3.0, 2.0, gamma, potential, 1.0)?;
        let c = compute_well_constants(&model, &spectral, 4, 0)?;
        let sampled = sampled_nehari_infimum(&model, 200, 1)?;
        println!("potential {} gamma {gamma}", potential.name());
        println!("  lambda1            {:.8}", c.lambda1);
        println!("  embedding C_*      {:.8} (converged: {})", c.c_star_emb, c.embedding_converged);
        println!("  Hardy C*           {:.8}", c.c_star_hardy);
        println!("  c1, c2             {:.6}, {:.6}", c.c1, c.c2);
        println!("  d (formula)        {:.8}", c.d);
        println!("  d (sampled, upper) {sampled:.8}");
        println!("  gradient threshold {:.8}", gradient_threshold(&c, model.p));
    }
    Ok(())
}
