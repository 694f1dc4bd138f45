// Fourier decay of spheres and Salem constants of other sets.

use ffdist::geometry::{PointSet, Space};
use ffdist::sampling::{random_subset_of_size, stream};
use ffdist::spectral::{salem_constant, sphere_decay_report};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    let f = FieldCtx::from_order(7)?;
    for d in 2..=3 {
        let space = Space::new(&f, d)?;
        for t in f.nonzero().take(3) {
            let r = sphere_decay_report(&space, t, None)?;
            println!(
                "q = 7, d = {d}, t = {t}: max_(xi != 0) |S^| = {:.3e} <= {:.3e}, zero term {:.4}, reduction gap {:.1e}",
                r.max_nonzero, r.bound, r.zero_term, r.closed_form_max_gap
            );
        }
    }

    // a random set of the same size as a sphere decays less evenly
    let space = Space::new(&f, 2)?;
    let circle = ffdist::geometry::sphere(&space, f.from_int(1));
    let random = random_subset_of_size(&space, circle.len(), &mut stream(5, 0));
    let line = PointSet::from_ranks(&space, 0..7)?;
    println!("Salem constants in F_7^2:");
    println!("  unit circle    {:.3}", salem_constant(&space, &circle)?);
    println!("  random set     {:.3}", salem_constant(&space, &random)?);
    println!("  line           {:.3}", salem_constant(&space, &line)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
