// nu_U = #{(x, y) in E x F : x - y in U} against |E||F||U|/q^d.

use ffdist::geometry::{sphere, Space};
use ffdist::graph::nu_count;
use ffdist::sampling::{random_subset, stream};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    for (q, d) in [(5, 3), (7, 3), (5, 4)] {
        let f = FieldCtx::from_order(q)?;
        let space = Space::new(&f, d)?;
        let u = sphere(&space, f.from_int(1));
        for trial in 0..3 {
            let e = random_subset(&space, 0.3, &mut stream(trial, 0));
            let g = random_subset(&space, 0.3, &mut stream(trial, 1));
            let nu = nu_count(&space, &e, &g, &u)?;
            println!(
                "q = {q}, d = {d}, trial {trial}: nu = {}, main {:.1}, error bound {:.1}, K = {:.3}, forced positive {}",
                nu.count,
                nu.main_term,
                nu.error_bound,
                nu.salem_constant,
                nu.positivity_forced()
            );
            assert!(nu.within_bound(1e-6));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
