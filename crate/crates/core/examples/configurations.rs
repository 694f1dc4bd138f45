// Counting k-point configurations and comparing with |E|^k q^-n.

use ffdist::config::{
    count_configs, enumerate_configs, predicted_count, threshold_size, ConfigSpec, CountOptions,
};
use ffdist::geometry::{PointSet, Space};
use ffdist::sampling::{random_subset, stream};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    let f = FieldCtx::from_order(11)?;
    let space = Space::new(&f, 2)?;
    let chain = ConfigSpec::parse(&f, 3, "1-2:1,2-3:1")?;
    let triangle = ConfigSpec::parse(&f, 3, "1-2:1,2-3:1,1-3:1")?;
    let opts = CountOptions::default();

    let full = PointSet::full(&space);
    for (name, spec) in [("chain", &chain), ("triangle", &triangle)] {
        let n = count_configs(&space, &full, spec, opts)?;
        println!(
            "{name} in all of F_11^2: {n} (|E|^k q^-n = {:.0})",
            predicted_count(spec, full.len(), 11)
        );
    }

    let threshold = threshold_size(2, 11, 3, 2)?;
    println!("size threshold for k = 3, n = 2: {threshold:.1} points");
    for seed in 0..4 {
        let e = random_subset(&space, 0.5, &mut stream(seed, 0));
        let n = count_configs(&space, &e, &chain, opts)?;
        let p = predicted_count(&chain, e.len(), 11);
        println!(
            "  random E (seed {seed}, |E| = {}): {n} chains, ratio {:.3}",
            e.len(),
            n as f64 / p
        );
    }

    let some = enumerate_configs(&space, &full, &triangle, &[], Some(2), opts)?;
    for t in some {
        let pts: Vec<_> = t
            .iter()
            .map(|&r| {
                space
                    .point_at(r)
                    .map(|p| p.coords().iter().map(|c| c.rank()).collect::<Vec<_>>())
            })
            .collect::<ffdist::Result<_>>()?;
        println!("  unit triangle {pts:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
