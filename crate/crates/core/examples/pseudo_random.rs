// Colour uniformity and completeness of the distance graph, plus random
// sets at the threshold size.

use ffdist::config::{pseudo_random_report, ConfigSpec, TrendOptions};
use ffdist::geometry::Space;
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    let f = FieldCtx::from_order(11)?;
    let space = Space::new(&f, 2)?;
    let mut trend = TrendOptions::new(ConfigSpec::parse(&f, 3, "1-2:1,2-3:2")?, 7);
    trend.trials = 5;
    let r = pseudo_random_report(&space, Some(&trend))?;
    println!("largest/smallest colour class: {:.4}", r.uniformity_ratio);
    println!("non-edge fraction: {:.4}", r.non_edge_fraction);
    for (c, size, edges) in r.color_edges.iter().take(4) {
        println!("  colour {c}: |S_c| = {size}, {edges} edges");
    }
    if let Some(t) = &r.trend {
        println!(
            "random sets of size ~{:.0} (density {:.3}): {}/{} contain the configuration, {} in band",
            t.target_size, t.density, t.positive, t.trials.len(), t.in_band
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
