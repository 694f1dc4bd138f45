// Diameters of distance graphs, and of a Cayley graph with a hand-made
// connection set.

use ffdist::geometry::{PointSet, Space};
use ffdist::graph::{bfs_from_origin, diameter_rows, CayleySpec};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    for (q, d) in [(5, 2), (7, 2), (5, 3), (3, 4)] {
        let f = FieldCtx::from_order(q)?;
        let space = Space::new(&f, d)?;
        let colors: Vec<_> = f.nonzero().collect();
        for row in diameter_rows(&space, &colors)? {
            let verdict = if row.claims.iter().all(|c| c.pass) {
                "ok"
            } else {
                "CLAIM FAILED"
            };
            println!(
                "q = {q}, d = {d}, color {}: diameter {:?}, layers {:?} ({verdict})",
                row.color, row.diameter, row.layers
            );
        }
    }

    // the axis directions generate F_5^2 with diameter 4
    let f = FieldCtx::from_order(5)?;
    let space = Space::new(&f, 2)?;
    let axes: Vec<_> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
        .iter()
        .map(|c| space.point_from_ints(c))
        .collect::<ffdist::Result<_>>()?;
    let spec = CayleySpec::new(&space, PointSet::from_points(&space, &axes))?;
    let profile = bfs_from_origin(&space, &spec);
    println!(
        "axis graph on F_5^2: diameter {:?}, layers {:?}",
        profile.eccentricity, profile.layer_sizes
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
