// Pseudo-arithmetic progressions: ||P_j - P_i|| = (j - i)^2.

use ffdist::config::{degenerate_pseudo_ap, find_pseudo_ap_from, is_pseudo_ap};
use ffdist::geometry::{PointSet, Space};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    let f = FieldCtx::from_order(17)?;
    let space = Space::new(&f, 3)?;
    let all = PointSet::full(&space);

    let triple: Vec<_> = [[0, 0, 0], [0, 6, 4], [6, 6, 0]]
        .iter()
        .map(|c| space.point_from_ints(c))
        .collect::<ffdist::Result<_>>()?;
    println!(
        "(0,0,0) (0,6,4) (6,6,0) is a progression: {}",
        is_pseudo_ap(&f, &triple)
    );

    let from_origin = find_pseudo_ap_from(&space, &all, 3, &[space.origin()], Some(5))?;
    for ap in &from_origin {
        let pts: Vec<_> = ap
            .iter()
            .map(|p| p.coords().iter().map(|c| c.rank()).collect::<Vec<_>>())
            .collect();
        println!("  {pts:?}");
    }

    for k in 2..=4 {
        let ap = degenerate_pseudo_ap(&space, k).expect("F_17^2 has isotropic vectors");
        let pts: Vec<_> = ap
            .iter()
            .map(|p| p.coords().iter().map(|c| c.rank()).collect::<Vec<_>>())
            .collect();
        println!(
            "(j, (j mod 2) z) construction, k = {k}: {pts:?}, valid {}",
            is_pseudo_ap(&f, &ap)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
