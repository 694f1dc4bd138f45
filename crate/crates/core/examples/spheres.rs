// Sphere sizes, pair counts and sphere intersections.

use ffdist::geometry::{
    pair_count, sphere, sphere_intersection, sphere_intersection_formula, sphere_size_formula,
    Space,
};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    for q in [5, 7, 9] {
        let f = FieldCtx::from_order(q)?;
        for d in 2..=4 {
            let space = Space::new(&f, d)?;
            let sizes: Vec<String> = f
                .elements()
                .map(|t| {
                    let n = sphere(&space, t).len() as u64;
                    assert_eq!(n, sphere_size_formula(&f, t, d));
                    n.to_string()
                })
                .collect();
            println!("q = {q}, d = {d}: |S_t| for t = 0.. is {}", sizes.join(" "));
        }
        let zero = f.from_int(0);
        println!(
            "  ordered pairs at norm 0 in the plane: {}",
            pair_count(&f, zero, 2)
        );
    }

    // the isotropic case: over F_5, x = (1, 2) has norm 0 and S_1 misses S_1 + x
    let f = FieldCtx::from_order(5)?;
    let space = Space::new(&f, 2)?;
    let x = space.point_from_ints(&[1, 2])?;
    let one = f.from_int(1);
    let count = sphere_intersection(&space, one, &x)?;
    let formula = sphere_intersection_formula(&space, one, &x)?;
    println!("|S_1 ∩ (S_1 + (1,2))| = {count}, closed form {formula}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
