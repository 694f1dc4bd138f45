// Builds F_9 two ways and prints its arithmetic tables.

use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    let f = FieldCtx::from_order(9)?;
    println!(
        "F_{}: p = {}, l = {}, modulus (low degree first) {:?}",
        f.q(),
        f.p(),
        f.l(),
        f.modulus()
    );
    println!("generator {} has log table", f.generator());
    for a in f.nonzero() {
        println!(
            "  {a}: coeffs {:?}, log {}, inverse {}, trace {}, square? {}",
            f.coeffs(a),
            f.log(a).expect("nonzero"),
            f.inv(a).expect("nonzero"),
            f.trace(a),
            f.quad_char(a) == 1
        );
    }

    // same field from an explicit modulus x^2 + 1
    let g = FieldCtx::new(3, 2, Some(&[1, 0, 1]))?;
    let i = g.from_coeffs(&[0, 1])?;
    assert_eq!(g.mul(i, i), g.from_int(-1));
    println!("with modulus x^2 + 1, x * x = {}", g.mul(i, i));
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
