// Gauss, Kloosterman and polynomial character sums with their bounds.

use ffdist::charsum::{gauss_sum, kloosterman, poly_char_sum, Twist};
use ffdist::FieldCtx;

pub fn run_example() -> ffdist::Result<()> {
    for q in [5, 7, 9, 27, 49] {
        let f = FieldCtx::from_order(q)?;
        let g = gauss_sum(&f, f.from_int(1));
        let closed = g.closed_form.expect("closed form");
        println!(
            "q = {q:>2}: G_1 = {:.6}, closed form {:.6}, |G_1|^2 = {:.3}",
            g.value,
            closed,
            g.value.norm_sqr()
        );
        assert!(g.passes());
    }

    let f = FieldCtx::from_order(13)?;
    for twist in [Twist::Trivial, Twist::Quadratic] {
        let worst = f
            .nonzero()
            .map(|a| kloosterman(&f, a, twist).value.norm())
            .fold(0.0, f64::max);
        println!(
            "q = 13, {twist} twist: max |K(a)| = {worst:.4} <= 2 sqrt(13) = {:.4}",
            2.0 * 13f64.sqrt()
        );
    }

    // t^3 + t + 1 over F_13, twisted by psi
    let g = [f.from_int(1), f.from_int(1), f.from_int(0), f.from_int(1)];
    let r = poly_char_sum(&f, &g, f.from_int(1), None)?;
    println!(
        "sum psi(t^3 + t + 1) = {:.4}, bound {:.4}",
        r.value.re,
        r.bound.expect("bounded")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
