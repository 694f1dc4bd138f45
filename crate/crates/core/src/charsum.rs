//! Gauss, Kloosterman and polynomial character sums over `F_q`.
//!
//! Every sum is evaluated by direct summation; closed forms and Weil-type bounds
//! ride along in [`CharSumResult`] so callers can compare the two.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Comparison tolerance for a sum of `n_terms` unit-modulus values:
/// `max(1e-6, n * 2^-48)`.
pub fn tolerance(n_terms: u64) -> f64 {
    (n_terms as f64 * 2f64.powi(-48)).max(1e-6)
}

/// A directly evaluated character sum with optional closed form and bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharSumResult {
    pub value: Complex64,
    pub closed_form: Option<Complex64>,
    pub bound: Option<f64>,
    pub n_terms: u64,
}

impl CharSumResult {
    fn direct(value: Complex64, n_terms: u64) -> Self {
        CharSumResult {
            value,
            closed_form: None,
            bound: None,
            n_terms,
        }
    }

    pub fn tolerance(&self) -> f64 {
        tolerance(self.n_terms)
    }

    /// `|value - closed_form|`, when a closed form is attached.
    pub fn closed_form_gap(&self) -> Option<f64> {
        self.closed_form.map(|c| (self.value - c).norm())
    }

    pub fn matches_closed_form(&self) -> bool {
        self.closed_form_gap().is_none_or(|g| g <= self.tolerance())
    }

    pub fn within_bound(&self) -> bool {
        self.bound
            .is_none_or(|b| self.value.norm() <= b + self.tolerance())
    }

    pub fn passes(&self) -> bool {
        self.matches_closed_form() && self.within_bound()
    }
}

/// `G_a = sum_{s != 0} psi(s) chi(a s)`.
///
/// The attached closed form is `psi(a) G_1` with `G_1` from [`gauss_explicit`]
/// (zero for `a = 0`); the bound is `sqrt(q)`.
pub fn gauss_sum(ctx: &FieldCtx, a: FieldElement) -> CharSumResult {
    let value: Complex64 = ctx
        .nonzero()
        .map(|s| ctx.add_char(ctx.mul(a, s)) * ctx.quad_char(s) as f64)
        .sum();
    let closed = gauss_explicit(ctx) * ctx.quad_char(a) as f64;
    CharSumResult {
        value,
        closed_form: Some(closed),
        bound: Some((ctx.q() as f64).sqrt()),
        n_terms: ctx.q() as u64 - 1,
    }
}

/// Closed form of `G_1`: `(-1)^{l-1} sqrt(q)` for `p = 1 (mod 4)` and
/// `(-1)^{l-1} i^l sqrt(q)` for `p = 3 (mod 4)`.
pub fn gauss_explicit(ctx: &FieldCtx) -> Complex64 {
    let l = ctx.l();
    let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
    let root = (ctx.q() as f64).sqrt();
    if ctx.p() % 4 == 1 {
        Complex64::new(sign * root, 0.0)
    } else {
        let i_pow = match l % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        i_pow * (sign * root)
    }
}

/// `G_1^n` from the closed form, with the real/imaginary parts snapped to the
/// exact lattice `{0, +-q^{n/2}}` they must lie on.
pub fn gauss_power(ctx: &FieldCtx, n: u32) -> Complex64 {
    // G_1^2 = psi(-1) q.
    let q = ctx.q() as f64;
    let g2 = ctx.psi_minus_one() as f64 * q;
    let even = g2.powi((n / 2) as i32);
    if n.is_multiple_of(2) {
        Complex64::new(even, 0.0)
    } else {
        gauss_explicit(ctx) * even
    }
}

/// `sum_{s in F_q} chi(a s^2)`; equals `psi(a) G_1` for `a != 0`.
pub fn square_char_sum(ctx: &FieldCtx, a: FieldElement) -> Result<CharSumResult> {
    if a.is_zero() {
        return invalid("square_char_sum needs a != 0 (the sum is q at a = 0)");
    }
    let value: Complex64 = ctx
        .elements()
        .map(|s| ctx.add_char(ctx.mul(a, ctx.square(s))))
        .sum();
    Ok(CharSumResult {
        closed_form: Some(gauss_explicit(ctx) * ctx.quad_char(a) as f64),
        ..CharSumResult::direct(value, ctx.q() as u64)
    })
}

/// Refuses brute-force sums with more than this many terms.
pub const MAX_BRUTE_TERMS: u64 = 1 << 27;

/// `sum_{alpha in F_q^k} chi(t alpha.alpha + beta.alpha)` by brute force, with
/// the completed-square closed form `chi(||beta|| / (-4t)) psi(t)^k G_1^k`.
pub fn quadratic_vector_sum(
    ctx: &FieldCtx,
    t: FieldElement,
    beta: &[FieldElement],
) -> Result<CharSumResult> {
    if t.is_zero() {
        return invalid("quadratic_vector_sum needs t != 0");
    }
    let k = beta.len();
    if k == 0 {
        return invalid("beta must have at least one coordinate");
    }
    let q = ctx.q() as u64;
    let n_terms = q
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_BRUTE_TERMS)
        .ok_or_else(|| Error::ResourceGuard(format!("q^k = {q}^{k} terms")))?;

    let mut alpha = vec![FieldElement::ZERO; k];
    let mut value = Complex64::new(0.0, 0.0);
    for _ in 0..n_terms {
        let mut arg = FieldElement::ZERO;
        for (&a, &b) in alpha.iter().zip(beta) {
            arg = ctx.add(arg, ctx.mul(a, ctx.add(ctx.mul(t, a), b)));
        }
        value += ctx.add_char(arg);
        // odometer over F_q^k in rank order
        for a in alpha.iter_mut() {
            let next = a.rank() + 1;
            if next < ctx.q() {
                *a = FieldElement::from_rank(next);
                break;
            }
            *a = FieldElement::ZERO;
        }
    }

    let norm_beta = beta
        .iter()
        .fold(FieldElement::ZERO, |acc, &b| ctx.add(acc, ctx.square(b)));
    let minus_four_t = ctx.neg(ctx.mul(ctx.from_int(4), t));
    let phase = ctx.add_char(ctx.div(norm_beta, minus_four_t).expect("t != 0"));
    let psi_t = if k.is_multiple_of(2) {
        1.0
    } else {
        ctx.quad_char(t) as f64
    };
    let closed = phase * psi_t * gauss_power(ctx, k as u32);
    Ok(CharSumResult {
        closed_form: Some(closed),
        ..CharSumResult::direct(value, n_terms)
    })
}

/// Multiplicative twist for [`kloosterman`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Trivial,
    Quadratic,
}

impl std::fmt::Display for Twist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Twist::Trivial => "trivial",
            Twist::Quadratic => "quadratic",
        })
    }
}

impl std::str::FromStr for Twist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Twist::Trivial),
            "quadratic" => Ok(Twist::Quadratic),
            other => invalid(format!("unknown twist {other:?}; use trivial or quadratic")),
        }
    }
}

/// `K(a) = sum_{s != 0} chi(a/s + s) phi(s)` with the Weil bound `2 sqrt(q)`.
pub fn kloosterman(ctx: &FieldCtx, a: FieldElement, twist: Twist) -> CharSumResult {
    let value: Complex64 = ctx
        .nonzero()
        .map(|s| {
            let arg = ctx.add(ctx.div(a, s).expect("s != 0"), s);
            let phi = match twist {
                Twist::Trivial => 1.0,
                Twist::Quadratic => ctx.quad_char(s) as f64,
            };
            ctx.add_char(arg) * phi
        })
        .sum();
    CharSumResult {
        bound: Some(2.0 * (ctx.q() as f64).sqrt()),
        ..CharSumResult::direct(value, ctx.q() as u64 - 1)
    }
}

/// Evaluates `g` (coefficients low degree first) at `x` by Horner's rule.
pub fn poly_eval(ctx: &FieldCtx, g: &[FieldElement], x: FieldElement) -> FieldElement {
    g.iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
}

fn poly_mul(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

/// Square root of a monic polynomial, if it is a perfect square.
///
/// For monic `g` of degree `2m` the candidate root `h` is fixed by the top
/// `m + 1` coefficients of `g` (odd characteristic), so it is enough to build it
/// and compare `h^2` with `g`.
pub fn poly_sqrt(ctx: &FieldCtx, g: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = g.len().checked_sub(1)?;
    if n % 2 == 1 || g[n] != FieldElement::ONE {
        return None;
    }
    let m = n / 2;
    let two_inv = ctx.inv(ctx.from_int(2)).expect("odd characteristic");
    // h = x^m + h_{m-1} x^{m-1} + ... + h_0, solved top-down.
    let mut h = vec![FieldElement::ZERO; m + 1];
    h[m] = FieldElement::ONE;
    for k in (0..m).rev() {
        // coefficient of x^{m+k} in h^2 is 2 h_k + sum_{i+j=m+k, k<i,j<=m} h_i h_j
        let mut partial = FieldElement::ZERO;
        for i in (k + 1)..=m {
            let j = m + k - i;
            if j > k && j <= m {
                partial = ctx.add(partial, ctx.mul(h[i], h[j]));
            }
        }
        h[k] = ctx.mul(ctx.sub(g[m + k], partial), two_inv);
    }
    (poly_mul(ctx, &h, &h) == g).then_some(h)
}

/// `sum_{t in F_q} psi(s g(t))` for monic, non-square `g` of positive degree.
///
/// The bound `(e - 1) sqrt(q)` uses `e = distinct_roots` when given, otherwise
/// `e = deg g`, which can only loosen it.
pub fn poly_char_sum(
    ctx: &FieldCtx,
    g: &[FieldElement],
    s: FieldElement,
    distinct_roots: Option<usize>,
) -> Result<CharSumResult> {
    let deg = match g.iter().rposition(|c| !c.is_zero()) {
        Some(d) if d > 0 => d,
        _ => return invalid("polynomial must have positive degree"),
    };
    let g = &g[..=deg];
    if g[deg] != FieldElement::ONE {
        return invalid("polynomial must be monic");
    }
    if poly_sqrt(ctx, g).is_some() {
        return invalid("polynomial is a perfect square; the bound does not apply");
    }
    let value: i64 = ctx
        .elements()
        .map(|t| ctx.quad_char(ctx.mul(s, poly_eval(ctx, g, t))) as i64)
        .sum();
    let e = distinct_roots.unwrap_or(deg);
    Ok(CharSumResult {
        bound: Some(e.saturating_sub(1) as f64 * (ctx.q() as f64).sqrt()),
        ..CharSumResult::direct(Complex64::new(value as f64, 0.0), ctx.q() as u64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn field(q: u64) -> FieldCtx {
        FieldCtx::from_order(q).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn gauss_examples() {
        let f3 = field(3);
        assert!(close(
            gauss_sum(&f3, FieldElement::ZERO).value,
            Complex64::new(0.0, 0.0)
        ));
        let g = gauss_sum(&f3, FieldElement::ONE);
        assert!(close(g.value, Complex64::new(0.0, 3f64.sqrt())));
        assert!(g.passes());
        let f5 = field(5);
        assert!(close(
            gauss_sum(&f5, FieldElement::ONE).value,
            Complex64::new(5f64.sqrt(), 0.0)
        ));
    }

    #[test]
    fn explicit_examples() {
        assert!(close(gauss_explicit(&field(9)), Complex64::new(3.0, 0.0)));
        assert!(close(
            gauss_explicit(&field(7)),
            Complex64::new(0.0, 7f64.sqrt())
        ));
        assert!(close(gauss_explicit(&field(25)), Complex64::new(-5.0, 0.0)));
    }

    #[test]
    fn gauss_power_matches_repeated_product() {
        for q in [3u64, 5, 7, 9, 27] {
            let f = field(q);
            let g = gauss_explicit(&f);
            for n in 0..7 {
                assert!(close(gauss_power(&f, n), g.powu(n)), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn gauss_multiplicativity() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let f = field(q);
            let g1 = gauss_sum(&f, FieldElement::ONE).value;
            for a in f.nonzero() {
                let ga = gauss_sum(&f, a);
                assert!(close(ga.value, g1 * f.quad_char(a) as f64));
                assert!(ga.passes());
            }
        }
    }

    #[test]
    fn square_sum_examples() {
        let f5 = field(5);
        let r5 = 5f64.sqrt();
        assert!(close(
            square_char_sum(&f5, FieldElement::ONE).unwrap().value,
            Complex64::new(r5, 0.0)
        ));
        assert!(close(
            square_char_sum(&f5, f5.from_int(2)).unwrap().value,
            Complex64::new(-r5, 0.0)
        ));
        let f3 = field(3);
        let r = square_char_sum(&f3, f3.from_int(2)).unwrap();
        assert!(close(r.value, Complex64::new(0.0, -(3f64.sqrt()))));
        assert!(r.passes());
        assert!(square_char_sum(&f3, FieldElement::ZERO).is_err());
    }

    #[test]
    fn quadratic_vector_sum_examples() {
        let f5 = field(5);
        let r = quadratic_vector_sum(&f5, FieldElement::ONE, &[FieldElement::ZERO]).unwrap();
        assert!(close(r.value, Complex64::new(5f64.sqrt(), 0.0)));
        let r = quadratic_vector_sum(&f5, FieldElement::ONE, &[FieldElement::ZERO; 2]).unwrap();
        assert!(close(r.value, Complex64::new(5.0, 0.0)));
        assert!(r.passes());
        let r = quadratic_vector_sum(&f5, f5.from_int(2), &[FieldElement::ONE]).unwrap();
        let expected = f5.add_char(f5.from_int(3)) * -(5f64.sqrt());
        assert!(close(r.value, expected));
        assert!(r.passes());
        assert!(quadratic_vector_sum(&f5, FieldElement::ZERO, &[FieldElement::ONE]).is_err());
    }

    #[test]
    fn kloosterman_examples() {
        let f5 = field(5);
        let k = kloosterman(&f5, FieldElement::ONE, Twist::Trivial);
        let expected = 2.0 + 2.0 * (4.0 * PI / 5.0).cos();
        assert!(close(k.value, Complex64::new(expected, 0.0)));
        let k = kloosterman(&f5, FieldElement::ZERO, Twist::Quadratic);
        assert!(close(k.value, Complex64::new(5f64.sqrt(), 0.0)));
        let k = kloosterman(&f5, FieldElement::ZERO, Twist::Trivial);
        assert!(close(k.value, Complex64::new(-1.0, 0.0)));
        assert!(k.passes());
    }

    #[test]
    fn poly_sum_examples() {
        let f5 = field(5);
        let g = [FieldElement::ZERO, f5.from_int(-4), FieldElement::ONE];
        let r = poly_char_sum(&f5, &g, FieldElement::ONE, None).unwrap();
        assert_eq!(r.value.re, -1.0);
        assert!(r.passes());
        let f7 = field(7);
        let r = poly_char_sum(
            &f7,
            &[FieldElement::ZERO, FieldElement::ONE],
            FieldElement::ONE,
            None,
        )
        .unwrap();
        assert_eq!(r.value.re, 0.0);
    }

    #[test]
    fn poly_sum_rejections() {
        let f5 = field(5);
        assert!(poly_char_sum(&f5, &[FieldElement::ONE], FieldElement::ONE, None).is_err());
        assert!(poly_char_sum(
            &f5,
            &[FieldElement::ONE, f5.from_int(2)],
            FieldElement::ONE,
            None
        )
        .is_err());
        // (u + 1)^2 = u^2 + 2u + 1
        let sq = [FieldElement::ONE, f5.from_int(2), FieldElement::ONE];
        assert!(poly_char_sum(&f5, &sq, FieldElement::ONE, None).is_err());
    }

    #[test]
    fn poly_sqrt_recovers_squares() {
        let f = field(9);
        let h = [
            f.element_at(4).unwrap(),
            f.element_at(7).unwrap(),
            f.element_at(2).unwrap(),
            FieldElement::ONE,
        ];
        let g = poly_mul(&f, &h, &h);
        assert_eq!(poly_sqrt(&f, &g).as_deref(), Some(&h[..]));
        let mut g2 = g.clone();
        g2[0] = f.add(g2[0], FieldElement::ONE);
        assert_eq!(poly_sqrt(&f, &g2), None);
    }

    #[test]
    fn tolerance_floor() {
        assert_eq!(tolerance(10), 1e-6);
        assert!(tolerance(1 << 50) > 1.0);
    }
}
