//! Arithmetic in `F_q`, `q = p^l` with `p` an odd prime.
//!
//! Elements are identified with their rank: `a = c_0 + c_1 t + ... + c_{l-1} t^{l-1}`
//! in `Z_p[t]/(modulus)` has rank `c_0 + c_1 p + ... + c_{l-1} p^{l-1}`. Rank 0 is the
//! additive identity and rank 1 the multiplicative identity.
//!
//! All multiplicative structure goes through discrete-log tables built once from
//! a primitive element; the polynomial-basis product used to build them stays
//! available as [`FieldCtx::mul_via_polynomials`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest field order we will build tables for.
pub const MAX_ORDER: u64 = 1 << 24;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 512;

/// An element of `F_q`, stored as its rank in `[0, q)`.
///
/// The element carries no reference to its field; every operation goes through a
/// [`FieldCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Caller guarantees `rank < q` for the field it will be used with.
    #[inline]
    pub(crate) const fn from_rank(rank: u32) -> Self {
        FieldElement(rank)
    }

    #[inline]
    pub fn rank(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable description of `F_q` with all lookup tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    l: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[i] = g^i` for `i < 2(q-1)`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    trace: Vec<u32>,
    quad: Vec<i8>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("l", &self.l)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds `F_{p^l}`. Without a modulus the lexicographically smallest monic
/// irreducible of degree `l` is used (coefficients compared low degree first).
pub fn make_field(p: u32, l: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
    FieldCtx::new(p, l, modulus)
}

impl FieldCtx {
    pub fn new(p: u32, l: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if l == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(l)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| {
                Error::ResourceGuard(format!("{p}^{l} exceeds the field order cap {MAX_ORDER}"))
            })? as u32;

        let modulus = match modulus {
            Some(m) => {
                validate_modulus(p, l, m)?;
                m.to_vec()
            }
            None => smallest_irreducible(p, l),
        };

        let mut ctx = FieldCtx {
            p,
            l,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
            neg: Vec::new(),
            add: None,
            trace: Vec::new(),
            quad: Vec::new(),
            roots: Vec::new(),
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// Builds the field of order `q`, factoring `q = p^l` and using the default modulus.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, l) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Self::new(p as u32, l, None)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;

        self.neg = (0..self.q)
            .map(|r| {
                let c = self.to_coeffs(r);
                self.rank_of_digits(c.iter().map(|&x| (p - x) % p))
            })
            .collect();

        if self.q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; q * q];
            for a in 0..self.q {
                for b in 0..self.q {
                    table[a as usize * q + b as usize] = self.add_digits(a, b);
                }
            }
            self.add = Some(table);
        }

        self.generator = self.find_generator();
        let order = q - 1;
        let mut exp = Vec::with_capacity(2 * order);
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.mul_via_polynomials_raw(x, self.generator);
        }
        debug_assert_eq!(x, 1, "generator order must be q - 1");
        exp.extend_from_within(0..order);
        self.exp = exp;
        self.log = log;

        self.inv = (0..self.q)
            .map(|r| {
                if r == 0 {
                    0
                } else {
                    self.exp[(order - self.log[r as usize] as usize) % order]
                }
            })
            .collect();

        self.quad = (0..q)
            .map(|r| match r {
                0 => 0,
                _ if self.log[r].is_multiple_of(2) => 1,
                _ => -1,
            })
            .collect();

        // Trace is Z_p-linear: evaluate it on the power basis, extend by linearity.
        let basis: Vec<u32> = (0..self.l)
            .map(|j| {
                let tj = FieldElement(p.pow(j));
                let tr = self.trace_by_definition(tj);
                debug_assert!(tr.0 < p);
                tr.0
            })
            .collect();
        self.trace = (0..self.q)
            .map(|r| {
                self.to_coeffs(r)
                    .iter()
                    .zip(&basis)
                    .fold(0u64, |acc, (&c, &b)| (acc + c as u64 * b as u64) % p as u64)
                    as u32
            })
            .collect();

        self.roots = (0..p)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
            .collect();
    }

    fn find_generator(&self) -> u32 {
        if self.q == 3 {
            return 2;
        }
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        (2..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_via_polynomials(g, order / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    pub fn element_at(&self, rank: u64) -> Result<FieldElement> {
        if rank >= self.q as u64 {
            return Err(Error::RankOutOfRange {
                rank,
                bound: self.q as u64,
            });
        }
        Ok(FieldElement(rank as u32))
    }

    #[inline]
    pub fn index_of(&self, a: FieldElement) -> u32 {
        a.0
    }

    /// All elements in rank order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficients `c_0..c_{l-1}` of `a` in the power basis.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.to_coeffs(a.0)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.l as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}",
                self.q
            )));
        }
        Ok(FieldElement(self.rank_of_digits(coeffs.iter().copied())))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None if self.l == 1 => FieldElement((a.0 + b.0) % self.p),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (a.0 != 0).then(|| FieldElement(self.inv[a.0 as usize]))
    }

    /// `a / b`; `None` when `b = 0`.
    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        FieldElement(self.exp[k as usize])
    }

    /// Discrete log base [`FieldCtx::generator`]; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Absolute trace to `Z_p`, returned as an integer in `[0, p)`.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.trace[a.0 as usize]
    }

    /// `Tr(a) = a + a^p + ... + a^{p^{l-1}}` computed literally.
    pub fn trace_by_definition(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut frob = a;
        for _ in 0..self.l {
            acc = self.add(acc, frob);
            frob = self.pow(frob, self.p as u64);
        }
        acc
    }

    /// Canonical additive character `exp(2 pi i Tr(a) / p)`.
    #[inline]
    pub fn add_char(&self, a: FieldElement) -> Complex64 {
        self.roots[self.trace[a.0 as usize] as usize]
    }

    /// `exp(2 pi i k / p)` for `k` in `[0, p)`.
    #[inline]
    pub fn root_of_unity(&self, k: u32) -> Complex64 {
        self.roots[k as usize]
    }

    /// Quadratic character extended by zero at zero.
    #[inline]
    pub fn quad_char(&self, a: FieldElement) -> i8 {
        self.quad[a.0 as usize]
    }

    /// `psi(-1)`: `+1` exactly when `q = 1 (mod 4)`.
    pub fn psi_minus_one(&self) -> i8 {
        self.quad_char(self.neg(FieldElement::ONE))
    }

    /// Product in the polynomial basis, independent of the log tables.
    pub fn mul_via_polynomials(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_via_polynomials_raw(a.0, b.0))
    }

    fn mul_via_polynomials_raw(&self, a: u32, b: u32) -> u32 {
        let pa = self.to_coeffs(a);
        let pb = self.to_coeffs(b);
        let prod = zp::mul(&pa, &pb, self.p);
        let rem = zp::rem(&prod, &self.modulus, self.p);
        self.rank_of_digits(rem.into_iter())
    }

    fn pow_via_polynomials(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_via_polynomials_raw(acc, base);
            }
            base = self.mul_via_polynomials_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn to_coeffs(&self, mut r: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.l as usize);
        for _ in 0..self.l {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    fn rank_of_digits(&self, digits: impl DoubleEndedIterator<Item = u32>) -> u32 {
        digits.rev().fold(0u32, |acc, c| acc * self.p + c)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.l {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }
}

fn validate_modulus(p: u32, l: u32, m: &[u32]) -> Result<()> {
    if m.len() != l as usize + 1 {
        return Err(Error::MalformedModulus(format!(
            "expected {} coefficients (degree {l}, low degree first), got {}",
            l + 1,
            m.len()
        )));
    }
    if m[l as usize] != 1 {
        return Err(Error::MalformedModulus("modulus must be monic".into()));
    }
    if let Some(&c) = m.iter().find(|&&c| c >= p) {
        return Err(Error::MalformedModulus(format!(
            "coefficient {c} is not reduced mod {p}"
        )));
    }
    if !zp::is_irreducible(m, p) {
        return Err(Error::ReducibleModulus {
            coeffs: m.to_vec(),
            p,
        });
    }
    Ok(())
}

/// Smallest monic irreducible of degree `l` over `Z_p`, ordering candidates by
/// `(c_0, c_1, ..., c_{l-1})` lexicographically.
pub fn smallest_irreducible(p: u32, l: u32) -> Vec<u32> {
    let count = (p as u64).pow(l);
    (0..count)
        .map(|n| {
            // c_0 is the most significant digit of n.
            let mut coeffs = vec![0u32; l as usize + 1];
            let mut rest = n;
            for j in (0..l as usize).rev() {
                coeffs[j] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs[l as usize] = 1;
            coeffs
        })
        .find(|c| zp::is_irreducible(c, p))
        .expect("irreducible polynomials exist in every degree")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, l))` with `q = p^l`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut l = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        l += 1;
    }
    Some((p, l))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `Z_p`, coefficients low degree first.
mod zp {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
            for (j, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p as u64;
                r[shift + j] = ((r[shift + j] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: `f` of degree `l` is irreducible iff `gcd(f, t^{p^i} - t) = 1`
    /// for every `1 <= i <= l/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let deg = f.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        let t = vec![0u32, 1];
        let mut frob = t.clone();
        for _ in 1..=deg / 2 {
            frob = pow_mod(&frob, p as u64, &f, p);
            let g = gcd(&f, &sub(&frob, &t, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Irreducibility by exhaustive root/factor search for tiny degrees.
    fn has_root(f: &[u32], p: u32) -> bool {
        (0..p).any(|x| {
            f.iter()
                .rev()
                .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
                == 0
        })
    }

    #[test]
    fn prime_field_basics() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.trace(FieldElement(3)), 3);
        assert_eq!(f.add_char(FieldElement::ZERO), Complex64::new(1.0, 0.0));
        let expected = Complex64::from_polar(1.0, 4.0 * PI / 5.0);
        assert!((f.add_char(FieldElement(2)) - expected).norm() < 1e-12);
        let total: Complex64 = f.elements().map(|a| f.add_char(a)).sum();
        assert!(total.norm() < 1e-12);
        assert_eq!(f.quad_char(FieldElement(4)), 1);
        assert_eq!(f.quad_char(FieldElement(2)), -1);
        assert_eq!(f.quad_char(FieldElement::ZERO), 0);
    }

    #[test]
    fn f9_default_modulus_is_t2_plus_1() {
        // Enumerate monic quadratics mod 3 in the documented order; the first
        // without a root must be the default.
        let mut first = None;
        'outer: for c0 in 0..3 {
            for c1 in 0..3 {
                let f = [c0, c1, 1];
                if !has_root(&f, 3) {
                    first = Some(f.to_vec());
                    break 'outer;
                }
            }
        }
        assert_eq!(first.as_deref(), Some(&[1, 0, 1][..]));
        let f9 = make_field(3, 2, None).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // t = rank 3, i^2 = -1.
        let i = f9.element_at(3).unwrap();
        assert_eq!(f9.coeffs(i), vec![0, 1]);
        assert_eq!(f9.square(i), f9.neg(FieldElement::ONE));
        assert_eq!(f9.trace(FieldElement::ONE), 2);
        assert_eq!(f9.trace(i), 0);
        assert_eq!(f9.index_of(f9.element_at(7).unwrap()), 7);
        assert_eq!(f9.element_at(0).unwrap(), FieldElement::ZERO);
        assert!(f9.element_at(9).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            make_field(2, 3, None).unwrap_err(),
            Error::EvenCharacteristic
        );
        assert_eq!(make_field(3, 0, None).unwrap_err(), Error::ZeroDegree);
        // t^2 + 2 = (t - 1)(t + 1) mod 3.
        assert!(matches!(
            make_field(3, 2, Some(&[2, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 0, 2])),
            Err(Error::MalformedModulus(_))
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 1])),
            Err(Error::MalformedModulus(_))
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 3, 1])),
            Err(Error::MalformedModulus(_))
        ));
        assert_eq!(
            FieldCtx::from_order(15).unwrap_err(),
            Error::NotPrimePower(15)
        );
        assert_eq!(
            FieldCtx::from_order(8).unwrap_err(),
            Error::EvenCharacteristic
        );
    }

    #[test]
    fn explicit_modulus_accepted() {
        // t^2 + t + 2 is irreducible mod 3 (no roots).
        assert!(!has_root(&[2, 1, 1], 3));
        let f = make_field(3, 2, Some(&[2, 1, 1])).unwrap();
        assert_eq!(f.q(), 9);
        for a in f.nonzero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn irreducibility_matches_root_search_for_cubics() {
        for p in [3u32, 5, 7] {
            for c0 in 0..p {
                for c1 in 0..p {
                    for c2 in 0..p {
                        let f = [c0, c1, c2, 1];
                        assert_eq!(zp::is_irreducible(&f, p), !has_root(&f, p), "{f:?} mod {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn from_order_factors() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(169), Some((13, 2)));
        assert_eq!(prime_power(1), None);
        let f = FieldCtx::from_order(27).unwrap();
        assert_eq!((f.p(), f.l()), (3, 3));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [3u64, 5, 9, 25, 27, 49] {
            let f = FieldCtx::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_via_polynomials(a, b), "q={q}");
                    assert_eq!(f.add(a, b), f.add(b, a));
                }
            }
        }
    }

    #[test]
    fn inverses_exhaustive_up_to_169() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125, 169] {
            let f = FieldCtx::from_order(q).unwrap();
            for a in f.nonzero() {
                let inv = f.inv(a).unwrap();
                assert_eq!(f.mul_via_polynomials(a, inv), FieldElement::ONE);
                assert_eq!(f.pow(a, q - 2), inv);
            }
            assert_eq!(f.inv(FieldElement::ZERO), None);
        }
    }

    #[test]
    fn frobenius_and_trace() {
        for q in [3u64, 5, 7, 9, 25, 27, 49] {
            let f = FieldCtx::from_order(q).unwrap();
            let p = f.p() as u64;
            for a in f.elements() {
                let tr = f.trace_by_definition(a);
                assert!(tr.rank() < f.p());
                assert_eq!(tr.rank(), f.trace(a));
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let f = FieldCtx::from_order(q).unwrap();
            for s in f.elements() {
                let sum: Complex64 = f.elements().map(|a| f.add_char(f.mul(s, a))).sum();
                let expected = if s.is_zero() { q as f64 } else { 0.0 };
                assert!((sum - expected).norm() < 1e-9, "q={q} s={s}");
            }
        }
    }

    #[test]
    fn quadratic_character_properties() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49, 81] {
            let f = FieldCtx::from_order(q).unwrap();
            let squares: std::collections::HashSet<_> = f.nonzero().map(|a| f.square(a)).collect();
            let plus = f.nonzero().filter(|&a| f.quad_char(a) == 1).count();
            let minus = f.nonzero().filter(|&a| f.quad_char(a) == -1).count();
            assert_eq!(plus, (q as usize - 1) / 2);
            assert_eq!(minus, (q as usize - 1) / 2);
            for a in f.nonzero() {
                assert_eq!(f.quad_char(a) == 1, squares.contains(&a));
                for b in f.nonzero() {
                    assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
                }
            }
            assert_eq!(f.psi_minus_one() == 1, q % 4 == 1);
        }
    }

    #[test]
    fn large_prime_field_without_add_table() {
        let f = make_field(1009, 1, None).unwrap();
        let a = f.from_int(1000);
        let b = f.from_int(20);
        assert_eq!(f.add(a, b), f.from_int(11));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        let f = FieldCtx::from_order(729).unwrap();
        let a = f.element_at(500).unwrap();
        assert_eq!(f.sub(f.add(a, a), a), a);
    }
}
