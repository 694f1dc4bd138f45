//! Points of `F_q^d`, the form `||x|| = x_1^2 + ... + x_d^2`, spheres and their
//! intersections.
//!
//! A point's rank lists the ranks of its coordinates as base-`q` digits,
//! coordinate 0 least significant.

use fixedbitset::FixedBitSet;

use crate::charsum::gauss_explicit;
use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Hard cap on `q^d` for anything that materialises the whole space.
pub const MAX_SPACE: u64 = 1 << 26;

/// A point of `F_q^d` with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<FieldElement>,
    rank: usize,
}

impl Point {
    /// Point of `F_q^n` from coordinates, rank computed with coordinate 0
    /// least significant. `None` if a coordinate is outside `F_q` or the rank
    /// overflows.
    pub fn new(field: &FieldCtx, coords: Vec<FieldElement>) -> Option<Point> {
        let q = field.q() as usize;
        let mut rank = 0usize;
        for c in coords.iter().rev() {
            if c.rank() >= field.q() {
                return None;
            }
            rank = rank.checked_mul(q)?.checked_add(c.rank() as usize)?;
        }
        Some(Point { coords, rank })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }
}

/// The vector space `F_q^d` with a precomputed norm for every point.
#[derive(Clone, Debug)]
pub struct Space<'f> {
    field: &'f FieldCtx,
    d: usize,
    size: usize,
    norms: Vec<FieldElement>,
}

impl<'f> Space<'f> {
    pub fn new(field: &'f FieldCtx, d: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dimension must be at least 1");
        }
        let size = (field.q() as u64)
            .checked_pow(d as u32)
            .filter(|&n| n <= MAX_SPACE)
            .ok_or_else(|| {
                Error::ResourceGuard(format!("q^d = {}^{d} exceeds {MAX_SPACE}", field.q()))
            })? as usize;
        let mut space = Space {
            field,
            d,
            size,
            norms: Vec::new(),
        };
        let squares: Vec<FieldElement> = field.elements().map(|a| field.square(a)).collect();
        let q = field.q() as usize;
        // norm(rank) = square(low digit) + norm(rank / q)
        let mut norms = Vec::with_capacity(size);
        norms.push(FieldElement::ZERO);
        for r in 1..size {
            let rest = norms[r / q];
            norms.push(field.add(squares[r % q], rest));
        }
        space.norms = norms;
        Ok(space)
    }

    #[inline]
    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Number of points, `q^d`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point_at(&self, rank: usize) -> Result<Point> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange {
                rank: rank as u64,
                bound: self.size as u64,
            });
        }
        Ok(self.point_unchecked(rank))
    }

    pub(crate) fn point_unchecked(&self, rank: usize) -> Point {
        let q = self.q() as usize;
        let mut r = rank;
        let coords = (0..self.d)
            .map(|_| {
                let c = FieldElement::from_rank((r % q) as u32);
                r /= q;
                c
            })
            .collect();
        Point { coords, rank }
    }

    pub fn point(&self, coords: &[FieldElement]) -> Result<Point> {
        if coords.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|c| c.rank() >= self.q()) {
            return Err(Error::RankOutOfRange {
                rank: c.rank() as u64,
                bound: self.q() as u64,
            });
        }
        let q = self.q() as usize;
        let rank = coords
            .iter()
            .rev()
            .fold(0usize, |acc, c| acc * q + c.rank() as usize);
        Ok(Point {
            coords: coords.to_vec(),
            rank,
        })
    }

    /// Point from integer coordinates reduced into the prime subfield.
    pub fn point_from_ints(&self, coords: &[i64]) -> Result<Point> {
        let elems: Vec<FieldElement> = coords.iter().map(|&c| self.field.from_int(c)).collect();
        self.point(&elems)
    }

    pub fn origin(&self) -> Point {
        self.point_unchecked(0)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(|r| self.point_unchecked(r))
    }

    /// `||x||` for the point of the given rank, from the table.
    #[inline]
    pub fn norm_of(&self, rank: usize) -> FieldElement {
        self.norms[rank]
    }

    #[inline]
    pub fn add_ranks(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |f, x, y| f.add(x, y))
    }

    #[inline]
    pub fn sub_ranks(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |f, x, y| f.sub(x, y))
    }

    #[inline]
    pub fn neg_rank(&self, a: usize) -> usize {
        self.combine(a, 0, |f, x, _| f.neg(x))
    }

    /// Rank of `lambda * x`.
    pub fn scale_rank(&self, lambda: FieldElement, a: usize) -> usize {
        self.combine(a, 0, |f, x, _| f.mul(lambda, x))
    }

    #[inline]
    fn combine(
        &self,
        mut a: usize,
        mut b: usize,
        op: impl Fn(&FieldCtx, FieldElement, FieldElement) -> FieldElement,
    ) -> usize {
        let q = self.q() as usize;
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..self.d {
            let x = FieldElement::from_rank((a % q) as u32);
            let y = FieldElement::from_rank((b % q) as u32);
            out += op(self.field, x, y).rank() as usize * place;
            a /= q;
            b /= q;
            place *= q;
        }
        out
    }

    pub fn add(&self, a: &Point, b: &Point) -> Point {
        self.point_unchecked(self.add_ranks(a.rank, b.rank))
    }

    pub fn sub(&self, a: &Point, b: &Point) -> Point {
        self.point_unchecked(self.sub_ranks(a.rank, b.rank))
    }

    pub fn neg(&self, a: &Point) -> Point {
        self.point_unchecked(self.neg_rank(a.rank))
    }

    pub fn scale(&self, lambda: FieldElement, a: &Point) -> Point {
        self.point_unchecked(self.scale_rank(lambda, a.rank))
    }

    pub fn dot(&self, a: &Point, b: &Point) -> FieldElement {
        a.coords
            .iter()
            .zip(&b.coords)
            .fold(FieldElement::ZERO, |acc, (&x, &y)| {
                self.field.add(acc, self.field.mul(x, y))
            })
    }
}

/// `||x|| = x_1^2 + ... + x_d^2`, from the coordinates.
pub fn norm(field: &FieldCtx, x: &Point) -> FieldElement {
    x.coords.iter().fold(FieldElement::ZERO, |acc, &c| {
        field.add(acc, field.square(c))
    })
}

/// A subset of `F_q^d` as a dense bitset over point ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    bits: FixedBitSet,
    len: usize,
    q: u32,
    d: usize,
}

impl PointSet {
    pub fn empty(space: &Space<'_>) -> Self {
        PointSet {
            bits: FixedBitSet::with_capacity(space.size()),
            len: 0,
            q: space.q(),
            d: space.dim(),
        }
    }

    pub fn full(space: &Space<'_>) -> Self {
        let mut set = Self::empty(space);
        set.bits.insert_range(..);
        set.len = space.size();
        set
    }

    pub fn from_ranks(space: &Space<'_>, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(space);
        for r in ranks {
            if r >= space.size() {
                return Err(Error::RankOutOfRange {
                    rank: r as u64,
                    bound: space.size() as u64,
                });
            }
            set.insert(r);
        }
        Ok(set)
    }

    pub fn from_points<'a>(space: &Space<'_>, points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut set = Self::empty(space);
        for p in points {
            set.insert(p.rank());
        }
        set
    }

    /// Inserts a rank; returns `true` if it was new.
    pub fn insert(&mut self, rank: usize) -> bool {
        let was = self.bits.put(rank);
        if !was {
            self.len += 1;
        }
        !was
    }

    #[inline]
    pub fn contains(&self, rank: usize) -> bool {
        self.bits.contains(rank)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> (u32, usize) {
        (self.q, self.d)
    }

    /// Member ranks in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Parses decimal ranks, one per line; `#` starts a comment. Duplicates
    /// are merged.
    pub fn parse(space: &Space<'_>, text: &str) -> Result<Self> {
        let mut ranks = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let rank: usize = body.parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "line {}: {body:?} is not a decimal rank",
                    lineno + 1
                ))
            })?;
            ranks.push(rank);
        }
        Self::from_ranks(space, ranks)
    }

    /// Decimal ranks, one per line.
    pub fn to_text(&self) -> String {
        self.iter().map(|r| format!("{r}\n")).collect()
    }

    /// `self + v`.
    pub fn translate(&self, space: &Space<'_>, v: &Point) -> PointSet {
        let mut out = Self::empty(space);
        for r in self.iter() {
            out.insert(space.add_ranks(r, v.rank()));
        }
        out
    }

    pub fn intersection_count(&self, other: &PointSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        let len = bits.count_ones(..);
        PointSet {
            bits,
            len,
            q: self.q,
            d: self.d,
        }
    }

    pub fn check_dims(&self, space: &Space<'_>) -> Result<()> {
        if self.q != space.q() || self.d != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                found: self.bits.len(),
            });
        }
        Ok(())
    }

    /// `x in self => -x in self`.
    pub fn is_symmetric(&self, space: &Space<'_>) -> bool {
        self.iter().all(|r| self.contains(space.neg_rank(r)))
    }

    /// Indicator as real values.
    pub fn indicator(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.bits.len()];
        for r in self.iter() {
            out[r] = 1.0;
        }
        out
    }
}

/// `S_t = {x : ||x|| = t}` by scanning every point.
pub fn sphere(space: &Space<'_>, t: FieldElement) -> PointSet {
    let mut set = PointSet::empty(space);
    for r in 0..space.size() {
        if space.norm_of(r) == t {
            set.insert(r);
        }
    }
    set
}

/// Exact `|S_t|` in `F_q^d`.
///
/// For `t != 0`: `q^{d-1} - q^{(d-2)/2} psi((-1)^{d/2})` when `d` is even and
/// `q^{d-1} + q^{(d-1)/2} psi((-1)^{(d-1)/2} t)` when `d` is odd. For `t = 0`:
/// `q^{d-1} + q^{-1}(q-1) G_1^d` when `d` is even and `q^{d-1}` when `d` is odd.
pub fn sphere_size_formula(field: &FieldCtx, t: FieldElement, d: usize) -> u64 {
    assert!(d >= 1, "dimension must be at least 1");
    let q = field.q() as i128;
    let d32 = d as u32;
    let minus_one = field.neg(FieldElement::ONE);
    let value: i128 = if !t.is_zero() {
        if d.is_multiple_of(2) {
            let sign = field.quad_char(field.pow(minus_one, (d / 2) as u64)) as i128;
            q.pow(d32 - 1) - q.pow((d32 - 2) / 2) * sign
        } else {
            let arg = field.mul(field.pow(minus_one, ((d - 1) / 2) as u64), t);
            q.pow(d32 - 1) + q.pow((d32 - 1) / 2) * field.quad_char(arg) as i128
        }
    } else if d.is_multiple_of(2) {
        // G_1^d = (G_1^2)^{d/2} = (psi(-1) q)^{d/2}
        let g_pow_d = (field.psi_minus_one() as i128 * q).pow(d32 / 2);
        q.pow(d32 - 1) + (q - 1) * g_pow_d / q
    } else {
        q.pow(d32 - 1)
    };
    u64::try_from(value).expect("sphere sizes are non-negative")
}

/// `|S_t|` by convolving the count of squares `d` times, `O(d q^2)`, without
/// materialising the space.
pub fn sphere_size_by_squares(field: &FieldCtx, t: FieldElement, d: usize) -> u64 {
    let q = field.q() as usize;
    let mut square_counts = vec![0u64; q];
    for a in field.elements() {
        square_counts[field.square(a).rank() as usize] += 1;
    }
    let mut counts = vec![0u64; q];
    counts[0] = 1;
    for _ in 0..d {
        let mut next = vec![0u64; q];
        for (v, &cv) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            for (s, &cs) in square_counts.iter().enumerate().filter(|(_, &c)| c > 0) {
                let sum = field.add(
                    FieldElement::from_rank(v as u32),
                    FieldElement::from_rank(s as u32),
                );
                next[sum.rank() as usize] += cv * cs;
            }
        }
        counts = next;
    }
    counts[t.rank() as usize]
}

/// `|{(x, y) : ||x - y|| = t}| = q^d |S_t|`.
pub fn pair_count(field: &FieldCtx, t: FieldElement, d: usize) -> u128 {
    (field.q() as u128).pow(d as u32) * sphere_size_formula(field, t, d) as u128
}

/// `|S_t ∩ (S_t + x)|` by bitset intersection.
pub fn sphere_intersection(space: &Space<'_>, t: FieldElement, x: &Point) -> Result<u64> {
    check_intersection_args(space, t, x)?;
    let s = sphere(space, t);
    Ok(s.intersection_count(&s.translate(space, x)) as u64)
}

fn check_intersection_args(space: &Space<'_>, t: FieldElement, x: &Point) -> Result<()> {
    if t.is_zero() {
        return invalid("sphere intersection needs t != 0");
    }
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: x.dim(),
        });
    }
    if x.is_zero() {
        return invalid("sphere intersection needs x != 0");
    }
    Ok(())
}

/// Closed form for `|S_t ∩ (S_t + x)|`, returned before rounding.
///
/// Odd `d`: `q^{-d}|S_t|^2 - q^{-1} + q^{-2} G_1^{d+1} psi(-1) sum_r psi(t(1-r)^2 + r||x||)`
/// over `r != 0, 1` with nonzero argument. Even `d`:
/// `q^{-d}|S_t|^2 - q^{-2} - q^{-2}(q-2) G_1^d + q^{-1} G_1^d #{r != 0, 1 : t(1-r)^2 + r||x|| = 0}`.
pub fn sphere_intersection_formula(space: &Space<'_>, t: FieldElement, x: &Point) -> Result<f64> {
    check_intersection_args(space, t, x)?;
    let f = space.field();
    let d = space.dim();
    let q = f.q() as f64;
    let size = sphere_size_formula(f, t, d) as f64;
    let norm_x = norm(f, x);
    let g = gauss_explicit(f);
    let main = size * size / q.powi(d as i32);
    let quadric = |r: FieldElement| {
        let one_minus_r = f.sub(FieldElement::ONE, r);
        f.add(f.mul(t, f.square(one_minus_r)), f.mul(r, norm_x))
    };
    let rs = f.elements().filter(|r| r.rank() > 1);
    let value = if d % 2 == 1 {
        let char_sum: i64 = rs.map(|r| f.quad_char(quadric(r)) as i64).sum();
        let g_pow = g.powu(d as u32 + 1).re;
        main - 1.0 / q + g_pow * f.psi_minus_one() as f64 * char_sum as f64 / (q * q)
    } else {
        let roots = rs.filter(|&r| quadric(r).is_zero()).count() as f64;
        let g_pow = g.powu(d as u32).re;
        main - 1.0 / (q * q) - (q - 2.0) * g_pow / (q * q) + g_pow * roots / q
    };
    Ok(value)
}

/// `|{(x, y) in (S_r + a) x (S_r + b) : ||x - y|| = r}|` by iterating both translates.
pub fn three_sphere_chain_count(
    space: &Space<'_>,
    r: FieldElement,
    a: &Point,
    b: &Point,
) -> Result<u64> {
    if r.is_zero() {
        return invalid("chain count needs r != 0");
    }
    if a == b {
        return invalid("chain count needs a != b");
    }
    let s = sphere(space, r);
    let left: Vec<usize> = s.iter().map(|u| space.add_ranks(u, a.rank())).collect();
    let right: Vec<usize> = s.iter().map(|u| space.add_ranks(u, b.rank())).collect();
    let count = left
        .iter()
        .flat_map(|&x| right.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| space.norm_of(space.sub_ranks(x, y)) == r)
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_files() {
        let f = FieldCtx::from_order(5).unwrap();
        let s = Space::new(&f, 2).unwrap();
        let set = PointSet::parse(&s, "# header\n3\n  7 # seven\n\n3\n").unwrap();
        assert_eq!(set.ranks(), vec![3, 7]);
        assert_eq!(set.to_text(), "3\n7\n");
        assert!(PointSet::parse(&s, "x\n").is_err());
        assert!(PointSet::parse(&s, "25\n").is_err());
    }

    fn field(q: u64) -> FieldCtx {
        FieldCtx::from_order(q).unwrap()
    }

    #[test]
    fn norm_examples() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        assert_eq!(
            norm(&f5, &s.point_from_ints(&[1, 2]).unwrap()),
            FieldElement::ZERO
        );
        let f17 = field(17);
        let s = Space::new(&f17, 3).unwrap();
        let x = s.point_from_ints(&[0, 6, 4]).unwrap();
        assert_eq!(norm(&f17, &x), FieldElement::ONE);
        assert_eq!(s.norm_of(x.rank()), FieldElement::ONE);
        assert_eq!(norm(&f17, &s.origin()), FieldElement::ZERO);
    }

    #[test]
    fn rank_convention() {
        let f = field(5);
        let s = Space::new(&f, 3).unwrap();
        let x = s.point_from_ints(&[1, 2, 3]).unwrap();
        assert_eq!(x.rank(), 1 + 2 * 5 + 3 * 25);
        assert_eq!(s.point_at(x.rank()).unwrap(), x);
        assert!(s.point_at(125).is_err());
        assert!(s.point_from_ints(&[1, 2]).is_err());
    }

    #[test]
    fn norm_table_matches_definition() {
        let f = field(9);
        let s = Space::new(&f, 3).unwrap();
        for x in s.points() {
            assert_eq!(s.norm_of(x.rank()), norm(&f, &x));
            assert_eq!(norm(&f, &s.neg(&x)), norm(&f, &x));
            let lambda = f.element_at(5).unwrap();
            assert_eq!(
                norm(&f, &s.scale(lambda, &x)),
                f.mul(f.square(lambda), norm(&f, &x))
            );
        }
    }

    #[test]
    fn sphere_examples() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        let s1 = sphere(&s, FieldElement::ONE);
        let expected: Vec<usize> = [[1, 0], [4, 0], [0, 1], [0, 4]]
            .iter()
            .map(|c| s.point_from_ints(c).unwrap().rank())
            .collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(s1.ranks(), expected);
        assert_eq!(sphere(&s, FieldElement::ZERO).len(), 9);
        let f3 = field(3);
        let s3 = Space::new(&f3, 3).unwrap();
        assert_eq!(sphere(&s3, FieldElement::ONE).len(), 6);
    }

    #[test]
    fn size_formula_examples() {
        let f5 = field(5);
        assert_eq!(sphere_size_formula(&f5, FieldElement::ONE, 2), 4);
        assert_eq!(sphere_size_formula(&f5, FieldElement::ZERO, 3), 25);
        let f3 = field(3);
        assert_eq!(sphere_size_formula(&f3, FieldElement::ONE, 3), 6);
        assert_eq!(sphere_size_formula(&f3, FieldElement::ZERO, 2), 1);
    }

    #[test]
    fn convolution_count_agrees() {
        for q in [3u64, 5, 7, 9, 25, 27] {
            let f = field(q);
            for d in 1..=5 {
                for t in f.elements() {
                    let expected = if d == 1 {
                        f.elements().filter(|&x| f.square(x) == t).count() as u64
                    } else {
                        sphere_size_formula(&f, t, d)
                    };
                    assert_eq!(
                        sphere_size_by_squares(&f, t, d),
                        expected,
                        "q={q} d={d} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn pair_count_examples() {
        let f5 = field(5);
        assert_eq!(pair_count(&f5, FieldElement::ONE, 2), 100);
        let f3 = field(3);
        assert_eq!(pair_count(&f3, FieldElement::ZERO, 2), 9);
    }

    #[test]
    fn intersection_examples() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        let t = FieldElement::ONE;
        for (coords, expected) in [([1, 2], 0u64), ([2, 0], 1), ([1, 0], 0)] {
            let x = s.point_from_ints(&coords).unwrap();
            assert_eq!(
                sphere_intersection(&s, t, &x).unwrap(),
                expected,
                "{coords:?}"
            );
            let formula = sphere_intersection_formula(&s, t, &x).unwrap();
            assert!(
                (formula - expected as f64).abs() < 1e-9,
                "{coords:?}: {formula}"
            );
        }
        assert!(
            sphere_intersection(&s, FieldElement::ZERO, &s.point_from_ints(&[1, 0]).unwrap())
                .is_err()
        );
        assert!(sphere_intersection(&s, t, &s.origin()).is_err());
        assert!(sphere_intersection_formula(&s, t, &s.origin()).is_err());
    }

    #[test]
    fn intersection_formula_odd_dimension() {
        let f7 = field(7);
        let s = Space::new(&f7, 3).unwrap();
        for t in f7.nonzero() {
            for r in (1..s.size()).step_by(17) {
                let x = s.point_at(r).unwrap();
                let brute = sphere_intersection(&s, t, &x).unwrap();
                let formula = sphere_intersection_formula(&s, t, &x).unwrap();
                assert!((formula - brute as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chain_count_positive_where_claimed() {
        let f7 = field(7);
        for d in [2usize, 3] {
            let s = Space::new(&f7, d).unwrap();
            let a = s.origin();
            for rb in [1usize, 8, 30] {
                let b = s.point_at(rb).unwrap();
                let n = three_sphere_chain_count(&s, FieldElement::ONE, &a, &b).unwrap();
                if d == 3 {
                    assert!(n as f64 >= 6.0 * (5.0 - 1.0 / 6.0));
                } else {
                    assert!(n > 0);
                }
            }
        }
        let s = Space::new(&f7, 2).unwrap();
        assert!(three_sphere_chain_count(&s, FieldElement::ONE, &s.origin(), &s.origin()).is_err());
        let b = s.point_at(1).unwrap();
        assert!(three_sphere_chain_count(&s, FieldElement::ZERO, &s.origin(), &b).is_err());
    }

    #[test]
    fn point_set_bookkeeping() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        let mut set = PointSet::empty(&s);
        assert!(set.insert(3));
        assert!(!set.insert(3));
        assert!(set.insert(7));
        assert_eq!(set.len(), 2);
        assert_eq!(PointSet::full(&s).len(), 25);
        assert!(PointSet::from_ranks(&s, [25]).is_err());
        let v = s.point_at(1).unwrap();
        let moved = set.translate(&s, &v);
        assert_eq!(moved.ranks(), vec![4, 8]);
        assert_eq!(set.intersection(&moved).len(), 0);
        assert!(sphere(&s, FieldElement::ONE).is_symmetric(&s));
    }
}
