//! Brute-force reference implementations.
//!
//! Each routine here recomputes a quantity from its definition, sharing as
//! little as possible with the fast path it checks: no norm tables, no
//! factored transforms, no pruning.

use num_complex::Complex64;

use crate::config::ConfigSpec;
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{Point, PointSet, Space};

fn norm_of_coords(field: &FieldCtx, coords: &[FieldElement]) -> FieldElement {
    coords.iter().fold(FieldElement::ZERO, |acc, &x| {
        field.add(acc, field.mul(x, x))
    })
}

fn diff(field: &FieldCtx, a: &Point, b: &Point) -> Vec<FieldElement> {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(&x, &y)| field.sub(x, y))
        .collect()
}

/// `q^{-d} sum_x f(x) chi(-x . xi)` evaluated term by term, `O(q^{2d})`.
pub fn dft_naive(space: &Space<'_>, f: &[Complex64]) -> Vec<Complex64> {
    let field = space.field();
    let points: Vec<Point> = space.points().collect();
    let scale = (space.size() as f64).recip();
    points
        .iter()
        .map(|xi| {
            points
                .iter()
                .zip(f)
                .map(|(x, &fx)| {
                    let dot = x
                        .coords()
                        .iter()
                        .zip(xi.coords())
                        .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                            field.add(acc, field.mul(a, b))
                        });
                    fx * field.add_char(field.neg(dot))
                })
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// Distance from the origin to every vertex by pulling: a vertex joins layer
/// `k+1` when some `u` in `U` takes it back into layer `k`.
pub fn bfs_layers_naive(space: &Space<'_>, connection: &PointSet) -> (Vec<usize>, Option<usize>) {
    let field = space.field();
    let points: Vec<Point> = space.points().collect();
    let offsets: Vec<Point> = connection.iter().map(|r| points[r].clone()).collect();
    let mut dist: Vec<Option<usize>> = vec![None; points.len()];
    dist[0] = Some(0);
    let mut layers = vec![1];
    let mut level = 0;
    loop {
        let mut next = Vec::new();
        for (r, p) in points.iter().enumerate() {
            if dist[r].is_some() {
                continue;
            }
            let hit = offsets.iter().any(|u| {
                let back = diff(field, p, u);
                let back = Point::new(field, back).expect("coordinates in range");
                dist[back.rank()] == Some(level)
            });
            if hit {
                next.push(r);
            }
        }
        if next.is_empty() {
            break;
        }
        level += 1;
        for &r in &next {
            dist[r] = Some(level);
        }
        layers.push(next.len());
    }
    let connected = dist.iter().all(Option::is_some);
    (layers, connected.then_some(level))
}

/// Filters all `|E|^k` ordered tuples against a norm matrix computed from
/// coordinates.
pub fn count_configs_naive(
    space: &Space<'_>,
    e: &PointSet,
    spec: &ConfigSpec,
    distinct: bool,
) -> u64 {
    let field = space.field();
    let pts: Vec<Point> = e
        .iter()
        .map(|r| space.point_at(r).expect("rank in range"))
        .collect();
    let m = pts.len();
    let k = spec.k();
    if m == 0 {
        return 0;
    }
    let norms: Vec<FieldElement> = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| (a, b)))
        .map(|(a, b)| norm_of_coords(field, &diff(field, a, b)))
        .collect();
    let mut idx = vec![0usize; k];
    let mut count = 0u64;
    loop {
        let ok = (!distinct || (0..k).all(|a| (0..a).all(|b| idx[a] != idx[b])))
            && spec
                .edges()
                .iter()
                .all(|ed| norms[idx[ed.i] * m + idx[ed.j]] == ed.color);
        if ok {
            count += 1;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                return count;
            }
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Number of ordered pairs at each norm, indexed by the rank of `t`.
pub fn pair_histogram_brute(space: &Space<'_>) -> Vec<u64> {
    let field = space.field();
    let points: Vec<Point> = space.points().collect();
    let mut hist = vec![0u64; field.q() as usize];
    for x in &points {
        for y in &points {
            hist[norm_of_coords(field, &diff(field, x, y)).rank() as usize] += 1;
        }
    }
    hist
}

/// `|{(x, y) : ||x - y|| = t}|` over all ordered pairs.
pub fn pair_count_brute(space: &Space<'_>, t: FieldElement) -> u64 {
    let field = space.field();
    let points: Vec<Point> = space.points().collect();
    let mut count = 0;
    for x in &points {
        for y in &points {
            if norm_of_coords(field, &diff(field, x, y)) == t {
                count += 1;
            }
        }
    }
    count
}

/// Sphere by scanning coordinates directly.
pub fn sphere_brute(space: &Space<'_>, t: FieldElement) -> Vec<usize> {
    space
        .points()
        .filter(|p| norm_of_coords(space.field(), p.coords()) == t)
        .map(|p| p.rank())
        .collect()
}

/// `nu_U = sum_{u in U} |E ∩ (F + u)|`.
pub fn nu_count_by_translates(space: &Space<'_>, e: &PointSet, f: &PointSet, u: &PointSet) -> u64 {
    u.iter()
        .map(|r| {
            let shift = space.point_at(r).expect("rank in range");
            e.intersection_count(&f.translate(space, &shift)) as u64
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{count_configs, CountOptions};
    use crate::geometry::{pair_count, sphere};
    use crate::graph::{bfs_from_origin, connection_sphere, nu_count};
    use crate::spectral::dft;

    #[test]
    fn oracles_agree_on_small_instances() {
        let f = FieldCtx::from_order(5).unwrap();
        let s = Space::new(&f, 2).unwrap();
        let one = FieldElement::ONE;
        assert_eq!(pair_count_brute(&s, one) as u128, pair_count(&f, one, 2));
        assert_eq!(pair_histogram_brute(&s)[1], 100);
        assert_eq!(sphere_brute(&s, one), sphere(&s, one).ranks());

        let spec = connection_sphere(&s, one).unwrap();
        let (layers, ecc) = bfs_layers_naive(&s, spec.connection());
        let fast = bfs_from_origin(&s, &spec);
        assert_eq!(layers, fast.layer_sizes);
        assert_eq!(ecc, fast.eccentricity);

        let f_vals: Vec<Complex64> = (0..25)
            .map(|i| Complex64::new(i as f64, (i * i % 7) as f64))
            .collect();
        let slow = dft_naive(&s, &f_vals);
        let quick = dft(&s, &f_vals).unwrap();
        for (a, b) in slow.iter().zip(quick.values()) {
            assert!((a - b).norm() < 1e-9);
        }

        let e = PointSet::from_ranks(&s, [0, 1, 3, 7, 8, 12, 20]).unwrap();
        let chain = ConfigSpec::new(3, [(0, 1, one), (1, 2, f.from_int(2))]).unwrap();
        for distinct in [false, true] {
            let opts = CountOptions {
                distinct,
                force: false,
            };
            assert_eq!(
                count_configs(&s, &e, &chain, opts).unwrap(),
                count_configs_naive(&s, &e, &chain, distinct)
            );
        }

        let u = sphere(&s, one);
        let ff = PointSet::from_ranks(&s, [2, 4, 5, 9, 11]).unwrap();
        assert_eq!(
            nu_count(&s, &e, &ff, &u).unwrap().count,
            nu_count_by_translates(&s, &e, &ff, &u)
        );
    }
}
