use ffdist::charsum::gauss_sum;
use ffdist::config::{count_configs, ConfigSpec, CountOptions};
use ffdist::geometry::{pair_count, sphere, sphere_size_formula, Point, PointSet, Space};
use ffdist::graph::{bfs_from_origin, CayleySpec};
use ffdist::oracle::{bfs_layers_naive, count_configs_naive, sphere_brute};
use ffdist::spectral::{dft, idft, plancherel_gap, salem_constant};
use ffdist::{FieldCtx, FieldElement};
use num_complex::Complex64;
use proptest::prelude::*;

const ORDERS: &[u64] = &[3, 5, 7, 9, 11, 13, 25, 27, 49, 81, 125, 243];
const SMALL: &[u64] = &[3, 5, 7, 9];

fn field_of(q: u64) -> FieldCtx {
    FieldCtx::from_order(q).unwrap()
}

/// A field order together with three element ranks below it.
fn field_and_elems() -> impl Strategy<Value = (u64, u64, u64, u64)> {
    prop::sample::select(ORDERS).prop_flat_map(|q| (Just(q), 0..q, 0..q, 0..q))
}

fn space_and_set(
    qs: &'static [u64],
    dims: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (u64, usize, Vec<bool>)> {
    (prop::sample::select(qs), dims)
        .prop_filter("small space", |&(q, d)| q.pow(d as u32) <= 729)
        .prop_flat_map(|(q, d)| {
            let n = q.pow(d as u32) as usize;
            (
                Just(q),
                Just(d),
                prop::collection::vec(prop::bool::weighted(0.3), n),
            )
        })
}

fn set_from(space: &Space<'_>, mask: &[bool]) -> PointSet {
    PointSet::from_ranks(
        space,
        mask.iter().enumerate().filter(|(_, &b)| b).map(|(r, _)| r),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((q, a, b, c) in field_and_elems()) {
        let f = field_of(q);
        let (a, b, c) = (f.element_at(a).unwrap(), f.element_at(b).unwrap(), f.element_at(c).unwrap());
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.mul(a, b), f.mul_via_polynomials(a, b));
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), FieldElement::ONE);
            prop_assert_eq!(inv, f.pow(a, q - 2));
        }
    }

    #[test]
    fn trace_and_characters((q, a, b, _) in field_and_elems()) {
        let f = field_of(q);
        let (a, b) = (f.element_at(a).unwrap(), f.element_at(b).unwrap());
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
        prop_assert_eq!(f.element_at(f.trace(a) as u64).unwrap(), f.trace_by_definition(a));
        let lhs = f.add_char(f.add(a, b));
        prop_assert!((lhs - f.add_char(a) * f.add_char(b)).norm() < 1e-9);
        prop_assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
    }

    #[test]
    fn gauss_sum_magnitude((q, a, _, _) in field_and_elems()) {
        let f = field_of(q);
        let a = f.element_at(a).unwrap();
        let g = gauss_sum(&f, a);
        let expect = if a.is_zero() { 0.0 } else { (q as f64).sqrt() };
        prop_assert!((g.value.norm() - expect).abs() < 1e-6);
        prop_assert!(g.matches_closed_form());
    }

    #[test]
    fn sphere_formula_matches_scan(q in prop::sample::select(SMALL), d in 1usize..=4, t in 0u64..9) {
        let f = field_of(q);
        let t = f.element_at(t % q).unwrap();
        let space = Space::new(&f, d).unwrap();
        let scan = sphere_brute(&space, t);
        prop_assert_eq!(scan.len() as u64, sphere_size_formula(&f, t, d));
        prop_assert_eq!(scan, sphere(&space, t).ranks());
        prop_assert_eq!(pair_count(&f, t, d), space.size() as u128 * sphere_size_formula(&f, t, d) as u128);
    }

    #[test]
    fn inversion_and_plancherel((q, d, mask) in space_and_set(SMALL, 1..=3), shift in 0.0f64..1.0) {
        let f = field_of(q);
        let space = Space::new(&f, d).unwrap();
        let g: Vec<Complex64> = mask
            .iter()
            .enumerate()
            .map(|(i, &b)| Complex64::new(f64::from(u8::from(b)) + shift, (i % 3) as f64 - shift))
            .collect();
        prop_assert!(plancherel_gap(&space, &g).unwrap() < 1e-8);
        let back = idft(&space, &dft(&space, &g).unwrap()).unwrap();
        for (x, y) in g.iter().zip(&back) {
            prop_assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn salem_constant_is_translation_invariant((q, d, mask) in space_and_set(SMALL, 2..=3), shift in 0usize..729) {
        let f = field_of(q);
        let space = Space::new(&f, d).unwrap();
        let u = set_from(&space, &mask);
        prop_assume!(!u.is_empty());
        let v = space.point_at(shift % space.size()).unwrap();
        let a = salem_constant(&space, &u).unwrap();
        let b = salem_constant(&space, &u.translate(&space, &v)).unwrap();
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn bfs_matches_naive((q, d, mask) in space_and_set(&[3, 5, 7], 2..=3)) {
        let f = field_of(q);
        let space = Space::new(&f, d).unwrap();
        let mut ranks = Vec::new();
        for (r, &b) in mask.iter().enumerate().skip(1) {
            if b {
                ranks.push(r);
                ranks.push(space.neg_rank(r));
            }
        }
        prop_assume!(!ranks.is_empty());
        let spec = CayleySpec::new(&space, PointSet::from_ranks(&space, ranks).unwrap()).unwrap();
        let fast = bfs_from_origin(&space, &spec);
        let (layers, ecc) = bfs_layers_naive(&space, spec.connection());
        prop_assert_eq!(&fast.layer_sizes, &layers);
        prop_assert_eq!(fast.eccentricity, ecc);
    }

    #[test]
    fn config_counts_are_invariant(
        (q, d, mask) in space_and_set(&[3, 5, 7], 2..=2),
        c1 in 1u64..7,
        c2 in 1u64..7,
        shift in 0usize..49,
        lambda in 1u64..7,
        distinct: bool,
    ) {
        let f = field_of(q);
        let space = Space::new(&f, d).unwrap();
        let e = set_from(&space, &mask);
        let (c1, c2) = (f.element_at(1 + c1 % (q - 1)).unwrap(), f.element_at(1 + c2 % (q - 1)).unwrap());
        let lambda = f.element_at(1 + lambda % (q - 1)).unwrap();
        let spec = ConfigSpec::new(3, [(0, 1, c1), (1, 2, c2)]).unwrap();
        let opts = CountOptions { distinct, force: false };
        let base = count_configs(&space, &e, &spec, opts).unwrap();
        prop_assert_eq!(base, count_configs_naive(&space, &e, &spec, distinct));

        let v = space.point_at(shift % space.size()).unwrap();
        prop_assert_eq!(count_configs(&space, &e.translate(&space, &v), &spec, opts).unwrap(), base);

        let dilated: Vec<Point> = e.iter().map(|r| space.scale(lambda, &space.point_at(r).unwrap())).collect();
        let dilated = PointSet::from_points(&space, &dilated);
        let scaled = spec.scale_colors(&f, f.square(lambda)).unwrap();
        prop_assert_eq!(count_configs(&space, &dilated, &scaled, opts).unwrap(), base);

        let full = PointSet::full(&space);
        prop_assert!(count_configs(&space, &full, &spec, opts).unwrap() >= base);
        let wider = spec.with_edge(0, 2, c1).unwrap();
        prop_assert!(count_configs(&space, &e, &wider, opts).unwrap() <= base);
    }

    #[test]
    fn point_set_text_round_trip((q, d, mask) in space_and_set(SMALL, 1..=3)) {
        let f = field_of(q);
        let space = Space::new(&f, d).unwrap();
        let e = set_from(&space, &mask);
        prop_assert_eq!(PointSet::parse(&space, &e.to_text()).unwrap(), e);
    }
}
