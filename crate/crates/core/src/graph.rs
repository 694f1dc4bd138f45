//! Distance graphs as Cayley graphs on `(F_q^d, +)`, BFS layer profiles and
//! diameters.
//!
//! The graph `G^U` joins `x` and `y` when `x - y` lies in the connection set
//! `U`. Translation is a graph automorphism, so one BFS from the origin gives
//! every eccentricity.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{sphere, PointSet, Space};
use crate::report::Check;
use crate::spectral::salem_constant;

/// Layers with at least this much `|layer| * |U|` work are expanded in parallel.
const PARALLEL_WORK: usize = 1 << 16;

/// A symmetric connection set not containing 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleySpec {
    connection: PointSet,
    offsets: Vec<usize>,
}

impl CayleySpec {
    pub fn new(space: &Space<'_>, connection: PointSet) -> Result<Self> {
        connection.check_dims(space)?;
        if connection.contains(0) {
            return invalid("connection set must not contain 0");
        }
        if !connection.is_symmetric(space) {
            return invalid("connection set must be symmetric under x -> -x");
        }
        let offsets = connection.ranks();
        Ok(CayleySpec {
            connection,
            offsets,
        })
    }

    pub fn connection(&self) -> &PointSet {
        &self.connection
    }

    pub fn degree(&self) -> usize {
        self.offsets.len()
    }
}

/// Connection set `S_c`: the distance graph of colour `c`.
pub fn connection_sphere(space: &Space<'_>, c: FieldElement) -> Result<CayleySpec> {
    if c.is_zero() {
        return invalid("colour 0 is not an edge colour");
    }
    CayleySpec::new(space, sphere(space, c))
}

/// BFS layer sizes from one source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsProfile {
    pub layer_sizes: Vec<usize>,
    /// `None` when some vertex is unreachable.
    pub eccentricity: Option<usize>,
    pub reached: usize,
}

pub fn bfs_from(space: &Space<'_>, spec: &CayleySpec, source: usize) -> BfsProfile {
    let mut visited = PointSet::empty(space);
    visited.insert(source);
    let mut frontier = vec![source];
    let mut layer_sizes = vec![1];
    loop {
        let work = frontier.len() * spec.offsets.len();
        let mut candidates: Vec<usize> = if work >= PARALLEL_WORK {
            frontier
                .par_iter()
                .flat_map_iter(|&x| {
                    let visited = &visited;
                    spec.offsets
                        .iter()
                        .map(move |&u| space.add_ranks(x, u))
                        .filter(move |&y| !visited.contains(y))
                })
                .collect()
        } else {
            frontier
                .iter()
                .flat_map(|&x| spec.offsets.iter().map(move |&u| space.add_ranks(x, u)))
                .filter(|&y| !visited.contains(y))
                .collect()
        };
        candidates.sort_unstable();
        candidates.dedup();
        if candidates.is_empty() {
            break;
        }
        for &y in &candidates {
            visited.insert(y);
        }
        layer_sizes.push(candidates.len());
        frontier = candidates;
    }
    let reached = visited.len();
    let eccentricity = (reached == space.size()).then(|| layer_sizes.len() - 1);
    BfsProfile {
        layer_sizes,
        eccentricity,
        reached,
    }
}

pub fn bfs_from_origin(space: &Space<'_>, spec: &CayleySpec) -> BfsProfile {
    bfs_from(space, spec, 0)
}

/// Diameter via vertex transitivity; `None` when disconnected.
pub fn diameter(space: &Space<'_>, spec: &CayleySpec) -> Option<usize> {
    bfs_from_origin(space, spec).eccentricity
}

/// Maximum eccentricity over every source. Only for tiny instances.
pub fn diameter_all_sources(space: &Space<'_>, spec: &CayleySpec) -> Option<usize> {
    (0..space.size())
        .map(|s| bfs_from(space, spec, s).eccentricity)
        .try_fold(0usize, |acc, e| e.map(|e| acc.max(e)))
}

/// `nu_U = |{(x, y) in E x F : x - y in U}|` with the Fourier main term and
/// the Salem error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuCount {
    pub count: u64,
    /// `|E||F||U| q^{-d}`.
    pub main_term: f64,
    /// `K_U (|U||E||F|)^{1/2}` with `K_U` the Salem constant of `U`.
    pub error_bound: f64,
    pub salem_constant: f64,
}

impl NuCount {
    /// The main term dominates the error bound, so positivity is forced.
    pub fn positivity_forced(&self) -> bool {
        self.main_term > self.error_bound
    }

    pub fn within_bound(&self, slack: f64) -> bool {
        (self.count as f64 - self.main_term).abs() <= self.error_bound + slack
    }
}

pub fn nu_count(space: &Space<'_>, e: &PointSet, f: &PointSet, u: &PointSet) -> Result<NuCount> {
    for set in [e, f, u] {
        set.check_dims(space)?;
    }
    let f_ranks = f.ranks();
    let count: u64 = e
        .ranks()
        .par_iter()
        .map(|&x| {
            f_ranks
                .iter()
                .filter(|&&y| u.contains(space.sub_ranks(x, y)))
                .count() as u64
        })
        .sum();
    let (ne, nf, nu) = (e.len() as f64, f.len() as f64, u.len() as f64);
    let salem = if u.is_empty() {
        0.0
    } else {
        salem_constant(space, u)?
    };
    Ok(NuCount {
        count,
        main_term: ne * nf * nu / space.size() as f64,
        error_bound: salem * (nu * ne * nf).sqrt(),
        salem_constant: salem,
    })
}

pub const ANCHOR_SHARP: &str = "Theorem spherediametersharp";
pub const ANCHOR_GENERAL: &str = "Theorem generaldiameter";

/// One (q, colour) row of a diameter sweep.
#[derive(Clone, Debug, Serialize)]
pub struct DiameterRow {
    pub q: u32,
    pub d: usize,
    pub color: u32,
    pub diameter: Option<usize>,
    pub layers: Vec<usize>,
    pub sphere_size: usize,
    /// `q^{2d/3}`, the Salem-set size scale for diameter at most three.
    pub size_scale: f64,
    pub salem_constant: f64,
    pub claims: Vec<Check>,
}

/// Claims about the diameter of the colour-`c` distance graph.
pub fn diameter_claims(
    field: &FieldCtx,
    d: usize,
    c: FieldElement,
    diameter: Option<usize>,
) -> Vec<Check> {
    let q = field.q();
    let mut claims = Vec::new();
    let obs = json!(diameter);
    if d >= 4 {
        claims.push(Check::new(
            format!("diameter is 2 for d >= 4 (q={q}, d={d}, c={c})"),
            ANCHOR_SHARP,
            2,
            &obs,
            None,
            diameter == Some(2),
        ));
    }
    if d == 2 && q >= 5 {
        claims.push(Check::new(
            format!("planar diameter is never 2 (q={q}, c={c})"),
            ANCHOR_SHARP,
            json!({ "not": 2 }),
            &obs,
            None,
            diameter != Some(2),
        ));
    }
    if d == 2 && ![3, 5, 9, 13].contains(&q) {
        claims.push(Check::new(
            format!("planar diameter is 3 (q={q}, c={c})"),
            ANCHOR_SHARP,
            3,
            &obs,
            None,
            diameter == Some(3),
        ));
    }
    if d == 2 && [5, 9, 13].contains(&q) {
        claims.push(Check::exploratory(
            format!("planar diameter, no exact claim (q={q}, c={c})"),
            json!(null),
            &obs,
            true,
        ));
    }
    if d == 3 {
        claims.push(Check::new(
            format!("diameter is 2 or 3 for d = 3 (q={q}, c={c})"),
            ANCHOR_SHARP,
            json!([2, 3]),
            &obs,
            None,
            matches!(diameter, Some(2 | 3)),
        ));
        let expected = if field.quad_char(field.neg(c)) == 1 {
            2
        } else {
            3
        };
        claims.push(Check::exploratory(
            format!("d = 3 diameter is 2 iff psi(-c) = 1 (q={q}, c={c})"),
            expected,
            &obs,
            diameter == Some(expected),
        ));
    }
    claims
}

/// Diameter of every requested colour for one field, with claims and Salem
/// diagnostics.
pub fn diameter_rows(space: &Space<'_>, colors: &[FieldElement]) -> Result<Vec<DiameterRow>> {
    let field = space.field();
    let d = space.dim();
    colors
        .par_iter()
        .map(|&c| {
            let spec = connection_sphere(space, c)?;
            let profile = bfs_from_origin(space, &spec);
            let salem = salem_constant(space, spec.connection())?;
            let size_scale = (field.q() as f64).powf(2.0 * d as f64 / 3.0);
            let mut claims = diameter_claims(field, d, c, profile.eccentricity);
            if spec.degree() as f64 >= size_scale {
                claims.push(Check::exploratory(
                    format!(
                        "Salem sphere above q^(2d/3) has diameter <= 3 (q={}, d={d}, c={c})",
                        field.q()
                    ),
                    json!({ "at_most": 3 }),
                    json!(profile.eccentricity),
                    profile.eccentricity.is_some_and(|e| e <= 3),
                ));
            }
            Ok(DiameterRow {
                q: field.q(),
                d,
                color: c.rank(),
                diameter: profile.eccentricity,
                layers: profile.layer_sizes,
                sphere_size: spec.degree(),
                size_scale,
                salem_constant: salem,
                claims,
            })
        })
        .collect()
}

/// Sweeps every nonzero colour for each field in `fields`.
pub fn diameter_report(fields: &[FieldCtx], d: usize) -> Result<Vec<DiameterRow>> {
    let mut rows = Vec::new();
    for field in fields {
        let space = Space::new(field, d)?;
        let colors: Vec<FieldElement> = field.nonzero().collect();
        rows.extend(diameter_rows(&space, &colors)?);
    }
    Ok(rows)
}

/// Checks that the three sets share `(q, d)`.
pub fn same_dims(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::InvalidArgument(format!(
            "point sets live in different spaces: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> FieldCtx {
        FieldCtx::from_order(q).unwrap()
    }

    #[test]
    fn connection_sphere_examples() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        assert_eq!(
            connection_sphere(&s, FieldElement::ONE).unwrap().degree(),
            4
        );
        assert!(connection_sphere(&s, FieldElement::ZERO).is_err());
        let f3 = field(3);
        let s3 = Space::new(&f3, 3).unwrap();
        assert_eq!(
            connection_sphere(&s3, FieldElement::ONE).unwrap().degree(),
            6
        );
    }

    #[test]
    fn invalid_connection_sets() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        let with_zero = PointSet::from_ranks(&s, [0, 1, 4]).unwrap();
        assert!(CayleySpec::new(&s, with_zero).is_err());
        let lopsided = PointSet::from_ranks(&s, [1]).unwrap();
        assert!(CayleySpec::new(&s, lopsided).is_err());
    }

    #[test]
    fn torus_grid_profile() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        let spec = connection_sphere(&s, FieldElement::ONE).unwrap();
        let profile = bfs_from_origin(&s, &spec);
        assert_eq!(profile.layer_sizes, vec![1, 4, 8, 8, 4]);
        assert_eq!(profile.eccentricity, Some(4));
        assert_eq!(diameter_all_sources(&s, &spec), Some(4));
    }

    #[test]
    fn complete_graph_and_f3_four_space() {
        let f3 = field(3);
        let s = Space::new(&f3, 4).unwrap();
        let spec = connection_sphere(&s, FieldElement::ONE).unwrap();
        assert_eq!(diameter(&s, &spec), Some(2));
        let mut all = PointSet::full(&s);
        all = PointSet::from_ranks(&s, all.iter().filter(|&r| r != 0)).unwrap();
        let complete = CayleySpec::new(&s, all).unwrap();
        assert_eq!(diameter(&s, &complete), Some(1));
    }

    #[test]
    fn disconnected_reports_none() {
        let f5 = field(5);
        let s = Space::new(&f5, 2).unwrap();
        // the x-axis only
        let axis = PointSet::from_ranks(&s, [1, 4]).unwrap();
        let spec = CayleySpec::new(&s, axis).unwrap();
        let profile = bfs_from_origin(&s, &spec);
        assert_eq!(profile.reached, 5);
        assert_eq!(profile.eccentricity, None);
        assert_eq!(diameter_all_sources(&s, &spec), None);
    }

    #[test]
    fn nu_count_full_space() {
        let f3 = field(3);
        let s = Space::new(&f3, 2).unwrap();
        let all = PointSet::full(&s);
        let nu = nu_count(&s, &all, &all, &all).unwrap();
        assert_eq!(nu.count, 81);
        assert!((nu.main_term - 81.0).abs() < 1e-9);
        assert!(nu.within_bound(1e-9));
    }

    #[test]
    fn planar_claims() {
        let f7 = field(7);
        let s = Space::new(&f7, 2).unwrap();
        let rows = diameter_rows(&s, &f7.nonzero().collect::<Vec<_>>()).unwrap();
        assert_eq!(rows.len(), 6);
        for row in rows {
            assert_eq!(row.diameter, Some(3));
            assert!(row.claims.iter().all(|c| c.pass || c.is_exploratory()));
        }
    }
}
