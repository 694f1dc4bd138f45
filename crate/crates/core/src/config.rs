//! k-point configurations with prescribed distances, pseudo-arithmetic
//! progressions and the pseudo-randomness report for distance graphs.
//!
//! A configuration is an ordered tuple `(x_0, ..., x_{k-1})` of points of `E`
//! with `||x_i - x_j|| = a_ij` for every constrained pair. Indices are 0-based
//! in the API; the textual edge syntax (`"1-2:1,2-3:4"`) is 1-based.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{sphere, Point, PointSet, Space};
use crate::sampling::{random_subset, stream};

/// Upper limit on the backtracking search tree size unless forced.
pub const COUNT_GUARD: f64 = 1e9;

/// Default size constant for the configuration threshold.
pub const DEFAULT_SIZE_CONSTANT: f64 = 4.0;

/// Constraint `||x_i - x_j|| = color` with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub color: FieldElement,
}

/// Number of points and the constrained pairs with their colours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigSpec {
    k: usize,
    edges: Vec<Edge>,
}

impl ConfigSpec {
    /// Pairs may be given in either order; they are stored with `i < j`.
    pub fn new(
        k: usize,
        edges: impl IntoIterator<Item = (usize, usize, FieldElement)>,
    ) -> Result<Self> {
        if k == 0 {
            return invalid("a configuration needs at least one point");
        }
        let mut out: Vec<Edge> = Vec::new();
        for (a, b, color) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j {
                return invalid(format!("pair ({a}, {b}) is diagonal"));
            }
            if j >= k {
                return invalid(format!("pair ({a}, {b}) refers past k = {k} points"));
            }
            if color.is_zero() {
                return invalid(format!("pair ({a}, {b}) has colour 0"));
            }
            if out.iter().any(|e| e.i == i && e.j == j) {
                return invalid(format!("pair ({a}, {b}) listed twice"));
            }
            out.push(Edge { i, j, color });
        }
        out.sort_by_key(|e| (e.j, e.i));
        Ok(ConfigSpec { k, edges: out })
    }

    /// Parses `"1-2:1,2-3:4"`: 1-based point indices, colours as field ranks.
    pub fn parse(field: &FieldCtx, k: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad =
                || Error::InvalidArgument(format!("edge {item:?} is not of the form I-J:COLOR"));
            let (pair, color) = item.split_once(':').ok_or_else(bad)?;
            let (a, b) = pair.split_once('-').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            let color: u64 = color.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return invalid(format!("edge {item:?}: point indices start at 1"));
            }
            edges.push((a - 1, b - 1, field.element_at(color)?));
        }
        Self::new(k, edges)
    }

    /// All pairs with `a_ij = (j - i)^2`.
    pub fn pseudo_ap(field: &FieldCtx, k: usize) -> Result<Self> {
        if k >= 2 && (field.p() as usize) < k {
            return invalid(format!(
                "k = {k} needs gaps up to {} but p = {}: some (j-i)^2 vanishes, which is not an edge colour",
                k - 1,
                field.p()
            ));
        }
        let mut edges = Vec::new();
        for j in 0..k {
            for i in 0..j {
                let gap = (j - i) as i64;
                edges.push((i, j, field.from_int(gap * gap)));
            }
        }
        Self::new(k, edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|J|`.
    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Distinct colours used.
    pub fn palette_size(&self) -> usize {
        let mut colors: Vec<FieldElement> = self.edges.iter().map(|e| e.color).collect();
        colors.sort_unstable();
        colors.dedup();
        colors.len()
    }

    /// Adds one more constraint.
    pub fn with_edge(&self, i: usize, j: usize, color: FieldElement) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.i, e.j, e.color))
            .chain([(i, j, color)]);
        Self::new(self.k, edges)
    }

    /// Every colour multiplied by `lambda`.
    pub fn scale_colors(&self, field: &FieldCtx, lambda: FieldElement) -> Result<Self> {
        Self::new(
            self.k,
            self.edges
                .iter()
                .map(|e| (e.i, e.j, field.mul(lambda, e.color))),
        )
    }

    /// Whether `ranks` satisfies every constraint, using `norm_of`.
    pub fn satisfied_by(&self, space: &Space<'_>, ranks: &[usize]) -> bool {
        ranks.len() == self.k
            && self
                .edges
                .iter()
                .all(|e| space.norm_of(space.sub_ranks(ranks[e.i], ranks[e.j])) == e.color)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountOptions {
    /// Require pairwise distinct points.
    pub distinct: bool,
    /// Skip the search-size guard.
    pub force: bool,
}

struct Level {
    /// Extend from an earlier point through a sphere: `(earlier index, colour slot)`.
    anchor: Option<(usize, usize)>,
    /// Remaining constraints to earlier points.
    checks: Vec<(usize, FieldElement)>,
}

struct Plan<'s, 'f> {
    space: &'s Space<'f>,
    e: &'s PointSet,
    e_ranks: Vec<usize>,
    offsets: Vec<Vec<usize>>,
    levels: Vec<Level>,
    distinct: bool,
}

impl<'s, 'f> Plan<'s, 'f> {
    fn new(
        space: &'s Space<'f>,
        e: &'s PointSet,
        spec: &ConfigSpec,
        distinct: bool,
    ) -> Result<Self> {
        e.check_dims(space)?;
        let mut colors: Vec<FieldElement> = spec.edges.iter().map(|e| e.color).collect();
        colors.sort_unstable();
        colors.dedup();
        for c in &colors {
            if c.rank() >= space.q() {
                return Err(Error::RankOutOfRange {
                    rank: c.rank() as u64,
                    bound: space.q() as u64,
                });
            }
        }
        let offsets: Vec<Vec<usize>> = colors.iter().map(|&c| sphere(space, c).ranks()).collect();
        let slot = |c: FieldElement| colors.binary_search(&c).expect("colour collected above");
        let levels = (0..spec.k)
            .map(|j| {
                let mut cons: Vec<(usize, FieldElement)> = spec
                    .edges
                    .iter()
                    .filter(|e| e.j == j)
                    .map(|e| (e.i, e.color))
                    .collect();
                // anchor through the smallest sphere
                cons.sort_by_key(|&(i, c)| (offsets[slot(c)].len(), i));
                let anchor = cons.first().map(|&(i, c)| (i, slot(c)));
                let checks = cons.into_iter().skip(1).collect();
                Level { anchor, checks }
            })
            .collect();
        Ok(Plan {
            space,
            e,
            e_ranks: e.ranks(),
            offsets,
            levels,
            distinct,
        })
    }

    /// Upper bound on the number of search nodes below a fixed prefix.
    fn search_size(&self, prefix_len: usize) -> f64 {
        let ne = self.e_ranks.len() as f64;
        self.levels[prefix_len..]
            .iter()
            .map(|lvl| match lvl.anchor {
                Some((_, s)) => ne.min(self.offsets[s].len() as f64),
                None => ne,
            })
            .product()
    }

    fn guard(&self, prefix_len: usize, force: bool) -> Result<()> {
        let size = self.search_size(prefix_len);
        if !force && size > COUNT_GUARD {
            return Err(Error::ResourceGuard(format!(
                "configuration search may visit {size:.3e} tuples (limit {COUNT_GUARD:e}); pass force to override"
            )));
        }
        Ok(())
    }

    fn accepts(&self, tuple: &[usize], j: usize, y: usize) -> bool {
        if self.distinct && tuple[..j].contains(&y) {
            return false;
        }
        self.levels[j]
            .checks
            .iter()
            .all(|&(i, c)| self.space.norm_of(self.space.sub_ranks(y, tuple[i])) == c)
    }

    /// Calls `visit` for each candidate at level `j`, stopping on `Break`.
    fn for_candidates(
        &self,
        tuple: &[usize],
        j: usize,
        mut visit: impl FnMut(usize) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        match self.levels[j].anchor {
            Some((i, s)) => {
                let base = tuple[i];
                for &off in &self.offsets[s] {
                    let y = self.space.add_ranks(base, off);
                    if self.e.contains(y) && self.accepts(tuple, j, y) {
                        visit(y)?;
                    }
                }
            }
            None => {
                for &y in &self.e_ranks {
                    if self.accepts(tuple, j, y) {
                        visit(y)?;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn count_below(&self, tuple: &mut Vec<usize>, j: usize) -> u64 {
        if j == self.levels.len() {
            return 1;
        }
        // the last level only needs the number of candidates
        let last = j + 1 == self.levels.len();
        let mut total = 0u64;
        let mut children = Vec::new();
        let _ = self.for_candidates(tuple, j, |y| {
            if last {
                total += 1;
            } else {
                children.push(y);
            }
            ControlFlow::Continue(())
        });
        for y in children {
            tuple.push(y);
            total += self.count_below(tuple, j + 1);
            tuple.pop();
        }
        total
    }

    fn walk(
        &self,
        tuple: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let j = tuple.len();
        if j == self.levels.len() {
            return visit(tuple);
        }
        let mut children = Vec::new();
        let _ = self.for_candidates(tuple, j, |y| {
            children.push(y);
            ControlFlow::Continue(())
        });
        for y in children {
            tuple.push(y);
            let flow = self.walk(tuple, visit);
            tuple.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn prefix_ok(&self, prefix: &[usize]) -> bool {
        prefix.len() <= self.levels.len()
            && prefix.iter().enumerate().all(|(j, &y)| {
                self.e.contains(y)
                    && self.accepts(prefix, j, y)
                    && self.levels[j].anchor.is_none_or(|(i, s)| {
                        self.offsets[s].contains(&self.space.sub_ranks(y, prefix[i]))
                    })
            })
    }
}

/// Number of ordered configurations in `E^k`.
pub fn count_configs(
    space: &Space<'_>,
    e: &PointSet,
    spec: &ConfigSpec,
    opts: CountOptions,
) -> Result<u64> {
    let plan = Plan::new(space, e, spec, opts.distinct)?;
    plan.guard(0, opts.force)?;
    let total = plan
        .e_ranks
        .par_iter()
        .map(|&x| {
            let mut tuple = Vec::with_capacity(spec.k);
            tuple.push(x);
            plan.count_below(&mut tuple, 1)
        })
        .sum();
    Ok(total)
}

/// Configurations extending `prefix` (ranks of the first points), in
/// lexicographic search order, at most `limit` of them.
pub fn enumerate_configs(
    space: &Space<'_>,
    e: &PointSet,
    spec: &ConfigSpec,
    prefix: &[usize],
    limit: Option<usize>,
    opts: CountOptions,
) -> Result<Vec<Vec<usize>>> {
    let plan = Plan::new(space, e, spec, opts.distinct)?;
    if prefix.len() > spec.k {
        return invalid(format!(
            "prefix of {} points for k = {}",
            prefix.len(),
            spec.k
        ));
    }
    if !plan.prefix_ok(prefix) {
        return Ok(Vec::new());
    }
    plan.guard(prefix.len(), opts.force)?;
    let mut found = Vec::new();
    if limit == Some(0) {
        return Ok(found);
    }
    let mut tuple = prefix.to_vec();
    let _ = plan.walk(&mut tuple, &mut |t| {
        found.push(t.to_vec());
        if limit.is_some_and(|n| found.len() >= n) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// `|E|^k q^{-n}`.
pub fn predicted_count(spec: &ConfigSpec, e_size: usize, q: u32) -> f64 {
    (e_size as f64).powi(spec.k as i32) * (q as f64).powi(-(spec.n() as i32))
}

/// `q^{d(k-1)/k} q^{n/k}`, valid under `1 <= k-1 <= n <= d`.
pub fn threshold_size(d: usize, q: u32, k: usize, n: usize) -> Result<f64> {
    if k < 2 || k - 1 > n || n > d {
        return invalid(format!(
            "threshold needs 1 <= k-1 <= n <= d, got d={d}, k={k}, n={n}"
        ));
    }
    let (d, k, n, q) = (d as f64, k as f64, n as f64, q as f64);
    Ok(q.powf(d * (k - 1.0) / k) * q.powf(n / k))
}

/// Independent check of `||P_j - P_i|| = (j - i)^2`, straight from coordinates.
pub fn is_pseudo_ap(field: &FieldCtx, points: &[Point]) -> bool {
    points.iter().enumerate().all(|(j, pj)| {
        points[..j].iter().enumerate().all(|(i, pi)| {
            let diff: Vec<FieldElement> = pj
                .coords()
                .iter()
                .zip(pi.coords())
                .map(|(&a, &b)| field.sub(a, b))
                .collect();
            let n = diff.iter().fold(FieldElement::ZERO, |acc, &x| {
                field.add(acc, field.mul(x, x))
            });
            let gap = (j - i) as i64;
            pj.dim() == pi.dim() && n == field.from_int(gap * gap)
        })
    })
}

/// Pseudo-arithmetic progressions of length `k` in `E` starting with
/// `prefix`, each re-verified from coordinates.
pub fn find_pseudo_ap_from(
    space: &Space<'_>,
    e: &PointSet,
    k: usize,
    prefix: &[Point],
    limit: Option<usize>,
) -> Result<Vec<Vec<Point>>> {
    let spec = ConfigSpec::pseudo_ap(space.field(), k)?;
    let ranks: Vec<usize> = prefix.iter().map(Point::rank).collect();
    let found = enumerate_configs(space, e, &spec, &ranks, limit, CountOptions::default())?;
    let tuples: Vec<Vec<Point>> = found
        .into_iter()
        .map(|t| {
            t.into_iter()
                .map(|r| space.point_at(r).expect("rank from E"))
                .collect()
        })
        .collect();
    for t in &tuples {
        assert!(
            is_pseudo_ap(space.field(), t),
            "search returned a non-progression {t:?}"
        );
    }
    Ok(tuples)
}

pub fn find_pseudo_ap(
    space: &Space<'_>,
    e: &PointSet,
    k: usize,
    limit: Option<usize>,
) -> Result<Vec<Vec<Point>>> {
    find_pseudo_ap_from(space, e, k, &[], limit)
}

/// First nonzero isotropic vector of `F_q^dim` in lexicographic order
/// (coordinate 0 most significant).
pub fn null_vector(field: &FieldCtx, dim: usize) -> Option<Point> {
    if dim == 0 {
        return None;
    }
    if dim == 1 {
        return None;
    }
    // beyond three coordinates a null vector lives in the first three
    let scan = dim.min(3);
    let q = field.q() as u64;
    let total = q.checked_pow(scan as u32)?;
    (1..total).find_map(|n| {
        let mut digits = vec![FieldElement::ZERO; scan];
        let mut r = n;
        for slot in digits.iter_mut().rev() {
            *slot = field.element_at(r % q).expect("digit below q");
            r /= q;
        }
        let v = digits.iter().fold(FieldElement::ZERO, |acc, &x| {
            field.add(acc, field.square(x))
        });
        if !v.is_zero() {
            return None;
        }
        let mut coords = digits;
        coords.resize(dim, FieldElement::ZERO);
        Point::new(field, coords)
    })
}

/// The progression `P_j = (j, (j mod 2) z)` for `j = 0..k` with `z` a null
/// vector of `F_q^{d-1}`; its differences have norm `(j - i)^2 + ||z|| = (j - i)^2`.
/// `None` when no null vector exists or `k` is inadmissible for `p`.
pub fn degenerate_pseudo_ap(space: &Space<'_>, k: usize) -> Option<Vec<Point>> {
    let field = space.field();
    if space.dim() < 2 || (k >= 2 && (field.p() as usize) < k) {
        return None;
    }
    let z = null_vector(field, space.dim() - 1)?;
    let points = (0..k)
        .map(|j| {
            let mut coords = vec![field.from_int(j as i64)];
            coords.extend(
                z.coords()
                    .iter()
                    .map(|&c| if j % 2 == 1 { c } else { FieldElement::ZERO }),
            );
            space.point(&coords).expect("coordinates in range")
        })
        .collect();
    Some(points)
}

/// One random-`E` trial of the configuration count.
#[derive(Clone, Debug, Serialize)]
pub struct TrendTrial {
    pub trial: usize,
    pub size: usize,
    pub observed: u64,
    pub predicted: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct TrendOptions {
    pub spec: ConfigSpec,
    /// Multiplier on the threshold size; default 4.
    pub size_constant: f64,
    pub trials: usize,
    pub seed: u64,
    pub distinct: bool,
    pub force: bool,
}

impl TrendOptions {
    pub fn new(spec: ConfigSpec, seed: u64) -> Self {
        TrendOptions {
            spec,
            size_constant: DEFAULT_SIZE_CONSTANT,
            trials: 20,
            seed,
            distinct: false,
            force: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrendSummary {
    pub k: usize,
    pub n: usize,
    pub palette_size: usize,
    pub size_constant: f64,
    pub threshold: f64,
    /// `C * threshold`, possibly larger than the space.
    pub target_size: f64,
    /// Sampling density, `min(1, target / q^d)`.
    pub density: f64,
    pub trials: Vec<TrendTrial>,
    pub positive: usize,
    /// Trials with ratio in `[0.5, 2]`.
    pub in_band: usize,
}

pub const TREND_BAND: (f64, f64) = (0.5, 2.0);

/// Counts configurations in Bernoulli random sets at the threshold scale.
pub fn config_trend(space: &Space<'_>, opts: &TrendOptions) -> Result<TrendSummary> {
    let spec = &opts.spec;
    let threshold = threshold_size(space.dim(), space.q(), spec.k(), spec.n())?;
    let target = opts.size_constant * threshold;
    let density = (target / space.size() as f64).min(1.0);
    let count_opts = CountOptions {
        distinct: opts.distinct,
        force: opts.force,
    };
    let trials = (0..opts.trials)
        .map(|t| {
            let mut rng = stream(opts.seed, t as u64);
            let e = random_subset(space, density, &mut rng);
            let observed = count_configs(space, &e, spec, count_opts)?;
            let predicted = predicted_count(spec, e.len(), space.q());
            let ratio = if predicted > 0.0 {
                observed as f64 / predicted
            } else {
                0.0
            };
            Ok(TrendTrial {
                trial: t,
                size: e.len(),
                observed,
                predicted,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let positive = trials.iter().filter(|t| t.observed > 0).count();
    let in_band = trials
        .iter()
        .filter(|t| (TREND_BAND.0..=TREND_BAND.1).contains(&t.ratio))
        .count();
    Ok(TrendSummary {
        k: spec.k(),
        n: spec.n(),
        palette_size: spec.palette_size(),
        size_constant: opts.size_constant,
        threshold,
        target_size: target,
        density,
        trials,
        positive,
        in_band,
    })
}

/// Statistics of the coloured distance graph on `F_q^d`.
#[derive(Clone, Debug, Serialize)]
pub struct PseudoRandomReport {
    pub q: u32,
    pub d: usize,
    pub vertex_count: usize,
    /// `(colour, |S_c|, q^d |S_c| / 2)` for each nonzero colour.
    pub color_edges: Vec<(FieldElement, usize, u64)>,
    /// `max |S_c| / min |S_c|` over nonzero colours.
    pub uniformity_ratio: f64,
    pub zero_sphere_size: usize,
    /// Fraction of vertex pairs joined by no colour.
    pub non_edge_fraction: f64,
    pub trend: Option<TrendSummary>,
}

pub fn pseudo_random_report(
    space: &Space<'_>,
    trend: Option<&TrendOptions>,
) -> Result<PseudoRandomReport> {
    let q = space.q() as usize;
    let mut sizes = vec![0usize; q];
    for r in 0..space.size() {
        sizes[space.norm_of(r).rank() as usize] += 1;
    }
    let n = space.size();
    let color_edges: Vec<(FieldElement, usize, u64)> = space
        .field()
        .nonzero()
        .map(|c| {
            let s = sizes[c.rank() as usize];
            (c, s, n as u64 * s as u64 / 2)
        })
        .collect();
    let max = color_edges.iter().map(|c| c.1).max().unwrap_or(0);
    let min = color_edges.iter().map(|c| c.1).min().unwrap_or(0);
    let uniformity_ratio = if min > 0 {
        max as f64 / min as f64
    } else {
        f64::INFINITY
    };
    let zero_sphere_size = sizes[0];
    let non_edge_fraction = if n > 1 {
        (zero_sphere_size - 1) as f64 / (n - 1) as f64
    } else {
        0.0
    };
    let trend = trend.map(|opts| config_trend(space, opts)).transpose()?;
    Ok(PseudoRandomReport {
        q: space.q(),
        d: space.dim(),
        vertex_count: n,
        color_edges,
        uniformity_ratio,
        zero_sphere_size,
        non_edge_fraction,
        trend,
    })
}
