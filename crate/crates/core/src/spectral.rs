//! The normalised Fourier transform on `F_q^d`.
//!
//! Forward: `f^(xi) = q^{-d} sum_x f(x) chi(-x.xi)`. Inverse:
//! `f(x) = sum_xi chi(x.xi) f^(xi)`. With this pair Plancherel reads
//! `sum_xi |f^(xi)|^2 = q^{-d} sum_x |f(x)|^2`.
//!
//! `chi(-x.xi)` factors over coordinates, so the transform is `d` passes of the
//! `q x q` character matrix along one axis at a time.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::charsum::{gauss_explicit, tolerance};
use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::geometry::{sphere, PointSet, Space};

/// Below this size a pass runs on one thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Fourier coefficients indexed by frequency rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    q: u32,
    d: usize,
    n_terms: u64,
}

impl Spectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dims(&self) -> (u32, usize) {
        (self.q, self.d)
    }

    pub fn n_terms(&self) -> u64 {
        self.n_terms
    }

    pub fn tolerance(&self) -> f64 {
        tolerance(self.n_terms)
    }

    pub fn at(&self, freq: usize) -> Complex64 {
        self.values[freq]
    }

    /// `max_{xi != 0} |f^(xi)|`; zero for the one-point space.
    pub fn max_nonzero(&self) -> f64 {
        self.values[1..]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Builds a spectrum from raw values, e.g. for feeding [`idft`].
    pub fn from_values(space: &Space<'_>, values: Vec<Complex64>) -> Result<Self> {
        check_len(space, values.len())?;
        Ok(Spectrum {
            values,
            q: space.q(),
            d: space.dim(),
            n_terms: space.size() as u64,
        })
    }
}

fn check_len(space: &Space<'_>, len: usize) -> Result<()> {
    if len != space.size() {
        return Err(Error::DimensionMismatch {
            expected: space.size(),
            found: len,
        });
    }
    Ok(())
}

/// `table[a * q + b] = chi(sign * a * b)`.
fn character_matrix(field: &FieldCtx, sign: i64) -> Vec<Complex64> {
    let q = field.q() as usize;
    let mut m = Vec::with_capacity(q * q);
    for a in field.elements() {
        let a = if sign < 0 { field.neg(a) } else { a };
        for b in field.elements() {
            m.push(field.add_char(field.mul(a, b)));
        }
    }
    m
}

/// Applies `out[.., xi_j, ..] = sum_{x_j} m[xi_j, x_j] in[.., x_j, ..]` along every axis.
fn factored_transform(space: &Space<'_>, input: &[Complex64], m: &[Complex64]) -> Vec<Complex64> {
    let q = space.q() as usize;
    let n = space.size();
    let mut src = input.to_vec();
    let mut dst = vec![Complex64::new(0.0, 0.0); n];
    let mut stride = 1usize;
    for _ in 0..space.dim() {
        let block = stride * q;
        let apply = |(src_block, dst_block): (&[Complex64], &mut [Complex64])| {
            for low in 0..stride {
                for xi in 0..q {
                    let row = &m[xi * q..(xi + 1) * q];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, &w) in row.iter().enumerate() {
                        acc += w * src_block[low + stride * x];
                    }
                    dst_block[low + stride * xi] = acc;
                }
            }
        };
        if n >= PARALLEL_THRESHOLD {
            src.par_chunks(block)
                .zip(dst.par_chunks_mut(block))
                .for_each(apply);
        } else {
            src.chunks(block).zip(dst.chunks_mut(block)).for_each(apply);
        }
        std::mem::swap(&mut src, &mut dst);
        stride = block;
    }
    src
}

/// Forward transform of a rank-indexed array.
pub fn dft(space: &Space<'_>, f: &[Complex64]) -> Result<Spectrum> {
    check_len(space, f.len())?;
    let m = character_matrix(space.field(), -1);
    let scale = (space.size() as f64).recip();
    let values = factored_transform(space, f, &m)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    Ok(Spectrum {
        values,
        q: space.q(),
        d: space.dim(),
        n_terms: space.size() as u64,
    })
}

/// Forward transform of a set's indicator.
pub fn dft_set(space: &Space<'_>, set: &PointSet) -> Result<Spectrum> {
    set.check_dims(space)?;
    let f: Vec<Complex64> = set
        .indicator()
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    dft(space, &f)
}

/// Inverse transform (no normalising factor).
pub fn idft(space: &Space<'_>, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
    check_len(space, spectrum.values.len())?;
    if spectrum.dims() != (space.q(), space.dim()) {
        return Err(Error::DimensionMismatch {
            expected: space.size(),
            found: spectrum.values.len(),
        });
    }
    let m = character_matrix(space.field(), 1);
    Ok(factored_transform(space, &spectrum.values, &m))
}

/// `|sum_xi |f^(xi)|^2 - q^{-d} sum_x |f(x)|^2|`.
pub fn plancherel_gap(space: &Space<'_>, f: &[Complex64]) -> Result<f64> {
    let spec = dft(space, f)?;
    let lhs: f64 = spec.values.iter().map(|v| v.norm_sqr()).sum();
    let rhs: f64 = f.iter().map(|v| v.norm_sqr()).sum::<f64>() / space.size() as f64;
    Ok((lhs - rhs).abs())
}

/// Least `C` with `|U^(xi)| <= C q^{-d} |U|^{1/2}` for all `xi != 0`.
pub fn salem_constant(space: &Space<'_>, set: &PointSet) -> Result<f64> {
    if set.is_empty() {
        return invalid("Salem constant of the empty set is undefined");
    }
    let spec = dft_set(space, set)?;
    Ok(salem_from_spectrum(space, &spec, set.len()))
}

pub(crate) fn salem_from_spectrum(space: &Space<'_>, spec: &Spectrum, size: usize) -> f64 {
    space.size() as f64 * spec.max_nonzero() / (size as f64).sqrt()
}

/// `S_t^(m)` for `m != 0` through the one-dimensional reduction
/// `q^{-d-1} G_1^d sum_{s != 0} chi(||m|| / (-4s) - s t) psi(s)^d`.
pub fn sphere_transform_closed_form(
    space: &Space<'_>,
    t: FieldElement,
    m: usize,
) -> Result<Complex64> {
    if m == 0 {
        return invalid("the reduction holds only for nonzero frequencies");
    }
    if m >= space.size() {
        return Err(Error::RankOutOfRange {
            rank: m as u64,
            bound: space.size() as u64,
        });
    }
    let f = space.field();
    let d = space.dim();
    let norm_m = space.norm_of(m);
    let minus_four = f.neg(f.from_int(4));
    let sum: Complex64 = f
        .nonzero()
        .map(|s| {
            let first = f.div(norm_m, f.mul(minus_four, s)).expect("s != 0");
            let arg = f.sub(first, f.mul(s, t));
            let twist = if d.is_multiple_of(2) {
                1.0
            } else {
                f.quad_char(s) as f64
            };
            f.add_char(arg) * twist
        })
        .sum();
    let scale = (f.q() as f64).powi(-(d as i32) - 1);
    Ok(gauss_explicit(f).powu(d as u32) * sum * scale)
}

/// Fourier decay diagnostics for one sphere.
#[derive(Clone, Debug, Serialize)]
pub struct SphereDecayReport {
    pub q: u32,
    pub d: usize,
    pub t: u32,
    pub sphere_size: usize,
    /// `S_t^(0)`, equal to `q^{-d} |S_t|`.
    pub zero_term: f64,
    pub max_nonzero: f64,
    /// `2 q^{-(d+1)/2}`.
    pub bound: f64,
    /// `max_{xi != 0} |sum_{t' != a} S_{t'}^(xi)|`, one entry per `a != 0`.
    pub averaged: Vec<(u32, f64)>,
    pub averaged_max: f64,
    /// Frequencies compared against the closed-form reduction.
    pub closed_form_samples: usize,
    pub closed_form_max_gap: f64,
}

impl SphereDecayReport {
    /// Decay and averaged-decay bounds hold with the given slack; only
    /// meaningful for `t != 0`.
    pub fn decay_holds(&self, slack: f64) -> bool {
        self.t != 0 && self.max_nonzero <= self.bound + slack
    }

    pub fn averaged_holds(&self, slack: f64) -> bool {
        self.averaged_max <= self.bound + slack
    }
}

/// Full-DFT decay report for `S_t`; `samples` lists nonzero frequencies at
/// which the closed-form reduction is compared (`None` means all of them).
pub fn sphere_decay_report(
    space: &Space<'_>,
    t: FieldElement,
    samples: Option<&[usize]>,
) -> Result<SphereDecayReport> {
    let f = space.field();
    let s = sphere(space, t);
    let spec = dft_set(space, &s)?;

    let all: Vec<usize>;
    let freqs = match samples {
        Some(list) => list,
        None => {
            all = (1..space.size()).collect();
            &all
        }
    };
    let mut closed_gap = 0.0f64;
    for &m in freqs {
        let closed = sphere_transform_closed_form(space, t, m)?;
        closed_gap = closed_gap.max((closed - spec.at(m)).norm());
    }

    let mut averaged = Vec::with_capacity(f.q() as usize - 1);
    for a in f.nonzero() {
        let mut complement = PointSet::empty(space);
        for r in 0..space.size() {
            if space.norm_of(r) != a {
                complement.insert(r);
            }
        }
        let spec_a = dft_set(space, &complement)?;
        averaged.push((a.rank(), spec_a.max_nonzero()));
    }
    let averaged_max = averaged.iter().map(|&(_, v)| v).fold(0.0, f64::max);

    let q = f.q() as f64;
    Ok(SphereDecayReport {
        q: f.q(),
        d: space.dim(),
        t: t.rank(),
        sphere_size: s.len(),
        zero_term: spec.at(0).re,
        max_nonzero: spec.max_nonzero(),
        bound: 2.0 * q.powf(-(space.dim() as f64 + 1.0) / 2.0),
        averaged,
        averaged_max,
        closed_form_samples: freqs.len(),
        closed_form_max_gap: closed_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_size_formula;

    fn field(q: u64) -> FieldCtx {
        FieldCtx::from_order(q).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn point_mass_and_full_space() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        let point = PointSet::from_ranks(&s, [0]).unwrap();
        let spec = dft_set(&s, &point).unwrap();
        assert!(spec
            .values()
            .iter()
            .all(|v| (v - c(1.0 / 25.0)).norm() < 1e-12));
        let full = dft_set(&s, &PointSet::full(&s)).unwrap();
        assert!((full.at(0) - c(1.0)).norm() < 1e-12);
        assert!(full.max_nonzero() < 1e-12);
        // inverse of the flat spectrum is the point mass
        let back = idft(&s, &spec).unwrap();
        assert!((back[0] - c(1.0)).norm() < 1e-12);
        assert!(back[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn sphere_zero_term() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        let spec = dft_set(&s, &sphere(&s, FieldElement::ONE)).unwrap();
        assert!((spec.at(0) - c(4.0 / 25.0)).norm() < 1e-12);
    }

    #[test]
    fn round_trip_sphere_f3_cubed() {
        let f = field(3);
        let s = Space::new(&f, 3).unwrap();
        let set = sphere(&s, FieldElement::ONE);
        let spec = dft_set(&s, &set).unwrap();
        let back = idft(&s, &spec).unwrap();
        for (r, v) in back.iter().enumerate() {
            let want = if set.contains(r) { 1.0 } else { 0.0 };
            assert!((v - c(want)).norm() < 1e-10);
        }
    }

    #[test]
    fn plancherel_for_indicator_and_zero() {
        let f = field(7);
        let s = Space::new(&f, 2).unwrap();
        let set = PointSet::from_ranks(&s, [0, 3, 11, 40]).unwrap();
        let vals: Vec<Complex64> = set.indicator().into_iter().map(c).collect();
        let spec = dft(&s, &vals).unwrap();
        let lhs: f64 = spec.values().iter().map(|v| v.norm_sqr()).sum();
        assert!((lhs - 4.0 / 49.0).abs() < 1e-12);
        assert!(plancherel_gap(&s, &vals).unwrap() < 1e-12);
        assert_eq!(plancherel_gap(&s, &vec![c(0.0); 49]).unwrap(), 0.0);
        assert!(dft(&s, &[c(0.0); 3]).is_err());
    }

    #[test]
    fn salem_examples() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        assert!(salem_constant(&s, &PointSet::full(&s)).unwrap() < 1e-9);
        let point = PointSet::from_ranks(&s, [0]).unwrap();
        assert!((salem_constant(&s, &point).unwrap() - 1.0).abs() < 1e-12);
        assert!(salem_constant(&s, &PointSet::empty(&s)).is_err());
        let f7 = field(7);
        let s7 = Space::new(&f7, 3).unwrap();
        let s1 = sphere(&s7, FieldElement::ONE);
        assert_eq!(
            s1.len() as u64,
            sphere_size_formula(&f7, FieldElement::ONE, 3)
        );
        assert!(salem_constant(&s7, &s1).unwrap() <= 2.5);
    }

    #[test]
    fn decay_report_f5_plane() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        let report = sphere_decay_report(&s, FieldElement::ONE, None).unwrap();
        assert!((report.bound - 2.0 * 5f64.powf(-1.5)).abs() < 1e-12);
        assert!(report.decay_holds(1e-9));
        assert!(report.averaged_holds(1e-9));
        assert!(report.closed_form_max_gap < 1e-9);
        assert!((report.zero_term - 4.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_rejects_zero_frequency() {
        let f = field(5);
        let s = Space::new(&f, 2).unwrap();
        assert!(sphere_transform_closed_form(&s, FieldElement::ONE, 0).is_err());
    }
}
