//! Dyadic maximal function in the second variable, the slice-wise
//! Calderón–Zygmund decomposition on `X × Y`, and `H¹` atoms on `Y`.

use super::heat::heat_maximal_l1;
use super::space::{DyadicSystem, HomogeneousSpace, ProductSpace};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

const PROPERTY_TOL: f64 = 1e-12;

fn cube_average(dyadic: &DyadicSystem, l: usize, q: usize, f: &[f64]) -> f64 {
    let cube = &dyadic.generations()[l][q];
    let mu = dyadic.space().mu();
    (cube.start..cube.end).map(|y| f[y].abs() * mu[y]).sum::<f64>() / cube.measure
}

/// `𝓓f(y) = max_l` of the generation-`l` average of `|f|` over the cube containing `y`.
pub fn dyadic_maximal_slice(f: &[f64], dyadic: &DyadicSystem) -> Result<Vec<f64>> {
    let n = dyadic.space().len();
    if f.len() != n {
        return Err(Error::Shape(format!("{} values on {n} points", f.len())));
    }
    let mut out = vec![0.0f64; n];
    for (l, gen) in dyadic.generations().iter().enumerate() {
        for (qi, q) in gen.iter().enumerate() {
            let avg = cube_average(dyadic, l, qi, f);
            out[q.start..q.end].iter_mut().for_each(|o| *o = o.max(avg));
        }
    }
    Ok(out)
}

/// [`dyadic_maximal_slice`] applied with the first variable frozen.
pub fn dyadic_maximal(f: &[f64], product: &ProductSpace) -> Result<Vec<f64>> {
    product.check(f)?;
    let n2 = product.n2();
    let slices = f
        .par_chunks(n2)
        .map(|slice| dyadic_maximal_slice(slice, product.dyadic()))
        .collect::<Result<Vec<_>>>()?;
    Ok(slices.concat())
}

/// `b_j`, supported on `S_j = F_j × Q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BadPart {
    pub generation: usize,
    pub index: usize,
    /// `F_j` as a mask over the first factor.
    pub f_mask: Vec<bool>,
    /// Values on the whole product grid.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CzDecomposition {
    pub threshold: f64,
    pub good: Vec<f64>,
    pub bad: Vec<BadPart>,
    /// Dyadic doubling constant of the second factor.
    pub c_mu: f64,
}

/// Outcome of each property of the decomposition, checked separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CzProperties {
    pub reconstruction: bool,
    pub norm_bound: bool,
    pub good_bounded: bool,
    pub disjoint_supports: bool,
    pub mean_zero: bool,
    pub slice_measure: bool,
    pub averages_comparable: bool,
    pub level_set: bool,
}

impl CzProperties {
    pub fn all(&self) -> bool {
        self.reconstruction
            && self.norm_bound
            && self.good_bounded
            && self.disjoint_supports
            && self.mean_zero
            && self.slice_measure
            && self.averages_comparable
            && self.level_set
    }
}

/// Selected cubes of one slice: maximal cubes with average above `s`.
fn select_slice(slice: &[f64], dyadic: &DyadicSystem, s: f64) -> Vec<(usize, usize)> {
    let n = slice.len();
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    for (l, gen) in dyadic.generations().iter().enumerate() {
        for (qi, q) in gen.iter().enumerate() {
            if !covered[q.start] && cube_average(dyadic, l, qi, slice) > s {
                covered[q.start..q.end].iter_mut().for_each(|c| *c = true);
                chosen.push((l, qi));
            }
        }
    }
    chosen
}

/// Decomposes `f ≥ 0` at height `s` slice by slice: for each `x_1` the
/// maximal dyadic cubes with `|f(x_1, ·)|`-average above `s` form `Q_j`,
/// `F_j` collects the slices selecting `Q_j`, `b_j = χ_{S_j}(f − avg)` and
/// `g` is `f` off `∪S_j` and the cube average on it.
///
/// Requires `s` at least the average of every slice over the whole of `Y`,
/// so that no slice selects `Y` itself.
pub fn cz_decompose(f: &[f64], product: &ProductSpace, s: f64) -> Result<CzDecomposition> {
    product.check(f)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Parameter(format!("threshold s = {s} must be positive")));
    }
    if let Some(i) = f.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::Parameter(format!("f must be finite and nonnegative; f[{i}] = {}", f[i])));
    }
    let n2 = product.n2();
    let dyadic = product.dyadic();
    let top = f
        .chunks(n2)
        .map(|slice| product.second().integrate(slice) / product.second().total())
        .fold(0.0, f64::max);
    if top > s {
        return Err(Error::Parameter(format!("threshold s = {s} is below the largest slice average {top}")));
    }
    let selections: Vec<Vec<(usize, usize)>> = f.par_chunks(n2).map(|slice| select_slice(slice, dyadic, s)).collect();

    let mut good = f.to_vec();
    let mut parts: BTreeMap<(usize, usize), BadPart> = BTreeMap::new();
    for (x1, chosen) in selections.iter().enumerate() {
        let slice = &f[x1 * n2..(x1 + 1) * n2];
        for &(l, qi) in chosen {
            let q = &dyadic.generations()[l][qi];
            let avg = cube_average(dyadic, l, qi, slice);
            let part = parts.entry((l, qi)).or_insert_with(|| BadPart {
                generation: l,
                index: qi,
                f_mask: vec![false; product.n1()],
                values: vec![0.0; f.len()],
            });
            part.f_mask[x1] = true;
            for y in q.start..q.end {
                let i = x1 * n2 + y;
                part.values[i] = f[i] - avg;
                good[i] = avg;
            }
        }
    }
    Ok(CzDecomposition { threshold: s, good, bad: parts.into_values().collect(), c_mu: dyadic.doubling_constant() })
}

impl CzDecomposition {
    /// Checks reconstruction and properties (i)–(v) against `f`. The bound
    /// `|g| ≤ C_μ s` off the selected sets needs the finest generation to
    /// consist of single points, as for [`DyadicSystem::regular`] run to the end.
    pub fn check_properties(&self, f: &[f64], product: &ProductSpace) -> Result<CzProperties> {
        product.check(f)?;
        let n2 = product.n2();
        let s = self.threshold;
        let mu = product.second().mu();
        let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = PROPERTY_TOL * scale;

        let mut sum = self.good.clone();
        for b in &self.bad {
            sum.iter_mut().zip(&b.values).for_each(|(a, v)| *a += v);
        }
        let reconstruction = sum.iter().zip(f).all(|(a, b)| (a - b).abs() <= tol);

        let bad_l1: f64 = self.bad.iter().map(|b| product.l1_norm(&b.values)).sum();
        let norm_bound = product.l1_norm(&self.good) + bad_l1 <= 4.0 * product.l1_norm(f) * (1.0 + PROPERTY_TOL);

        let good_bounded = self.good.iter().all(|g| g.abs() <= self.c_mu * s * (1.0 + PROPERTY_TOL));

        let masks: Vec<Vec<bool>> = self.bad.iter().map(|b| self.support(b, product)).collect();
        let disjoint_supports = (0..f.len()).all(|i| masks.iter().filter(|m| m[i]).count() <= 1);

        let mut mean_zero = true;
        let mut averages_comparable = true;
        let mut slice_measure = true;
        let maximal = dyadic_maximal(f, product)?;
        let mut level_set = true;
        for x1 in 0..product.n1() {
            let slice = &f[x1 * n2..(x1 + 1) * n2];
            let mut covered = 0.0;
            for b in self.bad.iter().filter(|b| b.f_mask[x1]) {
                let q = &product.dyadic().generations()[b.generation][b.index];
                let mean: f64 = (q.start..q.end).map(|y| b.values[x1 * n2 + y] * mu[y]).sum();
                mean_zero &= mean.abs() <= tol * q.measure;
                let avg = cube_average(product.dyadic(), b.generation, b.index, slice);
                averages_comparable &=
                    avg >= s / self.c_mu * (1.0 - PROPERTY_TOL) && avg <= self.c_mu * s * (1.0 + PROPERTY_TOL);
                covered += q.measure;
            }
            slice_measure &= covered <= product.second().integrate(slice) / s * (1.0 + PROPERTY_TOL);
            for y in 0..n2 {
                let i = x1 * n2 + y;
                level_set &= (maximal[i] > s) == masks.iter().any(|m| m[i]);
            }
        }
        Ok(CzProperties {
            reconstruction,
            norm_bound,
            good_bounded,
            disjoint_supports,
            mean_zero,
            slice_measure,
            averages_comparable,
            level_set,
        })
    }

    /// `S_j` as a mask over the product grid.
    pub fn support(&self, b: &BadPart, product: &ProductSpace) -> Vec<bool> {
        let n2 = product.n2();
        let q = &product.dyadic().generations()[b.generation][b.index];
        (0..product.len()).map(|i| b.f_mask[i / n2] && q.contains(i % n2)).collect()
    }

    pub fn export(&self, f: &[f64], product: &ProductSpace) -> Result<CzExport> {
        let bad_l1 = self.bad.iter().map(|b| product.l1_norm(&b.values)).sum();
        Ok(CzExport {
            threshold: self.threshold,
            cubes: self
                .bad
                .iter()
                .map(|b| CzCube { generation: b.generation, index: b.index, f_mask: b.f_mask.clone() })
                .collect(),
            norms: CzNorms {
                f_l1: product.l1_norm(f),
                good_l1: product.l1_norm(&self.good),
                bad_l1,
                c_mu: self.c_mu,
            },
            properties: self.check_properties(f, product)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzCube {
    pub generation: usize,
    pub index: usize,
    #[serde(rename = "F_mask")]
    pub f_mask: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzNorms {
    pub f_l1: f64,
    pub good_l1: f64,
    pub bad_l1: f64,
    pub c_mu: f64,
}

/// JSON form of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzExport {
    pub threshold: f64,
    pub cubes: Vec<CzCube>,
    pub norms: CzNorms,
    pub properties: CzProperties,
}

/// Closed metric ball `ζ(center, ·) ≤ radius` in the second factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

/// Whether `b` is supported in `ball`, bounded by `1/μ(B)` and has mean zero.
pub fn h1_atom_check(b: &[f64], space: &HomogeneousSpace, ball: Ball) -> Result<bool> {
    if b.len() != space.len() {
        return Err(Error::Shape(format!("{} values on {} points", b.len(), space.len())));
    }
    let mass = space.ball_measure(ball.center, ball.radius);
    if !(mass > 0.0) {
        return Err(Error::Parameter(format!("ball around {} of radius {} has measure 0", ball.center, ball.radius)));
    }
    let inside = |y: usize| space.distance(ball.center, y) <= ball.radius;
    let supported = b.iter().enumerate().all(|(y, v)| *v == 0.0 || inside(y));
    let bounded = b.iter().all(|v| v.abs() <= (1.0 + PROPERTY_TOL) / mass);
    let mean_zero = space.integrate(b).abs() <= PROPERTY_TOL;
    Ok(supported && bounded && mean_zero)
}

/// Upper proxy for `‖f‖_{H¹(Y)}` from Calderón–Zygmund decompositions at
/// heights `2^k`: `2^{k_0} μ(Y) + Σ_{k ≥ k_0} 2^k μ({𝓓|f| > 2^k})`, where
/// `2^{k_0}` is the first height above the mean of `|f|`. At most `levels`
/// heights are summed.
pub fn h1_atomic_upper(f: &[f64], dyadic: &DyadicSystem, levels: usize) -> Result<f64> {
    let space = dyadic.space();
    let maximal = dyadic_maximal_slice(f, dyadic)?;
    let mean = f.iter().zip(space.mu()).map(|(v, m)| v.abs() * m).sum::<f64>() / space.total();
    if mean == 0.0 {
        return Ok(0.0);
    }
    let k0 = mean.log2().ceil() as i32;
    let mut total = 2f64.powi(k0) * space.total();
    for k in k0..k0 + levels as i32 {
        let s = 2f64.powi(k);
        let level: f64 = maximal.iter().zip(space.mu()).filter(|(m, _)| **m > s).map(|(_, w)| w).sum();
        if level == 0.0 {
            break;
        }
        total += s * level;
    }
    Ok(total)
}

/// `h1_atomic_upper` next to the heat maximal functional on `Z_K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H1CrossCheck {
    pub atomic_upper: f64,
    pub heat_maximal: f64,
}

impl H1CrossCheck {
    pub fn ratio(&self) -> f64 {
        self.atomic_upper / self.heat_maximal
    }
}

pub fn h1_cross_check(f: &[f64], dyadic: &DyadicSystem, levels: usize, times: &[f64]) -> Result<H1CrossCheck> {
    Ok(H1CrossCheck { atomic_upper: h1_atomic_upper(f, dyadic, levels)?, heat_maximal: heat_maximal_l1(f, times)? })
}
