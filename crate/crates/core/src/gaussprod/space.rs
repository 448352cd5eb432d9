//! Finite spaces of homogeneous type and their dyadic cubes.

use crate::error::{Error, Result};
use crate::grid::WeightedGrid;

/// Metric on the points of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Graph distance on the cycle `Z_K`.
    Cyclic,
    /// `|x − y|` between the given ascending positions.
    Line(Vec<f64>),
}

/// Finite set with a positive measure and a metric.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousSpace {
    mu: Vec<f64>,
    metric: Metric,
}

impl HomogeneousSpace {
    /// `Z_K` with counting measure and graph metric.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("Z_K needs K ≥ 1".into()));
        }
        Ok(Self { mu: vec![1.0; k], metric: Metric::Cyclic })
    }

    /// Points `x_0 < x_1 < …` on the line with weights `w_i`.
    pub fn weighted_interval(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::Shape(format!("{} nodes with {} weights", nodes.len(), weights.len())));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("interval nodes must be strictly ascending".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Parameter("interval weights must be positive".into()));
        }
        Ok(Self { mu: weights, metric: Metric::Line(nodes) })
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn total(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Cyclic => {
                let k = self.len();
                let d = i.abs_diff(j);
                d.min(k - d) as f64
            }
            Metric::Line(x) => (x[i] - x[j]).abs(),
        }
    }

    /// `μ(B(x, r))` for the closed ball `ζ(x, y) ≤ r`.
    pub fn ball_measure(&self, center: usize, radius: f64) -> f64 {
        (0..self.len()).filter(|y| self.distance(center, *y) <= radius).map(|y| self.mu[y]).sum()
    }

    /// `max μ(B(x, 2r))/μ(B(x, r))` over all centers and all radii realized
    /// as distances between points.
    pub fn doubling_constant(&self) -> f64 {
        let n = self.len();
        let mut worst = 1.0f64;
        for x in 0..n {
            let mut radii: Vec<f64> = (0..n).map(|y| self.distance(x, y)).filter(|r| *r > 0.0).collect();
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            for r in radii {
                worst = worst.max(self.ball_measure(x, 2.0 * r) / self.ball_measure(x, r));
            }
        }
        worst
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.mu).map(|(v, m)| v * m).sum()
    }
}

/// A dyadic cube: the index range `start..end` of the space.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    pub start: usize,
    pub end: usize,
    /// Index of the containing cube in the previous generation.
    pub parent: Option<usize>,
    pub center: usize,
    pub measure: f64,
    /// `μ(B̲(Q))` of the largest open ball around the center inside the cube.
    pub inner_ball: f64,
}

impl Cube {
    pub fn contains(&self, x: usize) -> bool {
        (self.start..self.end).contains(&x)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Nested partitions of a [`HomogeneousSpace`] by binary splitting of index
/// ranges. Generation `0` is the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicSystem {
    space: HomogeneousSpace,
    generations: Vec<Vec<Cube>>,
}

impl DyadicSystem {
    pub fn binary(space: HomogeneousSpace, generations: usize) -> Result<Self> {
        Self::regular(space, 2, generations)
    }

    /// Splits every cube into `branching` consecutive pieces of nearly equal
    /// size (single points once a cube is smaller than `branching`).
    pub fn regular(space: HomogeneousSpace, branching: usize, generations: usize) -> Result<Self> {
        if generations == 0 {
            return Err(Error::Parameter("a dyadic system needs at least one generation".into()));
        }
        if branching < 2 {
            return Err(Error::Parameter(format!("branching factor {branching} must be at least 2")));
        }
        let mut gens: Vec<Vec<Cube>> = vec![vec![Self::cube(&space, 0, space.len(), None)]];
        for _ in 1..generations {
            let prev = gens.last().expect("nonempty");
            let mut next = Vec::new();
            for (pi, q) in prev.iter().enumerate() {
                let parts = branching.min(q.len());
                let (base, extra) = (q.len() / parts, q.len() % parts);
                let mut start = q.start;
                for i in 0..parts {
                    let end = start + base + usize::from(i < extra);
                    next.push(Self::cube(&space, start, end, Some(pi)));
                    start = end;
                }
            }
            gens.push(next);
        }
        Ok(Self { space, generations: gens })
    }

    fn cube(space: &HomogeneousSpace, start: usize, end: usize, parent: Option<usize>) -> Cube {
        let outside: Vec<usize> = (0..space.len()).filter(|y| !(start..end).contains(y)).collect();
        let reach = |c: usize| outside.iter().map(|y| space.distance(c, *y)).fold(f64::INFINITY, f64::min);
        let center = (start..end).fold(start, |best, c| if reach(c) > reach(best) { c } else { best });
        let r = reach(center);
        let inner_ball = (start..end).filter(|y| space.distance(center, *y) < r).map(|y| space.mu[y]).sum();
        let measure = space.mu[start..end].iter().sum();
        Cube { start, end, parent, center, measure, inner_ball }
    }

    pub fn space(&self) -> &HomogeneousSpace {
        &self.space
    }

    pub fn generations(&self) -> &[Vec<Cube>] {
        &self.generations
    }

    pub fn depth(&self) -> usize {
        self.generations.len()
    }

    /// Index of the generation-`l` cube containing point `x`.
    pub fn locate(&self, l: usize, x: usize) -> usize {
        self.generations[l].iter().position(|q| q.contains(x)).expect("generations partition the space")
    }

    /// `C_μ = max(μ(parent)/μ(Q), μ(Q)/μ(B̲(Q)))` over all cubes.
    pub fn doubling_constant(&self) -> f64 {
        let mut c = 1.0f64;
        for (l, gen) in self.generations.iter().enumerate() {
            for q in gen {
                c = c.max(q.measure / q.inner_ball);
                if let Some(p) = q.parent {
                    c = c.max(self.generations[l - 1][p].measure / q.measure);
                }
            }
        }
        c
    }

    /// Whether every generation partitions the space and each cube lies in its parent.
    pub fn is_consistent(&self) -> bool {
        let n = self.space.len();
        self.generations.iter().enumerate().all(|(l, gen)| {
            let mut covered = vec![0usize; n];
            gen.iter().for_each(|q| (q.start..q.end).for_each(|x| covered[x] += 1));
            let partition = covered.iter().all(|c| *c == 1);
            let nested = gen.iter().all(|q| match q.parent {
                None => l == 0,
                Some(p) => {
                    let pq = &self.generations[l - 1][p];
                    pq.start <= q.start && q.end <= pq.end
                }
            });
            partition && nested
        })
    }
}

/// `X × Y` with a weighted grid on `X` (typically Gaussian) and a dyadic
/// system on `Y`. Functions are stored with the `X` index slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    first: WeightedGrid,
    dyadic: DyadicSystem,
}

impl ProductSpace {
    pub fn new(first: WeightedGrid, dyadic: DyadicSystem) -> Self {
        Self { first, dyadic }
    }

    pub fn first(&self) -> &WeightedGrid {
        &self.first
    }

    pub fn dyadic(&self) -> &DyadicSystem {
        &self.dyadic
    }

    pub fn second(&self) -> &HomogeneousSpace {
        &self.dyadic.space
    }

    pub fn n1(&self) -> usize {
        self.first.len()
    }

    pub fn n2(&self) -> usize {
        self.dyadic.space.len()
    }

    pub fn len(&self) -> usize {
        self.n1() * self.n2()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn check(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::Shape(format!("{} values on a product space of {} points", f.len(), self.len())));
        }
        Ok(())
    }

    /// `∫ |f| d(ν ⊗ μ)`.
    pub fn l1_norm(&self, f: &[f64]) -> f64 {
        let n2 = self.n2();
        let mu = self.second().mu();
        f.iter().enumerate().map(|(i, v)| v.abs() * self.first.weights()[i / n2] * mu[i % n2]).sum()
    }

    /// `(ν ⊗ μ)` of a set given as a mask.
    pub fn measure(&self, mask: &[bool]) -> f64 {
        let n2 = self.n2();
        let mu = self.second().mu();
        mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| self.first.weights()[i / n2] * mu[i % n2]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_system_on_z16() {
        let d = DyadicSystem::binary(HomogeneousSpace::cyclic(16).unwrap(), 3).unwrap();
        assert!(d.is_consistent());
        assert_eq!(d.generations()[2].len(), 4);
        assert_eq!(d.generations()[2][3].start, 12);
        // cubes of 8 and 4 points: inner balls of 7 and 3 points, parent ratio 2
        assert_eq!(d.generations()[1][0].inner_ball, 7.0);
        assert_eq!(d.generations()[2][0].inner_ball, 3.0);
        assert_eq!(d.doubling_constant(), 2.0);
        assert_eq!(d.locate(2, 13), 3);
        assert!(HomogeneousSpace::cyclic(16).unwrap().doubling_constant() <= 3.0);
    }

    #[test]
    fn four_adic_system_ends_in_points() {
        let d = DyadicSystem::regular(HomogeneousSpace::cyclic(16).unwrap(), 4, 3).unwrap();
        assert!(d.is_consistent());
        assert_eq!(d.generations()[1].len(), 4);
        assert!(d.generations()[2].iter().all(|q| q.len() == 1));
        assert_eq!(d.doubling_constant(), 4.0);
        let odd = DyadicSystem::regular(HomogeneousSpace::cyclic(7).unwrap(), 3, 3).unwrap();
        assert!(odd.is_consistent());
        assert_eq!(odd.generations()[1].iter().map(Cube::len).collect::<Vec<_>>(), vec![3, 2, 2]);
    }

    #[test]
    fn weighted_interval() {
        let nodes: Vec<f64> = (0..8).map(|i| i as f64 * 0.5).collect();
        let w: Vec<f64> = (0..8).map(|i| 1.0 + i as f64).collect();
        let s = HomogeneousSpace::weighted_interval(nodes, w).unwrap();
        assert_eq!(s.ball_measure(0, 0.5), 3.0);
        let d = DyadicSystem::binary(s, 4).unwrap();
        assert!(d.is_consistent());
        assert!(d.doubling_constant().is_finite());
        assert!(HomogeneousSpace::weighted_interval(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }
}
