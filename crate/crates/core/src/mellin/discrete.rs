//! Dyadic-block difference sums for double sequences on `Z²`.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// One of the three block sums with its running suprema over block levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSum {
    pub name: &'static str,
    /// Running supremum over all blocks with level `≤ k`, `k = 1, …, k_max`.
    pub running_sups: Vec<f64>,
    pub sup: f64,
    /// Last three running suprema within 1%.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteReport {
    /// Mixed second difference over `I_k = I_{k_1} × I_{k_2}`.
    pub mixed: BlockSum,
    /// `j_1`-difference over `I_{k_1}`, sup over `j_2`.
    pub first: BlockSum,
    /// `j_2`-difference over `I_{k_2}`, sup over `j_1`.
    pub second: BlockSum,
}

impl DiscreteReport {
    pub fn all_stable(&self) -> bool {
        self.mixed.stable && self.first.stable && self.second.stable
    }
}

/// `I_k = {j : 2^{k-1} ≤ |j| < 2^k}` for `k ≥ 1`.
pub fn dyadic_block(k: u32) -> Vec<i64> {
    if k == 0 {
        return Vec::new();
    }
    let lo = 1i64 << (k - 1);
    let hi = 1i64 << k;
    (-hi + 1..=-lo).chain(lo..hi).collect()
}

fn running(name: &'static str, per_level: Vec<f64>) -> BlockSum {
    let mut acc = 0.0f64;
    let running_sups: Vec<f64> = per_level
        .into_iter()
        .map(|v| {
            acc = acc.max(v);
            acc
        })
        .collect();
    let n = running_sups.len();
    let stable = n < 3 || {
        let (a, b) = (running_sups[n - 3], running_sups[n - 1]);
        b == 0.0 || (b - a).abs() <= 0.01 * b
    };
    BlockSum { name, sup: acc, running_sups, stable }
}

/// Evaluates the three block sums for blocks of level `1 ≤ k ≤ k_max`; the
/// free index in the one-variable sums ranges over `|j| < 2^{k_max}`.
pub fn discrete_marcinkiewicz_check(m: &dyn Fn(i64, i64) -> Complex64, k_max: u32) -> Result<DiscreteReport> {
    if k_max == 0 || k_max > 14 {
        return Err(Error::Parameter(format!("k_max = {k_max} must lie in 1..=14")));
    }
    let size = 1i64 << k_max;
    let blocks: Vec<Vec<i64>> = (1..=k_max).map(dyadic_block).collect();
    let mut mixed = Vec::with_capacity(k_max as usize);
    let mut first = Vec::with_capacity(k_max as usize);
    let mut second = Vec::with_capacity(k_max as usize);
    for level in 1..=k_max as usize {
        // blocks with max(k_1, k_2) = level
        let mut best = 0.0f64;
        for k1 in 1..=level {
            for k2 in 1..=level {
                if k1.max(k2) != level {
                    continue;
                }
                let mut s = 0.0;
                for &j1 in &blocks[k1 - 1] {
                    for &j2 in &blocks[k2 - 1] {
                        s += (m(j1, j2) - m(j1 + 1, j2) - m(j1, j2 + 1) + m(j1 + 1, j2 + 1)).norm();
                    }
                }
                best = best.max(s);
            }
        }
        mixed.push(best);
        let block = &blocks[level - 1];
        let mut b1 = 0.0f64;
        let mut b2 = 0.0f64;
        for free in -size + 1..size {
            let s1: f64 = block.iter().map(|&j1| (m(j1 + 1, free) - m(j1, free)).norm()).sum();
            let s2: f64 = block.iter().map(|&j2| (m(free, j2 + 1) - m(free, j2)).norm()).sum();
            b1 = b1.max(s1);
            b2 = b2.max(s2);
        }
        first.push(b1);
        second.push(b2);
    }
    Ok(DiscreteReport {
        mixed: running("mixed", mixed),
        first: running("first", first),
        second: running("second", second),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sgn(x: i64) -> f64 {
        x.signum() as f64
    }

    #[test]
    fn blocks_skip_zero() {
        assert!(dyadic_block(0).is_empty());
        assert_eq!(dyadic_block(1), vec![-1, 1]);
        assert_eq!(dyadic_block(3), vec![-7, -6, -5, -4, 4, 5, 6, 7]);
    }

    #[test]
    fn constant_sequence_has_zero_sums() {
        let r = discrete_marcinkiewicz_check(&|_, _| Complex64::new(2.0, -1.0), 6).unwrap();
        assert_eq!((r.mixed.sup, r.first.sup, r.second.sup), (0.0, 0.0, 0.0));
        assert!(r.all_stable());
    }

    #[test]
    fn sign_product_is_finite() {
        let m = |a: i64, b: i64| Complex64::new(sgn(a) * sgn(b), 0.0);
        let r = discrete_marcinkiewicz_check(&m, 8).unwrap();
        // the only jump seen from a block is -1 → 0
        assert_eq!(r.first.sup, 1.0);
        assert_eq!(r.second.sup, 1.0);
        assert_eq!(r.mixed.sup, 1.0);
        assert!(r.all_stable());
    }

    #[test]
    fn imaginary_power_scales_with_u() {
        let sup = |u: f64| {
            let m = move |a: i64, _b: i64| {
                if a == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, u * (a.abs() as f64).ln())
                }
            };
            discrete_marcinkiewicz_check(&m, 10).unwrap()
        };
        let (r1, r2, r4) = (sup(0.25), sup(0.5), sup(1.0));
        assert!(r1.first.stable && r2.first.stable && r4.first.stable);
        assert_eq!(r2.second.sup, 0.0);
        let slope = r4.first.sup / r2.first.sup;
        assert!((slope - 2.0).abs() < 0.1, "{slope}");
        assert!((r2.first.sup / r1.first.sup - 2.0).abs() < 0.1);
        assert!(r4.first.sup < 2.0 * 4.0 * std::f64::consts::LN_2);
    }
}
