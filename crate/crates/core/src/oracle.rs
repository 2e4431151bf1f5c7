//! Brute-force grid oracle.
//!
//! Enumerates `{0, h, 2h, …, p_max}^n` and classifies every point using only
//! the per-player predicates of [`GameSpec`]. Nothing here touches the
//! boundary system or the closed forms, so it can check them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GameSpec, PowerProfile};

/// Largest grid `enumerate` will scan.
pub const MAX_GRID_POINTS: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub grid_step: f64,
    pub se_points: Vec<PowerProfile>,
    /// SE points where every player's next lower grid power leaves it
    /// unsatisfied (or it already transmits at zero).
    pub ese_candidates: Vec<PowerProfile>,
    /// SE points where no single-player move to an adjacent satisfying grid
    /// power lowers that player's `p_i / u_i`.
    pub vse_candidates: Vec<PowerProfile>,
    /// Least total power among SE points (largest `1 / Σ p_i`).
    pub g_best: Option<PowerProfile>,
    /// Largest total power among SE points.
    pub g_worst: Option<PowerProfile>,
}

impl OracleResult {
    pub fn is_empty(&self) -> bool {
        self.se_points.is_empty()
    }
}

/// Power levels on one axis: multiples of `step` below `p_max`, then
/// `p_max` itself.
pub fn grid_axis(p_max: f64, step: f64) -> Vec<f64> {
    let k = axis_intervals(p_max, step) as usize;
    (0..=k)
        .map(|m| if m == k { p_max } else { m as f64 * step })
        .collect()
}

fn axis_intervals(p_max: f64, step: f64) -> f64 {
    let ratio = p_max / step;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
        rounded
    } else {
        ratio.floor() + 1.0
    }
}

/// Row-major (first player slowest) walk over `axis^n`.
#[derive(Debug, Clone)]
pub struct GridPoints<'a> {
    axis: &'a [f64],
    index: Vec<usize>,
    done: bool,
}

impl<'a> GridPoints<'a> {
    pub fn new(axis: &'a [f64], n: usize) -> Self {
        Self {
            axis,
            index: vec![0; n],
            done: axis.is_empty(),
        }
    }
}

impl Iterator for GridPoints<'_> {
    type Item = (Vec<usize>, Vec<f64>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let index = self.index.clone();
        let point = index.iter().map(|&k| self.axis[k]).collect();
        self.done = true;
        for slot in self.index.iter_mut().rev() {
            *slot += 1;
            if *slot < self.axis.len() {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some((index, point))
    }
}

/// Number of points `enumerate` would visit.
pub fn grid_size(p_max: f64, step: f64, n: usize) -> f64 {
    (axis_intervals(p_max, step) + 1.0).powi(n as i32)
}

pub fn enumerate(game: &GameSpec, grid_step: f64) -> Result<OracleResult> {
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::invalid(format!("grid_step = {grid_step} must be positive")));
    }
    let n = game.n();
    let points = grid_size(game.p_max(), grid_step, n);
    if points > MAX_GRID_POINTS {
        return Err(Error::ResourceLimit {
            points,
            limit: MAX_GRID_POINTS,
        });
    }
    let axis = grid_axis(game.p_max(), grid_step);

    let mut result = OracleResult {
        grid_step,
        se_points: Vec::new(),
        ese_candidates: Vec::new(),
        vse_candidates: Vec::new(),
        g_best: None,
        g_worst: None,
    };
    let (mut best_total, mut worst_total) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut probe = vec![0.0; n];

    for (index, point) in GridPoints::new(&axis, n) {
        if !(0..n).all(|i| game.is_satisfied(i, &point)) {
            continue;
        }
        probe.copy_from_slice(&point);

        let efficient = (0..n).all(|i| {
            if index[i] == 0 {
                return true;
            }
            probe[i] = axis[index[i] - 1];
            let lower_ok = game.is_satisfied(i, &probe);
            probe[i] = point[i];
            !lower_ok
        });

        let valued = (0..n).all(|i| {
            let own = game.cost_ratio(i, &point);
            let neighbours = [index[i].checked_sub(1), Some(index[i] + 1)];
            let improved = neighbours
                .into_iter()
                .flatten()
                .filter(|&k| k < axis.len())
                .any(|k| {
                    probe[i] = axis[k];
                    let better = game.is_satisfied(i, &probe) && game.cost_ratio(i, &probe) < own;
                    probe[i] = point[i];
                    better
                });
            !improved
        });

        let total: f64 = point.iter().sum();
        let profile = PowerProfile::new(point);
        if total < best_total {
            best_total = total;
            result.g_best = Some(profile.clone());
        }
        if total > worst_total {
            worst_total = total;
            result.g_worst = Some(profile.clone());
        }
        if efficient {
            result.ese_candidates.push(profile.clone());
        }
        if valued {
            result.vse_candidates.push(profile.clone());
        }
        result.se_points.push(profile);
    }
    Ok(result)
}
