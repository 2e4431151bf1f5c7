//! Price of Efficiency and Max Price of Satisfaction.
//!
//! Costs are the transmit powers, so a player's cost ratio is `p_i / u_i`.
//! The social objective is `g(p) = 1 / Σ p_i`.

use serde::{Deserialize, Serialize};

use crate::analysis::{is_satisfaction_equilibrium, solve_ese};
use crate::error::{Error, Result};
use crate::model::{GameSpec, PowerProfile, BOX_TOL};
use crate::oracle::{self, OracleResult};

/// Grid budget for the worst-SE scan when `n > 2`.
const WORST_SCAN_POINTS: f64 = 2e6;
const MAX_REFINE_ROUNDS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub poe: f64,
    pub mposa: f64,
    pub worst_se_under_g: PowerProfile,
    pub objective_g_at_ese: f64,
}

pub fn objective_g(p: &[f64]) -> f64 {
    1.0 / p.iter().sum::<f64>()
}

pub fn summed_cost_ratio(game: &GameSpec, p: &[f64]) -> f64 {
    (0..game.n()).map(|i| game.cost_ratio(i, p)).sum()
}

fn max_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Iterates a per-player response map to its fixed point.
fn fixed_point(start: &[f64], mut respond: impl FnMut(usize, &[f64]) -> f64) -> Vec<f64> {
    let mut p = start.to_vec();
    for _ in 0..MAX_REFINE_ROUNDS {
        let next: Vec<f64> = (0..p.len()).map(|i| respond(i, &p)).collect();
        let scale = next.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let done = max_change(&next, &p) <= 4.0 * f64::EPSILON * scale;
        p = next;
        if done {
            break;
        }
    }
    p
}

/// Minimizes `f` on `[lo, hi]` by golden-section search, then keeps the
/// best of the bracket midpoint and the two endpoints.
fn golden_section_min(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let tol = 4.0 * f64::EPSILON * hi.abs().max(1.0);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [lo, mid, hi]
        .into_iter()
        .map(|x| (x, f(x)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
        .0
}

/// Pulls an SE grid point down to the efficient equilibrium it brackets:
/// every player repeatedly drops to its least satisfying power.
fn refine_efficient(game: &GameSpec, p: &[f64]) -> Vec<f64> {
    fixed_point(p, |i, q| game.min_satisfying_power(i, q))
}

/// Pulls an SE grid point to a valued equilibrium: every player repeatedly
/// minimizes its own cost ratio over its satisfying interval.
fn refine_valued(game: &GameSpec, p: &[f64]) -> Vec<f64> {
    let p_max = game.p_max();
    fixed_point(p, |i, q| {
        let lo = game.min_satisfying_power(i, q).min(p_max);
        let mut probe = q.to_vec();
        golden_section_min(lo, p_max, |x| {
            probe[i] = x;
            game.cost_ratio(i, &probe)
        })
    })
}

/// Summed cost ratio of the worst efficient equilibrium over that of the
/// best valued equilibrium. Both sets come from the oracle's candidates,
/// each refined off the grid before comparison.
pub fn price_of_efficiency(game: &GameSpec, oracle: &OracleResult) -> Result<f64> {
    if oracle.is_empty() || oracle.ese_candidates.is_empty() || oracle.vse_candidates.is_empty() {
        return Err(Error::no_equilibrium(
            "oracle found no satisfaction equilibrium in the box",
            None,
        ));
    }
    let worst_efficient = oracle
        .ese_candidates
        .iter()
        .map(|c| summed_cost_ratio(game, &refine_efficient(game, c)))
        .fold(f64::NEG_INFINITY, f64::max);
    let best_valued = oracle
        .vse_candidates
        .iter()
        .map(|c| summed_cost_ratio(game, &refine_valued(game, c)))
        .fold(f64::INFINITY, f64::min);
    Ok(worst_efficient / best_valued)
}

/// Where the two boundary lines of a two-player game leave the box.
fn boundary_exits(game: &GameSpec) -> Vec<Vec<f64>> {
    let p_max = game.p_max();
    let mut exits = Vec::with_capacity(4);
    for i in 0..2 {
        let j = 1 - i;
        let mut top = vec![0.0; 2];
        top[j] = p_max;
        top[i] = game.min_satisfying_power(i, &top);
        exits.push(top);

        // p_max = c_i·(a_ji·p_j + I_i), solved for p_j
        let gain = game.attenuation(j, i);
        if gain > 0.0 {
            let mut side = vec![0.0; 2];
            side[i] = p_max;
            side[j] = (p_max / game.sinr_target(i) - game.noise()[i]) / gain;
            exits.push(side);
        }
    }
    exits
}

/// Box-feasible SE with the largest total power, given the ESE is in the box.
fn worst_se_under_g(game: &GameSpec, ese: &PowerProfile) -> Result<PowerProfile> {
    let n = game.n();
    let p_max = game.p_max();
    let corner = vec![p_max; n];
    if is_satisfaction_equilibrium(game, &corner) {
        return Ok(corner.into());
    }
    let candidates: Vec<Vec<f64>> = if n == 2 {
        boundary_exits(game)
    } else {
        let step = p_max / (WORST_SCAN_POINTS.powf(1.0 / n as f64).floor() - 1.0).max(1.0);
        let scan = oracle::enumerate(game, step)?;
        scan.g_worst.into_iter().map(PowerProfile::into_inner).collect()
    };
    let worst = candidates
        .into_iter()
        .filter(|p| p.iter().all(|&v| v >= -BOX_TOL && v <= p_max * (1.0 + 1e-12) + BOX_TOL))
        .map(|p| p.into_iter().map(|v| v.clamp(0.0, p_max)).collect::<Vec<_>>())
        .filter(|p| is_satisfaction_equilibrium(game, p))
        .chain(std::iter::once(ese.to_vec()))
        .max_by(|a, b| a.iter().sum::<f64>().total_cmp(&b.iter().sum::<f64>()))
        .unwrap();
    Ok(worst.into())
}

/// `g(ESE) / g(worst SE)` and the worst SE under `g`.
pub fn max_price_of_satisfaction(game: &GameSpec) -> Result<(f64, PowerProfile)> {
    let ese = solve_ese(game)?;
    if !ese.in_box {
        return Err(Error::no_equilibrium(
            "efficient equilibrium lies outside [0, p_max]^n",
            None,
        ));
    }
    let worst = worst_se_under_g(game, &ese.profile)?;
    // g(ESE) / g(worst) = Σ worst / Σ ESE
    Ok((worst.total() / ese.profile.total(), worst))
}

pub fn evaluate(game: &GameSpec, oracle: &OracleResult) -> Result<MetricsReport> {
    let (mposa, worst) = max_price_of_satisfaction(game)?;
    let poe = price_of_efficiency(game, oracle)?;
    let ese = solve_ese(game)?.profile;
    Ok(MetricsReport {
        poe,
        mposa,
        worst_se_under_g: worst,
        objective_g_at_ese: objective_g(&ese),
    })
}
