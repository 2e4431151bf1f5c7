//! SE region, existence, and the efficient and valued equilibria.
//!
//! The SE region is `{p : A·p ≥ b}` with `A_ii = 1`,
//! `A_ij = a_ji·(1 − 4^{Γ_i})` and `b_i = (4^{Γ_i} − 1)·I_i`. `A` is a
//! Z-matrix, so whenever `A·p = b` has a non-negative solution that solution
//! is the componentwise-least point of the region: the efficient
//! satisfaction equilibrium (ESE).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GameSpec, PowerProfile};

/// Tolerance on powers for boundary and minimality checks.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeRegionSystem {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub p_max: f64,
}

impl SeRegionSystem {
    /// `A·p − b`, one slack per player; all non-negative inside the region.
    pub fn slack(&self, p: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| row.iter().zip(p).map(|(a, p)| a * p).sum::<f64>() - b)
            .collect()
    }
}

pub fn build_system(game: &GameSpec) -> SeRegionSystem {
    let n = game.n();
    let a = (0..n)
        .map(|i| {
            let c = game.sinr_target(i);
            (0..n)
                .map(|j| if i == j { 1.0 } else { -game.attenuation(j, i) * c })
                .collect()
        })
        .collect();
    let b = (0..n).map(|i| game.sinr_target(i) * game.noise()[i]).collect();
    SeRegionSystem {
        a,
        b,
        p_max: game.p_max(),
    }
}

fn require_two_players(game: &GameSpec) -> Result<()> {
    if game.n() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: game.n(),
        });
    }
    Ok(())
}

/// `a_21·a_12·(4^{Γ_1} − 1)(4^{Γ_2} − 1)`.
pub fn condition_product(game: &GameSpec) -> Result<f64> {
    require_two_players(game)?;
    Ok(game.attenuation(1, 0) * game.attenuation(0, 1) * game.sinr_target(0) * game.sinr_target(1))
}

/// Whether the two boundary lines cross in the first quadrant, with the
/// condition product that decides it. Ignores `p_max`.
pub fn exists_two_player(game: &GameSpec) -> Result<(bool, f64)> {
    let product = condition_product(game)?;
    Ok((product < 1.0, product))
}

/// Closed-form crossing point of the two boundary lines.
pub fn ese_two_player(game: &GameSpec) -> Result<PowerProfile> {
    let (exists, product) = exists_two_player(game)?;
    if !exists {
        return Err(Error::no_equilibrium(
            format!("condition product {product} is not below 1"),
            Some(product),
        ));
    }
    let (c1, c2) = (game.sinr_target(0), game.sinr_target(1));
    let (a21, a12) = (game.attenuation(1, 0), game.attenuation(0, 1));
    let (i1, i2) = (game.noise()[0], game.noise()[1]);
    let denom = 1.0 - product;
    Ok(PowerProfile::new(vec![
        c1 * (a21 * c2 * i2 + i1) / denom,
        c2 * (a12 * c1 * i1 + i2) / denom,
    ]))
}

/// Solves the square system by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, &y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * y;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EseSolution {
    pub profile: PowerProfile,
    pub in_box: bool,
}

/// ESE for any number of players: the non-negative solution of `A·p = b`.
pub fn solve_ese(game: &GameSpec) -> Result<EseSolution> {
    let system = build_system(game);
    let p = solve_dense(system.a, system.b)
        .ok_or_else(|| Error::no_equilibrium("boundary system is singular", None))?;
    if let Some(i) = p.iter().position(|&v| v < 0.0) {
        return Err(Error::no_equilibrium(
            format!("boundary intersection has negative power p_{} = {}", i + 1, p[i]),
            None,
        ));
    }
    let profile = PowerProfile::new(p);
    let in_box = profile.in_box(game.p_max());
    Ok(EseSolution { profile, in_box })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOutcome {
    pub profile: PowerProfile,
    pub iterations: usize,
    pub converged: bool,
}

/// Synchronous satisfaction-response dynamics: every round each player
/// moves to `min(min_satisfying_power, p_max)` against the previous round.
pub fn satisfaction_response_dynamics(
    game: &GameSpec,
    p0: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<DynamicsOutcome> {
    satisfaction_response_dynamics_with(game, p0, max_iters, tol, |_, _| {})
}

/// As [`satisfaction_response_dynamics`], calling `observe(round, profile)`
/// on the start profile (round 0) and after every round.
pub fn satisfaction_response_dynamics_with(
    game: &GameSpec,
    p0: &[f64],
    max_iters: usize,
    tol: f64,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<DynamicsOutcome> {
    if max_iters == 0 {
        return Err(Error::invalid("max_iters must be at least 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tol = {tol} must be positive")));
    }
    let mut p = PowerProfile::checked(game, p0.to_vec())?.into_inner();
    observe(0, &p);
    for round in 1..=max_iters {
        let next: Vec<f64> = (0..game.n())
            .map(|i| game.min_satisfying_power(i, &p).min(game.p_max()))
            .collect();
        let change = next
            .iter()
            .zip(&p)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        p = next;
        observe(round, &p);
        if change < tol {
            return Ok(DynamicsOutcome {
                profile: p.into(),
                iterations: round,
                converged: true,
            });
        }
    }
    Ok(DynamicsOutcome {
        profile: p.into(),
        iterations: max_iters,
        converged: false,
    })
}

pub fn is_satisfaction_equilibrium(game: &GameSpec, p: &[f64]) -> bool {
    (0..game.n()).all(|i| game.is_satisfied(i, p))
}

/// SE where nobody could lower their power and stay satisfied.
pub fn is_efficient_se(game: &GameSpec, p: &[f64]) -> bool {
    is_satisfaction_equilibrium(game, p)
        && (0..game.n()).all(|i| p[i] <= game.min_satisfying_power(i, p) + BOUNDARY_TOL)
}

/// SE where each player minimizes `p_i / u_i` over its satisfying interval
/// `[min_satisfying_power, p_max]`, scanned at `grid_step`. The ratio is
/// increasing in `p_i`, so the minimizer must also sit at the interval's
/// lower end.
pub fn is_valued_se(game: &GameSpec, p: &[f64], grid_step: f64) -> bool {
    assert!(grid_step > 0.0, "grid_step must be positive");
    if !is_satisfaction_equilibrium(game, p) {
        return false;
    }
    let mut probe = p.to_vec();
    (0..game.n()).all(|i| {
        let lo = game.min_satisfying_power(i, p);
        if p[i] > lo + BOUNDARY_TOL {
            return false;
        }
        let own = game.cost_ratio(i, p);
        let slack = BOUNDARY_TOL * own.abs().max(1.0);
        let steps = ((game.p_max() - lo) / grid_step).floor().max(0.0) as usize;
        let beaten = (0..=steps + 1).any(|k| {
            probe[i] = (lo + k as f64 * grid_step).min(game.p_max());
            game.is_satisfied(i, &probe) && game.cost_ratio(i, &probe) < own - slack
        });
        probe[i] = p[i];
        !beaten
    })
}

/// Existence verdicts and the ESE with its boundary tightness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    /// SE region intersects `[0, p_max]^n`.
    pub exists: bool,
    /// SE region is non-empty in the unbounded non-negative orthant.
    pub exists_in_quadrant: bool,
    /// Two-player games only.
    pub condition_product: Option<f64>,
    pub ese: Option<PowerProfile>,
    pub ese_in_box: bool,
    /// `u_i − Γ_i` at the ESE.
    pub tightness: Vec<f64>,
}

pub fn analyze(game: &GameSpec) -> EquilibriumReport {
    let condition_product = condition_product(game).ok();
    match solve_ese(game) {
        Ok(EseSolution { profile, in_box }) => {
            let tightness = (0..game.n())
                .map(|i| game.utility(i, &profile) - game.thresholds()[i])
                .collect();
            EquilibriumReport {
                exists: in_box,
                exists_in_quadrant: true,
                condition_product,
                ese: Some(profile),
                ese_in_box: in_box,
                tightness,
            }
        }
        Err(_) => EquilibriumReport {
            exists: false,
            exists_in_quadrant: false,
            condition_product,
            ese: None,
            ese_in_box: false,
            tightness: Vec::new(),
        },
    }
}
