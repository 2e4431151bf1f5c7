#![allow(dead_code)]

use gic_satisfaction::model::sinr_target;
use gic_satisfaction::{solve_ese, GameSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn g0() -> GameSpec {
    GameSpec::symmetric(2, 0.5, 0.1, 0.5, 1.0).unwrap()
}

/// Two-player game with `a_12`, `a_21`, `Γ_i` and `I_i` log-uniform in
/// `[1e-2, 1e1]` and `p_max` log-uniform in `[1e-1, 1e2]`.
pub fn random_two_player(rng: &mut StdRng) -> GameSpec {
    let mut draw = || log_uniform(rng, 1e-2, 1e1);
    let (a12, a21) = (draw(), draw());
    let noise = vec![draw(), draw()];
    let gammas = vec![draw(), draw()];
    let p_max = log_uniform(rng, 1e-1, 1e2);
    GameSpec::new(vec![vec![1.0, a12], vec![a21, 1.0]], noise, gammas, p_max).unwrap()
}

/// Random two-player game whose ESE exists and lies in the power box.
pub fn random_feasible_two_player(rng: &mut StdRng) -> GameSpec {
    loop {
        let game = random_two_player(rng);
        if solve_ese(&game).map(|s| s.in_box).unwrap_or(false) {
            return game;
        }
    }
}

pub fn inf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Spread of the grid ESE candidates around the ESE, in grid steps:
/// `max_i (1 + k_i) / (1 − k_1 k_2)` with `k_1 = c_1 a_21`, `k_2 = c_2 a_12`.
/// Tends to 1 as the coupling vanishes.
pub fn candidate_spread_bound(game: &GameSpec) -> f64 {
    let k1 = sinr_target(game.thresholds()[0]) * game.attenuation(1, 0);
    let k2 = sinr_target(game.thresholds()[1]) * game.attenuation(0, 1);
    (1.0 + k1.max(k2)) / (1.0 - k1 * k2)
}
