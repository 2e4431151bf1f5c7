//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use gic_satisfaction::analysis::satisfaction_response_dynamics_with;
use gic_satisfaction::model::sinr_target;
use gic_satisfaction::oracle::grid_axis;
use gic_satisfaction::*;
use rand::Rng;

const RANDOM_GAMES: usize = 1000;
const FEASIBLE_GAMES: usize = 200;
const GRID_INTERVALS: f64 = 200.0;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn feasible_games() -> Vec<GameSpec> {
    let mut r = rng(3);
    (0..FEASIBLE_GAMES).map(|_| random_feasible_two_player(&mut r)).collect()
}

fn closed_form_ese() -> Outcome {
    let game = g0();
    let p = ese_two_player(&game).unwrap();
    let dist = inf_distance(&p, &[0.2, 0.2]);
    let rate_err = (0..2)
        .map(|i| (game.utility(i, &p) - 0.5).abs())
        .fold(0.0, f64::max);
    Outcome::new(
        dist <= 1e-12 && rate_err <= 1e-10,
        format!("|ese - (0.2, 0.2)| = {dist:.1e} (tol 1e-12), max |u - Γ| = {rate_err:.1e} (tol 1e-10)"),
    )
}

fn existence_iff() -> Outcome {
    let mut r = rng(1);
    let (mut solve_disagree, mut oracle_disagree, mut exempt, mut feasible) = (0, 0, 0, 0);
    let mut misses = Vec::new();
    for _ in 0..RANDOM_GAMES {
        let game = random_two_player(&mut r);
        let (exists, _) = exists_two_player(&game).unwrap();
        let solved = solve_ese(&game);
        if exists != solved.is_ok() {
            solve_disagree += 1;
        }
        let oracle = enumerate(&game, game.p_max() / GRID_INTERVALS).unwrap();
        match (exists, solved.as_ref().map(|s| s.in_box)) {
            (true, Ok(true)) => {
                feasible += 1;
                if oracle.is_empty() {
                    oracle_disagree += 1;
                    let ese = solved.unwrap().profile;
                    let extent = in_box_extent(&game, &ese);
                    misses.push(format!(
                        "ese {:?}, in-box SE region spans p1 in [{:.4}, {:.4}], p2 in [{:.4}, {:.4}], grid step {:.4}",
                        &*ese,
                        ese[0],
                        extent[0],
                        ese[1],
                        extent[1],
                        game.p_max() / GRID_INTERVALS
                    ));
                }
            }
            (true, _) => {
                // ESE outside the box: the unbounded region exists but misses the box
                exempt += 1;
                if !oracle.is_empty() {
                    oracle_disagree += 1;
                }
            }
            (false, _) => {
                if !oracle.is_empty() {
                    oracle_disagree += 1;
                }
            }
        }
    }
    for m in &misses {
        println!("    oracle empty although ESE is in the box: {m}");
    }
    Outcome::new(
        solve_disagree == 0 && oracle_disagree == 0,
        format!(
            "{RANDOM_GAMES} games, {feasible} feasible in box, {exempt} box-excluded; \
             disagreements: solve {solve_disagree}, oracle {oracle_disagree}"
        ),
    )
}

/// Largest `p_i` inside the SE region and the box, per player (n = 2):
/// player `i` can rise until the other player's boundary line leaves the box.
fn in_box_extent(game: &GameSpec, ese: &[f64]) -> [f64; 2] {
    let mut extent = [game.p_max(); 2];
    for i in 0..2 {
        let j = 1 - i;
        let gain = game.attenuation(i, j);
        if gain > 0.0 {
            let limit = (game.p_max() / sinr_target(game.thresholds()[j]) - game.noise()[j]) / gain;
            extent[i] = extent[i].min(limit).max(ese[i]);
        }
    }
    extent
}

fn uniqueness(games: &[GameSpec]) -> Outcome {
    let (mut failures, mut over_bound, mut empty) = (0, 0, 0);
    let mut worst_ratio = 0.0f64;
    for game in games {
        let h = game.p_max() / GRID_INTERVALS;
        let ese = solve_ese(game).unwrap().profile;
        let oracle = enumerate(game, h).unwrap();
        let c = &oracle.ese_candidates;
        if c.is_empty() {
            empty += 1;
            failures += 1;
            continue;
        }
        let diameter = c
            .iter()
            .flat_map(|x| c.iter().map(move |y| inf_distance(x, y)))
            .fold(0.0, f64::max);
        let reach = c.iter().map(|x| inf_distance(x, &ese)).fold(0.0, f64::max);
        let slack = 1e-12 * game.p_max();
        if diameter > 2.0 * h + slack || reach > 2.0 * h + slack {
            failures += 1;
            worst_ratio = worst_ratio.max(diameter.max(reach) / h);
        }
        if diameter.max(reach) > candidate_spread_bound(game) * h + slack {
            over_bound += 1;
        }
    }
    println!(
        "    grid candidate spread within step·(1 + k)/(1 − k₁k₂) in {}/{} games",
        games.len() - over_bound - empty,
        games.len()
    );
    Outcome::new(
        failures == 0,
        format!(
            "{} feasible games; {failures} with candidate cluster wider than 2·step \
             (largest {worst_ratio:.2}·step, {empty} empty)",
            games.len()
        ),
    )
}

fn valued_equals_efficient(games: &[GameSpec]) -> Outcome {
    let (mut not_valued, mut improved) = (0, 0);
    for game in games {
        let h = game.p_max() / GRID_INTERVALS;
        let ese = solve_ese(game).unwrap().profile;
        if !is_valued_se(game, &ese, h) {
            not_valued += 1;
        }
        let axis = grid_axis(game.p_max(), h);
        let mut probe = ese.to_vec();
        for i in 0..2 {
            let own = game.cost_ratio(i, &ese);
            let tol = 1e-9 * own;
            for &q in &axis {
                probe[i] = q;
                if game.is_satisfied(i, &probe) && game.cost_ratio(i, &probe) < own - tol {
                    improved += 1;
                }
            }
            probe[i] = ese[i];
        }
    }
    Outcome::new(
        not_valued == 0 && improved == 0,
        format!(
            "{} feasible games; ESE not valued in {not_valued}, grid improvements beyond 1e-9 relative: {improved}",
            games.len()
        ),
    )
}

fn price_of_efficiency_is_one(games: &[GameSpec]) -> Outcome {
    let game = g0();
    let g0_poe = price_of_efficiency(&game, &enumerate(&game, game.p_max() / GRID_INTERVALS).unwrap()).unwrap();
    let mut worst = 0.0f64;
    let mut errors = 0;
    for game in games {
        let oracle = enumerate(game, game.p_max() / GRID_INTERVALS).unwrap();
        match price_of_efficiency(game, &oracle) {
            Ok(poe) => worst = worst.max((poe - 1.0).abs()),
            Err(_) => errors += 1,
        }
    }
    Outcome::new(
        (g0_poe - 1.0).abs() <= 1e-9 && worst <= 1e-6 && errors == 0,
        format!(
            "G0 |PoE - 1| = {:.1e} (tol 1e-9); {} random games max |PoE - 1| = {worst:.1e} (tol 1e-6), {errors} errors",
            (g0_poe - 1.0).abs(),
            games.len()
        ),
    )
}

fn max_price_formula(games: &[GameSpec]) -> Outcome {
    let (g0_mposa, _) = max_price_of_satisfaction(&g0()).unwrap();
    let (mut corner_cases, mut formula_err, mut below_one) = (0, 0.0f64, 0);
    for game in games {
        let (mposa, _) = max_price_of_satisfaction(game).unwrap();
        if mposa < 1.0 - 1e-12 {
            below_one += 1;
        }
        let corner = vec![game.p_max(); game.n()];
        if is_satisfaction_equilibrium(game, &corner) {
            corner_cases += 1;
            let ese = solve_ese(game).unwrap().profile;
            let formula = game.n() as f64 * game.p_max() / ese.total();
            formula_err = formula_err.max((mposa - formula).abs());
        }
    }
    Outcome::new(
        (g0_mposa - 5.0).abs() <= 1e-9 && formula_err <= 1e-12 && below_one == 0,
        format!(
            "G0 MPoSa = {g0_mposa} (want 5, tol 1e-9); corner-SE games {corner_cases}, \
             max |MPoSa - n·p_max/ΣP| = {formula_err:.1e} (tol 1e-12); MPoSa < 1 in {below_one}"
        ),
    )
}

fn dynamics_reach_ese() -> Outcome {
    let game = g0();
    let mut previous = vec![0.0; 2];
    let mut monotone = true;
    let out = satisfaction_response_dynamics_with(&game, &[0.0, 0.0], 10_000, 1e-9, |_, p| {
        monotone &= p.iter().zip(&previous).all(|(a, b)| a >= b);
        previous = p.to_vec();
    })
    .unwrap();
    let dist = inf_distance(&out.profile, &[0.2, 0.2]);
    Outcome::new(
        out.converged && out.iterations <= 10_000 && dist <= 1e-9 && monotone,
        format!(
            "converged {} in {} iterations, |p - ESE| = {dist:.1e} (tol 1e-9), nondecreasing {monotone}",
            out.converged, out.iterations
        ),
    )
}

fn normalization_equivalence() -> Outcome {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_GAMES {
        let n = r.gen_range(1..=5);
        let h = (0..n)
            .map(|_| (0..n).map(|_| log_uniform(&mut r, 1e-2, 1e1)).collect())
            .collect();
        let raw = RawChannel::new(h, log_uniform(&mut r, 1e-2, 1e1)).unwrap();
        let game = GameSpec::from_raw(&raw, vec![0.5; n], 10.0).unwrap();
        let p: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..=10.0)).collect();
        for i in 0..n {
            worst = worst.max((raw.utility(i, &p) - game.utility(i, &p)).abs());
        }
    }
    Outcome::new(
        worst <= 1e-12,
        format!("{RANDOM_GAMES} random channels, max |u_raw - u_normalized| = {worst:.1e} (tol 1e-12)"),
    )
}

fn cli_contract() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let run = |file: &str| {
        Command::new(env!("CARGO_BIN_EXE_gic-se"))
            .arg("analyze")
            .arg(dir.join(file))
            .output()
            .expect("gic-se runs")
    };
    let (first, second) = (run("g0.toml"), run("g0.toml"));
    let identical = first.stdout == second.stdout && !first.stdout.is_empty();
    let codes = [
        first.status.code(),
        run("both_forms.toml").status.code(),
        run("g0_infeasible.toml").status.code(),
    ];
    Outcome::new(
        identical && codes == [Some(0), Some(1), Some(2)],
        format!("byte-identical reruns {identical}; exit codes feasible/malformed/infeasible = {codes:?} (want 0/1/2)"),
    )
}

fn main() {
    let games = feasible_games();
    let results = [
        ("1 closed-form ESE", closed_form_ese()),
        ("2 existence iff", existence_iff()),
        ("3 ESE uniqueness", uniqueness(&games)),
        ("4 valued = efficient", valued_equals_efficient(&games)),
        ("5 PoE = 1", price_of_efficiency_is_one(&games)),
        ("6 MPoSa formula", max_price_formula(&games)),
        ("7 dynamics", dynamics_reach_ese()),
        ("8 normalization", normalization_equivalence()),
        ("9 CLI contract", cli_contract()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
