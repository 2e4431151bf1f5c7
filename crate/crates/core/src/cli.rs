//! Command implementations behind the `gic-se` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::Serialize;

use crate::analysis::{self, EquilibriumReport};
use crate::error::Error;
use crate::metrics::{self, MetricsReport};
use crate::model::{GameSpec, PowerProfile};
use crate::oracle::{grid_axis, GridPoints};
use crate::scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_NO_EQUILIBRIUM: i32 = 2;

/// Oracle grid budget used when `--grid` is not given.
const DEFAULT_GRID_POINTS: f64 = 1e6;
const DEFAULT_GRID_INTERVALS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Round-trippable CSV number: 17 significant digits.
pub fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
    format!("[{}]", items.join(", "))
}

pub fn default_grid_intervals(n: usize) -> usize {
    let per_axis = (DEFAULT_GRID_POINTS.powf(1.0 / n as f64) + 1e-9).floor() as usize;
    per_axis.saturating_sub(1).clamp(1, DEFAULT_GRID_INTERVALS)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisOutput {
    pub labels: Option<Vec<String>>,
    pub n: usize,
    pub tol: f64,
    pub grid_step: f64,
    pub equilibrium: EquilibriumReport,
    /// Every `|u_i − Γ_i|` at the ESE within `tol`.
    pub boundary_tight: bool,
    pub metrics: Option<MetricsReport>,
    pub metrics_error: Option<String>,
}

impl AnalysisOutput {
    pub fn exit_code(&self) -> i32 {
        if self.equilibrium.exists {
            EXIT_OK
        } else {
            EXIT_NO_EQUILIBRIUM
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let eq = &self.equilibrium;
        let mut s = String::new();
        if let Some(labels) = &self.labels {
            let _ = writeln!(s, "labels: {}", labels.join(", "));
        }
        let _ = writeln!(s, "players: {}", self.n);
        let _ = writeln!(s, "exists: {}", eq.exists);
        let _ = writeln!(s, "exists_in_quadrant: {}", eq.exists_in_quadrant);
        if let Some(c) = eq.condition_product {
            let _ = writeln!(s, "condition_product: {c:?}");
        }
        match &eq.ese {
            Some(p) => {
                let _ = writeln!(s, "ese: {}", list(p));
                let _ = writeln!(s, "ese_in_box: {}", eq.ese_in_box);
                let _ = writeln!(s, "tightness: {}", list(&eq.tightness));
                let _ = writeln!(s, "boundary_tight: {} (tol {:?})", self.boundary_tight, self.tol);
            }
            None => {
                let _ = writeln!(s, "ese: none");
            }
        }
        if let Some(m) = &self.metrics {
            let _ = writeln!(s, "poe: {:?} (grid step {:?})", m.poe, self.grid_step);
            let _ = writeln!(s, "mposa: {:?}", m.mposa);
            let _ = writeln!(s, "worst_se_under_g: {}", list(&m.worst_se_under_g));
            let _ = writeln!(s, "objective_g_at_ese: {:?}", m.objective_g_at_ese);
        }
        if let Some(e) = &self.metrics_error {
            let _ = writeln!(s, "metrics: unavailable ({e})");
        }
        s
    }
}

pub fn analyze(scenario: &Scenario, tol: f64, grid_intervals: Option<usize>) -> anyhow::Result<AnalysisOutput> {
    if tol.is_nan() || tol <= 0.0 {
        bail!("--tol must be positive, got {tol}");
    }
    let game = scenario.game();
    let intervals = grid_intervals.unwrap_or_else(|| default_grid_intervals(game.n()));
    if intervals == 0 {
        bail!("--grid must be at least 1");
    }
    let grid_step = game.p_max() / intervals as f64;
    let equilibrium = analysis::analyze(game);
    let boundary_tight = equilibrium.ese.is_some() && equilibrium.tightness.iter().all(|t| t.abs() <= tol);

    let (metrics, metrics_error) = if equilibrium.exists {
        let oracle = crate::oracle::enumerate(game, grid_step)?;
        match metrics::evaluate(game, &oracle) {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(AnalysisOutput {
        labels: scenario.labels.clone(),
        n: game.n(),
        tol,
        grid_step,
        equilibrium,
        boundary_tight,
        metrics,
        metrics_error,
    })
}

/// Writes the region CSV over `(intervals + 1)^n` grid points; returns the
/// number of rows written.
pub fn write_region(game: &GameSpec, intervals: usize, out: &mut dyn Write) -> anyhow::Result<usize> {
    let n = game.n();
    if n > 3 {
        return Err(Error::Unsupported(format!("region export needs n <= 3, scenario has n = {n}")).into());
    }
    if intervals == 0 {
        bail!("--grid must be at least 1");
    }
    let axis = grid_axis(game.p_max(), game.p_max() / intervals as f64);
    let mut header: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    header.extend((1..=n).map(|i| format!("satisfied_{i}")));
    header.push("is_se".into());
    writeln!(out, "{}", header.join(","))?;

    let mut rows = 0;
    for (_, p) in GridPoints::new(&axis, n) {
        let satisfied: Vec<bool> = (0..n).map(|i| game.is_satisfied(i, &p)).collect();
        let mut fields: Vec<String> = p.iter().map(|&v| csv_number(v)).collect();
        fields.extend(satisfied.iter().map(|b| b.to_string()));
        fields.push(satisfied.iter().all(|&b| b).to_string());
        writeln!(out, "{}", fields.join(","))?;
        rows += 1;
    }
    Ok(rows)
}

/// Two-player game parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// `a_12`, transmitter 1 into receiver 2.
    A12,
    /// `a_21`, transmitter 2 into receiver 1.
    A21,
    Gamma(usize),
    Noise(usize),
    PMax,
}

impl FromStr for SweepParam {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "a12" => Self::A12,
            "a21" => Self::A21,
            "gamma_1" => Self::Gamma(0),
            "gamma_2" => Self::Gamma(1),
            "noise_1" => Self::Noise(0),
            "noise_2" => Self::Noise(1),
            "p_max" => Self::PMax,
            other => bail!(
                "unknown sweep parameter `{other}` (expected one of a12, a21, gamma_1, gamma_2, noise_1, noise_2, p_max)"
            ),
        })
    }
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::A12 => "a12",
            Self::A21 => "a21",
            Self::Gamma(0) => "gamma_1",
            Self::Gamma(_) => "gamma_2",
            Self::Noise(0) => "noise_1",
            Self::Noise(_) => "noise_2",
            Self::PMax => "p_max",
        }
    }

    pub fn apply(self, game: &GameSpec, value: f64) -> crate::Result<GameSpec> {
        match self {
            Self::A12 => game.with_attenuation(0, 1, value),
            Self::A21 => game.with_attenuation(1, 0, value),
            Self::Gamma(i) => game.with_threshold(i, value),
            Self::Noise(i) => game.with_noise(i, value),
            Self::PMax => game.with_p_max(value),
        }
    }
}

/// Linear sweep over `steps` intervals, endpoints included.
pub fn write_sweep(
    game: &GameSpec,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    out: &mut dyn Write,
) -> anyhow::Result<usize> {
    if game.n() != 2 {
        return Err(Error::Dimension { expected: 2, got: game.n() }.into());
    }
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if !(from.is_finite() && to.is_finite()) {
        bail!("sweep bounds must be finite");
    }
    writeln!(
        out,
        "{},exists,exists_in_quadrant,condition_product,ese_p1,ese_p2,ese_in_box,mposa",
        param.name()
    )?;
    for k in 0..=steps {
        let value = if k == steps {
            to
        } else {
            from + (to - from) * k as f64 / steps as f64
        };
        let point = param
            .apply(game, value)
            .with_context(|| format!("{} = {value}", param.name()))?;
        let report = analysis::analyze(&point);
        let (p1, p2) = match &report.ese {
            Some(p) => (csv_number(p[0]), csv_number(p[1])),
            None => (String::new(), String::new()),
        };
        let mposa = if report.exists {
            metrics::max_price_of_satisfaction(&point)
                .map(|(m, _)| csv_number(m))
                .unwrap_or_default()
        } else {
            String::new()
        };
        writeln!(
            out,
            "{},{},{},{},{p1},{p2},{},{mposa}",
            csv_number(value),
            report.exists,
            report.exists_in_quadrant,
            csv_number(report.condition_product.unwrap_or(f64::NAN)),
            report.ese_in_box,
        )?;
    }
    Ok(steps + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsSummary {
    pub converged: bool,
    pub iterations: usize,
    pub profile: PowerProfile,
    pub utilities: Vec<f64>,
    /// Every player within `tol` of its least satisfying power or above it.
    /// Iterates from zero approach the ESE from below, so the exact
    /// predicate would reject a converged run.
    pub is_se: bool,
}

impl DynamicsSummary {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
                s.push('\n');
                s
            }
            Format::Text => format!(
                "converged: {}\niterations: {}\nprofile: {}\nutilities: {}\nis_se: {}\n",
                self.converged,
                self.iterations,
                list(&self.profile),
                list(&self.utilities),
                self.is_se
            ),
        }
    }
}

/// Runs satisfaction-response dynamics from the zero profile, optionally
/// writing `iteration,p1..pn,u1..un` rows to `trace`.
pub fn run_dynamics(
    game: &GameSpec,
    max_iters: usize,
    tol: f64,
    mut trace: Option<&mut dyn Write>,
) -> anyhow::Result<DynamicsSummary> {
    let n = game.n();
    if let Some(w) = trace.as_deref_mut() {
        let mut header = vec!["iteration".to_string()];
        header.extend((1..=n).map(|i| format!("p{i}")));
        header.extend((1..=n).map(|i| format!("u{i}")));
        writeln!(w, "{}", header.join(","))?;
    }
    let mut io_error = None;
    let outcome = analysis::satisfaction_response_dynamics_with(game, &vec![0.0; n], max_iters, tol, |k, p| {
        if let (Some(w), None) = (trace.as_deref_mut(), &io_error) {
            let mut fields = vec![k.to_string()];
            fields.extend(p.iter().map(|&v| csv_number(v)));
            fields.extend(game.utilities(p).into_iter().map(csv_number));
            if let Err(e) = writeln!(w, "{}", fields.join(",")) {
                io_error = Some(e);
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    Ok(DynamicsSummary {
        converged: outcome.converged,
        iterations: outcome.iterations,
        utilities: game.utilities(&outcome.profile),
        is_se: (0..n).all(|i| outcome.profile[i] >= game.min_satisfying_power(i, &outcome.profile) - tol),
        profile: outcome.profile,
    })
}
