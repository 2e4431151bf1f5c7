//! Game data model and rate math for the Gaussian interference channel.
//!
//! Matrices are indexed `[j][i]`: entry `(j, i)` is the gain from transmitter
//! `j` into receiver `i`. Players are zero-based in code and one-based in
//! user-facing messages.

use std::f64::consts::LN_2;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on rates when deciding whether a player is satisfied.
pub const SATISFACTION_TOL: f64 = 1e-12;

/// Tolerance on powers when checking box membership of a profile.
pub const BOX_TOL: f64 = 1e-12;

fn check_positive(value: f64, what: impl FnOnce() -> String) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{} = {value} must be finite and positive", what())))
    }
}

fn check_square(m: &[Vec<f64>], name: &str) -> Result<usize> {
    let n = m.len();
    if n == 0 {
        return Err(Error::invalid(format!("{name} must have at least one row")));
    }
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::invalid(format!(
                "{name} row {} has {} entries, expected {n}",
                row + 1,
                r.len()
            )));
        }
    }
    Ok(n)
}

/// Un-normalized channel: raw gains `h[j][i]` and a common noise power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawChannel {
    h: Vec<Vec<f64>>,
    awgn: f64,
}

impl RawChannel {
    pub fn new(h: Vec<Vec<f64>>, awgn: f64) -> Result<Self> {
        check_square(&h, "h")?;
        for (j, row) in h.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                check_positive(v, || format!("h_{}{}", j + 1, i + 1))?;
            }
        }
        check_positive(awgn, || "awgn".to_string())?;
        Ok(Self { h, awgn })
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn gain(&self, j: usize, i: usize) -> f64 {
        self.h[j][i]
    }

    pub fn awgn(&self) -> f64 {
        self.awgn
    }

    /// Rate of player `i` evaluated on the raw gains, before normalization.
    pub fn utility(&self, i: usize, p: &[f64]) -> f64 {
        let interference: f64 = (0..self.n())
            .filter(|&j| j != i)
            .map(|j| self.h[j][i] * p[j])
            .sum::<f64>()
            + self.awgn;
        rate(self.h[i][i] * p[i] / interference)
    }
}

/// Divides every column by its direct gain: `a_ji = h_ji / h_ii`,
/// `I_i = I / h_ii`. The returned diagonal is 1.
pub fn normalize(raw: &RawChannel) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = raw.n();
    let attenuation = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { 1.0 } else { raw.h[j][i] / raw.h[i][i] })
                .collect()
        })
        .collect();
    let noise = (0..n).map(|i| raw.awgn / raw.h[i][i]).collect();
    (attenuation, noise)
}

/// `½·log₂(1 + sinr)`.
#[inline]
pub fn rate(sinr: f64) -> f64 {
    0.5 * sinr.ln_1p() / LN_2
}

/// SINR a player needs to reach rate `gamma`: `4^gamma − 1`.
#[inline]
pub fn sinr_target(gamma: f64) -> f64 {
    (gamma * 2.0 * LN_2).exp_m1()
}

/// An N-pair interference-channel game in satisfaction form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    attenuation: Vec<Vec<f64>>,
    noise: Vec<f64>,
    thresholds: Vec<f64>,
    p_max: f64,
}

impl GameSpec {
    /// Builds a game from normalized gains. Off-diagonal attenuations may be
    /// zero (uncoupled links); the diagonal must be exactly 1.
    pub fn new(
        attenuation: Vec<Vec<f64>>,
        noise: Vec<f64>,
        thresholds: Vec<f64>,
        p_max: f64,
    ) -> Result<Self> {
        let n = check_square(&attenuation, "a")?;
        for (name, len) in [("noise", noise.len()), ("gammas", thresholds.len())] {
            if len != n {
                return Err(Error::invalid(format!(
                    "{name} has {len} entries, expected {n}"
                )));
            }
        }
        for (j, row) in attenuation.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if i == j {
                    if v != 1.0 {
                        return Err(Error::invalid(format!(
                            "a_{}{} = {v}: diagonal of the normalized attenuation must be 1",
                            j + 1,
                            i + 1
                        )));
                    }
                } else if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::invalid(format!(
                        "a_{}{} = {v} must be finite and non-negative",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        for (i, &v) in noise.iter().enumerate() {
            check_positive(v, || format!("noise_{}", i + 1))?;
        }
        for (i, &v) in thresholds.iter().enumerate() {
            check_positive(v, || format!("gamma_{}", i + 1))?;
        }
        check_positive(p_max, || "p_max".to_string())?;
        Ok(Self {
            attenuation,
            noise,
            thresholds,
            p_max,
        })
    }

    pub fn from_raw(raw: &RawChannel, thresholds: Vec<f64>, p_max: f64) -> Result<Self> {
        let (attenuation, noise) = normalize(raw);
        Self::new(attenuation, noise, thresholds, p_max)
    }

    /// Symmetric game: every cross gain, noise and threshold equal.
    pub fn symmetric(n: usize, attenuation: f64, noise: f64, threshold: f64, p_max: f64) -> Result<Self> {
        let a = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { attenuation }).collect())
            .collect();
        Self::new(a, vec![noise; n], vec![threshold; n], p_max)
    }

    pub fn n(&self) -> usize {
        self.noise.len()
    }

    /// `a_ji`, the normalized gain from transmitter `j` into receiver `i`.
    pub fn attenuation(&self, j: usize, i: usize) -> f64 {
        self.attenuation[j][i]
    }

    pub fn attenuation_matrix(&self) -> &[Vec<f64>] {
        &self.attenuation
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn with_attenuation(&self, j: usize, i: usize, value: f64) -> Result<Self> {
        let mut a = self.attenuation.clone();
        a[j][i] = value;
        Self::new(a, self.noise.clone(), self.thresholds.clone(), self.p_max)
    }

    pub fn with_noise(&self, i: usize, value: f64) -> Result<Self> {
        let mut noise = self.noise.clone();
        noise[i] = value;
        Self::new(self.attenuation.clone(), noise, self.thresholds.clone(), self.p_max)
    }

    pub fn with_threshold(&self, i: usize, value: f64) -> Result<Self> {
        let mut thresholds = self.thresholds.clone();
        thresholds[i] = value;
        Self::new(self.attenuation.clone(), self.noise.clone(), thresholds, self.p_max)
    }

    pub fn with_p_max(&self, value: f64) -> Result<Self> {
        Self::new(self.attenuation.clone(), self.noise.clone(), self.thresholds.clone(), value)
    }

    /// `4^{Γ_i} − 1`.
    pub fn sinr_target(&self, i: usize) -> f64 {
        sinr_target(self.thresholds[i])
    }

    /// Interference plus noise seen at receiver `i`; `p[i]` is ignored.
    pub fn interference(&self, i: usize, p: &[f64]) -> f64 {
        let cross: f64 = (0..self.n())
            .filter(|&j| j != i)
            .map(|j| self.attenuation[j][i] * p[j])
            .sum();
        cross + self.noise[i]
    }

    pub fn utility(&self, i: usize, p: &[f64]) -> f64 {
        rate(p[i] / self.interference(i, p))
    }

    /// Least power for player `i` to reach its threshold against the other
    /// entries of `p` (`p[i]` is ignored). May exceed `p_max`.
    pub fn min_satisfying_power(&self, i: usize, p: &[f64]) -> f64 {
        self.sinr_target(i) * self.interference(i, p)
    }

    pub fn is_satisfied(&self, i: usize, p: &[f64]) -> bool {
        self.utility(i, p) >= self.thresholds[i] - SATISFACTION_TOL
    }

    /// Cost-to-rate ratio `p_i / u_i`. At `p_i = 0` this is the limit
    /// `2·ln2·(interference + noise)`.
    pub fn cost_ratio(&self, i: usize, p: &[f64]) -> f64 {
        let d = self.interference(i, p);
        if p[i] == 0.0 {
            2.0 * LN_2 * d
        } else {
            p[i] / rate(p[i] / d)
        }
    }

    pub fn utilities(&self, p: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| self.utility(i, p)).collect()
    }
}

/// One strategy profile: a transmit power per player.
///
/// Solvers may return profiles outside `[0, p_max]^n` (the unclamped
/// equilibrium); use [`PowerProfile::checked`] where the box is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerProfile(Vec<f64>);

impl PowerProfile {
    pub fn new(p: Vec<f64>) -> Self {
        Self(p)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Validates length and box membership against `game`.
    pub fn checked(game: &GameSpec, p: Vec<f64>) -> Result<Self> {
        if p.len() != game.n() {
            return Err(Error::Dimension {
                expected: game.n(),
                got: p.len(),
            });
        }
        for (i, &v) in p.iter().enumerate() {
            if !(v.is_finite() && v >= -BOX_TOL && v <= game.p_max() + BOX_TOL) {
                return Err(Error::invalid(format!(
                    "p_{} = {v} outside [0, {}]",
                    i + 1,
                    game.p_max()
                )));
            }
        }
        Ok(Self(p))
    }

    pub fn in_box(&self, p_max: f64) -> bool {
        self.0.iter().all(|&v| v >= -BOX_TOL && v <= p_max + BOX_TOL)
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for PowerProfile {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for PowerProfile {
    fn from(p: Vec<f64>) -> Self {
        Self(p)
    }
}
