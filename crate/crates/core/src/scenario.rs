//! TOML scenario files.
//!
//! ```toml
//! schema_version = 1
//! n = 2
//! gammas = [0.5, 0.5]
//! p_max = 1.0
//! # normalized form ...
//! a = [[1.0, 0.5], [0.5, 1.0]]
//! noise = [0.1, 0.1]
//! # ... or raw form
//! # h = [[2.0, 1.0], [1.0, 4.0]]
//! # awgn = 0.2
//! ```
//!
//! `a[j][i]` and `h[j][i]` are gains from transmitter `j` into receiver `i`.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::model::{GameSpec, RawChannel};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("{0}")]
    Syntax(String),
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        field: String,
        line: usize,
        message: String,
    },
    #[error("scenario must give exactly one channel form: either `a` + `noise` (normalized) or `h` + `awgn` (raw)")]
    ChannelForm,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: Spanned<u32>,
    n: Spanned<usize>,
    a: Option<Spanned<Vec<Vec<f64>>>>,
    noise: Option<Spanned<Vec<f64>>>,
    h: Option<Spanned<Vec<Vec<f64>>>>,
    awgn: Option<Spanned<f64>>,
    gammas: Spanned<Vec<f64>>,
    p_max: Spanned<f64>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize)]
struct NormalizedFile<'a> {
    schema_version: u32,
    n: usize,
    gammas: &'a [f64],
    p_max: f64,
    a: &'a [Vec<f64>],
    noise: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [String]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelForm {
    Raw(RawChannel),
    Normalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub channel: ChannelForm,
    pub labels: Option<Vec<String>>,
    game: GameSpec,
}

struct Locator<'a>(&'a str);

impl Locator<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn err(&self, field: &str, span: Range<usize>, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Field {
            field: field.to_string(),
            line: self.line(span),
            message: message.into(),
        }
    }
}

fn check_len<T>(loc: &Locator, field: &str, value: &Spanned<Vec<T>>, n: usize) -> Result<(), ScenarioError> {
    let len = value.get_ref().len();
    if len != n {
        return Err(loc.err(field, value.span(), format!("has {len} entries, expected n = {n}")));
    }
    Ok(())
}

fn check_matrix(loc: &Locator, field: &str, value: &Spanned<Vec<Vec<f64>>>, n: usize) -> Result<(), ScenarioError> {
    check_len(loc, field, value, n)?;
    for (row, r) in value.get_ref().iter().enumerate() {
        if r.len() != n {
            return Err(loc.err(
                field,
                value.span(),
                format!("row {} has {} entries, expected n = {n}", row + 1, r.len()),
            ));
        }
    }
    Ok(())
}

/// Attributes a model validation error to the scenario field it names.
fn field_error(loc: &Locator, fields: &[(&str, &str, Range<usize>)], err: crate::Error) -> ScenarioError {
    let message = match err {
        crate::Error::InvalidInput(m) => m,
        other => other.to_string(),
    };
    match fields.iter().find(|(prefix, _, _)| message.starts_with(prefix)) {
        Some((_, field, span)) => loc.err(field, span.clone(), message),
        None => ScenarioError::Syntax(message),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string().trim_end().to_string()))?;
        let loc = Locator(text);

        if *file.schema_version.get_ref() != SCHEMA_VERSION {
            return Err(loc.err(
                "schema_version",
                file.schema_version.span(),
                format!("unsupported version {}, expected {SCHEMA_VERSION}", file.schema_version.get_ref()),
            ));
        }
        let n = *file.n.get_ref();
        if n == 0 {
            return Err(loc.err("n", file.n.span(), "must be at least 1"));
        }
        check_len(&loc, "gammas", &file.gammas, n)?;

        let gammas = file.gammas.get_ref().clone();
        let p_max = *file.p_max.get_ref();
        let mut fields = vec![
            ("gamma", "gammas", file.gammas.span()),
            ("p_max", "p_max", file.p_max.span()),
        ];
        let (game, channel) = match (file.a, file.noise, file.h, file.awgn) {
            (Some(a), Some(noise), None, None) => {
                check_matrix(&loc, "a", &a, n)?;
                check_len(&loc, "noise", &noise, n)?;
                fields.push(("a_", "a", a.span()));
                fields.push(("noise", "noise", noise.span()));
                let game = GameSpec::new(a.into_inner(), noise.into_inner(), gammas, p_max);
                (game, ChannelForm::Normalized)
            }
            (None, None, Some(h), Some(awgn)) => {
                check_matrix(&loc, "h", &h, n)?;
                fields.push(("h_", "h", h.span()));
                fields.push(("awgn", "awgn", awgn.span()));
                let raw = RawChannel::new(h.into_inner(), awgn.into_inner())
                    .map_err(|e| field_error(&loc, &fields, e))?;
                let game = GameSpec::from_raw(&raw, gammas, p_max);
                (game, ChannelForm::Raw(raw))
            }
            _ => return Err(ScenarioError::ChannelForm),
        };
        Ok(Self {
            channel,
            labels: file.labels,
            game: game.map_err(|e| field_error(&loc, &fields, e))?,
        })
    }

    pub fn from_game(game: GameSpec) -> Self {
        Self {
            channel: ChannelForm::Normalized,
            labels: None,
            game,
        }
    }

    pub fn game(&self) -> &GameSpec {
        &self.game
    }

    /// Normalized-form TOML of this scenario.
    pub fn to_normalized_toml(&self) -> String {
        let file = NormalizedFile {
            schema_version: SCHEMA_VERSION,
            n: self.game.n(),
            gammas: self.game.thresholds(),
            p_max: self.game.p_max(),
            a: self.game.attenuation_matrix(),
            noise: self.game.noise(),
            labels: self.labels.as_deref(),
        };
        toml::to_string(&file).expect("normalized scenario serializes")
    }
}
