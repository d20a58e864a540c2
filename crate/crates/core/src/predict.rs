//! Asymptotic predictions for the energies of G(n,p) under each weight:
//! point values for LEL/IE and the two graph energies, brackets for the
//! Laplacian energies, and the location of the Laplacian eigenvalue bulk.
//! Predictions substitute np into the leading-order forms; the o(1) terms
//! live in the comparison tolerances, not here.

use crate::energies::EnergyReport;
use crate::weights::{LimitClass, WeightClass, WeightError, WeightFunction};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

/// Lower Laplacian-energy coefficient 2*sqrt(2)/3.
pub fn le_lower_coeff() -> f64 {
    2.0 * SQRT_2 / 3.0
}

/// Upper Laplacian-energy coefficient sqrt(2).
pub fn le_upper_coeff() -> f64 {
    SQRT_2
}

/// Signless bracket coefficients 16/(3*pi) -/+ sqrt(2).
pub fn le_plus_coeffs() -> (f64, f64) {
    let c = 16.0 / (3.0 * PI);
    (c - SQRT_2, c + SQRT_2)
}

/// Graph-energy coefficient 8/(3*pi).
pub fn energy_coeff() -> f64 {
    8.0 / (3.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "E_adj")]
    EAdj,
    #[serde(rename = "E_Wf")]
    EWf,
    #[serde(rename = "LE_f")]
    LeF,
    #[serde(rename = "LE_plus_f")]
    LePlusF,
    #[serde(rename = "LEL_f")]
    LelF,
    #[serde(rename = "IE_f")]
    IeF,
}

pub const ALL_QUANTITIES: [Quantity; 6] = [
    Quantity::EAdj,
    Quantity::EWf,
    Quantity::LeF,
    Quantity::LePlusF,
    Quantity::LelF,
    Quantity::IeF,
];

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::EAdj => "E_adj",
            Quantity::EWf => "E_Wf",
            Quantity::LeF => "LE_f",
            Quantity::LePlusF => "LE_plus_f",
            Quantity::LelF => "LEL_f",
            Quantity::IeF => "IE_f",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_QUANTITIES
            .iter()
            .copied()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// A point value, a bracket, or neither (indeterminate, with the reason in
/// `note`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub quantity: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Bracket>,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl Prediction {
    pub fn is_indeterminate(&self) -> bool {
        self.value.is_none() && self.bracket.is_none()
    }

    fn point(quantity: Quantity, value: f64, source: &'static str) -> Prediction {
        Prediction { quantity, value: Some(value), bracket: None, source, note: None }
    }

    fn interval(quantity: Quantity, lower: f64, upper: f64, source: &'static str) -> Prediction {
        Prediction {
            quantity,
            value: None,
            bracket: Some(Bracket { lower, upper }),
            source,
            note: None,
        }
    }

    fn indeterminate(quantity: Quantity, source: &'static str, note: &'static str) -> Prediction {
        Prediction { quantity, value: None, bracket: None, source, note: Some(note) }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredictError {
    #[error("edge probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("predictions need n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("{weight} weights non-adjacent pairs; the adjacency energy prediction needs a weight supported on edges")]
    NotAdjacencyBased { weight: &'static str },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

fn validate(n: usize, p: f64) -> Result<(), PredictError> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(PredictError::InvalidProbability(p));
    }
    if n < 2 {
        return Err(PredictError::TooFewVertices(n));
    }
    Ok(())
}

fn n_three_halves(n: usize) -> f64 {
    (n as f64).powf(1.5)
}

/// Shared point prediction for LEL_f and IE_f: sqrt|f1| * sqrt(p) * n^1.5
/// when f1/f2 diverges, sqrt|f2| * sqrt|1+(C-1)p| * n^1.5 when it tends to
/// a finite C.
pub fn predict_lel_ie(w: &WeightFunction, n: usize, p: f64) -> Result<Prediction, PredictError> {
    validate(n, p)?;
    let (f1, f2) = w.asym_pair(n, p)?;
    let value = match w.limit_class() {
        LimitClass::Infinite => f1.abs().sqrt() * p.sqrt() * n_three_halves(n),
        LimitClass::Finite(c) => {
            f2.abs().sqrt() * (1.0 + (c - 1.0) * p).abs().sqrt() * n_three_halves(n)
        }
    };
    Ok(Prediction::point(Quantity::LelF, value, "lel_ie_asymptotic"))
}

fn constant_pair(w: &WeightFunction, n: usize, p: f64) -> Result<Option<(f64, f64)>, PredictError> {
    // D1 = f(1,.), D2 = f(2,.) are constants exactly when the weight reads
    // only the distance.
    if w.class() != WeightClass::Distance {
        return Ok(None);
    }
    Ok(Some(w.asym_pair(n, p)?))
}

/// Bracket [|D1-D2| * 2sqrt(2)/3, |D1-D2| * sqrt(2)] * sqrt(p(1-p)) * n^1.5
/// for LE_f; indeterminate for weights whose D1, D2 are not constants.
pub fn predict_le_bracket(w: &WeightFunction, n: usize, p: f64) -> Result<Prediction, PredictError> {
    validate(n, p)?;
    let pair = constant_pair(w, n, p)?;
    let Some((d1, d2)) = pair else {
        return Ok(Prediction::indeterminate(
            Quantity::LeF,
            "le_bracket",
            "bracket requires constant distance-only weights",
        ));
    };
    let scale = (d1 - d2).abs() * (p * (1.0 - p)).sqrt() * n_three_halves(n);
    let lower = (le_lower_coeff() * scale).max(0.0);
    let upper = le_upper_coeff() * scale;
    Ok(Prediction::interval(Quantity::LeF, lower, upper, "le_bracket"))
}

/// Bracket with coefficients 16/(3pi) -/+ sqrt(2) for LE+_f, the lower
/// endpoint floored at zero if a weight ever drives it negative.
pub fn predict_le_plus_bracket(
    w: &WeightFunction,
    n: usize,
    p: f64,
) -> Result<Prediction, PredictError> {
    validate(n, p)?;
    let pair = constant_pair(w, n, p)?;
    let Some((d1, d2)) = pair else {
        return Ok(Prediction::indeterminate(
            Quantity::LePlusF,
            "le_plus_bracket",
            "bracket requires constant distance-only weights",
        ));
    };
    let scale = (d1 - d2).abs() * (p * (1.0 - p)).sqrt() * n_three_halves(n);
    let (lo, hi) = le_plus_coeffs();
    Ok(Prediction::interval(
        Quantity::LePlusF,
        (lo * scale).max(0.0),
        hi * scale,
        "le_plus_bracket",
    ))
}

/// |f1 - f2| * 8/(3pi) * sqrt(p(1-p)) * n^1.5; indeterminate when f1/f2
/// tends to 1 and the leading coefficient vanishes.
pub fn predict_energy_wf(w: &WeightFunction, n: usize, p: f64) -> Result<Prediction, PredictError> {
    validate(n, p)?;
    let (f1, f2) = w.asym_pair(n, p)?;
    if w.limit_class() == LimitClass::Finite(1.0) {
        return Ok(Prediction::indeterminate(
            Quantity::EWf,
            "energy_wf",
            "leading term vanishes when f(1,np,np)/f(2,np,np) tends to 1",
        ));
    }
    let value = (f1 - f2).abs() * energy_coeff() * (p * (1.0 - p)).sqrt() * n_three_halves(n);
    Ok(Prediction::point(Quantity::EWf, value, "energy_wf"))
}

/// |f1| * 8/(3pi) * sqrt(p(1-p)) * n^1.5 for the weighted adjacency matrix;
/// rejects weights that put mass on non-adjacent pairs.
pub fn predict_energy_adj(w: &WeightFunction, n: usize, p: f64) -> Result<Prediction, PredictError> {
    validate(n, p)?;
    if w.distance_dependent() {
        return Err(PredictError::NotAdjacencyBased { weight: w.name() });
    }
    let (f1, _) = w.asym_pair(n, p)?;
    let value = f1.abs() * energy_coeff() * (p * (1.0 - p)).sqrt() * n_three_halves(n);
    Ok(Prediction::point(Quantity::EAdj, value, "energy_adjacency"))
}

/// Predicted location (f1-f2)*p*n + f2*n of the L_f eigenvalue bulk.
pub fn predict_bulk_eigenvalue(w: &WeightFunction, n: usize, p: f64) -> Result<f64, PredictError> {
    validate(n, p)?;
    let (f1, f2) = w.asym_pair(n, p)?;
    Ok((f1 - f2) * p * n as f64 + f2 * n as f64)
}

/// LE_f - E(W_f) of one computed report; positive confirms the instance.
pub fn conjecture_margin(report: &EnergyReport) -> f64 {
    report.laplacian_energy - report.graph_energy
}

/// Dispatch by quantity. E_adj on a distance-dependent weight degrades to
/// an indeterminate prediction here so sweeps over mixed weight lists can
/// request it uniformly.
pub fn predict_quantity(
    q: Quantity,
    w: &WeightFunction,
    n: usize,
    p: f64,
) -> Result<Prediction, PredictError> {
    match q {
        Quantity::EAdj => match predict_energy_adj(w, n, p) {
            Err(PredictError::NotAdjacencyBased { .. }) => Ok(Prediction::indeterminate(
                Quantity::EAdj,
                "energy_adjacency",
                "adjacency energy prediction applies to adjacency-only weights",
            )),
            other => other,
        },
        Quantity::EWf => predict_energy_wf(w, n, p),
        Quantity::LeF => predict_le_bracket(w, n, p),
        Quantity::LePlusF => predict_le_plus_bracket(w, n, p),
        Quantity::LelF => predict_lel_ie(w, n, p),
        Quantity::IeF => predict_lel_ie(w, n, p).map(|mut pred| {
            pred.quantity = Quantity::IeF;
            pred
        }),
    }
}
