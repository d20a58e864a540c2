//! Registry of edge/pair weight functions f(D(i,j), d_i, d_j).
//!
//! Degree-based entries weight adjacent pairs only and vanish for D >= 2.
//! Distance and degree-distance entries weight every pair of distinct
//! vertices through the graph distance D. Each entry carries the analytic
//! values f(1, np, np), f(2, np, np) and the limit C of their ratio, which
//! the predictors consume.

use crate::graph::UNREACHABLE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("unknown weight `{0}`")]
    UnknownWeight(String),
    #[error("the alpha parameter applies only to general_randic")]
    AlphaNotApplicable,
    #[error("alpha must be finite, got {0}")]
    InvalidAlpha(f64),
    #[error("distance must be at least 1, got {0}")]
    InvalidDistance(u32),
    #[error("degrees must be positive finite reals, got {0}")]
    InvalidDegree(f64),
    #[error("{weight}: pair at infinite distance; resample until connected or use an adjacency-only weight")]
    UnreachablePair { weight: &'static str },
    #[error("{weight}: graph diameter required but not provided")]
    MissingDiameter { weight: &'static str },
    #[error("{weight}: {detail}")]
    OutsideDomain { weight: &'static str, detail: String },
    #[error("{weight}: evaluation produced a non-finite value")]
    NonFinite { weight: &'static str },
    #[error("edge probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("asymptotic evaluation needs n >= 2, got {0}")]
    TooFewVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    Degree,
    Distance,
    DegreeDistance,
}

/// Limit of f(1,np,np)/f(2,np,np) as n grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitClass {
    Finite(f64),
    Infinite,
}

/// Graph-level inputs some weights need beyond the pair itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightContext {
    pub n: usize,
    pub diameter: Option<u32>,
}

impl WeightContext {
    pub fn new(n: usize, diameter: Option<u32>) -> Self {
        WeightContext { n, diameter }
    }

    /// Context of the asymptotic regime: diameter pinned to 2.
    pub fn asymptotic(n: usize) -> Self {
        WeightContext { n, diameter: Some(2) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightId {
    FirstZagreb,
    SecondZagreb,
    Randic,
    GeneralRandic,
    Abc,
    Azi,
    Ag,
    Harmonic,
    Sci,
    FirstMultiZagreb,
    ModifiedMultiZagreb,
    SecondMultiZagreb,
    Lanzhou,
    Harary,
    HyperWiener,
    Rcw,
    ReverseWiener,
    DegreeDistance,
    Gutman,
    AddHarary,
    MultHarary,
    Unweighted,
}

pub const ALL_WEIGHTS: [WeightId; 22] = [
    WeightId::FirstZagreb,
    WeightId::SecondZagreb,
    WeightId::Randic,
    WeightId::GeneralRandic,
    WeightId::Abc,
    WeightId::Azi,
    WeightId::Ag,
    WeightId::Harmonic,
    WeightId::Sci,
    WeightId::FirstMultiZagreb,
    WeightId::ModifiedMultiZagreb,
    WeightId::SecondMultiZagreb,
    WeightId::Lanzhou,
    WeightId::Harary,
    WeightId::HyperWiener,
    WeightId::Rcw,
    WeightId::ReverseWiener,
    WeightId::DegreeDistance,
    WeightId::Gutman,
    WeightId::AddHarary,
    WeightId::MultHarary,
    WeightId::Unweighted,
];

pub const DEFAULT_ALPHA: f64 = 0.5;

/// A registry entry plus its parameters (alpha is only read by
/// general_randic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    id: WeightId,
    alpha: f64,
}

impl WeightFunction {
    pub fn new(id: WeightId) -> Self {
        WeightFunction { id, alpha: DEFAULT_ALPHA }
    }

    pub fn with_alpha(id: WeightId, alpha: f64) -> Result<Self, WeightError> {
        if !alpha.is_finite() {
            return Err(WeightError::InvalidAlpha(alpha));
        }
        if id != WeightId::GeneralRandic {
            return Err(WeightError::AlphaNotApplicable);
        }
        Ok(WeightFunction { id, alpha })
    }

    /// Resolves a canonical lower_snake_case name, optionally with alpha
    /// (accepted only by general_randic).
    pub fn by_name(name: &str, alpha: Option<f64>) -> Result<Self, WeightError> {
        let id = ALL_WEIGHTS
            .iter()
            .copied()
            .find(|id| WeightFunction::new(*id).name() == name)
            .ok_or_else(|| WeightError::UnknownWeight(name.to_string()))?;
        match alpha {
            Some(a) => WeightFunction::with_alpha(id, a),
            None => Ok(WeightFunction::new(id)),
        }
    }

    /// All 22 registry entries with default parameters.
    pub fn registry() -> Vec<WeightFunction> {
        ALL_WEIGHTS.iter().map(|&id| WeightFunction::new(id)).collect()
    }

    pub fn id(&self) -> WeightId {
        self.id
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn name(&self) -> &'static str {
        use WeightId::*;
        match self.id {
            FirstZagreb => "first_zagreb",
            SecondZagreb => "second_zagreb",
            Randic => "randic",
            GeneralRandic => "general_randic",
            Abc => "abc",
            Azi => "azi",
            Ag => "ag",
            Harmonic => "harmonic",
            Sci => "sci",
            FirstMultiZagreb => "first_multi_zagreb",
            ModifiedMultiZagreb => "modified_multi_zagreb",
            SecondMultiZagreb => "second_multi_zagreb",
            Lanzhou => "lanzhou",
            Harary => "harary",
            HyperWiener => "hyper_wiener",
            Rcw => "rcw",
            ReverseWiener => "reverse_wiener",
            DegreeDistance => "degree_distance",
            Gutman => "gutman",
            AddHarary => "add_harary",
            MultHarary => "mult_harary",
            Unweighted => "unweighted",
        }
    }

    pub fn class(&self) -> WeightClass {
        use WeightId::*;
        match self.id {
            FirstZagreb | SecondZagreb | Randic | GeneralRandic | Abc | Azi | Ag | Harmonic
            | Sci | FirstMultiZagreb | ModifiedMultiZagreb | SecondMultiZagreb | Lanzhou => {
                WeightClass::Degree
            }
            Harary | HyperWiener | Rcw | ReverseWiener | Unweighted => WeightClass::Distance,
            DegreeDistance | Gutman | AddHarary | MultHarary => WeightClass::DegreeDistance,
        }
    }

    /// True when the weight vanishes for every non-adjacent pair, so the
    /// weighted matrix needs no distances and no connectivity.
    pub fn adjacency_only(&self) -> bool {
        self.class() == WeightClass::Degree || self.id == WeightId::Unweighted
    }

    pub fn distance_dependent(&self) -> bool {
        !self.adjacency_only()
    }

    pub fn needs_diameter(&self) -> bool {
        matches!(self.id, WeightId::Rcw | WeightId::ReverseWiener)
    }

    /// Declared analytically per entry; f2 identically zero means INFINITE.
    pub fn limit_class(&self) -> LimitClass {
        use WeightId::*;
        match self.id {
            FirstZagreb | SecondZagreb | Randic | GeneralRandic | Abc | Azi | Ag | Harmonic
            | Sci | FirstMultiZagreb | ModifiedMultiZagreb | SecondMultiZagreb | Lanzhou
            | ReverseWiener | Unweighted => LimitClass::Infinite,
            Harary | AddHarary | MultHarary => LimitClass::Finite(2.0),
            HyperWiener => LimitClass::Finite(1.0 / 3.0),
            Rcw | DegreeDistance | Gutman => LimitClass::Finite(0.5),
        }
    }

    /// f(D, d_i, d_j). Degrees are the actual values of the sampled graph
    /// (real-typed so the asymptotic substitution d = np reuses this path).
    pub fn evaluate(
        &self,
        d: u32,
        di: f64,
        dj: f64,
        ctx: &WeightContext,
    ) -> Result<f64, WeightError> {
        if d == 0 {
            return Err(WeightError::InvalidDistance(0));
        }
        if d == UNREACHABLE {
            if self.adjacency_only() {
                return Ok(0.0);
            }
            return Err(WeightError::UnreachablePair { weight: self.name() });
        }
        for &x in &[di, dj] {
            if !x.is_finite() || x <= 0.0 {
                return Err(WeightError::InvalidDegree(x));
            }
        }
        use WeightId::*;
        let dist = d as f64;
        let value = match self.id {
            FirstZagreb => self.at_one(d, di + dj),
            SecondZagreb => self.at_one(d, di * dj),
            Randic => self.at_one(d, 1.0 / (di * dj).sqrt()),
            GeneralRandic => self.at_one(d, (di * dj).powf(self.alpha)),
            Abc => self.at_one(d, (di + dj - 2.0).sqrt() / (di * dj).sqrt()),
            Azi => self.at_one(d, (di * dj / (di + dj - 2.0)).powi(3)),
            Ag => self.at_one(d, 2.0 * (di * dj).sqrt() / (di + dj)),
            Harmonic => self.at_one(d, 2.0 / (di + dj)),
            Sci => self.at_one(d, 1.0 / (di + dj).sqrt()),
            FirstMultiZagreb => self.at_one(d, di.ln() / di + dj.ln() / dj),
            ModifiedMultiZagreb => self.at_one(d, (di + dj).ln()),
            SecondMultiZagreb => self.at_one(d, di.ln() + dj.ln()),
            Lanzhou => {
                let n = ctx.n as f64;
                self.at_one(d, (n - 1.0) * (di + dj) - (di * di + dj * dj))
            }
            Harary => 1.0 / dist,
            HyperWiener => (dist + dist * dist) / 2.0,
            Rcw => {
                let diam = self.ctx_diameter(ctx)?;
                1.0 / (diam + 1.0 - dist)
            }
            ReverseWiener => {
                let diam = self.ctx_diameter(ctx)?;
                diam - dist
            }
            DegreeDistance => (di + dj) * dist,
            Gutman => di * dj * dist,
            AddHarary => (di + dj) / dist,
            MultHarary => di * dj / dist,
            Unweighted => {
                if d == 1 {
                    1.0
                } else {
                    0.0
                }
            }
        };
        if !value.is_finite() {
            return Err(WeightError::NonFinite { weight: self.name() });
        }
        Ok(value)
    }

    fn at_one(&self, d: u32, value: f64) -> f64 {
        if d == 1 {
            value
        } else {
            0.0
        }
    }

    fn ctx_diameter(&self, ctx: &WeightContext) -> Result<f64, WeightError> {
        match ctx.diameter {
            Some(diam) => Ok(diam as f64),
            None => Err(WeightError::MissingDiameter { weight: self.name() }),
        }
    }

    /// (f(1,np,np), f(2,np,np)) with degrees set to the real number np and
    /// diameter pinned to 2, the asymptotic regime the predictions assume.
    pub fn asym_pair(&self, n: usize, p: f64) -> Result<(f64, f64), WeightError> {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(WeightError::InvalidProbability(p));
        }
        if n < 2 {
            return Err(WeightError::TooFewVertices(n));
        }
        let np = n as f64 * p;
        self.check_asym_domain(np)?;
        let ctx = WeightContext::asymptotic(n);
        let f1 = self.evaluate(1, np, np, &ctx)?;
        let f2 = self.evaluate(2, np, np, &ctx)?;
        Ok((f1, f2))
    }

    /// Mean-degree regions where an entry's formula leaves the reals (or a
    /// logarithm its asymptotics rely on changes sign).
    fn check_asym_domain(&self, np: f64) -> Result<(), WeightError> {
        use WeightId::*;
        let bad = match self.id {
            Abc => np < 1.0,
            Azi | FirstMultiZagreb | SecondMultiZagreb => np <= 1.0,
            ModifiedMultiZagreb => 2.0 * np <= 1.0,
            _ => false,
        };
        if bad {
            let detail = match self.id {
                Abc => "mean degree np must be at least 1".to_string(),
                ModifiedMultiZagreb => "mean degree np must exceed 1/2".to_string(),
                _ => "mean degree np must exceed 1".to_string(),
            };
            return Err(WeightError::OutsideDomain { weight: self.name(), detail });
        }
        Ok(())
    }
}
