//! Energy functionals of a weighted graph: graph energy of W_f, Laplacian
//! and signless Laplacian energies (deviations from the weighted mean),
//! Laplacian-energy-like, and incidence energy.

use crate::graph::Graph;
use crate::matrices::{build_laplacian_family, build_weight_matrix, MatrixError};
use crate::spectral::{sym_eigenvalues, SpectralError, Spectrum};
use crate::weights::WeightFunction;
use serde::Serialize;

/// Eigenvalues below zero by at most this fraction of the Frobenius norm
/// are rounding noise; they are clamped to zero before square roots so a
/// positive semidefinite spectrum never contributes spurious mass.
pub const SQRT_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Sum of absolute eigenvalues.
pub fn energy(s: &Spectrum) -> f64 {
    s.values().iter().map(|v| v.abs()).sum()
}

/// Sum of absolute deviations from the weighted mean.
pub fn laplacian_energy(s: &Spectrum, mean: f64) -> f64 {
    s.values().iter().map(|v| (v - mean).abs()).sum()
}

/// Sum of square roots of absolute eigenvalues, with near-zero negatives
/// clamped first.
pub fn lel(s: &Spectrum) -> f64 {
    let clamp = SQRT_CLAMP * s.frobenius();
    s.values()
        .iter()
        .map(|&v| {
            if v < 0.0 && v >= -clamp {
                0.0
            } else {
                v.abs().sqrt()
            }
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub n: usize,
    pub m: usize,
    pub weight: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The five energies of one weighted graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub graph_energy: f64,
    pub laplacian_energy: f64,
    pub signless_laplacian_energy: f64,
    pub lel: f64,
    pub ie: f64,
    pub weighted_mean: f64,
    pub meta: ReportMeta,
}

/// Builds W_f, L_f, and L_f+ for the graph, solves the three spectra, and
/// fills every energy. Distance-dependent weights require connectivity.
pub fn full_report(g: &Graph, w: &WeightFunction) -> Result<EnergyReport, EnergyError> {
    let wf = build_weight_matrix(g, w)?;
    let fam = build_laplacian_family(&wf);
    let sw = sym_eigenvalues(&wf)?;
    let sl = sym_eigenvalues(&fam.laplacian)?;
    let sq = sym_eigenvalues(&fam.signless)?;
    let mean = fam.weighted_mean;
    Ok(EnergyReport {
        graph_energy: energy(&sw),
        laplacian_energy: laplacian_energy(&sl, mean),
        signless_laplacian_energy: laplacian_energy(&sq, mean),
        lel: lel(&sl),
        ie: lel(&sq),
        weighted_mean: mean,
        meta: ReportMeta {
            n: g.n(),
            m: g.m(),
            weight: w.name().to_string(),
            alpha: if w.name() == "general_randic" { Some(w.alpha()) } else { None },
            p: None,
            seed: None,
        },
    })
}
