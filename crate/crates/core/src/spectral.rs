//! Eigenvalues of symmetric matrices and summaries of how they are laid
//! out: spectral radius, bulk concentration, and empirical spectral
//! distribution histograms.

use crate::matrices::{MatrixKind, SymMatrix, SYMMETRY_TOL};

/// Relative accuracy the eigensolver must deliver on the trace and
/// Frobenius identities; violations are reported, never masked.
pub const EIGEN_ACCURACY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric: max deviation {max_dev:e} exceeds {threshold:e}")]
    Asymmetric { max_dev: f64, threshold: f64 },
    #[error("spectrum must hold at least one eigenvalue")]
    EmptySpectrum,
    #[error("non-finite eigenvalue")]
    NonFiniteEigenvalue,
    #[error("eigensolver lost accuracy on the {what} identity: relative error {rel:e}")]
    AccuracyLoss { what: &'static str, rel: f64 },
    #[error("cannot exclude {exclude} extremes from a spectrum of size {n}")]
    ExcludeTooLarge { exclude: usize, n: usize },
    #[error("histogram needs at least one bin")]
    ZeroBins,
}

/// Where a spectrum came from; every field beyond n is optional.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumMeta {
    pub n: usize,
    pub p: Option<f64>,
    pub weight: Option<String>,
    pub seed: Option<u64>,
}

/// Eigenvalues in descending order, tagged with the matrix kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: MatrixKind,
    values: Vec<f64>,
    meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(kind: MatrixKind, mut values: Vec<f64>) -> Result<Spectrum, SpectralError> {
        if values.is_empty() {
            return Err(SpectralError::EmptySpectrum);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::NonFiniteEigenvalue);
        }
        values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        let meta = SpectrumMeta { n: values.len(), ..Default::default() };
        Ok(Spectrum { kind, values, meta })
    }

    pub fn with_meta(mut self, meta: SpectrumMeta) -> Spectrum {
        self.meta = meta;
        self
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn meta(&self) -> &SpectrumMeta {
        &self.meta
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Frobenius norm of the underlying matrix, recovered from the
    /// eigenvalues.
    pub fn frobenius(&self) -> f64 {
        self.sum_sq().sqrt()
    }
}

/// Eigenvalues of a symmetric matrix, descending. The input's symmetry is
/// re-checked (the unchecked constructor can smuggle anything), and the
/// trace and Frobenius identities guard against solver failure.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Spectrum, SpectralError> {
    let n = m.n();
    let frob = m.frobenius();
    let threshold = SYMMETRY_TOL * frob;
    let mut max_dev = 0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_dev = max_dev.max((m.entry(i, j) - m.entry(j, i)).abs());
        }
    }
    if max_dev > threshold {
        return Err(SpectralError::Asymmetric { max_dev, threshold });
    }

    let vals = m.as_dmatrix().clone().symmetric_eigenvalues();
    let spectrum = Spectrum::new(m.kind(), vals.iter().copied().collect())?;

    let scale = frob.max(m.trace().abs());
    if scale > 0.0 {
        let trace_rel = (spectrum.sum() - m.trace()).abs() / scale;
        if trace_rel > EIGEN_ACCURACY {
            return Err(SpectralError::AccuracyLoss { what: "trace", rel: trace_rel });
        }
        let frob_rel = (spectrum.sum_sq() - frob * frob).abs() / (frob * frob);
        if frob_rel > EIGEN_ACCURACY {
            return Err(SpectralError::AccuracyLoss { what: "frobenius", rel: frob_rel });
        }
    }
    let meta = SpectrumMeta { n, ..Default::default() };
    Ok(spectrum.with_meta(meta))
}

pub fn spectral_radius(s: &Spectrum) -> f64 {
    s.max().abs().max(s.min().abs())
}

/// Fraction of eigenvalues within tol*|center| of center, computed after
/// dropping the `exclude_extremes` eigenvalues farthest from center (the
/// outliers a Laplacian spectrum pins away from its bulk).
pub fn bulk_fraction(
    s: &Spectrum,
    center: f64,
    tol: f64,
    exclude_extremes: usize,
) -> Result<f64, SpectralError> {
    let n = s.n();
    if exclude_extremes >= n {
        return Err(SpectralError::ExcludeTooLarge { exclude: exclude_extremes, n });
    }
    let mut devs: Vec<f64> = s.values().iter().map(|v| (v - center).abs()).collect();
    devs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let kept = &devs[..n - exclude_extremes];
    let width = tol * center.abs();
    let inside = kept.iter().filter(|&&d| d <= width).count();
    Ok(inside as f64 / kept.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsdScaling {
    None,
    /// Divide eigenvalues by sqrt(n); adjacency bulks converge on this scale.
    InvSqrtN,
    /// Divide eigenvalues by n; Laplacian bulks concentrate on this scale.
    InvN,
}

impl EsdScaling {
    fn factor(&self, n: usize) -> f64 {
        match self {
            EsdScaling::None => 1.0,
            EsdScaling::InvSqrtN => 1.0 / (n as f64).sqrt(),
            EsdScaling::InvN => 1.0 / n as f64,
        }
    }
}

/// Equal-width histogram over [min, max] of the (scaled) eigenvalues; the
/// right edge of the last bin is inclusive, so counts always sum to n.
#[derive(Debug, Clone, PartialEq)]
pub struct EsdHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl EsdHistogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.edges[i], self.edges[i + 1], c));
        }
        out
    }
}

pub fn esd_histogram(
    s: &Spectrum,
    bins: usize,
    scaling: EsdScaling,
) -> Result<EsdHistogram, SpectralError> {
    if bins == 0 {
        return Err(SpectralError::ZeroBins);
    }
    let factor = scaling.factor(s.meta().n.max(s.n()));
    let scaled: Vec<f64> = s.values().iter().map(|v| v * factor).collect();
    let max = scaled[0];
    let min = *scaled.last().unwrap();
    // Degenerate range: a unit-width window centered on the single value.
    let (left, span) = if max > min { (min, max - min) } else { (min - 0.5, 1.0) };
    let bin_width = span / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &scaled {
        let idx = (((x - left) / bin_width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let edges: Vec<f64> = (0..=bins).map(|i| left + bin_width * i as f64).collect();
    Ok(EsdHistogram { edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances, generate_gnp, Graph};
    use crate::matrices::{build_laplacian_family, build_weighted_distance, context_for};
    use crate::weights::WeightFunction;
    use nalgebra::DMatrix;

    fn sym(kind: MatrixKind, n: usize, entries: &[f64]) -> SymMatrix {
        SymMatrix::from_dense(kind, DMatrix::from_row_slice(n, n, entries)).unwrap()
    }

    fn laplacian_spectrum(g: &Graph, weight: &str) -> (Spectrum, f64) {
        let dist = all_pairs_distances(g);
        let ctx = context_for(g, &dist);
        let w = WeightFunction::by_name(weight, None).unwrap();
        let wf = build_weighted_distance(g, &dist, &w, &ctx).unwrap();
        let fam = build_laplacian_family(&wf);
        (sym_eigenvalues(&fam.laplacian).unwrap(), fam.weighted_mean)
    }

    #[test]
    fn two_by_two_eigenvalues() {
        let m = sym(MatrixKind::Adjacency, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = sym_eigenvalues(&m).unwrap();
        assert!((s.values()[0] - 3.0).abs() < 1e-10);
        assert!((s.values()[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complete_graph_laplacian_spectrum() {
        let k6 = Graph::complete(6).unwrap();
        let (s, mean) = laplacian_spectrum(&k6, "unweighted");
        assert_eq!(mean, 5.0);
        for i in 0..5 {
            assert!((s.values()[i] - 6.0).abs() < 1e-9);
        }
        assert!(s.values()[5].abs() < 1e-9);
    }

    #[test]
    fn spectral_radius_of_triangle() {
        let k3 = Graph::complete(3).unwrap();
        let dist = all_pairs_distances(&k3);
        let ctx = context_for(&k3, &dist);
        let w = WeightFunction::by_name("unweighted", None).unwrap();
        let a = build_weighted_distance(&k3, &dist, &w, &ctx).unwrap();
        let s = sym_eigenvalues(&a).unwrap();
        assert!((spectral_radius(&s) - 2.0).abs() < 1e-10);
        assert!((s.min() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigen_identities_hold_on_random_graphs() {
        let g = generate_gnp(50, 0.4, 3).unwrap();
        let dist = all_pairs_distances(&g);
        let ctx = context_for(&g, &dist);
        let w = WeightFunction::by_name("harary", None).unwrap();
        let wf = build_weighted_distance(&g, &dist, &w, &ctx).unwrap();
        let fam = build_laplacian_family(&wf);
        let s = sym_eigenvalues(&fam.laplacian).unwrap();
        let rel_trace = (s.sum() - fam.laplacian.trace()).abs() / fam.laplacian.trace();
        assert!(rel_trace <= 1e-10);
        let f2 = fam.laplacian.frobenius().powi(2);
        assert!((s.sum_sq() - f2).abs() / f2 <= 1e-10);
    }

    #[test]
    fn smuggled_asymmetry_is_rejected() {
        let m = SymMatrix::from_dense_unchecked(
            MatrixKind::Adjacency,
            DMatrix::from_row_slice(2, 2, &[0.0, 5.0, 1.0, 0.0]),
        );
        assert!(matches!(sym_eigenvalues(&m), Err(SpectralError::Asymmetric { .. })));
    }

    #[test]
    fn spectrum_constructor_validates() {
        assert_eq!(
            Spectrum::new(MatrixKind::Adjacency, vec![]),
            Err(SpectralError::EmptySpectrum)
        );
        assert_eq!(
            Spectrum::new(MatrixKind::Adjacency, vec![1.0, f64::NAN]),
            Err(SpectralError::NonFiniteEigenvalue)
        );
        let s = Spectrum::new(MatrixKind::Adjacency, vec![1.0, 3.0, -2.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 1.0, -2.0]);
    }

    #[test]
    fn bulk_fraction_examples() {
        let s = Spectrum::new(MatrixKind::Laplacian, vec![10.0, 10.0, 10.0, 0.0]).unwrap();
        assert_eq!(bulk_fraction(&s, 10.0, 0.05, 1).unwrap(), 1.0);

        let s = Spectrum::new(MatrixKind::Laplacian, vec![100.0, 50.0, 0.0]).unwrap();
        let f = bulk_fraction(&s, 50.0, 0.01, 0).unwrap();
        assert!((f - 1.0 / 3.0).abs() < 1e-15);

        let k5 = Graph::complete(5).unwrap();
        let (s, _) = laplacian_spectrum(&k5, "unweighted");
        assert_eq!(bulk_fraction(&s, 5.0, 0.05, 1).unwrap(), 1.0);

        assert_eq!(
            bulk_fraction(&s, 5.0, 0.05, 5),
            Err(SpectralError::ExcludeTooLarge { exclude: 5, n: 5 })
        );
    }

    #[test]
    fn esd_histogram_examples() {
        let s = Spectrum::new(MatrixKind::Adjacency, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let h = esd_histogram(&s, 1, EsdScaling::None).unwrap();
        assert_eq!(h.counts, vec![4]);

        let s = Spectrum::new(MatrixKind::Adjacency, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let h = esd_histogram(&s, 2, EsdScaling::None).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.edges, vec![0.0, 1.5, 3.0]);

        assert_eq!(esd_histogram(&s, 0, EsdScaling::None), Err(SpectralError::ZeroBins));

        let csv = h.to_csv();
        assert!(csv.starts_with("bin_left,bin_right,count\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn scaled_adjacency_bulk_stays_in_semicircle_range() {
        let g = generate_gnp(400, 0.5, 1).unwrap();
        let dist = all_pairs_distances(&g);
        let ctx = context_for(&g, &dist);
        let w = WeightFunction::by_name("unweighted", None).unwrap();
        let a = build_weighted_distance(&g, &dist, &w, &ctx).unwrap();
        let s = sym_eigenvalues(&a).unwrap();
        let root_n = (s.n() as f64).sqrt();
        // all eigenvalues except the Perron outlier, on the sqrt(n) scale
        let inside = s.values()[1..]
            .iter()
            .filter(|&&v| (v / root_n).abs() <= 2.1)
            .count();
        assert!(inside as f64 >= 0.95 * (s.n() - 1) as f64);
        let h = esd_histogram(&s, 40, EsdScaling::InvSqrtN).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 400);
    }
}
