//! Weighted matrices of a graph and the Laplacians derived from them.
//!
//! W_f holds f(D(i,j), d_i, d_j) off the diagonal (adjacency-only weights
//! restrict it to edges); L_f = D_f - W_f and L_f+ = D_f + W_f where D_f is
//! the diagonal of row sums.

use crate::graph::{all_pairs_distances, DistanceTable, Graph};
use crate::weights::{WeightContext, WeightError, WeightFunction, WeightId};
use nalgebra::DMatrix;

/// Relative symmetry tolerance for accepting externally supplied matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: max deviation {max_dev:e} exceeds {threshold:e}")]
    Asymmetric { max_dev: f64, threshold: f64 },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("{weight} weights every vertex pair through its distance; the graph is disconnected")]
    DisconnectedGraph { weight: &'static str },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Adjacency,
    WeightedAdjacency,
    WeightedDistance,
    Laplacian,
    SignlessLaplacian,
    WeightedLaplacian,
    WeightedSignlessLaplacian,
}

impl MatrixKind {
    pub fn label(&self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::WeightedAdjacency => "weighted_adjacency",
            MatrixKind::WeightedDistance => "weighted_distance",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::SignlessLaplacian => "signless_laplacian",
            MatrixKind::WeightedLaplacian => "weighted_laplacian",
            MatrixKind::WeightedSignlessLaplacian => "weighted_signless_laplacian",
        }
    }
}

/// A square real matrix with symmetric entries, tagged with what it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    kind: MatrixKind,
    mat: DMatrix<f64>,
}

impl SymMatrix {
    /// Accepts a dense matrix after checking shape, finiteness, and
    /// symmetry (max |m_ij - m_ji| within SYMMETRY_TOL of the Frobenius
    /// norm).
    pub fn from_dense(kind: MatrixKind, mat: DMatrix<f64>) -> Result<SymMatrix, MatrixError> {
        if mat.nrows() != mat.ncols() {
            return Err(MatrixError::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        let n = mat.nrows();
        for i in 0..n {
            for j in 0..n {
                if !mat[(i, j)].is_finite() {
                    return Err(MatrixError::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        let threshold = SYMMETRY_TOL * mat.norm();
        let mut max_dev = 0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                max_dev = max_dev.max((mat[(i, j)] - mat[(j, i)]).abs());
            }
        }
        if max_dev > threshold {
            return Err(MatrixError::Asymmetric { max_dev, threshold });
        }
        Ok(SymMatrix { kind, mat })
    }

    /// Wraps a matrix the caller guarantees to be square and symmetric.
    pub fn from_dense_unchecked(kind: MatrixKind, mat: DMatrix<f64>) -> SymMatrix {
        assert_eq!(mat.nrows(), mat.ncols());
        SymMatrix { kind, mat }
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Entrywise multiple; replacing the weight f by c*f scales W_f, L_f,
    /// and L_f+ exactly this way.
    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix { kind: self.kind, mat: &self.mat * c }
    }

    /// Plain-text rows, entries space-separated.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{}", self.mat[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Context (n, sampled diameter) the weight evaluator needs for this graph.
pub fn context_for(g: &Graph, dist: &DistanceTable) -> WeightContext {
    WeightContext::new(g.n(), dist.diameter())
}

fn kind_for_weight(w: &WeightFunction, truncated: bool) -> MatrixKind {
    if w.id() == WeightId::Unweighted {
        MatrixKind::Adjacency
    } else if truncated || w.adjacency_only() {
        MatrixKind::WeightedAdjacency
    } else {
        MatrixKind::WeightedDistance
    }
}

/// W_f: entry (i,j) is f(D(i,j), d_i, d_j) for i != j, zero diagonal.
/// Distance-dependent weights require a connected graph.
pub fn build_weighted_distance(
    g: &Graph,
    dist: &DistanceTable,
    w: &WeightFunction,
    ctx: &WeightContext,
) -> Result<SymMatrix, MatrixError> {
    if w.adjacency_only() {
        return build_weighted_adjacency(g, w, ctx);
    }
    if !dist.is_connected() {
        return Err(MatrixError::DisconnectedGraph { weight: w.name() });
    }
    let n = g.n();
    let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    let mut mat = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = w.evaluate(dist.get(i, j), deg[i], deg[j], ctx)?;
            mat[(i, j)] = value;
            mat[(j, i)] = value;
        }
    }
    Ok(SymMatrix { kind: kind_for_weight(w, false), mat })
}

/// A_f: the distance argument is pinned to 1 and only edges get a weight.
/// For adjacency-only weights this equals W_f.
pub fn build_weighted_adjacency(
    g: &Graph,
    w: &WeightFunction,
    ctx: &WeightContext,
) -> Result<SymMatrix, MatrixError> {
    let n = g.n();
    let deg: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
    let mut mat = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        let (i, j) = (u as usize, v as usize);
        let value = w.evaluate(1, deg[i], deg[j], ctx)?;
        mat[(i, j)] = value;
        mat[(j, i)] = value;
    }
    Ok(SymMatrix { kind: kind_for_weight(w, true), mat })
}

/// W_f of a graph, computing shortest-path distances only when the weight
/// actually reads them.
pub fn build_weight_matrix(g: &Graph, w: &WeightFunction) -> Result<SymMatrix, MatrixError> {
    if w.adjacency_only() {
        let ctx = WeightContext::new(g.n(), None);
        build_weighted_adjacency(g, w, &ctx)
    } else {
        let dist = all_pairs_distances(g);
        let ctx = context_for(g, &dist);
        build_weighted_distance(g, &dist, w, &ctx)
    }
}

/// L_f, L_f+, and the weighted mean trace(D_f)/n that replaces 2m/n.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianFamily {
    pub laplacian: SymMatrix,
    pub signless: SymMatrix,
    pub weighted_mean: f64,
}

pub fn build_laplacian_family(w: &SymMatrix) -> LaplacianFamily {
    let n = w.n();
    let row_sums: Vec<f64> = (0..n).map(|i| w.mat.row(i).sum()).collect();
    let mut lap = -&w.mat;
    let mut sig = w.mat.clone();
    for i in 0..n {
        lap[(i, i)] = row_sums[i];
        sig[(i, i)] = row_sums[i];
    }
    let (lk, sk) = match w.kind {
        MatrixKind::Adjacency => (MatrixKind::Laplacian, MatrixKind::SignlessLaplacian),
        _ => (MatrixKind::WeightedLaplacian, MatrixKind::WeightedSignlessLaplacian),
    };
    let weighted_mean = row_sums.iter().sum::<f64>() / n as f64;
    LaplacianFamily {
        laplacian: SymMatrix { kind: lk, mat: lap },
        signless: SymMatrix { kind: sk, mat: sig },
        weighted_mean,
    }
}
