//! Dense appraisal matrices, sign patterns and the matrix sets the dynamics
//! live on.
//!
//! Three nested sets matter:
//!
//! * no zero row (`is_nz_row`),
//! * sign-symmetric with positive diagonal (`is_s_symm_pos`),
//! * sign-symmetric, positive diagonal and symmetrizable by a positive
//!   diagonal left scaling (`is_rs_symm_pos`).
//!
//! Every zero test goes through [`ToleranceConfig::zero_threshold`], which is
//! relative to the max norm of the matrix so that all predicates are
//! invariant under positive scaling.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances used by every predicate in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Entries with `|x| <= zero_tol * max_norm(X)` count as zero.
    pub zero_tol: f64,
    /// Relative tolerance for magnitude equality and residual tests.
    pub rel_tol: f64,
    /// Absolute floor added to residual tests.
    pub abs_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            zero_tol: 1e-9,
            rel_tol: 1e-6,
            abs_tol: 1e-12,
        }
    }
}

impl ToleranceConfig {
    /// Absolute threshold below which entries of `x` are treated as zero.
    pub fn zero_threshold(&self, x: &AppraisalMatrix) -> f64 {
        self.zero_tol * x.max_norm()
    }

    /// Residual bound `rel_tol * scale + abs_tol`.
    pub fn residual_bound(&self, scale: f64) -> f64 {
        self.rel_tol * scale + self.abs_tol
    }
}

/// Square matrix of interpersonal appraisals, stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct AppraisalMatrix {
    n: usize,
    data: Vec<f64>,
}

impl fmt::Debug for AppraisalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.n {
            list.entry(&self.row(i));
        }
        list.finish()
    }
}

impl AppraisalMatrix {
    /// Builds an `n x n` matrix from row-major data.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n * n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// `alpha * b * b^T` for a sign vector `b`.
    pub fn rank_one_balanced(alpha: f64, b: &[f64]) -> Result<Self> {
        Self::from_fn(b.len(), |i, j| alpha * b[i] * b[j])
    }

    /// `sign(w) * w^T`.
    pub fn sign_outer(w: &[f64]) -> Result<Self> {
        Self::from_fn(w.len(), |i, j| w[i].signum() * w[j])
    }

    /// Wraps data produced by the step maps. Callers guarantee shape; finiteness
    /// is still checked.
    pub(crate) fn from_parts(n: usize, data: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(data.len(), n * n);
        Self::new(n, data)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Returns a copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { row: i, col: j });
        }
        let mut out = self.clone();
        out.data[i * self.n + j] = value;
        Ok(out)
    }

    /// `max_{i,j} |X_ij|`.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `min_{i,j} |X_ij|`.
    pub fn min_abs(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }

    /// `max_norm(X) - min_abs(X)`.
    pub fn spread(&self) -> f64 {
        self.max_norm() - self.min_abs()
    }

    /// L1 norm of row `i`.
    pub fn row_abs_sum(&self, i: usize) -> f64 {
        self.row(i).iter().map(|v| v.abs()).sum()
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::NonPositiveScale(c));
        }
        Self::new(self.n, self.data.iter().map(|v| c * v).collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Self { n, data }
    }

    /// `max_{i,j} |X_ij - Y_ij|`; panics on a size mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `P X P^T` where row `i` of the result is row `perm[i]` of `X`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::ParameterOutOfRange(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        Self::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    /// Principal submatrix on the given (global) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&index) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        Self::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    /// Block-diagonal direct sum.
    pub fn block_diagonal(blocks: &[AppraisalMatrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut data = vec![0.0; n * n];
        let mut offset = 0;
        for block in blocks {
            for i in 0..block.n {
                for j in 0..block.n {
                    data[(offset + i) * n + offset + j] = block.get(i, j);
                }
            }
            offset += block.n;
        }
        Self::new(n, data)
    }

    pub fn sign_pattern(&self, tol: &ToleranceConfig) -> SignPattern {
        let thr = tol.zero_threshold(self);
        SignPattern {
            n: self.n,
            signs: self.data.iter().map(|&v| sign_with(v, thr)).collect(),
        }
    }

    /// Every row has an entry above the zero threshold.
    pub fn is_nz_row(&self, tol: &ToleranceConfig) -> bool {
        let thr = tol.zero_threshold(self);
        self.rows().all(|r| r.iter().any(|v| v.abs() > thr))
    }

    /// Sign pattern symmetric and every diagonal entry positive.
    pub fn is_s_symm_pos(&self, tol: &ToleranceConfig) -> bool {
        let thr = tol.zero_threshold(self);
        (0..self.n).all(|i| self.get(i, i) > thr) && self.sign_pattern(tol).is_symmetric()
    }

    /// Searches for a positive `gamma` with `diag(gamma) X` symmetric.
    ///
    /// Ratios `gamma_j / gamma_i = X_ij / X_ji` are propagated along a BFS
    /// spanning forest of the graph of nonzero pairs; each tree root gets
    /// `gamma = 1`. All pairs are then verified against
    /// `rel_tol * max_norm(diag(gamma) X) + abs_tol`.
    pub fn find_gamma(&self, tol: &ToleranceConfig) -> Option<GammaWitness> {
        let n = self.n;
        let thr = tol.zero_threshold(self);
        if !self.sign_pattern(tol).is_symmetric() {
            return None;
        }
        let mut gamma = vec![f64::NAN; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if !gamma[root].is_nan() {
                continue;
            }
            gamma[root] = 1.0;
            queue.push_back(root);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if j == i || !gamma[j].is_nan() {
                        continue;
                    }
                    let (xij, xji) = (self.get(i, j), self.get(j, i));
                    if xij.abs() > thr && xji.abs() > thr {
                        gamma[j] = gamma[i] * xij / xji;
                        queue.push_back(j);
                    }
                }
            }
        }
        if gamma.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
            return None;
        }
        let witness = GammaWitness { gamma };
        let residual = witness.residual(self);
        let scaled_norm = witness.scaled_max_norm(self);
        (residual <= tol.residual_bound(scaled_norm)).then_some(witness)
    }

    pub fn is_rs_symm_pos(&self, tol: &ToleranceConfig) -> bool {
        self.is_s_symm_pos(tol) && self.find_gamma(tol).is_some()
    }
}

#[inline]
pub(crate) fn sign_with(v: f64, thr: f64) -> i8 {
    if v.abs() <= thr {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Entry-wise sign of a matrix, with entries in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern {
    n: usize,
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.signs[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.signs.chunks_exact(self.n).map(<[i8]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero(&self) -> bool {
        self.signs.contains(&0)
    }
}

/// Positive diagonal scaling that symmetrizes a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaWitness {
    pub gamma: Vec<f64>,
}

impl GammaWitness {
    /// `max_{i,j} |gamma_i X_ij - gamma_j X_ji|`.
    pub fn residual(&self, x: &AppraisalMatrix) -> f64 {
        let g = &self.gamma;
        let mut worst = 0.0f64;
        for i in 0..x.n() {
            for j in i + 1..x.n() {
                worst = worst.max((g[i] * x.get(i, j) - g[j] * x.get(j, i)).abs());
            }
        }
        worst
    }

    /// `max_norm(diag(gamma) X)`.
    pub fn scaled_max_norm(&self, x: &AppraisalMatrix) -> f64 {
        x.rows()
            .zip(&self.gamma)
            .flat_map(|(r, g)| r.iter().map(move |v| (g * v).abs()))
            .fold(0.0, f64::max)
    }
}
