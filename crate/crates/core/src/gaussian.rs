//! Covariance algebra for jointly Gaussian vectors.
//!
//! Everything here works on small dense matrices (a handful of receivers),
//! so storage is a plain row-major `Vec<f64>`. Determinants go through an
//! LDLᵀ factorization whose pivots are checked against a configurable
//! epsilon; mutual information is reported in bits.

use crate::error::{Error, Result};

/// Smallest admissible pivot during factorization.
pub const DEFAULT_PD_EPSILON: f64 = 1e-12;

const SYMMETRY_TOL: f64 = 1e-12;

/// Dense row-major matrix, used for amplitude gains and mixing matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }
}

/// Symmetric matrix in full row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Builds from a full row-major array, rejecting asymmetry beyond 1e-12.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        for r in 0..dim {
            for c in (r + 1)..dim {
                if (entries[r * dim + c] - entries[c * dim + r]).abs() > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { row: r, col: c });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Evaluates `f` on the upper triangle and mirrors it.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in r..dim {
                let v = f(r, c);
                entries[r * dim + c] = v;
                entries[c * dim + r] = v;
            }
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |r, c| if r == c { values[r] } else { 0.0 })
    }

    /// Covariance `A · diag(variances) · Aᵀ` of `A u` for independent `u`.
    pub fn mixture_covariance(mixing: &Matrix, variances: &[f64]) -> Result<Self> {
        if variances.len() != mixing.cols() {
            return Err(Error::DimensionMismatch {
                expected: mixing.cols(),
                actual: variances.len(),
            });
        }
        Ok(Self::from_fn(mixing.rows(), |r, c| {
            (0..mixing.cols())
                .map(|k| mixing.get(r, k) * variances[k] * mixing.get(c, k))
                .sum()
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |r, c| self.get(indices[r], indices[c]))
    }

    pub fn ldl(&self, epsilon: f64) -> Result<Ldl> {
        Ldl::factor(self, epsilon)
    }

    pub fn log2_det(&self) -> Result<f64> {
        self.log2_det_eps(DEFAULT_PD_EPSILON)
    }

    pub fn log2_det_eps(&self, epsilon: f64) -> Result<f64> {
        Ok(self.ldl(epsilon)?.log2_det())
    }

    /// `log₂ det(I + self)`, accurate when `self` is tiny: pivots are carried
    /// as offsets from one and summed through `ln_1p`.
    pub fn log2_det_plus_identity(&self, epsilon: f64) -> Result<f64> {
        let n = self.dim;
        let mut lower = vec![0.0; n * n];
        let mut pivots = vec![0.0; n];
        let mut total = 0.0;
        for j in 0..n {
            let mut offset = self.get(j, j);
            for k in 0..j {
                let l = lower[j * n + k];
                offset -= l * l * pivots[k];
            }
            let d = 1.0 + offset;
            if !(d > epsilon) {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            pivots[j] = d;
            total += offset.ln_1p();
            for i in (j + 1)..n {
                let mut v = self.get(i, j);
                for k in 0..j {
                    v -= lower[i * n + k] * lower[j * n + k] * pivots[k];
                }
                lower[i * n + j] = v / d;
            }
        }
        Ok(total / std::f64::consts::LN_2)
    }

    /// Determinant as the product of LDLᵀ pivots.
    pub fn det(&self) -> Result<f64> {
        Ok(self.ldl(DEFAULT_PD_EPSILON)?.pivots.iter().product())
    }

    /// Conditional covariance of `targets` given `given`, via the Schur
    /// complement `Σ_tt − Σ_tg Σ_gg⁻¹ Σ_gt`.
    pub fn conditional(&self, targets: &[usize], given: &[usize]) -> Result<Self> {
        if given.is_empty() {
            return Ok(self.submatrix(targets));
        }
        let cond = self.submatrix(given).ldl(DEFAULT_PD_EPSILON)?;
        // Columns of Σ_gg⁻¹ Σ_gt, one per target.
        let solved: Vec<Vec<f64>> = targets
            .iter()
            .map(|&t| {
                let rhs: Vec<f64> = given.iter().map(|&g| self.get(g, t)).collect();
                cond.solve(&rhs)
            })
            .collect();
        Ok(Self::from_fn(targets.len(), |r, c| {
            let correction: f64 = given
                .iter()
                .zip(&solved[c])
                .map(|(&g, x)| self.get(targets[r], g) * x)
                .sum();
            self.get(targets[r], targets[c]) - correction
        }))
    }
}

/// `A = L D Lᵀ` with unit lower-triangular `L`.
#[derive(Clone, Debug)]
pub struct Ldl {
    dim: usize,
    lower: Vec<f64>,
    pivots: Vec<f64>,
}

impl Ldl {
    fn factor(m: &SymMatrix, epsilon: f64) -> Result<Self> {
        let n = m.dim;
        let mut lower = vec![0.0; n * n];
        let mut pivots = vec![0.0; n];
        for j in 0..n {
            let mut d = m.get(j, j);
            for k in 0..j {
                let l = lower[j * n + k];
                d -= l * l * pivots[k];
            }
            if !(d > epsilon) {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            pivots[j] = d;
            lower[j * n + j] = 1.0;
            for i in (j + 1)..n {
                let mut v = m.get(i, j);
                for k in 0..j {
                    v -= lower[i * n + k] * lower[j * n + k] * pivots[k];
                }
                lower[i * n + j] = v / d;
            }
        }
        Ok(Self {
            dim: n,
            lower,
            pivots,
        })
    }

    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    pub fn log2_det(&self) -> f64 {
        self.pivots.iter().map(|d| d.log2()).sum()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = rhs.to_vec();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lower[i * n + k] * x[k];
            }
        }
        for (xi, d) in x.iter_mut().zip(&self.pivots) {
            *xi /= d;
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.lower[k * n + i] * x[k];
            }
        }
        x
    }
}

/// `log₂ det(m)` with the default pivot epsilon.
pub fn log2_det(m: &SymMatrix) -> Result<f64> {
    m.log2_det()
}

/// I(X_tx ; Y_rx | X_others) in bits for independent Gaussian inputs.
///
/// `gains` is `num_rx × num_tx` with amplitude entries `√λ`. Transmitters not
/// listed are assumed known at the receivers and already subtracted.
pub fn conditional_mi_bits(gains: &Matrix, tx_powers: &[f64], rx_noise: &[f64]) -> Result<f64> {
    conditional_mi_bits_eps(gains, tx_powers, rx_noise, DEFAULT_PD_EPSILON)
}

pub fn conditional_mi_bits_eps(
    gains: &Matrix,
    tx_powers: &[f64],
    rx_noise: &[f64],
    epsilon: f64,
) -> Result<f64> {
    if tx_powers.len() != gains.cols() {
        return Err(Error::DimensionMismatch {
            expected: gains.cols(),
            actual: tx_powers.len(),
        });
    }
    if rx_noise.len() != gains.rows() {
        return Err(Error::DimensionMismatch {
            expected: gains.rows(),
            actual: rx_noise.len(),
        });
    }
    if let Some((index, &value)) = tx_powers
        .iter()
        .enumerate()
        .find(|(_, p)| !(**p >= 0.0) || !p.is_finite())
    {
        return Err(Error::NegativePower { index, value });
    }
    if let Some((index, &value)) = rx_noise
        .iter()
        .enumerate()
        .find(|(_, n)| !(**n > 0.0) || !n.is_finite())
    {
        return Err(Error::NonPositiveNoise { index, value });
    }

    let received = SymMatrix::from_fn(gains.rows(), |r, c| {
        let signal: f64 = (0..gains.cols())
            .map(|k| gains.get(r, k) * tx_powers[k] * gains.get(c, k))
            .sum();
        if r == c {
            rx_noise[r] + signal
        } else {
            signal
        }
    });
    let total = received.log2_det_eps(epsilon)?;
    let noise: f64 = rx_noise.iter().map(|n| n.log2()).sum();
    Ok(0.5 * (total - noise))
}

/// ½ log₂(1 + x), accurate for small `x`.
#[inline]
pub fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_log_det() {
        assert_eq!(log2_det(&SymMatrix::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_two_by_two() {
        let m = SymMatrix::diagonal(&[2.0, 2.0]);
        assert!((log2_det(&m).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = SymMatrix::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn rejects_singular_and_indefinite() {
        let singular = SymMatrix::from_row_major(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            log2_det(&singular),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let indefinite = SymMatrix::diagonal(&[1.0, -1.0]);
        assert!(log2_det(&indefinite).is_err());
    }

    #[test]
    fn epsilon_is_configurable() {
        let tiny = SymMatrix::diagonal(&[1.0, 1e-14]);
        assert!(tiny.log2_det().is_err());
        let v = tiny.log2_det_eps(1e-16).unwrap();
        assert!((v - 1e-14f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn identity_shift_keeps_tiny_terms() {
        let m = SymMatrix::diagonal(&[1e-18, 2e-18]);
        let v = m.log2_det_plus_identity(DEFAULT_PD_EPSILON).unwrap();
        assert!((v - 3e-18 / std::f64::consts::LN_2).abs() < 1e-30);
        let m = SymMatrix::from_row_major(2, vec![2.0, 0.5, 0.5, 1.0]).unwrap();
        let shifted = SymMatrix::from_row_major(2, vec![3.0, 0.5, 0.5, 2.0]).unwrap();
        let a = m.log2_det_plus_identity(DEFAULT_PD_EPSILON).unwrap();
        assert!((a - shifted.log2_det().unwrap()).abs() < 1e-14);
    }

    #[test]
    fn ldl_solve_recovers_rhs() {
        let m = SymMatrix::from_row_major(3, vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0])
            .unwrap();
        let ldl = m.ldl(DEFAULT_PD_EPSILON).unwrap();
        let x = ldl.solve(&[1.0, 2.0, 3.0]);
        for r in 0..3 {
            let back: f64 = (0..3).map(|c| m.get(r, c) * x[c]).sum();
            assert!((back - (r as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_power_gives_zero_information() {
        let h = Matrix::new(1, 1, vec![1.0]).unwrap();
        assert_eq!(conditional_mi_bits(&h, &[0.0], &[1.0]).unwrap(), 0.0);
        let h = Matrix::from_fn(3, 2, |r, c| 0.3 + r as f64 + c as f64);
        assert_eq!(
            conditional_mi_bits(&h, &[0.0, 0.0], &[0.7, 1.3, 2.9]).unwrap(),
            0.0
        );
    }

    #[test]
    fn one_transmitter_two_receivers() {
        let h = Matrix::new(2, 1, vec![1.0, 1.0]).unwrap();
        let mi = conditional_mi_bits(&h, &[1.0], &[1.0, 1.0]).unwrap();
        assert!((mi - 0.5 * 3f64.log2()).abs() < 1e-12);
        assert!((mi - 0.792481250360578).abs() < 1e-12);
    }

    #[test]
    fn one_transmitter_three_receivers_matches_closed_form() {
        let (p1, n) = (2.5, [0.5, 1.5, 4.0]);
        let h = Matrix::new(3, 1, vec![1.0; 3]).unwrap();
        let mi = conditional_mi_bits(&h, &[p1], &n).unwrap();
        let closed = 0.5 * (1.0 + p1 * (1.0 / n[0] + 1.0 / n[1] + 1.0 / n[2])).log2();
        assert!((mi - closed).abs() < 1e-12);
    }

    #[test]
    fn input_errors() {
        let h = Matrix::new(1, 1, vec![1.0]).unwrap();
        assert!(matches!(
            conditional_mi_bits(&h, &[-1.0], &[1.0]),
            Err(Error::NegativePower { index: 0, .. })
        ));
        assert!(matches!(
            conditional_mi_bits(&h, &[1.0], &[0.0]),
            Err(Error::NonPositiveNoise { index: 0, .. })
        ));
        assert!(matches!(
            conditional_mi_bits(&h, &[1.0, 1.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn schur_complement_of_independent_block() {
        let m = SymMatrix::from_row_major(3, vec![2.0, 0.0, 1.0, 0.0, 3.0, 0.0, 1.0, 0.0, 4.0])
            .unwrap();
        let c = m.conditional(&[1], &[0, 2]).unwrap();
        assert!((c.get(0, 0) - 3.0).abs() < 1e-15);
        let c = m.conditional(&[0], &[2]).unwrap();
        assert!((c.get(0, 0) - (2.0 - 0.25)).abs() < 1e-15);
    }
}
