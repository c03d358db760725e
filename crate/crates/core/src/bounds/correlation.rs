//! Numerical checks that independent Gaussian inputs maximize the source cut.
//!
//! Both checks build the joint covariance of inputs and observations from a
//! linear model over independent primitives, condition with a Schur
//! complement, and compare against the scalar closed forms. Gains are unit
//! and a node never hears itself.

use super::RATE_TOL;
use crate::error::{Error, Result};
use crate::gaussian::{half_log2_1p, Matrix, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleRelayParams {
    pub p1: f64,
    pub p2: f64,
    pub n2: f64,
    pub n3: f64,
}

impl SingleRelayParams {
    /// Largest |α| with `α² P2 ≤ P1`.
    pub fn alpha_limit(&self) -> f64 {
        (self.p1 / self.p2).sqrt()
    }

    /// `21`-style symmetric grid over the feasible interval, with 0 exact.
    pub fn alpha_grid(&self, points: usize) -> Vec<f64> {
        symmetric_grid(self.alpha_limit(), points)
    }
}

/// `points` values evenly spaced on `[-limit, limit]`; odd counts hit 0
/// exactly.
pub fn symmetric_grid(limit: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let half = (points - 1) as f64 / 2.0;
            (0..points)
                .map(|k| limit * (k as f64 - half) / half)
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaRow {
    pub alpha: f64,
    pub closed_form_bits: f64,
    pub covariance_bits: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaReport {
    pub params: SingleRelayParams,
    pub rows: Vec<AlphaRow>,
    pub argmax_alpha: f64,
    pub max_abs_diff: f64,
    pub passed: bool,
}

/// Sweeps the correlation `X1 = α X2 + W` on the one-relay network and
/// checks the covariance route against `½ log₂[1 + P_W/N2 + P_W/N3]`.
pub fn verify_single_relay_alpha(
    params: SingleRelayParams,
    alpha_grid: &[f64],
) -> Result<AlphaReport> {
    let SingleRelayParams { p1, p2, n2, n3 } = params;
    if !(p1 >= 0.0) || !(p2 > 0.0) || !(n2 > 0.0) || !(n3 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need P1 >= 0, P2 > 0, N2 > 0, N3 > 0, got {params:?}"
        )));
    }
    if alpha_grid.is_empty() {
        return Err(Error::InvalidParameter("alpha grid is empty".into()));
    }
    let limit = params.alpha_limit();

    let mut rows = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let used = alpha * alpha * p2;
        if !alpha.is_finite() || used > p1 * (1.0 + 1e-12) {
            return Err(Error::InvalidAlpha { alpha, limit });
        }
        let fresh = (p1 - used).max(0.0);
        let closed_form_bits = half_log2_1p(fresh / n2 + fresh / n3);

        // Primitives [X2, W, Z2, Z3]; variables [X2, Y2, Y3] with
        // Y2 = X1 + Z2 and Y3 = X1 + X2 + Z3.
        let mixing = Matrix::new(
            3,
            4,
            vec![
                1.0,
                0.0,
                0.0,
                0.0, //
                alpha,
                1.0,
                1.0,
                0.0, //
                1.0 + alpha,
                1.0,
                0.0,
                1.0,
            ],
        )?;
        let joint = SymMatrix::mixture_covariance(&mixing, &[p2, fresh, n2, n3])?;
        let given_relay = joint.conditional(&[1, 2], &[0])?;
        // Given every input only the receiver noise is left.
        let covariance_bits = 0.5 * (given_relay.log2_det()? - n2.log2() - n3.log2());
        rows.push(AlphaRow {
            alpha,
            closed_form_bits,
            covariance_bits,
        });
    }

    let best = rows.iter().enumerate().fold(0, |b, (k, r)| {
        if r.covariance_bits > rows[b].covariance_bits {
            k
        } else {
            b
        }
    });
    let argmax_alpha = rows[best].alpha;
    let smallest = alpha_grid
        .iter()
        .map(|a| a.abs())
        .fold(f64::INFINITY, f64::min);
    let max_abs_diff = rows
        .iter()
        .map(|r| (r.closed_form_bits - r.covariance_bits).abs())
        .fold(0.0, f64::max);
    Ok(AlphaReport {
        params,
        passed: max_abs_diff <= RATE_TOL && argmax_alpha.abs() == smallest,
        rows,
        argmax_alpha,
        max_abs_diff,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoRelayParams {
    pub p1: f64,
    pub n2: f64,
    pub n3: f64,
    pub n4: f64,
    /// Power of relay 3's input.
    pub p3: f64,
    /// Power of the part of relay 2's input independent of relay 3's.
    pub p_fresh: f64,
}

impl TwoRelayParams {
    pub fn new(p1: f64, n2: f64, n3: f64, n4: f64) -> Self {
        Self {
            p1,
            n2,
            n3,
            n4,
            p3: 1.0,
            p_fresh: 1.0,
        }
    }

    pub fn closed_form_bits(&self) -> f64 {
        half_log2_1p(self.p1 * (1.0 / self.n2 + 1.0 / self.n3 + 1.0 / self.n4))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaRow {
    pub beta: f64,
    pub covariance_bits: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaReport {
    pub params: TwoRelayParams,
    pub closed_form_bits: f64,
    pub rows: Vec<BetaRow>,
    /// Largest deviation of any row from the closed form.
    pub max_abs_diff: f64,
    /// max − min over the rows.
    pub spread: f64,
    pub passed: bool,
}

/// Correlates the two relay inputs as `X2 = β X3 + W` and checks that the
/// source-cut information does not move.
pub fn verify_two_relay_beta_invariance(
    params: TwoRelayParams,
    beta_grid: &[f64],
) -> Result<BetaReport> {
    let TwoRelayParams {
        p1,
        n2,
        n3,
        n4,
        p3,
        p_fresh,
    } = params;
    if !(p1 >= 0.0) || !(n2 > 0.0) || !(n3 > 0.0) || !(n4 > 0.0) || !(p3 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need P1 >= 0 and positive noise, got {params:?}"
        )));
    }
    if beta_grid.is_empty() {
        return Err(Error::InvalidParameter("beta grid is empty".into()));
    }

    let mut rows = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        // Primitives [X1, X3, W, Z2, Z3, Z4]; variables [X2, X3, Y2, Y3, Y4]
        // with Y2 = X1 + X3 + Z2, Y3 = X1 + X2 + Z3, Y4 = X1 + X2 + X3 + Z4.
        let mixing = Matrix::new(
            5,
            6,
            vec![
                0.0,
                beta,
                1.0,
                0.0,
                0.0,
                0.0, //
                0.0,
                1.0,
                0.0,
                0.0,
                0.0,
                0.0, //
                1.0,
                1.0,
                0.0,
                1.0,
                0.0,
                0.0, //
                1.0,
                beta,
                1.0,
                0.0,
                1.0,
                0.0, //
                1.0,
                beta + 1.0,
                1.0,
                0.0,
                0.0,
                1.0,
            ],
        )?;
        let joint = SymMatrix::mixture_covariance(&mixing, &[p1, p3, p_fresh, n2, n3, n4])?;
        let given_relays = joint.conditional(&[2, 3, 4], &[0, 1])?;
        let covariance_bits = 0.5 * (given_relays.log2_det()? - n2.log2() - n3.log2() - n4.log2());
        rows.push(BetaRow {
            beta,
            covariance_bits,
        });
    }

    let closed_form_bits = params.closed_form_bits();
    let max_abs_diff = rows
        .iter()
        .map(|r| (r.covariance_bits - closed_form_bits).abs())
        .fold(0.0, f64::max);
    let hi = rows
        .iter()
        .map(|r| r.covariance_bits)
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = rows
        .iter()
        .map(|r| r.covariance_bits)
        .fold(f64::INFINITY, f64::min);
    Ok(BetaReport {
        params,
        closed_form_bits,
        rows,
        max_abs_diff,
        spread: hi - lo,
        passed: max_abs_diff <= RATE_TOL && hi - lo <= RATE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> SingleRelayParams {
        SingleRelayParams {
            p1: 1.0,
            p2: 1.0,
            n2: 1.0,
            n3: 1.0,
        }
    }

    #[test]
    fn zero_alpha_gives_half_log_three() {
        let r = verify_single_relay_alpha(unit(), &[0.0]).unwrap();
        assert!((r.rows[0].closed_form_bits - 0.5 * 3f64.log2()).abs() < 1e-15);
        assert!((r.rows[0].covariance_bits - 0.5 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn extreme_alpha_carries_nothing() {
        let p = SingleRelayParams { p2: 4.0, ..unit() };
        let r = verify_single_relay_alpha(p, &[-0.5, 0.5]).unwrap();
        for row in &r.rows {
            assert!(row.closed_form_bits == 0.0);
            assert!(row.covariance_bits.abs() < 1e-12);
        }
    }

    #[test]
    fn argmax_is_zero() {
        let r = verify_single_relay_alpha(unit(), &[-0.5, 0.0, 0.5]).unwrap();
        assert_eq!(r.argmax_alpha, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn alpha_outside_interval_rejected() {
        assert!(matches!(
            verify_single_relay_alpha(unit(), &[1.5]),
            Err(Error::InvalidAlpha { .. })
        ));
    }

    #[test]
    fn grid_contains_exact_zero_and_endpoints() {
        let g = symmetric_grid(2.0, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[10], 0.0);
        assert_eq!((g[0], g[20]), (-2.0, 2.0));
    }

    #[test]
    fn beta_does_not_matter() {
        let p = TwoRelayParams::new(2.0, 0.5, 1.0, 3.0);
        let r = verify_two_relay_beta_invariance(p, &[0.0, 0.7, -3.0]).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.rows[0].covariance_bits - p.closed_form_bits()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_noise_closed_form() {
        let p = TwoRelayParams::new(1.5, 2.0, 2.0, 2.0);
        assert!((p.closed_form_bits() - 0.5 * (1.0 + 3.0 * 1.5 / 2.0f64).log2()).abs() < 1e-15);
    }
}
