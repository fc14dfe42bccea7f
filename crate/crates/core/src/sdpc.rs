//! Secret dirty-paper coding with Gaussian codebooks.
//!
//! User 1's codeword is encoded first with covariance `K_U1`; user 2's is
//! dirty-paper coded against it with covariance `K_U2`. The boundary of the
//! capacity region is reached by the rank-one choice
//! `K_U1 = αP e₁e₁ᴴ`, `K_U2 = (1−α)P c₂(α)c₂(α)ᴴ`.

use crate::channel::{rate_scale, spectrum, ChannelPair, ChannelSpectrum};
use crate::error::{Error, Result};
use crate::geometry::RatePair;
use crate::linalg::{quadratic_form, ComplexVector, HermitianMatrix};
use crate::regions::{gamma2_full, gamma2};

/// Slack allowed on the PSD and trace checks.
pub const COVARIANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair {
    pub k_u1: HermitianMatrix,
    pub k_u2: HermitianMatrix,
}

impl CovariancePair {
    pub fn zeros(dim: usize) -> Self {
        Self { k_u1: HermitianMatrix::zeros(dim), k_u2: HermitianMatrix::zeros(dim) }
    }

    /// `K_U1 + K_U2`, the transmit covariance.
    pub fn total(&self) -> Result<HermitianMatrix> {
        self.k_u1.add(&self.k_u2)
    }

    pub fn validate(&self, ch: &ChannelPair) -> Result<()> {
        let t = ch.antennas();
        for (name, k) in [("K_U1", &self.k_u1), ("K_U2", &self.k_u2)] {
            if k.dim() != t {
                return Err(Error::DimensionMismatch { expected: t, actual: k.dim() });
            }
            validate_psd(name, k)?;
        }
        let trace = self.k_u1.trace() + self.k_u2.trace();
        if trace > ch.power() + COVARIANCE_TOL {
            return Err(Error::CovarianceInvalid(format!(
                "tr(K_U1 + K_U2) = {trace} exceeds the power budget {}",
                ch.power()
            )));
        }
        Ok(())
    }
}

pub(crate) fn validate_psd(name: &str, k: &HermitianMatrix) -> Result<()> {
    if !k.is_finite() {
        return Err(Error::NonFinite("covariance"));
    }
    let min = k.min_eigenvalue();
    if min < -COVARIANCE_TOL {
        return Err(Error::CovarianceInvalid(format!("{name} has eigenvalue {min:e} < 0")));
    }
    Ok(())
}

/// Rectangle corner of the S-DPC region for one covariance pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpcCorner {
    pub rates: RatePair,
    /// Set when one of the log-ratio bounds came out negative and was
    /// clamped to zero.
    pub degenerate: bool,
}

fn qf(v: &ComplexVector, k: &HermitianMatrix) -> Result<f64> {
    Ok(quadratic_form(v, k, v)?.re)
}

/// `(log₂ ratio₁, log₂ ratio₂)` before clamping, in the complex-field units.
fn raw_logs(ch: &ChannelPair, cov: &CovariancePair) -> Result<(f64, f64)> {
    let (h, g) = (ch.h(), ch.g());
    let total = cov.total()?;
    let own = (1.0 + qf(h, &cov.k_u1)?) / (1.0 + qf(g, &cov.k_u1)?);
    let dirty = (1.0 + qf(g, &total)?) / (1.0 + qf(h, &total)?);
    Ok((own.log2(), dirty.log2() + own.log2()))
}

pub fn sdpc_corner(ch: &ChannelPair, cov: &CovariancePair) -> Result<SdpcCorner> {
    cov.validate(ch)?;
    let (l1, l2) = raw_logs(ch, cov)?;
    let s = rate_scale(ch);
    Ok(SdpcCorner {
        rates: RatePair::new(s * l1.max(0.0), s * l2.max(0.0)),
        degenerate: l1 < 0.0 || l2 < 0.0,
    })
}

/// S-DPC rate pair for an arbitrary covariance pair. Negative bounds are
/// reported as zero.
pub fn sdpc_rates(ch: &ChannelPair, cov: &CovariancePair) -> Result<RatePair> {
    Ok(sdpc_corner(ch, cov)?.rates)
}

/// The boundary-achieving covariances for power split `alpha`.
pub fn optimal_covariances(ch: &ChannelPair, alpha: f64) -> Result<CovariancePair> {
    optimal_covariances_with(ch, &spectrum(ch)?, alpha)
}

pub fn optimal_covariances_with(ch: &ChannelPair, spec: &ChannelSpectrum, alpha: f64) -> Result<CovariancePair> {
    let (_, c2) = gamma2(ch, spec, alpha)?;
    let p = ch.power();
    Ok(CovariancePair {
        k_u1: HermitianMatrix::rank_one(alpha * p, &spec.e1),
        k_u2: HermitianMatrix::rank_one((1.0 - alpha) * p, &c2),
    })
}

/// `|LHS − γ₂(α)|` where the left side is the dirty-paper ratio
/// `[1+gᴴ(K₁+K₂)g][1+hᴴK₁h] / ([1+hᴴ(K₁+K₂)h][1+gᴴK₁g])` evaluated by direct
/// quadratic forms on the optimal covariances.
pub fn sdpc_identity_gap(ch: &ChannelPair, alpha: f64) -> Result<f64> {
    sdpc_identity_gap_with(ch, &spectrum(ch)?, alpha)
}

pub fn sdpc_identity_gap_with(ch: &ChannelPair, spec: &ChannelSpectrum, alpha: f64) -> Result<f64> {
    let cov = optimal_covariances_with(ch, spec, alpha)?;
    let (h, g) = (ch.h(), ch.g());
    let total = cov.total()?;
    let lhs = (1.0 + qf(g, &total)?) * (1.0 + qf(h, &cov.k_u1)?)
        / ((1.0 + qf(h, &total)?) * (1.0 + qf(g, &cov.k_u1)?));
    let gamma = gamma2_full(ch, spec, alpha)?.lambda;
    Ok((lhs - gamma).abs())
}
