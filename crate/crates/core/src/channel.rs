//! Channel instances and their generalized-eigenvalue spectrum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{largest_gen_eig, ComplexVector, HermitianMatrix};

/// Default tolerance for the positive-secrecy predicates.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Scalar field of the channel alphabets.
///
/// The algebra always runs over `ℂ`; real alphabets only halve the reported
/// rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    #[default]
    Complex,
    Real,
}

/// Which value of the second entry of `g` to use for the two-antenna example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExampleVariant {
    /// `g = [1.801, 0.872]`
    #[default]
    TextG,
    /// `g = [1.801, 0.871]`
    MatrixG,
}

/// One transmitter with `t ≥ 2` antennas and two single-antenna users.
///
/// User 1 sees `hᴴx + z₁`, user 2 sees `gᴴx + z₂`, with `tr(K_X) ≤ power`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    h: ComplexVector,
    g: ComplexVector,
    power: f64,
    mode: FieldMode,
}

impl ChannelPair {
    pub fn new(h: ComplexVector, g: ComplexVector, power: f64, mode: FieldMode) -> Result<Self> {
        if h.dim() != g.dim() {
            return Err(Error::InvalidChannel(format!(
                "h has {} entries but g has {}",
                h.dim(),
                g.dim()
            )));
        }
        if h.dim() < 2 {
            return Err(Error::InvalidChannel(format!(
                "need at least 2 transmit antennas, got {}",
                h.dim()
            )));
        }
        if !h.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite("channel vectors"));
        }
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::InvalidChannel(format!("power must be finite and >= 0, got {power}")));
        }
        if mode == FieldMode::Real && !(h.is_real() && g.is_real()) {
            return Err(Error::InvalidChannel("real mode requires real channel vectors".into()));
        }
        Ok(Self { h, g, power, mode })
    }

    /// Real-valued convenience constructor.
    pub fn real(h: &[f64], g: &[f64], power: f64) -> Result<Self> {
        Self::new(ComplexVector::from_real(h), ComplexVector::from_real(g), power, FieldMode::Real)
    }

    /// Complex-mode channel from real-valued vectors.
    pub fn complex_from_real(h: &[f64], g: &[f64], power: f64) -> Result<Self> {
        Self::new(ComplexVector::from_real(h), ComplexVector::from_real(g), power, FieldMode::Complex)
    }

    /// The two-antenna real example with `P = 10`.
    pub fn example(variant: ExampleVariant) -> Self {
        let g2 = match variant {
            ExampleVariant::TextG => 0.872,
            ExampleVariant::MatrixG => 0.871,
        };
        Self::real(&[1.5, 0.0], &[1.801, g2], 10.0).expect("example channel is valid")
    }

    pub fn h(&self) -> &ComplexVector {
        &self.h
    }

    pub fn g(&self) -> &ComplexVector {
        &self.g
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn antennas(&self) -> usize {
        self.h.dim()
    }

    /// Same channel with the roles of the users exchanged.
    pub fn swapped(&self) -> Self {
        Self { h: self.g.clone(), g: self.h.clone(), power: self.power, mode: self.mode }
    }

    pub fn with_power(&self, power: f64) -> Result<Self> {
        Self::new(self.h.clone(), self.g.clone(), power, self.mode)
    }

    pub fn with_mode(&self, mode: FieldMode) -> Result<Self> {
        Self::new(self.h.clone(), self.g.clone(), self.power, mode)
    }

    /// `I + P h hᴴ`.
    pub fn gram_h(&self) -> HermitianMatrix {
        HermitianMatrix::identity_plus_rank_one(self.power, &self.h)
    }

    /// `I + P g gᴴ`.
    pub fn gram_g(&self) -> HermitianMatrix {
        HermitianMatrix::identity_plus_rank_one(self.power, &self.g)
    }

    /// Parses the channel JSON format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChannelJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidChannel(format!("channel JSON: {e}")))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChannelJson::from(self)).expect("channel serializes")
    }
}

/// Multiplier applied to every user-facing rate: 1 for complex alphabets,
/// 1/2 for real ones.
pub fn rate_scale(ch: &ChannelPair) -> f64 {
    match ch.mode {
        FieldMode::Complex => 1.0,
        FieldMode::Real => 0.5,
    }
}

/// Wire format: `{"h": [[re, im], ...], "g": [...], "power": P, "mode": "complex"|"real"}`.
/// Real mode also accepts bare numbers as entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub h: Vec<EntryJson>,
    pub g: Vec<EntryJson>,
    pub power: f64,
    #[serde(default)]
    pub mode: FieldMode,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Pair([f64; 2]),
    Bare(f64),
}

impl From<&ChannelPair> for ChannelJson {
    fn from(ch: &ChannelPair) -> Self {
        let conv = |v: &ComplexVector| v.entries().iter().map(|z| EntryJson::Pair([z.re, z.im])).collect();
        Self { h: conv(&ch.h), g: conv(&ch.g), power: ch.power, mode: ch.mode }
    }
}

impl TryFrom<ChannelJson> for ChannelPair {
    type Error = Error;

    fn try_from(raw: ChannelJson) -> Result<Self> {
        let conv = |entries: &[EntryJson], name: &str| -> Result<ComplexVector> {
            entries
                .iter()
                .map(|e| match *e {
                    EntryJson::Pair([re, im]) => Ok(Complex64::new(re, im)),
                    EntryJson::Bare(re) if raw.mode == FieldMode::Real => Ok(Complex64::new(re, 0.0)),
                    EntryJson::Bare(_) => Err(Error::InvalidChannel(format!(
                        "{name}: bare numbers are only accepted in real mode"
                    ))),
                })
                .collect::<Result<Vec<_>>>()
                .map(ComplexVector::new)
        };
        ChannelPair::new(conv(&raw.h, "h")?, conv(&raw.g, "g")?, raw.power, raw.mode)
    }
}

/// Largest generalized eigenpairs of `(I + Phhᴴ, I + Pggᴴ)` and of the
/// reversed pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpectrum {
    pub lambda1: f64,
    pub e1: ComplexVector,
    pub residual1: f64,
    pub lambda2: f64,
    pub e2: ComplexVector,
    pub residual2: f64,
}

pub fn spectrum(ch: &ChannelPair) -> Result<ChannelSpectrum> {
    let gh = ch.gram_h();
    let gg = ch.gram_g();
    let first = largest_gen_eig(&gh, &gg)?;
    let second = largest_gen_eig(&gg, &gh)?;
    Ok(ChannelSpectrum {
        lambda1: first.lambda,
        e1: first.evec,
        residual1: first.residual,
        lambda2: second.lambda,
        e2: second.evec,
        residual2: second.residual,
    })
}

impl ChannelSpectrum {
    /// `(λ₁ > 1 + tol, λ₂ > 1 + tol)`.
    pub fn feasibility(&self, tol: f64) -> (bool, bool) {
        (self.lambda1 > 1.0 + tol, self.lambda2 > 1.0 + tol)
    }
}

/// Whether each user can get a positive secrecy rate on its own.
pub fn is_secrecy_feasible(ch: &ChannelPair, tol: f64) -> Result<(bool, bool)> {
    Ok(spectrum(ch)?.feasibility(tol))
}

/// Sine of the principal angle between `span{h}` and `span{g}`; zero iff
/// the two vectors are linearly dependent. A zero vector is dependent on
/// anything.
pub fn linear_independence_margin(ch: &ChannelPair) -> Result<f64> {
    let nh = ch.h.norm_sqr();
    let ng = ch.g.norm_sqr();
    if nh == 0.0 && ng == 0.0 {
        return Err(Error::BothZeroVectors);
    }
    if nh == 0.0 || ng == 0.0 {
        return Ok(0.0);
    }
    let cos2 = ch.h.dot(&ch.g)?.norm_sqr() / (nh * ng);
    Ok((1.0 - cos2).clamp(0.0, 1.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_channels_have_unit_spectrum() {
        let ch = ChannelPair::complex_from_real(&[1.0, 0.0], &[1.0, 0.0], 10.0).unwrap();
        let s = spectrum(&ch).unwrap();
        assert!((s.lambda1 - 1.0).abs() < 1e-12);
        assert!((s.lambda2 - 1.0).abs() < 1e-12);
        assert_eq!(s.feasibility(FEASIBILITY_TOL), (false, false));
    }

    #[test]
    fn orthogonal_channels_decouple() {
        let ch = ChannelPair::complex_from_real(&[1.0, 0.0], &[0.0, 1.0], 3.0).unwrap();
        let s = spectrum(&ch).unwrap();
        assert!((s.lambda1 - 4.0).abs() < 1e-12);
        assert!((s.lambda2 - 4.0).abs() < 1e-12);
        assert!((s.e1[0].re - 1.0).abs() < 1e-12 && s.e1[1].norm() < 1e-12);
        assert!((s.e2[1].re - 1.0).abs() < 1e-12 && s.e2[0].norm() < 1e-12);
    }

    #[test]
    fn degraded_user_has_no_secrecy() {
        let ch = ChannelPair::complex_from_real(&[1.0, 1.0], &[0.5, 0.5], 10.0).unwrap();
        let s = spectrum(&ch).unwrap();
        assert_eq!(s.feasibility(FEASIBILITY_TOL), (true, false));
    }

    #[test]
    fn zero_power_gives_exact_unit_eigenvalues() {
        let ch = ChannelPair::complex_from_real(&[0.3, -1.2], &[2.0, 0.7], 0.0).unwrap();
        let s = spectrum(&ch).unwrap();
        assert_eq!(s.lambda1, 1.0);
        assert_eq!(s.lambda2, 1.0);
    }

    #[test]
    fn margin_edge_cases() {
        let dep = ChannelPair::complex_from_real(&[1.0, 2.0], &[2.0, 4.0], 1.0).unwrap();
        assert!(linear_independence_margin(&dep).unwrap() < 1e-8);
        let orth = ChannelPair::complex_from_real(&[1.0, 1.0], &[1.0, -1.0], 1.0).unwrap();
        assert!((linear_independence_margin(&orth).unwrap() - 1.0).abs() < 1e-15);
        let zero = ChannelPair::complex_from_real(&[0.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        assert_eq!(linear_independence_margin(&zero), Err(Error::BothZeroVectors));
        let ex = ChannelPair::example(ExampleVariant::TextG);
        let m = linear_independence_margin(&ex).unwrap();
        let direct = (1.0f64 - 1.801f64.powi(2) / (1.801f64.powi(2) + 0.872f64.powi(2))).sqrt();
        assert!((m - direct).abs() < 1e-15);
        assert!(m > 0.0 && m < 1.0);
    }

    #[test]
    fn rate_scale_by_mode() {
        let ex = ChannelPair::example(ExampleVariant::TextG);
        assert_eq!(rate_scale(&ex), 0.5);
        assert_eq!(rate_scale(&ex.with_mode(FieldMode::Complex).unwrap()), 1.0);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ChannelPair::complex_from_real(&[1.0], &[1.0], 1.0).is_err());
        assert!(ChannelPair::complex_from_real(&[1.0, 0.0], &[1.0, 0.0, 0.0], 1.0).is_err());
        assert!(ChannelPair::complex_from_real(&[1.0, 0.0], &[1.0, 0.0], -1.0).is_err());
        assert!(ChannelPair::complex_from_real(&[f64::NAN, 0.0], &[1.0, 0.0], 1.0).is_err());
        let cplx = ComplexVector::new(vec![Complex64::new(1.0, 0.5), Complex64::new(0.0, 0.0)]);
        assert!(ChannelPair::new(cplx, ComplexVector::from_real(&[1.0, 0.0]), 1.0, FieldMode::Real).is_err());
    }

    #[test]
    fn json_accepts_pairs_and_real_bare_numbers() {
        let ch = ChannelPair::from_json(r#"{"h":[1.5,0],"g":[[1.801,0],[0.872,0]],"power":10,"mode":"real"}"#)
            .unwrap();
        assert_eq!(ch, ChannelPair::example(ExampleVariant::TextG));
        assert!(ChannelPair::from_json(r#"{"h":[1.5,0],"g":[1.801,0.872],"power":10,"mode":"complex"}"#).is_err());
        let back = ChannelPair::from_json(&ch.to_json()).unwrap();
        assert_eq!(back, ch);
        let c = ChannelPair::from_json(r#"{"h":[[1,0.5],[0,0]],"g":[[0,0],[1,0]],"power":2}"#).unwrap();
        assert_eq!(c.mode(), FieldMode::Complex);
    }
}
