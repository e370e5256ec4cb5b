//! Archimedean side: gamma factors and constants, closed forms of the
//! holomorphic Shintani function on Bruhat cells, and a harness that checks
//! integral identities by comparing quadrature with closed forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{arg, cpow, ln_gamma_c};

pub mod appendix;
pub mod bounds;
pub mod ftn;
pub mod psi;
pub mod runner;
pub mod shintani;

pub use appendix::appendix_identity_check;
pub use ftn::{by_parts_check, cal_i, cal_i_by_parts, hypergeom_identity_check};
pub use psi::{default_contour_abscissa, psi_closed, psi_closed_general, psi_contour, PsiContour};
pub use runner::{random_specs, run_all, run_spec};
pub use shintani::{orbital_identity_check, shintani_cell, CellParams, ShintaniCell};

/// `base^exponent` with the principal branch Arg ∈ (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPower {
    pub base: C64,
    pub exponent: C64,
}

impl ComplexPower {
    pub fn new(base: C64, exponent: C64) -> Result<Self> {
        if base == C64::new(0.0, 0.0) {
            return Err(Error::DomainError("ComplexPower with zero base".into()));
        }
        Ok(ComplexPower { base, exponent })
    }

    pub fn value(&self) -> C64 {
        cpow(self.base, self.exponent)
    }

    /// (z₁z₂)^α = z₁^α z₂^α holds iff Arg z₁ + Arg z₂ stays in (−π, π].
    pub fn product_splits(z1: C64, z2: C64) -> bool {
        let t = arg(z1) + arg(z2);
        t > -PI && t <= PI
    }

    /// z₁^α z₂^α, refusing when the factorization would change branch.
    pub fn split_product(z1: C64, z2: C64, alpha: C64) -> Result<C64> {
        if !Self::product_splits(z1, z2) {
            return Err(Error::DomainError(format!("Arg window violated for {z1} · {z2}")));
        }
        Ok(cpow(z1, alpha) * cpow(z2, alpha))
    }
}

/// log of Γ_ℂ(s − m/2 + l) ∏_{j=1}^{⌊m/2⌋} Γ_ℂ(s + m/2 − j) (2^{ε−1}𝔡)^{s/2}.
pub fn ln_gamma_factor_l(l: i64, s: C64, m: usize, disc_l: f64, epsilon: u8) -> Result<C64> {
    if epsilon > 1 || !(disc_l > 0.0) {
        return Err(Error::DomainError(format!("gamma factor with ε={epsilon}, 𝔡={disc_l}")));
    }
    let h = m as f64 / 2.0;
    let mut acc = ln_gamma_c(s - h + l as f64)?;
    for j in 1..=m / 2 {
        acc += ln_gamma_c(s + h - j as f64)?;
    }
    let base = (2f64).powi(epsilon as i32 - 1) * disc_l;
    Ok(acc + s * 0.5 * base.ln())
}

pub fn gamma_factor_l(l: i64, s: C64, m: usize, disc_l: f64, epsilon: u8) -> Result<C64> {
    Ok(ln_gamma_factor_l(l, s, m, disc_l, epsilon)?.exp())
}

/// 2^{(−l−m/2+1)/2} |Q[ξ]|^{(−l+m/2+3/2)/2} 𝔡(𝓛₁)^{1/2} (2^{ε−1}𝔡(𝓛))^{1/4}.
pub fn c_l_xi(l: i64, m: usize, q_xi_abs: f64, disc_l1: f64, disc_l: f64, epsilon: u8) -> f64 {
    let l = l as f64;
    let h = m as f64 / 2.0;
    let ln2 = std::f64::consts::LN_2;
    let v = (-l - h + 1.0) / 2.0 * ln2
        + (-l + h + 1.5) / 2.0 * q_xi_abs.ln()
        + 0.5 * disc_l1.ln()
        + 0.25 * ((epsilon as f64 - 1.0) * ln2 + disc_l.ln());
    v.exp()
}

/// r^{−l} exp(−√(8Δ) π r).
pub fn whittaker_value(r: f64, l: i64, delta: f64) -> f64 {
    (-(l as f64) * r.ln() - (8.0 * delta).sqrt() * PI * r).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    SphereMoment,
    SpherePlaneWave,
    KBesselFourier,
    RadialCosine,
    GaussCosine,
    ContourBessel,
    KSeriesExpansion,
    DiskBound,
    DerivativeBound,
    GammaRatioBound,
    Cell1,
    W0Singular,
    W1Cell,
    PsiTwoPath,
    PsiVanishing,
    Hypergeom,
    ByParts,
    JBesselBound,
    PsiDecayBound,
    CalIBound,
}

impl IdentityId {
    pub const APPENDIX: [IdentityId; 10] = [
        IdentityId::SphereMoment,
        IdentityId::SpherePlaneWave,
        IdentityId::KBesselFourier,
        IdentityId::RadialCosine,
        IdentityId::GaussCosine,
        IdentityId::ContourBessel,
        IdentityId::KSeriesExpansion,
        IdentityId::DiskBound,
        IdentityId::DerivativeBound,
        IdentityId::GammaRatioBound,
    ];
    pub const ORBITAL: [IdentityId; 3] = [IdentityId::Cell1, IdentityId::W0Singular, IdentityId::W1Cell];
    pub const OTHER: [IdentityId; 7] = [
        IdentityId::PsiTwoPath,
        IdentityId::PsiVanishing,
        IdentityId::Hypergeom,
        IdentityId::ByParts,
        IdentityId::JBesselBound,
        IdentityId::PsiDecayBound,
        IdentityId::CalIBound,
    ];

    pub fn all() -> Vec<IdentityId> {
        let mut v = Self::APPENDIX.to_vec();
        v.extend(Self::ORBITAL);
        v.extend(Self::OTHER);
        v
    }

    pub fn is_bound(&self) -> bool {
        use IdentityId::*;
        matches!(self, DiskBound | DerivativeBound | GammaRatioBound | JBesselBound | PsiDecayBound | CalIBound)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::all()
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

pub type Params = BTreeMap<String, f64>;

pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub(crate) fn get(p: &Params, key: &str) -> Result<f64> {
    p.get(key).copied().ok_or_else(|| Error::DomainError(format!("missing parameter {key}")))
}

pub(crate) fn get_or(p: &Params, key: &str, default: f64) -> f64 {
    p.get(key).copied().unwrap_or(default)
}

pub(crate) fn get_c(p: &Params, key: &str) -> Result<C64> {
    Ok(C64::new(get(p, &format!("{key}_re"))?, get_or(p, &format!("{key}_im"), 0.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub identity_id: IdentityId,
    pub parameters: Params,
    pub lhs_method: String,
    pub rhs_method: String,
    pub tolerance: f64,
}

impl IdentitySpec {
    pub fn new(identity_id: IdentityId, parameters: Params, tolerance: f64) -> Self {
        let (lhs, rhs) = methods(identity_id);
        IdentitySpec { identity_id, parameters, lhs_method: lhs.into(), rhs_method: rhs.into(), tolerance }
    }
}

fn methods(id: IdentityId) -> (&'static str, &'static str) {
    use IdentityId::*;
    match id {
        SphereMoment => ("latitude quadrature, sphere volumes by recursion", "gamma closed form"),
        SpherePlaneWave => ("latitude quadrature", "J-Bessel closed form"),
        KBesselFourier => ("radial Hankel-type quadrature", "K-Bessel closed form"),
        RadialCosine => ("radial Hankel-type quadrature", "one-dimensional cosine transform"),
        GaussCosine => ("half-line quadrature", "Gaussian closed form"),
        ContourBessel => ("vertical line quadrature", "J-Bessel closed form"),
        KSeriesExpansion => ("radial Hankel-type quadrature", "truncated K-Bessel series"),
        DiskBound | DerivativeBound | GammaRatioBound | JBesselBound | PsiDecayBound | CalIBound => {
            ("maximum ratio on grid", "fitted or explicit constant")
        }
        Cell1 => ("oscillatory line quadrature", "gamma times Whittaker value"),
        W0Singular => ("radial times line quadrature", "gamma times Whittaker value"),
        W1Cell => ("nested three-fold quadrature", "J-Bessel closed form"),
        PsiTwoPath => ("vertical contour of K-Bessel", "beta-type integral"),
        PsiVanishing => ("vertical contour of K-Bessel", "zero"),
        Hypergeom => ("quadrature of Kummer function", "gamma times cal_I"),
        ByParts => ("direct cal_I", "q-fold integration by parts"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: IdentityId,
    pub parameters: Params,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Compares lhs with rhs; a zero rhs is judged on the absolute error.
    pub fn compare(identity_id: IdentityId, parameters: Params, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = if rhs.norm() == 0.0 { abs_err } else { abs_err / rhs.norm() };
        let ok = lhs.re.is_finite() && lhs.im.is_finite() && rhs.re.is_finite() && rhs.im.is_finite();
        VerificationReport {
            identity_id,
            parameters,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            passed: ok && rel_err <= tolerance,
            runtime_ms: 0.0,
            note: None,
        }
    }

    /// `observed` is the largest ratio on the grid, `constant` the allowed
    /// one; passes iff observed ≤ constant.
    pub fn bound(identity_id: IdentityId, parameters: Params, observed: f64, constant: f64) -> Self {
        let excess = if observed.is_finite() { ((observed - constant) / constant).max(0.0) } else { f64::INFINITY };
        VerificationReport {
            identity_id,
            parameters,
            lhs: C64::new(observed, 0.0),
            rhs: C64::new(constant, 0.0),
            abs_err: (observed - constant).max(0.0),
            rel_err: excess,
            tolerance: 0.0,
            passed: excess == 0.0,
            runtime_ms: 0.0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{c, cr, ln_gamma};

    #[test]
    fn complex_power_rules() {
        let z = c(-1.0, 0.0);
        assert!((ComplexPower::new(z, cr(0.5)).unwrap().value() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(ComplexPower::new(cr(0.0), cr(1.0)).is_err());
        let (a, b) = (c(0.3, 1.1), c(-0.7, 0.2));
        let w = c(-2.0, 0.5);
        assert!((cpow(w, a + b) - cpow(w, a) * cpow(w, b)).norm() < 1e-14);
        // Arg i + Arg i = π: still inside the window.
        assert!(ComplexPower::product_splits(c(0.0, 1.0), c(0.0, 1.0)));
        assert!(!ComplexPower::product_splits(c(-1.0, 0.1), c(-1.0, 0.1)));
        assert!(ComplexPower::split_product(c(-1.0, 0.1), c(-1.0, 0.1), cr(0.5)).is_err());
    }

    #[test]
    fn gamma_factor_direct() {
        assert!((crate::special::gamma_c(cr(1.0)).unwrap() - cr(1.0 / (2.0 * PI))).norm() < 1e-16);
        let s = cr(0.5);
        let g = gamma_factor_l(10, s, 3, 2.0, 1).unwrap();
        let gc = |x: f64| (ln_gamma(cr(x)).re - x * (2.0 * PI).ln()).exp();
        let want = gc(0.5 - 1.5 + 10.0) * gc(0.5 + 1.5 - 1.0) * 2f64.powf(0.25);
        assert!((g.re - want).abs() < 1e-13 * want && g.im.abs() < 1e-13 * want);
        assert!(matches!(gamma_factor_l(0, cr(1.0), 4, 1.0, 0), Err(Error::PoleHit(_))));
        for t in [0.0, 3.0, 17.0] {
            assert!(ln_gamma_factor_l(12, c(0.5, t), 5, 3.0, 1).unwrap().re.is_finite());
        }
    }

    #[test]
    fn c_l_xi_values() {
        let v = c_l_xi(1, 3, 1.0, 1.0, 1.0, 1);
        assert!((v - 2f64.powf(-0.75)).abs() < 1e-15);
        let (q, l) = (3.0, 7);
        let ratio = c_l_xi(2 * l, 4, q, 5.0, 2.0, 0) / c_l_xi(l, 4, q, 5.0, 2.0, 0);
        let want = 2f64.powf(-(l as f64) / 2.0) * q.powf(-(l as f64) / 2.0);
        assert!((ratio - want).abs() < 1e-13 * want);
        assert!(c_l_xi(400, 9, 11.0, 3.0, 7.0, 1) > 0.0);
    }

    #[test]
    fn whittaker_values() {
        assert!((whittaker_value(1.0, 5, 2.0) - (-(16f64).sqrt() * PI).exp()).abs() < 1e-18);
        assert!((whittaker_value(1.0, 0, 0.125) - (-PI).exp()).abs() < 1e-16);
        let (a, b, cc) = (whittaker_value(0.7, 3, 1.0), whittaker_value(0.7, 4, 1.0), whittaker_value(0.7, 5, 1.0));
        assert!(((b.ln() - a.ln()) - (cc.ln() - b.ln())).abs() < 1e-13);
    }

    #[test]
    fn identity_ids_round_trip() {
        for id in IdentityId::all() {
            assert_eq!(id.to_string().parse::<IdentityId>().unwrap(), id);
        }
        assert!("Nope".parse::<IdentityId>().is_err());
    }
}
