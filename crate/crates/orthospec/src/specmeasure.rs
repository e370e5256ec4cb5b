//! The local spectral measure Λ_p^{ξ,(z)}, the Mellin transform Ŵ_p(φ; s),
//! products over a finite set of primes, and the main-theorem constants.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfactors::{adjoint_lfactor, delta_constant, euler, std_eigenvalues, zeta_p, zeta_p_real, EigenvalueMultiset};
use crate::plancherel::{integrate, PlancherelSpec, TorusGrid};
use crate::rootdata::{eval_hecke, GroupSpec, HeckeSymbol, SatakePoint};
use crate::special::{cr, digamma, ln_gamma_real};

/// Local data at one prime: G of dimension m + 2, H = G₁^ξ of dimension
/// m − 1, the spectral parameter z of σ on H, and the quadrature grid for G.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureConfig {
    pub g_spec: GroupSpec,
    pub h_spec: GroupSpec,
    pub z: SatakePoint,
    pub m: usize,
    /// χ_{K_p/ℚ_p}(p) for even m.
    pub chi: Option<i8>,
    pub grid: TorusGrid,
    pub pspec: PlancherelSpec,
}

impl MeasureConfig {
    /// Validates dimensions and fixes Q_p on `grid`.
    pub fn new(g_spec: GroupSpec, h_spec: GroupSpec, z: SatakePoint, m: usize, chi: Option<i8>, n: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::TooSmall { min: 3, got: m });
        }
        if g_spec.dim() != m + 2 {
            return Err(Error::DimensionMismatch { expected: m + 2, got: g_spec.dim() });
        }
        if h_spec.dim() != m - 1 {
            return Err(Error::DimensionMismatch { expected: m - 1, got: h_spec.dim() });
        }
        if h_spec.p != g_spec.p || z.p != g_spec.p {
            return Err(Error::DomainError("primes of G, H and z differ".into()));
        }
        if z.ell() != h_spec.ell {
            return Err(Error::DimensionMismatch { expected: h_spec.ell, got: z.ell() });
        }
        match (m % 2, chi) {
            (1, Some(_)) => return Err(Error::BadParity("be absent for odd m")),
            (0, None) => return Err(Error::BadParity("be supplied for even m")),
            _ => {}
        }
        let grid = TorusGrid::for_spec(&g_spec, n)?;
        let pspec = PlancherelSpec::normalized(g_spec, &grid, 1e-11)?;
        Ok(MeasureConfig { g_spec, h_spec, z, m, chi, grid, pspec })
    }

    /// ε = 1 for odd m, 0 for even m.
    pub fn epsilon(&self) -> i32 {
        (self.m % 2) as i32
    }

    pub fn p(&self) -> u64 {
        self.g_spec.p
    }

    fn sigma_eigs(&self) -> Result<EigenvalueMultiset> {
        std_eigenvalues(&self.z, &self.h_spec)
    }

    fn with_grid(&self, grid: TorusGrid) -> Self {
        MeasureConfig { grid, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub imag: f64,
    /// |value(N) − value(2N)|.
    pub error_est: f64,
}

/// Δ_{G⁰,p}·ζ_p(1)^{ε−1}/(L(1,σ;Ad)·L(1,σ;Std)).
fn lambda_prefactor(cfg: &MeasureConfig) -> Result<C64> {
    let p = cfg.p();
    let delta = delta_constant(p, cfg.m, cfg.chi)?;
    let z1 = zeta_p_real(p, 1.0).powi(cfg.epsilon() - 1);
    let one = cr(1.0);
    let ad = adjoint_lfactor(&cfg.z, &cfg.h_spec, one)?;
    let st = euler(&cfg.sigma_eigs()?.values, p, one)?;
    Ok(cr(delta * z1) / (ad * st))
}

fn lambda_raw<F>(alpha: &F, cfg: &MeasureConfig) -> Result<C64>
where
    F: Fn(&SatakePoint) -> Result<C64> + Sync,
{
    if !cfg.z.is_tempered() {
        return Err(Error::NotTempered);
    }
    let p = cfg.p();
    let sig = cfg.sigma_eigs()?;
    let half = cr(0.5);
    let integrand = |nu: &SatakePoint| -> Result<C64> {
        let a = alpha(nu)?;
        if a == cr(0.0) {
            return Ok(a);
        }
        let pe = std_eigenvalues(nu, &cfg.g_spec)?;
        let boxf = euler(&sig.tensor(&pe).values, p, half)?;
        let std = euler(&pe.values, p, half)?;
        let ad = adjoint_lfactor(nu, &cfg.g_spec, cr(1.0))?;
        Ok(a * boxf * std / ad)
    };
    Ok(lambda_prefactor(cfg)? * integrate(&integrand, &cfg.pspec, &cfg.grid)?)
}

/// Λ_p^{ξ,(z)}(α) for a Weyl-invariant α; the real part of the quadrature.
pub fn lambda_measure<F>(alpha: &F, cfg: &MeasureConfig) -> Result<f64>
where
    F: Fn(&SatakePoint) -> Result<C64> + Sync,
{
    Ok(lambda_raw(alpha, cfg)?.re)
}

/// Λ with its imaginary residue and an N vs 2N error estimate.
pub fn lambda_measure_detailed<F>(alpha: &F, cfg: &MeasureConfig) -> Result<MeasureValue>
where
    F: Fn(&SatakePoint) -> Result<C64> + Sync,
{
    let v = lambda_raw(alpha, cfg)?;
    let fine = cfg.with_grid(cfg.grid.refined());
    let v2 = lambda_raw(alpha, &fine)?;
    Ok(MeasureValue { value: v.re, imag: v.im, error_est: (v - v2).norm() })
}

pub fn lambda_of_symbol(sym: &HeckeSymbol, cfg: &MeasureConfig) -> Result<f64> {
    lambda_measure(&|nu: &SatakePoint| eval_hecke(sym, nu), cfg)
}

/// Ŵ_p^{ξ,(z)}(φ; s), assembled term by term from its own formula.
pub fn mellin_w_hat(phi_hat: &HeckeSymbol, cfg: &MeasureConfig, s: C64) -> Result<C64> {
    if !(s.re > -0.5) {
        return Err(Error::OutOfDomain(format!("Re s = {} must exceed -1/2", s.re)));
    }
    if cfg.z.nu.iter().any(|z| z.re.abs() >= 0.5) {
        return Err(Error::OutOfDomain("|Re z_j| must be below 1/2".into()));
    }
    let p = cfg.p();
    let one = cr(1.0);
    let delta = delta_constant(p, cfg.m, cfg.chi)?;
    let sig = std_eigenvalues(&cfg.z, &cfg.h_spec)?;
    let ad_sigma = adjoint_lfactor(&cfg.z, &cfg.h_spec, one)?;
    let std_sigma = euler(&sig.values, p, s + 1.0)?;
    let zeta = zeta_p(p, s * 2.0 + 1.0)?.powi(1 - cfg.epsilon());
    let outer = cr(delta) / (ad_sigma * std_sigma * zeta);
    let integrand = |nu: &SatakePoint| -> Result<C64> {
        let ph = eval_hecke(phi_hat, nu)?;
        if ph == cr(0.0) {
            return Ok(ph);
        }
        let pe = std_eigenvalues(nu, &cfg.g_spec)?;
        let mut prod = Vec::with_capacity(sig.len() * pe.len());
        for a in &sig.values {
            for b in &pe.values {
                prod.push(a * b);
            }
        }
        let boxf = euler(&prod, p, cr(0.5))?;
        let ad_pi = adjoint_lfactor(nu, &cfg.g_spec, one)?;
        let std_pi = euler(&pe.values, p, s + 0.5)?;
        Ok(ph * boxf * std_pi / ad_pi)
    };
    Ok(outer * integrate(&integrand, &cfg.pspec, &cfg.grid)?)
}

/// ∏_p Λ_p(α_p); the empty product is 1.
pub fn product_measure(per_prime: &[(MeasureConfig, HeckeSymbol)]) -> Result<f64> {
    let mut v = 1.0;
    for (cfg, sym) in per_prime {
        v *= lambda_of_symbol(sym, cfg)?;
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainConstants {
    pub b: f64,
    /// Only defined for even m.
    pub d: Option<f64>,
    pub rho: f64,
    pub delta_flag: bool,
}

/// b = 2δ(2ξ ∈ 𝓛₁)(𝔡(𝓛)/2)^{−1/2}(π/4)^{−ρ}; for even m
/// d = −½ log(𝔡(𝓛₁^ξ)/2) + (m/2 − 1) log 2π − Σ_{j<m/2} ψ((m+1)/2 − j).
pub fn main_constants(m: usize, disc_l: u64, disc_l1xi: u64, two_xi_in_l1: bool) -> Result<MainConstants> {
    if m < 3 {
        return Err(Error::TooSmall { min: 3, got: m });
    }
    let rho = (m as f64 - 1.0) / 2.0;
    let pi = std::f64::consts::PI;
    let b = if two_xi_in_l1 { 2.0 * (disc_l as f64 / 2.0).powf(-0.5) * (pi / 4.0).powf(-rho) } else { 0.0 };
    let d = if m % 2 == 0 {
        let mut d = -0.5 * (disc_l1xi as f64 / 2.0).ln() + (m as f64 / 2.0 - 1.0) * (2.0 * pi).ln();
        for j in 1..m / 2 {
            d -= digamma((m as f64 + 1.0) / 2.0 - j as f64);
        }
        Some(d)
    } else {
        None
    };
    Ok(MainConstants { b, d, rho, delta_flag: two_xi_in_l1 })
}

/// Odd m: b·L(1). Even m: b·(L′(1) − d·L(1)).
pub fn c_constant(consts: &MainConstants, m: usize, l_value: f64, l_prime: Option<f64>) -> Result<f64> {
    if m % 2 == 1 {
        Ok(consts.b * l_value)
    } else {
        let lp = l_prime.ok_or(Error::MissingDerivative)?;
        let d = consts.d.ok_or(Error::MissingDerivative)?;
        Ok(consts.b * (lp - d * l_value))
    }
}

fn ln_gamma_pos(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::DomainError(format!("Gamma argument {x} is not positive")));
    }
    Ok(ln_gamma_real(x))
}

/// log of Γ(l−ρ−½)Γ(l−2ρ)/(Γ(l−ρ/2)Γ(l−ρ/2+½)).
fn ln_gamma_quotient(l: f64, rho: f64) -> Result<f64> {
    Ok(ln_gamma_pos(l - rho - 0.5)? + ln_gamma_pos(l - 2.0 * rho)?
        - ln_gamma_pos(l - rho / 2.0)?
        - ln_gamma_pos(l - rho / 2.0 + 0.5)?)
}

/// 𝚪(l) = l^m Γ(l−ρ−½)Γ(l−2ρ)/(Γ(l−ρ/2)Γ(l−ρ/2+½)).
pub fn bold_gamma(l: u64, m: usize) -> Result<f64> {
    let rho = (m as f64 - 1.0) / 2.0;
    let l = l as f64;
    Ok((m as f64 * l.ln() + ln_gamma_quotient(l, rho)?).exp())
}

fn ln_gamma_l0_common(l: f64, m: usize, disc_l: f64, delta: f64) -> Result<f64> {
    let rho = (m as f64 - 1.0) / 2.0;
    let pi = std::f64::consts::PI;
    Ok(ln_gamma_pos(2.0 * l - rho)? + rho * (pi / 4.0).ln() + 0.5 * (disc_l / 2.0).ln() - 4f64.ln()
        + (2.0 * rho - 2.0 * l + 1.0) * (4.0 * pi * (2.0 * delta).sqrt()).ln())
}

/// log 𝚪(l, 0), the exact product.
pub fn ln_gamma_l0_exact(l: u64, m: usize, disc_l: f64, delta: f64) -> Result<f64> {
    let rho = (m as f64 - 1.0) / 2.0;
    let lf = l as f64;
    Ok(ln_gamma_quotient(lf, rho)? + ln_gamma_l0_common(lf, m, disc_l, delta)?)
}

/// log of the large-l asymptote, with the Γ-quotient replaced by l^{−m}.
pub fn ln_gamma_l0_asymptote(l: u64, m: usize, disc_l: f64, delta: f64) -> Result<f64> {
    let lf = l as f64;
    Ok(-(m as f64) * lf.ln() + ln_gamma_l0_common(lf, m, disc_l, delta)?)
}

pub fn gamma_l0_ratio(l: u64, m: usize, disc_l: f64, delta: f64) -> Result<f64> {
    Ok((ln_gamma_l0_exact(l, m, disc_l, delta)? - ln_gamma_l0_asymptote(l, m, disc_l, delta)?).exp())
}

/// c·(1 + (−1)^l χ)·Λ.
pub fn rhs_main_theorem(c: f64, l: u64, chi: i32, lambda: f64) -> f64 {
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    c * (1.0 + sign * chi as f64) * lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_simple() -> MeasureConfig {
        // m = 3: G split of rank 2 with n0 = 1, H of dimension 2 split
        MeasureConfig::new(
            GroupSpec::new(3, 2, 1),
            GroupSpec::new(3, 1, 0),
            SatakePoint::tempered(3, &[0.7]),
            3,
            None,
            64,
        )
        .unwrap()
    }

    #[test]
    fn zero_and_positive() {
        let cfg = cfg_simple();
        assert_eq!(lambda_measure(&|_: &SatakePoint| Ok(cr(0.0)), &cfg).unwrap(), 0.0);
        let v = lambda_measure_detailed(&|_: &SatakePoint| Ok(cr(1.0)), &cfg).unwrap();
        assert!(v.value > 0.0 && v.imag.abs() <= 1e-10 * v.value && v.error_est < 1e-9 * v.value, "{v:?}");
    }

    #[test]
    fn mellin_matches_lambda_at_zero() {
        let cfg = cfg_simple();
        let mut h = HeckeSymbol::constant(3, 2, cr(2.0));
        h.add_orbit(&[1, 0], cr(0.5)).unwrap();
        let a = mellin_w_hat(&h, &cfg, cr(0.0)).unwrap();
        let b = lambda_of_symbol(&h, &cfg).unwrap();
        assert!((a.re - b).abs() < 1e-12 * b.abs());
        assert!(matches!(mellin_w_hat(&h, &cfg, cr(-0.6)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn not_tempered() {
        let mut cfg = cfg_simple();
        cfg.z = SatakePoint::new(3, vec![C64::new(0.2, 0.0)]);
        assert_eq!(lambda_measure(&|_: &SatakePoint| Ok(cr(1.0)), &cfg), Err(Error::NotTempered));
    }

    #[test]
    fn constants_examples() {
        let c = main_constants(3, 2, 2, true).unwrap();
        assert!((c.b - 8.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!(c.d.is_none());
        assert_eq!(main_constants(3, 2, 2, false).unwrap().b, 0.0);
        let c4 = main_constants(4, 2, 2, true).unwrap();
        let psi32 = 2.0 - 0.577_215_664_901_532_9 - 2.0 * 2f64.ln();
        assert!((c4.d.unwrap() - ((2.0 * std::f64::consts::PI).ln() - psi32)).abs() < 1e-13);
        let one = MainConstants { b: 1.0, d: Some(0.0), rho: 1.5, delta_flag: true };
        assert_eq!(c_constant(&one, 4, 5.0, Some(3.0)).unwrap(), 3.0);
        assert_eq!(c_constant(&one, 4, 5.0, None), Err(Error::MissingDerivative));
        assert_eq!(c_constant(&one, 3, 2.0, None).unwrap(), 2.0);
    }

    #[test]
    fn bold_gamma_examples() {
        // frozen from an independent mpmath evaluation
        assert!((bold_gamma(200, 3).unwrap() - 1.022_848_256_497_61).abs() < 1e-10);
        assert!((bold_gamma(1600, 7).unwrap() - 1.016_404_329_471_35).abs() < 1e-10);
        assert!((bold_gamma(10, 5).unwrap() - 4.668_534_080_298_79).abs() < 1e-10);
        assert!(bold_gamma(10, 3).unwrap() > 0.0);
        assert!(bold_gamma(1, 5).is_err());
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs_main_theorem(2.0, 4, -1, 3.0), 0.0);
        assert_eq!(rhs_main_theorem(2.0, 4, 0, 3.0), 6.0);
        assert_eq!(rhs_main_theorem(2.0, 4, 1, 3.0), 12.0);
    }
}
