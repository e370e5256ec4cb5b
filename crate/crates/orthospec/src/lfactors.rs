//! Local Euler factors in Satake eigenvalues: standard, tensor product and
//! adjoint, plus ζ_p and the constant Δ_{G⁰,p}.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{GroupSpec, Root, SatakePoint};
use crate::special::{c, cr, rpow};

pub const POLE_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueMultiset {
    pub values: Vec<C64>,
}

impl EigenvalueMultiset {
    pub fn new(values: Vec<C64>) -> Self {
        EigenvalueMultiset { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// {ab : a ∈ self, b ∈ other}.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.len() * other.len());
        for a in &self.values {
            for b in &other.values {
                v.push(a * b);
            }
        }
        EigenvalueMultiset { values: v }
    }
}

/// ζ_p(s) = (1 − p^{−s})⁻¹.
pub fn zeta_p(p: u64, s: C64) -> Result<C64> {
    euler(&[cr(1.0)], p, s)
}

pub fn zeta_p_real(p: u64, s: f64) -> f64 {
    1.0 / (1.0 - (p as f64).powf(-s))
}

/// ∏_a (1 − a p^{−s})⁻¹.
pub fn euler(eigs: &[C64], p: u64, s: C64) -> Result<C64> {
    let ps = rpow(p as f64, -s);
    let mut prod = cr(1.0);
    for &a in eigs {
        let f = cr(1.0) - a * ps;
        if f.norm() < POLE_TOL {
            return Err(Error::PoleHit(a));
        }
        prod *= f;
    }
    Ok(prod.inv())
}

/// d/ds log ∏(1 − a p^{−s})⁻¹ = −log p · Σ a p^{−s}/(1 − a p^{−s}).
pub fn euler_log_derivative(eigs: &[C64], p: u64, s: C64) -> Result<C64> {
    let lp = (p as f64).ln();
    let ps = rpow(p as f64, -s);
    let mut acc = cr(0.0);
    for &a in eigs {
        let f = cr(1.0) - a * ps;
        if f.norm() < POLE_TOL {
            return Err(Error::PoleHit(a));
        }
        acc -= a * ps / f;
    }
    Ok(acc * lp)
}

fn check_n0(spec: &GroupSpec) -> Result<()> {
    if spec.n0 > 2 {
        return Err(Error::UnsupportedN0(spec.n0));
    }
    Ok(())
}

/// {p^{±ν_j}} together with {1, −1} when n0 = 2.
pub fn std_eigenvalues(nu: &SatakePoint, spec: &GroupSpec) -> Result<EigenvalueMultiset> {
    check_n0(spec)?;
    if nu.ell() != spec.ell {
        return Err(Error::DimensionMismatch { expected: spec.ell, got: nu.ell() });
    }
    let mut v = Vec::with_capacity(2 * spec.ell + 2);
    for x in nu.exps() {
        v.push(x);
        v.push(x.inv());
    }
    if spec.n0 == 2 {
        v.push(cr(1.0));
        v.push(cr(-1.0));
    }
    Ok(EigenvalueMultiset::new(v))
}

pub fn std_lfactor(nu: &SatakePoint, spec: &GroupSpec, s: C64) -> Result<C64> {
    euler(&std_eigenvalues(nu, spec)?.values, spec.p, s)
}

pub fn rankin_selberg_lfactor(z_eigs: &EigenvalueMultiset, nu_eigs: &EigenvalueMultiset, p: u64, s: C64) -> Result<C64> {
    euler(&z_eigs.tensor(nu_eigs).values, p, s)
}

/// Roots of the dual group used for the adjoint factor:
/// n0 = 0 → D_ℓ, n0 = 1 → C_ℓ, n0 = 2 → B_ℓ.
pub fn dual_roots(spec: &GroupSpec) -> Result<Vec<Root>> {
    check_n0(spec)?;
    let n = spec.ell;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut r = vec![0; n];
                r[i] = a;
                r[j] = b;
                out.push(Root(r));
            }
        }
        let k = match spec.n0 {
            0 => 0,
            1 => 2,
            _ => 1,
        };
        if k != 0 {
            for sgn in [1, -1] {
                let mut r = vec![0; n];
                r[i] = sgn * k;
                out.push(Root(r));
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of Ad(A_p(ν)): p^{⟨α,ν⟩} over dual roots, and ℓ ones.
pub fn adjoint_eigenvalues(nu: &SatakePoint, spec: &GroupSpec) -> Result<EigenvalueMultiset> {
    if nu.ell() != spec.ell {
        return Err(Error::DimensionMismatch { expected: spec.ell, got: nu.ell() });
    }
    let mut v: Vec<C64> = dual_roots(spec)?.iter().map(|r| rpow(spec.p as f64, r.eval(&nu.nu))).collect();
    v.extend(std::iter::repeat(cr(1.0)).take(spec.ell));
    Ok(EigenvalueMultiset::new(v))
}

pub fn adjoint_lfactor(nu: &SatakePoint, spec: &GroupSpec, s: C64) -> Result<C64> {
    euler(&adjoint_eigenvalues(nu, spec)?.values, spec.p, s)
}

/// Δ_{G⁰,p}. For odd m `chi` must be `None`; for even m it is
/// χ_{K_p/ℚ_p}(p) ∈ {−1, 0, 1}.
pub fn delta_constant(p: u64, m: usize, chi: Option<i8>) -> Result<f64> {
    if m < 3 {
        return Err(Error::TooSmall { min: 3, got: m });
    }
    let pf = p as f64;
    if m % 2 == 1 {
        if chi.is_some() {
            return Err(Error::BadParity("be absent for odd m"));
        }
        Ok((1..=(m + 1) / 2).map(|j| zeta_p_real(p, 2.0 * j as f64)).product())
    } else {
        let chi = chi.ok_or(Error::BadParity("be supplied for even m"))?;
        if !(-1..=1).contains(&chi) {
            return Err(Error::BadParity("lie in {-1, 0, 1}"));
        }
        let base: f64 = (1..=m / 2).map(|j| zeta_p_real(p, 2.0 * j as f64)).product();
        Ok(base / (1.0 - chi as f64 * pf.powf(-((m + 2) as f64) / 2.0)))
    }
}

/// Convenience: 1 − x, used by density code that wants the pole-free form.
pub fn one_minus_pow(p: u64, z: C64) -> C64 {
    c(1.0, 0.0) - rpow(p as f64, -z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn std_examples() {
        let spec = GroupSpec::new(2, 1, 0);
        let nu = SatakePoint::zero(2, 1);
        assert_eq!(std_eigenvalues(&nu, &spec).unwrap().values, vec![cr(1.0), cr(1.0)]);
        assert!(close(std_lfactor(&nu, &spec, cr(1.0)).unwrap(), cr(4.0), 1e-15));
        let spec2 = GroupSpec::new(2, 1, 2);
        assert!(close(std_lfactor(&nu, &spec2, cr(1.0)).unwrap(), cr(16.0 / 3.0), 1e-15));
        assert_eq!(std_eigenvalues(&nu, &GroupSpec::new(2, 1, 3)), Err(Error::UnsupportedN0(3)));
    }

    #[test]
    fn pole_detection() {
        let spec = GroupSpec::new(3, 1, 0);
        let nu = SatakePoint::zero(3, 1);
        assert!(matches!(std_lfactor(&nu, &spec, cr(0.0)), Err(Error::PoleHit(_))));
    }

    #[test]
    fn tempered_unit_circle_and_reflection() {
        let spec = GroupSpec::new(5, 2, 1);
        let nu = SatakePoint::tempered(5, &[0.4, 1.3]);
        for a in std_eigenvalues(&nu, &spec).unwrap().values {
            assert!((a.norm() - 1.0).abs() < 1e-14);
        }
        let s = c(0.8, 0.6);
        let l1 = std_lfactor(&nu, &spec, s).unwrap();
        let l2 = std_lfactor(&nu, &spec, s.conj()).unwrap();
        assert!(close(l1, l2.conj(), 1e-13));
    }

    #[test]
    fn box_with_trivial_and_swap() {
        let spec = GroupSpec::new(3, 2, 0);
        let nu = SatakePoint::tempered(3, &[0.2, 0.9]);
        let e = std_eigenvalues(&nu, &spec).unwrap();
        let one = EigenvalueMultiset::new(vec![cr(1.0)]);
        let s = c(0.5, 0.0);
        assert!(close(rankin_selberg_lfactor(&one, &e, 3, s).unwrap(), std_lfactor(&nu, &spec, s).unwrap(), 1e-14));
        let z = EigenvalueMultiset::new(vec![c(0.0, 1.0), c(0.0, -1.0), cr(1.0)]);
        let a = rankin_selberg_lfactor(&z, &e, 3, s).unwrap();
        let b = rankin_selberg_lfactor(&e, &z, 3, s).unwrap();
        assert!(close(a, b, 1e-13));
    }

    #[test]
    fn adjoint_sl2_example() {
        let spec = GroupSpec::new(3, 1, 1);
        let nu = SatakePoint::new(3, vec![c(0.1, 0.4)]);
        let s = c(1.5, 0.2);
        let p = 3f64;
        let v = nu.nu[0];
        let want = (cr(1.0) - rpow(p, v * 2.0 - s)).inv()
            * (cr(1.0) - rpow(p, -v * 2.0 - s)).inv()
            * (cr(1.0) - rpow(p, -s)).inv();
        assert!(close(adjoint_lfactor(&nu, &spec, s).unwrap(), want, 1e-14));
    }

    #[test]
    fn delta_examples() {
        assert!((delta_constant(2, 3, None).unwrap() - 64.0 / 45.0).abs() < 1e-15);
        assert!((zeta_p(2, cr(1.0)).unwrap() - cr(2.0)).norm() < 1e-15);
        let d4 = delta_constant(3, 4, Some(0)).unwrap();
        assert!((d4 - zeta_p_real(3, 2.0) * zeta_p_real(3, 4.0)).abs() < 1e-15);
        assert!(delta_constant(3, 3, Some(1)).is_err());
        assert!(delta_constant(3, 4, None).is_err());
    }
}
