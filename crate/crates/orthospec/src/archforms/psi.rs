//! Ψ_l^{(s)}(η) as a vertical contour integral of a K-Bessel kernel and in
//! its beta-type closed form. η enters through a = −⟨ξ₀⁻, η⟩ and ‖η^#‖.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64 as C64;

use super::{get, get_c, get_or, IdentityId, Params, VerificationReport};
use crate::error::{Error, Result};
use crate::quad::{self, Tol};
use crate::special::{bessel_k_scaled, clog, cr, ln_gamma_real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiContour {
    pub value: C64,
    pub c: f64,
    pub truncation: f64,
    /// Estimated |tail| beyond the truncation.
    pub tail: f64,
    /// |integrand| at t = 0 times c, the natural size of the integral.
    pub scale: f64,
}

/// Saddle of |z^{ρ−l} e^{(α−β)z}| on the real axis, α = 2√2πa, β = 2√2π‖η^#‖.
pub fn default_contour_abscissa(a: f64, n: f64, l: i64, rho: f64) -> f64 {
    let d = 2.0 * SQRT_2 * PI * (a - n);
    let c = (l as f64 - rho) / d.abs().max(1e-3);
    c.clamp(0.05, 1e4)
}

/// i π^{ρ−l} 2^{3(ρ−l+1)/2} Γ(l−ρ) ∫_{(c)} z^{ρ−l} K_s(2√2‖η^#‖πz) e^{2√2π a z} dz.
/// The line is run from c + i∞ down to c − i∞, which turns the integral into
/// π^{ρ−l} 2^{3(ρ−l+1)/2} Γ(l−ρ) ∫_ℝ F(c+it) dt.
pub fn psi_contour(a: f64, eta_sharp_norm: f64, s: C64, l: i64, rho: f64, c: f64, rel: f64) -> Result<PsiContour> {
    let lf = l as f64;
    if !(lf > 4.0 * rho + 1.0) {
        return Err(Error::DomainError(format!("psi_contour needs l > 4ρ+1 (l={l}, ρ={rho})")));
    }
    if !(c > 0.0) || !(eta_sharp_norm > 0.0) || !a.is_finite() {
        return Err(Error::DomainError("psi_contour needs c > 0 and ‖η#‖ > 0".into()));
    }
    let k = 2.0 * SQRT_2 * PI;
    let (alpha, beta) = (k * a, k * eta_sharp_norm);
    let ln_pref = (rho - lf) * PI.ln() + 1.5 * (rho - lf + 1.0) * std::f64::consts::LN_2 + ln_gamma_real(lf - rho);
    let f = |t: f64| -> C64 {
        let z = C64::new(c, t);
        let kz = bessel_k_scaled(s, z * beta).unwrap_or(C64::new(f64::NAN, 0.0));
        (clog(z) * (rho - lf) + z * (alpha - beta) + ln_pref).exp() * kz
    };
    let f0 = f(0.0).norm();
    if !f0.is_finite() {
        return Err(Error::NonConvergent("psi_contour integrand overflow".into()));
    }
    let scale = f0 * c;
    let decay = lf - rho - 1.5; // |F| ~ |t|^{ρ−l−1/2}
    let tail_at = |t: f64| (f(t).norm() + f(-t).norm()) * t / decay;
    let mut big_t = 16.0 * c.max(1.0);
    while tail_at(big_t) > 1e-3 * rel * scale && big_t < 1e7 {
        big_t *= 2.0;
    }
    let tail = tail_at(big_t);
    if tail > rel * scale {
        return Err(Error::NonConvergent(format!("psi_contour tail {tail:e} at T = {big_t}")));
    }
    let freq = (alpha - beta).abs().max(1e-9);
    let w = c.min(PI / freq).min(big_t);
    let np = ((2.0 * big_t / w).ceil() as usize).clamp(2, 200_000);
    let pts: Vec<f64> = (0..=np).map(|i| -big_t + 2.0 * big_t * i as f64 / np as f64).collect();
    let t = Tol { rel: 1e-3 * rel, abs: 1e-3 * rel * scale / np as f64, max_intervals: 200 };
    let q = quad::adaptive_pts(&f, &pts, t);
    if !q.converged || !q.value.re.is_finite() {
        return Err(Error::NonConvergent("psi_contour quadrature".into()));
    }
    Ok(PsiContour { value: q.value, c, truncation: big_t, tail, scale })
}

/// General closed form for −Q[η] = a² − ‖η^#‖² > 0:
/// zero if a < 0, else 2^{−l+ρ+1} ‖η^#‖^{−s} (√−Q)^{s+l−ρ−1}
/// ∫_{−1}^{1} (1−t²)^{l−ρ−1} (a/√−Q + t)^{s−l+ρ} dt.
pub fn psi_closed_general(a: f64, eta_sharp_norm: f64, s: C64, l: i64, rho: f64) -> Result<C64> {
    let lf = l as f64;
    let nq = a * a - eta_sharp_norm * eta_sharp_norm;
    if !(nq > 0.0) || !(eta_sharp_norm > 0.0) || !(lf > rho) {
        return Err(Error::DomainError(format!("psi closed form needs a² > ‖η#‖² > 0 and l > ρ (a={a})")));
    }
    if a < 0.0 {
        return Ok(cr(0.0));
    }
    let root = nq.sqrt();
    let big_a = a / root;
    let e1 = lf - rho - 1.0;
    let e2 = s - lf + rho;
    // p = 1 + t, q = 1 − t, each taken from the endpoint it is measured to
    let g = |t: f64, p: f64, q: f64| -> C64 {
        let lp = if e1 == 0.0 { 0.0 } else { e1 * (p * q).ln() };
        (e2 * (big_a + t).ln() + lp).exp()
    };
    // the peak of (1−t²)^{e1}(A+t)^{−e1} sits at t = −A + √(A²−1)
    let tp = (-big_a + (big_a * big_a - 1.0).sqrt()).clamp(-0.9, 0.9);
    let t = Tol { rel: 1e-14, abs: 1e-300, max_intervals: 4000 };
    let q1 = quad::tanh_sinh(&|x: f64, da: f64, _db: f64| g(x, da, 1.0 - x), -1.0, tp, t);
    let q2 = quad::tanh_sinh(&|x: f64, _da: f64, db: f64| g(x, 1.0 + x, db), tp, 1.0, t);
    if !q1.converged || !q2.converged {
        return Err(Error::NonConvergent("psi closed-form integral".into()));
    }
    let pref = ((1.0 - lf + rho) * std::f64::consts::LN_2 - s * eta_sharp_norm.ln() + (s + lf - rho - 1.0) * root.ln()).exp();
    Ok(pref * (q1.value + q2.value))
}

/// The Q[η] = −1 normalization: ‖η^#‖ = √(a²−1).
pub fn psi_closed(a: f64, s: C64, l: i64, rho: f64) -> Result<C64> {
    if !(a > 1.0) {
        return Err(Error::DomainError(format!("psi_closed needs a > 1, got {a}")));
    }
    psi_closed_general(a, (a * a - 1.0).sqrt(), s, l, rho)
}

/// Parameters: a, l, m, s_re, s_im, optional eta_sharp (default √(a²−1))
/// and c (default: the saddle).
pub fn psi_check(id: IdentityId, p: &Params) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let a = get(p, "a")?;
    let l = get(p, "l")? as i64;
    let rho = (get(p, "m")? - 1.0) / 2.0;
    let s = get_c(p, "s")?;
    let mut rep = match id {
        IdentityId::PsiTwoPath => {
            let n = get_or(p, "eta_sharp", (a * a - 1.0).sqrt());
            let c = get_or(p, "c", default_contour_abscissa(a, n, l, rho));
            let tol = get_or(p, "tol", 1e-7);
            let lhs = psi_contour(a, n, s, l, rho, c, 1e-3 * tol)?;
            let rhs = psi_closed_general(a, n, s, l, rho)?;
            VerificationReport::compare(id, p.clone(), lhs.value, rhs, tol)
        }
        IdentityId::PsiVanishing => {
            if !(a < 0.0) {
                return Err(Error::DomainError("PsiVanishing needs a < 0".into()));
            }
            let n = get(p, "eta_sharp")?;
            let c = get_or(p, "c", default_contour_abscissa(a, n, l, rho));
            let lhs = psi_contour(a, n, s, l, rho, c, 1e-6)?;
            VerificationReport::compare(id, p.clone(), lhs.value, cr(0.0), get_or(p, "tol", 1e-8))
                .with_note(format!("c = {c:.4}, integrand scale {:.3e}", lhs.scale))
        }
        other => return Err(Error::DomainError(format!("{other} is not a Ψ identity"))),
    };
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::c;

    #[test]
    fn two_paths_agree() {
        for &(a, l, s) in &[(1.5f64, 12, c(0.7, 0.3)), (3.0, 20, c(1.1, -2.0)), (1.1, 10, c(0.5, 0.0))] {
            let n = (a * a - 1.0).sqrt();
            let cc = default_contour_abscissa(a, n, l, 1.0);
            let v = psi_contour(a, n, s, l, 1.0, cc, 1e-10).unwrap().value;
            let w = psi_closed(a, s, l, 1.0).unwrap();
            assert!((v - w).norm() <= 1e-7 * w.norm(), "a={a} l={l}: {v} vs {w}");
        }
    }

    #[test]
    fn contour_position_does_not_matter() {
        let (a, l, s, rho) = (1.5f64, 11, c(0.8, 0.5), 1.5);
        let n = (a * a - 1.0).sqrt();
        let cc = default_contour_abscissa(a, n, l, rho);
        let v1 = psi_contour(a, n, s, l, rho, cc, 1e-12).unwrap().value;
        let v2 = psi_contour(a, n, s, l, rho, 2.0 * cc, 1e-12).unwrap().value;
        assert!((v1 - v2).norm() <= 1e-9 * v1.norm(), "{v1} {v2}");
    }

    #[test]
    fn vanishing_side() {
        let v = psi_contour(-1.5, 1.2, c(0.6, 0.2), 14, 1.0, 2.0, 1e-6).unwrap();
        assert!(v.value.norm() <= 1e-8, "{}", v.value);
        assert_eq!(psi_closed_general(-1.5, 1.1, c(0.6, 0.2), 14, 1.0).unwrap(), cr(0.0));
    }

    #[test]
    fn closed_form_log_case() {
        // s = 0, l = ρ + 1: ∫(a+t)^{−1} dt = log((a+1)/(a−1)), prefactor 1.
        let a = 2.5;
        let v = psi_closed(a, cr(0.0), 2, 1.0).unwrap();
        assert!((v.re - ((a + 1.0) / (a - 1.0)).ln()).abs() < 1e-13 && v.im.abs() < 1e-15);
        assert!(psi_closed(1.0, cr(0.0), 5, 1.0).is_err());
        assert!(psi_contour(1.5, 1.1, cr(0.5), 5, 1.0, 1.0, 1e-6).is_err());
    }
}
