//! 𝓘_l^{(s)}(a, b) = ∫₀¹ (1−x)^{s+ρ−1} x^{−(s+1/2)} J_{l−ρ−1/2}(2πax) e^{2πibx} dx,
//! its integrated-by-parts forms, and the hypergeometric identity that
//! produces it.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;

use super::{get, get_c, get_or, IdentityId, Params, VerificationReport};
use crate::error::{Error, Result};
use crate::quad::{self, Quad, Tol};
use crate::special::{bessel_j_scaled, c, cr, kummer_1f1, ln_gamma, ln_gamma_real};

fn check_strip(s: C64, l: i64, rho: f64) -> Result<()> {
    if !(s.re > -rho && s.re < l as f64 - rho) {
        return Err(Error::DomainError(format!("Re(s) = {} outside (−ρ, l−ρ) = ({}, {})", s.re, -rho, l as f64 - rho)));
    }
    Ok(())
}

/// ∫₀¹ f(x, x, 1−x) with tanh-sinh at both ends and Gauss-Kronrod panels in
/// between, one panel per unit of oscillation.
fn unit_interval<F: Fn(f64, f64, f64) -> C64>(f: &F, waves: f64, rel: f64) -> Result<C64> {
    let n = (2.0 * waves).ceil().max(2.0) as usize;
    let h = 1.0 / n as f64;
    let t = Tol { rel, abs: 1e-300, max_intervals: 4000 };
    let mut acc = Quad { value: cr(0.0), error: 0.0, evals: 0, converged: true };
    let left = quad::tanh_sinh(&|x, da, _| f(x, da, 1.0 - x), 0.0, h, t);
    let right = quad::tanh_sinh(&|x, _, db| f(x, x, db), 1.0 - h, 1.0, t);
    for q in [left, right] {
        acc.value += q.value;
        acc.converged &= q.converged;
    }
    if n > 2 {
        let mid = quad::adaptive(&|x: f64| f(x, x, 1.0 - x), h, 1.0 - h, t);
        acc.value += mid.value;
        acc.converged &= mid.converged;
    }
    if !acc.converged || !acc.value.re.is_finite() || !acc.value.im.is_finite() {
        return Err(Error::NonConvergent("integral over (0, 1)".into()));
    }
    Ok(acc.value)
}

pub fn cal_i(s: C64, l: i64, rho: f64, a: f64, b: f64) -> Result<C64> {
    check_strip(s, l, rho)?;
    if !(a > 0.0) || !b.is_finite() {
        return Err(Error::DomainError(format!("cal_I needs a > 0 (a={a})")));
    }
    let nu = l as f64 - rho - 0.5;
    let e0 = cr(l as f64 - rho - 1.0) - s;
    let e1 = s + rho - 1.0;
    let lpa = nu * (PI * a).ln();
    let f = |x: f64, da: f64, db: f64| -> C64 {
        let js = bessel_j_scaled(nu, 2.0 * PI * a * x).unwrap_or(f64::NAN);
        (e0 * da.ln() + e1 * db.ln() + lpa + c(0.0, 2.0 * PI * b * x)).exp() * js
    };
    unit_interval(&f, a + b.abs(), 1e-13)
}

fn falling(g: C64, n: usize) -> C64 {
    (0..n).fold(cr(1.0), |acc, i| acc * (g - i as f64))
}

fn binom_u(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// d^q/dx^q {x^{−(s+1/2)} (1−x)^{s+ρ−1} J_{l−ρ−1/2}(2πax)} by Leibniz, using
/// d^k J_ν(y)/dy^k = 2^{−k} Σ_i (−1)^i C(k,i) J_{ν−k+2i}(y). Needs ν ≥ q.
pub fn derivative_q(s: C64, l: i64, rho: f64, a: f64, q: usize, x: f64, one_minus_x: f64) -> Result<C64> {
    let nu = l as f64 - rho - 0.5;
    if nu < q as f64 {
        return Err(Error::DomainError("derivative order exceeds the Bessel order".into()));
    }
    let gam = -(s + 0.5);
    let beta = s + rho - 1.0;
    let y = 2.0 * PI * a * x;
    let (lx, l1x, lpa) = (x.ln(), one_minus_x.ln(), (PI * a).ln());
    let mut tot = cr(0.0);
    for k in 0..=q {
        for j in 0..=q - k {
            let p = q - k - j;
            let multi = binom_u(q, k) * binom_u(q - k, j);
            let cx = falling(gam, p) * falling(beta, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..=k {
                let mu = nu - k as f64 + 2.0 * i as f64;
                let js = bessel_j_scaled(mu, y)?;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let lg = (gam - p as f64 + mu) * lx + (beta - j as f64) * l1x + (mu + k as f64) * lpa;
                tot += lg.exp() * (cx * multi * sign * binom_u(k, i) * js);
            }
        }
    }
    Ok(tot)
}

/// (−2πib)^{−q} ∫₀¹ d^q/dx^q{…} e^{2πibx} dx. The boundary terms vanish
/// when q ≤ l−ρ−Re(s)−1 and q ≤ Re(s)+ρ−1.
pub fn cal_i_by_parts(s: C64, l: i64, rho: f64, a: f64, b: f64, q: usize) -> Result<C64> {
    check_strip(s, l, rho)?;
    let qf = q as f64;
    if !(qf <= l as f64 - rho - s.re - 1.0 && qf <= s.re + rho - 1.0) {
        return Err(Error::DomainError(format!("q = {q} not admissible for Re(s) = {}", s.re)));
    }
    if b == 0.0 || !(a > 0.0) {
        return Err(Error::DomainError("by-parts form needs b ≠ 0 and a > 0".into()));
    }
    let f = |x: f64, da: f64, db: f64| -> C64 {
        derivative_q(s, l, rho, a, q, da, db).unwrap_or(cr(f64::NAN)) * C64::from_polar(1.0, 2.0 * PI * b * x)
    };
    let v = unit_interval(&f, a + b.abs(), 1e-13)?;
    Ok(v * c(0.0, -2.0 * PI * b).powi(-(q as i32)))
}

/// LHS ∫_{−1}^{1} (1−t²)^{l−ρ−1} ₁F₁(−s+l−ρ, l; 2πi(at+b)) dt against
/// √π Γ(l)Γ(l−ρ)/(Γ(s+ρ)Γ(−s+l−ρ)) (π|a|)^{−l+ρ+1/2} 𝓘_l^{(s)}(|a|, b).
pub fn hypergeom_identity_check(s: C64, l: i64, rho: f64, a: f64, b: f64, tol: f64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    check_strip(s, l, rho)?;
    if a == 0.0 || !a.is_finite() {
        return Err(Error::DomainError("hypergeometric identity needs a ≠ 0".into()));
    }
    let lf = l as f64;
    let (ka, kb) = (cr(lf - rho) - s, cr(lf));
    let e = lf - rho - 1.0;
    let f = |t: f64, da: f64, db: f64| -> C64 {
        let w = if e == 0.0 { 1.0 } else { (e * (da * db).ln()).exp() };
        kummer_1f1(ka, kb, c(0.0, 2.0 * PI * (a * t + b))).unwrap_or(cr(f64::NAN)) * w
    };
    let n = (a.abs() * 2.0).ceil().max(1.0) as usize;
    let tl = Tol { rel: 1e-12, abs: 1e-300, max_intervals: 2000 };
    let mut lhs = cr(0.0);
    for i in 0..n {
        let (lo, hi) = (-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * (i + 1) as f64 / n as f64);
        let q = quad::tanh_sinh(&|t, _, _| f(t, t + 1.0, 1.0 - t), lo, hi, tl);
        if !q.converged {
            return Err(Error::NonConvergent("hypergeometric side".into()));
        }
        lhs += q.value;
    }
    let lg = ln_gamma(cr(lf)) + ln_gamma_real(lf - rho) - ln_gamma(s + rho) - ln_gamma(cr(lf - rho) - s);
    let pref = (lg + 0.5 * PI.ln() + (-lf + rho + 0.5) * (PI * a.abs()).ln()).exp();
    let rhs = pref * cal_i(s, l, rho, a.abs(), b)?;
    let mut p = Params::new();
    for (k, v) in [("s_re", s.re), ("s_im", s.im), ("l", lf), ("rho", rho), ("a", a), ("b", b)] {
        p.insert(k.into(), v);
    }
    let mut rep = VerificationReport::compare(IdentityId::Hypergeom, p, lhs, rhs, tol);
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

/// Direct 𝓘 against its q-fold by-parts form.
pub fn by_parts_check(s: C64, l: i64, rho: f64, a: f64, b: f64, q: usize, tol: f64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let lhs = cal_i(s, l, rho, a, b)?;
    let rhs = cal_i_by_parts(s, l, rho, a, b, q)?;
    let mut p = Params::new();
    for (k, v) in [("s_re", s.re), ("s_im", s.im), ("l", l as f64), ("rho", rho), ("a", a), ("b", b), ("q", q as f64)] {
        p.insert(k.into(), v);
    }
    let mut rep = VerificationReport::compare(IdentityId::ByParts, p, lhs, rhs, tol);
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

/// Parameter-map front end: s_re, s_im, l, m, a, b (and q for ByParts).
pub fn ftn_check(id: IdentityId, p: &Params) -> Result<VerificationReport> {
    let s = get_c(p, "s")?;
    let l = get(p, "l")? as i64;
    let rho = (get(p, "m")? - 1.0) / 2.0;
    let (a, b) = (get(p, "a")?, get(p, "b")?);
    let tol = get_or(p, "tol", 1e-7);
    let mut rep = match id {
        IdentityId::Hypergeom => hypergeom_identity_check(s, l, rho, a, b, tol)?,
        IdentityId::ByParts => by_parts_check(s, l, rho, a, b, get(p, "q")? as usize, tol)?,
        other => return Err(Error::DomainError(format!("{other} is not a cal_I identity"))),
    };
    rep.parameters = p.clone();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergeom_example() {
        let r = hypergeom_identity_check(cr(1.2), 6, 1.0, 1.0, 0.0, 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
        // real s, b = 0: both sides real
        assert!(r.lhs.im.abs() < 1e-9 * r.lhs.norm() && r.rhs.im.abs() < 1e-9 * r.rhs.norm());
    }

    #[test]
    fn hypergeom_conjugation() {
        let r1 = hypergeom_identity_check(cr(2.3), 9, 1.5, 0.8, 0.6, 1e-7).unwrap();
        let r2 = hypergeom_identity_check(cr(2.3), 9, 1.5, 0.8, -0.6, 1e-7).unwrap();
        assert!(r1.passed && r2.passed);
        assert!((r1.lhs - r2.lhs.conj()).norm() < 1e-9 * r1.lhs.norm());
        assert!((r1.rhs - r2.rhs.conj()).norm() < 1e-9 * r1.rhs.norm());
    }

    #[test]
    fn small_a_goes_to_zero() {
        let (s, l, rho) = (c(0.8, 0.2), 8, 1.0);
        let v1 = cal_i(s, l, rho, 1e-2, 0.3).unwrap().norm();
        let v2 = cal_i(s, l, rho, 1e-3, 0.3).unwrap().norm();
        // J_{ν}(2πax) ~ (πax)^ν with ν = l−ρ−1/2
        let ratio = v1 / v2;
        assert!((ratio.log10() - (l as f64 - rho - 0.5)).abs() < 1e-3, "{ratio}");
        assert!(v2 < 1e-12);
    }

    #[test]
    fn by_parts_q1_q2() {
        let (s, l, rho) = (c(3.2, 0.7), 12, 1.0);
        for q in [1, 2] {
            let r = by_parts_check(s, l, rho, 1.3, 0.9, q, 1e-8).unwrap();
            assert!(r.passed, "q={q}: {r:?}");
        }
        // q = 1 with the printed prefactor (2πib)^{−1} flips the sign.
        let direct = cal_i(s, l, rho, 1.3, 0.9).unwrap();
        let printed = -cal_i_by_parts(s, l, rho, 1.3, 0.9, 1).unwrap();
        assert!((printed + direct).norm() < 1e-8 * direct.norm());
        assert!(cal_i_by_parts(cr(0.5), l, rho, 1.0, 1.0, 1).is_err());
        assert!(cal_i(cr(-1.5), l, rho, 1.0, 1.0).is_err());
    }
}
