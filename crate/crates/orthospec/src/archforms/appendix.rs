//! Appendix integral identities: sphere moments and plane waves, the
//! K-Bessel Fourier transform, the radial cosine reduction, the Gaussian
//! cosine transform, the contour representation of J, and the K-series.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;

use super::bounds;
use super::shintani::line_integral;
use super::{get, get_c, get_or, IdentityId, IdentitySpec, VerificationReport};
use crate::error::{Error, Result};
use crate::quad::{self, Quad, Tol};
use crate::special::{
    bessel_j, bessel_j_scaled, bessel_k, binom, c, clog, cpow, cr, ln_gamma, ln_gamma_real, rgamma, rpow,
};

fn tol(rel: f64) -> Tol {
    Tol { rel, abs: 1e-300, max_intervals: 20000 }
}

fn ok(q: Quad, what: &str) -> Result<C64> {
    if !q.converged || !q.value.re.is_finite() || !q.value.im.is_finite() {
        return Err(Error::NonConvergent(what.into()));
    }
    Ok(q.value)
}

/// ∫_{−1}^{1} f(t, 1+t, 1−t) dt, tanh-sinh on `panels` equal pieces.
fn minus_one_one<F: Fn(f64, f64, f64) -> C64>(f: &F, panels: usize, rel: f64) -> Result<C64> {
    let n = panels.max(1);
    let mut acc = cr(0.0);
    for i in 0..n {
        let lo = -1.0 + 2.0 * i as f64 / n as f64;
        let hi = -1.0 + 2.0 * (i + 1) as f64 / n as f64;
        let g = |t: f64, da: f64, db: f64| {
            let p1 = if i == 0 { da } else { 1.0 + t };
            let m1 = if i + 1 == n { db } else { 1.0 - t };
            f(t, p1, m1)
        };
        acc += ok(quad::tanh_sinh(&g, lo, hi, tol(rel)), "latitude integral")?;
    }
    Ok(acc)
}

/// vol S^k by the latitude recursion vol S^k = vol S^{k−1} ∫(1−t²)^{(k−2)/2} dt.
pub fn sphere_volume_by_quadrature(k: usize) -> Result<f64> {
    let mut v = 2.0;
    for j in 1..=k {
        let e = (j as f64 - 2.0) / 2.0;
        let f = |_t: f64, a: f64, b: f64| cr((e * (a * b).ln()).exp());
        v *= minus_one_one(&f, 1, 1e-14)?.re;
    }
    Ok(v)
}

/// ∫_{S^{n−1}} e^{−2πi⟨η,ω⟩} dω as a function of w = ‖η‖, closed form:
/// 2π w^{1−n/2} J_{n/2−1}(2πw) = 2π^{n/2} J_ν(2πw)/(πw)^ν, ν = n/2 − 1.
pub fn sphere_wave(n: usize, w: f64) -> Result<f64> {
    if n == 1 {
        return Ok(2.0 * (2.0 * PI * w).cos());
    }
    let nu = n as f64 / 2.0 - 1.0;
    Ok(2.0 * PI.powf(n as f64 / 2.0) * bessel_j_scaled(nu, 2.0 * PI * w)?)
}

pub fn sphere_moment_lhs(n: usize, q: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooSmall { min: 1, got: 0 });
    }
    if n == 1 {
        return Ok(1.0 + if q % 2 == 0 { 1.0 } else { -1.0 });
    }
    let vol = sphere_volume_by_quadrature(n - 2)?;
    let e = (n as f64 - 3.0) / 2.0;
    let f = |t: f64, a: f64, b: f64| cr(t.powi(q as i32) * (e * (a * b).ln()).exp());
    Ok(vol * minus_one_one(&f, 2, 1e-14)?.re)
}

/// δ(q even) 2π^{n/2} q! / (2^q Γ((n+q)/2) (q/2)!).
pub fn sphere_moment_rhs(n: usize, q: u32) -> f64 {
    if q % 2 == 1 {
        return 0.0;
    }
    let (nf, qf) = (n as f64, q as f64);
    let lg = ln_gamma_real(qf + 1.0) - qf * std::f64::consts::LN_2 - ln_gamma_real((nf + qf) / 2.0) - ln_gamma_real(qf / 2.0 + 1.0);
    2.0 * PI.powf(nf / 2.0) * lg.exp()
}

pub fn sphere_plane_wave_lhs(n: usize, y: f64) -> Result<C64> {
    if n < 2 {
        return Err(Error::TooSmall { min: 2, got: n });
    }
    let vol = sphere_volume_by_quadrature(n - 2)?;
    let e = (n as f64 - 3.0) / 2.0;
    let f = |t: f64, a: f64, b: f64| C64::from_polar((e * (a * b).ln()).exp(), -2.0 * PI * y * t);
    let panels = (4.0 * y).ceil() as usize + 1;
    Ok(minus_one_one(&f, panels, 1e-13)? * vol)
}

pub fn sphere_plane_wave_rhs(n: usize, y: f64) -> Result<f64> {
    let nu = n as f64 / 2.0 - 1.0;
    Ok(2.0 * PI * y.powf(1.0 - n as f64 / 2.0) * bessel_j(nu, 2.0 * PI * y)?)
}

/// ∫_{ℝ^{m−1}} (‖Z‖² + a²)^{−(s+ρ)} e^{−2πi⟨η,Z⟩} dZ in polar coordinates.
pub fn k_bessel_fourier_lhs(m: usize, s: C64, a: f64, y: f64) -> Result<C64> {
    let n = m - 1;
    let rho = n as f64 / 2.0;
    let e = -(s + rho);
    if y == 0.0 {
        let vol = sphere_volume_by_quadrature(n - 1)?;
        // in units of a, split at 1; the tail in v = 1/u has the endpoint
        // factor v^{2s−1}, which the tanh-sinh rule absorbs
        let inner = |u: f64, _: f64, _: f64| cpow(cr(u * u + 1.0), e) * u.powi(n as i32 - 1);
        let tail = |v: f64, _: f64, _: f64| cpow(cr(v), -e * 2.0 - (n as f64 + 1.0)) * cpow(cr(1.0 + v * v), e);
        let q1 = ok(quad::tanh_sinh(&inner, 0.0, 1.0, tol(1e-13)), "KBesselFourier radial")?;
        let q2 = ok(quad::tanh_sinh(&tail, 0.0, 1.0, tol(1e-13)), "KBesselFourier radial tail")?;
        return Ok((q1 + q2) * cpow(cr(a), e * 2.0 + n as f64) * vol);
    }
    let f = |u: f64| -> C64 {
        let w = sphere_wave(n, y * u).unwrap_or(f64::NAN);
        cpow(cr(u * u + a * a), e) * (u.powi(n as i32 - 1) * w)
    };
    let q = quad::oscillatory_half_line(&f, 0.0, 0.5 / y, tol(1e-12));
    ok(q, "KBesselFourier radial")
}

/// π^ρ/Γ(s+ρ) · {a^{−2s}Γ(s) if η = 0; 2(π‖η‖)^s a^{−s} K_s(2πa‖η‖) otherwise}.
pub fn k_bessel_fourier_rhs(m: usize, s: C64, a: f64, y: f64) -> Result<C64> {
    let rho = (m as f64 - 1.0) / 2.0;
    let pref = rgamma(s + rho) * PI.powf(rho);
    if y == 0.0 {
        return Ok(pref * (ln_gamma(s) - s * 2.0 * a.ln()).exp());
    }
    Ok(pref * rpow(PI * y, s) * rpow(a, -s) * bessel_k(s, cr(2.0 * PI * a * y))? * 2.0)
}

/// ∫_{ℝ^{m−2}} (‖Y‖² + A)^α e^{2πi⟨Y,η⟩} dY in polar coordinates.
pub fn radial_cosine_lhs(m: usize, alpha: C64, big_a: f64, y: f64) -> Result<C64> {
    let n = m - 2;
    let f = |u: f64| -> C64 {
        let w = sphere_wave(n, y * u).unwrap_or(f64::NAN);
        cpow(cr(u * u + big_a), alpha) * (u.powi(n as i32 - 1) * w)
    };
    ok(quad::oscillatory_half_line(&f, 0.0, 0.5 / y, tol(1e-12)), "RadialCosine radial")
}

/// 2π^{ρ−1} Γ(−α−ρ+1)/Γ(−α) ∫₀^∞ (u² + A)^{α+ρ−1} cos(2π‖η‖u) du.
pub fn radial_cosine_rhs(m: usize, alpha: C64, big_a: f64, y: f64) -> Result<C64> {
    let rho = (m as f64 - 1.0) / 2.0;
    let e = alpha + rho - 1.0;
    let f = |u: f64| cpow(cr(u * u + big_a), e) * (2.0 * PI * y * u).cos();
    let v = ok(quad::oscillatory_half_line(&f, 0.0, 0.5 / y, tol(1e-12)), "RadialCosine cosine transform")?;
    let g = (ln_gamma(-alpha - rho + 1.0) - ln_gamma(-alpha)).exp();
    Ok(v * g * (2.0 * PI.powf(rho - 1.0)))
}

pub fn gauss_cosine_lhs(a: f64, b: f64) -> Result<f64> {
    let sc = 1.0 / b.sqrt();
    let f = |u: f64| {
        let u = u * sc;
        cr((-b * u * u).exp() * (a * u).cos())
    };
    Ok(ok(quad::half_line(&f, 0.0, tol(1e-14)), "GaussCosine")?.re * sc)
}

/// ½ (π/B)^{1/2} e^{−A²/(4B)}.
pub fn gauss_cosine_rhs(a: f64, b: f64) -> f64 {
    0.5 * (PI / b).sqrt() * (-a * a / (4.0 * b)).exp()
}

/// ∫_{(σ)} exp(−(A/z + Bz)) z^{−q} dz, line run downward.
pub fn contour_bessel_lhs(q: f64, a: f64, b: f64, sigma: f64) -> Result<C64> {
    let f = |t: f64| {
        let z = c(sigma, t);
        (-(z.inv() * a + z * b) - clog(z) * q).exp()
    };
    let v = ok(line_integral(&f, PI / b.abs(), tol(1e-12)), "ContourBessel line")?;
    Ok(v * c(0.0, -1.0))
}

/// −2πi (A/|B|)^{(1−q)/2} J_{q−1}(2√|AB|).
pub fn contour_bessel_rhs(q: f64, a: f64, b: f64) -> Result<C64> {
    let v = (a / b.abs()).powf((1.0 - q) / 2.0) * bessel_j(q - 1.0, 2.0 * (a * b).abs().sqrt())?;
    Ok(c(0.0, -2.0 * PI * v))
}

pub struct KSeries {
    pub value: C64,
    pub terms: usize,
    pub remainder: f64,
}

/// ∫_{ℝ^{m−1}} (1 − 2izT⁻¹/(‖Z‖²+z²))^α (‖Z‖²+z²)^{−l} e^{−2πi⟨Z,v⟩} dZ in
/// polar coordinates.
pub fn k_series_lhs(m: usize, l: i64, alpha: C64, z: C64, t: f64, y: f64) -> Result<C64> {
    let n = m - 1;
    let w = c(0.0, -2.0) * z / t;
    let f = |u: f64| -> C64 {
        let d = z * z + u * u;
        let sw = sphere_wave(n, y * u).unwrap_or(f64::NAN);
        cpow(cr(1.0) + w / d, alpha) * cpow(d, cr(-(l as f64))) * (u.powi(n as i32 - 1) * sw)
    };
    ok(quad::oscillatory_half_line(&f, 0.0, 0.5 / y, tol(1e-12)), "KSeriesExpansion radial")
}

/// 2π^l ‖v‖^{l−ρ} z^{ρ−l} Σ_n C(α,n) (−2iπ‖v‖T⁻¹)^n K_{n−ρ+l}(2π‖v‖z)/Γ(n+l),
/// summed until the geometric remainder estimate drops below `rel`.
pub fn k_series_rhs(m: usize, l: i64, alpha: C64, z: C64, t: f64, y: f64, rel: f64) -> Result<KSeries> {
    let rho = (m as f64 - 1.0) / 2.0;
    let lf = l as f64;
    let x = z * (2.0 * PI * y);
    let ratio_c = c(0.0, -2.0 * PI * y / t);
    let mut sum = cr(0.0);
    let mut prev = f64::INFINITY;
    for k in 0..400usize {
        let kf = k as f64;
        let term = binom(alpha, k) * ratio_c.powi(k as i32) * bessel_k(cr(kf - rho + lf), x)? * (-ln_gamma_real(kf + lf)).exp();
        sum += term;
        let tn = term.norm();
        let r = if prev.is_finite() && prev > 0.0 { tn / prev } else { 1.0 };
        prev = tn;
        if k > 3 && r < 0.95 && tn * r / (1.0 - r) <= rel * sum.norm() {
            let pref = rpow(PI, cr(lf)) * rpow(y, cr(lf - rho)) * cpow(z, cr(rho - lf)) * 2.0;
            return Ok(KSeries { value: pref * sum, terms: k + 1, remainder: tn * r / (1.0 - r) * pref.norm() });
        }
        if tn == 0.0 && k > 3 {
            let pref = rpow(PI, cr(lf)) * rpow(y, cr(lf - rho)) * cpow(z, cr(rho - lf)) * 2.0;
            return Ok(KSeries { value: pref * sum, terms: k + 1, remainder: 0.0 });
        }
    }
    Err(Error::NonConvergent("K-series did not settle".into()))
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::DomainError(what.into()))
    }
}

pub fn appendix_identity_check(spec: &IdentitySpec) -> Result<VerificationReport> {
    use IdentityId::*;
    let t0 = Instant::now();
    let p = &spec.parameters;
    let id = spec.identity_id;
    let tolerance = spec.tolerance;
    let cmp = |lhs: C64, rhs: C64| VerificationReport::compare(id, p.clone(), lhs, rhs, tolerance);
    let mut rep = match id {
        SphereMoment => {
            let n = get(p, "n")? as usize;
            let q = get(p, "q")? as u32;
            cmp(cr(sphere_moment_lhs(n, q)?), cr(sphere_moment_rhs(n, q)))
        }
        SpherePlaneWave => {
            let n = get(p, "n")? as usize;
            let y = get(p, "y")?;
            require(y > 0.0, "SpherePlaneWave needs η ≠ 0")?;
            cmp(sphere_plane_wave_lhs(n, y)?, cr(sphere_plane_wave_rhs(n, y)?))
        }
        KBesselFourier => {
            let m = get(p, "m")? as usize;
            let s = get_c(p, "s")?;
            let (a, y) = (get(p, "a")?, get(p, "y")?);
            let rho = (m as f64 - 1.0) / 2.0;
            require(m >= 3 && a > 0.0 && y >= 0.0, "KBesselFourier needs m ≥ 3, a > 0")?;
            require(s.re > -0.5 * (rho + 0.5), "KBesselFourier needs Re(s) > −(ρ+1/2)/2")?;
            require(y > 0.0 || s.re > 0.0, "the η = 0 case needs Re(s) > 0")?;
            cmp(k_bessel_fourier_lhs(m, s, a, y)?, k_bessel_fourier_rhs(m, s, a, y)?)
        }
        RadialCosine => {
            let m = get(p, "m")? as usize;
            let alpha = get_c(p, "alpha")?;
            let (big_a, y) = (get(p, "A")?, get(p, "y")?);
            let rho = (m as f64 - 1.0) / 2.0;
            require(m >= 3 && big_a > 0.0 && y > 0.0, "RadialCosine needs m ≥ 3, A > 0, η ≠ 0")?;
            require(rho - 1.0 < -2.0 * alpha.re, "RadialCosine needs ρ − 1 < −2 Re α")?;
            cmp(radial_cosine_lhs(m, alpha, big_a, y)?, radial_cosine_rhs(m, alpha, big_a, y)?)
        }
        GaussCosine => {
            let (a, b) = (get(p, "A")?, get(p, "B")?);
            require(a >= 0.0 && b > 0.0, "GaussCosine needs A ≥ 0, B > 0")?;
            cmp(cr(gauss_cosine_lhs(a, b)?), cr(gauss_cosine_rhs(a, b)))
        }
        ContourBessel => {
            let (q, a, b) = (get(p, "q")?, get(p, "A")?, get(p, "B")?);
            require(q >= 1.0 && a > 0.0 && b < 0.0, "ContourBessel needs q ≥ 1, A > 0, B < 0")?;
            let sigma = get_or(p, "sigma", (a / b.abs()).sqrt());
            require(sigma > 0.0, "ContourBessel needs σ > 0")?;
            cmp(contour_bessel_lhs(q, a, b, sigma)?, contour_bessel_rhs(q, a, b)?)
        }
        KSeriesExpansion => {
            let m = get(p, "m")? as usize;
            let l = get(p, "l")? as i64;
            let alpha = get_c(p, "alpha")?;
            let z = get_c(p, "z")?;
            let (t, y) = (get(p, "T")?, get(p, "y")?);
            let rho = (m as f64 - 1.0) / 2.0;
            require(m >= 3 && y > 0.0 && t > 0.0, "KSeriesExpansion needs m ≥ 3, v ≠ 0, T > 0")?;
            require(z.re > 2.0 / t && l as f64 > rho, "KSeriesExpansion needs Re z > 2/T and l > ρ")?;
            let lhs = k_series_lhs(m, l, alpha, z, t, y)?;
            let rhs = k_series_rhs(m, l, alpha, z, t, y, 1e-3 * tolerance)?;
            cmp(lhs, rhs.value).with_note(format!("{} terms, remainder {:.1e}", rhs.terms, rhs.remainder))
        }
        DiskBound => bounds::disk_bound(p)?.report(id, p.clone()),
        DerivativeBound => bounds::derivative_bound(p)?.report(id, p.clone()),
        GammaRatioBound => bounds::gamma_ratio_bound(p)?.report(id, p.clone()),
        other => return Err(Error::DomainError(format!("{other} is not an appendix identity"))),
    };
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::params;

    fn run(id: IdentityId, p: &[(&str, f64)], t: f64) -> VerificationReport {
        appendix_identity_check(&IdentitySpec::new(id, params(p), t)).unwrap()
    }

    #[test]
    fn sphere_moment_examples() {
        let v = sphere_moment_rhs(3, 2);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-13, "{v}");
        let r = run(IdentityId::SphereMoment, &[("n", 3.0), ("q", 2.0)], 1e-10);
        assert!(r.passed, "{r:?}");
        let r = run(IdentityId::SphereMoment, &[("n", 4.0), ("q", 3.0)], 1e-10);
        assert!(r.passed && r.rhs == cr(0.0));
        for k in 0..6 {
            let want = 2.0 * PI.powf((k + 1) as f64 / 2.0) / ln_gamma_real((k + 1) as f64 / 2.0).exp();
            assert!((sphere_volume_by_quadrature(k).unwrap() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn gauss_cosine_half() {
        assert!((gauss_cosine_rhs(0.0, 2.0) - 0.5 * (PI / 2.0).sqrt()).abs() < 1e-16);
        assert!(run(IdentityId::GaussCosine, &[("A", 1.7), ("B", 0.6)], 1e-10).passed);
    }

    #[test]
    fn k_bessel_fourier_both_branches() {
        let r = run(IdentityId::KBesselFourier, &[("m", 3.0), ("s_re", 0.8), ("s_im", 0.3), ("a", 1.2), ("y", 0.0)], 1e-9);
        assert!(r.passed, "{r:?}");
        let r = run(IdentityId::KBesselFourier, &[("m", 5.0), ("s_re", 0.6), ("s_im", -0.4), ("a", 0.9), ("y", 0.7)], 1e-8);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn remaining_identities() {
        let r = run(IdentityId::SpherePlaneWave, &[("n", 2.0), ("y", 1.3)], 1e-9);
        assert!(r.passed, "{r:?}");
        let r = run(IdentityId::RadialCosine, &[("m", 5.0), ("alpha_re", -2.5), ("alpha_im", 0.4), ("A", 1.3), ("y", 0.6)], 1e-8);
        assert!(r.passed, "{r:?}");
        let r = run(IdentityId::ContourBessel, &[("q", 2.5), ("A", 1.5), ("B", -0.8)], 1e-8);
        assert!(r.passed, "{r:?}");
        let r = run(
            IdentityId::KSeriesExpansion,
            &[("m", 4.0), ("l", 4.0), ("alpha_re", 0.7), ("alpha_im", -0.3), ("z_re", 2.5), ("z_im", 0.8), ("T", 2.0), ("y", 0.5)],
            1e-8,
        );
        assert!(r.passed, "{r:?}");
    }
}
