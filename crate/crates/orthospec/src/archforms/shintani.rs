//! Closed forms of the weight-l Shintani function on the Bruhat cells used
//! by the orbital integrals, and numerical checks of the cell integrals.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{get, get_c, get_or, whittaker_value, IdentityId, Params, VerificationReport};
use crate::error::{Error, Result};
use crate::par::pool;
use crate::quad::{self, pairwise_sum, Quad, Tol};
use crate::special::{bessel_j_scaled, c, clog, cpow, cr, ln_gamma, ln_gamma_real, rgamma, rpow};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub s: C64,
    pub l: i64,
    pub rho: f64,
    pub delta: f64,
    pub r: f64,
}

impl CellParams {
    pub fn new(s: C64, l: i64, m: usize, delta: f64, r: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::TooSmall { min: 3, got: m });
        }
        if !(r > 0.0) || !(delta > 0.0) {
            return Err(Error::DomainError(format!("cell needs r > 0 and Δ > 0 (r={r}, Δ={delta})")));
        }
        Ok(CellParams { s, l, rho: (m as f64 - 1.0) / 2.0, delta, r })
    }

    fn sr(&self) -> C64 {
        self.s + self.rho
    }
}

/// Coordinates on each cell; `qz`/`q_y0` are the values Q[Z] ≥ 0, Q[Y₀] ≥ 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShintaniCell {
    Identity { x: f64, eps: i8 },
    W0 { x: f64, eps: i8, qz: f64 },
    W1 { q_y0: f64, y_plus: f64, y_minus: f64 },
    NxiW0 { x: f64, eps: i8, qz: f64 },
}

fn sign_pow(eps: i8, l: i64) -> Result<f64> {
    match eps {
        1 => Ok(1.0),
        -1 => Ok(if l % 2 == 0 { 1.0 } else { -1.0 }),
        _ => Err(Error::DomainError(format!("ε must be ±1, got {eps}"))),
    }
}

/// 1 + ε i Δ^{1/2} x / (√2 r).
fn unip(x: f64, eps: i8, p: &CellParams) -> C64 {
    c(1.0, eps as f64 * p.delta.sqrt() * x / (SQRT_2 * p.r))
}

fn w1_prefactor(p: &CellParams) -> C64 {
    let l = p.l as f64;
    let i3l = c(0.0, 1.0).powi((3 * p.l).rem_euclid(4) as i32);
    i3l * rpow(2.0, cr(1.5 * l) - p.sr() * 2.0) * p.delta.powf(l / 2.0) * rpow(p.r, cr(l) - p.sr())
}

/// {Q[Y₀] + y₊² + (iy₋ + √2 r)² + Δ}^{s+ρ−l} (1 + (y₋−y₊)i/(√2 r))^{−(s+ρ)}.
fn w1_kernel(q_y0: f64, y_plus: f64, y_minus: f64, p: &CellParams) -> C64 {
    let a = c(SQRT_2 * p.r, y_minus);
    let brace = a * a + (q_y0 + y_plus * y_plus + p.delta);
    let v = c(1.0, (y_minus - y_plus) / (SQRT_2 * p.r));
    cpow(brace, p.sr() - p.l as f64) * cpow(v, -p.sr())
}

pub fn shintani_cell(cell: ShintaniCell, p: &CellParams) -> Result<C64> {
    if !(p.r > 0.0) || !(p.delta > 0.0) {
        return Err(Error::DomainError("cell needs r > 0 and Δ > 0".into()));
    }
    let sr = p.sr();
    let l = p.l as f64;
    match cell {
        ShintaniCell::Identity { x, eps } => {
            let e = sign_pow(eps, p.l)?;
            Ok(rpow(p.r, sr) * cpow(unip(x, eps, p), sr - l) * e)
        }
        ShintaniCell::W0 { x, eps, qz } => {
            if qz < 0.0 {
                return Err(Error::DomainError("Q[Z] must be ≥ 0".into()));
            }
            let e = sign_pow(eps, p.l)?;
            let u = unip(x, eps, p);
            let brace = u * u + qz / (2.0 * p.r * p.r);
            Ok(rpow(p.r, -sr) * cpow(u, sr - l) * cpow(brace, -sr) * e)
        }
        ShintaniCell::W1 { q_y0, y_plus, y_minus } => {
            if q_y0 < 0.0 {
                return Err(Error::DomainError("Q[Y0] must be ≥ 0".into()));
            }
            Ok(w1_prefactor(p) * w1_kernel(q_y0, y_plus, y_minus, p))
        }
        ShintaniCell::NxiW0 { x, eps, qz } => {
            if qz < 0.0 {
                return Err(Error::DomainError("Q[Z] must be ≥ 0".into()));
            }
            let e = sign_pow(eps, p.l)?;
            let d = p.delta;
            let pref = rpow(2.0, -(sr - 3.0 * l) / 2.0) * rpow(d, -(sr + l) / 2.0) * p.r.powf(l) * e;
            let w = c(SQRT_2 * p.r, -(d.sqrt() * x - eps as f64 / d.sqrt()));
            let den = w * w + (qz + 1.0 / d);
            let v = c(SQRT_2 * p.r, -d.sqrt() * x);
            let num = v * v + qz;
            Ok(pref * cpow(den, cr(-l)) * cpow(num / den, -sr))
        }
    }
}

fn tol(rel: f64) -> Tol {
    Tol { rel, abs: 1e-300, max_intervals: 20000 }
}

/// ∫_ℝ f by splitting at 0 and summing half-period panels on each side.
pub(crate) fn line_integral<F: Fn(f64) -> C64>(f: &F, half_period: f64, t: Tol) -> Quad {
    let g = |x: f64| f(-x);
    let a = quad::oscillatory_half_line(f, 0.0, half_period, t);
    let b = quad::oscillatory_half_line(&g, 0.0, half_period, t);
    Quad { value: a.value + b.value, error: a.error + b.error, evals: a.evals + b.evals, converged: a.converged && b.converged }
}

fn check_converged(q: &Quad, what: &str) -> Result<C64> {
    if !q.converged || !q.value.re.is_finite() || !q.value.im.is_finite() {
        return Err(Error::NonConvergent(what.into()));
    }
    Ok(q.value)
}

fn cell_params(p: &Params) -> Result<CellParams> {
    let m = get(p, "m")? as usize;
    CellParams::new(get_c(p, "s")?, get(p, "l")? as i64, m, get(p, "delta")?, get(p, "r")?)
}

/// ε^l r^{s+ρ} ∫ (1 + ε i Δ^{1/2}x/(√2 r))^{s+ρ−l} e^{2πiεΔx} dx.
pub fn cell1_lhs(cp: &CellParams, eps: i8) -> Result<C64> {
    if !(cp.s.re + cp.rho - (cp.l as f64) < -1.0) {
        return Err(Error::DomainError("Cell1 needs Re(s) < l − ρ − 1".into()));
    }
    let f = |x: f64| {
        let v = shintani_cell(ShintaniCell::Identity { x, eps }, cp).unwrap_or(cr(f64::NAN));
        v * C64::from_polar(1.0, 2.0 * PI * eps as f64 * cp.delta * x)
    };
    let q = line_integral(&f, 0.5 / cp.delta, tol(1e-12));
    check_converged(&q, "Cell1 line integral")
}

/// ε^l Δ⁻¹ (√(8Δ)π)^{l−s−ρ}/Γ(l−s−ρ) · r^{−l} e^{−√(8Δ)πr}.
pub fn cell1_rhs(cp: &CellParams, eps: i8) -> Result<C64> {
    let e = sign_pow(eps, cp.l)?;
    let k = (8.0 * cp.delta).sqrt() * PI;
    let a = cr(cp.l as f64) - cp.sr();
    Ok(rpow(k, a) * rgamma(a) * (e / cp.delta) * whittaker_value(cp.r, cp.l, cp.delta))
}

fn sphere_volume(n: usize) -> f64 {
    // vol S^{n−1}
    2.0 * PI.powf(n as f64 / 2.0) * (-ln_gamma_real(n as f64 / 2.0)).exp()
}

/// Δ^{1/2} ∫dx ∫_{ℝ^{m−1}} dZ Φ(W0 cell at (x, Z)) e^{2πiΔx}, the Z-integral
/// taken in polar coordinates.
pub fn w0_singular_lhs(cp: &CellParams) -> Result<C64> {
    if !(cp.s.re > 0.0) {
        return Err(Error::DomainError("W0Singular needs Re(s) > 0".into()));
    }
    let n = (2.0 * cp.rho).round() as usize;
    let vol = sphere_volume(n);
    let inner = |x: f64| -> C64 {
        let u = unip(x, 1, cp);
        let sc = SQRT_2 * cp.r * u.norm();
        let g = |t: f64| {
            let t = t * sc;
            let v = shintani_cell(ShintaniCell::W0 { x, eps: 1, qz: t * t }, cp).unwrap_or(cr(f64::NAN));
            v * t.powi(n as i32 - 1)
        };
        // the radial tail decays like t^{−1−2 Re s}; past t = 1 it is taken
        // in v = 1/t, where it becomes an endpoint singularity v^{2s−1}
        let head = quad::tanh_sinh(&|t: f64, _: f64, _: f64| g(t), 0.0, 1.0, tol(1e-13));
        let tail = quad::tanh_sinh(
            &|_: f64, v: f64, _: f64| if v < 1e-150 { cr(0.0) } else { g(1.0 / v) / (v * v) },
            0.0,
            1.0,
            tol(1e-13),
        );
        let ok = head.converged && tail.converged;
        if ok { (head.value + tail.value) * (sc * vol) } else { cr(f64::NAN) }
    };
    let f = |x: f64| inner(x) * C64::from_polar(1.0, 2.0 * PI * cp.delta * x);
    let q = line_integral(&f, 0.5 / cp.delta, tol(1e-11));
    Ok(check_converged(&q, "W0Singular line integral")? * cp.delta.sqrt())
}

/// (2π)^ρ Γ(s)/Γ(s+ρ) (√(8Δ)π)^{s−ρ+l}/Γ(s+l−ρ) Δ^{−1/2} r^{−l} e^{−√(8Δ)πr}.
pub fn w0_singular_rhs(cp: &CellParams) -> Result<C64> {
    let k = (8.0 * cp.delta).sqrt() * PI;
    let a = cp.s - cp.rho + cp.l as f64;
    let lg = ln_gamma(cp.s) - ln_gamma(cp.sr());
    Ok(rpow(2.0 * PI, cr(cp.rho)) * lg.exp() * rpow(k, a) * rgamma(a) / cp.delta.sqrt()
        * whittaker_value(cp.r, cp.l, cp.delta))
}

/// Data of the m = 3 W1 cell integral: η = (η'', c₊, c₋).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct W1Data {
    pub eta2: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

/// The three-fold integral ∫∫∫ Φ(W1 cell) e^{−2πi(Y₀η'' + c₊y₊ − c₋y₋)}
/// by the trapezoid rule in y = S sinh t on each axis, with the even
/// Y₀-direction folded into a cosine. With `modulus` the integrand is
/// replaced by its absolute value.
fn w1_trapezoid(cp: &CellParams, d: &W1Data, modulus: bool, h: f64) -> C64 {
    const T: f64 = 4.5;
    let kappa = cp.sr() - cp.l as f64;
    let sr = cp.sr();
    let r2 = SQRT_2 * cp.r;
    let scale = (2.0 * cp.r * cp.r + cp.delta).sqrt();
    let k = (T / h).ceil() as i64;
    let nodes: Vec<(f64, f64)> = (-k..=k)
        .map(|j| {
            let t = j as f64 * h;
            (scale * t.sinh(), h * scale * t.cosh())
        })
        .collect();
    // everything that does not depend on Y₀
    let mut base = Vec::with_capacity(nodes.len() * nodes.len());
    for &(yp, wp) in &nodes {
        for &(ym, wm) in &nodes {
            let a = c(r2, ym);
            let b = a * a + (yp * yp + cp.delta);
            let v = cpow(c(1.0, (ym - yp) / r2), -sr);
            let g = if modulus {
                cr(v.norm() * wp * wm)
            } else {
                v * C64::from_polar(wp * wm, -2.0 * PI * (d.c_plus * yp - d.c_minus * ym))
            };
            base.push((b, g));
        }
    }
    let slices: Vec<(f64, f64)> = nodes.iter().filter(|n| n.0 >= 0.0).copied().collect();
    let slice = |&(y0, w0): &(f64, f64)| -> C64 {
        let w0 = if y0 == 0.0 { 0.5 * w0 } else { w0 };
        let mut acc = cr(0.0);
        for &(b, g) in &base {
            let e = clog(b + y0 * y0) * kappa;
            acc += if modulus { g * e.re.exp() } else { e.exp() * g };
        }
        let fold = if modulus { 2.0 } else { 2.0 * (2.0 * PI * d.eta2 * y0).cos() };
        acc * (w0 * fold)
    };
    let parts: Vec<C64> = pool().install(|| slices.par_iter().map(slice).collect());
    let v = pairwise_sum(&parts);
    let pref = w1_prefactor(cp);
    if modulus {
        v * pref.norm()
    } else {
        v * pref
    }
}

/// Halves the step from 0.2 until consecutive values agree to `rel`
/// relative or `abs` absolute. The error drops by a factor of 20 or more
/// per halving in the admissible range, so the returned value is well
/// inside `rel`.
fn w1_converged(cp: &CellParams, d: &W1Data, modulus: bool, rel: f64, abs: f64, h_min: f64) -> Result<C64> {
    let mut h = 0.2;
    let mut prev = w1_trapezoid(cp, d, modulus, h);
    while h > 1.5 * h_min {
        h /= 2.0;
        let next = w1_trapezoid(cp, d, modulus, h);
        let diff = (next - prev).norm();
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        if diff <= rel * next.norm() || diff <= abs {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent(format!("W1 cell integral at h = {h}")))
}

/// Printed constant divided by 2Δ^{(l−ρ−1)/2} (see the module tests): for
/// c₋ > c₊ and N² = c₋² − c₊² − η''² > 0,
/// i^{3l} 2^{3(l−s−ρ)/2+2} π^{l−s−ρ+1} Δ^{−(s+ρ)/2+l/2−1/4} r^l e^{−2√2πc₋r}
/// |e₀|^{−(s+ρ)}/Γ(l−s−ρ) · N^{l−ρ−1/2} J_{l−ρ−1/2}(2πN√Δ) / (2Δ^{(l−ρ−1)/2}),
/// with e₀ = (c₋ − c₊)/√Δ; zero when c₊ ≥ c₋.
pub fn w1_cell_rhs(cp: &CellParams, d: &W1Data) -> Result<C64> {
    if (cp.rho - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError("W1Cell is available for m = 3 only".into()));
    }
    if d.c_plus >= d.c_minus {
        return Ok(cr(0.0));
    }
    let n2 = d.c_minus * d.c_minus - d.c_plus * d.c_plus - d.eta2 * d.eta2;
    if !(n2 > 0.0) {
        return Err(Error::DomainError("W1Cell closed form needs c₋² > c₊² + η''²".into()));
    }
    let (l, rho, dl) = (cp.l as f64, cp.rho, cp.delta);
    let sr = cp.sr();
    let nu = l - rho - 0.5;
    let e0 = (d.c_minus - d.c_plus) / dl.sqrt();
    let i3l = c(0.0, 1.0).powi((3 * cp.l).rem_euclid(4) as i32);
    let a = cr(l) - sr;
    let mut v = i3l
        * rpow(2.0, a * 1.5 + 2.0)
        * rpow(PI, a + 1.0)
        * rpow(dl, -sr / 2.0 + l / 2.0 - 0.25)
        * rpow(e0, -sr)
        * rgamma(a);
    v *= cp.r.powf(l) * (-2.0 * SQRT_2 * PI * d.c_minus * cp.r).exp();
    // N^ν J_ν(2πN√Δ) = (π√Δ)^ν N^{2ν} · J_ν(y)/(y/2)^ν
    let y = 2.0 * PI * n2.sqrt() * dl.sqrt();
    v *= (nu * (PI * dl.sqrt()).ln() + nu * n2.ln()).exp() * bessel_j_scaled(nu, y)?;
    Ok(v / (2.0 * dl.powf((l - rho - 1.0) / 2.0)))
}

pub fn w1_cell_lhs(cp: &CellParams, d: &W1Data) -> Result<C64> {
    if (cp.rho - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError("W1Cell is available for m = 3 only".into()));
    }
    let mass = w1_cell_mass(cp, d)?;
    if d.c_plus >= d.c_minus {
        // the value is zero; resolve it against the mass
        w1_converged(cp, d, false, 1e-4, 1e-8 * mass, 0.0125)
    } else {
        // relative convergence only, down to a round-off floor. Near
        // c₊ = −c₋ the value falls far below the mass and this gives up.
        w1_converged(cp, d, false, 1e-4, 1e-13 * mass, 0.0125)
    }
}

/// ∫∫∫ |Φ(W1 cell)|: the scale against which a vanishing value is judged.
pub fn w1_cell_mass(cp: &CellParams, d: &W1Data) -> Result<f64> {
    if (cp.rho - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError("W1Cell is available for m = 3 only".into()));
    }
    Ok(w1_converged(cp, d, true, 1e-3, 0.0, 0.025)?.re)
}

fn tol_of(p: &Params, default: f64) -> f64 {
    get_or(p, "tol", default)
}

fn timed(mut rep: VerificationReport, t0: Instant) -> VerificationReport {
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    rep
}

/// Parameters: m, l, s_re, s_im, delta, r, and per cell: eps (Cell1);
/// eta2, c_plus, c_minus (W1Cell). `tol` overrides the default tolerance.
pub fn orbital_identity_check(which: IdentityId, p: &Params) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let cp = cell_params(p)?;
    let rep = match which {
        IdentityId::Cell1 => {
            let eps = get_or(p, "eps", 1.0) as i8;
            let lhs = cell1_lhs(&cp, eps)?;
            let rhs = cell1_rhs(&cp, eps)?;
            VerificationReport::compare(which, p.clone(), lhs, rhs, tol_of(p, 1e-7))
        }
        IdentityId::W0Singular => {
            let lhs = w0_singular_lhs(&cp)?;
            let rhs = w0_singular_rhs(&cp)?;
            VerificationReport::compare(which, p.clone(), lhs, rhs, tol_of(p, 1e-7))
        }
        IdentityId::W1Cell => {
            let d = W1Data { eta2: get(p, "eta2")?, c_plus: get(p, "c_plus")?, c_minus: get(p, "c_minus")? };
            let lhs = w1_cell_lhs(&cp, &d)?;
            let rhs = w1_cell_rhs(&cp, &d)?;
            if rhs == cr(0.0) {
                let mass = w1_cell_mass(&cp, &d)?;
                // the relative `tol` has no meaning against an exact zero
                let t = get_or(p, "vanish_tol", 1e-6) * mass;
                VerificationReport::compare(which, p.clone(), lhs, rhs, t).with_note(format!("vanishing side, scale {mass:.3e}"))
            } else {
                VerificationReport::compare(which, p.clone(), lhs, rhs, tol_of(p, 1e-4))
            }
        }
        other => return Err(Error::DomainError(format!("{other} is not an orbital identity"))),
    };
    Ok(timed(rep, t0))
}

/// The W0Singular closed form at s against the Cell1 closed form at −s:
/// the (√(8Δ)π)-powers and the reciprocal gamma agree, leaving
/// (2π)^ρ Γ(s)/Γ(s+ρ) · Δ^{1/2}.
pub fn w0_cell1_exponent_ratio(cp: &CellParams) -> Result<C64> {
    let mut neg = *cp;
    neg.s = -cp.s;
    Ok(w0_singular_rhs(cp)? / cell1_rhs(&neg, 1)?)
}

pub fn cell_param_map(m: usize, l: i64, s: C64, delta: f64, r: f64) -> Params {
    let mut p = BTreeMap::new();
    p.insert("m".into(), m as f64);
    p.insert("l".into(), l as f64);
    p.insert("s_re".into(), s.re);
    p.insert("s_im".into(), s.im);
    p.insert("delta".into(), delta);
    p.insert("r".into(), r);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(s: C64, l: i64, m: usize, delta: f64, r: f64) -> CellParams {
        CellParams::new(s, l, m, delta, r).unwrap()
    }

    #[test]
    fn cell_trivial_values() {
        let p = cp(c(1.3, 0.4), 9, 3, 1.7, 0.8);
        let v = shintani_cell(ShintaniCell::Identity { x: 0.0, eps: 1 }, &p).unwrap();
        assert!((v - rpow(0.8, p.sr())).norm() < 1e-15);
        let v = shintani_cell(ShintaniCell::W0 { x: 0.0, eps: 1, qz: 0.0 }, &p).unwrap();
        assert!((v - rpow(0.8, -p.sr())).norm() < 1e-14);
        assert!(shintani_cell(ShintaniCell::Identity { x: 0.0, eps: 2 }, &p).is_err());
        let odd = shintani_cell(ShintaniCell::Identity { x: 0.3, eps: -1 }, &p).unwrap();
        let conj_like = shintani_cell(ShintaniCell::Identity { x: -0.3, eps: 1 }, &p).unwrap();
        assert!((odd + conj_like).norm() < 1e-14);
    }

    #[test]
    fn cell_branch_continuity() {
        let p = cp(c(2.1, -0.7), 11, 4, 0.6, 1.2);
        let cells = |x: f64| {
            [
                shintani_cell(ShintaniCell::Identity { x, eps: 1 }, &p).unwrap(),
                shintani_cell(ShintaniCell::W0 { x, eps: -1, qz: 0.4 }, &p).unwrap(),
                shintani_cell(ShintaniCell::NxiW0 { x, eps: 1, qz: 0.4 }, &p).unwrap(),
                shintani_cell(ShintaniCell::W1 { q_y0: 0.2, y_plus: x, y_minus: -x }, &p).unwrap(),
            ]
        };
        let h = 1e-4;
        let mut x = -30.0;
        while x < 30.0 {
            let (a, b) = (cells(x), cells(x + h));
            for k in 0..4 {
                assert!((a[k] - b[k]).norm() <= 1e-2 * a[k].norm().max(b[k].norm()) + 1e-300, "jump at x={x}, cell {k}");
            }
            x += h * 37.0;
        }
    }

    #[test]
    fn cell1_example() {
        let p = cp(cr(2.0), 12, 3, 1.0, 1.0);
        let lhs = cell1_lhs(&p, 1).unwrap();
        let rhs = cell1_rhs(&p, 1).unwrap();
        assert!((lhs - rhs).norm() <= 1e-7 * rhs.norm(), "{lhs} {rhs}");
        let lhs = cell1_lhs(&p, -1).unwrap();
        let rhs = cell1_rhs(&p, -1).unwrap();
        assert!((lhs - rhs).norm() <= 1e-7 * rhs.norm(), "{lhs} {rhs}");
    }

    #[test]
    fn cell1_off_unit_radius_is_off_by_r_2l() {
        // The integral is proportional to r^{l}; the pinned Whittaker value to r^{−l}.
        let (r, l) = (1.3, 10);
        let p = cp(c(1.5, 0.3), l, 5, 0.8, r);
        let ratio = cell1_lhs(&p, 1).unwrap() / cell1_rhs(&p, 1).unwrap();
        assert!((ratio - cr(r.powi(2 * l as i32))).norm() < 1e-7 * r.powi(2 * l as i32), "{ratio}");
    }

    #[test]
    fn w0_singular_example() {
        let p = cp(c(1.4, 0.5), 10, 3, 1.3, 1.0);
        let lhs = w0_singular_lhs(&p).unwrap();
        let rhs = w0_singular_rhs(&p).unwrap();
        assert!((lhs - rhs).norm() <= 1e-7 * rhs.norm(), "{lhs} {rhs}");
    }

    #[test]
    fn w0_cell1_bookkeeping() {
        let p = cp(c(1.7, 0.9), 14, 6, 2.3, 0.9);
        let ratio = w0_cell1_exponent_ratio(&p).unwrap();
        let want = rpow(2.0 * PI, cr(p.rho)) * (ln_gamma(p.s) - ln_gamma(p.sr())).exp() * p.delta.sqrt();
        assert!((ratio - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn w1_closed_form_regime() {
        let p = cp(c(1.2, 0.4), 9, 3, 1.7, 1.1);
        let ok = W1Data { eta2: -0.4, c_plus: -0.3, c_minus: 0.8 };
        assert!(w1_cell_rhs(&p, &ok).unwrap().norm() > 0.0);
        let vanish = W1Data { eta2: 0.1, c_plus: 0.9, c_minus: 0.2 };
        assert_eq!(w1_cell_rhs(&p, &vanish).unwrap(), cr(0.0));
        let bad = W1Data { eta2: 2.0, c_plus: 0.0, c_minus: 0.5 };
        assert!(w1_cell_rhs(&p, &bad).is_err());
        assert!(w1_cell_rhs(&cp(cr(1.0), 9, 4, 1.0, 1.0), &ok).is_err());
    }

    #[test]
    fn w1_both_sides() {
        let p = cp(c(1.2, 0.4), 9, 3, 1.7, 1.0);
        let d = W1Data { eta2: 0.4, c_plus: -0.3, c_minus: 1.3 };
        let (lhs, rhs) = (w1_cell_lhs(&p, &d).unwrap(), w1_cell_rhs(&p, &d).unwrap());
        assert!((lhs - rhs).norm() <= 1e-5 * rhs.norm(), "{lhs} {rhs}");
        let v = W1Data { eta2: 0.2, c_plus: 0.9, c_minus: 0.4 };
        let lhs = w1_cell_lhs(&p, &v).unwrap();
        assert!(lhs.norm() <= 1e-7 * w1_cell_mass(&p, &v).unwrap(), "{lhs}");
    }
}
