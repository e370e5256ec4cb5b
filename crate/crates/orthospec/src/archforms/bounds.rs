//! Grid non-violation checks for the inequalities used along the way.
//!
//! A bound is either explicit (the printed constant is used as is) or has an
//! implied constant. Implied constants are fitted: C = 1.25 × the largest
//! ratio seen on the sub-grid of even indices along every axis, and the full
//! grid is then checked against C. Axes have an odd number of points so the
//! corners are always in the fitting set.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::ftn::{cal_i, derivative_q};
use super::psi::psi_closed;
use super::{get_or, IdentityId, Params, VerificationReport};
use crate::error::{Error, Result};
use crate::par::pool;
use crate::special::{bessel_j_scaled, c, ln_gamma, ln_gamma_real, rgamma};

pub const FIT_MARGIN: f64 = 1.25;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundFit {
    /// Largest ratio |lhs| / bound over the full grid.
    pub observed: f64,
    pub constant: f64,
    pub fitted: bool,
    pub argmax: String,
    pub points: usize,
    /// Largest ratio at each value of l, when the grid has an l axis.
    pub per_l: Vec<(i64, f64)>,
}

impl BoundFit {
    pub fn holds(&self) -> bool {
        self.observed <= self.constant
    }

    pub fn strict(self) -> Result<BoundFit> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::BoundViolated(self.argmax))
        }
    }

    /// Ratio of the last to the first per-l maximum: > 1 means the bound
    /// degrades with l.
    pub fn l_growth(&self) -> f64 {
        match (self.per_l.first(), self.per_l.last()) {
            (Some(a), Some(b)) if a.1 > 0.0 => b.1 / a.1,
            _ => 1.0,
        }
    }

    pub fn report(&self, id: IdentityId, p: Params) -> VerificationReport {
        let kind = if self.fitted { "fitted" } else { "explicit" };
        let mut note = format!("{} points, {kind} constant {:.4e}, worst at {}", self.points, self.constant, self.argmax);
        if self.per_l.len() > 1 {
            note.push_str(&format!(", l-growth {:.3e}", self.l_growth()));
        }
        VerificationReport::bound(id, p, self.observed, self.constant).with_note(note)
    }
}

/// One grid point: its index along every axis, l (if any), a label, and the
/// ratio |lhs| / bound-without-constant.
struct Sample {
    idx: Vec<usize>,
    l: Option<i64>,
    label: String,
    ratio: f64,
}

fn finish(samples: Vec<Sample>, explicit: Option<f64>) -> Result<BoundFit> {
    if samples.is_empty() {
        return Err(Error::DomainError("empty bound grid".into()));
    }
    if let Some(bad) = samples.iter().find(|s| !s.ratio.is_finite()) {
        return Err(Error::NonConvergent(format!("non-finite ratio at {}", bad.label)));
    }
    let (constant, fitted) = match explicit {
        Some(k) => (k, false),
        None => {
            let train = samples
                .iter()
                .filter(|s| s.idx.iter().all(|i| i % 2 == 0))
                .map(|s| s.ratio)
                .fold(0.0, f64::max);
            (FIT_MARGIN * train, true)
        }
    };
    let worst = samples.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
    let mut per_l: Vec<(i64, f64)> = Vec::new();
    for s in &samples {
        if let Some(l) = s.l {
            match per_l.iter_mut().find(|e| e.0 == l) {
                Some(e) => e.1 = e.1.max(s.ratio),
                None => per_l.push((l, s.ratio)),
            }
        }
    }
    per_l.sort_by_key(|e| e.0);
    Ok(BoundFit { observed: worst.ratio, constant, fitted, argmax: worst.label.clone(), points: samples.len(), per_l })
}

/// `n` points from lo to hi inclusive; n is bumped to be odd.
pub fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = if n % 2 == 0 { n + 1 } else { n.max(1) };
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn int_axis(lo: i64, hi: i64) -> Vec<i64> {
    let hi = if (hi - lo) % 2 == 1 { hi + 1 } else { hi };
    (lo..=hi).collect()
}

fn eval<T: Sync, F: Fn(&T) -> Result<Sample> + Sync + Send>(pts: &[T], f: F) -> Result<Vec<Sample>> {
    pool().install(|| pts.par_iter().map(&f).collect())
}

/// |J_ν(x)| ≤ 2(x/2)^ν/Γ(ν+1), ν ∈ {1, …, 50}, x ∈ (0, 100]. The ratio is
/// |J_ν(x)|Γ(ν+1)/(2(x/2)^ν) and the constant is 1.
pub fn jbessel_bound(p: &Params) -> Result<BoundFit> {
    let nu_max = get_or(p, "nu_max", 50.0) as i64;
    let nx = get_or(p, "nx", 201.0) as usize;
    let mut xs = axis(0.5, 100.0, nx);
    xs.extend([1e-6, 1e-3, 0.1]);
    let pts: Vec<(usize, i64, usize, f64)> =
        (1..=nu_max).flat_map(|nu| xs.iter().enumerate().map(move |(i, &x)| (0, nu, i, x))).collect();
    let s = eval(&pts, |&(_, nu, i, x)| {
        let v = bessel_j_scaled(nu as f64, x)?.abs() * ln_gamma_real(nu as f64 + 1.0).exp() / 2.0;
        Ok(Sample { idx: vec![i], l: None, label: format!("nu={nu}, x={x}"), ratio: v })
    })?;
    finish(s, Some(1.0))
}

/// |Ψ| against 2^{−l}(l−ρ)^{−1/2}a^{−l+ρ}, a ∈ [1.1, 5], l ∈ [10, 60].
pub fn psi_decay_bound(p: &Params) -> Result<BoundFit> {
    let rho = (get_or(p, "m", 3.0) - 1.0) / 2.0;
    let sigma = get_or(p, "s_re", 0.5);
    let (l_lo, l_hi) = (get_or(p, "l_min", 10.0) as i64, get_or(p, "l_max", 60.0) as i64);
    let a_ax = axis(get_or(p, "a_min", 1.1), get_or(p, "a_max", 5.0), get_or(p, "na", 21.0) as usize);
    let l_ax = int_axis(l_lo, l_hi);
    let t_ax = [0.0, 2.0, 8.0];
    let mut pts = Vec::new();
    for (ia, &a) in a_ax.iter().enumerate() {
        for (il, &l) in l_ax.iter().enumerate() {
            for (it, &t) in t_ax.iter().enumerate() {
                pts.push((vec![ia, il, it], a, l, t));
            }
        }
    }
    let s = eval(&pts, |(idx, a, l, t)| {
        let (a, l) = (*a, *l);
        let v = psi_closed(a, c(sigma, *t), l, rho)?.norm();
        let lb = -(l as f64) * std::f64::consts::LN_2 - 0.5 * (l as f64 - rho).ln() + (rho - l as f64) * a.ln();
        Ok(Sample { idx: idx.clone(), l: Some(l), label: format!("a={a:.4}, l={l}, s={sigma}+{t}i"), ratio: v / lb.exp() })
    })?;
    finish(s, None)
}

/// |Ψ| ≤ 2^{−l+ρ+1}((a+1)/(a−1))^{|σ|/2}(a−1)^{−l+ρ}B(1/2, l−ρ), constant 1.
/// This is the estimate that holds uniformly before a^{−l+ρ} is pulled out.
pub fn psi_intermediate_bound(p: &Params) -> Result<BoundFit> {
    let rho = (get_or(p, "m", 3.0) - 1.0) / 2.0;
    let sigma = get_or(p, "s_re", 0.5);
    let a_ax = axis(1.1, 5.0, get_or(p, "na", 21.0) as usize);
    let l_ax = int_axis(get_or(p, "l_min", 10.0) as i64, get_or(p, "l_max", 60.0) as i64);
    let mut pts = Vec::new();
    for (ia, &a) in a_ax.iter().enumerate() {
        for (il, &l) in l_ax.iter().enumerate() {
            pts.push((vec![ia, il], a, l));
        }
    }
    let s = eval(&pts, |(idx, a, l)| {
        let (a, lf) = (*a, *l as f64);
        let v = psi_closed(a, c(sigma, 3.0), *l, rho)?.norm();
        let ln_beta = ln_gamma_real(0.5) + ln_gamma_real(lf - rho) - ln_gamma_real(lf - rho + 0.5);
        let lb = (rho + 1.0 - lf) * std::f64::consts::LN_2
            + 0.5 * sigma.abs() * ((a + 1.0) / (a - 1.0)).ln()
            + (rho - lf) * (a - 1.0).ln()
            + ln_beta;
        Ok(Sample { idx: idx.clone(), l: Some(*l), label: format!("a={a:.4}, l={l}"), ratio: v / lb.exp() })
    })?;
    finish(s, Some(1.0))
}

fn cal_i_grid(p: &Params) -> (f64, usize, Vec<i64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let rho = (get_or(p, "m", 3.0) - 1.0) / 2.0;
    let q = get_or(p, "q", 1.0) as usize;
    let l_ax = int_axis(get_or(p, "l_min", 8.0) as i64, get_or(p, "l_max", 20.0) as i64);
    let a_ax = vec![0.25, 0.5, 1.0, 1.5, 2.0];
    let b_ax = vec![-5.0, -2.0, -0.5, 0.5, 2.0, 5.0, 9.0];
    let t_ax = vec![0.0, 2.0, 6.0];
    (rho, q, l_ax, a_ax, b_ax, t_ax)
}

/// q-fold cal_I bound. With `corrected`, a^{l−ρ−1/2} is replaced by
/// (πa)^{l−ρ−1/2}, which is what (JBesselEst3) gives for J(2πax).
pub fn cal_i_bound_form(p: &Params, corrected: bool) -> Result<BoundFit> {
    let (rho, q, l_ax, a_ax, b_ax, t_ax) = cal_i_grid(p);
    let qf = q as f64;
    let mut pts = Vec::new();
    for (il, &l) in l_ax.iter().enumerate() {
        let lf = l as f64;
        let (lo, hi) = (qf - rho + 1.0, lf - rho - qf - 1.0);
        if !(hi > lo) {
            continue;
        }
        let sigma = 0.5 * (lo + hi);
        for (ia, &a) in a_ax.iter().enumerate() {
            for (ib, &b) in b_ax.iter().enumerate() {
                for (it, &t) in t_ax.iter().enumerate() {
                    pts.push((vec![il, ia, ib, it], l, a, b, c(sigma, t)));
                }
            }
        }
    }
    let s = eval(&pts, |(idx, l, a, b, s)| {
        let (l, a, b, s) = (*l, *a, *b, *s);
        let lf = l as f64;
        let nu = lf - rho - 0.5;
        let v = cal_i(s, l, rho, a, b)?.norm();
        let base = if corrected { PI * a } else { a };
        let lb = qf * (1.0 + s.im.abs()).ln() - qf * b.abs().ln() + qf * lf.ln() + nu * base.ln()
            + (a.powf(2.0 * qf) + a.powf(-qf)).ln()
            - ln_gamma_real(nu + 1.0);
        Ok(Sample { idx: idx.clone(), l: Some(l), label: format!("l={l}, a={a}, b={b}, s={s}"), ratio: v / lb.exp() })
    })?;
    finish(s, None)
}

pub fn cal_i_bound(p: &Params) -> Result<BoundFit> {
    cal_i_bound_form(p, false)
}

/// Sup over x ∈ (0,1) of the q-th derivative of x^{−(s+1/2)}(1−x)^{s+ρ−1}J_ν(2πax)
/// against (1+|s|)^q l^q a^ν (a^{2q}+a^{−q})/Γ(ν+1), ν = l−ρ−1/2.
pub fn derivative_bound_form(p: &Params, corrected: bool) -> Result<BoundFit> {
    let rho = (get_or(p, "m", 3.0) - 1.0) / 2.0;
    let q = get_or(p, "q", 1.0) as usize;
    let qf = q as f64;
    let l_ax = int_axis(get_or(p, "l_min", 8.0) as i64, get_or(p, "l_max", 20.0) as i64);
    let a_ax = [0.25, 0.5, 1.0, 1.5, 2.0];
    let t_ax = [0.0, 1.5, 3.0];
    let xs = axis(0.02, 0.98, 25);
    let mut pts = Vec::new();
    for (il, &l) in l_ax.iter().enumerate() {
        let lf = l as f64;
        let (lo, hi) = (qf - rho + 1.0, lf - rho - qf - 1.0);
        if !(hi > lo) {
            continue;
        }
        for (ia, &a) in a_ax.iter().enumerate() {
            for (it, &t) in t_ax.iter().enumerate() {
                pts.push((vec![il, ia, it], l, a, c(0.5 * (lo + hi), t)));
            }
        }
    }
    let xs = &xs;
    let s = eval(&pts, |(idx, l, a, s)| {
        let (l, a, s) = (*l, *a, *s);
        let lf = l as f64;
        let nu = lf - rho - 0.5;
        let mut sup = 0.0f64;
        for &x in xs {
            sup = sup.max(derivative_q(s, l, rho, a, q, x, 1.0 - x)?.norm());
        }
        let base = if corrected { PI * a } else { a };
        let lb = qf * (1.0 + s.norm()).ln() + qf * lf.ln() + nu * base.ln() + (a.powf(2.0 * qf) + a.powf(-qf)).ln()
            - ln_gamma_real(nu + 1.0);
        Ok(Sample { idx: idx.clone(), l: Some(l), label: format!("l={l}, a={a}, s={s}"), ratio: sup / lb.exp() })
    })?;
    finish(s, None)
}

pub fn derivative_bound(p: &Params) -> Result<BoundFit> {
    derivative_bound_form(p, false)
}

/// 1/|Γ(−s+l+a)| against l^σ/Γ(l+a) + T^{−l}/|Γ(−s+a)| for s in the strip
/// σ ∈ (ρ, l₀−3ρ−1), l > l₀.
pub fn gamma_ratio_bound(p: &Params) -> Result<BoundFit> {
    let rho = (get_or(p, "m", 3.0) - 1.0) / 2.0;
    let l0 = get_or(p, "l0", 12.0) as i64;
    let big_t = get_or(p, "T", 2.0);
    let (lo, hi) = (rho, l0 as f64 - 3.0 * rho - 1.0);
    if !(hi > lo) || !(big_t > 1.0) {
        return Err(Error::DomainError("GammaRatioBound needs l0 > 4ρ+1 and T > 1".into()));
    }
    let sig_ax = axis(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 9);
    let t_ax = axis(-40.0, 40.0, 17);
    let a_ax = [-1.5, -0.5, 0.0, 0.5, 2.0];
    let l_ax = int_axis(l0 + 1, l0 + 61);
    let mut pts = Vec::new();
    for (ia, &a) in a_ax.iter().enumerate() {
        for (il, &l) in l_ax.iter().enumerate() {
            if l as f64 + a <= 0.0 {
                continue;
            }
            for (is, &sg) in sig_ax.iter().enumerate() {
                for (it, &t) in t_ax.iter().enumerate() {
                    pts.push((vec![ia, il, is, it], a, l, c(sg, t)));
                }
            }
        }
    }
    let s = eval(&pts, |(idx, a, l, s)| {
        let (a, l, s) = (*a, *l, *s);
        let lf = l as f64;
        let lhs = -ln_gamma(-s + lf + a).re;
        let t1 = s.re * lf.ln() - ln_gamma_real(lf + a);
        let r2 = rgamma(-s + a).norm();
        let t2 = if r2 > 0.0 { -lf * big_t.ln() + r2.ln() } else { f64::NEG_INFINITY };
        let m = t1.max(t2);
        let rhs = m + ((t1 - m).exp() + (t2 - m).exp()).ln();
        Ok(Sample { idx: idx.clone(), l: Some(l), label: format!("a={a}, l={l}, s={s}"), ratio: (lhs - rhs).exp() })
    })?;
    finish(s, None)
}

/// |2iz/(z²+u²)| < T whenever Re z > 2/T; the ratio is |2z/(z²+u²)|/T.
pub fn disk_bound(p: &Params) -> Result<BoundFit> {
    let t_ax = [0.25, 0.5, 1.0, 2.0, 4.0, 10.0];
    let excess = axis(1e-6, 4.0, 9);
    let im_ax = axis(-5.0, 5.0, 21);
    let n_u = get_or(p, "nu_pts", 41.0) as usize;
    let mut pts = Vec::new();
    for (i_t, &tt) in t_ax.iter().enumerate() {
        for (ie, &e) in excess.iter().enumerate() {
            for (iy, &y) in im_ax.iter().enumerate() {
                pts.push((vec![i_t, ie, iy], tt, c(2.0 / tt * (1.0 + e), y * 2.0 / tt)));
            }
        }
    }
    let s = eval(&pts, |(idx, tt, z)| {
        let (tt, z) = (*tt, *z);
        // the sup over u of |z²+u²|⁻¹ is at u² = max(0, Im(z²)·… ); sample densely
        // around u = ±Im z, where |u ± iz| is smallest
        let mut worst = 0.0f64;
        for k in 0..n_u {
            let w = -3.0 + 6.0 * k as f64 / (n_u - 1) as f64;
            for u in [z.im + w * z.re, -z.im + w * z.re, w * 10.0 * (1.0 + z.norm())] {
                let v = (z * 2.0 / (z * z + u * u)).norm() / tt;
                worst = worst.max(v);
            }
        }
        Ok(Sample { idx: idx.clone(), l: None, label: format!("T={tt}, z={z}"), ratio: worst })
    })?;
    finish(s, Some(1.0))
}

/// Dispatch for the bound identities that are not appendix lemmas.
pub fn bound_check(id: IdentityId, p: &Params) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let fit = match id {
        IdentityId::JBesselBound => jbessel_bound(p)?,
        IdentityId::PsiDecayBound => psi_decay_bound(p)?,
        IdentityId::CalIBound => cal_i_bound(p)?,
        IdentityId::DiskBound => disk_bound(p)?,
        IdentityId::DerivativeBound => derivative_bound(p)?,
        IdentityId::GammaRatioBound => gamma_ratio_bound(p)?,
        other => return Err(Error::DomainError(format!("{other} is not a bound"))),
    };
    let mut rep = fit.report(id, p.clone());
    rep.runtime_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_bounds_hold() {
        let p = Params::new();
        let j = jbessel_bound(&p).unwrap();
        assert!(j.holds() && !j.fitted, "{j:?}");
        let d = disk_bound(&p).unwrap();
        assert!(d.holds() && d.observed > 0.2, "{d:?}");
        let i = psi_intermediate_bound(&p).unwrap();
        assert!(i.holds(), "{i:?}");
    }

    #[test]
    fn psi_decay_degrades_with_l() {
        let fit = psi_decay_bound(&Params::new()).unwrap();
        assert!(fit.holds(), "{fit:?}");
        // the ratio at a = 1.1 behaves like (2a/(a+√(a²−1)))^{l−ρ}
        assert!(fit.l_growth() > 1e6, "{}", fit.l_growth());
    }

    #[test]
    fn strict_reports_the_point() {
        let bad = BoundFit { observed: 2.0, constant: 1.0, fitted: false, argmax: "x=1".into(), points: 1, per_l: vec![] };
        assert_eq!(bad.strict(), Err(Error::BoundViolated("x=1".into())));
    }

    #[test]
    fn fitted_bounds_hold() {
        let p = Params::new();
        for f in [gamma_ratio_bound(&p).unwrap(), derivative_bound(&p).unwrap(), cal_i_bound(&p).unwrap()] {
            assert!(f.holds() && f.fitted, "{f:?}");
        }
        let printed = cal_i_bound_form(&p, false).unwrap();
        let fixed = cal_i_bound_form(&p, true).unwrap();
        assert!(printed.l_growth() > fixed.l_growth());
    }
}
