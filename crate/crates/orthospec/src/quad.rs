//! Quadrature kernels for complex-valued integrands of one real variable.
//!
//! Adaptive Gauss-Kronrod (21 points) on finite intervals, tanh-sinh for
//! algebraic endpoint singularities, a mapped rule for half lines, and a
//! panel-sum scheme with Wynn epsilon for slowly decaying oscillatory tails.

use num_complex::Complex64 as C64;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208015942538,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Absolute and relative targets; the integral is accepted once
/// `err <= max(abs, rel * |value|)`.
#[derive(Clone, Copy, Debug)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { abs: 1e-300, rel: 1e-12, max_intervals: 4000 }
    }
}

impl Tol {
    pub fn rel(rel: f64) -> Self {
        Tol { rel, ..Default::default() }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    fn target(&self, value: C64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub value: C64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl Quad {
    fn zero() -> Self {
        Quad { value: C64::new(0.0, 0.0), error: 0.0, evals: 0, converged: true }
    }

    fn add(self, o: Quad) -> Quad {
        Quad {
            value: self.value + o.value,
            error: self.error + o.error,
            evals: self.evals + o.evals,
            converged: self.converged && o.converged,
        }
    }
}

fn gk21<F: Fn(f64) -> C64 + ?Sized>(f: &F, a: f64, b: f64) -> (C64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = C64::new(0.0, 0.0);
    let mut labs = fc.norm() * WGK[10];
    for i in 0..10 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += (f1 + f2) * WGK[i];
        labs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            g += (f1 + f2) * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    let mut err = (k - g).norm();
    // QUADPACK-style sharpening of the raw Kronrod minus Gauss difference.
    let resasc = labs * h.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1.0f64).min((200.0 * err / resasc).powf(1.5));
    }
    (k, err, labs * h.abs())
}

/// Globally adaptive Gauss-Kronrod on a finite interval.
pub fn adaptive<F: Fn(f64) -> C64 + ?Sized>(f: &F, a: f64, b: f64, tol: Tol) -> Quad {
    if a == b {
        return Quad::zero();
    }
    let (v, e, _) = gk21(f, a, b);
    let mut segs: Vec<(f64, f64, C64, f64)> = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    let mut evals = 21;
    while err > tol.target(total) {
        if segs.len() >= tol.max_intervals {
            return Quad { value: total, error: err, evals, converged: false };
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.3 > acc.1 { (i, s.3) } else { acc });
        let (sa, sb, sv, se) = segs.swap_remove(i);
        let mid = 0.5 * (sa + sb);
        if mid <= sa.min(sb) || mid >= sa.max(sb) {
            return Quad { value: total, error: err, evals, converged: false };
        }
        let (v1, e1, _) = gk21(f, sa, mid);
        let (v2, e2, _) = gk21(f, mid, sb);
        evals += 42;
        total += v1 + v2 - sv;
        err += e1 + e2 - se;
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
        if segs.len() % 64 == 0 {
            // refresh the running sums to keep round-off from accumulating
            total = segs.iter().map(|s| s.2).sum();
            err = segs.iter().map(|s| s.3).sum();
        }
    }
    Quad { value: total, error: err, evals, converged: true }
}

/// Adaptive integration over consecutive breakpoints.
pub fn adaptive_pts<F: Fn(f64) -> C64 + ?Sized>(f: &F, pts: &[f64], tol: Tol) -> Quad {
    let mut q = Quad::zero();
    for w in pts.windows(2) {
        q = q.add(adaptive(f, w[0], w[1], tol));
    }
    q
}

/// Tanh-sinh rule on `[a, b]`. The integrand receives `(x, x - a, b - x)` so
/// that endpoint factors like `(b - x)^(-0.9)` can be evaluated without
/// cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> C64 + ?Sized>(f: &F, a: f64, b: f64, tol: Tol) -> Quad {
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let tmax = 6.5;
    // level 0
    let mut h = 0.5;
    let node = |t: f64| -> Option<C64> {
        let u = pi2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let comp = 2.0 * e / (1.0 + e); // 1 - tanh|u|
        let w = pi2 * t.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e)) * 2.0; // (1 - tanh^2 u) * u'
        if comp * half.abs() == 0.0 || w == 0.0 {
            return None;
        }
        let (x, da, db) = if t >= 0.0 {
            let db = half * comp;
            (b - db, b - a - db, db)
        } else {
            let da = half * comp;
            (a + da, da, b - a - da)
        };
        let v = f(x, da, db);
        if !v.re.is_finite() || !v.im.is_finite() {
            return None;
        }
        Some(v * (w * half))
    };
    let mut sum = node(0.0).unwrap_or_default();
    let mut evals = 1;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > tmax {
            break;
        }
        for &tt in &[t, -t] {
            if let Some(v) = node(tt) {
                sum += v;
            }
            evals += 1;
        }
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 0..10 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > tmax {
                break;
            }
            for &tt in &[t, -t] {
                if let Some(v) = node(tt) {
                    sum += v;
                }
                evals += 1;
            }
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if diff <= tol.target(cur) && evals > 60 {
            return Quad { value: cur, error: diff, evals, converged: true };
        }
        prev = cur;
    }
    Quad { value: prev, error: f64::INFINITY, evals, converged: false }
}

/// Integral over `[a, ∞)` through `x = a + u/(1-u)`.
pub fn half_line<F: Fn(f64) -> C64 + ?Sized>(f: &F, a: f64, tol: Tol) -> Quad {
    let g = |u: f64| {
        let om = 1.0 - u;
        let x = a + u / om;
        let v = f(x);
        if v == C64::new(0.0, 0.0) {
            v
        } else {
            v / (om * om)
        }
    };
    adaptive(&g, 0.0, 1.0, tol)
}

/// Integral over `[a, ∞)` as a sum of panels of width `panel`, accelerated
/// by Wynn's epsilon algorithm. Meant for integrands like
/// `g(x) exp(i ω x)` with `g` decaying slowly; `panel` should be a half
/// period.
pub fn oscillatory_half_line<F: Fn(f64) -> C64 + ?Sized>(
    f: &F,
    a: f64,
    panel: f64,
    tol: Tol,
) -> Quad {
    let mut partial = Vec::new();
    let mut s = C64::new(0.0, 0.0);
    let mut evals = 0;
    let mut err_in = 0.0;
    let mut last = C64::new(f64::NAN, 0.0);
    let mut stable = 0;
    for k in 0..4000 {
        let lo = a + k as f64 * panel;
        let q = adaptive(f, lo, lo + panel, Tol { rel: tol.rel * 0.1, abs: tol.abs * 0.01, ..tol });
        evals += q.evals;
        err_in += q.error;
        s += q.value;
        partial.push(s);
        if partial.len() >= 6 {
            let ex = wynn_epsilon(&partial);
            let d = (ex - last).norm();
            if d <= tol.target(ex) {
                stable += 1;
                if stable >= 3 {
                    return Quad { value: ex, error: d + err_in, evals, converged: true };
                }
            } else {
                stable = 0;
            }
            last = ex;
        }
        if q.value.norm() <= tol.abs * 1e-3 && k > 10 && q.value.norm() <= 1e-3 * tol.target(s) {
            return Quad { value: s, error: err_in, evals, converged: true };
        }
    }
    Quad { value: last, error: f64::INFINITY, evals, converged: false }
}

/// Wynn's epsilon extrapolation of a sequence of partial sums; returns the
/// highest even-column entry.
pub fn wynn_epsilon(s: &[C64]) -> C64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap();
    }
    // use the last up to 40 terms
    let start = n.saturating_sub(40);
    let seq = &s[start..];
    let n = seq.len();
    let mut e0: Vec<C64> = vec![C64::new(0.0, 0.0); n + 1];
    let mut e1: Vec<C64> = seq.to_vec();
    let mut best = *seq.last().unwrap();
    let mut col = 1;
    while e1.len() > 1 {
        let mut e2 = Vec::with_capacity(e1.len() - 1);
        for i in 0..e1.len() - 1 {
            let d = e1[i + 1] - e1[i];
            if d.norm() == 0.0 {
                return e1[i + 1];
            }
            e2.push(e0[i + 1] + d.inv());
        }
        if col % 2 == 0 {
            if let Some(v) = e2.last() {
                if v.re.is_finite() && v.im.is_finite() {
                    best = *v;
                }
            }
        }
        e0 = e1;
        e1 = e2;
        col += 1;
    }
    best
}

/// Pairwise summation in a fixed order, independent of how the terms were
/// produced.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    if v.len() <= 16 {
        return v.iter().fold(C64::new(0.0, 0.0), |a, b| a + b);
    }
    let m = v.len() / 2;
    pairwise_sum(&v[..m]) + pairwise_sum(&v[m..])
}

pub fn pairwise_sum_real(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let m = v.len() / 2;
    pairwise_sum_real(&v[..m]) + pairwise_sum_real(&v[m..])
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> C64 {
        move |x| C64::new(f(x), 0.0)
    }

    #[test]
    fn kronrod_exact_for_degree_31() {
        let f = re(|x: f64| 32.0 * x.powi(31) + 7.0 * x.powi(30));
        let (v, _, _) = gk21(&f, 0.0, 1.0);
        assert!((v.re - (1.0 + 7.0 / 31.0)).abs() < 1e-14);
    }

    #[test]
    fn gauss_part_weights_sum_to_two() {
        let s: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((s - 2.0).abs() < 1e-14);
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((k - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = re(|x: f64| 1.0 / (1e-4 + x * x));
        let q = adaptive(&f, -1.0, 1.0, Tol::rel(1e-12));
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(q.converged);
        assert!((q.value.re - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-1/2}(1-x)^{-0.9} dx = B(1/2, 1/10)
        let f = |_x: f64, da: f64, db: f64| C64::new(da.powf(-0.5) * db.powf(-0.9), 0.0);
        let q = tanh_sinh(&f, 0.0, 1.0, Tol::rel(1e-12));
        let b = statrs::function::beta::beta(0.5, 0.1);
        assert!((q.value.re - b).abs() < 1e-9 * b, "{} {}", q.value.re, b);
    }

    #[test]
    fn half_line_exponential() {
        let f = re(|x: f64| (-x).exp());
        let q = half_line(&f, 0.0, Tol::rel(1e-13));
        assert!((q.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_tail_converges() {
        // ∫_0^∞ sin x / x dx = π/2
        let f = re(|x: f64| if x == 0.0 { 1.0 } else { x.sin() / x });
        let q = oscillatory_half_line(&f, 0.0, std::f64::consts::PI, Tol::rel(1e-11));
        assert!(q.converged);
        assert!((q.value.re - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn wynn_on_alternating_series() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 0..20 {
            acc += (-1.0f64).powi(k) / (k as f64 + 1.0);
            s.push(C64::new(acc, 0.0));
        }
        assert!((wynn_epsilon(&s).re - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(20);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((s - 2.0 / 39.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum_real(&v), 499500.0);
    }
}
