//! Signed-permutation Weyl groups, roots, Satake parameters, Hecke symbols
//! and the character theory of the dihedral groups D_{2(p+1)}.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::rpow;

/// (σ, v) ∈ S_n ⋉ (ℤ/2)ⁿ, stored 0-based: `sigma[j]` is σ(j).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    pub sigma: Vec<usize>,
    pub signs: Vec<u8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { sigma: (0..n).collect(), signs: vec![0; n] }
    }

    pub fn new(sigma: Vec<usize>, signs: Vec<u8>) -> Result<Self> {
        let n = sigma.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: signs.len() });
        }
        let set: BTreeSet<usize> = sigma.iter().copied().collect();
        if set.len() != n || set.iter().any(|&x| x >= n) {
            return Err(Error::DomainError("sigma is not a permutation".into()));
        }
        Ok(SignedPermutation { sigma, signs: signs.into_iter().map(|s| s & 1).collect() })
    }

    /// Transposition of positions `i` and `j`, no sign changes.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = SignedPermutation::identity(n);
        w.sigma.swap(i, j);
        w
    }

    /// Sign change in coordinate `i`.
    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut w = SignedPermutation::identity(n);
        w.signs[i] = 1;
        w
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// (σ,v)(σ′,v′) = (σσ′, v^{σ′} + v′) with (v^{σ′})_i = v_{σ′(i)}.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len();
        let sigma = (0..n).map(|i| self.sigma[other.sigma[i]]).collect();
        let signs = (0..n).map(|i| (self.signs[other.sigma[i]] + other.signs[i]) & 1).collect();
        SignedPermutation { sigma, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.len();
        let mut inv = vec![0; n];
        for i in 0..n {
            inv[self.sigma[i]] = i;
        }
        // v″ with v^{σ⁻¹} + v″ = 0
        let signs = (0..n).map(|i| self.signs[inv[i]]).collect();
        SignedPermutation { sigma: inv, signs }
    }

    pub fn sign_parity(&self) -> u8 {
        self.signs.iter().fold(0, |a, &b| (a + b) & 1)
    }

    /// w η_j = (−1)^{v_j} η_{σ(j)} on a character Σ c_j η_j.
    pub fn act_on_character(&self, c: &[i32]) -> Vec<i32> {
        let mut out = vec![0; c.len()];
        for (j, &cj) in c.iter().enumerate() {
            let s = if self.signs[j] == 1 { -1 } else { 1 };
            out[self.sigma[j]] += s * cj;
        }
        out
    }
}

/// All 2ⁿ·n! elements; with `even_only`, the index-2 subgroup of even sign
/// changes.
pub fn weyl_group(n: usize, even_only: bool) -> Vec<SignedPermutation> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in perms {
        for mask in 0u32..(1 << n) {
            let signs: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
            let w = SignedPermutation { sigma: p.clone(), signs };
            if !even_only || w.sign_parity() == 0 {
                out.push(w);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub p: u64,
    pub ell: usize,
    pub n0: usize,
}

impl GroupSpec {
    pub fn new(p: u64, ell: usize, n0: usize) -> Self {
        GroupSpec { p, ell, n0 }
    }

    pub fn dim(&self) -> usize {
        2 * self.ell + self.n0
    }

    pub fn weyl_order(&self) -> u64 {
        (1..=self.ell as u64).product::<u64>() << self.ell
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / (self.p as f64).ln()
    }
}

// ------------------------------------------------------------ Satake points

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatakePoint {
    pub p: u64,
    pub nu: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_rep: Option<DihedralRep>,
}

pub const TEMPERED_TOL: f64 = 1e-12;

fn reduce_im(im: f64, period: f64) -> f64 {
    let r = im.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

impl SatakePoint {
    pub fn new(p: u64, nu: Vec<C64>) -> Self {
        let period = 2.0 * PI / (p as f64).ln();
        let nu = nu.into_iter().map(|z| C64::new(z.re, reduce_im(z.im, period))).collect();
        SatakePoint { p, nu, e_rep: None }
    }

    /// ν_j = i t_j.
    pub fn tempered(p: u64, t: &[f64]) -> Self {
        SatakePoint::new(p, t.iter().map(|&x| C64::new(0.0, x)).collect())
    }

    pub fn zero(p: u64, ell: usize) -> Self {
        SatakePoint::new(p, vec![C64::new(0.0, 0.0); ell])
    }

    pub fn ell(&self) -> usize {
        self.nu.len()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / (self.p as f64).ln()
    }

    pub fn is_tempered(&self) -> bool {
        self.nu.iter().all(|z| z.re.abs() <= TEMPERED_TOL)
    }

    /// p^{ν_j}.
    pub fn exps(&self) -> Vec<C64> {
        self.nu.iter().map(|&z| rpow(self.p as f64, z)).collect()
    }
}

/// (w ν)_j = (−1)^{v_j} ν_{σ(j)}.
pub fn weyl_act(w: &SignedPermutation, nu: &SatakePoint) -> Result<SatakePoint> {
    if w.len() != nu.ell() {
        return Err(Error::DimensionMismatch { expected: nu.ell(), got: w.len() });
    }
    let v: Vec<C64> = (0..w.len())
        .map(|j| {
            let z = nu.nu[w.sigma[j]];
            if w.signs[j] == 1 {
                -z
            } else {
                z
            }
        })
        .collect();
    let mut out = SatakePoint::new(nu.p, v);
    out.e_rep = nu.e_rep.clone();
    Ok(out)
}

fn cmp_tol(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= TEMPERED_TOL {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn cmp_points(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = cmp_tol(x.re, y.re).then(cmp_tol(x.im, y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Lexicographically least element of the Weyl orbit, comparing (Re, Im)
/// with tolerance. `even_only` selects the index-2 subgroup and only takes
/// effect for n0 = 0.
pub fn weyl_orbit_canonical(nu: &SatakePoint, spec: &GroupSpec, even_only: bool) -> SatakePoint {
    let even = even_only && spec.n0 == 0;
    let mut best = nu.clone();
    for w in weyl_group(nu.ell(), even) {
        let cand = weyl_act(&w, nu).expect("lengths agree");
        if cmp_points(&cand.nu, &best.nu) == Ordering::Less {
            best = cand;
        }
    }
    best
}

pub fn orbit_eq(a: &SatakePoint, b: &SatakePoint, spec: &GroupSpec) -> bool {
    let (ca, cb) = (weyl_orbit_canonical(a, spec, false), weyl_orbit_canonical(b, spec, false));
    ca.ell() == cb.ell() && cmp_points(&ca.nu, &cb.nu) == Ordering::Equal
}

// ------------------------------------------------------------ roots

/// A root Σ c_j η_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn eval(&self, nu: &[C64]) -> C64 {
        self.0.iter().zip(nu).map(|(&c, &z)| z * c as f64).sum()
    }

    /// Positive for the upper-triangular Borel: first nonzero coefficient > 0.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).map_or(false, |&c| c > 0)
    }

    fn pm(n: usize, i: usize, j: usize, s: i32) -> Root {
        let mut c = vec![0; n];
        c[i] = 1;
        c[j] = s;
        Root(c)
    }

    fn unit(n: usize, i: usize, k: i32) -> Root {
        let mut c = vec![0; n];
        c[i] = k;
        Root(c)
    }
}

/// η_i ± η_j (i < j) for i, j in `range`, plus η_i when `short`.
fn positive_system(n: usize, lo: usize, short: bool) -> Vec<Root> {
    let mut out = Vec::new();
    for i in lo..n {
        for j in i + 1..n {
            out.push(Root::pm(n, i, j, -1));
            out.push(Root::pm(n, i, j, 1));
        }
        if short {
            out.push(Root::unit(n, i, 1));
        }
    }
    out
}

/// {η_i ± η_j : i < j} together with {η_i} when n0 > 0.
pub fn positive_roots(spec: &GroupSpec) -> Vec<Root> {
    positive_system(spec.ell, 0, spec.n0 > 0)
}

/// Full root system Σ(T, G) of rank `n`.
pub fn all_roots(n: usize, short: bool) -> Vec<Root> {
    let pos = positive_system(n, 0, short);
    let mut out = pos.clone();
    out.extend(pos.iter().map(|r| Root(r.0.iter().map(|c| -c).collect())));
    out
}

/// Positive roots of the Levi M (indices 2, …, n).
pub fn levi_positive_roots(n: usize, short: bool) -> Vec<Root> {
    positive_system(n, 1, short)
}

/// w₁⁺ = (e,0), w₁⁻ = (e,(1,0,…,0)), w₂⁺ = ((12),0).
pub fn bruhat_double_coset_reps(ell_total: usize) -> Result<Vec<SignedPermutation>> {
    if ell_total < 2 {
        return Err(Error::TooSmall { min: 2, got: ell_total });
    }
    let n = ell_total;
    Ok(vec![
        SignedPermutation::identity(n),
        SignedPermutation::sign_flip(n, 0),
        SignedPermutation::transposition(n, 0, 1),
    ])
}

/// Both w and w⁻¹ send the positive roots of M to positive roots of G.
pub fn is_minimal_double_coset_rep(w: &SignedPermutation, short: bool) -> bool {
    let winv = w.inverse();
    levi_positive_roots(w.len(), short)
        .iter()
        .all(|a| Root(w.act_on_character(&a.0)).is_positive() && Root(winv.act_on_character(&a.0)).is_positive())
}

/// W^M = {w : w η_1 = η_1}.
pub fn levi_weyl_group(n: usize) -> Vec<SignedPermutation> {
    weyl_group(n, false).into_iter().filter(|w| w.sigma[0] == 0 && w.signs[0] == 0).collect()
}

/// Double cosets W^M \ W / W^M by exhaustive enumeration.
pub fn double_cosets(n: usize) -> Vec<BTreeSet<SignedPermutation>> {
    let wm = levi_weyl_group(n);
    let mut seen: BTreeSet<SignedPermutation> = BTreeSet::new();
    let mut out = Vec::new();
    for w in weyl_group(n, false) {
        if seen.contains(&w) {
            continue;
        }
        let mut cls = BTreeSet::new();
        for a in &wm {
            let aw = a.mul(&w);
            for b in &wm {
                cls.insert(aw.mul(b));
            }
        }
        seen.extend(cls.iter().cloned());
        out.push(cls);
    }
    out
}

// ------------------------------------------------------------ Hecke symbols

/// A Weyl-invariant Laurent polynomial in X_j = p^{ν_j}, stored as orbit
/// sums keyed by the dominant exponent (entries ≥ 0, non-increasing).
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeSymbol {
    pub p: u64,
    pub ell: usize,
    pub orbits: BTreeMap<Vec<i32>, C64>,
}

pub fn dominant(e: &[i32]) -> Vec<i32> {
    let mut d: Vec<i32> = e.iter().map(|x| x.abs()).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Distinct elements of the signed-permutation orbit of an exponent vector.
pub fn exponent_orbit(e: &[i32]) -> Vec<Vec<i32>> {
    // distinct permutations of |e| in lexicographic order, then every sign
    // choice on the nonzero entries; the same set as W·e
    let mut perm: Vec<i32> = e.iter().map(|x| x.abs()).collect();
    perm.sort_unstable();
    let mut set = BTreeSet::new();
    loop {
        let nz: Vec<usize> = (0..perm.len()).filter(|&i| perm[i] != 0).collect();
        for mask in 0u32..1 << nz.len() {
            let mut v = perm.clone();
            for (b, &i) in nz.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v[i] = -v[i];
                }
            }
            set.insert(v);
        }
        // next permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    set.into_iter().collect()
}

#[derive(Serialize, Deserialize)]
struct HeckeJson {
    p: u64,
    ell: usize,
    orbits: Vec<OrbitJson>,
}

#[derive(Serialize, Deserialize)]
struct OrbitJson {
    exp: Vec<i32>,
    coeff: [f64; 2],
}

impl HeckeSymbol {
    pub fn zero(p: u64, ell: usize) -> Self {
        HeckeSymbol { p, ell, orbits: BTreeMap::new() }
    }

    pub fn constant(p: u64, ell: usize, c: C64) -> Self {
        let mut h = HeckeSymbol::zero(p, ell);
        h.add_orbit(&vec![0; ell], c).unwrap();
        h
    }

    /// Adds `coeff · Σ_{e ∈ W·exp} X^e`.
    pub fn add_orbit(&mut self, exp: &[i32], coeff: C64) -> Result<()> {
        if exp.len() != self.ell {
            return Err(Error::DimensionMismatch { expected: self.ell, got: exp.len() });
        }
        *self.orbits.entry(dominant(exp)).or_insert(C64::new(0.0, 0.0)) += coeff;
        Ok(())
    }

    /// Builds a symbol from explicit monomials, rejecting non-invariant input.
    pub fn from_monomials(p: u64, ell: usize, terms: &[(Vec<i32>, C64)]) -> Result<Self> {
        let mut mono: BTreeMap<Vec<i32>, C64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != ell {
                return Err(Error::DimensionMismatch { expected: ell, got: e.len() });
            }
            *mono.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        let mut h = HeckeSymbol::zero(p, ell);
        let mut done = BTreeSet::new();
        for (e, c) in &mono {
            let d = dominant(e);
            if !done.insert(d.clone()) {
                continue;
            }
            for f in exponent_orbit(&d) {
                let cf = mono.get(&f).copied().unwrap_or_default();
                if (cf - c).norm() > 1e-12 * (1.0 + c.norm()) {
                    return Err(Error::DomainError(format!("monomial {f:?} breaks Weyl invariance")));
                }
            }
            h.orbits.insert(d, *c);
        }
        Ok(h)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: HeckeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        HeckeSymbol::from_value_parts(j)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self> {
        let j: HeckeJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        HeckeSymbol::from_value_parts(j)
    }

    fn from_value_parts(j: HeckeJson) -> Result<Self> {
        let mut h = HeckeSymbol::zero(j.p, j.ell);
        for o in j.orbits {
            h.add_orbit(&o.exp, C64::new(o.coeff[0], o.coeff[1]))?;
        }
        Ok(h)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let orbits: Vec<OrbitJson> =
            self.orbits.iter().map(|(e, c)| OrbitJson { exp: e.clone(), coeff: [c.re, c.im] }).collect();
        serde_json::to_value(HeckeJson { p: self.p, ell: self.ell, orbits }).unwrap()
    }

    /// Largest |coefficient| times orbit size summed: a bound for
    /// sup |φ̂| on the tempered torus.
    pub fn sup_bound(&self) -> f64 {
        self.orbits.iter().map(|(e, c)| c.norm() * exponent_orbit(e).len() as f64).sum()
    }
}

/// Σ_orbits coeff · Σ_{e ∈ orbit} ∏ (p^{ν_j})^{e_j}.
pub fn eval_hecke(sym: &HeckeSymbol, nu: &SatakePoint) -> Result<C64> {
    if nu.ell() != sym.ell {
        return Err(Error::DimensionMismatch { expected: sym.ell, got: nu.ell() });
    }
    let logp = (sym.p as f64).ln();
    let mut acc = C64::new(0.0, 0.0);
    for (d, c) in &sym.orbits {
        let mut s = C64::new(0.0, 0.0);
        for e in exponent_orbit(d) {
            let z: C64 = e.iter().zip(&nu.nu).map(|(&k, &v)| v * k as f64).sum();
            s += (z * logp).exp();
        }
        acc += c * s;
    }
    Ok(acc)
}

// ------------------------------------------------------------ dihedral groups

/// Linear characters other than the trivial one: images of (a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignVariant {
    /// a ↦ 1, b ↦ −1
    B,
    /// a ↦ −1, b ↦ 1 (needs p + 1 even)
    A,
    /// a ↦ −1, b ↦ −1 (needs p + 1 even)
    AB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DihedralKind {
    Trivial,
    Sign(SignVariant),
    /// aʲ ↦ rotation by 2πjν/(p+1), 1 ≤ ν ≤ p, ν ≠ (p+1)/2.
    TwoDim(u64),
}

/// A representation of D_{2(p+1)} = ⟨a, b | a^{p+1} = b² = 1, bab⁻¹ = a⁻¹⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralRep {
    pub p: u64,
    pub kind: DihedralKind,
}

/// aʲ (b = false) or aʲb (b = true).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElem {
    pub j: u64,
    pub b: bool,
}

impl DihedralElem {
    pub fn new(j: u64, b: bool) -> Self {
        DihedralElem { j, b }
    }
}

impl DihedralRep {
    pub fn new(p: u64, kind: DihedralKind) -> Result<Self> {
        let n = p + 1;
        match kind {
            DihedralKind::TwoDim(nu) => {
                if nu < 1 || nu > p || 2 * nu == n {
                    return Err(Error::InvalidNu { p, nu });
                }
            }
            DihedralKind::Sign(SignVariant::A | SignVariant::AB) if n % 2 == 1 => {
                return Err(Error::DomainError("a ↦ −1 needs p + 1 even".into()));
            }
            _ => {}
        }
        Ok(DihedralRep { p, kind })
    }

    pub fn dim(&self) -> u64 {
        match self.kind {
            DihedralKind::TwoDim(_) => 2,
            _ => 1,
        }
    }

    /// TwoDim(ν) ≅ TwoDim(p+1−ν); this picks ν ≤ (p+1)/2.
    pub fn normalized(&self) -> Self {
        match self.kind {
            DihedralKind::TwoDim(nu) if 2 * nu > self.p + 1 => {
                DihedralRep { p: self.p, kind: DihedralKind::TwoDim(self.p + 1 - nu) }
            }
            _ => *self,
        }
    }
}

pub fn dihedral_order(p: u64) -> u64 {
    2 * (p + 1)
}

pub fn dihedral_elements(p: u64) -> Vec<DihedralElem> {
    let n = p + 1;
    (0..n).flat_map(|j| [DihedralElem::new(j, false), DihedralElem::new(j, true)]).collect()
}

/// (aʲb^x)(aᵏb^y) = a^{j ± k} b^{x+y}.
pub fn dihedral_mul(p: u64, g: DihedralElem, h: DihedralElem) -> DihedralElem {
    let n = p + 1;
    let k = if g.b { (n - h.j % n) % n } else { h.j % n };
    DihedralElem::new((g.j + k) % n, g.b ^ h.b)
}

pub fn is_two_torsion(p: u64, g: DihedralElem) -> bool {
    let e = dihedral_mul(p, g, g);
    e.j == 0 && !e.b
}

pub fn two_torsion_elements(p: u64) -> Vec<DihedralElem> {
    dihedral_elements(p).into_iter().filter(|&g| is_two_torsion(p, g)).collect()
}

/// Complete list of irreducible representations up to isomorphism.
pub fn irreducible_reps(p: u64) -> Vec<DihedralRep> {
    let n = p + 1;
    let mut out = vec![DihedralRep { p, kind: DihedralKind::Trivial }, DihedralRep { p, kind: DihedralKind::Sign(SignVariant::B) }];
    if n % 2 == 0 {
        out.push(DihedralRep { p, kind: DihedralKind::Sign(SignVariant::A) });
        out.push(DihedralRep { p, kind: DihedralKind::Sign(SignVariant::AB) });
    }
    for nu in 1..n {
        if 2 * nu < n {
            out.push(DihedralRep { p, kind: DihedralKind::TwoDim(nu) });
        }
    }
    out
}

pub fn dihedral_char(rep: &DihedralRep, g: DihedralElem) -> Result<f64> {
    let n = rep.p + 1;
    let j = g.j % n;
    let par = |x: u64| if x % 2 == 0 { 1.0 } else { -1.0 };
    Ok(match rep.kind {
        DihedralKind::Trivial => 1.0,
        DihedralKind::Sign(v) => {
            let (sa, sb) = match v {
                SignVariant::B => (1.0, -1.0),
                SignVariant::A => (par(j), 1.0),
                SignVariant::AB => (par(j), -1.0),
            };
            if g.b {
                sa * sb
            } else {
                sa
            }
        }
        DihedralKind::TwoDim(nu) => {
            if nu < 1 || nu > rep.p || 2 * nu == n {
                return Err(Error::InvalidNu { p: rep.p, nu });
            }
            if g.b {
                0.0
            } else if 2 * j == n {
                // exact on the central element
                2.0 * par(nu)
            } else if j == 0 {
                2.0
            } else {
                2.0 * (2.0 * PI * (j * nu) as f64 / n as f64).cos()
            }
        }
    })
}

/// ∏_p tr ρ_p(h_p) / dim ρ_p over the supplied local data.
pub fn chi_u(reps: &[(DihedralRep, DihedralElem)]) -> Result<i32> {
    let mut v = 1.0;
    for (rep, h) in reps {
        if !is_two_torsion(rep.p, *h) {
            return Err(Error::NotTwoTorsion);
        }
        v *= dihedral_char(rep, *h)? / rep.dim() as f64;
    }
    let r = v.round();
    assert!((v - r).abs() < 1e-12 && r.abs() <= 1.0, "character ratio {v} of an involution is not in {{-1,0,1}}");
    Ok(r as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_examples() {
        let nu = SatakePoint::new(3, vec![C64::new(0.2, 0.5), C64::new(-0.1, 1.0)]);
        assert_eq!(weyl_act(&SignedPermutation::identity(2), &nu).unwrap(), nu);
        let sw = weyl_act(&SignedPermutation::transposition(2, 0, 1), &nu).unwrap();
        assert_eq!(sw.nu, vec![nu.nu[1], nu.nu[0]]);
        let fl = weyl_act(&SignedPermutation::sign_flip(2, 0), &nu).unwrap();
        let per = nu.period();
        assert!((fl.nu[0] - C64::new(-0.2, per - 0.5)).norm() < 1e-14);
        assert_eq!(fl.nu[1], nu.nu[1]);
    }

    #[test]
    fn right_action_law() {
        let nu = SatakePoint::new(5, vec![C64::new(0.1, 0.2), C64::new(0.3, 0.4), C64::new(-0.5, 0.6)]);
        let g = weyl_group(3, false);
        for w in g.iter().step_by(7) {
            for w2 in g.iter().step_by(11) {
                let lhs = weyl_act(&w.mul(w2), &nu).unwrap();
                let rhs = weyl_act(w2, &weyl_act(w, &nu).unwrap()).unwrap();
                assert!(lhs.nu.iter().zip(&rhs.nu).all(|(a, b)| (a - b).norm() < 1e-12));
            }
        }
    }

    #[test]
    fn canonical_example() {
        let spec = GroupSpec::new(3, 2, 0);
        let nu = SatakePoint::new(3, vec![C64::new(0.3, 0.0), C64::new(-0.1, 0.0)]);
        let c = weyl_orbit_canonical(&nu, &spec, false);
        assert!((c.nu[0].re + 0.3).abs() < 1e-15 && (c.nu[1].re + 0.1).abs() < 1e-15);
        assert_eq!(weyl_orbit_canonical(&SatakePoint::zero(3, 2), &spec, false), SatakePoint::zero(3, 2));
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(weyl_group(3, false).len(), 48);
        assert_eq!(weyl_group(3, true).len(), 24);
        assert_eq!(GroupSpec::new(2, 3, 1).weyl_order(), 48);
    }

    #[test]
    fn bruhat_reps_are_minimal_and_distinct() {
        for n in 2..=4 {
            let reps = bruhat_double_coset_reps(n).unwrap();
            let cosets = double_cosets(n);
            assert_eq!(cosets.len(), 3);
            for short in [false, true] {
                assert!(reps.iter().all(|w| is_minimal_double_coset_rep(w, short)));
            }
            let idx: BTreeSet<usize> =
                reps.iter().map(|w| cosets.iter().position(|c| c.contains(w)).unwrap()).collect();
            assert_eq!(idx.len(), 3);
        }
        assert_eq!(bruhat_double_coset_reps(1), Err(Error::TooSmall { min: 2, got: 1 }));
    }

    #[test]
    fn root_counts() {
        assert_eq!(positive_roots(&GroupSpec::new(2, 2, 0)).len(), 2);
        assert_eq!(positive_roots(&GroupSpec::new(2, 2, 1)).len(), 4);
        assert!(positive_roots(&GroupSpec::new(2, 1, 0)).is_empty());
        assert_eq!(positive_roots(&GroupSpec::new(2, 3, 2)).len(), 9);
    }

    #[test]
    fn hecke_cosine() {
        let mut h = HeckeSymbol::zero(5, 1);
        h.add_orbit(&[1], C64::new(1.0, 0.0)).unwrap();
        let theta = 0.7;
        let nu = SatakePoint::tempered(5, &[theta / 5f64.ln()]);
        let v = eval_hecke(&h, &nu).unwrap();
        assert!((v - C64::new(2.0 * theta.cos(), 0.0)).norm() < 1e-14);
        let one = HeckeSymbol::constant(5, 2, C64::new(1.0, 0.0));
        assert_eq!(eval_hecke(&one, &SatakePoint::tempered(5, &[0.3, 0.1])).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn hecke_monomials_and_json() {
        let t = |e: Vec<i32>| (e, C64::new(2.0, 0.0));
        let h = HeckeSymbol::from_monomials(3, 2, &[t(vec![1, 0]), t(vec![-1, 0]), t(vec![0, 1]), t(vec![0, -1])]).unwrap();
        assert_eq!(h.orbits.len(), 1);
        assert!(HeckeSymbol::from_monomials(3, 2, &[t(vec![1, 0])]).is_err());
        let back = HeckeSymbol::from_json(&h.to_json().to_string()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn dihedral_examples() {
        let r = DihedralRep::new(5, DihedralKind::TwoDim(2)).unwrap();
        assert_eq!(dihedral_char(&r, DihedralElem::new(0, false)).unwrap(), 2.0);
        assert_eq!(dihedral_char(&r, DihedralElem::new(4, true)).unwrap(), 0.0);
        assert_eq!(dihedral_char(&r, DihedralElem::new(3, false)).unwrap(), 2.0);
        let r3 = DihedralRep { p: 5, kind: DihedralKind::TwoDim(1) };
        assert_eq!(dihedral_char(&r3, DihedralElem::new(3, false)).unwrap(), -2.0);
        assert_eq!(DihedralRep::new(5, DihedralKind::TwoDim(3)), Err(Error::InvalidNu { p: 5, nu: 3 }));
        assert_eq!(DihedralRep::new(5, DihedralKind::TwoDim(6)), Err(Error::InvalidNu { p: 5, nu: 6 }));
        assert!(DihedralRep::new(2, DihedralKind::Sign(SignVariant::A)).is_err());
    }

    #[test]
    fn orbit_matches_group_action() {
        for e in [vec![0, 0, 0], vec![2, 0, 1], vec![1, 1, 0], vec![3, -3, 2], vec![0, 2], vec![1, 2, 2, 0]] {
            let by_group: BTreeSet<Vec<i32>> = weyl_group(e.len(), false).iter().map(|w| w.act_on_character(&e)).collect();
            assert_eq!(exponent_orbit(&e), by_group.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn chi_u_examples() {
        let triv = DihedralRep { p: 3, kind: DihedralKind::Trivial };
        assert_eq!(chi_u(&[(triv, DihedralElem::new(2, false))]).unwrap(), 1);
        let two = DihedralRep { p: 3, kind: DihedralKind::TwoDim(1) };
        assert_eq!(chi_u(&[(triv, DihedralElem::new(0, false)), (two, DihedralElem::new(1, true))]).unwrap(), 0);
        let two5 = DihedralRep { p: 5, kind: DihedralKind::TwoDim(2) };
        assert_eq!(chi_u(&[(two5, DihedralElem::new(3, false))]).unwrap(), 1);
        assert_eq!(chi_u(&[(two5, DihedralElem::new(1, false))]), Err(Error::NotTwoTorsion));
    }
}
