//! Exact arithmetic of even integral quadratic lattices given by Gram
//! matrices: discriminants, Smith forms, duals, local invariants at a prime,
//! maximality and the orthogonal complement of a dual vector.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<BigInt>>;

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// An even integral lattice: symmetric, nonsingular, even diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: Mat,
    pub basis_labels: Option<Vec<String>>,
}

/// A vector in rational coordinates with respect to a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub coords: Vec<BigRational>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LatticeVector { coords: v.iter().map(|&x| rat(int(x))).collect() }
    }

    /// Parses strings such as `"3/2"` or `"-4"`.
    pub fn parse(v: &[&str]) -> Result<Self> {
        let coords = v
            .iter()
            .map(|s| BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeVector { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut c = vec![BigRational::zero(); n];
        c[i] = BigRational::one();
        LatticeVector { coords: c }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        LatticeVector { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    gram: Vec<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_labels: Option<Vec<String>>,
}

fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer Gram entry {n}"))),
        serde_json::Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        other => Err(Error::Parse(format!("bad Gram entry {other}"))),
    }
}

impl GramLattice {
    pub fn new(gram: Mat) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::TooSmall { min: 1, got: 0 });
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
        }
        for i in 0..n {
            if gram[i][i].is_odd() {
                return Err(Error::NotEvenIntegral);
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotEvenIntegral);
                }
            }
        }
        if det(&gram).is_zero() {
            return Err(Error::SingularGram);
        }
        Ok(GramLattice { gram, basis_labels: None })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        GramLattice::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    /// `k · I_n`.
    pub fn scalar(n: usize, k: i64) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect()).collect();
        GramLattice::from_rows(&rows)
    }

    pub fn hyperbolic() -> Self {
        GramLattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let gram = j
            .gram
            .iter()
            .map(|r| r.iter().map(json_int).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut l = GramLattice::new(gram)?;
        l.basis_labels = j.basis_labels;
        Ok(l)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gram: Vec<Vec<serde_json::Value>> = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x.to_i64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        let mut o = serde_json::json!({ "gram": gram });
        if let Some(l) = &self.basis_labels {
            o["basis_labels"] = serde_json::json!(l);
        }
        o
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        det(&self.gram)
    }

    /// ⟨x, y⟩ = xᵀ G y.
    pub fn pair(&self, x: &LatticeVector, y: &LatticeVector) -> BigRational {
        let n = self.rank();
        let mut s = BigRational::zero();
        for i in 0..n {
            if x.coords[i].is_zero() {
                continue;
            }
            let mut t = BigRational::zero();
            for j in 0..n {
                if !y.coords[j].is_zero() {
                    t += &y.coords[j] * rat(self.gram[i][j].clone());
                }
            }
            s += &x.coords[i] * t;
        }
        s
    }

    /// Q[x] = ⟨x, x⟩.
    pub fn norm(&self, x: &LatticeVector) -> BigRational {
        self.pair(x, x)
    }

    /// Dual coordinates `G x`: the values ⟨x, e_i⟩ on the basis.
    pub fn dual_coords(&self, x: &LatticeVector) -> Vec<BigRational> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).fold(BigRational::zero(), |acc, j| acc + &x.coords[j] * rat(self.gram[i][j].clone())))
            .collect()
    }

    pub fn in_dual(&self, x: &LatticeVector) -> bool {
        self.dual_coords(x).iter().all(|c| c.is_integer())
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (a, b) = (self.rank(), other.rank());
        let mut g = vec![vec![BigInt::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        GramLattice { gram: g, basis_labels: None }
    }

    /// Gram matrix of the lattice spanned by the columns of `basis`
    /// (rational coordinates), i.e. Bᵀ G B.
    pub fn sublattice(&self, basis: &[LatticeVector]) -> Result<GramLattice> {
        let k = basis.len();
        let mut g = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            for j in 0..=i {
                let v = self.pair(&basis[i], &basis[j]);
                if !v.is_integer() {
                    return Err(Error::NotEvenIntegral);
                }
                g[i][j] = v.to_integer();
                g[j][i] = g[i][j].clone();
            }
        }
        GramLattice::new(g)
    }
}

// ------------------------------------------------------------ integer linear algebra

/// Bareiss fraction-free determinant.
pub fn det(m: &Mat) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Smith normal form `U · M · V = D` with unimodular `U`, `V` and
/// `D = diag(d_1 | d_2 | …)`, `d_i ≥ 0`.
pub struct Smith {
    pub u: Mat,
    pub v: Mat,
    pub d: Vec<BigInt>,
}

pub fn smith(m: &Mat) -> Smith {
    let n = m.len();
    let mut a = m.clone();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // remaining block is zero
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in 0..n {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in 0..n {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                    let s = &q * &v[i][t];
                    v[i][j] -= s;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // the pivot must divide the whole trailing block
            let mut fix = None;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in 0..n {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                        let s = u[i][j].clone();
                        u[t][j] += s;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -a[t][j].clone();
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    Smith { u, v, d }
}

/// |det G|.
pub fn discriminant(l: &GramLattice) -> BigInt {
    l.det().abs()
}

/// Invariant factors of 𝓛*/𝓛 that exceed 1.
pub fn discriminant_group(l: &GramLattice) -> Vec<BigInt> {
    smith(&l.gram).d.into_iter().filter(|d| !d.is_one()).collect()
}

// ------------------------------------------------------------ p-adic helpers

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(x: &BigRational, p: u64) -> i64 {
    val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64
}

/// Prime divisors of `n` by trial division; fine for lattice discriminants.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor exceeds u64"));
    }
    out
}

/// A nonzero element of ℚ_p^× up to squares: `p^v · u`, stored as `v mod 2`
/// and the unit `u` as an integer prime to `p`.
#[derive(Clone, Debug)]
struct SqClass {
    v: u32,
    u: BigInt,
}

fn sq_class(x: &BigRational, p: u64) -> SqClass {
    // x ~ numer·denom up to squares
    let mut n = x.numer() * x.denom();
    let bp = BigInt::from(p);
    let mut v = 0;
    while (&n % &bp).is_zero() {
        n /= &bp;
        v += 1;
    }
    SqClass { v: v % 2, u: n }
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    // Euler's criterion
    let mut e = (p - 1) / 2;
    let mut b = r as u128;
    let m = p as u128;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().unwrap()
}

/// Hilbert symbol (a, b)_p.
fn hilbert(a: &SqClass, b: &SqClass, p: u64) -> i32 {
    if p == 2 {
        let (ua, ub) = (mod8(&a.u), mod8(&b.u));
        let eps = |u: u64| ((u - 1) / 2) % 2;
        let omega = |u: u64| ((u * u - 1) / 8) % 2;
        let e = eps(ua) * eps(ub) + a.v as u64 * omega(ub) + b.v as u64 * omega(ua);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1;
        if a.v == 1 && b.v == 1 && (p - 1) / 2 % 2 == 1 {
            s = -s;
        }
        if b.v == 1 {
            s *= legendre(&a.u, p);
        }
        if a.v == 1 {
            s *= legendre(&b.u, p);
        }
        s
    }
}

fn sq_mul(a: &SqClass, b: &SqClass, p: u64) -> SqClass {
    sq_class(&rat(&a.u * &b.u * BigInt::from(p).pow(a.v + b.v)), p)
}

fn sq_neg(a: &SqClass) -> SqClass {
    SqClass { v: a.v, u: -a.u.clone() }
}

fn is_square(a: &SqClass, p: u64) -> bool {
    if a.v != 0 {
        return false;
    }
    if p == 2 {
        mod8(&a.u) == 1
    } else {
        legendre(&a.u, p) == 1
    }
}

fn minus_one() -> SqClass {
    SqClass { v: 0, u: int(-1) }
}

/// Diagonalizes the Gram matrix over ℚ: returns a_1, …, a_n with
/// Q ≅ ⟨a_1, …, a_n⟩.
pub fn diagonalize(g: &Mat) -> Vec<BigRational> {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g.iter().map(|r| r.iter().map(|x| rat(x.clone())).collect()).collect();
    let mut out = Vec::with_capacity(n);
    let mut live: Vec<usize> = (0..n).collect();
    while !live.is_empty() {
        let piv = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                // all remaining diagonal entries vanish; x_i += x_j creates 2a_ij
                let (i, j) = live
                    .iter()
                    .flat_map(|&i| live.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                    .expect("nonsingular form");
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += t;
                }
                i
            }
        };
        let d = a[piv][piv].clone();
        live.retain(|&x| x != piv);
        for &i in &live {
            let f = &a[i][piv] / &d;
            for &j in &live {
                let t = &f * &a[piv][j];
                a[i][j] -= t;
            }
        }
        for &i in &live {
            a[i][piv] = BigRational::zero();
            a[piv][i] = BigRational::zero();
        }
        out.push(d);
    }
    out
}

/// Witt index and anisotropic dimension of Q over ℚ_p from (dimension,
/// discriminant class, Hasse invariant).
pub fn witt_decomposition(l: &GramLattice, p: u64) -> Result<(usize, usize)> {
    check_prime(p)?;
    let diag = diagonalize(&l.gram);
    let cls: Vec<SqClass> = diag.iter().map(|x| sq_class(x, p)).collect();
    let mut d = SqClass { v: 0, u: BigInt::one() };
    for c in &cls {
        d = sq_mul(&d, c, p);
    }
    let mut eps = 1;
    for i in 0..cls.len() {
        for j in i + 1..cls.len() {
            eps *= hilbert(&cls[i], &cls[j], p);
        }
    }
    let mut n = cls.len();
    let mut ell = 0;
    loop {
        let isotropic = match n {
            0 | 1 => false,
            2 => is_square(&sq_neg(&d), p),
            3 => hilbert(&minus_one(), &sq_neg(&d), p) == eps,
            4 => !(is_square(&d, p) && eps == -hilbert(&minus_one(), &minus_one(), p)),
            _ => true,
        };
        if !isotropic {
            break;
        }
        // split off a hyperbolic plane
        ell += 1;
        n -= 2;
        let nd = sq_neg(&d);
        eps *= hilbert(&minus_one(), &nd, p);
        d = nd;
    }
    Ok((ell, n))
}

// ------------------------------------------------------------ discriminant group at p

/// Generators of the p-part of 𝓛*/𝓛 with their orders p^{k_i}, from the
/// Smith form: with U G V = D the dual lattice is spanned by V e_i / d_i.
pub fn p_part_generators(l: &GramLattice, p: u64) -> Vec<(LatticeVector, u32)> {
    let s = smith(&l.gram);
    let n = l.rank();
    let mut out = Vec::new();
    for i in 0..n {
        let k = val_int(&s.d[i], p);
        if k == 0 {
            continue;
        }
        let cofactor = &s.d[i] / BigInt::from(p).pow(k);
        let col: Vec<BigRational> =
            (0..n).map(|r| BigRational::new(&s.v[r][i] * &cofactor, s.d[i].clone())).collect();
        out.push((LatticeVector::new(col), k));
    }
    out
}

fn combos(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &o in orders {
        let mut next = Vec::with_capacity(out.len() * o as usize);
        for c in &out {
            for k in 0..o {
                let mut c2 = c.clone();
                c2.push(k);
                next.push(c2);
            }
        }
        out = next;
    }
    out
}

fn combine(gens: &[LatticeVector], coeffs: &[u64], n: usize) -> LatticeVector {
    let mut x = vec![BigRational::zero(); n];
    for (g, &c) in gens.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = rat(BigInt::from(c));
        for i in 0..n {
            x[i] += &g.coords[i] * &c;
        }
    }
    LatticeVector::new(x)
}

const ENUM_CAP: u64 = 1 << 20;

/// ∂ at p: the 𝔽_p-dimension of {X ∈ 𝓛* : 2⁻¹Q[X] ∈ p⁻¹ℤ_p}/𝓛 inside the
/// p-part of 𝓛*/𝓛. `None` if that set is not an elementary abelian
/// p-group or the p-part is too large to enumerate.
pub fn partial_invariant(l: &GramLattice, p: u64) -> Result<Option<u32>> {
    check_prime(p)?;
    let gens = p_part_generators(l, p);
    let orders: Vec<u64> = gens.iter().map(|(_, k)| p.pow(*k)).collect();
    let size: u64 = orders.iter().product();
    if size > ENUM_CAP {
        return Ok(None);
    }
    let vecs: Vec<LatticeVector> = gens.iter().map(|(v, _)| v.clone()).collect();
    let n = l.rank();
    let mut count = 0u64;
    let two = rat(int(2));
    for c in combos(&orders) {
        let x = combine(&vecs, &c, n);
        let q = l.norm(&x) / &two;
        if q.is_zero() || val_rat(&q, p) >= -1 {
            // must be p-torsion for the quotient to be an F_p-space
            if c.iter().zip(&orders).any(|(&ci, &o)| (ci * p) % o != 0) {
                return Ok(None);
            }
            count += 1;
        }
    }
    let mut d = 0;
    let mut c = count;
    while c % p == 0 && c > 1 {
        c /= p;
        d += 1;
    }
    if c != 1 {
        return Ok(None);
    }
    Ok(Some(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpType {
    Trivial,
    Z2,
    Dihedral(u64),
}

impl EpType {
    pub fn order(&self) -> u64 {
        match self {
            EpType::Trivial => 1,
            EpType::Z2 => 2,
            EpType::Dihedral(p) => 2 * (p + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub p: u64,
    pub disc_val: u32,
    pub witt_index: usize,
    pub aniso_dim: usize,
    /// `None` when the defining set is not an 𝔽_p-space (non-maximal input).
    pub partial: Option<u32>,
    /// `None` for ∂ > 2, which only happens off the maximal locus.
    pub ep_type: Option<EpType>,
}

pub fn local_invariants(l: &GramLattice, p: u64) -> Result<LocalInvariants> {
    check_prime(p)?;
    let disc_val = val_int(&l.det(), p);
    let (witt_index, aniso_dim) = witt_decomposition(l, p)?;
    let partial = if disc_val == 0 { Some(0) } else { partial_invariant(l, p)? };
    let ep_type = match partial {
        Some(0) => Some(EpType::Trivial),
        Some(1) => Some(EpType::Z2),
        Some(2) => Some(EpType::Dihedral(p)),
        _ => None,
    };
    Ok(LocalInvariants { p, disc_val, witt_index, aniso_dim, partial, ep_type })
}

// ------------------------------------------------------------ maximality

/// A vector x ∈ 𝓛* \ 𝓛 with p·x ∈ 𝓛 and 2⁻¹Q[x] ∈ ℤ_p, if one exists.
pub fn find_enlargement(l: &GramLattice, p: u64) -> Result<Option<LatticeVector>> {
    check_prime(p)?;
    if val_int(&l.det(), p) < 2 {
        // an index-p even overlattice would need p² | det
        return Ok(None);
    }
    let gens = p_part_generators(l, p);
    // p-torsion: p^{k-1} times each generator
    let tors: Vec<LatticeVector> = gens
        .iter()
        .map(|(v, k)| v.scale(&rat(BigInt::from(p).pow(k - 1))))
        .collect();
    let orders = vec![p; tors.len()];
    let two = rat(int(2));
    let n = l.rank();
    for c in combos(&orders) {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let x = combine(&tors, &c, n);
        let q = l.norm(&x) / &two;
        if q.is_zero() || val_rat(&q, p) >= 0 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn require_even(l: &GramLattice) -> Result<()> {
    if l.gram.iter().enumerate().any(|(i, r)| r[i].is_odd()) {
        return Err(Error::NotEvenIntegral);
    }
    Ok(())
}

/// True iff no even-integral overlattice of p-power index exists.
pub fn is_maximal_integral(l: &GramLattice, p: u64) -> Result<bool> {
    require_even(l)?;
    Ok(find_enlargement(l, p)?.is_none())
}

/// Hermite-style reduction of rational generators to a ℤ-basis.
pub fn lattice_basis(gens: &[LatticeVector]) -> Vec<LatticeVector> {
    let n = gens[0].dim();
    let mut den = BigInt::one();
    for g in gens {
        for c in &g.coords {
            den = den.lcm(c.denom());
        }
    }
    let mut rows: Vec<Vec<BigInt>> =
        gens.iter().map(|g| g.coords.iter().map(|c| (c * rat(den.clone())).to_integer()).collect()).collect();
    let mut basis = Vec::new();
    let mut col = 0;
    let mut start = 0;
    while col < n && start < rows.len() {
        // gcd-reduce column `col` over rows[start..]
        loop {
            let nz: Vec<usize> = (start..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    rows.swap(start, i);
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            rows.swap(start, piv);
            for i in start + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[start][col]);
                for j in 0..n {
                    let t = &q * &rows[start][j];
                    rows[i][j] -= t;
                }
            }
        }
        if !rows[start][col].is_zero() {
            basis.push(LatticeVector::new(rows[start].iter().map(|x| BigRational::new(x.clone(), den.clone())).collect()));
            start += 1;
        }
        col += 1;
    }
    basis
}

/// Iterates single index-p enlargements to a maximal even overlattice at p;
/// returns its Gram matrix and a basis in the original coordinates.
pub fn maximal_overlattice(l: &GramLattice, p: u64) -> Result<(GramLattice, Vec<LatticeVector>)> {
    require_even(l)?;
    let n = l.rank();
    let mut basis: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::basis(n, i)).collect();
    let mut cur = l.clone();
    while let Some(x) = find_enlargement(&cur, p)? {
        // x in current coordinates -> original coordinates
        let mut xo = vec![BigRational::zero(); n];
        for (k, b) in basis.iter().enumerate() {
            for i in 0..n {
                xo[i] += &x.coords[k] * &b.coords[i];
            }
        }
        let mut gens = basis.clone();
        gens.push(LatticeVector::new(xo));
        basis = lattice_basis(&gens);
        cur = l.sublattice(&basis)?;
    }
    Ok((cur, basis))
}

// ------------------------------------------------------------ ξ-conditions

/// ℤ-basis of {X ∈ 𝓛 : ⟨X, ξ⟩ = 0} in lattice coordinates.
pub fn orthogonal_kernel(l1: &GramLattice, xi: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let n = l1.rank();
    if xi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: xi.dim() });
    }
    let row = l1.dual_coords(xi);
    let mut den = BigInt::one();
    for c in &row {
        den = den.lcm(c.denom());
    }
    let mut r: Vec<BigInt> = row.iter().map(|c| (c * rat(den.clone())).to_integer()).collect();
    if r.iter().all(|x| x.is_zero()) {
        return Err(Error::DomainError("ξ = 0".into()));
    }
    // unimodular column operations: r · C = (g, 0, …, 0)
    let mut c = identity(n);
    loop {
        let nz: Vec<usize> = (0..n).filter(|&j| !r[j].is_zero()).collect();
        if nz.len() == 1 {
            let j = nz[0];
            r.swap(0, j);
            for row in c.iter_mut() {
                row.swap(0, j);
            }
            break;
        }
        let piv = *nz.iter().min_by_key(|&&j| r[j].abs()).unwrap();
        for &j in &nz {
            if j == piv {
                continue;
            }
            let q = r[j].div_floor(&r[piv]);
            let t = &q * &r[piv];
            r[j] -= t;
            for i in 0..n {
                let t = &q * &c[i][piv];
                c[i][j] -= t;
            }
        }
    }
    Ok((1..n).map(|j| LatticeVector::new((0..n).map(|i| rat(c[i][j].clone())).collect())).collect())
}

/// Gram matrix of 𝓛₁^ξ = 𝓛₁ ∩ ξ^⊥.
pub fn orthogonal_sublattice(l1: &GramLattice, xi: &LatticeVector) -> Result<GramLattice> {
    if xi.dim() != l1.rank() {
        return Err(Error::DimensionMismatch { expected: l1.rank(), got: xi.dim() });
    }
    if l1.norm(xi).is_zero() {
        return Err(Error::IsotropicXi);
    }
    if l1.rank() == 1 {
        return Err(Error::TooSmall { min: 2, got: 1 });
    }
    let k = orthogonal_kernel(l1, xi)?;
    l1.sublattice(&k)
}

/// ξ ∈ 𝓛* is primitive there iff its dual coordinates have gcd 1.
pub fn is_primitive_in_dual(l1: &GramLattice, xi: &LatticeVector) -> bool {
    let dc = l1.dual_coords(xi);
    if !dc.iter().all(|c| c.is_integer()) {
        return false;
    }
    dc.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.to_integer())).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndexStatus {
    Holds,
    RelationFailed,
    HypothesisViolation(Vec<String>),
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexCheck {
    pub status: IndexStatus,
    pub disc_l1: String,
    pub disc_l1xi: Option<String>,
    pub q_xi: String,
}

impl IndexCheck {
    pub fn holds(&self) -> bool {
        self.status == IndexStatus::Holds
    }
}

/// Tests 𝔡(𝓛₁^ξ) = |Q[ξ]| · 𝔡(𝓛₁) exactly, after checking that ξ is a
/// primitive anisotropic vector of 𝓛₁*.
pub fn verify_index_relation(l1: &GramLattice, xi: &LatticeVector) -> Result<IndexCheck> {
    if xi.dim() != l1.rank() {
        return Err(Error::DimensionMismatch { expected: l1.rank(), got: xi.dim() });
    }
    if !l1.in_dual(xi) {
        return Err(Error::NotInDual);
    }
    let q = l1.norm(xi);
    let d1 = discriminant(l1);
    let mut why = Vec::new();
    if q.is_zero() {
        why.push("Q[xi] = 0".to_string());
    }
    if !is_primitive_in_dual(l1, xi) {
        why.push("xi is not primitive in the dual lattice".to_string());
    }
    if l1.rank() < 2 {
        why.push("rank 1 has no orthogonal complement".to_string());
    }
    if !why.is_empty() {
        return Ok(IndexCheck {
            status: IndexStatus::HypothesisViolation(why),
            disc_l1: d1.to_string(),
            disc_l1xi: None,
            q_xi: q.to_string(),
        });
    }
    let lx = orthogonal_sublattice(l1, xi)?;
    let dx = discriminant(&lx);
    let ok = rat(dx.clone()) == rat(d1.clone()) * q.abs();
    Ok(IndexCheck {
        status: if ok { IndexStatus::Holds } else { IndexStatus::RelationFailed },
        disc_l1: d1.to_string(),
        disc_l1xi: Some(dx.to_string()),
        q_xi: q.to_string(),
    })
}

/// Which inequality stands in for the sign condition on Q[ξ].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormCheck {
    Negative,
    Nonzero,
}

#[derive(Clone, Debug, Serialize)]
pub struct XiConditions {
    pub norm_check: NormCheck,
    pub norm_ok: bool,
    pub primitive: bool,
    pub reduced: bool,
    pub e0_pairing_one: bool,
    /// (p, 𝓛₁ self-dual at p, 𝓛₁^ξ self-dual at p) for the requested primes.
    pub local_self_duality: Vec<(u64, bool, bool)>,
}

impl XiConditions {
    pub fn all_pass(&self) -> bool {
        self.norm_ok && self.primitive && self.reduced && self.e0_pairing_one
    }
}

/// Conditions on ξ and 𝔢₀. `signature_known = true` means the caller fixes
/// the sign convention so that Q[ξ] < 0 is meaningful.
pub fn check_xi_conditions(
    l1: &GramLattice,
    xi: &LatticeVector,
    e0: &LatticeVector,
    signature_known: bool,
    primes: &[u64],
) -> Result<XiConditions> {
    let n = l1.rank();
    for v in [xi, e0] {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
    }
    let q = l1.norm(xi);
    let (norm_check, norm_ok) = if signature_known {
        (NormCheck::Negative, q.is_negative())
    } else {
        (NormCheck::Nonzero, !q.is_zero())
    };
    let primitive = is_primitive_in_dual(l1, xi);
    let lx = if !q.is_zero() && n >= 2 { Some(orthogonal_sublattice(l1, xi)?) } else { None };
    let reduced = match &lx {
        Some(lx) => {
            let mut ok = true;
            for p in prime_divisors(&discriminant(lx)) {
                ok &= is_maximal_integral(lx, p)?;
            }
            ok
        }
        None => false,
    };
    let e0_pairing_one = l1.pair(e0, xi).is_one();
    let mut local = Vec::new();
    for &p in primes {
        check_prime(p)?;
        let a = val_int(&l1.det(), p) == 0;
        let b = lx.as_ref().map_or(false, |lx| val_int(&lx.det(), p) == 0);
        local.push((p, a, b));
    }
    Ok(XiConditions { norm_check, norm_ok, primitive, reduced, e0_pairing_one, local_self_duality: local })
}

/// Distinct prime divisors of the discriminant together with 2.
pub fn bad_primes(l: &GramLattice) -> Vec<u64> {
    let mut s: BTreeSet<u64> = prime_divisors(&discriminant(l)).into_iter().collect();
    s.insert(2);
    s.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(rows: &[&[i64]]) -> GramLattice {
        GramLattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&GramLattice::hyperbolic()), int(1));
        assert_eq!(discriminant(&GramLattice::scalar(3, 2).unwrap()), int(8));
        assert_eq!(discriminant(&gl(&[&[2, -1], &[-1, 2]])), int(3));
    }

    #[test]
    fn groups() {
        assert!(discriminant_group(&GramLattice::hyperbolic()).is_empty());
        assert_eq!(discriminant_group(&GramLattice::scalar(2, 2).unwrap()), vec![int(2), int(2)]);
        assert_eq!(discriminant_group(&gl(&[&[2, 0], &[0, 4]])), vec![int(2), int(4)]);
        assert_eq!(discriminant_group(&gl(&[&[4, 2], &[2, 6]])), vec![int(2), int(10)]);
    }

    #[test]
    fn smith_reconstructs() {
        let g = gl(&[&[4, 2, 0], &[2, 6, 2], &[0, 2, 10]]);
        let s = smith(g.gram());
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc += &s.u[i][a] * &g.gram()[a][b] * &s.v[b][j];
                    }
                }
                let want = if i == j { s.d[i].clone() } else { BigInt::zero() };
                assert_eq!(acc, want);
            }
        }
        for i in 1..n {
            assert!((&s.d[i] % &s.d[i - 1]).is_zero());
        }
    }

    #[test]
    fn rejects_bad_grams() {
        assert_eq!(GramLattice::from_rows(&[vec![1]]), Err(Error::NotEvenIntegral));
        assert_eq!(GramLattice::from_rows(&[vec![2, 1], vec![0, 2]]), Err(Error::NotEvenIntegral));
        assert_eq!(GramLattice::from_rows(&[vec![2, 2], vec![2, 2]]), Err(Error::SingularGram));
    }

    #[test]
    fn local_invariants_examples() {
        let h = local_invariants(&GramLattice::hyperbolic(), 3).unwrap();
        assert_eq!((h.witt_index, h.aniso_dim, h.partial, h.ep_type), (1, 0, Some(0), Some(EpType::Trivial)));
        let one = local_invariants(&gl(&[&[2]]), 2).unwrap();
        assert_eq!((one.witt_index, one.aniso_dim), (0, 1));
        // (L*/L)[2] = {0, e/2}, 2⁻¹Q[e/2] = 1/4 has valuation -2
        assert_eq!(one.partial, Some(0));
        assert_eq!(one.ep_type, Some(EpType::Trivial));
        assert!(local_invariants(&gl(&[&[2]]), 4).is_err());
    }

    #[test]
    fn witt_index_small_forms() {
        // A2 root lattice: anisotropic over Q_3? x²+xy+y² represents 0 iff -3 is a square
        let a2 = gl(&[&[2, -1], &[-1, 2]]);
        assert_eq!(witt_decomposition(&a2, 3).unwrap(), (0, 2));
        assert_eq!(witt_decomposition(&a2, 7).unwrap(), (1, 0));
        assert_eq!(witt_decomposition(&a2, 5).unwrap(), (0, 2));
        // sum of four squares: anisotropic only at 2 (and ∞)
        let four = GramLattice::scalar(4, 2).unwrap();
        assert_eq!(witt_decomposition(&four, 2).unwrap(), (0, 4));
        assert_eq!(witt_decomposition(&four, 3).unwrap(), (2, 0));
        // three squares: anisotropic at 2
        let three = GramLattice::scalar(3, 2).unwrap();
        assert_eq!(witt_decomposition(&three, 2).unwrap(), (0, 3));
        assert_eq!(witt_decomposition(&three, 5).unwrap(), (1, 1));
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal_integral(&GramLattice::hyperbolic(), 5).unwrap());
        assert!(!is_maximal_integral(&gl(&[&[8]]), 2).unwrap());
        assert!(is_maximal_integral(&gl(&[&[2, 1], &[1, 2]]), 3).unwrap());
        let (m, _) = maximal_overlattice(&gl(&[&[8]]), 2).unwrap();
        assert_eq!(m.gram()[0][0], int(2));
        let (m, _) = maximal_overlattice(&GramLattice::scalar(4, 2).unwrap(), 2).unwrap();
        assert!(is_maximal_integral(&m, 2).unwrap());
        assert_eq!(discriminant(&m), int(4));
    }

    #[test]
    fn orthogonal_sublattice_examples() {
        let l = GramLattice::scalar(2, 2).unwrap();
        let s = orthogonal_sublattice(&l, &LatticeVector::from_ints(&[1, 0])).unwrap();
        assert_eq!(s.gram(), &vec![vec![int(2)]]);
        let l = GramLattice::hyperbolic().direct_sum(&gl(&[&[2]]));
        let s = orthogonal_sublattice(&l, &LatticeVector::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(discriminant(&s), int(1));
        assert_eq!(witt_decomposition(&s, 3).unwrap(), (1, 0));
        assert_eq!(orthogonal_sublattice(&GramLattice::hyperbolic(), &LatticeVector::from_ints(&[1, 0])), Err(Error::IsotropicXi));
    }

    #[test]
    fn index_relation_examples() {
        let twoi = GramLattice::scalar(2, 2).unwrap();
        let r = verify_index_relation(&twoi, &LatticeVector::from_ints(&[1, 0])).unwrap();
        assert!(matches!(r.status, IndexStatus::HypothesisViolation(_)));
        let half = LatticeVector::parse(&["1/2", "0"]).unwrap();
        assert!(verify_index_relation(&twoi, &half).unwrap().holds());
        let r = verify_index_relation(&GramLattice::hyperbolic(), &LatticeVector::from_ints(&[1, 1])).unwrap();
        assert!(r.holds());
        assert_eq!(r.disc_l1xi.as_deref(), Some("2"));
        let r = verify_index_relation(&twoi, &LatticeVector::parse(&["1/4", "0"]).unwrap());
        assert_eq!(r.unwrap_err(), Error::NotInDual);
    }

    #[test]
    fn xi_conditions_examples() {
        let l = GramLattice::hyperbolic().direct_sum(&gl(&[&[-2]]));
        let xi = LatticeVector::parse(&["0", "0", "1/2"]).unwrap();
        let e0 = LatticeVector::from_ints(&[0, 0, -1]);
        let c = check_xi_conditions(&l, &xi, &e0, true, &[2, 3]).unwrap();
        assert!(c.norm_ok && c.primitive && c.reduced && c.e0_pairing_one, "{c:?}");
        assert_eq!(c.local_self_duality, vec![(2, false, true), (3, true, true)]);
        let xi2 = LatticeVector::parse(&["0", "0", "1"]).unwrap();
        let c = check_xi_conditions(&l, &xi2, &e0, true, &[]).unwrap();
        assert!(!c.primitive);
        let c = check_xi_conditions(&l, &xi, &e0, false, &[]).unwrap();
        assert_eq!(c.norm_check, NormCheck::Nonzero);
    }

    #[test]
    fn json_round_trip() {
        let l = GramLattice::from_json(r#"{"gram": [[2, "1"], [1, 2]], "basis_labels": ["a", "b"]}"#).unwrap();
        assert_eq!(discriminant(&l), int(3));
        let back = GramLattice::from_json(&l.to_json().to_string()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn diagonalization_preserves_determinant_class() {
        let g = gl(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 4]]);
        let d = diagonalize(g.gram());
        let prod = d.iter().fold(BigRational::one(), |a, b| a * b);
        assert_eq!(prod, rat(g.det()));
    }
}
