//! Macdonald's spherical Plancherel density on the tempered torus and
//! periodic-grid quadrature against it.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfactors::one_minus_pow;
use crate::par::pool;
use crate::quad::pairwise_sum;
use crate::rootdata::{positive_roots, GroupSpec, SatakePoint};
use crate::special::cr;

/// Equispaced grid t ∈ {0, h, …, (N−1)h}, h = (2π/log p)/N, in each of ℓ
/// coordinates, with ν_j = i t_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorusGrid {
    pub p: u64,
    pub ell: usize,
    pub n: usize,
}

impl TorusGrid {
    pub fn new(p: u64, ell: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooSmall { min: 1, got: 0 });
        }
        Ok(TorusGrid { p, ell, n })
    }

    pub fn for_spec(spec: &GroupSpec, n: usize) -> Result<Self> {
        TorusGrid::new(spec.p, spec.ell, n)
    }

    pub fn step(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.p as f64).ln() / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.ell as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn refined(&self) -> Self {
        TorusGrid { n: 2 * self.n, ..*self }
    }

    /// Grid coordinates of node `idx` (first coordinate varies slowest).
    pub fn node(&self, idx: usize) -> Vec<f64> {
        let h = self.step();
        let mut t = vec![0.0; self.ell];
        let mut r = idx;
        for k in (0..self.ell).rev() {
            t[k] = (r % self.n) as f64 * h;
            r /= self.n;
        }
        t
    }

    pub fn point(&self, idx: usize) -> SatakePoint {
        SatakePoint::tempered(self.p, &self.node(idx))
    }

    /// (h / log p)^ℓ: the cell volume for ∏ (log p)⁻¹ dt_j.
    pub fn cell(&self) -> f64 {
        (self.step() / (self.p as f64).ln()).powi(self.ell as i32)
    }
}

/// |∏_{α>0} ζ_p(⟨α,ν⟩+1)/ζ_p(⟨α,ν⟩)|² in the form
/// ∏ |1 − p^{−⟨α,ν⟩}|²·|ζ_p(⟨α,ν⟩+1)|², which vanishes on walls.
pub fn density_unnormalized(nu: &SatakePoint, spec: &GroupSpec) -> Result<f64> {
    if nu.ell() != spec.ell {
        return Err(Error::DimensionMismatch { expected: spec.ell, got: nu.ell() });
    }
    if !nu.is_tempered() {
        return Err(Error::NotTempered);
    }
    let mut d = 1.0;
    for r in positive_roots(spec) {
        let x = r.eval(&nu.nu);
        let den = one_minus_pow(spec.p, x + cr(1.0));
        d *= one_minus_pow(spec.p, x).norm_sqr() / den.norm_sqr();
    }
    Ok(d)
}

/// The n0 = 2 density is the printed formula without root multiplicities.
pub fn density_is_as_stated(spec: &GroupSpec) -> bool {
    spec.n0 == 2
}

/// (1/|W|)·Σ_grid f(ν)·density(ν)·cell, unnormalized (Q_p = 1).
pub fn raw_sum<F>(f: &F, spec: &GroupSpec, grid: &TorusGrid) -> Result<C64>
where
    F: Fn(&SatakePoint) -> Result<C64> + Sync,
{
    if grid.ell != spec.ell || grid.p != spec.p {
        return Err(Error::DimensionMismatch { expected: spec.ell, got: grid.ell });
    }
    let vals: Vec<Result<C64>> = pool().install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let nu = grid.point(i);
                let d = density_unnormalized(&nu, spec)?;
                if d == 0.0 {
                    return Ok(cr(0.0));
                }
                Ok(f(&nu)? * d)
            })
            .collect()
    });
    let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&vals) * (grid.cell() / spec.weyl_order() as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlancherelSpec {
    pub spec: GroupSpec,
    pub q_constant: Option<f64>,
}

impl PlancherelSpec {
    pub fn unset(spec: GroupSpec) -> Self {
        PlancherelSpec { spec, q_constant: None }
    }

    pub fn set(spec: GroupSpec, q: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::DomainError("Q_p must be positive".into()));
        }
        Ok(PlancherelSpec { spec, q_constant: Some(q) })
    }

    /// Determines Q_p on `grid` (checked against 2N at `tol`).
    pub fn normalized(spec: GroupSpec, grid: &TorusGrid, tol: f64) -> Result<Self> {
        let q = normalization_constant_tol(&spec, grid, tol)?;
        PlancherelSpec::set(spec, q)
    }
}

pub const DEFAULT_GRID_TOL: f64 = 1e-12;

/// Q_p with Q_p·∫ 1 dμ = 1: the inversion formula at the identity for
/// the unit of the Hecke algebra.
pub fn normalization_constant(spec: &GroupSpec, grid: &TorusGrid) -> Result<f64> {
    normalization_constant_tol(spec, grid, DEFAULT_GRID_TOL)
}

pub fn normalization_constant_tol(spec: &GroupSpec, grid: &TorusGrid, tol: f64) -> Result<f64> {
    if grid.n < 8 {
        return Err(Error::GridTooCoarse(f64::INFINITY));
    }
    let one = |_: &SatakePoint| Ok(cr(1.0));
    let m1 = raw_sum(&one, spec, grid)?.re;
    let m2 = raw_sum(&one, spec, &grid.refined())?.re;
    let q1 = 1.0 / m1;
    let q2 = 1.0 / m2;
    let diff = ((q1 - q2) / q2).abs();
    if diff > tol {
        return Err(Error::GridTooCoarse(diff));
    }
    Ok(q1)
}

/// (Q_p/|W|)·Σ f·density·cell over the full torus grid.
pub fn integrate<F>(f: &F, pspec: &PlancherelSpec, grid: &TorusGrid) -> Result<C64>
where
    F: Fn(&SatakePoint) -> Result<C64> + Sync,
{
    let q = pspec.q_constant.ok_or(Error::UnsetNormalization)?;
    Ok(raw_sum(f, &pspec.spec, grid)? * q)
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub t: Vec<f64>,
    pub density: f64,
}

pub fn density_table(spec: &GroupSpec, grid: &TorusGrid) -> Result<Vec<DensityRow>> {
    (0..grid.len())
        .map(|i| {
            let t = grid.node(i);
            let d = density_unnormalized(&SatakePoint::tempered(spec.p, &t), spec)?;
            Ok(DensityRow { t, density: d })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{eval_hecke, HeckeSymbol};

    #[test]
    fn rank_one_split_is_flat() {
        let spec = GroupSpec::new(3, 1, 0);
        let grid = TorusGrid::for_spec(&spec, 16).unwrap();
        for i in 0..16 {
            assert_eq!(density_unnormalized(&grid.point(i), &spec).unwrap(), 1.0);
        }
        let q = normalization_constant(&spec, &grid).unwrap();
        let lp = 3f64.ln();
        // mass (1/2)·(2π/log p)/log p
        assert!((q - 2.0 * lp * lp / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
    }

    #[test]
    fn wall_zero() {
        let spec = GroupSpec::new(2, 2, 0);
        let nu = SatakePoint::tempered(2, &[0.7, 0.7]);
        assert_eq!(density_unnormalized(&nu, &spec).unwrap(), 0.0);
        let nu = SatakePoint::new(2, vec![cr(0.1), cr(0.0)]);
        assert_eq!(density_unnormalized(&nu, &spec), Err(Error::NotTempered));
    }

    #[test]
    fn cosine_integrates_to_zero() {
        let spec = GroupSpec::new(5, 1, 0);
        let grid = TorusGrid::for_spec(&spec, 64).unwrap();
        let ps = PlancherelSpec::normalized(spec, &grid, 1e-12).unwrap();
        let mut h = HeckeSymbol::zero(5, 1);
        h.add_orbit(&[1], cr(1.0)).unwrap();
        let v = integrate(&|nu: &SatakePoint| eval_hecke(&h, nu), &ps, &grid).unwrap();
        assert!(v.norm() < 1e-14);
        let one = integrate(&|_: &SatakePoint| Ok(cr(1.0)), &ps, &grid).unwrap();
        assert!((one - cr(1.0)).norm() < 1e-14);
    }

    #[test]
    fn unset_and_coarse() {
        let spec = GroupSpec::new(2, 1, 1);
        let grid = TorusGrid::for_spec(&spec, 4).unwrap();
        assert_eq!(normalization_constant(&spec, &grid), Err(Error::GridTooCoarse(f64::INFINITY)));
        let ps = PlancherelSpec::unset(spec);
        assert_eq!(integrate(&|_: &SatakePoint| Ok(cr(1.0)), &ps, &grid), Err(Error::UnsetNormalization));
    }
}
