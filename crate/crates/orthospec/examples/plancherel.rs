//! Normalizes the unramified Plancherel measure of a rank-two group and
//! integrates a Hecke symbol against it.

use num_complex::Complex64 as C64;
use orthospec::plancherel::{integrate, PlancherelSpec, TorusGrid};
use orthospec::rootdata::{eval_hecke, GroupSpec, HeckeSymbol, SatakePoint};

fn main() -> orthospec::error::Result<()> {
    let spec = GroupSpec::new(3, 2, 1);
    let grid = TorusGrid::for_spec(&spec, 48)?;
    let ps = PlancherelSpec::normalized(spec, &grid, 1e-12)?;
    println!("Q_3 = {:.12}", ps.q_constant.unwrap());

    let mut h = HeckeSymbol::constant(3, 2, C64::new(1.0, 0.0));
    h.add_orbit(&[1, 0], C64::new(1.0, 0.0))?;
    let f = |nu: &SatakePoint| eval_hecke(&h, nu).map(|v| v * v.conj());
    let v = integrate(&f, &ps, &grid)?;
    let v2 = integrate(&f, &ps, &grid.refined())?;
    println!("∫|φ̂|² dμ = {:.12} (2N: {:.12})", v.re, v2.re);
    Ok(())
}
