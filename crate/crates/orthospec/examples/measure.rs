//! The local spectral measure against a Hecke symbol, computed directly
//! and through its Mellin transform at s = 0.

use num_complex::Complex64 as C64;
use orthospec::rootdata::{GroupSpec, HeckeSymbol, SatakePoint};
use orthospec::specmeasure::{lambda_of_symbol, mellin_w_hat, MeasureConfig};

fn main() -> orthospec::error::Result<()> {
    let cfg = MeasureConfig::new(GroupSpec::new(5, 2, 1), GroupSpec::new(5, 1, 0), SatakePoint::tempered(5, &[0.4]), 3, None, 48)?;
    let mut h = HeckeSymbol::constant(5, 2, C64::new(1.0, 0.0));
    h.add_orbit(&[1, 1], C64::new(-0.5, 0.0))?;
    let lam = lambda_of_symbol(&h, &cfg)?;
    println!("Λ(φ̂) = {lam:.14}");
    for s in [0.0, 0.25, 1.0] {
        let w = mellin_w_hat(&h, &cfg, C64::new(s, 0.0))?;
        println!("Ŵ(φ̂; {s}) = {w:.14}");
    }
    Ok(())
}
