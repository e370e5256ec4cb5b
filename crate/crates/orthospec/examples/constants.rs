//! Main-term constants and the large-weight behaviour of 𝚪(l).

use orthospec::specmeasure::{bold_gamma, c_constant, gamma_l0_ratio, main_constants};

fn main() -> orthospec::error::Result<()> {
    for m in [3, 4] {
        let c = main_constants(m, 2, 6, true)?;
        println!("m = {m}: b = {:.12}, d = {:?}", c.b, c.d);
        let val = c_constant(&c, m, 1.3, (m % 2 == 0).then_some(0.2))?;
        println!("       c = {val:.12}");
    }
    for l in [100, 400, 1600] {
        println!("l = {l}: 𝚪 = {:.10}, l(𝚪 − 1) = {:.6}, ratio {:.10}", bold_gamma(l, 5)?, l as f64 * (bold_gamma(l, 5)? - 1.0), gamma_l0_ratio(l, 5, 2.0, 1.0)?);
    }
    Ok(())
}
