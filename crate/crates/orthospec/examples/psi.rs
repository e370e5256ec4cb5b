//! Ψ along a vertical contour against its beta-type closed form, and the
//! contour value on the vanishing side.

use num_complex::Complex64 as C64;
use orthospec::archforms::{default_contour_abscissa, psi_closed, psi_contour};

fn main() -> orthospec::error::Result<()> {
    let (l, rho) = (20, 1.0);
    let s = C64::new(0.5, 1.5);
    for a in [1.2, 2.0, 4.0] {
        let n = (a * a - 1.0_f64).sqrt();
        let c = default_contour_abscissa(a, n, l, rho);
        let lhs = psi_contour(a, n, s, l, rho, c, 1e-10)?;
        let rhs = psi_closed(a, s, l, rho)?;
        println!("a = {a}: contour {:.6e}, closed {:.6e}, rel {:.1e}", lhs.value, rhs, (lhs.value - rhs).norm() / rhs.norm());
    }
    let c = default_contour_abscissa(-1.5, 1.0, l, rho);
    let v = psi_contour(-1.5, 1.0, s, l, rho, c, 1e-10)?;
    println!("a = -1.5: |contour| = {:.1e} against integrand scale {:.1e}", v.value.norm(), v.scale);
    Ok(())
}
