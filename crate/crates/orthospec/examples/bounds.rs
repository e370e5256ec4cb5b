//! Bound grids: the observed maximum ratio against the allowed constant,
//! including the printed and corrected forms side by side.

use orthospec::archforms::bounds::{cal_i_bound_form, jbessel_bound, psi_decay_bound, psi_intermediate_bound};
use orthospec::archforms::Params;

fn main() -> orthospec::error::Result<()> {
    let p = Params::new();
    let show = |name: &str, f: &orthospec::archforms::bounds::BoundFit| {
        println!("{name:<16} max {:.3e}  C {:.3e}  fitted {:<5}  holds {:<5}  growth in l {:.2e}  at {}", f.observed, f.constant, f.fitted, f.holds(), f.l_growth(), f.argmax);
    };
    show("J-Bessel", &jbessel_bound(&p)?);
    show("Ψ decay", &psi_decay_bound(&p)?);
    show("Ψ intermediate", &psi_intermediate_bound(&p)?);
    show("cal_I printed", &cal_i_bound_form(&p, false)?);
    show("cal_I corrected", &cal_i_bound_form(&p, true)?);
    Ok(())
}
