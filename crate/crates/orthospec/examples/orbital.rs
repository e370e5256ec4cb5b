//! Orbital closed forms on the Bruhat cells at one parameter point.

use orthospec::archforms::shintani::cell_param_map;
use orthospec::archforms::{orbital_identity_check, IdentityId};
use num_complex::Complex64 as C64;

fn main() -> orthospec::error::Result<()> {
    let mut p = cell_param_map(3, 8, C64::new(1.1, 0.3), 1.3, 1.0);
    for id in [IdentityId::Cell1, IdentityId::W0Singular] {
        let r = orbital_identity_check(id, &p)?;
        println!("{id}: {:.10} vs {:.10}, rel {:.1e}", r.lhs, r.rhs, r.rel_err);
    }
    // W1 needs the three-fold integral and takes a few seconds
    p.insert("eta2".into(), 0.3);
    p.insert("c_plus".into(), 0.2);
    p.insert("c_minus".into(), 0.9);
    let r = orbital_identity_check(IdentityId::W1Cell, &p)?;
    println!("W1Cell: {:.8} vs {:.8}, rel {:.1e}", r.lhs, r.rhs, r.rel_err);
    Ok(())
}
