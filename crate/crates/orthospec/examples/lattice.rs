//! Local invariants of a small even lattice and the index relation for a
//! dual vector.

use orthospec::quadlat::{bad_primes, discriminant, local_invariants, verify_index_relation, GramLattice, LatticeVector};

fn main() -> orthospec::error::Result<()> {
    // A_2 ⊕ H: discriminant 3
    let l = GramLattice::from_rows(&[vec![2, -1, 0, 0], vec![-1, 2, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]])?;
    println!("disc = {}, bad primes {:?}", discriminant(&l), bad_primes(&l));
    for p in [2, 3, 5] {
        let inv = local_invariants(&l, p)?;
        println!("p = {p}: witt index {}, anisotropic dim {}, ∂ = {:?}, E_p = {:?}", inv.witt_index, inv.aniso_dim, inv.partial, inv.ep_type);
    }
    let xi = LatticeVector::parse(&["1/3", "2/3", "1", "1"])?;
    let check = verify_index_relation(&l, &xi)?;
    println!("Q[ξ] = {}, d(L^ξ) = {:?}, status {:?}", check.q_xi, check.disc_l1xi, check.status);
    Ok(())
}
