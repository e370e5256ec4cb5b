//! A handful of the integral identities, each evaluated by quadrature and
//! in closed form.

use orthospec::archforms::{random_specs, run_all, IdentityId};

fn main() {
    use IdentityId::*;
    let mut specs = Vec::new();
    for id in [SphereMoment, SpherePlaneWave, KBesselFourier, RadialCosine, GaussCosine, ContourBessel, KSeriesExpansion] {
        specs.extend(random_specs(id, 2, 0));
    }
    for (spec, r) in run_all(&specs) {
        match r {
            Ok(rep) => println!("{:<18} lhs {:.10}  rhs {:.10}  rel {:.1e}", spec.identity_id.to_string(), rep.lhs, rep.rhs, rep.rel_err),
            Err(e) => println!("{:<18} {e}", spec.identity_id.to_string()),
        }
    }
}
