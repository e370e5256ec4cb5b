//! Random admissible parameter draws and a concurrent runner.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bounds::bound_check;
use super::ftn::ftn_check;
use super::psi::psi_check;
use super::{appendix_identity_check, orbital_identity_check, params, IdentityId, IdentitySpec, Params, VerificationReport};
use crate::error::Result;
use crate::par::pool;

pub fn default_tolerance(id: IdentityId) -> f64 {
    use IdentityId::*;
    match id {
        SphereMoment | GaussCosine => 1e-10,
        SpherePlaneWave | KBesselFourier | RadialCosine | ContourBessel | KSeriesExpansion | ByParts => 1e-8,
        Cell1 | W0Singular | PsiTwoPath | Hypergeom => 1e-7,
        W1Cell => 1e-4,
        PsiVanishing => 1e-8,
        _ => 0.0,
    }
}

fn draw(id: IdentityId, rng: &mut ChaCha8Rng) -> Params {
    use IdentityId::*;
    let u = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| rng.gen_range(lo..hi);
    match id {
        SphereMoment => params(&[("n", rng.gen_range(1..=8) as f64), ("q", rng.gen_range(0..=8) as f64)]),
        SpherePlaneWave => params(&[("n", rng.gen_range(2..=7) as f64), ("y", u(rng, 0.05, 3.0))]),
        KBesselFourier => {
            let m = rng.gen_range(3..=7) as f64;
            let y = if rng.gen_bool(0.2) { 0.0 } else { u(rng, 0.2, 1.5) };
            params(&[("m", m), ("s_re", u(rng, 0.3, 1.5)), ("s_im", u(rng, -2.0, 2.0)), ("a", u(rng, 0.5, 2.0)), ("y", y)])
        }
        RadialCosine => {
            let m = rng.gen_range(3..=6) as f64;
            let rho = (m - 1.0) / 2.0;
            let ar = -u(rng, rho + 0.6, rho + 2.0);
            params(&[("m", m), ("alpha_re", ar), ("alpha_im", u(rng, -1.0, 1.0)), ("A", u(rng, 0.5, 2.0)), ("y", u(rng, 0.2, 1.5))])
        }
        GaussCosine => params(&[("A", u(rng, 0.0, 4.0)), ("B", u(rng, 0.2, 3.0))]),
        ContourBessel => params(&[("q", u(rng, 1.5, 5.0)), ("A", u(rng, 0.3, 3.0)), ("B", -u(rng, 0.3, 3.0))]),
        KSeriesExpansion => {
            let m = rng.gen_range(3..=6);
            let rho = (m as f64 - 1.0) / 2.0;
            let l = (rho.floor() as i64 + 1 + rng.gen_range(0..4)) as f64;
            let t = u(rng, 1.5, 4.0);
            let zr = u(rng, 2.0, 3.5);
            params(&[
                ("m", m as f64),
                ("l", l),
                ("alpha_re", u(rng, -1.0, 1.0)),
                ("alpha_im", u(rng, -0.5, 0.5)),
                ("z_re", zr),
                ("z_im", u(rng, -1.0, 1.0)),
                ("T", t),
                ("y", u(rng, 0.2, 1.0)),
            ])
        }
        Cell1 | W0Singular => {
            let m = rng.gen_range(3..=6) as f64;
            let rho = (m - 1.0) / 2.0;
            let l = (rng.gen_range(6..=12)) as f64;
            // Cell1 needs Re s + ρ − l < −1
            let s_re = u(rng, 0.2, (l - rho - 1.5).min(2.0));
            let eps = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            params(&[("m", m), ("l", l), ("s_re", s_re), ("s_im", u(rng, -2.0, 2.0)), ("delta", u(rng, 0.5, 2.0)), ("r", 1.0), ("eps", eps)])
        }
        W1Cell => {
            let l = rng.gen_range(7..=10) as f64;
            let cm = u(rng, 0.6, 1.4);
            // one draw in four lands on the vanishing side c₊ ≥ c₋
            let (cp, eta2) = if rng.gen_bool(0.25) {
                (cm + u(rng, 0.0, 0.6), u(rng, 0.0, 0.8))
            } else {
                // toward c₊ = −c₋ the cell integral cancels to 1e−9 of its
                // mass and cannot be resolved in double precision
                let cp = u(rng, -0.5, 0.9) * cm;
                (cp, u(rng, 0.0, 0.8 * (cm * cm - cp * cp)).sqrt())
            };
            params(&[
                ("m", 3.0),
                ("l", l),
                ("s_re", u(rng, 0.5, 2.0)),
                ("s_im", u(rng, -1.0, 1.0)),
                ("delta", u(rng, 0.8, 1.8)),
                ("r", 1.0),
                ("eta2", eta2),
                ("c_plus", cp),
                ("c_minus", cm),
            ])
        }
        PsiTwoPath => params(&[
            ("m", 3.0),
            ("l", rng.gen_range(10..=40) as f64),
            ("a", u(rng, 1.1, 5.0)),
            ("s_re", 0.5),
            ("s_im", u(rng, -5.0, 5.0)),
        ]),
        PsiVanishing => params(&[
            ("m", 3.0),
            ("l", rng.gen_range(10..=20) as f64),
            ("a", -u(rng, 1.1, 3.0)),
            ("eta_sharp", u(rng, 0.5, 2.0)),
            ("s_re", 0.5),
            ("s_im", u(rng, -3.0, 3.0)),
        ]),
        Hypergeom => {
            let l = rng.gen_range(4..=9) as f64;
            params(&[
                ("m", 3.0),
                ("l", l),
                ("s_re", u(rng, 0.2, l - 1.5)),
                ("s_im", u(rng, -1.0, 1.0)),
                ("a", u(rng, 0.3, 1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }),
                ("b", u(rng, -1.5, 1.5)),
            ])
        }
        ByParts => {
            let l = rng.gen_range(8..=14) as f64;
            let q = rng.gen_range(1..=2) as f64;
            // q ≤ Re s + ρ − 1 and q ≤ l − ρ − Re s − 1 with ρ = 1
            params(&[
                ("m", 3.0),
                ("l", l),
                ("q", q),
                ("s_re", u(rng, q, l - 2.0 - q)),
                ("s_im", u(rng, -1.0, 1.0)),
                ("a", u(rng, 0.3, 1.5)),
                ("b", u(rng, 0.5, 3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }),
            ])
        }
        // bound checks run a fixed grid
        _ => Params::new(),
    }
}

/// `count` parameter draws for `id`, reproducible from `seed`. Bound checks
/// are grid checks and yield a single spec.
pub fn random_specs(id: IdentityId, count: usize, seed: u64) -> Vec<IdentitySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let n = if id.is_bound() { 1.min(count) } else { count };
    (0..n).map(|_| IdentitySpec::new(id, draw(id, &mut rng), default_tolerance(id))).collect()
}

pub fn run_spec(spec: &IdentitySpec) -> Result<VerificationReport> {
    use IdentityId::*;
    let id = spec.identity_id;
    let mut p = spec.parameters.clone();
    match id {
        SphereMoment | SpherePlaneWave | KBesselFourier | RadialCosine | GaussCosine | ContourBessel | KSeriesExpansion
        | DiskBound | DerivativeBound | GammaRatioBound => appendix_identity_check(spec),
        JBesselBound | PsiDecayBound | CalIBound => bound_check(id, &p),
        _ => {
            p.entry("tol".into()).or_insert(spec.tolerance);
            match id {
                Cell1 | W0Singular | W1Cell => orbital_identity_check(id, &p),
                PsiTwoPath | PsiVanishing => psi_check(id, &p),
                _ => ftn_check(id, &p),
            }
            .map(|mut r| {
                r.parameters = spec.parameters.clone();
                r
            })
        }
    }
}

/// Runs every spec on the shared pool. Results come back in the input order;
/// failures to evaluate are kept as errors.
pub fn run_all(specs: &[IdentitySpec]) -> Vec<(IdentitySpec, Result<VerificationReport>)> {
    pool().install(|| specs.par_iter().map(|s| (s.clone(), run_spec(s))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible() {
        for id in IdentityId::all() {
            assert_eq!(random_specs(id, 3, 7), random_specs(id, 3, 7));
        }
        assert_ne!(random_specs(IdentityId::GaussCosine, 2, 1), random_specs(IdentityId::GaussCosine, 2, 2));
    }

    #[test]
    fn quick_identities_pass() {
        use IdentityId::*;
        let mut specs = Vec::new();
        for id in [SphereMoment, SpherePlaneWave, GaussCosine, ContourBessel, KBesselFourier, RadialCosine, KSeriesExpansion] {
            specs.extend(random_specs(id, 3, 11));
        }
        for (spec, r) in run_all(&specs) {
            let r = r.unwrap_or_else(|e| panic!("{spec:?}: {e}"));
            assert!(r.passed, "{r:?}");
        }
    }
}
