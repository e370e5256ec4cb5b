//! Command-line front end. Every number printed here comes from a library
//! call; this module only parses, dispatches and formats.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::archforms::{random_specs, run_all, IdentityId, IdentitySpec, VerificationReport};
use crate::error::{Error, Result};
use crate::lfactors::delta_constant;
use crate::plancherel::{density_table, normalization_constant, TorusGrid};
use crate::quadlat::{bad_primes, discriminant, discriminant_group, is_maximal_integral, local_invariants, GramLattice};
use crate::rootdata::{eval_hecke, GroupSpec, HeckeSymbol, SatakePoint};
use crate::specmeasure::{bold_gamma, lambda_measure_detailed, main_constants, mellin_w_hat, MeasureConfig};

pub const SCHEMA: &str = "orthospec/1";

#[derive(Parser, Debug)]
#[command(name = "orthospec", version, about = "Local spectral data and archimedean identity checks")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Plancherel(PlancherelCmd),
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Main-term constants b, d, 𝚪(l) and Δ_{G⁰,p}.
    Constants(ConstantsArgs),
    /// Run identity and bound checks.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Discriminant, discriminant group and local invariants at bad primes.
    Analyze {
        /// Gram matrix as JSON, e.g. '[[2,1],[1,2]]' or '{"gram": ...}'.
        #[arg(long)]
        gram: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PlancherelCmd {
    /// CSV of the unnormalized density on the torus grid, then a JSON footer.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        n0: usize,
        #[arg(long = "N", default_value_t = 32)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Λ_p(φ̂) and optionally Ŵ_p(φ; s) for a JSON configuration.
    Eval {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long = "disc-l", default_value_t = 1)]
    pub disc_l: u64,
    #[arg(long = "disc-l1xi", default_value_t = 1)]
    pub disc_l1xi: u64,
    /// Whether 2ξ lies in 𝓛₁.
    #[arg(long = "two-xi", default_value_t = true, action = clap::ArgAction::Set)]
    pub two_xi: bool,
    /// Weights l at which to print 𝚪(l).
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<u64>,
    /// Primes at which to print Δ_{G⁰,p}.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// χ(p) for even m.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i8>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Appendix,
    Orbital,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Restrict to these identities (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the relative tolerance of equality checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Random parameter points per identity.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Include wall-clock times (makes output non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

/// Exit status plus everything written to stdout and stderr.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: out, stderr: format!("error: {m}\n") },
        Err(Failure::Input(e)) => Outcome { code: 2, stdout: out, stderr: format!("error: {e}\n") },
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let o = run(std::env::args_os());
    let _ = std::io::stdout().write_all(o.stdout.as_bytes());
    let _ = std::io::stderr().write_all(o.stderr.as_bytes());
    o.code
}

fn emit(out: &mut String, v: &Value, pretty: bool) {
    if pretty {
        out.push_str(&serde_json::to_string_pretty(v).unwrap());
    } else {
        out.push_str(&serde_json::to_string(v).unwrap());
    }
    out.push('\n');
}

fn dispatch(cli: &Cli, out: &mut String) -> std::result::Result<i32, Failure> {
    match &cli.command {
        Command::Lattice(LatticeCmd::Analyze { gram }) => lattice(gram, cli.pretty, out),
        Command::Plancherel(PlancherelCmd::Table { p, ell, n0, n }) => plancherel(GroupSpec::new(*p, *ell, *n0), *n, out),
        Command::Measure(MeasureCmd::Eval { config }) => measure(config, cli.pretty, out),
        Command::Constants(a) => constants(a, cli.pretty, out),
        Command::Verify(a) => verify(a, cli.pretty, out),
    }
}

fn lattice(gram: &str, pretty: bool, out: &mut String) -> std::result::Result<i32, Failure> {
    let text = if gram.trim_start().starts_with('[') { format!("{{\"gram\": {gram}}}") } else { gram.to_string() };
    let l = GramLattice::from_json(&text)?;
    let mut primes = Vec::new();
    for p in bad_primes(&l) {
        let inv = local_invariants(&l, p)?;
        primes.push(json!({
            "p": p,
            "disc_val": inv.disc_val,
            "witt_index": inv.witt_index,
            "aniso_dim": inv.aniso_dim,
            "partial": inv.partial,
            "ep_type": inv.ep_type.map(|e| json!({"type": format!("{e:?}"), "order": e.order()})),
            "maximal": is_maximal_integral(&l, p)?,
        }));
    }
    let v = json!({
        "schema": SCHEMA,
        "command": "lattice analyze",
        "lattice": l.to_json(),
        "rank": l.rank(),
        "det": l.det().to_string(),
        "discriminant": discriminant(&l).to_string(),
        "discriminant_group": discriminant_group(&l).iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "primes": primes,
    });
    emit(out, &v, pretty);
    Ok(0)
}

fn plancherel(spec: GroupSpec, n: usize, out: &mut String) -> std::result::Result<i32, Failure> {
    let grid = TorusGrid::for_spec(&spec, n)?;
    let q = normalization_constant(&spec, &grid)?;
    let rows = density_table(&spec, &grid)?;
    let header: Vec<String> = (1..=spec.ell).map(|j| format!("t{j}")).chain(["density".to_string()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in &rows {
        let cells: Vec<String> = r.t.iter().chain([&r.density]).map(|x| format!("{x:.17e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let footer = json!({
        "schema": SCHEMA,
        "command": "plancherel table",
        "p": spec.p, "ell": spec.ell, "n0": spec.n0, "N": n,
        "rows": rows.len(),
        "Q_p": q,
    });
    emit(out, &footer, false);
    Ok(0)
}

#[derive(Deserialize)]
struct GroupJson {
    ell: usize,
    n0: usize,
}

/// Measure configuration file. `z` lists the t_j of the tempered point
/// z_j = i t_j of σ; `symbol` is φ̂ as a Hecke symbol on G.
#[derive(Deserialize)]
struct MeasureFile {
    p: u64,
    m: usize,
    g: GroupJson,
    h: GroupJson,
    z: Vec<f64>,
    #[serde(default)]
    chi: Option<i8>,
    #[serde(default = "default_n", rename = "N")]
    n: usize,
    symbol: Value,
    #[serde(default)]
    s: Option<[f64; 2]>,
}

fn default_n() -> usize {
    32
}

fn measure(path: &PathBuf, pretty: bool, out: &mut String) -> std::result::Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let f: MeasureFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
    let sym = HeckeSymbol::from_value(&f.symbol)?;
    let cfg = MeasureConfig::new(
        GroupSpec::new(f.p, f.g.ell, f.g.n0),
        GroupSpec::new(f.p, f.h.ell, f.h.n0),
        SatakePoint::tempered(f.p, &f.z),
        f.m,
        f.chi,
        f.n,
    )?;
    let lam = lambda_measure_detailed(&|nu: &SatakePoint| eval_hecke(&sym, nu), &cfg)?;
    let mut v = json!({
        "schema": SCHEMA,
        "command": "measure eval",
        "p": f.p, "m": f.m, "N": f.n,
        "Q_p": cfg.pspec.q_constant,
        "lambda": lam.value,
        "lambda_imag": lam.imag,
        "lambda_error_est": lam.error_est,
    });
    if let Some([re, im]) = f.s {
        let w = mellin_w_hat(&sym, &cfg, C64::new(re, im))?;
        v["w_hat"] = json!({"s": [re, im], "value": [w.re, w.im]});
    }
    emit(out, &v, pretty);
    Ok(0)
}

fn constants(a: &ConstantsArgs, pretty: bool, out: &mut String) -> std::result::Result<i32, Failure> {
    let c = main_constants(a.m, a.disc_l, a.disc_l1xi, a.two_xi)?;
    let mut gammas = serde_json::Map::new();
    for &l in &a.l {
        gammas.insert(l.to_string(), json!(bold_gamma(l, a.m)?));
    }
    let mut deltas = serde_json::Map::new();
    for &p in &a.p {
        deltas.insert(p.to_string(), json!(delta_constant(p, a.m, a.chi)?));
    }
    let v = json!({
        "schema": SCHEMA,
        "command": "constants",
        "m": a.m,
        "b": c.b,
        "d": c.d,
        "rho": c.rho,
        "two_xi_in_l1": c.delta_flag,
        "bold_gamma": gammas,
        "delta": deltas,
    });
    emit(out, &v, pretty);
    Ok(0)
}

fn suite_ids(s: Suite) -> Vec<IdentityId> {
    match s {
        Suite::Appendix => IdentityId::APPENDIX.to_vec(),
        Suite::Orbital => IdentityId::ORBITAL.to_vec(),
        Suite::All => IdentityId::all(),
    }
}

fn report_json(spec: &IdentitySpec, r: &Result<VerificationReport>, timings: bool) -> Value {
    let mut v = json!({
        "identity": spec.identity_id.to_string(),
        "parameters": spec.parameters,
        "lhs_method": spec.lhs_method,
        "rhs_method": spec.rhs_method,
    });
    match r {
        Ok(r) => {
            v["lhs"] = json!([r.lhs.re, r.lhs.im]);
            v["rhs"] = json!([r.rhs.re, r.rhs.im]);
            v["abs_err"] = json!(r.abs_err);
            v["rel_err"] = json!(r.rel_err);
            v["tolerance"] = json!(r.tolerance);
            v["passed"] = json!(r.passed);
            if let Some(n) = &r.note {
                v["note"] = json!(n);
            }
            if timings {
                v["runtime_ms"] = json!(r.runtime_ms);
            }
        }
        Err(e) => {
            v["passed"] = json!(false);
            v["error"] = json!(e.to_string());
        }
    }
    v
}

fn verify(a: &VerifyArgs, pretty: bool, out: &mut String) -> std::result::Result<i32, Failure> {
    let mut ids = suite_ids(a.suite);
    if !a.only.is_empty() {
        let wanted = a.only.iter().map(|s| s.parse::<IdentityId>()).collect::<Result<Vec<_>>>()?;
        if let Some(bad) = wanted.iter().find(|w| !ids.contains(w)) {
            return Err(Failure::Usage(format!("{bad} is not in the {:?} suite", a.suite)));
        }
        ids.retain(|i| wanted.contains(i));
    }
    if let Some(t) = a.tol {
        if !(t > 0.0) {
            return Err(Failure::Usage("--tol must be positive".into()));
        }
    }
    let mut specs = Vec::new();
    for id in ids {
        for mut s in random_specs(id, a.count, a.seed) {
            if let (Some(t), false) = (a.tol, id.is_bound()) {
                s.tolerance = t;
            }
            specs.push(s);
        }
    }
    let results = run_all(&specs);
    let passed = results.iter().filter(|(_, r)| matches!(r, Ok(r) if r.passed)).count();
    let total = results.len();
    let verdict = if passed == total { "PASS" } else { "FAIL" };
    if pretty {
        for (s, r) in &results {
            let (flag, detail) = match r {
                Ok(r) => (if r.passed { "ok  " } else { "FAIL" }, format!("rel_err {:.3e} tol {:.1e}", r.rel_err, r.tolerance)),
                Err(e) => ("ERR ", e.to_string()),
            };
            out.push_str(&format!("{flag} {:<18} {detail}\n", s.identity_id.to_string()));
        }
        out.push_str(&format!("{verdict} {passed}/{total}\n"));
    } else {
        let v = json!({
            "schema": SCHEMA,
            "command": "verify",
            "suite": format!("{:?}", a.suite).to_lowercase(),
            "seed": a.seed,
            "results": results.iter().map(|(s, r)| report_json(s, r, a.timings)).collect::<Vec<_>>(),
            "summary": format!("{verdict} {passed}/{total}"),
        });
        emit(out, &v, false);
    }
    Ok(if passed == total { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane() {
        let o = run(["orthospec", "lattice", "analyze", "--gram", "[[0,1],[1,0]]"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["discriminant"], "1");
        assert_eq!(v["primes"][0]["ep_type"]["order"], 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["orthospec", "measure", "eval", "--config", "/nonexistent/missing.json"]).code, 2);
        assert_eq!(run(["orthospec", "frobnicate"]).code, 2);
        assert_eq!(run(["orthospec", "verify", "orbital", "--only", "GaussCosine"]).code, 2);
        assert_eq!(run(["orthospec", "--help"]).code, 0);
    }

    #[test]
    fn verify_is_reproducible() {
        let args = ["orthospec", "verify", "appendix", "--only", "SphereMoment", "--tol", "1e-8"];
        let a = run(args);
        assert_eq!(a.code, 0, "{}", a.stdout);
        assert!(a.stdout.contains("\"summary\":\"PASS 3/3\""));
        assert_eq!(a.stdout, run(args).stdout);
    }
}
