//! Batch front end: builds inputs from files or named families, runs the
//! exact pipelines and renders deterministic JSON reports.

mod prenormalize;

use std::path::PathBuf;

use cmw_core::cmw::{null_cone_definiteness, null_cone_zero_test};
use cmw_core::hypersurfaces::{
    kohn_nirenberg_rho, pseudoconvexity_scan, segre_interior_witness, sphere_perturbation_local, sphere_perturbation_test_vectors, verify_witness,
    KNParams,
};
use cmw_core::normalform::{extract_cmw, normalize_to_order4, NormalForm4};
use cmw_core::polycore::json::read_input;
use cmw_core::polycore::{rat, RealPoly};
use cmw_core::{Error, Result, Signature};
use num_rational::BigRational;
use serde_json::{json, Value};

pub use prenormalize::{prenormalize, Prenormalized};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Obstruct,
    Segre,
    Prenormalize,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Obstruct => "obstruct",
            Command::Segre => "segre",
            Command::Prenormalize => "prenormalize",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Hyperquadric,
    SpherePerturbation,
    KohnNirenberg,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Hyperquadric => "hyperquadric",
            Family::SpherePerturbation => "sphere-perturbation",
            Family::KohnNirenberg => "kohn-nirenberg",
        }
    }
}

pub const DEFAULT_SIGN_SAMPLES: usize = 64;
pub const DEFAULT_SCAN_SAMPLES: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub eps: Option<BigRational>,
    pub eps0: Option<BigRational>,
    pub c: Option<BigRational>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            family: None,
            n: None,
            l: None,
            eps: None,
            eps0: None,
            c: None,
            samples: None,
            seed: 0,
            tol: DEFAULT_TOL,
            out: None,
        }
    }

    fn to_json(&self) -> Value {
        let r = |x: &Option<BigRational>| x.as_ref().map(|v| v.to_string());
        json!({
            "command": self.command.as_str(),
            "input": self.input.as_ref().map(|p| p.display().to_string()),
            "family": self.family.map(|f| f.as_str()),
            "n": self.n,
            "l": self.l,
            "eps": r(&self.eps),
            "eps0": r(&self.eps0),
            "c": r(&self.c),
            "samples": self.samples,
            "seed": self.seed,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.input.is_some() && self.family.is_some() {
            return Err(Error::Parameter("give either --input or --family, not both".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Parameter("tolerance must be positive".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::Parameter("--samples must be positive".into()));
        }
        Ok(())
    }

    fn kn_params(&self) -> KNParams {
        let d = KNParams::default();
        KNParams { eps0: self.eps0.clone().unwrap_or(d.eps0), c: self.c.clone().unwrap_or(d.c), eps: self.eps.clone().unwrap_or(d.eps) }
    }
}

/// Pre-normal input plus family-specific extras for the report.
struct Loaded {
    sig: Signature,
    p: RealPoly,
    extras: serde_json::Map<String, Value>,
}

pub fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(cfg: &RunConfig) -> Result<Loaded> {
    let mut extras = serde_json::Map::new();
    if let Some(path) = &cfg.input {
        let (n, l, p) = read_input(&read_json(path)?)?;
        return Ok(Loaded { sig: Signature::new(n, l)?, p, extras });
    }
    match cfg.family {
        None => Err(Error::Parameter("an --input file or a --family is required".into())),
        Some(Family::Hyperquadric) => {
            let sig = Signature::new(cfg.n.unwrap_or(2), cfg.l.unwrap_or(0))?;
            Ok(Loaded { sig, p: sig.levi_poly().neg(), extras })
        }
        Some(Family::SpherePerturbation) => {
            let (n, l) = (cfg.n.unwrap_or(4), cfg.l.unwrap_or(2));
            let eps = cfg.eps.clone().unwrap_or_else(|| rat(1, 100));
            let sig = Signature::new(n, l)?;
            let (p, a) = sphere_perturbation_local(n, l, &eps)?;
            extras.insert("a".into(), json!(a.to_string()));
            Ok(Loaded { sig, p, extras })
        }
        Some(Family::KohnNirenberg) => {
            Err(Error::Parameter("the Kohn-Nirenberg family lives in C², below the n >= 2 required here; use the segre command".into()))
        }
    }
}

fn normalized(cfg: &RunConfig) -> Result<(Loaded, NormalForm4)> {
    let loaded = load(cfg)?;
    let nf = normalize_to_order4(&loaded.p, &loaded.sig)?;
    Ok((loaded, nf))
}

pub fn cmd_normalize(cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    let (loaded, nf) = normalized(cfg)?;
    let t = extract_cmw(&nf)?;
    let problems = t.check_invariants();
    if !problems.is_empty() {
        return Err(Error::Internal(problems.join("; ")));
    }
    let mut report = json!({
        "config": cfg.to_json(),
        "n": loaded.sig.n(),
        "l": loaded.sig.l(),
        "normal_form": nf.to_json(),
        "cmw": t.to_json(),
        "flat": t.is_zero(),
    });
    let obj = report.as_object_mut().expect("object");
    obj.extend(loaded.extras);
    if cfg.family == Some(Family::SpherePerturbation) {
        let (x1, x2) = sphere_perturbation_test_vectors(&loaded.sig);
        obj.insert("test_values".into(), json!({ "X1": t.value_at(&x1)?.to_string(), "X2": t.value_at(&x2)?.to_string() }));
    }
    Ok(report)
}

pub fn cmd_obstruct(cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    let (loaded, nf) = normalized(cfg)?;
    let t = extract_cmw(&nf)?;
    let m = cfg.samples.unwrap_or(DEFAULT_SIGN_SAMPLES);
    let rep = null_cone_definiteness(&t, &loaded.sig, m, cfg.seed)?;
    let zero = null_cone_zero_test(&t, &loaded.sig)?;
    let mut report = json!({
        "config": cfg.to_json(),
        "n": loaded.sig.n(),
        "l": loaded.sig.l(),
        "obstruction": rep.to_json(),
        "tensor_vanishes": zero,
    });
    report.as_object_mut().expect("object").extend(loaded.extras);
    Ok(report)
}

/// Without `--eps`, the witness is built at the largest admissible `ε̃`.
/// The pseudoconvexity scan validates the loaded parameters (defaults
/// unless given); the Levi minimum on the witness surface itself is
/// reported separately, since it is of order `ε̃`.
pub fn cmd_segre(cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    if cfg.input.is_some() || cfg.family.is_some_and(|f| f != Family::KohnNirenberg) {
        return Err(Error::Parameter("segre runs on the Kohn-Nirenberg family only".into()));
    }
    let loaded = cfg.kn_params();
    let params = match &cfg.eps {
        Some(_) => loaded.clone(),
        None => loaded.with_eps(segre_interior_witness(&loaded.with_eps(rat(0, 1)))?.eps_tilde),
    };
    let w = segre_interior_witness(&params)?;
    let verified = verify_witness(&w)?;
    let m = cfg.samples.unwrap_or(DEFAULT_SCAN_SAMPLES);
    let scan = pseudoconvexity_scan(&kohn_nirenberg_rho(&loaded)?, m, cfg.tol, cfg.seed)?;
    let at_witness = pseudoconvexity_scan(&kohn_nirenberg_rho(&params)?, m, cfg.tol, cfg.seed)?;
    Ok(json!({
        "config": cfg.to_json(),
        "witness": w.to_json(),
        "verified": verified,
        "pseudoconvexity": {
            "exact": false,
            "eps": loaded.eps.to_string(),
            "samples": scan.samples,
            "requested": scan.requested,
            "min_eigenvalue": scan.min_eigenvalue,
            "strongly_pseudoconvex": scan.strongly_pseudoconvex(),
            "tol": scan.tol,
            "seed": scan.seed,
        },
        "witness_surface_levi": {
            "exact": false,
            "eps": params.eps.to_string(),
            "samples": at_witness.samples,
            "min_eigenvalue": at_witness.min_eigenvalue,
            "positive": at_witness.negative_samples == 0 && at_witness.min_eigenvalue > 0.0,
        },
    }))
}

pub fn cmd_prenormalize(cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    let path = cfg.input.as_ref().ok_or_else(|| Error::Parameter("prenormalize needs --input".into()))?;
    let v = read_json(path)?;
    let obj = v.as_object().ok_or_else(|| Error::Shape { what: "a JSON object with n, terms".into() })?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Shape { what: "integer field 'n'".into() })? as usize;
    let terms = obj.get("terms").ok_or_else(|| Error::Shape { what: "field 'terms'".into() })?;
    let p = cmw_core::polycore::json::real_poly_from_json(n, terms)?;
    let out = prenormalize(&p, cfg.tol)?;
    let mut report = out.to_json();
    report.as_object_mut().expect("object").insert("config".into(), cfg.to_json());
    Ok(report)
}

pub fn run(cfg: &RunConfig) -> Result<Value> {
    match cfg.command {
        Command::Normalize => cmd_normalize(cfg),
        Command::Obstruct => cmd_obstruct(cfg),
        Command::Segre => cmd_segre(cfg),
        Command::Prenormalize => cmd_prenormalize(cfg),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Process exit code for an error: 2 for schema problems, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_schema() {
        2
    } else {
        1
    }
}
