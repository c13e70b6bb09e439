//! `bmapole`: poles of best Möbius approximations from the command line.
//!
//! Exit codes: 0 when every verdict holds, 1 when a bound or count is
//! violated, 2 on usage or model errors.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use pole_core::bma::{classify_from_q, pole_from_q};
use pole_core::bounds::{self, json_real, Bound, BoundError};
use pole_core::model::spec::ModelSpec;
use pole_core::model::{AnalyticModel, ClassSpec};
use pole_core::moebius::ExtendedPoint;
use pole_core::orders::{lower_order, upper_order};
use pole_core::polygon::{count_preimages, PolygonModel, RationalMap};
use pole_core::sampling::{DiskSampler, DEFAULT_RADIUS_CAP};
use pole_core::schwarzian::{
    convexity_certificate, critical_a, critical_a_residual, nehari_disk_check, pole_radius_check,
    Certificate, SchwarzianError, SchwarzianProfile, CERTIFICATE_RADIUS_CAP,
};
use pole_core::search::GridSearch;

#[derive(Parser, Debug)]
#[command(
    name = "bmapole",
    version,
    about = "Poles of best Möbius approximations on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pole function on a polar grid (CSV or JSON rows).
    PoleLocus(LocusArgs),
    /// Sampled evidence for convexity or concavity.
    Classify(CommonArgs),
    /// Estimates of the upper and lower Pommerenke orders.
    Orders(CommonArgs),
    /// Checks one pole-localization bound on sampled points.
    VerifyBound(BoundArgs),
    /// Counts solutions of P_f(z) = c for polygon models.
    CountPoles(CountArgs),
    /// Schwarzian convexity certificate and pole-location checks.
    Schwarzian(SchwarzianArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Model as JSON, a JSON file, `catalog:NAME(k=v,...)` or `class:NAME(k=v,...)`.
    #[arg(long)]
    model: Option<String>,
    /// Model as a formula in z, e.g. `z/(1-z)^2`.
    #[arg(long)]
    formula: Option<String>,
    /// Tag the model with a class (parameters from --alpha, --A, --B, --lambda, --t).
    #[arg(long)]
    assume_class: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a_param: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    b_param: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Degree of the random self-map for `class:` models.
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    radius_cap: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct LocusArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Grid rings, including the origin.
    #[arg(long, default_value_t = 32)]
    radii: usize,
    #[arg(long, default_value_t = 64)]
    angles: usize,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Bound id, e.g. `janowski`, `exclusion_disk`.
    #[arg(long)]
    bound: String,
    #[arg(long)]
    mu: Option<f64>,
    /// Skip the hypothesis check entirely.
    #[arg(long)]
    assume_hypothesis: bool,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// `cross`, a polygon JSON spec, or a file holding one.
    target: String,
    /// Value c (e.g. `2`, `0.3-0.1i`, `inf`).
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileKind {
    Constant,
    Power,
    PowerSimple,
    Nehari,
}

#[derive(Args, Debug)]
struct SchwarzianArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "constant")]
    profile: ProfileKind,
    /// Constant of the constant profile (defaults to the critical value).
    #[arg(long = "a-const")]
    a_const: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Run the |P_f| <= k radius check.
    #[arg(long)]
    k: Option<f64>,
    /// Run the unit-disk check for (1-|z|^2)^2 |Sf| <= 2t.
    #[arg(long = "nehari-t")]
    nehari_t: Option<f64>,
}

/// Error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<pole_core::model::ModelError> for Failure {
    fn from(e: pole_core::model::ModelError) -> Self {
        usage(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read_source(src: &str) -> Result<String, Failure> {
    let path = Path::new(src);
    if !src.trim_start().starts_with('{') && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {src}: {e}")))
    } else {
        Ok(src.to_string())
    }
}

impl ModelArgs {
    fn class_param(&self, key: &str) -> Option<f64> {
        match key {
            "A" => self.a_param,
            "B" => self.b_param,
            "alpha" => self.alpha,
            "lambda" => self.lambda,
            "t" => self.t,
            _ => None,
        }
    }

    fn build(&self) -> Result<AnalyticModel, Failure> {
        let mut spec = match (&self.model, &self.formula) {
            (Some(_), Some(_)) => return Err(usage("give exactly one of --model and --formula")),
            (None, None) => return Err(usage("a model is required: --model or --formula")),
            (None, Some(f)) => ModelSpec::Expr { formula: f.clone() },
            (Some(m), None) => ModelSpec::parse(&read_source(m)?)?,
        };
        if let ModelSpec::Class { params, degree, .. } = &mut spec {
            for key in ["A", "B", "alpha", "lambda", "t"] {
                if let (false, Some(v)) = (params.contains_key(key), self.class_param(key)) {
                    params.insert(key.to_string(), v);
                }
            }
            if let Some(d) = self.degree {
                *degree = d;
            }
        }
        let mut model = spec.build()?;
        if let Some(name) = &self.assume_class {
            let class = ClassSpec::from_name(name, |k| self.class_param(k))?;
            let mut classes = model.classes().to_vec();
            classes.push(class);
            model = model.with_classes(classes);
        }
        Ok(model)
    }
}

impl OutputArgs {
    fn sampler(&self) -> Result<DiskSampler, Failure> {
        let cap = self.radius_cap.unwrap_or(DEFAULT_RADIUS_CAP);
        if !(cap > 0.0 && cap < 1.0) {
            return Err(usage("--radius-cap must lie in (0, 1)"));
        }
        if self.samples == 0 {
            return Err(usage("--samples must be positive"));
        }
        Ok(DiskSampler::new(self.samples, self.seed).with_radius_cap(cap))
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        emit(self.out.as_deref(), text)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn extended_json(p: ExtendedPoint) -> Value {
    match p {
        ExtendedPoint::Finite(z) => complex_json(z),
        ExtendedPoint::Infinity => json!("inf"),
    }
}

fn parse_target(src: &str) -> Result<ExtendedPoint, Failure> {
    let s = src.trim();
    if matches!(s, "inf" | "infinity" | "∞") {
        return Ok(ExtendedPoint::Infinity);
    }
    C64::from_str(&s.replace(' ', ""))
        .map(ExtendedPoint::Finite)
        .map_err(|_| usage(format!("`{src}` is not a complex number")))
}

fn cmd_pole_locus(args: &LocusArgs) -> Outcome {
    let model = args.common.model.build()?;
    let cap = args.common.output.radius_cap.unwrap_or(1.0 - 1e-3);
    if !(cap > 0.0 && cap < 1.0) || args.radii < 2 || args.angles == 0 {
        return Err(usage(
            "need --radius-cap in (0, 1), --radii >= 2 and --angles >= 1",
        ));
    }
    let mut points = vec![C64::new(0.0, 0.0)];
    for i in 1..args.radii {
        let r = cap * i as f64 / (args.radii - 1) as f64;
        points.extend(
            (0..args.angles).map(|j| C64::from_polar(r, TAU * j as f64 / args.angles as f64)),
        );
    }
    let mut rows = Vec::with_capacity(points.len());
    for z in points {
        let q = model.preschwarzian(z)?.q;
        let p = pole_from_q(z, q);
        let class = classify_from_q(z, q);
        rows.push((z, p, (1.0 + z * q).re, class.radial));
    }
    let radial = |r: pole_core::bma::Radial| {
        serde_json::to_value(r)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default()
    };
    let text = match args.common.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("z_re,z_im,p_re,p_im,abs_p,re_1_plus_zq,class\n");
            for (z, p, re, r) in &rows {
                let (pre, pim, abs) = match p {
                    ExtendedPoint::Finite(w) => (w.re.to_string(), w.im.to_string(), w.norm().to_string()),
                    ExtendedPoint::Infinity => ("inf".into(), "inf".into(), "inf".into()),
                };
                let _ = writeln!(s, "{},{},{pre},{pim},{abs},{re},{}", z.re, z.im, radial(*r));
            }
            s
        }
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(z, p, re, r)| {
                    json!({"z": complex_json(*z), "p": extended_json(*p), "abs_p": json_real(p.norm()),
                           "re_1_plus_zq": re, "class": radial(*r)})
                })
                .collect(),
        )),
    };
    args.common.output.emit(&text)?;
    Ok((String::new(), true))
}

fn cmd_classify(args: &CommonArgs) -> Outcome {
    let model = args.model.build()?;
    let sampler = args.output.sampler()?;
    let (mut min, mut max) = (
        (f64::INFINITY, C64::new(0.0, 0.0)),
        (f64::NEG_INFINITY, C64::new(0.0, 0.0)),
    );
    for z in sampler.points() {
        let p = pole_from_q(z, model.preschwarzian(z)?.q).norm();
        if p < min.0 {
            min = (p, z);
        }
        if p > max.0 {
            max = (p, z);
        }
    }
    let tol = bounds::BOUND_TOL;
    let verdict = if min.0 >= 1.0 - tol {
        "convex-consistent"
    } else if max.0 <= 1.0 + tol {
        "concave-consistent"
    } else {
        "neither"
    };
    let report = json!({
        "model": model.label(),
        "samples": sampler.count,
        "min_abs_p": json_real(min.0),
        "min_witness": complex_json(min.1),
        "max_abs_p": json_real(max.0),
        "max_witness": complex_json(max.1),
        "verdict": verdict,
        "note": "sampling evidence, not proof",
    });
    Ok((pretty(&report), true))
}

fn cmd_orders(args: &CommonArgs) -> Outcome {
    let model = args.model.build()?;
    let mut search = GridSearch::default();
    if let Some(cap) = args.output.radius_cap {
        if !(cap > 0.0 && cap < 1.0) {
            return Err(usage("--radius-cap must lie in (0, 1)"));
        }
        search = search.with_radius_cap(cap);
    }
    let up = upper_order(&model, &search)?;
    let low = lower_order(&model, &search)?;
    let report = json!({
        "model": model.label(),
        "upper": up.value,
        "lower": low.value,
        "upper_estimate": serde_json::to_value(up).expect("serializable"),
        "lower_estimate": serde_json::to_value(low).expect("serializable"),
    });
    Ok((pretty(&report), true))
}

fn cmd_verify_bound(args: &BoundArgs) -> Outcome {
    let model = args.common.model.build()?;
    let m = &args.common.model;
    let bound = Bound::from_id(&args.bound, |k| match k {
        "mu" => args.mu,
        "alpha" => m.alpha,
        "A" => m.a_param,
        "B" => m.b_param,
        _ => None,
    })
    .map_err(|e| usage(e.to_string()))?;
    let sampler = args.common.output.sampler()?;
    match bounds::verify(&model, &bound, &sampler, args.assume_hypothesis) {
        Ok(rep) => Ok((pretty(&rep.to_json()), rep.holds())),
        Err(e @ BoundError::HypothesisMismatch { .. }) => Err(usage(format!(
            "{e} (tag the model with --assume-class or pass --assume-hypothesis)"
        ))),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn cmd_count_poles(args: &CountArgs) -> Outcome {
    let c = parse_target(&args.c)?;
    if c.finite().is_some_and(|w| (w.norm() - 1.0).abs() < 1e-12) {
        return Err(usage("c must not lie on the unit circle"));
    }
    let (label, map, expected) = if args.target.trim() == "cross" {
        ("cross".to_string(), RationalMap::cross(), None)
    } else {
        let pm = PolygonModel::from_json(&read_source(&args.target)?)
            .map_err(|e| usage(e.to_string()))?;
        let expected = (!pm.is_degenerate()).then(|| pm.expected_count(c));
        (
            format!("polygon({}, k={}, m={})", pm.variant(), pm.k(), pm.m()),
            pm.pole_rational(),
            expected,
        )
    };
    let n = count_preimages(&map, c).map_err(|e| usage(e.to_string()))?;
    let agree = n.agree();
    let ok = agree && expected.map_or(true, |e| e == n.roots);
    let mut report = BTreeMap::new();
    report.insert("model", json!(label));
    report.insert("c", extended_json(c));
    report.insert("count", json!(n.winding.count));
    report.insert("winding_count", json!(n.winding.count));
    report.insert("root_count", json!(n.roots));
    report.insert("contour_radius", json!(n.winding.radius));
    report.insert("method_agreement", json!(agree));
    report.insert("expected", json!(expected));
    report.insert("holds", json!(ok));
    let text = pretty(&serde_json::to_value(report).expect("serializable"));
    emit(args.out.as_deref(), &text)?;
    Ok((String::new(), ok))
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::CertifiedConvex {
            min_pole_modulus,
            witness,
            samples,
        } => json!({
            "result": "certified_convex",
            "min_pole_modulus": json_real(*min_pole_modulus),
            "witness": complex_json(*witness),
            "samples": samples,
        }),
        Certificate::NotApplicable { reason, witness } => json!({
            "result": "not_applicable",
            "reason": reason,
            "witness": witness.map(complex_json),
        }),
    }
}

fn schwarzian_failure(e: SchwarzianError) -> Failure {
    match e {
        SchwarzianError::Hypothesis { .. } => Failure {
            code: 1,
            message: e.to_string(),
        },
        SchwarzianError::Model(m) => m.into(),
    }
}

fn cmd_schwarzian(args: &SchwarzianArgs) -> Outcome {
    let model = args.common.model.build()?;
    let profile = match args.profile {
        ProfileKind::Constant => SchwarzianProfile::Constant {
            a: args.a_const.unwrap_or_else(critical_a),
        },
        ProfileKind::Power => SchwarzianProfile::Power { n: args.n },
        ProfileKind::PowerSimple => SchwarzianProfile::PowerSimple { m: args.m },
        ProfileKind::Nehari => SchwarzianProfile::Nehari {
            t: args.common.model.t.unwrap_or(1.0),
        },
    };
    let out = &args.common.output;
    let cap = out.radius_cap.unwrap_or(CERTIFICATE_RADIUS_CAP);
    let sampler = OutputArgs {
        radius_cap: Some(cap),
        out: None,
        format: None,
        ..*out
    }
    .sampler()?;
    let cert = convexity_certificate(&model, &profile, &sampler)?;
    let mut ok = true;
    let mut report = json!({
        "model": model.label(),
        "critical_a": critical_a(),
        "critical_a_residual": critical_a_residual(),
        "profile": profile.to_string(),
        "certificate": certificate_json(&cert),
    });
    if let Some(t) = args.nehari_t {
        let rep = nehari_disk_check(&model, t, &sampler).map_err(schwarzian_failure)?;
        ok &= rep.holds();
        report["unit_disk_check"] = rep.to_json();
    }
    if let Some(k) = args.k {
        let rc = pole_radius_check(&model, k, &sampler).map_err(schwarzian_failure)?;
        ok &= rc.holds();
        report["radius_check"] = json!({
            "k": k,
            "radius": rc.radius,
            "qualifying": rc.qualifying,
            "min_excess": json_real(rc.min_excess),
            "witness": rc.witness.map(complex_json),
            "holds": rc.holds(),
        });
    }
    Ok((pretty(&report), ok))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::PoleLocus(a) => cmd_pole_locus(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Orders(a) => cmd_orders(a),
        Command::VerifyBound(a) => cmd_verify_bound(a),
        Command::CountPoles(a) => cmd_count_poles(a),
        Command::Schwarzian(a) => cmd_schwarzian(a),
    }
}

fn output_of(cli: &Cli) -> Option<&OutputArgs> {
    match &cli.command {
        Command::Classify(a) | Command::Orders(a) => Some(&a.output),
        Command::VerifyBound(a) => Some(&a.common.output),
        Command::Schwarzian(a) => Some(&a.common.output),
        Command::PoleLocus(_) | Command::CountPoles(_) => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(text, ok)| {
        if !text.is_empty() {
            match output_of(&cli) {
                Some(o) => o.emit(&text)?,
                None => emit(None, &text)?,
            }
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
