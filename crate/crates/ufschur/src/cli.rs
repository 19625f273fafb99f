//! Command-line front end. `run` parses arguments, computes the requested
//! object and renders it as JSON or CSV; the binary only forwards to it.

use crate::combinat::{RootType, StrictPartition};
use crate::duals::{
    coproduct_schur, dual_basis, max_strict_len, phat_list, product_in_basis, qhat_list, qtilde_list, DualKind,
};
use crate::error::{Error, Result};
use crate::fgl::FglContext;
use crate::lazard::{Beta, Specialization};
use crate::localization::{basis_function, expand_greedy, gkm_check, localize, phi, Window};
use crate::series::{TruncSeries, Var, VarSet};
use crate::sympoly::{Basis, ExpCoeff, Expansion};
use crate::uschur::{BMode, SchurKind, USchurRequest};
use crate::verify::{self, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;

/// Universal factorial Schur functions over the Lazard ring.
#[derive(Parser, Debug)]
#[command(name = "ufschur", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Formal group law: F(x1, x2), the formal inverse, n-series.
    Fgl {
        #[arg(value_enum)]
        verb: FglVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Universal factorial Schur functions.
    Schur {
        #[arg(value_enum)]
        verb: SchurVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Dual functions from the Cauchy identity.
    Dual {
        #[arg(value_enum)]
        verb: DualVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Coproducts and structure constants.
    Hopf {
        #[arg(value_enum)]
        verb: HopfVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Localization, GKM conditions and basis expansion.
    Loc {
        #[arg(value_enum)]
        verb: LocVerb,
        #[command(flatten)]
        opts: Opts,
    },
    /// Verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FglVerb {
    Sum,
    Inverse,
    Nseries,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SchurVerb {
    Pq,
    Sfn,
    SfnDouble,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DualVerb {
    Qhat,
    Phat,
    Qtilde,
    Pair,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HopfVerb {
    Coproduct,
    Structure,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LocVerb {
    Phi,
    Gkm,
    Expand,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Supersym,
    Stability,
    Factorization,
    Vanishing,
    Cauchy,
    Duality,
    Relations,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LocType {
    A,
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Total-degree truncation.
    #[arg(long, default_value_t = 5)]
    pub trunc: u32,
    /// Number of x-variables.
    #[arg(long)]
    pub nvars: Option<usize>,
    /// Number of y-variables.
    #[arg(long)]
    pub yvars: Option<usize>,
    /// Partition as a comma list, e.g. 3,1.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Second partition (a point label or the other factor).
    #[arg(long)]
    pub mu: Option<String>,
    /// zero, symbolic (smallest prefix) or symbolic:M.
    #[arg(long, default_value = "zero")]
    pub b: String,
    /// universal, additive, mult:BETA (u + v + BETA uv) or ktheory:BETA
    /// (u + v - BETA uv); BETA is an integer or `beta` to keep a_11.
    #[arg(long, default_value = "universal")]
    pub spec: String,
    #[arg(long, value_enum, ignore_case = true, default_value_t = Kind::P)]
    pub kind: Kind,
    /// Use P^L(..)^+ in `schur pq`.
    #[arg(long)]
    pub plus: bool,
    /// The n of `fgl nseries`.
    #[arg(long, default_value_t = 2)]
    pub n: i64,
    /// Root system of `loc` verbs.
    #[arg(long = "type", value_enum, ignore_case = true, default_value_t = LocType::C)]
    pub loc_type: LocType,
    /// Window size K of `loc` verbs (defaults to the truncation).
    #[arg(long)]
    pub window: Option<u32>,
    /// Largest partition size in `verify`.
    #[arg(long, default_value_t = 4)]
    pub max_size: u32,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Outcome of one invocation.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Artifact {
    Series(TruncSeries),
    Indexed(&'static str, Vec<(Value, TruncSeries)>),
    Expansion(Expansion, Value),
    Family(crate::localization::LocalizedFamily),
    Table { json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>> },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub fn parse_parts(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() || s == "0" {
        return Ok(Vec::new());
    }
    let mut v: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| usage(format!("bad partition entry {p:?}"))))
        .collect::<Result<_>>()?;
    v.retain(|&p| p > 0);
    Ok(v)
}

pub fn parse_spec(s: &str) -> Result<Specialization> {
    let beta = |b: &str| match b {
        "beta" => Ok(Beta::Symbolic),
        _ => b.parse::<i64>().map(Beta::Int).map_err(|_| usage(format!("bad beta {b:?}"))),
    };
    match s {
        "universal" => Ok(Specialization::Universal),
        "additive" => Ok(Specialization::Additive),
        _ => {
            if let Some(b) = s.strip_prefix("mult:") {
                Ok(Specialization::Multiplicative(beta(b)?))
            } else if let Some(b) = s.strip_prefix("ktheory:") {
                Ok(Specialization::KTheory(beta(b)?))
            } else {
                Err(usage(format!("unknown specialization {s:?}")))
            }
        }
    }
}

/// `None` means "symbolic with the smallest prefix the function needs".
pub fn parse_b(s: &str) -> Result<Option<BMode>> {
    match s {
        "zero" => Ok(Some(BMode::Zero)),
        "symbolic" => Ok(None),
        _ => match s.strip_prefix("symbolic:") {
            Some(m) => m.parse::<usize>().map(|m| Some(BMode::Symbolic(m))).map_err(|_| usage(format!("bad prefix {m:?}"))),
            None => Err(usage(format!("unknown b mode {s:?}"))),
        },
    }
}

const MAX_CLI_TRUNC: u32 = 12;

impl Opts {
    fn ctx(&self) -> Result<FglContext> {
        if self.trunc == 0 || self.trunc > MAX_CLI_TRUNC {
            return Err(usage(format!("--trunc must be in 1..={MAX_CLI_TRUNC}")));
        }
        FglContext::new(self.trunc, parse_spec(&self.spec)?)
    }

    fn lambda(&self) -> Result<Vec<u32>> {
        parse_parts(self.lambda.as_deref().ok_or_else(|| usage("--lambda is required"))?)
    }

    fn mu(&self) -> Result<Vec<u32>> {
        self.mu.as_deref().map(parse_parts).unwrap_or(Ok(Vec::new()))
    }

    fn strict(&self) -> Result<StrictPartition> {
        StrictPartition::new(self.lambda()?).map_err(|e| usage(e.to_string()))
    }

    fn window(&self, default_n: usize) -> Result<Window> {
        let kind = match self.loc_type {
            LocType::A => RootType::A,
            LocType::C => RootType::C,
            LocType::D => RootType::D,
        };
        Window::new(kind, self.nvars.unwrap_or(default_n), self.window.unwrap_or(self.trunc))
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    let opts = match &cli.command {
        Command::Fgl { opts, .. }
        | Command::Schur { opts, .. }
        | Command::Dual { opts, .. }
        | Command::Hopf { opts, .. }
        | Command::Loc { opts, .. }
        | Command::Verify { opts, .. } => opts.clone(),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(opts.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("cannot start workers: {e}\n") },
    };
    let result = pool.install(|| dispatch(&cli.command, &opts));
    let (artifact, failed) = match result {
        Ok(x) => x,
        Err(e @ (Error::Argument(_) | Error::Parse(_))) => {
            return Outcome { code: 2, stdout: String::new(), stderr: format!("usage error: {e}\n") }
        }
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("{e}\n") },
    };
    let text = match render(&artifact, opts.format) {
        Ok(t) => t,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("{e}\n") },
    };
    let mut out = Outcome { code: if failed.is_some() { 1 } else { 0 }, stdout: String::new(), stderr: failed.unwrap_or_default() };
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(text.as_bytes())) {
                return Outcome { code: 2, stdout: String::new(), stderr: format!("cannot write {}: {e}\n", path.display()) };
            }
        }
        None => out.stdout = text,
    }
    out
}

/// The artifact and, for checks, the first failure.
fn dispatch(cmd: &Command, o: &Opts) -> Result<(Artifact, Option<String>)> {
    let ctx = o.ctx()?;
    let done = |a: Artifact| Ok((a, None));
    match cmd {
        Command::Fgl { verb, .. } => {
            let vars = VarSet::standard(2, 0, 0, false)?;
            let x1 = TruncSeries::var(&vars, o.trunc, Var::x(1))?;
            let x2 = TruncSeries::var(&vars, o.trunc, Var::x(2))?;
            let one = VarSet::standard(1, 0, 0, false)?;
            let x = TruncSeries::var(&one, o.trunc, Var::x(1))?;
            done(Artifact::Series(match verb {
                FglVerb::Sum => ctx.formal_sum(&x1, &x2)?,
                FglVerb::Inverse => ctx.formal_inverse(&x)?,
                FglVerb::Nseries => ctx.n_series(o.n, &x)?,
            }))
        }
        Command::Schur { verb, .. } => {
            let lambda = o.lambda()?;
            let kind = match (verb, o.kind) {
                (SchurVerb::Pq, Kind::P) => SchurKind::P,
                (SchurVerb::Pq, Kind::Q) => SchurKind::Q,
                (SchurVerb::Sfn, _) => SchurKind::S,
                (SchurVerb::SfnDouble, _) => SchurKind::SDouble,
            };
            let n = o.nvars.unwrap_or(lambda.len().max(1));
            if lambda.len() > n {
                return Err(usage(format!("{} parts need --nvars at least {}", lambda.len(), lambda.len())));
            }
            let b = parse_b(&o.b)?.unwrap_or_else(|| BMode::Symbolic(USchurRequest::minimal_b(kind, &lambda, n)));
            let plus = o.plus && kind == SchurKind::P;
            done(Artifact::Series(USchurRequest { kind, lambda, n, b, ctx, plus }.compute()?))
        }
        Command::Dual { verb, .. } => dual(*verb, o, &ctx),
        Command::Hopf { verb, .. } => {
            let p = o.kind == Kind::P;
            match verb {
                HopfVerb::Coproduct => {
                    let n = o.nvars.unwrap_or(max_strict_len(o.trunc));
                    let e = coproduct_schur(&o.strict()?, n, n, p, &ctx)?;
                    done(Artifact::Expansion(e, json!({"n1": n, "n2": n})))
                }
                HopfVerb::Structure => {
                    let mu = StrictPartition::new(o.lambda()?).map_err(|e| usage(e.to_string()))?;
                    let nu = StrictPartition::new(o.mu()?).map_err(|e| usage(e.to_string()))?;
                    if mu.size() + nu.size() > o.trunc {
                        return Err(usage("|lambda| + |mu| must not exceed --trunc"));
                    }
                    let (kind, basis) = if p { (DualKind::QHat, Basis::QHat) } else { (DualKind::PHat, Basis::PHat) };
                    let duals = dual_basis(kind, &ctx)?;
                    let vars = duals.values().next().map(|s| s.vars().clone()).ok_or_else(|| Error::Internal("empty dual basis".into()))?;
                    let zero = TruncSeries::zero(&vars, o.trunc);
                    let f = duals.get(mu.parts()).unwrap_or(&zero).mul(duals.get(nu.parts()).unwrap_or(&zero))?;
                    done(Artifact::Expansion(product_in_basis(&f, basis, &ctx)?, json!({"lambda": mu.parts(), "mu": nu.parts()})))
                }
            }
        }
        Command::Loc { verb, .. } => loc(*verb, o, &ctx),
        Command::Verify { suite, .. } => {
            let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            let vopts = VerifyOptions { trunc: o.trunc, max_size: o.max_size, spec: parse_spec(&o.spec)? };
            let reports = verify::run(&name, &vopts)?;
            let failure = reports.iter().find_map(|r| {
                r.first_failure().map(|c| format!("verification failed: {}: {} {}\n", r.suite, c.name, c.detail))
            });
            let mut rows = Vec::new();
            for r in &reports {
                for c in &r.checks {
                    rows.push(vec![r.suite.clone(), c.name.clone(), c.passed.to_string(), c.detail.clone()]);
                }
            }
            let json = json!({
                "passed": failure.is_none(),
                "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            Ok((Artifact::Table { json, header: vec!["suite", "check", "passed", "detail"], rows }, failure))
        }
    }
}

fn dual(verb: DualVerb, o: &Opts, ctx: &FglContext) -> Result<(Artifact, Option<String>)> {
    let pick = |list: Vec<TruncSeries>| -> Result<Artifact> {
        let ks: Vec<usize> = match &o.lambda {
            Some(_) => {
                let l = o.lambda()?;
                if l.len() != 1 || l[0] > o.trunc {
                    return Err(usage("--lambda must be a single index up to --trunc"));
                }
                vec![l[0] as usize]
            }
            None => (1..=o.trunc as usize).collect(),
        };
        Ok(Artifact::Indexed("k", ks.into_iter().map(|k| (json!(k), list[k].clone())).collect()))
    };
    let m = o.yvars.unwrap_or(4);
    let a = match verb {
        DualVerb::Qhat => pick(qhat_list(m, ctx)?)?,
        DualVerb::Phat => pick(phat_list(m, ctx)?)?,
        DualVerb::Qtilde => pick(qtilde_list(o.nvars.unwrap_or(4), ctx)?)?,
        DualVerb::Pair => {
            // the dual of Q^L is phat, the dual of P^L is qhat
            let kind = if o.kind == Kind::Q { DualKind::PHat } else { DualKind::QHat };
            let duals = dual_basis(kind, ctx)?;
            let items: Vec<(Value, TruncSeries)> = match &o.lambda {
                Some(_) => {
                    let l = o.strict()?;
                    if l.size() > o.trunc {
                        return Err(usage("|lambda| must not exceed --trunc"));
                    }
                    let s = match duals.get(l.parts()) {
                        Some(s) => s.clone(),
                        None => {
                            let vars = duals.values().next().map(|s| s.vars().clone()).ok_or_else(|| Error::Internal("empty dual basis".into()))?;
                            TruncSeries::zero(&vars, o.trunc)
                        }
                    };
                    vec![(json!(l.parts()), s)]
                }
                None => duals.iter().map(|(l, s)| (json!(l), s.clone())).collect(),
            };
            Artifact::Indexed("lambda", items)
        }
    };
    Ok((a, None))
}

fn loc(verb: LocVerb, o: &Opts, ctx: &FglContext) -> Result<(Artifact, Option<String>)> {
    let w = o.window(if o.loc_type == LocType::D { 4 } else { 2 })?;
    let lambda = o.lambda.as_deref().map(parse_parts).unwrap_or(Ok(Vec::new()))?;
    if !w.contains(&lambda) {
        return Err(usage(format!("{lambda:?} is not a label of the window")));
    }
    let f = basis_function(&lambda, &w, ctx)?;
    match verb {
        LocVerb::Phi => match &o.mu {
            Some(_) => {
                let mu = o.mu()?;
                if !w.contains(&mu) {
                    return Err(usage(format!("{mu:?} is not a label of the window")));
                }
                Ok((Artifact::Series(phi(&f, &mu, &w, ctx)?), None))
            }
            None => Ok((Artifact::Family(localize(&f, &w, ctx)?), None)),
        },
        LocVerb::Gkm => {
            let f = match &o.mu {
                Some(_) => {
                    let g = basis_function(&o.mu()?, &w, ctx)?;
                    let vars = crate::localization::joint_vars(&f, &g)?;
                    f.relabel(&vars, Some)?.mul(&g.relabel(&vars, Some)?)?
                }
                None => f,
            };
            let r = gkm_check(&localize(&f, &w, ctx)?, ctx)?;
            let failure = r.first_failure.as_ref().map(|e| format!("GKM condition fails: {e}\n"));
            let json = json!({
                "window": {"type": format!("{:?}", w.kind), "n": w.n, "k": w.k},
                "passed": r.passed,
                "pairs_checked": r.pairs_checked,
                "pairs_skipped": r.pairs_skipped,
                "first_failure": r.first_failure,
            });
            let rows = vec![
                vec!["passed".into(), r.passed.to_string()],
                vec!["pairs_checked".into(), r.pairs_checked.to_string()],
                vec!["pairs_skipped".into(), r.pairs_skipped.to_string()],
                vec!["first_failure".into(), r.first_failure.clone().unwrap_or_default()],
            ];
            Ok((Artifact::Table { json, header: vec!["key", "value"], rows }, failure))
        }
        LocVerb::Expand => {
            let mu = o.mu()?;
            let g = basis_function(&mu, &w, ctx)?;
            let vars = crate::localization::joint_vars(&f, &g)?;
            let prod = f.relabel(&vars, Some)?.mul(&g.relabel(&vars, Some)?)?;
            let e = expand_greedy(&prod, &w, ctx)?;
            let failure = (!e.residual_zero).then(|| "greedy expansion left a nonzero residual\n".to_string());
            let meta = json!({"steps": e.steps, "residual_zero": e.residual_zero, "window": {"type": format!("{:?}", w.kind), "n": w.n, "k": w.k}});
            Ok((Artifact::Expansion(e.expansion, meta), failure))
        }
    }
}

fn series_rows(prefix: &[String], s: &TruncSeries, rows: &mut Vec<Vec<String>>) {
    for (m, c) in s.coeffs() {
        let mut r = prefix.to_vec();
        r.push(s.fmt_mono(m));
        r.push(c.to_string());
        rows.push(r);
    }
}

fn label_str(v: &Value) -> String {
    match v {
        Value::Array(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn render(a: &Artifact, format: Format) -> Result<String> {
    let (json, header, rows): (Value, Vec<&str>, Vec<Vec<String>>) = match a {
        Artifact::Series(s) => {
            let mut rows = Vec::new();
            series_rows(&[], s, &mut rows);
            (s.to_json(), vec!["monomial", "coefficient"], rows)
        }
        Artifact::Indexed(key, items) => {
            let mut rows = Vec::new();
            for (k, s) in items {
                series_rows(&[label_str(k)], s, &mut rows);
            }
            let json = Value::Array(items.iter().map(|(k, s)| json!({*key: k, "value": s.to_json()})).collect());
            (json, vec![key, "monomial", "coefficient"], rows)
        }
        Artifact::Expansion(e, meta) => {
            let mut rows = Vec::new();
            for (l, c) in &e.entries {
                let l = label_str(&json!(l));
                match c {
                    ExpCoeff::Ring(c) => rows.push(vec![l, "1".into(), c.to_string()]),
                    ExpCoeff::Series(s) => series_rows(&[l], s, &mut rows),
                }
            }
            let mut json = e.to_json();
            if let (Value::Object(m), Value::Object(extra)) = (&mut json, meta) {
                m.extend(extra.clone());
            }
            (json, vec!["label", "monomial", "coefficient"], rows)
        }
        Artifact::Family(f) => {
            let mut rows = Vec::new();
            for (mu, s) in &f.points {
                series_rows(&[label_str(&json!(mu))], s, &mut rows);
            }
            (f.to_json(), vec!["mu", "monomial", "coefficient"], rows)
        }
        Artifact::Table { json, header, rows } => (json.clone(), header.clone(), rows.clone()),
    };
    match format {
        Format::Json => serde_json::to_string_pretty(&json).map(|s| s + "\n").map_err(|e| Error::Internal(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(&header).map_err(io)?;
            for r in &rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}
