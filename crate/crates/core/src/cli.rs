//! Command-line front end. Every command prints one JSON document
//! `{status, payload, provenance}`; `--pretty` switches to indented JSON
//! followed by a plain-text table where one makes sense.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::binary::BinaryForm;
use crate::error::{Error, Result};
use crate::liealg::{ExplicitModule, StabilizerSpec, DEFAULT_MODULE_CAP};
use crate::linalg::Subspace;
use crate::monoids::{RootMonoid, WeightMonoid};
use crate::mulaw::{self, LawJson, MultiplicationLaw};
use crate::rational::{fmt_qvec, parse_q, Q};
use crate::repcalc::{self, DEFAULT_DIM_CAP};
use crate::rootdata::{RootDatum, Weight};
use crate::tangent::{self, Hypotheses};

pub const DEFAULT_PRESENTATION_BOUND: u32 = 4;
pub const DEFAULT_MEMBERSHIP_BOUND: u64 = 64;

#[derive(Debug, Parser)]
#[command(name = "invhilb", version, about = "Weight monoids, multiplication laws and invariant deformations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Truncation bound D for law windows.
    #[arg(long, global = true)]
    pub truncation: Option<i64>,
    /// Search bound (presentation degree, membership coefficients).
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    /// Dimension cap for characters and explicit modules.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON plus a human-readable table.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the polynomial system of `law-equations`/`law-tangent` to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub export_system: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LiePart {
    /// Positive root vectors.
    Unipotent,
    /// The full isotropy algebra of the vector.
    Stabilizer,
}

#[derive(Debug, Args)]
pub struct LawSource {
    /// Orbit law of this binary form, e.g. `x^2+y^2`.
    #[arg(long, group = "source")]
    pub form: Option<String>,
    /// Law read from a JSON file (a bare law or a full `orbit-law` output).
    #[arg(long, group = "source", value_name = "FILE")]
    pub law: Option<PathBuf>,
    /// The horospherical law.
    #[arg(long, group = "source")]
    pub horospherical: bool,
    /// Root datum for `--horospherical`.
    #[arg(long, default_value = "A1")]
    pub rd: String,
    /// Monoid for `--form`/`--horospherical`, e.g. `2` or `2;3`.
    pub monoid: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrix, positive roots and ρ.
    RootDatum { rd: String },
    /// Is MU ≤ LAM in the dominance order?
    Dominance { rd: String, mu: String, lam: String },
    /// Decompose V(LAM) ⊗ V(MU).
    Tensor { rd: String, lam: String, mu: String },
    /// Weyl dimension of V(LAM).
    Dim { rd: String, lam: String },
    /// Weight multiplicities of V(LAM).
    Weights { rd: String, lam: String },
    /// Highest weight vectors of an explicit module.
    Hwv { rd: String, module: String },
    /// U-coinvariants of an explicit module.
    Coinv { rd: String, module: String },
    /// The tangent space 𝔤·x.
    OrbitTangent { rd: String, module: String, vector: String },
    /// The isotropy algebra 𝔤_x.
    Stabilizer { rd: String, module: String, vector: String },
    /// Invariant first-order deformations of the orbit closure of x.
    T1 {
        rd: String,
        module: String,
        vector: String,
        /// Lie algebra of the isotropy group.
        #[arg(long, value_enum, default_value = "unipotent")]
        lie_part: LiePart,
        /// Weight congruence `f1,f2,...:modulus` cutting out the diagonal part.
        #[arg(long, value_name = "F:MOD")]
        congruence: Vec<String>,
        /// Assert that the orbit closure is normal.
        #[arg(long)]
        assert_normal: bool,
        /// Assert that the boundary has codimension at least 2.
        #[arg(long)]
        assert_codim2: bool,
    },
    /// λ − μ in root coordinates.
    TangentWeight { rd: String, lam: String, mu: String },
    /// Commutativity and associativity equations for an A1 monoid.
    LawEquations { monoid: String },
    /// Tangent space at the horospherical law for an A1 monoid.
    LawTangent { monoid: String },
    /// Contract a law by a torus point (`--point`) or formally.
    Contract {
        #[command(flatten)]
        source: LawSource,
        /// Point of the affine space on the simple roots, e.g. `1/2` or `0,1`.
        #[arg(long, conflicts_with = "formal")]
        point: Option<String>,
        /// Contract by formal parameters s1, s2, ...
        #[arg(long)]
        formal: bool,
    },
    /// Root monoid generated by the grades of a law.
    RootMonoid {
        #[command(flatten)]
        source: LawSource,
    },
    /// Multiplication law of the orbit closure of a binary form.
    OrbitLaw { form: String, monoid: String },
    /// Hilbert basis of the saturation of a monoid.
    Saturate {
        rd: String,
        monoid: String,
        /// Generators are in simple-root coordinates.
        #[arg(long)]
        root: bool,
    },
    /// Binomial relations among monoid generators.
    Presentation {
        rd: String,
        monoid: String,
        #[arg(long)]
        root: bool,
    },
    /// T¹ of the cone over the rational normal curve of degree n, n = 1..6.
    ReproduceExample1,
    /// T¹ of the orbit closure of e1 + e1∧e2 + e1∧e2∧e3 for SL(4).
    ReproduceExample2,
}

#[derive(Debug, Serialize)]
struct Provenance {
    command: String,
    version: &'static str,
    bounds: BTreeMap<&'static str, Value>,
    hypotheses: Value,
}

struct Output {
    payload: Value,
    table: Option<String>,
    bounds: BTreeMap<&'static str, Value>,
    hypotheses: Value,
}

impl Output {
    fn new(payload: Value) -> Self {
        Output {
            payload,
            table: None,
            bounds: BTreeMap::new(),
            hypotheses: Value::Null,
        }
    }

    fn bound(mut self, name: &'static str, v: impl Serialize) -> Self {
        self.bounds.insert(name, json!(v));
        self
    }

    fn table(mut self, t: String) -> Self {
        self.table = Some(t);
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable payload")
}

pub fn parse_weight(s: &str) -> Result<Weight> {
    let parts: std::result::Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match parts {
        Ok(v) if !s.trim().is_empty() => Ok(Weight(v)),
        _ => Err(Error::Validation(format!("malformed weight '{}'", s))),
    }
}

pub fn parse_monoid_gens(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';').map(|w| parse_weight(w).map(|w| w.0)).collect()
}

fn parse_point(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|t| parse_q(t).map_err(|_| Error::Validation(format!("malformed point '{}'", s))))
        .collect()
}

/// A vector either as dense rationals (`1,0,0`) or as a sum of basis labels
/// with optional coefficients (`e1+e1∧e2`, `2*x^2+1/2*y^2`).
fn parse_vector(m: &ExplicitModule, s: &str) -> Result<Vec<Q>> {
    if let Ok(dense) = s.split(',').map(parse_q).collect::<Result<Vec<Q>>>() {
        if dense.len() != m.dim() {
            return Err(Error::Validation(format!(
                "vector has {} entries, module has dimension {}",
                dense.len(),
                m.dim()
            )));
        }
        return Ok(dense);
    }
    let mut v = vec![Q::from_integer(0.into()); m.dim()];
    for term in s.split('+').map(str::trim) {
        let (coef, label) = match term.split_once('*') {
            Some((c, l)) if parse_q(c).is_ok() => (parse_q(c)?, l),
            _ => (Q::from_integer(1.into()), term),
        };
        let j = m
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Validation(format!("unknown basis label '{}'", label)))?;
        v[j] += coef;
    }
    Ok(v)
}

fn parse_congruence(s: &str) -> Result<(Vec<i64>, u64)> {
    let bad = || Error::Validation(format!("malformed congruence '{}'", s));
    let (f, m) = s.split_once(':').ok_or_else(bad)?;
    let modulus = m.trim().parse::<u64>().map_err(|_| bad())?;
    Ok((parse_weight(f).map_err(|_| bad())?.0, modulus))
}

fn subspace_json(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(|v| fmt_qvec(v)).collect::<Vec<_>>(),
    })
}

fn cap_usize(g: &GlobalOpts) -> usize {
    g.cap.map_or(DEFAULT_MODULE_CAP, |c| c as usize)
}

fn module(rd: &RootDatum, expr: &str, g: &GlobalOpts) -> Result<ExplicitModule> {
    crate::liealg::build_module(rd, &crate::liealg::ModuleExpr::parse(expr)?, cap_usize(g))
}

fn a1_monoid(s: &str) -> Result<WeightMonoid> {
    let rd = RootDatum::from_label("A1")?;
    WeightMonoid::new(&rd, parse_monoid_gens(s)?.into_iter().map(Weight).collect())
}

fn require_truncation(g: &GlobalOpts) -> Result<i64> {
    g.truncation
        .ok_or_else(|| Error::Usage("this command needs --truncation D".to_string()))
}

fn load_law(src: &LawSource, g: &GlobalOpts) -> Result<MultiplicationLaw> {
    if let Some(path) = &src.law {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {}", path.display(), e)))?;
        let bad = |e: serde_json::Error| Error::Validation(format!("malformed law file: {}", e));
        let mut doc: Value = serde_json::from_str(&text).map_err(bad)?;
        if let Some(payload) = doc.get_mut("payload") {
            doc = payload.take();
        }
        let j: LawJson = serde_json::from_value(doc).map_err(bad)?;
        return MultiplicationLaw::from_json(&j);
    }
    let monoid_arg = src
        .monoid
        .as_deref()
        .ok_or_else(|| Error::Usage("a monoid argument is required".to_string()))?;
    let d = require_truncation(g)?;
    if let Some(f) = &src.form {
        return mulaw::orbit_law(&BinaryForm::parse(f)?, &a1_monoid(monoid_arg)?, d);
    }
    if src.horospherical {
        let rd = RootDatum::parse(&src.rd)?;
        let m = WeightMonoid::new(&rd, parse_monoid_gens(monoid_arg)?.into_iter().map(Weight).collect())?;
        return mulaw::horospherical_law(&m, d);
    }
    Err(Error::Usage("one of --form, --law or --horospherical is required".to_string()))
}

fn export_system(g: &GlobalOpts, sys: &mulaw::PolySystem) -> Result<()> {
    if let Some(path) = &g.export_system {
        std::fs::write(path, sys.export())
            .map_err(|e| Error::Resource(format!("cannot write {}: {}", path.display(), e)))?;
    }
    Ok(())
}

fn example1_table(rows: &[(usize, tangent::TangentReport)]) -> String {
    let mut t = format!("{:>3}  {:>6}  {:>6}  {:>8}  {:>3}  weights\n", "n", "normal", "V^Gx", "g/gx^Gx", "T1");
    for (n, r) in rows {
        let w: Vec<String> = r.weights.iter().map(ToString::to_string).collect();
        t.push_str(&format!(
            "{:>3}  {:>6}  {:>6}  {:>8}  {:>3}  {}\n",
            n,
            r.dim_normal_fixed,
            r.dim_v_fixed,
            r.dim_g_mod_gx_fixed,
            r.dim_t1_invariant,
            w.join(", ")
        ));
    }
    t
}

fn dispatch(cmd: &Command, g: &GlobalOpts) -> Result<Output> {
    let dim_cap = g.cap.unwrap_or(DEFAULT_DIM_CAP);
    Ok(match cmd {
        Command::RootDatum { rd } => {
            let rd = RootDatum::parse(rd)?;
            Output::new(json!({
                "label": rd.label(),
                "rank": rd.rank(),
                "cartan": rd.cartan(),
                "positive_roots": rd.positive_roots(),
                "rho": rd.rho(),
            }))
        }
        Command::Dominance { rd, mu, lam } => {
            let rd = RootDatum::parse(rd)?;
            Output::new(json!(rd.dominance_leq(&parse_weight(mu)?, &parse_weight(lam)?)?))
        }
        Command::Tensor { rd, lam, mu } => {
            let rd = RootDatum::parse(rd)?;
            let d = repcalc::tensor_decompose(&rd, &parse_weight(lam)?, &parse_weight(mu)?, dim_cap)?;
            let t: String = d
                .summands
                .iter()
                .rev()
                .map(|(w, m)| format!("{:<12} {}\n", w.to_string(), m))
                .collect();
            Output::new(to_value(&d)).bound("cap", dim_cap).table(t)
        }
        Command::Dim { rd, lam } => {
            let rd = RootDatum::parse(rd)?;
            Output::new(json!(repcalc::weyl_dim(&rd, &parse_weight(lam)?)?))
        }
        Command::Weights { rd, lam } => {
            let rd = RootDatum::parse(rd)?;
            let t = repcalc::weight_multiplicities(&rd, &parse_weight(lam)?, dim_cap)?;
            Output::new(to_value(&t)).bound("cap", dim_cap)
        }
        Command::Hwv { rd, module: expr } => {
            let m = module(&RootDatum::parse(rd)?, expr, g)?;
            let hw: BTreeMap<String, Vec<Vec<String>>> = m
                .highest_weight_vectors()
                .into_iter()
                .map(|(w, vs)| (w.to_string(), vs.iter().map(|v| fmt_qvec(v)).collect()))
                .collect();
            Output::new(json!({ "labels": m.labels(), "vectors": hw })).bound("cap", cap_usize(g))
        }
        Command::Coinv { rd, module: expr } => {
            let m = module(&RootDatum::parse(rd)?, expr, g)?;
            let c = m.u_coinvariants();
            let reps: Vec<Value> = c
                .representatives
                .iter()
                .map(|(w, v)| json!({ "weight": w, "vector": fmt_qvec(v) }))
                .collect();
            Output::new(json!({ "dim": c.dim(), "labels": m.labels(), "representatives": reps }))
                .bound("cap", cap_usize(g))
        }
        Command::OrbitTangent { rd, module: expr, vector } => {
            let m = module(&RootDatum::parse(rd)?, expr, g)?;
            let x = parse_vector(&m, vector)?;
            Output::new(subspace_json(&m.orbit_tangent(&x)?)).bound("cap", cap_usize(g))
        }
        Command::Stabilizer { rd, module: expr, vector } => {
            let m = module(&RootDatum::parse(rd)?, expr, g)?;
            let x = parse_vector(&m, vector)?;
            let s = Subspace::span(m.sl().dim(), &m.stabilizer_lie(&x)?);
            let names: Vec<String> = m.sl().elems().iter().map(ToString::to_string).collect();
            let mut v = subspace_json(&s);
            v["chevalley_basis"] = json!(names);
            Output::new(v).bound("cap", cap_usize(g))
        }
        Command::T1 {
            rd,
            module: expr,
            vector,
            lie_part,
            congruence,
            assert_normal,
            assert_codim2,
        } => {
            let m = module(&RootDatum::parse(rd)?, expr, g)?;
            let x = parse_vector(&m, vector)?;
            let mut stab = match lie_part {
                LiePart::Unipotent => StabilizerSpec::unipotent(m.sl()),
                LiePart::Stabilizer => StabilizerSpec {
                    lie_part: m.stabilizer_lie(&x)?,
                    diag_part: Vec::new(),
                },
            };
            for c in congruence {
                let (f, modulus) = parse_congruence(c)?;
                stab = stab.with_congruence(f, modulus);
            }
            let hyp = Hypotheses {
                normal: *assert_normal,
                boundary_codim2: *assert_codim2,
            };
            let r = tangent::t1_invariant(&m, &x, &stab, hyp)?;
            let mut out = Output::new(to_value(&r)).bound("cap", cap_usize(g));
            out.hypotheses = to_value(&hyp);
            out
        }
        Command::TangentWeight { rd, lam, mu } => {
            let rd = RootDatum::parse(rd)?;
            let w = tangent::tangent_weight(&rd, &parse_weight(lam)?, &parse_weight(mu)?)?;
            Output::new(json!({ "root_coords": w, "display": w.to_string() }))
        }
        Command::LawEquations { monoid } => {
            let d = require_truncation(g)?;
            let sys = mulaw::law_equations(&a1_monoid(monoid)?, d)?;
            export_system(g, &sys)?;
            let unknowns: Vec<Value> = sys
                .unknowns
                .iter()
                .map(|u| json!({ "name": u.to_string(), "grade": mulaw::var_grade(u) }))
                .collect();
            Output::new(json!({ "unknowns": unknowns, "equations": sys.equations })).bound("truncation", d)
        }
        Command::LawTangent { monoid } => {
            let d = require_truncation(g)?;
            let sys = mulaw::law_equations(&a1_monoid(monoid)?, d)?;
            export_system(g, &sys)?;
            let t = mulaw::tangent_at_horospherical(&sys)?;
            Output::new(json!({ "tangent": t, "bound_limited": true })).bound("truncation", d)
        }
        Command::Contract { source, point, formal } => {
            let law = load_law(source, g)?;
            let out = if *formal {
                mulaw::contract_formal(&law)?
            } else {
                let p = point
                    .as_deref()
                    .ok_or_else(|| Error::Usage("contract needs --point or --formal".to_string()))?;
                mulaw::contract(&law, &parse_point(p)?)?
            };
            Output::new(to_value(&out.to_json())).bound("truncation", law.truncation())
        }
        Command::RootMonoid { source } => {
            let law = load_law(source, g)?;
            let rm = mulaw::root_monoid_of_law(&law)?;
            let sat = rm.saturation()?;
            Output::new(json!({
                "monoid": rm.to_json(),
                "bound_limited": rm.bound_limited,
                "saturation": sat.to_json(),
                "saturation_is_free": sat.is_free()?,
            }))
            .bound("truncation", law.truncation())
        }
        Command::OrbitLaw { form, monoid } => {
            let d = require_truncation(g)?;
            let law = mulaw::orbit_law(&BinaryForm::parse(form)?, &a1_monoid(monoid)?, d)?;
            Output::new(to_value(&law.to_json())).bound("truncation", d)
        }
        Command::Saturate { rd, monoid, root } => {
            let rd = RootDatum::parse(rd)?;
            let gens = parse_monoid_gens(monoid)?;
            if *root {
                let m = RootMonoid::new(&rd, gens)?;
                let s = m.saturation()?;
                Output::new(json!({ "saturation": s.to_json(), "is_free": s.is_free()? }))
            } else {
                let m = WeightMonoid::new(&rd, gens.into_iter().map(Weight).collect())?;
                let s = m.saturation()?;
                Output::new(json!({ "saturation": s.to_json(), "is_free": s.is_free()? }))
            }
        }
        Command::Presentation { rd, monoid, root } => {
            let rd = RootDatum::parse(rd)?;
            let gens = parse_monoid_gens(monoid)?;
            let bound = g.bound.map_or(DEFAULT_PRESENTATION_BOUND, |b| b as u32);
            let p = if *root {
                RootMonoid::new(&rd, gens)?.presentation(bound)?
            } else {
                WeightMonoid::new(&rd, gens.into_iter().map(Weight).collect())?.presentation(bound)?
            };
            let rendered: Vec<String> = p.relations.iter().map(|r| r.render()).collect();
            let t = rendered.iter().map(|r| format!("{}\n", r)).collect();
            Output::new(json!({
                "relations": p.relations,
                "rendered": rendered,
                "bound_limited": p.bound_limited,
            }))
            .bound("bound", bound)
            .table(t)
        }
        Command::ReproduceExample1 => {
            let rows: Vec<(usize, tangent::TangentReport)> = (1..=6)
                .map(|n| tangent::example1(n).map(|r| (n, r)))
                .collect::<Result<_>>()?;
            let payload: Vec<Value> = rows
                .iter()
                .map(|(n, r)| json!({ "n": n, "report": r }))
                .collect();
            let dims: Vec<usize> = rows.iter().map(|(_, r)| r.dim_t1_invariant).collect();
            let mut out = Output::new(json!({ "dims": dims, "rows": payload })).table(example1_table(&rows));
            out.hypotheses = to_value(&Hypotheses::asserted());
            out
        }
        Command::ReproduceExample2 => {
            let r = tangent::example2()?;
            let weights: Vec<String> = r.weights.iter().map(ToString::to_string).collect();
            let t = format!("T1 dim {}\nweights {}\n", r.dim_t1_invariant, weights.join(", "));
            let mut out = Output::new(json!({ "dim": r.dim_t1_invariant, "weights": weights, "report": r })).table(t);
            out.hypotheses = to_value(&Hypotheses::asserted());
            out
        }
    })
}

fn render(status: &str, payload: Value, prov: Provenance, pretty: bool, table: Option<String>) -> String {
    let doc = json!({ "status": status, "payload": payload, "provenance": prov });
    if pretty {
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        if let Some(t) = table {
            s.push_str(&t);
        }
        s
    } else {
        let mut s = serde_json::to_string(&doc).expect("json");
        s.push('\n');
        s
    }
}

/// Runs one command line; returns the text to print and the exit code.
pub fn run<I, S>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let command_line = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let provenance = |bounds, hypotheses| Provenance {
        command: command_line.clone(),
        version: env!("CARGO_PKG_VERSION"),
        bounds,
        hypotheses,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), 0);
            }
            let payload = json!({ "kind": "usage", "message": e.to_string().trim() });
            return (render("error", payload, provenance(BTreeMap::new(), Value::Null), false, None), 2);
        }
    };
    match dispatch(&cli.command, &cli.global) {
        Ok(out) => (
            render(
                "ok",
                out.payload,
                provenance(out.bounds, out.hypotheses),
                cli.global.pretty,
                out.table,
            ),
            0,
        ),
        Err(e) => {
            let kind = match &e {
                Error::Usage(_) => "usage",
                Error::Validation(_) => "validation",
                Error::Precondition(_) => "precondition",
                Error::Resource(_) => "resource",
                Error::NotMultiplicityFree(_) => "not-multiplicity-free",
                Error::Window(_) => "window",
                Error::Inconsistent(_) => "inconsistent",
            };
            let payload = json!({ "kind": kind, "message": e.to_string() });
            (
                render("error", payload, provenance(BTreeMap::new(), Value::Null), cli.global.pretty, None),
                e.exit_code(),
            )
        }
    }
}
