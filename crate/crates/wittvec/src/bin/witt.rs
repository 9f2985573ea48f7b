//! Command-line front end: exact Witt-vector arithmetic, universal
//! polynomials, the sequence model, relation certificates, p-power
//! Vandermonde determinants, and the randomized verification suites.
//!
//! Results print as JSON by default (`--format text` switches to plain
//! text); the polynomial listing and suite reports default to text.  Exit
//! codes: 0 on success, 1 on domain outcomes (a sequence that is not a
//! member, an element outside the saturation, a failed verification), 2 on
//! usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::Value;
use std::process::ExitCode;
use std::str::FromStr;

use wittvec::relations::{
    eta_evaluate, normalize_signs_with_cert, reduce, verify_certificate, FormalSum,
    RelationCertificate, Reduction,
};
use wittvec::ring::{int_to_json, json_to_int, poly_eval_int, RingDescriptor, RingElem};
use wittvec::univ::{universal_polys_cached, UniversalPolySet};
use wittvec::vandermonde::{
    find_nonvanishing_point, independence_check, Independence, PVandermonde,
};
use wittvec::witt::{
    coords_from_arg, frobenius, ghost_from_arg, ghost_inverse, ghost_map, int_scale,
    teich_v_decompose, teichmuller, verschiebung, witt_add, witt_neg, WittContext, WittVector,
};
use wittvec::xmodel::{
    decomposition_to_json, generator_terms_from_json, project_to_w, x_generator, x_membership,
    Presentation, XError,
};

#[derive(Parser)]
#[command(
    name = "witt",
    version,
    about = "Exact arithmetic for truncated p-typical Witt vectors",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// The odd prime p.
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Truncation length n.
    #[arg(long, global = true)]
    len: Option<usize>,

    /// Base ring: int, mod:<m>, or poly:<vars>[:mod:<m>].
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Output format (JSON unless a command documents otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trials per invariant for randomized suites.
    #[arg(long, global = true)]
    trials: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Add two Witt vectors given as coordinate arrays.
    Add(TwoVectors),
    /// Negate a Witt vector.
    Neg(OneVector),
    /// Multiply a Witt vector by an integer.
    Scale(ScaleArgs),
    /// Apply the shift operator V.
    V(OneVector),
    /// Apply the Frobenius operator F (shortens the vector by one).
    F(OneVector),
    /// Teichmüller lift of a ring element.
    Teich(OneElem),
    /// Ghost components of a Witt vector.
    Ghost(OneVector),
    /// Recover Witt coordinates from ghost components.
    FromGhost(OneVector),
    /// Decompose a Witt vector as a sum of shifted Teichmüller lifts.
    Decompose(OneVector),
    /// The same vector operations, grouped.
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// Universal addition and Frobenius polynomials.
    UnivPoly {
        #[command(subcommand)]
        op: UnivOp,
    },
    /// The sequence model: generators, membership, projection.
    Cd {
        #[command(subcommand)]
        op: CdOp,
    },
    /// Relation formal sums: normalization, evaluation, the membership
    /// decision procedure, and certificate checking.
    C {
        #[command(subcommand)]
        op: COp,
    },
    /// p-power Vandermonde determinants and independence checks.
    Vdm {
        #[command(subcommand)]
        op: VdmOp,
    },
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum WittOp {
    Add(TwoVectors),
    Neg(OneVector),
    Scale(ScaleArgs),
    V(OneVector),
    F(OneVector),
    Teich(OneElem),
    Ghost(OneVector),
    FromGhost(OneVector),
    Decompose(OneVector),
}

#[derive(Args)]
struct TwoVectors {
    /// First vector, e.g. "[1,0]".
    #[arg(allow_hyphen_values = true)]
    x: String,
    /// Second vector.
    #[arg(allow_hyphen_values = true)]
    y: String,
}

#[derive(Args)]
struct OneVector {
    /// Vector as a coordinate array, e.g. "[1,0]".
    #[arg(allow_hyphen_values = true)]
    x: String,
}

#[derive(Args)]
struct ScaleArgs {
    /// Integer multiplier.
    #[arg(allow_hyphen_values = true)]
    c: String,
    /// Vector as a coordinate array.
    #[arg(allow_hyphen_values = true)]
    x: String,
}

#[derive(Args)]
struct OneElem {
    /// Ring element, e.g. "2" or "2*t - 1".
    #[arg(allow_hyphen_values = true)]
    r: String,
}

#[derive(Subcommand)]
enum UnivOp {
    /// Print the addition polynomials S_0 … S_{n−1}.
    Sum,
    /// Print the Frobenius polynomials F_0 … F_{n−2}.
    Frob,
}

#[derive(Subcommand)]
enum CdOp {
    /// The generator V^k⟨r⟩ as a sequence.
    Gen(CdGenArgs),
    /// Decide membership of a sequence in the generated subgroup.
    Member(OneVector),
    /// Project a combination of generators along a presentation.
    Project(CdProjectArgs),
}

#[derive(Args)]
struct CdGenArgs {
    /// Shift level k.
    level: usize,
    /// Ring element r.
    #[arg(allow_hyphen_values = true)]
    r: String,
}

#[derive(Args)]
struct CdProjectArgs {
    /// Generator terms as JSON: [{"level": k, "elem": "…", "coeff": c}, …].
    #[arg(allow_hyphen_values = true)]
    terms: String,
    /// Lift ring (polynomials over the integers), e.g. poly:u,v.
    #[arg(long)]
    lift: String,
    /// Images of the lift variables in the target ring, e.g. "[4,7]".
    #[arg(long, allow_hyphen_values = true)]
    images: String,
}

#[derive(Subcommand)]
enum COp {
    /// Rewrite every term to a positive-leading-coefficient element,
    /// with the sign-relation combination making the rewrite exact.
    Normalize(CSumArgs),
    /// Evaluate a formal sum to its sequence, truncated to --len.
    Eta(CSumArgs),
    /// Decide membership in the p-saturation of the relation subgroup.
    Reduce(CSumArgs),
    /// Check a membership certificate against a formal sum.
    VerifyCert(CVerifyArgs),
}

#[derive(Args)]
struct CSumArgs {
    /// Formal sum, e.g. "V[0]{t} + V[0]{-t}".
    #[arg(allow_hyphen_values = true)]
    sum: String,
}

#[derive(Args)]
struct CVerifyArgs {
    /// Formal sum the certificate is claimed for.
    #[arg(allow_hyphen_values = true)]
    sum: String,
    /// Certificate JSON: {"k": …, "combo": [{"coeff": …, "gen": …}, …]}.
    #[arg(allow_hyphen_values = true)]
    cert: String,
}

#[derive(Subcommand)]
enum VdmOp {
    /// Determinant of the p-power Vandermonde matrix M(c_1, …, c_n).
    Det(VdmTupleArgs),
    /// Independence check for a tuple of integers.
    Check(VdmTupleArgs),
    /// Find an integer point where distinct polynomials evaluate to an
    /// independent tuple.
    Point(VdmPointArgs),
}

#[derive(Args)]
struct VdmTupleArgs {
    /// Integer tuple as a JSON array, e.g. "[1,2]".
    #[arg(allow_hyphen_values = true)]
    tuple: String,
}

#[derive(Args)]
struct VdmPointArgs {
    /// Polynomials in the text grammar, e.g. "x + 1" "x*y".
    #[arg(required = true, allow_hyphen_values = true)]
    polys: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: properties, cd, c-functor, vandermonde, or all.
    suite: String,
}

/// What a handler hands back: rendered output plus the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }

    fn domain(text: String) -> Output {
        Output { text, code: 1 }
    }
}

/// Input or arithmetic failures, split by exit code: `Usage` covers
/// malformed flags and unparseable inputs (exit 2), `Domain` covers
/// well-formed requests whose mathematics fails (exit 1).
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> CliError {
        CliError::Usage(e.to_string())
    }

    fn domain(e: impl std::fmt::Display) -> CliError {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // A closed pipe (e.g. `witt ... | head`) is a normal way for the
            // reader to stop early, not an error worth a panic.
            use std::io::Write;
            if let Err(e) = writeln!(std::io::stdout(), "{}", out.text) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(out.code)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!(
                "global flags: --p <prime> --len <n> --ring <int|mod:<m>|poly:<vars>[:mod:<m>]> \
                 --format <json|text> --seed <s> --trials <t>"
            );
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Add(a) => op_add(cli, a),
        Command::Neg(a) => op_neg(cli, a),
        Command::Scale(a) => op_scale(cli, a),
        Command::V(a) => op_v(cli, a),
        Command::F(a) => op_f(cli, a),
        Command::Teich(a) => op_teich(cli, a),
        Command::Ghost(a) => op_ghost(cli, a),
        Command::FromGhost(a) => op_from_ghost(cli, a),
        Command::Decompose(a) => op_decompose(cli, a),
        Command::Witt { op } => match op {
            WittOp::Add(a) => op_add(cli, a),
            WittOp::Neg(a) => op_neg(cli, a),
            WittOp::Scale(a) => op_scale(cli, a),
            WittOp::V(a) => op_v(cli, a),
            WittOp::F(a) => op_f(cli, a),
            WittOp::Teich(a) => op_teich(cli, a),
            WittOp::Ghost(a) => op_ghost(cli, a),
            WittOp::FromGhost(a) => op_from_ghost(cli, a),
            WittOp::Decompose(a) => op_decompose(cli, a),
        },
        Command::UnivPoly { op } => op_univ(cli, op),
        Command::Cd { op } => match op {
            CdOp::Gen(a) => op_cd_gen(cli, a),
            CdOp::Member(a) => op_cd_member(cli, a),
            CdOp::Project(a) => op_cd_project(cli, a),
        },
        Command::C { op } => match op {
            COp::Normalize(a) => op_c_normalize(cli, a),
            COp::Eta(a) => op_c_eta(cli, a),
            COp::Reduce(a) => op_c_reduce(cli, a),
            COp::VerifyCert(a) => op_c_verify(cli, a),
        },
        Command::Vdm { op } => match op {
            VdmOp::Det(a) => op_vdm_det(cli, a),
            VdmOp::Check(a) => op_vdm_check(cli, a),
            VdmOp::Point(a) => op_vdm_point(cli, a),
        },
        Command::Verify(a) => op_verify(cli, a),
    }
}

// ---------------------------------------------------------------------------
// Flag handling
// ---------------------------------------------------------------------------

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

fn require_p(cli: &Cli) -> Result<u64, CliError> {
    cli.p.ok_or_else(|| CliError::Usage("this command needs --p <odd prime>".into()))
}

fn require_len(cli: &Cli) -> Result<usize, CliError> {
    cli.len.ok_or_else(|| CliError::Usage("this command needs --len <n>".into()))
}

fn parse_ring(cli: &Cli) -> Result<RingDescriptor, CliError> {
    match &cli.ring {
        None => Ok(RingDescriptor::Integers),
        Some(spec) => RingDescriptor::parse_spec(spec).map_err(CliError::usage),
    }
}

fn context(cli: &Cli) -> Result<WittContext, CliError> {
    let p = require_p(cli)?;
    let n = require_len(cli)?;
    let ring = parse_ring(cli)?;
    WittContext::new(p, n, ring).map_err(CliError::usage)
}

fn parse_int(s: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(s.trim()).map_err(|_| CliError::Usage(format!("bad integer `{s}`")))
}

fn parse_vector(ctx: &WittContext, arg: &str) -> Result<WittVector, CliError> {
    coords_from_arg(ctx, arg).map_err(CliError::usage)
}

/// The ring for `c` commands: `--ring` when given (must be polynomials over
/// the integers), otherwise the polynomial ring over the variables that
/// appear inside `{…}` braces of the input.
fn c_ring(cli: &Cli, input: &str) -> Result<RingDescriptor, CliError> {
    if cli.ring.is_some() {
        return parse_ring(cli);
    }
    let mut vars: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut token = String::new();
    for ch in input.chars() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth = depth.saturating_sub(1);
                flush_token(&mut token, &mut vars);
            }
            c if depth > 0 && (c.is_ascii_alphabetic() || c == '_') => token.push(c),
            c if depth > 0 && c.is_ascii_digit() && !token.is_empty() => token.push(c),
            _ => flush_token(&mut token, &mut vars),
        }
    }
    vars.sort();
    vars.dedup();
    if vars.is_empty() {
        vars.push("t".into());
    }
    RingDescriptor::polynomials(vars, RingDescriptor::Integers).map_err(CliError::usage)
}

fn flush_token(token: &mut String, vars: &mut Vec<String>) {
    if !token.is_empty() {
        vars.push(std::mem::take(token));
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_json(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON output serializes")
}

fn elems_text(elems: &[RingElem]) -> String {
    let inner: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn vector_output(cli: &Cli, w: &WittVector) -> Output {
    match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&w.coords_to_json())),
        Format::Text => Output::ok(elems_text(w.coords())),
    }
}

// ---------------------------------------------------------------------------
// Vector operations
// ---------------------------------------------------------------------------

fn op_add(cli: &Cli, a: &TwoVectors) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    let y = parse_vector(&ctx, &a.y)?;
    let sum = witt_add(&x, &y).map_err(CliError::domain)?;
    Ok(vector_output(cli, &sum))
}

fn op_neg(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    Ok(vector_output(cli, &witt_neg(&x)))
}

fn op_scale(cli: &Cli, a: &ScaleArgs) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let c = parse_int(&a.c)?;
    let x = parse_vector(&ctx, &a.x)?;
    Ok(vector_output(cli, &int_scale(&c, &x)))
}

fn op_v(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    Ok(vector_output(cli, &verschiebung(&x)))
}

fn op_f(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    let fx = frobenius(&x).map_err(CliError::domain)?;
    Ok(vector_output(cli, &fx))
}

fn op_teich(cli: &Cli, a: &OneElem) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let r = RingElem::parse(ctx.ring(), &a.r).map_err(CliError::usage)?;
    let t = teichmuller(&ctx, &r).map_err(CliError::domain)?;
    Ok(vector_output(cli, &t))
}

fn op_ghost(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    let g = ghost_map(&x);
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&g.comps_to_json())),
        Format::Text => Output::ok(elems_text(g.comps())),
    })
}

fn op_from_ghost(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let g = ghost_from_arg(&ctx, &a.x).map_err(CliError::usage)?;
    let w = ghost_inverse(&g).map_err(CliError::domain)?;
    Ok(vector_output(cli, &w))
}

fn op_decompose(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let x = parse_vector(&ctx, &a.x)?;
    let parts = teich_v_decompose(&x);
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&decomposition_to_json(&parts))),
        Format::Text => Output::ok(elems_text(&parts)),
    })
}

// ---------------------------------------------------------------------------
// Universal polynomials
// ---------------------------------------------------------------------------

fn op_univ(cli: &Cli, op: &UnivOp) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let n = require_len(cli)?;
    let set: UniversalPolySet = universal_polys_cached(p, n).map_err(CliError::domain)?;
    let (prefix, polys) = match op {
        UnivOp::Sum => ("S", set.sums()),
        UnivOp::Frob => ("F", set.frobs()),
    };
    Ok(match format_or(cli, Format::Text) {
        Format::Text => {
            let lines: Vec<String> = polys
                .iter()
                .enumerate()
                .map(|(k, f)| format!("{prefix}_{k} = {f}"))
                .collect();
            Output::ok(lines.join("\n"))
        }
        Format::Json => {
            let arr: Vec<Value> = polys
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    serde_json::json!({"name": format!("{prefix}_{k}"), "poly": f.to_string()})
                })
                .collect();
            Output::ok(render_json(&serde_json::json!({
                "p": p,
                "len": n,
                "polys": Value::Array(arr),
            })))
        }
    })
}

// ---------------------------------------------------------------------------
// Sequence model
// ---------------------------------------------------------------------------

fn op_cd_gen(cli: &Cli, a: &CdGenArgs) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let r = RingElem::parse(ctx.ring(), &a.r).map_err(CliError::usage)?;
    let g = x_generator(&ctx, a.level, &r).map_err(CliError::domain)?;
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&g.seq().comps_to_json())),
        Format::Text => Output::ok(elems_text(g.seq().comps())),
    })
}

fn op_cd_member(cli: &Cli, a: &OneVector) -> Result<Output, CliError> {
    let ctx = context(cli)?;
    let seq = ghost_from_arg(&ctx, &a.x).map_err(CliError::usage)?;
    match x_membership(&seq) {
        Ok(parts) => Ok(match format_or(cli, Format::Json) {
            Format::Json => Output::ok(render_json(&serde_json::json!({
                "member": true,
                "decomposition": decomposition_to_json(&parts),
            }))),
            Format::Text => Output::ok(format!("member: decomposition {}", elems_text(&parts))),
        }),
        Err(XError::NotMember { index }) => Ok(match format_or(cli, Format::Json) {
            Format::Json => Output::domain(render_json(&serde_json::json!({
                "member": false,
                "index": index,
            }))),
            Format::Text => {
                Output::domain(format!("not a member: divisibility fails at component {index}"))
            }
        }),
        Err(e) => Err(CliError::domain(e)),
    }
}

fn op_cd_project(cli: &Cli, a: &CdProjectArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let n = require_len(cli)?;
    let target = parse_ring(cli)?;
    let lift = RingDescriptor::parse_spec(&a.lift).map_err(CliError::usage)?;
    let images_v: Value =
        serde_json::from_str(&a.images).map_err(|e| CliError::Usage(format!("bad --images: {e}")))?;
    let images = images_v
        .as_array()
        .ok_or_else(|| CliError::Usage("--images must be a JSON array".into()))?
        .iter()
        .map(|v| match v {
            Value::String(s) => RingElem::parse(&target, s).map_err(CliError::usage),
            other => Ok(target.from_int(json_to_int(other).map_err(CliError::usage)?)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pres = Presentation::new(lift.clone(), target, images).map_err(CliError::usage)?;
    let terms_v: Value =
        serde_json::from_str(&a.terms).map_err(|e| CliError::Usage(format!("bad terms: {e}")))?;
    let terms = generator_terms_from_json(&lift, &terms_v).map_err(CliError::usage)?;
    let w = project_to_w(&pres, p, n, &terms).map_err(CliError::domain)?;
    Ok(vector_output(cli, &w))
}

// ---------------------------------------------------------------------------
// Relation formal sums
// ---------------------------------------------------------------------------

fn combo_json(combo: &[(BigInt, wittvec::relations::HGenerator)]) -> Value {
    Value::Array(
        combo
            .iter()
            .map(|(c, g)| serde_json::json!({"coeff": int_to_json(c), "gen": g.to_json()}))
            .collect(),
    )
}

fn parse_formal_sum(cli: &Cli, input: &str) -> Result<FormalSum, CliError> {
    let ring = c_ring(cli, input)?;
    FormalSum::parse(&ring, input).map_err(CliError::usage)
}

fn op_c_normalize(cli: &Cli, a: &CSumArgs) -> Result<Output, CliError> {
    let alpha = parse_formal_sum(cli, &a.sum)?;
    let (norm, combo) = normalize_signs_with_cert(&alpha);
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&serde_json::json!({
            "normalized": norm.to_string(),
            "combo": combo_json(&combo),
        }))),
        Format::Text => {
            let mut lines = vec![format!("normalized: {norm}")];
            for (c, g) in &combo {
                lines.push(format!("  + {c} * {g}"));
            }
            Output::ok(lines.join("\n"))
        }
    })
}

fn op_c_eta(cli: &Cli, a: &CSumArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let len = require_len(cli)?;
    let alpha = parse_formal_sum(cli, &a.sum)?;
    let g = eta_evaluate(&alpha, p, len).map_err(CliError::domain)?;
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&g.comps_to_json())),
        Format::Text => Output::ok(elems_text(g.comps())),
    })
}

fn op_c_reduce(cli: &Cli, a: &CSumArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let alpha = parse_formal_sum(cli, &a.sum)?;
    match reduce(&alpha, p).map_err(CliError::domain)? {
        Reduction::InSaturation(cert) => Ok(match format_or(cli, Format::Json) {
            Format::Json => Output::ok(render_json(&serde_json::json!({
                "status": "in_saturation",
                "k": cert.k(),
                "combo": combo_json(cert.combo()),
            }))),
            Format::Text => Output::ok(format!("in saturation\n{cert}")),
        }),
        Reduction::NotIn { level, witness } => Ok(match format_or(cli, Format::Json) {
            Format::Json => Output::domain(render_json(&serde_json::json!({
                "status": "not_in",
                "level": level,
                "witness": witness.to_string(),
            }))),
            Format::Text => Output::domain(format!(
                "not in saturation: sequence component {level} is {witness}"
            )),
        }),
    }
}

fn op_c_verify(cli: &Cli, a: &CVerifyArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let alpha = parse_formal_sum(cli, &a.sum)?;
    let cert_v: Value = serde_json::from_str(&a.cert)
        .map_err(|e| CliError::Usage(format!("bad certificate JSON: {e}")))?;
    let cert = RelationCertificate::from_json(alpha.ring(), &cert_v).map_err(CliError::usage)?;
    let valid = verify_certificate(&alpha, &cert, p);
    Ok(match format_or(cli, Format::Json) {
        Format::Json => {
            let body = render_json(&serde_json::json!({"valid": valid}));
            if valid {
                Output::ok(body)
            } else {
                Output::domain(body)
            }
        }
        Format::Text => {
            if valid {
                Output::ok("certificate: valid".into())
            } else {
                Output::domain("certificate: INVALID".into())
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Vandermonde
// ---------------------------------------------------------------------------

fn parse_tuple(arg: &str) -> Result<Vec<BigInt>, CliError> {
    let v: Value =
        serde_json::from_str(arg).map_err(|e| CliError::Usage(format!("bad tuple: {e}")))?;
    v.as_array()
        .ok_or_else(|| CliError::Usage("tuple must be a JSON array".into()))?
        .iter()
        .map(|x| json_to_int(x).map_err(CliError::usage))
        .collect()
}

fn matrix_text(m: &[Vec<BigInt>]) -> String {
    let rendered: Vec<Vec<String>> =
        m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    let cols = rendered.first().map(Vec::len).unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rendered.iter().map(|row| row[j].len()).max().unwrap_or(0))
        .collect();
    rendered
        .iter()
        .map(|row| {
            row.iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_json(m: &[Vec<BigInt>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(int_to_json).collect()))
            .collect(),
    )
}

fn op_vdm_det(cli: &Cli, a: &VdmTupleArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let c = parse_tuple(&a.tuple)?;
    let m = PVandermonde::new(p, &c).map_err(CliError::domain)?;
    let det = m.det();
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&serde_json::json!({
            "matrix": matrix_json(m.rows()),
            "det": int_to_json(&det),
        }))),
        Format::Text => Output::ok(format!("{}\ndet = {det}", matrix_text(m.rows()))),
    })
}

fn op_vdm_check(cli: &Cli, a: &VdmTupleArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let c = parse_tuple(&a.tuple)?;
    let result = independence_check(p, &c).map_err(CliError::domain)?;
    let (label, ok) = match &result {
        Independence::Independent { .. } => ("independent", true),
        Independence::Dependent { .. } => ("dependent", false),
        Independence::HypothesisViolated { .. } => ("hypothesis_violated", false),
    };
    Ok(match format_or(cli, Format::Json) {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("result".into(), Value::String(label.into()));
            obj.insert("det".into(), int_to_json(result.det()));
            if let Independence::HypothesisViolated { reason, .. } = &result {
                obj.insert("reason".into(), Value::String(reason.clone()));
            }
            let body = render_json(&Value::Object(obj));
            if ok {
                Output::ok(body)
            } else {
                Output::domain(body)
            }
        }
        Format::Text => {
            let body = format!("{result}");
            if ok {
                Output::ok(body)
            } else {
                Output::domain(body)
            }
        }
    })
}

fn op_vdm_point(cli: &Cli, a: &VdmPointArgs) -> Result<Output, CliError> {
    let p = require_p(cli)?;
    let ring = match &cli.ring {
        Some(_) => parse_ring(cli)?,
        None => {
            let joined = format!("{{{}}}", a.polys.join("} {"));
            c_ring(cli, &joined)?
        }
    };
    let fs = a
        .polys
        .iter()
        .map(|s| RingElem::parse(&ring, s).map_err(CliError::usage))
        .collect::<Result<Vec<_>, _>>()?;
    let point = find_nonvanishing_point(&fs).map_err(CliError::domain)?;
    let values = fs
        .iter()
        .map(|f| poly_eval_int(f, &point))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::domain)?;
    let result = independence_check(p, &values).map_err(CliError::domain)?;
    Ok(match format_or(cli, Format::Json) {
        Format::Json => Output::ok(render_json(&serde_json::json!({
            "point": Value::Array(point.iter().map(int_to_json).collect()),
            "values": Value::Array(values.iter().map(int_to_json).collect()),
            "independent": result.is_independent(),
        }))),
        Format::Text => Output::ok(format!(
            "point: {}\nvalues: {}\n{result}",
            render_json(&Value::Array(point.iter().map(int_to_json).collect())),
            render_json(&Value::Array(values.iter().map(int_to_json).collect())),
        )),
    })
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

fn op_verify(cli: &Cli, a: &VerifyArgs) -> Result<Output, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let trials = cli.trials.unwrap_or(200);
    let report = wittvec::suites::run_suite(&a.suite, seed, trials).map_err(CliError::usage)?;
    let body = match format_or(cli, Format::Text) {
        Format::Text => report.to_string(),
        Format::Json => render_json(&report.to_json()),
    };
    Ok(if report.all_passed() {
        Output::ok(body)
    } else {
        Output::domain(body)
    })
}
