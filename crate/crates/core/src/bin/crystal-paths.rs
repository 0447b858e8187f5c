use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crystal_paths::crystals::{build_crystal, build_symmetric_crystal, verify_perfect, Crystal};
use crystal_paths::demazure::{
    character_by_operators, character_by_paths, check_conditions, reduce_fundamental, scheduled_weights, Schedule,
    Variant,
};
use crystal_paths::formulas::verify_type;
use crystal_paths::onedsums::{
    character_by_onedsums, character_full_block, check_disjoint_decomposition, g_enumerate, kostka, stabilized_limit,
    x_by_weyl_sum, x_enumerate, x_recursive, GTable, LimitKind, Restriction,
};
use crystal_paths::weights::{AffineType, Family, FormalCharacter, Weight};
use crystal_paths::Error;

#[derive(Parser)]
#[command(name = "crystal-paths", version, about = "Paths, Demazure characters and 1dsums for level-1 perfect crystals")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Largest Weyl group length an affine alternating sum may visit.
    #[arg(long, global = true, default_value_t = 40)]
    max_weyl_length: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Paths,
    Operators,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumMethod {
    Enumerate,
    Recursive,
    Weyl,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumKind {
    G,
    X,
    Xbar,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Canonical,
    Alternate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Formulas,
    Characters,
    Perfect,
    Schedules,
    Weyl,
}

#[derive(clap::Args)]
struct TypeArgs {
    /// Type tag: A1, B1, D1, A2odd, A2even, D2.
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    rank: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Crystal graph of the level-1 perfect crystal (or the level-l
    /// symmetric one for A1 with --level).
    Graph {
        ty: String,
        rank: usize,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Demazure character of V_{w^(k)}(lambda).
    Character {
        #[command(flatten)]
        t: TypeArgs,
        /// Highest weight, e.g. L0.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, value_enum, default_value_t = VariantArg::Canonical)]
        variant: VariantArg,
    },
    /// One 1dsum value.
    Onedsum {
        #[arg(value_enum)]
        kind: SumKind,
        #[command(flatten)]
        t: TypeArgs,
        /// Boundary letter, e.g. 0, 2~ or phi.
        #[arg(long)]
        b: String,
        #[arg(long)]
        j: usize,
        /// Classical level-0 weight in Lambda coordinates (g).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<i64>>,
        /// Delta coordinate of mu (g).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        delta: i64,
        /// Lambda coordinates (x) or finite coordinates 1..n (xbar).
        #[arg(long, value_delimiter = ',')]
        xi: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        eta: Option<Vec<i64>>,
        /// Level of the symmetric A1 crystal (xbar and g only).
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, value_enum, default_value_t = SumMethod::Recursive)]
        method: SumMethod,
    },
    /// Kostka-Foulkes polynomial K_{xi,(l^j)}(q).
    Kostka {
        #[arg(long, value_delimiter = ',')]
        xi: Vec<u32>,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        n: usize,
    },
    /// Truncated string function (or branching function with --xi/--eta).
    Stringfn {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long)]
        lambda: String,
        /// Truncation degree.
        #[arg(long = "M", alias = "m")]
        degree: i64,
        /// Classical weight of the string (default: lambda).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Option<Vec<i64>>,
        /// Restricted limit: xi (Lambda coordinates, level 0) and eta.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',')]
        eta: Option<Vec<i64>>,
        /// Classically restricted limit with this finite eta.
        #[arg(long, value_delimiter = ',')]
        eta_bar: Option<Vec<i64>>,
        #[arg(long, default_value_t = 40)]
        max_j: usize,
    },
    /// Runs a verification suite; exit code 3 on any mismatch.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, default_value_t = 3)]
        jmax: usize,
    },
    /// Disjoint decomposition search for every dominant xi of a level.
    DecompSearch {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, default_value_t = 1)]
        level: i64,
        /// Search with the classical restriction on finite weights with
        /// coordinates up to --level.
        #[arg(long)]
        classical: bool,
    },
}

enum Fail {
    Config(String),
    Mismatch(Value),
    Guard(String),
    Other(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard(_) => Fail::Guard(e.to_string()),
            Error::Internal(_) | Error::InexactDivision { .. } | Error::DivisionByZero => Fail::Other(e.to_string()),
            _ => Fail::Config(e.to_string()),
        }
    }
}

type Out = Result<String, Fail>;

fn affine_type(tag: &str, rank: usize) -> Result<AffineType, Fail> {
    let family: Family = tag.parse()?;
    Ok(AffineType::new(family, rank)?)
}

/// Parses `L0`, `2L1+L3` and the like.
fn parse_weight(text: &str, size: usize) -> Result<Weight, Fail> {
    let mut lambda = vec![0i64; size];
    for tok in text.split('+') {
        let tok = tok.trim();
        let (coef, idx) = tok
            .split_once(['L', 'l'])
            .ok_or_else(|| Fail::Config(format!("bad weight token `{tok}`")))?;
        let coef: i64 = if coef.is_empty() {
            1
        } else {
            coef.parse().map_err(|_| Fail::Config(format!("bad coefficient in `{tok}`")))?
        };
        let idx: usize = idx.parse().map_err(|_| Fail::Config(format!("bad index in `{tok}`")))?;
        if idx >= size {
            return Err(Error::IndexOutOfRange { index: idx, rank: size - 1 }.into());
        }
        lambda[idx] += coef;
    }
    Ok(Weight::classical(lambda))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn cmd_graph(tag: &str, rank: usize, level: usize, format: Format) -> Out {
    let ty = affine_type(tag, rank)?;
    let crystal = if level == 1 {
        build_crystal(ty)
    } else if ty.family == Family::A1 {
        build_symmetric_crystal(rank, level)?
    } else {
        return Err(Fail::Config("--level above 1 needs type A1".into()));
    };
    Ok(match format {
        Format::Dot => crystal.to_dot(),
        Format::Csv => crystal.to_csv(),
        Format::Json => to_json(&crystal.to_json()),
    })
}

fn json_only(format: Format) -> Result<(), Fail> {
    if format == Format::Json {
        Ok(())
    } else {
        Err(Fail::Config("only --format json is available for this command".into()))
    }
}

fn cmd_character(t: &TypeArgs, lambda: &str, k: usize, method: Method, variant: VariantArg) -> Out {
    let ty = affine_type(&t.ty, t.rank)?;
    let crystal = build_crystal(ty);
    let want = parse_weight(lambda, ty.size())?;
    let k_req = want
        .lambda
        .iter()
        .position(|&m| m == 1)
        .filter(|_| want.lambda.iter().sum::<i64>() == 1)
        .ok_or_else(|| Fail::Config(format!("{lambda} is not a fundamental weight")))?;
    let (k0, perm) = reduce_fundamental(ty, k_req)?;
    let variant = match variant {
        VariantArg::Canonical => Variant::Canonical,
        VariantArg::Alternate => Variant::Alternate,
    };
    let base = Weight::fundamental(ty.size(), k0);
    let s = Schedule::new(&crystal, &base, variant)?;
    let relabel = |chi: FormalCharacter| chi.relabel(&perm);
    let mut out = json!({
        "command": "character",
        "type": ty.family.tag(),
        "rank": ty.rank,
        "lambda": lambda,
        "computed_lambda": format!("L{k0}"),
        "relabeling": perm,
        "variant": variant,
        "k": k,
        "d": s.d,
        "weyl_word": s.weyl_word(&crystal, k),
    });
    let by_paths = matches!(method, Method::Paths | Method::Both).then(|| character_by_paths(&s, &crystal, k));
    let by_ops = matches!(method, Method::Operators | Method::Both).then(|| character_by_operators(&s, &crystal, k));
    let mut equal = true;
    if let (Some(p), Some(o)) = (&by_paths, &by_ops) {
        equal = p == o;
        out["equal"] = json!(equal);
    }
    let reference = by_paths.clone().or_else(|| by_ops.clone()).expect("a method");
    out["terms"] = json!(reference.len());
    if let Some(p) = by_paths {
        out["paths"] = json!(relabel(p));
    }
    if let Some(o) = by_ops {
        out["operators"] = json!(relabel(o));
    }
    if k > 0 {
        let (j, a) = s.split(k);
        let table = GTable::build(&crystal, j);
        let via = character_by_onedsums(&s, &crystal, &table, k);
        equal &= via == reference;
        out["j"] = json!(j);
        out["a"] = json!(a);
        out["onedsums_equal"] = json!(via == reference);
        if a == s.d {
            let full = character_full_block(&s.ground, &crystal, &table, j);
            equal &= full == reference;
            out["full_block"] = json!(relabel(full));
        }
    }
    if equal {
        Ok(to_json(&out))
    } else {
        Err(Fail::Mismatch(out))
    }
}

fn sum_crystal(ty: AffineType, level: usize) -> Result<Crystal, Fail> {
    if level == 1 {
        Ok(build_crystal(ty))
    } else if ty.family == Family::A1 {
        Ok(build_symmetric_crystal(ty.rank, level)?)
    } else {
        Err(Fail::Config("--level above 1 needs type A1".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_onedsum(
    kind: SumKind,
    t: &TypeArgs,
    b: &str,
    j: usize,
    mu: Option<Vec<i64>>,
    delta: i64,
    xi: Option<Vec<i64>>,
    eta: Option<Vec<i64>>,
    level: usize,
    method: SumMethod,
    max_len: usize,
) -> Out {
    let ty = affine_type(&t.ty, t.rank)?;
    let crystal = sum_crystal(ty, level)?;
    let bi = crystal.parse_element(b)?;
    let missing = |name: &str| Fail::Config(format!("--{name} is required"));
    let mut params = json!({ "type": ty.family.tag(), "rank": ty.rank, "level": level, "b": b, "j": j });
    let mut extra = json!({});
    let (kind_name, method_name, poly) = match kind {
        SumKind::G => {
            let mu = mu.ok_or_else(|| missing("mu"))?;
            if mu.len() != ty.size() {
                return Err(Error::WeightShape { got: mu.len(), expected: ty.size() }.into());
            }
            params["mu"] = json!(mu);
            params["delta"] = json!(delta);
            let w = Weight::classical(mu).add_delta(delta.into());
            match method {
                SumMethod::Enumerate => ("g", "enumerate", g_enumerate(&crystal, bi, &w, j)),
                SumMethod::Recursive => ("g", "recursive", GTable::build(&crystal, j).g(j, bi, &w)),
                SumMethod::Weyl => return Err(Fail::Config("g has no Weyl-sum method".into())),
            }
        }
        SumKind::X | SumKind::Xbar => {
            let r = if matches!(kind, SumKind::X) {
                if level != 1 {
                    return Err(Fail::Config("x is available at level 1".into()));
                }
                Restriction::Affine
            } else {
                Restriction::Classical
            };
            let xi = xi.ok_or_else(|| missing("xi"))?;
            let eta = eta.ok_or_else(|| missing("eta"))?;
            params["xi"] = json!(xi);
            params["eta"] = json!(eta);
            let name = if r == Restriction::Affine { "x" } else { "xbar" };
            match method {
                SumMethod::Enumerate => (name, "enumerate", x_enumerate(&crystal, r, bi, &xi, &eta, j)?),
                SumMethod::Recursive => (name, "recursive", x_recursive(&crystal, r, bi, &xi, &eta, j)?),
                SumMethod::Weyl => {
                    let table = GTable::build(&crystal, j);
                    let o = x_by_weyl_sum(&crystal, &table, r, bi, &xi, &eta, j, max_len)?;
                    extra = json!({ "weyl_elements": o.elements, "weyl_max_length": o.max_length });
                    (name, "weyl_sum", o.poly)
                }
            }
        }
    };
    let mut out = json!({ "kind": kind_name, "params": params, "polynomial": poly, "method": method_name });
    if let Value::Object(m) = extra {
        for (k, v) in m {
            out[k] = v;
        }
    }
    Ok(to_json(&out))
}

fn cmd_kostka(xi: &[u32], l: usize, j: usize, n: usize) -> Out {
    let poly = kostka(xi, l, j, n)?;
    Ok(to_json(&json!({
        "command": "kostka",
        "xi": xi,
        "l": l,
        "j": j,
        "n": n,
        "polynomial": poly,
        "text": poly.to_string(),
    })))
}

#[allow(clippy::too_many_arguments)]
fn cmd_stringfn(
    t: &TypeArgs,
    lambda: &str,
    degree: i64,
    nu: Option<Vec<i64>>,
    xi: Option<Vec<i64>>,
    eta: Option<Vec<i64>>,
    eta_bar: Option<Vec<i64>>,
    max_j: usize,
) -> Out {
    let ty = affine_type(&t.ty, t.rank)?;
    let crystal = build_crystal(ty);
    let lam = parse_weight(lambda, ty.size())?;
    let kind = match (xi, eta, eta_bar) {
        (Some(xi), Some(eta), None) => LimitKind::Restricted { xi, eta },
        (None, None, Some(eta)) => LimitKind::ClassicallyRestricted { eta },
        (None, None, None) => LimitKind::String {
            nu: nu.unwrap_or_else(|| lam.lambda.clone()),
        },
        _ => return Err(Fail::Config("give --xi with --eta, or --eta-bar, or neither".into())),
    };
    let r = stabilized_limit(&crystal, &lam, &kind, degree, max_j)?;
    let coeffs: Vec<String> = r.poly.dense_coeffs(degree).iter().map(|c| c.to_string()).collect();
    let history: Vec<Value> = r
        .history
        .iter()
        .map(|(j, p)| json!({ "j": j, "polynomial": p }))
        .collect();
    Ok(to_json(&json!({
        "command": "stringfn",
        "type": ty.family.tag(),
        "rank": ty.rank,
        "lambda": lambda,
        "limit": kind,
        "degree": degree,
        "coefficients": coeffs,
        "polynomial": r.poly,
        "stable_j": r.j,
        "monotone": r.monotone,
        "history": history,
    })))
}

fn cmd_verify(suite: Suite, t: &TypeArgs, jmax: usize, max_len: usize) -> Out {
    let ty = affine_type(&t.ty, t.rank)?;
    let crystal = build_crystal(ty);
    let (ok, report) = match suite {
        Suite::Formulas => {
            let r = verify_type(ty, jmax)?;
            (r.ok(), json!(r))
        }
        Suite::Perfect => {
            let r = verify_perfect(&crystal, 1)?;
            (r.ok, json!({ "ok": r.ok, "failures": r.failures }))
        }
        Suite::Schedules => {
            let mut rows = Vec::new();
            let mut ok = true;
            for (w, v) in scheduled_weights(ty) {
                let s = Schedule::new(&crystal, &w, v)?;
                let r = check_conditions(&s, &crystal, jmax);
                ok &= r.ok;
                rows.push(json!({ "lambda": w.to_string(), "variant": v, "ok": r.ok, "violations": r.violations }));
            }
            (ok, json!(rows))
        }
        Suite::Characters => {
            let mut rows = Vec::new();
            let mut ok = true;
            for (w, v) in scheduled_weights(ty) {
                let s = Schedule::new(&crystal, &w, v)?;
                let kmax = jmax.min(2) * s.d;
                let table = GTable::build(&crystal, kmax.div_ceil(s.d.max(1)));
                let mut bad = Vec::new();
                for k in 0..=kmax {
                    let p = character_by_paths(&s, &crystal, k);
                    let equal = p == character_by_operators(&s, &crystal, k)
                        && (k == 0 || p == character_by_onedsums(&s, &crystal, &table, k));
                    if !equal {
                        bad.push(k);
                    }
                }
                ok &= bad.is_empty();
                rows.push(json!({ "lambda": w.to_string(), "variant": v, "k_max": kmax, "failed_k": bad }));
            }
            (ok, json!(rows))
        }
        Suite::Weyl => {
            let table = GTable::build(&crystal, jmax);
            let mut checked = 0usize;
            let mut bad = Vec::new();
            for lev in [1i64, 2] {
                let ws = crystal.cartan().dominant_of_level(lev);
                for j in 0..=jmax {
                    for b in crystal.elements() {
                        for xi in &ws {
                            for eta in &ws {
                                let want = x_recursive(&crystal, Restriction::Affine, b, &xi.lambda, &eta.lambda, j)?;
                                let got = x_by_weyl_sum(
                                    &crystal,
                                    &table,
                                    Restriction::Affine,
                                    b,
                                    &xi.lambda,
                                    &eta.lambda,
                                    j,
                                    max_len,
                                )?;
                                checked += 1;
                                if got.poly != want {
                                    bad.push(json!({ "j": j, "b": crystal.label(b).to_string(), "xi": xi.lambda, "eta": eta.lambda }));
                                }
                            }
                        }
                    }
                }
            }
            (bad.is_empty(), json!({ "cells_checked": checked, "mismatches": bad }))
        }
    };
    let out = json!({ "command": "verify", "type": ty.family.tag(), "rank": ty.rank, "ok": ok, "report": report });
    if ok {
        Ok(to_json(&out))
    } else {
        Err(Fail::Mismatch(out))
    }
}

fn cmd_decomp(t: &TypeArgs, level: i64, classical: bool) -> Out {
    let ty = affine_type(&t.ty, t.rank)?;
    let crystal = build_crystal(ty);
    let (r, weights): (Restriction, Vec<Vec<i64>>) = if classical {
        use itertools::Itertools;
        let ws = (0..ty.rank).map(|_| 0..=level).multi_cartesian_product().collect();
        (Restriction::Classical, ws)
    } else {
        let ws = crystal.cartan().dominant_of_level(level).into_iter().map(|w| w.lambda).collect();
        (Restriction::Affine, ws)
    };
    let mut rows = Vec::new();
    let mut all = true;
    for xi in weights {
        let rep = check_disjoint_decomposition(&crystal, r, &xi)?;
        all &= rep.found;
        let witness: Vec<Value> = rep
            .witness
            .iter()
            .map(|(b, i)| json!({ "root": crystal.label(*b).to_string(), "i": i }))
            .collect();
        let bad: Vec<String> = rep.non_admissible.iter().map(|b| crystal.label(*b).to_string()).collect();
        rows.push(json!({ "xi": xi, "found": rep.found, "non_admissible": bad, "witness": witness }));
    }
    Ok(to_json(&json!({
        "command": "decomp-search",
        "type": ty.family.tag(),
        "rank": ty.rank,
        "level": level,
        "classical": classical,
        "all_found": all,
        "results": rows,
    })))
}

fn run(cli: &Cli) -> Out {
    if !matches!(cli.command, Command::Graph { .. }) {
        json_only(cli.format)?;
    }
    match &cli.command {
        Command::Graph { ty, rank, level } => cmd_graph(ty, *rank, *level, cli.format),
        Command::Character { t, lambda, k, method, variant } => cmd_character(t, lambda, *k, *method, *variant),
        Command::Onedsum { kind, t, b, j, mu, delta, xi, eta, level, method } => cmd_onedsum(
            *kind,
            t,
            b,
            *j,
            mu.clone(),
            *delta,
            xi.clone(),
            eta.clone(),
            *level,
            *method,
            cli.max_weyl_length,
        ),
        Command::Kostka { xi, l, j, n } => cmd_kostka(xi, *l, *j, *n),
        Command::Stringfn { t, lambda, degree, nu, xi, eta, eta_bar, max_j } => cmd_stringfn(
            t,
            lambda,
            *degree,
            nu.clone(),
            xi.clone(),
            eta.clone(),
            eta_bar.clone(),
            *max_j,
        ),
        Command::Verify { suite, t, jmax } => cmd_verify(*suite, t, *jmax, cli.max_weyl_length),
        Command::DecompSearch { t, level, classical } => cmd_decomp(t, *level, *classical),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let (text, code) = match run(&cli) {
        Ok(text) => (Some(text), 0),
        Err(Fail::Mismatch(v)) => (Some(to_json(&v)), 3),
        Err(Fail::Config(m)) => {
            eprintln!("error: {m}");
            (None, 2)
        }
        Err(Fail::Guard(m)) => {
            eprintln!("error: {m}");
            (None, 4)
        }
        Err(Fail::Other(m)) => {
            eprintln!("error: {m}");
            (None, 1)
        }
    };
    if let Some(text) = text {
        if let Err(e) = emit(&cli, &text) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
