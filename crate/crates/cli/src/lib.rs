//! Command-line front end. Every command prints one JSON object
//! `{"command", "input", "result"}` on stdout, or a CSV table with
//! `--format csv`. Errors go to stderr as `{"error": {"kind", "message"}}`.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when an internal
//! invariant is breached (including a failing `check` suite).

use clap::{Parser, Subcommand, ValueEnum};
use ellipsoid_core::exact::{format_rational, parse_rational};
use ellipsoid_core::jumps::{jump_cylinder, jump_general, jump_pants, jump_via_xi, support_scan};
use ellipsoid_core::linf::{compose, first_disagreement, invert, words_up_to, Identity};
use ellipsoid_core::oracle::{gamma_bruteforce, merge_spectrum};
use ellipsoid_core::orbits::{jump_union, Spectrum};
use ellipsoid_core::rounding::verify_aug;
use ellipsoid_core::sft::{epsilon, target_index, DescendantGen, OrbitGen};
use ellipsoid_core::superpotential::{
    genfun_check, piecewise_table, Cp2, EmbeddingBound, Endpoint, PiecewiseTable, Superpotential,
};
use ellipsoid_core::{Error, Rational, Side, SpectrumParams};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "ellipsoid",
    version,
    about = "Exact ellipsoidal superpotentials and lattice paths"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Cp2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
    Canonical,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
            SideArg::Canonical => Side::Canonical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Closed,
    Recursive,
    Xi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Gamma,
    Linf,
    Aug,
    Jumps,
    Genfun,
}

/// Parameter vectors are comma-separated rationals, optionally followed by
/// a side suffix `+` or `-`. A single value `r` means `(1, r)`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice path points Γ_k.
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// A single index `n` or an inclusive range `n..m`.
        #[arg(long)]
        k: String,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// The first N Reeb orbits in action order.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Stationary descendant count N(o_{i_1}, …, o_{i_k})⟨ψ^m pt⟩.
    Descendant {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        orbits: Vec<u32>,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Superpotential values for one class.
    Superpotential {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Piecewise-constant table of T̃_d over an interval of a.
    Table {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        min: String,
        #[arg(long)]
        max: String,
        /// Also split at orbit-identity changes and report T.
        #[arg(long)]
        refine_orbit_id: bool,
    },
    /// Infinitesimal cobordism count at a breakpoint a.
    Jumps {
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        orbits: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Route::Recursive)]
        route: Route,
    },
    /// Embedding obstruction from one class.
    Bound {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run a verification suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        bound: u32,
    },
}

/// The result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(m) => Failure::Invariant(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Invariant(format!("csv output: {e}"))
    }
}

type Fallible<T> = std::result::Result<T, Failure>;

struct Report {
    command: &'static str,
    input: Value,
    result: Value,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Set by `check` when a suite fails.
    breached: bool,
}

impl Report {
    fn new(command: &'static str, input: Value, result: Value) -> Self {
        Self {
            command,
            input,
            result,
            headers: Vec::new(),
            rows: Vec::new(),
            breached: false,
        }
    }

    fn table(mut self, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.headers = headers.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
        self
    }

    fn key_values(self, pairs: &[(&str, String)]) -> Self {
        let rows = pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
        self.table(&["key", "value"], rows)
    }
}

fn fmt(r: &Rational) -> String {
    format_rational(r)
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Splits a trailing side marker off a parameter string.
fn split_side(s: &str, flag: Option<SideArg>) -> Fallible<(String, Side)> {
    let t = s.trim();
    let (body, suffix) = match t.chars().last() {
        Some('+') => (&t[..t.len() - 1], Some(Side::Plus)),
        Some('-') => (&t[..t.len() - 1], Some(Side::Minus)),
        _ => (t, None),
    };
    let side = match (suffix, flag.map(Side::from)) {
        (Some(a), Some(b)) if a != b => {
            return Err(invalid(format!("side suffix {} conflicts with --side {}", a, b)));
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => Side::Canonical,
    };
    Ok((body.to_string(), side))
}

fn parse_params(s: &str, flag: Option<SideArg>) -> Fallible<SpectrumParams> {
    let (body, side) = split_side(s, flag)?;
    let mut a = body
        .split(',')
        .map(parse_rational)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if a.len() == 1 {
        a.insert(0, Rational::from_integer(1.into()));
    }
    Ok(SpectrumParams::new(a, side)?)
}

fn params_json(p: &SpectrumParams) -> Value {
    json!({
        "a": p.a().iter().map(fmt).collect::<Vec<_>>(),
        "side": p.side().name(),
    })
}

fn parse_range(s: &str) -> Fallible<(usize, usize)> {
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad index {x:?} in range {s:?}")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(invalid(format!("empty range {s:?}")));
    }
    if hi > 1_000_000 {
        return Err(invalid(format!("index {hi} too large (limit 1000000)")));
    }
    Ok((lo, hi))
}

fn cmd_gamma(a: &str, k: &str, side: Option<SideArg>) -> Fallible<Report> {
    let p = parse_params(a, side)?;
    let (lo, hi) = parse_range(k)?;
    let s = Spectrum::new(p.clone());
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for k in lo..=hi {
        let g = s.gamma(k);
        result.push(json!({"k": k, "point": g.components()}));
        let mut row = vec![k.to_string()];
        row.extend(g.components().iter().map(u32::to_string));
        rows.push(row);
    }
    let mut headers = vec!["k".to_string()];
    headers.extend((1..=p.dim()).map(|i| format!("x{i}")));
    let mut input = params_json(&p);
    input["k"] = json!([lo, hi]);
    let mut r = Report::new("gamma", input, Value::Array(result));
    r.headers = headers;
    r.rows = rows;
    Ok(r)
}

fn cmd_spectrum(a: &str, count: usize, side: Option<SideArg>) -> Fallible<Report> {
    let p = parse_params(a, side)?;
    if count == 0 || count > 100_000 {
        return Err(invalid(format!("count must lie in 1..=100000, got {count}")));
    }
    let s = Spectrum::new(p.clone());
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=count {
        let o = s.orbit(k);
        let action = fmt(&s.action(k));
        result.push(json!({"k": k, "axis": o.axis, "mult": o.multiplicity, "action": action}));
        rows.push(vec![
            k.to_string(),
            o.axis.to_string(),
            o.multiplicity.to_string(),
            action,
        ]);
    }
    let mut input = params_json(&p);
    input["count"] = json!(count);
    Ok(Report::new("spectrum", input, Value::Array(result)).table(&["k", "axis", "mult", "action"], rows))
}

fn check_orbits(orbits: &[u32]) -> Fallible<()> {
    if orbits.is_empty() || orbits.contains(&0) {
        return Err(invalid(format!("orbit indices must be positive, got {orbits:?}")));
    }
    Ok(())
}

fn cmd_descendant(a: &str, orbits: &[u32], side: Option<SideArg>) -> Fallible<Report> {
    let p = parse_params(a, side)?;
    check_orbits(orbits)?;
    let m = target_index(orbits);
    let value = fmt(&epsilon::<Rational>(&p).coefficient(orbits));
    let mut input = params_json(&p);
    input["orbits"] = json!(orbits);
    Ok(Report::new("descendant", input, json!({"m": m, "value": value}))
        .key_values(&[("m", m.to_string()), ("value", value.clone())]))
}

fn cmd_superpotential(d: u32, a: &str, side: Option<SideArg>) -> Fallible<Report> {
    let p = parse_params(a, side)?;
    if d == 0 {
        return Err(invalid("degree must be positive"));
    }
    let sp = Superpotential::new(&Cp2, &p);
    let wt = fmt(&sp.wt_t(&d));
    let mult = sp.multiplicity(&d)?;
    let t = fmt(&sp.t(&d)?);
    let mut input = params_json(&p);
    input["target"] = json!("cp2");
    input["d"] = json!(d);
    Ok(
        Report::new("superpotential", input, json!({"wt_T": wt, "mult": mult, "T": t})).key_values(&[
            ("wt_T", wt.clone()),
            ("mult", mult.to_string()),
            ("T", t.clone()),
        ]),
    )
}

fn endpoint(e: &Endpoint) -> String {
    match e {
        Endpoint::Finite(r) => fmt(r),
        Endpoint::Infinity => "inf".into(),
    }
}

fn table_json(tab: &PiecewiseTable) -> Value {
    let opt = |x: &Option<Rational>| x.as_ref().map(fmt);
    let intervals: Vec<Value> = tab
        .intervals
        .iter()
        .map(|iv| {
            json!({
                "lo": fmt(&iv.lo),
                "hi": endpoint(&iv.hi),
                "lo_open": true,
                "hi_open": true,
                "wt_T": fmt(&iv.wt_t),
                "T": opt(&iv.t),
            })
        })
        .collect();
    let breakpoints: Vec<Value> = tab
        .breakpoints
        .iter()
        .map(|b| {
            json!({
                "at": fmt(&b.at),
                "minus": fmt(&b.minus),
                "plus": fmt(&b.plus),
                "T_minus": opt(&b.t_minus),
                "T_plus": opt(&b.t_plus),
            })
        })
        .collect();
    json!({"d": tab.d, "intervals": intervals, "breakpoints": breakpoints})
}

fn cmd_table(d: u32, min: &str, max: &str, refine: bool) -> Fallible<Report> {
    let (lo, hi) = (parse_rational(min)?, parse_rational(max)?);
    let tab = piecewise_table(d, &lo, &hi, refine)?;
    let rows = tab
        .intervals
        .iter()
        .map(|iv| {
            vec![
                fmt(&iv.lo),
                endpoint(&iv.hi),
                "true".into(),
                "true".into(),
                fmt(&iv.wt_t),
                iv.t.as_ref().map(fmt).unwrap_or_default(),
            ]
        })
        .collect();
    let input = json!({"target": "cp2", "d": d, "min": fmt(&lo), "max": fmt(&hi), "refine_orbit_id": refine});
    Ok(Report::new("table", input, table_json(&tab)).table(&["lo", "hi", "lo_open", "hi_open", "wt_T", "T"], rows))
}

fn cmd_jumps(a: &str, orbits: &[u32], route: Route) -> Fallible<Report> {
    let a = parse_rational(a)?;
    check_orbits(orbits)?;
    let value = match (route, orbits) {
        (Route::Closed, [i]) => jump_cylinder(&a, *i)?,
        (Route::Closed, [i, j]) => jump_pants(&a, *i, *j)?,
        (Route::Closed, _) => return Err(invalid("the closed route takes one or two orbits")),
        (Route::Recursive, _) => jump_general(&a, orbits)?,
        (Route::Xi, _) => jump_via_xi(&a, orbits)?,
    };
    let route_name = match route {
        Route::Closed => "closed",
        Route::Recursive => "recursive",
        Route::Xi => "xi",
    };
    let value = fmt(&value);
    let input = json!({"a": fmt(&a), "orbits": orbits, "route": route_name});
    Ok(Report::new("jumps", input, json!(value.clone())).key_values(&[("value", value)]))
}

fn cmd_bound(d: u32, a: &str, side: Option<SideArg>) -> Fallible<Report> {
    let p = parse_params(a, side)?;
    if d == 0 {
        return Err(invalid("degree must be positive"));
    }
    let value = match Superpotential::new(&Cp2, &p).embedding_bound(&d)? {
        EmbeddingBound::Bound(r) => fmt(&r),
        EmbeddingBound::NoObstruction => "no-obstruction".into(),
    };
    let mut input = params_json(&p);
    input["target"] = json!("cp2");
    input["d"] = json!(d);
    Ok(Report::new("bound", input, json!(value.clone())).key_values(&[("bound", value)]))
}

/// Outcome of a suite: items checked and the first failure.
struct SuiteOutcome {
    checked: usize,
    failure: Option<String>,
}

impl SuiteOutcome {
    fn fail(checked: usize, msg: String) -> Self {
        Self {
            checked,
            failure: Some(msg),
        }
    }
}

fn plane(a: Rational, side: Side) -> Fallible<SpectrumParams> {
    Ok(SpectrumParams::plane(a, side)?)
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn suite_gamma(bound: u32) -> Fallible<SuiteOutcome> {
    if !(1..=40).contains(&bound) {
        return Err(invalid("gamma suite needs 1 <= bound <= 40"));
    }
    let kmax = bound.min(25);
    let mut checked = 0;
    for p in 1..=i64::from(bound) {
        for q in 1..=i64::from(bound) {
            let mut cases = Vec::new();
            for side in [Side::Minus, Side::Canonical, Side::Plus] {
                cases.push(plane(rat(p, q), side)?);
            }
            cases.push(SpectrumParams::canonical(vec![rat(1, 1), rat(p, q), rat(p + 1, q)])?);
            for c in &cases {
                let s = Spectrum::new(c.clone());
                for k in 0..=kmax {
                    let brute = gamma_bruteforce(c, k)?;
                    checked += 1;
                    if s.gamma(k as usize) != brute {
                        return Ok(SuiteOutcome::fail(
                            checked,
                            format!("Γ_{k} at {c}: walk {} vs {brute}", s.gamma(k as usize)),
                        ));
                    }
                }
                for (k, (_, o)) in merge_spectrum(c, bound as usize)?.into_iter().enumerate() {
                    checked += 1;
                    if s.orbit(k + 1) != o {
                        return Ok(SuiteOutcome::fail(
                            checked,
                            format!("orbit {} at {c}: {} vs {o}", k + 1, s.orbit(k + 1)),
                        ));
                    }
                }
            }
        }
    }
    Ok(SuiteOutcome { checked, failure: None })
}

fn suite_linf(bound: u32) -> Fallible<SuiteOutcome> {
    if !(1..=5).contains(&bound) {
        return Err(invalid("linf suite needs 1 <= bound <= 5 (word length)"));
    }
    let len = bound as usize;
    let points = [
        plane(rat(3, 2), Side::Canonical)?,
        plane(rat(2, 1), Side::Minus)?,
        plane(rat(2, 1), Side::Plus)?,
        plane(rat(3, 1), Side::Canonical)?,
        plane(rat(13, 2), Side::Minus)?,
        plane(rat(13, 2), Side::Plus)?,
    ];
    let orbits: Vec<OrbitGen> = (1..=6).map(OrbitGen).collect();
    let descendants: Vec<DescendantGen> = (1..=6).map(DescendantGen).collect();
    let words = words_up_to(&orbits, len).len();
    let mut checked = 0;
    for p in &points {
        let e = epsilon::<Rational>(p);
        let h = invert(&e, len);
        if let Some(w) = first_disagreement(&compose(&h, &e, len), &Identity::new(), &orbits, len)? {
            return Ok(SuiteOutcome::fail(checked, format!("η∘ε ≠ id at {p} on {w:?}")));
        }
        if let Some(w) = first_disagreement(&compose(&e, &h, len), &Identity::new(), &descendants, len)? {
            return Ok(SuiteOutcome::fail(checked, format!("ε∘η ≠ id at {p} on {w:?}")));
        }
        checked += 2 * words;
    }
    Ok(SuiteOutcome { checked, failure: None })
}

fn suite_aug(bound: u32) -> Fallible<SuiteOutcome> {
    if !(1..=8).contains(&bound) {
        return Err(invalid("aug suite needs 1 <= bound <= 8 (index window)"));
    }
    let r = verify_aug(bound, 4)?;
    Ok(SuiteOutcome {
        checked: r.aug_words + r.structure_words + r.homomorphism_words,
        failure: r.failure,
    })
}

fn suite_jumps(bound: u32) -> Fallible<SuiteOutcome> {
    if !(2..=14).contains(&bound) {
        return Err(invalid("jumps suite needs 2 <= bound <= 14"));
    }
    let hits = match support_scan(bound) {
        Ok(h) => h,
        Err(Error::Invariant(m)) => return Ok(SuiteOutcome::fail(0, m)),
        Err(e) => return Err(e.into()),
    };
    let mut checked = hits.len();
    for a in jump_union(1..=bound) {
        for i in 1..bound {
            for j in i..bound {
                if i + j + 1 > bound {
                    continue;
                }
                let closed = jump_pants(&a, i, j)?;
                let rec = jump_general(&a, &[i, j])?;
                let via = jump_via_xi(&a, &[i, j])?;
                checked += 1;
                if closed != rec || closed != via {
                    return Ok(SuiteOutcome::fail(
                        checked,
                        format!("J({i},{j}) at {a}: closed {closed}, recursive {rec}, xi {via}"),
                    ));
                }
            }
        }
    }
    Ok(SuiteOutcome { checked, failure: None })
}

fn suite_genfun(bound: u32) -> Fallible<SuiteOutcome> {
    if !(1..=10).contains(&bound) {
        return Err(invalid("genfun suite needs 1 <= bound <= 10"));
    }
    let rows = genfun_check(bound);
    let failure = rows
        .iter()
        .find(|r| !r.passed())
        .map(|r| format!("d={}: coefficient {} vs {}", r.d, r.coefficient, r.expected));
    Ok(SuiteOutcome {
        checked: rows.len(),
        failure,
    })
}

fn cmd_check(suite: Suite, bound: u32) -> Fallible<Report> {
    let (name, outcome) = match suite {
        Suite::Gamma => ("gamma", suite_gamma(bound)?),
        Suite::Linf => ("linf", suite_linf(bound)?),
        Suite::Aug => ("aug", suite_aug(bound)?),
        Suite::Jumps => ("jumps", suite_jumps(bound)?),
        Suite::Genfun => ("genfun", suite_genfun(bound)?),
    };
    let passed = outcome.failure.is_none();
    let result = json!({
        "suite": name,
        "checked": outcome.checked,
        "passed": passed,
        "failure": outcome.failure,
    });
    let mut r = Report::new("check", json!({"suite": name, "bound": bound}), result).key_values(&[
        ("suite", name.to_string()),
        ("checked", outcome.checked.to_string()),
        ("passed", passed.to_string()),
        ("failure", outcome.failure.clone().unwrap_or_default()),
    ]);
    r.breached = !passed;
    Ok(r)
}

fn dispatch(command: &Command) -> Fallible<Report> {
    match command {
        Command::Gamma { a, k, side } => cmd_gamma(a, k, *side),
        Command::Spectrum { a, count, side } => cmd_spectrum(a, *count, *side),
        Command::Descendant { a, orbits, side } => cmd_descendant(a, orbits, *side),
        Command::Superpotential {
            target: Target::Cp2,
            d,
            a,
            side,
        } => cmd_superpotential(*d, a, *side),
        Command::Table {
            target: Target::Cp2,
            d,
            min,
            max,
            refine_orbit_id,
        } => cmd_table(*d, min, max, *refine_orbit_id),
        Command::Jumps { a, orbits, route } => cmd_jumps(a, orbits, *route),
        Command::Bound {
            target: Target::Cp2,
            d,
            a,
            side,
        } => cmd_bound(*d, a, *side),
        Command::Check { suite, bound } => cmd_check(*suite, *bound),
    }
}

fn render(report: &Report, format: Format) -> Fallible<String> {
    match format {
        Format::Json => {
            let v = json!({"command": report.command, "input": report.input, "result": report.result});
            Ok(format!("{v}\n"))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.headers)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Invariant(format!("csv output: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Failure::Invariant(e.to_string()))
        }
    }
}

fn error_output(kind: &str, message: &str, code: i32) -> Output {
    let v = json!({"error": {"kind": kind, "message": message}});
    Output {
        code,
        stdout: String::new(),
        stderr: format!("{v}\n"),
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => error_output("usage", e.to_string().trim(), 1),
            };
        }
    };
    let outcome = dispatch(&cli.command).and_then(|r| Ok((render(&r, cli.format)?, r.breached)));
    match outcome {
        Ok((stdout, breached)) => Output {
            code: if breached { 2 } else { 0 },
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(m)) => error_output("invalid_input", &m, 1),
        Err(Failure::Invariant(m)) => error_output("invariant", &m, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_errors_map_to_exit_two() {
        assert!(matches!(
            Failure::from(Error::Invariant("x".into())),
            Failure::Invariant(_)
        ));
        assert!(matches!(Failure::from(Error::Parse("x".into())), Failure::Input(_)));
        let out = error_output("invariant", "x", 2);
        assert_eq!(out.code, 2);
        assert_eq!(out.stderr, "{\"error\":{\"kind\":\"invariant\",\"message\":\"x\"}}\n");
    }

    #[test]
    fn ranges_and_side_suffixes() {
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert_eq!(parse_range("0..8").unwrap(), (0, 8));
        assert_eq!(parse_range("0..=8").unwrap(), (0, 8));
        assert!(parse_range("a..b").is_err());
        let p = parse_params("13/2+", None).unwrap();
        assert_eq!((p.a().len(), p.side()), (2, Side::Plus));
        assert_eq!(
            parse_params("1,13/2", Some(SideArg::Minus)).unwrap().side(),
            Side::Minus
        );
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["ellipsoid", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("superpotential"));
    }
}
