//! `bredon`: Bredon (co)homology of `D_2p` representation spheres from the command line.
//!
//! Exit status: 0 on success, 2 when two routes (or an axiom check) disagree, 1 on a
//! usage error.

use std::fmt::Write as _;
use std::process::ExitCode;

use bredon::abelian::{FGAbelianGroup, GradedGroup};
use bredon::burnside::Coefficients;
use bredon::closed_form::{parse_degree, RODegree};
use bredon::group::SubgroupClass;
use bredon::homology::Theory;
use bredon::mackey::{check_mackey_axioms, diagram, Edge, MackeyFunctor};
use bredon::matrix::Matrix;
use bredon::spectral::{build_e1, render_ascii, render_svg, to_json, turn_page};
use bredon::verify::{compute_routes, disagreements, run_grid, standard_grid, Method, RouteOutcome};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bredon", version, about = "Bredon (co)homology of D_2p representation spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// (Co)homology of one sphere S^V by one or all routes.
    Compute {
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Degree such as "5g-4a", "1g", "2g1+1g2" or "0e".
        #[arg(long, allow_hyphen_values = true)]
        sphere: String,
        #[arg(long, value_enum, default_value_t = Coeff::ConstantZ)]
        coeff: Coeff,
        #[arg(long, value_enum, default_value_t = TheoryArg::Homology)]
        theory: TheoryArg,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Level G/H to evaluate at: e, z2, zp or g. Only the chain route serves levels below G.
        #[arg(long, value_enum, default_value_t = Level::G)]
        level: Level,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compares chain, spectral and closed-form routes on a grid of spheres and orbit spaces.
    Verify {
        /// Primes to run, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [3, 5])]
        p: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        max_l: i64,
        #[arg(long, default_value_t = 3)]
        max_m: i64,
        #[arg(long, value_enum)]
        coeff: Option<Coeff>,
        #[arg(long, value_enum)]
        theory: Option<TheoryArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Draws a page of the orbit-space spectral sequence.
    Chart {
        #[arg(long, default_value_t = 5)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Coeff::ConstantZ)]
        coeff: Coeff,
        #[arg(long, value_enum, default_value_t = TheoryArg::Homology)]
        theory: TheoryArg,
        #[arg(long, default_value_t = 1)]
        page: usize,
        #[arg(long, value_enum, default_value_t = ChartFormat::Ascii)]
        format: ChartFormat,
    },
    /// Prints a coefficient Mackey functor and checks its axioms.
    Mackey {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Coeff::Burnside)]
        coeff: Coeff,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    ConstantZ,
    Burnside,
}

impl From<Coeff> for Coefficients {
    fn from(c: Coeff) -> Self {
        match c {
            Coeff::ConstantZ => Coefficients::ConstantZ,
            Coeff::Burnside => Coefficients::BurnsideA,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Homology,
    Cohomology,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Self {
        match t {
            TheoryArg::Homology => Theory::Homology,
            TheoryArg::Cohomology => Theory::Cohomology,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Chain,
    Spectral,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    E,
    Z2,
    Zp,
    G,
}

impl From<Level> for SubgroupClass {
    fn from(l: Level) -> Self {
        match l {
            Level::E => SubgroupClass::Trivial,
            Level::Z2 => SubgroupClass::Reflection,
            Level::Zp => SubgroupClass::Rotation,
            Level::G => SubgroupClass::Whole,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartFormat {
    Ascii,
    Json,
    Svg,
}

/// Output text and exit status.
struct Outcome {
    text: String,
    code: u8,
}

fn usage(msg: impl std::fmt::Display) -> Outcome {
    Outcome { text: format!("error: {msg}\n"), code: 1 }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match cli.command {
        Command::Compute { p, sphere, coeff, theory, method, level, format } => compute(p, &sphere, coeff.into(), theory.into(), method, level.into(), format),
        Command::Verify { p, max_l, max_m, coeff, theory, format } => verify(&p, max_l, max_m, coeff, theory, format),
        Command::Chart { p, l, m, coeff, theory, page, format } => chart(p, l, m, coeff.into(), theory.into(), page, format),
        Command::Mackey { p, coeff, format } => mackey(p, coeff.into(), format),
    };
    if out.code == 1 {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    ExitCode::from(out.code)
}

fn group_json(g: &GradedGroup) -> Value {
    Value::Array(
        g.iter()
            .filter(|(_, h)| !h.is_zero())
            .map(|(n, h)| json!({"degree": n, "group": h.to_string(), "free_rank": h.free_rank(), "invariant_factors": h.invariant_factors()}))
            .collect(),
    )
}

fn group_lines(g: &GradedGroup, indent: &str) -> String {
    let mut out = String::new();
    let nonzero: Vec<(i64, &FGAbelianGroup)> = g.iter().filter(|(_, h)| !h.is_zero()).collect();
    if nonzero.is_empty() {
        let _ = writeln!(out, "{indent}0 in every degree");
    }
    for (n, h) in nonzero {
        let _ = writeln!(out, "{indent}degree {n}: {h}");
    }
    out
}

fn csv_rows(rows: &[(String, String, String, String)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "degree", "free_rank", "invariant_factors"]).expect("in-memory write");
    for (a, b, c, d) in rows {
        w.write_record([a, b, c, d]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf8")
}

fn compute(p: u32, sphere: &str, coeff: Coefficients, theory: Theory, method: MethodArg, level: SubgroupClass, format: Format) -> Outcome {
    if let Err(e) = bredon::group::Dihedral::new(p) {
        return usage(e);
    }
    let degree: RODegree = match parse_degree(sphere, p) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let methods: Vec<Method> = match method {
        MethodArg::Formula => vec![Method::Formula],
        MethodArg::Chain => vec![Method::Chain],
        MethodArg::Spectral => vec![Method::Spectral],
        MethodArg::All => Method::ALL.to_vec(),
    };
    let mut outcomes = compute_routes(p, &degree, coeff, theory, level, &methods);
    let mut notices = Vec::new();
    if method != MethodArg::All && outcomes[0].result.is_err() {
        // Reroute a single unavailable method to the first route that can serve it.
        let why = outcomes[0].result.clone().unwrap_err();
        if let Some(other) = compute_routes(p, &degree, coeff, theory, level, &Method::ALL).into_iter().find(|o| o.result.is_ok()) {
            notices.push(format!("{} route unavailable ({why}); answered by the {} route", outcomes[0].method, other.method));
            outcomes = vec![other];
        }
    }
    let served: Vec<&RouteOutcome> = outcomes.iter().filter(|o| o.result.is_ok()).collect();
    if served.is_empty() {
        return usage(format!("no route can compute this query: {}", outcomes.iter().map(|o| o.result.clone().unwrap_err()).collect::<Vec<_>>().join("; ")));
    }
    let diff = disagreements(&outcomes);
    let show_verdict = method == MethodArg::All;
    let code = if diff.is_empty() { 0 } else { 2 };
    let agreeing: Vec<String> = served.iter().map(|o| o.method.to_string()).collect();
    let text = match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "S^({degree}) for p = {p}, {coeff} coefficients, {theory}, level G/{level}");
            for n in &notices {
                let _ = writeln!(out, "notice: {n}");
            }
            for o in &outcomes {
                match &o.result {
                    Ok(g) => {
                        let _ = writeln!(out, "{} ({}):", o.method, o.note);
                        out.push_str(&group_lines(g, "  "));
                    }
                    Err(why) => {
                        let _ = writeln!(out, "{}: unavailable, {why}", o.method);
                    }
                }
            }
            if show_verdict {
                if diff.is_empty() {
                    let _ = writeln!(out, "verdict: routes agree ({})", agreeing.join(", "));
                } else {
                    for (a, b, lines) in &diff {
                        for line in lines {
                            let _ = writeln!(out, "verdict: {a} and {b} disagree, {line}");
                        }
                    }
                }
            }
            out
        }
        Format::Json => {
            let routes: Vec<Value> = outcomes
                .iter()
                .map(|o| match &o.result {
                    Ok(g) => json!({"method": o.method.to_string(), "status": "ok", "note": o.note, "groups": group_json(g)}),
                    Err(why) => json!({"method": o.method.to_string(), "status": "unavailable", "reason": why}),
                })
                .collect();
            let mut v = json!({
                "p": p,
                "degree": degree.to_string(),
                "coefficients": coeff.to_string(),
                "theory": theory.to_string(),
                "level": level.to_string(),
                "notices": notices,
                "routes": routes,
            });
            if show_verdict {
                let differences: Vec<Value> = diff.iter().map(|(a, b, lines)| json!({"routes": [a.to_string(), b.to_string()], "degrees": lines})).collect();
                v["verdict"] = json!({"agree": diff.is_empty(), "differences": differences});
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for o in &served {
                for (n, h) in o.result.as_ref().expect("served").iter().filter(|(_, h)| !h.is_zero()) {
                    let factors = h.invariant_factors().iter().map(u64::to_string).collect::<Vec<_>>().join(";");
                    rows.push((o.method.to_string(), n.to_string(), h.free_rank().to_string(), factors));
                }
            }
            if show_verdict {
                rows.push(("verdict".into(), String::new(), String::new(), if diff.is_empty() { "agree".into() } else { "disagree".into() }));
            }
            csv_rows(&rows)
        }
    };
    Outcome { text, code }
}

fn verify(ps: &[u32], max_l: i64, max_m: i64, coeff: Option<Coeff>, theory: Option<TheoryArg>, format: Format) -> Outcome {
    for &p in ps {
        if let Err(e) = bredon::group::Dihedral::new(p) {
            return usage(e);
        }
    }
    if max_l < 0 || max_m < 0 {
        return usage("the grid needs max-l >= 0 and max-m >= 0");
    }
    let coeffs: Vec<Coefficients> = coeff.map_or(vec![Coefficients::ConstantZ, Coefficients::BurnsideA], |c| vec![c.into()]);
    let theories: Vec<Theory> = theory.map_or(Theory::BOTH.to_vec(), |t| vec![t.into()]);
    let rows = run_grid(&standard_grid(ps, max_l, max_m, &coeffs, &theories));
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let code = if failed == 0 { 0 } else { 2 };
    let text = match format {
        Format::Json => {
            let cases: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let c = &r.case;
                    json!({"space": c.space.to_string(), "p": c.p, "l": c.l, "m": c.m, "coefficients": c.coeff.to_string(), "theory": c.theory.to_string(), "pass": r.passed(), "problems": r.problems})
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"cases": cases, "total": rows.len(), "failed": failed})).expect("json"))
        }
        Format::Text | Format::Csv => {
            let mut out = String::new();
            for r in &rows {
                let c = &r.case;
                let head = format!("{} p={} l={} m={} {} {}", c.space, c.p, c.l, c.m, c.coeff, c.theory);
                if r.passed() {
                    let _ = writeln!(out, "PASS {head}");
                } else {
                    for problem in &r.problems {
                        let _ = writeln!(out, "FAIL {head}: {problem}");
                    }
                }
            }
            let _ = writeln!(out, "{} cases, {} passed, {failed} failed", rows.len(), rows.len() - failed);
            out
        }
    };
    Outcome { text, code }
}

fn chart(p: u32, l: i64, m: i64, coeff: Coefficients, theory: Theory, page: usize, format: ChartFormat) -> Outcome {
    let e1 = match build_e1(p, l, m, coeff, theory) {
        Ok(e) => e,
        Err(e) => return usage(e),
    };
    let shown = match page {
        1 => e1,
        2 => match turn_page(&e1) {
            Ok(e) => e,
            Err(e) => return Outcome { text: format!("error: {e}\n"), code: 2 },
        },
        _ => return usage(format!("page {page} is not available; the sequence collapses at page 2")),
    };
    let text = match format {
        ChartFormat::Ascii => render_ascii(&shown),
        ChartFormat::Json => format!("{}\n", serde_json::to_string_pretty(&to_json(&shown)).expect("json")),
        ChartFormat::Svg => render_svg(&shown),
    };
    Outcome { text, code: 0 }
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| json!(m.row(i))).collect())
}

fn mackey(p: u32, coeff: Coefficients, format: Format) -> Outcome {
    let functor = match coeff {
        Coefficients::ConstantZ => MackeyFunctor::constant_z(p),
        Coefficients::BurnsideA => MackeyFunctor::burnside_a(p),
    };
    let functor = match functor {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let problems = check_mackey_axioms(&functor);
    let code = if problems.is_empty() { 0 } else { 2 };
    let text = match format {
        Format::Json => {
            let levels: Vec<Value> = SubgroupClass::ALL.iter().map(|&c| json!({"level": c.to_string(), "group": functor.level(c).to_string()})).collect();
            let edges: Vec<Value> = Edge::ALL
                .iter()
                .map(|&e| json!({"from": e.upper().to_string(), "to": e.lower().to_string(), "restriction": matrix_json(functor.edge_restriction(e)), "transfer": matrix_json(functor.edge_transfer(e))}))
                .collect();
            let v =
                json!({"p": p, "coefficients": coeff.to_string(), "levels": levels, "edges": edges, "axioms_hold": problems.is_empty(), "problems": problems});
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Text | Format::Csv => {
            let mut out = diagram(&functor);
            if problems.is_empty() {
                out.push_str("axioms: all hold\n");
            } else {
                for problem in &problems {
                    let _ = writeln!(out, "axiom violated: {problem}");
                }
            }
            out
        }
    };
    Outcome { text, code }
}
