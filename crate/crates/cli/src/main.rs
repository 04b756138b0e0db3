use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use rspin_core::algebra::matrix::{QMatrix, SeriesMatrix};
use rspin_core::algebra::partition::Partition;
use rspin_core::algebra::polynomial::Polynomial;
use rspin_core::algebra::rational::{to_canonical_string, Rational};
use rspin_core::frobenius::{tqft_trig, FrobeniusAlgebra, Shift};
use rspin_core::genus0::{correlator_sl2, correlator_wdvv, witten_degree};
use rspin_core::relations::{betti_bound, relation_boundary, relation_interior, verify_ma_triangular};
use rspin_core::rmatrix::{p_polynomial, r_inverse, r_matrix};
use rspin_core::strata::decorated::{DecoratedClass, Divisor, DecoratedGraph};
use rspin_core::strata::graph::StableGraph;
use rspin_core::verify::{run_criterion, suite_json, CRITERIA};
use rspin_core::witten::{
    certify_polynomiality, conjugate_pair_target, eliminate_kappa1_g2, r0_limit_class, weierstrass_target, witten_class,
    LimitPath,
};
use rspin_core::Error;

const DEFAULT_ORDER: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "rspin", version, about = "Exact computations with Witten's r-spin class")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Sl2,
    Wdvv,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Trig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Path {
    Bernoulli,
    Certificate,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus-zero correlator.
    Correlator {
        #[arg(long)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Oracle::Both)]
        oracle: Oracle,
    },
    /// Product of two basis vectors in the Frobenius algebra.
    Fusion {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value = "last")]
        shift: Shift,
    },
    /// Degree-zero part of the CohFT.
    Topft {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u32>,
        #[arg(long, default_value = "last")]
        shift: Shift,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// R-matrix and its inverse as coefficient arrays.
    Rmatrix {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "last")]
        shift: Shift,
        #[arg(long)]
        order: Option<usize>,
    },
    /// The polynomial P_m(r, a).
    Pm {
        #[arg(long)]
        m: usize,
    },
    /// Witten's class as a strata-algebra element.
    Witten {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u32>,
        #[arg(long, default_value = "last")]
        shift: Shift,
    },
    /// Tautological relation above the Witten degree, or its restriction to the interior.
    Relation {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u32>,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        interior: bool,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        sigma: Vec<u32>,
    },
    /// Upper bounds for the tautological Betti numbers of M_g.
    Betti {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Triangularity of the product MA and the residue facts.
    VerifyMa {
        #[arg(long)]
        d: u32,
    },
    /// Interpolate r^{g-1} W in r and certify polynomiality.
    PolyCert {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u32>,
        #[arg(long)]
        rmin: Option<u32>,
        #[arg(long)]
        rmax: Option<u32>,
    },
    /// The r -> 0 limit class.
    HolLimit {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u32>,
        #[arg(long)]
        eliminate_kappa1: bool,
        #[arg(long, value_enum, default_value_t = Path::Bernoulli)]
        path: Path,
    },
    /// Run the acceptance suite.
    Verify {
        /// `all` or a comma-separated list of criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Precondition failures exit with 1, failed mathematical checks with 2.
enum Failure {
    Input(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Assertion(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

struct Report {
    json: Value,
    text: String,
    passed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, passed: true }
    }
}

fn q(x: &Rational) -> String {
    to_canonical_string(x)
}

fn truncation_order() -> Result<usize, Failure> {
    match std::env::var("RSPIN_TRUNCATION_ORDER") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Input(format!("RSPIN_TRUNCATION_ORDER={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_ORDER),
    }
}

fn matrix_json(m: &QMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn series_matrix_json(m: &SeriesMatrix) -> Value {
    json!((0..=m.order()).map(|k| matrix_json(m.coeff_ref(k))).collect::<Vec<_>>())
}

fn polynomial_json(p: &Polynomial) -> Value {
    json!({
        "vars": p.vars(),
        "terms": p.terms().map(|(e, c)| json!({ "exponents": e, "coeff": q(c) })).collect::<Vec<_>>(),
    })
}

fn divisor_line(coeffs: &std::collections::BTreeMap<Divisor, Rational>) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    coeffs.iter().map(|(d, c)| format!("({}) {d}", c)).collect::<Vec<_>>().join(" + ")
}

fn divisor_json(coeffs: &std::collections::BTreeMap<Divisor, Rational>) -> Value {
    json!(coeffs.iter().map(|(d, c)| json!({ "divisor": d.to_string(), "coeff": q(c) })).collect::<Vec<_>>())
}

fn class_text(class: &DecoratedClass) -> String {
    let mut s = format!("class on Mbar_{{{},{}}} with {} terms\n{class}", class.g, class.n, class.len());
    if class.max_degree() == Some(1) {
        if let Ok(d) = class.divisor_coefficients() {
            let _ = write!(s, "\ndivisors: {}", divisor_line(&d));
        }
    }
    s
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Correlator { r, a, oracle } => {
            let sl2 = matches!(oracle, Oracle::Sl2 | Oracle::Both).then(|| correlator_sl2(*r, a)).transpose()?;
            let wdvv = matches!(oracle, Oracle::Wdvv | Oracle::Both).then(|| correlator_wdvv(*r, a)).transpose()?;
            let agree = match (&sl2, &wdvv) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            };
            let value = sl2.as_ref().or(wdvv.as_ref()).unwrap();
            let json = json!({
                "schema": "rspin.correlator/1",
                "r": r,
                "a": a,
                "value": q(value),
                "sl2": sl2.as_ref().map(q),
                "wdvv": wdvv.as_ref().map(q),
                "oracles_agree": agree,
            });
            let mut text = format!("<{}> at r = {r}: {}", a.iter().map(u32::to_string).collect::<Vec<_>>().join(","), value);
            if let Some(ok) = agree {
                let _ = write!(text, "\noracles agree: {ok}");
            }
            Ok(Report { json, text, passed: agree != Some(false) })
        }
        Command::Fusion { r, a, b, shift } => {
            let alg = FrobeniusAlgebra::new(*r, *shift)?;
            let v = alg.quantum_product(*a, *b)?;
            let text = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("({c}) e{i}"))
                .collect::<Vec<_>>()
                .join(" + ");
            let json = json!({ "schema": "rspin.fusion/1", "r": r, "shift": shift.to_string(), "a": a, "b": b, "product": v.iter().map(q).collect::<Vec<_>>() });
            Ok(Report::ok(json, format!("e{a} * e{b} = {}", if text.is_empty() { "0".into() } else { text })))
        }
        Command::Topft { r, g, a, shift, method } => match method {
            Method::Exact => {
                let v = FrobeniusAlgebra::new(*r, *shift)?.tqft_exact(*g, a)?;
                let json = json!({ "schema": "rspin.topft/1", "r": r, "g": g, "a": a, "shift": shift.to_string(), "method": "exact", "value": q(&v) });
                Ok(Report::ok(json, format!("omega_{{{g},{}}}({a:?}) = {v}", a.len())))
            }
            Method::Trig => {
                if *shift != Shift::TauLast {
                    return Err(Failure::Input("the trigonometric formula is only available at the last shift".into()));
                }
                let v = tqft_trig(*r, *g, a)?;
                let json = json!({ "schema": "rspin.topft/1", "r": r, "g": g, "a": a, "shift": "last", "method": "trig", "value": v });
                Ok(Report::ok(json, format!("omega_{{{g},{}}}({a:?}) ~ {v}", a.len())))
            }
        },
        Command::Rmatrix { r, shift, order } => {
            let order = match order {
                Some(o) => *o,
                None => truncation_order()?,
            };
            let m = r_matrix(*r, *shift, order)?;
            let inv = r_inverse(*r, *shift, order)?;
            let json = json!({
                "schema": "rspin.rmatrix/1",
                "r": r,
                "shift": shift.to_string(),
                "order": order,
                "R": series_matrix_json(&m),
                "R_inverse": series_matrix_json(&inv),
            });
            let mut text = String::new();
            for k in 0..=order.min(3) {
                let _ = writeln!(text, "R_{k}:");
                let c = m.coeff_ref(k);
                for i in 0..c.rows() {
                    let _ = writeln!(text, "  {}", c.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join("  "));
                }
            }
            Ok(Report::ok(json, text.trim_end().to_string()))
        }
        Command::Pm { m } => {
            let p = p_polynomial(*m)?;
            let json = json!({ "schema": "rspin.pm/1", "m": m, "polynomial": polynomial_json(&p) });
            Ok(Report::ok(json, format!("P_{m}(r, a) = {p}")))
        }
        Command::Witten { r, g, a, shift } => {
            let class = witten_class(*r, *g, a, *shift)?;
            let degree = witten_degree(*r, *g, a)?;
            let json = json!({
                "schema": "rspin.witten/1",
                "r": r,
                "g": g,
                "a": a,
                "shift": shift.to_string(),
                "degree": q(&degree),
                "class": class.to_json(),
            });
            Ok(Report::ok(json, format!("Witten degree {degree}\n{}", class_text(&class))))
        }
        Command::Relation { r, g, a, d, interior, sigma } => {
            if *interior {
                let rel = relation_interior(*r, *g, a, &Partition::new(sigma.clone()), *d)?;
                let text = format!("relation of degree {d} on M_{{{g},{}}}:\n{}\n= 0", a.len(), rel.expression);
                return Ok(Report::ok(rel.to_json(), text));
            }
            if !sigma.is_empty() {
                return Err(Failure::Input("--sigma requires --interior".into()));
            }
            let class = relation_boundary(*r, *g, a, *d)?;
            let divisors = if *d == 1 { class.divisor_coefficients().ok() } else { None };
            let json = json!({
                "schema": "rspin.relation/1",
                "r": r,
                "g": g,
                "a": a,
                "d": d,
                "class": class.to_json(),
                "divisors": divisors.as_ref().map(divisor_json),
            });
            let text = match &divisors {
                Some(dv) => format!("{} = 0 on Mbar_{{{g},{}}}", divisor_line(dv), a.len()),
                None => format!("{}\n= 0", class_text(&class)),
            };
            Ok(Report::ok(json, text))
        }
        Command::Betti { g, d } => {
            let ds: Vec<u32> = match d {
                Some(d) => vec![*d],
                None => (0..*g).collect(),
            };
            let rows: Vec<(u32, u64)> = ds.iter().map(|&d| betti_bound(*g, d).map(|b| (d, b))).collect::<Result<_, _>>()?;
            let json = json!({
                "schema": "rspin.betti/1",
                "g": g,
                "bounds": rows.iter().map(|(d, b)| json!({ "d": d, "bound": b })).collect::<Vec<_>>(),
            });
            let text = rows.iter().map(|(d, b)| format!("dim RH^{d}(M_{g}) <= {b}")).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(json, text))
        }
        Command::VerifyMa { d } => {
            let rep = verify_ma_triangular(*d)?;
            let text = format!(
                "d = {d}: {} partitions, triangular {}, diagonal nonzero {}, residue facts {}",
                rep.partitions.len(),
                rep.triangular,
                rep.diagonal_nonzero,
                rep.residue_e4_nonzero && rep.residue_even_vanishes
            );
            Ok(Report { json: rep.to_json(), text, passed: rep.passed() })
        }
        Command::PolyCert { g, a, rmin, rmax } => {
            let points = match (rmin, rmax) {
                (Some(lo), Some(hi)) if hi < lo => return Err(Failure::Input("--rmax is below --rmin".into())),
                (Some(lo), Some(hi)) => hi - lo + 1,
                _ => 16,
            };
            let cert = certify_polynomiality(*g, a, *rmin, points)?;
            let text = format!(
                "window {}..{}, degree {}, held out {:?}, divisible by r - 1: {}, {} terms",
                cert.window.0,
                cert.window.1,
                cert.degree,
                cert.held_out,
                cert.divisible_by_r_minus_1,
                cert.terms.len()
            );
            Ok(Report { json: cert.to_json(), text, passed: cert.divisible_by_r_minus_1 })
        }
        Command::HolLimit { g, a, eliminate_kappa1, path } => {
            let path = match path {
                Path::Bernoulli => LimitPath::Bernoulli,
                Path::Certificate => LimitPath::Certificate,
            };
            let class = r0_limit_class(*g, a, path)?;
            let mut json = json!({ "schema": "rspin.hol_limit/1", "g": g, "a": a, "class": class.to_json() });
            let mut text = class_text(&class);
            let mut passed = true;
            if *g == 1 {
                let principal = DecoratedGraph::from_stable(&StableGraph::trivial(1, a.len()));
                let ok = class.len() == 1 && class.coeff(&principal) == Rational::from_integer(1.into());
                json["check"] = json!({ "target": "fundamental class", "passed": ok });
                let _ = write!(text, "\nequals the fundamental class: {ok}");
                passed = ok;
            }
            if *eliminate_kappa1 {
                if *g != 2 {
                    return Err(Failure::Input("--eliminate-kappa1 applies in genus 2".into()));
                }
                let reduced = eliminate_kappa1_g2(&class.divisor_coefficients()?, a.len())?;
                json["reduced"] = divisor_json(&reduced);
                let _ = write!(text, "\nafter eliminating kappa1: {}", divisor_line(&reduced));
                let target = match a.as_slice() {
                    [2] => Some(("Weierstrass points", weierstrass_target())),
                    [1, 1] => Some(("conjugate pairs", conjugate_pair_target())),
                    _ => None,
                };
                if let Some((name, t)) = target {
                    let ok = reduced == t;
                    json["check"] = json!({ "target": name, "passed": ok });
                    let _ = write!(text, "\nmatches the {name} class: {ok}");
                    passed = ok;
                }
            }
            Ok(Report { json, text, passed })
        }
        Command::Verify { suite } => {
            let ids: Vec<u32> = if suite == "all" {
                (1..=CRITERIA).collect()
            } else {
                suite
                    .split(',')
                    .map(|s| s.trim().parse::<u32>().ok().filter(|i| (1..=CRITERIA).contains(i)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Failure::Input(format!("unknown suite {suite:?}; use 'all' or numbers 1..={CRITERIA}")))?
            };
            let results: Vec<_> = ids.into_iter().map(run_criterion).collect();
            let text = results.iter().map(|c| c.line()).collect::<Vec<_>>().join("\n");
            let passed = results.iter().all(|c| c.passed);
            Ok(Report { json: suite_json(&results), text, passed })
        }
    }
}

fn command_echo() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut json = report.json.clone();
            if let Value::Object(map) = &mut json {
                map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                map.insert("command".into(), json!(command_echo()));
            }
            serde_json::to_string_pretty(&json).expect("report serialises")
        }
        Format::Text => report.text.clone(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body + "\n"),
        None => writeln!(std::io::stdout(), "{body}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli.command) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(2)
        }
    }
}
