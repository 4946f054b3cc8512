//! Command line front end for the certified lower-bound engine.
//!
//! Exit codes: 0 on success, 1 when a bound is rejected or a verification
//! fails, 2 on usage errors (malformed expressions, bad parameters).
//! Printed numbers are decimal approximations of exactly stored values and
//! always carry the rounding direction of the underlying enclosure end;
//! certificates serialize the full decimals.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use expdist::asymptotics::{closed_form_solution, numeric_optimize, AsymptoticSolution};
use expdist::bound_engine::{
    self, diagnose, format_ratio, parse_ratio, BoundCertificate, DiagnosticReport, DirectedValue,
};
use expdist::exactnum::dr::decimal_to_rational;
use expdist::exactnum::{AlgebraicNumber, RealDR};
use expdist::hermite_pade::{hp_coefficients, remainder_order};
use expdist::suites::{run_all, run_suite, SuiteOptions, SuiteReport, SUITE_NAMES};
use expdist::Error;

#[derive(Parser)]
#[command(
    name = "expdist",
    version,
    about = "Certified lower bounds for |e^beta - alpha| over rational and imaginary quadratic numbers",
    long_about = "Certified lower bounds for |e^beta - alpha|, where alpha and beta are rational \
or imaginary quadratic. Expressions are written as 'p/q' or 'a+b*sqrt(-d)', e.g. '3', '-5/7', \
'1/2+3*sqrt(-1)'. A passing certificate proves |e^beta - alpha| >= E^(-K*L)."
)]
struct Cli {
    /// Working precision in bits (>= 64)
    #[arg(
        long,
        global = true,
        env = "EXPDIST_PRECISION",
        default_value_t = 256
    )]
    precision: u32,

    /// Emit machine-readable JSON instead of plain text where supported
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search K <= max-K, L <= max-L for the strongest passing certificate
    Bound {
        /// Algebraic target, e.g. '3', '-5/7', '1/2+3*sqrt(-1)'
        #[arg(long)]
        alpha: String,
        /// Nonzero algebraic exponent, same syntax
        #[arg(long)]
        beta: String,
        #[arg(long = "max-K", default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        max_k: u32,
        #[arg(long = "max-L", default_value_t = 12, value_parser = clap::value_parser!(u32).range(2..))]
        max_l: u32,
        /// Write the certificate JSON here (summary goes to stdout); without
        /// this the JSON itself is the stdout output
        #[arg(long)]
        out: Option<String>,
    },
    /// Recompute both sides of a stored certificate and check it end to end
    Verify {
        #[arg(long)]
        cert: String,
    },
    /// Compare the unconditional lower and hypothesis-conditional upper
    /// bounds for the auxiliary value G at explicit parameters
    Diagnose {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        l: u32,
        /// Interpolation radius as a ratio 'n/d' or decimal, must be > 1
        #[arg(long)]
        e: String,
    },
    /// Re-verify the combinatorial lemmas over grids and random samples
    Lemmas {
        /// One of feldman, binomial, vandermonde, zerolemma, heights,
        /// hermite, or 'all'
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
    },
    /// Optimal interpolation radius and the limiting exponent constant
    Corollary4 {
        /// Also run the bisection optimizer and cross-check the closed forms
        #[arg(long)]
        numeric: bool,
    },
    /// Dump the exact coefficients of an exponential approximation system
    HpTable {
        /// Comma-separated distinct rational nodes, e.g. '0,1,2'
        #[arg(long)]
        nodes: String,
        /// Comma-separated positive multiplicities, one per node
        #[arg(long)]
        params: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn failed(message: String) -> Failure {
    Failure { code: 1, message }
}

fn from_core(e: Error) -> Failure {
    match e {
        Error::Parse(_)
        | Error::Parameter(_)
        | Error::ZeroAlpha
        | Error::ZeroBeta
        | Error::DistinctFields(_, _) => usage(e.to_string()),
        other => failed(other.to_string()),
    }
}

fn main() -> ExitCode {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    if cli.precision < 64 {
        return Err(usage(format!(
            "precision {} is below the 64-bit minimum",
            cli.precision
        )));
    }
    let p = cli.precision;
    match cli.cmd {
        Cmd::Bound {
            alpha,
            beta,
            max_k,
            max_l,
            out,
        } => cmd_bound(&alpha, &beta, max_k, max_l, out.as_deref(), p),
        Cmd::Verify { cert } => cmd_verify(&cert),
        Cmd::Diagnose {
            alpha,
            beta,
            k,
            l,
            e,
        } => cmd_diagnose(&alpha, &beta, k, l, &e, p, cli.json),
        Cmd::Lemmas {
            suite,
            trials,
            seed,
        } => cmd_lemmas(&suite, trials, seed, p, cli.json),
        Cmd::Corollary4 { numeric } => cmd_corollary4(numeric, p, cli.json),
        Cmd::HpTable { nodes, params } => cmd_hp_table(&nodes, &params),
    }
}

fn parse_number(label: &str, s: &str) -> Result<AlgebraicNumber, Failure> {
    AlgebraicNumber::parse(s)
        .map_err(|e| usage(format!("cannot parse --{label} '{s}': {e}")))
}

fn parse_ratio_arg(label: &str, s: &str) -> Result<BigRational, Failure> {
    if let Ok(q) = parse_ratio(s) {
        return Ok(q);
    }
    decimal_to_rational(s).ok_or_else(|| {
        usage(format!(
            "cannot parse --{label} '{s}': expected 'n/d' or a plain decimal"
        ))
    })
}

/// Shorten an exact decimal for terminal display; ".." marks the cut.
fn trim_decimal(s: &str, frac_digits: usize) -> String {
    match s.find('.') {
        None => s.to_string(),
        Some(dot) => {
            let end = (dot + 1 + frac_digits).min(s.len());
            if end == s.len() {
                s.to_string()
            } else {
                format!("{}..", &s[..end])
            }
        }
    }
}

fn fmt_directed(dv: &DirectedValue) -> String {
    format!("{} (rounded {})", trim_decimal(&dv.value, 12), dv.rounding)
}

fn fmt_real(r: &RealDR) -> String {
    fmt_directed(&DirectedValue::from_real(r))
}

fn cmd_bound(
    alpha_s: &str,
    beta_s: &str,
    max_k: u32,
    max_l: u32,
    out: Option<&str>,
    p: u32,
) -> Result<ExitCode, Failure> {
    let alpha = parse_number("alpha", alpha_s)?;
    let beta = parse_number("beta", beta_s)?;
    let cert = bound_engine::search_best(&alpha, &beta, max_k, max_l, p).map_err(|e| match e {
        Error::Infeasible(m) | Error::Certificate(m) => failed(m),
        other => from_core(other),
    })?;
    let json = cert.to_json().map_err(from_core)?;
    match out {
        Some(path) => {
            fs::write(path, format!("{json}\n"))
                .map_err(|e| failed(format!("cannot write '{path}': {e}")))?;
            println!("alpha = {} (degree {})", cert.alpha, alpha.degree());
            println!("beta  = {} (degree {})", cert.beta, beta.degree());
            println!(
                "parameters: D = {}, K = {}, L = {}, E = {}",
                cert.d, cert.k, cert.l, cert.e
            );
            println!("lhs = K*L*log(E)      = {}", fmt_directed(&cert.lhs));
            println!("rhs (nine-term sum)   = {}", fmt_directed(&cert.rhs));
            println!(
                "log |e^beta - alpha| >= {}",
                fmt_directed(&cert.log_eps_lower)
            );
            println!("i.e. |e^beta - alpha| >= E^(-K*L)");
            println!("certificate written to {path}");
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(path: &str) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read certificate '{path}': {e}")))?;
    let cert = BoundCertificate::from_json(&text)
        .map_err(|e| failed(format!("malformed certificate: {e}")))?;
    bound_engine::verify(&cert)
        .map_err(|e| failed(format!("verification failed: {e}")))?;
    println!(
        "certificate verified: |e^{} - ({})| >= E^(-{}*{}) with E = {}",
        cert.beta, cert.alpha, cert.k, cert.l, cert.e
    );
    println!(
        "log |e^beta - alpha| >= {}",
        fmt_directed(&cert.log_eps_lower)
    );
    Ok(ExitCode::SUCCESS)
}

fn diagnose_json(r: &DiagnosticReport) -> serde_json::Value {
    serde_json::json!({
        "D": r.d,
        "K": r.k,
        "L": r.l,
        "E": format_ratio(&r.e),
        "mu": r.mu,
        "eps_hypothesis": format_ratio(&r.eps_hypothesis),
        "hypothesis_observed": r.hypothesis_observed,
        "log_g_lower": DirectedValue::from_real(&r.lower),
        "log_g_exact_low": DirectedValue::from_real(&r.exact_low),
        "log_g_exact_high": DirectedValue::from_real(&r.exact_high),
        "log_g_upper": DirectedValue::from_real(&r.upper),
        "contradiction": r.contradiction,
        "g1_length": format_ratio(&r.g1_length),
        "g1_length_bound": DirectedValue::from_real(&r.g1_length_bound),
        "g2_length": format_ratio(&r.g2_length),
        "g2_length_bound": DirectedValue::from_real(&r.g2_length_bound),
    })
}

fn cmd_diagnose(
    alpha_s: &str,
    beta_s: &str,
    k: u32,
    l: u32,
    e_s: &str,
    p: u32,
    json: bool,
) -> Result<ExitCode, Failure> {
    let alpha = parse_number("alpha", alpha_s)?;
    let beta = parse_number("beta", beta_s)?;
    let e = parse_ratio_arg("e", e_s)?;
    let r = diagnose(&alpha, &beta, k, l, &e, p).map_err(from_core)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&diagnose_json(&r)).unwrap());
        return Ok(ExitCode::SUCCESS);
    }
    println!(
        "D = {}, K = {}, L = {}, E = {}, mu = {}",
        r.d,
        r.k,
        r.l,
        format_ratio(&r.e),
        r.mu
    );
    println!(
        "hypothesis: |e^beta - alpha| < E^(-K*L) = {}",
        format_ratio(&r.eps_hypothesis)
    );
    println!(
        "hypothesis observed numerically: {}",
        if r.hypothesis_observed { "yes" } else { "no" }
    );
    println!("unconditional: log |G| >= {}", fmt_real(&r.lower));
    println!(
        "exact:         log |G| in [{}, {}]",
        fmt_real(&r.exact_low),
        fmt_real(&r.exact_high)
    );
    println!(
        "conditional:   log |G| <= {}  (valid only under the hypothesis)",
        fmt_real(&r.upper)
    );
    let approx = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    println!(
        "coefficient lengths: L(G1) ~ {:.6e} within {}; L(G2) ~ {:.6e} within {}",
        approx(&r.g1_length),
        fmt_real(&r.g1_length_bound),
        approx(&r.g2_length),
        fmt_real(&r.g2_length_bound)
    );
    if r.contradiction {
        println!(
            "verdict: the conditional upper bound falls below the unconditional lower bound;"
        );
        println!(
            "         the hypothesis is untenable at these parameters, so |e^beta - alpha| >= E^(-K*L)"
        );
    } else {
        println!("verdict: bounds are consistent; no contradiction at these parameters");
    }
    Ok(ExitCode::SUCCESS)
}

fn print_suite(report: &SuiteReport) {
    println!("suite {}", report.name);
    for c in &report.checks {
        println!("  {}: {}/{}", c.name, c.passed, c.total);
        if let Some(d) = &c.detail {
            println!("    detail: {d}");
        }
    }
    println!(
        "  result: {}",
        if report.all_passed() { "PASS" } else { "FAIL" }
    );
}

fn suite_json(report: &SuiteReport) -> serde_json::Value {
    serde_json::json!({
        "suite": report.name,
        "passed": report.all_passed(),
        "checks": report.checks.iter().map(|c| serde_json::json!({
            "name": c.name,
            "passed": c.passed,
            "total": c.total,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_lemmas(
    suite: &str,
    trials: u64,
    seed: u64,
    precision: u32,
    json: bool,
) -> Result<ExitCode, Failure> {
    let opts = SuiteOptions {
        trials,
        seed,
        precision,
    };
    let reports = if suite == "all" {
        run_all(&opts).map_err(from_core)?
    } else {
        if !SUITE_NAMES.contains(&suite) {
            return Err(usage(format!(
                "unknown suite '{suite}'; available: {}, all",
                SUITE_NAMES.join(", ")
            )));
        }
        vec![run_suite(suite, &opts).map_err(from_core)?]
    };
    let ok = reports.iter().all(SuiteReport::all_passed);
    if json {
        let body: Vec<_> = reports.iter().map(suite_json).collect();
        println!("{}", serde_json::to_string_pretty(&body).unwrap());
    } else {
        for r in &reports {
            print_suite(r);
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn solution_json(sol: &AsymptoticSolution) -> serde_json::Value {
    serde_json::json!({
        "E": DirectedValue::from_real(&sol.e),
        "c1": DirectedValue::from_real(&sol.c1),
        "c2": DirectedValue::from_real(&sol.c2),
        "gamma": DirectedValue::from_real(&sol.gamma),
        "objective": DirectedValue::from_real(&sol.objective),
    })
}

fn cmd_corollary4(numeric: bool, p: u32, json: bool) -> Result<ExitCode, Failure> {
    let sol = closed_form_solution(p);
    let numeric_sol = if numeric {
        let tol = BigRational::new(1.into(), 10u64.pow(9).into());
        Some(numeric_optimize(&tol, p).map_err(from_core)?)
    } else {
        None
    };
    if json {
        let mut body = serde_json::json!({ "closed_form": solution_json(&sol) });
        if let Some(n) = &numeric_sol {
            body["numeric"] = solution_json(n);
        }
        println!("{}", serde_json::to_string_pretty(&body).unwrap());
        return Ok(ExitCode::SUCCESS);
    }
    println!("optimal radius        E  = {}", fmt_real(&sol.e));
    println!("row density           c1 = {}", fmt_real(&sol.c1));
    println!("column density        c2 = {}", fmt_real(&sol.c2));
    println!("discriminant       gamma = {}", fmt_real(&sol.gamma));
    println!("limiting exponent c1*c2*log(E) = {}", fmt_real(&sol.objective));
    println!(
        "so |e^beta - alpha| >= |beta|^(-c|beta|) with c -> {} as |beta| grows",
        trim_decimal(&sol.objective.exact_decimal(), 2)
    );
    println!(
        "(for integer alpha, beta the classical exponents were 33, 21 and 19.187;"
    );
    println!(" this constant covers rational and imaginary quadratic alpha, beta)");
    if let Some(n) = numeric_sol {
        println!("numeric bisection agrees: E = {}", fmt_real(&n.e));
        println!("                  objective = {}", fmt_real(&n.objective));
        println!("cross-checked against the closed forms within 1e-9 relative");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hp_table(nodes_s: &str, params_s: &str) -> Result<ExitCode, Failure> {
    let nodes: Vec<BigRational> = nodes_s
        .split(',')
        .map(|t| parse_ratio_arg("nodes", t.trim()))
        .collect::<Result<_, _>>()?;
    let params: Vec<u32> = params_s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| usage(format!("bad multiplicity '{t}': {e}")))
        })
        .collect::<Result<_, _>>()?;
    let sys = hp_coefficients(&nodes, &params).map_err(from_core)?;
    let sigma = sys.sigma();
    println!(
        "sigma = {sigma}; R(z) = sum_l P_l(z) e^(x_l z) vanishes to order sigma - 1 = {} at 0",
        sigma - 1
    );
    for (ell, x) in sys.nodes().iter().enumerate() {
        println!("node x_{ell} = {} (multiplicity {})", x, sys.params()[ell]);
        for k in 0..sys.params()[ell] {
            println!(
                "  p_{{{ell},{k}}} = P_{ell}^({k})(0) = {}  (z^{k} coefficient {})",
                sys.coeff(ell, k),
                sys.polynomial_coeff(ell, k)
            );
        }
    }
    match remainder_order(&sys, sigma - 1) {
        Ok(ord) => println!("checked: first nonzero Taylor coefficient of R is at z^{ord}"),
        Err(e) => return Err(failed(format!("order check failed: {e}"))),
    }
    Ok(ExitCode::SUCCESS)
}
