//! Command line front end: runs catalogued claims and ad-hoc queries,
//! printing JSON to stdout and a human summary to stderr.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use quivar::catalog::Catalog;
use quivar::claims::{run_report, ClaimContext, Options, DEFAULT_BUDGET};
use quivar::group::fingerprint;
use quivar::molien::{expand_closed_form, molien_compare};
use quivar::poly::reynolds_basis;
use quivar::qgeom::{self, QuartitState, QubitState};
use quivar::report::{utc_timestamp, Report, Status};
use quivar::{Error, Result};

#[derive(Parser)]
#[command(name = "quivar", version, about = "Exact-arithmetic audits of qudit gate groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Molien series expansion order
    #[arg(long, global = true, default_value_t = 40)]
    series_order: usize,
    /// Tolerance for floating-point geometry checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads (falls back to QUIVAR_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr
    #[arg(long, global = true)]
    json: bool,
    /// Treat known discrepancies as failures for the exit code
    #[arg(long, global = true)]
    strict: bool,
    /// Group enumeration element cap
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full claim registry and emit a report
    Verify,
    /// Run the claims matching a *-wildcard id pattern
    Claim { pattern: String },
    /// Molien series of a catalogued group, optionally against a form
    Molien {
        group: String,
        #[arg(long)]
        form: Option<String>,
    },
    /// Basis of the degree-d invariants of a catalogued group
    Reynolds { group: String, degree: usize },
    /// Enumerate a catalogued group and fingerprint it
    Closure { group: String },
    /// Geometry of a pure state: two or four comma-separated amplitudes
    /// such as "0.5+0.5i, 0, 0, -0.5i"
    State { amps: String },
    /// List catalogued entities and claims
    List,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("QUIVAR_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let options = Options {
        cap: cli.cap,
        series_order: cli.series_order,
        budget: DEFAULT_BUDGET,
        tol: cli.tol,
    };
    match &cli.cmd {
        Cmd::Verify => run_claim_batch(cli, options, None),
        Cmd::Claim { pattern } => run_claim_batch(cli, options, Some(pattern)),
        Cmd::Molien { group, form } => molien_cmd(cli, options, group, form.as_deref()),
        Cmd::Reynolds { group, degree } => reynolds_cmd(cli, options, group, *degree),
        Cmd::Closure { group } => closure_cmd(cli, options, group),
        Cmd::State { amps } => state_cmd(cli, amps),
        Cmd::List => list_cmd(cli),
    }
}

fn emit(cli: &Cli, json_text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{json_text}\n"))
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{json_text}");
            Ok(())
        }
    }
}

fn run_claim_batch(cli: &Cli, options: Options, pattern: Option<&str>) -> Result<i32> {
    let ctx = ClaimContext::new(Catalog::load()?, options);
    let report = run_report(&ctx, pattern, utc_timestamp());
    if pattern.is_some() && report.results.is_empty() {
        return Err(Error::UnknownId(format!(
            "no claim matches {}",
            pattern.unwrap_or_default()
        )));
    }
    if !cli.json {
        print_table(&report);
    }
    emit(cli, &report.to_json())?;
    let failed = report.has_fail() || (cli.strict && report.has_discrepancy());
    Ok(if failed { 1 } else { 0 })
}

fn print_table(report: &Report) {
    for r in &report.results {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
        };
        let mut computed = r.computed.replace('\n', " ");
        if computed.len() > 72 {
            computed.truncate(69);
            computed.push_str("...");
        }
        eprintln!("{status:<12} {:<22} {computed} ({} ms)", r.id, r.runtime_ms);
    }
    let s = &report.summary;
    eprintln!(
        "{} claims: {} pass, {} fail, {} discrepancies",
        report.results.len(),
        s.pass,
        s.fail,
        s.discrepancy
    );
}

fn molien_cmd(cli: &Cli, options: Options, group: &str, form: Option<&str>) -> Result<i32> {
    let order = options.series_order;
    let ctx = ClaimContext::new(Catalog::load()?, options);
    let series = ctx.series_of(group)?;
    let coefficients: Vec<String> = series.coefficients.iter().map(|c| c.to_string()).collect();
    let mut payload = json!({
        "group": group,
        "order": series.group_order.to_string(),
        "series_order": order,
        "coefficients": coefficients,
    });
    if let Some(form_id) = form {
        let def = ctx.catalog.form(form_id)?;
        let cmp = molien_compare(&series, &def.form, order);
        payload["form"] = json!(def.text);
        payload["matches"] = json!(cmp.matches);
        if let Some((d, got, want)) = cmp.first_mismatch {
            payload["first_mismatch"] = json!({
                "degree": d,
                "computed": got.to_string(),
                "form": want.to_string(),
            });
            payload["form_coefficients"] = json!(expand_closed_form(&def.form, order)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>());
        }
    }
    if !cli.json {
        eprintln!(
            "group {group}: order {}, {} coefficients",
            series.group_order,
            coefficients_preview(&series.coefficients)
        );
    }
    emit(cli, &serde_json::to_string_pretty(&payload).expect("json"))?;
    Ok(0)
}

fn coefficients_preview(coeffs: &[num_bigint::BigInt]) -> String {
    let head: Vec<String> = coeffs.iter().take(13).map(|c| c.to_string()).collect();
    format!("[{}, ...]", head.join(", "))
}

fn reynolds_cmd(cli: &Cli, options: Options, group: &str, degree: usize) -> Result<i32> {
    let budget = options.budget;
    let ctx = ClaimContext::new(Catalog::load()?, options);
    let c = ctx.closure_of(group)?;
    let basis = reynolds_basis(&c, degree, budget)?;
    let rendered: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
    let payload = json!({
        "group": group,
        "degree": degree,
        "dimension": basis.len(),
        "basis": rendered,
    });
    if !cli.json {
        eprintln!("group {group}, degree {degree}: dimension {}", basis.len());
    }
    emit(cli, &serde_json::to_string_pretty(&payload).expect("json"))?;
    Ok(0)
}

fn closure_cmd(cli: &Cli, options: Options, group: &str) -> Result<i32> {
    let ctx = ClaimContext::new(Catalog::load()?, options);
    let c = ctx.closure_of(group)?;
    let fp = fingerprint(&c)?;
    let payload = json!({
        "group": group,
        "order": c.order().to_string(),
        "fingerprint": fp,
    });
    if !cli.json {
        eprintln!("group {group}: {fp}");
    }
    emit(cli, &serde_json::to_string_pretty(&payload).expect("json"))?;
    Ok(0)
}

fn parse_complex(text: &str) -> Result<num_complex::Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty amplitude".into()));
    }
    // Split into a real part and an optional trailing imaginary part.
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            split = Some(i);
            break;
        }
    }
    let (re_text, im_text) = match split {
        Some(i) if s.ends_with('i') => (&s[..i], &s[i..]),
        _ if s.ends_with('i') => ("", s.as_str()),
        _ => (s.as_str(), ""),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text
            .parse()
            .map_err(|_| Error::Parse(format!("bad amplitude {text}")))?
    };
    let im = if im_text.is_empty() {
        0.0
    } else {
        let body = &im_text[..im_text.len() - 1];
        match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => body
                .parse()
                .map_err(|_| Error::Parse(format!("bad amplitude {text}")))?,
        }
    };
    Ok(num_complex::Complex64::new(re, im))
}

fn state_cmd(cli: &Cli, amps: &str) -> Result<i32> {
    let parsed: Vec<num_complex::Complex64> = amps
        .split(',')
        .map(parse_complex)
        .collect::<Result<_>>()?;
    let norm: f64 = parsed.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-14 {
        return Err(Error::NotNormalized(norm));
    }
    if (norm - 1.0).abs() > 1e-6 {
        eprintln!("warning: state norm {norm} deviates from 1; normalizing");
    }
    let payload = match parsed.len() {
        2 => {
            let psi = QubitState::new(parsed[0] / norm, parsed[1] / norm);
            let b = qgeom::bloch_map(&psi)?;
            let r = qgeom::stereographic(&b);
            json!({
                "type": "qubit",
                "bloch": { "xi": b.xi, "eta": b.eta, "zeta": b.zeta },
                "stereographic": if r.is_infinity() {
                    json!("infinity")
                } else {
                    let v = r.value();
                    json!({ "re": v.re, "im": v.im })
                },
            })
        }
        4 => {
            let psi = QuartitState::new([
                parsed[0] / norm,
                parsed[1] / norm,
                parsed[2] / norm,
                parsed[3] / norm,
            ]);
            let p = qgeom::second_hopf(&psi)?;
            let ent = qgeom::entanglement(&psi, cli.tol);
            let (q1, q2) = qgeom::quaternion_pair(&psi);
            json!({
                "type": "two_qubit",
                "hopf": { "xi": p.xi, "eta": p.eta, "u": p.u, "v": p.v, "zeta": p.zeta },
                "concurrence": ent.c,
                "separable": ent.separable,
                "quaternions": [
                    [q1.w, q1.x, q1.y, q1.z],
                    [q2.w, q2.x, q2.y, q2.z],
                ],
            })
        }
        n => {
            return Err(Error::DimensionMismatch(format!(
                "expected 2 or 4 amplitudes, got {n}"
            )))
        }
    };
    if !cli.json {
        eprintln!("parsed {} amplitudes (norm {norm})", parsed.len());
    }
    emit(cli, &serde_json::to_string_pretty(&payload).expect("json"))?;
    Ok(0)
}

fn list_cmd(cli: &Cli) -> Result<i32> {
    let catalog = Catalog::load()?;
    let rows = catalog.summary_rows();
    let entries: Vec<serde_json::Value> = rows
        .iter()
        .map(|(kind, id, anchor)| json!({ "kind": kind, "id": id, "anchor": anchor }))
        .collect();
    if !cli.json {
        for (kind, id, anchor) in &rows {
            eprintln!("{kind:<10} {id:<24} {anchor}");
        }
        eprintln!("{} entries", rows.len());
    }
    emit(cli, &serde_json::to_string_pretty(&json!({ "entries": entries })).expect("json"))?;
    Ok(0)
}
