//! Acceptance run: one line per criterion on stderr, written directly so it
//! shows up even when the harness captures output.
//!
//! Residual tolerance is exact zero throughout. Runtime limits are wall
//! clock per criterion in the optimized test profile.

mod properties;

use std::io::Write;
use std::time::{Duration, Instant};

use opcalc::cli;
use opcalc::opexpr::{parse_operator, print_operator};
use opcalc::registry::{named_operator, operator_names, run_checks, select, Params};
use opcalc::report::CheckReport;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

fn line(o: &Outcome) -> String {
    format!(
        "criterion {} {:<4} {} ({:.1} s of {} s) {}",
        o.id,
        if o.passed { "PASS" } else { "FAIL" },
        o.title,
        o.elapsed.as_secs_f64(),
        o.limit.as_secs(),
        o.detail
    )
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run_names(names: &[&str]) -> Vec<CheckReport> {
    let mut checks = Vec::new();
    for n in names {
        let found = select(n).expect("valid pattern");
        assert!(!found.is_empty(), "no registered check `{n}`");
        checks.extend(found);
    }
    run_checks(&checks, &Params::default(), jobs())
}

/// Runs `f`, which returns (passed, detail), and times it.
fn criterion(id: u32, title: &'static str, limit_s: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let detail = if elapsed > limit { format!("{detail}; over the time limit") } else { detail };
    let o = Outcome { id, title, passed: ok && elapsed <= limit, elapsed, limit, detail };
    let _ = writeln!(std::io::stderr(), "{}", line(&o));
    o
}

fn checks_criterion(names: &[&str]) -> (bool, String) {
    let reports = run_names(names);
    let failing: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
    let mut notes: Vec<String> = Vec::new();
    for r in &reports {
        for n in &r.notes {
            if n.contains("modulo p^2 = p") || n.contains("residual for symbolic p") || n.contains("u-weight") {
                notes.push(format!("{}: {n}", r.check));
            }
        }
    }
    let mut detail = format!("[{} checks", reports.len());
    if !failing.is_empty() {
        detail.push_str(&format!(", failing: {}", failing.join(" ")));
    }
    detail.push(']');
    for n in notes {
        detail.push_str(&format!("\n      {n}"));
    }
    (failing.is_empty(), detail)
}

fn cli_call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("opcalc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"))
}

/// Built-in operators survive print -> parse -> print through the CLI.
fn builtin_roundtrip() -> Result<(), String> {
    for name in operator_names() {
        let op = named_operator(&name).map_err(|e| e.to_string())?;
        let (code, shown) = cli_call(&["show", &name]);
        if code != 0 {
            return Err(format!("show {name} exited {code}"));
        }
        let text = shown.trim();
        if text != print_operator(&op) {
            return Err(format!("show {name} differs from the library printer"));
        }
        let back = parse_operator(text, op.spec()).map_err(|e| format!("{name}: {e}"))?;
        if back != op || print_operator(&back) != text {
            return Err(format!("{name} does not round-trip"));
        }
        let (code, reparsed) = cli_call(&["parse", text, "--chart", op.spec().name()]);
        if code != 0 || reparsed.trim() != text {
            return Err(format!("parse of `{name}` through the CLI differs"));
        }
    }
    Ok(())
}

/// Two runs give identical bytes; text and JSON agree on statuses.
fn determinism() -> Result<(), String> {
    for pattern in ["g2.*", "geo.*", "3d.eq*", "2d.spectrum.n[0-5]", "2d.pipeline.*"] {
        let json_args = ["verify", pattern, "--no-timing", "--format", "json"];
        let (c1, a) = cli_call(&json_args);
        let (c2, b) = cli_call(&json_args);
        if a != b || c1 != c2 {
            return Err(format!("`verify {pattern}` is not deterministic"));
        }
        let (c3, text) = cli_call(&["verify", pattern, "--no-timing", "--jobs", "1"]);
        if c3 != c1 {
            return Err(format!("exit codes differ between formats for {pattern}"));
        }
        let parsed: Vec<serde_json::Value> = serde_json::from_str(&a).map_err(|e| e.to_string())?;
        for rep in &parsed {
            let name = rep["check"].as_str().ok_or("missing check field")?;
            let status = rep["status"].as_str().ok_or("missing status field")?;
            for key in ["residual_terms", "witnesses", "elapsed_ms"] {
                if rep.get(key).is_none() {
                    return Err(format!("report for {name} lacks `{key}`"));
                }
            }
            let text_line = text
                .lines()
                .find(|l| l.split_whitespace().nth(1) == Some(name))
                .ok_or_else(|| format!("{name} missing from text output"))?;
            if !text_line.starts_with(status) {
                return Err(format!("{name}: json {status}, text `{text_line}`"));
            }
        }
    }
    Ok(())
}

fn property_criterion() -> (bool, String) {
    let n = properties::CASES;
    let suites: Vec<(&str, Result<(), String>)> = vec![
        ("jacobi", properties::jacobi(n)),
        ("associativity", properties::associativity(n)),
        ("conjugation homomorphism", properties::homomorphism(n)),
        ("oracle vs term map", properties::oracle_agreement(n)),
        ("print/parse", properties::print_parse_roundtrip(n)),
        ("built-in round-trip", builtin_roundtrip()),
        ("determinism", determinism()),
    ];
    let failing: Vec<String> = suites.iter().filter_map(|(s, r)| r.as_ref().err().map(|e| format!("{s}: {e}"))).collect();
    let detail = if failing.is_empty() {
        format!("[{} suites, {n} cases per randomized suite]", suites.len())
    } else {
        format!("[failing: {}]", failing.join("; "))
    };
    (failing.is_empty(), detail)
}

#[test]
fn acceptance() {
    let outcomes = vec![
        criterion(1, "3D identity suite and so(4)", 30, || {
            checks_criterion(&["3d.eq*", "3d.H.integrals", "3d.LK", "3d.B", "3d.so4"])
        }),
        criterion(2, "gauge pipeline to h and h_a", 10, || {
            checks_criterion(&["2d.pipeline.p0", "2d.pipeline.p1", "2d.h_a.chart"])
        }),
        criterion(3, "integrals commute with h_a", 30, || checks_criterion(&["2d.integrals"])),
        criterion(4, "leading terms of c", 30, || checks_criterion(&["2d.c.leading"])),
        criterion(5, "cubic algebra of integrals", 300, || checks_criterion(&["2d.cubic.*"])),
        criterion(6, "spectrum on P_0..P_8", 60, || checks_criterion(&["2d.spectrum.n*"])),
        criterion(7, "geometry of the cometric", 10, || {
            checks_criterion(&["geo.det", "geo.curvature", "geo.schrodinger"])
        }),
        criterion(8, "hidden g(2) algebra", 300, || {
            checks_criterion(&["g2.lie", "g2.flag.n*", "g2.flag.mismatch", "g2.decompose.b_a", "g2.decompose.c"])
        }),
        criterion(9, "property suites", 300, property_criterion),
    ];
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "criteria not met: {failed:?}");
}
