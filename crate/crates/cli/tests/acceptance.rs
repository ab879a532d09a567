//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use altkit::config::{Check, RingSpec, SuiteConfig};
use altkit::instance::run_instance_file;
use altkit::report::Report;
use altkit::suite::run_suite;
use altkit_core::alternator::{AlternatorInstance, Identity};
use altkit_core::ring::{CoeffRing, PolyRing, Ring};
use altkit_core::tensor::TensorSpace;
use serde_json::{json, Value};

type Outcome = Result<(), String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn suite(ring: RingSpec, n: Vec<usize>, cases: u64, checks: Vec<Check>) -> SuiteConfig {
    SuiteConfig { ring, n, cases, seed: 2024, checks, ..SuiteConfig::default() }
}

fn clean(report: &Report) -> Outcome {
    for r in &report.results {
        if let Some(f) = r.failures.first() {
            return Err(format!("{} {} n={} case {}: {:?}", r.name, r.ring, r.n, f.case, f));
        }
    }
    Ok(())
}

fn identity_suite() -> Outcome {
    let six: Vec<Check> = [
        Identity::TsLinearity,
        Identity::DegreeRelation,
        Identity::N11Linearity,
        Identity::SymmetricSpan,
        Identity::Coefficient,
        Identity::RSpan,
    ]
    .into_iter()
    .map(Check::Identity)
    .collect();
    let start = Instant::now();
    let mut cases = 0;
    for (ring, n) in [
        (RingSpec::Rationals, vec![2, 3, 4]),
        (RingSpec::Prime(2), vec![2, 3]),
        (RingSpec::Prime(5), vec![2, 3]),
    ] {
        let report = run_suite(&suite(ring, n, 200, six.clone())).map_err(|e| e.to_string())?;
        clean(&report)?;
        cases += report.results.iter().map(|r| r.cases_run).sum::<u64>();
    }
    let secs = start.elapsed().as_secs_f64();
    if cases != 7 * 6 * 200 {
        return Err(format!("ran {cases} cases"));
    }
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(())
}

fn reconstruction() -> Outcome {
    for ring in [RingSpec::Rationals, RingSpec::Prime(2), RingSpec::Prime(5)] {
        clean(&run_suite(&suite(ring, vec![2, 3], 50, vec![Check::Basis])).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn trace_checks() -> Outcome {
    let cfg = suite(RingSpec::Rationals, vec![2, 3], 100, vec![Check::Traceexp, Check::TraceFormula]);
    clean(&run_suite(&cfg).map_err(|e| e.to_string())?)?;

    let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), 2).map_err(|e| e.to_string())?;
    let r = space.factor().clone();
    let p = |s: &str| r.parse(s).unwrap();
    let inst = AlternatorInstance::new(space.clone(), vec![p("1"), p("t")]).map_err(|e| e.to_string())?;
    let text = space.format(inst.alpha_sq());
    let golden = "1*[1|t^2] - 2*[t|t] + 1*[t^2|1]";
    if text != golden {
        return Err(format!("alpha^2(1, t) printed as {text}"));
    }
    let ps = |s: &str| space.polarized_power_sum(&p(s));
    let det = space.sub(&space.mul(&ps("1"), &ps("t^2")), &space.mul(&ps("t"), &ps("t")));
    if space.format(&det) != golden {
        return Err(format!("power-sum determinant printed as {}", space.format(&det)));
    }
    Ok(())
}

fn instance(name: &str) -> Result<(Report, Value), String> {
    let report = run_instance_file(&fixture(name), None, 0).map_err(|e| e.to_string())?;
    let info = report.instance.clone().ok_or("no instance section")?;
    Ok((report, info))
}

fn expect(what: &str, got: &Value, want: Value) -> Outcome {
    if *got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

fn sqrt2() -> Outcome {
    let (_, info) = instance("sqrt2.json")?;
    expect("d_E", &info["discriminant"], json!("8"))?;
    expect("alpha^2 image", &info["alpha_sq_image"], json!("8"))?;
    expect("mapped c_22", &info["mapped"][1][1], json!(["2", "0"]))
}

fn t2_minus_s() -> Outcome {
    let (report, info) = instance("t2_minus_s.json")?;
    expect("generically etale", &info["generically_etale"], json!(true))?;
    expect("etale", &info["etale"], json!(false))?;
    expect("generator image", &info["generator_images"][0], json!("-s"))?;
    expect("mapped c_22", &info["mapped"][1][1], json!(["s", "0"]))?;
    let pb = report.results.iter().find(|r| r.name == "pullback_plus").ok_or("no pullback_plus result")?;
    if !pb.failures.is_empty() {
        return Err(format!("pullback_plus failed: {:?}", pb.failures));
    }
    clean(&report)
}

fn free_case() -> Outcome {
    for name in ["split.json", "sqrt2.json"] {
        let (report, _) = instance(name)?;
        let fc = report.results.iter().find(|r| r.name == "free_case").ok_or("no free_case result")?;
        if !fc.failures.is_empty() {
            return Err(format!("{name}: {:?}", fc.failures));
        }
    }
    Ok(())
}

fn diagonal() -> Outcome {
    for ring in [RingSpec::Rationals, RingSpec::Prime(11)] {
        clean(&run_suite(&suite(ring, vec![2, 3], 50, vec![Check::DiagonalProbe])).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_altkit"))
            .args(["verify", "--ring", "q", "--n", "2,3", "--cases", "25", "--seed", "99"])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    if a.status.code() != Some(0) {
        return Err(format!("exit status {:?}", a.status.code()));
    }
    if a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("identity suites over Q, F2, F5 within 60 s", identity_suite),
        ("invariant tensors reconstruct; structure constants validate", reconstruction),
        ("traceexp, trace formula and the alpha^2(1, t) golden", trace_checks),
        ("sqrt2 instance: d_E = 8, mapped c_22 = (2, 0)", sqrt2),
        ("t^2 - s instance: generic norm map images", t2_minus_s),
        ("free-case checks on split Q x Q and sqrt2", free_case),
        ("diagonal probe over Q and F11", diagonal),
        ("verify reports are byte-identical for equal seeds", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        match run() {
            Ok(()) => println!("PASS {}: {name} ({:.1} s)", i + 1, t0.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
