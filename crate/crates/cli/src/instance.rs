//! Families `E/B` read from JSON and pushed through the norm maps.
//!
//! ```json
//! {
//!   "mode": "gen_etale",
//!   "base": { "ring": "q", "vars": ["s"] },
//!   "algebra": { "rank": 2, "unit": ["1", "0"], "structure": [[["1","0"],["0","1"]], [["0","1"],["s","0"]]] },
//!   "map": { "vars": ["t"], "images": [["0", "1"]] },
//!   "x": ["1", "t"],
//!   "generators": [{ "y": ["t", "t^2"], "z": ["1", "t"], "expect": "-s" }]
//! }
//! ```
//!
//! `base.vars` empty or absent means `B` is the coefficient field itself.
//! Every coefficient is a string in the polynomial syntax of its ring.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use altkit_core::blowup::{self, Annihilator, NormMapPlus, SaturatingBase};
use altkit_core::norm::{self, FamilyInstance, NormMap, PowerSumExpr};
use altkit_core::random::{case_rng, PolyBounds, Sample};
use altkit_core::ring::{AlgebraMap, CoeffRing, FiniteFreeAlgebra, MultiPoly, PolyRing, Ring, Scalar};
use altkit_core::tensor::TensorSpace;
use altkit_core::witness::Witness;
use serde_json::{json, Value};

use crate::config::RingSpec;
use crate::error::CliError;
use crate::report::{CheckResult, Failure, Report};

const SAMPLE_BOUNDS: PolyBounds = PolyBounds { max_terms: 2, max_degree: 1 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Etale,
    GenEtale,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "etale" => Ok(Mode::Etale),
            "gen_etale" => Ok(Mode::GenEtale),
            other => Err(CliError::ConfigInvalid(format!("mode must be etale or gen_etale, got {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Etale => "etale",
            Mode::GenEtale => "gen_etale",
        })
    }
}

/// Reads and runs an instance file. `mode` overrides the file's own.
pub fn run_instance_file(path: &Path, mode: Option<Mode>, seed: u64) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    run_instance(&text, mode, seed)
}

/// Runs an instance given as JSON text.
pub fn run_instance(text: &str, mode: Option<Mode>, seed: u64) -> Result<Report, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::from_json(&e))?;
    let mode = match (mode, doc.get("mode")) {
        (Some(m), _) => m,
        (None, Some(v)) => str_at(v, "/mode")?.parse()?,
        (None, None) => return Err(CliError::ConfigInvalid("no mode given on the command line or in the file".into())),
    };
    let base = field(&doc, "", "base")?;
    let ring: RingSpec = str_at(field(base, "/base", "ring")?, "/base/ring")?
        .parse()
        .map_err(|e: CliError| CliError::schema("/base/ring", e.to_string()))?;
    let coeffs = ring.coeff_ring()?;
    let vars = match base.get("vars") {
        Some(v) => strings_at(v, "/base/vars")?,
        None => Vec::new(),
    };
    let (instance, mut results) = if vars.is_empty() {
        let scalars = PolyRing::new(coeffs, &[] as &[&str]);
        let parse = |s: &str| -> altkit_core::Result<Scalar> {
            let p = scalars.parse(s)?;
            scalars.as_constant(&p).ok_or_else(|| altkit_core::Error::NotInRing(s.to_string()))
        };
        run_family(coeffs, &parse, &doc, mode, seed)?
    } else {
        let b = PolyRing::new(coeffs, &vars);
        let parse = |s: &str| b.parse(s);
        run_family(b.clone(), &parse, &doc, mode, seed)?
    };
    let name = base_name(&coeffs, &vars);
    for r in &mut results {
        r.ring = name.clone();
    }
    let mut info = json!({ "base": name });
    if let (Value::Object(head), Value::Object(rest)) = (&mut info, instance) {
        head.extend(rest);
    }
    let config = json!({ "mode": mode.to_string(), "seed": seed });
    let mut report = Report::new("instance", config, results);
    report.instance = Some(info);
    Ok(report)
}

fn base_name(coeffs: &CoeffRing, vars: &[String]) -> String {
    if vars.is_empty() {
        coeffs.label()
    } else {
        format!("{}[{}]", coeffs.label(), vars.join(", "))
    }
}

fn field<'a>(v: &'a Value, at: &str, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::schema(format!("{at}/{key}"), "missing field"))
}

fn array_at<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::schema(at, "expected an array"))
}

/// Strings, with integers accepted as their decimal text.
fn str_at(v: &Value, at: &str) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(CliError::schema(at, "expected a string")),
    }
}

fn strings_at(v: &Value, at: &str) -> Result<Vec<String>, CliError> {
    array_at(v, at)?.iter().enumerate().map(|(i, s)| str_at(s, &format!("{at}/{i}"))).collect()
}

fn parse_at<E>(parse: &dyn Fn(&str) -> altkit_core::Result<E>, v: &Value, at: &str) -> Result<E, CliError> {
    let s = str_at(v, at)?;
    parse(&s).map_err(|e| CliError::schema(at, e.to_string()))
}

fn parse_vec<E>(parse: &dyn Fn(&str) -> altkit_core::Result<E>, v: &Value, at: &str) -> Result<Vec<E>, CliError> {
    array_at(v, at)?.iter().enumerate().map(|(i, s)| parse_at(parse, s, &format!("{at}/{i}"))).collect()
}

struct Generator<E> {
    y: Vec<MultiPoly>,
    z: Vec<MultiPoly>,
    expect: Option<E>,
}

fn run_family<B>(
    base: B,
    parse: &dyn Fn(&str) -> altkit_core::Result<B::Elem>,
    doc: &Value,
    mode: Mode,
    seed: u64,
) -> Result<(Value, Vec<CheckResult>), CliError>
where
    B: SaturatingBase + Sample,
{
    let coeffs = base.scalars();
    let alg = field(doc, "", "algebra")?;
    let rank = field(alg, "/algebra", "rank")?
        .as_u64()
        .ok_or_else(|| CliError::schema("/algebra/rank", "expected a nonnegative integer"))? as usize;
    let unit = parse_vec(parse, field(alg, "/algebra", "unit")?, "/algebra/unit")?;
    let structure: Vec<Vec<Vec<B::Elem>>> = array_at(field(alg, "/algebra", "structure")?, "/algebra/structure")?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let at = format!("/algebra/structure/{i}");
            array_at(row, &at)?.iter().enumerate().map(|(j, cell)| parse_vec(parse, cell, &format!("{at}/{j}"))).collect()
        })
        .collect::<Result<_, CliError>>()?;
    let e = FiniteFreeAlgebra::new(base.clone(), rank, structure, unit)
        .map_err(|err| CliError::schema("/algebra", err.to_string()))?;

    let map = field(doc, "", "map")?;
    let vars = strings_at(field(map, "/map", "vars")?, "/map/vars")?;
    let source = PolyRing::new(coeffs, &vars);
    let images: Vec<Vec<B::Elem>> = array_at(field(map, "/map", "images")?, "/map/images")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_vec(parse, v, &format!("/map/images/{i}")))
        .collect::<Result<_, CliError>>()?;
    let f = AlgebraMap::new(source.clone(), e.clone(), images).map_err(|err| CliError::schema("/map", err.to_string()))?;
    let parse_source = |s: &str| source.parse(s);
    let x = parse_vec(&parse_source, field(doc, "", "x")?, "/x")?;
    let family = FamilyInstance::new(f, x).map_err(|err| CliError::schema("/x", err.to_string()))?;

    let mut generators = Vec::new();
    if let Some(list) = doc.get("generators") {
        for (i, g) in array_at(list, "/generators")?.iter().enumerate() {
            let at = format!("/generators/{i}");
            let y = parse_vec(&parse_source, field(g, &at, "y")?, &format!("{at}/y"))?;
            let z = parse_vec(&parse_source, field(g, &at, "z")?, &format!("{at}/z"))?;
            let expect = match g.get("expect") {
                Some(v) => Some(parse_at(parse, v, &format!("{at}/expect"))?),
                None => None,
            };
            generators.push(Generator { y, z, expect });
        }
    }

    let mut rng = case_rng(seed, "instance-samples", 0);
    let samples: Vec<Vec<B::Elem>> = (0..2 * rank).map(|_| e.sample(&mut rng, SAMPLE_BOUNDS)).collect();
    let fx = family.fx().to_vec();
    let fmt = |v: &B::Elem| base.format(v);
    let fmt_table = |t: &[Vec<Vec<B::Elem>>]| -> Value {
        t.iter().map(|row| row.iter().map(|cell| cell.iter().map(fmt).collect::<Vec<_>>()).collect::<Vec<_>>()).collect()
    };
    let mut info = json!({
        "rank": rank,
        "discriminant": fmt(family.discriminant()),
        "etale": family.is_etale(),
        "generically_etale": family.is_generically_etale(),
    });
    let mut results = Vec::new();
    let single = |name: &str, w: Witness| -> CheckResult {
        CheckResult {
            name: name.to_string(),
            ring: coeffs.label(),
            n: rank,
            cases_run: 1,
            failures: match w {
                Witness::Equal => Vec::new(),
                Witness::Counterexample { lhs, rhs } => vec![Failure::mismatch(0, lhs, rhs)],
            },
        }
    };
    let generator_check = |images: Vec<B::Elem>, equal: &dyn Fn(&B::Elem, &B::Elem) -> bool| -> (Value, CheckResult) {
        let mut failures = Vec::new();
        let mut listed = Vec::new();
        for (i, (g, img)) in generators.iter().zip(&images).enumerate() {
            listed.push(Value::String(fmt(img)));
            if let Some(want) = &g.expect {
                if !equal(img, want) {
                    failures.push(Failure::mismatch(i as u64, fmt(img), fmt(want)));
                }
            }
        }
        let check = CheckResult {
            name: "generators".into(),
            ring: coeffs.label(),
            n: rank,
            cases_run: generators.len() as u64,
            failures,
        };
        (Value::Array(listed), check)
    };

    match mode {
        Mode::Etale => {
            let nm = NormMap::new(family)?;
            let pullback = nm.verify_pullback()?;
            info["alpha_sq_image"] = Value::String(fmt(&nm.alpha_sq_value()));
            info["mapped"] = fmt_table(&pullback.mapped);
            info["expected"] = fmt_table(&pullback.expected);
            results.push(single("pullback", pullback.witness));
            results.push(single("table", nm.table_agrees()?));
            results.push(single("free_case", norm::free_case_check(&e, &fx, &samples)?.witness));
            let space = TensorSpace::new(source.clone(), rank)?;
            let images = generators
                .iter()
                .map(|g| nm.apply(&PowerSumExpr::pair(&space, g.y.clone(), g.z.clone(), 1)))
                .collect::<altkit_core::Result<Vec<_>>>()?;
            let (listed, check) = generator_check(images, &|a, b| base.equal(a, b));
            info["generator_images"] = listed;
            results.push(check);
        }
        Mode::GenEtale => {
            let nm = NormMapPlus::new(family)?;
            let pullback = nm.verify_pullback_plus()?;
            info["alpha_sq_image"] = Value::String(fmt(&nm.bplus().d_image()));
            info["kernel"] = kernel_label(&base, nm.bplus().kernel());
            info["mapped"] = fmt_table(&pullback.mapped);
            info["expected"] = fmt_table(&pullback.expected);
            results.push(single("pullback_plus", pullback.witness));
            let pairs: Vec<_> = samples.chunks(rank).collect::<Vec<_>>().windows(2).map(|w| (w[0].to_vec(), w[1].to_vec())).collect();
            results.push(single("free_case_plus", blowup::free_case_plus_check(&e, &fx, &pairs)?));
            let images = generators
                .iter()
                .map(|g| nm.generator_image(&g.y, &g.z))
                .collect::<altkit_core::Result<Vec<_>>>()?;
            let bplus = nm.bplus();
            let (listed, check) = generator_check(images, &|a, b| bplus.equal(a, b));
            info["generator_images"] = listed;
            results.push(check);
        }
    }
    Ok((info, results))
}

fn kernel_label<B: Ring>(base: &B, k: &Annihilator<B::Elem>) -> Value {
    match k {
        Annihilator::Zero => Value::String("0".into()),
        Annihilator::All => Value::String("all".into()),
        Annihilator::Span(v) => Value::Array(v.iter().map(|e| Value::String(base.format(e))).collect()),
    }
}
