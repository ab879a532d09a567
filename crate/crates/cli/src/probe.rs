use std::path::Path;

use altkit_core::blowup;
use altkit_core::ring::{PolyRing, Scalar};
use serde_json::{json, Value};

use crate::config::RingSpec;
use crate::error::CliError;
use crate::report::Report;

/// Inline JSON when `arg` starts with `[`, otherwise a path to a JSON file.
pub fn load_points(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Io { path: arg.to_string(), message: e.to_string() })
}

/// Parses `[[c, …], …]`, one inner array per point, coordinates as strings
/// or integers.
pub fn parse_points(ring: RingSpec, text: &str) -> Result<Vec<Vec<Scalar>>, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::from_json(&e))?;
    let coeffs = ring.coeff_ring()?;
    let scalars = PolyRing::new(coeffs, &[] as &[&str]);
    let outer = doc.as_array().ok_or_else(|| CliError::schema("", "expected an array of points"))?;
    if outer.is_empty() {
        return Err(CliError::schema("", "no points given"));
    }
    let mut points = Vec::with_capacity(outer.len());
    for (i, p) in outer.iter().enumerate() {
        let coords = p.as_array().ok_or_else(|| CliError::schema(format!("/{i}"), "expected an array of coordinates"))?;
        let mut point = Vec::with_capacity(coords.len());
        for (j, c) in coords.iter().enumerate() {
            let at = format!("/{i}/{j}");
            let s = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => return Err(CliError::schema(at, "expected a string or integer")),
            };
            let v = scalars
                .parse(&s)
                .ok()
                .and_then(|p| scalars.as_constant(&p))
                .ok_or_else(|| CliError::schema(&at, format!("{s:?} is not a coefficient")))?;
            point.push(v);
        }
        if point.len() != points.first().map_or(point.len(), |q: &Vec<Scalar>| q.len()) {
            return Err(CliError::schema(format!("/{i}"), "points have different dimensions"));
        }
        points.push(point);
    }
    if points.len() > altkit_core::tensor::MAX_ARITY {
        return Err(CliError::ConfigInvalid(format!("at most {} points", altkit_core::tensor::MAX_ARITY)));
    }
    Ok(points)
}

/// Runs the diagonal probe on `n` points of `ring^k`.
pub fn run_probe(ring: RingSpec, points: &[Vec<Scalar>], bound: Option<u32>) -> Result<Report, CliError> {
    let k = points.first().map_or(0, Vec::len);
    let vars: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
    let r = PolyRing::new(ring.coeff_ring()?, &vars);
    let result = blowup::diagonal_support_probe(&r, points, bound)?;
    let witness = match &result.witness {
        Some((y, value)) => json!({ "y": y, "value": value.to_string() }),
        None => Value::Null,
    };
    let shown: Vec<Vec<String>> = points.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect();
    let config = json!({ "ring": ring.to_string(), "points": shown, "bound": bound });
    let mut report = Report::new("probe-diagonal", config, Vec::new());
    report.probe = Some(json!({
        "on_diagonal": result.on_diagonal,
        "generators_probed": result.generators_probed,
        "witness": witness,
    }));
    Ok(report)
}
