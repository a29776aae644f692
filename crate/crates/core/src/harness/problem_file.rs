//! Problem files: one `key = value` pair per line, `#` starts a comment.
//!
//! Required keys are `xa`, `xb`, `T`, `f` and `u0`. Optional keys are `d`
//! (default `1`), `r` (default `0`), `exact`, `name` and the Green's function
//! constants `kappa0`, `kappa1`, `kappa1_prime`, `gamma` (defaults `1`, `inf`,
//! `0`, `0`). `d`, `r` and `u0` are expressions in `x`; `f` and `exact` in
//! `x` and `t`; everything else is a constant expression.

use super::expr::Expression;
use crate::error::{Error, Result};
use crate::estimator::GreenFunctionBounds;
use crate::problem::ProblemSpec;
use std::collections::BTreeMap;
use std::path::Path;

/// Splits `key = value` lines into a map. Later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", n + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

const KEYS: [&str; 13] = [
    "name",
    "xa",
    "xb",
    "T",
    "d",
    "r",
    "f",
    "u0",
    "exact",
    "kappa0",
    "kappa1",
    "kappa1_prime",
    "gamma",
];

fn constant(map: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match map.get(key) {
        Some(v) if v.eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
        Some(v) => Expression::constant(v),
        None => default.ok_or_else(|| Error::Parse(format!("missing key `{key}`"))),
    }
}

fn spatial(map: &BTreeMap<String, String>, key: &str, default: Option<&str>) -> Result<Expression> {
    match (map.get(key), default) {
        (Some(v), _) => Expression::spatial(v),
        (None, Some(d)) => Expression::spatial(d),
        (None, None) => Err(Error::Parse(format!("missing key `{key}`"))),
    }
}

/// Builds a validated problem from the contents of a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let map = parse_key_values(text)?;
    if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::Parse(format!("unknown key `{unknown}`")));
    }
    let green = GreenFunctionBounds {
        kappa0: constant(&map, "kappa0", Some(1.0))?,
        kappa1: constant(&map, "kappa1", Some(f64::INFINITY))?,
        kappa1_prime: constant(&map, "kappa1_prime", Some(0.0))?,
        gamma: constant(&map, "gamma", Some(0.0))?,
    };
    let d = spatial(&map, "d", Some("1"))?;
    let r = spatial(&map, "r", Some("0"))?;
    let u0 = spatial(&map, "u0", None)?;
    let f = Expression::space_time(map.get("f").ok_or_else(|| Error::Parse("missing key `f`".into()))?)?;
    let mut builder = ProblemSpec::builder(
        constant(&map, "xa", None)?,
        constant(&map, "xb", None)?,
        constant(&map, "T", None)?,
    )
    .name(map.get("name").cloned().unwrap_or_else(|| "file".into()))
    .diffusion(move |x| d.eval(x, 0.0))
    .reaction(move |x| r.eval(x, 0.0))
    .initial(move |x| u0.eval(x, 0.0))
    .source(move |x, t| f.eval(x, t))
    .green(green);
    if let Some(exact) = map.get("exact") {
        let u = Expression::space_time(exact)?;
        builder = builder.exact(move |x, t| u.eval(x, t));
    }
    let problem = builder.build();
    problem.validate()?;
    Ok(problem)
}

/// Reads and parses a problem file.
pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}
