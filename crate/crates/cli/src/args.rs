//! Parsing helpers for flag values that clap leaves as strings.

use std::path::Path;

use gtld::data::{builtin, parse_values, BUILTIN_NAMES};
use gtld::{Family, GtldModel, Method, ParamVector, Sample};

use crate::error::{CliError, CliResult};

pub fn family(s: &str) -> CliResult<Family> {
    s.parse::<Family>().map_err(|e| {
        let known: Vec<&str> = Family::ALL.iter().map(|f| f.id()).collect();
        CliError::usage(format!("{e}; expected one of {}", known.join(", ")))
    })
}

pub fn method(s: &str) -> CliResult<Method> {
    s.parse::<Method>().map_err(|e| {
        let known: Vec<&str> = Method::ALL.iter().map(|m| m.id()).collect();
        CliError::usage(format!("{e}; expected one of {}", known.join(", ")))
    })
}

pub fn number(s: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::usage(format!("`{}` is not a number", s.trim())))
}

pub fn numbers(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(number).collect()
}

/// `a,b` as two numbers.
pub fn pair(s: &str) -> CliResult<(f64, f64)> {
    match numbers(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::usage(format!(
            "expected two comma-separated numbers, got `{s}`"
        ))),
    }
}

/// Non-negative integer order, accepted as `2` or `2.0`.
pub fn order(v: f64) -> CliResult<u32> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(CliError::usage(format!(
            "order {v} must be a non-negative integer"
        )))
    }
}

/// `name=value`.
pub fn assignment(s: &str) -> CliResult<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("expected NAME=VALUE, got `{s}`")))?;
    Ok((name.trim().to_ascii_lowercase(), number(value)?))
}

/// Full parameter vector in the order `ψ…, β, θ, λ`.
pub fn params(family: Family, s: &str) -> CliResult<ParamVector> {
    let values = numbers(s).map_err(|e| e.context("--params"))?;
    if values.len() != family.n_params() {
        return Err(CliError::usage(format!(
            "{family} takes {} parameters ({}), got {}",
            family.n_params(),
            family.param_names().join(", "),
            values.len()
        )));
    }
    Ok(ParamVector::from_slice(
        &values,
        family.shape_names().len(),
    )?)
}

pub fn model(family_id: &str, params_text: &str) -> CliResult<(GtldModel, ParamVector)> {
    let family = family(family_id)?;
    let p = params(family, params_text)?;
    Ok((GtldModel::from_params(family, &p)?, p))
}

/// A built-in dataset name, or a path to a one-value-per-line file.
/// Relative paths are taken from `base` when given.
pub fn dataset(spec: &str, base: Option<&Path>) -> CliResult<Sample> {
    if BUILTIN_NAMES.contains(&spec.trim().to_ascii_lowercase().as_str()) {
        return Ok(builtin(spec)?);
    }
    let path = match base {
        Some(dir) if Path::new(spec).is_relative() => dir.join(spec),
        _ => Path::new(spec).to_path_buf(),
    };
    if !path.is_file() {
        return Err(CliError::usage(format!(
            "unknown dataset `{spec}`: not a built-in ({}) and no such file",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let text = crate::output::read_file(&path)?;
    parse_values(&text, &path.display().to_string())
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}
