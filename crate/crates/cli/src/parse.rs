//! Flag-value parsers: states, angles with exact pi fractions, grids.

use entpoly::qcore::{CanonicalState, StateVector};

use crate::AppError;

/// Parses a state source: `psi1 | psi2 | epr | ghz:N | w:N | basis:IDX |
/// basis:N:IDX | file:PATH`. `basis:IDX` defaults to four qubits.
pub fn parse_state(source: &str) -> Result<StateVector, AppError> {
    let build = |c: CanonicalState| {
        StateVector::canonical(c).map_err(|e| AppError::Input(format!("--state: {e}")))
    };
    match source {
        "psi1" => build(CanonicalState::Psi1),
        "psi2" => build(CanonicalState::Psi2),
        "epr" => build(CanonicalState::Epr),
        _ => {
            if let Some(rest) = source.strip_prefix("ghz:") {
                let n = parse_usize(rest, "ghz qubit count")?;
                build(CanonicalState::GhzN(n))
            } else if let Some(rest) = source.strip_prefix("w:") {
                let n = parse_usize(rest, "w qubit count")?;
                build(CanonicalState::WN(n))
            } else if let Some(rest) = source.strip_prefix("basis:") {
                let parts: Vec<&str> = rest.split(':').collect();
                let (n, idx) = match parts.as_slice() {
                    [idx] => (4, parse_usize(idx, "basis index")?),
                    [n, idx] => (
                        parse_usize(n, "basis qubit count")?,
                        parse_usize(idx, "basis index")?,
                    ),
                    _ => {
                        return Err(AppError::Input(format!(
                            "--state: malformed basis argument {source:?}"
                        )))
                    }
                };
                build(CanonicalState::Basis(n, idx))
            } else if let Some(path) = source.strip_prefix("file:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| AppError::Input(format!("--state: {path}: {e}")))?;
                StateVector::from_json(&text)
                    .map_err(|e| AppError::Input(format!("--state: {path}: {e}")))
            } else {
                Err(AppError::Input(format!(
                    "--state: unknown state {source:?} (expected psi1, psi2, epr, ghz:N, w:N, basis:IDX, file:PATH)"
                )))
            }
        }
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize, AppError> {
    s.trim()
        .parse()
        .map_err(|_| AppError::Input(format!("invalid {what}: {s:?}")))
}

/// Parses an angle: plain radians (`0.3927`) or an exact pi fraction
/// (`pi`, `-pi/8`, `3pi/32`).
pub fn parse_angle(s: &str) -> Result<f64, AppError> {
    let t = s.trim();
    if let Some(pos) = t.find("pi") {
        let (coef_str, tail) = (&t[..pos], &t[pos + 2..]);
        let coef = match coef_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| AppError::Input(format!("invalid angle {s:?}")))?,
        };
        let denom = match tail {
            "" => 1.0,
            d => {
                let d = d
                    .strip_prefix('/')
                    .ok_or_else(|| AppError::Input(format!("invalid angle {s:?}")))?;
                let v: f64 = d
                    .parse()
                    .map_err(|_| AppError::Input(format!("invalid angle {s:?}")))?;
                if v == 0.0 {
                    return Err(AppError::Input(format!("zero denominator in {s:?}")));
                }
                v
            }
        };
        Ok(coef * std::f64::consts::PI / denom)
    } else {
        t.parse()
            .map_err(|_| AppError::Input(format!("invalid angle {s:?}")))
    }
}

/// Parses `start:stop:count` into an inclusive linspace; start and stop may
/// be pi fractions.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(AppError::Input(format!(
            "invalid grid {s:?} (expected start:stop:count)"
        )));
    };
    let start = parse_angle(start)?;
    let stop = parse_angle(stop)?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| AppError::Input(format!("invalid grid count in {s:?}")))?;
    if count == 0 {
        return Err(AppError::Input(format!("grid count must be >= 1 in {s:?}")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}
