//! Argument decoding: inline JSON or file paths, complex scalars and
//! Laurent-polynomial symbols.

use std::fs;
use std::io::Read;

use atto_core::blaschke::{BlaschkeJson, BlaschkeProduct, DEFAULT_ZERO_CAP};
use atto_core::model_space::{default_node_count, ModelSpace};
use atto_core::operators::{atto_matrix, OperatorJson, OperatorMatrix, SymbolJson, SymbolPair};
use atto_core::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

/// Largest `|k|` accepted in a Laurent symbol.
pub const MAX_LAURENT_DEGREE: i32 = 16;

/// `arg` is inline JSON if it starts with `{` or `[`, stdin if it is `-`,
/// and a file path otherwise.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_owned());
    }
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed {what}: {e}")))
}

pub fn blaschke(arg: &str, cap: f64) -> Result<BlaschkeProduct, CliError> {
    let raw: BlaschkeJson = parse_json(&read_source(arg)?, "Blaschke product")?;
    Ok(BlaschkeProduct::with_cap(raw.zeros, raw.constant, cap)?)
}

#[derive(Deserialize)]
struct RawOperator {
    alpha: BlaschkeJson,
    beta: BlaschkeJson,
    matrix: Vec<Vec<Complex64>>,
}

/// Operator JSON; `quad_nodes = None` picks the default for the degrees.
pub fn operator(
    arg: &str,
    cap: f64,
    quad_nodes: Option<usize>,
) -> Result<OperatorMatrix, CliError> {
    let raw: RawOperator = parse_json(&read_source(arg)?, "operator")?;
    let alpha = BlaschkeProduct::with_cap(raw.alpha.zeros, raw.alpha.constant, cap)?;
    let beta = BlaschkeProduct::with_cap(raw.beta.zeros, raw.beta.constant, cap)?;
    let nodes = node_count(&alpha, &beta, quad_nodes);
    let json = OperatorJson {
        alpha,
        beta,
        matrix: raw.matrix,
    };
    Ok(OperatorMatrix::from_json(&json, nodes)?)
}

/// The explicit count if given. Otherwise the library default, raised when a
/// zero lies beyond the default cap so the aliasing error `|a|^N` stays
/// below `1e-16`.
pub fn node_count(
    alpha: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    explicit: Option<usize>,
) -> usize {
    if let Some(n) = explicit {
        return n;
    }
    let base = default_node_count(alpha.degree(), beta.degree());
    let r = alpha.max_zero_modulus().max(beta.max_zero_modulus());
    if r <= DEFAULT_ZERO_CAP {
        return base;
    }
    let needed = (16.0 * std::f64::consts::LN_10 / -r.ln()).ceil() as usize;
    base.max(needed.next_power_of_two())
}

/// `1+2i`, `-i`, `0.5`, `[re, im]`.
pub fn complex(text: &str) -> Result<Complex64, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(inner) = compact.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if let [re, im] = parts[..] {
            let re = re.parse::<f64>().map_err(|e| format!("'{text}': {e}"))?;
            let im = im.parse::<f64>().map_err(|e| format!("'{text}': {e}"))?;
            return Ok(Complex64::new(re, im));
        }
        return Err(format!("'{text}': expected [re, im]"));
    }
    let unwrapped = compact
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(&compact);
    let value = unwrapped
        .parse::<Complex64>()
        .map_err(|_| format!("'{text}' is not a complex number"))?;
    if !value.is_finite() {
        return Err(format!("'{text}' is not finite"));
    }
    Ok(value)
}

/// Coefficients of `sum c_k z^k`, indexed `k + MAX_LAURENT_DEGREE`.
///
/// Terms are joined by `+`/`-`; each is `[coef][*]z[^k]` or a bare
/// coefficient. Coefficients are real or imaginary literals or a
/// parenthesized complex number: `2z^-1 - (1+i)*z^3 + 0.5`.
pub fn laurent(text: &str) -> Result<Vec<Complex64>, String> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * MAX_LAURENT_DEGREE + 1) as usize];
    let terms = split_terms(text)?;
    if terms.is_empty() {
        return Err("empty symbol".into());
    }
    for (negative, body) in terms {
        let (coef, power) = parse_term(&body)?;
        let slot = &mut coeffs[(power + MAX_LAURENT_DEGREE) as usize];
        *slot += if negative { -coef } else { coef };
    }
    Ok(coeffs)
}

fn split_terms(text: &str) -> Result<Vec<(bool, String)>, String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        let exponent_sign = matches!(prev, Some('^'))
            || (matches!(prev, Some('e' | 'E'))
                && current
                    .chars()
                    .rev()
                    .nth(1)
                    .is_some_and(|d| d.is_ascii_digit() || d == '.'));
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced ')'".into());
                }
            }
            _ => {}
        }
        if (c == '+' || c == '-') && depth == 0 && !exponent_sign {
            if !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
                negative = false;
            } else if prev.is_some_and(|p| p != '+' && p != '-') {
                return Err(format!("misplaced '{c}'"));
            }
            if c == '-' {
                negative = !negative;
            }
        } else {
            current.push(c);
        }
        prev = Some(c);
    }
    if depth != 0 {
        return Err("unbalanced '('".into());
    }
    if current.is_empty() {
        if prev.is_some() {
            return Err("trailing operator".into());
        }
    } else {
        terms.push((negative, current));
    }
    Ok(terms)
}

fn parse_term(body: &str) -> Result<(Complex64, i32), String> {
    let z_at = body.rfind('z');
    let (coef_text, power) = match z_at {
        None => (body, 0),
        Some(at) => {
            let power = parse_power(&body[at + 1..])?;
            let coef = match body[..at].strip_suffix('*') {
                Some("") => return Err("dangling '*'".into()),
                Some(c) => c,
                None => &body[..at],
            };
            (coef, power)
        }
    };
    if power.abs() > MAX_LAURENT_DEGREE {
        return Err(format!(
            "power {power} outside [-{0}, {0}]",
            MAX_LAURENT_DEGREE
        ));
    }
    let coef = if coef_text.is_empty() {
        Complex64::new(1.0, 0.0)
    } else {
        complex(coef_text)?
    };
    Ok((coef, power))
}

fn parse_power(rest: &str) -> Result<i32, String> {
    if rest.is_empty() {
        return Ok(1);
    }
    let exp = rest
        .strip_prefix('^')
        .ok_or_else(|| format!("unexpected '{rest}' after z"))?;
    let exp = exp
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .or_else(|| exp.strip_prefix('{').and_then(|s| s.strip_suffix('}')))
        .unwrap_or(exp);
    exp.parse::<i32>()
        .map_err(|_| format!("bad exponent '{exp}'"))
}

/// Operator from either a `{"chi", "psi"}` pair or a Laurent symbol. `arg`
/// is read as a file if one exists at that path.
pub fn symbol_operator(
    arg: &str,
    domain: &ModelSpace,
    codomain: &ModelSpace,
) -> Result<OperatorMatrix, CliError> {
    let text = if arg == "-" || std::path::Path::new(arg).is_file() {
        read_source(arg)?
    } else {
        arg.to_owned()
    };
    if text.trim_start().starts_with('{') {
        let raw: SymbolJson = parse_json(&text, "symbol pair")?;
        return Ok(SymbolPair::from_json(domain, codomain, &raw)?.operator());
    }
    let coeffs = laurent(text.trim()).map_err(|e| CliError::Usage(format!("symbol: {e}")))?;
    let phi = domain.grid().sample(|z| {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(i, c)| c * z.powi(i as i32 - MAX_LAURENT_DEGREE))
            .sum()
    });
    Ok(atto_matrix(domain, codomain, &phi)?)
}
