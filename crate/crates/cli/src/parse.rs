//! Parsers for the textual flag formats: complex numbers, epsilon ladders
//! and polynomials.

use brownlab::stats::log_ladder;
use brownlab::{c64, parse, parse_with_vars, NcPoly};

/// Rungs produced by `lo:hi:log10` when no count is given.
pub const DEFAULT_RUNGS: usize = 10;

/// Parses `"a+bi"`, `"a-bi"`, `"a"`, `"bi"` or `"i"` (spaces allowed).
pub fn complex(text: &str) -> Result<c64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{text}' is not a complex number of the form a+bi");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| c64::new(re, 0.0)).map_err(|_| bad());
    };
    // The imaginary part starts at the last sign that is not an exponent
    // sign and not the leading character.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(c64::new(re, im))
}

/// Parses `lo:hi:log10[:count]`, a comma-separated list, or a single value.
pub fn ladder(text: &str) -> Result<Vec<f64>, String> {
    let t = text.trim();
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) || parts[2] != "log10" {
            return Err(format!("'{text}': expected lo:hi:log10 or lo:hi:log10:count"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"));
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(format!("'{text}': need 0 < lo < hi"));
        }
        let count = match parts.get(3) {
            Some(c) => c
                .parse::<usize>()
                .ok()
                .filter(|&c| c >= 2)
                .ok_or_else(|| format!("'{c}': rung count must be an integer >= 2"))?,
            None => DEFAULT_RUNGS,
        };
        return Ok(log_ladder(lo, hi, count));
    }
    t.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{}' is not a number", s.trim()))
        })
        .collect()
}

/// Parses a polynomial, in exactly `vars` variables when given.
pub fn polynomial(text: &str, vars: Option<usize>) -> brownlab::Result<NcPoly> {
    match vars {
        Some(n) => parse_with_vars(text, n),
        None => parse(text),
    }
}
