//! Parsing of command-line vectors such as `1.5,0` or `1+2j,-0.5j`.

use num_complex::Complex64;

/// Parses one scalar: `2`, `-1.5e-3`, `3j`, `1-2j`, `-j`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    let bad = || format!("cannot parse {text:?} as a number (use re or re+imj)");
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        return finite(Complex64::new(re, 0.0)).ok_or_else(bad);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().map_err(|_| bad())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    finite(Complex64::new(re, im)).ok_or_else(bad)
}

fn finite(z: Complex64) -> Option<Complex64> {
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

/// Comma-separated list of scalars.
pub fn parse_vector(text: &str) -> Result<Vec<Complex64>, String> {
    if text.trim().is_empty() {
        return Err("empty vector".into());
    }
    text.split(',').map(parse_complex).collect()
}
