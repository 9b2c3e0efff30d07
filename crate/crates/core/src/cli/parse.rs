//! Complex literals (`a+bi`) and comma-separated lists of them.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn strict(s: &str, whole: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("bad complex literal `{whole}`")))
}

/// Imaginary coefficient, where a bare sign means one.
fn coefficient(s: &str, whole: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => strict(s, whole),
    }
}

/// Parse `a`, `bi`, `a+bi` or `a-bi` (whitespace ignored, `i` alone allowed).
pub fn complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(strict(&s, text)?, 0.0));
    };
    // the sign that starts the imaginary part: last +/- not at the front and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(strict(&body[..k], text)?, coefficient(&body[k..], text)?)),
        None => Ok(Complex64::new(0.0, coefficient(body, text)?)),
    }
}

/// Comma-separated complex literals.
pub fn complex_list(text: &str) -> Result<Vec<Complex64>> {
    if text.trim().is_empty() {
        return Err(Error::InvalidInput("empty list".into()));
    }
    text.split(',').map(complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literals() {
        assert_eq!(complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex(" 3 - 4i ").unwrap(), c(3.0, -4.0));
        assert_eq!(complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(complex("-1e2").unwrap(), c(-100.0, 0.0));
        assert_eq!(complex("0.5i").unwrap(), c(0.0, 0.5));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "1+", "+", "1+2j", "nan", "inf", "1i2", "--i"] {
            assert!(complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(complex_list("i, -i").unwrap(), vec![c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(complex_list("1,,2").is_err());
    }
}
