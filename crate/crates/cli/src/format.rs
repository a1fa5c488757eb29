//! Number formatting and complex-flag parsing.

use num_complex::Complex64;

/// Shortest decimal that round-trips the `f64` (never more than 17
/// significant digits). Plain decimals for moderate magnitudes, exponent
/// notation outside `[1e-5, 1e17)`.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if (1e-5..1e17).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `RE+IMi` / `RE-IMi`. A negative zero imaginary part prints as `+0i`.
pub fn complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
}

/// Parses `2`, `-1.5`, `2+0.5i`, `1e-3-2i`, `0.5i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}' (expected RE+IMi)");
    let real = |p: &str| -> Result<f64, String> {
        let v: f64 = p.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other)?,
    };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 0.13608276348795434, 2.5e-300, -7.0e20, 123456789.0, 1e-5, 9.999999999999999e16] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(-1.0), "-1");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(complex(Complex64::new(-1.0, 0.0)), "-1+0i");
        assert_eq!(complex(Complex64::new(0.0, -0.0)), "0+0i");
        assert_eq!(complex(Complex64::new(0.5, -2.0)), "0.5-2i");
    }

    #[test]
    fn complex_parsing() {
        let cases = [
            ("2", (2.0, 0.0)),
            ("-1", (-1.0, 0.0)),
            ("2+0.5i", (2.0, 0.5)),
            ("2-0.5i", (2.0, -0.5)),
            ("1e-3-2e-1i", (1e-3, -0.2)),
            ("1E+2+1i", (100.0, 1.0)),
            ("0.5i", (0.0, 0.5)),
            ("-i", (0.0, -1.0)),
            ("3+i", (3.0, 1.0)),
            (" 1 + 2i ", (1.0, 2.0)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(parse_complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        for s in ["", "i2", "1+2", "abc", "1++2i", "nan", "inf+1i"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }
}
