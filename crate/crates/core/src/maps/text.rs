//! Text form of monomial maps, one string per variable followed by the
//! dimension and degree:
//!
//! ```text
//! x - (1+0j)*t1**1
//! y - (1+0j)*t1**2
//! z - (1+0j)*t1**3
//! dimension = 1
//! degree = 3
//! ```

use super::{py_complex, MonomialMap};
use crate::error::{Error, Result};
use crate::numerics::decimal::{parse_decimal, rational_to_qd};
use crate::numerics::{Complex, QuadDouble, StoredComplex};

pub fn format_map(m: &MonomialMap) -> Vec<String> {
    let mut out: Vec<String> = m
        .varnames
        .iter()
        .zip(&m.coeffs)
        .zip(&m.exponents)
        .map(|((name, c), e)| {
            let mut s = format!("{name} - {}", py_complex(*c));
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    p if p < 0 => s.push_str(&format!("*t{}**({p})", k + 1)),
                    p => s.push_str(&format!("*t{}**{p}", k + 1)),
                }
            }
            s
        })
        .collect();
    out.push(format!("dimension = {}", m.dim));
    out.push(format!("degree = {}", m.degree()));
    out
}

fn bad(line: &str) -> Error {
    Error::InvalidInput(format!("cannot parse map line '{line}'"))
}

fn py_real(s: &str) -> Option<QuadDouble> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let v = match body {
        "inf" => QuadDouble::from_f64(f64::INFINITY),
        "nan" => QuadDouble::from_f64(f64::NAN),
        _ => rational_to_qd(&parse_decimal(body)?),
    };
    Some(if neg { -v } else { v })
}

/// Parses a Python complex literal such as `(1+0j)`, `(-0.5-2e-07j)` or `3j`.
fn py_complex_parse(s: &str) -> Option<StoredComplex> {
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let inner = inner.strip_suffix('j')?;
    let bytes = inner.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Some(Complex::new(py_real(&inner[..i])?, py_real(&inner[i..])?)),
        None => Some(Complex::new(QuadDouble::ZERO, py_real(inner)?)),
    }
}

/// Inverse of [`format_map`].
pub fn parse_map<S: AsRef<str>>(lines: &[S]) -> Result<MonomialMap> {
    let lines: Vec<&str> = lines.iter().map(|l| l.as_ref().trim()).filter(|l| !l.is_empty()).collect();
    let value = |key: &str| -> Result<i64> {
        lines
            .iter()
            .find_map(|l| l.strip_prefix(key).and_then(|r| r.trim().strip_prefix('=')))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("map text lacks '{key} = ...'")))
    };
    let dim = usize::try_from(value("dimension")?).map_err(|_| Error::InvalidInput("negative dimension".into()))?;
    let mut m = MonomialMap { varnames: Vec::new(), dim, coeffs: Vec::new(), exponents: Vec::new() };
    for line in lines.iter().filter(|l| !l.starts_with("dimension") && !l.starts_with("degree")) {
        let (name, rhs) = line.split_once(" - ").ok_or_else(|| bad(line))?;
        let mut factors = rhs.split('*').filter(|f| !f.is_empty());
        let coeff = factors.next().and_then(py_complex_parse).ok_or_else(|| bad(line))?;
        let mut e = vec![0i64; dim];
        let rest: Vec<&str> = factors.collect();
        // Factors come as "tK", "", "p" after splitting "tK**p" on '*'.
        for pair in rest.chunks(2) {
            let [t, p] = pair else { return Err(bad(line)) };
            let k: usize = t.strip_prefix('t').and_then(|k| k.parse().ok()).ok_or_else(|| bad(line))?;
            let p: i64 = p.trim_start_matches('(').trim_end_matches(')').parse().map_err(|_| bad(line))?;
            if k == 0 || k > dim {
                return Err(bad(line));
            }
            e[k - 1] = p;
        }
        m.varnames.push(name.trim().to_string());
        m.coeffs.push(coeff);
        m.exponents.push(e);
    }
    if value("degree")? != m.degree() {
        return Err(Error::InvalidInput("degree line disagrees with the exponents".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_complex_literals() {
        assert_eq!(py_complex_parse("(1+0j)"), Some(Complex::new(QuadDouble::ONE, QuadDouble::ZERO)));
        assert_eq!(py_complex_parse("2j").unwrap().im.to_f64(), 2.0);
        let c = py_complex_parse("(-2.5e-07-1e+16j)").unwrap();
        assert_eq!((c.re.to_f64(), c.im.to_f64()), (-2.5e-7, -1e16));
        assert!(py_complex_parse("(1+0)").is_none());
    }

    #[test]
    fn round_trip() {
        let m = MonomialMap {
            varnames: vec!["x".into(), "y".into()],
            dim: 2,
            coeffs: vec![Complex::from_f64(0.5, -2.0), Complex::from_f64(1.0, 0.0)],
            exponents: vec![vec![1, 0], vec![-1, 3]],
        };
        let text = format_map(&m);
        assert_eq!(text, ["x - (0.5-2j)*t1**1", "y - (1+0j)*t1**(-1)*t2**3", "dimension = 2", "degree = 2"]);
        assert_eq!(parse_map(&text).unwrap(), m);
    }

    #[test]
    fn zero_dimensional() {
        let m = MonomialMap {
            varnames: vec!["x".into()],
            dim: 0,
            coeffs: vec![Complex::from_f64(-2.0, 0.0)],
            exponents: vec![vec![]],
        };
        let text = format_map(&m);
        assert_eq!(text, ["x - (-2+0j)", "dimension = 0", "degree = 0"]);
        assert_eq!(parse_map(&text).unwrap(), m);
    }
}
