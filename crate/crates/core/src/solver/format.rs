//! The solution text format:
//!
//! ```text
//! solution 1 :
//! t :  1.0000000000000000E+00   0.0000000000000000E+00
//! m : 1
//! the solution for t :
//!  x :  4.8613...E-01   0.0000000000000000E+00
//! == err :  1.234E-12 = rco :  3.456E-01 = res :  5.678E-13 =
//! ```

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::numerics::decimal::{format_limbs, parse_decimal, rational_to_qd};
use crate::numerics::{Complex, QuadDouble, StoredComplex};
use crate::tracker::SolutionRecord;

const RULE: &str = "===========================================================";

/// Scientific notation with `decimals` digits after the point, a two-digit
/// signed exponent and a leading sign slot (blank for nonnegative values),
/// correctly rounded from the full multi-limb value.
pub fn format_sci(q: QuadDouble, decimals: usize) -> String {
    let lead = q.0[0];
    let sign = if lead.is_sign_negative() { '-' } else { ' ' };
    if lead == 0.0 {
        return format!("{sign}0.{}E+00", "0".repeat(decimals));
    }
    if !lead.is_finite() {
        return format!("{sign}{}", if lead.is_nan() { "NaN" } else { "Inf" });
    }
    let text = format_limbs(&q.abs().0, decimals + 1);
    let (mantissa, exp) = text.split_once('e').expect("scientific form");
    let exp: i64 = exp.parse().expect("integer exponent");
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}{mantissa}E{esign}{:02}", exp.abs())
}

fn sci_f64(x: f64) -> String {
    format_sci(QuadDouble::from_f64(x), 3)
}

/// One solution block, numbered from 1.
pub fn format_solution(number: usize, sol: &SolutionRecord, names: &[String]) -> String {
    let mut out = format!("solution {number} :\n");
    out.push_str(&format!(
        "t : {}  {}\n",
        format_sci(QuadDouble::from_f64(sol.t), 16),
        format_sci(QuadDouble::ZERO, 16)
    ));
    out.push_str(&format!("m : {}\n", sol.m));
    out.push_str("the solution for t :\n");
    for (name, c) in names.iter().zip(&sol.coords) {
        out.push_str(&format!(" {name} : {}  {}\n", format_sci(c.re, 16), format_sci(c.im, 16)));
    }
    out.push_str(&format!(
        "== err : {} = rco : {} = res : {} =\n",
        sci_f64(sol.err),
        sci_f64(sol.rco),
        sci_f64(sol.res)
    ));
    out
}

/// A full solution file: a header with the count and dimension, then every
/// block.
pub fn format_solutions(sols: &[SolutionRecord], names: &[String]) -> String {
    let mut out = format!("THE SOLUTIONS :\n{} {}\n{RULE}\n", sols.len(), names.len());
    for (i, s) in sols.iter().enumerate() {
        out.push_str(&format_solution(i + 1, s, names));
    }
    out
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::InvalidInput(format!("solution text, line {}: {}", line + 1, message.into()))
}

fn parse_number(word: &str, line: usize) -> Result<QuadDouble> {
    let (negative, body) = match word.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, word.strip_prefix('+').unwrap_or(word)),
    };
    let value = parse_decimal(body).map(|r| rational_to_qd(&r)).ok_or_else(|| bad(line, format!("bad number '{word}'")))?;
    Ok(if negative { -value } else { value })
}

fn value_after_colon(line: &str) -> Option<&str> {
    line.split_once(':').map(|(_, v)| v.trim())
}

/// Parses solution blocks (with or without the file header). Returns the
/// variable names of the first block and all records.
pub fn parse_solutions(text: &str) -> Result<(Vec<String>, Vec<SolutionRecord>)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut names: Vec<String> = Vec::new();
    let mut sols = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if !lines[i].trim_start().starts_with("solution ") {
            i += 1;
            continue;
        }
        i += 1;
        let t_line = lines.get(i).ok_or_else(|| bad(i, "missing t line"))?;
        let t_words: Vec<&str> = value_after_colon(t_line).ok_or_else(|| bad(i, "missing t"))?.split_whitespace().collect();
        let t = parse_number(t_words.first().ok_or_else(|| bad(i, "missing t"))?, i)?.to_f64();
        i += 1;
        let m_line = lines.get(i).ok_or_else(|| bad(i, "missing m line"))?;
        let m: usize = value_after_colon(m_line)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(i, "bad multiplicity"))?;
        i += 2;
        let mut block_names = Vec::new();
        let mut coords = Vec::new();
        while i < lines.len() && !lines[i].trim_start().starts_with("==") {
            let (name, rest) = lines[i].split_once(':').ok_or_else(|| bad(i, "expected 'name : re im'"))?;
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 2 {
                return Err(bad(i, "expected two numbers"));
            }
            block_names.push(name.trim().to_string());
            coords.push(Complex::new(parse_number(words[0], i)?, parse_number(words[1], i)?));
            i += 1;
        }
        let diag = lines.get(i).ok_or_else(|| bad(i, "missing diagnostics"))?;
        let fields: Vec<&str> = diag.split('=').map(str::trim).filter(|f| !f.is_empty()).collect();
        let get = |key: &str| -> Result<f64> {
            let f = fields
                .iter()
                .find(|f| f.starts_with(key))
                .ok_or_else(|| bad(i, format!("missing {key}")))?;
            Ok(parse_number(value_after_colon(f).unwrap_or(""), i)?.to_f64())
        };
        let (err, rco, res) = (get("err")?, get("rco")?, get("res")?);
        i += 1;
        if names.is_empty() {
            names = block_names;
        } else if names != block_names {
            return Err(bad(i, "variable names differ between solutions"));
        }
        sols.push(SolutionRecord { t, m, coords, err, rco, res, is_real: false, singular: false });
    }
    Ok((names, sols))
}

/// The solution as a dictionary: every variable, then `t`, `m`, `err`,
/// `rco` and `res` (as complex numbers with zero imaginary part).
pub fn solution_to_map(sol: &SolutionRecord, names: &[String]) -> Result<IndexMap<String, StoredComplex>> {
    if names.len() != sol.coords.len() {
        return Err(Error::DimensionMismatch { expected: sol.coords.len(), got: names.len() });
    }
    let real = |x: f64| Complex::new(QuadDouble::from_f64(x), QuadDouble::ZERO);
    let mut map: IndexMap<String, StoredComplex> =
        names.iter().cloned().zip(sol.coords.iter().copied()).collect();
    map.insert("t".into(), real(sol.t));
    map.insert("m".into(), real(sol.m as f64));
    map.insert("err".into(), real(sol.err));
    map.insert("rco".into(), real(sol.rco));
    map.insert("res".into(), real(sol.res));
    Ok(map)
}
