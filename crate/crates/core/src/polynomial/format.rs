use super::{PolySystem, Polynomial};
use crate::numerics::decimal::shortest_repr;
use crate::numerics::StoredComplex;

/// Coefficient text that parses back to the identical value: a plain
/// decimal for real numbers, `(a+b*i)` otherwise.
pub fn format_coefficient(c: &StoredComplex) -> String {
    if c.im.is_zero() {
        return shortest_repr(c.re);
    }
    let im = shortest_repr(c.im.abs());
    let sign = if c.im.0[0] < 0.0 { '-' } else { '+' };
    format!("({}{}{}*i)", shortest_repr(c.re), sign, im)
}

fn monomial(exponents: &[u32], names: &[String]) -> String {
    let factors: Vec<String> = exponents
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    factors.join("*")
}

pub fn format_polynomial(p: &Polynomial, names: &[String]) -> String {
    if p.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, t) in p.terms.iter().enumerate() {
        let mono = monomial(&t.exponents, names);
        let real = t.coeff.im.is_zero();
        let negative = real && t.coeff.re.0[0] < 0.0;
        let magnitude = if negative { -t.coeff } else { t.coeff };
        let unit = real && magnitude.re.0 == [1.0, 0.0, 0.0, 0.0];
        let body = match (mono.is_empty(), unit) {
            (true, _) => format_coefficient(&magnitude),
            (false, true) => mono,
            (false, false) => format!("{}*{}", format_coefficient(&magnitude), mono),
        };
        match (k == 0, negative) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// Variable order a reader would infer from the polynomials alone.
fn appearance_order(s: &PolySystem) -> Vec<usize> {
    let mut seen = Vec::new();
    for p in &s.polys {
        for t in &p.terms {
            for (v, &e) in t.exponents.iter().enumerate() {
                if e > 0 && !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
    }
    seen
}

/// One `;`-terminated polynomial per line. A header naming the variables is
/// emitted only when the order of first appearance would not recover the
/// variable table.
pub fn format_system(s: &PolySystem) -> String {
    let mut out = String::new();
    let in_order = appearance_order(s) == (0..s.nvars()).collect::<Vec<_>>();
    let reserved = s.varnames.iter().any(|n| matches!(n.as_str(), "i" | "I" | "j"));
    if !in_order || reserved {
        out.push_str(&format!("{} {} {}\n", s.len(), s.nvars(), s.varnames.join(" ")));
    }
    for p in &s.polys {
        out.push_str(&format_polynomial(p, &s.varnames));
        out.push_str(";\n");
    }
    out
}
