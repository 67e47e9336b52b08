//! Witness set files:
//!
//! ```text
//! WITNESS SET
//! <ambient_dim> <set_dim> <degree> <seed>
//! <embedded system>
//! THE SOLUTIONS :
//! ...
//! ```

use super::{extract_slices, WitnessSet};
use crate::error::{Error, Result};
use crate::polynomial::{format_system, parse_system};
use crate::solver::{format_solutions, parse_solutions};

const MAGIC: &str = "WITNESS SET";
const SOLUTIONS: &str = "THE SOLUTIONS :";

pub fn format_witness(w: &WitnessSet) -> String {
    format!(
        "{MAGIC}\n{} {} {} {}\n{}\n{}",
        w.ambient_dim,
        w.set_dim,
        w.degree(),
        w.seed,
        format_system(&w.embedded).trim_end(),
        format_solutions(&w.points, &w.embedded.varnames)
    )
}

pub fn parse_witness(text: &str) -> Result<WitnessSet> {
    let bad = |m: &str| Error::InvalidInput(format!("witness file: {m}"));
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(MAGIC) {
        return Err(bad("missing 'WITNESS SET' line"));
    }
    let header: Vec<u64> = lines
        .next()
        .ok_or_else(|| bad("missing header"))?
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| bad("header must hold four integers")))
        .collect::<Result<_>>()?;
    let [ambient_dim, set_dim, degree, seed] = header[..] else {
        return Err(bad("header must hold four integers"));
    };
    let rest: Vec<&str> = lines.collect();
    let split = rest.iter().position(|l| l.trim() == SOLUTIONS).ok_or_else(|| bad("missing solutions"))?;
    let embedded = parse_system(&rest[..split].join("\n"))?;
    let (_, points) = parse_solutions(&rest[split..].join("\n"))?;
    let (ambient_dim, set_dim) = (ambient_dim as usize, set_dim as usize);
    if embedded.nvars() != ambient_dim + set_dim || set_dim > embedded.len() {
        return Err(bad("system does not match the dimensions in the header"));
    }
    if points.len() as u64 != degree || points.iter().any(|p| p.coords.len() != embedded.nvars()) {
        return Err(bad("solutions do not match the header"));
    }
    let slices = extract_slices(&embedded, set_dim)?;
    Ok(WitnessSet { ambient_dim, set_dim, embedded, slices, points, seed })
}
