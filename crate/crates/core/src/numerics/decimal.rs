//! Exact conversions between decimal text and multi-limb values, routed
//! through big rationals so parsing and printing round-trip.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::QuadDouble;

/// Parses an unsigned decimal literal (`12`, `0.5`, `3.`, `.25`, `1e-3`,
/// `2.5E+4`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    Some(scale_pow10(BigRational::from_integer(numer), scale))
}

fn pow10(n: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

fn scale_pow10(r: BigRational, scale: i64) -> BigRational {
    if scale >= 0 {
        r * BigRational::from_integer(pow10(scale as u64))
    } else {
        r / BigRational::from_integer(pow10(scale.unsigned_abs()))
    }
}

/// Exact value of a list of limbs.
pub fn limbs_to_rational(limbs: &[f64]) -> BigRational {
    limbs
        .iter()
        .filter(|x| **x != 0.0 && x.is_finite())
        .map(|&x| BigRational::from_float(x).expect("finite limb"))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Nearest-double greedy decomposition of a rational into four limbs.
pub fn rational_to_qd(r: &BigRational) -> QuadDouble {
    let mut rem = r.clone();
    let mut limbs = Vec::with_capacity(4);
    for _ in 0..4 {
        let x = rem.to_f64().unwrap_or(0.0);
        if x == 0.0 || !x.is_finite() {
            if !x.is_finite() {
                limbs.push(x);
            }
            break;
        }
        limbs.push(x);
        rem -= BigRational::from_float(x).expect("finite");
        if rem.is_zero() {
            break;
        }
    }
    QuadDouble::from_limbs(&limbs)
}

/// Significant digits of `|r|` rounded half-to-even, with decimal exponent
/// `k` such that `|r| ~ d.ddd * 10^k`.
fn scientific_digits(r: &BigRational, digits: usize, hint: f64) -> (String, i64) {
    let v = r.abs();
    let mut k = if hint != 0.0 && hint.is_finite() {
        hint.abs().log10().floor() as i64
    } else {
        0
    };
    loop {
        let scaled = scale_pow10(v.clone(), digits as i64 - 1 - k);
        let n = round_half_even(&scaled);
        let upper = pow10(digits as u64);
        let lower = pow10(digits as u64 - 1);
        if n >= upper {
            k += 1;
            continue;
        }
        if n < lower {
            k -= 1;
            continue;
        }
        return (n.to_string(), k);
    }
}

fn round_half_even(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(r.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Lays out digits `d1 d2 ... dn` with exponent `k` as plain or scientific
/// text, dropping trailing zeros.
fn layout(negative: bool, digits: &str, k: i64) -> String {
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let n = digits.len() as i64;
    let body = if (-5..16).contains(&k) {
        if k < 0 {
            format!("0.{}{}", "0".repeat((-k - 1) as usize), digits)
        } else if n <= k + 1 {
            format!("{}{}", digits, "0".repeat((k + 1 - n) as usize))
        } else {
            format!("{}.{}", &digits[..(k + 1) as usize], &digits[(k + 1) as usize..])
        }
    } else if n == 1 {
        format!("{digits}e{k}")
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], k)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Shortest decimal text that parses back to exactly the same limbs.
pub fn shortest_repr(q: QuadDouble) -> String {
    let limbs = q.limbs();
    if limbs[0] == 0.0 {
        return "0".to_string();
    }
    if !limbs[0].is_finite() {
        return format!("{}", limbs[0]);
    }
    let r = limbs_to_rational(&limbs);
    let negative = r.is_negative();
    for d in 1..=72 {
        let (digits, k) = scientific_digits(&r, d, limbs[0]);
        let text = layout(false, &digits, k);
        let back = parse_decimal(&text).map(|x| rational_to_qd(&x));
        if back.map(|b| b.0.map(f64::abs) == q.0.map(f64::abs)).unwrap_or(false) {
            return layout(negative, &digits, k);
        }
    }
    exact_repr(&r)
}

/// Exact decimal expansion of a dyadic rational.
fn exact_repr(r: &BigRational) -> String {
    let negative = r.is_negative();
    let v = r.abs();
    let mut den = v.denom().clone();
    let mut num = v.numer().clone();
    let mut places = 0usize;
    let two = BigInt::from(2u32);
    while den > BigInt::one() {
        let (q, rem) = den.div_rem(&two);
        debug_assert!(rem.is_zero(), "limb sums are dyadic");
        den = q;
        num *= 5u32;
        places += 1;
    }
    let s = num.to_string();
    let body = if places == 0 {
        s
    } else if s.len() > places {
        format!("{}.{}", &s[..s.len() - places], &s[s.len() - places..])
    } else {
        format!("0.{}{}", "0".repeat(places - s.len()), s)
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific text with a fixed number of significant digits, correctly
/// rounded from the exact limb sum.
pub fn format_limbs(limbs: &[f64], digits: usize) -> String {
    if limbs.is_empty() || limbs[0] == 0.0 {
        return "0".to_string();
    }
    if !limbs[0].is_finite() {
        return format!("{}", limbs[0]);
    }
    let r = limbs_to_rational(limbs);
    let (d, k) = scientific_digits(&r, digits.max(1), limbs[0]);
    let sign = if r.numer().sign() == Sign::Minus { "-" } else { "" };
    if d.len() == 1 {
        format!("{sign}{d}e{k}")
    } else {
        format!("{sign}{}.{}e{k}", &d[..1], &d[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        let half = parse_decimal("0.5").unwrap();
        assert_eq!(half, BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_decimal("2.5E+1").unwrap(), BigRational::from_integer(25.into()));
        assert_eq!(parse_decimal(".25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(parse_decimal("1e").is_none());
        assert!(parse_decimal(".").is_none());
    }

    #[test]
    fn tenth_carries_extra_limbs() {
        let q = rational_to_qd(&parse_decimal("0.1").unwrap());
        assert_eq!(q.0[0], 0.1);
        assert!(q.0[1] != 0.0);
        assert_eq!(shortest_repr(q), "0.1");
    }

    #[test]
    fn shortest_repr_round_trips_doubles() {
        for x in [0.1f64, 1.0 / 3.0, -2.5e-20, 12345.678, 1e300] {
            let q = QuadDouble::from_f64(x);
            let text = shortest_repr(q);
            let back = rational_to_qd(&parse_decimal(text.trim_start_matches('-')).unwrap());
            assert_eq!(back.0[0].abs(), x.abs(), "{text}");
            assert_eq!(back.0[1], 0.0, "{text}");
        }
    }

    #[test]
    fn fixed_digit_formatting() {
        assert_eq!(format_limbs(&[0.48613], 5), "4.8613e-1");
        assert_eq!(format_limbs(&[-1.0], 1), "-1e0");
        assert_eq!(format_limbs(&[9.9999], 2), "1.0e1");
    }
}
