use crate::error::{Error, Result};
use crate::polynomial::{PolySystem, Polynomial};
use crate::StoredComplex;

/// Cyclic n-roots: for `k = 1..n-1` the sum over `i` of the products of `k`
/// consecutive variables `x_i ... x_{i+k-1}` (indices mod n), and finally
/// `x_0 x_1 ... x_{n-1} - 1`.
pub fn cyclic(n: usize) -> Result<PolySystem> {
    if n < 2 {
        return Err(Error::Domain(format!("cyclic n-roots needs n >= 2, got {n}")));
    }
    let mut polys = Vec::with_capacity(n);
    for k in 1..n {
        let terms = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                for j in i..i + k {
                    e[j % n] = 1;
                }
                (StoredComplex::one(), e)
            })
            .collect();
        polys.push(Polynomial::from_terms(n, terms));
    }
    polys.push(Polynomial::from_terms(
        n,
        vec![(StoredComplex::one(), vec![1; n]), (-StoredComplex::one(), vec![0; n])],
    ));
    let names = (0..n).map(|i| format!("x{i}")).collect();
    PolySystem::new(polys, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{format_system, parse_system};

    #[test]
    fn cyclic4_expansion() {
        let expected = parse_system(
            "x0 + x1 + x2 + x3;
             x0*x1 + x1*x2 + x2*x3 + x3*x0;
             x0*x1*x2 + x1*x2*x3 + x2*x3*x0 + x3*x0*x1;
             x0*x1*x2*x3 - 1;",
        )
        .unwrap();
        let c4 = cyclic(4).unwrap();
        assert_eq!(c4.varnames, expected.varnames);
        for (a, b) in c4.polys.iter().zip(&expected.polys) {
            let mut ea: Vec<_> = a.terms.iter().map(|t| (t.exponents.clone(), t.coeff.re.to_f64())).collect();
            let mut eb: Vec<_> = b.terms.iter().map(|t| (t.exponents.clone(), t.coeff.re.to_f64())).collect();
            ea.sort_by(|x, y| x.0.cmp(&y.0));
            eb.sort_by(|x, y| x.0.cmp(&y.0));
            assert_eq!(ea, eb);
        }
        assert_eq!(parse_system(&format_system(&c4)).unwrap(), c4);
    }

    #[test]
    fn cyclic_degrees() {
        assert_eq!(cyclic(7).unwrap().degrees(), vec![1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(cyclic(8).unwrap().bezout_number(), 40320);
        assert!(cyclic(1).is_err());
    }
}
