use polysolve::maps::{format_map, parse_map, solve_binomials};
use polysolve::numerics::{Complex, StoredComplex};
use polysolve::polynomial::{coeff, parse_system, PolySystem, Polynomial};
use proptest::prelude::*;

#[test]
fn twisted_cubic_strings() {
    let s = parse_system("2 3\nx^2 - y;\nx^3 - z;\n").unwrap();
    let maps = solve_binomials(3, &s, true).unwrap();
    assert_eq!(maps.len(), 1);
    assert_eq!(
        format_map(&maps[0]),
        ["x - (1+0j)*t1**1", "y - (1+0j)*t1**2", "z - (1+0j)*t1**3", "dimension = 1", "degree = 3"]
    );
}

fn residual(s: &PolySystem, x: &[StoredComplex]) -> f64 {
    let x: Vec<Complex<f64>> = x.iter().map(|c| c.to_f64()).collect();
    s.evaluate(&x).unwrap().iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
}

fn binomial_system() -> impl Strategy<Value = PolySystem> {
    let row = (prop::collection::vec(0u32..=3, 3), prop::collection::vec(0u32..=3, 3), 0.2f64..6.2);
    prop::collection::vec(row, 1..=2).prop_map(|rows| {
        let polys = rows
            .into_iter()
            .map(|(a, b, angle)| Polynomial::from_terms(3, vec![(coeff(1.0, 0.0), a), (coeff(-angle.cos(), -angle.sin()), b)]))
            .collect();
        PolySystem::new(polys, vec!["x".into(), "y".into(), "z".into()]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Every map evaluated at random torus parameters solves the system,
    /// and the text form round trips.
    #[test]
    fn maps_parametrize_solutions(s in binomial_system(), ts in prop::collection::vec(0.0f64..6.28, 3)) {
        let Ok(maps) = solve_binomials(3, &s, true) else { return Ok(()) };
        for m in &maps {
            let t: Vec<StoredComplex> = ts[..m.dim].iter().map(|a| coeff(a.cos() * 1.3, a.sin() * 1.3)).collect();
            let x = m.eval(&t).unwrap();
            prop_assert!(residual(&s, &x) <= 1e-8, "{:?}", format_map(m));
            // The text carries double precision reprs, so compare text forms.
            let text = format_map(m);
            prop_assert_eq!(format_map(&parse_map(&text).unwrap()), text);
        }
    }
}
