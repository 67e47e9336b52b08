use polysolve::numerics::{Complex, Precision};
use polysolve::polynomial::{format_system, parse_system, PolySystem};
use polysolve::solver::{cyclic, format_solutions, solve_blackbox, SolverOptions};

const TRINOMIAL: &str = "2\nx^2*y^2 + 2*x - 1;\nx^2*y^2 - 3*y + 1;\n";

fn solve(s: &PolySystem, tasks: usize, precision: Precision, seed: u64) -> polysolve::solver::SolveReport {
    solve_blackbox(s, &SolverOptions { tasks, precision, seed, ..SolverOptions::default() }).unwrap()
}

fn has_trinomial_root(r: &polysolve::solver::SolveReport) -> bool {
    r.solutions.iter().any(|s| {
        let (x, y) = (s.coords[0].to_f64(), s.coords[1].to_f64());
        (x.re - 0.48613).abs() <= 5e-6 && x.im.abs() <= 1e-8 && (y.re - 0.34258).abs() <= 5e-6 && y.im.abs() <= 1e-8
    })
}

#[test]
fn trinomial_is_stable_across_random_gammas() {
    let s = parse_system(TRINOMIAL).unwrap();
    for seed in 0..200 {
        let r = solve(&s, 0, Precision::D, seed);
        let c = r.counts;
        assert_eq!(c.paths, 16);
        assert_eq!(c.converged + c.diverged + c.failed, 16, "seed {seed}: {c:?}");
        assert_eq!(r.solutions.len(), 4, "seed {seed}: {c:?}");
        assert!(has_trinomial_root(&r), "seed {seed}");
        assert!(r.solutions.iter().all(|s| s.res <= 1e-10), "seed {seed}");
    }
}

#[test]
fn trinomial_at_every_precision() {
    let s = parse_system(TRINOMIAL).unwrap();
    for p in [Precision::D, Precision::DD, Precision::QD] {
        let r = solve(&s, 1, p, 11);
        assert_eq!(r.solutions.len(), 4);
        assert!(has_trinomial_root(&r));
        let tol = match p {
            Precision::D => 1e-14,
            Precision::DD => 1e-28,
            Precision::QD => 1e-40,
        };
        assert!(r.solutions.iter().all(|s| s.res <= tol), "{p:?}");
    }
}

#[test]
fn cyclic_four_expansion() {
    let s = cyclic(4).unwrap();
    let expected =
        parse_system("4\nx0+x1+x2+x3;\nx0*x1+x1*x2+x2*x3+x3*x0;\nx0*x1*x2+x1*x2*x3+x2*x3*x0+x3*x0*x1;\nx0*x1*x2*x3-1;\n").unwrap();
    assert_eq!(format_system(&s), format_system(&expected));
    assert_eq!(cyclic(7).unwrap().degrees(), vec![1, 2, 3, 4, 5, 6, 7]);
}

#[test]
fn cyclic_five_counts_and_determinism() {
    let s = cyclic(5).unwrap();
    let base = solve(&s, 1, Precision::D, 5);
    assert_eq!(base.counts.paths, 120);
    assert_eq!(base.solutions.len(), 70);
    let text = format_solutions(&base.solutions, &base.varnames);
    for tasks in [0, 2, 3] {
        let r = solve(&s, tasks, Precision::D, 5);
        assert_eq!(format_solutions(&r.solutions, &r.varnames), text, "tasks {tasks}");
    }
    for seed in [6, 7] {
        assert_eq!(solve(&s, 2, Precision::D, seed).solutions.len(), 70, "seed {seed}");
    }
    for sol in &base.solutions {
        let x: Vec<Complex<f64>> = sol.point();
        let f = s.evaluate(&x).unwrap();
        assert!(f.iter().all(|v| v.abs_f64() <= 1e-8));
    }
}

#[test]
fn non_square_is_rejected() {
    let s = parse_system("2 3\nx^2 - y;\nx^3 - z;\n").unwrap();
    assert!(matches!(
        solve_blackbox(&s, &SolverOptions::default()),
        Err(polysolve::error::Error::NotSquare { equations: 2, variables: 3 })
    ));
}
