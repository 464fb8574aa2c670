use super::*;
use crate::measures::{MeasureId, MomentFunctional};
use crate::momatrix::{invert_exact, moment_matrix};
use crate::polycore::{binomial, graded_lex_basis, rat, simplex_generator_power, UPoly};
use crate::Error;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn constant(c: i64) -> UPoly {
    UPoly::from_integers(&[c])
}

fn s(n: usize) -> i64 {
    ((n + 1) * (n + 2) / 2) as i64
}

fn weight(sol: &HandelmanSolution, alpha: &[u32]) -> f64 {
    sol.certificate.weight(alpha).unwrap().to_f64()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

fn arcsine_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        to_f64(&Rational::from_integer(binomial(k as u64, k as u64 / 2))) / 2f64.powi(k as i32)
    }
}

#[test]
fn handelman_examples() {
    let sol = solve_handelman(&constant(3), 1, &opts()).unwrap();
    assert!(sol.report.converged);
    assert!(sol.report.residual <= 1e-10);
    for (alpha, c) in [([0, 0], 1.0), ([1, 0], 2.0), ([0, 1], 2.0)] {
        assert!(close(weight(&sol, &alpha), c, 1e-9), "{alpha:?}");
    }
    assert!(close(sol.dual.values[0], 1.0, 1e-9));
    assert!(close(sol.dual.values[1], 0.5, 1e-9));

    let sol = solve_handelman(&constant(6), 2, &opts()).unwrap();
    for (alpha, c) in [([1, 1], 6.0), ([2, 0], 3.0), ([0, 2], 3.0), ([1, 0], 2.0), ([0, 1], 2.0), ([0, 0], 1.0)] {
        assert!(close(weight(&sol, &alpha), c, 1e-9), "{alpha:?}");
    }
}

#[test]
fn handelman_boundary_target_diverges() {
    match solve_handelman(&UPoly::x(), 3, &opts()) {
        Err(Error::NoInteriorCertificate { degree, report, .. }) => {
            assert_eq!(degree, 3);
            assert!(!report.converged);
        }
        other => panic!("expected a diagnostic, got {other:?}"),
    }
}

#[test]
fn handelman_rejects_bad_arguments() {
    let p = UPoly::from_integers(&[1, 0, 1]);
    assert!(matches!(solve_handelman(&p, 1, &opts()), Err(Error::Argument(_))));
    assert!(matches!(solve_handelman(&p, 0, &opts()), Err(Error::Argument(_))));
    assert!(matches!(
        solve_handelman(&constant(3), 1, &SolverOptions::new(0.0, 10)),
        Err(Error::Argument(_))
    ));
    let bad_init = SolverOptions {
        init: Some(vec![1.0, 2.0]),
        ..opts()
    };
    assert!(matches!(solve_handelman(&constant(3), 1, &bad_init), Err(Error::Argument(_))));
}

#[test]
fn handelman_nonconstant_target() {
    // 1 + x² is strictly positive on [0, 1]; degree elevation gives room.
    let p = UPoly::from_integers(&[1, 0, 1]);
    let sol = solve_handelman(&p, 4, &opts()).unwrap();
    let cert = Certificate::Handelman(sol.certificate.clone());
    assert!(verify_certificate(&cert, &p).unwrap() <= 1e-9);
    assert!(sol.certificate.weights.iter().all(|w| w.value.to_f64() > 0.0));
}

#[test]
fn bernstein_coordinates_reconstruct_target() {
    let p = MPoly::from_terms(2, [(vec![0, 0], rat(2, 1)), (vec![1, 1], rat(-1, 3)), (vec![0, 2], rat(5, 7))]).unwrap();
    let n = 3;
    let b = handelman::bernstein_coords_for_test(2, n, &p);
    let bern: Vec<_> = graded_lex_basis(3, n as u32)
        .into_iter()
        .filter(|g| g.iter().sum::<u32>() == n as u32)
        .collect();
    let mut acc = MPoly::zero(2);
    for (g, c) in bern.iter().zip(&b) {
        let scale = c * Rational::from_integer(crate::polycore::multinomial(g));
        acc = &acc + &simplex_generator_power(2, g).unwrap().scale(&scale);
    }
    assert_eq!(acc, p);
}

#[test]
fn handelman_kkt_and_recovery() {
    let o = opts();
    for n in 1..=8 {
        let sol = solve_handelman(&constant(s(n)), n, &o).unwrap();
        assert!(sol.report.residual <= o.tol);
        assert!(sol.report.iterations <= 100, "n = {n}: {} iterations", sol.report.iterations);
        for (k, v) in sol.dual.values.iter().enumerate() {
            assert!(close(*v, 1.0 / (k + 1) as f64, 1e-8), "n = {n}, k = {k}: {v}");
        }
        for w in &sol.certificate.weights {
            let (i, j) = (w.alpha[0] as u64, w.alpha[1] as u64);
            let pairing: f64 = simplex_generator_power(1, &w.alpha)
                .unwrap()
                .terms()
                .map(|(e, c)| to_f64(c) * sol.dual.values[e[0] as usize])
                .sum();
            assert!((w.value.to_f64() * pairing - 1.0).abs() <= 10.0 * o.tol);
            let expected = to_f64(&Rational::from_integer(binomial(i + j, i))) * (i + j + 1) as f64;
            assert!(close(w.value.to_f64(), expected, 1e-6));
        }
    }
}

#[test]
fn dual_objective_descends() {
    // Non-increasing up to rounding of values that agree to ~1e-15.
    let descends = |h: &[f64]| h.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0));
    let sol = solve_handelman(&constant(s(6)), 6, &opts()).unwrap();
    assert!(descends(&sol.report.history));
    assert!(sol.report.history.first() > sol.report.history.last());
    let sol = solve_putinar(6, None, &opts()).unwrap();
    assert!(descends(&sol.report.history));
    let sol = solve_simplex(2, 3, &opts()).unwrap();
    assert!(descends(&sol.report.history));
    let init = (0..=8).map(|k| 0.7f64.powi(k)).collect();
    let sol = solve_handelman(&constant(s(8)), 8, &SolverOptions { init: Some(init), ..opts() }).unwrap();
    assert!(descends(&sol.report.history));
}

#[test]
fn handelman_uniqueness_from_two_starts() {
    let o = opts();
    for n in [2, 5, 8] {
        let a = solve_handelman(&constant(s(n)), n, &o).unwrap();
        // Dirac measure at x = 0.3.
        let init: Vec<f64> = (0..=n).map(|k| 0.3f64.powi(k as i32)).collect();
        let b = solve_handelman(&constant(s(n)), n, &SolverOptions { init: Some(init), ..o.clone() }).unwrap();
        for (wa, wb) in a.certificate.weights.iter().zip(&b.certificate.weights) {
            assert!((wa.value.to_f64() - wb.value.to_f64()).abs() <= 100.0 * o.tol);
        }
    }
}

#[test]
fn handelman_objective_matches_closed_form() {
    for n in 1..=8 {
        let sol = solve_handelman(&constant(s(n)), n, &opts()).unwrap();
        let closed: f64 = graded_lex_basis(2, n as u32)
            .iter()
            .map(|a| {
                let (i, j) = (a[0] as u64, a[1] as u64);
                (to_f64(&Rational::from_integer(binomial(i + j, i))) * (i + j + 1) as f64).ln()
            })
            .sum();
        assert!(closed >= sol.report.objective - 1e-6);
        assert!((closed - sol.report.objective).abs() <= 1e-6);
    }
}

#[test]
fn handelman_rationalizes_exactly() {
    for n in 1..=8 {
        let sol = solve_handelman(&constant(s(n)), n, &opts()).unwrap();
        let exact = rationalize_handelman(&sol).unwrap().expect("exact certificate");
        for w in &exact.weights {
            let (i, j) = (w.alpha[0] as u64, w.alpha[1] as u64);
            let expected = Rational::from_integer(binomial(i + j, i) * (i + j + 1));
            assert_eq!(w.value, CertValue::Exact(expected));
        }
        let cert = Certificate::Handelman(exact);
        assert_eq!(verify_certificate_exact(&cert, &constant(s(n))).unwrap(), Some(true));
    }
}

#[test]
fn putinar_examples() {
    let sol = solve_putinar(1, None, &opts()).unwrap();
    let a: Vec<Vec<f64>> = sol.certificate.gram_a.iter().map(|r| r.iter().map(CertValue::to_f64).collect()).collect();
    let b = sol.certificate.gram_b[0][0].to_f64();
    assert!((a[0][0] - 1.0).abs() < 1e-9 && a[0][1].abs() < 1e-9 && (a[1][1] - 2.0).abs() < 1e-9);
    assert!((b - 2.0).abs() < 1e-9);
    for (v, e) in sol.dual.values.iter().zip([1.0, 0.0, 0.5]) {
        assert!((v - e).abs() < 1e-9);
    }

    let sol = solve_putinar(4, Some(&constant(9)), &opts()).unwrap();
    for (k, v) in sol.dual.values.iter().enumerate() {
        assert!((v - arcsine_moment(k)).abs() <= 1e-8, "k = {k}");
    }
}

#[test]
fn putinar_negative_target_diagnostic() {
    assert!(matches!(
        solve_putinar(1, Some(&constant(-1)), &opts()),
        Err(Error::NoInteriorCertificate { degree: 1, .. })
    ));
    assert!(matches!(solve_putinar(0, None, &opts()), Err(Error::Argument(_))));
    let p = UPoly::from_integers(&[1, 0, 0, 1]);
    assert!(matches!(solve_putinar(1, Some(&p), &opts()), Err(Error::Argument(_))));
}

#[test]
fn putinar_kkt_and_recovery() {
    let o = opts();
    let arcsine = MomentFunctional::new(MeasureId::Arcsine).unwrap();
    for n in 1..=8 {
        let sol = solve_putinar(n, None, &o).unwrap();
        assert!(sol.report.residual <= o.tol);
        for (k, v) in sol.dual.values.iter().enumerate() {
            if k % 2 == 1 {
                assert!(v.abs() <= 1e-8);
            } else {
                assert!(close(*v, arcsine_moment(k), 1e-8), "n = {n}, k = {k}");
            }
        }
        let exact = invert_exact(&moment_matrix(&arcsine, n as u32, None).unwrap()).unwrap();
        for i in 0..=n {
            for j in 0..=n {
                let got = sol.certificate.gram_a[i][j].to_f64();
                assert!((got - to_f64(&exact[(i, j)])).abs() <= 1e-6);
            }
        }
        // A · M_n(y) = I and B · M_{n-1}(g y) = I.
        let y = &sol.dual.values;
        let m = |i: usize, j: usize| y[i + j];
        let mg = |i: usize, j: usize| y[i + j] - y[i + j + 2];
        for (gram, size, entry) in [
            (&sol.certificate.gram_a, n + 1, &m as &dyn Fn(usize, usize) -> f64),
            (&sol.certificate.gram_b, n, &mg),
        ] {
            #[allow(clippy::needless_range_loop)]
            for i in 0..size {
                for j in 0..size {
                    let v: f64 = (0..size).map(|k| gram[i][k].to_f64() * entry(k, j)).sum();
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert!((v - id).abs() <= 10.0 * o.tol, "n = {n} ({i},{j}): {v}");
                }
            }
        }
    }
}

#[test]
fn putinar_uniqueness_from_two_starts() {
    let o = opts();
    for n in [2, 5, 8] {
        let a = solve_putinar(n, None, &o).unwrap();
        // Moments of the semicircle law on [-1, 1]: Catalan(k/2) / 4^{k/2}.
        let init: Vec<f64> = (0..=2 * n)
            .map(|k| {
                if k % 2 == 1 {
                    0.0
                } else {
                    let h = k as u64 / 2;
                    to_f64(&Rational::new(binomial(2 * h, h), ((h + 1) << (2 * h)).into()))
                }
            })
            .collect();
        let b = solve_putinar(n, None, &SolverOptions { init: Some(init), ..o.clone() }).unwrap();
        for (ra, rb) in a.certificate.gram_a.iter().zip(&b.certificate.gram_a) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x.to_f64() - y.to_f64()).abs() <= 100.0 * o.tol * x.to_f64().abs().max(1.0));
            }
        }
    }
}

#[test]
fn putinar_objective_matches_closed_form() {
    let arcsine = MomentFunctional::new(MeasureId::Arcsine).unwrap();
    let g = MPoly::from(UPoly::from_integers(&[1, 0, -1]));
    for n in 1..=8 {
        let sol = solve_putinar(n, None, &opts()).unwrap();
        let a = moment_matrix(&arcsine, n as u32, None).unwrap().entries.determinant();
        let b = moment_matrix(&arcsine, n as u32 - 1, Some(&g)).unwrap().entries.determinant();
        let closed = -to_f64(&a).ln() - to_f64(&b).ln();
        assert!(closed >= sol.report.objective - 1e-6);
        assert!((closed - sol.report.objective).abs() <= 1e-6, "n = {n}");
    }
}

#[test]
fn putinar_rationalizes_exactly() {
    let arcsine = MomentFunctional::new(MeasureId::Arcsine).unwrap();
    for n in 1..=8 {
        let sol = solve_putinar(n, None, &opts()).unwrap();
        let exact = rationalize_putinar(&sol).unwrap().expect("exact certificate");
        let inv = invert_exact(&moment_matrix(&arcsine, n as u32, None).unwrap()).unwrap();
        for i in 0..=n {
            for j in 0..=n {
                assert_eq!(exact.gram_a[i][j], CertValue::Exact(inv[(i, j)].clone()));
            }
        }
    }
}

#[test]
fn putinar_nonconstant_target() {
    let p = UPoly::from_integers(&[2, 1]);
    let sol = solve_putinar(2, Some(&p), &opts()).unwrap();
    let cert = Certificate::Putinar(sol.certificate);
    assert!(verify_certificate(&cert, &p).unwrap() <= 1e-9);
}

#[test]
fn simplex_examples() {
    let sol = solve_simplex(2, 1, &opts()).unwrap();
    assert!(close(weight(&sol, &[0, 0, 0]), 1.0, 1e-9));
    for a in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        assert!(close(weight(&sol, &a), 3.0, 1e-9));
    }
    let sol = solve_simplex(3, 2, &opts()).unwrap();
    for alpha in graded_lex_basis(4, 2).into_iter().filter(|a| a.iter().sum::<u32>() == 2) {
        let expected = if alpha.contains(&2) { 10.0 } else { 20.0 };
        assert!(close(weight(&sol, &alpha), expected, 1e-8), "{alpha:?}");
    }
}

#[test]
fn simplex_matches_uniform_candidate_up_to_degree_two() {
    for d in 1..=4 {
        for n in 1..=2 {
            let sol = solve_simplex(d, n, &opts()).unwrap();
            assert!(uniform_candidate_deviation(&sol).unwrap() <= 1e-8, "d = {d}, n = {n}");
            let exact = rationalize_handelman(&sol).unwrap().expect("exact certificate");
            let candidate = uniform_candidate(d, n).unwrap();
            for (w, (alpha, c)) in exact.weights.iter().zip(candidate) {
                assert_eq!(w.alpha, alpha);
                assert_eq!(w.value, CertValue::Exact(c));
            }
        }
    }
}

#[test]
fn simplex_degree_three_is_reported() {
    let sol = solve_simplex(2, 3, &opts()).unwrap();
    assert!(sol.report.converged);
    let deviation = uniform_candidate_deviation(&sol).unwrap();
    assert!(deviation.is_finite());
}

#[test]
fn verify_certificate_examples() {
    let h = Certificate::Handelman(HandelmanCertificate {
        d: 1,
        n: 1,
        weights: [([0, 0], 1), ([1, 0], 2), ([0, 1], 2)]
            .into_iter()
            .map(|(a, c)| Weight {
                alpha: a.to_vec(),
                value: CertValue::Exact(rat(c, 1)),
            })
            .collect(),
        target: MPoly::from(constant(3)),
    });
    assert_eq!(verify_certificate(&h, &constant(3)).unwrap(), 0.0);
    assert_eq!(verify_certificate(&h, &constant(4)).unwrap(), 1.0);
    assert_eq!(verify_certificate_exact(&h, &constant(3)).unwrap(), Some(true));
    assert_eq!(verify_certificate_exact(&h, &constant(4)).unwrap(), Some(false));
    assert!(verify_certificate(&h, &MPoly::one(2)).is_err());

    let p = Certificate::Putinar(PutinarCertificate {
        n: 1,
        gram_a: vec![
            vec![CertValue::Float(1.0), CertValue::Float(0.0)],
            vec![CertValue::Float(0.0), CertValue::Float(2.0)],
        ],
        gram_b: vec![vec![CertValue::Float(2.0)]],
        target: MPoly::from(constant(3)),
    });
    assert_eq!(verify_certificate(&p, &constant(3)).unwrap(), 0.0);
    assert_eq!(verify_certificate_exact(&p, &constant(3)).unwrap(), None);
}

#[test]
fn json_round_trip() {
    let sol = solve_handelman(&constant(3), 1, &opts()).unwrap();
    let float = Certificate::Handelman(sol.certificate.clone());
    let json = serde_json::to_value(&float).unwrap();
    assert_eq!(json["type"], "handelman");
    assert!(json["weights"][0]["value"].is_f64());
    assert_eq!(serde_json::from_value::<Certificate>(json).unwrap(), float);

    let exact = Certificate::Handelman(rationalize_handelman(&sol).unwrap().unwrap());
    let json = serde_json::to_value(&exact).unwrap();
    assert_eq!(json["weights"][1]["value"], "2");
    assert_eq!(serde_json::from_value::<Certificate>(json).unwrap(), exact);

    let sol = solve_putinar(2, None, &opts()).unwrap();
    let exact = Certificate::Putinar(rationalize_putinar(&sol).unwrap().unwrap());
    let json = serde_json::to_string(&exact).unwrap();
    assert!(json.contains(r#""gramA":[["3","0","-4"],["0","2","0"],["-4","0","8"]]"#), "{json}");
    assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), exact);

    let report = serde_json::to_value(&sol.report).unwrap();
    assert_eq!(report.as_object().unwrap().len(), 4);
    let back: SolverReport = serde_json::from_value(report).unwrap();
    assert_eq!(back.iterations, sol.report.iterations);
}
