use super::*;
use approx::assert_relative_eq;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn problem_validation() {
    assert!(ProblemSpec::division(1, 2.0, 0.0, c(0.0, 0.0), 0).is_err());
    assert!(ProblemSpec::division(0, 2.0, 0.0, c(0.0, 0.0), 4).is_err());
    assert!(ProblemSpec::division(1, 2.0, 0.0, c(1.0, 0.0), 4).is_err());
    assert!(ProblemSpec::two_factor(c(0.1, 0.0), c(0.1, 0.0), 2.0, 0.0, 4).is_err());
    assert!(ProblemSpec::two_factor(c(0.1, 0.0), c(0.2, 0.0), 2.0, 0.0, 1).is_err());
    let problem = ProblemSpec::derivative(2, 1.0, 0.5, c(0.2, 0.1), 6).unwrap();
    assert!(search_division(&problem, 1, 0).is_err());
}

#[test]
fn oracle_diagonal_cases() {
    assert_relative_eq!(eigen_oracle_p2(1, 0.0, c(0.0, 0.0), 8).unwrap(), 2f64.sqrt(), max_relative = 1e-10);
    assert_relative_eq!(eigen_oracle_p2(2, 0.0, c(0.0, 0.0), 8).unwrap(), 3f64.sqrt(), max_relative = 1e-10);
    for n in 1..=3 {
        for alpha in [0.0, 1.0, 2.5] {
            let exact = sharp_constant(SharpConstantParams::new(n, 2.0, alpha).unwrap());
            let got = eigen_oracle_p2(n, alpha, c(0.0, 0.0), n as usize + 6).unwrap();
            assert_relative_eq!(got, exact, max_relative = 1e-10);
        }
    }
    assert!(eigen_oracle_p2(3, 0.0, c(0.0, 0.0), 2).is_err());
    assert!(eigen_oracle_p2(1, 0.0, c(0.0, 0.0), 80).is_err());
}

#[test]
fn oracle_off_center_approaches_constant_from_below() {
    let a = c(0.3, 0.4);
    for n in 1..=3 {
        for alpha in [0.0, 1.0] {
            let exact = sharp_constant(SharpConstantParams::new(n, 2.0, alpha).unwrap());
            let mut previous = 0.0;
            for extra in [4, 8, 16, 32] {
                let value = eigen_oracle_p2(n, alpha, a, n as usize + extra).unwrap();
                assert!(value <= exact * (1.0 + 1e-12));
                assert!(value >= previous * (1.0 - 1e-12));
                previous = value;
            }
            assert!((exact - previous) / exact < 1e-8, "N={n} alpha={alpha}: {previous} vs {exact}");
        }
    }
}

#[test]
fn division_search_at_p2_matches_constant() {
    let problem = ProblemSpec::division(1, 2.0, 0.0, c(0.0, 0.0), 6).unwrap();
    let result = search_division(&problem, 8, 7).unwrap();
    assert!(result.converged);
    assert!(result.relative_gap.unwrap().abs() <= 1e-4);
    assert_relative_eq!(result.attained_value, 2f64.sqrt(), max_relative = 1e-6);
    assert_eq!(result.local_values.len(), 8);
}

#[test]
fn maximizer_is_a_multiple_of_z() {
    let problem = ProblemSpec::division(1, 2.0, 0.0, c(0.0, 0.0), 6).unwrap();
    let result = search_division(&problem, 4, 1).unwrap();
    assert_relative_eq!(result.coefficients[1].norm(), 2f64.sqrt(), max_relative = 1e-6);
    for (k, coeff) in result.coefficients.iter().enumerate() {
        if k != 1 {
            assert!(coeff.norm() <= 1e-5, "c_{k} = {coeff}");
        }
    }
    let norm = crate::quadrature::bergman_norm(
        &result.maximizer(),
        2.0,
        &RadialWeight::standard(0.0).unwrap(),
        &QuadratureSpec::standard(),
    )
    .unwrap();
    assert_relative_eq!(norm, 1.0, max_relative = 1e-8);
}

#[test]
fn division_search_respects_upper_bound_for_small_p() {
    let problem = ProblemSpec::division(1, 0.5, 0.0, c(0.0, 0.0), 5).unwrap();
    let result = search_division(&problem, 8, 3).unwrap();
    let theory = result.theory_value.unwrap();
    assert_relative_eq!(theory, 1.5625, max_relative = 1e-12);
    assert!(result.attained_value <= theory * (1.0 + 2e-4));
    assert!(result.attained_value >= theory * (1.0 - 1e-3));
}

#[test]
fn derivative_search_examples() {
    let centered = ProblemSpec::derivative(1, 2.0, 0.0, c(0.0, 0.0), 6).unwrap();
    let result = search_derivative(&centered, 4, 0).unwrap();
    assert!(result.relative_gap.unwrap().abs() <= 1e-4);
    assert_relative_eq!(result.attained_value, 2f64.sqrt(), max_relative = 1e-6);

    let second = ProblemSpec::derivative(2, 2.0, 0.0, c(0.0, 0.0), 8).unwrap();
    let result = search_derivative(&second, 4, 0).unwrap();
    assert_relative_eq!(result.attained_value, 2.0 * 3f64.sqrt(), max_relative = 1e-3);

    let shifted = ProblemSpec::derivative(1, 2.0, 0.0, c(0.5, 0.0), 12).unwrap();
    let result = search_derivative(&shifted, 4, 0).unwrap();
    assert_relative_eq!(result.attained_value, 2f64.sqrt() / 0.75f64.powi(2), max_relative = 1e-3);
    assert!(result.attained_value <= result.theory_value.unwrap() * (1.0 + 2e-4));
}

#[test]
fn search_is_deterministic_and_thread_independent() {
    let problem = ProblemSpec::division(1, 1.3, 0.5, c(0.2, -0.1), 5).unwrap();
    let mut config = SearchConfig::new(4, 99);
    let first = search(&problem, &config).unwrap();
    let second = search(&problem, &config).unwrap();
    assert_eq!(first, second);
    config.parallel = true;
    let threaded = search(&problem, &config).unwrap();
    assert_eq!(first, threaded);
}

#[test]
fn search_value_is_rotation_equivariant() {
    let a = c(0.35, 0.0);
    let rotated = a * Complex64::from_polar(1.0, 1.1);
    let base = search_division(&ProblemSpec::division(1, 3.0, 0.0, a, 6).unwrap(), 6, 5).unwrap();
    let turned = search_division(&ProblemSpec::division(1, 3.0, 0.0, rotated, 6).unwrap(), 6, 5).unwrap();
    assert_relative_eq!(base.attained_value, turned.attained_value, max_relative = 1e-6);
}

#[test]
fn degree_ladder_is_monotone() {
    let problem = ProblemSpec::division(1, 1.0, 0.0, c(0.4, 0.0), 2).unwrap();
    let results = degree_ladder(&problem, &[2, 4, 6, 8], &SearchConfig::new(4, 11)).unwrap();
    for pair in results.windows(2) {
        assert!(pair[1].attained_value >= pair[0].attained_value * (1.0 - 1e-9));
    }
    assert!(results.last().unwrap().attained_value <= 1.5 * (1.0 + 2e-4));
}

#[test]
fn two_factor_lies_between_single_and_product_bounds() {
    let problem = ProblemSpec::two_factor(c(0.0, 0.0), c(0.5, 0.0), 2.0, 0.0, 12).unwrap();
    let result = explore_two_factor(&problem, 4, 0).unwrap();
    assert!(result.theory_value.is_none());
    assert_relative_eq!(result.product_bound.unwrap(), 2.0, max_relative = 1e-12);
    assert!(result.attained_value > 2f64.sqrt());
    assert!(result.attained_value < 2.0);

    let rotation = Complex64::from_polar(1.0, 0.7);
    let symmetric = ProblemSpec::two_factor(c(0.3, 0.1), c(-0.3, -0.1), 2.0, 0.0, 8).unwrap();
    let turned = ProblemSpec::two_factor(c(0.3, 0.1) * rotation, c(-0.3, -0.1) * rotation, 2.0, 0.0, 8).unwrap();
    let v1 = explore_two_factor(&symmetric, 4, 2).unwrap().attained_value;
    let v2 = explore_two_factor(&turned, 4, 2).unwrap().attained_value;
    assert_relative_eq!(v1, v2, max_relative = 1e-6);
}

#[test]
fn verify_examples() {
    let report = verify_extremal(1, 2.0, 0.0, c(0.0, 0.0), &QuadratureSpec::standard()).unwrap();
    assert!(report.deviations.ratio < 1e-8);
    let report = verify_extremal(3, 0.5, 2.0, c(0.6, 0.2), &QuadratureSpec::standard()).unwrap();
    assert!(report.deviations.max() < 1e-6, "{report:?}");
    assert!((report.norm_f - 1.0).abs() < 1e-7);
}
