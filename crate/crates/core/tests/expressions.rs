use proptest::prelude::*;
use ruled_core::{differentiate, parse_expression, Expr};

/// Smooth, bounded expressions on `u ∈ [-1, 1]`.
fn smooth_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("u".to_string()),
        (1u32..40).prop_map(|k| format!("{}", k as f64 / 8.0)),
        Just("pi".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (2 + cos({b}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("atan({a})")),
            inner.clone().prop_map(|a| format!("exp(sin({a}))")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.prop_map(|a| format!("({a})^3")),
        ]
    })
}

fn eval(e: &Expr, u: f64) -> f64 {
    e.eval(u).expect("smooth expression evaluates")
}

/// Fourth-order central difference of `order`-th derivative via nesting.
fn fd(e: &Expr, u: f64, order: usize) -> f64 {
    if order == 0 {
        return eval(e, u);
    }
    let h = 1e-3;
    let g = |x: f64| fd(e, x, order - 1);
    (g(u - 2.0 * h) - 8.0 * g(u - h) + 8.0 * g(u + h) - g(u + 2.0 * h)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_is_idempotent(text in smooth_expr(), u in -1.0f64..1.0) {
        let e = parse_expression(&text).unwrap();
        let printed = e.to_string();
        let again = parse_expression(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        prop_assert_eq!(eval(&again, u).to_bits(), eval(&e, u).to_bits());
    }

    #[test]
    fn derivatives_match_differences(text in smooth_expr(), u in -0.9f64..0.9) {
        let e = parse_expression(&text).unwrap();
        let d1 = differentiate(&e, 1);
        let exact = eval(&d1, u);
        let approx = fd(&e, u, 1);
        prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1.0), "{text}: {exact} vs {approx}");
        let d2 = differentiate(&e, 2);
        let exact = eval(&d2, u);
        let approx = fd(&d1, u, 1);
        prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1.0), "{text}: {exact} vs {approx}");
    }
}

#[test]
fn derivative_of_known_forms() {
    let e = parse_expression("u^2*sin(u)").unwrap();
    let d = differentiate(&e, 1);
    for u in [-1.0f64, 0.0, 0.5, 2.0] {
        assert!((eval(&d, u) - (2.0 * u * u.sin() + u * u * u.cos())).abs() < 1e-14);
    }
    let third = differentiate(&parse_expression("exp(2*u)").unwrap(), 3);
    assert!((eval(&third, 0.25) - 8.0 * 0.5f64.exp()).abs() < 1e-12);
}
