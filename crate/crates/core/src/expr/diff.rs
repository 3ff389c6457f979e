use super::{BinOp, Expr, Func};

/// Returns the `order`-th derivative of `e` with respect to `u`.
///
/// Order zero returns a clone of the input.
pub fn differentiate(e: &Expr, order: usize) -> Expr {
    let mut out = e.clone();
    for _ in 0..order {
        out = derive(&out);
    }
    out
}

fn derive(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Named(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Neg(a) => Expr::neg(derive(a)),
        Expr::Call(f, a) => {
            let inner = derive(a);
            if inner == Expr::Const(0.0) {
                return Expr::Const(0.0);
            }
            Expr::mul(outer_derivative(*f, a), inner)
        }
        Expr::Binary(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => Expr::add(derive(a), derive(b)),
                BinOp::Sub => Expr::sub(derive(a), derive(b)),
                BinOp::Mul => Expr::add(
                    Expr::mul(derive(a), b.clone()),
                    Expr::mul(a.clone(), derive(b)),
                ),
                BinOp::Div => {
                    let num = Expr::sub(
                        Expr::mul(derive(a), b.clone()),
                        Expr::mul(a.clone(), derive(b)),
                    );
                    Expr::div(num, Expr::pow(b.clone(), Expr::Const(2.0)))
                }
                BinOp::Pow => derive_pow(a, b),
            }
        }
    }
}

/// d/dx f(x) as an expression in the argument `a`.
fn outer_derivative(f: Func, a: &Expr) -> Expr {
    let a = a.clone();
    let one = || Expr::Const(1.0);
    let sq = |x: Expr| Expr::pow(x, Expr::Const(2.0));
    match f {
        Func::Sin => Expr::call(Func::Cos, a),
        Func::Cos => Expr::neg(Expr::call(Func::Sin, a)),
        Func::Tan => Expr::add(one(), sq(Expr::call(Func::Tan, a))),
        Func::Asin => Expr::div(one(), Expr::call(Func::Sqrt, Expr::sub(one(), sq(a)))),
        Func::Acos => Expr::neg(Expr::div(
            one(),
            Expr::call(Func::Sqrt, Expr::sub(one(), sq(a))),
        )),
        Func::Atan => Expr::div(one(), Expr::add(one(), sq(a))),
        Func::Sinh => Expr::call(Func::Cosh, a),
        Func::Cosh => Expr::call(Func::Sinh, a),
        Func::Tanh => Expr::sub(one(), sq(Expr::call(Func::Tanh, a))),
        Func::Exp => Expr::call(Func::Exp, a),
        Func::Log => Expr::div(one(), a),
        Func::Sqrt => Expr::div(Expr::Const(0.5), Expr::call(Func::Sqrt, a)),
        Func::Abs => Expr::div(a.clone(), Expr::call(Func::Abs, a)),
    }
}

fn derive_pow(base: &Expr, exp: &Expr) -> Expr {
    if exp.is_constant() {
        // c * a^(c-1) * a'
        let da = derive(base);
        if da == Expr::Const(0.0) {
            return Expr::Const(0.0);
        }
        let lowered = Expr::pow(base.clone(), Expr::sub(exp.clone(), Expr::Const(1.0)));
        return Expr::mul(Expr::mul(exp.clone(), lowered), da);
    }
    let whole = Expr::pow(base.clone(), exp.clone());
    let db = derive(exp);
    if base.is_constant() {
        // a^b * ln(a) * b'
        return Expr::mul(Expr::mul(whole, Expr::call(Func::Log, base.clone())), db);
    }
    // a^b * (b' ln a + b a'/a)
    let da = derive(base);
    let rate = Expr::add(
        Expr::mul(db, Expr::call(Func::Log, base.clone())),
        Expr::div(Expr::mul(exp.clone(), da), base.clone()),
    );
    Expr::mul(whole, rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn d(text: &str, order: usize, u: f64) -> f64 {
        differentiate(&parse_expression(text).unwrap(), order)
            .eval(u)
            .unwrap()
    }

    #[test]
    fn elementary_rules() {
        assert_eq!(d("sin(u)", 1, 0.0), 1.0);
        assert_eq!(d("u^2", 1, 3.0), 6.0);
        assert_eq!(d("cos(u)", 3, 0.0), 0.0);
        assert_eq!(d("cos(u)", 3, 1.0), 1.0f64.sin());
        assert_eq!(d("5", 2, 1.0), 0.0);
        assert_eq!(differentiate(&parse_expression("pi").unwrap(), 1), Expr::Const(0.0));
    }

    #[test]
    fn closed_form_checks() {
        let u: f64 = 0.7;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        assert!(close(d("tan(u)", 1, u), 1.0 / u.cos().powi(2)));
        assert!(close(d("asin(u)", 1, u), 1.0 / (1.0 - u * u).sqrt()));
        assert!(close(d("acos(u)", 1, u), -1.0 / (1.0 - u * u).sqrt()));
        assert!(close(d("atan(u)", 1, u), 1.0 / (1.0 + u * u)));
        assert!(close(d("tanh(u)", 1, u), 1.0 - u.tanh().powi(2)));
        assert!(close(d("log(u)", 2, u), -1.0 / (u * u)));
        assert!(close(d("sqrt(u)", 1, u), 0.5 / u.sqrt()));
        assert!(close(d("u^u", 1, u), u.powf(u) * (u.ln() + 1.0)));
        assert!(close(d("2^u", 1, u), 2f64.powf(u) * 2f64.ln()));
        assert!(close(d("abs(u - 1)", 1, u), -1.0));
        assert!(close(d("exp(2*u)/u", 1, u), (2.0 * u - 1.0) * (2.0 * u).exp() / (u * u)));
    }
}
