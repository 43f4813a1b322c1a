//! Parsing and evaluating map and control-function expressions.

use jungck::expr::Expr;

fn main() {
    let e = Expr::control("t/(1+t) + 0.1*min(t, 2)").unwrap();
    println!("canonical form: {e}");
    for t in [0.0, 0.5, 1.0, 4.0] {
        println!("  f({t}) = {}", e.eval(t).unwrap());
    }

    // powers are written pow(a, b); `^` is not an operator
    println!("t^2: {}", Expr::control("t^2").unwrap_err());
    println!("pow(t, 2) at 3: {}", Expr::control("pow(t, 2)").unwrap().eval(3.0).unwrap());

    println!("sqrt(x - 1) at 0: {}", Expr::map("sqrt(x - 1)").unwrap().eval(0.0).unwrap_err());
    println!("min(x,): {}", Expr::map("min(x,)").unwrap_err());
    println!("exp(x): {}", Expr::map("exp(x)").unwrap_err());
}
