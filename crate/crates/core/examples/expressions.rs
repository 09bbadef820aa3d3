//! Parsing, canonical forms, differentiation and substitution.

use curvlab::expr::{parse_expr, AssumptionSet, Context};

fn main() {
    let mut ctx = Context::new();
    let x = ctx.add_coord("x", true).unwrap();
    let y = ctx.add_coord("y", false).unwrap();
    ctx.add_constant("p").unwrap();
    let w = ctx.add_function("w", &["x", "y"]).unwrap();

    // equal rational functions share one canonical form
    let a = parse_expr(&ctx, "(x^2 - y^2)/(x - y)").unwrap();
    let b = parse_expr(&ctx, "y + x").unwrap();
    println!("(x^2 - y^2)/(x - y) = {a}, equal to x + y: {}", a == b);

    let e = parse_expr(&ctx, "x*w - p^2*y^2/x^2 + exp(x^3/3)*x^(-2/3)").unwrap();
    println!("e       = {e}");
    println!("de/dx   = {}", e.diff(x));
    println!("d2e/dxdy = {}", e.diff(x).diff(y));

    let mut s = AssumptionSet::new();
    s.push(w, parse_expr(&ctx, "x*y").unwrap()).unwrap();
    println!("e with w = x*y: {}", s.apply(&e).unwrap());
    println!("de/dx with w = x*y: {}", s.apply(&e.diff(x)).unwrap());
}
