//! Checking identities written in the operator grammar.

use curvlab::catalog;
use curvlab::classify::Workspace;
use curvlab::report::{check_identity, parse_identity};

fn main() {
    let m = catalog::builtin("prm").unwrap().metric().unwrap();
    let ws = Workspace::new(&m);
    for src in ["R.R == 0", "P.P + 1/3*Q(S,P) == 0", "C.S == 0", "W == R", "wedge(S,S) == 0", "div(R) == 0", "nabla(S) == 0"] {
        let out = check_identity(&ws, &parse_identity(src).unwrap()).unwrap();
        match out.residual {
            None => println!("{src}: holds"),
            Some((i, e)) => println!("{src}: fails at {i:?}, residual {e}"),
        }
    }
}
