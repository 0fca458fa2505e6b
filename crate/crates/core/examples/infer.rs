//! Principal simple typings, and the errors for untypable terms.

use lammu::grammar::parse_term;
use lammu::simple_types::infer_simple;

fn main() {
    for src in [
        "\\x. x",
        "\\f. \\x. f (f x)",
        "\\x. mu a.[a] x (\\y. mu b.[a] y)",
        "\\y. mu a.[b] y (\\x. mu d.[a] x)",
        "mu a.[b] x",
        "\\x. x x",
    ] {
        let t = parse_term(src).unwrap();
        match infer_simple(&t) {
            Ok(typing) => println!("{}", typing.judgment()),
            Err(e) => println!("{t}: {e}"),
        }
    }
}
