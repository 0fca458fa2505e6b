//! The preorder on intersection-union types and canonical forms.

use lammu::grammar::parse_type_any;
use lammu::typelang::{canonicalize, subtype, type_equiv};

fn main() {
    let pairs = [
        ("A /\\ B", "A"),
        ("A", "A \\/ B"),
        ("bot", "A"),
        ("A", "top"),
        ("(A -> C) /\\ (B -> C)", "A \\/ B -> C"),
        ("A \\/ B -> C", "(A -> C) /\\ (B -> C)"),
        ("A -> B /\\ C", "(A -> B) /\\ (A -> C)"),
        ("A -> B", "A /\\ D -> B \\/ E"),
        ("A \\/ B", "A"),
    ];
    for (a, b) in pairs {
        let (ta, tb) = (parse_type_any(a).unwrap(), parse_type_any(b).unwrap());
        println!("{a}  <=  {b} : {:5}  equivalent: {}", subtype(&ta, &tb), type_equiv(&ta, &tb));
    }
    let t = parse_type_any("(A /\\ A) \\/ (B \\/ A)").unwrap();
    println!("canonical form of {t}: {}", canonicalize(&t));
}
