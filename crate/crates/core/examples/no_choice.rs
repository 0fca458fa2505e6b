//! A term of type A ∪ (A→B) that has neither type on its own.

use lammu::grammar::parse_judgment;
use lammu::iu_types::{derive, Judgment, SearchBudget};

fn goal(ty: &str) -> Judgment {
    let r = parse_judgment(&format!("|- mu d.[d] (\\x. mu b.[d] x) : {ty} |")).unwrap();
    Judgment::new(r.gamma, r.term, r.ty, r.delta)
}

fn main() {
    let budget = SearchBudget::default().with_depth(6);
    let d = derive(&goal("A \\/ (A -> B)"), budget).expect("the union is derivable");
    print!("{}", d.render());
    for ty in ["A", "A -> B"] {
        println!("{ty}: {:?}", derive(&goal(ty), budget).map(|d| d.size()));
    }
}
