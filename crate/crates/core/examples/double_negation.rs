//! Double negation elimination: the term has a free name of type ⊥.

use lammu::grammar::parse_judgment;
use lammu::simple_types::{check_simple, SimpleJudgment};
use lammu::syntax::free_names;

fn main() {
    let r = parse_judgment("|- \\y. mu a.[b] y (\\x. mu d.[a] x) : ((A -> bot) -> bot) -> A | b:bot").unwrap();
    let j = SimpleJudgment::new(r.gamma, r.term, r.ty, r.delta);
    let d = check_simple(&j).expect("double negation elimination is derivable");
    print!("{}", d.render());
    for a in free_names(&j.term) {
        println!("free name {a} : {}", j.delta[&a]);
    }

    let closed = parse_judgment("|- \\y. mu a.[b] y (\\x. mu d.[a] x) : ((A -> bot) -> bot) -> A |").unwrap();
    let err = check_simple(&SimpleJudgment::new(closed.gamma, closed.term, closed.ty, closed.delta)).unwrap_err();
    println!("without b in the right environment: {err}");
}
