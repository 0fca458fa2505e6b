//! Erasing does not preserve types, and neither does a μ-step whose
//! named premise has the empty union type.

use lammu::iu_types::check_derivation;
use lammu::metatheory::{demo_empty_union_premise, demo_erasing_failure};

fn main() {
    let demo = demo_erasing_failure().expect("an instance exists");
    check_derivation(&demo.mu_derivation).unwrap();
    print!("{}", demo.mu_derivation.render());
    println!("erased goal, not derivable: {}", demo.erased_goal);
    println!("one component is: {}", demo.component_derivation.conclusion);

    let demo = demo_empty_union_premise();
    print!("\n{}", demo.redex_derivation.render());
    println!("reduct goal: {}", demo.reduct_goal);
    println!("constructive step: {}", demo.constructive_error);
    println!("search for the reduct: {:?}", demo.reduct_search.map(|d| d.size()));
}
