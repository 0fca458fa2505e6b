//! Runs the four metatheory suites on a few generated cases.

use lammu::iu_types::SearchBudget;
use lammu::metatheory::{
    gen_typed_judgment, suite_struct_subst, suite_subject_expansion, suite_subject_reduction, suite_term_subst,
    GenConfig,
};
use lammu::reduction::RuleId;

fn main() {
    let cfg = GenConfig { cases: 30, ..GenConfig::default() };
    let budget = SearchBudget::default();
    for (j, d) in gen_typed_judgment(&cfg).take(3) {
        println!("generated: {j} ({} nodes)", d.size());
    }
    print!("{}", suite_subject_reduction(&cfg, &RuleId::TYPED, budget).unwrap().to_text());
    print!("{}", suite_subject_expansion(&cfg, &RuleId::TYPED, budget).unwrap().to_text());
    print!("{}", suite_term_subst(&cfg, budget).to_text());
    print!("{}", suite_struct_subst(&cfg, budget).to_text());
}
