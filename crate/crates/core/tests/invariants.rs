mod common;

use lammu::grammar::{parse_term, parse_type_any, print_term, print_type};
use lammu::iu_types::{check_derivation, from_certificate, to_certificate};
use lammu::reduction::{redexes, step, RuleId};
use lammu::simple_types::{embed_in_iu, infer_simple};
use lammu::syntax::{alpha_eq, free_names, free_term_vars};
use lammu::typelang::{canonicalize, subtype, type_equiv};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn term_print_parse(seed: u64, size in 1usize..14) {
        let m = common::term(&mut rng(seed), size, true);
        let back = parse_term(&print_term(&m)).unwrap();
        prop_assert!(alpha_eq(&m, &back));
    }

    #[test]
    fn type_print_parse(seed: u64, depth in 0usize..4) {
        let t = common::inter_type(&mut rng(seed), depth, true);
        prop_assert_eq!(canonicalize(&parse_type_any(&print_type(&t)).unwrap()), canonicalize(&t));
    }

    #[test]
    fn subtype_preorder(seed: u64) {
        let mut r = rng(seed);
        let [a, b, c] = [0, 0, 0].map(|_| common::inter_type(&mut r, 2, true));
        prop_assert!(subtype(&a, &a));
        if subtype(&a, &b) && subtype(&b, &c) {
            prop_assert!(subtype(&a, &c));
        }
        let both = lammu::typelang::Type::inter(vec![a.clone(), b.clone()]);
        prop_assert!(subtype(&both, &a) && subtype(&both, &b));
        let either = lammu::typelang::Type::union(vec![a.clone(), b.clone()]);
        prop_assert!(subtype(&a, &either) && subtype(&b, &either));
    }

    #[test]
    fn canonical_form_is_stable(seed: u64) {
        let t = common::inter_type(&mut rng(seed), 3, true);
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert!(type_equiv(&t, &c));
    }

    #[test]
    fn steps_keep_free_symbols(seed: u64, size in 1usize..12) {
        let m = common::term(&mut rng(seed), size, true);
        let (fv, fn_) = (free_term_vars(&m), free_names(&m));
        for (p, rule) in redexes(&m, &RuleId::ALL) {
            let n = step(&m, &p, rule).unwrap();
            prop_assert!(free_term_vars(&n).is_subset(&fv), "{} at {:?}", rule.as_str(), p);
            prop_assert!(free_names(&n).is_subset(&fn_) || rule == RuleId::EtaMu);
        }
    }

    #[test]
    fn certificates_round_trip(seed: u64, size in 1usize..10) {
        let m = common::term(&mut rng(seed), size, true);
        if let Ok(typing) = infer_simple(&m) {
            let d = embed_in_iu(&typing.derivation);
            prop_assert!(check_derivation(&d).is_ok());
            let back = from_certificate(&to_certificate(&d)).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
