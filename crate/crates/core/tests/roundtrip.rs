//! Printing and re-parsing preserves programs.

use pqdyn::parser::{parse_program, pretty};
use pqdyn::prelude::{check_with_prelude, load_examples, load_prelude};
use pqdyn::syntax::{alpha_eq, Program};
use pqdyn::termgen::TermGen;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_same(a: &Program, b: &Program) {
    assert_eq!(a.declarations.len(), b.declarations.len());
    for (x, y) in a.declarations.iter().zip(&b.declarations) {
        assert_eq!(x.name, y.name);
        assert_eq!(pretty(&x.ty), pretty(&y.ty));
        assert!(alpha_eq(&x.abstracted_body(), &y.abstracted_body()), "{}", x.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_programs_round_trip(seed in any::<u64>(), depth in 0u32..4) {
        let src = TermGen::new(ChaCha8Rng::seed_from_u64(seed)).program(3, depth);
        let p = parse_program(&src).unwrap();
        let printed = pretty(&p);
        let q = parse_program(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_same(&p, &q);
        prop_assert_eq!(printed, pretty(&q));
    }
}

#[test]
fn examples_round_trip() {
    for (file, p) in load_examples() {
        let printed = pretty(&p);
        let q = parse_program(&printed).unwrap_or_else(|e| panic!("{file}: {e}\n{printed}"));
        assert_same(&p, &q);
    }
}

#[test]
fn annotated_programs_recheck_at_the_same_types() {
    let prelude = load_prelude();
    for (_, p) in load_examples() {
        let r = check_with_prelude(&prelude, &p.without("boxAttempt"));
        assert!(r.is_ok());
        let annotated = r.env.annotated_program();
        let reparsed = parse_program(&pretty(&annotated)).unwrap();
        let again = check_with_prelude(&pqdyn::typeck::Env::new(), &reparsed);
        assert!(again.is_ok(), "{:?}", again.errors);
        for d in r.env.decls() {
            assert_eq!(again.env.get(&d.name).unwrap().ty, d.ty, "{}", d.name);
        }
    }
}
