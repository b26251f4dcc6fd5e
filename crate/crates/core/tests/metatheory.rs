//! Preservation, determinism of modality-1 runs and conservation of
//! probability, over the bundled examples and generated programs.

use pqdyn::eval::{audit, EvalLimits};
use pqdyn::parser::parse_program;
use pqdyn::prelude::{check_with_prelude, load_examples, load_prelude};
use pqdyn::termgen::TermGen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMITS: EvalLimits = EvalLimits { max_depth: 4, mass_cutoff: 1.0, prune_threshold: 0.0 };

#[test]
fn examples_satisfy_the_metatheory() {
    let prelude = load_prelude();
    let mut audited = 0;
    for (file, p) in load_examples() {
        let r = check_with_prelude(&prelude, &p);
        for d in &p.declarations {
            if r.env.get(&d.name).is_none() {
                continue;
            }
            // Five-way recursion explodes combinatorially past a couple of
            // rounds; the entry points exercise it at depth 2.
            let limits = if file == "distillation.pqd" { EvalLimits { max_depth: 2, ..LIMITS } } else { LIMITS };
            audit(&r.env, &d.name, limits, None).unwrap_or_else(|e| panic!("{file} {}: {e}", d.name));
            audited += 1;
        }
    }
    assert!(audited >= 15, "{audited}");
}

#[test]
fn generated_programs_satisfy_the_metatheory() {
    let prelude = load_prelude();
    let mut g = TermGen::new(ChaCha8Rng::seed_from_u64(99));
    let (mut terms, mut gen_results, mut deterministic) = (0, 0, 0);
    while terms < 250 {
        let src = g.program(5, 3);
        let p = parse_program(&src).unwrap();
        let r = check_with_prelude(&prelude, &p);
        assert!(r.is_ok(), "{:?}\n{src}", r.errors);
        for d in &p.declarations {
            let a = audit(&r.env, &d.name, LIMITS, None).unwrap_or_else(|e| panic!("{}: {e}\n{src}", d.name));
            terms += 1;
            gen_results += a.gen_results;
            deterministic += usize::from(a.deterministic);
        }
    }
    assert!(gen_results >= 50 && deterministic >= 50, "{gen_results} {deterministic}");
}
