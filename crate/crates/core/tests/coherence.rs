//! A boxed circuit used as an operation behaves like the function it came
//! from.

use num_complex::Complex64;
use pqdyn::eval::{eval_exec, EvalLimits};
use pqdyn::parser::parse_term;
use pqdyn::prelude::{check_with_prelude, example, load_prelude};
use pqdyn::qsim::{state_distance, QuantumState};
use pqdyn::syntax::{Label, TypingContext, WireType};
use pqdyn::typeck::{infer_elab, Env};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn env() -> Env {
    let r = check_with_prelude(&load_prelude(), &example("teleport_circ.pqd").unwrap());
    assert!(r.is_ok());
    r.env
}

fn run(env: &Env, src: &str, q: &QuantumState) -> QuantumState {
    let ctx = TypingContext::new().with_label(Label(0), WireType::Qubit).unwrap();
    let (t, _, _, _) = infer_elab(env, &ctx, &parse_term(src).unwrap()).unwrap();
    let mut d = eval_exec(q, &t, env, EvalLimits::default()).unwrap();
    assert_eq!(d.len(), 1);
    d.entries.pop().unwrap().1 .0
}

#[test]
fn boxed_teleportation_matches_direct_and_identity() {
    let env = env();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let amps = vec![Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
        let input = QuantumState::pure(&[Label(0)], amps);
        let boxed = run(&env, "apply(box Qubit tele1, ℓ0)", &input);
        let direct = run(&env, "tele1 ℓ0", &input);
        assert!(state_distance(&boxed, &direct).unwrap() <= 1e-9);
        assert!(state_distance(&direct, &input).unwrap() <= 1e-9);
    }
}

#[test]
fn bell_pair_amplitudes() {
    let env = env();
    let (t, _, _, _) = infer_elab(&env, &TypingContext::new(), &parse_term("bell00 ()").unwrap()).unwrap();
    let mut d = eval_exec(&QuantumState::init(&pqdyn::syntax::LabelContext::new()), &t, &env, EvalLimits::default()).unwrap();
    let (q, _) = d.entries.pop().unwrap().1;
    let [b] = q.branches() else { panic!("{}", q.dump()) };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [h, 0.0, 0.0, h];
    for (a, e) in b.amps.iter().zip(expected) {
        assert!((a.norm() - e).abs() < 1e-12, "{}", q.dump());
    }
}
