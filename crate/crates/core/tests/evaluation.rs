use morl::envs::{coin_flip, ScriptedEnv};
use morl::eval::discounted_return;
use morl::io::{read_solution_csv, write_solution_csv};
use morl::rng::rng_from_seed;
use morl::{rollout, sample_returns, Action, MomdpModel, SolutionSet, TabularEnv, UtilityFunction};
use proptest::prelude::*;

fn only_action(_: &[f64]) -> Action {
    Action::Discrete(0)
}

#[test]
fn ser_and_esr_diverge_on_the_coin_flip() {
    let mut env = coin_flip();
    let batch = sample_returns(&mut env, &only_action, 1.0, 10_000, &mut rng_from_seed(17)).unwrap();
    let product: UtilityFunction = "mul obj0 obj1".parse().unwrap();
    let ser = batch.ser(&product).unwrap();
    let esr = batch.esr(&product).unwrap();
    assert!((ser - 1.0).abs() <= 0.12, "SER {ser}");
    assert!(esr.abs() <= 0.02, "ESR {esr}");
    let linear = UtilityFunction::linear(vec![0.3, 0.7]).unwrap();
    assert!((batch.ser(&linear).unwrap() - batch.esr(&linear).unwrap()).abs() <= 1e-12);
}

proptest! {
    #[test]
    fn rollout_return_is_the_discounted_sum(
        rewards in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 1..30),
        gamma in 0.0f64..=1.0,
    ) {
        let mut env = ScriptedEnv::new(rewards.clone()).unwrap();
        let r = rollout(&mut env, &only_action, gamma, &mut rng_from_seed(0)).unwrap();
        prop_assert_eq!(r.steps, rewards.len());
        // oracle: Horner from the back, r_1 + γ (r_2 + γ (…))
        let mut expected = vec![0.0; 3];
        for step in rewards.iter().rev() {
            for (e, x) in expected.iter_mut().zip(step) {
                *e = x + gamma * *e;
            }
        }
        for (a, b) in r.components.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
        let direct = discounted_return(&rewards, gamma, 3);
        for (a, b) in direct.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn rollouts_stop_at_the_horizon() {
    // a self-loop paying (1, 2) forever, cut after 7 steps
    let model = MomdpModel::from_json(
        r#"{"num_states":1,"num_actions":1,"num_objectives":2,"gamma":1.0,
        "transitions":[[0,0,0,1.0]],"rewards":[[0,0,0,[1.0,2.0]]],"initial":[1.0]}"#,
    )
    .unwrap();
    let mut env = TabularEnv::new(model, 7);
    let r = rollout(&mut env, &only_action, 0.5, &mut rng_from_seed(0)).unwrap();
    assert_eq!(r.steps, 7);
    let geometric = (1.0 - 0.5f64.powi(7)) / 0.5;
    assert!((r.components[0] - geometric).abs() < 1e-12);
    assert!((r.components[1] - 2.0 * geometric).abs() < 1e-12);
}

#[test]
fn actions_outside_the_space_are_rejected() {
    let mut env = coin_flip();
    let bad = |_: &[f64]| Action::Discrete(3);
    assert!(rollout(&mut env, &bad, 1.0, &mut rng_from_seed(0)).is_err());
}

#[test]
fn model_json_round_trip() {
    let env = coin_flip();
    let text = env.model().to_json();
    assert_eq!(&MomdpModel::from_json(&text).unwrap(), env.model());
    assert!(MomdpModel::from_json(r#"{"num_states":1}"#).is_err());
}

proptest! {
    #[test]
    fn csv_round_trip_is_lossless(rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 2), 1..40)) {
        let set = SolutionSet::from_rows(&rows).unwrap();
        let names = vec!["a".to_string(), "b".to_string()];
        let mut buf = Vec::new();
        write_solution_csv(&mut buf, &set, &names, None).unwrap();
        prop_assert!(!buf.contains(&b'\r'));
        let (back, cols) = read_solution_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, set);
        prop_assert_eq!(cols, names);
    }
}
