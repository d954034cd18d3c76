use std::collections::VecDeque;

use morl::envs::{dst_true_front, DeepSeaTreasure, DeepSeaTreasureConfig, DstAction, GridPos, Reservoir, WaterReservoirConfig};
use morl::rng::rng_from_seed;
use morl::{estimate_mean_return, pareto_dominates, Action, Environment, Error, SolutionSet};
use proptest::prelude::*;

fn reservoir() -> Reservoir {
    Reservoir::new(WaterReservoirConfig::default()).unwrap()
}

#[test]
fn reservoir_step_examples() {
    let env = reservoir();
    let t = env.transition_with_inflow(60.0, 10.0, 8.0).unwrap();
    assert_eq!((t.storage, t.reward), (58.0, [-8.0, 0.0]));
    let t = env.transition_with_inflow(5.0, 10.0, 8.0).unwrap();
    assert_eq!((t.release, t.reward[1]), (5.0, -5.0));
    let t = env.transition_with_inflow(40.0, 0.0, 8.0).unwrap();
    assert_eq!((t.storage, t.reward[0]), (48.0, 0.0));
    // overflow is released and counted on top of the stored excess
    let t = env.transition_with_inflow(98.0, 0.0, 8.0).unwrap();
    assert_eq!((t.storage, t.overflow, t.reward[0]), (100.0, 6.0, -56.0));
    assert!(matches!(env.transition_with_inflow(101.0, 0.0, 8.0), Err(Error::Domain(_))));
}

proptest! {
    #[test]
    fn reservoir_conserves_water(seed in any::<u64>(), releases in prop::collection::vec(0.0f64..=100.0, 100)) {
        let mut env = reservoir();
        let mut rng = rng_from_seed(seed);
        let start = env.reset(&mut rng)[0];
        let (mut released, mut inflow, mut overflow) = (0.0, 0.0, 0.0);
        for (k, r) in releases.iter().enumerate() {
            let (t, done) = env.step_detailed(*r, &mut rng).unwrap();
            released += t.release;
            inflow += t.inflow;
            overflow += t.overflow;
            prop_assert!((0.0..=100.0).contains(&t.storage));
            prop_assert!(t.reward.iter().all(|x| *x <= 0.0));
            prop_assert_eq!(done, k == 99);
        }
        prop_assert!(released <= start + inflow + 1e-9);
        prop_assert!((start + inflow - released - overflow - env.storage()).abs() <= 1e-9);
        prop_assert!(matches!(env.step_detailed(0.0, &mut rng), Err(Error::StepAfterTerminal)));
    }
}

fn constant(release: f64) -> impl Fn(&[f64]) -> Action {
    move |_: &[f64]| Action::Continuous(vec![release])
}

#[test]
fn reservoir_objectives_conflict() {
    let mut env = reservoir();
    let mean = |env: &mut Reservoir, r: f64| estimate_mean_return(env, &constant(r), 1.0, 1000, &mut rng_from_seed(8)).unwrap();
    let release_all = mean(&mut env, 100.0);
    let release_demand = mean(&mut env, 10.0);
    let never = mean(&mut env, 0.0);
    // emptying the reservoir avoids floods, meeting demand keeps water back
    assert!(release_all[0] > release_demand[0] && release_all[1] < release_demand[1]);
    assert!(!pareto_dominates(&release_all, &release_demand).unwrap());
    assert!(!pareto_dominates(&release_demand, &release_all).unwrap());
    // holding everything is worse on both objectives
    assert!(pareto_dominates(&release_demand, &never).unwrap());
}

#[test]
fn identical_seeds_give_identical_trajectories() {
    let run = |seed| {
        let mut env = reservoir();
        let mut rng = rng_from_seed(seed);
        let mut out = vec![env.reset(&mut rng)[0]];
        for k in 0..100 {
            out.push(env.step_detailed((k * 7 % 30) as f64, &mut rng).unwrap().0.storage);
        }
        out
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}

fn dst() -> DeepSeaTreasure {
    DeepSeaTreasure::new(DeepSeaTreasureConfig::default()).unwrap()
}

#[test]
fn dst_step_examples() {
    let mut env = dst();
    let mut rng = rng_from_seed(0);
    assert!(matches!(env.dst_step(DstAction::Down), Err(Error::StepAfterTerminal)));
    env.reset(&mut rng);
    let (p, r, done) = env.dst_step(DstAction::Down).unwrap();
    assert_eq!((p, r.as_slice(), done), (GridPos { row: 1, col: 0 }, &[1.0, -1.0][..], true));
    env.reset(&mut rng);
    let (p, r, done) = env.dst_step(DstAction::Up).unwrap();
    assert_eq!((p, r.as_slice(), done), (GridPos { row: 0, col: 0 }, &[0.0, -1.0][..], false));
}

/// Independent enumeration: breadth-first distances on the map built from
/// the raw depth list, then every reachable `(treasure, −t)` with wasted
/// steps, plus the never-finding return.
fn enumerated_front() -> Vec<Vec<f64>> {
    let depths = [1usize, 2, 3, 4, 4, 4, 7, 7, 9, 10];
    let values = [1.0, 2.0, 3.0, 5.0, 8.0, 16.0, 24.0, 50.0, 74.0, 124.0];
    let horizon = 200usize;
    let passable = |r: isize, c: isize| (0..11).contains(&r) && (0..10).contains(&c) && r as usize <= depths[c as usize];
    let mut dist = [[usize::MAX; 10]; 11];
    dist[0][0] = 0;
    let mut queue = VecDeque::from([(0isize, 0isize)]);
    while let Some((r, c)) = queue.pop_front() {
        if r as usize == depths[c as usize] {
            continue;
        }
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let (nr, nc) = (r + dr, c + dc);
            if passable(nr, nc) && dist[nr as usize][nc as usize] == usize::MAX {
                dist[nr as usize][nc as usize] = dist[r as usize][c as usize] + 1;
                queue.push_back((nr, nc));
            }
        }
    }
    let mut returns = vec![vec![0.0, -(horizon as f64)]];
    for c in 0..10 {
        for t in dist[depths[c]][c]..=horizon {
            returns.push(vec![values[c], -(t as f64)]);
        }
    }
    let dominated = |a: &Vec<f64>| returns.iter().any(|b| b[0] >= a[0] && b[1] >= a[1] && b != a);
    returns.iter().filter(|a| !dominated(a)).cloned().collect()
}

#[test]
fn dst_front_matches_enumeration() {
    let oracle = enumerated_front();
    assert_eq!(oracle.len(), 10);
    let front = dst_true_front();
    assert!(front.same_values(&SolutionSet::from_rows(&oracle).unwrap()));
    assert!(front.values().any(|v| v.as_slice() == [1.0, -1.0]));
    assert!(front.values().any(|v| v.as_slice() == [124.0, -19.0]));
    assert!(morl::pareto_prune(&front).same_values(&front));
}

#[test]
fn dst_rollout_reaches_the_deepest_treasure() {
    // right along the surface, then straight down the last column
    let mut env = dst();
    let policy = |obs: &[f64]| Action::Discrete(if obs[1] < 9.0 { 3 } else { 1 });
    let v = estimate_mean_return(&mut env, &policy, 1.0, 1, &mut rng_from_seed(0)).unwrap();
    assert_eq!(v.as_slice(), &[124.0, -19.0]);
}
