//! MONES against outer-loop NES on the reservoir, for a few seeds.
//!
//! `cargo run --release -p morl --example reservoir_study -- [seeds] [--nes] [--trace]`

use std::time::Instant;

use morl::algorithms::{mones_train, outer_loop_nes, MonesConfig};
use morl::envs::{Reservoir, WaterReservoirConfig};
use morl::indicators::{hypervolume, ReferencePoint, UtilityPrior};
use morl::rng::rng_from_seed;
use morl::{pareto_prune, SolutionSet};

fn range(set: &SolutionSet, j: usize) -> f64 {
    let xs: Vec<f64> = set.values().map(|v| v[j]).collect();
    xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min)
}

fn main() -> morl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let with_nes = args.iter().any(|a| a == "--nes");
    let mut env = Reservoir::new(WaterReservoirConfig::default())?;
    for seed in 0..seeds {
        let config = MonesConfig { seed, ..Default::default() };
        let t = Instant::now();
        let (_, archive) = mones_train(&mut env, &config, &mut rng_from_seed(seed))?;
        let last = archive.last().expect("30 iterations");
        if args.iter().any(|a| a == "--trace") {
            for (i, it) in archive.iterations.iter().enumerate() {
                let f = pareto_prune(it);
                let mut pts: Vec<String> = f.values().map(|v| format!("({:.1},{:.1})", v[0], v[1])).collect();
                pts.truncate(12);
                println!("  it {i}: {} nd | {}", f.len(), pts.join(" "));
            }
        }
        let front = pareto_prune(last);
        println!(
            "seed {seed}: mones {:.1}s, final front {} points range ({:.1},{:.1})",
            t.elapsed().as_secs_f64(),
            front.len(),
            range(&front, 0),
            range(&front, 1)
        );
        for v in front.values() {
            print!(" {v}");
        }
        println!();
        if with_nes {
            let t = Instant::now();
            let prior = UtilityPrior::uniform_linear(2, 30, seed);
            let nes = outer_loop_nes(&mut env, &prior, &config, &mut rng_from_seed(seed))?;
            let nes_front = pareto_prune(&nes);
            let all: Vec<_> = last.values().chain(nes.values()).cloned().collect();
            let r = ReferencePoint::worst_of(all.iter())?;
            println!(
                "  nes {:.1}s: front {} | hv mones {:.1} nes {:.1} | range mones ({:.2},{:.2}) nes ({:.2},{:.2})",
                t.elapsed().as_secs_f64(),
                nes_front.len(),
                hypervolume(&front, &r)?,
                hypervolume(&nes_front, &r)?,
                range(&front, 0),
                range(&front, 1),
                range(&nes_front, 0),
                range(&nes_front, 1)
            );
            for v in nes.values() {
                print!(" {v}");
            }
            println!();
        }
    }
    Ok(())
}
