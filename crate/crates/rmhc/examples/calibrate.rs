//! Scratch calibration: prints the summary statistics the acceptance
//! criteria will assert, so the bands can be sanity-checked quickly.

use rmhc::harness::mix_seed;
use rmhc::{climb, expected_evals_uniform_onemax, ProblemSpec, RunConfig, SelectionPolicy};

fn mean_stats(cfgs: &[RunConfig]) -> (f64, f64, f64) {
    let outcomes: Vec<_> = cfgs.iter().map(|c| climb::run(c).unwrap()).collect();
    let solved: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.solved)
        .map(|o| o.evals_used as f64)
        .collect();
    let rate = solved.len() as f64 / outcomes.len() as f64;
    let mean = solved.iter().sum::<f64>() / solved.len().max(1) as f64;
    let var = solved
        .iter()
        .map(|x| (x - mean).powi(2))
        .sum::<f64>()
        / (solved.len().max(2) - 1) as f64;
    (mean, (var / solved.len().max(1) as f64).sqrt(), rate)
}

fn configs(
    problem: ProblemSpec,
    dim: usize,
    policy: SelectionPolicy,
    r: u32,
    noisy: bool,
    reps: u64,
) -> Vec<RunConfig> {
    (0..reps)
        .map(|i| RunConfig {
            problem,
            dim,
            policy,
            resample: r,
            budget: 1000 * dim as u64,
            seed: mix_seed(2024, 0, i),
            noisy_mode: noisy,
            incumbent_memory: true,
        })
        .collect()
}

fn main() {
    let t0 = std::time::Instant::now();
    println!("== noise-free OneMax, bandit ==");
    for n in [50usize, 100, 200, 500] {
        let p = ProblemSpec::one_max(0.0).unwrap();
        let (mean, se, rate) = mean_stats(&configs(p, n, SelectionPolicy::Bandit, 1, false, 100));
        println!("n={n}: mean={mean:.2} +- {se:.2} rate={rate} band=[{}, {}]", n, 1.15 * n as f64);
    }

    println!("== noise-free OneMax, uniform vs oracle ==");
    for n in [50usize, 100, 500] {
        let p = ProblemSpec::one_max(0.0).unwrap();
        let (mean, se, _) = mean_stats(&configs(p, n, SelectionPolicy::Uniform, 1, false, 100));
        let oracle = expected_evals_uniform_onemax(n);
        println!(
            "n={n}: mean={mean:.2} +- {se:.2} oracle={oracle:.2} ratio={:.4}",
            mean / oracle
        );
    }

    println!("== speedup at n=500 ==");
    {
        let p = ProblemSpec::one_max(0.0).unwrap();
        let (mu, _, _) = mean_stats(&configs(p, 500, SelectionPolicy::Uniform, 1, false, 100));
        let (mb, _, _) = mean_stats(&configs(p, 500, SelectionPolicy::Bandit, 1, false, 100));
        println!("uniform={mu:.1} bandit={mb:.1} ratio={:.3}", mu / mb);
    }

    println!("== noisy OneMax sigma=1, bandit r=2 ==");
    let mut per_dim = Vec::new();
    for n in [50usize, 100, 200] {
        let p = ProblemSpec::one_max(1.0).unwrap();
        let (mean, se, rate) = mean_stats(&configs(p, n, SelectionPolicy::Bandit, 2, true, 100));
        println!("n={n}: mean={mean:.1} +- {se:.1} rate={rate} evals/dim={:.2}", mean / n as f64);
        per_dim.push(mean / n as f64);
    }
    let max = per_dim.iter().cloned().fold(f64::MIN, f64::max);
    let min = per_dim.iter().cloned().fold(f64::MAX, f64::min);
    println!("stability max/min = {:.3}", max / min);

    println!("== noisy OneMax sigma=1, bandit other r ==");
    for r in [1u32, 3, 5] {
        let p = ProblemSpec::one_max(1.0).unwrap();
        let (mean, _, rate) = mean_stats(&configs(p, 100, SelectionPolicy::Bandit, r, true, 100));
        println!("r={r}: n=100 mean={mean:.1} rate={rate}");
    }

    println!("== noisy OneMax sigma=1, uniform r=1 (budget 1000n) ==");
    for n in [50usize, 100] {
        let p = ProblemSpec::one_max(1.0).unwrap();
        let (mean, _, rate) = mean_stats(&configs(p, n, SelectionPolicy::Uniform, 1, true, 100));
        println!("n={n}: rate={rate} mean(solved)={mean:.1}");
    }

    println!("== noisy OneMax sigma=1, uniform resampling ==");
    for r in [2u32, 5, 10] {
        let p = ProblemSpec::one_max(1.0).unwrap();
        let (mean, _, rate) = mean_stats(&configs(p, 100, SelectionPolicy::Uniform, r, true, 100));
        println!("r={r}: n=100 rate={rate} mean={mean:.1}");
    }

    println!("== Royal Road n=64 b=8, noise-free ==");
    {
        let p = ProblemSpec::royal_road(8, 0.0).unwrap();
        let (mu, su, ru) = mean_stats(&configs(p, 64, SelectionPolicy::Uniform, 1, false, 100));
        let (mb, sb, rb) = mean_stats(&configs(p, 64, SelectionPolicy::Bandit, 1, false, 100));
        println!("uniform: mean={mu:.1} +- {su:.1} rate={ru}");
        println!("bandit:  mean={mb:.1} +- {sb:.1} rate={rb}");
        println!("ratio bandit/uniform = {:.3}", mb / mu);
    }

    println!("total {:?}", t0.elapsed());
}
