//! Monte Carlo sampler for the total stimulation a unit receives.
//!
//! This is a direct simulation of the generative model and shares no code
//! with the convolution path in the parent module, so the two can be checked
//! against each other.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use super::{FiringContext, InterferenceModel, NoiseChannel, SynapticModel};

/// Draws one realization of the total stimulation `S`.
///
/// Each active connection contributes `B(n_syn, p_rel)` quanta. The number of
/// excitatory and inhibitory interferers is Poisson. The sum of `k`
/// independent `B(n_syn, p)` draws is `B(k * n_syn, p)`, so each group is
/// sampled with a single binomial draw.
pub fn sample_stimulation<R: Rng + ?Sized>(
    syn: &SynapticModel,
    interference: &InterferenceModel,
    n_signal: u32,
    rng: &mut R,
) -> i64 {
    let (lambda_ex, lambda_in) = interference.rates();
    let n_ex = draw_poisson(lambda_ex, rng);
    let n_in = draw_poisson(lambda_in, rng);
    let quanta = |connections: u64, rng: &mut R| -> i64 {
        if connections == 0 {
            return 0;
        }
        let trials = connections * u64::from(syn.n_syn());
        Binomial::new(trials, syn.p_rel())
            .expect("p_rel validated on construction")
            .sample(rng) as i64
    };
    quanta(u64::from(n_signal), rng) + quanta(n_ex, rng) - quanta(n_in, rng)
}

fn draw_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda)
        .expect("finite positive rate")
        .sample(rng) as u64
}

/// Estimates `(p_ins, p_del)` from `samples` draws per condition.
pub fn monte_carlo_channel<R: Rng + ?Sized>(
    syn: &SynapticModel,
    interference: &InterferenceModel,
    ctx: &FiringContext,
    samples: u64,
    rng: &mut R,
) -> NoiseChannel {
    let mut failures = 0u64;
    let mut spurious = 0u64;
    for _ in 0..samples {
        let present = sample_stimulation(syn, interference, ctx.n_inputs(), rng);
        if (present as f64) < ctx.sigma() {
            failures += 1;
        }
        let absent = sample_stimulation(syn, interference, 0, rng);
        if (absent as f64) >= ctx.sigma() {
            spurious += 1;
        }
    }
    NoiseChannel::new(
        spurious as f64 / samples as f64,
        failures as f64 / samples as f64,
    )
    .expect("empirical frequencies are probabilities")
}

/// Empirical histogram of `S` as `(min value, counts)`.
pub fn histogram<R: Rng + ?Sized>(
    syn: &SynapticModel,
    interference: &InterferenceModel,
    n_signal: u32,
    samples: u64,
    rng: &mut R,
) -> (i64, Vec<u64>) {
    let draws: Vec<i64> = (0..samples)
        .map(|_| sample_stimulation(syn, interference, n_signal, rng))
        .collect();
    let lo = draws.iter().copied().min().unwrap_or(0);
    let hi = draws.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for d in draws {
        counts[(d - lo) as usize] += 1;
    }
    (lo, counts)
}
