//! Reduces synaptic and interference noise to insertion and erasure
//! probabilities, then checks the result against Monte Carlo sampling.

use hebbclique::noise::{
    oracle, reduce_to_channel, total_stimulation_pmf, FiringContext, InterferenceModel,
    SynapticModel,
};
use hebbclique::seed;

fn main() -> hebbclique::Result<()> {
    let synapses = SynapticModel::new(10, 0.5)?;
    let interference = InterferenceModel::new(100, 100, 2.0, 0.01)?;
    let firing = FiringContext::new(18.0, 7)?;

    let signal = total_stimulation_pmf(&synapses, &interference, &firing, true)?;
    let silent = total_stimulation_pmf(&synapses, &interference, &firing, false)?;
    println!(
        "signal pmf: support [{}, {}], mean {:.3}",
        signal.support_offset(),
        signal.support_end(),
        signal.mean()
    );
    println!(
        "silent pmf: support [{}, {}], mean {:.3}",
        silent.support_offset(),
        silent.support_end(),
        silent.mean()
    );

    let exact = reduce_to_channel(&synapses, &interference, &firing)?;
    let mut rng = seed::stream(1, "noise-example", &[]);
    let sampled = oracle::monte_carlo_channel(&synapses, &interference, &firing, 200_000, &mut rng);
    println!("{:>12} {:>10} {:>10}", "", "p_ins", "p_del");
    println!(
        "{:>12} {:>10.5} {:>10.5}",
        "convolution",
        exact.p_ins(),
        exact.p_del()
    );
    println!(
        "{:>12} {:>10.5} {:>10.5}",
        "monte carlo",
        sampled.p_ins(),
        sampled.p_del()
    );
    Ok(())
}
