//! Learns noisy presentations of a few messages with the consolidated
//! Hebbian rule, then completes half-erased probes.

use hebbclique::{seed, HebbianNetwork, Message, NetworkConfig, NoiseChannel};

fn main() -> hebbclique::Result<()> {
    let (c, ell) = (8, 64);
    let config = NetworkConfig::clustered(c, ell, 0.18)?;
    let channel = NoiseChannel::new(0.05, 0.2)?;
    let mut net = HebbianNetwork::new(config)?;

    let mut data_rng = seed::stream(11, "messages", &[0]);
    let messages: Vec<Message> = (0..20)
        .map(|_| Message::random(c, ell, &mut data_rng))
        .collect();
    let mut noise_rng = seed::stream(11, "learning-noise", &[0]);
    for msg in &messages {
        net.learn_pattern(msg, 60, &channel, &mut noise_rng)?;
    }
    let w = net.weights();
    println!(
        "consolidated edges: {}, transient weights left: {}",
        w.consolidated_count(),
        w.transient_count()
    );

    let mut correct = 0;
    for msg in &messages {
        let probe = msg.erase(&[4, 5, 6, 7]);
        let got = net.recall(&probe)?;
        if &got == msg {
            correct += 1;
        }
        println!("{probe}  ->  {got}");
    }
    println!("{correct} of {} completed exactly", messages.len());
    Ok(())
}
