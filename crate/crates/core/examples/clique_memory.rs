//! Stores random messages in a clique memory and retrieves them from
//! partially erased probes while the memory fills up. All units tied for
//! the best score stay active until later iterations separate them.

use hebbclique::{seed, CliqueNetwork, Message, TiePolicy};

fn main() -> hebbclique::Result<()> {
    let (c, ell) = (8, 256);
    let mut net = CliqueNetwork::new(c, ell)?;
    let mut rng = seed::stream(3, "messages", &[0]);
    let messages: Vec<Message> = (0..20_000)
        .map(|_| Message::random(c, ell, &mut rng))
        .collect();

    let mut stored = 0;
    for m in [2_000, 5_000, 10_000, 15_000, 20_000] {
        for msg in &messages[stored..m] {
            net.store(msg)?;
        }
        stored = m;
        let sample = &messages[..m.min(2_000)];
        let errors = sample
            .iter()
            .filter(|msg| {
                let got = net.retrieve(&msg.erase(&[0, 2, 4, 6]), 1.0, 6, &TiePolicy::KeepAll);
                got.map_or(true, |g| &g != *msg)
            })
            .count();
        println!(
            "M = {m:>6}  density = {:.4}  error rate = {:.4}",
            net.density(),
            errors as f64 / sample.len() as f64
        );
    }
    Ok(())
}
