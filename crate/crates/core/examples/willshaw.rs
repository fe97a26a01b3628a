//! The same stored cliques retrieved without cluster structure: the `c`
//! best-scoring units overall win, as in a Willshaw network.

use hebbclique::{seed, CliqueNetwork, Message, TiePolicy};

fn main() -> hebbclique::Result<()> {
    let (c, ell) = (8, 128);
    let mut net = CliqueNetwork::new(c, ell)?;
    let mut rng = seed::stream(5, "messages", &[0]);
    let messages: Vec<Message> = (0..3_000)
        .map(|_| Message::random(c, ell, &mut rng))
        .collect();
    for msg in &messages {
        net.store(msg)?;
    }
    println!("density {:.4}", net.density());

    let tie = TiePolicy::LowestIndex;
    let (mut clustered_ok, mut global_ok) = (0, 0);
    for msg in &messages[..500] {
        let full: Vec<usize> = msg.global_units(ell).collect();
        let probe = msg.erase(&[1, 3, 5, 7]);
        if net.retrieve(&probe, 1.0, 6, &tie)? == *msg {
            clustered_ok += 1;
        }
        let known: Vec<usize> = probe.global_units(ell).collect();
        if net.retrieve_willshaw(&known, c, 1.0, 6, &tie)? == full {
            global_ok += 1;
        }
    }
    println!("clustered retrieval: {clustered_ok} / 500 exact");
    println!("global top-c retrieval: {global_ok} / 500 exact");
    Ok(())
}
