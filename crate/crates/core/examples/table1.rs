//! Learns random datasets under insertion/erasure noise and compares the
//! consolidated connections with a clique memory storing the same messages.
//!
//! ```text
//! cargo run --release --example table1 -- [M] [n_it...]
//! ```

use std::time::Instant;

use hebbclique::experiments::{expected_edges, run_table1, ExperimentSpec};
use hebbclique::{NetworkConfig, NoiseChannel};

fn main() -> hebbclique::Result<()> {
    let mut args = std::env::args().skip(1);
    let messages: usize = args.next().map_or(1000, |a| a.parse().expect("M"));
    let mut iterations: Vec<usize> = args.map(|a| a.parse().expect("n_it")).collect();
    if iterations.is_empty() {
        iterations = vec![50, 60];
    }

    let config = NetworkConfig::clustered(8, 256, 0.18)?;
    let channel = NoiseChannel::new(0.05, 0.2)?;
    let specs: Vec<ExperimentSpec> = iterations
        .iter()
        .map(|&n_it| ExperimentSpec {
            config: config.clone(),
            channel,
            messages,
            n_it,
            trials: 1,
            seed: 2017,
        })
        .collect();

    println!(
        "expected connections for M = {messages}: {:.0}",
        expected_edges(messages, 8, 256)
    );
    println!(
        "{:>5} {:>7} {:>12} {:>7} {:>7}",
        "n_it", "M", "connections", "added", "erased"
    );
    let start = Instant::now();
    for row in run_table1(&specs)? {
        println!(
            "{:>5} {:>7} {:>12} {:>7} {:>7}",
            row.n_it, row.messages, row.connections, row.added, row.erased
        );
    }
    eprintln!("elapsed: {:.1?}", start.elapsed());
    Ok(())
}
