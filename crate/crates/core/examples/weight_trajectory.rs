//! Weight of a single connection under the consolidation sigmoid.
//!
//! Prints three schedules: co-activation every iteration, a random schedule
//! at the co-activation rate of the noisy learning setup, and decay of an
//! isolated weight below one half.

use hebbclique::dynamics::{weight_trajectory, weight_trajectory_from};
use hebbclique::seed;
use rand::Rng;

fn print(label: &str, path: &[(f64, f64)]) {
    println!("{label}");
    for (i, (pre, post)) in path.iter().enumerate() {
        println!("  {:>3}  {pre:.6}  ->  {post:.6}", i + 1);
    }
}

fn main() {
    let epsilon = 0.18;
    let always = vec![true; 10];
    print("always co-active", &weight_trajectory(&always, epsilon));

    let mut rng = seed::stream(26, "trace", &[]);
    let random: Vec<bool> = (0..30).map(|_| rng.random_bool(0.64)).collect();
    let path = weight_trajectory(&random, epsilon);
    let settled = path.iter().position(|&(_, w)| w == 1.0 || w == 0.0);
    print("co-active with probability 0.64", &path);
    match settled {
        Some(i) => println!("  settled at iteration {}", i + 1),
        None => println!("  still transient"),
    }

    print(
        "decay from 0.49",
        &weight_trajectory_from(0.49, &[false; 10], epsilon),
    );
}
