//! Consolidation sigmoid applied to every connection weight after a Hebbian
//! increment.

use std::f64::consts::{FRAC_PI_2, PI};

/// Below this input the closed form already evaluates to exactly `0.0` in
/// double precision (`tanh` saturates to `-1`), so it is skipped.
const SATURATED_LOW: f64 = 0.01;
/// Mirror of [`SATURATED_LOW`]: the closed form evaluates to exactly `1.0`.
const SATURATED_HIGH: f64 = 0.99;

/// `s(x) = 1/2 + 1/2 tanh(tan(pi x - pi/2))` on `(0, 1)`, `0` below, `1` above.
///
/// Fixed points at 0, 1/2 and 1; centrally symmetric about `(1/2, 1/2)`.
/// Weights under 1/2 shrink toward 0 and weights over 1/2 grow toward 1.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= SATURATED_HIGH {
        1.0
    } else if x <= SATURATED_LOW {
        0.0
    } else {
        closed_form(x)
    }
}

#[inline]
fn closed_form(x: f64) -> f64 {
    0.5 + 0.5 * (PI * x - FRAC_PI_2).tan().tanh()
}

/// Weight of one connection over a schedule of co-activations, starting at 0.
///
/// Returns `(before sigmoid, after sigmoid)` for every step.
pub fn weight_trajectory(schedule: &[bool], epsilon: f64) -> Vec<(f64, f64)> {
    weight_trajectory_from(0.0, schedule, epsilon)
}

/// As [`weight_trajectory`] but starting from weight `initial`.
pub fn weight_trajectory_from(initial: f64, schedule: &[bool], epsilon: f64) -> Vec<(f64, f64)> {
    let mut w = initial;
    schedule
        .iter()
        .map(|&coactive| {
            let pre = if coactive { w + epsilon } else { w };
            w = sigmoid(pre);
            (pre, w)
        })
        .collect()
}
