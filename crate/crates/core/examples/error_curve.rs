//! Error rate of half-erased retrieval against the number of stored
//! messages, written as CSV to stdout. Tied winners are all kept and
//! thinned out by later iterations.
//!
//! ```text
//! cargo run --release --example error_curve > curve.csv
//! ```

use hebbclique::experiments::{error_curve, CurveSpec};
use hebbclique::io::{csv_string, CURVE_HEADER};
use hebbclique::{NetworkConfig, TiePolicy};

fn main() -> hebbclique::Result<()> {
    let spec = CurveSpec {
        config: NetworkConfig {
            tie_policy: TiePolicy::KeepAll,
            ..NetworkConfig::clustered(8, 256, 0.18)?
        },
        message_grid: (1..=15).map(|k| k * 1000).collect(),
        known_positions: 4,
        trials: 1,
        seed: 2017,
    };
    let points = error_curve(&spec)?;
    print!("{}", csv_string(&CURVE_HEADER, &points)?);
    Ok(())
}
