//! Linear derivations generate isometric exponential flows along the
//! scale: for a weighted pair, ‖x‖_s = ‖e^{−sΩ}x‖_0, and the zero
//! derivation freezes the scale entirely.
//!
//! Run with `cargo run --example weighted_flow`.

use calderon_lab::calderon::{calderon_norm, PairScale};
use calderon_lab::derivations::linear_flow_check;
use calderon_lab::spaces::{PExponent, SpaceSpec};
use calderon_lab::Complex64;

fn main() -> calderon_lab::Result<()> {
    let w0 = vec![1.0, 1.0, 3.0];
    let w1 = vec![4.0, 1.0, 0.5];
    let pair = PairScale::new(
        SpaceSpec::weighted(PExponent::Finite(2.0), w0.clone())?,
        SpaceSpec::weighted(PExponent::Finite(2.0), w1.clone())?,
        3,
    )?;
    let g: Vec<Complex64> = w0
        .iter()
        .zip(&w1)
        .map(|(&a, &b)| Complex64::new((a / b).ln(), 0.0))
        .collect();
    let x = vec![
        Complex64::new(1.0, 0.2),
        Complex64::new(-0.4, 0.0),
        Complex64::new(0.3, -0.9),
    ];

    println!("# flow residual |‖x‖_s − ‖e^(−s·g) x‖_0| along the scale");
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let r = linear_flow_check(&g, &pair, s, &x, 1e-10)?;
        let n = if s == 0.0 {
            pair.x0.norm(&x)?
        } else if s == 1.0 {
            pair.x1.norm(&x)?
        } else {
            calderon_norm(&pair, s, &x, 1e-10)?
        };
        println!("  s = {s:.2}: ‖x‖_s = {n:.10}, residual = {r:.3e}");
    }

    println!("\n# zero derivation ⇒ constant scale");
    let p = SpaceSpec::lp_value(2.5)?;
    let pair = PairScale::new(p.clone(), p.clone(), 3)?;
    let base = p.norm(&x)?;
    for s in [0.2, 0.5, 0.8] {
        let n = calderon_norm(&pair, s, &x, 1e-10)?;
        println!("  s = {s}: ‖x‖_s = {n:.12} (‖x‖_2.5 = {base:.12})");
    }
    Ok(())
}
