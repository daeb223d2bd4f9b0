//! Calderón product norms by convex optimization, optimal factorizations,
//! and the induced derivation, checked against the closed-form `ℓ_r`
//! oracle along the way.
//!
//! Run with `cargo run --example calderon_factorization`.

use calderon_lab::calderon::{
    calderon_norm, closed_form_lp_pair, multi_product_norm, optimal_factorization,
    pair_derivation, PairScale,
};
use calderon_lab::spaces::{PExponent, SpaceSpec};
use calderon_lab::Complex64;

fn cv(entries: &[f64]) -> Vec<Complex64> {
    entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
}

fn main() -> calderon_lab::Result<()> {
    let linf = SpaceSpec::lp(PExponent::Infinity);
    let l1 = SpaceSpec::lp_value(1.0)?;

    println!("# (ℓ_∞, ℓ_1)_θ is ℓ_{{1/θ}}");
    let pair = PairScale::new(linf.clone(), l1.clone(), 2)?;
    let x = cv(&[3.0, 4.0]);
    for theta in [0.25, 0.5, 0.75] {
        let v = calderon_norm(&pair, theta, &x, 1e-10)?;
        let oracle = closed_form_lp_pair(PExponent::Infinity, PExponent::Finite(1.0), theta)?;
        println!(
            "  θ = {theta}: optimizer {v:.12}, oracle ‖x‖_{:.3} = {:.12}",
            oracle.r.value(),
            oracle.norm(&x)
        );
    }

    println!("\n# optimal factorization of x = (1,1) at θ = 1/2");
    let f = optimal_factorization(&pair, 0.5, &cv(&[1.0, 1.0]), 1e-10)?;
    println!("  value = {:.12} (√2)", f.achieved_value);
    println!("  a0 = [{:.6}, {:.6}]  (carries the phases, flat at √2)", f.a0[0].re, f.a0[1].re);
    println!("  a1 = [{:.6}, {:.6}]  (nonnegative, √2/2)", f.a1[0].re, f.a1[1].re);

    println!("\n# the derivation Ω_θ(x) = x log(|a1|/|a0|)");
    let d = pair_derivation(&pair, 0.5, &cv(&[1.0, 1.0]), 1e-10)?;
    println!("  Ω_(1/2)(1,1) = [{:.6}, {:.6}]  (−log 2 each)", d[0].re, d[1].re);
    let d = pair_derivation(&pair, 0.5, &cv(&[1.0, 0.0]), 1e-10)?;
    println!("  Ω_(1/2)(e1)  = [{:.1}, {:.1}]   (spikes are fixed points)", d[0].re, d[1].re);

    println!("\n# a generic pair, optimizer vs oracle");
    let pair = PairScale::new(SpaceSpec::lp_value(1.5)?, SpaceSpec::lp_value(4.0)?, 4)?;
    let x = vec![
        Complex64::new(0.3, 0.1),
        Complex64::new(-1.1, 0.4),
        Complex64::new(0.05, -0.6),
        Complex64::new(2.4, 0.0),
    ];
    let theta = 0.4;
    let v = calderon_norm(&pair, theta, &x, 1e-11)?;
    let o = closed_form_lp_pair(PExponent::Finite(1.5), PExponent::Finite(4.0), theta)?;
    println!("  (ℓ_1.5, ℓ_4) at θ=0.4: optimizer {v:.12}, oracle {:.12}", o.norm(&x));

    println!("\n# weighted pairs interpolate the weights");
    let w0 = vec![1.0, 1.0];
    let w1 = vec![4.0, 1.0];
    let pair = PairScale::new(
        SpaceSpec::weighted(PExponent::Finite(2.0), w0.clone())?,
        SpaceSpec::weighted(PExponent::Finite(2.0), w1.clone())?,
        2,
    )?;
    let v = calderon_norm(&pair, 0.5, &cv(&[1.0, 0.0]), 1e-10)?;
    println!("  (ℓ_2(1,1), ℓ_2(4,1)) at θ=1/2 on e1: {v:.12}  (w0^{{1/2}}w1^{{1/2}} = 2)");
    let d = pair_derivation(&pair, 0.5, &cv(&[1.0, 0.0]), 1e-10)?;
    println!("  derivation on e1: {:.12}  (log(w0/w1) = −log 4 = {:.12})", d[0].re, (0.25f64).ln());

    println!("\n# three-block product: X(w1)^(1/3) X(1)^(1/3) X(1)^(1/3)");
    let e = std::f64::consts::E;
    let s1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![e, 1.0])?;
    let s2 = SpaceSpec::lp_value(2.0)?;
    let v = multi_product_norm(
        &[s1, s2.clone(), s2],
        &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        &cv(&[1.0, 0.0]),
        1e-10,
    )?;
    println!("  value on e1 = {v:.12}  (e^{{1/3}} = {:.12})", e.powf(1.0 / 3.0));
    Ok(())
}
