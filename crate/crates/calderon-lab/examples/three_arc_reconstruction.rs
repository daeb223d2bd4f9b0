//! The three-arc linear system: harmonic measures and exponential moments
//! of a partition, the determinant/sine-product identity, and the weight
//! reconstruction that realizes a prescribed multiplication derivation.
//!
//! Run with `cargo run --example three_arc_reconstruction`.

use calderon_lab::complex_plane::{ArcPartition, QuadratureConfig};
use calderon_lab::families::{
    family_derivation, family_norm, three_arc_coefficients, three_arc_sine_product,
    weights_from_multiplier, FamilyPoint, FamilySpec,
};
use calderon_lab::spaces::SpaceSpec;
use calderon_lab::Complex64;
use std::f64::consts::PI;

fn main() -> calderon_lab::Result<()> {
    let quad = QuadratureConfig::default();
    let part = ArcPartition::equal(3)?;

    println!("# the system on equal thirds");
    let sys = three_arc_coefficients(&part, &quad)?;
    println!("  α = {:?}", sys.alpha);
    for (j, b) in sys.beta.iter().enumerate() {
        println!("  β_{j} = {b:.6}");
    }
    let sp = three_arc_sine_product(&part)?;
    println!("  det = {:.12}, sine product / π² = {:.12}", sys.det, sp / (PI * PI));
    println!("  a (solves Σaα=0, Σaβ=−1) = {:?}", sys.a);
    println!("  b (solves Σbα=0, Σbβ=−i) = {:?}", sys.b);

    println!("\n# reconstruct weights for the multiplier f = (1, −1/2 + i)");
    let f = vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 1.0)];
    let weights = weights_from_multiplier(&f, &part, &quad)?;
    for (j, w) in weights.iter().enumerate() {
        println!("  w_{j} = [{:.6}, {:.6}]", w[0], w[1]);
    }

    let base = SpaceSpec::lp_value(2.0)?;
    let family = FamilySpec::ArcsWeighted {
        base: base.clone(),
        partition: part,
        weights: weights.to_vec(),
    };
    let pt = FamilyPoint::new(family, Complex64::new(0.0, 0.0))?;

    // Contract 1: the combined weight at the origin is 1.
    let x = vec![Complex64::new(0.7, -0.1), Complex64::new(-0.4, 0.3)];
    let nf = family_norm(&pt, &x, &quad, 1e-10)?;
    let nb = base.norm(&x)?;
    println!("\n  family norm at 0: {nf:.12} vs base norm {nb:.12}");

    // Contract 2: the derivation at the origin is multiplication by f.
    for i in 0..2 {
        let mut e = vec![Complex64::new(0.0, 0.0); 2];
        e[i] = Complex64::new(1.0, 0.0);
        let d = family_derivation(&pt, &e, &quad, 1e-10)?;
        println!("  Ω_0(e{}) = {:.9}  (target f_{} = {:.9})", i + 1, d[i], i + 1, f[i]);
    }
    Ok(())
}
