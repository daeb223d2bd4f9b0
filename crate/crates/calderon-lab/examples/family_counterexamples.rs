//! The stability counterexamples: a variable-exponent family whose
//! derivation vanishes at the origin but is an unbounded Kalton–Peck
//! multiple arbitrarily close to it; a flat diagonal family with the same
//! degeneration but a linear derivation; and a reiterated two-space family
//! on four arcs.
//!
//! Run with `cargo run --example family_counterexamples`.

use calderon_lab::calderon::PairScale;
use calderon_lab::complex_plane::{ArcPartition, QuadratureConfig};
use calderon_lab::derivations::{fit_slope, flat_vector_ratios, Centralizer};
use calderon_lab::families::{
    family_derivation, family_norm, BoundaryAlpha, FamilyPoint, FamilySpec, RationalFn,
};
use calderon_lab::spaces::{PExponent, SpaceSpec};
use calderon_lab::Complex64;
use std::f64::consts::PI;

fn main() -> calderon_lab::Result<()> {
    let quad = QuadratureConfig::default();
    let c = Complex64::new;
    let l2 = SpaceSpec::lp_value(2.0)?;

    println!("# variable exponent family: α(z) = z² + 2, p(ω) ∈ [1, 3]");
    let alpha = RationalFn::polynomial(&[2, 0, 1])?;
    let family = FamilySpec::VariableExponent { alpha: alpha.clone() };
    let flat16 = vec![c(1.0, 0.0); 16];
    for z in [c(0.0, 0.0), c(0.25, 0.0), c(0.5, 0.0)] {
        let pt = FamilyPoint::new(family.clone(), z)?;
        let p = alpha.eval(z).re;
        let d = family_derivation(&pt, &flat16, &quad, 1e-10)?;
        let dn = l2.norm(&d)?;
        println!("  z = {z}: p(z) = {p:.4}, ‖Ω_z(𝟙₁₆)‖₂ = {dn:.6}");
    }
    println!("  Ω_0 is exactly zero; for z ≠ 0 the map is the Kalton–Peck map scaled by −α'/α.");

    let z = c(0.5, 0.0);
    let handle = Centralizer::FamilyInduced { family: family.clone(), z0: z, quad, tol: 1e-10 };
    let dims: Vec<usize> = (4..=14).map(|k| 1usize << k).collect();
    let rows = flat_vector_ratios(&handle, PExponent::Finite(2.25), &dims)?;
    let slope = fit_slope(&rows);
    let theory = (alpha.derivative(z) / alpha.eval(z)).norm() / 2.25;
    println!("  growth on flat vectors up to n = 2^14: slope {slope:.6} vs |α'/α|/p = {theory:.6}");

    println!("\n# flat diagonal family ‖x‖_z = ‖e^(−z²D)x‖₂ with D = diag(log(n+1))");
    let diag: Vec<f64> = (0..1024).map(|n| ((n + 1) as f64).ln()).collect();
    let flat_family = FamilySpec::FlatDiagonal { power: 2, diag };
    let flat = vec![c(1.0, 0.0); 1024];
    for z in [c(0.0, 0.0), c(0.2, 0.0), c(0.4, 0.0)] {
        let pt = FamilyPoint::new(flat_family.clone(), z)?;
        let n = family_norm(&pt, &flat, &quad, 1e-10)?;
        let d = family_derivation(&pt, &flat, &quad, 1e-10)?;
        println!("  z = {z}: ‖𝟙‖_z = {n:.6}, ‖Ω_z 𝟙‖₂ = {:.6}  (Ω_z = 2zD)", l2.norm(&d)?);
    }
    println!("  Ω_0 = 0, yet Ω_z is an unbounded diagonal for every z ≠ 0: no local bounded stability.");

    println!("\n# reiterated family on alternating quarter arcs, α = χ_B0");
    let pair = PairScale::new(SpaceSpec::lp(PExponent::Infinity), SpaceSpec::lp_value(1.0)?, 16)?;
    let part = ArcPartition::from_radians(&[0.0, PI / 2.0, PI, 1.5 * PI])?;
    let ba = BoundaryAlpha::new(part, vec![1.0, 0.0, 1.0, 0.0])?;
    let reiterated = FamilySpec::ReiteratedPair { pair, boundary_alpha: ba };
    let flat = vec![c(1.0, 0.0); 16];
    for z in [c(0.0, 0.0), c(0.2, 0.0), c(0.0, 0.35)] {
        let pt = FamilyPoint::new(reiterated.clone(), z)?;
        let n = family_norm(&pt, &flat, &quad, 1e-9)?;
        let d = family_derivation(&pt, &flat, &quad, 1e-9)?;
        println!("  z = {z}: ‖𝟙‖_z = {n:.6}, ‖Φ_z 𝟙‖₂ = {:.6}", l2.norm(&d)?);
    }
    println!("  Φ_0 = 0 while Φ_z is a Kalton–Peck multiple arbitrarily close to the origin.");
    Ok(())
}
