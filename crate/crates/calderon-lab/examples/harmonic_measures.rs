//! Poisson kernel, harmonic measure of arcs, Herglotz transforms and the
//! analytic completions ψ_j of arc indicators.
//!
//! Run with `cargo run --example harmonic_measures`.

use calderon_lab::complex_plane::{
    harmonic_measure, harmonic_measure_conformal, herglotz_derivative, herglotz_transform,
    poisson_kernel, psi_arc, Arc, ArcPartition, QuadratureConfig, TAU,
};
use calderon_lab::Complex64;
use std::f64::consts::PI;

fn main() -> calderon_lab::Result<()> {
    let quad = QuadratureConfig::default();
    let c = Complex64::new;

    println!("# Poisson kernel P_z(e^it)");
    println!("  P_0(any) = {}", poisson_kernel(c(0.0, 0.0), 1.0)?);
    println!("  P_(1/2)(1) = {}", poisson_kernel(c(0.5, 0.0), 0.0)?);

    println!("\n# harmonic measure of [0, π) seen from different points");
    let arc = Arc::new(0.0, PI)?;
    for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9), c(-0.7, 0.0)] {
        let mu = harmonic_measure(z, &arc, &quad)?;
        let oracle = harmonic_measure_conformal(z, &arc)?;
        println!("  μ_{z}([0,π)) = {mu:.12}  (conformal oracle {oracle:.12})");
    }

    println!("\n# measures of a random partition sum to 1");
    let part = ArcPartition::from_radians(&[0.3, 1.1, 2.6, 4.9])?;
    let z = c(0.35, -0.4);
    let mut total = 0.0;
    for (j, a) in part.arcs().iter().enumerate() {
        let mu = harmonic_measure(z, a, &quad)?;
        total += mu;
        println!("  arc {j} [{:.2}, {:.2}): μ = {mu:.12}", a.start(), a.start() + a.len());
    }
    println!("  total = {total:.15}");

    println!("\n# Herglotz transform of the alternating quarter arcs");
    let b0 = |t: f64| {
        let t = t.rem_euclid(TAU);
        if (0.0..PI / 2.0).contains(&t) || (PI..1.5 * PI).contains(&t) { 1.0 } else { 0.0 }
    };
    let breaks = [0.0, PI / 2.0, PI, 1.5 * PI];
    let w0 = herglotz_transform(&b0, &breaks, c(0.0, 0.0), &quad)?;
    let dw0 = herglotz_derivative(&b0, &breaks, c(0.0, 0.0), &quad)?;
    println!("  w(0) = {w0:.10}   w'(0) = {dw0:.3e}  (the derivative cancels)");

    let half = |t: f64| if t.rem_euclid(TAU) < PI { 1.0 } else { 0.0 };
    let dw = herglotz_derivative(&half, &[0.0, PI], c(0.0, 0.0), &quad)?;
    println!("  χ_[0,π): w'(0) = {dw:.10}  (−2i/π = {:.10})", -2.0 / PI);

    println!("\n# ψ_j: analytic completion of χ_arc, normalized at z0");
    let arc = Arc::new(0.0, PI / 2.0)?;
    let psi = psi_arc(&arc, c(0.0, 0.0), &quad)?;
    println!("  ψ(0) = {:.10}  (harmonic measure 1/4, zero conjugate)", psi.eval(c(0.0, 0.0))?);
    for r in [0.9, 0.99, 0.999] {
        let z = Complex64::from_polar(r, PI / 4.0);
        println!("  Re ψ({r:.3}·e^{{iπ/4}}) = {:.6}  → 1 radially", psi.eval(z)?.re);
    }
    Ok(())
}
