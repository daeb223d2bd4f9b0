//! Conformal maps of the strip and the disk, pseudo-hyperbolic distances,
//! and the Möbius deviation bound.
//!
//! Run with `cargo run --example conformal_toolkit`.

use calderon_lab::complex_plane::{
    disk_mobius, mobius_deviation, pseudo_hyperbolic_distance, strip_conformal, DomainPoint,
};
use calderon_lab::Complex64;

fn main() -> calderon_lab::Result<()> {
    let c = Complex64::new;

    println!("# strip conformal map φ_s(z) = sin(π(z−s)/2)/sin(π(z+s)/2)");
    let s = c(0.25, 0.0);
    for z in [c(0.25, 0.0), c(0.75, 0.0), c(0.5, 1.0), c(0.0, -2.0), c(1.0, 0.3)] {
        let v = strip_conformal(s, z)?;
        println!("  φ_{{1/4}}({z}) = {v:.6}  (|φ| = {:.6})", v.norm());
    }

    // Derivative at the base point: φ_s'(s) = π/(2 sin πs).
    let h = 1e-6;
    let fd = (strip_conformal(s, s + h)? - strip_conformal(s, s - h)?) / (2.0 * h);
    let closed = std::f64::consts::PI / (2.0 * (std::f64::consts::PI * s.re).sin());
    println!("  φ'_s(s): finite difference {:.8}, closed form {closed:.8}", fd.re);

    println!("\n# disk Möbius map and pseudo-hyperbolic distance");
    let a = c(0.3, 0.0);
    let boundary = c(0.0, 1.0);
    println!("  m_a(i) = {:.6} with modulus {:.12}", disk_mobius(a, boundary)?, disk_mobius(a, boundary)?.norm());

    let p = DomainPoint::disk(c(0.0, 0.0))?;
    let q = DomainPoint::disk(c(0.5, 0.0))?;
    println!("  h_disk(0, 1/2) = {}", pseudo_hyperbolic_distance(&p, &q)?);
    let ps = DomainPoint::strip(c(0.25, 0.0))?;
    let qs = DomainPoint::strip(c(0.75, 0.0))?;
    println!("  h_strip(1/4, 3/4) = {:.12}  (√2/2 = {:.12})",
        pseudo_hyperbolic_distance(&ps, &qs)?, (2.0f64).sqrt() / 2.0);

    println!("\n# Möbius deviation: max_ω |ω − m_a(ω)| ≤ 2|a|");
    for r in [0.1, 0.3, 0.6, 0.9] {
        let a = c(r, 0.0);
        let d = mobius_deviation(a, 10_000)?;
        println!("  |a| = {r:.1}: deviation {d:.9} ≤ {:.1}", 2.0 * r);
    }
    Ok(())
}
