//! Kalton–Peck maps, twisted-sum quasi-norms, commutator defects, and the
//! boundedness ladder that witnesses unboundedness on flat vectors.
//!
//! Run with `cargo run --example kalton_peck_twisted`.

use calderon_lab::derivations::{
    boundedness_probe, centralizer_defect, defect_constant_probe, fit_slope, kalton_peck,
    triviality_probe, twisted_quasinorm, Centralizer, ProbeConfig,
};
use calderon_lab::spaces::{PExponent, SpaceSpec};
use calderon_lab::Complex64;

fn cv(entries: &[f64]) -> Vec<Complex64> {
    entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
}

fn main() -> calderon_lab::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let l2 = SpaceSpec::lp_value(2.0)?;
    let kp = Centralizer::KaltonPeck { r: 2.0, scale: one };

    println!("# the Kalton–Peck map Ω(x) = x log(|x|/‖x‖_2)");
    let v = kalton_peck(2.0, one, &cv(&[1.0, 1.0]))?;
    println!("  Ω(1,1) = [{:.6}, {:.6}]", v[0].re, v[1].re);
    let v = kalton_peck(2.0, one, &cv(&[1.0, 0.0]))?;
    println!("  Ω(e1)  = [{:.1}, {:.1}]", v[0].re, v[1].re);

    println!("\n# twisted quasi-norm ‖(f,x)‖ = ‖f − Ωx‖ + ‖x‖");
    let s = 0.5f64.sqrt();
    let q = twisted_quasinorm(&kp, &l2, &cv(&[0.0, 0.0]), &cv(&[s, s]))?;
    println!("  ‖(0, (1,1)/√2)‖ = {q:.6}  (log√2 + 1 = {:.6})", 0.5 * (2.0f64).ln() + 1.0);

    println!("\n# commutator defect ‖Ω(ax) − aΩ(x)‖");
    let d = centralizer_defect(&kp, &l2, &cv(&[2.0, 1.0]), &cv(&[1.0, 1.0]))?;
    println!("  a = (2,1), x = (1,1): defect = {d:.7}");
    let c = defect_constant_probe(&kp, &l2, 32, 1000, 7)?;
    println!("  empirical centralizer constant at dim 32: {c:.6} (1/e ≈ {:.6})", (-1.0f64).exp());

    println!("\n# boundedness ladder: flat vectors witness (log n)/2 growth");
    let dims: Vec<usize> = (3..=12).map(|k| 1usize << k).collect();
    let rows = boundedness_probe(&kp, PExponent::Finite(2.0), &dims, &ProbeConfig::default())?;
    for r in &rows {
        println!("  dim {:5}: max ratio {:.6}   ((log n)/2 = {:.6})", r.dim, r.max_ratio, (r.dim as f64).ln() / 2.0);
    }
    println!("  fitted slope against log n: {:.4}  (theory 0.5)", fit_slope(&rows));

    println!("\n# a multiplication centralizer stays bounded and splits");
    let g: Vec<Complex64> = (0..4096).map(|i| Complex64::new((0.01 * i as f64).sin(), 0.2)).collect();
    let mult = Centralizer::Multiplication { g };
    let rows = boundedness_probe(&mult, PExponent::Finite(2.0), &dims, &ProbeConfig::default())?;
    println!("  multiplication ratios: {:?}", rows.iter().map(|r| (r.dim, (r.max_ratio * 1e4).round() / 1e4)).collect::<Vec<_>>());
    let trows = triviality_probe(&mult, PExponent::Finite(2.0), &[64, 512, 4096], &ProbeConfig::default())?;
    println!(
        "  residual after subtracting the fitted multiplication: {:?}",
        trows.iter().map(|r| r.max_ratio).collect::<Vec<_>>()
    );
    Ok(())
}
