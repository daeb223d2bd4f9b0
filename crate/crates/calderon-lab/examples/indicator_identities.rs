//! Indicator functionals, the lift of a centralizer to ℓ_1, and the two
//! identities connecting them: the endpoint difference for pairs and the
//! circle-moment formula for families, with the orientation constants
//! pinned by brute force rather than read off a convention.
//!
//! Run with `cargo run --example indicator_identities`.

use calderon_lab::calderon::{closed_form_lp_pair, PairScale};
use calderon_lab::complex_plane::{ArcPartition, QuadratureConfig};
use calderon_lab::derivations::Centralizer;
use calderon_lab::families::{arc_exponential_moment, derivation_multiplier, FamilyPoint, FamilySpec};
use calderon_lab::indicators::{
    indicator_lp, indicator_numeric, indicator_space, phi_omega, phi_omega_multiplication,
    pin_orientation,
};
use calderon_lab::spaces::{PExponent, SpaceSpec};
use calderon_lab::Complex64;

fn main() -> calderon_lab::Result<()> {
    println!("# closed-form indicators and the iterative oracle");
    let f = [1.0, 1.0];
    for p in [1.0, 2.0] {
        let v = indicator_lp(PExponent::Finite(p), &f)?;
        let n = indicator_numeric(&SpaceSpec::lp_value(p)?, &f, 1e-8)?;
        println!("  Φ_ℓ{p}((1,1)) = {v:.10}  (ascent oracle {n:.10})");
    }
    println!("  Φ_ℓ∞ = {}", indicator_lp(PExponent::Infinity, &f)?);

    let o = pin_orientation(1e-10)?;
    println!("\n# pinned orientation: σ = {}, family constant = {:.6}", o.sigma, o.family_constant);

    println!("\n# pair identity Φ^(Ω_θ) = σ·(Φ_X0 − Φ_X1)");
    let f = [0.25, 0.4, 0.35];
    for (p0, p1, theta) in [
        (PExponent::Infinity, PExponent::Finite(1.0), 0.5),
        (PExponent::Finite(2.0), PExponent::Finite(4.0), 0.3),
        (PExponent::Finite(1.0), PExponent::Finite(3.0), 0.7),
    ] {
        let r = closed_form_lp_pair(p0, p1, theta)?.r.value();
        let pair = PairScale::new(SpaceSpec::lp(p0), SpaceSpec::lp(p1), 3)?;
        let omega = Centralizer::PairInduced { pair, theta, tol: 1e-10 };
        let phi = phi_omega(&omega, r, &f)?;
        let rhs = o.sigma
            * (indicator_space(&SpaceSpec::lp(p0), &f)? - indicator_space(&SpaceSpec::lp(p1), &f)?);
        println!("  θ={theta}: Φ^Ω = {:.9}, σ(Φ0−Φ1) = {rhs:.9}", phi.re);
    }

    println!("\n# family moment identity Φ^(Ω_0) = c·Σ_j β_j Φ_(X_j)");
    let quad = QuadratureConfig::default();
    let part = ArcPartition::from_radians(&[0.0, 2.1, 4.4])?;
    let weights = vec![vec![2.0, 0.7], vec![1.0, 1.3], vec![0.5, 1.0]];
    let base = SpaceSpec::lp_value(2.0)?;
    let family = FamilySpec::ArcsWeighted {
        base: base.clone(),
        partition: part.clone(),
        weights: weights.clone(),
    };
    let pt = FamilyPoint::new(family, Complex64::new(0.0, 0.0))?;
    let f = [0.5, 0.5];
    let g = derivation_multiplier(&pt, 2, &quad, 1e-10)?;
    let lhs = phi_omega_multiplication(&g, &f)?;
    let mut moment = Complex64::new(0.0, 0.0);
    for (j, arc) in part.arcs().iter().enumerate() {
        let spec = SpaceSpec::weighted(base.p, weights[j].clone())?;
        moment += arc_exponential_moment(arc) * indicator_space(&spec, &f)?;
    }
    println!("  Φ^Ω           = {lhs:.10}");
    println!("  c · Σ β_j Φ_j = {:.10}", moment * o.family_constant);
    Ok(())
}
