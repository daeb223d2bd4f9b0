//! Indicator functionals `Φ_X(f) = sup_{x ∈ B_X} Σ f_i log|x_i|`, the lift
//! `Ω^{[1]}(f) = f^{1/q} ⊙ Ω(f^{1/p})` of a centralizer to `ℓ_1`, its
//! integral `Φ^Ω`, and the orientation record that pins the signs of the
//! indicator identities by a brute-force oracle instead of convention.

use num_complex::Complex64;

use crate::calderon::PairScale;
use crate::derivations::Centralizer;
use crate::error::{Error, Result};
use crate::spaces::{compensated_sum, PExponent, SpaceSpec};

/// A nonnegative density; `normalized` records whether it sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector {
    entries: Vec<f64>,
    normalized: bool,
}

impl DensityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() || entries.iter().all(|&v| v == 0.0) {
            return Err(Error::usage("density must be nonzero"));
        }
        for (i, &v) in entries.iter().enumerate() {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::usage(format!("density entry {i} is {v}")));
            }
        }
        let sum: f64 = entries.iter().sum();
        let normalized = (sum - 1.0).abs() <= 1e-12;
        Ok(DensityVector { entries, normalized })
    }

    pub fn normalized(mut entries: Vec<f64>) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::usage("cannot normalize a zero density"));
        }
        for v in entries.iter_mut() {
            *v /= sum;
        }
        DensityVector::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

fn check_density(f: &[f64]) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::usage("empty density"));
    }
    let mut sum = 0.0;
    for (i, &v) in f.iter().enumerate() {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::usage(format!("density entry {i} is {v}")));
        }
        sum += v;
    }
    if sum == 0.0 {
        return Err(Error::usage("density must be nonzero"));
    }
    Ok(sum)
}

/// `Φ_{ℓ_p}(f)` in closed form: `(1/p) Σ f_i log(f_i/‖f‖₁)` for finite `p`
/// (the Lagrange maximizer is `x_i^p = f_i/‖f‖₁`), `0` for `p = ∞`
/// (maximizer `x = 𝟙`). Entries with `f_i = 0` contribute nothing.
pub fn indicator_lp(p: PExponent, f: &[f64]) -> Result<f64> {
    let sum = check_density(f)?;
    match p {
        PExponent::Infinity => Ok(0.0),
        PExponent::Finite(p) => {
            let s = compensated_sum(
                f.iter()
                    .filter(|&&v| v > 0.0)
                    .map(|&v| v * (v / sum).ln()),
            );
            Ok(s / p)
        }
    }
}

/// `Φ_{X(w)}(f) = Φ_X(f) − Σ f_i log w_i` by the change of variable
/// `y = w·x` on the unit ball.
pub fn indicator_space(spec: &SpaceSpec, f: &[f64]) -> Result<f64> {
    let base = indicator_lp(spec.p, f)?;
    match &spec.weight {
        None => Ok(base),
        Some(w) => {
            if w.len() < f.len() {
                return Err(Error::usage("weight shorter than the density"));
            }
            let shift = compensated_sum(
                f.iter()
                    .zip(w)
                    .filter(|(&v, _)| v > 0.0)
                    .map(|(&v, &wi)| v * wi.ln()),
            );
            Ok(base - shift)
        }
    }
}

/// Independent numeric route: ascent on the reduced concave objective
/// `G(y) = Σ f_i y_i − ‖f‖₁ · log ‖w e^y‖_p` (the normalization
/// `x = e^y / ‖w e^y‖_p` projects back onto the unit sphere). Agrees with
/// the closed form to `tol`.
pub fn indicator_numeric(spec: &SpaceSpec, f: &[f64], tol: f64) -> Result<f64> {
    let total = check_density(f)?;
    if !(tol > 0.0) {
        return Err(Error::usage("tolerance must be positive"));
    }
    let lw: Vec<f64> = (0..f.len()).map(|i| spec.log_weight(i)).collect();
    let p = match spec.p {
        // Flat maximizer x = 1/w.
        PExponent::Infinity => {
            return Ok(-compensated_sum(
                f.iter().zip(&lw).filter(|(&v, _)| v > 0.0).map(|(&v, &l)| v * l),
            ));
        }
        PExponent::Finite(p) => p,
    };

    let support: Vec<usize> = (0..f.len()).filter(|&i| f[i] > 0.0).collect();
    let fs: Vec<f64> = support.iter().map(|&i| f[i]).collect();
    let lws: Vec<f64> = support.iter().map(|&i| lw[i]).collect();
    let m = support.len();

    let mut y = vec![0.0f64; m];
    let step = 1.0 / (total * p);
    let grad_tol = tol * total * 0.05;
    let max_iter = 2_000_000usize;

    let mut value = 0.0;
    for iter in 0..max_iter {
        // π = normalized p-mass of w e^y; G and ∇G = f − ‖f‖₁ π.
        let mut top = f64::NEG_INFINITY;
        for i in 0..m {
            top = top.max(p * (y[i] + lws[i]));
        }
        let mut z = vec![0.0f64; m];
        let mut zsum = 0.0;
        for i in 0..m {
            z[i] = (p * (y[i] + lws[i]) - top).exp();
            zsum += z[i];
        }
        let log_norm = (top + zsum.ln()) / p;
        value = compensated_sum(fs.iter().zip(&y).map(|(&a, &b)| a * b)) - total * log_norm;

        let mut worst = 0.0f64;
        for i in 0..m {
            let g = fs[i] - total * z[i] / zsum;
            y[i] += step * g;
            worst = worst.max(g.abs());
        }
        if worst < grad_tol {
            return Ok(value);
        }
        if iter == max_iter - 1 {
            return Err(Error::NonConvergence { iterations: max_iter, best: value, residual: worst });
        }
    }
    Ok(value)
}

/// The lift `Ω^{[1]}(f) = f^{1/q} ⊙ Ω(f^{1/p})` of a centralizer on `ℓ_p`
/// to `ℓ_1`, defined for `1 < p < ∞` and `f ≥ 0`.
pub fn omega_lift_lp(omega: &Centralizer, p: f64, f: &[f64]) -> Result<Vec<Complex64>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::usage(format!("the lift needs 1 < p < ∞, got {p}")));
    }
    check_density(f)?;
    let q = p / (p - 1.0);
    let root_p: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v.powf(1.0 / p), 0.0)).collect();
    let mapped = omega.eval(&root_p)?;
    Ok(f.iter()
        .zip(&mapped)
        .map(|(&v, &o)| o * v.powf(1.0 / q))
        .collect())
}

/// `Φ^Ω(f) = Σ_i Ω^{[1]}(f)_i`.
pub fn phi_omega(omega: &Centralizer, p: f64, f: &[f64]) -> Result<Complex64> {
    let lift = omega_lift_lp(omega, p, f)?;
    let re = compensated_sum(lift.iter().map(|v| v.re));
    let im = compensated_sum(lift.iter().map(|v| v.im));
    Ok(Complex64::new(re, im))
}

/// `Φ^Ω` of a multiplication centralizer `Ω = g·` is `Σ g_i f_i` for any
/// factorization of `f`, independent of the ambient exponent.
pub fn phi_omega_multiplication(g: &[Complex64], f: &[f64]) -> Result<Complex64> {
    check_density(f)?;
    if g.len() < f.len() {
        return Err(Error::usage("multiplier shorter than the density"));
    }
    let re = compensated_sum(f.iter().zip(g).map(|(&v, m)| v * m.re));
    let im = compensated_sum(f.iter().zip(g).map(|(&v, m)| v * m.im));
    Ok(Complex64::new(re, im))
}

// ---------------------------------------------------------------------------
// Orientation pinning
// ---------------------------------------------------------------------------

/// The orientation constants of the indicator identities, fixed once by a
/// brute-force oracle rather than read off the formulas:
///
/// * `sigma`: the sign in `Φ^{Ω_θ} = sigma · (Φ_{X0} − Φ_{X1})`;
/// * `family_constant`: the proportionality in
///   `Φ^{Ω_0} = family_constant · (1/2π)∮ e^{-it} Φ_{X_{e^{it}}}(f) dt`
///   for arcs-weighted families (the analytic completions obey
///   `ψ'(0) = 2β`, which puts a factor 2 here).
#[derive(Debug, Clone, Copy)]
pub struct Orientation {
    pub sigma: f64,
    pub family_constant: f64,
}

/// Brute-force `Φ_{ℓ_1}` on a two-point density: maximize
/// `f₁ log t + f₂ log(1−t)` on a fine grid of the simplex edge.
fn brute_force_phi_l1(f: &[f64; 2]) -> f64 {
    let n = 200_000;
    let mut best = f64::NEG_INFINITY;
    for k in 1..n {
        let t = k as f64 / n as f64;
        let v = f[0] * t.ln() + f[1] * (1.0 - t).ln();
        best = best.max(v);
    }
    best
}

/// Brute-force `Φ_{ℓ_∞}` on a two-point density over a coarse grid of the
/// cube; the objective is monotone so the corner wins.
fn brute_force_phi_linf(f: &[f64; 2]) -> f64 {
    let n = 400;
    let mut best = f64::NEG_INFINITY;
    for a in 1..=n {
        for b in 1..=n {
            let (x0, x1) = (a as f64 / n as f64, b as f64 / n as f64);
            best = best.max(f[0] * x0.ln() + f[1] * x1.ln());
        }
    }
    best
}

/// Pin the orientation constants on the reference configurations:
/// the pair `(ℓ_∞, ℓ_1)` at `θ = 1/2` with `f = (1/2, 1/2)`, and a two-arc
/// weighted family at the origin.
pub fn pin_orientation(tol: f64) -> Result<Orientation> {
    use crate::complex_plane::{ArcPartition, QuadratureConfig};
    use crate::families::{derivation_multiplier, FamilyPoint, FamilySpec};

    // --- pair sign ---
    let f = [0.5f64, 0.5];
    let pair = PairScale::new(
        SpaceSpec::lp(PExponent::Infinity),
        SpaceSpec::lp_value(1.0)?,
        2,
    )?;
    let omega = Centralizer::PairInduced { pair, theta: 0.5, tol };
    // (ℓ_∞, ℓ_1)_{1/2} = ℓ_2, so the lift exponent is 2.
    let phi = phi_omega(&omega, 2.0, &f)?;
    let difference = brute_force_phi_linf(&f) - brute_force_phi_l1(&f);
    if phi.im.abs() > 1e-9 || difference == 0.0 {
        return Err(Error::NonFinite(format!("degenerate orientation data: {phi}, {difference}")));
    }
    let ratio = phi.re / difference;
    if (ratio.abs() - 1.0).abs() > 1e-3 {
        return Err(Error::NonFinite(format!(
            "pair identity magnitudes disagree: ratio {ratio}"
        )));
    }
    let sigma = ratio.signum();

    // --- family constant ---
    let quad = QuadratureConfig::default();
    let partition = ArcPartition::from_radians(&[0.0, std::f64::consts::PI])?;
    let w0 = vec![2.0f64, 1.0];
    let w1 = vec![1.0f64, 1.0];
    let family = FamilySpec::ArcsWeighted {
        base: SpaceSpec::lp_value(2.0)?,
        partition: partition.clone(),
        weights: vec![w0.clone(), w1.clone()],
    };
    let pt = FamilyPoint::new(family, Complex64::new(0.0, 0.0))?;
    let g = derivation_multiplier(&pt, 2, &quad, tol)?;
    let lhs = phi_omega_multiplication(&g, &f)?;
    let arcs = partition.arcs();
    let mut rhs = Complex64::new(0.0, 0.0);
    for (j, w) in [w0, w1].iter().enumerate() {
        let spec = SpaceSpec::weighted(PExponent::Finite(2.0), w.clone())?;
        let phi_j = indicator_space(&spec, &f)?;
        rhs += crate::families::arc_exponential_moment(&arcs[j]) * phi_j;
    }
    if rhs.norm() < 1e-14 {
        return Err(Error::NonFinite("degenerate family orientation data".into()));
    }
    let family_constant = (lhs / rhs).re;
    Ok(Orientation { sigma, family_constant })
}
