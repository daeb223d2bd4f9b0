//! Calderón-product norms of pairs and finite families of weighted
//! `ℓ_p` spaces, computed two independent ways:
//!
//! * a log-domain convex solver (damped cyclic coordinate descent with
//!   closed-form single-coordinate steps), which also yields the optimal
//!   factorization and hence the induced derivation
//!   `Ω_θ(x) = x · log(|a₁(x)|/|a₀(x)|)`;
//! * closed-form recipes for `ℓ_p` scales, kept strictly separate so they
//!   can serve as oracles for the solver.
//!
//! Conventions: the first factor carries the phases of `x`, all other
//! factors are nonnegative; factorizations are rescaled so every block norm
//! equals the achieved product value; entries of the factors vanish exactly
//! where `x` vanishes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{compensated_sum, PExponent, SpaceSpec};

const MAX_SWEEPS: usize = 100_000;
const DAMPING: f64 = 0.5;

/// An interpolation pair of sequence-space norms over a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScale {
    pub x0: SpaceSpec,
    pub x1: SpaceSpec,
    pub dim: usize,
}

impl PairScale {
    pub fn new(x0: SpaceSpec, x1: SpaceSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("pair dimension must be positive"));
        }
        for (name, s) in [("X0", &x0), ("X1", &x1)] {
            if let Some(w) = &s.weight {
                if w.len() != dim {
                    return Err(Error::usage(format!(
                        "{name} weight has {} entries, pair dimension is {dim}",
                        w.len()
                    )));
                }
            }
        }
        Ok(PairScale { x0, x1, dim })
    }

    fn check_vector(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::usage(format!(
                "vector has {} entries, pair dimension is {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// An optimal (to tolerance) factorization `|x| = |a0|^{1-θ} |a1|^{θ}` with
/// `‖a0‖₀ = ‖a1‖₁ = achieved_value`. `a0` carries the phases of `x`; `a1`
/// is nonnegative.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a0: Vec<Complex64>,
    pub a1: Vec<Complex64>,
    pub theta: f64,
    pub achieved_value: f64,
}

// ---------------------------------------------------------------------------
// The log-domain product solver
// ---------------------------------------------------------------------------

/// Solver output: per-block log-moduli on the full index range (`-inf` off
/// the support of `x`), plus the achieved value. All block norms equal the
/// value after rebalancing.
#[derive(Debug, Clone)]
pub(crate) struct ProductFactors {
    pub log_moduli: Vec<Vec<f64>>,
    pub value: f64,
}

impl ProductFactors {
    pub fn moduli(&self, block: usize) -> Vec<f64> {
        self.log_moduli[block].iter().map(|&l| if l.is_finite() { l.exp() } else { 0.0 }).collect()
    }
}

fn validate_exponents(exponents: &[f64]) -> Result<()> {
    if exponents.is_empty() {
        return Err(Error::usage("need at least one block"));
    }
    let mut sum = 0.0;
    for &a in exponents {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::usage(format!("block exponents must be positive, got {a}")));
        }
        sum += a;
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::usage(format!("block exponents must sum to 1, got {sum}")));
    }
    Ok(())
}

/// Minimize `∏ ‖f_j‖_j^{a_j}` over factorizations `|x| = ∏ |f_j|^{a_j}`
/// supported on `supp(x)`.
///
/// Sup-norm blocks are pinned to flat profiles (weighted modulus constant),
/// which is optimal for them; the finite-`p` blocks are solved by damped
/// cyclic coordinate descent in the log domain, where each single-coordinate
/// subproblem has a closed-form minimizer.
pub(crate) fn product_factorization(
    specs: &[SpaceSpec],
    exponents: &[f64],
    x_abs: &[f64],
    tol: f64,
) -> Result<ProductFactors> {
    if specs.len() != exponents.len() {
        return Err(Error::usage("one exponent per block is required"));
    }
    validate_exponents(exponents)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::usage(format!("tolerance must be positive, got {tol}")));
    }
    let dim = x_abs.len();
    for spec in specs {
        if let Some(w) = &spec.weight {
            if w.len() < dim {
                return Err(Error::usage(format!(
                    "block weight has {} entries, vector has {dim}",
                    w.len()
                )));
            }
        }
    }
    for (i, &m) in x_abs.iter().enumerate() {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::NonFinite(format!("modulus {m} at entry {i}")));
        }
    }

    let support: Vec<usize> = (0..dim).filter(|&i| x_abs[i] > 0.0).collect();
    let n_blocks = specs.len();
    if support.is_empty() {
        return Ok(ProductFactors {
            log_moduli: vec![vec![f64::NEG_INFINITY; dim]; n_blocks],
            value: 0.0,
        });
    }
    let m = support.len();

    // Exact power-of-two prescaling keeps the solver's view of x invariant
    // under positive scalings, so derivations are scale-covariant to
    // rounding.
    let top = support.iter().map(|&i| x_abs[i]).fold(0.0f64, f64::max);
    let k2 = top.log2().floor();
    let scale = (2.0f64).powi(k2 as i32);
    let xi: Vec<f64> = support.iter().map(|&i| (x_abs[i] / scale).ln()).collect();

    let lw: Vec<Vec<f64>> = specs
        .iter()
        .map(|s| support.iter().map(|&i| s.log_weight(i)).collect())
        .collect();

    let finite: Vec<usize> = (0..n_blocks).filter(|&j| !specs[j].p.is_infinite()).collect();
    let infinite: Vec<usize> = (0..n_blocks).filter(|&j| specs[j].p.is_infinite()).collect();

    // Adjusted targets: sup-norm blocks contribute flat log-profiles -lw.
    let mut xi_t = xi.clone();
    for &j in &infinite {
        for (ii, t) in xi_t.iter_mut().enumerate() {
            *t += exponents[j] * lw[j][ii];
        }
    }

    // Log-moduli of the factors on the support, per block.
    let mut v: Vec<Vec<f64>> = vec![vec![0.0; m]; n_blocks];
    for &j in &infinite {
        for ii in 0..m {
            v[j][ii] = -lw[j][ii];
        }
    }

    if finite.is_empty() {
        // Product of sup-norm spaces: value = ‖∏ w_j^{a_j} · x‖_∞ with flat
        // factors (they attain the value; the product dominates |x|).
        let g = (0..m)
            .map(|ii| xi[ii] + (0..n_blocks).map(|j| exponents[j] * lw[j][ii]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok(assemble(specs, dim, &support, v, k2, g, scale));
    }

    let a_f: f64 = finite.iter().map(|&j| exponents[j]).sum();
    for &j in &finite {
        for ii in 0..m {
            v[j][ii] = xi_t[ii] / a_f;
        }
    }

    if finite.len() >= 2 && m >= 2 {
        coordinate_descent(specs, exponents, &finite, &lw, &xi_t, &mut v, tol)?;
    }

    // Objective over finite blocks (the flat sup blocks have norm 1 before
    // rebalancing).
    let mut g = 0.0;
    for &j in &finite {
        let p = specs[j].p.value();
        let (s, t) = logsumexp(&v[j], &lw[j], p);
        g += exponents[j] / p * (s + t.ln());
    }
    Ok(assemble(specs, dim, &support, v, k2, g, scale))
}

/// `(shift, Σ exp(p(v+lw) − shift))` for one block.
fn logsumexp(v: &[f64], lw: &[f64], p: f64) -> (f64, f64) {
    let mut s = f64::NEG_INFINITY;
    for (a, b) in v.iter().zip(lw) {
        s = s.max(p * (a + b));
    }
    let t = compensated_sum(v.iter().zip(lw).map(|(a, b)| (p * (a + b) - s).exp()));
    (s, t)
}

fn coordinate_descent(
    specs: &[SpaceSpec],
    exponents: &[f64],
    finite: &[usize],
    lw: &[Vec<f64>],
    xi_t: &[f64],
    v: &mut [Vec<f64>],
    tol: f64,
) -> Result<()> {
    let m = xi_t.len();
    // Pivot block: the largest exponent keeps the coupled update mild.
    let pivot = *finite
        .iter()
        .max_by(|&&a, &&b| exponents[a].partial_cmp(&exponents[b]).unwrap())
        .unwrap();
    let others: Vec<usize> = finite.iter().copied().filter(|&j| j != pivot).collect();
    let p_l = specs[pivot].p.value();
    let a_l = exponents[pivot];

    let stop_v = 0.05 * tol;
    let stop_g = 0.01 * tol;

    let mut ell: Vec<Vec<f64>> = vec![vec![0.0; m]; specs.len()];
    let mut tt: Vec<Vec<f64>> = vec![vec![0.0; m]; specs.len()];
    let mut shift = vec![0.0f64; specs.len()];
    let mut total = vec![0.0f64; specs.len()];

    let refresh = |j: usize,
                   v: &[Vec<f64>],
                   ell: &mut [Vec<f64>],
                   tt: &mut [Vec<f64>],
                   shift: &mut [f64],
                   total: &mut [f64]| {
        let p = specs[j].p.value();
        let mut s = f64::NEG_INFINITY;
        for ii in 0..m {
            ell[j][ii] = p * (v[j][ii] + lw[j][ii]);
            s = s.max(ell[j][ii]);
        }
        shift[j] = s;
        let mut t = 0.0;
        for ii in 0..m {
            tt[j][ii] = (ell[j][ii] - s).exp();
            t += tt[j][ii];
        }
        total[j] = t;
    };

    let objective = |shift: &[f64], total: &[f64]| -> f64 {
        finite
            .iter()
            .map(|&j| exponents[j] / specs[j].p.value() * (shift[j] + total[j].ln()))
            .sum()
    };

    for &j in finite {
        refresh(j, v, &mut ell, &mut tt, &mut shift, &mut total);
    }
    let mut g_prev = objective(&shift, &total);
    let mut calm_sweeps = 0usize;
    let mut last_residual = f64::INFINITY;

    for sweep in 0..MAX_SWEEPS {
        let mut max_delta = 0.0f64;
        for &j in &others {
            let p_j = specs[j].p.value();
            let a_j = exponents[j];
            let q = p_l * a_j / a_l;
            for ii in 0..m {
                // Closed-form minimizer of the two coupled block terms in
                // coordinate ii; all other coordinates and blocks are fixed.
                let rest_j = total[j] - tt[j][ii];
                let rest_l = total[pivot] - tt[pivot][ii];
                if rest_j <= 0.0 || rest_l <= 0.0 {
                    continue; // all block mass sits in this coordinate
                }
                let log_a = shift[j] + rest_j.ln();
                let log_c = shift[pivot] + rest_l.ln();
                let log_b = p_j * lw[j][ii];
                let log_d = p_l * (v[pivot][ii] + (a_j / a_l) * v[j][ii] + lw[pivot][ii]);
                let v_star = (log_a + log_d - log_b - log_c) / (p_j + q);
                let delta = DAMPING * (v_star - v[j][ii]);
                if !delta.is_finite() {
                    continue;
                }
                v[j][ii] += delta;
                let delta_l = -(a_j / a_l) * delta;
                v[pivot][ii] += delta_l;
                max_delta = max_delta.max(delta.abs()).max(delta_l.abs());

                ell[j][ii] = p_j * (v[j][ii] + lw[j][ii]);
                tt[j][ii] = (ell[j][ii] - shift[j]).exp();
                total[j] = rest_j + tt[j][ii];
                ell[pivot][ii] = p_l * (v[pivot][ii] + lw[pivot][ii]);
                tt[pivot][ii] = (ell[pivot][ii] - shift[pivot]).exp();
                total[pivot] = rest_l + tt[pivot][ii];
            }
        }
        // Exact refresh kills incremental drift and recenters the shifts.
        for &j in finite {
            refresh(j, v, &mut ell, &mut tt, &mut shift, &mut total);
        }
        let g = objective(&shift, &total);
        let rel = (g - g_prev).abs() / (g.abs() + 1.0);
        g_prev = g;
        last_residual = max_delta;

        if max_delta < stop_v && rel < stop_g {
            calm_sweeps += 1;
            if calm_sweeps >= 2 {
                return Ok(());
            }
        } else {
            calm_sweeps = 0;
        }
        let _ = sweep;
    }
    Err(Error::NonConvergence {
        iterations: MAX_SWEEPS,
        best: g_prev.exp(),
        residual: last_residual,
    })
}

/// Restore full-dimension log-moduli: undo the power-of-two prescale and
/// rebalance every block norm onto the achieved value. The value itself is
/// `exp(g) · 2^k` (the power-of-two multiply is exact).
fn assemble(
    specs: &[SpaceSpec],
    dim: usize,
    support: &[usize],
    v: Vec<Vec<f64>>,
    k2: f64,
    g: f64,
    scale: f64,
) -> ProductFactors {
    let ln2 = std::f64::consts::LN_2;
    let log_value = g + k2 * ln2;
    let mut log_moduli = vec![vec![f64::NEG_INFINITY; dim]; specs.len()];
    for (j, spec) in specs.iter().enumerate() {
        // Block norm in log form, support only.
        let vs: Vec<f64> = v[j].iter().map(|&t| t + k2 * ln2).collect();
        let lws: Vec<f64> = support.iter().map(|&i| spec.log_weight(i)).collect();
        let log_norm = match spec.p {
            PExponent::Infinity => vs
                .iter()
                .zip(&lws)
                .map(|(a, b)| a + b)
                .fold(f64::NEG_INFINITY, f64::max),
            PExponent::Finite(p) => {
                let (s, t) = logsumexp(&vs, &lws, p);
                (s + t.ln()) / p
            }
        };
        let shift = log_value - log_norm;
        for (ii, &i) in support.iter().enumerate() {
            log_moduli[j][i] = vs[ii] + shift;
        }
    }
    ProductFactors { log_moduli, value: g.exp() * scale }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

fn moduli_of(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|v| v.norm()).collect()
}

/// The Calderón product norm
/// `‖x‖_θ = inf { ‖y‖₀^{1-θ} ‖z‖₁^θ : |x| = |y|^{1-θ}|z|^θ }`
/// within relative tolerance `tol`.
pub fn calderon_norm(pair: &PairScale, theta: f64, x: &[Complex64], tol: f64) -> Result<f64> {
    pair.check_vector(x)?;
    check_theta(theta)?;
    let f = product_factorization(
        &[pair.x0.clone(), pair.x1.clone()],
        &[1.0 - theta, theta],
        &moduli_of(x),
        tol,
    )?;
    Ok(f.value)
}

/// The minimizing factorization, rescaled so `‖a0‖₀ = ‖a1‖₁ = value`.
pub fn optimal_factorization(
    pair: &PairScale,
    theta: f64,
    x: &[Complex64],
    tol: f64,
) -> Result<Factorization> {
    pair.check_vector(x)?;
    check_theta(theta)?;
    if x.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::usage("cannot factor the zero vector"));
    }
    let f = product_factorization(
        &[pair.x0.clone(), pair.x1.clone()],
        &[1.0 - theta, theta],
        &moduli_of(x),
        tol,
    )?;
    let m0 = f.moduli(0);
    let m1 = f.moduli(1);
    let a0 = x
        .iter()
        .zip(&m0)
        .map(|(&xi, &m)| if xi.norm() > 0.0 { xi / xi.norm() * m } else { Complex64::new(0.0, 0.0) })
        .collect();
    let a1 = m1.iter().map(|&m| Complex64::new(m, 0.0)).collect();
    Ok(Factorization { a0, a1, theta, achieved_value: f.value })
}

/// The induced derivation `Ω_θ(x) = x · log(|a1|/|a0|)` (zero off the
/// support of `x`), homogeneous of degree one.
pub fn pair_derivation(pair: &PairScale, theta: f64, x: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    pair.check_vector(x)?;
    check_theta(theta)?;
    if x.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::usage("cannot derive at the zero vector"));
    }
    let f = product_factorization(
        &[pair.x0.clone(), pair.x1.clone()],
        &[1.0 - theta, theta],
        &moduli_of(x),
        tol,
    )?;
    Ok(derivation_from_logs(x, &f.log_moduli[0], &f.log_moduli[1]))
}

pub(crate) fn derivation_from_logs(x: &[Complex64], l0: &[f64], l1: &[f64]) -> Vec<Complex64> {
    x.iter()
        .zip(l0.iter().zip(l1))
        .map(|(&xi, (&a, &b))| {
            if xi.norm() > 0.0 {
                xi * (b - a)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// The `n`-block product norm `inf ∏ ‖f_j‖^{a_j}` over `|x| ≤ ∏ |f_j|^{a_j}`,
/// positive exponents summing to one. Reduces to `calderon_norm` for `n = 2`.
pub fn multi_product_norm(
    specs: &[SpaceSpec],
    exponents: &[f64],
    x: &[Complex64],
    tol: f64,
) -> Result<f64> {
    for spec in specs {
        if let Some(w) = &spec.weight {
            if w.len() != x.len() {
                return Err(Error::usage(format!(
                    "block weight has {} entries, vector has {}",
                    w.len(),
                    x.len()
                )));
            }
        }
    }
    Ok(product_factorization(specs, exponents, &moduli_of(x), tol)?.value)
}

/// Multi-block factorization with the same conventions as the pair case;
/// used by family derivations.
pub(crate) fn multi_product_factorization(
    specs: &[SpaceSpec],
    exponents: &[f64],
    x: &[Complex64],
    tol: f64,
) -> Result<ProductFactors> {
    product_factorization(specs, exponents, &moduli_of(x), tol)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::usage(format!("theta must lie in (0,1), got {theta}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Closed forms (the oracle route)
// ---------------------------------------------------------------------------

/// The closed form for `(ℓ_{p0}, ℓ_{p1})_θ`: the `ℓ_r` norm with
/// `1/r = (1-θ)/p0 + θ/p1`, together with the analytic factorization recipe
/// `|a_j| = (|x|/‖x‖_r)^{r/p_j} · ‖x‖_r` (with `r/∞ = 0`).
///
/// This is the independent oracle for the optimizer; it never calls into the
/// solver.
#[derive(Debug, Clone, Copy)]
pub struct LpPairClosedForm {
    pub p0: PExponent,
    pub p1: PExponent,
    pub theta: f64,
    pub r: PExponent,
}

pub fn closed_form_lp_pair(p0: PExponent, p1: PExponent, theta: f64) -> Result<LpPairClosedForm> {
    check_theta(theta)?;
    let inv = (1.0 - theta) * inv_exponent(p0) + theta * inv_exponent(p1);
    let r = if inv == 0.0 { PExponent::Infinity } else { PExponent::new(1.0 / inv)? };
    Ok(LpPairClosedForm { p0, p1, theta, r })
}

fn inv_exponent(p: PExponent) -> f64 {
    match p {
        PExponent::Infinity => 0.0,
        PExponent::Finite(p) => 1.0 / p,
    }
}

impl LpPairClosedForm {
    pub fn norm(&self, x: &[Complex64]) -> f64 {
        SpaceSpec::lp(self.r).norm(x).expect("finite entries")
    }

    /// Moduli `(|a0|, |a1|)` of the recipe factorization.
    pub fn factor_moduli(&self, x: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let nrm = self.norm(x);
        let factor = |p: PExponent| -> Vec<f64> {
            x.iter()
                .map(|v| {
                    let m = v.norm();
                    if m == 0.0 {
                        return 0.0;
                    }
                    match (self.r, p) {
                        (PExponent::Infinity, _) => m,
                        (_, PExponent::Infinity) => nrm,
                        (PExponent::Finite(r), PExponent::Finite(p)) => (m / nrm).powf(r / p) * nrm,
                    }
                })
                .collect()
        };
        (factor(self.p0), factor(self.p1))
    }

    /// The derivation the recipe induces:
    /// `x · (r/p1 − r/p0) · log(|x|/‖x‖_r)`.
    pub fn derivation(&self, x: &[Complex64]) -> Vec<Complex64> {
        let nrm = self.norm(x);
        let c = match self.r {
            PExponent::Infinity => 0.0,
            PExponent::Finite(r) => r * inv_exponent(self.p1) - r * inv_exponent(self.p0),
        };
        x.iter()
            .map(|&v| {
                let m = v.norm();
                if m == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    v * (c * (m / nrm).ln())
                }
            })
            .collect()
    }
}

/// Closed-form norm of a weighted pair `(X(w0), X(w1))_θ` over the base
/// exponents `p0, p1`: `‖w0^{1-θ} w1^θ · x‖_r`. Weighted test oracle; the
/// `p0 = p1` case is the `X(w0^{1-θ}w1^θ)` statement used by the
/// acceptance suite.
pub fn weighted_pair_norm_oracle(
    p0: PExponent,
    p1: PExponent,
    w0: &[f64],
    w1: &[f64],
    theta: f64,
    x: &[Complex64],
) -> Result<f64> {
    check_theta(theta)?;
    if w0.len() != x.len() || w1.len() != x.len() {
        return Err(Error::usage("weight dimensions must match the vector"));
    }
    let cf = closed_form_lp_pair(p0, p1, theta)?;
    let tilted: Vec<Complex64> = x
        .iter()
        .zip(w0.iter().zip(w1))
        .map(|(&v, (&a, &b))| v * a.powf(1.0 - theta) * b.powf(theta))
        .collect();
    Ok(cf.norm(&tilted))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(entries: &[f64]) -> Vec<Complex64> {
        entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    fn lp(p: f64) -> SpaceSpec {
        SpaceSpec::lp(PExponent::new(p).unwrap())
    }

    fn linf() -> SpaceSpec {
        SpaceSpec::lp(PExponent::Infinity)
    }

    #[test]
    fn linf_l1_at_half_is_l2() {
        let pair = PairScale::new(linf(), lp(1.0), 2).unwrap();
        let v = calderon_norm(&pair, 0.5, &cv(&[3.0, 4.0]), 1e-10).unwrap();
        assert!((v - 5.0).abs() < 1e-9, "value {v}");
    }

    #[test]
    fn constant_pair_returns_the_common_norm() {
        let pair = PairScale::new(lp(3.0), lp(3.0), 3).unwrap();
        let x = cv(&[1.0, -2.0, 0.5]);
        let v = calderon_norm(&pair, 0.35, &x, 1e-10).unwrap();
        let expect = lp(3.0).norm(&x).unwrap();
        assert!((v - expect).abs() < 1e-9 * expect, "{v} vs {expect}");
    }

    #[test]
    fn weighted_l2_pair_on_a_basis_vector() {
        let x0 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let x1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![4.0, 1.0]).unwrap();
        let pair = PairScale::new(x0, x1, 2).unwrap();
        let v = calderon_norm(&pair, 0.5, &cv(&[1.0, 0.0]), 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "value {v}");
    }

    #[test]
    fn factorization_of_the_flat_vector() {
        let pair = PairScale::new(linf(), lp(1.0), 2).unwrap();
        let f = optimal_factorization(&pair, 0.5, &cv(&[1.0, 1.0]), 1e-10).unwrap();
        let s2 = (2.0f64).sqrt();
        assert!((f.achieved_value - s2).abs() < 1e-9);
        for i in 0..2 {
            assert!((f.a0[i].re - s2).abs() < 1e-8, "a0 = {:?}", f.a0);
            assert!((f.a1[i].re - s2 / 2.0).abs() < 1e-8, "a1 = {:?}", f.a1);
        }
    }

    #[test]
    fn factorization_of_constant_pair_is_x_up_to_scalars() {
        let pair = PairScale::new(lp(2.0), lp(2.0), 2).unwrap();
        let x = cv(&[3.0, -4.0]);
        let f = optimal_factorization(&pair, 0.3, &x, 1e-10).unwrap();
        // Both factors are multiples of x, normalized to ‖a_j‖ = value = ‖x‖.
        for i in 0..2 {
            assert!((f.a0[i] - x[i]).norm() < 1e-8);
            assert!((f.a1[i].re - x[i].norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn factorization_equality_and_normalization_invariants() {
        let pair = PairScale::new(lp(1.5), lp(4.0), 3).unwrap();
        let x = vec![
            Complex64::new(0.3, -1.2),
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.7),
        ];
        let theta = 0.4;
        let f = optimal_factorization(&pair, theta, &x, 1e-10).unwrap();
        assert_eq!(f.a0[1], Complex64::new(0.0, 0.0));
        assert_eq!(f.a1[1], Complex64::new(0.0, 0.0));
        for i in [0usize, 2] {
            let rebuilt = f.a0[i].norm().powf(1.0 - theta) * f.a1[i].norm().powf(theta);
            assert!((rebuilt - x[i].norm()).abs() < 1e-9 * x[i].norm());
            // a0 carries the phase of x.
            let phase = f.a0[i] / f.a0[i].norm();
            assert!((phase - x[i] / x[i].norm()).norm() < 1e-9);
            assert!(f.a1[i].im == 0.0 && f.a1[i].re >= 0.0);
        }
        let n0 = pair.x0.norm(&f.a0).unwrap();
        let n1 = pair.x1.norm(&f.a1).unwrap();
        assert!((n0 - f.achieved_value).abs() < 1e-9 * f.achieved_value);
        assert!((n1 - f.achieved_value).abs() < 1e-9 * f.achieved_value);
    }

    #[test]
    fn derivation_of_flat_vector_is_minus_log2() {
        let pair = PairScale::new(linf(), lp(1.0), 2).unwrap();
        let d = pair_derivation(&pair, 0.5, &cv(&[1.0, 1.0]), 1e-10).unwrap();
        for v in d {
            assert!((v.re + std::f64::consts::LN_2).abs() < 1e-9, "entry {v}");
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn derivation_of_weighted_pair_is_log_ratio() {
        let w0 = vec![1.0, 3.0, 0.5];
        let w1 = vec![4.0, 1.0, 2.5];
        let x0 = SpaceSpec::weighted(PExponent::Finite(2.0), w0.clone()).unwrap();
        let x1 = SpaceSpec::weighted(PExponent::Finite(2.0), w1.clone()).unwrap();
        let pair = PairScale::new(x0, x1, 3).unwrap();
        let x = vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.0),
            Complex64::new(0.2, -2.0),
        ];
        let d = pair_derivation(&pair, 0.3, &x, 1e-11).unwrap();
        for i in 0..3 {
            let expect = x[i] * (w0[i] / w1[i]).ln();
            assert!((d[i] - expect).norm() < 1e-8, "entry {i}: {} vs {expect}", d[i]);
        }
    }

    #[test]
    fn derivation_of_a_spike_is_zero() {
        let pair = PairScale::new(linf(), lp(1.0), 3).unwrap();
        let d = pair_derivation(&pair, 0.5, &cv(&[1.0, 0.0, 0.0]), 1e-10).unwrap();
        for v in d {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn multi_product_reduces_to_single_norm() {
        let x = cv(&[0.3, 1.7]);
        let v = multi_product_norm(&[lp(2.0)], &[1.0], &x, 1e-10).unwrap();
        assert!((v - lp(2.0).norm(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn multi_product_of_equal_spaces_is_the_norm() {
        let x = cv(&[1.0, -0.4, 0.9]);
        let v = multi_product_norm(
            &[lp(2.0), lp(2.0), lp(2.0)],
            &[0.2, 0.5, 0.3],
            &x,
            1e-10,
        )
        .unwrap();
        let expect = lp(2.0).norm(&x).unwrap();
        assert!((v - expect).abs() < 1e-8 * expect, "{v} vs {expect}");
    }

    #[test]
    fn multi_product_weighted_thirds_example() {
        let e = std::f64::consts::E;
        let s1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![e, 1.0]).unwrap();
        let s2 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let v = multi_product_norm(
            &[s1, s2.clone(), s2],
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            &cv(&[1.0, 0.0]),
            1e-10,
        )
        .unwrap();
        assert!((v - e.powf(1.0 / 3.0)).abs() < 1e-9, "value {v}");
    }

    #[test]
    fn multi_product_rejects_bad_exponents() {
        let x = cv(&[1.0]);
        assert!(multi_product_norm(&[lp(2.0), lp(2.0)], &[0.5, 0.6], &x, 1e-9).is_err());
        assert!(multi_product_norm(&[lp(2.0), lp(2.0)], &[1.1, -0.1], &x, 1e-9).is_err());
    }

    #[test]
    fn closed_form_exponents() {
        let r = closed_form_lp_pair(PExponent::Infinity, PExponent::Finite(1.0), 0.5)
            .unwrap()
            .r
            .value();
        assert_eq!(r, 2.0);
        let r = closed_form_lp_pair(PExponent::Finite(3.0), PExponent::Finite(3.0), 0.7)
            .unwrap()
            .r
            .value();
        assert!((r - 3.0).abs() < 1e-15);
        let r = closed_form_lp_pair(PExponent::Finite(2.0), PExponent::Finite(4.0), 0.5)
            .unwrap()
            .r
            .value();
        assert!((r - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_recipe_is_a_valid_factorization() {
        let cf = closed_form_lp_pair(PExponent::Finite(1.5), PExponent::Finite(4.0), 0.4).unwrap();
        let x = cv(&[0.3, 1.1, 0.0, 2.4]);
        let (m0, m1) = cf.factor_moduli(&x);
        for i in 0..4 {
            let rebuilt = m0[i].powf(0.6) * m1[i].powf(0.4);
            assert!((rebuilt - x[i].norm()).abs() < 1e-12);
        }
        let n0 = lp(1.5).norm_abs(&m0).unwrap();
        let n1 = lp(4.0).norm_abs(&m1).unwrap();
        let v = cf.norm(&x);
        assert!((n0 - v).abs() < 1e-12 && (n1 - v).abs() < 1e-12);
    }

    #[test]
    fn optimizer_matches_oracle_on_a_generic_pair() {
        let cf = closed_form_lp_pair(PExponent::Finite(1.5), PExponent::Finite(4.0), 0.4).unwrap();
        let pair = PairScale::new(lp(1.5), lp(4.0), 4).unwrap();
        let x = vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.1, 0.4),
            Complex64::new(0.05, -0.6),
            Complex64::new(2.4, 0.0),
        ];
        let v = calderon_norm(&pair, 0.4, &x, 1e-11).unwrap();
        let o = cf.norm(&x);
        assert!((v - o).abs() < 1e-8 * o, "optimizer {v} vs oracle {o}");
        let d = pair_derivation(&pair, 0.4, &x, 1e-11).unwrap();
        let od = cf.derivation(&x);
        for i in 0..4 {
            assert!((d[i] - od[i]).norm() < 1e-7, "entry {i}: {} vs {}", d[i], od[i]);
        }
    }

    #[test]
    fn theta_outside_unit_interval_is_rejected() {
        let pair = PairScale::new(linf(), lp(1.0), 1).unwrap();
        assert!(calderon_norm(&pair, 0.0, &cv(&[1.0]), 1e-9).is_err());
        assert!(calderon_norm(&pair, 1.0, &cv(&[1.0]), 1e-9).is_err());
    }

    #[test]
    fn zero_vector_cases() {
        let pair = PairScale::new(linf(), lp(1.0), 2).unwrap();
        assert_eq!(calderon_norm(&pair, 0.5, &cv(&[0.0, 0.0]), 1e-9).unwrap(), 0.0);
        assert!(optimal_factorization(&pair, 0.5, &cv(&[0.0, 0.0]), 1e-9).is_err());
    }
}
