//! Centralizer evaluation: Kalton–Peck maps, multiplication centralizers,
//! derivations induced by pairs and families, twisted-sum quasi-norms, and
//! the probe drivers (centralizer constant, boundedness ladder, linear
//! exponential flow).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calderon::{calderon_norm, pair_derivation, PairScale};
use crate::complex_plane::QuadratureConfig;
use crate::error::{Error, Result};
use crate::families::{family_derivation, FamilyPoint, FamilySpec};
use crate::spaces::{PExponent, SpaceSpec};

/// The Kalton–Peck map `x ↦ scale · x ⊙ log(|x|/‖x‖_r)` (zero where `x`
/// vanishes), homogeneous of degree one.
pub fn kalton_peck(r: f64, scale: Complex64, x: &[Complex64]) -> Result<Vec<Complex64>> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::usage(format!("Kalton-Peck exponent must lie in [1,∞), got {r}")));
    }
    let spec = SpaceSpec::lp(PExponent::Finite(r));
    let nrm = spec.norm(x)?;
    if nrm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); x.len()]);
    }
    Ok(x.iter()
        .map(|&v| {
            let m = v.norm();
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * scale * (m / nrm).ln()
            }
        })
        .collect())
}

/// An evaluable homogeneous map `x ↦ Ω(x)` with construction metadata.
#[derive(Debug, Clone)]
pub enum Centralizer {
    Zero,
    KaltonPeck {
        r: f64,
        scale: Complex64,
    },
    Multiplication {
        g: Vec<Complex64>,
    },
    PairInduced {
        pair: PairScale,
        theta: f64,
        tol: f64,
    },
    FamilyInduced {
        family: FamilySpec,
        z0: Complex64,
        quad: QuadratureConfig,
        tol: f64,
    },
}

impl Centralizer {
    /// Whether the handle is linear by construction (multiplication-type).
    pub fn is_linear(&self) -> bool {
        match self {
            Centralizer::Zero | Centralizer::Multiplication { .. } => true,
            Centralizer::KaltonPeck { .. } => false,
            Centralizer::PairInduced { pair, .. } => {
                // A weighted pair over a common exponent induces a
                // multiplication centralizer.
                pair.x0.p == pair.x1.p && (pair.x0.weight.is_some() || pair.x1.weight.is_some())
            }
            Centralizer::FamilyInduced { family, .. } => matches!(
                family,
                FamilySpec::ArcsWeighted { .. } | FamilySpec::FlatDiagonal { .. }
            ),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Centralizer::Zero => Ok(vec![Complex64::new(0.0, 0.0); x.len()]),
            Centralizer::KaltonPeck { r, scale } => kalton_peck(*r, *scale, x),
            Centralizer::Multiplication { g } => {
                if x.len() > g.len() {
                    return Err(Error::usage(format!(
                        "multiplier has {} entries, vector has {}",
                        g.len(),
                        x.len()
                    )));
                }
                Ok(x.iter().zip(g).map(|(&v, &m)| v * m).collect())
            }
            Centralizer::PairInduced { pair, theta, tol } => {
                if x.iter().all(|v| v.norm() == 0.0) {
                    return Ok(vec![Complex64::new(0.0, 0.0); x.len()]);
                }
                if x.len() == pair.dim {
                    pair_derivation(pair, *theta, x, *tol)
                } else if pair.x0.weight.is_none() && pair.x1.weight.is_none() {
                    let p = PairScale::new(pair.x0.clone(), pair.x1.clone(), x.len())?;
                    pair_derivation(&p, *theta, x, *tol)
                } else {
                    Err(Error::usage(format!(
                        "weighted pair has dimension {}, vector has {}",
                        pair.dim,
                        x.len()
                    )))
                }
            }
            Centralizer::FamilyInduced { family, z0, quad, tol } => {
                if x.iter().all(|v| v.norm() == 0.0) {
                    return Ok(vec![Complex64::new(0.0, 0.0); x.len()]);
                }
                let pt = FamilyPoint::new(family.clone(), *z0)?;
                family_derivation(&pt, x, quad, *tol)
            }
        }
    }
}

/// The twisted quasi-norm `‖(f, x)‖_Ω = ‖f − Ω(x)‖_X + ‖x‖_X`.
pub fn twisted_quasinorm(
    omega: &Centralizer,
    space: &SpaceSpec,
    f: &[Complex64],
    x: &[Complex64],
) -> Result<f64> {
    if f.len() != x.len() {
        return Err(Error::usage(format!(
            "twisted vector components have lengths {} and {}",
            f.len(),
            x.len()
        )));
    }
    let ox = omega.eval(x)?;
    let diff: Vec<Complex64> = f.iter().zip(&ox).map(|(&a, &b)| a - b).collect();
    Ok(space.norm(&diff)? + space.norm(x)?)
}

/// The commutator defect `‖Ω(a ⊙ x) − a ⊙ Ω(x)‖_X` of a multiplier `a`.
pub fn centralizer_defect(
    omega: &Centralizer,
    space: &SpaceSpec,
    a: &[Complex64],
    x: &[Complex64],
) -> Result<f64> {
    if a.len() != x.len() {
        return Err(Error::usage(format!(
            "multiplier has {} entries, vector has {}",
            a.len(),
            x.len()
        )));
    }
    let ax: Vec<Complex64> = a.iter().zip(x).map(|(&m, &v)| m * v).collect();
    let oax = omega.eval(&ax)?;
    let ox = omega.eval(x)?;
    let diff: Vec<Complex64> = oax
        .iter()
        .zip(a.iter().zip(&ox))
        .map(|(&u, (&m, &v))| u - m * v)
        .collect();
    space.norm(&diff)
}

/// Empirical centralizer constant: the max of `defect / (‖a‖_∞ ‖x‖_X)`
/// over `n_samples` random pairs plus the structured witnesses (indicator
/// multipliers over flat vectors), which are the near-extremal
/// configurations for Kalton–Peck-type maps and keep the estimate stable
/// across dimensions.
pub fn defect_constant_probe(
    omega: &Centralizer,
    space: &SpaceSpec,
    dim: usize,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sup = SpaceSpec::lp(PExponent::Infinity);
    let mut worst = 0.0f64;
    let push = |a: &[Complex64], x: &[Complex64], worst: &mut f64| -> Result<()> {
        let na = sup.norm(a)?;
        let nx = space.norm(x)?;
        if na == 0.0 || nx == 0.0 {
            return Ok(());
        }
        let d = centralizer_defect(omega, space, a, x)?;
        *worst = (*worst).max(d / (na * nx));
        Ok(())
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let flat = vec![one; dim];
    for k in 1..=dim {
        let mut ind = vec![zero; dim];
        ind[..k].fill(one);
        push(&ind, &flat, &mut worst)?;
    }
    for _ in 0..n_samples {
        let a = random_vector(&mut rng, dim);
        let x = random_vector(&mut rng, dim);
        push(&a, &x, &mut worst)?;
    }
    Ok(worst)
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

// ---------------------------------------------------------------------------
// Boundedness probe
// ---------------------------------------------------------------------------

/// Probe sample generation: flat vectors, single spikes, geometric decays
/// and Rademacher-sign random vectors. The seed is carried into the output
/// rows so runs are reproducible.
#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub n_random: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { n_random: 8, seed: 7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub dim: usize,
    pub max_ratio: f64,
    pub seed: u64,
}

pub fn probe_samples(dim: usize, cfg: &ProbeConfig) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(dim as u64));
    let one = Complex64::new(1.0, 0.0);
    let mut samples = Vec::with_capacity(cfg.n_random + 4);
    samples.push(vec![one; dim]);
    let mut spike = vec![Complex64::new(0.0, 0.0); dim];
    spike[0] = one;
    samples.push(spike);
    for q in [0.5f64, 0.9] {
        samples.push((0..dim).map(|i| one * q.powi(i as i32)).collect());
    }
    for _ in 0..cfg.n_random {
        samples.push(
            (0..dim)
                .map(|_| if rng.gen_bool(0.5) { one } else { -one })
                .collect(),
        );
    }
    samples
}

/// Per-dimension supremum of `‖Ω(x)‖_p / ‖x‖_p` over the fixed sampler.
/// A growing column is evidence of unboundedness, never a proof; the
/// fitted slope against `log dim` is the quantitative summary.
pub fn boundedness_probe(
    omega: &Centralizer,
    p: PExponent,
    dims: &[usize],
    cfg: &ProbeConfig,
) -> Result<Vec<ProbeRow>> {
    if dims.is_empty() {
        return Err(Error::usage("empty dimension ladder"));
    }
    let space = SpaceSpec::lp(p);
    dims.iter()
        .map(|&dim| {
            let samples = probe_samples(dim, cfg);
            let ratios = samples
                .par_iter()
                .map(|x| -> Result<f64> {
                    let nx = space.norm(x)?;
                    if nx == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(space.norm(&omega.eval(x)?)? / nx)
                })
                .collect::<Result<Vec<f64>>>()?;
            let max_ratio = ratios.into_iter().fold(0.0f64, f64::max);
            Ok(ProbeRow { dim, max_ratio, seed: cfg.seed })
        })
        .collect()
}

/// Probe only the flat vectors `𝟙_n`; these witness the Kalton–Peck growth.
pub fn flat_vector_ratios(omega: &Centralizer, p: PExponent, dims: &[usize]) -> Result<Vec<ProbeRow>> {
    if dims.is_empty() {
        return Err(Error::usage("empty dimension ladder"));
    }
    let space = SpaceSpec::lp(p);
    dims.iter()
        .map(|&dim| {
            let x = vec![Complex64::new(1.0, 0.0); dim];
            let nx = space.norm(&x)?;
            let r = space.norm(&omega.eval(&x)?)? / nx;
            Ok(ProbeRow { dim, max_ratio: r, seed: 0 })
        })
        .collect()
}

/// Least-squares slope of `ratio` against `log dim`.
pub fn fit_slope(rows: &[ProbeRow]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| (r.dim as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.max_ratio).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Probe a handle for triviality against multiplication candidates: fit
/// `g_i = Ω(e_i)_i` on basis vectors and return the boundedness ladder of
/// `Ω − Multiplication(g)`.
pub fn triviality_probe(
    omega: &Centralizer,
    p: PExponent,
    dims: &[usize],
    cfg: &ProbeConfig,
) -> Result<Vec<ProbeRow>> {
    if dims.is_empty() {
        return Err(Error::usage("empty dimension ladder"));
    }
    let top = *dims.iter().max().unwrap();
    let mut g = vec![Complex64::new(0.0, 0.0); top];
    for (i, gi) in g.iter_mut().enumerate() {
        let mut e = vec![Complex64::new(0.0, 0.0); top];
        e[i] = Complex64::new(1.0, 0.0);
        *gi = omega.eval(&e)?[i];
    }
    let space = SpaceSpec::lp(p);
    dims.iter()
        .map(|&dim| {
            let samples = probe_samples(dim, cfg);
            let mut max_ratio = 0.0f64;
            for x in &samples {
                let nx = space.norm(x)?;
                if nx == 0.0 {
                    continue;
                }
                let ox = omega.eval(x)?;
                let res: Vec<Complex64> = ox
                    .iter()
                    .zip(x.iter().zip(&g))
                    .map(|(&o, (&v, &m))| o - m * v)
                    .collect();
                max_ratio = max_ratio.max(space.norm(&res)? / nx);
            }
            Ok(ProbeRow { dim, max_ratio, seed: cfg.seed })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Linear exponential flow
// ---------------------------------------------------------------------------

/// For a weighted pair `(X(w0), X(w1))` with linear derivation
/// `Ω = multiplication by g = log(w0/w1)`, the scale flows isometrically:
/// `‖x‖_s = ‖e^{−s·g} ⊙ x‖_0`. Returns the residual
/// `|‖x‖_s − ‖e^{−s g} x‖_{X0}|`.
pub fn linear_flow_check(
    g: &[Complex64],
    pair: &PairScale,
    s: f64,
    x: &[Complex64],
    tol: f64,
) -> Result<f64> {
    if g.len() != x.len() || x.len() != pair.dim {
        return Err(Error::usage("dimension mismatch in linear flow check"));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::usage(format!("flow parameter must lie in [0,1], got {s}")));
    }
    let norm_s = if s == 0.0 {
        pair.x0.norm(x)?
    } else if s == 1.0 {
        pair.x1.norm(x)?
    } else {
        calderon_norm(pair, s, x, tol)?
    };
    let flowed: Vec<Complex64> = g.iter().zip(x).map(|(&gi, &v)| (-gi * s).exp() * v).collect();
    Ok((norm_s - pair.x0.norm(&flowed)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn cv(entries: &[f64]) -> Vec<Complex64> {
        entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn kp_vanishes_on_basis_vectors() {
        let v = kalton_peck(2.0, one(), &cv(&[1.0, 0.0])).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn kp_on_the_flat_vector() {
        let v = kalton_peck(2.0, one(), &cv(&[1.0, 1.0])).unwrap();
        let expect = -0.5 * LN_2;
        for z in v {
            assert!((z.re - expect).abs() < 1e-15, "{z}");
        }
    }

    #[test]
    fn kp_is_homogeneous() {
        let x = cv(&[1.0, 1.0]);
        let x2 = cv(&[2.0, 2.0]);
        let v = kalton_peck(2.0, one(), &x).unwrap();
        let v2 = kalton_peck(2.0, one(), &x2).unwrap();
        for i in 0..2 {
            assert!((v2[i] - v[i] * 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn kp_of_zero_is_zero() {
        let v = kalton_peck(2.0, one(), &cv(&[0.0, 0.0])).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn kp_rejects_infinite_exponent() {
        assert!(kalton_peck(f64::INFINITY, one(), &cv(&[1.0])).is_err());
        assert!(kalton_peck(0.5, one(), &cv(&[1.0])).is_err());
    }

    #[test]
    fn twisted_quasinorm_examples() {
        let l2 = SpaceSpec::lp_value(2.0).unwrap();
        // Zero centralizer: ‖f‖ + ‖x‖.
        let v = twisted_quasinorm(&Centralizer::Zero, &l2, &cv(&[3.0, 4.0]), &cv(&[1.0, 0.0])).unwrap();
        assert!((v - 6.0).abs() < 1e-15);
        // x = 0: just ‖f‖.
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        let v = twisted_quasinorm(&kp, &l2, &cv(&[3.0, 4.0]), &cv(&[0.0, 0.0])).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        // (0, (1,1)/√2): log√2 + 1.
        let s = 0.5f64.sqrt();
        let v = twisted_quasinorm(&kp, &l2, &cv(&[0.0, 0.0]), &cv(&[s, s])).unwrap();
        assert!((v - (0.5 * LN_2 + 1.0)).abs() < 1e-14, "{v}");
    }

    #[test]
    fn multiplications_have_zero_defect() {
        let l2 = SpaceSpec::lp_value(2.0).unwrap();
        let g = vec![Complex64::new(0.3, 1.0), Complex64::new(-2.0, 0.1)];
        let m = Centralizer::Multiplication { g };
        let d = centralizer_defect(&m, &l2, &cv(&[2.0, 1.0]), &cv(&[1.0, 1.0])).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn kp_defect_under_constant_multiplier_vanishes() {
        let l2 = SpaceSpec::lp_value(2.0).unwrap();
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        let a = vec![Complex64::new(0.7, 0.2); 3];
        let x = cv(&[0.3, -1.0, 0.55]);
        let d = centralizer_defect(&kp, &l2, &a, &x).unwrap();
        assert!(d < 1e-12, "defect {d}");
    }

    #[test]
    fn kp_defect_entrywise_example() {
        // Ω = KP(2,1), a = (2,1), x = (1,1): worked out entrywise,
        // Ω(ax) − aΩ(x) = (2 log(2√2/√5), log(√2/√5)).
        let l2 = SpaceSpec::lp_value(2.0).unwrap();
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        let d = centralizer_defect(&kp, &l2, &cv(&[2.0, 1.0]), &cv(&[1.0, 1.0])).unwrap();
        let t0 = 2.0 * (2.0 * 2.0f64.sqrt() / 5.0f64.sqrt()).ln();
        let t1 = (2.0f64.sqrt() / 5.0f64.sqrt()).ln();
        let expect = (t0 * t0 + t1 * t1).sqrt();
        assert!((d - expect).abs() < 1e-14, "defect {d} vs {expect}");
        assert!((d - 0.65635401).abs() < 1e-7, "frozen digits: {d}");
    }

    #[test]
    fn kp_flat_vector_growth_is_half_log_n() {
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        let rows = flat_vector_ratios(&kp, PExponent::Finite(2.0), &[16]).unwrap();
        assert!((rows[0].max_ratio - (16.0f64).ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn multiplication_ratios_stay_below_sup_norm() {
        let g: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64 * 0.1).sin(), 0.3)).collect();
        let m = (0..64).map(|i| g[i].norm()).fold(0.0f64, f64::max);
        let omega = Centralizer::Multiplication { g };
        let rows = boundedness_probe(
            &omega,
            PExponent::Finite(2.0),
            &[4, 16, 64],
            &ProbeConfig::default(),
        )
        .unwrap();
        for r in rows {
            assert!(r.max_ratio <= m * (1.0 + 1e-12), "ratio {} above {m}", r.max_ratio);
        }
    }

    #[test]
    fn probe_rejects_empty_ladder() {
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        assert!(boundedness_probe(&kp, PExponent::Finite(2.0), &[], &ProbeConfig::default()).is_err());
    }

    #[test]
    fn kp_probe_grows_with_the_flat_witness() {
        let kp = Centralizer::KaltonPeck { r: 2.0, scale: one() };
        let rows = boundedness_probe(
            &kp,
            PExponent::Finite(2.0),
            &[8, 32, 128, 512],
            &ProbeConfig::default(),
        )
        .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].max_ratio > w[0].max_ratio, "column should grow: {rows:?}");
        }
        let slope = fit_slope(&rows);
        assert!((slope - 0.5).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn triviality_probe_flattens_a_multiplication() {
        let g: Vec<Complex64> = (0..32).map(|i| Complex64::new(0.2 * i as f64, -0.4)).collect();
        let omega = Centralizer::Multiplication { g };
        let rows =
            triviality_probe(&omega, PExponent::Finite(2.0), &[4, 16, 32], &ProbeConfig::default())
                .unwrap();
        for r in rows {
            assert!(r.max_ratio < 1e-13, "residual ratio {}", r.max_ratio);
        }
    }

    #[test]
    fn flow_residual_vanishes_at_s_zero() {
        let x0 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let x1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![4.0, 1.0]).unwrap();
        let pair = PairScale::new(x0, x1, 2).unwrap();
        let g = vec![Complex64::new((1.0f64 / 4.0).ln(), 0.0), Complex64::new(0.0, 0.0)];
        let r = linear_flow_check(&g, &pair, 0.0, &cv(&[0.3, 0.9]), 1e-10).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn flow_residual_on_the_weighted_example() {
        let x0 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let x1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![4.0, 1.0]).unwrap();
        let pair = PairScale::new(x0, x1, 2).unwrap();
        let g = vec![Complex64::new((1.0f64 / 4.0).ln(), 0.0), Complex64::new(0.0, 0.0)];
        let r = linear_flow_check(&g, &pair, 0.5, &cv(&[1.0, 0.0]), 1e-10).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn null_derivation_gives_a_constant_scale() {
        let pair = PairScale::new(
            SpaceSpec::lp_value(2.5).unwrap(),
            SpaceSpec::lp_value(2.5).unwrap(),
            3,
        )
        .unwrap();
        let g = vec![Complex64::new(0.0, 0.0); 3];
        let x = cv(&[0.4, -1.3, 0.8]);
        for s in [0.1, 0.5, 0.9] {
            let r = linear_flow_check(&g, &pair, s, &x, 1e-10).unwrap();
            assert!(r < 1e-8, "residual {r} at s={s}");
        }
    }
}
