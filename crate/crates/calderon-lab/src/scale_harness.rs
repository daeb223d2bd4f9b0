//! Scale sweeps over θ and z grids: norms, one-sided finite differences,
//! derivation norms and log-convexity residuals, the raw material for the
//! differential and convexity estimates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::calderon::{calderon_norm, pair_derivation, PairScale};
use crate::complex_plane::QuadratureConfig;
use crate::derivations::{flat_vector_ratios, Centralizer};
use crate::error::{Error, Result};
use crate::families::{family_derivation, family_norm, FamilyPoint, FamilySpec};
use crate::spaces::PExponent;

/// One sample of the scale map `t ↦ ‖x‖_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSample {
    pub t: f64,
    pub norm: f64,
    pub fd_left: f64,
    pub fd_right: f64,
    pub omega_norm: f64,
    pub logconv_residual: f64,
}

/// Sweep a pair over a θ grid. Per point: the norm, both one-sided finite
/// differences with step `fd_step`, the norm `‖Ω_θ(x)‖_θ` of the
/// derivation, and the log-convexity residual
/// `log‖x‖_{θ−h} + log‖x‖_{θ+h} − 2 log‖x‖_θ` (nonnegative up to solver
/// noise for a genuine interpolation scale).
pub fn scale_sweep(
    pair: &PairScale,
    x: &[Complex64],
    grid: &[f64],
    fd_step: f64,
    tol: f64,
) -> Result<Vec<ScaleSample>> {
    if grid.is_empty() {
        return Err(Error::usage("empty sweep grid"));
    }
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(Error::usage(format!("fd_step must be positive, got {fd_step}")));
    }
    for &t in grid {
        if !(t - 2.0 * fd_step > 0.0 && t + 2.0 * fd_step < 1.0) {
            return Err(Error::usage(format!(
                "grid point {t} too close to the endpoints for fd_step {fd_step}"
            )));
        }
    }
    grid.par_iter()
        .map(|&t| -> Result<ScaleSample> {
            let n0 = calderon_norm(pair, t, x, tol)?;
            let nl = calderon_norm(pair, t - fd_step, x, tol)?;
            let nr = calderon_norm(pair, t + fd_step, x, tol)?;
            let omega = pair_derivation(pair, t, x, tol)?;
            let omega_norm = calderon_norm(pair, t, &omega, tol)?;
            Ok(ScaleSample {
                t,
                norm: n0,
                fd_left: (n0 - nl) / fd_step,
                fd_right: (nr - n0) / fd_step,
                omega_norm,
                logconv_residual: nl.ln() + nr.ln() - 2.0 * n0.ln(),
            })
        })
        .collect()
}

/// One row of a family sweep: the point, the norm and derivation norm of
/// the probe vector, and the flat-vector ratio at one ladder dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySweepRow {
    pub z: Complex64,
    pub norm: f64,
    pub omega_norm: f64,
    pub dim: usize,
    pub flat_ratio: f64,
}

/// Sweep a family over a z grid. Per point: `‖x‖_z`, `‖Ω_z(x)‖_z`, and for
/// each ladder dimension the flat-vector ratio `‖Ω_z(𝟙_n)‖/‖𝟙_n‖` in the
/// family's own norm at `z` where available (for the ladder the probe space
/// is the `ℓ_p`-type space the family lives on).
pub fn family_sweep(
    family: &FamilySpec,
    x: &[Complex64],
    z_grid: &[Complex64],
    dims: &[usize],
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<Vec<FamilySweepRow>> {
    if z_grid.is_empty() {
        return Err(Error::usage("empty z grid"));
    }
    let mut rows = Vec::new();
    for &z in z_grid {
        let pt = FamilyPoint::new(family.clone(), z)?;
        let norm = family_norm(&pt, x, quad, tol)?;
        let omega = family_derivation(&pt, x, quad, tol)?;
        let omega_norm = family_norm(&pt, &omega, quad, tol)?;
        let ladder: Vec<usize> = if dims.is_empty() { vec![x.len()] } else { dims.to_vec() };
        let probe_p = probe_exponent(family, z, quad).unwrap_or(PExponent::Finite(2.0));
        let handle = Centralizer::FamilyInduced { family: family.clone(), z0: z, quad: *quad, tol };
        for dim in ladder {
            let flat = flat_vector_ratios(&handle, probe_p, &[dim])?;
            rows.push(FamilySweepRow {
                z,
                norm,
                omega_norm,
                dim,
                flat_ratio: flat[0].max_ratio,
            });
        }
    }
    Ok(rows)
}

/// The `ℓ_p` exponent of the family's interpolation space at `z`, where one
/// exists, for probe-ladder norms.
fn probe_exponent(family: &FamilySpec, z: Complex64, quad: &QuadratureConfig) -> Option<PExponent> {
    let pt = FamilyPoint::new(family.clone(), z).ok()?;
    match family {
        FamilySpec::FlatDiagonal { .. } => Some(PExponent::Finite(2.0)),
        FamilySpec::VariableExponent { .. } | FamilySpec::ArcsLp { .. } => {
            crate::families::family_space_at(&pt, 1, quad).ok().map(|s| s.p)
        }
        FamilySpec::ArcsWeighted { base, .. } => Some(base.p),
        FamilySpec::ReiteratedPair { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;
    use std::f64::consts::LN_2;

    fn cv(entries: &[f64]) -> Vec<Complex64> {
        entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    #[test]
    fn sweep_of_linf_l1_at_half_meets_the_equality_case() {
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            2,
        )
        .unwrap();
        let x = cv(&[1.0, 1.0]);
        let rows = scale_sweep(&pair, &x, &[0.5], 1e-4, 1e-11).unwrap();
        let r = &rows[0];
        // ‖x‖_θ = 2^θ, derivative 2^θ log 2, and ‖Ω_θ x‖_θ equals it.
        let expect_norm = 2.0f64.powf(0.5);
        let expect_slope = expect_norm * LN_2;
        assert!((r.norm - expect_norm).abs() < 1e-9);
        assert!((r.fd_right - expect_slope).abs() < 1e-3, "fd {}", r.fd_right);
        assert!((r.omega_norm - expect_slope).abs() < 1e-8, "omega {}", r.omega_norm);
        assert!(r.fd_left.abs() <= r.omega_norm + 1e-4);
        assert!(r.fd_right.abs() <= r.omega_norm + 1e-4);
        assert!(r.logconv_residual >= -1e-9);
    }

    #[test]
    fn sweep_of_constant_pair_is_flat() {
        let pair = PairScale::new(
            SpaceSpec::lp_value(2.0).unwrap(),
            SpaceSpec::lp_value(2.0).unwrap(),
            2,
        )
        .unwrap();
        let x = cv(&[3.0, 4.0]);
        let rows = scale_sweep(&pair, &x, &[0.3, 0.5, 0.7], 1e-4, 1e-11).unwrap();
        for r in rows {
            assert!((r.norm - 5.0).abs() < 1e-8);
            assert!(r.fd_left.abs() < 1e-5 && r.fd_right.abs() < 1e-5);
            assert!(r.omega_norm < 1e-7, "omega {}", r.omega_norm);
        }
    }

    #[test]
    fn sweep_of_weighted_pair_on_basis_vector() {
        let x0 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0, 1.0]).unwrap();
        let x1 = SpaceSpec::weighted(PExponent::Finite(2.0), vec![4.0, 1.0]).unwrap();
        let pair = PairScale::new(x0, x1, 2).unwrap();
        let x = cv(&[1.0, 0.0]);
        let s = 0.5;
        let rows = scale_sweep(&pair, &x, &[s], 1e-4, 1e-11).unwrap();
        let r = &rows[0];
        let expect_norm = 4.0f64.powf(s);
        let expect_slope = expect_norm * 4.0f64.ln();
        assert!((r.norm - expect_norm).abs() < 1e-9);
        assert!((r.omega_norm - expect_slope).abs() < 1e-7);
        assert!((r.fd_right - expect_slope).abs() < 2e-3);
        assert!(r.logconv_residual >= -1e-9);
    }

    #[test]
    fn sweep_rejects_grid_touching_the_margin() {
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            1,
        )
        .unwrap();
        assert!(scale_sweep(&pair, &cv(&[1.0]), &[1e-5], 1e-4, 1e-9).is_err());
        assert!(scale_sweep(&pair, &cv(&[1.0]), &[], 1e-4, 1e-9).is_err());
    }

    #[test]
    fn family_sweep_of_variable_exponent_grows_from_zero() {
        let alpha = crate::families::RationalFn::polynomial(&[2, 0, 1]).unwrap();
        let family = FamilySpec::VariableExponent { alpha };
        let x = cv(&[1.0; 16]);
        let zs = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.5, 0.0),
        ];
        let rows = family_sweep(&family, &x, &zs, &[1024], &QuadratureConfig::default(), 1e-10).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].omega_norm == 0.0, "Ω_0 should vanish");
        assert!(rows[1].omega_norm > 0.0 && rows[2].omega_norm > rows[1].omega_norm);
        assert!(rows[0].flat_ratio == 0.0);
        assert!(rows[2].flat_ratio > rows[1].flat_ratio);
    }

    #[test]
    fn family_sweep_of_flat_diagonal_k2_vanishes_at_origin() {
        let family = FamilySpec::FlatDiagonal {
            power: 2,
            diag: (0..32).map(|n| ((n + 1) as f64).ln()).collect(),
        };
        let x = cv(&[1.0; 32]);
        let rows = family_sweep(
            &family,
            &x,
            &[Complex64::new(0.0, 0.0)],
            &[],
            &QuadratureConfig::default(),
            1e-10,
        )
        .unwrap();
        assert_eq!(rows[0].omega_norm, 0.0);
    }
}
