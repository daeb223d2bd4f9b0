//! Finite-dimensional Köthe sequence-space norms: `ℓ_p`, weighted versions
//! `X(w)` with `‖x‖_w = ‖w·x‖_X`, and dual exponents.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An exponent in `[1, ∞]`. Infinity is a distinguished value, not a large
/// float, so `dual(1) = ∞` and the max-norm are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            if p.is_infinite() && p > 0.0 {
                return Ok(PExponent::Infinity);
            }
            return Err(Error::usage(format!("exponent must be finite or +inf, got {p}")));
        }
        if p < 1.0 {
            return Err(Error::usage(format!("exponent must satisfy p >= 1, got {p}")));
        }
        Ok(PExponent::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    /// Finite value, or `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            PExponent::Finite(p) => p,
            PExponent::Infinity => f64::INFINITY,
        }
    }

    /// Conjugate exponent: `1/p + 1/q = 1`.
    pub fn dual(self) -> PExponent {
        match self {
            PExponent::Infinity => PExponent::Finite(1.0),
            PExponent::Finite(p) if p == 1.0 => PExponent::Infinity,
            PExponent::Finite(p) if p == 2.0 => PExponent::Finite(2.0),
            PExponent::Finite(p) => PExponent::Finite(p / (p - 1.0)),
        }
    }
}

/// Description of a sequence-space norm: an exponent and an optional
/// strictly positive weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub p: PExponent,
    pub weight: Option<Vec<f64>>,
}

impl SpaceSpec {
    pub fn lp(p: PExponent) -> Self {
        SpaceSpec { p, weight: None }
    }

    pub fn lp_value(p: f64) -> Result<Self> {
        Ok(SpaceSpec::lp(PExponent::new(p)?))
    }

    pub fn weighted(p: PExponent, weight: Vec<f64>) -> Result<Self> {
        if weight.is_empty() {
            return Err(Error::usage("weight must be nonempty"));
        }
        for (i, &w) in weight.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::usage(format!(
                    "weight entries must be strictly positive and finite; entry {i} is {w}"
                )));
            }
        }
        Ok(SpaceSpec { p, weight: Some(weight) })
    }

    /// Log of the weight at coordinate `i` (0 for the unweighted case).
    pub(crate) fn log_weight(&self, i: usize) -> f64 {
        match &self.weight {
            Some(w) => w[i].ln(),
            None => 0.0,
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if let Some(w) = &self.weight {
            if w.len() < dim {
                return Err(Error::usage(format!(
                    "weight has {} entries but the vector has {}",
                    w.len(),
                    dim
                )));
            }
        }
        Ok(())
    }

    /// `‖x‖ = ‖w ⊙ x‖_p`. The weighted norm literally multiplies the complex
    /// entries by the weight and feeds the result to the unweighted
    /// computation, so `norm(X(w), x) = norm(X, w·x)` is the same
    /// floating-point path.
    pub fn norm(&self, x: &[Complex64]) -> Result<f64> {
        self.check_dim(x.len())?;
        for (i, v) in x.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(format!("entry {i} of the vector is {v}")));
            }
        }
        match &self.weight {
            Some(w) => {
                let wx: Vec<Complex64> = x.iter().zip(w).map(|(&v, &a)| v * a).collect();
                Ok(norm_of_moduli(self.p, wx.len(), |i| wx[i].norm()))
            }
            None => Ok(norm_of_moduli(self.p, x.len(), |i| x[i].norm())),
        }
    }

    /// Norm of a vector given by nonnegative moduli.
    pub fn norm_abs(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("entry {i} of the vector is {v}")));
            }
        }
        match &self.weight {
            Some(w) => {
                let wx: Vec<f64> = x.iter().zip(w).map(|(&v, &a)| v * a).collect();
                Ok(norm_of_moduli(self.p, wx.len(), |i| wx[i].abs()))
            }
            None => Ok(norm_of_moduli(self.p, x.len(), |i| x[i].abs())),
        }
    }
}

fn norm_of_moduli(p: PExponent, n: usize, moduli: impl Fn(usize) -> f64) -> f64 {
    match p {
        PExponent::Infinity => (0..n).map(&moduli).fold(0.0f64, f64::max),
        PExponent::Finite(p) if p == 1.0 => compensated_sum((0..n).map(&moduli)),
        PExponent::Finite(p) => {
            // Scale by the max to keep the powers in range for large p.
            let top = (0..n).map(&moduli).fold(0.0f64, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            let s = compensated_sum((0..n).map(|i| (moduli(i) / top).powf(p)));
            top * s.powf(1.0 / p)
        }
    }
}

/// Neumaier compensated summation. The unboundedness probes push dimensions
/// to 2^14 and beyond, where naive accumulation loses digits.
pub fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `q` with `1/p + 1/q = 1`.
pub fn dual_exponent(p: PExponent) -> PExponent {
    p.dual()
}

/// Entrywise product `a ⊙ x` of a real multiplier and a complex vector.
pub fn scale_entrywise(a: &[f64], x: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(a.len(), x.len());
    a.iter().zip(x).map(|(&a, &v)| v * a).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(entries: &[f64]) -> Vec<Complex64> {
        entries.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    #[test]
    fn l2_norm_of_3_4_is_5() {
        let spec = SpaceSpec::lp_value(2.0).unwrap();
        assert_eq!(spec.norm(&cv(&[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn weighted_l1_norm() {
        let spec = SpaceSpec::weighted(PExponent::Finite(1.0), vec![2.0, 1.0]).unwrap();
        assert_eq!(spec.norm(&cv(&[1.0, 1.0])).unwrap(), 3.0);
    }

    #[test]
    fn sup_norm_takes_the_max_modulus() {
        let spec = SpaceSpec::lp(PExponent::Infinity);
        assert_eq!(spec.norm(&cv(&[1.0, -2.0])).unwrap(), 2.0);
    }

    #[test]
    fn zero_vector_has_norm_zero() {
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            let spec = SpaceSpec::lp(PExponent::new(p).unwrap());
            assert_eq!(spec.norm(&cv(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
        }
    }

    #[test]
    fn dual_exponents() {
        assert_eq!(PExponent::Finite(2.0).dual(), PExponent::Finite(2.0));
        assert_eq!(PExponent::Finite(1.0).dual(), PExponent::Infinity);
        assert_eq!(PExponent::Infinity.dual(), PExponent::Finite(1.0));
        let q = PExponent::Finite(4.0).dual().value();
        assert!((q - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dual_is_an_involution() {
        for p in [1.0, 1.25, 4.0 / 3.0, 2.0, 3.0, 7.5] {
            let q = PExponent::Finite(p).dual().dual().value();
            assert!((q - p).abs() <= 1e-12 * p, "p={p} round-trips to {q}");
        }
    }

    #[test]
    fn weighted_norm_shares_the_floating_path() {
        let w = vec![0.3, 1.7, 2.4];
        let x = vec![
            Complex64::new(0.13, -0.7),
            Complex64::new(-1.9, 0.04),
            Complex64::new(0.0, 0.55),
        ];
        let weighted = SpaceSpec::weighted(PExponent::Finite(1.7), w.clone()).unwrap();
        let plain = SpaceSpec::lp(PExponent::Finite(1.7));
        let wx = scale_entrywise(&w, &x);
        assert_eq!(weighted.norm(&x).unwrap(), plain.norm(&wx).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_a_usage_error() {
        let spec = SpaceSpec::weighted(PExponent::Finite(2.0), vec![1.0]).unwrap();
        assert!(matches!(spec.norm(&cv(&[1.0, 2.0])), Err(Error::Usage(_))));
    }

    #[test]
    fn rejects_exponent_below_one() {
        assert!(PExponent::new(0.5).is_err());
    }
}
