//! Interpolation families on the unit circle: norms and derivations at
//! interior points, the three-arc linear system with its weight
//! reconstruction, level-one reiteration of a pair, and the counterexample
//! generators (variable-exponent and flat diagonal families).

use num_complex::Complex64;
use num_rational::Ratio;

use crate::calderon::{
    calderon_norm, multi_product_factorization, multi_product_norm, pair_derivation, PairScale,
};
use crate::complex_plane::{
    harmonic_measure, herglotz_derivative, herglotz_transform, psi_arc, Arc, ArcPartition,
    QuadratureConfig, TAU,
};
use crate::derivations::kalton_peck;
use crate::error::{Error, Result};
use crate::spaces::{PExponent, SpaceSpec};

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

/// A rational function of `z` with real (rational) coefficients, plus an
/// optional imaginary re-centering constant: `α(z) = P(z)/Q(z) − i·c`.
///
/// The descriptor is evaluated exactly (Horner) and differentiated
/// symbolically, so derivations built from it carry no quadrature noise.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    num: Vec<Ratio<i64>>,
    den: Vec<Ratio<i64>>,
    im_offset: f64,
}

fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_derivative(coeffs: &[Ratio<i64>]) -> Vec<Ratio<i64>> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * Ratio::new(k as i64, 1))
        .collect()
}

fn to_f64(coeffs: &[Ratio<i64>]) -> Vec<f64> {
    coeffs.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect()
}

/// Boundary-range validation sampling density.
const ALPHA_VALIDATION_SAMPLES: usize = 4096;

impl RationalFn {
    pub fn new(num: Vec<Ratio<i64>>, den: Vec<Ratio<i64>>) -> Result<Self> {
        Self::with_offset(num, den, 0.0)
    }

    pub fn with_offset(num: Vec<Ratio<i64>>, den: Vec<Ratio<i64>>, im_offset: f64) -> Result<Self> {
        if num.is_empty() || den.is_empty() || den.iter().all(|c| *c.numer() == 0) {
            return Err(Error::usage("rational descriptor needs nonzero numerator and denominator"));
        }
        let rf = RationalFn { num, den, im_offset };
        rf.validate_boundary_range(ALPHA_VALIDATION_SAMPLES)?;
        Ok(rf)
    }

    /// Polynomial `α(z) = Σ c_k z^k` from integer coefficients, constant
    /// term first.
    pub fn polynomial(coeffs: &[i64]) -> Result<Self> {
        RationalFn::new(
            coeffs.iter().map(|&c| Ratio::new(c, 1)).collect(),
            vec![Ratio::new(1, 1)],
        )
    }

    pub fn num(&self) -> &[Ratio<i64>] {
        &self.num
    }

    pub fn den(&self) -> &[Ratio<i64>] {
        &self.den
    }

    pub fn im_offset(&self) -> f64 {
        self.im_offset
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(&to_f64(&self.num), z) / poly_eval(&to_f64(&self.den), z)
            - Complex64::new(0.0, self.im_offset)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let n = to_f64(&self.num);
        let d = to_f64(&self.den);
        let dn = to_f64(&poly_derivative(&self.num));
        let dd = to_f64(&poly_derivative(&self.den));
        let q = poly_eval(&d, z);
        (poly_eval(&dn, z) * q - poly_eval(&n, z) * poly_eval(&dd, z)) / (q * q)
    }

    /// The descriptor `α(z) − i·Im α(z0)`, which turns `z0` into a real
    /// point of the new family. A new descriptor is produced; the original
    /// keeps its literal formula.
    pub fn recentered(&self, z0: Complex64) -> Result<RationalFn> {
        let shift = self.eval(z0).im;
        RationalFn::with_offset(self.num.clone(), self.den.clone(), self.im_offset + shift)
    }

    /// On the boundary the family exponent is `p(ω) = 1/Re(1/α(ω))`; the
    /// descriptor is admissible when that lies in `[1, ∞)`, i.e.
    /// `Re(1/α) ∈ (0, 1]`, and `α` has no poles on the circle.
    fn validate_boundary_range(&self, samples: usize) -> Result<()> {
        let nf = to_f64(&self.num);
        let df = to_f64(&self.den);
        for k in 0..samples {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / samples as f64);
            let q = poly_eval(&df, w);
            if q.norm() < 1e-12 {
                return Err(Error::usage(format!("denominator vanishes near the boundary point {w}")));
            }
            let a = poly_eval(&nf, w) / q - Complex64::new(0.0, self.im_offset);
            let inv_re = (1.0 / a).re;
            if !(inv_re > 0.0 && inv_re <= 1.0 + 1e-12) {
                return Err(Error::usage(format!(
                    "Re(1/α) = {inv_re} at boundary angle {}; the exponent p(ω) must lie in [1, ∞)",
                    TAU * k as f64 / samples as f64
                )));
            }
        }
        Ok(())
    }
}

/// Piecewise-constant boundary data on a partition; the descriptor handed
/// to reiterated families.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryAlpha {
    pub partition: ArcPartition,
    pub values: Vec<f64>,
}

impl BoundaryAlpha {
    pub fn new(partition: ArcPartition, values: Vec<f64>) -> Result<Self> {
        if values.len() != partition.n_arcs() {
            return Err(Error::usage(format!(
                "{} arcs but {} boundary values",
                partition.n_arcs(),
                values.len()
            )));
        }
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::usage(format!("boundary value {v} outside [0,1]")));
            }
        }
        Ok(BoundaryAlpha { partition, values })
    }

    pub fn constant(theta: f64) -> Result<Self> {
        BoundaryAlpha::new(ArcPartition::from_radians(&[0.0])?, vec![theta])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.values[self.partition.arc_index_of(t)]
    }

    pub fn breaks(&self) -> Vec<f64> {
        self.partition.cuts().iter().map(|c| c.radians()).collect()
    }
}

/// The family kinds the laboratory understands.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `X_ω = X(w_j)` for `ω ∈ A_j` over a common base space.
    ArcsWeighted {
        base: SpaceSpec,
        partition: ArcPartition,
        weights: Vec<Vec<f64>>,
    },
    /// `X_ω = ℓ_{p_j}` for `ω ∈ A_j`.
    ArcsLp {
        partition: ArcPartition,
        exponents: Vec<PExponent>,
    },
    /// `X_ω = ℓ_{p(ω)}` with `1/p(ω) = Re(1/α(ω))`.
    VariableExponent { alpha: RationalFn },
    /// Flat diagonal family `‖x‖_z = ‖e^{−z^k D} x‖_2`, `D = diag(d)`.
    FlatDiagonal { power: u32, diag: Vec<f64> },
    /// Reiterated pair `X_ω = (X_0, X_1)_{α(ω)}`.
    ReiteratedPair {
        pair: PairScale,
        boundary_alpha: BoundaryAlpha,
    },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::ArcsWeighted { base, partition, weights } => {
                if weights.len() != partition.n_arcs() {
                    return Err(Error::usage(format!(
                        "{} arcs but {} weight vectors",
                        partition.n_arcs(),
                        weights.len()
                    )));
                }
                let dim = weights.first().map(Vec::len).unwrap_or(0);
                if dim == 0 {
                    return Err(Error::usage("weights must be nonempty"));
                }
                for (j, w) in weights.iter().enumerate() {
                    if w.len() != dim {
                        return Err(Error::usage(format!(
                            "weight {j} has {} entries, expected {dim}",
                            w.len()
                        )));
                    }
                    for (i, &v) in w.iter().enumerate() {
                        if !(v > 0.0 && v.is_finite()) {
                            return Err(Error::usage(format!("weight {j} entry {i} is {v}")));
                        }
                    }
                }
                if let Some(bw) = &base.weight {
                    if bw.len() != dim {
                        return Err(Error::usage("base weight dimension mismatch"));
                    }
                }
                Ok(())
            }
            FamilySpec::ArcsLp { partition, exponents } => {
                if exponents.len() != partition.n_arcs() {
                    return Err(Error::usage(format!(
                        "{} arcs but {} exponents",
                        partition.n_arcs(),
                        exponents.len()
                    )));
                }
                Ok(())
            }
            FamilySpec::VariableExponent { .. } => Ok(()),
            FamilySpec::FlatDiagonal { power, diag } => {
                if *power == 0 {
                    return Err(Error::usage("diagonal power must be positive"));
                }
                if diag.is_empty() {
                    return Err(Error::usage("diagonal must be nonempty"));
                }
                for (i, &d) in diag.iter().enumerate() {
                    if !d.is_finite() {
                        return Err(Error::usage(format!("diagonal entry {i} is {d}")));
                    }
                }
                Ok(())
            }
            FamilySpec::ReiteratedPair { .. } => Ok(()),
        }
    }

    /// Ambient dimension cap, where the descriptor imposes one. Probes may
    /// use any dimension up to this; the descriptor itself is never grown.
    pub fn dim_cap(&self) -> Option<usize> {
        match self {
            FamilySpec::ArcsWeighted { weights, .. } => weights.first().map(Vec::len),
            FamilySpec::FlatDiagonal { diag, .. } => Some(diag.len()),
            FamilySpec::ReiteratedPair { pair, .. } => Some(pair.dim),
            _ => None,
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if let Some(cap) = self.dim_cap() {
            if dim > cap {
                return Err(Error::usage(format!(
                    "vector dimension {dim} exceeds the family's descriptor dimension {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// A family together with an interior evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint {
    pub family: FamilySpec,
    pub z0: Complex64,
}

impl FamilyPoint {
    pub fn new(family: FamilySpec, z0: Complex64) -> Result<Self> {
        family.validate()?;
        if z0.norm() >= 1.0 {
            return Err(Error::domain(format!("family evaluation point |{z0}| >= 1")));
        }
        Ok(FamilyPoint { family, z0 })
    }
}

// ---------------------------------------------------------------------------
// Norms and derivations at interior points
// ---------------------------------------------------------------------------

/// Harmonic measures of the partition arcs seen from `z0`, renormalized to
/// sum to exactly one (they do up to quadrature rounding).
fn arc_measures(partition: &ArcPartition, z0: Complex64, quad: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut mu: Vec<f64> = partition
        .arcs()
        .iter()
        .map(|a| harmonic_measure(z0, a, quad))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = mu.iter().sum();
    for m in mu.iter_mut() {
        *m /= total;
    }
    Ok(mu)
}

/// The variable exponent at a real point of the descriptor:
/// `p(z0) = 1/Re(1/α(z0))`, defined only where `α(z0)` is real.
fn variable_exponent_at(alpha: &RationalFn, z0: Complex64) -> Result<f64> {
    let a = alpha.eval(z0);
    if a.im.abs() > 1e-10 * (1.0 + a.norm()) {
        return Err(Error::UnsupportedPoint(format!(
            "α({z0}) = {a} is not real; re-center the descriptor to evaluate here"
        )));
    }
    let p = 1.0 / (1.0 / a).re;
    if !(p >= 1.0 - 1e-12 && p.is_finite()) {
        return Err(Error::UnsupportedPoint(format!("exponent p({z0}) = {p} outside [1, ∞)")));
    }
    Ok(p.max(1.0))
}

/// The interpolated space at `z0` as a concrete sequence-space norm, for
/// the kinds that admit one in closed form. For `ArcsLp` this is the
/// `ℓ_r` identification `1/r = Σ μ_j/p_j` (the closed-form side; the
/// optimizer side is `family_norm`).
pub fn family_space_at(pt: &FamilyPoint, dim: usize, quad: &QuadratureConfig) -> Result<SpaceSpec> {
    pt.family.check_dim(dim)?;
    match &pt.family {
        FamilySpec::ArcsWeighted { base, partition, weights } => {
            let mu = arc_measures(partition, pt.z0, quad)?;
            let combined: Vec<f64> = (0..dim)
                .map(|i| {
                    let lw: f64 = mu.iter().zip(weights).map(|(&m, w)| m * w[i].ln()).sum();
                    let basew = base.weight.as_ref().map(|w| w[i]).unwrap_or(1.0);
                    basew * lw.exp()
                })
                .collect();
            SpaceSpec::weighted(base.p, combined)
        }
        FamilySpec::ArcsLp { partition, exponents } => {
            let mu = arc_measures(partition, pt.z0, quad)?;
            let inv: f64 = mu
                .iter()
                .zip(exponents)
                .map(|(&m, &p)| match p {
                    PExponent::Infinity => 0.0,
                    PExponent::Finite(p) => m / p,
                })
                .sum();
            Ok(SpaceSpec::lp(if inv == 0.0 {
                PExponent::Infinity
            } else {
                PExponent::new(1.0 / inv)?
            }))
        }
        FamilySpec::VariableExponent { alpha } => {
            let p = variable_exponent_at(alpha, pt.z0)?;
            Ok(SpaceSpec::lp(PExponent::new(p)?))
        }
        FamilySpec::FlatDiagonal { power, diag } => {
            let zk = pt.z0.powu(*power);
            let w: Vec<f64> = diag[..dim].iter().map(|&d| (-(zk.re) * d).exp()).collect();
            SpaceSpec::weighted(PExponent::Finite(2.0), w)
        }
        FamilySpec::ReiteratedPair { .. } => Err(Error::usage(
            "reiterated families have no standalone sequence-space descriptor; use family_norm",
        )),
    }
}

/// `‖x‖_{z0}` for the family at the interior point.
pub fn family_norm(pt: &FamilyPoint, x: &[Complex64], quad: &QuadratureConfig, tol: f64) -> Result<f64> {
    pt.family.check_dim(x.len())?;
    match &pt.family {
        FamilySpec::ArcsWeighted { .. } | FamilySpec::VariableExponent { .. } => {
            family_space_at(pt, x.len(), quad)?.norm(x)
        }
        FamilySpec::ArcsLp { partition, exponents } => {
            let mu = arc_measures(partition, pt.z0, quad)?;
            let specs: Vec<SpaceSpec> = exponents.iter().map(|&p| SpaceSpec::lp(p)).collect();
            multi_product_norm(&specs, &mu, x, tol)
        }
        FamilySpec::FlatDiagonal { power, diag } => {
            let zk = pt.z0.powu(*power);
            let scaled: Vec<Complex64> =
                x.iter().zip(diag).map(|(&v, &d)| (-zk * d).exp() * v).collect();
            SpaceSpec::lp(PExponent::Finite(2.0)).norm(&scaled)
        }
        FamilySpec::ReiteratedPair { pair, boundary_alpha } => {
            let (az, _) = reiteration_point(boundary_alpha, pt.z0, quad)?;
            calderon_norm(pair, az, x, tol)
        }
    }
}

/// The derivation `Ω_{z0}(x)` of the family at the interior point.
pub fn family_derivation(
    pt: &FamilyPoint,
    x: &[Complex64],
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<Vec<Complex64>> {
    pt.family.check_dim(x.len())?;
    match &pt.family {
        FamilySpec::ArcsWeighted { partition, weights, .. } => {
            // Ω_{z0} = −(Σ_j ψ_j'(z0) log w_j) ⊙ x with Re ψ_j = χ_{A_j},
            // Im ψ_j(z0) = 0.
            let dpsi = psi_derivatives(partition, pt.z0, quad)?;
            Ok(x.iter()
                .enumerate()
                .map(|(i, &v)| {
                    let mut m = Complex64::new(0.0, 0.0);
                    for (j, w) in weights.iter().enumerate() {
                        m -= dpsi[j] * w[i].ln();
                    }
                    v * m
                })
                .collect())
        }
        FamilySpec::ArcsLp { partition, exponents } => {
            // Derivation of the n-block factorization: the extremal
            // B(z) = sgn(x)·∏ |f_j|^{ψ_j(z)} differentiates to
            // x ⊙ Σ_j ψ_j'(z0) log |f_j| with the equal-norm factors.
            if x.iter().all(|v| v.norm() == 0.0) {
                return Ok(vec![Complex64::new(0.0, 0.0); x.len()]);
            }
            let mu = arc_measures(partition, pt.z0, quad)?;
            let specs: Vec<SpaceSpec> = exponents.iter().map(|&p| SpaceSpec::lp(p)).collect();
            let factors = multi_product_factorization(&specs, &mu, x, tol)?;
            let dpsi = psi_derivatives(partition, pt.z0, quad)?;
            Ok(x.iter()
                .enumerate()
                .map(|(i, &v)| {
                    if v.norm() == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let mut m = Complex64::new(0.0, 0.0);
                    for (j, d) in dpsi.iter().enumerate() {
                        m += d * factors.log_moduli[j][i];
                    }
                    v * m
                })
                .collect())
        }
        FamilySpec::VariableExponent { alpha } => {
            let p = variable_exponent_at(alpha, pt.z0)?;
            let scale = -alpha.derivative(pt.z0) / alpha.eval(pt.z0);
            kalton_peck(p, scale, x)
        }
        FamilySpec::FlatDiagonal { power, diag } => {
            let k = *power;
            let factor = pt.z0.powu(k - 1) * k as f64;
            Ok(x.iter().zip(diag).map(|(&v, &d)| v * factor * d).collect())
        }
        FamilySpec::ReiteratedPair { pair, boundary_alpha } => {
            reiteration_derivation(pair, boundary_alpha, pt.z0, x, quad, tol)
        }
    }
}

/// `ψ_j'(z0)` for every arc of the partition.
fn psi_derivatives(
    partition: &ArcPartition,
    z0: Complex64,
    quad: &QuadratureConfig,
) -> Result<Vec<Complex64>> {
    partition
        .arcs()
        .iter()
        .map(|a| psi_arc(a, z0, quad)?.derivative(z0))
        .collect()
}

// ---------------------------------------------------------------------------
// The three-arc system
// ---------------------------------------------------------------------------

/// Data of the three-arc linear system: harmonic measures `α_j` of the arcs
/// at the origin, the moments `β_j = (1/2π)∫_{A_j} e^{-it} dt`, the
/// determinant of the real 3×3 system, and its two canonical solutions
/// `Σ a_j α_j = 0, Σ a_j β_j = −1` and `Σ b_j α_j = 0, Σ b_j β_j = −i`.
#[derive(Debug, Clone)]
pub struct ThreeArcSystem {
    pub alpha: [f64; 3],
    pub beta: [Complex64; 3],
    pub det: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

pub fn three_arc_coefficients(partition: &ArcPartition, quad: &QuadratureConfig) -> Result<ThreeArcSystem> {
    if partition.n_arcs() != 3 {
        return Err(Error::usage(format!(
            "the reconstruction system needs exactly 3 arcs, got {}",
            partition.n_arcs()
        )));
    }
    let arcs = partition.arcs();
    let mut alpha = [0.0f64; 3];
    let mut beta = [Complex64::new(0.0, 0.0); 3];
    for (j, arc) in arcs.iter().enumerate() {
        alpha[j] = harmonic_measure(Complex64::new(0.0, 0.0), arc, quad)?;
        beta[j] = arc_exponential_moment(arc);
    }

    // Rows: (α_j), (Re β_j), (Im β_j).
    let m = [
        [alpha[0], alpha[1], alpha[2]],
        [beta[0].re, beta[1].re, beta[2].re],
        [beta[0].im, beta[1].im, beta[2].im],
    ];
    let det = det3(&m);
    if det.abs() < 1e-12 {
        return Err(Error::SingularSystem(format!(
            "three-arc system determinant {det:.3e}; two cut angles (nearly) coincide"
        )));
    }
    let a = solve3(&m, [0.0, -1.0, 0.0], det);
    let b = solve3(&m, [0.0, 0.0, -1.0], det);
    Ok(ThreeArcSystem { alpha, beta, det, a, b })
}

/// `(1/2π) ∫_arc e^{-it} dt = i (e^{-ib} − e^{-ia}) / 2π`, closed form.
pub fn arc_exponential_moment(arc: &Arc) -> Complex64 {
    let (a, b) = arc.interval();
    let i = Complex64::new(0.0, 1.0);
    i * ((-i * b).exp() - (-i * a).exp()) / TAU
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn solve3(m: &[[f64; 3]; 3], rhs: [f64; 3], det: f64) -> [f64; 3] {
    let mut out = [0.0f64; 3];
    for col in 0..3 {
        let mut mm = *m;
        for row in 0..3 {
            mm[row][col] = rhs[row];
        }
        out[col] = det3(&mm) / det;
    }
    out
}

/// The sine-product the determinant is proportional to:
/// `sin((θ0−θ1)/2) sin((θ2−θ1)/2) sin((θ2−θ0)/2)`; it vanishes exactly when
/// two cut angles coincide. The numeric determinant equals this divided
/// by π².
pub fn three_arc_sine_product(partition: &ArcPartition) -> Result<f64> {
    if partition.n_arcs() != 3 {
        return Err(Error::usage("sine product needs exactly 3 cuts"));
    }
    let t: Vec<f64> = partition.cuts().iter().map(|c| c.radians()).collect();
    Ok(((t[0] - t[1]) / 2.0).sin() * ((t[2] - t[1]) / 2.0).sin() * ((t[2] - t[0]) / 2.0).sin())
}

/// Build the three weights `w_j = exp((a_j f₁ + b_j f₂)/2)` whose
/// arcs-weighted family over `X` reproduces `X` at the origin with
/// derivation `Ω_0(x) = f ⊙ x` (`f = f₁ + i f₂`).
///
/// The canonical system solves `Σ a_j β_j = −1`, but the analytic
/// completions satisfy `ψ_j'(0) = 2β_j` (Schwarz formula), so the exponent
/// carries the factor `1/2` to land the derivation exactly on `f`.
pub fn weights_from_multiplier(
    f: &[Complex64],
    partition: &ArcPartition,
    quad: &QuadratureConfig,
) -> Result<[Vec<f64>; 3]> {
    for (i, v) in f.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(format!("multiplier entry {i} is {v}")));
        }
    }
    let sys = three_arc_coefficients(partition, quad)?;
    let mut weights: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for j in 0..3 {
        weights[j] = f
            .iter()
            .map(|v| (0.5 * (sys.a[j] * v.re + sys.b[j] * v.im)).exp())
            .collect();
    }
    Ok(weights)
}

// ---------------------------------------------------------------------------
// Reiteration
// ---------------------------------------------------------------------------

/// Harmonic extension value `α(z)` and conformal derivative `w'(z)` of the
/// boundary exponent data.
fn reiteration_point(
    boundary_alpha: &BoundaryAlpha,
    z: Complex64,
    quad: &QuadratureConfig,
) -> Result<(f64, Complex64)> {
    let breaks = boundary_alpha.breaks();
    let f = |t: f64| boundary_alpha.eval(t);
    let w = herglotz_transform(&f, &breaks, z, quad)?;
    let dw = herglotz_derivative(&f, &breaks, z, quad)?;
    let az = w.re;
    if !(az > 1e-9 && az < 1.0 - 1e-9) {
        return Err(Error::UnsupportedPoint(format!(
            "harmonic extension α({z}) = {az} touches an endpoint of [0,1]"
        )));
    }
    Ok((az, dw))
}

/// The level-one reiteration derivation `Φ_z = w'(z) · Ω_{α(z)}` of the
/// family `(X_0, X_1)_{α(ω)}`.
pub fn reiteration_derivation(
    pair: &PairScale,
    boundary_alpha: &BoundaryAlpha,
    z: Complex64,
    x: &[Complex64],
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<Vec<Complex64>> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!("|{z}| >= 1")));
    }
    let (az, dw) = reiteration_point(boundary_alpha, z, quad)?;
    if x.iter().all(|v| v.norm() == 0.0) {
        return Ok(vec![Complex64::new(0.0, 0.0); x.len()]);
    }
    let d = pair_derivation(pair, az, x, tol)?;
    Ok(d.into_iter().map(|v| v * dw).collect())
}

/// Convenience: the multiplier vector of a multiplication-type family
/// derivation, recovered on basis vectors.
pub fn derivation_multiplier(
    pt: &FamilyPoint,
    dim: usize,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[i] = Complex64::new(1.0, 0.0);
        out.push(family_derivation(pt, &e, quad, tol)?[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cv(entries: &[f64]) -> Vec<Complex64> {
        entries.iter().map(|&r| c(r, 0.0)).collect()
    }

    fn qc() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn arcs_weighted_thirds_norm_at_origin() {
        let family = FamilySpec::ArcsWeighted {
            base: SpaceSpec::lp_value(2.0).unwrap(),
            partition: ArcPartition::equal(3).unwrap(),
            weights: vec![vec![E, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]],
        };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        let v = family_norm(&pt, &cv(&[1.0, 0.0]), &qc(), 1e-10).unwrap();
        assert!((v - E.powf(1.0 / 3.0)).abs() < 1e-10, "norm {v}");
    }

    #[test]
    fn flat_diagonal_at_origin_is_l2() {
        let family = FamilySpec::FlatDiagonal { power: 1, diag: vec![0.3, 1.8, 4.0] };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        let x = cv(&[3.0, 0.0, 4.0]);
        let v = family_norm(&pt, &x, &qc(), 1e-10).unwrap();
        assert_eq!(v, 5.0);
    }

    #[test]
    fn variable_exponent_at_origin_is_l2() {
        let alpha = RationalFn::polynomial(&[2, 0, 1]).unwrap(); // z^2 + 2
        let family = FamilySpec::VariableExponent { alpha };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        let v = family_norm(&pt, &cv(&[3.0, 4.0]), &qc(), 1e-10).unwrap();
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn variable_exponent_derivation_vanishes_at_origin() {
        let alpha = RationalFn::polynomial(&[2, 0, 1]).unwrap();
        let family = FamilySpec::VariableExponent { alpha };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        let d = family_derivation(&pt, &cv(&[1.0, 1.0]), &qc(), 1e-10).unwrap();
        for v in d {
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn variable_exponent_derivation_at_half() {
        // α(z) = z²+2: α(1/2) = 2.25, α'(1/2) = 1, so the scale is −1/2.25
        // and the map is that multiple of Kalton–Peck on ℓ_{2.25}.
        let alpha = RationalFn::polynomial(&[2, 0, 1]).unwrap();
        let family = FamilySpec::VariableExponent { alpha };
        let pt = FamilyPoint::new(family, c(0.5, 0.0)).unwrap();
        let x = cv(&[1.0, 1.0, 1.0, 1.0]);
        let d = family_derivation(&pt, &x, &qc(), 1e-10).unwrap();
        let expect = kalton_peck(2.25, c(-1.0 / 2.25, 0.0), &x).unwrap();
        for i in 0..4 {
            assert!((d[i] - expect[i]).norm() < 1e-15, "{} vs {}", d[i], expect[i]);
        }
    }

    #[test]
    fn variable_exponent_rejects_complex_alpha_points() {
        let alpha = RationalFn::polynomial(&[2, 0, 1]).unwrap();
        let family = FamilySpec::VariableExponent { alpha };
        let pt = FamilyPoint::new(family, c(0.3, 0.4)).unwrap();
        let r = family_norm(&pt, &cv(&[1.0, 1.0]), &qc(), 1e-10);
        assert!(matches!(r, Err(Error::UnsupportedPoint(_))));
    }

    #[test]
    fn recentering_makes_a_point_evaluable() {
        let alpha = RationalFn::polynomial(&[2, 0, 1]).unwrap();
        let z0 = c(0.3, 0.4);
        let re = alpha.recentered(z0).unwrap();
        assert!(re.eval(z0).im.abs() < 1e-15);
        let family = FamilySpec::VariableExponent { alpha: re };
        let pt = FamilyPoint::new(family, z0).unwrap();
        assert!(family_norm(&pt, &cv(&[1.0, 1.0]), &qc(), 1e-10).is_ok());
    }

    #[test]
    fn variable_exponent_range_validation_rejects_bad_descriptors() {
        // α(z) = z has zeros/poles of Re(1/α) on the boundary.
        assert!(RationalFn::polynomial(&[0, 1]).is_err());
        // α(z) = 1/2 gives p = 1/2 < 1.
        assert!(RationalFn::new(vec![Ratio::new(1, 2)], vec![Ratio::new(1, 1)]).is_err());
    }

    #[test]
    fn flat_diagonal_derivation_is_kzd() {
        let diag = vec![0.0, LN_2, 1.5];
        let family = FamilySpec::FlatDiagonal { power: 2, diag: diag.clone() };
        let z0 = c(0.3, -0.2);
        let pt = FamilyPoint::new(family, z0).unwrap();
        let x = cv(&[1.0, 1.0, 1.0]);
        let d = family_derivation(&pt, &x, &qc(), 1e-10).unwrap();
        for i in 0..3 {
            let expect = z0 * 2.0 * diag[i];
            assert!((d[i] - expect).norm() < 1e-15);
        }
        // At the origin the degree-2 family has zero derivation.
        let pt0 = FamilyPoint::new(
            FamilySpec::FlatDiagonal { power: 2, diag },
            c(0.0, 0.0),
        )
        .unwrap();
        let d0 = family_derivation(&pt0, &x, &qc(), 1e-10).unwrap();
        assert!(d0.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn flat_diagonal_k1_derivation_is_z_independent() {
        let diag: Vec<f64> = (0..8).map(|n| ((n + 2) as f64).ln()).collect();
        let family = FamilySpec::FlatDiagonal { power: 1, diag: diag.clone() };
        let x = cv(&[1.0; 8]);
        let mut previous: Option<Vec<Complex64>> = None;
        for &z in &[c(0.0, 0.0), c(0.5, 0.1), c(-0.3, -0.6)] {
            let pt = FamilyPoint::new(family.clone(), z).unwrap();
            let d = family_derivation(&pt, &x, &qc(), 1e-10).unwrap();
            for i in 0..8 {
                assert!((d[i] - c(diag[i], 0.0)).norm() < 1e-15);
            }
            if let Some(p) = &previous {
                assert_eq!(p, &d);
            }
            previous = Some(d);
        }
    }

    #[test]
    fn three_arc_coefficients_on_equal_thirds() {
        let part = ArcPartition::equal(3).unwrap();
        let sys = three_arc_coefficients(&part, &qc()).unwrap();
        for a in sys.alpha {
            assert!((a - 1.0 / 3.0).abs() < 1e-12);
        }
        // β_0 for A_0 = [0, 2π/3): (√3/2 − 1.5 i)/(2π).
        let expect = c(3.0f64.sqrt() / 2.0, -1.5) / TAU;
        assert!((sys.beta[0] - expect).norm() < 1e-15, "{} vs {expect}", sys.beta[0]);
        // Determinant matches the sine product over π².
        let sp = three_arc_sine_product(&part).unwrap();
        assert!((sp.abs() - 3.0 * 3.0f64.sqrt() / 8.0).abs() < 1e-15);
        assert!((sys.det - sp / (PI * PI)).abs() < 1e-12, "det {} vs {}", sys.det, sp / (PI * PI));
        // The canonical solutions satisfy their defining systems.
        let sa: f64 = (0..3).map(|j| sys.a[j] * sys.alpha[j]).sum();
        let sb: Complex64 = (0..3).map(|j| sys.beta[j] * sys.a[j]).sum();
        assert!(sa.abs() < 1e-12 && (sb - c(-1.0, 0.0)).norm() < 1e-12);
        let ta: f64 = (0..3).map(|j| sys.b[j] * sys.alpha[j]).sum();
        let tb: Complex64 = (0..3).map(|j| sys.beta[j] * sys.b[j]).sum();
        assert!(ta.abs() < 1e-12 && (tb - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn three_arc_determinant_matches_sine_product_on_random_partitions() {
        let partitions = [
            [0.2, 1.1, 4.9],
            [0.0, 0.4, 0.9],
            [1.0, 2.0, 3.0],
            [0.7, 3.6, 5.9],
        ];
        for cuts in partitions {
            let part = ArcPartition::from_radians(&cuts).unwrap();
            let sys = three_arc_coefficients(&part, &qc()).unwrap();
            let sp = three_arc_sine_product(&part).unwrap();
            assert!(
                (sys.det - sp / (PI * PI)).abs() < 1e-10,
                "cuts {cuts:?}: det {} vs {}",
                sys.det,
                sp / (PI * PI)
            );
        }
    }

    #[test]
    fn near_degenerate_partition_is_singular() {
        let part = ArcPartition::from_radians(&[0.0, 1e-12, 3.0]).unwrap();
        assert!(matches!(
            three_arc_coefficients(&part, &qc()),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn zero_multiplier_gives_unit_weights() {
        let part = ArcPartition::equal(3).unwrap();
        let w = weights_from_multiplier(&cv(&[0.0, 0.0]), &part, &qc()).unwrap();
        for wj in &w {
            for &v in wj {
                assert!((v - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn multiplier_roundtrip_on_equal_thirds() {
        let part = ArcPartition::equal(3).unwrap();
        let f = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let w = weights_from_multiplier(&f, &part, &qc()).unwrap();
        let family = FamilySpec::ArcsWeighted {
            base: SpaceSpec::lp_value(2.0).unwrap(),
            partition: part,
            weights: w.to_vec(),
        };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        // Norm contract: the combined weight is 1, so the family norm at 0
        // is the base norm.
        let x = cv(&[0.7, -0.4]);
        let v = family_norm(&pt, &x, &qc(), 1e-10).unwrap();
        let base = SpaceSpec::lp_value(2.0).unwrap().norm(&x).unwrap();
        assert!((v - base).abs() < 1e-8, "{v} vs {base}");
        // Derivation contract: Ω_0 = multiplication by f.
        let e1 = cv(&[1.0, 0.0]);
        let d = family_derivation(&pt, &e1, &qc(), 1e-10).unwrap();
        assert!((d[0] - f[0]).norm() < 1e-6, "Ω_0 e1 = {}, want {}", d[0], f[0]);
        assert!(d[1].norm() < 1e-12);
    }

    #[test]
    fn reiteration_of_constant_alpha_has_zero_derivation() {
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            2,
        )
        .unwrap();
        let ba = BoundaryAlpha::constant(0.4).unwrap();
        let d = reiteration_derivation(&pair, &ba, c(0.2, 0.3), &cv(&[1.0, 1.0]), &qc(), 1e-10).unwrap();
        for v in d {
            assert!(v.norm() < 1e-10, "derivation {v}");
        }
    }

    #[test]
    fn reiteration_of_alternating_quarters_vanishes_at_origin() {
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            2,
        )
        .unwrap();
        let part = ArcPartition::from_radians(&[0.0, PI / 2.0, PI, 1.5 * PI]).unwrap();
        let ba = BoundaryAlpha::new(part, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let d = reiteration_derivation(&pair, &ba, c(0.0, 0.0), &cv(&[1.0, 1.0]), &qc(), 1e-10).unwrap();
        for v in d {
            assert!(v.norm() < 1e-10, "derivation {v}");
        }
    }

    #[test]
    fn reiteration_of_half_circle_indicator_at_origin() {
        // w'(0) = −2i/π times the pair derivation at θ = 1/2.
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            2,
        )
        .unwrap();
        let part = ArcPartition::from_radians(&[0.0, PI]).unwrap();
        let ba = BoundaryAlpha::new(part, vec![1.0, 0.0]).unwrap();
        let x = cv(&[1.0, 1.0]);
        let d = reiteration_derivation(&pair, &ba, c(0.0, 0.0), &x, &qc(), 1e-10).unwrap();
        let base = pair_derivation(&pair, 0.5, &x, 1e-11).unwrap();
        let w = c(0.0, -2.0 / PI);
        for i in 0..2 {
            assert!((d[i] - base[i] * w).norm() < 1e-9, "{} vs {}", d[i], base[i] * w);
        }
    }

    #[test]
    fn reiteration_rejects_endpoint_values() {
        let pair = PairScale::new(
            SpaceSpec::lp(PExponent::Infinity),
            SpaceSpec::lp_value(1.0).unwrap(),
            1,
        )
        .unwrap();
        let ba = BoundaryAlpha::constant(1.0).unwrap();
        let r = reiteration_derivation(&pair, &ba, c(0.0, 0.0), &cv(&[1.0]), &qc(), 1e-10);
        assert!(matches!(r, Err(Error::UnsupportedPoint(_))));
    }

    #[test]
    fn family_point_rejects_boundary_z() {
        let family = FamilySpec::FlatDiagonal { power: 1, diag: vec![1.0] };
        assert!(FamilyPoint::new(family, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let family = FamilySpec::FlatDiagonal { power: 1, diag: vec![1.0, 2.0] };
        let pt = FamilyPoint::new(family, c(0.0, 0.0)).unwrap();
        assert!(family_norm(&pt, &cv(&[1.0, 1.0, 1.0]), &qc(), 1e-10).is_err());
    }
}
