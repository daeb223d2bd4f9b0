//! Conformal maps, pseudo-hyperbolic distance, Poisson/Herglotz kernels,
//! harmonic measure and analytic completions of arc indicators.
//!
//! Angles live in `[0, 2π)`; arcs are half-open `[start, end)` traversed
//! counterclockwise. Arc integrals use composite Gauss–Legendre panels that
//! are split at arc endpoints (so indicator discontinuities never fall
//! inside a panel) and graded toward the evaluation point `z`, which keeps
//! the Poisson kernel resolved even for `|z|` close to 1.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc as StdArc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * PI;

// ---------------------------------------------------------------------------
// Domain points
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Disk,
    Strip,
}

/// A point of the open unit disk or the open unit strip `0 < Re z < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    pub value: Complex64,
    pub domain: Domain,
}

impl DomainPoint {
    pub fn disk(value: Complex64) -> Result<Self> {
        if value.norm() >= 1.0 {
            return Err(Error::domain(format!("|{value}| >= 1 is not inside the disk")));
        }
        Ok(DomainPoint { value, domain: Domain::Disk })
    }

    pub fn strip(value: Complex64) -> Result<Self> {
        if value.re <= 0.0 || value.re >= 1.0 {
            return Err(Error::domain(format!("Re {value} outside (0,1) is not inside the strip")));
        }
        Ok(DomainPoint { value, domain: Domain::Strip })
    }
}

// ---------------------------------------------------------------------------
// Arcs and partitions
// ---------------------------------------------------------------------------

/// A cut angle, kept as an exact fraction of the full turn when possible so
/// partitions like equal thirds serialize exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutAngle {
    /// `Turns(r)` is the angle `2π·r` with `r ∈ [0, 1)`.
    Turns(Ratio<i64>),
    Radians(f64),
}

impl CutAngle {
    pub fn turns(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::usage("zero denominator in cut angle"));
        }
        let r = Ratio::new(num, den);
        if r < Ratio::new(0, 1) || r >= Ratio::new(1, 1) {
            return Err(Error::usage(format!("cut angle {r} of a turn outside [0,1)")));
        }
        Ok(CutAngle::Turns(r))
    }

    pub fn radians(&self) -> f64 {
        match self {
            CutAngle::Turns(r) => TAU * (*r.numer() as f64) / (*r.denom() as f64),
            CutAngle::Radians(t) => *t,
        }
    }
}

/// A half-open arc `[start, end)` of the unit circle, traversed
/// counterclockwise; `len ∈ (0, 2π]` (the full circle arises as the single
/// arc of a one-cut partition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: f64,
    len: f64,
}

impl Arc {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&start) || !(0.0..TAU).contains(&end) {
            return Err(Error::usage(format!("arc angles must lie in [0,2π), got [{start},{end})")));
        }
        if start == end {
            return Err(Error::usage("arc endpoints must differ"));
        }
        let len = (end - start).rem_euclid(TAU);
        Ok(Arc { start, len })
    }

    pub fn full(start: f64) -> Self {
        Arc { start, len: TAU }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    /// End angle reduced to `[0, 2π)`.
    pub fn end(&self) -> f64 {
        (self.start + self.len).rem_euclid(TAU)
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn contains(&self, theta: f64) -> bool {
        (theta - self.start).rem_euclid(TAU) < self.len
    }

    /// Parameter interval `[start, start+len]`; integrands of `e^{it}` are
    /// periodic so the raw interval is the right thing to integrate over.
    pub fn interval(&self) -> (f64, f64) {
        (self.start, self.start + self.len)
    }
}

/// Ordered cut angles `0 ≤ θ_0 < … < θ_{n-1} < 2π` partitioning the circle
/// into `n` half-open arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcPartition {
    cuts: Vec<CutAngle>,
}

impl ArcPartition {
    pub fn new(cuts: Vec<CutAngle>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::usage("a partition needs at least one cut"));
        }
        let rad: Vec<f64> = cuts.iter().map(CutAngle::radians).collect();
        for (i, &t) in rad.iter().enumerate() {
            if !(0.0..TAU).contains(&t) {
                return Err(Error::usage(format!("cut {i} = {t} outside [0, 2π)")));
            }
            if i > 0 && t <= rad[i - 1] {
                return Err(Error::usage(format!(
                    "cuts must be strictly increasing, cut {i} = {t} after {}",
                    rad[i - 1]
                )));
            }
        }
        Ok(ArcPartition { cuts })
    }

    pub fn from_radians(cuts: &[f64]) -> Result<Self> {
        ArcPartition::new(cuts.iter().map(|&t| CutAngle::Radians(t)).collect())
    }

    /// `n` equal arcs starting at 0.
    pub fn equal(n: usize) -> Result<Self> {
        let cuts = (0..n)
            .map(|k| CutAngle::turns(k as i64, n as i64))
            .collect::<Result<Vec<_>>>()?;
        ArcPartition::new(cuts)
    }

    pub fn cuts(&self) -> &[CutAngle] {
        &self.cuts
    }

    pub fn n_arcs(&self) -> usize {
        self.cuts.len()
    }

    pub fn arcs(&self) -> Vec<Arc> {
        let n = self.cuts.len();
        if n == 1 {
            return vec![Arc::full(self.cuts[0].radians())];
        }
        let rad: Vec<f64> = self.cuts.iter().map(CutAngle::radians).collect();
        (0..n)
            .map(|j| {
                let start = rad[j];
                let end = rad[(j + 1) % n];
                let len = (end - start).rem_euclid(TAU);
                Arc { start, len }
            })
            .collect()
    }

    /// Index of the arc containing the angle.
    pub fn arc_index_of(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(TAU);
        let rad: Vec<f64> = self.cuts.iter().map(CutAngle::radians).collect();
        let n = rad.len();
        for j in (0..n).rev() {
            if t >= rad[j] {
                return j;
            }
        }
        // Before the first cut: wraps into the last arc.
        n - 1
    }
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Trapezoid,
    GaussLegendre,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub nodes_per_arc: usize,
    pub scheme: Scheme,
}

impl QuadratureConfig {
    pub fn new(nodes_per_arc: usize, scheme: Scheme) -> Result<Self> {
        if nodes_per_arc < 16 {
            return Err(Error::usage(format!("nodes_per_arc must be >= 16, got {nodes_per_arc}")));
        }
        Ok(QuadratureConfig { nodes_per_arc, scheme })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes_per_arc: 256, scheme: Scheme::GaussLegendre }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, via Newton iteration on
/// the Legendre recurrence. Cached per order.
fn gauss_legendre(n: usize) -> StdArc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, StdArc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }

    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by the three-term recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }

    let entry = StdArc::new((nodes, weights));
    cache.lock().unwrap().insert(n, entry.clone());
    entry
}

/// Angular distance from `theta` to the interval `[a, b]` (0 inside),
/// everything mod 2π.
fn angular_gap(theta: f64, a: f64, b: f64) -> f64 {
    let off = (theta - a).rem_euclid(TAU);
    if off <= b - a {
        0.0
    } else {
        let before = (a - theta).rem_euclid(TAU);
        let after = off - (b - a);
        before.min(after)
    }
}

/// Split `[a, b]` into panels: a uniform base split carrying
/// `nodes_per_arc` nodes, then bisection until each panel is shorter than
/// its distance to the singular direction of `z` (pole of the Poisson /
/// Herglotz kernels at angle `arg z`, distance `1 - |z|`).
fn graded_panels(a: f64, b: f64, z: Option<Complex64>, qc: &QuadratureConfig) -> (Vec<(f64, f64)>, usize) {
    let leaf = qc.nodes_per_arc.min(32).max(4);
    let base = (qc.nodes_per_arc + leaf - 1) / leaf;
    let mut stack: Vec<(f64, f64, u32)> = Vec::new();
    let step = (b - a) / base as f64;
    for k in (0..base).rev() {
        stack.push((a + k as f64 * step, a + (k + 1) as f64 * step, 0));
    }
    let mut panels = Vec::with_capacity(base);
    while let Some((lo, hi, depth)) = stack.pop() {
        let ok = match z {
            None => true,
            Some(z) => {
                let dr = (1.0 - z.norm()).max(0.0);
                let gap = angular_gap(z.arg().rem_euclid(TAU), lo.rem_euclid(TAU), lo.rem_euclid(TAU) + (hi - lo));
                let dist = (dr * dr + gap * gap).sqrt();
                (hi - lo) <= dist.max(1e-13) || depth >= 48
            }
        };
        if ok {
            panels.push((lo, hi));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    panels.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    (panels, leaf)
}

/// Integrate a complex-valued function of the angle over `[a, b]`, with
/// panels graded toward `z` when given.
pub fn integrate_arc(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    z: Option<Complex64>,
    qc: &QuadratureConfig,
) -> Complex64 {
    let (panels, leaf) = graded_panels(a, b, z, qc);
    let mut total = Complex64::new(0.0, 0.0);
    match qc.scheme {
        Scheme::GaussLegendre => {
            let rule = gauss_legendre(leaf);
            let (nodes, weights) = (&rule.0, &rule.1);
            for &(lo, hi) in &panels {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, w) in nodes.iter().zip(weights) {
                    acc += f(mid + half * x) * *w;
                }
                total += acc * half;
            }
        }
        Scheme::Trapezoid => {
            for &(lo, hi) in &panels {
                let n = leaf.max(2);
                let h = (hi - lo) / (n - 1) as f64;
                let mut acc = (f(lo) + f(hi)) * 0.5;
                for k in 1..n - 1 {
                    acc += f(lo + k as f64 * h);
                }
                total += acc * h;
            }
        }
    }
    total
}

fn integrate_arc_real(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    z: Option<Complex64>,
    qc: &QuadratureConfig,
) -> f64 {
    integrate_arc(|t| Complex64::new(f(t), 0.0), a, b, z, qc).re
}

// ---------------------------------------------------------------------------
// Conformal maps and distances
// ---------------------------------------------------------------------------

/// The conformal equivalence of the strip taking `s` to 0:
/// `φ_s(z) = sin(π(z−s)/2) / sin(π(z+s̄)/2)`. For real `s` this is the
/// classical `sin(π(z−s)/2)/sin(π(z+s)/2)`; a complex base point is reduced
/// to that case by the vertical translation `z ↦ z − i·Im s`, which is what
/// the conjugate in the denominator implements. The formula is analytic
/// across the boundary, so boundary `z` is evaluated directly.
pub fn strip_conformal(s: Complex64, z: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 || s.re >= 1.0 {
        return Err(Error::domain(format!("base point {s} not inside the strip")));
    }
    if z.re < 0.0 || z.re > 1.0 {
        return Err(Error::domain(format!("{z} outside the closed strip")));
    }
    let num = ((z - s) * PI / 2.0).sin();
    let den = ((z + s.conj()) * PI / 2.0).sin();
    Ok(num / den)
}

/// The disk Möbius map `z ↦ (z−a)/(1−ā·z)` sending `a` to 0.
pub fn disk_mobius(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(Error::domain(format!("Möbius base point |{a}| >= 1")));
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::domain(format!("Möbius argument |{z}| > 1")));
    }
    Ok((z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z))
}

/// Pseudo-hyperbolic distance `h(s,t) = |φ_s(t)|`; both points must live in
/// the same domain.
pub fn pseudo_hyperbolic_distance(s: &DomainPoint, t: &DomainPoint) -> Result<f64> {
    if s.domain != t.domain {
        return Err(Error::usage("pseudo-hyperbolic distance needs points of the same domain"));
    }
    match s.domain {
        Domain::Disk => Ok(disk_mobius(s.value, t.value)?.norm()),
        Domain::Strip => Ok(strip_conformal(s.value, t.value)?.norm()),
    }
}

/// `max_ω |ω − (ω−a)/(1−āω)|` over equispaced boundary points; always at
/// most `2|a|`.
pub fn mobius_deviation(a: Complex64, samples: usize) -> Result<f64> {
    if samples < 4 {
        return Err(Error::usage(format!("need at least 4 samples, got {samples}")));
    }
    if a.norm() >= 1.0 {
        return Err(Error::domain(format!("Möbius base point |{a}| >= 1")));
    }
    let mut max = 0.0f64;
    for k in 0..samples {
        let t = TAU * k as f64 / samples as f64;
        let w = Complex64::from_polar(1.0, t);
        let m = (w - a) / (Complex64::new(1.0, 0.0) - a.conj() * w);
        max = max.max((w - m).norm());
    }
    Ok(max)
}

// ---------------------------------------------------------------------------
// Poisson kernel, harmonic measure, Herglotz transform
// ---------------------------------------------------------------------------

/// `P_z(e^{it}) = (1−|z|²)/|e^{it}−z|²`; averages to 1 over the circle.
pub fn poisson_kernel(z: Complex64, t: f64) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!("Poisson kernel needs |z| < 1, got {z}")));
    }
    let w = Complex64::from_polar(1.0, t);
    Ok((1.0 - z.norm_sqr()) / (w - z).norm_sqr())
}

/// Harmonic measure `μ_z(A) = (1/2π) ∫_A P_z(e^{it}) dt ∈ [0, 1]`.
pub fn harmonic_measure(z: Complex64, arc: &Arc, qc: &QuadratureConfig) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!("harmonic measure needs |z| < 1, got {z}")));
    }
    let (a, b) = arc.interval();
    let nsq = z.norm_sqr();
    let v = integrate_arc_real(
        |t| (1.0 - nsq) / (Complex64::from_polar(1.0, t) - z).norm_sqr(),
        a,
        b,
        Some(z),
        qc,
    );
    Ok(v / TAU)
}

/// Harmonic measure of an arc by conformal transport: the Möbius image of
/// the arc seen from 0. Closed form, used as an independent oracle for the
/// quadrature route.
pub fn harmonic_measure_conformal(z: Complex64, arc: &Arc) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!("harmonic measure needs |z| < 1, got {z}")));
    }
    let ia = disk_mobius(z, Complex64::from_polar(1.0, arc.start()))?;
    let ib = disk_mobius(z, Complex64::from_polar(1.0, arc.start() + arc.len()))?;
    let len = (ib.arg() - ia.arg()).rem_euclid(TAU);
    Ok(if arc.len() >= TAU { 1.0 } else { len / TAU })
}

/// Herglotz transform of real boundary data:
/// `w(z) = (1/2π) ∫ (e^{it}+z)/(e^{it}−z) · α(e^{it}) dt`,
/// so `Re w` is the Poisson extension of `α` and `Im w(0) = 0`.
///
/// `breaks` lists angles where `α` may jump; integration panels are split
/// there so each panel sees smooth data.
pub fn herglotz_transform(
    boundary: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    z: Complex64,
    qc: &QuadratureConfig,
) -> Result<Complex64> {
    herglotz_integral(boundary, breaks, z, qc, |w, z| (w + z) / (w - z))
}

/// Derivative of the Herglotz transform:
/// `w′(z) = (1/2π) ∫ 2e^{it}/(e^{it}−z)² · α(e^{it}) dt`.
pub fn herglotz_derivative(
    boundary: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    z: Complex64,
    qc: &QuadratureConfig,
) -> Result<Complex64> {
    herglotz_integral(boundary, breaks, z, qc, |w, z| {
        let d = w - z;
        w * 2.0 / (d * d)
    })
}

fn herglotz_integral(
    boundary: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    z: Complex64,
    qc: &QuadratureConfig,
    kernel: impl Fn(Complex64, Complex64) -> Complex64 + Copy,
) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!("Herglotz transform needs |z| < 1, got {z}")));
    }
    let mut cuts: Vec<f64> = breaks.iter().map(|t| t.rem_euclid(TAU)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    if cuts.is_empty() {
        cuts.push(0.0);
    }
    let n = cuts.len();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let a = cuts[j];
        let b = if j + 1 < n { cuts[j + 1] } else { cuts[0] + TAU };
        if b - a <= 0.0 {
            continue;
        }
        let mut bad = None;
        let acc = integrate_arc(
            |t| {
                let v = boundary(t);
                if !v.is_finite() {
                    bad = Some(t);
                }
                kernel(Complex64::from_polar(1.0, t), z) * v
            },
            a,
            b,
            Some(z),
            qc,
        );
        if let Some(t) = bad {
            return Err(Error::NonFinite(format!("boundary sample at angle {t} is not finite")));
        }
        total += acc;
    }
    Ok(total / TAU)
}

// ---------------------------------------------------------------------------
// Analytic completion of an arc indicator
// ---------------------------------------------------------------------------

/// The analytic function `ψ` with `Re ψ = χ_A` on the circle, normalized so
/// `Im ψ(z0) = 0` (hence `ψ(z0) = μ_{z0}(A)` is the harmonic measure).
#[derive(Debug, Clone)]
pub struct PsiArc {
    arc: Arc,
    z0: Complex64,
    im_at_z0: f64,
    qc: QuadratureConfig,
}

/// Build the normalized completion of `χ_arc`.
pub fn psi_arc(arc: &Arc, z0: Complex64, qc: &QuadratureConfig) -> Result<PsiArc> {
    if z0.norm() >= 1.0 {
        return Err(Error::domain(format!("normalization point |{z0}| >= 1")));
    }
    let raw = herglotz_arc(arc, z0, qc)?;
    Ok(PsiArc { arc: *arc, z0, im_at_z0: raw.im, qc: *qc })
}

fn herglotz_arc(arc: &Arc, z: Complex64, qc: &QuadratureConfig) -> Result<Complex64> {
    let (a, b) = arc.interval();
    Ok(integrate_arc(
        |t| {
            let w = Complex64::from_polar(1.0, t);
            (w + z) / (w - z)
        },
        a,
        b,
        Some(z),
        qc,
    ) / TAU)
}

impl PsiArc {
    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn z0(&self) -> Complex64 {
        self.z0
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let raw = herglotz_arc(&self.arc, z, &self.qc)?;
        Ok(raw - Complex64::new(0.0, self.im_at_z0))
    }

    /// `ψ′(z)`; the normalization constant drops out.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::domain(format!("|{z}| >= 1")));
        }
        let (a, b) = self.arc.interval();
        Ok(integrate_arc(
            |t| {
                let w = Complex64::from_polar(1.0, t);
                let d = w - z;
                w * 2.0 / (d * d)
            },
            a,
            b,
            Some(z),
            &self.qc,
        ) / TAU)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn strip_map_vanishes_at_base_point() {
        let v = strip_conformal(c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn strip_map_derivative_at_half() {
        // φ_s'(s) = π/(2 sin πs) = π/2 at s = 1/2, checked by central differences.
        let s = c(0.5, 0.0);
        let h = 1e-5;
        let fd = (strip_conformal(s, c(0.5 + h, 0.0)).unwrap()
            - strip_conformal(s, c(0.5 - h, 0.0)).unwrap())
            / (2.0 * h);
        assert!((fd.re - PI / 2.0).abs() < 1e-8, "fd = {fd}");
        assert!(fd.im.abs() < 1e-10);
    }

    #[test]
    fn strip_map_quarter_to_three_quarters() {
        let v = strip_conformal(c(0.25, 0.0), c(0.75, 0.0)).unwrap();
        let expect = (PI / 4.0).sin() / (PI / 2.0).sin();
        assert!((v.re - expect).abs() < 1e-15);
        assert!(((2.0f64).sqrt() / 2.0 - expect).abs() < 1e-15);
    }

    #[test]
    fn strip_map_boundary_has_modulus_one() {
        let s = c(0.3, 0.2);
        for &z in &[c(0.0, -1.3), c(0.0, 0.4), c(1.0, 2.0), c(1.0, -0.1)] {
            let v = strip_conformal(s, z).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12, "|φ({z})| = {}", v.norm());
        }
        let inside = strip_conformal(s, c(0.6, 0.5)).unwrap();
        assert!(inside.norm() < 1.0);
    }

    #[test]
    fn strip_map_rejects_bad_base_point() {
        assert!(strip_conformal(c(0.0, 0.0), c(0.5, 0.0)).is_err());
        assert!(strip_conformal(c(1.2, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn mobius_identity_and_root() {
        let z = c(0.3, -0.4);
        assert_eq!(disk_mobius(c(0.0, 0.0), z).unwrap(), z);
        let v = disk_mobius(c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn mobius_boundary_example() {
        let v = disk_mobius(c(0.3, 0.0), c(0.0, 1.0)).unwrap();
        assert!((v - c(-0.6 / 1.09, 0.91 / 1.09)).norm() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let d0 = DomainPoint::disk(c(0.0, 0.0)).unwrap();
        let dh = DomainPoint::disk(c(0.5, 0.0)).unwrap();
        assert!((pseudo_hyperbolic_distance(&d0, &dh).unwrap() - 0.5).abs() < 1e-15);

        let s = DomainPoint::strip(c(0.25, 0.0)).unwrap();
        let t = DomainPoint::strip(c(0.75, 0.0)).unwrap();
        let h = pseudo_hyperbolic_distance(&s, &t).unwrap();
        assert!((h - (2.0f64).sqrt() / 2.0).abs() < 1e-15);

        assert_eq!(pseudo_hyperbolic_distance(&s, &s).unwrap(), 0.0);
        assert!(pseudo_hyperbolic_distance(&d0, &s).is_err());
    }

    #[test]
    fn deviation_vanishes_for_identity() {
        assert_eq!(mobius_deviation(c(0.0, 0.0), 128).unwrap(), 0.0);
    }

    #[test]
    fn deviation_at_single_node() {
        // |i − φ(i)| for a = 0.3, worked out by hand.
        let w = c(0.0, 1.0);
        let m = disk_mobius(c(0.3, 0.0), w).unwrap();
        assert!(((w - m).norm() - 0.5746957711326908f64).abs() < 1e-12);
    }

    #[test]
    fn deviation_respects_paper_bound() {
        let a = c(0.3, 0.0);
        let d = mobius_deviation(a, 10_000).unwrap();
        assert!(d <= 0.6 + 1e-12, "deviation {d} above 2|a|");
    }

    #[test]
    fn deviation_needs_four_samples() {
        assert!(mobius_deviation(c(0.1, 0.0), 3).is_err());
    }

    #[test]
    fn poisson_kernel_values() {
        assert!((poisson_kernel(c(0.0, 0.0), 1.234).unwrap() - 1.0).abs() < 1e-15);
        assert!((poisson_kernel(c(0.5, 0.0), 0.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(poisson_kernel(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn poisson_kernel_normalizes() {
        let z = c(0.3, 0.2);
        let qc = QuadratureConfig::default();
        let full = Arc::full(0.0);
        let v = harmonic_measure(z, &full, &qc).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "total mass {v}");
    }

    #[test]
    fn harmonic_measure_at_center_is_normalized_length() {
        let qc = QuadratureConfig::default();
        let arc = Arc::new(0.0, PI / 2.0).unwrap();
        let v = harmonic_measure(c(0.0, 0.0), &arc, &qc).unwrap();
        assert!((v - 0.25).abs() < 1e-13);
    }

    #[test]
    fn harmonic_measure_partition_sums_to_one() {
        let qc = QuadratureConfig::default();
        let part = ArcPartition::from_radians(&[0.1, 1.3, 2.0, 4.4]).unwrap();
        let z = c(0.35, -0.41);
        let total: f64 = part
            .arcs()
            .iter()
            .map(|a| harmonic_measure(z, a, &qc).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_measure_stable_under_node_doubling() {
        let arc = Arc::new(0.0, PI).unwrap();
        let z = c(0.5, 0.0);
        let v1 = harmonic_measure(z, &arc, &QuadratureConfig::new(256, Scheme::GaussLegendre).unwrap()).unwrap();
        let v2 = harmonic_measure(z, &arc, &QuadratureConfig::new(512, Scheme::GaussLegendre).unwrap()).unwrap();
        assert!(v1 > 0.5 && v1 < 1.0);
        assert!((v1 - v2).abs() < 1e-10, "doubling moved the value by {}", (v1 - v2).abs());
    }

    #[test]
    fn harmonic_measure_matches_conformal_oracle() {
        let qc = QuadratureConfig::default();
        let arc = Arc::new(0.7, 2.9).unwrap();
        for &z in &[c(0.0, 0.0), c(0.5, 0.0), c(-0.2, 0.6), c(0.1, -0.85)] {
            let q = harmonic_measure(z, &arc, &qc).unwrap();
            let o = harmonic_measure_conformal(z, &arc).unwrap();
            assert!((q - o).abs() < 1e-11, "z={z}: quad {q} vs oracle {o}");
        }
    }

    #[test]
    fn herglotz_of_constant_is_constant() {
        let qc = QuadratureConfig::default();
        let z = c(0.4, 0.3);
        let w = herglotz_transform(&|_| 2.5, &[], z, &qc).unwrap();
        assert!((w - c(2.5, 0.0)).norm() < 1e-12);
        let dw = herglotz_derivative(&|_| 2.5, &[], z, &qc).unwrap();
        assert!(dw.norm() < 1e-12);
    }

    #[test]
    fn herglotz_of_alternating_quarters() {
        // B0 = [0,π/2) ∪ [π,3π/2): w(0) = 1/2 and w'(0) = 0.
        let qc = QuadratureConfig::default();
        let b0 = |t: f64| {
            let t = t.rem_euclid(TAU);
            if (0.0..PI / 2.0).contains(&t) || (PI..1.5 * PI).contains(&t) {
                1.0
            } else {
                0.0
            }
        };
        let breaks = [0.0, PI / 2.0, PI, 1.5 * PI];
        let w = herglotz_transform(&b0, &breaks, c(0.0, 0.0), &qc).unwrap();
        assert!((w - c(0.5, 0.0)).norm() < 1e-12);
        let dw = herglotz_derivative(&b0, &breaks, c(0.0, 0.0), &qc).unwrap();
        assert!(dw.norm() < 1e-12, "w'(0) = {dw}");
    }

    #[test]
    fn herglotz_derivative_of_half_circle_indicator() {
        let qc = QuadratureConfig::default();
        let ind = |t: f64| if t.rem_euclid(TAU) < PI { 1.0 } else { 0.0 };
        let dw = herglotz_derivative(&ind, &[0.0, PI], c(0.0, 0.0), &qc).unwrap();
        assert!((dw - c(0.0, -2.0 / PI)).norm() < 1e-12, "w'(0) = {dw}");
    }

    #[test]
    fn herglotz_rejects_non_finite_boundary() {
        let qc = QuadratureConfig::default();
        let r = herglotz_transform(&|_| f64::NAN, &[], c(0.0, 0.0), &qc);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn psi_at_center_is_harmonic_measure() {
        let qc = QuadratureConfig::default();
        let arc = Arc::new(0.0, PI / 2.0).unwrap();
        let psi = psi_arc(&arc, c(0.0, 0.0), &qc).unwrap();
        let v = psi.eval(c(0.0, 0.0)).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn psi_sum_over_partition_is_one() {
        let qc = QuadratureConfig::default();
        let part = ArcPartition::from_radians(&[0.3, 1.9, 3.3, 5.1]).unwrap();
        let z0 = c(0.2, -0.1);
        let psis: Vec<PsiArc> = part.arcs().iter().map(|a| psi_arc(a, z0, &qc).unwrap()).collect();
        for &z in &[c(0.0, 0.0), c(0.45, 0.3), c(-0.6, -0.2)] {
            let total: Complex64 = psis.iter().map(|p| p.eval(z).unwrap()).sum();
            assert!((total - c(1.0, 0.0)).norm() < 1e-10, "Σψ({z}) = {total}");
        }
    }

    #[test]
    fn psi_has_radial_limit_near_interior_angle() {
        let qc = QuadratureConfig::default();
        let arc = Arc::new(0.0, PI / 2.0).unwrap();
        let psi = psi_arc(&arc, c(0.0, 0.0), &qc).unwrap();
        let z = Complex64::from_polar(0.999, PI / 4.0);
        let v = psi.eval(z).unwrap();
        assert!((v.re - 1.0).abs() < 0.05, "Re ψ = {}", v.re);
    }

    #[test]
    fn arc_partition_validation() {
        assert!(ArcPartition::new(vec![]).is_err());
        assert!(ArcPartition::from_radians(&[0.0, 0.0]).is_err());
        assert!(ArcPartition::from_radians(&[1.0, 0.5]).is_err());
        assert!(ArcPartition::from_radians(&[0.0, TAU]).is_err());
        let p = ArcPartition::equal(3).unwrap();
        let arcs = p.arcs();
        assert_eq!(arcs.len(), 3);
        let total: f64 = arcs.iter().map(Arc::len).sum();
        assert!((total - TAU).abs() < 1e-15);
    }

    #[test]
    fn arc_membership_wraps() {
        let arc = Arc::new(5.0, 1.0).unwrap();
        assert!(arc.contains(6.0));
        assert!(arc.contains(0.5));
        assert!(!arc.contains(2.0));
        let p = ArcPartition::from_radians(&[1.0, 4.0]).unwrap();
        assert_eq!(p.arc_index_of(2.0), 0);
        assert_eq!(p.arc_index_of(5.0), 1);
        assert_eq!(p.arc_index_of(0.2), 1);
    }
}
