//! Command-line surface: subcommands `norm | factorize | derive | sweep |
//! family | probe | indicator | verify`, the canonical JSON config format
//! for family descriptors, and CSV emission.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numeric non-convergence,
//! 3 invariant violation (`verify` only). `LAB_THREADS` caps the thread
//! pool; complex CSV values are written as `re+imi`.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::calderon::{calderon_norm, optimal_factorization, pair_derivation, PairScale};
use crate::complex_plane::{ArcPartition, CutAngle, QuadratureConfig, Scheme};
use crate::derivations::{boundedness_probe, Centralizer, ProbeConfig};
use crate::error::{Error, Result};
use crate::families::{BoundaryAlpha, FamilyPoint, FamilySpec, RationalFn};
use crate::indicators::{indicator_numeric, indicator_space};
use crate::scale_harness::{family_sweep, scale_sweep};
use crate::spaces::{PExponent, SpaceSpec};
use crate::verify;

// ---------------------------------------------------------------------------
// Scalar parsing and formatting
// ---------------------------------------------------------------------------

pub fn parse_exponent(s: &str) -> Result<PExponent> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
        return Ok(PExponent::Infinity);
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
        let d: i64 = d.trim().parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
        if d == 0 {
            return Err(Error::Config(format!("bad exponent `{s}`")));
        }
        return PExponent::new(n as f64 / d as f64);
    }
    let v: f64 = t.parse().map_err(|_| Error::Config(format!("bad exponent `{s}`")))?;
    PExponent::new(v)
}

pub fn format_exponent(p: PExponent) -> String {
    match p {
        PExponent::Infinity => "inf".to_string(),
        PExponent::Finite(v) => format!("{v:?}"),
    }
}

/// A space token of the form `l2`, `l4/3`, `linf`, or a bare exponent.
pub fn parse_space_token(s: &str) -> Result<PExponent> {
    let t = s.trim();
    let body = t.strip_prefix('l').or_else(|| t.strip_prefix('L')).unwrap_or(t);
    parse_exponent(body)
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
        let d: i64 = d.trim().parse().map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
        if d == 0 {
            return Err(Error::Config(format!("bad rational `{s}`")));
        }
        Ok(Ratio::new(n, d))
    } else {
        let n: i64 = t.parse().map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
        Ok(Ratio::new(n, 1))
    }
}

fn format_ratio(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Cut angle strings: fractions (`"1/3"`, `"0"`) are fractions of a full
/// turn; decimal strings (`"1.5707963267948966"`) are radians.
fn parse_cut(s: &str) -> Result<CutAngle> {
    let t = s.trim();
    if t.contains('/') {
        let r = parse_ratio(t)?;
        return CutAngle::turns(*r.numer(), *r.denom());
    }
    if let Ok(n) = t.parse::<i64>() {
        return CutAngle::turns(n, 1);
    }
    let v: f64 = t.parse().map_err(|_| Error::Config(format!("bad cut angle `{s}`")))?;
    Ok(CutAngle::Radians(v))
}

fn format_cut(c: &CutAngle) -> String {
    match c {
        CutAngle::Turns(r) => format_ratio(*r),
        CutAngle::Radians(v) => format!("{v:?}"),
    }
}

/// Complex numbers as `re`, `imi`, or `re+imi` / `re-imi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("bad complex number `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the last sign that is neither leading nor an exponent
        // sign.
        let chars: Vec<char> = body.chars().collect();
        let mut split = None;
        for k in (1..chars.len()).rev() {
            if (chars[k] == '+' || chars[k] == '-') && chars[k - 1] != 'e' && chars[k - 1] != 'E' {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let imtxt = &body[k..];
                let im: f64 = if imtxt == "+" {
                    1.0
                } else if imtxt == "-" {
                    -1.0
                } else {
                    imtxt.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Fixed CSV form `re+imi`.
pub fn format_complex(v: Complex64) -> String {
    if v.im >= 0.0 {
        format!("{:?}+{:?}i", v.re, v.im)
    } else {
        format!("{:?}-{:?}i", v.re, -v.im)
    }
}

/// Compact scalar form for plain-text value lines: real numbers drop the
/// imaginary part.
pub fn format_compact(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{:?}", v.re)
    } else {
        format_complex(v)
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number `{t}` in list `{s}`")))
        })
        .collect()
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

// ---------------------------------------------------------------------------
// Polynomial expressions for --alpha
// ---------------------------------------------------------------------------

/// Parse a polynomial in `z` with rational coefficients, e.g. `z^2+2`,
/// `3z^2 - z + 1/2`.
pub fn parse_poly(expr: &str) -> Result<Vec<Ratio<i64>>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Config("empty polynomial".into()));
    }
    let bad = |msg: &str| Error::Config(format!("cannot parse polynomial `{expr}`: {msg}"));
    let mut coeffs: Vec<Ratio<i64>> = Vec::new();
    let add = |coeffs: &mut Vec<Ratio<i64>>, deg: usize, c: Ratio<i64>| {
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, Ratio::new(0, 1));
        }
        coeffs[deg] += c;
    };

    let bytes = s.as_bytes();
    let mut k = 0usize;
    while k < bytes.len() {
        let mut negative = false;
        while k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
            if bytes[k] == b'-' {
                negative = !negative;
            }
            k += 1;
        }
        if k >= bytes.len() {
            return Err(bad("trailing sign"));
        }
        // Optional coefficient: integer or integer/integer.
        let start = k;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        let numer: Option<i64> = if k > start {
            Some(s[start..k].parse().map_err(|_| bad("bad integer"))?)
        } else {
            None
        };
        let mut denom: i64 = 1;
        if k < bytes.len() && bytes[k] == b'/' && numer.is_some() {
            k += 1;
            let dstart = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k == dstart {
                return Err(bad("missing denominator"));
            }
            denom = s[dstart..k].parse().map_err(|_| bad("bad denominator"))?;
            if denom == 0 {
                return Err(bad("zero denominator"));
            }
        }
        if k < bytes.len() && bytes[k] == b'*' {
            k += 1;
        }
        // Optional variable part.
        let mut degree = 0usize;
        if k < bytes.len() && (bytes[k] == b'z' || bytes[k] == b'Z') {
            k += 1;
            degree = 1;
            if k < bytes.len() && bytes[k] == b'^' {
                k += 1;
                let dstart = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k == dstart {
                    return Err(bad("missing power"));
                }
                degree = s[dstart..k].parse().map_err(|_| bad("bad power"))?;
            }
        } else if numer.is_none() {
            return Err(bad("expected a coefficient or z"));
        }
        let c = Ratio::new(numer.unwrap_or(1), denom);
        add(&mut coeffs, degree, if negative { -c } else { c });
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub p: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub x0: SpaceConfig,
    pub x1: SpaceConfig,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    pub num: Vec<String>,
    pub den: Vec<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im_offset: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub partition: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyConfig {
    ArcsWeighted {
        base: SpaceConfig,
        partition: Vec<String>,
        weights: Vec<Vec<f64>>,
    },
    ArcsLp {
        partition: Vec<String>,
        exponents: Vec<String>,
    },
    VariableExponent {
        alpha: AlphaConfig,
    },
    FlatDiagonal {
        power: u32,
        diag: Vec<f64>,
    },
    ReiteratedPair {
        pair: PairConfig,
        boundary_alpha: BoundaryConfig,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub nodes_per_arc: usize,
    pub scheme: String,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        QuadratureSection { nodes_per_arc: 256, scheme: "gauss-legendre".into() }
    }
}

/// The single structured-text config document: a family descriptor plus
/// quadrature and tolerance settings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    pub family: FamilyConfig,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-9
}

impl LabConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Canonical byte form: pretty JSON plus a trailing newline.
    /// `parse ∘ to_canonical_string` is the identity on canonical documents.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

fn space_to_config(s: &SpaceSpec) -> SpaceConfig {
    SpaceConfig { p: format_exponent(s.p), weight: s.weight.clone() }
}

fn space_from_config(c: &SpaceConfig) -> Result<SpaceSpec> {
    let p = parse_exponent(&c.p)?;
    match &c.weight {
        None => Ok(SpaceSpec::lp(p)),
        Some(w) => SpaceSpec::weighted(p, w.clone()),
    }
}

fn partition_to_config(p: &ArcPartition) -> Vec<String> {
    p.cuts().iter().map(format_cut).collect()
}

fn partition_from_config(cuts: &[String]) -> Result<ArcPartition> {
    ArcPartition::new(cuts.iter().map(|s| parse_cut(s)).collect::<Result<Vec<_>>>()?)
}

pub fn family_to_config(f: &FamilySpec) -> FamilyConfig {
    match f {
        FamilySpec::ArcsWeighted { base, partition, weights } => FamilyConfig::ArcsWeighted {
            base: space_to_config(base),
            partition: partition_to_config(partition),
            weights: weights.clone(),
        },
        FamilySpec::ArcsLp { partition, exponents } => FamilyConfig::ArcsLp {
            partition: partition_to_config(partition),
            exponents: exponents.iter().map(|&p| format_exponent(p)).collect(),
        },
        FamilySpec::VariableExponent { alpha } => FamilyConfig::VariableExponent {
            alpha: AlphaConfig {
                num: alpha.num().iter().map(|&r| format_ratio(r)).collect(),
                den: alpha.den().iter().map(|&r| format_ratio(r)).collect(),
                im_offset: alpha.im_offset(),
            },
        },
        FamilySpec::FlatDiagonal { power, diag } => {
            FamilyConfig::FlatDiagonal { power: *power, diag: diag.clone() }
        }
        FamilySpec::ReiteratedPair { pair, boundary_alpha } => FamilyConfig::ReiteratedPair {
            pair: PairConfig {
                x0: space_to_config(&pair.x0),
                x1: space_to_config(&pair.x1),
                dim: pair.dim,
            },
            boundary_alpha: BoundaryConfig {
                partition: partition_to_config(&boundary_alpha.partition),
                values: boundary_alpha.values.clone(),
            },
        },
    }
}

pub fn family_from_config(c: &FamilyConfig) -> Result<FamilySpec> {
    let spec = match c {
        FamilyConfig::ArcsWeighted { base, partition, weights } => FamilySpec::ArcsWeighted {
            base: space_from_config(base)?,
            partition: partition_from_config(partition)?,
            weights: weights.clone(),
        },
        FamilyConfig::ArcsLp { partition, exponents } => FamilySpec::ArcsLp {
            partition: partition_from_config(partition)?,
            exponents: exponents
                .iter()
                .map(|s| parse_exponent(s))
                .collect::<Result<Vec<_>>>()?,
        },
        FamilyConfig::VariableExponent { alpha } => {
            let num = alpha.num.iter().map(|s| parse_ratio(s)).collect::<Result<Vec<_>>>()?;
            let den = alpha.den.iter().map(|s| parse_ratio(s)).collect::<Result<Vec<_>>>()?;
            FamilySpec::VariableExponent {
                alpha: RationalFn::with_offset(num, den, alpha.im_offset)?,
            }
        }
        FamilyConfig::FlatDiagonal { power, diag } => {
            FamilySpec::FlatDiagonal { power: *power, diag: diag.clone() }
        }
        FamilyConfig::ReiteratedPair { pair, boundary_alpha } => FamilySpec::ReiteratedPair {
            pair: PairScale::new(
                space_from_config(&pair.x0)?,
                space_from_config(&pair.x1)?,
                pair.dim,
            )?,
            boundary_alpha: BoundaryAlpha::new(
                partition_from_config(&boundary_alpha.partition)?,
                boundary_alpha.values.clone(),
            )?,
        },
    };
    spec.validate()?;
    Ok(spec)
}

fn quadrature_from_section(q: &QuadratureSection) -> Result<QuadratureConfig> {
    let scheme = match q.scheme.as_str() {
        "gauss-legendre" => Scheme::GaussLegendre,
        "trapezoid" => Scheme::Trapezoid,
        other => return Err(Error::Config(format!("unknown quadrature scheme `{other}`"))),
    };
    QuadratureConfig::new(q.nodes_per_arc, scheme)
}

// ---------------------------------------------------------------------------
// CLI definition
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "calderon-lab",
    about = "Numerical laboratory for Calderón products, interpolation families and derivations",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Pair of space tokens, e.g. `linf,l1` or `l2,l4/3`.
    #[arg(long)]
    pair: String,
    /// Optional weight for the first space (comma list).
    #[arg(long)]
    w0: Option<String>,
    /// Optional weight for the second space (comma list).
    #[arg(long)]
    w1: Option<String>,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Calderón product norm of a vector.
    Norm {
        #[command(flatten)]
        pair: PairArgs,
        /// Interpolation parameter in (0,1).
        #[arg(long)]
        theta: f64,
        /// Vector entries (comma list; entries may be complex `a+bi`).
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Optimal factorization of a vector (CSV: i,x,a0,a1,value).
    Factorize {
        #[command(flatten)]
        pair: PairArgs,
        /// Interpolation parameter in (0,1).
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Derivation Ω(x) of a pair or family at a point.
    Derive {
        /// Inline family kind: `variable-p` (with --alpha). Omit when using
        /// --pair or --config.
        #[arg(long)]
        family: Option<String>,
        /// Polynomial alpha descriptor for `variable-p`, e.g. "z^2+2".
        #[arg(long)]
        alpha: Option<String>,
        /// Family config file (JSON).
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        /// Pair of space tokens (pair mode).
        #[arg(long)]
        pair: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        w0: Option<String>,
        #[arg(long)]
        w1: Option<String>,
        /// Evaluation point for families.
        #[arg(long, default_value = "0")]
        z: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scale sweep over a θ grid (CSV: t,norm,fd_left,fd_right,omega_norm,logconv_residual).
    Sweep {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        x: String,
        /// Comma list of θ values.
        #[arg(long)]
        thetas: String,
        #[arg(long, default_value_t = 1e-4)]
        fd_step: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Family sweep over a z grid (CSV: z,norm,omega_norm,dim,flat_ratio).
    Family {
        /// Family config file (JSON).
        #[arg(long)]
        config: std::path::PathBuf,
        #[arg(long)]
        x: String,
        /// Comma list of complex grid points.
        #[arg(long)]
        z: String,
        /// Dimension ladder for flat-vector ratios.
        #[arg(long)]
        dims: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Boundedness probe ladder (CSV: dim,max_ratio,seed).
    Probe {
        /// Handle: `kp`, `zero`, `mult`, or `family`.
        #[arg(long)]
        omega: String,
        /// Kalton–Peck exponent (for `kp`).
        #[arg(long)]
        r: Option<f64>,
        /// Kalton–Peck scale (for `kp`).
        #[arg(long, default_value = "1")]
        scale: String,
        /// Multiplier entries (for `mult`).
        #[arg(long)]
        g: Option<String>,
        /// Family config file (for `family`).
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        /// Family evaluation point (for `family`).
        #[arg(long, default_value = "0")]
        z: String,
        /// Probe space token, e.g. `l2`.
        #[arg(long, default_value = "l2")]
        space: String,
        /// Dimension ladder.
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_random: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Indicator functional of a density.
    Indicator {
        /// Space token, e.g. `l2`.
        #[arg(long)]
        space: String,
        /// Optional weight (comma list).
        #[arg(long)]
        weight: Option<String>,
        /// Density entries (comma list, nonnegative).
        #[arg(long)]
        f: String,
        /// Use the iterative ascent instead of the closed form.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run invariant suites; exit 3 on any violation.
    Verify {
        /// `all`, `acceptance`, or a module name.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

fn build_pair(args: &PairArgs, dim: usize) -> Result<PairScale> {
    let (t0, t1) = args
        .pair
        .split_once(',')
        .ok_or_else(|| Error::usage(format!("--pair expects two tokens, got `{}`", args.pair)))?;
    let p0 = parse_space_token(t0)?;
    let p1 = parse_space_token(t1)?;
    let x0 = match &args.w0 {
        Some(w) => SpaceSpec::weighted(p0, parse_f64_list(w)?)?,
        None => SpaceSpec::lp(p0),
    };
    let x1 = match &args.w1 {
        Some(w) => SpaceSpec::weighted(p1, parse_f64_list(w)?)?,
        None => SpaceSpec::lp(p1),
    };
    PairScale::new(x0, x1, dim)
}

fn emit(out: &OutArg, sink: &mut dyn Write, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => sink
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write output: {e}"))),
    }
}

fn run_command(cmd: Command, sink: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Norm { pair, theta, x, tol, out } => {
            let xv = parse_complex_list(&x)?;
            let p = build_pair(&pair, xv.len())?;
            let v = calderon_norm(&p, theta, &xv, tol)?;
            emit(&out, sink, &format!("{v:?}\n"))?;
            Ok(0)
        }
        Command::Factorize { pair, theta, x, tol, out } => {
            let xv = parse_complex_list(&x)?;
            let p = build_pair(&pair, xv.len())?;
            let f = optimal_factorization(&p, theta, &xv, tol)?;
            let mut text = String::from("i,x,a0,a1,value\n");
            for i in 0..xv.len() {
                let _ = writeln!(
                    text,
                    "{i},{},{},{},{:?}",
                    format_complex(xv[i]),
                    format_complex(f.a0[i]),
                    format_complex(f.a1[i]),
                    f.achieved_value
                );
            }
            emit(&out, sink, &text)?;
            Ok(0)
        }
        Command::Derive { family, alpha, config, pair, theta, w0, w1, z, x, tol, out } => {
            let xv = parse_complex_list(&x)?;
            let d = if let Some(pair_tokens) = pair {
                let theta = theta
                    .ok_or_else(|| Error::usage("derive with --pair also needs --theta"))?;
                let args = PairArgs { pair: pair_tokens, w0, w1 };
                let p = build_pair(&args, xv.len())?;
                pair_derivation(&p, theta, &xv, tol)?
            } else {
                let spec = if let Some(path) = config {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                    family_from_config(&LabConfig::parse(&text)?.family)?
                } else {
                    match family.as_deref() {
                        Some("variable-p") => {
                            let expr = alpha
                                .ok_or_else(|| Error::usage("--family variable-p needs --alpha"))?;
                            FamilySpec::VariableExponent {
                                alpha: RationalFn::new(parse_poly(&expr)?, vec![Ratio::new(1, 1)])?,
                            }
                        }
                        Some(other) => {
                            return Err(Error::usage(format!(
                                "unknown inline family `{other}`; use --config for structured families"
                            )))
                        }
                        None => return Err(Error::usage("derive needs --pair, --family or --config")),
                    }
                };
                let pt = FamilyPoint::new(spec, parse_complex(&z)?)?;
                crate::families::family_derivation(&pt, &xv, &QuadratureConfig::default(), tol)?
            };
            let line = d.iter().map(|&v| format_compact(v)).collect::<Vec<_>>().join(",");
            emit(&out, sink, &format!("{line}\n"))?;
            Ok(0)
        }
        Command::Sweep { pair, x, thetas, fd_step, tol, out } => {
            let xv = parse_complex_list(&x)?;
            let p = build_pair(&pair, xv.len())?;
            let grid = parse_f64_list(&thetas)?;
            let rows = scale_sweep(&p, &xv, &grid, fd_step, tol)?;
            let mut text = String::from("t,norm,fd_left,fd_right,omega_norm,logconv_residual\n");
            for r in rows {
                let _ = writeln!(
                    text,
                    "{:?},{:?},{:?},{:?},{:?},{:?}",
                    r.t, r.norm, r.fd_left, r.fd_right, r.omega_norm, r.logconv_residual
                );
            }
            emit(&out, sink, &text)?;
            Ok(0)
        }
        Command::Family { config, x, z, dims, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let cfg = LabConfig::parse(&text)?;
            let spec = family_from_config(&cfg.family)?;
            let quad = quadrature_from_section(&cfg.quadrature)?;
            let xv = parse_complex_list(&x)?;
            let zs = parse_complex_list(&z)?;
            let ladder: Vec<usize> = match dims {
                Some(d) => d
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Config(format!("bad dim `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => vec![],
            };
            let rows = family_sweep(&spec, &xv, &zs, &ladder, &quad, cfg.tol)?;
            let mut csv = String::from("z,norm,omega_norm,dim,flat_ratio\n");
            for r in rows {
                let _ = writeln!(
                    csv,
                    "{},{:?},{:?},{},{:?}",
                    format_complex(r.z),
                    r.norm,
                    r.omega_norm,
                    r.dim,
                    r.flat_ratio
                );
            }
            emit(&out, sink, &csv)?;
            Ok(0)
        }
        Command::Probe { omega, r, scale, g, config, z, space, dims, seed, n_random, tol, out } => {
            let handle = match omega.as_str() {
                "zero" => Centralizer::Zero,
                "kp" => Centralizer::KaltonPeck {
                    r: r.ok_or_else(|| Error::usage("--omega kp needs --r"))?,
                    scale: parse_complex(&scale)?,
                },
                "mult" => Centralizer::Multiplication {
                    g: parse_complex_list(&g.ok_or_else(|| Error::usage("--omega mult needs --g"))?)?,
                },
                "family" => {
                    let path = config.ok_or_else(|| Error::usage("--omega family needs --config"))?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                    let cfg = LabConfig::parse(&text)?;
                    Centralizer::FamilyInduced {
                        family: family_from_config(&cfg.family)?,
                        z0: parse_complex(&z)?,
                        quad: quadrature_from_section(&cfg.quadrature)?,
                        tol,
                    }
                }
                other => return Err(Error::usage(format!("unknown handle `{other}`"))),
            };
            let p = parse_space_token(&space)?;
            let ladder: Vec<usize> = dims
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad dim `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = boundedness_probe(&handle, p, &ladder, &ProbeConfig { n_random, seed })?;
            let mut text = String::from("dim,max_ratio,seed\n");
            for row in rows {
                let _ = writeln!(text, "{},{:?},{}", row.dim, row.max_ratio, row.seed);
            }
            emit(&out, sink, &text)?;
            Ok(0)
        }
        Command::Indicator { space, weight, f, numeric, tol, out } => {
            let p = parse_space_token(&space)?;
            let spec = match weight {
                Some(w) => SpaceSpec::weighted(p, parse_f64_list(&w)?)?,
                None => SpaceSpec::lp(p),
            };
            let fv = parse_f64_list(&f)?;
            let v = if numeric {
                indicator_numeric(&spec, &fv, tol)?
            } else {
                indicator_space(&spec, &fv)?
            };
            emit(&out, sink, &format!("{v:?}\n"))?;
            Ok(0)
        }
        Command::Verify { suite, seed, out } => {
            let reports = verify::run_suite(&suite, seed)?;
            let mut text = String::new();
            let mut failed = 0usize;
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{} {} — {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.detail
                );
                if !r.passed {
                    failed += 1;
                }
            }
            let _ = writeln!(
                text,
                "{} checks, {} failed (suite `{suite}`, seed {seed})",
                reports.len(),
                failed
            );
            emit(&out, sink, &text)?;
            Ok(if failed > 0 { 3 } else { 0 })
        }
    }
}

/// Parse `argv` (including the program name) and run; write results to
/// `sink`. Returns the process exit code.
pub fn run_with_output<I, T>(argv: I, sink: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version requests are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(sink, "{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match run_command(cli.command, sink) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary: honors `LAB_THREADS` and writes to stdout.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Ok(threads) = std::env::var("LAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with_output(argv, &mut lock)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with_output(args.iter().copied(), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn norm_subcommand_prints_five() {
        let (code, out) = run_capture(&[
            "calderon-lab", "norm", "--pair", "linf,l1", "--theta", "0.5", "--x", "3,4",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "5.0");
    }

    #[test]
    fn derive_variable_p_at_origin_prints_zeros() {
        let (code, out) = run_capture(&[
            "calderon-lab", "derive", "--family", "variable-p", "--alpha", "z^2+2", "--z", "0",
            "--x", "1,1",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "0.0,0.0");
    }

    #[test]
    fn unknown_flag_exits_one() {
        let (code, _) = run_capture(&["calderon-lab", "norm", "--bogus", "1"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn malformed_exponent_is_rejected() {
        let (code, _) = run_capture(&[
            "calderon-lab", "norm", "--pair", "l0.5,l1", "--theta", "0.5", "--x", "1,1",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn sweep_header_is_stable() {
        let (code, out) = run_capture(&[
            "calderon-lab", "sweep", "--pair", "linf,l1", "--x", "1,1",
            "--thetas", "0.5", "--tol", "1e-9",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out.lines().next().unwrap(),
            "t,norm,fd_left,fd_right,omega_norm,logconv_residual"
        );
    }

    #[test]
    fn complex_parsing_roundtrip() {
        for s in ["1.5", "-0.25+0.125i", "3-2i", "0.0+1.0i", "2i"] {
            let v = parse_complex(s).unwrap();
            let v2 = parse_complex(&format_complex(v)).unwrap();
            assert_eq!(v, v2, "{s}");
        }
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("-1e-3-2e-4i").unwrap(), Complex64::new(-1e-3, -2e-4));
        assert!(parse_complex("forty").is_err());
    }

    #[test]
    fn poly_parser_handles_the_reference_descriptor() {
        let p = parse_poly("z^2+2").unwrap();
        assert_eq!(p, vec![Ratio::new(2, 1), Ratio::new(0, 1), Ratio::new(1, 1)]);
        let p = parse_poly("3z^2 - z + 1/2").unwrap();
        assert_eq!(p, vec![Ratio::new(1, 2), Ratio::new(-1, 1), Ratio::new(3, 1)]);
        assert!(parse_poly("z^").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn config_roundtrip_on_equal_thirds() {
        let family = FamilySpec::ArcsWeighted {
            base: SpaceSpec::lp_value(2.0).unwrap(),
            partition: ArcPartition::equal(3).unwrap(),
            weights: vec![vec![std::f64::consts::E, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]],
        };
        let cfg = LabConfig {
            family: family_to_config(&family),
            quadrature: QuadratureSection::default(),
            tol: 1e-9,
        };
        let text = cfg.to_canonical_string();
        let parsed = LabConfig::parse(&text).unwrap();
        assert_eq!(parsed, cfg);
        assert_eq!(parsed.to_canonical_string(), text, "canonical bytes must round-trip");
        // Exact thirds survive as fractions of the turn.
        assert!(text.contains("\"1/3\"") && text.contains("\"2/3\""));
        let back = family_from_config(&parsed.family).unwrap();
        assert_eq!(back, family);
    }

    #[test]
    fn config_rejects_malformed_exponent() {
        let text =
            r#"{"family":{"kind":"arcs-lp","partition":["0","1/2"],"exponents":["0.5","2"]}}"#;
        let cfg = LabConfig::parse(text).unwrap();
        assert!(family_from_config(&cfg.family).is_err());
    }

    #[test]
    fn config_parse_reports_line_and_column() {
        let err = LabConfig::parse("{\n  \"family\": {\n").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line"), "diagnostic should cite a line: {msg}");
    }

    #[test]
    fn cut_angle_strings() {
        assert!(matches!(parse_cut("1/3").unwrap(), CutAngle::Turns(_)));
        assert!(matches!(parse_cut("0").unwrap(), CutAngle::Turns(_)));
        assert!(matches!(parse_cut("1.5707963267948966").unwrap(), CutAngle::Radians(_)));
        assert!(parse_cut("5/3x").is_err());
        let c = parse_cut("2/6").unwrap();
        assert_eq!(format_cut(&c), "1/3");
    }
}
