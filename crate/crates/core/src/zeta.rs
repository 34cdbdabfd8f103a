//! Selberg zeta values by three routes: Fredholm determinants of the
//! discretised operators, Euler products over the length spectrum, and
//! exponentiated trace series.

use std::fmt;

use log::warn;

use crate::error::{Error, Result};
use crate::moebius::SurfaceParams;
use crate::symbolic::{BranchSystem, OrbitClass, SystemKind};
use crate::transferop::{CMatrix, Method, OperatorContext, OperatorMatrix, MIN_BASIS};
use crate::C64;

/// Which zeta function: `Z` of the surface or one of its factors
/// `Z = Z+ Z-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Which {
    #[default]
    Z,
    ZPlus,
    ZMinus,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Z => "Z",
            Which::ZPlus => "Z+",
            Which::ZMinus => "Z-",
        })
    }
}

impl std::str::FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Which::Z),
            "Z+" | "z+" | "Zplus" | "plus" => Ok(Which::ZPlus),
            "Z-" | "z-" | "Zminus" | "minus" => Ok(Which::ZMinus),
            _ => Err(Error::InvalidArgument(format!("unknown zeta factor {s:?} (use Z, Z+ or Z-)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaMethod {
    OperatorDet,
    EulerProduct,
    TraceSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: C64,
    /// Heuristic size of the dominating truncation error.
    pub error_estimate: f64,
    pub method: ZetaMethod,
}

/// `det(1 - M)` of a square matrix by pivoted LU.
pub fn det_one_minus(m: &CMatrix) -> C64 {
    let n = m.nrows();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    (CMatrix::identity(n, n) - m).lu().determinant()
}

/// `det(1 - M)` of an assembled operator.
pub fn fredholm_det(m: &OperatorMatrix) -> C64 {
    det_one_minus(&m.dense())
}

/// Operator contexts at basis sizes `N` and `N/2`; the difference of the two
/// determinants is the error estimate.
#[derive(Debug, Clone)]
pub struct ZetaOperator {
    pub fine: OperatorContext,
    pub coarse: Option<OperatorContext>,
    pub method: Method,
}

impl ZetaOperator {
    pub fn new(params: SurfaceParams, basis: usize) -> Result<Self> {
        let fine = OperatorContext::new(params, basis)?;
        let coarse = if basis / 2 >= MIN_BASIS {
            Some(OperatorContext::with_layout(params, fine.layout.clone(), basis / 2)?)
        } else {
            None
        };
        Ok(Self {
            fine,
            coarse,
            method: Method::Continued,
        })
    }

    /// Uses `method` for the parabolic sums; `Direct` requires `Re s > 1/2`.
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn basis(&self) -> usize {
        self.fine.basis
    }

    /// `(Z+, Z-)` at the fine basis size only.
    pub fn factors(&self, s: C64) -> Result<(C64, C64)> {
        factors(&self.fine, s, self.method)
    }

    /// `Z` at the fine basis size only.
    pub fn z(&self, s: C64) -> Result<C64> {
        let (p, m) = self.factors(s)?;
        Ok(p * m)
    }

    pub fn eval(&self, s: C64, which: Which) -> Result<ZetaValue> {
        let pick = |(p, m): (C64, C64)| match which {
            Which::Z => p * m,
            Which::ZPlus => p,
            Which::ZMinus => m,
        };
        let value = pick(self.factors(s)?);
        let error_estimate = match &self.coarse {
            Some(c) => (value - pick(factors(c, s, self.method)?)).norm(),
            None => f64::NAN,
        };
        Ok(ZetaValue {
            value,
            error_estimate,
            method: ZetaMethod::OperatorDet,
        })
    }
}

fn factors(ctx: &OperatorContext, s: C64, method: Method) -> Result<(C64, C64)> {
    let (p, m) = ctx.assemble_both(s, method)?;
    Ok((fredholm_det(&p), fredholm_det(&m)))
}

/// `Z`, `Z+` or `Z-` as a Fredholm determinant at basis size `N`.
pub fn zeta_operator(params: SurfaceParams, s: C64, basis: usize, which: Which) -> Result<ZetaValue> {
    ZetaOperator::new(params, basis)?.eval(s, which)
}

/// Norm bound beyond which primitive classes change an Euler product at
/// `Re s = sigma` by less than about `tol`.
pub fn euler_norm_bound(sigma: f64, tol: f64) -> f64 {
    // the number of classes below X grows slower than X, so the omitted
    // factors sum to at most about X^{1 - sigma}
    tol.powf(-1.0 / (sigma - 1.0)).clamp(1e3, 1e9)
}

/// Norm bound for orbit sums over words of a fixed length, where classes
/// below `X` grow like `X^{1/2}` through the parabolic indices.
pub fn orbit_norm_bound(sigma: f64, tol: f64) -> f64 {
    tol.powf(-1.0 / (sigma - 0.5)).clamp(1e3, 1e9)
}

fn system_for(which: Which) -> SystemKind {
    match which {
        Which::Z => SystemKind::I,
        Which::ZPlus => SystemKind::IJPlus,
        Which::ZMinus => SystemKind::IJMinus,
    }
}

/// Euler product over primitive classes of word length at most
/// `max_word_length`, with `k <= k_max`.
pub fn zeta_euler(params: SurfaceParams, s: C64, which: Which, max_word_length: usize, k_max: usize) -> Result<ZetaValue> {
    if !(s.re > 1.0) {
        return Err(Error::InvalidArgument(format!("Euler product needs Re s > 1 (got {s})")));
    }
    let bound = euler_norm_bound(s.re, 1e-13);
    let sys = BranchSystem::build(system_for(which), params);
    let classes = sys.periodic_classes(max_word_length, bound);
    euler_from_classes(classes.iter().filter(|c| c.primitive), s, which, k_max, max_word_length)
}

/// Euler product over the given primitive classes, accumulated in word
/// length shells.
pub fn euler_from_classes<'a>(
    classes: impl Iterator<Item = &'a OrbitClass>,
    s: C64,
    which: Which,
    k_max: usize,
    max_word_length: usize,
) -> Result<ZetaValue> {
    let mut shells = vec![C64::new(0.0, 0.0); max_word_length + 1];
    for c in classes {
        shells[c.word_length.min(max_word_length)] += euler_log_factor(c.norm, c.det_sign, s, which, k_max);
    }
    let mut last = 0.0;
    let mut prev = f64::INFINITY;
    let mut increasing = false;
    for sh in shells.iter().skip(1) {
        let m = sh.norm();
        if m == 0.0 {
            continue;
        }
        if m > prev {
            increasing = true;
        }
        prev = m;
        last = m;
    }
    if increasing {
        warn!("Euler product shells not decreasing at s = {s}; the error estimate is unreliable");
    }
    let log: C64 = shells.iter().sum();
    Ok(ZetaValue {
        value: log.exp(),
        error_estimate: last * log.exp().norm(),
        method: ZetaMethod::EulerProduct,
    })
}

/// `sum_{k <= k_max} log(1 - w_k N^{-(s+k)})` with `w_k = 1`, `det^k` or
/// `det^{k+1}` for `Z`, `Z+`, `Z-`.
pub fn euler_log_factor(norm: f64, det_sign: i8, s: C64, which: Which, k_max: usize) -> C64 {
    let d = det_sign as f64;
    let base = (-s * norm.ln()).exp();
    let inv = 1.0 / norm;
    let mut x = base;
    let mut out = C64::new(0.0, 0.0);
    for k in 0..=k_max {
        let w = match which {
            Which::Z => 1.0,
            Which::ZPlus => d.powi(k as i32),
            Which::ZMinus => d.powi(k as i32 + 1),
        };
        out += (C64::new(1.0, 0.0) - x * w).ln();
        x *= inv;
    }
    out
}

/// Closed-form trace `N^{-s} / (1 - det N^{-1})` of `tau_s(a)`.
pub fn closed_form_trace(norm: f64, det_sign: i8, s: C64) -> C64 {
    (-s * norm.ln()).exp() / (1.0 - det_sign as f64 / norm)
}

/// `sum_{a in P_n} w(a) Tr tau_s(a)` over periodic points of period `n`,
/// each class counted once per distinct rotation.
pub fn orbit_trace(sys: &BranchSystem, s: C64, n: usize, norm_bound: f64) -> C64 {
    orbit_traces(sys, s, n, norm_bound)[n - 1]
}

/// [`orbit_trace`] for all `n = 1..=n_max` from one enumeration.
pub fn orbit_traces(sys: &BranchSystem, s: C64, n_max: usize, norm_bound: f64) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n_max];
    // sum small terms first for reproducible rounding
    let mut classes = sys.periodic_classes(n_max, norm_bound);
    classes.sort_by(|a, b| b.norm.total_cmp(&a.norm));
    for c in &classes {
        out[c.word_length - 1] += closed_form_trace(c.norm, c.det_sign, s) * (c.weight as f64 * c.rotations() as f64);
    }
    out
}

/// Orbit sums for the operator of `which`: `F_I` for the full operator,
/// `F_IJ` with weights `+-1` for the factors.
pub fn orbit_traces_for(params: SurfaceParams, which: Which, s: C64, n_max: usize, norm_bound: f64) -> Vec<C64> {
    orbit_traces(&BranchSystem::build(system_for(which), params), s, n_max, norm_bound)
}

/// `Tr M^n` for `n = 1..=n_max` by repeated multiplication.
pub fn matrix_traces(m: &CMatrix, n_max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n_max);
    let mut p = m.clone();
    for n in 1..=n_max {
        out.push(p.trace());
        if n < n_max {
            p = &p * m;
        }
    }
    out
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &CMatrix) -> f64 {
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().map(|x| x.norm()).fold(0.0, f64::max))
        .unwrap_or(f64::NAN)
}

/// Result of [`trace_series`].
#[derive(Debug, Clone)]
pub struct TraceSeries {
    pub value: ZetaValue,
    /// `Tr M^n`, `n = 1..=n_max`.
    pub matrix_traces: Vec<C64>,
    /// Discretisation-free `Tr L^n` from closed-form orbit traces for the
    /// first few `n`.
    pub orbit_traces: Vec<C64>,
    /// `exp(-sum Tr L^n / n)` over the orbit traces only.
    pub orbit_value: C64,
    pub spectral_radius: f64,
}

/// `exp(-sum_{n <= n_max} Tr M^n / n)` for the full operator, with orbit
/// traces up to `n_orbit`.
pub fn trace_series(params: SurfaceParams, s: C64, basis: usize, n_max: usize, n_orbit: usize) -> Result<TraceSeries> {
    let ctx = OperatorContext::new(params, basis)?;
    trace_series_with(&ctx, s, n_max, n_orbit)
}

pub fn trace_series_with(ctx: &OperatorContext, s: C64, n_max: usize, n_orbit: usize) -> Result<TraceSeries> {
    let m = ctx.assemble_full(s, Method::Continued)?.dense();
    let rho = spectral_radius(&m);
    if !(rho < 1.0) {
        return Err(Error::SpectralRadiusExceeded(rho));
    }
    let traces = matrix_traces(&m, n_max);
    let log: C64 = traces.iter().enumerate().map(|(i, t)| t / (i + 1) as f64).sum();
    let value = (-log).exp();
    let last = traces.last().map(|t| t.norm() / n_max as f64).unwrap_or(0.0);
    // terms decay like rho^n; bound the remainder by a geometric series
    let error_estimate = value.norm() * last * rho / (1.0 - rho);
    let orbit = if n_orbit > 0 {
        orbit_traces_for(ctx.params, Which::Z, s, n_orbit, orbit_norm_bound(s.re, 1e-12))
    } else {
        Vec::new()
    };
    let orbit_log: C64 = orbit.iter().enumerate().map(|(i, t)| t / (i + 1) as f64).sum();
    Ok(TraceSeries {
        value: ZetaValue {
            value,
            error_estimate,
            method: ZetaMethod::TraceSeries,
        },
        matrix_traces: traces,
        orbit_traces: orbit,
        orbit_value: (-orbit_log).exp(),
        spectral_radius: rho,
    })
}

/// `n`-th dynamical partition function `Tr L_s^n - Tr L_{s+1}^n` of the
/// full operator from its discretisation.
pub fn partition_function(ctx: &OperatorContext, s: C64, n: usize) -> Result<C64> {
    let a = ctx.assemble_full(s, Method::Continued)?.dense();
    let b = ctx.assemble_full(s + 1.0, Method::Continued)?.dense();
    Ok(matrix_traces(&a, n)[n - 1] - matrix_traces(&b, n)[n - 1])
}

/// `sum_{a in P_n} N(a)^{-s}` over periodic points of any branch system;
/// equal to the partition function by the closed-form traces.
pub fn partition_sum(sys: &BranchSystem, s: C64, n: usize, norm_bound: f64) -> C64 {
    sys.periodic_classes(n, norm_bound)
        .iter()
        .filter(|c| c.word_length == n)
        .map(|c| (-s * c.norm.ln()).exp() * (c.weight as f64 * c.rotations() as f64))
        .sum()
}
