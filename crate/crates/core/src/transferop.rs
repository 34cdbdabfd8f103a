//! Finite-rank realisations of the transfer operators on a disc layout.
//!
//! Functions on a node are represented by coefficients in the basis
//! `kappa(z)^k` of its chart. A block realising `f -> j_s(h, .) f(h .)` is
//! computed by sampling on `M >= 2N` boundary points of the target chart and
//! recovering `N` coefficients by a discrete Fourier transform. `M` grows
//! past `2N` when the sampled functions have singularities close to the
//! disc, so that aliasing stays below the truncation error.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::domains::{image_disc, inclusion_margin, unit_circle, verify_inclusions, ChartedDisc};
use crate::error::{Error, Result};
use crate::layout::{EdgeKind, Layout, Strand};
use crate::moebius::{Generators, GroupElement, SurfaceParams};
use crate::specialfun::{bernoulli_even, hurwitz_zeta_batch};
use crate::C64;

pub type CMatrix = DMatrix<C64>;

/// Distance from a continuation pole `s = (1-k)/2` below which the continued
/// parabolic block refuses to evaluate.
pub const POLE_GUARD: f64 = 1e-8;

pub const MIN_BASIS: usize = 4;
pub const MAX_BASIS: usize = 256;

/// Terms of the expansion of a tail-node basis function about 0.
const TAIL_TERMS: usize = 60;
/// Samples for that expansion.
const TAIL_SAMPLES: usize = 512;

/// How the parabolic sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Method {
    /// Term-wise summation with an Euler-Maclaurin tail; needs `Re s > 1/2`.
    Direct { tol: f64 },
    /// Closed form through Hurwitz zeta values; valid off `s = (1-k)/2`.
    #[default]
    Continued,
}

/// Which determinant factor an operator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// An assembled operator as a grid of `N x N` blocks, `None` marking zeros.
/// Block `(i, j)` maps coefficients on node `j` to coefficients on node `i`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub lambda: f64,
    pub s: C64,
    pub basis: usize,
    pub method: Method,
    pub sign: Option<Sign>,
    pub strands: Vec<Strand>,
    pub blocks: Vec<Vec<Option<CMatrix>>>,
}

impl OperatorMatrix {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&CMatrix> {
        self.blocks[i][j].as_ref()
    }

    pub fn dim(&self) -> usize {
        self.basis * self.blocks.len()
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.basis;
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    m.view_mut((i * n, j * n), (n, n)).copy_from(b);
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.blocks.len())
            .filter_map(|i| self.blocks[i][i].as_ref().map(|b| b.trace()))
            .sum()
    }

    /// True if no block maps strand `from` into strand `to`.
    pub fn strand_block_is_zero(&self, to: Strand, from: Strand) -> bool {
        self.blocks.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, b)| b.is_none() || self.strands[i] != to || self.strands[j] != from)
        })
    }
}

/// Expansion of the tail node basis about 0 and where the closed form
/// takes over from explicit terms, for one tail edge.
#[derive(Debug, Clone)]
struct TailPlan {
    edge: usize,
    start: u32,
    /// First index summed through Hurwitz zeta values.
    n0: u32,
    /// `kappa(w)^k = sum_m coeffs[(k, m)] w^m` near 0.
    coeffs: CMatrix,
    /// Radius on which the source chart is analytic and bounded by 1, about 0.
    radius: f64,
}

/// Everything that depends on `(lambda, N)` but not on `s`.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    pub params: SurfaceParams,
    pub gens: Generators,
    pub layout: Layout,
    pub basis: usize,
    /// Boundary samples per block.
    pub samples: usize,
    /// Roots of unity of order `samples`.
    circle: Vec<C64>,
    tails: Vec<TailPlan>,
}

impl OperatorContext {
    /// Context on the refined layout.
    pub fn new(params: SurfaceParams, basis: usize) -> Result<Self> {
        let layout = Layout::refined(params)?;
        Self::with_layout(params, layout, basis)
    }

    pub fn with_layout(params: SurfaceParams, layout: Layout, basis: usize) -> Result<Self> {
        let samples = layout.samples_for(basis);
        Self::with_samples(params, layout, basis, samples)
    }

    /// Context with an explicit number of boundary samples per block.
    pub fn with_samples(params: SurfaceParams, layout: Layout, basis: usize, samples: usize) -> Result<Self> {
        if samples < 2 * basis {
            return Err(Error::InvalidArgument(format!("need at least 2N = {} samples (got {samples})", 2 * basis)));
        }
        if !(MIN_BASIS..=MAX_BASIS).contains(&basis) {
            return Err(Error::InvalidArgument(format!(
                "basis size must lie in [{MIN_BASIS}, {MAX_BASIS}] (got {basis})"
            )));
        }
        verify_inclusions(params, 50)?;
        let gens = params.generators();
        let mut tails = Vec::new();
        for (idx, e) in layout.edges.iter().enumerate() {
            if let EdgeKind::ParabolicTail { start } = e.kind {
                let src = layout.nodes[e.source].chart;
                let tgt = layout.nodes[e.target].chart;
                tails.push(tail_plan(&gens, idx, start, &src, &tgt, basis)?);
            }
        }
        Ok(Self {
            params,
            gens,
            layout,
            basis,
            samples,
            circle: unit_circle(samples),
            tails,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda()
    }

    pub fn chart(&self, node: usize) -> &ChartedDisc {
        &self.layout.nodes[node].chart
    }

    /// Block `f -> j_s(h, .) f(h .)` from `source` coefficients to `target`
    /// coefficients.
    pub fn compose_block(&self, h: &GroupElement, source: &ChartedDisc, target: &ChartedDisc, s: C64) -> Result<CMatrix> {
        compose_rows(h, source, target, s, self.basis, self.samples).map(|rows| self.transform(&rows))
    }

    /// Block of a parabolic tail edge of the layout.
    fn tail_block(&self, plan: &TailPlan, s: C64, method: Method) -> Result<CMatrix> {
        let e = &self.layout.edges[plan.edge];
        let src = *self.chart(e.source);
        let tgt = *self.chart(e.target);
        let samples = tgt.boundary_samples(self.samples);
        let rows: Vec<Vec<C64>> = match method {
            Method::Continued => {
                check_pole(s, TAIL_TERMS.max(self.basis))?;
                samples
                    .par_iter()
                    .map(|&z| self.parabolic_continued(plan, &src, z, s))
                    .collect::<Result<_>>()?
            }
            Method::Direct { tol } => {
                if !(s.re > 0.5) {
                    return Err(Error::DirectRequiresHalfPlane(s));
                }
                samples
                    .par_iter()
                    .map(|&z| self.parabolic_direct(plan, &src, z, s, tol))
                    .collect::<Result<_>>()?
            }
        };
        Ok(self.transform(&rows))
    }

    /// The parabolic tail blocks stacked by target node: the part of the
    /// operator carrying the continuation poles. On the standard layout this
    /// is the single block `sum_{n>=1} tau_s(h1^{-n})` from `E2` to `E1`.
    pub fn parabolic_block(&self, s: C64, method: Method) -> Result<CMatrix> {
        let n = self.basis;
        let parts: Vec<CMatrix> = self
            .tails
            .iter()
            .map(|p| self.tail_block(p, s, method))
            .collect::<Result<_>>()?;
        let mut out = CMatrix::zeros(n * parts.len(), n);
        for (i, b) in parts.iter().enumerate() {
            out.view_mut((i * n, 0), (n, n)).copy_from(b);
        }
        Ok(out)
    }

    /// Realisation of `L+-` on the layout: plain branches `h2^{-1}`,
    /// parabolic branches, and the twisted branch `tau h2^{-1}` with weight
    /// `+-1`.
    pub fn assemble_pm(&self, s: C64, sign: Sign, method: Method) -> Result<OperatorMatrix> {
        let (plain, twisted) = self.pm_parts(s, method)?;
        Ok(self.combine(s, sign, method, &plain, &twisted))
    }

    /// `diag(L+, L-)`, the realisation of the full operator.
    pub fn assemble_full(&self, s: C64, method: Method) -> Result<OperatorMatrix> {
        let (plain, twisted) = self.pm_parts(s, method)?;
        let p = self.combine(s, Sign::Plus, method, &plain, &twisted);
        let m = self.combine(s, Sign::Minus, method, &plain, &twisted);
        let k = p.blocks.len();
        let mut blocks: Vec<Vec<Option<CMatrix>>> = vec![vec![None; 2 * k]; 2 * k];
        for (off, op) in [(0, p), (k, m)] {
            for (i, row) in op.blocks.into_iter().enumerate() {
                for (j, b) in row.into_iter().enumerate() {
                    blocks[off + i][off + j] = b;
                }
            }
        }
        let mut strands = self.strands();
        strands.extend(self.strands());
        Ok(OperatorMatrix {
            lambda: self.lambda(),
            s,
            basis: self.basis,
            method,
            sign: None,
            strands,
            blocks,
        })
    }

    /// Both factors from one evaluation of the shared blocks.
    pub fn assemble_both(&self, s: C64, method: Method) -> Result<(OperatorMatrix, OperatorMatrix)> {
        let (plain, twisted) = self.pm_parts(s, method)?;
        Ok((
            self.combine(s, Sign::Plus, method, &plain, &twisted),
            self.combine(s, Sign::Minus, method, &plain, &twisted),
        ))
    }

    fn strands(&self) -> Vec<Strand> {
        self.layout.nodes.iter().map(|n| n.strand).collect()
    }

    /// The block of one edge of the layout.
    pub fn edge_block(&self, edge: usize, s: C64, method: Method) -> Result<CMatrix> {
        let e = &self.layout.edges[edge];
        match &e.kind {
            EdgeKind::Single(h) => self.compose_block(h, self.chart(e.source), self.chart(e.target), s),
            EdgeKind::ParabolicTail { .. } => {
                let plan = self
                    .tails
                    .iter()
                    .find(|p| p.edge == edge)
                    .expect("every tail edge has a plan");
                self.tail_block(plan, s, method)
            }
        }
    }

    /// Untwisted and twisted parts per block position.
    #[allow(clippy::type_complexity)]
    fn pm_parts(&self, s: C64, method: Method) -> Result<(Vec<Vec<Option<CMatrix>>>, Vec<Vec<Option<CMatrix>>>)> {
        let k = self.layout.nodes.len();
        let blocks: Vec<CMatrix> = (0..self.layout.edges.len())
            .into_par_iter()
            .map(|i| self.edge_block(i, s, method))
            .collect::<Result<_>>()?;
        let mut plain: Vec<Vec<Option<CMatrix>>> = vec![vec![None; k]; k];
        let mut twisted: Vec<Vec<Option<CMatrix>>> = vec![vec![None; k]; k];
        for (e, b) in self.layout.edges.iter().zip(blocks) {
            let slot = if e.twisted { &mut twisted } else { &mut plain };
            let cell = &mut slot[e.target][e.source];
            *cell = Some(match cell.take() {
                Some(acc) => acc + b,
                None => b,
            });
        }
        Ok((plain, twisted))
    }

    fn combine(
        &self,
        s: C64,
        sign: Sign,
        method: Method,
        plain: &[Vec<Option<CMatrix>>],
        twisted: &[Vec<Option<CMatrix>>],
    ) -> OperatorMatrix {
        let w = C64::new(sign.value(), 0.0);
        let blocks = plain
            .iter()
            .zip(twisted)
            .map(|(pr, tr)| {
                pr.iter()
                    .zip(tr)
                    .map(|(p, t)| match (p, t) {
                        (None, None) => None,
                        (Some(p), None) => Some(p.clone()),
                        (None, Some(t)) => Some(t * w),
                        (Some(p), Some(t)) => Some(p + t * w),
                    })
                    .collect()
            })
            .collect();
        OperatorMatrix {
            lambda: self.lambda(),
            s,
            basis: self.basis,
            method,
            sign: Some(sign),
            strands: self.strands(),
            blocks,
        }
    }

    /// Coefficients from boundary samples, one row of column values per sample.
    fn transform(&self, rows: &[Vec<C64>]) -> CMatrix {
        coefficients(rows, &self.circle, self.basis)
    }

    /// Adds `j_s(h1^t, z) kappa(h1^t z)^k` for all `k`.
    fn parabolic_term(&self, src: &ChartedDisc, z: C64, s: C64, t: C64, out: &mut [C64]) {
        // h1^t z = z/(1 - t l z), j = (t l z - 1)^{-2s} right of the poles
        let a = t * self.lambda() * z - 1.0;
        let j = (-2.0 * s * a.ln()).exp();
        let u = src.to_unit(-z / a);
        let mut p = j;
        for v in out.iter_mut() {
            *v += p;
            p *= u;
        }
    }

    fn parabolic_continued(&self, plan: &TailPlan, src: &ChartedDisc, z: C64, s: C64) -> Result<Vec<C64>> {
        let n = self.basis;
        let l = self.lambda();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in plan.start..plan.n0 {
            self.parabolic_term(src, z, s, C64::new(k as f64, 0.0), &mut out);
        }
        // sum_{k>=n0} (k l z - 1)^{-2s} (-z/(k l z - 1))^m
        //   = (-z)^m (l z)^{-2s-m} zeta_H(2s+m, n0 - 1/(l z))
        let lz = l * z;
        let q = plan.n0 as f64 - 1.0 / lz;
        let zetas = hurwitz_zeta_batch(2.0 * s, q, TAIL_TERMS)?;
        let ratio = -z / lz;
        let mut p = (-2.0 * s * lz.ln()).exp();
        let mut tail = Vec::with_capacity(TAIL_TERMS);
        for zeta in &zetas {
            tail.push(p * zeta);
            p *= ratio;
        }
        for (k, v) in out.iter_mut().enumerate() {
            *v += (0..TAIL_TERMS).map(|m| plan.coeffs[(k, m)] * tail[m]).sum::<C64>();
        }
        Ok(out)
    }

    fn parabolic_direct(&self, plan: &TailPlan, src: &ChartedDisc, z: C64, s: C64, tol: f64) -> Result<Vec<C64>> {
        let n = self.basis;
        let mut head_len = (4 * plan.n0 as usize).max(64);
        loop {
            let mut out = vec![C64::new(0.0, 0.0); n];
            for k in plan.start as usize..head_len {
                self.parabolic_term(src, z, s, C64::new(k as f64, 0.0), &mut out);
            }
            let (tail, last) = self.em_tail(plan, src, z, s, head_len as f64);
            let scale = out.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
            if last <= tol * scale {
                for (o, t) in out.iter_mut().zip(tail) {
                    *o += t;
                }
                return Ok(out);
            }
            head_len *= 4;
            if head_len > 1_000_000 {
                return Err(Error::ConvergenceFailure(format!(
                    "direct parabolic tail above tolerance {tol:e} at s = {s}"
                )));
            }
        }
    }

    /// Euler-Maclaurin remainder `sum_{t >= m} F(t)` of the parabolic
    /// summand and the magnitude of its last correction.
    fn em_tail(&self, plan: &TailPlan, src: &ChartedDisc, z: C64, s: C64, m: f64) -> (Vec<C64>, f64) {
        const CORRECTIONS: usize = 6;
        const CAUCHY_POINTS: usize = 64;
        const TAYLOR_POINTS: usize = 48;
        let n = self.basis;
        let lz = self.lambda() * z;
        let two_s = 2.0 * s;

        // integral: with v = 1/t, int_m^inf F = int_0^{1/m} v^{2s-2} H(v) dv,
        // H(v) = (lz - v)^{-2s} kappa(z v / (v - lz))^k, holomorphic while
        // |v| < Re lz and the argument of kappa stays near 0
        let half = 0.5 * plan.radius;
        let rho = (0.5 * lz.re).min(half * lz.norm() / (z.norm() + half));
        let mut h_coef = vec![vec![C64::new(0.0, 0.0); n]; TAYLOR_POINTS];
        for jj in 0..TAYLOR_POINTS {
            let om = C64::from_polar(1.0, std::f64::consts::TAU * jj as f64 / TAYLOR_POINTS as f64);
            let v = om * rho;
            let jv = (-two_s * (lz - v).ln()).exp();
            let u = src.to_unit(z * v / (v - lz));
            let mut p = jv;
            for k in 0..n {
                for (pp, row) in h_coef.iter_mut().enumerate() {
                    row[k] += p * om.powi(-(pp as i32));
                }
                p *= u;
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (pp, row) in h_coef.iter().enumerate() {
            // H_p = row / (K rho^p); int_0^{1/m} v^{2s-2+p} = m^{-(2s-1+p)}/(2s-1+p)
            let e = two_s - 1.0 + pp as f64;
            let factor = (-e * m.ln()).exp() / e / (TAYLOR_POINTS as f64 * rho.powi(pp as i32));
            for (o, r) in out.iter_mut().zip(row) {
                *o += r * factor;
            }
        }

        // F(m)/2 and derivatives by Cauchy integrals on |t - m| = m/2
        let mut at_m = vec![C64::new(0.0, 0.0); n];
        self.parabolic_term(src, z, s, C64::new(m, 0.0), &mut at_m);
        for (o, f) in out.iter_mut().zip(&at_m) {
            *o += f * 0.5;
        }
        let r = 0.5 * m;
        let mut derivs = vec![vec![C64::new(0.0, 0.0); n]; 2 * CORRECTIONS];
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for jj in 0..CAUCHY_POINTS {
            let om = C64::from_polar(1.0, std::f64::consts::TAU * jj as f64 / CAUCHY_POINTS as f64);
            buf.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
            self.parabolic_term(src, z, s, om * r + m, &mut buf);
            for (order, d) in derivs.iter_mut().enumerate() {
                let w = om.powi(-(order as i32));
                for (dk, b) in d.iter_mut().zip(&buf) {
                    *dk += b * w;
                }
            }
        }
        let mut last = 0.0;
        let mut fact = 1.0f64; // (2j-1)!
        let mut fact2 = 2.0f64; // (2j)!
        for j in 1..=CORRECTIONS {
            let order = 2 * j - 1;
            if j > 1 {
                fact *= (order - 1) as f64 * order as f64;
                fact2 *= (2 * j - 1) as f64 * (2 * j) as f64;
            }
            // F^{(r)}(m) = r! / (K r^r) sum F omega^{-jr}
            let c = bernoulli_even(j) / fact2 * fact / (CAUCHY_POINTS as f64 * r.powi(order as i32));
            last = 0.0;
            for (o, d) in out.iter_mut().zip(&derivs[order]) {
                let t = d * c;
                *o -= t;
                last = f64::max(last, t.norm());
            }
        }
        (out, last)
    }
}

/// Expansion of the source chart about 0 and the first index from which
/// every tail point lies within half its radius of analyticity.
fn tail_plan(
    gens: &Generators,
    edge: usize,
    start: u32,
    src: &ChartedDisc,
    tgt: &ChartedDisc,
    basis: usize,
) -> Result<TailPlan> {
    let d = src.disc;
    if !(d.left() < 0.0 && d.right() > 0.0) {
        return Err(Error::InvalidArgument("tail node must contain 0".into()));
    }
    let radius = 0.9 * d.left().abs().min(d.right());
    let mut n0 = start;
    loop {
        let img = image_disc(&gens.h1.pow(n0 as i64), &tgt.disc)?;
        if img.left().abs().max(img.right().abs()) <= 0.5 * radius {
            break;
        }
        n0 += 1;
        if n0 > 100_000 {
            return Err(Error::ConvergenceFailure("tail start does not converge".into()));
        }
    }
    // kappa^k sampled on |w| = radius, where |kappa| < 1
    let k_max = basis;
    let mut coeffs = CMatrix::zeros(k_max, TAIL_TERMS);
    let mut vals = vec![C64::new(0.0, 0.0); k_max];
    for j in 0..TAIL_SAMPLES {
        let om = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / TAIL_SAMPLES as f64);
        let u = src.to_unit(om * radius);
        let mut p = C64::new(1.0, 0.0);
        for v in vals.iter_mut() {
            *v = p;
            p *= u;
        }
        let mut w = C64::new(1.0 / TAIL_SAMPLES as f64, 0.0);
        let step = om.conj() / radius;
        for m in 0..TAIL_TERMS {
            for k in 0..k_max {
                coeffs[(k, m)] += vals[k] * w;
            }
            w *= step;
        }
    }
    Ok(TailPlan {
        edge,
        start,
        n0,
        coeffs,
        radius,
    })
}

/// Rejects `s` near `(1-k)/2` for `k < n`.
fn check_pole(s: C64, n: usize) -> Result<()> {
    for k in 0..n.max(1) {
        let pole = 0.5 * (1.0 - k as f64);
        if (s - pole).norm() < POLE_GUARD {
            return Err(Error::PoleOfContinuation(s));
        }
    }
    Ok(())
}

/// Taylor coefficients from samples at the roots of unity in `circle`.
/// Conjugate sample pairs are combined first, so conjugating every sample
/// value and reversing the samples conjugates the result exactly.
fn coefficients(rows: &[Vec<C64>], circle: &[C64], basis: usize) -> CMatrix {
    let m = circle.len();
    let scale = 1.0 / m as f64;
    CMatrix::from_fn(basis, basis, |k, col| {
        let mut acc = rows[0][col];
        for j in 1..m.div_ceil(2) {
            // omega^{-jk}
            let w = circle[(j * k) % m].conj();
            acc += w * rows[j][col] + w.conj() * rows[m - j][col];
        }
        if m.is_multiple_of(2) {
            acc += circle[(m / 2 * k) % m] * rows[m / 2][col];
        }
        acc * scale
    })
}

fn compose_rows(
    h: &GroupElement,
    source: &ChartedDisc,
    target: &ChartedDisc,
    s: C64,
    basis: usize,
    samples: usize,
) -> Result<Vec<Vec<C64>>> {
    let img = image_disc(h, &target.disc)?;
    let margin = inclusion_margin(&img, &source.disc);
    let identity = h.approx_eq(&GroupElement::identity()) && margin > -1e-12;
    if !(margin > 0.0 || identity) {
        return Err(Error::InclusionViolated {
            condition: format!("h.closure(target) in source for h = {:?}", h.entries()),
            margin,
        });
    }
    target
        .boundary_samples(samples)
        .iter()
        .map(|&z| {
            let j = h.cocycle_j(s, z)?;
            let u = source.to_unit(h.apply_c(z));
            let mut row = Vec::with_capacity(basis);
            let mut p = j;
            for _ in 0..basis {
                row.push(p);
                p *= u;
            }
            Ok(row)
        })
        .collect()
}

/// Free-standing block `f -> j_s(h, .) f(h .)` from `source` coefficients
/// to `target` coefficients.
pub fn compose_block(h: &GroupElement, source: &ChartedDisc, target: &ChartedDisc, s: C64, basis: usize) -> Result<CMatrix> {
    if !(MIN_BASIS..=MAX_BASIS).contains(&basis) {
        return Err(Error::InvalidArgument(format!("basis size {basis} out of range")));
    }
    let rows = compose_rows(h, source, target, s, basis, 2 * basis)?;
    Ok(coefficients(&rows, &unit_circle(2 * basis), basis))
}

/// Numerical rank of the residue of the parabolic blocks at a continuation
/// pole, and of the full operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRank {
    pub s0: f64,
    /// Rank per parabolic block (the same block appears in `L+` and `L-`).
    pub per_block: Vec<usize>,
    pub total: usize,
    pub singular_values: Vec<f64>,
}

/// `(s - s0) B(s)` for the parabolic blocks, extrapolated to `s -> s0` by
/// Richardson from `eps in {1e-3, 5e-4, 2.5e-4}`. With `offset != 0` the
/// same combination is formed around `s0 + offset`.
pub fn residue_matrix(ctx: &OperatorContext, s0: f64, offset: f64) -> Result<CMatrix> {
    let eps = [1e-3, 5e-4, 2.5e-4];
    let a: Vec<CMatrix> = eps
        .iter()
        .map(|&e| {
            let s = C64::new(s0 + offset + e, 0.0);
            ctx.parabolic_block(s, Method::Continued).map(|b| b * C64::new(e + offset, 0.0))
        })
        .collect::<Result<_>>()?;
    // error expansion in powers of eps with ratio 1/2
    let r1 = &a[1] * C64::new(2.0, 0.0) - &a[0];
    let r2 = &a[2] * C64::new(2.0, 0.0) - &a[1];
    Ok((r2 * C64::new(4.0, 0.0) - r1) / C64::new(3.0, 0.0))
}

/// Number of singular values above `rel` times the largest, and all of them
/// in decreasing order.
pub fn numerical_rank(m: &CMatrix, rel: f64) -> (usize, Vec<f64>) {
    let sv = m.clone().svd(false, false).singular_values;
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let top = v.first().copied().unwrap_or(0.0);
    let rank = v.iter().filter(|&&x| x > rel * top && top > 0.0).count();
    (rank, v)
}

pub fn residue_rank(params: SurfaceParams, s0: f64, basis: usize) -> Result<ResidueRank> {
    let k = 1.0 - 2.0 * s0;
    if k < -1e-12 || (k - k.round()).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("{s0} is not of the form (1-k)/2")));
    }
    let ctx = OperatorContext::new(params, basis)?;
    let res = residue_matrix(&ctx, s0, 0.0)?;
    let (rank, sv) = numerical_rank(&res, 1e-8);
    Ok(ResidueRank {
        s0,
        per_block: vec![rank, rank],
        total: 2 * rank,
        singular_values: sv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::standard_discs;

    fn ctx(l: f64, n: usize) -> OperatorContext {
        OperatorContext::new(SurfaceParams::new(l).unwrap(), n).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_block() {
        let p = SurfaceParams::new(3.0).unwrap();
        let e1 = ChartedDisc::centered(standard_discs(p).e1);
        let b = compose_block(&GroupElement::identity(), &e1, &e1, c(1.3, 0.2), 8).unwrap();
        assert!(max_abs(&(b - CMatrix::identity(8, 8))) < 1e-13);
    }

    #[test]
    fn single_element_trace() {
        let p = SurfaceParams::new(3.0).unwrap();
        let g = p.generators();
        let e1 = standard_discs(p).e1;
        let h2i = g.h2.inverse();
        let img = image_disc(&h2i, &e1).unwrap();
        let chart = ChartedDisc::adapted(e1, img.left(), img.right()).unwrap();
        let t = compose_block(&h2i, &chart, &chart, c(1.0, 0.0), 32).unwrap().trace();
        let n = (7.0 + 3.0 * 5f64.sqrt()) / 2.0;
        let expect = 1.0 / (n * (1.0 - 1.0 / n));
        assert!((t - expect).norm() < 1e-12, "{t} vs {expect}");
        assert!((expect - 0.170_820_393_2).abs() < 1e-10);
        let t16 = compose_block(&h2i, &chart, &chart, c(1.0, 0.0), 16).unwrap().trace();
        assert!((t - t16).norm() < 1e-10);
    }

    #[test]
    fn compose_rejects_bad_inclusion() {
        let p = SurfaceParams::new(3.0).unwrap();
        let g = p.generators();
        let d = standard_discs(p);
        let (e1, e2) = (ChartedDisc::centered(d.e1), ChartedDisc::centered(d.e2));
        // h1 maps E1 into E2, not into E1
        assert!(matches!(
            compose_block(&g.h1, &e1, &e1, c(1.0, 0.0), 8),
            Err(Error::InclusionViolated { .. })
        ));
        assert!(compose_block(&g.h1, &e2, &e1, c(1.0, 0.0), 8).is_ok());
    }

    #[test]
    fn direct_and_continued_agree() {
        let x = ctx(3.0, 24);
        for s in [c(2.0, 0.0), c(0.6, 0.0), c(1.0, 3.0), c(0.75, -1.5)] {
            let d = x.parabolic_block(s, Method::Direct { tol: 1e-13 }).unwrap();
            let k = x.parabolic_block(s, Method::Continued).unwrap();
            let err = max_abs(&(&d - &k));
            assert!(err < 1e-10 * max_abs(&k).max(1.0), "s={s} err={err:e}");
        }
    }

    #[test]
    fn standard_layout_direct_and_continued_agree() {
        let p = SurfaceParams::new(3.0).unwrap();
        let x = OperatorContext::with_layout(p, Layout::standard(p).unwrap(), 16).unwrap();
        let s = c(1.2, 0.5);
        let d = x.parabolic_block(s, Method::Direct { tol: 1e-13 }).unwrap();
        let k = x.parabolic_block(s, Method::Continued).unwrap();
        assert_eq!(k.shape(), (16, 16));
        assert!(max_abs(&(&d - &k)) < 1e-10 * max_abs(&k).max(1.0));
    }

    #[test]
    fn continued_past_the_half_plane() {
        let x = ctx(3.0, 24);
        let b = x.parabolic_block(c(0.25, 0.0), Method::Continued).unwrap();
        assert!(b.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
        assert!(matches!(
            x.parabolic_block(c(0.25, 0.0), Method::Direct { tol: 1e-10 }),
            Err(Error::DirectRequiresHalfPlane(_))
        ));
        assert!(matches!(
            x.parabolic_block(c(0.5, 0.0), Method::Continued),
            Err(Error::PoleOfContinuation(_))
        ));
        assert!(matches!(
            x.parabolic_block(c(-1.0, 0.0), Method::Continued),
            Err(Error::PoleOfContinuation(_))
        ));
    }

    #[test]
    fn pm_structure_and_traces() {
        let x = ctx(3.0, 32);
        let s = c(1.0, 0.0);
        let (p, m) = x.assemble_both(s, Method::Continued).unwrap();
        assert!(p.strand_block_is_zero(Strand::Two, Strand::Two));
        let n = (7.0 + 3.0 * 5f64.sqrt()) / 2.0;
        let nj = (11.0 + 117f64.sqrt()) / 2.0;
        let closed = |w: f64| 1.0 / (n - 1.0) + w / nj / (1.0 + 1.0 / nj);
        assert!((p.trace() - closed(1.0)).norm() < 1e-10, "{}", p.trace() - closed(1.0));
        assert!((m.trace() - closed(-1.0)).norm() < 1e-10);
        let full = x.assemble_full(s, Method::Continued).unwrap();
        assert_eq!(full.dim(), 2 * p.dim());
        assert!((full.trace() - p.trace() - m.trace()).norm() < 1e-14);
    }

    #[test]
    fn standard_layout_has_zero_corner() {
        let p = SurfaceParams::new(3.0).unwrap();
        let x = OperatorContext::with_layout(p, Layout::standard(p).unwrap(), 4).unwrap();
        let op = x.assemble_pm(c(2.0, 0.0), Sign::Plus, Method::Continued).unwrap();
        assert_eq!(op.block_count(), 2);
        assert!(op.block(1, 1).is_none());
    }

    #[test]
    fn conjugate_symmetry() {
        let x = ctx(3.0, 16);
        let s = c(0.7, 2.3);
        let a = x.assemble_full(s, Method::Continued).unwrap().dense();
        let b = x.assemble_full(s.conj(), Method::Continued).unwrap().dense();
        assert!(max_abs(&(a.map(|v| v.conj()) - b)) < 1e-12);
    }

    #[test]
    fn residues_have_rank_one() {
        for s0 in [0.5, 0.0, -0.5] {
            let r = residue_rank(SurfaceParams::new(3.0).unwrap(), s0, 24).unwrap();
            assert_eq!(r.per_block, vec![1, 1], "s0={s0}: {:?}", &r.singular_values[..4]);
            assert_eq!(r.total, 2);
        }
    }

    #[test]
    fn tail_expansion_matches_chart() {
        let x = ctx(3.0, 12);
        let plan = &x.tails[0];
        let src = x.chart(x.layout.tail_node());
        let w = C64::from_polar(0.4 * plan.radius, 0.7);
        let u = src.to_unit(w);
        for k in 0..12 {
            let v: C64 = (0..TAIL_TERMS).map(|m| plan.coeffs[(k, m)] * w.powi(m as i32)).sum();
            assert!((v - u.powi(k as i32)).norm() < 1e-13, "k={k}");
        }
    }
}
