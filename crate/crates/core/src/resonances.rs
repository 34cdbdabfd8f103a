//! Zeros of the zeta function: the leading real zero `delta`, grid scans,
//! argument-principle counting and Newton refinement.

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transferop::{CMatrix, Method, OperatorContext};
use crate::zeta::ZetaOperator;
use crate::C64;

/// Grid points closer than this to a continuation pole are flagged.
pub const GRID_POLE_DISTANCE: f64 = 1e-2;
/// Boxes whose boundary comes closer than this to a pole are rejected.
pub const BOX_POLE_DISTANCE: f64 = 0.05;
/// Smallest `|Z|` accepted on a contour.
pub const BOUNDARY_FLOOR: f64 = 1e-10;
/// Residual a refined zero must reach.
pub const ZERO_RESIDUAL: f64 = 1e-9;
/// Largest residual accepted for a zero whose Newton steps have settled at
/// the evaluation noise.
pub const NOISE_RESIDUAL: f64 = 1e-6;
/// Relative Newton step below which the iterate counts as settled.
const NOISE_STEP: f64 = 1e-8;

/// Continuation poles `s = (1-k)/2` are real and at most `1/2`.
fn nearest_pole_distance(s: C64) -> f64 {
    let k = (1.0 - 2.0 * s.re).round().max(0.0);
    (s - C64::new(0.5 * (1.0 - k), 0.0)).norm()
}

/// Closed rectangle `[re.0, re.1] x [im.0, im.1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Rect {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Result<Self> {
        if !(re0 < re1 && im0 < im1) || ![re0, re1, im0, im1].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument(format!("empty rectangle [{re0}, {re1}] x [{im0}, {im1}]")));
        }
        Ok(Self { re: (re0, re1), im: (im0, im1) })
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re,
            im: (-self.im.1, -self.im.0),
        }
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }

    pub fn contains(&self, s: C64) -> bool {
        s.re >= self.re.0 && s.re <= self.re.1 && s.im >= self.im.0 && s.im <= self.im.1
    }

    fn grown(&self, by: f64) -> Self {
        Self {
            re: (self.re.0 - by, self.re.1 + by),
            im: (self.im.0 - by, self.im.1 + by),
        }
    }

    fn size(&self) -> f64 {
        (self.re.1 - self.re.0).max(self.im.1 - self.im.0)
    }

    /// Counter-clockwise corners.
    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re.0, self.im.0),
            C64::new(self.re.1, self.im.0),
            C64::new(self.re.1, self.im.1),
            C64::new(self.re.0, self.im.1),
        ]
    }

    /// Quadrants split at the fractions `(fx, fy)` of the sides.
    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let x = self.re.0 + fx * (self.re.1 - self.re.0);
        let y = self.im.0 + fy * (self.im.1 - self.im.0);
        [
            Rect { re: (self.re.0, x), im: (self.im.0, y) },
            Rect { re: (x, self.re.1), im: (self.im.0, y) },
            Rect { re: (self.re.0, x), im: (y, self.im.1) },
            Rect { re: (x, self.re.1), im: (y, self.im.1) },
        ]
    }

    /// Distance from the boundary to the nearest continuation pole, negative
    /// if a pole lies inside.
    fn pole_clearance(&self) -> (f64, f64) {
        let mut worst = (f64::INFINITY, 0.0);
        let kmax = (1.0 - 2.0 * self.re.0).ceil().max(0.0) as usize + 1;
        for k in 0..=kmax {
            let p = 0.5 * (1.0 - k as f64);
            let dx = (self.re.0 - p).max(p - self.re.1).max(0.0);
            let dy = self.im.0.max(-self.im.1).max(0.0);
            let outside = dx.hypot(dy);
            let d = if outside > 0.0 {
                outside
            } else {
                -[p - self.re.0, self.re.1 - p, -self.im.0, self.im.1].into_iter().fold(f64::INFINITY, f64::min)
            };
            if d.abs() < worst.0.abs() || d < 0.0 {
                worst = (d, p);
                if d < 0.0 {
                    break;
                }
            }
        }
        worst
    }
}

/// Largest-modulus eigenvalue of the full operator `diag(L+, L-)` at `s`.
pub fn leading_eigenvalue(ctx: &OperatorContext, s: C64) -> Result<C64> {
    let (p, m) = ctx.assemble_both(s, Method::Continued)?;
    let lead = |a: CMatrix| -> Result<C64> {
        let ev = a
            .schur()
            .eigenvalues()
            .ok_or_else(|| Error::ConvergenceFailure("eigenvalues of the assembled operator".into()))?;
        Ok(ev.iter().copied().fold(C64::new(0.0, 0.0), |b, x| if x.norm() > b.norm() { x } else { b }))
    };
    let (a, b) = (lead(p.dense())?, lead(m.dense())?);
    Ok(if a.norm() >= b.norm() { a } else { b })
}

/// The leading real zero `delta` of `Z`, where the leading eigenvalue of the
/// operator at real `s` passes through 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub delta: f64,
    /// `lambda_max(L_delta) - 1`.
    pub eigen_residual: f64,
    /// `|Z(delta)|`.
    pub zeta_residual: f64,
}

/// Solves `lambda_max(L_s) = 1` on `(1/2, 1)` by regula falsi with
/// bisection safeguards, to `|lambda_max - 1| < tol`.
pub fn find_delta(op: &ZetaOperator, tol: f64) -> Result<Delta> {
    let ctx = &op.fine;
    let f = |s: f64| -> Result<f64> { Ok(leading_eigenvalue(ctx, C64::new(s, 0.0))?.re - 1.0) };
    let (mut a, mut b) = (0.5 + 1e-4, 1.0);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if !(fa > 0.0) {
        return Err(Error::NotBracketed(format!("lambda_max({a}) - 1 = {fa:e}: delta would not exceed 1/2")));
    }
    if !(fb < 0.0) {
        return Err(Error::NotBracketed(format!("lambda_max(1) - 1 = {fb:e}")));
    }
    let mut side = 0i32;
    let mut best = (a, fa);
    for it in 0..200 {
        // Illinois variant; every fourth step bisects to bound the bracket
        let mut x = if it % 4 == 3 { 0.5 * (a + b) } else { (a * fb - b * fa) / (fb - fa) };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.abs() < tol || (b - a) < 1e-15 {
            break;
        }
        if fx > 0.0 {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    let (delta, residual) = best;
    if residual.abs() >= tol {
        return Err(Error::ConvergenceFailure(format!("delta: |lambda_max - 1| = {:e} at s = {delta}", residual.abs())));
    }
    let z = op.z(C64::new(delta, 0.0))?.norm();
    if z >= 10.0 * tol.max(1e-12) * (1.0 + delta_derivative_scale(op, delta)?) {
        log::warn!("|Z(delta)| = {z:e} exceeds the eigenvalue tolerance");
    }
    Ok(Delta {
        delta,
        eigen_residual: residual,
        zeta_residual: z,
    })
}

/// `|Z'(delta)|` by central differences, the scale relating eigenvalue and
/// determinant residuals.
fn delta_derivative_scale(op: &ZetaOperator, delta: f64) -> Result<f64> {
    Ok(derivative(op, C64::new(delta, 0.0))?.norm())
}

fn derivative(op: &ZetaOperator, s: C64) -> Result<C64> {
    let h = 1e-6 * s.norm().max(1.0);
    let hc = C64::new(h, 0.0);
    Ok((op.z(s + hc)? - op.z(s - hc)?) / (2.0 * h))
}

/// One grid sample of `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub s: C64,
    /// `NaN + NaN i` when not evaluated.
    pub z: C64,
    pub flag: GridFlag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFlag {
    Ok,
    /// Within [`GRID_POLE_DISTANCE`] of a continuation pole.
    NearPole,
    /// Evaluation failed.
    Error,
}

impl std::fmt::Display for GridFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GridFlag::Ok => "ok",
            GridFlag::NearPole => "pole",
            GridFlag::Error => "error",
        })
    }
}

/// Number of grid values from `lo` to `hi` in steps of `step`.
fn grid_count(lo: f64, hi: f64, step: f64) -> usize {
    ((hi - lo) / step + 1e-9).floor() as usize + 1
}

/// `Z` on the grid `re.0 + i step`, `im.0 + j step` covering `region`,
/// real part outermost. Points are evaluated in parallel and returned in a
/// fixed order; failures are recorded in the flag and never abort the scan.
pub fn scan_grid(op: &ZetaOperator, region: Rect, step: f64) -> Result<Vec<GridPoint>> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("grid step must be positive (got {step})")));
    }
    let nr = grid_count(region.re.0, region.re.1, step);
    let ni = grid_count(region.im.0, region.im.1, step);
    let points: Vec<C64> = (0..nr)
        .flat_map(|i| (0..ni).map(move |j| C64::new(region.re.0 + i as f64 * step, region.im.0 + j as f64 * step)))
        .collect();
    Ok(points
        .into_par_iter()
        .map(|s| {
            let nan = C64::new(f64::NAN, f64::NAN);
            if nearest_pole_distance(s) < GRID_POLE_DISTANCE {
                return GridPoint { s, z: nan, flag: GridFlag::NearPole };
            }
            match op.z(s) {
                Ok(z) if z.re.is_finite() && z.im.is_finite() => GridPoint { s, z, flag: GridFlag::Ok },
                _ => GridPoint { s, z: nan, flag: GridFlag::Error },
            }
        })
        .collect())
}

/// Header of the grid CSV.
pub const GRID_HEADER: &str = "re_s,im_s,re_Z,im_Z,abs_Z,flag";
/// Header of the zeros CSV.
pub const ZEROS_HEADER: &str = "re,im,residual";

/// Grid points as CSV, header first, `\n` line endings and shortest
/// round-trip numerals (`Debug` formatting, which switches to exponents).
pub fn grid_csv(points: &[GridPoint]) -> String {
    let mut out = String::from(GRID_HEADER);
    out.push('\n');
    for p in points {
        let abs = if p.flag == GridFlag::Ok { p.z.norm() } else { f64::NAN };
        out.push_str(&format!("{:?},{:?},{:?},{:?},{:?},{}\n", p.s.re, p.s.im, p.z.re, p.z.im, abs, p.flag));
    }
    out
}

/// Refined zeros as CSV in the same format as [`grid_csv`].
pub fn zeros_csv(zeros: &[Zero]) -> String {
    let mut out = String::from(ZEROS_HEADER);
    out.push('\n');
    for z in zeros {
        out.push_str(&format!("{:?},{:?},{:?}\n", z.s.re, z.s.im, z.residual));
    }
    out
}

/// A refined zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub s: C64,
    /// `|Z(s)|`.
    pub residual: f64,
}

/// Contour samples per side before adaptive refinement.
const SIDE_SAMPLES: usize = 16;
/// Largest argument increment accepted between neighbouring samples.
const MAX_ARG_STEP: f64 = 0.25;
const MAX_REFINE: usize = 30;
const MAX_DEPTH: usize = 12;

/// Winding number of `Z` around the boundary of `rect`, counter-clockwise.
///
/// The argument is tracked continuously: an edge is halved until its
/// increment of `arg Z` and of `log |Z|` are both small, so no turn is
/// missed between samples.
pub fn winding_number(op: &ZetaOperator, rect: Rect) -> Result<i64> {
    let c = rect.corners();
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (c[k], c[(k + 1) % 4]);
        let ts: Vec<f64> = (0..=SIDE_SAMPLES).map(|i| i as f64 / SIDE_SAMPLES as f64).collect();
        let vals = ts
            .par_iter()
            .map(|&t| eval_boundary(op, a + (b - a) * t))
            .collect::<Result<Vec<C64>>>()?;
        for i in 0..SIDE_SAMPLES {
            total += arg_increment(op, a, b, (ts[i], vals[i]), (ts[i + 1], vals[i + 1]), 0)?;
        }
    }
    let w = total / std::f64::consts::TAU;
    if (w - w.round()).abs() > 1e-3 {
        return Err(Error::WindingNotIntegral(w));
    }
    Ok(w.round() as i64)
}

fn eval_boundary(op: &ZetaOperator, s: C64) -> Result<C64> {
    let z = op.z(s)?;
    if !(z.norm() > BOUNDARY_FLOOR) {
        return Err(Error::BoundaryTooClose { s, abs: z.norm() });
    }
    Ok(z)
}

fn arg_increment(op: &ZetaOperator, a: C64, b: C64, (t0, z0): (f64, C64), (t1, z1): (f64, C64), depth: usize) -> Result<f64> {
    let q = z1 / z0;
    let step = q.arg();
    if (step.abs() < MAX_ARG_STEP && q.norm().ln().abs() < 1.0) || depth >= MAX_REFINE {
        if depth >= MAX_REFINE {
            warn!("contour refinement limit reached near {}", a + (b - a) * t0);
        }
        return Ok(step);
    }
    let tm = 0.5 * (t0 + t1);
    let zm = eval_boundary(op, a + (b - a) * tm)?;
    Ok(arg_increment(op, a, b, (t0, z0), (tm, zm), depth + 1)? + arg_increment(op, a, b, (tm, zm), (t1, z1), depth + 1)?)
}

/// Zeros of `Z` in `rect`, with multiplicity.
///
/// The box is subdivided until every piece holding zeros is small or holds
/// exactly one; each is then refined by Newton's method with a Muller
/// fallback to `|Z| < 1e-9`.
pub fn locate_zeros(op: &ZetaOperator, rect: Rect) -> Result<Vec<Zero>> {
    let (clear, pole) = rect.pole_clearance();
    if clear <= BOX_POLE_DISTANCE {
        return Err(Error::PoleOfContinuation(C64::new(pole, 0.0)));
    }
    let count = winding_number(op, rect)?;
    if count < 0 {
        return Err(Error::ConvergenceFailure(format!("negative winding {count} in a pole-free box")));
    }
    let mut out = Vec::new();
    isolate(op, rect, count as usize, 0, &mut out)?;
    out.sort_by(|x, y| x.s.im.total_cmp(&y.s.im).then(x.s.re.total_cmp(&y.s.re)));
    Ok(out)
}

fn isolate(op: &ZetaOperator, rect: Rect, count: usize, depth: usize, out: &mut Vec<Zero>) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let last_level = depth >= MAX_DEPTH || rect.size() < 1e-6;
    if count == 1 || last_level {
        // Newton may run to a neighbouring zero; only a zero inside counts
        match refine(op, rect.center(), rect) {
            Ok(z) if rect.grown(1e-9).contains(z.s) => {
                out.extend(std::iter::repeat_n(z, count));
                return Ok(());
            }
            Ok(z) if last_level => {
                return Err(Error::ConvergenceFailure(format!("refinement left the box {rect:?} for {}", z.s)));
            }
            Err(e) if last_level => return Err(e),
            _ => {}
        }
    }
    // a split line through a zero stalls the count; shift it off and retry
    let mut last = None;
    for (fx, fy) in [(0.5, 0.5), (0.4631, 0.5377), (0.5419, 0.4583)] {
        let parts = rect.split(fx, fy);
        let counts: Result<Vec<i64>> = parts.iter().map(|p| winding_number(op, *p)).collect();
        match counts {
            Ok(c) if c.iter().all(|&k| k >= 0) && c.iter().sum::<i64>() == count as i64 => {
                for (p, k) in parts.iter().zip(c) {
                    isolate(op, *p, k as usize, depth + 1, out)?;
                }
                return Ok(());
            }
            Ok(c) => last = Some(Error::ConvergenceFailure(format!("sub-box counts {c:?} do not sum to {count}"))),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one split tried"))
}

/// Newton's method from `start`, falling back to Muller's method when
/// Newton leaves the neighbourhood of `rect` or stalls.
pub fn refine(op: &ZetaOperator, start: C64, rect: Rect) -> Result<Zero> {
    let slack = rect.size();
    let near = |s: C64| (s - rect.center()).norm() <= 2.0 * slack + 1e-12;
    if let Some(z) = newton(op, start, &near)? {
        return Ok(z);
    }
    let h = 0.25 * slack.max(1e-6);
    muller(op, [start - h, start + C64::new(0.0, h), start + h], &near)?
        .ok_or_else(|| Error::ConvergenceFailure(format!("no zero refined near {start}")))
}

fn newton(op: &ZetaOperator, start: C64, near: &dyn Fn(C64) -> bool) -> Result<Option<Zero>> {
    let mut s = start;
    let mut z = op.z(s)?;
    let mut best = Zero { s, residual: z.norm() };
    let mut settled = 0;
    for _ in 0..60 {
        if z.norm() < ZERO_RESIDUAL {
            return Ok(Some(polish(op, s, z)?));
        }
        let d = derivative(op, s)?;
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let next = s - z / d;
        if !near(next) {
            return Ok(None);
        }
        let zn = op.z(next)?;
        if zn.norm() < best.residual {
            best = Zero { s: next, residual: zn.norm() };
        }
        // rounding in the entries grows like exp(2 |Im s| arg) and can put
        // the floor of |Z| above the target; steps then wander at that floor
        if (next - s).norm() < NOISE_STEP * next.norm().max(1.0) {
            settled += 1;
            if settled >= 3 && best.residual < NOISE_RESIDUAL {
                warn!("zero at {} refined only to |Z| = {:.1e} (evaluation noise)", best.s, best.residual);
                return Ok(Some(best));
            }
        } else {
            settled = 0;
        }
        s = next;
        z = zn;
    }
    Ok(None)
}

/// One more Newton step when it lowers the residual.
fn polish(op: &ZetaOperator, s: C64, z: C64) -> Result<Zero> {
    let d = derivative(op, s)?;
    if d.norm() > 0.0 {
        let t = s - z / d;
        let zt = op.z(t)?;
        if zt.norm() < z.norm() {
            return Ok(Zero { s: t, residual: zt.norm() });
        }
    }
    Ok(Zero { s, residual: z.norm() })
}

fn muller(op: &ZetaOperator, start: [C64; 3], near: &dyn Fn(C64) -> bool) -> Result<Option<Zero>> {
    let [mut x0, mut x1, mut x2] = start;
    let (mut f0, mut f1, mut f2) = (op.z(x0)?, op.z(x1)?, op.z(x2)?);
    for _ in 0..100 {
        if f2.norm() < ZERO_RESIDUAL {
            return Ok(Some(polish(op, x2, f2)?));
        }
        let (h1, h2) = (x1 - x0, x2 - x1);
        let (d1, d2) = ((f1 - f0) / h1, (f2 - f1) / h2);
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f2).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 {
            return Ok(None);
        }
        let x3 = x2 - 2.0 * f2 / den;
        if !near(x3) {
            return Ok(None);
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1, f2) = (f1, f2, op.z(x3)?);
    }
    Ok(None)
}

/// Region metadata of a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeta {
    pub region: Rect,
    pub step: f64,
    pub basis: usize,
    pub lambda: f64,
}

/// `delta` together with the zeros found in a box.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    pub delta: f64,
    pub zeros: Vec<Zero>,
    pub grid: GridMeta,
}

/// Computes `delta` to `tol` and the zeros in `region`.
pub fn resonance_report(op: &ZetaOperator, region: Rect, step: f64, tol: f64) -> Result<ResonanceReport> {
    let delta = find_delta(op, tol)?.delta;
    let zeros = locate_zeros(op, region)?;
    Ok(ResonanceReport {
        delta,
        zeros,
        grid: GridMeta {
            region,
            step,
            basis: op.basis(),
            lambda: op.fine.lambda(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::SurfaceParams;

    fn op(lambda: f64, n: usize) -> ZetaOperator {
        ZetaOperator::new(SurfaceParams::new(lambda).unwrap(), n).unwrap()
    }

    #[test]
    fn csv_layout() {
        assert_eq!(grid_csv(&[]), format!("{GRID_HEADER}\n"));
        let p = GridPoint { s: C64::new(0.1, -2.0), z: C64::new(0.5, 1e-300), flag: GridFlag::Ok };
        let q = GridPoint { s: C64::new(0.5, 0.0), z: C64::new(f64::NAN, f64::NAN), flag: GridFlag::NearPole };
        let text = grid_csv(&[p, q]);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[1], "0.1,-2.0,0.5,1e-300,0.5,ok");
        assert_eq!(rows[2], "0.5,0.0,NaN,NaN,NaN,pole");
        // shortest round-trip numerals parse back to the same bits
        let x = 0.1 + 0.2;
        let z = zeros_csv(&[Zero { s: C64::new(x, -x), residual: 1e-12 }]);
        let back: f64 = z.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(grid_count(0.4, 1.2, 0.05), 17);
        assert_eq!(grid_count(-2.0, 2.0, 0.05), 81);
        assert!(nearest_pole_distance(C64::new(0.505, 0.0)) < GRID_POLE_DISTANCE);
        assert!(nearest_pole_distance(C64::new(-1.0, 0.3)) > 0.29);
    }

    #[test]
    fn pole_clearance() {
        let r = Rect::new(0.6, 1.0, -1.0, 1.0).unwrap();
        assert!((r.pole_clearance().0 - 0.1).abs() < 1e-12);
        let r = Rect::new(-0.2, 0.2, -1.0, 1.0).unwrap();
        assert!(r.pole_clearance().0 < 0.0);
    }

    #[test]
    fn delta_is_a_zero() {
        let o = op(3.0, 24);
        let d = find_delta(&o, 1e-10).unwrap();
        assert!(d.delta > 0.5 && d.delta < 1.0, "{d:?}");
        assert!(d.eigen_residual.abs() < 1e-10);
        assert!(d.zeta_residual < 1e-8, "{d:?}");
        let below = o.z(C64::new(d.delta - 0.01, 0.0)).unwrap().re;
        let above = o.z(C64::new(d.delta + 0.01, 0.0)).unwrap().re;
        assert!(below * above < 0.0);
    }

    #[test]
    fn box_around_delta() {
        let o = op(3.0, 24);
        let d = find_delta(&o, 1e-10).unwrap().delta;
        let z = locate_zeros(&o, Rect::new(d - 0.05, d + 0.05, -0.05, 0.05).unwrap()).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].s - C64::new(d, 0.0)).norm() < 1e-8, "{:?} vs {d}", z[0]);
    }
}
