//! Hurwitz zeta function for complex arguments via Euler-Maclaurin summation,
//! and Hermite's integral where `Re w < 0` makes that summation cancel.

use crate::error::{Error, Result};
use crate::C64;

/// `B_{2j}` for `j = 1..=15`, from exact rationals.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Exact Bernoulli number `B_{2j}`, `1 <= j <= 15`.
pub fn bernoulli_even(j: usize) -> f64 {
    BERNOULLI_EVEN[j - 1]
}

/// Truncation parameters of the Euler-Maclaurin formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HurwitzParams {
    /// Head length `M`.
    pub shift_terms: usize,
    /// Number of Bernoulli corrections `J`.
    pub bernoulli_terms: usize,
}

impl HurwitzParams {
    pub fn new(shift_terms: usize, bernoulli_terms: usize) -> Result<Self> {
        if shift_terms < 8 || !(1..=15).contains(&bernoulli_terms) {
            return Err(Error::InvalidArgument(format!(
                "need M >= 8 and 1 <= J <= 15 (got M={shift_terms}, J={bernoulli_terms})"
            )));
        }
        Ok(Self {
            shift_terms,
            bernoulli_terms,
        })
    }

    /// Parameters reaching about 1e-13 relative accuracy for `|w| <= 60`.
    pub fn auto(w_abs: f64, q: C64) -> Self {
        // the remainder after J corrections behaves like
        // (|w|+2J)^(2J) / (2 pi |M+q|)^(2J), so |M+q| > |w| + 10 is ample
        let need = (w_abs + 10.0 - q.re).max(0.0).ceil() as usize;
        Self {
            shift_terms: need.max(8),
            bernoulli_terms: 15,
        }
    }
}

fn check_args(w: C64, q: C64) -> Result<()> {
    if (w - 1.0).norm() < 1e-12 {
        return Err(Error::PoleAtOne(w));
    }
    if !(q.re > 0.0) {
        return Err(Error::DomainError(q));
    }
    Ok(())
}

/// `zeta_H(w, q) = sum_{n>=0} (n+q)^{-w}`, continued to `w != 1`.
pub fn hurwitz_zeta(w: C64, q: C64) -> Result<C64> {
    check_args(w, q)?;
    if w.re < 0.0 {
        return Ok(negative_half_plane(w, q));
    }
    Ok(hurwitz_zeta_with(w, q, HurwitzParams::auto(w.norm(), q)))
}

/// For `Re w < 0` both formulas sum terms much larger than the result:
/// summation through `|x|^{1 - Re w}`, Hermite's integral through
/// `e^{pi |Im w| / 2}`. The one with the smaller largest term wins. For
/// `|Im w| > 20` both can exceed the result by many orders of magnitude,
/// and accuracy degrades accordingly.
fn negative_half_plane(w: C64, q: C64) -> C64 {
    let (h, h_scale) = hermite(w, q);
    // the remainder after 15 corrections is about ((|w| + 30) / (2 pi |x|))^32
    let m = ((w.norm() + 30.0) / 2.0 - q.re).max(8.0).ceil() as usize;
    let mut head = C64::new(0.0, 0.0);
    let mut e_scale = 0.0f64;
    for n in 0..m {
        let t = (-w * (q + n as f64).ln()).exp();
        e_scale = e_scale.max(t.norm());
        head += t;
    }
    let x = q + m as f64;
    let lead = (-(w - 1.0) * x.ln()).exp() / (w - 1.0);
    e_scale = e_scale.max(lead.norm());
    if e_scale < h_scale {
        head + em_tail(w, x, 15)
    } else {
        h
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: std::sync::OnceLock<Vec<(f64, f64)>> = std::sync::OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 20;
        (0..N)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=N {
                        let k = k as f64;
                        (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
                    }
                    dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// Hermite's formula
/// `q^{-w}/2 + q^{1-w}/(w-1) + i int_0^inf ((q+it)^{-w} - (q-it)^{-w}) / (e^{2 pi t} - 1) dt`
/// after shifting `q` by the recurrence to `1 <= Re q < 2`: the lower bound
/// keeps the branch points `t = +-iq` away from the path, the upper one
/// keeps `q^{1-w}/(w-1)` from dwarfing the result. Used for `Re w < 0`,
/// where the summation formula loses every digit.
/// Returns the value and the largest term summed.
fn hermite(w: C64, q: C64) -> (C64, f64) {
    let mut head = C64::new(0.0, 0.0);
    let mut q = q;
    while q.re < 1.0 {
        head += (-w * q.ln()).exp();
        q += 1.0;
    }
    while q.re >= 2.0 && q.re < 64.0 {
        q -= 1.0;
        head -= (-w * q.ln()).exp();
    }
    let pow = |z: C64| (-w * z.ln()).exp();
    let f = |t: f64| {
        let a = pow(q + C64::new(0.0, t));
        let b = pow(q - C64::new(0.0, t));
        C64::new(0.0, 1.0) * (a - b) / (2.0 * std::f64::consts::PI * t).exp_m1()
    };
    // integrand decays like |q+it|^{-Re w} e^{pi |Im w| / 2} e^{-2 pi t}
    let p = (-w.re).max(0.0);
    let mut end = 8.0;
    while 2.0 * std::f64::consts::PI * end < 45.0 + p * (q.norm() + end).ln() {
        end += 1.0;
    }
    let width = 0.5;
    let mut integral = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut a = 0.0;
    while a < end {
        for &(x, wt) in gauss_legendre() {
            let t = a + 0.5 * width * (x + 1.0);
            let v = f(t);
            // each difference of powers is formed from terms of this size
            let big = pow(q + C64::new(0.0, t)).norm().max(pow(q - C64::new(0.0, t)).norm());
            scale = scale.max(big * wt * width / (2.0 * std::f64::consts::PI * t).exp_m1());
            integral += v * (0.5 * width * wt);
        }
        a += width;
    }
    let base = pow(q) * q / (w - 1.0);
    scale = scale.max(base.norm()).max(head.norm());
    (head + pow(q) * 0.5 + base + integral, scale)
}

/// Euler-Maclaurin value with fixed truncation parameters. Arguments are
/// not validated.
pub fn hurwitz_zeta_with(w: C64, q: C64, p: HurwitzParams) -> C64 {
    let m = p.shift_terms;
    let mut head = C64::new(0.0, 0.0);
    for n in 0..m {
        head += (-w * (q + n as f64).ln()).exp();
    }
    head + em_tail(w, q + m as f64, p.bernoulli_terms)
}

/// Remainder `sum_{n>=0} (n+x)^{-w}` by Euler-Maclaurin at large `x`.
fn em_tail(w: C64, x: C64, terms: usize) -> C64 {
    let lnx = x.ln();
    let xw = (-w * lnx).exp();
    let mut sum = xw * x / (w - 1.0) + xw * 0.5;
    // t_j = B_{2j}/(2j)! * w(w+1)...(w+2j-2) * x^{-w-2j+1}
    let inv_x = 1.0 / x;
    let inv_x2 = inv_x * inv_x;
    let mut rising = w; // w(w+1)...(w+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut pw = xw * inv_x; // x^{-w-2j+1}
    for j in 1..=terms {
        let term = rising * pw * (bernoulli_even(j) / fact);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        let k = 2.0 * j as f64;
        rising *= (w + (k - 1.0)) * (w + k);
        fact *= (k + 1.0) * (k + 2.0);
        pw *= inv_x2;
    }
    sum
}

/// `zeta_H(w0 + m, q)` for `m = 0..count`, sharing the logarithms of the
/// head terms.
pub fn hurwitz_zeta_batch(w0: C64, q: C64, count: usize) -> Result<Vec<C64>> {
    if !(q.re > 0.0) {
        return Err(Error::DomainError(q));
    }
    for m in 0..count {
        let w = w0 + m as f64;
        if (w - 1.0).norm() < 1e-12 {
            return Err(Error::PoleAtOne(w));
        }
    }
    let w_abs = (0..count)
        .map(|m| (w0 + m as f64).norm())
        .fold(0.0, f64::max);
    let p = HurwitzParams::auto(w_abs, q);
    let mut out = vec![C64::new(0.0, 0.0); count];
    for n in 0..p.shift_terms {
        let base = q + n as f64;
        let mut t = (-w0 * base.ln()).exp();
        let inv = 1.0 / base;
        for v in out.iter_mut() {
            *v += t;
            t *= inv;
        }
    }
    let x = q + p.shift_terms as f64;
    for (m, v) in out.iter_mut().enumerate() {
        let w = w0 + m as f64;
        *v = if w.re < 0.0 { negative_half_plane(w, q) } else { *v + em_tail(w, x, p.bernoulli_terms) };
    }
    Ok(out)
}
