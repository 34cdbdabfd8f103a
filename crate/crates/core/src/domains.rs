//! Discs of holomorphy for the transfer operators and the inclusion
//! conditions that make the operator blocks nuclear.

use crate::error::{Error, Result};
use crate::moebius::{GroupElement, SurfaceParams};
use crate::C64;

/// Margins at or below this are treated as violations.
pub const MARGIN_SAFETY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chart {
    Identity,
    /// The represented region is the image of the stored disc under this
    /// involution.
    Involution(GroupElement),
}

/// Open disc centred on the real axis, possibly seen through a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: f64,
    pub radius: f64,
    pub chart: Chart,
}

impl Disc {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "disc needs finite centre and positive radius (got {center}, {radius})"
            )));
        }
        Ok(Self {
            center,
            radius,
            chart: Chart::Identity,
        })
    }

    /// Disc whose boundary meets the real axis at `x0` and `x1`.
    pub fn from_endpoints(x0: f64, x1: f64) -> Result<Self> {
        Self::new(0.5 * (x0 + x1), 0.5 * (x1 - x0).abs())
    }

    pub fn left(&self) -> f64 {
        self.center - self.radius
    }

    pub fn right(&self) -> f64 {
        self.center + self.radius
    }

    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Point `center + radius * u` for a scaled coordinate `u`.
    pub fn from_unit(&self, u: C64) -> C64 {
        u * self.radius + self.center
    }

    pub fn to_unit(&self, z: C64) -> C64 {
        (z - self.center) / self.radius
    }

    /// `count` equispaced boundary points starting at the right end.
    pub fn boundary_samples(&self, count: usize) -> Vec<C64> {
        unit_circle(count).into_iter().map(|u| self.from_unit(u)).collect()
    }

    /// Smallest real part over the closed disc.
    pub fn min_re(&self) -> f64 {
        self.left()
    }

    /// For chart discs: the real boundary points of the represented region,
    /// an infinite value meaning the region is a half-plane.
    pub fn represented_endpoints(&self) -> (f64, f64) {
        match self.chart {
            Chart::Identity => (self.left(), self.right()),
            Chart::Involution(k) => {
                let at = |x: f64| match k.pole() {
                    Some(p) if (p - x).abs() <= 1e-12 * (1.0 + p.abs()) => f64::INFINITY,
                    _ => k.apply_real(x),
                };
                let (a, b) = (at(self.left()), at(self.right()));
                (a.min(b), a.max(b))
            }
        }
    }
}

/// A disc together with a real Moebius chart `kappa` onto the unit disc;
/// basis functions are `kappa(z)^k`. The chart sends the expansion point
/// `center + alpha * radius` to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartedDisc {
    pub disc: Disc,
    pub alpha: f64,
}

impl ChartedDisc {
    /// Plain Taylor basis about the centre.
    pub fn centered(disc: Disc) -> Self {
        Self { disc, alpha: 0.0 }
    }

    pub fn new(disc: Disc, alpha: f64) -> Result<Self> {
        if !(alpha.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!("chart offset {alpha} outside (-1, 1)")));
        }
        Ok(Self { disc, alpha })
    }

    /// Chart centred at the hyperbolic midpoint of the real interval
    /// `[lo, hi]`, which must lie inside the disc.
    pub fn adapted(disc: Disc, lo: f64, hi: f64) -> Result<Self> {
        let s = (lo - disc.center) / disc.radius;
        let t = (hi - disc.center) / disc.radius;
        if !(-1.0 < s && s <= t && t < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "interval [{lo}, {hi}] not inside the disc over ({}, {})",
                disc.left(),
                disc.right()
            )));
        }
        // alpha solves phi_alpha(t) = -phi_alpha(s)
        let sum = s + t;
        let alpha = if sum.abs() < 1e-300 {
            0.0
        } else {
            let b = 1.0 + s * t;
            (b - (b * b - sum * sum).max(0.0).sqrt()) / sum
        };
        Self::new(disc, alpha)
    }

    pub fn expansion_point(&self) -> f64 {
        self.disc.center + self.alpha * self.disc.radius
    }

    pub fn to_unit(&self, z: C64) -> C64 {
        let u = self.disc.to_unit(z);
        (u - self.alpha) / (1.0 - u * self.alpha)
    }

    pub fn from_unit(&self, u: C64) -> C64 {
        self.disc.from_unit((u + self.alpha) / (1.0 + u * self.alpha))
    }

    /// `count` points of the boundary, equispaced in the chart.
    pub fn boundary_samples(&self, count: usize) -> Vec<C64> {
        unit_circle(count).into_iter().map(|u| self.from_unit(u)).collect()
    }

    /// Largest `|kappa|` over the closed disc over the real interval
    /// `[lo, hi]`; `inf` if it is not inside.
    pub fn hull_ratio(&self, lo: f64, hi: f64) -> f64 {
        let a = self.to_unit(C64::new(lo, 0.0)).re;
        let b = self.to_unit(C64::new(hi, 0.0)).re;
        if !(lo > self.disc.left() && hi < self.disc.right()) {
            return f64::INFINITY;
        }
        a.abs().max(b.abs())
    }
}

/// The `count`-th roots of unity `exp(2 pi i j / count)`, with point
/// `count - j` the exact conjugate of point `j` so that sampling commutes
/// with conjugation.
pub fn unit_circle(count: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0); count];
    for j in 1..count {
        out[j] = if 2 * j < count {
            C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / count as f64)
        } else if 2 * j == count {
            C64::new(-1.0, 0.0)
        } else {
            out[count - j].conj()
        };
    }
    out
}

/// Pseudo-hyperbolic radius of the real interval `[lo, hi]` inside `disc`
/// about its hyperbolic midpoint; the best ratio any chart of `disc` can
/// achieve for that interval.
pub fn pseudo_hyperbolic_radius(disc: &Disc, lo: f64, hi: f64) -> f64 {
    if !(lo > disc.left() && hi < disc.right()) {
        return f64::INFINITY;
    }
    let s = (lo - disc.center) / disc.radius;
    let t = (hi - disc.center) / disc.radius;
    let d = (t - s) / (1.0 - s * t);
    if d <= 0.0 {
        return 0.0;
    }
    (1.0 - (1.0 - d * d).max(0.0).sqrt()) / d
}

/// Margin of `inner` inside `outer`: distance from the closed inner disc to
/// the complement of the outer one. Positive means strict inclusion.
pub fn inclusion_margin(inner: &Disc, outer: &Disc) -> f64 {
    outer.radius - (outer.center - inner.center).abs() - inner.radius
}

/// Image of an Identity-chart disc under a real Moebius map whose pole lies
/// outside the closed disc.
pub fn image_disc(g: &GroupElement, d: &Disc) -> Result<Disc> {
    if d.chart != Chart::Identity {
        return Err(Error::InvalidArgument("image_disc needs an identity chart".into()));
    }
    if let Some(p) = g.pole() {
        if (p - d.center).abs() <= d.radius {
            return Err(Error::PoleInClosure {
                pole: p,
                center: d.center,
                radius: d.radius,
            });
        }
    }
    let a = g.apply_real(d.left());
    let b = g.apply_real(d.right());
    Disc::from_endpoints(a.min(b), a.max(b))
}

/// Which disc plays the role of the second domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum E2Variant {
    /// Boundary points `3/(2-l)` and `1/(2l)`. Satisfies every inclusion.
    #[default]
    Working,
    /// Boundary points `3/(2-l)` and `1/l`, as stated in words.
    Prose,
    /// Centre `(l-1)/(l(2-l))`, radius `(3-2l)/(l(2-l))`, as displayed.
    Displayed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardDiscs {
    pub e1: Disc,
    pub e2: Disc,
    /// `tau . E2`, represented through the involution chart.
    pub e3: Disc,
}

pub fn standard_discs(params: SurfaceParams) -> StandardDiscs {
    standard_discs_variant(params, E2Variant::Working)
}

pub fn standard_discs_variant(params: SurfaceParams, variant: E2Variant) -> StandardDiscs {
    let l = params.lambda();
    let e1 = Disc::from_endpoints(2.0 / (l + 2.0), 2.0 / (l - 2.0)).expect("lambda > 2");
    let e2 = match variant {
        E2Variant::Working => Disc::from_endpoints(3.0 / (2.0 - l), 1.0 / (2.0 * l)),
        E2Variant::Prose => Disc::from_endpoints(3.0 / (2.0 - l), 1.0 / l),
        E2Variant::Displayed => Disc::new(
            (l - 1.0) / (l * (2.0 - l)),
            ((3.0 - 2.0 * l) / (l * (2.0 - l))).abs(),
        ),
    }
    .expect("lambda > 2");
    let e3 = Disc {
        chart: Chart::Involution(params.generators().tau),
        ..e2
    };
    StandardDiscs { e1, e2, e3 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusionCheck {
    pub condition: String,
    /// Signed margin; `-inf` if the image is unbounded.
    pub margin: f64,
}

impl InclusionCheck {
    pub fn passed(&self) -> bool {
        self.margin > MARGIN_SAFETY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    pub lambda: f64,
    pub variant: E2Variant,
    pub checks: Vec<InclusionCheck>,
}

impl InclusionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(InclusionCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&InclusionCheck> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn get(&self, condition: &str) -> Option<&InclusionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

/// Evaluates every inclusion condition for the chosen second disc without
/// failing; conditions with unbounded images get margin `-inf`.
pub fn inclusion_report(params: SurfaceParams, n_max: u32, variant: E2Variant) -> InclusionReport {
    let g = params.generators();
    let l = params.lambda();
    let StandardDiscs { e1, e2, .. } = standard_discs_variant(params, variant);
    let mut checks = Vec::new();
    let check = |condition: String, elem: &GroupElement, src: &Disc, dst: &Disc| {
        let margin = match image_disc(elem, src) {
            Ok(img) => inclusion_margin(&img, dst),
            Err(_) => f64::NEG_INFINITY,
        };
        InclusionCheck { condition, margin }
    };

    // tau maps E1 onto itself; equality is reported as the endpoint mismatch
    let te1 = image_disc(&g.tau, &e1).map(|d| {
        -((d.left() - e1.left()).abs() + (d.right() - e1.right()).abs())
    });
    let h2i = g.h2.inverse();
    let th2i = g.tau * h2i;
    checks.push(check("h2^-1.E1 in E1".into(), &h2i, &e1, &e1));
    checks.push(check("h2^-1.E2 in E1".into(), &h2i, &e2, &e1));
    checks.push(check("tau h2^-1.E1 in E1".into(), &th2i, &e1, &e1));
    checks.push(check("tau h2^-1.E2 in E1".into(), &th2i, &e2, &e1));
    for n in 1..=n_max {
        checks.push(check(format!("h1^{n}.E1 in E2"), &g.h1.pow(n as i64), &e1, &e2));
    }
    // h1^n.z = z/(1 - n l z) shrinks to the point 0
    checks.push(InclusionCheck {
        condition: "h1^inf.E1 in E2".into(),
        margin: e2.radius - e2.center.abs(),
    });
    let conv = Disc::new(0.0, 1.0 / l).expect("lambda > 0");
    for n in 1..=n_max {
        checks.push(check(
            format!("h1^-{n}.E1 in |z|<1/lambda"),
            &g.h1.pow(-(n as i64)),
            &e1,
            &conv,
        ));
    }
    checks.push(InclusionCheck {
        condition: "tau.E1 = E1".into(),
        // report equality as a positive margin when it holds to rounding
        margin: match te1 {
            Ok(err) if err > -1e-12 => f64::INFINITY,
            Ok(err) => err,
            Err(_) => f64::NEG_INFINITY,
        },
    });
    InclusionReport {
        lambda: l,
        variant,
        checks,
    }
}

/// Runtime guard for the working discs.
pub fn verify_inclusions(params: SurfaceParams, n_max: u32) -> Result<InclusionReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let report = inclusion_report(params, n_max, E2Variant::Working);
    if let Some(bad) = report.first_failure() {
        return Err(Error::InclusionViolated {
            condition: bad.condition.clone(),
            margin: bad.margin,
        });
    }
    Ok(report)
}
