//! Projective 2x2 real matrices acting on the Riemann sphere.
//!
//! Every [`GroupElement`] is stored with `|ad - bc| = 1` and a canonical sign,
//! so `g` and `-g` are the same value. The orientation (sign of the original
//! determinant) is kept separately in `det_sign`. Holomorphic extensions always
//! use the matrix formula `(az+b)/(cz+d)`, also for elements of determinant -1.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::C64;

/// Entrywise tolerance for projective equality.
pub const EQ_TOL: f64 = 1e-9;

/// Tolerance used when deciding whether `|tr| = 2` (parabolic) or `tr = 0`.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(C64),
    Infinity,
}

impl Point {
    pub fn real(x: f64) -> Self {
        Point::Finite(C64::new(x, 0.0))
    }

    pub fn finite(self) -> Option<C64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }
}

impl From<C64> for Point {
    fn from(z: C64) -> Self {
        Point::Finite(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Element of PGL2(R), normalised to `|det| = 1`.
#[derive(Clone, Copy)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    det_sign: i8,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.abs() < 1e-300 {
            return Err(Error::Degenerate(det));
        }
        let scale = det.abs().sqrt();
        let mut m = [a / scale, b / scale, c / scale, d / scale];
        if let Some(first) = m.iter().copied().find(|x| *x != 0.0) {
            if first < 0.0 {
                m.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(Self {
            a: m[0],
            b: m[1],
            c: m[2],
            d: m[3],
            det_sign: if det > 0.0 { 1 } else { -1 },
        })
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0).unwrap()
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        // adjugate divided by det; det = det_sign after normalisation
        let s = self.det_sign as f64;
        Self::from_unit([s * self.d, -s * self.b, -s * self.c, s * self.a], self.det_sign)
    }

    /// Wraps entries whose determinant is known to be `det_sign`, fixing only
    /// the projective sign.
    fn from_unit(mut m: [f64; 4], det_sign: i8) -> Self {
        if let Some(first) = m.iter().copied().find(|x| *x != 0.0) {
            if first < 0.0 {
                m.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Self {
            a: m[0],
            b: m[1],
            c: m[2],
            d: m[3],
            det_sign,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut result = Self::identity();
        let mut acc = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * acc;
            }
            acc = acc * acc;
            e >>= 1;
        }
        result
    }

    /// Projective equality with entrywise tolerance [`EQ_TOL`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.det_sign == other.det_sign
            && self
                .entries()
                .iter()
                .zip(other.entries().iter())
                .all(|(x, y)| (x - y).abs() <= EQ_TOL * (1.0 + x.abs().max(y.abs())))
    }

    /// Fractional linear action, holomorphically extended for det -1 elements.
    pub fn apply(&self, p: Point) -> Point {
        match p {
            Point::Infinity => {
                if self.c == 0.0 {
                    Point::Infinity
                } else {
                    Point::real(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = z * self.c + self.d;
                if den == C64::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite((z * self.a + self.b) / den)
                }
            }
        }
    }

    /// Action on a finite complex number; the pole maps to a non-finite value.
    pub fn apply_c(&self, z: C64) -> C64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Action on the extended real line, with `f64::INFINITY` standing for the
    /// point at infinity.
    pub fn apply_real(&self, x: f64) -> f64 {
        if x.is_infinite() {
            if self.c == 0.0 {
                f64::INFINITY
            } else {
                self.a / self.c
            }
        } else {
            let den = self.c * x + self.d;
            if den == 0.0 {
                f64::INFINITY
            } else {
                (self.a * x + self.b) / den
            }
        }
    }

    /// Complex derivative of the action, `det / (cz+d)^2`.
    pub fn derivative(&self, z: C64) -> C64 {
        let den = z * self.c + self.d;
        C64::new(self.det_sign as f64, 0.0) / (den * den)
    }

    /// Real pole `-d/c`, or `None` when the element fixes infinity.
    pub fn pole(&self) -> Option<f64> {
        if self.c == 0.0 {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    pub fn classify(&self) -> Classification {
        let tr = self.trace();
        if self.det_sign < 0 {
            return if tr.abs() <= CLASSIFY_TOL {
                Classification::Elliptic
            } else {
                Classification::Hyperbolic
            };
        }
        if self.approx_eq(&Self::identity()) {
            return Classification::Identity;
        }
        let t = tr.abs();
        if (t - 2.0).abs() <= CLASSIFY_TOL {
            Classification::Parabolic
        } else if t > 2.0 {
            Classification::Hyperbolic
        } else {
            Classification::Elliptic
        }
    }

    fn require_hyperbolic(&self) -> Result<()> {
        if self.classify() == Classification::Hyperbolic {
            Ok(())
        } else {
            Err(Error::NonHyperbolic {
                trace: self.trace(),
                det_sign: self.det_sign,
            })
        }
    }

    /// Modulus of the larger eigenvalue of the normalised matrix.
    fn leading_eigenvalue(&self) -> f64 {
        let t = self.trace().abs();
        if self.det_sign > 0 {
            0.5 * (t + (t * t - 4.0).max(0.0).sqrt())
        } else {
            0.5 * (t + (t * t + 4.0).sqrt())
        }
    }

    /// Norm N(g): squared leading eigenvalue. For det -1 this equals
    /// `N(g^2)^{1/2}`, the billiard length convention.
    pub fn norm(&self) -> Result<f64> {
        self.require_hyperbolic()?;
        let mu = self.leading_eigenvalue();
        Ok(mu * mu)
    }

    /// Attracting and repelling fixed points on the extended real line.
    pub fn fixed_points(&self) -> Result<(Point, Point)> {
        self.require_hyperbolic()?;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (p, q) = if c == 0.0 {
            // z -> (a z + b)/d fixes infinity and b/(d-a)
            let finite = Point::real(b / (d - a));
            if (a / d).abs() > 1.0 {
                (Point::Infinity, finite)
            } else {
                (finite, Point::Infinity)
            }
        } else {
            // c z^2 + (d - a) z - b = 0, stable quadratic roots
            let bb = d - a;
            let disc = (bb * bb + 4.0 * b * c).max(0.0).sqrt();
            let qq = -0.5 * (bb + bb.signum_or_one() * disc);
            let r1 = qq / c;
            let r2 = if qq != 0.0 { -b / qq } else { -bb / c - r1 };
            let d1 = self.derivative(C64::new(r1, 0.0)).norm();
            if d1 < 1.0 {
                (Point::real(r1), Point::real(r2))
            } else {
                (Point::real(r2), Point::real(r1))
            }
        };
        Ok((p, q))
    }

    /// Repelling fixed point as a real number (infinite if it is the point at
    /// infinity).
    pub fn repelling_fixed_point(&self) -> Result<f64> {
        Ok(match self.fixed_points()?.1 {
            Point::Finite(z) => z.re,
            Point::Infinity => f64::INFINITY,
        })
    }

    /// Cocycle `j_s(g, z) = exp(-s Log((cz+d)^2))`. The principal logarithm of
    /// the squared factor removes the sign ambiguity of projective matrices.
    pub fn cocycle_j(&self, s: C64, z: C64) -> Result<C64> {
        let lin = z * self.c + self.d;
        let base = lin * lin;
        if base.im == 0.0 && base.re <= 0.0 {
            return Err(Error::BranchCut(base));
        }
        Ok((-s * base.ln()).exp())
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, o: GroupElement) -> GroupElement {
        let m = [
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        ];
        let big = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let det = m[0] * m[3] - m[1] * m[2];
        if det.abs() > 1e-6 * big * big {
            return GroupElement::new(m[0], m[1], m[2], m[3])
                .expect("product of normalised elements is non-degenerate");
        }
        // det = +-1 exactly; recomputing it from large entries only adds noise
        GroupElement::from_unit(m, self.det_sign * o.det_sign)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]{}",
            self.a,
            self.b,
            self.c,
            self.d,
            if self.det_sign < 0 { " (det -1)" } else { "" }
        )
    }
}

/// Hecke parameter, `lambda > 2` (infinite-area case).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    lambda: f64,
}

impl SurfaceParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 2.0 {
            Ok(Self { lambda })
        } else {
            Err(Error::InvalidLambda(lambda))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn generators(&self) -> Generators {
        Generators::new(*self)
    }
}

/// The named elements used throughout: `S`, `T`, `J`, the conjugator `C`,
/// the conjugated reflection `Tau = C J C^-1`, the branch elements
/// `g1 = T`, `g2 = T^-1 S`, `g3 = T S` and their conjugates `h_j = C g_j C^-1`.
#[derive(Debug, Clone, Copy)]
pub struct Generators {
    pub s: GroupElement,
    pub t: GroupElement,
    pub j: GroupElement,
    pub c: GroupElement,
    pub tau: GroupElement,
    pub g1: GroupElement,
    pub g2: GroupElement,
    pub g3: GroupElement,
    pub h1: GroupElement,
    pub h2: GroupElement,
    pub h3: GroupElement,
}

impl Generators {
    pub fn new(params: SurfaceParams) -> Self {
        let l = params.lambda();
        let s = GroupElement::new(0.0, 1.0, -1.0, 0.0).unwrap();
        let t = GroupElement::new(1.0, l, 0.0, 1.0).unwrap();
        let j = GroupElement::new(-1.0, 0.0, 0.0, 1.0).unwrap();
        let c = GroupElement::new(0.0, 1.0, -1.0, l / 2.0).unwrap();
        let cinv = c.inverse();
        let conj = |g: GroupElement| c * g * cinv;
        let g1 = t;
        let g2 = t.inverse() * s;
        let g3 = t * s;
        Self {
            s,
            t,
            j,
            c,
            tau: conj(j),
            g1,
            g2,
            g3,
            h1: conj(g1),
            h2: conj(g2),
            h3: conj(g3),
        }
    }
}
