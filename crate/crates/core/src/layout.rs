//! Disc graphs on which the transfer operators are discretised.
//!
//! A layout is a finite set of charted discs (nodes) and the branches
//! (edges) between them. Every branch of the operator lands in exactly one
//! node, chosen by a finite memory of the last branch, so each periodic word
//! has exactly one closed path and traces and determinants are those of the
//! operator itself. Splitting the two strands into several nodes lets each
//! disc hug the images it receives, which is what sets the geometric rate
//! of the Taylor truncation.
//!
//! [`Layout::standard`] is the plain two-disc realisation on `E1`, `E2` with
//! centred Taylor bases; [`Layout::refined`] is the default.

use crate::domains::{pseudo_hyperbolic_radius, standard_discs, ChartedDisc, Disc};
use crate::error::{Error, Result};
use crate::moebius::{GroupElement, SurfaceParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strand {
    /// Functions on the side of `E1`; receives every branch.
    One,
    /// Functions on the side of `E2`; receives no parabolic branch.
    Two,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub label: String,
    pub strand: Strand,
    pub chart: ChartedDisc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeKind {
    /// `f -> j_s(h, .) f(h .)` for one evaluation element `h`.
    Single(GroupElement),
    /// `sum_{n >= start} j_s(h1^n, .) f(h1^n .)`.
    ParabolicTail { start: u32 },
}

/// A branch realised from coefficients on `source` to coefficients on
/// `target`. Twisted edges carry the factor `+-1` of the sign operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub target: usize,
    pub source: usize,
    pub kind: EdgeKind,
    pub twisted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayoutKind {
    Standard,
    Refined {
        /// First parabolic index collected into the tail node.
        tail_start: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub lambda: f64,
    pub kind: LayoutKind,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Largest `|kappa|` over all images received by a node: the geometric
    /// convergence rate of the truncated basis.
    pub rate: f64,
    /// Largest `1/|kappa_target|` over the singularities of the functions
    /// an edge produces: the decay rate of their coefficients, which sets
    /// the aliasing of boundary sampling.
    pub singular_ratio: f64,
}

/// Image of the closed real interval `[lo, hi]`, or `None` if the pole of
/// `g` comes within `1e-12` of it.
fn interval_image(g: &GroupElement, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if let Some(p) = g.pole() {
        if p > lo - 1e-12 && p < hi + 1e-12 {
            return None;
        }
    }
    let x = g.apply_real(lo);
    let y = g.apply_real(hi);
    Some((x.min(y), x.max(y)))
}

fn merge(h: &mut Option<(f64, f64)>, lo: f64, hi: f64) {
    *h = Some(match *h {
        None => (lo, hi),
        Some((a, b)) => (a.min(lo), b.max(hi)),
    });
}

/// Sample count per block, in units of the basis size, that the refined
/// layout is balanced for.
pub const SAMPLE_FACTOR: usize = 4;

const FIT_ITERATIONS: usize = 60;

/// Disc on the real interval about `[lo, hi]` with truncation rate `t^(1-q)`
/// and singularity ratio `t^q` against the nearest `singular` points,
/// infinity always singular.
fn fit_disc(lo: f64, hi: f64, singular: &[f64], q: f64) -> Result<Disc> {
    let mut g0 = f64::NEG_INFINITY;
    let mut g1 = f64::INFINITY;
    for &x in singular {
        if x >= lo && x <= hi {
            return Err(Error::InclusionViolated {
                condition: format!("singularity {x} inside received images [{lo}, {hi}]"),
                margin: -1.0,
            });
        }
        if x < lo {
            g0 = g0.max(x);
        } else {
            g1 = g1.min(x);
        }
    }
    // increasing maps of the gap onto (0, inf) and back
    let (to, from): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) = match (g0.is_finite(), g1.is_finite()) {
        (true, true) => (Box::new(move |z| (z - g0) / (g1 - z)), Box::new(move |w| (g0 + w * g1) / (1.0 + w))),
        (true, false) => (Box::new(move |z| z - g0), Box::new(move |w| g0 + w)),
        (false, true) => (Box::new(move |z| 1.0 / (g1 - z)), Box::new(move |w| g1 - 1.0 / w)),
        (false, false) => {
            let w = hi - lo;
            return Disc::from_endpoints(lo - w, hi + w);
        }
    };
    let (m0, m1) = (to(lo), to(hi));
    let t = (m1.sqrt() - m0.sqrt()) / (m1.sqrt() + m0.sqrt());
    let d = t.powf(q);
    let mu = (m0 * m1).sqrt();
    Disc::from_endpoints(from(mu * (1.0 - d) / (1.0 + d)), from(mu * (1.0 + d) / (1.0 - d)))
}

impl Layout {
    pub fn standard(params: SurfaceParams) -> Result<Self> {
        let d = standard_discs(params);
        let nodes = vec![
            Node {
                label: "E1".into(),
                strand: Strand::One,
                chart: ChartedDisc::centered(d.e1),
            },
            Node {
                label: "E2".into(),
                strand: Strand::Two,
                chart: ChartedDisc::centered(d.e2),
            },
        ];
        let mut layout = Self::with_nodes(params, LayoutKind::Standard, nodes, 0, 0, 1, 1);
        layout.rate = layout.measure()?.0;
        layout.singular_ratio = layout.measure_singularities();
        Ok(layout)
    }

    /// Refined layout, with the tail start minimising
    /// [`Layout::effective_rate`].
    pub fn refined(params: SurfaceParams) -> Result<Self> {
        let mut best: Option<Self> = None;
        for tail_start in 2..=10 {
            let Ok(lay) = Self::refined_with(params, tail_start) else { continue };
            if best.as_ref().is_none_or(|b| lay.effective_rate() < b.effective_rate()) {
                best = Some(lay);
            }
        }
        best.ok_or_else(|| Error::ConvergenceFailure(format!("no admissible refined layout at lambda = {}", params.lambda())))
    }

    /// `max(rate, singular_ratio^SAMPLE_FACTOR)`: the per-`N` error decay
    /// when sampling `SAMPLE_FACTOR * N` points per block.
    pub fn effective_rate(&self) -> f64 {
        self.rate.max(self.singular_ratio.powi(SAMPLE_FACTOR as i32))
    }

    /// Refined layout: nodes `A`, `B` for the two `h2` branches, `P1..` for
    /// the single parabolic branches below `tail_start` and `T` for the rest.
    ///
    /// Each disc is fitted to the gap of the real line free of the
    /// singularities it must avoid. Mapping that gap to `(-1, 1)` with the
    /// received images on `[-t, t]`, the disc `(-d, d)` has truncation rate
    /// `t/d` and singularity ratio `d`. Discs shape the images the others
    /// receive, so `d = t^q` is chosen per node by coordinate descent on
    /// [`Layout::effective_rate`].
    pub fn refined_with(params: SurfaceParams, tail_start: u32) -> Result<Self> {
        let count = tail_start as usize + 2;
        let mut q = vec![1.0 / (1.0 + SAMPLE_FACTOR as f64); count];
        let mut best = Self::fitted(params, tail_start, &q)?;
        for _ in 0..3 {
            let mut improved = false;
            for y in 0..count {
                for cand in [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7] {
                    if cand == q[y] {
                        continue;
                    }
                    let mut trial = q.clone();
                    trial[y] = cand;
                    let Ok(lay) = Self::fitted(params, tail_start, &trial) else { continue };
                    if lay.effective_rate() < best.effective_rate() - 1e-6 {
                        best = lay;
                        q = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        Ok(best)
    }

    /// Fixed point of the per-node disc fit for exponents `q`.
    fn fitted(params: SurfaceParams, tail_start: u32, q: &[f64]) -> Result<Self> {
        if tail_start < 2 {
            return Err(Error::InvalidArgument("tail must start at n >= 2".into()));
        }
        let l = params.lambda();
        let pole = params.generators().h2.inverse().pole().unwrap_or(1.0 / l);
        let a = 1.2 / l;
        let reach = a / (l * a - 1.0);
        let one = ChartedDisc::centered(Disc::from_endpoints(a, 4.0)?);
        let two = ChartedDisc::centered(Disc::from_endpoints(-2.5 * reach, 0.5 * pole)?);
        let tail = ChartedDisc::centered(Disc::new(0.0, (1.8 / (tail_start as f64 * l)).min(0.5 * pole))?);
        let mut nodes = vec![
            Node { label: "A".into(), strand: Strand::One, chart: one },
            Node { label: "B".into(), strand: Strand::One, chart: one },
        ];
        for n in 1..tail_start {
            nodes.push(Node { label: format!("P{n}"), strand: Strand::Two, chart: two });
        }
        nodes.push(Node { label: "T".into(), strand: Strand::Two, chart: tail });
        let kind = LayoutKind::Refined { tail_start };
        let mut layout = Self::with_nodes(params, kind, nodes, 0, 1, tail_start, 2);
        for _ in 0..FIT_ITERATIONS {
            let hulls = layout.hulls()?;
            let mut moved = 0.0f64;
            let mut next = Vec::with_capacity(hulls.len());
            for (y, &(lo, hi)) in hulls.iter().enumerate() {
                let disc = fit_disc(lo, hi, &layout.singularities_of(y), q[y])?;
                let old = layout.nodes[y].chart.disc;
                moved = moved.max(((disc.left() - old.left()).abs() + (disc.right() - old.right()).abs()) / disc.radius);
                next.push(ChartedDisc::adapted(disc, lo, hi)?);
            }
            for (node, chart) in layout.nodes.iter_mut().zip(next) {
                node.chart = chart;
            }
            if moved < 1e-10 {
                break;
            }
        }
        let (rate, hulls) = layout.measure()?;
        for (node, (lo, hi)) in layout.nodes.iter_mut().zip(hulls) {
            node.chart = ChartedDisc::adapted(node.chart.disc, lo, hi)?;
        }
        layout.rate = rate;
        layout.singular_ratio = layout.measure_singularities();
        Ok(layout)
    }

    /// Edges for nodes laid out as: plain branch node `a_node`, twisted
    /// branch node `b_node`, parabolic nodes from `first_p` for indices
    /// `1..tail_start`, and the tail node last.
    fn with_nodes(
        params: SurfaceParams,
        kind: LayoutKind,
        nodes: Vec<Node>,
        a_node: usize,
        b_node: usize,
        tail_start: u32,
        first_p: usize,
    ) -> Self {
        let g = params.generators();
        let h2i = g.h2.inverse();
        let th2i = g.tau * h2i;
        let tail = nodes.len() - 1;
        let mut edges = Vec::new();
        for (y, node) in nodes.iter().enumerate() {
            edges.push(Edge {
                target: y,
                source: a_node,
                kind: EdgeKind::Single(h2i),
                twisted: false,
            });
            edges.push(Edge {
                target: y,
                source: b_node,
                kind: EdgeKind::Single(th2i),
                twisted: true,
            });
            if node.strand == Strand::One {
                for n in 1..tail_start {
                    edges.push(Edge {
                        target: y,
                        source: first_p + (n as usize - 1),
                        kind: EdgeKind::Single(g.h1.pow(n as i64)),
                        twisted: false,
                    });
                }
                edges.push(Edge {
                    target: y,
                    source: tail,
                    kind: EdgeKind::ParabolicTail { start: tail_start },
                    twisted: false,
                });
            }
        }
        Self {
            lambda: params.lambda(),
            kind,
            nodes,
            edges,
            rate: f64::NAN,
            singular_ratio: f64::NAN,
        }
    }

    /// Pole of the chart `kappa` of a node, if finite.
    fn chart_pole(c: &ChartedDisc) -> Option<f64> {
        (c.alpha != 0.0).then(|| c.disc.center + c.disc.radius / c.alpha)
    }

    /// Finite real singularities of the functions edge `e` produces on its
    /// target. Infinity is always one unless `2s` is an integer.
    fn edge_singularities(&self, e: &Edge) -> Vec<f64> {
        let src = &self.nodes[e.source].chart;
        let mut points = vec![];
        if matches!(e.kind, EdgeKind::ParabolicTail { .. }) {
            // poles and pulled-back chart poles accumulate at 0
            points.push(0.0);
        }
        let mut add = |h: &GroupElement| {
            points.extend(h.pole());
            if let Some(q) = Self::chart_pole(src) {
                let x = h.inverse().apply_real(q);
                if x.is_finite() {
                    points.push(x);
                }
            }
        };
        match &e.kind {
            EdgeKind::Single(h) => add(h),
            EdgeKind::ParabolicTail { start } => {
                for n in *start..*start + 64 {
                    add(&GroupElement::new(1.0, 0.0, -(n as f64) * self.lambda, 1.0).expect("unimodular"));
                }
            }
        }
        points
    }

    fn singularities_of(&self, node: usize) -> Vec<f64> {
        self.edges.iter().filter(|e| e.target == node).flat_map(|e| self.edge_singularities(e)).collect()
    }

    /// See [`Layout::singular_ratio`].
    fn measure_singularities(&self) -> f64 {
        let mut worst = 0.0f64;
        for e in &self.edges {
            let tgt = &self.nodes[e.target].chart;
            for x in self.edge_singularities(e) {
                let u = tgt.to_unit(crate::C64::new(x, 0.0)).norm();
                worst = worst.max(1.0 / u);
            }
            // j_s(h, z) = (cz + d)^{-2s} branches at infinity unless 2s is an
            // integer; the chart sends infinity to -1/alpha
            worst = worst.max(tgt.alpha.abs());
        }
        worst
    }

    /// Boundary samples per block so that aliasing stays below the
    /// truncation error `rate^N`; at least `2N`.
    pub fn samples_for(&self, basis: usize) -> usize {
        let need = if self.singular_ratio > 0.0 && self.singular_ratio < 1.0 {
            (basis as f64 * self.rate.ln() / self.singular_ratio.ln()).ceil() as usize
        } else {
            2 * basis
        };
        let m = need.max(2 * basis);
        m + m % 2
    }

    /// Hull of the images each node receives.
    fn hulls(&self) -> Result<Vec<(f64, f64)>> {
        let l = self.lambda;
        let mut hulls: Vec<Option<(f64, f64)>> = vec![None; self.nodes.len()];
        for e in &self.edges {
            let d = self.nodes[e.target].chart.disc;
            let (lo, hi) = (d.left(), d.right());
            let img = match &e.kind {
                EdgeKind::Single(h) => interval_image(h, lo, hi),
                EdgeKind::ParabolicTail { start } => {
                    // h1^n z = z/(1 - n l z) tends to 0 monotonically in n on
                    // a disc right of every pole 1/(n l)
                    let p = 1.0 / (*start as f64 * l);
                    if lo <= p + 1e-12 {
                        None
                    } else {
                        let h = GroupElement::new(1.0, 0.0, -(*start as f64) * l, 1.0)?;
                        interval_image(&h, lo, hi).map(|(a, b)| (a.min(0.0), b.max(0.0)))
                    }
                }
            };
            let Some((a, b)) = img else {
                return Err(Error::InclusionViolated {
                    condition: format!("pole of edge {} -> {} on target disc", e.source, e.target),
                    margin: -1.0,
                });
            };
            merge(&mut hulls[e.source], a, b);
        }
        self.nodes
            .iter()
            .zip(hulls)
            .map(|(node, h)| h.ok_or_else(|| Error::InvalidArgument(format!("node {} receives no branch", node.label))))
            .collect()
    }

    /// Rate and per-node hull of received images. For the rate every chart
    /// is taken at its best expansion point.
    fn measure(&self) -> Result<(f64, Vec<(f64, f64)>)> {
        let hulls = self.hulls()?;
        let mut rate = 0.0f64;
        let mut out = Vec::with_capacity(hulls.len());
        for (node, (lo, hi)) in self.nodes.iter().zip(hulls) {
            let r = match self.kind {
                LayoutKind::Standard => node.chart.hull_ratio(lo, hi),
                LayoutKind::Refined { .. } => pseudo_hyperbolic_radius(&node.chart.disc, lo, hi),
            };
            if !(r < 1.0) {
                return Err(Error::InclusionViolated {
                    condition: format!("images inside node {}", node.label),
                    margin: 1.0 - r,
                });
            }
            rate = rate.max(r);
            out.push((lo, hi));
        }
        Ok((rate, out))
    }

    pub fn dim(&self, basis: usize) -> usize {
        basis * self.nodes.len()
    }

    pub fn tail_node(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Basis size at which `rate^N` drops below `tol`.
    pub fn basis_for(&self, tol: f64) -> usize {
        (tol.ln() / self.rate.ln()).ceil().max(4.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_two_discs() {
        let p = SurfaceParams::new(3.0).unwrap();
        let l = Layout::standard(p).unwrap();
        assert_eq!(l.nodes.len(), 2);
        assert_eq!(l.edges.len(), 5);
        // the centred basis on E1 and E2 converges slowly
        assert!(l.rate > 0.8 && l.rate < 1.0, "{}", l.rate);
    }

    #[test]
    fn refined_rates() {
        for (lam, bound) in [(2.1, 0.75), (3.0, 0.4), (5.0, 0.25), (10.0, 0.15)] {
            let l = Layout::refined(SurfaceParams::new(lam).unwrap()).unwrap();
            assert!(l.effective_rate() < bound, "lambda {lam}: {} {}", l.rate, l.singular_ratio);
            assert!(l.samples_for(32) <= 5 * 32);
            // every node receives images strictly inside its disc
            for e in &l.edges {
                assert!(e.target < l.nodes.len() && e.source < l.nodes.len());
            }
        }
    }
}
