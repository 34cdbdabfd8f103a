//! Coded interval maps and their periodic orbits.
//!
//! A [`BranchSystem`] is a finite list of branches `x -> g.x` on open real
//! intervals plus parabolic families `x -> g1^{-+n}.x` indexed by `n >= 1`.
//! Periodic orbits are enumerated as cyclic words of branch symbols; each
//! candidate word is accepted only if the repelling fixed point of its group
//! element produces an orbit that stays inside the branch domains.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::moebius::{Classification, GroupElement, SurfaceParams};

/// Tolerance for deciding membership of periodic points in open domains.
pub const DOMAIN_TOL: f64 = 1e-10;

/// Open real interval, endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn meets(&self, other: &Interval) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Signed distance of `x` to the complement; positive inside.
    pub fn depth(&self, x: f64) -> f64 {
        (x - self.lo).min(self.hi - x)
    }

    /// Image under a Moebius map whose pole does not lie inside the interval.
    pub fn image(&self, g: &GroupElement) -> Interval {
        let increasing = g.det_sign() > 0;
        let mut lo = g.apply_real(self.lo);
        let mut hi = g.apply_real(self.hi);
        if !increasing {
            std::mem::swap(&mut lo, &mut hi);
        }
        if lo.is_infinite() {
            lo = f64::NEG_INFINITY;
        }
        if hi.is_infinite() {
            hi = f64::INFINITY;
        }
        Interval::new(lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// Finite system with identity and elliptic submaps.
    P,
    /// Reduced two-strand system with single translation steps.
    R,
    /// Accelerated two-strand system with parabolic families.
    I,
    /// Billiard system, weight +1 on the reflected branch.
    IJPlus,
    /// Billiard system, weight -1 on the reflected branch.
    IJMinus,
}

impl SystemKind {
    /// Kinds whose branches are non-contracting on their domains, which makes
    /// prefix derivatives a lower bound for the norm of any completion.
    pub fn is_accelerated(self) -> bool {
        matches!(self, SystemKind::I | SystemKind::IJPlus | SystemKind::IJMinus)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SystemKind::P => "P",
            SystemKind::R => "R",
            SystemKind::I => "I",
            SystemKind::IJPlus => "IJ+",
            SystemKind::IJMinus => "IJ-",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Branch {
    pub id: String,
    pub strand: char,
    pub target_strand: char,
    pub domain: Interval,
    pub image: Interval,
    pub element: GroupElement,
    pub weight: i8,
}

/// Branches `x -> generator^n . x` on `domain(n)`, all mapping onto `image`.
#[derive(Debug, Clone)]
pub struct ParabolicFamily {
    pub id: String,
    pub strand: char,
    pub target_strand: char,
    pub generator: GroupElement,
    /// `domain(n) = (offset + n*step, offset + (n+1)*step)` when `step > 0`,
    /// and the mirrored interval when `step < 0`.
    pub offset: f64,
    pub step: f64,
    pub image: Interval,
    pub weight: i8,
}

impl ParabolicFamily {
    pub fn domain(&self, n: u32) -> Interval {
        let n = n as f64;
        let a = self.offset + n * self.step;
        let b = self.offset + (n + 1.0) * self.step;
        Interval::new(a.min(b), a.max(b))
    }

    pub fn element(&self, n: u32) -> GroupElement {
        self.generator.pow(n as i64)
    }

    /// +1 if the domains move right with growing index, -1 otherwise.
    fn direction(&self) -> f64 {
        self.step.signum()
    }
}

/// A letter of a coded word. Finite branches sort before parabolic ones, so
/// the minimal rotation of any word containing a finite letter starts with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Finite(usize),
    Parabolic { family: usize, n: u32 },
}

/// Resolved data of a symbol.
#[derive(Debug, Clone, Copy)]
pub struct BranchView {
    pub strand: char,
    pub target_strand: char,
    pub domain: Interval,
    pub image: Interval,
    pub element: GroupElement,
    pub weight: i8,
}

#[derive(Debug, Clone)]
pub struct BranchSystem {
    pub kind: SystemKind,
    pub lambda: f64,
    pub branches: Vec<Branch>,
    pub families: Vec<ParabolicFamily>,
}

impl BranchSystem {
    pub fn build(kind: SystemKind, params: SurfaceParams) -> Self {
        let l = params.lambda();
        let gens = params.generators();
        let (s, t, g1, g2, g3) = (gens.s, gens.t, gens.g1, gens.g2, gens.g3);
        let id = GroupElement::identity();
        let inf = f64::INFINITY;
        let ninf = f64::NEG_INFINITY;
        let mk = |id: &str, strand, target, lo, hi, g: GroupElement, weight| {
            let domain = Interval::new(lo, hi);
            Branch {
                id: id.to_string(),
                strand,
                target_strand: target,
                domain,
                image: domain.image(&g),
                element: g,
                weight,
            }
        };
        let (branches, families) = match kind {
            SystemKind::P => (
                vec![
                    mk("a>d", 'a', 'd', -1.0, 0.0, s, 1),
                    mk("a>g", 'a', 'g', 0.0, inf, id, 1),
                    mk("b>g", 'b', 'g', ninf, 0.0, s, 1),
                    mk("b>c", 'b', 'c', 0.0, 1.0, s, 1),
                    mk("c>f", 'c', 'f', ninf, -l / 2.0, t, 1),
                    mk("d>e", 'd', 'e', l / 2.0, inf, t.inverse(), 1),
                    mk("e>a", 'e', 'a', -1.0, inf, id, 1),
                    mk("f>b", 'f', 'b', ninf, 1.0, id, 1),
                    mk("g>c", 'g', 'c', 0.0, 1.0, s, 1),
                    mk("g>d", 'g', 'd', 1.0, inf, id, 1),
                ],
                vec![],
            ),
            SystemKind::R => (
                vec![
                    mk("g2a", 'a', 'a', -1.0, 0.0, g2, 1),
                    mk("g3a", 'a', 'b', 0.0, 1.0, g3, 1),
                    mk("ta", 'a', 'a', l - 1.0, inf, g1.inverse(), 1),
                    mk("tb", 'b', 'b', ninf, 1.0 - l, g1, 1),
                    mk("g2b", 'b', 'a', -1.0, 0.0, g2, 1),
                    mk("g3b", 'b', 'b', 0.0, 1.0, g3, 1),
                ],
                vec![],
            ),
            SystemKind::I => (
                vec![
                    mk("g2a", 'a', 'a', -1.0, 0.0, g2, 1),
                    mk("g3a", 'a', 'b', 0.0, 1.0, g3, 1),
                    mk("g2b", 'b', 'a', -1.0, 0.0, g2, 1),
                    mk("g3b", 'b', 'b', 0.0, 1.0, g3, 1),
                ],
                vec![
                    ParabolicFamily {
                        id: "pa".into(),
                        strand: 'a',
                        target_strand: 'a',
                        generator: g1.inverse(),
                        offset: -1.0,
                        step: l,
                        image: Interval::new(-1.0, l - 1.0),
                        weight: 1,
                    },
                    ParabolicFamily {
                        id: "pb".into(),
                        strand: 'b',
                        target_strand: 'b',
                        generator: g1,
                        offset: 1.0,
                        step: -l,
                        image: Interval::new(1.0 - l, 1.0),
                        weight: 1,
                    },
                ],
            ),
            SystemKind::IJPlus | SystemKind::IJMinus => {
                let w = if kind == SystemKind::IJPlus { 1 } else { -1 };
                (
                    vec![
                        mk("g2", 'a', 'a', -1.0, 0.0, g2, 1),
                        mk("g2J", 'a', 'a', 0.0, 1.0, g2 * gens.j, w),
                    ],
                    vec![ParabolicFamily {
                        id: "p".into(),
                        strand: 'a',
                        target_strand: 'a',
                        generator: g1.inverse(),
                        offset: -1.0,
                        step: l,
                        image: Interval::new(-1.0, l - 1.0),
                        weight: 1,
                    }],
                )
            }
        };
        Self {
            kind,
            lambda: l,
            branches,
            families,
        }
    }

    pub fn view(&self, sym: Symbol) -> BranchView {
        match sym {
            Symbol::Finite(i) => {
                let b = &self.branches[i];
                BranchView {
                    strand: b.strand,
                    target_strand: b.target_strand,
                    domain: b.domain,
                    image: b.image,
                    element: b.element,
                    weight: b.weight,
                }
            }
            Symbol::Parabolic { family, n } => {
                let f = &self.families[family];
                BranchView {
                    strand: f.strand,
                    target_strand: f.target_strand,
                    domain: f.domain(n),
                    image: f.image,
                    element: f.element(n),
                    weight: f.weight,
                }
            }
        }
    }

    pub fn label(&self, sym: Symbol) -> String {
        match sym {
            Symbol::Finite(i) => self.branches[i].id.clone(),
            Symbol::Parabolic { family, n } => format!("{}^{}", self.families[family].id, n),
        }
    }

    /// Parses a label produced by [`BranchSystem::label`].
    pub fn parse_symbol(&self, label: &str) -> Result<Symbol> {
        if let Some(i) = self.branches.iter().position(|b| b.id == label) {
            return Ok(Symbol::Finite(i));
        }
        if let Some((fam, n)) = label.split_once('^') {
            if let Some(family) = self.families.iter().position(|f| f.id == fam) {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::InadmissibleWord(format!("bad index in {label}")))?;
                if n >= 1 {
                    return Ok(Symbol::Parabolic { family, n });
                }
            }
        }
        Err(Error::InadmissibleWord(format!("unknown branch {label}")))
    }

    pub fn allowed(&self, from: Symbol, to: Symbol) -> bool {
        let a = self.view(from);
        let b = self.view(to);
        a.target_strand == b.strand && a.image.meets(&b.domain)
    }

    /// Product `a_l ... a_1` of the branch elements of a (linear) word.
    pub fn word_element(&self, word: &[Symbol]) -> Result<GroupElement> {
        if word.is_empty() {
            return Err(Error::InadmissibleWord("empty word".into()));
        }
        for pair in word.windows(2) {
            if !self.allowed(pair[0], pair[1]) {
                return Err(Error::InadmissibleWord(format!(
                    "{} -> {} not allowed",
                    self.label(pair[0]),
                    self.label(pair[1])
                )));
            }
        }
        Ok(word
            .iter()
            .fold(GroupElement::identity(), |acc, &sym| self.view(sym).element * acc))
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        word.iter()
            .map(|&s| self.label(s))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// All cyclic classes of admissible periodic words up to `max_word_length`
    /// whose element is hyperbolic with norm at most `norm_bound`.
    pub fn periodic_classes(&self, max_word_length: usize, norm_bound: f64) -> Vec<OrbitClass> {
        self.enumerate(max_word_length, norm_bound).classes
    }

    pub fn enumerate(&self, max_word_length: usize, norm_bound: f64) -> Enumeration {
        let mut out = Enumeration::default();
        if max_word_length == 0 {
            return out;
        }
        let mut ctx = Dfs {
            sys: self,
            max_len: max_word_length,
            bound: norm_bound,
            word: Vec::with_capacity(max_word_length),
            out: &mut out,
        };
        for i in 0..self.branches.len() {
            let sym = Symbol::Finite(i);
            let v = self.view(sym);
            ctx.visit(sym, v.domain, v.domain.image(&v.element), v.element);
        }
        if !self.kind.is_accelerated() {
            // canonical words of the finite systems may start anywhere; the
            // accelerated systems have no admissible all-parabolic cycles
            debug_assert!(self.families.is_empty());
        }
        out.classes.sort_by(|a, b| {
            a.norm
                .partial_cmp(&b.norm)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.word.cmp(&b.word))
        });
        out
    }

    /// Primitive classes with norm at most `norm_bound`, grouped by
    /// `(norm, det sign)`.
    pub fn length_spectrum(&self, norm_bound: f64) -> Vec<SpectrumEntry> {
        let max_len = if self.kind.is_accelerated() { 64 } else { 24 };
        self.length_spectrum_with_len(norm_bound, max_len)
    }

    pub fn length_spectrum_with_len(&self, norm_bound: f64, max_len: usize) -> Vec<SpectrumEntry> {
        let classes = self.periodic_classes(max_len, norm_bound);
        group_spectrum(classes.iter().filter(|c| c.primitive))
    }
}

/// Groups classes by norm (relative tolerance 1e-9) and det sign.
pub fn group_spectrum<'a>(classes: impl Iterator<Item = &'a OrbitClass>) -> Vec<SpectrumEntry> {
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut sorted: Vec<&OrbitClass> = classes.collect();
    sorted.sort_by(|a, b| {
        a.norm
            .partial_cmp(&b.norm)
            .unwrap_or(Ordering::Equal)
            .then(a.det_sign.cmp(&b.det_sign))
    });
    for c in sorted {
        match entries.iter_mut().rev().take(4).find(|e| {
            e.det_sign == c.det_sign && (e.norm - c.norm).abs() <= 1e-9 * e.norm
        }) {
            Some(e) => e.multiplicity += 1,
            None => entries.push(SpectrumEntry {
                norm: c.norm,
                det_sign: c.det_sign,
                multiplicity: 1,
            }),
        }
    }
    entries
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub norm: f64,
    pub det_sign: i8,
    pub multiplicity: usize,
}

impl SpectrumEntry {
    pub fn length(&self) -> f64 {
        self.norm.ln()
    }
}

#[derive(Debug, Clone)]
pub struct OrbitClass {
    /// Minimal rotation of the cyclic word.
    pub word: Vec<Symbol>,
    pub element: GroupElement,
    pub trace: f64,
    pub norm: f64,
    pub det_sign: i8,
    /// Product of branch weights along the word.
    pub weight: i8,
    pub primitive: bool,
    /// `n(a)`: the class element is the `n(a)`-th power of a primitive one.
    pub multiplier: usize,
    /// `l(a)`: number of letters.
    pub word_length: usize,
    /// The periodic point in the domain of the first letter.
    pub periodic_point: f64,
}

impl OrbitClass {
    /// Length of the primitive period `m(a) = l(a)/n(a)`, i.e. the number of
    /// distinct rotations of the word.
    pub fn rotations(&self) -> usize {
        self.word_length / self.multiplier
    }
}

/// A periodic point that came within [`DOMAIN_TOL`] of a domain boundary.
#[derive(Debug, Clone)]
pub struct BoundaryHit {
    pub word: Vec<Symbol>,
    pub point: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub classes: Vec<OrbitClass>,
    pub boundary_hits: Vec<BoundaryHit>,
}

struct Dfs<'a> {
    sys: &'a BranchSystem,
    max_len: usize,
    bound: f64,
    word: Vec<Symbol>,
    out: &'a mut Enumeration,
}

impl Dfs<'_> {
    /// `cyl`: set of starting points following the word including `sym`;
    /// `fwd`: its image under `prefix`, the product including `sym`.
    fn visit(&mut self, sym: Symbol, cyl: Interval, fwd: Interval, prefix: GroupElement) {
        if cyl.is_empty() {
            return;
        }
        if self.sys.kind.is_accelerated() && min_derivative(&prefix, &cyl) > self.bound * (1.0 + 1e-9) {
            return;
        }
        self.word.push(sym);
        let first = self.word[0];
        if self.sys.allowed(sym, first) && self.sys.view(sym).image.meets(&self.sys.view(first).domain) {
            self.try_close(prefix);
        }
        if self.word.len() < self.max_len {
            self.extend(sym, cyl, fwd, prefix);
        }
        self.word.pop();
    }

    fn extend(&mut self, last: Symbol, cyl: Interval, fwd: Interval, prefix: GroupElement) {
        let last_view = self.sys.view(last);
        for i in 0..self.sys.branches.len() {
            let next = Symbol::Finite(i);
            let v = self.sys.view(next);
            if v.strand != last_view.target_strand {
                continue;
            }
            self.step(next, &v, cyl, fwd, prefix);
        }
        for (fi, fam) in self.sys.families.iter().enumerate() {
            if fam.strand != last_view.target_strand {
                continue;
            }
            let dir = fam.direction();
            let mut n = 1u32;
            loop {
                let dom = fam.domain(n);
                // domains move monotonically; stop once past the forward set
                if (dir > 0.0 && dom.lo >= fwd.hi) || (dir < 0.0 && dom.hi <= fwd.lo) {
                    break;
                }
                let next = Symbol::Parabolic { family: fi, n };
                let v = self.sys.view(next);
                let sub = fwd.intersect(&dom);
                if !sub.is_empty() {
                    let new_cyl = sub.image(&prefix.inverse()).intersect(&cyl);
                    if !new_cyl.is_empty()
                        && self.sys.kind.is_accelerated()
                        && min_derivative(&(v.element * prefix), &new_cyl) > self.bound * (1.0 + 1e-9)
                    {
                        // prefix derivative grows as the cylinder approaches the pole
                        break;
                    }
                    self.step(next, &v, cyl, fwd, prefix);
                }
                n += 1;
                if n > 10_000_000 {
                    log::warn!("parabolic index cap reached");
                    break;
                }
            }
        }
    }

    fn step(&mut self, next: Symbol, v: &BranchView, cyl: Interval, fwd: Interval, prefix: GroupElement) {
        let sub = fwd.intersect(&v.domain);
        if sub.is_empty() {
            return;
        }
        let new_cyl = sub.image(&prefix.inverse()).intersect(&cyl);
        let new_fwd = sub.image(&v.element);
        self.visit(next, new_cyl, new_fwd, v.element * prefix);
    }

    fn try_close(&mut self, element: GroupElement) {
        let word = &self.word;
        if !is_min_rotation(word) {
            return;
        }
        if element.classify() != Classification::Hyperbolic {
            return;
        }
        let norm = element.norm().expect("hyperbolic");
        if norm > self.bound {
            return;
        }
        let (attracting, repelling) = element.fixed_points().expect("hyperbolic");
        let mut candidates = vec![repelling];
        if !self.sys.kind.is_accelerated() {
            candidates.push(attracting);
        }
        let mut accepted = None;
        for p in candidates {
            let x = match p.finite() {
                Some(z) => z.re,
                None => continue,
            };
            match self.check_orbit(x) {
                OrbitCheck::Inside => {
                    accepted = Some(x);
                    break;
                }
                OrbitCheck::Boundary(depth) => {
                    log::warn!(
                        "periodic point of {} within {depth:e} of a domain boundary",
                        self.sys.format_word(word)
                    );
                    self.out.boundary_hits.push(BoundaryHit {
                        word: word.clone(),
                        point: x,
                        depth,
                    });
                }
                OrbitCheck::Outside => {}
            }
        }
        let Some(x) = accepted else { return };
        let period = primitive_period(word);
        let weight = word.iter().map(|&s| self.sys.view(s).weight).product();
        self.out.classes.push(OrbitClass {
            word: word.clone(),
            element,
            trace: element.trace(),
            norm,
            det_sign: element.det_sign(),
            weight,
            primitive: period == word.len(),
            multiplier: word.len() / period,
            word_length: word.len(),
            periodic_point: x,
        });
    }

    fn check_orbit(&self, x0: f64) -> OrbitCheck {
        let mut x = x0;
        let mut worst = f64::INFINITY;
        for &sym in &self.word {
            let v = self.sys.view(sym);
            if !x.is_finite() {
                return OrbitCheck::Outside;
            }
            let depth = v.domain.depth(x);
            let scale = 1.0f64.max(x.abs());
            worst = worst.min(depth / scale);
            if depth < -DOMAIN_TOL * scale {
                return OrbitCheck::Outside;
            }
            x = v.element.apply_real(x);
        }
        if worst <= DOMAIN_TOL {
            OrbitCheck::Boundary(worst)
        } else {
            OrbitCheck::Inside
        }
    }
}

enum OrbitCheck {
    Inside,
    Boundary(f64),
    Outside,
}

/// Lower bound of `|g'(x)|` over a bounded interval avoiding the pole.
fn min_derivative(g: &GroupElement, cyl: &Interval) -> f64 {
    if !cyl.lo.is_finite() || !cyl.hi.is_finite() {
        return 0.0;
    }
    let [_, _, c, d] = g.entries();
    let f = |x: f64| 1.0 / (c * x + d).powi(2);
    f(cyl.lo).min(f(cyl.hi))
}

fn is_min_rotation(word: &[Symbol]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        for i in 0..n {
            match word[(i + r) % n].cmp(&word[i]) {
                Ordering::Less => return false,
                Ordering::Greater => return true,
                Ordering::Equal => {}
            }
        }
        true
    })
}

fn primitive_period(word: &[Symbol]) -> usize {
    let n = word.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| word[i] == word[(i + p) % n]))
        .unwrap_or(n)
}

/// Rotates a cyclic word to its minimal rotation.
pub fn canonical_rotation(word: &[Symbol]) -> Vec<Symbol> {
    let n = word.len();
    (0..n)
        .map(|r| word[r..].iter().chain(word[..r].iter()).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(kind: SystemKind, l: f64) -> BranchSystem {
        BranchSystem::build(kind, SurfaceParams::new(l).unwrap())
    }

    fn norm_g2() -> f64 {
        (7.0 + 3.0 * 5f64.sqrt()) / 2.0
    }

    fn norm_g2j() -> f64 {
        (11.0 + 117f64.sqrt()) / 2.0
    }

    #[test]
    fn parabolic_domains() {
        let s = sys(SystemKind::I, 3.0);
        let v = s.view(Symbol::Parabolic { family: 0, n: 1 });
        assert_eq!(v.domain, Interval::new(2.0, 5.0));
        assert_eq!(v.image, Interval::new(-1.0, 2.0));
        let vb = s.view(Symbol::Parabolic { family: 1, n: 2 });
        assert_eq!(vb.domain, Interval::new(-8.0, -5.0));
        assert_eq!(vb.domain.image(&vb.element), Interval::new(-2.0, 1.0));
    }

    #[test]
    fn billiard_branch_elements() {
        let s = sys(SystemKind::IJPlus, 3.0);
        let g2j = s.view(Symbol::Finite(1));
        assert_eq!(g2j.element, GroupElement::new(-3.0, 1.0, 1.0, 0.0).unwrap());
        assert_eq!(g2j.element.det_sign(), -1);
        assert_eq!(g2j.weight, 1);
        let m = sys(SystemKind::IJMinus, 3.0);
        assert_eq!(m.view(Symbol::Finite(1)).weight, -1);
    }

    #[test]
    fn parabolic_cannot_follow_parabolic() {
        let s = sys(SystemKind::I, 3.0);
        let p1 = Symbol::Parabolic { family: 0, n: 1 };
        let p2 = Symbol::Parabolic { family: 0, n: 2 };
        assert!(!s.allowed(p1, p2));
        assert!(!s.allowed(p1, p1));
        assert!(s.allowed(Symbol::Finite(0), p1));
    }

    #[test]
    fn period_one_classes() {
        let s = sys(SystemKind::I, 3.0);
        let cl = s.periodic_classes(1, 100.0);
        assert_eq!(cl.len(), 2);
        for c in &cl {
            assert!((c.norm - norm_g2()).abs() < 1e-10);
        }
        let labels: Vec<_> = cl.iter().map(|c| s.format_word(&c.word)).collect();
        assert!(labels.contains(&"g2a".to_string()));
        assert!(labels.contains(&"g3b".to_string()));

        let b = sys(SystemKind::IJPlus, 3.0);
        let cl = b.periodic_classes(1, 100.0);
        assert_eq!(cl.len(), 2);
        assert!((cl[0].norm - norm_g2()).abs() < 1e-10);
        assert_eq!(cl[0].det_sign, 1);
        assert!((cl[1].norm - norm_g2j()).abs() < 1e-10);
        assert_eq!(cl[1].det_sign, -1);
        assert!((cl[1].periodic_point - (-3.0 + 13f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_letter_word_element() {
        let s = sys(SystemKind::I, 3.0);
        let w = [s.parse_symbol("g3a").unwrap(), s.parse_symbol("g2b").unwrap()];
        let g = s.word_element(&w).unwrap();
        assert_eq!(g, GroupElement::new(10.0, -3.0, -3.0, 1.0).unwrap());
        assert!((g.norm().unwrap() - norm_g2j().powi(2)).abs() < 1e-8);
        assert!((g.norm().unwrap() - 118.9916).abs() < 1e-4);
    }

    #[test]
    fn word_element_examples() {
        let s = sys(SystemKind::I, 3.0);
        let g2a = s.parse_symbol("g2a").unwrap();
        let p1 = s.parse_symbol("pa^1").unwrap();
        assert_eq!(s.word_element(&[g2a]).unwrap(), s.view(g2a).element);
        assert_eq!(
            s.word_element(&[g2a, p1]).unwrap(),
            GroupElement::new(6.0, 1.0, -1.0, 0.0).unwrap()
        );
        let sq = s.word_element(&[g2a, g2a]).unwrap();
        let single = s.word_element(&[g2a]).unwrap();
        assert_eq!(sq, single * single);
        let p2 = s.parse_symbol("pa^2").unwrap();
        assert!(matches!(s.word_element(&[p1, p2]), Err(Error::InadmissibleWord(_))));
        assert!(s.parse_symbol("nope").is_err());
        assert!(s.parse_symbol("pa^0").is_err());
    }

    #[test]
    fn spectrum_examples() {
        let s = sys(SystemKind::I, 3.0);
        let spec = s.length_spectrum(7.0);
        assert_eq!(spec.len(), 1);
        assert!((spec[0].norm - 6.8541).abs() < 1e-4);
        assert_eq!((spec[0].det_sign, spec[0].multiplicity), (1, 2));

        let b = sys(SystemKind::IJPlus, 3.0);
        let spec = b.length_spectrum(12.0);
        assert_eq!(spec.len(), 2);
        assert_eq!((spec[0].det_sign, spec[0].multiplicity), (1, 1));
        assert_eq!((spec[1].det_sign, spec[1].multiplicity), (-1, 1));
        assert!((spec[1].norm - 10.9083).abs() < 1e-4);
    }

    #[test]
    fn billiard_class_squares_into_geodesic_class() {
        let b = sys(SystemKind::IJPlus, 3.0);
        let g2j = b.view(Symbol::Finite(1)).element;
        let s = sys(SystemKind::I, 3.0);
        let w = [s.parse_symbol("g3a").unwrap(), s.parse_symbol("g2b").unwrap()];
        assert_eq!(g2j * g2j, s.word_element(&w).unwrap());
        let classes = s.periodic_classes(2, 200.0);
        assert!(classes
            .iter()
            .any(|c| (c.norm - (g2j * g2j).norm().unwrap()).abs() < 1e-8 && c.word_length == 2));
    }

    #[test]
    fn rotation_helpers() {
        use Symbol::*;
        let w = [Finite(2), Finite(0), Finite(1)];
        assert_eq!(canonical_rotation(&w), vec![Finite(0), Finite(1), Finite(2)]);
        assert!(!is_min_rotation(&w));
        assert!(is_min_rotation(&[Finite(0), Finite(0), Finite(1)]));
        assert_eq!(primitive_period(&[Finite(0), Finite(1), Finite(0), Finite(1)]), 2);
        assert!(Finite(9) < Parabolic { family: 0, n: 1 });
    }

    #[test]
    fn interval_image_handles_poles() {
        let g = SurfaceParams::new(3.0).unwrap().generators();
        assert_eq!(Interval::new(-1.0, 0.0).image(&g.s), Interval::new(1.0, f64::INFINITY));
        assert_eq!(Interval::new(0.0, 1.0).image(&g.g3), Interval::new(f64::NEG_INFINITY, 2.0));
        let gj = g.g2 * g.j;
        assert_eq!(Interval::new(0.0, 1.0).image(&gj), Interval::new(-2.0, f64::INFINITY));
    }
}
