//! One line per acceptance criterion; exits non-zero if any line fails.

use std::time::Instant;

use hecke_zeta::domains::{image_disc, inclusion_margin, inclusion_report, standard_discs, ChartedDisc, Disc, E2Variant};
use hecke_zeta::moebius::{GroupElement, SurfaceParams};
use hecke_zeta::resonances::{find_delta, grid_csv, leading_eigenvalue, locate_zeros, scan_grid, Rect};
use hecke_zeta::symbolic::{BranchSystem, OrbitClass, SystemKind};
use hecke_zeta::transferop::{compose_block, residue_rank, Method, OperatorContext};
use hecke_zeta::zeta::{
    closed_form_trace, fredholm_det, matrix_traces, orbit_traces_for, trace_series_with, zeta_euler, Which, ZetaOperator,
};
use hecke_zeta::C64;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn params(l: f64) -> SurfaceParams {
    SurfaceParams::new(l).unwrap()
}

fn cocycle_suite() -> Outcome {
    let g = params(3.0).generators();
    let letters = [g.s, g.t, g.t.inverse(), g.j];
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let word = |rng: &mut rand::rngs::StdRng| {
        let len = rng.gen_range(0..=8);
        (0..len).fold(GroupElement::identity(), |acc, _| acc * letters[rng.gen_range(0..4)])
    };
    let svals = [c(1.0, 0.0), c(0.75, 2.0), c(2.0, -1.0)];
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 500 {
        let (a, b) = (word(&mut rng), word(&mut rng));
        let x: f64 = rng.gen_range(-20.0..20.0);
        let s = svals[rng.gen_range(0..3)];
        let [_, _, cb, db] = b.entries();
        let bx = b.apply_real(x);
        let [_, _, ca, da] = a.entries();
        // both cocycle bases must be positive, that is nonzero
        if (cb * x + db).abs() < 1e-3 || !bx.is_finite() || (ca * bx + da).abs() < 1e-3 {
            continue;
        }
        let lhs = (a * b).cocycle_j(s, c(x, 0.0)).unwrap();
        let rhs = a.cocycle_j(s, c(bx, 0.0)).unwrap() * b.cocycle_j(s, c(x, 0.0)).unwrap();
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        done += 1;
    }
    check(worst < 1e-10, format!("500 samples, max error {worst:.1e} (relative above 1)"))
}

fn inclusions_literal() -> Outcome {
    let lambdas = [2.1, 2.5, 3.0, 5.0, 10.0];
    let failing: Vec<String> = lambdas
        .iter()
        .filter_map(|&l| {
            let r = inclusion_report(params(l), 50, E2Variant::Prose);
            r.first_failure().map(|f| format!("{l}: {} margin {:.3}", f.condition, f.margin))
        })
        .collect();
    let displayed = inclusion_report(params(3.0), 50, E2Variant::Displayed);
    let shown = !displayed.get("h1^1.E1 in E2").unwrap().passed();
    check(
        failing.is_empty() && shown,
        format!(
            "prose second disc: {}; displayed disc fails h1.E1 in E2: {shown}",
            if failing.is_empty() { "all margins positive".to_string() } else { format!("fails at {}", failing.join(", ")) }
        ),
    )
}

fn inclusions_working() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for l in [2.1, 2.5, 3.0, 5.0, 10.0] {
        let r = inclusion_report(params(l), 50, E2Variant::Working);
        ok &= r.all_passed();
        worst = worst.min(r.checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min));
    }
    let displayed = inclusion_report(params(3.0), 50, E2Variant::Displayed);
    let shown = !displayed.get("h1^1.E1 in E2").unwrap().passed();
    check(ok && shown, format!("working second disc: smallest margin {worst:.3e}; displayed disc fails h1.E1 in E2: {shown}"))
}

/// Block trace of a class element on a disc about its attracting fixed point.
fn class_block_trace(class: &OrbitClass, s: C64) -> C64 {
    let x = class.periodic_point;
    let e = class.element;
    let h = if e.derivative(c(x, 0.0)).norm() < 1.0 { e } else { e.inverse() };
    let mut r = h.pole().map(|p| 0.5 * (p - x).abs()).unwrap_or(1.0).min(1.0);
    loop {
        let d = Disc::new(x, r).unwrap();
        let img = image_disc(&h, &d).unwrap();
        if inclusion_margin(&img, &d) > 0.0 {
            let chart = ChartedDisc::centered(d);
            return compose_block(&h, &chart, &chart, s, 32).unwrap().trace();
        }
        r *= 0.5;
    }
}

fn trace_closed_form() -> Outcome {
    let p = params(3.0);
    let g = p.generators();
    let e1 = standard_discs(p).e1;
    let h2i = g.h2.inverse();
    let img = image_disc(&h2i, &e1).unwrap();
    let chart = ChartedDisc::adapted(e1, img.left(), img.right()).unwrap();
    let t = compose_block(&h2i, &chart, &chart, c(1.0, 0.0), 32).unwrap().trace();
    let first = (t - 0.170_820_393_2).norm();
    let sys = BranchSystem::build(SystemKind::I, p);
    let classes = sys.periodic_classes(2, 1e4);
    let mut worst: f64 = 0.0;
    for class in &classes {
        for s in [c(1.0, 0.0), c(0.8, 2.0)] {
            worst = worst.max((class_block_trace(class, s) - closed_form_trace(class.norm, class.det_sign, s)).norm());
        }
    }
    check(
        first < 1e-9 && worst < 1e-8,
        format!("g2 block trace {:.10} (error {first:.1e}); {} classes of period <= 2, max error {worst:.1e}", t.re, classes.len()),
    )
}

fn orbit_consistency() -> Outcome {
    let p = params(3.0);
    let ctx = OperatorContext::new(p, 32).unwrap();
    let s = c(2.0, 0.0);
    let (plus, minus) = ctx.assemble_both(s, Method::Continued).unwrap();
    let full = ctx.assemble_full(s, Method::Continued).unwrap();
    let mut worst: f64 = 0.0;
    for (m, which) in [(plus, Which::ZPlus), (minus, Which::ZMinus), (full, Which::Z)] {
        let t = matrix_traces(&m.dense(), 4);
        let o = orbit_traces_for(p, which, s, 4, 1e9);
        for n in 0..4 {
            worst = worst.max((t[n] - o[n]).norm());
        }
    }
    check(worst < 1e-7, format!("L+, L- and full operator, n = 1..4: max error {worst:.1e}"))
}

fn determinant_convergence() -> Outcome {
    let p = params(3.0);
    let s = c(1.0, 0.0);
    let d24 = fredholm_det(&OperatorContext::new(p, 24).unwrap().assemble_full(s, Method::Continued).unwrap());
    let d48 = fredholm_det(&OperatorContext::new(p, 48).unwrap().assemble_full(s, Method::Continued).unwrap());
    let rel = (d24 - d48).norm() / d48.norm();
    check(rel < 1e-8, format!("det at N = 48 is {:.12}, relative change from N = 24 {rel:.1e}", d48.re))
}

fn three_paths() -> Outcome {
    let p = params(3.0);
    let op = ZetaOperator::new(p, 32).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for s in [c(3.0, 0.0), c(4.0, 0.0)] {
        let z = op.z(s).unwrap();
        let e = zeta_euler(p, s, Which::Z, 14, 25).unwrap().value;
        worst = worst.max((z - e).norm());
        parts.push(format!("Z({}) = {:.12}", s.re, z.re));
        if s.re == 3.0 {
            let t = trace_series_with(&op.fine, s, 40, 0).unwrap().value.value;
            worst = worst.max((t - z).norm()).max((t - e).norm());
        }
    }
    check(worst < 1e-6, format!("{}; max pairwise difference {worst:.1e}", parts.join(", ")))
}

fn factorisation() -> Outcome {
    let p = params(3.0);
    let mut worst: f64 = 0.0;
    for s in [2.5, 3.0, 4.0] {
        let s = c(s, 0.0);
        let z = zeta_euler(p, s, Which::Z, 14, 25).unwrap().value;
        let zp = zeta_euler(p, s, Which::ZPlus, 14, 25).unwrap().value;
        let zm = zeta_euler(p, s, Which::ZMinus, 14, 25).unwrap().value;
        worst = worst.max((z - zp * zm).norm());
    }
    check(worst < 1e-8, format!("separately enumerated spectra, max |Z - Z+ Z-| {worst:.1e}"))
}

fn continuation() -> Outcome {
    let p = params(3.0);
    let ctx = OperatorContext::new(p, 24).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=8 {
        for im in [0.0, 2.0, -5.0] {
            let s = c(0.6 + 0.3 * i as f64, im);
            let d = ctx.parabolic_block(s, Method::Direct { tol: 1e-13 }).unwrap();
            let k = ctx.parabolic_block(s, Method::Continued).unwrap();
            worst = worst.max((&d - &k).iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    let finite = ctx
        .parabolic_block(c(0.25, 0.0), Method::Continued)
        .map(|b| b.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
        .unwrap_or(false);
    let ranks: Vec<(Vec<usize>, usize)> = [0.5, 0.0]
        .iter()
        .map(|&s0| {
            let r = residue_rank(p, s0, 24).unwrap();
            (r.per_block, r.total)
        })
        .collect();
    let ranks_ok = ranks.iter().all(|(b, t)| b.iter().all(|&k| k == 1) && *t <= 2);
    check(
        worst < 1e-9 && finite && ranks_ok,
        format!("direct vs continued max {worst:.1e}; finite at 0.25: {finite}; residue ranks at 1/2, 0: {ranks:?}"),
    )
}

fn delta_criterion() -> Outcome {
    let p = params(3.0);
    let op = ZetaOperator::new(p, 32).unwrap();
    let d = find_delta(&op, 1e-12).unwrap();
    let eig = (leading_eigenvalue(&op.fine, c(d.delta, 0.0)).unwrap() - 1.0).norm();
    let zd = op.z(c(d.delta, 0.0)).unwrap().norm();
    let d24 = find_delta(&ZetaOperator::new(p, 24).unwrap(), 1e-12).unwrap().delta;
    let d48 = find_delta(&ZetaOperator::new(p, 48).unwrap(), 1e-12).unwrap().delta;
    let stable = (d24 - d48).abs();
    let positive = (0..=56).all(|i| {
        let z = op.z(c(1.2 + 0.05 * i as f64, 0.0)).unwrap();
        z.re > 0.0 && z.im.abs() < 1e-12
    });
    let zeros = locate_zeros(&op, Rect::new(d.delta + 0.01, 2.0, -5.0, 5.0).unwrap()).unwrap();
    let right = zeros.iter().filter(|z| z.s.re > d.delta + 1e-6).count();
    check(
        d.delta > 0.5 && d.delta < 1.0 && eig < 1e-10 && zd < 1e-8 && stable < 1e-9 && positive && right == 0,
        format!(
            "delta = {:.12}, |lambda_max - 1| {eig:.1e}, |Z(delta)| {zd:.1e}, N 24 -> 48 change {stable:.1e}, \
             positive on [1.2, 4]: {positive}, zeros right of delta: {right}",
            d.delta
        ),
    )
}

fn reality_and_determinism() -> Outcome {
    let op = ZetaOperator::new(params(3.0), 24).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let s = c(0.05 + 0.15 * i as f64, 0.3 + 0.6 * j as f64);
            let a = op.z(s).unwrap();
            let b = op.z(s.conj()).unwrap();
            worst = worst.max((a.conj() - b).norm() / a.norm().max(1.0));
        }
    }
    let region = Rect::new(0.3, 0.9, -1.0, 1.0).unwrap();
    let csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| grid_csv(&scan_grid(&op, region, 0.1).unwrap()))
    };
    let runs = [csv(1), csv(3), csv(8)];
    let same = runs.iter().all(|r| r.as_bytes() == runs[0].as_bytes());
    check(worst < 1e-12 && same, format!("100 conjugate pairs, max error {worst:.1e}; CSV identical for 1, 3, 8 threads: {same}"))
}

fn main() {
    type Criterion = (&'static str, f64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("1 cocycle suite", 5.0, cocycle_suite),
        ("2 disc inclusions (prose second disc, as stated)", 1.0, inclusions_literal),
        ("2 disc inclusions (working second disc)", 1.0, inclusions_working),
        ("3 closed-form block traces", f64::INFINITY, trace_closed_form),
        ("4 orbit/operator trace consistency", f64::INFINITY, orbit_consistency),
        ("5 determinant convergence", f64::INFINITY, determinant_convergence),
        ("6 determinant, Euler product and trace series", f64::INFINITY, three_paths),
        ("7 factorisation of independent spectra", f64::INFINITY, factorisation),
        ("8 continuation of the parabolic blocks", f64::INFINITY, continuation),
        ("9 leading zero delta", f64::INFINITY, delta_criterion),
        ("10 reality and determinism", f64::INFINITY, reality_and_determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.pass && secs < budget;
        if !pass {
            failed += 1;
        }
        let limit = if budget.is_finite() { format!(", limit {budget} s") } else { String::new() };
        println!("{} criterion {name}: {} ({secs:.2} s{limit})", if pass { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("{failed} of 11 lines failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
