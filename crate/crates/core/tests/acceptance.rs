//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the summary lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ricci_soliton::expr::{parse, Bindings, Chart, Point};
use ricci_soliton::families::*;
use ricci_soliton::geometry::{
    bianchi_defects, frame_at, weyl, MetricSpec, ScalarFieldSpec, VectorFieldSpec,
};
use ricci_soliton::soliton::*;

const POINTS: usize = 100;

/// Named maxima checked against pinned tolerances.
#[derive(Default)]
struct Tally {
    items: Vec<(String, f64, f64, bool)>,
}

impl Tally {
    /// Requires `value ≤ tol`.
    fn at_most(&mut self, name: &str, value: f64, tol: f64) {
        self.items.push((name.to_string(), value, tol, value <= tol));
    }

    /// Requires `value > bound`.
    fn above(&mut self, name: &str, value: f64, bound: f64) {
        self.items.push((format!("{name} (> bound)"), value, bound, value > bound));
    }

    fn require(&mut self, name: &str, ok: bool) {
        self.items.push((name.to_string(), ok as u8 as f64, 1.0, ok));
    }

    fn pass(&self) -> bool {
        self.items.iter().all(|i| i.3)
    }

    fn summary(&self) -> String {
        self.items
            .iter()
            .map(|(n, v, t, ok)| {
                let mark = if *ok { "" } else { " !!" };
                format!("{n} {v:.2e}/{t:.0e}{mark}")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Largest value of `f` over `points`.
fn max_over(points: &[Point], mut f: impl FnMut(&Point) -> f64) -> f64 {
    points.iter().map(|p| f(p)).fold(0.0, f64::max)
}

fn sample(seed: u64, dim: usize) -> Vec<Point> {
    random_points(seed, POINTS, &unit_box(dim))
}

/// `(text, f, f', f'')` for the Egorov test profiles, with closed-form derivatives.
type Profile = (&'static str, fn(f64) -> [f64; 3]);

const PROFILES: [Profile; 3] = [
    ("exp(2*u)", |u| {
        let e = (2.0 * u).exp();
        [e, 2.0 * e, 4.0 * e]
    }),
    ("1 + u^2", |u| [1.0 + u * u, 2.0 * u, 2.0]),
    ("exp(-u)", |u| {
        let e = (-u).exp();
        [e, -e, e]
    }),
];

const NS: [usize; 3] = [1, 2, 4];

fn egorov(n: usize, f: &str) -> EgorovParams {
    EgorovParams::parse(n, f, (-1.0, 1.0)).unwrap()
}

fn residual_max(m: &MetricSpec, c: &SolitonCandidate, seed: u64) -> f64 {
    max_over(&sample(seed, m.dim()), |p| {
        soliton_residual_at(m, c, p).unwrap().amax()
    })
}

fn gradient_residual_max(m: &MetricSpec, c: &SolitonCandidate, seed: u64) -> f64 {
    max_over(&sample(seed, m.dim()), |p| {
        gradient_residual_at(m, c, p).unwrap().amax()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

// 1 ---------------------------------------------------------------------------
fn egorov_formulas(t: &mut Tally) {
    let (mut gam, mut riem, mut unlisted, mut ric) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (text, profile) in PROFILES {
        for n in NS {
            let m = egorov_metric(&egorov(n, text)).unwrap();
            let d = n + 2;
            let (u_, v_) = (0, 1);
            for p in sample(100 + n as u64, d).iter() {
                let frame = frame_at(&m, p, 2).unwrap();
                let [f, f1, f2] = profile(p[0]);
                let bracket = f1 * f1 - 2.0 * f * f2;
                let xs = 2..d;
                // connection
                for a in 0..d {
                    for i in 0..d {
                        for j in 0..d {
                            let mut expected = 0.0;
                            if a == v_ && i == j && xs.contains(&i) {
                                expected = -f1 / 2.0;
                            }
                            if xs.contains(&a) && ((i == u_ && j == a) || (j == u_ && i == a)) {
                                expected = f1 / (2.0 * f);
                            }
                            gam = gam.max(rel(frame.christoffel(a, i, j), expected));
                        }
                    }
                }
                // curvature: R^l_{ijk}, independent up to i ↔ j antisymmetry
                for l in 0..d {
                    for i in 0..d {
                        for j in (i + 1)..d {
                            for kk in 0..d {
                                let mut expected = None;
                                // R^v_{u i i} = −R^v_{i u i}
                                if l == v_ && i == u_ && xs.contains(&j) && kk == j {
                                    expected = Some(-bracket / (4.0 * f));
                                }
                                // R^i_{u i u} = −R^i_{i u u}
                                if xs.contains(&l) && i == u_ && j == l && kk == u_ {
                                    expected = Some(bracket / (4.0 * f * f));
                                }
                                let got = frame.riemann(l, i, j, kk);
                                match expected {
                                    Some(e) => riem = riem.max(rel(got, e)),
                                    None => unlisted = unlisted.max(got.abs()),
                                }
                            }
                        }
                    }
                }
                for i in 0..d {
                    for j in 0..d {
                        let expected = if i == u_ && j == u_ {
                            n as f64 * bracket / (4.0 * f * f)
                        } else {
                            0.0
                        };
                        ric = ric.max(rel(frame.ricci[(i, j)], expected));
                    }
                }
            }
        }
    }
    t.at_most("Γ rel", gam, 1e-9);
    t.at_most("R listed rel", riem, 1e-10);
    t.at_most("R unlisted", unlisted, 1e-10);
    t.at_most("Ric rel", ric, 1e-9);
}

// 2 ---------------------------------------------------------------------------
fn egorov_particular(t: &mut Tally) {
    let (mut closed, mut quad) = (0.0f64, 0.0f64);
    for (text, _) in PROFILES {
        for n in NS {
            let p = egorov(n, text);
            let m = egorov_metric(&p).unwrap();
            let nn = n as f64;
            let primitive = match text {
                "exp(2*u)" => format!("-{nn}*u"),
                "exp(-u)" => format!("-({nn}/4)*u"),
                _ => format!("-{nn}*(u/(2*(1 + u^2)) + atan(u)/2)"),
            };
            let primitive = parse(&primitive, p.chart(), &[] as &[&str]).unwrap();
            for lambda in [-1.0, 0.0, 1.0] {
                let c = egorov_particular_soliton(&p, lambda, Some(primitive.clone())).unwrap();
                closed = closed.max(residual_max(&m, &c, 200 + n as u64));
                let c = egorov_particular_soliton(&p, lambda, None).unwrap();
                assert!(c.has_antiderivative());
                quad = quad.max(residual_max(&m, &c, 210 + n as u64));
            }
        }
    }
    t.at_most("closed-form residual", closed, 1e-8);
    t.at_most("quadrature residual", quad, 1e-6);
}

// 3 ---------------------------------------------------------------------------
fn egorov_general(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let r = |rng: &mut ChaCha8Rng| rng.random_range(-2.0..2.0);
    let mut worst = 0.0f64;
    for n in NS {
        let p = egorov(n, "exp(2*u)");
        let m = egorov_metric(&p).unwrap();
        for draw in 0..4 {
            let mut rot = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = r(&mut rng);
                    rot[(i, j)] = v;
                    rot[(j, i)] = -v;
                }
            }
            let k = EgorovGeneralConstants {
                a: r(&mut rng),
                b: 0.0,
                quadratic: 0.0,
                c0: r(&mut rng),
                c: (0..n).map(|_| r(&mut rng)).collect(),
                k: (0..n).map(|_| r(&mut rng)).collect(),
                rotation: rot,
            };
            let lambda = r(&mut rng);
            let c = egorov_general_soliton(&p, lambda, &k).unwrap();
            worst = worst.max(residual_max(&m, &c, 310 + draw));
        }
    }
    t.at_most("random-constant residual", worst, 1e-6);

    let p = egorov(2, "exp(2*u)");
    let mut bad_b = EgorovGeneralConstants::zero(2);
    bad_b.b = 1.0;
    let mut bad_k = EgorovGeneralConstants::zero(2);
    bad_k.quadratic = 0.5;
    let q = egorov(1, "1 + u^2");
    let mut bad_q = EgorovGeneralConstants::zero(1);
    bad_q.b = 1.0;
    let rejected = [
        egorov_general_soliton(&p, 0.0, &bad_b),
        egorov_general_soliton(&p, 0.0, &bad_k),
        egorov_general_soliton(&q, 0.0, &bad_q),
    ]
    .iter()
    .all(|r| matches!(r, Err(FamilyError::EgorovConstraint { .. })));
    t.require("4K-constraint violations rejected", rejected);
}

// 4 ---------------------------------------------------------------------------
fn egorov_gradient(t: &mut Tally) {
    let (mut res, mut norm, mut geo, mut rec, mut ricg) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (text, _) in PROFILES {
        for n in NS {
            let p = egorov(n, text);
            let m = egorov_metric(&p).unwrap();
            let c = egorov_gradient_potential(&p, 0.0).unwrap();
            res = res.max(gradient_residual_max(&m, &c, 400 + n as u64));
            for pt in sample(410 + n as u64, n + 2) {
                let d = gradient_diagnostics_at(&m, c.as_potential().unwrap(), 0.0, &pt).unwrap();
                norm = norm.max(d.norm_sq_grad.abs());
                geo = geo.max(d.geodesic_defect);
                rec = rec.max(d.recurrence_defect);
                ricg = ricg.max(d.ricci_grad_defect);
            }
        }
    }
    t.at_most("gradient residual", res, 1e-9);
    t.at_most("‖grad h‖²", norm, 1e-10);
    t.at_most("geodesic", geo, 1e-10);
    t.at_most("recurrence", rec, 1e-10);
    t.at_most("Ric(grad h,·)", ricg, 1e-10);
}

const KAPPAS: [&[f64]; 3] = [&[1.0, -1.0], &[2.0, 3.0], &[1.0, 1.0, 1.0]];

// 5 ---------------------------------------------------------------------------
fn cw_reproduction(t: &mut Tally) {
    let (mut rm, mut ric, mut sc, mut q2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for kappa in KAPPAS {
        let m = cw_metric(&CWParams::new(kappa.to_vec()).unwrap()).unwrap();
        let sum: f64 = kappa.iter().sum();
        for p in sample(500 + kappa.len() as u64, kappa.len() + 2) {
            let frame = frame_at(&m, &p, 2).unwrap();
            for (i, k) in kappa.iter().enumerate() {
                rm = rm.max((frame.riemann_form(0, i + 2, 0, i + 2) + k).abs());
            }
            ric = ric.max((frame.ricci[(0, 0)] + sum).abs());
            sc = sc.max(frame.scalar_curvature.abs());
            q2 = q2.max(nilpotency_defect(&frame).square);
        }
    }
    t.at_most("R(u,i,u,i)+κ_i", rm, 1e-10);
    t.at_most("Ric_uu+Σκ", ric, 1e-10);
    t.at_most("Sc", sc, 1e-10);
    t.at_most("Q²", q2, 1e-12);
}

// 6 ---------------------------------------------------------------------------
fn cw_solitons(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let (mut part, mut general, mut grad, mut cons) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut branches = (false, false);
    for (s, kappa) in KAPPAS.iter().enumerate() {
        let params = CWParams::new(kappa.to_vec()).unwrap();
        let m = cw_metric(&params).unwrap();
        let n = kappa.len();
        for lambda in [-1.0, 0.0, 1.0] {
            let c = cw_particular_soliton(&params, lambda).unwrap();
            part = part.max(residual_max(&m, &c, 610 + s as u64));

            let mut cc = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    if kappa[i] == kappa[j] {
                        let v = rng.random_range(-2.0..2.0);
                        cc[(i, j)] = v;
                        cc[(j, i)] = -v;
                    }
                }
            }
            let k = CWGeneralConstants {
                a: rng.random_range(-2.0..2.0),
                b: rng.random_range(-2.0..2.0),
                c: cc,
                d1: (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
                d2: (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
            };
            branches.0 |= kappa.iter().any(|k| *k > 0.0);
            branches.1 |= kappa.iter().any(|k| *k < 0.0);
            let c = cw_general_soliton(&params, lambda, &k).unwrap();
            general = general.max(residual_max(&m, &c, 620 + s as u64));
        }
        let c = cw_gradient_potential(
            &params,
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            0.0,
        )
        .unwrap();
        grad = grad.max(gradient_residual_max(&m, &c, 630 + s as u64));
        cons = cons.max(max_over(&sample(640 + s as u64, n + 2), |p| {
            lambda_consistency_at(&m, &c, p).unwrap().abs()
        }));
    }
    t.at_most("particular residual", part, 1e-9);
    t.at_most("general residual", general, 1e-9);
    t.require("exp and trig branches exercised", branches.0 && branches.1);
    t.at_most("gradient residual", grad, 1e-10);
    t.at_most("λ-consistency", cons, 1e-10);
}

// 7 ---------------------------------------------------------------------------
fn conformal_flatness(t: &mut Tally) {
    let mut flat = 0.0f64;
    for eps in [1.0, -1.0, 2.5] {
        for n in [2, 3] {
            let m = epsilon_metric(n, eps).unwrap();
            flat = flat.max(max_over(&sample(700 + n as u64, n + 2), |p| {
                max_abs(&weyl(&frame_at(&m, p, 2).unwrap()).unwrap())
            }));
        }
    }
    for (text, _) in PROFILES {
        for n in NS {
            let m = egorov_metric(&egorov(n, text)).unwrap();
            flat = flat.max(max_over(&sample(710 + n as u64, n + 2), |p| {
                max_abs(&weyl(&frame_at(&m, p, 2).unwrap()).unwrap())
            }));
        }
    }
    t.at_most("Weyl on ε/Egorov", flat, 1e-9);

    let m = cw_metric(&CWParams::new(vec![1.0, 2.0]).unwrap()).unwrap();
    let origin = point(&[0.0; 4]);
    let w = max_abs(&weyl(&frame_at(&m, &origin, 2).unwrap()).unwrap());
    t.above("Weyl CW(1,2)", w, 0.1);
    // pinned from the independent textbook-formula oracle: max |C| = |−κ_1 + Σκ/n| = 0.5
    let oracle = max_abs(&common::weyl(&m, &[0.0; 4]));
    t.at_most("|oracle − 0.5|", (oracle - 0.5).abs(), 1e-8);
    t.at_most("|W − 0.5|", (w - 0.5).abs(), 1e-12);
}

// 8 ---------------------------------------------------------------------------
fn generic_metric() -> MetricSpec {
    let chart = Chart::new(&["t", "x", "y", "z"]).unwrap();
    let e = |s: &str| parse(s, &chart, &[] as &[&str]).unwrap();
    MetricSpec::from_entries(
        chart.clone(),
        &[
            (0, 0, e("-(1 + 0.3*x^2 + 0.1*sin(y))")),
            (0, 1, e("0.1*y")),
            (1, 1, e("1 + 0.2*t^2")),
            (2, 2, e("exp(0.3*x)")),
            (3, 3, e("1 + 0.1*y^2 + 0.05*t*z")),
        ],
        Bindings::new(),
    )
    .unwrap()
}

fn oracle_cases() -> Vec<(MetricSpec, Vec<SolitonCandidate>)> {
    let mut cases = Vec::new();
    for (text, _) in PROFILES {
        let p = egorov(2, text);
        let mut k = EgorovGeneralConstants::zero(2);
        k.c0 = 0.5;
        k.k = vec![1.0, -0.5];
        k.rotation = DMatrix::from_row_slice(2, 2, &[0.0, 0.7, -0.7, 0.0]);
        let general = if text == "exp(2*u)" {
            k.a = 1.5;
            vec![egorov_general_soliton(&p, 1.0, &k).unwrap()]
        } else {
            vec![]
        };
        let mut cands = vec![
            egorov_particular_soliton(&p, 1.0, None).unwrap(),
            egorov_gradient_potential(&p, 0.0).unwrap(),
        ];
        cands.extend(general);
        cases.push((egorov_metric(&p).unwrap(), cands));
    }
    for kappa in KAPPAS {
        let params = CWParams::new(kappa.to_vec()).unwrap();
        let n = kappa.len();
        let k = CWGeneralConstants {
            a: 0.3,
            b: -0.2,
            c: DMatrix::zeros(n, n),
            d1: vec![0.5; n],
            d2: vec![-0.4; n],
        };
        cases.push((
            cw_metric(&params).unwrap(),
            vec![
                cw_particular_soliton(&params, -1.0).unwrap(),
                cw_general_soliton(&params, 1.0, &k).unwrap(),
                cw_gradient_potential(&params, 1.0, 2.0, 0.0).unwrap(),
            ],
        ));
    }
    let m = generic_metric();
    let chart = m.chart().clone();
    let e = |s: &str| parse(s, &chart, &[] as &[&str]).unwrap();
    let x = VectorFieldSpec::new(
        chart.clone(),
        vec![e("sin(x) + t*y"), e("x^2 - z"), e("exp(0.2*t)*z"), e("cos(y*t)")],
        Bindings::new(),
    )
    .unwrap();
    let h = ScalarFieldSpec::new(chart.clone(), e("t*x + sin(y)*z^2"), Bindings::new()).unwrap();
    cases.push((
        m,
        vec![
            SolitonCandidate::vector(x, 0.0).unwrap(),
            SolitonCandidate::gradient(h, 0.0).unwrap(),
        ],
    ));
    cases
}

fn oracle_cross_checks(t: &mut Tally) {
    const STEP: f64 = 1e-5;
    const TOL: f64 = 1e-5;
    let relerr = |sym: f64, fd: f64| (sym - fd).abs() / sym.abs().max(1.0);
    let (mut metric_err, mut field_err) = (0.0f64, 0.0f64);
    let (mut algebraic, mut second) = (0.0f64, 0.0f64);
    for (c, (m, cands)) in oracle_cases().into_iter().enumerate() {
        let d = m.dim();
        for p in random_points(800 + c as u64, 20, &unit_box(d)) {
            let x = p.coords();
            let f0 = frame_at(&m, &p, 3).unwrap();
            let frame = |q: &[f64]| frame_at(&m, &point(q), 2).unwrap();
            for a in 0..d {
                let up = { let mut q = x.to_vec(); q[a] += STEP; frame(&q) };
                let dn = { let mut q = x.to_vec(); q[a] -= STEP; frame(&q) };
                for i in 0..d {
                    for j in 0..d {
                        let fd = (up.g[(i, j)] - dn.g[(i, j)]) / (2.0 * STEP);
                        let sym = eval(m.first_partial(i, j, a), x, m.params());
                        metric_err = metric_err.max(relerr(sym, fd)).max(relerr(f0.dg(i, j, a), fd));
                        for b in 0..d {
                            let fd2 = (up.dg(i, j, b) - dn.dg(i, j, b)) / (2.0 * STEP);
                            metric_err = metric_err.max(relerr(f0.d2g(i, j, b, a), fd2));
                            for e in 0..d {
                                let fd3 = (up.d2g(i, j, b, e) - dn.d2g(i, j, b, e)) / (2.0 * STEP);
                                metric_err = metric_err.max(relerr(f0.d3g(i, j, b, e, a).unwrap(), fd3));
                            }
                        }
                    }
                }
            }
            for cand in &cands {
                match (cand.as_vector(), cand.as_potential()) {
                    (Some(v), _) => {
                        let jet = v.jet_at(&p).unwrap();
                        for a in 0..d {
                            let fd = |k: usize| fd2(|q| eval(&v.components()[k], q, v.params()), x, a, STEP);
                            for k in 0..d {
                                field_err = field_err.max(relerr(jet.partials[(k, a)], fd(k)));
                            }
                        }
                    }
                    (_, Some(h)) => {
                        let jet = h.jet_at(&p).unwrap();
                        for a in 0..d {
                            let fd = fd2(|q| eval(h.value(), q, h.params()), x, a, STEP);
                            field_err = field_err.max(relerr(jet.first[a], fd));
                            for b in 0..d {
                                let fdb = fd2(|q| h.jet_at(&point(q)).unwrap().first[b], x, a, STEP);
                                field_err = field_err.max(relerr(jet.second[(a, b)], fdb));
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
            let b = bianchi_defects(&f0).unwrap();
            algebraic = algebraic
                .max(b.antisymmetry_first_pair)
                .max(b.antisymmetry_last_pair)
                .max(b.pair_symmetry)
                .max(b.first_bianchi);
            second = second.max(b.second_bianchi.unwrap()).max(b.contracted_bianchi.unwrap());
        }
    }
    t.at_most("metric partials vs FD", metric_err, TOL);
    t.at_most("field partials vs FD", field_err, TOL);
    t.at_most("symmetries + first Bianchi", algebraic, 1e-9);
    t.at_most("second Bianchi", second, 1e-8);
}

// 9 ---------------------------------------------------------------------------
fn homothety_algebra(t: &mut Tally) {
    let mut pairs: Vec<(MetricSpec, SolitonCandidate, SolitonCandidate)> = Vec::new();
    for (text, _) in PROFILES {
        let p = egorov(2, text);
        pairs.push((
            egorov_metric(&p).unwrap(),
            egorov_particular_soliton(&p, 1.0, None).unwrap(),
            egorov_particular_soliton(&p, -1.0, None).unwrap(),
        ));
    }
    for kappa in KAPPAS {
        let params = CWParams::new(kappa.to_vec()).unwrap();
        let n = kappa.len();
        let mut k = CWGeneralConstants::zero(n);
        k.d1 = vec![0.3; n];
        k.a = 0.4;
        pairs.push((
            cw_metric(&params).unwrap(),
            cw_general_soliton(&params, 1.0, &k).unwrap(),
            cw_general_soliton(&params, -1.0, &k).unwrap(),
        ));
    }
    let mut homothety = 0.0f64;
    for (s, (m, x1, x2)) in pairs.iter().enumerate() {
        let diff = x1.as_vector().unwrap().minus(x2.as_vector().unwrap()).unwrap();
        homothety = homothety.max(max_over(&sample(900 + s as u64, m.dim()), |p| {
            homothety_defect_at(m, &diff, 2.0, p).unwrap()
        }));
    }
    t.at_most("𝓛_{X1−X2}g − 2g", homothety, 1e-8);

    let mut rng = ChaCha8Rng::seed_from_u64(910);
    let mut with_killing = 0.0f64;
    for eps in [1.0, -1.0] {
        for n in [2, 3] {
            let params = epsilon_params(n, eps).unwrap();
            let m = cw_metric(&params).unwrap();
            let mut c = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = rng.random_range(-2.0..2.0);
                    c[(i, j)] = v;
                    c[(j, i)] = -v;
                }
            }
            let rot = rotation_field(params.chart(), &c).unwrap();
            let mut k = CWGeneralConstants::zero(n);
            k.b = 0.5;
            k.d1 = vec![0.7; n];
            for lambda in [-1.0, 0.0, 1.0] {
                for cand in [
                    epsilon_particular_soliton(n, eps, lambda).unwrap(),
                    epsilon_general_soliton(n, eps, lambda, &k).unwrap(),
                ] {
                    let sum = cand.as_vector().unwrap().plus(&rot).unwrap();
                    let sum = SolitonCandidate::vector(sum, lambda).unwrap();
                    with_killing = with_killing.max(residual_max(&m, &sum, 920 + n as u64));
                }
            }
        }
    }
    t.at_most("residual with rotation added", with_killing, 2e-8);
}

// 10 --------------------------------------------------------------------------
fn hamilton_identity(t: &mut Tally) {
    let mut steady: Vec<(MetricSpec, SolitonCandidate)> = Vec::new();
    for (text, _) in PROFILES {
        for n in NS {
            let p = egorov(n, text);
            steady.push((egorov_metric(&p).unwrap(), egorov_gradient_potential(&p, 0.0).unwrap()));
        }
    }
    for kappa in KAPPAS {
        let params = CWParams::new(kappa.to_vec()).unwrap();
        steady.push((
            cw_metric(&params).unwrap(),
            cw_gradient_potential(&params, 7.0, -2.0, 0.0).unwrap(),
        ));
    }
    for eps in [1.0, -1.0] {
        steady.push((
            epsilon_metric(3, eps).unwrap(),
            epsilon_gradient_potential(3, eps, 0.5, 1.0, 0.0).unwrap(),
        ));
    }
    let spread_of = |m: &MetricSpec, c: &SolitonCandidate, seed: u64| {
        let values: Vec<f64> = sample(seed, m.dim())
            .iter()
            .map(|p| hamilton_value_at(m, c, p).unwrap())
            .collect();
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        (hi - lo, hi.abs().max(lo.abs()))
    };
    let (mut spread, mut value) = (0.0f64, 0.0f64);
    for (s, (m, c)) in steady.iter().enumerate() {
        let (sp, v) = spread_of(m, c, 1000 + s as u64);
        spread = spread.max(sp);
        value = value.max(v);
    }
    // a non-steady gradient soliton: the Gaussian on flat space
    let p = egorov(2, "1");
    let m = egorov_metric(&p).unwrap();
    let h = ScalarFieldSpec::new(
        p.chart().clone(),
        parse("(2/4)*(2*u*v + x1^2 + x2^2)", p.chart(), &[] as &[&str]).unwrap(),
        Bindings::new(),
    )
    .unwrap();
    let gaussian = SolitonCandidate::gradient(h, 2.0).unwrap();
    let (sp, _) = spread_of(&m, &gaussian, 1100);
    spread = spread.max(sp);
    t.at_most("spread", spread, 1e-8);
    t.at_most("|value| (steady)", value, 1e-8);
}

// 11 --------------------------------------------------------------------------
fn cli_contract(t: &mut Tally) {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let run = |name: &str| {
        Command::new(env!("CARGO_BIN_EXE_ricci-soliton"))
            .args(["verify", fixtures.join(name).to_str().unwrap(), "--format", "json"])
            .output()
            .unwrap()
    };
    for (name, code) in [
        ("cw_pass.scenario", 0),
        ("egorov_mismatched_lambda.scenario", 1),
        ("malformed.scenario", 2),
    ] {
        let a = run(name);
        let b = run(name);
        t.require(&format!("{name} exit {code}"), a.status.code() == Some(code));
        if code < 2 {
            t.require(&format!("{name} json stable"), a.stdout == b.stdout && !a.stdout.is_empty());
        }
    }
}

fn main() {
    let criteria: [(&str, fn(&mut Tally)); 11] = [
        ("Egorov connection, curvature and Ricci", egorov_formulas),
        ("Egorov particular solitons", egorov_particular),
        ("Egorov general solution", egorov_general),
        ("Egorov steady gradient potential", egorov_gradient),
        ("Cahen-Wallach curvature", cw_reproduction),
        ("Cahen-Wallach solitons", cw_solitons),
        ("conformal flatness", conformal_flatness),
        ("finite-difference and Bianchi cross-checks", oracle_cross_checks),
        ("homothety algebra", homothety_algebra),
        ("Hamilton identity", hamilton_identity),
        ("CLI contract", cli_contract),
    ];
    let started = Instant::now();
    let mut failures = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let mut tally = Tally::default();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut tally)));
        let pass = outcome.is_ok() && tally.pass();
        if !pass {
            failures += 1;
        }
        let detail = match outcome {
            Ok(()) => tally.summary(),
            Err(e) => e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()),
        };
        println!(
            "criterion {:>2} {} {name} ({:.1}s): {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of 11 criteria passed in {:.1}s",
        11 - failures,
        started.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
