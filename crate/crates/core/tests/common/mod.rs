//! Independent numeric oracles: everything here works from metric and field
//! *values* only, using fourth-order central differences, so it shares no code
//! with the symbolic derivative pipeline.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ricci_soliton::expr::{Bindings, Expression, Point};
use ricci_soliton::geometry::{MetricSpec, VectorFieldSpec};

/// Step for the fourth-order stencils.
pub const H: f64 = 1e-3;

pub fn point(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).unwrap()
}

/// `count` uniform points in `bounds` (one interval per coordinate).
pub fn random_points(seed: u64, count: usize, bounds: &[(f64, f64)]) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| point(&bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect::<Vec<_>>()))
        .collect()
}

pub fn unit_box(dim: usize) -> Vec<(f64, f64)> {
    vec![(-1.0, 1.0); dim]
}

fn shifted(p: &[f64], a: usize, t: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[a] += t;
    q
}

/// Fourth-order central difference of `f` along coordinate `a`.
pub fn fd4<T, F>(f: F, p: &[f64], a: usize, h: f64) -> T
where
    F: Fn(&[f64]) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let f1 = f(&shifted(p, a, h));
    let f2 = f(&shifted(p, a, 2.0 * h));
    let m1 = f(&shifted(p, a, -h));
    let m2 = f(&shifted(p, a, -2.0 * h));
    ((f1 - m1) * 8.0 + (m2 - f2)) * (1.0 / (12.0 * h))
}

/// Plain second-order central difference with step `h`.
pub fn fd2(f: impl Fn(&[f64]) -> f64, p: &[f64], a: usize, h: f64) -> f64 {
    (f(&shifted(p, a, h)) - f(&shifted(p, a, -h))) / (2.0 * h)
}

pub fn eval(e: &Expression, p: &[f64], params: &Bindings) -> f64 {
    e.eval_coords(p, params).unwrap()
}

pub fn metric_values(m: &MetricSpec, p: &[f64]) -> DMatrix<f64> {
    m.metric_at(&point(p)).unwrap()
}

/// `(k, i, j) ↦ Γ^k_ij` at `p` from differenced metric values.
pub fn christoffel(m: &MetricSpec, p: &[f64]) -> Vec<f64> {
    let d = m.dim();
    let g_inv = metric_values(m, p).try_inverse().unwrap();
    let dg: Vec<DMatrix<f64>> = (0..d).map(|a| fd4(|q| metric_values(m, q), p, a, H)).collect();
    let mut out = vec![0.0; d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for l in 0..d {
                    s += g_inv[(k, l)] * (dg[i][(l, j)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[(k * d + i) * d + j] = 0.5 * s;
            }
        }
    }
    out
}

/// Textbook lowered curvature `R_abcd` (with `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`),
/// flattened `((a d + b) d + c) d + e`.
pub fn riemann_lowered(m: &MetricSpec, p: &[f64]) -> Vec<f64> {
    let d = m.dim();
    let gam = christoffel(m, p);
    let dgam: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let f = |q: &[f64]| DVector::from_vec(christoffel(m, q));
            fd4(f, p, c, H).as_slice().to_vec()
        })
        .collect();
    let g = |k: usize, i: usize, j: usize| gam[(k * d + i) * d + j];
    let dg = |c: usize, k: usize, i: usize, j: usize| dgam[c][(k * d + i) * d + j];
    let mut up = vec![0.0; d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut v = dg(c, a, e, b) - dg(e, a, c, b);
                    for f in 0..d {
                        v += g(a, c, f) * g(f, e, b) - g(a, e, f) * g(f, c, b);
                    }
                    up[((a * d + b) * d + c) * d + e] = v;
                }
            }
        }
    }
    let gm = metric_values(m, p);
    let mut low = vec![0.0; d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    low[((a * d + b) * d + c) * d + e] =
                        (0..d).map(|f| gm[(a, f)] * up[((f * d + b) * d + c) * d + e]).sum();
                }
            }
        }
    }
    low
}

/// Textbook Weyl tensor
/// `C = R − (g_ac R_bd − g_ad R_bc + g_bd R_ac − g_bc R_ad)/(n−2) + Sc (g_ac g_bd − g_ad g_bc)/((n−1)(n−2))`.
pub fn weyl(m: &MetricSpec, p: &[f64]) -> Vec<f64> {
    let d = m.dim();
    let r = riemann_lowered(m, p);
    let gm = metric_values(m, p);
    let gi = gm.clone().try_inverse().unwrap();
    let idx = |a: usize, b: usize, c: usize, e: usize| ((a * d + b) * d + c) * d + e;
    let mut ric = DMatrix::zeros(d, d);
    for b in 0..d {
        for e in 0..d {
            let mut s = 0.0;
            for a in 0..d {
                for c in 0..d {
                    s += gi[(a, c)] * r[idx(a, b, c, e)];
                }
            }
            ric[(b, e)] = s;
        }
    }
    let sc: f64 = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| gi[(a, b)] * ric[(a, b)]).sum();
    let n = d as f64;
    let mut out = vec![0.0; d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let g = |i: usize, j: usize| gm[(i, j)];
                    let q = |i: usize, j: usize| ric[(i, j)];
                    out[idx(a, b, c, e)] = r[idx(a, b, c, e)]
                        - (g(a, c) * q(b, e) - g(a, e) * q(b, c) + g(b, e) * q(a, c) - g(b, c) * q(a, e))
                            / (n - 2.0)
                        + sc * (g(a, c) * g(b, e) - g(a, e) * g(b, c)) / ((n - 1.0) * (n - 2.0));
                }
            }
        }
    }
    out
}

pub fn field_values(x: &VectorFieldSpec, p: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        x.components().len(),
        x.components().iter().map(|c| eval(c, p, x.params())),
    )
}

/// `(𝓛_X g)_ij = X^k ∂_k g_ij + g_kj ∂_i X^k + g_ik ∂_j X^k` from differenced values.
pub fn lie_derivative(m: &MetricSpec, x: &VectorFieldSpec, p: &[f64]) -> DMatrix<f64> {
    let d = m.dim();
    let g = metric_values(m, p);
    let xv = field_values(x, p);
    let dg: Vec<DMatrix<f64>> = (0..d).map(|a| fd4(|q| metric_values(m, q), p, a, H)).collect();
    let dx: Vec<DVector<f64>> = (0..d).map(|a| fd4(|q| field_values(x, q), p, a, H)).collect();
    DMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| xv[k] * dg[k][(i, j)] + g[(k, j)] * dx[i][k] + g[(i, k)] * dx[j][k])
            .sum()
    })
}

/// `div X = ∂_k X^k + X^k ∂_k log sqrt|det g|`.
pub fn divergence(m: &MetricSpec, x: &VectorFieldSpec, p: &[f64]) -> f64 {
    let d = m.dim();
    let xv = field_values(x, p);
    let log_vol = |q: &[f64]| 0.5 * metric_values(m, q).determinant().abs().ln();
    (0..d)
        .map(|k| fd4(|q| field_values(x, q)[k], p, k, H) + xv[k] * fd4(log_vol, p, k, H))
        .sum()
}

/// Relative agreement `|a − b| ≤ tol · max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
