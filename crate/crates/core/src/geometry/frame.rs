use nalgebra::DMatrix;

use super::{GeometryError, MetricSpec, Result, DET_THRESHOLD};
use crate::expr::{Expression, Point};

/// Everything numeric about a metric at one point.
///
/// Higher-rank arrays are stored flat in row-major order; use the accessors.
/// Trailing indices of partial-derivative arrays are derivative directions.
#[derive(Debug, Clone)]
pub struct PointFrame {
    dim: usize,
    point: Point,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub det: f64,
    dg: Vec<f64>,
    d2g: Vec<f64>,
    d3g: Option<Vec<f64>>,
    dg_inv: Vec<f64>,
    christoffel: Vec<f64>,
    d_christoffel: Vec<f64>,
    d2_christoffel: Option<Vec<f64>>,
    riemann: Vec<f64>,
    riemann_lowered: Vec<f64>,
    d_riemann: Option<Vec<f64>>,
    pub ricci: DMatrix<f64>,
    /// `g⁻¹·Ric`, the (1,1) Ricci operator.
    pub ricci_operator: DMatrix<f64>,
    pub scalar_curvature: f64,
}

#[inline]
fn i3(d: usize, a: usize, b: usize, c: usize) -> usize {
    (a * d + b) * d + c
}

#[inline]
fn i4(d: usize, a: usize, b: usize, c: usize, e: usize) -> usize {
    ((a * d + b) * d + c) * d + e
}

#[inline]
fn i5(d: usize, a: usize, b: usize, c: usize, e: usize, f: usize) -> usize {
    (((a * d + b) * d + c) * d + e) * d + f
}

/// Evaluates an array of symmetric metric partials `[i][j][dirs…]`, only at
/// `i ≤ j` and non-decreasing directions, mirroring the rest.
fn eval_partials(
    exprs: &[Expression],
    metric: &MetricSpec,
    p: &Point,
    order: u32,
) -> Result<Vec<f64>> {
    let d = metric.dim();
    let block = d.pow(order);
    let mut out = vec![0.0; exprs.len()];
    let mut done = vec![false; exprs.len()];
    for i in 0..d {
        for j in i..d {
            for rest in 0..block {
                let idx = (i * d + j) * block + rest;
                if done[idx] {
                    continue;
                }
                let v = exprs[idx].evaluate(p, metric.params())?;
                // mirror over (i,j) and all orderings of the directions
                let mut dirs = Vec::with_capacity(order as usize);
                let mut code = rest;
                for _ in 0..order {
                    dirs.push(code % d);
                    code /= d;
                }
                dirs.reverse();
                for perm in permutations(&dirs) {
                    let r = perm.iter().fold(0, |acc, &a| acc * d + a);
                    for (a, b) in [(i, j), (j, i)] {
                        let k = (a * d + b) * block + r;
                        out[k] = v;
                        done[k] = true;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Builds the [`PointFrame`] of `metric` at `p`. `derivative_order` 3 also
/// computes third metric partials and the first partials of the curvature
/// (needed for second Bianchi and contracted Bianchi checks); any other value
/// is treated as 2.
pub fn frame_at(metric: &MetricSpec, p: &Point, derivative_order: u32) -> Result<PointFrame> {
    metric.check_point(p)?;
    let d = metric.dim();
    let g = metric.metric_at(p)?;
    let lu = g.clone().lu();
    let det = lu.determinant();
    if !(det.abs() > DET_THRESHOLD) {
        return Err(GeometryError::Singular { det });
    }
    let g_inv = lu.try_inverse().ok_or(GeometryError::Singular { det })?;

    let dg = eval_partials(metric.first_partials(), metric, p, 1)?;
    let d2g = eval_partials(metric.second_partials(), metric, p, 2)?;
    let third = derivative_order >= 3;
    let d3g = if third {
        Some(eval_partials(metric.third_partials(), metric, p, 3)?)
    } else {
        None
    };

    // ∂_a g⁻¹ = −g⁻¹ (∂_a g) g⁻¹
    let dg_slice = |a: usize| DMatrix::from_fn(d, d, |i, j| dg[i3(d, i, j, a)]);
    let dg_inv_mats: Vec<DMatrix<f64>> = (0..d).map(|a| -(&g_inv * dg_slice(a) * &g_inv)).collect();
    let mut dg_inv = vec![0.0; d * d * d];
    for k in 0..d {
        for l in 0..d {
            for a in 0..d {
                dg_inv[i3(d, k, l, a)] = dg_inv_mats[a][(k, l)];
            }
        }
    }

    // Christoffel symbols of the first kind and their partials.
    let first_kind = |l: usize, i: usize, j: usize| {
        0.5 * (dg[i3(d, l, j, i)] + dg[i3(d, i, l, j)] - dg[i3(d, i, j, l)])
    };
    let d_first_kind = |l: usize, i: usize, j: usize, a: usize| {
        0.5 * (d2g[i4(d, l, j, i, a)] + d2g[i4(d, i, l, j, a)] - d2g[i4(d, i, j, l, a)])
    };

    let mut gamma1 = vec![0.0; d * d * d];
    let mut dgamma1 = vec![0.0; d * d * d * d];
    for l in 0..d {
        for i in 0..d {
            for j in 0..d {
                gamma1[i3(d, l, i, j)] = first_kind(l, i, j);
                for a in 0..d {
                    dgamma1[i4(d, l, i, j, a)] = d_first_kind(l, i, j, a);
                }
            }
        }
    }

    let mut christoffel = vec![0.0; d * d * d];
    let mut d_christoffel = vec![0.0; d * d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut s = 0.0;
                for l in 0..d {
                    s += g_inv[(k, l)] * gamma1[i3(d, l, i, j)];
                }
                christoffel[i3(d, k, i, j)] = s;
                christoffel[i3(d, k, j, i)] = s;
                for a in 0..d {
                    let mut s = 0.0;
                    for l in 0..d {
                        s += dg_inv[i3(d, k, l, a)] * gamma1[i3(d, l, i, j)]
                            + g_inv[(k, l)] * dgamma1[i4(d, l, i, j, a)];
                    }
                    d_christoffel[i4(d, k, i, j, a)] = s;
                    d_christoffel[i4(d, k, j, i, a)] = s;
                }
            }
        }
    }

    let d2_christoffel = d3g.as_ref().map(|d3g| {
        let d2g_slice = |a: usize, b: usize| DMatrix::from_fn(d, d, |i, j| d2g[i4(d, i, j, a, b)]);
        // ∂_a∂_b g⁻¹ = −(∂_b g⁻¹ ∂_a g g⁻¹ + g⁻¹ ∂_a∂_b g g⁻¹ + g⁻¹ ∂_a g ∂_b g⁻¹)
        let mut d2g_inv = vec![0.0; d.pow(4)];
        for a in 0..d {
            let dga = dg_slice(a);
            for b in 0..d {
                let m = -(&dg_inv_mats[b] * &dga * &g_inv
                    + &g_inv * d2g_slice(a, b) * &g_inv
                    + &g_inv * &dga * &dg_inv_mats[b]);
                for k in 0..d {
                    for l in 0..d {
                        d2g_inv[i4(d, k, l, a, b)] = m[(k, l)];
                    }
                }
            }
        }
        let dd_first_kind = |l: usize, i: usize, j: usize, a: usize, b: usize| {
            0.5 * (d3g[i5(d, l, j, i, a, b)] + d3g[i5(d, i, l, j, a, b)]
                - d3g[i5(d, i, j, l, a, b)])
        };
        let mut out = vec![0.0; d.pow(5)];
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for a in 0..d {
                        for b in 0..d {
                            let mut s = 0.0;
                            for l in 0..d {
                                s += d2g_inv[i4(d, k, l, a, b)] * gamma1[i3(d, l, i, j)]
                                    + dg_inv[i3(d, k, l, a)] * dgamma1[i4(d, l, i, j, b)]
                                    + dg_inv[i3(d, k, l, b)] * dgamma1[i4(d, l, i, j, a)]
                                    + g_inv[(k, l)] * dd_first_kind(l, i, j, a, b);
                            }
                            out[i5(d, k, i, j, a, b)] = s;
                        }
                    }
                }
            }
        }
        out
    });

    let gam = |k: usize, i: usize, j: usize| christoffel[i3(d, k, i, j)];
    let dgam = |k: usize, i: usize, j: usize, a: usize| d_christoffel[i4(d, k, i, j, a)];

    // R^l_{ijk} = −(∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik})
    let mut riemann = vec![0.0; d.pow(4)];
    for l in 0..d {
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let mut s = dgam(l, j, k, i) - dgam(l, i, k, j);
                    for m in 0..d {
                        s += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
                    }
                    riemann[i4(d, l, i, j, k)] = -s;
                    riemann[i4(d, l, j, i, k)] = s;
                }
            }
        }
    }

    let mut riemann_lowered = vec![0.0; d.pow(4)];
    for l in 0..d {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += g[(l, m)] * riemann[i4(d, m, i, j, k)];
                    }
                    riemann_lowered[i4(d, l, i, j, k)] = s;
                }
            }
        }
    }

    let ricci = DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| riemann[i4(d, k, i, k, j)]).sum());
    let ricci_operator = &g_inv * &ricci;
    let scalar_curvature = ricci_operator.trace();

    let d_riemann = d2_christoffel.as_ref().map(|d2gam| {
        let ddgam = |k: usize, i: usize, j: usize, a: usize, b: usize| d2gam[i5(d, k, i, j, a, b)];
        let mut out = vec![0.0; d.pow(5)];
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for a in 0..d {
                            let mut s = ddgam(l, j, k, i, a) - ddgam(l, i, k, j, a);
                            for m in 0..d {
                                s += dgam(l, i, m, a) * gam(m, j, k)
                                    + gam(l, i, m) * dgam(m, j, k, a)
                                    - dgam(l, j, m, a) * gam(m, i, k)
                                    - gam(l, j, m) * dgam(m, i, k, a);
                            }
                            out[i5(d, l, i, j, k, a)] = -s;
                        }
                    }
                }
            }
        }
        out
    });

    Ok(PointFrame {
        dim: d,
        point: p.clone(),
        g,
        g_inv,
        det,
        dg,
        d2g,
        d3g,
        dg_inv,
        christoffel,
        d_christoffel,
        d2_christoffel,
        riemann,
        riemann_lowered,
        d_riemann,
        ricci,
        ricci_operator,
        scalar_curvature,
    })
}

impl PointFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn has_third_order(&self) -> bool {
        self.d_riemann.is_some()
    }

    /// `∂_a g_{ij}`
    pub fn dg(&self, i: usize, j: usize, a: usize) -> f64 {
        self.dg[i3(self.dim, i, j, a)]
    }

    /// `∂_a ∂_b g_{ij}`
    pub fn d2g(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        self.d2g[i4(self.dim, i, j, a, b)]
    }

    /// `∂_a ∂_b ∂_c g_{ij}`, when computed.
    pub fn d3g(&self, i: usize, j: usize, a: usize, b: usize, c: usize) -> Option<f64> {
        self.d3g.as_ref().map(|v| v[i5(self.dim, i, j, a, b, c)])
    }

    /// `∂_a g^{kl}`
    pub fn dg_inv(&self, k: usize, l: usize, a: usize) -> f64 {
        self.dg_inv[i3(self.dim, k, l, a)]
    }

    /// `Γ^k_{ij}`
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> f64 {
        self.christoffel[i3(self.dim, k, i, j)]
    }

    /// `∂_a Γ^k_{ij}`
    pub fn d_christoffel(&self, k: usize, i: usize, j: usize, a: usize) -> f64 {
        self.d_christoffel[i4(self.dim, k, i, j, a)]
    }

    /// `∂_a ∂_b Γ^k_{ij}`, when computed.
    pub fn d2_christoffel(&self, k: usize, i: usize, j: usize, a: usize, b: usize) -> Option<f64> {
        self.d2_christoffel
            .as_ref()
            .map(|v| v[i5(self.dim, k, i, j, a, b)])
    }

    /// `R^l_{ijk}`: component `l` of `R(∂_i, ∂_j)∂_k`.
    pub fn riemann(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.riemann[i4(self.dim, l, i, j, k)]
    }

    /// `R_{lijk} = g_{lm} R^m_{ijk}`.
    pub fn riemann_lowered(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.riemann_lowered[i4(self.dim, l, i, j, k)]
    }

    /// `g(R(∂_x, ∂_y)∂_z, ∂_w)`.
    pub fn riemann_form(&self, x: usize, y: usize, z: usize, w: usize) -> f64 {
        self.riemann_lowered(w, x, y, z)
    }

    /// `∂_m R^l_{ijk}`, when computed.
    pub fn d_riemann(&self, l: usize, i: usize, j: usize, k: usize, m: usize) -> Option<f64> {
        self.d_riemann
            .as_ref()
            .map(|v| v[i5(self.dim, l, i, j, k, m)])
    }

    /// `∇_m R^l_{ijk}`.
    pub fn covariant_riemann(&self, l: usize, i: usize, j: usize, k: usize, m: usize) -> Result<f64> {
        let d = self.dim;
        let mut s = self
            .d_riemann(l, i, j, k, m)
            .ok_or(GeometryError::MissingThirdOrder)?;
        for p in 0..d {
            s += self.christoffel(l, m, p) * self.riemann(p, i, j, k)
                - self.christoffel(p, m, i) * self.riemann(l, p, j, k)
                - self.christoffel(p, m, j) * self.riemann(l, i, p, k)
                - self.christoffel(p, m, k) * self.riemann(l, i, j, p);
        }
        Ok(s)
    }

    /// `∂_m Ric_{ij}`.
    pub fn d_ricci(&self, i: usize, j: usize, m: usize) -> Result<f64> {
        (0..self.dim)
            .map(|k| self.d_riemann(k, i, k, j, m).ok_or(GeometryError::MissingThirdOrder))
            .sum()
    }

    /// `∇_m Ric_{ij}`.
    pub fn covariant_ricci(&self, i: usize, j: usize, m: usize) -> Result<f64> {
        let mut s = self.d_ricci(i, j, m)?;
        for p in 0..self.dim {
            s -= self.christoffel(p, m, i) * self.ricci[(p, j)]
                + self.christoffel(p, m, j) * self.ricci[(i, p)];
        }
        Ok(s)
    }

    /// `∂_m Sc`.
    pub fn d_scalar_curvature(&self, m: usize) -> Result<f64> {
        let d = self.dim;
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += self.dg_inv(i, j, m) * self.ricci[(i, j)] + self.g_inv[(i, j)] * self.d_ricci(i, j, m)?;
            }
        }
        Ok(s)
    }
}
