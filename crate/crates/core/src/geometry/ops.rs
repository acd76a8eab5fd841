use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::fields::{ScalarFieldSpec, ScalarJet, VectorFieldSpec, VectorJet};
use super::frame::{frame_at, PointFrame};
use super::{GeometryError, MetricSpec, Result};
use crate::expr::Point;

fn check_field_chart(metric: &MetricSpec, chart: &crate::expr::Chart) -> Result<()> {
    if metric.chart() != chart {
        return Err(GeometryError::ChartMismatch);
    }
    Ok(())
}

/// `(𝓛_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k`.
pub fn lie_derivative_metric(frame: &PointFrame, x: &VectorJet) -> DMatrix<f64> {
    let d = frame.dim();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for k in 0..d {
                s += x.values[k] * frame.dg(i, j, k)
                    + frame.g[(k, j)] * x.partials[(k, i)]
                    + frame.g[(i, k)] * x.partials[(k, j)];
            }
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

pub fn lie_derivative_metric_at(
    metric: &MetricSpec,
    x: &VectorFieldSpec,
    p: &Point,
) -> Result<DMatrix<f64>> {
    check_field_chart(metric, x.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(lie_derivative_metric(&frame, &x.jet_at(p)?))
}

/// `(grad h)^i = g^{ij} ∂_j h`.
pub fn gradient(frame: &PointFrame, h: &ScalarJet) -> DVector<f64> {
    &frame.g_inv * &h.first
}

pub fn gradient_at(metric: &MetricSpec, h: &ScalarFieldSpec, p: &Point) -> Result<DVector<f64>> {
    check_field_chart(metric, h.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(gradient(&frame, &h.jet_at(p)?))
}

/// `grad h` together with its partials `∂_a (g^{ij} ∂_j h)`.
pub fn gradient_jet(frame: &PointFrame, h: &ScalarJet) -> VectorJet {
    let d = frame.dim();
    let values = gradient(frame, h);
    let partials = DMatrix::from_fn(d, d, |i, a| {
        (0..d)
            .map(|j| frame.dg_inv(i, j, a) * h.first[j] + frame.g_inv[(i, j)] * h.second[(a, j)])
            .sum()
    });
    VectorJet { values, partials }
}

/// `(Hes h)_{ij} = ∂_i ∂_j h − Γ^k_{ij} ∂_k h`.
pub fn hessian(frame: &PointFrame, h: &ScalarJet) -> DMatrix<f64> {
    let d = frame.dim();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = h.second[(i, j)];
            for k in 0..d {
                s -= frame.christoffel(k, i, j) * h.first[k];
            }
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

pub fn hessian_at(metric: &MetricSpec, h: &ScalarFieldSpec, p: &Point) -> Result<DMatrix<f64>> {
    check_field_chart(metric, h.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(hessian(&frame, &h.jet_at(p)?))
}

/// `div X = ∂_i X^i + Γ^i_{ik} X^k`.
pub fn divergence(frame: &PointFrame, x: &VectorJet) -> f64 {
    let d = frame.dim();
    let mut s = x.partials.trace();
    for i in 0..d {
        for k in 0..d {
            s += frame.christoffel(i, i, k) * x.values[k];
        }
    }
    s
}

pub fn divergence_at(metric: &MetricSpec, x: &VectorFieldSpec, p: &Point) -> Result<f64> {
    check_field_chart(metric, x.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(divergence(&frame, &x.jet_at(p)?))
}

/// `(i, k) ↦ ∇_i X^k = ∂_i X^k + Γ^k_{im} X^m`; row `i` is `∇_{∂_i} X`.
pub fn covariant_derivative(frame: &PointFrame, x: &VectorJet) -> DMatrix<f64> {
    let d = frame.dim();
    DMatrix::from_fn(d, d, |i, k| {
        x.partials[(k, i)]
            + (0..d)
                .map(|m| frame.christoffel(k, i, m) * x.values[m])
                .sum::<f64>()
    })
}

pub fn covariant_derivative_at(
    metric: &MetricSpec,
    x: &VectorFieldSpec,
    p: &Point,
) -> Result<DMatrix<f64>> {
    check_field_chart(metric, x.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(covariant_derivative(&frame, &x.jet_at(p)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Timelike,
    Null,
    Spacelike,
    Zero,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Zero => "zero",
        })
    }
}

/// Sign of `g(X, X)`, with a magnitude-scaled null band.
pub fn causal_character(frame: &PointFrame, x: &DVector<f64>) -> CausalCharacter {
    let sup = x.amax();
    if sup <= 1e-12 {
        return CausalCharacter::Zero;
    }
    let s = (x.transpose() * &frame.g * x)[(0, 0)];
    if s.abs() <= 1e-10 * (1.0 + sup * sup) {
        CausalCharacter::Null
    } else if s < 0.0 {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Spacelike
    }
}

pub fn causal_character_at(
    metric: &MetricSpec,
    x: &VectorFieldSpec,
    p: &Point,
) -> Result<CausalCharacter> {
    check_field_chart(metric, x.chart())?;
    let frame = frame_at(metric, p, 2)?;
    Ok(causal_character(&frame, &x.jet_at(p)?.values))
}

/// Lowered Weyl tensor, `W[a][b][c][e] = W(∂_a, ∂_b, ∂_c, ∂_e)`, with the same sign
/// convention as [`PointFrame::riemann_form`]:
/// `W = Rm + S ⊘ g` where `S = (Ric − Sc·g/(2(d−1)))/(d−2)` is the Schouten tensor and
/// `(S ⊘ g)_{abce} = S_{ae} g_{bc} + S_{bc} g_{ae} − S_{ac} g_{be} − S_{be} g_{ac}`.
/// With the curvature sign used here `riemann_form(a,b,c,e)` coincides entrywise
/// with the textbook `R_abce`, and `W` is the textbook Weyl tensor
/// (`S ⊘ g` is minus the Kulkarni–Nomizu product `S ⊙ g`).
/// Identically zero in dimension 3.
pub fn weyl(frame: &PointFrame) -> Result<Vec<f64>> {
    let d = frame.dim();
    if d < 3 {
        return Err(GeometryError::DimensionTooSmall(d));
    }
    let mut out = vec![0.0; d.pow(4)];
    if d == 3 {
        return Ok(out);
    }
    let dd = d as f64;
    let schouten = (&frame.ricci - &frame.g * (frame.scalar_curvature / (2.0 * (dd - 1.0))))
        / (dd - 2.0);
    let g = &frame.g;
    let s = &schouten;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let kn = s[(a, e)] * g[(b, c)] + s[(b, c)] * g[(a, e)]
                        - s[(a, c)] * g[(b, e)]
                        - s[(b, e)] * g[(a, c)];
                    out[((a * d + b) * d + c) * d + e] = frame.riemann_form(a, b, c, e) + kn;
                }
            }
        }
    }
    Ok(out)
}

pub fn weyl_at(metric: &MetricSpec, p: &Point) -> Result<Vec<f64>> {
    if metric.dim() < 3 {
        return Err(GeometryError::DimensionTooSmall(metric.dim()));
    }
    weyl(&frame_at(metric, p, 2)?)
}

/// Counts of negative, zero and positive eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0
    }
}

pub fn signature(g: &DMatrix<f64>) -> Signature {
    let eig = g.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut sig = Signature {
        negative: 0,
        zero: 0,
        positive: 0,
    };
    for &l in eig.eigenvalues.iter() {
        if l.abs() <= 1e-12 * scale {
            sig.zero += 1;
        } else if l < 0.0 {
            sig.negative += 1;
        } else {
            sig.positive += 1;
        }
    }
    sig
}

pub fn signature_at(metric: &MetricSpec, p: &Point) -> Result<Signature> {
    Ok(signature(&metric.metric_at(p)?))
}

/// Largest violations of the algebraic and differential curvature identities.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BianchiDefects {
    /// `R_{lijk} + R_{ljik}`
    pub antisymmetry_first_pair: f64,
    /// `R_{lijk} + R_{kijl}`
    pub antisymmetry_last_pair: f64,
    /// `g(R(x,y)z,w) − g(R(z,w)x,y)`
    pub pair_symmetry: f64,
    /// `R^l_{ijk} + R^l_{jki} + R^l_{kij}`
    pub first_bianchi: f64,
    /// `∇_m R^l_{ijk} + ∇_i R^l_{jmk} + ∇_j R^l_{mik}`, when third order is available.
    pub second_bianchi: Option<f64>,
    /// `∂_i Sc − 2 g^{jk} ∇_j Ric_{ki}`, when third order is available.
    pub contracted_bianchi: Option<f64>,
    /// `Ric_{ij} − Ric_{ji}`
    pub ricci_asymmetry: f64,
}

impl BianchiDefects {
    pub fn max(&self) -> f64 {
        [
            self.antisymmetry_first_pair,
            self.antisymmetry_last_pair,
            self.pair_symmetry,
            self.first_bianchi,
            self.second_bianchi.unwrap_or(0.0),
            self.contracted_bianchi.unwrap_or(0.0),
            self.ricci_asymmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn bianchi_defects(frame: &PointFrame) -> Result<BianchiDefects> {
    let d = frame.dim();
    let mut out = BianchiDefects::default();
    let upd = |slot: &mut f64, v: f64| *slot = slot.max(v.abs());
    for l in 0..d {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let r = frame.riemann_lowered(l, i, j, k);
                    upd(&mut out.antisymmetry_first_pair, r + frame.riemann_lowered(l, j, i, k));
                    upd(&mut out.antisymmetry_last_pair, r + frame.riemann_lowered(k, i, j, l));
                    upd(
                        &mut out.pair_symmetry,
                        frame.riemann_form(i, j, k, l) - frame.riemann_form(k, l, i, j),
                    );
                    upd(
                        &mut out.first_bianchi,
                        frame.riemann(l, i, j, k) + frame.riemann(l, j, k, i) + frame.riemann(l, k, i, j),
                    );
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            upd(&mut out.ricci_asymmetry, frame.ricci[(i, j)] - frame.ricci[(j, i)]);
        }
    }
    if frame.has_third_order() {
        let mut second = 0.0f64;
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for m in 0..d {
                            let v = frame.covariant_riemann(l, i, j, k, m)?
                                + frame.covariant_riemann(l, j, m, k, i)?
                                + frame.covariant_riemann(l, m, i, k, j)?;
                            second = second.max(v.abs());
                        }
                    }
                }
            }
        }
        out.second_bianchi = Some(second);
        let mut contracted = 0.0f64;
        for i in 0..d {
            let mut div = 0.0;
            for j in 0..d {
                for k in 0..d {
                    div += frame.g_inv[(j, k)] * frame.covariant_ricci(k, i, j)?;
                }
            }
            contracted = contracted.max((frame.d_scalar_curvature(i)? - 2.0 * div).abs());
        }
        out.contracted_bianchi = Some(contracted);
    }
    Ok(out)
}
