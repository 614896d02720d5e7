//! Deterministic quadrature for scalar and Hermitian-matrix-valued integrands.
//!
//! Two schemes: composite Simpson and composite Gauss-Legendre. Integrands
//! with known kink points (tent- and vee-shaped weights) are integrated with
//! panel boundaries snapped to the kinks so every panel sees a smooth
//! function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::WeightFunction;
use crate::linalg::{HermitianMatrix, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    CompositeSimpson,
    GaussLegendreComposite,
}

/// A concrete discretization of an integral over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub scheme: Scheme,
    pub panels: usize,
    /// Gauss only; ignored by Simpson.
    pub nodes_per_panel: usize,
}

impl Default for QuadratureRule {
    /// 32 panels x 5 Gauss nodes: high accuracy per matrix-integrand
    /// eigendecomposition.
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussLegendreComposite,
            panels: 32,
            nodes_per_panel: 5,
        }
    }
}

impl QuadratureRule {
    pub fn simpson(panels: usize) -> Self {
        Self {
            scheme: Scheme::CompositeSimpson,
            panels,
            nodes_per_panel: 0,
        }
    }

    pub fn gauss(panels: usize, nodes_per_panel: usize) -> Self {
        Self {
            scheme: Scheme::GaussLegendreComposite,
            panels,
            nodes_per_panel,
        }
    }

    pub fn doubled(&self) -> Self {
        Self {
            panels: self.panels * 2,
            ..*self
        }
    }

    /// Nodes and weights over `[interval.lo, interval.hi]`.
    pub fn nodes(&self, interval: &Interval) -> Vec<(f64, f64)> {
        assert!(self.panels >= 1);
        let (a, len) = (interval.lo, interval.length());
        let mut out = Vec::new();
        match self.scheme {
            Scheme::CompositeSimpson => {
                // 2*panels + 1 nodes, weights h/3 * [1,4,2,...,2,4,1].
                let m = 2 * self.panels;
                let h = len / m as f64;
                for i in 0..=m {
                    let w = if i == 0 || i == m {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    out.push((a + i as f64 * h, w * h / 3.0));
                }
            }
            Scheme::GaussLegendreComposite => {
                let k = self.nodes_per_panel.max(1);
                let base = gauss_legendre_nodes(k);
                let h = len / self.panels as f64;
                for p in 0..self.panels {
                    let lo = a + p as f64 * h;
                    for &(x, w) in &base {
                        out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
                    }
                }
            }
        }
        out
    }

    /// Nodes with panel boundaries snapped to the interior `breakpoints`.
    ///
    /// Panels are distributed over the pieces proportionally to length, at
    /// least one per piece.
    pub fn nodes_with_breakpoints(
        &self,
        interval: &Interval,
        breakpoints: &[f64],
    ) -> Vec<(f64, f64)> {
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&b| b > interval.lo + 1e-15 && b < interval.hi - 1e-15)
            .collect();
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup();
        if cuts.is_empty() {
            return self.nodes(interval);
        }
        let mut edges = vec![interval.lo];
        edges.extend(cuts);
        edges.push(interval.hi);
        let total = interval.length();
        let mut out = Vec::new();
        for piece in edges.windows(2) {
            let sub = Interval {
                lo: piece[0],
                hi: piece[1],
            };
            let share = ((sub.length() / total) * self.panels as f64).ceil() as usize;
            let rule = QuadratureRule {
                panels: share.max(1),
                ..*self
            };
            out.extend(rule.nodes(&sub));
        }
        out
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` via Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_nodes(k: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(k);
    let n = k;
    for i in 0..n {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn integrate_scalar<G: Fn(f64) -> f64>(
    g: G,
    interval: &Interval,
    rule: &QuadratureRule,
) -> Result<f64> {
    integrate_scalar_pieces(g, interval, rule, &[])
}

pub fn integrate_scalar_pieces<G: Fn(f64) -> f64>(
    g: G,
    interval: &Interval,
    rule: &QuadratureRule,
    breakpoints: &[f64],
) -> Result<f64> {
    let mut acc = 0.0;
    for (x, w) in rule.nodes_with_breakpoints(interval, breakpoints) {
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { at: x });
        }
        acc += w * v;
    }
    Ok(acc)
}

pub fn integrate_matrix<G: Fn(f64) -> Result<HermitianMatrix>>(
    g: G,
    interval: &Interval,
    rule: &QuadratureRule,
) -> Result<HermitianMatrix> {
    integrate_matrix_pieces(g, interval, rule, &[])
}

pub fn integrate_matrix_pieces<G: Fn(f64) -> Result<HermitianMatrix>>(
    g: G,
    interval: &Interval,
    rule: &QuadratureRule,
    breakpoints: &[f64],
) -> Result<HermitianMatrix> {
    let nodes = rule.nodes_with_breakpoints(interval, breakpoints);
    let mut acc: Option<(usize, Vec<num_complex::Complex64>)> = None;
    for (x, w) in nodes {
        let m = g(x)?;
        if !m.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteSample { at: x });
        }
        match &mut acc {
            None => {
                acc = Some((m.dim(), m.entries().iter().map(|z| z * w).collect()));
            }
            Some((n, data)) => {
                if m.dim() != *n {
                    return Err(Error::DimensionMismatch {
                        left: *n,
                        right: m.dim(),
                    });
                }
                for (d, z) in data.iter_mut().zip(m.entries()) {
                    *d += z * w;
                }
            }
        }
    }
    let (n, data) = acc.expect("rule always yields at least one node");
    HermitianMatrix::hermitize(n, &data)
}

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

/// `integral of p over [0,1]`.
pub fn weight_total(p: &WeightFunction, rule: &QuadratureRule) -> Result<f64> {
    integrate_scalar_pieces(|t| p.eval(t), &UNIT, rule, p.kinks())
}

/// Scale `p` so it integrates to one.
pub fn normalize_weight(p: &WeightFunction, rule: &QuadratureRule) -> Result<WeightFunction> {
    let total = weight_total(p, rule)?;
    if total <= 1e-12 {
        return Err(Error::DegenerateWeight { total });
    }
    if (total - 1.0).abs() < 1e-14 {
        return Ok(p.scaled(1.0, true));
    }
    Ok(p.scaled(1.0 / total, true))
}

/// `integral of t p(t) over [0,1]`.
pub fn weight_first_moment(p: &WeightFunction, rule: &QuadratureRule) -> Result<f64> {
    integrate_scalar_pieces(|t| t * p.eval(t), &UNIT, rule, p.kinks())
}
