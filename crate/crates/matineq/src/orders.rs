//! The three matrix orders: Loewner, eigenvalue-wise, and weak majorization.
//! Every comparison returns a certified margin, never a bare boolean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Loewner,
    Eigenwise,
    WeakMajorization,
}

/// Absolute/relative tolerance pair for order verdicts.
///
/// Defaults give one decade of headroom over the combined quadrature and
/// Jacobi roundoff (~1e-11 each) while still catching genuine violations,
/// whose margins sit around 1e-2 for the negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_abs: 1e-9,
            tol_rel: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn allowance(&self, scale: f64) -> f64 {
        self.tol_abs + self.tol_rel * scale.max(1.0)
    }
}

/// Outcome of one order comparison with per-index slack detail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub kind: OrderKind,
    pub holds: bool,
    /// Most binding slack; negative means the inequality direction fails there.
    pub margin: f64,
    /// Per-eigenvalue slacks (Loewner, eigenwise) or per-k partial-sum slacks.
    pub detail: Vec<f64>,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl OrderVerdict {
    fn from_detail(kind: OrderKind, detail: Vec<f64>, scale: f64, tols: &Tolerances) -> Self {
        let margin = detail.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            kind,
            holds: margin >= -tols.allowance(scale),
            margin,
            detail,
            tol_abs: tols.tol_abs,
            tol_rel: tols.tol_rel,
        }
    }
}

/// `A <= B` in Loewner order: all eigenvalues of `B - A` nonnegative.
pub fn loewner_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tols: &Tolerances,
) -> Result<OrderVerdict> {
    let diff = b.sub(a)?;
    let dec = eig_hermitian(&diff)?;
    let scale = dec.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    // Ascending by slack: the binding eigenvalue first.
    let mut detail = dec.eigenvalues.clone();
    detail.reverse();
    Ok(OrderVerdict::from_detail(
        OrderKind::Loewner,
        detail,
        scale,
        tols,
    ))
}

/// `lambda_i(A) <= lambda_i(B)` for every i, both spectra sorted descending.
pub fn eigen_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tols: &Tolerances,
) -> Result<OrderVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let la = eig_hermitian(a)?.eigenvalues;
    let lb = eig_hermitian(b)?.eigenvalues;
    let scale = la
        .iter()
        .chain(&lb)
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let detail: Vec<f64> = la.iter().zip(&lb).map(|(&x, &y)| y - x).collect();
    Ok(OrderVerdict::from_detail(
        OrderKind::Eigenwise,
        detail,
        scale,
        tols,
    ))
}

/// Weak majorization `A prec_w B`: top-k eigenvalue partial sums compared.
pub fn weak_majorize(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tols: &Tolerances,
) -> Result<OrderVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let la = eig_hermitian(a)?.eigenvalues;
    let lb = eig_hermitian(b)?.eigenvalues;
    weak_majorize_sorted(&la, &lb, tols)
}

/// Weak majorization of plain real vectors (sorted internally).
pub fn weak_majorize_vectors(u: &[f64], v: &[f64], tols: &Tolerances) -> Result<OrderVerdict> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    weak_majorize_sorted(&su, &sv, tols)
}

fn weak_majorize_sorted(la: &[f64], lb: &[f64], tols: &Tolerances) -> Result<OrderVerdict> {
    let scale = la
        .iter()
        .chain(lb)
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let detail: Vec<f64> = la
        .iter()
        .zip(lb)
        .map(|(&x, &y)| {
            sum_a += x;
            sum_b += y;
            sum_b - sum_a
        })
        .collect();
    Ok(OrderVerdict::from_detail(
        OrderKind::WeakMajorization,
        detail,
        scale,
        tols,
    ))
}
