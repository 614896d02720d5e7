//! Dense Hermitian linear algebra: the Hermitian value type, a cyclic Jacobi
//! eigensolver, spectral functional calculus and the segment (1-t)A + tB.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::ScalarFunction;

/// Per-entry tolerance below which a matrix counts as cleanly Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Asymmetry above this is rejected instead of being averaged away.
pub const HERMITICITY_GUARD: f64 = 1e-8;
/// Positivity floor for the matrix logarithm.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 50;

/// Closed real interval, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::DegenerateInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// An n x n complex matrix guaranteed Hermitian at construction.
///
/// Entries are stored row-major. The type is immutable after construction;
/// arithmetic helpers return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

/// On-disk matrix format: `n`, row-major `re`, optional row-major `im`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl HermitianMatrix {
    /// Symmetrize `(M + M*)/2`, rejecting asymmetry above [`HERMITICITY_GUARD`].
    pub fn hermitize(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::NonSquare {
                rows: n,
                cols: if n == 0 { 0 } else { entries.len() / n },
            });
        }
        let mut max_asym = 0.0f64;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let a = entries[i * n + j];
                let b = entries[j * n + i].conj();
                max_asym = max_asym.max((a - b).norm());
                data[i * n + j] = 0.5 * (a + b);
            }
        }
        if max_asym > HERMITICITY_GUARD {
            return Err(Error::NotNumericallyHermitian { max_asym });
        }
        Ok(Self { n, data })
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::hermitize(n, &complex)
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = Complex64::new(d, 0.0);
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `self + c*I`.
    pub fn add_scalar(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    pub fn to_json(&self) -> MatrixJson {
        let re: Vec<f64> = self.data.iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.data.iter().map(|z| z.im).collect();
        let all_real = im.iter().all(|&x| x == 0.0);
        MatrixJson {
            n: self.n,
            re,
            im: if all_real { None } else { Some(im) },
        }
    }

    pub fn from_json(m: &MatrixJson) -> Result<Self> {
        let n = m.n;
        if m.re.len() != n * n {
            return Err(Error::NonSquare {
                rows: n,
                cols: if n == 0 { 0 } else { m.re.len() / n },
            });
        }
        if let Some(im) = &m.im {
            if im.len() != n * n {
                return Err(Error::LengthMismatch {
                    left: m.re.len(),
                    right: im.len(),
                });
            }
        }
        let data: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new(m.re[k], m.im.as_ref().map_or(0.0, |im| im[k])))
            .collect();
        Self::hermitize(n, &data)
    }
}

/// Eigenvalues sorted descending with an orthonormal eigenvector basis.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Row-major n x n; column j is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Vec<Complex64>,
    pub n: usize,
}

impl SpectralDecomposition {
    pub fn spectral_interval(&self) -> Interval {
        Interval {
            lo: *self.eigenvalues.last().unwrap(),
            hi: self.eigenvalues[0],
        }
    }

    /// Assemble `U diag(g(lambda)) U*` and re-hermitize.
    pub fn assemble(&self, values: &[f64]) -> Result<HermitianMatrix> {
        let n = self.n;
        let u = &self.eigenvectors;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += u[i * n + k] * values[k] * u[j * n + k].conj();
                }
                data[i * n + j] = acc;
            }
        }
        HermitianMatrix::hermitize(n, &data)
    }
}

/// Cyclic Jacobi diagonalization for Hermitian matrices.
///
/// Sweeps rotate away each off-diagonal entry in turn until the off-diagonal
/// Frobenius mass drops below `1e-14 * ||A||_F` or 50 sweeps have run.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m = a.entries().to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let fro = a.frobenius_norm();
    let target = 1e-14 * fro;

    let off_mass = |m: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut residual = off_mass(&m);
    let mut sweeps = 0;
    while residual > target && sweeps < MAX_JACOBI_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let z = m[p * n + q];
                let r = z.norm();
                if r == 0.0 {
                    continue;
                }
                let theta = z.arg();
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                // Entries too small to move the spectrum at working precision
                // are annihilated directly (Rutishauser's threshold device);
                // rotating them would overflow tau.
                if r < (app - aqq).abs() * 1e-150 {
                    m[p * n + q] = Complex64::new(0.0, 0.0);
                    m[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                // Real Jacobi angle applied to the phase-aligned 2x2 block.
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = Complex64::from_polar(1.0, theta);
                // U differs from I in the (p,q) block:
                //   U[p][p] = c        U[p][q] = -s e^{i theta}
                //   U[q][p] = s e^{-i theta}   U[q][q] = c
                // Columns: A <- A U
                for i in 0..n {
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    m[i * n + p] = c * aip + s * phase.conj() * aiq;
                    m[i * n + q] = -s * phase * aip + c * aiq;
                }
                // Rows: A <- U* A
                for j in 0..n {
                    let apj = m[p * n + j];
                    let aqj = m[q * n + j];
                    m[p * n + j] = c * apj + s * phase * aqj;
                    m[q * n + j] = -s * phase.conj() * apj + c * aqj;
                }
                // Accumulate eigenvectors: V <- V U
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip + s * phase.conj() * viq;
                    v[i * n + q] = -s * phase * vip + c * viq;
                }
            }
        }
        sweeps += 1;
        residual = off_mass(&m);
    }
    if residual > target {
        return Err(Error::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
            residual,
        });
    }

    // Stable descending sort of eigenpairs.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[i * n + new_col] = v[i * n + old_col];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        n,
    })
}

/// Functional calculus `f(A) = U diag(f(lambda)) U*`.
///
/// Every eigenvalue must lie in `domain(f)` inflated by 1e-12 at each end.
pub fn apply_function(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = eig_hermitian(a)?;
    apply_to_decomposition(f, &dec)
}

pub fn apply_to_decomposition(
    f: &ScalarFunction,
    dec: &SpectralDecomposition,
) -> Result<HermitianMatrix> {
    let dom = f.domain();
    for &lam in &dec.eigenvalues {
        if !dom.contains(lam, 1e-12) || (f.strict_lo() && lam <= dom.lo + POSITIVITY_FLOOR) {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: lam,
                lo: dom.lo,
                hi: dom.hi,
            });
        }
    }
    let values: Vec<f64> = dec.eigenvalues.iter().map(|&lam| f.eval(lam)).collect();
    dec.assemble(&values)
}

/// Functional-calculus natural logarithm; requires `lambda_min > 1e-12`.
pub fn matrix_log(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = eig_hermitian(a)?;
    let min = *dec.eigenvalues.last().unwrap();
    if min <= POSITIVITY_FLOOR {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let values: Vec<f64> = dec.eigenvalues.iter().map(|&lam| lam.ln()).collect();
    dec.assemble(&values)
}

/// The segment `(1-t)A + tB`, `t` in `[0,1]`.
pub fn convex_path(a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
        });
    }
    a.scale(1.0 - t).add(&b.scale(t))
}
