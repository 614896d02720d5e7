//! Scalar function and weight registry with convexity/monotonicity metadata,
//! sampled hypothesis validators, secant coefficients and the reverse-bound
//! beta maximization.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Interval;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Declared analytic properties of a scalar function.
///
/// A `true` monotonicity or positivity flag may be restricted to a
/// sub-interval of the domain (e.g. `square` is increasing only on `[0, inf)`);
/// use [`ScalarFunction::is_monotone_on`] / [`ScalarFunction::is_positive_on`]
/// when an interval is known.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct FunctionFlags {
    pub convex: bool,
    pub log_convex: bool,
    pub operator_convex: bool,
    pub monotone_increasing: bool,
    pub monotone_decreasing: bool,
    pub positive: bool,
}

/// Evaluable scalar function with analytic derivative and metadata.
#[derive(Clone)]
pub struct ScalarFunction {
    id: String,
    eval: RealFn,
    deriv: Option<RealFn>,
    domain: Interval,
    /// Domain excludes its left endpoint (e.g. `1/x`, `-ln x` on `(0, inf)`).
    strict_lo: bool,
    pub flags: FunctionFlags,
    /// Where the monotonicity flag actually holds; `None` = whole domain.
    monotone_region: Option<Interval>,
    /// Where the positivity flag actually holds; `None` = whole domain.
    positive_region: Option<Interval>,
}

impl std::fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("flags", &self.flags)
            .finish()
    }
}

impl ScalarFunction {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        match &self.deriv {
            Some(d) => Ok(d(x)),
            None => Err(Error::NotDifferentiable {
                id: self.id.clone(),
            }),
        }
    }

    pub fn differentiable(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn strict_lo(&self) -> bool {
        self.strict_lo
    }

    pub fn contains_interval(&self, j: &Interval) -> bool {
        let lo_ok = if self.strict_lo {
            j.lo > self.domain.lo
        } else {
            j.lo >= self.domain.lo - 1e-12
        };
        lo_ok && j.hi <= self.domain.hi + 1e-12
    }

    pub fn is_monotone_on(&self, j: &Interval) -> bool {
        if !(self.flags.monotone_increasing || self.flags.monotone_decreasing) {
            return false;
        }
        match &self.monotone_region {
            None => true,
            Some(r) => j.lo >= r.lo - 1e-12 && j.hi <= r.hi + 1e-12,
        }
    }

    pub fn is_positive_on(&self, j: &Interval) -> bool {
        if !self.flags.positive {
            return false;
        }
        match &self.positive_region {
            None => true,
            Some(r) => j.lo >= r.lo - 1e-12 && j.hi <= r.hi + 1e-12,
        }
    }

    /// General-purpose constructor for registry entries.
    #[allow(clippy::too_many_arguments)]
    fn new(
        id: &str,
        eval: RealFn,
        deriv: Option<RealFn>,
        domain: Interval,
        strict_lo: bool,
        flags: FunctionFlags,
    ) -> Self {
        Self {
            id: id.to_string(),
            eval,
            deriv,
            domain,
            strict_lo,
            flags,
            monotone_region: None,
            positive_region: None,
        }
    }

    /// `c0 + c1 * x`.
    pub fn affine(c0: f64, c1: f64) -> Self {
        let mut f = Self::new(
            "affine",
            Arc::new(move |x| c0 + c1 * x),
            Some(Arc::new(move |_| c1)),
            FULL_LINE,
            false,
            FunctionFlags {
                convex: true,
                operator_convex: true,
                monotone_increasing: c1 >= 0.0,
                monotone_decreasing: c1 <= 0.0,
                ..Default::default()
            },
        );
        f.id = format!("affine({c0},{c1})");
        f
    }
}

const FULL_LINE: Interval = Interval {
    lo: f64::NEG_INFINITY,
    hi: f64::INFINITY,
};
const POSITIVE_AXIS: Interval = Interval {
    lo: 0.0,
    hi: f64::INFINITY,
};

/// The built-in scalar function registry.
pub fn builtin_functions() -> Vec<ScalarFunction> {
    let mut fs = Vec::new();

    fs.push(ScalarFunction::new(
        "identity",
        Arc::new(|x| x),
        Some(Arc::new(|_| 1.0)),
        FULL_LINE,
        false,
        FunctionFlags {
            convex: true,
            operator_convex: true,
            monotone_increasing: true,
            ..Default::default()
        },
    ));

    let mut affine = ScalarFunction::affine(1.0, 2.0);
    affine.id = "affine".to_string();
    fs.push(affine);

    let mut square = ScalarFunction::new(
        "square",
        Arc::new(|x| x * x),
        Some(Arc::new(|x| 2.0 * x)),
        FULL_LINE,
        false,
        FunctionFlags {
            convex: true,
            operator_convex: true,
            monotone_increasing: true,
            positive: true,
            ..Default::default()
        },
    );
    square.monotone_region = Some(POSITIVE_AXIS);
    square.positive_region = Some(Interval {
        lo: 1e-12,
        hi: f64::INFINITY,
    });
    fs.push(square);

    fs.push(ScalarFunction::new(
        "exp",
        Arc::new(f64::exp),
        Some(Arc::new(f64::exp)),
        FULL_LINE,
        false,
        FunctionFlags {
            convex: true,
            log_convex: true,
            monotone_increasing: true,
            positive: true,
            ..Default::default()
        },
    ));

    fs.push(ScalarFunction::new(
        "reciprocal",
        Arc::new(|x| 1.0 / x),
        Some(Arc::new(|x| -1.0 / (x * x))),
        POSITIVE_AXIS,
        true,
        FunctionFlags {
            convex: true,
            log_convex: true,
            operator_convex: true,
            monotone_decreasing: true,
            positive: true,
            ..Default::default()
        },
    ));

    fs.push(ScalarFunction::new(
        "neg_log",
        Arc::new(|x: f64| -x.ln()),
        Some(Arc::new(|x| -1.0 / x)),
        POSITIVE_AXIS,
        true,
        FunctionFlags {
            convex: true,
            operator_convex: true,
            monotone_decreasing: true,
            ..Default::default()
        },
    ));

    fs.push(ScalarFunction::new(
        "xlogx",
        Arc::new(|x: f64| x * x.ln()),
        Some(Arc::new(|x: f64| x.ln() + 1.0)),
        POSITIVE_AXIS,
        true,
        FunctionFlags {
            convex: true,
            operator_convex: true,
            ..Default::default()
        },
    ));

    // |x - 1/2| is convex but not differentiable at 1/2; the sentinel (no
    // derivative) keeps it out of the derivative-based checkers.
    fs.push(ScalarFunction::new(
        "abs_shift",
        Arc::new(|x: f64| (x - 0.5).abs()),
        None,
        FULL_LINE,
        false,
        FunctionFlags {
            convex: true,
            ..Default::default()
        },
    ));

    fs.push(ScalarFunction::new(
        "shiftsq",
        Arc::new(|x: f64| (x - 0.5) * (x - 0.5)),
        Some(Arc::new(|x| 2.0 * (x - 0.5))),
        FULL_LINE,
        false,
        FunctionFlags {
            convex: true,
            operator_convex: true,
            ..Default::default()
        },
    ));

    // Concave negative control for the drop-convexity hunts.
    fs.push(ScalarFunction::new(
        "neg_shiftsq",
        Arc::new(|x: f64| -(x - 0.5) * (x - 0.5)),
        Some(Arc::new(|x| -2.0 * (x - 0.5))),
        FULL_LINE,
        false,
        FunctionFlags::default(),
    ));

    fs
}

pub fn lookup_function(id: &str) -> Result<ScalarFunction> {
    // "affine(c0,c1)" ids round-trip through ScalarFunction::affine.
    if let Some(args) = id.strip_prefix("affine(").and_then(|s| s.strip_suffix(')')) {
        if let Some((c0, c1)) = args.split_once(',') {
            if let (Ok(c0), Ok(c1)) = (c0.trim().parse(), c1.trim().parse()) {
                return Ok(ScalarFunction::affine(c0, c1));
            }
        }
        return Err(Error::UnknownId {
            kind: "function",
            id: id.to_string(),
        });
    }
    builtin_functions()
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownId {
            kind: "function",
            id: id.to_string(),
        })
}

/// Declared properties of a weight on `[0,1]`.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct WeightFlags {
    pub nonnegative: bool,
    pub symmetric: bool,
    pub nondecreasing_first_half: bool,
    pub strictly_positive: bool,
    pub normalized: bool,
}

/// Evaluable weight function on `[0,1]`.
#[derive(Clone)]
pub struct WeightFunction {
    id: String,
    eval: RealFn,
    pub flags: WeightFlags,
    /// Points where the weight is not smooth; quadrature panels snap here.
    kinks: Vec<f64>,
}

impl std::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightFunction")
            .field("id", &self.id)
            .field("flags", &self.flags)
            .field("kinks", &self.kinks)
            .finish()
    }
}

impl WeightFunction {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn new(id: &str, eval: RealFn, flags: WeightFlags, kinks: Vec<f64>) -> Self {
        Self {
            id: id.to_string(),
            eval,
            flags,
            kinks,
        }
    }

    /// Same weight scaled by `c` (used by normalization).
    pub fn scaled(&self, c: f64, normalized: bool) -> Self {
        let inner = self.eval.clone();
        Self {
            id: format!("{}*{c}", self.id),
            eval: Arc::new(move |t| c * inner(t)),
            flags: WeightFlags {
                normalized,
                ..self.flags
            },
            kinks: self.kinks.clone(),
        }
    }

    /// Nondecreasing piecewise-linear values on [0,1/2], mirrored to [1/2,1].
    ///
    /// `values[i]` sits at `t = i/(2*(values.len()-1))`; the construction is
    /// the replay form of the random admissible weights.
    pub fn piecewise_linear_symmetric(id: &str, values: &[f64]) -> Self {
        assert!(values.len() >= 2, "need at least two knot values");
        let vals = values.to_vec();
        let k = vals.len() - 1;
        let mut kinks: Vec<f64> = (1..2 * k)
            .map(|i| i as f64 / (2.0 * k as f64))
            .collect();
        kinks.dedup();
        let eval = move |t: f64| -> f64 {
            let s = if t <= 0.5 { t } else { 1.0 - t };
            let x = (s * 2.0 * k as f64).clamp(0.0, k as f64);
            let i = (x.floor() as usize).min(k - 1);
            let frac = x - i as f64;
            vals[i] * (1.0 - frac) + vals[i + 1] * frac
        };
        let strictly_positive = values.iter().all(|&v| v > 0.0);
        Self {
            id: id.to_string(),
            eval: Arc::new(eval),
            flags: WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: true,
                strictly_positive,
                normalized: false,
            },
            kinks,
        }
    }
}

/// The built-in weight registry.
pub fn builtin_weights() -> Vec<WeightFunction> {
    vec![
        WeightFunction::new(
            "one",
            Arc::new(|_| 1.0),
            WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: true,
                strictly_positive: true,
                normalized: true,
            },
            vec![],
        ),
        WeightFunction::new(
            "parabola_bump",
            Arc::new(|t| t * (1.0 - t)),
            WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: true,
                strictly_positive: false,
                normalized: false,
            },
            vec![],
        ),
        WeightFunction::new(
            "tent",
            Arc::new(|t: f64| t.min(1.0 - t)),
            WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: true,
                strictly_positive: false,
                normalized: false,
            },
            vec![0.5],
        ),
        // Negative control: symmetric but decreasing on [0,1/2].
        WeightFunction::new(
            "vee",
            Arc::new(|t: f64| (t - 0.5).abs()),
            WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: false,
                strictly_positive: false,
                normalized: false,
            },
            vec![0.5],
        ),
        WeightFunction::new(
            "plateau",
            Arc::new(|t: f64| (4.0 * t.min(1.0 - t)).clamp(0.0, 1.0)),
            WeightFlags {
                nonnegative: true,
                symmetric: true,
                nondecreasing_first_half: true,
                strictly_positive: false,
                normalized: false,
            },
            vec![0.25, 0.75],
        ),
        // Negative control: not symmetric.
        WeightFunction::new(
            "asym",
            Arc::new(|t| t),
            WeightFlags {
                nonnegative: true,
                symmetric: false,
                nondecreasing_first_half: true,
                strictly_positive: false,
                normalized: false,
            },
            vec![],
        ),
    ]
}

pub fn lookup_weight(id: &str) -> Result<WeightFunction> {
    builtin_weights()
        .into_iter()
        .find(|w| w.id == id)
        .ok_or_else(|| Error::UnknownId {
            kind: "weight",
            id: id.to_string(),
        })
}

/// Outcome of a sampled hypothesis check.
#[derive(Debug, Clone, Copy)]
pub struct SampledCheck {
    pub pass: bool,
    /// Most negative midpoint-convexity slack observed (0 for exact equality).
    pub worst_slack: f64,
}

/// Midpoint convexity over all grid pairs: `f(mid) <= (f(x)+f(y))/2 + 1e-10`.
pub fn check_convex_sampled(
    f: &ScalarFunction,
    j: &Interval,
    grid_size: usize,
) -> Result<SampledCheck> {
    assert!(grid_size >= 3, "grid_size must be at least 3");
    if !f.contains_interval(j) {
        return Err(Error::DomainMismatch {
            id: f.id.clone(),
            lo: j.lo,
            hi: j.hi,
        });
    }
    let xs = grid(j, grid_size);
    let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let mut worst = f64::INFINITY;
    for i in 0..xs.len() {
        for k in (i + 1)..xs.len() {
            let mid = 0.5 * (xs[i] + xs[k]);
            let slack = 0.5 * (vals[i] + vals[k]) - f.eval(mid);
            if slack < worst {
                worst = slack;
            }
        }
    }
    Ok(SampledCheck {
        pass: worst >= -1e-10,
        worst_slack: worst,
    })
}

/// Convexity test applied to `ln(f)`.
pub fn check_log_convex_sampled(
    f: &ScalarFunction,
    j: &Interval,
    grid_size: usize,
) -> Result<SampledCheck> {
    assert!(grid_size >= 3, "grid_size must be at least 3");
    if !f.contains_interval(j) {
        return Err(Error::DomainMismatch {
            id: f.id.clone(),
            lo: j.lo,
            hi: j.hi,
        });
    }
    let xs = grid(j, grid_size);
    for &x in &xs {
        let v = f.eval(x);
        if v <= 0.0 {
            return Err(Error::NonPositiveFunction {
                id: f.id.clone(),
                at: x,
                value: v,
            });
        }
    }
    let logs: Vec<f64> = xs.iter().map(|&x| f.eval(x).ln()).collect();
    let mut worst = f64::INFINITY;
    for i in 0..xs.len() {
        for k in (i + 1)..xs.len() {
            let mid = 0.5 * (xs[i] + xs[k]);
            let slack = 0.5 * (logs[i] + logs[k]) - f.eval(mid).ln();
            if slack < worst {
                worst = slack;
            }
        }
    }
    Ok(SampledCheck {
        pass: worst >= -1e-10,
        worst_slack: worst,
    })
}

/// Sampled classification of the sign condition
/// `(f(t)-f(s))(g(t)-g(s)) >= 0` (or `<= 0`) over grid pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Synchrony {
    Synchronous,
    Asynchronous,
    Neither,
}

#[derive(Debug, Clone)]
pub struct SynchronyReport {
    pub classification: Synchrony,
    /// Pair with the most positive product (witness against "asynchronous").
    pub positive_witness: Option<(f64, f64)>,
    /// Pair with the most negative product (witness against "synchronous").
    pub negative_witness: Option<(f64, f64)>,
}

pub fn check_synchronous(
    f: &ScalarFunction,
    g: &ScalarFunction,
    j: &Interval,
    grid_size: usize,
) -> Result<SynchronyReport> {
    assert!(grid_size >= 3, "grid_size must be at least 3");
    for func in [f, g] {
        if !func.contains_interval(j) {
            return Err(Error::DomainMismatch {
                id: func.id.clone(),
                lo: j.lo,
                hi: j.hi,
            });
        }
    }
    let xs = grid(j, grid_size);
    let fv: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let gv: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    let mut min_prod = f64::INFINITY;
    let mut max_prod = f64::NEG_INFINITY;
    let mut min_pair = (j.lo, j.lo);
    let mut max_pair = (j.lo, j.lo);
    for i in 0..xs.len() {
        for k in (i + 1)..xs.len() {
            let prod = (fv[k] - fv[i]) * (gv[k] - gv[i]);
            if prod < min_prod {
                min_prod = prod;
                min_pair = (xs[i], xs[k]);
            }
            if prod > max_prod {
                max_prod = prod;
                max_pair = (xs[i], xs[k]);
            }
        }
    }
    let classification = if min_prod >= -1e-12 {
        Synchrony::Synchronous
    } else if max_prod <= 1e-12 {
        Synchrony::Asynchronous
    } else {
        Synchrony::Neither
    };
    Ok(SynchronyReport {
        classification,
        positive_witness: (max_prod > 1e-12).then_some(max_pair),
        negative_witness: (min_prod < -1e-12).then_some(min_pair),
    })
}

/// Chord of `f` over `[m, M]`: slope `a_f` and intercept `b_f`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SecantCoeffs {
    pub a_f: f64,
    pub b_f: f64,
}

pub fn secant_coeffs(f: &ScalarFunction, m: f64, big_m: f64) -> Result<SecantCoeffs> {
    if big_m - m <= 1e-12 {
        return Err(Error::DegenerateInterval { lo: m, hi: big_m });
    }
    let fm = f.eval(m);
    let fbig = f.eval(big_m);
    Ok(SecantCoeffs {
        a_f: (fbig - fm) / (big_m - m),
        b_f: (big_m * fm - m * fbig) / (big_m - m),
    })
}

/// `max over [m,M] of a_f x + b_f - alpha f(x)`: 2001-point scan followed by
/// golden-section refinement on the bracketing sub-interval.
pub fn beta_max(f: &ScalarFunction, m: f64, big_m: f64, alpha: f64) -> Result<f64> {
    if big_m - m <= 1e-12 {
        return Err(Error::DegenerateInterval { lo: m, hi: big_m });
    }
    let sc = secant_coeffs(f, m, big_m)?;
    let h = |x: f64| sc.a_f * x + sc.b_f - alpha * f.eval(x);

    const SCAN: usize = 2001;
    let step = (big_m - m) / (SCAN - 1) as f64;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..SCAN {
        let x = m + i as f64 * step;
        let v = h(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = m + step * best_i.saturating_sub(1) as f64;
    let hi = m + step * (best_i + 1).min(SCAN - 1) as f64;

    // Golden-section search for the maximum on [lo, hi].
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = h(d);
        }
    }
    Ok(best.max(fc).max(fd).max(h(m)).max(h(big_m)))
}

fn grid(j: &Interval, size: usize) -> Vec<f64> {
    let h = j.length() / (size - 1) as f64;
    (0..size).map(|i| j.lo + i as f64 * h).collect()
}
