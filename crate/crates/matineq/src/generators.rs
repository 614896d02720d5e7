//! Deterministic pseudo-random instances: Hermitian pairs with prescribed
//! spectral intervals and randomized admissible weights, plus the sweep /
//! counterexample-hunt drivers built on them.
//!
//! All randomness flows through a self-contained splitmix-style generator
//! (constants below) so that persisted findings replay bit-identically in any
//! implementation, not just this one.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{
    self, CheckContext, CheckResult, InstanceDescriptor, SynchronyMode, Verdict, WeightRecipe,
};
use crate::error::{Error, Result};
use crate::funcspace::{lookup_function, lookup_weight, WeightFunction};
use crate::linalg::{eig_hermitian, HermitianMatrix, Interval};

/// Weyl increment of the splitmix64 generator.
pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 generator: state advances by [`SPLITMIX_GAMMA`], output is
/// the standard 64-bit finalizer (xor-shift-multiply with 0xBF58476D1CE4E5B9
/// and 0x94D049BB133111EB).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(SPLITMIX_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal pair (Box-Muller).
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        (r * th.cos(), r * th.sin())
    }

    pub fn next_range(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Per-trial sub-seed: one splitmix output keyed by the trial index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    SplitMix64::new(master ^ index.wrapping_mul(SPLITMIX_GAMMA)).next_u64()
}

/// Haar-like random unitary: complex Gaussian matrix orthonormalized by
/// modified Gram-Schmidt with one re-orthogonalization pass.
/// Returned row-major; columns are the orthonormal frame.
pub fn random_unitary(rng: &mut SplitMix64, n: usize) -> Vec<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let (re, im) = rng.next_gaussian_pair();
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let c = cols[k][i];
                    cols[j][i] -= proj * c;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            u[i * n + j] = col[i];
        }
    }
    u
}

/// The eigenvalue list `random_hermitian(seed, ..)` embeds, in draw order.
pub fn random_spectrum(seed: u64, n: usize, interval: &Interval) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| interval.lo + rng.next_f64() * interval.length())
        .collect()
}

/// Random Hermitian matrix with spectrum drawn uniformly in `interval`:
/// `U diag(lambda) U*` for a Haar-like `U`.
pub fn random_hermitian(seed: u64, n: usize, interval: &Interval) -> HermitianMatrix {
    let mut rng = SplitMix64::new(seed);
    let lambdas: Vec<f64> = (0..n)
        .map(|_| interval.lo + rng.next_f64() * interval.length())
        .collect();
    let u = random_unitary(&mut rng, n);
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += u[i * n + k] * lambdas[k] * u[j * n + k].conj();
            }
            data[i * n + j] = acc;
        }
    }
    let m = HermitianMatrix::hermitize(n, &data).expect("construction is Hermitian");
    debug_assert!(eig_hermitian(&m)
        .map(|d| d.eigenvalues.iter().all(|&l| interval.contains(l, 1e-10)))
        .unwrap_or(false));
    m
}

/// Two independent draws with derived sub-seeds.
pub fn random_pair(
    seed: u64,
    n: usize,
    interval: &Interval,
) -> (HermitianMatrix, HermitianMatrix) {
    (
        random_hermitian(seed, n, interval),
        random_hermitian(seed ^ SPLITMIX_GAMMA, n, interval),
    )
}

/// Random Levin-Stečkin-admissible weight: nonnegative base plus `knots`
/// nonnegative increments, piecewise linear on [0,1/2], mirrored.
pub fn random_admissible_weight(seed: u64, knots: usize) -> WeightFunction {
    assert!(knots >= 1, "need at least one knot");
    let mut rng = SplitMix64::new(seed);
    let mut values = Vec::with_capacity(knots + 1);
    let mut v = rng.next_f64();
    values.push(v);
    for _ in 0..knots {
        v += rng.next_f64();
        values.push(v);
    }
    WeightFunction::piecewise_linear_symmetric(&format!("rand({seed},{knots})"), &values)
}

/// Replayable description of one generated check instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub theorem_id: String,
    /// Drives the matrix draw (and nothing else).
    pub seed: u64,
    pub n: usize,
    /// Spectral target for matrix theorems; `[a, b]` for interval-parameterized
    /// scalar theorems.
    pub interval: Interval,
    pub function_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_function_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_recipe: Option<WeightRecipe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SynchronyMode>,
}

impl InstanceSpec {
    pub fn weight(&self) -> Result<Option<WeightFunction>> {
        if let Some(r) = &self.weight_recipe {
            return Ok(Some(random_admissible_weight(r.seed, r.knots)));
        }
        match &self.weight_id {
            Some(id) => Ok(Some(lookup_weight(id)?)),
            None => Ok(None),
        }
    }
}

/// Materialize and run the checker an `InstanceSpec` describes.
pub fn run_spec(spec: &InstanceSpec, ctx: &CheckContext) -> Result<CheckResult> {
    if spec.n < 1 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: spec.n as f64,
        });
    }
    let f = lookup_function(&spec.function_id)?;
    let weight = spec.weight()?;
    let need_weight = || -> Result<&WeightFunction> {
        weight.as_ref().ok_or(Error::MissingArgument("weight"))
    };
    let mut result = match spec.theorem_id.as_str() {
        "scalar-levin-steckin" => checks::check_scalar_levin_steckin(&f, need_weight()?, ctx),
        "scalar-fejer" => {
            checks::check_scalar_fejer(&f, need_weight()?, spec.interval.lo, spec.interval.hi, ctx)
        }
        "general-levin-steckin" => checks::check_general_levin_steckin(&f, need_weight()?, ctx),
        "moment-corollary" => checks::check_moment_corollary(&f, need_weight()?, ctx),
        "levin-steckin-refined" => checks::check_levin_steckin_refined(&f, need_weight()?, ctx),
        "chebyshev-variance" => {
            let g = lookup_function(
                spec.second_function_id
                    .as_deref()
                    .ok_or(Error::MissingArgument("second function"))?,
            )?;
            let mode = spec.mode.ok_or(Error::MissingArgument("mode"))?;
            checks::check_chebyshev_variance(&f, &g, spec.interval.lo, spec.interval.hi, mode, ctx)
        }
        "chebyshev-am-bound" => {
            let g = lookup_function(
                spec.second_function_id
                    .as_deref()
                    .ok_or(Error::MissingArgument("second function"))?,
            )?;
            checks::check_chebyshev_am_bound(&f, &g, ctx)
        }
        id if checks::is_matrix_theorem(id) => {
            let (a, b) = random_pair(spec.seed, spec.n, &spec.interval);
            let p = need_weight()?;
            match id {
                "matrix-fejer-lower" => checks::check_matrix_fejer_lower(&f, p, &a, &b, ctx),
                "matrix-fejer-upper" => checks::check_matrix_fejer_upper(&f, p, &a, &b, ctx),
                "log-fejer" => checks::check_log_fejer(&f, p, &a, &b, ctx),
                "eig-product-fejer" => checks::check_eig_product_fejer(&f, p, &a, &b, ctx),
                "operator-levin-steckin" => {
                    checks::check_operator_levin_steckin(&f, p, &a, &b, ctx)
                }
                "mond-pecaric-reverse" => checks::check_mond_pecaric_reverse(
                    &f,
                    p,
                    &a,
                    &b,
                    spec.alpha.unwrap_or(1.0),
                    None,
                    None,
                    ctx,
                ),
                _ => unreachable!(),
            }
        }
        other => {
            return Err(Error::UnknownId {
                kind: "theorem",
                id: other.to_string(),
            })
        }
    };
    annotate(&mut result.instance, spec);
    Ok(result)
}

fn annotate(inst: &mut InstanceDescriptor, spec: &InstanceSpec) {
    inst.seed = Some(spec.seed);
    inst.interval = Some(spec.interval);
    inst.weight_recipe = spec.weight_recipe;
    if checks::is_matrix_theorem(&spec.theorem_id) {
        inst.matrix_source = Some(format!("seed:{}", spec.seed));
    }
}

/// Admissible function/weight id pools per theorem, for sweeps and hunts.
fn function_pool(theorem_id: &str) -> Vec<&'static str> {
    match theorem_id {
        // [0,1]-domain scalar theorems: convex, defined on all of [0,1].
        "scalar-levin-steckin" | "scalar-fejer" | "levin-steckin-refined" => {
            vec!["identity", "affine", "square", "exp", "shiftsq", "abs_shift"]
        }
        // Need a derivative as well.
        "general-levin-steckin" | "moment-corollary" => {
            vec!["identity", "affine", "square", "exp", "shiftsq"]
        }
        "matrix-fejer-lower" => vec!["identity", "affine", "square", "exp", "shiftsq", "xlogx"],
        // Monotone on the positive spectral window.
        "matrix-fejer-upper" => vec!["identity", "affine", "square", "exp"],
        "log-fejer" | "eig-product-fejer" => vec!["exp", "reciprocal"],
        "operator-levin-steckin" => {
            vec!["identity", "affine", "square", "shiftsq", "neg_log", "xlogx", "reciprocal"]
        }
        "mond-pecaric-reverse" => vec!["identity", "square", "exp", "xlogx", "reciprocal"],
        _ => vec![],
    }
}

fn weight_pool(theorem_id: &str) -> Vec<&'static str> {
    match theorem_id {
        // Levin-Stečkin class: symmetric, nondecreasing on the first half.
        "scalar-levin-steckin" | "moment-corollary" | "levin-steckin-refined"
        | "operator-levin-steckin" => vec!["one", "parabola_bump", "tent", "plateau"],
        // Fejér class: symmetric and nonnegative is enough.
        "scalar-fejer" | "matrix-fejer-lower" | "matrix-fejer-upper" | "mond-pecaric-reverse" => {
            vec!["one", "parabola_bump", "tent", "plateau", "vee"]
        }
        // Strictly positive on [0,1] (normalized inside the checker).
        "log-fejer" | "eig-product-fejer" => vec!["one"],
        // Any continuous nonnegative weight.
        "general-levin-steckin" => vec!["one", "parabola_bump", "tent", "plateau", "vee", "asym"],
        _ => vec![],
    }
}

/// May a random Levin-Stečkin weight substitute for a registry weight here?
fn accepts_random_weight(theorem_id: &str) -> bool {
    !matches!(
        theorem_id,
        "log-fejer" | "eig-product-fejer" | "chebyshev-variance" | "chebyshev-am-bound"
    )
}

/// Function pairs with their sampled synchrony classification.
///
/// Curated: the variance bracket's lower bound can fail for some synchronous
/// pairs (the printed minimum bound does not survive the min/integral swap),
/// so only pairs known to satisfy it are swept.
fn chebyshev_pairs(theorem_id: &str) -> Vec<(&'static str, &'static str, SynchronyMode)> {
    let sync = vec![
        ("identity", "identity", SynchronyMode::Synchronous),
        ("identity", "square", SynchronyMode::Synchronous),
        ("identity", "exp", SynchronyMode::Synchronous),
        ("square", "exp", SynchronyMode::Synchronous),
        ("identity", "affine", SynchronyMode::Synchronous),
        ("exp", "exp", SynchronyMode::Synchronous),
    ];
    if theorem_id == "chebyshev-am-bound" {
        return sync;
    }
    let mut pairs = sync;
    pairs.push(("identity", "affine(1,-1)", SynchronyMode::Asynchronous));
    pairs.push(("affine", "affine(2,-3)", SynchronyMode::Asynchronous));
    pairs
}

/// Positive spectral window keeping every pool function's hypotheses valid
/// (strict positivity for reciprocal/neg_log, monotone region for square).
pub const DEFAULT_SPECTRAL_WINDOW: Interval = Interval { lo: 0.1, hi: 1.1 };
const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

/// Draw one admissible instance of `theorem_id` from `trial_seed`.
pub fn generate_spec(
    theorem_id: &str,
    trial_seed: u64,
    nmax: usize,
    window: &Interval,
) -> Result<InstanceSpec> {
    if !checks::THEOREM_IDS.contains(&theorem_id) {
        return Err(Error::UnknownId {
            kind: "theorem",
            id: theorem_id.to_string(),
        });
    }
    let mut rng = SplitMix64::new(derive_seed(trial_seed, 1));
    let matrix_seed = derive_seed(trial_seed, 2);
    let is_matrix = checks::is_matrix_theorem(theorem_id);
    let n = if is_matrix { 1 + rng.next_range(nmax.max(1)) } else { 1 };

    if matches!(theorem_id, "chebyshev-variance" | "chebyshev-am-bound") {
        let pairs = chebyshev_pairs(theorem_id);
        let (f, g, mode) = pairs[rng.next_range(pairs.len())];
        return Ok(InstanceSpec {
            theorem_id: theorem_id.to_string(),
            seed: matrix_seed,
            n: 1,
            interval: UNIT,
            function_id: f.to_string(),
            second_function_id: Some(g.to_string()),
            weight_id: None,
            weight_recipe: None,
            alpha: None,
            mode: Some(mode),
        });
    }

    let fns = function_pool(theorem_id);
    let function_id = fns[rng.next_range(fns.len())].to_string();
    let weights = weight_pool(theorem_id);
    // Every fourth draw replaces the registry weight with a random admissible
    // one (where the theorem's weight class allows it).
    let use_random = accepts_random_weight(theorem_id) && rng.next_range(4) == 0;
    let (weight_id, weight_recipe) = if use_random {
        let recipe = WeightRecipe {
            seed: derive_seed(trial_seed, 3),
            knots: 1 + rng.next_range(4),
        };
        (None, Some(recipe))
    } else {
        (Some(weights[rng.next_range(weights.len())].to_string()), None)
    };
    let alpha = (theorem_id == "mond-pecaric-reverse")
        .then(|| [0.0, 0.5, 1.0, 2.0][rng.next_range(4)]);
    Ok(InstanceSpec {
        theorem_id: theorem_id.to_string(),
        seed: matrix_seed,
        n,
        interval: if is_matrix { *window } else { UNIT },
        function_id,
        second_function_id: None,
        weight_id,
        weight_recipe,
        alpha,
        mode: None,
    })
}

/// Run `trials` random instances of one theorem; results in trial order.
pub fn sweep(
    theorem_id: &str,
    trials: usize,
    master_seed: u64,
    nmax: usize,
    window: &Interval,
    ctx: &CheckContext,
) -> Result<Vec<CheckResult>> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let specs: Vec<InstanceSpec> = (0..trials)
        .map(|i| generate_spec(theorem_id, derive_seed(master_seed, i as u64), nmax, window))
        .collect::<Result<_>>()?;
    specs
        .par_iter()
        .map(|spec| run_spec(spec, ctx))
        .collect::<Result<Vec<_>>>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    None,
    DropSymmetry,
    DropMonotoneWeight,
    DropConvexity,
}

impl std::str::FromStr for Perturbation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "drop-symmetry" => Ok(Self::DropSymmetry),
            "drop-monotone-weight" => Ok(Self::DropMonotoneWeight),
            "drop-convexity" => Ok(Self::DropConvexity),
            _ => Err(Error::UnknownId {
                kind: "perturbation",
                id: s.to_string(),
            }),
        }
    }
}

/// A reproducible violation discovered by [`hunt`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finding {
    pub spec: InstanceSpec,
    pub result: CheckResult,
}

/// Random search for violations. Under `Perturbation::None` instances stay in
/// the admissible class and findings indicate bugs or genuine failures; under
/// a drop-perturbation the named hypothesis is deliberately broken, gating is
/// bypassed, and violations are the expected outcome.
pub fn hunt(
    theorem_id: &str,
    trials: usize,
    master_seed: u64,
    perturbation: Perturbation,
    ctx: &CheckContext,
) -> Result<Vec<Finding>> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let ctx = CheckContext {
        force: perturbation != Perturbation::None,
        ..*ctx
    };
    let specs: Vec<InstanceSpec> = (0..trials)
        .map(|i| {
            let trial_seed = derive_seed(master_seed, i as u64);
            let mut spec = generate_spec(
                theorem_id,
                trial_seed,
                4,
                &DEFAULT_SPECTRAL_WINDOW,
            )?;
            perturb(&mut spec, perturbation, trial_seed);
            Ok(spec)
        })
        .collect::<Result<_>>()?;
    let results: Vec<CheckResult> = specs
        .par_iter()
        .map(|spec| run_spec(spec, &ctx))
        .collect::<Result<_>>()?;
    Ok(specs
        .into_iter()
        .zip(results)
        .filter(|(_, r)| r.verdict == Verdict::Violated)
        .map(|(spec, result)| Finding { spec, result })
        .collect())
}

/// Swap in an inadmissible ingredient for the dropped hypothesis.
fn perturb(spec: &mut InstanceSpec, perturbation: Perturbation, trial_seed: u64) {
    let mut rng = SplitMix64::new(derive_seed(trial_seed, 4));
    match perturbation {
        Perturbation::None => {}
        Perturbation::DropSymmetry => {
            if spec.weight_id.is_some() || spec.weight_recipe.is_some() {
                spec.weight_id = Some("asym".to_string());
                spec.weight_recipe = None;
            }
        }
        Perturbation::DropMonotoneWeight => {
            if spec.weight_id.is_some() || spec.weight_recipe.is_some() {
                spec.weight_id = Some("vee".to_string());
                spec.weight_recipe = None;
                // Pair the decreasing-first-half weight with functions whose
                // mass sits at the endpoints; shiftsq is the sharp example.
                let fns = ["shiftsq", "square", "exp", "abs_shift"];
                spec.function_id = fns[rng.next_range(fns.len())].to_string();
            }
        }
        Perturbation::DropConvexity => {
            spec.function_id = "neg_shiftsq".to_string();
            spec.second_function_id = None;
            spec.mode = None;
        }
    }
}
