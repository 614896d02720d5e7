//! One checker per inequality. Each checker evaluates both sides with the
//! same quadrature rule (so discretization bias cancels in the margins) and
//! returns a [`CheckResult`] with per-index slack detail, a worst margin and
//! a verdict.
//!
//! Violations and hypothesis failures are distinct outcomes: an instance that
//! fails a required hypothesis flag is reported as `hypothesis-unmet`, never
//! as a refutation, unless the caller forces a real evaluation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{
    check_synchronous, secant_coeffs, beta_max, ScalarFunction, Synchrony, WeightFunction,
};
use crate::linalg::{
    apply_function, convex_path, eig_hermitian, matrix_log, HermitianMatrix, Interval,
};
use crate::orders::{
    eigen_leq, loewner_leq, weak_majorize, weak_majorize_vectors, OrderVerdict, Tolerances,
};
use crate::quadrature::{
    integrate_matrix_pieces, integrate_scalar_pieces, normalize_weight, weight_total,
    QuadratureRule,
};

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };
const SYNCHRONY_GRID: usize = 201;

/// Stable theorem vocabulary used by the CLI and the report format.
pub const THEOREM_IDS: [&str; 13] = [
    "scalar-levin-steckin",
    "scalar-fejer",
    "matrix-fejer-lower",
    "matrix-fejer-upper",
    "log-fejer",
    "eig-product-fejer",
    "general-levin-steckin",
    "moment-corollary",
    "operator-levin-steckin",
    "mond-pecaric-reverse",
    "chebyshev-variance",
    "levin-steckin-refined",
    "chebyshev-am-bound",
];

pub fn is_matrix_theorem(id: &str) -> bool {
    matches!(
        id,
        "matrix-fejer-lower"
            | "matrix-fejer-upper"
            | "log-fejer"
            | "eig-product-fejer"
            | "operator-levin-steckin"
            | "mond-pecaric-reverse"
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Violated,
    HypothesisUnmet,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisItem {
    pub name: String,
    pub satisfied: bool,
}

/// Named scalar inequality slack with the tolerance it was judged against.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlackRecord {
    pub name: String,
    pub value: f64,
    pub allowance: f64,
}

/// Replay recipe for a randomly generated admissible weight.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeightRecipe {
    pub seed: u64,
    pub knots: usize,
}

/// Everything needed to reproduce one check instance.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_function_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_recipe: Option<WeightRecipe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Synchrony>,
    pub rule: QuadratureRule,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub theorem_id: String,
    pub instance: InstanceDescriptor,
    pub order_verdicts: Vec<OrderVerdict>,
    pub scalar_slacks: Vec<SlackRecord>,
    /// Diagnostic quantities (chain values, brackets, beta, products, ...).
    pub extra: BTreeMap<String, f64>,
    /// Worst slack over all verdict components; absent when not evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub verdict: Verdict,
    pub hypothesis_report: Vec<HypothesisItem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Shared evaluation settings.
#[derive(Debug, Clone, Copy)]
pub struct CheckContext {
    pub rule: QuadratureRule,
    pub tols: Tolerances,
    /// Evaluate even when a required hypothesis flag is unmet.
    pub force: bool,
}

impl Default for CheckContext {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::default(),
            tols: Tolerances::default(),
            force: false,
        }
    }
}

/// Accumulates the pieces of a result; finishes into a verdict.
struct ResultBuilder {
    theorem_id: String,
    instance: InstanceDescriptor,
    hypotheses: Vec<HypothesisItem>,
    order_verdicts: Vec<OrderVerdict>,
    scalar_slacks: Vec<SlackRecord>,
    extra: BTreeMap<String, f64>,
}

impl ResultBuilder {
    fn new(theorem_id: &str, instance: InstanceDescriptor) -> Self {
        Self {
            theorem_id: theorem_id.to_string(),
            instance,
            hypotheses: Vec::new(),
            order_verdicts: Vec::new(),
            scalar_slacks: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    fn require(&mut self, name: &str, satisfied: bool) {
        self.hypotheses.push(HypothesisItem {
            name: name.to_string(),
            satisfied,
        });
    }

    fn all_hypotheses_met(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }

    fn slack(&mut self, name: &str, value: f64, scale: f64, tols: &Tolerances) {
        self.scalar_slacks.push(SlackRecord {
            name: name.to_string(),
            value,
            allowance: tols.allowance(scale),
        });
    }

    fn note(&mut self, name: &str, value: f64) {
        self.extra.insert(name.to_string(), value);
    }

    fn unmet(self) -> CheckResult {
        CheckResult {
            theorem_id: self.theorem_id,
            instance: self.instance,
            order_verdicts: Vec::new(),
            scalar_slacks: Vec::new(),
            extra: self.extra,
            margin: None,
            verdict: Verdict::HypothesisUnmet,
            hypothesis_report: self.hypotheses,
            error: None,
        }
    }

    fn finish(self) -> CheckResult {
        let mut margin = f64::INFINITY;
        let mut ok = true;
        for v in &self.order_verdicts {
            margin = margin.min(v.margin);
            ok &= v.holds;
        }
        for s in &self.scalar_slacks {
            margin = margin.min(s.value);
            ok &= s.value >= -s.allowance;
        }
        CheckResult {
            theorem_id: self.theorem_id,
            instance: self.instance,
            order_verdicts: self.order_verdicts,
            scalar_slacks: self.scalar_slacks,
            extra: self.extra,
            margin: (margin.is_finite()).then_some(margin),
            verdict: if ok { Verdict::Pass } else { Verdict::Violated },
            hypothesis_report: self.hypotheses,
            error: None,
        }
    }

    fn error(self, err: &Error) -> CheckResult {
        CheckResult {
            theorem_id: self.theorem_id,
            instance: self.instance,
            order_verdicts: self.order_verdicts,
            scalar_slacks: self.scalar_slacks,
            extra: self.extra,
            margin: None,
            verdict: Verdict::Error,
            hypothesis_report: self.hypotheses,
            error: Some(err.to_string()),
        }
    }
}

fn descriptor_scalar(
    f: &ScalarFunction,
    p: Option<&WeightFunction>,
    ctx: &CheckContext,
) -> InstanceDescriptor {
    InstanceDescriptor {
        function_id: Some(f.id().to_string()),
        weight_id: p.map(|w| w.id().to_string()),
        rule: ctx.rule,
        ..Default::default()
    }
}

/// Weighted scalar integral over [0,1] honoring the weight's kinks.
fn wint<G: Fn(f64) -> f64>(
    p: &WeightFunction,
    g: G,
    rule: &QuadratureRule,
) -> Result<f64> {
    integrate_scalar_pieces(|t| p.eval(t) * g(t), &UNIT, rule, p.kinks())
}

fn spectra_hull(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Interval> {
    let da = eig_hermitian(a)?;
    let db = eig_hermitian(b)?;
    Ok(da.spectral_interval().hull(&db.spectral_interval()))
}

/// `integral of p(t) f((1-t)A + tB) dt`.
fn weighted_path_integral(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rule: &QuadratureRule,
) -> Result<HermitianMatrix> {
    integrate_matrix_pieces(
        |t| Ok(apply_function(f, &convex_path(a, b, t)?)?.scale(p.eval(t))),
        &UNIT,
        rule,
        p.kinks(),
    )
}

/// `integral of f((1-t)A + tB) dt` with unit weight.
fn path_integral(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    rule: &QuadratureRule,
) -> Result<HermitianMatrix> {
    integrate_matrix_pieces(
        |t| apply_function(f, &convex_path(a, b, t)?),
        &UNIT,
        rule,
        &[],
    )
}

// ---------------------------------------------------------------------------
// Scalar checkers
// ---------------------------------------------------------------------------

/// `int p f <= int p * int f` on [0,1] for convex f and a symmetric weight
/// non-decreasing on the first half.
pub fn check_scalar_levin_steckin(
    f: &ScalarFunction,
    p: &WeightFunction,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("scalar-levin-steckin", descriptor_scalar(f, Some(p), ctx));
    rb.require("f.convex", f.flags.convex);
    rb.require("f.domain_contains_unit", f.contains_interval(&UNIT));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nondecreasing_first_half", p.flags.nondecreasing_first_half);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let i_p = weight_total(p, &ctx.rule)?;
        let i_f = integrate_scalar_pieces(|t| f.eval(t), &UNIT, &ctx.rule, &[])?;
        let i_pf = wint(p, |t| f.eval(t), &ctx.rule)?;
        rb.note("int_p", i_p);
        rb.note("int_f", i_f);
        rb.note("int_pf", i_pf);
        let scale = (i_p * i_f).abs().max(i_pf.abs());
        rb.slack("levin-steckin", i_p * i_f - i_pf, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Both Fejér bounds on [a,b]:
/// `int p * f(mid) <= int p(t) f((1-t)a+tb) dt <= int p * (f(a)+f(b))/2`.
pub fn check_scalar_fejer(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: f64,
    b: f64,
    ctx: &CheckContext,
) -> CheckResult {
    let mut inst = descriptor_scalar(f, Some(p), ctx);
    inst.interval = Interval::new(a, b).ok();
    let mut rb = ResultBuilder::new("scalar-fejer", inst);
    let seg = Interval { lo: a.min(b), hi: a.max(b) };
    rb.require("f.convex", f.flags.convex);
    rb.require("f.domain_contains_segment", f.contains_interval(&seg));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nonnegative", p.flags.nonnegative);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let i_p = weight_total(p, &ctx.rule)?;
        let mid = f.eval(0.5 * (a + b));
        let i_path = wint(p, |t| f.eval((1.0 - t) * a + t * b), &ctx.rule)?;
        let left = i_p * mid;
        let right = i_p * 0.5 * (f.eval(a) + f.eval(b));
        rb.note("chain_left", left);
        rb.note("chain_middle", i_path);
        rb.note("chain_right", right);
        let scale = left.abs().max(i_path.abs()).max(right.abs());
        rb.slack("fejer-lower", i_path - left, scale, &ctx.tols);
        rb.slack("fejer-upper", right - i_path, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// First-order Levin–Stečkin bounds valid for any continuous nonnegative p.
pub fn check_general_levin_steckin(
    f: &ScalarFunction,
    p: &WeightFunction,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("general-levin-steckin", descriptor_scalar(f, Some(p), ctx));
    rb.require("f.convex", f.flags.convex);
    rb.require("f.differentiable", f.differentiable());
    rb.require("f.domain_contains_unit", f.contains_interval(&UNIT));
    rb.require("p.nonnegative", p.flags.nonnegative);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let rule = &ctx.rule;
        let i_p = weight_total(p, rule)?;
        let i_f = integrate_scalar_pieces(|t| f.eval(t), &UNIT, rule, &[])?;
        let i_pf = wint(p, |t| f.eval(t), rule)?;
        let i_df = integrate_scalar_pieces(|t| f.deriv(t).unwrap_or(f64::NAN), &UNIT, rule, &[])?;
        let i_tdf =
            integrate_scalar_pieces(|t| t * f.deriv(t).unwrap_or(f64::NAN), &UNIT, rule, &[])?;
        let i_tp = crate::quadrature::weight_first_moment(p, rule)?;
        let i_pdf = wint(p, |t| f.deriv(t).unwrap_or(f64::NAN), rule)?;
        let i_ptdf = wint(p, |t| t * f.deriv(t).unwrap_or(f64::NAN), rule)?;
        // (i)  int f int p + (int f' int tp - int tf' int p) <= int p f
        let bound1 = i_f * i_p + (i_df * i_tp - i_tdf * i_p);
        // (ii) int p f + (1/2) int p f' - int p t f' <= int p int f
        let bound2 = i_pf + 0.5 * i_pdf - i_ptdf;
        rb.note("first_order_lower", bound1);
        rb.note("first_order_upper_lhs", bound2);
        rb.note("int_pf", i_pf);
        rb.note("int_p_int_f", i_p * i_f);
        let scale = [i_pf, bound1, bound2, i_p * i_f]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        rb.slack("below-int-pf", i_pf - bound1, scale, &ctx.tols);
        rb.slack("below-product", i_p * i_f - bound2, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// `int f' int tp <= int tf' int p` for LS-admissible weights.
pub fn check_moment_corollary(
    f: &ScalarFunction,
    p: &WeightFunction,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("moment-corollary", descriptor_scalar(f, Some(p), ctx));
    rb.require("f.convex", f.flags.convex);
    rb.require("f.differentiable", f.differentiable());
    rb.require("f.domain_contains_unit", f.contains_interval(&UNIT));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nondecreasing_first_half", p.flags.nondecreasing_first_half);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let rule = &ctx.rule;
        let i_p = weight_total(p, rule)?;
        let i_tp = crate::quadrature::weight_first_moment(p, rule)?;
        let i_df = integrate_scalar_pieces(|t| f.deriv(t).unwrap_or(f64::NAN), &UNIT, rule, &[])?;
        let i_tdf =
            integrate_scalar_pieces(|t| t * f.deriv(t).unwrap_or(f64::NAN), &UNIT, rule, &[])?;
        let lhs = i_df * i_tp;
        let rhs = i_tdf * i_p;
        rb.note("lhs", lhs);
        rb.note("rhs", rhs);
        rb.slack("moment", rhs - lhs, lhs.abs().max(rhs.abs()), &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynchronyMode {
    Synchronous,
    Asynchronous,
}

/// Variance-bracketed Čebyšev functional on [a,b].
pub fn check_chebyshev_variance(
    f: &ScalarFunction,
    g: &ScalarFunction,
    a: f64,
    b: f64,
    mode: SynchronyMode,
    ctx: &CheckContext,
) -> CheckResult {
    let mut inst = descriptor_scalar(f, None, ctx);
    inst.second_function_id = Some(g.id().to_string());
    inst.interval = Interval::new(a.min(b), a.max(b)).ok();
    inst.mode = Some(match mode {
        SynchronyMode::Synchronous => Synchrony::Synchronous,
        SynchronyMode::Asynchronous => Synchrony::Asynchronous,
    });
    let mut rb = ResultBuilder::new("chebyshev-variance", inst);
    let seg = Interval { lo: a.min(b), hi: a.max(b) };
    let sync = match check_synchronous(f, g, &seg, SYNCHRONY_GRID) {
        Ok(r) => r.classification,
        Err(e) => return rb.error(&e),
    };
    let want = match mode {
        SynchronyMode::Synchronous => Synchrony::Synchronous,
        SynchronyMode::Asynchronous => Synchrony::Asynchronous,
    };
    rb.require("synchrony_matches_mode", sync == want);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let rule = &ctx.rule;
        let len = seg.length();
        let mean = |h: &ScalarFunction| -> Result<f64> {
            Ok(integrate_scalar_pieces(|t| h.eval(t), &seg, rule, &[])? / len)
        };
        let mean_sq = |h: &ScalarFunction| -> Result<f64> {
            Ok(integrate_scalar_pieces(|t| h.eval(t) * h.eval(t), &seg, rule, &[])? / len)
        };
        let mf = mean(f)?;
        let mg = mean(g)?;
        let mfg = integrate_scalar_pieces(|t| f.eval(t) * g.eval(t), &seg, rule, &[])? / len;
        let var_f = mean_sq(f)? - mf * mf;
        let var_g = mean_sq(g)? - mg * mg;
        let middle = match mode {
            SynchronyMode::Synchronous => mfg - mf * mg,
            SynchronyMode::Asynchronous => mf * mg - mfg,
        };
        rb.note("var_f", var_f);
        rb.note("var_g", var_g);
        rb.note("middle", middle);
        let scale = var_f.abs().max(var_g.abs()).max(middle.abs());
        rb.slack("above-min-variance", middle - var_f.min(var_g), scale, &ctx.tols);
        rb.slack("below-max-variance", var_f.max(var_g) - middle, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Levin–Stečkin with the min-bracket correction term, as printed.
pub fn check_levin_steckin_refined(
    f: &ScalarFunction,
    p: &WeightFunction,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("levin-steckin-refined", descriptor_scalar(f, Some(p), ctx));
    rb.require("f.convex", f.flags.convex);
    rb.require("f.domain_contains_unit", f.contains_interval(&UNIT));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nondecreasing_first_half", p.flags.nondecreasing_first_half);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let rule = &ctx.rule;
        let half = Interval { lo: 0.0, hi: 0.5 };
        let i_p = weight_total(p, rule)?;
        let i_f = integrate_scalar_pieces(|t| f.eval(t), &UNIT, rule, &[])?;
        let i_pf = wint(p, |t| f.eval(t), rule)?;
        let p_sq_half =
            integrate_scalar_pieces(|t| p.eval(t) * p.eval(t), &half, rule, p.kinks())?;
        let bracket_p = 2.0 * p_sq_half - i_p * i_p;
        let sym = |t: f64| f.eval(t) + f.eval(1.0 - t);
        let f_sq_half = integrate_scalar_pieces(|t| sym(t) * sym(t), &half, rule, &[])?;
        let f_sym_mean = 0.5 * integrate_scalar_pieces(sym, &UNIT, rule, &[])?;
        let bracket_f = 0.5 * f_sq_half - f_sym_mean * f_sym_mean;
        rb.note("bracket_p", bracket_p);
        rb.note("bracket_f", bracket_f);
        let correction = bracket_p.min(bracket_f);
        let rhs = i_p * i_f - correction;
        rb.note("int_pf", i_pf);
        rb.note("rhs", rhs);
        let scale = i_pf.abs().max(rhs.abs()).max((i_p * i_f).abs());
        rb.slack("refined", rhs - i_pf, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// `int fg - int f int g <= (Var f + Var g)/2` on [0,1].
pub fn check_chebyshev_am_bound(
    f: &ScalarFunction,
    g: &ScalarFunction,
    ctx: &CheckContext,
) -> CheckResult {
    let mut inst = descriptor_scalar(f, None, ctx);
    inst.second_function_id = Some(g.id().to_string());
    let mut rb = ResultBuilder::new("chebyshev-am-bound", inst);
    let sync = match check_synchronous(f, g, &UNIT, SYNCHRONY_GRID) {
        Ok(r) => r.classification,
        Err(e) => return rb.error(&e),
    };
    rb.require("synchronous", sync == Synchrony::Synchronous);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let rule = &ctx.rule;
        let i_f = integrate_scalar_pieces(|t| f.eval(t), &UNIT, rule, &[])?;
        let i_g = integrate_scalar_pieces(|t| g.eval(t), &UNIT, rule, &[])?;
        let i_fg = integrate_scalar_pieces(|t| f.eval(t) * g.eval(t), &UNIT, rule, &[])?;
        let var_f =
            integrate_scalar_pieces(|t| f.eval(t) * f.eval(t), &UNIT, rule, &[])? - i_f * i_f;
        let var_g =
            integrate_scalar_pieces(|t| g.eval(t) * g.eval(t), &UNIT, rule, &[])? - i_g * i_g;
        let cheb = i_fg - i_f * i_g;
        rb.note("var_f", var_f);
        rb.note("var_g", var_g);
        rb.note("chebyshev_functional", cheb);
        let scale = var_f.abs().max(var_g.abs()).max(cheb.abs());
        rb.slack("am-bound", 0.5 * (var_f + var_g) - cheb, scale, &ctx.tols);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

// ---------------------------------------------------------------------------
// Matrix checkers
// ---------------------------------------------------------------------------

fn descriptor_matrix(
    f: &ScalarFunction,
    p: Option<&WeightFunction>,
    a: &HermitianMatrix,
    ctx: &CheckContext,
) -> InstanceDescriptor {
    InstanceDescriptor {
        function_id: Some(f.id().to_string()),
        weight_id: p.map(|w| w.id().to_string()),
        n: Some(a.dim()),
        rule: ctx.rule,
        ..Default::default()
    }
}

/// Weak-majorization Fejér lower bound:
/// `lambda(int p dt * f((A+B)/2)) prec_w lambda(int p f(path) dt)`.
pub fn check_matrix_fejer_lower(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("matrix-fejer-lower", descriptor_matrix(f, Some(p), a, ctx));
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    rb.require("f.convex", f.flags.convex);
    rb.require("f.domain_contains_spectra", f.contains_interval(&hull));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nonnegative", p.flags.nonnegative);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let wt = weight_total(p, &ctx.rule)?;
        let mid = convex_path(a, b, 0.5)?;
        let lhs = apply_function(f, &mid)?.scale(wt);
        let rhs = weighted_path_integral(f, p, a, b, &ctx.rule)?;
        rb.order_verdicts.push(weak_majorize(&lhs, &rhs, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Eigenvalue-wise Fejér upper bound for monotone convex f:
/// `lambda(int p f(path)) <= lambda(int p dt * (f(A)+f(B))/2)`.
pub fn check_matrix_fejer_upper(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("matrix-fejer-upper", descriptor_matrix(f, Some(p), a, ctx));
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    rb.require("f.convex", f.flags.convex);
    rb.require("f.monotone_on_spectra", f.is_monotone_on(&hull));
    rb.require("f.domain_contains_spectra", f.contains_interval(&hull));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nonnegative", p.flags.nonnegative);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let wt = weight_total(p, &ctx.rule)?;
        let lhs = weighted_path_integral(f, p, a, b, &ctx.rule)?;
        let rhs = apply_function(f, a)?
            .add(&apply_function(f, b)?)?
            .scale(0.5 * wt);
        rb.order_verdicts.push(eigen_leq(&lhs, &rhs, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Log-convex Fejér:
/// `lambda(log f((A+B)/2)) prec_w lambda(log int p f(path) dt)` with p
/// normalized to unit mass first.
pub fn check_log_fejer(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("log-fejer", descriptor_matrix(f, Some(p), a, ctx));
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    rb.require("f.log_convex", f.flags.log_convex);
    rb.require("f.positive_on_spectra", f.is_positive_on(&hull));
    rb.require("f.domain_contains_spectra", f.contains_interval(&hull));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.strictly_positive", p.flags.strictly_positive);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let pn = normalize_weight(p, &ctx.rule)?;
        let mid = convex_path(a, b, 0.5)?;
        let lhs = matrix_log(&apply_function(f, &mid)?)?;
        let rhs = matrix_log(&weighted_path_integral(f, &pn, a, b, &ctx.rule)?)?;
        rb.order_verdicts.push(weak_majorize(&lhs, &rhs, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Partial eigenvalue products of `f((A+B)/2)` against those of
/// `int p f(path) dt`, via weak majorization of the logs.
pub fn check_eig_product_fejer(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb = ResultBuilder::new("eig-product-fejer", descriptor_matrix(f, Some(p), a, ctx));
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    rb.require("f.log_convex", f.flags.log_convex);
    rb.require("f.positive_on_spectra", f.is_positive_on(&hull));
    rb.require("f.domain_contains_spectra", f.contains_interval(&hull));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.strictly_positive", p.flags.strictly_positive);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let pn = normalize_weight(p, &ctx.rule)?;
        let mid = convex_path(a, b, 0.5)?;
        let lam_l = eig_hermitian(&apply_function(f, &mid)?)?.eigenvalues;
        let lam_r = eig_hermitian(&weighted_path_integral(f, &pn, a, b, &ctx.rule)?)?.eigenvalues;
        for lam in lam_l.iter().chain(&lam_r) {
            if *lam <= crate::linalg::POSITIVITY_FLOOR {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: *lam,
                });
            }
        }
        let log_l: Vec<f64> = lam_l.iter().map(|x| x.ln()).collect();
        let log_r: Vec<f64> = lam_r.iter().map(|x| x.ln()).collect();
        let mut prod = 1.0;
        for (k, &l) in lam_l.iter().enumerate() {
            prod *= l;
            rb.note(&format!("lhs_product_k{}", k + 1), prod);
        }
        prod = 1.0;
        for (k, &l) in lam_r.iter().enumerate() {
            prod *= l;
            rb.note(&format!("rhs_product_k{}", k + 1), prod);
        }
        rb.order_verdicts
            .push(weak_majorize_vectors(&log_l, &log_r, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Operator Levin–Stečkin in Loewner order:
/// `int p f(path) <= int p dt * int f(path)`.
pub fn check_operator_levin_steckin(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    ctx: &CheckContext,
) -> CheckResult {
    let mut rb =
        ResultBuilder::new("operator-levin-steckin", descriptor_matrix(f, Some(p), a, ctx));
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    rb.require("f.operator_convex", f.flags.operator_convex);
    rb.require("f.domain_contains_spectra", f.contains_interval(&hull));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nonnegative", p.flags.nonnegative);
    rb.require("p.nondecreasing_first_half", p.flags.nondecreasing_first_half);
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let wt = weight_total(p, &ctx.rule)?;
        let lhs = weighted_path_integral(f, p, a, b, &ctx.rule)?;
        let rhs = path_integral(f, a, b, &ctx.rule)?.scale(wt);
        rb.order_verdicts.push(loewner_leq(&lhs, &rhs, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

/// Mond–Pečarić reverse:
/// `int p dt * int f(path) <= beta int p dt * I + alpha int p f(path)`.
pub fn check_mond_pecaric_reverse(
    f: &ScalarFunction,
    p: &WeightFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    alpha: f64,
    m_override: Option<f64>,
    big_m_override: Option<f64>,
    ctx: &CheckContext,
) -> CheckResult {
    let mut inst = descriptor_matrix(f, Some(p), a, ctx);
    inst.alpha = Some(alpha);
    let mut rb = ResultBuilder::new("mond-pecaric-reverse", inst);
    if alpha < 0.0 {
        return rb.error(&Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    let hull = match spectra_hull(a, b) {
        Ok(h) => h,
        Err(e) => return rb.error(&e),
    };
    let m = m_override.unwrap_or(hull.lo);
    let big_m = big_m_override.unwrap_or(hull.hi);
    rb.note("m", m);
    rb.note("M", big_m);
    let spectral_box = Interval { lo: m, hi: big_m.max(m) };
    rb.require("f.convex", f.flags.convex);
    rb.require("f.domain_contains_interval", f.contains_interval(&spectral_box));
    rb.require("p.symmetric", p.flags.symmetric);
    rb.require("p.nonnegative", p.flags.nonnegative);
    rb.require(
        "spectra_within_m_M",
        hull.lo >= m - 1e-10 && hull.hi <= big_m + 1e-10,
    );
    if !rb.all_hypotheses_met() && !ctx.force {
        return rb.unmet();
    }
    match (|| -> Result<()> {
        let beta = if big_m - m <= 1e-12 {
            // Degenerate spectra: f is constant there and the reverse bound
            // collapses to the scalar identity with beta = (1-alpha) f(m).
            (1.0 - alpha) * f.eval(m)
        } else {
            let sc = secant_coeffs(f, m, big_m)?;
            rb.note("a_f", sc.a_f);
            rb.note("b_f", sc.b_f);
            beta_max(f, m, big_m, alpha)?
        };
        rb.note("beta", beta);
        let wt = weight_total(p, &ctx.rule)?;
        let lhs = path_integral(f, a, b, &ctx.rule)?.scale(wt);
        let rhs = weighted_path_integral(f, p, a, b, &ctx.rule)?
            .scale(alpha)
            .add_scalar(beta * wt);
        rb.order_verdicts.push(loewner_leq(&lhs, &rhs, &ctx.tols)?);
        Ok(())
    })() {
        Ok(()) => rb.finish(),
        Err(e) => rb.error(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{lookup_function, lookup_weight};
    use std::f64::consts::E;

    fn ctx() -> CheckContext {
        CheckContext::default()
    }

    fn forced() -> CheckContext {
        CheckContext {
            force: true,
            ..CheckContext::default()
        }
    }

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn scalar_ls_equality_for_unit_weight() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_scalar_levin_steckin(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn scalar_ls_tent_passes() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("tent").unwrap();
        let r = check_scalar_levin_steckin(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        // Analytic: int p f = 7/96, int p int f = 1/12; slack = 1/96.
        approx(r.margin.unwrap(), 1.0 / 96.0, 1e-10);
    }

    #[test]
    fn scalar_ls_negative_control() {
        let f = lookup_function("shiftsq").unwrap();
        let p = lookup_weight("vee").unwrap();
        let gated = check_scalar_levin_steckin(&f, &p, &ctx());
        assert_eq!(gated.verdict, Verdict::HypothesisUnmet);

        let r = check_scalar_levin_steckin(&f, &p, &forced());
        assert_eq!(r.verdict, Verdict::Violated);
        // int p f = 1/32, int p = 1/4, int f = 1/12: slack = 1/48 - 1/32 = -1/96.
        approx(r.margin.unwrap(), -1.0 / 96.0, 1e-10);
    }

    #[test]
    fn scalar_fejer_hermite_hadamard() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_scalar_fejer(&f, &p, 0.0, 1.0, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["chain_left"], 0.25, 1e-10);
        approx(r.extra["chain_middle"], 1.0 / 3.0, 1e-10);
        approx(r.extra["chain_right"], 0.5, 1e-10);
        approx(r.scalar_slacks[0].value, 1.0 / 12.0, 1e-10);
        approx(r.scalar_slacks[1].value, 1.0 / 6.0, 1e-10);
    }

    #[test]
    fn scalar_fejer_affine_equality() {
        let f = lookup_function("affine").unwrap();
        let p = lookup_weight("parabola_bump").unwrap();
        let r = check_scalar_fejer(&f, &p, 0.0, 1.0, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn scalar_fejer_exp_against_fine_oracle() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("parabola_bump").unwrap();
        let r = check_scalar_fejer(&f, &p, 0.0, 1.0, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        // Trapezoid oracle with 1e6 points for the weighted path integral.
        let n = 1_000_000usize;
        let h = 1.0 / n as f64;
        let mut oracle = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            oracle += w * h * t * (1.0 - t) * t.exp();
        }
        approx(r.extra["chain_middle"], oracle, 1e-9);
    }

    #[test]
    fn general_ls_square_one() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_general_levin_steckin(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.scalar_slacks[0].value, 1.0 / 6.0, 1e-10);
        approx(r.scalar_slacks[1].value, 1.0 / 6.0, 1e-10);
    }

    #[test]
    fn general_ls_affine_is_tight() {
        let f = lookup_function("affine").unwrap();
        for p in ["one", "tent", "asym", "parabola_bump"] {
            let p = lookup_weight(p).unwrap();
            let r = check_general_levin_steckin(&f, &p, &ctx());
            assert_eq!(r.verdict, Verdict::Pass);
            approx(r.margin.unwrap(), 0.0, 1e-10);
        }
    }

    #[test]
    fn general_ls_exp_asym() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("asym").unwrap();
        let r = check_general_levin_steckin(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        // Analytic moments: int tp = 1/3, int pf' = int t e^t = 1,
        // int p t f' = int t^2 e^t = e - 2, int pf = 1, int p = 1/2,
        // int f = int f' = e - 1, int tf' = 1.
        let slack1 = 1.0 - ((E - 1.0) * 0.5 + ((E - 1.0) / 3.0 - 0.5));
        approx(r.scalar_slacks[0].value, slack1, 1e-10);
        let slack2 = 0.5 * (E - 1.0) - (1.0 + 0.5 - (E - 2.0));
        approx(r.scalar_slacks[1].value, slack2, 1e-10);
    }

    #[test]
    fn general_ls_requires_derivative() {
        let f = lookup_function("abs_shift").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_general_levin_steckin(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::HypothesisUnmet);
    }

    #[test]
    fn moment_corollary_examples() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_moment_corollary(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 1.0 / 6.0, 1e-10);

        let f = lookup_function("affine").unwrap();
        let p = lookup_weight("tent").unwrap();
        let r = check_moment_corollary(&f, &p, &ctx());
        approx(r.margin.unwrap(), 0.0, 1e-10);

        let f = lookup_function("exp").unwrap();
        let r = check_moment_corollary(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn chebyshev_variance_equal_functions() {
        let f = lookup_function("identity").unwrap();
        let r = check_chebyshev_variance(&f, &f, 0.0, 1.0, SynchronyMode::Synchronous, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["var_f"], 1.0 / 12.0, 1e-10);
        approx(r.extra["middle"], 1.0 / 12.0, 1e-10);
        approx(r.margin.unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn chebyshev_variance_asynchronous() {
        let f = lookup_function("identity").unwrap();
        let g = ScalarFunction::affine(1.0, -1.0);
        let r = check_chebyshev_variance(&f, &g, 0.0, 1.0, SynchronyMode::Asynchronous, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["middle"], 1.0 / 12.0, 1e-10);
        approx(r.margin.unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn chebyshev_variance_identity_square() {
        let f = lookup_function("identity").unwrap();
        let g = lookup_function("square").unwrap();
        let r = check_chebyshev_variance(&f, &g, 0.0, 1.0, SynchronyMode::Synchronous, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["var_g"], 4.0 / 45.0, 1e-10);
        approx(r.scalar_slacks[0].value, 0.0, 1e-10);
        approx(r.scalar_slacks[1].value, 4.0 / 45.0 - 1.0 / 12.0, 1e-10);
    }

    #[test]
    fn chebyshev_variance_mode_gate() {
        let f = lookup_function("identity").unwrap();
        let g = lookup_function("square").unwrap();
        let r = check_chebyshev_variance(&f, &g, 0.0, 1.0, SynchronyMode::Asynchronous, &ctx());
        assert_eq!(r.verdict, Verdict::HypothesisUnmet);
    }

    #[test]
    fn refined_ls_affine_degenerates() {
        let f = lookup_function("affine").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_levin_steckin_refined(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["bracket_p"], 0.0, 1e-10);
        approx(r.extra["bracket_f"], 0.0, 1e-10);
        approx(r.margin.unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn refined_ls_square_one() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let r = check_levin_steckin_refined(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["bracket_p"], 0.0, 1e-10);
        // f(t)+f(1-t) = 2t^2-2t+1: bracket = 7/30 - (2/3)^2/4... computed below.
        let n = 1_000_000usize;
        let h = 0.5 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let s = 2.0 * t * t - 2.0 * t + 1.0;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * h * s * s;
        }
        let mean = 2.0 / 3.0 / 2.0;
        approx(r.extra["bracket_f"], 0.5 * acc - mean * mean, 1e-8);
    }

    #[test]
    fn refined_ls_square_tent_against_oracle() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("tent").unwrap();
        let r = check_levin_steckin_refined(&f, &p, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        // Analytic: int pf = 7/96, int p int f = 1/12, brackets 1/48 and 1/180.
        approx(r.extra["bracket_p"], 1.0 / 48.0, 1e-10);
        approx(r.extra["bracket_f"], 1.0 / 180.0, 1e-10);
        approx(r.margin.unwrap(), 1.0 / 96.0 - 1.0 / 180.0, 1e-10);
    }

    #[test]
    fn am_bound_examples() {
        let f = lookup_function("identity").unwrap();
        let r = check_chebyshev_am_bound(&f, &f, &ctx());
        approx(r.margin.unwrap(), 0.0, 1e-10);

        let g = lookup_function("square").unwrap();
        let r = check_chebyshev_am_bound(&f, &g, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 1.0 / 360.0, 1e-10);

        let e = lookup_function("exp").unwrap();
        let r = check_chebyshev_am_bound(&f, &e, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn am_and_variance_brackets_agree() {
        // Both checkers compute Var(f), Var(g); they must agree to 1e-12.
        let f = lookup_function("identity").unwrap();
        let g = lookup_function("square").unwrap();
        let rv = check_chebyshev_variance(&f, &g, 0.0, 1.0, SynchronyMode::Synchronous, &ctx());
        let ra = check_chebyshev_am_bound(&f, &g, &ctx());
        approx(rv.extra["var_f"], ra.extra["var_f"], 1e-12);
        approx(rv.extra["var_g"], ra.extra["var_g"], 1e-12);
    }

    #[test]
    fn matrix_fejer_lower_diagonal() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_matrix_fejer_lower(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        let v = &r.order_verdicts[0];
        approx(v.detail[0], 1.0 / 12.0, 1e-9);
        approx(v.detail[1], 1.0 / 6.0, 1e-9);
    }

    #[test]
    fn matrix_fejer_lower_constant_path() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("tent").unwrap();
        let a = HermitianMatrix::from_real(2, &[0.5, 0.2, 0.2, -0.3]).unwrap();
        let r = check_matrix_fejer_lower(&f, &p, &a, &a, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 0.0, 1e-9);
    }

    #[test]
    fn matrix_fejer_upper_diagonal() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_matrix_fejer_upper(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        let v = &r.order_verdicts[0];
        approx(v.detail[0], 1.0 / 6.0, 1e-9);
        approx(v.detail[1], 1.0 / 6.0, 1e-9);
    }

    #[test]
    fn log_fejer_exp_diagonal() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_log_fejer(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        let v = &r.order_verdicts[0];
        let expected = (E - 1.0f64).ln() - 0.5;
        approx(v.detail[0], expected, 1e-8);
        approx(v.detail[1], 2.0 * expected, 1e-8);
    }

    #[test]
    fn eig_product_fejer_matches_log_slacks() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_eig_product_fejer(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["lhs_product_k1"], E.sqrt(), 1e-8);
        approx(r.extra["rhs_product_k1"], E - 1.0, 1e-8);
        approx(r.extra["lhs_product_k2"], E, 1e-8);
        approx(r.extra["rhs_product_k2"], (E - 1.0) * (E - 1.0), 1e-8);
        // Products equal exp of partial log-sums by construction.
        approx(
            r.extra["rhs_product_k2"].ln(),
            r.extra["rhs_product_k1"].ln() + (E - 1.0f64).ln(),
            1e-10,
        );
    }

    #[test]
    fn operator_ls_unit_weight_is_equality() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::from_real(2, &[1.0, 0.3, 0.3, 2.0]).unwrap();
        let b = HermitianMatrix::from_real(2, &[0.5, -0.1, -0.1, 1.5]).unwrap();
        let r = check_operator_levin_steckin(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 0.0, 1e-9);
    }

    #[test]
    fn operator_ls_square_tent_diagonal() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("tent").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_operator_levin_steckin(&f, &p, &a, &b, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn mond_pecaric_diagonal_example() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = check_mond_pecaric_reverse(&f, &p, &a, &b, 1.0, None, None, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["beta"], 0.25, 1e-9);
        approx(r.margin.unwrap(), 0.25, 1e-8);
    }

    #[test]
    fn mond_pecaric_alpha_zero() {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("tent").unwrap();
        let a = HermitianMatrix::from_real(2, &[0.5, 0.1, 0.1, -0.2]).unwrap();
        let b = HermitianMatrix::from_real(2, &[0.2, 0.0, 0.0, 0.8]).unwrap();
        let r = check_mond_pecaric_reverse(&f, &p, &a, &b, 0.0, None, None, &ctx());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn mond_pecaric_rejects_negative_alpha() {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let r = check_mond_pecaric_reverse(&f, &p, &a, &a, -1.0, None, None, &ctx());
        assert_eq!(r.verdict, Verdict::Error);
    }
}
