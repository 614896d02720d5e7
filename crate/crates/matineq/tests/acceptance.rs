//! End-to-end acceptance suite. Each test prints one `ACCEPTANCE <n>:
//! pass|FAIL` line (visible under `--nocapture`); the assertions behind the
//! line are the binding contract.

use std::panic::{catch_unwind, UnwindSafe};
use std::process::Command;
use std::time::Instant;

use matineq::checks::{self, CheckContext, Verdict};
use matineq::funcspace::{beta_max, lookup_function, lookup_weight};
use matineq::generators::{self, derive_seed, random_hermitian};
use matineq::linalg::{
    apply_function, eig_hermitian, matrix_log, HermitianMatrix, Interval,
};
use matineq::orders::{eigen_leq, loewner_leq, weak_majorize, weak_majorize_vectors, Tolerances};
use matineq::quadrature::{integrate_scalar_pieces, weight_total, QuadratureRule};
use matineq::report::RunReport;

fn criterion<F: FnOnce() + UnwindSafe>(n: usize, desc: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("ACCEPTANCE {n}: pass — {desc}"),
        Err(e) => {
            println!("ACCEPTANCE {n}: FAIL — {desc}");
            std::panic::resume_unwind(e);
        }
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matineq"))
}

fn run_report(args: &[&str]) -> (RunReport, i32) {
    let out = bin().args(args).output().expect("binary runs");
    let report: RunReport = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("report parse: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (report, out.status.code().unwrap_or(-1))
}

fn approx(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

#[test]
fn acceptance_01_hermite_hadamard_chain() {
    criterion(1, "Hermite-Hadamard chain 1/4 <= 1/3 <= 1/2", || {
        let start = Instant::now();
        let (report, code) = run_report(&[
            "verify",
            "--theorem",
            "scalar-fejer",
            "--f",
            "square",
            "--p",
            "one",
            "--a",
            "0",
            "--b",
            "1",
            "--no-timestamp",
        ]);
        assert_eq!(code, 0);
        let r = &report.results[0];
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.extra["chain_left"], 0.25, 1e-10);
        approx(r.extra["chain_middle"], 1.0 / 3.0, 1e-10);
        approx(r.extra["chain_right"], 0.5, 1e-10);
        assert!(start.elapsed().as_secs_f64() < 1.0);
    });
}

#[test]
fn acceptance_02_matrix_fejer_lower_diagonal() {
    criterion(2, "matrix Fejér lower partial-sum slacks (1/12, 1/6)", || {
        let f = lookup_function("square").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let start = Instant::now();
        let r = checks::check_matrix_fejer_lower(&f, &p, &a, &b, &CheckContext::default());
        assert_eq!(r.verdict, Verdict::Pass);
        let d = &r.order_verdicts[0].detail;
        approx(d[0], 1.0 / 12.0, 1e-9);
        approx(d[1], 1.0 / 6.0, 1e-9);
        assert!(start.elapsed().as_secs_f64() < 1.0);
    });
}

#[test]
fn acceptance_03_log_fejer_values() {
    criterion(3, "log-convex Fejér: 0.5 vs log(e-1); product corollary", || {
        let f = lookup_function("exp").unwrap();
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let ctx = CheckContext::default();
        let e = std::f64::consts::E;

        let mid = matineq::linalg::convex_path(&a, &b, 0.5).unwrap();
        let lhs_log = matrix_log(&apply_function(&f, &mid).unwrap()).unwrap();
        let lhs_eigs = eig_hermitian(&lhs_log).unwrap().eigenvalues;
        approx(lhs_eigs[0], 0.5, 1e-8);

        let r = checks::check_log_fejer(&f, &p, &a, &b, &ctx);
        assert_eq!(r.verdict, Verdict::Pass);
        // RHS top log-eigenvalue = detail[0] + LHS top = log(e-1).
        approx(r.order_verdicts[0].detail[0] + 0.5, 0.541324855, 1e-8);

        let rp = checks::check_eig_product_fejer(&f, &p, &a, &b, &ctx);
        assert_eq!(rp.verdict, Verdict::Pass);
        approx(rp.extra["lhs_product_k1"], e.sqrt(), 1e-8);
        approx(rp.extra["rhs_product_k1"], e - 1.0, 1e-8);
        approx(rp.extra["lhs_product_k2"], e, 1e-8);
        approx(rp.extra["rhs_product_k2"], (e - 1.0) * (e - 1.0), 1e-8);
        assert!(e.sqrt() <= e - 1.0 && e <= (e - 1.0) * (e - 1.0));
    });
}

#[test]
fn acceptance_04_reverse_beta() {
    criterion(4, "reverse-bound beta(square,0,1,1) = 1/4; margin 1/4", || {
        let f = lookup_function("square").unwrap();
        approx(beta_max(&f, 0.0, 1.0, 1.0).unwrap(), 0.25, 1e-9);
        let p = lookup_weight("one").unwrap();
        let a = HermitianMatrix::diagonal(&[0.0, 1.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let r = checks::check_mond_pecaric_reverse(
            &f,
            &p,
            &a,
            &b,
            1.0,
            None,
            None,
            &CheckContext::default(),
        );
        assert_eq!(r.verdict, Verdict::Pass);
        approx(r.margin.unwrap(), 0.25, 1e-8);
    });
}

#[test]
fn acceptance_05_negative_control() {
    criterion(5, "forced vee/shiftsq violation: slack -1/96", || {
        let (report, code) = run_report(&[
            "verify",
            "--theorem",
            "scalar-levin-steckin",
            "--f",
            "shiftsq",
            "--p",
            "vee",
            "--force",
            "--no-timestamp",
        ]);
        assert_eq!(code, 2);
        let r = &report.results[0];
        assert_eq!(r.verdict, Verdict::Violated);
        approx(r.extra["int_pf"], 0.03125, 1e-9);
        approx(r.extra["int_p"] * r.extra["int_f"], 0.0208333, 1e-6);
        approx(r.margin.unwrap(), -0.0104166, 1e-6);
        approx(r.margin.unwrap(), -1.0 / 96.0, 1e-9);
    });
}

#[test]
fn acceptance_06_property_sweep() {
    criterion(6, "full sweep clean; margins stable under panel doubling", || {
        let start = Instant::now();
        let args = [
            "sweep",
            "--theorem",
            "all",
            "--trials",
            "50",
            "--seed",
            "7",
            "--nmax",
            "5",
            "--no-timestamp",
        ];
        let (report, code) = run_report(&args);
        assert_eq!(code, 0);
        assert_eq!(report.summary.violated, 0);
        assert_eq!(report.summary.error, 0);
        assert_eq!(report.results.len(), 13 * 50);
        assert!(start.elapsed().as_secs_f64() < 60.0);

        let mut doubled = args.to_vec();
        doubled.extend(["--panels", "64"]);
        let (fine, code) = run_report(&doubled);
        assert_eq!(code, 0);
        for (c, f) in report.results.iter().zip(&fine.results) {
            if let (Some(mc), Some(mf)) = (c.margin, f.margin) {
                approx(mc, mf, 1e-8);
            }
        }
    });
}

#[test]
fn acceptance_07_order_chain() {
    criterion(7, "order chain on 500 random (A, A+PSD) pairs", || {
        let tols = Tolerances::default();
        for i in 0..500u64 {
            let n = 1 + (derive_seed(1000, i) % 8) as usize;
            let a = random_hermitian(derive_seed(2000, i), n, &Interval { lo: -2.0, hi: 2.0 });
            let psd = random_hermitian(derive_seed(3000, i), n, &Interval { lo: 0.0, hi: 1.5 });
            let b = a.add(&psd).unwrap();
            for v in [
                loewner_leq(&a, &b, &tols).unwrap(),
                eigen_leq(&a, &b, &tols).unwrap(),
                weak_majorize(&a, &b, &tols).unwrap(),
            ] {
                assert!(v.margin >= -1e-10, "trial {i}, {:?}: {}", v.kind, v.margin);
                assert!(v.holds);
            }
        }
    });
}

/// Scalar-only margin computation for a diagonal instance of one matrix
/// theorem: per-coordinate 1-D integrals, then the vector-order margin.
fn diagonal_oracle(
    theorem: &str,
    f_id: &str,
    p_id: &str,
    da: &[f64],
    db: &[f64],
    alpha: f64,
    rule: &QuadratureRule,
) -> f64 {
    let f = lookup_function(f_id).unwrap();
    let p = lookup_weight(p_id).unwrap();
    let tols = Tolerances::default();
    let wt = weight_total(&p, rule).unwrap();
    let path_int = |ai: f64, bi: f64, weighted: bool| -> f64 {
        integrate_scalar_pieces(
            |t| {
                let w = if weighted { p.eval(t) } else { 1.0 };
                w * f.eval((1.0 - t) * ai + t * bi)
            },
            &UNIT,
            rule,
            p.kinks(),
        )
        .unwrap()
    };
    let n = da.len();
    match theorem {
        "matrix-fejer-lower" => {
            let lhs: Vec<f64> = (0..n)
                .map(|i| wt * f.eval(0.5 * (da[i] + db[i])))
                .collect();
            let rhs: Vec<f64> = (0..n).map(|i| path_int(da[i], db[i], true)).collect();
            weak_majorize_vectors(&lhs, &rhs, &tols).unwrap().margin
        }
        "matrix-fejer-upper" => {
            let mut lhs: Vec<f64> = (0..n).map(|i| path_int(da[i], db[i], true)).collect();
            let mut rhs: Vec<f64> = (0..n)
                .map(|i| 0.5 * wt * (f.eval(da[i]) + f.eval(db[i])))
                .collect();
            lhs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            rhs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            lhs.iter()
                .zip(&rhs)
                .map(|(l, r)| r - l)
                .fold(f64::INFINITY, f64::min)
        }
        "log-fejer" | "eig-product-fejer" => {
            let lhs: Vec<f64> = (0..n)
                .map(|i| f.eval(0.5 * (da[i] + db[i])).ln())
                .collect();
            let rhs: Vec<f64> = (0..n)
                .map(|i| (path_int(da[i], db[i], true) / wt).ln())
                .collect();
            weak_majorize_vectors(&lhs, &rhs, &tols).unwrap().margin
        }
        "operator-levin-steckin" => (0..n)
            .map(|i| wt * path_int(da[i], db[i], false) - path_int(da[i], db[i], true))
            .fold(f64::INFINITY, f64::min),
        "mond-pecaric-reverse" => {
            let lo = da.iter().chain(db).cloned().fold(f64::INFINITY, f64::min);
            let hi = da
                .iter()
                .chain(db)
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            let beta = if hi - lo <= 1e-12 {
                (1.0 - alpha) * f.eval(lo)
            } else {
                beta_max(&f, lo, hi, alpha).unwrap()
            };
            (0..n)
                .map(|i| {
                    beta * wt + alpha * path_int(da[i], db[i], true)
                        - wt * path_int(da[i], db[i], false)
                })
                .fold(f64::INFINITY, f64::min)
        }
        _ => unreachable!(),
    }
}

#[test]
fn acceptance_08_diagonal_reduction_oracle() {
    criterion(8, "matrix margins match scalar oracles on diagonal instances", || {
        let ctx = CheckContext::default();
        let window = Interval { lo: 0.2, hi: 1.2 };
        let cases: [(&str, &str, &str); 6] = [
            ("matrix-fejer-lower", "square", "tent"),
            ("matrix-fejer-upper", "exp", "parabola_bump"),
            ("log-fejer", "exp", "one"),
            ("eig-product-fejer", "reciprocal", "one"),
            ("operator-levin-steckin", "xlogx", "plateau"),
            ("mond-pecaric-reverse", "square", "one"),
        ];
        for (theorem, f_id, p_id) in cases {
            for trial in 0..100u64 {
                let seed = derive_seed(777, trial * 13 + theorem.len() as u64);
                let n = 1 + (seed % 4) as usize;
                let da = generators::random_spectrum(seed, n, &window);
                let db = generators::random_spectrum(seed ^ 0x5555, n, &window);
                let a = HermitianMatrix::diagonal(&da);
                let b = HermitianMatrix::diagonal(&db);
                let f = lookup_function(f_id).unwrap();
                let p = lookup_weight(p_id).unwrap();
                let alpha = 1.0;
                let r = match theorem {
                    "matrix-fejer-lower" => checks::check_matrix_fejer_lower(&f, &p, &a, &b, &ctx),
                    "matrix-fejer-upper" => checks::check_matrix_fejer_upper(&f, &p, &a, &b, &ctx),
                    "log-fejer" => checks::check_log_fejer(&f, &p, &a, &b, &ctx),
                    "eig-product-fejer" => {
                        checks::check_eig_product_fejer(&f, &p, &a, &b, &ctx)
                    }
                    "operator-levin-steckin" => {
                        checks::check_operator_levin_steckin(&f, &p, &a, &b, &ctx)
                    }
                    "mond-pecaric-reverse" => checks::check_mond_pecaric_reverse(
                        &f, &p, &a, &b, alpha, None, None, &ctx,
                    ),
                    _ => unreachable!(),
                };
                assert_eq!(r.verdict, Verdict::Pass, "{theorem} trial {trial}");
                let oracle = diagonal_oracle(theorem, f_id, p_id, &da, &db, alpha, &ctx.rule);
                approx(r.margin.unwrap(), oracle, 1e-9);
            }
        }
    });
}

#[test]
fn acceptance_09_eigensolver_round_trips() {
    criterion(9, "reconstruction and log(exp(A)) round trips <= 1e-8", || {
        let exp = lookup_function("exp").unwrap();
        let window = Interval { lo: -3.0, hi: 3.0 };
        for i in 0..200u64 {
            let n = 1 + (derive_seed(42, i) % 12) as usize;
            let a = random_hermitian(derive_seed(4242, i), n, &window);

            let dec = eig_hermitian(&a).unwrap();
            let rec = dec.assemble(&dec.eigenvalues).unwrap();
            assert!(rec.sub(&a).unwrap().max_abs_entry() <= 1e-8, "trial {i}");

            let back = matrix_log(&apply_function(&exp, &a).unwrap()).unwrap();
            assert!(back.sub(&a).unwrap().max_abs_entry() <= 1e-8, "trial {i}");
        }
    });
}

#[test]
fn acceptance_10_replay() {
    criterion(10, "persisted findings replay to identical margins", || {
        let dir = tempfile::tempdir().unwrap();
        let status = bin()
            .args([
                "hunt",
                "--theorem",
                "scalar-levin-steckin",
                "--perturb",
                "drop-monotone-weight",
                "--trials",
                "25",
                "--seed",
                "3",
                "--expect",
                "violations",
                "--no-timestamp",
                "--out",
            ])
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(status.status.code(), Some(0));
        let mut replayed = 0;
        for entry in std::fs::read_dir(dir.path()).unwrap() {
            let path = entry.unwrap().path();
            let rec: matineq::report::CounterexampleRecord =
                serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
            let (report, code) = run_report(&[
                "verify",
                "--record",
                path.to_str().unwrap(),
                "--no-timestamp",
            ]);
            assert_eq!(code, 2);
            let r = &report.results[0];
            assert_eq!(r.verdict, rec.result.verdict);
            let diff = (r.margin.unwrap() - rec.result.margin.unwrap()).abs();
            assert!(diff <= 1e-12, "{path:?}: {diff}");
            replayed += 1;
        }
        assert!(replayed > 0);
    });
}
