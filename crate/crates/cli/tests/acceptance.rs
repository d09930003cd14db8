//! Acceptance checks. Each test prints one `criterion N ...: PASS|FAIL` line.
//!
//! Run with `cargo test -p gravent-cli --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use gravent_core::chsh::{chsh_threshold, correlation_matrix};
use gravent_core::density::StateDiagnostics;
use gravent_core::dynamics::{
    decohere_pair, evolve_closed, evolve_numeric, evolve_state, DecayModel,
};
use gravent_core::entanglement::{lambda_closed, optimal_time};
use gravent_core::fluctuations::{
    averaged_state, lambda_bar, max_time_jitter, monte_carlo_average, FluctuationSpec, DEFAULT_SEED,
};
use gravent_core::{DensityMatrix, Matrix4, SimPoint, Subsystem};
use num_complex::Complex64;

fn report(n: u32, name: &str, checks: &[(&str, bool, String)]) {
    let ok = checks.iter().all(|c| c.1);
    let detail: Vec<String> = checks
        .iter()
        .map(|(label, pass, info)| {
            format!("{label}={} ({info})", if *pass { "ok" } else { "FAIL" })
        })
        .collect();
    println!(
        "criterion {n} {name}: {} | {}",
        if ok { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(ok, "criterion {n} failed: {}", detail.join("; "));
}

fn runtime_check(elapsed: Duration, limit_s: f64) -> (&'static str, bool, String) {
    let s = elapsed.as_secs_f64();
    ("runtime", s < limit_s, format!("{s:.3}s < {limit_s}s"))
}

fn pt(m: &Matrix4) -> Matrix4 {
    gravent_core::partial_transpose(m, Subsystem::Second)
}

/// The 100×100 grid over (ω, t) ∈ [0, 10]×[0, 5], both ends included.
fn grid() -> impl Iterator<Item = SimPoint> {
    (0..100).flat_map(|i| {
        (0..100).map(move |j| SimPoint::new(10.0 * i as f64 / 99.0, 5.0 * j as f64 / 99.0).unwrap())
    })
}

#[test]
fn criterion_1_closed_form_matches_oracle() {
    let start = Instant::now();
    let model = DecayModel::exponential();
    let (mut lambda_err, mut lambda_bad, mut state_err) = (0.0f64, 0usize, 0.0f64);
    for p in grid() {
        let rho = evolve_closed(p);
        let min = pt(rho.matrix()).hermitian_eigenvalues().unwrap()[0];
        let d = (lambda_closed(p) - min).abs();
        lambda_err = lambda_err.max(d);
        lambda_bad += usize::from(d > 1e-12);
        state_err = state_err.max(evolve_numeric(p, &model).max_abs_diff(rho.matrix()));
    }
    report(
        1,
        "closed-form/oracle equivalence",
        &[
            (
                "lambda_closed",
                lambda_err <= 1e-12,
                format!("max |diff| {lambda_err:.3e}, {lambda_bad}/10000 points over 1e-12"),
            ),
            (
                "evolve_numeric",
                state_err <= 1e-12,
                format!("max |diff| {state_err:.3e}"),
            ),
            runtime_check(start.elapsed(), 5.0),
        ],
    );
}

/// Most negative `λ` on a fine t-grid over (0, 20].
fn min_lambda(omega: f64) -> f64 {
    let step = (0.01f64).min(std::f64::consts::PI / (50.0 * omega));
    let n = (20.0 / step).ceil() as usize;
    (1..=n)
        .map(|k| lambda_closed(SimPoint::new(omega, k as f64 * step).unwrap()))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_2_entanglement_threshold() {
    let start = Instant::now();
    let below: Vec<(f64, f64)> = [0.5, 0.9, 0.99]
        .iter()
        .map(|&w| (w, min_lambda(w)))
        .collect();
    let above: Vec<(f64, f64)> = [1.01, 1.1, 2.0, 10.0]
        .iter()
        .map(|&w| (w, min_lambda(w)))
        .collect();
    report(
        2,
        "entanglement threshold",
        &[
            (
                "below",
                below.iter().all(|&(_, l)| l >= -1e-12),
                format!("{below:?}"),
            ),
            (
                "above",
                above.iter().all(|&(_, l)| l < -1e-12),
                format!("{above:?}"),
            ),
            runtime_check(start.elapsed(), 1.0),
        ],
    );
}

#[test]
fn criterion_3_optimal_time() {
    let start = Instant::now();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let scaled = optimal_time(1000.0).unwrap() * 1000.0;
    let rel = (scaled - half_pi).abs() / half_pi;
    let (mut arg, mut best) = (f64::NAN, f64::NEG_INFINITY);
    for k in 1..=2000 {
        let omega = 1.0 + k as f64 * 1e-3;
        let t0 = optimal_time(omega).unwrap();
        if t0 > best {
            (arg, best) = (omega, t0);
        }
    }
    report(
        3,
        "optimal time",
        &[
            (
                "large-omega",
                rel <= 5e-3,
                format!("t0(1000)*1000 = {scaled:.6}, rel err {rel:.2e}"),
            ),
            (
                "max",
                (best - 0.40).abs() <= 0.02,
                format!("max t0 = {best:.6}"),
            ),
            (
                "argmax",
                (arg - 1.8).abs() <= 0.15,
                format!("at omega = {arg:.3}, pinned 1.8 ± 0.15"),
            ),
            runtime_check(start.elapsed(), 2.0),
        ],
    );
}

#[test]
fn criterion_4_fluctuation_formula() {
    let levels = [0.0, 0.05, 0.1];
    let (mut err, mut bad, mut total) = (0.0f64, 0usize, 0usize);
    for &s_t in &levels {
        for &s_omega in &levels {
            let spec = FluctuationSpec::new(s_t, s_omega).unwrap();
            for i in 0..=20 {
                for j in 1..=20 {
                    let p = SimPoint::new(0.5 * i as f64, s_t * s_t + 0.25 * j as f64).unwrap();
                    let min = pt(&averaged_state(p, spec).unwrap().matrix)
                        .hermitian_eigenvalues()
                        .unwrap()[0];
                    let d = (lambda_bar(p, spec).unwrap() - min).abs();
                    err = err.max(d);
                    bad += usize::from(d > 1e-12);
                    total += 1;
                }
            }
        }
    }
    let zero = FluctuationSpec::default();
    let recovery = grid()
        .map(|p| (lambda_bar(p, zero).unwrap() - lambda_closed(p)).abs())
        .fold(0.0f64, f64::max);
    report(
        4,
        "fluctuation formula",
        &[
            (
                "lambda_bar",
                err <= 1e-12,
                format!("max |diff| {err:.3e}, {bad}/{total} points over 1e-12"),
            ),
            (
                "recovery",
                recovery <= 1e-15,
                format!("max |diff| {recovery:.3e}"),
            ),
        ],
    );
}

#[test]
fn criterion_5_monte_carlo_consistency() {
    let start = Instant::now();
    let p = SimPoint::new(2.0, 1.0).unwrap();
    let spec = FluctuationSpec::new(0.05, 0.1).unwrap();
    let mc = monte_carlo_average(p, spec, 1_000_000, DEFAULT_SEED).unwrap();
    let avg = averaged_state(p, spec).unwrap().matrix;
    let mut worst = 0.0f64;
    let mut ok = true;
    for i in 0..4 {
        for j in 0..4 {
            let d = mc.mean[(i, j)] - avg[(i, j)];
            let (lim_re, lim_im) = (
                5.0 * mc.std_error_re[i][j] + 1e-3,
                5.0 * mc.std_error_im[i][j] + 1e-3,
            );
            ok &= d.re.abs() <= lim_re && d.im.abs() <= lim_im;
            worst = worst.max(d.re.abs() / lim_re).max(d.im.abs() / lim_im);
        }
    }
    report(
        5,
        "monte-carlo consistency",
        &[
            (
                "entries",
                ok,
                format!(
                    "worst |diff| / (5 SE + 1e-3) = {worst:.3}, clamped {}",
                    mc.clamped
                ),
            ),
            runtime_check(start.elapsed(), 30.0),
        ],
    );
}

/// `inf_{t > s_t²} λ̄` over a log-spaced grid in `τ = t − s_t²`.
fn inf_lambda_bar(omega: f64, s_t: f64, s_omega: f64) -> f64 {
    let spec = FluctuationSpec::new(s_t, s_omega).unwrap();
    (0..=1200)
        .map(|k| {
            let tau = 10f64.powf(-9.0 + k as f64 * 1e-2);
            lambda_bar(SimPoint::new(omega, s_t * s_t + tau).unwrap(), spec).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_6_jitter_bound() {
    let start = Instant::now();
    let mut flips = Vec::new();
    let mut flip_ok = true;
    for omega in [1.5, 2.0, 4.0] {
        let bound = max_time_jitter(omega).unwrap();
        // bracket the sign flip in s_t²
        let (mut lo, mut hi) = (0.0f64, 2.0 * bound + 0.1);
        assert!(inf_lambda_bar(omega, lo.sqrt(), 0.0) < 0.0);
        assert!(inf_lambda_bar(omega, hi.sqrt(), 0.0) >= 0.0);
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if inf_lambda_bar(omega, mid.sqrt(), 0.0) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let flip = 0.5 * (lo + hi);
        flip_ok &= (flip - bound).abs() <= 1e-3;
        flips.push(format!("omega={omega}: flip {flip:.6} vs {bound:.6}"));
    }
    let mut persist_ok = true;
    let mut persist = Vec::new();
    for omega in [0.5, 0.99, 1.01, 1.5, 2.0, 4.0, 10.0] {
        for s_omega in [0.0, 0.1, 1.0, 5.0, 10.0] {
            let entangled = inf_lambda_bar(omega, 0.0, s_omega) < -1e-12;
            persist_ok &= entangled == (omega > 1.0);
            if entangled != (omega > 1.0) {
                persist.push(format!("omega={omega} s_omega={s_omega}"));
            }
        }
    }
    report(
        6,
        "jitter bound",
        &[
            ("sign-flip", flip_ok, flips.join(", ")),
            (
                "coupling-jitter",
                persist_ok,
                format!("mismatches: {persist:?}"),
            ),
            runtime_check(start.elapsed(), 10.0),
        ],
    );
}

#[test]
fn criterion_7_chsh_threshold() {
    let start = Instant::now();
    let th = chsh_threshold();
    let mut sv_err = 0.0f64;
    for p in grid() {
        let got = correlation_matrix(&evolve_closed(p)).singular_values();
        let (omega, t) = (p.omega, p.t);
        let s = (-t).exp() * (omega * t).sin().abs();
        let mut want = [(-2.0 * t).exp(), s, s];
        want.sort_by(|a, b| b.total_cmp(a));
        for (g, w) in got.iter().zip(want) {
            sv_err = sv_err.max((g - w).abs());
        }
    }
    report(
        7,
        "chsh threshold",
        &[
            (
                "omega_star",
                (th.omega_star - 4.19135).abs() <= 1e-4,
                format!("omega* = {:.10}", th.omega_star),
            ),
            (
                "singular-values",
                sv_err <= 1e-12,
                format!("max |diff| {sv_err:.3e}"),
            ),
            runtime_check(start.elapsed(), 10.0),
        ],
    );
}

/// Deterministic full-rank state built from `G G†`.
fn seeded_state(k: usize) -> DensityMatrix {
    let g = Matrix4::from_fn(|i, j| {
        let x = (k * 16 + i * 4 + j) as f64;
        Complex64::new((1.7 * x + 0.3).sin(), (2.3 * x + 1.1).cos())
    });
    let p = g * g.adjoint();
    DensityMatrix::new(p.scale((1.0 / p.trace().re).into())).unwrap()
}

fn state_ok(m: &Matrix4) -> Result<(), String> {
    let d = StateDiagnostics::of(m).map_err(|e| e.to_string())?;
    if d.hermiticity_error <= 1e-14 && d.trace_error <= 1e-14 && d.min_eigenvalue >= -1e-10 {
        Ok(())
    } else {
        Err(format!("{d:?}"))
    }
}

#[test]
fn criterion_8_state_validity() {
    let models = [
        DecayModel::exponential(),
        DecayModel::gaussian(),
        DecayModel::custom("rational", |t: f64| 1.0 / (1.0 + t)).unwrap(),
    ];
    let starts: Vec<DensityMatrix> = (0..5).map(seeded_state).collect();
    let mut dyn_failures = Vec::new();
    let mut dyn_count = 0usize;
    for p in grid().step_by(7) {
        let mut check = |label: &str, m: &Matrix4| {
            dyn_count += 1;
            if let Err(e) = state_ok(m) {
                dyn_failures.push(format!("{label} at {p:?}: {e}"));
            }
        };
        check("evolve_closed", evolve_closed(p).matrix());
        for model in &models {
            check(model.name(), evolve_numeric(p, model).matrix());
            for rho0 in &starts {
                check(
                    "decohere_pair",
                    decohere_pair(rho0, p.t, model).unwrap().matrix(),
                );
                check("evolve_state", evolve_state(rho0, p, model).matrix());
            }
        }
    }

    let mut mc_failures = Vec::new();
    let cases = [
        (2.0, 1.0, 0.05, 0.1),
        (0.5, 0.2, 0.3, 0.0),
        (10.0, 3.0, 1.0, 2.0),
        (1.2, 0.05, 0.1, 5.0),
    ];
    for (seed, &(omega, t, s_t, s_omega)) in cases.iter().enumerate() {
        let p = SimPoint::new(omega, t).unwrap();
        let spec = FluctuationSpec::new(s_t, s_omega).unwrap();
        let mc = monte_carlo_average(p, spec, 20_000, seed as u64).unwrap();
        if let Err(e) = state_ok(mc.mean.matrix()) {
            mc_failures.push(format!("{:?}: {e}", cases[seed]));
        }
    }

    // the averaged matrix is returned with a PSD flag that must agree with its spectrum
    let mut flag_mismatch = 0usize;
    let mut flag_count = 0usize;
    for &s_t in &[0.0, 0.1, 0.5, 1.0] {
        for &s_omega in &[0.0, 0.5, 3.0] {
            let spec = FluctuationSpec::new(s_t, s_omega).unwrap();
            for p in grid().step_by(13) {
                let Ok(avg) = averaged_state(
                    SimPoint::new(p.omega, p.t + s_t * s_t + 1e-3).unwrap(),
                    spec,
                ) else {
                    continue;
                };
                let min = avg.matrix.hermitian_eigenvalues().unwrap()[0];
                let consistent = avg.psd == (min >= -1e-10) && avg.psd == avg.density().is_ok();
                flag_mismatch += usize::from(!consistent);
                flag_count += 1;
            }
        }
    }
    let bad = Matrix4::diagonal([0.6, 0.6, -0.1, -0.1].map(|x| Complex64::new(x, 0.0)));
    let flagged = gravent_core::AveragedState::from_matrix(
        bad,
        FluctuationSpec::default().validity(SimPoint::new(1.0, 1.0).unwrap()),
    )
    .unwrap();
    let flags_violation = !flagged.psd && flagged.matrix == bad && flagged.density().is_err();

    report(
        8,
        "state validity",
        &[
            ("dynamics", dyn_failures.is_empty(), format!("{dyn_count} states, failures {:?}", dyn_failures.iter().take(3).collect::<Vec<_>>())),
            ("monte-carlo", mc_failures.is_empty(), format!("{} means, failures {mc_failures:?}", cases.len())),
            ("psd-flag", flag_mismatch == 0 && flags_violation, format!("{flag_count} averaged states, {flag_mismatch} inconsistent; injected violation flagged: {flags_violation}")),
        ],
    );
}

fn scratch_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_to_file(args: &[&str], path: &PathBuf) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_gravent"))
        .args(args)
        .arg("--output")
        .arg(path)
        .env_remove("GRAVENT_FORMAT")
        .status()
        .unwrap();
    assert!(status.success(), "{args:?} exited with {status}");
    std::fs::read(path).unwrap()
}

fn reparses(bytes: &[u8], format: &str) -> bool {
    let text = std::str::from_utf8(bytes).unwrap();
    match format {
        "csv" => {
            let mut r = csv::Reader::from_reader(bytes);
            r.records().all(|rec| rec.is_ok()) && text.ends_with("\r\n")
        }
        _ => text.lines().all(|l| {
            serde_json::from_str::<serde_json::Value>(l)
                .map(|v| v.is_object())
                .unwrap_or(false)
        }),
    }
}

#[test]
fn criterion_9_determinism() {
    let dir = scratch_dir();
    let seed = DEFAULT_SEED.to_string();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        (
            "sweep",
            vec![
                "sweep",
                "--quantity",
                "lambda",
                "--range",
                "0",
                "5",
                "101",
                "--omega",
                "2",
            ],
        ),
        (
            "sweep-bar",
            vec![
                "sweep",
                "--quantity",
                "lambda_bar",
                "--range",
                "0.1",
                "3",
                "50",
                "--omega",
                "2",
                "--s-t",
                "0.05",
                "--s-omega",
                "0.1",
            ],
        ),
        (
            "monte-carlo",
            vec![
                "monte-carlo",
                "--omega",
                "2",
                "--t",
                "1",
                "--s-t",
                "0.05",
                "--s-omega",
                "0.1",
                "--samples",
                "20000",
                "--seed",
                &seed,
            ],
        ),
        (
            "design",
            vec![
                "design", "--m1", "1e-14", "--m2", "1e-14", "--d", "4.5e-4", "--L", "2.5e-4",
                "--T", "2.5",
            ],
        ),
        ("chsh-threshold", vec!["chsh-threshold"]),
        ("evolve", vec!["evolve", "--omega", "2", "--t", "0.5"]),
    ];
    let mut failures = Vec::new();
    let mut runs = 0;
    for (name, args) in &commands {
        for format in ["csv", "jsonl"] {
            let mut full = args.clone();
            full.extend(["--format", format]);
            let a = run_to_file(&full, &dir.join(format!("{name}.a.{format}")));
            let b = run_to_file(&full, &dir.join(format!("{name}.b.{format}")));
            runs += 2;
            if a != b {
                failures.push(format!("{name}/{format}: outputs differ"));
            }
            if a.is_empty() || !reparses(&a, format) {
                failures.push(format!("{name}/{format}: output does not re-parse"));
            }
        }
    }
    report(
        9,
        "determinism",
        &[(
            "byte-identical",
            failures.is_empty(),
            format!("{runs} runs, failures {failures:?}"),
        )],
    );
}
