//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! The process exits successfully even when a check fails so that the
//! workspace test run reports the table; set `SCHURAND_ACCEPTANCE_STRICT=1`
//! to turn any FAIL into a nonzero exit status.

use std::time::{Duration, Instant};

use schurand::codes::{
    choi_error_bound, figure2_sweep, page_deviation, purified_distance, rho_avg_closed_form, sandwich_counts,
    CodeInstance, Ensemble,
};
use schurand::haar::{
    complex_normal, first_moment, haar_quartic_trace, haar_unitary, parallel_samples, RngStream, SymmetricUnitary,
};
use schurand::irrep::ObservableExpansion;
use schurand::linalg::{c, eigvalsh, trace, trace_norm_hermitian, trace_of_product, CMat};
use schurand::otoc::{build_w, otoc_symmetric_exact, scaling_sweep, Evaluation, OtocMode};
use schurand::qntk::{
    haar_block_kernel, loss_and_grad, qntk_average, train, CqaAnsatz, InitialState, LearningProblem,
};
use schurand::rep::{sectors, Partition};
use schurand::schur::{block_residual, build_schur_basis};
use schurand::stats::{ComplexEstimate, MatrixAccumulator};

const THREADS: usize = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ginibre(dim: usize, seed: u64) -> CMat {
    let mut rng = RngStream::new(seed, 1000).rng();
    CMat::from_fn(dim, dim, |_, _| complex_normal(&mut rng))
}

fn run(id: usize, name: &str, budget: Option<Duration>, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = check();
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let pass = out.pass && in_time;
    let timing = match budget {
        Some(b) => format!("{:.2} s of {} s", elapsed.as_secs_f64(), b.as_secs()),
        None => format!("{:.2} s", elapsed.as_secs_f64()),
    };
    println!("{} [{id}] {name}: {} ({timing})", if pass { "PASS" } else { "FAIL" }, out.detail);
    pass
}

fn dimension_sum() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    for d in [2u128, 3] {
        for n in 1..=10usize {
            let total: u128 = sectors(n, d as usize).unwrap().iter().map(|s| s.mult * s.dim).sum();
            ok &= total == d.pow(n as u32);
            count += 1;
        }
    }
    Outcome { pass: ok, detail: format!("{count} (n, d) pairs, exact integer equality") }
}

fn block_diagonalization() -> Outcome {
    let mut worst = 0f64;
    for (d, n_max) in [(2usize, 8usize), (3, 5)] {
        for n in 1..=n_max {
            worst = worst.max(block_residual(&build_schur_basis(n, d).unwrap()).unwrap());
        }
    }
    Outcome { pass: worst <= 1e-9, detail: format!("max residual {worst:.2e} (tolerance 1e-9)") }
}

fn haar_moments() -> Outcome {
    let mut worst_first = 0f64;
    for n in 1..=5usize {
        let basis = build_schur_basis(n, 2).unwrap();
        let layout = basis.layout().clone();
        let x = basis.to_schur(&ginibre(layout.total, n as u64)).unwrap();
        let exact = first_moment(&layout, &x).unwrap();
        let mut acc = MatrixAccumulator::new(layout.total, layout.total);
        for m in parallel_samples(10 + n as u64, 10_000, THREADS, |rng| {
            let u = SymmetricUnitary::sample_with(&layout, rng).schur_matrix(&layout).unwrap();
            &u * &x * u.adjoint()
        }) {
            acc.push(&m);
        }
        worst_first = worst_first.max(acc.worst_z(&exact));
    }
    let mut worst_quartic = 0f64;
    for dim in [2usize, 3] {
        for case in 0..10u64 {
            let base = 100 * dim as u64 + 4 * case;
            let (a, b, m, e) = (ginibre(dim, base), ginibre(dim, base + 1), ginibre(dim, base + 2), ginibre(dim, base + 3));
            let exact = haar_quartic_trace(&a, &b, &m, &e, dim).unwrap();
            let zs = parallel_samples(base, 10_000, THREADS, |rng| {
                let u = haar_unitary(dim, rng);
                trace(&(&u * &a * u.adjoint() * &b * &u * &m * u.adjoint() * &e))
            });
            let est = ComplexEstimate::from_samples(&zs);
            worst_quartic = worst_quartic.max((est.mean - exact).norm() / est.stderr);
        }
    }
    Outcome {
        pass: worst_first <= 3.0 && worst_quartic <= 3.0,
        detail: format!("first moment worst z {worst_first:.2}, quartic worst z {worst_quartic:.2} (limit 3)"),
    }
}

/// Full computational-basis Monte Carlo of the exchange OTOC.
fn full_space_otoc(n: usize, samples: usize, seed: u64) -> (f64, f64) {
    let d = 2;
    let basis = build_schur_basis(n, d).unwrap();
    let layout = basis.layout().clone();
    let w = build_w(n, d).unwrap().full_space(d).unwrap();
    let r = n / 2;
    let v = ObservableExpansion::exchange(n, r, d).unwrap().full_space(d).unwrap();
    let norm = (d as f64).powi(n as i32);
    let vals = parallel_samples(seed, samples, THREADS, |rng| {
        let u = SymmetricUnitary::sample_with(&layout, rng).full_space(&basis).unwrap();
        let wt = &u * &w * u.adjoint();
        let m = &wt * &v;
        trace_of_product(&m, &m).re / norm
    });
    let e = schurand::stats::Estimate::from_samples(&vals);
    (e.mean, e.stderr)
}

fn otoc_cross_validation() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [4usize, 5, 6] {
        let exact = otoc_symmetric_exact(n, 2, n / 2).unwrap().value;
        let (mean, se) = full_space_otoc(n, 10_000, 40 + n as u64);
        let z = (mean - exact) / se;
        ok &= z.abs() <= 3.0;
        parts.push(format!("n={n} z={z:+.2}"));
    }
    let two = otoc_symmetric_exact(2, 2, 1).unwrap().value;
    ok &= (two - 7.0 / 3.0).abs() <= 1e-10;
    parts.push(format!("n=2 |F - 7/3| = {:.1e}", (two - 7.0 / 3.0).abs()));
    Outcome { pass: ok, detail: parts.join(", ") }
}

fn otoc_scaling() -> Outcome {
    let sym = scaling_sweep(4, 14, 2, OtocMode::SymmetricExchange, None, Evaluation::Exact).unwrap();
    let sym_pos = sym.rows.iter().all(|r| r.value > 0.0);
    let sym_slope = (-3.0..=0.0).contains(&sym.fit.slope);
    let sym_r2 = sym.fit.r2 >= 0.95;
    let pauli = scaling_sweep(4, 9, 2, OtocMode::PauliChargeDensity, None, Evaluation::Exact).unwrap();
    let pauli_pos = pauli.rows.iter().all(|r| r.value > 0.0);
    let pauli_slope = (-2.0..=0.0).contains(&pauli.fit.slope);
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    Outcome {
        pass: sym_pos && sym_slope && sym_r2 && pauli_pos && pauli_slope,
        detail: format!(
            "sym: positive {}, slope {:.3} {}, R² {:.3} {}; pauli: positive {}, slope {:.3} {}",
            mark(sym_pos),
            sym.fit.slope,
            mark(sym_slope),
            sym.fit.r2,
            mark(sym_r2),
            mark(pauli_pos),
            pauli.fit.slope,
            mark(pauli_slope)
        ),
    }
}

fn code_closed_form() -> Outcome {
    let (n, k, d) = (4, 1, 2);
    let basis = build_schur_basis(n, d).unwrap();
    let code = CodeInstance::standard(n, k, d).unwrap();
    let exact = rho_avg_closed_form(n, k, d).unwrap().rho;
    let dim = exact.nrows();
    let mut acc = MatrixAccumulator::new(dim, dim);
    let layout = basis.layout().clone();
    for rho in parallel_samples(6, 1000, THREADS, |rng| {
        let u = SymmetricUnitary::sample_with(&layout, rng);
        schurand::codes::encode_and_erase(&code, &u, &basis).unwrap().rho
    }) {
        acc.push(&rho);
    }
    let dist = trace_norm_hermitian(&(acc.mean() - &exact));
    // trace-norm standard error from the entrywise errors: ‖X‖₁ ≤ √D ‖X‖_F
    let se_f: f64 = acc.stderr().iter().map(|s| s * s).sum::<f64>().sqrt();
    let se1 = (dim as f64).sqrt() * se_f;
    let ev = eigvalsh(&rho_avg_closed_form(2, 1, 2).unwrap().rho);
    let want = [0.125, 0.125, 0.125, 0.625];
    let ev_err = ev.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Outcome {
        pass: dist <= 3.0 * se1 && ev_err <= 1e-12,
        detail: format!("‖mean − ρ_avg‖₁ = {dist:.4} vs 3·se = {:.4}; eigenvalue error {ev_err:.1e}", 3.0 * se1),
    }
}

fn figure2() -> Outcome {
    let sweep = figure2_sweep(3, &[8, 16, 32, 64], 2).unwrap();
    let slope_ok = (sweep.fit.slope + 1.0).abs() <= 0.1;
    let ratios: Vec<(usize, f64)> = [50usize, 64, 100]
        .iter()
        .map(|&n| {
            let b = choi_error_bound(n, 3, 2).unwrap();
            (n, b.approx / b.exact)
        })
        .collect();
    let ratio_ok = ratios.iter().all(|&(_, r)| (r - 1.0).abs() <= 0.25);
    let approx = choi_error_bound(100, 1, 2).unwrap().approx;
    let approx_ok = (approx - 0.008660).abs() <= 1e-6;
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    Outcome {
        pass: slope_ok && ratio_ok && approx_ok,
        detail: format!(
            "slope {:.4} {}; approx/exact at k=3 {} {}; k√3/(2n) at n=100 = {approx:.6} {}",
            sweep.fit.slope,
            mark(slope_ok),
            ratios.iter().map(|(n, r)| format!("n={n}: {r:.3}")).collect::<Vec<_>>().join(", "),
            mark(ratio_ok),
            mark(approx_ok)
        ),
    }
}

fn page_trend() -> Outcome {
    let mut means = Vec::new();
    for n in [4usize, 6, 8] {
        let basis = build_schur_basis(n, 2).unwrap();
        let code = CodeInstance::standard(n, 1, 2).unwrap();
        let p = page_deviation(&code, &basis, Ensemble::Haar { samples: 1000, seed: 8, threads: THREADS }).unwrap();
        means.push((n, p.trace_distance.mean, p.trace_distance.stderr));
    }
    let ok = means.windows(2).all(|w| w[1].1 < w[0].1);
    Outcome {
        pass: ok,
        detail: means.iter().map(|(n, m, s)| format!("n={n}: {m:.4}±{s:.4}")).collect::<Vec<_>>().join(", "),
    }
}

fn qntk() -> Outcome {
    // gradients against central differences
    let lambda = Partition::new(vec![3, 1]).unwrap();
    let prob = LearningProblem::heisenberg(&lambda, 2, InitialState::FirstTableau, 0.1).unwrap();
    let mut worst_fd = 0f64;
    for seed in 0..20u64 {
        let a = CqaAnsatz::random(&lambda, 2, &mut RngStream::new(seed, 0).rng());
        let (_, g) = loss_and_grad(&a, &prob).unwrap();
        let theta = a.params();
        let h = 1e-5;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..theta.len() {
            let mut b = a.clone();
            let mut tp = theta.clone();
            tp[i] += h;
            b.set_params(&tp).unwrap();
            let up = loss_and_grad(&b, &prob).unwrap().0;
            tp[i] -= 2.0 * h;
            b.set_params(&tp).unwrap();
            let down = loss_and_grad(&b, &prob).unwrap().0;
            num += ((up - down) / (2.0 * h) - g[i]).powi(2);
            den += g[i] * g[i];
        }
        worst_fd = worst_fd.max((num / den).sqrt());
    }
    let fd_ok = worst_fd <= 1e-6;

    // Haar-block average against the closed form
    let big = Partition::new(vec![5, 1]).unwrap();
    let big_prob = LearningProblem::heisenberg(&big, 2, InitialState::FirstTableau, 0.01).unwrap();
    let gens = CqaAnsatz::zeros(&big, 2).generators();
    let kbar = qntk_average(&big_prob.observable, &gens).unwrap();
    let est = haar_block_kernel(&big_prob, &gens, 1000, 9, THREADS).unwrap();
    let kbar_rel = (est.mean / kbar - 1.0).abs();
    let kbar_ok = kbar_rel <= 0.1;

    // overparameterized training
    let layers = 4 * 9;
    let mut train_prob = LearningProblem::heisenberg(&lambda, 2, InitialState::FirstTableau, 1.0).unwrap();
    let levels = train_prob.spectrum();
    train_prob.target = levels[0] + 0.25 * (levels[levels.len() - 1] - levels[0]);
    let kbar_train = qntk_average(&train_prob.observable, &CqaAnsatz::zeros(&lambda, layers).generators()).unwrap();
    train_prob.eta = 0.02 / kbar_train;
    let predicted = (1.0 - train_prob.eta * kbar_train).ln();
    let mut ratios = Vec::new();
    for seed in 0..10u64 {
        let mut a = CqaAnsatz::random(&lambda, layers, &mut RngStream::new(seed, 0).rng());
        let traj = train(&mut a, &train_prob, 100).unwrap();
        ratios.push(if traj.diverged { f64::NAN } else { traj.log_rate() / predicted });
    }
    let train_ok = ratios.iter().all(|r| (0.5..=2.0).contains(r));
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        pass: fd_ok && kbar_ok && train_ok,
        detail: format!(
            "worst FD error {worst_fd:.1e}; mean K {:.2} vs K̄ {kbar:.2} ({:.1}%); rate ratios in [{lo:.2}, {hi:.2}]",
            est.mean,
            100.0 * kbar_rel
        ),
    }
}

fn metric_sanity() -> Outcome {
    // extra random pairs on top of everything computed above
    for seed in 0..200u64 {
        let dim = 2 + (seed as usize % 7);
        let rank = 1 + (seed as usize % dim);
        let mut rng = RngStream::new(seed, 5).rng();
        let mut state = || {
            let g = CMat::from_fn(dim, rank, |_, _| complex_normal(&mut rng));
            let m = &g * g.adjoint();
            let t = m.trace();
            m / t
        };
        let (a, b) = (state(), state());
        purified_distance(&a, &b).unwrap();
    }
    let flat = CMat::identity(4, 4) * c(0.25);
    purified_distance(&rho_avg_closed_form(2, 1, 2).unwrap().rho, &flat).unwrap();
    let (checks, violations) = sandwich_counts();
    Outcome { pass: checks > 0 && violations == 0, detail: format!("{checks} pairs checked, {violations} violations") }
}

fn main() {
    let mins = |m: u64| Some(Duration::from_secs(60 * m));
    let results = [
        run(1, "Schur-Weyl dimension sum", Some(Duration::from_secs(1)), dimension_sum),
        run(2, "block diagonalization", mins(2), block_diagonalization),
        run(3, "Haar-moment agreement", mins(5), haar_moments),
        run(4, "OTOC cross-validation", None, otoc_cross_validation),
        run(5, "OTOC scaling", mins(30), otoc_scaling),
        run(6, "covariant code closed form", None, code_closed_form),
        run(7, "Choi error scaling", Some(Duration::from_secs(1)), figure2),
        run(8, "Page-deviation trend", None, page_trend),
        run(9, "QNTK", mins(10), qntk),
        run(10, "metric sanity", None, metric_sanity),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 && std::env::var("SCHURAND_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
