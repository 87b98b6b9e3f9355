use schurand::haar::{complex_normal, haar_unitary, RngStream};
use schurand::linalg::{c, kron, CMat};
use schurand::qntk::{
    ansatz_unitary, cqa_parameter_kernel, haar_block_kernel, heuristic_kbar, lift_to_full_space, loss_and_grad, qntk_average,
    qntk_empirical, train, CqaAnsatz, InitialState, LearningProblem,
};
use schurand::rep::Partition;
use schurand::schur::build_schur_basis;

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Interior target a quarter of the way up the spectrum.
fn interior_problem(lambda: &Partition, eta: f64) -> LearningProblem {
    let mut prob = LearningProblem::heisenberg(lambda, 2, InitialState::FirstTableau, eta).unwrap();
    let s = prob.spectrum();
    prob.target = s[0] + 0.25 * (s[s.len() - 1] - s[0]);
    prob
}

#[test]
fn gradients_match_finite_differences_on_random_instances() {
    let shapes = [p(&[3, 1]), p(&[2, 2]), p(&[3, 2]), p(&[2, 1, 1])];
    for case in 0..20u64 {
        let lambda = &shapes[case as usize % shapes.len()];
        let a = CqaAnsatz::random(lambda, 2, &mut RngStream::new(case, 0).rng());
        let dim = a.dim();
        let mut rng = RngStream::new(case, 1).rng();
        let g = CMat::from_fn(dim, dim, |_, _| complex_normal(&mut rng));
        let mut rho = CMat::zeros(dim, dim);
        rho[(0, 0)] = c(1.0);
        let prob = LearningProblem::new((&g + g.adjoint()) * c(0.5), rho, 0.3, 0.1).unwrap();
        let (_, g) = loss_and_grad(&a, &prob).unwrap();
        let theta = a.params();
        let h = 1e-5;
        let mut num = 0.0;
        let mut den = 0.0;
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
            den += g[i].powi(2);
        }
        assert!((num / den).sqrt() <= 1e-6, "case {case}: relative error {}", (num / den).sqrt());
    }
}

#[test]
fn lifted_ansatz_commutes_with_transversal_unitaries() {
    for n in [3usize, 4, 5] {
        let basis = build_schur_basis(n, 2).unwrap();
        let lambda = p(&[n - 1, 1]);
        let a = CqaAnsatz::random(&lambda, 2, &mut RngStream::new(n as u64, 1).rng());
        let full = lift_to_full_space(&basis, &lambda, &ansatz_unitary(&a)).unwrap();
        let mut rng = RngStream::new(n as u64, 2).rng();
        for _ in 0..3 {
            let g = haar_unitary(2, &mut rng);
            let gn = (0..n).fold(CMat::identity(1, 1), |acc, _| kron(&acc, &g));
            assert!((&full * &gn - &gn * &full).iter().all(|z| z.norm() < 1e-10));
        }
    }
}

#[test]
fn haar_block_average_matches_closed_form() {
    let lambda = p(&[5, 1]);
    let prob = LearningProblem::heisenberg(&lambda, 2, InitialState::FirstTableau, 0.01).unwrap();
    let gens = CqaAnsatz::zeros(&lambda, 2).generators();
    let kbar = qntk_average(&prob.observable, &gens).unwrap();
    let est = haar_block_kernel(&prob, &gens, 600, 7, 4).unwrap();
    assert!((est.mean / kbar - 1.0).abs() < 0.1, "{} vs {kbar}", est.mean);
    // the order-of-magnitude estimate, with L read as the parameter count
    let heur = heuristic_kbar(lambda.n() - 1, gens.len(), 5);
    assert!(heur / kbar < 4.0 && kbar / heur < 4.0, "{heur} vs {kbar}");
}

#[test]
fn kernel_grows_linearly_with_depth() {
    let lambda = p(&[3, 1]);
    let prob = LearningProblem::heisenberg(&lambda, 2, InitialState::FirstTableau, 0.01).unwrap();
    let k2 = cqa_parameter_kernel(&lambda, 2, &prob, 500, 1, 4).unwrap();
    let k4 = cqa_parameter_kernel(&lambda, 4, &prob, 500, 2, 4).unwrap();
    assert!((k4.mean / k2.mean / 2.0 - 1.0).abs() < 0.15, "{} vs {}", k4.mean, k2.mean);
}

#[test]
fn one_step_descent_identity() {
    let lambda = p(&[3, 1]);
    let a0 = CqaAnsatz::random(&lambda, 3, &mut RngStream::new(4, 0).rng());
    let mut residuals = Vec::new();
    for eta in [1e-4f64, 5e-5] {
        let prob = interior_problem(&lambda, eta);
        let mut a = a0.clone();
        let k = qntk_empirical(&a, &prob).unwrap();
        let traj = train(&mut a, &prob, 1).unwrap();
        let (e0, e1) = (traj.steps[0].eps, traj.steps[1].eps);
        let observed = (e0 - e1) / (eta * e0);
        assert!((observed / k - 1.0).abs() <= 0.1);
        residuals.push((e1 - e0 * (1.0 - eta * k)).abs());
    }
    // halving η shrinks the residual fourfold
    let ratio = residuals[0] / residuals[1];
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn overparameterized_training_converges_at_the_predicted_rate() {
    let lambda = p(&[3, 1]);
    let layers = 4 * 9;
    let gens = CqaAnsatz::zeros(&lambda, layers).generators();
    let base = interior_problem(&lambda, 1.0);
    let kbar = qntk_average(&base.observable, &gens).unwrap();
    let eta = 0.02 / kbar;
    let predicted = (1.0 - eta * kbar).ln();
    for seed in 0..10u64 {
        let mut a = CqaAnsatz::random(&lambda, layers, &mut RngStream::new(seed, 0).rng());
        let prob = interior_problem(&lambda, eta);
        let traj = train(&mut a, &prob, 100).unwrap();
        assert!(!traj.diverged && traj.warning.is_none());
        let ratio = traj.log_rate() / predicted;
        assert!((0.5..=2.0).contains(&ratio), "seed {seed}: ratio {ratio}");
        assert!(traj.kernel_spread() <= 0.2, "seed {seed}: spread {}", traj.kernel_spread());
    }
}

#[test]
fn large_step_triggers_a_warning() {
    let lambda = p(&[2, 1]);
    let mut a = CqaAnsatz::random(&lambda, 2, &mut RngStream::new(1, 0).rng());
    let prob = interior_problem(&lambda, 10.0);
    let traj = train(&mut a, &prob, 3).unwrap();
    assert!(traj.warning.is_some());
}

#[test]
fn mixed_sector_state_has_a_vanishing_kernel() {
    let lambda = p(&[3, 1]);
    let prob = LearningProblem::heisenberg(&lambda, 2, InitialState::MaximallyMixed, 0.1).unwrap();
    let a = CqaAnsatz::random(&lambda, 2, &mut RngStream::new(2, 0).rng());
    assert!(qntk_empirical(&a, &prob).unwrap() < 1e-20);
}
