//! Quantum neural tangent kernels of symmetric variational circuits.
//!
//! The ansatz lives inside one sector `S^λ`. Each layer applies
//! `exp(−iγ Σ_j π(s_j))` followed by `exp(−i Σ_{k≤l} β_kl X_k X_l)`; the YJM
//! factor is diagonal in the Gelfand-Tsetlin basis, so those gates are
//! phases.

use rand::Rng;

use crate::error::{check_dim, invalid, Error, Result};
use crate::haar::{haar_unitary, parallel_samples};
use crate::irrep::{IrrepBlockRep, ObservableExpansion};
use crate::linalg::{c, eigh, eigvalsh, to_complex, trace, trace_of_product, CMat, C64, ZERO};
use crate::rep::Partition;
use crate::schur::SchurBasis;
use crate::stats::{linear_fit, Estimate};

/// YJM index pairs `(k, l)` with `2 ≤ k ≤ l ≤ n`.
pub fn beta_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 2..=n {
        for l in k..=n {
            out.push((k, l));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    /// One coefficient per pair of [`beta_pairs`].
    pub beta: Vec<f64>,
    pub gamma: f64,
}

/// Sector data shared by every ansatz on `λ`.
#[derive(Clone, Debug)]
pub struct SectorGenerators {
    pub lambda: Partition,
    pub rep: IrrepBlockRep,
    /// Diagonal of `X_k X_l` per pair.
    pub yjm_products: Vec<Vec<f64>>,
    /// `Σ_j π(s_j)`.
    pub swap_sum: CMat,
    swap_eigs: (Vec<f64>, CMat),
}

impl SectorGenerators {
    pub fn new(lambda: &Partition) -> Self {
        let rep = IrrepBlockRep::new(lambda);
        let n = lambda.n();
        let contents: Vec<Vec<f64>> =
            rep.tableaux().iter().map(|t| t.content_vector().iter().map(|&x| x as f64).collect()).collect();
        let yjm_products =
            beta_pairs(n).iter().map(|&(k, l)| contents.iter().map(|cv| cv[k - 1] * cv[l - 1]).collect()).collect();
        let dim = rep.dim();
        let mut sum = crate::linalg::RMat::zeros(dim, dim);
        for g in rep.generators() {
            sum += g;
        }
        let swap_sum = to_complex(&sum);
        let swap_eigs = eigh(&swap_sum);
        Self { lambda: lambda.clone(), rep, yjm_products, swap_sum, swap_eigs }
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// `exp(−iγ Σ_j π(s_j))` from the cached eigendecomposition.
    pub fn swap_gate(&self, gamma: f64) -> CMat {
        let (vals, vecs) = &self.swap_eigs;
        let phases = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&e| C64::from_polar(1.0, -gamma * e)),
        ));
        vecs * phases * vecs.adjoint()
    }

    /// Diagonal of `Σ β_kl X_k X_l`.
    fn yjm_diagonal(&self, beta: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; self.dim()];
        for (b, prod) in beta.iter().zip(&self.yjm_products) {
            for (hi, p) in h.iter_mut().zip(prod) {
                *hi += b * p;
            }
        }
        h
    }

    /// Generators of one layer in parameter order.
    pub fn layer_generators(&self) -> Vec<CMat> {
        let mut out: Vec<CMat> = self
            .yjm_products
            .iter()
            .map(|p| CMat::from_diagonal(&nalgebra::DVector::from_iterator(p.len(), p.iter().map(|&x| c(x)))))
            .collect();
        out.push(self.swap_sum.clone());
        out
    }
}

#[derive(Clone, Debug)]
pub struct CqaAnsatz {
    pub sector: std::sync::Arc<SectorGenerators>,
    pub layers: Vec<Layer>,
}

impl CqaAnsatz {
    pub fn zeros(lambda: &Partition, layers: usize) -> Self {
        let sector = std::sync::Arc::new(SectorGenerators::new(lambda));
        let nb = beta_pairs(lambda.n()).len();
        Self { sector, layers: vec![Layer { beta: vec![0.0; nb], gamma: 0.0 }; layers] }
    }

    /// Parameters drawn uniformly from `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(lambda: &Partition, layers: usize, rng: &mut R) -> Self {
        let mut a = Self::zeros(lambda, layers);
        let mut p = a.params();
        for x in p.iter_mut() {
            *x = rng.random::<f64>() * std::f64::consts::TAU;
        }
        a.set_params(&p).expect("matching length");
        a
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }

    pub fn params_per_layer(&self) -> usize {
        self.sector.yjm_products.len() + 1
    }

    pub fn num_params(&self) -> usize {
        self.layers.len() * self.params_per_layer()
    }

    /// Flattened as `β` of layer 1, `γ` of layer 1, `β` of layer 2, ...
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for l in &self.layers {
            out.extend_from_slice(&l.beta);
            out.push(l.gamma);
        }
        out
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        check_dim(self.num_params(), p.len())?;
        if p.iter().any(|x| !x.is_finite()) {
            return invalid("ansatz parameters must be finite");
        }
        let per = self.params_per_layer();
        for (layer, chunk) in self.layers.iter_mut().zip(p.chunks(per)) {
            layer.beta.copy_from_slice(&chunk[..per - 1]);
            layer.gamma = chunk[per - 1];
        }
        Ok(())
    }

    /// Every generator `H_l`, in parameter order.
    pub fn generators(&self) -> Vec<CMat> {
        let one = self.sector.layer_generators();
        (0..self.layers.len()).flat_map(|_| one.clone()).collect()
    }

    fn gates(&self) -> Vec<Gate> {
        let mut out = Vec::with_capacity(2 * self.layers.len());
        for l in &self.layers {
            out.push(Gate::Swap(self.sector.swap_gate(l.gamma)));
            let h = self.sector.yjm_diagonal(&l.beta);
            out.push(Gate::Phases(h.iter().map(|&x| C64::from_polar(1.0, -x)).collect()));
        }
        out
    }
}

enum Gate {
    Swap(CMat),
    Phases(Vec<C64>),
}

impl Gate {
    /// `G m G†`.
    fn conjugate(&self, m: &CMat) -> CMat {
        match self {
            Gate::Swap(g) => g * m * g.adjoint(),
            Gate::Phases(p) => CMat::from_fn(m.nrows(), m.ncols(), |i, j| p[i] * m[(i, j)] * p[j].conj()),
        }
    }

    /// `G† m G`.
    fn heisenberg(&self, m: &CMat) -> CMat {
        match self {
            Gate::Swap(g) => g.adjoint() * m * g,
            Gate::Phases(p) => CMat::from_fn(m.nrows(), m.ncols(), |i, j| p[i].conj() * m[(i, j)] * p[j]),
        }
    }

    fn left_multiply(&self, m: &CMat) -> CMat {
        match self {
            Gate::Swap(g) => g * m,
            Gate::Phases(p) => CMat::from_fn(m.nrows(), m.ncols(), |i, j| p[i] * m[(i, j)]),
        }
    }
}

/// `U = V_L ⋯ V_1`.
pub fn ansatz_unitary(ansatz: &CqaAnsatz) -> CMat {
    let dim = ansatz.dim();
    ansatz.gates().iter().fold(CMat::identity(dim, dim), |u, g| g.left_multiply(&u))
}

/// Lifts a sector unitary to `(ℂ^d)^{⊗n}` as `I_m ⊗ U` on sector `λ` and the
/// identity elsewhere.
pub fn lift_to_full_space(basis: &SchurBasis, lambda: &Partition, u: &CMat) -> Result<CMat> {
    let layout = basis.layout();
    let s = layout.sector_index(lambda).ok_or_else(|| Error::InvalidInput(format!("{lambda} is not a sector")))?;
    let blocks: Vec<CMat> = layout
        .sectors
        .iter()
        .enumerate()
        .map(|(t, sec)| if t == s { u.clone() } else { CMat::identity(sec.dim, sec.dim) })
        .collect();
    check_dim(layout.sectors[s].dim, u.nrows())?;
    basis.from_schur(&crate::schur::assemble_block_diagonal(layout, &blocks)?)
}

/// Initial state inside the sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// `|T₁⟩⟨T₁|` for the first tableau.
    FirstTableau,
    /// `I/d_λ`.
    MaximallyMixed,
}

#[derive(Clone, Debug)]
pub struct LearningProblem {
    pub observable: CMat,
    pub rho: CMat,
    pub target: f64,
    pub eta: f64,
}

impl LearningProblem {
    pub fn new(observable: CMat, rho: CMat, target: f64, eta: f64) -> Result<Self> {
        check_dim(observable.nrows(), rho.nrows())?;
        if (&observable - observable.adjoint()).iter().any(|z| z.norm() > 1e-10) {
            return invalid("observable is not Hermitian");
        }
        if (trace(&rho) - c(1.0)).norm() > 1e-10 || eigvalsh(&rho)[0] < -1e-10 {
            return invalid("initial state is not a density matrix");
        }
        if !(eta > 0.0 && eta.is_finite()) || !target.is_finite() {
            return invalid("learning rate must be positive and the target finite");
        }
        Ok(Self { observable, rho, target, eta })
    }

    /// Heisenberg observable on sector `λ`, ground-state target.
    pub fn heisenberg(lambda: &Partition, d: usize, init: InitialState, eta: f64) -> Result<Self> {
        let rep = IrrepBlockRep::new(lambda);
        let o = ObservableExpansion::heisenberg(lambda.n(), d)?.block(&rep)?;
        let o = (&o + o.adjoint()) * c(0.5);
        let dim = rep.dim();
        let rho = match init {
            InitialState::FirstTableau => {
                let mut r = CMat::zeros(dim, dim);
                r[(0, 0)] = c(1.0);
                r
            }
            InitialState::MaximallyMixed => CMat::identity(dim, dim) / c(dim as f64),
        };
        let target = eigvalsh(&o)[0];
        Self::new(o, rho, target, eta)
    }

    pub fn dim(&self) -> usize {
        self.observable.nrows()
    }

    /// Spectrum of the observable, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        eigvalsh(&self.observable)
    }
}

/// `ε = Tr(ρ U†OU) − E₀` and `∂ε/∂θ_l` for every parameter.
pub fn loss_and_grad(ansatz: &CqaAnsatz, problem: &LearningProblem) -> Result<(f64, Vec<f64>)> {
    check_dim(ansatz.dim(), problem.dim())?;
    let gates = ansatz.gates();
    // states before each gate
    let mut states = Vec::with_capacity(gates.len() + 1);
    states.push(problem.rho.clone());
    for g in &gates {
        let next = g.conjugate(states.last().expect("nonempty"));
        states.push(next);
    }
    let eps = trace_of_product(states.last().expect("nonempty"), &problem.observable).re - problem.target;
    let per = ansatz.params_per_layer();
    let mut grad = vec![0.0; ansatz.num_params()];
    let mut obs = problem.observable.clone();
    for (gi, g) in gates.iter().enumerate().rev() {
        // obs becomes the observable evolved back through gate gi
        obs = g.heisenberg(&obs);
        let rho = &states[gi];
        let layer = gi / 2;
        match g {
            Gate::Phases(_) => {
                // i Tr(ρ[H, O]) with H diagonal
                let dim = rho.nrows();
                for (p, h) in ansatz.sector.yjm_products.iter().enumerate() {
                    let mut acc = ZERO;
                    for a in 0..dim {
                        for b in 0..dim {
                            if h[a] != h[b] {
                                acc += rho[(a, b)] * obs[(b, a)] * (h[b] - h[a]);
                            }
                        }
                    }
                    grad[layer * per + p] = (C64::i() * acc).re;
                }
            }
            Gate::Swap(_) => {
                let h = &ansatz.sector.swap_sum;
                let comm = h * &obs - &obs * h;
                grad[layer * per + per - 1] = (C64::i() * trace_of_product(rho, &comm)).re;
            }
        }
    }
    Ok((eps, grad))
}

/// `K = Σ_l (∂ε/∂θ_l)²`.
pub fn qntk_empirical(ansatz: &CqaAnsatz, problem: &LearningProblem) -> Result<f64> {
    let (_, g) = loss_and_grad(ansatz, problem)?;
    Ok(g.iter().map(|x| x * x).sum())
}

fn centered_square(m: &CMat) -> f64 {
    let d = m.nrows() as f64;
    trace_of_product(m, m).re - trace(m).norm_sqr() / d
}

/// Haar average `K̄` for a pure initial state.
pub fn qntk_average(observable: &CMat, generators: &[CMat]) -> Result<f64> {
    let dim = observable.nrows();
    if dim < 2 {
        return Err(Error::Unsupported("the averaged kernel needs d_λ >= 2".into()));
    }
    for h in generators {
        check_dim(dim, h.nrows())?;
    }
    let d = dim as f64;
    let pref = 2.0 / ((d + 1.0) * (d * d - 1.0));
    let sum: f64 = generators.iter().map(centered_square).sum();
    Ok((pref * centered_square(observable) * sum).max(0.0))
}

/// `K̄` scaled by `(d_λ Tr ρ² − 1)/(d_λ − 1)`, which is 1 for pure states and
/// 0 for the maximally mixed state.
pub fn qntk_average_for_state(observable: &CMat, generators: &[CMat], rho: &CMat) -> Result<f64> {
    let d = rho.nrows() as f64;
    let purity = trace_of_product(rho, rho).re;
    Ok(qntk_average(observable, generators)? * ((d * purity - 1.0) / (d - 1.0)).max(0.0))
}

/// `N² L / d_λ`, an order-of-magnitude estimate only.
pub fn heuristic_kbar(terms: usize, layers: usize, d_lambda: usize) -> f64 {
    (terms * terms * layers) as f64 / d_lambda as f64
}

/// Mean `K` over draws where every `U_{±,l}` is an independent Haar unitary
/// on the sector.
pub fn haar_block_kernel(problem: &LearningProblem, generators: &[CMat], draws: usize, seed: u64, threads: usize) -> Result<Estimate> {
    if draws == 0 {
        return invalid("need at least one draw");
    }
    let dim = problem.dim();
    let ks = parallel_samples(seed, draws, threads, |rng| {
        generators
            .iter()
            .map(|h| {
                let up = haar_unitary(dim, rng);
                let um = haar_unitary(dim, rng);
                let rho = &up * &problem.rho * up.adjoint();
                let o = um.adjoint() * &problem.observable * &um;
                let comm = h * &o - &o * h;
                (C64::i() * trace_of_product(&rho, &comm)).re.powi(2)
            })
            .sum::<f64>()
    });
    Ok(Estimate::from_samples(&ks))
}

/// Mean `K` over ansatz parameters drawn uniformly from `[0, 2π)`.
pub fn cqa_parameter_kernel(
    lambda: &Partition,
    layers: usize,
    problem: &LearningProblem,
    draws: usize,
    seed: u64,
    threads: usize,
) -> Result<Estimate> {
    if draws == 0 {
        return invalid("need at least one draw");
    }
    let template = CqaAnsatz::zeros(lambda, layers);
    let ks: Vec<Result<f64>> = parallel_samples(seed, draws, threads, |rng| {
        let mut a = template.clone();
        let p: Vec<f64> = (0..a.num_params()).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
        a.set_params(&p)?;
        qntk_empirical(&a, problem)
    });
    let ks: Vec<f64> = ks.into_iter().collect::<Result<_>>()?;
    Ok(Estimate::from_samples(&ks))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainStep {
    pub t: usize,
    pub eps: f64,
    pub k: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub steps: Vec<TrainStep>,
    /// `|ε|` grew tenfold over its initial value.
    pub diverged: bool,
    /// Set when `ηK̄ ≥ 1`, outside the regime with a convergence guarantee.
    pub warning: Option<String>,
    pub kbar: f64,
}

impl Trajectory {
    /// Least-squares slope of `ln|ε(t)|` against `t`.
    pub fn log_rate(&self) -> f64 {
        let (t, y): (Vec<f64>, Vec<f64>) =
            self.steps.iter().filter(|s| s.eps != 0.0).map(|s| (s.t as f64, s.eps.abs().ln())).unzip();
        linear_fit(&t, &y, None).slope
    }

    /// Relative fluctuation `std(K) / mean(K)` over the trajectory.
    pub fn kernel_spread(&self) -> f64 {
        let ks: Vec<f64> = self.steps.iter().map(|s| s.k).collect();
        let mean = ks.iter().sum::<f64>() / ks.len() as f64;
        let var = ks.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / ks.len() as f64;
        var.sqrt() / mean
    }
}

/// Plain gradient descent on `½ε²`; records `(t, ε, K)` for `t = 0..=steps`.
pub fn train(ansatz: &mut CqaAnsatz, problem: &LearningProblem, steps: usize) -> Result<Trajectory> {
    let kbar = qntk_average_for_state(&problem.observable, &ansatz.generators(), &problem.rho)?;
    let warning = (problem.eta * kbar >= 1.0)
        .then(|| format!("eta * Kbar = {:.3} >= 1: outside the guaranteed convergence regime", problem.eta * kbar));
    let mut out = Vec::with_capacity(steps + 1);
    let mut params = ansatz.params();
    let mut diverged = false;
    let mut eps0 = None;
    for t in 0..=steps {
        let (eps, grad) = loss_and_grad(ansatz, problem)?;
        let k: f64 = grad.iter().map(|g| g * g).sum();
        out.push(TrainStep { t, eps, k });
        let e0 = *eps0.get_or_insert(eps.abs());
        if !eps.is_finite() || eps.abs() > 10.0 * e0.max(f64::MIN_POSITIVE) {
            diverged = true;
            break;
        }
        if t == steps {
            break;
        }
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= problem.eta * eps * g;
        }
        ansatz.set_params(&params)?;
    }
    Ok(Trajectory { steps: out, diverged, warning, kbar })
}
