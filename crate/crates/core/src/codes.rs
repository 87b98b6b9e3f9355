//! Covariant erasure codes built from Haar SU(d)-symmetric encoders.
//!
//! Register layout is `R(k) ⊗ A(k) ⊗ Ā(n−k)`. The reference `R` is
//! maximally entangled with the logical input `A`, `Ā` holds a fixed pure
//! state `Ψ`, a symmetric unitary acts on the `n` physical qudits `A ∪ Ā`
//! and one physical qudit `B̄` is erased. All states on `R ∪ B̄` are stored
//! with `R` as the most significant factor.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{check_dim, invalid, Error, Result};
use crate::haar::{parallel_samples, quartic_moment, SymmetricUnitary};
use crate::linalg::{c, eigvalsh, partial_trace, reduced_density, sqrt_psd, trace, trace_norm_hermitian, CMat, CVec, C64, ONE, ZERO};
use crate::otoc::PauliString;
use crate::perm::Permutation;
use crate::rep::{enumerate_partitions, gl_dimension, hook_dimension};
use crate::schur::{SchurBasis, SectorLayout};
use crate::stats::{power_law_fit, Estimate, LinearFit};

/// Largest `d^{n+k}` for which purified states are formed densely.
pub const STATE_CAP: u128 = 4096;

/// Pure state placed on the `n − k` ancilla qudits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiSpec {
    /// Product of `d`-qudit antisymmetric singlets; needs `d | n − k`.
    Singlets,
    /// Singlets on a prefix and one GHZ state on the remaining `d + r`
    /// qudits (`r = (n−k) mod d`), or on all of them when `n − k < d`.
    /// Not SU(d)-invariant, but every one-qudit marginal is `I/d`.
    SingletsGhzTail,
}

impl PsiSpec {
    /// `Singlets` when the ancilla count allows it, otherwise the GHZ tail.
    pub fn default_for(ancillas: usize, d: usize) -> Self {
        if ancillas.is_multiple_of(d) {
            PsiSpec::Singlets
        } else {
            PsiSpec::SingletsGhzTail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeInstance {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Erased physical sites, 1-based (exactly one is supported).
    pub erased_sites: Vec<usize>,
    pub psi_spec: PsiSpec,
}

impl CodeInstance {
    pub fn new(n: usize, k: usize, d: usize, erased_sites: Vec<usize>, psi_spec: PsiSpec) -> Result<Self> {
        if d < 2 {
            return invalid("local dimension must be at least 2");
        }
        if k == 0 || k >= n {
            return invalid(format!("need 1 <= k < n, got k = {k}, n = {n}"));
        }
        if erased_sites.len() != 1 {
            return Err(Error::Unsupported(format!("erasure of {} qudits", erased_sites.len())));
        }
        if erased_sites.iter().any(|&s| s == 0 || s > n) {
            return invalid(format!("erased sites {erased_sites:?} outside 1..={n}"));
        }
        check_psi(n - k, d, psi_spec)?;
        Ok(Self { n, k, d, erased_sites, psi_spec })
    }

    /// Erases the last qudit and picks the ancilla state automatically.
    pub fn standard(n: usize, k: usize, d: usize) -> Result<Self> {
        let spec = if k < n { PsiSpec::default_for(n - k, d) } else { PsiSpec::Singlets };
        Self::new(n, k, d, vec![n], spec)
    }

    /// Dimension of `R ∪ B̄`.
    pub fn joint_dim(&self) -> usize {
        self.d.pow((self.k + self.erased_sites.len()) as u32)
    }
}

fn check_psi(m: usize, d: usize, spec: PsiSpec) -> Result<()> {
    match spec {
        PsiSpec::Singlets if !m.is_multiple_of(d) => {
            invalid(format!("a product of {d}-qudit singlets needs n - k divisible by {d}, got {m}"))
        }
        PsiSpec::SingletsGhzTail if m < 2 => invalid("a GHZ tail needs at least two ancilla qudits"),
        _ => Ok(()),
    }
}

/// Where a joint state came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Sampled,
    Identity,
    Averaged,
}

#[derive(Clone, Debug)]
pub struct JointState {
    pub rho: CMat,
    pub provenance: Provenance,
}

impl JointState {
    pub fn new(rho: CMat, provenance: Provenance) -> Result<Self> {
        validate_state(&rho)?;
        Ok(Self { rho, provenance })
    }
}

fn max_entry(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn validate_state(rho: &CMat) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return invalid("density matrix is not square");
    }
    let herm = max_entry(&(rho - rho.adjoint()));
    if herm > 1e-10 {
        return invalid(format!("density matrix is not Hermitian (defect {herm:.2e})"));
    }
    let tr = trace(rho);
    if (tr - ONE).norm() > 1e-10 {
        return invalid(format!("density matrix has trace {tr}"));
    }
    let min = eigvalsh(rho)[0];
    if min < -1e-10 {
        return invalid(format!("density matrix has eigenvalue {min:.3e}"));
    }
    Ok(())
}

/// `d`-qudit totally antisymmetric state.
fn singlet(d: usize) -> CVec {
    let mut v = CVec::zeros(d.pow(d as u32));
    let norm = 1.0 / (crate::rep::factorial(d).expect("small factorial") as f64).sqrt();
    for sigma in Permutation::all(d) {
        let sign = if (d - sigma.cycle_count()).is_multiple_of(2) { 1.0 } else { -1.0 };
        let idx = sigma.images().iter().fold(0, |acc, &x| acc * d + x);
        v[idx] += c(sign * norm);
    }
    v
}

fn ghz(m: usize, d: usize) -> CVec {
    let mut v = CVec::zeros(d.pow(m as u32));
    let rep = (0..m).fold(0, |acc, _| acc * d + 1);
    for a in 0..d {
        v[a * rep] = c(1.0 / (d as f64).sqrt());
    }
    v
}

fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// The ancilla state on `m` qudits.
pub fn build_psi(m: usize, d: usize, spec: PsiSpec) -> Result<CVec> {
    check_psi(m, d, spec)?;
    let (singlets, tail) = match spec {
        PsiSpec::Singlets => (m / d, 0),
        PsiSpec::SingletsGhzTail if m.is_multiple_of(d) => (m / d, 0),
        PsiSpec::SingletsGhzTail if m < d => (0, m),
        PsiSpec::SingletsGhzTail => (m / d - 1, d + m % d),
    };
    let mut psi = CVec::from_element(1, ONE);
    for _ in 0..singlets {
        psi = kron_vec(&psi, &singlet(d));
    }
    if tail > 0 {
        psi = kron_vec(&psi, &ghz(tail, d));
    }
    Ok(psi)
}

fn state_budget(n: usize, k: usize, d: usize) -> Result<()> {
    let needed = (d as u128).pow((n + k) as u32);
    if needed > STATE_CAP {
        return Err(Error::Budget { what: "encoded state", needed, cap: STATE_CAP });
    }
    Ok(())
}

/// Applies a block-diagonal Schur-basis operator to the columns of `m`.
fn apply_symmetric(layout: &SectorLayout, u: &SymmetricUnitary, m: &CMat) -> CMat {
    let mut out = m.clone();
    for (sec, blk) in layout.sectors.iter().zip(&u.blocks) {
        for a in 0..sec.mult {
            let rows = sec.offset + a * sec.dim;
            let part = blk * m.rows(rows, sec.dim);
            out.rows_mut(rows, sec.dim).copy_from(&part);
        }
    }
    out
}

/// Encoding isometry `x ↦ U(|x⟩_A ⊗ Ψ)` as a `d^n × d^k` matrix.
pub fn encode_isometry(code: &CodeInstance, u: &SymmetricUnitary, basis: &SchurBasis) -> Result<CMat> {
    check_dim(code.n, basis.n())?;
    check_dim(code.d, basis.d())?;
    check_dim(basis.layout().sectors.len(), u.blocks.len())?;
    let psi = build_psi(code.n - code.k, code.d, code.psi_spec)?;
    let dk = code.d.pow(code.k as u32);
    let dim = basis.dim();
    let m = psi.len();
    let v0 = CMat::from_fn(dim, dk, |p, x| if p / m == x { psi[p % m] } else { ZERO });
    let q = basis.q();
    let qt_v = CMat::from_fn(dim, dk, |i, j| (0..dim).map(|p| v0[(p, j)] * q[(p, i)]).sum());
    let w = apply_symmetric(basis.layout(), u, &qt_v);
    Ok(CMat::from_fn(dim, dk, |p, j| (0..dim).map(|i| w[(i, j)] * q[(p, i)]).sum()))
}

/// `ρ_{R∪B̄} = Tr_B U(Φ^{RA} ⊗ Ψ)U†`.
pub fn encode_and_erase(code: &CodeInstance, u: &SymmetricUnitary, basis: &SchurBasis) -> Result<JointState> {
    state_budget(code.n, code.k, code.d)?;
    let v = encode_isometry(code, u, basis)?;
    let dk = v.ncols();
    let dim = v.nrows();
    let norm = 1.0 / (dk as f64).sqrt();
    let psi = CVec::from_fn(dk * dim, |i, _| v[(i % dim, i / dim)] * norm);
    let mut dims = vec![dk];
    dims.extend(std::iter::repeat_n(code.d, code.n));
    let mut keep = vec![0];
    keep.extend(code.erased_sites.iter().copied());
    let rho = reduced_density(&psi, &dims, &keep);
    let provenance = if u.blocks.iter().all(|b| max_entry(&(b - CMat::identity(b.nrows(), b.ncols()))) == 0.0) {
        Provenance::Identity
    } else {
        Provenance::Sampled
    };
    JointState::new(rho, provenance)
}

/// Dense averaged state on `R ∪ B̄` for a single erased qudit.
pub fn rho_avg_closed_form(n: usize, k: usize, d: usize) -> Result<JointState> {
    if k == 0 || k >= n || d < 2 {
        return invalid(format!("need 1 <= k < n and d >= 2, got n = {n}, k = {k}, d = {d}"));
    }
    let dim = (d as u128).pow(k as u32 + 1);
    if dim > STATE_CAP {
        return Err(Error::Budget { what: "averaged state", needed: dim, cap: STATE_CAP });
    }
    let dim = dim as usize;
    let dk = dim / d;
    let nf = n as f64;
    let bell_weight = 1.0 / (nf * dk as f64);
    let flat = (nf - k as f64) / (nf * dim as f64);
    let digit = |r: usize, a: usize| (r / d.pow((k - 1 - a) as u32)) % d;
    let rho = CMat::from_fn(dim, dim, |row, col| {
        let (r, b) = (row / d, row % d);
        let (r2, b2) = (col / d, col % d);
        let mut v = 0.0;
        for a in 0..k {
            let rest_equal = (0..k).all(|i| i == a || digit(r, i) == digit(r2, i));
            if rest_equal && digit(r, a) == b && digit(r2, a) == b2 {
                v += bell_weight;
            }
        }
        if row == col {
            v += flat;
        }
        c(v)
    });
    JointState::new(rho, Provenance::Averaged)
}

/// Spectrum of the averaged state as `(eigenvalue, multiplicity)` pairs,
/// valid for any `k`.
pub fn rho_avg_spectrum(n: usize, k: usize, d: usize) -> Result<Vec<(f64, f64)>> {
    if k == 0 || k >= n || d < 2 {
        return invalid(format!("need 1 <= k < n and d >= 2, got n = {n}, k = {k}, d = {d}"));
    }
    let (nf, df) = (n as f64, d as f64);
    let dk = df.powi(k as i32);
    let flat = (nf - k as f64) / (nf * dk * df);
    let mut out = Vec::new();
    for lambda in enumerate_partitions(k, d) {
        let mut w: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
        w.resize(d, 0);
        let f_lambda = hook_dimension(&lambda)? as f64;
        for i in 0..d {
            if i + 1 < d && w[i] == w[i + 1] {
                continue;
            }
            let mut mu = w.clone();
            mu[i] -= 1;
            let mult = f_lambda * gl_dimension(&mu)? as f64;
            let contraction = (w[i] + d as i64 - 1 - i as i64) as f64;
            out.push((contraction / (nf * dk) + flat, mult));
        }
    }
    Ok(out)
}

static SANDWICH_CHECKS: AtomicU64 = AtomicU64::new(0);
static SANDWICH_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(checks, violations)` of the trace-distance sandwich since start-up.
pub fn sandwich_counts() -> (u64, u64) {
    (SANDWICH_CHECKS.load(Ordering::Relaxed), SANDWICH_VIOLATIONS.load(Ordering::Relaxed))
}

/// `F(ρ, σ) = Tr √(√σ ρ √σ)`.
pub fn fidelity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    check_dim(rho.nrows(), sigma.nrows())?;
    let s = sqrt_psd(sigma);
    let inner = &s * rho * &s;
    let inner = (&inner + inner.adjoint()) * c(0.5);
    let ev = eigvalsh(&inner);
    // rounding noise in the null space would otherwise contribute √ε each
    let floor = 64.0 * f64::EPSILON * ev.len() as f64 * ev.last().copied().unwrap_or(0.0).max(0.0);
    Ok(ev.iter().filter(|&&x| x > floor).map(|x| x.sqrt()).sum())
}

/// `P(ρ, σ) = √(1 − F²)`; every call checks `½‖ρ−σ‖₁ ≤ P ≤ √(2‖ρ−σ‖₁)`.
pub fn purified_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    validate_state(rho)?;
    validate_state(sigma)?;
    check_dim(rho.nrows(), sigma.nrows())?;
    let f = fidelity(rho, sigma)?.min(1.0);
    let p = (1.0 - f * f).max(0.0).sqrt();
    let t = trace_norm_hermitian(&(rho - sigma));
    SANDWICH_CHECKS.fetch_add(1, Ordering::Relaxed);
    if 0.5 * t > p + 1e-9 || p > (2.0 * t).sqrt() + 1e-9 {
        SANDWICH_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    Ok(p)
}

/// `√(1 − F²)` for `F = Σ_j m_j √(p_j / D)`, the fidelity against `I/D`.
fn distance_to_flat(spectrum: &[(f64, f64)], dim: f64) -> f64 {
    let f: f64 = spectrum.iter().map(|&(p, m)| m * (p.max(0.0) / dim).sqrt()).sum();
    (1.0 - f.min(1.0).powi(2)).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiBound {
    /// `P(ρ_avg, I/d^{k+1})`.
    pub exact: f64,
    /// `k√(d²−1)/(2n)`.
    pub approx: f64,
    /// Closed-form square-root upper bound on `exact`.
    pub closed_form: f64,
}

/// Closed-form upper bound on the averaged-state distance.
pub fn closed_form_bound(n: usize, k: usize, d: usize) -> f64 {
    let (nf, kf, d2) = (n as f64, k as f64, (d * d) as f64);
    let a = (kf / nf + (nf - kf) / (nf * d2)).sqrt();
    let b = ((nf - kf) / (nf * d2)).sqrt() * (d2 - 1.0);
    (1.0 - (a + b).powi(2) / d2).max(0.0).sqrt()
}

pub fn approx_bound(n: usize, k: usize, d: usize) -> f64 {
    k as f64 * ((d * d - 1) as f64).sqrt() / (2.0 * n as f64)
}

pub fn choi_error_bound(n: usize, k: usize, d: usize) -> Result<ChoiBound> {
    let spectrum = rho_avg_spectrum(n, k, d)?;
    let dim = (d as f64).powi(k as i32 + 1);
    Ok(ChoiBound { exact: distance_to_flat(&spectrum, dim), approx: approx_bound(n, k, d), closed_form: closed_form_bound(n, k, d) })
}

/// How unitaries are drawn for sampled quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    Haar { samples: usize, seed: u64, threads: usize },
    /// A single deterministic draw of the identity.
    Identity,
}

fn sampled_states(code: &CodeInstance, basis: &SchurBasis, ensemble: Ensemble) -> Result<Vec<CMat>> {
    state_budget(code.n, code.k, code.d)?;
    let layout = basis.layout().clone();
    match ensemble {
        Ensemble::Identity => Ok(vec![encode_and_erase(code, &SymmetricUnitary::identity(&layout), basis)?.rho]),
        Ensemble::Haar { samples, seed, threads } => {
            if samples == 0 {
                return invalid("need at least one sample");
            }
            parallel_samples(seed, samples, threads, |rng| {
                let u = SymmetricUnitary::sample_with(&layout, rng);
                encode_and_erase(code, &u, basis).map(|s| s.rho)
            })
            .into_iter()
            .collect()
        }
    }
}

/// Sample mean of the erased-register state.
pub fn sampled_average(code: &CodeInstance, basis: &SchurBasis, ensemble: Ensemble) -> Result<(CMat, usize)> {
    let states = sampled_states(code, basis, ensemble)?;
    let n = states.len();
    let sum = states.into_iter().fold(CMat::zeros(code.joint_dim(), code.joint_dim()), |acc, s| acc + s);
    Ok((sum / c(n as f64), n))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiSample {
    /// `P(ρ, I/d^k ⊗ I/d)` per sample.
    pub direct: Estimate,
    /// `P(ρ, ρ_avg)` per sample.
    pub fluctuation: Estimate,
    /// `P(ρ_avg, I/d^{k+1})`, deterministic.
    pub averaged: f64,
    /// `√(2‖ρ − ρ_avg‖₁)` per sample.
    pub fluctuation_bound: Estimate,
}

impl ChoiSample {
    /// Triangle-inequality upper bound on the mean direct distance.
    pub fn triangle_bound(&self) -> f64 {
        self.fluctuation.mean + self.averaged
    }
}

pub fn sampled_choi_error(code: &CodeInstance, basis: &SchurBasis, ensemble: Ensemble) -> Result<ChoiSample> {
    let states = sampled_states(code, basis, ensemble)?;
    let avg = rho_avg_closed_form(code.n, code.k, code.d)?.rho;
    let dim = code.joint_dim();
    let flat = CMat::identity(dim, dim) / c(dim as f64);
    let (mut direct, mut fluct, mut fbound) = (Vec::new(), Vec::new(), Vec::new());
    for rho in &states {
        direct.push(purified_distance(rho, &flat)?);
        fluct.push(purified_distance(rho, &avg)?);
        fbound.push((2.0 * trace_norm_hermitian(&(rho - &avg))).sqrt());
    }
    Ok(ChoiSample {
        direct: Estimate::from_samples(&direct),
        fluctuation: Estimate::from_samples(&fluct),
        averaged: purified_distance(&avg, &flat)?,
        fluctuation_bound: Estimate::from_samples(&fbound),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageDeviation {
    /// `‖ρ − ρ_avg‖₁` per sample.
    pub trace_distance: Estimate,
    /// `E Tr ρ² − Tr ρ_avg²`.
    pub second_moment: Estimate,
}

pub fn page_deviation(code: &CodeInstance, basis: &SchurBasis, ensemble: Ensemble) -> Result<PageDeviation> {
    let states = sampled_states(code, basis, ensemble)?;
    let avg = rho_avg_closed_form(code.n, code.k, code.d)?.rho;
    let avg_purity = (&avg * &avg).trace().re;
    let dist: Vec<f64> = states.iter().map(|r| trace_norm_hermitian(&(r - &avg))).collect();
    let excess: Vec<f64> = states.iter().map(|r| (r * r).trace().re - avg_purity).collect();
    Ok(PageDeviation { trace_distance: Estimate::from_samples(&dist), second_moment: Estimate::from_samples(&excess) })
}

/// Pauli operators on the first `sites` of `n` qudits.
fn prefix_paulis(n: usize, sites: usize, d: usize) -> Vec<CMat> {
    PauliString::all(sites, d)
        .into_iter()
        .map(|p| {
            let mut powers = p.powers.clone();
            powers.resize(n, (0, 0));
            PauliString::new(d, powers).expect("valid powers").matrix()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64, threads: usize },
}

/// Cap on the number of Pauli pairs in exact mode.
pub const MI_PAIR_CAP: u128 = 1 << 16;

/// Rényi-2 lower bound on `I(R : B ∪ MEM)` in units of `log d`, where Bob
/// holds the first `t` physical qudits:
/// `n + 2k + 2t − log_d Σ_{P_A,P_B} E Tr(P̃_A† P_B† P̃_A P_B)`.
pub fn renyi2_mi_bound(basis: &SchurBasis, k: usize, t: usize, mode: MiMode) -> Result<Estimate> {
    let (n, d) = (basis.n(), basis.d());
    if k == 0 || k > n || t > n {
        return invalid(format!("need 1 <= k <= n and t <= n, got k = {k}, t = {t}, n = {n}"));
    }
    let offset = (n + 2 * k + 2 * t) as f64;
    let ln_d = (d as f64).ln();
    let pa = prefix_paulis(n, k, d);
    match mode {
        MiMode::Exact => {
            let pairs = (d as u128).pow(2 * (k + t) as u32);
            if pairs > MI_PAIR_CAP {
                return Err(Error::Budget { what: "Pauli pairs", needed: pairs, cap: MI_PAIR_CAP });
            }
            let layout = basis.layout();
            let pa_s: Vec<CMat> = pa.iter().map(|p| basis.to_schur(p)).collect::<Result<_>>()?;
            let pb_s: Vec<CMat> = prefix_paulis(n, t, d).iter().map(|p| basis.to_schur(p)).collect::<Result<_>>()?;
            let pa_adj: Vec<CMat> = pa_s.iter().map(|p| p.adjoint()).collect();
            let pb_adj: Vec<CMat> = pb_s.iter().map(|p| p.adjoint()).collect();
            let mut s = ZERO;
            for (a, a_adj) in pa_s.iter().zip(&pa_adj) {
                for (b, b_adj) in pb_s.iter().zip(&pb_adj) {
                    s += quartic_moment(layout, a_adj, b_adj, a, b)?;
                }
            }
            Ok(Estimate { mean: offset - s.re.ln() / ln_d, stderr: 0.0, n: 0 })
        }
        MiMode::MonteCarlo { samples, seed, threads } => {
            if samples == 0 {
                return invalid("need at least one sample");
            }
            let layout = basis.layout().clone();
            let values: Vec<Result<f64>> = parallel_samples(seed, samples, threads, |rng| {
                let u = SymmetricUnitary::sample_with(&layout, rng).full_space(basis)?;
                Ok(pauli_sum_for(&u, &pa, n, t, d))
            });
            let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
            let e = Estimate::from_samples(&values);
            Ok(Estimate { mean: offset - e.mean.ln() / ln_d, stderr: e.stderr / (e.mean * ln_d), n: e.n })
        }
    }
}

/// `Σ_{P_A,P_B} Tr(P̃_A† P_B† P̃_A P_B) = d^t Σ_{P_A} ‖Tr_B(U P_A U†)‖²_F` for one `U`.
pub fn pauli_sum_for(u: &CMat, pa: &[CMat], n: usize, t: usize, d: usize) -> f64 {
    let dims = vec![d; n];
    let keep: Vec<usize> = (t..n).collect();
    let scale = (d as f64).powi(t as i32);
    pa.iter()
        .map(|p| {
            let evolved = u * p * u.adjoint();
            let reduced = partial_trace(&evolved, &dims, &keep);
            scale * reduced.iter().map(C64::norm_sqr).sum::<f64>()
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig2Row {
    pub n: usize,
    pub exact: f64,
    pub approx: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug)]
pub struct Fig2Sweep {
    pub k: usize,
    pub d: usize,
    pub rows: Vec<Fig2Row>,
    /// Log-log fit of `exact` against `n`.
    pub fit: LinearFit,
}

pub fn figure2_sweep(k: usize, n_list: &[usize], d: usize) -> Result<Fig2Sweep> {
    if n_list.len() < 2 {
        return invalid("a sweep needs at least two sizes");
    }
    let rows: Vec<Fig2Row> = n_list
        .iter()
        .map(|&n| {
            let b = choi_error_bound(n, k, d)?;
            Ok(Fig2Row { n, exact: b.exact, approx: b.approx, closed_form: b.closed_form })
        })
        .collect::<Result<_>>()?;
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.exact).collect();
    Ok(Fig2Sweep { k, d, rows, fit: power_law_fit(&x, &y, None) })
}

#[derive(Clone, Debug)]
pub struct RateSweep {
    /// `(n, k, exact)` with `k = ⌊n/4⌋`.
    pub rows: Vec<(usize, usize, f64)>,
    /// Least-squares `α` in `exact ≈ α·k/n`.
    pub alpha: f64,
    /// Smallest `exact·n/k` over the sweep.
    pub min_ratio: f64,
}

/// Averaged-state distance at logical rate `k/n = 1/4`.
pub fn constant_rate_sweep(n_list: &[usize], d: usize) -> Result<RateSweep> {
    let mut rows = Vec::new();
    for &n in n_list {
        let k = n / 4;
        rows.push((n, k, choi_error_bound(n, k, d)?.exact));
    }
    let xs: Vec<f64> = rows.iter().map(|&(n, k, _)| k as f64 / n as f64).collect();
    let sxy: f64 = rows.iter().zip(&xs).map(|(r, x)| r.2 * x).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let min_ratio = rows.iter().zip(&xs).map(|(r, x)| r.2 / x).fold(f64::INFINITY, f64::min);
    Ok(RateSweep { rows, alpha: sxy / sxx, min_ratio })
}
