//! Late-time OTOCs of the exchange interaction under Haar symmetric
//! dynamics.
//!
//! `W = (d S₁₂ − I)/√(d²−1)` is evolved to `W̃ = U W U†` with `U` a Haar
//! SU(d)-symmetric unitary, and `F = E Tr(W̃† V† W̃ V)/d^n` is evaluated
//! either for another exchange probe `V = V_r` or averaged over the
//! non-identity Paulis `V = P_r` on one site.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::haar::{haar_quartic_from_traces, mixed_block_otoc_general, parallel_samples, SymmetricUnitary};
use crate::irrep::{IrrepBlockRep, ObservableExpansion};
use crate::linalg::{c, trace_of_product, CMat, C64};
use crate::perm::Permutation;
use crate::rep::{character, Partition};
use crate::schur::{build_schur_basis, SchurBasis, SectorLayout};
use crate::stats::{power_law_fit, Estimate, LinearFit};

/// `X^{x} Z^{z}` per site, with `X|j⟩ = |j+1⟩` and `Z|j⟩ = ω^j|j⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    pub d: usize,
    pub powers: Vec<(usize, usize)>,
}

impl PauliString {
    pub fn new(d: usize, powers: Vec<(usize, usize)>) -> Result<Self> {
        if d < 2 || powers.iter().any(|&(x, z)| x >= d || z >= d) {
            return invalid("Pauli powers must lie in 0..d with d >= 2");
        }
        Ok(Self { d, powers })
    }

    /// `X^x Z^z` on one site (one-based), identity elsewhere.
    pub fn single_site(n: usize, d: usize, site: usize, x: usize, z: usize) -> Result<Self> {
        if site == 0 || site > n {
            return invalid(format!("site {site} out of range 1..={n}"));
        }
        let mut powers = vec![(0, 0); n];
        powers[site - 1] = (x, z);
        Self::new(d, powers)
    }

    pub fn n(&self) -> usize {
        self.powers.len()
    }

    pub fn is_identity(&self) -> bool {
        self.powers.iter().all(|&p| p == (0, 0))
    }

    pub fn local(d: usize, x: usize, z: usize) -> CMat {
        let omega = C64::from_polar(1.0, std::f64::consts::TAU / d as f64);
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            m[((j + x) % d, j)] = omega.powu((z * j) as u32);
        }
        m
    }

    pub fn matrix(&self) -> CMat {
        self.powers
            .iter()
            .fold(CMat::identity(1, 1), |acc, &(x, z)| acc.kronecker(&Self::local(self.d, x, z)))
    }

    /// All `d^{2n}` strings in lexicographic order of their powers.
    pub fn all(n: usize, d: usize) -> Vec<Self> {
        let count = d.pow(2 * n as u32);
        (0..count)
            .map(|mut k| {
                let mut powers = vec![(0, 0); n];
                for site in (0..n).rev() {
                    let z = k % d;
                    k /= d;
                    let x = k % d;
                    k /= d;
                    powers[site] = (x, z);
                }
                Self { d, powers }
            })
            .collect()
    }

    /// The `d² − 1` non-identity strings supported on `site`.
    pub fn nontrivial_on_site(n: usize, d: usize, site: usize) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for x in 0..d {
            for z in 0..d {
                if (x, z) != (0, 0) {
                    out.push(Self::single_site(n, d, site, x, z)?);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OtocMode {
    /// Single-site Pauli probes, averaged over the non-identity Paulis.
    PauliChargeDensity,
    /// Exchange probe `V_r` on sites `r, r+1`.
    SymmetricExchange,
}

impl fmt::Display for OtocMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OtocMode::PauliChargeDensity => "pauli",
            OtocMode::SymmetricExchange => "sym",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Exact,
    MonteCarlo { samples: usize, seed: u64, threads: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OtocResult {
    pub n: usize,
    pub d: usize,
    pub mode: OtocMode,
    pub r: usize,
    pub value: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: Option<u64>,
}

impl OtocResult {
    /// `C = 1 − F`.
    pub fn commutator(&self) -> f64 {
        1.0 - self.value
    }
}

/// Default probe site.
pub fn default_site(n: usize) -> usize {
    (n / 2).max(1)
}

/// The exchange interaction on sites `(1, 2)`.
pub fn build_w(n: usize, d: usize) -> Result<ObservableExpansion> {
    if n < 2 {
        return invalid("the exchange observable needs n >= 2");
    }
    ObservableExpansion::exchange(n, 1, d)
}

/// `W_λ` for every sector, on sites `(r, r+1)`.
pub fn exchange_blocks(layout: &SectorLayout, r: usize) -> Result<Vec<CMat>> {
    layout
        .sectors
        .iter()
        .map(|s| Ok(IrrepBlockRep::new(&s.lambda).exchange(r, layout.d)?.map(c)))
        .collect()
}

fn powf(d: usize, n: usize) -> f64 {
    (d as f64).powi(n as i32)
}

/// Exact `(1/d^n) E Tr(W̃ V_r W̃ V_r)` from sector traces alone: every
/// transposition has character `χ_λ(τ)`, so only `d_λ`, `m_λ` and `χ_λ(τ)`
/// enter.
pub fn otoc_symmetric_exact(n: usize, d: usize, r: usize) -> Result<OtocResult> {
    if n < 2 || r == 0 || r >= n {
        return invalid(format!("exchange probe needs 1 <= r < n, got r = {r}, n = {n}"));
    }
    if d < 2 {
        return invalid("d must be at least 2");
    }
    let mut tau = vec![2];
    tau.extend(std::iter::repeat_n(1, n - 2));
    let tau = Partition::new(tau)?;
    let s2 = (d * d - 1) as f64;
    let df = d as f64;
    let mut total = 0.0;
    for lambda in crate::rep::enumerate_partitions(n, d) {
        let dim = crate::rep::hook_dimension(&lambda)? as f64;
        let mult = crate::rep::weyl_multiplicity(&lambda, d)? as f64;
        let chi = character(&lambda, &tau)? as f64;
        let t1 = (df * chi - dim) / s2.sqrt();
        let t2 = (df * df * dim - 2.0 * df * chi + dim) / s2;
        let (t1, t2) = (c(t1), c(t2));
        let dim_u = usize::try_from(crate::rep::hook_dimension(&lambda)?).map_err(|_| Error::Overflow("d_λ"))?;
        total += mult * haar_quartic_from_traces(t1, t1, t1, t1, t2, t2, dim_u).re;
    }
    Ok(OtocResult {
        n,
        d,
        mode: OtocMode::SymmetricExchange,
        r,
        value: total / powf(d, n),
        stderr: 0.0,
        n_samples: 0,
        seed: None,
    })
}

/// Monte Carlo `(1/d^n) Tr(W̃ V_r W̃ V_r)` with `V_r` taken from the dense
/// permutation operator conjugated into the Schur basis.
pub fn otoc_symmetric_mc(basis: &SchurBasis, r: usize, samples: usize, seed: u64, threads: usize) -> Result<OtocResult> {
    let (n, d) = (basis.n(), basis.d());
    if r == 0 || r >= n {
        return invalid(format!("exchange probe needs 1 <= r < n, got r = {r}"));
    }
    let layout = basis.layout();
    let w_blocks = exchange_blocks(layout, 1)?;
    let v = basis.to_schur(&ObservableExpansion::exchange(n, r, d)?.full_space(d)?)?;
    let norm = powf(d, n);
    let values = parallel_samples(seed, samples, threads, |rng| {
        let u = SymmetricUnitary::sample_with(layout, rng);
        let wt = evolved(layout, &u, &w_blocks);
        let m = &wt * &v;
        trace_of_product(&m, &m).re / norm
    });
    let e = Estimate::from_samples(&values);
    Ok(OtocResult {
        n,
        d,
        mode: OtocMode::SymmetricExchange,
        r,
        value: e.mean,
        stderr: e.stderr,
        n_samples: samples,
        seed: Some(seed),
    })
}

/// `U W U†` in the Schur basis for block-diagonal `W`.
fn evolved(layout: &SectorLayout, u: &SymmetricUnitary, w_blocks: &[CMat]) -> CMat {
    let blocks: Vec<CMat> = u.blocks.iter().zip(w_blocks).map(|(ub, wb)| ub * wb * ub.adjoint()).collect();
    crate::schur::assemble_block_diagonal(layout, &blocks).expect("layout matches")
}

/// Pauli probe average `(1/d^n)(1/(d²−1)) Σ_{P_r ≠ I} E Tr(W̃† P_r† W̃ P_r)`.
pub fn otoc_pauli(basis: &SchurBasis, r: usize, eval: Evaluation) -> Result<OtocResult> {
    let (n, d) = (basis.n(), basis.d());
    let layout = basis.layout();
    let w_blocks = exchange_blocks(layout, 1)?;
    let paulis: Vec<CMat> = PauliString::nontrivial_on_site(n, d, r)?
        .iter()
        .map(|p| basis.to_schur(&p.matrix()))
        .collect::<Result<_>>()?;
    let norm = powf(d, n) * (d * d - 1) as f64;
    match eval {
        Evaluation::Exact => {
            if d != 2 {
                return Err(Error::Unsupported("exact Pauli-probe OTOC is implemented for d = 2 only".into()));
            }
            let mut total = 0.0;
            for p in &paulis {
                // X^x Z^z need not be Hermitian, so keep the adjoint
                total += mixed_block_otoc_general(layout, &w_blocks, &p.adjoint(), p)?.re;
            }
            Ok(OtocResult {
                n,
                d,
                mode: OtocMode::PauliChargeDensity,
                r,
                value: total / norm,
                stderr: 0.0,
                n_samples: 0,
                seed: None,
            })
        }
        Evaluation::MonteCarlo { samples, seed, threads } => {
            let values = parallel_samples(seed, samples, threads, |rng| {
                let u = SymmetricUnitary::sample_with(layout, rng);
                let wt = evolved(layout, &u, &w_blocks);
                let mut s = 0.0;
                for p in &paulis {
                    // W̃ is Hermitian: Tr(W̃ P† W̃ P)
                    s += trace_of_product(&(&wt * p.adjoint()), &(&wt * p)).re;
                }
                s / norm
            });
            let e = Estimate::from_samples(&values);
            Ok(OtocResult {
                n,
                d,
                mode: OtocMode::PauliChargeDensity,
                r,
                value: e.mean,
                stderr: e.stderr,
                n_samples: samples,
                seed: Some(seed),
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub rows: Vec<OtocResult>,
    pub fit: LinearFit,
}

/// Evaluates `F` for each `n` in `n_min..=n_max` and fits `log F` against
/// `log n`. Exact points are fitted unweighted; Monte Carlo points are
/// weighted by `(F/stderr)²`, the inverse variance of `log F`.
pub fn scaling_sweep(
    n_min: usize,
    n_max: usize,
    d: usize,
    mode: OtocMode,
    r: Option<usize>,
    eval: Evaluation,
) -> Result<Sweep> {
    if n_min < 2 || n_max < n_min {
        return invalid(format!("sweep range {n_min}..={n_max} is empty or starts below 2"));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let site = r.unwrap_or_else(|| default_site(n));
        let row = match (mode, eval) {
            (OtocMode::SymmetricExchange, Evaluation::Exact) => otoc_symmetric_exact(n, d, site.min(n - 1))?,
            (OtocMode::SymmetricExchange, Evaluation::MonteCarlo { samples, seed, threads }) => {
                let basis = build_schur_basis(n, d)?;
                otoc_symmetric_mc(&basis, site.min(n - 1), samples, seed.wrapping_add(n as u64), threads)?
            }
            (OtocMode::PauliChargeDensity, e) => {
                let basis = build_schur_basis(n, d)?;
                let e = match e {
                    Evaluation::MonteCarlo { samples, seed, threads } => {
                        Evaluation::MonteCarlo { samples, seed: seed.wrapping_add(n as u64), threads }
                    }
                    Evaluation::Exact => Evaluation::Exact,
                };
                otoc_pauli(&basis, site.min(n), e)?
            }
        };
        rows.push(row);
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.value).collect();
    if y.iter().any(|&v| v <= 0.0) {
        return Err(Error::Unsupported("non-positive OTOC values cannot be fitted on a log scale".into()));
    }
    let fit = match eval {
        Evaluation::Exact => power_law_fit(&x, &y, None),
        Evaluation::MonteCarlo { .. } => {
            let w: Vec<f64> = rows.iter().map(|r| if r.stderr > 0.0 { (r.value / r.stderr).powi(2) } else { 1.0 }).collect();
            power_law_fit(&x, &y, Some(&w))
        }
    };
    Ok(Sweep { rows, fit })
}

/// `[W, u^{⊗n}]` Frobenius norm for a single-qudit unitary `u`.
pub fn transversal_commutator(w: &CMat, u: &CMat, n: usize) -> f64 {
    let mut un = CMat::identity(1, 1);
    for _ in 0..n {
        un = un.kronecker(u);
    }
    crate::linalg::frobenius(&(w * &un - &un * w))
}

/// `P(σ)` as a dense complex matrix (helper for cross-checks).
pub fn permutation_operator(sigma: &Permutation, d: usize) -> CMat {
    crate::perm::permutation_matrix(sigma, d).map(c)
}
