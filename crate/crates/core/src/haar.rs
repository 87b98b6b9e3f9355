//! Haar-random SU(d)-symmetric unitaries and their exact low moments.
//!
//! A symmetric unitary is `⊕_λ I_{m_λ} ⊗ U_λ` with independent Haar
//! `U_λ ∈ U(d_λ)`. Every moment below is evaluated sector by sector; the
//! doubled space is never formed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, invalid, Result};
use crate::linalg::{c, trace, trace_of_product, CMat, C64, ZERO};
use crate::schur::{assemble_block_diagonal, SchurBasis, SectorLayout};

/// A reproducible random stream: `(master_seed, stream_id)` fixes every draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Standard complex normal (`E|z|² = 1`) by Box-Muller.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    C64::from_polar((-u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}

/// Haar unitary on `U(dim)`: Ginibre, QR, then phases making `diag(R) > 0`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c(1.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[derive(Clone, Debug)]
pub struct SymmetricUnitary {
    pub n: usize,
    pub d: usize,
    /// One `d_λ × d_λ` unitary per sector, in canonical sector order.
    pub blocks: Vec<CMat>,
}

impl SymmetricUnitary {
    pub fn identity(layout: &SectorLayout) -> Self {
        Self {
            n: layout.n,
            d: layout.d,
            blocks: layout.sectors.iter().map(|s| CMat::identity(s.dim, s.dim)).collect(),
        }
    }

    pub fn sample_with<R: Rng + ?Sized>(layout: &SectorLayout, rng: &mut R) -> Self {
        Self {
            n: layout.n,
            d: layout.d,
            blocks: layout.sectors.iter().map(|s| haar_unitary(s.dim, rng)).collect(),
        }
    }

    /// Dense matrix in the Schur basis.
    pub fn schur_matrix(&self, layout: &SectorLayout) -> Result<CMat> {
        assemble_block_diagonal(layout, &self.blocks)
    }

    /// Dense matrix on the computational space.
    pub fn full_space(&self, basis: &SchurBasis) -> Result<CMat> {
        basis.from_schur(&self.schur_matrix(basis.layout())?)
    }

    /// Largest `‖U_λ†U_λ − I‖_F` over sectors.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks.iter().map(crate::linalg::unitarity_defect).fold(0.0, f64::max)
    }
}

pub fn sample(n: usize, d: usize, stream: RngStream) -> Result<SymmetricUnitary> {
    let layout = SectorLayout::new(n, d)?;
    Ok(SymmetricUnitary::sample_with(&layout, &mut stream.rng()))
}

/// Runs `per_worker(worker, rng, count)` on `threads` scoped workers; worker
/// `i` draws from stream `i` and handles a contiguous share of `total`
/// samples. Results come back in ascending worker order.
pub fn parallel_workers<T, F>(master_seed: u64, total: usize, threads: usize, per_worker: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng, usize) -> T + Sync,
{
    let threads = threads.max(1).min(total.max(1));
    let share = |i: usize| total / threads + usize::from(i < total % threads);
    if threads == 1 {
        let mut rng = RngStream::new(master_seed, 0).rng();
        return vec![per_worker(0, &mut rng, total)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let f = &per_worker;
                scope.spawn(move || {
                    let mut rng = RngStream::new(master_seed, i as u64).rng();
                    f(i, &mut rng, share(i))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Sample values from [`parallel_workers`], concatenated in worker order.
pub fn parallel_samples<T, F>(master_seed: u64, total: usize, threads: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    parallel_workers(master_seed, total, threads, |_, rng, count| (0..count).map(|_| draw(rng)).collect::<Vec<T>>())
        .into_iter()
        .flatten()
        .collect()
}

/// Partial trace over `S^λ` of an `(m·D) × (m'·D)` sector block.
pub fn trace_over_irrep(block: &CMat, dim: usize) -> CMat {
    let (m1, m2) = (block.nrows() / dim, block.ncols() / dim);
    CMat::from_fn(m1, m2, |a, b| (0..dim).map(|t| block[(a * dim + t, b * dim + t)]).sum())
}

/// `E[U x U†]` for a matrix written in the Schur basis.
pub fn first_moment(layout: &SectorLayout, x: &CMat) -> Result<CMat> {
    check_dim(layout.total, x.nrows())?;
    check_dim(layout.total, x.ncols())?;
    let mut out = CMat::zeros(layout.total, layout.total);
    for (s, sec) in layout.sectors.iter().enumerate() {
        let hat = trace_over_irrep(&layout.block(x, s, s), sec.dim) / c(sec.dim as f64);
        let blk = hat.kronecker(&CMat::identity(sec.dim, sec.dim));
        out.view_mut((sec.offset, sec.offset), (sec.width(), sec.width())).copy_from(&blk);
    }
    Ok(out)
}

/// Weingarten values `(Wg(id), Wg(swap))` on `U(D)` at second order.
fn weingarten2(dim: usize) -> (f64, f64) {
    if dim == 1 {
        return (1.0, 0.0);
    }
    let d = dim as f64;
    (1.0 / (d * d - 1.0), -1.0 / (d * (d * d - 1.0)))
}

/// `E Tr(U a U† b U c U† e)` from the traces it depends on.
pub fn haar_quartic_from_traces(
    tr_a: C64,
    tr_b: C64,
    tr_c: C64,
    tr_e: C64,
    tr_ac: C64,
    tr_be: C64,
    dim: usize,
) -> C64 {
    if dim == 1 {
        return tr_a * tr_b * tr_c * tr_e;
    }
    let (w_id, w_sw) = weingarten2(dim);
    (tr_a * tr_c * tr_be + tr_ac * tr_b * tr_e) * w_id + (tr_ac * tr_be + tr_a * tr_c * tr_b * tr_e) * w_sw
}

/// `E_{U(D)} Tr(U a U† b U c U† e)`.
pub fn haar_quartic_trace(a: &CMat, b: &CMat, cm: &CMat, e: &CMat, dim: usize) -> Result<C64> {
    for m in [a, b, cm, e] {
        check_dim(dim, m.nrows())?;
        check_dim(dim, m.ncols())?;
    }
    if dim == 1 {
        return Ok(a[(0, 0)] * b[(0, 0)] * cm[(0, 0)] * e[(0, 0)]);
    }
    Ok(haar_quartic_from_traces(
        trace(a),
        trace(b),
        trace(cm),
        trace(e),
        trace_of_product(a, cm),
        trace_of_product(b, e),
        dim,
    ))
}

/// `(α, β)` with `E[UwU† ⊗ UwU†] = α I⊗I + β F` (`F` the swap).
pub fn pair_moment(w: &CMat, dim: usize) -> Result<(C64, C64)> {
    check_dim(dim, w.nrows())?;
    check_dim(dim, w.ncols())?;
    if dim == 1 {
        return Ok((w[(0, 0)] * w[(0, 0)], ZERO));
    }
    let (t1, t2) = (trace(w), trace_of_product(w, w));
    Ok(pair_moment_from_traces(t1, t2, dim))
}

pub fn pair_moment_from_traces(t1: C64, t2: C64, dim: usize) -> (C64, C64) {
    if dim == 1 {
        return (t2, ZERO);
    }
    let d = dim as f64;
    let den = d * (d * d - 1.0);
    ((t1 * t1 * d - t2) / den, (t2 * d - t1 * t1) / den)
}

/// `E Tr(W̃ A W̃ B)` for a symmetric observable `W = ⊕ I ⊗ W_λ` evolved by a
/// Haar symmetric unitary, with `A`, `B` arbitrary (Schur basis).
pub fn mixed_block_otoc_general(layout: &SectorLayout, w_blocks: &[CMat], a: &CMat, b: &CMat) -> Result<C64> {
    check_dim(layout.sectors.len(), w_blocks.len())?;
    for m in [a, b] {
        check_dim(layout.total, m.nrows())?;
        check_dim(layout.total, m.ncols())?;
    }
    let secs = &layout.sectors;
    let traces: Vec<C64> = w_blocks.iter().map(trace).collect();
    let mut total = ZERO;
    for (s, sec) in secs.iter().enumerate() {
        check_dim(sec.dim, w_blocks[s].nrows())?;
        let a_ss = layout.block(a, s, s);
        let b_ss = layout.block(b, s, s);
        let (alpha, beta) = pair_moment(&w_blocks[s], sec.dim)?;
        let hat_a = trace_over_irrep(&a_ss, sec.dim);
        let hat_b = trace_over_irrep(&b_ss, sec.dim);
        if sec.dim == 1 {
            // W̃_λ is the constant w, no averaging left
            total += alpha * trace_of_product(&a_ss, &b_ss);
        } else {
            total += alpha * trace_of_product(&a_ss, &b_ss) + beta * trace_of_product(&hat_a, &hat_b);
        }
        for (t, tec) in secs.iter().enumerate() {
            if t == s {
                continue;
            }
            let f = traces[s] * traces[t] / c((sec.dim * tec.dim) as f64);
            total += f * trace_of_product(&layout.block(a, s, t), &layout.block(b, t, s));
        }
    }
    Ok(total)
}

/// `E Tr(W̃ P W̃ P)` for Hermitian `P`; real by construction.
pub fn mixed_block_otoc(layout: &SectorLayout, w_blocks: &[CMat], p: &CMat) -> Result<f64> {
    let v = mixed_block_otoc_general(layout, w_blocks, p, p)?;
    if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
        return invalid(format!("probe is not Hermitian: OTOC has imaginary part {}", v.im));
    }
    Ok(v.re)
}

/// `E Tr(U X U† Y U X' U† Y')` for arbitrary `X, Y, X', Y'` in the Schur
/// basis and `U` Haar symmetric.
pub fn quartic_moment(layout: &SectorLayout, x: &CMat, y: &CMat, x2: &CMat, y2: &CMat) -> Result<C64> {
    for m in [x, y, x2, y2] {
        check_dim(layout.total, m.nrows())?;
        check_dim(layout.total, m.ncols())?;
    }
    let secs = &layout.sectors;
    let ns = secs.len();
    let blk = |m: &CMat, s: usize, t: usize| layout.block(m, s, t);
    let lift = |hat: &CMat, dim: usize| hat.kronecker(&CMat::identity(dim, dim));
    let hats = |m: &CMat| -> Vec<CMat> { (0..ns).map(|s| trace_over_irrep(&blk(m, s, s), secs[s].dim)).collect() };
    let (hx, hy, hx2, hy2) = (hats(x), hats(y), hats(x2), hats(y2));
    let mut total = ZERO;
    for l in 0..ns {
        let dl = secs[l].dim;
        for v in 0..ns {
            if v == l {
                continue;
            }
            let dv = secs[v].dim;
            let norm = c((dl * dv) as f64);
            // U-pairs (l = μ, ν = ρ)
            let t1 = lift(&hx[l], dl) * blk(y, l, v) * lift(&hx2[v], dv) * blk(y2, v, l);
            // U-pairs (l = ρ, ν = μ)
            let t2 = blk(x, l, v) * lift(&hy[v], dv) * blk(x2, v, l) * lift(&hy2[l], dl);
            total += (trace(&t1) + trace(&t2)) / norm;
        }
        total += same_sector_quartic(
            &blk(x, l, l),
            &blk(y, l, l),
            &blk(x2, l, l),
            &blk(y2, l, l),
            (&hx[l], &hy[l], &hx2[l], &hy2[l]),
            secs[l].mult,
            dl,
        );
    }
    Ok(total)
}

/// Second-order Weingarten sum inside one sector `ℂ^m ⊗ ℂ^D`.
fn same_sector_quartic(
    x: &CMat,
    y: &CMat,
    x2: &CMat,
    y2: &CMat,
    hats: (&CMat, &CMat, &CMat, &CMat),
    m: usize,
    dim: usize,
) -> C64 {
    let (hx, hy, hx2, hy2) = hats;
    let id = CMat::identity(dim, dim);
    if dim == 1 {
        return trace(&(x * y * x2 * y2));
    }
    let (w_id, w_sw) = weingarten2(dim);
    let t_id = trace(&(hx.kronecker(&id) * y * hx2.kronecker(&id) * y2));
    let t_sw = trace(&(x * hy.kronecker(&id) * x2 * hy2.kronecker(&id)));
    let t_hat = trace(&(hx * hy * hx2 * hy2));
    // Σ_{abce} Xt[(a,b),(c,e)] · Yt[(b,c),(e,a)]
    let at = |mat: &CMat, a: usize, i: usize, b: usize, j: usize| mat[(a * dim + i, b * dim + j)];
    let mm = m * m;
    let dd = dim * dim;
    let m1 = CMat::from_fn(mm, dd, |ab, jj| at(x, ab / m, jj / dim, ab % m, jj % dim));
    let m2 = CMat::from_fn(dd, mm, |jj, ce| at(x2, ce / m, jj % dim, ce % m, jj / dim));
    let xt = m1 * m2;
    let n1 = CMat::from_fn(mm, dd, |bc, ik| at(y, bc / m, ik / dim, bc % m, ik % dim));
    let n2 = CMat::from_fn(dd, mm, |ik, ea| at(y2, ea / m, ik % dim, ea % m, ik / dim));
    let yt = n1 * n2;
    let mut t_cross = ZERO;
    for a in 0..m {
        for b in 0..m {
            for cc in 0..m {
                for e in 0..m {
                    t_cross += xt[(a * m + b, cc * m + e)] * yt[(b * m + cc, e * m + a)];
                }
            }
        }
    }
    (t_id + t_sw) * w_id + (t_hat + t_cross) * w_sw
}
