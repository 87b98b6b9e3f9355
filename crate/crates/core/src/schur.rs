//! Explicit Schur transform on `(ℂ^d)^{⊗n}`.
//!
//! Columns of `q` are grouped by sector `λ`; within a sector, column
//! `offset + a·d_λ + t` holds multiplicity index `a` and Gelfand-Tsetlin
//! index `t`, so a permutation operator becomes `⊕_λ I_{m_λ} ⊗ π_λ(σ)` and a
//! transversal `u^{⊗n}` becomes `⊕_λ A_λ ⊗ I_{d_λ}`.
//!
//! Construction, for every sector and every letter-count weight:
//! 1. restrict to the weight subspace;
//! 2. project successively onto the eigenspaces `X_k = c_k(T₀)` of the
//!    Jucys-Murphy operators, where `T₀` is the first tableau;
//! 3. orthonormalize the projected computational basis vectors in index
//!    order to get multiplicity vectors, first nonzero amplitude positive;
//! 4. generate the remaining tableau vectors from each one by the
//!    Young-orthogonal raising relation along swaps `j ↔ j+1`.
//!
//! The result is real orthogonal, so `q` is stored as a real matrix.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::{DVector, SymmetricEigen};

use crate::error::{check_dim, Error, Result};
use crate::irrep::IrrepBlockRep;
use crate::linalg::{conjugate_by_real, unconjugate_by_real, CMat, RMat};
use crate::perm::{digit, site_permutation_table, Permutation};
use crate::rep::{enumerate_syt, sectors, Partition, StandardTableau};

/// Largest `d^n` for which a dense basis is built.
pub const DENSE_CAP: usize = 4096;

const CACHE_MAGIC: &[u8; 8] = b"SCHURQ\0\0";
const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub lambda: Partition,
    pub dim: usize,
    pub mult: usize,
    pub offset: usize,
}

impl Sector {
    pub fn width(&self) -> usize {
        self.dim * self.mult
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width()
    }
}

/// Sector dimensions and column offsets, without building any basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorLayout {
    pub n: usize,
    pub d: usize,
    pub sectors: Vec<Sector>,
    pub total: usize,
}

impl SectorLayout {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let mut offset = 0usize;
        let mut out = Vec::new();
        for meta in sectors(n, d)? {
            let dim = usize::try_from(meta.dim).map_err(|_| Error::Overflow("d_λ"))?;
            let mult = usize::try_from(meta.mult).map_err(|_| Error::Overflow("m_λ"))?;
            out.push(Sector { lambda: meta.lambda, dim, mult, offset });
            offset = dim
                .checked_mul(mult)
                .and_then(|w| w.checked_add(offset))
                .ok_or(Error::Overflow("sector offsets"))?;
        }
        Ok(Self { n, d, sectors: out, total: offset })
    }

    pub fn sector_index(&self, lambda: &Partition) -> Option<usize> {
        self.sectors.iter().position(|s| &s.lambda == lambda)
    }

    /// The `(s, t)` block of a matrix written in the Schur basis.
    pub fn block(&self, m: &CMat, s: usize, t: usize) -> CMat {
        let (a, b) = (&self.sectors[s], &self.sectors[t]);
        m.view((a.offset, b.offset), (a.width(), b.width())).into_owned()
    }
}

/// Column label: sector, multiplicity index, tableau index (all zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnLabel {
    pub sector: usize,
    pub mult_index: usize,
    pub gt_index: usize,
}

#[derive(Clone, Debug)]
pub struct SchurBasis {
    layout: SectorLayout,
    q: RMat,
    labels: Vec<ColumnLabel>,
}

impl SchurBasis {
    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn d(&self) -> usize {
        self.layout.d
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn q(&self) -> &RMat {
        &self.q
    }

    pub fn layout(&self) -> &SectorLayout {
        &self.layout
    }

    pub fn labels(&self) -> &[ColumnLabel] {
        &self.labels
    }

    /// `q† m q`.
    pub fn to_schur(&self, m: &CMat) -> Result<CMat> {
        check_dim(self.dim(), m.nrows())?;
        check_dim(self.dim(), m.ncols())?;
        Ok(conjugate_by_real(&self.q, m))
    }

    /// `q m q†`.
    pub fn from_schur(&self, m: &CMat) -> Result<CMat> {
        check_dim(self.dim(), m.nrows())?;
        check_dim(self.dim(), m.ncols())?;
        Ok(unconjugate_by_real(&self.q, m))
    }

    /// `⊕_λ I_{m_λ} ⊗ B_λ` from one block per sector.
    pub fn assemble_blocks(&self, blocks: &[CMat]) -> Result<CMat> {
        assemble_block_diagonal(&self.layout, blocks)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_u32::<LittleEndian>(CACHE_VERSION)?;
        w.write_u32::<LittleEndian>(self.n() as u32)?;
        w.write_u32::<LittleEndian>(self.d() as u32)?;
        w.write_u64::<LittleEndian>(self.dim() as u64)?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                w.write_f64::<LittleEndian>(self.q[(i, j)])?;
                w.write_f64::<LittleEndian>(0.0)?;
            }
        }
        for l in &self.labels {
            let parts = self.layout.sectors[l.sector].lambda.parts();
            w.write_u32::<LittleEndian>(parts.len() as u32)?;
            for &p in parts {
                w.write_u32::<LittleEndian>(p as u32)?;
            }
            w.write_u32::<LittleEndian>(l.mult_index as u32)?;
            w.write_u32::<LittleEndian>(l.gt_index as u32)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != CACHE_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = r.read_u32::<LittleEndian>()? as usize;
        let d = r.read_u32::<LittleEndian>()? as usize;
        let dim = r.read_u64::<LittleEndian>()? as usize;
        let layout = SectorLayout::new(n, d)?;
        if layout.total != dim || dim > DENSE_CAP {
            return Err(Error::Format(format!("dimension {dim} inconsistent with n = {n}, d = {d}")));
        }
        let mut q = RMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                q[(i, j)] = r.read_f64::<LittleEndian>()?;
                if r.read_f64::<LittleEndian>()? != 0.0 {
                    return Err(Error::Format("complex entries are not produced by this builder".into()));
                }
            }
        }
        let mut labels = Vec::with_capacity(dim);
        for _ in 0..dim {
            let len = r.read_u32::<LittleEndian>()? as usize;
            if len == 0 || len > d {
                return Err(Error::Format(format!("partition length {len}")));
            }
            let mut parts = Vec::with_capacity(len);
            for _ in 0..len {
                parts.push(r.read_u32::<LittleEndian>()? as usize);
            }
            let lambda = Partition::new(parts).map_err(|e| Error::Format(e.to_string()))?;
            let sector = layout
                .sector_index(&lambda)
                .ok_or_else(|| Error::Format(format!("unknown sector {lambda}")))?;
            let mult_index = r.read_u32::<LittleEndian>()? as usize;
            let gt_index = r.read_u32::<LittleEndian>()? as usize;
            labels.push(ColumnLabel { sector, mult_index, gt_index });
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(Self { layout, q, labels })
    }
}

/// `⊕_λ I_{m_λ} ⊗ B_λ` as a dense matrix in the Schur basis.
pub fn assemble_block_diagonal(layout: &SectorLayout, blocks: &[CMat]) -> Result<CMat> {
    check_dim(layout.sectors.len(), blocks.len())?;
    let mut m = CMat::zeros(layout.total, layout.total);
    for (s, b) in layout.sectors.iter().zip(blocks) {
        check_dim(s.dim, b.nrows())?;
        check_dim(s.dim, b.ncols())?;
        for a in 0..s.mult {
            let o = s.offset + a * s.dim;
            m.view_mut((o, o), (s.dim, s.dim)).copy_from(b);
        }
    }
    Ok(m)
}

/// Letter-count vectors of length `d` summing to `n`, decreasing
/// lexicographically.
fn weights(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=rem).rev() {
            cur.push(v);
            go(rem - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, d, &mut Vec::new(), &mut out);
    out
}

fn dominated_by(w: &[usize], lambda: &Partition) -> bool {
    let mut sorted = w.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let (mut sw, mut sl) = (0, 0);
    for (i, &x) in sorted.iter().enumerate() {
        sw += x;
        sl += lambda.parts().get(i).copied().unwrap_or(0);
        if sw > sl {
            return false;
        }
    }
    true
}

/// Orthonormal vectors of the `T₀` Jucys-Murphy eigenspace inside one
/// weight subspace, in canonical order, as weight-space coordinates.
fn reference_vectors(
    targets: &[i64],
    idxs: &[usize],
    pos: &[usize],
    n: usize,
    d: usize,
) -> Vec<DVector<f64>> {
    let len = idxs.len();
    let mut basis = RMat::identity(len, len);
    // transposition (i, k) swaps digits i-1 and k-1 of a basis index
    let swap_digits = |idx: usize, i: usize, k: usize| -> usize {
        let (a, b) = (digit(idx, i, n, d), digit(idx, k, n, d));
        let (wi, wk) = (d.pow((n - 1 - i) as u32), d.pow((n - 1 - k) as u32));
        idx - a * wi - b * wk + b * wi + a * wk
    };
    for k in 2..=n {
        if basis.ncols() == 0 {
            break;
        }
        let mut xb = RMat::zeros(len, basis.ncols());
        for i in 1..k {
            for (p, &idx) in idxs.iter().enumerate() {
                let pp = pos[swap_digits(idx, i - 1, k - 1)];
                for col in 0..basis.ncols() {
                    xb[(pp, col)] += basis[(p, col)];
                }
            }
        }
        let g = basis.tr_mul(&xb);
        let g = (&g + g.transpose()) * 0.5;
        let e = SymmetricEigen::new(g);
        let target = targets[k - 1] as f64;
        let keep: Vec<usize> = (0..e.eigenvalues.len()).filter(|&i| (e.eigenvalues[i] - target).abs() < 0.5).collect();
        let v = RMat::from_fn(e.eigenvectors.nrows(), keep.len(), |r, c| e.eigenvectors[(r, keep[c])]);
        basis = &basis * v;
    }
    let r = basis.ncols();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(r);
    for p in 0..len {
        if out.len() == r {
            break;
        }
        let mut v = &basis * basis.row(p).transpose();
        for _ in 0..2 {
            for u in &out {
                let ov = u.dot(&v);
                v -= u * ov;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= norm;
            if let Some(&first) = v.iter().find(|x| x.abs() > 1e-9) {
                if first < 0.0 {
                    v = -v;
                }
            }
            out.push(v);
        }
    }
    out
}

/// Breadth-first spanning tree of the tableau swap graph rooted at the first
/// tableau: `parent[t] = (parent index, j)`.
fn swap_tree(tabs: &[StandardTableau]) -> Vec<Option<(usize, usize)>> {
    let n = tabs[0].shape().n();
    let index: std::collections::HashMap<&[Vec<usize>], usize> =
        tabs.iter().enumerate().map(|(i, t)| (t.rows(), i)).collect();
    let mut parent = vec![None; tabs.len()];
    let mut seen = vec![false; tabs.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut order = Vec::new();
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for j in 1..n {
            if let Some(s) = tabs[a].swapped(j) {
                let b = index[s.rows()];
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = Some((a, j));
                    queue.push_back(b);
                }
            }
        }
    }
    debug_assert_eq!(order.len(), tabs.len());
    parent
}

pub fn build_schur_basis(n: usize, d: usize) -> Result<SchurBasis> {
    if n == 0 || d == 0 {
        return crate::error::invalid("Schur basis needs n >= 1 and d >= 1");
    }
    let dim = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if dim > DENSE_CAP as u128 {
        return Err(Error::Budget { what: "dense Schur basis d^n", needed: dim, cap: DENSE_CAP as u128 });
    }
    let dim = dim as usize;
    let layout = SectorLayout::new(n, d)?;
    debug_assert_eq!(layout.total, dim);

    let weight_of = |idx: usize| -> Vec<usize> {
        let mut w = vec![0; d];
        for s in 0..n {
            w[digit(idx, s, n, d)] += 1;
        }
        w
    };
    let all_weights = weights(n, d);
    let mut by_weight: Vec<Vec<usize>> = vec![Vec::new(); all_weights.len()];
    let mut pos = vec![0usize; dim];
    for idx in 0..dim {
        let w = weight_of(idx);
        let wi = all_weights.iter().position(|x| *x == w).expect("weight enumerated");
        pos[idx] = by_weight[wi].len();
        by_weight[wi].push(idx);
    }
    let adjacent: Vec<Vec<usize>> = (1..n).map(|j| site_permutation_table(&Permutation::adjacent(n, j), d)).collect();

    let mut q = RMat::zeros(dim, dim);
    let mut labels = vec![ColumnLabel { sector: 0, mult_index: 0, gt_index: 0 }; dim];
    for (si, sector) in layout.sectors.iter().enumerate() {
        let tabs = enumerate_syt(&sector.lambda);
        let targets = tabs[0].content_vector();
        let mut refs: Vec<DVector<f64>> = Vec::with_capacity(sector.mult);
        for (wi, w) in all_weights.iter().enumerate() {
            if !dominated_by(w, &sector.lambda) {
                continue;
            }
            let idxs = &by_weight[wi];
            for v in reference_vectors(&targets, idxs, &pos, n, d) {
                let mut full = DVector::zeros(dim);
                for (p, &idx) in idxs.iter().enumerate() {
                    full[idx] = v[p];
                }
                refs.push(full);
            }
        }
        if refs.len() != sector.mult {
            return Err(Error::Unsupported(format!(
                "sector {} produced {} multiplicity vectors, expected {}",
                sector.lambda,
                refs.len(),
                sector.mult
            )));
        }
        let parent = swap_tree(&tabs);
        let mut order: Vec<usize> = (1..tabs.len()).collect();
        // parents precede children in BFS discovery order
        order.sort_by_key(|&t| depth(&parent, t));
        for (a, v0) in refs.into_iter().enumerate() {
            let mut vecs: Vec<Option<DVector<f64>>> = vec![None; tabs.len()];
            vecs[0] = Some(v0);
            for &t in &order {
                let (p, j) = parent[t].expect("spanning tree covers every tableau");
                let vp = vecs[p].as_ref().expect("parent built first");
                let r = (tabs[p].content(j + 1) - tabs[p].content(j)) as f64;
                let mut sv = DVector::zeros(dim);
                for (i, &k) in adjacent[j - 1].iter().enumerate() {
                    sv[k] = vp[i];
                }
                let v = (sv - vp / r) / (1.0 - 1.0 / (r * r)).sqrt();
                vecs[t] = Some(v);
            }
            for (t, v) in vecs.into_iter().enumerate() {
                let col = sector.offset + a * sector.dim + t;
                q.set_column(col, &v.expect("all tableau vectors built"));
                labels[col] = ColumnLabel { sector: si, mult_index: a, gt_index: t };
            }
        }
    }
    Ok(SchurBasis { layout, q, labels })
}

fn depth(parent: &[Option<(usize, usize)>], mut t: usize) -> usize {
    let mut k = 0;
    while let Some((p, _)) = parent[t] {
        t = p;
        k += 1;
    }
    k
}

/// Largest Frobenius residual of `q† S_j q` against `⊕ I ⊗ π_λ(s_j)`.
pub fn block_residual(basis: &SchurBasis) -> Result<f64> {
    let n = basis.n();
    let reps: Vec<IrrepBlockRep> = basis.layout.sectors.iter().map(|s| IrrepBlockRep::new(&s.lambda)).collect();
    let mut worst = 0f64;
    for j in 1..n {
        let table = site_permutation_table(&Permutation::adjacent(n, j), basis.d());
        // S_j q: row table[i] of the product is row i of q
        let mut sq = RMat::zeros(basis.dim(), basis.dim());
        for (i, &k) in table.iter().enumerate() {
            sq.set_row(k, &basis.q.row(i));
        }
        let conj = basis.q.tr_mul(&sq);
        let mut expected = RMat::zeros(basis.dim(), basis.dim());
        for (s, rep) in basis.layout.sectors.iter().zip(&reps) {
            let g = rep.generator(j)?;
            for a in 0..s.mult {
                let o = s.offset + a * s.dim;
                expected.view_mut((o, o), (s.dim, s.dim)).copy_from(g);
            }
        }
        worst = worst.max((conj - expected).norm());
    }
    Ok(worst)
}
