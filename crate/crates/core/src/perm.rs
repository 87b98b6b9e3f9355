//! Permutations of qudit sites and their action on `(ℂ^d)^{⊗n}`.
//!
//! `P(σ)` moves the content of site `k` to site `σ(k)`, which makes
//! `σ ↦ P(σ)` a homomorphism. Sites are zero-based internally; adjacent
//! transpositions `s_j = (j, j+1)` use one-based `j` to match the usual
//! generator labels.

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return invalid(format!("{images:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds from one-based cycles, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n || seen[a - 1] {
                    return invalid(format!("cycle {cycle:?} is invalid for n = {n}"));
                }
                seen[a - 1] = true;
                images[a - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    /// The adjacent transposition `(j, j+1)`, one-based.
    pub fn adjacent(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j < n, "adjacent transposition index {j} out of range for n = {n}");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(j - 1, j);
        Self { images }
    }

    /// The transposition `(a, b)`, one-based.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a - 1, b - 1);
        Self { images }
    }

    /// Product of adjacent transpositions `s_{w_1} ∘ s_{w_2} ∘ ⋯`.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &j in word {
            if j == 0 || j >= n {
                return invalid(format!("word letter {j} out of range for n = {n}"));
            }
            p = p.compose(&Self::adjacent(n, j));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// A reduced word in adjacent transpositions (bubble-sort decomposition):
    /// `self = s_{w_1} ∘ ⋯ ∘ s_{w_m}` with `m` the inversion count.
    pub fn to_word(&self) -> Vec<usize> {
        let mut p = self.clone();
        let mut rev = Vec::new();
        while let Some(i) = (0..p.n().saturating_sub(1)).find(|&i| p.images[i] > p.images[i + 1]) {
            p = p.compose(&Self::adjacent(p.n(), i + 1));
            rev.push(i + 1);
        }
        rev.reverse();
        rev
    }

    /// Cycle type as a partition-shaped vector of cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut lens = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    /// All permutations of `n` points (Heap's algorithm order).
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut a: Vec<usize> = (0..n).collect();
        let mut c = vec![0; n];
        out.push(Self { images: a.clone() });
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(Self { images: a.clone() });
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }
}

/// Digit `site` (zero-based, site 0 most significant) of a computational
/// basis index.
pub fn digit(index: usize, site: usize, n: usize, d: usize) -> usize {
    (index / d.pow((n - 1 - site) as u32)) % d
}

/// Index table of `P(σ)`: basis state `i` maps to basis state `table[i]`.
pub fn site_permutation_table(sigma: &Permutation, d: usize) -> Vec<usize> {
    let n = sigma.n();
    let dim = d.pow(n as u32);
    let weights: Vec<usize> = (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect();
    (0..dim)
        .map(|i| (0..n).map(|k| digit(i, k, n, d) * weights[sigma.image(k)]).sum())
        .collect()
}

/// Dense real matrix of `P(σ)`.
pub fn permutation_matrix(sigma: &Permutation, d: usize) -> crate::linalg::RMat {
    let table = site_permutation_table(sigma, d);
    let mut m = crate::linalg::RMat::zeros(table.len(), table.len());
    for (i, &j) in table.iter().enumerate() {
        m[(j, i)] = 1.0;
    }
    m
}
