//! Young orthogonal form: the `S_n` action inside one sector `S^λ`.
//!
//! Basis vectors are standard tableaux in last-letter order. With axial
//! distance `r = c(j+1) - c(j)` (content difference in tableau `T`),
//! `π((j, j+1))` has diagonal entry `1/r` at `T` and off-diagonal entry
//! `√(1 - 1/r²)` linking `T` to the tableau with `j` and `j+1` exchanged.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::linalg::{c, CMat, C64, RMat};
use crate::perm::{site_permutation_table, Permutation};
use crate::rep::{enumerate_syt, Partition, StandardTableau};

/// Dense Young-orthogonal-form generators for one shape.
#[derive(Clone, Debug)]
pub struct IrrepBlockRep {
    lambda: Partition,
    tableaux: Vec<StandardTableau>,
    gens: Vec<RMat>,
}

fn axial_distance(t: &StandardTableau, j: usize) -> f64 {
    (t.content(j + 1) - t.content(j)) as f64
}

impl IrrepBlockRep {
    pub fn new(lambda: &Partition) -> Self {
        let tableaux = enumerate_syt(lambda);
        let index: HashMap<Vec<Vec<usize>>, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t.rows().to_vec(), i)).collect();
        let dim = tableaux.len();
        let n = lambda.n();
        let gens = (1..n)
            .map(|j| {
                let mut g = RMat::zeros(dim, dim);
                for (a, t) in tableaux.iter().enumerate() {
                    let r = axial_distance(t, j);
                    g[(a, a)] = 1.0 / r;
                    if let Some(s) = t.swapped(j) {
                        let b = index[s.rows()];
                        g[(b, a)] = (1.0 - 1.0 / (r * r)).sqrt();
                    }
                }
                g
            })
            .collect();
        Self { lambda: lambda.clone(), tableaux, gens }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn generator(&self, j: usize) -> Result<&RMat> {
        if j == 0 || j >= self.n() {
            return invalid(format!("generator index {j} out of range 1..{}", self.n().saturating_sub(1)));
        }
        Ok(&self.gens[j - 1])
    }

    pub fn generators(&self) -> &[RMat] {
        &self.gens
    }

    /// `X_k`, diagonal with the content of box `k`.
    pub fn yjm(&self, k: usize) -> Result<RMat> {
        if k == 0 || k > self.n() {
            return invalid(format!("YJM index {k} out of range 1..={}", self.n()));
        }
        let diag: Vec<f64> = self.tableaux.iter().map(|t| t.content(k) as f64).collect();
        Ok(RMat::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }

    /// `π(s_{w_1}) π(s_{w_2}) ⋯`.
    pub fn word(&self, word: &[usize]) -> Result<RMat> {
        let mut m = RMat::identity(self.dim(), self.dim());
        for &j in word {
            m *= self.generator(j)?;
        }
        Ok(m)
    }

    pub fn permutation(&self, sigma: &Permutation) -> Result<RMat> {
        if sigma.n() != self.n() {
            return invalid(format!("permutation of {} points applied to S_{}", sigma.n(), self.n()));
        }
        self.word(&sigma.to_word())
    }

    /// `(d π((r, r+1)) - I) / √(d² - 1)`.
    pub fn exchange(&self, r: usize, d: usize) -> Result<RMat> {
        if d < 2 {
            return invalid("exchange interaction needs d >= 2");
        }
        let g = self.generator(r)?;
        let scale = ((d * d - 1) as f64).sqrt();
        Ok((g * d as f64 - RMat::identity(self.dim(), self.dim())) / scale)
    }
}

pub fn yof_generator(lambda: &Partition, j: usize) -> Result<RMat> {
    IrrepBlockRep::new(lambda).generator(j).cloned()
}

pub fn yjm_matrix(lambda: &Partition, k: usize) -> Result<RMat> {
    IrrepBlockRep::new(lambda).yjm(k)
}

pub fn permutation_block(lambda: &Partition, word: &[usize]) -> Result<RMat> {
    IrrepBlockRep::new(lambda).word(word)
}

pub fn exchange_block(lambda: &Partition, r: usize, d: usize) -> Result<RMat> {
    IrrepBlockRep::new(lambda).exchange(r, d)
}

/// A symmetric observable `c₀ I + Σ c_w P(w)` with `P(w)` a permutation
/// operator given as a reduced word in adjacent transpositions.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableExpansion {
    pub n: usize,
    pub constant: C64,
    pub terms: Vec<(C64, Vec<usize>)>,
}

impl ObservableExpansion {
    pub fn new(n: usize) -> Self {
        Self { n, constant: C64::new(0.0, 0.0), terms: Vec::new() }
    }

    /// Adds `coeff · P(σ)`; identity permutations fold into the constant.
    pub fn add(&mut self, coeff: C64, sigma: &Permutation) -> Result<()> {
        if sigma.n() != self.n {
            return invalid("permutation size does not match the observable");
        }
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return invalid("coefficients must be finite");
        }
        let word = sigma.to_word();
        if word.is_empty() {
            self.constant += coeff;
        } else if let Some(term) = self.terms.iter_mut().find(|(_, w)| *w == word) {
            term.0 += coeff;
        } else {
            self.terms.push((coeff, word));
        }
        Ok(())
    }

    pub fn add_word(&mut self, coeff: C64, word: &[usize]) -> Result<()> {
        let sigma = Permutation::from_word(self.n, word)?;
        self.add(coeff, &sigma)
    }

    /// `(d S_r - I)/√(d² - 1)` on sites `r, r+1`.
    pub fn exchange(n: usize, r: usize, d: usize) -> Result<Self> {
        if r == 0 || r >= n || d < 2 {
            return invalid(format!("exchange on site {r} needs 1 <= r < n = {n} and d >= 2"));
        }
        let scale = ((d * d - 1) as f64).sqrt();
        let mut o = Self::new(n);
        o.constant = c(-1.0 / scale);
        o.add_word(c(d as f64 / scale), &[r])?;
        Ok(o)
    }

    /// Heisenberg-type `Σ_j (d S_j - I)/√(d² - 1)` over neighbouring pairs.
    pub fn heisenberg(n: usize, d: usize) -> Result<Self> {
        let mut o = Self::new(n);
        for r in 1..n {
            let e = Self::exchange(n, r, d)?;
            o.constant += e.constant;
            for (coeff, w) in e.terms {
                o.add_word(coeff, &w)?;
            }
        }
        Ok(o)
    }

    /// Image in sector `λ`.
    pub fn block(&self, rep: &IrrepBlockRep) -> Result<CMat> {
        if rep.n() != self.n {
            return invalid("sector size does not match the observable");
        }
        let dim = rep.dim();
        let mut m = CMat::identity(dim, dim) * self.constant;
        for (coeff, w) in &self.terms {
            m += rep.word(w)?.map(|x| c(x) * coeff);
        }
        Ok(m)
    }

    /// Dense operator on `(ℂ^d)^{⊗n}`.
    pub fn full_space(&self, d: usize) -> Result<CMat> {
        let dim = d.checked_pow(self.n as u32).ok_or(crate::error::Error::Overflow("d^n"))?;
        let mut m = CMat::identity(dim, dim) * self.constant;
        for (coeff, w) in &self.terms {
            let table = site_permutation_table(&Permutation::from_word(self.n, w)?, d);
            for (i, &j) in table.iter().enumerate() {
                m[(j, i)] += coeff;
            }
        }
        Ok(m)
    }
}
