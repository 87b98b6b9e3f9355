//! Young-diagram combinatorics for the symmetric group.
//!
//! A partition `λ ⊢ n` with at most `d` rows labels one sector of the
//! Schur-Weyl decomposition of `(ℂ^d)^{⊗n}`. The sector carries the `S_n`
//! irrep `S^λ` of dimension `d_λ` (number of standard tableaux) with
//! multiplicity `m_λ` (dimension of the paired `SU(d)` irrep).
//!
//! Sectors are always listed in descending lexicographic order of their
//! partitions, and tableaux of one shape in last-letter order. Every matrix
//! built downstream inherits these two orders.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};

/// A partition of `n` into weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return invalid("a partition needs at least one part");
        }
        if parts.contains(&0) {
            return invalid(format!("partition parts must be positive: {parts:?}"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition parts must be weakly decreasing: {parts:?}"));
        }
        Ok(Self { parts })
    }

    /// Unchecked constructor for internally generated partitions.
    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0));
        Self { parts }
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Self { parts: vec![n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Hook length of the box at `(row, col)`, zero-based.
    pub fn hook(&self, row: usize, col: usize) -> usize {
        let arm = self.parts[row] - col - 1;
        let leg = self.parts[row + 1..].iter().take_while(|&&p| p > col).count();
        arm + leg + 1
    }

    /// Removable boxes as `(row, col)`, bottom row first.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        (0..self.rows())
            .rev()
            .filter(|&i| i + 1 == self.rows() || self.parts[i] > self.parts[i + 1])
            .map(|i| (i, self.parts[i] - 1))
            .collect()
    }

    fn without_box_in_row(&self, row: usize) -> Option<Self> {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        if parts.is_empty() {
            None
        } else {
            Some(Self { parts })
        }
    }

    /// Standard centralizer order `z_μ = ∏ i^{m_i} m_i!` when `self` is read
    /// as a cycle type.
    pub fn centralizer_order(&self) -> Result<u128> {
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        let mut z: u128 = 1;
        for (part, m) in counts {
            for k in 1..=m {
                z = z
                    .checked_mul(part as u128)
                    .and_then(|z| z.checked_mul(k as u128))
                    .ok_or(Error::Overflow("centralizer order"))?;
            }
        }
        Ok(z)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", joined.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-joined parts, e.g. `"3,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// All partitions of `n` with at most `max_rows` rows, in descending
/// lexicographic order.
pub fn enumerate_partitions(n: usize, max_rows: usize) -> Vec<Partition> {
    fn go(rest: usize, cap: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_parts_unchecked(cur.clone()));
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || max_rows == 0 {
        return out;
    }
    go(n, n, max_rows, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k).ok_or(Error::Overflow("factorial")))
}

/// `d_λ = n! / ∏ hooks`.
pub fn hook_dimension(lambda: &Partition) -> Result<u128> {
    let mut num = BigInt::from(1);
    for k in 2..=lambda.n() {
        num *= k;
    }
    let mut hooks = BigInt::from(1);
    for (i, &len) in lambda.parts.iter().enumerate() {
        for j in 0..len {
            hooks *= lambda.hook(i, j);
        }
    }
    u128::try_from(num / hooks).map_err(|_| Error::Overflow("hook dimension"))
}

/// Dimension of the `GL(m)` irrep with dominant highest weight `weights`
/// (entries may be negative), via the Weyl dimension formula.
pub fn gl_dimension(weights: &[i64]) -> Result<u128> {
    if weights.windows(2).any(|w| w[0] < w[1]) {
        return invalid(format!("weight {weights:?} is not dominant"));
    }
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            num *= weights[i] - weights[j] + (j - i) as i64;
            den *= (j - i) as i64;
        }
    }
    let q = num / den;
    u128::try_from(q).map_err(|_| Error::Overflow("Weyl dimension"))
}

/// `m_λ`: the dimension of the `SU(d)` irrep paired with `S^λ`, zero when `λ`
/// has more than `d` rows.
pub fn weyl_multiplicity(lambda: &Partition, d: usize) -> Result<u128> {
    if lambda.rows() > d {
        return Ok(0);
    }
    let mut w: Vec<i64> = lambda.parts.iter().map(|&p| p as i64).collect();
    w.resize(d, 0);
    gl_dimension(&w)
}

/// A standard Young tableau; values are `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    // pos[v - 1] = (row, col) of value v
    pos: Vec<(usize, usize)>,
}

impl StandardTableau {
    /// Builds a tableau from explicit rows, checking it is standard.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.n();
        let mut pos = vec![(usize::MAX, usize::MAX); n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > n || pos[v - 1].0 != usize::MAX {
                    return invalid(format!("tableau {rows:?} is not a bijective filling"));
                }
                pos[v - 1] = (i, j);
                if j > 0 && row[j - 1] >= v {
                    return invalid(format!("tableau {rows:?} rows must increase"));
                }
                if i > 0 && rows[i - 1][j] >= v {
                    return invalid(format!("tableau {rows:?} columns must increase"));
                }
            }
        }
        Ok(Self { shape, rows, pos })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Zero-based `(row, col)` of `value`.
    pub fn position(&self, value: usize) -> (usize, usize) {
        self.pos[value - 1]
    }

    /// Content `col - row` of the box holding `value`.
    pub fn content(&self, value: usize) -> i64 {
        let (r, c) = self.position(value);
        c as i64 - r as i64
    }

    /// Contents of `1..=n` in order.
    pub fn content_vector(&self) -> Vec<i64> {
        (1..=self.shape.n()).map(|v| self.content(v)).collect()
    }

    /// The tableau with `j` and `j + 1` exchanged, if that is still standard.
    pub fn swapped(&self, j: usize) -> Option<Self> {
        let (r1, c1) = self.position(j);
        let (r2, c2) = self.position(j + 1);
        if r1 == r2 || c1 == c2 {
            return None;
        }
        let mut t = self.clone();
        t.rows[r1][c1] = j + 1;
        t.rows[r2][c2] = j;
        t.pos.swap(j - 1, j);
        Some(t)
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// All standard tableaux of `lambda` in last-letter order: compared by the
/// row of `n` (lower rows first), then the row of `n - 1`, and so on.
pub fn enumerate_syt(lambda: &Partition) -> Vec<StandardTableau> {
    fn go(shape: &Partition) -> Vec<Vec<Vec<usize>>> {
        let n = shape.n();
        let mut out = Vec::new();
        for (row, col) in shape.corners() {
            match shape.without_box_in_row(row) {
                None => out.push(vec![vec![n]]),
                Some(smaller) => {
                    for mut rows in go(&smaller) {
                        if rows.len() == row {
                            rows.push(Vec::new());
                        }
                        debug_assert_eq!(rows[row].len(), col);
                        rows[row].push(n);
                        out.push(rows);
                    }
                }
            }
        }
        out
    }
    go(lambda)
        .into_iter()
        .map(|rows| {
            let n = lambda.n();
            let mut pos = vec![(0, 0); n];
            for (i, row) in rows.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    pos[v - 1] = (i, j);
                }
            }
            StandardTableau { shape: lambda.clone(), rows, pos }
        })
        .collect()
}

/// `χ_λ(μ)` by the Murnaghan-Nakayama rule, with `μ` the cycle type.
pub fn character(lambda: &Partition, cycle_type: &Partition) -> Result<i128> {
    if lambda.n() != cycle_type.n() {
        return invalid(format!(
            "character needs partitions of the same n, got {} and {}",
            lambda.n(),
            cycle_type.n()
        ));
    }
    let mut memo = HashMap::new();
    Ok(mn_rule(lambda.parts.clone(), cycle_type.parts(), &mut memo))
}

fn mn_rule(parts: Vec<usize>, cycles: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i128>) -> i128 {
    let Some((&k, rest)) = cycles.split_first() else {
        return if parts.is_empty() { 1 } else { 0 };
    };
    let key = (parts, cycles.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let parts = &key.0;
    let len = parts.len();
    // beta numbers, strictly decreasing
    let beta: Vec<usize> = parts.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i128;
    for i in 0..len {
        let Some(target) = beta[i].checked_sub(k) else {
            continue;
        };
        if beta.contains(&target) {
            continue;
        }
        let crossed = beta.iter().filter(|&&b| b > target && b < beta[i]).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let new_parts: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(j, &b)| b - (len - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rule(new_parts, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Sector metadata for a fixed local dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepMeta {
    pub lambda: Partition,
    /// `d_λ`
    pub dim: u128,
    /// `m_λ`
    pub mult: u128,
}

/// Every sector of `(ℂ^d)^{⊗n}` in canonical order.
pub fn sectors(n: usize, d: usize) -> Result<Vec<IrrepMeta>> {
    if n == 0 || d == 0 {
        return invalid("sectors need n >= 1 and d >= 1");
    }
    enumerate_partitions(n, d)
        .into_iter()
        .map(|lambda| {
            Ok(IrrepMeta {
                dim: hook_dimension(&lambda)?,
                mult: weyl_multiplicity(&lambda, d)?,
                lambda,
            })
        })
        .collect()
}
