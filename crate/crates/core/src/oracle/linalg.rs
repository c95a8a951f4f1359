//! Exact linear algebra used by the oracle: sparse rational nullspaces,
//! rank over `GF(2^31 − 1)` and fraction-free rank over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i64>;

/// A sparse row `Σ c_v x_v`, sorted by variable, no zero coefficients.
pub type SparseRow = Vec<(usize, Q)>;

/// Incremental reduced row echelon form of a homogeneous system.
///
/// Each pivot variable is stored as a combination of free variables only, so
/// the nullspace can be read off directly.
pub struct SparseSolver {
    vars: usize,
    /// `expr[v] = Some(row)` means `x_v = Σ row` with every variable in `row` free.
    expr: Vec<Option<SparseRow>>,
    /// `users[u]` lists pivots whose expression mentions the free variable `u`.
    users: Vec<Vec<usize>>,
}

fn merge_into(acc: &mut Vec<(usize, Q)>, scale: Q, row: &[(usize, Q)]) {
    for (v, c) in row {
        acc.push((*v, scale * c));
    }
}

fn normalize(mut row: Vec<(usize, Q)>) -> SparseRow {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (v, c) in row {
        match out.last_mut() {
            Some((w, d)) if *w == v => *d += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl SparseSolver {
    pub fn new(vars: usize) -> Self {
        SparseSolver {
            vars,
            expr: vec![None; vars],
            users: vec![Vec::new(); vars],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_pivot(&self, v: usize) -> bool {
        self.expr[v].is_some()
    }

    /// Adds the equation `Σ c_v x_v = 0`.
    pub fn add(&mut self, row: &[(usize, Q)]) {
        let mut acc = Vec::with_capacity(row.len());
        for &(v, c) in row {
            match &self.expr[v] {
                Some(e) => merge_into(&mut acc, c, e),
                None => acc.push((v, c)),
            }
        }
        let row = normalize(acc);
        let Some(&(pivot, c)) = row.first() else {
            return;
        };
        // x_pivot = −(1/c) Σ_{u ≠ pivot} c_u x_u
        let scale = -Q::one() / c;
        let e: SparseRow = row[1..].iter().map(|&(u, d)| (u, d * scale)).collect();

        for w in std::mem::take(&mut self.users[pivot]) {
            let Some(old) = self.expr[w].take() else {
                continue;
            };
            let mut acc = Vec::with_capacity(old.len() + e.len());
            for &(u, d) in &old {
                if u == pivot {
                    merge_into(&mut acc, d, &e);
                } else {
                    acc.push((u, d));
                }
            }
            let new = normalize(acc);
            for &(u, _) in &new {
                if !self.users[u].contains(&w) {
                    self.users[u].push(w);
                }
            }
            self.expr[w] = Some(new);
        }
        for &(u, _) in &e {
            if !self.users[u].contains(&pivot) {
                self.users[u].push(pivot);
            }
        }
        self.expr[pivot] = Some(e);
    }

    /// An integer basis of the solution space, one vector per free variable
    /// in increasing order, each as sparse `(variable, coefficient)` pairs.
    pub fn nullspace(&self) -> Vec<Vec<(usize, i64)>> {
        let free: Vec<usize> = (0..self.vars).filter(|&v| self.expr[v].is_none()).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut vec: Vec<(usize, Q)> = vec![(f, Q::one())];
            for &w in &self.users[f] {
                if let Some(e) = &self.expr[w] {
                    if let Some((_, c)) = e.iter().find(|(u, _)| *u == f) {
                        vec.push((w, *c));
                    }
                }
            }
            vec.sort_unstable_by_key(|e| e.0);
            let denom = vec.iter().fold(1i64, |l, (_, c)| l.lcm(c.denom()));
            let ints = vec
                .into_iter()
                .map(|(v, c)| (v, (c * denom).to_integer()))
                .collect();
            basis.push(ints);
        }
        basis
    }
}

/// The prime `2^31 − 1`.
pub const P: u64 = (1 << 31) - 1;

#[inline]
fn reduce(x: u64) -> u64 {
    let x = (x & P) + (x >> 31);
    let x = (x & P) + (x >> 31);
    if x >= P {
        x - P
    } else {
        x
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    reduce(a * b)
}

pub fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Maps a signed integer into `[0, P)`.
pub fn to_field(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

/// Rank of a row-major `rows × cols` matrix over `GF(P)`; entries must be
/// reduced. The matrix is destroyed.
pub fn rank_mod_p(m: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in c..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = pow_mod(m[rank * cols + c], P - 2);
        for j in c..cols {
            m[rank * cols + j] = mul_mod(m[rank * cols + j], inv);
        }
        let (head, tail) = m.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let t = mul_mod(f, pivot_row[j]);
                let v = row[j] + P - t;
                row[j] = if v >= P { v - P } else { v };
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank over the rationals: integer elimination, each new row divided
/// by the gcd of its entries to keep them small.
pub fn rank_exact(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let mut g = BigInt::zero();
            for j in c..cols {
                row[j] = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                g = g.gcd(&row[j]);
            }
            if !g.is_zero() && !g.is_one() {
                for x in row[c..].iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}
