//! Ground truth from matrices.
//!
//! A seaweed is realized as the stabilizer of a pair of flags inside gl(m),
//! sp(m) or so(m), by solving the linear conditions directly; the index is
//! `dim q − max rank f([x_i, x_j])` over randomly sampled functionals `f`.
//! No meander, reduction or formula code is used here.

pub mod linalg;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::{AlgebraType, SeaweedSpec, Side};
use linalg::{rank_exact, rank_mod_p, to_field, SparseSolver, P, Q};

/// Default largest matrix size [`realize`] accepts.
pub const DEFAULT_MAX_AMBIENT: usize = 24;

/// Sparse `m × m` integer matrix as `(row, col, value)` triples, row-major.
pub type SparseMatrix = Vec<(usize, usize, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixAlgebraBasis {
    pub algebra: AlgebraType,
    /// Matrix size.
    pub ambient: usize,
    pub basis: Vec<SparseMatrix>,
    constraints: Vec<Vec<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub index: usize,
    pub dim: usize,
    pub trials: usize,
    pub ranks: Vec<usize>,
    /// Field characteristic used, 0 for an exact rational computation.
    pub prime: u64,
}

fn ambient(algebra: AlgebraType, n: usize) -> usize {
    match algebra {
        AlgebraType::A => n,
        AlgebraType::C | AlgebraType::D => 2 * n,
        AlgebraType::B => 2 * n + 1,
    }
}

/// The antidiagonal form: `J[i][m−1−i]`, with the symplectic sign flip in
/// the lower half.
fn form_entry(algebra: AlgebraType, m: usize, i: usize) -> i64 {
    if algebra == AlgebraType::C && i >= m / 2 {
        -1
    } else {
        1
    }
}

/// Linear conditions on the `m²` matrix entries (`var = p·m + q` for
/// `X[p][q]`) cutting out the seaweed.
fn constraints(
    algebra: AlgebraType,
    n: usize,
    top: &[usize],
    bottom: &[usize],
    xi: XiRealization,
) -> Vec<Vec<(usize, i64)>> {
    let m = ambient(algebra, n);
    let mut rows = Vec::new();
    // X stabilizes the span of a coordinate set iff X[p][q] = 0 for q inside
    // and p outside.
    fn stabilize_set(rows: &mut Vec<Vec<(usize, i64)>>, inside: &[bool]) {
        let m = inside.len();
        for q in (0..m).filter(|&q| inside[q]) {
            for p in (0..m).filter(|&p| !inside[p]) {
                rows.push(vec![(p * m + q, 1)]);
            }
        }
    }
    let range = |lo: usize, hi: usize| -> Vec<bool> { (0..m).map(|i| lo <= i && i < hi).collect() };
    let stabilize = |rows: &mut Vec<Vec<(usize, i64)>>, lo: usize, hi: usize| {
        stabilize_set(rows, &range(lo, hi))
    };
    let prefixes = |c: &[usize]| -> Vec<usize> {
        c.iter()
            .scan(0, |acc, &b| {
                *acc += b;
                Some(*acc)
            })
            .collect()
    };
    let (pa, pb) = (prefixes(top), prefixes(bottom));
    match algebra {
        AlgebraType::A => {
            // increasing flag from the first composition, decreasing from the second
            for &s in pa.iter().take(top.len().saturating_sub(1)) {
                stabilize(&mut rows, 0, s);
            }
            for &s in pb.iter().take(bottom.len().saturating_sub(1)) {
                stabilize(&mut rows, s, m);
            }
        }
        _ => {
            // isotropic flags: leading coordinates for the first composition,
            // trailing coordinates for the second
            let short = match xi {
                XiRealization::OtherFamily if algebra == AlgebraType::D => {
                    xi_short_side(n, top, bottom)
                }
                _ => None,
            };
            for &s in &pa {
                if short == Some(Side::Top) && s == n - 1 {
                    // e_1..e_{n-1}, e_{n+1}
                    let mut set = range(0, n - 1);
                    set[n] = true;
                    stabilize_set(&mut rows, &set);
                } else {
                    stabilize(&mut rows, 0, s);
                }
            }
            for &s in &pb {
                if short == Some(Side::Bottom) && s == n - 1 {
                    // e_n, e_{n+2}..e_{2n}
                    let mut set = range(n + 1, m);
                    set[n - 1] = true;
                    stabilize_set(&mut rows, &set);
                } else {
                    stabilize(&mut rows, m - s, m);
                }
            }
            // Xᵀ J + J X = 0: J[j'][j] X[j'][i] + J[i][i'] X[i'][j] = 0
            for i in 0..m {
                for j in 0..m {
                    let (ii, jj) = (m - 1 - i, m - 1 - j);
                    let u = jj * m + i;
                    let v = ii * m + j;
                    let cu = form_entry(algebra, m, jj);
                    let cv = form_entry(algebra, m, i);
                    if u == v {
                        if cu + cv != 0 {
                            rows.push(vec![(u, cu + cv)]);
                        }
                    } else {
                        rows.push(vec![(u, cu), (v, cv)]);
                    }
                }
            }
        }
    }
    rows
}

/// How the short side of a type-D pair in Ξ is realized.
///
/// A side of total `n − 1` facing a side of total `n` ending in a block
/// `> 1` can be read two ways. `Literal` stabilizes the `(n−1)`-dimensional
/// isotropic subspace itself, which also fixes both maximal isotropic
/// subspaces containing it. `OtherFamily` replaces it with the maximal
/// isotropic subspace containing it that is not in the family of the
/// standard one; the crossed-arc meander computes the index of this one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XiRealization {
    #[default]
    OtherFamily,
    Literal,
}

/// The side of total `n − 1` when the raw pair lies in Ξ.
fn xi_short_side(n: usize, top: &[usize], bottom: &[usize]) -> Option<Side> {
    let full = |c: &[usize]| c.iter().sum::<usize>() == n && c.last().is_some_and(|&b| b > 1);
    let short = |c: &[usize]| n >= 1 && c.iter().sum::<usize>() == n - 1;
    if n < 2 {
        None
    } else if full(top) && short(bottom) {
        Some(Side::Bottom)
    } else if full(bottom) && short(top) {
        Some(Side::Top)
    } else {
        None
    }
}

/// Realizes a spec as an explicit matrix Lie algebra.
pub fn realize(spec: &SeaweedSpec) -> Result<MatrixAlgebraBasis> {
    realize_bounded(spec, DEFAULT_MAX_AMBIENT)
}

pub fn realize_bounded(spec: &SeaweedSpec, max_ambient: usize) -> Result<MatrixAlgebraBasis> {
    realize_with(spec, max_ambient, XiRealization::default())
}

pub fn realize_with(
    spec: &SeaweedSpec,
    max_ambient: usize,
    xi: XiRealization,
) -> Result<MatrixAlgebraBasis> {
    let too_large = || Error::TooLarge {
        what: "matrix realization",
        size: spec.ambient_size().to_string(),
        bound: max_ambient.to_string(),
    };
    let n = spec.n_usize().ok_or_else(too_large)?;
    if ambient(spec.algebra(), n) > max_ambient {
        return Err(too_large());
    }
    let top = spec.top().to_usizes().ok_or_else(too_large)?;
    let bottom = spec.bottom().to_usizes().ok_or_else(too_large)?;
    realize_raw(spec.algebra(), n, &top, &bottom, max_ambient, xi)
}

/// Realizes the flag stabilizer for raw block lists, without the
/// normalization [`SeaweedSpec`] applies.
pub fn realize_raw(
    algebra: AlgebraType,
    n: usize,
    top: &[usize],
    bottom: &[usize],
    max_ambient: usize,
    xi: XiRealization,
) -> Result<MatrixAlgebraBasis> {
    let m = ambient(algebra, n);
    if m > max_ambient {
        return Err(Error::TooLarge {
            what: "matrix realization",
            size: m.to_string(),
            bound: max_ambient.to_string(),
        });
    }
    for (name, c) in [("top", top), ("bottom", bottom)] {
        let total: usize = c.iter().sum();
        let bad = if algebra == AlgebraType::A {
            total != n
        } else {
            total > n
        };
        if bad {
            return Err(Error::TotalOutOfBounds {
                side: name,
                total: total.to_string(),
                bound: n.to_string(),
            });
        }
    }
    let top: Vec<usize> = top.iter().copied().filter(|&b| b > 0).collect();
    let bottom: Vec<usize> = bottom.iter().copied().filter(|&b| b > 0).collect();
    let rows = constraints(algebra, n, &top, &bottom, xi);
    let mut solver = SparseSolver::new(m * m);
    for r in &rows {
        let q: Vec<(usize, Q)> = r.iter().map(|&(v, c)| (v, Q::from_integer(c))).collect();
        solver.add(&q);
    }
    let basis = solver
        .nullspace()
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|(var, c)| (var / m, var % m, c))
                .collect()
        })
        .collect();
    Ok(MatrixAlgebraBasis {
        algebra,
        ambient: m,
        basis,
        constraints: rows,
    })
}

impl MatrixAlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether a dense matrix satisfies every defining condition.
    pub fn contains(&self, x: &[i64]) -> bool {
        self.constraints
            .iter()
            .all(|row| row.iter().map(|&(v, c)| c * x[v]).sum::<i64>() == 0)
    }

    fn dense(&self, x: &SparseMatrix) -> Vec<i64> {
        let m = self.ambient;
        let mut d = vec![0; m * m];
        for &(p, q, w) in x {
            d[p * m + q] += w;
        }
        d
    }

    /// `[x, y]` as a dense row-major matrix.
    pub fn bracket(&self, x: &SparseMatrix, y: &SparseMatrix) -> Vec<i64> {
        let m = self.ambient;
        let (dx, dy) = (self.dense(x), self.dense(y));
        let mut out = vec![0; m * m];
        for &(p, q, w) in x {
            for s in 0..m {
                out[p * m + s] += w * dy[q * m + s];
            }
        }
        for &(p, q, w) in y {
            for s in 0..m {
                out[p * m + s] -= w * dx[q * m + s];
            }
        }
        out
    }

    /// Every basis element lies in the solution space and every bracket of
    /// two basis elements does too.
    pub fn check_closure(&self) -> bool {
        self.basis.iter().all(|x| self.contains(&self.dense(x)))
            && (0..self.dim()).all(|i| {
                (i + 1..self.dim())
                    .all(|j| self.contains(&self.bracket(&self.basis[i], &self.basis[j])))
            })
    }

    /// Entries of each basis element grouped by row.
    fn by_row(&self) -> Vec<Vec<Vec<(usize, i64)>>> {
        self.basis
            .iter()
            .map(|x| {
                let mut rows = vec![Vec::new(); self.ambient];
                for &(p, q, w) in x {
                    rows[p].push((q, w));
                }
                rows
            })
            .collect()
    }

    /// `M[i][j] = f([x_i, x_j])` with `f(X) = Σ F[q][p] X[p][q]`, entries
    /// produced by `eval(weight, F-entry)` and summed with `add`.
    fn form_matrix<T: Clone>(
        &self,
        zero: T,
        f_entry: impl Fn(usize, usize) -> T,
        mul_add: impl Fn(&mut T, i64, &T),
        neg: impl Fn(&T) -> T,
    ) -> Vec<Vec<T>> {
        let d = self.dim();
        let rows = self.by_row();
        // tr(F x y) = Σ_{(p,q,w)∈x} Σ_{(s,w')∈y row q} w w' F[s][p]
        let trace = |x: usize, y: usize| -> T {
            let mut acc = zero.clone();
            for &(p, q, w) in &self.basis[x] {
                for &(s, w2) in &rows[y][q] {
                    mul_add(&mut acc, w * w2, &f_entry(s, p));
                }
            }
            acc
        };
        let mut m = vec![vec![zero.clone(); d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let mut v = trace(i, j);
                mul_add(&mut v, -1, &trace(j, i));
                m[j][i] = neg(&v);
                m[i][j] = v;
            }
        }
        m
    }

    /// Rank of `f([·,·])` over `GF(P)` for the functional with matrix `f`
    /// (row-major, reduced entries).
    pub fn form_rank_mod_p(&self, f: &[u64]) -> usize {
        let m = self.ambient;
        let d = self.dim();
        let mat = self.form_matrix(
            0u64,
            |s, p| f[s * m + p],
            |acc, w, x| {
                let t = linalg::mul_mod(to_field(w), *x);
                *acc = (*acc + t) % P;
            },
            |x| (P - x) % P,
        );
        let mut flat: Vec<u64> = mat.into_iter().flatten().collect();
        rank_mod_p(&mut flat, d, d)
    }

    /// Exact rank of `f([·,·])` over the rationals for an integer functional.
    pub fn form_rank_exact(&self, f: &[i64]) -> usize {
        let m = self.ambient;
        let mat = self.form_matrix(
            BigInt::from(0),
            |s, p| BigInt::from(f[s * m + p]),
            |acc, w, x| *acc += x * w,
            |x| -x,
        );
        rank_exact(&mat)
    }
}

fn sample_functional(rng: &mut ChaCha8Rng, m: usize) -> Vec<u64> {
    (0..m * m).map(|_| rng.random_range(0..P)).collect()
}

/// Index by sampling `trials` functionals over `GF(2^31 − 1)`.
///
/// Trial `k` always draws the same functional for a given seed, so more
/// trials can only raise the maximum rank.
pub fn oracle_index(spec: &SeaweedSpec, trials: usize, seed: u64) -> Result<OracleResult> {
    let basis = realize(spec)?;
    oracle_index_of(&basis, trials, seed)
}

pub fn oracle_index_of(
    basis: &MatrixAlgebraBasis,
    trials: usize,
    seed: u64,
) -> Result<OracleResult> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..trials)
        .map(|_| {
            let f = sample_functional(&mut rng, basis.ambient);
            basis.form_rank_mod_p(&f)
        })
        .collect();
    let dim = basis.dim();
    let max = ranks.iter().copied().max().unwrap_or(0);
    Ok(OracleResult {
        index: dim - max,
        dim,
        trials,
        ranks,
        prime: P,
    })
}

/// Index by exact rational ranks for functionals with entries in
/// `[−2^20, 2^20]`.
pub fn oracle_index_exact(spec: &SeaweedSpec, trials: usize, seed: u64) -> Result<OracleResult> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let basis = realize(spec)?;
    let m = basis.ambient;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..trials)
        .map(|_| {
            let f: Vec<i64> = (0..m * m)
                .map(|_| rng.random_range(-(1 << 20)..=(1 << 20)))
                .collect();
            basis.form_rank_exact(&f)
        })
        .collect();
    let dim = basis.dim();
    let max = ranks.iter().copied().max().unwrap_or(0);
    Ok(OracleResult {
        index: dim - max,
        dim,
        trials,
        ranks,
        prime: 0,
    })
}

/// Dimension of the realized subalgebra.
pub fn oracle_dim(spec: &SeaweedSpec) -> Result<usize> {
    Ok(realize(spec)?.dim())
}
