//! Exhaustive enumeration of compositions and seaweed specs.

use crate::composition::Composition;
use crate::error::Result;
use crate::spec::{make_spec, AlgebraType, SeaweedSpec};

/// All compositions of `n` in lexicographic order of their block lists.
/// There are `2^(n-1)` of them for `n ≥ 1` and one (empty) for `n = 0`.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for b in 1..=left {
            cur.push(b);
            rec(left - b, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// All compositions with total at most `n`, by total then lexicographically.
pub fn compositions_up_to(n: usize) -> Vec<Vec<usize>> {
    (0..=n).flat_map(compositions).collect()
}

fn comp(blocks: &[usize]) -> Composition {
    Composition::new(blocks.iter().map(|&b| b.into()))
}

/// Every canonical spec of the given type and rank parameter.
///
/// For type D, pairs whose full-total side ends in 1 are skipped since they
/// name the same subalgebra as the pair without that block.
pub fn specs(algebra: AlgebraType, n: usize) -> Result<Vec<SeaweedSpec>> {
    let sides = match algebra {
        AlgebraType::A => compositions(n),
        _ => compositions_up_to(n),
    };
    let canonical = |c: &Vec<usize>| {
        algebra != AlgebraType::D || c.iter().sum::<usize>() != n || c.last() != Some(&1)
    };
    let mut out = Vec::new();
    for top in sides.iter().filter(|c| canonical(c)) {
        for bottom in sides.iter().filter(|c| canonical(c)) {
            out.push(make_spec(algebra, n, comp(top), comp(bottom))?);
        }
    }
    Ok(out)
}

/// Matrix size of the natural representation.
pub fn ambient_size(algebra: AlgebraType, n: usize) -> usize {
    match algebra {
        AlgebraType::A => n,
        AlgebraType::C | AlgebraType::D => 2 * n,
        AlgebraType::B => 2 * n + 1,
    }
}

/// All specs whose ambient matrix size is at most `m`.
pub fn specs_with_ambient_at_most(m: usize) -> Result<Vec<SeaweedSpec>> {
    let mut out = Vec::new();
    for algebra in AlgebraType::ALL {
        for n in 1.. {
            if ambient_size(algebra, n) > m {
                break;
            }
            out.extend(specs(algebra, n)?);
        }
    }
    Ok(out)
}
