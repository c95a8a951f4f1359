//! Closed-form indices for few-block seaweeds, Frobenius criteria, generated
//! Frobenius families and the type-A / type-D Frobenius census.
//!
//! Nothing here calls into [`crate::reduction`], so agreement between the two
//! is a genuine cross-check. The census uses meanders to classify and
//! reduction to confirm.

use num_integer::gcd;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::composition::Composition;
use crate::enumerate::compositions;
use crate::error::{Error, Result};
use crate::meander::{self, ArcSide, ComponentKind};
use crate::spec::{AlgebraType, SeaweedSpec};

/// `χ(a, b | a + b)` in gl(a + b).
pub fn index_a_twoblock(a: u64, b: u64) -> u64 {
    gcd(a, b)
}

/// `χ(a, b | c, d)` in gl(n), `a + b = c + d = n`; the same value as the
/// three-block pair `(a, b, c | n + c)`.
pub fn index_a_threeblock(a: u64, b: u64, c: u64, d: u64) -> Result<u64> {
    if a + b != c + d {
        return Err(Error::Domain(format!(
            "need a + b = c + d, got {} and {}",
            a + b,
            c + d
        )));
    }
    Ok(gcd(a + b, b + c))
}

/// `χ^C_n(a | b)` for single-block compositions (either may be 0 for ∅).
pub fn index_c_twoblock(n: u64, a: u64, b: u64) -> Result<u64> {
    let (a, b) = if b > a { (b, a) } else { (a, b) };
    if a > n {
        return Err(Error::Domain(format!("block {a} exceeds rank {n}")));
    }
    if a == b {
        return Ok(n);
    }
    let d = a - b;
    let r = a % d;
    Ok(r / 2 + (d - r) / 2 + n - a)
}

/// `(a, b | c)` at rank `n` with the derived quantities
/// `s = max(a + b, c)`, `p = (a + b) ∧ (b + c)` and `r = |a + b − c|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThreeBlockParams {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
}

impl ThreeBlockParams {
    pub fn new(a: u64, b: u64, c: u64, n: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::Domain("three-block blocks must be positive".into()));
        }
        let p = ThreeBlockParams { a, b, c, n };
        if p.s() > n {
            return Err(Error::Domain(format!(
                "max(a + b, c) = {} exceeds n = {n}",
                p.s()
            )));
        }
        Ok(p)
    }

    pub fn s(&self) -> u64 {
        (self.a + self.b).max(self.c)
    }

    pub fn p(&self) -> u64 {
        gcd(self.a + self.b, self.b + self.c)
    }

    pub fn r(&self) -> u64 {
        (self.a + self.b).abs_diff(self.c)
    }

    /// `(a, b | c)` lies in Ξ_n.
    pub fn in_xi(&self) -> bool {
        let (ab, n) = (self.a + self.b, self.n);
        n > 1 && ((ab == n && self.b > 1 && self.c == n - 1) || (self.c == n && ab == n - 1))
    }

    pub fn spec(&self, algebra: AlgebraType) -> Result<SeaweedSpec> {
        SeaweedSpec::new(algebra, self.n, [self.a, self.b], [self.c])
    }
}

/// `χ^B_n(a, b | c) = χ^C_n(a, b | c)`.
///
/// Evaluated at rank `s` and shifted by `n − s`.
pub fn index_bc_threeblock(params: &ThreeBlockParams) -> u64 {
    let (p, r) = (params.p(), params.r());
    let pad = params.n - params.s();
    let at_s = if p > r {
        p - r + r / 2
    } else if p % 2 == r % 2 {
        r / 2
    } else {
        // p ≤ r with opposite parity forces r ≥ 2
        r / 2 - 1
    };
    at_s + pad
}

/// `χ^D_n(a, b | c)`. Outside Ξ this is the B/C value plus a correction that,
/// for odd `r` and `s = n`, looks at the meander component through the arc
/// joining the two central vertices.
pub fn index_d_threeblock(params: &ThreeBlockParams) -> Result<u64> {
    if params.a + params.b == params.n && params.b == 1 {
        return Err(Error::Domain(
            "type-D pair with total n must not end in a block 1".into(),
        ));
    }
    if params.in_xi() {
        return Ok(gcd(params.a, params.n).abs_diff(2));
    }
    let base = index_bc_threeblock(params) as i64;
    let eps: i64 = if params.r() % 2 == 0 {
        0
    } else if params.s() < params.n {
        -1
    } else if central_arc_on_segment(&params.spec(AlgebraType::D)?)? {
        1
    } else {
        -1
    };
    u64::try_from(base + eps)
        .map_err(|_| Error::Invariant(format!("negative index for {params:?}")))
}

fn central_arc_on_segment(spec: &SeaweedSpec) -> Result<bool> {
    let m = meander::build(spec)?;
    let n = m.vertex_count() / 2;
    let has_arc =
        m.partner(ArcSide::Lower, n) == Some(n + 1) || m.partner(ArcSide::Upper, n) == Some(n + 1);
    if !has_arc {
        return Err(Error::Invariant(format!("{spec}: no central arc")));
    }
    let r = meander::components(&m);
    Ok(r.component_of(n).kind == ComponentKind::Segment)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusVerdict {
    pub is_frobenius: bool,
    /// Which listed condition fired.
    pub matched_condition: Option<&'static str>,
}

/// Frobenius test for `(a, b | c)` by the listed parameter conditions.
pub fn frobenius_threeblock(
    params: &ThreeBlockParams,
    algebra: AlgebraType,
) -> Result<FrobeniusVerdict> {
    let (p, r, s, n) = (params.p(), params.r(), params.s(), params.n);
    let conditions: Vec<(&'static str, bool)> = match algebra {
        AlgebraType::B | AlgebraType::C => vec![
            ("s=n, r=1, p=1", s == n && r == 1 && p == 1),
            ("s=n, r=2, p=1", s == n && r == 2 && p == 1),
            ("s=n, r=3, p=2", s == n && r == 3 && p == 2),
        ],
        AlgebraType::D => {
            let q = gcd(params.a, n);
            // The four listed conditions miss pairs outside Ξ with s = n, odd
            // r and C-index 1 whose central arc closes up into a cycle; the
            // last entry covers them.
            let central_cycle = || -> Result<bool> {
                Ok(s == n
                    && r % 2 == 1
                    && !params.in_xi()
                    && index_bc_threeblock(params) == 1
                    && !central_arc_on_segment(&params.spec(AlgebraType::D)?)?)
            };
            vec![
                ("r=1, q=2, s=n", r == 1 && q == 2 && s == n),
                ("r=1, p=1, s=n-1", r == 1 && p == 1 && s + 1 == n),
                ("r=2, p=1, s=n", r == 2 && p == 1 && s == n),
                ("r=3, p=2, s=n-1", r == 3 && p == 2 && s + 1 == n),
                (
                    "s=n, r odd, C-index 1, central arc on a cycle",
                    central_cycle()?,
                ),
            ]
        }
        AlgebraType::A => {
            return Err(Error::WrongType {
                expected: "B, C or D",
                got: 'A',
            })
        }
    };
    let matched = conditions
        .into_iter()
        .find(|(_, hit)| *hit)
        .map(|(name, _)| name);
    Ok(FrobeniusVerdict {
        is_frobenius: matched.is_some(),
        matched_condition: matched,
    })
}

/// The Frobenius type-C parabolic `(r | a)` built from `α_1, …, α_k` by
/// `a_{k+1} = k`, `a_i = 1 + α_i (a_{i+1} + … + a_{k+1} − i + 1)` and
/// `r = |a| + k`.
pub fn alpha_family(alphas: &[u64]) -> Result<SeaweedSpec> {
    let k = alphas.len() as u64;
    if k == 0 {
        return Err(Error::Domain("need at least one α".into()));
    }
    let mut a = vec![0u64; alphas.len()];
    // running a_{i+1} + … + a_{k+1}
    let mut tail = k;
    for i in (1..=alphas.len()).rev() {
        let s_i = tail + 1 - i as u64;
        a[i - 1] = alphas[i - 1]
            .checked_mul(s_i)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::Domain("α too large".into()))?;
        tail += a[i - 1];
    }
    let r: u64 = a.iter().sum::<u64>() + k;
    SeaweedSpec::new(AlgebraType::C, r, [r], Composition::from_u64s(&a))
}

/// `(n | a) ↦ (n + 4ts | 2s, …, 2s, a, 2s, …, 2s)` with `t` copies on each
/// side and `s = n − |a|`; the index is unchanged.
pub fn padding_family(spec: &SeaweedSpec, t: u64) -> Result<SeaweedSpec> {
    let n = spec
        .n()
        .to_u64()
        .ok_or_else(|| Error::Domain("rank too large".into()))?;
    if spec.algebra() != AlgebraType::C || spec.top().to_u64s() != Some(vec![n]) {
        return Err(Error::Domain(format!(
            "{spec} is not a type-C pair (n | a)"
        )));
    }
    let a = spec.bottom().to_u64s().expect("blocks bounded by n");
    let s = n - a.iter().sum::<u64>();
    let m = n + 4 * t * s;
    let pad = vec![2 * s; t as usize];
    let blocks: Vec<u64> = pad.iter().chain(&a).chain(&pad).copied().collect();
    SeaweedSpec::new(AlgebraType::C, m, [m], Composition::from_u64s(&blocks))
}

/// φ_m on pairs with at least one odd entry.
pub fn phi_m(a: u64, b: u64, m: u64) -> Result<u64> {
    match (a % 2 == 1, b % 2 == 1) {
        (true, true) => Ok(m / 2 + 1),
        (true, false) => Ok(m.div_ceil(2)),
        (false, true) => Ok(1),
        (false, false) => Err(Error::Domain(format!(
            "φ_m needs a or b odd, got ({a}, {b})"
        ))),
    }
}

/// `D:n:n | a^m, b` with `n = ma + b + 1`.
pub fn spec_d_aab(a: u64, b: u64, m: u64) -> Result<SeaweedSpec> {
    let n = m * a + b + 1;
    let mut blocks = vec![a; m as usize];
    blocks.push(b);
    SeaweedSpec::new(AlgebraType::D, n, [n], Composition::from_u64s(&blocks))
}

/// Index of `D:n:n | a^m, b` with `n = ma + b + 1` and `p = a ∧ (b + 1)`.
pub fn index_d_aab(a: u64, b: u64, m: u64) -> Result<u64> {
    if a == 0 || b == 0 || m == 0 {
        return Err(Error::Domain("a, b, m must be positive".into()));
    }
    let p = gcd(a, b + 1);
    if p == 1 {
        phi_m(a, b + 1, m)
    } else {
        Ok(p * phi_m(a / p, (b + 1) / p, m)? - 2)
    }
}

/// Frobenius criterion for `D:n:n | a^m, b`: `p = 2` together with one of
/// `m = 1`; `a/2` even and `(b+1)/2` odd; `a/2` odd, `(b+1)/2` even and `m = 2`.
pub fn frobenius_d_aab(a: u64, b: u64, m: u64) -> Option<&'static str> {
    if gcd(a, b + 1) != 2 {
        return None;
    }
    let (x, y) = (a / 2, (b + 1) / 2);
    if m == 1 {
        Some("p=2, m=1")
    } else if x % 2 == 0 && y % 2 == 1 {
        Some("p=2, a/2 even, (b+1)/2 odd")
    } else if x % 2 == 1 && y % 2 == 0 && m == 2 {
        Some("p=2, a/2 odd, (b+1)/2 even, m=2")
    } else {
        None
    }
}

/// Closed form that applies to the shape of `spec`, if any, with its name.
///
/// Recognized shapes (either orientation): type A `(a, b | n)` and
/// `(a, b | c, d)`; types B/C with at most one block per side, `(a | ∅)`
/// with any number of blocks, and `(a, b | c)`; type D `(n | a^m, b)` with
/// `n = ma + b + 1` and `(a, b | c)`.
pub fn index_by_formula(spec: &SeaweedSpec) -> Result<Option<(u64, &'static str)>> {
    let (Some(n), Some(top), Some(bottom)) = (
        spec.n().to_u64(),
        spec.top().to_u64s(),
        spec.bottom().to_u64s(),
    ) else {
        return Ok(None);
    };
    let (long, short) = if top.len() >= bottom.len() {
        (top, bottom)
    } else {
        (bottom, top)
    };
    let hit = match (spec.algebra(), long.as_slice(), short.as_slice()) {
        (AlgebraType::A, &[a, b], &[_]) => Some((index_a_twoblock(a, b), "two-block gcd")),
        (AlgebraType::A, &[a, b], &[c, d]) => {
            Some((index_a_threeblock(a, b, c, d)?, "four-block gcd"))
        }
        (AlgebraType::B | AlgebraType::C, l, sh) if l.len() <= 1 && sh.len() <= 1 => {
            let a = l.first().copied().unwrap_or(0);
            let b = sh.first().copied().unwrap_or(0);
            Some((index_c_twoblock(n, a, b)?, "single blocks"))
        }
        (AlgebraType::B | AlgebraType::C, l, &[]) => {
            let halves: u64 = l.iter().map(|x| x / 2).sum();
            Some((halves + n - l.iter().sum::<u64>(), "parabolic"))
        }
        (AlgebraType::B | AlgebraType::C, &[a, b], &[c]) => Some((
            index_bc_threeblock(&ThreeBlockParams::new(a, b, c, n)?),
            "three-block",
        )),
        (AlgebraType::D, l, &[full]) if full == n && l.len() >= 2 && aab_shape(n, l) => {
            let m = l.len() as u64 - 1;
            Some((index_d_aab(l[0], l[l.len() - 1], m)?, "a^m, b"))
        }
        (AlgebraType::D, &[a, b], &[c]) => Some((
            index_d_threeblock(&ThreeBlockParams::new(a, b, c, n)?)?,
            "three-block",
        )),
        _ => None,
    };
    Ok(hit)
}

fn aab_shape(n: u64, blocks: &[u64]) -> bool {
    let (body, last) = blocks.split_at(blocks.len() - 1);
    body.iter().all(|&x| x == body[0]) && blocks.iter().sum::<u64>() + 1 == n && last[0] > 0
}

/// Largest `n` the census accepts.
pub const CENSUS_MAX_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusPair {
    pub source: String,
    pub images: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    /// Type-A seaweeds of gl(n) with index 1.
    pub fa: Vec<String>,
    /// Frobenius type-D seaweeds of so(4n) with a Ξ pair.
    pub fd_even: Vec<String>,
    /// The same for so(4n + 2); present when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_odd: Option<Vec<String>>,
    pub pairing: Vec<CensusPair>,
    /// Every image is in `fd_even`, no image repeats, all of `fd_even` is hit.
    pub bijection_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub schema: u32,
    pub max_n: usize,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| {
            r.bijection_ok
                && r.fd_even.len() == 2 * r.fa.len()
                && r.fd_odd.as_ref().is_none_or(|v| v.is_empty())
        })
    }
}

fn comp_u64(blocks: &[usize]) -> Composition {
    Composition::new(blocks.iter().map(|&b| b.into()))
}

fn index_a_members(n: usize) -> Result<Vec<SeaweedSpec>> {
    let comps = compositions(n);
    let pairs: Vec<(usize, usize)> = (0..comps.len())
        .flat_map(|i| (0..comps.len()).map(move |j| (i, j)))
        .collect();
    let hits: Vec<Option<SeaweedSpec>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let s = SeaweedSpec::new(
                AlgebraType::A,
                n as u64,
                comp_u64(&comps[i]),
                comp_u64(&comps[j]),
            )?;
            Ok((meander::index(&s)? == 1).then_some(s))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Frobenius type-D seaweeds of so(2m) whose pair lies in Ξ_m.
fn frobenius_xi_members(m: usize) -> Result<Vec<SeaweedSpec>> {
    if m < 2 {
        return Ok(Vec::new());
    }
    let full: Vec<Vec<usize>> = compositions(m)
        .into_iter()
        .filter(|c| *c.last().unwrap() > 1)
        .collect();
    let short = compositions(m - 1);
    let mut candidates = Vec::new();
    for f in &full {
        for s in &short {
            candidates.push((f, s, true));
            candidates.push((f, s, false));
        }
    }
    let hits: Vec<Option<SeaweedSpec>> = candidates
        .par_iter()
        .map(|&(f, s, full_top)| {
            let (top, bottom) = if full_top { (f, s) } else { (s, f) };
            let spec = SeaweedSpec::new(AlgebraType::D, m as u64, comp_u64(top), comp_u64(bottom))?;
            debug_assert!(spec.xi_membership().in_xi);
            Ok(meander::index(&spec)?.is_zero().then_some(spec))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// The two type-D images of a type-A pair `(a | b)` of gl(n) in so(4n):
/// `(2a | 2b with last − 1)` and `(2a with last − 1 | 2b)`.
pub fn doubling_images(spec: &SeaweedSpec) -> Result<[SeaweedSpec; 2]> {
    if spec.algebra() != AlgebraType::A {
        return Err(Error::WrongType {
            expected: "A",
            got: spec.algebra().letter(),
        });
    }
    let n = spec.n() * 2u32;
    let double = |c: &Composition| Composition::new(c.blocks().iter().map(|b| b * 2u32));
    let lower_last = |c: &Composition| {
        let mut blocks = c.blocks().to_vec();
        *blocks.last_mut().expect("non-empty") -= 1u32;
        Composition::new(blocks)
    };
    let (a2, b2) = (double(spec.top()), double(spec.bottom()));
    Ok([
        SeaweedSpec::new(AlgebraType::D, n.clone(), a2.clone(), lower_last(&b2))?,
        SeaweedSpec::new(AlgebraType::D, n, lower_last(&a2), b2)?,
    ])
}

/// Rough count of meanders a census up to `bound` builds.
pub fn census_cost(bound: usize) -> u128 {
    (1..=bound)
        .map(|n| {
            let a = 1u128 << (2 * (n - 1));
            let d = |m: usize| if m < 2 { 0 } else { 2u128 << (2 * (m - 2)) };
            a + d(2 * n) + d(2 * n + 1)
        })
        .sum()
}

/// Enumerates Frobenius data for `1 ≤ n ≤ bound` and checks the doubling
/// correspondence between index-1 type-A pairs of gl(n) and Frobenius Ξ
/// pairs of so(4n).
pub fn frobenius_census(bound: usize, include_odd: bool) -> Result<CensusReport> {
    if bound > CENSUS_MAX_BOUND {
        return Err(Error::TooLarge {
            what: "census bound",
            size: format!("{bound} (about {} meanders)", census_cost(bound)),
            bound: format!(
                "{CENSUS_MAX_BOUND} (about {} meanders)",
                census_cost(CENSUS_MAX_BOUND)
            ),
        });
    }
    let mut rows = Vec::with_capacity(bound);
    for n in 1..=bound {
        let fa = index_a_members(n)?;
        let fd = frobenius_xi_members(2 * n)?;
        let fd_names: Vec<String> = fd.iter().map(|s| s.to_string()).collect();
        let fd_set: std::collections::HashSet<&str> = fd_names.iter().map(|s| s.as_str()).collect();

        let mut pairing = Vec::with_capacity(fa.len());
        let mut hit = std::collections::HashSet::new();
        let mut ok = true;
        for s in &fa {
            let [x, y] = doubling_images(s)?;
            let images = [x.to_string(), y.to_string()];
            for img in &images {
                ok &= fd_set.contains(img.as_str());
                ok &= hit.insert(img.clone());
            }
            pairing.push(CensusPair {
                source: s.to_string(),
                images,
            });
        }
        ok &= hit.len() == fd_names.len();

        let fd_odd = if include_odd {
            Some(
                frobenius_xi_members(2 * n + 1)?
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            )
        } else {
            None
        };
        rows.push(CensusRow {
            n,
            fa: fa.iter().map(|s| s.to_string()).collect(),
            fd_even: fd_names,
            fd_odd,
            pairing,
            bijection_ok: ok,
        });
    }
    Ok(CensusReport {
        schema: 1,
        max_n: bound,
        rows,
    })
}
