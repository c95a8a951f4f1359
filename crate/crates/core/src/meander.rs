//! Meander graphs of seaweeds and the index theorems read off them.
//!
//! Vertices are numbered `1..=m` in the public API. Arcs are stored as two
//! involutions on `0..m` (0-based), a fixed point meaning "no arc". Lower arcs
//! come from the top composition, upper arcs from the bottom one.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::spec::{AlgebraType, SeaweedSpec, Side};

/// Largest vertex count `build` accepts. Past this, use the reduction engine.
pub const MAX_MEANDER_VERTICES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ArcSide {
    Lower,
    Upper,
}

/// The rewired pair of a type-D meander in Ξ_n (1-based endpoints, `lo < hi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossedArcs {
    pub side: ArcSide,
    pub arcs: [(usize, usize); 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meander {
    lower: Vec<usize>,
    upper: Vec<usize>,
    crossed: Option<CrossedArcs>,
    origin: SeaweedSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Cycle,
    Segment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// Vertices in walk order (1-based).
    pub vertices: Vec<usize>,
    /// Mapped to itself by σ. Always false for type-A meanders.
    pub sigma_invariant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    pub cycles: usize,
    pub segments: usize,
    pub invariant_segments: usize,
    /// `component_of_vertex[x - 1]` is the index into `components` of vertex `x`.
    pub component_of_vertex: Vec<usize>,
}

impl ComponentReport {
    pub fn component_of(&self, vertex: usize) -> &Component {
        &self.components[self.component_of_vertex[vertex - 1]]
    }

    pub fn non_invariant_segments(&self) -> usize {
        self.segments - self.invariant_segments
    }
}

/// Involution of `θ_c` on `0..len`: each block is reversed in place.
fn block_involution(blocks: &[usize], len: usize) -> Vec<usize> {
    let mut inv: Vec<usize> = (0..len).collect();
    let mut start = 0;
    for &b in blocks {
        for j in 0..b {
            inv[start + j] = start + b - 1 - j;
        }
        start += b;
    }
    debug_assert_eq!(start, len);
    inv
}

fn small_blocks(c: &Composition) -> Result<Vec<usize>> {
    c.to_usizes().ok_or_else(|| Error::TooLarge {
        what: "composition block",
        size: c.total().to_string(),
        bound: MAX_MEANDER_VERTICES.to_string(),
    })
}

fn small_n(spec: &SeaweedSpec, vertices_per_unit: usize) -> Result<usize> {
    let n = spec
        .n()
        .to_usize()
        .filter(|&n| n.saturating_mul(vertices_per_unit) <= MAX_MEANDER_VERTICES)
        .ok_or_else(|| Error::TooLarge {
            what: "meander",
            size: (spec.n() * vertices_per_unit).to_string(),
            bound: MAX_MEANDER_VERTICES.to_string(),
        })?;
    Ok(n)
}

/// `(a_1, …, a_k, 2(n − |a|), a_k, …, a_1)`
fn symmetrized(blocks: &[usize], n: usize) -> Vec<usize> {
    let total: usize = blocks.iter().sum();
    let mut out = blocks.to_vec();
    if n > total {
        out.push(2 * (n - total));
    }
    out.extend(blocks.iter().rev());
    out
}

fn expect_type(spec: &SeaweedSpec, ok: &[AlgebraType], expected: &'static str) -> Result<()> {
    if ok.contains(&spec.algebra()) {
        Ok(())
    } else {
        Err(Error::WrongType {
            expected,
            got: spec.algebra().letter(),
        })
    }
}

pub fn build_a(spec: &SeaweedSpec) -> Result<Meander> {
    expect_type(spec, &[AlgebraType::A], "A")?;
    let n = small_n(spec, 1)?;
    Ok(Meander {
        lower: block_involution(&small_blocks(spec.top())?, n),
        upper: block_involution(&small_blocks(spec.bottom())?, n),
        crossed: None,
        origin: spec.clone(),
    })
}

/// Γ^C: the type-A meander of the symmetrized compositions on `2n` vertices.
/// Also used for type B, whose meander is the same graph.
pub fn build_bc(spec: &SeaweedSpec) -> Result<Meander> {
    expect_type(spec, &[AlgebraType::B, AlgebraType::C], "B or C")?;
    build_symmetric(spec)
}

fn build_symmetric(spec: &SeaweedSpec) -> Result<Meander> {
    let n = small_n(spec, 2)?;
    let top = symmetrized(&small_blocks(spec.top())?, n);
    let bottom = symmetrized(&small_blocks(spec.bottom())?, n);
    Ok(Meander {
        lower: block_involution(&top, 2 * n),
        upper: block_involution(&bottom, 2 * n),
        crossed: None,
        origin: spec.clone(),
    })
}

pub fn build_d(spec: &SeaweedSpec) -> Result<Meander> {
    expect_type(spec, &[AlgebraType::D], "D")?;
    let xi = spec.xi_membership();
    match xi.full_side {
        None => build_symmetric(spec),
        Some(Side::Top) => build_d_full_top(spec, spec),
        Some(Side::Bottom) => {
            let mut m = build_d_full_top(&spec.swapped(), spec)?;
            std::mem::swap(&mut m.lower, &mut m.upper);
            if let Some(c) = m.crossed.as_mut() {
                c.side = ArcSide::Upper;
            }
            Ok(m)
        }
    }
}

/// Ξ case with the full composition on top: take Γ^C_n(a | b') with the last
/// bottom block grown by one, then reconnect the last top block's arc and its
/// mirror image across the centre so that they cross.
fn build_d_full_top(spec: &SeaweedSpec, origin: &SeaweedSpec) -> Result<Meander> {
    let n = small_n(spec, 2)?;
    let top = small_blocks(spec.top())?;
    let bottom = small_blocks(&spec.bottom().with_last_incremented(1))?;
    let mut lower = block_involution(&symmetrized(&top, n), 2 * n);
    let upper = block_involution(&symmetrized(&bottom, n), 2 * n);

    let a_k = *top.last().expect("full side is non-empty");
    // 0-based: arc (p, n-1) and its mirror (n, n-1+a_k)
    let p = n - a_k;
    let q = n - 1 + a_k;
    lower[p] = n;
    lower[n] = p;
    lower[n - 1] = q;
    lower[q] = n - 1;

    Ok(Meander {
        lower,
        upper,
        crossed: Some(CrossedArcs {
            side: ArcSide::Lower,
            arcs: [(p + 1, n + 1), (n, q + 1)],
        }),
        origin: origin.clone(),
    })
}

/// Builds the meander matching the spec's algebra type.
pub fn build(spec: &SeaweedSpec) -> Result<Meander> {
    match spec.algebra() {
        AlgebraType::A => build_a(spec),
        AlgebraType::B | AlgebraType::C => build_bc(spec),
        AlgebraType::D => build_d(spec),
    }
}

impl Meander {
    pub fn vertex_count(&self) -> usize {
        self.lower.len()
    }

    pub fn origin(&self) -> &SeaweedSpec {
        &self.origin
    }

    pub fn crossed(&self) -> Option<&CrossedArcs> {
        self.crossed.as_ref()
    }

    /// Partner of the 1-based vertex `x` along an arc on `side`, if any.
    pub fn partner(&self, side: ArcSide, x: usize) -> Option<usize> {
        let inv = match side {
            ArcSide::Lower => &self.lower,
            ArcSide::Upper => &self.upper,
        };
        let y = inv[x - 1];
        (y != x - 1).then_some(y + 1)
    }

    /// Arcs on one side as `(lo, hi)` pairs sorted by `lo` (1-based).
    pub fn arcs(&self, side: ArcSide) -> Vec<(usize, usize)> {
        let inv = match side {
            ArcSide::Lower => &self.lower,
            ArcSide::Upper => &self.upper,
        };
        inv.iter()
            .enumerate()
            .filter(|&(x, &y)| x < y)
            .map(|(x, &y)| (x + 1, y + 1))
            .collect()
    }

    /// Whether the central reflection σ(x) = m + 1 − x applies.
    pub fn has_sigma(&self) -> bool {
        self.origin.algebra() != AlgebraType::A
    }
}

/// Decomposes the meander into cycles and segments.
///
/// Components are listed by smallest vertex. A segment is walked from its
/// smaller endpoint; a cycle from its smallest vertex, leaving along the
/// upper arc first.
pub fn components(meander: &Meander) -> ComponentReport {
    let m = meander.vertex_count();
    let lower = &meander.lower;
    let upper = &meander.upper;
    const NONE: usize = usize::MAX;
    let mut comp = vec![NONE; m];
    let mut raw: Vec<(ComponentKind, Vec<usize>)> = Vec::new();

    let degree = |x: usize| usize::from(lower[x] != x) + usize::from(upper[x] != x);

    // Segments first, from each endpoint in increasing order.
    for start in 0..m {
        if comp[start] != NONE || degree(start) == 2 {
            continue;
        }
        let id = raw.len();
        let mut walk = vec![start];
        comp[start] = id;
        let mut x = start;
        let mut use_upper = upper[start] != start;
        loop {
            let next = if use_upper { upper[x] } else { lower[x] };
            if next == x {
                break;
            }
            x = next;
            comp[x] = id;
            walk.push(x);
            use_upper = !use_upper;
        }
        raw.push((ComponentKind::Segment, walk));
    }
    for start in 0..m {
        if comp[start] != NONE {
            continue;
        }
        let id = raw.len();
        let mut walk = vec![start];
        comp[start] = id;
        let mut x = upper[start];
        let mut use_upper = false;
        while x != start {
            comp[x] = id;
            walk.push(x);
            x = if use_upper { upper[x] } else { lower[x] };
            use_upper = !use_upper;
        }
        raw.push((ComponentKind::Cycle, walk));
    }

    // Renumber by smallest vertex.
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&i| raw[i].1.iter().min().copied());
    let mut rename = vec![0; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let component_of_vertex: Vec<usize> = comp.iter().map(|&c| rename[c]).collect();

    let sigma = meander.has_sigma();
    let mut components = Vec::with_capacity(raw.len());
    let (mut cycles, mut segments, mut invariant_segments) = (0, 0, 0);
    for &old in &order {
        let (kind, walk) = &raw[old];
        let own = rename[old];
        let sigma_invariant = sigma && component_of_vertex[m - 1 - walk[0]] == own;
        debug_assert!(
            !sigma_invariant || walk.iter().all(|&x| component_of_vertex[m - 1 - x] == own)
        );
        match kind {
            ComponentKind::Cycle => cycles += 1,
            ComponentKind::Segment => {
                segments += 1;
                if sigma_invariant {
                    invariant_segments += 1;
                }
            }
        }
        components.push(Component {
            kind: *kind,
            vertices: walk.iter().map(|&x| x + 1).collect(),
            sigma_invariant,
        });
    }

    ComponentReport {
        components,
        cycles,
        segments,
        invariant_segments,
        component_of_vertex,
    }
}

/// Index of a type-A seaweed of gl(n): twice the cycles plus the segments.
pub fn index_a(report: &ComponentReport) -> u64 {
    (2 * report.cycles + report.segments) as u64
}

/// Index for types B and C: cycles plus half the non-invariant segments.
pub fn index_bc(report: &ComponentReport) -> Result<u64> {
    let free = report.non_invariant_segments();
    if free % 2 != 0 {
        return Err(Error::OddNonInvariantSegments(free));
    }
    Ok((report.cycles + free / 2) as u64)
}

/// The correction added to the B/C count for type D.
pub fn epsilon_d(meander: &Meander, report: &ComponentReport) -> Result<i64> {
    let spec = meander.origin();
    if let Some(crossed) = meander.crossed() {
        let (x, _) = crossed.arcs[0];
        let (y, _) = crossed.arcs[1];
        let cx = report.component_of_vertex[x - 1];
        let same_cycle = cx == report.component_of_vertex[y - 1]
            && report.components[cx].kind == ComponentKind::Cycle;
        return Ok(if same_cycle { -1 } else { 0 });
    }
    let (ta, tb) = (spec.top().total(), spec.bottom().total());
    let diff_odd = (ta.max(tb) - ta.min(tb)).bit(0);
    if !diff_odd {
        return Ok(0);
    }
    if ta.max(tb) != spec.n() {
        return Ok(-1);
    }
    let n = meander.vertex_count() / 2;
    let central = meander.partner(ArcSide::Lower, n) == Some(n + 1)
        || meander.partner(ArcSide::Upper, n) == Some(n + 1);
    if !central {
        return Err(Error::Invariant(format!(
            "{spec}: no arc joins the two central vertices"
        )));
    }
    Ok(match report.component_of(n).kind {
        ComponentKind::Segment => 1,
        ComponentKind::Cycle => -1,
    })
}

pub fn index_d(meander: &Meander, report: &ComponentReport) -> Result<u64> {
    let base = index_bc(report)? as i64;
    let eps = epsilon_d(meander, report)?;
    u64::try_from(base + eps)
        .map_err(|_| Error::Invariant(format!("{}: negative type-D index", meander.origin())))
}

/// Index of any seaweed by its meander.
pub fn index(spec: &SeaweedSpec) -> Result<u64> {
    let m = build(spec)?;
    let r = components(&m);
    match spec.algebra() {
        AlgebraType::A => Ok(index_a(&r)),
        AlgebraType::B | AlgebraType::C => index_bc(&r),
        AlgebraType::D => index_d(&m, &r),
    }
}

/// Ψ of a type-A seaweed: the index, lowered by 2 when the last vertex
/// lies on a cycle.
pub fn psi_a(spec: &SeaweedSpec) -> Result<u64> {
    let m = build_a(spec)?;
    let r = components(&m);
    let chi = index_a(&r);
    let n = m.vertex_count();
    match r.component_of(n).kind {
        ComponentKind::Segment => Ok(chi),
        ComponentKind::Cycle => Ok(chi - 2),
    }
}
