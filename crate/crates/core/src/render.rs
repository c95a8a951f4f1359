//! ASCII and SVG drawings of meanders.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::meander::{ArcSide, Meander};

/// Default largest vertex count [`render`] draws.
pub const DEFAULT_MAX_RENDER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg { unit: u32 },
}

pub fn render(meander: &Meander, format: Format, max_vertices: usize) -> Result<String> {
    let m = meander.vertex_count();
    if m > max_vertices {
        return Err(Error::TooLarge {
            what: "meander drawing",
            size: m.to_string(),
            bound: max_vertices.to_string(),
        });
    }
    Ok(match format {
        Format::Ascii => ascii(meander),
        Format::Svg { unit } => svg(meander, unit.max(2)),
    })
}

/// Height of each arc: one more than the highest arc starting strictly
/// inside it. Nested arcs stack; of two crossing arcs the left one rises.
fn levels(arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut by_lo: Vec<usize> = (0..arcs.len()).collect();
    by_lo.sort_by_key(|&i| std::cmp::Reverse(arcs[i].0));
    let mut level = vec![0; arcs.len()];
    for &i in &by_lo {
        let (lo, hi) = arcs[i];
        let inner = arcs
            .iter()
            .zip(&level)
            .filter(|((l, _), _)| lo < *l && *l < hi)
            .map(|(_, &lv)| lv)
            .max()
            .unwrap_or(0);
        level[i] = inner + 1;
    }
    level
}

fn put(grid: &mut [Vec<char>], row: usize, col: usize, ch: char) {
    let cell = &mut grid[row][col];
    *cell = match (*cell, ch) {
        (' ', c) => c,
        ('|', '-') | ('-', '|') => '+',
        (old, _) if old == '+' || old == 'o' => old,
        (_, c) => c,
    };
}

/// Rows of arcs for one side, nearest-to-the-line row first.
fn side_rows(arcs: &[(usize, usize)], width: usize) -> Vec<Vec<char>> {
    let lv = levels(arcs);
    let height = lv.iter().copied().max().unwrap_or(0);
    let mut grid = vec![vec![' '; width]; height];
    // horizontals first so legs drawn later become crossings
    for (&(lo, hi), &l) in arcs.iter().zip(&lv) {
        let (a, b) = (2 * (lo - 1), 2 * (hi - 1));
        for c in a + 1..b {
            put(&mut grid, l - 1, c, '-');
        }
    }
    for (&(lo, hi), &l) in arcs.iter().zip(&lv) {
        let (a, b) = (2 * (lo - 1), 2 * (hi - 1));
        for r in 0..l - 1 {
            put(&mut grid, r, a, '|');
            put(&mut grid, r, b, '|');
        }
        grid[l - 1][a] = '+';
        grid[l - 1][b] = '+';
    }
    grid
}

fn ascii(meander: &Meander) -> String {
    let m = meander.vertex_count();
    let width = 2 * m - 1;
    let upper = side_rows(&meander.arcs(ArcSide::Upper), width);
    let lower = side_rows(&meander.arcs(ArcSide::Lower), width);
    let mut out = String::new();
    let mut line = |row: &[char]| {
        let s: String = row.iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    };
    for row in upper.iter().rev() {
        line(row);
    }
    let mut vertices = vec![' '; width];
    for i in 0..m {
        vertices[2 * i] = 'o';
    }
    line(&vertices);
    for row in &lower {
        line(row);
    }
    out
}

/// `v / 2` printed exactly.
fn half(v: u64) -> String {
    if v % 2 == 0 {
        (v / 2).to_string()
    } else {
        format!("{}.5", v / 2)
    }
}

fn svg(meander: &Meander, unit: u32) -> String {
    let unit = u64::from(unit);
    let m = meander.vertex_count() as u64;
    let upper = meander.arcs(ArcSide::Upper);
    let lower = meander.arcs(ArcSide::Lower);
    let span =
        |arcs: &[(usize, usize)]| arcs.iter().map(|&(a, b)| (b - a) as u64).max().unwrap_or(0);
    // radii are span·unit/2; keep everything in half-units
    let up2 = span(&upper) * unit + unit;
    let down2 = span(&lower) * unit + unit;
    let width2 = 2 * (m + 1) * unit;
    let crossed: HashMap<(ArcSide, (usize, usize)), ()> = meander
        .crossed()
        .map(|c| c.arcs.iter().map(|&a| ((c.side, a), ())).collect())
        .unwrap_or_default();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 -{up} {w} {h}">"#,
        w = half(width2),
        h = half(up2 + down2),
        up = half(up2),
    );
    let _ = writeln!(s, "<title>{}</title>", meander.origin());
    if meander.has_sigma() {
        let x2 = (m + 1) * unit;
        let _ = writeln!(
            s,
            r#"<line class="sigma" x1="{x}" y1="-{up}" x2="{x}" y2="{down}" stroke="gray" stroke-dasharray="4 4"/>"#,
            x = half(x2),
            up = half(up2),
            down = half(down2),
        );
    }
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="0" y1="0" x2="{}" y2="0" stroke="lightgray"/>"#,
        half(width2)
    );
    for (side, arcs, sweep, name) in [
        (ArcSide::Upper, &upper, 1, "upper"),
        (ArcSide::Lower, &lower, 0, "lower"),
    ] {
        for &(a, b) in arcs.iter() {
            let r2 = (b - a) as u64 * unit;
            let is_crossed = crossed.contains_key(&(side, (a, b)));
            let (class, stroke) = if is_crossed {
                (format!("{name} crossed"), "red")
            } else {
                (name.to_string(), "black")
            };
            let _ = writeln!(
                s,
                r#"<path class="{class}" data-arc="{a} {b}" d="M {x1} 0 A {r} {r} 0 0 {sweep} {x2} 0" fill="none" stroke="{stroke}"/>"#,
                x1 = a as u64 * unit,
                x2 = b as u64 * unit,
                r = half(r2),
            );
        }
    }
    for i in 1..=m {
        let _ = writeln!(
            s,
            r#"<circle class="vertex" data-vertex="{i}" cx="{}" cy="0" r="{}" fill="black"/>"#,
            i * unit,
            (unit / 8).max(1)
        );
    }
    s.push_str("</svg>\n");
    s
}
