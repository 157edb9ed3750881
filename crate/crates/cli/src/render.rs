//! Text rendering of factorizations and Newton polygons.

use std::fmt::Write;

use omval_core::{NewtonPolygon, OMLeaf, RatPoly, Rational};
use serde_json::json;

fn list(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(", "))
}

pub fn factorization(f: &RatPoly, p: u64, leaves: &[OMLeaf]) -> String {
    let mut s = String::new();
    let plural = if leaves.len() == 1 { "" } else { "s" };
    let _ = writeln!(s, "{f} over Q_{p}: {} prime factor{plural}", leaves.len());
    for (i, leaf) in leaves.iter().enumerate() {
        let j = leaf.to_json();
        let status = if j.exact { "exact".to_string() } else { format!("v_F(phi) = {}", j.certified_value) };
        let _ = writeln!(s, "  [{}] degree {}, e = {}, f = {}, depth {}, {status}", i + 1, j.degree, j.e, j.f, j.depth);
        let _ = writeln!(s, "      phi = {}", j.phi);
        if let (Some(w), Some(b)) = (&j.weight, &j.okutsu_bound) {
            let _ = writeln!(s, "      frame = {}", list(j.frame.clone()));
            let _ = writeln!(s, "      slopes = {}", list(j.slopes.clone()));
            let _ = writeln!(s, "      weight = {w}, okutsu bound = {b}");
        }
    }
    s
}

pub fn points_json(points: &[(usize, Rational)]) -> serde_json::Value {
    json!(points.iter().map(|(s, u)| json!([s, u.to_string()])).collect::<Vec<_>>())
}

fn point(p: &(usize, Rational)) -> String {
    format!("({}, {})", p.0, p.1)
}

pub fn polygon(
    f: &RatPoly,
    phi: &RatPoly,
    cutoff: &Rational,
    n: &NewtonPolygon,
    pp: &NewtonPolygon,
    cloud: &[(usize, Rational)],
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "N(f) for f = {f}, phi = {phi}, mu(phi) = {cutoff}");
    let _ = writeln!(s, "vertices: {}", list(n.vertices().iter().map(point)));
    let _ = writeln!(s, "slopes: {}", list(n.slopes().iter().map(|q| q.to_string())));
    let _ = writeln!(s, "principal part: {}", list(pp.vertices().iter().map(point)));
    let _ = writeln!(s, "ord_phi(f) = {}, length = {}", n.ord().unwrap_or(0), n.length());
    s.push_str(&sketch(n, cloud));
    s
}

const MAX_ROWS: usize = 16;

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// ASCII plot: `*` vertices, `o` other cloud points, `.` the polygon between
/// vertices, one column per abscissa.
fn sketch(n: &NewtonPolygon, cloud: &[(usize, Rational)]) -> String {
    let (Some(first), Some(last)) = (n.vertices().first(), n.vertices().last()) else {
        return String::new();
    };
    let (s0, s1) = (first.0, last.0);
    let cols: Vec<usize> = (s0..=s1).collect();
    let lo = cloud.iter().map(|(_, u)| u.clone()).chain(n.vertices().iter().map(|(_, u)| u.clone())).min().unwrap();
    let hi = cloud.iter().map(|(_, u)| u.clone()).chain(n.vertices().iter().map(|(_, u)| u.clone())).max().unwrap();
    // one row per multiple of 1/den, thinned out when that gets too tall
    let den = cloud
        .iter()
        .chain(n.vertices())
        .fold(1u64, |acc, (_, u)| lcm(acc, u.denom().try_into().unwrap_or(1)));
    let span = (&hi - &lo) * Rational::from_integer(den.into());
    let span: usize = span.ceil().to_integer().try_into().unwrap_or(MAX_ROWS);
    let stride = span.div_ceil(MAX_ROWS - 1).max(1);
    let rows = span / stride + 1;
    let row_of = |u: &Rational| -> usize {
        let t = (u - &lo) * Rational::from_integer(den.into()) / Rational::from_integer(stride.into());
        t.round().to_integer().try_into().unwrap_or(0)
    };
    let mut grid = vec![vec![' '; cols.len()]; rows];
    for &c in &cols {
        if let Some(y) = n.ordinate_at(c) {
            grid[row_of(&y)][c - s0] = '.';
        }
    }
    for (c, u) in cloud {
        if (s0..=s1).contains(c) {
            grid[row_of(u)][c - s0] = 'o';
        }
    }
    for (c, u) in n.vertices() {
        grid[row_of(u)][c - s0] = '*';
    }
    let label_hi = hi.to_string();
    let label_lo = lo.to_string();
    let width = label_hi.len().max(label_lo.len());
    let mut out = String::new();
    for r in (0..rows).rev() {
        let label = if r == rows - 1 {
            label_hi.clone()
        } else if r == 0 {
            label_lo.clone()
        } else {
            String::new()
        };
        let line: String = grid[r].iter().flat_map(|&ch| [ch, ' ']).collect();
        let _ = writeln!(out, "{label:>width$} | {}", line.trim_end());
    }
    let _ = writeln!(out, "{:>width$} +-{}", "", "--".repeat(cols.len()));
    let _ = writeln!(out, "{:>width$}   s = {s0}..{s1}", "");
    out
}
