//! Newton polygons `N_{μ,φ}(f)`: the lower convex hull of the cloud
//! `{(s, μ(a_s))}` of a `φ`-expansion.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::valuation::InductiveValuation;
use crate::Rational;

/// A Newton polygon given by its vertices, left to right.
///
/// The empty polygon (no vertices) is the polygon of the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(usize, Rational)>,
}

/// The `λ`-component: hull points minimizing `u + sλ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub lambda: Rational,
    pub s_start: usize,
    pub s_end: usize,
    pub min_value: Rational,
}

/// A side of a polygon: horizontal width and slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub slope: Rational,
    pub width: usize,
}

impl NewtonPolygon {
    pub fn empty() -> Self {
        NewtonPolygon { vertices: Vec::new() }
    }

    /// Lower convex hull of a finite cloud with distinct abscissas.
    pub fn from_points(points: &[(usize, Rational)]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by_key(|(s, _)| *s);
        let mut hull: Vec<(usize, Rational)> = Vec::with_capacity(pts.len());
        for pt in pts {
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // drop b when it lies on or above the segment from a to the new point
                let cross = rat(b.0 as i64 - a.0 as i64) * (&pt.1 - &a.1)
                    - (&b.1 - &a.1) * rat(pt.0 as i64 - a.0 as i64);
                if cross <= Rational::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        NewtonPolygon { vertices: hull }
    }

    /// Builds a polygon from a left endpoint and sides, which are sorted by
    /// increasing slope and merged where slopes coincide.
    pub fn from_sides(start: (usize, Rational), sides: &[Side]) -> Self {
        let mut sides = sides.to_vec();
        sides.sort_by(|a, b| a.slope.cmp(&b.slope));
        let mut merged: Vec<Side> = Vec::new();
        for side in sides.into_iter().filter(|s| s.width > 0) {
            match merged.last_mut() {
                Some(last) if last.slope == side.slope => last.width += side.width,
                _ => merged.push(side),
            }
        }
        let mut vertices = vec![start];
        for side in merged {
            let (s, u) = vertices.last().unwrap().clone();
            vertices.push((s + side.width, u + &side.slope * rat(side.width as i64)));
        }
        NewtonPolygon { vertices }
    }

    pub fn vertices(&self) -> &[(usize, Rational)] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Abscissa of the left endpoint, `ord_φ(f)`.
    pub fn ord(&self) -> Option<usize> {
        self.vertices.first().map(|v| v.0)
    }

    /// Abscissa of the right endpoint.
    pub fn length(&self) -> usize {
        self.vertices.last().map_or(0, |v| v.0)
    }

    pub fn left_endpoint(&self) -> Option<&(usize, Rational)> {
        self.vertices.first()
    }

    pub fn sides(&self) -> Vec<Side> {
        self.vertices
            .windows(2)
            .map(|w| Side {
                slope: (&w[1].1 - &w[0].1) / rat(w[1].0 as i64 - w[0].0 as i64),
                width: w[1].0 - w[0].0,
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.sides().into_iter().map(|s| s.slope).collect()
    }

    /// Ordinate of the polygon above abscissa `s` (inside its range).
    pub fn ordinate_at(&self, s: usize) -> Option<Rational> {
        let first = self.vertices.first()?;
        if s < first.0 || s > self.length() {
            return None;
        }
        for w in self.vertices.windows(2) {
            if s <= w[1].0 {
                let t = rat((s - w[0].0) as i64) / rat((w[1].0 - w[0].0) as i64);
                return Some(&w[0].1 + (&w[1].1 - &w[0].1) * t);
            }
        }
        Some(first.1.clone())
    }
}

/// `N_{μ,φ}(f)` for a key polynomial `φ`; points with `a_s = 0` are omitted.
pub fn newton_polygon(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Result<NewtonPolygon> {
    Ok(NewtonPolygon::from_points(&cloud(mu, phi, f)?))
}

/// The cloud `{(s, μ(a_s)) : a_s ≠ 0}` of the `φ`-expansion of `f`.
pub fn cloud(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Result<Vec<(usize, Rational)>> {
    let parts = crate::valuation::phi_expansion(f, phi)?;
    Ok(parts
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(s, a)| (s, mu.value(a).expect_finite("nonzero coefficient").expect("finite")))
        .collect())
}

/// The principal part: sides of slope `< -cutoff`, or the left endpoint alone
/// when there are none.
pub fn principal_part(n: &NewtonPolygon, cutoff: &Rational) -> NewtonPolygon {
    let Some(first) = n.vertices.first() else { return NewtonPolygon::empty() };
    let bound = -cutoff.clone();
    let mut vertices = vec![first.clone()];
    for w in n.vertices.windows(2) {
        let slope = (&w[1].1 - &w[0].1) / rat(w[1].0 as i64 - w[0].0 as i64);
        if slope < bound {
            vertices.push(w[1].clone());
        } else {
            break;
        }
    }
    NewtonPolygon { vertices }
}

/// The hull points minimizing `u + sλ`.
pub fn lambda_component(n: &NewtonPolygon, lambda: &Rational) -> Result<Component> {
    if n.is_empty() {
        return Err(Error::invalid("the empty polygon has no components"));
    }
    let mut best: Option<Component> = None;
    for (s, u) in &n.vertices {
        let v = u + lambda * rat(*s as i64);
        match &mut best {
            Some(c) if v == c.min_value => c.s_end = *s,
            Some(c) if v > c.min_value => {}
            _ => {
                best = Some(Component { lambda: lambda.clone(), s_start: *s, s_end: *s, min_value: v });
            }
        }
    }
    Ok(best.unwrap())
}

/// The addition law: left endpoints add, sides are merged by slope.
pub fn polygon_sum(a: &NewtonPolygon, b: &NewtonPolygon) -> NewtonPolygon {
    let (Some(pa), Some(pb)) = (a.left_endpoint(), b.left_endpoint()) else {
        return NewtonPolygon::empty();
    };
    let start = (pa.0 + pb.0, &pa.1 + &pb.1);
    let mut sides = a.sides();
    sides.extend(b.sides());
    NewtonPolygon::from_sides(start, &sides)
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
