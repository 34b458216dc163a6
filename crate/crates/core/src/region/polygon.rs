//! Planar polygon helpers on rate pairs (`r1` as x, `r2` as y).

use crate::rates::RatePair;

/// Relative collinearity tolerance used by [`convex_hull`].
pub const COLLINEAR_TOL: f64 = 1e-12;

/// `(a − o) × (b − o)`; positive for a counterclockwise turn.
pub fn cross(o: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

fn dist(a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - b.r1).hypot(a.r2 - b.r2)
}

/// Counterclockwise turn that is not within [`COLLINEAR_TOL`] of straight.
fn is_left_turn(o: &RatePair, a: &RatePair, b: &RatePair) -> bool {
    cross(o, a, b) > COLLINEAR_TOL * dist(o, a) * dist(o, b)
}

/// Monotone-chain convex hull, counterclockwise, starting from the
/// lexicographically smallest point. Collinear points are dropped.
pub fn convex_hull(points: &[RatePair]) -> Vec<RatePair> {
    let mut pts: Vec<RatePair> = points
        .iter()
        .copied()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite())
        .collect();
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }

    let mut hull: Vec<RatePair> = Vec::with_capacity(pts.len() + 1);
    for p in &pts {
        while hull.len() >= 2 && !is_left_turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !is_left_turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

/// Absolute shoelace area.
pub fn area(poly: &[RatePair]) -> f64 {
    signed_area(poly).abs()
}

pub fn signed_area(poly: &[RatePair]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            a.r1 * b.r2 - b.r1 * a.r2
        })
        .sum();
    0.5 * twice
}

fn segment_distance(p: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.r1 - (a.r1 + t * dx)).hypot(p.r2 - (a.r2 + t * dy))
}

/// Distance from `p` to the polygon's boundary (or to its single point).
pub fn boundary_distance(poly: &[RatePair], p: &RatePair) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => dist(&poly[0], p),
        n => (0..n)
            .map(|i| segment_distance(p, &poly[i], &poly[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min),
    }
}

fn winding_number(poly: &[RatePair], p: &RatePair) -> i32 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        if a.r2 <= p.r2 {
            if b.r2 > p.r2 && cross(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.r2 <= p.r2 && cross(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Point membership for a simple polygon of either orientation; points
/// within `tol` of the boundary count as inside.
pub fn contains(poly: &[RatePair], p: &RatePair, tol: f64) -> bool {
    if poly.is_empty() {
        return false;
    }
    if boundary_distance(poly, p) <= tol {
        return true;
    }
    poly.len() >= 3 && winding_number(poly, p) != 0
}

/// Whether all turns of the polygon share one orientation.
pub fn is_convex(poly: &[RatePair]) -> bool {
    let n = poly.len();
    if n < 4 {
        return true;
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let c = cross(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]);
        let scale = dist(&poly[i], &poly[(i + 1) % n]) * dist(&poly[(i + 1) % n], &poly[(i + 2) % n]);
        if c.abs() <= COLLINEAR_TOL * scale {
            continue;
        }
        if sign == 0.0 {
            sign = c.signum();
        } else if c.signum() != sign {
            return false;
        }
    }
    true
}

/// Half-plane `{p : n·(p − origin) ≥ 0}`.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    origin: RatePair,
    normal: (f64, f64),
}

impl HalfPlane {
    fn left_of(a: RatePair, b: RatePair) -> Self {
        let len = dist(&a, &b);
        HalfPlane { origin: a, normal: (-(b.r2 - a.r2) / len, (b.r1 - a.r1) / len) }
    }

    fn side(&self, p: &RatePair) -> f64 {
        self.normal.0 * (p.r1 - self.origin.r1) + self.normal.1 * (p.r2 - self.origin.r2)
    }
}

fn clip_halfplane(input: &[RatePair], hp: &HalfPlane, eps: f64) -> Vec<RatePair> {
    let m = input.len();
    let mut output = Vec::with_capacity(m + 2);
    for j in 0..m {
        let cur = input[j];
        let prev = input[(j + m - 1) % m];
        let (sc, sp) = (hp.side(&cur), hp.side(&prev));
        let (cur_in, prev_in) = (sc >= -eps, sp >= -eps);
        if cur_in {
            if !prev_in {
                output.push(intersection(&prev, &cur, sp, sc));
            }
            output.push(cur);
        } else if prev_in {
            output.push(intersection(&prev, &cur, sp, sc));
        }
    }
    output
}

fn distinct_cycle(poly: &[RatePair]) -> Vec<RatePair> {
    let mut out: Vec<RatePair> = poly.to_vec();
    out.dedup_by(|a, b| dist(a, b) == 0.0);
    while out.len() > 1 && dist(&out[0], &out[out.len() - 1]) == 0.0 {
        out.pop();
    }
    out
}

/// Sutherland–Hodgman clipping of `subject` against the convex,
/// counterclockwise polygon `clip`. Degenerate clip polygons (a segment or
/// a point) are supported.
pub fn clip_convex(subject: &[RatePair], clip: &[RatePair]) -> Vec<RatePair> {
    let clip = distinct_cycle(clip);
    if clip.is_empty() || subject.is_empty() {
        return Vec::new();
    }
    let scale = clip
        .iter()
        .chain(subject.iter())
        .map(|p| p.r1.abs().max(p.r2.abs()))
        .fold(1e-300, f64::max);
    let eps = 1e-12 * scale;

    if clip.len() == 1 {
        let c = clip[0];
        return if contains(subject, &c, eps) { vec![c] } else { Vec::new() };
    }

    let planes: Vec<HalfPlane> = if area(&clip) <= eps * scale {
        // segment: farthest pair of points, both sides plus end caps
        let a = clip[0];
        let b = *clip
            .iter()
            .max_by(|p, q| dist(&a, p).total_cmp(&dist(&a, q)))
            .expect("nonempty");
        let a = *clip
            .iter()
            .max_by(|p, q| dist(&b, p).total_cmp(&dist(&b, q)))
            .expect("nonempty");
        let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
        let len = (dx * dx + dy * dy).sqrt();
        let along = (dx / len, dy / len);
        vec![
            HalfPlane::left_of(a, b),
            HalfPlane::left_of(b, a),
            HalfPlane { origin: a, normal: along },
            HalfPlane { origin: b, normal: (-along.0, -along.1) },
        ]
    } else {
        let n = clip.len();
        (0..n).map(|i| HalfPlane::left_of(clip[i], clip[(i + 1) % n])).collect()
    };

    let mut output: Vec<RatePair> = subject.to_vec();
    for hp in &planes {
        if output.is_empty() {
            break;
        }
        output = clip_halfplane(&output, hp, eps);
    }
    output.dedup_by(|a, b| dist(a, b) <= 1e-15 * scale);
    if output.len() > 1 && dist(&output[0], &output[output.len() - 1]) <= 1e-15 * scale {
        output.pop();
    }
    output
}

fn intersection(p: &RatePair, q: &RatePair, sp: f64, sq: f64) -> RatePair {
    let t = (sp / (sp - sq)).clamp(0.0, 1.0);
    RatePair::new(p.r1 + t * (q.r1 - p.r1), p.r2 + t * (q.r2 - p.r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<RatePair> {
        v.iter().map(|&(a, b)| RatePair::new(a, b)).collect()
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = convex_hull(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5), (0.5, 0.0)]));
        assert_eq!(h, pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        assert!(signed_area(&h) > 0.0);
        assert_eq!(area(&h), 1.0);
    }

    #[test]
    fn hull_of_two_points_is_segment() {
        let h = convex_hull(&pts(&[(0.0, 1.0), (2.0, 0.0), (1.0, 0.5)]));
        assert_eq!(h.len(), 2);
        assert!(contains(&h, &RatePair::new(1.0, 0.5), 1e-12));
        assert!(!contains(&h, &RatePair::new(1.0, 0.6), 1e-12));
    }

    #[test]
    fn containment_of_nonconvex_polygon() {
        // L shape
        let l = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        assert!(!is_convex(&l));
        assert!(contains(&l, &RatePair::new(0.5, 1.5), 0.0));
        assert!(!contains(&l, &RatePair::new(1.5, 1.5), 0.0));
        assert!(contains(&l, &RatePair::new(1.5, 1.0), 1e-12));
        assert_eq!(area(&l), 3.0);
    }

    #[test]
    fn clip_overlapping_squares() {
        let a = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
        let b = pts(&[(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (1.0, 3.0)]);
        let c = clip_convex(&a, &b);
        assert!((area(&c) - 1.0).abs() < 1e-15);

        let far = pts(&[(5.0, 5.0), (6.0, 5.0), (6.0, 6.0), (5.0, 6.0)]);
        assert!(clip_convex(&a, &far).is_empty());
    }

    #[test]
    fn clip_point_subject() {
        let sq = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(clip_convex(&pts(&[(0.5, 0.5)]), &sq).len(), 1);
        assert!(clip_convex(&pts(&[(1.5, 0.5)]), &sq).is_empty());
    }

    #[test]
    fn clip_against_degenerate_polygons() {
        let sq = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
        let seg = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let c = clip_convex(&sq, &seg);
        assert!(!c.is_empty());
        assert!(c.iter().all(|p| p.r2.abs() < 1e-15 && p.r1 >= -1e-15 && p.r1 <= 1.0 + 1e-15));

        let point = pts(&[(1.0, 1.0); 4]);
        assert_eq!(clip_convex(&sq, &point), pts(&[(1.0, 1.0)]));
        let outside = pts(&[(3.0, 1.0); 4]);
        assert!(clip_convex(&sq, &outside).is_empty());
    }
}
