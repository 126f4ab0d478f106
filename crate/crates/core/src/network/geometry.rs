use serde::{Deserialize, Serialize};

/// Sampled 2-D polyline with cumulative arc length, used for movement paths
/// through the intersection box and for crosswalk lines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyPath {
    points: Vec<(f64, f64)>,
    cumulative: Vec<f64>,
}

impl PolyPath {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        assert!(points.len() >= 2, "a path needs at least two points");
        let mut cumulative = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in points.windows(2) {
            acc += dist(w[0], w[1]);
            cumulative.push(acc);
        }
        Self { points, cumulative }
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn point_at(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, self.length());
        let i = self
            .cumulative
            .partition_point(|&c| c <= s)
            .min(self.points.len() - 1)
            .max(1);
        let (c0, c1) = (self.cumulative[i - 1], self.cumulative[i]);
        let t = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        let (p0, p1) = (self.points[i - 1], self.points[i]);
        (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1))
    }

    /// First proper crossing between the two paths, as arc positions along
    /// each. Collinear overlaps (shared entry lanes of sibling movements)
    /// do not count as crossings.
    pub fn first_crossing(&self, other: &PolyPath) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for i in 0..self.points.len() - 1 {
            let (a1, a2) = (self.points[i], self.points[i + 1]);
            for j in 0..other.points.len() - 1 {
                let (b1, b2) = (other.points[j], other.points[j + 1]);
                if let Some((t, u)) = proper_intersection(a1, a2, b1, b2) {
                    let sa = self.cumulative[i] + t * dist(a1, a2);
                    let sb = other.cumulative[j] + u * dist(b1, b2);
                    if best.map_or(true, |(cur, _)| sa < cur) {
                        best = Some((sa, sb));
                    }
                }
            }
        }
        best
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn proper_intersection(
    p1: (f64, f64),
    p2: (f64, f64),
    p3: (f64, f64),
    p4: (f64, f64),
) -> Option<(f64, f64)> {
    let r = (p2.0 - p1.0, p2.1 - p1.1);
    let s = (p4.0 - p3.0, p4.1 - p3.1);
    let denom = cross(r, s);
    if denom.abs() < 1e-12 {
        return None;
    }
    let qp = (p3.0 - p1.0, p3.1 - p1.1);
    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    let eps = 1e-9;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        Some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
    } else {
        None
    }
}

/// Straight segment sampled as a two-point path piece.
pub fn straight(from: (f64, f64), to: (f64, f64)) -> Vec<(f64, f64)> {
    vec![from, to]
}

/// Quarter turn from `from` (traveling along the unit vector `heading`) to
/// `to`, where entry and exit headings are perpendicular and axis-aligned.
/// The curve is the quarter ellipse whose semi-axes match the two offsets.
pub fn quarter_turn(
    from: (f64, f64),
    to: (f64, f64),
    heading: (f64, f64),
    samples: usize,
) -> Vec<(f64, f64)> {
    let delta = (to.0 - from.0, to.1 - from.1);
    let along = delta.0 * heading.0 + delta.1 * heading.1;
    let perp = (delta.0 - along * heading.0, delta.1 - along * heading.1);
    let mut pts = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / samples as f64;
        let (sin, cos) = theta.sin_cos();
        pts.push((
            from.0 + heading.0 * along * sin + perp.0 * (1.0 - cos),
            from.1 + heading.1 * along * sin + perp.1 * (1.0 - cos),
        ));
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn straight_path_length_and_interpolation() {
        let p = PolyPath::new(straight((0.0, 0.0), (3.0, 4.0)));
        assert_relative_eq!(p.length(), 5.0);
        let mid = p.point_at(2.5);
        assert_relative_eq!(mid.0, 1.5);
        assert_relative_eq!(mid.1, 2.0);
    }

    #[test]
    fn quarter_turn_hits_both_endpoints_with_right_headings() {
        let pts = quarter_turn((5.25, -9.5), (9.5, -5.25), (0.0, 1.0), 48);
        assert_relative_eq!(pts[0].0, 5.25);
        assert_relative_eq!(pts[0].1, -9.5);
        let last = *pts.last().unwrap();
        assert_relative_eq!(last.0, 9.5, epsilon = 1e-9);
        assert_relative_eq!(last.1, -5.25, epsilon = 1e-9);
        // Initial motion is dominated by +y, final motion by +x.
        let (dx0, dy0) = (pts[1].0 - pts[0].0, pts[1].1 - pts[0].1);
        assert!(dy0 > 0.0 && dx0.abs() < 0.1 * dy0);
        let n = pts.len();
        let (dx1, dy1) = (pts[n - 1].0 - pts[n - 2].0, pts[n - 1].1 - pts[n - 2].1);
        assert!(dx1 > 0.0 && dy1.abs() < 0.1 * dx1);
    }

    #[test]
    fn crossing_paths_are_detected_once() {
        let a = PolyPath::new(straight((-10.0, 0.0), (10.0, 0.0)));
        let b = PolyPath::new(straight((0.0, -10.0), (0.0, 10.0)));
        let (sa, sb) = a.first_crossing(&b).unwrap();
        assert_relative_eq!(sa, 10.0);
        assert_relative_eq!(sb, 10.0);
    }

    #[test]
    fn parallel_and_collinear_paths_do_not_cross() {
        let a = PolyPath::new(straight((0.0, 0.0), (10.0, 0.0)));
        let b = PolyPath::new(straight((0.0, 1.5), (10.0, 1.5)));
        assert!(a.first_crossing(&b).is_none());
        let c = PolyPath::new(straight((2.0, 0.0), (12.0, 0.0)));
        assert!(a.first_crossing(&c).is_none());
    }
}
