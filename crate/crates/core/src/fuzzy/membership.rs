use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Piecewise-linear membership function given by ordered `(x, degree)`
/// breakpoints. Outside the breakpoint span the first/last degree extends
/// flat, so a nonzero end degree forms a shoulder and a zero end degree
/// means the function vanishes there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipFunction {
    breakpoints: Vec<(f64, f64)>,
}

impl MembershipFunction {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self, FuzzyError> {
        if breakpoints.len() < 2 {
            return Err(FuzzyError::TooFewBreakpoints(breakpoints.len()));
        }
        let mut normal = false;
        for (i, &(x, d)) in breakpoints.iter().enumerate() {
            if !x.is_finite() || (i > 0 && x <= breakpoints[i - 1].0) {
                return Err(FuzzyError::UnorderedBreakpoints(i));
            }
            if !(0.0..=1.0).contains(&d) {
                return Err(FuzzyError::DegreeOutOfRange(d));
            }
            if d == 1.0 {
                normal = true;
            }
        }
        if !normal {
            return Err(FuzzyError::NotNormal);
        }
        Ok(Self { breakpoints })
    }

    /// Symmetric or skewed triangle `(a, peak, c)`; `a == peak` or `peak == c`
    /// collapse to a two-point ramp.
    pub fn triangular(a: f64, peak: f64, c: f64) -> Result<Self, FuzzyError> {
        let mut pts = Vec::with_capacity(3);
        if a < peak {
            pts.push((a, 0.0));
        }
        pts.push((peak, 1.0));
        if c > peak {
            pts.push((c, 0.0));
        }
        Self::new(pts)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// x-coordinate of the first breakpoint with degree 1.
    pub fn peak(&self) -> f64 {
        self.breakpoints
            .iter()
            .find(|&&(_, d)| d == 1.0)
            .map(|&(x, _)| x)
            .expect("constructor guarantees a degree-1 breakpoint")
    }

    /// Exact piecewise-linear interpolation, with flat shoulder extension
    /// beyond the breakpoint span.
    pub fn degree(&self, x: f64) -> f64 {
        let pts = &self.breakpoints;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        // Index of the first breakpoint with x-coordinate > x.
        let hi = pts.partition_point(|&(bx, _)| bx <= x);
        let (x0, d0) = pts[hi - 1];
        let (x1, d1) = pts[hi];
        if x == x0 {
            return d0;
        }
        d0 + (x - x0) / (x1 - x0) * (d1 - d0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn triangular_interpolates() {
        let mf = MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap();
        assert_eq!(mf.degree(1.0), 1.0);
        assert_relative_eq!(mf.degree(0.5), 0.5);
        assert_eq!(mf.degree(3.0), 0.0);
        assert_eq!(mf.degree(-1.0), 0.0);
        assert_eq!(mf.peak(), 1.0);
    }

    #[test]
    fn shoulder_extends_flat() {
        let mf = MembershipFunction::new(vec![(0.0, 1.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert_eq!(mf.degree(-5.0), 1.0);
        assert_eq!(mf.degree(0.5), 1.0);
        assert_relative_eq!(mf.degree(1.5), 0.5);
        assert_eq!(mf.degree(2.5), 0.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MembershipFunction::new(vec![(0.0, 1.0)]).is_err());
        assert!(MembershipFunction::new(vec![(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(MembershipFunction::new(vec![(0.0, 0.0), (1.0, 1.5)]).is_err());
        // No degree-1 breakpoint anywhere.
        assert!(MembershipFunction::new(vec![(0.0, 0.0), (1.0, 0.5)]).is_err());
    }

    #[test]
    fn degree_at_exact_breakpoint() {
        let mf =
            MembershipFunction::new(vec![(0.0, 0.0), (1.0, 0.4), (2.0, 1.0), (3.0, 0.0)]).unwrap();
        assert_eq!(mf.degree(1.0), 0.4);
        assert_eq!(mf.degree(2.0), 1.0);
    }
}
