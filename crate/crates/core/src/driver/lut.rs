/// Dense 2-D lookup table with bilinear interpolation, used to cache the
/// fuzzy response surfaces. 101 nodes per axis keeps every term peak of the
/// shipped uniform partitions exactly on a node, so cached and direct
/// evaluation agree at the pinned inputs.
#[derive(Debug, Clone)]
pub(crate) struct Lut2 {
    lo0: f64,
    lo1: f64,
    step0: f64,
    step1: f64,
    n0: usize,
    n1: usize,
    values: Vec<f64>,
}

pub(crate) const LUT_NODES: usize = 101;

impl Lut2 {
    pub fn build(
        range0: (f64, f64),
        range1: (f64, f64),
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Self {
        let (n0, n1) = (LUT_NODES, LUT_NODES);
        let step0 = (range0.1 - range0.0) / (n0 - 1) as f64;
        let step1 = (range1.1 - range1.0) / (n1 - 1) as f64;
        let mut values = Vec::with_capacity(n0 * n1);
        for i in 0..n0 {
            let x = range0.0 + step0 * i as f64;
            for j in 0..n1 {
                let y = range1.0 + step1 * j as f64;
                values.push(f(x, y));
            }
        }
        Self { lo0: range0.0, lo1: range1.0, step0, step1, n0, n1, values }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let fx = ((x - self.lo0) / self.step0).clamp(0.0, (self.n0 - 1) as f64);
        let fy = ((y - self.lo1) / self.step1).clamp(0.0, (self.n1 - 1) as f64);
        let i = (fx as usize).min(self.n0 - 2);
        let j = (fy as usize).min(self.n1 - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v = |a: usize, b: usize| self.values[a * self.n1 + b];
        v(i, j) * (1.0 - tx) * (1.0 - ty)
            + v(i + 1, j) * tx * (1.0 - ty)
            + v(i, j + 1) * (1.0 - tx) * ty
            + v(i + 1, j + 1) * tx * ty
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_bilinear_functions_exactly() {
        let lut = Lut2::build((0.0, 2.0), (-1.0, 1.0), |x, y| 2.0 * x - 3.0 * y + x * y);
        for (x, y) in [(0.0, -1.0), (1.3, 0.2), (2.0, 1.0), (0.77, -0.4)] {
            assert_relative_eq!(lut.eval(x, y), 2.0 * x - 3.0 * y + x * y, epsilon = 1e-12);
        }
    }

    #[test]
    fn clamps_outside_the_table() {
        let lut = Lut2::build((0.0, 1.0), (0.0, 1.0), |x, y| x + y);
        assert_relative_eq!(lut.eval(5.0, 5.0), 2.0);
        assert_relative_eq!(lut.eval(-5.0, 0.5), 0.5);
    }
}
