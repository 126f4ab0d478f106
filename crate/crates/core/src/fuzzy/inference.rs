use super::{FuzzyError, MembershipFunction};

/// Grid points used by the default centroid defuzzification.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// Additive aggregate of activation-scaled consequent sets produced by
/// firing a rule base. `degree` can exceed one where scaled contributions
/// overlap; the centroid normalizes by total mass, so that is harmless.
#[derive(Debug, Clone)]
pub struct AggregatedSet<'rb> {
    universe: (f64, f64),
    components: Vec<(f64, &'rb MembershipFunction)>,
}

impl<'rb> AggregatedSet<'rb> {
    pub(crate) fn new(
        universe: (f64, f64),
        components: Vec<(f64, &'rb MembershipFunction)>,
    ) -> Self {
        Self { universe, components }
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn degree(&self, y: f64) -> f64 {
        self.components
            .iter()
            .map(|(act, mf)| act * mf.degree(y))
            .sum()
    }

    pub fn centroid(&self, resolution: usize) -> Result<f64, FuzzyError> {
        defuzzify_centroid(self, resolution)
    }
}

/// Centroid over a uniform grid of `resolution` points spanning the output
/// universe. The two end points carry half weight (trapezoid rule), which
/// keeps the result within 1e-4 of a brute-force fine-grid centroid even
/// when the aggregate is nonzero at a universe edge.
pub fn defuzzify_centroid(agg: &AggregatedSet<'_>, resolution: usize) -> Result<f64, FuzzyError> {
    if resolution < 2 {
        return Err(FuzzyError::BadResolution(resolution));
    }
    let (lo, hi) = agg.universe;
    let step = (hi - lo) / (resolution - 1) as f64;
    let mut mass = 0.0;
    let mut moment = 0.0;
    for i in 0..resolution {
        let y = lo + step * i as f64;
        let mut w = agg.degree(y);
        if i == 0 || i == resolution - 1 {
            w *= 0.5;
        }
        mass += w;
        moment += y * w;
    }
    if mass <= 0.0 {
        return Err(FuzzyError::EmptyAggregate);
    }
    Ok(moment / mass)
}
