use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{FuzzyError, MembershipFunction};

const VALIDATION_GRID: usize = 1001;

/// Linguistic variable: a named closed universe partitioned into terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzyVariable {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<(String, MembershipFunction)>,
}

impl FuzzyVariable {
    /// Validates universe coverage: at every sampled point of the universe
    /// the term degrees must sum to at least `min_coverage` (callers use a
    /// tiny positive default, so adjacent terms must genuinely overlap).
    pub fn new(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        terms: Vec<(String, MembershipFunction)>,
        min_coverage: f64,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(FuzzyError::BadUniverse(name, lo, hi));
        }
        if terms.is_empty() {
            return Err(FuzzyError::NoTerms(name));
        }
        for (i, (t, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(u, _)| u == t) {
                return Err(FuzzyError::DuplicateTerm(name, t.clone()));
            }
        }
        let var = Self { name, lo, hi, terms };
        for i in 0..VALIDATION_GRID {
            let x = var.lo + (var.hi - var.lo) * i as f64 / (VALIDATION_GRID - 1) as f64;
            let total: f64 = var.terms.iter().map(|(_, mf)| mf.degree(x)).sum();
            if total < min_coverage {
                return Err(FuzzyError::CoverageGap(var.name, min_coverage, x));
            }
        }
        Ok(var)
    }

    /// Uniform triangular partition with 50% overlap between neighbours.
    /// Term names are given from the high end of the universe downwards;
    /// adjacent degrees sum to one everywhere.
    pub fn uniform_partition(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        names_high_to_low: &[&str],
    ) -> Result<Self, FuzzyError> {
        let n = names_high_to_low.len();
        assert!(n >= 2, "a partition needs at least two terms");
        let step = (hi - lo) / (n - 1) as f64;
        let mut terms = Vec::with_capacity(n);
        for (k, nm) in names_high_to_low.iter().enumerate() {
            let c = hi - k as f64 * step;
            let mf = MembershipFunction::triangular((c - step).max(lo), c, (c + step).min(hi))?;
            terms.push((nm.to_string(), mf));
        }
        Self::new(name, lo, hi, terms, 1e-9)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn terms(&self) -> &[(String, MembershipFunction)] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&MembershipFunction> {
        self.terms.iter().find(|(t, _)| t == name).map(|(_, m)| m)
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|(t, _)| t == name)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Degrees for all terms at `x`, clamped into the universe first, in
    /// term order.
    pub fn fuzzify_degrees(&self, x: f64) -> Result<Vec<f64>, FuzzyError> {
        if !x.is_finite() {
            return Err(FuzzyError::NonFiniteInput(x, self.name.clone()));
        }
        let x = self.clamp(x);
        Ok(self.terms.iter().map(|(_, mf)| mf.degree(x)).collect())
    }

    /// Same as [`fuzzify_degrees`](Self::fuzzify_degrees) but keyed by term name.
    pub fn fuzzify(&self, x: f64) -> Result<BTreeMap<String, f64>, FuzzyError> {
        let degrees = self.fuzzify_degrees(x)?;
        Ok(self
            .terms
            .iter()
            .zip(degrees)
            .map(|((t, _), d)| (t.clone(), d))
            .collect())
    }
}
