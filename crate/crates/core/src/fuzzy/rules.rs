use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::inference::AggregatedSet;
use super::{FuzzyError, FuzzyVariable, DEFAULT_RESOLUTION};

/// AND-combined antecedents with a single consequent, all referenced by
/// `(variable, term)` name pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzyRule {
    pub antecedents: Vec<(String, String)>,
    pub consequent: (String, String),
}

#[derive(Debug, Clone, Copy)]
struct CompiledRule {
    /// One term index per input variable, in input order.
    terms: [usize; 2],
    out_term: usize,
}

/// A complete rule base over its input variables: every combination of
/// input terms must be covered by exactly one rule.
///
/// Only two-input bases are supported; that is all the driver models need.
#[derive(Debug, Clone)]
pub struct RuleBase {
    inputs: Vec<FuzzyVariable>,
    output: FuzzyVariable,
    rules: Vec<FuzzyRule>,
    compiled: Vec<CompiledRule>,
}

impl RuleBase {
    pub fn new(
        inputs: Vec<FuzzyVariable>,
        output: FuzzyVariable,
        rules: Vec<FuzzyRule>,
    ) -> Result<Self, FuzzyError> {
        assert_eq!(inputs.len(), 2, "rule bases are two-input");
        if inputs.iter().any(|v| v.name() == output.name()) {
            return Err(FuzzyError::OutputIsInput(output.name().to_string()));
        }

        let mut compiled = Vec::with_capacity(rules.len());
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for (ri, rule) in rules.iter().enumerate() {
            if rule.antecedents.len() != inputs.len() {
                return Err(FuzzyError::IncompleteAntecedents(ri));
            }
            let mut terms = [usize::MAX; 2];
            for (var, term) in &rule.antecedents {
                let vi = inputs
                    .iter()
                    .position(|v| v.name() == var)
                    .ok_or_else(|| FuzzyError::UnknownVariable(var.clone()))?;
                let ti = inputs[vi]
                    .term_index(term)
                    .ok_or_else(|| FuzzyError::UnknownTerm(var.clone(), term.clone()))?;
                if terms[vi] != usize::MAX {
                    return Err(FuzzyError::IncompleteAntecedents(ri));
                }
                terms[vi] = ti;
            }
            let (ovar, oterm) = &rule.consequent;
            if ovar != output.name() {
                return Err(FuzzyError::UnknownVariable(ovar.clone()));
            }
            let out_term = output
                .term_index(oterm)
                .ok_or_else(|| FuzzyError::UnknownTerm(ovar.clone(), oterm.clone()))?;
            if seen.insert((terms[0], terms[1]), ()).is_some() {
                return Err(FuzzyError::DuplicateRule(
                    rule.antecedents.iter().map(|(_, t)| t.clone()).collect(),
                ));
            }
            compiled.push(CompiledRule { terms, out_term });
        }

        // Completeness over the full input-term product.
        for i in 0..inputs[0].terms().len() {
            for j in 0..inputs[1].terms().len() {
                if !seen.contains_key(&(i, j)) {
                    return Err(FuzzyError::MissingCombination(vec![
                        inputs[0].terms()[i].0.clone(),
                        inputs[1].terms()[j].0.clone(),
                    ]));
                }
            }
        }

        Ok(Self { inputs, output, rules, compiled })
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    /// Fires every rule against crisp inputs keyed by variable name and
    /// returns the additive aggregate of activation-scaled consequents.
    pub fn infer(&self, inputs: &BTreeMap<String, f64>) -> Result<AggregatedSet<'_>, FuzzyError> {
        for name in inputs.keys() {
            if !self.inputs.iter().any(|v| v.name() == name) {
                return Err(FuzzyError::UnexpectedInput(name.clone()));
            }
        }
        let mut crisp = [0.0f64; 2];
        for (vi, var) in self.inputs.iter().enumerate() {
            crisp[vi] = *inputs
                .get(var.name())
                .ok_or_else(|| FuzzyError::MissingInput(var.name().to_string()))?;
        }
        self.infer_pair(crisp[0], crisp[1])
    }

    /// Positional variant of [`infer`](Self::infer): crisp values in input
    /// order.
    pub fn infer_pair(&self, x0: f64, x1: f64) -> Result<AggregatedSet<'_>, FuzzyError> {
        let d0 = self.inputs[0].fuzzify_degrees(x0)?;
        let d1 = self.inputs[1].fuzzify_degrees(x1)?;
        let mut components = Vec::new();
        for rule in &self.compiled {
            let activation = d0[rule.terms[0]].min(d1[rule.terms[1]]);
            if activation > 0.0 {
                components.push((activation, &self.output.terms()[rule.out_term].1));
            }
        }
        Ok(AggregatedSet::new(self.output.universe(), components))
    }

    /// Inference composed with centroid defuzzification. An all-zero
    /// aggregate falls back to the output-universe midpoint (the neutral
    /// response by construction of the shipped configurations).
    pub fn infer_crisp(&self, inputs: &BTreeMap<String, f64>) -> Result<f64, FuzzyError> {
        let agg = self.infer(inputs)?;
        Ok(self.defuzz_or_neutral(&agg))
    }

    pub fn infer_crisp_pair(&self, x0: f64, x1: f64) -> Result<f64, FuzzyError> {
        let agg = self.infer_pair(x0, x1)?;
        Ok(self.defuzz_or_neutral(&agg))
    }

    fn defuzz_or_neutral(&self, agg: &AggregatedSet<'_>) -> f64 {
        agg.centroid(DEFAULT_RESOLUTION).unwrap_or_else(|_| {
            let (lo, hi) = self.output.universe();
            0.5 * (lo + hi)
        })
    }
}
