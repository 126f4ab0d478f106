//! Fuzzy-inference machinery: linguistic variables over piecewise-linear
//! membership functions, rule bases, and centroid defuzzification.
//!
//! Rule activation uses the minimum of the antecedent degrees. Each fired
//! rule contributes its consequent membership function scaled by the
//! activation, and contributions add up; the aggregate is defuzzified with a
//! trapezoid-weighted grid centroid. This additive variant keeps the crisp
//! output monotone wherever the rule table is monotone, which the max-of-
//! clipped-sets variant does not.

mod inference;
mod membership;
mod rules;
mod variable;

pub use inference::{defuzzify_centroid, AggregatedSet, DEFAULT_RESOLUTION};
pub use membership::MembershipFunction;
pub use rules::{FuzzyRule, RuleBase};
pub use variable::FuzzyVariable;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("membership function needs at least two breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    #[error("breakpoint x-coordinates must be strictly increasing at index {0}")]
    UnorderedBreakpoints(usize),
    #[error("membership degree {0} outside [0, 1]")]
    DegreeOutOfRange(f64),
    #[error("membership function has no breakpoint with degree 1 (not normal)")]
    NotNormal,
    #[error("variable '{0}': universe [{1}, {2}] is empty or not finite")]
    BadUniverse(String, f64, f64),
    #[error("variable '{0}' has no terms")]
    NoTerms(String),
    #[error("variable '{0}': duplicate term '{1}'")]
    DuplicateTerm(String, String),
    #[error("variable '{0}': coverage below {1} at x = {2}")]
    CoverageGap(String, f64, f64),
    #[error("non-finite input {0} for variable '{1}'")]
    NonFiniteInput(f64, String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unknown term '{1}' for variable '{0}'")]
    UnknownTerm(String, String),
    #[error("rule {0}: expected one antecedent per input variable")]
    IncompleteAntecedents(usize),
    #[error("duplicate rule for antecedent combination {0:?}")]
    DuplicateRule(Vec<String>),
    #[error("rule base does not cover input-term combination {0:?}")]
    MissingCombination(Vec<String>),
    #[error("output variable '{0}' also appears among the inputs")]
    OutputIsInput(String),
    #[error("missing crisp input for variable '{0}'")]
    MissingInput(String),
    #[error("unexpected input '{0}' not among the rule base variables")]
    UnexpectedInput(String),
    #[error("aggregated set is identically zero; centroid undefined")]
    EmptyAggregate,
    #[error("defuzzification resolution must be at least 2, got {0}")]
    BadResolution(usize),
}
