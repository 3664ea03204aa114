use std::fmt;

use super::{Cmdp, StateId};
use crate::graph::strongly_connected_components;

/// Tolerance on the sum of each successor distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Probabilities of an action do not sum to one.
    DistributionSum,
    /// A listed successor has probability `<= 0` (or is not a number).
    NonPositiveProbability,
    /// An action without successors.
    EmptySupport,
    /// A state without available actions.
    NoActions,
    /// A cycle of zero-consumption steps exists.
    NotDecreasing,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::DistributionSum => "distribution sum",
            Rule::NonPositiveProbability => "non-positive probability",
            Rule::EmptySupport => "empty support",
            Rule::NoActions => "no actions",
            Rule::NotDecreasing => "not decreasing",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub state: String,
    pub action: Option<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: state `{}`", self.rule, self.state)?;
        if let Some(a) = &self.action {
            write!(f, ", action `{a}`")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate(model: &Cmdp) -> ValidationReport {
    let mut violations = Vec::new();

    for s in model.states() {
        let choices = model.choices(s);
        if choices.is_empty() {
            violations.push(Violation {
                rule: Rule::NoActions,
                state: model.state_name(s).to_owned(),
                action: None,
                detail: String::new(),
            });
        }
        for c in choices {
            let label = || Some(model.action_label(c.action).to_owned());
            let succ = model.successors(c);
            if succ.is_empty() {
                violations.push(Violation {
                    rule: Rule::EmptySupport,
                    state: model.state_name(s).to_owned(),
                    action: label(),
                    detail: String::new(),
                });
                continue;
            }
            for t in succ {
                if t.prob.is_nan() || t.prob <= 0.0 {
                    violations.push(Violation {
                        rule: Rule::NonPositiveProbability,
                        state: model.state_name(s).to_owned(),
                        action: label(),
                        detail: format!("successor `{}` has probability {}", model.state_name(t.target), t.prob),
                    });
                }
            }
            let sum: f64 = succ.iter().map(|t| t.prob).sum();
            if sum.is_nan() || (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                violations.push(Violation {
                    rule: Rule::DistributionSum,
                    state: model.state_name(s).to_owned(),
                    action: label(),
                    detail: format!("probabilities sum to {sum}"),
                });
            }
        }
    }

    for cycle in zero_consumption_cycles(model) {
        let names: Vec<&str> = cycle.iter().map(|&s| model.state_name(s)).collect();
        violations.push(Violation {
            rule: Rule::NotDecreasing,
            state: names[0].to_owned(),
            action: None,
            detail: format!("zero-consumption cycle through {{{}}}", names.join(", ")),
        });
    }

    ValidationReport { violations }
}

/// SCCs of the zero-consumption edge graph that contain a cycle.
fn zero_consumption_cycles(model: &Cmdp) -> Vec<Vec<StateId>> {
    let zero_succ = |v: usize| {
        model
            .choices(StateId(v))
            .iter()
            .filter(|c| c.consumption == 0)
            .flat_map(|c| model.succ_states(c))
            .map(|t| t.0)
            .collect::<Vec<_>>()
    };
    let mut cycles: Vec<Vec<StateId>> = strongly_connected_components(model.num_states(), zero_succ)
        .into_iter()
        .filter(|comp| comp.len() > 1 || zero_succ(comp[0]).contains(&comp[0]))
        .map(|comp| comp.into_iter().map(StateId).collect())
        .collect();
    cycles.sort();
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_model, CmdpBuilder};

    #[test]
    fn example_is_valid() {
        let report = validate(&example_model());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn zero_self_loop_is_not_decreasing() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        b.add_action(s, "idle", 0, [(s, 1.0)]).unwrap();
        let report = validate(&b.build());
        assert!(report.has(Rule::NotDecreasing));
        assert!(report.to_string().contains("not decreasing"));
    }

    #[test]
    fn zero_cycle_over_two_states() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        let t = b.add_state("t").unwrap();
        b.add_action(s, "go", 0, [(t, 1.0)]).unwrap();
        b.add_action(t, "back", 0, [(s, 0.5), (t, 0.5)]).unwrap();
        assert!(validate(&b.build()).has(Rule::NotDecreasing));
    }

    #[test]
    fn zero_edges_without_cycle_are_fine() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        let t = b.add_state("t").unwrap();
        b.add_action(s, "go", 0, [(t, 1.0)]).unwrap();
        b.add_action(t, "back", 1, [(s, 1.0)]).unwrap();
        assert!(validate(&b.build()).is_valid());
    }

    #[test]
    fn short_distribution_is_reported() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        let t = b.add_state("t").unwrap();
        b.add_action(s, "a", 1, [(s, 0.4), (t, 0.5)]).unwrap();
        b.add_action(t, "a", 1, [(s, 1.0)]).unwrap();
        let report = validate(&b.build());
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.rule, Rule::DistributionSum);
        assert_eq!(v.state, "s");
        assert_eq!(v.action.as_deref(), Some("a"));
        assert!(v.to_string().starts_with("distribution sum"));
    }

    #[test]
    fn missing_actions_and_bad_probabilities() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        let _dead = b.add_state("dead").unwrap();
        b.add_action(s, "a", 1, [(s, 1.5), (StateId(1), -0.5)]).unwrap();
        let report = validate(&b.build());
        assert!(report.has(Rule::NoActions));
        assert!(report.has(Rule::NonPositiveProbability));
    }

    #[test]
    fn sum_tolerance_is_tight() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        b.add_action(s, "ok", 1, [(s, 1.0 - 1e-12)]).unwrap();
        b.add_action(s, "bad", 1, [(s, 1.0 - 1e-8)]).unwrap();
        let report = validate(&b.build());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].action.as_deref(), Some("bad"));
    }
}
