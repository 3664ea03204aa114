use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::CounterSelector;
use crate::error::{Error, Result};
use crate::ext::ExtNat;
use crate::model::Cmdp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdDoc {
    pub threshold: u64,
    pub action: String,
}

/// On-disk form of a counter selector. States without an initial load or
/// without rules are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub initial: IndexMap<String, ExtNat>,
    pub selector: IndexMap<String, Vec<ThresholdDoc>>,
}

impl StrategyDoc {
    pub fn from_selector(model: &Cmdp, selector: &CounterSelector) -> StrategyDoc {
        let mut doc = StrategyDoc::default();
        for s in model.states() {
            if let Some(v) = selector.initial(s) {
                doc.initial.insert(model.state_name(s).to_owned(), v);
            }
            let rule = selector.rule(s);
            if !rule.is_empty() {
                let entries = rule
                    .iter()
                    .map(|(threshold, a)| ThresholdDoc { threshold, action: model.action_label(a).to_owned() })
                    .collect();
                doc.selector.insert(model.state_name(s).to_owned(), entries);
            }
        }
        doc
    }

    pub fn to_selector(&self, model: &Cmdp) -> Result<CounterSelector> {
        let mut sel = CounterSelector::empty(model.num_states());
        for (name, &v) in &self.initial {
            let s = model.require_state(name)?;
            sel.set_initial(s, Some(v));
        }
        for (name, entries) in &self.selector {
            let s = model.require_state(name)?;
            let mut previous = None;
            for e in entries {
                if e.threshold > model.capacity() {
                    return Err(Error::InvalidStrategy(format!(
                        "threshold {} at state `{name}` exceeds the capacity {}",
                        e.threshold,
                        model.capacity()
                    )));
                }
                if previous.is_some_and(|p| e.threshold <= p) {
                    return Err(Error::InvalidStrategy(format!(
                        "thresholds at state `{name}` are not strictly increasing"
                    )));
                }
                previous = Some(e.threshold);
                let a = model.action_id(&e.action).ok_or_else(|| Error::UnknownAction(e.action.clone()))?;
                model.require_choice(s, a)?;
                sel.insert(s, e.threshold, a);
            }
        }
        Ok(sel)
    }
}

pub fn export_strategy(model: &Cmdp, selector: &CounterSelector) -> String {
    serde_json::to_string_pretty(&StrategyDoc::from_selector(model, selector)).expect("strategy serializes")
}

pub fn import_strategy(model: &Cmdp, text: &str) -> Result<CounterSelector> {
    let doc: StrategyDoc = serde_json::from_str(text)?;
    doc.to_selector(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_model;
    use crate::solvers::{buchi, SemanticsMode};

    #[test]
    fn round_trip() {
        let m = example_model();
        let t = m.require_states(&["s2"]).unwrap();
        let sel = buchi(&m, &t, SemanticsMode::Truncated).unwrap().selector;
        let text = export_strategy(&m, &sel);
        let back = import_strategy(&m, &text).unwrap();
        assert_eq!(back, sel);
        assert_eq!(export_strategy(&m, &back), text);
    }

    #[test]
    fn empty_selector_document() {
        let m = example_model();
        let sel = CounterSelector::empty(m.num_states());
        let v: serde_json::Value = serde_json::from_str(&export_strategy(&m, &sel)).unwrap();
        assert_eq!(v, serde_json::json!({"initial": {}, "selector": {}}));
    }

    #[test]
    fn threshold_above_capacity_is_rejected() {
        let m = example_model();
        let text = r#"{"initial": {}, "selector": {"s1": [{"threshold": 21, "action": "a1"}]}}"#;
        assert!(matches!(import_strategy(&m, text), Err(Error::InvalidStrategy(_))));
    }

    #[test]
    fn infinite_initial_load() {
        let m = example_model();
        let text = r#"{"initial": {"s2": "inf", "s1": 2}, "selector": {}}"#;
        let sel = import_strategy(&m, text).unwrap();
        assert_eq!(sel.initial(m.require_state("s2").unwrap()), Some(ExtNat::Inf));
    }

    #[test]
    fn malformed_input_reports_location() {
        let m = example_model();
        let err = import_strategy(&m, "{\n  \"initial\": {,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
