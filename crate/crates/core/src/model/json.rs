//! The CMDP JSON document.
//!
//! ```json
//! {"capacity": 20, "states": ["s1", "s2"], "reload": ["s2"], "targets": ["s2"],
//!  "actions": [{"source": "s1", "label": "a", "consumption": 1,
//!               "successors": [{"state": "s2", "prob": 1.0}]}]}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Cmdp, CmdpBuilder, StateId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmdpDoc {
    pub capacity: u64,
    pub states: Vec<String>,
    pub reload: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
    pub actions: Vec<ActionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub source: String,
    pub label: String,
    pub consumption: u64,
    pub successors: Vec<SuccessorDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuccessorDoc {
    pub state: String,
    pub prob: f64,
}

/// A model together with the target set optionally shipped in its file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: Cmdp,
    pub targets: Option<Vec<StateId>>,
}

impl Instance {
    pub fn new(model: Cmdp, targets: Option<Vec<StateId>>) -> Self {
        Instance { model, targets }
    }

    pub fn from_doc(doc: &CmdpDoc) -> Result<Instance> {
        let mut b = CmdpBuilder::new(doc.capacity);
        for name in &doc.states {
            b.add_state(name.as_str())?;
        }
        let lookup = |b: &CmdpBuilder, name: &str| b.state_id(name).ok_or_else(|| Error::UnknownState(name.to_owned()));
        for name in &doc.reload {
            let s = lookup(&b, name)?;
            b.set_reload(s, true);
        }
        for (i, a) in doc.actions.iter().enumerate() {
            let ctx = format!("actions[{i}]");
            let source = lookup(&b, &a.source)?;
            let succ = a.successors.iter().map(|t| Ok((lookup(&b, &t.state)?, t.prob))).collect::<Result<Vec<_>>>()?;
            b.add_action(source, &a.label, a.consumption, succ)
                .map_err(|e| Error::InvalidModel(format!("{ctx}: {e}")))?;
        }
        let targets = match &doc.targets {
            None => None,
            Some(names) => {
                let mut ids = names.iter().map(|n| lookup(&b, n)).collect::<Result<Vec<_>>>()?;
                ids.sort_unstable();
                ids.dedup();
                Some(ids)
            }
        };
        Ok(Instance { model: b.build(), targets })
    }

    pub fn from_json_str(text: &str) -> Result<Instance> {
        let doc: CmdpDoc = serde_json::from_str(text)?;
        Instance::from_doc(&doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
        Instance::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn to_doc(&self) -> CmdpDoc {
        let m = &self.model;
        let mut actions = Vec::with_capacity(m.num_choices());
        for s in m.states() {
            for c in m.choices(s) {
                actions.push(ActionDoc {
                    source: m.state_name(s).to_owned(),
                    label: m.action_label(c.action).to_owned(),
                    consumption: c.consumption,
                    successors: m
                        .successors(c)
                        .iter()
                        .map(|t| SuccessorDoc { state: m.state_name(t.target).to_owned(), prob: t.prob })
                        .collect(),
                });
            }
        }
        CmdpDoc {
            capacity: m.capacity(),
            states: m.state_names().to_vec(),
            reload: m.reload_states().into_iter().map(|s| m.state_name(s).to_owned()).collect(),
            targets: self.targets.as_ref().map(|ts| ts.iter().map(|&s| m.state_name(s).to_owned()).collect()),
            actions,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model documents always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }
}

impl From<Cmdp> for Instance {
    fn from(model: Cmdp) -> Self {
        Instance { model, targets: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_model, validate};

    const EXAMPLE: &str = r#"{
      "capacity": 20,
      "states": ["s1", "s2", "s3", "s4", "s5"],
      "reload": ["s2", "s5"],
      "targets": ["s2"],
      "actions": [
        {"source": "s1", "label": "a1", "consumption": 5,
         "successors": [{"state": "s2", "prob": 0.5}, {"state": "s3", "prob": 0.5}]},
        {"source": "s1", "label": "a2", "consumption": 2, "successors": [{"state": "s5", "prob": 1}]},
        {"source": "s2", "label": "a1", "consumption": 1, "successors": [{"state": "s2", "prob": 1}]},
        {"source": "s2", "label": "a2", "consumption": 1, "successors": [{"state": "s2", "prob": 1}]},
        {"source": "s3", "label": "a1", "consumption": 1, "successors": [{"state": "s4", "prob": 1}]},
        {"source": "s3", "label": "a2", "consumption": 1, "successors": [{"state": "s4", "prob": 1}]},
        {"source": "s4", "label": "a1", "consumption": 2, "successors": [{"state": "s1", "prob": 1}]},
        {"source": "s4", "label": "a2", "consumption": 2, "successors": [{"state": "s1", "prob": 1}]},
        {"source": "s5", "label": "a1", "consumption": 1, "successors": [{"state": "s1", "prob": 1}]},
        {"source": "s5", "label": "a2", "consumption": 1, "successors": [{"state": "s1", "prob": 1}]}
      ]
    }"#;

    #[test]
    fn parses_the_example_document() {
        let inst = Instance::from_json_str(EXAMPLE).unwrap();
        assert!(validate(&inst.model).is_valid());
        assert_eq!(inst.targets, Some(vec![inst.model.require_state("s2").unwrap()]));
        let mut expected = Instance::from(example_model());
        expected.targets = inst.targets.clone();
        assert_eq!(inst.to_doc(), expected.to_doc());
    }

    #[test]
    fn document_round_trip() {
        let inst = Instance::from_json_str(EXAMPLE).unwrap();
        let again = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(inst.to_doc(), again.to_doc());
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = Instance::from_json_str("{\n  \"capacity\": 3,\n  \"states\": [,]\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn unknown_keys_and_names_rejected() {
        assert!(Instance::from_json_str(r#"{"capacity":1,"states":[],"reload":[],"actions":[],"extra":1}"#).is_err());
        let err = Instance::from_json_str(r#"{"capacity":1,"states":["a"],"reload":["b"],"actions":[]}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownState(_)));
    }

    #[test]
    fn negative_consumption_rejected() {
        let doc = r#"{"capacity":1,"states":["a"],"reload":[],"actions":[
            {"source":"a","label":"x","consumption":-1,"successors":[{"state":"a","prob":1}]}]}"#;
        assert!(matches!(Instance::from_json_str(doc), Err(Error::Json(_))));
    }
}
