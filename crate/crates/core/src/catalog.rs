//! System definitions: presets by name or JSON files.
//!
//! ```json
//! {
//!   "name": "tribonacci",
//!   "coefficients": [1, 1, 1],
//!   "initial_terms": [1, 2, 4],
//!   "bertrand_directive": { "preperiod": [], "period": [1, 1, 0] }
//! }
//! ```

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;
use crate::numlang::{build_bertrand_automaton, verify_numeration_automaton, BertrandDirective, Preset};

/// Length up to which an automaton from a definition file is checked
/// against the greedy predicate before use.
pub const DEFINITION_CHECK_LENGTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// `a_0` first.
    pub coefficients: Vec<i64>,
    pub initial_terms: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bertrand_directive: Option<BertrandDirective>,
}

impl SystemDefinition {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn system(&self) -> Result<NumerationSystem> {
        let system = NumerationSystem::new(
            self.coefficients.iter().map(|&a| BigInt::from(a)).collect(),
            self.initial_terms.iter().map(|&u| BigInt::from(u)).collect(),
            self.alphabet_bound,
        )?;
        Ok(match &self.name {
            Some(name) => system.with_name(name.clone()),
            None => system,
        })
    }
}

/// A numeration system together with its verified automaton `A_U`.
#[derive(Clone, Debug)]
pub struct ResolvedSystem {
    pub label: String,
    pub system: NumerationSystem,
    pub automaton: Dfa,
}

/// Resolves a preset name (`fibonacci`, `lbonacci:<l>`, `sqrt2plus1`) or a
/// path to a JSON definition.
pub fn resolve(reference: &str) -> Result<ResolvedSystem> {
    if let Ok(preset) = reference.parse::<Preset>() {
        return Ok(ResolvedSystem { label: preset.to_string(), system: preset.system(), automaton: preset.automaton() });
    }
    let path = Path::new(reference);
    if !path.exists() {
        return Err(Error::UnknownPreset(reference.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    let definition = SystemDefinition::from_json(&text)?;
    resolve_definition(&definition, reference)
}

pub fn resolve_definition(definition: &SystemDefinition, fallback_label: &str) -> Result<ResolvedSystem> {
    let label = definition.name.clone().unwrap_or_else(|| fallback_label.to_string());
    let system = definition.system()?.with_name(label.clone());
    let automaton = match (&definition.bertrand_directive, definition.name.as_deref().map(str::parse::<Preset>)) {
        (Some(directive), _) => build_bertrand_automaton(directive)?,
        (None, Some(Ok(preset))) => preset.automaton(),
        _ => {
            return Err(Error::Definition(format!(
                "`{label}`: no automaton for the numeration language; add a bertrand_directive"
            )))
        }
    };
    if automaton.alphabet_size() != system.alphabet_size() {
        return Err(Error::Definition(format!(
            "`{label}`: automaton alphabet {} differs from C_U = {}",
            automaton.alphabet_size(),
            system.alphabet_size()
        )));
    }
    if let Some(w) = verify_numeration_automaton(&automaton, &system, DEFINITION_CHECK_LENGTH)? {
        return Err(Error::Definition(format!("`{label}`: automaton disagrees with greedy representations on `{w}`")));
    }
    Ok(ResolvedSystem { label, system, automaton })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve() {
        let r = resolve("lbonacci:3").unwrap();
        assert_eq!(r.label, "lbonacci:3");
        assert_eq!(r.automaton.state_count(), 3);
        assert!(matches!(resolve("no-such-thing"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn tribonacci_definition() {
        let def = SystemDefinition::from_json(
            r#"{"name": "trib", "coefficients": [1,1,1], "initial_terms": [1,2,4],
                "bertrand_directive": {"preperiod": [], "period": [1,1,0]}}"#,
        )
        .unwrap();
        let r = resolve_definition(&def, "x").unwrap();
        assert_eq!(r.label, "trib");
        assert_eq!(r.automaton.state_count(), 3);
    }

    #[test]
    fn definition_errors() {
        let no_automaton = SystemDefinition::from_json(r#"{"coefficients": [1,1], "initial_terms": [1,2]}"#).unwrap();
        assert!(matches!(resolve_definition(&no_automaton, "f"), Err(Error::Definition(_))));

        let wrong = SystemDefinition::from_json(
            r#"{"coefficients": [1,1], "initial_terms": [1,2], "bertrand_directive": {"period": [1,1,0]}}"#,
        )
        .unwrap();
        assert!(matches!(resolve_definition(&wrong, "f"), Err(Error::Definition(_))));

        assert!(SystemDefinition::from_json(r#"{"coefficients": [1], "initial_terms": [1], "bogus": 1}"#).is_err());

        let named = SystemDefinition::from_json(r#"{"name": "fibonacci", "coefficients": [1,1], "initial_terms": [1,2]}"#)
            .unwrap();
        assert_eq!(resolve_definition(&named, "f").unwrap().automaton.state_count(), 2);
    }
}
