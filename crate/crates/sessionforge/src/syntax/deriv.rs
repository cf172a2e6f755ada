//! `.deriv.json` — the on-disk derivation format, versioned `deriv-v1`.
//!
//! Nodes are `{rule, conclusion, premises}` with the conclusion in the
//! judgment surface syntax of the document's system. Printing is canonical:
//! `print(parse(file)) == file` for files produced by this printer.

use serde::{Deserialize, Serialize};

use crate::ast::{Judgment, System};
use crate::checker::{Arity, Derivation, RuleName};

use super::parse::parse_judgment;
use super::print::print_judgment;
use super::SyntaxError;
use super::lex::{SourcePos, SourceSpan};

pub const DERIV_FORMAT: &str = "deriv-v1";

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationDoc {
    pub system: System,
    pub derivation: Derivation,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    rule: String,
    conclusion: String,
    #[serde(default)]
    premises: Vec<NodeJson>,
}

#[derive(Serialize, Deserialize)]
struct DocJson {
    format: String,
    system: String,
    rule: String,
    conclusion: String,
    #[serde(default)]
    premises: Vec<NodeJson>,
}

fn doc_err(message: impl Into<String>) -> SyntaxError {
    SyntaxError::new(
        SourceSpan::point("", SourcePos { line: 1, col: 1 }),
        message,
    )
}

fn node_from_json(node: &NodeJson, system: System) -> Result<Derivation, SyntaxError> {
    let rule = RuleName::parse(&node.rule)
        .ok_or_else(|| doc_err(format!("unknown rule name {:?}", node.rule)))?;
    if !rule.in_system(system)
        && !matches!(rule, RuleName::Mix | RuleName::Empty)
        && !matches!(
            rule,
            RuleName::CycleRL
                | RuleName::CycleLR
                | RuleName::CycleRR
                | RuleName::CycleLL
                | RuleName::CllCycle
        )
    {
        return Err(doc_err(format!(
            "rule {} is not part of system {}",
            rule, system
        )));
    }
    if let Arity::Fixed(n) = rule.arity() {
        if node.premises.len() != n {
            return Err(doc_err(format!(
                "rule {} expects {} premise(s), found {}",
                rule,
                n,
                node.premises.len()
            )));
        }
    }
    let conclusion = parse_judgment(&node.conclusion, system)?;
    let premises = node
        .premises
        .iter()
        .map(|p| node_from_json(p, system))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Derivation {
        rule,
        conclusion,
        premises,
    })
}

fn node_to_json(d: &Derivation) -> NodeJson {
    NodeJson {
        rule: d.rule.as_str().to_string(),
        conclusion: print_judgment(&d.conclusion),
        premises: d.premises.iter().map(node_to_json).collect(),
    }
}

pub fn parse_derivation(text: &str) -> Result<DerivationDoc, SyntaxError> {
    let doc: DocJson =
        serde_json::from_str(text).map_err(|e| doc_err(format!("invalid JSON: {e}")))?;
    if doc.format != DERIV_FORMAT {
        return Err(doc_err(format!(
            "unsupported format {:?} (expected {DERIV_FORMAT:?})",
            doc.format
        )));
    }
    let system = System::from_tag(&doc.system)
        .ok_or_else(|| doc_err(format!("unknown system {:?}", doc.system)))?;
    let root = NodeJson {
        rule: doc.rule,
        conclusion: doc.conclusion,
        premises: doc.premises,
    };
    let derivation = node_from_json(&root, system)?;
    Ok(DerivationDoc { system, derivation })
}

pub fn print_derivation(doc: &DerivationDoc) -> String {
    let root = node_to_json(&doc.derivation);
    let json = DocJson {
        format: DERIV_FORMAT.to_string(),
        system: doc.system.tag().to_string(),
        rule: root.rule,
        conclusion: root.conclusion,
        premises: root.premises,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("derivation serialization");
    s.push('\n');
    s
}

impl DerivationDoc {
    pub fn new(system: System, derivation: Derivation) -> Self {
        DerivationDoc { system, derivation }
    }

    pub fn root(&self) -> &Judgment {
        &self.derivation.conclusion
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_doc_roundtrip() {
        let text = r#"{
  "format": "deriv-v1",
  "system": "ull",
  "rule": "1R",
  "conclusion": ". ; . |- close x :: x:1",
  "premises": []
}
"#;
        let doc = parse_derivation(text).unwrap();
        assert_eq!(doc.system, System::Ull);
        assert_eq!(doc.derivation.rule, RuleName::OneR);
        let printed = print_derivation(&doc);
        assert_eq!(parse_derivation(&printed).unwrap(), doc);
        assert_eq!(print_derivation(&parse_derivation(&printed).unwrap()), printed);
    }

    #[test]
    fn arity_mismatch_rejected() {
        // cut rules are binary
        let text = r#"{
  "format": "deriv-v1",
  "system": "ull",
  "rule": "cutRL",
  "conclusion": ". ; . |- new x (close x | wait x . close z) :: z:1",
  "premises": [
    {"rule": "1R", "conclusion": ". ; . |- close x :: x:1", "premises": []}
  ]
}"#;
        let e = parse_derivation(text).unwrap_err();
        assert!(e.message.contains("expects 2 premise"));
    }

    #[test]
    fn unknown_rule_rejected() {
        let text = r#"{
  "format": "deriv-v1",
  "system": "ill",
  "rule": "botR",
  "conclusion": ". ; . |-i close x :: x:1",
  "premises": []
}"#;
        let e = parse_derivation(text).unwrap_err();
        assert!(e.message.contains("not part of system"));
    }
}
