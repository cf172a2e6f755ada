//! Rule tables and derivation validation for the four systems, plus
//! goal-directed inference with backtracking.

mod infer;
mod rules;

pub use infer::{infer, infer_all, solve_goals, InferError, InferenceBudget};
pub use rules::check_node;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::ast::{Judgment, System, TypeExpr};

/// Every inference rule of Figs 2–5 plus the move rules, the mix/empty
/// extension and the cycle stubs. String names are the wire format used in
/// `.deriv.json` files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleName {
    // two-sided (ULL / ULLM)
    IdR,
    IdL,
    OneR,
    OneL,
    BotR,
    BotL,
    TensorR,
    TensorL,
    ParR,
    ParL,
    LolliR,
    LolliL,
    PlusR,
    PlusL,
    WithR,
    WithL,
    CopyR,
    CopyL,
    BangR,
    BangL,
    QueryR,
    QueryL,
    CutRL,
    CutLR,
    CutRR,
    CutLL,
    CutBangR,
    CutBangL,
    CutQueryR,
    CutQueryL,
    // moves (ULLM only)
    MoveL,
    MoveR,
    // intuitionistic names
    Id,
    Copy,
    // one-sided (CLL)
    CllOne,
    CllBot,
    CllTensor,
    CllPar,
    CllPlus,
    CllWith,
    CllBang,
    CllQuery,
    CllCut,
    // mix extension
    Mix,
    Empty,
    // cycle stubs
    CycleRL,
    CycleLR,
    CycleRR,
    CycleLL,
    CllCycle,
}

/// Premise count discipline of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Fixed(usize),
    /// one premise per branch label
    Branching,
}

impl RuleName {
    pub fn as_str(&self) -> &'static str {
        use RuleName::*;
        match self {
            IdR => "idR",
            IdL => "idL",
            OneR => "1R",
            OneL => "1L",
            BotR => "botR",
            BotL => "botL",
            TensorR => "tensorR",
            TensorL => "tensorL",
            ParR => "parR",
            ParL => "parL",
            LolliR => "lolliR",
            LolliL => "lolliL",
            PlusR => "plusR",
            PlusL => "plusL",
            WithR => "withR",
            WithL => "withL",
            CopyR => "copyR",
            CopyL => "copyL",
            BangR => "bangR",
            BangL => "bangL",
            QueryR => "queryR",
            QueryL => "queryL",
            CutRL => "cutRL",
            CutLR => "cutLR",
            CutRR => "cutRR",
            CutLL => "cutLL",
            CutBangR => "cutBangR",
            CutBangL => "cutBangL",
            CutQueryR => "cutQueryR",
            CutQueryL => "cutQueryL",
            MoveL => "moveL",
            MoveR => "moveR",
            Id => "id",
            Copy => "copy",
            CllOne => "1",
            CllBot => "bot",
            CllTensor => "tensor",
            CllPar => "par",
            CllPlus => "plus",
            CllWith => "with",
            CllBang => "bang",
            CllQuery => "query",
            CllCut => "cut",
            Mix => "mix",
            Empty => "empty",
            CycleRL => "cycleRL",
            CycleLR => "cycleLR",
            CycleRR => "cycleRR",
            CycleLL => "cycleLL",
            CllCycle => "cycle",
        }
    }

    pub fn parse(s: &str) -> Option<RuleName> {
        use RuleName::*;
        Some(match s {
            "idR" => IdR,
            "idL" => IdL,
            "1R" => OneR,
            "1L" => OneL,
            "botR" => BotR,
            "botL" => BotL,
            "tensorR" => TensorR,
            "tensorL" => TensorL,
            "parR" => ParR,
            "parL" => ParL,
            "lolliR" => LolliR,
            "lolliL" => LolliL,
            "plusR" => PlusR,
            "plusL" => PlusL,
            "withR" => WithR,
            "withL" => WithL,
            "copyR" => CopyR,
            "copyL" => CopyL,
            "bangR" => BangR,
            "bangL" => BangL,
            "queryR" => QueryR,
            "queryL" => QueryL,
            "cutRL" => CutRL,
            "cutLR" => CutLR,
            "cutRR" => CutRR,
            "cutLL" => CutLL,
            "cutBangR" => CutBangR,
            "cutBangL" => CutBangL,
            "cutQueryR" => CutQueryR,
            "cutQueryL" => CutQueryL,
            "moveL" => MoveL,
            "moveR" => MoveR,
            "id" => Id,
            "copy" => Copy,
            "1" => CllOne,
            "bot" => CllBot,
            "tensor" => CllTensor,
            "par" => CllPar,
            "plus" => CllPlus,
            "with" => CllWith,
            "bang" => CllBang,
            "query" => CllQuery,
            "cut" => CllCut,
            "mix" => Mix,
            "empty" => Empty,
            "cycleRL" => CycleRL,
            "cycleLR" => CycleLR,
            "cycleRR" => CycleRR,
            "cycleLL" => CycleLL,
            "cycle" => CllCycle,
            _ => return None,
        })
    }

    /// The ∗-marked subset of the two-sided table. πULL↷ is exactly these
    /// rules plus the two moves; they also coincide with the πILL rules.
    pub fn is_star(&self) -> bool {
        use RuleName::*;
        matches!(
            self,
            IdR | OneR
                | OneL
                | TensorR
                | TensorL
                | LolliR
                | LolliL
                | PlusR
                | PlusL
                | WithR
                | WithL
                | CopyL
                | BangR
                | BangL
                | CutRL
                | CutLR
                | CutBangR
                | CutBangL
        )
    }

    pub fn arity(&self) -> Arity {
        use RuleName::*;
        match self {
            IdR | IdL | OneR | BotL | Id | CllOne | Empty => Arity::Fixed(0),
            OneL | BotR | TensorL | ParR | LolliR | PlusR | WithL | CopyR | CopyL | BangR
            | BangL | QueryR | QueryL | MoveL | MoveR | Copy | CllBot | CllPar | CllPlus
            | CllBang | CllQuery | CycleRL | CycleLR | CycleRR | CycleLL | CllCycle => {
                Arity::Fixed(1)
            }
            TensorR | ParL | LolliL | CutRL | CutLR | CutRR | CutLL | CutBangR | CutBangL
            | CutQueryR | CutQueryL | CllTensor | CllCut | Mix => Arity::Fixed(2),
            PlusL | WithR | CllWith => Arity::Branching,
        }
    }

    /// Whether the rule belongs to the given system's table (ignoring the
    /// mix/cycle extension flags, which `Config` layers on top).
    pub fn in_system(&self, system: System) -> bool {
        use RuleName::*;
        match system {
            System::Ull => {
                matches!(
                    self,
                    IdR | IdL
                        | OneR
                        | OneL
                        | BotR
                        | BotL
                        | TensorR
                        | TensorL
                        | ParR
                        | ParL
                        | LolliR
                        | LolliL
                        | PlusR
                        | PlusL
                        | WithR
                        | WithL
                        | CopyR
                        | CopyL
                        | BangR
                        | BangL
                        | QueryR
                        | QueryL
                        | CutRL
                        | CutLR
                        | CutRR
                        | CutLL
                        | CutBangR
                        | CutBangL
                        | CutQueryR
                        | CutQueryL
                )
            }
            System::Ullm => self.is_star() || matches!(self, MoveL | MoveR),
            System::Ill => matches!(
                self,
                Id | OneR
                    | OneL
                    | TensorR
                    | TensorL
                    | LolliR
                    | LolliL
                    | PlusR
                    | PlusL
                    | WithR
                    | WithL
                    | Copy
                    | BangR
                    | BangL
                    | CutRL
                    | CutLR
                    | CutBangR
                    | CutBangL
            ),
            System::Cll => matches!(
                self,
                Id | CllOne
                    | CllBot
                    | CllTensor
                    | CllPar
                    | CllPlus
                    | CllWith
                    | Copy
                    | CllBang
                    | CllQuery
                    | CllCut
                    | CutQueryR
                    | CutQueryL
            ),
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rule-labeled tree of judgments; the unit of checking, translation and
/// generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub rule: RuleName,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: RuleName, conclusion: Judgment) -> Derivation {
        Derivation {
            rule,
            conclusion,
            premises: Vec::new(),
        }
    }

    pub fn node(rule: RuleName, conclusion: Judgment, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            conclusion,
            premises,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(|p| p.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }

    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn contains_rule<F: Fn(RuleName) -> bool>(&self, f: &F) -> bool {
        f(self.rule) || self.premises.iter().any(|p| p.contains_rule(f))
    }

    /// All types mentioned anywhere in the tree (judgments and annotations).
    pub fn mentioned_types(&self) -> Vec<TypeExpr> {
        let mut out = Vec::new();
        for (_, d) in self.nodes() {
            match &d.conclusion {
                Judgment::Ull {
                    gamma,
                    delta,
                    lambda,
                    ..
                } => {
                    for (_, t) in gamma.iter().chain(delta.iter()).chain(lambda.iter()) {
                        out.push(t.clone());
                    }
                }
                Judgment::Ill {
                    gamma,
                    delta,
                    right_type,
                    ..
                } => {
                    for (_, t) in gamma.iter().chain(delta.iter()) {
                        out.push(t.clone());
                    }
                    out.push(right_type.clone());
                }
                Judgment::Cll { gamma, delta, .. } => {
                    for (_, t) in gamma.iter().chain(delta.iter()) {
                        out.push(t.clone());
                    }
                }
            }
        }
        out
    }
}

/// Checker configuration: the system plus extension switches.
#[derive(Clone)]
pub struct Config {
    pub system: System,
    /// mix/empty rules (ULL and CLL tables), per the composition extension
    pub mix: bool,
    /// side condition φ for the cycle rules; `None` rejects every cycle
    pub cycle_predicate: Option<fn(&Judgment) -> bool>,
}

impl Config {
    pub fn new(system: System) -> Config {
        Config {
            system,
            mix: false,
            cycle_predicate: None,
        }
    }

    pub fn with_mix(mut self, mix: bool) -> Config {
        self.mix = mix;
        self
    }

    pub fn rule_allowed(&self, rule: RuleName) -> bool {
        if rule.in_system(self.system) {
            return true;
        }
        if self.mix
            && matches!(rule, RuleName::Mix | RuleName::Empty)
            && matches!(self.system, System::Ull | System::Cll)
        {
            return true;
        }
        // cycle schemas are present (checkable) even though φ defaults to
        // rejecting every application
        match self.system {
            System::Ull => matches!(
                rule,
                RuleName::CycleRL | RuleName::CycleLR | RuleName::CycleRR | RuleName::CycleLL
            ),
            System::Cll => rule == RuleName::CllCycle,
            _ => false,
        }
    }
}

/// Where and why a derivation fails to instantiate its rule schema.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
#[error("rule violation at {}: {explanation}", path_str(.path))]
pub struct RuleViolation {
    /// premise indices from the root
    pub path: Vec<usize>,
    pub explanation: String,
}

fn path_str(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Validates every node of the derivation against its schema: exact context
/// partitions, duality side conditions, verbatim Γ sharing, shape of the
/// process, and label agreement between branches and their types.
pub fn check_derivation(d: &Derivation, config: &Config) -> Result<(), RuleViolation> {
    let mut path = Vec::new();
    check_rec(d, config, &mut path)
}

fn check_rec(d: &Derivation, config: &Config, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    if !config.rule_allowed(d.rule) {
        return Err(RuleViolation {
            path: path.clone(),
            explanation: format!("rule {} is not part of system {}", d.rule, config.system),
        });
    }
    if let Arity::Fixed(n) = d.rule.arity() {
        if d.premises.len() != n {
            return Err(RuleViolation {
                path: path.clone(),
                explanation: format!(
                    "rule {} expects {} premise(s), found {}",
                    d.rule,
                    n,
                    d.premises.len()
                ),
            });
        }
    }
    if let Err(m) = d.conclusion.well_formed() {
        return Err(RuleViolation {
            path: path.clone(),
            explanation: format!("malformed judgment: {m}"),
        });
    }
    rules::check_node(d, config).map_err(|explanation| RuleViolation {
        path: path.clone(),
        explanation,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_rec(p, config, path)?;
        path.pop();
    }
    Ok(())
}
