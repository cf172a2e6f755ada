//! Surface syntax and serialization.
//!
//! ASCII-only surface forms: `*` for ⊗, `-o` for ⊸, `par` for ⅋, `new` for ν,
//! `serv` for replicated receive. File extensions: `.sty` for types, `.spi`
//! for processes and judgments, `.deriv.json` for derivations. Printers are
//! deterministic and `parse(print(v)) == v` for all four categories.

mod lex;
mod parse;
mod print;
pub mod deriv;

pub use deriv::{parse_derivation, print_derivation, DerivationDoc, DERIV_FORMAT};
pub use lex::{SourcePos, SourceSpan};
pub use parse::{parse_judgment, parse_process, parse_type};
pub use print::{print_judgment, print_process, print_type};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub message: String,
}

impl SyntaxError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        SyntaxError {
            span,
            message: message.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Branches, Context, Judgment, Process, System, TypeExpr};

    #[test]
    fn parse_type_examples() {
        assert_eq!(
            parse_type("1 * bot").unwrap(),
            TypeExpr::tensor(TypeExpr::One, TypeExpr::Bot)
        );
        // `1 par bot` desugars via dual(1) = bot
        assert_eq!(
            parse_type("1 par bot").unwrap(),
            TypeExpr::lolli(TypeExpr::Bot, TypeExpr::Bot)
        );
        // `!1 par ?bot` = Lolli(dual(!1), ?bot) = Lolli(?bot, ?bot)
        assert_eq!(
            parse_type("!1 par ?bot").unwrap(),
            TypeExpr::lolli(
                TypeExpr::query(TypeExpr::Bot),
                TypeExpr::query(TypeExpr::Bot)
            )
        );
    }

    #[test]
    fn type_precedence() {
        // !,? > * > par > -o and right-associative arrows
        let t = parse_type("!1 * bot -o 1 par bot").unwrap();
        // parses as ((!1 * bot)) -o ... no: -o binds loosest, par next:
        // (!1 * bot) -o (1 par bot)? `par` binds tighter than -o:
        let lhs = TypeExpr::tensor(TypeExpr::bang(TypeExpr::One), TypeExpr::Bot);
        let rhs = TypeExpr::lolli(TypeExpr::Bot, TypeExpr::Bot);
        assert_eq!(t, TypeExpr::lolli(lhs, rhs));
        let rt = parse_type("1 -o 1 -o 1").unwrap();
        assert_eq!(
            rt,
            TypeExpr::lolli(
                TypeExpr::One,
                TypeExpr::lolli(TypeExpr::One, TypeExpr::One)
            )
        );
    }

    #[test]
    fn parse_branch_types() {
        let t = parse_type("+{a: 1, b: bot}").unwrap();
        assert_eq!(
            t,
            TypeExpr::Plus(Branches::new(vec![
                ("a".into(), TypeExpr::One),
                ("b".into(), TypeExpr::Bot)
            ]))
        );
        assert!(parse_type("+{a: 1, a: bot}").is_err());
        assert!(parse_type("+{}").is_err());
    }

    #[test]
    fn parse_process_examples() {
        assert_eq!(parse_process("close x").unwrap(), Process::close("x"));
        assert_eq!(
            parse_process("new x:1 (close x | wait x . close z)").unwrap(),
            Process::restrict_ann(
                "x",
                TypeExpr::One,
                Process::par(Process::close("x"), Process::wait("x", Process::close("z")))
            )
        );
        assert_eq!(
            parse_process("recv x(y). serv y(z). close z").unwrap(),
            Process::input("x", "y", Process::server("y", "z", Process::close("z")))
        );
    }

    #[test]
    fn parse_send_shapes() {
        // bound send: composite Restrict+Output+Par
        assert_eq!(
            parse_process("send x(y).(close y | close x)").unwrap(),
            Process::send_pair("x", "y", Process::close("y"), Process::close("x"))
        );
        // client request: single continuation
        assert_eq!(
            parse_process("send u(x).fwd x w").unwrap(),
            Process::send_one("u", "x", Process::fwd("x", "w"))
        );
        // parenthesized single continuation is not a pair
        assert_eq!(
            parse_process("send u(x).(fwd x w)").unwrap(),
            Process::send_one("u", "x", Process::fwd("x", "w"))
        );
    }

    #[test]
    fn parse_select_branch() {
        let p = parse_process("x << go . close x").unwrap();
        assert_eq!(p, Process::select("x", "go", Process::close("x")));
        let q = parse_process("x >> { a: close x, b: wait x . 0 }").unwrap();
        match q {
            Process::Branch { channel, arms } => {
                assert_eq!(channel, "x");
                assert_eq!(arms.len(), 2);
            }
            _ => panic!(),
        }
        assert!(parse_process("x >> { a: close x, a: close x }").is_err());
    }

    #[test]
    fn parse_judgment_examples() {
        let j = parse_judgment(". ; x:1 |- fwd x y :: y:1", System::Ull).unwrap();
        assert_eq!(
            j,
            Judgment::Ull {
                gamma: Context::empty(),
                delta: Context::singleton("x", TypeExpr::One),
                process: Process::fwd("x", "y"),
                lambda: Context::singleton("y", TypeExpr::One),
            }
        );
        let j = parse_judgment(". ; . |-i close x :: x:1", System::Ill).unwrap();
        assert_eq!(
            j,
            Judgment::Ill {
                gamma: Context::empty(),
                delta: Context::empty(),
                process: Process::close("x"),
                right_name: "x".into(),
                right_type: TypeExpr::One,
            }
        );
        let j = parse_judgment("fwd x y |-c . ; x:bot, y:1", System::Cll).unwrap();
        assert_eq!(
            j,
            Judgment::Cll {
                process: Process::fwd("x", "y"),
                gamma: Context::empty(),
                delta: Context::from_pairs(vec![
                    ("x".into(), TypeExpr::Bot),
                    ("y".into(), TypeExpr::One)
                ]),
            }
        );
    }

    #[test]
    fn judgment_rejects_bad_shapes() {
        // duplicate names across regions
        assert!(parse_judgment(". ; x:1 |- close x :: x:1", System::Ull).is_err());
        // ILL right region must be a single assignment
        assert!(parse_judgment(". ; . |-i close x :: x:1, y:1", System::Ill).is_err());
        // ILL types must stay inside the intuitionistic grammar
        assert!(parse_judgment(". ; y:bot |-i close x :: x:1", System::Ill).is_err());
        // wrong turnstile for the system
        assert!(parse_judgment(". ; . |- close x :: x:1", System::Ill).is_err());
    }

    #[test]
    fn mix_par_judgment() {
        let j = parse_judgment(". ; . |- close x | close y :: x:1, y:1", System::Ull).unwrap();
        assert_eq!(
            j.process(),
            &Process::par(Process::close("x"), Process::close("y"))
        );
    }

    #[test]
    fn print_parse_roundtrip_spot() {
        let t = parse_type("!(1 * bot) -o +{a: ?1, b: &{c: 1}}").unwrap();
        assert_eq!(parse_type(&print_type(&t)).unwrap(), t);
        let p = parse_process("new x (send x(y).(close y | fwd x z) | recv x(w). wait w . 0)")
            .unwrap();
        assert_eq!(parse_process(&print_process(&p)).unwrap(), p);
        let j = parse_judgment(". ; x:1 |- fwd x y :: y:1", System::Ull).unwrap();
        assert_eq!(
            parse_judgment(&print_judgment(&j), System::Ull).unwrap(),
            j
        );
    }

    #[test]
    fn error_spans() {
        let e = parse_type("1 * ").unwrap_err();
        assert_eq!(e.span.start.line, 1);
        let e = parse_process("recv x(y close y").unwrap_err();
        assert!(e.span.start.col > 1);
    }
}
