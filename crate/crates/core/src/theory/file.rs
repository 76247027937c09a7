//! Line-oriented theory file format (`.csct`).
//!
//! ```text
//! # comment
//! ground G
//! type-eq G = 1
//! const act_r : T 1
//! axiom [m : T 1] |- do_T * <- act_e; m = m : T 1
//! ```
//!
//! One directive per line; order is irrelevant (constants are resolved in
//! axiom bodies after the whole file is read). A parsed theory is always
//! validated before it is returned.

use super::{Axiom, Diagnostic, Theory};
use crate::syntax::parse::{Parser, Tok};
use crate::syntax::{Context, Term, Type};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum TheoryLoadError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("theory failed validation ({} problem(s))", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse and validate a `.csct` theory.
pub fn parse_theory(src: &str) -> Result<Theory, TheoryLoadError> {
    let mut grounds = Vec::new();
    let mut type_axioms = Vec::new();
    let mut constants = Vec::new();
    let mut axioms = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let at = |message: String| TheoryLoadError::Line {
            line: line_no,
            message,
        };
        match directive {
            "ground" => {
                let mut p = parser(rest, line_no)?;
                let name = p.ident("a ground type name").map_err(|e| at(e.to_string()))?;
                p.expect_eof().map_err(|e| at(e.to_string()))?;
                grounds.push(name);
            }
            "type-eq" => {
                let mut p = parser(rest, line_no)?;
                let parse = |p: &mut Parser| -> Result<(Type, Type), crate::syntax::ParseError> {
                    let l = p.ty()?;
                    p.expect(Tok::Eq, "`=`")?;
                    let r = p.ty()?;
                    p.expect_eof()?;
                    Ok((l, r))
                };
                type_axioms.push(parse(&mut p).map_err(|e| at(e.to_string()))?);
            }
            "const" => {
                let mut p = parser(rest, line_no)?;
                let parse = |p: &mut Parser| -> Result<(String, Type), crate::syntax::ParseError> {
                    let name = p.ident("a constant name")?;
                    p.expect(Tok::Colon, "`:`")?;
                    let ty = p.ty()?;
                    p.expect_eof()?;
                    Ok((name, ty))
                };
                constants.push(parse(&mut p).map_err(|e| at(e.to_string()))?);
            }
            "axiom" => {
                let mut p = parser(rest, line_no)?;
                let parse = |p: &mut Parser| -> Result<Axiom, crate::syntax::ParseError> {
                    let context = p.context()?;
                    p.expect(Tok::Turnstile, "`|-`")?;
                    let lhs = p.term()?;
                    p.expect(Tok::Eq, "`=`")?;
                    let rhs = p.term()?;
                    p.expect(Tok::Colon, "`:`")?;
                    let ty = p.ty()?;
                    p.expect_eof()?;
                    Ok(Axiom {
                        context,
                        lhs,
                        rhs,
                        ty,
                    })
                };
                axioms.push(parse(&mut p).map_err(|e| at(e.to_string()))?);
            }
            other => {
                return Err(at(format!(
                    "unknown directive `{other}` (expected ground, type-eq, const, or axiom)"
                )));
            }
        }
    }

    let mut th = Theory::new();
    for g in grounds {
        th.add_ground(g);
    }
    for (l, r) in type_axioms {
        th.add_type_axiom(l, r);
    }
    for (name, ty) in constants {
        th.add_constant(name, ty);
    }
    for ax in axioms {
        th.add_axiom(ax);
    }
    th.validate().map_err(TheoryLoadError::Invalid)?;
    Ok(th)
}

fn parser(src: &str, line_no: usize) -> Result<Parser, TheoryLoadError> {
    Parser::new(src).map_err(|e| TheoryLoadError::Line {
        line: line_no,
        message: e.to_string(),
    })
}

impl Theory {
    /// Load and validate a `.csct` file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Theory, TheoryLoadError> {
        parse_theory(&std::fs::read_to_string(path)?)
    }

    /// Serialize in `.csct` form; `parse_theory` inverts this.
    pub fn to_csct(&self) -> String {
        let mut out = String::new();
        for g in self.grounds() {
            out.push_str(&format!("ground {g}\n"));
        }
        for (l, r) in self.type_axioms() {
            out.push_str(&format!("type-eq {l} = {r}\n"));
        }
        for (name, ty) in self.constants() {
            out.push_str(&format!("const {name} : {ty}\n"));
        }
        for ax in self.term_axioms() {
            out.push_str(&format!("axiom {ax}\n"));
        }
        out
    }
}

/// Parse a `.csc` term file: optional `[ctx] |-` prefix, then a term,
/// comments allowed. Constants from `th` are resolved.
pub fn parse_term_file(th: &Theory, src: &str) -> Result<(Context, Term), crate::syntax::ParseError> {
    let (ctx, term) = crate::syntax::parse_judgement(src)?;
    Ok((ctx, term.resolve_consts(&th.constant_names())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
# a two-element writer theory over ground G
ground G
type-eq G = 1

const act_e : T 1
const act_a : T 1

axiom [m : T 1] |- do_T * <- act_e; m = m : T 1
axiom [m : T 1] |- do_T * <- act_a; do_T * <- act_a; m = do_T * <- act_e; m : T 1
";

    #[test]
    fn sample_parses_and_roundtrips() {
        let th = parse_theory(SAMPLE).unwrap();
        assert_eq!(th.grounds().collect::<Vec<_>>(), vec!["G"]);
        assert_eq!(th.term_axioms().len(), 2);
        assert!(th
            .type_equal(
                &crate::syntax::parse_type("G").unwrap(),
                &crate::syntax::Type::Unit
            )
            .unwrap());
        let reparsed = parse_theory(&th.to_csct()).unwrap();
        assert_eq!(reparsed, th);
    }

    #[test]
    fn unknown_directive_is_rejected_with_line() {
        let err = parse_theory("ground G\nfrobnicate X\n").unwrap_err();
        match err {
            TheoryLoadError::Line { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("frobnicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_the_file_line() {
        let err = parse_theory("ground G\nconst c :\n").unwrap_err();
        match err {
            TheoryLoadError::Line { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_theories_are_rejected_at_load() {
        let err = parse_theory("const c : Missing\n").unwrap_err();
        assert!(matches!(err, TheoryLoadError::Invalid(_)));
    }

    #[test]
    fn term_files_resolve_constants() {
        let th = parse_theory(SAMPLE).unwrap();
        let (ctx, t) = parse_term_file(&th, "do_T * <- act_a; ret_T *").unwrap();
        assert!(ctx.is_empty());
        assert_eq!(
            t,
            Term::do_(
                crate::syntax::Flavour::T,
                Term::constant("act_a"),
                Term::ret(crate::syntax::Flavour::T, Term::Star)
            )
        );
    }
}
