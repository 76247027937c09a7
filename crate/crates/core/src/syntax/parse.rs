//! Lexer and recursive-descent parser for the surface syntax.
//!
//! Grammar (binding tightness increases downward):
//!
//! ```text
//! type  ::= prod | prod "->" type                  (right-assoc)
//! prod  ::= prefix | prefix "*" prod               (right-assoc)
//! prefix::= ("S" | "T") prefix | tatom
//! tatom ::= "1" | ground | "(" type ")"
//!
//! term  ::= "\" binder ":" type "." term
//!         | ("do_S" | "do_T") dobinder "<-" app ";" term
//!         | app
//! app   ::= unary unary*                           (left-assoc)
//! unary ::= ("fst"|"snd"|"iota"|"ret_S"|"ret_T") unary | atom
//! atom  ::= "*" | name | "(" term ")" | "<" term "," term ">"
//! binder   ::= name | "_"
//! dobinder ::= name | "_" | "*"
//! ```
//!
//! `#` starts a comment running to end of line. Lambda and `do` bodies
//! extend as far right as possible; a lambda or `do` used as a `do`-head or
//! an application argument needs parentheses.

use super::{Context, Flavour, Proj, Term, Type, Var};
use std::collections::BTreeSet;
use std::fmt;

/// Parse failure with 1-based source position and the token classes that
/// would have been accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: expected {}, found {}",
            self.line,
            self.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// Parse a type from an entire string.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let ty = p.ty()?;
    p.expect_eof()?;
    Ok(ty)
}

/// Parse a term from an entire string. Free variables stay named; resolving
/// them against a context or constant table happens later.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let tm = p.term()?;
    p.expect_eof()?;
    Ok(tm)
}

/// Parse `[x:A, y:B] |- M` or a bare term (empty context).
pub fn parse_judgement(src: &str) -> Result<(Context, Term), ParseError> {
    let mut p = Parser::new(src)?;
    let ctx = if p.peek_is(&Tok::LBrack) {
        let ctx = p.context()?;
        p.expect(Tok::Turnstile, "|-")?;
        ctx
    } else if p.peek_is(&Tok::Turnstile) {
        // an explicitly empty context: `|- term`
        p.expect(Tok::Turnstile, "|-")?;
        Context::empty()
    } else {
        Context::empty()
    };
    let tm = p.term()?;
    p.expect_eof()?;
    Ok((ctx, tm))
}

const RESERVED: &[&str] = &[
    "fst", "snd", "iota", "ret_S", "ret_T", "do_S", "do_T", "S", "T",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Star,
    Backslash,
    Dot,
    Colon,
    Comma,
    Semi,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    Arrow,
    LArrow,
    Turnstile,
    Eq,
    Underscore,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("`{s}`"),
            Tok::Star => "`*`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LArrow => "`<-`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, u32, u32)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let (tl, tc) = (line, col);
        let c = match chars.peek().copied() {
            None => {
                out.push((Tok::Eof, tl, tc));
                return Ok(out);
            }
            Some(c) => c,
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '*' => {
                bump!();
                out.push((Tok::Star, tl, tc));
            }
            '\\' => {
                bump!();
                out.push((Tok::Backslash, tl, tc));
            }
            '.' => {
                bump!();
                out.push((Tok::Dot, tl, tc));
            }
            ':' => {
                bump!();
                out.push((Tok::Colon, tl, tc));
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, tl, tc));
            }
            ';' => {
                bump!();
                out.push((Tok::Semi, tl, tc));
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, tl, tc));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, tl, tc));
            }
            '[' => {
                bump!();
                out.push((Tok::LBrack, tl, tc));
            }
            ']' => {
                bump!();
                out.push((Tok::RBrack, tl, tc));
            }
            '=' => {
                bump!();
                out.push((Tok::Eq, tl, tc));
            }
            '>' => {
                bump!();
                out.push((Tok::RAngle, tl, tc));
            }
            '<' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push((Tok::LArrow, tl, tc));
                } else {
                    out.push((Tok::LAngle, tl, tc));
                }
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Tok::Arrow, tl, tc));
                } else {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        expected: vec!["`->`".into()],
                        found: "`-`".into(),
                    });
                }
            }
            '|' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push((Tok::Turnstile, tl, tc));
                } else {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        expected: vec!["`|-`".into()],
                        found: "`|`".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Number(s), tl, tc));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if s == "_" {
                    out.push((Tok::Underscore, tl, tc));
                } else {
                    out.push((Tok::Ident(s), tl, tc));
                }
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
}

pub(crate) struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
    /// Innermost binder last; `None` for anonymous (`_` / `*`) binders.
    binders: Vec<Option<String>>,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            binders: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_is(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (t, l, c) = &self.toks[self.pos];
        Err(ParseError {
            line: *l,
            col: *c,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.describe(),
        })
    }

    pub(crate) fn expect(&mut self, t: Tok, show: &str) -> Result<(), ParseError> {
        if self.peek() == &t {
            self.advance();
            Ok(())
        } else {
            self.err(&[show])
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.err(&["end of input"])
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.advance();
                Ok(s)
            }
            _ => self.err(&[what]),
        }
    }

    // ---- types ----

    pub(crate) fn ty(&mut self) -> Result<Type, ParseError> {
        let left = self.ty_prod()?;
        if self.peek_is(&Tok::Arrow) {
            self.advance();
            let right = self.ty()?;
            Ok(Type::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn ty_prod(&mut self) -> Result<Type, ParseError> {
        let left = self.ty_prefix()?;
        if self.peek_is(&Tok::Star) {
            self.advance();
            let right = self.ty_prod()?;
            Ok(Type::prod(left, right))
        } else {
            Ok(left)
        }
    }

    fn ty_prefix(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "S" => {
                self.advance();
                Ok(Type::mon_s(self.ty_prefix()?))
            }
            Tok::Ident(s) if s == "T" => {
                self.advance();
                Ok(Type::mon_t(self.ty_prefix()?))
            }
            _ => self.ty_atom(),
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) if n == "1" => {
                self.advance();
                Ok(Type::Unit)
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.advance();
                Ok(Type::Ground(s))
            }
            Tok::LParen => {
                self.advance();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.err(&["`1`", "a ground type", "`S`", "`T`", "`(`"]),
        }
    }

    // ---- terms ----

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Backslash => {
                self.advance();
                let binder = self.binder(false)?;
                self.expect(Tok::Colon, "`:`")?;
                let annot = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                self.binders.push(binder);
                let body = self.term();
                self.binders.pop();
                Ok(Term::lam(annot, body?))
            }
            Tok::Ident(s) if s == "do_S" || s == "do_T" => {
                self.advance();
                let flavour = if s == "do_S" { Flavour::S } else { Flavour::T };
                let binder = self.binder(true)?;
                self.expect(Tok::LArrow, "`<-`")?;
                let head = self.app()?;
                self.expect(Tok::Semi, "`;`")?;
                self.binders.push(binder);
                let body = self.term();
                self.binders.pop();
                Ok(Term::do_(flavour, head, body?))
            }
            _ => self.app(),
        }
    }

    fn binder(&mut self, allow_star: bool) -> Result<Option<String>, ParseError> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.advance();
                Ok(None)
            }
            Tok::Star if allow_star => {
                self.advance();
                Ok(None)
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.advance();
                Ok(Some(s))
            }
            _ => {
                if allow_star {
                    self.err(&["a binder name", "`_`", "`*`"])
                } else {
                    self.err(&["a binder name", "`_`"])
                }
            }
        }
    }

    fn starts_unary(&self) -> bool {
        match self.peek() {
            Tok::Star | Tok::LParen | Tok::LAngle | Tok::Underscore => true,
            Tok::Ident(s) => s != "do_S" && s != "do_T" && s != "S" && s != "T",
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut head = self.unary()?;
        while self.starts_unary() {
            let arg = self.unary()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if let Tok::Ident(s) = self.peek().clone() {
            let make = |inner: Term| match s.as_str() {
                "fst" => Some(Term::proj(Proj::Fst, inner)),
                "snd" => Some(Term::proj(Proj::Snd, inner)),
                "iota" => Some(Term::iota(inner)),
                "ret_S" => Some(Term::ret(Flavour::S, inner)),
                "ret_T" => Some(Term::ret(Flavour::T, inner)),
                _ => None,
            };
            if make(Term::Star).is_some() {
                self.advance();
                let inner = self.unary()?;
                return Ok(make(inner).unwrap());
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Star => {
                self.advance();
                Ok(Term::Star)
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.advance();
                Ok(self.name_to_var(&s))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::LAngle => {
                self.advance();
                let l = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let r = self.term()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Term::pair(l, r))
            }
            _ => self.err(&["`*`", "a variable", "`(`", "`<`"]),
        }
    }

    fn name_to_var(&self, name: &str) -> Term {
        for (depth, binder) in self.binders.iter().rev().enumerate() {
            if binder.as_deref() == Some(name) {
                return Term::bound(depth);
            }
        }
        Term::Var(Var::Free(name.to_string()))
    }

    // ---- contexts ----

    /// `[x:A, y:B]`, possibly `[]`.
    pub(crate) fn context(&mut self) -> Result<Context, ParseError> {
        self.expect(Tok::LBrack, "`[`")?;
        let mut pairs = Vec::new();
        if !self.peek_is(&Tok::RBrack) {
            loop {
                let name = self.ident("a variable name")?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                pairs.push((name, ty));
                if self.peek_is(&Tok::Comma) {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack, "`]`")?;
        match Context::from_pairs(pairs) {
            Ok(ctx) => Ok(ctx),
            Err(super::DuplicateName(n)) => {
                let (_, l, c) = &self.toks[self.pos];
                Err(ParseError {
                    line: *l,
                    col: *c,
                    expected: vec!["distinct context variable names".into()],
                    found: format!("`{n}` twice"),
                })
            }
        }
    }
}

/// Names that may not be used for variables, constants, or ground types.
pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// Free names of a term that are *not* in the given set — helper for
/// callers that resolve constants after parsing.
pub fn unresolved_names(term: &Term, known: &BTreeSet<String>) -> BTreeSet<String> {
    let mut all = BTreeSet::new();
    term.free_names(&mut all);
    all.into_iter().filter(|n| !known.contains(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{Flavour, Proj, Term, Type};
    use super::*;

    #[test]
    fn types_associate_as_documented() {
        // -> right-assoc, * right-assoc and tighter, S/T tightest
        assert_eq!(
            parse_type("A -> B -> C").unwrap(),
            Type::arrow(
                Type::ground("A"),
                Type::arrow(Type::ground("B"), Type::ground("C"))
            )
        );
        assert_eq!(
            parse_type("A * B -> C").unwrap(),
            Type::arrow(
                Type::prod(Type::ground("A"), Type::ground("B")),
                Type::ground("C")
            )
        );
        assert_eq!(
            parse_type("S A * B").unwrap(),
            Type::prod(Type::mon_s(Type::ground("A")), Type::ground("B"))
        );
        assert_eq!(
            parse_type("S (A -> T B)").unwrap(),
            Type::mon_s(Type::arrow(
                Type::ground("A"),
                Type::mon_t(Type::ground("B"))
            ))
        );
        assert_eq!(parse_type("S T 1").unwrap(), Type::mon_s(Type::mon_t(Type::Unit)));
    }

    #[test]
    fn binders_become_indices_and_free_names_stay() {
        let t = parse_term("\\x:A. x y").unwrap();
        assert_eq!(
            t,
            Term::lam(
                Type::ground("A"),
                Term::app(Term::bound(0), Term::free("y"))
            )
        );
    }

    #[test]
    fn alpha_variants_parse_identically() {
        let a = parse_term("\\x:A. \\y:B. x").unwrap();
        let b = parse_term("\\u:A. \\v:B. u").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shadowing_rebinds_innermost() {
        let t = parse_term("\\x:A. \\x:B. x").unwrap();
        assert_eq!(
            t,
            Term::lam(Type::ground("A"), Term::lam(Type::ground("B"), Term::bound(0)))
        );
    }

    #[test]
    fn do_notation_nests_rightward() {
        let t = parse_term("do_T x <- iota m; ret_T x").unwrap();
        assert_eq!(
            t,
            Term::do_(
                Flavour::T,
                Term::iota(Term::free("m")),
                Term::ret(Flavour::T, Term::bound(0))
            )
        );
        let nested = parse_term("do_T x <- m; do_T y <- n; ret_T <x, y>").unwrap();
        assert_eq!(
            nested,
            Term::do_(
                Flavour::T,
                Term::free("m"),
                Term::do_(
                    Flavour::T,
                    Term::free("n"),
                    Term::ret(Flavour::T, Term::pair(Term::bound(1), Term::bound(0)))
                )
            )
        );
    }

    #[test]
    fn star_and_underscore_are_anonymous_do_binders() {
        let a = parse_term("do_T * <- c; m").unwrap();
        let b = parse_term("do_T _ <- c; m").unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a,
            Term::do_(Flavour::T, Term::free("c"), Term::free("m"))
        );
    }

    #[test]
    fn unary_forms_chain_greedily() {
        assert_eq!(
            parse_term("fst snd p").unwrap(),
            Term::proj(Proj::Fst, Term::proj(Proj::Snd, Term::free("p")))
        );
        // but application args stop at atoms
        assert_eq!(
            parse_term("ret_T f x").unwrap(),
            Term::app(Term::ret(Flavour::T, Term::free("f")), Term::free("x"))
        );
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            parse_term("f x y").unwrap(),
            Term::app(Term::app(Term::free("f"), Term::free("x")), Term::free("y"))
        );
    }

    #[test]
    fn judgement_with_context() {
        let (ctx, t) = parse_judgement("[x:A, m:T B] |- do_T y <- m; ret_T <x, y>").unwrap();
        assert_eq!(ctx.lookup("x"), Some(&Type::ground("A")));
        assert_eq!(ctx.lookup("m"), Some(&Type::mon_t(Type::ground("B"))));
        assert_eq!(
            t,
            Term::do_(
                Flavour::T,
                Term::free("m"),
                Term::ret(Flavour::T, Term::pair(Term::free("x"), Term::bound(0)))
            )
        );
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let e = parse_term("\\x:A").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.expected.iter().any(|s| s.contains('.')));
        let e = parse_type("A -> ").unwrap_err();
        assert!(!e.expected.is_empty());
        let e = parse_term("do_T x <- ; m").unwrap_err();
        assert_eq!(e.found, "`;`");
    }

    #[test]
    fn reserved_words_are_not_variables() {
        assert!(parse_term("\\S:A. S").is_err());
        assert!(parse_type("T").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_term("# leading note\nf x # trailing\n").unwrap();
        assert_eq!(t, Term::app(Term::free("f"), Term::free("x")));
    }
}
