//! Pretty-printer. Inverse of the parser on the nose: for every term `t`,
//! `parse_term(&print_term(&t)) == t`, because binder names are synthesised
//! fresh with respect to everything they could capture.

use super::{Flavour, Proj, Term, Type, Var};
use std::collections::BTreeSet;

/// Render a type with minimal parentheses.
pub fn print_type(ty: &Type) -> String {
    let mut s = String::new();
    ty_prec(ty, 0, &mut s);
    s
}

// precedence levels: 0 arrow, 1 product, 2 S/T prefix, 3 atom
fn ty_prec(ty: &Type, min: u8, out: &mut String) {
    let prec = match ty {
        Type::Arrow(..) => 0,
        Type::Prod(..) => 1,
        Type::Mon(..) => 2,
        Type::Unit | Type::Ground(_) => 3,
    };
    let parens = prec < min;
    if parens {
        out.push('(');
    }
    match ty {
        Type::Unit => out.push('1'),
        Type::Ground(g) => out.push_str(g),
        Type::Arrow(a, b) => {
            ty_prec(a, 1, out);
            out.push_str(" -> ");
            ty_prec(b, 0, out);
        }
        Type::Prod(a, b) => {
            ty_prec(a, 2, out);
            out.push_str(" * ");
            ty_prec(b, 1, out);
        }
        Type::Mon(f, a) => {
            out.push_str(match f {
                Flavour::S => "S ",
                Flavour::T => "T ",
            });
            ty_prec(a, 2, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Render a term with synthesised binder names.
pub fn print_term(term: &Term) -> String {
    print_term_in(term, &BTreeSet::new())
}

/// Render a term, additionally keeping synthesised binder names distinct
/// from `avoid` (typically the names of an ambient context).
pub fn print_term_in(term: &Term, avoid: &BTreeSet<String>) -> String {
    let mut taken = avoid.clone();
    term.free_names(&mut taken);
    let mut pr = Printer {
        taken,
        env: Vec::new(),
        out: String::new(),
    };
    pr.term(term, 0);
    pr.out
}

struct Printer {
    /// Names a fresh binder must not collide with: free names of the whole
    /// term, caller-supplied names, and enclosing binder names (scoped).
    taken: BTreeSet<String>,
    /// Enclosing binder names, innermost last.
    env: Vec<String>,
    out: String,
}

const CANDIDATES: &[&str] = &["x", "y", "z", "u", "v", "w", "p", "q", "m", "n"];

impl Printer {
    fn fresh_name(&self) -> String {
        for c in CANDIDATES {
            if !self.taken.contains(*c) {
                return (*c).to_string();
            }
        }
        let mut i = 1usize;
        loop {
            let name = format!("x{i}");
            if !self.taken.contains(&name) {
                return name;
            }
            i += 1;
        }
    }

    fn with_binder<F: FnOnce(&mut Self)>(&mut self, body_uses_binder: bool, f: F) -> String {
        let name = if body_uses_binder {
            self.fresh_name()
        } else {
            "_".to_string()
        };
        let inserted = self.taken.insert(name.clone());
        self.env.push(name.clone());
        f(self);
        self.env.pop();
        if inserted {
            self.taken.remove(&name);
        }
        name
    }

    // precedence levels: 0 lambda/do, 1 application, 2 unary, 3 atom
    fn term(&mut self, t: &Term, min: u8) {
        let prec = match t {
            Term::Lam(..) | Term::Do(..) => 0,
            Term::App(..) => 1,
            Term::Proj(..) | Term::Ret(..) | Term::Iota(..) => 2,
            Term::Var(_) | Term::Star | Term::Pair(..) | Term::Const(_) => 3,
        };
        if prec < min {
            self.out.push('(');
        }
        match t {
            Term::Var(Var::Bound(i)) => {
                if *i < self.env.len() {
                    let name = self.env[self.env.len() - 1 - i].clone();
                    self.out.push_str(&name);
                } else {
                    // dangling index: unparseable on purpose, so round-trips
                    // fail loudly instead of silently renaming
                    self.out.push_str(&format!("?b{i}"));
                }
            }
            Term::Var(Var::Free(n)) => self.out.push_str(n),
            Term::Const(n) => self.out.push_str(n),
            Term::Star => self.out.push('*'),
            Term::Lam(annot, body) => {
                // name must be chosen before emitting the head
                let uses = body.uses_bound(0);
                let mut tmp = Printer {
                    taken: self.taken.clone(),
                    env: self.env.clone(),
                    out: String::new(),
                };
                let name = tmp.with_binder(uses, |p| p.term(body, 0));
                self.out.push('\\');
                self.out.push_str(&name);
                self.out.push(':');
                ty_prec(annot, 0, &mut self.out);
                self.out.push_str(". ");
                self.out.push_str(&tmp.out);
            }
            Term::Do(f, head, body) => {
                let uses = body.uses_bound(0);
                let mut tmp = Printer {
                    taken: self.taken.clone(),
                    env: self.env.clone(),
                    out: String::new(),
                };
                let name = tmp.with_binder(uses, |p| p.term(body, 0));
                self.out.push_str(match f {
                    Flavour::S => "do_S ",
                    Flavour::T => "do_T ",
                });
                self.out.push_str(&name);
                self.out.push_str(" <- ");
                self.term(head, 1);
                self.out.push_str("; ");
                self.out.push_str(&tmp.out);
            }
            Term::App(f, x) => {
                self.term(f, 1);
                self.out.push(' ');
                self.term(x, 3);
            }
            Term::Proj(w, m) => {
                self.out.push_str(match w {
                    Proj::Fst => "fst ",
                    Proj::Snd => "snd ",
                });
                self.term(m, 2);
            }
            Term::Ret(f, m) => {
                self.out.push_str(match f {
                    Flavour::S => "ret_S ",
                    Flavour::T => "ret_T ",
                });
                self.term(m, 2);
            }
            Term::Iota(m) => {
                self.out.push_str("iota ");
                self.term(m, 2);
            }
            Term::Pair(l, r) => {
                self.out.push('<');
                self.term(l, 0);
                self.out.push_str(", ");
                self.term(r, 0);
                self.out.push('>');
            }
        }
        if prec < min {
            self.out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_term, parse_type, Flavour, Term, Type};
    use super::*;

    fn roundtrip_term(src: &str) {
        let t = parse_term(src).unwrap();
        let printed = print_term(&t);
        let back = parse_term(&printed).unwrap_or_else(|e| {
            panic!("printed form `{printed}` failed to reparse: {e}");
        });
        assert_eq!(back, t, "round-trip changed `{src}` via `{printed}`");
    }

    fn roundtrip_type(src: &str) {
        let t = parse_type(src).unwrap();
        let printed = print_type(&t);
        assert_eq!(parse_type(&printed).unwrap(), t);
    }

    #[test]
    fn type_roundtrips() {
        for src in [
            "1",
            "G",
            "A -> B -> C",
            "(A -> B) -> C",
            "A * B * C",
            "(A * B) * C",
            "S A * T B",
            "S (A * B)",
            "T (A -> S B) * 1",
        ] {
            roundtrip_type(src);
        }
    }

    #[test]
    fn term_roundtrips() {
        for src in [
            "*",
            "\\x:A. x",
            "\\x:A -> B. \\y:A. x y",
            "<fst p, snd p>",
            "do_T x <- iota m; ret_T x",
            "do_T x <- m; do_T y <- n; ret_T <x, y>",
            "do_S * <- s; ret_S *",
            "(\\x:A. x) y",
            "f (iota m) x",
            "iota (ret_S (fst p))",
            "\\f:(A -> B) -> C. f (\\a:A. b)",
        ] {
            roundtrip_term(src);
        }
    }

    #[test]
    fn fresh_names_avoid_free_variables() {
        // body refers to free `x`, so the binder must not be called `x`
        let t = Term::lam(
            Type::ground("A"),
            Term::app(Term::free("x"), Term::bound(0)),
        );
        let printed = print_term(&t);
        assert_eq!(parse_term(&printed).unwrap(), t);
        assert!(printed.starts_with("\\y:"), "got {printed}");
    }

    #[test]
    fn unused_binders_print_anonymously() {
        let t = Term::do_(Flavour::T, Term::free("c"), Term::free("m"));
        assert_eq!(print_term(&t), "do_T _ <- c; m");
    }

    #[test]
    fn shadowing_never_appears_in_output() {
        // λ λ ⟨1,0⟩ — inner binder must pick a different name
        let t = Term::lam(
            Type::Unit,
            Term::lam(Type::Unit, Term::pair(Term::bound(1), Term::bound(0))),
        );
        let printed = print_term(&t);
        assert_eq!(parse_term(&printed).unwrap(), t);
        assert_eq!(printed, "\\x:1. \\y:1. <x, y>");
    }
}
