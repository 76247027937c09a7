//! Abstract syntax: types, nameless terms, contexts, and the substitution
//! calculus.
//!
//! Terms use a locally nameless representation: variables bound by `λ` or
//! `do` binders are de Bruijn indices ([`Var::Bound`]), while variables bound
//! by a typing context keep their surface names ([`Var::Free`]). Two
//! α-equivalent surface terms therefore parse to structurally identical
//! values, and [`alpha_eq`] is plain structural equality. Surface binder
//! names are discarded at parse time; the printer synthesises fresh,
//! capture-free names on the way out.

pub(crate) mod parse;
mod print;

pub use parse::{
    is_reserved as is_reserved_name, parse_judgement, parse_term, parse_type, unresolved_names,
    ParseError,
};
pub use print::{print_term, print_term_in, print_type};

use std::collections::BTreeSet;
use std::fmt;

/// `Display` impls delegate to the printer functions; kept as a macro so the
/// enum definitions stay uncluttered.
macro_rules! fmt_via_printer {
    ($printer:ident) => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", $printer(self))
        }
    };
}

/// Monadic flavour: `S` is the central submonad, `T` the ambient strong monad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavour {
    S,
    T,
}

impl fmt::Display for Flavour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavour::S => write!(f, "S"),
            Flavour::T => write!(f, "T"),
        }
    }
}

/// Object-language types.
///
/// `Mon(S, a)` and `Mon(T, a)` are the two monadic constructors; every
/// formation and equation rule treats the flavour uniformly, so it is a
/// parameter rather than two variants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Unit,
    Ground(String),
    Arrow(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
    Mon(Flavour, Box<Type>),
}

impl Type {
    pub fn ground(name: impl Into<String>) -> Type {
        Type::Ground(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn prod(left: Type, right: Type) -> Type {
        Type::Prod(Box::new(left), Box::new(right))
    }

    pub fn mon(flavour: Flavour, inner: Type) -> Type {
        Type::Mon(flavour, Box::new(inner))
    }

    pub fn mon_s(inner: Type) -> Type {
        Type::mon(Flavour::S, inner)
    }

    pub fn mon_t(inner: Type) -> Type {
        Type::mon(Flavour::T, inner)
    }

    /// All ground-type names mentioned anywhere in the type.
    pub fn ground_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Unit => {}
            Type::Ground(g) => {
                out.insert(g.clone());
            }
            Type::Arrow(a, b) | Type::Prod(a, b) => {
                a.ground_names(out);
                b.ground_names(out);
            }
            Type::Mon(_, a) => a.ground_names(out),
        }
    }

    /// Number of constructors; used for search ordering and size diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Type::Unit | Type::Ground(_) => 1,
            Type::Arrow(a, b) | Type::Prod(a, b) => 1 + a.size() + b.size(),
            Type::Mon(_, a) => 1 + a.size(),
        }
    }

    /// Every subterm of the type, including the type itself.
    pub fn subterms(&self, out: &mut Vec<Type>) {
        out.push(self.clone());
        match self {
            Type::Unit | Type::Ground(_) => {}
            Type::Arrow(a, b) | Type::Prod(a, b) => {
                a.subterms(out);
                b.subterms(out);
            }
            Type::Mon(_, a) => a.subterms(out),
        }
    }
}

impl fmt::Display for Type {
    fmt_via_printer!(print_type);
}

/// A variable occurrence: either a de Bruijn index into the enclosing
/// binders (innermost = 0) or a named reference resolved against a context
/// or constant table later.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Bound(usize),
    Free(String),
}

/// Projection selector for pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Proj {
    Fst,
    Snd,
}

/// Nameless terms.
///
/// Binder constructors ([`Term::Lam`] and [`Term::Do`]) carry no name: the
/// bound variable is index 0 inside the body. [`Term::Const`] is a constant
/// declared by a theory; the parser initially produces [`Var::Free`] for
/// every named reference and [`Term::resolve_consts`] rewrites the declared
/// ones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Star,
    Lam(Box<Type>, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(Proj, Box<Term>),
    Ret(Flavour, Box<Term>),
    Iota(Box<Term>),
    Do(Flavour, Box<Term>, Box<Term>),
    Const(String),
}

impl Term {
    pub fn bound(index: usize) -> Term {
        Term::Var(Var::Bound(index))
    }

    pub fn free(name: impl Into<String>) -> Term {
        Term::Var(Var::Free(name.into()))
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(annot: Type, body: Term) -> Term {
        Term::Lam(Box::new(annot), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn proj(which: Proj, of: Term) -> Term {
        Term::Proj(which, Box::new(of))
    }

    pub fn ret(flavour: Flavour, of: Term) -> Term {
        Term::Ret(flavour, Box::new(of))
    }

    pub fn iota(of: Term) -> Term {
        Term::Iota(Box::new(of))
    }

    pub fn do_(flavour: Flavour, head: Term, body: Term) -> Term {
        Term::Do(flavour, Box::new(head), Box::new(body))
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Star | Term::Const(_) => 1,
            Term::Lam(_, b) | Term::Proj(_, b) | Term::Ret(_, b) | Term::Iota(b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::Do(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Shift every bound index `>= cutoff` by `delta`.
    ///
    /// Panics if a shift would take an index below zero; callers only
    /// downshift indices they have proved unused.
    pub fn shifted_above(&self, cutoff: usize, delta: isize) -> Term {
        match self {
            Term::Var(Var::Bound(i)) => {
                if *i >= cutoff {
                    let j = (*i as isize) + delta;
                    assert!(j >= 0, "bound index shifted below zero");
                    Term::bound(j as usize)
                } else {
                    self.clone()
                }
            }
            Term::Var(Var::Free(_)) | Term::Star | Term::Const(_) => self.clone(),
            Term::Lam(a, b) => Term::lam((**a).clone(), b.shifted_above(cutoff + 1, delta)),
            Term::App(f, x) => Term::app(f.shifted_above(cutoff, delta), x.shifted_above(cutoff, delta)),
            Term::Pair(l, r) => {
                Term::pair(l.shifted_above(cutoff, delta), r.shifted_above(cutoff, delta))
            }
            Term::Proj(w, m) => Term::proj(*w, m.shifted_above(cutoff, delta)),
            Term::Ret(f, m) => Term::ret(*f, m.shifted_above(cutoff, delta)),
            Term::Iota(m) => Term::iota(m.shifted_above(cutoff, delta)),
            Term::Do(f, h, b) => Term::do_(
                *f,
                h.shifted_above(cutoff, delta),
                b.shifted_above(cutoff + 1, delta),
            ),
        }
    }

    /// Shift all bound indices by `delta`.
    pub fn shifted(&self, delta: isize) -> Term {
        self.shifted_above(0, delta)
    }

    /// Replace bound index `level` by `arg` (shifted into place) and close
    /// the gap: indices above `level` come down by one.
    fn open_at(&self, level: usize, arg: &Term) -> Term {
        match self {
            Term::Var(Var::Bound(i)) => {
                if *i == level {
                    arg.shifted(level as isize)
                } else if *i > level {
                    Term::bound(i - 1)
                } else {
                    self.clone()
                }
            }
            Term::Var(Var::Free(_)) | Term::Star | Term::Const(_) => self.clone(),
            Term::Lam(a, b) => Term::lam((**a).clone(), b.open_at(level + 1, arg)),
            Term::App(f, x) => Term::app(f.open_at(level, arg), x.open_at(level, arg)),
            Term::Pair(l, r) => Term::pair(l.open_at(level, arg), r.open_at(level, arg)),
            Term::Proj(w, m) => Term::proj(*w, m.open_at(level, arg)),
            Term::Ret(f, m) => Term::ret(*f, m.open_at(level, arg)),
            Term::Iota(m) => Term::iota(m.open_at(level, arg)),
            Term::Do(f, h, b) => Term::do_(*f, h.open_at(level, arg), b.open_at(level + 1, arg)),
        }
    }

    /// Substitute `replacement` for the named free variable.
    ///
    /// Capture cannot occur: bound binders are nameless, so a free name in
    /// `replacement` can never be captured by a binder in `self`.
    pub fn subst_free(&self, name: &str, replacement: &Term) -> Term {
        self.subst_free_at(0, name, replacement)
    }

    fn subst_free_at(&self, depth: usize, name: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(Var::Free(n)) if n == name => replacement.shifted(depth as isize),
            Term::Var(_) | Term::Star | Term::Const(_) => self.clone(),
            Term::Lam(a, b) => {
                Term::lam((**a).clone(), b.subst_free_at(depth + 1, name, replacement))
            }
            Term::App(f, x) => Term::app(
                f.subst_free_at(depth, name, replacement),
                x.subst_free_at(depth, name, replacement),
            ),
            Term::Pair(l, r) => Term::pair(
                l.subst_free_at(depth, name, replacement),
                r.subst_free_at(depth, name, replacement),
            ),
            Term::Proj(w, m) => Term::proj(*w, m.subst_free_at(depth, name, replacement)),
            Term::Ret(f, m) => Term::ret(*f, m.subst_free_at(depth, name, replacement)),
            Term::Iota(m) => Term::iota(m.subst_free_at(depth, name, replacement)),
            Term::Do(f, h, b) => Term::do_(
                *f,
                h.subst_free_at(depth, name, replacement),
                b.subst_free_at(depth + 1, name, replacement),
            ),
        }
    }

    /// Does bound index `index` (relative to the term's root) occur?
    pub fn uses_bound(&self, index: usize) -> bool {
        match self {
            Term::Var(Var::Bound(i)) => *i == index,
            Term::Var(Var::Free(_)) | Term::Star | Term::Const(_) => false,
            Term::Lam(_, b) => b.uses_bound(index + 1),
            Term::App(a, b) | Term::Pair(a, b) => a.uses_bound(index) || b.uses_bound(index),
            Term::Proj(_, m) | Term::Ret(_, m) | Term::Iota(m) => m.uses_bound(index),
            Term::Do(_, h, b) => h.uses_bound(index) || b.uses_bound(index + 1),
        }
    }

    /// Exchange bound indices 0 and 1 (used when two adjacent `do` bindings
    /// commute).
    pub fn swap_bound_01(&self) -> Term {
        self.swap_bound_at(0)
    }

    fn swap_bound_at(&self, depth: usize) -> Term {
        match self {
            Term::Var(Var::Bound(i)) => {
                if *i == depth {
                    Term::bound(depth + 1)
                } else if *i == depth + 1 {
                    Term::bound(depth)
                } else {
                    self.clone()
                }
            }
            Term::Var(Var::Free(_)) | Term::Star | Term::Const(_) => self.clone(),
            Term::Lam(a, b) => Term::lam((**a).clone(), b.swap_bound_at(depth + 1)),
            Term::App(f, x) => Term::app(f.swap_bound_at(depth), x.swap_bound_at(depth)),
            Term::Pair(l, r) => Term::pair(l.swap_bound_at(depth), r.swap_bound_at(depth)),
            Term::Proj(w, m) => Term::proj(*w, m.swap_bound_at(depth)),
            Term::Ret(f, m) => Term::ret(*f, m.swap_bound_at(depth)),
            Term::Iota(m) => Term::iota(m.swap_bound_at(depth)),
            Term::Do(f, h, b) => Term::do_(*f, h.swap_bound_at(depth), b.swap_bound_at(depth + 1)),
        }
    }

    /// Free (named) variables occurring anywhere in the term.
    pub fn free_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            Term::Var(Var::Bound(_)) | Term::Star => {}
            Term::Const(n) => {
                out.insert(n.clone());
            }
            Term::Lam(_, b) | Term::Proj(_, b) | Term::Ret(_, b) | Term::Iota(b) => {
                b.free_names(out)
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::Do(_, a, b) => {
                a.free_names(out);
                b.free_names(out);
            }
        }
    }

    /// Rewrite `Var(Free(n))` to `Const(n)` for every declared constant name.
    pub fn resolve_consts(&self, constants: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(Var::Free(n)) if constants.contains(n) => Term::constant(n.clone()),
            Term::Var(_) | Term::Star | Term::Const(_) => self.clone(),
            Term::Lam(a, b) => Term::lam((**a).clone(), b.resolve_consts(constants)),
            Term::App(f, x) => Term::app(f.resolve_consts(constants), x.resolve_consts(constants)),
            Term::Pair(l, r) => {
                Term::pair(l.resolve_consts(constants), r.resolve_consts(constants))
            }
            Term::Proj(w, m) => Term::proj(*w, m.resolve_consts(constants)),
            Term::Ret(f, m) => Term::ret(*f, m.resolve_consts(constants)),
            Term::Iota(m) => Term::iota(m.resolve_consts(constants)),
            Term::Do(f, h, b) => {
                Term::do_(*f, h.resolve_consts(constants), b.resolve_consts(constants))
            }
        }
    }
}

impl fmt::Display for Term {
    fmt_via_printer!(print_term);
}

/// Substitute `replacement` for the variable bound by the binder that
/// `body` sits directly under (de Bruijn index 0), closing the binder.
pub fn substitute(body: &Term, replacement: &Term) -> Term {
    body.open_at(0, replacement)
}

/// α-equivalence. The representation is nameless, so this is structural
/// equality; the function exists to make call sites say what they mean.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a == b
}

/// An ordered typing context of named variables with distinct names.
///
/// Lookup is by name, never by position, which makes weakening and exchange
/// admissible without explicit structural rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

/// Error raised when a context would bind the same name twice.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("duplicate context variable `{0}`")]
pub struct DuplicateName(pub String);

impl Context {
    pub fn empty() -> Context {
        Context::default()
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (String, Type)>,
    ) -> Result<Context, DuplicateName> {
        let mut ctx = Context::empty();
        for (name, ty) in pairs {
            ctx.push(name, ty)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Type) -> Result<(), DuplicateName> {
        let name = name.into();
        if self.lookup(&name).is_some() {
            return Err(DuplicateName(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (n, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(i: usize) -> Term {
        Term::bound(i)
    }

    #[test]
    fn substitute_closes_the_binder() {
        // body of (λx:1. x) applied to *
        assert_eq!(substitute(&b(0), &Term::Star), Term::Star);
        // index pointing past the binder comes down by one
        assert_eq!(substitute(&b(1), &Term::Star), b(0));
    }

    #[test]
    fn substitute_shifts_replacement_under_binders() {
        // body = λy:1. x  (x is index 1 under the inner binder);
        // substituting y0 for x must not leave y0 pointing at the inner binder.
        let body = Term::lam(Type::Unit, b(1));
        let got = substitute(&body, &b(3));
        assert_eq!(got, Term::lam(Type::Unit, b(4)));
    }

    #[test]
    fn subst_free_cannot_capture() {
        // (λ_:1. y)[y := index-0 reference] — the free name lands under a
        // binder and must be shifted past it.
        let term = Term::lam(Type::Unit, Term::free("y"));
        let got = term.subst_free("y", &b(0));
        assert_eq!(got, Term::lam(Type::Unit, b(1)));
    }

    #[test]
    fn swap_bound_exchanges_adjacent_binders_only() {
        let body = Term::pair(Term::pair(b(0), b(1)), b(2));
        let got = body.swap_bound_01();
        assert_eq!(got, Term::pair(Term::pair(b(1), b(0)), b(2)));
        // under an extra binder the swap targets shift along
        let under = Term::lam(Type::Unit, Term::pair(b(1), b(2)));
        assert_eq!(
            under.swap_bound_01(),
            Term::lam(Type::Unit, Term::pair(b(2), b(1)))
        );
    }

    #[test]
    fn uses_bound_tracks_depth() {
        let t = Term::do_(Flavour::T, b(0), Term::ret(Flavour::T, b(1)));
        assert!(t.uses_bound(0)); // head mentions it, body mentions it via index 1
        let t2 = Term::do_(Flavour::T, Term::free("m"), Term::ret(Flavour::T, b(0)));
        assert!(!t2.uses_bound(0)); // body's index 0 is the do-binder itself
    }

    #[test]
    fn context_rejects_shadowing_and_looks_up_by_name() {
        let mut ctx = Context::empty();
        ctx.push("x", Type::Unit).unwrap();
        assert!(ctx.push("x", Type::ground("G")).is_err());
        ctx.push("y", Type::ground("G")).unwrap();
        assert_eq!(ctx.lookup("y"), Some(&Type::ground("G")));
        assert_eq!(ctx.lookup("z"), None);
    }
}
