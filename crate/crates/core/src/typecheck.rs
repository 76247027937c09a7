//! Type inference and checking.
//!
//! Terms are fully annotated, so inference is syntax-directed; the theory's
//! type equality is consulted at every elimination (application, projection,
//! `iota`, `do`) so that a term of type `G` with a type axiom `G = A -> B`
//! can be applied. `check` is inference followed by one conversion test.

use crate::syntax::{Context, Flavour, Term, Type, Var};
use crate::theory::{Theory, UnknownGround};

/// Why a term failed to typecheck. Offending subterms are carried along and
/// rendered by the printer; a subterm that mentions binders outside itself
/// shows those as unparseable `?b` markers rather than inventing names.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("de Bruijn index {0} escapes the term")]
    DanglingIndex(usize),
    #[error("`{term}` has type {ty}, which is not a function type")]
    NotAFunction { term: Term, ty: Type },
    #[error("`{term}` has type {ty}, which is not a product type")]
    NotAProduct { term: Term, ty: Type },
    #[error("`{term}` has type {ty}, but a {expected}-computation is required")]
    NotMonadic {
        term: Term,
        ty: Type,
        expected: Flavour,
    },
    #[error("`iota` needs an S-computation, but `{term}` has type {ty}")]
    IotaExpectsS { term: Term, ty: Type },
    #[error("unknown constant `{0}`")]
    ConstantUnknown(String),
    #[error("`{term}` is a {found}-computation where a {expected}-computation is required")]
    FlavourMismatch {
        term: Term,
        expected: Flavour,
        found: Flavour,
    },
    #[error("unknown ground type `{0}`")]
    UnknownGround(String),
    #[error("`{term}` has type {found}, expected {expected}")]
    TypeMismatch {
        term: Term,
        expected: Type,
        found: Type,
    },
}

impl From<UnknownGround> for TypeError {
    fn from(e: UnknownGround) -> TypeError {
        TypeError::UnknownGround(e.0)
    }
}

/// Infer the type of `term` in `ctx` (named variables) under `th`.
pub fn infer(th: &Theory, ctx: &Context, term: &Term) -> Result<Type, TypeError> {
    Inferencer {
        th,
        ctx,
        binders: Vec::new(),
    }
    .infer(term)
}

/// Infer the type of a subterm that sits under already-entered binders:
/// `binders` lists their types outermost first, so a dangling de Bruijn
/// index in `term` resolves against it. Rewriting machinery uses this to
/// type subterms in place without reconstructing the enclosing term.
pub fn infer_with_binders(
    th: &Theory,
    ctx: &Context,
    binders: &[Type],
    term: &Term,
) -> Result<Type, TypeError> {
    Inferencer {
        th,
        ctx,
        binders: binders.to_vec(),
    }
    .infer(term)
}

/// Check `term` against `expected`, up to the theory's type equality.
pub fn check(th: &Theory, ctx: &Context, term: &Term, expected: &Type) -> Result<(), TypeError> {
    let found = infer(th, ctx, term)?;
    if th.type_equal(&found, expected)? {
        Ok(())
    } else {
        Err(TypeError::TypeMismatch {
            term: term.clone(),
            expected: expected.clone(),
            found,
        })
    }
}

struct Inferencer<'a> {
    th: &'a Theory,
    ctx: &'a Context,
    /// Types of enclosing binders, innermost last.
    binders: Vec<Type>,
}

impl Inferencer<'_> {
    fn infer(&mut self, term: &Term) -> Result<Type, TypeError> {
        match term {
            Term::Var(Var::Bound(i)) => {
                if *i < self.binders.len() {
                    Ok(self.binders[self.binders.len() - 1 - i].clone())
                } else {
                    Err(TypeError::DanglingIndex(*i))
                }
            }
            Term::Var(Var::Free(name)) => {
                // context first, then constants: a context variable may
                // shadow a constant of the same name
                if let Some(ty) = self.ctx.lookup(name) {
                    Ok(ty.clone())
                } else if let Some(ty) = self.th.constant_type(name) {
                    Ok(ty.clone())
                } else {
                    Err(TypeError::UnboundVariable(name.clone()))
                }
            }
            Term::Const(name) => self
                .th
                .constant_type(name)
                .cloned()
                .ok_or_else(|| TypeError::ConstantUnknown(name.clone())),
            Term::Star => Ok(Type::Unit),
            Term::Lam(annot, body) => {
                self.th.check_grounds(annot)?;
                self.binders.push((**annot).clone());
                let cod = self.infer(body);
                self.binders.pop();
                Ok(Type::arrow((**annot).clone(), cod?))
            }
            Term::App(fun, arg) => {
                let fun_ty = self.infer(fun)?;
                let Some((dom, cod)) = self.th.arrow_shape(&fun_ty)? else {
                    return Err(TypeError::NotAFunction {
                        term: (**fun).clone(),
                        ty: fun_ty,
                    });
                };
                let arg_ty = self.infer(arg)?;
                if !self.th.type_equal(&arg_ty, &dom)? {
                    return Err(TypeError::TypeMismatch {
                        term: (**arg).clone(),
                        expected: dom,
                        found: arg_ty,
                    });
                }
                Ok(cod)
            }
            Term::Pair(l, r) => Ok(Type::prod(self.infer(l)?, self.infer(r)?)),
            Term::Proj(which, of) => {
                let ty = self.infer(of)?;
                let Some((left, right)) = self.th.prod_shape(&ty)? else {
                    return Err(TypeError::NotAProduct {
                        term: (**of).clone(),
                        ty,
                    });
                };
                Ok(match which {
                    crate::syntax::Proj::Fst => left,
                    crate::syntax::Proj::Snd => right,
                })
            }
            Term::Ret(flavour, of) => Ok(Type::mon(*flavour, self.infer(of)?)),
            Term::Iota(of) => {
                let ty = self.infer(of)?;
                match self.th.mon_shape(&ty)? {
                    Some((Flavour::S, inner)) => Ok(Type::mon_t(inner)),
                    _ => Err(TypeError::IotaExpectsS {
                        term: (**of).clone(),
                        ty,
                    }),
                }
            }
            Term::Do(flavour, head, body) => {
                let head_ty = self.infer(head)?;
                let Some((head_flavour, elem_ty)) = self.th.mon_shape(&head_ty)? else {
                    return Err(TypeError::NotMonadic {
                        term: (**head).clone(),
                        ty: head_ty,
                        expected: *flavour,
                    });
                };
                if head_flavour != *flavour {
                    return Err(TypeError::FlavourMismatch {
                        term: (**head).clone(),
                        expected: *flavour,
                        found: head_flavour,
                    });
                }
                self.binders.push(elem_ty);
                let body_ty = self.infer(body);
                self.binders.pop();
                let body_ty = body_ty?;
                match self.th.mon_shape(&body_ty)? {
                    Some((body_flavour, _)) if body_flavour == *flavour => Ok(body_ty),
                    Some((body_flavour, _)) => Err(TypeError::FlavourMismatch {
                        term: (**body).clone(),
                        expected: *flavour,
                        found: body_flavour,
                    }),
                    None => Err(TypeError::NotMonadic {
                        term: (**body).clone(),
                        ty: body_ty,
                        expected: *flavour,
                    }),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_judgement, parse_term, parse_type};

    fn th() -> Theory {
        let mut th = Theory::new();
        th.add_ground("A").add_ground("B");
        th.add_constant("c", parse_type("A").unwrap());
        th.add_constant("k", parse_type("A -> B").unwrap());
        th
    }

    fn infer_str(th: &Theory, src: &str) -> Result<Type, TypeError> {
        let (ctx, t) = parse_judgement(src).unwrap();
        infer(th, &ctx, &t)
    }

    #[test]
    fn core_forms_infer() {
        let th = th();
        let cases = [
            ("*", "1"),
            ("\\x:A. x", "A -> A"),
            ("k c", "B"),
            ("[p : A * B] |- <snd p, fst p>", "B * A"),
            ("ret_S c", "S A"),
            ("iota (ret_S c)", "T A"),
            ("[m : S A] |- do_S x <- m; ret_S x", "S A"),
            ("[m : T A] |- do_T x <- m; ret_T (k x)", "T B"),
            ("[x : A, m : T B] |- do_T y <- m; ret_T <x, y>", "T (A * B)"),
        ];
        for (src, want) in cases {
            assert_eq!(
                infer_str(&th, src).unwrap(),
                parse_type(want).unwrap(),
                "inferring {src}"
            );
        }
    }

    #[test]
    fn context_shadows_constant() {
        let th = th();
        assert_eq!(
            infer_str(&th, "[c : B] |- c").unwrap(),
            parse_type("B").unwrap()
        );
    }

    #[test]
    fn conversion_applies_at_eliminations() {
        let mut th = th();
        th.add_ground("G");
        th.add_type_axiom(parse_type("G").unwrap(), parse_type("A -> B").unwrap());
        // f : G can be applied thanks to the axiom
        assert_eq!(
            infer_str(&th, "[f : G, x : A] |- f x").unwrap(),
            parse_type("B").unwrap()
        );
        // and a lambda checks against G
        check(
            &th,
            &Context::empty(),
            &parse_term("\\x:A. k x").unwrap(),
            &parse_type("G").unwrap(),
        )
        .unwrap();
    }

    #[test]
    fn each_failure_mode_has_its_error() {
        let th = th();
        assert!(matches!(
            infer_str(&th, "nope"),
            Err(TypeError::UnboundVariable(n)) if n == "nope"
        ));
        assert!(matches!(
            infer_str(&th, "c c"),
            Err(TypeError::NotAFunction { .. })
        ));
        assert!(matches!(
            infer_str(&th, "fst c"),
            Err(TypeError::NotAProduct { .. })
        ));
        assert!(matches!(
            infer_str(&th, "[m : T A] |- iota m"),
            Err(TypeError::IotaExpectsS { .. })
        ));
        assert!(matches!(
            infer_str(&th, "iota c"),
            Err(TypeError::IotaExpectsS { .. })
        ));
        assert!(matches!(
            infer_str(&th, "[m : T A] |- do_S x <- m; ret_S x"),
            Err(TypeError::FlavourMismatch { .. })
        ));
        assert!(matches!(
            infer_str(&th, "[m : S A] |- do_S x <- m; ret_T x"),
            Err(TypeError::FlavourMismatch { .. })
        ));
        assert!(matches!(
            infer_str(&th, "[m : S A] |- do_S x <- m; x"),
            Err(TypeError::NotMonadic { .. })
        ));
        assert!(matches!(
            infer_str(&th, "do_T x <- c; ret_T x"),
            Err(TypeError::NotMonadic { .. })
        ));
        assert!(matches!(
            infer_str(&th, "k *"),
            Err(TypeError::TypeMismatch { .. })
        ));
        assert!(matches!(
            check(
                &th,
                &Context::empty(),
                &parse_term("c").unwrap(),
                &parse_type("B").unwrap()
            ),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn lambda_annotations_must_use_declared_grounds() {
        let th = th();
        assert!(matches!(
            infer_str(&th, "\\x:Z. x"),
            Err(TypeError::UnknownGround(g)) if g == "Z"
        ));
    }
}
