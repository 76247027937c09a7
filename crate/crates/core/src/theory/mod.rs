//! Equational theories: declared ground types, type-equality axioms,
//! typed constants, and equational term axioms, together with the decision
//! procedure for type equality.
//!
//! Type equality is the congruence closure of the declared type axioms: the
//! axioms are ground equations (no type variables), so closure over the
//! finite subterm universe of the two queried types plus every axiom side is
//! a complete decision procedure. No inversion is assumed: `A -> B = A' -> B'`
//! does not force `A = A'`, matching a deduction system with congruence
//! rules only.

mod file;
mod translate;
mod typeeq;

pub use file::{parse_term_file, parse_theory, TheoryLoadError};
pub use translate::*;
pub use typeeq::UnknownGround;

use crate::syntax::{print_term_in, Context, Term, Type};
use crate::typecheck::TypeError;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One equational axiom: `context |- lhs = rhs : ty`.
///
/// The context's variables act as typed metavariables when the axiom is used
/// as a bridge by the equality search: an instance substitutes a well-typed
/// term of (a type equal to) the declared type for each one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub context: Context,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Type,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let avoid: BTreeSet<String> = self.context.names().map(|s| s.to_string()).collect();
        write!(
            f,
            "{} |- {} = {} : {}",
            self.context,
            print_term_in(&self.lhs, &avoid),
            print_term_in(&self.rhs, &avoid),
            self.ty
        )
    }
}

/// A theory: the ambient signature every other module works against.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    grounds: BTreeSet<String>,
    type_axioms: Vec<(Type, Type)>,
    constants: BTreeMap<String, Type>,
    term_axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new() -> Theory {
        Theory::default()
    }

    /// Declare a ground type. Re-declaring is a no-op.
    pub fn add_ground(&mut self, name: impl Into<String>) -> &mut Self {
        self.grounds.insert(name.into());
        self
    }

    /// Declare a type-equality axiom `left = right`.
    pub fn add_type_axiom(&mut self, left: Type, right: Type) -> &mut Self {
        self.type_axioms.push((left, right));
        self
    }

    /// Declare a constant. Re-declaring replaces the previous type.
    pub fn add_constant(&mut self, name: impl Into<String>, ty: Type) -> &mut Self {
        self.constants.insert(name.into(), ty);
        self
    }

    /// Add a term axiom. Free names matching constants declared *so far*
    /// are resolved to constant references in both sides.
    pub fn add_axiom(&mut self, axiom: Axiom) -> &mut Self {
        let consts = self.constant_names();
        self.term_axioms.push(Axiom {
            lhs: axiom.lhs.resolve_consts(&consts),
            rhs: axiom.rhs.resolve_consts(&consts),
            ..axiom
        });
        self
    }

    pub fn grounds(&self) -> impl Iterator<Item = &str> {
        self.grounds.iter().map(|s| s.as_str())
    }

    pub fn has_ground(&self, name: &str) -> bool {
        self.grounds.contains(name)
    }

    pub fn type_axioms(&self) -> &[(Type, Type)] {
        &self.type_axioms
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.constants.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn constant_type(&self, name: &str) -> Option<&Type> {
        self.constants.get(name)
    }

    pub fn constant_names(&self) -> BTreeSet<String> {
        self.constants.keys().cloned().collect()
    }

    pub fn term_axioms(&self) -> &[Axiom] {
        &self.term_axioms
    }

    /// Full well-formedness check; returns every problem found rather than
    /// stopping at the first.
    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        for g in &self.grounds {
            if crate::syntax::is_reserved_name(g) {
                diags.push(Diagnostic::ReservedName(g.clone()));
            }
        }
        for (index, (l, r)) in self.type_axioms.iter().enumerate() {
            for side in [l, r] {
                for ground in undeclared_grounds(side, &self.grounds) {
                    diags.push(Diagnostic::UnknownGroundInTypeAxiom { index, ground });
                }
            }
        }
        for (name, ty) in &self.constants {
            if crate::syntax::is_reserved_name(name) {
                diags.push(Diagnostic::ReservedName(name.clone()));
            }
            for ground in undeclared_grounds(ty, &self.grounds) {
                diags.push(Diagnostic::UnknownGroundInConstant {
                    name: name.clone(),
                    ground,
                });
            }
        }
        for (index, axiom) in self.term_axioms.iter().enumerate() {
            let mut grounds_ok = true;
            let mut mentioned: Vec<&Type> = vec![&axiom.ty];
            mentioned.extend(axiom.context.iter().map(|(_, t)| t));
            for ty in mentioned {
                for ground in undeclared_grounds(ty, &self.grounds) {
                    grounds_ok = false;
                    diags.push(Diagnostic::UnknownGroundInAxiom { index, ground });
                }
            }
            if !grounds_ok {
                continue; // type errors below would just be noise
            }
            for (side, term) in [("left", &axiom.lhs), ("right", &axiom.rhs)] {
                if let Err(error) = crate::typecheck::check(self, &axiom.context, term, &axiom.ty)
                {
                    diags.push(Diagnostic::IllTypedAxiom { index, side, error });
                }
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }
}

fn undeclared_grounds(ty: &Type, declared: &BTreeSet<String>) -> Vec<String> {
    let mut names = BTreeSet::new();
    ty.ground_names(&mut names);
    names.into_iter().filter(|g| !declared.contains(g)).collect()
}

/// Validation diagnostics, one per independent problem.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Diagnostic {
    #[error("`{0}` is reserved and cannot be declared")]
    ReservedName(String),
    #[error("type axiom #{index} mentions undeclared ground type `{ground}`")]
    UnknownGroundInTypeAxiom { index: usize, ground: String },
    #[error("constant `{name}` mentions undeclared ground type `{ground}`")]
    UnknownGroundInConstant { name: String, ground: String },
    #[error("term axiom #{index} mentions undeclared ground type `{ground}`")]
    UnknownGroundInAxiom { index: usize, ground: String },
    #[error("term axiom #{index} is ill-typed on the {side} side: {error}")]
    IllTypedAxiom {
        index: usize,
        side: &'static str,
        error: TypeError,
    },
}

/// Free-function form of [`Theory::validate`].
pub fn validate_theory(th: &Theory) -> Result<(), Vec<Diagnostic>> {
    th.validate()
}

/// Free-function form of [`Theory::type_equal`].
pub fn type_equal(th: &Theory, a: &Type, b: &Type) -> Result<bool, UnknownGround> {
    th.type_equal(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_judgement, parse_term, parse_type, Term};

    fn axiom(src: &str) -> Axiom {
        // "ctx |- lhs = rhs : ty" written as two judgement parses for brevity
        let (head, ty) = src.rsplit_once(" : ").unwrap();
        let (lhs_part, rhs) = head.split_once(" = ").unwrap();
        let (context, lhs) = parse_judgement(lhs_part).unwrap();
        Axiom {
            context,
            lhs,
            rhs: parse_term(rhs).unwrap(),
            ty: parse_type(ty).unwrap(),
        }
    }

    #[test]
    fn validate_accepts_a_small_writer_style_theory() {
        let mut th = Theory::new();
        th.add_ground("G");
        th.add_constant("act_a", parse_type("T 1").unwrap());
        th.add_constant("act_e", parse_type("T 1").unwrap());
        th.add_axiom(axiom(
            "[m : T 1] |- do_T * <- act_e; m = m : T 1",
        ));
        assert_eq!(th.validate(), Ok(()));
        // constants got resolved inside the stored axiom
        let ax = &th.term_axioms()[0];
        assert!(matches!(
            ax.lhs,
            Term::Do(_, ref h, _) if **h == Term::constant("act_e")
        ));
    }

    #[test]
    fn validate_reports_every_problem() {
        let mut th = Theory::new();
        th.add_type_axiom(parse_type("G").unwrap(), Type::Unit);
        th.add_constant("c", parse_type("H -> H").unwrap());
        th.add_axiom(axiom("[x : 1] |- x = * * : 1")); // rhs ill-typed
        let diags = th.validate().unwrap_err();
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::UnknownGroundInTypeAxiom { ground, .. } if ground == "G")));
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::UnknownGroundInConstant { ground, .. } if ground == "H")));
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::IllTypedAxiom { side: "right", .. })));
    }
}
