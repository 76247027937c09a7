//! Type equality by congruence closure.
//!
//! The universe is the subterm closure of the queried types plus every
//! declared type-axiom side (ground equations only, so this is complete).
//! Union-find plus upward congruence propagation until fixpoint; universes
//! are tiny, so the quadratic pass is never a concern.

use super::Theory;
use crate::syntax::{Flavour, Type};
use std::collections::BTreeMap;

/// A queried type mentions a ground type the theory never declared.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown ground type `{0}`")]
pub struct UnknownGround(pub String);

impl Theory {
    /// Is every ground type in `ty` declared?
    pub fn check_grounds(&self, ty: &Type) -> Result<(), UnknownGround> {
        let mut names = std::collections::BTreeSet::new();
        ty.ground_names(&mut names);
        for name in names {
            if !self.has_ground(&name) {
                return Err(UnknownGround(name));
            }
        }
        Ok(())
    }

    /// Decide `a = b` under the theory's type axioms.
    pub fn type_equal(&self, a: &Type, b: &Type) -> Result<bool, UnknownGround> {
        self.check_grounds(a)?;
        self.check_grounds(b)?;
        if a == b {
            return Ok(true);
        }
        if self.type_axioms().is_empty() {
            return Ok(false);
        }
        let mut cc = Congruence::build(&[a, b], self.type_axioms());
        Ok(cc.same(a, b))
    }

    /// Does `ty` equal the unit type?
    pub fn is_unit_type(&self, ty: &Type) -> Result<bool, UnknownGround> {
        self.type_equal(ty, &Type::Unit)
    }

    /// View `ty` as a function type, through the type axioms if necessary.
    /// Deterministic: among several arrow types in the equivalence class the
    /// least is chosen.
    pub fn arrow_shape(&self, ty: &Type) -> Result<Option<(Type, Type)>, UnknownGround> {
        if let Type::Arrow(d, c) = ty {
            return Ok(Some(((**d).clone(), (**c).clone())));
        }
        Ok(self.class_member(ty, |t| matches!(t, Type::Arrow(..)))?.map(|t| match t {
            Type::Arrow(d, c) => (*d, *c),
            _ => unreachable!(),
        }))
    }

    /// View `ty` as a product type.
    pub fn prod_shape(&self, ty: &Type) -> Result<Option<(Type, Type)>, UnknownGround> {
        if let Type::Prod(l, r) = ty {
            return Ok(Some(((**l).clone(), (**r).clone())));
        }
        Ok(self.class_member(ty, |t| matches!(t, Type::Prod(..)))?.map(|t| match t {
            Type::Prod(l, r) => (*l, *r),
            _ => unreachable!(),
        }))
    }

    /// View `ty` as a monadic type of either flavour.
    pub fn mon_shape(&self, ty: &Type) -> Result<Option<(Flavour, Type)>, UnknownGround> {
        if let Type::Mon(f, a) = ty {
            return Ok(Some((*f, (**a).clone())));
        }
        Ok(self.class_member(ty, |t| matches!(t, Type::Mon(..)))?.map(|t| match t {
            Type::Mon(f, a) => (f, *a),
            _ => unreachable!(),
        }))
    }

    fn class_member(
        &self,
        ty: &Type,
        want: impl Fn(&Type) -> bool,
    ) -> Result<Option<Type>, UnknownGround> {
        self.check_grounds(ty)?;
        if self.type_axioms().is_empty() {
            return Ok(None);
        }
        let mut cc = Congruence::build(&[ty], self.type_axioms());
        let mut members = cc.class_of(ty);
        members.retain(|t| want(t));
        members.sort();
        Ok(members.into_iter().next())
    }
}

struct Congruence {
    ids: BTreeMap<Type, usize>,
    nodes: Vec<Type>,
    parent: Vec<usize>,
}

impl Congruence {
    fn build(queries: &[&Type], axioms: &[(Type, Type)]) -> Congruence {
        let mut cc = Congruence {
            ids: BTreeMap::new(),
            nodes: Vec::new(),
            parent: Vec::new(),
        };
        for q in queries {
            cc.add(q);
        }
        for (l, r) in axioms {
            cc.add(l);
            cc.add(r);
        }
        for (l, r) in axioms {
            let (a, b) = (cc.ids[l], cc.ids[r]);
            cc.union(a, b);
        }
        cc.close();
        cc
    }

    fn add(&mut self, ty: &Type) {
        let mut subs = Vec::new();
        ty.subterms(&mut subs);
        for s in subs {
            if !self.ids.contains_key(&s) {
                let id = self.nodes.len();
                self.ids.insert(s.clone(), id);
                self.nodes.push(s);
                self.parent.push(id);
            }
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }

    /// Upward congruence: merge any two universe nodes whose head
    /// constructors agree and whose children are already equal.
    fn close(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                for j in (i + 1)..self.nodes.len() {
                    if self.find(i) == self.find(j) {
                        continue;
                    }
                    if self.congruent(i, j) {
                        self.union(i, j);
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn congruent(&mut self, i: usize, j: usize) -> bool {
        let (a, b) = (self.nodes[i].clone(), self.nodes[j].clone());
        match (&a, &b) {
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2))
            | (Type::Prod(a1, b1), Type::Prod(a2, b2)) => {
                let (x1, y1) = (self.ids[&**a1], self.ids[&**b1]);
                let (x2, y2) = (self.ids[&**a2], self.ids[&**b2]);
                self.find(x1) == self.find(x2) && self.find(y1) == self.find(y2)
            }
            (Type::Mon(f1, a1), Type::Mon(f2, a2)) => {
                f1 == f2 && {
                    let (x1, x2) = (self.ids[&**a1], self.ids[&**a2]);
                    self.find(x1) == self.find(x2)
                }
            }
            _ => false, // atoms only merge through axioms
        }
    }

    fn same(&mut self, a: &Type, b: &Type) -> bool {
        let (i, j) = (self.ids[a], self.ids[b]);
        self.find(i) == self.find(j)
    }

    fn class_of(&mut self, ty: &Type) -> Vec<Type> {
        let root = {
            let i = self.ids[ty];
            self.find(i)
        };
        let mut members = Vec::new();
        for i in 0..self.nodes.len() {
            if self.find(i) == root {
                members.push(self.nodes[i].clone());
            }
        }
        members
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn th_with(axioms: &[(&str, &str)], grounds: &[&str]) -> Theory {
        let mut th = Theory::new();
        for g in grounds {
            th.add_ground(*g);
        }
        for (l, r) in axioms {
            th.add_type_axiom(parse_type(l).unwrap(), parse_type(r).unwrap());
        }
        th
    }

    fn eq(th: &Theory, a: &str, b: &str) -> bool {
        th.type_equal(&parse_type(a).unwrap(), &parse_type(b).unwrap())
            .unwrap()
    }

    #[test]
    fn no_axioms_means_structural_equality() {
        let th = th_with(&[], &["A"]);
        assert!(eq(&th, "S A", "S A"));
        assert!(!eq(&th, "S A", "T A"));
        assert!(!eq(&th, "A -> A", "A"));
    }

    #[test]
    fn axioms_propagate_through_constructors() {
        let th = th_with(&[("G", "1")], &["G"]);
        assert!(eq(&th, "G", "1"));
        assert!(eq(&th, "S G -> G", "S 1 -> 1"));
        assert!(eq(&th, "T (G * G)", "T (1 * 1)"));
        assert!(!eq(&th, "S G", "T 1"));
    }

    #[test]
    fn equality_is_transitive_across_axioms() {
        let th = th_with(&[("G", "H"), ("H", "K")], &["G", "H", "K"]);
        assert!(eq(&th, "G", "K"));
        assert!(eq(&th, "K -> G", "H -> H"));
    }

    #[test]
    fn no_constructor_inversion() {
        // A -> B = C -> D as an axiom must not leak A = C.
        let th = th_with(&[("A -> B", "C -> D")], &["A", "B", "C", "D"]);
        assert!(eq(&th, "A -> B", "C -> D"));
        assert!(!eq(&th, "A", "C"));
        assert!(!eq(&th, "B", "D"));
    }

    #[test]
    fn unknown_grounds_are_an_error_not_false() {
        let th = th_with(&[], &["A"]);
        let err = th
            .type_equal(&parse_type("A").unwrap(), &parse_type("Z").unwrap())
            .unwrap_err();
        assert_eq!(err, UnknownGround("Z".into()));
    }

    #[test]
    fn shapes_see_through_axioms() {
        let th = th_with(&[("G", "A -> B"), ("H", "S 1")], &["G", "A", "B", "H"]);
        let (d, c) = th.arrow_shape(&parse_type("G").unwrap()).unwrap().unwrap();
        assert_eq!((d, c), (parse_type("A").unwrap(), parse_type("B").unwrap()));
        let (f, inner) = th.mon_shape(&parse_type("H").unwrap()).unwrap().unwrap();
        assert_eq!(f, Flavour::S);
        assert_eq!(inner, Type::Unit);
        assert!(th.prod_shape(&parse_type("G").unwrap()).unwrap().is_none());
        assert!(th.is_unit_type(&parse_type("1").unwrap()).unwrap());
    }
}
