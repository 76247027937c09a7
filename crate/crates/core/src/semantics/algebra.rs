//! Finite monoids and semirings given by explicit operation tables.

use std::fmt;

use super::fin::FinSet;

/// A violated algebraic law, with a concrete witness in labels.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{structure} `{name}` violates {law}: {witness}")]
pub struct AlgebraError {
    pub structure: &'static str,
    pub name: String,
    pub law: String,
    pub witness: String,
}

/// A finite monoid with a row-major multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMonoid {
    name: String,
    carrier: FinSet,
    unit: usize,
    /// `table[a * n + b]` is the product `a · b`.
    table: Vec<usize>,
}

impl FinMonoid {
    pub fn new(
        name: impl Into<String>,
        carrier: FinSet,
        unit: usize,
        table: Vec<usize>,
    ) -> Result<FinMonoid, AlgebraError> {
        let m = FinMonoid {
            name: name.into(),
            carrier,
            unit,
            table,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.carrier.size();
        let fail = |law: &str, witness: String| AlgebraError {
            structure: "monoid",
            name: self.name.clone(),
            law: law.to_string(),
            witness,
        };
        if self.table.len() != n * n {
            return Err(fail(
                "table shape",
                format!("expected {} entries, got {}", n * n, self.table.len()),
            ));
        }
        if self.unit >= n || self.table.iter().any(|&v| v >= n) {
            return Err(fail("closure", "entry out of range".to_string()));
        }
        for a in 0..n {
            if self.op(self.unit, a) != a || self.op(a, self.unit) != a {
                return Err(fail("unit law", self.carrier.label(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.op(self.op(a, b), c) != self.op(a, self.op(b, c)) {
                        return Err(fail(
                            "associativity",
                            format!(
                                "({}, {}, {})",
                                self.carrier.label(a),
                                self.carrier.label(b),
                                self.carrier.label(c)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.carrier.size() + b]
    }

    pub fn label(&self, a: usize) -> String {
        self.carrier.label(a)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.carrier.index_of_label(label)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (a + 1..n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Elements commuting with every element, in index order.
    pub fn centre_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&a| (0..n).all(|b| self.op(a, b) == self.op(b, a)))
            .collect()
    }

    /// Restrict to a subset of element indices; the subset must contain the
    /// unit and be closed under multiplication.
    pub fn submonoid(
        &self,
        name: impl Into<String>,
        subset: &[usize],
    ) -> Result<Submonoid, AlgebraError> {
        let name = name.into();
        let fail = |law: &str, witness: String| AlgebraError {
            structure: "submonoid",
            name: name.clone(),
            law: law.to_string(),
            witness,
        };
        let mut embed: Vec<usize> = subset.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.iter().any(|&v| v >= self.size()) {
            return Err(fail("closure", "element index out of range".to_string()));
        }
        let position = |v: usize| embed.iter().position(|&e| e == v);
        let unit = position(self.unit)
            .ok_or_else(|| fail("unit law", format!("unit {} missing", self.label(self.unit))))?;
        let k = embed.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &embed {
            for &b in &embed {
                let prod = self.op(a, b);
                match position(prod) {
                    Some(p) => table.push(p),
                    None => {
                        return Err(fail(
                            "closure",
                            format!(
                                "{} · {} = {} escapes the subset",
                                self.label(a),
                                self.label(b),
                                self.label(prod)
                            ),
                        ))
                    }
                }
            }
        }
        let carrier = FinSet::labeled(embed.iter().map(|&v| self.label(v)).collect());
        let monoid = FinMonoid {
            name,
            carrier,
            unit,
            table,
        };
        monoid.validate()?;
        Ok(Submonoid { monoid, embed })
    }

    /// The centre as a submonoid with its embedding.
    pub fn centre_submonoid(&self) -> Submonoid {
        self.submonoid(format!("Z({})", self.name), &self.centre_elements())
            .expect("the centre of a monoid is always a submonoid")
    }
}

impl fmt::Display for FinMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.carrier)
    }
}

/// A monoid embedded in a larger one; `embed[i]` is the parent index of
/// element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submonoid {
    pub monoid: FinMonoid,
    pub embed: Vec<usize>,
}

/// A finite semiring: commutative additive monoid, multiplicative monoid,
/// distributivity, and an absorbing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSemiring {
    name: String,
    carrier: FinSet,
    zero: usize,
    one: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl FinSemiring {
    pub fn new(
        name: impl Into<String>,
        carrier: FinSet,
        zero: usize,
        one: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
    ) -> Result<FinSemiring, AlgebraError> {
        let s = FinSemiring {
            name: name.into(),
            carrier,
            zero,
            one,
            add,
            mul,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.carrier.size();
        let fail = |law: &str, witness: String| AlgebraError {
            structure: "semiring",
            name: self.name.clone(),
            law: law.to_string(),
            witness,
        };
        let lab = |a: usize| self.carrier.label(a);
        if self.add.len() != n * n || self.mul.len() != n * n {
            return Err(fail("table shape", "wrong number of entries".to_string()));
        }
        if self.zero >= n
            || self.one >= n
            || self.add.iter().chain(self.mul.iter()).any(|&v| v >= n)
        {
            return Err(fail("closure", "entry out of range".to_string()));
        }
        for a in 0..n {
            if self.add(self.zero, a) != a || self.add(a, self.zero) != a {
                return Err(fail("additive unit", lab(a)));
            }
            if self.mul(self.one, a) != a || self.mul(a, self.one) != a {
                return Err(fail("multiplicative unit", lab(a)));
            }
            if self.mul(self.zero, a) != self.zero || self.mul(a, self.zero) != self.zero {
                return Err(fail("zero absorption", lab(a)));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(fail("additive commutativity", format!("({}, {})", lab(a), lab(b))));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(fail(
                            "additive associativity",
                            format!("({}, {}, {})", lab(a), lab(b), lab(c)),
                        ));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(fail(
                            "multiplicative associativity",
                            format!("({}, {}, {})", lab(a), lab(b), lab(c)),
                        ));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(fail(
                            "left distributivity",
                            format!("({}, {}, {})", lab(a), lab(b), lab(c)),
                        ));
                    }
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return Err(fail(
                            "right distributivity",
                            format!("({}, {}, {})", lab(a), lab(b), lab(c)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.carrier.size() + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.carrier.size() + b]
    }

    pub fn label(&self, a: usize) -> String {
        self.carrier.label(a)
    }

    /// Elements commuting multiplicatively with every element.
    pub fn centre_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }
}

impl fmt::Display for FinSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.carrier)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FinMonoid {
        let carrier = FinSet::labeled(vec!["0".into(), "1".into(), "2".into()]);
        let mut table = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                table.push((a + b) % 3);
            }
        }
        FinMonoid::new("Z3", carrier, 0, table).unwrap()
    }

    #[test]
    fn cyclic_monoid_is_commutative_with_full_centre() {
        let m = z3();
        assert!(m.is_commutative());
        assert_eq!(m.centre_elements(), vec![0, 1, 2]);
        assert_eq!(m.op(2, 2), 1);
    }

    #[test]
    fn bad_associativity_is_rejected() {
        // "subtraction mod 3" has a right unit only and is not associative
        let carrier = FinSet::of_size(3);
        let mut table = Vec::new();
        for a in 0i32..3 {
            for b in 0i32..3 {
                table.push(((a - b).rem_euclid(3)) as usize);
            }
        }
        let err = FinMonoid::new("sub3", carrier, 0, table).unwrap_err();
        assert!(err.law == "associativity" || err.law == "unit law");
    }

    #[test]
    fn submonoid_requires_closure_and_reindexes() {
        let m = z3();
        assert!(m.submonoid("bad", &[0, 1]).is_err()); // 1+1=2 escapes
        let sub = m.submonoid("trivial", &[0]).unwrap();
        assert_eq!(sub.monoid.size(), 1);
        assert_eq!(sub.embed, vec![0]);
        let full = m.submonoid("all", &[0, 1, 2]).unwrap();
        assert_eq!(full.monoid.op(2, 2), 1);
        assert_eq!(full.embed, vec![0, 1, 2]);
    }

    #[test]
    fn boolean_semiring_validates() {
        let carrier = FinSet::labeled(vec!["0".into(), "1".into()]);
        let s = FinSemiring::new(
            "bool",
            carrier,
            0,
            1,
            vec![0, 1, 1, 1], // or
            vec![0, 0, 0, 1], // and
        )
        .unwrap();
        assert_eq!(s.centre_elements(), vec![0, 1]);
        assert_eq!(s.add(1, 1), 1);
    }

    #[test]
    fn semiring_law_failure_is_reported() {
        // xor as addition is fine, but `or` has no multiplicative unit at 1
        // acting on 0, and it fails to distribute over xor either way.
        let err = FinSemiring::new(
            "broken",
            FinSet::of_size(2),
            0,
            1,
            vec![0, 1, 1, 0], // xor
            vec![0, 1, 1, 1], // or
        )
        .unwrap_err();
        assert_eq!(err.structure, "semiring");
    }
}
