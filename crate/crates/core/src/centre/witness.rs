//! Kleisli-level consistency checks and the dihedral counterexample.

use std::fmt;

use crate::semantics::{
    decode_table, guard_size, sat_pow, FinMonoid, FinSet, SizeBlowup, Submonoid,
};

use super::{centre_at, is_central_element, FiniteMonad, WriterMonad};

/// Result of enumerating every Kleisli morphism `X → T Y` and classifying
/// it twice: by elementwise centrality, and by whether its image lies in
/// the computed centre carrier at `Y`. The two classifications must agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub monad: String,
    pub x_size: usize,
    pub y_size: usize,
    pub kleisli_count: usize,
    pub central_count: usize,
    pub factoring_count: usize,
    pub mismatches: Vec<String>,
}

impl IsoReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for IsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} Kleisli morphisms {} → T {}; {} central, {} factor through the centre",
            self.monad,
            self.kleisli_count,
            self.x_size,
            self.y_size,
            self.central_count,
            self.factoring_count
        )?;
        if self.consistent() {
            write!(f, "the two classifications agree")
        } else {
            for m in &self.mismatches {
                writeln!(f, "MISMATCH: {m}")?;
            }
            write!(f, "{} mismatches", self.mismatches.len())
        }
    }
}

/// Enumerate all Kleisli morphisms `X → T Y` and cross-check centrality
/// against factorisation through the centre inclusion at `Y`.
pub fn verify_centre_iso(
    m: &dyn FiniteMonad,
    x: &FinSet,
    y: &FinSet,
    test_sizes: &[usize],
) -> Result<IsoReport, SizeBlowup> {
    let ty = m.carrier(y)?;
    let count = guard_size(sat_pow(ty.size(), x.size()), m.size_cap())?;
    let centre_y = centre_at(m, y, test_sizes)?;
    // Elementwise centrality, derived independently of `centre_y`'s carrier.
    let mut element_central = Vec::with_capacity(ty.size());
    for t in ty.elements() {
        element_central.push(is_central_element(m, y, t, test_sizes)?);
    }
    let mut central_count = 0;
    let mut factoring_count = 0;
    let mut mismatches = Vec::new();
    for f_idx in 0..count {
        let f = decode_table(x.size(), ty.size(), f_idx);
        let central = f.iter().all(|&t| element_central[t]);
        let factors = f.iter().all(|&t| centre_y.contains(t));
        if central {
            central_count += 1;
        }
        if factors {
            factoring_count += 1;
        }
        if central != factors {
            let values: Vec<String> = f.iter().map(|&t| ty.label(t)).collect();
            mismatches.push(format!(
                "morphism [{}] is {} but {} through the centre",
                values.join(", "),
                if central { "central" } else { "not central" },
                if factors { "factors" } else { "does not factor" },
            ));
        }
    }
    Ok(IsoReport {
        monad: m.name(),
        x_size: x.size(),
        y_size: y.size(),
        kleisli_count: count,
        central_count,
        factoring_count,
        mismatches,
    })
}

/// A commutative-but-not-central submonoid, reported alongside the counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmonoidRemark {
    pub name: String,
    pub commutative: bool,
    pub central_in_parent: bool,
    pub witness: Option<String>,
}

/// The counterexample shape: counts of Kleisli endomorphisms of the
/// one-element set in a writer monad, split into all vs central.
///
/// For a dihedral monoid the central count is not a power of the monoid
/// size, so no sub-writer monad of the same shape can carve out exactly
/// the central morphisms; and a commutative submonoid (the rotations) is
/// still not central, so commutativity of a candidate submonad is not
/// enough either.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralEndoReport {
    pub monoid: String,
    pub monoid_size: usize,
    pub centre_labels: Vec<String>,
    pub kleisli_endos: usize,
    pub central_endos: usize,
    pub central_is_power_of_monoid_size: bool,
    pub submonoid_remark: Option<SubmonoidRemark>,
}

impl fmt::Display for CentralEndoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "monoid {} has {} elements; centre = {{{}}}",
            self.monoid,
            self.monoid_size,
            self.centre_labels.join(", ")
        )?;
        writeln!(
            f,
            "writer Kleisli endomorphisms of 1: {} total, {} central",
            self.kleisli_endos, self.central_endos
        )?;
        writeln!(
            f,
            "{} is {}a power of {}, so no writer-shaped submonad has exactly the central morphisms",
            self.central_endos,
            if self.central_is_power_of_monoid_size {
                ""
            } else {
                "not "
            },
            self.monoid_size
        )?;
        if let Some(r) = &self.submonoid_remark {
            write!(
                f,
                "submonoid {}: commutative = {}, central in the parent = {}",
                r.name, r.commutative, r.central_in_parent
            )?;
            if let Some(w) = &r.witness {
                write!(f, " ({w})")?;
            }
        }
        Ok(())
    }
}

fn is_power_of(n: usize, base: usize) -> bool {
    if n == 1 {
        return true;
    }
    if base <= 1 {
        return n == base;
    }
    let mut acc = 1usize;
    while acc < n {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return false,
        };
    }
    acc == n
}

/// Count and classify the writer Kleisli endomorphisms of the one-element
/// set, with an optional remark on a submonoid of interest.
pub fn central_endo_report(
    monoid: &FinMonoid,
    remark: Option<&Submonoid>,
    test_sizes: &[usize],
) -> Result<CentralEndoReport, SizeBlowup> {
    let writer = WriterMonad::new(monoid.clone());
    let one = FinSet::unit();
    let centre = centre_at(&writer, &one, test_sizes)?;
    let kleisli_endos = writer.carrier(&one)?.size();
    let central_endos = centre.size();
    let centre_labels = monoid
        .centre_elements()
        .iter()
        .map(|&v| monoid.label(v))
        .collect();
    let submonoid_remark = remark.map(|sub| {
        let monoid_centre = monoid.centre_elements();
        let stray = sub
            .embed
            .iter()
            .find(|v| !monoid_centre.contains(v))
            .copied();
        let witness = stray.and_then(|s| {
            (0..monoid.size())
                .find(|&m0| monoid.op(s, m0) != monoid.op(m0, s))
                .map(|m0| {
                    format!(
                        "{}·{} = {} but {}·{} = {}",
                        monoid.label(s),
                        monoid.label(m0),
                        monoid.label(monoid.op(s, m0)),
                        monoid.label(m0),
                        monoid.label(s),
                        monoid.label(monoid.op(m0, s)),
                    )
                })
        });
        SubmonoidRemark {
            name: sub.monoid.name().to_string(),
            commutative: sub.monoid.is_commutative(),
            central_in_parent: stray.is_none(),
            witness,
        }
    });
    Ok(CentralEndoReport {
        monoid: monoid.name().to_string(),
        monoid_size: monoid.size(),
        centre_labels,
        kleisli_endos,
        central_endos,
        central_is_power_of_monoid_size: is_power_of(central_endos, monoid.size()),
        submonoid_remark,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FinMonoid {
        let carrier = FinSet::labeled(vec!["e".into(), "g".into()]);
        FinMonoid::new("Z2", carrier, 0, vec![0, 1, 1, 0]).unwrap()
    }

    #[test]
    fn commutative_writer_iso_is_total() {
        let w = WriterMonad::new(z2());
        let x = FinSet::of_size(2);
        let y = FinSet::of_size(1);
        let r = verify_centre_iso(&w, &x, &y, &[1, 2]).unwrap();
        assert_eq!(r.kleisli_count, 4); // |T1|^2 = 2^2
        assert_eq!(r.central_count, 4);
        assert_eq!(r.factoring_count, 4);
        assert!(r.consistent());
    }

    #[test]
    fn power_detection() {
        assert!(is_power_of(1, 8));
        assert!(is_power_of(8, 8));
        assert!(is_power_of(64, 8));
        assert!(!is_power_of(2, 8));
        assert!(!is_power_of(0, 8));
    }

    #[test]
    fn commutative_monoid_report_is_unremarkable() {
        let m = z2();
        let full = m.submonoid("self", &[0, 1]).unwrap();
        let r = central_endo_report(&m, Some(&full), &[1, 2]).unwrap();
        assert_eq!(r.kleisli_endos, 2);
        assert_eq!(r.central_endos, 2);
        assert!(r.central_is_power_of_monoid_size);
        let remark = r.submonoid_remark.unwrap();
        assert!(remark.commutative && remark.central_in_parent);
        assert!(remark.witness.is_none());
    }
}
