//! Centres of finite strong monads.
//!
//! A monad here is given *element-wise*: carriers are enumerable sets of
//! indices and `bind` works on single elements, so monads whose iterated
//! carriers explode (double continuation, large semirings) can still be
//! probed at small objects without materialising any table that does not
//! fit the size cap.
//!
//! An element `t` of `T X` is **central** when for every test object `Y`
//! and every `s` in `T Y`, sequencing `t` before `s` and `s` before `t`
//! produce the same element of `T (X×Y)`. The literal definition
//! quantifies over *all* sets `Y`; we check a finite family of test sizes
//! and report a stability flag (the result did not change when the largest
//! test size was dropped). For writer monads size 1 is already decisive;
//! for the general case stability is evidence, not proof.

mod laws;
mod monads;
mod witness;

pub use laws::{check_monad_laws, LawEntry, LawReport, LawStatus, LAW_ENUMERATION_CAP};
pub use monads::{
    CentreSubmonad, ContinuationMonad, CorruptedMonad, EtaInclusion, IdentityMonad, ListMonad,
    SemiringMonad, WriterInclusion, WriterMonad,
};
pub use witness::{central_endo_report, verify_centre_iso, CentralEndoReport, IsoReport};

use std::fmt;

use crate::semantics::{pair_index, product, FinFunction, FinSet, SizeBlowup};

/// A strong monad on finite sets, presented element-wise.
///
/// Elements of `T X` are indices into `carrier(X)`; the indexing scheme is
/// the monad's own and opaque to callers. `eta` and `bind` may assume that
/// the carriers of every set they are handed fit the cap (callers obtain
/// element indices through `carrier` first).
pub trait FiniteMonad: Send + Sync {
    fn name(&self) -> String;

    /// All carriers and intermediate tables are refused beyond this cap.
    fn size_cap(&self) -> usize;

    /// The carrier of `T X`, with display labels when cheap to produce.
    fn carrier(&self, x: &FinSet) -> Result<FinSet, SizeBlowup>;

    /// The unit `X → T X` on one element.
    fn eta(&self, x: &FinSet, v: usize) -> usize;

    /// Kleisli extension: `bind(t, k)` for `t ∈ T dom` and `k : dom → T cod`.
    /// The continuation receives an element of `dom` and must return an
    /// element of `T cod`.
    fn bind(&self, dom: &FinSet, cod: &FinSet, t: usize, k: &mut dyn FnMut(usize) -> usize)
        -> usize;

    /// Functorial action on an explicit value table (derived from `bind`).
    fn map(&self, dom: &FinSet, cod: &FinSet, f: &[usize], t: usize) -> usize {
        self.bind(dom, cod, t, &mut |v| self.eta(cod, f[v]))
    }

    /// Strength `X × T Y → T (X×Y)` on one pair, where `xy` is the product
    /// carrier with row-major pairing.
    fn tau(&self, y: &FinSet, xy: &FinSet, a: usize, t: usize) -> usize {
        self.bind(y, xy, t, &mut |b| self.eta(xy, pair_index(y.size(), a, b)))
    }
}

/// `t ∈ T X` sequenced before `s ∈ T Y`, landing in `T (X×Y)`.
pub fn seq_lr(
    m: &dyn FiniteMonad,
    x: &FinSet,
    y: &FinSet,
    xy: &FinSet,
    t: usize,
    s: usize,
) -> usize {
    m.bind(x, xy, t, &mut |a| {
        m.bind(y, xy, s, &mut |b| m.eta(xy, pair_index(y.size(), a, b)))
    })
}

/// `s ∈ T Y` sequenced before `t ∈ T X`, landing in the same `T (X×Y)`.
pub fn seq_rl(
    m: &dyn FiniteMonad,
    x: &FinSet,
    y: &FinSet,
    xy: &FinSet,
    t: usize,
    s: usize,
) -> usize {
    m.bind(y, xy, s, &mut |b| {
        m.bind(x, xy, t, &mut |a| m.eta(xy, pair_index(y.size(), a, b)))
    })
}

/// Is `t ∈ T X` central with respect to the given family of test sizes?
pub fn is_central_element(
    m: &dyn FiniteMonad,
    x: &FinSet,
    t: usize,
    test_sizes: &[usize],
) -> Result<bool, SizeBlowup> {
    for &n in test_sizes {
        let y = FinSet::of_size(n);
        let ty = m.carrier(&y)?;
        let xy = product(x, &y, m.size_cap())?;
        m.carrier(&xy)?;
        for s in ty.elements() {
            if seq_lr(m, x, &y, &xy, t, s) != seq_rl(m, x, &y, &xy, t, s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Is every element of the family central? The values are elements of
/// `T target` (for a morphism `X → T target`, pass its value table).
pub fn is_central_morphism(
    m: &dyn FiniteMonad,
    target: &FinSet,
    values: &[usize],
    test_sizes: &[usize],
) -> Result<bool, SizeBlowup> {
    for &t in values {
        if !is_central_element(m, target, t, test_sizes)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The centre of `T` at one object, as computed against a test family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreResult {
    /// The base object `X`.
    pub base: FinSet,
    /// The full carrier of `T X`.
    pub ambient: FinSet,
    /// The central elements, as sorted indices into `ambient`.
    pub central: Vec<usize>,
    /// Test sizes used, sorted and deduplicated.
    pub test_sizes: Vec<usize>,
    /// True when dropping the largest test size leaves `central` unchanged.
    pub stable: bool,
}

impl CentreResult {
    pub fn size(&self) -> usize {
        self.central.len()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.central.binary_search(&t).is_ok()
    }

    /// The centre as a labelled set of its own.
    pub fn carrier(&self) -> FinSet {
        if self.ambient.has_labels() {
            FinSet::labeled(self.central.iter().map(|&t| self.ambient.label(t)).collect())
        } else {
            FinSet::of_size(self.central.len())
        }
    }

    /// The inclusion of the centre into `T X`.
    pub fn inclusion(&self) -> FinFunction {
        FinFunction::new(self.carrier(), self.ambient.clone(), self.central.clone())
    }

    pub fn labels(&self) -> Vec<String> {
        self.central.iter().map(|&t| self.ambient.label(t)).collect()
    }
}

impl fmt::Display for CentreResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "centre at X={} holds {} of {} elements (test sizes {:?}, {})",
            self.base.size(),
            self.central.len(),
            self.ambient.size(),
            self.test_sizes,
            if self.stable { "stable" } else { "unstable" }
        )
    }
}

/// Compute the centre of `T` at `X` against a family of test sizes.
pub fn centre_at(
    m: &dyn FiniteMonad,
    x: &FinSet,
    test_sizes: &[usize],
) -> Result<CentreResult, SizeBlowup> {
    let mut sizes: Vec<usize> = test_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let ambient = m.carrier(x)?;

    // Survivors per test size, so the stability comparison reuses the work.
    let mut central: Vec<usize> = ambient.elements().collect();
    let mut before_largest: Option<Vec<usize>> = None;
    for (i, &n) in sizes.iter().enumerate() {
        if i == sizes.len() - 1 {
            before_largest = Some(central.clone());
        }
        let y = FinSet::of_size(n);
        let ty = m.carrier(&y)?;
        let xy = product(x, &y, m.size_cap())?;
        m.carrier(&xy)?;
        central.retain(|&t| {
            ty.elements()
                .all(|s| seq_lr(m, x, &y, &xy, t, s) == seq_rl(m, x, &y, &xy, t, s))
        });
    }
    let stable = before_largest.as_deref() == Some(central.as_slice());
    Ok(CentreResult {
        base: x.clone(),
        ambient,
        central,
        test_sizes: sizes,
        stable,
    })
}

/// Commutativity check: every pair of elements over the given object sizes
/// sequences the same way in both orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativityReport {
    pub monad: String,
    pub sizes: Vec<usize>,
    pub commutative: bool,
    pub witness: Option<String>,
}

impl fmt::Display for CommutativityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.commutative {
            write!(
                f,
                "{} is commutative on objects of sizes {:?}",
                self.monad, self.sizes
            )
        } else {
            write!(
                f,
                "{} is not commutative: {}",
                self.monad,
                self.witness.as_deref().unwrap_or("?")
            )
        }
    }
}

pub fn check_commutative(
    m: &dyn FiniteMonad,
    sizes: &[usize],
) -> Result<CommutativityReport, SizeBlowup> {
    let mut sorted: Vec<usize> = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, &nx) in sorted.iter().enumerate() {
        for &ny in &sorted[i..] {
            let x = FinSet::of_size(nx);
            let y = FinSet::of_size(ny);
            let tx = m.carrier(&x)?;
            let ty = m.carrier(&y)?;
            let xy = product(&x, &y, m.size_cap())?;
            m.carrier(&xy)?;
            for t in tx.elements() {
                for s in ty.elements() {
                    if seq_lr(m, &x, &y, &xy, t, s) != seq_rl(m, &x, &y, &xy, t, s) {
                        return Ok(CommutativityReport {
                            monad: m.name(),
                            sizes: sorted,
                            commutative: false,
                            witness: Some(format!(
                                "X={nx}, Y={ny}, t={}, s={}: t-then-s = {} but s-then-t = {}",
                                tx.label(t),
                                ty.label(s),
                                seq_lr(m, &x, &y, &xy, t, s),
                                seq_rl(m, &x, &y, &xy, t, s),
                            )),
                        });
                    }
                }
            }
        }
    }
    Ok(CommutativityReport {
        monad: m.name(),
        sizes: sorted,
        commutative: true,
        witness: None,
    })
}

/// Pointwise inclusion of one monad's carriers into another's.
pub trait InclusionMap: Send + Sync {
    /// Where element `elem ∈ S X` lands in `T X`.
    fn at(&self, x: &FinSet, elem: usize) -> usize;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::FinMonoid;

    fn z2_writer() -> WriterMonad {
        let carrier = FinSet::labeled(vec!["e".into(), "g".into()]);
        let m = FinMonoid::new("Z2", carrier, 0, vec![0, 1, 1, 0]).unwrap();
        WriterMonad::new(m)
    }

    #[test]
    fn commutative_writer_has_full_centre() {
        let w = z2_writer();
        let x = FinSet::of_size(2);
        let c = centre_at(&w, &x, &[1, 2]).unwrap();
        assert_eq!(c.central.len(), c.ambient.size());
        assert!(c.stable);
        assert!(check_commutative(&w, &[1, 2, 3]).unwrap().commutative);
    }

    #[test]
    fn centre_inclusion_is_injective() {
        let w = z2_writer();
        let c = centre_at(&w, &FinSet::of_size(2), &[1]).unwrap();
        assert!(c.inclusion().is_injective());
    }
}
