//! Ready-made algebraic structures and theories used by the test suites,
//! the command-line demos, and the documentation examples.

use crate::semantics::{FinMonoid, FinSemiring, FinSet, Submonoid};
use crate::syntax::{parse_judgement, parse_term, parse_type};
use crate::theory::Theory;

/// The cyclic monoid `Z_n` under addition.
pub fn z_n(n: usize) -> FinMonoid {
    assert!(n > 0);
    let carrier = FinSet::labeled((0..n).map(|i| i.to_string()).collect());
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push((a + b) % n);
        }
    }
    FinMonoid::new(format!("Z{n}"), carrier, 0, table).expect("cyclic monoids satisfy the laws")
}

/// The dihedral group of the square: elements `r^i s^j` with `r^4 = s^2 = e`
/// and `s r = r^3 s`, indexed `j*4 + i` and labelled `e, r, r2, r3, s, rs,
/// r2s, r3s`.
pub fn d4() -> FinMonoid {
    let labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];
    let carrier = FinSet::labeled(labels.iter().map(|s| s.to_string()).collect());
    let idx = |i: usize, j: usize| j * 4 + i;
    let mut table = vec![0usize; 64];
    for j in 0..2 {
        for i in 0..4 {
            for l in 0..2 {
                for k in 0..4 {
                    // (r^i s^j)(r^k s^l) = r^(i + k·(−1)^j) s^(j+l)
                    let rot = if j == 0 { (i + k) % 4 } else { (i + 4 - k % 4) % 4 };
                    table[idx(i, j) * 8 + idx(k, l)] = idx(rot, (j + l) % 2);
                }
            }
        }
    }
    FinMonoid::new("D4", carrier, 0, table).expect("the dihedral table is a group")
}

/// The rotation submonoid `{e, r, r2, r3}` of [`d4`] — commutative, but not
/// central in the parent.
pub fn d4_rotations() -> Submonoid {
    d4().submonoid("C4", &[0, 1, 2, 3])
        .expect("rotations are closed")
}

/// The centre `{e, r2}` of [`d4`], as a submonoid with its embedding.
pub fn d4_centre() -> Submonoid {
    d4().centre_submonoid()
}

/// The symmetric group on three letters, via permutation composition
/// (`a · b` applies `a` first).
pub fn s3() -> FinMonoid {
    let perms: [( &str, [usize; 3]); 6] = [
        ("e", [0, 1, 2]),
        ("t12", [1, 0, 2]),
        ("t13", [2, 1, 0]),
        ("t23", [0, 2, 1]),
        ("c123", [1, 2, 0]),
        ("c132", [2, 0, 1]),
    ];
    let carrier = FinSet::labeled(perms.iter().map(|(l, _)| l.to_string()).collect());
    let compose = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] {
        [b[a[0]], b[a[1]], b[a[2]]]
    };
    let find = |p: &[usize; 3]| perms.iter().position(|(_, q)| q == p).unwrap();
    let mut table = Vec::with_capacity(36);
    for (_, a) in &perms {
        for (_, b) in &perms {
            table.push(find(&compose(a, b)));
        }
    }
    FinMonoid::new("S3", carrier, 0, table).expect("permutation composition is a group")
}

/// The Boolean semiring `({0,1}, ∨, ∧)`.
pub fn bool_semiring() -> FinSemiring {
    FinSemiring::new(
        "bool",
        FinSet::labeled(vec!["0".into(), "1".into()]),
        0,
        1,
        vec![0, 1, 1, 1],
        vec![0, 0, 0, 1],
    )
    .expect("the Boolean semiring satisfies the laws")
}

/// 2×2 matrices over the Boolean semiring — 16 elements, non-commutative.
/// A matrix `[[a,b],[c,d]]` is encoded as the bit pattern `a·8+b·4+c·2+d`
/// and labelled e.g. `m1001` (the identity).
pub fn bool_mat2_semiring() -> FinSemiring {
    let bits = |m: usize| [(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1];
    let carrier = FinSet::labeled(
        (0..16)
            .map(|m| {
                let [a, b, c, d] = bits(m);
                format!("m{a}{b}{c}{d}")
            })
            .collect(),
    );
    let mut add = Vec::with_capacity(256);
    let mut mul = Vec::with_capacity(256);
    for x in 0..16usize {
        for y in 0..16usize {
            add.push(x | y);
            let [a, b, c, d] = bits(x);
            let [e, f, g, h] = bits(y);
            let p = [
                (a & e) | (b & g),
                (a & f) | (b & h),
                (c & e) | (d & g),
                (c & f) | (d & h),
            ];
            mul.push((p[0] << 3) | (p[1] << 2) | (p[2] << 1) | p[3]);
        }
    }
    FinSemiring::new("bool-mat2", carrier, 0, 0b1001, add, mul)
        .expect("Boolean matrices form a semiring")
}

/// The action theory of a writer monad over `monoid`, with the chosen
/// central submonoid driving the `S` layer.
///
/// Constants: `act_c : T 1` for every monoid element `c` and `sact_s : S 1`
/// for every submonoid element `s`. Axioms: discarding the trivial action
/// is invisible, consecutive actions compose through the monoid operation
/// (one axiom per pair, at both layers), the inclusion sends `sact` to
/// `act`, and the units are the trivial actions.
pub fn writer_theory(monoid: &FinMonoid, sub: &Submonoid) -> Theory {
    let mut th = Theory::new();
    let act = |c: usize| format!("act_{}", monoid.label(c));
    let sact = |s: usize| format!("sact_{}", sub.monoid.label(s));
    let t1 = parse_type("T 1").unwrap();
    let s1 = parse_type("S 1").unwrap();
    for c in 0..monoid.size() {
        th.add_constant(act(c), t1.clone());
    }
    for s in 0..sub.monoid.size() {
        th.add_constant(sact(s), s1.clone());
    }
    let add = |th: &mut Theory, text: &str| {
        let (context, lhs, rhs, ty) = split_axiom(text);
        th.add_axiom(crate::theory::Axiom {
            context,
            lhs,
            rhs,
            ty,
        });
    };
    add(
        &mut th,
        &format!("[k : T 1] |- do_T _ <- {}; k = k : T 1", act(monoid.unit())),
    );
    add(
        &mut th,
        &format!("[k : S 1] |- do_S _ <- {}; k = k : S 1", sact(sub.monoid.unit())),
    );
    for c in 0..monoid.size() {
        for c2 in 0..monoid.size() {
            add(
                &mut th,
                &format!(
                    "[k : T 1] |- do_T _ <- {}; do_T _ <- {}; k = do_T _ <- {}; k : T 1",
                    act(c),
                    act(c2),
                    act(monoid.op(c, c2))
                ),
            );
        }
    }
    for s in 0..sub.monoid.size() {
        for s2 in 0..sub.monoid.size() {
            add(
                &mut th,
                &format!(
                    "[k : S 1] |- do_S _ <- {}; do_S _ <- {}; k = do_S _ <- {}; k : S 1",
                    sact(s),
                    sact(s2),
                    sact(sub.monoid.op(s, s2))
                ),
            );
        }
    }
    for s in 0..sub.monoid.size() {
        add(
            &mut th,
            &format!("|- iota {} = {} : T 1", sact(s), act(sub.embed[s])),
        );
    }
    add(&mut th, &format!("|- ret_T * = {} : T 1", act(monoid.unit())));
    add(
        &mut th,
        &format!("|- ret_S * = {} : S 1", sact(sub.monoid.unit())),
    );
    debug_assert!(th.validate().is_ok());
    th
}

/// The standard finite model of [`writer_theory`]: the writer monad over
/// `monoid` on the `T` layer, the writer monad over `sub` on the `S`
/// layer, the embedding as the inclusion, and each action constant
/// interpreted by its own monoid element (the `T 1` carrier is the monoid
/// itself, since the value component is the one-point set).
pub fn writer_model(monoid: &FinMonoid, sub: &Submonoid) -> crate::semantics::Model {
    use std::sync::Arc;
    let t_monad = Arc::new(crate::centre::WriterMonad::new(monoid.clone()));
    let s_monad = Arc::new(crate::centre::WriterMonad::new(sub.monoid.clone()));
    let iota = Arc::new(crate::centre::WriterInclusion::new(sub, monoid));
    let mut model = crate::semantics::Model::new(
        format!("writer-{}", monoid.name()),
        t_monad,
        s_monad,
        iota,
    );
    for c in 0..monoid.size() {
        model = model.with_const(format!("act_{}", monoid.label(c)), c);
    }
    for s in 0..sub.monoid.size() {
        model = model.with_const(format!("sact_{}", sub.monoid.label(s)), s);
    }
    model
}

/// Split `"[ctx] |- lhs = rhs : ty"` into its judgement pieces. Axiom text
/// helpers for tests and fixtures; panics on malformed input.
pub fn split_axiom(
    text: &str,
) -> (
    crate::syntax::Context,
    crate::syntax::Term,
    crate::syntax::Term,
    crate::syntax::Type,
) {
    let (body, ty) = text.rsplit_once(':').expect("axiom needs a type");
    let (lhs, rhs) = body.rsplit_once('=').expect("axiom needs an equation");
    let (ctx, lhs) = parse_judgement(lhs).expect("axiom lhs must parse");
    let rhs_term = parse_term(rhs.trim()).expect("axiom rhs must parse");
    let ty = parse_type(ty.trim()).expect("axiom type must parse");
    (ctx, lhs, rhs_term, ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centre::{
        centre_at, check_commutative, ContinuationMonad, FiniteMonad, SemiringMonad, WriterMonad,
    };
    use crate::semantics::pair_index;

    #[test]
    fn d4_has_the_expected_structure() {
        let m = d4();
        assert_eq!(m.size(), 8);
        // s·r = r3·s, r·s = rs
        let (r, s, r3s, rs) = (1, 4, 7, 5);
        assert_eq!(m.op(s, r), r3s);
        assert_eq!(m.op(r, s), rs);
        assert!(!m.is_commutative());
        let centre: Vec<String> = m.centre_elements().iter().map(|&v| m.label(v)).collect();
        assert_eq!(centre, vec!["e", "r2"]);
    }

    #[test]
    fn rotations_are_commutative_but_not_central() {
        let sub = d4_rotations();
        assert!(sub.monoid.is_commutative());
        let parent = d4();
        let centre = parent.centre_elements();
        assert!(sub.embed.iter().any(|v| !centre.contains(v)));
    }

    #[test]
    fn s3_is_a_noncommutative_group_with_trivial_centre() {
        let m = s3();
        assert_eq!(m.size(), 6);
        assert!(!m.is_commutative());
        assert_eq!(m.centre_elements(), vec![0]);
    }

    #[test]
    fn writer_centre_is_base_times_monoid_centre() {
        let w = WriterMonad::new(d4());
        for n in 1..=3 {
            let x = FinSet::of_size(n);
            let c = centre_at(&w, &x, &[1, 2]).unwrap();
            let expected: Vec<usize> = (0..n)
                .flat_map(|v| [pair_index(8, v, 0), pair_index(8, v, 2)])
                .collect();
            let mut expected = expected;
            expected.sort_unstable();
            assert_eq!(c.central, expected);
            assert!(c.stable);
        }
    }

    #[test]
    fn continuation_centre_at_one_point_is_the_unit_image() {
        let cont = ContinuationMonad::new(FinSet::of_size(2));
        let one = FinSet::of_size(1);
        let c = centre_at(&cont, &one, &[1, 2]).unwrap();
        assert_eq!(c.ambient.size(), 4);
        assert_eq!(c.central, vec![cont.eta(&one, 0)]);
        assert!(c.stable);
    }

    #[test]
    fn commutativity_matches_the_underlying_algebra() {
        for (monoid, expect) in [
            (z_n(2), true),
            (z_n(3), true),
            (d4_centre().monoid, true),
            (d4(), false),
            (s3(), false),
        ] {
            let name = monoid.name().to_string();
            let w = WriterMonad::new(monoid);
            let report = check_commutative(&w, &[1, 2, 3]).unwrap();
            assert_eq!(report.commutative, expect, "{name}: {report}");
        }
    }

    #[test]
    fn boolean_matrices_have_scalar_centre() {
        let sr = bool_mat2_semiring();
        assert_eq!(sr.size(), 16);
        let centre: Vec<String> = sr.centre_elements().iter().map(|&v| sr.label(v)).collect();
        assert_eq!(centre, vec!["m0000", "m1001"]);
    }

    #[test]
    fn matrix_module_centre_consists_of_central_coefficient_vectors() {
        let sr = bool_mat2_semiring();
        let z_s = sr.centre_elements();
        let sm = SemiringMonad::new(sr);
        let one = FinSet::of_size(1);
        let c = centre_at(&sm, &one, &[1, 2]).unwrap();
        // at |X| = 1 an element is a single coefficient; central iff the
        // coefficient lies in the semiring centre
        let expected: Vec<usize> = z_s
            .iter()
            .map(|&v| sm.from_coeffs(&[v]))
            .collect();
        let mut expected = expected;
        expected.sort_unstable();
        assert_eq!(c.central, expected);
    }

    #[test]
    fn writer_theory_instantiates_and_validates() {
        let m = d4();
        let sub = d4_centre();
        let th = writer_theory(&m, &sub);
        assert!(th.validate().is_ok());
        assert_eq!(th.constant_names().len(), 8 + 2);
        // unit + unit + 64 + 4 + 2 iota + 2 ret
        assert_eq!(th.term_axioms().len(), 2 + 64 + 4 + 2 + 2);
    }
}
