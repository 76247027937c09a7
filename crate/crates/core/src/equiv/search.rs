//! Bidirectional bridge search between canonical forms.
//!
//! Two canonical forms that the rewriter alone cannot identify may still
//! be connected through theory axioms. The search works on the quotient
//! the rewriter induces: a step applies one axiom instance, in either
//! orientation, at any position, and immediately takes the result back to
//! canonical form. Both endpoints already are canonical forms, so the
//! pure rules never need to appear as separate search moves. The walk is
//! breadth-first from both endpoints at once, until the frontiers meet or
//! a node budget runs out.
//!
//! An axiom's context variables act as metavariables. Matching a pattern
//! against a subterm binds each metavariable to the aligned piece, which
//! must not capture binders local to the matched region; repeated
//! metavariables must bind syntactically equal pieces. Every candidate is
//! typechecked before it is admitted, so an impossible match can never
//! smuggle in an ill-typed bridge.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::syntax::{Context, Term, Var};
use crate::theory::{Axiom, Theory};
use crate::typecheck;

use super::rewrite::{normalize, replace_at, subterm_at};

/// One link in a bridge: the axiom that was applied and the canonical
/// form it led to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeStep {
    pub rule: String,
    pub term: Term,
}

/// All canonical forms reachable from canonical `t` by one axiom bridge.
pub fn neighbours(th: &Theory, ctx: &Context, t: &Term) -> Vec<(String, Term)> {
    let mut out: Vec<(String, Term)> = Vec::new();
    for (rule, candidate) in axiom_rewrites(th, ctx, t) {
        let Ok(n) = normalize(th, ctx, &candidate) else {
            continue;
        };
        if n.output != *t && !out.iter().any(|(_, seen)| *seen == n.output) {
            out.push((rule, n.output));
        }
    }
    out
}

/// Every raw single-axiom rewrite of `t`: one axiom instance applied in one
/// orientation at one position, typechecked and size-capped but not
/// renormalized. The fuzzer uses these directly as derivability-preserving
/// perturbations.
pub(crate) fn axiom_rewrites(th: &Theory, ctx: &Context, t: &Term) -> Vec<(String, Term)> {
    let mut out = Vec::new();
    let size_cap = t.size() * 2 + 24;
    for path in positions(t) {
        let sub = subterm_at(t, &path).expect("enumerated position");
        for (i, axiom) in th.term_axioms().iter().enumerate() {
            for (dir, from, to) in [
                ("fwd", &axiom.lhs, &axiom.rhs),
                ("rev", &axiom.rhs, &axiom.lhs),
            ] {
                let Some(instance) = apply_axiom(axiom, from, to, sub) else {
                    continue;
                };
                let candidate = replace_at(t, &path, &instance);
                if candidate.size() > size_cap
                    || typecheck::infer(th, ctx, &candidate).is_err()
                {
                    continue;
                }
                out.push((format!("axiom[{i}] {dir}"), candidate));
            }
        }
    }
    out
}

/// All subterm positions of `t` as child-index paths, root first.
pub(crate) fn positions(t: &Term) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let extend = |child: &Term, idx: usize, out: &mut Vec<Vec<usize>>| {
        for mut p in positions(child) {
            p.insert(0, idx);
            out.push(p);
        }
    };
    match t {
        Term::Var(_) | Term::Star | Term::Const(_) => {}
        Term::Lam(_, b) | Term::Proj(_, b) | Term::Ret(_, b) | Term::Iota(b) => {
            extend(b, 0, &mut out)
        }
        Term::App(a, b) | Term::Pair(a, b) | Term::Do(_, a, b) => {
            extend(a, 0, &mut out);
            extend(b, 1, &mut out);
        }
    }
    out
}

/// Try to rewrite `subject` by the axiom oriented `from → to` at its root.
fn apply_axiom(axiom: &Axiom, from: &Term, to: &Term, subject: &Term) -> Option<Term> {
    let metas: BTreeSet<String> = axiom.context.names().map(|s| s.to_string()).collect();
    let mut bindings = BTreeMap::new();
    match_pattern(from, subject, &metas, 0, &mut bindings)?;
    Some(instantiate(to, &bindings, 0))
}

/// Structural match of `pattern` against `subject` at binder depth `depth`
/// (binders crossed inside the pattern so far). Metavariable occurrences
/// bind the aligned subject piece, re-expressed relative to the pattern
/// root; a piece that mentions pattern-local binders cannot be bound.
fn match_pattern(
    pattern: &Term,
    subject: &Term,
    metas: &BTreeSet<String>,
    depth: usize,
    bindings: &mut BTreeMap<String, Term>,
) -> Option<()> {
    if let Term::Var(Var::Free(name)) = pattern {
        if metas.contains(name) {
            if mentions_bound_below(subject, depth) {
                return None;
            }
            let canonical = subject.shifted_above(0, -(depth as isize));
            return match bindings.get(name) {
                Some(prev) if *prev != canonical => None,
                Some(_) => Some(()),
                None => {
                    bindings.insert(name.clone(), canonical);
                    Some(())
                }
            };
        }
    }
    match (pattern, subject) {
        (Term::Var(a), Term::Var(b)) if a == b => Some(()),
        (Term::Star, Term::Star) => Some(()),
        (Term::Const(a), Term::Const(b)) if a == b => Some(()),
        (Term::Lam(ta, a), Term::Lam(tb, b)) if ta == tb => {
            match_pattern(a, b, metas, depth + 1, bindings)
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            match_pattern(f1, f2, metas, depth, bindings)?;
            match_pattern(a1, a2, metas, depth, bindings)
        }
        (Term::Pair(l1, r1), Term::Pair(l2, r2)) => {
            match_pattern(l1, l2, metas, depth, bindings)?;
            match_pattern(r1, r2, metas, depth, bindings)
        }
        (Term::Proj(w1, a), Term::Proj(w2, b)) if w1 == w2 => {
            match_pattern(a, b, metas, depth, bindings)
        }
        (Term::Ret(f1, a), Term::Ret(f2, b)) if f1 == f2 => {
            match_pattern(a, b, metas, depth, bindings)
        }
        (Term::Iota(a), Term::Iota(b)) => match_pattern(a, b, metas, depth, bindings),
        (Term::Do(f1, h1, b1), Term::Do(f2, h2, b2)) if f1 == f2 => {
            match_pattern(h1, h2, metas, depth, bindings)?;
            match_pattern(b1, b2, metas, depth + 1, bindings)
        }
        _ => None,
    }
}

/// Does the term mention any binder bound within the outermost `depth`
/// levels above it?
fn mentions_bound_below(t: &Term, depth: usize) -> bool {
    (0..depth).any(|i| t.uses_bound(i))
}

/// Substitute metavariable bindings into the axiom's other side.
fn instantiate(template: &Term, bindings: &BTreeMap<String, Term>, depth: usize) -> Term {
    match template {
        Term::Var(Var::Free(name)) => match bindings.get(name) {
            Some(t) => t.shifted(depth as isize),
            None => template.clone(),
        },
        Term::Var(_) | Term::Star | Term::Const(_) => template.clone(),
        Term::Lam(ty, b) => Term::lam((**ty).clone(), instantiate(b, bindings, depth + 1)),
        Term::App(f, a) => Term::app(
            instantiate(f, bindings, depth),
            instantiate(a, bindings, depth),
        ),
        Term::Pair(l, r) => Term::pair(
            instantiate(l, bindings, depth),
            instantiate(r, bindings, depth),
        ),
        Term::Proj(w, m) => Term::proj(*w, instantiate(m, bindings, depth)),
        Term::Ret(f, m) => Term::ret(*f, instantiate(m, bindings, depth)),
        Term::Iota(m) => Term::iota(instantiate(m, bindings, depth)),
        Term::Do(f, h, b) => Term::do_(
            *f,
            instantiate(h, bindings, depth),
            instantiate(b, bindings, depth + 1),
        ),
    }
}

/// Breadth-first from both ends; returns the connecting steps from `start`
/// to `goal`, or `None` if the budget (total expanded nodes) runs out.
/// Both endpoints must be canonical forms.
pub fn find_bridge(
    th: &Theory,
    ctx: &Context,
    start: &Term,
    goal: &Term,
    budget: usize,
) -> Option<Vec<BridgeStep>> {
    if start == goal {
        return Some(Vec::new());
    }
    let mut from_start: HashMap<Term, (Term, String)> = HashMap::new();
    let mut from_goal: HashMap<Term, (Term, String)> = HashMap::new();
    from_start.insert(start.clone(), (start.clone(), String::new()));
    from_goal.insert(goal.clone(), (goal.clone(), String::new()));
    let mut q_start = VecDeque::from([start.clone()]);
    let mut q_goal = VecDeque::from([goal.clone()]);
    let mut expanded = 0usize;
    let mut start_side = true;

    while expanded < budget && (!q_start.is_empty() || !q_goal.is_empty()) {
        let meet = if start_side {
            expand_one(th, ctx, &mut q_start, &mut from_start, &from_goal, &mut expanded)
        } else {
            expand_one(th, ctx, &mut q_goal, &mut from_goal, &from_start, &mut expanded)
        };
        if let Some(meet) = meet {
            return Some(assemble(&from_start, &from_goal, &meet, start, goal));
        }
        start_side = !start_side;
    }
    None
}

/// Pop one node from `queue`, expand it into `own`, and report a term
/// already known to `other` (a meeting point) if one appears.
fn expand_one(
    th: &Theory,
    ctx: &Context,
    queue: &mut VecDeque<Term>,
    own: &mut HashMap<Term, (Term, String)>,
    other: &HashMap<Term, (Term, String)>,
    expanded: &mut usize,
) -> Option<Term> {
    let cur = queue.pop_front()?;
    *expanded += 1;
    for (rule, next) in neighbours(th, ctx, &cur) {
        if own.contains_key(&next) {
            continue;
        }
        own.insert(next.clone(), (cur.clone(), rule));
        if other.contains_key(&next) {
            return Some(next);
        }
        queue.push_back(next);
    }
    None
}

fn assemble(
    from_start: &HashMap<Term, (Term, String)>,
    from_goal: &HashMap<Term, (Term, String)>,
    meet: &Term,
    start: &Term,
    goal: &Term,
) -> Vec<BridgeStep> {
    // walk meet -> start, collecting the step that produced each node,
    // then reverse into start -> meet order
    let mut steps = Vec::new();
    let mut cur = meet.clone();
    while cur != *start {
        let (parent, rule) = &from_start[&cur];
        steps.push(BridgeStep {
            rule: rule.clone(),
            term: cur.clone(),
        });
        cur = parent.clone();
    }
    steps.reverse();
    // each goal-side record took parent -> child away from the goal, so
    // following parents from the meet crosses those edges in reverse
    let mut cur = meet.clone();
    while cur != *goal {
        let (parent, rule) = &from_goal[&cur];
        steps.push(BridgeStep {
            rule: format!("{rule} (reversed)"),
            term: parent.clone(),
        });
        cur = parent.clone();
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_judgement, parse_term, parse_type};

    fn simple_theory() -> Theory {
        let mut th = Theory::new();
        th.add_ground("A");
        th.add_constant("a", parse_type("T 1").unwrap());
        th.add_constant("b", parse_type("T 1").unwrap());
        th.add_constant("ab", parse_type("T 1").unwrap());
        let (ctx, lhs) = parse_judgement("[k : T 1] |- do_T x <- a; do_T y <- b; k").unwrap();
        let (_, rhs) = parse_judgement("[k : T 1] |- do_T z <- ab; k").unwrap();
        let axiom = Axiom {
            context: ctx,
            lhs,
            rhs,
            ty: parse_type("T 1").unwrap(),
        };
        th.add_axiom(axiom);
        th
    }

    #[test]
    fn axiom_matches_and_rewrites() {
        let th = simple_theory();
        let (ctx, t) = parse_judgement("[k : T 1] |- do_T x <- a; do_T y <- b; k").unwrap();
        let t = t.resolve_consts(&th.constant_names());
        let ns = neighbours(&th, &ctx, &t);
        let target = parse_judgement("[k : T 1] |- do_T z <- ab; k")
            .unwrap()
            .1
            .resolve_consts(&th.constant_names());
        assert!(
            ns.iter()
                .any(|(r, n)| r.starts_with("axiom[0]") && *n == target),
            "neighbours: {:?}",
            ns.iter()
                .map(|(r, n)| format!("{r}: {n}"))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn metavariable_cannot_capture_local_binder() {
        let th = simple_theory();
        // the axiom's k may not match a piece that uses the do-binders
        let (ctx, t) =
            parse_judgement("[f : 1 -> T 1] |- do_T x <- a; do_T y <- b; f y").unwrap();
        let t = t.resolve_consts(&th.constant_names());
        let ns = neighbours(&th, &ctx, &t);
        assert!(
            !ns.iter().any(|(r, _)| r.starts_with("axiom[0] fwd")),
            "the axiom must not fire when its metavariable would capture"
        );
    }

    #[test]
    fn metavariable_reindexes_under_outer_binders() {
        let th = simple_theory();
        // the metavariable k binds the lambda's variable, which must be
        // re-indexed across the differing numbers of do-binders
        let (ctx, t) =
            parse_judgement("\\k : T 1. do_T x <- a; do_T y <- b; k").unwrap();
        let t = t.resolve_consts(&th.constant_names());
        let target = parse_judgement("\\k : T 1. do_T z <- ab; k")
            .unwrap()
            .1
            .resolve_consts(&th.constant_names());
        let ns = neighbours(&th, &ctx, &t);
        assert!(
            ns.iter().any(|(_, n)| *n == target),
            "neighbours: {:?}",
            ns.iter().map(|(r, n)| format!("{r}: {n}")).collect::<Vec<_>>()
        );
    }

    #[test]
    fn bridge_connects_through_an_axiom() {
        let th = simple_theory();
        let (ctx, a) = parse_judgement("[k : T 1] |- do_T x <- a; do_T y <- b; k").unwrap();
        let (_, b) = parse_judgement("[k : T 1] |- do_T z <- ab; k").unwrap();
        let a = a.resolve_consts(&th.constant_names());
        let b = b.resolve_consts(&th.constant_names());
        let bridge = find_bridge(&th, &ctx, &a, &b, 2000).unwrap();
        assert_eq!(bridge.len(), 1);
        assert_eq!(bridge.last().unwrap().term, b);
    }

    #[test]
    fn bridge_applies_axioms_at_nested_positions() {
        let th = simple_theory();
        let (ctx, a) = parse_judgement(
            "[h : T A, k : T 1] |- do_T w <- h; do_T x <- a; do_T y <- b; k",
        )
        .unwrap();
        let (_, b) =
            parse_judgement("[h : T A, k : T 1] |- do_T w <- h; do_T z <- ab; k").unwrap();
        let a = a.resolve_consts(&th.constant_names());
        let b = b.resolve_consts(&th.constant_names());
        let bridge = find_bridge(&th, &ctx, &a, &b, 2000).unwrap();
        assert_eq!(bridge.last().unwrap().term, b);
    }

    #[test]
    fn unrelated_terms_do_not_bridge() {
        let th = simple_theory();
        let a = parse_term("a").unwrap().resolve_consts(&th.constant_names());
        let b = parse_term("b").unwrap().resolve_consts(&th.constant_names());
        assert!(find_bridge(&th, &Context::empty(), &a, &b, 200).is_none());
    }
}
