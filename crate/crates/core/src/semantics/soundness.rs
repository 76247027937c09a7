//! Soundness checking: does a model actually satisfy a theory?
//!
//! Two complementary probes. First, every term axiom is interpreted on
//! both sides and compared pointwise over its whole environment — a
//! mismatch is a definite violation and comes with the concrete
//! environment entry where the sides differ. Second, randomly generated
//! well-typed terms are perturbed by random derivability-preserving
//! rewrites and re-interpreted; since every derivable equation must hold
//! in a sound model, any interpretation drift is again a violation. Terms
//! whose types are too large to interpret are counted as skipped, never
//! silently dropped.

use crate::fuzz::TermGen;
use crate::semantics::{Model, SemanticsError};
use crate::syntax::Type;
use crate::theory::Theory;

/// One concrete failure: two interpretations that the theory says must
/// agree, the environment entry where they differ, and both values.
#[derive(Debug, Clone)]
pub struct SoundnessViolation {
    pub description: String,
    pub environment: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

impl std::fmt::Display for SoundnessViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: at {} the sides evaluate to {} and {}",
            self.description, self.environment, self.lhs_value, self.rhs_value
        )
    }
}

/// The full outcome of [`check_model_soundness`].
#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub axioms_checked: usize,
    pub axiom_violations: Vec<SoundnessViolation>,
    /// Axioms that could not be interpreted at all (for example, a context
    /// whose carrier exceeds the size cap), with the reason.
    pub axiom_errors: Vec<String>,
    pub fuzz_checked: usize,
    /// Fuzzed terms skipped because their types were too large to
    /// interpret in this model.
    pub fuzz_skipped: usize,
    pub fuzz_violations: Vec<SoundnessViolation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.axiom_violations.is_empty()
            && self.axiom_errors.is_empty()
            && self.fuzz_violations.is_empty()
    }
}

impl std::fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "axioms: {} checked, {} violated, {} uninterpretable",
            self.axioms_checked,
            self.axiom_violations.len(),
            self.axiom_errors.len()
        )?;
        write!(
            f,
            "fuzz: {} checked, {} skipped, {} violated",
            self.fuzz_checked,
            self.fuzz_skipped,
            self.fuzz_violations.len()
        )?;
        for v in self.axiom_violations.iter().chain(&self.fuzz_violations) {
            write!(f, "\n  {v}")?;
        }
        for e in &self.axiom_errors {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

/// Check that `model` satisfies `th`: every term axiom pointwise, plus
/// `fuzz_count` random well-typed terms re-interpreted after random
/// derivable rewrites. The model should already pass
/// [`Model::validate`]; this check asks the finer question of whether the
/// *theory* holds in it.
pub fn check_model_soundness(
    model: &Model,
    th: &Theory,
    fuzz_count: usize,
    seed: u64,
) -> SoundnessReport {
    let mut report = SoundnessReport::default();
    for (i, ax) in th.term_axioms().iter().enumerate() {
        report.axioms_checked += 1;
        let sides = model
            .interpret_term(th, &ax.context, &ax.lhs)
            .and_then(|l| Ok((l, model.interpret_term(th, &ax.context, &ax.rhs)?)));
        match sides {
            Ok((l, r)) => {
                if let Some(v) = first_difference(&l, &r, format!("axiom {i} `{ax}`")) {
                    report.axiom_violations.push(v);
                }
            }
            Err(e) => report
                .axiom_errors
                .push(format!("axiom {i} `{ax}` is uninterpretable: {e}")),
        }
    }

    let mut gen = TermGen::new(th, seed);
    for i in 0..fuzz_count {
        let ctx = gen.gen_context(1, 1);
        let ty = Type::mon(
            if i % 2 == 0 {
                crate::syntax::Flavour::T
            } else {
                crate::syntax::Flavour::S
            },
            gen.gen_type(1),
        );
        let term = gen.gen_term(&ctx, &ty, 3);
        let perturbed = gen.perturb(&ctx, &term, 4, 1);
        let before = model.interpret_term(th, &ctx, &term);
        let after = model.interpret_term(th, &ctx, &perturbed);
        match (before, after) {
            (Ok(l), Ok(r)) => {
                report.fuzz_checked += 1;
                let what = format!("fuzz case {i}: `{term}` rewritten to `{perturbed}`");
                if let Some(v) = first_difference(&l, &r, what) {
                    report.fuzz_violations.push(v);
                }
            }
            (Err(SemanticsError::Size(_)), _) | (_, Err(SemanticsError::Size(_))) => {
                report.fuzz_skipped += 1;
            }
            (Err(e), _) | (_, Err(e)) => {
                report
                    .axiom_errors
                    .push(format!("fuzz case {i} is uninterpretable: {e}"));
            }
        }
    }
    report
}

fn first_difference(
    l: &crate::semantics::FinFunction,
    r: &crate::semantics::FinFunction,
    description: String,
) -> Option<SoundnessViolation> {
    (0..l.dom().size())
        .find(|&i| l.apply(i) != r.apply(i))
        .map(|i| SoundnessViolation {
            description,
            environment: l.dom().label(i),
            lhs_value: l.cod().label(l.apply(i)),
            rhs_value: r.cod().label(r.apply(i)),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn the_dihedral_writer_model_satisfies_its_theory() {
        let th = fixtures::writer_theory(&fixtures::d4(), &fixtures::d4_centre());
        let model = fixtures::writer_model(&fixtures::d4(), &fixtures::d4_centre());
        let report = check_model_soundness(&model, &th, 15, 5);
        assert!(report.is_sound(), "{report}");
        assert_eq!(report.axioms_checked, th.term_axioms().len());
        assert!(report.fuzz_checked > 0);
    }

    #[test]
    fn an_injected_false_commutation_axiom_is_caught_with_a_witness() {
        let mut th = fixtures::writer_theory(&fixtures::d4(), &fixtures::d4_centre());
        let (context, lhs, rhs, ty) = fixtures::split_axiom(
            "[k : T 1] |- do_T _ <- act_r; do_T _ <- act_s; k \
             = do_T _ <- act_s; do_T _ <- act_r; k : T 1",
        );
        th.add_axiom(crate::theory::Axiom {
            context,
            lhs,
            rhs,
            ty,
        });
        let model = fixtures::writer_model(&fixtures::d4(), &fixtures::d4_centre());
        let report = check_model_soundness(&model, &th, 0, 5);
        assert_eq!(report.axiom_violations.len(), 1, "{report}");
        let v = &report.axiom_violations[0];
        assert!(v.environment.contains("k="), "environment: {}", v.environment);
        assert_ne!(v.lhs_value, v.rhs_value);
    }

    #[test]
    fn an_empty_theory_passes_on_fuzz_alone() {
        let th = crate::theory::Theory::new();
        let z2 = fixtures::z_n(2);
        let model = fixtures::writer_model(&z2, &z2.centre_submonoid());
        let report = check_model_soundness(&model, &th, 25, 99);
        assert!(report.is_sound(), "{report}");
        assert_eq!(report.axioms_checked, 0);
        assert!(report.fuzz_checked > 0);
    }
}
