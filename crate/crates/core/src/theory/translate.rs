//! Vocabulary maps between theories and their coherence checks.
//!
//! A [`Translation`] sends one theory into another: each ground type goes to
//! a target type, each constant to a closed target term, and the type formers
//! (`1`, `->`, `*`, `S`, `T`) are carried across structurally. The
//! interesting question is whether the map respects the source's equations;
//! [`Translation::check`] decides each translated axiom with the full
//! equivalence pipeline, so a finite model of the target can refute a bad map
//! with a concrete countermodel, and a rewrite-plus-bridge proof certifies a
//! good one.
//!
//! A [`TranslationTransformation`] compares two translations of the same
//! source pointwise: a family of component terms `x : V(A) |- alpha_A :
//! V'(A)`, checked for naturality on caller-supplied probe morphisms.
//!
//! Translations travel in `.csctr` files ([`parse_translation_file`]): two
//! header lines naming the source and target theory files, then one
//! `ground`/`const` mapping per line.

use std::collections::BTreeMap;

use crate::equiv::{self, Countermodel, EquivError, Verdict};
use crate::semantics::Model;
use crate::syntax::{parse_term, parse_type, Context, Term, Type};
use crate::theory::{Theory, UnknownGround};
use crate::typecheck::{self, TypeError};

/// A structural defect that makes a translation unusable before any term
/// axiom is examined: missing or ill-typed vocabulary mappings, or a source
/// type equality the target does not validate.
#[derive(Debug, thiserror::Error)]
pub enum TranslationError {
    #[error("source ground type `{0}` has no target mapping")]
    UnmappedGround(String),
    #[error("source constant `{0}` has no target mapping")]
    UnmappedConstant(String),
    #[error("constant `{constant}` maps to an ill-typed term: {error}")]
    IllTypedConstant { constant: String, error: TypeError },
    #[error("source type axiom `{lhs} = {rhs}` does not hold in the target")]
    TypeAxiomNotPreserved { lhs: Type, rhs: Type },
    #[error("a mapped type mentions `{0}`, which the target does not declare")]
    UnknownTargetGround(String),
    #[error("no component term supplied for type `{0}`")]
    MissingComponent(Type),
    #[error("component for `{ty}` is ill-typed: {error}")]
    IllTypedComponent { ty: Type, error: TypeError },
    #[error("probe {index} is unusable: {reason}")]
    BadProbe { index: usize, reason: String },
    #[error(transparent)]
    Equiv(#[from] EquivError),
}

impl From<UnknownGround> for TranslationError {
    fn from(e: UnknownGround) -> Self {
        TranslationError::UnknownTargetGround(e.0)
    }
}

/// Outcome of checking every source axiom under a translation.
#[derive(Debug, Clone)]
pub enum TranslationVerdict {
    /// Every translated axiom was proved in the target.
    Verified,
    /// Some translated axiom is refuted by the supplied model; the map is
    /// definitely not theory-preserving.
    FailedAt {
        axiom_index: usize,
        axiom: String,
        counter: Countermodel,
    },
    /// Nothing was refuted, but at least one translated axiom could not be
    /// proved within the budget.
    Unknown {
        axiom_index: usize,
        axiom: String,
        reason: String,
    },
}

impl TranslationVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, TranslationVerdict::Verified)
    }
}

/// Outcome of checking a transformation's naturality squares.
#[derive(Debug, Clone)]
pub enum TransformationVerdict {
    /// Every probed square commutes.
    Natural,
    /// Some square is refuted by the supplied model.
    Violated {
        probe_index: usize,
        counter: Countermodel,
    },
    /// Nothing was refuted, but some square could not be closed in budget.
    Unknown { probe_index: usize, reason: String },
}

impl TransformationVerdict {
    pub fn is_natural(&self) -> bool {
        matches!(self, TransformationVerdict::Natural)
    }
}

/// A vocabulary map from `source` to `target`. Only grounds and constants
/// are stored; composite types and terms are translated structurally.
#[derive(Debug, Clone)]
pub struct Translation {
    source: Theory,
    target: Theory,
    ground_map: BTreeMap<String, Type>,
    const_map: BTreeMap<String, Term>,
}

impl Translation {
    pub fn new(source: Theory, target: Theory) -> Translation {
        Translation {
            source,
            target,
            ground_map: BTreeMap::new(),
            const_map: BTreeMap::new(),
        }
    }

    /// The translation of a theory into itself that maps every ground and
    /// constant to itself.
    pub fn identity(th: &Theory) -> Translation {
        let mut v = Translation::new(th.clone(), th.clone());
        for g in th.grounds() {
            v = v.with_ground(g, Type::ground(g));
        }
        for (c, _) in th.constants() {
            v = v.with_const(c, Term::constant(c));
        }
        v
    }

    pub fn with_ground(mut self, ground: impl Into<String>, ty: Type) -> Translation {
        self.ground_map.insert(ground.into(), ty);
        self
    }

    /// Map a source constant to a closed target term. Free names in `term`
    /// that match target constants are resolved immediately, so parsed text
    /// can be passed straight in.
    pub fn with_const(mut self, constant: impl Into<String>, term: Term) -> Translation {
        let resolved = term.resolve_consts(&self.target.constant_names());
        self.const_map.insert(constant.into(), resolved);
        self
    }

    pub fn source(&self) -> &Theory {
        &self.source
    }

    pub fn target(&self) -> &Theory {
        &self.target
    }

    pub fn ground_map(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.ground_map.iter().map(|(g, t)| (g.as_str(), t))
    }

    pub fn const_map(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.const_map.iter().map(|(c, t)| (c.as_str(), t))
    }

    /// Translate a type: grounds through the map, everything else
    /// structurally.
    pub fn apply_type(&self, ty: &Type) -> Result<Type, TranslationError> {
        Ok(match ty {
            Type::Unit => Type::Unit,
            Type::Ground(g) => self
                .ground_map
                .get(g)
                .cloned()
                .ok_or_else(|| TranslationError::UnmappedGround(g.clone()))?,
            Type::Arrow(a, b) => Type::arrow(self.apply_type(a)?, self.apply_type(b)?),
            Type::Prod(a, b) => Type::prod(self.apply_type(a)?, self.apply_type(b)?),
            Type::Mon(f, a) => Type::mon(*f, self.apply_type(a)?),
        })
    }

    /// Translate a term: constants through the map (their images are closed,
    /// so no index adjustment is needed), annotations through
    /// [`Translation::apply_type`], everything else structurally. Context
    /// variables stay as they are.
    pub fn apply_term(&self, term: &Term) -> Result<Term, TranslationError> {
        Ok(match term {
            Term::Var(_) | Term::Star => term.clone(),
            Term::Const(c) => self
                .const_map
                .get(c)
                .cloned()
                .ok_or_else(|| TranslationError::UnmappedConstant(c.clone()))?,
            Term::Lam(a, b) => Term::lam(self.apply_type(a)?, self.apply_term(b)?),
            Term::App(f, x) => Term::app(self.apply_term(f)?, self.apply_term(x)?),
            Term::Pair(l, r) => Term::pair(self.apply_term(l)?, self.apply_term(r)?),
            Term::Proj(w, m) => Term::proj(*w, self.apply_term(m)?),
            Term::Ret(f, m) => Term::ret(*f, self.apply_term(m)?),
            Term::Iota(m) => Term::iota(self.apply_term(m)?),
            Term::Do(f, h, b) => Term::do_(*f, self.apply_term(h)?, self.apply_term(b)?),
        })
    }

    /// Translate every type in a context, keeping the variable names.
    pub fn apply_context(&self, ctx: &Context) -> Result<Context, TranslationError> {
        let mut out = Context::empty();
        for (name, ty) in ctx.iter() {
            out.push(name, self.apply_type(ty)?)
                .expect("translated context repeats no names");
        }
        Ok(out)
    }

    /// Check the structural obligations: every ground and constant is
    /// mapped, mapped types mention only target grounds, source type axioms
    /// stay valid, and each constant's image typechecks (closed) at the
    /// translated type.
    pub fn validate(&self) -> Result<(), TranslationError> {
        for g in self.source.grounds() {
            let ty = self
                .ground_map
                .get(g)
                .ok_or_else(|| TranslationError::UnmappedGround(g.to_string()))?;
            self.target.check_grounds(ty)?;
        }
        for (l, r) in self.source.type_axioms() {
            let vl = self.apply_type(l)?;
            let vr = self.apply_type(r)?;
            if !self.target.type_equal(&vl, &vr)? {
                return Err(TranslationError::TypeAxiomNotPreserved { lhs: vl, rhs: vr });
            }
        }
        let empty = Context::empty();
        for (c, ty) in self.source.constants() {
            let image = self
                .const_map
                .get(c)
                .ok_or_else(|| TranslationError::UnmappedConstant(c.to_string()))?;
            let vty = self.apply_type(ty)?;
            typecheck::check(&self.target, &empty, image, &vty).map_err(|error| {
                TranslationError::IllTypedConstant {
                    constant: c.to_string(),
                    error,
                }
            })?;
        }
        Ok(())
    }

    /// Decide whether the translation preserves every term axiom of the
    /// source. Each translated axiom is handed to the equivalence pipeline
    /// in the target theory; `oracle` (a model of the **target**) powers
    /// refutation. A refuted axiom wins over an undecided one, so the check
    /// keeps going past `Unknown`s and reports the first of whichever it
    /// finds.
    pub fn check(
        &self,
        oracle: Option<&Model>,
        budget: usize,
    ) -> Result<TranslationVerdict, TranslationError> {
        self.validate()?;
        let mut first_unknown: Option<(usize, String, String)> = None;
        for (i, ax) in self.source.term_axioms().iter().enumerate() {
            let ctx = self.apply_context(&ax.context)?;
            let lhs = self.apply_term(&ax.lhs)?;
            let rhs = self.apply_term(&ax.rhs)?;
            match equiv::decide_equal(&self.target, &ctx, &lhs, &rhs, oracle, budget)? {
                Verdict::Equal(_) => {}
                Verdict::Distinct(counter) => {
                    return Ok(TranslationVerdict::FailedAt {
                        axiom_index: i,
                        axiom: ax.to_string(),
                        counter,
                    });
                }
                Verdict::Unknown(reason) => {
                    if first_unknown.is_none() {
                        first_unknown = Some((i, ax.to_string(), reason));
                    }
                }
            }
        }
        Ok(match first_unknown {
            None => TranslationVerdict::Verified,
            Some((axiom_index, axiom, reason)) => TranslationVerdict::Unknown {
                axiom_index,
                axiom,
                reason,
            },
        })
    }

    /// Compose with a second map whose source is this map's target:
    /// `other.compose(self)` translates along `self` first, then `other`.
    pub fn compose(&self, first: &Translation) -> Result<Translation, TranslationError> {
        let mut out = Translation::new(first.source.clone(), self.target.clone());
        for (g, ty) in &first.ground_map {
            out.ground_map.insert(g.clone(), self.apply_type(ty)?);
        }
        for (c, t) in &first.const_map {
            out.const_map.insert(c.clone(), self.apply_term(t)?);
        }
        Ok(out)
    }
}

/// One component of a transformation: the judgement
/// `var : V(ty) |- body : V'(ty)`.
#[derive(Debug, Clone)]
pub struct Component {
    pub ty: Type,
    pub var: String,
    pub body: Term,
}

/// A pointwise comparison of two translations `from` and `to` of the same
/// source theory into the same target theory.
#[derive(Debug, Clone)]
pub struct TranslationTransformation {
    from: Translation,
    to: Translation,
    components: Vec<Component>,
}

impl TranslationTransformation {
    pub fn new(from: Translation, to: Translation) -> TranslationTransformation {
        TranslationTransformation {
            from,
            to,
            components: Vec::new(),
        }
    }

    /// Add the component at source type `ty`. Free names in `body` that
    /// match target constants are resolved immediately.
    pub fn with_component(
        mut self,
        ty: Type,
        var: impl Into<String>,
        body: Term,
    ) -> TranslationTransformation {
        let body = body.resolve_consts(&self.from.target().constant_names());
        self.components.push(Component {
            ty,
            var: var.into(),
            body,
        });
        self
    }

    fn component_for(&self, ty: &Type) -> Option<&Component> {
        if let Some(c) = self.components.iter().find(|c| &c.ty == ty) {
            return Some(c);
        }
        self.components
            .iter()
            .find(|c| self.from.source().type_equal(&c.ty, ty).unwrap_or(false))
    }

    /// Check the naturality square at each probe. A probe is a source-theory
    /// judgement `x : A |- f : B` with exactly one context variable; the
    /// square compares `alpha_B[V(f)/x]` against `V'(f)[alpha_A/x]` in the
    /// context `x : V(A)`. `oracle` is a model of the target theory.
    pub fn check(
        &self,
        probes: &[(Context, Term, Type)],
        oracle: Option<&Model>,
        budget: usize,
    ) -> Result<TransformationVerdict, TranslationError> {
        self.from.validate()?;
        self.to.validate()?;
        let target = self.from.target();
        for comp in &self.components {
            let va = self.from.apply_type(&comp.ty)?;
            let vb = self.to.apply_type(&comp.ty)?;
            let ctx = Context::from_pairs([(comp.var.clone(), va)])
                .expect("a one-entry context repeats no names");
            typecheck::check(target, &ctx, &comp.body, &vb).map_err(|error| {
                TranslationError::IllTypedComponent {
                    ty: comp.ty.clone(),
                    error,
                }
            })?;
        }
        let mut first_unknown: Option<(usize, String)> = None;
        for (i, (ctx, f, b)) in probes.iter().enumerate() {
            let mut entries = ctx.iter();
            let (x, a) = entries.next().ok_or_else(|| TranslationError::BadProbe {
                index: i,
                reason: "the probe context is empty".to_string(),
            })?;
            if entries.next().is_some() {
                return Err(TranslationError::BadProbe {
                    index: i,
                    reason: "the probe context has more than one variable".to_string(),
                });
            }
            typecheck::check(self.from.source(), ctx, f, b).map_err(|e| {
                TranslationError::BadProbe {
                    index: i,
                    reason: format!("the probe does not typecheck: {e}"),
                }
            })?;
            let comp_a = self
                .component_for(a)
                .ok_or_else(|| TranslationError::MissingComponent(a.clone()))?;
            let comp_b = self
                .component_for(b)
                .ok_or_else(|| TranslationError::MissingComponent(b.clone()))?;
            let vf = self.from.apply_term(f)?;
            let wf = self.to.apply_term(f)?;
            // alpha_B applied after V(f): substitute the component's input.
            let lhs = comp_b.body.subst_free(&comp_b.var, &vf);
            // V'(f) applied after alpha_A: rename the component's input to
            // the probe variable, then substitute into the translated probe.
            let alpha_a = comp_a.body.subst_free(&comp_a.var, &Term::free(x));
            let rhs = wf.subst_free(x, &alpha_a);
            let square_ctx = Context::from_pairs([(x.to_string(), self.from.apply_type(a)?)])
                .expect("a one-entry context repeats no names");
            match equiv::decide_equal(target, &square_ctx, &lhs, &rhs, oracle, budget)? {
                Verdict::Equal(_) => {}
                Verdict::Distinct(counter) => {
                    return Ok(TransformationVerdict::Violated {
                        probe_index: i,
                        counter,
                    });
                }
                Verdict::Unknown(reason) => {
                    if first_unknown.is_none() {
                        first_unknown = Some((i, reason));
                    }
                }
            }
        }
        Ok(match first_unknown {
            None => TransformationVerdict::Natural,
            Some((probe_index, reason)) => TransformationVerdict::Unknown {
                probe_index,
                reason,
            },
        })
    }
}

/// A parsed `.csctr` file: the named source and target theory files plus the
/// raw vocabulary maps. Pair it with loaded theories via
/// [`TranslationFile::into_translation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationFile {
    pub source: String,
    pub target: String,
    pub ground_map: BTreeMap<String, Type>,
    pub const_map: BTreeMap<String, Term>,
}

#[derive(Debug, thiserror::Error)]
pub enum TranslationFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
}

/// Parse the `.csctr` translation format:
///
/// ```text
/// source th_z2.csct
/// target th_d4.csct
/// ground G => T 1
/// const act_1 => act_s
/// ```
///
/// Blank lines and `#` comments are ignored. The `source`/`target` values
/// are kept verbatim (the caller resolves them, typically as file paths
/// relative to the `.csctr` file).
pub fn parse_translation_file(src: &str) -> Result<TranslationFile, TranslationFileError> {
    let err = |line: usize, message: String| TranslationFileError::Parse { line, message };
    let mut source = None;
    let mut target = None;
    let mut ground_map = BTreeMap::new();
    let mut const_map = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (directive, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match directive {
            "source" | "target" => {
                if rest.is_empty() {
                    return Err(err(line, format!("`{directive}` needs a value")));
                }
                let slot = if directive == "source" {
                    &mut source
                } else {
                    &mut target
                };
                if slot.is_some() {
                    return Err(err(line, format!("duplicate `{directive}` header")));
                }
                *slot = Some(rest.to_string());
            }
            "ground" | "const" => {
                let (name, image) = rest.split_once("=>").ok_or_else(|| {
                    err(line, format!("expected `{directive} <name> => <image>`"))
                })?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(err(line, format!("`{directive}` needs a name")));
                }
                if directive == "ground" {
                    let ty = parse_type(image.trim())
                        .map_err(|e| err(line, format!("bad type: {e}")))?;
                    if ground_map.insert(name.to_string(), ty).is_some() {
                        return Err(err(line, format!("duplicate mapping for ground `{name}`")));
                    }
                } else {
                    let term = parse_term(image.trim())
                        .map_err(|e| err(line, format!("bad term: {e}")))?;
                    if const_map.insert(name.to_string(), term).is_some() {
                        return Err(err(line, format!("duplicate mapping for constant `{name}`")));
                    }
                }
            }
            other => {
                return Err(err(line, format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(TranslationFile {
        source: source.ok_or(TranslationFileError::MissingHeader("source"))?,
        target: target.ok_or(TranslationFileError::MissingHeader("target"))?,
        ground_map,
        const_map,
    })
}

impl TranslationFile {
    /// Attach loaded theories to the raw maps. Constant images are resolved
    /// against the target's constant names here.
    pub fn into_translation(self, source: Theory, target: Theory) -> Translation {
        let mut v = Translation::new(source, target);
        for (g, ty) in self.ground_map {
            v = v.with_ground(g, ty);
        }
        for (c, t) in self.const_map {
            v = v.with_const(c, t);
        }
        v
    }

    /// Render back to the `.csctr` format accepted by
    /// [`parse_translation_file`].
    pub fn to_csctr(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("source {}\n", self.source));
        out.push_str(&format!("target {}\n", self.target));
        for (g, ty) in &self.ground_map {
            out.push_str(&format!("ground {g} => {ty}\n"));
        }
        for (c, t) in &self.const_map {
            out.push_str(&format!("const {c} => {t}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse_judgement;

    fn z2_writer() -> Theory {
        let z2 = fixtures::z_n(2);
        fixtures::writer_theory(&z2, &z2.centre_submonoid())
    }

    fn d4_writer() -> Theory {
        fixtures::writer_theory(&fixtures::d4(), &fixtures::d4_centre())
    }

    fn d4_model() -> Model {
        fixtures::writer_model(&fixtures::d4(), &fixtures::d4_centre())
    }

    #[test]
    fn identity_translation_verifies() {
        let th = z2_writer();
        let z2 = fixtures::z_n(2);
        let model = fixtures::writer_model(&z2, &z2.centre_submonoid());
        let verdict = Translation::identity(&th)
            .check(Some(&model), crate::DEFAULT_BUDGET)
            .unwrap();
        assert!(verdict.is_verified(), "got {verdict:?}");
    }

    /// Sends the Z2 generator to a reflection of the square but the
    /// distinguished submonoid generator to the central rotation; the axiom
    /// tying the inclusion to the action is then false and the model sees it.
    fn skewed_z2_into_d4() -> Translation {
        Translation::new(z2_writer(), d4_writer())
            .with_const("act_0", Term::free("act_e"))
            .with_const("act_1", Term::free("act_s"))
            .with_const("sact_0", Term::free("sact_e"))
            .with_const("sact_1", Term::free("sact_r2"))
    }

    #[test]
    fn off_centre_mapping_is_refuted_with_a_countermodel() {
        let model = d4_model();
        let verdict = skewed_z2_into_d4()
            .check(Some(&model), crate::DEFAULT_BUDGET)
            .unwrap();
        match verdict {
            TranslationVerdict::FailedAt { axiom, counter, .. } => {
                assert!(axiom.contains("sact_1"), "unexpected axiom: {axiom}");
                assert_ne!(counter.lhs_value, counter.rhs_value);
            }
            other => panic!("expected FailedAt, got {other:?}"),
        }
    }

    #[test]
    fn without_an_oracle_the_bad_mapping_is_merely_unknown() {
        let verdict = skewed_z2_into_d4().check(None, 40).unwrap();
        match verdict {
            TranslationVerdict::Unknown { axiom, .. } => {
                assert!(axiom.contains("sact_1"), "unexpected axiom: {axiom}");
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn ill_typed_constant_image_is_reported() {
        let v = Translation::identity(&z2_writer()).with_const(
            "act_1",
            Term::ret(crate::syntax::Flavour::S, Term::Star),
        );
        match v.check(None, 10) {
            Err(TranslationError::IllTypedConstant { constant, .. }) => {
                assert_eq!(constant, "act_1");
            }
            other => panic!("expected IllTypedConstant, got {other:?}"),
        }
    }

    #[test]
    fn unmapped_vocabulary_is_reported() {
        let mut th = Theory::new();
        th.add_ground("G");
        let v = Translation::new(th.clone(), Theory::new());
        assert!(matches!(
            v.validate(),
            Err(TranslationError::UnmappedGround(g)) if g == "G"
        ));

        let w = Translation::new(th.clone(), th).with_ground("G", Type::ground("G"));
        assert!(w.validate().is_ok());
    }

    #[test]
    fn type_axioms_must_stay_valid_in_the_target() {
        let mut source = Theory::new();
        source.add_ground("A");
        source.add_ground("B");
        source.add_type_axiom(Type::ground("A"), Type::ground("B"));
        let target = Theory::new();

        let collapsing = Translation::new(source.clone(), target.clone())
            .with_ground("A", Type::Unit)
            .with_ground("B", Type::Unit);
        assert!(collapsing.validate().is_ok());

        let separating = Translation::new(source, target)
            .with_ground("A", Type::Unit)
            .with_ground("B", Type::prod(Type::Unit, Type::Unit));
        assert!(matches!(
            separating.validate(),
            Err(TranslationError::TypeAxiomNotPreserved { .. })
        ));
    }

    #[test]
    fn composition_with_the_identity_changes_nothing() {
        let v = skewed_z2_into_d4();
        let post = Translation::identity(&d4_writer()).compose(&v).unwrap();
        let pre = v.compose(&Translation::identity(&z2_writer())).unwrap();
        for composed in [post, pre] {
            for (c, t) in v.const_map() {
                assert_eq!(composed.const_map.get(c), Some(t));
            }
        }
    }

    #[test]
    fn central_component_is_natural() {
        let th = d4_writer();
        let id = Translation::identity(&th);
        let t1 = parse_type("T 1").unwrap();
        let alpha = TranslationTransformation::new(id.clone(), id).with_component(
            t1.clone(),
            "x",
            parse_judgement("[x : T 1] |- do_T _ <- act_r2; x").unwrap().1,
        );
        let (ctx, f) = parse_judgement("[k : T 1] |- do_T _ <- act_r; k").unwrap();
        let f = f.resolve_consts(&th.constant_names());
        let model = d4_model();
        let verdict = alpha
            .check(&[(ctx, f, t1)], Some(&model), crate::DEFAULT_BUDGET)
            .unwrap();
        assert!(verdict.is_natural(), "got {verdict:?}");
    }

    #[test]
    fn non_central_component_violates_naturality() {
        let th = d4_writer();
        let id = Translation::identity(&th);
        let t1 = parse_type("T 1").unwrap();
        let alpha = TranslationTransformation::new(id.clone(), id).with_component(
            t1.clone(),
            "x",
            parse_judgement("[x : T 1] |- do_T _ <- act_s; x").unwrap().1,
        );
        let (ctx, f) = parse_judgement("[k : T 1] |- do_T _ <- act_r; k").unwrap();
        let f = f.resolve_consts(&th.constant_names());
        let model = d4_model();
        let verdict = alpha
            .check(&[(ctx, f, t1)], Some(&model), crate::DEFAULT_BUDGET)
            .unwrap();
        match verdict {
            TransformationVerdict::Violated { counter, .. } => {
                // s then r aggregates to r3s; r then s aggregates to rs.
                assert_ne!(counter.lhs_value, counter.rhs_value);
            }
            other => panic!("expected Violated, got {other:?}"),
        }
    }

    #[test]
    fn csctr_files_round_trip() {
        let text = "\
# map the cyclic actions onto the square
source th_z2.csct
target th_d4.csct

ground G => T 1 * 1
const act_1 => do_T _ <- act_s; ret_T *
";
        let file = parse_translation_file(text).unwrap();
        assert_eq!(file.source, "th_z2.csct");
        assert_eq!(file.target, "th_d4.csct");
        let reparsed = parse_translation_file(&file.to_csctr()).unwrap();
        assert_eq!(reparsed, file);
    }

    #[test]
    fn csctr_errors_carry_line_numbers() {
        let no_arrow = "source a\ntarget b\nconst c act_e";
        match parse_translation_file(no_arrow) {
            Err(TranslationFileError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_translation_file("target b\n"),
            Err(TranslationFileError::MissingHeader("source"))
        ));
    }

    #[test]
    fn loaded_files_check_like_hand_built_translations() {
        let text = "\
source th_z2.csct
target th_d4.csct
const act_0 => act_e
const act_1 => act_s
const sact_0 => sact_e
const sact_1 => sact_r2
";
        let file = parse_translation_file(text).unwrap();
        let v = file.into_translation(z2_writer(), d4_writer());
        let model = d4_model();
        let verdict = v.check(Some(&model), crate::DEFAULT_BUDGET).unwrap();
        assert!(matches!(verdict, TranslationVerdict::FailedAt { .. }));
    }
}
