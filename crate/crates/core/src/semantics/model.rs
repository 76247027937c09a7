//! Models: interpreting the calculus in finite sets.
//!
//! A model chooses a strong monad for the `T` layer, a monad for the `S`
//! layer, a pointwise inclusion between them, finite sets for ground
//! types, and elements for constants. Types denote finite sets built with
//! the structural encodings from [`crate::semantics`]; a term in context
//! denotes the full value table of its environment-indexed function, so
//! two terms are semantically equal exactly when their tables agree — and
//! a disagreement pinpoints an environment.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::centre::{is_central_element, FiniteMonad, InclusionMap};
use crate::syntax::{Context, Flavour, Proj, Term, Type, Var};
use crate::theory::Theory;
use crate::typecheck::{self, TypeError};

use super::{
    apply_encoded, decode_table, encode_table, guard_size, pair_index, power, product,
    unpair_index, FinFunction, FinSet, SizeBlowup,
};

#[derive(Clone, Debug, thiserror::Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Size(#[from] SizeBlowup),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("ground type `{0}` has no interpretation in this model")]
    UninterpretedGround(String),
    #[error("constant `{0}` has no interpretation in this model")]
    UninterpretedConstant(String),
}

/// A structural problem found while validating a model against a theory.
#[derive(Clone, Debug, thiserror::Error)]
pub enum ModelDiagnostic {
    #[error("ground type `{0}` is declared but not interpreted")]
    MissingGround(String),
    #[error("ground type `{0}` is interpreted by the empty set")]
    EmptyGround(String),
    #[error("type equation {lhs} = {rhs} maps to sets of sizes {lhs_size} ≠ {rhs_size}")]
    TypeAxiomSizeMismatch {
        lhs: String,
        rhs: String,
        lhs_size: usize,
        rhs_size: usize,
    },
    #[error("constant `{0}` is declared but not interpreted")]
    MissingConstant(String),
    #[error("constant `{name}` is interpreted by {value}, outside its carrier of size {size}")]
    ConstantOutOfRange {
        name: String,
        value: usize,
        size: usize,
    },
    #[error("the inclusion breaks {law} at base size {size}: {witness}")]
    IotaLaw {
        law: &'static str,
        size: usize,
        witness: String,
    },
    #[error("the inclusion is not injective at base size {size}: elements {a} and {b} collide")]
    IotaNotInjective { size: usize, a: usize, b: usize },
    #[error("the inclusion image is not central at base size {size}: element {elem}")]
    IotaNotCentral { size: usize, elem: usize },
    #[error("{context}: {error}")]
    Unrepresentable { context: String, error: String },
}

/// A finite model of the two-layer calculus.
pub struct Model {
    name: String,
    t_monad: Arc<dyn FiniteMonad>,
    s_monad: Arc<dyn FiniteMonad>,
    iota: Arc<dyn InclusionMap>,
    grounds: BTreeMap<String, FinSet>,
    consts: BTreeMap<String, usize>,
    cap: usize,
}

impl Model {
    pub fn new(
        name: impl Into<String>,
        t_monad: Arc<dyn FiniteMonad>,
        s_monad: Arc<dyn FiniteMonad>,
        iota: Arc<dyn InclusionMap>,
    ) -> Model {
        let cap = t_monad.size_cap();
        Model {
            name: name.into(),
            t_monad,
            s_monad,
            iota,
            grounds: BTreeMap::new(),
            consts: BTreeMap::new(),
            cap,
        }
    }

    pub fn with_ground(mut self, name: impl Into<String>, set: FinSet) -> Model {
        self.grounds.insert(name.into(), set);
        self
    }

    pub fn with_const(mut self, name: impl Into<String>, value: usize) -> Model {
        self.consts.insert(name.into(), value);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn monad(&self, flavour: Flavour) -> &dyn FiniteMonad {
        match flavour {
            Flavour::S => self.s_monad.as_ref(),
            Flavour::T => self.t_monad.as_ref(),
        }
    }

    pub fn iota(&self) -> &dyn InclusionMap {
        self.iota.as_ref()
    }

    pub fn ground(&self, name: &str) -> Option<&FinSet> {
        self.grounds.get(name)
    }

    pub fn constant_value(&self, name: &str) -> Option<usize> {
        self.consts.get(name).copied()
    }

    /// The finite set denoted by a type.
    pub fn interpret_type(&self, ty: &Type) -> Result<FinSet, SemanticsError> {
        match ty {
            Type::Unit => Ok(FinSet::unit()),
            Type::Ground(g) => self
                .grounds
                .get(g)
                .cloned()
                .ok_or_else(|| SemanticsError::UninterpretedGround(g.clone())),
            Type::Arrow(a, b) => {
                let dom = self.interpret_type(a)?;
                let cod = self.interpret_type(b)?;
                Ok(power(&dom, &cod, self.cap)?)
            }
            Type::Prod(a, b) => {
                let left = self.interpret_type(a)?;
                let right = self.interpret_type(b)?;
                Ok(product(&left, &right, self.cap)?)
            }
            Type::Mon(flavour, a) => {
                let inner = self.interpret_type(a)?;
                Ok(self.monad(*flavour).carrier(&inner)?)
            }
        }
    }

    /// The environment set of a context: the left-to-right product of the
    /// entry interpretations, with the first entry most significant.
    pub fn environment(&self, ctx: &Context) -> Result<(Vec<FinSet>, FinSet), SemanticsError> {
        let mut sets = Vec::new();
        let mut size: u128 = 1;
        for (_, ty) in ctx.iter() {
            let s = self.interpret_type(ty)?;
            size *= s.size() as u128;
            guard_size(size, self.cap).map_err(SemanticsError::Size)?;
            sets.push(s);
        }
        let total = size as usize;
        let env = if total <= 512 && sets.iter().all(|s| s.has_labels()) {
            let mut labels = Vec::with_capacity(total);
            for idx in 0..total {
                let vals = split_env(&sets, idx);
                let parts: Vec<String> = ctx
                    .iter()
                    .zip(&vals)
                    .map(|((n, _), &v)| format!("{n}={}", sets[pos_of(ctx, n)].label(v)))
                    .collect();
                labels.push(if parts.is_empty() {
                    "·".to_string()
                } else {
                    parts.join(", ")
                });
            }
            FinSet::labeled(labels)
        } else {
            FinSet::of_size(total)
        };
        Ok((sets, env))
    }

    /// Interpret a typechecked term in context as its full value table.
    pub fn interpret_term(
        &self,
        th: &Theory,
        ctx: &Context,
        term: &Term,
    ) -> Result<FinFunction, SemanticsError> {
        let rty = typecheck::infer(th, ctx, term)?;
        let rset = self.interpret_type(&rty)?;
        let (sets, env) = self.environment(ctx)?;
        let mut table = Vec::with_capacity(env.size());
        for idx in 0..env.size() {
            let vals = split_env(&sets, idx);
            let named: Vec<(String, Type, FinSet, usize)> = ctx
                .iter()
                .zip(sets.iter())
                .zip(vals.iter())
                .map(|(((n, t), s), &v)| (n.to_string(), t.clone(), s.clone(), v))
                .collect();
            let mut eval = Eval {
                model: self,
                th,
                named,
                binders: Vec::new(),
            };
            let (_, val) = eval.eval(term)?;
            table.push(val);
        }
        Ok(FinFunction::new(env, rset, table))
    }

    /// Check the model's structural obligations against a theory: every
    /// ground and constant interpreted, type equations mapped to carriers
    /// of equal size, and the inclusion a componentwise injective monad
    /// morphism with a central image (probed on base sets drawn from
    /// `test_sizes`). Function-space quantifications that would exceed the
    /// cap are silently left unprobed.
    pub fn validate(&self, th: &Theory, test_sizes: &[usize]) -> Result<(), Vec<ModelDiagnostic>> {
        let mut out = Vec::new();
        for g in th.grounds() {
            match self.grounds.get(g) {
                None => out.push(ModelDiagnostic::MissingGround(g.to_string())),
                Some(s) if s.is_empty() => out.push(ModelDiagnostic::EmptyGround(g.to_string())),
                Some(_) => {}
            }
        }
        if !out.is_empty() {
            // missing grounds make everything downstream noise
            return Err(out);
        }
        for (lhs, rhs) in th.type_axioms() {
            match (self.interpret_type(lhs), self.interpret_type(rhs)) {
                (Ok(a), Ok(b)) => {
                    if a.size() != b.size() {
                        out.push(ModelDiagnostic::TypeAxiomSizeMismatch {
                            lhs: crate::syntax::print_type(lhs),
                            rhs: crate::syntax::print_type(rhs),
                            lhs_size: a.size(),
                            rhs_size: b.size(),
                        });
                    }
                }
                (Err(e), _) | (_, Err(e)) => out.push(ModelDiagnostic::Unrepresentable {
                    context: format!("type equation {}", crate::syntax::print_type(lhs)),
                    error: e.to_string(),
                }),
            }
        }
        for (name, ty) in th.constants() {
            match self.consts.get(name) {
                None => out.push(ModelDiagnostic::MissingConstant(name.to_string())),
                Some(&v) => match self.interpret_type(ty) {
                    Ok(set) if v >= set.size() => out.push(ModelDiagnostic::ConstantOutOfRange {
                        name: name.to_string(),
                        value: v,
                        size: set.size(),
                    }),
                    Ok(_) => {}
                    Err(e) => out.push(ModelDiagnostic::Unrepresentable {
                        context: format!("constant {name}"),
                        error: e.to_string(),
                    }),
                },
            }
        }
        self.validate_iota(test_sizes, &mut out);
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn validate_iota(&self, test_sizes: &[usize], out: &mut Vec<ModelDiagnostic>) {
        let s_m = self.s_monad.as_ref();
        let t_m = self.t_monad.as_ref();
        let mut sizes: Vec<usize> = test_sizes.to_vec();
        sizes.sort_unstable();
        sizes.dedup();
        for &n in &sizes {
            let x = FinSet::of_size(n);
            let (sx, _tx) = match (s_m.carrier(&x), t_m.carrier(&x)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    out.push(ModelDiagnostic::Unrepresentable {
                        context: format!("inclusion at base size {n}"),
                        error: e.to_string(),
                    });
                    continue;
                }
            };
            // injectivity
            let image: Vec<usize> = sx.elements().map(|m| self.iota.at(&x, m)).collect();
            'inj: for i in 0..image.len() {
                for j in i + 1..image.len() {
                    if image[i] == image[j] {
                        out.push(ModelDiagnostic::IotaNotInjective { size: n, a: i, b: j });
                        break 'inj;
                    }
                }
            }
            // unit
            for v in x.elements() {
                if self.iota.at(&x, s_m.eta(&x, v)) != t_m.eta(&x, v) {
                    out.push(ModelDiagnostic::IotaLaw {
                        law: "the unit diagram",
                        size: n,
                        witness: format!("point {v}"),
                    });
                    break;
                }
            }
            // centrality of the image
            for m in sx.elements() {
                match is_central_element(t_m, &x, self.iota.at(&x, m), &sizes) {
                    Ok(true) => {}
                    Ok(false) => {
                        out.push(ModelDiagnostic::IotaNotCentral {
                            size: n,
                            elem: m,
                        });
                        break;
                    }
                    Err(e) => {
                        out.push(ModelDiagnostic::Unrepresentable {
                            context: format!("centrality probe at base size {n}"),
                            error: e.to_string(),
                        });
                        break;
                    }
                }
            }
            // bind diagram against every other test size, when enumerable
            for &ny in &sizes {
                let y = FinSet::of_size(ny);
                let sy = match s_m.carrier(&y) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                if t_m.carrier(&y).is_err() {
                    continue;
                }
                let k_total = crate::semantics::sat_pow(sy.size(), n);
                if k_total > 10_000 {
                    continue; // unprobed, documented in the method doc
                }
                let k_count = k_total as usize;
                'bindlaw: for k_idx in 0..k_count {
                    let k = decode_table(n, sy.size(), k_idx);
                    for m in sx.elements() {
                        let lhs = self.iota.at(&y, s_m.bind(&x, &y, m, &mut |v| k[v]));
                        let rhs = t_m.bind(&x, &y, self.iota.at(&x, m), &mut |v| {
                            self.iota.at(&y, k[v])
                        });
                        if lhs != rhs {
                            out.push(ModelDiagnostic::IotaLaw {
                                law: "the bind diagram",
                                size: n,
                                witness: format!("m={m}, k={k:?} (target size {ny})"),
                            });
                            break 'bindlaw;
                        }
                    }
                }
            }
        }
    }
}

fn pos_of(ctx: &Context, name: &str) -> usize {
    ctx.iter().position(|(n, _)| n == name).unwrap()
}

/// Decode a big-endian environment index into per-entry values.
fn split_env(sets: &[FinSet], mut idx: usize) -> Vec<usize> {
    let mut vals = vec![0usize; sets.len()];
    for (slot, set) in vals.iter_mut().zip(sets.iter()).rev() {
        *slot = idx % set.size();
        idx /= set.size();
    }
    vals
}

struct Eval<'a> {
    model: &'a Model,
    th: &'a Theory,
    named: Vec<(String, Type, FinSet, usize)>,
    binders: Vec<(Type, FinSet, usize)>,
}

impl<'a> Eval<'a> {
    fn eval(&mut self, term: &Term) -> Result<(Type, usize), SemanticsError> {
        match term {
            Term::Var(Var::Bound(i)) => {
                let (ty, _, v) = &self.binders[self.binders.len() - 1 - i];
                Ok((ty.clone(), *v))
            }
            Term::Var(Var::Free(name)) => {
                if let Some((_, ty, _, v)) =
                    self.named.iter().rev().find(|(n, _, _, _)| n == name)
                {
                    Ok((ty.clone(), *v))
                } else {
                    self.constant(name)
                }
            }
            Term::Const(name) => self.constant(name),
            Term::Star => Ok((Type::Unit, 0)),
            Term::Lam(dom, body) => {
                let dom_set = self.model.interpret_type(dom)?;
                let mut table = Vec::with_capacity(dom_set.size());
                let mut body_ty = None;
                for a in dom_set.elements() {
                    self.binders.push(((**dom).clone(), dom_set.clone(), a));
                    let r = self.eval(body);
                    self.binders.pop();
                    let (bt, bv) = r?;
                    body_ty = Some(bt);
                    table.push(bv);
                }
                let body_ty = body_ty.expect("interpretations are nonempty");
                let cod_set = self.model.interpret_type(&body_ty)?;
                let arrow_ty = Type::arrow((**dom).clone(), body_ty);
                // building the function-space carrier first enforces the
                // size cap, so the packed table index cannot overflow
                self.model.interpret_type(&arrow_ty)?;
                Ok((arrow_ty, encode_table(cod_set.size(), &table)))
            }
            Term::App(f, a) => {
                let (fty, fv) = self.eval(f)?;
                let (dom_ty, cod_ty) = self
                    .th
                    .arrow_shape(&fty)
                    .expect("grounds are declared")
                    .expect("typechecked application");
                let (_, av) = self.eval(a)?;
                let dom_set = self.model.interpret_type(&dom_ty)?;
                let cod_set = self.model.interpret_type(&cod_ty)?;
                Ok((
                    cod_ty,
                    apply_encoded(dom_set.size(), cod_set.size(), fv, av),
                ))
            }
            Term::Pair(l, r) => {
                let (lty, lv) = self.eval(l)?;
                let (rty, rv) = self.eval(r)?;
                let rset = self.model.interpret_type(&rty)?;
                Ok((
                    Type::prod(lty, rty),
                    pair_index(rset.size(), lv, rv),
                ))
            }
            Term::Proj(side, p) => {
                let (pty, pv) = self.eval(p)?;
                let (lty, rty) = self
                    .th
                    .prod_shape(&pty)
                    .expect("grounds are declared")
                    .expect("typechecked projection");
                let rset = self.model.interpret_type(&rty)?;
                let (lv, rv) = unpair_index(rset.size(), pv);
                Ok(match side {
                    Proj::Fst => (lty, lv),
                    Proj::Snd => (rty, rv),
                })
            }
            Term::Ret(flavour, m) => {
                let (ty, v) = self.eval(m)?;
                let set = self.model.interpret_type(&ty)?;
                let monad = self.model.monad(*flavour);
                monad.carrier(&set)?;
                Ok((Type::mon(*flavour, ty), monad.eta(&set, v)))
            }
            Term::Iota(m) => {
                let (mty, mv) = self.eval(m)?;
                let (_, inner) = self
                    .th
                    .mon_shape(&mty)
                    .expect("grounds are declared")
                    .expect("typechecked inclusion");
                let set = self.model.interpret_type(&inner)?;
                self.model.monad(Flavour::T).carrier(&set)?;
                Ok((
                    Type::mon(Flavour::T, inner),
                    self.model.iota().at(&set, mv),
                ))
            }
            Term::Do(flavour, head, body) => {
                let (hty, hv) = self.eval(head)?;
                let (_, elem_ty) = self
                    .th
                    .mon_shape(&hty)
                    .expect("grounds are declared")
                    .expect("typechecked do head");
                let elem_set = self.model.interpret_type(&elem_ty)?;
                let mut vals = Vec::with_capacity(elem_set.size());
                let mut body_ty = None;
                for a in elem_set.elements() {
                    self.binders
                        .push((elem_ty.clone(), elem_set.clone(), a));
                    let r = self.eval(body);
                    self.binders.pop();
                    let (bt, bv) = r?;
                    body_ty = Some(bt);
                    vals.push(bv);
                }
                let body_ty = body_ty.expect("interpretations are nonempty");
                let (_, inner_ty) = self
                    .th
                    .mon_shape(&body_ty)
                    .expect("grounds are declared")
                    .expect("typechecked do body");
                let inner_set = self.model.interpret_type(&inner_ty)?;
                let monad = self.model.monad(*flavour);
                monad.carrier(&inner_set)?;
                Ok((
                    Type::mon(*flavour, inner_ty),
                    monad.bind(&elem_set, &inner_set, hv, &mut |a| vals[a]),
                ))
            }
        }
    }

    fn constant(&self, name: &str) -> Result<(Type, usize), SemanticsError> {
        let ty = self
            .th
            .constant_type(name)
            .cloned()
            .ok_or_else(|| SemanticsError::UninterpretedConstant(name.to_string()))?;
        let v = self
            .model
            .constant_value(name)
            .ok_or_else(|| SemanticsError::UninterpretedConstant(name.to_string()))?;
        Ok((ty, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centre::{EtaInclusion, IdentityMonad, WriterMonad};
    use crate::fixtures;
    use crate::syntax::parse_judgement;

    fn d4_model_and_theory() -> (Model, Theory) {
        let monoid = fixtures::d4();
        let sub = fixtures::d4_centre();
        let th = fixtures::writer_theory(&monoid, &sub);
        let t_monad = Arc::new(WriterMonad::new(monoid.clone()));
        let s_monad = Arc::new(WriterMonad::new(sub.monoid.clone()));
        let iota = Arc::new(crate::centre::WriterInclusion::new(&sub, &monoid));
        let mut model = Model::new("writer-d4", t_monad, s_monad, iota);
        for c in 0..monoid.size() {
            model = model.with_const(format!("act_{}", monoid.label(c)), c);
        }
        for s in 0..sub.monoid.size() {
            model = model.with_const(format!("sact_{}", sub.monoid.label(s)), s);
        }
        (model, th)
    }

    #[test]
    fn d4_writer_model_validates() {
        let (model, th) = d4_model_and_theory();
        let r = model.validate(&th, &[1, 2]);
        assert!(r.is_ok(), "{:?}", r.err());
    }

    #[test]
    fn rotations_model_fails_centrality() {
        let monoid = fixtures::d4();
        let sub = fixtures::d4_rotations();
        let th = fixtures::writer_theory(&monoid, &sub);
        let t_monad = Arc::new(WriterMonad::new(monoid.clone()));
        let s_monad = Arc::new(WriterMonad::new(sub.monoid.clone()));
        let iota = Arc::new(crate::centre::WriterInclusion::new(&sub, &monoid));
        let mut model = Model::new("writer-d4-rot", t_monad, s_monad, iota);
        for c in 0..monoid.size() {
            model = model.with_const(format!("act_{}", monoid.label(c)), c);
        }
        for s in 0..sub.monoid.size() {
            model = model.with_const(format!("sact_{}", sub.monoid.label(s)), s);
        }
        let errs = model.validate(&th, &[1, 2]).unwrap_err();
        assert!(errs
            .iter()
            .any(|d| matches!(d, ModelDiagnostic::IotaNotCentral { .. })));
    }

    #[test]
    fn interpretation_matches_hand_computation() {
        let (model, th) = d4_model_and_theory();
        // do _ <- act_r; do _ <- act_s; k  at k = (*, c) evaluates to (*, r·s·c)
        let (ctx, term) =
            parse_judgement("[k : T 1] |- do_T _ <- act_r; do_T _ <- act_s; k").unwrap();
        let term = term.resolve_consts(&th.constant_names());
        let f = model.interpret_term(&th, &ctx, &term).unwrap();
        let d4 = fixtures::d4();
        let rs = d4.op(1, 4);
        for c in 0..8 {
            assert_eq!(f.apply(c), d4.op(rs, c));
        }
    }

    #[test]
    fn lambda_and_projection_evaluate_pointwise() {
        let th = Theory::new();
        let t_monad: Arc<dyn FiniteMonad> = Arc::new(IdentityMonad::new());
        let s_monad: Arc<dyn FiniteMonad> = Arc::new(IdentityMonad::new());
        let iota = Arc::new(EtaInclusion {
            target: t_monad.clone(),
        });
        let model = Model::new("trivial", t_monad, s_monad, iota);
        let (ctx, term) = parse_judgement("[p : 1 * 1] |- (\\x : 1 * 1. <snd x, fst x>) p").unwrap();
        let f = model.interpret_term(&th, &ctx, &term).unwrap();
        assert_eq!(f.table(), &[0]);
        let rty = typecheck::infer(&th, &ctx, &term).unwrap();
        assert_eq!(crate::syntax::print_type(&rty), "1 * 1");
    }

    #[test]
    fn iota_commutes_with_ret_in_the_model() {
        let (model, th) = d4_model_and_theory();
        let (ctx, lhs) = parse_judgement("iota (ret_S *)").unwrap();
        let (_, rhs) = parse_judgement("ret_T *").unwrap();
        let fl = model.interpret_term(&th, &ctx, &lhs).unwrap();
        let fr = model.interpret_term(&th, &ctx, &rhs).unwrap();
        assert_eq!(fl.table(), fr.table());
    }
}
