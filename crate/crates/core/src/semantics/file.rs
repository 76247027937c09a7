//! Line-oriented model files (`.cscm`).
//!
//! A model file names finite algebraic data — a monoid (with an optional
//! central submonoid), a semiring, plain labeled sets — and wires ground
//! types and constants to them. `#` starts a comment; blank lines are
//! ignored. Directives:
//!
//! ```text
//! model writer-d4
//! monoid D4
//! elements e r r2 r3 s rs r2s r3s
//! unit e
//! mult e r r2 r3 s rs r2s r3s      # one row per left factor, in order
//! ...
//! central-submonoid e r2           # omit to use the full centre
//! semiring Bool
//! elements 0 1
//! zero 0
//! one 1
//! add 0 1                          # one row per left summand
//! add 1 1
//! mul 0 0
//! mul 0 1
//! set Bit 0 1
//! ground G = Bit
//! const c = r2                     # element, by label or index
//! const f = table 1 0              # function table, entries in domain order
//! ```
//!
//! Constant values are resolved against a theory when the file is turned
//! into a [`Model`]: labels are looked up first in the carrier of the
//! constant's type, then (for one-point writer carriers) in the monoid or
//! submonoid, and finally parsed as a bare index.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::centre::{WriterInclusion, WriterMonad};
use crate::syntax::{Flavour, Type};
use crate::theory::Theory;

use super::{encode_table, AlgebraError, FinMonoid, FinSemiring, FinSet, Model, Submonoid};

#[derive(Clone, Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Build(String),
}

/// Which entry of a model file a constant is wired to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstSpec {
    /// A single element, written as a label or a bare index.
    Element(String),
    /// A function table: one codomain entry per domain element, in order.
    Table(Vec<String>),
}

/// The parsed contents of a `.cscm` file.
#[derive(Clone, Debug, Default)]
pub struct ModelFile {
    pub name: String,
    pub monoid: Option<FinMonoid>,
    pub central: Option<Vec<usize>>,
    pub semiring: Option<FinSemiring>,
    pub sets: BTreeMap<String, FinSet>,
    pub grounds: BTreeMap<String, String>,
    pub consts: BTreeMap<String, ConstSpec>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, ModelFileError> {
        Parser::new(text).run()
    }

    /// The central submonoid to use for the writer model: the explicit
    /// `central-submonoid` subset if given, otherwise the full centre.
    pub fn submonoid(&self) -> Result<Option<Submonoid>, ModelFileError> {
        let Some(monoid) = &self.monoid else {
            return Ok(None);
        };
        match &self.central {
            Some(subset) => {
                let name = format!("{}-central", monoid_name(monoid));
                Ok(Some(monoid.submonoid(name, subset)?))
            }
            None => Ok(Some(monoid.centre_submonoid())),
        }
    }

    /// Assemble the writer model over the file's monoid, resolving ground
    /// types and constants against `th`.
    pub fn build_writer_model(&self, th: &Theory) -> Result<Model, ModelFileError> {
        self.build_writer_model_with_cap(th, crate::DEFAULT_SIZE_CAP)
    }

    /// [`ModelFile::build_writer_model`] with an explicit carrier size cap.
    pub fn build_writer_model_with_cap(
        &self,
        th: &Theory,
        cap: usize,
    ) -> Result<Model, ModelFileError> {
        let monoid = self.monoid.clone().ok_or_else(|| {
            ModelFileError::Build("the file declares no monoid to build a writer model on".into())
        })?;
        let sub = self.submonoid()?.expect("monoid is present");
        let t_monad = Arc::new(WriterMonad::new(monoid.clone()).with_cap(cap));
        let s_monad = Arc::new(WriterMonad::new(sub.monoid.clone()).with_cap(cap));
        let iota = Arc::new(WriterInclusion::new(&sub, &monoid));
        let mut model = Model::new(self.name.clone(), t_monad, s_monad, iota);
        for (ground, set_name) in &self.grounds {
            let set = self.sets.get(set_name).ok_or_else(|| {
                ModelFileError::Build(format!(
                    "ground `{ground}` refers to undeclared set `{set_name}`"
                ))
            })?;
            model = model.with_ground(ground.clone(), set.clone());
        }
        for (name, spec) in &self.consts {
            let ty = th.constant_type(name).ok_or_else(|| {
                ModelFileError::Build(format!(
                    "constant `{name}` is not declared by the theory"
                ))
            })?;
            let value = self.resolve_const(&model, th, name, ty, spec)?;
            model = model.with_const(name.clone(), value);
        }
        Ok(model)
    }

    fn resolve_const(
        &self,
        model: &Model,
        th: &Theory,
        name: &str,
        ty: &Type,
        spec: &ConstSpec,
    ) -> Result<usize, ModelFileError> {
        let set = model.interpret_type(ty).map_err(|e| {
            ModelFileError::Build(format!("constant `{name}`: {e}"))
        })?;
        match spec {
            ConstSpec::Element(label) => {
                let v = self
                    .element_by_label(model, ty, &set, label)
                    .ok_or_else(|| {
                        ModelFileError::Build(format!(
                            "constant `{name}`: no element labeled `{label}` in {set}"
                        ))
                    })?;
                if v >= set.size() {
                    return Err(ModelFileError::Build(format!(
                        "constant `{name}`: index {v} out of range for carrier of size {}",
                        set.size()
                    )));
                }
                Ok(v)
            }
            ConstSpec::Table(entries) => {
                let (dom, cod) = th
                    .arrow_shape(ty)
                    .map_err(|e| ModelFileError::Build(format!("constant `{name}`: {e}")))?
                    .ok_or_else(|| {
                        ModelFileError::Build(format!(
                            "constant `{name}`: a table needs a function type"
                        ))
                    })?;
                let dom_set = model.interpret_type(&dom).map_err(|e| {
                    ModelFileError::Build(format!("constant `{name}`: {e}"))
                })?;
                let cod_set = model.interpret_type(&cod).map_err(|e| {
                    ModelFileError::Build(format!("constant `{name}`: {e}"))
                })?;
                if entries.len() != dom_set.size() {
                    return Err(ModelFileError::Build(format!(
                        "constant `{name}`: table has {} entries, domain has {}",
                        entries.len(),
                        dom_set.size()
                    )));
                }
                let mut table = Vec::with_capacity(entries.len());
                for entry in entries {
                    let v = self
                        .element_by_label(model, &cod, &cod_set, entry)
                        .filter(|&v| v < cod_set.size())
                        .ok_or_else(|| {
                            ModelFileError::Build(format!(
                                "constant `{name}`: no element labeled `{entry}` in {cod_set}"
                            ))
                        })?;
                    table.push(v);
                }
                Ok(encode_table(cod_set.size(), &table))
            }
        }
    }

    fn element_by_label(
        &self,
        _model: &Model,
        ty: &Type,
        set: &FinSet,
        label: &str,
    ) -> Option<usize> {
        if let Some(v) = set.index_of_label(label) {
            return Some(v);
        }
        // writer carriers over the one-point set coincide with the monoid
        if let Type::Mon(flavour, inner) = ty {
            if matches!(**inner, Type::Unit) {
                match flavour {
                    Flavour::T => {
                        if let Some(m) = &self.monoid {
                            if let Some(v) = m.index_of_label(label) {
                                return Some(v);
                            }
                        }
                    }
                    Flavour::S => {
                        if let Ok(Some(sub)) = self.submonoid() {
                            if let Some(v) = sub.monoid.index_of_label(label) {
                                return Some(v);
                            }
                        }
                    }
                }
            }
        }
        label.parse::<usize>().ok()
    }
}

fn monoid_name(m: &FinMonoid) -> String {
    m.name().to_string()
}

/// Render a model file back to text.
pub fn serialize_model_file(file: &ModelFile) -> String {
    let mut out = String::new();
    if !file.name.is_empty() {
        out.push_str(&format!("model {}\n", file.name));
    }
    if let Some(m) = &file.monoid {
        out.push_str(&format!("monoid {}\n", m.name()));
        let labels: Vec<String> = (0..m.size()).map(|i| m.label(i)).collect();
        out.push_str(&format!("elements {}\n", labels.join(" ")));
        out.push_str(&format!("unit {}\n", m.label(m.unit())));
        for a in 0..m.size() {
            let row: Vec<String> = (0..m.size()).map(|b| m.label(m.op(a, b))).collect();
            out.push_str(&format!("mult {}\n", row.join(" ")));
        }
    }
    if let (Some(m), Some(central)) = (&file.monoid, &file.central) {
        let labels: Vec<String> = central.iter().map(|&i| m.label(i)).collect();
        out.push_str(&format!("central-submonoid {}\n", labels.join(" ")));
    }
    if let Some(s) = &file.semiring {
        out.push_str(&format!("semiring {}\n", s.name()));
        let labels: Vec<String> = (0..s.size()).map(|i| s.label(i)).collect();
        out.push_str(&format!("elements {}\n", labels.join(" ")));
        out.push_str(&format!("zero {}\n", s.label(s.zero())));
        out.push_str(&format!("one {}\n", s.label(s.one())));
        for a in 0..s.size() {
            let row: Vec<String> = (0..s.size()).map(|b| s.label(s.add(a, b))).collect();
            out.push_str(&format!("add {}\n", row.join(" ")));
        }
        for a in 0..s.size() {
            let row: Vec<String> = (0..s.size()).map(|b| s.label(s.mul(a, b))).collect();
            out.push_str(&format!("mul {}\n", row.join(" ")));
        }
    }
    for (name, set) in &file.sets {
        let labels: Vec<String> = (0..set.size()).map(|i| set.label(i)).collect();
        out.push_str(&format!("set {} {}\n", name, labels.join(" ")));
    }
    for (ground, set_name) in &file.grounds {
        out.push_str(&format!("ground {ground} = {set_name}\n"));
    }
    for (name, spec) in &file.consts {
        match spec {
            ConstSpec::Element(l) => out.push_str(&format!("const {name} = {l}\n")),
            ConstSpec::Table(es) => {
                out.push_str(&format!("const {name} = table {}\n", es.join(" ")))
            }
        }
    }
    out
}

struct Parser<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

struct RawAlgebra {
    name: String,
    elements: Vec<String>,
    special: BTreeMap<&'static str, String>,
    rows: BTreeMap<&'static str, Vec<Vec<String>>>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let uncommented = raw.split('#').next().unwrap_or("");
                let words: Vec<&str> = uncommented.split_whitespace().collect();
                if words.is_empty() {
                    None
                } else {
                    Some((i + 1, words))
                }
            })
            .collect();
        Parser { lines, pos: 0 }
    }

    fn fail<T>(&self, line: usize, message: impl Into<String>) -> Result<T, ModelFileError> {
        Err(ModelFileError::Parse {
            line,
            message: message.into(),
        })
    }

    fn run(mut self) -> Result<ModelFile, ModelFileError> {
        let mut file = ModelFile::default();
        while self.pos < self.lines.len() {
            let (line, words) = self.lines[self.pos].clone();
            match words[0] {
                "model" => {
                    if words.len() != 2 {
                        return self.fail(line, "expected `model <name>`");
                    }
                    file.name = words[1].to_string();
                    self.pos += 1;
                }
                "monoid" => {
                    let raw = self.algebra_block(line, &words, &["unit"], &["mult"])?;
                    file.monoid = Some(self.finish_monoid(line, raw)?);
                }
                "semiring" => {
                    let raw =
                        self.algebra_block(line, &words, &["zero", "one"], &["add", "mul"])?;
                    file.semiring = Some(self.finish_semiring(line, raw)?);
                }
                "central-submonoid" => {
                    let Some(m) = &file.monoid else {
                        return self.fail(line, "central-submonoid before any monoid");
                    };
                    let mut subset = Vec::new();
                    for w in &words[1..] {
                        match m.index_of_label(w) {
                            Some(i) => subset.push(i),
                            None => {
                                return self
                                    .fail(line, format!("`{w}` is not an element of {}", m.name()))
                            }
                        }
                    }
                    file.central = Some(subset);
                    self.pos += 1;
                }
                "set" => {
                    if words.len() < 3 {
                        return self.fail(line, "expected `set <name> <labels...>`");
                    }
                    let labels: Vec<String> = words[2..].iter().map(|w| w.to_string()).collect();
                    file.sets
                        .insert(words[1].to_string(), FinSet::labeled(labels));
                    self.pos += 1;
                }
                "ground" => {
                    if words.len() != 4 || words[2] != "=" {
                        return self.fail(line, "expected `ground <G> = <set-name>`");
                    }
                    file.grounds
                        .insert(words[1].to_string(), words[3].to_string());
                    self.pos += 1;
                }
                "const" => {
                    if words.len() < 4 || words[2] != "=" {
                        return self.fail(line, "expected `const <c> = <element>` or `const <c> = table <entries...>`");
                    }
                    let spec = if words[3] == "table" {
                        ConstSpec::Table(words[4..].iter().map(|w| w.to_string()).collect())
                    } else if words.len() == 4 {
                        ConstSpec::Element(words[3].to_string())
                    } else {
                        return self.fail(line, "an element value must be a single word");
                    };
                    file.consts.insert(words[1].to_string(), spec);
                    self.pos += 1;
                }
                other => {
                    return self.fail(line, format!("unknown directive `{other}`"));
                }
            }
        }
        Ok(file)
    }

    /// Parse `monoid`/`semiring` header plus its `elements`, special
    /// elements, and operation rows, in any order, until a foreign directive.
    fn algebra_block(
        &mut self,
        line: usize,
        header: &[&str],
        specials: &[&'static str],
        ops: &[&'static str],
    ) -> Result<RawAlgebra, ModelFileError> {
        if header.len() != 2 {
            return self.fail(line, format!("expected `{} <name>`", header[0]));
        }
        let mut raw = RawAlgebra {
            name: header[1].to_string(),
            elements: Vec::new(),
            special: BTreeMap::new(),
            rows: ops.iter().map(|&op| (op, Vec::new())).collect(),
        };
        self.pos += 1;
        while self.pos < self.lines.len() {
            let (line, words) = self.lines[self.pos].clone();
            let key = words[0];
            if key == "elements" {
                raw.elements = words[1..].iter().map(|w| w.to_string()).collect();
                self.pos += 1;
            } else if let Some(&s) = specials.iter().find(|&&s| s == key) {
                if words.len() != 2 {
                    return self.fail(line, format!("expected `{s} <element>`"));
                }
                raw.special.insert(s, words[1].to_string());
                self.pos += 1;
            } else if let Some(&op) = ops.iter().find(|&&op| op == key) {
                raw.rows
                    .get_mut(op)
                    .unwrap()
                    .push(words[1..].iter().map(|w| w.to_string()).collect());
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(raw)
    }

    fn lookup(
        &self,
        line: usize,
        elements: &[String],
        label: &str,
    ) -> Result<usize, ModelFileError> {
        elements
            .iter()
            .position(|e| e == label)
            .ok_or(ModelFileError::Parse {
                line,
                message: format!("`{label}` is not a declared element"),
            })
    }

    fn rows_to_table(
        &self,
        line: usize,
        op: &str,
        elements: &[String],
        rows: &[Vec<String>],
    ) -> Result<Vec<usize>, ModelFileError> {
        let n = elements.len();
        if rows.len() != n {
            return self.fail(line, format!("`{op}` needs {n} rows, found {}", rows.len()));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return self.fail(
                    line,
                    format!("`{op}` rows need {n} entries, found {}", row.len()),
                );
            }
            for entry in row {
                table.push(self.lookup(line, elements, entry)?);
            }
        }
        Ok(table)
    }

    fn finish_monoid(&self, line: usize, raw: RawAlgebra) -> Result<FinMonoid, ModelFileError> {
        if raw.elements.is_empty() {
            return self.fail(line, "monoid block has no `elements` line");
        }
        let unit = raw
            .special
            .get("unit")
            .ok_or(ModelFileError::Parse {
                line,
                message: "monoid block has no `unit` line".into(),
            })
            .and_then(|l| self.lookup(line, &raw.elements, l))?;
        let table = self.rows_to_table(line, "mult", &raw.elements, &raw.rows["mult"])?;
        Ok(FinMonoid::new(
            raw.name,
            FinSet::labeled(raw.elements),
            unit,
            table,
        )?)
    }

    fn finish_semiring(
        &self,
        line: usize,
        raw: RawAlgebra,
    ) -> Result<FinSemiring, ModelFileError> {
        if raw.elements.is_empty() {
            return self.fail(line, "semiring block has no `elements` line");
        }
        let zero = raw
            .special
            .get("zero")
            .ok_or(ModelFileError::Parse {
                line,
                message: "semiring block has no `zero` line".into(),
            })
            .and_then(|l| self.lookup(line, &raw.elements, l))?;
        let one = raw
            .special
            .get("one")
            .ok_or(ModelFileError::Parse {
                line,
                message: "semiring block has no `one` line".into(),
            })
            .and_then(|l| self.lookup(line, &raw.elements, l))?;
        let add = self.rows_to_table(line, "add", &raw.elements, &raw.rows["add"])?;
        let mul = self.rows_to_table(line, "mul", &raw.elements, &raw.rows["mul"])?;
        Ok(FinSemiring::new(
            raw.name,
            FinSet::labeled(raw.elements),
            zero,
            one,
            add,
            mul,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn d4_file() -> ModelFile {
        ModelFile {
            name: "writer-d4".into(),
            monoid: Some(fixtures::d4()),
            central: Some(vec![0, 2]),
            semiring: None,
            sets: BTreeMap::new(),
            grounds: BTreeMap::new(),
            consts: (0..fixtures::d4().size())
                .map(|i| fixtures::d4().label(i))
                .map(|l| {
                    (
                        format!("act_{l}"),
                        ConstSpec::Element(l.clone()),
                    )
                })
                .chain([
                    ("sact_e".to_string(), ConstSpec::Element("e".into())),
                    ("sact_r2".to_string(), ConstSpec::Element("r2".into())),
                ])
                .collect(),
        }
    }

    #[test]
    fn round_trip_preserves_structure() {
        let file = d4_file();
        let text = serialize_model_file(&file);
        let back = ModelFile::parse(&text).unwrap();
        assert_eq!(back.name, "writer-d4");
        let m = back.monoid.as_ref().unwrap();
        assert_eq!(m.size(), 8);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(m.op(a, b), file.monoid.as_ref().unwrap().op(a, b));
            }
        }
        assert_eq!(back.central, Some(vec![0, 2]));
        assert_eq!(back.consts, file.consts);
    }

    #[test]
    fn builds_a_validating_writer_model() {
        let file = d4_file();
        let monoid = fixtures::d4();
        let sub = fixtures::d4_centre();
        let th = fixtures::writer_theory(&monoid, &sub);
        let model = file.build_writer_model(&th).unwrap();
        assert!(model.validate(&th, &[1, 2]).is_ok());
        // labels resolve through the monoid: act_r2 is the element r2
        assert_eq!(model.constant_value("act_r2"), Some(2));
        assert_eq!(model.constant_value("sact_r2"), Some(1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "monoid M\nelements a b\nunit c\nmult a b\nmult b a\n";
        let err = ModelFile::parse(text).unwrap_err();
        match err {
            ModelFileError::Parse { message, .. } => {
                assert!(message.contains("not a declared element"), "{message}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn semiring_block_parses() {
        let text = "semiring Bool\nelements 0 1\nzero 0\none 1\nadd 0 1\nadd 1 1\nmul 0 0\nmul 0 1\n";
        let file = ModelFile::parse(text).unwrap();
        let s = file.semiring.unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.add(1, 1), 1);
        assert_eq!(s.mul(1, 1), 1);
    }
}
