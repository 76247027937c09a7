//! Finite carriers and tabulated functions.
//!
//! Elements of a [`FinSet`] are the indices `0..size`; labels are display
//! metadata only and never affect equality of elements. Derived sets
//! (products, function spaces, monad carriers) synthesise labels eagerly
//! only while small, so witnesses stay readable without ever materialising
//! a million strings.
//!
//! Encodings are pinned so independent oracles can be written against them:
//!
//! * product: `index(a, b) = a * |B| + b` (row-major);
//! * function space `A -> B`: big-endian base-`|B|` digits of the value
//!   table, most significant digit = the value at input `0`.

use std::fmt;
use std::sync::Arc;

/// A carrier would exceed the configured size cap.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("requested carrier of size {} exceeds the cap of {cap}", display_size(*.requested))]
pub struct SizeBlowup {
    /// Saturating: `u128::MAX` means "at least 2^128".
    pub requested: u128,
    pub cap: usize,
}

fn display_size(n: u128) -> String {
    if n == u128::MAX {
        "at least 2^128".to_string()
    } else {
        n.to_string()
    }
}

/// Labels beyond this many elements are synthesised on demand as digits.
const LABEL_CAP: usize = 4096;

/// A finite set; elements are `0..size()`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet {
    size: usize,
    labels: Option<Arc<Vec<String>>>,
}

impl FinSet {
    /// Anonymous set; elements display as their indices.
    pub fn of_size(size: usize) -> FinSet {
        FinSet { size, labels: None }
    }

    /// Labelled set. Labels must be distinct.
    pub fn labeled(labels: Vec<String>) -> FinSet {
        debug_assert!(
            {
                let mut sorted = labels.clone();
                sorted.sort();
                sorted.dedup();
                sorted.len() == labels.len()
            },
            "labels must be distinct"
        );
        FinSet {
            size: labels.len(),
            labels: Some(Arc::new(labels)),
        }
    }

    pub fn unit() -> FinSet {
        FinSet::labeled(vec!["*".to_string()])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) if i < ls.len() => ls[i].clone(),
            _ => format!("{i}"),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(ls) => ls.iter().position(|l| l == label),
            None => label.parse::<usize>().ok().filter(|i| *i < self.size),
        }
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for i in 0..self.size.min(12) {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.label(i))?;
        }
        if self.size > 12 {
            write!(f, ", … {} total", self.size)?;
        }
        write!(f, "}}")
    }
}

/// Check a requested size against the cap.
pub fn guard_size(requested: u128, cap: usize) -> Result<usize, SizeBlowup> {
    if requested <= cap as u128 {
        Ok(requested as usize)
    } else {
        Err(SizeBlowup { requested, cap })
    }
}

/// `|base|^|exp|` with saturation, for cap checks.
pub fn sat_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Cartesian product with row-major indexing `a * |B| + b`.
pub fn product(a: &FinSet, b: &FinSet, cap: usize) -> Result<FinSet, SizeBlowup> {
    let size = guard_size(a.size() as u128 * b.size() as u128, cap)?;
    if a.has_labels() && b.has_labels() && size <= LABEL_CAP {
        let mut labels = Vec::with_capacity(size);
        for i in a.elements() {
            for j in b.elements() {
                labels.push(format!("({},{})", a.label(i), b.label(j)));
            }
        }
        Ok(FinSet::labeled(labels))
    } else {
        Ok(FinSet::of_size(size))
    }
}

pub fn pair_index(b_size: usize, a: usize, b: usize) -> usize {
    a * b_size + b
}

pub fn unpair_index(b_size: usize, i: usize) -> (usize, usize) {
    (i / b_size, i % b_size)
}

/// Function space `A -> B` as explicit tables.
pub fn power(dom: &FinSet, cod: &FinSet, cap: usize) -> Result<FinSet, SizeBlowup> {
    let size = guard_size(sat_pow(cod.size(), dom.size()), cap)?;
    if dom.has_labels() && cod.has_labels() && size <= LABEL_CAP && dom.size() > 0 {
        let mut labels = Vec::with_capacity(size);
        for idx in 0..size {
            let table = decode_table(dom.size(), cod.size(), idx);
            let entries: Vec<String> = table
                .iter()
                .enumerate()
                .map(|(i, &v)| format!("{}↦{}", dom.label(i), cod.label(v)))
                .collect();
            labels.push(format!("[{}]", entries.join(" ")));
        }
        Ok(FinSet::labeled(labels))
    } else {
        Ok(FinSet::of_size(size))
    }
}

/// Big-endian encoding of a value table into a function-space index.
pub fn encode_table(cod_size: usize, table: &[usize]) -> usize {
    let mut idx = 0usize;
    for &v in table {
        debug_assert!(v < cod_size);
        idx = idx * cod_size + v;
    }
    idx
}

/// Inverse of [`encode_table`].
pub fn decode_table(dom_size: usize, cod_size: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0usize; dom_size];
    for slot in out.iter_mut().rev() {
        *slot = idx % cod_size;
        idx /= cod_size;
    }
    out
}

/// Value of an encoded function at one input, without decoding the rest.
pub fn apply_encoded(dom_size: usize, cod_size: usize, fn_idx: usize, input: usize) -> usize {
    debug_assert!(input < dom_size);
    let shift = dom_size - 1 - input;
    (fn_idx / cod_size.pow(shift as u32)) % cod_size
}

/// A total function between finite sets, given by its full value table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFunction {
    /// Panics if the table length or a value is out of range; building a
    /// function is always done from trusted enumeration code.
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> FinFunction {
        assert_eq!(table.len(), dom.size(), "table length must match domain");
        assert!(
            table.iter().all(|&v| v < cod.size()),
            "table value out of codomain range"
        );
        FinFunction { dom, cod, table }
    }

    pub fn identity(set: &FinSet) -> FinFunction {
        FinFunction::new(set.clone(), set.clone(), set.elements().collect())
    }

    pub fn constant(dom: FinSet, cod: FinSet, value: usize) -> FinFunction {
        assert!(value < cod.size());
        let table = vec![value; dom.size()];
        FinFunction { dom, cod, table }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `other ∘ self` (apply `self` first). Sizes must agree.
    pub fn then(&self, other: &FinFunction) -> FinFunction {
        assert_eq!(self.cod.size(), other.dom.size());
        FinFunction {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            table: self.table.iter().map(|&v| other.table[v]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &v in &self.table {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &v) in self.table.iter().enumerate().take(12) {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{}", self.dom.label(i), self.cod.label(v))?;
        }
        if self.table.len() > 12 {
            write!(f, ", …")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_indexing_is_row_major() {
        let a = FinSet::of_size(3);
        let b = FinSet::of_size(4);
        let p = product(&a, &b, 1000).unwrap();
        assert_eq!(p.size(), 12);
        assert_eq!(pair_index(4, 2, 3), 11);
        assert_eq!(unpair_index(4, 11), (2, 3));
        for i in 0..12 {
            let (x, y) = unpair_index(4, i);
            assert_eq!(pair_index(4, x, y), i);
        }
    }

    #[test]
    fn table_encoding_roundtrips_and_is_big_endian() {
        // dom size 3, cod size 2: table [1,0,1] -> 1*4 + 0*2 + 1 = 5
        assert_eq!(encode_table(2, &[1, 0, 1]), 5);
        assert_eq!(decode_table(3, 2, 5), vec![1, 0, 1]);
        for idx in 0..8 {
            assert_eq!(encode_table(2, &decode_table(3, 2, idx)), idx);
            for input in 0..3 {
                assert_eq!(
                    apply_encoded(3, 2, idx, input),
                    decode_table(3, 2, idx)[input]
                );
            }
        }
    }

    #[test]
    fn size_cap_is_enforced_with_saturation() {
        let big = FinSet::of_size(100_000);
        let err = product(&big, &big, 1_000_000).unwrap_err();
        assert_eq!(err.requested, 10_000_000_000u128);
        // 3^(10^6) saturates but still reports a blowup
        let huge = FinSet::of_size(1_000_000);
        let err = power(&huge, &FinSet::of_size(3), 1_000_000).unwrap_err();
        assert_eq!(err.requested, u128::MAX);
    }

    #[test]
    fn labels_survive_small_products() {
        let a = FinSet::labeled(vec!["x".into(), "y".into()]);
        let b = FinSet::labeled(vec!["0".into(), "1".into()]);
        let p = product(&a, &b, 100).unwrap();
        assert_eq!(p.label(2), "(y,0)");
        assert_eq!(p.index_of_label("(x,1)"), Some(1));
    }

    #[test]
    fn composition_and_injectivity() {
        let a = FinSet::of_size(2);
        let b = FinSet::of_size(3);
        let f = FinFunction::new(a.clone(), b.clone(), vec![2, 0]);
        let g = FinFunction::new(b.clone(), a.clone(), vec![1, 1, 0]);
        assert_eq!(f.then(&g).table(), &[0, 1]);
        assert!(f.is_injective());
        assert!(!g.is_injective());
    }
}
