//! Conjugacy classes, class powers, and class vectors.

use std::fmt;

use serde::Serialize;

use super::{gcd, lcm, Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A conjugacy class. `rep` is the least element in the group's ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub index: usize,
    pub label: String,
    pub rep: Elem,
    pub order: u64,
    pub elements: Vec<Elem>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Debug)]
pub(crate) struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

fn letters(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

fn compute(g: &FiniteGroup) -> ClassData {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut raw: Vec<Vec<Elem>> = Vec::new();
    for x in g.elements() {
        if assigned[x.idx()] {
            continue;
        }
        assigned[x.idx()] = true;
        let mut class = vec![x];
        let mut i = 0;
        while i < class.len() {
            let y = class[i];
            i += 1;
            for &s in g.generators() {
                let z = g.conj(y, s);
                if !assigned[z.idx()] {
                    assigned[z.idx()] = true;
                    class.push(z);
                }
            }
        }
        class.sort_unstable();
        raw.push(class);
    }
    raw.sort_by_key(|c| (g.elem_order(c[0]), c.len(), c[0]));
    let mut classes = Vec::with_capacity(raw.len());
    let mut class_of = vec![0u32; n];
    let mut per_order = 0usize;
    let mut last_order = 0u64;
    for (index, elements) in raw.into_iter().enumerate() {
        let order = g.elem_order(elements[0]);
        if order != last_order {
            per_order = 0;
            last_order = order;
        }
        for &e in &elements {
            class_of[e.idx()] = index as u32;
        }
        classes.push(ConjugacyClass {
            index,
            label: format!("{order}{}", letters(per_order)),
            rep: elements[0],
            order,
            elements,
        });
        per_order += 1;
    }
    ClassData { classes, class_of }
}

impl FiniteGroup {
    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| compute(self))
    }

    /// Classes ordered by (element order, size, representative), labelled
    /// `<order><letter>`.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_data().classes
    }

    pub fn class_of(&self, e: Elem) -> usize {
        self.class_data().class_of[e.idx()] as usize
    }

    pub fn class(&self, index: usize) -> &ConjugacyClass {
        &self.class_data().classes[index]
    }

    /// The class of `rep^m`, defined when `m` is prime to the element order.
    pub fn class_power(&self, class: usize, m: i64) -> Result<usize> {
        let c = self.class(class);
        if gcd(m.unsigned_abs(), c.order) != 1 {
            return Err(Error::NotCoprime { m, order: c.order });
        }
        Ok(self.class_of(self.pow(c.rep, m)))
    }

    /// Resolves a class by label (`3a`) or by a representative element.
    pub fn parse_class(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if let Some(c) = self.conjugacy_classes().iter().find(|c| c.label == s) {
            return Ok(c.index);
        }
        let looks_like_label = s.chars().next().is_some_and(|c| c.is_ascii_digit())
            && s.chars().all(|c| c.is_ascii_alphanumeric());
        if looks_like_label {
            return Err(Error::Parse(format!("unknown class label {s:?}")));
        }
        Ok(self.class_of(self.parse_element(s)?))
    }
}

/// An ordered list of classes, repetitions allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVector {
    pub classes: Vec<usize>,
    /// lcm of the element orders.
    pub n_c: u64,
}

impl ClassVector {
    pub fn new(g: &FiniteGroup, classes: Vec<usize>) -> Self {
        let n_c = classes.iter().fold(1, |acc, &c| lcm(acc, g.class(c).order));
        ClassVector { classes, n_c }
    }

    /// Parses `C=[3a,3a,3b,3b]`, `[3a x2, 3b x2]`, or `[(1,2,3)x2,(1,3,2)x2]`.
    pub fn parse(g: &FiniteGroup, s: &str) -> Result<Self> {
        let mut body = s.trim();
        if let Some(rest) = body.strip_prefix("C=") {
            body = rest.trim();
        }
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("class vector must be bracketed: {s:?}")))?;
        let mut classes = Vec::new();
        for item in split_top_level(body) {
            let item = item.trim();
            if item.is_empty() {
                return Err(Error::Parse(format!("empty entry in class vector {s:?}")));
            }
            let (name, count) = split_multiplicity(item)?;
            let c = g.parse_class(name)?;
            classes.extend(std::iter::repeat_n(c, count));
        }
        if classes.is_empty() {
            return Err(Error::Parse("class vector is empty".into()));
        }
        Ok(ClassVector::new(g, classes))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Sorted class indices, the multiset the entries of a tuple must match.
    pub fn multiset(&self) -> Vec<usize> {
        let mut m = self.classes.clone();
        m.sort_unstable();
        m
    }

    /// Distinct classes appearing, sorted.
    pub fn distinct(&self) -> Vec<usize> {
        let mut m = self.multiset();
        m.dedup();
        m
    }

    /// Whether the union of the classes generates `g`.
    pub fn generates(&self, g: &FiniteGroup) -> bool {
        let gens: Vec<Elem> = self
            .distinct()
            .into_iter()
            .flat_map(|c| g.class(c).elements.iter().copied())
            .collect();
        g.generates(&gens)
    }

    /// `C^m`: each entry raised to the `m`-th power.
    pub fn power(&self, g: &FiniteGroup, m: i64) -> Result<ClassVector> {
        let classes = self
            .classes
            .iter()
            .map(|&c| g.class_power(c, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassVector { classes, n_c: self.n_c })
    }

    pub fn labels(&self, g: &FiniteGroup) -> Vec<String> {
        self.classes.iter().map(|&c| g.class(c).label.clone()).collect()
    }

    pub fn display(&self, g: &FiniteGroup) -> String {
        format!("[{}]", self.labels(g).join(","))
    }
}

impl fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() || !out.is_empty() {
        out.push(&s[start..]);
    }
    out
}

fn split_multiplicity(item: &str) -> Result<(&str, usize)> {
    // a trailing `x<k>` outside any bracket
    if let Some(pos) = item.rfind('x') {
        let tail = &item[pos + 1..];
        let head = item[..pos].trim_end();
        if !head.is_empty() && !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            let k: usize = tail
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("zero multiplicity in {item:?}")));
            }
            return Ok((head, k));
        }
    }
    Ok((item, 1))
}
