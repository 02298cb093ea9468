//! Nielsen classes: enumeration and canonical forms under inner, absolute,
//! and reduced equivalence.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{apply_q, apply_q_inv, apply_sh};
use crate::error::{Error, Result};
use crate::group::{
    conjugation_tables, normalizer_in_sym, perm, ClassVector, Elem, FiniteGroup,
};
use crate::pool;

/// An r-tuple of group elements.
pub type Tuple = Vec<Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    Raw,
    Inner,
    Absolute,
    InnerReduced,
    AbsoluteReduced,
}

impl EquivalenceMode {
    pub fn is_reduced(self) -> bool {
        matches!(self, EquivalenceMode::InnerReduced | EquivalenceMode::AbsoluteReduced)
    }

    pub fn is_absolute(self) -> bool {
        matches!(self, EquivalenceMode::Absolute | EquivalenceMode::AbsoluteReduced)
    }

    /// The mode with the reduction dropped.
    pub fn unreduced(self) -> Self {
        match self {
            EquivalenceMode::InnerReduced => EquivalenceMode::Inner,
            EquivalenceMode::AbsoluteReduced => EquivalenceMode::Absolute,
            m => m,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EquivalenceMode::Raw => "raw",
            EquivalenceMode::Inner => "inner",
            EquivalenceMode::Absolute => "absolute",
            EquivalenceMode::InnerReduced => "inner-reduced",
            EquivalenceMode::AbsoluteReduced => "abs-reduced",
        }
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquivalenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "raw" => Ok(EquivalenceMode::Raw),
            "inner" | "inn" => Ok(EquivalenceMode::Inner),
            "absolute" | "abs" => Ok(EquivalenceMode::Absolute),
            "inner-reduced" | "inn-reduced" => Ok(EquivalenceMode::InnerReduced),
            "abs-reduced" | "absolute-reduced" => Ok(EquivalenceMode::AbsoluteReduced),
            other => Err(Error::Parse(format!("unknown equivalence mode {other:?}"))),
        }
    }
}

/// Everything needed to test and canonicalize tuples of one Nielsen class.
pub struct NielsenContext {
    group: Arc<FiniteGroup>,
    classes: ClassVector,
    multiset: Vec<usize>,
    mode: EquivalenceMode,
    normalizer: Option<Arc<FiniteGroup>>,
    /// Automorphism tables realizing the equivalence (a group).
    autos: Vec<Vec<Elem>>,
    orbit_min: Vec<Elem>,
    transporter: Vec<u32>,
    /// For each orbit minimum, the autos fixing it.
    stabilizer: Vec<Vec<u32>>,
}

impl fmt::Debug for NielsenContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NielsenContext")
            .field("group", &self.group.name())
            .field("classes", &self.classes)
            .field("mode", &self.mode)
            .finish()
    }
}

impl NielsenContext {
    /// Absolute modes compute `N_Sym(n)(G, C)` from the group.
    pub fn new(
        group: Arc<FiniteGroup>,
        classes: ClassVector,
        mode: EquivalenceMode,
    ) -> Result<Arc<Self>> {
        let normalizer = if mode.is_absolute() {
            Some(normalizer_in_sym(&group, Some(&classes))?)
        } else {
            None
        };
        Self::build(group, classes, mode, normalizer)
    }

    /// Absolute modes use the supplied normalizer.
    pub fn with_normalizer(
        group: Arc<FiniteGroup>,
        classes: ClassVector,
        mode: EquivalenceMode,
        normalizer: Arc<FiniteGroup>,
    ) -> Result<Arc<Self>> {
        Self::build(group, classes, mode, Some(normalizer))
    }

    fn build(
        group: Arc<FiniteGroup>,
        classes: ClassVector,
        mode: EquivalenceMode,
        normalizer: Option<Arc<FiniteGroup>>,
    ) -> Result<Arc<Self>> {
        if classes.len() < 3 {
            return Err(Error::Invalid(format!(
                "Nielsen classes need r >= 3 entries, got {}",
                classes.len()
            )));
        }
        if !classes.generates(&group) {
            return Err(Error::NotGenerating(classes.display(&group)));
        }
        let mut autos: Vec<Vec<Elem>> = match mode.unreduced() {
            EquivalenceMode::Raw => vec![group.elements().collect()],
            EquivalenceMode::Inner | EquivalenceMode::InnerReduced => group
                .elements()
                .map(|g| group.elements().map(|x| group.conj(x, g)).collect())
                .collect(),
            _ => {
                if group.degree().is_none() {
                    return Err(Error::NotPermutationGroup);
                }
                let n = normalizer.as_ref().expect("absolute mode has a normalizer");
                conjugation_tables(&group, n)
            }
        };
        autos.sort_unstable();
        autos.dedup();
        let n = group.order();
        let mut orbit_min = vec![Elem(u32::MAX); n];
        let mut transporter = vec![0u32; n];
        for (k, table) in autos.iter().enumerate() {
            for x in group.elements() {
                let y = table[x.idx()];
                if y < orbit_min[x.idx()] {
                    orbit_min[x.idx()] = y;
                    transporter[x.idx()] = k as u32;
                }
            }
        }
        let mut stabilizer = vec![Vec::new(); n];
        for (k, table) in autos.iter().enumerate() {
            for x in group.elements() {
                if orbit_min[x.idx()] == x && table[x.idx()] == x {
                    stabilizer[x.idx()].push(k as u32);
                }
            }
        }
        let multiset = classes.multiset();
        Ok(Arc::new(NielsenContext {
            group,
            classes,
            multiset,
            mode,
            normalizer,
            autos,
            orbit_min,
            transporter,
            stabilizer,
        }))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ClassVector {
        &self.classes
    }

    pub fn mode(&self) -> EquivalenceMode {
        self.mode
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn normalizer(&self) -> Option<&Arc<FiniteGroup>> {
        self.normalizer.as_ref()
    }

    /// Whether the reduced quotient applies (reduced mode and r = 4).
    pub fn reduces(&self) -> bool {
        self.mode.is_reduced() && self.r() == 4
    }

    /// Product-one, generation, and class multiset.
    pub fn is_valid(&self, t: &[Elem]) -> bool {
        t.len() == self.r()
            && self.group.product(t) == self.group.identity()
            && self.has_class_multiset(t)
            && self.group.generates(t)
    }

    fn has_class_multiset(&self, t: &[Elem]) -> bool {
        let mut m: Vec<usize> = t.iter().map(|&e| self.group.class_of(e)).collect();
        m.sort_unstable();
        m == self.multiset
    }

    /// Least tuple in the orbit under the mode's automorphisms, ignoring any
    /// reduction.
    pub fn canonical_unreduced(&self, t: &[Elem]) -> Tuple {
        let first = t[0];
        let k = &self.autos[self.transporter[first.idx()] as usize];
        let moved: Tuple = t.iter().map(|&e| k[e.idx()]).collect();
        let m = self.orbit_min[first.idx()];
        let mut best = moved.clone();
        for &s in &self.stabilizer[m.idx()] {
            let s = &self.autos[s as usize];
            let cand = moved.iter().map(|&e| s[e.idx()]);
            if cand.clone().lt(best.iter().copied()) {
                best = cand.collect();
            }
        }
        best
    }

    /// Unreduced canonical forms in the orbit of `t` under
    /// `Q'' = <q1 q3^-1, sh^2>`, sorted. A single form when not reducing.
    pub fn reduced_closure(&self, t: &[Elem]) -> Vec<Tuple> {
        let start = self.canonical_unreduced(t);
        if self.r() != 4 {
            return vec![start];
        }
        let mut seen: Vec<Tuple> = vec![start];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i].clone();
            i += 1;
            for y in [self.q1_q3inv(&x), apply_sh(&apply_sh(&x))] {
                let y = self.canonical_unreduced(&y);
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    fn q1_q3inv(&self, t: &[Elem]) -> Tuple {
        let x = apply_q(&self.group, t, 1).expect("r = 4");
        apply_q_inv(&self.group, &x, 3).expect("r = 4")
    }

    /// Canonical representative of `t` in this context's mode.
    pub fn canonicalize(&self, t: &[Elem]) -> Tuple {
        if self.reduces() {
            self.reduced_closure(t).swap_remove(0)
        } else {
            self.canonical_unreduced(t)
        }
    }

    pub fn format_tuple(&self, t: &[Elem]) -> String {
        format_tuple(&self.group, t)
    }
}

pub fn format_tuple(g: &FiniteGroup, t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|&e| g.format(e)).collect();
    format!("({})", parts.join(", "))
}

/// Canonical representatives of a Nielsen class, sorted.
#[derive(Clone, Debug)]
pub struct NielsenClassSet {
    pub ctx: Arc<NielsenContext>,
    pub reps: Vec<Tuple>,
}

impl NielsenClassSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn mode(&self) -> EquivalenceMode {
        self.ctx.mode
    }

    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        self.reps.binary_search_by(|r| r.as_slice().cmp(t)).ok()
    }
}

/// Enumerates `Ni(G, C)` modulo the context's equivalence. The result does
/// not depend on `workers` (0 means the rayon default).
pub fn enumerate_nielsen(ctx: &Arc<NielsenContext>, workers: usize) -> NielsenClassSet {
    let g = &ctx.group;
    let distinct = ctx.classes.distinct();
    let mut counts: Vec<usize> = distinct
        .iter()
        .map(|c| ctx.multiset.iter().filter(|&&x| x == *c).count())
        .collect();
    // seeds (g1, g2, remaining class counts)
    let mut seeds: Vec<(Elem, Elem, Vec<usize>)> = Vec::new();
    for (i1, &c1) in distinct.iter().enumerate() {
        counts[i1] -= 1;
        for &g1 in &g.class(c1).elements {
            if ctx.orbit_min[g1.idx()] != g1 {
                continue;
            }
            for (i2, &c2) in distinct.iter().enumerate() {
                if counts[i2] == 0 {
                    continue;
                }
                counts[i2] -= 1;
                for &g2 in &g.class(c2).elements {
                    seeds.push((g1, g2, counts.clone()));
                }
                counts[i2] += 1;
            }
        }
        counts[i1] += 1;
    }
    let r = ctx.r();
    let found: Vec<Vec<Tuple>> = pool::install(workers, || {
        seeds
            .par_iter()
            .map(|(g1, g2, rest)| {
                let mut local = HashSet::new();
                let mut prefix = vec![*g1, *g2];
                extend_prefix(ctx, &distinct, &mut rest.clone(), &mut prefix, r, &mut local);
                local.into_iter().collect()
            })
            .collect()
    });
    let mut unreduced: Vec<Tuple> = found.into_iter().flatten().collect();
    unreduced.sort_unstable();
    unreduced.dedup();
    log::debug!("{} unreduced classes", unreduced.len());
    let reps = if ctx.reduces() {
        let mut reduced: Vec<Tuple> = pool::install(workers, || {
            unreduced.par_iter().map(|t| ctx.canonicalize(t)).collect()
        });
        reduced.sort_unstable();
        reduced.dedup();
        reduced
    } else {
        unreduced
    };
    NielsenClassSet { ctx: ctx.clone(), reps }
}

fn extend_prefix(
    ctx: &NielsenContext,
    distinct: &[usize],
    counts: &mut [usize],
    prefix: &mut Tuple,
    r: usize,
    out: &mut HashSet<Tuple>,
) {
    let g = &ctx.group;
    if prefix.len() == r - 1 {
        let last = g.inv(g.product(prefix));
        let c = g.class_of(last);
        let slot = distinct.iter().position(|&d| d == c);
        if !slot.is_some_and(|i| counts[i] == 1) {
            return;
        }
        prefix.push(last);
        let canon = ctx.canonical_unreduced(prefix);
        prefix.pop();
        if !out.contains(&canon) && g.generates(&canon) {
            out.insert(canon);
        }
        return;
    }
    for i in 0..distinct.len() {
        if counts[i] == 0 {
            continue;
        }
        counts[i] -= 1;
        for &x in &g.class(distinct[i]).elements {
            prefix.push(x);
            extend_prefix(ctx, distinct, counts, prefix, r, out);
            prefix.pop();
        }
        counts[i] += 1;
    }
}

/// Genus of the cover with branch cycles `t` in a permutation group, from
/// `2(n + g - 1) = sum ind(g_i)`.
pub fn tuple_cover_genus(g: &FiniteGroup, t: &[Elem]) -> Result<u64> {
    let n = g.degree().ok_or(Error::NotPermutationGroup)?;
    let codes: Vec<&[u32]> = t.iter().map(|&e| g.code(e)).collect();
    if !perm::is_transitive(&codes, n) {
        return Err(Error::NotTransitive { degree: n });
    }
    let sum: u64 = codes.iter().map(|c| (n - perm::cycle_count(c)) as u64).sum();
    genus_from_indices(sum, n)
}

/// Solves `2(n + g - 1) = sum` for a nonnegative integer `g`.
pub fn genus_from_indices(sum: u64, n: usize) -> Result<u64> {
    if sum % 2 == 1 {
        return Err(Error::OddRiemannHurwitz(sum));
    }
    let g = sum as i64 / 2 - n as i64 + 1;
    if g < 0 {
        return Err(Error::NonIntegerGenus { sum, degree: n });
    }
    Ok(g as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn tuple(g: &FiniteGroup, s: &[&str]) -> Tuple {
        s.iter().map(|x| g.parse_element(x).unwrap()).collect()
    }

    #[test]
    fn a4_counts() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[3a,3a,3b,3b]").unwrap();
        let count = |m: EquivalenceMode| {
            let ctx = NielsenContext::new(g.clone(), c.clone(), m).unwrap();
            enumerate_nielsen(&ctx, 1).len()
        };
        let raw = count(EquivalenceMode::Raw);
        let inner = count(EquivalenceMode::Inner);
        assert_eq!(raw, inner * 12);
        assert_eq!(count(EquivalenceMode::InnerReduced), 15);
        assert!(count(EquivalenceMode::Absolute) <= inner);
    }

    #[test]
    fn canonical_forms() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[3a,3a,3b,3b]").unwrap();
        let ctx = NielsenContext::new(g.clone(), c, EquivalenceMode::Inner).unwrap();
        let t = tuple(&g, &["(1,2,3)", "(1,3,2)", "(1,3,4)", "(1,4,3)"]);
        assert!(ctx.is_valid(&t));
        let h = g.parse_element("(1,2)(3,4)").unwrap();
        let u: Tuple = t.iter().map(|&x| g.conj(x, h)).collect();
        assert_eq!(ctx.canonicalize(&t), ctx.canonicalize(&u));
        let ct = ctx.canonicalize(&t);
        assert_eq!(ctx.canonicalize(&ct), ct);
    }

    #[test]
    fn genus_of_tuples() {
        let g = make_group("A4").unwrap();
        let t = tuple(&g, &["(1,2,3)", "(1,3,2)", "(1,3,4)", "(1,4,3)"]);
        assert_eq!(tuple_cover_genus(&g, &t).unwrap(), 1);
        let a = g.parse_element("(1,2,3)").unwrap();
        let class = &g.class(g.class_of(a)).elements;
        let triple = class
            .iter()
            .map(|&b| vec![a, b, g.inv(g.mul(a, b))])
            .find(|t| g.class_of(t[2]) == g.class_of(a))
            .unwrap();
        assert_eq!(tuple_cover_genus(&g, &triple).unwrap(), 0);
        let bad = tuple(&g, &["(1,2,3)", "(1,3,2)", "()"]);
        assert_eq!(tuple_cover_genus(&g, &bad).unwrap_err(), Error::NotTransitive { degree: 4 });
        assert_eq!(genus_from_indices(7, 4).unwrap_err(), Error::OddRiemannHurwitz(7));
    }

    #[test]
    fn rejects_non_generating() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[2a,2a,2a,2a]").unwrap();
        let err = NielsenContext::new(g, c, EquivalenceMode::Inner).unwrap_err();
        assert!(matches!(err, Error::NotGenerating(_)));
    }

    #[test]
    fn mode_names() {
        for m in ["raw", "inner", "absolute", "inner-reduced", "abs-reduced"] {
            assert_eq!(m.parse::<EquivalenceMode>().unwrap().as_str(), m);
        }
        assert!("outer".parse::<EquivalenceMode>().is_err());
    }
}
