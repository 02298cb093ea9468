//! Normalizers in the full symmetric group.

use std::collections::HashSet;
use std::sync::Arc;

use itertools::Itertools;

use super::{perm, ClassVector, Elem, FiniteGroup, Kind, DEFAULT_ORDER_BOUND};
use crate::error::{Error, Result};

/// Largest degree searched by brute force over `Sym(n)`.
pub const BRUTE_FORCE_DEGREE: usize = 9;

/// `N_Sym(n)(G, C)`: permutations normalizing `G` whose conjugation action
/// preserves the class multiset of `C` (all of `N_Sym(n)(G)` when `C` is
/// `None`). Degrees above 9 need generators from the catalog.
pub fn normalizer_in_sym(g: &FiniteGroup, c: Option<&ClassVector>) -> Result<Arc<FiniteGroup>> {
    let n = g.degree().ok_or(Error::NotPermutationGroup)?;
    let gen_codes: Vec<&[u32]> = g.generators().iter().map(|&s| g.code(s)).collect();
    let keeps = |p: &[u32]| -> bool {
        let pinv = perm::invert(p);
        let normalizes = gen_codes
            .iter()
            .all(|s| g.element(&perm::compose(&perm::compose(&pinv, s), p)).is_some());
        normalizes && preserves_classes(g, c, p, &pinv)
    };
    let members: Vec<Vec<u32>> = if n <= BRUTE_FORCE_DEGREE {
        (0..n as u32)
            .permutations(n)
            .filter(|p| keeps(p))
            .collect()
    } else {
        let hint = g.normalizer_hint().ok_or(Error::NormalizerUnavailable(n))?;
        let full =
            FiniteGroup::generate("N", Kind::Perm { degree: n }, hint, DEFAULT_ORDER_BOUND)?;
        full.elements().map(|e| full.code(e).to_vec()).filter(|p| keeps(p)).collect()
    };
    Ok(Arc::new(group_from_members(n, &members)?))
}

fn preserves_classes(g: &FiniteGroup, c: Option<&ClassVector>, p: &[u32], pinv: &[u32]) -> bool {
    let Some(c) = c else { return true };
    let moved: Vec<usize> = c
        .classes
        .iter()
        .map(|&k| {
            let rep = g.code(g.class(k).rep);
            let img = perm::compose(&perm::compose(pinv, rep), p);
            g.class_of(g.element(&img).expect("normalizing permutation"))
        })
        .sorted_unstable()
        .collect();
    moved == c.multiset()
}

/// The group whose elements are exactly `members` (assumed closed), with a
/// small generating set picked greedily.
fn group_from_members(n: usize, members: &[Vec<u32>]) -> Result<FiniteGroup> {
    let kind = Kind::Perm { degree: n };
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut closure: HashSet<Vec<u32>> = HashSet::from([perm::identity(n)]);
    for p in members {
        if !closure.contains(p) {
            gens.push(p.clone());
            let sub = FiniteGroup::generate("N", kind.clone(), &gens, members.len())?;
            closure = sub.elements().map(|e| sub.code(e).to_vec()).collect();
        }
    }
    FiniteGroup::generate(format!("N(deg {n})"), kind, &gens, members.len().max(1))
}

/// For each element of `n`, the table of `x -> p^-1 x p` on `g`.
pub fn conjugation_tables(g: &FiniteGroup, n: &FiniteGroup) -> Vec<Vec<Elem>> {
    n.elements()
        .map(|p| {
            let pc = n.code(p);
            let pinv = perm::invert(pc);
            g.elements()
                .map(|x| {
                    let y = perm::compose(&perm::compose(&pinv, g.code(x)), pc);
                    g.element(&y).expect("normalizing permutation")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn a4_in_s4() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[3a,3a,3b,3b]").unwrap();
        assert_eq!(normalizer_in_sym(&g, Some(&c)).unwrap().order(), 24);
        let plus = ClassVector::parse(&g, "[3a,3a,3a,3a]").unwrap();
        assert_eq!(normalizer_in_sym(&g, Some(&plus)).unwrap().order(), 12);
    }

    #[test]
    fn dihedral() {
        let g = make_group("D5").unwrap();
        let c = ClassVector::parse(&g, "[2a,2a,2a,2a]").unwrap();
        assert_eq!(normalizer_in_sym(&g, Some(&c)).unwrap().order(), 20);
        let g11 = make_group("D11").unwrap();
        assert_eq!(normalizer_in_sym(&g11, None).unwrap().order(), 110);
    }
}
