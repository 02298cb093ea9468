//! Homomorphisms given by generator images.

use std::sync::Arc;

use super::{Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A homomorphism, stored as the full image table of the source.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    generator_images: Vec<Elem>,
    table: Vec<Elem>,
}

impl GroupHom {
    /// Extends `images` (one per source generator) along the Cayley graph of
    /// the source. Every edge is checked, so success proves the map is a
    /// well-defined homomorphism.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: &[Elem],
    ) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Invalid(format!(
                "expected {} generator images, got {}",
                source.generators().len(),
                images.len()
            )));
        }
        let table = extend(&source, &target, images).ok_or(Error::NotHomomorphism)?;
        Ok(GroupHom { source, target, generator_images: images.to_vec(), table })
    }

    /// First surjection in lexicographic order of generator images.
    pub fn find_surjection(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Result<Self> {
        let candidates: Vec<Vec<Elem>> = source
            .generators()
            .iter()
            .map(|&s| {
                let d = source.elem_order(s);
                target.elements().filter(|&t| d.is_multiple_of(target.elem_order(t))).collect()
            })
            .collect();
        let mut choice = vec![0usize; candidates.len()];
        if candidates.iter().any(Vec::is_empty) {
            return Err(Error::NoExtension("no surjection exists".into()));
        }
        loop {
            let images: Vec<Elem> =
                choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if target.generates(&images) {
                if let Some(table) = extend(&source, &target, &images) {
                    return Ok(GroupHom { source, target, generator_images: images, table });
                }
            }
            let mut pos = choice.len();
            loop {
                if pos == 0 {
                    return Err(Error::NoExtension("no surjection exists".into()));
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < candidates[pos].len() {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    #[inline]
    pub fn apply(&self, e: Elem) -> Elem {
        self.table[e.idx()]
    }

    pub fn generator_images(&self) -> &[Elem] {
        &self.generator_images
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &t in &self.table {
            hit[t.idx()] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn kernel(&self) -> Vec<Elem> {
        let id = self.target.identity();
        self.source.elements().filter(|&e| self.apply(e) == id).collect()
    }

    /// All preimages of `t`.
    pub fn fiber(&self, t: Elem) -> Vec<Elem> {
        self.source.elements().filter(|&e| self.apply(e) == t).collect()
    }

    /// `self` then `other`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.target, &other.source) {
            return Err(Error::Invalid("homomorphisms do not compose".into()));
        }
        let images: Vec<Elem> =
            self.generator_images.iter().map(|&e| other.apply(e)).collect();
        let table = self.table.iter().map(|&e| other.apply(e)).collect();
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            generator_images: images,
            table,
        })
    }
}

fn extend(source: &FiniteGroup, target: &FiniteGroup, images: &[Elem]) -> Option<Vec<Elem>> {
    const UNSET: u32 = u32::MAX;
    let mut table = vec![Elem(UNSET); source.order()];
    table[source.identity().idx()] = target.identity();
    let mut queue = vec![source.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        let fx = table[x.idx()];
        for (&s, &fs) in source.generators().iter().zip(images) {
            let y = source.mul(x, s);
            let fy = target.mul(fx, fs);
            if table[y.idx()].0 == UNSET {
                table[y.idx()] = fy;
                queue.push(y);
            } else if table[y.idx()] != fy {
                return None;
            }
        }
    }
    Some(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn sl2_3_onto_a4() {
        let s = make_group("SL2(3)").unwrap();
        let a = make_group("A4").unwrap();
        let h = GroupHom::find_surjection(s, a).unwrap();
        assert!(h.is_surjective());
        assert_eq!(h.kernel().len(), 2);
    }

    #[test]
    fn rejects_non_homomorphism() {
        let a = make_group("A4").unwrap();
        let s = make_group("S4").unwrap();
        // send the transposition generator to a 3-cycle
        let t = s.parse_element("(1,2,3)").unwrap();
        let c = s.parse_element("(1,2,3,4)").unwrap();
        let bad = GroupHom::from_generator_images(s.clone(), s.clone(), &[t, c]);
        assert_eq!(bad.unwrap_err(), Error::NotHomomorphism);
        let id: Vec<Elem> = a.generators().to_vec();
        assert!(GroupHom::from_generator_images(a.clone(), a, &id).unwrap().is_surjective());
    }
}
