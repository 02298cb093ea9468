//! Central extensions, same-order lifts, lift invariants, and Frattini
//! cover checks.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{apply_q, apply_sh, BraidOrbit, RelationCheck};
use crate::error::{Error, Result};
use crate::group::{
    gcd, lcm, make_group, mod_inverse, vector_group, Elem, FiniteGroup, GroupHom, Kind,
    DEFAULT_ORDER_BOUND,
};
use crate::pool;

/// How kernel values are printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelNotation {
    /// Order-2 kernel written `+1` / `-1`.
    Sign,
    /// Cyclic kernel written as the exponent of `generator`.
    Cyclic { generator: Elem },
    /// The element itself.
    Element,
}

/// A surjection with central kernel.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub name: String,
    pub projection: GroupHom,
    pub kernel: Vec<Elem>,
    /// Exponent of the kernel.
    pub exponent: u64,
    pub notation: KernelNotation,
    section: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftInvariant {
    pub value: Elem,
    pub label: String,
    pub trivial: bool,
}

impl CentralExtension {
    /// Checks surjectivity and centrality of the kernel.
    pub fn new(name: impl Into<String>, projection: GroupHom) -> Result<Self> {
        if !projection.is_surjective() {
            return Err(Error::InvalidExtension("projection is not surjective".into()));
        }
        let cover = projection.source.clone();
        let kernel = projection.kernel();
        let central = kernel.iter().all(|&k| {
            cover.generators().iter().all(|&s| cover.mul(k, s) == cover.mul(s, k))
        });
        if !central {
            return Err(Error::InvalidExtension("kernel is not central".into()));
        }
        let exponent = kernel.iter().fold(1, |acc, &k| lcm(acc, cover.elem_order(k)));
        let notation = if kernel.len() == 2 {
            KernelNotation::Sign
        } else if let Some(&gen) = kernel.iter().find(|&&k| cover.elem_order(k) as usize == kernel.len())
        {
            KernelNotation::Cyclic { generator: gen }
        } else {
            KernelNotation::Element
        };
        let mut section = vec![Elem(u32::MAX); projection.target.order()];
        for e in cover.elements() {
            let b = projection.apply(e);
            if section[b.idx()].0 == u32::MAX {
                section[b.idx()] = e;
            }
        }
        Ok(CentralExtension { name: name.into(), projection, kernel, exponent, notation, section })
    }

    pub fn with_notation(mut self, notation: KernelNotation) -> Self {
        self.notation = notation;
        self
    }

    pub fn cover(&self) -> &Arc<FiniteGroup> {
        &self.projection.source
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.projection.target
    }

    /// Some preimage of `g`.
    pub fn any_lift(&self, g: Elem) -> Elem {
        self.section[g.idx()]
    }

    /// The unique preimage of `g` with the same order: `h^t` with
    /// `t = N (N^-1 mod d)` for any preimage `h`, `N` the kernel exponent.
    pub fn same_order_lift(&self, g: Elem) -> Result<Elem> {
        let d = self.base().elem_order(g);
        let n = self.exponent;
        if gcd(d, n) != 1 {
            return Err(Error::NotCoprime { m: n as i64, order: d });
        }
        let ninv = mod_inverse(n as i64, d as i64).unwrap_or(0);
        let t = n as i64 * ninv;
        Ok(self.cover().pow(self.any_lift(g), t))
    }

    pub fn label(&self, k: Elem) -> String {
        let cover = self.cover();
        match &self.notation {
            KernelNotation::Sign => {
                if k == cover.identity() {
                    "+1".into()
                } else {
                    "-1".into()
                }
            }
            KernelNotation::Cyclic { generator } => {
                let mut x = cover.identity();
                let mut i = 0;
                while x != k {
                    x = cover.mul(x, *generator);
                    i += 1;
                    if i > self.kernel.len() {
                        return cover.format(k);
                    }
                }
                i.to_string()
            }
            KernelNotation::Element => cover.format(k),
        }
    }

    /// Product of the same-order lifts of the entries.
    pub fn lift_invariant(&self, t: &[Elem]) -> Result<LiftInvariant> {
        let cover = self.cover();
        let mut acc = cover.identity();
        for &g in t {
            acc = cover.mul(acc, self.same_order_lift(g)?);
        }
        debug_assert!(self.kernel.binary_search(&acc).is_ok());
        Ok(LiftInvariant { value: acc, label: self.label(acc), trivial: acc == cover.identity() })
    }

    /// Whether the orbit's lift invariant is nontrivial, so that no tuple
    /// of the cover's Nielsen class maps into it.
    pub fn is_obstructed(&self, o: &BraidOrbit) -> Result<bool> {
        Ok(!self.lift_invariant(o.seed())?.trivial)
    }

    /// Checks that the invariant is unchanged by `q_i` and `sh` on every
    /// member of the orbits.
    pub fn check_constancy(&self, orbits: &[BraidOrbit]) -> Result<RelationCheck> {
        let mut check = RelationCheck {
            name: format!("lift invariant ({}) constant on braid orbits", self.name),
            tested: 0,
            violations: 0,
            witness: None,
        };
        for o in orbits {
            let g = o.ctx.group();
            let base = self.lift_invariant(o.seed())?.value;
            for m in &o.members {
                let mut images = vec![m.clone(), apply_sh(m)];
                for i in 1..m.len() {
                    images.push(apply_q(g, m, i)?);
                }
                for x in images {
                    check.tested += 1;
                    if self.lift_invariant(&x)?.value != base {
                        check.violations += 1;
                        if check.witness.is_none() {
                            check.witness = Some(o.ctx.format_tuple(m));
                        }
                    }
                }
            }
        }
        Ok(check)
    }
}

/// `SL2(Z/3) -> A4`.
pub fn spin4() -> Result<CentralExtension> {
    spin("spin4", "SL2(3)", "A4")
}

/// `SL2(Z/5) -> A5`.
pub fn spin5() -> Result<CentralExtension> {
    spin("spin5", "SL2(5)", "A5")
}

fn spin(name: &str, cover: &str, base: &str) -> Result<CentralExtension> {
    let h = GroupHom::find_surjection(make_group(cover)?, make_group(base)?)?;
    CentralExtension::new(name, h)
}

/// `H / [K, H] -> G` for `psi: H -> G` with abelian kernel `K`: the largest
/// quotient of `psi` with central kernel.
pub fn maximal_central_quotient(psi: &GroupHom) -> Result<CentralExtension> {
    let h = psi.source.clone();
    let kernel = psi.kernel();
    let commutators: Vec<Elem> = kernel
        .iter()
        .flat_map(|&k| h.elements().map(move |x| (k, x)))
        .map(|(k, x)| h.commutator(k, x))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let q = Arc::new(h.quotient(&commutators)?);
    let data = q.quotient_data().expect("quotient group");
    let images: Vec<Elem> = h.generators().iter().map(|&s| psi.apply(s)).collect();
    debug_assert_eq!(data.parent.order(), h.order());
    let projection = GroupHom::from_generator_images(q, psi.target.clone(), &images)?;
    CentralExtension::new(format!("{}/[K,H]", h.name()), projection)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FrattiniOutcome {
    Frattini,
    NotFrattini,
    /// `|K|^s` lift tuples exceed the budget.
    Skipped { tuples: u128 },
}

impl FrattiniOutcome {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            FrattiniOutcome::Frattini => Some(true),
            FrattiniOutcome::NotFrattini => Some(false),
            FrattiniOutcome::Skipped { .. } => None,
        }
    }
}

/// Default cap on lift tuples tested by [`is_frattini_cover`].
pub const DEFAULT_FRATTINI_BUDGET: u128 = 1_000_000;

/// Whether every subgroup of the source surjecting onto the target is the
/// whole source. Tests every tuple of kernel translates of lifts of the
/// target generators.
pub fn is_frattini_cover(psi: &GroupHom, budget: u128, workers: usize) -> Result<FrattiniOutcome> {
    if !psi.is_surjective() {
        return Err(Error::InvalidExtension("projection is not surjective".into()));
    }
    let h = &psi.source;
    let kernel = psi.kernel();
    let gens = psi.target.generators();
    let lifts: Vec<Elem> = gens
        .iter()
        .map(|&t| {
            h.elements().find(|&e| psi.apply(e) == t).expect("surjective")
        })
        .collect();
    let s = lifts.len() as u32;
    let total = (kernel.len() as u128).saturating_pow(s);
    if total > budget {
        log::warn!("Frattini check needs {total} lift tuples, over the budget of {budget}");
        return Ok(FrattiniOutcome::Skipped { tuples: total });
    }
    let k = kernel.len();
    let all_generate = pool::install(workers, || {
        (0..total as u64).into_par_iter().all(|mut code| {
            let tuple: Vec<Elem> = lifts
                .iter()
                .map(|&l| {
                    let kk = kernel[(code % k as u64) as usize];
                    code /= k as u64;
                    h.mul(l, kk)
                })
                .collect();
            h.generates(&tuple)
        })
    });
    Ok(if all_generate { FrattiniOutcome::Frattini } else { FrattiniOutcome::NotFrattini })
}

/// All order-3 automorphisms of `Heis(l)` lifting `M` on `(x, y)`, and the
/// extensions they define.
#[derive(Clone, Debug)]
pub struct HeisenbergExtensions {
    pub ell: u32,
    pub matrix: Vec<Vec<i64>>,
    pub heisenberg: Arc<FiniteGroup>,
    pub base: Arc<FiniteGroup>,
    /// `(z1, z2)` with `A -> M(m11, m21, z1)`, `B -> M(m12, m22, z2)`.
    pub solutions: Vec<[u32; 2]>,
    tables: Vec<Vec<u32>>,
}

impl HeisenbergExtensions {
    /// `Heis(l) x| Z/3 -> (Z/l)^2 x| Z/3` for the `i`-th solution.
    pub fn extension(&self, i: usize) -> Result<CentralExtension> {
        let heis = self.heisenberg.clone();
        let z3 = Arc::new(vector_group(1, 3, 3)?);
        let cover = Arc::new(FiniteGroup::semidirect(
            format!("Heis({}):Z3[{}]", self.ell, i),
            heis.clone(),
            z3,
            &[self.tables[i].clone()],
            DEFAULT_ORDER_BOUND,
        )?);
        let images: Vec<Elem> = self.base.generators().to_vec();
        let projection = GroupHom::from_generator_images(cover.clone(), self.base.clone(), &images)?;
        let z = heis.element(&[0, 0, 1]).expect("center");
        let sd = cover.semidirect_data().expect("semidirect");
        let generator = cover
            .element(&[z.0, sd.complement.identity().0])
            .expect("central element");
        Ok(CentralExtension::new(format!("heis({})", self.ell), projection)?
            .with_notation(KernelNotation::Cyclic { generator }))
    }
}

pub fn extend_action_to_heisenberg(ell: u32, matrix: &[Vec<i64>]) -> Result<HeisenbergExtensions> {
    if ell == 3 || ell < 2 {
        return Err(Error::InvalidExtension(format!("modulus {ell} is excluded")));
    }
    if matrix.len() != 2 || matrix.iter().any(|r| r.len() != 2) {
        return Err(Error::InvalidExtension("action matrix must be 2x2".into()));
    }
    let m = ell as i64;
    let red: Vec<Vec<u32>> =
        matrix.iter().map(|r| r.iter().map(|&v| v.rem_euclid(m) as u32).collect()).collect();
    let base = Arc::new(FiniteGroup::vector_semidirect(
        format!("V(2,{ell})"),
        ell,
        matrix,
        DEFAULT_ORDER_BOUND,
    )?);
    let order3 = base.semidirect_data().map(|sd| sd.complement.order()) == Some(3);
    if !order3 {
        return Err(Error::InvalidExtension("action matrix must have order 3".into()));
    }
    let heis = Arc::new(FiniteGroup::generate(
        format!("Heis({ell})"),
        Kind::Heisenberg { modulus: ell },
        &[vec![1, 0, 0], vec![0, 1, 0]],
        DEFAULT_ORDER_BOUND,
    )?);
    let mut solutions = Vec::new();
    let mut tables = Vec::new();
    for z1 in 0..ell {
        for z2 in 0..ell {
            let a = heis.element(&[red[0][0], red[1][0], z1]).expect("in group");
            let b = heis.element(&[red[0][1], red[1][1], z2]).expect("in group");
            let Ok(alpha) = GroupHom::from_generator_images(heis.clone(), heis.clone(), &[a, b])
            else {
                continue;
            };
            let table: Vec<u32> = heis.elements().map(|e| alpha.apply(e).0).collect();
            let cubed_is_id = heis.elements().all(|e| {
                let x = table[table[table[e.idx()] as usize] as usize];
                x == e.0
            });
            if alpha.is_surjective() && cubed_is_id {
                solutions.push([z1, z2]);
                tables.push(table);
            }
        }
    }
    if solutions.is_empty() {
        return Err(Error::NoExtension(format!("no order-3 lift of the action mod {ell}")));
    }
    Ok(HeisenbergExtensions { ell, matrix: matrix.to_vec(), heisenberg: heis, base, solutions, tables })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin4_lifts() {
        let ext = spin4().unwrap();
        assert_eq!(ext.kernel.len(), 2);
        assert_eq!(ext.exponent, 2);
        let a4 = ext.base().clone();
        let c = a4.parse_element("(1,2,3)").unwrap();
        let l = ext.same_order_lift(c).unwrap();
        assert_eq!(ext.cover().elem_order(l), 3);
        assert_eq!(ext.projection.apply(l), c);
        assert_eq!(ext.same_order_lift(a4.inv(c)).unwrap(), ext.cover().inv(l));
        assert_eq!(ext.same_order_lift(a4.identity()).unwrap(), ext.cover().identity());
        let v = a4.parse_element("(1,2)(3,4)").unwrap();
        assert!(ext.same_order_lift(v).is_err());
    }

    #[test]
    fn heisenberg_five() {
        let h = extend_action_to_heisenberg(5, &[vec![0, -1], vec![1, -1]]).unwrap();
        assert!(!h.solutions.is_empty());
        let ext = h.extension(0).unwrap();
        assert_eq!(ext.cover().order(), 375);
        assert_eq!(ext.kernel.len(), 5);
        assert!(extend_action_to_heisenberg(3, &[vec![0, -1], vec![1, -1]]).is_err());
    }

    #[test]
    fn frattini_small() {
        let h = make_group("SL2(9)").unwrap();
        let t = make_group("SL2(3)").unwrap();
        let red = GroupHom::from_generator_images(h, t.clone(), t.generators()).unwrap();
        assert_eq!(
            is_frattini_cover(&red, DEFAULT_FRATTINI_BUDGET, 1).unwrap(),
            FrattiniOutcome::NotFrattini
        );
    }
}
