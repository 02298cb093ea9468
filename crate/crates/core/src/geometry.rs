//! Reduced Hurwitz-space components as covers of the j-line (r = 4):
//! ramification, genus, sh-incidence, and moduli flags.

use serde::Serialize;

use crate::braid::{cusp_orbits, perm_cycles, perm_then, BraidOrbit};
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::nielsen::{genus_from_indices, EquivalenceMode, NielsenContext};

/// Ramification of one component over `j = 0, 1, inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    pub orbit: String,
    pub degree: usize,
    pub ind_gamma0: usize,
    pub ind_gamma1: usize,
    pub ind_gamma_inf: usize,
    pub genus: u64,
    pub fixed_gamma0: usize,
    pub fixed_gamma1: usize,
    /// Cycle lengths, longest first.
    pub cycles_gamma0: Vec<usize>,
    pub cycles_gamma1: Vec<usize>,
    pub cycles_gamma_inf: Vec<usize>,
    pub cusp_widths: Vec<usize>,
}

fn require_reduced(o: &BraidOrbit) -> Result<()> {
    if o.ctx.r() != 4 {
        return Err(Error::RequiresFourBranchPoints(o.ctx.r()));
    }
    if !o.ctx.mode().is_reduced() {
        return Err(Error::RequiresReducedMode);
    }
    Ok(())
}

/// `gamma_0 = q1 q2`, `gamma_1 = q1 q2 q1`, `gamma_inf = q2` on the orbit.
pub fn gammas(o: &BraidOrbit) -> [Vec<u32>; 3] {
    let g0 = perm_then(&o.q1, &o.q2);
    let g1 = perm_then(&g0, &o.q1);
    [g0, g1, o.q2.clone()]
}

fn cycle_type(p: &[u32]) -> Vec<usize> {
    let mut t: Vec<usize> = perm_cycles(p).iter().map(Vec::len).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

pub fn genus_of_component(o: &BraidOrbit) -> Result<GenusReport> {
    require_reduced(o)?;
    let [g0, g1, ginf] = gammas(o);
    let n = o.size();
    let (c0, c1, cinf) = (cycle_type(&g0), cycle_type(&g1), cycle_type(&ginf));
    let (i0, i1, iinf) = (n - c0.len(), n - c1.len(), n - cinf.len());
    let genus = genus_from_indices((i0 + i1 + iinf) as u64, n)?;
    let fixed = |c: &[usize]| c.iter().filter(|&&l| l == 1).count();
    Ok(GenusReport {
        orbit: o.label.clone(),
        degree: n,
        ind_gamma0: i0,
        ind_gamma1: i1,
        ind_gamma_inf: iinf,
        genus,
        fixed_gamma0: fixed(&c0),
        fixed_gamma1: fixed(&c1),
        cusp_widths: cusp_orbits(o).iter().map(|c| c.width).collect(),
        cycles_gamma0: c0,
        cycles_gamma1: c1,
        cycles_gamma_inf: cinf,
    })
}

/// `entries[i][j] = |O_i ∩ (O_j)sh|` over all cusp orbits of all braid
/// orbits, in braid-orbit order and then cusp order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShIncidenceMatrix {
    pub labels: Vec<String>,
    pub widths: Vec<usize>,
    /// Braid-orbit index of each row.
    pub block_of: Vec<usize>,
    pub entries: Vec<Vec<usize>>,
}

impl ShIncidenceMatrix {
    /// Rows and columns belonging to braid orbit `b`.
    pub fn block(&self, b: usize) -> Vec<Vec<usize>> {
        let idx: Vec<usize> = (0..self.labels.len()).filter(|&i| self.block_of[i] == b).collect();
        idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

pub fn sh_incidence(orbits: &[BraidOrbit]) -> Result<ShIncidenceMatrix> {
    for o in orbits {
        require_reduced(o)?;
    }
    // global row of each (orbit, position)
    let mut row_of: Vec<Vec<usize>> = Vec::new();
    let mut labels = Vec::new();
    let mut widths = Vec::new();
    let mut block_of = Vec::new();
    for o in orbits {
        let mut rows = vec![0; o.size()];
        for c in cusp_orbits(o) {
            for &p in &c.positions {
                rows[p] = labels.len();
            }
            labels.push(c.label.clone());
            widths.push(c.width);
            block_of.push(o.index);
        }
        row_of.push(rows);
    }
    let n = labels.len();
    let mut entries = vec![vec![0usize; n]; n];
    for (b, o) in orbits.iter().enumerate() {
        for p in 0..o.size() {
            // p lies in O_j; its sh-image lies in O_i
            let j = row_of[b][p];
            let i = row_of[b][o.sh[p] as usize];
            entries[i][j] += 1;
        }
    }
    Ok(ShIncidenceMatrix { labels, widths, block_of, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliFlags {
    /// The group has trivial center.
    pub inner_fine: bool,
    /// `Q''` acts with orbits of size 4 on every inner class above the orbit.
    pub b_fine_reduced: bool,
    /// b-fine, and neither `gamma_0` nor `gamma_1` has a fixed point.
    pub fine_reduced: bool,
}

pub fn moduli_flags(o: &BraidOrbit) -> Result<ModuliFlags> {
    require_reduced(o)?;
    let ctx = &o.ctx;
    let g = ctx.group();
    let inner_fine = g.center().len() == 1;
    let b_fine_reduced = if ctx.mode().is_absolute() {
        let inner = NielsenContext::new(g.clone(), ctx.classes().clone(), EquivalenceMode::Inner)?;
        let normalizer = ctx.normalizer().expect("absolute mode has a normalizer");
        let tables = crate::group::conjugation_tables(g, normalizer);
        o.members.iter().all(|m| {
            tables.iter().all(|tab| {
                let moved: Vec<Elem> = m.iter().map(|&e| tab[e.idx()]).collect();
                inner.reduced_closure(&moved).len() == 4
            })
        })
    } else {
        o.members.iter().all(|m| ctx.reduced_closure(m).len() == 4)
    };
    let report = genus_of_component(o)?;
    let fine_reduced = b_fine_reduced && report.fixed_gamma0 == 0 && report.fixed_gamma1 == 0;
    Ok(ModuliFlags { inner_fine, b_fine_reduced, fine_reduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::braid_orbits;
    use crate::group::{make_group, ClassVector};
    use crate::nielsen::enumerate_nielsen;

    #[test]
    fn a4_components() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[3a,3a,3b,3b]").unwrap();
        let ctx = NielsenContext::new(g, c, EquivalenceMode::InnerReduced).unwrap();
        let orbits = braid_orbits(&enumerate_nielsen(&ctx, 1), 1).orbits;
        let minus = genus_of_component(&orbits[0]).unwrap();
        let plus = genus_of_component(&orbits[1]).unwrap();
        assert_eq!((minus.ind_gamma0, minus.ind_gamma1, minus.ind_gamma_inf), (4, 3, 3));
        assert_eq!((plus.ind_gamma0, plus.ind_gamma1, plus.ind_gamma_inf), (6, 4, 6));
        assert_eq!((minus.genus, plus.genus), (0, 0));
        assert_eq!((plus.fixed_gamma0, plus.fixed_gamma1), (0, 1));
        let m = sh_incidence(&orbits).unwrap();
        assert!(m.is_symmetric());
        assert_eq!(m.block(0), vec![vec![2, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]);
        for o in &orbits {
            let f = moduli_flags(o).unwrap();
            assert!(f.inner_fine);
            assert!(!f.fine_reduced);
        }
    }

    #[test]
    fn requires_reduced() {
        let g = make_group("A4").unwrap();
        let c = ClassVector::parse(&g, "[3a,3a,3b,3b]").unwrap();
        let ctx = NielsenContext::new(g, c, EquivalenceMode::Inner).unwrap();
        let orbits = braid_orbits(&enumerate_nielsen(&ctx, 1), 1).orbits;
        assert_eq!(genus_of_component(&orbits[0]).unwrap_err(), Error::RequiresReducedMode);
    }
}
