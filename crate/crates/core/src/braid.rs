//! The Hurwitz monodromy action on Nielsen classes: braid moves, braid
//! orbits, cusp orbits, and relation checks.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::nielsen::{NielsenClassSet, NielsenContext, Tuple};
use crate::pool;

/// `q_i`: `(.., g_i, g_{i+1}, ..) -> (.., g_i g_{i+1} g_i^-1, g_i, ..)`, 1-based.
pub fn apply_q(g: &FiniteGroup, t: &[Elem], i: usize) -> Result<Tuple> {
    check_index(t.len(), i)?;
    let mut out = t.to_vec();
    let (a, b) = (t[i - 1], t[i]);
    out[i - 1] = g.mul(g.mul(a, b), g.inv(a));
    out[i] = a;
    Ok(out)
}

/// `q_i^-1`: `(.., g_i, g_{i+1}, ..) -> (.., g_{i+1}, g_{i+1}^-1 g_i g_{i+1}, ..)`.
pub fn apply_q_inv(g: &FiniteGroup, t: &[Elem], i: usize) -> Result<Tuple> {
    check_index(t.len(), i)?;
    let mut out = t.to_vec();
    let (a, b) = (t[i - 1], t[i]);
    out[i - 1] = b;
    out[i] = g.conj(a, b);
    Ok(out)
}

/// Left rotation `(g_2, ..., g_r, g_1)`.
pub fn apply_sh(t: &[Elem]) -> Tuple {
    let mut out = t.to_vec();
    out.rotate_left(1);
    out
}

pub fn apply_sh_inv(t: &[Elem]) -> Tuple {
    let mut out = t.to_vec();
    out.rotate_right(1);
    out
}

fn check_index(r: usize, i: usize) -> Result<()> {
    if i == 0 || i + 1 > r {
        return Err(Error::IndexOutOfRange { index: i, r });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BraidGen {
    Q(usize),
    QInv(usize),
    Sh,
    ShInv,
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidGen::Q(i) => write!(f, "q{i}"),
            BraidGen::QInv(i) => write!(f, "q{i}^-1"),
            BraidGen::Sh => write!(f, "sh"),
            BraidGen::ShInv => write!(f, "sh^-1"),
        }
    }
}

/// A word in `q_1, ..., q_{r-1}, sh`, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BraidWord(pub Vec<BraidGen>);

impl BraidWord {
    pub fn apply(&self, g: &FiniteGroup, t: &[Elem]) -> Result<Tuple> {
        let mut x = t.to_vec();
        for step in &self.0 {
            x = match *step {
                BraidGen::Q(i) => apply_q(g, &x, i)?,
                BraidGen::QInv(i) => apply_q_inv(g, &x, i)?,
                BraidGen::Sh => apply_sh(&x),
                BraidGen::ShInv => apply_sh_inv(&x),
            };
        }
        Ok(x)
    }

    pub fn random(rng: &mut impl Rng, r: usize, len: usize) -> Self {
        BraidWord(
            (0..len)
                .map(|_| match rng.gen_range(0..4) {
                    0 => BraidGen::Q(rng.gen_range(1..r)),
                    1 => BraidGen::QInv(rng.gen_range(1..r)),
                    2 => BraidGen::Sh,
                    _ => BraidGen::ShInv,
                })
                .collect(),
        )
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One braid orbit, with the action of `q_1`, `q_2`, `sh` on its members.
#[derive(Clone, Debug)]
pub struct BraidOrbit {
    pub ctx: Arc<NielsenContext>,
    pub index: usize,
    pub label: String,
    /// Canonical members, sorted.
    pub members: Vec<Tuple>,
    pub q1: Vec<u32>,
    pub q2: Vec<u32>,
    pub sh: Vec<u32>,
}

impl BraidOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn seed(&self) -> &Tuple {
        &self.members[0]
    }

    pub fn position(&self, t: &[Elem]) -> Option<usize> {
        self.members.binary_search_by(|m| m.as_slice().cmp(t)).ok()
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.position(t).is_some()
    }
}

/// Braid orbits of a Nielsen class set.
#[derive(Clone, Debug)]
pub struct BraidOrbits {
    pub set: NielsenClassSet,
    pub orbits: Vec<BraidOrbit>,
}

impl BraidOrbits {
    /// The orbit containing the canonical form of `t`.
    pub fn orbit_of(&self, t: &[Elem]) -> Option<usize> {
        let c = self.set.ctx.canonicalize(t);
        self.orbits.iter().position(|o| o.contains(&c))
    }
}

/// Action of a move on the class set, as an index permutation.
fn action_table(
    set: &NielsenClassSet,
    workers: usize,
    mv: impl Fn(&[Elem]) -> Tuple + Sync,
) -> Vec<u32> {
    pool::install(workers, || {
        set.reps
            .par_iter()
            .map(|t| {
                let image = set.ctx.canonicalize(&mv(t));
                set.index_of(&image).expect("braid moves preserve the Nielsen class") as u32
            })
            .collect()
    })
}

/// Partitions the class set into orbits of `<q_2, sh>`, sorted by (size,
/// least member) and labelled `O1, O2, ...`.
pub fn braid_orbits(set: &NielsenClassSet, workers: usize) -> BraidOrbits {
    let ctx = &set.ctx;
    let g = ctx.group().clone();
    let n = set.len();
    if n == 0 {
        return BraidOrbits { set: set.clone(), orbits: Vec::new() };
    }
    let q1 = action_table(set, workers, |t| apply_q(&g, t, 1).expect("r >= 3"));
    let q2 = action_table(set, workers, |t| apply_q(&g, t, 2).expect("r >= 3"));
    let sh = action_table(set, workers, apply_sh);
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        comp[start] = id;
        let mut members = vec![start];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for y in [q2[x] as usize, sh[x] as usize] {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups.sort_by_key(|m| (m.len(), m[0]));
    let orbits = groups
        .into_iter()
        .enumerate()
        .map(|(index, members)| {
            let local: HashMap<usize, u32> =
                members.iter().enumerate().map(|(p, &x)| (x, p as u32)).collect();
            let restrict = |perm: &[u32]| -> Vec<u32> {
                members.iter().map(|&x| local[&(perm[x] as usize)]).collect()
            };
            BraidOrbit {
                ctx: ctx.clone(),
                index,
                label: format!("O{}", index + 1),
                q1: restrict(&q1),
                q2: restrict(&q2),
                sh: restrict(&sh),
                members: members.iter().map(|&x| set.reps[x].clone()).collect(),
            }
        })
        .collect();
    BraidOrbits { set: set.clone(), orbits }
}

/// Cycles of a permutation on `0..n`, each listed from its least point.
pub fn perm_cycles(p: &[u32]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x] as usize;
        }
        out.push(c);
    }
    out
}

/// `a` then `b`.
pub fn perm_then(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// An orbit of `gamma_inf = q_2` inside a braid orbit.
#[derive(Clone, Debug, Serialize)]
pub struct CuspOrbit {
    pub label: String,
    pub braid_orbit: usize,
    pub index: usize,
    pub width: usize,
    /// Positions in the braid orbit's member list, in `q_2` cycle order.
    pub positions: Vec<usize>,
}

impl CuspOrbit {
    pub fn rep<'a>(&self, o: &'a BraidOrbit) -> &'a Tuple {
        &o.members[*self.positions.iter().min().expect("nonempty cusp")]
    }
}

/// `q_2` cycles on the orbit, sorted by width (largest first) then least
/// member, labelled `O_{i,j}^w`.
pub fn cusp_orbits(o: &BraidOrbit) -> Vec<CuspOrbit> {
    let mut cycles = perm_cycles(&o.q2);
    cycles.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
    cycles
        .into_iter()
        .enumerate()
        .map(|(j, positions)| CuspOrbit {
            label: format!("O_{{{},{}}}^{}", o.index + 1, j + 1, positions.len()),
            braid_orbit: o.index,
            index: j,
            width: positions.len(),
            positions,
        })
        .collect()
}

/// Outcome of one relation family.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub tested: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

impl RelationCheck {
    fn new(name: &str) -> Self {
        RelationCheck { name: name.to_string(), tested: 0, violations: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.tested += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    /// Order of `gamma_1` on each reduced braid orbit (r = 4 only).
    pub gamma1_orders: Vec<u64>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }
}

fn perm_order(p: &[u32]) -> u64 {
    perm_cycles(p)
        .iter()
        .fold(1u64, |acc, c| crate::group::lcm(acc, c.len() as u64))
}

/// Checks the Hurwitz relations on every representative of `set` plus
/// `sample_size` random braid-word images of representatives (seeded).
pub fn verify_braid_relations(
    set: &NielsenClassSet,
    sample_size: usize,
    seed: u64,
) -> RelationReport {
    let ctx = &set.ctx;
    let g = ctx.group();
    let r = ctx.r();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples: Vec<Tuple> = set.reps.clone();
    if !set.is_empty() {
        for _ in 0..sample_size {
            let t = &set.reps[rng.gen_range(0..set.len())];
            let w = BraidWord::random(&mut rng, r, 12);
            let x = w.apply(g, t).expect("valid word");
            let h = Elem(rng.gen_range(0..g.order() as u32));
            tuples.push(x.iter().map(|&e| g.conj(e, h)).collect());
        }
    }
    let show = |t: &[Elem]| ctx.format_tuple(t);
    let mut preserve = RelationCheck::new("moves preserve Nielsen invariants");
    let mut braid = RelationCheck::new("q_i q_{i+1} q_i = q_{i+1} q_i q_{i+1}");
    let mut shconj = RelationCheck::new("sh q_i sh^-1 = q_{i+1}");
    let mut inverse = RelationCheck::new("q_i q_i^-1 = 1 and sh^r = 1");
    let mut rh = RelationCheck::new("R_H acts by conjugation");
    for t in &tuples {
        for i in 1..r {
            let x = apply_q(g, t, i).unwrap();
            preserve.record(ctx.is_valid(&x), || format!("q{i} on {}", show(t)));
            inverse.record(apply_q_inv(g, &x, i).unwrap() == *t, || format!("q{i} on {}", show(t)));
        }
        let s = apply_sh(t);
        preserve.record(ctx.is_valid(&s), || format!("sh on {}", show(t)));
        let mut rot = t.clone();
        for _ in 0..r {
            rot = apply_sh(&rot);
        }
        inverse.record(rot == *t, || format!("sh^r on {}", show(t)));
        for i in 1..r - 1 {
            let lhs = BraidWord(vec![BraidGen::Q(i), BraidGen::Q(i + 1), BraidGen::Q(i)]);
            let rhs = BraidWord(vec![BraidGen::Q(i + 1), BraidGen::Q(i), BraidGen::Q(i + 1)]);
            braid.record(lhs.apply(g, t).unwrap() == rhs.apply(g, t).unwrap(), || {
                format!("i = {i} on {}", show(t))
            });
            let conj = BraidWord(vec![BraidGen::Sh, BraidGen::Q(i), BraidGen::ShInv]);
            shconj.record(conj.apply(g, t).unwrap() == apply_q(g, t, i + 1).unwrap(), || {
                format!("i = {i} on {}", show(t))
            });
        }
        let mut word: Vec<BraidGen> = (1..r).map(BraidGen::Q).collect();
        word.extend((1..r).rev().map(BraidGen::Q));
        let image = BraidWord(word).apply(g, t).unwrap();
        let conjugated = g.elements().any(|h| t.iter().zip(&image).all(|(&a, &b)| g.conj(a, h) == b));
        rh.record(conjugated, || show(t));
    }
    let mut checks = vec![preserve, inverse, braid, shconj, rh];
    let mut gamma1_orders = Vec::new();
    if ctx.reduces() && !set.is_empty() {
        let orbits = braid_orbits(set, 0);
        let mut cube = RelationCheck::new("gamma_0^3 = 1 on reduced classes");
        let mut product = RelationCheck::new("gamma_0 gamma_1 gamma_inf = 1 on reduced classes");
        let mut sh2 = RelationCheck::new("sh^2 = 1 on reduced classes");
        for o in &orbits.orbits {
            let g0 = perm_then(&o.q1, &o.q2);
            let g1 = perm_then(&g0, &o.q1);
            let g0_cubed = perm_then(&perm_then(&g0, &g0), &g0);
            let prod = perm_then(&perm_then(&g0, &g1), &o.q2);
            let sh_sq = perm_then(&o.sh, &o.sh);
            for (p, m) in o.members.iter().enumerate() {
                cube.record(g0_cubed[p] as usize == p, || show(m));
                product.record(prod[p] as usize == p, || show(m));
                sh2.record(sh_sq[p] as usize == p, || show(m));
            }
            gamma1_orders.push(perm_order(&g1));
        }
        checks.extend([cube, product, sh2]);
    }
    RelationReport { checks, gamma1_orders }
}
