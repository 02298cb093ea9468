//! Tower levels over lattice quotients with normal l-Sylow, the component
//! tree between levels, cusp typing, and branch-cycle fields.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::braid::{braid_orbits, cusp_orbits, BraidOrbit, BraidOrbits, CuspOrbit};
use crate::error::{Error, Result};
use crate::group::{
    gcd, mod_inverse, ClassVector, Elem, FiniteGroup, GroupDescriptor, GroupHom,
    DEFAULT_ORDER_BOUND,
};
use crate::lift::{is_frattini_cover, CentralExtension, FrattiniOutcome, LiftInvariant};
use crate::nielsen::{enumerate_nielsen, EquivalenceMode, NielsenClassSet, NielsenContext, Tuple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TowerFamily {
    /// `(Z/l^{k+1})^t x| Z/ord(M)`, complement acting by `matrix`.
    Vector { matrix: Vec<Vec<i64>> },
    /// `D_{l^{k+1}}` acting on `l^{k+1}` points.
    Dihedral,
    /// `SL2(Z/l^{k+1})`.
    Sl2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerSpec {
    pub ell: u32,
    pub family: TowerFamily,
    pub order_bound: usize,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl TowerSpec {
    pub fn new(ell: u32, family: TowerFamily) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::InvalidTower(format!("{ell} is not prime")));
        }
        let spec = TowerSpec { ell, family, order_bound: DEFAULT_ORDER_BOUND };
        if let TowerFamily::Vector { matrix } = &spec.family {
            if matrix.is_empty() || matrix.iter().any(|r| r.len() != matrix.len()) {
                return Err(Error::InvalidTower("action matrix must be square".into()));
            }
            let g0 = spec.level_group(0)?;
            let h = g0.semidirect_data().expect("vector family").complement.order();
            if (h as u64).is_multiple_of(ell as u64) {
                return Err(Error::InvalidTower(format!(
                    "l = {ell} divides the complement order {h}; the l-Sylow is not normal \
                     (l = 3 with a Z/3 complement is excluded)"
                )));
            }
        }
        Ok(spec)
    }

    pub fn with_order_bound(mut self, bound: usize) -> Self {
        self.order_bound = bound;
        self
    }

    pub fn modulus(&self, k: usize) -> Result<u32> {
        (self.ell as u64)
            .checked_pow(k as u32 + 1)
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| Error::InvalidTower("modulus overflow".into()))
    }

    pub fn level_descriptor(&self, k: usize) -> Result<GroupDescriptor> {
        let m = self.modulus(k)?;
        Ok(match &self.family {
            TowerFamily::Vector { matrix } => {
                GroupDescriptor::VectorAction { modulus: m, matrix: matrix.clone() }
            }
            TowerFamily::Dihedral => GroupDescriptor::Dihedral(m as usize),
            TowerFamily::Sl2 => GroupDescriptor::Sl2(m),
        })
    }

    /// `G_k`.
    pub fn level_group(&self, k: usize) -> Result<Arc<FiniteGroup>> {
        let g = self.level_descriptor(k)?.build(self.order_bound)?;
        if let (TowerFamily::Vector { .. }, true) = (&self.family, k > 0) {
            let h0 = self.level_descriptor(0)?.build(self.order_bound)?;
            let order = |g: &FiniteGroup| g.semidirect_data().map(|sd| sd.complement.order());
            if order(&g) != order(&h0) {
                return Err(Error::InvalidTower(format!(
                    "the action has a different order mod {}",
                    self.modulus(k)?
                )));
            }
        }
        Ok(Arc::new(g))
    }

    /// `G_k -> G_{k-1}`, reduction of generators.
    pub fn projection(&self, upper: &Arc<FiniteGroup>, lower: &Arc<FiniteGroup>) -> Result<GroupHom> {
        if upper.generators().len() != lower.generators().len() {
            return Err(Error::InvalidTower("levels have different generator counts".into()));
        }
        GroupHom::from_generator_images(upper.clone(), lower.clone(), lower.generators())
            .map_err(|_| Error::InvalidTower("reduction is not a homomorphism".into()))
    }
}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            TowerFamily::Vector { matrix } => {
                let d = GroupDescriptor::VectorAction { modulus: self.ell, matrix: matrix.clone() };
                write!(f, "vector l={} {d}", self.ell)
            }
            TowerFamily::Dihedral => write!(f, "dihedral l={}", self.ell),
            TowerFamily::Sl2 => write!(f, "sl2 l={}", self.ell),
        }
    }
}

/// Whether `g` has no quotient of order `ell`.
pub fn is_ell_perfect(g: &FiniteGroup, ell: u64) -> bool {
    let comms: Vec<Elem> = g
        .elements()
        .flat_map(|a| g.generators().iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.commutator(a, b))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let derived = g.subgroup_order(&comms);
    !((g.order() / derived) as u64).is_multiple_of(ell)
}

/// Same-order lift of `g` through `psi`, for `ord(g)` prime to the kernel
/// exponent.
pub fn lift_through(psi: &GroupHom, g: Elem) -> Result<Elem> {
    let src = &psi.source;
    let kernel = psi.kernel();
    let n = kernel.iter().fold(1u64, |acc, &k| crate::group::lcm(acc, src.elem_order(k)));
    let d = psi.target.elem_order(g);
    if gcd(d, n) != 1 {
        return Err(Error::NotCoprime { m: n as i64, order: d });
    }
    let h = src
        .elements()
        .find(|&e| psi.apply(e) == g)
        .ok_or_else(|| Error::InvalidTower("projection is not surjective".into()))?;
    let t = n as i64 * mod_inverse(n as i64, d as i64).unwrap_or(0);
    Ok(src.pow(h, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CuspType {
    /// Both `<g1, g4>` and `<g2, g3>` have order prime to l.
    GEllPrime,
    /// `g2 g3` has order prime to l.
    OEllPrime,
    EllCusp,
}

impl fmt::Display for CuspType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CuspType::GEllPrime => "g-l'",
            CuspType::OEllPrime => "o-l'",
            CuspType::EllCusp => "l-cusp",
        })
    }
}

/// Type of the cusp through `t`. For `r != 4` only the split
/// `{g_1, g_r} | {g_2, ..., g_{r-1}}` is tested and the result is g-l' or
/// an l-cusp.
pub fn cusp_type(g: &FiniteGroup, t: &[Elem], ell: u64) -> CuspType {
    let r = t.len();
    let prime_to = |n: u64| !n.is_multiple_of(ell);
    let outer = g.subgroup_order(&[t[0], t[r - 1]]) as u64;
    let inner = g.subgroup_order(&t[1..r - 1]) as u64;
    if prime_to(outer) && prime_to(inner) {
        return CuspType::GEllPrime;
    }
    if r == 4 && prime_to(g.elem_order(g.mul(t[1], t[2]))) {
        return CuspType::OEllPrime;
    }
    CuspType::EllCusp
}

/// Harbater-Mumford shape `(g1, g1^-1, ..., gs, gs^-1)`.
pub fn is_hm_shape(g: &FiniteGroup, t: &[Elem]) -> bool {
    t.len().is_multiple_of(2) && t.chunks(2).all(|p| g.mul(p[0], p[1]) == g.identity())
}

/// Two cyclically adjacent equal entries.
pub fn has_double_identity(t: &[Elem]) -> bool {
    (0..t.len()).any(|i| t[i] == t[(i + 1) % t.len()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detection {
    Present,
    Absent,
    /// The search cap was reached first.
    Unknown,
}

impl Detection {
    fn or(self, other: Detection) -> Detection {
        match (self, other) {
            (Detection::Present, _) | (_, Detection::Present) => Detection::Present,
            (Detection::Unknown, _) | (_, Detection::Unknown) => Detection::Unknown,
            _ => Detection::Absent,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspClassification {
    pub label: String,
    pub width: usize,
    pub cusp_type: CuspType,
    /// Every member gives the same type.
    pub type_constant: bool,
    pub hm: Detection,
    pub double_identity: bool,
    pub rep: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub label: String,
    pub size: usize,
    pub lift_invariant: Option<LiftInvariant>,
    pub hm: Detection,
    pub double_identity: bool,
    pub cusps: Vec<CuspClassification>,
    pub rep: String,
}

/// Inner classes above a member: its `Q''`-closure in reduced mode.
fn expansions(o: &BraidOrbit, p: usize) -> Vec<Tuple> {
    o.ctx.reduced_closure(&o.members[p])
}

fn classify_cusp(o: &BraidOrbit, c: &CuspOrbit, ell: u64, budget: &mut usize) -> CuspClassification {
    let g = o.ctx.group();
    let types: Vec<CuspType> =
        c.positions.iter().map(|&p| cusp_type(g, &o.members[p], ell)).collect();
    let rep = c.rep(o);
    let cusp_type = cusp_type(g, rep, ell);
    let mut hm = Detection::Absent;
    let mut double_identity = false;
    for &p in &c.positions {
        if *budget == 0 {
            if hm != Detection::Present {
                hm = Detection::Unknown;
            }
            break;
        }
        for t in expansions(o, p) {
            *budget = budget.saturating_sub(1);
            if is_hm_shape(g, &t) {
                hm = Detection::Present;
            }
            double_identity |= has_double_identity(&t);
        }
    }
    CuspClassification {
        label: c.label.clone(),
        width: c.width,
        cusp_type,
        type_constant: types.iter().all(|&t| t == cusp_type),
        hm,
        double_identity,
        rep: o.ctx.format_tuple(rep),
    }
}

/// Cusp types, HM and double-identity flags, and (optionally) the lift
/// invariant of one braid orbit. `hm_cap` bounds the tuples examined.
pub fn classify_orbit(
    o: &BraidOrbit,
    ell: u64,
    ext: Option<&CentralExtension>,
    hm_cap: usize,
) -> Result<OrbitSummary> {
    let mut budget = hm_cap;
    let cusps: Vec<CuspClassification> =
        cusp_orbits(o).iter().map(|c| classify_cusp(o, c, ell, &mut budget)).collect();
    let hm = cusps.iter().fold(Detection::Absent, |acc, c| acc.or(c.hm));
    let double_identity = cusps.iter().any(|c| c.double_identity);
    let lift_invariant = match ext {
        Some(e) => Some(e.lift_invariant(&translate_tuple(o.ctx.group(), e.base(), o.seed())?)?),
        None => None,
    };
    Ok(OrbitSummary {
        label: o.label.clone(),
        size: o.size(),
        lift_invariant,
        hm,
        double_identity,
        cusps,
        rep: o.ctx.format_tuple(o.seed()),
    })
}

/// Moves a tuple between two identically constructed groups.
pub fn translate_tuple(from: &FiniteGroup, to: &FiniteGroup, t: &[Elem]) -> Result<Tuple> {
    if std::ptr::eq(from, to) {
        return Ok(t.to_vec());
    }
    if from.order() != to.order() {
        return Err(Error::InvalidExtension("extension base does not match the group".into()));
    }
    t.iter()
        .map(|&e| {
            to.element(from.code(e))
                .ok_or_else(|| Error::InvalidExtension("extension base does not match the group".into()))
        })
        .collect()
}

/// One level of a tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub k: usize,
    pub group: Arc<FiniteGroup>,
    pub classes: ClassVector,
    pub orbits: BraidOrbits,
    /// `G_k -> G_{k-1}` for `k >= 1`.
    pub projection: Option<GroupHom>,
}

impl TowerLevel {
    pub fn set(&self) -> &NielsenClassSet {
        &self.orbits.set
    }
}

/// Lifts a level-0 class vector to `G_k` through the chain of projections.
fn lift_classes(
    groups: &[Arc<FiniteGroup>],
    projections: &[GroupHom],
    c0: &ClassVector,
) -> Result<Vec<ClassVector>> {
    let mut out = vec![c0.clone()];
    let mut reps: Vec<Elem> = c0.classes.iter().map(|&c| groups[0].class(c).rep).collect();
    for (k, psi) in projections.iter().enumerate() {
        reps = reps.iter().map(|&g| lift_through(psi, g)).collect::<Result<_>>()?;
        let gk = &groups[k + 1];
        out.push(ClassVector::new(gk, reps.iter().map(|&e| gk.class_of(e)).collect()));
    }
    Ok(out)
}

fn check_ell_prime(g: &FiniteGroup, c: &ClassVector, ell: u64) -> Result<()> {
    for &k in &c.classes {
        let cl = g.class(k);
        if cl.order.is_multiple_of(ell) {
            return Err(Error::NotEllPrime { label: cl.label.clone(), ell });
        }
    }
    Ok(())
}

/// The component graph between consecutive levels.
#[derive(Clone, Debug)]
pub struct ComponentTree {
    pub spec: TowerSpec,
    pub levels: Vec<TowerLevel>,
    /// `((k+1, orbit), (k, orbit))` by orbit index.
    pub edges: Vec<((usize, usize), (usize, usize))>,
    /// Every member of each upper orbit projects into the same lower orbit.
    pub edges_consistent: bool,
    /// Set when construction stopped early, e.g. at the order bound.
    pub truncated: Option<String>,
}

impl ComponentTree {
    /// Level-`k` orbits receiving at least one edge from level `k+1`.
    pub fn hit_orbits(&self, k: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|(_, lo)| lo.0 == k).map(|(_, lo)| lo.1).collect()
    }

    /// Maximal chains through all built levels, as orbit indices from level 0.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let top = self.levels.len();
        if top == 0 {
            return Vec::new();
        }
        let mut chains: Vec<Vec<usize>> =
            (0..self.levels[0].orbits.orbits.len()).map(|i| vec![i]).collect();
        for k in 1..top {
            let mut next = Vec::new();
            for c in &chains {
                let last = *c.last().unwrap();
                for &((ku, u), (kl, l)) in &self.edges {
                    if ku == k && kl == k - 1 && l == last {
                        let mut d = c.clone();
                        d.push(u);
                        next.push(d);
                    }
                }
            }
            chains = next;
        }
        chains
    }
}

/// Levels `0..=k_max` with Nielsen classes lifted from `c0` and edges
/// from each upper orbit to the orbit containing its projection. Hitting
/// the order bound returns the levels built so far with `truncated` set.
pub fn component_tree(
    spec: &TowerSpec,
    c0: &str,
    k_max: usize,
    mode: EquivalenceMode,
    workers: usize,
) -> Result<ComponentTree> {
    let mut groups = vec![spec.level_group(0)?];
    let g0 = groups[0].clone();
    let c0 = ClassVector::parse(&g0, c0)?;
    check_ell_prime(&g0, &c0, spec.ell as u64)?;
    if !is_ell_perfect(&g0, spec.ell as u64) {
        return Err(Error::InvalidTower(format!("G_0 has a Z/{} quotient", spec.ell)));
    }
    let mut projections = Vec::new();
    let mut truncated = None;
    for k in 1..=k_max {
        match spec.level_group(k) {
            Ok(g) => {
                projections.push(spec.projection(&g, &groups[k - 1])?);
                groups.push(g);
            }
            Err(e) if e.is_budget() => {
                truncated = Some(format!("level {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let class_vectors = lift_classes(&groups, &projections, &c0)?;
    let mut levels: Vec<TowerLevel> = Vec::new();
    for (k, (g, c)) in groups.iter().zip(class_vectors).enumerate() {
        log::info!("level {k}: |G| = {}", g.order());
        let ctx = NielsenContext::new(g.clone(), c.clone(), mode)?;
        let set = enumerate_nielsen(&ctx, workers);
        let orbits = braid_orbits(&set, workers);
        levels.push(TowerLevel {
            k,
            group: g.clone(),
            classes: c,
            orbits,
            projection: if k == 0 { None } else { Some(projections[k - 1].clone()) },
        });
    }
    let mut edges = Vec::new();
    let mut edges_consistent = true;
    for k in 1..levels.len() {
        let (lower, upper) = (&levels[k - 1], &levels[k]);
        let psi = upper.projection.as_ref().expect("upper level");
        for (ui, o) in upper.orbits.orbits.iter().enumerate() {
            let targets: BTreeSet<Option<usize>> = o
                .members
                .iter()
                .map(|m| lower.orbits.orbit_of(&project_tuple(psi, m)))
                .collect();
            if targets.len() != 1 || targets.contains(&None) {
                edges_consistent = false;
            }
            if let Some(Some(li)) = targets.iter().next() {
                edges.push(((k, ui), (k - 1, *li)));
            }
        }
    }
    Ok(ComponentTree { spec: spec.clone(), levels, edges, edges_consistent, truncated })
}

/// Entrywise image under the level projection.
pub fn project_tuple(psi: &GroupHom, t: &[Elem]) -> Tuple {
    t.iter().map(|&e| psi.apply(e)).collect()
}

/// `Q_{G,C} = {m in (Z/N_C)^* : C^m = C}` as a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BclResult {
    pub n_c: u64,
    pub subgroup: Vec<u64>,
    pub units: Vec<u64>,
    pub rational_union: bool,
}

pub fn bcl(g: &FiniteGroup, c: &ClassVector) -> Result<BclResult> {
    let n = c.n_c;
    let units: Vec<u64> = (1..=n.max(1)).filter(|&m| gcd(m, n) == 1 && (m < n || n == 1)).collect();
    let target = c.multiset();
    let mut subgroup = Vec::new();
    for &m in &units {
        if c.power(g, m as i64)?.multiset() == target {
            subgroup.push(m);
        }
    }
    Ok(BclResult { n_c: n, rational_union: subgroup.len() == units.len(), subgroup, units })
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsoluteFiber {
    pub label: String,
    pub size: usize,
    pub inner_orbits: Vec<String>,
    pub inner_classes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberStats {
    pub reduced: bool,
    pub inner_count: usize,
    pub absolute_count: usize,
    pub fibers: Vec<AbsoluteFiber>,
}

/// Inner components and classes above each absolute component.
pub fn inner_absolute_fibers(
    g: Arc<FiniteGroup>,
    c: &ClassVector,
    reduced: bool,
    workers: usize,
) -> Result<FiberStats> {
    let (mi, ma) = if reduced {
        (EquivalenceMode::InnerReduced, EquivalenceMode::AbsoluteReduced)
    } else {
        (EquivalenceMode::Inner, EquivalenceMode::Absolute)
    };
    let inner_ctx = NielsenContext::new(g.clone(), c.clone(), mi)?;
    let abs_ctx = NielsenContext::new(g, c.clone(), ma)?;
    let inner = braid_orbits(&enumerate_nielsen(&inner_ctx, workers), workers);
    let abs = braid_orbits(&enumerate_nielsen(&abs_ctx, workers), workers);
    let mut fibers: Vec<AbsoluteFiber> = abs
        .orbits
        .iter()
        .map(|o| AbsoluteFiber {
            label: o.label.clone(),
            size: o.size(),
            inner_orbits: Vec::new(),
            inner_classes: 0,
        })
        .collect();
    for io in &inner.orbits {
        let mut above = BTreeSet::new();
        for m in &io.members {
            let a = abs.orbit_of(m).expect("inner class maps to an absolute class");
            fibers[a].inner_classes += 1;
            above.insert(a);
        }
        for a in above {
            fibers[a].inner_orbits.push(io.label.clone());
        }
    }
    Ok(FiberStats {
        reduced,
        inner_count: inner.set.len(),
        absolute_count: abs.set.len(),
        fibers,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrattiniStep {
    pub k: usize,
    pub outcome: FrattiniOutcome,
    /// The kernel of `G_k -> G_{k-1}` is an l-group.
    pub ell_kernel: bool,
}

/// Frattini test for each `G_k -> G_{k-1}`, `1 <= k <= k_max`.
pub fn eventually_frattini_report(
    spec: &TowerSpec,
    k_max: usize,
    budget: u128,
    workers: usize,
) -> Result<Vec<FrattiniStep>> {
    let mut steps = Vec::new();
    let mut lower = spec.level_group(0)?;
    for k in 1..=k_max {
        let upper = match spec.level_group(k) {
            Ok(g) => g,
            Err(e) if e.is_budget() => {
                steps.push(FrattiniStep {
                    k,
                    outcome: FrattiniOutcome::Skipped { tuples: 0 },
                    ell_kernel: true,
                });
                break;
            }
            Err(e) => return Err(e),
        };
        let psi = spec.projection(&upper, &lower)?;
        let mut kern = psi.kernel().len() as u64;
        while kern.is_multiple_of(spec.ell as u64) {
            kern /= spec.ell as u64;
        }
        steps.push(FrattiniStep {
            k,
            outcome: is_frattini_cover(&psi, budget, workers)?,
            ell_kernel: kern == 1,
        });
        lower = upper;
    }
    Ok(steps)
}

/// `K_l`: `(l+1)/6` for `l = -1 mod 3`, `(l-1)/6` for `l = 1 mod 3`.
pub fn k_ell(ell: u64) -> u64 {
    match ell % 3 {
        2 => (ell + 1) / 6,
        1 => (ell - 1) / 6,
        _ => 0,
    }
}

/// Convenience for the catalog: a tower spec from a group family name.
pub fn parse_family(family: &str, action: Option<&str>) -> Result<TowerFamily> {
    match family.trim().to_ascii_lowercase().as_str() {
        "vector" => {
            let m = action.ok_or_else(|| Error::InvalidTower("vector family needs --action".into()))?;
            Ok(TowerFamily::Vector { matrix: crate::group::parse_matrix(m)? })
        }
        "dihedral" => Ok(TowerFamily::Dihedral),
        "sl2" => Ok(TowerFamily::Sl2),
        other => Err(Error::InvalidTower(format!("unknown family {other:?}"))),
    }
}
