//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Long optional checks run with `--ignored` or
//! `--include-ignored`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hurwitz::braid::{apply_q, apply_sh, braid_orbits, cusp_orbits, verify_braid_relations, BraidOrbits};
use hurwitz::geometry::{gammas, genus_of_component, moduli_flags, sh_incidence};
use hurwitz::group::{make_group, ClassVector, FiniteGroup, GroupHom};
use hurwitz::lift::{
    extend_action_to_heisenberg, is_frattini_cover, maximal_central_quotient, spin4, spin5,
    CentralExtension, FrattiniOutcome,
};
use hurwitz::nielsen::{enumerate_nielsen, EquivalenceMode, NielsenContext, Tuple};
use hurwitz::tower::{
    classify_orbit, component_tree, inner_absolute_fibers, k_ell, project_tuple, Detection,
    TowerFamily, TowerSpec,
};

type Outcome = Result<String, String>;

/// Id, name, check, and time limit.
type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

const ORDER3: &str = "[[0,-1],[1,-1]]";

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn orbits_of(g: &Arc<FiniteGroup>, classes: &str, mode: EquivalenceMode, workers: usize) -> Result<BraidOrbits, String> {
    let c = ClassVector::parse(g, classes).map_err(err)?;
    let ctx = NielsenContext::new(g.clone(), c, mode).map_err(err)?;
    Ok(braid_orbits(&enumerate_nielsen(&ctx, workers), workers))
}

/// Whether `a` equals `b` after a simultaneous row/column permutation.
fn equal_up_to_ordering(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    use itertools::Itertools;
    a.len() == b.len()
        && (0..a.len()).permutations(a.len()).any(|p| {
            (0..a.len()).all(|i| (0..a.len()).all(|j| a[p[i]][p[j]] == b[i][j]))
        })
}

fn a4_reduced() -> Result<BraidOrbits, String> {
    let g = make_group("A4").map_err(err)?;
    orbits_of(&g, "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced, 0)
}

fn criterion_1() -> Outcome {
    let orbits = a4_reduced()?;
    let sizes: Vec<usize> = orbits.orbits.iter().map(|o| o.size()).collect();
    ensure(sizes == vec![6, 9], format!("orbit sizes {sizes:?}"))?;
    let widths: Vec<Vec<usize>> = orbits
        .orbits
        .iter()
        .map(|o| cusp_orbits(o).iter().map(|c| c.width).collect())
        .collect();
    ensure(widths == vec![vec![4, 1, 1], vec![4, 3, 2]], format!("cusp widths {widths:?}"))?;
    let m = sh_incidence(&orbits.orbits).map_err(err)?;
    let minus = m.block(0);
    let plus = m.block(1);
    let expected_plus = vec![vec![1, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
    let expected_minus = vec![vec![2, 1, 1], vec![1, 0, 0], vec![1, 0, 0]];
    ensure(equal_up_to_ordering(&plus, &expected_plus), format!("plus block {plus:?}"))?;
    ensure(equal_up_to_ordering(&minus, &expected_minus), format!("minus block {minus:?}"))?;
    let n = m.entries.len();
    let cross_zero = (0..n).all(|i| (0..n).all(|j| m.block_of[i] == m.block_of[j] || m.entries[i][j] == 0));
    ensure(cross_zero && m.is_symmetric(), "matrix not block-diagonal and symmetric")?;
    Ok(format!("orbits 9 + 6, widths {{4,3,2}} and {{4,1,1}}, plus block {plus:?}, minus block {minus:?}"))
}

fn criterion_2() -> Outcome {
    let orbits = a4_reduced()?;
    let minus = genus_of_component(&orbits.orbits[0]).map_err(err)?;
    let plus = genus_of_component(&orbits.orbits[1]).map_err(err)?;
    let triple = |r: &hurwitz::geometry::GenusReport| (r.ind_gamma0, r.ind_gamma1, r.ind_gamma_inf);
    ensure(triple(&plus) == (6, 4, 6), format!("plus indices {:?}", triple(&plus)))?;
    ensure(triple(&minus) == (4, 3, 3), format!("minus indices {:?}", triple(&minus)))?;
    ensure(plus.genus == 0 && minus.genus == 0, "nonzero genus")?;
    // the fixed point of gamma_1 lies in the width-4 cusp of the plus orbit
    let o = &orbits.orbits[1];
    let [g0, g1, _] = gammas(o);
    let wide = &cusp_orbits(o)[0];
    let fixed_in = |p: &[u32]| wide.positions.iter().filter(|&&x| p[x] as usize == x).count();
    ensure(wide.width == 4 && fixed_in(&g1) == 1 && fixed_in(&g0) == 0, "gamma fixed points in O_{1,1}")?;
    ensure(plus.fixed_gamma1 == 1 && plus.fixed_gamma0 == 0, "plus fixed points")?;
    ensure(minus.fixed_gamma1 == 0 && minus.fixed_gamma0 == 0, "minus fixed points")?;
    Ok("indices (6,4,6) and (4,3,3), both genus 0; gamma_1 fixes 1 element of the width-4 plus cusp, gamma_0 none".into())
}

/// Lifts a class vector of `ext.base()` to the cover by same-order lifts.
fn lifted_classes(ext: &CentralExtension, c: &ClassVector) -> Result<ClassVector, String> {
    let base = ext.base();
    let cover = ext.cover();
    let classes = c
        .classes
        .iter()
        .map(|&k| ext.same_order_lift(base.class(k).rep).map(|e| cover.class_of(e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(ClassVector::new(cover, classes))
}

fn criterion_3() -> Outcome {
    let ext = spin4().map_err(err)?;
    let a4 = ext.base().clone();
    let c = ClassVector::parse(&a4, "[3a,3a,3b,3b]").map_err(err)?;
    let a4_orbits = orbits_of(&a4, "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced, 0)?;
    let lc = lifted_classes(&ext, &c)?;
    let ctx = NielsenContext::new(ext.cover().clone(), lc, EquivalenceMode::InnerReduced).map_err(err)?;
    let spin = braid_orbits(&enumerate_nielsen(&ctx, 0), 0);
    let sizes: Vec<usize> = spin.orbits.iter().map(|o| o.size()).collect();
    ensure(sizes == vec![9], format!("spin orbit sizes {sizes:?}"))?;
    let invariants: Vec<String> = a4_orbits
        .orbits
        .iter()
        .map(|o| ext.lift_invariant(o.seed()).map(|l| l.label))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(invariants[0] != invariants[1], format!("invariants {invariants:?}"))?;
    let trivial = invariants.iter().position(|l| l == "+1").ok_or("no trivial orbit")?;
    let target = &a4_orbits.orbits[trivial];
    let images: BTreeSet<Tuple> = spin.orbits[0]
        .members
        .iter()
        .map(|m| a4_orbits.set.ctx.canonicalize(&project_tuple(&ext.projection, m)))
        .collect();
    let expected: BTreeSet<Tuple> = target.members.iter().cloned().collect();
    ensure(images == expected, "projection is not a bijection onto the trivial orbit")?;
    Ok(format!(
        "spin class: one orbit of size 9 onto {} (size {}); invariants minus/plus = {invariants:?}",
        target.label,
        target.size()
    ))
}

fn criterion_4() -> Outcome {
    let e4 = spin4().map_err(err)?;
    let a4 = e4.base().clone();
    for c in ["[3a,3a,3a]", "[3b,3b,3b]"] {
        let orbits = orbits_of(&a4, c, EquivalenceMode::Inner, 0)?;
        ensure(!orbits.orbits.is_empty(), "empty A4 class")?;
        for o in &orbits.orbits {
            let l = e4.lift_invariant(o.seed()).map_err(err)?;
            ensure(l.label == "-1", format!("A4 {c} invariant {}", l.label))?;
            ensure(e4.is_obstructed(o).map_err(err)?, "A4 not obstructed")?;
        }
    }
    let e5 = spin5().map_err(err)?;
    let a5 = e5.base().clone();
    let orbits = orbits_of(&a5, "[3a,3a,3a,3a]", EquivalenceMode::Inner, 0)?;
    ensure(orbits.orbits.len() == 1, format!("A5 has {} braid orbits", orbits.orbits.len()))?;
    let l = e5.lift_invariant(orbits.orbits[0].seed()).map_err(err)?;
    ensure(l.label == "+1", format!("A5 invariant {}", l.label))?;
    Ok(format!(
        "n=4: invariant -1 on every orbit of both 3-cycle classes; n=5: one orbit of size {}, invariant +1",
        orbits.orbits[0].size()
    ))
}

fn level0_main_result(ell: u32) -> Outcome {
    let heis = extend_action_to_heisenberg(ell, &hurwitz::group::parse_matrix(ORDER3).map_err(err)?)
        .map_err(err)?;
    let g = heis.base.clone();
    let a = g.parse_class("3a").map_err(err)?;
    ensure(g.class_power(a, 2).map_err(err)? == g.parse_class("3b").map_err(err)?, "3b is not 3a^2")?;
    let orbits = orbits_of(&g, "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced, 0)?;
    let summaries = orbits
        .orbits
        .iter()
        .map(|o| classify_orbit(o, ell as u64, None, usize::MAX))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut trivial_orbits = BTreeSet::new();
    let mut multiplicity = std::collections::BTreeMap::new();
    for s in 0..heis.solutions.len() {
        let ext = heis.extension(s).map_err(err)?;
        let mut trivial = Vec::new();
        let mut values = BTreeSet::new();
        for (o, summary) in orbits.orbits.iter().zip(&summaries) {
            let inv = ext.lift_invariant(o.seed()).map_err(err)?;
            if inv.trivial {
                trivial.push(o.index);
                ensure(summary.hm == Detection::Present, format!("{} trivial orbit without HM rep", o.label))?;
            } else {
                let v = inv.label.parse::<u32>().map_err(err)?;
                values.insert(v);
                if s == 0 {
                    *multiplicity.entry(v).or_insert(0usize) += 1;
                }
                ensure(summary.double_identity, format!("{} lacks a double-identity cusp", o.label))?;
            }
        }
        ensure(trivial.len() as u64 == k_ell(ell as u64), format!("extension {s}: {} trivial-invariant orbits", trivial.len()))?;
        let all: BTreeSet<u32> = (1..ell).collect();
        ensure(values == all, format!("extension {s}: nontrivial values {values:?}"))?;
        trivial_orbits.insert(trivial);
    }
    ensure(trivial_orbits.len() == 1, "the trivial-invariant orbit depends on the extension")?;
    Ok(format!(
        "l={ell}: {} orbits, K_l = {} trivial with HM rep, every value of (Z/{ell})^* with multiplicities {multiplicity:?}; \
         same trivial orbit for all {} extension choices",
        orbits.orbits.len(),
        k_ell(ell as u64),
        heis.solutions.len()
    ))
}

fn criterion_5() -> Outcome {
    let a = level0_main_result(5)?;
    let b = level0_main_result(7)?;
    Ok(format!("{a}; {b}"))
}

/// Classical data for `Gamma_0(p)`, `p` prime: index, widths, genus.
fn gamma0_oracle(p: i64) -> (usize, Vec<usize>, u64) {
    let legendre = |a: i64| -> i64 {
        let r = (0..p).find(|x| (x * x - a).rem_euclid(p) == 0);
        if r.is_some() { 1 } else { -1 }
    };
    let mu = p + 1;
    let nu2 = 1 + legendre(-1);
    let nu3 = 1 + legendre(-3);
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 nu_inf
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 12;
    (mu as usize, vec![p as usize, 1], (twelve_g / 12) as u64)
}

fn criterion_6() -> Outcome {
    let mut genera = Vec::new();
    for ell in [5usize, 7, 11, 13] {
        let g = make_group(&format!("D{ell}")).map_err(err)?;
        let abs = orbits_of(&g, "[2a,2a,2a,2a]", EquivalenceMode::AbsoluteReduced, 0)?;
        ensure(abs.orbits.len() == 1, format!("D{ell}: {} absolute orbits", abs.orbits.len()))?;
        let report = genus_of_component(&abs.orbits[0]).map_err(err)?;
        let (mu, widths, genus) = gamma0_oracle(ell as i64);
        ensure(report.degree == mu, format!("D{ell}: degree {}", report.degree))?;
        ensure(report.cusp_widths == widths, format!("D{ell}: widths {:?}", report.cusp_widths))?;
        ensure(report.genus == genus, format!("D{ell}: genus {}", report.genus))?;
        let c = ClassVector::parse(&g, "[2a,2a,2a,2a]").map_err(err)?;
        let fibers = inner_absolute_fibers(g.clone(), &c, true, 0).map_err(err)?;
        ensure(
            fibers.inner_count == fibers.absolute_count * (ell - 1) / 2,
            format!("D{ell}: inner {} vs absolute {}", fibers.inner_count, fibers.absolute_count),
        )?;
        genera.push(report.genus);
    }
    Ok(format!("degrees l+1, widths {{l,1}}, genera {genera:?} for l = 5, 7, 11, 13; fiber degree (l-1)/2"))
}

fn reduction(upper: &str, lower: &str) -> Result<GroupHom, String> {
    let h = make_group(upper).map_err(err)?;
    let g = make_group(lower).map_err(err)?;
    GroupHom::from_generator_images(h, g.clone(), g.generators()).map_err(err)
}

fn frattini(upper: &str, lower: &str) -> Result<bool, String> {
    let psi = reduction(upper, lower)?;
    match is_frattini_cover(&psi, u128::MAX, 0).map_err(err)? {
        FrattiniOutcome::Frattini => Ok(true),
        FrattiniOutcome::NotFrattini => Ok(false),
        FrattiniOutcome::Skipped { .. } => Err("skipped".into()),
    }
}

fn criterion_7() -> Outcome {
    ensure(!frattini("SL2(9)", "SL2(3)")?, "SL2(Z/9) -> SL2(Z/3) reported Frattini")?;
    ensure(frattini("SL2(27)", "SL2(9)")?, "SL2(Z/27) -> SL2(Z/9) reported not Frattini")?;
    let lattice = format!("V(2,4):M={ORDER3}");
    let base = format!("V(2,2):M={ORDER3}");
    ensure(frattini(&lattice, &base)?, "(Z/4)^2:Z/3 -> (Z/2)^2:Z/3 reported not Frattini")?;
    Ok("SL2(Z/9)->SL2(Z/3) not Frattini; SL2(Z/27)->SL2(Z/9) Frattini; (Z/4)^2:Z/3->(Z/2)^2:Z/3 Frattini".into())
}

fn criterion_7_optional() -> Outcome {
    ensure(frattini("SL2(25)", "SL2(5)")?, "SL2(Z/25) -> SL2(Z/5) reported not Frattini")?;
    Ok("SL2(Z/25)->SL2(Z/5) Frattini".into())
}

fn criterion_8() -> Outcome {
    let mut tested = 0usize;
    let cases: Vec<(&str, &str, EquivalenceMode)> = vec![
        ("A4", "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced),
        ("A4", "[3a,3a,3b,3b]", EquivalenceMode::Inner),
        ("A4", "[3a,3a,3a]", EquivalenceMode::Inner),
        ("A5", "[3a,3a,3a,3a]", EquivalenceMode::Inner),
        ("A5", "[3a,3a,3a,3a]", EquivalenceMode::InnerReduced),
        ("D5", "[2a,2a,2a,2a]", EquivalenceMode::AbsoluteReduced),
        ("D7", "[2a,2a,2a,2a]", EquivalenceMode::InnerReduced),
        ("D11", "[2a,2a,2a,2a]", EquivalenceMode::AbsoluteReduced),
        ("D13", "[2a,2a,2a,2a]", EquivalenceMode::AbsoluteReduced),
        ("SL2(3)", "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced),
        ("V(2,5):M=[[0,-1],[1,-1]]", "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced),
        ("V(2,7):M=[[0,-1],[1,-1]]", "[3a,3a,3b,3b]", EquivalenceMode::InnerReduced),
    ];
    for (group, classes, mode) in &cases {
        let g = make_group(group).map_err(err)?;
        let one = orbits_of(&g, classes, *mode, 1)?;
        let four = orbits_of(&g, classes, *mode, 4)?;
        ensure(one.set.reps == four.set.reps, format!("{group} {mode}: worker count changes the class set"))?;
        let m1: Vec<&Vec<Tuple>> = one.orbits.iter().map(|o| &o.members).collect();
        let m4: Vec<&Vec<Tuple>> = four.orbits.iter().map(|o| &o.members).collect();
        ensure(m1 == m4, format!("{group} {mode}: worker count changes the orbits"))?;
        let report = verify_braid_relations(&one.set, 50, 2024);
        for c in &report.checks {
            ensure(c.passed(), format!("{group} {mode}: {} fails on {:?}", c.name, c.witness))?;
            tested += c.tested;
        }
        if mode.is_reduced() {
            for o in &one.orbits {
                moduli_flags(o).map_err(err)?;
            }
        }
    }
    // lift invariants are braid invariants
    let e4 = spin4().map_err(err)?;
    let e5 = spin5().map_err(err)?;
    let heis = extend_action_to_heisenberg(5, &hurwitz::group::parse_matrix(ORDER3).map_err(err)?).map_err(err)?;
    let e_h = heis.extension(0).map_err(err)?;
    for (ext, classes, mode) in [
        (&e4, "[3a,3a,3b,3b]", EquivalenceMode::Inner),
        (&e4, "[3a,3a,3a]", EquivalenceMode::Inner),
        (&e5, "[3a,3a,3a,3a]", EquivalenceMode::Inner),
        (&e_h, "[3a,3a,3b,3b]", EquivalenceMode::Inner),
    ] {
        let orbits = orbits_of(ext.base(), classes, mode, 0)?;
        let check = ext.check_constancy(&orbits.orbits).map_err(err)?;
        ensure(check.passed(), format!("{}: {:?}", check.name, check.witness))?;
        tested += check.tested;
    }
    // projection commutes with braid moves, level 1 -> level 0 for l = 2
    let spec = TowerSpec::new(2, TowerFamily::Vector { matrix: hurwitz::group::parse_matrix(ORDER3).map_err(err)? })
        .map_err(err)?;
    let tree = component_tree(&spec, "[3a,3a,3b,3b]", 1, EquivalenceMode::Inner, 0).map_err(err)?;
    let upper = &tree.levels[1];
    let psi = upper.projection.as_ref().ok_or("no projection")?;
    let (g1, g0) = (&upper.group, &tree.levels[0].group);
    for m in &upper.set().reps {
        let down = project_tuple(psi, m);
        for i in 1..4 {
            let a = project_tuple(psi, &apply_q(g1, m, i).map_err(err)?);
            let b = apply_q(g0, &down, i).map_err(err)?;
            ensure(a == b, "projection does not commute with q_i")?;
        }
        ensure(project_tuple(psi, &apply_sh(m)) == apply_sh(&down), "projection does not commute with sh")?;
        ensure(tree.levels[0].set().ctx.is_valid(&down), "projection leaves the Nielsen class")?;
        tested += 5;
    }
    ensure(tree.edges_consistent, "component-tree edges depend on the representative")?;
    Ok(format!("{tested} relation instances checked over {} configurations, zero violations", cases.len()))
}

fn criterion_9() -> Outcome {
    let spec = TowerSpec::new(2, TowerFamily::Vector { matrix: hurwitz::group::parse_matrix(ORDER3).map_err(err)? })
        .map_err(err)?;
    let tree = component_tree(&spec, "[3a,3a,3b,3b]", 1, EquivalenceMode::InnerReduced, 0).map_err(err)?;
    ensure(tree.levels.len() == 2, "level 1 missing")?;
    ensure(tree.levels[1].group.order() == 48, format!("|G_1| = {}", tree.levels[1].group.order()))?;
    let level0 = tree.levels[0].orbits.orbits.len();
    ensure(level0 == 2, format!("{level0} level-0 orbits"))?;
    let hit = tree.hit_orbits(0);
    ensure(hit.len() == 2, format!("level-0 orbits hit: {hit:?}"))?;
    ensure(tree.edges_consistent, "inconsistent edges")?;
    // the central quotient of G_1 -> G_0 is trivial, so nothing is obstructed
    let psi = tree.levels[1].projection.as_ref().ok_or("no projection")?;
    let central = maximal_central_quotient(psi).map_err(err)?;
    ensure(central.kernel.len() == 1, format!("central kernel of order {}", central.kernel.len()))?;
    let sizes: Vec<usize> = tree.levels[1].orbits.orbits.iter().map(|o| o.size()).collect();
    Ok(format!(
        "|G_1| = 48, level-1 orbit sizes {sizes:?}, edges {:?}; both level-0 components hit",
        tree.edges
    ))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let long = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let mut criteria: Vec<Criterion> = vec![
        ("1", "A4 table reproduction", criterion_1, Duration::from_secs(1)),
        ("2", "genus of the A4 components", criterion_2, Duration::from_secs(1)),
        ("3", "spin separation", criterion_3, Duration::from_secs(1)),
        ("4", "lift invariant law for A4, A5", criterion_4, Duration::from_secs(5)),
        ("5", "level-0 main result at l = 5, 7", criterion_5, Duration::from_secs(60)),
        ("6", "modular-curve oracle", criterion_6, Duration::from_secs(30)),
        ("7", "Frattini checks", criterion_7, Duration::from_secs(600)),
        ("8", "property suites", criterion_8, Duration::from_secs(600)),
        ("9", "level-1 tower", criterion_9, Duration::from_secs(60)),
    ];
    if long {
        criteria.push(("7b", "Frattini SL2(Z/25) -> SL2(Z/5) (optional)", criterion_7_optional, Duration::from_secs(3600)));
    }
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail} (took {elapsed:.2?}, limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name} [{elapsed:.2?}] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id}: {name} [{elapsed:.2?}] {detail}");
            }
        }
    }
    if !long {
        println!("SKIP criterion 4b: A6 spin emptiness (no Spin6 cover in the catalog)");
        println!("SKIP criterion 7b: SL2(Z/25) -> SL2(Z/5) (run with --ignored)");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
