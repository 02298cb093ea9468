//! One function per subcommand, each producing a [`Report`].

use std::collections::BTreeMap;
use std::sync::Arc;

use log::info;
use serde::{Deserialize, Serialize};

use hurwitz::braid::{
    apply_q, apply_sh, braid_orbits, cusp_orbits, verify_braid_relations, BraidOrbits, RelationCheck,
};
use hurwitz::geometry::{genus_of_component, moduli_flags, sh_incidence, GenusReport, ModuliFlags};
use hurwitz::group::{ClassVector, FiniteGroup, GroupDescriptor, GroupHom};
use hurwitz::lift::{extend_action_to_heisenberg, spin4, spin5, CentralExtension};
use hurwitz::nielsen::{enumerate_nielsen, EquivalenceMode, NielsenClassSet, NielsenContext};
use hurwitz::tower::{
    bcl, classify_orbit, component_tree, eventually_frattini_report, inner_absolute_fibers,
    parse_family, project_tuple, FrattiniStep, OrbitSummary, TowerFamily, TowerSpec,
};

use crate::config::{Command, CommandConfig};
use crate::report::{matrix_rows, Report, Table};
use crate::CliError;

pub fn run(cfg: &CommandConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Enumerate => enumerate(cfg),
        Command::Orbits => orbits(cfg),
        Command::Shinc => shinc(cfg),
        Command::Genus => genus(cfg),
        Command::Lift => lift(cfg),
        Command::Tower => tower(cfg),
        Command::Bcl => bcl_cmd(cfg),
        Command::Check => check(cfg),
    }
}

fn mode(cfg: &CommandConfig, default: EquivalenceMode) -> Result<EquivalenceMode, CliError> {
    match &cfg.mode {
        Some(m) => Ok(m.parse()?),
        None => Ok(default),
    }
}

fn group(cfg: &CommandConfig) -> Result<Arc<FiniteGroup>, CliError> {
    let d: GroupDescriptor = cfg.require("group", &cfg.group)?.parse()?;
    Ok(Arc::new(d.build(cfg.order_bound)?))
}

fn context(
    cfg: &CommandConfig,
    g: Arc<FiniteGroup>,
    default: EquivalenceMode,
) -> Result<Arc<NielsenContext>, CliError> {
    let c = ClassVector::parse(&g, cfg.require("classes", &cfg.classes)?)?;
    Ok(NielsenContext::new(g, c, mode(cfg, default)?)?)
}

fn enumerate_capped(cfg: &CommandConfig, ctx: &Arc<NielsenContext>) -> Result<NielsenClassSet, CliError> {
    info!(
        "enumerating Ni({}, {}) in {} mode",
        ctx.group().name(),
        ctx.classes().display(ctx.group()),
        ctx.mode()
    );
    let set = enumerate_nielsen(ctx, cfg.workers);
    info!("{} classes", set.len());
    if set.len() > cfg.orbit_cap {
        return Err(CliError::Budget(format!(
            "Nielsen class has {} elements, above --orbit-cap {}",
            set.len(),
            cfg.orbit_cap
        )));
    }
    Ok(set)
}

fn orbits_of(cfg: &CommandConfig, ctx: &Arc<NielsenContext>) -> Result<BraidOrbits, CliError> {
    let set = enumerate_capped(cfg, ctx)?;
    let orbits = braid_orbits(&set, cfg.workers);
    info!("{} braid orbits", orbits.orbits.len());
    Ok(orbits)
}

fn require_reduced(cfg: &CommandConfig, ctx: &NielsenContext) -> Result<(), CliError> {
    if !ctx.mode().is_reduced() || ctx.r() != 4 {
        return Err(CliError::Usage(format!(
            "`{}` needs r = 4 and --mode inner-reduced or abs-reduced",
            cfg.command_name()
        )));
    }
    Ok(())
}

fn enumerate(cfg: &CommandConfig) -> Result<Report, CliError> {
    let ctx = context(cfg, group(cfg)?, EquivalenceMode::Inner)?;
    let set = enumerate_capped(cfg, &ctx)?;
    let reps: Vec<String> = set.reps.iter().map(|t| ctx.format_tuple(t)).collect();
    let mut table = Table::new(&["index", "tuple"]);
    let mut text = format!("{} classes\n", reps.len());
    for (i, r) in reps.iter().enumerate() {
        table.push(vec![i.to_string(), r.clone()]);
        text.push_str(&format!("{i} {r}\n"));
    }
    #[derive(Serialize)]
    struct Out {
        count: usize,
        reps: Vec<String>,
    }
    Report::new(Out { count: reps.len(), reps }, text, table)
}

#[derive(Serialize)]
struct OrbitRow {
    label: String,
    size: usize,
    seed: String,
    cusp_widths: Vec<usize>,
}

fn orbits(cfg: &CommandConfig) -> Result<Report, CliError> {
    let ctx = context(cfg, group(cfg)?, EquivalenceMode::Inner)?;
    let orbits = orbits_of(cfg, &ctx)?;
    let rows: Vec<OrbitRow> = orbits
        .orbits
        .iter()
        .map(|o| OrbitRow {
            label: o.label.clone(),
            size: o.size(),
            seed: ctx.format_tuple(o.seed()),
            cusp_widths: cusp_orbits(o).iter().map(|c| c.width).collect(),
        })
        .collect();
    let fibers = if ctx.mode().is_absolute() {
        Some(inner_absolute_fibers(ctx.group().clone(), ctx.classes(), ctx.mode().is_reduced(), cfg.workers)?)
    } else {
        None
    };
    let mut text = format!("{} classes, {} braid orbits\n", orbits.set.len(), rows.len());
    let mut table = Table::new(&["orbit", "size", "cusp_widths", "seed"]);
    for r in &rows {
        let widths = r.cusp_widths.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ");
        text.push_str(&format!("{} size {} cusp widths [{}] seed {}\n", r.label, r.size, widths, r.seed));
        table.push(vec![r.label.clone(), r.size.to_string(), widths, r.seed.clone()]);
    }
    if let Some(f) = &fibers {
        text.push_str(&format!(
            "inner classes {} over {} absolute classes\n",
            f.inner_count, f.absolute_count
        ));
        for a in &f.fibers {
            text.push_str(&format!("{} lies under inner orbits {}\n", a.label, a.inner_orbits.join(" ")));
        }
    }
    #[derive(Serialize)]
    struct Out {
        classes: usize,
        orbits: Vec<OrbitRow>,
        #[serde(skip_serializing_if = "Option::is_none")]
        fibers: Option<hurwitz::tower::FiberStats>,
    }
    Report::new(Out { classes: orbits.set.len(), orbits: rows, fibers }, text, table)
}

fn shinc(cfg: &CommandConfig) -> Result<Report, CliError> {
    let ctx = context(cfg, group(cfg)?, EquivalenceMode::InnerReduced)?;
    require_reduced(cfg, &ctx)?;
    let orbits = orbits_of(cfg, &ctx)?;
    let m = sh_incidence(&orbits.orbits)?;
    let mut text = String::new();
    for o in &orbits.orbits {
        let idx: Vec<usize> = (0..m.labels.len()).filter(|&i| m.block_of[i] == o.index).collect();
        text.push_str(&format!("{} (size {})\n", o.label, o.size()));
        let block = m.block(o.index);
        let width = idx.iter().map(|&i| m.labels[i].len()).max().unwrap_or(0);
        text.push_str(&format!("{:width$}  {}\n", "", idx.iter().map(|&i| m.labels[i].as_str()).collect::<Vec<_>>().join(" ")));
        for (row, &i) in matrix_rows(&block).iter().zip(&idx) {
            text.push_str(&format!("{:width$}  {}\n", m.labels[i], row));
        }
    }
    text.push_str(&format!("symmetric: {}\n", m.is_symmetric()));
    let mut headers = vec!["orbit", "cusp", "width"];
    headers.extend(m.labels.iter().map(String::as_str));
    let mut table = Table::new(&headers);
    for i in 0..m.labels.len() {
        let mut row = vec![
            orbits.orbits[m.block_of[i]].label.clone(),
            m.labels[i].clone(),
            m.widths[i].to_string(),
        ];
        row.extend(m.entries[i].iter().map(|x| x.to_string()));
        table.push(row);
    }
    #[derive(Serialize)]
    struct Out {
        orbits: Vec<String>,
        matrix: hurwitz::geometry::ShIncidenceMatrix,
        symmetric: bool,
    }
    let symmetric = m.is_symmetric();
    Report::new(
        Out { orbits: orbits.orbits.iter().map(|o| o.label.clone()).collect(), matrix: m, symmetric },
        text,
        table,
    )
}

fn genus(cfg: &CommandConfig) -> Result<Report, CliError> {
    let ctx = context(cfg, group(cfg)?, EquivalenceMode::InnerReduced)?;
    require_reduced(cfg, &ctx)?;
    let orbits = orbits_of(cfg, &ctx)?;
    #[derive(Serialize)]
    struct Component {
        report: GenusReport,
        flags: ModuliFlags,
    }
    let mut comps = Vec::new();
    let mut text = String::new();
    let mut table = Table::new(&[
        "orbit", "degree", "genus", "ind_gamma0", "ind_gamma1", "ind_gamma_inf", "fixed_gamma0",
        "fixed_gamma1", "cusp_widths", "inner_fine", "b_fine_reduced", "fine_reduced",
    ]);
    for o in &orbits.orbits {
        let report = genus_of_component(o)?;
        let flags = moduli_flags(o)?;
        let widths = report.cusp_widths.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ");
        text.push_str(&format!(
            "{}: degree {}, genus {}, indices ({},{},{}), fixed points gamma0 {} gamma1 {}, cusp widths [{}]\n",
            report.orbit,
            report.degree,
            report.genus,
            report.ind_gamma0,
            report.ind_gamma1,
            report.ind_gamma_inf,
            report.fixed_gamma0,
            report.fixed_gamma1,
            widths
        ));
        text.push_str(&format!(
            "  inner fine {}, b-fine reduced {}, fine reduced {}\n",
            flags.inner_fine, flags.b_fine_reduced, flags.fine_reduced
        ));
        table.push(vec![
            report.orbit.clone(),
            report.degree.to_string(),
            report.genus.to_string(),
            report.ind_gamma0.to_string(),
            report.ind_gamma1.to_string(),
            report.ind_gamma_inf.to_string(),
            report.fixed_gamma0.to_string(),
            report.fixed_gamma1.to_string(),
            widths,
            flags.inner_fine.to_string(),
            flags.b_fine_reduced.to_string(),
            flags.fine_reduced.to_string(),
        ]);
        comps.push(Component { report, flags });
    }
    Report::new(comps, text, table)
}

/// The map file for `--cover hom:<file>`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomFile {
    source: String,
    target: String,
    /// Images of the source generators, in the target's element syntax.
    images: Vec<String>,
}

fn heis_matrix(cfg: &CommandConfig) -> Result<Vec<Vec<i64>>, CliError> {
    if let Some(a) = &cfg.action {
        return Ok(hurwitz::group::parse_matrix(a)?);
    }
    if let Some(d) = &cfg.group {
        if let GroupDescriptor::VectorAction { matrix, .. } = d.parse()? {
            return Ok(matrix);
        }
    }
    Err(CliError::Usage("heis covers need --action or a V(2,l):M=... group".into()))
}

fn parse_heis(spec: &str) -> Option<(u32, usize)> {
    let inner = spec.strip_prefix("heis(")?.strip_suffix(')')?;
    let mut parts = inner.split(',').map(str::trim);
    let ell = parts.next()?.parse().ok()?;
    let i = match parts.next() {
        Some(s) => s.parse().ok()?,
        None => 0,
    };
    parts.next().is_none().then_some((ell, i))
}

fn load_cover(cfg: &CommandConfig, spec: &str) -> Result<CentralExtension, CliError> {
    let s = spec.trim();
    if s.eq_ignore_ascii_case("spin4") {
        return Ok(spin4()?);
    }
    if s.eq_ignore_ascii_case("spin5") {
        return Ok(spin5()?);
    }
    if let Some(path) = s.strip_prefix("hom:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
        let file: HomFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid hom file {path}: {e}")))?;
        let src: GroupDescriptor = file.source.parse()?;
        let tgt: GroupDescriptor = file.target.parse()?;
        let src = Arc::new(src.build(cfg.order_bound)?);
        let tgt = Arc::new(tgt.build(cfg.order_bound)?);
        let images = file.images.iter().map(|e| tgt.parse_element(e)).collect::<Result<Vec<_>, _>>()?;
        let hom = GroupHom::from_generator_images(src, tgt, &images)?;
        return Ok(CentralExtension::new(format!("hom:{path}"), hom)?);
    }
    if let Some((ell, i)) = parse_heis(s) {
        let heis = extend_action_to_heisenberg(ell, &heis_matrix(cfg)?)?;
        if i >= heis.solutions.len() {
            return Err(CliError::Usage(format!(
                "heis({ell}) has {} extensions; index {i} is out of range",
                heis.solutions.len()
            )));
        }
        return Ok(heis.extension(i)?);
    }
    Err(CliError::Usage(format!("unknown cover {s:?}; expected spin4, spin5, heis(l) or hom:<file>")))
}

/// The cover's base group, after checking that `--group` (if given)
/// describes the same group.
fn cover_base(cfg: &CommandConfig, ext: &CentralExtension) -> Result<Arc<FiniteGroup>, CliError> {
    let base = ext.base().clone();
    if cfg.group.is_some() {
        let g = group(cfg)?;
        let same = g.order() == base.order() && g.elements().all(|e| base.element(g.code(e)) == Some(e));
        if !same {
            return Err(CliError::Usage(format!(
                "--group {} is not the base {} of the cover",
                g.name(),
                base.name()
            )));
        }
    }
    Ok(base)
}

#[derive(Serialize)]
struct LiftRow {
    label: String,
    size: usize,
    rep: String,
    invariant: String,
    obstructed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<OrbitSummary>,
}

fn lift(cfg: &CommandConfig) -> Result<Report, CliError> {
    let ext = load_cover(cfg, cfg.require("cover", &cfg.cover)?)?;
    let ctx = context(cfg, cover_base(cfg, &ext)?, EquivalenceMode::Inner)?;
    let orbits = orbits_of(cfg, &ctx)?;
    let mut rows = Vec::new();
    let mut text = format!(
        "cover {} of order {}, kernel of order {}\n",
        ext.name,
        ext.cover().order(),
        ext.kernel.len()
    );
    let mut table = Table::new(&["orbit", "size", "invariant", "obstructed", "rep"]);
    for o in &orbits.orbits {
        let inv = ext.lift_invariant(o.seed())?;
        let summary = match cfg.ell {
            Some(ell) => Some(classify_orbit(o, ell as u64, Some(&ext), cfg.search_cap as usize)?),
            None => None,
        };
        text.push_str(&format!(
            "{} size {} invariant {}{}\n",
            o.label,
            o.size(),
            inv.label,
            if inv.trivial { "" } else { " (obstructed)" }
        ));
        if let Some(s) = &summary {
            text.push_str(&format!("  HM {:?}, double identity {}\n", s.hm, s.double_identity));
        }
        table.push(vec![
            o.label.clone(),
            o.size().to_string(),
            inv.label.clone(),
            (!inv.trivial).to_string(),
            ctx.format_tuple(o.seed()),
        ]);
        rows.push(LiftRow {
            label: o.label.clone(),
            size: o.size(),
            rep: ctx.format_tuple(o.seed()),
            invariant: inv.label,
            obstructed: !inv.trivial,
            summary,
        });
    }
    #[derive(Serialize)]
    struct Out {
        cover: String,
        cover_order: usize,
        kernel_order: usize,
        orbits: Vec<LiftRow>,
    }
    Report::new(
        Out { cover: ext.name.clone(), cover_order: ext.cover().order(), kernel_order: ext.kernel.len(), orbits: rows },
        text,
        table,
    )
}

fn tower_spec(cfg: &CommandConfig) -> Result<TowerSpec, CliError> {
    let ell = cfg.ell.ok_or_else(|| CliError::Usage("`tower` needs --ell".into()))?;
    let family = parse_family(cfg.family.as_deref().unwrap_or("vector"), cfg.action.as_deref())?;
    if let (TowerFamily::Vector { matrix }, Some(t)) = (&family, cfg.rank) {
        if matrix.len() != t {
            return Err(CliError::Usage(format!("--rank {t} does not match a {}x{} action", matrix.len(), matrix.len())));
        }
    }
    Ok(TowerSpec::new(ell, family)?.with_order_bound(cfg.order_bound))
}

#[derive(Serialize)]
struct LevelRow {
    k: usize,
    group: String,
    order: usize,
    classes: String,
    orbits: Vec<OrbitSummary>,
}

const CUSP_TYPE_NOTE: &str = "cusp types: g-l' when <g1,g4> and <g2,g3> are l'-groups, \
     o-l' when l does not divide the order of g2 g3, otherwise l-cusp";

fn tower(cfg: &CommandConfig) -> Result<Report, CliError> {
    let spec = tower_spec(cfg)?;
    let k_max = cfg.k_max.unwrap_or(1);
    let mode = mode(cfg, EquivalenceMode::InnerReduced)?;
    let classes = cfg.require("classes", &cfg.classes)?;
    info!("building {spec} up to level {k_max}");
    let tree = component_tree(&spec, classes, k_max, mode, cfg.workers)?;
    let ext = match &cfg.cover {
        Some(c) => Some(load_cover(cfg, c)?),
        None => None,
    };
    let mut levels = Vec::new();
    let mut text = format!("tower {spec}, mode {mode}\n{CUSP_TYPE_NOTE}\n");
    let mut table = Table::new(&["level", "orbit", "size", "hm", "double_identity", "invariant", "rep"]);
    for level in &tree.levels {
        if level.set().len() > cfg.orbit_cap {
            return Err(CliError::Budget(format!(
                "level {} has {} Nielsen classes, above --orbit-cap {}",
                level.k,
                level.set().len(),
                cfg.orbit_cap
            )));
        }
        let level_ext = if level.k == 0 { ext.as_ref() } else { None };
        let summaries = level
            .orbits
            .orbits
            .iter()
            .map(|o| classify_orbit(o, spec.ell as u64, level_ext, cfg.search_cap as usize))
            .collect::<Result<Vec<_>, _>>()?;
        text.push_str(&format!(
            "level {}: {} of order {}, C = {}, {} orbits\n",
            level.k,
            level.group.name(),
            level.group.order(),
            level.classes.display(&level.group),
            summaries.len()
        ));
        for s in &summaries {
            let inv = s.lift_invariant.as_ref().map(|l| l.label.clone()).unwrap_or_default();
            text.push_str(&format!(
                "  {} size {} HM {:?} double identity {}{}\n",
                s.label,
                s.size,
                s.hm,
                s.double_identity,
                if inv.is_empty() { String::new() } else { format!(" invariant {inv}") }
            ));
            let types: BTreeMap<String, usize> = s.cusps.iter().fold(BTreeMap::new(), |mut m, c| {
                *m.entry(c.cusp_type.to_string()).or_default() += 1;
                m
            });
            let types: Vec<String> = types.iter().map(|(k, v)| format!("{k} x{v}")).collect();
            text.push_str(&format!("    cusps: {}\n", types.join(", ")));
            table.push(vec![
                level.k.to_string(),
                s.label.clone(),
                s.size.to_string(),
                format!("{:?}", s.hm),
                s.double_identity.to_string(),
                inv,
                s.rep.clone(),
            ]);
        }
        levels.push(LevelRow {
            k: level.k,
            group: level.group.name().to_string(),
            order: level.group.order(),
            classes: level.classes.display(&level.group),
            orbits: summaries,
        });
    }
    let edges: Vec<String> = tree
        .edges
        .iter()
        .map(|&((k, a), (_, b))| {
            format!("{} -> {}", tree.levels[k].orbits.orbits[a].label, tree.levels[k - 1].orbits.orbits[b].label)
        })
        .collect();
    for (k, e) in tree.edges.iter().map(|e| e.0 .0).zip(&edges) {
        text.push_str(&format!("edge level {k}: {e}\n"));
    }
    text.push_str(&format!("edges consistent: {}\n", tree.edges_consistent));
    if let Some(t) = &tree.truncated {
        text.push_str(&format!("truncated: {t}\n"));
    }
    let frattini = if cfg.frattini {
        let steps = eventually_frattini_report(&spec, k_max, cfg.search_cap as u128, cfg.workers)?;
        for s in &steps {
            text.push_str(&format!("G_{} -> G_{}: {:?}, l-kernel {}\n", s.k, s.k - 1, s.outcome, s.ell_kernel));
        }
        Some(steps)
    } else {
        None
    };
    #[derive(Serialize)]
    struct Out {
        spec: TowerSpec,
        mode: String,
        cusp_types: &'static str,
        levels: Vec<LevelRow>,
        edges: Vec<String>,
        chains: Vec<Vec<usize>>,
        edges_consistent: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        truncated: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        frattini: Option<Vec<FrattiniStep>>,
    }
    let truncated = tree.truncated.clone();
    let mut report = Report::new(
        Out {
            spec,
            mode: mode.to_string(),
            cusp_types: CUSP_TYPE_NOTE,
            levels,
            edges,
            chains: tree.chains(),
            edges_consistent: tree.edges_consistent,
            truncated: truncated.clone(),
            frattini,
        },
        text,
        table,
    )?;
    report.budget_exceeded = truncated;
    Ok(report)
}

fn bcl_cmd(cfg: &CommandConfig) -> Result<Report, CliError> {
    let g = group(cfg)?;
    let c = ClassVector::parse(&g, cfg.require("classes", &cfg.classes)?)?;
    let r = bcl(&g, &c)?;
    let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let text = format!(
        "N_C = {}\nfixing subgroup of (Z/N_C)^*: {}\nrational union: {}\n",
        r.n_c,
        join(&r.subgroup),
        r.rational_union
    );
    let mut table = Table::new(&["n_c", "subgroup", "units", "rational_union"]);
    table.push(vec![r.n_c.to_string(), join(&r.subgroup), join(&r.units), r.rational_union.to_string()]);
    Report::new(r, text, table)
}

const SUITES: [&str; 4] = ["braid-relations", "determinism", "lift-constancy", "projection"];

fn check(cfg: &CommandConfig) -> Result<Report, CliError> {
    let suite = cfg.suite.as_deref().unwrap_or("all");
    let selected: Vec<&str> = match suite {
        "all" => {
            let mut s = vec!["braid-relations", "determinism"];
            if cfg.cover.is_some() {
                s.push("lift-constancy");
            }
            if cfg.ell.is_some() {
                s.push("projection");
            }
            s
        }
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(CliError::Usage(format!("unknown suite {other:?}; expected one of {SUITES:?} or all")))
        }
    };
    let mut checks: Vec<RelationCheck> = Vec::new();
    let mut gamma1_orders = Vec::new();
    for s in selected {
        info!("running suite {s}");
        match s {
            "braid-relations" => {
                let ctx = context(cfg, group(cfg)?, EquivalenceMode::Inner)?;
                let set = enumerate_capped(cfg, &ctx)?;
                let report = verify_braid_relations(&set, 200, cfg.seed);
                checks.extend(report.checks);
                gamma1_orders = report.gamma1_orders;
            }
            "determinism" => checks.push(determinism(cfg)?),
            "lift-constancy" => {
                let ext = load_cover(cfg, cfg.require("cover", &cfg.cover)?)?;
                let ctx = context(cfg, cover_base(cfg, &ext)?, EquivalenceMode::Inner)?;
                checks.push(ext.check_constancy(&orbits_of(cfg, &ctx)?.orbits)?);
            }
            _ => checks.push(projection(cfg)?),
        }
    }
    let passed = checks.iter().all(RelationCheck::passed);
    let mut text = String::new();
    let mut table = Table::new(&["check", "tested", "violations", "witness"]);
    for c in &checks {
        text.push_str(&format!(
            "{} {}: {} tested, {} violations{}\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.tested,
            c.violations,
            c.witness.as_ref().map(|w| format!(", e.g. {w}")).unwrap_or_default()
        ));
        table.push(vec![
            c.name.clone(),
            c.tested.to_string(),
            c.violations.to_string(),
            c.witness.clone().unwrap_or_default(),
        ]);
    }
    if !gamma1_orders.is_empty() {
        let orders: Vec<String> = gamma1_orders.iter().map(|o| o.to_string()).collect();
        text.push_str(&format!("order of gamma_1 per braid orbit: {}\n", orders.join(" ")));
    }
    #[derive(Serialize)]
    struct Out {
        passed: bool,
        checks: Vec<RelationCheck>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        gamma1_orders: Vec<u64>,
    }
    let mut report = Report::new(Out { passed, checks, gamma1_orders }, text, table)?;
    report.passed = passed;
    Ok(report)
}

/// Class sets and orbits agree between one worker and several.
fn determinism(cfg: &CommandConfig) -> Result<RelationCheck, CliError> {
    let ctx = context(cfg, group(cfg)?, EquivalenceMode::Inner)?;
    let many = if cfg.workers == 1 { 4 } else { cfg.workers };
    let a = braid_orbits(&enumerate_capped(cfg, &ctx)?, 1);
    let b = braid_orbits(&enumerate_nielsen(&ctx, many), many);
    let same_set = a.set.reps == b.set.reps;
    let same_orbits = a.orbits.len() == b.orbits.len()
        && a.orbits.iter().zip(&b.orbits).all(|(x, y)| x.members == y.members && x.label == y.label);
    let ok = same_set && same_orbits;
    Ok(RelationCheck {
        name: format!("output independent of worker count (1 vs {many})"),
        tested: a.set.len(),
        violations: usize::from(!ok),
        witness: (!ok).then(|| "class sets or orbits differ".to_string()),
    })
}

/// Level 1 to level 0 projection commutes with `q_i` and `sh` and keeps
/// tuples in the Nielsen class.
fn projection(cfg: &CommandConfig) -> Result<RelationCheck, CliError> {
    let spec = tower_spec(cfg)?;
    let mode = mode(cfg, EquivalenceMode::Inner)?;
    let tree = component_tree(&spec, cfg.require("classes", &cfg.classes)?, 1, mode, cfg.workers)?;
    let mut check = RelationCheck {
        name: format!("projection G_1 -> G_0 commutes with braid moves ({spec})"),
        tested: 0,
        violations: 0,
        witness: None,
    };
    if tree.levels.len() < 2 {
        return Err(CliError::Budget(tree.truncated.clone().unwrap_or_else(|| "level 1 not built".into())));
    }
    let (lower, upper) = (&tree.levels[0], &tree.levels[1]);
    let psi = upper.projection.as_ref().expect("level 1 has a projection");
    for m in &upper.set().reps {
        let down = project_tuple(psi, m);
        let mut ok = lower.set().ctx.is_valid(&down);
        for i in 1..m.len() {
            ok &= project_tuple(psi, &apply_q(&upper.group, m, i)?) == apply_q(&lower.group, &down, i)?;
        }
        ok &= project_tuple(psi, &apply_sh(m)) == apply_sh(&down);
        check.tested += 1;
        if !ok {
            check.violations += 1;
            check.witness.get_or_insert_with(|| upper.set().ctx.format_tuple(m));
        }
    }
    Ok(check)
}
