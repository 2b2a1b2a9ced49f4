//! The `sbw` commands and the checks they share.

use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;
use sha2::{Digest, Sha256};

use sbw_core::graded::{degree_grid, render_group};
use sbw_core::presentation::{
    ambient_image, ambient_presentation, check_equivalences, invariants, theorem_presentation, verify_presentation,
    Condition, LiftStrategy, PresentationError, RelationKind,
};
use sbw_core::stringy::{sector_mul, StringyDegree};
use sbw_core::{BlowupInstance, Graded, Rational, SectorId, StringyError, StringyRing};

use crate::instance::{self, InstanceError, InstanceFile};
use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckInput,
    Sectors,
    Ages,
    Chow,
    StringyTable,
    Ambient,
    Presentation,
    Verify,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::CheckInput,
        Command::Sectors,
        Command::Ages,
        Command::Chow,
        Command::StringyTable,
        Command::Ambient,
        Command::Presentation,
        Command::Verify,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckInput => "check-input",
            Command::Sectors => "sectors",
            Command::Ages => "ages",
            Command::Chow => "chow",
            Command::StringyTable => "stringy-table",
            Command::Ambient => "ambient",
            Command::Presentation => "presentation",
            Command::Verify => "verify",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Stringy(#[from] StringyError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A parsed, validated instance with its stringy ring.
pub struct Loaded {
    pub file: InstanceFile,
    pub ring: StringyRing,
    pub digest: String,
}

impl Loaded {
    pub fn instance(&self) -> &Arc<BlowupInstance> {
        self.ring.instance()
    }
}

pub fn load_str(text: &str, dmax: Option<Rational>) -> Result<Loaded, CliError> {
    let file = instance::parse(text, dmax)?;
    let inst = Arc::new(file.build()?);
    let ring = StringyRing::new(inst)?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Loaded { file, ring, digest })
}

pub fn load(path: &Path, dmax: Option<Rational>) -> Result<Loaded, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    load_str(&text, dmax)
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn condition(c: &Condition) -> ConditionInfo {
    ConditionInfo { holds: c.holds, first_failure: c.first_failure.map(|d| d.to_string()), witness: c.witness.clone() }
}

fn ring_summary(r: &sbw_core::RingData) -> RingSummary {
    RingSummary {
        generators: r.generators.iter().map(|(n, d)| NamedDegree { name: n.clone(), degree: d.to_string() }).collect(),
        relations: r.relations.clone(),
    }
}

/// Denominator of the Chow grading: generator degrees of `X` and `Y`.
fn chow_denominator(inst: &BlowupInstance) -> i64 {
    inst.ax()
        .presentation()
        .degrees()
        .into_iter()
        .chain(inst.ay().presentation().degrees())
        .fold(1, |l, d| l.lcm(d.denom()))
}

fn groups(g: &dyn Graded, d_max: Rational, den: i64) -> Vec<DegreeGroup> {
    degree_grid(d_max, den)
        .into_iter()
        .map(|d| DegreeGroup { degree: d.to_string(), group: render_group(g.group_in_degree(d)) })
        .collect()
}

/// Projection formula, self-intersection of the exceptional divisor,
/// `c_r = i*[V]` and `[Y] = i_*(1)`, each on canonical generators.
pub fn structural_checks(inst: &BlowupInstance) -> Vec<Check> {
    let (ax, ay) = (inst.ax(), inst.ay());
    let d_max = inst.d_max();
    let codim = Rational::from(inst.codim() as i64);
    let mut out = Vec::new();

    let mut failure = None;
    let mut count = 0;
    'outer: for da in ay.pieces().keys() {
        for db in ax.pieces().keys() {
            if *da + *db + codim > d_max {
                continue;
            }
            for a in ay.canonical_generators(*da) {
                for b in ax.canonical_generators(*db) {
                    count += 1;
                    let lhs = ay.mul(&a, &inst.pull_i().apply(&b).expect("in range")).expect("in range");
                    let lhs = inst.push_i().apply(&lhs).expect("in range");
                    let rhs = ax.mul(&inst.push_i().apply(&a).expect("in range"), &b).expect("in range");
                    if !ax.equal(&lhs, &rhs) {
                        failure = Some(format!("fails for ({}, {})", ay.render(&a), ax.render(&b)));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(check("projection formula", failure.is_none(), failure.unwrap_or_else(|| format!("{count} pairs"))));

    let ey = inst.exceptional_ring();
    let t = ey.from_poly(&inst.t_poly()).expect("t in range");
    let mut failure = None;
    let mut count = 0;
    for d in ey.pieces().keys() {
        if *d + 1 > d_max {
            continue;
        }
        for y in ey.canonical_generators(*d) {
            count += 1;
            let back = inst.restrict_j(&inst.push_j(&y).expect("in range")).expect("in range");
            let expected = ey.neg(&ey.mul(&t, &y).expect("in range"));
            if failure.is_none() && !ey.equal(&back, &expected) {
                failure = Some(format!("fails for {}", ey.render(&y)));
            }
        }
    }
    out.push(check(
        "self-intersection j*j_* = -t",
        failure.is_none(),
        failure.unwrap_or_else(|| format!("{count} generators")),
    ));

    let mut failure = None;
    for k in &inst.center().ideals {
        let Some(top) = k.chern.last() else { continue };
        if Rational::from(k.codim as i64) > d_max {
            continue;
        }
        let pulled = inst.pull_i().apply(&k.class).expect("in range");
        if !ay.equal(top, &pulled) && failure.is_none() {
            failure = Some(format!("ideal {}: c_{} = {}, i*[V] = {}", k.name, k.codim, ay.render(top), ay.render(&pulled)));
        }
    }
    out.push(check("top Chern class c_r = i*[V]", failure.is_none(), failure.unwrap_or_default()));

    let detail = if codim <= d_max {
        let pushed = inst.push_i().apply(&ay.unit()).expect("in range");
        let y = &inst.center().y_class;
        (ax.equal(&pushed, y), format!("[Y] = {}", ax.render(y)))
    } else {
        (true, "above d_max".to_string())
    };
    out.push(check("[Y] = i_*(1)", detail.0, detail.1));
    out
}

/// `i*` versus `j*` surjectivity, degree by degree.
pub fn classic_check(inst: &BlowupInstance) -> Check {
    let r = inst.classic_equivalence_report();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let detail = format!(
        "i* surjective {}, j* surjective {}{}",
        yn(r.i_surjective()),
        yn(r.j_surjective()),
        r.first_failure_i.map(|d| format!(", first failure in degree {d}")).unwrap_or_default()
    );
    check("i* and j* surjectivity agree", r.agree(), detail)
}

/// Unit, commutativity, associativity and the grading law on canonical
/// generators of stringy degree `≤ d_max`.
pub fn algebra_checks(ring: &StringyRing) -> Result<Vec<Check>, CliError> {
    let cap = ring.d_max();
    let gens = ring.canonical_generators(cap);
    let one = ring.e(SectorId::TRIVIAL)?;
    let mut unit = None;
    let mut comm = None;
    let mut assoc = None;
    let mut grading = None;
    let mut triples = 0usize;
    for (i, a) in gens.iter().enumerate() {
        if unit.is_none() && ring.star(&one, &a.class)? != a.class {
            unit = Some(format!("fails on g_{}", i + 1));
        }
        for (j, b) in gens.iter().enumerate() {
            if a.stringy_degree + b.stringy_degree > cap {
                continue;
            }
            let ab = ring.star(&a.class, &b.class)?;
            if comm.is_none() && ab != ring.star(&b.class, &a.class)? {
                comm = Some(format!("fails on (g_{}, g_{})", i + 1, j + 1));
            }
            if grading.is_none() && !ab.is_zero() {
                let deg_ok = ring.stringy_degree(&ab) == StringyDegree::Homogeneous(a.stringy_degree + b.stringy_degree);
                if !deg_ok || ab.sector() != Some(sector_mul(a.sector, b.sector)) {
                    grading = Some(format!("fails on (g_{}, g_{})", i + 1, j + 1));
                }
            }
            for (k, c) in gens.iter().enumerate() {
                if a.stringy_degree + b.stringy_degree + c.stringy_degree > cap {
                    continue;
                }
                triples += 1;
                let l = ring.star(&ab, &c.class)?;
                let r = ring.star(&a.class, &ring.star(&b.class, &c.class)?)?;
                if assoc.is_none() && l != r {
                    assoc = Some(format!("fails on (g_{}, g_{}, g_{})", i + 1, j + 1, k + 1));
                }
            }
        }
    }
    let n = gens.len();
    Ok(vec![
        check("unit", unit.is_none(), unit.unwrap_or_else(|| format!("{n} generators"))),
        check("commutativity", comm.is_none(), comm.unwrap_or_default()),
        check("associativity", assoc.is_none(), assoc.unwrap_or_else(|| format!("{triples} triples"))),
        check("grading law", grading.is_none(), grading.unwrap_or_default()),
    ])
}

fn equivalence_info(ring: &StringyRing) -> Result<EquivalenceInfo, CliError> {
    let e = check_equivalences(ring)?;
    Ok(EquivalenceInfo {
        applicable: e.applicable,
        i_surjective: condition(&e.i_surjective),
        ambient_full: condition(&e.ambient_full),
        generated: condition(&e.generated),
        consistent: e.consistent(),
    })
}

fn relation_kind(k: RelationKind) -> &'static str {
    match k {
        RelationKind::Q => "Q",
        RelationKind::TKernel => "t-kernel",
        RelationKind::EKernel => "e-kernel",
        RelationKind::ESector => "e-sector",
        RelationKind::Product => "product",
    }
}

fn run_verify(ring: &StringyRing) -> Result<(Payload, bool), CliError> {
    let equivalence = equivalence_info(ring)?;
    let (degrees, verdict, iso) = match theorem_presentation(ring, LiftStrategy::Canonical) {
        Err(PresentationError::NotSurjective { degree }) => {
            (Vec::new(), format!("no presentation: i* is not surjective in degree {degree}"), true)
        }
        Err(e) => return Err(e.into()),
        Ok(pres) => {
            let rep = verify_presentation(ring, &pres)?;
            let degrees = rep
                .degrees
                .iter()
                .map(|d| DegreeCheckInfo {
                    degree: d.degree.to_string(),
                    presented: d.presented.clone(),
                    direct: d.direct.clone(),
                    relations_vanish: d.relations_vanish,
                    surjective: d.surjective,
                })
                .collect();
            let verdict = match rep.first_mismatch() {
                None => format!("isomorphic through degree {}", rep.d_max),
                Some(d) => format!("not isomorphic: first mismatch in degree {d}"),
            };
            (degrees, verdict, rep.isomorphic())
        }
    };
    let ok = equivalence.consistent && iso;
    Ok((Payload::Verify { equivalence, degrees, verdict }, ok))
}

fn run_selftest(ring: &StringyRing) -> Result<Vec<Check>, CliError> {
    let inst = ring.instance();
    let mut checks = structural_checks(inst);
    checks.push(classic_check(inst));
    checks.extend(algebra_checks(ring)?);
    let e = equivalence_info(ring)?;
    checks.push(check("equivalent conditions agree", e.consistent, ""));
    match theorem_presentation(ring, LiftStrategy::Canonical) {
        Err(PresentationError::NotSurjective { degree }) => {
            checks.push(check("presentation", true, format!("skipped: i* not surjective in degree {degree}")));
        }
        Err(e) => return Err(e.into()),
        Ok(pres) => {
            let rep = verify_presentation(ring, &pres)?;
            let detail = rep.first_mismatch().map(|d| format!("mismatch in degree {d}")).unwrap_or_default();
            checks.push(check("presentation verifies", rep.isomorphic(), detail));
            let other = verify_presentation(ring, &theorem_presentation(ring, LiftStrategy::Shifted(0x5eed))?)?;
            checks.push(check("invariants independent of lifts", invariants(&rep) == invariants(&other), ""));
        }
    }
    Ok(checks)
}

/// Runs one command and assembles its report.
pub fn run(cmd: Command, loaded: &Loaded) -> Result<Report, CliError> {
    let ring = &loaded.ring;
    let inst = loaded.instance();
    let data = &loaded.file.data;
    let d_max = ring.d_max();
    let names = inst.yt_names();
    let mut ok = true;
    let payload = match cmd {
        Command::CheckInput => {
            let mut checks = structural_checks(inst);
            checks.push(classic_check(inst));
            ok = checks.iter().all(|c| c.passed);
            Payload::CheckInput {
                x: ring_summary(&data.x),
                y: ring_summary(&data.y),
                ideals: data
                    .ideals
                    .iter()
                    .map(|k| IdealSummary { name: k.name.clone(), weight: k.weight, codim: k.codim })
                    .collect(),
                checks,
            }
        }
        Command::Sectors => Payload::Sectors {
            sectors: ring
                .sectors()
                .iter()
                .map(|s| SectorInfo {
                    id: s.id.to_string(),
                    symbol: s.id.symbol(),
                    arg: s.id.arg().to_string(),
                    relation: s.relation.as_ref().map(|p| p.render(&names)),
                })
                .collect(),
        },
        Command::Ages => Payload::Ages {
            sectors: ring
                .sectors()
                .iter()
                .map(|s| AgeInfo { id: s.id.to_string(), symbol: s.id.symbol(), age: s.age.to_string() })
                .collect(),
        },
        Command::Chow => {
            let den = chow_denominator(inst);
            let mut rings = vec![
                RingInvariants { name: "A*(X)".into(), groups: groups(inst.ax().as_ref(), d_max, den) },
                RingInvariants { name: "A*(Y)".into(), groups: groups(inst.ay().as_ref(), d_max, den) },
                RingInvariants {
                    name: "A*(exceptional)".into(),
                    groups: groups(inst.exceptional_ring().as_ref(), d_max, den),
                },
                RingInvariants { name: "A*(blowup)".into(), groups: groups(inst.blowup_ring(), d_max, den) },
            ];
            for s in ring.twisted() {
                let g = ring.sector_graded(s.id).expect("nonempty sector");
                rings.push(RingInvariants { name: format!("A*(sector {})", s.id.symbol()), groups: groups(g, d_max, den) });
            }
            Payload::Chow { rings }
        }
        Command::StringyTable => {
            let (gens, table) = ring.multiplication_table(d_max)?;
            let label = |i: usize| format!("g_{}", i + 1);
            let mut units = Vec::new();
            let tw: Vec<_> = ring.twisted().map(|s| (s.id, s.age)).collect();
            for (i, (z, az)) in tw.iter().enumerate() {
                for (h, ah) in &tw[i..] {
                    if *az + *ah > d_max {
                        continue;
                    }
                    let p = ring.star(&ring.e(*z)?, &ring.e(*h)?)?;
                    units.push(ProductInfo { left: z.symbol(), right: h.symbol(), product: ring.render(&p) });
                }
            }
            Payload::StringyTable {
                generators: gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| GeneratorInfo {
                        label: label(i),
                        sector: g.sector.symbol(),
                        chow_degree: g.chow_degree.to_string(),
                        stringy_degree: g.stringy_degree.to_string(),
                        class: ring.render(&g.class),
                    })
                    .collect(),
                units,
                products: table
                    .iter()
                    .map(|e| ProductInfo { left: label(e.left), right: label(e.right), product: ring.render(&e.product) })
                    .collect(),
            }
        }
        Command::Ambient => {
            let mut sectors = Vec::new();
            for s in ring.twisted() {
                let img = ambient_image(ring, s.id)?;
                sectors.push(AmbientInfo {
                    sector: s.id.symbol(),
                    full: img.is_full(),
                    degrees: img
                        .degrees
                        .iter()
                        .map(|d| AmbientDegreeInfo {
                            degree: d.degree.to_string(),
                            stringy_degree: d.stringy_degree.to_string(),
                            cokernel: d.cokernel.to_string(),
                            witness: d.witness.clone(),
                        })
                        .collect(),
                });
            }
            Payload::Ambient { sectors, relations: ambient_presentation(ring)?.render(ring) }
        }
        Command::Presentation => match theorem_presentation(ring, LiftStrategy::Canonical) {
            Err(PresentationError::NotSurjective { degree }) => Payload::Presentation {
                applicable: inst.center().weights().iter().any(|&b| b != 1),
                unavailable: Some(format!("i* is not surjective in degree {degree}")),
                generators: Vec::new(),
                relations: Vec::new(),
                lifts: Vec::new(),
            },
            Err(e) => return Err(e.into()),
            Ok(p) => Payload::Presentation {
                applicable: p.applicable,
                unavailable: None,
                generators: p
                    .names
                    .iter()
                    .zip(&p.degrees)
                    .map(|(n, d)| NamedDegree { name: n.clone(), degree: d.to_string() })
                    .collect(),
                relations: p
                    .relations
                    .iter()
                    .map(|r| RelationInfo {
                        kind: relation_kind(r.kind).into(),
                        degree: r.degree.to_string(),
                        relation: p.render_relation(r),
                    })
                    .collect(),
                lifts: p
                    .lifts
                    .iter()
                    .map(|l| LiftInfo {
                        context: l.context.clone(),
                        degree: l.degree.to_string(),
                        class: l.class.clone(),
                        lift: l.lift.clone(),
                    })
                    .collect(),
            },
        },
        Command::Verify => {
            let (p, v) = run_verify(ring)?;
            ok = v;
            p
        }
        Command::Selftest => {
            let checks = run_selftest(ring)?;
            ok = checks.iter().all(|c| c.passed);
            Payload::Selftest { checks }
        }
    };
    Ok(Report { command: cmd.name().into(), instance_digest: loaded.digest.clone(), d_max: d_max.to_string(), ok, payload })
}
