//! Structured command results, their text rendering and the machine
//! document.
//!
//! Every rational is a string `p/q` (or an integer), every group a string of
//! invariant factors such as `Z^2 + Z/4`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One run of one command on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the instance file bytes, lowercase hex.
    pub instance_digest: String,
    pub d_max: String,
    /// False when a check in the payload failed.
    pub ok: bool,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedDegree {
    pub name: String,
    pub degree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSummary {
    pub generators: Vec<NamedDegree>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSummary {
    pub name: String,
    pub weight: i64,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorInfo {
    /// `(r,c)`: the root of unity `exp(2πi c/r)`.
    pub id: String,
    pub symbol: String,
    pub arg: String,
    /// Relation cutting out the sector ring from `A*(Y)[t]`; absent for `e_1`.
    pub relation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeInfo {
    pub id: String,
    pub symbol: String,
    pub age: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub degree: String,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingInvariants {
    pub name: String,
    pub groups: Vec<DegreeGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub label: String,
    pub sector: String,
    pub chow_degree: String,
    pub stringy_degree: String,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductInfo {
    pub left: String,
    pub right: String,
    pub product: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientDegreeInfo {
    pub degree: String,
    pub stringy_degree: String,
    pub cokernel: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientInfo {
    pub sector: String,
    pub full: bool,
    pub degrees: Vec<AmbientDegreeInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionInfo {
    pub holds: bool,
    pub first_failure: Option<String>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceInfo {
    pub applicable: bool,
    pub i_surjective: ConditionInfo,
    pub ambient_full: ConditionInfo,
    pub generated: ConditionInfo,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInfo {
    pub kind: String,
    pub degree: String,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftInfo {
    pub context: String,
    pub degree: String,
    pub class: String,
    pub lift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheckInfo {
    pub degree: String,
    pub presented: String,
    pub direct: String,
    pub relations_vanish: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    CheckInput {
        x: RingSummary,
        y: RingSummary,
        ideals: Vec<IdealSummary>,
        checks: Vec<Check>,
    },
    Sectors {
        sectors: Vec<SectorInfo>,
    },
    Ages {
        sectors: Vec<AgeInfo>,
    },
    Chow {
        rings: Vec<RingInvariants>,
    },
    StringyTable {
        generators: Vec<GeneratorInfo>,
        /// Products of the sector units `e_ζ`.
        units: Vec<ProductInfo>,
        /// Products `g_i ⋆ g_j` of canonical generators, by label.
        products: Vec<ProductInfo>,
    },
    Ambient {
        sectors: Vec<AmbientInfo>,
        relations: Vec<String>,
    },
    Presentation {
        applicable: bool,
        /// Why no presentation was built, when `i*` is not surjective.
        unavailable: Option<String>,
        generators: Vec<NamedDegree>,
        relations: Vec<RelationInfo>,
        lifts: Vec<LiftInfo>,
    },
    Verify {
        equivalence: EquivalenceInfo,
        degrees: Vec<DegreeCheckInfo>,
        verdict: String,
    },
    Selftest {
        checks: Vec<Check>,
    },
}

impl Report {
    /// The machine document: pretty JSON with a trailing newline.
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_machine(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "{} (d_max {}, instance {})", self.command, self.d_max, &self.instance_digest[..12.min(self.instance_digest.len())]);
        match &self.payload {
            Payload::CheckInput { x, y, ideals, checks } => {
                for (name, r) in [("A*(X)", x), ("A*(Y)", y)] {
                    let gens: Vec<String> = r.generators.iter().map(|g| format!("{} ({})", g.name, g.degree)).collect();
                    let _ = writeln!(w, "{name}: generators {}; relations {}", join_or_none(&gens), join_or_none(&r.relations));
                }
                for k in ideals {
                    let _ = writeln!(w, "ideal {}: weight {}, codim {}", k.name, k.weight, k.codim);
                }
                render_checks(w, checks);
            }
            Payload::Sectors { sectors } => {
                for s in sectors {
                    let rel = s.relation.as_deref().map(|r| format!(", ring A*(Y)[t]/({r})")).unwrap_or_default();
                    let _ = writeln!(w, "{} {} arg {}{}", s.id, s.symbol, s.arg, rel);
                }
            }
            Payload::Ages { sectors } => {
                for s in sectors {
                    let _ = writeln!(w, "{} {} age {}", s.id, s.symbol, s.age);
                }
            }
            Payload::Chow { rings } => {
                for r in rings {
                    let gs: Vec<String> = r.groups.iter().map(|g| format!("{}: {}", g.degree, g.group)).collect();
                    let _ = writeln!(w, "{}  {}", r.name, gs.join(", "));
                }
            }
            Payload::StringyTable { generators, units, products } => {
                for g in generators {
                    let _ = writeln!(
                        w,
                        "{} = {}  sector {}, chow degree {}, stringy degree {}",
                        g.label, g.class, g.sector, g.chow_degree, g.stringy_degree
                    );
                }
                for p in units.iter().chain(products) {
                    let _ = writeln!(w, "{} * {} = {}", p.left, p.right, p.product);
                }
            }
            Payload::Ambient { sectors, relations } => {
                for s in sectors {
                    let _ = writeln!(w, "sector {}: {}", s.sector, if s.full { "full" } else { "not full" });
                    for d in &s.degrees {
                        let wit = d.witness.as_deref().map(|x| format!(", missing {x}")).unwrap_or_default();
                        let _ = writeln!(w, "  degree {} (stringy {}): cokernel {}{}", d.degree, d.stringy_degree, d.cokernel, wit);
                    }
                }
                for r in relations {
                    let _ = writeln!(w, "{r}");
                }
            }
            Payload::Presentation { applicable, unavailable, generators, relations, lifts } => {
                if let Some(u) = unavailable {
                    let _ = writeln!(w, "no presentation: {u}");
                } else {
                    if !applicable {
                        let _ = writeln!(w, "all weights are 1");
                    }
                    let gens: Vec<String> = generators.iter().map(|g| format!("{} ({})", g.name, g.degree)).collect();
                    let _ = writeln!(w, "generators: {}", gens.join(", "));
                    for r in relations {
                        let _ = writeln!(w, "[{}] degree {}: {}", r.kind, r.degree, r.relation);
                    }
                    for l in lifts {
                        let _ = writeln!(w, "lift for {} (degree {}): {} <- {}", l.context, l.degree, l.class, l.lift);
                    }
                }
            }
            Payload::Verify { equivalence, degrees, verdict } => {
                let e = equivalence;
                for (name, c) in [
                    ("i* surjective", &e.i_surjective),
                    ("ambient images full", &e.ambient_full),
                    ("generated by sector units", &e.generated),
                ] {
                    let fail = match (&c.first_failure, &c.witness) {
                        (Some(d), Some(x)) => format!(" (fails in degree {d}, witness {x})"),
                        (Some(d), None) => format!(" (fails in degree {d})"),
                        _ => String::new(),
                    };
                    let _ = writeln!(w, "{name}: {}{fail}", yes_no(c.holds));
                }
                let _ = writeln!(w, "conditions agree: {}", yes_no(e.consistent));
                for d in degrees {
                    let _ = writeln!(
                        w,
                        "degree {}: presented {}, direct {}, relations vanish {}, surjective {}",
                        d.degree,
                        d.presented,
                        d.direct,
                        yes_no(d.relations_vanish),
                        yes_no(d.surjective)
                    );
                }
                let _ = writeln!(w, "{verdict}");
            }
            Payload::Selftest { checks } => render_checks(w, checks),
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn join_or_none(v: &[String]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

fn render_checks(w: &mut String, checks: &[Check]) {
    for c in checks {
        let detail = if c.detail.is_empty() { String::new() } else { format!("  {}", c.detail) };
        let _ = writeln!(w, "{} {}{}", if c.passed { "PASS" } else { "FAIL" }, c.name, detail);
    }
}
