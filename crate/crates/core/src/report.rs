//! JSON schemas and text rendering for command output.
//!
//! Agents are labelled `1 … n`; objects use the profile's names. Every
//! probability crosses the I/O boundary as a `"num/den"` string.

use serde::{Deserialize, Serialize};

use crate::assignment::{DiscreteAssignment, RandomAssignment, TradingCycle};
use crate::efficiency::ExPostCertificate;
use crate::error::{Error, Result};
use crate::profile::{AgentId, ObjectId, PreferenceProfile};
use crate::rational::{parse_rational, to_fraction_string};
use crate::verify::{Counterexample, SweepReport, TheoremRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl AssignmentJson {
    pub fn new(p: &RandomAssignment, profile: &PreferenceProfile) -> Self {
        Self {
            agents: profile.agents().map(|a| a.to_string()).collect(),
            objects: profile.object_names().to_vec(),
            matrix: p
                .rows()
                .map(|row| row.iter().map(to_fraction_string).collect())
                .collect(),
        }
    }

    /// Reads the matrix back, mapping columns to the profile's objects by
    /// name (columns may appear in any order).
    pub fn to_assignment(&self, profile: &PreferenceProfile) -> Result<RandomAssignment> {
        let n = profile.n();
        if self.agents.len() != n || self.objects.len() != n || self.matrix.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.matrix.len(),
            });
        }
        let column_of: Vec<usize> = self
            .objects
            .iter()
            .map(|name| {
                profile
                    .object_names()
                    .iter()
                    .position(|o| o == name)
                    .ok_or_else(|| Error::InvalidAssignment(format!("unknown object `{name}`")))
            })
            .collect::<Result<_>>()?;
        let mut rows = vec![vec![crate::rational::zero(); n]; n];
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAssignment(format!("row {} has {} entries", i + 1, row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                rows[i][column_of[j]] = parse_rational(cell)?;
            }
        }
        RandomAssignment::new(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStepJson {
    pub object: String,
    pub agent: String,
}

/// Steps `(o_j, i_j)`: agent `i_j` holds `o_j` and prefers `o_{j+1}`; the
/// last step points back to the first object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub steps: Vec<CycleStepJson>,
}

impl CycleJson {
    pub fn new(cycle: &TradingCycle, profile: &PreferenceProfile) -> Self {
        Self {
            steps: cycle
                .steps()
                .iter()
                .map(|s| CycleStepJson {
                    object: profile.object_name(s.object).to_string(),
                    agent: s.agent.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedAssignmentJson {
    pub weight: String,
    /// Object name per agent, in agent order.
    pub assignment: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub ex_post_efficient: bool,
    pub support: Vec<WeightedAssignmentJson>,
}

impl CertificateJson {
    pub fn new(cert: Option<&ExPostCertificate>, profile: &PreferenceProfile) -> Self {
        Self {
            ex_post_efficient: cert.is_some(),
            support: cert
                .map(|c| {
                    c.weights()
                        .iter()
                        .map(|(d, w)| WeightedAssignmentJson {
                            weight: to_fraction_string(w),
                            assignment: discrete_names(d, profile),
                        })
                        .collect()
                })
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdCheckJson {
    pub sd_efficient: bool,
    pub cycle: Option<CycleJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_sd_efficient: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremJson {
    pub profile: Vec<Vec<String>>,
    pub lhs_rsd_sd_inefficient: bool,
    pub rhs_expost_sd_inefficient_exists: bool,
    pub agree: bool,
    pub rsd: AssignmentJson,
    pub uniform_po_mixture: AssignmentJson,
    pub rsd_cycle: Option<CycleJson>,
    pub mixture_cycle: Option<CycleJson>,
}

impl TheoremJson {
    pub fn new(r: &TheoremRecord) -> Self {
        let p = &r.profile;
        Self {
            profile: profile_names(p),
            lhs_rsd_sd_inefficient: r.lhs_rsd_sd_inefficient,
            rhs_expost_sd_inefficient_exists: r.rhs_expost_sd_inefficient_exists,
            agree: r.agree,
            rsd: AssignmentJson::new(&r.rsd, p),
            uniform_po_mixture: AssignmentJson::new(&r.mixture, p),
            rsd_cycle: r.rsd_cycle.as_ref().map(|c| CycleJson::new(c, p)),
            mixture_cycle: r.mixture_cycle.as_ref().map(|c| CycleJson::new(c, p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRangeJson {
    pub start: u64,
    pub end: u64,
}

/// Wall-clock time is not part of the schema so reports stay reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepJson {
    pub n: usize,
    pub profiles_checked: u64,
    pub disagreements: u64,
    pub rsd_inefficient_count: u64,
    pub index_range: IndexRangeJson,
}

impl SweepJson {
    pub fn new(r: &SweepReport) -> Self {
        Self {
            n: r.n,
            profiles_checked: r.profiles_checked,
            disagreements: r.disagreements,
            rsd_inefficient_count: r.rsd_inefficient_count,
            index_range: IndexRangeJson {
                start: r.index_range.start,
                end: r.index_range.end,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub profile: Vec<Vec<String>>,
    pub rsd: AssignmentJson,
    pub cycle: CycleJson,
}

impl CounterexampleJson {
    pub fn new(c: &Counterexample) -> Self {
        Self {
            profile: profile_names(&c.profile),
            rsd: AssignmentJson::new(&c.rsd, &c.profile),
            cycle: CycleJson::new(&c.cycle, &c.profile),
        }
    }
}

fn profile_names(p: &PreferenceProfile) -> Vec<Vec<String>> {
    p.agents()
        .map(|a| p.ranking(a).iter().map(|&o| p.object_name(o).to_string()).collect())
        .collect()
}

fn discrete_names(d: &DiscreteAssignment, profile: &PreferenceProfile) -> Vec<String> {
    d.objects()
        .iter()
        .map(|&o| profile.object_name(o).to_string())
        .collect()
}

/// Everything a command can print.
#[derive(Debug, Clone)]
pub enum Report<'a> {
    Assignment {
        title: &'a str,
        assignment: &'a RandomAssignment,
        profile: &'a PreferenceProfile,
    },
    SdCheck {
        assignment: &'a RandomAssignment,
        profile: &'a PreferenceProfile,
        cycle: Option<&'a TradingCycle>,
        oracle: Option<bool>,
    },
    Cycle {
        cycle: Option<&'a TradingCycle>,
        profile: &'a PreferenceProfile,
    },
    Certificate {
        certificate: Option<&'a ExPostCertificate>,
        profile: &'a PreferenceProfile,
    },
    Theorem(&'a TheoremRecord),
    Sweep(&'a SweepReport),
    Counterexamples {
        found: &'a [Counterexample],
        trials: u64,
    },
}

/// Renders `report`. Output is a pure function of the report, so identical
/// inputs give byte-identical text.
pub fn emit_report(report: &Report<'_>, format: Format) -> String {
    match format {
        Format::Json => emit_json(report),
        Format::Text => emit_text(report),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn emit_json(report: &Report<'_>) -> String {
    match report {
        Report::Assignment {
            assignment, profile, ..
        } => to_json(&AssignmentJson::new(assignment, profile)),
        Report::SdCheck {
            cycle,
            profile,
            oracle,
            ..
        } => to_json(&SdCheckJson {
            sd_efficient: cycle.is_none(),
            cycle: cycle.map(|c| CycleJson::new(c, profile)),
            oracle_sd_efficient: *oracle,
        }),
        Report::Cycle { cycle, profile } => to_json(&cycle.map(|c| CycleJson::new(c, profile))),
        Report::Certificate {
            certificate,
            profile,
        } => to_json(&CertificateJson::new(*certificate, profile)),
        Report::Theorem(r) => to_json(&TheoremJson::new(r)),
        Report::Sweep(r) => to_json(&SweepJson::new(r)),
        Report::Counterexamples { found, .. } => {
            let list: Vec<_> = found.iter().map(CounterexampleJson::new).collect();
            if list.is_empty() {
                "[]\n".to_string()
            } else {
                to_json(&list)
            }
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit_text(report: &Report<'_>) -> String {
    match report {
        Report::Assignment {
            title,
            assignment,
            profile,
        } => format!("{title}\n{}", render_matrix(assignment, profile)),
        Report::SdCheck {
            assignment,
            profile,
            cycle,
            oracle,
        } => {
            let mut out = render_matrix(assignment, profile);
            out.push_str(&format!("SD-efficient: {}\n", yes_no(cycle.is_none())));
            if let Some(c) = cycle {
                out.push_str(&format!("trading cycle: {}\n", render_cycle(c, profile)));
            }
            if let Some(o) = oracle {
                out.push_str(&format!("LP oracle SD-efficient: {}\n", yes_no(*o)));
            }
            out
        }
        Report::Cycle { cycle, profile } => match cycle {
            Some(c) => format!("trading cycle: {}\n", render_cycle(c, profile)),
            None => "no trading cycle\n".to_string(),
        },
        Report::Certificate {
            certificate,
            profile,
        } => match certificate {
            None => "ex post efficient: no\n".to_string(),
            Some(cert) => {
                let rows: Vec<(String, String)> = cert
                    .weights()
                    .iter()
                    .map(|(d, w)| {
                        let held = d
                            .objects()
                            .iter()
                            .enumerate()
                            .map(|(i, &o)| format!("{}:{}", AgentId(i), profile.object_name(o)))
                            .collect::<Vec<_>>()
                            .join(" ");
                        (w.to_string(), held)
                    })
                    .collect();
                let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(6);
                let mut out = format!(
                    "ex post efficient: yes ({} Pareto optimal assignments in support)\n",
                    rows.len()
                );
                out.push_str(&format!("{:<width$}  assignment\n", "weight"));
                for (w, held) in rows {
                    out.push_str(&format!("{w:<width$}  {held}\n"));
                }
                out
            }
        },
        Report::Theorem(r) => {
            let p = &r.profile;
            let mut out = String::new();
            out.push_str("RSD assignment\n");
            out.push_str(&render_matrix(&r.rsd, p));
            out.push_str("uniform mixture of Pareto optimal assignments\n");
            out.push_str(&render_matrix(&r.mixture, p));
            out.push_str(&format!(
                "RSD SD-inefficient: {}\n",
                yes_no(r.lhs_rsd_sd_inefficient)
            ));
            if let Some(c) = &r.rsd_cycle {
                out.push_str(&format!("  RSD trading cycle: {}\n", render_cycle(c, p)));
            }
            out.push_str(&format!(
                "some ex post efficient assignment SD-inefficient: {}\n",
                yes_no(r.rhs_expost_sd_inefficient_exists)
            ));
            if let Some(c) = &r.mixture_cycle {
                out.push_str(&format!("  mixture trading cycle: {}\n", render_cycle(c, p)));
            }
            out.push_str(&format!("agree: {}\n", yes_no(r.agree)));
            out
        }
        Report::Sweep(r) => format!("{}\n", r.summary()),
        Report::Counterexamples { found, trials } => {
            let mut out = format!(
                "{} of {} sampled profiles have SD-inefficient RSD\n",
                found.len(),
                trials
            );
            for (k, c) in found.iter().enumerate() {
                out.push_str(&format!("\n# counterexample {}\n", k + 1));
                out.push_str(&crate::profile::format_profile(&c.profile));
                out.push_str(&format!(
                    "trading cycle: {}\n",
                    render_cycle(&c.cycle, &c.profile)
                ));
            }
            out
        }
    }
}

/// Right-aligned fraction grid with one-based agent labels and object names
/// as column headers.
pub fn render_matrix(p: &RandomAssignment, profile: &PreferenceProfile) -> String {
    let cells: Vec<Vec<String>> = p
        .rows()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(profile.object_names().iter().map(String::len))
        .max()
        .unwrap_or(1);
    let label = profile.n().to_string().len();
    let mut out = format!("{:label$}", "");
    for name in profile.object_names() {
        out.push_str(&format!("  {name:>width$}"));
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:>label$}", AgentId(i).to_string()));
        for cell in row {
            out.push_str(&format!("  {cell:>width$}"));
        }
        out.push('\n');
    }
    out
}

/// `o1 (agent 3) -> o2 (agent 1) -> o1`: each agent holds the object before
/// it and prefers the one after it.
pub fn render_cycle(c: &TradingCycle, profile: &PreferenceProfile) -> String {
    let mut out = String::new();
    for s in c.steps() {
        out.push_str(&format!(
            "{} (agent {}) -> ",
            profile.object_name(s.object),
            s.agent
        ));
    }
    let first = c.steps().first().map(|s| s.object).unwrap_or(ObjectId(0));
    out.push_str(profile.object_name(first));
    out
}
