//! Command-line front end: `check`, `sweep` and `show`.
//!
//! Reports carry the schema tag `kite-report/1`. Everything except the
//! `wall_ms` fields is a pure function of the resolved config.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{check_commutative, check_pea_axioms, check_pmv_axioms, check_symmetric, perfect_split, unique_state, Budget, Pea};
use crate::error::{Error, Result};
use crate::ideals::{check_double_negation_shift, least_normal_ideal, orbits};
use crate::kite::{Kite, KiteMv, KiteShape};
use crate::perm::Perm;
use crate::pogroup::{GroupDescriptor, PoGroup};
use crate::repr::twisted_representation;
use crate::riesz::{check_rdp_level, PeaCtx, RdpLevel};
use crate::verdict::{Status, Verdict};

pub const SCHEMA: &str = "kite-report/1";
pub const SWEEP_SCHEMA: &str = "kite-sweep/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;

const SHOW_LIMIT: usize = 40;

#[derive(Parser, Debug)]
#[command(name = "kitepea", version, about = "Kite pseudo effect algebras: bounded checks and tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run checks on one kite.
    Check(CheckArgs),
    /// Run checks over a grid of groups, sizes and permutation pairs.
    Sweep(SweepArgs),
    /// Print the carrier, addition and negation tables and the orbit report.
    Show(CheckArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub height: Option<u32>,
    /// Comma separated: axioms, pmv, symmetric, commutative, rip, rdp0, rdp, rdp1, rdp2, riesz, state, ideals, dneg, iso, all.
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub nmax: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Instance cap per quantified check.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `Z`, `Z^2`, `StrictCone2`, `TwistedLex(2,id,(0 1),Z)`, `Product(Z,Z)` or a JSON descriptor.
    #[arg(long)]
    pub group: Option<String>,
    /// `n=2;lambda=id;rho=(0 1)`; permutations as `id`, cycles or image lists `1,0`.
    #[arg(long)]
    pub shape: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Repeatable base group.
    #[arg(long)]
    pub group: Vec<String>,
    /// Index set sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub pairs: Option<Pairs>,
    /// Refuse grids with more cells.
    #[arg(long)]
    pub cell_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairs {
    /// Every `(λ, ρ)`.
    #[default]
    All,
    /// `λ = ρ` only.
    Diagonal,
}

/// Group given as a short name or a full descriptor.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum GroupSpec {
    Name(String),
    Descriptor(GroupDescriptor),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ShapeSpec {
    Text(String),
    Fields { n: Option<usize>, lambda: PermSpec, rho: PermSpec },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum PermSpec {
    Images(Vec<usize>),
    Text(String),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    groups: Option<Vec<GroupSpec>>,
    n: Option<Vec<usize>>,
    pairs: Option<Pairs>,
    heights: Option<Vec<u32>>,
    cell_budget: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    group: Option<GroupSpec>,
    shape: Option<ShapeSpec>,
    height: Option<u32>,
    nmax: Option<u32>,
    depth: Option<u32>,
    checks: Option<Vec<String>>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    budget: Option<u64>,
    sweep: Option<SweepFile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Axioms,
    Pmv,
    Symmetric,
    Commutative,
    Rip,
    Rdp0,
    Rdp,
    Rdp1,
    Rdp2,
    State,
    Ideals,
    Dneg,
    Iso,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::Axioms,
        CheckKind::Pmv,
        CheckKind::Symmetric,
        CheckKind::Commutative,
        CheckKind::Rip,
        CheckKind::Rdp0,
        CheckKind::Rdp,
        CheckKind::Rdp1,
        CheckKind::Rdp2,
        CheckKind::State,
        CheckKind::Ideals,
        CheckKind::Dneg,
        CheckKind::Iso,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Axioms => "axioms",
            CheckKind::Pmv => "pmv",
            CheckKind::Symmetric => "symmetric",
            CheckKind::Commutative => "commutative",
            CheckKind::Rip => "rip",
            CheckKind::Rdp0 => "rdp0",
            CheckKind::Rdp => "rdp",
            CheckKind::Rdp1 => "rdp1",
            CheckKind::Rdp2 => "rdp2",
            CheckKind::State => "state",
            CheckKind::Ideals => "ideals",
            CheckKind::Dneg => "dneg",
            CheckKind::Iso => "iso",
        }
    }

    fn level(self) -> Option<RdpLevel> {
        match self {
            CheckKind::Rip => Some(RdpLevel::Rip),
            CheckKind::Rdp0 => Some(RdpLevel::Rdp0),
            CheckKind::Rdp => Some(RdpLevel::Rdp),
            CheckKind::Rdp1 => Some(RdpLevel::Rdp1),
            CheckKind::Rdp2 => Some(RdpLevel::Rdp2),
            _ => None,
        }
    }
}

/// Expands names and the `riesz` and `all` aliases, keeping first occurrence order.
pub fn parse_checks(names: &[String]) -> Result<Vec<CheckKind>> {
    let mut out: Vec<CheckKind> = Vec::new();
    for raw in names {
        let s = raw.trim().to_ascii_lowercase();
        let add: Vec<CheckKind> = match s.as_str() {
            "" => continue,
            "all" => CheckKind::ALL.to_vec(),
            "riesz" => vec![CheckKind::Rip, CheckKind::Rdp0, CheckKind::Rdp, CheckKind::Rdp1, CheckKind::Rdp2],
            _ => match CheckKind::ALL.iter().find(|c| c.name() == s) {
                Some(c) => vec![*c],
                None => return Err(Error::config("checks", format!("unknown check `{raw}`"))),
            },
        };
        for c in add {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Parses `id`, cycle notation `(0 1)(2 3)` or an image list `1,0,3,2`.
pub fn parse_perm(s: &str, n: Option<usize>) -> Result<Perm> {
    let t = s.trim();
    if t == "id" || t.is_empty() {
        return match n {
            Some(n) => Ok(Perm::identity(n)),
            None if t.is_empty() => Ok(Perm::identity(0)),
            None => Err(Error::config("shape", "`id` needs `n=`")),
        };
    }
    if t.starts_with('(') {
        let n = n.ok_or_else(|| Error::config("shape", "cycle notation needs `n=`"))?;
        let mut cycles = Vec::new();
        for part in t.split(')') {
            let part = part.trim().trim_start_matches('(');
            if part.trim().is_empty() {
                continue;
            }
            let c: std::result::Result<Vec<usize>, _> = part.split_whitespace().map(str::parse).collect();
            cycles.push(c.map_err(|e| Error::config("shape", format!("bad cycle `{part}`: {e}")))?);
        }
        return Perm::from_cycles(n, &cycles).map_err(|e| Error::config("shape", e.to_string()));
    }
    let v: std::result::Result<Vec<usize>, _> = t.trim_matches(|c| c == '[' || c == ']').split(',').map(|x| x.trim().parse()).collect();
    let v = v.map_err(|e| Error::config("shape", format!("bad permutation `{t}`: {e}")))?;
    if let Some(n) = n {
        if v.len() != n {
            return Err(Error::config("shape", format!("`{t}` has {} images, expected {n}", v.len())));
        }
    }
    Perm::new(v).map_err(|e| Error::config("shape", e.to_string()))
}

fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|x| x.trim().to_string()).collect()
}

/// Parses a group name in the format printed by reports, or a JSON descriptor.
pub fn parse_group(s: &str) -> Result<GroupDescriptor> {
    let t = s.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::config("group", e.to_string()));
    }
    match t {
        "Z" => return Ok(GroupDescriptor::Integers),
        "Z2" => return Ok(GroupDescriptor::z2()),
        "StrictCone2" | "SC2" => return Ok(GroupDescriptor::StrictCone2),
        _ => {}
    }
    if let Some(k) = t.strip_prefix("Z^") {
        let k: usize = k.parse().map_err(|_| Error::config("group", format!("bad exponent in `{t}`")))?;
        return Ok(GroupDescriptor::Product { factors: vec![GroupDescriptor::Integers; k] });
    }
    let inner = |prefix: &str| t.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
    if let Some(body) = inner("Product(") {
        let factors = split_top(body).iter().map(|f| parse_group(f)).collect::<Result<Vec<_>>>()?;
        return Ok(GroupDescriptor::Product { factors });
    }
    if let Some(body) = inner("TwistedLex(") {
        let parts = split_top(body);
        if parts.len() != 4 {
            return Err(Error::config("group", format!("`{t}` needs TwistedLex(n,lambda,rho,base)")));
        }
        let n: usize = parts[0].parse().map_err(|_| Error::config("group", format!("bad n in `{t}`")))?;
        let lambda = parse_perm(&parts[1], Some(n))?;
        let rho = parse_perm(&parts[2], Some(n))?;
        let base = parse_group(&parts[3])?;
        return Ok(GroupDescriptor::twisted_lex(lambda, rho, base));
    }
    Err(Error::config("group", format!("unknown group `{t}`")))
}

/// Parses `n=2;lambda=id;rho=(0 1)`.
pub fn parse_shape(s: &str, base: GroupDescriptor) -> Result<KiteShape> {
    let mut n = None;
    let mut lambda = None;
    let mut rho = None;
    for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::config("shape", format!("expected key=value, got `{item}`")))?;
        match k.trim() {
            "n" => n = Some(v.trim().parse::<usize>().map_err(|_| Error::config("shape.n", format!("bad size `{v}`")))?),
            "lambda" => lambda = Some(v.to_string()),
            "rho" => rho = Some(v.to_string()),
            other => return Err(Error::config("shape", format!("unknown key `{other}`"))),
        }
    }
    shape_from_parts(n, PermSpec::Text(lambda.unwrap_or_default()), PermSpec::Text(rho.unwrap_or_default()), base)
}

fn perm_of(p: &PermSpec, n: Option<usize>) -> Result<Perm> {
    match p {
        PermSpec::Images(v) => Perm::new(v.clone()).map_err(|e| Error::config("shape", e.to_string())),
        PermSpec::Text(t) => parse_perm(t, n),
    }
}

fn shape_from_parts(n: Option<usize>, lambda: PermSpec, rho: PermSpec, base: GroupDescriptor) -> Result<KiteShape> {
    let guess = n.or_else(|| match (&lambda, &rho) {
        (PermSpec::Images(v), _) | (_, PermSpec::Images(v)) => Some(v.len()),
        (PermSpec::Text(a), PermSpec::Text(b)) => [a, b]
            .into_iter()
            .find(|t| !t.trim().is_empty() && t.trim() != "id" && !t.trim().starts_with('('))
            .map(|t| t.split(',').count()),
    });
    let l = perm_of(&lambda, guess)?;
    let r = perm_of(&rho, guess.or(Some(l.len())))?;
    if l.len() != r.len() {
        return Err(Error::config("shape", format!("lambda acts on {} indices, rho on {}", l.len(), r.len())));
    }
    KiteShape::new(l, r, base)
}

fn group_of(spec: &GroupSpec) -> Result<GroupDescriptor> {
    match spec {
        GroupSpec::Name(s) => parse_group(s),
        GroupSpec::Descriptor(d) => Ok(d.clone()),
    }
}

/// Resolved settings shared by every command.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub group: GroupDescriptor,
    pub shape: Option<KiteShape>,
    pub height: u32,
    pub nmax: u32,
    pub depth: u32,
    pub checks: Vec<CheckKind>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: GroupDescriptor::Integers,
            shape: None,
            height: 2,
            nmax: 8,
            depth: 4,
            checks: vec![CheckKind::Axioms],
            out: None,
            format: Format::Text,
            seed: 0,
            budget: Budget::default().max_instances,
        }
    }
}

impl RunConfig {
    pub fn budget(&self) -> Budget {
        Budget { max_instances: self.budget, seed: self.seed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub groups: Vec<GroupDescriptor>,
    pub n: Vec<usize>,
    pub pairs: Pairs,
    pub heights: Vec<u32>,
    pub cell_budget: usize,
    #[serde(flatten)]
    pub run: RunConfig,
}

fn read_config(path: &Option<PathBuf>) -> Result<ConfigFile> {
    let Some(p) = path else { return Ok(ConfigFile::default()) };
    let text = std::fs::read_to_string(p).map_err(|e| Error::config("config", format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::config("config", format!("{} line {} column {}: {e}", p.display(), e.line(), e.column())))
}

fn resolve_common(file: &ConfigFile, c: &CommonArgs, run: &mut RunConfig) -> Result<()> {
    run.height = c.height.or(file.height).unwrap_or(run.height);
    run.nmax = c.nmax.or(file.nmax).unwrap_or(run.nmax);
    run.depth = c.depth.or(file.depth).unwrap_or(run.depth);
    run.seed = c.seed.or(file.seed).unwrap_or(run.seed);
    run.budget = c.budget.or(file.budget).unwrap_or(run.budget);
    run.format = c.format.or(file.format).unwrap_or(run.format);
    run.out = c.out.clone().or_else(|| file.out.clone());
    if let Some(names) = c.checks.as_ref().or(file.checks.as_ref()) {
        run.checks = parse_checks(names)?;
    }
    if run.budget == 0 {
        return Err(Error::config("budget", "must be positive"));
    }
    Ok(())
}

pub fn resolve_check(a: &CheckArgs) -> Result<RunConfig> {
    let file = read_config(&a.common.config)?;
    let mut run = RunConfig::default();
    resolve_common(&file, &a.common, &mut run)?;
    run.group = match (&a.group, &file.group) {
        (Some(s), _) => parse_group(s)?,
        (None, Some(g)) => group_of(g)?,
        (None, None) => GroupDescriptor::Integers,
    };
    PoGroup::from_descriptor(&run.group).map_err(|e| Error::config("group", e.to_string()))?;
    run.shape = match (&a.shape, &file.shape) {
        (Some(s), _) => Some(parse_shape(s, run.group.clone())?),
        (None, Some(ShapeSpec::Text(s))) => Some(parse_shape(s, run.group.clone())?),
        (None, Some(ShapeSpec::Fields { n, lambda, rho })) => {
            Some(shape_from_parts(*n, lambda.clone(), rho.clone(), run.group.clone())?)
        }
        (None, None) => None,
    };
    Ok(run)
}

pub fn resolve_sweep(a: &SweepArgs) -> Result<SweepConfig> {
    let file = read_config(&a.common.config)?;
    let mut run = RunConfig::default();
    resolve_common(&file, &a.common, &mut run)?;
    let sw = file.sweep.clone().unwrap_or_default();
    let groups = if !a.group.is_empty() {
        a.group.iter().map(|g| parse_group(g)).collect::<Result<Vec<_>>>()?
    } else if let Some(gs) = &sw.groups {
        gs.iter().map(group_of).collect::<Result<Vec<_>>>()?
    } else if let Some(g) = &file.group {
        vec![group_of(g)?]
    } else {
        vec![GroupDescriptor::Integers]
    };
    for g in &groups {
        PoGroup::from_descriptor(g).map_err(|e| Error::config("sweep.groups", e.to_string()))?;
    }
    let heights = match (a.common.height, &sw.heights) {
        (Some(h), _) => vec![h],
        (None, Some(hs)) => hs.clone(),
        (None, None) => vec![run.height],
    };
    Ok(SweepConfig {
        groups,
        n: a.n.clone().or(sw.n).unwrap_or_else(|| vec![0, 1, 2]),
        pairs: a.pairs.or(sw.pairs).unwrap_or_default(),
        heights,
        cell_budget: a.cell_budget.or(sw.cell_budget).unwrap_or(5000),
        run,
    })
}

/// One check result inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: String,
    pub config: RunConfig,
    pub subject: Value,
    pub checks: Vec<CheckEntry>,
    pub coverage: Coverage,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Coverage {
    pub checked: u64,
    pub skipped: u64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        exit_for(self.status)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.subject["label"].as_str().unwrap_or("?"), self.subject["group"].as_str().unwrap_or("?"));
        for c in &self.checks {
            s.push_str(&format!("  {:<12} {}\n", c.name, c.verdict.summary()));
        }
        s.push_str(&format!("status: {}\n", self.status));
        s
    }
}

pub fn exit_for(s: Status) -> i32 {
    match s {
        Status::Holds => EXIT_OK,
        Status::Fails => EXIT_FAILS,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn worst(vs: impl IntoIterator<Item = Status>) -> Status {
    vs.into_iter().max().unwrap_or(Status::Holds)
}

/// Runs one check on a kite.
pub fn run_check(kite: &Kite, kind: CheckKind, cfg: &RunConfig) -> (Verdict, Option<Value>) {
    let h = cfg.height;
    if let Some(level) = kind.level() {
        return (check_rdp_level(&PeaCtx(kite), level, h, cfg.budget()), None);
    }
    match kind {
        CheckKind::Axioms => {
            let r = check_pea_axioms(kite, h, cfg.budget());
            (r.overall(), Some(json!({"axioms": r.to_json(), "class0_skipped": r.class0_skipped})))
        }
        CheckKind::Pmv => match KiteMv::new(kite) {
            Ok(m) => {
                let r = check_pmv_axioms(&m, h, cfg.budget());
                (r.overall(), Some(json!({"axioms": r.to_json()})))
            }
            Err(e) => (Verdict::unknown(0, 0, e.to_string()), None),
        },
        CheckKind::Symmetric => (check_symmetric(kite, h), None),
        CheckKind::Commutative => (check_commutative(kite, h), None),
        CheckKind::State => match perfect_split(kite, h, cfg.nmax) {
            None => (Verdict::fails(0, vec![]).with_reason("no perfect split"), None),
            Some(split) => match unique_state(kite, &split, h) {
                Ok((table, v)) => {
                    let states: Vec<Value> = table.entries.iter().map(|(x, s)| json!([kite.to_json(x), s])).collect();
                    (split.verdict.clone().merge(v), Some(json!({"lower": split.e0.len(), "upper": split.e1.len(), "state": states})))
                }
                Err(e) => (Verdict::unknown(0, 0, e.to_string()), None),
            },
        },
        CheckKind::Ideals => {
            let r = least_normal_ideal(kite, h);
            (r.verdict.clone(), Some(r.to_json(kite)))
        }
        CheckKind::Dneg => (check_double_negation_shift(kite, h), None),
        CheckKind::Iso => match twisted_representation(kite, h) {
            Ok(r) => {
                let detail = json!({
                    "target": r.target.name(),
                    "map": r.map.as_ref().map(|m| m.to_json()),
                });
                (r.verdict, Some(detail))
            }
            Err(e) => (Verdict::unknown(0, 0, e.to_string()), None),
        },
        _ => unreachable!("riesz levels handled above"),
    }
}

pub fn subject_json(kite: &Kite) -> Value {
    json!({
        "group": kite.base().name(),
        "n": kite.n(),
        "lambda": kite.lambda(),
        "rho": kite.rho(),
        "label": kite.shape().label(),
    })
}

/// Builds the kite and runs every configured check.
pub fn cmd_check(cfg: &RunConfig) -> Result<Report> {
    let shape = cfg.shape.clone().ok_or_else(|| Error::config("shape", "a kite shape is required"))?;
    let kite = Kite::new(shape)?;
    let mut checks = Vec::new();
    for &kind in &cfg.checks {
        let t = Instant::now();
        let (verdict, detail) = run_check(&kite, kind, cfg);
        checks.push(CheckEntry { name: kind.name(), verdict, detail, wall_ms: t.elapsed().as_millis() as u64 });
    }
    let coverage = Coverage {
        checked: checks.iter().map(|c| c.verdict.checked).sum(),
        skipped: checks.iter().map(|c| c.verdict.skipped).sum(),
    };
    let status = worst(checks.iter().map(|c| c.verdict.status));
    Ok(Report {
        schema: SCHEMA,
        tool: format!("kitepea {}", env!("CARGO_PKG_VERSION")),
        config: cfg.clone(),
        subject: subject_json(&kite),
        checks,
        coverage,
        status,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub group: String,
    pub n: usize,
    pub lambda: Perm,
    pub rho: Perm,
    pub height: u32,
    pub results: Vec<CheckEntry>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub tool: String,
    pub config: SweepConfig,
    pub cells: Vec<SweepCell>,
    pub summary: SweepSummary,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        exit_for(self.status)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("sweep serializes")
    }

    pub fn to_text(&self) -> String {
        let names: Vec<&str> = self.config.run.checks.iter().map(|c| c.name()).collect();
        let mut s = format!("{:<28} {:>2} {:<14} {:<14} {:>2}  {}\n", "group", "n", "lambda", "rho", "h", names.join(" "));
        for c in &self.cells {
            let marks: Vec<String> =
                c.results.iter().map(|r| format!("{:<w$}", r.verdict.status.to_string(), w = r.name.len())).collect();
            s.push_str(&format!(
                "{:<28} {:>2} {:<14} {:<14} {:>2}  {}\n",
                c.group,
                c.n,
                c.lambda.to_string(),
                c.rho.to_string(),
                c.height,
                marks.join(" ")
            ));
        }
        let m = &self.summary;
        s.push_str(&format!("cells {} holds {} fails {} unknown {}\n", m.cells, m.holds, m.fails, m.unknown));
        s
    }
}

/// All `(λ, ρ)` pairs on `n` indices in `Perm::all` order.
pub fn perm_pairs(n: usize, pairs: Pairs) -> Vec<(Perm, Perm)> {
    let all = Perm::all(n);
    match pairs {
        Pairs::All => all.iter().flat_map(|l| all.iter().map(move |r| (l.clone(), r.clone()))).collect(),
        Pairs::Diagonal => all.iter().map(|p| (p.clone(), p.clone())).collect(),
    }
}

fn grid_size(cfg: &SweepConfig) -> usize {
    let per_n: usize = cfg
        .n
        .iter()
        .map(|&n| {
            let f: usize = (1..=n).product();
            match cfg.pairs {
                Pairs::All => f.saturating_mul(f),
                Pairs::Diagonal => f,
            }
        })
        .fold(0usize, |a, b| a.saturating_add(b));
    per_n.saturating_mul(cfg.groups.len()).saturating_mul(cfg.heights.len())
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let size = grid_size(cfg);
    if size > cfg.cell_budget {
        return Err(Error::config(
            "sweep",
            format!("grid has {size} cells, above the cell budget {}; shrink the grid or raise --cell-budget", cfg.cell_budget),
        ));
    }
    let mut jobs = Vec::new();
    for g in &cfg.groups {
        for &n in &cfg.n {
            for (l, r) in perm_pairs(n, cfg.pairs) {
                for &h in &cfg.heights {
                    jobs.push((g.clone(), l.clone(), r.clone(), h));
                }
            }
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(g, l, r, h)| -> Result<SweepCell> {
            let kite = Kite::new(KiteShape::new(l.clone(), r.clone(), g.clone())?)?;
            let mut run = cfg.run.clone();
            run.height = h;
            let results: Vec<CheckEntry> = run
                .checks
                .iter()
                .map(|&kind| {
                    let t = Instant::now();
                    let (verdict, _) = run_check(&kite, kind, &run);
                    CheckEntry { name: kind.name(), verdict, detail: None, wall_ms: t.elapsed().as_millis() as u64 }
                })
                .collect();
            let status = worst(results.iter().map(|c| c.verdict.status));
            Ok(SweepCell { group: g.name(), n: l.len(), lambda: l, rho: r, height: h, results, status })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SweepSummary { cells: cells.len(), ..Default::default() };
    for c in &cells {
        match c.status {
            Status::Holds => summary.holds += 1,
            Status::Fails => summary.fails += 1,
            Status::Unknown => summary.unknown += 1,
        }
    }
    let status = worst(cells.iter().map(|c| c.status));
    Ok(SweepReport {
        schema: SWEEP_SCHEMA,
        tool: format!("kitepea {}", env!("CARGO_PKG_VERSION")),
        config: cfg.clone(),
        cells,
        summary,
        status,
    })
}

/// Tables for a small window.
#[derive(Clone, Debug, Serialize)]
pub struct ShowTables {
    pub subject: Value,
    pub height: u32,
    pub carrier: Vec<String>,
    /// `add[i][j]` is the carrier index of `x_i + x_j`; `-1` when the sum
    /// leaves the window.
    pub add: Vec<Vec<Option<i64>>>,
    pub negations: Vec<(String, String, String)>,
    pub orbits: Value,
}

impl ShowTables {
    pub fn to_text(&self) -> String {
        let mut s = format!("{} over {}, height {}\n\ncarrier:\n", self.subject["label"].as_str().unwrap_or("?"), self.subject["group"].as_str().unwrap_or("?"), self.height);
        for (i, x) in self.carrier.iter().enumerate() {
            s.push_str(&format!("  {i:>3}  {x}\n"));
        }
        s.push_str("\naddition (row + column, . undefined, ~ outside window):\n     ");
        for j in 0..self.carrier.len() {
            s.push_str(&format!("{j:>4}"));
        }
        s.push('\n');
        for (i, row) in self.add.iter().enumerate() {
            s.push_str(&format!("  {i:>3}"));
            for c in row {
                let cell = match c {
                    None => ".".to_string(),
                    Some(-1) => "~".to_string(),
                    Some(k) => k.to_string(),
                };
                s.push_str(&format!("{cell:>4}"));
            }
            s.push('\n');
        }
        s.push_str("\nnegations:\n");
        for (x, m, t) in &self.negations {
            s.push_str(&format!("  {x}  minus {m}  tilde {t}\n"));
        }
        s.push_str(&format!(
            "\norbits: sigma {} cycles {} connected {}\n",
            self.orbits["sigma"], self.orbits["cycles"], self.orbits["connected"]
        ));
        s
    }
}

pub fn cmd_show(cfg: &RunConfig) -> Result<ShowTables> {
    let shape = cfg.shape.clone().ok_or_else(|| Error::config("shape", "a kite shape is required"))?;
    let kite = Kite::new(shape)?;
    let win = kite.kite_window(cfg.height);
    if win.len() > SHOW_LIMIT {
        return Err(Error::config(
            "height",
            format!("window has {} elements, above {SHOW_LIMIT}; lower --height", win.len()),
        ));
    }
    let add = win
        .iter()
        .map(|x| {
            win.iter()
                .map(|y| kite.add(x, y).map(|s| win.iter().position(|w| *w == s).map(|k| k as i64).unwrap_or(-1)))
                .collect()
        })
        .collect();
    let negations = win.iter().map(|x| (kite.show(x), kite.show(&kite.minus(x)), kite.show(&kite.tilde(x)))).collect();
    Ok(ShowTables {
        subject: subject_json(&kite),
        height: cfg.height,
        carrier: win.iter().map(|x| kite.show(x)).collect(),
        add,
        negations,
        orbits: orbits(kite.shape()).to_json(),
    })
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::config("out", format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Error::usage(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Check(a) => {
            let cfg = resolve_check(a)?;
            let r = cmd_check(&cfg)?;
            let text = match cfg.format {
                Format::Json => pretty(&r.to_json()),
                Format::Text => r.to_text(),
            };
            emit(text, &cfg.out)?;
            Ok(r.exit_code())
        }
        Command::Sweep(a) => {
            let cfg = resolve_sweep(a)?;
            let r = cmd_sweep(&cfg)?;
            let text = match cfg.run.format {
                Format::Json => pretty(&r.to_json()),
                Format::Text => r.to_text(),
            };
            emit(text, &cfg.run.out)?;
            Ok(r.exit_code())
        }
        Command::Show(a) => {
            let cfg = resolve_check(a)?;
            let t = cmd_show(&cfg)?;
            let text = match cfg.format {
                Format::Json => pretty(&serde_json::to_value(&t).expect("json")),
                Format::Text => t.to_text(),
            };
            emit(text, &cfg.out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kitepea: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perms_and_groups_parse() {
        assert_eq!(parse_perm("1,0", None).unwrap(), Perm::new(vec![1, 0]).unwrap());
        assert_eq!(parse_perm("(0 1)(2 3)", Some(4)).unwrap(), Perm::new(vec![1, 0, 3, 2]).unwrap());
        assert!(parse_perm("0,0", None).is_err());
        assert!(parse_perm("id", None).is_err());
        for d in [
            GroupDescriptor::Integers,
            GroupDescriptor::z2(),
            GroupDescriptor::StrictCone2,
            GroupDescriptor::twisted_lex(Perm::identity(2), Perm::new(vec![1, 0]).unwrap(), GroupDescriptor::Integers),
        ] {
            assert_eq!(parse_group(&d.name()).unwrap(), d);
        }
        assert!(parse_group("Q").is_err());
    }

    #[test]
    fn shapes_parse() {
        let s = parse_shape("n=4;lambda=id;rho=(0 1)(2 3)", GroupDescriptor::Integers).unwrap();
        assert_eq!(s.n, 4);
        let s = parse_shape("lambda=id;rho=1,0", GroupDescriptor::Integers).unwrap();
        assert_eq!(s.n, 2);
        let s = parse_shape("", GroupDescriptor::Integers).unwrap();
        assert_eq!(s.n, 0);
        assert!(parse_shape("lambda=0,0;rho=id", GroupDescriptor::Integers).is_err());
    }

    #[test]
    fn checks_expand() {
        let c = parse_checks(&["riesz".into(), "rdp".into(), "axioms".into()]).unwrap();
        assert_eq!(c.len(), 6);
        assert!(parse_checks(&["nope".into()]).is_err());
    }

    #[test]
    fn grid_budget() {
        let mut cfg = SweepConfig {
            groups: vec![GroupDescriptor::Integers],
            n: vec![3],
            pairs: Pairs::All,
            heights: vec![2],
            cell_budget: 10,
            run: RunConfig::default(),
        };
        assert_eq!(grid_size(&cfg), 36);
        assert!(cmd_sweep(&cfg).is_err());
        cfg.n.clear();
        let r = cmd_sweep(&cfg).unwrap();
        assert_eq!(r.summary.cells, 0);
        assert_eq!(r.exit_code(), EXIT_OK);
    }
}
