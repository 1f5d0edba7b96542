//! The TOML run configuration and its translation into core types.

use std::collections::BTreeMap;
use std::fmt;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use mmsurf::heatkernel::HKParams;
use mmsurf::mmcheck::{LhsMethod, LoopFunctional, WilsonMethod};
use mmsurf::montecarlo::ChainParams;
use mmsurf::surfgraph::{Crossing, LoopWord, SignedEdge, SurfaceGraph};
use mmsurf::unitary::GroupSpec;
use mmsurf::ymmeasure::{ConjugacyConstraint, MeasureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Partition,
    Wilson,
    MmCheck,
    LocalMmCheck,
    Selftest,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: u64,
    /// Use the normalized measure `μ` rather than `μ̃`.
    #[serde(default = "yes")]
    pub normalized: bool,
    pub group: GroupConfig,
    #[serde(default)]
    pub chain: ChainConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphConfig>,
    /// Named loop words.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub loops: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub crossings: Vec<CrossingConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilson: Option<WilsonOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mm_check: Option<MmOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_mm: Option<LocalMmOptions>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub n: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(default = "default_brownian_step")]
    pub brownian_step: f64,
}

fn default_tolerance() -> f64 {
    HKParams::default().tolerance
}

fn default_brownian_step() -> f64 {
    HKParams::default().brownian_step
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainConfig {
    pub steps: usize,
    pub burn_in: usize,
    pub proposal_scale: f64,
    pub chains: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        let p = ChainParams::default();
        Self {
            steps: p.steps,
            burn_in: p.burn_in,
            proposal_scale: p.proposal_scale,
            chains: p.chains,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub faces: Vec<FaceSpec>,
    /// Boundary components as closed words.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub id: String,
    pub word: String,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingConfig {
    pub name: String,
    pub vertex: String,
    /// Four outgoing darts in cyclic order, e.g. `"e1 e2 e3 e4"`.
    pub darts: String,
    /// Faces `F₁..F₄`; inferred from the corners when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub word: String,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZMethodName {
    Mc,
    SphereExact,
    AbelianExact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionOptions {
    pub method: ZMethodName,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WilsonName {
    Mc,
    AbelianExact,
}

impl From<WilsonName> for WilsonMethod {
    fn from(w: WilsonName) -> Self {
        match w {
            WilsonName::Mc => WilsonMethod::Mc,
            WilsonName::AbelianExact => WilsonMethod::AbelianExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LhsName {
    Score,
    Fd,
    AbelianAnalytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilsonOptions {
    pub method: WilsonName,
    /// Loop names to evaluate; all loops when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmOptions {
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub crossing: String,
    pub lhs: LhsName,
    pub rhs: WilsonName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Also compare the score lhs against finite differences.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cross_check_fd: bool,
}

impl MmOptions {
    pub fn lhs_method(&self) -> LhsMethod {
        match self.lhs {
            LhsName::Score => LhsMethod::Score,
            LhsName::Fd => LhsMethod::Fd { step: self.fd_step },
            LhsName::AbelianAnalytic => LhsMethod::AbelianAnalytic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaChoice {
    Identity,
    /// Haar-random draws from the run seed.
    Haar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalMmOptions {
    pub t: [f64; 4],
    pub alpha: AlphaChoice,
    /// Number of `α` draws (ignored for `identity`).
    #[serde(default = "one")]
    pub draws: usize,
    /// Trace factors over `a1..a4` and `al1..al4`, e.g.
    /// `["a1 al4 a4^-1 a2 al2 a3^-1"]`.
    pub functional: Vec<String>,
}

fn one() -> usize {
    1
}

/// A configuration problem, located by its key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug)]
pub enum ConfigError {
    /// Malformed TOML, wrong types or unknown keys.
    Syntax(String),
    /// Well-formed but inconsistent.
    Semantic(Vec<Issue>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax(s) => write!(f, "syntax error: {s}"),
            ConfigError::Semantic(issues) => {
                write!(f, "invalid configuration:")?;
                for i in issues {
                    write!(f, "\n  {i}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn issue(path: impl Into<String>, message: impl fmt::Display) -> Issue {
    Issue {
        path: path.into(),
        message: message.to_string(),
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::new(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().to_string();
        let at = inner
            .span()
            .map(|s| {
                let line = text[..s.start].matches('\n').count() + 1;
                format!(" (line {line})")
            })
            .unwrap_or_default();
        if path == "." || path.is_empty() {
            ConfigError::Syntax(format!("{msg}{at}"))
        } else {
            ConfigError::Syntax(format!("{path}: {msg}{at}"))
        }
    })?;
    cfg.resolve()?;
    Ok(cfg)
}

/// TOML text that parses back to `cfg`.
pub fn render(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("configuration is always representable")
}

/// Core types built from a validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub group: GroupSpec,
    pub hk: HKParams,
    pub chain: ChainParams,
    pub measure: Option<MeasureSpec>,
    pub loops: Vec<(String, LoopWord)>,
    pub crossings: Vec<(String, Crossing)>,
    pub local: Option<LocalModel>,
}

#[derive(Debug, Clone)]
pub struct LocalModel {
    pub t: [f64; 4],
    pub alpha: AlphaChoice,
    pub draws: usize,
    pub functional: LoopFunctional,
}

impl Resolved {
    pub fn loop_named(&self, name: &str) -> Option<&LoopWord> {
        self.loops.iter().find(|(n, _)| n == name).map(|(_, l)| l)
    }

    pub fn crossing_named(&self, name: &str) -> Option<&Crossing> {
        self.crossings.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

impl RunConfig {
    /// Builds every core object, collecting all problems found.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let mut issues = Vec::new();
        let n = self.group.n;
        if n == 0 {
            issues.push(issue("group.n", "must be at least 1"));
        }
        let hk = HKParams {
            tolerance: self.group.tolerance,
            cutoff: self.group.cutoff,
            brownian_step: self.group.brownian_step,
        };
        if let Err(e) = hk.validate() {
            issues.push(issue("group", e));
        }
        let chain = ChainParams {
            steps: self.chain.steps,
            burn_in: self.chain.burn_in,
            proposal_scale: self.chain.proposal_scale,
            seed: self.seed,
            chains: self.chain.chains,
        };
        if let Err(e) = chain.validate() {
            issues.push(issue("chain", e));
        }

        let graph = self.graph.as_ref().and_then(|g| build_graph(g, &mut issues));
        let mut loops = Vec::new();
        let mut crossings = Vec::new();
        let mut measure = None;
        if let Some(g) = &graph {
            for (name, word) in &self.loops {
                match LoopWord::parse(g, word) {
                    Ok(l) => loops.push((name.clone(), l)),
                    Err(e) => issues.push(issue(format!("loops.{name}"), e)),
                }
            }
            for (i, c) in self.crossings.iter().enumerate() {
                match build_crossing(g, c) {
                    Ok(x) => crossings.push((c.name.clone(), x)),
                    Err(e) => issues.push(issue(format!("crossings[{i}] ({})", c.name), e)),
                }
            }
            let mut constraints = Vec::new();
            for (i, c) in self.constraints.iter().enumerate() {
                match ConjugacyConstraint::parse(g, &c.word, c.angles.clone()) {
                    Ok(k) => constraints.push(k),
                    Err(e) => issues.push(issue(format!("constraints[{i}]"), e)),
                }
            }
            if issues.is_empty() {
                match MeasureSpec::new(g.clone(), GroupSpec::new(n), hk, constraints, self.normalized) {
                    Ok(m) => measure = Some(m),
                    Err(e) => issues.push(issue("graph", e)),
                }
            }
        } else if self.graph.is_none() {
            for key in [
                (!self.loops.is_empty(), "loops"),
                (!self.crossings.is_empty(), "crossings"),
                (!self.constraints.is_empty(), "constraints"),
            ] {
                if key.0 {
                    issues.push(issue(key.1, "requires a [graph] section"));
                }
            }
        }

        self.check_options(&mut issues);
        let local = self.local_mm.as_ref().and_then(|o| build_local(o, &mut issues));
        if !issues.is_empty() {
            return Err(ConfigError::Semantic(issues));
        }
        Ok(Resolved {
            group: GroupSpec::new(n),
            hk,
            chain,
            measure,
            loops,
            crossings,
            local,
        })
    }

    fn check_options(&self, issues: &mut Vec<Issue>) {
        let has_loop = |name: &str| self.loops.contains_key(name);
        if let Some(w) = &self.wilson {
            for name in &w.loops {
                if !has_loop(name) {
                    issues.push(issue("wilson.loops", format!("unknown loop `{name}`")));
                }
            }
        }
        if let Some(o) = &self.mm_check {
            if !has_loop(&o.loop_name) {
                issues.push(issue("mm_check.loop", format!("unknown loop `{}`", o.loop_name)));
            }
            if !self.crossings.iter().any(|c| c.name == o.crossing) {
                issues.push(issue("mm_check.crossing", format!("unknown crossing `{}`", o.crossing)));
            }
            if let Some(h) = o.fd_step {
                if !(h > 0.0 && h.is_finite()) {
                    issues.push(issue("mm_check.fd_step", format!("must be positive, got {h}")));
                }
            }
        }
        if self.group.n != 1 {
            let exact = self.wilson.as_ref().is_some_and(|w| w.method == WilsonName::AbelianExact)
                || self.mm_check.as_ref().is_some_and(|o| {
                    o.rhs == WilsonName::AbelianExact || o.lhs == LhsName::AbelianAnalytic
                })
                || self.partition.as_ref().is_some_and(|p| p.method == ZMethodName::AbelianExact);
            if exact {
                issues.push(issue("group.n", "abelian methods require n = 1"));
            }
        }
    }
}

fn build_graph(g: &GraphConfig, issues: &mut Vec<Issue>) -> Option<SurfaceGraph> {
    let before = issues.len();
    for (i, f) in g.faces.iter().enumerate() {
        if !(f.area > 0.0 && f.area.is_finite()) {
            issues.push(issue(
                format!("graph.faces[{i}]"),
                format!("face `{}` must have positive area, got {}", f.id, f.area),
            ));
        }
    }
    let mut b = SurfaceGraph::builder().vertices(g.vertices.iter().map(String::as_str));
    for e in &g.edges {
        b = b.edge(&e.id, &e.from, &e.to);
    }
    for f in &g.faces {
        b = b.face(&f.id, &f.word, f.area);
    }
    for w in &g.boundary {
        b = b.boundary(w);
    }
    match b.build() {
        Ok(graph) => {
            for v in graph.validate().violations {
                if !matches!(v, mmsurf::surfgraph::Violation::NonPositiveArea { .. }) {
                    issues.push(issue("graph", v));
                }
            }
            (issues.len() == before).then_some(graph)
        }
        Err(e) => {
            issues.push(issue("graph", e));
            None
        }
    }
}

fn build_crossing(g: &SurfaceGraph, c: &CrossingConfig) -> Result<Crossing, mmsurf::surfgraph::GraphError> {
    use mmsurf::surfgraph::GraphError;
    match &c.faces {
        Some(f) => {
            let f: [&str; 4] = [0, 1, 2, 3].map(|i| f.get(i).map_or("", String::as_str));
            if f.contains(&"") {
                return Err(GraphError::Crossing("exactly four faces are required".into()));
            }
            Crossing::parse(g, &c.vertex, &c.darts, &f)
        }
        None => {
            let v = g.vertex_index(&c.vertex).ok_or(GraphError::UnknownId {
                kind: "vertex",
                id: c.vertex.clone(),
            })?;
            let d: [SignedEdge; 4] = g
                .parse_word(&c.darts)?
                .try_into()
                .map_err(|_| GraphError::Crossing("exactly four darts are required".into()))?;
            Crossing::with_inferred_faces(g, v, d)
        }
    }
}

/// Letters of the local model: `a1..a4` are edges 0–3, `al1..al4` are the
/// fixed `α₁..α₄` (edges 4–7).
fn local_letter(token: &str) -> Option<SignedEdge> {
    let (name, inverse) = match token.strip_suffix("^-1") {
        Some(n) => (n, true),
        None => (token, false),
    };
    let (base, idx) = if let Some(i) = name.strip_prefix("al") {
        (4, i)
    } else {
        (0, name.strip_prefix('a')?)
    };
    let i: usize = idx.parse().ok()?;
    if !(1..=4).contains(&i) {
        return None;
    }
    let d = SignedEdge::forward(base + i - 1);
    Some(if inverse { d.inv() } else { d })
}

fn build_local(o: &LocalMmOptions, issues: &mut Vec<Issue>) -> Option<LocalModel> {
    let before = issues.len();
    if o.t.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        issues.push(issue("local_mm.t", format!("areas must be positive, got {:?}", o.t)));
    }
    if o.draws == 0 {
        issues.push(issue("local_mm.draws", "must be at least 1"));
    }
    let mut words = Vec::new();
    for (i, text) in o.functional.iter().enumerate() {
        let w: Option<Vec<SignedEdge>> = text.split_whitespace().map(local_letter).collect();
        match w {
            Some(w) if !w.is_empty() => words.push(w),
            _ => issues.push(issue(
                format!("local_mm.functional[{i}]"),
                format!("`{text}` is not a word in a1..a4, al1..al4"),
            )),
        }
    }
    (issues.len() == before).then(|| LocalModel {
        t: o.t,
        alpha: o.alpha,
        draws: o.draws,
        functional: LoopFunctional::from_words(words),
    })
}
