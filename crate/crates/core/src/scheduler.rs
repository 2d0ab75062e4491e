//! Fixed-point reduction loop over cost tiers.
//!
//! Every local rule has a per-tier queue of dirty vertices. The loop always
//! works on the cheapest tier with pending work, so expensive rules only see
//! graphs that cheaper rules cannot reduce. Once all queues drain, a full
//! sweep re-checks every vertex; the loop ends when a sweep finds nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{LiftError, ReduceError};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::reductions::{self as red, Budgets, RuleOutcome, RuleResult, Session};
use crate::trace::{ReductionTrace, Rule, Solution};

type LocalFn = fn(&mut Session, VertexId, &Budgets) -> RuleResult;
type GlobalFn = fn(&mut Session, &Budgets) -> RuleResult;

#[derive(Clone, Copy)]
enum Action {
    Local(LocalFn),
    Global(GlobalFn),
}

/// One callable rule implementation and the rule tags it can emit.
#[derive(Clone, Copy)]
struct Step {
    rules: &'static [Rule],
    action: Action,
}

fn one_vertex_cuts(s: &mut Session, b: &Budgets) -> RuleResult {
    for v in red::articulation_points(&s.graph) {
        let out = red::try_one_vertex_cut(s, v, b)?;
        if out.applied() {
            return Ok(out);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

fn two_vertex_cuts(s: &mut Session, b: &Budgets) -> RuleResult {
    for (u, v) in red::two_vertex_cuts(&s.graph, b) {
        let out = red::try_two_vertex_cut(s, u, v, b)?;
        if out.applied() {
            return Ok(out);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

const STEPS: &[Step] = &[
    Step { rules: &[Rule::DegreeOne], action: Action::Local(|s, v, _| red::try_degree_one(s, v)) },
    Step { rules: &[Rule::Triangle, Rule::VShape], action: Action::Local(|s, v, _| red::try_degree_two(s, v)) },
    Step {
        rules: &[Rule::Path3, Rule::Path4, Rule::Cycle4, Rule::Cycle5, Rule::Cycle6],
        action: Action::Local(|s, v, _| red::try_path_cycle(s, v)),
    },
    Step {
        rules: &[Rule::NeighborhoodRemoval],
        action: Action::Local(|s, v, _| red::try_neighborhood_removal(s, v)),
    },
    Step { rules: &[Rule::Domination], action: Action::Local(|s, v, _| red::try_domination(s, v)) },
    Step { rules: &[Rule::BasicSingleEdge], action: Action::Local(|s, v, _| red::try_basic_single_edge(s, v)) },
    Step {
        rules: &[Rule::ExtendedSingleEdge],
        action: Action::Local(|s, v, _| red::try_extended_single_edge(s, v)),
    },
    Step {
        rules: &[Rule::SimplicialVertex, Rule::SimplicialWeightTransfer],
        action: Action::Local(|s, v, _| red::try_simplicial(s, v)),
    },
    Step { rules: &[Rule::Twin], action: Action::Local(|s, v, _| red::try_twin(s, v)) },
    Step {
        rules: &[Rule::CliqueNeighborhoodRemoval],
        action: Action::Local(|s, v, _| red::try_clique_neighborhood_removal(s, v)),
    },
    Step { rules: &[Rule::Unconfined], action: Action::Local(red::try_unconfined) },
    Step { rules: &[Rule::Uncovered], action: Action::Local(red::try_uncovered) },
    Step { rules: &[Rule::SimultaneousConfined], action: Action::Local(red::try_simultaneous_confined) },
    Step { rules: &[Rule::SimultaneousCover], action: Action::Local(red::try_simultaneous_cover) },
    Step { rules: &[Rule::HeavyVertex], action: Action::Local(red::try_heavy_vertex) },
    Step {
        rules: &[Rule::NeighborhoodFolding],
        action: Action::Local(|s, v, _| red::try_neighborhood_folding(s, v)),
    },
    Step { rules: &[Rule::GeneralizedFold], action: Action::Local(red::try_generalized_fold) },
    Step { rules: &[Rule::HeavySet], action: Action::Local(red::try_heavy_set) },
    Step {
        rules: &[Rule::TwoVertexNeighborhoodRemoval],
        action: Action::Local(|s, v, _| red::try_two_vertex_neighborhood_removal(s, v)),
    },
    Step {
        rules: &[Rule::StructionExtendedReduced],
        action: Action::Local(|s, v, b| red::try_struction_extended_reduced(s, v, &b.struction)),
    },
    Step {
        rules: &[Rule::StructionExtended],
        action: Action::Local(|s, v, b| red::try_struction_extended(s, v, &b.struction)),
    },
    Step {
        rules: &[Rule::StructionModified],
        action: Action::Local(|s, v, b| red::try_struction_modified(s, v, &b.struction)),
    },
    Step {
        rules: &[Rule::StructionOriginal],
        action: Action::Local(|s, v, b| red::try_struction_original(s, v, &b.struction)),
    },
    Step { rules: &[Rule::Cwis], action: Action::Global(|s, _| red::try_cwis(s)) },
    Step { rules: &[Rule::OneVertexCut], action: Action::Global(one_vertex_cuts) },
    Step { rules: &[Rule::TwoVertexCut], action: Action::Global(two_vertex_cuts) },
];

fn step_of(rule: Rule) -> Option<usize> {
    STEPS.iter().position(|s| s.rules.contains(&rule))
}

fn is_struction(rule: Rule) -> bool {
    matches!(
        rule,
        Rule::StructionOriginal | Rule::StructionModified | Rule::StructionExtended | Rule::StructionExtendedReduced
    )
}

/// Whether `rule` works on the whole graph rather than around one vertex.
pub fn is_global(rule: Rule) -> bool {
    step_of(rule).is_some_and(|i| matches!(STEPS[i].action, Action::Global(_)))
}

/// Runs the implementation behind `rule` once: around `v` for local rules,
/// on the whole graph for global ones (`v` is ignored). Zero-weight exclusion
/// has no candidate vertex and excludes every zero-weight vertex.
///
/// Implementations shared by several tags may emit a sibling tag.
pub fn try_rule(s: &mut Session, rule: Rule, v: VertexId, budgets: &Budgets) -> RuleResult {
    if rule == Rule::ExcludeZeroWeight {
        let before = s.trace.len();
        s.exclude_zero_weights()?;
        return Ok(s.trace.events().get(before).cloned().map_or(RuleOutcome::NotApplicable, RuleOutcome::Applied));
    }
    let step = step_of(rule).ok_or_else(|| ReduceError::Config(format!("no implementation for `{rule}`")))?;
    match STEPS[step].action {
        Action::Local(f) => f(s, v, budgets),
        Action::Global(f) => f(s, budgets),
    }
}

/// Default cost tiers, cheapest first.
pub fn default_tiers() -> Vec<Vec<Rule>> {
    use Rule::*;
    vec![
        vec![DegreeOne, Triangle, VShape, Path3, Path4, Cycle4, Cycle5, Cycle6, ExcludeZeroWeight],
        vec![
            NeighborhoodRemoval,
            Domination,
            BasicSingleEdge,
            ExtendedSingleEdge,
            SimplicialVertex,
            SimplicialWeightTransfer,
            Twin,
        ],
        vec![CliqueNeighborhoodRemoval, Unconfined, Uncovered, SimultaneousConfined, SimultaneousCover],
        vec![
            HeavyVertex,
            NeighborhoodFolding,
            GeneralizedFold,
            HeavySet,
            TwoVertexNeighborhoodRemoval,
            StructionExtendedReduced,
            StructionExtended,
            StructionModified,
            StructionOriginal,
        ],
        vec![Cwis, OneVertexCut, TwoVertexCut],
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReducerConfig {
    /// Rules allowed to run. A rule implementation that can emit several tags
    /// runs when any of them is enabled.
    pub enabled: BTreeSet<Rule>,
    pub budgets: Budgets,
    /// Tier override, cheapest first; `None` uses [`default_tiers`].
    pub tiers: Option<Vec<Vec<Rule>>>,
    /// Stop early and return a kernel flagged as not at a fixed point.
    pub time_limit_ms: Option<u64>,
    /// Seed for instance generation; reduction itself is deterministic.
    pub seed: u64,
    /// Measure per-rule and wall time. Off by default so stats are reproducible.
    pub record_timing: bool,
}

impl Default for ReducerConfig {
    fn default() -> Self {
        let mut enabled: BTreeSet<Rule> = default_tiers()[..3].iter().flatten().copied().collect();
        for r in [Rule::Path3, Rule::Path4, Rule::Cycle4, Rule::Cycle5, Rule::Cycle6] {
            enabled.remove(&r);
        }
        enabled.extend([Rule::NeighborhoodFolding, Rule::Cwis]);
        ReducerConfig {
            enabled,
            budgets: Budgets::default(),
            tiers: None,
            time_limit_ms: None,
            seed: 0,
            record_timing: false,
        }
    }
}

impl ReducerConfig {
    /// Every rule enabled.
    pub fn all() -> Self {
        ReducerConfig { enabled: Rule::ALL.into_iter().collect(), ..Self::default() }
    }

    /// Exactly the given rules enabled.
    pub fn only(rules: impl IntoIterator<Item = Rule>) -> Self {
        ReducerConfig { enabled: rules.into_iter().collect(), ..Self::default() }
    }

    /// Rules of the first `k` default tiers.
    pub fn first_tiers(k: usize) -> Self {
        Self::only(default_tiers().into_iter().take(k).flatten())
    }

    pub fn tiers(&self) -> Vec<Vec<Rule>> {
        self.tiers.clone().unwrap_or_else(default_tiers)
    }

    /// Each enabled step index grouped by tier. Errors if an enabled rule is
    /// missing from the tiers or listed twice.
    fn tier_steps(&self) -> Result<Vec<Vec<usize>>, ReduceError> {
        let tiers = self.tiers();
        let mut seen = BTreeSet::new();
        for &r in tiers.iter().flatten() {
            if !seen.insert(r) {
                return Err(ReduceError::Config(format!("rule `{r}` appears in more than one tier slot")));
            }
        }
        if let Some(r) = self.enabled.iter().find(|r| !seen.contains(r)) {
            return Err(ReduceError::Config(format!("enabled rule `{r}` is not assigned to a tier")));
        }
        let mut placed = BTreeSet::new();
        let mut out = Vec::new();
        for tier in &tiers {
            let mut steps = Vec::new();
            for &r in tier {
                if !self.enabled.contains(&r) {
                    continue;
                }
                if let Some(i) = step_of(r) {
                    if placed.insert(i) {
                        steps.push(i);
                    }
                }
            }
            out.push(steps);
        }
        Ok(out)
    }
}

/// Parses a comma-separated rule list. Besides rule names it accepts `all`,
/// `default`, and `t1`..`t5` for a whole default tier.
pub fn parse_rule_list(list: &str) -> Result<BTreeSet<Rule>, String> {
    let mut out = BTreeSet::new();
    for item in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item {
            "all" => out.extend(Rule::ALL),
            "default" => out.extend(ReducerConfig::default().enabled),
            _ => {
                let tier = item.strip_prefix('t').and_then(|k| k.parse::<usize>().ok());
                match tier {
                    Some(k) if (1..=default_tiers().len()).contains(&k) => {
                        out.extend(default_tiers()[k - 1].iter().copied())
                    }
                    _ => {
                        out.insert(item.parse()?);
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err("empty rule list".into());
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleStats {
    pub fires: u64,
    pub micros: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSize {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub rules: BTreeMap<Rule, RuleStats>,
    pub kernel: KernelSize,
    pub offset: Weight,
    /// 0 unless timing is recorded.
    pub wall_ms: u64,
    pub fixed_point: bool,
}

impl Stats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize") + "\n"
    }
}

#[derive(Debug, Clone)]
pub struct KernelResult {
    pub kernel: WeightedGraph,
    pub trace: ReductionTrace,
    pub offset: Weight,
    pub stats: Stats,
}

impl KernelResult {
    pub fn lift(&self, kernel_solution: &Solution, original: &WeightedGraph) -> Result<Solution, LiftError> {
        self.trace.lift_checked(&self.kernel, kernel_solution, original)
    }
}

struct Loop<'c> {
    config: &'c ReducerConfig,
    tiers: Vec<Vec<usize>>,
    queues: Vec<BTreeSet<VertexId>>,
    global_pending: Vec<bool>,
    session: Session,
    micros: BTreeMap<Rule, u64>,
    /// Consecutive struction events that did not shrink the graph.
    stalls: usize,
    stall_limit: usize,
    struction_paused: bool,
}

impl Loop<'_> {
    fn enqueue_all(&mut self) {
        let all: Vec<VertexId> = self.session.graph.vertices().collect();
        for q in &mut self.queues {
            q.extend(all.iter().copied());
        }
        self.global_pending.iter_mut().for_each(|p| *p = true);
    }

    /// Marks the surroundings of the last change as dirty in every tier.
    fn propagate(&mut self) {
        let taken = self.session.take_dirty();
        let g = &self.session.graph;
        let mut dirty = BTreeSet::new();
        for v in taken {
            if g.is_active(v) {
                dirty.insert(v);
                dirty.extend(g.adjacency(v).iter().copied());
            }
        }
        for q in &mut self.queues {
            q.extend(dirty.iter().copied());
        }
        self.global_pending.iter_mut().for_each(|p| *p = true);
    }

    fn skip(&self, step: usize) -> bool {
        self.struction_paused && STEPS[step].rules.iter().all(|&r| is_struction(r))
    }

    fn run_step(&mut self, step: usize, v: Option<VertexId>) -> Result<bool, ReduceError> {
        if self.skip(step) {
            return Ok(false);
        }
        let before = self.session.graph.num_vertices();
        let start = self.config.record_timing.then(Instant::now);
        let out = match (STEPS[step].action, v) {
            (Action::Local(f), Some(v)) => f(&mut self.session, v, &self.config.budgets)?,
            (Action::Global(f), None) => f(&mut self.session, &self.config.budgets)?,
            _ => unreachable!("step kind matches its queue"),
        };
        let rule = out.event().map_or(STEPS[step].rules[0], |e| e.rule);
        if let Some(start) = start {
            *self.micros.entry(rule).or_default() += start.elapsed().as_micros() as u64;
        }
        if !out.applied() {
            return Ok(false);
        }
        if self.session.graph.num_vertices() < before {
            self.stalls = 0;
            self.struction_paused = false;
        } else if is_struction(rule) {
            self.stalls += 1;
            self.struction_paused = self.stalls >= self.stall_limit;
        }
        self.propagate();
        Ok(true)
    }

    /// Does one unit of work on the cheapest tier that has any. Returns false
    /// when nothing is pending.
    fn work(&mut self) -> Result<bool, ReduceError> {
        for t in 0..self.tiers.len() {
            while let Some(v) = self.queues[t].pop_first() {
                if !self.session.graph.is_active(v) {
                    continue;
                }
                for k in 0..self.tiers[t].len() {
                    let step = self.tiers[t][k];
                    if matches!(STEPS[step].action, Action::Local(_)) && self.run_step(step, Some(v))? {
                        return Ok(true);
                    }
                }
            }
            if self.global_pending[t] {
                self.global_pending[t] = false;
                for k in 0..self.tiers[t].len() {
                    let step = self.tiers[t][k];
                    if matches!(STEPS[step].action, Action::Global(_)) && self.run_step(step, None)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Applies the enabled rules until none fires (or the time limit passes).
pub fn reduce(g: WeightedGraph, config: &ReducerConfig) -> Result<KernelResult, ReduceError> {
    let started = Instant::now();
    let deadline = config.time_limit_ms.map(|ms| started + Duration::from_millis(ms));
    let tiers = config.tier_steps()?;
    let n = tiers.len();
    let stall_limit = g.num_vertices().max(64);
    let mut lp = Loop {
        config,
        tiers,
        queues: vec![BTreeSet::new(); n],
        global_pending: vec![false; n],
        session: Session::new(g),
        micros: BTreeMap::new(),
        stalls: 0,
        stall_limit,
        struction_paused: false,
    };
    // zero-weight vertices violate every rule's preconditions
    if lp.session.exclude_zero_weights()? > 0 {
        lp.session.take_dirty();
    }
    let mut fixed_point = true;
    let mut iterations: u64 = 0;
    'outer: loop {
        lp.enqueue_all();
        let mut changed = false;
        loop {
            iterations += 1;
            if iterations.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
                fixed_point = false;
                break 'outer;
            }
            if !lp.work()? {
                break;
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    if lp.struction_paused {
        fixed_point = false;
    }
    let Loop { session, micros, .. } = lp;
    let (kernel, trace) = session.into_parts();
    let mut rules: BTreeMap<Rule, RuleStats> =
        config.enabled.iter().map(|&r| (r, RuleStats::default())).collect();
    for ev in trace.events() {
        rules.entry(ev.rule).or_default().fires += 1;
    }
    for (r, us) in micros {
        rules.entry(r).or_default().micros += us;
    }
    let stats = Stats {
        rules,
        kernel: KernelSize { n: kernel.num_vertices(), m: kernel.num_edges() },
        offset: trace.offset(),
        wall_ms: if config.record_timing { started.elapsed().as_millis() as u64 } else { 0 },
        fixed_point,
    };
    Ok(KernelResult { offset: trace.offset(), kernel, trace, stats })
}

/// Outcome of checking a kernelization against an exact kernel solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Re-reducing the kernel fires no rule.
    pub fixed_point: bool,
    /// The trace lifts the kernel solution without error.
    pub lifted: bool,
    /// The lifted set is independent in the original graph.
    pub independent: bool,
    /// Lifted weight equals kernel solution weight plus offset.
    pub weight_matches: bool,
    pub expected_weight: Weight,
    pub lifted_weight: Option<Weight>,
    pub errors: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.fixed_point && self.lifted && self.independent && self.weight_matches
    }
}

/// Checks a kernelization: fixed point under `config`, and that the exact
/// kernel solution lifts to an independent set of weight
/// `ω(kernel_solution) + offset` in `original`.
pub fn verify_kernel(
    original: &WeightedGraph,
    kernel: &WeightedGraph,
    trace: &ReductionTrace,
    kernel_solution: &Solution,
    config: &ReducerConfig,
) -> Result<VerifyReport, ReduceError> {
    let mut errors = Vec::new();
    let rerun = reduce(kernel.clone(), config)?;
    let fixed_point = rerun.trace.is_empty();
    if !fixed_point {
        errors.push(format!("kernel is not a fixed point: {} more events", rerun.trace.len()));
    }
    let expected_weight = kernel_solution.weight + trace.offset();
    let mut report = VerifyReport {
        fixed_point,
        lifted: false,
        independent: false,
        weight_matches: false,
        expected_weight,
        lifted_weight: None,
        errors,
    };
    if !kernel_solution.is_valid_for(kernel) {
        report.errors.push("kernel solution is not a valid independent set of the kernel".into());
        return Ok(report);
    }
    let mut set = kernel_solution.vertices.clone();
    trace.lift_range(0, trace.len(), &mut set);
    report.lifted = true;
    if let Some(&v) = set.iter().find(|&&v| !original.is_active(v)) {
        report.lifted = false;
        report.errors.push(format!("lifted set contains unknown vertex {v}"));
        return Ok(report);
    }
    report.independent = original.is_independent(&set);
    if !report.independent {
        report.errors.push("lifted set is not independent in the original graph".into());
    }
    let w = original.weight_of(&set);
    report.lifted_weight = Some(w);
    report.weight_matches = w == expected_weight;
    if !report.weight_matches {
        report.errors.push(format!("lifted weight {w} differs from kernel weight + offset = {expected_weight}"));
    }
    Ok(report)
}
