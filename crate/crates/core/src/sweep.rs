//! Exhaustive checks over all pairs of small posets, with per-pair budgets
//! and an append-only JSON-lines report that a rerun resumes from.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::find_induced_poset_cycles;
use crate::error::{Error, Result};
use crate::ideal::{self, reduced_groebner, toric_ideal, TermOrder};
use crate::limits::{Caps, Limits};
use crate::linalg;
use crate::normality::{is_normal_with, pendant_reduce, ConeLattice, NormalityOptions, SemigroupMembership};
use crate::poset::{enumerate_posets, Poset};
use crate::straighten::Straightener;
use crate::toric::{dimension_formula, ExponentMatrix};

/// Largest poset size the sweep enumerates.
pub const MAX_SWEEP_SIZE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Dimension,
    Normality,
    QuadraticGeneration,
    GbQuadratic,
    StraightenUniqueness,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Dimension,
        Check::Normality,
        Check::QuadraticGeneration,
        Check::GbQuadratic,
        Check::StraightenUniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Dimension => "dimension",
            Check::Normality => "normality",
            Check::QuadraticGeneration => "quadratic-generation",
            Check::GbQuadratic => "gb-quadratic",
            Check::StraightenUniqueness => "straighten-uniqueness",
        }
    }

    /// Whether the check is defined for the pair at all.
    fn applies(self, p: &Poset, q: &Poset) -> bool {
        match self {
            Check::GbQuadratic => p.is_chain() && (q.is_rooted_tree() || q.is_co_rooted_tree()),
            Check::StraightenUniqueness => (q.is_chain() && q.len() == 2) || (p.is_chain() && q.is_co_rooted_tree()),
            _ => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    /// Outcome differs from the expected classification without
    /// contradicting any claim.
    Deviation,
    Counterexample,
    SkippedBudget,
    SkippedCap,
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Deviation => "deviation",
            Verdict::Counterexample => "counterexample",
            Verdict::SkippedBudget => "skipped-budget",
            Verdict::SkippedCap => "skipped-cap",
            Verdict::Error => "error",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Data that lets a counterexample be checked again independently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    RankMismatch {
        rank: usize,
        formula: usize,
    },
    /// Lattice point of the cone outside the semigroup, for the
    /// pendant-reduced source poset.
    HilbertElement {
        element: Vec<i64>,
    },
    /// A minimal generator or Groebner element of degree above two.
    Binomial {
        degree: u32,
        plus: Vec<u32>,
        minus: Vec<u32>,
        text: String,
    },
    /// A fiber whose number of standard expressions is not one.
    Fiber {
        degree: usize,
        product: Vec<i64>,
        standard: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check: Check,
    pub p: String,
    pub q: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Finding {
    pub fn porcelain(&self) -> String {
        format!(
            "check={} P={} Q={} verdict={} detail={}",
            self.check,
            self.p,
            self.q,
            self.verdict,
            self.detail.replace(char::is_whitespace, "_")
        )
    }

    fn key(&self) -> (Check, String, String) {
        (self.check, self.p.clone(), self.q.clone())
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_p: usize,
    pub max_q: usize,
    pub checks: Vec<Check>,
    pub budget: Duration,
    pub caps: Caps,
    /// JSON-lines report; existing records are kept and their pairs skipped.
    pub output: Option<PathBuf>,
    /// Seeds the random term orders probed by `gb-quadratic`.
    pub seed: Option<u64>,
    pub probe_orders: usize,
}

impl SweepConfig {
    pub fn new(max_p: usize, max_q: usize, checks: Vec<Check>) -> Self {
        SweepConfig {
            max_p,
            max_q,
            checks,
            budget: Duration::from_secs(60),
            caps: Caps::default(),
            output: None,
            seed: None,
            probe_orders: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, size) in [("max-p", self.max_p), ("max-q", self.max_q)] {
            if size == 0 || size > MAX_SWEEP_SIZE {
                return Err(Error::InvalidInput(format!("{name} must lie in 1..={MAX_SWEEP_SIZE}, got {size}")));
            }
        }
        if self.budget.is_zero() {
            return Err(Error::InvalidInput("budget must be positive".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidInput("no checks selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepSummary {
    pub findings: Vec<Finding>,
    /// Records already present in the report before this run.
    pub resumed: usize,
}

impl SweepSummary {
    pub fn counts(&self) -> BTreeMap<(Check, Verdict), usize> {
        let mut out = BTreeMap::new();
        for f in &self.findings {
            *out.entry((f.check, f.verdict)).or_default() += 1;
        }
        out
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.verdict == Verdict::Counterexample)
    }

    pub fn aborted(&self) -> usize {
        self.findings.iter().filter(|f| matches!(f.verdict, Verdict::SkippedBudget | Verdict::SkippedCap)).count()
    }
}

struct Task {
    check: Check,
    p: Poset,
    q: Poset,
    p_id: String,
    q_id: String,
}

fn posets_up_to(max: usize) -> Result<Vec<(Poset, String)>> {
    let mut out = Vec::new();
    for k in 1..=max {
        for p in enumerate_posets(k)? {
            let id = p.canonical_form()?.to_string();
            out.push((p, id));
        }
    }
    Ok(out)
}

pub fn read_report(path: &std::path::Path) -> Result<Vec<Finding>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::InvalidInput(format!("{}: {e}", path.display()))),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is dropped
        match serde_json::from_str::<Finding>(&line) {
            Ok(f) => out.push(f),
            Err(e) => log::warn!("{}:{}: skipping unreadable record: {e}", path.display(), i + 1),
        }
    }
    Ok(out)
}

/// Runs every selected check on every applicable pair, in the order
/// (check, |P|, P, |Q|, Q). `on_finding` sees each new finding in that order.
pub fn sweep(cfg: &SweepConfig, mut on_finding: impl FnMut(&Finding)) -> Result<SweepSummary> {
    cfg.validate()?;
    let previous = match &cfg.output {
        Some(path) => read_report(path)?,
        None => Vec::new(),
    };
    let done: HashSet<(Check, String, String)> = previous.iter().map(Finding::key).collect();
    let ps = posets_up_to(cfg.max_p)?;
    let qs = posets_up_to(cfg.max_q)?;
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    let mut tasks = Vec::new();
    for &check in &checks {
        for (p, p_id) in &ps {
            for (q, q_id) in &qs {
                if check.applies(p, q) && !done.contains(&(check, p_id.clone(), q_id.clone())) {
                    tasks.push(Task { check, p: p.clone(), q: q.clone(), p_id: p_id.clone(), q_id: q_id.clone() });
                }
            }
        }
    }
    let mut writer = match &cfg.output {
        Some(path) => Some(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut summary = SweepSummary { findings: Vec::new(), resumed: previous.len() };
    let chunk = rayon::current_num_threads().max(1) * 4;
    for batch in tasks.chunks(chunk) {
        let results: Vec<Finding> = batch.par_iter().map(|t| run_task(t, cfg)).collect();
        for f in results {
            if let Some(w) = writer.as_mut() {
                let line = serde_json::to_string(&f).expect("findings serialize");
                writeln!(w, "{line}").and_then(|_| w.flush()).map_err(|e| Error::InvalidInput(e.to_string()))?;
            }
            on_finding(&f);
            summary.findings.push(f);
        }
    }
    Ok(summary)
}

fn run_task(t: &Task, cfg: &SweepConfig) -> Finding {
    let limits = Limits::new(cfg.caps).with_budget(cfg.budget);
    let outcome = match t.check {
        Check::Dimension => check_dimension(&t.p, &t.q, &limits),
        Check::Normality => check_normality(&t.p, &t.q, &limits),
        Check::QuadraticGeneration => check_quadratic_generation(&t.p, &t.q, &limits),
        Check::GbQuadratic => check_gb_quadratic(&t.p, &t.q, cfg, &limits),
        Check::StraightenUniqueness => check_uniqueness(&t.p, &t.q, &limits),
    };
    let (verdict, detail, witness) = match outcome {
        Ok(o) => o,
        Err(Error::BudgetExceeded) => (Verdict::SkippedBudget, "budget".to_string(), None),
        Err(e) if e.is_abort() => (Verdict::SkippedCap, e.to_string(), None),
        Err(e) => (Verdict::Error, e.to_string(), None),
    };
    Finding { check: t.check, p: t.p_id.clone(), q: t.q_id.clone(), verdict, detail, witness }
}

type Outcome = (Verdict, String, Option<Witness>);

/// Downgrades a counterexample whose witness does not survive an independent
/// recheck.
fn confirm_witness(verified: Result<bool>, detail: String, witness: Witness) -> Result<Outcome> {
    if verified? {
        Ok((Verdict::Counterexample, detail, Some(witness)))
    } else {
        Ok((Verdict::Error, format!("witness failed recheck: {detail}"), Some(witness)))
    }
}

fn check_dimension(p: &Poset, q: &Poset, limits: &Limits) -> Result<Outcome> {
    let a = ExponentMatrix::new(p, q, limits)?;
    let rank = a.rank();
    let formula = dimension_formula(p, q);
    let detail = format!("rank={rank} formula={formula}");
    if rank == formula {
        return Ok((Verdict::Confirmed, detail, None));
    }
    let cols: Vec<Vec<i64>> = a.columns().into_iter().map(|c| c.0).collect();
    let recheck = Ok(linalg::rank(&cols) != formula);
    confirm_witness(recheck, detail, Witness::RankMismatch { rank, formula })
}

/// Pendant elements are stripped first; what remains of a forest is an
/// antichain, whose algebra is a Segre product of polynomial rings.
fn check_normality(p: &Poset, q: &Poset, limits: &Limits) -> Result<Outcome> {
    let reduced = pendant_reduce(p);
    if reduced.is_antichain() {
        return Ok((Verdict::Confirmed, format!("via=forest reduced={}", reduced.len()), None));
    }
    let report = is_normal_with(&reduced, q, NormalityOptions { try_certificate: true }, limits)?;
    let detail = format!(
        "via={} reduced={} hb={}",
        report.via,
        reduced.len(),
        report.hilbert_count.map_or("-".to_string(), |c| c.to_string())
    );
    if report.normal {
        return Ok((Verdict::Confirmed, detail, None));
    }
    let element = report.failing_elements[0].0.clone();
    let recheck = (|| {
        let a = ExponentMatrix::new(&reduced, q, limits)?;
        let gens: Vec<Vec<i64>> = a.columns().into_iter().map(|c| c.0).collect();
        let cone = ConeLattice::new(&gens, limits)?;
        if cone.locate(&element).is_none() {
            return Ok(false);
        }
        Ok(SemigroupMembership::new(&cone).decompose(&element, limits)?.is_none())
    })();
    confirm_witness(recheck, detail, Witness::HilbertElement { element })
}

fn binomial_witness(ideal: &ideal::BinomialIdeal, b: &ideal::Binomial) -> Witness {
    Witness::Binomial { degree: b.degree(), plus: b.plus.clone(), minus: b.minus.clone(), text: ideal.format(b) }
}

/// Expected quadratic unless `Q` holds an induced poset cycle on at least six
/// vertices; only a non-quadratic pair without such a cycle contradicts the
/// expectation.
fn check_quadratic_generation(p: &Poset, q: &Poset, limits: &Limits) -> Result<Outcome> {
    let ideal = toric_ideal(p, q, limits)?;
    let degrees = ideal::minimal_generator_degrees(&ideal);
    let max = degrees.last().copied().unwrap_or(0);
    let cycles = find_induced_poset_cycles(q, 6);
    let detail = format!("max_degree={max} generators={} long_cycles={}", degrees.len(), cycles.len());
    match (max > 2, cycles.is_empty()) {
        (false, true) | (true, false) => {
            let witness = ideal.generators.iter().find(|g| g.degree() > 2).map(|g| binomial_witness(&ideal, g));
            Ok((Verdict::Confirmed, detail, witness))
        }
        (false, false) => Ok((Verdict::Deviation, detail, None)),
        (true, true) => {
            let g = ideal.generators.iter().find(|g| g.degree() > 2).expect("max degree above two");
            let witness = binomial_witness(&ideal, g);
            // minimal generator degrees do not depend on the term order
            let recheck = (|| {
                let mut rng = rand::rngs::StdRng::seed_from_u64(0);
                let order = TermOrder::shuffled(ideal.nvars(), &mut rng);
                let gb = reduced_groebner(&ideal, &order, limits)?;
                let mingens = ideal::minimal_generators(&gb, &order, limits)?;
                Ok(g.in_kernel(&ideal.matrix) && mingens.iter().any(|m| m.degree() > 2))
            })();
            confirm_witness(recheck, detail, witness)
        }
    }
}

fn check_gb_quadratic(p: &Poset, q: &Poset, cfg: &SweepConfig, limits: &Limits) -> Result<Outcome> {
    let ideal = toric_ideal(p, q, limits)?;
    let order = TermOrder::natural(ideal.nvars());
    let gb = reduced_groebner(&ideal, &order, limits)?;
    let analysis = ideal::analyze_basis(&gb);
    let mut detail =
        format!("max_degree={} squarefree={} size={}", analysis.max_gb_degree, analysis.initial_squarefree, gb.len());
    if let Some(seed) = cfg.seed {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let probes: Vec<String> = (0..cfg.probe_orders)
            .map(|_| {
                let o = TermOrder::shuffled(ideal.nvars(), &mut rng);
                reduced_groebner(&ideal, &o, limits).map(|g| ideal::analyze_basis(&g).max_gb_degree.to_string())
            })
            .collect::<Result<_>>()?;
        detail.push_str(&format!(" probe_degrees=[{}]", probes.join(",")));
    }
    if analysis.max_gb_degree <= 2 && analysis.initial_squarefree {
        return Ok((Verdict::Confirmed, detail, None));
    }
    let bad = gb.iter().find(|g| g.degree() > 2 || !g.lead_is_squarefree()).expect("some element breaks the claim");
    let witness = binomial_witness(&ideal, bad);
    let recheck = (|| {
        let fresh = toric_ideal(p, q, limits)?;
        Ok(bad.in_kernel(&fresh.matrix) && reduced_groebner(&fresh, &order, limits)?.contains(bad))
    })();
    confirm_witness(recheck, detail, witness)
}

fn check_uniqueness(p: &Poset, q: &Poset, limits: &Limits) -> Result<Outcome> {
    let st = Straightener::new(p, q, limits)?;
    let report = st.fiber_uniqueness(3, limits)?;
    let detail = format!("fibers={} violations={}", report.fibers_checked, report.violations.len());
    let Some(v) = report.violations.first() else {
        return Ok((Verdict::Confirmed, detail, None));
    };
    let recheck = st.standard_expressions_of_fiber(&v.product, v.degree, limits).map(|s| s.len() != 1);
    let witness = Witness::Fiber { degree: v.degree, product: v.product.0.clone(), standard: v.standard.len() };
    confirm_witness(recheck, detail, witness)
}
