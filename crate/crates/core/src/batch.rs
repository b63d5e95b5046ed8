//! Seeded sweeps over many labellings. Samples run in parallel; results are
//! collected in seed order so reports are reproducible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Triangulation;
use crate::generate::{random_labelling, HemisphereChain};
use crate::geometry::PolytopeDescriptor;
use crate::labels::{enumerate_labellings, LabelKind, LabelSetDescriptor};
use crate::parity::{
    builtin_rule, chain_strictly_symmetric, closed_form_tucker_m, cubical_phi_bound, even_degree_check,
    run_with_chain, sample_forbidden_free, search_forbidden_free, ForbiddenSet, FrameworkOutcome, LevelTrace, MChain,
    ParityError, RuleKind,
};
use crate::reduction::{Reducer, ShellConfig};
use crate::theorems::{crosscheck_with, Checker, HullOracle, TheoremError, TheoremId};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seed of the `i`-th sample of a sweep.
pub fn sample_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_add(i)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSweep {
    pub theorem: TheoremId,
    pub seed: u64,
    pub samples: u64,
    pub witnesses: u64,
    /// Sample seeds whose labelling failed validation.
    pub invalid: Vec<u64>,
    /// Sample seeds with a valid labelling and no witness.
    pub refutations: Vec<u64>,
    /// Sample seeds where a combinatorial predicate disagreed with the hull.
    pub crosscheck_mismatches: Vec<u64>,
}

impl CheckSweep {
    pub fn ok(&self) -> bool {
        self.invalid.is_empty() && self.refutations.is_empty() && self.crosscheck_mismatches.is_empty()
    }
}

/// Draws `samples` valid labellings and looks for a witness in each. The
/// proposition cross-check runs when `crosscheck` is set and the codomain has
/// negation.
pub fn check_sweep(
    id: TheoremId,
    t: &Triangulation,
    seed: u64,
    samples: u64,
    crosscheck: bool,
) -> Result<CheckSweep, TheoremError> {
    let n = t.domain().ok_or(TheoremError::MissingDomain(id))?.dim;
    let codomain = LabelSetDescriptor::new(id.codomain_kind(), n).map_err(TheoremError::Label)?;
    let checker = Checker::new(id, t, codomain)?;
    let oracle = HullOracle::new();
    let crosscheck = crosscheck && codomain.has_negation();
    let outcomes: Vec<(u64, bool, bool, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let lambda = random_labelling(id, t, n, s).expect("checker accepted the instance");
            let valid = checker.validate(&lambda).ok();
            let found = valid && checker.witness(&lambda).is_some();
            let agree = !crosscheck || crosscheck_with(&oracle, t, &lambda).ok();
            (s, valid, found, agree)
        })
        .collect();
    let mut sweep = CheckSweep {
        theorem: id,
        seed,
        samples,
        witnesses: 0,
        invalid: Vec::new(),
        refutations: Vec::new(),
        crosscheck_mismatches: Vec::new(),
    };
    for (s, valid, found, agree) in outcomes {
        if !valid {
            sweep.invalid.push(s);
        } else if found {
            sweep.witnesses += 1;
        } else {
            sweep.refutations.push(s);
        }
        if !agree {
            sweep.crosscheck_mismatches.push(s);
        }
    }
    Ok(sweep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionSweep {
    pub labels: LabelSetDescriptor,
    pub max_size: usize,
    pub cases: u64,
    pub positives: u64,
    pub mismatches: u64,
}

/// Every multiset of `1..=max_size` labels: combinatorial predicate against
/// the hull test.
pub fn proposition_sweep(ls: LabelSetDescriptor, max_size: usize) -> PropositionSweep {
    let poly = match ls.kind {
        LabelKind::CrossExt => PolytopeDescriptor::cross(ls.dim),
        LabelKind::CubeExt => PolytopeDescriptor::cube(ls.dim),
        LabelKind::SimplexExt => PolytopeDescriptor::simplex(ls.dim),
    };
    let oracle = HullOracle::new();
    let mut cases = 0;
    let mut positives = 0;
    let mut mismatches = 0;
    for size in 1..=max_size {
        let results: Vec<(bool, bool)> = enumerate_labellings(ls, size - 1)
            .into_par_iter()
            .map(|l| {
                let comb = match ls.kind {
                    LabelKind::CrossExt => l.has_complementary_pair().unwrap_or(false),
                    LabelKind::CubeExt => l.is_neutral().unwrap_or(false),
                    LabelKind::SimplexExt => l.distinct().len() == ls.cardinality(),
                };
                let geo = if ls.kind == LabelKind::SimplexExt {
                    let pts: Vec<_> = l.points();
                    crate::geometry::hull_meets_interior(&pts, &poly).unwrap_or(false)
                } else {
                    oracle.meets_interior(ls, l.labels())
                };
                (comb, geo)
            })
            .collect();
        for (comb, geo) in results {
            cases += 1;
            positives += comb as u64;
            mismatches += (comb != geo) as u64;
        }
    }
    PropositionSweep {
        labels: ls,
        max_size,
        cases,
        positives,
        mismatches,
    }
}

/// Label-side checks, independent of any triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainChecks {
    pub rule: RuleKind,
    pub labels: LabelSetDescriptor,
    pub n: usize,
    pub level_sizes: Vec<usize>,
    pub strictly_symmetric: bool,
    pub even_degrees: bool,
    /// Only for the Tucker rule on cross labels.
    pub closed_form: Option<bool>,
    /// Only for the cubical rule.
    pub phi_bound: Option<bool>,
}

impl ChainChecks {
    pub fn ok(&self) -> bool {
        self.strictly_symmetric && self.even_degrees && self.closed_form != Some(false) && self.phi_bound != Some(false)
    }
}

/// The forbidden set that goes with a label family.
pub fn default_forbidden(ls: LabelSetDescriptor) -> Result<ForbiddenSet, ParityError> {
    match ls.kind {
        LabelKind::CrossExt => Ok(ForbiddenSet::Complementary),
        LabelKind::CubeExt => Ok(ForbiddenSet::Neutral),
        LabelKind::SimplexExt => Err(ParityError::UnsupportedLabels),
    }
}

pub fn chain_checks(
    ls: LabelSetDescriptor,
    rule: RuleKind,
    n: usize,
) -> Result<(MChain, ForbiddenSet, ChainChecks), ParityError> {
    let f = default_forbidden(ls)?;
    let mchain = MChain::compute(ls, &f, &builtin_rule(rule), n)?;
    let even_degrees = (1..=n).all(|i| even_degree_check(ls, &f, i, &mchain.levels[i - 1].m).ok());
    let closed_form = (rule == RuleKind::TuckerRule && ls.kind == LabelKind::CrossExt).then(|| {
        (1..=n).all(|i| {
            let cf = closed_form_tucker_m(i, ls.dim);
            mchain.levels[i - 1].plus == cf.m_plus_prev
                && mchain.levels[i - 1].minus == cf.m_minus_prev
                && mchain.levels[i].m == cf.m_next
        })
    });
    let phi_bound = (rule == RuleKind::CubicalRule).then(|| cubical_phi_bound(&mchain).ok());
    let checks = ChainChecks {
        rule,
        labels: ls,
        n,
        level_sizes: mchain.levels.iter().map(|l| l.m.len()).collect(),
        strictly_symmetric: chain_strictly_symmetric(&mchain),
        even_degrees,
        closed_form,
        phi_bound,
    };
    Ok((mchain, f, checks))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRun {
    pub seed: Option<u64>,
    pub completed: bool,
    pub counts: Vec<usize>,
    pub all_odd: bool,
    /// Ids of the forbidden simplex when the run aborted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<LevelTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySweep {
    pub chain: ChainChecks,
    pub completed: u64,
    pub aborted: u64,
    /// Completed runs with an even count at some level `1..=n`.
    pub even_runs: Vec<Option<u64>>,
    pub runs: Vec<ParityRun>,
}

impl ParitySweep {
    pub fn ok(&self) -> bool {
        self.chain.ok() && self.even_runs.is_empty()
    }
}

fn summarize(seed: Option<u64>, outcome: FrameworkOutcome, trace_limit: usize) -> ParityRun {
    match outcome {
        FrameworkOutcome::Completed(seq) => ParityRun {
            seed,
            completed: true,
            all_odd: seq.counts[1..].iter().all(|c| c % 2 == 1),
            counts: seq.counts.clone(),
            forbidden: None,
            trace: if trace_limit > 0 { seq.trace(trace_limit) } else { Vec::new() },
        },
        FrameworkOutcome::Aborted { simplex, .. } => ParityRun {
            seed,
            completed: false,
            counts: Vec::new(),
            all_odd: false,
            forbidden: Some(simplex.ids()),
            trace: Vec::new(),
        },
    }
}

/// Runs the framework on `samples` seeded antipodal labellings. Each sample
/// first tries `attempts` draws for a forbidden-free labelling and otherwise
/// keeps the last plain draw (which then aborts on a forbidden simplex).
pub fn parity_sweep(
    chain: &HemisphereChain,
    ls: LabelSetDescriptor,
    rule: RuleKind,
    seed: u64,
    samples: u64,
    attempts: usize,
    trace_limit: usize,
) -> Result<ParitySweep, ParityError> {
    let (mchain, f, checks) = chain_checks(ls, rule, chain.n())?;
    let t = chain.top();
    let runs: Vec<ParityRun> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let lambda = sample_forbidden_free(t, ls, &f, s, attempts)
                .or_else(|| sample_forbidden_free(t, ls, &ForbiddenSet::empty(), s, 1))
                .ok_or(ParityError::UnsupportedLabels)?;
            run_with_chain(chain, &lambda, &f, &mchain).map(|o| summarize(Some(s), o, trace_limit))
        })
        .collect::<Result<_, _>>()?;
    Ok(assemble(checks, runs))
}

/// Runs the framework on a forbidden-free antipodal labelling. When at most
/// `limit` antipodal labellings exist they are enumerated in order (so `None`
/// is conclusive); otherwise `limit` seeded draws are tried.
pub fn parity_search(
    chain: &HemisphereChain,
    ls: LabelSetDescriptor,
    rule: RuleKind,
    seed: u64,
    limit: u64,
    trace_limit: usize,
) -> Result<Option<ParitySweep>, ParityError> {
    let (mchain, f, checks) = chain_checks(ls, rule, chain.n())?;
    let t = chain.top();
    let found = if antipodal_count(t, ls).is_some_and(|c| c <= limit as u128) {
        search_forbidden_free(t, ls, &f, limit as u128)
    } else {
        sample_forbidden_free(t, ls, &f, seed, limit as usize)
    };
    let Some(lambda) = found else {
        return Ok(None);
    };
    let run = summarize(None, run_with_chain(chain, &lambda, &f, &mchain)?, trace_limit);
    Ok(Some(assemble(checks, vec![run])))
}

/// Number of antipodal label functions on `t` with codomain `ls`.
pub fn antipodal_count(t: &Triangulation, ls: LabelSetDescriptor) -> Option<u128> {
    let id = match ls.kind {
        LabelKind::CrossExt => TheoremId::Tucker,
        LabelKind::CubeExt => TheoremId::TuckerCub,
        LabelKind::SimplexExt => return None,
    };
    Checker::for_sampling(id, t, ls).ok()?.valid_count().ok()
}

fn assemble(chain: ChainChecks, runs: Vec<ParityRun>) -> ParitySweep {
    let completed = runs.iter().filter(|r| r.completed).count() as u64;
    ParitySweep {
        chain,
        completed,
        aborted: runs.len() as u64 - completed,
        even_runs: runs.iter().filter(|r| r.completed && !r.all_odd).map(|r| r.seed).collect(),
        runs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionFailure {
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSweep {
    pub config: ShellConfig,
    pub seed: u64,
    pub samples: u64,
    pub inner_witnesses: u64,
    pub failures: Vec<ReductionFailure>,
}

impl ReductionSweep {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn reduction_sweep(
    cfg: ShellConfig,
    t: &Triangulation,
    seed: u64,
    samples: u64,
) -> Result<ReductionSweep, TheoremError> {
    let n = t.domain().ok_or(TheoremError::MissingDomain(cfg.inner_theorem()))?.dim;
    let reducer = Reducer::new(t, cfg);
    let outcomes: Vec<(u64, Result<(), String>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let r = match &reducer {
                Ok(red) => random_labelling(cfg.inner_theorem(), t, n, s)
                    .map_err(|e| e.to_string())
                    .and_then(|lambda| red.reduce(&lambda).map(|_| ()).map_err(|e| e.to_string())),
                Err(e) => Err(e.to_string()),
            };
            (s, r)
        })
        .collect();
    let mut sweep = ReductionSweep {
        config: cfg,
        seed,
        samples,
        inner_witnesses: 0,
        failures: Vec::new(),
    };
    for (s, r) in outcomes {
        match r {
            Ok(()) => sweep.inner_witnesses += 1,
            Err(error) => sweep.failures.push(ReductionFailure { seed: s, error }),
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cross_standard, hemisphere_chain};

    #[test]
    fn check_sweep_is_deterministic() {
        let t = cross_standard(2);
        let a = check_sweep(TheoremId::Tucker, &t, 7, 50, true).unwrap();
        let b = check_sweep(TheoremId::Tucker, &t, 7, 50, true).unwrap();
        assert_eq!(a, b);
        assert!(a.ok());
        assert_eq!(a.witnesses, 50);
    }

    #[test]
    fn small_proposition_sweep() {
        let s = proposition_sweep(LabelSetDescriptor::cross(2), 3);
        assert_eq!(s.cases, 4 + 10 + 20);
        assert_eq!(s.mismatches, 0);
    }

    #[test]
    fn parity_m_equals_n_aborts() {
        let chain = hemisphere_chain(&cross_standard(2)).unwrap();
        let s = parity_sweep(&chain, LabelSetDescriptor::cross(2), RuleKind::TuckerRule, 5, 4, 50, 0).unwrap();
        assert_eq!(s.aborted, 4);
        assert!(s.ok());
    }

    #[test]
    fn parity_m3_completes_with_odd_counts() {
        let chain = hemisphere_chain(&cross_standard(2)).unwrap();
        let s = parity_sweep(&chain, LabelSetDescriptor::cross(3), RuleKind::TuckerRule, 5, 8, 10_000, 2).unwrap();
        assert_eq!(s.chain.closed_form, Some(true));
        assert!(s.completed > 0);
        assert!(s.ok(), "{s:?}");
    }

    #[test]
    fn cubical_search() {
        // four triangles around the origin need four agreeing coordinates
        let coarse = hemisphere_chain(&cross_standard(2)).unwrap();
        let none = parity_search(&coarse, LabelSetDescriptor::cube(3), RuleKind::CubicalRule, 0, 1 << 20, 0).unwrap();
        assert!(none.is_none());
        let s = parity_search(&coarse, LabelSetDescriptor::cube(4), RuleKind::CubicalRule, 0, 1 << 20, 0)
            .unwrap()
            .unwrap();
        assert_eq!(s.completed, 1);
        assert!(s.ok());
    }

    #[test]
    fn reduction_sweep_small() {
        let t = cross_standard(2);
        let s = reduction_sweep(ShellConfig::OctInOct, &t, 3, 10).unwrap();
        assert_eq!(s.inner_witnesses, 10);
    }
}
