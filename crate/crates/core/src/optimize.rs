//! Optimum-basis construction: the n-Carousel property checker and the
//! Carousel construction, the D-geometry path, order-convex geometries, an
//! exhaustive certified optimum on small ground sets, and an auto-dispatcher.

use crate::bases::{has_d_cycles, k_basis, render_cycle, sigma_foe};
use crate::canonical::{canonical_basis, critical_sets};
use crate::error::{Error, Result};
use crate::implication::{BasisReport, Implication, Provenance};
use crate::poset::Poset;
use crate::set::{combinations, subsets_size_lex, ElementSet};
use crate::system::{bases_equivalent, ClosureSystem};

/// Hard cap for the exhaustive optimum search.
pub const BRUTE_CAP: usize = 10;

/// Ground-set budget for the Carousel n-search inside `optimize_auto`.
pub const AUTO_CAROUSEL_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyTag {
    Carousel,
    DGeometry,
    OrderConvex,
    Brute,
    /// K-basis fallback when no optimizing strategy applied; not certified
    /// optimum.
    KFallback,
}

impl StrategyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyTag::Carousel => "carousel",
            StrategyTag::DGeometry => "d-geometry",
            StrategyTag::OrderConvex => "order-convex",
            StrategyTag::Brute => "brute",
            StrategyTag::KFallback => "k-basis-fallback",
        }
    }
}

/// A basis produced by one of the optimization strategies. Equivalence to
/// the input is always checked before an outcome is returned.
#[derive(Debug, Clone)]
pub struct OptimizationOutcome {
    pub basis: BasisReport,
    pub strategy: StrategyTag,
    pub certificate: Vec<String>,
    pub verified_equivalent: bool,
}

/// Result of the n-Carousel check.
#[derive(Debug, Clone)]
pub struct CarouselReport {
    pub n: usize,
    pub holds: bool,
    /// A violating (X, x, y): x, y in closure(X) yet x is in no
    /// closure({y} + X') over proper X' of X with |X'| <= min(n, |X|-1).
    pub witness: Option<(ElementSet, usize, usize)>,
}

/// Checks the n-Carousel property by direct quantification over all subsets
/// with at least two elements.
pub fn carousel_check(sys: &ClosureSystem, n: usize) -> Result<CarouselReport> {
    sys.check_cap()?;
    if n == 0 {
        return Err(Error::Input("the Carousel parameter n must be positive".into()));
    }
    let g = sys.size();
    let all: Vec<usize> = (0..g).collect();
    for x_set in subsets_size_lex(&all, g) {
        if x_set.len() < 2 {
            continue;
        }
        let closure_x = sys.closure(&x_set);
        let members = x_set.members();
        let limit = n.min(x_set.len() - 1);
        for y in closure_x.iter() {
            let mut satisfied = ElementSet::empty(g);
            for k in 0..=limit {
                for sub in combinations(&members, k) {
                    let mut seed = ElementSet::from_indices(g, sub);
                    seed.insert(y);
                    satisfied.union_with(&sys.closure(&seed));
                }
            }
            let first_unsat = closure_x.difference(&satisfied).iter().next();
            if let Some(x) = first_unsat {
                return Ok(CarouselReport {
                    n,
                    holds: false,
                    witness: Some((x_set, x, y)),
                });
            }
        }
    }
    Ok(CarouselReport {
        n,
        holds: true,
        witness: None,
    })
}

/// The Carousel construction: premises are the extreme points of each
/// critical set; non-binary conclusions shrink to a single element (the
/// lexicographically least of closure(C) \ Ex(C) \ C), binary conclusions to
/// the extreme points of closure({x}) \ {x}. The result is verified
/// equivalent to the input; when verification fails, the construction was
/// unsound (the n-Carousel or convex-geometry assumption does not hold) and
/// the canonical basis is left untouched.
pub fn optimize_carousel(sys: &ClosureSystem) -> Result<OptimizationOutcome> {
    let records = critical_sets(sys)?;
    let mut imps = Vec::new();
    for rec in records {
        if rec.is_binary() {
            let x = rec.critical.iter().next().expect("binary critical");
            let target = sys.closure_of_indices([x]).without(x);
            let conclusion = sys.extreme_of(&target);
            if conclusion.is_empty() {
                return Err(carousel_unsound("an extreme-point set came out empty"));
            }
            imps.push(Implication::new(rec.critical.clone(), conclusion));
        } else {
            let premise = sys.extreme_of(&rec.critical);
            let pool = rec
                .essential
                .difference(&premise)
                .difference(&rec.critical);
            let b = match pool.iter().next() {
                Some(b) if !premise.is_empty() => b,
                _ => return Err(carousel_unsound("no eligible conclusion element")),
            };
            imps.push(Implication::new(
                premise,
                ElementSet::singleton(sys.size(), b),
            ));
        }
    }
    if !bases_equivalent(&imps, sys.implications()) {
        return Err(carousel_unsound(
            "the constructed basis is not equivalent to the input",
        ));
    }
    let report = sys.report(imps, Provenance::Carousel);
    Ok(OptimizationOutcome {
        certificate: vec![format!(
            "carousel construction over {} critical sets; equivalence verified",
            records.len()
        )],
        basis: report,
        strategy: StrategyTag::Carousel,
        verified_equivalent: true,
    })
}

fn carousel_unsound(reason: &str) -> Error {
    Error::Domain(format!(
        "carousel optimization failed verification ({reason}); the n-Carousel or \
         convex-geometry precondition does not hold, and the canonical basis is \
         returned untouched by `canonical`"
    ))
}

/// Optimum basis of a D-geometry: Sigma_FOE, verified equivalent.
pub fn optimize_d_geometry(sys: &ClosureSystem) -> Result<OptimizationOutcome> {
    let report = sigma_foe(sys)?;
    if !bases_equivalent(&report.implications, sys.implications()) {
        return Err(Error::Internal(
            "Sigma_FOE failed the equivalence verification".into(),
        ));
    }
    Ok(OptimizationOutcome {
        basis: report,
        strategy: StrategyTag::DGeometry,
        certificate: vec!["no D-cycles; Sigma_FOE is optimum".into()],
        verified_equivalent: true,
    })
}

/// Optimum basis of the geometry of order-convex subsets of a poset: for
/// every x < y with a nonempty open interval, keep one (lexicographically
/// least) representative per connected component of the interval.
pub fn optimize_order_convex(poset: &Poset) -> Result<OptimizationOutcome> {
    let n = poset.len();
    let mut optimized = Vec::new();
    let mut canonical = Vec::new();
    let mut intervals = 0usize;
    let mut components = 0usize;
    for (x, y) in poset.strict_pairs() {
        let interior = poset.open_interval(x, y);
        if interior.is_empty() {
            continue;
        }
        intervals += 1;
        let comps = poset.components_of(&interior);
        components += comps.len();
        let premise = ElementSet::from_indices(n, [x, y]);
        let reps = ElementSet::from_indices(
            n,
            comps.iter().map(|c| c.iter().next().expect("nonempty component")),
        );
        optimized.push(Implication::new(premise.clone(), reps));
        canonical.push(Implication::new(premise, interior));
    }
    if !bases_equivalent(&optimized, &canonical) {
        return Err(Error::Internal(
            "order-convex optimization failed the equivalence verification".into(),
        ));
    }
    Ok(OptimizationOutcome {
        basis: BasisReport::new(poset.table().clone(), optimized, Provenance::OrderConvex),
        strategy: StrategyTag::OrderConvex,
        certificate: vec![format!(
            "order-convex geometry: {intervals} intervals, {components} components"
        )],
        verified_equivalent: true,
    })
}

struct Candidate {
    implication: Implication,
    cost: usize,
    /// Mask over the non-closed sets this implication makes non-closed.
    covers: ElementSet,
}

/// Exhaustive certified optimum for ground sets of at most ten elements.
///
/// One implication per critical set, premises over the minimum-cardinality
/// generators, conclusions over subsets of the essential element by
/// increasing size; iterative deepening on the total size with a
/// deterministic lexicographic sweep, accepting the first equivalent
/// combination. Equivalence is established directly: a sound candidate set
/// is a basis iff every non-closed subset fails one of its implications.
pub fn brute_force_optimum(sys: &ClosureSystem) -> Result<OptimizationOutcome> {
    if sys.size() > BRUTE_CAP {
        return Err(Error::CapExceeded {
            size: sys.size(),
            cap: BRUTE_CAP,
        });
    }
    let records = critical_sets(sys)?;
    let g = sys.size();
    let all: Vec<usize> = (0..g).collect();
    let non_closed: Vec<ElementSet> = subsets_size_lex(&all, g)
        .filter(|z| !sys.is_closed(z))
        .collect();
    let m = non_closed.len();
    let full = ElementSet::full(m);

    if records.is_empty() {
        if m != 0 {
            return Err(Error::Internal(
                "non-closed sets exist but no critical set was found".into(),
            ));
        }
        return Ok(OptimizationOutcome {
            basis: sys.report(Vec::new(), Provenance::Brute),
            strategy: StrategyTag::Brute,
            certificate: vec!["exhaustive search: the empty basis is optimum".into()],
            verified_equivalent: true,
        });
    }

    let mut groups: Vec<Vec<Candidate>> = Vec::new();
    for rec in records {
        let mut cands = Vec::new();
        for premise in &rec.minimal_generators {
            let pool = rec.essential.difference(premise);
            for conclusion in subsets_size_lex(&pool.members(), g).skip(1) {
                let covers = ElementSet::from_indices(
                    m,
                    non_closed.iter().enumerate().filter_map(|(i, w)| {
                        (premise.is_subset(w) && !conclusion.is_subset(w)).then_some(i)
                    }),
                );
                cands.push(Candidate {
                    cost: premise.len() + conclusion.len(),
                    implication: Implication::new(premise.clone(), conclusion),
                    covers,
                });
            }
        }
        cands.sort_by(|a, b| {
            a.cost
                .cmp(&b.cost)
                .then_with(|| a.implication.cmp_canonical(&b.implication))
        });
        groups.push(cands);
    }

    let k = groups.len();
    let min_cost: Vec<usize> = groups.iter().map(|grp| grp[0].cost).collect();
    let max_cost: Vec<usize> = groups
        .iter()
        .map(|grp| grp.iter().map(|c| c.cost).max().expect("nonempty group"))
        .collect();
    let mut suffix_min = vec![0usize; k + 1];
    let mut suffix_max = vec![0usize; k + 1];
    let mut suffix_cover = vec![ElementSet::empty(m); k + 1];
    for i in (0..k).rev() {
        suffix_min[i] = suffix_min[i + 1] + min_cost[i];
        suffix_max[i] = suffix_max[i + 1] + max_cost[i];
        suffix_cover[i] = suffix_cover[i + 1].clone();
        for cand in &groups[i] {
            suffix_cover[i].union_with(&cand.covers);
        }
    }
    if !full.is_subset(&suffix_cover[0]) {
        return Err(Error::Internal(
            "the generator-constrained search space covers no equivalent basis".into(),
        ));
    }

    struct Search<'a> {
        groups: &'a [Vec<Candidate>],
        suffix_min: &'a [usize],
        suffix_max: &'a [usize],
        suffix_cover: &'a [ElementSet],
        full: &'a ElementSet,
    }

    impl<'a> Search<'a> {
        fn dfs(
            &self,
            depth: usize,
            budget: usize,
            covered: &ElementSet,
            chosen: &mut Vec<&'a Implication>,
        ) -> bool {
            if depth == self.groups.len() {
                return budget == 0 && covered == self.full;
            }
            for cand in &self.groups[depth] {
                if cand.cost + self.suffix_min[depth + 1] > budget {
                    break; // candidates are cost-sorted
                }
                if budget - cand.cost > self.suffix_max[depth + 1] {
                    continue;
                }
                let now = covered.union(&cand.covers);
                if !self.full.is_subset(&now.union(&self.suffix_cover[depth + 1])) {
                    continue;
                }
                chosen.push(&cand.implication);
                if self.dfs(depth + 1, budget - cand.cost, &now, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
    }

    let search = Search {
        groups: &groups,
        suffix_min: &suffix_min,
        suffix_max: &suffix_max,
        suffix_cover: &suffix_cover,
        full: &full,
    };
    for target in suffix_min[0]..=suffix_max[0] {
        let mut chosen = Vec::new();
        if search.dfs(0, target, &ElementSet::empty(m), &mut chosen) {
            let imps: Vec<Implication> = chosen.into_iter().cloned().collect();
            debug_assert!(bases_equivalent(&imps, sys.implications()));
            let report = sys.report(imps, Provenance::Brute);
            return Ok(OptimizationOutcome {
                certificate: vec![format!(
                    "exhaustive search over critical-set generators; optimum size {target}"
                )],
                basis: report,
                strategy: StrategyTag::Brute,
                verified_equivalent: true,
            });
        }
    }
    Err(Error::Internal(
        "exhaustive search exhausted its space without an equivalent basis".into(),
    ))
}

/// Strategy cascade: D-geometry when there are no D-cycles, then the
/// Carousel construction when some n-Carousel property verifies, then the
/// exhaustive search when the ground set is small enough, and finally the
/// K-basis with a non-optimum warning.
pub fn optimize_auto(sys: &ClosureSystem) -> Result<OptimizationOutcome> {
    if !sys.is_standard() {
        return Err(Error::Domain(
            "auto optimization requires a standard system".into(),
        ));
    }
    let mut notes = Vec::new();

    match has_d_cycles(sys)? {
        report if !report.has_cycles => match optimize_d_geometry(sys) {
            Ok(mut outcome) => {
                notes.append(&mut outcome.certificate);
                outcome.certificate = notes;
                return Ok(outcome);
            }
            Err(Error::Domain(reason)) => notes.push(format!("d-geometry: skipped ({reason})")),
            Err(other) => return Err(other),
        },
        report => notes.push(format!(
            "d-geometry: skipped ({})",
            render_cycle(sys.table(), &report.witness.expect("cycle witness"))
        )),
    }

    if sys.size() <= AUTO_CAROUSEL_CAP {
        let upper = sys.size().saturating_sub(1);
        let mut verified_n = None;
        for n in 2..=upper.max(1) {
            if carousel_check(sys, n)?.holds {
                verified_n = Some(n);
                break;
            }
        }
        match verified_n {
            Some(n) => match optimize_carousel(sys) {
                Ok(mut outcome) => {
                    notes.push(format!("carousel: verified n={n}"));
                    notes.append(&mut outcome.certificate);
                    outcome.certificate = notes;
                    return Ok(outcome);
                }
                Err(Error::Domain(reason)) => notes.push(format!("carousel: skipped ({reason})")),
                Err(other) => return Err(other),
            },
            None => notes.push("carousel: no n in 2..|G|-1 verifies".into()),
        }
    } else {
        notes.push(format!(
            "carousel: check skipped, ground set over the n-search budget {AUTO_CAROUSEL_CAP}"
        ));
    }

    if sys.size() <= BRUTE_CAP {
        let mut outcome = brute_force_optimum(sys)?;
        notes.append(&mut outcome.certificate);
        outcome.certificate = notes;
        return Ok(outcome);
    }

    let report = k_basis(sys)?;
    notes.push("warning: K-basis fallback, not certified optimum".into());
    Ok(OptimizationOutcome {
        basis: report,
        strategy: StrategyTag::KFallback,
        certificate: notes,
        verified_equivalent: true,
    })
}

/// The canonical basis as a non-optimizing reference outcome; used by the
/// CLI when a strategy fails and the caller asked for the fallback.
pub fn canonical_outcome(sys: &ClosureSystem) -> Result<BasisReport> {
    canonical_basis(sys)
}
