//! Saturation, quasi-closed and critical sets, the canonical
//! (Duquenne-Guigues) basis, and the fixed optimum-basis parameters.

use crate::error::Result;
use crate::implication::{BasisReport, Implication, Provenance};
use crate::set::{subsets_size_lex, ElementSet};
use crate::system::ClosureSystem;

/// One critical set with its closure, minimum generator size and all
/// minimum-cardinality generators.
#[derive(Debug, Clone)]
pub struct CriticalRecord {
    pub critical: ElementSet,
    /// closure(critical); the essential element this critical set generates.
    pub essential: ElementSet,
    /// Minimum |U| over U subset of critical with closure(U) = essential.
    pub k: usize,
    /// All minimum-cardinality generators, lexicographically ordered.
    pub minimal_generators: Vec<ElementSet>,
}

impl CriticalRecord {
    pub fn is_binary(&self) -> bool {
        self.critical.len() == 1
    }

    /// The canonical conclusion closure(C) \ C.
    pub fn conclusion(&self) -> ElementSet {
        self.essential.difference(&self.critical)
    }
}

/// All quasi-closed sets: non-closed Q whose intersection with every closed
/// set not containing Q is closed. Enumerated by (size, lex).
pub fn quasi_closed_sets(sys: &ClosureSystem) -> Result<Vec<ElementSet>> {
    let family = sys.closed_sets()?;
    let n = sys.size();
    let all: Vec<usize> = (0..n).collect();
    Ok(subsets_size_lex(&all, n)
        .filter(|q| !family.contains(q) && is_quasi_closed_against(sys, q))
        .collect())
}

fn is_quasi_closed_against(sys: &ClosureSystem, q: &ElementSet) -> bool {
    let family = sys.closed_sets().expect("family available");
    family
        .sets
        .iter()
        .filter(|x| !q.is_subset(x))
        .all(|x| family.contains(&q.intersection(x)))
}

/// sigma(Y): the least quasi-closed-or-closed superset of Y.
pub fn saturation(sys: &ClosureSystem, y: &ElementSet) -> Result<ElementSet> {
    let family = sys.closed_sets()?;
    let quasi = quasi_closed_sets(sys)?;
    let mut out = ElementSet::full(sys.size());
    for m in family.sets.iter().chain(quasi.iter()) {
        if y.is_subset(m) {
            out = out.intersection(m);
        }
    }
    Ok(out)
}

/// One record per critical set (quasi-closed, containment-minimal among
/// quasi-closed sets with the same closure), by (size, lex).
pub fn critical_sets(sys: &ClosureSystem) -> Result<&[CriticalRecord]> {
    sys.closed_sets()?;
    if let Some(recs) = sys.criticals.get() {
        return Ok(recs);
    }
    let quasi = quasi_closed_sets(sys)?;
    let mut records = Vec::new();
    for q in &quasi {
        let essential = sys.closure(q);
        let minimal = !quasi
            .iter()
            .any(|other| other.is_proper_subset(q) && sys.closure(other) == essential);
        if !minimal {
            continue;
        }
        let members = q.members();
        let mut k = usize::MAX;
        let mut generators = Vec::new();
        for u in subsets_size_lex(&members, sys.size()) {
            if u.len() > k {
                break;
            }
            if sys.closure(&u) == essential {
                k = u.len();
                generators.push(u);
            }
        }
        records.push(CriticalRecord {
            critical: q.clone(),
            essential,
            k,
            minimal_generators: generators,
        });
    }
    Ok(sys.criticals.get_or_init(|| records))
}

/// The canonical basis: C -> closure(C) \ C over all critical sets C.
pub fn canonical_basis(sys: &ClosureSystem) -> Result<BasisReport> {
    let records = critical_sets(sys)?;
    let imps: Vec<Implication> = records
        .iter()
        .map(|r| Implication::new(r.critical.clone(), r.conclusion()))
        .collect();
    Ok(sys.report(imps, Provenance::Canonical))
}

/// Per-critical optimum parameters: the fixed premise size k, and for binary
/// criticals the fixed conclusion size b.
#[derive(Debug, Clone)]
pub struct ParameterRecord {
    pub critical: ElementSet,
    pub k: usize,
    /// min |Y| with closure(Y) = closure({x}) \ {x}, for binary criticals {x}.
    pub b: Option<usize>,
}

pub fn optimum_parameters(sys: &ClosureSystem) -> Result<Vec<ParameterRecord>> {
    let records = critical_sets(sys)?;
    let mut out = Vec::new();
    for rec in records {
        let b = if rec.is_binary() {
            let x = rec.critical.iter().next().expect("binary critical");
            Some(binary_conclusion_size(sys, x))
        } else {
            None
        };
        out.push(ParameterRecord {
            critical: rec.critical.clone(),
            k: rec.k,
            b,
        });
    }
    Ok(out)
}

/// b for a binary critical {x}: any Y with closure(Y) = closure({x}) \ {x}
/// is contained in that set, so the search over its subsets is complete.
/// Smallest cardinality first, ties resolved lexicographically.
pub(crate) fn binary_conclusion_size(sys: &ClosureSystem, x: usize) -> usize {
    let target = sys.closure_of_indices([x]).without(x);
    let members = target.members();
    for y in subsets_size_lex(&members, sys.size()) {
        if sys.closure(&y) == target {
            return y.len();
        }
    }
    unreachable!("the target set generates itself")
}
