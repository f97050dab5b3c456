//! Refined bases for UC systems: the K-basis, the unit-conclusion D-basis
//! with its D-relation and cycle detection, and the Sigma_FOE basis for
//! geometries without D-cycles.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::canonical::{critical_sets, CriticalRecord};
use crate::error::{Error, Result};
use crate::implication::{BasisReport, Implication, Provenance};
use crate::set::{subsets_size_lex, ElementSet};
use crate::system::{BinaryOrder, ClosureSystem};
use crate::table::ElementTable;

/// The dependency relation bDa: a occurs in the premise of a non-binary
/// implication concluding b. Only non-binary implications participate.
#[derive(Debug, Clone)]
pub struct DRelation {
    n: usize,
    /// Ordered pairs (b, a) meaning b D a.
    pub pairs: Vec<(usize, usize)>,
    /// Transitive closure of `pairs`.
    pub transitive_closure: Vec<(usize, usize)>,
}

impl DRelation {
    pub fn from_pairs(n: usize, pairs: BTreeSet<(usize, usize)>) -> Self {
        let mut reach = vec![ElementSet::empty(n); n];
        for &(b, a) in &pairs {
            reach[b].insert(a);
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i].contains(k) {
                    let via = reach[k].clone();
                    reach[i].union_with(&via);
                }
            }
        }
        let mut tc = Vec::new();
        for (b, row) in reach.iter().enumerate() {
            for a in row.iter() {
                tc.push((b, a));
            }
        }
        DRelation {
            n,
            pairs: pairs.into_iter().collect(),
            transitive_closure: tc,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        !self.transitive_closure.iter().any(|&(b, a)| b == a)
    }

    /// A shortest cycle v D ... D v as the visited vertex list, found by
    /// breadth-first search; starts are scanned in element order.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(b, a) in &self.pairs {
            adj[b].push(a);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let mut best: Option<Vec<usize>> = None;
        for start in 0..self.n {
            let best_len = best.as_ref().map_or(usize::MAX, Vec::len);
            let mut parent = vec![usize::MAX; self.n];
            let mut dist = vec![usize::MAX; self.n];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            'bfs: while let Some(u) = queue.pop_front() {
                if dist[u] + 1 >= best_len {
                    break;
                }
                for &w in &adj[u] {
                    if w == start {
                        let mut path = Vec::new();
                        let mut v = u;
                        while v != usize::MAX {
                            path.push(v);
                            v = parent[v];
                        }
                        path.reverse(); // ends: start, ..., u
                        let mut cycle = vec![start];
                        cycle.extend(path.into_iter().skip(1));
                        best = Some(cycle);
                        break 'bfs;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    }
                }
            }
        }
        best
    }
}

/// Renders a cycle [x, y, ...] as `x D y D ... D x`.
pub fn render_cycle(table: &ElementTable, cycle: &[usize]) -> String {
    let mut names: Vec<&str> = cycle.iter().map(|&i| table.name(i)).collect();
    if let Some(&first) = cycle.first() {
        names.push(table.name(first));
    }
    names.join(" D ")
}

/// All containment-minimal order ideals C' of a critical set C with
/// closure(C') = closure(C), in (size, lex) order. Subsets are down-closed
/// relative to C under the binary order.
fn minimal_order_ideals(
    sys: &ClosureSystem,
    order: &BinaryOrder,
    rec: &CriticalRecord,
) -> Vec<ElementSet> {
    let members = rec.critical.members();
    let ideals: Vec<ElementSet> = subsets_size_lex(&members, sys.size())
        .filter(|d| {
            d.iter()
                .all(|a| order.below[a].intersection(&rec.critical).is_subset(d))
                && sys.closure(d) == rec.essential
        })
        .collect();
    ideals
        .iter()
        .filter(|d| !ideals.iter().any(|other| other.is_proper_subset(d)))
        .cloned()
        .collect()
}

/// The unique minimal order generator of the essential element of `rec`:
/// the maximal members of the unique minimal order ideal.
fn unique_order_generator(
    sys: &ClosureSystem,
    order: &BinaryOrder,
    rec: &CriticalRecord,
) -> Result<ElementSet> {
    let minima = minimal_order_ideals(sys, order, rec);
    match minima.as_slice() {
        [only] => Ok(order.maximal_of(only)),
        _ => Err(Error::Domain(format!(
            "critical set {} has {} minimal order generators; \
             the system is not join-semidistributive",
            sys.table().render_set_braced(&rec.critical),
            minima.len()
        ))),
    }
}

/// Lexicographically first minimal order generator; used where the paper
/// allows any choice.
fn first_order_generator(
    sys: &ClosureSystem,
    order: &BinaryOrder,
    rec: &CriticalRecord,
) -> ElementSet {
    let minima = minimal_order_ideals(sys, order, rec);
    order.maximal_of(&minima[0])
}

/// The K-basis: each canonical C -> Y_C replaced by X_K -> Y_K, where X_K is
/// the minimal order generator of closure(C) and Y_K keeps only the maximal
/// elements of Y_C. Binary premises stay put.
pub fn k_basis(sys: &ClosureSystem) -> Result<BasisReport> {
    let order = sys.binary_order()?;
    let records = critical_sets(sys)?;
    let mut imps = Vec::new();
    for rec in records {
        let premise = if rec.is_binary() {
            rec.critical.clone()
        } else {
            unique_order_generator(sys, order, rec)?
        };
        let conclusion = order.maximal_of(&rec.conclusion());
        imps.push(Implication::new(premise, conclusion));
    }
    Ok(sys.report(imps, Provenance::K))
}

/// Order-minimizes a unit-conclusion premise: while some member a can be
/// traded for elements strictly below it (or dropped outright) with the
/// conclusion still derivable, do so. The fixpoint satisfies the defining
/// condition of the D-basis.
fn minimize_unit_premise(
    sys: &ClosureSystem,
    order: &BinaryOrder,
    start: &ElementSet,
    target: usize,
) -> ElementSet {
    let mut premise = start.clone();
    loop {
        let mut changed = false;
        for a in premise.members() {
            let candidate = premise.without(a).union(&order.below[a]);
            debug_assert!(!candidate.contains(target), "critical sets are order ideals");
            if sys.closure(&candidate).contains(target) {
                premise = candidate;
                changed = true;
            }
        }
        if !changed {
            return premise;
        }
    }
}

/// The D-basis: binary implications x -> y for every strict order pair, plus
/// order-minimal unit-conclusion implications expanded from the canonical
/// basis. The returned relation is populated from the non-binary part.
pub fn d_basis(sys: &ClosureSystem) -> Result<(BasisReport, DRelation)> {
    let order = sys.binary_order()?;
    let records = critical_sets(sys)?;
    let n = sys.size();
    let mut imps: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (a, b) in order.strict_pairs() {
        imps.insert((vec![a], b));
    }
    for rec in records.iter().filter(|r| !r.is_binary()) {
        for b in rec.conclusion().iter() {
            let premise = minimize_unit_premise(sys, order, &rec.critical, b);
            if premise.len() < 2 {
                // degenerated to a binary fact already covered by the order part
                continue;
            }
            for a in premise.iter() {
                pairs.insert((b, a));
            }
            imps.insert((premise.members(), b));
        }
    }
    let implications = imps
        .into_iter()
        .map(|(premise, b)| {
            Implication::new(
                ElementSet::from_indices(n, premise),
                ElementSet::singleton(n, b),
            )
        })
        .collect();
    Ok((
        sys.report(implications, Provenance::DBasis),
        DRelation::from_pairs(n, pairs),
    ))
}

/// Result of the D-cycle test.
#[derive(Debug, Clone)]
pub struct DCycleReport {
    pub has_cycles: bool,
    /// A shortest cycle when one exists.
    pub witness: Option<Vec<usize>>,
}

/// Tests for D-cycles via the Delta relation of the basis obtained from the
/// canonical basis by swapping each non-binary premise for a minimal order
/// generator (lexicographically first when several exist): the system has
/// D-cycles iff that relation has a cycle.
pub fn has_d_cycles(sys: &ClosureSystem) -> Result<DCycleReport> {
    let order = sys.binary_order()?;
    let records = critical_sets(sys)?;
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for rec in records.iter().filter(|r| !r.is_binary()) {
        let premise = first_order_generator(sys, order, rec);
        for y in rec.conclusion().iter() {
            for x in premise.iter() {
                pairs.insert((y, x));
            }
        }
    }
    let relation = DRelation::from_pairs(sys.size(), pairs);
    let witness = relation.shortest_cycle();
    Ok(DCycleReport {
        has_cycles: witness.is_some(),
        witness,
    })
}

/// The Sigma_FOE basis of a D-geometry (convex geometry without D-cycles):
/// binary part x -> Ex(closure({x}) \ {x}), non-binary part X_K -> Y_O with
/// Y_O pruned by the E-basis rule.
pub fn sigma_foe(sys: &ClosureSystem) -> Result<BasisReport> {
    let axioms = sys.verify_axioms()?;
    if !axioms.is_convex_geometry {
        return Err(Error::Domain(
            "Sigma_FOE requires a convex geometry; the anti-exchange or zero-closure axiom fails"
                .into(),
        ));
    }
    let cycles = has_d_cycles(sys)?;
    if let Some(witness) = &cycles.witness {
        return Err(Error::Domain(format!(
            "Sigma_FOE requires a system without D-cycles; found {}",
            render_cycle(sys.table(), witness)
        )));
    }
    let order = sys.binary_order()?;
    let records = critical_sets(sys)?;
    let non_binary: Vec<&CriticalRecord> = records.iter().filter(|r| !r.is_binary()).collect();
    let mut imps = Vec::new();
    for rec in records {
        if rec.is_binary() {
            let x = rec.critical.iter().next().expect("binary critical");
            let target = sys.closure_of_indices([x]).without(x);
            imps.push(Implication::new(rec.critical.clone(), sys.extreme_of(&target)));
        } else {
            let premise = unique_order_generator(sys, order, rec)?;
            let y_k = order.maximal_of(&rec.conclusion());
            let mut y_o = y_k.clone();
            for y in y_k.iter() {
                let shadowed = non_binary.iter().any(|other| {
                    other.critical != rec.critical
                        && other.essential.is_proper_subset(&rec.essential)
                        && other.essential.difference(&other.critical).contains(y)
                });
                if shadowed {
                    y_o.remove(y);
                }
            }
            if y_o.is_empty() {
                return Err(Error::Internal(format!(
                    "E-basis rule emptied the conclusion for essential element {}",
                    sys.table().render_set_braced(&rec.essential)
                )));
            }
            imps.push(Implication::new(premise, y_o));
        }
    }
    Ok(sys.report(imps, Provenance::Foe))
}
