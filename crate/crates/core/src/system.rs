use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::canonical::CriticalRecord;
use crate::error::{Error, Result};
use crate::implication::{normalize_implications, BasisReport, Implication, Provenance};
use crate::set::{subsets_size_lex, ElementSet};
use crate::table::ElementTable;

/// Default cap on ground-set size for exponential enumerations
/// (closed-set and quasi-closed-set families, anti-exchange checks).
pub const DEFAULT_CAP: usize = 20;

/// Forward chaining to the fixpoint: the least superset of `seed` respecting
/// every implication.
pub fn chase(implications: &[Implication], seed: &ElementSet) -> ElementSet {
    let mut z = seed.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for imp in implications {
            if imp.premise.is_subset(&z) && !imp.conclusion.is_subset(&z) {
                z.union_with(&imp.conclusion);
                changed = true;
            }
        }
    }
    z
}

pub fn respects(implications: &[Implication], z: &ElementSet) -> bool {
    implications
        .iter()
        .all(|imp| !imp.premise.is_subset(z) || imp.conclusion.is_subset(z))
}

/// The family of closed sets, enumerated by (size, lex).
#[derive(Debug, Clone)]
pub struct ClosedFamily {
    pub sets: Vec<ElementSet>,
    index: HashSet<ElementSet>,
}

impl ClosedFamily {
    pub fn contains(&self, z: &ElementSet) -> bool {
        self.index.contains(z)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// The binary order >=_phi: a >= b iff b is in the closure of {a}.
#[derive(Debug, Clone)]
pub struct BinaryOrder {
    /// below[a] = closure({a}) \ {a}, the elements strictly under a.
    pub below: Vec<ElementSet>,
}

impl BinaryOrder {
    /// Strict pairs (a, b) with a >_phi b, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, under) in self.below.iter().enumerate() {
            for b in under.iter() {
                out.push((a, b));
            }
        }
        out.sort();
        out
    }

    pub fn is_strictly_above(&self, a: usize, b: usize) -> bool {
        self.below[a].contains(b)
    }

    /// Members of `set` not strictly below another member of `set`.
    pub fn maximal_of(&self, set: &ElementSet) -> ElementSet {
        let mut out = set.clone();
        for a in set.iter() {
            for b in self.below[a].iter() {
                if set.contains(b) {
                    out.remove(b);
                }
            }
        }
        out
    }
}

/// Result of `verify_axioms`.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub zero_closed: bool,
    pub standard: bool,
    pub anti_exchange: bool,
    pub is_convex_geometry: bool,
    /// A violating (X, x, y) when anti-exchange fails: X closed,
    /// x in closure(X + {y}), x not in X, yet y in closure(X + {x}).
    pub anti_exchange_witness: Option<(ElementSet, usize, usize)>,
}

/// A finite closure system presented by implications over an interned ground
/// set. Immutable after construction; the closed family, binary order and
/// critical sets are cached on first use behind once-only guards.
pub struct ClosureSystem {
    table: Arc<ElementTable>,
    implications: Vec<Implication>,
    cap: usize,
    closed_family: OnceLock<ClosedFamily>,
    binary_order: OnceLock<std::result::Result<BinaryOrder, Error>>,
    pub(crate) criticals: OnceLock<Vec<CriticalRecord>>,
    closure_memo: Mutex<HashMap<ElementSet, ElementSet>>,
}

impl std::fmt::Debug for ClosureSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosureSystem")
            .field("ground", &self.table.names())
            .field("implications", &self.implications)
            .finish()
    }
}

impl ClosureSystem {
    /// Builds a system over `table` from implications already interned.
    pub fn from_implications(table: Arc<ElementTable>, implications: Vec<Implication>) -> Self {
        let implications = normalize_implications(implications);
        debug_assert!(implications
            .iter()
            .all(|i| i.premise.nbits() == table.len() && i.conclusion.nbits() == table.len()));
        ClosureSystem {
            table,
            implications,
            cap: DEFAULT_CAP,
            closed_family: OnceLock::new(),
            binary_order: OnceLock::new(),
            criticals: OnceLock::new(),
            closure_memo: Mutex::new(HashMap::new()),
        }
    }

    /// Convenience constructor from name lists.
    pub fn new<S: AsRef<str>>(
        ground: &[S],
        implications: &[(Vec<S>, Vec<S>)],
    ) -> Result<Self> {
        let mut names: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        for (xs, ys) in implications {
            names.extend(xs.iter().map(|s| s.as_ref().to_string()));
            names.extend(ys.iter().map(|s| s.as_ref().to_string()));
        }
        let table = Arc::new(ElementTable::new(names)?);
        let mut imps = Vec::new();
        for (xs, ys) in implications {
            let premise = table.set_from_names(xs.iter().map(|s| s.as_ref()))?;
            let conclusion = table.set_from_names(ys.iter().map(|s| s.as_ref()))?;
            if premise.is_empty() {
                return Err(Error::Input("empty premise".into()));
            }
            let conclusion = conclusion.difference(&premise);
            if conclusion.is_empty() {
                continue;
            }
            imps.push(Implication::new(premise, conclusion));
        }
        Ok(Self::from_implications(table, imps))
    }

    pub fn set_cap(&mut self, cap: usize) {
        self.cap = cap;
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn table(&self) -> &Arc<ElementTable> {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    pub fn check_cap(&self) -> Result<()> {
        if self.size() > self.cap {
            Err(Error::CapExceeded {
                size: self.size(),
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn report(&self, implications: Vec<Implication>, provenance: Provenance) -> BasisReport {
        BasisReport::new(self.table.clone(), implications, provenance)
    }

    /// The input implications as a basis report.
    pub fn input_report(&self) -> BasisReport {
        self.report(self.implications.clone(), Provenance::Input)
    }

    /// closure(seed): forward chaining to fixpoint, memoized.
    pub fn closure(&self, seed: &ElementSet) -> ElementSet {
        if let Some(hit) = self.closure_memo.lock().unwrap().get(seed) {
            return hit.clone();
        }
        let z = chase(&self.implications, seed);
        self.closure_memo
            .lock()
            .unwrap()
            .insert(seed.clone(), z.clone());
        z
    }

    pub fn closure_of_indices<I: IntoIterator<Item = usize>>(&self, seed: I) -> ElementSet {
        self.closure(&ElementSet::from_indices(self.size(), seed))
    }

    pub fn is_closed(&self, z: &ElementSet) -> bool {
        respects(&self.implications, z)
    }

    /// An implication holds in the system iff its conclusion lies in the
    /// closure of its premise.
    pub fn entails(&self, imp: &Implication) -> bool {
        imp.conclusion.is_subset(&self.closure(&imp.premise))
    }

    /// All closed sets, by (size, lex). Guarded by the enumeration cap.
    pub fn closed_sets(&self) -> Result<&ClosedFamily> {
        self.check_cap()?;
        Ok(self.closed_family.get_or_init(|| {
            let n = self.size();
            let all: Vec<usize> = (0..n).collect();
            let sets: Vec<ElementSet> = subsets_size_lex(&all, n)
                .filter(|z| self.is_closed(z))
                .collect();
            let index = sets.iter().cloned().collect();
            ClosedFamily { sets, index }
        }))
    }

    pub fn is_zero_closed(&self) -> bool {
        self.closure(&ElementSet::empty(self.size())).is_empty()
    }

    /// closure({i}) \ {i} is closed for every i.
    pub fn is_standard(&self) -> bool {
        (0..self.size()).all(|i| {
            let punctured = self.closure_of_indices([i]).without(i);
            self.is_closed(&punctured)
        })
    }

    /// Checks zero-closure, standardness and the anti-exchange axiom.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let family = self.closed_sets()?;
        let zero_closed = self.is_zero_closed();
        let standard = self.is_standard();
        let mut witness = None;
        'outer: for x_closed in &family.sets {
            for y in 0..self.size() {
                if x_closed.contains(y) {
                    continue;
                }
                let with_y = self.closure(&x_closed.with(y));
                for x in 0..self.size() {
                    if x == y || x_closed.contains(x) || !with_y.contains(x) {
                        continue;
                    }
                    if self.closure(&x_closed.with(x)).contains(y) {
                        witness = Some((x_closed.clone(), x, y));
                        break 'outer;
                    }
                }
            }
        }
        let anti_exchange = witness.is_none();
        Ok(AxiomReport {
            zero_closed,
            standard,
            anti_exchange,
            is_convex_geometry: zero_closed && anti_exchange,
            anti_exchange_witness: witness,
        })
    }

    pub fn is_convex_geometry(&self) -> Result<bool> {
        Ok(self.verify_axioms()?.is_convex_geometry)
    }

    /// The binary order >=_phi as strict lower sets. Requires a standard
    /// system; antisymmetry is verified.
    pub fn binary_order(&self) -> Result<&BinaryOrder> {
        self.binary_order
            .get_or_init(|| {
                if !self.is_standard() {
                    return Err(Error::Domain(
                        "binary order requires a standard system (closure({i}) minus {i} \
                         must be closed for every i)"
                            .into(),
                    ));
                }
                let below: Vec<ElementSet> = (0..self.size())
                    .map(|a| self.closure_of_indices([a]).without(a))
                    .collect();
                for a in 0..self.size() {
                    for b in below[a].iter() {
                        if below[b].contains(a) {
                            return Err(Error::Domain(format!(
                                "binary order is not antisymmetric: {} and {} generate each other",
                                self.table.name(a),
                                self.table.name(b)
                            )));
                        }
                    }
                }
                Ok(BinaryOrder { below })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Extreme points of a closed set Z: members outside the closure of
    /// Z minus themselves.
    pub fn extreme_points(&self, z: &ElementSet) -> Result<ElementSet> {
        if !self.is_closed(z) {
            return Err(Error::Domain(format!(
                "extreme points are defined on closed sets; {} is not closed",
                self.table.render_set_braced(z)
            )));
        }
        Ok(self.extreme_of(z))
    }

    /// The extreme-point formula applied to an arbitrary set.
    pub(crate) fn extreme_of(&self, z: &ElementSet) -> ElementSet {
        let mut out = z.clone();
        for x in z.iter() {
            if self.closure(&z.without(x)).contains(x) {
                out.remove(x);
            }
        }
        out
    }
}

/// True iff each implication of one set is entailed by the other, both ways.
pub fn bases_equivalent(a: &[Implication], b: &[Implication]) -> bool {
    a.iter()
        .all(|imp| imp.conclusion.is_subset(&chase(b, &imp.premise)))
        && b
            .iter()
            .all(|imp| imp.conclusion.is_subset(&chase(a, &imp.premise)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> ClosureSystem {
        ClosureSystem::new(
            &[],
            &[
                (vec!["a", "b", "c"], vec!["x", "z"]),
                (vec!["a", "c", "x"], vec!["z"]),
                (vec!["z"], vec!["x"]),
            ],
        )
        .unwrap()
    }

    fn set(sys: &ClosureSystem, names: &[&str]) -> ElementSet {
        sys.table().set_from_names(names.iter().copied()).unwrap()
    }

    #[test]
    fn closure_forward_chains() {
        let sys = e1();
        let got = sys.closure(&set(&sys, &["a", "b", "c"]));
        assert_eq!(got, set(&sys, &["a", "b", "c", "x", "z"]));
    }

    #[test]
    fn closure_of_empty_is_empty_without_empty_premises() {
        let sys = e1();
        assert!(sys.is_zero_closed());
    }

    #[test]
    fn closure_cascades_through_derived_premises() {
        // Forced chaining: c1c2 -> d, c1 -> a1, c2 -> a2, and then the
        // derived pair a1 a2 fires a1a2 -> b1.
        let sys = ClosureSystem::new(
            &[],
            &[
                (vec!["a1", "a2"], vec!["b1"]),
                (vec!["b1", "b2"], vec!["c1"]),
                (vec!["c1", "c2"], vec!["d"]),
                (vec!["c1"], vec!["a1"]),
                (vec!["b2"], vec!["a1"]),
                (vec!["d"], vec!["a2"]),
                (vec!["c2"], vec!["a2"]),
            ],
        )
        .unwrap();
        let got = sys.closure(&set(&sys, &["c1", "c2"]));
        assert_eq!(got, set(&sys, &["a1", "a2", "b1", "c1", "c2", "d"]));
    }

    #[test]
    fn closed_sets_match_brute_force_respect_scan() {
        let sys = e1();
        let family = sys.closed_sets().unwrap();
        // Independent oracle: test all 2^5 subsets against the implications.
        let n = sys.size();
        let all: Vec<usize> = (0..n).collect();
        let expected: Vec<ElementSet> = subsets_size_lex(&all, n)
            .filter(|z| respects(sys.implications(), z))
            .collect();
        assert_eq!(family.sets, expected);
        assert_eq!(family.len(), 21);
    }

    #[test]
    fn closed_sets_of_subgeometry_match_scan() {
        let sys = ClosureSystem::new(
            &[],
            &[
                (vec!["a"], vec!["c"]),
                (vec!["a", "b"], vec!["x", "z"]),
                (vec!["a", "x"], vec!["z"]),
            ],
        )
        .unwrap();
        let family = sys.closed_sets().unwrap();
        let n = sys.size();
        let all: Vec<usize> = (0..n).collect();
        let expected: Vec<ElementSet> = subsets_size_lex(&all, n)
            .filter(|z| respects(sys.implications(), z))
            .collect();
        assert_eq!(family.sets, expected);
    }

    #[test]
    fn closed_sets_empty_sigma() {
        let sys = ClosureSystem::new(&["a", "b"], &[]).unwrap();
        let family = sys.closed_sets().unwrap();
        assert_eq!(family.len(), 4);
    }

    #[test]
    fn cap_guards_enumeration() {
        let names: Vec<String> = (0..25).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let sys = ClosureSystem::new(&refs, &[]).unwrap();
        match sys.closed_sets() {
            Err(Error::CapExceeded { size: 25, cap: 20 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn binary_order_strict_pairs() {
        let sys = e1();
        let order = sys.binary_order().unwrap();
        let z = sys.table().lookup("z").unwrap();
        let x = sys.table().lookup("x").unwrap();
        assert_eq!(order.strict_pairs(), vec![(z, x)]);
    }

    #[test]
    fn binary_order_rejects_non_standard() {
        let sys = ClosureSystem::new(
            &[],
            &[(vec!["a"], vec!["b"]), (vec!["b"], vec!["a"])],
        )
        .unwrap();
        assert!(sys.binary_order().is_err());
    }

    #[test]
    fn extreme_points_of_singleton() {
        let sys = ClosureSystem::new(&["x"], &[]).unwrap();
        let z = set(&sys, &["x"]);
        assert_eq!(sys.extreme_points(&z).unwrap(), z);
    }

    #[test]
    fn extreme_points_requires_closed() {
        let sys = e1();
        assert!(sys.extreme_points(&set(&sys, &["z"])).is_err());
    }

    #[test]
    fn equivalence_detects_dropped_implication() {
        let sys = e1();
        let all = sys.implications().to_vec();
        let fewer: Vec<Implication> = all[..all.len() - 1].to_vec();
        assert!(bases_equivalent(&all, &all));
        assert!(!bases_equivalent(&all, &fewer));
    }

    fn imps_of(text: &str) -> Vec<Implication> {
        crate::parse::parse_basis(text).unwrap().0.implications().to_vec()
    }

    #[test]
    fn equivalence_of_optimum_rewrites() {
        // conclusion trims preserve the system in both directions
        assert!(bases_equivalent(
            &imps_of("a b c -> x z\na c x -> z\nz -> x\n"),
            &imps_of("a b c -> z\na c x -> z\nz -> x\n"),
        ));
        assert!(bases_equivalent(
            &imps_of("a b c -> x z\na c x -> z\na b z -> x\n"),
            &imps_of("a b c -> x\na c x -> z\na b z -> x\n"),
        ));
    }

    #[test]
    fn axiom_report_on_e1() {
        // z and x exchange over the closed set {a,c}, so anti-exchange fails
        let sys = e1();
        let report = sys.verify_axioms().unwrap();
        assert!(report.zero_closed);
        assert!(report.standard);
        assert!(!report.anti_exchange);
        assert!(!report.is_convex_geometry);
        let (x_set, x, y) = report.anti_exchange_witness.unwrap();
        assert!(sys.is_closed(&x_set));
        assert!(x != y && !x_set.contains(x) && !x_set.contains(y));
        assert!(sys.closure(&x_set.with(y)).contains(x));
        assert!(sys.closure(&x_set.with(x)).contains(y));
    }

    #[test]
    fn axiom_report_on_d_geometry_example() {
        let sys = ClosureSystem::new(
            &[],
            &[
                (vec!["a1", "a2"], vec!["b1"]),
                (vec!["b1", "b2"], vec!["c1"]),
                (vec!["c1", "c2"], vec!["d"]),
                (vec!["c1"], vec!["a1"]),
                (vec!["b2"], vec!["a1"]),
                (vec!["d"], vec!["a2"]),
                (vec!["c2"], vec!["a2"]),
            ],
        )
        .unwrap();
        assert!(sys.verify_axioms().unwrap().is_convex_geometry);
    }

    #[test]
    fn axiom_report_on_two_cycle() {
        let sys = ClosureSystem::new(
            &[],
            &[(vec!["a"], vec!["b"]), (vec!["b"], vec!["a"])],
        )
        .unwrap();
        let report = sys.verify_axioms().unwrap();
        assert!(!report.standard);
        assert!(!report.anti_exchange);
        assert!(report.anti_exchange_witness.is_some());
    }

    #[test]
    fn extreme_points_of_six_point_ground_set() {
        let sys = ClosureSystem::new(
            &[],
            &[
                (vec!["a", "b", "c"], vec!["x", "y", "z"]),
                (vec!["a", "b", "z"], vec!["x", "y"]),
                (vec!["a", "c", "y"], vec!["x", "z"]),
                (vec!["b", "c", "x"], vec!["y", "z"]),
                (vec!["a", "y", "z"], vec!["x"]),
                (vec!["b", "x", "z"], vec!["y"]),
                (vec!["c", "x", "y"], vec!["z"]),
            ],
        )
        .unwrap();
        let ground = ElementSet::full(sys.size());
        assert_eq!(
            sys.extreme_points(&ground).unwrap(),
            set(&sys, &["a", "b", "c"])
        );
    }

    #[test]
    fn extreme_points_follow_the_formula_even_off_geometries() {
        // x regenerates from {a,c,z} via z -> x, so only a and c are extreme
        let sys = e1();
        let z = sys.closure(&set(&sys, &["a", "c", "x"]));
        assert_eq!(z, set(&sys, &["a", "c", "x", "z"]));
        assert_eq!(sys.extreme_points(&z).unwrap(), set(&sys, &["a", "c"]));
    }

    #[test]
    fn basis_stats_examples() {
        use crate::implication::{BasisReport, Provenance};
        let sys = e1();
        let stats = sys.input_report();
        assert_eq!(
            (stats.s, stats.s_left, stats.s_right, stats.count),
            (11, 7, 4, 3)
        );
        let rewritten = crate::parse::parse_basis("a b c -> z\na c x -> z\nz -> x\n")
            .unwrap()
            .0;
        assert_eq!(rewritten.input_report().s, 10);
        let empty = BasisReport::new(sys.table().clone(), Vec::new(), Provenance::Input);
        assert_eq!((empty.s, empty.count), (0, 0));
    }

    #[test]
    fn shared_system_supports_concurrent_readers() {
        let sys = std::sync::Arc::new(e1());
        let handles: Vec<_> = (0..4)
            .map(|k| {
                let sys = std::sync::Arc::clone(&sys);
                std::thread::spawn(move || {
                    let seed = ElementSet::from_indices(sys.size(), [k % sys.size()]);
                    let closure = sys.closure(&seed);
                    let family_len = sys.closed_sets().unwrap().len();
                    (closure, family_len)
                })
            })
            .collect();
        for handle in handles {
            let (closure, family_len) = handle.join().unwrap();
            assert!(sys.is_closed(&closure));
            assert_eq!(family_len, 21);
        }
    }
}
