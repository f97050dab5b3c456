use std::cmp::Ordering;
use std::sync::Arc;

use crate::set::ElementSet;
use crate::table::ElementTable;

/// An implication X -> Y: any closed set containing X contains Y.
///
/// Premise and conclusion are nonempty and disjoint.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Implication {
    pub premise: ElementSet,
    pub conclusion: ElementSet,
}

impl Implication {
    pub fn new(premise: ElementSet, conclusion: ElementSet) -> Self {
        debug_assert!(!premise.is_empty(), "empty premise");
        debug_assert!(!conclusion.is_empty(), "empty conclusion");
        debug_assert!(premise.is_disjoint(&conclusion), "overlapping implication sides");
        Implication { premise, conclusion }
    }

    pub fn is_binary(&self) -> bool {
        self.premise.len() == 1
    }

    pub fn size(&self) -> usize {
        self.premise.len() + self.conclusion.len()
    }

    /// Canonical implication order: (premise size, premise lex, conclusion lex).
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.premise
            .len()
            .cmp(&other.premise.len())
            .then_with(|| self.premise.cmp_lex(&other.premise))
            .then_with(|| self.conclusion.cmp_lex(&other.conclusion))
    }

    pub fn render(&self, table: &ElementTable) -> String {
        format!(
            "{} -> {}",
            table.render_set(&self.premise),
            table.render_set(&self.conclusion)
        )
    }
}

impl std::fmt::Debug for Implication {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} -> {:?}", self.premise, self.conclusion)
    }
}

/// Sorts implications into the canonical order and drops exact duplicates.
pub fn normalize_implications(mut imps: Vec<Implication>) -> Vec<Implication> {
    imps.sort_by(|a, b| a.cmp_canonical(b));
    imps.dedup();
    imps
}

/// Provenance tag carried by a [`BasisReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Canonical,
    K,
    DBasis,
    Foe,
    Carousel,
    OrderConvex,
    Brute,
    Input,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Canonical => "canonical",
            Provenance::K => "k",
            Provenance::DBasis => "d-basis",
            Provenance::Foe => "foe",
            Provenance::Carousel => "carousel",
            Provenance::OrderConvex => "order-convex",
            Provenance::Brute => "brute",
            Provenance::Input => "input",
        }
    }
}

/// A basis together with its size metrics.
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub table: Arc<ElementTable>,
    pub implications: Vec<Implication>,
    pub s: usize,
    pub s_left: usize,
    pub s_right: usize,
    pub count: usize,
    pub provenance: Provenance,
}

impl BasisReport {
    /// Computes the exact s, sL, sR and count of a basis.
    pub fn new(table: Arc<ElementTable>, implications: Vec<Implication>, provenance: Provenance) -> Self {
        let implications = normalize_implications(implications);
        let s_left: usize = implications.iter().map(|i| i.premise.len()).sum();
        let s_right: usize = implications.iter().map(|i| i.conclusion.len()).sum();
        BasisReport {
            count: implications.len(),
            s: s_left + s_right,
            s_left,
            s_right,
            table,
            implications,
            provenance,
        }
    }

    pub fn binary_part(&self) -> impl Iterator<Item = &Implication> {
        self.implications.iter().filter(|i| i.is_binary())
    }

    pub fn non_binary_part(&self) -> impl Iterator<Item = &Implication> {
        self.implications.iter().filter(|i| !i.is_binary())
    }

    /// Stats footer in the CLI output format.
    pub fn stats_line(&self) -> String {
        format!(
            "# s={} sL={} sR={} count={}",
            self.s, self.s_left, self.s_right, self.count
        )
    }

    /// Full text form: provenance header, a `ground:` line when some element
    /// appears in no implication, one implication per line, stats footer.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# provenance: {}\n", self.provenance.as_str()));
        let mut mentioned = ElementSet::empty(self.table.len());
        for imp in &self.implications {
            mentioned.union_with(&imp.premise);
            mentioned.union_with(&imp.conclusion);
        }
        if mentioned.len() < self.table.len() {
            out.push_str(&format!("ground: {}\n", self.table.names().join(" ")));
        }
        for imp in &self.implications {
            out.push_str(&imp.render(&self.table));
            out.push('\n');
        }
        out.push_str(&self.stats_line());
        out.push('\n');
        out
    }
}
