//! Finite posets: strict order as bitset lower sets, cover relation, and
//! interval/component queries.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::table::ElementTable;

/// A finite partial order. Input may give covers or arbitrary strict pairs;
/// the transitive closure is taken on construction and irreflexivity and
/// antisymmetry are verified.
#[derive(Debug, Clone)]
pub struct Poset {
    table: Arc<ElementTable>,
    /// below[i] = { j : j < i }.
    below: Vec<ElementSet>,
}

impl Poset {
    pub fn new<S: AsRef<str>>(elements: &[S], strict_pairs: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        for (a, b) in strict_pairs {
            names.push(a.as_ref().to_string());
            names.push(b.as_ref().to_string());
        }
        let table = Arc::new(ElementTable::new(names)?);
        let n = table.len();
        let mut below = vec![ElementSet::empty(n); n];
        for (a, b) in strict_pairs {
            let a = table.lookup(a.as_ref())?;
            let b = table.lookup(b.as_ref())?;
            if a == b {
                return Err(Error::Input(format!(
                    "`{} < {}` is not irreflexive",
                    table.name(a),
                    table.name(a)
                )));
            }
            below[b].insert(a);
        }
        // transitive closure
        for k in 0..n {
            let lower = below[k].clone();
            for set in below.iter_mut() {
                if set.contains(k) {
                    set.union_with(&lower);
                }
            }
        }
        for (i, lower) in below.iter().enumerate() {
            if lower.contains(i) {
                return Err(Error::Input(format!(
                    "order relation has a cycle through `{}`",
                    table.name(i)
                )));
            }
        }
        Ok(Poset { table, below })
    }

    pub fn table(&self) -> &Arc<ElementTable> {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Strict pairs (a, b) with a < b, lexicographic.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.len() {
            for a in self.below[b].iter() {
                out.push((a, b));
            }
        }
        out.sort();
        out
    }

    /// The open interval (x, y) = { z : x < z < y }.
    pub fn open_interval(&self, x: usize, y: usize) -> ElementSet {
        debug_assert!(self.less(x, y));
        self.below[y].intersection(&upper_of(self, x))
    }

    /// Cover pairs (a, b): a < b with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| self.open_interval(a, b).is_empty())
            .collect()
    }

    /// Connected components of the sub-poset on `set`, computed on the cover
    /// graph of the restricted order (equivalently, its comparability graph).
    /// Components come out sorted by their least member.
    pub fn components_of(&self, set: &ElementSet) -> Vec<ElementSet> {
        let members = set.members();
        let mut seen = ElementSet::empty(self.len());
        let mut out = Vec::new();
        for &start in &members {
            if seen.contains(start) {
                continue;
            }
            let mut comp = ElementSet::singleton(self.len(), start);
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &v in &members {
                    if !comp.contains(v) && self.comparable(u, v) {
                        comp.insert(v);
                        queue.push(v);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }
}

fn upper_of(p: &Poset, x: usize) -> ElementSet {
    let mut up = ElementSet::empty(p.len());
    for b in 0..p.len() {
        if p.less(x, b) {
            up.insert(b);
        }
    }
    up
}

/// Parses a poset file: one `a < b` relation per line, `#` comments and blank
/// lines ignored. Pairs may be covers or any strict relations.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut elements: Vec<String> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [a, "<", b] => pairs.push((a.to_string(), b.to_string())),
            [a] => elements.push(a.to_string()),
            _ => {
                return Err(Error::Input(format!(
                    "line {lineno}: expected `a < b` (or a lone element name), got `{line}`"
                )))
            }
        }
    }
    Poset::new(&elements, &pairs)
}
