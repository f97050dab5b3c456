use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Interning table for ground-set elements: names are unique, sorted, and
/// mapped to dense indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub fn valid_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ElementTable {
    /// Builds a table from element names. Names are deduplicated and sorted;
    /// indices are their ranks in that order.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        for n in &names {
            if !valid_token(n) {
                return Err(Error::Input(format!(
                    "invalid element name `{n}`: expected alphanumeric or underscore"
                )));
            }
        }
        names.sort();
        names.dedup();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(ElementTable { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Input(format!("unknown element `{name}`")))
    }

    pub fn set_from_names<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<ElementSet> {
        let mut s = ElementSet::empty(self.len());
        for n in names {
            s.insert(self.lookup(n)?);
        }
        Ok(s)
    }

    /// Space-joined member names, ascending.
    pub fn render_set(&self, set: &ElementSet) -> String {
        set.iter()
            .map(|i| self.name(i))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_set_braced(&self, set: &ElementSet) -> String {
        format!("{{{}}}", self.render_set(set))
    }
}
