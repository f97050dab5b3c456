//! The basis file format: UTF-8 text, one implication per line as
//! `x y z -> u v`, `#` comments, blank lines ignored, and an optional
//! `ground: a b c` header widening the ground set.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::ClosureSystem;
use crate::table::{valid_token, ElementTable};

/// Parses a basis file into a closure system. Returns the system plus any
/// normalization warnings (implications dropped because their conclusion was
/// subsumed by the premise).
pub fn parse_basis(text: &str) -> Result<(ClosureSystem, Vec<String>)> {
    let mut ground: Vec<String> = Vec::new();
    let mut raw: Vec<(usize, Vec<String>, Vec<String>)> = Vec::new();
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
        if let Some(rest) = line.strip_prefix("ground:") {
            for tok in rest.split_whitespace() {
                check_token(tok, lineno)?;
                ground.push(tok.to_string());
            }
            continue;
        }
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(Error::Input(format!(
                "line {lineno}: expected `premise -> conclusion`, got `{line}`"
            )));
        };
        let premise: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
        let conclusion: Vec<String> = rhs.split_whitespace().map(str::to_string).collect();
        for tok in premise.iter().chain(conclusion.iter()) {
            check_token(tok, lineno)?;
        }
        if premise.is_empty() {
            return Err(Error::Input(format!(
                "line {lineno}: implications with empty premises are not accepted"
            )));
        }
        raw.push((lineno, premise, conclusion));
    }

    let mut names = ground;
    for (_, xs, ys) in &raw {
        names.extend(xs.iter().cloned());
        names.extend(ys.iter().cloned());
    }
    let table = Arc::new(ElementTable::new(names)?);

    let mut warnings = Vec::new();
    let mut implications = Vec::new();
    for (lineno, xs, ys) in &raw {
        let premise = table.set_from_names(xs.iter().map(String::as_str))?;
        let conclusion = table
            .set_from_names(ys.iter().map(String::as_str))?
            .difference(&premise);
        if conclusion.is_empty() {
            warnings.push(format!(
                "line {lineno}: implication dropped, conclusion is contained in the premise"
            ));
            continue;
        }
        implications.push(crate::implication::Implication::new(premise, conclusion));
    }
    Ok((ClosureSystem::from_implications(table, implications), warnings))
}

/// Parses a `--set` style literal: element names separated by commas or
/// whitespace, resolved against the system's ground set.
pub fn parse_set_literal(
    sys: &ClosureSystem,
    literal: &str,
) -> Result<crate::set::ElementSet> {
    let names: Vec<&str> = literal
        .split([',', ' '])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    sys.table().set_from_names(names)
}

fn check_token(tok: &str, lineno: usize) -> Result<()> {
    if valid_token(tok) {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "line {lineno}: invalid token `{tok}` (alphanumeric and underscore only)"
        )))
    }
}
