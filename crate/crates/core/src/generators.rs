//! Implication-system constructors: affine planar geometries with exact
//! rational predicates, order-convex geometries, subsemilattice and suborder
//! geometries, and the component-quadratic (CQ) classifier.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::canonical::canonical_basis;
use crate::error::{Error, Result};
use crate::implication::Implication;
use crate::poset::Poset;
use crate::set::{subsets_size_lex, ElementSet};
use crate::system::ClosureSystem;
use crate::table::ElementTable;

/// Ground-set cap for full closed-family construction of affine geometries.
pub const AFFINE_CAP: usize = 16;

/// A finite planar point configuration with exact rational coordinates.
#[derive(Debug, Clone)]
pub struct PlanarConfig {
    table: Arc<ElementTable>,
    /// Coordinates indexed by table index.
    points: Vec<(BigRational, BigRational)>,
}

impl PlanarConfig {
    pub fn new<S: AsRef<str>>(points: &[(S, BigRational, BigRational)]) -> Result<Self> {
        let table = Arc::new(ElementTable::new(
            points.iter().map(|(n, _, _)| n.as_ref().to_string()),
        )?);
        if table.len() != points.len() {
            return Err(Error::Input("duplicate point names".into()));
        }
        let mut coords = vec![None; points.len()];
        for (name, x, y) in points {
            coords[table.lookup(name.as_ref())?] = Some((x.clone(), y.clone()));
        }
        let points: Vec<(BigRational, BigRational)> =
            coords.into_iter().map(|c| c.expect("filled")).collect();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::Input(format!(
                        "duplicate points: `{}` and `{}` coincide",
                        table.name(i),
                        table.name(j)
                    )));
                }
            }
        }
        Ok(PlanarConfig { table, points })
    }

    pub fn table(&self) -> &Arc<ElementTable> {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn parse_rational(tok: &str) -> Result<BigRational> {
    if let Some((num, den)) = tok.split_once('/') {
        let p = BigInt::from_str(num.trim())
            .map_err(|_| Error::Input(format!("invalid rational `{tok}`")))?;
        let q = BigInt::from_str(den.trim())
            .map_err(|_| Error::Input(format!("invalid rational `{tok}`")))?;
        if q == BigInt::from(0) {
            return Err(Error::Input(format!("zero denominator in `{tok}`")));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p = BigInt::from_str(tok.trim())
            .map_err(|_| Error::Input(format!("invalid coordinate `{tok}`")))?;
        Ok(BigRational::from_integer(p))
    }
}

/// Parses a points file: lines `name x y`, coordinates integer or `p/q`.
pub fn parse_points(text: &str) -> Result<PlanarConfig> {
    let mut pts = Vec::new();
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
        let [name, x, y] = toks.as_slice() else {
            return Err(Error::Input(format!(
                "line {lineno}: expected `name x y`, got `{line}`"
            )));
        };
        pts.push((name.to_string(), parse_rational(x)?, parse_rational(y)?));
    }
    PlanarConfig::new(&pts)
}

/// Sign of the cross product (b - a) x (c - a): 1 for a left turn, -1 for a
/// right turn, 0 for collinear.
fn orient(points: &[(BigRational, BigRational)], a: usize, b: usize, c: usize) -> i8 {
    let (ax, ay) = &points[a];
    let (bx, by) = &points[b];
    let (cx, cy) = &points[c];
    let cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if cross.is_positive() {
        1
    } else if cross.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact planar hull-membership tables: orientation signs for all ordered
/// triples and segment containment for all (point, endpoint, endpoint).
struct HullTables {
    n: usize,
    orient: Vec<i8>,
    between: Vec<bool>,
}

impl HullTables {
    fn build(cfg: &PlanarConfig) -> Self {
        let n = cfg.len();
        let mut orient_t = vec![0i8; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    orient_t[(a * n + b) * n + c] = orient(&cfg.points, a, b, c);
                }
            }
        }
        let mut between = vec![false; n * n * n];
        for p in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if p == a || p == b || a == b {
                        continue;
                    }
                    if orient_t[(a * n + b) * n + p] != 0 {
                        continue;
                    }
                    let (px, py) = &cfg.points[p];
                    let (ax, ay) = &cfg.points[a];
                    let (bx, by) = &cfg.points[b];
                    let in_x = (ax.min(bx)..=ax.max(bx)).contains(&px);
                    let in_y = (ay.min(by)..=ay.max(by)).contains(&py);
                    between[(p * n + a) * n + b] = in_x && in_y;
                }
            }
        }
        HullTables {
            n,
            orient: orient_t,
            between,
        }
    }

    fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        self.orient[(a * self.n + b) * self.n + c]
    }

    /// p lies in the convex hull of the members of `s` (p not in s).
    /// Complete by Caratheodory: two points suffice for degenerate witnesses,
    /// three for proper triangles. Boundaries count as inside.
    fn in_hull(&self, p: usize, s: &ElementSet) -> bool {
        let members = s.members();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if self.between[(p * self.n + a) * self.n + b] {
                    return true;
                }
            }
        }
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                for &c in &members[j + 1..] {
                    let o = self.orient(a, b, c);
                    if o == 0 {
                        continue;
                    }
                    let s1 = self.orient(a, b, p);
                    let s2 = self.orient(b, c, p);
                    let s3 = self.orient(c, a, p);
                    if (s1 == 0 || s1 == o) && (s2 == 0 || s2 == o) && (s3 == 0 || s3 == o) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// The convex geometry of a planar point set: closed sets are those
/// containing every configuration point inside their convex hull. The full
/// closed family is built set by set with exact predicates, and the system
/// is materialized as its canonical basis.
pub fn affine_2d(cfg: &PlanarConfig) -> Result<ClosureSystem> {
    if cfg.len() > AFFINE_CAP {
        return Err(Error::CapExceeded {
            size: cfg.len(),
            cap: AFFINE_CAP,
        });
    }
    let tables = HullTables::build(cfg);
    let n = cfg.len();
    let all: Vec<usize> = (0..n).collect();
    let mut raw = Vec::new();
    for s in subsets_size_lex(&all, n) {
        if s.len() < 2 {
            continue;
        }
        let mut added = ElementSet::empty(n);
        for p in 0..n {
            if !s.contains(p) && tables.in_hull(p, &s) {
                added.insert(p);
            }
        }
        if !added.is_empty() {
            raw.push(Implication::new(s, added));
        }
    }
    let scaffold = ClosureSystem::from_implications(cfg.table.clone(), raw);
    let canonical = canonical_basis(&scaffold)?;
    Ok(ClosureSystem::from_implications(
        cfg.table.clone(),
        canonical.implications,
    ))
}

/// The canonical basis of Co(P): xy -> (x, y) for every comparable pair with
/// a nonempty open interval. No binary part.
pub fn order_convex_basis(poset: &Poset) -> ClosureSystem {
    let n = poset.len();
    let mut imps = Vec::new();
    for (x, y) in poset.strict_pairs() {
        let interior = poset.open_interval(x, y);
        if !interior.is_empty() {
            imps.push(Implication::new(
                ElementSet::from_indices(n, [x, y]),
                interior,
            ));
        }
    }
    ClosureSystem::from_implications(poset.table().clone(), imps)
}

/// A validated meet-semilattice operation table.
#[derive(Debug, Clone)]
pub struct MeetTable {
    table: Arc<ElementTable>,
    meet: Vec<Vec<usize>>,
}

impl MeetTable {
    pub fn table(&self) -> &Arc<ElementTable> {
        &self.table
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    fn validate(table: &ElementTable, meet: &[Vec<usize>]) -> Result<()> {
        let n = table.len();
        for a in 0..n {
            if meet[a][a] != a {
                return Err(Error::Input(format!(
                    "meet table is not idempotent: {0} ^ {0} = {1}",
                    table.name(a),
                    table.name(meet[a][a])
                )));
            }
            for b in 0..n {
                if meet[a][b] != meet[b][a] {
                    return Err(Error::Input(format!(
                        "meet table is not commutative on {} ^ {}",
                        table.name(a),
                        table.name(b)
                    )));
                }
                for c in 0..n {
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]] {
                        return Err(Error::Input(format!(
                            "meet table is not associative on the triple ({}, {}, {})",
                            table.name(a),
                            table.name(b),
                            table.name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses a meet-table file: lines `a ^ b = c`. The symmetric closure is
/// applied; conflicting or missing pairs are rejected; `a ^ a = a` may be
/// omitted.
pub fn parse_meets(text: &str) -> Result<MeetTable> {
    let mut entries: Vec<(String, String, String)> = Vec::new();
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
        let [a, "^", b, "=", c] = toks.as_slice() else {
            return Err(Error::Input(format!(
                "line {lineno}: expected `a ^ b = c`, got `{line}`"
            )));
        };
        entries.push((a.to_string(), b.to_string(), c.to_string()));
    }
    let mut names = Vec::new();
    for (a, b, c) in &entries {
        names.extend([a.clone(), b.clone(), c.clone()]);
    }
    let table = Arc::new(ElementTable::new(names)?);
    let n = table.len();
    let mut meet: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for (a, b, c) in &entries {
        let (a, b, c) = (table.lookup(a)?, table.lookup(b)?, table.lookup(c)?);
        for (i, j) in [(a, b), (b, a)] {
            match meet[i][j] {
                Some(prev) if prev != c => {
                    return Err(Error::Input(format!(
                        "conflicting meets for {} ^ {}: {} and {}",
                        table.name(i),
                        table.name(j),
                        table.name(prev),
                        table.name(c)
                    )))
                }
                _ => meet[i][j] = Some(c),
            }
        }
    }
    let mut filled = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            filled[a][b] = match meet[a][b] {
                Some(c) => c,
                None if a == b => a,
                None => {
                    return Err(Error::Input(format!(
                        "missing meet for the pair {} ^ {}",
                        table.name(a),
                        table.name(b)
                    )))
                }
            };
        }
    }
    MeetTable::validate(&table, &filled)?;
    Ok(MeetTable {
        table,
        meet: filled,
    })
}

/// The convex geometry of subsemilattices: ab -> c whenever a ^ b = c lies
/// outside {a, b}.
pub fn subsemilattice_basis(meets: &MeetTable) -> ClosureSystem {
    let n = meets.table.len();
    let mut imps = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = meets.meet(a, b);
            if c != a && c != b {
                imps.push(Implication::new(
                    ElementSet::from_indices(n, [a, b]),
                    ElementSet::singleton(n, c),
                ));
            }
        }
    }
    ClosureSystem::from_implications(meets.table.clone(), imps)
}

/// The convex geometry of suborders of a poset: the ground set is one
/// element `a_b` per strict pair a < b, with an implication for every
/// composable pair of relations.
pub fn suborder_basis(poset: &Poset) -> Result<ClosureSystem> {
    let pairs = poset.strict_pairs();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(a, b)| format!("{}_{}", poset.table().name(a), poset.table().name(b)))
        .collect();
    let table = Arc::new(ElementTable::new(names)?);
    if table.len() != pairs.len() {
        return Err(Error::Input(
            "suborder pair names collide; rename the poset elements".into(),
        ));
    }
    let idx = |a: usize, b: usize| {
        table.lookup(&format!(
            "{}_{}",
            poset.table().name(a),
            poset.table().name(b)
        ))
    };
    let n = table.len();
    let mut imps = Vec::new();
    for &(x, y) in &pairs {
        for &(y2, z) in &pairs {
            if y2 != y {
                continue;
            }
            let premise = ElementSet::from_indices(n, [idx(x, y)?, idx(y, z)?]);
            let conclusion = ElementSet::singleton(n, idx(x, z)?);
            imps.push(Implication::new(premise, conclusion));
        }
    }
    Ok(ClosureSystem::from_implications(table, imps))
}

/// Result of the component-quadratic check on one basis.
#[derive(Debug, Clone)]
pub struct CqReport {
    pub is_cq: bool,
    /// Components of mutually reachable elements with at least two members,
    /// sorted lexicographically.
    pub nontrivial_components: Vec<ElementSet>,
    /// First implication whose premise meets the component of one of its
    /// conclusion elements in two or more elements.
    pub witness: Option<(Implication, ElementSet)>,
}

/// Checks the component-quadratic property of a basis: each premise may
/// contain at most one element of the component of each conclusion element,
/// where components collect mutually reachable elements of the
/// premise-to-conclusion relation.
pub fn cq_check(implications: &[Implication], table: &Arc<ElementTable>) -> CqReport {
    let n = table.len();
    let mut reach = vec![ElementSet::empty(n); n];
    for imp in implications {
        for x in imp.premise.iter() {
            reach[x].union_with(&imp.conclusion);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i].contains(k) {
                let via = reach[k].clone();
                reach[i].union_with(&via);
            }
        }
    }
    let component = |b: usize| -> ElementSet {
        let mut comp = ElementSet::singleton(n, b);
        for y in reach[b].iter() {
            if reach[y].contains(b) {
                comp.insert(y);
            }
        }
        comp
    };
    let mut nontrivial: Vec<ElementSet> = (0..n)
        .map(component)
        .filter(|c| c.len() >= 2)
        .collect();
    nontrivial.sort_by(|a, b| a.cmp_lex(b));
    nontrivial.dedup();

    let mut witness = None;
    'outer: for imp in implications {
        for b in imp.conclusion.iter() {
            let comp = component(b);
            if imp.premise.intersection(&comp).len() >= 2 {
                witness = Some((imp.clone(), comp));
                break 'outer;
            }
        }
    }
    CqReport {
        is_cq: witness.is_none(),
        nontrivial_components: nontrivial,
        witness,
    }
}
