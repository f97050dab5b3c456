//! Shared support for the integration suites: an independent basis-size
//! oracle working on raw u32 masks, a random convex-geometry generator built
//! from the closed-family characterization, and random poset / planar-config
//! generators.
//!
//! The oracle deliberately shares no code with the library: systems are
//! (premise-mask, conclusion-mask) pairs, and optimality is decided by exact
//! branch-and-bound over the complete space of sound implications, using only
//! the first-principles fact that a sound implication set is a basis iff
//! every non-closed subset violates one of its members.

#![allow(dead_code)]

use std::sync::Arc;

use convexgeo_core::{ClosureSystem, ElementTable, Implication};
use rand::rngs::StdRng;
use rand::Rng;

pub type MaskImp = (u32, u32);

/// Forward chaining on mask implications.
pub fn mask_closure(imps: &[MaskImp], seed: u32) -> u32 {
    let mut z = seed;
    loop {
        let mut next = z;
        for &(p, c) in imps {
            if p & !z == 0 {
                next |= c;
            }
        }
        if next == z {
            return z;
        }
        z = next;
    }
}

pub fn mask_respects(imps: &[MaskImp], z: u32) -> bool {
    imps.iter().all(|&(p, c)| p & !z != 0 || c & !z == 0)
}

/// Converts a library system to mask implications.
pub fn to_masks(sys: &ClosureSystem) -> Vec<MaskImp> {
    assert!(sys.size() <= 32);
    sys.implications()
        .iter()
        .map(|imp| {
            let p = imp.premise.iter().fold(0u32, |m, i| m | 1 << i);
            let c = imp.conclusion.iter().fold(0u32, |m, i| m | 1 << i);
            (p, c)
        })
        .collect()
}

/// Simple growable bitmask for coverage bookkeeping.
#[derive(Clone, PartialEq, Eq)]
pub struct Cover(Vec<u64>);

impl Cover {
    pub fn empty(n: usize) -> Self {
        Cover(vec![0; n.div_ceil(64)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn or_with(&mut self, other: &Cover) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn covers_all(&self, other: &Cover) -> bool {
        other.0.iter().zip(&self.0).all(|(o, s)| o & !s == 0)
    }

    pub fn first_missing(&self, full: &Cover) -> Option<usize> {
        for (bi, (s, f)) in self.0.iter().zip(&full.0).enumerate() {
            let miss = f & !s;
            if miss != 0 {
                return Some(bi * 64 + miss.trailing_zeros() as usize);
            }
        }
        None
    }
}

struct OracleCand {
    cost: usize,
    covers: Cover,
}

/// Exact minimum over a candidate family: choose candidates covering every
/// non-closed set at least cost. Branch on the first uncovered set,
/// candidates ordered by cost.
fn exact_min_cover(cands: &[OracleCand], non_closed: usize, upper: usize) -> usize {
    let full = {
        let mut f = Cover::empty(non_closed);
        for i in 0..non_closed {
            f.set(i);
        }
        f
    };
    // per non-closed set, the candidates covering it
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); non_closed];
    for (ci, cand) in cands.iter().enumerate() {
        for (w, list) in covering.iter_mut().enumerate() {
            if cand.covers.0[w / 64] & (1 << (w % 64)) != 0 {
                list.push(ci);
            }
        }
    }
    for lists in &mut covering {
        lists.sort_by_key(|&ci| cands[ci].cost);
    }

    fn dfs(
        cands: &[OracleCand],
        covering: &[Vec<usize>],
        full: &Cover,
        covered: &Cover,
        cost: usize,
        best: &mut usize,
    ) {
        if cost >= *best {
            return;
        }
        let Some(w) = covered.first_missing(full) else {
            *best = cost;
            return;
        };
        for &ci in &covering[w] {
            let cand = &cands[ci];
            if cost + cand.cost >= *best {
                break;
            }
            let mut next = covered.clone();
            next.or_with(&cand.covers);
            dfs(cands, covering, full, &next, cost + cand.cost, best);
        }
    }

    let mut best = upper;
    dfs(
        cands,
        &covering,
        &full,
        &Cover::empty(non_closed),
        0,
        &mut best,
    );
    best
}

/// All sound candidate implications of a system on `n` elements, as
/// (premise, conclusion, cost, coverage) with dominated candidates dropped.
fn oracle_candidates(imps: &[MaskImp], n: usize, unit_cost: bool) -> (Vec<OracleCand>, usize) {
    let ground: u32 = if n == 32 { !0 } else { (1 << n) - 1 };
    let non_closed: Vec<u32> = (0..=ground)
        .filter(|&w| w & !ground == 0 && !mask_respects(imps, w))
        .collect();
    let m = non_closed.len();
    let mut cands = Vec::new();
    for &u in &non_closed {
        let pool = mask_closure(imps, u) & !u;
        // enumerate nonempty sub-conclusions; for unit cost the maximal
        // conclusion dominates, so emit only it
        let subs: Vec<u32> = if unit_cost {
            vec![pool]
        } else {
            let mut subs = Vec::new();
            let mut v = pool;
            loop {
                if v != 0 {
                    subs.push(v);
                }
                if v == 0 {
                    break;
                }
                v = (v - 1) & pool;
            }
            subs
        };
        for v in subs {
            let mut covers = Cover::empty(m);
            for (i, &w) in non_closed.iter().enumerate() {
                if u & !w == 0 && v & !w != 0 {
                    covers.set(i);
                }
            }
            let cost = if unit_cost {
                1
            } else {
                (u.count_ones() + v.count_ones()) as usize
            };
            cands.push(OracleCand { cost, covers });
        }
    }
    // dominance prune: drop candidates covered-and-priced no better than another
    let mut keep = vec![true; cands.len()];
    for i in 0..cands.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..cands.len() {
            if i == j || !keep[j] {
                continue;
            }
            let dominates = cands[i].cost <= cands[j].cost
                && cands[i].covers.covers_all(&cands[j].covers)
                && (cands[i].cost < cands[j].cost || cands[i].covers != cands[j].covers || i < j);
            if dominates {
                keep[j] = false;
            }
        }
    }
    let kept: Vec<OracleCand> = cands
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();
    (kept, m)
}

/// Independent oracle: fewest implications over all equivalent bases.
pub fn oracle_min_count(imps: &[MaskImp], n: usize) -> usize {
    let (cands, m) = oracle_candidates(imps, n, true);
    if m == 0 {
        return 0;
    }
    exact_min_cover(&cands, m, m + 1)
}

/// Independent oracle: least total size over all equivalent bases.
pub fn oracle_min_size(imps: &[MaskImp], n: usize) -> usize {
    let (cands, m) = oracle_candidates(imps, n, false);
    if m == 0 {
        return 0;
    }
    let upper: usize = cands.iter().map(|c| c.cost).sum::<usize>() + 1;
    exact_min_cover(&cands, m, upper)
}

/// A random convex geometry on `n` named elements, produced by shrinking the
/// full power-set family while preserving the closed-family characterization:
/// the empty set and the ground set stay, intersections stay inside, and
/// every proper closed set extends by a single element.
pub fn random_convex_geometry(rng: &mut StdRng, n: usize) -> ClosureSystem {
    let ground: u32 = (1 << n) - 1;
    let mut family: std::collections::BTreeSet<u32> = (0..=ground).collect();
    let rounds = 3 << n;
    for _ in 0..rounds {
        if family.len() <= 2 {
            break;
        }
        let idx = rng.gen_range(0..family.len());
        let pick = *family.iter().nth(idx).unwrap();
        if pick == 0 || pick == ground {
            continue;
        }
        if removal_ok(&family, pick, ground) {
            family.remove(&pick);
        }
    }
    let family: Vec<u32> = family.into_iter().collect();
    system_from_family(&family, n)
}

/// Removing `pick` keeps the family a convex-geometry family iff `pick` is
/// not an intersection of two remaining members and every member one element
/// below `pick` keeps an upward extension.
fn removal_ok(family: &std::collections::BTreeSet<u32>, pick: u32, ground: u32) -> bool {
    let supersets: Vec<u32> = family
        .iter()
        .copied()
        .filter(|&s| s != pick && s & pick == pick)
        .collect();
    for (i, &a) in supersets.iter().enumerate() {
        for &b in &supersets[i + 1..] {
            if a & b == pick {
                return false;
            }
        }
    }
    let mut bits = pick;
    while bits != 0 {
        let bit = bits & bits.wrapping_neg();
        bits ^= bit;
        let below = pick ^ bit;
        if !family.contains(&below) {
            continue;
        }
        let mut extendable = false;
        let mut rest = ground & !below;
        while rest != 0 {
            let add = rest & rest.wrapping_neg();
            rest ^= add;
            let up = below | add;
            if up != pick && family.contains(&up) {
                extendable = true;
                break;
            }
        }
        if !extendable {
            return false;
        }
    }
    true
}

/// Builds a library system whose closed sets are exactly `family`.
pub fn system_from_family(family: &[u32], n: usize) -> ClosureSystem {
    let has = |s: u32| family.binary_search(&s).is_ok();
    let ground: u32 = (1 << n) - 1;
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let table = Arc::new(ElementTable::new(names).unwrap());
    let mut imps = Vec::new();
    for w in 0..=ground {
        if has(w) {
            continue;
        }
        let mut phi = ground;
        for &m in family {
            if w & !m == 0 {
                phi &= m;
            }
        }
        let premise = mask_to_set(&table, w, n);
        let conclusion = mask_to_set(&table, phi & !w, n);
        imps.push(Implication::new(premise, conclusion));
    }
    ClosureSystem::from_implications(table, imps)
}

fn mask_to_set(table: &Arc<ElementTable>, mask: u32, n: usize) -> convexgeo_core::ElementSet {
    convexgeo_core::ElementSet::from_indices(table.len(), (0..n).filter(|i| mask >> i & 1 == 1))
}

/// The closed family of a library system as sorted masks, computed with the
/// oracle's own respect test.
pub fn oracle_family(imps: &[MaskImp], n: usize) -> Vec<u32> {
    let ground: u32 = (1 << n) - 1;
    (0..=ground).filter(|&w| mask_respects(imps, w)).collect()
}

/// A random poset on `n` elements as strict pairs over names p0..p{n-1}.
pub fn random_poset(rng: &mut StdRng, n: usize) -> convexgeo_core::poset::Poset {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    convexgeo_core::poset::Poset::new(&names, &pairs).unwrap()
}

/// A random planar configuration of `n` distinct points with small rational
/// coordinates; collinear triples are common by construction.
pub fn random_planar_config(
    rng: &mut StdRng,
    n: usize,
) -> convexgeo_core::generators::PlanarConfig {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let mut pts: Vec<(String, BigRational, BigRational)> = Vec::new();
    let mut used = std::collections::HashSet::new();
    let mut i = 0;
    while pts.len() < n {
        let num_x = rng.gen_range(-6i64..=6);
        let num_y = rng.gen_range(-6i64..=6);
        let den = rng.gen_range(1i64..=2);
        if !used.insert((num_x, num_y, den)) {
            continue;
        }
        let x = BigRational::new(BigInt::from(num_x), BigInt::from(den));
        let y = BigRational::new(BigInt::from(num_y), BigInt::from(den));
        if pts.iter().any(|(_, px, py)| *px == x && *py == y) {
            continue;
        }
        pts.push((format!("g{i}"), x, y));
        i += 1;
    }
    convexgeo_core::generators::PlanarConfig::new(&pts).unwrap()
}
