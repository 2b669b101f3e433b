//! Test-side oracles. Everything here is written from the definitions and
//! deliberately shares no code with the library beyond the data container,
//! so a bug in the library cannot hide in its own reference answer.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use mlcore::data::DataMatrix;
use mlcore::metric::Metric;
use mlcore::rng::SeededRng;
use mlcore::tree::{CoverTree, KdTree, SpaceTree};

/// Lp distance straight from the formula.
pub fn lp(a: &[f64], b: &[f64], p: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    if p == 1.0 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    } else if p == 2.0 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    } else {
        a.iter().zip(b).map(|(x, y)| (x - y).abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Sorted `(index, distance)` lists per query, ties broken by lower index.
/// `query = None` searches the reference set against itself without
/// self-matches.
pub fn knn(reference: &DataMatrix, query: Option<&DataMatrix>, k: usize, p: f64, furthest: bool) -> Vec<Vec<(usize, f64)>> {
    let queries = query.unwrap_or(reference);
    queries
        .points()
        .enumerate()
        .map(|(qi, q)| {
            let mut all: Vec<(usize, f64)> = reference
                .points()
                .enumerate()
                .filter(|&(ri, _)| query.is_some() || ri != qi)
                .map(|(ri, r)| (ri, lp(q, r, p)))
                .collect();
            all.sort_by(|a, b| {
                let by_dist = if furthest { b.1.total_cmp(&a.1) } else { a.1.total_cmp(&b.1) };
                by_dist.then(a.0.cmp(&b.0))
            });
            all.truncate(k);
            all
        })
        .collect()
}

pub fn range(reference: &DataMatrix, query: Option<&DataMatrix>, low: f64, high: f64, p: f64) -> Vec<Vec<(usize, f64)>> {
    let queries = query.unwrap_or(reference);
    queries
        .points()
        .enumerate()
        .map(|(qi, q)| {
            reference
                .points()
                .enumerate()
                .filter(|&(ri, _)| query.is_some() || ri != qi)
                .map(|(ri, r)| (ri, lp(q, r, p)))
                .filter(|&(_, d)| d >= low && d <= high)
                .collect()
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Compares a library k-NN result against oracle lists: identical indices,
/// distances within `tol` relative.
pub fn compare_knn(
    got: &mlcore::neighbor::NeighborResult,
    want: &[Vec<(usize, f64)>],
    tol: f64,
) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{} query rows, expected {}", got.len(), want.len()));
    }
    for (q, w) in want.iter().enumerate() {
        let idx: Vec<usize> = w.iter().map(|x| x.0).collect();
        if got.neighbors(q) != idx.as_slice() {
            return Err(format!("query {q}: indices {:?}, expected {:?}", got.neighbors(q), idx));
        }
        for (g, (_, d)) in got.distances_of(q).iter().zip(w) {
            if !rel_close(*g, *d, tol) {
                return Err(format!("query {q}: distance {g}, expected {d}"));
            }
        }
    }
    Ok(())
}

pub fn compare_range(got: &mlcore::neighbor::RangeResult, want: &[Vec<(usize, f64)>]) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("{} query rows, expected {}", got.len(), want.len()));
    }
    for (q, w) in want.iter().enumerate() {
        let g = got.neighbors(q);
        let gi: Vec<usize> = g.iter().map(|x| x.0).collect();
        let wi: Vec<usize> = w.iter().map(|x| x.0).collect();
        if gi != wi {
            return Err(format!("query {q}: indices {gi:?}, expected {wi:?}"));
        }
        for (a, b) in g.iter().zip(w) {
            if !rel_close(a.1, b.1, 1e-12) {
                return Err(format!("query {q}, point {}: distance {}, expected {}", a.0, a.1, b.1));
            }
        }
    }
    Ok(())
}

/// Uniform points, with a few exact duplicates and a coarse grid mixed in
/// when `awkward` is set so ties and zero-width boxes get exercised.
pub fn random_data(n: usize, d: usize, seed: u64, awkward: bool) -> DataMatrix {
    let mut rng = SeededRng::new(seed);
    let mut values = Vec::with_capacity(n * d);
    for i in 0..n {
        if awkward && i > 0 && rng.below(10) == 0 {
            let src = rng.below(i);
            let row: Vec<f64> = values[src * d..(src + 1) * d].to_vec();
            values.extend(row);
        } else if awkward && rng.below(5) == 0 {
            values.extend((0..d).map(|_| rng.below(4) as f64));
        } else {
            values.extend((0..d).map(|_| rng.next_f64() * 10.0 - 5.0));
        }
    }
    DataMatrix::from_flat(n, d, values).unwrap()
}

/// Checks every kd-tree structural property, returning the first violation.
pub fn check_kd<M: Metric>(tree: &KdTree<'_, M>) -> Result<(), String> {
    let data = tree.data();
    let n = data.len();
    let perm = tree.permutation();
    let mut seen = vec![false; n];
    for &i in perm {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(format!("permutation is not a bijection at {i}"));
        }
    }
    if perm.len() != n {
        return Err("permutation length differs from dataset".into());
    }
    let root = tree.node(tree.root());
    if root.range() != (0..n) {
        return Err(format!("root covers {:?}", root.range()));
    }
    let mut leaf_total = 0;
    for (id, node) in tree.nodes().iter().enumerate() {
        let pts: Vec<&[f64]> = perm[node.range()].iter().map(|&i| data.point(i)).collect();
        for j in 0..data.dim() {
            let lo = pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max);
            if node.bound().lo()[j] != lo || node.bound().hi()[j] != hi {
                return Err(format!("node {id}: bound in dim {j} is not tight"));
            }
        }
        match (node.split(), node.children()) {
            (Some(split), Some([l, r])) => {
                let (left, right) = (tree.node(l), tree.node(r));
                if left.range().start != node.range().start
                    || left.range().end != right.range().start
                    || right.range().end != node.range().end
                    || left.count() == 0
                    || right.count() == 0
                {
                    return Err(format!("node {id}: children do not partition its range"));
                }
                let widest = (0..data.dim()).map(|j| node.bound().width(j)).fold(0.0, f64::max);
                if node.bound().width(split.dim) != widest {
                    return Err(format!("node {id}: split dimension {} is not the widest", split.dim));
                }
                if perm[left.range()].iter().any(|&i| data.point(i)[split.dim] > split.value)
                    || perm[right.range()].iter().any(|&i| data.point(i)[split.dim] <= split.value)
                {
                    return Err(format!("node {id}: points on the wrong side of the split"));
                }
                if !tree.node_points(id).is_empty() {
                    return Err(format!("internal node {id} holds points"));
                }
            }
            (None, None) => {
                leaf_total += node.count();
                let identical = pts.windows(2).all(|w| w[0] == w[1]);
                if node.count() > tree.leaf_size() && !identical {
                    return Err(format!("leaf {id} holds {} points", node.count()));
                }
                if tree.node_points(id) != &perm[node.range()] {
                    return Err(format!("leaf {id}: node_points disagree with the permutation"));
                }
            }
            _ => return Err(format!("node {id}: split and children disagree")),
        }
    }
    if leaf_total != n {
        return Err(format!("leaves hold {leaf_total} points, expected {n}"));
    }
    Ok(())
}

/// Checks nesting, covering, separation, descendant distances and leaf
/// coverage of a cover tree.
pub fn check_cover<M: Metric>(tree: &CoverTree<'_, M>, p: f64) -> Result<(), String> {
    let data = tree.data();
    let base = tree.base();
    let dist = |a: usize, b: usize| lp(data.point(a), data.point(b), p);
    let mut leaves: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reached = HashSet::new();
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        if !reached.insert(id) {
            return Err(format!("node {id} reached twice"));
        }
        let node = tree.node(id);
        let children = node.children();
        if children.is_empty() {
            *leaves.entry(node.point()).or_default() += 1;
            continue;
        }
        if tree.node(children[0]).point() != node.point() {
            return Err(format!("node {id}: first child does not carry the parent point"));
        }
        match node.scale() {
            Some(l) => {
                for &c in children {
                    let cn = tree.node(c);
                    if let Some(cl) = cn.scale() {
                        if cl >= l {
                            return Err(format!("node {id}: child {c} at level {cl} >= {l}"));
                        }
                    }
                    if dist(node.point(), cn.point()) > base.powi(l) {
                        return Err(format!("node {id}: child {c} not covered at level {l}"));
                    }
                }
                for (a, &ca) in children.iter().enumerate() {
                    for &cb in &children[a + 1..] {
                        let d = dist(tree.node(ca).point(), tree.node(cb).point());
                        if d <= base.powi(l - 1) {
                            return Err(format!("node {id}: children {ca} and {cb} only {d} apart"));
                        }
                    }
                }
                let cap = base.powi(l + 1) / (base - 1.0);
                if node.furthest_descendant_distance() > cap {
                    return Err(format!("node {id}: descendant distance exceeds {cap}"));
                }
            }
            None => {
                for &c in children {
                    if !tree.node(c).children().is_empty() || dist(node.point(), tree.node(c).point()) != 0.0 {
                        return Err(format!("duplicate group {id} holds a non-duplicate"));
                    }
                }
            }
        }
        let mut desc = Vec::new();
        tree.descendants(id, &mut desc);
        let fdd = node.furthest_descendant_distance();
        for &q in &desc {
            if dist(node.point(), q) > fdd * (1.0 + 1e-12) {
                return Err(format!("node {id}: descendant {q} beyond recorded distance {fdd}"));
            }
        }
        stack.extend_from_slice(children);
    }
    if reached.len() != tree.node_count() {
        return Err(format!("{} of {} nodes reachable", reached.len(), tree.node_count()));
    }
    let expected: BTreeMap<usize, usize> = (0..data.len()).map(|i| (i, 1)).collect();
    if leaves != expected {
        return Err("leaf points are not exactly the dataset indices".into());
    }
    Ok(())
}

/// Result of the reference Lloyd implementation.
pub struct LloydRun {
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub iterations: usize,
    pub objectives: Vec<f64>,
}

/// Textbook Lloyd's algorithm with Euclidean distance: assign to the
/// nearest centroid (lowest index on ties), move each centroid to its
/// member mean, leave empty clusters where they are. Stops when the summed
/// centroid movement is at most `tol` or the assignments repeat.
pub fn lloyd(points: &[Vec<f64>], init: &[Vec<f64>], max_iter: usize, tol: f64) -> LloydRun {
    let d = points[0].len();
    let mut centroids = init.to_vec();
    let mut previous: Option<Vec<usize>> = None;
    let mut objectives = Vec::new();
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut obj = 0.0;
        let assignments: Vec<usize> = points
            .iter()
            .map(|x| {
                let mut best = 0;
                let mut best_d = f64::INFINITY;
                for (c, centre) in centroids.iter().enumerate() {
                    let dd = lp(x, centre, 2.0);
                    if dd < best_d {
                        best = c;
                        best_d = dd;
                    }
                }
                obj += best_d * best_d;
                best
            })
            .collect();
        objectives.push(obj);
        let mut sums = vec![vec![0.0; d]; centroids.len()];
        let mut counts = vec![0usize; centroids.len()];
        for (x, &c) in points.iter().zip(&assignments) {
            counts[c] += 1;
            for j in 0..d {
                sums[c][j] += x[j];
            }
        }
        let mut moved = 0.0;
        for c in 0..centroids.len() {
            if counts[c] > 0 {
                let next: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
                moved += lp(&centroids[c], &next, 2.0);
                centroids[c] = next;
            }
        }
        let same = previous.as_ref() == Some(&assignments);
        previous = Some(assignments);
        if moved <= tol || same {
            break;
        }
    }
    LloydRun {
        centroids,
        assignments: previous.unwrap(),
        iterations,
        objectives,
    }
}

pub fn rows(data: &DataMatrix) -> Vec<Vec<f64>> {
    data.points().map(<[f64]>::to_vec).collect()
}
