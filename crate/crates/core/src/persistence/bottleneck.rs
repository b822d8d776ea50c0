use std::collections::VecDeque;

use super::PersistenceDiagram;

/// Bottleneck distance under the ℓ∞ ground metric, with matches to the
/// diagonal allowed. Infinite bars are matched among themselves by birth;
/// unequal counts give `+∞`.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    let mut inf_a: Vec<f64> = a.pairs.iter().filter(|p| p.is_infinite()).map(|p| p.birth).collect();
    let mut inf_b: Vec<f64> = b.pairs.iter().filter(|p| p.is_infinite()).map(|p| p.birth).collect();
    if inf_a.len() != inf_b.len() {
        return f64::INFINITY;
    }
    inf_a.sort_by(f64::total_cmp);
    inf_b.sort_by(f64::total_cmp);
    let essential = inf_a
        .iter()
        .zip(&inf_b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let fa: Vec<(f64, f64)> = a.finite().map(|p| (p.birth, p.death)).collect();
    let fb: Vec<(f64, f64)> = b.finite().map(|p| (p.birth, p.death)).collect();
    essential.max(finite_bottleneck(&fa, &fb))
}

/// Per-degree distances for diagram lists indexed by degree; a degree
/// missing from one side is treated as empty.
pub fn bottleneck_per_degree(a: &[PersistenceDiagram], b: &[PersistenceDiagram]) -> Vec<f64> {
    let top = a.iter().chain(b).map(|d| d.degree + 1).max().unwrap_or(0);
    (0..top)
        .map(|k| {
            let pick = |ds: &[PersistenceDiagram]| {
                ds.iter()
                    .find(|d| d.degree == k)
                    .cloned()
                    .unwrap_or_else(|| PersistenceDiagram::new(k, vec![]))
            };
            bottleneck_distance(&pick(a), &pick(b))
        })
        .collect()
}

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn to_diagonal(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Left side: points of `a` then diagonal copies of `b`; right side: points
/// of `b` then diagonal copies of `a`. Binary search over the sorted edge
/// costs for the smallest one admitting a perfect matching.
fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (m, n) = (a.len(), b.len());
    if m + n == 0 {
        return 0.0;
    }
    let size = m + n;
    // cost(i, j) or None if the pair is not an admissible edge
    let cost = |i: usize, j: usize| -> Option<f64> {
        match (i < m, j < n) {
            (true, true) => Some(linf(a[i], b[j])),
            (true, false) => (j - n == i).then(|| to_diagonal(a[i])),
            (false, true) => (i - m == j).then(|| to_diagonal(b[j])),
            (false, false) => Some(0.0),
        }
    };
    let mut candidates: Vec<f64> = Vec::with_capacity(m * n + m + n + 1);
    candidates.push(0.0);
    for i in 0..m {
        for j in 0..n {
            candidates.push(linf(a[i], b[j]));
        }
        candidates.push(to_diagonal(a[i]));
    }
    for q in b {
        candidates.push(to_diagonal(*q));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |eps: f64| -> bool {
        let adj: Vec<Vec<usize>> = (0..size)
            .map(|i| (0..size).filter(|&j| cost(i, j).is_some_and(|c| c <= eps)).collect())
            .collect();
        hopcroft_karp(&adj, size) == size
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Maximum matching size in a bipartite graph with `adj[left] = rights`.
fn hopcroft_karp(adj: &[Vec<usize>], right_size: usize) -> usize {
    const NONE: usize = usize::MAX;
    let left_size = adj.len();
    let mut match_l = vec![NONE; left_size];
    let mut match_r = vec![NONE; right_size];
    let mut dist = vec![0usize; left_size];
    let mut matched = 0;

    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left_size {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        let mut next = vec![0usize; left_size];
        for u in 0..left_size {
            if match_l[u] == NONE
                && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next)
            {
                matched += 1;
            }
        }
    }

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        match_l: &mut [usize],
        match_r: &mut [usize],
        dist: &mut [usize],
        next: &mut [usize],
    ) -> bool {
        while next[u] < adj[u].len() {
            let v = adj[u][next[u]];
            next[u] += 1;
            let w = match_r[v];
            if w == NONE
                || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist, next))
            {
                match_l[u] = v;
                match_r[v] = u;
                return true;
            }
        }
        dist[u] = NONE;
        false
    }
}
