use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{PersistenceDiagram, PersistencePair};
use crate::{DistanceMatrix, Error, Result};

pub const MAX_SUPPORTED_DIM: usize = 2;

/// `min_i max_j D_ij`: beyond this radius the Rips complex is a cone.
pub fn enclosing_radius(d: &DistanceMatrix<f64>) -> f64 {
    (0..d.len())
        .map(|i| d.row(i).iter().copied().fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Simplex with its filtration value. Indices use the combinatorial number
/// system on descending vertex tuples.
#[derive(Clone, Copy, Debug)]
struct Entry {
    diam: f64,
    index: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for Entry {}

/// Heap order: the pivot (earliest in the filtration) is the maximum, i.e.
/// smallest diameter, then largest index.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .diam
            .total_cmp(&self.diam)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Column processing order: decreasing diameter, then increasing index.
fn column_order(a: &Entry, b: &Entry) -> Ordering {
    b.diam.total_cmp(&a.diam).then(a.index.cmp(&b.index))
}

struct Binomial {
    table: Vec<Vec<u64>>,
}

impl Binomial {
    fn new(n: usize, kmax: usize) -> Self {
        let mut table = vec![vec![0u64; n + 1]; kmax + 1];
        for v in 0..=n {
            table[0][v] = 1;
        }
        for k in 1..=kmax {
            for v in 1..=n {
                table[k][v] = table[k][v - 1] + table[k - 1][v - 1];
            }
        }
        Self { table }
    }

    #[inline]
    fn get(&self, v: usize, k: usize) -> u64 {
        self.table[k][v]
    }
}

struct Complex<'a> {
    d: &'a DistanceMatrix<f64>,
    n: usize,
    threshold: f64,
    binom: Binomial,
    /// Per vertex, the vertices within the threshold in decreasing order.
    near: Vec<Vec<usize>>,
    /// Per vertex, `(distance, vertex)` within the threshold by increasing
    /// distance.
    by_distance: Vec<Vec<(f64, u32)>>,
}

impl<'a> Complex<'a> {
    fn new(d: &'a DistanceMatrix<f64>, threshold: f64, maxdim: usize) -> Self {
        let n = d.len();
        let near = (0..n)
            .map(|i| {
                (0..n)
                    .rev()
                    .filter(|&j| j != i && d.get(i, j) <= threshold)
                    .collect()
            })
            .collect();
        let by_distance = (0..n)
            .map(|i| {
                let mut v: Vec<(f64, u32)> = (0..n)
                    .filter(|&j| j != i && d.get(i, j) <= threshold)
                    .map(|j| (d.get(i, j), j as u32))
                    .collect();
                v.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                v
            })
            .collect();
        Self {
            d,
            n,
            threshold,
            binom: Binomial::new(n, maxdim + 2),
            near,
            by_distance,
        }
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.d.get(i, j)
    }

    /// Largest `v < top` with `C(v, k) ≤ idx`.
    fn max_vertex(&self, idx: u64, k: usize, top: usize) -> usize {
        let (mut lo, mut hi) = (k - 1, top - 1);
        while lo < hi {
            let mid = hi - (hi - lo) / 2;
            if self.binom.get(mid, k) <= idx {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// Vertices in decreasing order.
    fn vertices(&self, mut idx: u64, dim: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut top = self.n;
        for k in (1..=dim + 1).rev() {
            let v = self.max_vertex(idx, k, top);
            out.push(v);
            idx -= self.binom.get(v, k);
            top = v;
        }
    }

    /// Cofacets within the threshold in decreasing index order. With
    /// `above_only`, only cofacets whose new vertex exceeds every vertex of
    /// the simplex (each coface is then produced from exactly one face).
    /// `f` returns false to stop early.
    fn for_each_cofacet(
        &self,
        s: &[usize],
        diam: f64,
        above_only: bool,
        mut f: impl FnMut(Entry) -> bool,
    ) {
        let len = s.len();
        let dim = len - 1;
        let pivot_vertex = *s
            .iter()
            .min_by_key(|&&u| self.near[u].len())
            .expect("nonempty simplex");
        let mut p = 0;
        let mut above = 0u64;
        let mut below: u64 = s
            .iter()
            .enumerate()
            .map(|(i, &u)| self.binom.get(u, dim + 1 - i))
            .sum();
        'candidates: for &v in &self.near[pivot_vertex] {
            if above_only && v < s[0] {
                break;
            }
            while p < len && s[p] > v {
                above += self.binom.get(s[p], dim + 2 - p);
                below -= self.binom.get(s[p], dim + 1 - p);
                p += 1;
            }
            if p < len && s[p] == v {
                continue;
            }
            let mut cd = diam;
            for &u in s {
                let x = self.dist(u, v);
                if x > self.threshold {
                    continue 'candidates;
                }
                cd = cd.max(x);
            }
            let index = above + self.binom.get(v, dim + 2 - p) + below;
            if !f(Entry { diam: cd, index }) {
                return;
            }
        }
    }
}

impl Complex<'_> {
    fn diameter_of(&self, vs: &[usize]) -> f64 {
        let mut d = 0.0f64;
        for (a, &i) in vs.iter().enumerate() {
            for &j in &vs[a + 1..] {
                d = d.max(self.dist(i, j));
            }
        }
        d
    }

    /// The facet of equal diameter that comes last in the filtration
    /// (smallest index), if any.
    fn zero_pivot_facet(&self, s: &Entry, dim: usize) -> Option<Entry> {
        let mut vs = Vec::with_capacity(dim + 1);
        self.vertices(s.index, dim, &mut vs);
        let mut rest = Vec::with_capacity(dim);
        // removing larger vertices first gives increasing facet indices
        for skip in 0..vs.len() {
            rest.clear();
            rest.extend(vs.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v));
            if self.diameter_of(&rest) == s.diam {
                let index = rest
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| self.binom.get(v, dim - i))
                    .sum();
                return Some(Entry { diam: s.diam, index });
            }
        }
        None
    }

    /// The cofacet of equal diameter that comes first in the filtration
    /// (largest index), if any. Only vertices within `diam` of every vertex
    /// qualify, and the index grows with the added vertex.
    fn zero_pivot_cofacet(&self, s: &Entry, dim: usize) -> Option<Entry> {
        let mut vs = Vec::with_capacity(dim + 1);
        self.vertices(s.index, dim, &mut vs);
        let within = |u: usize| self.by_distance[u].partition_point(|&(x, _)| x <= s.diam);
        let (u, count) = vs
            .iter()
            .map(|&u| (u, within(u)))
            .min_by_key(|&(_, c)| c)
            .expect("nonempty simplex");
        let admissible = |v: usize| !vs.contains(&v) && vs.iter().all(|&w| self.dist(w, v) <= s.diam);
        // few candidates: scan them all; many: walk down from the top
        // vertex and stop at the first admissible one
        let best = if 8 * count < self.near[u].len() {
            self.by_distance[u][..count]
                .iter()
                .map(|&(_, v)| v as usize)
                .filter(|&v| admissible(v))
                .max()?
        } else {
            self.near[u].iter().copied().find(|&v| admissible(v))?
        };
        let mut all = vs.clone();
        all.push(best);
        all.sort_unstable_by(|a, b| b.cmp(a));
        let index = all
            .iter()
            .enumerate()
            .map(|(i, &v)| self.binom.get(v, dim + 2 - i))
            .sum();
        Some(Entry { diam: s.diam, index })
    }

    /// `τ` paired with its zero-pivot facet `σ` whose zero-pivot cofacet is
    /// `τ` again: such pairs have zero persistence and need no column.
    fn zero_apparent_facet(&self, s: &Entry, dim: usize) -> Option<Entry> {
        let f = self.zero_pivot_facet(s, dim)?;
        (self.zero_pivot_cofacet(&f, dim - 1)?.index == s.index).then_some(f)
    }

    fn zero_apparent_cofacet(&self, s: &Entry, dim: usize) -> Option<Entry> {
        let c = self.zero_pivot_cofacet(s, dim)?;
        (self.zero_pivot_facet(&c, dim + 1)?.index == s.index).then_some(c)
    }
}

/// Pop the pivot of a `Z/2` heap column, cancelling repeated entries.
fn pop_pivot(heap: &mut BinaryHeap<Entry>) -> Option<Entry> {
    loop {
        let top = heap.pop()?;
        match heap.peek() {
            Some(next) if next.index == top.index => {
                heap.pop();
            }
            _ => return Some(top),
        }
    }
}

fn get_pivot(heap: &mut BinaryHeap<Entry>) -> Option<Entry> {
    let p = pop_pivot(heap);
    if let Some(e) = p {
        heap.push(e);
    }
    p
}

struct Find {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Find {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn root(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.root(a), self.root(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            Ordering::Less => self.parent[a] = b,
            Ordering::Greater => self.parent[b] = a,
            Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// Persistence diagrams in degrees `0..=maxdim`.
///
/// The threshold defaults to the enclosing radius, where the complex becomes
/// a cone and no homology is lost; a smaller cap truncates the filtration
/// and classes alive at the cap are reported with infinite death.
pub fn vr_persistence(
    d: &DistanceMatrix<f64>,
    maxdim: usize,
    threshold: Option<f64>,
) -> Result<Vec<PersistenceDiagram>> {
    if maxdim > MAX_SUPPORTED_DIM {
        return Err(Error::Parameter(format!(
            "homology up to degree {MAX_SUPPORTED_DIM} is supported, got {maxdim}"
        )));
    }
    if let Some(t) = threshold {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Parameter(format!("threshold must be nonnegative, got {t}")));
        }
    }
    let n = d.len();
    if n == 0 {
        return Ok((0..=maxdim).map(|k| PersistenceDiagram::new(k, vec![])).collect());
    }
    let enclosing = enclosing_radius(d);
    let threshold = threshold.map_or(enclosing, |t| t.min(enclosing));
    let cx = Complex::new(d, threshold, maxdim);

    let mut diagrams = Vec::with_capacity(maxdim + 1);
    let (h0, mut columns, edges) = degree_zero(&cx, maxdim);
    diagrams.push(PersistenceDiagram::new(0, h0));

    let mut simplices = edges;
    for dim in 1..=maxdim {
        let mut pivots = FxHashMap::default();
        let pairs = reduce(&cx, dim, &columns, &mut pivots);
        diagrams.push(PersistenceDiagram::new(dim, pairs));
        if dim < maxdim {
            let (next_columns, next_simplices) =
                assemble(&cx, dim, &simplices, &pivots, dim + 1 < maxdim);
            columns = next_columns;
            simplices = next_simplices;
        }
    }
    Ok(diagrams)
}

/// Kruskal on edges in filtration order. Returns the degree-0 bars, the
/// degree-1 columns (non-tree edges outside zero apparent pairs) and the
/// full edge list.
fn degree_zero(cx: &Complex, maxdim: usize) -> (Vec<PersistencePair>, Vec<Entry>, Vec<Entry>) {
    let n = cx.n;
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            let diam = cx.dist(i, j);
            if diam <= cx.threshold {
                edges.push(Entry {
                    diam,
                    index: cx.binom.get(j, 2) + i as u64,
                });
            }
        }
    }
    // filtration order: increasing diameter, decreasing index
    edges.sort_unstable_by(|a, b| column_order(b, a));

    let mut uf = Find::new(n);
    let mut bars = Vec::new();
    let mut columns = Vec::new();
    let mut vs = Vec::with_capacity(2);
    for &e in &edges {
        cx.vertices(e.index, 1, &mut vs);
        if uf.union(vs[0], vs[1]) {
            if e.diam > 0.0 {
                bars.push(PersistencePair::new(0.0, e.diam));
            }
        } else if maxdim > 0 && cx.zero_apparent_cofacet(&e, 1).is_none() {
            columns.push(e);
        }
    }
    for v in 0..n {
        if uf.root(v) == v {
            bars.push(PersistencePair::new(0.0, f64::INFINITY));
        }
    }
    columns.sort_unstable_by(column_order);
    (bars, columns, edges)
}

/// All `(dim + 1)`-simplices within the threshold (when `keep_all`), and
/// those that are neither pivots of the degree-`dim` reduction nor part of
/// a zero apparent pair, in column order.
fn assemble(
    cx: &Complex,
    dim: usize,
    simplices: &[Entry],
    pivots: &FxHashMap<u64, usize>,
    keep_all: bool,
) -> (Vec<Entry>, Vec<Entry>) {
    let mut columns = Vec::new();
    let mut all = Vec::new();
    let mut vs = Vec::with_capacity(dim + 1);
    // edge indices are dense, so the zero-pivot cofacet of every edge is
    // computed once instead of once per triangle
    let edge_cofacet: Option<Vec<u64>> = (dim == 1).then(|| {
        let mut table = vec![u64::MAX; cx.binom.get(cx.n, 2) as usize];
        for e in simplices {
            if let Some(c) = cx.zero_pivot_cofacet(e, 1) {
                table[e.index as usize] = c.index;
            }
        }
        table
    });
    let apparent_facet = |c: &Entry| match &edge_cofacet {
        Some(table) => cx
            .zero_pivot_facet(c, 2)
            .is_some_and(|f| table[f.index as usize] == c.index),
        None => cx.zero_apparent_facet(c, dim + 1).is_some(),
    };
    for s in simplices {
        cx.vertices(s.index, dim, &mut vs);
        cx.for_each_cofacet(&vs, s.diam, true, |c| {
            if keep_all {
                all.push(c);
            }
            if !pivots.contains_key(&c.index)
                && !apparent_facet(&c)
                && cx.zero_apparent_cofacet(&c, dim + 1).is_none()
            {
                columns.push(c);
            }
            true
        });
    }
    columns.sort_unstable_by(column_order);
    (columns, all)
}

/// Cohomology reduction of the degree-`dim` columns. Fills `pivots` with the
/// (dim+1)-simplices that appear as pivots.
fn reduce(
    cx: &Complex,
    dim: usize,
    columns: &[Entry],
    pivots: &mut FxHashMap<u64, usize>,
) -> Vec<PersistencePair> {
    let mut bars = Vec::new();
    let mut reduction: FxHashMap<usize, Vec<Entry>> = FxHashMap::default();
    let mut heap = BinaryHeap::new();
    let mut added: Vec<Entry> = Vec::new();
    let mut cofacets: Vec<Entry> = Vec::new();
    let mut vs = Vec::with_capacity(dim + 1);

    let push_coboundary = |s: &Entry, heap: &mut BinaryHeap<Entry>, vs: &mut Vec<usize>| {
        cx.vertices(s.index, dim, vs);
        cx.for_each_cofacet(vs, s.diam, false, |c| {
            heap.push(c);
            true
        });
    };

    for (j, col) in columns.iter().enumerate() {
        heap.clear();
        added.clear();

        // Coboundary of the column itself; an emergent pair (a cofacet of
        // equal diameter that is first in the filtration and unclaimed)
        // needs no reduction.
        cofacets.clear();
        cx.vertices(col.index, dim, &mut vs);
        let mut check_emergent = true;
        let mut emergent = None;
        cx.for_each_cofacet(&vs, col.diam, false, |c| {
            cofacets.push(c);
            if check_emergent && c.diam == col.diam {
                if !pivots.contains_key(&c.index) && cx.zero_apparent_facet(&c, dim + 1).is_none() {
                    emergent = Some(c);
                    return false;
                }
                check_emergent = false;
            }
            true
        });
        let mut pivot = match emergent {
            Some(c) => Some(c),
            None => {
                heap.extend(cofacets.iter().copied());
                get_pivot(&mut heap)
            }
        };

        loop {
            match pivot {
                Some(p) => {
                    if let Some(&k) = pivots.get(&p.index) {
                        push_coboundary(&columns[k], &mut heap, &mut vs);
                        added.push(columns[k]);
                        for e in reduction.get(&k).into_iter().flatten() {
                            push_coboundary(e, &mut heap, &mut vs);
                            added.push(*e);
                        }
                        pivot = get_pivot(&mut heap);
                    } else if let Some(f) = cx.zero_apparent_facet(&p, dim + 1) {
                        // the skipped column of `f` has pivot `p`
                        push_coboundary(&f, &mut heap, &mut vs);
                        added.push(f);
                        pivot = get_pivot(&mut heap);
                    } else {
                        if p.diam > col.diam {
                            bars.push(PersistencePair::new(col.diam, p.diam));
                        }
                        pivots.insert(p.index, j);
                        let kept = cancel_pairs(&mut added);
                        if !kept.is_empty() {
                            reduction.insert(j, kept);
                        }
                        break;
                    }
                }
                None => {
                    bars.push(PersistencePair::new(col.diam, f64::INFINITY));
                    break;
                }
            }
        }
    }
    bars
}

fn cancel_pairs(entries: &mut [Entry]) -> Vec<Entry> {
    entries.sort_unstable_by_key(|e| e.index);
    let mut out: Vec<Entry> = Vec::with_capacity(entries.len());
    for &e in entries.iter() {
        if out.last().is_some_and(|l| l.index == e.index) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}
