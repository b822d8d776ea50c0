use std::collections::HashMap;

use super::{PersistenceDiagram, PersistencePair, MAX_SUPPORTED_DIM};
use crate::{DistanceMatrix, Error, Result};

pub const BRUTE_FORCE_MAX_POINTS: usize = 40;

struct Simplex {
    vertices: Vec<usize>,
    value: f64,
}

fn subsets(n: usize, size: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::with_capacity(size), out);
}

/// Standard column reduction of the full boundary matrix of the Rips
/// complex on all vertices, simplices ordered by (value, dimension,
/// lexicographic vertex tuple).
pub fn brute_force_persistence(d: &DistanceMatrix<f64>, maxdim: usize) -> Result<Vec<PersistenceDiagram>> {
    let n = d.len();
    if n > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::Size(format!(
            "brute-force persistence handles at most {BRUTE_FORCE_MAX_POINTS} points, got {n}"
        )));
    }
    if maxdim > MAX_SUPPORTED_DIM {
        return Err(Error::Parameter(format!(
            "homology up to degree {MAX_SUPPORTED_DIM} is supported, got {maxdim}"
        )));
    }

    let mut tuples = Vec::new();
    for size in 1..=(maxdim + 2).min(n) {
        subsets(n, size, &mut tuples);
    }
    let mut simplices: Vec<Simplex> = tuples
        .into_iter()
        .map(|vertices| {
            let mut value = 0.0f64;
            for (a, &i) in vertices.iter().enumerate() {
                for &j in &vertices[a + 1..] {
                    value = value.max(d.get(i, j));
                }
            }
            Simplex { vertices, value }
        })
        .collect();
    simplices.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.vertices.len().cmp(&b.vertices.len()))
            .then(a.vertices.cmp(&b.vertices))
    });
    let position: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(k, s)| (s.vertices.as_slice(), k))
        .collect();

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            if s.vertices.len() == 1 {
                return Vec::new();
            }
            let mut col: Vec<usize> = (0..s.vertices.len())
                .map(|skip| {
                    let face: Vec<usize> = s
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    position[face.as_slice()]
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut owner_of_low: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; simplices.len()];
    let mut bars: Vec<Vec<PersistencePair>> = vec![Vec::new(); maxdim + 1];
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner_of_low.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            owner_of_low.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let degree = simplices[low].vertices.len() - 1;
            let (birth, death) = (simplices[low].value, simplices[j].value);
            if degree <= maxdim && death > birth {
                bars[degree].push(PersistencePair::new(birth, death));
            }
        }
    }
    for (k, s) in simplices.iter().enumerate() {
        let degree = s.vertices.len() - 1;
        if !paired[k] && degree <= maxdim && columns[k].is_empty() {
            bars[degree].push(PersistencePair::new(s.value, f64::INFINITY));
        }
    }
    Ok(bars
        .into_iter()
        .enumerate()
        .map(|(k, b)| PersistenceDiagram::new(k, b))
        .collect())
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
